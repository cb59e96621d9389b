//! Text and JSON formats for field elements, maps, points and continued
//! fractions.
//!
//! Field elements are written `a`, `b*sqrt(D)`, `a+b*sqrt(D)` or
//! `a-b*sqrt(D)` with rational `a`, `b`; maps as `a,b;c,d`; points as a field
//! element or `inf`; Berkovich points additionally as `gauss` or
//! `D(center, p^(e))`, where `p` may be spelled as the prime itself.

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::berkovich::BerkPoint;
use crate::cfrac::CFSpec;
use crate::error::{Error, Result};
use crate::moebius::MobiusMap;
use crate::padic::{Exponent, FieldElem, PadicContext, Rational};
use crate::projective::ProjPoint;

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || perr(format!("bad rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: num_bigint::BigInt = n.parse().map_err(|_| bad())?;
    let d: num_bigint::BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// Parses a field element; a square root must match `disc` when given.
pub fn parse_elem(s: &str, disc: Option<i64>) -> Result<FieldElem> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(perr("empty field element"));
    }
    let bytes = t.as_bytes();
    let (mut re, mut irr) = (Rational::zero(), Rational::zero());
    let mut root: Option<i64> = None;
    let mut i = 0;
    while i < bytes.len() {
        let mut sign = Rational::one();
        if bytes[i] == b'+' || bytes[i] == b'-' {
            if bytes[i] == b'-' {
                sign = -sign;
            }
            i += 1;
        } else if i > 0 {
            return Err(perr(format!("expected + or - in {s:?}")));
        }
        let start = i;
        while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'/') {
            i += 1;
        }
        let coeff = if i > start { parse_rational(&t[start..i])? } else { Rational::one() };
        let rest = &t[i..];
        let sqrt_at = if rest.starts_with("*sqrt(") {
            Some(i + 6)
        } else if i == start && rest.starts_with("sqrt(") {
            Some(i + 5)
        } else {
            None
        };
        match sqrt_at {
            None if i == start => return Err(perr(format!("bad field element {s:?}"))),
            None => re += sign * coeff,
            Some(open) => {
                let close = t[open..].find(')').map(|k| open + k).ok_or_else(|| perr(format!("unclosed sqrt in {s:?}")))?;
                let d: i64 = t[open..close].parse().map_err(|_| perr(format!("bad discriminant in {s:?}")))?;
                if root.is_some_and(|r| r != d) {
                    return Err(perr(format!("two different square roots in {s:?}")));
                }
                root = Some(d);
                irr += sign * coeff;
                i = close + 1;
            }
        }
    }
    match (root, disc) {
        (Some(d), e) if e != Some(d) => Err(Error::unsupported(d)),
        (Some(d), _) => Ok(FieldElem::new(re, irr, Some(d))),
        (None, _) => Ok(FieldElem::rational(re)),
    }
}

pub fn parse_elem_in(ctx: &PadicContext, s: &str) -> Result<FieldElem> {
    parse_elem(s, ctx.disc())
}

/// `a,b;c,d`.
pub fn parse_map(ctx: &PadicContext, s: &str) -> Result<MobiusMap> {
    let rows: Vec<&str> = s.split(';').collect();
    let cells: Vec<&str> = rows.iter().flat_map(|r| r.split(',')).collect();
    if rows.len() != 2 || cells.len() != 4 {
        return Err(perr(format!("a map is written a,b;c,d, got {s:?}")));
    }
    let e: Vec<FieldElem> = cells.iter().map(|c| parse_elem_in(ctx, c)).collect::<Result<_>>()?;
    let [a, b, c, d]: [FieldElem; 4] = e.try_into().expect("four entries");
    MobiusMap::new(a, b, c, d)
}

pub fn parse_point(ctx: &PadicContext, s: &str) -> Result<ProjPoint> {
    match s.trim() {
        "inf" | "infinity" | "∞" => Ok(ProjPoint::Infinity),
        t => Ok(ProjPoint::Finite(parse_elem_in(ctx, t)?)),
    }
}

fn parse_exponent(s: &str) -> Result<Exponent> {
    let t = s.trim().trim_start_matches('(').trim_end_matches(')');
    let bad = || perr(format!("bad exponent {s:?}"));
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.parse().map_err(|_| bad())?, d.parse().map_err(|_| bad())?),
        None => (t.parse().map_err(|_| bad())?, 1),
    };
    if d == 0 {
        return Err(bad());
    }
    Ok(Exponent::new(n, d))
}

/// Radius written as `p^e`, `<prime>^e` or a rational power of p.
fn parse_radius(ctx: &PadicContext, s: &str) -> Result<Exponent> {
    let t = s.trim();
    if let Some((base, e)) = t.split_once('^') {
        if base == "p" || base == ctx.p().to_string() {
            return parse_exponent(e);
        }
        return Err(perr(format!("radius base must be p = {}, got {base:?}", ctx.p())));
    }
    let r = parse_rational(t)?;
    let v = ctx.vp(&r).ok_or_else(|| perr("zero radius; write the point itself"))?;
    if r != *ctx.p_power(v).re() || r <= Rational::zero() {
        return Err(perr(format!("radius {t} is not a power of {}", ctx.p())));
    }
    Ok(Exponent::from_integer(v))
}

pub fn parse_berk(ctx: &PadicContext, s: &str) -> Result<BerkPoint> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("gauss") {
        return Ok(BerkPoint::gauss());
    }
    if let Some(inner) = t.strip_prefix("D(").and_then(|r| r.strip_suffix(')')) {
        let (center, radius) = inner.rsplit_once(',').ok_or_else(|| perr(format!("bad disk {t:?}")))?;
        return Ok(BerkPoint::disk(parse_elem_in(ctx, center)?, parse_radius(ctx, radius)?));
    }
    Ok(BerkPoint::TypeI(parse_point(ctx, t)?))
}

pub fn map_to_json(g: &MobiusMap) -> Value {
    let [a, b, c, d] = g.entries();
    json!({"a": a.to_string(), "b": b.to_string(), "c": c.to_string(), "d": d.to_string()})
}

pub fn map_from_json(ctx: &PadicContext, v: &Value) -> Result<MobiusMap> {
    let field = |k: &str| -> Result<FieldElem> {
        let s = v.get(k).and_then(Value::as_str).ok_or_else(|| perr(format!("map object needs string field {k:?}")))?;
        parse_elem_in(ctx, s)
    };
    MobiusMap::new(field("a")?, field("b")?, field("c")?, field("d")?)
}

/// A JSON array of map objects.
pub fn maps_from_json(ctx: &PadicContext, text: &str) -> Result<Vec<MobiusMap>> {
    let v: Value = serde_json::from_str(text).map_err(|e| perr(e.to_string()))?;
    v.as_array().ok_or_else(|| perr("expected a JSON array of maps"))?.iter().map(|m| map_from_json(ctx, m)).collect()
}

pub fn point_to_json(z: &ProjPoint) -> Value {
    json!(z.to_string())
}

pub fn berk_to_json(ctx: &PadicContext, x: &BerkPoint) -> Value {
    match ctx.normalize_point(x) {
        BerkPoint::TypeI(z) => json!({"type": "I", "point": z.to_string()}),
        BerkPoint::TypeII { center, radius_exp } => json!({
            "type": "II",
            "center": center.to_string(),
            "radius_exp": radius_exp.to_string(),
            "display": ctx.point_string(x),
        }),
    }
}

pub fn berk_from_json(ctx: &PadicContext, v: &Value) -> Result<BerkPoint> {
    let field = |k: &str| v.get(k).and_then(Value::as_str).ok_or_else(|| perr(format!("point object needs field {k:?}")));
    match field("type")? {
        "I" => Ok(BerkPoint::TypeI(parse_point(ctx, field("point")?)?)),
        "II" => Ok(BerkPoint::disk(parse_elem_in(ctx, field("center")?)?, parse_exponent(field("radius_exp")?)?)),
        other => Err(perr(format!("unknown point type {other:?}"))),
    }
}

/// `{"a": [...], "b": [...]}` with field-element strings.
pub fn cf_from_json(ctx: &PadicContext, text: &str) -> Result<CFSpec> {
    let v: Value = serde_json::from_str(text).map_err(|e| perr(e.to_string()))?;
    let list = |k: &str| -> Result<Vec<FieldElem>> {
        v.get(k)
            .and_then(Value::as_array)
            .ok_or_else(|| perr(format!("continued fraction needs an array {k:?}")))?
            .iter()
            .map(|x| x.as_str().ok_or_else(|| perr("entries are strings")).and_then(|s| parse_elem_in(ctx, s)))
            .collect()
    };
    CFSpec::new(list("a")?, list("b")?)
}

pub fn cf_to_json(spec: &CFSpec) -> Value {
    let strs = |xs: &[FieldElem]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    json!({"a": strs(spec.a()), "b": strs(spec.b())})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::rat;

    #[test]
    fn elements() {
        assert_eq!(parse_elem("3/4", None).unwrap(), FieldElem::from_ratio(3, 4));
        assert_eq!(parse_elem(" -2 ", None).unwrap(), FieldElem::from_i64(-2));
        let w = parse_elem("-1/2+1/2*sqrt(-3)", Some(-3)).unwrap();
        assert_eq!(w, FieldElem::new(rat(-1, 2), rat(1, 2), Some(-3)));
        assert_eq!(parse_elem(&w.to_string(), Some(-3)).unwrap(), w);
        assert_eq!(parse_elem("-sqrt(5)", Some(5)).unwrap(), FieldElem::new(rat(0, 1), rat(-1, 1), Some(5)));
        assert!(parse_elem("sqrt(5)", None).unwrap_err() == Error::unsupported(5));
        assert!(parse_elem("1/0", None).unwrap_err().is_parse());
        assert!(parse_elem("x", None).unwrap_err().is_parse());
        assert!(parse_elem("", None).unwrap_err().is_parse());
    }

    #[test]
    fn maps_and_points() {
        let c = PadicContext::new(3, None).unwrap();
        let g = parse_map(&c, "1, 1; 0, 1").unwrap();
        assert_eq!(g, MobiusMap::from_ints(1, 1, 0, 1).unwrap());
        assert_eq!(map_from_json(&c, &map_to_json(&g)).unwrap(), g);
        assert!(parse_map(&c, "1,2,3").unwrap_err().is_parse());
        assert!(matches!(parse_map(&c, "1,1;1,1"), Err(Error::DegenerateConfiguration(_))));
        let x = parse_berk(&c, "D(2, 3^(-1))").unwrap();
        assert!(c.berk_eq(&x, &BerkPoint::disk_int(2, -1)).unwrap());
        assert!(c.berk_eq(&parse_berk(&c, "D(2, p^-1)").unwrap(), &x).unwrap());
        assert!(c.berk_eq(&parse_berk(&c, "D(2, 1/3)").unwrap(), &x).unwrap());
        assert!(c.berk_eq(&parse_berk(&c, &c.point_string(&x)).unwrap(), &x).unwrap());
        assert!(c.berk_eq(&berk_from_json(&c, &berk_to_json(&c, &x)).unwrap(), &x).unwrap());
        assert!(c.berk_eq(&parse_berk(&c, "gauss").unwrap(), &BerkPoint::gauss()).unwrap());
        assert!(matches!(parse_berk(&c, "inf").unwrap(), BerkPoint::TypeI(ProjPoint::Infinity)));
        assert!(parse_berk(&c, "D(2, 2/3)").unwrap_err().is_parse());
    }

    #[test]
    fn fractions() {
        let c = PadicContext::new(3, None).unwrap();
        let s = cf_from_json(&c, r#"{"a": ["1", "3"], "b": ["0", "1/2"]}"#).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(cf_from_json(&c, &cf_to_json(&s).to_string()).unwrap(), s);
        assert!(cf_from_json(&c, r#"{"a": ["0"], "b": ["1"]}"#).is_err());
    }
}
