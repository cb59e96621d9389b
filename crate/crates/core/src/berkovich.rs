//! Type I and type II points of the Berkovich projective line, the tree
//! order, the hyperbolic metric and the action of Möbius maps.
//!
//! A type II point is the closed disk `D(a, p^s)` for rational `s`. Joins
//! and medians are computed in the affine tree rooted toward `inf`; when a
//! computation involves `inf` itself the points are first moved by
//! `z -> 1/(z - t)` for a suitable rational `t`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::moebius::MobiusMap;
use crate::padic::{Exponent, FieldElem, Magnitude, PadicContext, Rational};
use crate::projective::ProjPoint;

#[derive(Clone, Debug)]
pub enum BerkPoint {
    TypeI(ProjPoint),
    TypeII { center: FieldElem, radius_exp: Exponent },
}

impl BerkPoint {
    pub fn gauss() -> Self {
        Self::disk(FieldElem::zero(), Exponent::zero())
    }

    /// `D(center, p^radius_exp)`.
    pub fn disk(center: FieldElem, radius_exp: Exponent) -> Self {
        BerkPoint::TypeII { center, radius_exp }
    }

    pub fn disk_int(center: i64, radius_exp: i64) -> Self {
        Self::disk(FieldElem::from_i64(center), Exponent::from_integer(radius_exp))
    }

    pub fn infinity() -> Self {
        BerkPoint::TypeI(ProjPoint::Infinity)
    }

    pub fn is_type_ii(&self) -> bool {
        matches!(self, BerkPoint::TypeII { .. })
    }

    /// Radius exponent, `None` for type I points (radius zero).
    pub fn radius_exp(&self) -> Option<Exponent> {
        match self {
            BerkPoint::TypeII { radius_exp, .. } => Some(*radius_exp),
            BerkPoint::TypeI(_) => None,
        }
    }

    fn is_infinity(&self) -> bool {
        matches!(self, BerkPoint::TypeI(ProjPoint::Infinity))
    }

    /// A point of the disk, or the type I point itself.
    fn center(&self) -> Option<&FieldElem> {
        match self {
            BerkPoint::TypeII { center, .. } => Some(center),
            BerkPoint::TypeI(ProjPoint::Finite(z)) => Some(z),
            BerkPoint::TypeI(ProjPoint::Infinity) => None,
        }
    }
}

impl From<ProjPoint> for BerkPoint {
    fn from(z: ProjPoint) -> Self {
        BerkPoint::TypeI(z)
    }
}

impl fmt::Display for BerkPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BerkPoint::TypeI(z) => write!(f, "{z}"),
            BerkPoint::TypeII { center, radius_exp } => write!(f, "D({center}, p^({radius_exp}))"),
        }
    }
}

/// The arc `[a, b]` of the tree.
#[derive(Clone, Debug)]
pub struct Segment {
    pub a: BerkPoint,
    pub b: BerkPoint,
}

impl Segment {
    pub fn new(a: BerkPoint, b: BerkPoint) -> Self {
        Segment { a, b }
    }
}

fn max_opt(x: Option<Exponent>, y: Option<Exponent>) -> Option<Exponent> {
    match (x, y) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (a, None) => a,
        (None, b) => b,
    }
}

impl PadicContext {
    fn log_abs(&self, x: &FieldElem) -> Result<Option<Exponent>> {
        let m = self.abs(x)?;
        Ok(if m.is_zero() { None } else { Some(m.exponent().expect("pure power")) })
    }

    /// Equality of Berkovich points.
    pub fn berk_eq(&self, x: &BerkPoint, y: &BerkPoint) -> Result<bool> {
        Ok(match (x, y) {
            (BerkPoint::TypeI(z), BerkPoint::TypeI(w)) => z == w,
            (BerkPoint::TypeII { center: a, radius_exp: s }, BerkPoint::TypeII { center: b, radius_exp: t }) => {
                s == t && self.log_abs(&(a - b))?.is_none_or(|e| e <= *s)
            }
            _ => false,
        })
    }

    /// Smallest point above both arguments in the tree rooted at `inf`.
    pub fn join(&self, x: &BerkPoint, y: &BerkPoint) -> Result<BerkPoint> {
        let (a, b) = match (x.center(), y.center()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::DegenerateConfiguration("join with inf".into())),
        };
        if let (BerkPoint::TypeI(z), BerkPoint::TypeI(w)) = (x, y) {
            if z == w {
                return Ok(x.clone());
            }
        }
        let e = max_opt(max_opt(x.radius_exp(), y.radius_exp()), self.log_abs(&(a - b))?);
        Ok(BerkPoint::disk(a.clone(), e.expect("distinct points have a join")))
    }

    /// Tree order `x <= y`.
    pub fn tree_le(&self, x: &BerkPoint, y: &BerkPoint) -> Result<bool> {
        if y.is_infinity() {
            return Ok(true);
        }
        if x.is_infinity() {
            return Ok(false);
        }
        self.berk_eq(&self.join(x, y)?, y)
    }

    /// Hyperbolic distance between type II points, in base-p logarithms.
    pub fn hyp_dist(&self, x: &BerkPoint, y: &BerkPoint) -> Result<Exponent> {
        let (s, t) = match (x.radius_exp(), y.radius_exp()) {
            (Some(s), Some(t)) => (s, t),
            _ => return Err(Error::TypeIPoint(format!("distance between {x} and {y} is infinite"))),
        };
        let j = self.join(x, y)?.radius_exp().expect("type II join");
        Ok(j * 2 - s - t)
    }

    /// The unique point lying on all three arcs between the arguments.
    pub fn median(&self, x: &BerkPoint, y: &BerkPoint, z: &BerkPoint) -> Result<BerkPoint> {
        if !(x.is_infinity() || y.is_infinity() || z.is_infinity()) {
            return self.affine_median(x, y, z);
        }
        let phi = self.reroot(&[x, y, z]);
        let inv = phi.inverse();
        let m = self.affine_median(&self.act(&phi, x)?, &self.act(&phi, y)?, &self.act(&phi, z)?)?;
        self.act(&inv, &m)
    }

    fn affine_median(&self, x: &BerkPoint, y: &BerkPoint, z: &BerkPoint) -> Result<BerkPoint> {
        let joins = [self.join(x, y)?, self.join(x, z)?, self.join(y, z)?];
        let mut best = joins[0].clone();
        for j in &joins[1..] {
            let smaller = match (j.radius_exp(), best.radius_exp()) {
                (None, _) => true,
                (Some(_), None) => false,
                (Some(a), Some(b)) => a < b,
            };
            if smaller {
                best = j.clone();
            }
        }
        Ok(best)
    }

    /// `z -> 1/(z - t)` with `t` avoiding the given type I points.
    fn reroot(&self, pts: &[&BerkPoint]) -> MobiusMap {
        let taken: Vec<&ProjPoint> = pts
            .iter()
            .filter_map(|x| match x {
                BerkPoint::TypeI(z) => Some(z),
                _ => None,
            })
            .collect();
        let t = (0i64..)
            .flat_map(|k| [k, -k - 1])
            .map(ProjPoint::int)
            .find(|t| !taken.contains(&t))
            .expect("infinitely many candidates");
        let t = t.finite().expect("finite").clone();
        MobiusMap::new(FieldElem::zero(), FieldElem::one(), FieldElem::one(), -t).expect("invertible")
    }

    /// Image of a Berkovich point under `g`.
    pub fn act(&self, g: &MobiusMap, x: &BerkPoint) -> Result<BerkPoint> {
        let (center, s) = match x {
            BerkPoint::TypeI(z) => return Ok(BerkPoint::TypeI(g.apply(z))),
            BerkPoint::TypeII { center, radius_exp } => (center, *radius_exp),
        };
        let [a, b, c, d] = g.entries();
        if c.is_zero() {
            return self.act_affine(&(a / d), &(b / d), center, s);
        }
        // g(z) = a/c - (det/c^2) / (z + d/c)
        let w = center + &(d / c);
        let (w_inv, s_inv) = match self.log_abs(&w)? {
            Some(e) if e > s => (w.inv().expect("nonzero"), s - e * 2),
            _ => (FieldElem::zero(), -s),
        };
        let alpha = -&(&g.det() / &(c * c));
        self.act_affine(&alpha, &(a / c), &w_inv, s_inv)
    }

    fn act_affine(&self, alpha: &FieldElem, beta: &FieldElem, center: &FieldElem, s: Exponent) -> Result<BerkPoint> {
        let e = self.log_abs(alpha)?.expect("invertible affine map");
        Ok(BerkPoint::disk(&(alpha * center) + beta, s + e))
    }

    pub fn fixes_gauss(&self, g: &MobiusMap) -> Result<bool> {
        let gauss = BerkPoint::gauss();
        self.berk_eq(&self.act(g, &gauss)?, &gauss)
    }

    /// A field element of absolute value `p^s`.
    pub fn element_of_abs(&self, s: Exponent) -> Result<FieldElem> {
        if s.is_integer() {
            return Ok(self.p_power(-s.to_integer()));
        }
        if *s.denom() == 2 {
            if let Some(d) = self.disc() {
                let e = self.log_abs(&FieldElem::sqrt_disc(d))?.expect("nonzero");
                if !e.is_integer() {
                    // sqrt(D) has |.| = p^e with e a half-integer.
                    let k = s - e;
                    return Ok(&FieldElem::sqrt_disc(d) * &self.p_power(-k.to_integer()));
                }
            }
            return Err(Error::unsupported(self.p()));
        }
        Err(Error::unsupported(format!("{}^({})", self.p(), s)))
    }

    /// A map `(z - a)/r` with `|r| = p^s`, moving `D(a, p^s)` to the Gauss point.
    pub fn conjugator_to_gauss(&self, x: &BerkPoint) -> Result<MobiusMap> {
        let (center, s) = match x {
            BerkPoint::TypeII { center, radius_exp } => (center, *radius_exp),
            BerkPoint::TypeI(_) => return Err(Error::TypeIPoint(format!("{x}"))),
        };
        let r = self.element_of_abs(s)?;
        MobiusMap::new(FieldElem::one(), -center, FieldElem::zero(), r)
    }

    /// The point at distance `t` from the type II point `x` along the arc
    /// toward `y`.
    pub fn point_toward(&self, x: &BerkPoint, y: &BerkPoint, t: Exponent) -> Result<BerkPoint> {
        let (cx, sx) = match x {
            BerkPoint::TypeII { center, radius_exp } => (center, *radius_exp),
            BerkPoint::TypeI(_) => return Err(Error::TypeIPoint(format!("{x}"))),
        };
        if y.is_infinity() {
            return Ok(BerkPoint::disk(cx.clone(), sx + t));
        }
        let j = self.join(x, y)?;
        let sj = j.radius_exp().expect("type II");
        let up = sj - sx;
        if t <= up {
            return Ok(BerkPoint::disk(cx.clone(), sx + t));
        }
        let down = t - up;
        if let Some(sy) = y.radius_exp() {
            if down > sj - sy {
                return Err(Error::DegenerateConfiguration(format!("{t} exceeds the length of [{x}, {y}]")));
            }
        }
        Ok(BerkPoint::disk(y.center().expect("finite").clone(), sj - down))
    }

    pub fn segment_contains(&self, seg: &Segment, x: &BerkPoint) -> Result<bool> {
        self.berk_eq(&self.median(&seg.a, &seg.b, x)?, x)
    }

    /// Projection of `x` onto the arc.
    pub fn project(&self, seg: &Segment, x: &BerkPoint) -> Result<BerkPoint> {
        self.median(&seg.a, &seg.b, x)
    }

    /// A point shared by the two arcs, if any.
    pub fn segment_intersection(&self, s1: &Segment, s2: &Segment) -> Result<Option<BerkPoint>> {
        let mc = self.project(s1, &s2.a)?;
        let md = self.project(s1, &s2.b)?;
        if !self.berk_eq(&mc, &md)? {
            // s2 runs along s1 between the two projections.
            return Ok(Some(self.median(&mc, &md, &BerkPoint::gauss())?));
        }
        Ok(if self.segment_contains(s2, &mc)? { Some(mc) } else { None })
    }

    /// Representative with a canonical center when the center is rational:
    /// the truncated p-adic expansion, or 0 when the disk contains 0.
    pub fn normalize_point(&self, x: &BerkPoint) -> BerkPoint {
        let (center, s) = match x {
            BerkPoint::TypeII { center, radius_exp } if center.is_rational() => (center.re(), *radius_exp),
            _ => return x.clone(),
        };
        let n = (-s).ceil().to_integer();
        let v = match self.vp(center) {
            None => return BerkPoint::disk(FieldElem::zero(), s),
            Some(v) => v,
        };
        if v >= n {
            return BerkPoint::disk(FieldElem::zero(), s);
        }
        let pb = BigInt::from(self.p());
        let unit = center / pow_rat(&pb, v);
        let m = num_traits::pow(pb.clone(), (n - v) as usize);
        let inv = crate::padic::mod_inverse(unit.denom(), &m).expect("unit");
        let digits = (unit.numer() * inv).mod_floor(&m);
        let c = Rational::from_integer(digits) * pow_rat(&pb, v);
        BerkPoint::disk(FieldElem::rational(c), s)
    }

    /// Diameter `p^s` of a type II point as a magnitude.
    pub fn diam(&self, x: &BerkPoint) -> Magnitude {
        match x.radius_exp() {
            Some(s) => Magnitude::p_pow(self.p(), s),
            None => Magnitude::zero(self.p()),
        }
    }
}

fn pow_rat(p: &BigInt, k: i64) -> Rational {
    let pk = Rational::from_integer(num_traits::pow(p.clone(), k.unsigned_abs() as usize));
    if k >= 0 {
        pk
    } else {
        pk.recip()
    }
}

impl PadicContext {
    /// Display string with canonical rational centers and the prime spelled out;
    /// the unit disk prints as `gauss`.
    pub fn point_string(&self, x: &BerkPoint) -> String {
        match self.normalize_point(x) {
            BerkPoint::TypeI(z) => z.to_string(),
            BerkPoint::TypeII { center, radius_exp } if center.is_zero() && radius_exp.is_zero() => "gauss".into(),
            BerkPoint::TypeII { center, radius_exp } => format!("D({center}, {}^({radius_exp}))", self.p()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64) -> PadicContext {
        PadicContext::new(p, None).unwrap()
    }

    fn e(n: i64) -> Exponent {
        Exponent::from_integer(n)
    }

    #[test]
    fn join_examples() {
        let c = ctx(3);
        let j = c.join(&ProjPoint::zero().into(), &ProjPoint::one().into()).unwrap();
        assert!(c.berk_eq(&j, &BerkPoint::gauss()).unwrap());
        let j = c.join(&BerkPoint::disk_int(0, -1), &BerkPoint::disk_int(0, 1)).unwrap();
        assert!(c.berk_eq(&j, &BerkPoint::disk_int(0, 1)).unwrap());
        let x = BerkPoint::disk_int(2, -1);
        assert!(c.berk_eq(&c.join(&x, &x).unwrap(), &x).unwrap());
    }

    #[test]
    fn distance_examples() {
        let c = ctx(3);
        assert_eq!(c.hyp_dist(&BerkPoint::gauss(), &BerkPoint::disk_int(0, 1)).unwrap(), e(1));
        assert_eq!(c.hyp_dist(&BerkPoint::disk_int(0, -1), &BerkPoint::disk_int(1, -1)).unwrap(), e(2));
        assert_eq!(c.hyp_dist(&BerkPoint::gauss(), &BerkPoint::gauss()).unwrap(), e(0));
        assert!(matches!(c.hyp_dist(&ProjPoint::zero().into(), &BerkPoint::gauss()), Err(Error::TypeIPoint(_))));
    }

    #[test]
    fn median_examples() {
        let c = ctx(3);
        let (x, y, z) = (BerkPoint::disk_int(0, -1), BerkPoint::disk_int(1, -1), BerkPoint::disk_int(0, -2));
        let m = c.median(&x, &y, &z).unwrap();
        assert!(c.berk_eq(&m, &x).unwrap());
        assert_eq!(c.hyp_dist(&x, &y).unwrap(), c.hyp_dist(&x, &m).unwrap() + c.hyp_dist(&m, &y).unwrap());
        let m = c.median(&x, &x, &y).unwrap();
        assert!(c.berk_eq(&m, &x).unwrap());
        // Through inf: the projection of D(3, 3^-2) onto the axis (0, inf).
        let m = c.median(&ProjPoint::zero().into(), &BerkPoint::infinity(), &BerkPoint::disk_int(3, -2)).unwrap();
        assert!(c.berk_eq(&m, &BerkPoint::disk_int(0, -1)).unwrap());
    }

    #[test]
    fn action_examples() {
        let c = ctx(3);
        let inv = MobiusMap::from_ints(0, -1, 1, 0).unwrap();
        assert!(c.berk_eq(&c.act(&inv, &BerkPoint::gauss()).unwrap(), &BerkPoint::gauss()).unwrap());
        let recip = MobiusMap::from_ints(0, 1, 1, 0).unwrap();
        let y = c.act(&recip, &BerkPoint::disk_int(3, -1)).unwrap();
        assert!(c.berk_eq(&y, &BerkPoint::disk_int(0, 1)).unwrap());
        let triple = MobiusMap::from_ints(3, 0, 0, 1).unwrap();
        let y = c.act(&triple, &BerkPoint::gauss()).unwrap();
        assert!(c.berk_eq(&y, &BerkPoint::disk_int(0, -1)).unwrap());
        assert!(c.fixes_gauss(&MobiusMap::from_ints(1, 1, 0, 1).unwrap()).unwrap());
        assert!(!c.fixes_gauss(&triple).unwrap());
    }

    #[test]
    fn conjugator_examples() {
        let c = ctx(3);
        let x = BerkPoint::disk_int(2, -1);
        let h = c.conjugator_to_gauss(&x).unwrap();
        assert_eq!(h, MobiusMap::from_ints(1, -2, 0, 3).unwrap());
        assert!(c.berk_eq(&c.act(&h, &x).unwrap(), &BerkPoint::gauss()).unwrap());
        let half = BerkPoint::disk(FieldElem::zero(), Exponent::new(1, 2));
        assert!(matches!(c.conjugator_to_gauss(&half), Err(Error::UnsupportedExtension { .. })));
        let cr = PadicContext::new(3, Some(3)).unwrap();
        let h = cr.conjugator_to_gauss(&half).unwrap();
        assert!(cr.berk_eq(&cr.act(&h, &half).unwrap(), &BerkPoint::gauss()).unwrap());
    }

    #[test]
    fn normalized_centers() {
        let c = ctx(3);
        let x = c.normalize_point(&BerkPoint::disk_int(11, -1));
        assert_eq!(c.point_string(&x), "D(2, 3^(-1))");
        assert_eq!(c.point_string(&BerkPoint::disk_int(3, -1)), "D(0, 3^(-1))");
        let y = BerkPoint::disk(FieldElem::from_ratio(1, 2), e(-2));
        assert!(c.berk_eq(&c.normalize_point(&y), &y).unwrap());
    }

    #[test]
    fn arcs() {
        let c = ctx(3);
        let a = Segment::new(ProjPoint::zero().into(), BerkPoint::infinity());
        let b = Segment::new(ProjPoint::int(3).into(), ProjPoint::int(12).into());
        assert!(c.segment_intersection(&a, &b).unwrap().is_none());
        let b = Segment::new(ProjPoint::int(1).into(), ProjPoint::int(-1).into());
        let m = c.segment_intersection(&a, &b).unwrap().unwrap();
        assert!(c.berk_eq(&m, &BerkPoint::gauss()).unwrap());
        let (x, y) = (BerkPoint::disk_int(3, -2), BerkPoint::disk_int(0, -2));
        let up = c.point_toward(&x, &y, e(1)).unwrap();
        assert!(c.berk_eq(&up, &BerkPoint::disk_int(0, -1)).unwrap());
        let end = c.point_toward(&x, &y, e(2)).unwrap();
        assert!(c.berk_eq(&end, &y).unwrap());
        assert!(c.point_toward(&x, &y, e(3)).is_err());
    }
}
