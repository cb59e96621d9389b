//! Möbius maps over Q(sqrt D): classification, norms, displacement and the
//! uniform metric to the identity.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{int, rat, squarefree_kernel, Exponent, FieldElem, Magnitude, PadicContext, SquareClass};
use crate::projective::ProjPoint;

/// A projective 2x2 matrix. Entries are stored scaled so that the first
/// nonzero entry in row-major order is 1, so equality and hashing are
/// equality of maps.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MobiusMap {
    m: [FieldElem; 4],
}

impl MobiusMap {
    pub fn new(a: FieldElem, b: FieldElem, c: FieldElem, d: FieldElem) -> Result<Self> {
        let det = &a * &d - &b * &c;
        if det.is_zero() {
            return Err(Error::DegenerateConfiguration(format!(
                "singular matrix ({a},{b};{c},{d})"
            )));
        }
        let lead = [&a, &b, &c, &d].into_iter().find(|x| !x.is_zero()).expect("nonzero").inv().expect("nonzero");
        Ok(MobiusMap { m: [&a * &lead, &b * &lead, &c * &lead, &d * &lead] })
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        Self::from_ints(1, 0, 0, 1).expect("identity")
    }

    /// `diag(x, y)`, the map `z -> (x/y) z`.
    pub fn diag(x: FieldElem, y: FieldElem) -> Result<Self> {
        Self::new(x, FieldElem::zero(), FieldElem::zero(), y)
    }

    pub fn a(&self) -> &FieldElem {
        &self.m[0]
    }
    pub fn b(&self) -> &FieldElem {
        &self.m[1]
    }
    pub fn c(&self) -> &FieldElem {
        &self.m[2]
    }
    pub fn d(&self) -> &FieldElem {
        &self.m[3]
    }

    pub fn entries(&self) -> &[FieldElem; 4] {
        &self.m
    }

    pub fn det(&self) -> FieldElem {
        self.a() * self.d() - self.b() * self.c()
    }

    pub fn trace(&self) -> FieldElem {
        self.a() + self.d()
    }

    /// `tr^2 / det`, the scale-invariant conjugacy invariant.
    pub fn sigma(&self) -> FieldElem {
        let t = self.trace();
        &(&t * &t) / &self.det()
    }

    pub fn is_identity(&self) -> bool {
        self.b().is_zero() && self.c().is_zero() && self.a() == self.d()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MobiusMap) -> MobiusMap {
        let [a, b, c, d] = &self.m;
        let [e, f, g, h] = &other.m;
        MobiusMap::new(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h).expect("product of invertible maps")
    }

    pub fn inverse(&self) -> MobiusMap {
        let [a, b, c, d] = &self.m;
        MobiusMap::new(d.clone(), -b, -c, a.clone()).expect("adjugate of invertible map")
    }

    /// `h ∘ self ∘ h^{-1}`.
    pub fn conjugate_by(&self, h: &MobiusMap) -> MobiusMap {
        h.compose(self).compose(&h.inverse())
    }

    pub fn powi(&self, n: i64) -> MobiusMap {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        (0..n.unsigned_abs()).fold(MobiusMap::identity(), |acc, _| acc.compose(&base))
    }

    pub fn apply(&self, z: &ProjPoint) -> ProjPoint {
        let [a, b, c, d] = &self.m;
        match z {
            ProjPoint::Infinity => {
                if c.is_zero() {
                    ProjPoint::Infinity
                } else {
                    ProjPoint::Finite(a / c)
                }
            }
            ProjPoint::Finite(z) => {
                let den = c * z + d;
                if den.is_zero() {
                    ProjPoint::Infinity
                } else {
                    ProjPoint::Finite(&(a * z + b) / &den)
                }
            }
        }
    }

    /// Entries after multiplying by `t`, the representative used by callers
    /// that need a particular lift.
    pub fn scaled_entries(&self, t: &FieldElem) -> [FieldElem; 4] {
        self.m.clone().map(|x| &x * t)
    }
}

impl fmt::Display for MobiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{};{},{}", self.m[0], self.m[1], self.m[2], self.m[3])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ElementClass {
    Identity,
    Parabolic,
    TameElliptic,
    WildElliptic,
    Loxodromic,
}

impl ElementClass {
    pub const ALL: [ElementClass; 5] = [
        ElementClass::Identity,
        ElementClass::Parabolic,
        ElementClass::TameElliptic,
        ElementClass::WildElliptic,
        ElementClass::Loxodromic,
    ];
    /// The four classes of nonidentity maps.
    pub const NONTRIVIAL: [ElementClass; 4] = [
        ElementClass::Parabolic,
        ElementClass::TameElliptic,
        ElementClass::WildElliptic,
        ElementClass::Loxodromic,
    ];

    pub fn is_elliptic(self) -> bool {
        matches!(self, ElementClass::TameElliptic | ElementClass::WildElliptic)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ElementClass::Identity => "IDENTITY",
            ElementClass::Parabolic => "PARABOLIC",
            ElementClass::TameElliptic => "TAME_ELLIPTIC",
            ElementClass::WildElliptic => "WILD_ELLIPTIC",
            ElementClass::Loxodromic => "LOXODROMIC",
        }
    }
}

impl fmt::Display for ElementClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ElementClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ElementClass::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse(format!("unknown element class {s:?}")))
    }
}

/// Fixed points on the projective line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FixedPoints {
    All,
    One(ProjPoint),
    Two(ProjPoint, ProjPoint),
}

impl FixedPoints {
    pub fn points(&self) -> Vec<ProjPoint> {
        match self {
            FixedPoints::All => vec![],
            FixedPoints::One(z) => vec![z.clone()],
            FixedPoints::Two(z, w) => vec![z.clone(), w.clone()],
        }
    }
}

/// Value of `rho_0(g, I)`: exact for odd p, bracketed for p = 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rho0 {
    Exact { value: Magnitude, witness: ProjPoint },
    Bracket { lower: Magnitude, upper: Magnitude, witness: ProjPoint, witness_value: Magnitude },
}

impl Rho0 {
    pub fn lower(&self) -> &Magnitude {
        match self {
            Rho0::Exact { value, .. } => value,
            Rho0::Bracket { lower, .. } => lower,
        }
    }

    pub fn upper(&self) -> &Magnitude {
        match self {
            Rho0::Exact { value, .. } => value,
            Rho0::Bracket { upper, .. } => upper,
        }
    }

    pub fn value(&self) -> Option<&Magnitude> {
        match self {
            Rho0::Exact { value, .. } => Some(value),
            Rho0::Bracket { .. } => None,
        }
    }

    pub fn witness(&self) -> &ProjPoint {
        match self {
            Rho0::Exact { witness, .. } | Rho0::Bracket { witness, .. } => witness,
        }
    }
}

impl fmt::Display for Rho0 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rho0::Exact { value, witness } => write!(f, "{value} (witness {witness})"),
            Rho0::Bracket { lower, upper, witness, .. } => write!(f, "[{lower}, {upper}] (witness {witness})"),
        }
    }
}

fn omega() -> FieldElem {
    FieldElem::new(rat(-1, 2), rat(1, 2), Some(-3))
}

impl PadicContext {
    pub fn check_map(&self, g: &MobiusMap) -> Result<()> {
        g.entries().iter().try_for_each(|x| self.check(x))
    }

    /// Largest entry magnitude.
    pub fn max_entry(&self, g: &MobiusMap) -> Result<Magnitude> {
        let mut best = Magnitude::zero(self.p());
        for x in g.entries() {
            best = best.max(self.abs(x)?);
        }
        Ok(best)
    }

    /// `|det|^{1/2}`.
    fn abs_det_sqrt(&self, g: &MobiusMap) -> Result<Magnitude> {
        Ok(self.abs(&g.det())?.sqrt().expect("absolute values are pure powers of p"))
    }

    /// Norm of the determinant-one lift.
    pub fn norm(&self, g: &MobiusMap) -> Result<Magnitude> {
        Ok(&self.max_entry(g)? / &self.abs_det_sqrt(g)?)
    }

    pub fn is_unitary(&self, g: &MobiusMap) -> Result<bool> {
        Ok(self.norm(g)? == Magnitude::one(self.p()))
    }

    /// Good reduction coincides with unitarity for degree-one maps.
    pub fn has_good_reduction(&self, g: &MobiusMap) -> Result<bool> {
        self.is_unitary(g)
    }

    pub fn classify(&self, g: &MobiusMap) -> Result<ElementClass> {
        if g.is_identity() {
            return Ok(ElementClass::Identity);
        }
        let s = &g.sigma() - &FieldElem::from_i64(4);
        if s.is_zero() {
            return Ok(ElementClass::Parabolic);
        }
        let one = Magnitude::one(self.p());
        Ok(match self.abs(&s)?.cmp(&one) {
            std::cmp::Ordering::Greater => ElementClass::Loxodromic,
            std::cmp::Ordering::Equal => ElementClass::TameElliptic,
            std::cmp::Ordering::Less => ElementClass::WildElliptic,
        })
    }

    /// Square root inside the working field, or the extension it would need.
    pub fn sqrt_in_field(&self, x: &FieldElem) -> Result<FieldElem> {
        self.check(x)?;
        x.sqrt_in(self.disc()).ok_or_else(|| {
            if x.is_rational() {
                Error::unsupported(squarefree_kernel(x.re()))
            } else {
                Error::unsupported(format!("{x}"))
            }
        })
    }

    /// Roots of `c z^2 + (d - a) z - b = 0`.
    pub fn fixed_points(&self, g: &MobiusMap) -> Result<FixedPoints> {
        if g.is_identity() {
            return Ok(FixedPoints::All);
        }
        let [a, b, c, d] = g.entries();
        if c.is_zero() {
            return Ok(if a == d {
                FixedPoints::One(ProjPoint::Infinity)
            } else {
                FixedPoints::Two(ProjPoint::Finite(b / &(d - a)), ProjPoint::Infinity)
            });
        }
        let amd = a - d;
        let disc = &(&amd * &amd) + &(&FieldElem::from_i64(4) * &(b * c));
        let two_c = &FieldElem::from_i64(2) * c;
        if disc.is_zero() {
            return Ok(FixedPoints::One(ProjPoint::Finite(&amd / &two_c)));
        }
        let r = self.sqrt_in_field(&disc)?;
        Ok(FixedPoints::Two(
            ProjPoint::Finite(&(&amd + &r) / &two_c),
            ProjPoint::Finite(&(&amd - &r) / &two_c),
        ))
    }

    /// Best Lipschitz constant for the chordal metric.
    pub fn lipschitz(&self, g: &MobiusMap) -> Result<Magnitude> {
        let n = self.norm(g)?;
        Ok(&n * &n)
    }

    /// A pair `(z, w)` with `rho(gz, gw) = L(g) rho(z, w)`.
    ///
    /// With the entries scaled to have maximal magnitude 1, a primitive
    /// vector `v` satisfies `|g v| >= |det|`, with equality at preimages of
    /// residue classes outside the kernel of the reduced adjugate. At least
    /// two of `g^{-1}(inf), g^{-1}(0), g^{-1}(1)` are such preimages, and
    /// any two of them realize the constant.
    pub fn lipschitz_witness(&self, g: &MobiusMap) -> Result<(ProjPoint, ProjPoint)> {
        let l = self.lipschitz(g)?;
        let inv = g.inverse();
        let pre: Vec<ProjPoint> =
            [ProjPoint::Infinity, ProjPoint::zero(), ProjPoint::one()].iter().map(|t| inv.apply(t)).collect();
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let (z, w) = (&pre[i], &pre[j]);
            let lhs = self.chordal(&g.apply(z), &g.apply(w))?;
            if lhs == &l * &self.chordal(z, w)? {
                return Ok((z.clone(), w.clone()));
            }
        }
        Err(Error::DegenerateConfiguration(format!("no Lipschitz witness found for {g}")))
    }

    /// Hyperbolic displacement of the Gauss point, `2 log_p ||g||`.
    pub fn displacement_gauss(&self, g: &MobiusMap) -> Result<Exponent> {
        Ok(self.norm(g)?.exponent().expect("norms are powers of p") * 2)
    }

    /// `max(|a-d|, |2b|, |2c|)` for the given entries.
    fn skew_part(&self, g: &MobiusMap) -> Result<Magnitude> {
        let two = FieldElem::from_i64(2);
        let [a, b, c, d] = g.entries();
        Ok(self.abs(&(a - d))?.max(self.abs(&(&two * b))?).max(self.abs(&(&two * c))?))
    }

    /// `m(g) = ||g - g^{-1}||` on the determinant-one lift.
    pub fn m_norm(&self, g: &MobiusMap) -> Result<Magnitude> {
        Ok(&self.skew_part(g)? / &self.abs_det_sqrt(g)?)
    }

    /// `M(g) = m(g) / ||g||`.
    #[allow(non_snake_case)]
    pub fn M_norm(&self, g: &MobiusMap) -> Result<Magnitude> {
        Ok(&self.skew_part(g)? / &self.max_entry(g)?)
    }

    /// `rho(g z, z)`.
    pub fn displacement(&self, g: &MobiusMap, z: &ProjPoint) -> Result<Magnitude> {
        self.chordal(&g.apply(z), z)
    }

    /// `rho_0(g, I) = sup_z rho(gz, z)`.
    ///
    /// For odd p the supremum equals `M(g)`. Scaled to unit maximal entry,
    /// `rho(gz, z) >= |c x^2 + (d-a) x y - b y^2|` for primitive `(x, y)`,
    /// and a nonzero binary quadratic form over the residue field vanishes
    /// at no more than two of the four classes of `0, 1, inf, -1`; so one of
    /// these points attains the supremum. For p = 2 the value is bracketed by
    /// `[M/2, 2M]` and the witness maximizes the displacement over
    /// `{0, 1, inf}`, which is at least `M`.
    pub fn rho0_identity(&self, g: &MobiusMap) -> Result<Rho0> {
        let m = self.M_norm(g)?;
        if self.p() == 2 {
            let mut best = (ProjPoint::zero(), Magnitude::zero(2));
            for z in [ProjPoint::zero(), ProjPoint::one(), ProjPoint::Infinity] {
                let v = self.displacement(g, &z)?;
                if v > best.1 {
                    best = (z, v);
                }
            }
            return Ok(Rho0::Bracket {
                lower: m.scale(&rat(1, 2)),
                upper: m.scale(&int(2)),
                witness: best.0,
                witness_value: best.1,
            });
        }
        for z in [ProjPoint::zero(), ProjPoint::one(), ProjPoint::Infinity, ProjPoint::int(-1)] {
            if self.displacement(g, &z)? == m {
                return Ok(Rho0::Exact { value: m, witness: z });
            }
        }
        Err(Error::DegenerateConfiguration(format!("no rho_0 witness found for {g}")))
    }

    /// `rho_0(g, h)` through right invariance.
    pub fn rho0(&self, g: &MobiusMap, h: &MobiusMap) -> Result<Rho0> {
        self.rho0_identity(&g.compose(&h.inverse()))
    }

    fn max_displacement(&self, g: &MobiusMap, pts: &[ProjPoint]) -> Result<Magnitude> {
        let mut best = Magnitude::zero(self.p());
        for z in pts {
            best = best.max(self.displacement(g, z)?);
        }
        Ok(best)
    }

    /// Maximal displacement over the cube roots of unity.
    pub fn epsilon(&self, g: &MobiusMap) -> Result<Magnitude> {
        let aux;
        let ctx = if self.disc() == Some(-3) {
            self
        } else if g.entries().iter().all(FieldElem::is_rational) {
            aux = self.with_disc(Some(-3))?;
            &aux
        } else {
            return Err(Error::unsupported(-3));
        };
        let w = omega();
        let pts = [ProjPoint::one(), ProjPoint::Finite(w.clone()), ProjPoint::Finite(&w * &w)];
        ctx.max_displacement(g, &pts)
    }

    /// Maximal displacement over `{0, 1, inf}`.
    pub fn epsilon1(&self, g: &MobiusMap) -> Result<Magnitude> {
        self.max_displacement(g, &[ProjPoint::zero(), ProjPoint::one(), ProjPoint::Infinity])
    }

    /// Maximal displacement over `{0, inf}`.
    pub fn epsilon2(&self, g: &MobiusMap) -> Result<Magnitude> {
        self.max_displacement(g, &[ProjPoint::zero(), ProjPoint::Infinity])
    }

    /// `||g - I||` for the determinant-one lifts of `g`, minimized over the
    /// two signs.
    pub fn dist_to_identity(&self, g: &MobiusMap) -> Result<Magnitude> {
        let det = g.det();
        if let Some(s) = det.sqrt_in(self.disc()) {
            return self.lift_distance(g, &s);
        }
        // A rational map whose determinant is a square in Q_p but not in Q:
        // compare the entries with the p-adic digits of the root.
        if g.entries().iter().all(FieldElem::is_rational) {
            if let SquareClass::Square(root) = self.sqrt_in_qp(det.re())? {
                let [a, b, c, d] = g.entries();
                let t = Magnitude::p_pow_int(self.p(), -root.valuation());
                let mut best: Option<Magnitude> = None;
                for negate in [false, true] {
                    let m = self
                        .abs_sub_root(a.re(), &root, negate)?
                        .max(self.abs(b)?)
                        .max(self.abs(c)?)
                        .max(self.abs_sub_root(d.re(), &root, negate)?);
                    best = Some(best.map_or(m.clone(), |b| b.min(m)));
                }
                return Ok(&best.expect("two lifts") / &t);
            }
        }
        // Without sqrt(det) in the field: if x^2 - det stays irreducible over
        // Q_p(sqrt D), the conjugation t -> -t preserves |.|, so
        // |a - t| = |a^2 - det|^{1/2} for either root t.
        if !det.is_rational() || !self.stays_irreducible(det.re())? {
            return Err(Error::unsupported(format!("{det}")));
        }
        let [a, b, c, d] = g.entries();
        let half = |x: &FieldElem| -> Result<Magnitude> {
            Ok(self.abs(&(&(x * x) - &det))?.sqrt().expect("pure power"))
        };
        let num = half(a)?.max(self.abs(b)?).max(self.abs(c)?).max(half(d)?);
        Ok(&num / &self.abs_det_sqrt(g)?)
    }

    /// `min over +-s` of `||g/s - I||` for a square root `s` of `det g`.
    fn lift_distance(&self, g: &MobiusMap, s: &FieldElem) -> Result<Magnitude> {
        let [a, b, c, d] = g.entries();
        let one = FieldElem::one();
        let mut best: Option<Magnitude> = None;
        for t in [s.clone(), -s] {
            let tinv = t.inv().expect("nonzero");
            let e = [&(a * &tinv) - &one, b * &tinv, c * &tinv, &(d * &tinv) - &one];
            let mut m = Magnitude::zero(self.p());
            for x in &e {
                m = m.max(self.abs(x)?);
            }
            best = Some(match best {
                Some(b) if b <= m => b,
                _ => m,
            });
        }
        Ok(best.expect("two lifts"))
    }

    /// True when a rational `x` has no square root in Q_p(sqrt D).
    fn stays_irreducible(&self, x: &crate::padic::Rational) -> Result<bool> {
        if matches!(self.sqrt_in_qp(x)?, SquareClass::Square(_)) {
            return Ok(false);
        }
        match self.disc() {
            Some(d) if !self.disc_is_split() => {
                Ok(!matches!(self.sqrt_in_qp(&(x * int(d)))?, SquareClass::Square(_)))
            }
            _ => Ok(true),
        }
    }

    /// `d(g, U)`: 0 for unitary maps and 1 otherwise.
    pub fn d_to_unitary(&self, g: &MobiusMap) -> Result<Magnitude> {
        Ok(if self.is_unitary(g)? { Magnitude::zero(self.p()) } else { Magnitude::one(self.p()) })
    }

    /// For non-unitary `g` and unitary `u`, a point with `rho(gz, uz) = 1`.
    ///
    /// `k = u^{-1} g` reduces to a rank-one matrix, which sends every residue
    /// class off its kernel to its image class; any point outside those two
    /// classes is moved to chordal distance 1. Among `0, inf, 1` one always
    /// qualifies.
    pub fn unitary_distance_witness(&self, g: &MobiusMap, u: &MobiusMap) -> Result<ProjPoint> {
        if self.is_unitary(g)? {
            return Err(Error::WrongClass { expected: "non-unitary map".into(), found: "unitary map".into() });
        }
        if !self.is_unitary(u)? {
            return Err(Error::WrongClass { expected: "unitary map".into(), found: "non-unitary map".into() });
        }
        let mut cands = vec![ProjPoint::zero(), ProjPoint::Infinity];
        if !u.c().is_zero() {
            cands.push(ProjPoint::Finite(-&(u.d() / u.c())));
        }
        cands.extend([ProjPoint::one(), ProjPoint::int(-1)]);
        let one = Magnitude::one(self.p());
        for z in cands {
            if self.chordal(&g.apply(&z), &u.apply(&z))? == one {
                return Ok(z);
            }
        }
        Err(Error::DegenerateConfiguration(format!("no witness for d({g}, U)")))
    }

    /// The unique map sending `z_j` to `w_j`.
    pub fn mobius_through_three_points(&self, z: [&ProjPoint; 3], w: [&ProjPoint; 3]) -> Result<MobiusMap> {
        let s = to_zero_one_inf(z)?;
        let t = to_zero_one_inf(w)?;
        let g = t.inverse().compose(&s);
        for j in 0..3 {
            debug_assert_eq!(&g.apply(z[j]), w[j]);
        }
        Ok(g)
    }
}

/// The map sending `z1, z2, z3` to `0, 1, inf`.
fn to_zero_one_inf(z: [&ProjPoint; 3]) -> Result<MobiusMap> {
    if z[0] == z[1] || z[0] == z[2] || z[1] == z[2] {
        return Err(Error::DegenerateConfiguration(format!("repeated points {}, {}, {}", z[0], z[1], z[2])));
    }
    let (x1, y1) = z[0].homogeneous();
    let (x2, y2) = z[1].homogeneous();
    let (x3, y3) = z[2].homogeneous();
    let alpha = &(&x2 * &y3) - &(&y2 * &x3);
    let beta = &(&x2 * &y1) - &(&y2 * &x1);
    MobiusMap::new(&alpha * &y1, -&(&alpha * &x1), &beta * &y3, -&(&beta * &x3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::Exponent;

    fn ctx(p: u64) -> PadicContext {
        PadicContext::new(p, None).unwrap()
    }

    fn m(a: i64, b: i64, c: i64, d: i64) -> MobiusMap {
        MobiusMap::from_ints(a, b, c, d).unwrap()
    }

    #[test]
    fn action_and_group_law() {
        assert_eq!(m(1, 1, 0, 1).apply(&ProjPoint::Infinity), ProjPoint::Infinity);
        assert_eq!(m(0, -1, 1, 0).apply(&ProjPoint::zero()), ProjPoint::Infinity);
        let g = m(2, 3, 5, 7);
        assert!(g.compose(&g.inverse()).is_identity());
        assert_eq!(m(2, 4, 6, 10), m(1, 2, 3, 5));
    }

    #[test]
    fn norm_examples() {
        let c = ctx(3);
        assert_eq!(c.norm(&MobiusMap::identity()).unwrap(), Magnitude::one(3));
        assert_eq!(c.norm(&m(3, 0, 0, 1)).unwrap(), Magnitude::p_pow(3, Exponent::new(1, 2)));
        assert!(c.is_unitary(&m(0, -1, 1, 0)).unwrap());
        assert!(!c.is_unitary(&m(3, 0, 0, 1)).unwrap());
        assert!(c.has_good_reduction(&m(1, 1, 0, 1)).unwrap());
    }

    #[test]
    fn classification_examples() {
        assert_eq!(ctx(3).classify(&m(1, 1, 0, 1)).unwrap(), ElementClass::Parabolic);
        assert_eq!(ctx(3).classify(&m(3, 0, 0, 1)).unwrap(), ElementClass::Loxodromic);
        let half = FieldElem::from_ratio(1, 2);
        let g = MobiusMap::diag(2.into(), half.clone()).unwrap();
        assert_eq!(ctx(5).classify(&g).unwrap(), ElementClass::TameElliptic);
        let g = MobiusMap::diag(4.into(), FieldElem::from_ratio(1, 4)).unwrap();
        assert_eq!(ctx(3).classify(&g).unwrap(), ElementClass::WildElliptic);
        assert_eq!(ctx(3).classify(&MobiusMap::identity()).unwrap(), ElementClass::Identity);
    }

    #[test]
    fn fixed_point_examples() {
        let c = ctx(5);
        assert_eq!(c.fixed_points(&m(1, 1, 0, 1)).unwrap(), FixedPoints::One(ProjPoint::Infinity));
        let g = MobiusMap::diag(2.into(), FieldElem::from_ratio(1, 2)).unwrap();
        assert_eq!(c.fixed_points(&g).unwrap(), FixedPoints::Two(ProjPoint::zero(), ProjPoint::Infinity));
        let inv = m(0, -1, 1, 0);
        assert!(matches!(c.fixed_points(&inv), Err(Error::UnsupportedExtension { .. })));
        let ci = PadicContext::new(5, Some(-1)).unwrap();
        let pts = ci.fixed_points(&inv).unwrap().points();
        assert_eq!(pts.len(), 2);
        for z in &pts {
            assert_eq!(&inv.apply(z), z);
        }
        // The canonical embedding sends sqrt(-1) to the root that is 2 mod 5.
        let s = ProjPoint::Finite(FieldElem::sqrt_disc(-1));
        assert!(pts.contains(&s));
        assert_eq!(ci.chordal(&s, &ProjPoint::int(2)).unwrap(), Magnitude::p_pow_int(5, -1));
        assert_eq!(c.fixed_points(&MobiusMap::identity()).unwrap(), FixedPoints::All);
    }

    #[test]
    fn lipschitz_examples() {
        let c = ctx(3);
        let g = m(3, 0, 0, 1);
        assert_eq!(c.lipschitz(&g).unwrap(), Magnitude::p_pow_int(3, 1));
        let (z, w) = c.lipschitz_witness(&g).unwrap();
        let l = c.lipschitz(&g).unwrap();
        assert_eq!(c.chordal(&g.apply(&z), &g.apply(&w)).unwrap(), &l * &c.chordal(&z, &w).unwrap());
        // The pair (1/3, 2/3) is another witness.
        let (z, w) = (ProjPoint::Finite(FieldElem::from_ratio(1, 3)), ProjPoint::Finite(FieldElem::from_ratio(2, 3)));
        assert_eq!(c.chordal(&g.apply(&z), &g.apply(&w)).unwrap(), &l * &c.chordal(&z, &w).unwrap());
        assert_eq!(c.displacement_gauss(&g).unwrap(), Exponent::from_integer(1));
        assert_eq!(c.displacement_gauss(&m(0, -1, 1, 0)).unwrap(), Exponent::from_integer(0));
    }

    #[test]
    fn uniform_metric_examples() {
        let c3 = ctx(3);
        let t = m(1, 1, 0, 1);
        assert_eq!(c3.M_norm(&t).unwrap(), Magnitude::one(3));
        assert_eq!(ctx(2).M_norm(&t).unwrap(), Magnitude::p_pow_int(2, -1));
        assert_eq!(c3.M_norm(&MobiusMap::identity()).unwrap(), Magnitude::zero(3));
        let r = c3.rho0_identity(&t).unwrap();
        assert_eq!(r, Rho0::Exact { value: Magnitude::one(3), witness: ProjPoint::zero() });
        let r = c3.rho0_identity(&m(0, -1, 1, 0)).unwrap();
        assert_eq!(r.value(), Some(&Magnitude::one(3)));
        assert_eq!(c3.displacement(&m(0, -1, 1, 0), r.witness()).unwrap(), Magnitude::one(3));
        assert_eq!(c3.rho0(&t, &t).unwrap().value(), Some(&Magnitude::zero(3)));
        assert_eq!(c3.rho0(&t, &MobiusMap::identity()).unwrap().value(), Some(&Magnitude::one(3)));
        assert_eq!(c3.epsilon1(&t).unwrap(), Magnitude::one(3));
        assert_eq!(c3.epsilon2(&t).unwrap(), Magnitude::one(3));
        assert_eq!(c3.epsilon(&MobiusMap::identity()).unwrap(), Magnitude::zero(3));
    }

    #[test]
    fn unitary_distance_examples() {
        let c = ctx(3);
        let g = m(3, 0, 0, 1);
        assert_eq!(c.d_to_unitary(&g).unwrap(), Magnitude::one(3));
        assert_eq!(c.d_to_unitary(&m(0, -1, 1, 0)).unwrap(), Magnitude::zero(3));
        let z = c.unitary_distance_witness(&g, &MobiusMap::identity()).unwrap();
        assert_eq!(z, ProjPoint::one());
    }

    #[test]
    fn three_point_examples() {
        let c = ctx(3);
        let (zero, one, inf) = (ProjPoint::zero(), ProjPoint::one(), ProjPoint::Infinity);
        let id = c.mobius_through_three_points([&zero, &one, &inf], [&zero, &one, &inf]).unwrap();
        assert!(id.is_identity());
        let g = c.mobius_through_three_points([&zero, &one, &inf], [&inf, &one, &zero]).unwrap();
        assert_eq!(g, m(0, 1, 1, 0));
        let two = ProjPoint::int(2);
        let g = c.mobius_through_three_points([&zero, &one, &inf], [&one, &two, &inf]).unwrap();
        assert_eq!(g, m(1, 1, 0, 1));
        assert!(c.mobius_through_three_points([&zero, &zero, &inf], [&one, &two, &inf]).is_err());
    }

    #[test]
    fn distance_to_identity() {
        let c = ctx(3);
        assert_eq!(c.dist_to_identity(&m(1, 3, 0, 1)).unwrap(), Magnitude::p_pow_int(3, -1));
        // -I is the identity in PSL, so the minimum over lifts is 0.
        assert_eq!(c.dist_to_identity(&m(-1, 0, 0, -1)).unwrap(), Magnitude::zero(3));
        let g = m(3, 0, 0, 1);
        let d = c.dist_to_identity(&g).unwrap();
        assert_eq!(d, Magnitude::p_pow(3, Exponent::new(1, 2)));
        // sqrt(7) = 1 + 3 + 9 + ... in Q_3, so 7/t - 1 and 1/t - 1 are both divisible by 3.
        assert_eq!(c.dist_to_identity(&m(7, 0, 0, 1)).unwrap(), Magnitude::p_pow_int(3, -1));
        assert_eq!(c.dist_to_identity(&m(7, 0, 3, 1)).unwrap(), Magnitude::p_pow_int(3, -1));
    }
}
