//! Geodesics, involutions and the fixed point sets of Möbius maps in the
//! Berkovich tree.

use std::fmt;

use num_traits::Zero;

use crate::berkovich::{BerkPoint, Segment};
use crate::error::{Error, Result};
use crate::moebius::{ElementClass, FixedPoints, MobiusMap};
use crate::padic::{Exponent, FieldElem, Magnitude, PadicContext};
use crate::projective::ProjPoint;

/// The geodesic line between two distinct points of the projective line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Geodesic {
    pub alpha: ProjPoint,
    pub beta: ProjPoint,
}

impl Geodesic {
    pub fn new(alpha: ProjPoint, beta: ProjPoint) -> Result<Self> {
        if alpha == beta {
            return Err(Error::DegenerateConfiguration(format!("geodesic with equal ends {alpha}")));
        }
        Ok(Geodesic { alpha, beta })
    }

    pub fn segment(&self) -> Segment {
        Segment::new(self.alpha.clone().into(), self.beta.clone().into())
    }

    pub fn has_end(&self, z: &ProjPoint) -> bool {
        &self.alpha == z || &self.beta == z
    }

    /// Same unordered pair of ends.
    pub fn same_line(&self, other: &Geodesic) -> bool {
        self.has_end(&other.alpha) && self.has_end(&other.beta)
    }
}

impl fmt::Display for Geodesic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "geo({}, {})", self.alpha, self.beta)
    }
}

/// A geodesic together with a tail point at distance one from it.
#[derive(Clone, Debug)]
pub struct TailedAxis {
    pub axis: Geodesic,
    pub tail: BerkPoint,
    /// Projection of the tail onto the axis.
    pub foot: BerkPoint,
}

#[derive(Clone, Debug)]
pub enum FixedLocus {
    TwoPoints(ProjPoint, ProjPoint),
    Axis(Geodesic),
    Tube(Geodesic, Exponent),
    Horoball { fixed_point: ProjPoint, boundary: BerkPoint },
    All,
}

impl FixedLocus {
    pub fn tag(&self) -> &'static str {
        match self {
            FixedLocus::TwoPoints(..) => "TWO_POINTS",
            FixedLocus::Axis(_) => "AXIS",
            FixedLocus::Tube(..) => "TUBE",
            FixedLocus::Horoball { .. } => "HOROBALL",
            FixedLocus::All => "ALL",
        }
    }

    /// Core geodesic and thickness of an elliptic fixed set.
    pub fn axis_and_radius(&self) -> Result<(&Geodesic, Exponent)> {
        match self {
            FixedLocus::Axis(g) => Ok((g, Exponent::zero())),
            FixedLocus::Tube(g, r) => Ok((g, *r)),
            other => Err(Error::WrongClass { expected: "AXIS or TUBE".into(), found: other.tag().into() }),
        }
    }
}

impl fmt::Display for FixedLocus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixedLocus::TwoPoints(a, b) => write!(f, "TWO_POINTS({a}, {b})"),
            FixedLocus::Axis(g) => write!(f, "AXIS({g})"),
            FixedLocus::Tube(g, r) => write!(f, "TUBE({g}, {r})"),
            FixedLocus::Horoball { fixed_point, boundary } => write!(f, "HOROBALL({fixed_point}, {boundary})"),
            FixedLocus::All => f.write_str("ALL"),
        }
    }
}

fn elem(n: i64) -> FieldElem {
    FieldElem::from_i64(n)
}

/// A map sending `alpha` to 0 and `beta` to `inf`.
pub fn normalizer(alpha: &ProjPoint, beta: &ProjPoint) -> Result<MobiusMap> {
    let one = FieldElem::one();
    match (alpha, beta) {
        (ProjPoint::Finite(a), ProjPoint::Finite(b)) => MobiusMap::new(one.clone(), -a, one, -b),
        (ProjPoint::Finite(a), ProjPoint::Infinity) => MobiusMap::new(one.clone(), -a, FieldElem::zero(), one),
        (ProjPoint::Infinity, ProjPoint::Finite(b)) => MobiusMap::new(FieldElem::zero(), one.clone(), one, -b),
        _ => Err(Error::DegenerateConfiguration("both ends at inf".into())),
    }
}

/// A map sending `xi` to `inf`.
pub fn to_infinity(xi: &ProjPoint) -> MobiusMap {
    match xi {
        ProjPoint::Infinity => MobiusMap::identity(),
        ProjPoint::Finite(x) => MobiusMap::new(FieldElem::zero(), FieldElem::one(), FieldElem::one(), -x).expect("invertible"),
    }
}

/// The order-two map fixing `alpha` and `beta`.
pub fn involution_with_fixed_points(alpha: &ProjPoint, beta: &ProjPoint) -> Result<MobiusMap> {
    match (alpha, beta) {
        _ if alpha == beta => Err(Error::DegenerateConfiguration(format!("involution with a double fixed point {alpha}"))),
        (ProjPoint::Finite(a), ProjPoint::Finite(b)) => {
            let s = a + b;
            MobiusMap::new(s.clone(), -&(&elem(2) * &(a * b)), elem(2), -s)
        }
        (ProjPoint::Finite(a), ProjPoint::Infinity) | (ProjPoint::Infinity, ProjPoint::Finite(a)) => {
            MobiusMap::new(elem(-1), &elem(2) * a, FieldElem::zero(), FieldElem::one())
        }
        _ => unreachable!("distinct points"),
    }
}

/// Primitive homogeneous coordinates: both entries integral, one a unit.
fn primitive(ctx: &PadicContext, z: &ProjPoint) -> Result<(FieldElem, FieldElem)> {
    Ok(match z {
        ProjPoint::Infinity => (FieldElem::one(), FieldElem::zero()),
        ProjPoint::Finite(x) if ctx.is_integral(x)? => (x.clone(), FieldElem::one()),
        ProjPoint::Finite(x) => (FieldElem::one(), x.inv().expect("nonzero")),
    })
}

impl PadicContext {
    pub fn axis(&self, g: &MobiusMap) -> Result<Geodesic> {
        let class = self.classify(g)?;
        match (class, self.fixed_points(g)?) {
            (ElementClass::Parabolic | ElementClass::Identity, _) => {
                Err(Error::WrongClass { expected: "LOXODROMIC or ELLIPTIC".into(), found: class.to_string() })
            }
            (_, FixedPoints::Two(a, b)) => Geodesic::new(a, b),
            _ => unreachable!("two fixed points"),
        }
    }

    /// Involutions with `f . h = g`, using `h = c/z` in diagonal coordinates.
    pub fn factor_involutions(&self, g: &MobiusMap) -> Result<(MobiusMap, MobiusMap)> {
        self.factor_involutions_with(g, &elem(-1))
    }

    pub fn factor_involutions_with(&self, g: &MobiusMap, c: &FieldElem) -> Result<(MobiusMap, MobiusMap)> {
        if c.is_zero() {
            return Err(Error::DegenerateConfiguration("involution parameter 0".into()));
        }
        let (phi, f0, h0) = match self.fixed_points(g)? {
            FixedPoints::All => return Err(Error::WrongClass { expected: "nonidentity".into(), found: "IDENTITY".into() }),
            FixedPoints::One(xi) => {
                let phi1 = to_infinity(&xi);
                let t = g.conjugate_by(&phi1);
                let beta = t.b() / t.d();
                let phi2 = MobiusMap::new(FieldElem::one(), FieldElem::zero(), FieldElem::zero(), beta)?;
                let f0 = MobiusMap::from_ints(-1, 0, 0, 1)?;
                let h0 = MobiusMap::from_ints(-1, -1, 0, 1)?;
                (phi2.compose(&phi1), f0, h0)
            }
            FixedPoints::Two(a, b) => {
                let phi = normalizer(&a, &b)?;
                let t = g.conjugate_by(&phi);
                let k = t.a() / t.d();
                let h0 = MobiusMap::new(FieldElem::zero(), c.clone(), FieldElem::one(), FieldElem::zero())?;
                let f0 = MobiusMap::new(FieldElem::zero(), &k * c, FieldElem::one(), FieldElem::zero())?;
                (phi, f0, h0)
            }
        };
        let inv = phi.inverse();
        let f = f0.conjugate_by(&inv);
        let h = h0.conjugate_by(&inv);
        debug_assert_eq!(&f.compose(&h), g);
        Ok((f, h))
    }

    /// Whether the involution fixing the ends of `b` swaps the ends of `a`.
    pub fn is_orthogonal(&self, a: &Geodesic, b: &Geodesic) -> Result<bool> {
        let s = involution_with_fixed_points(&b.alpha, &b.beta)?;
        Ok(s.apply(&a.alpha) == a.beta && s.apply(&a.beta) == a.alpha)
    }

    /// The geodesic orthogonal to both arguments.
    pub fn common_perpendicular(&self, a: &Geodesic, b: &Geodesic) -> Result<Geodesic> {
        if a.has_end(&b.alpha) || a.has_end(&b.beta) {
            return Err(Error::DegenerateConfiguration(format!("{a} and {b} share an end")));
        }
        let phi = normalizer(&a.alpha, &a.beta)?;
        let (x, y) = (phi.apply(&b.alpha), phi.apply(&b.beta));
        let prod = x.finite().expect("finite") * y.finite().expect("finite");
        let r = self.sqrt_in_field(&prod)?;
        let inv = phi.inverse();
        let c = Geodesic::new(inv.apply(&ProjPoint::Finite(r.clone())), inv.apply(&ProjPoint::Finite(-r)))?;
        if !(self.is_orthogonal(a, &c)? && self.is_orthogonal(b, &c)?) {
            return Err(Error::DegenerateConfiguration(format!("no common perpendicular of {a} and {b}")));
        }
        Ok(c)
    }

    pub fn fixed_locus(&self, g: &MobiusMap) -> Result<FixedLocus> {
        let class = self.classify(g)?;
        let fixed = self.fixed_points(g)?;
        Ok(match (class, fixed) {
            (ElementClass::Identity, _) => FixedLocus::All,
            (ElementClass::Loxodromic, FixedPoints::Two(a, b)) => FixedLocus::TwoPoints(a, b),
            (ElementClass::TameElliptic, FixedPoints::Two(a, b)) => FixedLocus::Axis(Geodesic::new(a, b)?),
            (ElementClass::WildElliptic, FixedPoints::Two(a, b)) => {
                let s = self.abs(&(&g.sigma() - &elem(4)))?;
                let r = -s.exponent().expect("pure power") / 2;
                FixedLocus::Tube(Geodesic::new(a, b)?, r)
            }
            (ElementClass::Parabolic, FixedPoints::One(xi)) => {
                let phi = to_infinity(&xi);
                let t = g.conjugate_by(&phi);
                let e = self.abs(&(t.b() / t.d()))?.exponent().expect("pure power");
                let boundary = self.act(&phi.inverse(), &BerkPoint::disk(FieldElem::zero(), e))?;
                FixedLocus::Horoball { fixed_point: xi, boundary }
            }
            (c, f) => unreachable!("{c} with fixed points {f:?}"),
        })
    }

    /// Whether `g` fixes `x`.
    pub fn locus_membership(&self, g: &MobiusMap, x: &BerkPoint) -> Result<bool> {
        self.berk_eq(&self.act(g, x)?, x)
    }

    /// Distance from a type II point to a geodesic.
    pub fn distance_to_geodesic(&self, x: &BerkPoint, geo: &Geodesic) -> Result<Exponent> {
        let q = self.project(&geo.segment(), x)?;
        self.hyp_dist(x, &q)
    }

    /// Membership in the set described by a locus.
    pub fn locus_contains(&self, locus: &FixedLocus, x: &BerkPoint) -> Result<bool> {
        if let BerkPoint::TypeI(z) = x {
            return Ok(match locus {
                FixedLocus::All => true,
                FixedLocus::TwoPoints(a, b) => z == a || z == b,
                FixedLocus::Axis(g) | FixedLocus::Tube(g, _) => g.has_end(z),
                FixedLocus::Horoball { fixed_point, .. } => z == fixed_point,
            });
        }
        match locus {
            FixedLocus::All => Ok(true),
            FixedLocus::TwoPoints(..) => Ok(false),
            FixedLocus::Axis(g) => self.segment_contains(&g.segment(), x),
            FixedLocus::Tube(g, r) => Ok(self.distance_to_geodesic(x, g)? <= *r),
            FixedLocus::Horoball { fixed_point, boundary } => {
                let y = self.median(x, boundary, &fixed_point.clone().into())?;
                Ok(self.hyp_dist(x, &y)? <= self.hyp_dist(boundary, &y)?)
            }
        }
    }

    /// The point of an elliptic fixed set closest to the Gauss point.
    pub fn nearest_to_gauss(&self, locus: &FixedLocus) -> Result<BerkPoint> {
        let gauss = BerkPoint::gauss();
        if let FixedLocus::All = locus {
            return Ok(gauss);
        }
        let (geo, r) = locus.axis_and_radius()?;
        let q = self.project(&geo.segment(), &gauss)?;
        let d = self.hyp_dist(&gauss, &q)?;
        if d <= r {
            return Ok(gauss);
        }
        self.point_toward(&gauss, &q, d - r)
    }

    /// A common point of two elliptic fixed sets, if they meet.
    pub fn locus_intersect(&self, f1: &FixedLocus, f2: &FixedLocus) -> Result<Option<BerkPoint>> {
        let (a, r1) = f1.axis_and_radius()?;
        let (b, r2) = f2.axis_and_radius()?;
        let (sa, sb) = (a.segment(), b.segment());
        let mc = self.project(&sa, &sb.a)?;
        let md = self.project(&sa, &sb.b)?;
        if !self.berk_eq(&mc, &md)? {
            return Ok(Some(self.median(&mc, &md, &BerkPoint::gauss())?));
        }
        if self.segment_contains(&sb, &mc)? {
            return Ok(Some(mc));
        }
        let r = self.project(&sb, &mc)?;
        let d = self.hyp_dist(&mc, &r)?;
        if d > r1 + r2 {
            return Ok(None);
        }
        Ok(Some(self.point_toward(&mc, &r, d.min(r1))?))
    }

    fn check_involution(&self, f: &MobiusMap) -> Result<()> {
        if self.p() != 2 {
            return Err(Error::WrongClass { expected: "p = 2".into(), found: format!("p = {}", self.p()) });
        }
        if f.is_identity() || !f.compose(f).is_identity() {
            return Err(Error::WrongClass { expected: "involution".into(), found: f.to_string() });
        }
        Ok(())
    }

    /// Tailed axis of an involution at p = 2. The tail is the point of the
    /// first geodesic `(t, f(t))` that `f` fixes, with `t` running through
    /// `inf, 0, 1, -1, 2, -2, ...`.
    pub fn tailed_axis(&self, f: &MobiusMap) -> Result<TailedAxis> {
        self.check_involution(f)?;
        let t = std::iter::once(ProjPoint::Infinity)
            .chain((0i64..).flat_map(|k| if k == 0 { vec![0] } else { vec![k, -k] }).map(ProjPoint::int))
            .find(|t| &f.apply(t) != t)
            .expect("an involution moves all but two points");
        let reference = Geodesic::new(t.clone(), f.apply(&t))?;
        self.tailed_axis_relative(f, &reference)
    }

    /// Tailed axis whose tail lies on a geodesic whose ends `f` swaps.
    pub fn tailed_axis_relative(&self, f: &MobiusMap, reference: &Geodesic) -> Result<TailedAxis> {
        self.check_involution(f)?;
        if f.apply(&reference.alpha) != reference.beta {
            return Err(Error::DegenerateConfiguration(format!("{f} does not swap the ends of {reference}")));
        }
        let axis = self.axis(f)?;
        let seg = reference.segment();
        let y0 = self.project(&seg, &BerkPoint::gauss())?;
        let y1 = self.act(f, &y0)?;
        let d = self.hyp_dist(&y0, &y1)?;
        let tail = self.point_toward(&y0, &y1, d / 2)?;
        if !self.locus_membership(f, &tail)? {
            return Err(Error::DegenerateConfiguration(format!("no fixed point of {f} on {reference}")));
        }
        let foot = self.project(&axis.segment(), &tail)?;
        Ok(TailedAxis { axis, tail, foot })
    }

    /// Whether two tailed axes share a point.
    pub fn tailed_axes_meet(&self, x: &TailedAxis, y: &TailedAxis) -> Result<bool> {
        let pieces = |t: &TailedAxis| [t.axis.segment(), Segment::new(t.tail.clone(), t.foot.clone())];
        for s in &pieces(x) {
            for t in &pieces(y) {
                if self.segment_intersection(s, t)?.is_some() {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// A unitary `u` with `u(0) = alpha` and `u(inf) = beta`, when the two
    /// points are at chordal distance one.
    pub fn antipodal_witness(&self, alpha: &ProjPoint, beta: &ProjPoint) -> Result<Option<MobiusMap>> {
        if alpha == beta {
            return Err(Error::DegenerateConfiguration(format!("equal points {alpha}")));
        }
        if self.chordal(alpha, beta)? < Magnitude::one(self.p()) {
            return Ok(None);
        }
        let (ax, ay) = primitive(self, alpha)?;
        let (bx, by) = primitive(self, beta)?;
        let u = MobiusMap::new(bx, ax, by, ay)?;
        debug_assert!(self.is_unitary(&u)?);
        Ok(Some(u))
    }

    /// `g = u . f` with `u` unitary and `f` either the identity or
    /// loxodromic with antipodal fixed points.
    ///
    /// Uses the Cartan form `g = k1 . diag(1, t) . k2` with `k1`, `k2`
    /// unitary, then `u = k1 . k2` and `f = k2^-1 . diag(1, t) . k2`.
    pub fn decompose_unitary_loxodromic(&self, g: &MobiusMap) -> Result<(MobiusMap, MobiusMap)> {
        self.check_map(g)?;
        let e = g.entries();
        let mut best = 0;
        let mut best_abs = self.abs(&e[0])?;
        for (i, x) in e.iter().enumerate().skip(1) {
            let m = self.abs(x)?;
            if m > best_abs {
                best = i;
                best_abs = m;
            }
        }
        let swap = MobiusMap::from_ints(0, 1, 1, 0)?;
        let pr = if best >= 2 { swap.clone() } else { MobiusMap::identity() };
        let pc = if best % 2 == 1 { swap } else { MobiusMap::identity() };
        let g1 = pr.compose(g).compose(&pc);
        let [a, b, c, _] = g1.entries();
        let (zero, one) = (FieldElem::zero(), FieldElem::one());
        let l_inv = MobiusMap::new(one.clone(), zero.clone(), c / a, one.clone())?;
        let r_inv = MobiusMap::new(one.clone(), b / a, zero, one.clone())?;
        let t = &g1.det() / &(a * a);
        if self.abs(&t)? == Magnitude::one(self.p()) {
            return Ok((g.clone(), MobiusMap::identity()));
        }
        let k1 = pr.compose(&l_inv);
        let k2 = r_inv.compose(&pc);
        let u = k1.compose(&k2);
        let f = MobiusMap::diag(one, t)?.conjugate_by(&k2.inverse());
        debug_assert_eq!(&u.compose(&f), g);
        Ok((u, f))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64) -> PadicContext {
        PadicContext::new(p, None).unwrap()
    }

    fn m(a: i64, b: i64, c: i64, d: i64) -> MobiusMap {
        MobiusMap::from_ints(a, b, c, d).unwrap()
    }

    fn geo(a: ProjPoint, b: ProjPoint) -> Geodesic {
        Geodesic::new(a, b).unwrap()
    }

    fn pt(n: i64) -> ProjPoint {
        ProjPoint::int(n)
    }

    #[test]
    fn axes() {
        let c = ctx(5);
        let g = MobiusMap::diag(FieldElem::from_i64(9), FieldElem::one()).unwrap();
        assert!(c.axis(&g).unwrap().same_line(&geo(pt(0), ProjPoint::Infinity)));
        let shift = m(1, 1, 0, 1);
        assert!(c.axis(&g.conjugate_by(&shift)).unwrap().same_line(&geo(pt(1), ProjPoint::Infinity)));
        assert!(matches!(c.axis(&shift), Err(Error::WrongClass { .. })));
        assert_eq!(geo(pt(0), ProjPoint::Infinity).to_string(), "geo(0, inf)");
    }

    #[test]
    fn involutions() {
        assert_eq!(involution_with_fixed_points(&pt(0), &ProjPoint::Infinity).unwrap(), m(-1, 0, 0, 1));
        assert_eq!(involution_with_fixed_points(&pt(1), &pt(-1)).unwrap(), m(0, 1, 1, 0));
        let f = involution_with_fixed_points(&pt(0), &pt(1)).unwrap();
        assert_eq!(f.apply(&pt(0)), pt(0));
        assert_eq!(f.apply(&pt(1)), pt(1));
        assert!(f.compose(&f).is_identity());
        assert!(involution_with_fixed_points(&pt(2), &pt(2)).is_err());
    }

    #[test]
    fn factorization() {
        let c = ctx(3);
        let (f, h) = c.factor_involutions(&m(1, 1, 0, 1)).unwrap();
        assert_eq!(f, m(-1, 0, 0, 1));
        assert_eq!(h, m(-1, -1, 0, 1));
        let (f, h) = c.factor_involutions(&m(4, 0, 0, 1)).unwrap();
        assert_eq!(f, m(0, -4, 1, 0));
        assert_eq!(h, m(0, -1, 1, 0));
        let g = m(2, 3, 5, 7).conjugate_by(&m(1, 2, 0, 1));
        if let Ok((f, h)) = c.factor_involutions(&g) {
            assert_eq!(f.compose(&h), g);
        }
        assert!(c.factor_involutions(&MobiusMap::identity()).is_err());
    }

    #[test]
    fn orthogonality() {
        let c = ctx(3);
        let a = geo(pt(0), ProjPoint::Infinity);
        assert!(c.is_orthogonal(&a, &geo(pt(-1), pt(1))).unwrap());
        assert!(!c.is_orthogonal(&a, &geo(pt(1), pt(2))).unwrap());
        assert!(!c.is_orthogonal(&a, &a).unwrap());
        let b = geo(pt(3), ProjPoint::Finite(FieldElem::from_ratio(1, 3)));
        let p = c.common_perpendicular(&a, &b).unwrap();
        assert!(p.same_line(&geo(pt(1), pt(-1))));
        let p = c.common_perpendicular(&a, &geo(pt(4), pt(9))).unwrap();
        assert!(p.same_line(&geo(pt(6), pt(-6))));
        assert!(c.common_perpendicular(&a, &geo(pt(0), pt(1))).is_err());
    }

    #[test]
    fn loci() {
        let c = ctx(5);
        let g = MobiusMap::diag(FieldElem::from_i64(4), FieldElem::one()).unwrap();
        let l = c.fixed_locus(&g).unwrap();
        assert!(matches!(&l, FixedLocus::Axis(a) if a.same_line(&geo(pt(0), ProjPoint::Infinity))));
        assert!(c.locus_membership(&g, &BerkPoint::disk_int(0, 7)).unwrap());

        let c3 = ctx(3);
        let g = MobiusMap::diag(FieldElem::from_i64(16), FieldElem::one()).unwrap();
        let l = c3.fixed_locus(&g).unwrap();
        assert!(matches!(&l, FixedLocus::Tube(_, r) if *r == Exponent::from_integer(1)));
        for (a, s) in [(3, 0), (9, -1), (1, 0), (3, -1), (27, -2)] {
            let x = BerkPoint::disk_int(a, s);
            assert_eq!(c3.locus_contains(&l, &x).unwrap(), c3.locus_membership(&g, &x).unwrap(), "{x}");
        }

        let shift = m(1, 1, 0, 1);
        let l = c3.fixed_locus(&shift).unwrap();
        assert!(matches!(&l, FixedLocus::Horoball { fixed_point: ProjPoint::Infinity, boundary }
            if c3.berk_eq(boundary, &BerkPoint::gauss()).unwrap()));
        assert!(c3.locus_membership(&shift, &BerkPoint::gauss()).unwrap());
        assert!(!c3.locus_membership(&shift, &BerkPoint::disk_int(0, -1)).unwrap());
        assert!(!c3.locus_contains(&l, &BerkPoint::disk_int(0, -1)).unwrap());
        assert!(c3.locus_contains(&l, &BerkPoint::disk_int(2, 3)).unwrap());
    }

    #[test]
    fn intersections() {
        let c = ctx(5);
        let a = FixedLocus::Axis(geo(pt(0), ProjPoint::Infinity));
        let b = FixedLocus::Axis(geo(pt(1), pt(-1)));
        let x = c.locus_intersect(&a, &b).unwrap().unwrap();
        assert!(c.berk_eq(&x, &BerkPoint::gauss()).unwrap());

        let c3 = ctx(3);
        let far = FixedLocus::Axis(geo(pt(3), pt(12)));
        assert!(c3.locus_intersect(&a, &far).unwrap().is_none());
        let tube = FixedLocus::Tube(geo(pt(0), ProjPoint::Infinity), Exponent::from_integer(1));
        let x = c3.locus_intersect(&tube, &far).unwrap().unwrap();
        assert!(c3.locus_contains(&tube, &x).unwrap() && c3.locus_contains(&far, &x).unwrap());
    }

    #[test]
    fn tails() {
        let c = PadicContext::new(2, None).unwrap();
        let t = c.tailed_axis(&m(0, 1, 1, 0)).unwrap();
        assert!(c.berk_eq(&t.tail, &BerkPoint::gauss()).unwrap());
        assert_eq!(c.hyp_dist(&t.tail, &t.foot).unwrap(), Exponent::from_integer(1));
        let f = m(-1, 0, 0, 1);
        let t = c.tailed_axis(&f).unwrap();
        assert!(c.locus_membership(&f, &t.tail).unwrap());
        assert!(c.berk_eq(&t.tail, &BerkPoint::disk(FieldElem::one(), Exponent::from_integer(-1))).unwrap());
        assert_eq!(c.hyp_dist(&t.tail, &t.foot).unwrap(), Exponent::from_integer(1));
        assert!(matches!(ctx(3).tailed_axis(&f), Err(Error::WrongClass { .. })));
    }

    #[test]
    fn antipodes() {
        let c = ctx(3);
        assert_eq!(c.antipodal_witness(&pt(0), &ProjPoint::Infinity).unwrap(), Some(MobiusMap::identity()));
        let u = c.antipodal_witness(&pt(0), &pt(1)).unwrap().unwrap();
        assert!(c.is_unitary(&u).unwrap());
        assert_eq!((u.apply(&pt(0)), u.apply(&ProjPoint::Infinity)), (pt(0), pt(1)));
        assert_eq!(c.antipodal_witness(&pt(0), &pt(3)).unwrap(), None);
    }

    #[test]
    fn decompositions() {
        let c = ctx(3);
        let g = m(2, 1, 1, 1);
        assert_eq!(c.decompose_unitary_loxodromic(&g).unwrap(), (g, MobiusMap::identity()));
        let g = m(3, 0, 0, 1);
        assert_eq!(c.decompose_unitary_loxodromic(&g).unwrap(), (MobiusMap::identity(), g));
        let g = MobiusMap::new(FieldElem::one(), FieldElem::from_ratio(1, 3), FieldElem::zero(), FieldElem::one()).unwrap();
        let (u, f) = c.decompose_unitary_loxodromic(&g).unwrap();
        assert!(c.is_unitary(&u).unwrap());
        assert_eq!(c.classify(&f).unwrap(), ElementClass::Loxodromic);
        let FixedPoints::Two(a, b) = c.fixed_points(&f).unwrap() else { panic!() };
        assert!(c.antipodal_witness(&a, &b).unwrap().is_some());
        assert_eq!(u.compose(&f), g);
    }
}
