//! Seeded random field elements, points and maps, including maps of a
//! prescribed class.
//!
//! Elements are `p^k u` with `k` drawn from an exponent window and `u` a
//! random unit rational, plus a random multiple of `sqrt(D)` half of the time
//! when the context has a discriminant.

use rand::Rng;

use crate::berkovich::BerkPoint;
use crate::error::{Error, Result};
use crate::moebius::{ElementClass, MobiusMap};
use crate::padic::{rat, Exponent, FieldElem, PadicContext};
use crate::projective::ProjPoint;

/// Inclusive range of p-adic exponents for random elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Default for Window {
    fn default() -> Self {
        Window { lo: -3, hi: 3 }
    }
}

pub struct Sampler<'a, R: Rng> {
    pub ctx: &'a PadicContext,
    pub rng: R,
    pub window: Window,
}

/// Retry limit for rejection sampling.
const ATTEMPTS: usize = 1000;

impl<'a, R: Rng> Sampler<'a, R> {
    pub fn new(ctx: &'a PadicContext, rng: R) -> Self {
        Sampler { ctx, rng, window: Window::default() }
    }

    pub fn with_window(mut self, window: Window) -> Self {
        self.window = window;
        self
    }

    /// A rational `n/d` with `p` dividing neither.
    pub fn unit_rational(&mut self) -> FieldElem {
        let p = self.ctx.p() as i64;
        let mut draw = |max: i64| loop {
            let n = self.rng.gen_range(1..=max);
            if n % p != 0 {
                break n;
            }
        };
        let (n, d) = (draw(60), draw(20));
        let s = if self.rng.gen_bool(0.5) { 1 } else { -1 };
        FieldElem::from_ratio(s * n, d)
    }

    fn scaled_unit(&mut self, lo: i64, hi: i64) -> FieldElem {
        let k = self.rng.gen_range(lo..=hi);
        &self.ctx.p_power(k) * &self.unit_rational()
    }

    fn with_root(&mut self, x: FieldElem, lo: i64, hi: i64) -> FieldElem {
        match self.ctx.disc() {
            Some(d) if self.rng.gen_bool(0.5) => {
                let y = self.scaled_unit(lo, hi);
                &x + &(&y * &FieldElem::sqrt_disc(d))
            }
            _ => x,
        }
    }

    /// Nonzero element with exponent in the window.
    pub fn elem(&mut self) -> FieldElem {
        let (lo, hi) = (self.window.lo, self.window.hi);
        let x = self.scaled_unit(lo, hi);
        self.with_root(x, lo, hi)
    }

    /// Nonzero rational element with exponent in the window.
    pub fn rational_elem(&mut self) -> FieldElem {
        let (lo, hi) = (self.window.lo, self.window.hi);
        self.scaled_unit(lo, hi)
    }

    /// Element of absolute value at most 1, zero with probability `zero`.
    pub fn integral(&mut self, zero: f64) -> FieldElem {
        if self.rng.gen_bool(zero) {
            return FieldElem::zero();
        }
        let hi = self.window.hi.max(1);
        let x = self.scaled_unit(0, hi);
        self.with_root(x, 0, hi)
    }

    pub fn elem_or_zero(&mut self, zero: f64) -> FieldElem {
        if self.rng.gen_bool(zero) {
            FieldElem::zero()
        } else {
            self.elem()
        }
    }

    pub fn point(&mut self) -> ProjPoint {
        match self.rng.gen_range(0..20) {
            0 | 1 => ProjPoint::Infinity,
            2 => ProjPoint::zero(),
            _ => ProjPoint::Finite(self.elem()),
        }
    }

    /// Type II point with a half-integral radius exponent in the window.
    pub fn disk(&mut self) -> BerkPoint {
        let c = self.elem_or_zero(0.1);
        let s = self.rng.gen_range(2 * self.window.lo..=2 * self.window.hi);
        BerkPoint::disk(c, Exponent::new(s, 2))
    }

    pub fn map(&mut self) -> MobiusMap {
        for _ in 0..ATTEMPTS {
            let e: Vec<FieldElem> = (0..4).map(|_| self.elem_or_zero(0.15)).collect();
            if let Ok(g) = MobiusMap::new(e[0].clone(), e[1].clone(), e[2].clone(), e[3].clone()) {
                return g;
            }
        }
        unreachable!("random matrices are invertible with high probability")
    }

    /// Map with rational entries.
    pub fn rational_map(&mut self) -> MobiusMap {
        for _ in 0..ATTEMPTS {
            let mut e: Vec<FieldElem> = (0..4).map(|_| self.rational_elem()).collect();
            for x in e.iter_mut() {
                if self.rng.gen_bool(0.15) {
                    *x = FieldElem::zero();
                }
            }
            if let Ok(g) = MobiusMap::new(e[0].clone(), e[1].clone(), e[2].clone(), e[3].clone()) {
                return g;
            }
        }
        unreachable!("random matrices are invertible with high probability")
    }

    /// Map with integral entries and unit determinant.
    pub fn unitary(&mut self) -> MobiusMap {
        for _ in 0..ATTEMPTS {
            let e: Vec<FieldElem> = (0..4).map(|_| self.integral(0.2)).collect();
            let det = &(&e[0] * &e[3]) - &(&e[1] * &e[2]);
            if det.is_zero() || self.ctx.is_integral(&det.inv().expect("nonzero")).ok() != Some(true) {
                continue;
            }
            return MobiusMap::new(e[0].clone(), e[1].clone(), e[2].clone(), e[3].clone()).expect("invertible");
        }
        unreachable!("unit determinants occur with positive probability")
    }

    /// Trace of the companion form `(0,-1;1,t)` for a class.
    fn companion_trace(&mut self, class: ElementClass) -> Result<FieldElem> {
        let p = self.ctx.p() as i64;
        let one = FieldElem::one();
        Ok(match class {
            ElementClass::Parabolic => FieldElem::from_i64(2),
            ElementClass::Loxodromic => {
                let j = self.rng.gen_range(1..=3);
                &self.ctx.p_power(-j) * &self.unit_rational()
            }
            ElementClass::WildElliptic => {
                loop {
                    let j = self.rng.gen_range(1..=3);
                    let s = if self.rng.gen_bool(0.5) { 2 } else { -2 };
                    let t = &FieldElem::from_i64(s) + &(&self.ctx.p_power(j) * &self.unit_rational());
                    // At p = 2 the shift can land on the other of 2 and -2.
                    if t != FieldElem::from_i64(-s) {
                        break t;
                    }
                }
            }
            ElementClass::TameElliptic => {
                for _ in 0..ATTEMPTS {
                    let t = if self.rng.gen_bool(0.3) {
                        &self.ctx.p_power(self.rng.gen_range(1..=3)) * &self.unit_rational()
                    } else {
                        self.unit_rational()
                    };
                    let s = &(&t * &t) - &FieldElem::from_i64(4);
                    if self.ctx.abs(&s)? == crate::padic::Magnitude::one(self.ctx.p()) {
                        return Ok(t);
                    }
                }
                if p == 2 { one } else { FieldElem::zero() }
            }
            ElementClass::Identity => return Err(Error::DegenerateConfiguration("identity has no companion form".into())),
        })
    }

    /// Conjugate of a rational normal form of the class by a random map.
    pub fn map_of_class(&mut self, class: ElementClass) -> Result<MobiusMap> {
        if class == ElementClass::Identity {
            return Ok(MobiusMap::identity());
        }
        let t = self.companion_trace(class)?;
        let c = MobiusMap::new(FieldElem::zero(), FieldElem::from_i64(-1), FieldElem::one(), t)?;
        let g = c.conjugate_by(&self.map());
        debug_assert_eq!(self.ctx.classify(&g)?, class);
        Ok(g)
    }

    /// Multiplier `k` such that `z -> k z` has the class.
    pub fn multiplier(&mut self, class: ElementClass) -> Result<FieldElem> {
        let p = self.ctx.p();
        let j = self.rng.gen_range(1..=3);
        Ok(match class {
            ElementClass::Loxodromic => {
                let s = if self.rng.gen_bool(0.5) { j } else { -j };
                &self.ctx.p_power(s) * &self.unit_rational()
            }
            ElementClass::WildElliptic => &FieldElem::one() + &(&self.ctx.p_power(j) * &self.unit_rational()),
            ElementClass::TameElliptic if p != 2 => loop {
                let u = self.unit_rational();
                if !self.ctx.is_integral(&(&(&u - &FieldElem::one()) / &self.ctx.p_elem()))? {
                    break u;
                }
            },
            ElementClass::TameElliptic => match self.ctx.disc() {
                // (1 + sqrt D)/2 reduces outside F_2 when D = 5 mod 8.
                Some(d) if d.rem_euclid(8) == 5 => {
                    let w = FieldElem::new(rat(1, 2), rat(1, 2), Some(d));
                    let u = &FieldElem::one() + &(&FieldElem::from_i64(2) * &self.unit_rational());
                    &w * &u
                }
                _ => return Err(Error::unsupported(-3)),
            },
            _ => return Err(Error::WrongClass { expected: "elliptic or loxodromic".into(), found: class.to_string() }),
        })
    }

    /// Map of the class whose fixed points lie in the field: a conjugate of
    /// `z -> k z`, or of `z -> z + 1` when parabolic.
    pub fn diagonalizable_of_class(&mut self, class: ElementClass) -> Result<MobiusMap> {
        let h = self.map();
        self.diagonalizable_conjugated(class, &h)
    }

    pub fn diagonalizable_conjugated(&mut self, class: ElementClass, h: &MobiusMap) -> Result<MobiusMap> {
        let normal = match class {
            ElementClass::Identity => return Ok(MobiusMap::identity()),
            ElementClass::Parabolic => MobiusMap::from_ints(1, 1, 0, 1)?,
            _ => MobiusMap::diag(self.multiplier(class)?, FieldElem::one())?,
        };
        let g = normal.conjugate_by(h);
        debug_assert_eq!(self.ctx.classify(&g)?, class);
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn classes_are_exact() {
        for (p, d) in [(2, None), (2, Some(-3)), (3, None), (3, Some(-1)), (5, Some(5)), (7, None)] {
            let ctx = PadicContext::new(p, d).unwrap();
            let mut s = Sampler::new(&ctx, ChaCha8Rng::seed_from_u64(7));
            for class in ElementClass::ALL {
                for _ in 0..20 {
                    assert_eq!(ctx.classify(&s.map_of_class(class).unwrap()).unwrap(), class);
                    match s.diagonalizable_of_class(class) {
                        Ok(g) => assert_eq!(ctx.classify(&g).unwrap(), class),
                        Err(e) => assert!(p == 2 && class == ElementClass::TameElliptic, "{e}"),
                    }
                }
            }
            for _ in 0..20 {
                assert!(ctx.is_unitary(&s.unitary()).unwrap());
            }
        }
    }
}
