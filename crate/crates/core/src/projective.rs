//! The projective line over the working field and its chordal metric.

use std::fmt;

use crate::error::{Error, Result};
use crate::padic::{FieldElem, Magnitude, PadicContext};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ProjPoint {
    Finite(FieldElem),
    Infinity,
}

impl ProjPoint {
    pub fn int(n: i64) -> Self {
        ProjPoint::Finite(FieldElem::from_i64(n))
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, ProjPoint::Infinity)
    }

    pub fn finite(&self) -> Option<&FieldElem> {
        match self {
            ProjPoint::Finite(z) => Some(z),
            ProjPoint::Infinity => None,
        }
    }

    /// Homogeneous coordinates `(x, y)` with `z = x / y`.
    pub fn homogeneous(&self) -> (FieldElem, FieldElem) {
        match self {
            ProjPoint::Finite(z) => (z.clone(), FieldElem::one()),
            ProjPoint::Infinity => (FieldElem::one(), FieldElem::zero()),
        }
    }

    pub fn from_homogeneous(x: &FieldElem, y: &FieldElem) -> Self {
        if y.is_zero() {
            assert!(!x.is_zero(), "(0, 0) is not a point");
            ProjPoint::Infinity
        } else {
            ProjPoint::Finite(x / y)
        }
    }
}

impl From<FieldElem> for ProjPoint {
    fn from(z: FieldElem) -> Self {
        ProjPoint::Finite(z)
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjPoint::Finite(z) => write!(f, "{z}"),
            ProjPoint::Infinity => write!(f, "inf"),
        }
    }
}

impl PadicContext {
    pub fn check_point(&self, z: &ProjPoint) -> Result<()> {
        match z {
            ProjPoint::Finite(x) => self.check(x),
            ProjPoint::Infinity => Ok(()),
        }
    }

    /// Chordal distance on the projective line.
    pub fn chordal(&self, z: &ProjPoint, w: &ProjPoint) -> Result<Magnitude> {
        match (z, w) {
            (ProjPoint::Infinity, ProjPoint::Infinity) => Ok(Magnitude::zero(self.p())),
            (ProjPoint::Infinity, ProjPoint::Finite(x)) | (ProjPoint::Finite(x), ProjPoint::Infinity) => {
                Ok(self.max_one(x)?.recip())
            }
            (ProjPoint::Finite(x), ProjPoint::Finite(y)) => {
                let num = self.abs(&(x - y))?;
                if num.is_zero() {
                    return Ok(num);
                }
                Ok(&num / &(&self.max_one(x)? * &self.max_one(y)?))
            }
        }
    }

    /// `rho(x,y) rho(z,w) / (rho(x,z) rho(y,w))`.
    pub fn cross_ratio_chordal(&self, x: &ProjPoint, y: &ProjPoint, z: &ProjPoint, w: &ProjPoint) -> Result<Magnitude> {
        let den = &self.chordal(x, z)? * &self.chordal(y, w)?;
        if den.is_zero() {
            return Err(Error::DegenerateConfiguration(format!(
                "cross ratio of ({x}, {y}, {z}, {w}) has a vanishing denominator"
            )));
        }
        Ok(&(&self.chordal(x, y)? * &self.chordal(z, w)?) / &den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::Exponent;

    #[test]
    fn chordal_examples() {
        let c = PadicContext::new(3, None).unwrap();
        let d = c.chordal(&ProjPoint::zero(), &ProjPoint::int(3)).unwrap();
        assert_eq!(d, Magnitude::p_pow_int(3, -1));
        let z = ProjPoint::Finite(FieldElem::from_ratio(1, 9));
        assert_eq!(c.chordal(&ProjPoint::Infinity, &z).unwrap(), Magnitude::p_pow_int(3, -2));
        assert_eq!(c.chordal(&ProjPoint::Infinity, &ProjPoint::Infinity).unwrap(), Magnitude::zero(3));
        let c5 = PadicContext::new(5, Some(5)).unwrap();
        let s = ProjPoint::Finite(FieldElem::sqrt_disc(5));
        assert_eq!(c5.chordal(&s, &ProjPoint::zero()).unwrap(), Magnitude::p_pow(5, Exponent::new(-1, 2)));
    }

    #[test]
    fn cross_ratio_examples() {
        let c = PadicContext::new(5, None).unwrap();
        let r = c
            .cross_ratio_chordal(&ProjPoint::zero(), &ProjPoint::one(), &ProjPoint::Infinity, &ProjPoint::int(5))
            .unwrap();
        // rho(inf, 5) = 1 / max(1, |5|) = 1, so every factor is 1.
        assert_eq!(r, Magnitude::one(5));
        let e = c.cross_ratio_chordal(&ProjPoint::zero(), &ProjPoint::one(), &ProjPoint::zero(), &ProjPoint::int(2));
        assert!(matches!(e, Err(Error::DegenerateConfiguration(_))));
    }
}
