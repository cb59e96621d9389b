//! Continued fractions `K(a_n | b_n)` through their convergent maps
//! `T_n = t_1 . ... . t_n`, `t_k(z) = a_k / (z + b_k)`.

use crate::error::{Error, Result};
use crate::moebius::MobiusMap;
use crate::padic::{FieldElem, Magnitude, PadicContext};
use crate::projective::ProjPoint;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CFSpec {
    a: Vec<FieldElem>,
    b: Vec<FieldElem>,
}

impl CFSpec {
    pub fn new(a: Vec<FieldElem>, b: Vec<FieldElem>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::DegenerateConfiguration(format!("{} partial numerators, {} denominators", a.len(), b.len())));
        }
        if let Some(i) = a.iter().position(FieldElem::is_zero) {
            return Err(Error::DegenerateConfiguration(format!("a_{} = 0", i + 1)));
        }
        Ok(CFSpec { a, b })
    }

    /// `a_n = b_n = 1` for `n <= len`.
    pub fn unit_ones(len: usize) -> Self {
        CFSpec { a: vec![FieldElem::one(); len], b: vec![FieldElem::one(); len] }
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn a(&self) -> &[FieldElem] {
        &self.a
    }

    pub fn b(&self) -> &[FieldElem] {
        &self.b
    }

    /// `t_n`, 1-based.
    pub fn step(&self, n: usize) -> MobiusMap {
        MobiusMap::new(FieldElem::zero(), self.a[n - 1].clone(), FieldElem::one(), self.b[n - 1].clone())
            .expect("a_n is nonzero")
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if n > self.len() {
            return Err(Error::DegenerateConfiguration(format!("n = {n} exceeds the length {}", self.len())));
        }
        Ok(())
    }

    pub fn convergent_map(&self, n: usize) -> Result<MobiusMap> {
        self.check_len(n)?;
        Ok((1..=n).fold(MobiusMap::identity(), |t, k| t.compose(&self.step(k))))
    }

    /// `T_1, ..., T_n`.
    pub fn convergents(&self, n: usize) -> Result<Vec<MobiusMap>> {
        self.check_len(n)?;
        let mut out = Vec::with_capacity(n);
        let mut t = MobiusMap::identity();
        for k in 1..=n {
            t = t.compose(&self.step(k));
            out.push(t.clone());
        }
        Ok(out)
    }

    /// `T_n(0)`.
    pub fn convergent_value(&self, n: usize) -> Result<ProjPoint> {
        Ok(self.convergent_map(n)?.apply(&ProjPoint::zero()))
    }

    /// `a_1/(b_1 + a_2/(b_2 + ... + a_n/b_n))`, evaluated from the tail.
    pub fn nested_value(&self, n: usize) -> Result<ProjPoint> {
        self.check_len(n)?;
        let mut v = ProjPoint::zero();
        for k in (1..=n).rev() {
            let den = match v {
                ProjPoint::Infinity => {
                    v = ProjPoint::zero();
                    continue;
                }
                ProjPoint::Finite(x) => &x + &self.b[k - 1],
            };
            v = match den.inv() {
                Some(inv) => ProjPoint::Finite(&self.a[k - 1] * &inv),
                None => ProjPoint::Infinity,
            };
        }
        Ok(v)
    }
}

/// Result of the unit-case divergence test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Divergence {
    /// Every `T_n` is unitary, so `rho(T_n(0), T_n(inf)) = 1` for all n
    /// while `T_{n+1}(inf) = T_n(0)`; the values cannot converge.
    Diverges { checked_terms: usize },
    Undetermined { reason: String },
}

impl PadicContext {
    /// `rho(T_n(0), T_n(inf))` for `n = 1..=n_max`.
    pub fn gap_sequence(&self, spec: &CFSpec, n_max: usize) -> Result<Vec<Magnitude>> {
        spec.convergents(n_max)?
            .iter()
            .map(|t| self.chordal(&t.apply(&ProjPoint::zero()), &t.apply(&ProjPoint::Infinity)))
            .collect()
    }

    pub fn diverges_classically_unit_case(&self, spec: &CFSpec) -> Result<Divergence> {
        if spec.is_empty() {
            return Ok(Divergence::Undetermined { reason: "empty fraction".into() });
        }
        if let Some(i) = spec.a.iter().position(|a| !a.is_one()) {
            return Ok(Divergence::Undetermined { reason: format!("a_{} = {} is not 1", i + 1, spec.a[i]) });
        }
        for (i, b) in spec.b.iter().enumerate() {
            if !self.is_integral(b)? {
                return Ok(Divergence::Undetermined { reason: format!("|b_{}| > 1", i + 1) });
            }
        }
        Ok(Divergence::Diverges { checked_terms: spec.len() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convergents() {
        let s = CFSpec::unit_ones(3);
        assert_eq!(s.convergent_map(1).unwrap(), MobiusMap::from_ints(0, 1, 1, 1).unwrap());
        assert_eq!(s.convergent_value(1).unwrap(), ProjPoint::one());
        let v = ProjPoint::Finite(FieldElem::from_ratio(2, 3));
        assert_eq!(s.convergent_value(3).unwrap(), v);
        assert_eq!(s.nested_value(3).unwrap(), v);
        for n in 1..3 {
            assert_eq!(s.convergent_map(n + 1).unwrap().apply(&ProjPoint::Infinity), s.convergent_value(n).unwrap());
        }
        assert!(s.convergent_map(4).is_err());
    }

    #[test]
    fn gaps_and_divergence() {
        let c = PadicContext::new(3, None).unwrap();
        let s = CFSpec::unit_ones(10);
        assert!(c.gap_sequence(&s, 10).unwrap().iter().all(|g| *g == Magnitude::one(3)));
        assert_eq!(c.diverges_classically_unit_case(&s).unwrap(), Divergence::Diverges { checked_terms: 10 });
        let s = CFSpec::new(vec![FieldElem::from_i64(3)], vec![FieldElem::zero()]).unwrap();
        assert_eq!(c.gap_sequence(&s, 1).unwrap(), vec![Magnitude::one(3)]);
        assert!(matches!(c.diverges_classically_unit_case(&s).unwrap(), Divergence::Undetermined { .. }));
        let s = CFSpec::new(vec![FieldElem::one(); 3], (1..=3).map(|i| c.p_power(i)).collect()).unwrap();
        assert!(matches!(c.diverges_classically_unit_case(&s).unwrap(), Divergence::Diverges { .. }));
        let s = CFSpec::new(vec![FieldElem::one(); 4], vec![FieldElem::from_ratio(1, 3); 4]).unwrap();
        assert!(c.gap_sequence(&s, 4).unwrap().iter().any(|g| *g < Magnitude::one(3)));
    }
}
