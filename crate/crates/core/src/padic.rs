//! Exact arithmetic in Q(sqrt D) together with the p-adic absolute value.
//!
//! Elements are pairs of rationals `a + b*sqrt(D)`. The absolute value is
//! computed exactly: through the norm when `D` is not a square in Q_p, and
//! through a Hensel-lifted square root of `D` when it is.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;
/// Exponent of a magnitude `c * p^e`.
pub type Exponent = Ratio<i64>;

/// Default number of p-adic digits a split square root may be lifted to.
pub const DEFAULT_PRECISION_CAP: usize = 64;
/// Environment variable overriding [`DEFAULT_PRECISION_CAP`].
pub const PRECISION_CAP_ENV: &str = "PADIC_PRECISION_CAP";

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `a + b*sqrt(D)` with rational `a`, `b`. The discriminant is `None`
/// exactly when `b == 0`, so structural equality is field equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElem {
    a: Rational,
    b: Rational,
    disc: Option<i64>,
}

fn join_disc(x: Option<i64>, y: Option<i64>) -> Option<i64> {
    match (x, y) {
        (Some(d), Some(e)) => {
            assert_eq!(d, e, "mixing elements of Q(sqrt {d}) and Q(sqrt {e})");
            Some(d)
        }
        (d, None) | (None, d) => d,
    }
}

impl FieldElem {
    pub fn new(a: Rational, b: Rational, disc: Option<i64>) -> Self {
        if b.is_zero() {
            FieldElem { a, b, disc: None }
        } else {
            assert!(disc.is_some(), "irrational part without a discriminant");
            FieldElem { a, b, disc }
        }
    }

    pub fn rational(a: Rational) -> Self {
        FieldElem { a, b: Rational::zero(), disc: None }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::rational(int(n))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::rational(rat(n, d))
    }

    pub fn zero() -> Self {
        Self::from_i64(0)
    }

    pub fn one() -> Self {
        Self::from_i64(1)
    }

    /// The element `sqrt(D)`.
    pub fn sqrt_disc(disc: i64) -> Self {
        Self::new(Rational::zero(), Rational::one(), Some(disc))
    }

    pub fn re(&self) -> &Rational {
        &self.a
    }

    pub fn irr(&self) -> &Rational {
        &self.b
    }

    pub fn disc(&self) -> Option<i64> {
        self.disc
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.a.clone(), -self.b.clone(), self.disc)
    }

    /// Field norm `a^2 - D b^2`.
    pub fn norm(&self) -> Rational {
        match self.disc {
            None => &self.a * &self.a,
            Some(d) => &self.a * &self.a - int(d) * &self.b * &self.b,
        }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(Self::new(&self.a / &n, -(&self.b / &n), self.disc))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self::new(&self.a * q, &self.b * q, self.disc)
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Exact square root inside Q(sqrt D), if one exists there.
    pub fn sqrt_exact(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.b.is_zero() {
            return rational_sqrt(&self.a).map(Self::rational);
        }
        let d = self.disc.expect("irrational element has a discriminant");
        let n = rational_sqrt(&self.norm())?;
        for cand in [&self.a + &n, &self.a - &n] {
            let u2 = cand / int(2);
            if u2.is_zero() {
                continue;
            }
            if let Some(u) = rational_sqrt(&u2) {
                let v = &self.b / (int(2) * &u);
                let r = Self::new(u, v, Some(d));
                if &(&r * &r) == self {
                    return Some(r);
                }
            }
        }
        None
    }

    /// Exact square root, allowing the context discriminant for rationals.
    pub fn sqrt_in(&self, disc: Option<i64>) -> Option<Self> {
        if let Some(r) = self.sqrt_exact() {
            return Some(r);
        }
        if self.b.is_zero() {
            let d = disc?;
            let r = rational_sqrt(&(&self.a / int(d)))?;
            return Some(Self::new(Rational::zero(), r, Some(d)));
        }
        None
    }
}

/// Square root of a rational that is a perfect square in Q.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Squarefree kernel of a nonzero rational, as the discriminant its square
/// root would need.
pub fn squarefree_kernel(q: &Rational) -> BigInt {
    let mut m = q.numer() * q.denom();
    let sign = if m.is_negative() { -1 } else { 1 };
    m = m.abs();
    let mut out = BigInt::one();
    let mut f = BigInt::from(2);
    while &f * &f <= m {
        let mut e = 0;
        while (&m % &f).is_zero() {
            m /= &f;
            e += 1;
        }
        if e % 2 == 1 {
            out *= &f;
        }
        f += 1;
    }
    out * m * sign
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: FieldElem) -> FieldElem {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: &'a FieldElem) -> FieldElem {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<FieldElem> for &'a FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: FieldElem) -> FieldElem {
                self.$method(&rhs)
            }
        }
    };
}

impl<'b> Add<&'b FieldElem> for &FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: &'b FieldElem) -> FieldElem {
        FieldElem::new(&self.a + &rhs.a, &self.b + &rhs.b, join_disc(self.disc, rhs.disc))
    }
}

impl<'b> Sub<&'b FieldElem> for &FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: &'b FieldElem) -> FieldElem {
        FieldElem::new(&self.a - &rhs.a, &self.b - &rhs.b, join_disc(self.disc, rhs.disc))
    }
}

impl<'b> Mul<&'b FieldElem> for &FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: &'b FieldElem) -> FieldElem {
        let disc = join_disc(self.disc, rhs.disc);
        let bb = &self.b * &rhs.b;
        let a = match disc {
            Some(d) if !bb.is_zero() => &self.a * &rhs.a + int(d) * bb,
            _ => &self.a * &rhs.a,
        };
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        FieldElem::new(a, b, disc)
    }
}

impl<'b> Div<&'b FieldElem> for &FieldElem {
    type Output = FieldElem;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &'b FieldElem) -> FieldElem {
        self * &rhs.inv().expect("division by zero field element")
    }
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem::new(-self.a, -self.b, self.disc)
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -(self.clone())
    }
}

impl From<i64> for FieldElem {
    fn from(n: i64) -> Self {
        FieldElem::from_i64(n)
    }
}

impl From<Rational> for FieldElem {
    fn from(q: Rational) -> Self {
        FieldElem::rational(q)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(d) = self.disc else {
            return write!(f, "{}", self.a);
        };
        let root = |b: &Rational| {
            if b.is_one() {
                format!("sqrt({d})")
            } else {
                format!("{b}*sqrt({d})")
            }
        };
        if self.a.is_zero() {
            if self.b.is_negative() {
                write!(f, "-{}", root(&-self.b.clone()))
            } else {
                f.write_str(&root(&self.b))
            }
        } else if self.b.is_negative() {
            write!(f, "{}-{}", self.a, root(&-self.b.clone()))
        } else {
            write!(f, "{}+{}", self.a, root(&self.b))
        }
    }
}

/// A nonnegative real number `c * p^e` with rational `c > 0` and rational `e`,
/// or zero. The coefficient is kept free of factors of `p`, which makes the
/// representation canonical.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Magnitude {
    p: u64,
    repr: Option<(Rational, Exponent)>,
}

impl Magnitude {
    pub fn zero(p: u64) -> Self {
        Magnitude { p, repr: None }
    }

    pub fn one(p: u64) -> Self {
        Self::p_pow(p, Exponent::zero())
    }

    /// `p^e`.
    pub fn p_pow(p: u64, e: Exponent) -> Self {
        Magnitude { p, repr: Some((Rational::one(), e)) }
    }

    pub fn p_pow_int(p: u64, e: i64) -> Self {
        Self::p_pow(p, Exponent::from_integer(e))
    }

    /// The real number `q > 0` viewed as a magnitude.
    pub fn real(p: u64, q: Rational) -> Self {
        assert!(q.is_positive(), "magnitudes are nonnegative");
        Self::normalized(p, q, Exponent::zero())
    }

    fn normalized(p: u64, c: Rational, mut e: Exponent) -> Self {
        if c.is_zero() {
            return Self::zero(p);
        }
        let pb = BigInt::from(p);
        let (mut n, mut d) = (c.numer().clone(), c.denom().clone());
        while (&n % &pb).is_zero() {
            n /= &pb;
            e += 1;
        }
        while (&d % &pb).is_zero() {
            d /= &pb;
            e -= 1;
        }
        Magnitude { p, repr: Some((Rational::new(n, d), e)) }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.repr.is_none()
    }

    pub fn coeff(&self) -> Option<&Rational> {
        self.repr.as_ref().map(|r| &r.0)
    }

    /// `log_p` of a pure power of `p`.
    pub fn exponent(&self) -> Option<Exponent> {
        match &self.repr {
            Some((c, e)) if c.is_one() => Some(*e),
            _ => None,
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        match &self.repr {
            None => self.clone(),
            Some((c, e)) => Self::normalized(self.p, c * q, *e),
        }
    }

    pub fn recip(&self) -> Self {
        let (c, e) = self.repr.as_ref().expect("reciprocal of zero magnitude");
        Self::normalized(self.p, c.recip(), -*e)
    }

    /// Square root, available when the coefficient is a rational square.
    pub fn sqrt(&self) -> Option<Self> {
        match &self.repr {
            None => Some(self.clone()),
            Some((c, e)) => {
                let r = rational_sqrt(c)?;
                Some(Self::normalized(self.p, r, *e / 2))
            }
        }
    }

    pub fn powi(&self, n: i64) -> Self {
        match &self.repr {
            None => {
                assert!(n > 0, "nonpositive power of zero");
                self.clone()
            }
            Some((c, e)) => {
                let cc = if n >= 0 {
                    num_traits::pow(c.clone(), n as usize)
                } else {
                    num_traits::pow(c.recip(), (-n) as usize)
                };
                Self::normalized(self.p, cc, *e * n)
            }
        }
    }

    /// Floating approximation, for display and sanity checks only.
    pub fn to_f64(&self) -> f64 {
        match &self.repr {
            None => 0.0,
            Some((c, e)) => {
                c.to_f64().unwrap_or(f64::NAN)
                    * (self.p as f64).powf(*e.numer() as f64 / *e.denom() as f64)
            }
        }
    }

    pub fn max_of<'a>(items: impl IntoIterator<Item = &'a Magnitude>, p: u64) -> Magnitude {
        items.into_iter().fold(Magnitude::zero(p), |m, x| if x > &m { x.clone() } else { m })
    }
}

impl Mul for &Magnitude {
    type Output = Magnitude;
    fn mul(self, rhs: &Magnitude) -> Magnitude {
        assert_eq!(self.p, rhs.p, "magnitudes over different primes");
        match (&self.repr, &rhs.repr) {
            (Some((c1, e1)), Some((c2, e2))) => Magnitude::normalized(self.p, c1 * c2, e1 + e2),
            _ => Magnitude::zero(self.p),
        }
    }
}

impl Div for &Magnitude {
    type Output = Magnitude;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Magnitude) -> Magnitude {
        self * &rhs.recip()
    }
}

impl Mul for Magnitude {
    type Output = Magnitude;
    fn mul(self, rhs: Magnitude) -> Magnitude {
        &self * &rhs
    }
}

impl Div for Magnitude {
    type Output = Magnitude;
    fn div(self, rhs: Magnitude) -> Magnitude {
        &self / &rhs
    }
}

impl PartialOrd for Magnitude {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Magnitude {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.repr, &other.repr) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some((c1, e1)), Some((c2, e2))) => {
                assert_eq!(self.p, other.p, "magnitudes over different primes");
                if c1 == c2 {
                    return e1.cmp(e2);
                }
                // c1 p^e1 vs c2 p^e2 with e1 - e2 = n/d: compare c1^d p^n with c2^d.
                let diff = e1 - e2;
                let (n, d) = (*diff.numer(), *diff.denom() as usize);
                let pb = Rational::from_integer(BigInt::from(self.p));
                let mut lhs = num_traits::pow(c1.clone(), d);
                let mut rhs = num_traits::pow(c2.clone(), d);
                if n >= 0 {
                    lhs *= num_traits::pow(pb, n as usize);
                } else {
                    rhs *= num_traits::pow(pb, (-n) as usize);
                }
                lhs.cmp(&rhs)
            }
        }
    }
}

impl fmt::Display for Magnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            None => write!(f, "0"),
            Some((c, e)) if e.is_zero() => write!(f, "{c}"),
            Some((c, e)) if c.is_one() => write!(f, "{}^({})", self.p, e),
            Some((c, e)) => write!(f, "{}*{}^({})", c, self.p, e),
        }
    }
}

/// Base-p digits of a square root of a p-adic unit, together with the
/// valuation of the full root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HenselRoot {
    p: u64,
    valuation: i64,
    digits: Vec<u64>,
    unit: BigInt,
}

impl HenselRoot {
    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn known_precision(&self) -> usize {
        self.digits.len()
    }

    /// The unit part of the root modulo `p^n`.
    pub fn unit_mod(&self, n: usize) -> BigInt {
        assert!(n <= self.known_precision());
        self.unit.mod_floor(&num_traits::pow(BigInt::from(self.p), n))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SquareClass {
    Square(HenselRoot),
    NonSquare,
}

/// Working context: the prime, the optional quadratic discriminant and the
/// lifting cap. Immutable once built, so it can be shared across threads.
#[derive(Clone, Debug)]
pub struct PadicContext {
    p: u64,
    p_big: BigInt,
    disc: Option<i64>,
    precision_cap: usize,
    disc_root: Option<HenselRoot>,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut f = 2u64;
    while f.saturating_mul(f) <= p {
        if p.is_multiple_of(f) {
            return false;
        }
        f += 1;
    }
    true
}

fn is_squarefree(d: i64) -> bool {
    let m = d.unsigned_abs();
    let mut f = 2u64;
    while f.saturating_mul(f) <= m {
        if m.is_multiple_of(f * f) {
            return false;
        }
        f += 1;
    }
    true
}

fn env_precision_cap() -> usize {
    std::env::var(PRECISION_CAP_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .filter(|&c: &usize| c > 0)
        .unwrap_or(DEFAULT_PRECISION_CAP)
}

impl PadicContext {
    /// Context over Q_p, optionally extended by `sqrt(disc)`.
    pub fn new(p: u64, disc: Option<i64>) -> Result<Self> {
        Self::with_precision_cap(p, disc, env_precision_cap())
    }

    pub fn with_precision_cap(p: u64, disc: Option<i64>, precision_cap: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidContext(format!("{p} is not prime")));
        }
        if let Some(d) = disc {
            if d == 0 || d == 1 || !is_squarefree(d) {
                return Err(Error::InvalidContext(format!(
                    "discriminant {d} must be squarefree and different from 0 and 1"
                )));
            }
        }
        let mut ctx = PadicContext {
            p,
            p_big: BigInt::from(p),
            disc,
            precision_cap: precision_cap.max(1),
            disc_root: None,
        };
        if let Some(d) = disc {
            if let SquareClass::Square(root) = ctx.sqrt_in_qp(&int(d))? {
                ctx.disc_root = Some(root);
            }
        }
        Ok(ctx)
    }

    pub fn rational(p: u64) -> Result<Self> {
        Self::new(p, None)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn disc(&self) -> Option<i64> {
        self.disc
    }

    pub fn precision_cap(&self) -> usize {
        self.precision_cap
    }

    /// True when the discriminant is a square in Q_p.
    pub fn disc_is_split(&self) -> bool {
        self.disc_root.is_some()
    }

    /// Canonical Hensel root of the discriminant when it splits.
    pub fn disc_root(&self) -> Option<&HenselRoot> {
        self.disc_root.as_ref()
    }

    /// The same prime with a different discriminant.
    pub fn with_disc(&self, disc: Option<i64>) -> Result<Self> {
        Self::with_precision_cap(self.p, disc, self.precision_cap)
    }

    /// Checks that an element lives in this context's field.
    pub fn check(&self, x: &FieldElem) -> Result<()> {
        match (x.disc, self.disc) {
            (None, _) => Ok(()),
            (Some(d), Some(e)) if d == e => Ok(()),
            (Some(d), _) => Err(Error::unsupported(d)),
        }
    }

    pub fn sqrt_disc(&self) -> Option<FieldElem> {
        self.disc.map(FieldElem::sqrt_disc)
    }

    /// `p` as a field element.
    pub fn p_elem(&self) -> FieldElem {
        FieldElem::rational(Rational::from_integer(self.p_big.clone()))
    }

    /// `p^k` as a field element.
    pub fn p_power(&self, k: i64) -> FieldElem {
        FieldElem::rational(pow_signed(&self.p_big, k))
    }

    pub fn vp_int(&self, n: &BigInt) -> Option<i64> {
        if n.is_zero() {
            return None;
        }
        if self.p == 2 {
            return n.trailing_zeros().map(|t| t as i64);
        }
        let mut m = n.clone();
        let mut v = 0;
        loop {
            let (q, r) = m.div_rem(&self.p_big);
            if !r.is_zero() {
                return Some(v);
            }
            m = q;
            v += 1;
        }
    }

    /// p-adic valuation of a rational; `None` stands for `+inf`.
    pub fn vp(&self, q: &Rational) -> Option<i64> {
        let n = self.vp_int(q.numer())?;
        let d = self.vp_int(q.denom()).expect("nonzero denominator");
        Some(n - d)
    }

    pub fn abs_rational(&self, q: &Rational) -> Magnitude {
        match self.vp(q) {
            None => Magnitude::zero(self.p),
            Some(v) => Magnitude::p_pow_int(self.p, -v),
        }
    }

    /// Reduction of a p-integral rational modulo `p^n`.
    fn reduce_mod(&self, q: &Rational, n: usize) -> BigInt {
        let m = num_traits::pow(self.p_big.clone(), n);
        let inv = mod_inverse(q.denom(), &m).expect("p-integral rational");
        (q.numer() * inv).mod_floor(&m)
    }

    /// Square-class test in Q_p; squares come with their canonical root.
    pub fn sqrt_in_qp(&self, x: &Rational) -> Result<SquareClass> {
        let v = match self.vp(x) {
            None => return Err(Error::DegenerateConfiguration("square root of zero".into())),
            Some(v) => v,
        };
        if v % 2 != 0 {
            return Ok(SquareClass::NonSquare);
        }
        let unit = x * pow_signed(&self.p_big, -v);
        let n = self.precision_cap;
        let root = if self.p == 2 {
            if self.reduce_mod(&unit, 3) != BigInt::one() {
                return Ok(SquareClass::NonSquare);
            }
            let work = n.max(3);
            let u = self.reduce_mod(&unit, work + 2);
            let mut r = BigInt::one();
            for k in 3..(work + 2) {
                let m = BigInt::one() << (k + 1);
                if !(&r * &r - &u).mod_floor(&m).is_zero() {
                    r += BigInt::one() << (k - 1);
                }
            }
            let m = BigInt::one() << work;
            let r = r.mod_floor(&m);
            let other = (&m - &r).mod_floor(&m);
            let eight = BigInt::from(8);
            if other.mod_floor(&eight) < r.mod_floor(&eight) {
                other
            } else {
                r
            }
        } else {
            let u1 = self.reduce_mod(&unit, 1);
            let r0 = match sqrt_mod_prime(&u1, &self.p_big) {
                None => return Ok(SquareClass::NonSquare),
                Some(r) => r,
            };
            let r0 = std::cmp::min(r0.clone(), &self.p_big - &r0);
            let u = self.reduce_mod(&unit, n);
            let mut r = r0;
            let mut prec = 1usize;
            while prec < n {
                prec = (2 * prec).min(n);
                let m = num_traits::pow(self.p_big.clone(), prec);
                let um = u.mod_floor(&m);
                let inv = mod_inverse(&(BigInt::from(2) * &r), &m).expect("unit derivative");
                r = (&r - (&r * &r - um) * inv).mod_floor(&m);
            }
            r
        };
        let digits = to_digits(&root, &self.p_big, n);
        let unit_root = root.mod_floor(&num_traits::pow(self.p_big.clone(), n));
        Ok(SquareClass::Square(HenselRoot { p: self.p, valuation: v / 2, digits, unit: unit_root }))
    }

    /// Exact `|x|_p`, extended uniquely to Q_p(sqrt D).
    pub fn abs(&self, x: &FieldElem) -> Result<Magnitude> {
        if x.is_zero() {
            return Ok(Magnitude::zero(self.p));
        }
        if x.b.is_zero() {
            return Ok(self.abs_rational(&x.a));
        }
        self.check(x)?;
        let n = self.vp(&x.norm()).expect("nonzero norm");
        let root = match &self.disc_root {
            None => return Ok(Magnitude::p_pow(self.p, Exponent::new(-n, 2))),
            Some(r) => r,
        };
        // Split case: evaluate a + b*s in Z_p with s the canonical root of D.
        // With x' = a - b*s, v(x) + v(x') = n and v(x') >= min(v(a), v(b)),
        // which bounds the precision needed.
        let va = self.vp(&x.a);
        let vb = self.vp(&x.b).expect("irrational part is nonzero");
        let m = va.map_or(vb, |va| va.min(vb));
        let q = x.a.denom().lcm(x.b.denom());
        let vq = self.vp_int(&q).expect("nonzero");
        let big_a = (&x.a * Rational::from_integer(q.clone())).to_integer();
        let big_b = (&x.b * Rational::from_integer(q.clone())).to_integer();
        let bound = n - m + vq;
        let needed = (bound + 1).max(1) as usize;
        if needed > root.known_precision() {
            return Err(Error::PrecisionExhausted { cap: self.precision_cap, needed });
        }
        let modulus = num_traits::pow(self.p_big.clone(), needed);
        let s = root.unit_mod(needed);
        let t = (big_a + big_b * s).mod_floor(&modulus);
        match self.vp_int(&t) {
            Some(v) if v <= bound => Ok(Magnitude::p_pow_int(self.p, -(v - vq))),
            _ => Err(Error::PrecisionExhausted { cap: self.precision_cap, needed }),
        }
    }

    /// `|x - t|` for rational `x` and `t` the root (or its negative when
    /// `negate`) of a Q_p-square, read off the known digits.
    pub fn abs_sub_root(&self, x: &Rational, root: &HenselRoot, negate: bool) -> Result<Magnitude> {
        let v = root.valuation;
        let t = Magnitude::p_pow_int(self.p, -v);
        match self.vp(x) {
            None => return Ok(t),
            Some(w) if w != v => return Ok(self.abs_rational(x).max(t)),
            _ => {}
        }
        let n = root.known_precision();
        let m = num_traits::pow(self.p_big.clone(), n);
        let y = self.reduce_mod(&(x * pow_signed(&self.p_big, -v)), n);
        let r = if negate { -root.unit.clone() } else { root.unit.clone() };
        let diff = (y - r).mod_floor(&m);
        match self.vp_int(&diff) {
            Some(k) => Ok(Magnitude::p_pow_int(self.p, -(v + k))),
            None => Err(Error::PrecisionExhausted { cap: self.precision_cap, needed: n + 1 }),
        }
    }

    /// `|x|_p <= 1`.
    pub fn is_integral(&self, x: &FieldElem) -> Result<bool> {
        Ok(self.abs(x)? <= Magnitude::one(self.p))
    }

    /// `|zeta_d - 1|` for a primitive d-th root of unity.
    pub fn cyclotomic_abs(&self, d: u64) -> Magnitude {
        assert!(d >= 1);
        if d == 1 {
            return Magnitude::zero(self.p);
        }
        let mut m = d;
        let mut k = 0u32;
        while m.is_multiple_of(self.p) {
            m /= self.p;
            k += 1;
        }
        if m > 1 {
            return Magnitude::one(self.p);
        }
        let den = (self.p as i64).pow(k - 1) * (self.p as i64 - 1);
        Magnitude::p_pow(self.p, Exponent::new(-1, den))
    }

    /// `max(1, |x|)`.
    pub fn max_one(&self, x: &FieldElem) -> Result<Magnitude> {
        let a = self.abs(x)?;
        Ok(std::cmp::max(a, Magnitude::one(self.p)))
    }
}

fn pow_signed(p: &BigInt, k: i64) -> Rational {
    let pk = Rational::from_integer(num_traits::pow(p.clone(), k.unsigned_abs() as usize));
    if k >= 0 {
        pk
    } else {
        pk.recip()
    }
}

fn to_digits(x: &BigInt, p: &BigInt, n: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(n);
    let mut m = x.clone();
    for _ in 0..n {
        let (q, r) = m.div_mod_floor(p);
        out.push(r.to_u64().expect("digit fits"));
        m = q;
    }
    out
}

pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Tonelli-Shanks square root modulo an odd prime.
fn sqrt_mod_prime(a: &BigInt, p: &BigInt) -> Option<BigInt> {
    let a = a.mod_floor(p);
    if a.is_zero() {
        return Some(a);
    }
    let one = BigInt::one();
    let two = BigInt::from(2);
    let legendre = |x: &BigInt| x.modpow(&((p - &one) / &two), p);
    if legendre(&a) != one {
        return None;
    }
    let mut q = p - &one;
    let mut s = 0u32;
    while q.is_even() {
        q /= &two;
        s += 1;
    }
    let mut z = two.clone();
    while legendre(&z) != p - &one {
        z += 1;
    }
    let mut m = s;
    let mut c = z.modpow(&q, p);
    let mut t = a.modpow(&q, p);
    let mut r = a.modpow(&((&q + &one) / &two), p);
    while !t.is_one() {
        let mut i = 0u32;
        let mut tt = t.clone();
        while !tt.is_one() {
            tt = (&tt * &tt).mod_floor(p);
            i += 1;
        }
        let b = c.modpow(&(BigInt::one() << (m - i - 1)), p);
        m = i;
        c = (&b * &b).mod_floor(p);
        t = (&t * &c).mod_floor(p);
        r = (&r * &b).mod_floor(p);
    }
    Some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64, d: Option<i64>) -> PadicContext {
        PadicContext::new(p, d).unwrap()
    }

    #[test]
    fn valuations() {
        let c = ctx(3, None);
        assert_eq!(c.vp(&int(18)), Some(2));
        assert_eq!(c.vp(&rat(2, 27)), Some(-3));
        assert_eq!(c.vp(&int(0)), None);
    }

    #[test]
    fn nonsplit_abs_uses_norm() {
        let c = ctx(3, Some(-1));
        let x = FieldElem::new(int(1), int(1), Some(-1));
        assert_eq!(c.abs(&x).unwrap(), Magnitude::one(3));
        let c = ctx(5, Some(5));
        let x = FieldElem::sqrt_disc(5);
        assert_eq!(c.abs(&x).unwrap(), Magnitude::p_pow(5, Exponent::new(-1, 2)));
        assert_eq!(c.abs(&x).unwrap().to_string(), "5^(-1/2)");
    }

    #[test]
    fn split_abs_uses_canonical_root() {
        let c = ctx(5, Some(-1));
        assert!(c.disc_is_split());
        assert_eq!(c.disc_root().unwrap().digits()[0], 2);
        // 1 + s with s = 2 mod 5 is a unit.
        let x = FieldElem::new(int(1), int(1), Some(-1));
        assert_eq!(c.abs(&x).unwrap(), Magnitude::one(5));
        // 2 - s vanishes mod 5, and (2 - i)(2 + i) = 5.
        let y = FieldElem::new(int(2), int(-1), Some(-1));
        assert_eq!(c.abs(&y).unwrap(), Magnitude::p_pow_int(5, -1));
    }

    #[test]
    fn square_classes() {
        let c = ctx(5, None);
        match c.sqrt_in_qp(&int(-1)).unwrap() {
            SquareClass::Square(r) => assert_eq!(r.digits()[0], 2),
            SquareClass::NonSquare => panic!(),
        }
        let c2 = ctx(2, None);
        assert!(matches!(c2.sqrt_in_qp(&int(17)).unwrap(), SquareClass::Square(_)));
        assert_eq!(c2.sqrt_in_qp(&int(3)).unwrap(), SquareClass::NonSquare);
        assert_eq!(c.sqrt_in_qp(&int(5)).unwrap(), SquareClass::NonSquare);
    }

    #[test]
    fn hensel_root_squares_back() {
        for (p, x) in [(5u64, -1i64), (7, 2), (2, 17), (2, -7), (13, 3)] {
            let c = ctx(p, None);
            let SquareClass::Square(r) = c.sqrt_in_qp(&int(x)).unwrap() else { panic!() };
            let m = num_traits::pow(BigInt::from(p), 40);
            let s = r.unit_mod(40);
            assert_eq!((&s * &s - BigInt::from(x)).mod_floor(&m), BigInt::zero(), "p={p} x={x}");
        }
    }

    #[test]
    fn cyclotomic_values() {
        let c = ctx(3, None);
        assert_eq!(c.cyclotomic_abs(3), Magnitude::p_pow(3, Exponent::new(-1, 2)));
        assert_eq!(c.cyclotomic_abs(9), Magnitude::p_pow(3, Exponent::new(-1, 6)));
        assert_eq!(c.cyclotomic_abs(6), Magnitude::one(3));
    }

    #[test]
    fn magnitude_order_and_normal_form() {
        let a = Magnitude::real(2, rat(1, 2));
        assert_eq!(a, Magnitude::p_pow_int(2, -1));
        let six = Magnitude::real(3, int(6));
        assert_eq!(six.to_string(), "2*3^(1)");
        let r = Magnitude::p_pow(3, Exponent::new(1, 2));
        assert!(r < Magnitude::real(3, int(2)));
        assert!(r > Magnitude::real(3, rat(3, 2)));
        assert!(Magnitude::zero(3) < r);
    }

    #[test]
    fn exact_square_roots() {
        let w = FieldElem::new(rat(-1, 2), rat(1, 2), Some(-3));
        let w2 = &w * &w;
        let r = w2.sqrt_exact().unwrap();
        assert!(r == w || r == -w.clone());
        assert_eq!(FieldElem::from_i64(-4).sqrt_in(Some(-1)), Some(FieldElem::new(int(0), int(2), Some(-1))));
        assert_eq!(FieldElem::from_i64(2).sqrt_in(Some(-1)), None);
    }

    #[test]
    fn precision_cap_is_enforced() {
        let c = PadicContext::with_precision_cap(5, Some(-1), 3).unwrap();
        // 7^2 + 24^2 = 5^4, so one of 7 +- 24i has valuation 4.
        let x = FieldElem::new(int(7), int(24), Some(-1));
        let y = FieldElem::new(int(7), int(-24), Some(-1));
        let rx = c.abs(&x);
        let ry = c.abs(&y);
        assert!(matches!(rx, Err(Error::PrecisionExhausted { .. })) || matches!(ry, Err(Error::PrecisionExhausted { .. })));
        let c = ctx(5, Some(-1));
        let prod = &c.abs(&x).unwrap() * &c.abs(&y).unwrap();
        assert_eq!(prod, Magnitude::p_pow_int(5, -4));
    }
}
