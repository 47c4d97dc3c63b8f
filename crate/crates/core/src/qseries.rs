//! Exact coefficient arithmetic in the half-power variable `v` with `q = v^2`.
//!
//! [`LaurentV`] holds Laurent polynomials in `v` over arbitrary-precision
//! integers, [`RationalFn`] is their fraction field kept in a canonical reduced
//! form, and the free functions build q-integers, q-factorials and Gaussian
//! binomials.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QSeriesError {
    #[error("pole: denominator vanishes at q = {0}")]
    Pole(String),
    #[error("odd power of q^(1/2) but q = {0} is not the square of a rational")]
    NotASquare(String),
    #[error("division by zero rational function")]
    DivisionByZero,
    #[error("domain error: {0}")]
    Domain(String),
}

/// Laurent polynomial in `v`; even exponents are integer powers of `q`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentV {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentV {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * v^exp`.
    pub fn monomial(c: impl Into<BigInt>, v_exp: i64) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(v_exp, c);
        }
        Self { terms }
    }

    /// `q^exp = v^(2 exp)`.
    pub fn q_pow(exp: i64) -> Self {
        Self::monomial(1, 2 * exp)
    }

    /// `(-q)^exp`.
    pub fn neg_q_pow(exp: i64) -> Self {
        let sign = if exp.rem_euclid(2) == 0 { 1 } else { -1 };
        Self::monomial(sign, 2 * exp)
    }

    pub fn from_terms<I, C>(it: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut out = Self::zero();
        for (e, c) in it {
            out.add_term(e, c.into());
        }
        out
    }

    fn add_term(&mut self, e: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    /// Iterate `(v_exponent, coefficient)` in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// True when every exponent is even, i.e. the value is a Laurent polynomial in `q`.
    pub fn is_in_q(&self) -> bool {
        self.terms.keys().all(|e| e % 2 == 0)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.terms.values().next_back()
    }

    /// Multiply by `v^shift`.
    pub fn shift(&self, shift: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + shift, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    /// Evaluate at `v = v0`.
    pub fn eval_v(&self, v0: &BigRational) -> Result<BigRational, QSeriesError> {
        if self.is_zero() {
            return Ok(BigRational::zero());
        }
        if v0.is_zero() {
            if self.min_exp().unwrap() < 0 {
                return Err(QSeriesError::Pole("0".into()));
            }
            return Ok(BigRational::from_integer(
                self.terms.get(&0).cloned().unwrap_or_default(),
            ));
        }
        // Horner over the shifted dense form, then divide by v0^(-min).
        let lo = self.min_exp().unwrap();
        let hi = self.max_exp().unwrap();
        let mut acc = BigRational::zero();
        for e in (lo..=hi).rev() {
            acc *= v0;
            if let Some(c) = self.terms.get(&e) {
                acc += BigRational::from_integer(c.clone());
            }
        }
        Ok(acc * pow_rational(v0, lo))
    }

    /// Dense coefficient vector after removing the lowest power: `(shift, coeffs)`.
    fn to_dense(&self) -> (i64, Vec<BigInt>) {
        let lo = self.min_exp().unwrap_or(0);
        let hi = self.max_exp().unwrap_or(0);
        let mut out = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (e, c) in &self.terms {
            out[(e - lo) as usize] = c.clone();
        }
        (lo, out)
    }

    fn from_dense(shift: i64, coeffs: &[BigInt]) -> Self {
        Self::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (shift + i as i64, c.clone())),
        )
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>, latex: bool) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (pos, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if pos == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let mag = c.abs();
            let mono = if latex { latex_q_power(*e) } else { text_q_power(*e) };
            match (mono.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => f.write_str(&mono)?,
                (false, false) if latex => write!(f, "{mag}{mono}")?,
                (false, false) => write!(f, "{mag}*{mono}")?,
            }
        }
        Ok(())
    }

    pub fn to_latex(&self) -> String {
        struct L<'a>(&'a LaurentV);
        impl fmt::Display for L<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.fmt_with(f, true)
            }
        }
        L(self).to_string()
    }
}

/// Text for `v^e` written as a power of `q`: `q`, `q^3`, `q^-1`, `q^(1/2)`.
pub(crate) fn text_q_power(e: i64) -> String {
    match e {
        0 => String::new(),
        2 => "q".into(),
        e if e % 2 == 0 => format!("q^{}", e / 2),
        e => format!("q^({e}/2)"),
    }
}

fn latex_q_power(e: i64) -> String {
    match e {
        0 => String::new(),
        2 => "q".into(),
        e if e % 2 == 0 => format!("q^{{{}}}", e / 2),
        e => format!("q^{{{e}/2}}"),
    }
}

pub(crate) fn pow_rational(x: &BigRational, e: i64) -> BigRational {
    let base = if e < 0 { x.recip() } else { x.clone() };
    num_traits::pow(base, e.unsigned_abs() as usize)
}

impl fmt::Display for LaurentV {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, false)
    }
}

impl fmt::Debug for LaurentV {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentV({self})")
    }
}

impl Ord for LaurentV {
    fn cmp(&self, other: &Self) -> Ordering {
        self.terms.iter().cmp(other.terms.iter())
    }
}

impl PartialOrd for LaurentV {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl AddAssign<&LaurentV> for LaurentV {
    fn add_assign(&mut self, rhs: &LaurentV) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl Add for &LaurentV {
    type Output = LaurentV;
    fn add(self, rhs: &LaurentV) -> LaurentV {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Neg for &LaurentV {
    type Output = LaurentV;
    fn neg(self) -> LaurentV {
        LaurentV {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Sub for &LaurentV {
    type Output = LaurentV;
    fn sub(self, rhs: &LaurentV) -> LaurentV {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Mul for &LaurentV {
    type Output = LaurentV;
    fn mul(self, rhs: &LaurentV) -> LaurentV {
        let mut out = LaurentV::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($ty:ty, $($tr:ident :: $m:ident),*) => {$(
        impl $tr<$ty> for $ty {
            type Output = $ty;
            fn $m(self, rhs: $ty) -> $ty { (&self).$m(&rhs) }
        }
        impl $tr<&$ty> for $ty {
            type Output = $ty;
            fn $m(self, rhs: &$ty) -> $ty { (&self).$m(rhs) }
        }
    )*};
}

forward_owned!(LaurentV, Add::add, Sub::sub, Mul::mul);

impl Neg for LaurentV {
    type Output = LaurentV;
    fn neg(self) -> LaurentV {
        -&self
    }
}

// ---------------------------------------------------------------------------
// Dense integer polynomial helpers (coefficients low -> high).

fn trim(p: &mut Vec<BigInt>) {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn is_zero_dense(p: &[BigInt]) -> bool {
    p.iter().all(|c| c.is_zero())
}

fn dense_content(p: &[BigInt]) -> BigInt {
    p.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn primitive(p: &[BigInt]) -> Vec<BigInt> {
    let c = dense_content(p);
    if c.is_zero() {
        return vec![BigInt::zero()];
    }
    let mut out: Vec<BigInt> = p.iter().map(|x| x / &c).collect();
    trim(&mut out);
    out
}

fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lb = b[db].clone();
    while !is_zero_dense(&r) && r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c *= &lb;
        }
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] -= &lr * bc;
        }
        r.pop();
        trim(&mut r);
    }
    r
}

/// Primitive gcd over the integers with positive leading coefficient.
fn poly_gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut x = primitive(a);
    let mut y = primitive(b);
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !is_zero_dense(&y) {
        if y.len() == 1 {
            return vec![BigInt::one()];
        }
        let r = pseudo_rem(&x, &y);
        x = y;
        y = if is_zero_dense(&r) { vec![BigInt::zero()] } else { primitive(&r) };
    }
    if x.last().is_some_and(|c| c.is_negative()) {
        for c in x.iter_mut() {
            *c = -&*c;
        }
    }
    x
}

/// Exact division of integer polynomials; panics if the division is not exact.
fn exact_div(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    if r.len() < b.len() {
        assert!(is_zero_dense(&r), "inexact polynomial division");
        return vec![BigInt::zero()];
    }
    let mut quot = vec![BigInt::zero(); r.len() - db];
    for i in (0..quot.len()).rev() {
        let (qc, rem) = r[i + db].div_rem(&b[db]);
        assert!(rem.is_zero(), "inexact polynomial division");
        for (j, bc) in b.iter().enumerate() {
            r[i + j] -= &qc * bc;
        }
        quot[i] = qc;
    }
    assert!(is_zero_dense(&r), "inexact polynomial division");
    trim(&mut quot);
    quot
}

// ---------------------------------------------------------------------------

/// Element of the fraction field of `LaurentV`, kept reduced.
///
/// Canonical form: `gcd(num, den) = 1` as polynomials, the integer contents
/// of `num` and `den` are coprime, `den` has lowest exponent 0 and positive
/// leading coefficient. Equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalFn {
    num: LaurentV,
    den: LaurentV,
}

impl Default for RationalFn {
    fn default() -> Self {
        Self::zero()
    }
}

impl RationalFn {
    pub fn zero() -> Self {
        Self { num: LaurentV::zero(), den: LaurentV::one() }
    }

    pub fn one() -> Self {
        Self::from_laurent(LaurentV::one())
    }

    pub fn integer(c: impl Into<BigInt>) -> Self {
        Self::from_laurent(LaurentV::constant(c))
    }

    pub fn q() -> Self {
        Self::q_pow(1)
    }

    pub fn q_pow(e: i64) -> Self {
        Self::from_laurent(LaurentV::q_pow(e))
    }

    pub fn neg_q_pow(e: i64) -> Self {
        Self::from_laurent(LaurentV::neg_q_pow(e))
    }

    pub fn v_pow(e: i64) -> Self {
        Self::from_laurent(LaurentV::monomial(1, e))
    }

    pub fn from_laurent(num: LaurentV) -> Self {
        Self { num, den: LaurentV::one() }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        Self::new(LaurentV::constant(r.numer().clone()), LaurentV::constant(r.denom().clone()))
            .expect("nonzero denominator")
    }

    /// Build and normalize `num / den`.
    pub fn new(num: LaurentV, den: LaurentV) -> Result<Self, QSeriesError> {
        if den.is_zero() {
            return Err(QSeriesError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let (sn, mut n) = num.to_dense();
        let (sd, mut d) = den.to_dense();
        if d.len() > 1 && n.len() > 1 {
            let g = poly_gcd(&n, &d);
            if g.len() > 1 {
                n = exact_div(&n, &g);
                d = exact_div(&d, &g);
            }
        }
        let c = dense_content(&n).gcd(&dense_content(&d));
        if !c.is_one() {
            for x in n.iter_mut() {
                *x /= &c;
            }
            for x in d.iter_mut() {
                *x /= &c;
            }
        }
        if d.last().is_some_and(|x| x.is_negative()) {
            for x in n.iter_mut() {
                *x = -&*x;
            }
            for x in d.iter_mut() {
                *x = -&*x;
            }
        }
        Ok(Self {
            num: LaurentV::from_dense(sn - sd, &n),
            den: LaurentV::from_dense(0, &d),
        })
    }

    pub fn num(&self) -> &LaurentV {
        &self.num
    }

    pub fn den(&self) -> &LaurentV {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the denominator is 1.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_laurent(&self) -> Option<&LaurentV> {
        self.is_laurent().then_some(&self.num)
    }

    pub fn is_in_q(&self) -> bool {
        self.num.is_in_q() && self.den.is_in_q()
    }

    pub fn inv(&self) -> Result<Self, QSeriesError> {
        if self.is_zero() {
            return Err(QSeriesError::DivisionByZero);
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, QSeriesError> {
        if rhs.is_zero() {
            return Err(QSeriesError::DivisionByZero);
        }
        if rhs.is_laurent() && rhs.num.is_monomial() && self.is_laurent() {
            let (e, c) = rhs.num.terms().next().unwrap();
            if c.is_one() {
                return Ok(Self::from_laurent(self.num.shift(-e)));
            }
        }
        Self::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    /// Evaluate at `v = v0` (so `q = v0^2`).
    pub fn eval_at_v(&self, v0: &BigRational) -> Result<BigRational, QSeriesError> {
        let d = self.den.eval_v(v0).map_err(|_| QSeriesError::Pole(format!("{}", v0 * v0)))?;
        if d.is_zero() {
            return Err(QSeriesError::Pole(format!("{}", v0 * v0)));
        }
        let n = self.num.eval_v(v0).map_err(|_| QSeriesError::Pole(format!("{}", v0 * v0)))?;
        Ok(n / d)
    }

    /// Evaluate at a rational `q0`. Odd powers of `v` need `q0` to be a rational square.
    pub fn eval_at(&self, q0: &BigRational) -> Result<BigRational, QSeriesError> {
        let v0 = if self.is_in_q() {
            None
        } else {
            Some(rational_sqrt(q0).ok_or_else(|| QSeriesError::NotASquare(q0.to_string()))?)
        };
        match v0 {
            Some(v0) => self.eval_at_v(&v0),
            None => {
                let halve = |l: &LaurentV| LaurentV::from_terms(l.terms().map(|(e, c)| (e / 2, c.clone())));
                let d = halve(&self.den).eval_v(q0).map_err(|_| QSeriesError::Pole(q0.to_string()))?;
                if d.is_zero() {
                    return Err(QSeriesError::Pole(q0.to_string()));
                }
                let n = halve(&self.num).eval_v(q0).map_err(|_| QSeriesError::Pole(q0.to_string()))?;
                Ok(n / d)
            }
        }
    }

    pub fn to_latex(&self) -> String {
        if self.den.is_one() {
            self.num.to_latex()
        } else {
            format!("\\frac{{{}}}{{{}}}", self.num.to_latex(), self.den.to_latex())
        }
    }
}

/// Nonnegative rational square root, when it exists.
pub fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer();
    let d = x.denom();
    let rn = n.sqrt();
    let rd = d.sqrt();
    (&rn * &rn == *n && &rd * &rd == *d).then(|| BigRational::new(rn, rd))
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFn({self})")
    }
}

impl From<LaurentV> for RationalFn {
    fn from(l: LaurentV) -> Self {
        Self::from_laurent(l)
    }
}

impl From<i64> for RationalFn {
    fn from(c: i64) -> Self {
        Self::integer(c)
    }
}

impl Add for &RationalFn {
    type Output = RationalFn;
    fn add(self, rhs: &RationalFn) -> RationalFn {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            if self.den.is_one() {
                return RationalFn::from_laurent(&self.num + &rhs.num);
            }
            return RationalFn::new(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        RationalFn::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .unwrap()
    }
}

impl Neg for &RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        RationalFn { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        -&self
    }
}

impl Sub for &RationalFn {
    type Output = RationalFn;
    fn sub(self, rhs: &RationalFn) -> RationalFn {
        self + &(-rhs)
    }
}

impl Mul for &RationalFn {
    type Output = RationalFn;
    fn mul(self, rhs: &RationalFn) -> RationalFn {
        if self.is_zero() || rhs.is_zero() {
            return RationalFn::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RationalFn::from_laurent(&self.num * &rhs.num);
        }
        // A monomial numerator never shares a factor with a canonical denominator.
        if self.den.is_one() && self.num.is_monomial() {
            let (e, c) = self.num.terms().next().unwrap();
            return RationalFn::new(rhs.num.shift(e).scale(c), rhs.den.clone()).unwrap();
        }
        RationalFn::new(&self.num * &rhs.num, &self.den * &rhs.den).unwrap()
    }
}

forward_owned!(RationalFn, Add::add, Sub::sub, Mul::mul);

impl AddAssign<&RationalFn> for RationalFn {
    fn add_assign(&mut self, rhs: &RationalFn) {
        *self = &*self + rhs;
    }
}

/// `[n]_{q^base} = 1 + q^base + ... + q^{base (n-1)}`.
pub fn qnum(n: u32, base: u32) -> LaurentV {
    LaurentV::from_terms((0..n as i64).map(|i| (2 * base as i64 * i, 1)))
}

/// `[n]_{q^base}! = [1][2]...[n]`.
pub fn qfact(n: u32, base: u32) -> LaurentV {
    (1..=n).fold(LaurentV::one(), |acc, i| &acc * &qnum(i, base))
}

/// Gaussian binomial `[n choose t]_{q^base}`.
pub fn qbinom(n: u32, t: u32, base: u32) -> Result<RationalFn, QSeriesError> {
    if t > n {
        return Err(QSeriesError::Domain(format!("q-binomial with t = {t} > n = {n}")));
    }
    RationalFn::new(qfact(n, base), &qfact(t, base) * &qfact(n - t, base))
}

/// `eval_at` as a free function.
pub fn eval_at(x: &RationalFn, q0: &BigRational) -> Result<BigRational, QSeriesError> {
    x.eval_at(q0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn q_poly(coeffs: &[i64]) -> LaurentV {
        LaurentV::from_terms(coeffs.iter().enumerate().map(|(i, c)| (2 * i as i64, *c)))
    }

    #[test]
    fn qnum_examples() {
        assert_eq!(qnum(3, 1), q_poly(&[1, 1, 1]));
        assert_eq!(qnum(1, 4), LaurentV::one());
        assert_eq!(qnum(2, 2), q_poly(&[1, 0, 1]));
        assert!(qnum(0, 3).is_zero());
        assert_eq!(qnum(3, 1).to_string(), "1 + q + q^2");
    }

    #[test]
    fn qfact_and_qbinom() {
        assert_eq!(qfact(2, 1), q_poly(&[1, 1]));
        assert_eq!(qbinom(2, 1, 1).unwrap(), RationalFn::from_laurent(q_poly(&[1, 1])));
        let b = qbinom(4, 2, 1).unwrap();
        assert!(b.is_laurent());
        assert_eq!(b.eval_at(&rat(1, 1)).unwrap(), rat(6, 1));
        assert!(matches!(qbinom(2, 3, 1), Err(QSeriesError::Domain(_))));
    }

    #[test]
    fn eval_examples() {
        let one_minus_q = RationalFn::from_laurent(q_poly(&[1, -1]));
        let x = one_minus_q.checked_div(&RationalFn::from_laurent(q_poly(&[1, 0, 1]))).unwrap();
        assert_eq!(x.eval_at(&rat(1, 1)).unwrap(), rat(0, 1));
        assert_eq!(RationalFn::from_laurent(qnum(3, 1)).eval_at(&rat(2, 1)).unwrap(), rat(7, 1));

        let pole = RationalFn::one().checked_div(&RationalFn::from_laurent(q_poly(&[1, 1]))).unwrap();
        assert!(matches!(pole.eval_at(&rat(-1, 1)), Err(QSeriesError::Pole(_))));
        let pole = RationalFn::one().checked_div(&one_minus_q).unwrap();
        assert!(matches!(pole.eval_at(&rat(1, 1)), Err(QSeriesError::Pole(_))));

        let half = RationalFn::v_pow(1);
        assert_eq!(half.eval_at(&rat(9, 4)).unwrap(), rat(3, 2));
        assert!(matches!(half.eval_at(&rat(2, 1)), Err(QSeriesError::NotASquare(_))));
        assert!(matches!(RationalFn::q_pow(-1).eval_at(&rat(0, 1)), Err(QSeriesError::Pole(_))));
    }

    #[test]
    fn canonical_normalization() {
        // (q^2 - 1) / (2q - 2) = (q + 1) / 2
        let x = RationalFn::new(q_poly(&[-1, 0, 1]), q_poly(&[-2, 2])).unwrap();
        assert_eq!(x.num(), &q_poly(&[1, 1]));
        assert_eq!(x.den(), &LaurentV::constant(2));
        // q^-1 / (q^3 + q^2) = q^-3 / (q + 1)
        let y = RationalFn::new(LaurentV::q_pow(-1), &LaurentV::q_pow(3) + &LaurentV::q_pow(2)).unwrap();
        assert_eq!(y.den(), &q_poly(&[1, 1]));
        assert_eq!(y.num(), &LaurentV::q_pow(-3));
        // negative leading coefficient moves to the numerator
        let z = RationalFn::new(LaurentV::one(), q_poly(&[1, -1])).unwrap();
        assert_eq!(z.den(), &q_poly(&[-1, 1]));
        assert_eq!(z.num(), &LaurentV::constant(-1));
    }

    #[test]
    fn rendering() {
        assert_eq!(q_poly(&[1, 0, -1]).to_string(), "1 - q^2");
        assert_eq!(LaurentV::monomial(-3, 1).to_string(), "-3*q^(1/2)");
        assert_eq!(LaurentV::q_pow(-1).to_string(), "q^-1");
        let r = RationalFn::new(LaurentV::one(), q_poly(&[1, 0, 1])).unwrap();
        assert_eq!(r.to_string(), "(1)/(1 + q^2)");
    }

    #[test]
    fn q_integer_identity() {
        let q_minus_one = q_poly(&[-1, 1]);
        for n in 0..=12u32 {
            let lhs = &q_minus_one * &qnum(n, 1);
            let rhs = &LaurentV::q_pow(n as i64) - &LaurentV::one();
            assert_eq!(lhs, rhs, "n = {n}");
        }
    }

    #[test]
    fn qbinom_symmetry_and_pascal() {
        for b in [1, 2, 4] {
            for n in 0..=8 {
                for t in 0..=n {
                    let x = qbinom(n, t, b).unwrap();
                    assert!(x.is_laurent());
                    assert_eq!(x, qbinom(n, n - t, b).unwrap());
                }
            }
        }
        for n in 2..=8u32 {
            for t in 1..n {
                let lhs = qbinom(n, t, 1).unwrap();
                let rhs = &qbinom(n - 1, t - 1, 1).unwrap()
                    + &(&RationalFn::q_pow(t as i64) * &qbinom(n - 1, t, 1).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }

    fn arb_laurent() -> impl Strategy<Value = LaurentV> {
        proptest::collection::vec((-6i64..6, -5i64..6), 0..5).prop_map(LaurentV::from_terms)
    }

    fn arb_rational() -> impl Strategy<Value = RationalFn> {
        (arb_laurent(), arb_laurent()).prop_filter_map("zero denominator", |(n, d)| {
            (!d.is_zero()).then(|| RationalFn::new(n, d).unwrap())
        })
    }

    proptest! {
        #[test]
        fn eval_is_a_ring_map(x in arb_rational(), y in arb_rational(), a in 2i64..9, b in 1i64..7) {
            let v0 = rat(a, b);
            let ex = x.eval_at_v(&v0);
            let ey = y.eval_at_v(&v0);
            if let (Ok(ex), Ok(ey)) = (ex, ey) {
                prop_assert_eq!((&x + &y).eval_at_v(&v0).unwrap(), &ex + &ey);
                prop_assert_eq!((&x * &y).eval_at_v(&v0).unwrap(), &ex * &ey);
            }
        }

        #[test]
        fn self_difference_is_canonical_zero(x in arb_rational()) {
            let z = &x - &x;
            prop_assert!(z.is_zero());
            prop_assert_eq!(z, RationalFn::zero());
        }

        #[test]
        fn division_round_trips(x in arb_rational(), y in arb_rational()) {
            prop_assume!(!y.is_zero());
            let back = &x.checked_div(&y).unwrap() * &y;
            prop_assert_eq!(back, x);
        }
    }
}
