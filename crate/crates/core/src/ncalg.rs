//! Free noncommutative polynomials over [`RationalFn`] in indexed generators.
//!
//! Letters carry a tensor component tag. Letters of different components
//! commute with factor 1, so a [`Word`] is kept stably sorted by component.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::qseries::{QSeriesError, RationalFn};

pub mod comb;
pub mod text;

pub use comb::{
    block_arrangements, complement, ell_subset, inv_blocks, inv_pair, inversions, permutations, seq_inversions,
    shuffle_perm,
    subsets, Perm,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NcError {
    #[error("arity mismatch: expected {expected}, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("no value assigned to generator {0}")]
    MissingAssignment(String),
    #[error(transparent)]
    Coeff(#[from] QSeriesError),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid permutation: {0:?}")]
    BadPerm(Vec<usize>),
}

/// An indexed generator `name[idx]` living in tensor component `comp`.
///
/// Ordering is `(comp, name, idx)` with lexicographic index comparison.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenId {
    pub comp: u8,
    pub name: char,
    pub idx: Vec<u8>,
}

impl GenId {
    pub fn new(comp: u8, name: char, idx: impl Into<Vec<u8>>) -> Self {
        Self { comp, name, idx: idx.into() }
    }

    /// Generator named `a` in component 0.
    pub fn a(idx: &[u8]) -> Self {
        Self::new(0, 'a', idx)
    }

    pub fn arity(&self) -> usize {
        self.idx.len()
    }

    pub fn with_comp(&self, comp: u8) -> Self {
        Self { comp, ..self.clone() }
    }
}

impl fmt::Display for GenId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[", self.name)?;
        for (p, i) in self.idx.iter().enumerate() {
            if p > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("]")?;
        if self.comp != 0 {
            write!(f, "@{}", self.comp)?;
        }
        Ok(())
    }
}

impl fmt::Debug for GenId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A monomial. Letters are stably sorted by component.
///
/// Ordered by length first, then lexicographically by letters.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<GenId>,
}

impl Word {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(mut letters: Vec<GenId>) -> Self {
        if letters.windows(2).any(|w| w[0].comp > w[1].comp) {
            letters.sort_by_key(|g| g.comp);
        }
        Self { letters }
    }

    pub fn letter(g: GenId) -> Self {
        Self { letters: vec![g] }
    }

    pub fn letters(&self) -> &[GenId] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Word::new(letters)
    }

    /// Letters of component `comp`, in order.
    pub fn component(&self, comp: u8) -> impl Iterator<Item = &GenId> {
        self.letters.iter().filter(move |g| g.comp == comp)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("1");
        }
        for (p, g) in self.letters.iter().enumerate() {
            if p > 0 {
                f.write_str(".")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Sparse linear combination of words with rational-function coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct NCPoly {
    terms: BTreeMap<Word, RationalFn>,
}

impl NCPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(RationalFn::one())
    }

    pub fn constant(c: RationalFn) -> Self {
        Self::term(c, Word::empty())
    }

    pub fn gen(g: GenId) -> Self {
        Self::term(RationalFn::one(), Word::letter(g))
    }

    pub fn word(w: Word) -> Self {
        Self::term(RationalFn::one(), w)
    }

    pub fn term(c: RationalFn, w: Word) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        Self { terms }
    }

    /// Product of the given letters with coefficient `c`.
    pub fn monomial(c: RationalFn, letters: Vec<GenId>) -> Self {
        Self::term(c, Word::new(letters))
    }

    pub fn add_term(&mut self, w: Word, c: &RationalFn) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                let sum = slot.get() + c;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &NCPoly, c: &RationalFn) {
        if c.is_zero() {
            return;
        }
        for (w, x) in &other.terms {
            self.add_term(w.clone(), &(x * c));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in word order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &RationalFn)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> RationalFn {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    /// `Some(c)` when the polynomial is a scalar multiple of the empty word.
    pub fn as_scalar(&self) -> Option<RationalFn> {
        match self.terms.len() {
            0 => Some(RationalFn::zero()),
            1 => self.terms.get(&Word::empty()).cloned(),
            _ => None,
        }
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).max()
    }

    /// Common word length, if every term has the same one.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(Word::len);
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    pub fn scale(&self, c: &RationalFn) -> NCPoly {
        if c.is_zero() {
            return NCPoly::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        NCPoly { terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect() }
    }

    /// Letters occurring anywhere in the polynomial.
    pub fn alphabet(&self) -> std::collections::BTreeSet<GenId> {
        self.terms.keys().flat_map(|w| w.letters().iter().cloned()).collect()
    }

    /// Algebra map determined by images of letters.
    pub fn substitute<F>(&self, mut image: F) -> NCPoly
    where
        F: FnMut(&GenId) -> NCPoly,
    {
        let mut cache: BTreeMap<GenId, NCPoly> = BTreeMap::new();
        let mut out = NCPoly::zero();
        for (w, c) in &self.terms {
            let mut acc = NCPoly::constant(c.clone());
            for g in w.letters() {
                let img = cache.entry(g.clone()).or_insert_with(|| image(g));
                acc = &acc * &*img;
                if acc.is_zero() {
                    break;
                }
            }
            out += &acc;
        }
        out
    }

    /// Relabel letters one-for-one; coefficients are unchanged.
    pub fn map_letters<F>(&self, mut f: F) -> NCPoly
    where
        F: FnMut(&GenId) -> GenId,
    {
        let mut out = NCPoly::zero();
        for (w, c) in &self.terms {
            let letters = w.letters().iter().map(&mut f).collect();
            out.add_term(Word::new(letters), c);
        }
        out
    }

    /// Apply `f` to every coefficient, dropping zeros.
    pub fn map_coeffs<F>(&self, mut f: F) -> NCPoly
    where
        F: FnMut(&RationalFn) -> RationalFn,
    {
        let mut out = NCPoly::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), &f(c));
        }
        out
    }

    pub fn filter_terms<F>(&self, mut keep: F) -> NCPoly
    where
        F: FnMut(&Word) -> bool,
    {
        NCPoly {
            terms: self.terms.iter().filter(|(w, _)| keep(w)).map(|(w, c)| (w.clone(), c.clone())).collect(),
        }
    }

    /// Permute index slots of every letter of component `comp`:
    /// `tau . a[i_1..i_m] = a[i_{tau^-1(1)}, .., i_{tau^-1(m)}]`.
    pub fn act_axis_perm(&self, tau: &Perm, comp: u8) -> Result<NCPoly, NcError> {
        let m = tau.len();
        for g in self.alphabet() {
            if g.comp == comp && g.arity() != m {
                return Err(NcError::Arity { expected: m, found: g.arity() });
            }
        }
        let inv = tau.inverse();
        Ok(self.map_letters(|g| {
            if g.comp != comp {
                return g.clone();
            }
            let idx = (0..m).map(|s| g.idx[inv.image(s + 1) - 1]).collect::<Vec<_>>();
            GenId { idx, ..g.clone() }
        }))
    }

    /// Substitute commuting rational values for letters and evaluate at `q0`.
    pub fn specialize_commutative<F>(&self, mut value: F, q0: &BigRational) -> Result<BigRational, NcError>
    where
        F: FnMut(&GenId) -> Option<BigRational>,
    {
        let mut cache: BTreeMap<GenId, BigRational> = BTreeMap::new();
        let mut total = BigRational::zero();
        for (w, c) in &self.terms {
            let mut prod = BigRational::one();
            for g in w.letters() {
                let x = match cache.get(g) {
                    Some(x) => x.clone(),
                    None => {
                        let x = value(g).ok_or_else(|| NcError::MissingAssignment(g.to_string()))?;
                        cache.insert(g.clone(), x.clone());
                        x
                    }
                };
                prod *= x;
            }
            if !prod.is_zero() {
                total += prod * c.eval_at(q0)?;
            }
        }
        Ok(total)
    }

    /// Split into homogeneous parts by word length.
    pub fn homogeneous_parts(&self) -> BTreeMap<usize, NCPoly> {
        let mut out: BTreeMap<usize, NCPoly> = BTreeMap::new();
        for (w, c) in &self.terms {
            out.entry(w.len()).or_default().terms.insert(w.clone(), c.clone());
        }
        out
    }
}

impl std::ops::AddAssign<&NCPoly> for NCPoly {
    fn add_assign(&mut self, rhs: &NCPoly) {
        for (w, c) in &rhs.terms {
            self.add_term(w.clone(), c);
        }
    }
}

impl std::ops::SubAssign<&NCPoly> for NCPoly {
    fn sub_assign(&mut self, rhs: &NCPoly) {
        for (w, c) in &rhs.terms {
            self.add_term(w.clone(), &(-c));
        }
    }
}

impl Add for &NCPoly {
    type Output = NCPoly;
    fn add(self, rhs: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &NCPoly {
    type Output = NCPoly;
    fn sub(self, rhs: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        NCPoly { terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect() }
    }
}

impl Mul for &NCPoly {
    type Output = NCPoly;
    fn mul(self, rhs: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &rhs.terms {
                out.add_term(w1.concat(w2), &(c1 * c2));
            }
        }
        out
    }
}

macro_rules! forward_owned_poly {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr<NCPoly> for NCPoly {
            type Output = NCPoly;
            fn $m(self, rhs: NCPoly) -> NCPoly { (&self).$m(&rhs) }
        }
        impl $tr<&NCPoly> for NCPoly {
            type Output = NCPoly;
            fn $m(self, rhs: &NCPoly) -> NCPoly { (&self).$m(rhs) }
        }
    )*};
}

forward_owned_poly!(Add::add, Sub::sub, Mul::mul);

impl Neg for NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        -&self
    }
}

impl From<GenId> for NCPoly {
    fn from(g: GenId) -> Self {
        NCPoly::gen(g)
    }
}

impl From<RationalFn> for NCPoly {
    fn from(c: RationalFn) -> Self {
        NCPoly::constant(c)
    }
}

impl std::iter::Sum for NCPoly {
    fn sum<I: Iterator<Item = NCPoly>>(iter: I) -> NCPoly {
        let mut out = NCPoly::zero();
        for p in iter {
            out += &p;
        }
        out
    }
}

/// Product of polynomials in order.
pub fn product<'a, I: IntoIterator<Item = &'a NCPoly>>(factors: I) -> NCPoly {
    factors.into_iter().fold(NCPoly::one(), |acc, p| &acc * p)
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::render_text(self))
    }
}

impl fmt::Debug for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NCPoly({self})")
    }
}
