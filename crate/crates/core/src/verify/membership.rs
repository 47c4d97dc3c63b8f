//! Two-sided ideal membership for homogeneous relations.
//!
//! Relations are grouped by tensor component. Each component `c` carries a
//! multigrading (letter count plus, per generator family, multisets of index
//! values over position groups) under which every relation is homogeneous, so
//! the ideal `I_c` splits into finite graded pieces. Per graded piece, the
//! span of all `u r v` is put in echelon form; reducing with it is a
//! projection `r_c` with kernel `I_c`. In the tensor product of the component
//! algebras, the sum of the ideals `.. ⊗ I_c ⊗ ..` is the kernel of the
//! tensor product of the `r_c`, so membership is `(⊗ r_c)(E) = 0`.
//! Components without relations are free and project identically.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::time::Instant;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::echelon::{Echelon, SparseVec};
use super::field::Field;
use crate::ncalg::{GenId, NCPoly, Word};
use crate::qseries::RationalFn;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Specialize,
    Auto,
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exact" => Ok(Mode::Exact),
            "specialize" => Ok(Mode::Specialize),
            "auto" => Ok(Mode::Auto),
            _ => Err(format!("unknown mode {s}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Limits {
    pub max_words: usize,
    pub max_rows: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self { max_words: 200_000, max_rows: 1_000_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipOptions {
    pub mode: Mode,
    pub samples: usize,
    pub seed: u64,
    pub limits: Limits,
}

impl Default for MembershipOptions {
    fn default() -> Self {
        Self { mode: Mode::Auto, samples: 3, seed: 0x5eed, limits: Limits::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    /// The claimed identity holds in the free algebra.
    ExactZero,
    /// The claimed free-algebra identity fails.
    ExactNonzero { detail: String },
    MemberExact,
    MemberSpecialized { q0s: Vec<String> },
    Nonmember { witness: Option<String>, detail: String },
    Inconclusive { reason: String },
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::ExactZero => "exact_zero",
            Verdict::ExactNonzero { .. } => "exact_nonzero",
            Verdict::MemberExact => "member_exact",
            Verdict::MemberSpecialized { .. } => "member_specialized",
            Verdict::Nonmember { .. } => "nonmember",
            Verdict::Inconclusive { .. } => "inconclusive",
        }
    }

    pub fn holds(&self) -> bool {
        matches!(self, Verdict::ExactZero | Verdict::MemberExact | Verdict::MemberSpecialized { .. })
    }

    pub fn refuted(&self) -> bool {
        matches!(self, Verdict::ExactNonzero { .. } | Verdict::Nonmember { .. })
    }

    pub fn exit_code(&self) -> i32 {
        if self.holds() {
            0
        } else if self.refuted() {
            1
        } else {
            2
        }
    }

    fn strength(&self) -> u8 {
        match self {
            Verdict::ExactZero => 0,
            Verdict::MemberExact => 1,
            Verdict::MemberSpecialized { .. } => 2,
            Verdict::Inconclusive { .. } => 3,
            Verdict::Nonmember { .. } | Verdict::ExactNonzero { .. } => 4,
        }
    }

    /// The stronger of two verdicts of a disjunction.
    pub fn or(self, other: Verdict) -> Verdict {
        if other.strength() < self.strength() {
            other
        } else {
            self
        }
    }

    /// The weaker of two sub-verdicts of a conjunction.
    pub fn and(self, other: Verdict) -> Verdict {
        if other.strength() > self.strength() {
            other
        } else {
            self
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Dims {
    pub words: usize,
    pub rows: usize,
    pub rank: usize,
    pub grades: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipReport {
    pub verdict: Verdict,
    pub mode: Mode,
    pub dims: Dims,
    pub seed: u64,
    pub millis: u128,
}

type Letters = Vec<u16>;

/// Interned alphabet with per-letter grade contributions.
struct Grading {
    letters: Vec<GenId>,
    index: HashMap<GenId, u16>,
    contrib: Vec<Vec<usize>>,
    dim: usize,
}

type Grade = Vec<u16>;

impl Grading {
    fn build(relations: &[NCPoly], elements: &[NCPoly]) -> Result<Self, String> {
        let mut all = BTreeSet::new();
        for p in relations.iter().chain(elements) {
            all.extend(p.alphabet());
        }
        let letters: Vec<GenId> = all.into_iter().collect();
        let index = letters.iter().enumerate().map(|(i, g)| (g.clone(), i as u16)).collect();

        let mut families: BTreeMap<(u8, char, usize), Option<usize>> = BTreeMap::new();
        for g in &letters {
            families.insert((g.comp, g.name, g.arity()), None);
        }
        for (key, choice) in families.iter_mut() {
            let arity = key.2;
            let mut options: Vec<Option<usize>> = (1..=arity.max(1)).filter(|g| arity % g == 0).map(Some).collect();
            options.push(None);
            *choice = options
                .into_iter()
                .find(|opt| relations.iter().all(|r| homogeneous_in(r, key, *opt)))
                .flatten();
        }
        if let Some(r) = relations.iter().find(|r| r.homogeneous_degree().is_none()) {
            return Err(format!("relation of mixed degree: {}", crate::ncalg::text::render_text(r)));
        }

        let mut slots: HashMap<(u8, Option<(char, usize, usize, u8)>), usize> = HashMap::new();
        let mut contrib = Vec::with_capacity(letters.len());
        for g in &letters {
            let mut c = Vec::new();
            let n = slots.len();
            c.push(*slots.entry((g.comp, None)).or_insert(n));
            if let Some(Some(block)) = families.get(&(g.comp, g.name, g.arity())) {
                for (p, &v) in g.idx.iter().enumerate() {
                    let n = slots.len();
                    c.push(*slots.entry((g.comp, Some((g.name, g.arity(), p / block, v)))).or_insert(n));
                }
            }
            contrib.push(c);
        }
        Ok(Self { letters, index, contrib, dim: slots.len() })
    }

    fn intern(&self, w: &Word) -> Letters {
        w.letters().iter().map(|g| self.index[g]).collect()
    }

    fn grade(&self, w: &[u16]) -> Grade {
        let mut g = vec![0u16; self.dim];
        for &l in w {
            for &s in &self.contrib[l as usize] {
                g[s] += 1;
            }
        }
        g
    }

    fn comp(&self, l: u16) -> u8 {
        self.letters[l as usize].comp
    }
}

/// Multiset of `(group, value)` pairs of the letters of one family in a word.
fn family_profile(w: &Word, key: &(u8, char, usize), block: Option<usize>) -> Vec<(usize, u8)> {
    let mut out = Vec::new();
    for g in w.letters() {
        if (g.comp, g.name, g.arity()) != *key {
            continue;
        }
        match block {
            Some(b) => out.extend(g.idx.iter().enumerate().map(|(p, &v)| (p / b, v))),
            None => out.push((usize::MAX, 0)),
        }
    }
    out.sort_unstable();
    out
}

fn homogeneous_in(r: &NCPoly, key: &(u8, char, usize), block: Option<usize>) -> bool {
    let mut profiles = r.terms().map(|(w, _)| family_profile(w, key, block));
    let Some(first) = profiles.next() else { return true };
    profiles.all(|p| p == first)
}

/// Relations as interned words with coefficients in `F`.
struct PreparedRelations<F> {
    by_comp: BTreeMap<u8, Vec<(Grade, Vec<(Letters, F)>)>>,
}

fn prepare<F: Field>(
    grading: &Grading,
    relations: &[NCPoly],
    conv: &dyn Fn(&RationalFn) -> Option<F>,
) -> Result<PreparedRelations<F>, String> {
    let mut by_comp: BTreeMap<u8, Vec<(Grade, Vec<(Letters, F)>)>> = BTreeMap::new();
    for r in relations {
        let mut terms = Vec::new();
        let mut comp = None;
        for (w, c) in r.terms() {
            let ls = grading.intern(w);
            for &l in &ls {
                let cl = grading.comp(l);
                if *comp.get_or_insert(cl) != cl {
                    return Err("relation mixes tensor components".into());
                }
            }
            terms.push((ls, conv(c).ok_or("pole in a relation coefficient")?));
        }
        let Some(comp) = comp else { continue };
        let grade = grading.grade(&terms[0].0);
        by_comp.entry(comp).or_default().push((grade, terms));
    }
    Ok(PreparedRelations { by_comp })
}

/// All words of the component's letters with exactly the given grade.
fn words_of_grade(
    grading: &Grading,
    comp_letters: &[u16],
    target: &[u16],
    budget: &mut usize,
) -> Result<Vec<Letters>, String> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    let mut rem = target.to_vec();
    fn go(
        grading: &Grading,
        letters: &[u16],
        rem: &mut Vec<u16>,
        cur: &mut Letters,
        out: &mut Vec<Letters>,
        budget: &mut usize,
    ) -> Result<(), String> {
        if rem.iter().all(|&x| x == 0) {
            if *budget == 0 {
                return Err("word budget exhausted".into());
            }
            *budget -= 1;
            out.push(cur.clone());
            return Ok(());
        }
        for &l in letters {
            let c = &grading.contrib[l as usize];
            if c.iter().all(|&s| rem[s] > 0) && fits(c, rem) {
                for &s in c {
                    rem[s] -= 1;
                }
                cur.push(l);
                go(grading, letters, rem, cur, out, budget)?;
                cur.pop();
                for &s in c {
                    rem[s] += 1;
                }
            }
        }
        Ok(())
    }
    go(grading, comp_letters, &mut rem, &mut cur, &mut out, budget)?;
    Ok(out)
}

/// A letter may repeat a slot; check multiplicities.
fn fits(c: &[usize], rem: &[u16]) -> bool {
    let mut need: HashMap<usize, u16> = HashMap::new();
    for &s in c {
        *need.entry(s).or_insert(0) += 1;
    }
    need.iter().all(|(s, k)| rem[*s] >= *k)
}

fn sub_grade(a: &[u16], b: &[u16]) -> Option<Grade> {
    a.iter().zip(b).map(|(x, y)| x.checked_sub(*y)).collect()
}

/// Echelon form of the ideal's graded piece, with interned columns.
struct Piece<F: Field> {
    ech: Echelon<F>,
    cols: HashMap<Letters, u32>,
    col_words: Vec<Letters>,
    rows: usize,
    /// Generator label -> (relation index, left word, right word).
    labels: Vec<(usize, Letters, Letters)>,
}

impl<F: Field> Piece<F> {
    fn col(&mut self, w: Letters) -> u32 {
        if let Some(&c) = self.cols.get(&w) {
            return c;
        }
        let c = self.col_words.len() as u32;
        self.col_words.push(w.clone());
        self.cols.insert(w, c);
        c
    }

    fn to_vec(&mut self, terms: &[(Letters, F)]) -> SparseVec<F> {
        let mut v: SparseVec<F> = HashMap::new();
        for (w, a) in terms {
            let c = self.col(w.clone());
            let e = v.entry(c).or_insert_with(F::zero);
            *e = e.add(a);
        }
        v.retain(|_, a| !a.is_zero());
        v
    }

    /// Residual of `terms` as words with coefficients.
    fn residual(&mut self, terms: &[(Letters, F)]) -> Vec<(Letters, F)> {
        let v = self.to_vec(terms);
        self.ech.reduce(v).into_iter().map(|(c, a)| (self.col_words[c as usize].clone(), a)).collect()
    }
}

struct PieceBudget {
    words: usize,
    rows: usize,
}

fn build_piece<F: Field>(
    grading: &Grading,
    comp_letters: &[u16],
    rels: &[(Grade, Vec<(Letters, F)>)],
    grade: &[u16],
    budget: &mut PieceBudget,
    track: bool,
) -> Result<Piece<F>, String> {
    let mut piece =
        Piece { ech: Echelon::new(track), cols: HashMap::new(), col_words: Vec::new(), rows: 0, labels: Vec::new() };
    for (ri, (rg, terms)) in rels.iter().enumerate() {
        let Some(rest) = sub_grade(grade, rg) else { continue };
        let xs = words_of_grade(grading, comp_letters, &rest, &mut budget.words)?;
        for x in xs {
            for p in 0..=x.len() {
                if budget.rows == 0 {
                    return Err("row budget exhausted".into());
                }
                budget.rows -= 1;
                let (u, v) = x.split_at(p);
                let row: Vec<(Letters, F)> = terms
                    .iter()
                    .map(|(w, a)| {
                        let mut full = u.to_vec();
                        full.extend_from_slice(w);
                        full.extend_from_slice(v);
                        (full, a.clone())
                    })
                    .collect();
                let sv = piece.to_vec(&row);
                let label = piece.labels.len();
                if track {
                    piece.labels.push((ri, u.to_vec(), v.to_vec()));
                }
                piece.ech.insert(sv, label);
                piece.rows += 1;
            }
        }
    }
    if piece.col_words.len() > budget.words {
        return Err("word budget exhausted".into());
    }
    budget.words -= piece.col_words.len().min(budget.words);
    Ok(piece)
}

/// Element terms split into per-component letter strings.
struct SplitTerm {
    parts: BTreeMap<u8, Letters>,
}

fn split_terms(grading: &Grading, e: &NCPoly) -> Vec<(SplitTerm, RationalFn)> {
    e.terms()
        .map(|(w, c)| {
            let mut parts: BTreeMap<u8, Letters> = BTreeMap::new();
            for l in grading.intern(w) {
                parts.entry(grading.comp(l)).or_default().push(l);
            }
            (SplitTerm { parts }, c.clone())
        })
        .collect()
}

/// Residuals of all elements over one field; `None` marks a pole.
#[allow(clippy::type_complexity)]
fn residuals<F: Field>(
    grading: &Grading,
    relations: &[NCPoly],
    elements: &[Vec<(SplitTerm, RationalFn)>],
    conv: &(dyn Fn(&RationalFn) -> Option<F> + Sync),
    limits: &Limits,
) -> Result<Option<(Vec<Vec<(Letters, F)>>, Dims)>, String> {
    let prepared = match prepare(grading, relations, conv) {
        Ok(p) => p,
        Err(e) if e.starts_with("pole") => return Ok(None),
        Err(e) => return Err(e),
    };
    let mut needed: BTreeSet<(u8, Grade)> = BTreeSet::new();
    for terms in elements {
        for (t, _) in terms {
            for (comp, ls) in &t.parts {
                if prepared.by_comp.contains_key(comp) {
                    needed.insert((*comp, grading.grade(ls)));
                }
            }
        }
    }
    let comp_letters: BTreeMap<u8, Vec<u16>> = prepared
        .by_comp
        .keys()
        .map(|&c| (c, (0..grading.letters.len() as u16).filter(|&l| grading.comp(l) == c).collect()))
        .collect();
    let tasks: Vec<(u8, Grade)> = needed.into_iter().collect();
    let share = tasks.len().max(1);
    let built: Vec<Result<((u8, Grade), Piece<F>), String>> = tasks
        .into_par_iter()
        .map(|(comp, grade)| {
            let mut budget = PieceBudget { words: limits.max_words / share, rows: limits.max_rows / share };
            let piece = build_piece(grading, &comp_letters[&comp], &prepared.by_comp[&comp], &grade, &mut budget, false)?;
            Ok(((comp, grade), piece))
        })
        .collect();
    let mut pieces: HashMap<(u8, Grade), Piece<F>> = HashMap::new();
    for b in built {
        let (k, p) = b?;
        pieces.insert(k, p);
    }
    let dims = Dims {
        words: pieces.values().map(|p| p.col_words.len()).sum(),
        rows: pieces.values().map(|p| p.rows).sum(),
        rank: pieces.values().map(|p| p.ech.rank()).sum(),
        grades: pieces.len(),
    };

    let mut out = Vec::with_capacity(elements.len());
    let mut cache: HashMap<(u8, Letters), Vec<(Letters, F)>> = HashMap::new();
    for terms in elements {
        let mut total: HashMap<Letters, F> = HashMap::new();
        for (t, c) in terms {
            let Some(cf) = conv(c) else { return Ok(None) };
            let mut acc: Vec<(Letters, F)> = vec![(Vec::new(), cf)];
            for (comp, ls) in &t.parts {
                let part = match pieces.get_mut(&(*comp, grading.grade(ls))) {
                    None => vec![(ls.clone(), F::one())],
                    Some(piece) => cache
                        .entry((*comp, ls.clone()))
                        .or_insert_with(|| piece.residual(&[(ls.clone(), F::one())]))
                        .clone(),
                };
                let mut next = Vec::with_capacity(acc.len() * part.len());
                for (w1, a1) in &acc {
                    for (w2, a2) in &part {
                        let mut w = w1.clone();
                        w.extend_from_slice(w2);
                        next.push((w, a1.mul(a2)));
                    }
                }
                acc = next;
            }
            for (w, a) in acc {
                let e = total.entry(w).or_insert_with(F::zero);
                *e = e.add(&a);
            }
        }
        total.retain(|_, a| !a.is_zero());
        let mut res: Vec<(Letters, F)> = total.into_iter().collect();
        res.sort_by(|a, b| a.0.cmp(&b.0));
        out.push(res);
    }
    Ok(Some((out, dims)))
}

fn sample_v0(rng: &mut ChaCha8Rng) -> BigRational {
    loop {
        let a: i64 = rng.gen_range(-40..=40);
        let b: i64 = rng.gen_range(1..=40);
        let v = BigRational::new(a.into(), b.into());
        let one = BigRational::from_integer(1.into());
        if a != 0 && v != one && v != -one.clone() {
            return v;
        }
    }
}

/// A sampled `q0 = v0^2` at which `c` is defined and nonzero.
pub(crate) fn nonzero_witness(c: &RationalFn, rng: &mut ChaCha8Rng) -> Option<String> {
    (0..50).find_map(|_| {
        let v0 = sample_v0(rng);
        let x = c.eval_at_v(&v0).ok()?;
        (!num_traits::Zero::is_zero(&x)).then(|| (&v0 * &v0).to_string())
    })
}

fn render_letters(grading: &Grading, w: &[u16]) -> String {
    let word = Word::new(w.iter().map(|&l| grading.letters[l as usize].clone()).collect());
    crate::ncalg::text::render_text(&NCPoly::word(word))
}

fn choose_mode(opts: &MembershipOptions, grading: &Grading, elements: &[NCPoly]) -> Mode {
    match opts.mode {
        Mode::Auto => {
            let deg = elements.iter().filter_map(|e| e.degree()).max().unwrap_or(0);
            if deg <= 4 && grading.letters.len() <= 30 {
                Mode::Exact
            } else {
                Mode::Specialize
            }
        }
        m => m,
    }
}

/// Test each element for membership in the two-sided ideal of `relations`.
pub fn ideal_membership_many(
    elements: &[NCPoly],
    relations: &[NCPoly],
    opts: &MembershipOptions,
) -> Vec<MembershipReport> {
    let start = Instant::now();
    let grading = match Grading::build(relations, elements) {
        Ok(g) => g,
        Err(reason) => {
            return elements
                .iter()
                .map(|_| MembershipReport {
                    verdict: Verdict::Inconclusive { reason: reason.clone() },
                    mode: opts.mode,
                    dims: Dims::default(),
                    seed: opts.seed,
                    millis: start.elapsed().as_millis(),
                })
                .collect()
        }
    };
    let mode = choose_mode(opts, &grading, elements);
    let split: Vec<_> = elements.iter().map(|e| split_terms(&grading, e)).collect();
    let report = |verdict: Verdict, dims: &Dims| MembershipReport {
        verdict,
        mode,
        dims: dims.clone(),
        seed: opts.seed,
        millis: start.elapsed().as_millis(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    if mode == Mode::Exact {
        let conv = |c: &RationalFn| Some(c.clone());
        return match residuals::<RationalFn>(&grading, relations, &split, &conv, &opts.limits) {
            Err(reason) => elements.iter().map(|_| report(Verdict::Inconclusive { reason: reason.clone() }, &Dims::default())).collect(),
            Ok(None) => unreachable!("exact coefficients have no poles"),
            Ok(Some((res, dims))) => res
                .into_iter()
                .map(|r| {
                    if r.is_empty() {
                        return report(Verdict::MemberExact, &dims);
                    }
                    let (w, c) = &r[0];
                    let witness = nonzero_witness(c, &mut rng);
                    let detail = format!("residual {} terms, leading {} * {}", r.len(), c, render_letters(&grading, w));
                    report(Verdict::Nonmember { witness, detail }, &dims)
                })
                .collect(),
        };
    }

    let mut q0s = Vec::new();
    let mut failures: Vec<Option<(String, String)>> = vec![None; elements.len()];
    let mut dims = Dims::default();
    let mut attempts = 0;
    while q0s.len() < opts.samples.max(1) {
        attempts += 1;
        if attempts > 100 {
            return elements
                .iter()
                .map(|_| report(Verdict::Inconclusive { reason: "no pole-free sample found".into() }, &dims))
                .collect();
        }
        let v0 = sample_v0(&mut rng);
        let conv = |c: &RationalFn| c.eval_at_v(&v0).ok();
        match residuals::<BigRational>(&grading, relations, &split, &conv, &opts.limits) {
            Err(reason) => {
                return elements.iter().map(|_| report(Verdict::Inconclusive { reason: reason.clone() }, &dims)).collect()
            }
            Ok(None) => continue,
            Ok(Some((res, d))) => {
                let q0 = (&v0 * &v0).to_string();
                for (i, r) in res.iter().enumerate() {
                    if !r.is_empty() && failures[i].is_none() {
                        let detail = format!("residual {} terms at q0 = {q0}, leading {}", r.len(), render_letters(&grading, &r[0].0));
                        failures[i] = Some((q0.clone(), detail));
                    }
                }
                dims = d;
                q0s.push(q0);
            }
        }
    }
    failures
        .into_iter()
        .map(|f| match f {
            None => report(Verdict::MemberSpecialized { q0s: q0s.clone() }, &dims),
            Some((q0, detail)) => report(Verdict::Nonmember { witness: Some(q0), detail }, &dims),
        })
        .collect()
}

pub fn ideal_membership(element: &NCPoly, relations: &[NCPoly], opts: &MembershipOptions) -> MembershipReport {
    ideal_membership_many(std::slice::from_ref(element), relations, opts).pop().expect("one report")
}

/// One summand `c * u r_i v` of a membership certificate.
#[derive(Clone, Debug)]
pub struct CertTerm {
    pub coeff: RationalFn,
    pub left: Word,
    pub relation: usize,
    pub right: Word,
}

/// Exact certificate `element = sum c u r_i v`, for elements and relations in a single component.
pub fn membership_certificate(element: &NCPoly, relations: &[NCPoly], limits: &Limits) -> Result<Option<Vec<CertTerm>>, String> {
    let grading = Grading::build(relations, std::slice::from_ref(element))?;
    let prepared = prepare::<RationalFn>(&grading, relations, &|c| Some(c.clone()))?;
    if prepared.by_comp.len() > 1 {
        return Err("certificates need a single component".into());
    }
    let rel_index: Vec<usize> = (0..relations.len()).filter(|&i| !relations[i].is_zero()).collect();
    let mut by_grade: BTreeMap<Grade, Vec<(Letters, RationalFn)>> = BTreeMap::new();
    for (w, c) in element.terms() {
        let ls = grading.intern(w);
        by_grade.entry(grading.grade(&ls)).or_default().push((ls, c.clone()));
    }
    let Some((&comp, rels)) = prepared.by_comp.iter().next() else {
        return Ok(element.is_zero().then(Vec::new));
    };
    let letters: Vec<u16> = (0..grading.letters.len() as u16).filter(|&l| grading.comp(l) == comp).collect();
    let to_word = |w: &[u16]| Word::new(w.iter().map(|&l| grading.letters[l as usize].clone()).collect());
    let mut out = Vec::new();
    for (grade, terms) in by_grade {
        let mut budget = PieceBudget { words: limits.max_words, rows: limits.max_rows };
        let mut piece = build_piece(&grading, &letters, rels, &grade, &mut budget, true)?;
        let v = piece.to_vec(&terms);
        let (res, combo) = piece.ech.reduce_tracked(v);
        if !res.is_empty() {
            return Ok(None);
        }
        for (label, c) in combo {
            let (ri, u, v) = &piece.labels[label];
            out.push(CertTerm { coeff: c, left: to_word(u), relation: rel_index[*ri], right: to_word(v) });
        }
    }
    Ok(Some(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncalg::text::parse;
    use crate::qmatrix::{matq_relations, QMatrixContext};

    fn rels(n: u8, comp: u8) -> Vec<NCPoly> {
        matq_relations(&QMatrixContext::new(n, comp, 'a')).as_slice().to_vec()
    }

    fn opts(mode: Mode) -> MembershipOptions {
        MembershipOptions { mode, ..Default::default() }
    }

    #[test]
    fn simple_members_and_nonmembers() {
        let r = rels(2, 0);
        let member = parse("a[1,1].a[1,2].a[2,2] - q*a[1,2].a[1,1].a[2,2]").unwrap();
        let non = parse("a[1,1].a[1,2] - a[1,2].a[1,1]").unwrap();
        for mode in [Mode::Exact, Mode::Specialize] {
            assert!(ideal_membership(&member, &r, &opts(mode)).verdict.holds());
            let v = ideal_membership(&non, &r, &opts(mode)).verdict;
            assert!(v.refuted(), "{v:?}");
        }
    }

    #[test]
    fn tensor_components() {
        let mut r = rels(2, 0);
        r.extend(rels(2, 1));
        // a relation of component 0 times a free word of component 1
        let e = parse("a[1,1].a[1,2].a[2,1]@1 - q*a[1,2].a[1,1].a[2,1]@1").unwrap();
        assert_eq!(ideal_membership(&e, &r, &opts(Mode::Exact)).verdict, Verdict::MemberExact);
        let e2 = parse("a[1,1].a[2,2]@1.a[1,1]@1 - a[1,1].a[1,1]@1.a[2,2]@1").unwrap();
        assert!(ideal_membership(&e2, &r, &opts(Mode::Exact)).verdict.refuted());
        let free = parse("a[1,1].b[2]@2 - q*a[1,1].b[2]@2").unwrap();
        assert!(ideal_membership(&free, &r, &opts(Mode::Exact)).verdict.refuted());
    }

    #[test]
    fn certificates_reconstruct() {
        let r = rels(2, 0);
        for e in ["a[2,2].a[1,1] - a[1,1].a[2,2] + (q - q^-1)*a[1,2].a[2,1]", "2*a[2,1].a[1,2] - 2*a[1,2].a[2,1]"] {
            let e = parse(e).unwrap();
            let cert = membership_certificate(&e, &r, &Limits::default()).unwrap().expect("member");
            let mut sum = NCPoly::zero();
            for t in cert {
                let piece = &(&NCPoly::word(t.left) * &r[t.relation]) * &NCPoly::word(t.right);
                sum.add_scaled(&piece, &t.coeff);
            }
            assert_eq!(sum, e);
        }
        assert!(membership_certificate(&parse("a[1,1].a[1,2]").unwrap(), &r, &Limits::default()).unwrap().is_none());
    }

    #[test]
    fn budgets_make_it_inconclusive() {
        let r = rels(2, 0);
        let e = parse("a[1,1].a[1,2].a[2,2] - q*a[1,2].a[1,1].a[2,2]").unwrap();
        let o = MembershipOptions { limits: Limits { max_words: 2, max_rows: 2 }, ..opts(Mode::Exact) };
        assert!(matches!(ideal_membership(&e, &r, &o).verdict, Verdict::Inconclusive { .. }));
    }
}
