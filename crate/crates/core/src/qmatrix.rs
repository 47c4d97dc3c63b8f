//! The quantum matrix bialgebra `Mat_q(n)`: relations, PBW rewriting,
//! quantum determinants and the matrix coproduct.

use std::collections::HashMap;

use rand::Rng;

use crate::hyperalg::RelationSet;
use crate::ncalg::{permutations, GenId, NCPoly, Word};
use crate::qseries::{LaurentV, RationalFn};

/// Generator alphabet `name[i,j]`, `1 <= i, j <= n`, in component `comp`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QMatrixContext {
    pub n: u8,
    pub comp: u8,
    pub name: char,
}

impl QMatrixContext {
    pub fn new(n: u8, comp: u8, name: char) -> Self {
        Self { n, comp, name }
    }

    pub fn gen(&self, i: u8, j: u8) -> GenId {
        GenId::new(self.comp, self.name, [i, j])
    }

    pub fn entry(&self, i: u8, j: u8) -> NCPoly {
        NCPoly::gen(self.gen(i, j))
    }

    fn owns(&self, g: &GenId) -> bool {
        g.comp == self.comp && g.name == self.name && g.idx.len() == 2
    }

    pub fn generators(&self) -> Vec<GenId> {
        (1..=self.n).flat_map(|i| (1..=self.n).map(move |j| (i, j))).map(|(i, j)| self.gen(i, j)).collect()
    }
}

fn q_minus_q_inv() -> RationalFn {
    RationalFn::from_laurent(&LaurentV::q_pow(1) - &LaurentV::q_pow(-1))
}

/// The defining relations: row and column `q`-commutation, then the two cross relations for each `i < j`, `k < l`.
pub fn matq_relations(ctx: &QMatrixContext) -> RelationSet {
    let mut out = RelationSet::new();
    let a = |i, j| ctx.entry(i, j);
    let q = RationalFn::q();
    let pairs: Vec<(u8, u8)> = (1..=ctx.n).flat_map(|i| (i + 1..=ctx.n).map(move |j| (i, j))).collect();
    for i in 1..=ctx.n {
        for &(k, l) in &pairs {
            out.push_raw(&(&a(i, k) * &a(i, l)) - &(&a(i, l) * &a(i, k)).scale(&q));
            out.push_raw(&(&a(k, i) * &a(l, i)) - &(&a(l, i) * &a(k, i)).scale(&q));
        }
    }
    for &(i, j) in &pairs {
        for &(k, l) in &pairs {
            out.push_raw(&(&a(j, k) * &a(i, l)) - &(&a(i, l) * &a(j, k)));
            out.push_raw(
                &(&(&a(i, k) * &a(j, l)) - &(&a(j, l) * &a(i, k))) - &(&a(i, l) * &a(j, k)).scale(&q_minus_q_inv()),
            );
        }
    }
    out
}

/// Rewrite of a descending adjacent pair `big, small` into sorted words.
fn rewrite_pair(ctx: &QMatrixContext, big: &GenId, small: &GenId) -> Vec<(RationalFn, Vec<GenId>)> {
    let (r1, c1) = (big.idx[0], big.idx[1]);
    let (r2, c2) = (small.idx[0], small.idx[1]);
    let sorted = vec![small.clone(), big.clone()];
    if r1 == r2 || c1 == c2 {
        return vec![(RationalFn::q_pow(-1), sorted)];
    }
    if c1 < c2 {
        return vec![(RationalFn::one(), sorted)];
    }
    vec![(RationalFn::one(), sorted), (-q_minus_q_inv(), vec![ctx.gen(r2, c1), ctx.gen(r1, c2)])]
}

fn descents<'a>(ctxs: &'a [QMatrixContext], w: &'a Word) -> impl Iterator<Item = (usize, &'a QMatrixContext)> + 'a {
    let ls = w.letters();
    (0..ls.len().saturating_sub(1)).filter_map(move |p| {
        let ctx = ctxs.iter().find(|c| c.owns(&ls[p]))?;
        (ctx.owns(&ls[p + 1]) && ls[p] > ls[p + 1]).then_some((p, ctx))
    })
}

fn apply_at(ctx: &QMatrixContext, w: &Word, p: usize) -> Vec<(RationalFn, Word)> {
    let ls = w.letters();
    rewrite_pair(ctx, &ls[p], &ls[p + 1])
        .into_iter()
        .map(|(c, mid)| {
            let mut letters = ls[..p].to_vec();
            letters.extend(mid);
            letters.extend_from_slice(&ls[p + 2..]);
            (c, Word::new(letters))
        })
        .collect()
}

/// PBW normal forms over one or more `Mat_q` alphabets; other letters are inert.
pub struct Rewriter {
    ctxs: Vec<QMatrixContext>,
    memo: HashMap<Word, NCPoly>,
}

impl Rewriter {
    pub fn new(ctxs: &[QMatrixContext]) -> Self {
        Self { ctxs: ctxs.to_vec(), memo: HashMap::new() }
    }

    pub fn word_nf(&mut self, w: &Word) -> NCPoly {
        if let Some(p) = self.memo.get(w) {
            return p.clone();
        }
        let first = descents(&self.ctxs, w).next().map(|(p, c)| (p, *c));
        let out = match first {
            None => NCPoly::word(w.clone()),
            Some((p, ctx)) => {
                let mut acc = NCPoly::zero();
                for (c, w2) in apply_at(&ctx, w, p) {
                    let sub = self.word_nf(&w2);
                    acc.add_scaled(&sub, &c);
                }
                acc
            }
        };
        self.memo.insert(w.clone(), out.clone());
        out
    }

    pub fn nf(&mut self, p: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w, c) in p.terms() {
            let sub = self.word_nf(w);
            out.add_scaled(&sub, c);
        }
        out
    }
}

/// Normal form with every adjacent pair of each listed alphabet nondecreasing.
pub fn normal_form(p: &NCPoly, ctxs: &[QMatrixContext]) -> NCPoly {
    Rewriter::new(ctxs).nf(p)
}

/// Normal form reducing at a random descent each step; used to probe confluence.
pub fn normal_form_random<R: Rng>(p: &NCPoly, ctxs: &[QMatrixContext], rng: &mut R) -> NCPoly {
    let mut work = p.clone();
    let mut done = NCPoly::zero();
    loop {
        let next = work.terms().next().map(|(w, c)| (w.clone(), c.clone()));
        let Some((w, c)) = next else { break };
        work.add_term(w.clone(), &-&c);
        let ds: Vec<_> = descents(ctxs, &w).map(|(p, ctx)| (p, *ctx)).collect();
        if ds.is_empty() {
            done.add_term(w, &c);
            continue;
        }
        let (pos, ctx) = ds[rng.gen_range(0..ds.len())];
        for (c2, w2) in apply_at(&ctx, &w, pos) {
            work.add_term(w2, &(&c * &c2));
        }
    }
    done
}

/// `sum_sigma (-q)^{l(sigma)} e(1, sigma(1)) .. e(n, sigma(n))`.
pub fn det_q_row_of<F: FnMut(u8, u8) -> NCPoly>(n: u8, mut entry: F) -> NCPoly {
    let mut cache: HashMap<(u8, u8), NCPoly> = HashMap::new();
    let mut out = NCPoly::zero();
    for s in permutations(n as usize) {
        let mut term = NCPoly::constant(RationalFn::neg_q_pow(s.inversions() as i64));
        for i in 1..=n {
            let j = s.image(i as usize) as u8;
            let e = cache.entry((i, j)).or_insert_with(|| entry(i, j));
            term = &term * &*e;
        }
        out += &term;
    }
    out
}

pub fn det_q_row(n: u8, comp: u8, name: char) -> NCPoly {
    let ctx = QMatrixContext::new(n, comp, name);
    det_q_row_of(n, |i, j| ctx.entry(i, j))
}

/// `sum_sigma (-q)^{l(sigma)} a(sigma(1), 1) .. a(sigma(n), n)`.
pub fn det_q_col(n: u8, comp: u8, name: char) -> NCPoly {
    let ctx = QMatrixContext::new(n, comp, name);
    det_q_row_of(n, |i, j| ctx.entry(j, i))
}

/// `Δ(a_ij) = sum_k a_ik ⊗ a_kj`, the left factor in `left.comp`, the right in `right.comp`.
pub fn coproduct_matq(p: &NCPoly, src: &QMatrixContext, left: &QMatrixContext, right: &QMatrixContext) -> NCPoly {
    p.substitute(|g| {
        if !src.owns(g) {
            return NCPoly::gen(g.clone());
        }
        let (i, j) = (g.idx[0], g.idx[1]);
        (1..=src.n).map(|k| &left.entry(i, k) * &right.entry(k, j)).sum()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncalg::text::parse;
    use proptest::prelude::{prop_assert_eq, proptest};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ctx(n: u8) -> QMatrixContext {
        QMatrixContext::new(n, 0, 'a')
    }

    #[test]
    fn relation_counts() {
        assert!(matq_relations(&ctx(1)).is_empty());
        assert_eq!(matq_relations(&ctx(2)).len(), 6);
        assert_eq!(matq_relations(&ctx(3)).len(), 36);
    }

    #[test]
    fn rewriting_examples() {
        let c = [ctx(2)];
        assert_eq!(normal_form(&parse("a[1,2].a[1,1]").unwrap(), &c), parse("q^-1*a[1,1].a[1,2]").unwrap());
        assert_eq!(
            normal_form(&parse("a[2,2].a[1,1]").unwrap(), &c),
            parse("a[1,1].a[2,2] - (q - q^-1)*a[1,2].a[2,1]").unwrap()
        );
        for n in 2..=3 {
            let d = &det_q_row(n, 0, 'a') - &det_q_col(n, 0, 'a');
            assert!(normal_form(&d, &[ctx(n)]).is_zero(), "n = {n}");
        }
    }

    #[test]
    fn det_examples() {
        assert_eq!(det_q_row(1, 0, 'a'), parse("a[1,1]").unwrap());
        assert_eq!(det_q_row(2, 0, 'a'), parse("a[1,1].a[2,2] - q*a[1,2].a[2,1]").unwrap());
        let d3 = det_q_row(3, 0, 'a');
        assert_eq!(d3.len(), 6);
        let mut exps: Vec<i64> = d3.terms().map(|(_, c)| c.num().min_exp().unwrap() / 2).collect();
        exps.sort();
        assert_eq!(exps, vec![0, 1, 1, 2, 2, 3]);
    }

    #[test]
    fn relations_reduce_to_zero() {
        for n in 2..=3 {
            let c = [ctx(n)];
            for r in matq_relations(&ctx(n)).iter() {
                assert!(normal_form(r, &c).is_zero());
            }
        }
    }

    #[test]
    fn coproduct_examples() {
        let (s, l, r) = (ctx(2), ctx(2), QMatrixContext::new(2, 1, 'a'));
        let d = coproduct_matq(&parse("a[1,1]").unwrap(), &s, &l, &r);
        assert_eq!(d, parse("a[1,1].a[1,1]@1 + a[1,2].a[2,1]@1").unwrap());
        assert_eq!(coproduct_matq(&NCPoly::one(), &s, &l, &r), NCPoly::one());
        let det = det_q_row(2, 0, 'a');
        let lhs = coproduct_matq(&det, &s, &l, &r);
        let rhs = &det * &det_q_row(2, 1, 'a');
        assert!(normal_form(&(&lhs - &rhs), &[l, r]).is_zero());
    }

    #[test]
    fn determinant_is_multiplicative() {
        for n in 2..=3u8 {
            let (a, b) = (ctx(n), QMatrixContext::new(n, 1, 'a'));
            let ab = det_q_row_of(n, |i, j| (1..=n).map(|k| &a.entry(i, k) * &b.entry(k, j)).sum());
            let rhs = &det_q_row(n, 0, 'a') * &det_q_row(n, 1, 'a');
            assert!(normal_form(&(&ab - &rhs), &[a, b]).is_zero(), "n = {n}");
        }
    }

    #[test]
    fn transposition_scales_by_minus_q() {
        for n in 2..=3u8 {
            let a = ctx(n);
            let base = normal_form(&det_q_row(n, 0, 'a'), &[a]);
            for t in 1..n {
                let swap = |j: u8| if j == t { t + 1 } else if j == t + 1 { t } else { j };
                // column swap in the column expansion: sum (-q)^l a(sigma(1), swap(1)) ..
                let cols = det_q_row_of(n, |i, j| a.entry(j, swap(i)));
                assert_eq!(normal_form(&cols, &[a]), base.scale(&-RationalFn::q()));
                // row swap: (P A)_{ij} = a_{swap(i), j}
                let rows = det_q_row_of(n, |i, j| a.entry(swap(i), j));
                assert_eq!(normal_form(&rows, &[a]), base.scale(&-RationalFn::q()));
            }
        }
    }

    #[test]
    fn confluence_probe() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 2..=3u8 {
            let c = [ctx(n)];
            for _ in 0..200 {
                let letters: Vec<GenId> =
                    (0..3).map(|_| c[0].gen(rng.gen_range(1..=n), rng.gen_range(1..=n))).collect();
                let p = NCPoly::monomial(RationalFn::one(), letters);
                let det = normal_form(&p, &c);
                let rnd = normal_form_random(&p, &c, &mut rng);
                assert_eq!(det, rnd);
            }
        }
    }

    proptest! {
        #[test]
        fn nf_is_idempotent(ws in proptest::collection::vec(proptest::collection::vec((1u8..4, 1u8..4), 0..4), 1..4)) {
            let c = [ctx(3)];
            let p: NCPoly = ws.into_iter().map(|w| NCPoly::monomial(RationalFn::one(), w.into_iter().map(|(i, j)| c[0].gen(i, j)).collect())).sum();
            let once = normal_form(&p, &c);
            prop_assert_eq!(normal_form(&once, &c), once);
        }
    }
}
