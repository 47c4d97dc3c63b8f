use std::collections::{BTreeMap, HashMap};
use std::fmt::Display;

use itertools::Itertools;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CheckError, CheckOptions, Params};
use crate::extalg::{omega_vector, wedge_all, wedge_relation_coefficients, ExtMono};
use crate::hyperalg::{
    cayley_classical, circ_product, classical_product, coaction, delta_split, derived_relations_rea3, hyperdet_fixed,
    hyperdet_fixed_of, hyperdet_full_sum, hyperdet_normalized, laplace_minor_poly, laplace_row_poly, minor_xi,
    phi_map, pluecker_poly, relations, relations_axis, uq_action, CartanSplit, CoactionSide, HyperAlgebra, HyperShape,
    PlueckerVariant, RelationSet, SignConvention, UqGen, WeightVector,
};
use crate::ncalg::text::parse;
use crate::ncalg::{permutations, subsets, GenId, NCPoly, Word};
use crate::pfaffian::{
    det_as_pf_poly, det_pf_constant_poly, hypf_relations, pf_compose_poly, pf_det_bridge_poly, pf_full,
    pf_laplace_poly, pf_lemma_poly, pf_prime, HypfConvention, LaplacePlacement, PfShape,
};
use crate::qmatrix::{coproduct_matq, det_q_col, det_q_row, det_q_row_of, matq_relations, QMatrixContext, Rewriter};
use crate::qseries::{qfact, qnum, LaurentV, RationalFn};
use crate::verify::membership::{ideal_membership_many, nonzero_witness, Dims, Mode, Verdict};

type R<T> = Result<T, CheckError>;

fn perr<E: Display>(e: E) -> CheckError {
    CheckError::Params(e.to_string())
}

fn need<T: Clone>(v: &Option<T>, name: &str) -> R<T> {
    v.clone().ok_or_else(|| CheckError::Params(format!("missing parameter {name}")))
}

fn size(n: u8) -> R<u8> {
    if n == 0 || n > 12 {
        return Err(CheckError::Params(format!("size {n} out of range 1..=12")));
    }
    Ok(n)
}

fn axes(m: usize) -> R<usize> {
    if m == 0 || m > 8 {
        return Err(CheckError::Params(format!("axis count {m} out of range 1..=8")));
    }
    Ok(m)
}

fn cube(p: &Params) -> R<HyperAlgebra> {
    Ok(HyperAlgebra::cube(size(need(&p.n, "n")?)?, axes(need(&p.m, "m")?)?))
}

fn cartan(p: &Params) -> R<CartanSplit> {
    match p.cartan.as_deref() {
        None | Some("opposite") => Ok(CartanSplit::Opposite),
        Some("symmetric") => Ok(CartanSplit::Symmetric),
        Some(s) => Err(CheckError::Params(format!("unknown Cartan split {s}"))),
    }
}

fn hypf(p: &Params) -> R<HypfConvention> {
    match p.hypf.as_deref() {
        None | Some("unsigned") => Ok(HypfConvention::Unsigned),
        Some("displayed") => Ok(HypfConvention::Displayed),
        Some(s) => Err(CheckError::Params(format!("unknown hyper-Pfaffian convention {s}"))),
    }
}

fn sign(p: &Params) -> R<SignConvention> {
    match p.sign.as_deref() {
        None | Some("all-axes") => Ok(SignConvention::AllAxes),
        Some("as-displayed") => Ok(SignConvention::AsDisplayed),
        Some(s) => Err(CheckError::Params(format!("unknown sign convention {s}"))),
    }
}

/// Blocks per axis group; `n` is accepted as an alias.
fn blocks(p: &Params) -> R<usize> {
    p.blocks.or(p.n.map(usize::from)).ok_or_else(|| CheckError::Params("missing parameter blocks".into()))
}

fn pf_shape(p: &Params) -> R<PfShape> {
    PfShape::new(need(&p.k, "k")?, axes(need(&p.m, "m")?)?, blocks(p)?).map_err(perr)
}

fn mat_size(x: usize) -> R<u8> {
    u8::try_from(x).map_err(perr).and_then(size)
}

fn union(sets: &[&RelationSet]) -> Vec<NCPoly> {
    sets.iter().flat_map(|s| s.iter().cloned()).collect()
}

/// Accumulates sub-verdicts of one check.
pub(in crate::verify) struct Run<'a> {
    opts: &'a CheckOptions,
    verdict: Option<Verdict>,
    mode: Option<Mode>,
    dims: Dims,
    notes: Vec<String>,
    rng: ChaCha8Rng,
}

impl<'a> Run<'a> {
    pub(in crate::verify) fn new(opts: &'a CheckOptions) -> Self {
        Self {
            opts,
            verdict: None,
            mode: None,
            dims: Dims::default(),
            notes: Vec::new(),
            rng: ChaCha8Rng::seed_from_u64(opts.membership.seed),
        }
    }

    pub(in crate::verify) fn finish(self) -> (Verdict, Mode, Dims, Vec<String>) {
        (self.verdict.unwrap_or(Verdict::ExactZero), self.mode.unwrap_or(Mode::Exact), self.dims, self.notes)
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn record(&mut self, label: &str, v: Verdict) -> Verdict {
        self.note(format!("{label}: {}", v.label()));
        self.verdict = Some(match self.verdict.take() {
            None => v.clone(),
            Some(old) => old.and(v.clone()),
        });
        v
    }

    /// Claimed-zero elements of the free algebra.
    fn exact(&mut self, label: &str, diffs: &[NCPoly]) -> Verdict {
        let v = match diffs.iter().position(|d| !d.is_zero()) {
            None => Verdict::ExactZero,
            Some(i) => Verdict::ExactNonzero { detail: format!("element {i} has {} terms", diffs[i].len()) },
        };
        self.record(label, v)
    }

    /// Membership without recording a verdict.
    fn decide(&mut self, elements: &[NCPoly], relations: &[NCPoly]) -> Verdict {
        let nonzero: Vec<NCPoly> = elements.iter().filter(|e| !e.is_zero()).cloned().collect();
        if nonzero.is_empty() {
            return Verdict::ExactZero;
        }
        let reports = ideal_membership_many(&nonzero, relations, &self.opts.membership);
        let d = &reports[0].dims;
        self.dims.words += d.words;
        self.dims.rows += d.rows;
        self.dims.rank += d.rank;
        self.dims.grades += d.grades;
        let mode = reports[0].mode;
        self.mode = Some(match self.mode {
            Some(Mode::Specialize) => Mode::Specialize,
            _ => mode,
        });
        reports.into_iter().map(|r| r.verdict).reduce(Verdict::and).expect("nonempty")
    }

    fn member(&mut self, label: &str, elements: &[NCPoly], relations: &[NCPoly]) -> Verdict {
        let v = self.decide(elements, relations);
        self.record(&format!("{label} ({} elements)", elements.len()), v)
    }

    /// Membership decided by PBW normal forms of quantum matrix alphabets.
    fn normal_form(&mut self, label: &str, diffs: &[NCPoly], ctxs: &[QMatrixContext]) -> Verdict {
        let mut rw = Rewriter::new(ctxs);
        let mut v = Verdict::ExactZero;
        for (i, d) in diffs.iter().enumerate() {
            if d.is_zero() {
                continue;
            }
            let nf = rw.nf(d);
            if let Some((_, c)) = nf.terms().next() {
                let witness = nonzero_witness(c, &mut self.rng);
                v = Verdict::Nonmember { witness, detail: format!("element {i}: normal form has {} terms", nf.len()) };
                break;
            }
            v = Verdict::MemberExact;
        }
        self.record(&format!("{label} (normal form)"), v)
    }

    fn seed(&self) -> u64 {
        self.opts.membership.seed
    }
}

pub(in crate::verify) fn dispatch(id: &str, p: &Params, run: &mut Run<'_>) -> R<()> {
    match id {
        "trel-equivalence" => trel(p, run),
        "rea3-derived" => rea3(p, run),
        "re-det" => re_det(p, run),
        "matq-m2-consistency" => matq_m2(p, run),
        "detq-row-eq-col" => detq_row_col(p, run),
        "detq-multiplicative" => detq_mult(p, run),
        "detq-coproduct-grouplike" => detq_grouplike(p, run),
        "hyperdet-normalized-vs-fixed" => normalized_vs_fixed(p, run),
        "sm-invariance-normalized" => sm_normalized(p, run),
        "sm-invariance-fixed" => sm_fixed(p, run),
        "hyperdet-example-2cubed" => example_2cubed(p, run),
        "cayley-odd-vanish" => odd_vanish(p, run),
        "phi-image" => phi_image(p, run),
        "delta-homomorphism" => delta_hom(p, run),
        "delta-laplace" => delta_laplace(p, run),
        "row-laplace" => row_laplace(p, run),
        "minor-laplace" => minor_laplace(p, run),
        "pluecker-thp1a" => pluecker(p, run, PlueckerVariant::Thp1A),
        "pluecker-thp1b" => pluecker(p, run, PlueckerVariant::Thp1B),
        "pluecker-thp3" => pluecker(p, run, PlueckerVariant::Thp3),
        "coaction-left-det" => coaction_det(p, run, CoactionSide::Left),
        "coaction-right-det" => coaction_det(p, run, CoactionSide::Right),
        "uq-e-annihilates" => uq_kill(p, run, true),
        "uq-f-annihilates" => uq_kill(p, run, false),
        "uq-weight" => uq_weight(p, run),
        "pf-equivalence" => pf_equivalence(p, run),
        "pf-lemma-equiv" => pf_lemma(p, run),
        "pf-laplace" => pf_laplace(p, run),
        "pf-composition" => pf_composition(p, run),
        "pf-det-bridge" => pf_bridge(p, run),
        "det-as-pf-corollary" => det_as_pf(p, run),
        "det-pf-constant" => det_pf_constant(p, run),
        "circ-invariance-quantum" => circ_quantum(p, run),
        "circ-invariance-classical" => circ_classical(p, run),
        "classical-product-invariance" => product_classical(p, run),
        _ => Err(CheckError::UnknownId(id.to_string())),
    }
}

fn trel(p: &Params, run: &mut Run<'_>) -> R<()> {
    let alg = cube(p)?;
    let mut bad = Vec::new();
    for k in 1..=alg.m() {
        let wedge: RelationSet = wedge_relation_coefficients(&alg, k).map_err(perr)?.into_iter().collect();
        let gen = relations_axis(&alg, k).map_err(perr)?;
        run.note(format!("axis {k}: {} wedge coefficients, {} relations", wedge.len(), gen.len()));
        if !wedge.same_members(&gen) {
            bad.push(k);
        }
    }
    let v = if bad.is_empty() {
        Verdict::ExactZero
    } else {
        Verdict::ExactNonzero { detail: format!("coefficient sets differ on axes {bad:?}") }
    };
    run.record("wedge coefficients = relations", v);
    Ok(())
}

fn rea3(p: &Params, run: &mut Run<'_>) -> R<()> {
    let alg = cube(p)?;
    let derived = derived_relations_rea3(&alg).map_err(perr)?;
    run.member("cross-axis differences", derived.as_slice(), relations(&alg).as_slice());
    Ok(())
}

fn re_det(p: &Params, run: &mut Run<'_>) -> R<()> {
    let alg = cube(p)?;
    let n = alg.shape().cube_size().map_err(perr)? as usize;
    let top = ExtMono::top(n, alg.m() - 1);
    let mut routes = Vec::new();
    let mut fixed = Vec::new();
    for k in 1..=alg.m() {
        let prod = wedge_all(&omega_vector(&alg, k).map_err(perr)?).map_err(perr)?;
        let f = hyperdet_fixed(&alg, k).map_err(perr)?;
        routes.push(&prod.coeff_of(&top) - &f);
        fixed.push(f);
    }
    run.exact("top wedge coefficient = fixed-axis sum", &routes);
    let diffs: Vec<NCPoly> = fixed[1..].iter().map(|f| f - &fixed[0]).collect();
    run.member("axis k top product - axis 1 top product", &diffs, relations(&alg).as_slice());
    Ok(())
}

fn matq_m2(p: &Params, run: &mut Run<'_>) -> R<()> {
    let n = size(need(&p.n, "n")?)?;
    let hyper = relations(&HyperAlgebra::cube(n, 2));
    let matq = matq_relations(&QMatrixContext::new(n, 0, 'a'));
    run.note(format!("{} hypermatrix relations, {} quantum matrix relations", hyper.len(), matq.len()));
    run.member("quantum matrix relations in hypermatrix ideal", matq.as_slice(), hyper.as_slice());
    run.member("hypermatrix relations in quantum matrix ideal", hyper.as_slice(), matq.as_slice());
    Ok(())
}

fn detq_row_col(p: &Params, run: &mut Run<'_>) -> R<()> {
    let n = size(need(&p.n, "n")?)?;
    let d = &det_q_row(n, 0, 'a') - &det_q_col(n, 0, 'a');
    run.normal_form("row - column", &[d], &[QMatrixContext::new(n, 0, 'a')]);
    Ok(())
}

fn detq_mult(p: &Params, run: &mut Run<'_>) -> R<()> {
    let n = size(need(&p.n, "n")?)?;
    let (a, b) = (QMatrixContext::new(n, 0, 'a'), QMatrixContext::new(n, 1, 'a'));
    let ab = |i: u8, j: u8| -> NCPoly { (1..=n).map(|l| &a.entry(i, l) * &b.entry(l, j)).sum() };
    let rhs = &det_q_row(n, 0, 'a') * &det_q_row(n, 1, 'a');
    let row = &det_q_row_of(n, ab) - &rhs;
    let col = &det_q_row_of(n, |i, j| ab(j, i)) - &rhs;
    run.normal_form("row determinant of AB", &[row], &[a, b]);
    run.normal_form("column determinant of AB", &[col], &[a, b]);
    Ok(())
}

fn detq_grouplike(p: &Params, run: &mut Run<'_>) -> R<()> {
    let n = size(need(&p.n, "n")?)?;
    let (src, l, r) = (QMatrixContext::new(n, 0, 'a'), QMatrixContext::new(n, 1, 'a'), QMatrixContext::new(n, 2, 'a'));
    let det = det_q_row(n, 0, 'a');
    let d = &coproduct_matq(&det, &src, &l, &r) - &(&det_q_row(n, 1, 'a') * &det_q_row(n, 2, 'a'));
    run.normal_form("coproduct of det", &[d], &[l, r]);
    let counit = det.substitute(|g| if g.idx[0] == g.idx[1] { NCPoly::one() } else { NCPoly::zero() });
    run.exact("counit of det = 1", &[&counit - &NCPoly::one()]);
    Ok(())
}

fn normalized_vs_fixed(p: &Params, run: &mut Run<'_>) -> R<()> {
    let alg = cube(p)?;
    let norm = hyperdet_normalized(&alg).map_err(perr)?;
    let diffs = (1..=alg.m()).map(|k| Ok(&norm - &hyperdet_fixed(&alg, k)?)).collect::<Result<Vec<_>, crate::hyperalg::HyperError>>().map_err(perr)?;
    run.member("normalized - fixed axis k", &diffs, relations(&alg).as_slice());
    Ok(())
}

fn sm_normalized(p: &Params, run: &mut Run<'_>) -> R<()> {
    let alg = cube(p)?;
    let norm = hyperdet_normalized(&alg).map_err(perr)?;
    let diffs = permutations(alg.m())
        .iter()
        .map(|s| Ok(&norm.act_axis_perm(s, 0)? - &norm))
        .collect::<Result<Vec<_>, crate::NcError>>()
        .map_err(perr)?;
    run.exact("sigma . normalized = normalized", &diffs);
    Ok(())
}

fn sm_fixed(p: &Params, run: &mut Run<'_>) -> R<()> {
    let alg = cube(p)?;
    let f = hyperdet_fixed(&alg, 1).map_err(perr)?;
    let diffs = permutations(alg.m())
        .iter()
        .map(|s| Ok(&f.act_axis_perm(s, 0)? - &f))
        .collect::<Result<Vec<_>, crate::NcError>>()
        .map_err(perr)?;
    run.member("sigma . fixed - fixed", &diffs, relations(&alg).as_slice());
    Ok(())
}

/// `[2]_{q^2} Det_q` of the `2 x 2 x 2` hypermatrix.
pub const EXAMPLE_2CUBED: &str = "a[1,1,1].a[2,2,2] - q*a[2,1,1].a[1,2,2] - q*a[1,2,1].a[2,1,2] - q*a[1,1,2].a[2,2,1] \
    + q^2*a[2,2,1].a[1,1,2] + q^2*a[2,1,2].a[1,2,1] + q^2*a[1,2,2].a[2,1,1] - q^3*a[2,2,2].a[1,1,1]";

/// Words with their letters sorted, i.e. the image in the commutative algebra.
pub fn commutativize(p: &NCPoly) -> NCPoly {
    let mut out = NCPoly::zero();
    for (w, c) in p.terms() {
        let mut letters = w.letters().to_vec();
        letters.sort();
        out.add_term(Word::new(letters), c);
    }
    out
}

/// Commutative image at `q = 1`, as exact rational coefficients.
pub fn commutative_at_one(p: &NCPoly) -> R<BTreeMap<Vec<GenId>, BigRational>> {
    let one = BigRational::one();
    let mut out: BTreeMap<Vec<GenId>, BigRational> = BTreeMap::new();
    for (w, c) in commutativize(p).terms() {
        let x = c.eval_at_v(&one).map_err(perr)?;
        if !x.is_zero() {
            out.insert(w.letters().to_vec(), x);
        }
    }
    Ok(out)
}

fn example_2cubed(p: &Params, run: &mut Run<'_>) -> R<()> {
    if p.n != Some(2) || p.m != Some(3) {
        return Err(CheckError::Params("this example is the 2x2x2 case".into()));
    }
    let alg = HyperAlgebra::cube(2, 3);
    let norm = hyperdet_normalized(&alg).map_err(perr)?;
    let two = RationalFn::from_laurent(qnum(2, 2));
    let golden = parse(EXAMPLE_2CUBED).map_err(perr)?;
    run.exact("[2]_{q^2} normalized = displayed polynomial", &[&norm.scale(&two) - &golden]);
    let one_minus_q = RationalFn::from_laurent(&LaurentV::one() - &LaurentV::q_pow(1));
    let c = one_minus_q.checked_div(&two).map_err(perr)?;
    let inner = parse("(1 + q + q^2)*a[1,1,1].a[2,2,2] - q*a[2,1,1].a[1,2,2] - q*a[1,2,1].a[2,1,2] - q*a[1,1,2].a[2,2,1]")
        .map_err(perr)?;
    run.exact("commutative image", &[&commutativize(&norm) - &commutativize(&inner.scale(&c))]);
    Ok(())
}

fn odd_vanish(p: &Params, run: &mut Run<'_>) -> R<()> {
    let alg = cube(p)?;
    if alg.m() % 2 == 0 {
        return Err(CheckError::Params("needs an odd number of axes".into()));
    }
    let image = commutative_at_one(&hyperdet_normalized(&alg).map_err(perr)?)?;
    let v = if image.is_empty() {
        Verdict::ExactZero
    } else {
        Verdict::ExactNonzero { detail: format!("{} surviving commutative monomials", image.len()) }
    };
    run.record("commutative image at q = 1", v);
    Ok(())
}

fn phi_image(p: &Params, run: &mut Run<'_>) -> R<()> {
    let alg = cube(p)?;
    if alg.m() % 2 != 0 {
        return Err(CheckError::Params("needs an even number of axes".into()));
    }
    let n = alg.shape().cube_size().map_err(perr)?;
    let pairs = alg.m() / 2;
    let ctxs: Vec<QMatrixContext> = (0..pairs as u8).map(|s| QMatrixContext::new(n, s, 'a')).collect();
    let rel_images = relations(&alg).iter().map(|r| phi_map(r, &alg)).collect::<Result<Vec<_>, _>>().map_err(perr)?;
    run.normal_form("phi of relations", &rel_images, &ctxs);

    let mut rw = Rewriter::new(&ctxs);
    let image = rw.nf(&phi_map(&hyperdet_full_sum(&alg).map_err(perr)?, &alg).map_err(perr)?);
    let power = rw.nf(&crate::ncalg::product(&(0..pairs as u8).map(|s| det_q_row(n, s, 'a')).collect::<Vec<_>>()));
    let (w, y) = power.terms().next().map(|(w, y)| (w.clone(), y.clone())).expect("det is nonzero");
    let c = image.coeff(&w).checked_div(&y).map_err(perr)?;
    let residual = &image - &power.scale(&c);
    let v = if residual.is_zero() {
        Verdict::MemberExact
    } else {
        Verdict::Nonmember { witness: None, detail: format!("not proportional: {} residual terms", residual.len()) }
    };
    run.record("phi(full sum) proportional to det^{⊗m}", v);
    let fact = RationalFn::from_laurent(qfact(n as u32, 2));
    let mut stated = RationalFn::one();
    for _ in 1..alg.m() {
        stated = &stated * &fact;
    }
    let normalized = c.checked_div(&fact).map_err(perr)?;
    run.note(format!("constant for the full permutation sum: {c}"));
    run.note(format!("constant for the normalized hyperdeterminant: {normalized}"));
    run.note(format!("([n]_{{q^2}}!)^(2m-1) = {stated}"));
    let agree = |x: &RationalFn| if *x == stated { "agrees" } else { "disagrees" };
    run.note(format!("full sum {}; normalized {}", agree(&c), agree(&normalized)));
    Ok(())
}

fn delta_algebras(p: &Params) -> R<(HyperAlgebra, HyperAlgebra, HyperAlgebra, usize)> {
    let n = size(need(&p.n, "n")?)?;
    let m = axes(need(&p.m, "m")?)?;
    let l = axes(need(&p.l, "l")?)?;
    let alg = HyperAlgebra::cube(n, axes(m + l)?);
    let left = HyperAlgebra::new(HyperShape::cube(n, m + 1), 0, 'a');
    let right = HyperAlgebra::new(HyperShape::cube(n, l + 1), 1, 'a');
    Ok((alg, left, right, m))
}

fn delta_hom(p: &Params, run: &mut Run<'_>) -> R<()> {
    let (alg, left, right, m) = delta_algebras(p)?;
    let images = relations(&alg).iter().map(|r| delta_split(r, &alg, m)).collect::<Result<Vec<_>, _>>().map_err(perr)?;
    run.member("delta of relations", &images, &union(&[&relations(&left), &relations(&right)]));
    Ok(())
}

fn delta_laplace(p: &Params, run: &mut Run<'_>) -> R<()> {
    let (alg, left, right, m) = delta_algebras(p)?;
    let n = alg.shape().cube_size().map_err(perr)?;
    let full: Vec<u8> = (1..=n).collect();
    let ranks: Vec<usize> = match p.r {
        Some(r) => vec![r as usize],
        None => (1..=n as usize).collect(),
    };
    let mut elements = Vec::new();
    for r in ranks {
        let all = subsets(&full, r);
        for sets in (0..alg.m()).map(|_| all.iter().cloned()).multi_cartesian_product() {
            let (is, js) = sets.split_at(m);
            let lhs = delta_split(&minor_xi(&alg, &sets).map_err(perr)?, &alg, m).map_err(perr)?;
            let mut rhs = NCPoly::zero();
            for kset in &all {
                let mut ls = is.to_vec();
                ls.push(kset.clone());
                let mut rs = vec![kset.clone()];
                rs.extend_from_slice(js);
                rhs += &(&minor_xi(&left, &ls).map_err(perr)? * &minor_xi(&right, &rs).map_err(perr)?);
            }
            elements.push(&lhs - &rhs);
        }
    }
    run.member("delta of minors", &elements, &union(&[&relations(&left), &relations(&right)]));
    Ok(())
}

fn row_laplace(p: &Params, run: &mut Run<'_>) -> R<()> {
    let alg = cube(p)?;
    let n = alg.shape().cube_size().map_err(perr)?;
    let elements = (0..n)
        .map(|_| 1..=n)
        .multi_cartesian_product()
        .map(|rows| laplace_row_poly(&alg, &rows))
        .collect::<Result<Vec<_>, _>>()
        .map_err(perr)?;
    run.member("row expansions", &elements, relations(&alg).as_slice());
    Ok(())
}

fn minor_laplace(p: &Params, run: &mut Run<'_>) -> R<()> {
    let alg = cube(p)?;
    let n = alg.shape().cube_size().map_err(perr)?;
    let full: Vec<u8> = (1..=n).collect();
    let ranks: Vec<u8> = match p.r {
        Some(r) => vec![r],
        None => (1..n).collect(),
    };
    let mut elements = Vec::new();
    for r in ranks {
        for first in subsets(&full, r as usize) {
            elements.push(laplace_minor_poly(&alg, &first).map_err(perr)?);
        }
    }
    run.member("minor expansions", &elements, relations(&alg).as_slice());
    Ok(())
}

fn pluecker(p: &Params, run: &mut Run<'_>, variant: PlueckerVariant) -> R<()> {
    let n = size(need(&p.n, "n")?)?;
    let alg = HyperAlgebra::cube(size(2 * n)?, axes(need(&p.m, "m")?)?);
    let r = need(&p.r, "r")?;
    let e = pluecker_poly(&alg, variant, r).map_err(perr)?;
    run.member("quadratic minor identity", &[e], relations(&alg).as_slice());
    Ok(())
}

fn coaction_det(p: &Params, run: &mut Run<'_>, side: CoactionSide) -> R<()> {
    let alg = cube(p)?;
    let n = alg.shape().cube_size().map_err(perr)?;
    let (mc, hc) = match side {
        CoactionSide::Left => (0, 1),
        CoactionSide::Right => (1, 0),
    };
    let det = hyperdet_fixed(&alg, 1).map_err(perr)?;
    let hyp = alg.in_comp(hc);
    let rhs = &det_q_row(n, mc, 'a') * &hyperdet_fixed(&hyp, 1).map_err(perr)?;
    let ks: Vec<usize> = match p.axis {
        Some(k) => vec![k],
        None => (1..=alg.m()).collect(),
    };
    let elements = ks.iter().map(|&k| Ok(&coaction(&det, &alg, side, k)? - &rhs)).collect::<Result<Vec<_>, crate::hyperalg::HyperError>>().map_err(perr)?;
    let rels = union(&[&matq_relations(&QMatrixContext::new(n, mc, 'a')), &relations(&hyp)]);
    run.member(&format!("coaction along axes {ks:?}"), &elements, &rels);
    Ok(())
}

fn uq_kill(p: &Params, run: &mut Run<'_>, raise: bool) -> R<()> {
    let alg = cube(p)?;
    let n = alg.shape().cube_size().map_err(perr)?;
    let split = cartan(p)?;
    let det = hyperdet_fixed(&alg, 1).map_err(perr)?;
    let mut elements = Vec::new();
    for side in [CoactionSide::Left, CoactionSide::Right] {
        for k in 1..n {
            let g = if raise { UqGen::E(k) } else { UqGen::F(k) };
            elements.push(uq_action(&g, side, split, &det));
        }
    }
    run.note(format!("Cartan split {split:?}"));
    let v = run.member("generator images of Det", &elements, relations(&alg).as_slice());
    let outcome = match v {
        Verdict::ExactZero => "exact zero in the free algebra",
        ref v if v.holds() => "zero modulo the relations",
        _ => "not zero",
    };
    run.note(format!("outcome: {outcome}"));
    Ok(())
}

fn uq_weight(p: &Params, run: &mut Run<'_>) -> R<()> {
    let alg = cube(p)?;
    let n = alg.shape().cube_size().map_err(perr)? as usize;
    let det = hyperdet_fixed(&alg, 1).map_err(perr)?;
    let mut weights: Vec<WeightVector> = (0..n)
        .map(|i| WeightVector((0..n).map(|j| if i == j { 2 } else { 0 }).collect()))
        .collect();
    weights.push(WeightVector((1..=n as i64).map(|j| 2 * j - 3).collect()));
    let mut diffs = Vec::new();
    for side in [CoactionSide::Left, CoactionSide::Right] {
        for w in &weights {
            let lhs = uq_action(&UqGen::Weight(w.clone()), side, CartanSplit::default(), &det);
            diffs.push(&lhs - &det.scale(&RationalFn::v_pow(w.total())));
        }
    }
    run.exact("q^lambda . Det = q^<lambda, sum eps> Det", &diffs);
    Ok(())
}

fn pf_equivalence(p: &Params, run: &mut Run<'_>) -> R<()> {
    let shape = pf_shape(p)?;
    let rels = hypf_relations(&shape, 0, 'b', hypf(p)?);
    let d = &pf_full(&shape, 0, 'b') - &pf_prime(&shape, 0, 'b');
    run.member("full - reduced", &[d], rels.as_slice());
    Ok(())
}

fn pf_lemma(p: &Params, run: &mut Run<'_>) -> R<()> {
    let shape = pf_shape(p)?;
    let e = pf_lemma_poly(&shape, 0, 'b');
    if e.is_zero() {
        run.exact("first-block expansion", &[e]);
    } else {
        run.note("first-block expansion is not a free-algebra identity");
        run.member("first-block expansion", &[e], hypf_relations(&shape, 0, 'b', hypf(p)?).as_slice());
    }
    Ok(())
}

fn pf_laplace(p: &Params, run: &mut Run<'_>) -> R<()> {
    let shape = pf_shape(p)?;
    let t = need(&p.t, "t")?;
    let rels = hypf_relations(&shape, 0, 'b', hypf(p)?);
    let mut holding = Vec::new();
    let mut best: Option<Verdict> = None;
    for (name, placement) in [("multiply", LaplacePlacement::Multiply), ("divide", LaplacePlacement::Divide)] {
        let e = pf_laplace_poly(&shape, t, placement, 0, 'b').map_err(perr)?;
        let v = run.decide(&[e], rels.as_slice());
        run.note(format!("{name}: {}", v.label()));
        if v.holds() {
            holding.push(name);
        }
        best = Some(match best {
            None => v,
            Some(b) => b.or(v),
        });
    }
    run.note(format!("placement={}", if holding.is_empty() { "none".to_string() } else { holding.join("+") }));
    run.record("Laplace expansion", best.expect("two placements"));
    Ok(())
}

fn pf_composition(p: &Params, run: &mut Run<'_>) -> R<()> {
    let kprime = need(&p.kprime, "kprime")?;
    let pp = need(&p.p, "p")?;
    let m = axes(need(&p.m, "m")?)?;
    let n = blocks(p)?;
    let shape = PfShape::new(kprime, m, pp * n).map_err(perr)?;
    let e = pf_compose_poly(kprime, pp, m, n, 0, 'b').map_err(perr)?;
    run.member("outer of inner - constant", &[e], hypf_relations(&shape, 0, 'b', hypf(p)?).as_slice());
    Ok(())
}

fn pf_bridge(p: &Params, run: &mut Run<'_>) -> R<()> {
    let shape = pf_shape(p)?;
    let alg = HyperAlgebra::cube(mat_size(shape.k * shape.n)?, shape.m);
    let e = pf_det_bridge_poly(&alg, shape.k, 1).map_err(perr)?;
    run.member("Pf(C) - Det Pf(B)", &[e], relations(&alg).as_slice());
    Ok(())
}

fn det_as_pf(p: &Params, run: &mut Run<'_>) -> R<()> {
    let m = axes(need(&p.m, "m")?)?;
    let alg = HyperAlgebra::cube(mat_size(2 * blocks(p)?)?, m);
    let e = det_as_pf_poly(&alg).map_err(perr)?;
    run.member("Det - Pf(C), symplectic b", &[e], relations(&alg).as_slice());
    Ok(())
}

fn det_pf_constant(p: &Params, run: &mut Run<'_>) -> R<()> {
    let shape = pf_shape(p)?;
    let alg = HyperAlgebra::cube(mat_size(shape.k * shape.n)?, shape.m);
    let e = det_pf_constant_poly(&alg, shape.k).map_err(perr)?;
    run.member("Det - constant Pf(minors)", &[e], relations(&alg).as_slice());
    Ok(())
}

fn circ_quantum(p: &Params, run: &mut Run<'_>) -> R<()> {
    let n = size(need(&p.n, "n")?)?;
    let m = axes(need(&p.m, "m")?)?;
    let k = need(&p.k, "k")?;
    let b = QMatrixContext::new(n, 0, 'a');
    let a = HyperAlgebra::new(HyperShape::cube(n, m), 1, 'a');
    let det_a = hyperdet_fixed(&a, 1).map_err(perr)?;
    let det_b = det_q_row(n, 0, 'a');
    let mut elements = Vec::new();
    for transpose in [false, true] {
        let table = circ_product(a.shape(), k, transpose, &|i, j| b.entry(i, j), &|idx| a.entry(idx)).map_err(perr)?;
        let lhs = hyperdet_fixed_of(n, m, 1, &|idx| table[idx].clone()).map_err(perr)?;
        elements.push(&lhs - &(&det_b * &det_a));
    }
    let rels = union(&[&matq_relations(&b), &relations(&a)]);
    run.member("Det(B o A) and Det(A o B)", &elements, &rels);
    Ok(())
}

/// Cayley's first hyperdeterminant with symbolic entries, divided by `n!`.
pub fn cayley_symbolic(n: u8, axes: usize, entry: &dyn Fn(&[u8]) -> NCPoly, sign: SignConvention) -> NCPoly {
    let signed = match sign {
        SignConvention::AllAxes => axes,
        SignConvention::AsDisplayed => axes / 2,
    };
    let perms = permutations(n as usize);
    let mut cache: HashMap<Vec<u8>, NCPoly> = HashMap::new();
    let mut out = NCPoly::zero();
    for tuple in (0..axes).map(|_| perms.iter()).multi_cartesian_product() {
        let inv: usize = tuple[..signed].iter().map(|p| p.inversions()).sum();
        let mut term = NCPoly::constant(RationalFn::integer(if inv.is_multiple_of(2) { 1 } else { -1 }));
        for i in 1..=n as usize {
            let idx: Vec<u8> = tuple.iter().map(|p| p.image(i) as u8).collect();
            let e = cache.entry(idx.clone()).or_insert_with(|| entry(&idx));
            term = &term * e;
            if term.is_zero() {
                break;
            }
        }
        out += &term;
    }
    let fact: i64 = (1..=n as i64).product();
    out.scale(&RationalFn::from_rational(&BigRational::new(1.into(), fact.into())))
}

fn random_table(rng: &mut ChaCha8Rng, n: u8, axes: usize) -> HashMap<Vec<u8>, BigRational> {
    HyperShape::cube(n, axes)
        .indices()
        .into_iter()
        .map(|i| (i, BigRational::from_integer(rng.gen_range(-5i64..=5).into())))
        .collect()
}

fn even_axes(m: usize) -> R<usize> {
    if !m.is_multiple_of(2) {
        return Err(CheckError::Params(format!("Cayley's hyperdeterminant needs an even axis count, got {m}")));
    }
    axes(m)
}

fn commutative_record(run: &mut Run<'_>, label: &str, diff: &NCPoly) -> R<()> {
    let image = commutative_at_one(diff)?;
    let v = if image.is_empty() {
        Verdict::ExactZero
    } else {
        Verdict::ExactNonzero { detail: format!("{} surviving commutative monomials", image.len()) }
    };
    run.record(label, v);
    Ok(())
}

fn instances_record(run: &mut Run<'_>, label: &str, count: usize, failures: Vec<usize>) {
    let v = if failures.is_empty() {
        Verdict::ExactZero
    } else {
        Verdict::ExactNonzero { detail: format!("{} of {count} instances fail, first {}", failures.len(), failures[0]) }
    };
    run.record(&format!("{label} ({count} random integer instances)"), v);
}

fn circ_classical(p: &Params, run: &mut Run<'_>) -> R<()> {
    let n = size(need(&p.n, "n")?)?;
    let m = even_axes(need(&p.m, "m")?)?;
    let k = need(&p.k, "k")?;
    let sign = sign(p)?;
    let b = QMatrixContext::new(n, 0, 'b');
    let a = HyperAlgebra::cube(n, m);
    let det_b = det_q_row(n, 0, 'b');
    let det_a = cayley_symbolic(n, m, &|i| a.entry(i), sign);
    for transpose in [false, true] {
        let table = circ_product(a.shape(), k, transpose, &|i, j| b.entry(i, j), &|idx| a.entry(idx)).map_err(perr)?;
        let lhs = cayley_symbolic(n, m, &|idx| table[idx].clone(), sign);
        let label = if transpose { "Det(A o B) symbolic" } else { "Det(B o A) symbolic" };
        commutative_record(run, label, &(&lhs - &(&det_a * &det_b)))?;
    }

    let count = need(&p.instances, "instances")?;
    let mut rng = ChaCha8Rng::seed_from_u64(run.seed());
    let mut failures = Vec::new();
    for inst in 0..count {
        let av = random_table(&mut rng, n, m);
        let bv = random_table(&mut rng, n, 2);
        let det_a = cayley_classical(n, m, &|i| av[i].clone(), sign).map_err(perr)?;
        let det_b = cayley_classical(n, 2, &|i| bv[i].clone(), SignConvention::AllAxes).map_err(perr)?;
        for transpose in [false, true] {
            let acted = |idx: &[u8]| -> BigRational {
                let mut total = BigRational::zero();
                for j in 1..=n {
                    let mut jdx = idx.to_vec();
                    jdx[k - 1] = j;
                    let bij = if transpose { &bv[&vec![j, idx[k - 1]]] } else { &bv[&vec![idx[k - 1], j]] };
                    total += &av[&jdx] * bij;
                }
                total
            };
            if cayley_classical(n, m, &acted, sign).map_err(perr)? != &det_a * &det_b {
                failures.push(inst);
            }
        }
    }
    instances_record(run, "Det(B o A) = Det(A o B) = Det(A) det(B)", count, failures);
    Ok(())
}

fn product_classical(p: &Params, run: &mut Run<'_>) -> R<()> {
    let n = size(need(&p.n, "n")?)?;
    let (ma, mb) = (even_axes(need(&p.m, "m")?)?, even_axes(need(&p.m2, "m2")?)?);
    let (k, l) = (need(&p.axis, "axis")?, need(&p.axis2, "axis2")?);
    let out_axes = ma + mb - 2;
    if out_axes == 0 || k == 0 || k > ma || l == 0 || l > mb {
        return Err(CheckError::Params("contraction axes out of range".into()));
    }
    let sign = sign(p)?;
    let a = HyperAlgebra::cube(n, ma);
    let b = HyperAlgebra::new(HyperShape::cube(n, mb), 0, 'b');
    let product = |idx: &[u8]| -> NCPoly {
        let (ia, ib) = idx.split_at(ma - 1);
        (1..=n)
            .map(|j| {
                let mut ja = ia.to_vec();
                ja.insert(k - 1, j);
                let mut jb = ib.to_vec();
                jb.insert(l - 1, j);
                &a.entry(&ja) * &b.entry(&jb)
            })
            .sum()
    };
    let lhs = cayley_symbolic(n, out_axes, &product, sign);
    let rhs = &cayley_symbolic(n, ma, &|i| a.entry(i), sign) * &cayley_symbolic(n, mb, &|i| b.entry(i), sign);
    commutative_record(run, "Det(A o B) = Det(A) Det(B) symbolic", &(&lhs - &rhs))?;

    let count = need(&p.instances, "instances")?;
    let mut rng = ChaCha8Rng::seed_from_u64(run.seed());
    let mut failures = Vec::new();
    for inst in 0..count {
        let av = random_table(&mut rng, n, ma);
        let bv = random_table(&mut rng, n, mb);
        let prod = classical_product(n, ma, k, &|i| av[i].clone(), mb, l, &|i| bv[i].clone()).map_err(perr)?;
        let lhs = cayley_classical(n, out_axes, &|i| prod[i].clone(), sign).map_err(perr)?;
        let rhs = cayley_classical(n, ma, &|i| av[i].clone(), sign).map_err(perr)?
            * cayley_classical(n, mb, &|i| bv[i].clone(), sign).map_err(perr)?;
        if lhs != rhs {
            failures.push(inst);
        }
    }
    instances_record(run, "Det(A o B) = Det(A) Det(B)", count, failures);
    Ok(())
}
