//! The reduced Hochschild complex on parallel-pair bases, its cohomology
//! `HH^m(A, Ω^p(A))`, the connecting maps and the colimit approximation of
//! singular Hochschild cohomology.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactla::{self, normalize_sparse, ExactMatrix, Field, Scalar, SparseVec, Subspace};
use crate::quiver::{classify, enumerate_paths, PairBasis, ParallelPair, Path, Quiver};

/// Exact linear combination of pairs `(γ, β)` with `|γ| = m`, `|β| = p`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairVector {
    m: usize,
    p: usize,
    field: Field,
    terms: BTreeMap<ParallelPair, Scalar>,
}

impl PairVector {
    pub fn zero(field: Field, m: usize, p: usize) -> Self {
        PairVector {
            m,
            p,
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn single(field: Field, pair: ParallelPair) -> Self {
        let mut v = PairVector::zero(field, pair.0.len(), pair.1.len());
        v.add_term(pair, field.one());
        v
    }

    pub fn from_terms(
        field: Field,
        m: usize,
        p: usize,
        terms: impl IntoIterator<Item = (ParallelPair, Scalar)>,
    ) -> Self {
        let mut v = PairVector::zero(field, m, p);
        for (pair, c) in terms {
            v.add_term(pair, c);
        }
        v
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.m, self.p)
    }

    pub fn terms(&self) -> &BTreeMap<ParallelPair, Scalar> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, pair: &ParallelPair) -> Scalar {
        self.terms
            .get(pair)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// Adds `c·pair`; panics on a bidegree mismatch.
    pub fn add_term(&mut self, pair: ParallelPair, c: Scalar) {
        assert!(
            pair.0.len() == self.m && pair.1.len() == self.p,
            "usage error: pair of bidegree ({},{}) added to ({},{})",
            pair.0.len(),
            pair.1.len(),
            self.m,
            self.p
        );
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&pair) {
            Some(x) => {
                *x = &*x + &c;
                if x.is_zero() {
                    self.terms.remove(&pair);
                }
            }
            None => {
                self.terms.insert(pair, c);
            }
        }
    }

    pub fn add_scaled(&mut self, c: &Scalar, other: &PairVector) {
        for (pair, x) in &other.terms {
            self.add_term(pair.clone(), c * x);
        }
    }

    pub fn scaled(&self, c: &Scalar) -> PairVector {
        let mut out = PairVector::zero(self.field, self.m, self.p);
        out.add_scaled(c, self);
        out
    }

    pub fn plus(&self, other: &PairVector) -> PairVector {
        let mut out = self.clone();
        out.add_scaled(&self.field.one(), other);
        out
    }

    pub fn minus(&self, other: &PairVector) -> PairVector {
        let mut out = self.clone();
        out.add_scaled(&self.field.from_i64(-1), other);
        out
    }

    pub fn to_sparse(&self, basis: &PairBasis) -> SparseVec {
        normalize_sparse(
            self.terms
                .iter()
                .map(|(pair, c)| {
                    let i = basis.index_of(pair).expect("pair belongs to basis");
                    (i, c.clone())
                })
                .collect(),
        )
    }

    pub fn from_sparse(field: Field, basis: &PairBasis, v: &SparseVec) -> PairVector {
        PairVector::from_terms(
            field,
            basis.m,
            basis.p,
            v.iter().map(|(i, c)| (basis.get(*i).clone(), c.clone())),
        )
    }

    pub fn display(&self, q: &Quiver) -> String {
        format_terms(q, self.terms.iter())
    }
}

/// Renders terms in the element grammar, e.g. `(a|a) - 2 (b|b)`.
pub fn format_terms<'a>(
    q: &Quiver,
    terms: impl Iterator<Item = (&'a ParallelPair, &'a Scalar)>,
) -> String {
    let mut out = String::new();
    for (pair, c) in terms {
        let neg = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !mag.is_one() {
            out.push_str(&format!("{mag} "));
        }
        out.push_str(&q.display_pair(pair));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn sign(e: usize) -> i64 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `D_{m,p}(γ, β) = Σ_a (aγ, aβ) + (−1)^{p+m+1} Σ_a (γa, βa)`.
pub fn d_of_pair(q: &Quiver, pair: &ParallelPair) -> Vec<(ParallelPair, i64)> {
    let (g, b) = pair;
    let s = sign(g.len() + b.len() + 1);
    let mut out = Vec::new();
    for a in 0..q.num_arrows() {
        if let (Some(x), Some(y)) = (q.prepend(a, g), q.prepend(a, b)) {
            out.push(((x, y), 1));
        }
    }
    for a in 0..q.num_arrows() {
        if let (Some(x), Some(y)) = (q.append(g, a), q.append(b, a)) {
            out.push(((x, y), s));
        }
    }
    out
}

/// The append map `(γ, β) ↦ −Σ_a (γa, βa)` underlying θ.
pub fn e_of_pair(q: &Quiver, pair: &ParallelPair) -> Vec<(ParallelPair, i64)> {
    let (g, b) = pair;
    (0..q.num_arrows())
        .filter_map(|a| Some(((q.append(g, a)?, q.append(b, a)?), -1)))
        .collect()
}

fn apply_pairwise(
    v: &PairVector,
    m: usize,
    p: usize,
    f: impl Fn(&ParallelPair) -> Vec<(ParallelPair, i64)>,
) -> PairVector {
    let mut out = PairVector::zero(v.field, m, p);
    for (pair, c) in &v.terms {
        for (img, s) in f(pair) {
            out.add_term(img, c.scale_i64(s));
        }
    }
    out
}

/// `D` applied to a chain; bidegree `(m, p) → (m+1, p+1)`.
pub fn apply_d(q: &Quiver, v: &PairVector) -> PairVector {
    apply_pairwise(v, v.m + 1, v.p + 1, |pair| d_of_pair(q, pair))
}

/// The append map applied to a chain; bidegree `(m, p) → (m+1, p+1)`.
pub fn apply_e(q: &Quiver, v: &PairVector) -> PairVector {
    apply_pairwise(v, v.m + 1, v.p + 1, |pair| e_of_pair(q, pair))
}

fn d_columns(
    q: &Quiver,
    field: Field,
    domain: &PairBasis,
    mut row: impl FnMut(ParallelPair) -> usize,
) -> Vec<SparseVec> {
    domain
        .pairs()
        .iter()
        .map(|pair| {
            normalize_sparse(
                d_of_pair(q, pair)
                    .into_iter()
                    .map(|(img, s)| (row(img), field.from_i64(s)))
                    .collect(),
            )
        })
        .collect()
}

/// `D_{m,p}: k(Q_m//Q_p) → k(Q_{m+1}//Q_{p+1})` in canonical bases.
pub fn build_d(q: &Quiver, m: usize, p: usize, field: Field) -> ExactMatrix {
    let domain = PairBasis::new(q, m, p);
    let codomain = PairBasis::new(q, m + 1, p + 1);
    let cols = d_columns(q, field, &domain, |img| {
        codomain.index_of(&img).expect("image pair in codomain")
    });
    ExactMatrix::from_columns(field, codomain.len(), cols)
        .expect("well-formed")
        .with_labels(format!("Q{}//Q{}", m + 1, p + 1), format!("Q{m}//Q{p}"))
}

/// Kernel of `D_{m,p}` without enumerating its codomain.
fn kernel_of_d(q: &Quiver, field: Field, domain: &PairBasis) -> Subspace {
    let mut rows: HashMap<ParallelPair, usize> = HashMap::new();
    let cols = d_columns(q, field, domain, |img| {
        let n = rows.len();
        *rows.entry(img).or_insert(n)
    });
    let m = ExactMatrix::from_columns(field, rows.len(), cols).expect("well-formed");
    exactla::kernel_of(&m)
}

/// A class: a quotient-block part in `k(Q_m//Q_{p+1})` plus a kernel-block part in `k(Q_m//Q_p)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CohomologyClass {
    pub quotient: PairVector,
    pub kernel: PairVector,
}

impl CohomologyClass {
    pub fn is_zero(&self) -> bool {
        self.quotient.is_zero() && self.kernel.is_zero()
    }

    pub fn display(&self, q: &Quiver) -> String {
        match (self.quotient.is_zero(), self.kernel.is_zero()) {
            (_, true) => self.quotient.display(q),
            (true, false) => self.kernel.display(q),
            (false, false) => format!("{} + {}", self.quotient.display(q), self.kernel.display(q)),
        }
    }
}

/// `HH^m(A, Ω^p(A)) ≅ k(Q_m//Q_{p+1})/Im D_{m−1,p} ⊕ Ker D_{m,p}`.
#[derive(Clone, Debug)]
pub struct CohomologyGroup {
    pub m: usize,
    pub p: usize,
    field: Field,
    quotient_basis: PairBasis,
    image: Subspace,
    kernel_basis: PairBasis,
    kernel: Subspace,
    free_index: HashMap<usize, usize>,
}

impl CohomologyGroup {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.quotient_dim() + self.kernel_dim()
    }

    pub fn quotient_dim(&self) -> usize {
        self.quotient_basis.len() - self.image.dim()
    }

    pub fn kernel_dim(&self) -> usize {
        self.kernel.dim()
    }

    /// `rank D_{m−1,p}`.
    pub fn image_rank(&self) -> usize {
        self.image.dim()
    }

    pub fn quotient_basis(&self) -> &PairBasis {
        &self.quotient_basis
    }

    pub fn kernel_basis(&self) -> &PairBasis {
        &self.kernel_basis
    }

    pub fn image(&self) -> &Subspace {
        &self.image
    }

    pub fn kernel(&self) -> &Subspace {
        &self.kernel
    }

    /// Canonical quotient-block representatives: the non-pivot basis pairs.
    pub fn quotient_reps(&self) -> Vec<PairVector> {
        let mut free: Vec<(usize, usize)> = self.free_index.iter().map(|(a, b)| (*a, *b)).collect();
        free.sort_by_key(|e| e.1);
        free.into_iter()
            .map(|(i, _)| PairVector::single(self.field, self.quotient_basis.get(i).clone()))
            .collect()
    }

    pub fn kernel_vectors(&self) -> Vec<PairVector> {
        self.kernel
            .rows()
            .iter()
            .map(|r| PairVector::from_sparse(self.field, &self.kernel_basis, r))
            .collect()
    }

    /// Basis classes: quotient block first, then kernel block.
    pub fn basis(&self) -> Vec<CohomologyClass> {
        let zq = PairVector::zero(self.field, self.m, self.p + 1);
        let zk = PairVector::zero(self.field, self.m, self.p);
        let mut out: Vec<CohomologyClass> = self
            .quotient_reps()
            .into_iter()
            .map(|v| CohomologyClass {
                quotient: v,
                kernel: zk.clone(),
            })
            .collect();
        out.extend(self.kernel_vectors().into_iter().map(|v| CohomologyClass {
            quotient: zq.clone(),
            kernel: v,
        }));
        out
    }

    fn check_quotient(&self, v: &PairVector) -> Result<()> {
        if v.bidegree() != (self.m, self.p + 1) {
            return Err(Error::usage(format!(
                "bidegree ({},{}) is not the quotient block of HH^{}(Ω^{})",
                v.m, v.p, self.m, self.p
            )));
        }
        Ok(())
    }

    /// Canonical representative of `v + Im D_{m−1,p}`.
    pub fn reduce_quotient(&self, v: &PairVector) -> Result<PairVector> {
        self.check_quotient(v)?;
        let s = self.image.reduce(&v.to_sparse(&self.quotient_basis));
        Ok(PairVector::from_sparse(self.field, &self.quotient_basis, &s))
    }

    pub fn is_coboundary(&self, v: &PairVector) -> Result<bool> {
        Ok(self.reduce_quotient(v)?.is_zero())
    }

    pub fn is_cocycle(&self, v: &PairVector) -> Result<bool> {
        if v.bidegree() != (self.m, self.p) {
            return Err(Error::usage("kernel-block bidegree mismatch"));
        }
        Ok(self.kernel.contains(&v.to_sparse(&self.kernel_basis)))
    }

    /// Reduces a pair of chains to a class; the kernel part must be a cocycle.
    pub fn class_of(&self, quotient: &PairVector, kernel: &PairVector) -> Result<CohomologyClass> {
        if !self.is_cocycle(kernel)? {
            return Err(Error::NotCocycle {
                m: self.m,
                p: self.p,
            });
        }
        Ok(CohomologyClass {
            quotient: self.reduce_quotient(quotient)?,
            kernel: kernel.clone(),
        })
    }

    /// Coordinates of a reduced class in the basis of [`CohomologyGroup::basis`].
    pub fn coordinates(&self, class: &CohomologyClass) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.dim()];
        for (i, c) in class.quotient.to_sparse(&self.quotient_basis) {
            let j = *self
                .free_index
                .get(&i)
                .expect("quotient part is reduced");
            out[j] = c;
        }
        let off = self.quotient_dim();
        for (j, c) in self
            .kernel
            .coordinates(&class.kernel.to_sparse(&self.kernel_basis))
            .into_iter()
            .enumerate()
        {
            out[off + j] = c;
        }
        out
    }
}

/// Cohomology at `(m, p)`; `D_{−1,p}` is the zero map.
pub fn cohomology(q: &Quiver, m: usize, p: usize, field: Field) -> CohomologyGroup {
    let quotient_basis = PairBasis::new(q, m, p + 1);
    let image = if m == 0 {
        Subspace::zero(field, quotient_basis.len())
    } else {
        let dom = PairBasis::new(q, m - 1, p);
        let cols = d_columns(q, field, &dom, |img| {
            quotient_basis.index_of(&img).expect("image pair in codomain")
        });
        exactla::rref(field, &cols, quotient_basis.len())
    };
    let kernel_basis = PairBasis::new(q, m, p);
    let kernel = kernel_of_d(q, field, &kernel_basis);
    let mut free_index = HashMap::new();
    for i in 0..quotient_basis.len() {
        if !image.is_pivot(i) {
            let n = free_index.len();
            free_index.insert(i, n);
        }
    }
    CohomologyGroup {
        m,
        p,
        field,
        quotient_basis,
        image,
        kernel_basis,
        kernel,
        free_index,
    }
}

/// Refuses cells whose cochain spaces exceed `guard` pairs.
pub fn check_guard(q: &Quiver, m: usize, p: usize, guard: usize) -> Result<()> {
    let mut sizes = vec![q.count_pairs(m, p), q.count_pairs(m, p + 1)];
    if m > 0 {
        sizes.push(q.count_pairs(m - 1, p));
    }
    let size = sizes.into_iter().max().unwrap();
    if size > guard as u128 {
        return Err(Error::Resource { m, p, size, guard });
    }
    Ok(())
}

pub fn cohomology_guarded(q: &Quiver, m: usize, p: usize, field: Field, guard: usize) -> Result<CohomologyGroup> {
    check_guard(q, m, p, guard)?;
    Ok(cohomology(q, m, p, field))
}

/// θ on a class of `src`, reduced in `dst` (which must sit at `(m+1, p+1)`).
pub fn apply_theta(
    q: &Quiver,
    src: &CohomologyGroup,
    dst: &CohomologyGroup,
    class: &CohomologyClass,
) -> Result<CohomologyClass> {
    if (dst.m, dst.p) != (src.m + 1, src.p + 1) {
        return Err(Error::usage("θ target must be at (m+1, p+1)"));
    }
    if class.quotient.bidegree() != (src.m, src.p + 1) || class.kernel.bidegree() != (src.m, src.p) {
        return Err(Error::usage("class bidegree mismatch"));
    }
    Ok(CohomologyClass {
        quotient: dst.reduce_quotient(&apply_e(q, &class.quotient))?,
        kernel: apply_e(q, &class.kernel),
    })
}

/// Matrix of θ between the coordinate bases of two groups.
pub fn theta_matrix(q: &Quiver, src: &CohomologyGroup, dst: &CohomologyGroup) -> Result<ExactMatrix> {
    let mut cols = Vec::with_capacity(src.dim());
    for b in src.basis() {
        let img = apply_theta(q, src, dst, &b)?;
        cols.push(
            dst.coordinates(&img)
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        );
    }
    ExactMatrix::from_columns(src.field, dst.dim(), cols)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stage {
    pub p: usize,
    pub dim: usize,
    pub window_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilizationReport {
    pub degree: i64,
    pub stages: Vec<Stage>,
    pub stabilized: bool,
    pub value: Option<usize>,
    pub window: usize,
    pub p_max: usize,
}

impl StabilizationReport {
    /// First window start from which all composite ranks agree.
    pub fn onset(&self) -> Option<usize> {
        if !self.stabilized {
            return None;
        }
        let last = self.stages.last()?.window_rank;
        let mut p = self.stages.last()?.p;
        for s in self.stages.iter().rev() {
            if s.window_rank != last {
                break;
            }
            p = s.p;
        }
        Some(p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SgConfig {
    pub field: Field,
    pub window: usize,
    pub p_max: usize,
    pub guard: usize,
}

impl Default for SgConfig {
    fn default() -> Self {
        SgConfig {
            field: Field::Rational,
            window: 3,
            p_max: 16,
            guard: 200_000,
        }
    }
}

pub fn first_stage(n: i64) -> usize {
    std::cmp::max(1, 1 - n) as usize
}

/// Windowed-rank approximation of `dim HH_sg^n` as the colimit of `HH^{n+p}(Ω^p)`.
pub fn sg_dimension(q: &Quiver, n: i64, cfg: &SgConfig) -> Result<StabilizationReport> {
    let start = first_stage(n);
    let w = cfg.window;
    if w == 0 {
        return Err(Error::usage("window must be at least 1"));
    }
    if cfg.p_max < w + start {
        return Err(Error::usage(format!(
            "p_max {} must be at least window + first stage = {}",
            cfg.p_max,
            w + start
        )));
    }
    let mut groups = Vec::new();
    for p in start..=cfg.p_max {
        let m = (n + p as i64) as usize;
        groups.push(cohomology_guarded(q, m, p, cfg.field, cfg.guard)?);
    }
    let mut thetas = Vec::new();
    for i in 0..groups.len() - 1 {
        thetas.push(theta_matrix(q, &groups[i], &groups[i + 1])?);
    }
    let mut stages = Vec::new();
    for i in 0..=(groups.len() - 1 - w) {
        let mut comp = thetas[i].clone();
        for t in &thetas[i + 1..i + w] {
            comp = t.compose(&comp);
        }
        stages.push(Stage {
            p: start + i,
            dim: groups[i].dim(),
            window_rank: comp.rank(),
        });
    }
    let stabilized = stages.len() >= w && {
        let tail = &stages[stages.len() - w..];
        tail.iter().all(|s| s.window_rank == tail[0].window_rank)
    };
    let value = stabilized.then(|| stages.last().unwrap().window_rank);
    Ok(StabilizationReport {
        degree: n,
        stages,
        stabilized,
        value,
        window: w,
        p_max: cfg.p_max,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Checks `Ker D_{m,m} = k·Σ(γ,γ)`, `Ker D_{m,p} = 0` for `m ≠ p` and injectivity of θ.
pub fn structure_checks(q: &Quiver, bound: usize, field: Field) -> Result<Vec<Check>> {
    let c = classify(q);
    if !c.connected {
        return Err(Error::hypothesis("quiver is not connected"));
    }
    if c.has_source_or_sink {
        return Err(Error::hypothesis("quiver has a source or a sink"));
    }
    if c.crown_order.is_some() {
        return Err(Error::hypothesis("quiver is a crown"));
    }
    let mut checks = kernel_checks(q, bound, field);
    checks.extend(injectivity_checks(q, bound, field)?);
    Ok(checks)
}

pub fn diagonal_cycle(q: &Quiver, m: usize, field: Field) -> PairVector {
    PairVector::from_terms(
        field,
        m,
        m,
        enumerate_paths(q, m)
            .into_iter()
            .map(|g: Path| ((g.clone(), g), field.one())),
    )
}

pub fn kernel_checks(q: &Quiver, bound: usize, field: Field) -> Vec<Check> {
    let mut out = Vec::new();
    for m in 1..=bound {
        for p in 1..=bound {
            let basis = PairBasis::new(q, m, p);
            let ker = kernel_of_d(q, field, &basis);
            let (passed, detail) = if m == p {
                let diag = diagonal_cycle(q, m, field).to_sparse(&basis);
                let ok = ker.dim() == 1 && ker.contains(&diag);
                (ok, format!("dim Ker D = {}", ker.dim()))
            } else {
                (ker.dim() == 0, format!("dim Ker D = {}", ker.dim()))
            };
            let detail = if passed || ker.dim() == 0 {
                detail
            } else {
                let v = PairVector::from_sparse(field, &basis, &ker.rows()[0]);
                format!("{detail}; kernel vector {}", v.display(q))
            };
            out.push(Check {
                name: format!("kernel D({m},{p})"),
                passed,
                detail,
            });
        }
    }
    out
}

pub fn injectivity_checks(q: &Quiver, bound: usize, field: Field) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for m in 1..=bound {
        for p in 1..=bound {
            let src = cohomology(q, m, p, field);
            let dst = cohomology(q, m + 1, p + 1, field);
            let t = theta_matrix(q, &src, &dst)?;
            let r = t.rank();
            out.push(Check {
                name: format!("theta injective H({m},{p})"),
                passed: r == src.dim(),
                detail: format!("rank {r} of dim {}", src.dim()),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pow(q: &Quiver, a: usize, k: usize) -> Path {
        if k == 0 {
            q.trivial_path(q.arrow(a).source)
        } else {
            q.path(&vec![a; k]).unwrap()
        }
    }

    #[test]
    fn one_loop_d0() {
        let q = Quiver::one_loop();
        for m in 1..6 {
            let d = build_d(&q, 0, m + 1, Field::Rational);
            let expect = if m % 2 == 1 { 0 } else { 2 };
            assert_eq!(d.get(0, 0), Field::Rational.from_i64(expect));
        }
    }

    #[test]
    fn two_loops_d11() {
        let q = Quiver::two_loops();
        let d = build_d(&q, 1, 1, Field::Rational);
        assert_eq!((d.nrows(), d.ncols()), (16, 4));
        let (k, i) = exactla::kernel_image(&d).unwrap();
        assert_eq!((k.dim(), i.dim()), (1, 3));
    }

    #[test]
    fn one_loop_cohomology_blocks() {
        let q = Quiver::one_loop();
        for p in [2usize, 4, 6] {
            let h = cohomology(&q, 1, p, Field::Rational);
            assert_eq!(h.dim(), 1);
            // p + 1 odd: class in the quotient block
            assert_eq!(h.quotient_dim(), 1);
            assert_eq!(h.quotient_reps()[0].terms().keys().next().unwrap().1, pow(&q, 0, p + 1));
        }
        for p in [1usize, 3, 5] {
            let h = cohomology(&q, 1, p, Field::Rational);
            assert_eq!((h.dim(), h.kernel_dim()), (1, 1));
        }
    }

    #[test]
    fn two_loops_hh1() {
        let q = Quiver::two_loops();
        assert_eq!(cohomology(&q, 1, 0, Field::Rational).dim(), 4);
        assert_eq!(cohomology(&Quiver::linear(2), 2, 1, Field::Rational).dim(), 0);
    }

    #[test]
    fn theta_on_one_loop() {
        let q = Quiver::one_loop();
        let f = Field::Rational;
        let v = PairVector::single(f, (pow(&q, 0, 1), pow(&q, 0, 2)));
        let e = apply_e(&q, &v);
        let expect = PairVector::from_terms(f, 2, 3, [((pow(&q, 0, 2), pow(&q, 0, 3)), f.from_i64(-1))]);
        assert_eq!(e, expect);
    }

    #[test]
    fn coset_reduce_one_loop() {
        let q = Quiver::one_loop();
        let h = cohomology(&q, 1, 1, Field::Rational);
        // Im D_{0,1} is all of k(Q_1//Q_2)
        assert_eq!(h.image_rank(), 1);
        let v = PairVector::single(Field::Rational, (pow(&q, 0, 1), pow(&q, 0, 2)));
        assert!(h.reduce_quotient(&v).unwrap().is_zero());
    }

    #[test]
    fn guard_trips() {
        let q = Quiver::two_loops();
        let e = cohomology_guarded(&q, 8, 8, Field::Rational, 1000).unwrap_err();
        assert!(matches!(e, Error::Resource { m: 8, p: 8, .. }));
    }

    #[test]
    fn one_loop_sg() {
        let q = Quiver::one_loop();
        for n in -3..=3 {
            let r = sg_dimension(&q, n, &SgConfig { p_max: 10, ..SgConfig::default() }).unwrap();
            assert!(r.stabilized, "{n}");
            assert_eq!(r.value, Some(1));
        }
    }
}
