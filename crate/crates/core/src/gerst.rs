//! Gerstenhaber bracket on path-pair elements, diamond substitution, projection
//! to cohomology, the Witt/BV model algebras and the one-loop closed forms.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::complex::{cohomology, format_terms, CohomologyClass, CohomologyGroup, PairVector};
use crate::error::{Error, Result};
use crate::exactla::{Field, Scalar};
use crate::quiver::{enumerate_paths, ParallelPair, Path, Quiver};

/// An element of `P_A(m, n)`: low part in `k(Q_m//Q_{n−1})`, high part in `k(Q_m//Q_n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PropElement {
    pub m: usize,
    pub n: usize,
    pub low: PairVector,
    pub high: PairVector,
}

impl PropElement {
    pub fn zero(field: Field, m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::usage(format!("arity ({m},{n}) must be positive")));
        }
        Ok(PropElement {
            m,
            n,
            low: PairVector::zero(field, m, n - 1),
            high: PairVector::zero(field, m, n),
        })
    }

    /// A high-only element at arity `(m, |β|)`.
    pub fn high(v: PairVector) -> Result<Self> {
        let mut e = PropElement::zero(v.field(), v.m(), v.p())?;
        e.high = v;
        Ok(e)
    }

    /// A low-only element at arity `(m, |δ| + 1)`.
    pub fn low(v: PairVector) -> Result<Self> {
        let mut e = PropElement::zero(v.field(), v.m(), v.p() + 1)?;
        e.low = v;
        Ok(e)
    }

    pub fn field(&self) -> Field {
        self.high.field()
    }

    /// The `Ω` index `p` with `f ∈ C^m(A, Ω^p(A))`.
    pub fn omega(&self) -> usize {
        self.n - 1
    }

    pub fn is_zero(&self) -> bool {
        self.low.is_zero() && self.high.is_zero()
    }

    pub fn plus(&self, other: &PropElement) -> Result<PropElement> {
        if (self.m, self.n) != (other.m, other.n) {
            return Err(Error::usage("arity mismatch in sum"));
        }
        Ok(PropElement {
            m: self.m,
            n: self.n,
            low: self.low.plus(&other.low),
            high: self.high.plus(&other.high),
        })
    }

    pub fn scaled(&self, c: &Scalar) -> PropElement {
        PropElement {
            m: self.m,
            n: self.n,
            low: self.low.scaled(c),
            high: self.high.scaled(c),
        }
    }

    fn quiver_ids(&self) -> impl Iterator<Item = u32> + '_ {
        self.high
            .terms()
            .keys()
            .chain(self.low.terms().keys())
            .map(|(g, _)| g.quiver_id())
    }

    /// High terms first, then low terms, in the element grammar.
    pub fn display(&self, q: &Quiver) -> String {
        format_terms(q, self.high.terms().iter().chain(self.low.terms().iter()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Sym {
    E(usize),
    A(usize),
}

type Word = Vec<Sym>;

fn arrows_word(p: &Path) -> Word {
    p.arrows().iter().map(|&a| Sym::A(a)).collect()
}

/// Input arrow sequence ↦ list of (output word, coefficient).
fn word_map(e: &PropElement) -> HashMap<Vec<usize>, Vec<(Word, Scalar)>> {
    let mut out: HashMap<Vec<usize>, Vec<(Word, Scalar)>> = HashMap::new();
    for ((a, b), c) in e.high.terms() {
        out.entry(a.arrows().to_vec())
            .or_default()
            .push((arrows_word(b), c.clone()));
    }
    for ((a, d), c) in e.low.terms() {
        let mut w = vec![Sym::E(d.target())];
        w.extend(arrows_word(d));
        out.entry(a.arrows().to_vec()).or_default().push((w, c.clone()));
    }
    out
}

fn all_arrows(w: &[Sym]) -> Option<Vec<usize>> {
    w.iter()
        .map(|s| match s {
            Sym::A(a) => Some(*a),
            Sym::E(_) => None,
        })
        .collect()
}

fn sgn(e: usize) -> i64 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

type Accum = HashMap<(Vec<usize>, Word), Scalar>;

fn accumulate(acc: &mut Accum, key: (Vec<usize>, Word), c: Scalar) {
    match acc.get_mut(&key) {
        Some(x) => *x = &*x + &c,
        None => {
            acc.insert(key, c);
        }
    }
}

/// `f ⋆ g` at PROP arities: `m` input and `q − 1` output substitutions.
fn star(q: &Quiver, f: &PropElement, g: &PropElement, acc: &mut Accum, scale: &Scalar) {
    let (m, p) = (f.m, f.n);
    let (n_in, qq) = (g.m, g.n);
    let fm = word_map(f);
    let gm = word_map(g);
    for alpha in enumerate_paths(q, m + n_in - 1) {
        let a = alpha.arrows();
        for i in 1..=m {
            let s = scale.scale_i64(sgn((i - 1) * (qq + n_in)));
            let Some(terms) = gm.get(&a[i - 1..i - 1 + n_in]) else {
                continue;
            };
            for (w, c) in terms {
                let Some(w) = all_arrows(w) else { continue };
                let mut inp = a[..i - 1].to_vec();
                inp.extend(&w);
                inp.extend(&a[i - 1 + n_in..]);
                let Some(fterms) = fm.get(&inp[..m]) else {
                    continue;
                };
                for (w2, c2) in fterms {
                    let mut word = w2.clone();
                    word.extend(inp[m..].iter().map(|&x| Sym::A(x)));
                    accumulate(acc, (a.to_vec(), word), &(&s * c) * c2);
                }
            }
        }
        for i in 1..qq {
            let s = scale.scale_i64(sgn(i * (p + m)));
            let Some(terms) = gm.get(&a[..n_in]) else {
                continue;
            };
            for (w, c) in terms {
                let mut full = w.clone();
                full.extend(a[n_in..].iter().map(|&x| Sym::A(x)));
                let Some(key) = all_arrows(&full[i..i + m]) else {
                    continue;
                };
                let Some(fterms) = fm.get(&key) else { continue };
                for (w2, c2) in fterms {
                    if matches!(w2[0], Sym::E(_)) {
                        continue;
                    }
                    let mut word = full[..i].to_vec();
                    word.extend(w2.iter().cloned());
                    word.extend(full[i + m..].iter().cloned());
                    accumulate(acc, (a.to_vec(), word), &(&s * c) * c2);
                }
            }
        }
    }
}

fn check_compatible(q: &Quiver, f: &PropElement, g: &PropElement) -> Result<()> {
    if f.field() != g.field() {
        return Err(Error::usage("elements over different fields"));
    }
    if f.quiver_ids().chain(g.quiver_ids()).any(|id| id != q.id()) {
        return Err(Error::usage("elements over different quivers"));
    }
    Ok(())
}

/// `[f, g] = f⋆g − (−1)^{(m−p)(n−q)} g⋆f` at arity `(m+n−1, p+q−1)`.
pub fn bracket(q: &Quiver, f: &PropElement, g: &PropElement) -> Result<PropElement> {
    check_compatible(q, f, g)?;
    let field = f.field();
    let (m, p, n, qq) = (f.m, f.n, g.m, g.n);
    let mut acc = Accum::new();
    star(q, f, g, &mut acc, &field.one());
    let e = sgn(((m + p) % 2) * ((n + qq) % 2));
    star(q, g, f, &mut acc, &field.from_i64(-e));
    let mut out = PropElement::zero(field, m + n - 1, p + qq - 1)?;
    let mut keys: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    keys.sort_by(|x, y| x.0.cmp(&y.0));
    for ((a, w), c) in keys {
        let alpha = q.path(&a).expect("input path");
        match w[0] {
            Sym::E(v) => {
                let rest = all_arrows(&w[1..]).expect("single marker");
                let d = q.path_or_trivial(&rest, v).expect("output path");
                out.low.add_term((alpha, d), c);
            }
            Sym::A(_) => {
                let b = q.path(&all_arrows(&w).expect("arrow word")).expect("output path");
                out.high.add_term((alpha, b), c);
            }
        }
    }
    Ok(out)
}

/// `α ⋄_i β`: replace the `i`-th arrow of `α` by `β` when they are parallel.
pub fn diamond(q: &Quiver, alpha: &Path, i: usize, beta: &Path) -> Result<Option<Path>> {
    if i == 0 || i > alpha.len() {
        return Err(Error::usage(format!(
            "diamond index {i} out of range 1..={}",
            alpha.len()
        )));
    }
    let ai = q.arrow(alpha.arrows()[i - 1]);
    if ai.source != beta.source() || ai.target != beta.target() {
        return Ok(None);
    }
    let mut arrows = alpha.arrows()[..i - 1].to_vec();
    arrows.extend(beta.arrows());
    arrows.extend(&alpha.arrows()[i..]);
    Ok(q.path_or_trivial(&arrows, ai.source))
}

/// Degree-one closed form for `x ∈ Q_1//Q_{p+1}`, `y ∈ Q_1//Q_{q+1}`.
pub fn bracket_deg1_closed_form(
    q: &Quiver,
    field: Field,
    x: &ParallelPair,
    y: &ParallelPair,
) -> Result<PairVector> {
    let ((xa, gamma), (ya, beta)) = (x, y);
    if xa.len() != 1 || ya.len() != 1 || gamma.is_empty() || beta.is_empty() {
        return Err(Error::usage(
            "closed form needs first paths of length 1 and nontrivial second paths",
        ));
    }
    let (p, qq) = (gamma.len() - 1, beta.len() - 1);
    let mut out = PairVector::zero(field, 1, p + qq + 1);
    for i in 1..=qq + 1 {
        if beta.arrows()[i - 1] == xa.arrows()[0] {
            if let Some(r) = diamond(q, beta, i, gamma)? {
                out.add_term((ya.clone(), r), field.from_i64(sgn((i - 1) * p)));
            }
        }
    }
    let outer = -sgn(p * qq);
    for i in 1..=p + 1 {
        if gamma.arrows()[i - 1] == ya.arrows()[0] {
            if let Some(r) = diamond(q, gamma, i, beta)? {
                out.add_term((xa.clone(), r), field.from_i64(outer * sgn((i - 1) * qq)));
            }
        }
    }
    Ok(out)
}

/// Class of `f ∈ P_A(m, p+1)` in `HH^m(A, Ω^p(A))`.
pub fn project(q: &Quiver, f: &PropElement) -> Result<CohomologyClass> {
    let group = cohomology(q, f.m, f.omega(), f.field());
    project_in(&group, f)
}

pub fn project_in(group: &CohomologyGroup, f: &PropElement) -> Result<CohomologyClass> {
    if (group.m, group.p) != (f.m, f.omega()) {
        return Err(Error::usage("projection target bidegree mismatch"));
    }
    group.class_of(&f.high, &f.low)
}

/// Chain-level cup of quotient-block cochains.
///
/// Values in `Ω^p` and `Ω^q` are joined over `A`; two arrows meeting at the
/// junction multiply to zero in the radical square zero algebra.
pub fn chain_cup_high(q: &Quiver, x: &PairVector, y: &PairVector) -> Result<PairVector> {
    if x.field() != y.field() {
        return Err(Error::usage("elements over different fields"));
    }
    if x.p() == 0 || y.p() == 0 {
        return Err(Error::usage("quotient-block cochains have nontrivial values"));
    }
    let mut out = PairVector::zero(x.field(), x.m() + y.m(), x.p() + y.p() - 1);
    for ((g1, b1), c1) in x.terms() {
        for ((g2, b2), c2) in y.terms() {
            let Some(input) = crate::quiver::compose(g1, g2)? else {
                continue;
            };
            let last = *b1.arrows().last().unwrap();
            let first = b2.arrows()[0];
            let Some(mid) = junction(q, Sym::A(last), Sym::A(first)) else {
                continue;
            };
            let mut arrows = b1.arrows()[..b1.len() - 1].to_vec();
            if let Sym::A(a) = mid {
                arrows.push(a);
            }
            arrows.extend(&b2.arrows()[1..]);
            if let Some(b) = q.path(&arrows) {
                out.add_term((input, b), c1 * c2);
            }
        }
    }
    Ok(out)
}

/// Product of two outer tensor factors in `A = kQ/⟨Q_2⟩`.
fn junction(q: &Quiver, l: Sym, r: Sym) -> Option<Sym> {
    match (l, r) {
        (Sym::A(_), Sym::A(_)) => None,
        (Sym::E(v), Sym::E(w)) => (v == w).then_some(Sym::E(v)),
        (Sym::E(v), Sym::A(a)) => (q.arrow(a).target == v).then_some(Sym::A(a)),
        (Sym::A(a), Sym::E(v)) => (q.arrow(a).source == v).then_some(Sym::A(a)),
    }
}

// ---------------------------------------------------------------------------
// Witt / BV model algebras

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MwModel {
    /// `M × W`: `M_k` in degree `2k`, `L_k` in degree `2k+1`.
    Full,
    /// `M^even × W^even`: `M_{2k}` in degree `2k`, `L_{2k}` in degree `2k+1`.
    Even,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MwBasis {
    M(i64),
    L(i64),
}

impl fmt::Display for MwBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MwBasis::M(i) => write!(f, "M_{i}"),
            MwBasis::L(i) => write!(f, "L_{i}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MwElement {
    pub model: MwModel,
    terms: BTreeMap<MwBasis, i64>,
}

impl MwElement {
    pub fn zero(model: MwModel) -> Self {
        MwElement {
            model,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(model: MwModel, b: MwBasis) -> Result<Self> {
        let idx = match b {
            MwBasis::M(i) | MwBasis::L(i) => i,
        };
        if model == MwModel::Even && idx % 2 != 0 {
            return Err(Error::usage(format!("{b} is not in the even model")));
        }
        let mut e = MwElement::zero(model);
        e.terms.insert(b, 1);
        Ok(e)
    }

    pub fn m(model: MwModel, i: i64) -> Result<Self> {
        MwElement::basis(model, MwBasis::M(i))
    }

    pub fn l(model: MwModel, i: i64) -> Result<Self> {
        MwElement::basis(model, MwBasis::L(i))
    }

    pub fn terms(&self) -> &BTreeMap<MwBasis, i64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add(&mut self, b: MwBasis, c: i64) {
        let e = self.terms.entry(b).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&b);
        }
    }

    pub fn plus(&self, o: &MwElement) -> MwElement {
        let mut r = self.clone();
        for (b, c) in &o.terms {
            r.add(*b, *c);
        }
        r
    }

    pub fn scaled(&self, k: i64) -> MwElement {
        let mut r = MwElement::zero(self.model);
        for (b, c) in &self.terms {
            r.add(*b, c * k);
        }
        r
    }

    pub fn degree_of(b: MwBasis) -> i64 {
        match b {
            MwBasis::M(i) => 2 * i,
            MwBasis::L(i) => 2 * i + 1,
        }
    }

    /// `None` for the zero element; error when not homogeneous.
    pub fn degree(&self) -> Result<Option<i64>> {
        let mut degs = self.terms.keys().map(|b| Self::degree_of(*b));
        let Some(d) = degs.next() else { return Ok(None) };
        if degs.any(|e| e != d) {
            return Err(Error::usage("non-homogeneous model element"));
        }
        Ok(Some(d))
    }
}

impl fmt::Display for MwElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(b, c)| format!("{c} {b}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn mw_cup_basis(x: MwBasis, y: MwBasis) -> Option<MwBasis> {
    use MwBasis::*;
    match (x, y) {
        (M(a), M(b)) => Some(M(a + b)),
        (M(a), L(b)) | (L(b), M(a)) => Some(L(a + b)),
        (L(_), L(_)) => None,
    }
}

fn mw_bracket_basis(x: MwBasis, y: MwBasis) -> Option<(i64, MwBasis)> {
    use MwBasis::*;
    match (x, y) {
        (L(a), L(b)) => Some((a - b, L(a + b))),
        (L(a), M(b)) => Some((-b, M(a + b))),
        (M(b), L(a)) => Some((b, M(a + b))),
        (M(_), M(_)) => None,
    }
}

fn bilinear(
    x: &MwElement,
    y: &MwElement,
    op: impl Fn(MwBasis, MwBasis) -> Option<(i64, MwBasis)>,
) -> MwElement {
    let mut r = MwElement::zero(x.model);
    for (bx, cx) in &x.terms {
        for (by, cy) in &y.terms {
            if let Some((k, b)) = op(*bx, *by) {
                r.add(b, k * cx * cy);
            }
        }
    }
    r
}

pub fn mw_cup(x: &MwElement, y: &MwElement) -> MwElement {
    bilinear(x, y, |a, b| mw_cup_basis(a, b).map(|r| (1, r)))
}

pub fn mw_bracket(x: &MwElement, y: &MwElement) -> MwElement {
    bilinear(x, y, mw_bracket_basis)
}

/// `Δ(M_k) = 0`, `Δ(L_k) = −k M_k`.
pub fn mw_delta(x: &MwElement) -> MwElement {
    let mut r = MwElement::zero(x.model);
    for (b, c) in &x.terms {
        if let MwBasis::L(k) = b {
            r.add(MwBasis::M(*k), -k * c);
        }
    }
    r
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MwOps {
    pub cup: MwElement,
    pub bracket: MwElement,
    pub delta: MwElement,
}

pub fn mw_ops(x: &MwElement, y: &MwElement) -> Result<MwOps> {
    x.degree()?;
    y.degree()?;
    if x.model != y.model {
        return Err(Error::usage("elements of different model algebras"));
    }
    Ok(MwOps {
        cup: mw_cup(x, y),
        bracket: mw_bracket(x, y),
        delta: mw_delta(x),
    })
}

/// `(−1)^{|x|+1}(Δ(x∪y) − Δx∪y − (−1)^{|x|} x∪Δy)` for homogeneous `x`.
pub fn bv_deviation(x: &MwElement, y: &MwElement) -> Result<MwElement> {
    let Some(dx) = x.degree()? else {
        return Ok(MwElement::zero(x.model));
    };
    y.degree()?;
    let s = if dx.rem_euclid(2) == 0 { 1 } else { -1 };
    let t = mw_delta(&mw_cup(x, y))
        .plus(&mw_cup(&mw_delta(x), y).scaled(-1))
        .plus(&mw_cup(x, &mw_delta(y)).scaled(-s));
    Ok(t.scaled(-s))
}

// ---------------------------------------------------------------------------
// one-loop closed forms

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleKind {
    BracketOddOdd,
    BracketEvenEven,
    BracketEvenOdd,
    Delta,
    CupOddOdd,
    CupEvenEven,
    CupEvenOdd,
}

impl std::str::FromStr for OracleKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "bracket-odd-odd" => OracleKind::BracketOddOdd,
            "bracket-even-even" => OracleKind::BracketEvenEven,
            "bracket-even-odd" => OracleKind::BracketEvenOdd,
            "delta" => OracleKind::Delta,
            "cup-odd-odd" => OracleKind::CupOddOdd,
            "cup-even-even" => OracleKind::CupEvenEven,
            "cup-even-odd" => OracleKind::CupEvenOdd,
            _ => return Err(Error::usage(format!("unknown oracle kind {s}"))),
        })
    }
}

fn loop_power(q: &Quiver, k: usize) -> Path {
    q.path_or_trivial(&vec![0; k], 0).expect("one loop")
}

/// `(a, a^k)` on the one-loop quiver.
pub fn loop_pair(q: &Quiver, k: usize) -> ParallelPair {
    (loop_power(q, 1), loop_power(q, k))
}

/// Closed-form right-hand sides for the one-loop quiver (`n` is ignored for `Delta`).
pub fn one_loop_oracle(q: &Quiver, field: Field, kind: OracleKind, m: usize, n: usize) -> Result<PairVector> {
    if q.num_vertices() != 1 || q.num_arrows() != 1 {
        return Err(Error::usage("one-loop oracle needs the one-loop quiver"));
    }
    let odd = |k: usize| k % 2 == 1;
    let need = |ok: bool| {
        if ok {
            Ok(())
        } else {
            Err(Error::usage(format!("parity mismatch for {kind:?} at ({m},{n})")))
        }
    };
    let single = |k: usize, c: i64| PairVector::from_terms(field, 1, k, [(loop_pair(q, k), field.from_i64(c))]);
    use OracleKind::*;
    Ok(match kind {
        BracketOddOdd => {
            need(odd(m) && odd(n))?;
            single(m + n + 3, n as i64 - m as i64)
        }
        BracketEvenEven => {
            need(!odd(m) && !odd(n))?;
            PairVector::zero(field, 1, m + n + 3)
        }
        BracketEvenOdd => {
            need(!odd(m) && odd(n))?;
            single(m + n + 2, -(m as i64))
        }
        Delta => {
            if odd(m) {
                single(m + 2, m as i64)
            } else {
                PairVector::zero(field, 1, m + 3)
            }
        }
        CupOddOdd => {
            need(odd(m) && odd(n))?;
            PairVector::zero(field, 1, m + n + 1)
        }
        CupEvenEven => {
            need(!odd(m) && !odd(n))?;
            single(m + n + 1, 1)
        }
        CupEvenOdd => {
            need(!odd(m) && odd(n))?;
            single(m + n + 2, -1)
        }
    })
}

// ---------------------------------------------------------------------------
// element grammar

fn parse_path(q: &Quiver, s: &str) -> Result<Path> {
    let s = s.trim();
    if let Some(v) = s.strip_prefix("e(").and_then(|r| r.strip_suffix(')')) {
        let v = q
            .vertex_by_name(v.trim())
            .ok_or_else(|| Error::Input(format!("unknown vertex {v}")))?;
        return Ok(q.trivial_path(v));
    }
    let names: Vec<&str> = s.split('*').map(str::trim).collect();
    for n in &names {
        if q.arrow_by_name(n).is_none() {
            return Err(Error::Input(format!("unknown arrow {n:?}")));
        }
    }
    q.path_by_names(&names)
        .ok_or_else(|| Error::Input(format!("arrows {s} do not compose")))
}

fn parse_coeff(field: Field, s: &str) -> Result<Scalar> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(field.one());
    }
    let bad = || Error::Input(format!("bad coefficient {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den == BigInt::from(0) {
        return Err(bad());
    }
    field.from_rational(&BigRational::new(num, den))
}

/// Parses `c (γ|β) ± ...`; all terms must share one bidegree.
pub fn parse_expression(q: &Quiver, field: Field, text: &str) -> Result<PairVector> {
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut terms: Vec<(ParallelPair, Scalar)> = Vec::new();
    let skip_ws = |i: &mut usize| {
        while *i < chars.len() && chars[*i].is_whitespace() {
            *i += 1;
        }
    };
    loop {
        skip_ws(&mut i);
        if i >= chars.len() {
            break;
        }
        let mut neg = false;
        if chars[i] == '+' || chars[i] == '-' {
            neg = chars[i] == '-';
            i += 1;
            skip_ws(&mut i);
        } else if !terms.is_empty() {
            return Err(Error::Input(format!("expected + or - at column {}", i + 1)));
        }
        let start = i;
        while i < chars.len() && chars[i] != '(' {
            i += 1;
        }
        if i >= chars.len() {
            return Err(Error::Input("expected '('".into()));
        }
        let coeff: String = chars[start..i].iter().collect();
        let mut depth = 0;
        let open = i;
        while i < chars.len() {
            match chars[i] {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 {
                        break;
                    }
                }
                _ => {}
            }
            i += 1;
        }
        if i >= chars.len() {
            return Err(Error::Input("unbalanced parentheses".into()));
        }
        let inner: String = chars[open + 1..i].iter().collect();
        i += 1;
        let (l, r) = inner
            .split_once('|')
            .ok_or_else(|| Error::Input(format!("pair {inner:?} lacks '|'")))?;
        let (g, b) = (parse_path(q, l)?, parse_path(q, r)?);
        if !g.is_parallel(&b) {
            return Err(Error::Input(format!("paths in ({inner}) are not parallel")));
        }
        let mut c = parse_coeff(field, &coeff)?;
        if neg {
            c = -c;
        }
        terms.push(((g, b), c));
    }
    let Some(((g0, b0), _)) = terms.first() else {
        return Err(Error::Input("empty expression".into()));
    };
    let (m, p) = (g0.len(), b0.len());
    if terms.iter().any(|((g, b), _)| (g.len(), b.len()) != (m, p)) {
        return Err(Error::Input("terms have different arities".into()));
    }
    Ok(PairVector::from_terms(field, m, p, terms))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_loop_witt_constant() {
        let q = Quiver::one_loop();
        let f = Field::Rational;
        let x = PropElement::high(PairVector::single(f, loop_pair(&q, 3))).unwrap();
        let y = PropElement::high(PairVector::single(f, loop_pair(&q, 5))).unwrap();
        let r = bracket(&q, &x, &y).unwrap();
        assert_eq!((r.m, r.n), (1, 7));
        assert_eq!(r.high, one_loop_oracle(&q, f, OracleKind::BracketOddOdd, 1, 3).unwrap());
        assert!(r.low.is_zero());
    }

    #[test]
    fn two_loops_ef() {
        let q = Quiver::two_loops();
        let f = Field::Rational;
        let e = PropElement::high(parse_expression(&q, f, "(b|a)").unwrap()).unwrap();
        let ff = PropElement::high(parse_expression(&q, f, "(a|b)").unwrap()).unwrap();
        let r = bracket(&q, &e, &ff).unwrap();
        assert_eq!(r.display(&q), "(a|a) - (b|b)");
    }

    #[test]
    fn diamond_examples() {
        let q = Quiver::two_loops();
        let aba = q.path_by_names(&["a", "b", "a"]).unwrap();
        let aa = q.path_by_names(&["a", "a"]).unwrap();
        let r = diamond(&q, &aba, 2, &aa).unwrap().unwrap();
        assert_eq!(q.display_path(&r), "a*a*a*a");
        assert!(diamond(&q, &aba, 4, &aa).is_err());
        let c = Quiver::crown(2);
        let a0 = c.path_by_names(&["a0"]).unwrap();
        let l = c.path_by_names(&["a0", "a1", "a0"]).unwrap();
        assert_eq!(diamond(&c, &a0, 1, &l).unwrap(), Some(l));
    }

    #[test]
    fn grammar_roundtrip() {
        let q = Quiver::two_loops();
        let f = Field::Rational;
        let v = parse_expression(&q, f, "-1/2 (a|a*b) + 3 (b|b*b) - (b|a*a)").unwrap();
        assert_eq!(v.display(&q), "-1/2 (a|a*b) - (b|a*a) + 3 (b|b*b)");
        assert!(parse_expression(&q, f, "(a|a) + (a|a*a)").is_err());
        assert!(parse_expression(&q, f, "(a|c)").is_err());
    }

    #[test]
    fn bv_identity_on_witt() {
        for model in [MwModel::Full, MwModel::Even] {
            let l2 = MwElement::l(model, 2).unwrap();
            let lm2 = MwElement::l(model, -2).unwrap();
            assert_eq!(bv_deviation(&l2, &lm2).unwrap(), mw_bracket(&l2, &lm2));
        }
        let l1 = MwElement::l(MwModel::Full, 1).unwrap();
        let lm1 = MwElement::l(MwModel::Full, -1).unwrap();
        assert_eq!(mw_bracket(&l1, &lm1), MwElement::l(MwModel::Full, 0).unwrap().scaled(2));
    }

    #[test]
    fn project_rejects_partial_cycle() {
        let q = Quiver::two_loops();
        let f = Field::Rational;
        let low = PropElement::low(parse_expression(&q, f, "(a|a)").unwrap()).unwrap();
        assert_eq!(project(&q, &low).unwrap_err(), Error::NotCocycle { m: 1, p: 1 });
        let both = PropElement::low(parse_expression(&q, f, "(a|a) + (b|b)").unwrap()).unwrap();
        assert!(!project(&q, &both).unwrap().is_zero());
    }
}
