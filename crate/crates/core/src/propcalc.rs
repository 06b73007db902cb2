//! Non-symmetric PROPs over explicit bases: four instances, the star operation
//! and its Lie bracket, the tensor model on `V = k²`, and the `gl_∞` bracket.

use std::collections::{BTreeMap, HashMap};

use rand::Rng;

use crate::complex::PairVector;
use crate::error::{Error, Result};
use crate::exactla::{self, ExactMatrix, Field, Scalar, Subspace};
use crate::gerst::PropElement;
use crate::quiver::{enumerate_paths, Quiver};

/// Basis element of `P(m, n)`: an input word and an output word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PropBasis {
    pub m: usize,
    pub n: usize,
    pub input: Vec<u32>,
    pub output: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PropVec {
    pub m: usize,
    pub n: usize,
    field: Field,
    terms: BTreeMap<PropBasis, Scalar>,
}

impl PropVec {
    pub fn zero(field: Field, m: usize, n: usize) -> Self {
        PropVec {
            m,
            n,
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(field: Field, b: PropBasis) -> Self {
        let mut v = PropVec::zero(field, b.m, b.n);
        v.add_term(b, field.one());
        v
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn terms(&self) -> &BTreeMap<PropBasis, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, b: PropBasis, c: Scalar) {
        debug_assert_eq!((b.m, b.n), (self.m, self.n));
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&b) {
            Some(x) => {
                *x = &*x + &c;
                if x.is_zero() {
                    self.terms.remove(&b);
                }
            }
            None => {
                self.terms.insert(b, c);
            }
        }
    }

    pub fn add_scaled(&mut self, c: &Scalar, o: &PropVec) {
        assert_eq!((self.m, self.n), (o.m, o.n), "usage error: arity mismatch");
        for (b, x) in &o.terms {
            self.add_term(b.clone(), c * x);
        }
    }

    pub fn scaled(&self, c: &Scalar) -> PropVec {
        let mut r = PropVec::zero(self.field, self.m, self.n);
        r.add_scaled(c, self);
        r
    }

    pub fn plus(&self, o: &PropVec) -> PropVec {
        let mut r = self.clone();
        r.add_scaled(&self.field.one(), o);
        r
    }

    pub fn minus(&self, o: &PropVec) -> PropVec {
        let mut r = self.clone();
        r.add_scaled(&self.field.from_i64(-1), o);
        r
    }
}

pub trait PropInstance {
    fn field(&self) -> Field;
    fn name(&self) -> String;
    /// Ordered basis of `P(m, n)`.
    fn basis(&self, m: usize, n: usize) -> Vec<PropBasis>;
    fn identity(&self) -> PropVec;
    /// Horizontal composition of basis elements, for instances where `⊙` is bilinear.
    fn hcomp_basis(&self, x: &PropBasis, y: &PropBasis) -> Option<PropBasis>;

    fn is_bilinear(&self) -> bool {
        true
    }

    fn hcomp(&self, x: &PropVec, y: &PropVec) -> PropVec {
        let mut r = PropVec::zero(self.field(), x.m + y.m, x.n + y.n);
        for (bx, cx) in &x.terms {
            for (by, cy) in &y.terms {
                if let Some(b) = self.hcomp_basis(bx, by) {
                    r.add_term(b, cx * cy);
                }
            }
        }
        r
    }

    /// `after ∘ before` with `before ∈ P(m, n)`, `after ∈ P(n, p)`.
    fn vcomp(&self, after: &PropVec, before: &PropVec) -> Result<PropVec> {
        if before.n != after.m {
            return Err(Error::usage(format!(
                "cannot compose P({},{}) after P({},{})",
                after.m, after.n, before.m, before.n
            )));
        }
        let mut idx: HashMap<&[u32], Vec<(&PropBasis, &Scalar)>> = HashMap::new();
        for (b, c) in &after.terms {
            idx.entry(&b.input[..]).or_default().push((b, c));
        }
        let mut r = PropVec::zero(self.field(), before.m, after.n);
        for (b, c) in &before.terms {
            if let Some(list) = idx.get(&b.output[..]) {
                for (a, d) in list {
                    r.add_term(
                        PropBasis {
                            m: before.m,
                            n: after.n,
                            input: b.input.clone(),
                            output: a.output.clone(),
                        },
                        c * d,
                    );
                }
            }
        }
        Ok(r)
    }

    fn label(&self, b: &PropBasis) -> String {
        format!("{:?}->{:?}", b.input, b.output)
    }
}

/// Basis-level vertical composition; shared by every instance here.
pub fn vcomp_basis(after: &PropBasis, before: &PropBasis) -> Option<PropBasis> {
    (before.n == after.m && before.output == after.input).then(|| PropBasis {
        m: before.m,
        n: after.n,
        input: before.input.clone(),
        output: after.output.clone(),
    })
}

fn words(alphabet: u32, len: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..alphabet).map(move |s| {
                    let mut w = w.clone();
                    w.push(s);
                    w
                })
            })
            .collect();
    }
    out
}

/// `End_V` with `V = k^dim`; basis: matrix units on tensor words.
#[derive(Clone, Debug)]
pub struct EndV {
    pub dim: usize,
    field: Field,
}

impl EndV {
    pub fn new(dim: usize, field: Field) -> Self {
        EndV { dim, field }
    }

    /// `id^{⊗k}`.
    pub fn id_power(&self, k: usize) -> PropVec {
        let mut r = PropVec::zero(self.field, k, k);
        for w in words(self.dim as u32, k) {
            r.add_term(
                PropBasis {
                    m: k,
                    n: k,
                    input: w.clone(),
                    output: w,
                },
                self.field.one(),
            );
        }
        r
    }

    /// `id^{⊗l} ⊗ f ⊗ id^{⊗r}`.
    pub fn pad(&self, l: usize, f: &PropVec, r: usize) -> PropVec {
        let x = self.hcomp(&self.id_power(l), f);
        self.hcomp(&x, &self.id_power(r))
    }
}

impl PropInstance for EndV {
    fn field(&self) -> Field {
        self.field
    }

    fn name(&self) -> String {
        format!("end_v({})", self.dim)
    }

    fn basis(&self, m: usize, n: usize) -> Vec<PropBasis> {
        let outs = words(self.dim as u32, n);
        words(self.dim as u32, m)
            .into_iter()
            .flat_map(|x| {
                outs.iter().map(move |y| PropBasis {
                    m,
                    n,
                    input: x.clone(),
                    output: y.clone(),
                })
            })
            .collect()
    }

    fn identity(&self) -> PropVec {
        self.id_power(1)
    }

    fn hcomp_basis(&self, x: &PropBasis, y: &PropBasis) -> Option<PropBasis> {
        Some(PropBasis {
            m: x.m + y.m,
            n: x.n + y.n,
            input: [&x.input[..], &y.input[..]].concat(),
            output: [&x.output[..], &y.output[..]].concat(),
        })
    }
}

/// `Hom(V^{⊕m}, V^{⊕n})` with block-diagonal `⊙`; basis: single matrix units.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub dim: usize,
    field: Field,
}

impl DirectSum {
    pub fn new(dim: usize, field: Field) -> Self {
        DirectSum { dim, field }
    }
}

impl PropInstance for DirectSum {
    fn field(&self) -> Field {
        self.field
    }

    fn name(&self) -> String {
        format!("direct_sum({})", self.dim)
    }

    fn basis(&self, m: usize, n: usize) -> Vec<PropBasis> {
        let d = self.dim as u32;
        (0..m as u32 * d)
            .flat_map(|j| {
                (0..n as u32 * d).map(move |k| PropBasis {
                    m,
                    n,
                    input: vec![j],
                    output: vec![k],
                })
            })
            .collect()
    }

    fn identity(&self) -> PropVec {
        let mut r = PropVec::zero(self.field, 1, 1);
        for i in 0..self.dim as u32 {
            r.add_term(
                PropBasis {
                    m: 1,
                    n: 1,
                    input: vec![i],
                    output: vec![i],
                },
                self.field.one(),
            );
        }
        r
    }

    fn hcomp_basis(&self, _: &PropBasis, _: &PropBasis) -> Option<PropBasis> {
        None
    }

    fn is_bilinear(&self) -> bool {
        false
    }

    /// `x ⊕ y`, which is additive in the pair rather than bilinear.
    fn hcomp(&self, x: &PropVec, y: &PropVec) -> PropVec {
        let d = self.dim as u32;
        let (m, n) = (x.m + y.m, x.n + y.n);
        let mut r = PropVec::zero(self.field, m, n);
        for (b, c) in &x.terms {
            r.add_term(
                PropBasis {
                    m,
                    n,
                    input: b.input.clone(),
                    output: b.output.clone(),
                },
                c.clone(),
            );
        }
        for (b, c) in &y.terms {
            r.add_term(
                PropBasis {
                    m,
                    n,
                    input: vec![b.input[0] + x.m as u32 * d],
                    output: vec![b.output[0] + x.n as u32 * d],
                },
                c.clone(),
            );
        }
        r
    }
}

/// Marker symbols start here; arrows (or loop letters) sit below.
const MARK: u32 = 1 << 20;

fn is_marked(w: &[u32]) -> bool {
    w.first().is_some_and(|&s| s >= MARK)
}

/// Two-block PROP on pair spaces.
///
/// Words are arrow paths, or a vertex marker `e_v` followed by a path; a marked
/// output word is the low block. Marked inputs appear only in powers of the
/// identity, and `⊙` vanishes when its right factor carries a marker.
#[derive(Clone, Debug)]
pub struct QuiverProp {
    quiver: Quiver,
    field: Field,
    label: String,
}

impl QuiverProp {
    pub fn new(quiver: Quiver, field: Field) -> Self {
        QuiverProp {
            quiver,
            field,
            label: "quiver".into(),
        }
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    fn sym_ends(&self, s: u32) -> (usize, usize) {
        if s >= MARK {
            let v = (s - MARK) as usize;
            (v, v)
        } else {
            let a = self.quiver.arrow(s as usize);
            (a.source, a.target)
        }
    }

    fn ends(&self, w: &[u32]) -> (usize, usize) {
        (self.sym_ends(*w.last().unwrap()).0, self.sym_ends(w[0]).1)
    }

    fn words(&self, len: usize) -> Vec<Vec<u32>> {
        if len == 0 {
            return Vec::new();
        }
        let mut out: Vec<Vec<u32>> = enumerate_paths(&self.quiver, len)
            .iter()
            .map(|p| p.arrows().iter().map(|&a| a as u32).collect())
            .collect();
        for d in enumerate_paths(&self.quiver, len - 1) {
            let mut w = vec![MARK + d.target() as u32];
            w.extend(d.arrows().iter().map(|&a| a as u32));
            out.push(w);
        }
        out
    }

    /// Basis of the `P_A(m, n)` part: unmarked inputs only.
    pub fn core_basis(&self, m: usize, n: usize) -> Vec<PropBasis> {
        self.basis(m, n)
            .into_iter()
            .filter(|b| !is_marked(&b.input))
            .collect()
    }

    pub fn from_element(&self, e: &PropElement) -> PropVec {
        let mut r = PropVec::zero(self.field, e.m, e.n);
        for ((a, b), c) in e.high.terms() {
            r.add_term(
                PropBasis {
                    m: e.m,
                    n: e.n,
                    input: a.arrows().iter().map(|&x| x as u32).collect(),
                    output: b.arrows().iter().map(|&x| x as u32).collect(),
                },
                c.clone(),
            );
        }
        for ((a, d), c) in e.low.terms() {
            let mut out = vec![MARK + d.target() as u32];
            out.extend(d.arrows().iter().map(|&x| x as u32));
            r.add_term(
                PropBasis {
                    m: e.m,
                    n: e.n,
                    input: a.arrows().iter().map(|&x| x as u32).collect(),
                    output: out,
                },
                c.clone(),
            );
        }
        r
    }

    pub fn to_element(&self, v: &PropVec) -> Result<PropElement> {
        let q = &self.quiver;
        let mut e = PropElement::zero(self.field, v.m, v.n)?;
        let arrows = |w: &[u32]| w.iter().map(|&x| x as usize).collect::<Vec<_>>();
        for (b, c) in v.terms() {
            if is_marked(&b.input) {
                return Err(Error::usage("element has a marked input word"));
            }
            let a = q.path(&arrows(&b.input)).expect("input path");
            if is_marked(&b.output) {
                let vtx = (b.output[0] - MARK) as usize;
                let d = q.path_or_trivial(&arrows(&b.output[1..]), vtx).expect("output path");
                e.low.add_term((a, d), c.clone());
            } else {
                let d = q.path(&arrows(&b.output)).expect("output path");
                e.high.add_term((a, d), c.clone());
            }
        }
        Ok(e)
    }
}

impl PropInstance for QuiverProp {
    fn field(&self) -> Field {
        self.field
    }

    fn name(&self) -> String {
        self.label.clone()
    }

    fn basis(&self, m: usize, n: usize) -> Vec<PropBasis> {
        let outs = self.words(n);
        let mut out = Vec::new();
        for x in self.words(m) {
            let ex = self.ends(&x);
            for y in &outs {
                if is_marked(&x) && !is_marked(y) {
                    continue;
                }
                if self.ends(y) == ex {
                    out.push(PropBasis {
                        m,
                        n,
                        input: x.clone(),
                        output: y.clone(),
                    });
                }
            }
        }
        out.sort();
        out
    }

    fn identity(&self) -> PropVec {
        let mut r = PropVec::zero(self.field, 1, 1);
        for b in self.basis(1, 1) {
            if b.input == b.output {
                r.add_term(b, self.field.one());
            }
        }
        r
    }

    fn hcomp_basis(&self, x: &PropBasis, y: &PropBasis) -> Option<PropBasis> {
        if is_marked(&y.input) || is_marked(&y.output) {
            return None;
        }
        if self.ends(&x.input).0 != self.ends(&y.input).1 || self.ends(&x.output).0 != self.ends(&y.output).1 {
            return None;
        }
        Some(PropBasis {
            m: x.m + y.m,
            n: x.n + y.n,
            input: [&x.input[..], &y.input[..]].concat(),
            output: [&x.output[..], &y.output[..]].concat(),
        })
    }

    fn label(&self, b: &PropBasis) -> String {
        let show = |w: &[u32]| {
            w.iter()
                .map(|&s| {
                    if s >= MARK {
                        format!("e({})", self.quiver.vertex_name((s - MARK) as usize))
                    } else {
                        self.quiver.arrow(s as usize).name.clone()
                    }
                })
                .collect::<Vec<_>>()
                .join("*")
        };
        format!("({}|{})", show(&b.input), show(&b.output))
    }
}

/// The two-block PROP `P_r` on `V = k^r`, with a marker letter `e` for the low block.
#[derive(Clone, Debug)]
pub struct RLoops {
    pub r: usize,
    field: Field,
}

impl RLoops {
    pub fn new(r: usize, field: Field) -> Self {
        RLoops { r, field }
    }

    fn words(&self, len: usize) -> Vec<Vec<u32>> {
        if len == 0 {
            return Vec::new();
        }
        let mut out = words(self.r as u32, len);
        out.extend(words(self.r as u32, len - 1).into_iter().map(|w| {
            let mut v = vec![MARK];
            v.extend(w);
            v
        }));
        out
    }

    /// `dim` of the `Hom(V^m, V^{n−1}) ⊕ Hom(V^m, V^n)` part.
    pub fn core_dim(&self, m: usize, n: usize) -> usize {
        self.basis(m, n).iter().filter(|b| !is_marked(&b.input)).count()
    }
}

impl PropInstance for RLoops {
    fn field(&self) -> Field {
        self.field
    }

    fn name(&self) -> String {
        format!("r_loops({})", self.r)
    }

    fn basis(&self, m: usize, n: usize) -> Vec<PropBasis> {
        let outs = self.words(n);
        let mut out = Vec::new();
        for x in self.words(m) {
            for y in &outs {
                if !is_marked(&x) || is_marked(y) {
                    out.push(PropBasis {
                        m,
                        n,
                        input: x.clone(),
                        output: y.clone(),
                    });
                }
            }
        }
        out.sort();
        out
    }

    fn identity(&self) -> PropVec {
        let mut r = PropVec::zero(self.field, 1, 1);
        for b in self.basis(1, 1) {
            if b.input == b.output {
                r.add_term(b, self.field.one());
            }
        }
        r
    }

    fn hcomp_basis(&self, x: &PropBasis, y: &PropBasis) -> Option<PropBasis> {
        if is_marked(&y.input) || is_marked(&y.output) {
            return None;
        }
        Some(PropBasis {
            m: x.m + y.m,
            n: x.n + y.n,
            input: [&x.input[..], &y.input[..]].concat(),
            output: [&x.output[..], &y.output[..]].concat(),
        })
    }
}

#[derive(Clone, Debug)]
pub enum PropKind {
    EndV(usize),
    DirectSum(usize),
    RLoops(usize),
    Quiver(Quiver),
}

pub fn make_prop(kind: PropKind, field: Field) -> Result<Box<dyn PropInstance>> {
    Ok(match kind {
        PropKind::EndV(d) | PropKind::DirectSum(d) | PropKind::RLoops(d) if d == 0 => {
            return Err(Error::usage("dimension must be at least 1"))
        }
        PropKind::EndV(d) => Box::new(EndV::new(d, field)),
        PropKind::DirectSum(d) => Box::new(DirectSum::new(d, field)),
        PropKind::RLoops(r) => Box::new(RLoops::new(r, field)),
        PropKind::Quiver(q) => Box::new(QuiverProp::new(q, field)),
    })
}

fn sign_scalar(field: Field, odd: bool) -> Scalar {
    field.from_i64(if odd { -1 } else { 1 })
}

/// Horizontal product of a sequence, skipping empty identity powers.
fn hchain<P: PropInstance + ?Sized>(p: &P, parts: &[Option<&PropVec>]) -> PropVec {
    let mut it = parts.iter().flatten();
    let first = (*it.next().expect("nonempty product")).clone();
    it.fold(first, |acc, x| p.hcomp(&acc, x))
}

fn id_power<P: PropInstance + ?Sized>(p: &P, k: usize, cache: &mut HashMap<usize, PropVec>) -> Option<PropVec> {
    if k == 0 {
        return None;
    }
    if let Some(v) = cache.get(&k) {
        return Some(v.clone());
    }
    let id = p.identity();
    let mut v = id.clone();
    for _ in 1..k {
        v = p.hcomp(&v, &id);
    }
    cache.insert(k, v.clone());
    Some(v)
}

/// `f ⋆ g` for `f ∈ P(m, p)`, `g ∈ P(n, q)`.
pub fn star<P: PropInstance + ?Sized>(p: &P, f: &PropVec, g: &PropVec) -> Result<PropVec> {
    let (m, pp, n, q) = (f.m, f.n, g.m, g.n);
    if m == 0 || pp == 0 || n == 0 || q == 0 {
        return Err(Error::usage("star needs positive arities"));
    }
    let field = p.field();
    let mut cache = HashMap::new();
    let mut out = PropVec::zero(field, m + n - 1, pp + q - 1);
    for i in 1..=m {
        let left = hchain(p, &[Some(f), id_power(p, q - 1, &mut cache).as_ref()]);
        let right = hchain(
            p,
            &[
                id_power(p, i - 1, &mut cache).as_ref(),
                Some(g),
                id_power(p, m - i, &mut cache).as_ref(),
            ],
        );
        let s = sign_scalar(field, (i - 1) * (q + n) % 2 == 1);
        out.add_scaled(&s, &p.vcomp(&left, &right)?);
    }
    for i in 1..q {
        let left = hchain(
            p,
            &[
                id_power(p, i, &mut cache).as_ref(),
                Some(f),
                id_power(p, q - 1 - i, &mut cache).as_ref(),
            ],
        );
        let right = hchain(p, &[Some(g), id_power(p, m - 1, &mut cache).as_ref()]);
        let s = sign_scalar(field, i * (pp + m) % 2 == 1);
        out.add_scaled(&s, &p.vcomp(&left, &right)?);
    }
    Ok(out)
}

/// `(−1)^{(m−p)(n−q)}`, the graded-antisymmetry sign.
pub fn swap_sign(m: usize, p: usize, n: usize, q: usize) -> bool {
    (m + p) % 2 == 1 && (n + q) % 2 == 1
}

pub fn prop_bracket<P: PropInstance + ?Sized>(p: &P, f: &PropVec, g: &PropVec) -> Result<PropVec> {
    let fg = star(p, f, g)?;
    let gf = star(p, g, f)?;
    let s = sign_scalar(p.field(), !swap_sign(f.m, f.n, g.m, g.n));
    let mut r = fg;
    r.add_scaled(&s, &gf);
    Ok(r)
}

/// Graded Jacobi sum; zero exactly when the identity holds on the triple.
pub fn jacobi_sum<P: PropInstance + ?Sized>(p: &P, f: &PropVec, g: &PropVec, h: &PropVec) -> Result<PropVec> {
    let deg = |x: &PropVec| (x.m + x.n) % 2 == 1;
    let sg = |a: bool, b: bool| sign_scalar(p.field(), a && b);
    let t1 = prop_bracket(p, &prop_bracket(p, f, g)?, h)?;
    let t2 = prop_bracket(p, &prop_bracket(p, g, h)?, f)?;
    let t3 = prop_bracket(p, &prop_bracket(p, h, f)?, g)?;
    let mut r = t1.scaled(&sg(deg(f), deg(h)));
    r.add_scaled(&sg(deg(g), deg(f)), &t2);
    r.add_scaled(&sg(deg(h), deg(g)), &t3);
    Ok(r)
}

/// Random element with up to `terms` basis terms and coefficients in `[−3, 3]`.
pub fn random_element<P: PropInstance + ?Sized, R: Rng>(
    p: &P,
    m: usize,
    n: usize,
    terms: usize,
    core_only: bool,
    rng: &mut R,
) -> PropVec {
    let basis: Vec<PropBasis> = p
        .basis(m, n)
        .into_iter()
        .filter(|b| !core_only || !is_marked(&b.input))
        .collect();
    let mut v = PropVec::zero(p.field(), m, n);
    if basis.is_empty() {
        return v;
    }
    for _ in 0..terms {
        let b = basis[rng.gen_range(0..basis.len())].clone();
        let c = rng.gen_range(-3i64..=3);
        v.add_term(b, p.field().from_i64(c));
    }
    v
}

/// First failing quadruple of `(g₁∘f₁)⊙(g₂∘f₂) = (g₁⊙g₂)∘(f₁⊙f₂)` with arities in `1..=size`.
pub fn interchange_counterexample<P: PropInstance + ?Sized>(
    p: &P,
    size: usize,
) -> Result<Option<(PropBasis, PropBasis, PropBasis, PropBasis)>> {
    let mut pairs = Vec::new();
    for a in 1..=size {
        for b in 1..=size {
            for c in 1..=size {
                let fs = p.basis(a, b);
                let gs = p.basis(b, c);
                for f in &fs {
                    for g in &gs {
                        pairs.push((f.clone(), g.clone()));
                    }
                }
            }
        }
    }
    let field = p.field();
    for (f1, g1) in &pairs {
        let c1 = vcomp_basis(g1, f1);
        for (f2, g2) in &pairs {
            let ok = if p.is_bilinear() {
                let c2 = vcomp_basis(g2, f2);
                let lhs = match (&c1, &c2) {
                    (Some(a), Some(b)) => p.hcomp_basis(a, b),
                    _ => None,
                };
                let rhs = match (p.hcomp_basis(g1, g2), p.hcomp_basis(f1, f2)) {
                    (Some(a), Some(b)) => vcomp_basis(&a, &b),
                    _ => None,
                };
                lhs == rhs
            } else {
                let v = |b: &PropBasis| PropVec::basis(field, b.clone());
                let lhs = p.hcomp(
                    &p.vcomp(&v(g1), &v(f1))?,
                    &p.vcomp(&v(g2), &v(f2))?,
                );
                let rhs = p.vcomp(&p.hcomp(&v(g1), &v(g2)), &p.hcomp(&v(f1), &v(f2)))?;
                lhs == rhs
            };
            if !ok {
                return Ok(Some((f1.clone(), g1.clone(), f2.clone(), g2.clone())));
            }
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// tensor model on V = k²

/// `T^{m,p}(V) = Hom(V^{⊗m}, V^{⊗p}) ⊕ Hom(V^{⊗m}, V^{⊗p+1})`.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorMap {
    pub m: usize,
    pub p: usize,
    pub t0: PropVec,
    pub t1: PropVec,
}

impl TensorMap {
    pub fn zero(field: Field, m: usize, p: usize) -> Self {
        TensorMap {
            m,
            p,
            t0: PropVec::zero(field, m, p),
            t1: PropVec::zero(field, m, p + 1),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.t0.is_zero() && self.t1.is_zero()
    }
}

fn par(x: i64) -> bool {
    x.rem_euclid(2) == 1
}

/// The tensor model: `End_V` for `V = k²` plus the maps of the model.
#[derive(Clone, Debug)]
pub struct TensorModel {
    pub ev: EndV,
}

impl TensorModel {
    pub fn new(field: Field) -> Self {
        TensorModel {
            ev: EndV::new(2, field),
        }
    }

    fn field(&self) -> Field {
        self.ev.field()
    }

    /// `φ_{m,p}(f) = id⊗f + (−1)^{p+m+1} f⊗id` for `f: V^{⊗m} → V^{⊗p}`.
    pub fn phi(&self, f: &PropVec) -> PropVec {
        let id = self.ev.id_power(1);
        let s = sign_scalar(self.field(), (f.m + f.n + 1) % 2 == 1);
        let mut r = self.ev.hcomp(&id, f);
        r.add_scaled(&s, &self.ev.hcomp(f, &id));
        r
    }

    /// `θ(f) = −f⊗id`.
    pub fn theta(&self, f: &PropVec) -> PropVec {
        self.ev
            .hcomp(f, &self.ev.id_power(1))
            .scaled(&self.field().from_i64(-1))
    }

    pub fn theta_map(&self, f: &TensorMap) -> TensorMap {
        TensorMap {
            m: f.m + 1,
            p: f.p + 1,
            t0: self.theta(&f.t0),
            t1: self.theta(&f.t1),
        }
    }

    fn matrix_of(&self, m: usize, n: usize, op: impl Fn(&PropVec) -> PropVec, m2: usize, n2: usize) -> ExactMatrix {
        let field = self.field();
        let dom = self.ev.basis(m, n);
        let cod = self.ev.basis(m2, n2);
        let index: HashMap<&PropBasis, usize> = cod.iter().enumerate().map(|(i, b)| (b, i)).collect();
        let cols = dom
            .iter()
            .map(|b| {
                let img = op(&PropVec::basis(field, b.clone()));
                exactla::normalize_sparse(img.terms.iter().map(|(k, c)| (index[k], c.clone())).collect())
            })
            .collect();
        ExactMatrix::from_columns(field, cod.len(), cols).expect("well-formed")
    }

    /// Matrix of `φ_{m,p}: Hom(V^{⊗m}, V^{⊗p}) → Hom(V^{⊗m+1}, V^{⊗p+1})`.
    pub fn phi_matrix(&self, m: usize, p: usize) -> ExactMatrix {
        self.matrix_of(m, p, |f| self.phi(f), m + 1, p + 1)
            .with_labels(format!("T({},{})", m + 1, p + 1), format!("T({m},{p})"))
    }

    pub fn theta_matrix(&self, m: usize, p: usize) -> ExactMatrix {
        self.matrix_of(m, p, |f| self.theta(f), m + 1, p + 1)
            .with_labels(format!("T({},{})", m + 1, p + 1), format!("T({m},{p})"))
    }

    /// `K^{m,p} = Ker φ_{m,p} ⊕ T₁^{m,p}/Im φ_{m−1,p}`.
    pub fn k_group(&self, m: usize, p: usize) -> KGroup {
        let kernel = exactla::kernel_of(&self.phi_matrix(m, p));
        let ambient = 1usize << (m + p + 1);
        let image = if m == 0 {
            Subspace::zero(self.field(), ambient)
        } else {
            let phi = self.phi_matrix(m - 1, p);
            exactla::rref(self.field(), phi.columns(), ambient)
        };
        KGroup { m, p, kernel, image }
    }

    pub fn identity_map(&self, m: usize) -> PropVec {
        self.ev.id_power(m)
    }

    fn sub(&self, l: usize, f: &PropVec, r: usize) -> PropVec {
        self.ev.pad(l, f, r)
    }

    fn comp(&self, after: &PropVec, before: &PropVec) -> PropVec {
        self.ev.vcomp(after, before).expect("composable")
    }

    /// Bracket of two `T₁` maps; `f: V^m → V^{p+1}`, `g: V^n → V^{q+1}`.
    fn b11(&self, f: &PropVec, g: &PropVec) -> PropVec {
        let (m, p, n, q) = (f.m as i64, f.n as i64 - 1, g.m as i64, g.n as i64 - 1);
        let field = self.field();
        let mut r = PropVec::zero(field, (m + n - 1) as usize, (p + q + 1) as usize);
        let fid = self.sub(0, f, q as usize);
        for i in 1..=m {
            let t = self.comp(&fid, &self.sub((i - 1) as usize, g, (m - i) as usize));
            r.add_scaled(&sign_scalar(field, par((i - 1) * (q - n - 1))), &t);
        }
        let gid = self.sub(0, g, (m - 1) as usize);
        for i in 1..=q {
            let t = self.comp(&self.sub(i as usize, f, (q - i) as usize), &gid);
            r.add_scaled(&sign_scalar(field, par(i * (p - m - 1))), &t);
        }
        let gid2 = self.sub(0, g, p as usize);
        for i in 1..=n {
            let t = self.comp(&gid2, &self.sub((i - 1) as usize, f, (n - i) as usize));
            r.add_scaled(&sign_scalar(field, !par((n - q + i) * (p - m - 1))), &t);
        }
        let fid2 = self.sub(0, f, (n - 1) as usize);
        for i in 1..=p {
            let t = self.comp(&self.sub(i as usize, g, (p - i) as usize), &fid2);
            r.add_scaled(&sign_scalar(field, !par((m - p + i - 1) * (q - n - 1))), &t);
        }
        r
    }

    /// Bracket of a `T₀` map `f: V^m → V^p` with a `T₁` map `g: V^n → V^{q+1}`.
    fn b01(&self, f: &PropVec, g: &PropVec) -> PropVec {
        let (m, p, n, q) = (f.m as i64, f.n as i64, g.m as i64, g.n as i64 - 1);
        let field = self.field();
        let mut r = PropVec::zero(field, (m + n - 1) as usize, (p + q) as usize);
        let fid = self.sub(0, f, q as usize);
        for i in 1..=m {
            let t = self.comp(&fid, &self.sub((i - 1) as usize, g, (m - i) as usize));
            r.add_scaled(&sign_scalar(field, par((i - 1) * (q - n - 1))), &t);
        }
        let fid2 = self.sub(0, f, (n - 1) as usize);
        for i in 0..p {
            let t = self.comp(&self.sub(i as usize, g, (p - i - 1) as usize), &fid2);
            r.add_scaled(&sign_scalar(field, !par((q - n - 1) * (m - p + i))), &t);
        }
        r
    }

    /// `{f, g}` on `T^{m,p} × T^{n,q} → T^{m+n−1, p+q}`.
    pub fn bracket(&self, f: &TensorMap, g: &TensorMap) -> Result<TensorMap> {
        if f.m == 0 || g.m == 0 {
            return Err(Error::usage("tensor bracket needs m, n ≥ 1"));
        }
        let (m, p, n, q) = (f.m as i64, f.p as i64, g.m as i64, g.p as i64);
        let field = self.field();
        let mut t0 = self.b01(&f.t0, &g.t1);
        let s = sign_scalar(field, !par((m - p - 1) * (n - q - 1)));
        t0.add_scaled(&s, &self.b01(&g.t0, &f.t1));
        Ok(TensorMap {
            m: f.m + g.m - 1,
            p: f.p + g.p,
            t0,
            t1: self.b11(&f.t1, &g.t1),
        })
    }
}

#[derive(Clone, Debug)]
pub struct KGroup {
    pub m: usize,
    pub p: usize,
    /// `Ker φ_{m,p}` inside `Hom(V^{⊗m}, V^{⊗p})`.
    pub kernel: Subspace,
    /// `Im φ_{m−1,p}` inside `Hom(V^{⊗m}, V^{⊗p+1})`.
    pub image: Subspace,
}

impl KGroup {
    pub fn dim(&self) -> usize {
        self.kernel.dim() + (self.image.ambient() - self.image.dim())
    }
}

fn check_two_loops(q: &Quiver) -> Result<()> {
    let ok = q.num_vertices() == 1 && q.num_arrows() == 2;
    if !ok {
        return Err(Error::usage("the correspondence needs the two-loops quiver"));
    }
    Ok(())
}

/// `F`: a pair vector over the two-loops quiver as a map on tensor words.
pub fn f_correspondence(q: &Quiver, v: &PairVector) -> Result<PropVec> {
    check_two_loops(q)?;
    let mut r = PropVec::zero(v.field(), v.m(), v.p());
    for ((g, b), c) in v.terms() {
        r.add_term(
            PropBasis {
                m: v.m(),
                n: v.p(),
                input: g.arrows().iter().map(|&a| a as u32).collect(),
                output: b.arrows().iter().map(|&a| a as u32).collect(),
            },
            c.clone(),
        );
    }
    Ok(r)
}

/// `F` on a PROP element at arity `(m, p+1)`: low part to `T₀`, high part to `T₁`.
pub fn f_element(q: &Quiver, e: &PropElement) -> Result<TensorMap> {
    Ok(TensorMap {
        m: e.m,
        p: e.omega(),
        t0: f_correspondence(q, &e.low)?,
        t1: f_correspondence(q, &e.high)?,
    })
}

// ---------------------------------------------------------------------------
// gl_∞

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlElement {
    pub size: usize,
    entries: Vec<Vec<Scalar>>,
}

impl GlElement {
    pub fn zero(field: Field, size: usize) -> Self {
        GlElement {
            size,
            entries: vec![vec![field.zero(); size]; size],
        }
    }

    pub fn from_i64(field: Field, rows: &[Vec<i64>]) -> Result<Self> {
        let size = rows.len();
        if size == 0 || rows.iter().any(|r| r.len() != size) {
            return Err(Error::usage("gl element must be a nonempty square matrix"));
        }
        Ok(GlElement {
            size,
            entries: rows
                .iter()
                .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
                .collect(),
        })
    }

    pub fn random<R: Rng>(field: Field, size: usize, rng: &mut R) -> Self {
        let rows: Vec<Vec<i64>> = (0..size)
            .map(|_| (0..size).map(|_| rng.gen_range(-5..=5)).collect())
            .collect();
        GlElement::from_i64(field, &rows).expect("square")
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i][j]
    }

    fn field(&self) -> Field {
        self.entries[0][0].field()
    }

    /// `diag(0_before, self, 0_after)`.
    fn embed(&self, before: usize, after: usize) -> GlElement {
        let mut r = GlElement::zero(self.field(), before + self.size + after);
        for i in 0..self.size {
            for j in 0..self.size {
                r.entries[before + i][before + j] = self.entries[i][j].clone();
            }
        }
        r
    }

    fn mul(&self, o: &GlElement) -> GlElement {
        let n = self.size;
        let mut r = GlElement::zero(self.field(), n);
        for i in 0..n {
            for k in 0..n {
                if self.entries[i][k].is_zero() {
                    continue;
                }
                for j in 0..n {
                    r.entries[i][j] = &r.entries[i][j] + &(&self.entries[i][k] * &o.entries[k][j]);
                }
            }
        }
        r
    }

    fn add(&mut self, o: &GlElement, c: i64) {
        for i in 0..self.size {
            for j in 0..self.size {
                self.entries[i][j] = &self.entries[i][j] + &o.entries[i][j].scale_i64(c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Scalar::is_zero)
    }

    pub fn plus(&self, o: &GlElement) -> GlElement {
        let mut r = self.clone();
        r.add(o, 1);
        r
    }

    pub fn neg(&self) -> GlElement {
        let mut r = GlElement::zero(self.field(), self.size);
        r.add(self, -1);
        r
    }
}

fn commutator(a: &GlElement, b: &GlElement) -> GlElement {
    let mut r = a.mul(b);
    r.add(&b.mul(a), -1);
    r
}

/// `{A, B}` in `gl_{m+n−1}` for `A ∈ gl_m`, `B ∈ gl_n`.
pub fn gl_bracket(a: &GlElement, b: &GlElement) -> GlElement {
    let (m, n) = (a.size, b.size);
    let mut r = GlElement::zero(a.field(), m + n - 1);
    let pb = b.embed(0, m - 1);
    for i in 0..n {
        r.add(&commutator(&a.embed(i, n - 1 - i), &pb), 1);
    }
    let pa = a.embed(0, n - 1);
    for i in 1..m {
        r.add(&commutator(&pa, &b.embed(i, m - 1 - i)), 1);
    }
    r
}

/// `θ_n: gl_n → gl_{n+1}`, zero in the new last row and column.
pub fn gl_theta(a: &GlElement) -> GlElement {
    a.embed(0, 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn id_star_scales() {
        let p = EndV::new(2, Field::Rational);
        let f = PropVec::basis(
            Field::Rational,
            PropBasis {
                m: 2,
                n: 3,
                input: vec![0, 1],
                output: vec![1, 1, 0],
            },
        );
        let r = star(&p, &p.identity(), &f).unwrap();
        assert_eq!(r, f.scaled(&Field::Rational.from_i64(3)));
    }

    #[test]
    fn end_v1_scalars() {
        let p = EndV::new(1, Field::Rational);
        let f = PropVec::basis(
            Field::Rational,
            PropBasis {
                m: 2,
                n: 1,
                input: vec![0, 0],
                output: vec![0],
            },
        );
        // two input substitutions with signs +1 and (−1)^{q−n} = −1
        assert!(star(&p, &f, &f).unwrap().is_zero());
        let g = PropVec::basis(
            Field::Rational,
            PropBasis {
                m: 2,
                n: 2,
                input: vec![0, 0],
                output: vec![0, 0],
            },
        );
        assert!(prop_bracket(&p, &g, &g).unwrap().is_zero());
    }

    #[test]
    fn loops_dimensions_match() {
        for r in 1..=3 {
            let a = RLoops::new(r, Field::Rational);
            let b = QuiverProp::new(Quiver::loops(r), Field::Rational);
            for m in 1..=3 {
                for n in 1..=3 {
                    let expect = r.pow((m + n - 1) as u32) + r.pow((m + n) as u32);
                    assert_eq!(a.core_dim(m, n), expect);
                    assert_eq!(b.core_basis(m, n).len(), expect);
                }
            }
        }
    }

    #[test]
    fn gl_size_one_vanishes() {
        let f = Field::Rational;
        let a = GlElement::from_i64(f, &[vec![3]]).unwrap();
        let b = GlElement::from_i64(f, &[vec![1, 2], vec![3, 4]]).unwrap();
        assert!(gl_bracket(&a, &b).is_zero());
        assert_eq!(gl_bracket(&b, &a), gl_bracket(&a, &b).neg());
    }

    #[test]
    fn phi_kernel_is_identity() {
        let t = TensorModel::new(Field::Rational);
        for m in 0..=3 {
            let k = exactla::kernel_of(&t.phi_matrix(m, m));
            assert_eq!(k.dim(), 1, "m={m}");
        }
    }
}
