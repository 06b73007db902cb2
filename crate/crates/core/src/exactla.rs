//! Exact linear algebra over the rationals or a prime field.
//!
//! Vectors are sparse: sorted `(index, value)` lists with no stored zeros.
//! Rational elimination runs fraction-free on integer rows (content-normalized),
//! prime-field elimination is the plain textbook one.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Prime(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    F { v: u64, p: u64 },
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let e = num_integer::Integer::extended_gcd(&(a as i128), &(p as i128));
    e.x.rem_euclid(p as i128) as u64
}

impl Field {
    /// Prime fields are limited to `P < 2^32` so products fit in a `u64`.
    pub fn prime(p: u64) -> Result<Field> {
        if p >= 1 << 32 {
            return Err(Error::Input(format!("prime {p} too large (limit 2^32)")));
        }
        if !is_prime(p) {
            return Err(Error::Input(format!("{p} is not prime")));
        }
        Ok(Field::Prime(p))
    }

    /// Parses `rational` or `fp:P`.
    pub fn parse(s: &str) -> Result<Field> {
        match s {
            "rational" | "q" | "Q" => Ok(Field::Rational),
            _ => {
                let p = s
                    .strip_prefix("fp:")
                    .ok_or_else(|| Error::Input(format!("unknown field '{s}'")))?;
                let p: u64 = p
                    .parse()
                    .map_err(|_| Error::Input(format!("bad prime '{p}'")))?;
                Field::prime(p)
            }
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, x: i64) -> Scalar {
        match *self {
            Field::Rational => Scalar::Q(BigRational::from_integer(BigInt::from(x))),
            Field::Prime(p) => Scalar::F {
                v: (x as i128).rem_euclid(p as i128) as u64,
                p,
            },
        }
    }

    pub fn from_rational(&self, r: &BigRational) -> Result<Scalar> {
        match *self {
            Field::Rational => Ok(Scalar::Q(r.clone())),
            Field::Prime(p) => {
                let red = |x: &BigInt| -> u64 {
                    x.mod_floor(&BigInt::from(p)).to_u64().expect("reduced")
                };
                let d = red(r.denom());
                if d == 0 {
                    return Err(Error::Input(format!(
                        "denominator of {r} vanishes mod {p}"
                    )));
                }
                Ok(Scalar::F {
                    v: (red(r.numer()) * inv_mod(d, p)) % p,
                    p,
                })
            }
        }
    }

    pub fn contains(&self, s: &Scalar) -> bool {
        matches!(
            (self, s),
            (Field::Rational, Scalar::Q(_)) | (Field::Prime(_), Scalar::F { .. })
        ) && match (self, s) {
            (Field::Prime(p), Scalar::F { p: q, .. }) => p == q,
            _ => true,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "rational"),
            Field::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

fn mixed() -> ! {
    panic!("usage error: mixed scalar kinds")
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rational,
            Scalar::F { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::F { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_one(),
            Scalar::F { v, .. } => *v == 1,
        }
    }

    /// Rationals below zero; prime-field values are never negative.
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_negative(),
            Scalar::F { .. } => false,
        }
    }

    pub fn inv(&self) -> Scalar {
        assert!(!self.is_zero(), "division by zero");
        match self {
            Scalar::Q(q) => Scalar::Q(q.recip()),
            Scalar::F { v, p } => Scalar::F {
                v: inv_mod(*v, *p),
                p: *p,
            },
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Q(q) => Scalar::Q(q.abs()),
            s => s.clone(),
        }
    }

    pub fn scale_i64(&self, k: i64) -> Scalar {
        self * &self.field().from_i64(k)
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Q(q) => Some(q),
            _ => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(q) => write!(f, "{q}"),
            Scalar::F { v, .. } => write!(f, "{v}"),
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::F { v: a, p }, Scalar::F { v: b, p: q }) if p == q => Scalar::F {
                v: (a + b) % p,
                p: *p,
            },
            _ => mixed(),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self + &(-o)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::F { v: a, p }, Scalar::F { v: b, p: q }) if p == q => Scalar::F {
                v: (a * b) % p,
                p: *p,
            },
            _ => mixed(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::F { v, p } => Scalar::F {
                v: (p - v) % p,
                p: *p,
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, o: Scalar) -> Scalar {
        &self + &o
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, o: Scalar) -> Scalar {
        &self - &o
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        &self * &o
    }
}

/// Sorted `(index, value)` pairs, no zeros.
pub type SparseVec = Vec<(usize, Scalar)>;

/// `a + c·b` for sorted sparse vectors.
pub fn axpy(a: &SparseVec, c: &Scalar, b: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            let v = c * &b[j].1;
            if !v.is_zero() {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = &a[i].1 + &(c * &b[j].1);
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Sorts and merges duplicate indices, dropping zeros.
pub fn normalize_sparse(mut v: Vec<(usize, Scalar)>) -> SparseVec {
    v.sort_by_key(|e| e.0);
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (i, x) in v {
        match out.last_mut() {
            Some((j, y)) if *j == i => *y = &*y + &x,
            _ => out.push((i, x)),
        }
    }
    out.retain(|e| !e.1.is_zero());
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExactMatrix {
    pub row_label: String,
    pub col_label: String,
    nrows: usize,
    ncols: usize,
    field: Field,
    columns: Vec<SparseVec>,
}

impl ExactMatrix {
    pub fn zero(field: Field, nrows: usize, ncols: usize) -> Self {
        ExactMatrix {
            row_label: String::new(),
            col_label: String::new(),
            nrows,
            ncols,
            field,
            columns: vec![Vec::new(); ncols],
        }
    }

    /// Builds from columns; entries are normalized.
    pub fn from_columns(field: Field, nrows: usize, columns: Vec<Vec<(usize, Scalar)>>) -> Result<Self> {
        let ncols = columns.len();
        let mut cols = Vec::with_capacity(ncols);
        for c in columns {
            for (r, x) in &c {
                if *r >= nrows {
                    return Err(Error::usage(format!("row index {r} out of range")));
                }
                if !field.contains(x) {
                    return Err(Error::usage("mixed scalar kinds in one matrix"));
                }
            }
            cols.push(normalize_sparse(c));
        }
        Ok(ExactMatrix {
            row_label: String::new(),
            col_label: String::new(),
            nrows,
            ncols,
            field,
            columns: cols,
        })
    }

    pub fn from_dense(field: Field, rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let columns = (0..ncols)
            .map(|c| {
                (0..nrows)
                    .filter(|&r| rows[r][c] != 0)
                    .map(|r| (r, field.from_i64(rows[r][c])))
                    .collect()
            })
            .collect();
        ExactMatrix::from_columns(field, nrows, columns).expect("well-formed")
    }

    pub fn with_labels(mut self, rows: impl Into<String>, cols: impl Into<String>) -> Self {
        self.row_label = rows.into();
        self.col_label = cols.into();
        self
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn column(&self, c: usize) -> &SparseVec {
        &self.columns[c]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.columns[c]
            .iter()
            .find(|e| e.0 == r)
            .map_or_else(|| self.field.zero(), |e| e.1.clone())
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(|c| c.len()).sum()
    }

    pub fn rows(&self) -> Vec<SparseVec> {
        let mut rows = vec![Vec::new(); self.nrows];
        for (c, col) in self.columns.iter().enumerate() {
            for (r, x) in col {
                rows[*r].push((c, x.clone()));
            }
        }
        rows
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut acc = Vec::new();
        for (c, x) in v {
            for (r, y) in &self.columns[*c] {
                acc.push((*r, x * y));
            }
        }
        normalize_sparse(acc)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.ncols, other.nrows, "shape mismatch");
        let columns = other.columns.iter().map(|c| self.apply(c)).collect();
        ExactMatrix {
            row_label: self.row_label.clone(),
            col_label: other.col_label.clone(),
            nrows: self.nrows,
            ncols: other.ncols,
            field: self.field,
            columns,
        }
    }

    pub fn rank(&self) -> usize {
        rref(self.field, &self.columns, self.nrows).dim()
    }
}

/// A subspace given by its reduced row-echelon basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    ambient: usize,
    field: Field,
    rows: Vec<SparseVec>,
    pivot_row: HashMap<usize, usize>,
}

impl Subspace {
    pub fn zero(field: Field, ambient: usize) -> Self {
        Subspace {
            ambient,
            field,
            rows: Vec::new(),
            pivot_row: HashMap::new(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r[0].0).collect()
    }

    pub fn is_pivot(&self, c: usize) -> bool {
        self.pivot_row.contains_key(&c)
    }

    /// The representative of `v + S` vanishing on every pivot column.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut out = v.clone();
        let mut i = 0;
        while i < out.len() {
            let (c, x) = (out[i].0, out[i].1.clone());
            if let Some(&r) = self.pivot_row.get(&c) {
                out = axpy(&out, &(-&x), &self.rows[r]);
            } else {
                i += 1;
            }
        }
        out
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Coordinates of a member in the RREF basis (its values at the pivots).
    pub fn coordinates(&self, v: &SparseVec) -> Vec<Scalar> {
        let mut coords = vec![self.field.zero(); self.rows.len()];
        for (c, x) in v {
            if let Some(&r) = self.pivot_row.get(c) {
                coords[r] = x.clone();
            }
        }
        coords
    }

    fn from_rows(field: Field, ambient: usize, mut rows: Vec<SparseVec>) -> Self {
        rows.sort_by_key(|r| r[0].0);
        let pivot_row = rows.iter().enumerate().map(|(i, r)| (r[0].0, i)).collect();
        Subspace {
            ambient,
            field,
            rows,
            pivot_row,
        }
    }
}

/// `coset_reduce` with dimension checking.
pub fn coset_reduce(v: &SparseVec, s: &Subspace) -> Result<SparseVec> {
    if let Some((i, _)) = v.last() {
        if *i >= s.ambient {
            return Err(Error::usage(format!(
                "vector index {i} outside ambient dimension {}",
                s.ambient
            )));
        }
    }
    Ok(s.reduce(v))
}

// ---------------------------------------------------------------- elimination

trait Ring {
    type E: Clone;
    fn convert(&self, v: &SparseVec) -> Vec<(usize, Self::E)>;
    /// Kills `v[pos]` with `pivot`, whose leading column equals `v[pos].0`.
    fn eliminate(&self, v: &[(usize, Self::E)], pos: usize, pivot: &[(usize, Self::E)]) -> Vec<(usize, Self::E)>;
    fn tidy(&self, v: &mut Vec<(usize, Self::E)>);
    fn to_scalars(&self, v: &[(usize, Self::E)]) -> SparseVec;
}

struct IntRing;

impl Ring for IntRing {
    type E = BigInt;

    fn convert(&self, v: &SparseVec) -> Vec<(usize, BigInt)> {
        let mut l = BigInt::one();
        for (_, x) in v {
            l = l.lcm(x.as_rational().expect("rational").denom());
        }
        v.iter()
            .map(|(i, x)| {
                let q = x.as_rational().unwrap();
                (*i, q.numer() * (&l / q.denom()))
            })
            .collect()
    }

    fn eliminate(&self, v: &[(usize, BigInt)], pos: usize, pivot: &[(usize, BigInt)]) -> Vec<(usize, BigInt)> {
        let a = &pivot[0].1;
        let b = &v[pos].1;
        let g = a.gcd(b);
        let (a, b) = (a / &g, b / &g);
        let mut out = Vec::with_capacity(v.len() + pivot.len());
        let (mut i, mut j) = (0, 0);
        while i < v.len() || j < pivot.len() {
            if j >= pivot.len() || (i < v.len() && v[i].0 < pivot[j].0) {
                out.push((v[i].0, &a * &v[i].1));
                i += 1;
            } else if i >= v.len() || pivot[j].0 < v[i].0 {
                out.push((pivot[j].0, -(&b * &pivot[j].1)));
                j += 1;
            } else {
                let x = &a * &v[i].1 - &b * &pivot[j].1;
                if !x.is_zero() {
                    out.push((v[i].0, x));
                }
                i += 1;
                j += 1;
            }
        }
        out
    }

    fn tidy(&self, v: &mut Vec<(usize, BigInt)>) {
        if v.is_empty() {
            return;
        }
        let mut g = BigInt::zero();
        for (_, x) in v.iter() {
            g = g.gcd(x);
            if g.is_one() {
                break;
            }
        }
        if v[0].1.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for (_, x) in v.iter_mut() {
                *x = &*x / &g;
            }
        }
    }

    fn to_scalars(&self, v: &[(usize, BigInt)]) -> SparseVec {
        let lead = v[0].1.clone();
        v.iter()
            .map(|(i, x)| (*i, Scalar::Q(BigRational::new(x.clone(), lead.clone()))))
            .collect()
    }
}

struct ModRing(u64);

impl Ring for ModRing {
    type E = u64;

    fn convert(&self, v: &SparseVec) -> Vec<(usize, u64)> {
        v.iter()
            .map(|(i, x)| match x {
                Scalar::F { v, .. } => (*i, *v),
                _ => mixed(),
            })
            .collect()
    }

    fn eliminate(&self, v: &[(usize, u64)], pos: usize, pivot: &[(usize, u64)]) -> Vec<(usize, u64)> {
        // pivot rows are monic
        let p = self.0;
        let c = p - v[pos].1;
        let mut out = Vec::with_capacity(v.len() + pivot.len());
        let (mut i, mut j) = (0, 0);
        while i < v.len() || j < pivot.len() {
            if j >= pivot.len() || (i < v.len() && v[i].0 < pivot[j].0) {
                out.push(v[i]);
                i += 1;
            } else if i >= v.len() || pivot[j].0 < v[i].0 {
                out.push((pivot[j].0, c * pivot[j].1 % p));
                j += 1;
            } else {
                let x = (v[i].1 + c * pivot[j].1) % p;
                if x != 0 {
                    out.push((v[i].0, x));
                }
                i += 1;
                j += 1;
            }
        }
        out
    }

    fn tidy(&self, v: &mut Vec<(usize, u64)>) {
        if let Some(&(_, lead)) = v.first() {
            if lead != 1 {
                let inv = inv_mod(lead, self.0);
                for (_, x) in v.iter_mut() {
                    *x = *x * inv % self.0;
                }
            }
        }
    }

    fn to_scalars(&self, v: &[(usize, u64)]) -> SparseVec {
        v.iter()
            .map(|(i, x)| (*i, Scalar::F { v: *x, p: self.0 }))
            .collect()
    }
}

fn echelon_reduced<R: Ring>(ring: &R, vectors: &[&SparseVec]) -> Vec<SparseVec> {
    let mut rows: Vec<Vec<(usize, R::E)>> = Vec::new();
    let mut pivot_of: HashMap<usize, usize> = HashMap::new();
    for v in vectors {
        let mut w = ring.convert(v);
        let mut i = 0;
        while i < w.len() {
            if let Some(&r) = pivot_of.get(&w[i].0) {
                w = ring.eliminate(&w, i, &rows[r]);
                ring.tidy(&mut w);
            } else {
                i += 1;
            }
        }
        if !w.is_empty() {
            ring.tidy(&mut w);
            pivot_of.insert(w[0].0, rows.len());
            rows.push(w);
        }
    }
    // back substitution, largest pivot first
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by_key(|&r| std::cmp::Reverse(rows[r][0].0));
    for &r in &order {
        let mut w = std::mem::take(&mut rows[r]);
        let mut i = 1;
        while i < w.len() {
            match pivot_of.get(&w[i].0) {
                Some(&s) if s != r => {
                    w = ring.eliminate(&w, i, &rows[s]);
                    ring.tidy(&mut w);
                }
                _ => i += 1,
            }
        }
        rows[r] = w;
    }
    rows.iter().map(|w| ring.to_scalars(w)).collect()
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let n = self.0[y];
            self.0[y] = r;
            y = n;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra] = rb;
        }
    }
}

/// Reduced row-echelon basis of the span of `vectors`.
///
/// Vectors are split into groups with connected supports and each group is
/// eliminated on its own.
pub fn rref(field: Field, vectors: &[SparseVec], ambient: usize) -> Subspace {
    let mut dsu = Dsu((0..ambient).collect());
    for v in vectors {
        for w in v.windows(2) {
            dsu.union(w[0].0, w[1].0);
        }
    }
    let mut groups: HashMap<usize, Vec<&SparseVec>> = HashMap::new();
    for v in vectors.iter().filter(|v| !v.is_empty()) {
        let root = dsu.find(v[0].0);
        groups.entry(root).or_default().push(v);
    }
    let mut keys: Vec<usize> = groups.keys().copied().collect();
    keys.sort_unstable();
    let mut rows = Vec::new();
    for k in keys {
        let g = &groups[&k];
        rows.extend(match field {
            Field::Rational => echelon_reduced(&IntRing, g),
            Field::Prime(p) => echelon_reduced(&ModRing(p), g),
        });
    }
    Subspace::from_rows(field, ambient, rows)
}

pub fn rank(field: Field, vectors: &[SparseVec], ambient: usize) -> usize {
    rref(field, vectors, ambient).dim()
}

/// Kernel and image of `M`, both as RREF subspaces.
pub fn kernel_image(m: &ExactMatrix) -> Result<(Subspace, Subspace)> {
    for col in m.columns() {
        if col.iter().any(|(_, x)| !m.field.contains(x)) {
            return Err(Error::usage("mixed scalar kinds in one matrix"));
        }
    }
    let image = rref(m.field, m.columns(), m.nrows);
    let kernel = kernel_of(m);
    Ok((kernel, image))
}

pub fn kernel_of(m: &ExactMatrix) -> Subspace {
    let r = rref(m.field, &m.rows(), m.ncols);
    let mut by_col: HashMap<usize, Vec<(usize, Scalar)>> = HashMap::new();
    for row in r.rows() {
        let piv = row[0].0;
        for (c, x) in &row[1..] {
            by_col.entry(*c).or_default().push((piv, x.clone()));
        }
    }
    let mut basis = Vec::new();
    for f in 0..m.ncols {
        if r.is_pivot(f) {
            continue;
        }
        let mut v: Vec<(usize, Scalar)> = vec![(f, m.field.one())];
        if let Some(entries) = by_col.get(&f) {
            v.extend(entries.iter().map(|(piv, x)| (*piv, -x)));
        }
        basis.push(normalize_sparse(v));
    }
    rref(m.field, &basis, m.ncols)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::Q(BigRational::new(n.into(), d.into()))
    }

    #[test]
    fn scalar_arithmetic() {
        assert_eq!(&q(1, 2) + &q(1, 3), q(5, 6));
        assert_eq!(q(2, 4), q(1, 2));
        let f = Field::Prime(5);
        assert_eq!(f.from_i64(-1), Scalar::F { v: 4, p: 5 });
        assert_eq!(f.from_i64(3).inv(), f.from_i64(2));
        assert_eq!(Field::parse("fp:7").unwrap(), Field::Prime(7));
        assert!(Field::parse("fp:8").is_err());
        assert!(Field::parse("reals").is_err());
    }

    #[test]
    #[should_panic(expected = "mixed scalar kinds")]
    fn mixing_panics() {
        let _ = &q(1, 1) + &Field::Prime(3).one();
    }

    #[test]
    fn identity_and_zero() {
        let id = ExactMatrix::from_dense(Field::Rational, &[vec![1, 0], vec![0, 1]]);
        let (k, i) = kernel_image(&id).unwrap();
        assert_eq!((k.dim(), i.dim()), (0, 2));
        let z = ExactMatrix::zero(Field::Rational, 3, 4);
        let (k, i) = kernel_image(&z).unwrap();
        assert_eq!((k.dim(), i.dim()), (4, 0));
    }

    #[test]
    fn kernel_vectors_annihilated() {
        let m = ExactMatrix::from_dense(
            Field::Rational,
            &[vec![1, 2, 3, 4], vec![2, 4, 6, 8], vec![0, 1, -1, 2]],
        );
        let (k, i) = kernel_image(&m).unwrap();
        assert_eq!(k.dim() + i.dim(), 4);
        for v in k.rows() {
            assert!(m.apply(v).is_empty());
        }
    }

    #[test]
    fn rref_shape() {
        let f = Field::Rational;
        let vs = vec![
            vec![(0, f.from_i64(2)), (2, f.from_i64(4))],
            vec![(0, f.from_i64(1)), (1, f.from_i64(1))],
        ];
        let s = rref(f, &vs, 3);
        assert_eq!(s.pivots(), vec![0, 1]);
        assert_eq!(s.rows()[0], vec![(0, f.one()), (2, f.from_i64(2))]);
        assert_eq!(s.rows()[1], vec![(1, f.one()), (2, f.from_i64(-2))]);
        let r = coset_reduce(&vec![(0, f.one())], &s).unwrap();
        assert_eq!(r, vec![(2, f.from_i64(-2))]);
        assert!(coset_reduce(&vec![(5, f.one())], &s).is_err());
    }
}
