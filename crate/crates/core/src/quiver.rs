//! Finite quivers, their paths and parallel-pair bases.
//!
//! Paths are stored in written order `a_1 a_2 ... a_n` with `s(a_i) = t(a_{i+1})`,
//! so the source of a path is the source of its last arrow and the target is the
//! target of its first arrow.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering};

use crate::error::{Error, Result};

static NEXT_QUIVER_ID: AtomicU32 = AtomicU32::new(1);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug)]
pub struct Quiver {
    id: u32,
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    vertex_index: HashMap<String, usize>,
    arrow_index: HashMap<String, usize>,
}

impl PartialEq for Quiver {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}
impl Eq for Quiver {}

/// A path of length `n`; for `n = 0` the trivial path `e_v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    arrows: Vec<usize>,
    source: usize,
    target: usize,
    qid: u32,
}

/// A pair `(γ, β)` of parallel paths.
pub type ParallelPair = (Path, Path);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverClassification {
    pub connected: bool,
    pub has_source_or_sink: bool,
    pub crown_order: Option<usize>,
    pub acyclic: bool,
}

fn valid_ident(s: &str) -> bool {
    // digit-led ids are accepted too, so crown files may number their vertices
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Quiver {
    /// Builds a quiver from vertex names and `(name, source, target)` arrow triples.
    pub fn new<S: AsRef<str>>(vertices: &[S], arrows: &[(S, S, S)]) -> Result<Quiver> {
        let mut b = Builder::default();
        for v in vertices {
            b.vertex(v.as_ref()).map_err(Error::Input)?;
        }
        for (a, s, t) in arrows {
            b.arrow(a.as_ref(), s.as_ref(), t.as_ref()).map_err(Error::Input)?;
        }
        b.finish().map_err(Error::Input)
    }

    pub fn id(&self) -> u32 {
        self.id
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn arrow(&self, a: usize) -> &Arrow {
        &self.arrows[a]
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<usize> {
        self.vertex_index.get(name).copied()
    }

    pub fn arrow_by_name(&self, name: &str) -> Option<usize> {
        self.arrow_index.get(name).copied()
    }

    /// One vertex with `r` loops named `a`, `b`, ... (or `x1..xr` past 26).
    pub fn loops(r: usize) -> Quiver {
        let names: Vec<String> = (0..r)
            .map(|i| {
                if r <= 26 {
                    ((b'a' + i as u8) as char).to_string()
                } else {
                    format!("x{}", i + 1)
                }
            })
            .collect();
        let arrows: Vec<(String, String, String)> = names
            .into_iter()
            .map(|n| (n, "v".to_string(), "v".to_string()))
            .collect();
        Quiver::new(&["v".to_string()], &arrows).expect("well-formed")
    }

    pub fn one_loop() -> Quiver {
        Quiver::loops(1)
    }

    pub fn two_loops() -> Quiver {
        Quiver::loops(2)
    }

    /// The c-crown: vertices `0..c`, arrows `a_i : i -> i+1 mod c`.
    pub fn crown(c: usize) -> Quiver {
        let vs: Vec<String> = (0..c).map(|i| format!("v{i}")).collect();
        let arrows: Vec<(String, String, String)> = (0..c)
            .map(|i| (format!("a{i}"), format!("v{i}"), format!("v{}", (i + 1) % c)))
            .collect();
        Quiver::new(&vs, &arrows).expect("well-formed")
    }

    /// The linear quiver `v1 -> v2 -> ... -> vn`.
    pub fn linear(n: usize) -> Quiver {
        let vs: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
        let arrows: Vec<(String, String, String)> = (1..n)
            .map(|i| (format!("e{i}"), format!("v{i}"), format!("v{}", i + 1)))
            .collect();
        Quiver::new(&vs, &arrows).expect("well-formed")
    }

    /// A loop at `u`, edges `u -> v -> w`, a loop at `w`.
    pub fn loop_edge_edge_loop() -> Quiver {
        Quiver::new(
            &["u", "v", "w"],
            &[
                ("a", "u", "u"),
                ("c", "u", "v"),
                ("d", "v", "w"),
                ("b", "w", "w"),
            ],
        )
        .expect("well-formed")
    }

    pub fn trivial_path(&self, v: usize) -> Path {
        assert!(v < self.vertices.len(), "vertex index out of range");
        Path {
            arrows: Vec::new(),
            source: v,
            target: v,
            qid: self.id,
        }
    }

    pub fn arrow_path(&self, a: usize) -> Path {
        let ar = &self.arrows[a];
        Path {
            arrows: vec![a],
            source: ar.source,
            target: ar.target,
            qid: self.id,
        }
    }

    /// Builds a path from arrow indices in written order, checking adjacency.
    pub fn path(&self, arrows: &[usize]) -> Option<Path> {
        let first = *arrows.first()?;
        for w in arrows.windows(2) {
            if self.arrows[w[0]].source != self.arrows[w[1]].target {
                return None;
            }
        }
        Some(Path {
            arrows: arrows.to_vec(),
            source: self.arrows[*arrows.last().unwrap()].source,
            target: self.arrows[first].target,
            qid: self.id,
        })
    }

    /// Like [`Quiver::path`], but a leading marker vertex is allowed for the empty word.
    pub fn path_or_trivial(&self, arrows: &[usize], vertex: usize) -> Option<Path> {
        if arrows.is_empty() {
            Some(self.trivial_path(vertex))
        } else {
            self.path(arrows)
        }
    }

    pub fn path_by_names(&self, names: &[&str]) -> Option<Path> {
        let ids: Option<Vec<usize>> = names.iter().map(|n| self.arrow_by_name(n)).collect();
        self.path(&ids?)
    }

    /// `aγ`, defined when `s(a) = t(γ)`.
    pub fn prepend(&self, a: usize, g: &Path) -> Option<Path> {
        let ar = &self.arrows[a];
        if ar.source != g.target {
            return None;
        }
        let mut arrows = Vec::with_capacity(g.arrows.len() + 1);
        arrows.push(a);
        arrows.extend_from_slice(&g.arrows);
        Some(Path {
            arrows,
            source: g.source,
            target: ar.target,
            qid: self.id,
        })
    }

    /// `γa`, defined when `s(γ) = t(a)`.
    pub fn append(&self, g: &Path, a: usize) -> Option<Path> {
        let ar = &self.arrows[a];
        if ar.target != g.source {
            return None;
        }
        let mut arrows = g.arrows.clone();
        arrows.push(a);
        Some(Path {
            arrows,
            source: ar.source,
            target: g.target,
            qid: self.id,
        })
    }

    /// Number of paths of length `n` from `u` to `v`, as `counts[u][v]`.
    pub fn path_counts(&self, n: usize) -> Vec<Vec<u128>> {
        let k = self.vertices.len();
        let mut cur = vec![vec![0u128; k]; k];
        for (v, row) in cur.iter_mut().enumerate() {
            row[v] = 1;
        }
        for _ in 0..n {
            let mut next = vec![vec![0u128; k]; k];
            for (u, row) in cur.iter().enumerate() {
                for (w, &c) in row.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    for ar in &self.arrows {
                        if ar.source == w {
                            next[u][ar.target] = next[u][ar.target].saturating_add(c);
                        }
                    }
                }
            }
            cur = next;
        }
        cur
    }

    /// `|Q_m // Q_p|` without enumerating.
    pub fn count_pairs(&self, m: usize, p: usize) -> u128 {
        let a = self.path_counts(m);
        let b = self.path_counts(p);
        let mut total: u128 = 0;
        for (ra, rb) in a.iter().zip(b.iter()) {
            for (x, y) in ra.iter().zip(rb.iter()) {
                total = total.saturating_add(x.saturating_mul(*y));
            }
        }
        total
    }

    pub fn display_path(&self, p: &Path) -> String {
        if p.arrows.is_empty() {
            format!("e({})", self.vertices[p.source])
        } else {
            p.arrows
                .iter()
                .map(|&a| self.arrows[a].name.as_str())
                .collect::<Vec<_>>()
                .join("*")
        }
    }

    pub fn display_pair(&self, pair: &ParallelPair) -> String {
        format!(
            "({}|{})",
            self.display_path(&pair.0),
            self.display_path(&pair.1)
        )
    }
}

impl Path {
    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn arrows(&self) -> &[usize] {
        &self.arrows
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn quiver_id(&self) -> u32 {
        self.qid
    }

    pub fn is_parallel(&self, other: &Path) -> bool {
        self.source == other.source && self.target == other.target
    }
}

/// Concatenation `pq`; zero (None) unless `t(q) = s(p)`.
pub fn compose(p: &Path, q: &Path) -> Result<Option<Path>> {
    if p.qid != q.qid {
        return Err(Error::usage("paths from different quivers"));
    }
    if q.target != p.source {
        return Ok(None);
    }
    let mut arrows = p.arrows.clone();
    arrows.extend_from_slice(&q.arrows);
    Ok(Some(Path {
        arrows,
        source: q.source,
        target: p.target,
        qid: p.qid,
    }))
}

/// All paths of length `n` in lexicographic order of arrow indices.
pub fn enumerate_paths(q: &Quiver, n: usize) -> Vec<Path> {
    if n == 0 {
        return (0..q.num_vertices()).map(|v| q.trivial_path(v)).collect();
    }
    let mut cur: Vec<Path> = (0..q.num_arrows()).map(|a| q.arrow_path(a)).collect();
    for _ in 1..n {
        let mut next = Vec::new();
        for p in &cur {
            for a in 0..q.num_arrows() {
                if let Some(x) = q.append(p, a) {
                    next.push(x);
                }
            }
        }
        cur = next;
    }
    cur
}

/// All parallel pairs in `Q_m // Q_p`, ordered by `(γ, β)`.
pub fn parallel_pairs(q: &Quiver, m: usize, p: usize) -> Vec<ParallelPair> {
    let mut by_ends: BTreeMap<(usize, usize), Vec<Path>> = BTreeMap::new();
    for b in enumerate_paths(q, p) {
        by_ends.entry((b.source, b.target)).or_default().push(b);
    }
    let mut out = Vec::new();
    for g in enumerate_paths(q, m) {
        if let Some(bs) = by_ends.get(&(g.source, g.target)) {
            for b in bs {
                out.push((g.clone(), b.clone()));
            }
        }
    }
    out
}

/// An ordered basis of `k(Q_m // Q_p)` with reverse lookup.
#[derive(Clone, Debug)]
pub struct PairBasis {
    pub m: usize,
    pub p: usize,
    pairs: Vec<ParallelPair>,
    index: HashMap<ParallelPair, usize>,
}

impl PairBasis {
    pub fn new(q: &Quiver, m: usize, p: usize) -> PairBasis {
        let pairs = parallel_pairs(q, m, p);
        let index = pairs
            .iter()
            .enumerate()
            .map(|(i, x)| (x.clone(), i))
            .collect();
        PairBasis { m, p, pairs, index }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[ParallelPair] {
        &self.pairs
    }

    pub fn get(&self, i: usize) -> &ParallelPair {
        &self.pairs[i]
    }

    pub fn index_of(&self, pair: &ParallelPair) -> Option<usize> {
        self.index.get(pair).copied()
    }
}

pub fn classify(q: &Quiver) -> QuiverClassification {
    let n = q.num_vertices();
    let mut adj = vec![Vec::new(); n];
    let mut outdeg = vec![0usize; n];
    let mut indeg = vec![0usize; n];
    for ar in q.arrows() {
        adj[ar.source].push(ar.target);
        adj[ar.target].push(ar.source);
        outdeg[ar.source] += 1;
        indeg[ar.target] += 1;
    }
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    let connected = seen.iter().all(|&s| s);
    let has_source_or_sink = (0..n).any(|v| outdeg[v] == 0 || indeg[v] == 0);

    let crown_order = if n == q.num_arrows() && (0..n).all(|v| outdeg[v] == 1 && indeg[v] == 1) {
        // follow the unique outgoing arrow from vertex 0
        let mut visited = HashSet::new();
        let mut v = 0;
        while visited.insert(v) {
            v = q.arrows().iter().find(|a| a.source == v).unwrap().target;
        }
        (visited.len() == n && v == 0).then_some(n)
    } else {
        None
    };

    // Kahn's algorithm
    let mut deg = indeg.clone();
    let mut stack: Vec<usize> = (0..n).filter(|&v| deg[v] == 0).collect();
    let mut removed = 0;
    while let Some(v) = stack.pop() {
        removed += 1;
        for ar in q.arrows().iter().filter(|a| a.source == v) {
            deg[ar.target] -= 1;
            if deg[ar.target] == 0 {
                stack.push(ar.target);
            }
        }
    }
    QuiverClassification {
        connected,
        has_source_or_sink,
        crown_order,
        acyclic: removed == n,
    }
}

#[derive(Default)]
struct Builder {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    vertex_index: HashMap<String, usize>,
    arrow_index: HashMap<String, usize>,
}

impl Builder {
    fn vertex(&mut self, name: &str) -> std::result::Result<(), String> {
        if !valid_ident(name) {
            return Err(format!("invalid identifier '{name}'"));
        }
        if self.vertex_index.contains_key(name) {
            return Err(format!("duplicate vertex {name}"));
        }
        self.vertex_index.insert(name.to_string(), self.vertices.len());
        self.vertices.push(name.to_string());
        Ok(())
    }

    fn arrow(&mut self, name: &str, s: &str, t: &str) -> std::result::Result<(), String> {
        if !valid_ident(name) {
            return Err(format!("invalid identifier '{name}'"));
        }
        if self.arrow_index.contains_key(name) {
            return Err(format!("duplicate arrow {name}"));
        }
        let source = *self
            .vertex_index
            .get(s)
            .ok_or_else(|| format!("undeclared vertex {s}"))?;
        let target = *self
            .vertex_index
            .get(t)
            .ok_or_else(|| format!("undeclared vertex {t}"))?;
        self.arrow_index.insert(name.to_string(), self.arrows.len());
        self.arrows.push(Arrow {
            name: name.to_string(),
            source,
            target,
        });
        Ok(())
    }

    fn finish(self) -> std::result::Result<Quiver, String> {
        if self.vertices.is_empty() {
            return Err("no vertices declared".into());
        }
        Ok(Quiver {
            id: NEXT_QUIVER_ID.fetch_add(1, Ordering::Relaxed),
            vertices: self.vertices,
            arrows: self.arrows,
            vertex_index: self.vertex_index,
            arrow_index: self.arrow_index,
        })
    }
}

/// Parses the quiver file format:
///
/// ```text
/// # comment
/// vertices: u v
/// arrow a: u -> v
/// ```
pub fn parse_quiver(text: &str) -> Result<Quiver> {
    let mut b = Builder::default();
    let mut saw_vertices = false;
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| Error::Parse { line: line_no, msg };
        if let Some(rest) = line.strip_prefix("vertices:") {
            if saw_vertices {
                return Err(err("duplicate vertices block".into()));
            }
            saw_vertices = true;
            for v in rest.split_whitespace() {
                b.vertex(v).map_err(err)?;
            }
        } else if let Some(rest) = line.strip_prefix("arrow") {
            if !rest.starts_with(char::is_whitespace) {
                return Err(err(format!("syntax error: '{line}'")));
            }
            let (name, ends) = rest
                .split_once(':')
                .ok_or_else(|| err("syntax error: expected ':' after arrow id".into()))?;
            let (s, t) = ends
                .split_once("->")
                .ok_or_else(|| err("syntax error: expected '->'".into()))?;
            b.arrow(name.trim(), s.trim(), t.trim()).map_err(err)?;
        } else {
            return Err(err(format!("syntax error: '{line}'")));
        }
    }
    b.finish().map_err(|msg| Error::Parse {
        line: last_line.max(1),
        msg,
    })
}

impl fmt::Display for Quiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vertices: {}", self.vertices.join(" "))?;
        for ar in &self.arrows {
            writeln!(
                f,
                "arrow {}: {} -> {}",
                ar.name, self.vertices[ar.source], self.vertices[ar.target]
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_one_loop() {
        let q = parse_quiver("vertices: v\narrow a: v -> v").unwrap();
        assert_eq!(q.num_vertices(), 1);
        assert_eq!(q.num_arrows(), 1);
        assert_eq!(classify(&q).crown_order, Some(1));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let e = parse_quiver("arrow a: v -> w").unwrap_err();
        assert_eq!(
            e,
            Error::Parse {
                line: 1,
                msg: "undeclared vertex v".into()
            }
        );
        let e = parse_quiver("vertices: v v").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));
        let e = parse_quiver("# c\nvertices: v\narrow a: v -> v\narrow a: v -> v").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 4, .. }));
        let e = parse_quiver("vertices: v\nedge a: v -> v").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        assert!(parse_quiver("# nothing\n").is_err());
    }

    #[test]
    fn crown_file() {
        let q = parse_quiver("vertices: 0 1\narrow a0: 0 -> 1\narrow a1: 1 -> 0").unwrap();
        assert_eq!(classify(&q).crown_order, Some(2));
        assert!(parse_quiver("vertices: v-1").is_err());
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate_paths(&Quiver::one_loop(), 3).len(), 1);
        let two = Quiver::two_loops();
        let p2 = enumerate_paths(&two, 2);
        let names: Vec<String> = p2.iter().map(|p| two.display_path(p)).collect();
        assert_eq!(names, ["a*a", "a*b", "b*a", "b*b"]);
        assert_eq!(enumerate_paths(&Quiver::crown(3), 5).len(), 3);
        assert_eq!(parallel_pairs(&two, 2, 1).len(), 8);
        assert!(parallel_pairs(&Quiver::crown(2), 1, 2).is_empty());
        for m in 0..4 {
            assert_eq!(parallel_pairs(&Quiver::one_loop(), m, m + 2).len(), 1);
        }
    }

    #[test]
    fn compose_rules() {
        let two = Quiver::two_loops();
        let a = two.arrow_path(0);
        let b = two.arrow_path(1);
        let ab = compose(&a, &b).unwrap().unwrap();
        assert_eq!(two.display_path(&ab), "a*b");
        let e = two.trivial_path(0);
        assert_eq!(compose(&e, &a).unwrap().unwrap(), a);
        assert_eq!(compose(&a, &e).unwrap().unwrap(), a);
        let c2 = Quiver::crown(2);
        let a0 = c2.arrow_path(0);
        assert_eq!(compose(&a0, &a0).unwrap(), None);
        assert!(compose(&a0, &a).is_err());
    }

    #[test]
    fn classification_examples() {
        let c4 = classify(&Quiver::crown(4));
        assert_eq!(c4.crown_order, Some(4));
        assert!(!c4.has_source_or_sink && !c4.acyclic && c4.connected);
        let t = classify(&Quiver::two_loops());
        assert!(t.connected && !t.has_source_or_sink && t.crown_order.is_none());
        let l = classify(&Quiver::linear(2));
        assert!(l.acyclic && l.has_source_or_sink);
        let leel = classify(&Quiver::loop_edge_edge_loop());
        assert!(leel.connected && !leel.has_source_or_sink && leel.crown_order.is_none());
    }
}
