use hhsg::quiver::{classify, compose, enumerate_paths, parallel_pairs, parse_quiver, PairBasis, Quiver};
use hhsg::Error;
use proptest::prelude::*;

fn quiver() -> impl Strategy<Value = Quiver> {
    (1usize..4).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..6).prop_map(move |arrows| {
            let vs: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
            let ars: Vec<(String, String, String)> = arrows
                .iter()
                .enumerate()
                .map(|(i, (s, t))| (format!("x{i}"), vs[*s].clone(), vs[*t].clone()))
                .collect();
            Quiver::new(&vs, &ars).unwrap()
        })
    })
}

fn adjacency_power(q: &Quiver, n: usize) -> Vec<Vec<u128>> {
    let k = q.num_vertices();
    let mut adj = vec![vec![0u128; k]; k];
    for a in q.arrows() {
        adj[a.source][a.target] += 1;
    }
    let mut out = vec![vec![0u128; k]; k];
    for (i, row) in out.iter_mut().enumerate() {
        row[i] = 1;
    }
    for _ in 0..n {
        let mut next = vec![vec![0u128; k]; k];
        for i in 0..k {
            for j in 0..k {
                for l in 0..k {
                    next[i][j] += out[i][l] * adj[l][j];
                }
            }
        }
        out = next;
    }
    out
}

#[test]
fn example_file_parses() {
    let q = parse_quiver(include_str!("../quivers/leel.q")).unwrap();
    assert_eq!((q.num_vertices(), q.num_arrows()), (3, 4));
    let c = classify(&q);
    assert!(c.connected && !c.has_source_or_sink && c.crown_order.is_none() && !c.acyclic);
}

#[test]
fn parse_errors() {
    for (text, line) in [
        ("vertices: u\narrow a: u -> w\n", 2),
        ("vertices: u\n\nfoo\n", 3),
        ("vertices: u u\n", 1),
        ("arrow a: u -> u\n", 1),
    ] {
        match parse_quiver(text) {
            Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
            other => panic!("{text:?} gave {other:?}"),
        }
    }
}

#[test]
fn stored_order_composition() {
    let q = Quiver::linear(3);
    let e1 = q.arrow_path(0);
    let e2 = q.arrow_path(1);
    // e2 after e1 is written e2*e1
    let p = compose(&e2, &e1).unwrap().unwrap();
    assert_eq!(q.display_path(&p), "e2*e1");
    assert!(compose(&e1, &e2).unwrap().is_none());
    assert!(compose(&e1, &Quiver::linear(3).arrow_path(0)).is_err());
}

#[test]
fn classification() {
    assert_eq!(classify(&Quiver::crown(4)).crown_order, Some(4));
    assert_eq!(classify(&Quiver::one_loop()).crown_order, Some(1));
    assert!(classify(&Quiver::linear(2)).has_source_or_sink);
    assert!(classify(&Quiver::linear(3)).acyclic);
    assert_eq!(classify(&Quiver::two_loops()).crown_order, None);
}

proptest! {
    #[test]
    fn path_counts_are_adjacency_powers(q in quiver(), n in 0usize..5) {
        let counts = q.path_counts(n);
        prop_assert_eq!(&counts, &adjacency_power(&q, n));
        let total: u128 = counts.iter().flatten().sum();
        prop_assert_eq!(total, enumerate_paths(&q, n).len() as u128);
    }

    #[test]
    fn pairs_are_parallel_and_counted(q in quiver(), m in 0usize..4, p in 0usize..4) {
        let pairs = parallel_pairs(&q, m, p);
        prop_assert_eq!(pairs.len() as u128, q.count_pairs(m, p));
        let basis = PairBasis::new(&q, m, p);
        for (i, pair) in pairs.iter().enumerate() {
            prop_assert!(pair.0.is_parallel(&pair.1));
            prop_assert_eq!((pair.0.len(), pair.1.len()), (m, p));
            prop_assert_eq!(basis.index_of(pair), Some(i));
        }
        prop_assert!(pairs.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn display_roundtrip(q in quiver()) {
        let back = parse_quiver(&q.to_string()).unwrap();
        prop_assert_eq!(back.to_string(), q.to_string());
    }

    #[test]
    fn prepend_append_lengths(q in quiver(), n in 0usize..4) {
        for g in enumerate_paths(&q, n) {
            for a in 0..q.num_arrows() {
                if let Some(h) = q.prepend(a, &g) {
                    prop_assert_eq!(h.len(), n + 1);
                    prop_assert_eq!(h.source(), g.source());
                }
                if let Some(h) = q.append(&g, a) {
                    prop_assert_eq!(h.len(), n + 1);
                    prop_assert_eq!(h.target(), g.target());
                }
            }
        }
    }
}
