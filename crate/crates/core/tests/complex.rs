use hhsg::complex::{
    apply_d, apply_e, build_d, cohomology, cohomology_guarded, sg_dimension, theta_matrix, PairVector, SgConfig,
};
use hhsg::exactla::{kernel_image, Field};
use hhsg::quiver::{PairBasis, Quiver};
use hhsg::Error;
use proptest::prelude::*;

fn quiver() -> impl Strategy<Value = Quiver> {
    (1usize..4).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 1..5).prop_map(move |arrows| {
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

fn examples() -> Vec<Quiver> {
    vec![
        Quiver::one_loop(),
        Quiver::two_loops(),
        Quiver::crown(2),
        Quiver::crown(3),
        Quiver::linear(3),
        Quiver::loop_edge_edge_loop(),
    ]
}

#[test]
fn blocks_follow_rank_nullity() {
    let f = Field::Rational;
    for q in examples() {
        for m in 0..4 {
            for p in 0..4 {
                let h = cohomology(&q, m, p, f);
                let pairs_hi = q.count_pairs(m, p + 1) as usize;
                let pairs_lo = q.count_pairs(m, p) as usize;
                let img = if m == 0 { 0 } else { build_d(&q, m - 1, p, f).rank() };
                assert_eq!(h.quotient_dim(), pairs_hi - img, "{q} ({m},{p})");
                assert_eq!(h.kernel_dim(), pairs_lo - build_d(&q, m, p, f).rank());
            }
        }
    }
}

#[test]
fn class_coordinates_are_unit_vectors() {
    let f = Field::Rational;
    for q in examples() {
        let h = cohomology(&q, 2, 1, f);
        for (i, c) in h.basis().iter().enumerate() {
            let coords = h.coordinates(c);
            for (j, x) in coords.iter().enumerate() {
                assert_eq!(x.is_one(), i == j);
                assert!(i == j || x.is_zero());
            }
        }
    }
}

#[test]
fn non_cocycle_is_refused() {
    let q = Quiver::two_loops();
    let f = Field::Rational;
    let h = cohomology(&q, 1, 1, f);
    let (a, b) = (q.arrow_path(0), q.arrow_path(1));
    let quotient = PairVector::zero(f, 1, 2);
    let kernel = PairVector::single(f, (a, b));
    assert_eq!(h.class_of(&quotient, &kernel), Err(Error::NotCocycle { m: 1, p: 1 }));
}

#[test]
fn guard_refuses_large_spaces() {
    let q = Quiver::loops(3);
    assert!(matches!(
        cohomology_guarded(&q, 6, 6, Field::Rational, 1000),
        Err(Error::Resource { .. })
    ));
    let cfg = SgConfig {
        guard: 1000,
        ..SgConfig::default()
    };
    assert!(matches!(sg_dimension(&q, 0, &cfg), Err(Error::Resource { .. })));
}

#[test]
fn prime_fields_agree_on_examples() {
    for q in examples() {
        for (m, p) in [(1, 0), (2, 1), (3, 2), (1, 3)] {
            let a = cohomology(&q, m, p, Field::Rational).dim();
            let b = cohomology(&q, m, p, Field::prime(7).unwrap()).dim();
            assert_eq!(a, b);
        }
    }
}

#[test]
fn stabilization_is_deterministic() {
    let q = Quiver::loop_edge_edge_loop();
    let cfg = SgConfig {
        p_max: 6,
        ..SgConfig::default()
    };
    let a = serde_json::to_string(&sg_dimension(&q, -1, &cfg).unwrap()).unwrap();
    let b = serde_json::to_string(&sg_dimension(&q, -1, &cfg).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn window_and_pmax_are_checked() {
    let q = Quiver::one_loop();
    let cfg = SgConfig {
        window: 3,
        p_max: 3,
        ..SgConfig::default()
    };
    assert!(matches!(sg_dimension(&q, 0, &cfg), Err(Error::Usage(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn e_commutes_with_d(q in quiver(), m in 0usize..4, p in 0usize..4) {
        let f = Field::Rational;
        for pair in PairBasis::new(&q, m, p).pairs() {
            let v = PairVector::single(f, pair.clone());
            prop_assert_eq!(apply_d(&q, &apply_e(&q, &v)), apply_e(&q, &apply_d(&q, &v)));
        }
    }

    #[test]
    fn e_is_well_defined_on_blocks(q in quiver(), m in 1usize..4, p in 0usize..3) {
        let f = Field::Rational;
        let src = cohomology(&q, m, p, f);
        let dst = cohomology(&q, m + 1, p + 1, f);
        for v in src.kernel_vectors() {
            prop_assert!(dst.is_cocycle(&apply_e(&q, &v)).unwrap());
        }
        let (_, img) = kernel_image(&build_d(&q, m - 1, p, f)).unwrap();
        let basis = PairBasis::new(&q, m, p + 1);
        for row in img.rows() {
            let v = PairVector::from_sparse(f, &basis, row);
            prop_assert!(dst.is_coboundary(&apply_e(&q, &v)).unwrap());
        }
        let t = theta_matrix(&q, &src, &dst).unwrap();
        prop_assert_eq!((t.nrows(), t.ncols()), (dst.dim(), src.dim()));
    }

    #[test]
    fn d_and_matrix_agree(q in quiver(), m in 0usize..3, p in 0usize..3) {
        let f = Field::Rational;
        let d = build_d(&q, m, p, f);
        let src = PairBasis::new(&q, m, p);
        let dst = PairBasis::new(&q, m + 1, p + 1);
        for (j, pair) in src.pairs().iter().enumerate() {
            let v = apply_d(&q, &PairVector::single(f, pair.clone()));
            prop_assert_eq!(&v.to_sparse(&dst), d.column(j));
        }
    }
}
