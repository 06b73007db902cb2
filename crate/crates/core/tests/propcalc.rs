use hhsg::exactla::{kernel_of, Field};
use hhsg::gerst::PropElement;
use hhsg::propcalc::{
    gl_bracket, gl_theta, interchange_counterexample, make_prop, prop_bracket, random_element, star, swap_sign,
    vcomp_basis, EndV, GlElement, PropBasis, PropInstance, PropKind, PropVec, QuiverProp, TensorModel,
};
use hhsg::quiver::Quiver;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn instances() -> Vec<Box<dyn PropInstance>> {
    let f = Field::Rational;
    vec![
        make_prop(PropKind::EndV(2), f).unwrap(),
        make_prop(PropKind::DirectSum(2), f).unwrap(),
        make_prop(PropKind::RLoops(2), f).unwrap(),
        make_prop(PropKind::Quiver(Quiver::two_loops()), f).unwrap(),
        make_prop(PropKind::Quiver(Quiver::loop_edge_edge_loop()), f).unwrap(),
    ]
}

fn id_power(p: &dyn PropInstance, k: usize) -> PropVec {
    let id = p.identity();
    (1..k).fold(id.clone(), |acc, _| p.hcomp(&acc, &id))
}

#[test]
fn interchange_holds() {
    for p in instances() {
        assert_eq!(interchange_counterexample(p.as_ref(), 2).unwrap(), None, "{}", p.name());
    }
}

#[test]
fn identities_are_units() {
    for p in instances() {
        for m in 1..=2 {
            for n in 1..=2 {
                for b in p.basis(m, n) {
                    let f = PropVec::basis(p.field(), b.clone());
                    assert_eq!(p.vcomp(&id_power(p.as_ref(), n), &f).unwrap(), f, "{}", p.label(&b));
                    assert_eq!(p.vcomp(&f, &id_power(p.as_ref(), m)).unwrap(), f, "{}", p.label(&b));
                }
            }
        }
    }
}

#[test]
fn zero_dimension_is_refused() {
    assert!(make_prop(PropKind::EndV(0), Field::Rational).is_err());
}

#[test]
fn vertical_composition_needs_matching_arity() {
    let a = PropBasis { m: 1, n: 2, input: vec![0], output: vec![0, 1] };
    let b = PropBasis { m: 1, n: 1, input: vec![0], output: vec![1] };
    assert!(vcomp_basis(&b, &a).is_none());
    let c = PropBasis { m: 2, n: 1, input: vec![0, 1], output: vec![1] };
    assert_eq!(vcomp_basis(&c, &a).map(|x| (x.m, x.n)), Some((1, 1)));
}

#[test]
fn quiver_prop_roundtrip() {
    let q = Quiver::loop_edge_edge_loop();
    let p = QuiverProp::new(q.clone(), Field::Rational);
    for m in 1..=2 {
        for n in 1..=3 {
            for b in p.core_basis(m, n) {
                let v = PropVec::basis(Field::Rational, b);
                let e: PropElement = p.to_element(&v).unwrap();
                assert_eq!(p.from_element(&e), v);
            }
        }
    }
}

#[test]
fn phi_injective_off_diagonal() {
    let t = TensorModel::new(Field::Rational);
    for m in 0..=2 {
        for p in 0..=2 {
            let k = kernel_of(&t.phi_matrix(m, p)).dim();
            assert_eq!(k, usize::from(m == p), "({m},{p})");
        }
    }
}

#[test]
fn gl_theta_pads_with_zero() {
    let f = Field::Rational;
    let a = GlElement::from_i64(f, &[vec![1, 2], vec![3, 4]]).unwrap();
    let t = gl_theta(&a);
    assert_eq!(t.size, 3);
    assert!(t.get(2, 2).is_zero());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn identity_bracket_is_grading(seed in any::<u64>(), m in 1usize..3, n in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for p in instances() {
            let f = random_element(p.as_ref(), m, n, 3, false, &mut rng);
            let id = p.identity();
            let r = prop_bracket(p.as_ref(), &id, &f).unwrap();
            let want = f.scaled(&p.field().from_i64(n as i64 - m as i64));
            prop_assert_eq!(r, want, "{}", p.name());
        }
    }

    #[test]
    fn star_bracket_antisymmetric(seed in any::<u64>(), a in (1usize..3, 1usize..3), b in (1usize..3, 1usize..3)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for p in instances() {
            let f = random_element(p.as_ref(), a.0, a.1, 3, false, &mut rng);
            let g = random_element(p.as_ref(), b.0, b.1, 3, false, &mut rng);
            let fg = prop_bracket(p.as_ref(), &f, &g).unwrap();
            let gf = prop_bracket(p.as_ref(), &g, &f).unwrap();
            let s = if swap_sign(f.m, f.n, g.m, g.n) { -1 } else { 1 };
            prop_assert!(fg.plus(&gf.scaled(&p.field().from_i64(s))).is_zero());
        }
    }

    #[test]
    fn star_is_linear(seed in any::<u64>(), c in -3i64..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = EndV::new(2, Field::Rational);
        let f = random_element(&p, 2, 1, 3, false, &mut rng);
        let g = random_element(&p, 1, 2, 3, false, &mut rng);
        let h = random_element(&p, 1, 2, 3, false, &mut rng);
        let k = p.field().from_i64(c);
        let lhs = star(&p, &f, &g.plus(&h.scaled(&k))).unwrap();
        let rhs = star(&p, &f, &g).unwrap().plus(&star(&p, &f, &h).unwrap().scaled(&k));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn gl_antisymmetric(seed in any::<u64>(), m in 1usize..4, n in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = Field::prime(101).unwrap();
        let a = GlElement::random(f, m, &mut rng);
        let b = GlElement::random(f, n, &mut rng);
        prop_assert_eq!(gl_bracket(&a, &b), gl_bracket(&b, &a).neg());
        prop_assert_eq!(gl_bracket(&gl_theta(&a), &b), gl_theta(&gl_bracket(&a, &b)));
    }
}
