use hhsg::cli::suites::closed_form_checks;
use hhsg::complex::PairVector;
use hhsg::exactla::{Field, Scalar};
use hhsg::gerst::{
    bracket, bv_deviation, mw_bracket, mw_cup, mw_delta, parse_expression, project, MwElement, MwModel,
    OracleKind, PropElement,
};
use hhsg::propcalc::swap_sign;
use hhsg::quiver::{PairBasis, Quiver};
use hhsg::Error;
use proptest::prelude::*;

fn sign(field: Field, neg: bool) -> Scalar {
    field.from_i64(if neg { -1 } else { 1 })
}

fn element(q: &Quiver, m: usize, omega: usize, hi: &[(usize, i64)], lo: &[(usize, i64)]) -> PropElement {
    let f = Field::Rational;
    let mut e = PropElement::zero(f, m, omega + 1).unwrap();
    let hb = PairBasis::new(q, m, omega + 1);
    let lb = PairBasis::new(q, m, omega);
    for &(i, c) in hi {
        if !hb.is_empty() {
            e.high.add_term(hb.get(i % hb.len()).clone(), f.from_i64(c));
        }
    }
    for &(i, c) in lo {
        if !lb.is_empty() {
            e.low.add_term(lb.get(i % lb.len()).clone(), f.from_i64(c));
        }
    }
    e
}

type Shape = (usize, usize, Vec<(usize, i64)>, Vec<(usize, i64)>);

fn shape() -> impl Strategy<Value = Shape> {
    (
        1usize..3,
        0usize..3,
        prop::collection::vec((0usize..64, -3i64..4), 0..3),
        prop::collection::vec((0usize..64, -3i64..4), 0..3),
    )
}

fn quivers() -> Vec<Quiver> {
    vec![Quiver::one_loop(), Quiver::two_loops(), Quiver::loop_edge_edge_loop()]
}

fn odd(e: &PropElement) -> bool {
    (e.m + e.n) % 2 == 1
}

#[test]
fn closed_form_on_examples() {
    for q in quivers() {
        for c in closed_form_checks(&q, Field::Rational, 3).unwrap() {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}

#[test]
fn witt_bracket_and_foreign_quiver() {
    let f = Field::Rational;
    let q = Quiver::one_loop();
    let x = PropElement::high(parse_expression(&q, f, "(a|a*a*a)").unwrap()).unwrap();
    let y = PropElement::high(parse_expression(&q, f, "(a|a*a*a*a*a)").unwrap()).unwrap();
    assert_eq!(bracket(&q, &x, &y).unwrap().display(&q), "2 (a|a*a*a*a*a*a*a)");
    let other = Quiver::one_loop();
    let z = PropElement::high(parse_expression(&other, f, "(a|a)").unwrap()).unwrap();
    assert!(matches!(bracket(&q, &x, &z), Err(Error::Usage(_))));
}

#[test]
fn grammar_errors() {
    let f = Field::Rational;
    let q = Quiver::two_loops();
    for bad in ["(a|c)", "(a|a) + (a|a*b)", "(a|", "2 3 (a|a)", "(e(v)|a)x"] {
        assert!(parse_expression(&q, f, bad).is_err(), "{bad}");
    }
    let v = parse_expression(&q, f, "-1/2 (a|b*a) + 3 (b|b*b)").unwrap();
    assert_eq!(v.display(&q), "-1/2 (a|b*a) + 3 (b|b*b)");
}

#[test]
fn oracle_names_parse() {
    for name in ["bracket-odd-odd", "cup-even-odd", "delta"] {
        let k: Result<OracleKind, _> = name.parse();
        assert!(k.is_ok(), "{name}");
    }
}

#[test]
fn projection_of_classes() {
    let f = Field::Rational;
    let q = Quiver::one_loop();
    // (a, a^3) spans HH^1(Ω^2); its image under D_{0,2} is zero, so it stays nontrivial
    let x = PropElement::high(parse_expression(&q, f, "(a|a*a*a)").unwrap()).unwrap();
    assert!(!project(&q, &x).unwrap().is_zero());
}

#[test]
fn mw_model_laws() {
    let idx = -4i64..=4;
    for model in [MwModel::Full, MwModel::Even] {
        let mut basis = Vec::new();
        for i in idx.clone() {
            if model == MwModel::Even && i % 2 != 0 {
                assert!(MwElement::m(model, i).is_err());
                continue;
            }
            basis.push(MwElement::m(model, i).unwrap());
            basis.push(MwElement::l(model, i).unwrap());
        }
        let deg = |x: &MwElement| x.degree().unwrap().unwrap_or(0);
        for x in &basis {
            assert!(mw_delta(&mw_delta(x)).is_zero());
            for y in &basis {
                let s = if (deg(x) - 1) * (deg(y) - 1) % 2 != 0 { 1 } else { -1 };
                assert_eq!(mw_bracket(x, y), mw_bracket(y, x).scaled(s), "{x} {y}");
                let c = if deg(x) * deg(y) % 2 != 0 { -1 } else { 1 };
                assert_eq!(mw_cup(x, y), mw_cup(y, x).scaled(c));
                assert_eq!(bv_deviation(x, y).unwrap(), mw_bracket(x, y));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bracket_is_graded_antisymmetric(qi in 0usize..3, a in shape(), b in shape()) {
        let q = &quivers()[qi];
        let f = element(q, a.0, a.1, &a.2, &a.3);
        let g = element(q, b.0, b.1, &b.2, &b.3);
        let fg = bracket(q, &f, &g).unwrap();
        let gf = bracket(q, &g, &f).unwrap();
        let s = sign(Field::Rational, swap_sign(f.m, f.n, g.m, g.n));
        prop_assert!(fg.plus(&gf.scaled(&s)).unwrap().is_zero());
    }

    #[test]
    fn bracket_satisfies_jacobi(qi in 0usize..3, a in shape(), b in shape(), c in shape()) {
        let q = &quivers()[qi];
        let field = Field::Rational;
        let f = element(q, a.0, a.1, &a.2, &a.3);
        let g = element(q, b.0, b.1, &b.2, &b.3);
        let h = element(q, c.0, c.1, &c.2, &c.3);
        let br = |x: &PropElement, y: &PropElement| bracket(q, x, y).unwrap();
        let t1 = br(&br(&f, &g), &h).scaled(&sign(field, odd(&f) && odd(&h)));
        let t2 = br(&br(&g, &h), &f).scaled(&sign(field, odd(&g) && odd(&f)));
        let t3 = br(&br(&h, &f), &g).scaled(&sign(field, odd(&h) && odd(&g)));
        prop_assert!(t1.plus(&t2).unwrap().plus(&t3).unwrap().is_zero());
    }

    #[test]
    fn expressions_roundtrip(qi in 0usize..3, a in shape()) {
        let q = &quivers()[qi];
        let e = element(q, a.0, a.1, &a.2, &[]);
        let text = e.high.display(q);
        if e.high.is_zero() {
            prop_assert_eq!(text, "0");
        } else {
            let back: PairVector = parse_expression(q, Field::Rational, &text).unwrap();
            prop_assert_eq!(back, e.high);
        }
    }
}
