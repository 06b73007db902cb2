//! Named verification suites. Each returns one check per identity tested,
//! with a replayable counterexample in the detail on failure.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complex::{
    self, apply_d, apply_e, cohomology, first_stage, Check, PairVector,
};
use crate::error::{Error, Result};
use crate::exactla::{self, Field};
use crate::gerst::{
    self, bracket, bracket_deg1_closed_form, bv_deviation, loop_pair, mw_bracket, mw_delta,
    one_loop_oracle, parse_expression, project, MwElement, MwModel, OracleKind, PropElement,
};
use crate::propcalc::{
    self, f_correspondence, f_element, gl_bracket, gl_theta, interchange_counterexample,
    jacobi_sum, prop_bracket, random_element, DirectSum, EndV, GlElement, PropInstance, QuiverProp,
    RLoops, TensorMap, TensorModel,
};
use crate::quiver::{classify, PairBasis, ParallelPair, Path, Quiver};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum Suite {
    Kernel,
    Injectivity,
    Witt,
    Sl2,
    Crown,
    JacobiProp,
    JacobiGl,
    BvModel,
    Correspondence,
}

impl Suite {
    pub fn name(&self) -> &'static str {
        match self {
            Suite::Kernel => "kernel",
            Suite::Injectivity => "injectivity",
            Suite::Witt => "witt",
            Suite::Sl2 => "sl2",
            Suite::Crown => "crown",
            Suite::JacobiProp => "jacobi-prop",
            Suite::JacobiGl => "jacobi-gl",
            Suite::BvModel => "bv-model",
            Suite::Correspondence => "correspondence",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub field: Field,
    pub bound: usize,
    pub seed: u64,
    pub trials: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            field: Field::Rational,
            bound: 4,
            seed: 20240607,
            trials: 100,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    fn new(suite: &str, checks: Vec<Check>) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            passed: checks.iter().all(|c| c.passed),
            checks,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn check(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        passed,
        detail: detail.into(),
    }
}

fn need_quiver(q: Option<&Quiver>) -> Result<&Quiver> {
    q.ok_or_else(|| Error::usage("this suite needs --quiver"))
}

fn need_char_not_two(field: Field) -> Result<()> {
    if field.characteristic() == 2 {
        return Err(Error::hypothesis("requires characteristic ≠ 2"));
    }
    Ok(())
}

fn need_char_zero(field: Field) -> Result<()> {
    if field.characteristic() != 0 {
        return Err(Error::hypothesis("requires characteristic 0"));
    }
    Ok(())
}

fn is_loops(q: &Quiver, r: usize) -> bool {
    q.num_vertices() == 1 && q.num_arrows() == r
}

pub fn run_suite(suite: Suite, q: Option<&Quiver>, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let checks = match suite {
        Suite::Kernel => {
            let q = need_quiver(q)?;
            complex::structure_checks(q, 0, cfg.field)?;
            complex::kernel_checks(q, cfg.bound, cfg.field)
        }
        Suite::Injectivity => {
            let q = need_quiver(q)?;
            complex::structure_checks(q, 0, cfg.field)?;
            complex::injectivity_checks(q, cfg.bound, cfg.field)?
        }
        Suite::Witt => witt_checks(need_quiver(q)?, cfg.field)?,
        Suite::Sl2 => sl2_checks(need_quiver(q)?, cfg.field)?,
        Suite::Crown => crown_checks(need_quiver(q)?, cfg.field)?,
        Suite::JacobiProp => {
            let two = Quiver::two_loops();
            jacobi_prop_checks(q.unwrap_or(&two), cfg)?
        }
        Suite::JacobiGl => jacobi_gl_checks(cfg)?,
        Suite::BvModel => bv_model_checks(),
        Suite::Correspondence => correspondence_checks(need_quiver(q)?, cfg.field)?,
    };
    Ok(SuiteReport::new(suite.name(), checks))
}

/// `project(x)` is the zero class; errors count as failures.
fn zero_class(q: &Quiver, x: &PropElement) -> (bool, String) {
    match project(q, x) {
        Ok(c) if c.is_zero() => (true, "zero class".into()),
        Ok(c) => (false, format!("residual class {}", c.display(q))),
        Err(e) => (false, e.to_string()),
    }
}

pub fn witt_checks(q: &Quiver, field: Field) -> Result<Vec<Check>> {
    need_char_not_two(field)?;
    if !is_loops(q, 1) {
        return Err(Error::hypothesis("witt suite needs the one-loop quiver"));
    }
    let high = |k| PropElement::high(PairVector::single(field, loop_pair(q, k)));
    let low = |k| PropElement::low(PairVector::single(field, loop_pair(q, k)));
    let mut out = Vec::new();
    for m in [1usize, 3, 5] {
        for n in [1usize, 3, 5] {
            let (x, y) = (high(m + 2)?, high(n + 2)?);
            let r = bracket(q, &x, &y)?;
            let want = one_loop_oracle(q, field, OracleKind::BracketOddOdd, m, n)?;
            out.push(check(
                format!("odd/odd m={m} n={n}"),
                r.high == want && r.low.is_zero(),
                format!(
                    "[{}, {}] = {} expected {}",
                    x.display(q),
                    y.display(q),
                    r.display(q),
                    want.display(q)
                ),
            ));
        }
    }
    for m in [2usize, 4] {
        for n in [2usize, 4] {
            let (x, y) = (low(m + 1)?, low(n + 1)?);
            let r = bracket(q, &x, &y)?;
            let (ok, why) = zero_class(q, &r);
            out.push(check(
                format!("even/even m={m} n={n}"),
                ok,
                format!("[{}, {}] = {}: {why}", x.display(q), y.display(q), r.display(q)),
            ));
        }
        for n in [1usize, 3, 5] {
            let (x, y) = (low(m + 1)?, high(n + 2)?);
            let r = bracket(q, &x, &y)?;
            let want = PropElement::low(one_loop_oracle(q, field, OracleKind::BracketEvenOdd, m, n)?)?;
            let diff = r.plus(&want.scaled(&field.from_i64(-1)))?;
            let (ok, why) = zero_class(q, &diff);
            out.push(check(
                format!("even/odd m={m} n={n}"),
                ok,
                format!(
                    "[{}, {}] = {} expected {}: {why}",
                    x.display(q),
                    y.display(q),
                    r.display(q),
                    want.display(q)
                ),
            ));
        }
    }
    out.extend(closed_form_checks(q, field, 4)?);
    Ok(out)
}

/// `bracket` against the degree-one closed form on `Q_1//Q_{p+1} × Q_1//Q_{q+1}`.
pub fn closed_form_checks(q: &Quiver, field: Field, bound: usize) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for p in 0..=bound {
        for qq in 0..=bound {
            let xs = PairBasis::new(q, 1, p + 1);
            let ys = PairBasis::new(q, 1, qq + 1);
            let mut bad = None;
            for x in xs.pairs() {
                for y in ys.pairs() {
                    let fx = PropElement::high(PairVector::single(field, x.clone()))?;
                    let fy = PropElement::high(PairVector::single(field, y.clone()))?;
                    let r = bracket(q, &fx, &fy)?;
                    let want = bracket_deg1_closed_form(q, field, x, y)?;
                    if r.high != want || !r.low.is_zero() {
                        bad = Some(format!(
                            "[{}, {}] = {} but closed form gives {}",
                            q.display_pair(x),
                            q.display_pair(y),
                            r.display(q),
                            want.display(q)
                        ));
                        break;
                    }
                }
                if bad.is_some() {
                    break;
                }
            }
            out.push(check(
                format!("closed form p={p} q={qq}"),
                bad.is_none(),
                bad.unwrap_or_else(|| format!("{}x{} pairs agree", xs.len(), ys.len())),
            ));
        }
    }
    Ok(out)
}

pub fn sl2_checks(q: &Quiver, field: Field) -> Result<Vec<Check>> {
    need_char_not_two(field)?;
    if !is_loops(q, 2) {
        return Err(Error::hypothesis("sl2 suite needs the two-loops quiver"));
    }
    let el = |s: &str| -> Result<PropElement> { PropElement::high(parse_expression(q, field, s)?) };
    let names = q.arrows().iter().map(|a| a.name.clone()).collect::<Vec<_>>();
    let (a, b) = (&names[0], &names[1]);
    let e = el(&format!("({b}|{a})"))?;
    let f = el(&format!("({a}|{b})"))?;
    let h = el(&format!("({a}|{a}) - ({b}|{b})"))?;
    let i = el(&format!("({a}|{a}) + ({b}|{b})"))?;
    let dim = cohomology(q, 1, 0, field).dim();
    let mut out = vec![check("dim HH^1 = 4", dim == 4, format!("dim {dim}"))];
    let mut rel = |name: &str, x: &PropElement, y: &PropElement, want: PropElement| -> Result<()> {
        let r = bracket(q, x, y)?;
        out.push(check(
            name,
            r == want,
            format!(
                "[{}, {}] = {} expected {}",
                x.display(q),
                y.display(q),
                r.display(q),
                want.display(q)
            ),
        ));
        Ok(())
    };
    let zero = PropElement::zero(field, 1, 1)?;
    rel("[E,F] = H", &e, &f, h.clone())?;
    rel("[H,E] = 2E", &h, &e, e.scaled(&field.from_i64(2)))?;
    rel("[H,F] = -2F", &h, &f, f.scaled(&field.from_i64(-2)))?;
    for (n, x) in [("I", &i), ("E", &e), ("F", &f), ("H", &h)] {
        rel(&format!("[I,{n}] = 0"), &i, x, zero.clone())?;
    }
    Ok(out)
}

/// The path of length `len` whose first arrow is `a` (crowns have unique continuations).
fn crown_path(q: &Quiver, a: usize, len: usize) -> Path {
    let mut arrows = vec![a];
    while arrows.len() < len {
        let s = q.arrow(*arrows.last().unwrap()).source;
        let next = (0..q.num_arrows()).find(|&b| q.arrow(b).target == s).expect("crown");
        arrows.push(next);
    }
    q.path(&arrows).expect("crown path")
}

pub fn crown_checks(q: &Quiver, field: Field) -> Result<Vec<Check>> {
    need_char_not_two(field)?;
    let c = match classify(q).crown_order {
        Some(c) if c % 2 == 0 => c,
        _ => return Err(Error::hypothesis("crown suite needs a c-crown with c even")),
    };
    let pair = |a: usize, k: usize| -> ParallelPair { (q.arrow_path(a), crown_path(q, a, c * k + 1)) };
    let sum_all = |k: usize| {
        PairVector::from_terms(field, 1, c * k + 1, (0..q.num_arrows()).map(|a| (pair(a, k), field.one())))
    };
    let mut out = Vec::new();
    for p in [1usize, 2] {
        for qq in [1usize, 2] {
            for a in 0..q.num_arrows() {
                let x = PropElement::high(PairVector::single(field, pair(a, p)))?;
                let y = PropElement::high(PairVector::single(field, pair(a, qq)))?;
                let r = bracket(q, &x, &y)?;
                let want = PropElement::high(PairVector::from_terms(
                    field,
                    1,
                    c * (p + qq) + 1,
                    [(pair(a, p + qq), field.from_i64(qq as i64 - p as i64))],
                ))?;
                let nontrivial = !project(q, &x)?.is_zero();
                let (ok, why) = zero_class(q, &r.plus(&want.scaled(&field.from_i64(-1)))?);
                out.push(check(
                    format!("(a,aγ^p) bracket a={} p={p} q={qq}", q.arrow(a).name),
                    ok && nontrivial,
                    format!("[{}, {}] = {} expected {}: {why}", x.display(q), y.display(q), r.display(q), want.display(q)),
                ));
            }
            let x = PropElement::low(sum_all(p))?;
            let y = PropElement::low(sum_all(qq))?;
            let r = bracket(q, &x, &y)?;
            let (ok, why) = zero_class(q, &r);
            out.push(check(
                format!("Σ-type bracket p={p} q={qq}"),
                ok,
                format!("[{}, {}] = {}: {why}", x.display(q), y.display(q), r.display(q)),
            ));
            for b in 0..q.num_arrows() {
                let y = PropElement::high(PairVector::single(field, pair(b, qq)))?;
                let r = bracket(q, &x, &y)?;
                let want = PropElement::low(sum_all(p + qq).scaled(&field.from_i64(-(p as i64))))?;
                let (ok, why) = zero_class(q, &r.plus(&want.scaled(&field.from_i64(-1)))?);
                out.push(check(
                    format!("Σ-type against (b,bγ^q) b={} p={p} q={qq}", q.arrow(b).name),
                    ok,
                    format!("[{}, {}] = {} expected {}: {why}", x.display(q), y.display(q), r.display(q), want.display(q)),
                ));
            }
        }
    }
    Ok(out)
}

fn prop_label<P: PropInstance + ?Sized>(p: &P, v: &propcalc::PropVec) -> String {
    if v.is_zero() {
        return "0".into();
    }
    v.terms()
        .iter()
        .map(|(b, c)| format!("{c} {}", p.label(b)))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn random_arity<R: Rng>(rng: &mut R) -> (usize, usize) {
    (rng.gen_range(1..=3), rng.gen_range(1..=3))
}

fn lie_checks<P: PropInstance + ?Sized>(p: &P, core_only: bool, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut anti_bad = None;
    let mut jac_bad = None;
    for _ in 0..cfg.trials {
        let draw = |rng: &mut ChaCha8Rng| {
            let (m, n) = random_arity(rng);
            random_element(p, m, n, 3, core_only, rng)
        };
        let f = draw(&mut rng);
        let g = draw(&mut rng);
        let h = draw(&mut rng);
        if anti_bad.is_none() {
            let fg = prop_bracket(p, &f, &g)?;
            let gf = prop_bracket(p, &g, &f)?;
            let s = if propcalc::swap_sign(f.m, f.n, g.m, g.n) { -1 } else { 1 };
            let sum = fg.plus(&gf.scaled(&p.field().from_i64(s)));
            if !sum.is_zero() {
                anti_bad = Some(format!("f = {}, g = {}", prop_label(p, &f), prop_label(p, &g)));
            }
        }
        if jac_bad.is_none() && !jacobi_sum(p, &f, &g, &h)?.is_zero() {
            jac_bad = Some(format!(
                "f = {}, g = {}, h = {}",
                prop_label(p, &f),
                prop_label(p, &g),
                prop_label(p, &h)
            ));
        }
    }
    Ok(vec![
        check(
            format!("antisymmetry {}", p.name()),
            anti_bad.is_none(),
            anti_bad.unwrap_or_else(|| format!("{} random pairs", cfg.trials)),
        ),
        check(
            format!("jacobi {}", p.name()),
            jac_bad.is_none(),
            jac_bad.unwrap_or_else(|| format!("{} random triples", cfg.trials)),
        ),
    ])
}

fn interchange_check<P: PropInstance + ?Sized>(p: &P) -> Result<Check> {
    let bad = interchange_counterexample(p, 2)?;
    Ok(check(
        format!("interchange {}", p.name()),
        bad.is_none(),
        match bad {
            None => "all basis quadruples at arities ≤ 2".to_string(),
            Some((f1, g1, f2, g2)) => format!(
                "f1 = {}, g1 = {}, f2 = {}, g2 = {}",
                p.label(&f1),
                p.label(&g1),
                p.label(&f2),
                p.label(&g2)
            ),
        },
    ))
}

/// PROP bracket against the path-pair bracket on full bases.
pub fn coincidence_check(q: &Quiver, field: Field, max_m: usize, max_n: usize) -> Result<Check> {
    let prop = QuiverProp::new(q.clone(), field);
    let mut basis = Vec::new();
    for m in 1..=max_m {
        for n in 1..=max_n {
            basis.extend(prop.core_basis(m, n));
        }
    }
    let mut count = 0;
    for x in &basis {
        let fx = propcalc::PropVec::basis(field, x.clone());
        let ex = prop.to_element(&fx)?;
        for y in &basis {
            let fy = propcalc::PropVec::basis(field, y.clone());
            let ey = prop.to_element(&fy)?;
            let lhs = prop_bracket(&prop, &fx, &fy)?;
            let rhs = prop.from_element(&bracket(q, &ex, &ey)?);
            count += 1;
            if lhs != rhs {
                return Ok(check(
                    "coincidence propcalc/gerst",
                    false,
                    format!(
                        "f = {}, g = {}: PROP gives {}, pair bracket gives {}",
                        ex.display(q),
                        ey.display(q),
                        prop_label(&prop, &lhs),
                        prop_label(&prop, &rhs)
                    ),
                ));
            }
        }
    }
    Ok(check(
        "coincidence propcalc/gerst",
        true,
        format!("{count} basis pairs at arities ≤ ({max_m},{max_n})"),
    ))
}

pub fn jacobi_prop_checks(q: &Quiver, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let field = cfg.field;
    let end = EndV::new(2, field);
    let sum = DirectSum::new(2, field);
    let rl = RLoops::new(2, field);
    let qp = QuiverProp::new(q.clone(), field);
    let mut out = vec![
        interchange_check(&end)?,
        interchange_check(&sum)?,
        interchange_check(&rl)?,
        interchange_check(&qp)?,
    ];
    out.extend(lie_checks(&end, false, cfg)?);
    out.extend(lie_checks(&rl, true, cfg)?);
    out.extend(lie_checks(&qp, true, cfg)?);
    out.push(coincidence_check(q, field, 2, 3)?);
    Ok(out)
}

pub fn jacobi_gl_checks(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let field = cfg.field;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let show = |a: &GlElement| {
        let rows: Vec<String> = (0..a.size)
            .map(|i| (0..a.size).map(|j| a.get(i, j).to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        format!("[{}]", rows.join("; "))
    };
    let mut out = Vec::new();
    let mut bad = None;
    for n in 1..=4 {
        let a = GlElement::random(field, 1, &mut rng);
        let b = GlElement::random(field, n, &mut rng);
        if !gl_bracket(&a, &b).is_zero() && bad.is_none() {
            bad = Some(format!("A = {}, B = {}", show(&a), show(&b)));
        }
    }
    out.push(check("{gl_1, gl_m} = 0", bad.is_none(), bad.unwrap_or_else(|| "sizes 1..=4".into())));
    let mut bad = None;
    for m in 1..=3 {
        for n in 1..=3 {
            for _ in 0..5 {
                let a = GlElement::random(field, m, &mut rng);
                let b = GlElement::random(field, n, &mut rng);
                let lhs = gl_bracket(&gl_theta(&a), &b);
                let rhs = gl_theta(&gl_bracket(&a, &b));
                if lhs != rhs && bad.is_none() {
                    bad = Some(format!("A = {}, B = {}", show(&a), show(&b)));
                }
            }
        }
    }
    out.push(check("theta compatibility", bad.is_none(), bad.unwrap_or_else(|| "sizes ≤ 3".into())));
    let (mut anti, mut jac) = (None, None);
    for _ in 0..cfg.trials {
        let draw = |rng: &mut ChaCha8Rng| {
            let s = rng.gen_range(1..=4);
            GlElement::random(field, s, rng)
        };
        let a = draw(&mut rng);
        let b = draw(&mut rng);
        let c = draw(&mut rng);
        if anti.is_none() && gl_bracket(&a, &b) != gl_bracket(&b, &a).neg() {
            anti = Some(format!("A = {}, B = {}", show(&a), show(&b)));
        }
        let j = gl_bracket(&gl_bracket(&a, &b), &c)
            .plus(&gl_bracket(&gl_bracket(&b, &c), &a))
            .plus(&gl_bracket(&gl_bracket(&c, &a), &b));
        if jac.is_none() && !j.is_zero() {
            jac = Some(format!("A = {}, B = {}, C = {}", show(&a), show(&b), show(&c)));
        }
    }
    out.push(check("antisymmetry", anti.is_none(), anti.unwrap_or_else(|| format!("{} random pairs", cfg.trials))));
    out.push(check("jacobi", jac.is_none(), jac.unwrap_or_else(|| format!("{} random triples", cfg.trials))));
    Ok(out)
}

pub fn bv_model_checks() -> Vec<Check> {
    let mut out = Vec::new();
    for model in [MwModel::Full, MwModel::Even] {
        let step = if model == MwModel::Even { 2 } else { 1 };
        let idx: Vec<i64> = (-5..=5).filter(|i| i % step == 0).collect();
        let mut basis = Vec::new();
        for &i in &idx {
            basis.push(MwElement::m(model, i).expect("index in model"));
            basis.push(MwElement::l(model, i).expect("index in model"));
        }
        let tag = if model == MwModel::Full { "M×W" } else { "M^even×W^even" };
        let bad = basis.iter().find(|x| !mw_delta(&mw_delta(x)).is_zero());
        out.push(check(
            format!("{tag} Δ² = 0"),
            bad.is_none(),
            bad.map(|x| format!("x = {x}")).unwrap_or_else(|| "|i| ≤ 5".into()),
        ));
        let mut dev_bad = None;
        let mut const_bad = None;
        for x in &basis {
            for y in &basis {
                let dev = bv_deviation(x, y).expect("homogeneous");
                if dev != mw_bracket(x, y) && dev_bad.is_none() {
                    dev_bad = Some(format!("x = {x}, y = {y}: deviation {dev}, bracket {}", mw_bracket(x, y)));
                }
            }
        }
        for &m in &idx {
            for &n in &idx {
                let (lm, ln, mn) = (
                    MwElement::l(model, m).unwrap(),
                    MwElement::l(model, n).unwrap(),
                    MwElement::m(model, n).unwrap(),
                );
                let want_ll = MwElement::l(model, m + n).unwrap().scaled(m - n);
                let want_lm = MwElement::m(model, m + n).unwrap().scaled(-n);
                let via_dev_ll = bv_deviation(&lm, &ln).unwrap();
                let via_dev_lm = bv_deviation(&lm, &mn).unwrap();
                if (via_dev_ll != want_ll || via_dev_lm != want_lm) && const_bad.is_none() {
                    const_bad = Some(format!("m = {m}, n = {n}"));
                }
            }
        }
        out.push(check(
            format!("{tag} deviation equals bracket"),
            dev_bad.is_none(),
            dev_bad.unwrap_or_else(|| "all basis pairs |i| ≤ 5".into()),
        ));
        out.push(check(
            format!("{tag} Witt and module constants"),
            const_bad.is_none(),
            const_bad.unwrap_or_else(|| "[L_m,L_n] = (m−n)L_{m+n}, [L_m,M_n] = −nM_{m+n}".into()),
        ));
    }
    out
}

/// All basis elements of `P_A(m, p+1)`: high pairs, then low pairs.
fn prop_basis(q: &Quiver, field: Field, m: usize, p: usize) -> Result<Vec<PropElement>> {
    let mut out = Vec::new();
    for pair in PairBasis::new(q, m, p + 1).pairs() {
        out.push(PropElement::high(PairVector::single(field, pair.clone()))?);
    }
    for pair in PairBasis::new(q, m, p).pairs() {
        out.push(PropElement::low(PairVector::single(field, pair.clone()))?);
    }
    Ok(out)
}

pub fn correspondence_checks(q: &Quiver, field: Field) -> Result<Vec<Check>> {
    need_char_zero(field)?;
    if !is_loops(q, 2) {
        return Err(Error::hypothesis("correspondence suite needs the two-loops quiver"));
    }
    let t = TensorModel::new(field);
    let mut out = Vec::new();
    let mut bad_d = None;
    let mut bad_e = None;
    for m in 0..=3 {
        for p in 0..=3 {
            for pair in PairBasis::new(q, m, p).pairs() {
                let v = PairVector::single(field, pair.clone());
                let fv = f_correspondence(q, &v)?;
                if f_correspondence(q, &apply_d(q, &v))? != t.phi(&fv) && bad_d.is_none() {
                    bad_d = Some(format!("v = {}", v.display(q)));
                }
                if f_correspondence(q, &apply_e(q, &v))? != t.theta(&fv) && bad_e.is_none() {
                    bad_e = Some(format!("v = {}", v.display(q)));
                }
            }
        }
    }
    out.push(check("F∘D = φ∘F", bad_d.is_none(), bad_d.unwrap_or_else(|| "m, p ≤ 3".into())));
    out.push(check("F∘E = θ∘F", bad_e.is_none(), bad_e.unwrap_or_else(|| "m, p ≤ 3".into())));
    for m in 0..=3 {
        for p in 0..=3 {
            let k = exactla::kernel_of(&t.phi_matrix(m, p));
            if m == p {
                let id = t.identity_map(m);
                let basis = t.ev.basis(m, m);
                let v: exactla::SparseVec = basis
                    .iter()
                    .enumerate()
                    .filter_map(|(i, b)| id.terms().get(b).map(|c| (i, c.clone())))
                    .collect();
                out.push(check(
                    format!("Ker φ({m},{m}) = span id"),
                    k.dim() == 1 && k.contains(&v),
                    format!("dim {}", k.dim()),
                ));
            } else {
                out.push(check(format!("φ({m},{p}) injective"), k.dim() == 0, format!("kernel dim {}", k.dim())));
            }
        }
    }
    let mut count = 0;
    let mut bad = None;
    'outer: for m in 1..=3 {
        for p in 0..=3 {
            let us = prop_basis(q, field, m, p)?;
            for n in 1..=(4 - m) {
                for qq in 0..=(3 - p) {
                    for v in prop_basis(q, field, n, qq)? {
                        for u in &us {
                            let lhs = f_element(q, &bracket(q, u, &v)?)?;
                            let rhs = t.bracket(&f_element(q, u)?, &f_element(q, &v)?)?;
                            count += 1;
                            if lhs != rhs {
                                bad = Some(format!("u = {}, v = {}", u.display(q), v.display(q)));
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }
    }
    out.push(check(
        "F intertwines brackets",
        bad.is_none(),
        bad.unwrap_or_else(|| format!("{count} basis pairs with m+n−1 ≤ 3, p+q ≤ 3")),
    ));
    out.push(theta_on_k_check(&t, field)?);
    Ok(out)
}

/// `θ{f, g} = {θf, g}` on cohomology classes of the tensor model.
fn theta_on_k_check(t: &TensorModel, field: Field) -> Result<Check> {
    let classes = |m: usize, p: usize| -> Vec<TensorMap> {
        let k = t.k_group(m, p);
        let mut out = Vec::new();
        let t1 = t.ev.basis(m, p + 1);
        for (i, b) in t1.iter().enumerate() {
            if !k.image.is_pivot(i) {
                let mut x = TensorMap::zero(field, m, p);
                x.t1 = propcalc::PropVec::basis(field, b.clone());
                out.push(x);
            }
        }
        let t0 = t.ev.basis(m, p);
        for row in k.kernel.rows() {
            let mut x = TensorMap::zero(field, m, p);
            for (i, c) in row {
                x.t0.add_term(t0[*i].clone(), c.clone());
            }
            out.push(x);
        }
        out
    };
    let is_zero_class = |x: &TensorMap| -> bool {
        if !x.t0.is_zero() {
            return false;
        }
        let k = t.k_group(x.m, x.p);
        let basis = t.ev.basis(x.m, x.p + 1);
        let v: exactla::SparseVec = basis
            .iter()
            .enumerate()
            .filter_map(|(i, b)| x.t1.terms().get(b).map(|c| (i, c.clone())))
            .collect();
        k.image.contains(&v)
    };
    let mut count = 0;
    for m in 1..=2 {
        for p in 0..=1 {
            for n in 1..=2 {
                for qq in 0..=1 {
                    for f in classes(m, p) {
                        for g in classes(n, qq) {
                            let lhs = t.theta_map(&t.bracket(&f, &g)?);
                            let rhs = t.bracket(&t.theta_map(&f), &g)?;
                            let diff = TensorMap {
                                m: lhs.m,
                                p: lhs.p,
                                t0: lhs.t0.minus(&rhs.t0),
                                t1: lhs.t1.minus(&rhs.t1),
                            };
                            count += 1;
                            if !is_zero_class(&diff) {
                                return Ok(check(
                                    "θ compatible with {·,·} on K",
                                    false,
                                    format!("classes at ({m},{p}) and ({n},{qq})"),
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(check("θ compatible with {·,·} on K", true, format!("{count} class pairs")))
}

/// Cup vanishing for crown-free quivers, plus the one-loop bookkeeping.
pub fn cup_vanishing_checks(quivers: &[&Quiver], field: Field, bound: i64) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for q in quivers {
        let c = classify(q);
        if c.crown_order.is_some() || c.has_source_or_sink || !c.connected {
            return Err(Error::hypothesis("cup vanishing needs a connected crown-free quiver without sources or sinks"));
        }
        let mut reps = std::collections::BTreeMap::new();
        let mut kernel_free = true;
        for n in (-bound..=bound).filter(|&n| n != 0) {
            let p = first_stage(n);
            let g = cohomology(q, (n + p as i64) as usize, p, field);
            kernel_free &= g.kernel_dim() == 0;
            reps.insert(n, g.quotient_reps());
        }
        out.push(check(
            format!("kernel blocks vanish ({} arrows)", q.num_arrows()),
            kernel_free,
            "stage groups at mn ≠ 0",
        ));
        let mut bad = None;
        let mut count = 0;
        for (m, xs) in &reps {
            for (n, ys) in &reps {
                for x in xs {
                    for y in ys {
                        count += 1;
                        let r = gerst::chain_cup_high(q, x, y)?;
                        if !r.is_zero() && bad.is_none() {
                            bad = Some(format!("m={m} n={n}: {} ∪ {} = {}", x.display(q), y.display(q), r.display(q)));
                        }
                    }
                }
            }
        }
        out.push(check(
            format!("quotient-block cup vanishes ({} arrows)", q.num_arrows()),
            bad.is_none(),
            bad.unwrap_or_else(|| format!("{count} representative pairs")),
        ));
    }
    let one = Quiver::one_loop();
    let mut ok = true;
    let mut detail = String::new();
    for m in 1..=5usize {
        let g = cohomology(&one, 1, m + 1, field);
        let quotient = g.quotient_dim() == 1 && g.kernel_dim() == 0;
        let kernel = g.kernel_dim() == 1 && g.quotient_dim() == 0;
        if (m % 2 == 1 && !quotient) || (m % 2 == 0 && !kernel) {
            ok = false;
            detail = format!("HH^1(Ω^{}) blocks: quotient {}, kernel {}", m + 1, g.quotient_dim(), g.kernel_dim());
        }
    }
    for m in [1usize, 3, 5] {
        for n in [1usize, 3, 5] {
            let zero = one_loop_oracle(&one, field, OracleKind::CupOddOdd, m, n)?.is_zero();
            let x = PairVector::single(field, loop_pair(&one, m + 2));
            let y = PairVector::single(field, loop_pair(&one, n + 2));
            let chain = gerst::chain_cup_high(&one, &x, &y)?.is_zero();
            if !(zero && chain) {
                ok = false;
                detail = format!("odd/odd cup m={m} n={n}");
            }
        }
    }
    for m in [2usize, 4] {
        for n in [1usize, 2, 3, 4] {
            let kind = if n % 2 == 0 { OracleKind::CupEvenEven } else { OracleKind::CupEvenOdd };
            if one_loop_oracle(&one, field, kind, m, n)?.is_zero() {
                ok = false;
                detail = format!("nonzero cup expected at m={m} n={n}");
            }
        }
    }
    out.push(check(
        "one-loop cup bookkeeping",
        ok,
        if ok { "nonzero cups all involve a kernel-block class".into() } else { detail },
    ));
    Ok(out)
}
