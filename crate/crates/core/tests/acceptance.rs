//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Pinned tolerances: real-valued comparisons use `EPS`; every random suite
//! draws from `SEED` so runs are reproducible.

use std::process::ExitCode;
use std::time::Instant;

use cbm_core::algebra::{
    build_term_lts, compatibility, verify_composition, ComposeConfig, Operator, ProcessTerm, TermLts,
};
use cbm_core::gen::{self, Rng64};
use cbm_core::mlts::{close_pre_mlts, embed_environment, load_mlts_documents, validate_mlts, Mlts, TermId, Universe};
use cbm_core::solver::{
    behavioural_as_cbm, behavioural_metric, brute_force_family, env_param_bisim, env_param_bisim_with_distance,
    metric_axiom_check, param_bisim, param_bisim_family, strong_bisim, MetricStyle, Workbench,
};
use cbm_core::{fixtures, load_lts_documents, Bounds, FiniteQuantale, ImmediatePolicy, ProcessLts, Quantale, Status};
use rand::seq::SliceRandom;
use rand::Rng;

const SEED: u64 = 0x5eed_2024;
const EPS: f64 = 1e-9;

struct Outcome {
    pass: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome {
        pass: true,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome {
        pass: false,
        detail: detail.into(),
    }
}

type Check = fn() -> Result<Outcome, cbm_core::Error>;

fn bounds() -> Bounds {
    Bounds {
        eps: EPS,
        ..Bounds::default()
    }
}

/// Random suites build characteristic states for every pair, whose joins
/// outgrow the interactive defaults.
fn wide_bounds() -> Bounds {
    Bounds {
        max_set_size: 16,
        max_choices: 1 << 16,
        ..bounds()
    }
}

fn base(files: &[&str]) -> ProcessLts {
    let docs: Vec<(&str, &str)> = files.iter().map(|f| (*f, fixtures::get(f).unwrap())).collect();
    load_lts_documents(&docs, None).unwrap()
}

fn v0(files: &[&str]) -> Mlts {
    let docs: Vec<(&str, &str)> = files.iter().map(|f| (*f, fixtures::get(f).unwrap())).collect();
    load_mlts_documents(&docs, None, bounds()).unwrap()
}

fn term_lts(files: &[&str], roots: &[&str], b: &Bounds) -> TermLts {
    let roots: Vec<ProcessTerm> = roots.iter().map(|r| ProcessTerm::parse(r).unwrap()).collect();
    build_term_lts(&base(files), &roots, b).unwrap()
}

fn pqr() -> [&'static str; 3] {
    ["P.lts", "Q.lts", "R.lts"]
}

fn restriction_example() -> Result<Outcome, cbm_core::Error> {
    let m = v0(&["S0.mlts"]);
    let wb = Workbench::new(base(&["P.lts", "Q.lts"]), &m, &[])?;
    let d = wb.metric_named("p0", "q0")?.term;
    let t = term_lts(&["P.lts", "Q.lts"], &["nu a p0", "nu a q0"], &bounds());
    let wr = Workbench::new(t.lts.clone(), &m, &[])?;
    let dr = wr.metric(t.state_of("nu a p0")?, t.state_of("nu a q0")?)?.term;
    let detail = format!("d(p0,q0) = {}, d(nu a p0, nu a q0) = {}", wb.render(d), wr.render(dr));
    Ok(if d == m.base("s0")? && dr == TermId::BOT {
        pass(detail)
    } else {
        fail(detail)
    })
}

fn prefix_example() -> Result<Outcome, cbm_core::Error> {
    let m = v0(&["S0.mlts"]);
    let t = term_lts(&["P.lts", "Q.lts"], &["b.p0", "b.q0"], &bounds());
    let wb = Workbench::with_characteristic(t.lts.clone(), &m, &[])?;
    let d = wb.metric(t.state_of("b.p0")?, t.state_of("b.q0")?)?.term;
    let mm = wb.mlts();
    let bs = mm.moves(d, mm.label("b")?)?;
    let as_ = mm.moves(d, mm.label("a")?)?;
    let b_ok = bs.len() == 1 && wb.equiv(bs[0], m.base("s0")?)?;
    let a_ok = !as_.is_empty() && as_.iter().all(|&x| wb.equiv(x, TermId::BOT).unwrap_or(false));
    let show = |xs: &[TermId]| xs.iter().map(|&x| wb.render(x)).collect::<Vec<_>>().join(", ");
    let detail = format!("-b-> {{{}}}, -a-> {{{}}}", show(&bs), show(&as_));
    Ok(if b_ok && a_ok { pass(detail) } else { fail(detail) })
}

fn sum_example() -> Result<Outcome, cbm_core::Error> {
    let m = v0(&["S0.mlts"]);
    let t = term_lts(&pqr(), &["p0 + r0", "q0 + r0"], &bounds());
    let wb = Workbench::new(t.lts.clone(), &m, &[])?;
    let d = wb.metric(t.state_of("p0 + r0")?, t.state_of("q0 + r0")?)?.term;
    let detail = format!("d(p0+r0, q0+r0) = {}", wb.render(d));
    Ok(if wb.equiv(d, m.base("s0")?)? {
        pass(detail)
    } else {
        fail(detail)
    })
}

fn parallel_example() -> Result<Outcome, cbm_core::Error> {
    let m = v0(&["S0.mlts", "Spp.mlts", "Mpar.mlts"]);
    let t = term_lts(&pqr(), &["p0 | r0", "q0 | r0"], &bounds());
    let wb = Workbench::with_characteristic(t.lts.clone(), &m, &[])?;
    let d = wb.metric(t.state_of("p0 | r0")?, t.state_of("q0 | r0")?)?.term;
    let same = wb.equiv(d, m.base("m0")?)?;
    let u = Universe::reachable(&m, &[])?;
    let c = compatibility(&m, &t.lts, &u)?;
    let p0 = t.state_of("p0")?;
    let s0 = c.is_compatible(m.base("s0")?, p0);
    let spp = c.is_compatible(m.base("s''0")?, p0);
    let detail = format!(
        "d(p0|r0, q0|r0) = {} (≃ m0: {same}), compatible(s0,p0) = {s0:?}, compatible(s''0,p0) = {spp:?}",
        wb.render(d)
    );
    Ok(if same && s0 == Some(false) && spp == Some(true) {
        pass(detail)
    } else {
        fail(detail)
    })
}

fn replication_example() -> Result<Outcome, cbm_core::Error> {
    let b = bounds().apply_overrides("K=3")?;
    let m = v0(&["S0.mlts"]);
    let t = term_lts(&["P.lts", "Q.lts"], &["!p0", "!q0"], &b);
    let wb = Workbench::new(t.lts.clone(), &m, &[])?;
    let d = wb.metric(t.state_of("!p0")?, t.state_of("!q0")?)?.term;
    let detail = format!(
        "d(!p0, !q0) = {} over {} states, bounded = {}",
        wb.render(d),
        t.lts.num_states(),
        t.lts.is_bounded()
    );
    Ok(if wb.equiv(d, TermId::BOT)? {
        pass(detail)
    } else {
        fail(detail)
    })
}

fn finite_quantales() -> Vec<Quantale> {
    vec![
        Quantale::Boolean,
        Quantale::finite(FiniteQuantale::diamond()),
        Quantale::finite(FiniteQuantale::chain4()),
    ]
}

fn mlts_laws() -> Result<Outcome, cbm_core::Error> {
    let m = v0(&["S0.mlts"]);
    let closure = close_pre_mlts(&m)?;
    let r = validate_mlts(&m, &closure.universe);
    if r.count(Status::Fail) > 0 {
        return Ok(fail(format!("closure: {}", r.failures().next().unwrap().id)));
    }
    let mut rng = gen::rng(SEED);
    let qs = finite_quantales();
    let (mut checked, mut skipped) = (0, 0);
    for i in 0..200 {
        let q = &qs[i % qs.len()];
        let labels = &gen::LABELS[..rng.gen_range(1..=2)];
        let bases = rng.gen_range(1..=5);
        let m = gen::random_mlts(&mut rng, q, bases, labels, bounds());
        let u = Universe::reachable(&m, &[])?;
        let r = validate_mlts(&m, &u);
        if let Some(e) = r.failures().next() {
            return Ok(fail(format!(
                "instance {i} over {}: {} {:?}",
                q.name(),
                e.id,
                e.witness
            )));
        }
        checked += r.count(Status::Pass);
        skipped += r.count(Status::Skip);
    }
    Ok(pass(format!(
        "closure of {} terms and 200 random MLTSs: {checked} law checks passed, {skipped} skipped",
        closure.universe.len()
    )))
}

fn random_policy(rng: &mut Rng64, lts: &mut ProcessLts) {
    match rng.gen_range(0..4) {
        0 => lts.set_policy(ImmediatePolicy::Canonical),
        1 => lts.set_policy(ImmediatePolicy::CommonAction),
        2 => lts.set_policy(ImmediatePolicy::Liberal),
        _ => {
            let pool = gen::value_pool(&lts.quantale);
            gen::random_table(rng, lts, &pool, false)
        }
    }
}

fn characterization() -> Result<Outcome, cbm_core::Error> {
    let mut rng = gen::rng(SEED + 1);
    let qs = finite_quantales();
    let (mut queries, mut exact_runs) = (0, 0);
    for i in 0..200 {
        let q = &qs[i % qs.len()];
        let labels = &gen::LABELS[..rng.gen_range(1..=2)];
        let n = rng.gen_range(2..=4);
        let mut lts = gen::random_lts(&mut rng, q, "p", n, labels, 0.3, ImmediatePolicy::Canonical);
        random_policy(&mut rng, &mut lts);
        let bases = rng.gen_range(1..=2);
        let m = gen::random_mlts(&mut rng, q, bases, labels, wide_bounds());
        let u = Universe::reachable(&m, &[])?;
        let fam = param_bisim_family(&lts, &m, &u)?;
        let oracle = brute_force_family(&lts, &m, &u)?;
        if let Some((s, p, r)) = fam.first_difference(&oracle) {
            return Ok(fail(format!(
                "instance {i}: solver and oracle differ at ({}, {}, {})",
                m.render(u.term(s)),
                lts.state_name(p),
                lts.state_name(r)
            )));
        }
        let wb = Workbench::new(lts.clone(), &m, &[])?;
        let n = lts.num_states();
        let (p, r) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let d = wb.metric(p, r)?.term;
        for &s in u.terms() {
            queries += 1;
            if wb.leq(d, s)? != param_bisim(&lts, wb.mlts(), p, r, s)? {
                return Ok(fail(format!(
                    "instance {i}: d = {} against {}",
                    wb.render(d),
                    wb.render(s)
                )));
            }
        }
        // composite parameters outside the universe, against exact d; the
        // characteristic closure grows too fast past three processes
        if n > 3 {
            continue;
        }
        let exact = Workbench::with_characteristic(lts.clone(), &m, &[])?;
        exact_runs += 1;
        let de = exact.metric(p, r)?.term;
        let pick = |rng: &mut Rng64| *u.terms().choose(rng).unwrap();
        let (a, b) = (pick(&mut rng), pick(&mut rng));
        for s in [
            exact.mlts().meet(&[a, b])?,
            exact.mlts().join(&[a, b])?,
            exact.mlts().plus(a, b)?,
        ] {
            queries += 1;
            if exact.mlts().leq(de, s)? != param_bisim(&lts, exact.mlts(), p, r, s)? {
                return Ok(fail(format!(
                    "instance {i}: exact d = {} against {}",
                    exact.render(de),
                    exact.render(s)
                )));
            }
        }
    }
    Ok(pass(format!(
        "200 instances ({exact_runs} with exact d), {queries} queries, families equal to the oracle"
    )))
}

fn pseudometric_lts(rng: &mut Rng64, q: &Quantale) -> ProcessLts {
    let labels = &gen::LABELS[..rng.gen_range(1..=2)];
    let n = rng.gen_range(2..=3);
    let mut lts = gen::random_lts(rng, q, "p", n, labels, 0.3, ImmediatePolicy::Canonical);
    if rng.gen_bool(0.5) {
        let pool = gen::value_pool(q);
        gen::random_table(rng, &mut lts, &pool, true);
    }
    lts
}

fn metric_theorem() -> Result<Outcome, cbm_core::Error> {
    let mut fx = base(&["P.lts", "Q.lts", "R.lts", "Pp.lts", "Qp.lts"]);
    fx.set_policy(ImmediatePolicy::Canonical);
    let m = v0(&["S0.mlts", "Spp.mlts", "Mpar.mlts"]);
    let r = metric_axiom_check(&Workbench::with_characteristic(fx, &m, &[])?)?;
    if let Some(e) = r.failures().next() {
        return Ok(fail(format!("fixtures: {} {:?}", e.id, e.witness)));
    }
    let mut rng = gen::rng(SEED + 2);
    let mut qs = finite_quantales();
    qs.push(Quantale::reals().with_eps(EPS));
    for i in 0..100 {
        let q = &qs[i % qs.len()];
        let lts = pseudometric_lts(&mut rng, q);
        let labels: Vec<&str> = lts.labels().iter().map(String::as_str).collect();
        let bases = rng.gen_range(0..=3);
        let m = gen::random_mlts(&mut rng, q, bases, &labels, wide_bounds());
        let r = metric_axiom_check(&Workbench::with_characteristic(lts, &m, &[])?)?;
        if let Some(e) = r.failures().next() {
            return Ok(fail(format!(
                "instance {i} over {}: {} {:?}",
                q.name(),
                e.id,
                e.witness
            )));
        };
    }
    Ok(pass("fixtures and 100 random instances, zero violations"))
}

fn bisimilarity_as_cbm() -> Result<Outcome, cbm_core::Error> {
    let mut rng = gen::rng(SEED + 3);
    let two_state = Mlts::new(Quantale::Boolean, &gen::LABELS[..2], bounds());
    let mut pairs = 0;
    for i in 0..200 {
        let n = rng.gen_range(1..=8);
        let labels = &gen::LABELS[..rng.gen_range(1..=2)];
        let lts = gen::random_lts(
            &mut rng,
            &Quantale::Boolean,
            "p",
            n,
            labels,
            0.2,
            ImmediatePolicy::Canonical,
        );
        let part = strong_bisim(&lts);
        let wb = Workbench::new(lts, &two_state, &[])?;
        for p in 0..n {
            for r in 0..n {
                pairs += 1;
                let zero = wb.equiv(wb.metric(p, r)?.term, TermId::BOT)?;
                if zero != part.same(p, r) {
                    return Ok(fail(format!("instance {i}: pair ({p}, {r})")));
                }
            }
        }
    }
    Ok(pass(format!("200 LTSs, {pairs} pairs agree with partition refinement")))
}

fn behavioural_metrics() -> Result<Outcome, cbm_core::Error> {
    let mut rng = gen::rng(SEED + 4);
    let qs = [
        Quantale::Boolean,
        Quantale::reals().with_eps(EPS),
        Quantale::unit_interval().with_eps(EPS),
        Quantale::finite(FiniteQuantale::chain4()),
    ];
    let b = bounds();
    for i in 0..100 {
        let q = &qs[i % qs.len()];
        let labels = &gen::LABELS[..rng.gen_range(1..=2)];
        let n = rng.gen_range(2..=5);
        let mut lts = gen::random_lts(&mut rng, q, "p", n, labels, 0.25, ImmediatePolicy::Canonical);
        let pool = gen::value_pool(q);
        let metric = rng.gen_bool(0.5);
        gen::random_table(&mut rng, &mut lts, &pool, metric);
        let per_move = behavioural_metric(&lts, MetricStyle::PerMove, b.max_iterations, 1 << 16)?;
        let hausdorff = behavioural_metric(&lts, MetricStyle::Hausdorff, b.max_iterations, 1 << 16)?;
        let n = lts.num_states();
        for p in 0..n {
            for r in 0..n {
                if !q.equal(per_move.get(p, r), hausdorff.get(p, r)) {
                    return Ok(fail(format!(
                        "instance {i} over {}: tables differ at ({p}, {r})",
                        q.name()
                    )));
                }
            }
        }
        let report = behavioural_as_cbm(&lts, &hausdorff)?;
        if let Some(e) = report.failures().next() {
            return Ok(fail(format!("instance {i} over {}: {:?}", q.name(), e.witness)));
        };
    }
    Ok(pass(
        "100 instances: per-move = Hausdorff, and down of d = M on every pair",
    ))
}

fn environment_embedding() -> Result<Outcome, cbm_core::Error> {
    let mut rng = gen::rng(SEED + 5);
    let labels = &gen::LABELS[..2];
    let (mut claims, mut violations) = (0, 0);
    let mut first = None;
    let mut converse_ok = true;
    let mut with_distance_ok = true;
    for i in 0..50 {
        let envn = rng.gen_range(1..=3);
        let env = gen::random_env(&mut rng, envn, labels, 0.3);
        let n = rng.gen_range(2..=4);
        let lts = gen::random_lts(
            &mut rng,
            &Quantale::Boolean,
            "p",
            n,
            labels,
            0.3,
            ImmediatePolicy::CommonAction,
        );
        let emb = embed_environment(&env, labels)?;
        let wb = Workbench::new(lts.clone(), &emb.mlts, &[])?;
        let epb = env_param_bisim(&lts, &env)?;
        let epb_d = env_param_bisim_with_distance(&lts, &env)?;
        let n = lts.num_states();
        for e in 0..env.num_states() {
            let s_e = emb.states[e];
            for p in 0..n {
                for r in 0..n {
                    let below = wb.leq(wb.metric(p, r)?.term, s_e)?;
                    if epb[e][p][r] {
                        claims += 1;
                        if !below {
                            violations += 1;
                            first.get_or_insert_with(|| {
                                format!(
                                    "instance {i}: {} ~_{} {} but D = {} and d = {}",
                                    lts.state_name(p),
                                    env.state_name(e),
                                    lts.state_name(r),
                                    lts.quantale.display(lts.immediate(p, r)),
                                    wb.render(wb.metric(p, r).unwrap().term)
                                )
                            });
                        }
                    }
                    converse_ok &= !below || epb[e][p][r];
                    with_distance_ok &= below == epb_d[e][p][r];
                }
            }
        }
    }
    println!(
        "info  environment: converse (d ≼ s_e implies p ~_e q): {}",
        if converse_ok { "holds" } else { "fails" }
    );
    println!(
        "info  environment: with a D clause added to EPB, d ≼ s_e iff related: {}",
        if with_distance_ok { "holds" } else { "fails" }
    );
    let detail = format!("{claims} related triples, {violations} with d not below s_e");
    Ok(match first {
        None => pass(detail),
        Some(w) => fail(format!("{detail}; first: {w}")),
    })
}

fn composition_verifiers() -> Result<Outcome, cbm_core::Error> {
    let mut rng = gen::rng(SEED + 6);
    let qs = finite_quantales();
    let ops: Vec<Operator> = ["restrict:a", "prefix:a", "sum", "par", "bang"]
        .iter()
        .map(|o| o.parse().unwrap())
        .collect();
    let (mut pass_n, mut skip_n, mut pre_skips) = (0, 0, 0);
    for i in 0..40 {
        let q = &qs[i % qs.len()];
        let labels = &gen::LABELS[..2];
        let n = rng.gen_range(2..=3);
        let mut lts = gen::random_lts(&mut rng, q, "p", n, labels, 0.3, ImmediatePolicy::Canonical);
        random_policy(&mut rng, &mut lts);
        let bases = rng.gen_range(1..=2);
        let m = gen::random_mlts(&mut rng, q, bases, labels, bounds());
        let op = &ops[i % ops.len()];
        let r = verify_composition(&lts, &m, op, &ComposeConfig::default())?;
        if let Some(e) = r.failures().next() {
            return Ok(fail(format!(
                "instance {i} ({op} over {}): {} {:?}",
                q.name(),
                e.id,
                e.witness
            )));
        }
        if r.find("precondition.comp-imm")
            .is_some_and(|e| e.status == Status::Skip)
        {
            pre_skips += 1;
        }
        pass_n += r.count(Status::Pass);
        skip_n += r.count(Status::Skip);
    }
    let fx = verify_composition(
        &base(&pqr()),
        &v0(&["S0.mlts", "Spp.mlts"]),
        &Operator::Sum,
        &ComposeConfig {
            candidates: Some(["p0", "q0", "r0"].iter().map(|s| ProcessTerm::atom(s)).collect()),
            ..ComposeConfig::default()
        },
    )?;
    if let Some(e) = fx.failures().next() {
        return Ok(fail(format!("fixture sum: {} {:?}", e.id, e.witness)));
    }
    Ok(pass(format!(
        "40 instances: {pass_n} checks passed, {skip_n} gated ({pre_skips} instances without comp-imm), zero violations"
    )))
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 12] = [
        ("example.restriction-metric", restriction_example),
        ("example.prefix-structure", prefix_example),
        ("example.sum-metric", sum_example),
        ("example.parallel-metric-and-compatibility", parallel_example),
        ("example.replication-metric", replication_example),
        ("laws.mlts-closure-and-random", mlts_laws),
        ("characterization.metric-vs-param-bisim", characterization),
        ("metric-theorem.pseudometric-axioms", metric_theorem),
        ("bisimilarity.boolean-cbm", bisimilarity_as_cbm),
        ("behavioural.per-move-hausdorff-cbm", behavioural_metrics),
        ("environment.epb-implies-below-s_e", environment_embedding),
        ("composition.verifiers", composition_verifiers),
    ];
    println!("acceptance: seed {SEED:#x}, eps {EPS:e}");
    let mut failed = 0;
    for (id, check) in criteria {
        let start = Instant::now();
        let outcome = check().unwrap_or_else(|e| fail(format!("error: {e}")));
        let ms = start.elapsed().as_millis();
        let tag = if outcome.pass { "PASS" } else { "FAIL" };
        println!("{tag}  {id}  ({ms} ms)  {}", outcome.detail);
        failed += usize::from(!outcome.pass);
    }
    println!("acceptance: {} passed, {failed} failed", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
