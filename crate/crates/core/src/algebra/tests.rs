use super::*;
use crate::bounds::Bounds;
use crate::fixtures;
use crate::lts::{load_lts_documents, ProcessLts};
use crate::mlts::{load_mlts_documents, Mlts, TermId, Universe};
use crate::report::Status;
use crate::solver::Workbench;

fn base() -> ProcessLts {
    load_lts_documents(
        &[
            ("P.lts", fixtures::P_LTS),
            ("Q.lts", fixtures::Q_LTS),
            ("R.lts", fixtures::R_LTS),
        ],
        None,
    )
    .unwrap()
}

fn mlts(names: &[&str]) -> Mlts {
    let docs: Vec<(&str, &str)> = names.iter().map(|n| (*n, fixtures::get(n).unwrap())).collect();
    load_mlts_documents(&docs, None, Bounds::default()).unwrap()
}

fn terms(roots: &[&str], bounds: &Bounds) -> TermLts {
    let roots: Vec<ProcessTerm> = roots.iter().map(|r| ProcessTerm::parse(r).unwrap()).collect();
    build_term_lts(&base(), &roots, bounds).unwrap()
}

fn metric(wb: &Workbench, t: &TermLts, p: &str, q: &str) -> TermId {
    wb.metric(t.state_of(p).unwrap(), t.state_of(q).unwrap()).unwrap().term
}

#[test]
fn restriction_example() {
    let t = terms(&["nu a p0", "nu a q0"], &Bounds::default());
    let wb = Workbench::new(t.lts.clone(), &mlts(&["S0.mlts"]), &[]).unwrap();
    assert_eq!(metric(&wb, &t, "nu a p0", "nu a q0"), TermId::BOT);
}

#[test]
fn sum_example() {
    let t = terms(&["p0 + r0", "q0 + r0"], &Bounds::default());
    let m = mlts(&["S0.mlts"]);
    let wb = Workbench::new(t.lts.clone(), &m, &[]).unwrap();
    let d = metric(&wb, &t, "p0 + r0", "q0 + r0");
    assert!(wb.equiv(d, m.base("s0").unwrap()).unwrap(), "{}", wb.render(d));
}

#[test]
fn prefix_example_structure() {
    let t = terms(&["b.p0", "b.q0"], &Bounds::default());
    let m = mlts(&["S0.mlts"]);
    let wb = Workbench::with_characteristic(t.lts.clone(), &m, &[]).unwrap();
    let d = metric(&wb, &t, "b.p0", "b.q0");
    let mm = wb.mlts();
    let bs = mm.moves(d, mm.label("b").unwrap()).unwrap();
    assert_eq!(bs.len(), 1);
    assert!(wb.equiv(bs[0], m.base("s0").unwrap()).unwrap());
    let as_ = mm.moves(d, mm.label("a").unwrap()).unwrap();
    assert_eq!(as_.len(), 1);
    assert!(wb.equiv(as_[0], TermId::BOT).unwrap());
}

#[test]
fn parallel_example_matches_bundled_distance() {
    let t = terms(&["p0 | r0", "q0 | r0"], &Bounds::default());
    let m = mlts(&["S0.mlts", "Mpar.mlts"]);
    let wb = Workbench::with_characteristic(t.lts.clone(), &m, &[]).unwrap();
    let d = metric(&wb, &t, "p0 | r0", "q0 | r0");
    assert!(wb.equiv(d, m.base("m0").unwrap()).unwrap(), "{}", wb.render(d));
}

#[test]
fn replication_example() {
    let b = Bounds::default();
    assert_eq!(b.unfold, 3);
    let t = terms(&["!p0", "!q0"], &b);
    let wb = Workbench::new(t.lts.clone(), &mlts(&["S0.mlts"]), &[]).unwrap();
    assert_eq!(metric(&wb, &t, "!p0", "!q0"), TermId::BOT);
    let part = crate::solver::strong_bisim(&t.lts);
    assert!(part.same(t.state_of("!p0").unwrap(), t.state_of("!q0").unwrap()));
}

#[test]
fn compatibility_example() {
    let t = terms(&["p0"], &Bounds::default());
    let m = mlts(&["S0.mlts", "Spp.mlts"]);
    let u = Universe::reachable(&m, &[]).unwrap();
    let c = compatibility(&m, &t.lts, &u).unwrap();
    let p0 = t.state_of("p0").unwrap();
    assert_eq!(c.is_compatible(m.base("s0").unwrap(), p0), Some(false));
    assert_eq!(c.is_compatible(m.base("s''0").unwrap(), p0), Some(true));
    for p in 0..t.lts.num_states() {
        assert_eq!(c.is_compatible(TermId::TOP, p), Some(true));
    }
}

#[test]
fn increasing_examples() {
    let m = mlts(&["S0.mlts", "Spp.mlts"]);
    let u = Universe::reachable(&m, &[]).unwrap();
    let inc = increasing_states(&m, &u);
    assert!(inc.contains(&TermId::BOT));
    assert!(inc.contains(&TermId::TOP));
    assert!(!inc.contains(&m.base("s0").unwrap()));
}

#[test]
fn f_hat_restriction_bound() {
    let cands: Vec<ProcessTerm> = ["p0", "q0", "r0"].iter().map(|s| ProcessTerm::atom(s)).collect();
    let op = Operator::Restrict("a".into());
    let mut roots = cands.clone();
    roots.extend(cands.iter().map(|c| op.apply(std::slice::from_ref(c))));
    let t = build_term_lts(&base(), &roots, &Bounds::default()).unwrap();
    let m = mlts(&["S0.mlts"]);
    let wb = Workbench::with_characteristic(t.lts.clone(), &m, &[]).unwrap();
    let s0 = m.base("s0").unwrap();
    let fh = f_hat(&wb, &t, &op, &[ProcessTerm::atom("p0")], &[s0], &cands).unwrap();
    assert!(wb.leq(fh, s0).unwrap());
    let top = f_hat(&wb, &t, &op, &[ProcessTerm::atom("p0")], &[TermId::TOP], &cands).unwrap();
    assert!(wb.leq(top, TermId::TOP).unwrap());
}

fn no_failures(r: &crate::report::Report) {
    assert_eq!(r.count(Status::Fail), 0, "{}", r.to_text());
}

#[test]
fn verifiers_on_fixtures() {
    let mut b = base();
    b.set_policy(crate::lts::ImmediatePolicy::Canonical);
    let m = mlts(&["S0.mlts", "Spp.mlts"]);
    for op in ["restrict:a", "restrict:b", "sum", "par", "prefix:a", "prefix:b", "bang"] {
        let op: Operator = op.parse().unwrap();
        let r = verify_composition(&b, &m, &op, &ComposeConfig::default()).unwrap();
        no_failures(&r);
        assert_eq!(r.find("precondition.comp-imm").unwrap().status, Status::Pass);
        assert!(r.count(Status::Pass) > 1, "{op}: {}", r.to_text());
    }
}

#[test]
fn liberal_distance_needs_restricted_candidates() {
    let m = mlts(&["S0.mlts", "Spp.mlts"]);
    let all = verify_composition(&base(), &m, &Operator::Sum, &ComposeConfig::default()).unwrap();
    assert_eq!(all.find("precondition.comp-imm").unwrap().status, Status::Skip);
    let config = ComposeConfig {
        candidates: Some(["p0", "q0", "r0"].iter().map(|s| ProcessTerm::atom(s)).collect()),
        ..ComposeConfig::default()
    };
    for op in [Operator::Sum, Operator::Par] {
        let r = verify_composition(&base(), &m, &op, &config).unwrap();
        no_failures(&r);
        assert_eq!(r.find("precondition.comp-imm").unwrap().status, Status::Pass);
    }
    let r = verify_composition(&base(), &m, &Operator::Par, &config).unwrap();
    // s''0 is p0-compatible and bot is compatible with everything
    assert_eq!(r.find("par(p0,r0; s''0,bot)").unwrap().status, Status::Pass);
    assert_eq!(r.find("par(p0,r0; bot,s0)").unwrap().status, Status::Skip);
}

#[test]
fn literal_f_hat_agrees_on_small_instances() {
    let b = base();
    let m = mlts(&["S0.mlts"]);
    let config = ComposeConfig {
        candidates: Some(["p0", "q0", "r0"].iter().map(|s| ProcessTerm::atom(s)).collect()),
        params: None,
        literal: true,
    };
    for op in ["restrict:a", "sum", "prefix:b"] {
        let r = verify_composition(&b, &m, &op.parse().unwrap(), &config).unwrap();
        no_failures(&r);
    }
}

#[test]
fn replication_skips_non_increasing() {
    let r = verify_composition(&base(), &mlts(&["S0.mlts"]), &Operator::Bang, &ComposeConfig::default()).unwrap();
    let e = r.entries.iter().find(|e| e.id.ends_with("; s0)")).unwrap();
    assert_eq!(e.status, Status::Skip);
}

#[test]
fn operator_names_round_trip() {
    for s in ["restrict:a", "prefix:b", "sum", "par", "bang"] {
        assert_eq!(s.parse::<Operator>().unwrap().to_string(), s);
    }
    assert!("restrict".parse::<Operator>().is_err());
}
