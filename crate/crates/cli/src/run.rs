use std::fmt::Write as _;

use cbm_core::algebra::{build_term_lts, verify_composition, ComposeConfig, Operator, ProcessTerm};
use cbm_core::gen;
use cbm_core::mlts::{close_pre_mlts, validate_mlts};
use cbm_core::quantale::validate_quantale;
use cbm_core::solver::{
    behavioural_as_cbm, behavioural_metric, brute_force_family, param_bisim_family, MetricStyle, MetricTable,
};
use cbm_core::{
    validate_immediate_metric, Bounds, Entry, Error, FiniteQuantale, ImmediatePolicy, Mlts, ProcessLts, Quantale,
    Report, Result, Status, Term, TermId, Universe, Workbench,
};
use rand::Rng;

use crate::inputs::{self, need};
use crate::{Cli, Command, Format, Global, Style};

pub struct Output {
    pub text: String,
    pub code: u8,
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Resource { .. } | Error::Guard(_) => 3,
        _ => 2,
    }
}

struct Ctx<'a> {
    g: &'a Global,
    bounds: Bounds,
    quantale: Option<Quantale>,
    lts: Option<ProcessLts>,
    mlts: Option<Mlts>,
}

impl Ctx<'_> {
    fn report(&self, command: &str, title: impl Into<String>) -> Report {
        let g = self.g;
        let quantale = self
            .quantale
            .as_ref()
            .or(self.lts.as_ref().map(|l| &l.quantale))
            .or(self.mlts.as_ref().map(|m| &m.quantale));
        let mut r = Report::new(title)
            .with_config("command", command)
            .with_config("bounds", self.bounds)
            .with_config("seed", g.seed);
        if !g.lts.is_empty() {
            r = r.with_config("lts", g.lts.join(","));
        }
        if !g.mlts.is_empty() {
            r = r.with_config("mlts", g.mlts.join(","));
        }
        if let Some(q) = quantale {
            r = r.with_config("quantale", q.name());
        }
        if let Some(l) = &self.lts {
            r = r.with_config("policy", l.policy());
        }
        r
    }

    /// The loaded MLTS, or one without base states over the LTS's labels.
    fn mlts_or_empty(&self, lts: &ProcessLts) -> Mlts {
        self.mlts
            .clone()
            .unwrap_or_else(|| Mlts::new(lts.quantale.clone(), lts.labels(), self.bounds))
    }
}

pub fn run(cli: &Cli) -> Result<Output> {
    let g = &cli.global;
    let bounds = inputs::bounds(g)?;
    let quantale = inputs::quantale(g)?;
    let lts = inputs::lts(g, quantale.as_ref())?;
    let mlts = inputs::mlts(g, quantale.as_ref(), bounds)?;
    let ctx = Ctx {
        g,
        bounds,
        quantale,
        lts,
        mlts,
    };
    match &cli.command {
        Command::Validate { max_subset } => validate(&ctx, *max_subset),
        Command::Metric { p, q, exact } => metric(&ctx, p, q, *exact),
        Command::Check { p, q, s } => check(&ctx, p, q, s),
        Command::Order { s, t } => order(&ctx, s, t),
        Command::Behavioural { style } => behavioural(&ctx, *style),
        Command::Compose {
            operator,
            candidates,
            params,
            literal,
        } => compose(&ctx, operator, candidates, params, *literal),
        Command::Closure => closure(&ctx),
        Command::Oracle { instances } => oracle(&ctx, *instances),
    }
}

fn emit(g: &Global, report: &Report) -> Output {
    let text = match g.format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json() + "\n",
    };
    Output {
        text,
        code: report.exit_status() as u8,
    }
}

/// Query commands answer with a bare line in text mode and a report in JSON.
fn answer(g: &Global, report: &Report, text: String, code: u8) -> Output {
    match g.format {
        Format::Text => Output { text, code },
        Format::Json => Output {
            text: report.to_json() + "\n",
            code,
        },
    }
}

fn validate(ctx: &Ctx, max_subset: usize) -> Result<Output> {
    let q = ctx
        .quantale
        .clone()
        .or(ctx.lts.as_ref().map(|l| l.quantale.clone()))
        .or(ctx.mlts.as_ref().map(|m| m.quantale.clone()))
        .ok_or_else(|| Error::Contract("validate needs --quantale, --lts or --mlts".into()))?;
    let mut report = ctx.report("validate", "law suites");
    let sample = q.carrier().unwrap_or_else(|| q.default_sample());
    report.merge("quantale", validate_quantale(&q, &sample, max_subset)?);
    if let Some(lts) = &ctx.lts {
        report.merge("lts", validate_immediate_metric(lts));
    }
    if let Some(m) = &ctx.mlts {
        let closure = close_pre_mlts(m)?;
        report.merge("mlts", validate_mlts(m, &closure.universe));
    }
    Ok(emit(ctx.g, &report))
}

fn is_user_state(m: &Mlts, t: TermId) -> bool {
    match m.node(t) {
        Term::Bot | Term::Top => true,
        Term::Base(i) => !m.bases()[i as usize].name.starts_with('<'),
        _ => false,
    }
}

/// Renders `t`, naming an equivalent user state when there is one.
fn render_with_alias(wb: &Workbench, t: TermId) -> Result<String> {
    let shown = wb.render(t);
    if is_user_state(wb.mlts(), t) {
        return Ok(shown);
    }
    let mut named = vec![TermId::BOT, TermId::TOP];
    named.extend(
        wb.mlts()
            .base_terms()
            .into_iter()
            .filter(|&b| is_user_state(wb.mlts(), b)),
    );
    for u in named {
        if wb.equiv(t, u)? {
            return Ok(format!("{shown} ≃ {}", wb.render(u)));
        }
    }
    Ok(shown)
}

/// One-level moves of a synthesized distance.
fn describe(wb: &Workbench, t: TermId) -> Result<Vec<String>> {
    let m = wb.mlts();
    if is_user_state(m, t) {
        return Ok(Vec::new());
    }
    let mut lines = vec![format!("down = {}", m.quantale.display(m.down(t)))];
    for (l, succ) in m.all_moves(t)? {
        let shown: Vec<String> = succ.iter().map(|&s| render_with_alias(wb, s)).collect::<Result<_>>()?;
        lines.push(format!("-{}-> {{{}}}", m.labels()[l], shown.join(", ")));
    }
    Ok(lines)
}

fn metric(ctx: &Ctx, p: &str, q: &str, exact: bool) -> Result<Output> {
    let lts = need(ctx.lts.clone(), "lts")?;
    let m = ctx.mlts_or_empty(&lts);
    let (tp, tq) = (ProcessTerm::parse(p)?, ProcessTerm::parse(q)?);
    let terms = build_term_lts(&lts, &[tp.clone(), tq.clone()], &ctx.bounds)?;
    let wb = if exact {
        Workbench::with_characteristic(terms.lts.clone(), &m, &[])?
    } else {
        Workbench::new(terms.lts.clone(), &m, &[])?
    };
    let d = wb.metric(terms.state(&tp)?, terms.state(&tq)?)?;
    let shown = wb.render(d.term);
    let lines = describe(&wb, d.term)?;

    let mut report = ctx
        .report("metric", format!("d({tp}, {tq})"))
        .with_config("exact", exact)
        .with_config("universe", wb.universe().len())
        .with_config("bounded", terms.lts.is_bounded());
    let mut e = Entry::new(format!("d({tp}, {tq})"), Status::Info).detail(format!(
        "{shown} (in universe: {}, parameters: {})",
        d.in_universe, d.parameters
    ));
    if !lines.is_empty() {
        e = e.witness(&lines);
    }
    report.push(e);

    let mut text = format!("{shown}\n");
    for l in &lines {
        let _ = writeln!(text, "  {l}");
    }
    if !d.in_universe {
        text.push_str("  (meet of the minimal parameters; no least one in the universe)\n");
    }
    if terms.lts.is_bounded() {
        let _ = writeln!(text, "  (replication saturated at K={})", ctx.bounds.unfold);
    }
    Ok(answer(ctx.g, &report, text, 0))
}

fn check(ctx: &Ctx, p: &str, q: &str, s: &str) -> Result<Output> {
    let lts = need(ctx.lts.clone(), "lts")?;
    let m = ctx.mlts_or_empty(&lts);
    let (tp, tq) = (ProcessTerm::parse(p)?, ProcessTerm::parse(q)?);
    let terms = build_term_lts(&lts, &[tp.clone(), tq.clone()], &ctx.bounds)?;
    let s = m.parse_term(s)?;
    let wb = Workbench::new(terms.lts.clone(), &m, &[s])?;
    let ok = wb.check(terms.state(&tp)?, terms.state(&tq)?, s)?;
    let id = format!("{tp} ~[{}] {tq}", wb.render(s));
    let mut report = ctx.report("check", "parametrized bisimilarity");
    report.check(id, ok, None);
    Ok(answer(ctx.g, &report, format!("{ok}\n"), u8::from(!ok)))
}

fn order(ctx: &Ctx, s: &str, t: &str) -> Result<Output> {
    let m = need(ctx.mlts.clone(), "mlts")?;
    let (a, b) = (m.parse_term(s)?, m.parse_term(t)?);
    let ok = m.leq(a, b)?;
    let mut report = ctx.report("order", "MLTS order");
    report.check(format!("{} ≼ {}", m.render(a), m.render(b)), ok, None);
    Ok(answer(ctx.g, &report, format!("{ok}\n"), u8::from(!ok)))
}

fn table_entries(report: &mut Report, lts: &ProcessLts, table: &MetricTable) {
    let n = lts.num_states();
    for p in 0..n {
        let row: Vec<String> = (0..n)
            .map(|q| format!("{}={}", lts.state_name(q), lts.quantale.display(table.get(p, q))))
            .collect();
        report.push(
            Entry::new(format!("{}.{}", table.style.as_str(), lts.state_name(p)), Status::Info).detail(row.join(" ")),
        );
    }
}

fn behavioural(ctx: &Ctx, style: Style) -> Result<Output> {
    let lts = need(ctx.lts.clone(), "lts")?;
    let b = &ctx.bounds;
    let mut report = ctx
        .report("behavioural", "behavioural metrics")
        .with_config("style", format!("{style:?}"));
    let run = |s| behavioural_metric(&lts, s, b.max_iterations, b.max_choices);
    let tables = match style {
        Style::PerMove => vec![run(MetricStyle::PerMove)?],
        Style::Hausdorff => vec![run(MetricStyle::Hausdorff)?],
        Style::Both => vec![run(MetricStyle::PerMove)?, run(MetricStyle::Hausdorff)?],
    };
    for t in &tables {
        table_entries(&mut report, &lts, t);
    }
    if let [a, h] = &tables[..] {
        let n = lts.num_states();
        let diff = (0..n)
            .flat_map(|p| (0..n).map(move |q| (p, q)))
            .find(|&(p, q)| !lts.quantale.equal(a.get(p, q), h.get(p, q)));
        let witness = diff.map(|(p, q)| {
            vec![
                format!("({}, {})", lts.state_name(p), lts.state_name(q)),
                format!("per-move {}", lts.quantale.display(a.get(p, q))),
                format!("hausdorff {}", lts.quantale.display(h.get(p, q))),
            ]
        });
        let agree = diff.is_none();
        if lts.quantale.is_totally_ordered() {
            report.check("styles.agree", agree, witness);
        } else {
            let mut e = Entry::new("styles.agree", Status::Info).detail(format!(
                "{agree}; agreement is only claimed on totally ordered quantales"
            ));
            e.witness = witness;
            report.push(e);
        }
    }
    let last = tables.last().expect("at least one style");
    report.merge("cbm", behavioural_as_cbm(&lts, last)?);
    Ok(emit(ctx.g, &report))
}

fn compose(ctx: &Ctx, operator: &str, candidates: &[String], params: &[String], literal: bool) -> Result<Output> {
    let lts = need(ctx.lts.clone(), "lts")?;
    let m = ctx.mlts_or_empty(&lts);
    let op: Operator = operator.parse()?;
    let config = ComposeConfig {
        candidates: if candidates.is_empty() {
            None
        } else {
            Some(
                candidates
                    .iter()
                    .map(|c| ProcessTerm::parse(c))
                    .collect::<Result<_>>()?,
            )
        },
        params: if params.is_empty() {
            None
        } else {
            Some(params.iter().map(|s| m.parse_term(s)).collect::<Result<_>>()?)
        },
        literal,
    };
    let mut report = ctx.report("compose", format!("compositionality of {op}"));
    let inner = verify_composition(&lts, &m, &op, &config)?;
    for (k, v) in &inner.config {
        report.config.entry(k.clone()).or_insert_with(|| v.clone());
    }
    report.merge("", inner);
    Ok(emit(ctx.g, &report))
}

fn closure(ctx: &Ctx) -> Result<Output> {
    let m = need(ctx.mlts.clone(), "mlts")?;
    let c = close_pre_mlts(&m)?;
    let mut report = ctx.report("closure", "bounded closure");
    report.push(Entry::new("terms", Status::Info).detail(c.universe.len().to_string()));
    report.push(Entry::new("classes", Status::Info).detail(c.representatives.len().to_string()));
    report.push(Entry::new("rounds", Status::Info).detail(c.rounds.to_string()));
    for (i, &t) in c.representatives.iter().enumerate() {
        report.push(Entry::new(format!("class.{i}"), Status::Info).detail(m.render(t)));
    }
    Ok(emit(ctx.g, &report))
}

fn compare(lts: &ProcessLts, m: &Mlts) -> Result<Entry> {
    let u = Universe::reachable(m, &[])?;
    let solver = param_bisim_family(lts, m, &u)?;
    let oracle = brute_force_family(lts, m, &u)?;
    let detail = format!("{} processes, {} parameters", lts.num_states(), u.len());
    Ok(match solver.first_difference(&oracle) {
        None => Entry::new("", Status::Pass).detail(detail),
        Some((s, p, q)) => Entry::new("", Status::Fail).detail(detail).witness([
            m.render(u.term(s)),
            lts.state_name(p).to_string(),
            lts.state_name(q).to_string(),
        ]),
    })
}

fn oracle(ctx: &Ctx, instances: usize) -> Result<Output> {
    let mut report = ctx.report("oracle", "solver against brute force");
    if let Some(lts) = &ctx.lts {
        let mut m = ctx.mlts_or_empty(lts);
        for l in lts.labels() {
            m.add_label(l);
        }
        let mut e = compare(lts, &m)?;
        e.id = "input".into();
        report.push(e);
        return Ok(emit(ctx.g, &report));
    }
    let mut rng = gen::rng(ctx.g.seed);
    let qs = [
        Quantale::Boolean,
        Quantale::finite(FiniteQuantale::diamond()),
        Quantale::finite(FiniteQuantale::chain4()),
    ];
    report = report.with_config("instances", instances);
    for i in 0..instances {
        let q = &qs[i % qs.len()];
        let labels = &gen::LABELS[..rng.gen_range(1..=2)];
        let n = rng.gen_range(2..=4);
        let mut lts = gen::random_lts(&mut rng, q, "p", n, labels, 0.3, ImmediatePolicy::Canonical);
        if rng.gen_bool(0.5) {
            let pool = gen::value_pool(q);
            gen::random_table(&mut rng, &mut lts, &pool, false);
        }
        let bases = rng.gen_range(1..=2);
        let m = gen::random_mlts(&mut rng, q, bases, labels, ctx.bounds);
        let mut e = compare(&lts, &m)?;
        e.id = format!("instance.{i}");
        e.detail = format!("{} over {}", e.detail, q.name());
        report.push(e);
    }
    Ok(emit(ctx.g, &report))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_error_kind() {
        let parse = ProcessTerm::parse("a.").unwrap_err();
        assert_eq!(exit_code(&parse), 2);
        let big = Bounds::default().apply_overrides("max_reachable=1").unwrap();
        let lts = cbm_core::load_lts("states: p\nlabels: a\ntrans: p -a-> p\n").unwrap();
        let t = ProcessTerm::parse("p | p").unwrap();
        let err = build_term_lts(&lts, &[t], &big).err();
        assert!(err.as_ref().is_none_or(|e| exit_code(e) == 3));
        assert_eq!(exit_code(&Error::Guard("too many".into())), 3);
    }
}
