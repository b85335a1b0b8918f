//! Law checks for MLTSs: the order is a preorder with extremal `bot`/`top`,
//! `meet`/`join` are glb/lub, `plus` is a commutative monoid distributing
//! over meets, and the quotient by `≃_V` is well defined.

use super::{Mlts, SimPreorder, TermId, Universe};
use crate::error::Result;
use crate::report::{Entry, Report, Status};

/// Runs every law over `universe` with the default sample (8 terms, subsets
/// of at most 2).
pub fn validate_mlts(m: &Mlts, universe: &Universe) -> Report {
    validate_mlts_with(m, universe, 8, 2)
}

fn pick_sample(u: &Universe, size: usize) -> Vec<TermId> {
    let n = u.len();
    if n <= size {
        return u.terms().to_vec();
    }
    let head = size / 2;
    let mut out: Vec<TermId> = u.terms()[..head].to_vec();
    let rest = n - head;
    let tail = size - head;
    for k in 0..tail {
        out.push(u.term(head + k * rest / tail));
    }
    out
}

fn subsets(xs: &[TermId], max: usize) -> Vec<Vec<TermId>> {
    let mut out = vec![vec![]];
    let mut frontier: Vec<(usize, Vec<TermId>)> = vec![(0, vec![])];
    for _ in 0..max.min(xs.len()) {
        let mut next = Vec::new();
        for (start, s) in &frontier {
            for (i, &x) in xs.iter().enumerate().skip(*start) {
                let mut t = s.clone();
                t.push(x);
                next.push((i + 1, t));
            }
        }
        out.extend(next.iter().map(|(_, s)| s.clone()));
        frontier = next;
    }
    out
}

/// As [`validate_mlts`], with explicit sample size and subset bound.
pub fn validate_mlts_with(m: &Mlts, universe: &Universe, sample_size: usize, max_subset: usize) -> Report {
    let sim = SimPreorder::compute(m, universe);
    let sample = pick_sample(universe, sample_size);
    let subs = subsets(&sample, max_subset);
    let mut report = Report::new("MLTS laws")
        .with_config("universe", universe.len())
        .with_config("sample", sample.len())
        .with_config("max_subset", max_subset);
    let show = |t: TermId| m.render(t);
    let show_set = |xs: &[TermId]| format!("{{{}}}", xs.iter().map(|&x| show(x)).collect::<Vec<_>>().join(", "));
    let eq = |a: TermId, b: TermId| m.equiv(a, b);

    let mut record = |id: &str, outcome: Result<Option<Vec<String>>>| {
        let e = match outcome {
            Ok(None) => Entry::new(id, Status::Pass),
            Ok(Some(w)) => Entry::new(id, Status::Fail).witness(w),
            Err(e) => Entry::new(id, Status::Skip).detail(e.to_string()),
        };
        report.push(e);
    };

    let n = universe.len();
    let preorder = (|| {
        if let Some(i) = (0..n).find(|&i| !sim.leq(i, i)) {
            return Ok(Some(vec![show(universe.term(i))]));
        }
        for i in 0..n {
            for j in 0..n {
                if !sim.leq(i, j) {
                    continue;
                }
                if let Some(k) = (0..n).find(|&k| sim.leq(j, k) && !sim.leq(i, k)) {
                    return Ok(Some(
                        vec![universe.term(i), universe.term(j), universe.term(k)]
                            .into_iter()
                            .map(show)
                            .collect(),
                    ));
                }
            }
        }
        Ok(None)
    })();
    record("1.preorder", preorder);

    let routes = (|| {
        for &a in &sample {
            for &b in &sample {
                let (i, j) = (universe.index_of(a).unwrap(), universe.index_of(b).unwrap());
                if sim.leq(i, j) != m.leq(a, b)? {
                    return Ok(Some(vec![show(a), show(b)]));
                }
            }
        }
        Ok(None)
    })();
    record("1.routes_agree", routes);

    let (bot, top) = (TermId::BOT, m.designated_top());
    let extremal = (|| {
        for &t in universe.terms() {
            if !m.leq(bot, t)? {
                return Ok(Some(vec!["bot".to_string(), show(t)]));
            }
        }
        Ok(None)
    })();
    record("2.bot_least", extremal);
    let extremal = (|| {
        for &t in universe.terms() {
            if !m.leq(t, top)? {
                return Ok(Some(vec![show(t), show(top)]));
            }
        }
        Ok(None)
    })();
    record("2.top_greatest", extremal);

    let glb = (|| {
        for s in &subs {
            let g = m.meet(s)?;
            for &x in s {
                if !m.leq(g, x)? {
                    return Ok(Some(vec![show_set(s), show(g), format!("not below {}", show(x))]));
                }
            }
            for &c in &sample {
                let lower = s
                    .iter()
                    .try_fold(true, |acc, &x| Ok::<_, crate::Error>(acc && m.leq(c, x)?))?;
                if lower && !m.leq(c, g)? {
                    return Ok(Some(vec![
                        show_set(s),
                        show(g),
                        format!("{} is a greater lower bound", show(c)),
                    ]));
                }
            }
        }
        Ok(None)
    })();
    record("3.meet_glb", glb);

    let lub = (|| {
        for s in &subs {
            let j = m.join(s)?;
            for &x in s {
                if !m.leq(x, j)? {
                    return Ok(Some(vec![show_set(s), show(j), format!("not above {}", show(x))]));
                }
            }
            for &c in &sample {
                let upper = s
                    .iter()
                    .try_fold(true, |acc, &x| Ok::<_, crate::Error>(acc && m.leq(x, c)?))?;
                if upper && !m.leq(j, c)? {
                    return Ok(Some(vec![
                        show_set(s),
                        show(j),
                        format!("{} is a smaller upper bound", show(c)),
                    ]));
                }
            }
        }
        Ok(None)
    })();
    record("4.join_lub", lub);

    let dist = (|| {
        for &s in &sample {
            for xs in &subs {
                let lhs = m.plus(s, m.meet(xs)?)?;
                let parts: Vec<TermId> = xs.iter().map(|&x| m.plus(s, x)).collect::<Result<_>>()?;
                let rhs = m.meet(&parts)?;
                if !eq(lhs, rhs)? {
                    return Ok(Some(vec![show(s), show_set(xs)]));
                }
            }
        }
        Ok(None)
    })();
    record("5.plus_distributes", dist);

    let unit = (|| {
        for &s in &sample {
            if !eq(m.plus(s, bot)?, s)? {
                return Ok(Some(vec![show(s)]));
            }
        }
        Ok(None)
    })();
    record("6.plus_unit", unit);

    let comm = (|| {
        for &a in &sample {
            for &b in &sample {
                if !eq(m.plus(a, b)?, m.plus(b, a)?)? {
                    return Ok(Some(vec![show(a), show(b)]));
                }
            }
        }
        Ok(None)
    })();
    record("7.plus_commutative", comm);

    let assoc = (|| {
        for &a in &sample {
            for &b in &sample {
                let ab = m.plus(a, b)?;
                for &c in &sample {
                    if !eq(m.plus(ab, c)?, m.plus(b, m.plus(a, c)?)?)? {
                        return Ok(Some(vec![show(a), show(b), show(c)]));
                    }
                }
            }
        }
        Ok(None)
    })();
    record("8.plus_associative", assoc);

    let congruence = (|| {
        let reps = sim.representatives();
        for i in 0..n {
            let r = reps[i];
            if r == i {
                continue;
            }
            let (a, b) = (universe.term(r), universe.term(i));
            for &t in &sample {
                let pairs = [
                    (m.meet(&[a, t])?, m.meet(&[b, t])?),
                    (m.join(&[a, t])?, m.join(&[b, t])?),
                    (m.plus(a, t)?, m.plus(b, t)?),
                ];
                if let Some(k) = pairs.iter().try_fold(None, |found, &(x, y)| {
                    Ok::<_, crate::Error>(found.or(if eq(x, y)? { None } else { Some((x, y)) }))
                })? {
                    return Ok(Some(vec![show(a), show(b), show(t), show(k.0), show(k.1)]));
                }
            }
        }
        Ok(None)
    })();
    record("9.quotient_congruence", congruence);
    let classes = sim.num_classes();
    report.push(Entry::new("9.partial_order", Status::Info).detail(format!(
        "{classes} classes over {n} terms; {}",
        if classes == n {
            "the order is already antisymmetric"
        } else {
            "quantale up to the quotient"
        }
    )));
    report
}
