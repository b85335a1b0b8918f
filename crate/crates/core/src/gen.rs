//! Seeded random systems for property suites.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::Bounds;
use crate::lts::{ImmediatePolicy, ProcessLts};
use crate::mlts::{Mlts, TermId};
use crate::quantale::{Quantale, QuantaleValue};

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

pub const LABELS: [&str; 3] = ["a", "b", "c"];

/// A process LTS with `states` states named `<prefix><i>` and each possible
/// edge present with probability `density`.
pub fn random_lts(
    rng: &mut Rng64,
    quantale: &Quantale,
    prefix: &str,
    states: usize,
    labels: &[&str],
    density: f64,
    policy: ImmediatePolicy,
) -> ProcessLts {
    let names: Vec<String> = (0..states).map(|i| format!("{prefix}{i}")).collect();
    let mut lts = ProcessLts::new(quantale.clone(), &names, labels).expect("at least one state");
    for p in 0..states {
        for l in 0..labels.len() {
            for q in 0..states {
                if rng.gen_bool(density) {
                    lts.add_transition(p, l, q);
                }
            }
        }
    }
    lts.set_policy(policy);
    lts
}

/// Explicit-table D with values drawn from `values` (bottom on the
/// diagonal, symmetric); pairs are closed under the triangle inequality
/// when `metric` is set.
pub fn random_table(rng: &mut Rng64, lts: &mut ProcessLts, values: &[QuantaleValue], metric: bool) {
    let q = lts.quantale.clone();
    let n = lts.num_states();
    let mut d = vec![vec![q.bottom(); n]; n];
    for p in 0..n {
        for r in p + 1..n {
            let v = *values.choose(rng).expect("non-empty value set");
            d[p][r] = v;
            d[r][p] = v;
        }
    }
    if metric {
        // shortest paths under plus, as in Floyd-Warshall
        for k in 0..n {
            for p in 0..n {
                for r in 0..n {
                    let via = q.plus_unchecked(d[p][k], d[k][r]);
                    d[p][r] = q.fold(crate::quantale::Mode::Meet, [d[p][r], via]);
                }
            }
        }
    }
    lts.set_policy(ImmediatePolicy::ExplicitTable);
    for (p, row) in d.iter().enumerate() {
        for (r, &v) in row.iter().enumerate() {
            if p != r {
                lts.set_distance_one_way(p, r, v).expect("value from the quantale");
            }
        }
    }
}

/// Values usable as `↓` of generated states.
pub fn value_pool(q: &Quantale) -> Vec<QuantaleValue> {
    q.carrier().unwrap_or_else(|| q.default_sample())
}

/// An MLTS with `bases` base states `s<i>`; each base gets, per label, up to
/// two targets among the bases, `bot` and `top`.
pub fn random_mlts(rng: &mut Rng64, quantale: &Quantale, bases: usize, labels: &[&str], bounds: Bounds) -> Mlts {
    let mut m = Mlts::new(quantale.clone(), labels, bounds);
    let pool = value_pool(quantale);
    let ids: Vec<TermId> = (0..bases)
        .map(|i| {
            let v = *pool.choose(rng).expect("non-empty pool");
            m.add_base(&format!("s{i}"), v).expect("fresh name")
        })
        .collect();
    let mut targets = ids.clone();
    targets.push(TermId::BOT);
    targets.push(TermId::TOP);
    for &b in &ids {
        for l in 0..labels.len() {
            let k = rng.gen_range(0..=2usize);
            let chosen: Vec<TermId> = targets.choose_multiple(rng, k).copied().collect();
            m.set_transitions(b, l, chosen).expect("base state");
        }
    }
    m
}

/// A boolean environment LTS.
pub fn random_env(rng: &mut Rng64, states: usize, labels: &[&str], density: f64) -> ProcessLts {
    random_lts(
        rng,
        &Quantale::Boolean,
        "e",
        states,
        labels,
        density,
        ImmediatePolicy::Canonical,
    )
}
