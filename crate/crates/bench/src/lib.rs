//! Shared inputs for the benchmarks.

use cbm_core::{
    fixtures, gen, load_lts_documents, load_mlts_documents, Bounds, ImmediatePolicy, Mlts, ProcessLts, Quantale,
};
use rand::Rng;

pub fn fixture_lts(files: &[&str]) -> ProcessLts {
    let docs: Vec<(&str, &str)> = files.iter().map(|f| (*f, fixtures::get(f).expect("bundled"))).collect();
    load_lts_documents(&docs, None).expect("fixtures parse")
}

pub fn fixture_mlts(files: &[&str]) -> Mlts {
    let docs: Vec<(&str, &str)> = files.iter().map(|f| (*f, fixtures::get(f).expect("bundled"))).collect();
    load_mlts_documents(&docs, None, Bounds::default()).expect("fixtures parse")
}

/// A random boolean LTS with canonical distance, for the bisimulation-sized runs.
pub fn random_boolean(seed: u64, states: usize) -> ProcessLts {
    let mut rng = gen::rng(seed);
    gen::random_lts(
        &mut rng,
        &Quantale::Boolean,
        "p",
        states,
        &gen::LABELS[..2],
        0.1,
        ImmediatePolicy::Canonical,
    )
}

/// A random real-valued LTS with a pseudometric table.
pub fn random_reals(seed: u64, states: usize) -> ProcessLts {
    let mut rng = gen::rng(seed);
    let q = Quantale::reals();
    let mut lts = gen::random_lts(
        &mut rng,
        &q,
        "p",
        states,
        &gen::LABELS[..2],
        0.15,
        ImmediatePolicy::Canonical,
    );
    let pool = gen::value_pool(&q);
    gen::random_table(&mut rng, &mut lts, &pool, true);
    lts
}

/// A small random MLTS over the boolean quantale.
pub fn random_mlts(seed: u64) -> Mlts {
    let mut rng = gen::rng(seed);
    let bases = rng.gen_range(2..=3);
    gen::random_mlts(
        &mut rng,
        &Quantale::Boolean,
        bases,
        &gen::LABELS[..2],
        Bounds::default(),
    )
}
