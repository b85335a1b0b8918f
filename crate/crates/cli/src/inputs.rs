use std::fs;
use std::path::Path;

use cbm_core::{
    fixtures, load_lts_documents, load_mlts_documents, Bounds, Error, FiniteQuantale, ImmediatePolicy, Mlts,
    ProcessLts, Quantale, Result,
};

use crate::{Global, Policy};

pub const BOUNDS_ENV: &str = "CBM_BOUNDS";

/// Reads `path`, falling back to a bundled fixture of the same file name.
pub fn read(path: &str) -> Result<String> {
    if let Ok(text) = fs::read_to_string(path) {
        return Ok(text);
    }
    let name = Path::new(path).file_name().and_then(|n| n.to_str()).unwrap_or(path);
    fixtures::get(name).map(str::to_string).ok_or_else(|| Error::Lookup {
        kind: "file",
        name: path.to_string(),
    })
}

fn read_all(paths: &[String]) -> Result<Vec<(String, String)>> {
    paths.iter().map(|p| Ok((p.clone(), read(p)?))).collect()
}

pub fn bounds(g: &Global) -> Result<Bounds> {
    let mut b = Bounds::default();
    if let Ok(path) = std::env::var(BOUNDS_ENV) {
        if !path.is_empty() {
            b = b.apply_overrides(&read(&path)?)?;
        }
    }
    match &g.bounds {
        Some(spec) => b.apply_overrides(spec),
        None => Ok(b),
    }
}

pub fn quantale(g: &Global) -> Result<Option<Quantale>> {
    let Some(name) = &g.quantale else { return Ok(None) };
    if let Some(q) = Quantale::builtin(name) {
        return Ok(Some(q));
    }
    if Path::new(name).exists() {
        return Ok(Some(Quantale::finite(FiniteQuantale::parse(&read(name)?)?)));
    }
    Err(Error::Lookup {
        kind: "quantale",
        name: name.clone(),
    })
}

fn policy(p: Policy) -> ImmediatePolicy {
    match p {
        Policy::Canonical => ImmediatePolicy::Canonical,
        Policy::CommonAction => ImmediatePolicy::CommonAction,
        Policy::Liberal => ImmediatePolicy::Liberal,
    }
}

pub fn lts(g: &Global, q: Option<&Quantale>) -> Result<Option<ProcessLts>> {
    if g.lts.is_empty() {
        return Ok(None);
    }
    let docs = read_all(&g.lts)?;
    let docs: Vec<(&str, &str)> = docs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let mut lts = load_lts_documents(&docs, q)?;
    if let Some(p) = g.policy {
        lts.set_policy(policy(p));
    }
    lts.quantale = lts.quantale.clone().with_eps(bounds(g)?.eps);
    Ok(Some(lts))
}

pub fn mlts(g: &Global, q: Option<&Quantale>, bounds: Bounds) -> Result<Option<Mlts>> {
    if g.mlts.is_empty() {
        return Ok(None);
    }
    let docs = read_all(&g.mlts)?;
    let docs: Vec<(&str, &str)> = docs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    load_mlts_documents(&docs, q, bounds).map(Some)
}

pub fn need<T>(x: Option<T>, flag: &str) -> Result<T> {
    x.ok_or_else(|| Error::Contract(format!("this command needs --{flag}")))
}
