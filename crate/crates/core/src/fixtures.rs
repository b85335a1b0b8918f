//! Bundled example systems.

pub const P_LTS: &str = include_str!("../fixtures/P.lts");
pub const Q_LTS: &str = include_str!("../fixtures/Q.lts");
pub const R_LTS: &str = include_str!("../fixtures/R.lts");
pub const PP_LTS: &str = include_str!("../fixtures/Pp.lts");
pub const QP_LTS: &str = include_str!("../fixtures/Qp.lts");
pub const S0_MLTS: &str = include_str!("../fixtures/S0.mlts");
pub const SPP_MLTS: &str = include_str!("../fixtures/Spp.mlts");
pub const MPAR_MLTS: &str = include_str!("../fixtures/Mpar.mlts");

/// `(file name, contents)` for every bundled file.
pub const ALL: [(&str, &str); 8] = [
    ("P.lts", P_LTS),
    ("Q.lts", Q_LTS),
    ("R.lts", R_LTS),
    ("Pp.lts", PP_LTS),
    ("Qp.lts", QP_LTS),
    ("S0.mlts", S0_MLTS),
    ("Spp.mlts", SPP_MLTS),
    ("Mpar.mlts", MPAR_MLTS),
];

pub fn get(name: &str) -> Option<&'static str> {
    ALL.iter().find(|(n, _)| *n == name).map(|(_, c)| *c)
}
