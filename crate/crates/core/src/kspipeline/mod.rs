//! Kuga–Satake reports: validation, corestriction by two routes, the
//! decomposition bookkeeping and the rank-3 parity statement.

mod family;
mod orbits;
mod report;

pub use family::{
    check_family_parameters, family_form, integer_family_grid, search_rank3_form, six_lines_family, HAMILTON,
};
pub use orbits::{cyclic_generator, even_weight_orbits, group_closure, symmetric_generators, Orbit, OrbitData};
pub use report::{ks_report, InvariantRoute, KSReport, Parity, ScaleStep, SymbolDoc, SymbolRoute};
