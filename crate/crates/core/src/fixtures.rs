//! Known offset tuples shipped with the library.

use crate::circulant::PhiSpec;

/// The three 190-vertex, degree-11, diameter-3 graphs `Φ_95(A)`.
pub const DEGREE_11_WITNESSES: [&str; 3] = [
    "phi 95: 4,7,16,27,38,52,62,81",
    "phi 95: 4,16,30,43,51,62,71,89",
    "phi 95: 11,15,21,28,37,40,45,63",
];

/// Canonical diameter-3 tuples at `m = d^2 - d - 1` for `d = 4` and `d = 5`.
pub const SMALL_WITNESSES: [&str; 2] = ["phi 11: 4", "phi 19: 5,8"];

pub fn degree_11_witnesses() -> Vec<PhiSpec> {
    DEGREE_11_WITNESSES
        .iter()
        .map(|s| s.parse().expect("fixture parses"))
        .collect()
}

pub fn small_witnesses() -> Vec<PhiSpec> {
    SMALL_WITNESSES
        .iter()
        .map(|s| s.parse().expect("fixture parses"))
        .collect()
}
