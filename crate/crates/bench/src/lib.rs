//! Seeded fixtures shared by the benchmarks.

use minorscale::generators::{ln, random_pm1_pair, random_rescaled_pair, Sign};
use minorscale::{factor_psd, BiFunction, RescalingKind, Tolerance, VectorSet};

/// A `+-1` pair on `n` points with a spanning tree.
pub fn pm1_pair(n: usize, seed: u64) -> (BiFunction, BiFunction) {
    let p = random_pm1_pair(n, 0.3, seed, true).expect("valid parameters");
    (p.l, p.m)
}

/// A generally rescaled exact pair on `n` points.
pub fn general_pair(n: usize, seed: u64) -> (BiFunction, BiFunction) {
    let p = random_rescaled_pair(n, 0.5, seed, RescalingKind::General).expect("valid parameters");
    (p.l, p.m)
}

/// `(L_n^+, L_n^-)`.
pub fn cyclic_pair(n: usize) -> (BiFunction, BiFunction) {
    (ln(n, Sign::Plus).expect("n >= 3"), ln(n, Sign::Minus).expect("n >= 3"))
}

/// Gram factors of `L_n^+` and `L_n^-`.
pub fn cyclic_factors(n: usize) -> (VectorSet, VectorSet) {
    let (p, m) = cyclic_pair(n);
    let tol = Tolerance::default();
    (factor_psd(&p, tol).expect("positive definite"), factor_psd(&m, tol).expect("positive definite"))
}
