use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{EulerCheck, Species, SpeciesModule};
use crate::field::Tower;
use crate::linalg::Matrix;

/// A random module with dimensions in `0..=max_dim`.
///
/// Each edge gets a random orientation; the map along it is random and the
/// reverse map is zero, so the preprojective relation holds termwise.
pub fn random_module<F: Tower>(s: &Species<F>, rng: &mut dyn RngCore, max_dim: usize) -> SpeciesModule<F::Elt> {
    let f = s.field();
    let dims: Vec<usize> = (0..s.rank()).map(|_| rng.gen_range(0..=max_dim)).collect();
    let mut m = s.zero_module(dims.clone());
    for (j, i) in s.edge_keys().collect::<Vec<_>>() {
        if j < i {
            continue;
        }
        let (t, h) = if rng.gen_bool(0.5) { (j, i) } else { (i, j) };
        let cols = s.edge(t, h).width() * dims[h];
        let mut g = Matrix::zeros(f, dims[t], cols);
        for r in 0..dims[t] {
            for c in 0..cols {
                g[(r, c)] = f.random_in(s.cartan().d(t), rng);
            }
        }
        m.set_map(t, h, g);
    }
    m
}

/// Outcome of checking the Euler identity on seeded random pairs.
#[derive(Clone, Debug, Serialize)]
pub struct EulerReport {
    pub trials: usize,
    pub seed: u64,
    pub passed: usize,
    pub failures: Vec<EulerCheck>,
}

/// Checks `h⁰(M,N) − h¹(M,N) + h⁰(N,M) = (dim M, dim N)` on `trials` random pairs.
pub fn euler_trials<F: Tower>(s: &Species<F>, trials: usize, seed: u64, max_dim: usize) -> EulerReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<_> =
        (0..trials).map(|_| (random_module(s, &mut rng, max_dim), random_module(s, &mut rng, max_dim))).collect();
    let checks: Vec<EulerCheck> = pairs.par_iter().map(|(m, n)| s.euler_check(m, n)).collect();
    let failures: Vec<EulerCheck> = checks.into_iter().filter(|c| !c.holds()).collect();
    EulerReport { trials, seed, passed: trials - failures.len(), failures }
}
