//! Seeded, stream-split random sampling.
//!
//! Every Monte Carlo routine draws from ChaCha streams keyed by
//! `(seed, chunk index)`, so results do not depend on how chunks are
//! scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::geometry::Vector;

/// Samples per independently seeded stream.
pub const CHUNK: usize = 4096;

/// A Monte Carlo estimate with its provenance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: usize,
    pub seed: u64,
}

impl McEstimate {
    /// A deterministic value carrying zero standard error.
    pub fn exact(value: f64) -> Self {
        McEstimate {
            value,
            std_error: 0.0,
            samples: 0,
            seed: 0,
        }
    }
}

/// Generator for stream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Counts how many of `samples` trials return true, running chunks in
/// parallel on disjoint streams.
pub fn parallel_count<F>(samples: usize, seed: u64, trial: F) -> usize
where
    F: Fn(&mut ChaCha8Rng) -> bool + Sync,
{
    let chunks = samples.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream_rng(seed, c as u64);
            let len = CHUNK.min(samples - c * CHUNK);
            (0..len).filter(|_| trial(&mut rng)).count()
        })
        .sum()
}

/// Fraction estimate `hits / samples` with its binomial standard error.
pub fn fraction_estimate(hits: usize, samples: usize, seed: u64) -> McEstimate {
    let p = hits as f64 / samples as f64;
    McEstimate {
        value: p,
        std_error: (p * (1.0 - p) / samples as f64).sqrt(),
        samples,
        seed,
    }
}

/// Uniform barycentric weights on the standard simplex with `k` vertices.
pub fn dirichlet_weights<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..k).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = w.iter().sum();
    for x in &mut w {
        *x /= total;
    }
    w
}

/// `Σ wᵢ vᵢ`.
pub fn combine(weights: &[f64], vertices: &[Vector]) -> Vector {
    let mut x = Vector::zeros(vertices[0].len());
    for (w, v) in weights.iter().zip(vertices) {
        x.axpy(*w, v, 1.0);
    }
    x
}

/// A uniformly random point of the simplex `conv(vertices)`.
pub fn uniform_in_simplex<R: Rng + ?Sized>(rng: &mut R, vertices: &[Vector]) -> Vector {
    combine(&dirichlet_weights(rng, vertices.len()), vertices)
}

/// A standard Gaussian vector in `ℝⁿ`; its direction is uniform on the sphere.
pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vector {
    Vector::from_fn(n, |_, _| StandardNormal.sample(rng))
}
