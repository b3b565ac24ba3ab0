//! The flag subdivision of a polytope.
//!
//! Every maximal chain of faces `P = F₀ ⊃ F₁ ⊃ … ⊃ Fₙ` contributes the
//! simplex `A = conv{a₀, …, aₙ}` whose vertices are the points of the faces
//! closest to the origin, together with `B = conv{b₀, …, bₙ}` built from the
//! closest points of the faces' affine hulls. The simplices `A` tile `P`,
//! some of them possibly degenerate, and every `B` is an orthoscheme.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{factorial, gram_schmidt, simplex_volume, BarycentricFrame, Vector};
use crate::polytope::Polytope;
use crate::sampling::{stream_rng, CHUNK};
use rand::Rng;

/// Barycentric margin for interior membership in the overlap test.
pub const OVERLAP_MARGIN: f64 = 1e-9;
/// Relative tolerance on `|Σ vol A − vol P|`.
pub const VOLUME_GAP_TOL: f64 = 1e-8;

/// A maximal chain of faces, by face id, ordered by codimension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Flag {
    pub faces: Vec<usize>,
}

/// The simplices `A` and `B` of one flag.
#[derive(Debug, Clone, Serialize)]
pub struct SimplexTriple {
    pub flag: Flag,
    pub a: Vec<Vector>,
    pub b: Vec<Vector>,
    /// `vol A`.
    pub volume: f64,
    pub degenerate: bool,
}

impl SimplexTriple {
    pub fn dim(&self) -> usize {
        self.a.len() - 1
    }
}

/// All maximal chains, by depth-first descent through the lattice.
pub fn enumerate_flags(p: &Polytope) -> Vec<Flag> {
    let mut out = Vec::new();
    let mut chain = vec![0];
    descend(p, &mut chain, &mut out);
    out
}

fn descend(p: &Polytope, chain: &mut Vec<usize>, out: &mut Vec<Flag>) {
    let top = *chain.last().unwrap();
    if p.face(top).codim == p.dim() {
        out.push(Flag {
            faces: chain.clone(),
        });
        return;
    }
    for &child in p.children(top) {
        chain.push(child);
        descend(p, chain, out);
        chain.pop();
    }
}

/// Threshold below which `vol A` counts as degenerate: `10⁻¹² Rⁿ` with `R`
/// the circumradius.
pub fn degeneracy_threshold(p: &Polytope) -> f64 {
    1e-12 * p.circumradius().powi(p.dim() as i32)
}

/// One triple per flag, in flag order.
pub fn build_simplices(p: &Polytope) -> Vec<SimplexTriple> {
    let threshold = degeneracy_threshold(p);
    enumerate_flags(p)
        .into_par_iter()
        .map(|flag| {
            let a: Vec<Vector> = flag
                .faces
                .iter()
                .map(|&f| p.closest_point_in_face(f).clone())
                .collect();
            let b: Vec<Vector> = flag
                .faces
                .iter()
                .map(|&f| p.closest_point_in_affine_span(f).clone())
                .collect();
            let volume = simplex_volume(&a);
            SimplexTriple {
                degenerate: volume < threshold,
                flag,
                a,
                b,
                volume,
            }
        })
        .collect()
}

/// Outcome of [`covering_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoveringReport {
    /// `|Σ vol A − vol P|`.
    pub volume_gap: f64,
    pub polytope_volume: f64,
    /// Sample points lying in the shrunk interior of two or more simplices.
    pub max_overlap_hits: usize,
    /// Sample points lying in no closed simplex.
    pub uncovered_hits: usize,
    pub samples: usize,
    pub seed: u64,
}

impl CoveringReport {
    pub fn pass(&self) -> bool {
        self.volume_gap <= VOLUME_GAP_TOL * self.polytope_volume
            && self.max_overlap_hits == 0
            && self.uncovered_hits == 0
    }
}

/// Empirical check that the simplices tile `P`: compares volumes and
/// locates `sample_count` uniform points of `P` (rejection from the
/// bounding box) among the nondegenerate simplices.
pub fn covering_check(
    p: &Polytope,
    triples: &[SimplexTriple],
    sample_count: usize,
    seed: u64,
) -> CoveringReport {
    let polytope_volume = p.volume();
    let total: f64 = triples
        .iter()
        .filter(|t| !t.degenerate)
        .map(|t| t.volume)
        .sum();
    let frames: Vec<BarycentricFrame> = triples
        .iter()
        .filter(|t| !t.degenerate)
        .filter_map(|t| BarycentricFrame::new(&t.a))
        .collect();
    let (lo, hi) = p.bounding_box();
    let n = p.dim();

    let chunks = sample_count.div_ceil(CHUNK);
    let (uncovered, overlaps, used) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream_rng(seed, c as u64);
            let want = CHUNK.min(sample_count - c * CHUNK);
            let (mut uncovered, mut overlaps, mut got, mut attempts) = (0, 0, 0, 0);
            while got < want && attempts < 1000 * want {
                attempts += 1;
                let x = Vector::from_fn(n, |i, _| lo[i] + (hi[i] - lo[i]) * rng.random::<f64>());
                if !p.contains(&x) {
                    continue;
                }
                got += 1;
                let mut closed = 0;
                let mut interior = 0;
                for f in &frames {
                    let m = f.min_coordinate(&x);
                    if m >= -OVERLAP_MARGIN {
                        closed += 1;
                    }
                    if m > OVERLAP_MARGIN {
                        interior += 1;
                    }
                }
                if closed == 0 {
                    uncovered += 1;
                }
                if interior > 1 {
                    overlaps += 1;
                }
            }
            (uncovered, overlaps, got)
        })
        .reduce(|| (0, 0, 0), |x, y| (x.0 + y.0, x.1 + y.1, x.2 + y.2));

    CoveringReport {
        volume_gap: (total - polytope_volume).abs(),
        polytope_volume,
        max_overlap_hits: overlaps,
        uncovered_hits: uncovered,
        samples: used,
        seed,
    }
}

/// A simplex `conv{p₀, …, pₙ}` with `p₀ = 0` whose edge chain
/// `p₀p₁, p₁p₂, …` is pairwise orthogonal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Orthoscheme {
    pub vertices: Vec<Vector>,
    /// `|p_k − p_{k−1}|` for `k = 1..n`.
    pub edge_lengths: Vec<f64>,
}

impl Orthoscheme {
    /// The orthoscheme `p_k = (β₁, …, β_k, 0, …, 0)`.
    pub fn from_edge_lengths(betas: &[f64]) -> Result<Self> {
        if betas.is_empty() || betas.iter().any(|b| !(b.is_finite() && *b > 0.0)) {
            return Err(Error::InvalidInput(
                "edge lengths must be positive and finite".into(),
            ));
        }
        let n = betas.len();
        let vertices = (0..=n)
            .map(|k| Vector::from_fn(n, |i, _| if i < k { betas[i] } else { 0.0 }))
            .collect();
        Ok(Orthoscheme {
            vertices,
            edge_lengths: betas.to_vec(),
        })
    }

    pub fn dim(&self) -> usize {
        self.edge_lengths.len()
    }

    pub fn volume(&self) -> f64 {
        self.edge_lengths.iter().product::<f64>() / factorial(self.dim())
    }

    /// `|p_k|` for `k = 0..n`.
    pub fn vertex_norms(&self) -> Vec<f64> {
        self.vertices.iter().map(|v| v.norm()).collect()
    }

    /// Largest `|⟨p_i − p_k, p_j − p_k⟩|` over `i < k < j`.
    pub fn orthogonality_error(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for k in 1..n {
            for i in 0..k {
                for j in k + 1..=n {
                    let u = &self.vertices[i] - &self.vertices[k];
                    let w = &self.vertices[j] - &self.vertices[k];
                    worst = worst.max(u.dot(&w).abs());
                }
            }
        }
        worst
    }

    /// Largest `||p_k|² − (β₁² + … + β_k²)|`.
    pub fn pythagorean_error(&self) -> f64 {
        let mut partial = 0.0;
        let mut worst: f64 = 0.0;
        for (k, beta) in self.edge_lengths.iter().enumerate() {
            partial += beta * beta;
            worst = worst.max((self.vertices[k + 1].norm_squared() - partial).abs());
        }
        worst.max(self.vertices[0].norm())
    }
}

/// `c₀ = 0`, `c_k = (1, …, 1, 0, …, 0)` with `k` ones.
pub fn canonical_orthoscheme(n: usize) -> Orthoscheme {
    assert!(n >= 1, "orthoscheme dimension must be positive");
    Orthoscheme::from_edge_lengths(&vec![1.0; n]).expect("unit edge lengths are valid")
}

/// Re-expresses `b₀, …, bₙ` in the orthonormal frame adapted to the flag,
/// where an orthoscheme reads `b_k = (β₁, …, β_k, 0, …, 0)`.
pub fn orthoscheme_from_b(triple: &SimplexTriple) -> Result<Orthoscheme> {
    if triple.degenerate {
        return Err(Error::DegenerateInput("simplex A is degenerate".into()));
    }
    let b = &triple.b;
    let n = triple.dim();
    let scale = b.iter().map(|x| x.norm()).fold(1.0, f64::max);
    let edges: Vec<Vector> = (1..=n).map(|k| &b[k] - &b[k - 1]).collect();
    let edge_lengths: Vec<f64> = edges.iter().map(|e| e.norm()).collect();
    if edge_lengths.iter().any(|l| *l < 1e-12 * scale) {
        return Err(Error::DegenerateInput("repeated vertex in B".into()));
    }
    let frame = gram_schmidt(&edges);
    if frame.len() < n {
        return Err(Error::DegenerateInput("B is flat".into()));
    }
    let vertices = b
        .iter()
        .map(|x| Vector::from_fn(n, |i, _| frame[i].dot(x)))
        .collect();
    Ok(Orthoscheme {
        vertices,
        edge_lengths,
    })
}
