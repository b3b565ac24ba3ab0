//! Dense double-precision geometry in `ℝⁿ`: orthonormalization, affine
//! projections, simplex volumes and unit-ball constants.
//!
//! All routines are pure. Tolerances are absolute and tuned for desk-scale
//! inputs (n ≤ 8, coordinates of order one).

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// A point or direction in `ℝⁿ`.
pub type Vector = DVector<f64>;

/// Residual norm below which a vector is treated as linearly dependent.
pub const EPS_RANK: f64 = 1e-9;
/// Tolerance for orthonormality of span directions.
pub const EPS_ORTH: f64 = 1e-12;

/// `base + span(directions)` with orthonormal `directions`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineSpan {
    pub base: Vector,
    pub directions: Vec<Vector>,
}

impl AffineSpan {
    /// Affine hull of a nonempty point set.
    pub fn of_points(points: &[Vector]) -> Self {
        assert!(!points.is_empty(), "affine hull of an empty point set");
        let base = points[0].clone();
        let diffs: Vec<Vector> = points[1..].iter().map(|p| p - &base).collect();
        AffineSpan {
            base,
            directions: gram_schmidt(&diffs),
        }
    }

    /// The whole space `ℝⁿ`.
    pub fn whole_space(n: usize) -> Self {
        AffineSpan {
            base: Vector::zeros(n),
            directions: (0..n).map(|i| unit(n, i)).collect(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.base.len()
    }

    /// Dimension of the affine subspace.
    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    pub fn codim(&self) -> usize {
        self.ambient_dim() - self.dim()
    }

    /// Largest deviation of the directions' Gram matrix from the identity.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, u) in self.directions.iter().enumerate() {
            for (j, v) in self.directions.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((u.dot(v) - target).abs());
            }
        }
        worst
    }
}

/// The `i`-th standard basis vector of `ℝⁿ`.
pub fn unit(n: usize, i: usize) -> Vector {
    let mut v = Vector::zeros(n);
    v[i] = 1.0;
    v
}

/// Orthonormal basis of `span(vectors)` by modified Gram–Schmidt with one
/// reorthogonalization pass. Vectors whose residual falls below
/// [`EPS_RANK`] are dropped, so the output length is the numerical rank.
pub fn gram_schmidt(vectors: &[Vector]) -> Vec<Vector> {
    let mut basis: Vec<Vector> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut r = v.clone();
        for _ in 0..2 {
            for q in &basis {
                let c = q.dot(&r);
                r.axpy(-c, q, 1.0);
            }
        }
        let norm = r.norm();
        if norm >= EPS_RANK {
            basis.push(r / norm);
        }
    }
    basis
}

/// Orthogonal projection of `point` onto the affine span.
pub fn project_onto_affine(span: &AffineSpan, point: &Vector) -> Vector {
    let offset = point - &span.base;
    let mut result = span.base.clone();
    for d in &span.directions {
        result.axpy(d.dot(&offset), d, 1.0);
    }
    result
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// `n`-volume of `conv{v_0, …, v_n}` in `ℝⁿ`; zero for degenerate input.
///
/// Panics unless exactly `n + 1` vertices of dimension `n` are given.
pub fn simplex_volume(vertices: &[Vector]) -> f64 {
    assert!(!vertices.is_empty(), "simplex needs at least one vertex");
    let n = vertices[0].len();
    assert_eq!(
        vertices.len(),
        n + 1,
        "simplex in R^{n} needs {} vertices",
        n + 1
    );
    if n == 0 {
        return 1.0;
    }
    let m = DMatrix::from_fn(n, n, |r, c| vertices[c + 1][r] - vertices[0][r]);
    m.determinant().abs() / factorial(n)
}

/// `k`-volume of a `k`-simplex given by `k + 1` vertices in any ambient
/// dimension, via the Gram determinant of its edge vectors.
pub fn simplex_measure(vertices: &[Vector]) -> f64 {
    assert!(!vertices.is_empty(), "simplex needs at least one vertex");
    let k = vertices.len() - 1;
    if k == 0 {
        return 1.0;
    }
    let edges: Vec<Vector> = vertices[1..].iter().map(|v| v - &vertices[0]).collect();
    let gram = DMatrix::from_fn(k, k, |i, j| edges[i].dot(&edges[j]));
    gram.determinant().max(0.0).sqrt() / factorial(k)
}

/// `(n−1)`-volume of `conv{v_1, …, v_n}` for `n` vertices in `ℝⁿ`.
pub fn facet_volume(vertices: &[Vector]) -> f64 {
    assert!(!vertices.is_empty(), "facet needs at least one vertex");
    assert_eq!(
        vertices.len(),
        vertices[0].len(),
        "facet in R^n needs n vertices"
    );
    simplex_measure(vertices)
}

/// Volume `κₙ = π^{n/2} / Γ(n/2 + 1)` of the unit ball in `ℝⁿ`.
pub fn unit_ball_volume(n: usize) -> f64 {
    // κ₀ = 1, κ₁ = 2, κₙ = κₙ₋₂ · 2π / n
    let mut even = 1.0;
    let mut odd = 2.0;
    for k in 2..=n {
        if k % 2 == 0 {
            even *= 2.0 * std::f64::consts::PI / k as f64;
        } else {
            odd *= 2.0 * std::f64::consts::PI / k as f64;
        }
    }
    if n.is_multiple_of(2) {
        even
    } else {
        odd
    }
}

/// Distance from the origin to the affine hull of `points`.
pub fn origin_distance_to_hull(points: &[Vector]) -> f64 {
    let span = AffineSpan::of_points(points);
    project_onto_affine(&span, &Vector::zeros(span.ambient_dim())).norm()
}

/// Barycentric coordinates of `x` with respect to a nondegenerate simplex.
pub struct BarycentricFrame {
    origin: Vector,
    inverse: DMatrix<f64>,
}

impl BarycentricFrame {
    /// Returns `None` when the simplex is singular.
    pub fn new(vertices: &[Vector]) -> Option<Self> {
        let n = vertices[0].len();
        let m = DMatrix::from_fn(n, n, |r, c| vertices[c + 1][r] - vertices[0][r]);
        let inverse = m.try_inverse()?;
        Some(BarycentricFrame {
            origin: vertices[0].clone(),
            inverse,
        })
    }

    /// The smallest barycentric coordinate of `x`.
    pub fn min_coordinate(&self, x: &Vector) -> f64 {
        let mu = &self.inverse * (x - &self.origin);
        let rest: f64 = mu.iter().sum();
        mu.iter().copied().fold(1.0 - rest, f64::min)
    }
}
