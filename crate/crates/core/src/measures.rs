//! Solid angles at an origin apex, ball–simplex intersection volumes, and
//! areas of right spherical triangles.
//!
//! Solid angles are normalized: `ω` is the fraction of the unit sphere
//! covered by the cone, so a full set of directions has `ω = 1`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{
    facet_volume, factorial, origin_distance_to_hull, simplex_volume, unit_ball_volume, Vector,
};
use crate::quadrature::{adaptive_simpson, gauss_legendre};
use crate::sampling::{
    fraction_estimate, gaussian_vector, parallel_count, uniform_in_simplex, McEstimate,
};

/// Absolute tolerance of the spherical-triangle quadrature.
pub const AREA_TOL: f64 = 1e-10;
/// Gauss–Legendre order per collapsed coordinate for `n ≥ 4` solid angles.
const SOLID_ANGLE_ORDER: usize = 24;
/// Cones whose generators spread wider than this (radians) are bisected
/// before quadrature.
const MAX_CONE_ANGLE: f64 = 1.2;
const MAX_BISECTION_DEPTH: usize = 48;

fn check_apex_simplex(vertices: &[Vector]) -> Result<usize> {
    let n = vertices.first().map(|v| v.len()).unwrap_or(0);
    if n == 0 || vertices.len() != n + 1 {
        return Err(Error::InvalidInput(format!(
            "apex simplex needs n + 1 vertices in R^n, got {}",
            vertices.len()
        )));
    }
    if vertices[0].norm() > 1e-12 {
        return Err(Error::InvalidInput(
            "first vertex must be the origin".into(),
        ));
    }
    let scale = vertices[1..].iter().map(|v| v.norm()).fold(0.0, f64::max);
    if scale == 0.0 || simplex_volume(vertices) <= 1e-14 * scale.powi(n as i32) {
        return Err(Error::DegenerateSimplex);
    }
    Ok(n)
}

/// Normalized solid angle at the origin vertex of `conv{0, v_1, …, v_n}`.
///
/// Closed forms for `n ≤ 3` (half-line, planar angle, Girard excess); for
/// `n ≥ 4` a deterministic quadrature of the cone's surface integral over
/// the opposite facet.
pub fn solid_angle(vertices: &[Vector]) -> Result<f64> {
    let n = check_apex_simplex(vertices)?;
    Ok(match n {
        1 => 0.5,
        2 => planar_angle(&vertices[1], &vertices[2]) / (2.0 * PI),
        3 => {
            let excess = spherical_triangle_excess(&vertices[1], &vertices[2], &vertices[3]);
            excess / (4.0 * PI)
        }
        _ => {
            let generators = vertices[1..].iter().map(|v| v.normalize()).collect();
            narrow_cone_solid_angle(generators, 0)
        }
    })
}

/// Splits along the widest pair of unit generators until every piece is
/// narrow enough for the facet quadrature to resolve.
fn narrow_cone_solid_angle(generators: Vec<Vector>, depth: usize) -> f64 {
    let mut widest = (0, 1, 0.0);
    for i in 0..generators.len() {
        for j in i + 1..generators.len() {
            let angle = planar_angle(&generators[i], &generators[j]);
            if angle > widest.2 {
                widest = (i, j, angle);
            }
        }
    }
    let (i, j, angle) = widest;
    if angle <= MAX_CONE_ANGLE || depth >= MAX_BISECTION_DEPTH {
        return solid_angle_quadrature(&generators, SOLID_ANGLE_ORDER);
    }
    let mid = (&generators[i] + &generators[j]).normalize();
    let mut left = generators.clone();
    left[i] = mid.clone();
    let mut right = generators;
    right[j] = mid;
    narrow_cone_solid_angle(left, depth + 1) + narrow_cone_solid_angle(right, depth + 1)
}

/// Monte Carlo solid angle: the fraction of Gaussian directions falling in
/// the cone spanned by `v_1, …, v_n`.
pub fn solid_angle_mc(vertices: &[Vector], samples: usize, seed: u64) -> Result<McEstimate> {
    let n = check_apex_simplex(vertices)?;
    let generators = DMatrix::from_columns(&vertices[1..]);
    let inverse = generators.try_inverse().ok_or(Error::DegenerateSimplex)?;
    let hits = parallel_count(samples, seed, |rng| {
        let z = gaussian_vector(rng, n);
        (&inverse * z).iter().all(|mu| *mu >= 0.0)
    });
    Ok(fraction_estimate(hits, samples, seed))
}

/// Angle between two vectors in `[0, π]`.
pub fn planar_angle(u: &Vector, v: &Vector) -> f64 {
    let dot = u.dot(v);
    let cross_sq = (u.norm_squared() * v.norm_squared() - dot * dot).max(0.0);
    cross_sq.sqrt().atan2(dot)
}

/// Spherical excess of the triangle with vertex directions `p`, `q`, `r`
/// (any nonzero lengths), from its three vertex angles.
pub fn spherical_triangle_excess(p: &Vector, q: &Vector, r: &Vector) -> f64 {
    let (p, q, r) = (p.normalize(), q.normalize(), r.normalize());
    let vertex_angle = |at: &Vector, x: &Vector, y: &Vector| {
        let tx = x - at * at.dot(x);
        let ty = y - at * at.dot(y);
        planar_angle(&tx, &ty)
    };
    vertex_angle(&p, &q, &r) + vertex_angle(&q, &r, &p) + vertex_angle(&r, &p, &q) - PI
}

/// `ω = (1 / (n κₙ)) ∫_S h / |x|ⁿ dA` over the facet `S = conv(base)`,
/// where `h` is the distance from the origin to `aff S`. The facet is
/// parameterized in collapsed coordinates; the innermost segment integral is
/// done in closed form and the rest by tensor Gauss–Legendre.
fn solid_angle_quadrature(base: &[Vector], order: usize) -> f64 {
    let n = base.len();
    let h = origin_distance_to_hull(base);
    let area = facet_volume(base);
    let (nodes, weights) = gauss_legendre(order);
    let outer = n - 2;
    let mut idx = vec![0usize; outer];
    let mut sum = 0.0;
    let penultimate = &base[n - 2];
    let edge = &base[n - 1] - penultimate;
    let mut p = Vector::zeros(n);
    let mut d = Vector::zeros(n);
    loop {
        let mut remaining = 1.0;
        let mut jacobian = 1.0;
        let mut weight = 1.0;
        p.fill(0.0);
        for (level, &i) in idx.iter().enumerate() {
            let s = nodes[i];
            weight *= weights[i];
            p.axpy(remaining * (1.0 - s), &base[level], 1.0);
            remaining *= s;
            jacobian *= remaining;
        }
        p.axpy(remaining, penultimate, 1.0);
        d.copy_from(&edge);
        d *= remaining;
        sum += weight * jacobian * segment_inverse_power(&p, &d, n as i32);

        // Advance the multi-index.
        let mut level = outer;
        loop {
            if level == 0 {
                let unit_simplex = factorial(n - 1) * area;
                return h * unit_simplex * sum / (n as f64 * unit_ball_volume(n));
            }
            level -= 1;
            idx[level] += 1;
            if idx[level] < order {
                break;
            }
            idx[level] = 0;
        }
    }
}

/// `∫₀¹ |p + σ d|^{-m} dσ` for a segment avoiding the origin.
fn segment_inverse_power(p: &Vector, d: &Vector, m: i32) -> f64 {
    let a = d.norm_squared();
    let pp = p.norm_squared();
    // |p × d|² via the Lagrange identity, free of cancellation.
    let mut cross = 0.0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            let c = p[i] * d[j] - p[j] * d[i];
            cross += c * c;
        }
    }
    let sqrt_a = a.sqrt();
    if sqrt_a < 1e-4 * pp.sqrt() {
        let (x, w) = gauss_legendre(8);
        return x
            .iter()
            .zip(&w)
            .map(|(s, w)| w * (p + d * *s).norm().powi(-m))
            .sum();
    }
    let delta2 = cross / a;
    let delta = delta2.sqrt();
    let b = p.dot(d);
    let w0 = b / sqrt_a;
    let w1 = sqrt_a + w0;
    // J_k(w) = ∫ (w² + δ²)^{-k/2} dw, differenced between w0 and w1.
    let (mut k, mut diff) = if m % 2 == 1 {
        (1, (w1 / delta).asinh() - (w0 / delta).asinh())
    } else {
        (2, ((w1 / delta).atan() - (w0 / delta).atan()) / delta)
    };
    while k < m {
        let kf = k as f64;
        let term = |w: f64| w / (kf * delta2 * (w * w + delta2).powf(kf / 2.0));
        diff = term(w1) - term(w0) + (kf - 1.0) / (kf * delta2) * diff;
        k += 2;
    }
    diff / sqrt_a
}

/// Estimate of `vol(B₀(r) ∩ conv(vertices))`.
///
/// Exact when every vertex lies in the ball, or when the first vertex is the
/// origin and the opposite facet's affine hull is at distance `≥ r` (then
/// the intersection is a cone sector of volume `ω κₙ rⁿ`). Otherwise uniform
/// Monte Carlo sampling in the simplex.
pub fn ball_simplex_volume(
    vertices: &[Vector],
    r: f64,
    samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    if r <= 0.0 || !r.is_finite() {
        return Err(Error::InvalidInput(format!(
            "radius must be positive, got {r}"
        )));
    }
    let n = vertices[0].len();
    let volume = simplex_volume(vertices);
    if volume == 0.0 {
        return Ok(McEstimate::exact(0.0));
    }
    if vertices.iter().all(|v| v.norm() <= r) {
        return Ok(McEstimate::exact(volume));
    }
    if vertices[0].norm() <= 1e-12 && origin_distance_to_hull(&vertices[1..]) >= r {
        let omega = solid_angle(vertices)?;
        return Ok(McEstimate::exact(
            omega * unit_ball_volume(n) * r.powi(n as i32),
        ));
    }
    ball_simplex_volume_mc(vertices, r, samples, seed)
}

/// Monte Carlo estimate of `vol(B₀(r) ∩ conv(vertices))` with no shortcuts.
pub fn ball_simplex_volume_mc(
    vertices: &[Vector],
    r: f64,
    samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    if samples == 0 {
        return Err(Error::InvalidInput("sample count must be positive".into()));
    }
    let volume = simplex_volume(vertices);
    let r2 = r * r;
    let hits = parallel_count(samples, seed, |rng| {
        uniform_in_simplex(rng, vertices).norm_squared() <= r2
    });
    let frac = fraction_estimate(hits, samples, seed);
    Ok(McEstimate {
        value: frac.value * volume,
        std_error: frac.std_error * volume,
        ..frac
    })
}

/// A right spherical triangle `s₁s₂s₃` with the right angle at `s₂`,
/// `|s₁s₂| = t` and `|s₂s₃| = c`, both in `(0, π/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SphericalTriangleSpec {
    pub t: f64,
    pub c: f64,
}

impl SphericalTriangleSpec {
    pub fn new(t: f64, c: f64) -> Result<Self> {
        let valid = |x: f64| x > 0.0 && x < PI / 2.0;
        if !valid(t) || !valid(c) {
            return Err(Error::InvalidInput(format!(
                "legs must lie in (0, pi/2), got t={t}, c={c}"
            )));
        }
        Ok(SphericalTriangleSpec { t, c })
    }

    /// Length of the leg `s₂s₃` after central projection to the tangent plane at `s₂`.
    pub fn q(&self) -> f64 {
        self.c.tan()
    }
}

/// Area of the triangle through its central projection to the tangent plane
/// at `s₂`: the projected triangle `x, y ≥ 0, x / tan t + y / q ≤ 1` carries
/// density `(1 + x² + y²)^{-3/2}`; the `x` integral is done in closed form and
/// the remaining `y` integral by adaptive Simpson.
pub fn spherical_triangle_area_integral(spec: &SphericalTriangleSpec) -> f64 {
    let q = spec.q();
    let tan_t = spec.t.tan();
    let integrand = |y: f64| {
        let x_max = (1.0 - y / q) * tan_t;
        x_max / ((1.0 + y * y + x_max * x_max).sqrt() * (1.0 + y * y))
    };
    adaptive_simpson(integrand, 0.0, q, AREA_TOL)
}

/// Area of the same triangle by Girard's theorem, placing `s₂` at the pole
/// and `s₁`, `s₃` along orthogonal meridians.
pub fn spherical_triangle_area_girard(spec: &SphericalTriangleSpec) -> f64 {
    let s1 = Vector::from_column_slice(&[spec.t.sin(), 0.0, spec.t.cos()]);
    let s2 = Vector::from_column_slice(&[0.0, 0.0, 1.0]);
    let s3 = Vector::from_column_slice(&[0.0, spec.c.sin(), spec.c.cos()]);
    spherical_triangle_excess(&s1, &s2, &s3)
}

/// One row of the `area / sin t` curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveRow {
    pub t: f64,
    pub area_integral: f64,
    pub area_girard: f64,
    pub ratio: f64,
}

/// Evaluates the curve on `ts` for fixed leg `c`.
pub fn area_curve(c: f64, ts: &[f64]) -> Result<Vec<CurveRow>> {
    ts.iter()
        .map(|&t| {
            let spec = SphericalTriangleSpec::new(t, c)?;
            let area_integral = spherical_triangle_area_integral(&spec);
            Ok(CurveRow {
                t,
                area_integral,
                area_girard: spherical_triangle_area_girard(&spec),
                ratio: area_integral / t.sin(),
            })
        })
        .collect()
}

/// CSV rendering with header `t,area_integral,area_girard,ratio`.
pub fn curve_csv(rows: &[CurveRow]) -> String {
    let mut out = String::from("t,area_integral,area_girard,ratio\n");
    for r in rows {
        out.push_str(&format!(
            "{:?},{:?},{:?},{:?}\n",
            r.t, r.area_integral, r.area_girard, r.ratio
        ));
    }
    out
}
