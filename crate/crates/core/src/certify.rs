//! Distance-hypothesis checks, volume and surface certificates, and
//! standalone verifiers for each intermediate inequality of the flag
//! subdivision argument.

use std::collections::HashMap;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{facet_volume, Vector};
use crate::measures::{
    planar_angle, solid_angle, spherical_triangle_area_integral, SphericalTriangleSpec,
};
use crate::polytope::Polytope;
use crate::sampling::{
    combine, dirichlet_weights, fraction_estimate, parallel_count, stream_rng, uniform_in_simplex,
    McEstimate,
};
use crate::subdivision::{build_simplices, Orthoscheme, SimplexTriple};

/// Hypothesis margins down to this value still pass.
pub const HYPOTHESIS_TOL: f64 = 1e-9;
/// Allowed deviation of `Σ ω` from one.
pub const OMEGA_SUM_TOL: f64 = 1e-8;
/// Slack of `|f(x)| ≤ |x|` in the orthoscheme contraction check.
pub const CONTRACTION_TOL: f64 = 1e-12;
/// Slack of per-step norm monotonicity in the stepwise check.
pub const STEP_TOL: f64 = 1e-10;
/// Tolerance of the orthogonality side condition in the stepwise check.
pub const SIDE_TOL: f64 = 1e-8;
/// Relative slack of the circle-move inequality.
pub const CIRCLE_TOL: f64 = 1e-8;

/// Which distance threshold the faces must clear.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `dist(0, aff F) ≥ √k`.
    #[default]
    Vaaler,
    /// `dist(0, aff F) ≥ √(2k / (k + 1))`, the ball-packing condition.
    Rogers,
}

impl Mode {
    pub fn threshold(self, k: usize) -> f64 {
        let k = k as f64;
        match self {
            Mode::Vaaler => k.sqrt(),
            Mode::Rogers => (2.0 * k / (k + 1.0)).sqrt(),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Vaaler => "vaaler",
            Mode::Rogers => "rogers",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HypothesisEntry {
    pub face: usize,
    pub codim: usize,
    pub distance: f64,
    pub threshold: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesisReport {
    pub mode: Mode,
    pub entries: Vec<HypothesisEntry>,
    pub pass: bool,
}

impl HypothesisReport {
    pub fn failures(&self) -> usize {
        self.entries
            .iter()
            .filter(|e| e.margin < -HYPOTHESIS_TOL)
            .count()
    }

    pub fn min_margin(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.margin)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Distance from the origin to the affine hull of every proper face,
/// compared with the mode's threshold for its codimension.
pub fn check_distance_hypothesis(p: &Polytope, mode: Mode) -> HypothesisReport {
    let entries: Vec<HypothesisEntry> = p
        .faces()
        .iter()
        .enumerate()
        .filter(|(_, f)| f.codim >= 1)
        .map(|(id, f)| {
            let distance = p.closest_point_in_affine_span(id).norm();
            let threshold = mode.threshold(f.codim);
            HypothesisEntry {
                face: id,
                codim: f.codim,
                distance,
                threshold,
                margin: distance - threshold,
            }
        })
        .collect();
    let pass = entries.iter().all(|e| e.margin >= -HYPOTHESIS_TOL);
    HypothesisReport {
        mode,
        entries,
        pass,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CertificateKind {
    Volume,
    Surface,
}

/// One ledger line per flag.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimplexEntry {
    pub flag: usize,
    pub vol: f64,
    pub omega: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub facet_area: Option<f64>,
    /// Lower bound the simplex must meet: `2ⁿ ω` or `n 2ⁿ ω`.
    pub bound: f64,
    pub margin: f64,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub mode: Mode,
    pub dim: usize,
    pub claimed_bound: f64,
    pub total: f64,
    pub omega_sum: f64,
    pub min_margin: f64,
    pub eps_cert: f64,
    pub pass: bool,
    pub hypothesis: HypothesisReport,
    pub simplices: Vec<SimplexEntry>,
}

/// Unsigned ledger without a verdict, for surface evaluations outside the
/// dimensions where the bound is established.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurfaceEvaluation {
    pub experimental: bool,
    pub dim: usize,
    pub reference: f64,
    pub total: f64,
    pub surface_area: f64,
    pub omega_sum: f64,
    pub min_margin: f64,
    pub simplices: Vec<SimplexEntry>,
}

fn require_hypothesis(p: &Polytope) -> Result<HypothesisReport> {
    let report = check_distance_hypothesis(p, Mode::Vaaler);
    if report.pass {
        Ok(report)
    } else {
        Err(Error::HypothesisFailed(Box::new(report)))
    }
}

/// Solid angle at the origin apex of every nondegenerate `A` (zero for
/// degenerate ones). The angle depends only on the Gram matrix of the
/// generators, so congruent cones share one evaluation.
fn apex_solid_angles(triples: &[SimplexTriple]) -> Result<Vec<f64>> {
    let mut slot_of: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut representatives: Vec<usize> = Vec::new();
    let slots: Vec<Option<usize>> = triples
        .iter()
        .enumerate()
        .map(|(i, t)| {
            if t.degenerate {
                return None;
            }
            let g = &t.a[1..];
            let key: Vec<u64> = (0..g.len())
                .flat_map(|r| (r..g.len()).map(move |c| (r, c)))
                .map(|(r, c)| g[r].dot(&g[c]).to_bits())
                .collect();
            Some(*slot_of.entry(key).or_insert_with(|| {
                representatives.push(i);
                representatives.len() - 1
            }))
        })
        .collect();
    let unique: Vec<f64> = representatives
        .par_iter()
        .map(|&i| solid_angle(&triples[i].a))
        .collect::<Result<_>>()?;
    Ok(slots.iter().map(|s| s.map_or(0.0, |k| unique[k])).collect())
}

/// Per-flag ledger. `coefficient · ω` is the bound each simplex must meet;
/// `surface` picks facet area instead of volume as the compared quantity.
fn ledger(triples: &[SimplexTriple], coefficient: f64, surface: bool) -> Result<Vec<SimplexEntry>> {
    let omegas = apex_solid_angles(triples)?;
    triples
        .par_iter()
        .enumerate()
        .map(|(flag, t)| {
            let facet_area = surface.then(|| {
                if t.degenerate {
                    0.0
                } else {
                    facet_volume(&t.a[1..])
                }
            });
            if t.degenerate {
                return Ok(SimplexEntry {
                    flag,
                    vol: 0.0,
                    omega: 0.0,
                    facet_area,
                    bound: 0.0,
                    margin: 0.0,
                    degenerate: true,
                });
            }
            let omega = omegas[flag];
            let bound = coefficient * omega;
            let measured = facet_area.unwrap_or(t.volume);
            Ok(SimplexEntry {
                flag,
                vol: t.volume,
                omega,
                facet_area,
                bound,
                margin: measured - bound,
                degenerate: false,
            })
        })
        .collect()
}

struct Totals {
    total: f64,
    omega_sum: f64,
    min_margin: f64,
}

fn totals(entries: &[SimplexEntry]) -> Totals {
    // Sequential in flag order so totals are bitwise reproducible.
    let mut t = Totals {
        total: 0.0,
        omega_sum: 0.0,
        min_margin: f64::INFINITY,
    };
    for e in entries.iter().filter(|e| !e.degenerate) {
        t.total += e.facet_area.unwrap_or(e.vol);
        t.omega_sum += e.omega;
        t.min_margin = t.min_margin.min(e.margin);
    }
    t
}

fn assemble(
    kind: CertificateKind,
    dim: usize,
    claimed_bound: f64,
    hypothesis: HypothesisReport,
    simplices: Vec<SimplexEntry>,
) -> Certificate {
    let Totals {
        total,
        omega_sum,
        min_margin,
    } = totals(&simplices);
    let eps_cert = 1e-8 * claimed_bound;
    let pass = hypothesis.pass
        && min_margin >= -eps_cert
        && total >= claimed_bound - eps_cert
        && (omega_sum - 1.0).abs() <= OMEGA_SUM_TOL;
    Certificate {
        kind,
        mode: Mode::Vaaler,
        dim,
        claimed_bound,
        total,
        omega_sum,
        min_margin,
        eps_cert,
        pass,
        hypothesis,
        simplices,
    }
}

/// Certifies `vol P ≥ 2ⁿ` simplex by simplex: each nondegenerate `A` must
/// satisfy `vol A ≥ 2ⁿ ω(A)`, where `ω(A) κₙ = vol(B₀(1) ∩ A)` because the
/// facet opposite the origin lies outside the unit ball.
pub fn certify_volume(p: &Polytope) -> Result<Certificate> {
    let hypothesis = require_hypothesis(p)?;
    let n = p.dim();
    let bound = 2f64.powi(n as i32);
    let simplices = ledger(&build_simplices(p), bound, false)?;
    Ok(assemble(
        CertificateKind::Volume,
        n,
        bound,
        hypothesis,
        simplices,
    ))
}

/// Certifies `vol_{n−1} ∂P ≥ n 2ⁿ` for `n ∈ {2, 3}`: each nondegenerate `A`
/// must satisfy `vol_{n−1} conv{a₁, …, aₙ} ≥ n 2ⁿ ω(A)`.
pub fn certify_surface(p: &Polytope) -> Result<Certificate> {
    let n = p.dim();
    if !(2..=3).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    let hypothesis = require_hypothesis(p)?;
    let bound = n as f64 * 2f64.powi(n as i32);
    let simplices = ledger(&build_simplices(p), bound, true)?;
    Ok(assemble(
        CertificateKind::Surface,
        n,
        bound,
        hypothesis,
        simplices,
    ))
}

/// The surface ledger in any dimension, without a verdict.
pub fn evaluate_surface_experimental(p: &Polytope) -> Result<SurfaceEvaluation> {
    let n = p.dim();
    let reference = n as f64 * 2f64.powi(n as i32);
    let simplices = ledger(&build_simplices(p), reference, true)?;
    let t = totals(&simplices);
    Ok(SurfaceEvaluation {
        experimental: true,
        dim: n,
        reference,
        total: t.total,
        surface_area: p.surface_area(),
        omega_sum: t.omega_sum,
        min_margin: t.min_margin,
        simplices,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ContractionStatus {
    Checked,
    /// `|c_k| > |b_k|` at this index.
    PreconditionUnmet {
        index: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContractionReport {
    pub status: ContractionStatus,
    pub samples: usize,
    pub violations: usize,
    /// Largest `|f(x)| − |x|` seen.
    pub max_excess: f64,
    /// Whether `|f(b_k)| = |c_k| ≤ |b_k|` for every vertex.
    pub vertices_ok: bool,
    /// Largest gap between the diagonal map and barycentric interpolation.
    pub max_map_discrepancy: f64,
}

impl ContractionReport {
    pub fn pass(&self) -> bool {
        self.status == ContractionStatus::Checked && self.violations == 0 && self.vertices_ok
    }
}

/// Unit edge directions `(p_k − p_{k−1}) / β_k`.
fn edge_frame(o: &Orthoscheme) -> Vec<Vector> {
    (1..=o.dim())
        .map(|k| (&o.vertices[k] - &o.vertices[k - 1]) / o.edge_lengths[k - 1])
        .collect()
}

/// The affine map `B → C` with `b_k ↦ c_k`, written as the diagonal scaling
/// `λ_k = γ_k / β_k` between the two adapted frames.
pub struct OrthoschemeMap {
    from: Vec<Vector>,
    to: Vec<Vector>,
    scales: Vec<f64>,
}

impl OrthoschemeMap {
    pub fn new(b: &Orthoscheme, c: &Orthoscheme) -> Result<Self> {
        if b.dim() != c.dim() {
            return Err(Error::DimensionMismatch {
                expected: b.dim(),
                found: c.dim(),
            });
        }
        Ok(OrthoschemeMap {
            from: edge_frame(b),
            to: edge_frame(c),
            scales: b
                .edge_lengths
                .iter()
                .zip(&c.edge_lengths)
                .map(|(beta, gamma)| gamma / beta)
                .collect(),
        })
    }

    pub fn apply(&self, x: &Vector) -> Vector {
        let mut y = Vector::zeros(x.len());
        for ((e, f), s) in self.from.iter().zip(&self.to).zip(&self.scales) {
            y.axpy(s * e.dot(x), f, 1.0);
        }
        y
    }
}

/// Samples `B` uniformly and checks `|f(x)| ≤ |x|` for the map `b_k ↦ c_k`.
pub fn orthoscheme_contraction_check(
    b: &Orthoscheme,
    c: &Orthoscheme,
    sample_count: usize,
    seed: u64,
) -> Result<ContractionReport> {
    let map = OrthoschemeMap::new(b, c)?;
    let n = b.dim();
    let b_norms = b.vertex_norms();
    let c_norms = c.vertex_norms();
    if let Some(index) = (1..=n).find(|&k| c_norms[k] > b_norms[k] * (1.0 + 1e-12)) {
        return Ok(ContractionReport {
            status: ContractionStatus::PreconditionUnmet { index },
            samples: 0,
            violations: 0,
            max_excess: 0.0,
            vertices_ok: false,
            max_map_discrepancy: 0.0,
        });
    }
    let vertices_ok = (0..=n).all(|k| {
        let image = map.apply(&b.vertices[k]);
        (image.norm() - c_norms[k]).abs() <= 1e-12 * c_norms[k].max(1.0)
            && c_norms[k] <= b_norms[k] * (1.0 + 1e-12)
    });

    let mut rng = stream_rng(seed, 0);
    let mut violations = 0;
    let mut max_excess = f64::NEG_INFINITY;
    let mut max_map_discrepancy: f64 = 0.0;
    for _ in 0..sample_count {
        let w = dirichlet_weights(&mut rng, n + 1);
        let x = combine(&w, &b.vertices);
        let fx = map.apply(&x);
        let interpolated = combine(&w, &c.vertices);
        max_map_discrepancy = max_map_discrepancy.max((&fx - interpolated).norm());
        let excess = fx.norm() - x.norm();
        max_excess = max_excess.max(excess);
        if excess > CONTRACTION_TOL {
            violations += 1;
        }
    }
    Ok(ContractionReport {
        status: ContractionStatus::Checked,
        samples: sample_count,
        violations,
        max_excess,
        vertices_ok,
        max_map_discrepancy,
    })
}

/// Monte Carlo check of `vol B / vol(B₀(r) ∩ B) ≥ vol C / vol(B₀(r) ∩ C)`,
/// phrased on the ball fractions `p_B ≤ p_C`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorollaryReport {
    pub r: f64,
    pub fraction_b: McEstimate,
    pub fraction_c: McEstimate,
    /// `p_C + 3σ − p_B` with `σ` the combined standard error.
    pub slack: f64,
    pub holds: bool,
}

pub fn orthoscheme_volume_corollary(
    b: &Orthoscheme,
    c: &Orthoscheme,
    r: f64,
    sample_count: usize,
    seed: u64,
) -> Result<CorollaryReport> {
    if b.dim() != c.dim() {
        return Err(Error::DimensionMismatch {
            expected: b.dim(),
            found: c.dim(),
        });
    }
    let fraction = |o: &Orthoscheme, stream_seed: u64| {
        let r2 = r * r;
        let hits = parallel_count(sample_count, stream_seed, |rng| {
            uniform_in_simplex(rng, &o.vertices).norm_squared() <= r2
        });
        fraction_estimate(hits, sample_count, stream_seed)
    };
    let fraction_b = fraction(b, seed);
    let fraction_c = fraction(c, seed ^ 0x9e37_79b9_7f4a_7c15);
    let sigma = fraction_b.std_error.hypot(fraction_c.std_error);
    let slack = fraction_c.value + 3.0 * sigma - fraction_b.value;
    Ok(CorollaryReport {
        r,
        fraction_b,
        fraction_c,
        slack,
        holds: slack >= 0.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepwiseReport {
    pub steps: usize,
    pub samples: usize,
    pub monotonicity_violations: usize,
    pub max_norm_increase: f64,
    /// Largest `|⟨b_j − b_k, a_k − b_k⟩|` over `j < k`.
    pub max_orthogonality_error: f64,
    /// Largest violation of `⟨a_m − b_k, a_k − b_k⟩ ≥ 0` over `m ≥ k`: the
    /// hyperplane through `b_k` orthogonal to `a_k − b_k` keeps `F_k` on one side.
    pub max_side_violation: f64,
}

impl StepwiseReport {
    pub fn pass(&self) -> bool {
        self.monotonicity_violations == 0
            && self.max_orthogonality_error <= SIDE_TOL
            && self.max_side_violation <= SIDE_TOL
    }
}

/// Moves `a_k` to `b_k` one vertex at a time and tracks sampled points of
/// `A` through the chain of affine maps, checking that no step increases
/// their norm.
pub fn stepwise_contraction_check(
    triple: &SimplexTriple,
    sample_count: usize,
    seed: u64,
) -> Result<StepwiseReport> {
    if triple.degenerate {
        return Err(Error::DegenerateInput("simplex A is degenerate".into()));
    }
    let n = triple.dim();
    let (a, b) = (&triple.a, &triple.b);

    let mut max_orthogonality_error: f64 = 0.0;
    let mut max_side_violation: f64 = 0.0;
    for k in 1..=n {
        let motion = &a[k] - &b[k];
        for bj in &b[..k] {
            max_orthogonality_error = max_orthogonality_error.max((bj - &b[k]).dot(&motion).abs());
        }
        for am in &a[k..] {
            max_side_violation = max_side_violation.max(-(am - &b[k]).dot(&motion));
        }
    }

    let mut rng = stream_rng(seed, 0);
    let mut weights: Vec<Vec<f64>> = (0..=n)
        .map(|i| (0..=n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    weights.extend((0..sample_count).map(|_| dirichlet_weights(&mut rng, n + 1)));

    let mut violations = 0;
    let mut max_norm_increase = f64::NEG_INFINITY;
    for w in &weights {
        let mut verts = a.clone();
        let mut previous = combine(w, &verts).norm();
        for k in 1..=n {
            verts[k] = b[k].clone();
            let current = combine(w, &verts).norm();
            let increase = current - previous;
            max_norm_increase = max_norm_increase.max(increase);
            if increase > STEP_TOL {
                violations += 1;
            }
            previous = current;
        }
    }
    Ok(StepwiseReport {
        steps: n,
        samples: weights.len(),
        monotonicity_violations: violations,
        max_norm_increase,
        max_orthogonality_error,
        max_side_violation,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircleMoveReport {
    pub dim: usize,
    /// `b′₁`, the unit-norm point on the circle with diameter `b₀b₂`.
    pub moved: Vec<f64>,
    /// `∠b₂b₀b₁` before and after the move.
    pub t_before: f64,
    pub t_after: f64,
    /// `vol_{n−1} conv{b₁, …, bₙ} / ω(B)`.
    pub ratio_before: f64,
    /// The same ratio for `B′`.
    pub ratio_after: f64,
    /// For `n = 2`: `sin t / t` before and after.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sin_over_t: Option<(f64, f64)>,
    /// For `n = 3`: `|4π ω(B) − area T(t)|` with the area from the projection integral.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lemma_area_discrepancy: Option<f64>,
    pub holds: bool,
}

/// Compares the facet-to-solid-angle ratio of `B` with that of `B′`, where
/// `b₁` is replaced by the unit-norm point on the circle with diameter `b₀b₂`.
pub fn circle_move_check(triple: &SimplexTriple) -> Result<CircleMoveReport> {
    let n = triple.dim();
    if !(2..=3).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    if triple.degenerate {
        return Err(Error::DegenerateInput("simplex A is degenerate".into()));
    }
    let b = &triple.b;
    if b[1].norm() < 1.0 - 1e-12 {
        return Err(Error::InvalidInput(format!(
            "|b_1| = {} is below 1",
            b[1].norm()
        )));
    }
    let b2_norm = b[2].norm();
    if b2_norm <= 1.0 {
        return Err(Error::NoValidPosition(b2_norm));
    }
    let along = &b[2] / b2_norm;
    let across = &b[1] - &along * along.dot(&b[1]);
    if across.norm() < 1e-12 * b2_norm {
        return Err(Error::DegenerateInput(
            "b_1 lies on the line through b_2".into(),
        ));
    }
    let across = across.normalize();
    let cos_t = 1.0 / b2_norm;
    let moved = &along * cos_t + &across * (1.0 - cos_t * cos_t).sqrt();

    let mut b_moved = b.clone();
    b_moved[1] = moved.clone();
    let ratio =
        |verts: &[Vector]| -> Result<f64> { Ok(facet_volume(&verts[1..]) / solid_angle(verts)?) };
    let ratio_before = ratio(b)?;
    let ratio_after = ratio(&b_moved)?;
    let t_before = planar_angle(&b[1], &b[2]);
    let t_after = planar_angle(&moved, &b[2]);

    let sin_over_t = (n == 2).then(|| (t_before.sin() / t_before, t_after.sin() / t_after));
    let lemma_area_discrepancy = if n == 3 {
        let c = planar_angle(&b[2], &b[3]);
        let spec = SphericalTriangleSpec::new(t_before, c)?;
        let area = spherical_triangle_area_integral(&spec);
        Some((4.0 * PI * solid_angle(b)? - area).abs())
    } else {
        None
    };

    Ok(CircleMoveReport {
        dim: n,
        moved: moved.iter().copied().collect(),
        t_before,
        t_after,
        ratio_before,
        ratio_after,
        sin_over_t,
        lemma_area_discrepancy,
        holds: ratio_before >= ratio_after - CIRCLE_TOL * ratio_after.abs().max(1.0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ObtuseReport {
    pub k: usize,
    pub max_dot: f64,
    pub bound: f64,
    pub pass: bool,
}

/// For `k + 1` unit vectors, the largest pairwise dot product, which can
/// never fall below `−1/k`.
pub fn obtuse_pair_bound(vectors: &[Vector]) -> Result<ObtuseReport> {
    if vectors.len() < 2 {
        return Err(Error::InvalidInput("need at least two vectors".into()));
    }
    let dim = vectors[0].len();
    if let Some(v) = vectors.iter().find(|v| v.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: v.len(),
        });
    }
    let deviation = vectors
        .iter()
        .map(|v| (v.norm() - 1.0).abs())
        .fold(0.0, f64::max);
    if deviation > 1e-9 {
        return Err(Error::NotUnitVectors(deviation));
    }
    let k = vectors.len() - 1;
    let mut max_dot = f64::NEG_INFINITY;
    for i in 0..vectors.len() {
        for j in i + 1..vectors.len() {
            max_dot = max_dot.max(vectors[i].dot(&vectors[j]));
        }
    }
    let bound = -1.0 / k as f64;
    Ok(ObtuseReport {
        k,
        max_dot,
        bound,
        pass: max_dot >= bound - 1e-12,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityReport {
    pub c: f64,
    pub ratios: Vec<f64>,
    pub min_difference: f64,
    pub strictly_increasing: bool,
    pub pass: bool,
}

/// Evaluates `area T(t) / sin t` along an increasing grid of `t` for fixed
/// leg `c`; passes when no successive difference drops below `−10⁻¹⁰`.
pub fn sin_ratio_monotonicity_check(c: f64, t_grid: &[f64]) -> Result<MonotonicityReport> {
    if t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput(
            "t grid must be strictly increasing".into(),
        ));
    }
    let ratios = t_grid
        .iter()
        .map(|&t| {
            let spec = SphericalTriangleSpec::new(t, c)?;
            Ok(spherical_triangle_area_integral(&spec) / t.sin())
        })
        .collect::<Result<Vec<f64>>>()?;
    let min_difference = ratios
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    Ok(MonotonicityReport {
        c,
        strictly_increasing: min_difference > 0.0,
        pass: min_difference > -1e-10,
        min_difference,
        ratios,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::random_section;
    use crate::subdivision::{canonical_orthoscheme, orthoscheme_from_b};

    fn hexagon() -> Polytope {
        Polytope::cube_section(3, &[vec![1.0, -1.0, 0.0], vec![1.0, 1.0, -2.0]]).unwrap()
    }

    #[test]
    fn cube_hypothesis_is_tight() {
        for n in 1..=4 {
            let r = check_distance_hypothesis(&Polytope::cube(n).unwrap(), Mode::Vaaler);
            assert!(r.pass);
            assert!(r.entries.iter().all(|e| e.margin.abs() < 1e-14));
            let r = check_distance_hypothesis(&Polytope::cube(n).unwrap(), Mode::Rogers);
            assert!(r.pass);
        }
    }

    #[test]
    fn shrunk_cube_fails_at_codim_one() {
        let p = Polytope::cube(3).unwrap().scaled(0.9).unwrap();
        let r = check_distance_hypothesis(&p, Mode::Vaaler);
        assert!(!r.pass);
        assert!(r.entries.iter().any(|e| e.codim == 1 && e.margin < -0.09));
        assert!(matches!(
            certify_volume(&p),
            Err(Error::HypothesisFailed(_))
        ));
    }

    #[test]
    fn packing_threshold_is_below_cube_threshold() {
        for k in 1..=8 {
            assert!(Mode::Rogers.threshold(k) <= Mode::Vaaler.threshold(k) + 1e-15);
        }
        assert_eq!(Mode::Rogers.threshold(1), 1.0);
    }

    #[test]
    fn cube_certificates_are_tight() {
        for n in 1..=3 {
            let cert = certify_volume(&Polytope::cube(n).unwrap()).unwrap();
            assert!(cert.pass);
            assert!((cert.total - 2f64.powi(n as i32)).abs() < 1e-12);
            assert!(cert.simplices.iter().all(|s| s.margin.abs() < 1e-10));
        }
        let cert = certify_surface(&Polytope::cube(3).unwrap()).unwrap();
        assert!(cert.pass);
        assert!((cert.total - 24.0).abs() < 1e-12);
        let cert = certify_surface(&Polytope::cube(2).unwrap()).unwrap();
        assert!((cert.total - 8.0).abs() < 1e-12);
    }

    #[test]
    fn hexagon_certificates() {
        let p = hexagon();
        let cert = certify_volume(&p).unwrap();
        assert!(cert.pass);
        assert!((cert.total - 3.0 * 3f64.sqrt()).abs() < 1e-9);
        let cert = certify_surface(&p).unwrap();
        assert!(cert.pass);
        assert!((cert.total - p.surface_area()).abs() < 1e-9);
        assert!(cert.total >= 8.0);
    }

    #[test]
    fn surface_dimension_guard() {
        let p = Polytope::cube(4).unwrap();
        assert!(matches!(
            certify_surface(&p),
            Err(Error::UnsupportedDimension(4))
        ));
        let eval = evaluate_surface_experimental(&p).unwrap();
        assert!((eval.total - 64.0).abs() < 1e-9);
    }

    #[test]
    fn contraction_examples() {
        let c = canonical_orthoscheme(3);
        let same = orthoscheme_contraction_check(&c, &c, 200, 1).unwrap();
        assert!(same.pass());
        assert!(same.max_excess.abs() < 1e-14);

        let big = Orthoscheme::from_edge_lengths(&[2.0, 2.0, 2.0]).unwrap();
        let r = orthoscheme_contraction_check(&big, &c, 500, 2).unwrap();
        assert!(r.pass());
        assert!(r.max_excess < 0.0);
        assert!(r.max_map_discrepancy < 1e-12);

        let wide = Orthoscheme::from_edge_lengths(&[2.0, 1.0, 1.0]).unwrap();
        let r = orthoscheme_contraction_check(&c, &wide, 10, 3).unwrap();
        assert_eq!(r.status, ContractionStatus::PreconditionUnmet { index: 1 });

        let short = canonical_orthoscheme(2);
        assert!(matches!(
            orthoscheme_contraction_check(&c, &short, 10, 3),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn stepwise_on_cube_is_identity() {
        let p = Polytope::cube(3).unwrap();
        for t in build_simplices(&p) {
            let r = stepwise_contraction_check(&t, 50, 0).unwrap();
            assert!(r.pass());
            assert!(r.max_norm_increase.abs() < 1e-14);
        }
    }

    #[test]
    fn stepwise_on_sections() {
        for seed in 0..4 {
            let p = random_section(3, 5, seed).unwrap().1;
            for t in build_simplices(&p).iter().filter(|t| !t.degenerate) {
                let r = stepwise_contraction_check(t, 200, seed).unwrap();
                assert!(r.pass(), "{r:?}");
            }
        }
        for t in build_simplices(&hexagon()) {
            assert!(stepwise_contraction_check(&t, 1000, 1).unwrap().pass());
        }
    }

    #[test]
    fn circle_move_on_cube_is_equality() {
        let p = Polytope::cube(3).unwrap();
        for t in build_simplices(&p) {
            let r = circle_move_check(&t).unwrap();
            assert!(r.holds);
            assert!((r.ratio_before - r.ratio_after).abs() < 1e-12);
            assert!(r.lemma_area_discrepancy.unwrap() < 1e-8);
        }
    }

    #[test]
    fn circle_move_planar_instance() {
        // |b1| = 1.2 and |b2| = 1.5 with b1 ⟂ b2 − b1.
        let b1_norm: f64 = 1.2;
        let b2_norm: f64 = 1.5;
        let t = (b1_norm / b2_norm).acos();
        let b2 = Vector::from_column_slice(&[b2_norm, 0.0]);
        let b1 = Vector::from_column_slice(&[b1_norm * t.cos(), b1_norm * t.sin()]);
        let triple = SimplexTriple {
            flag: crate::subdivision::Flag {
                faces: vec![0, 1, 2],
            },
            a: vec![Vector::zeros(2), b1.clone(), b2.clone()],
            b: vec![Vector::zeros(2), b1, b2],
            volume: 0.5,
            degenerate: false,
        };
        let r = circle_move_check(&triple).unwrap();
        assert!(r.holds);
        let (before, after) = r.sin_over_t.unwrap();
        // Explicit evaluation: t' = arccos(1/|b2|) > t, and sin t / t decreases.
        let t_after = (1.0 / b2_norm).acos();
        assert!((r.t_after - t_after).abs() < 1e-12);
        assert!((before - t.sin() / t).abs() < 1e-12);
        assert!(before >= after);
        assert!((r.moved.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn circle_move_rejects_small_b2() {
        let b1 = Vector::from_column_slice(&[1.0, 0.0]);
        let b2 = Vector::from_column_slice(&[0.9, 0.3]);
        let triple = SimplexTriple {
            flag: crate::subdivision::Flag {
                faces: vec![0, 1, 2],
            },
            a: vec![Vector::zeros(2), b1.clone(), b2.clone()],
            b: vec![Vector::zeros(2), b1, b2],
            volume: 0.15,
            degenerate: false,
        };
        assert!(matches!(
            circle_move_check(&triple),
            Err(Error::NoValidPosition(_))
        ));
    }

    #[test]
    fn obtuse_examples() {
        let third = 2.0 * PI / 3.0;
        let tri: Vec<Vector> = (0..3)
            .map(|i| {
                Vector::from_column_slice(&[(third * i as f64).cos(), (third * i as f64).sin()])
            })
            .collect();
        let r = obtuse_pair_bound(&tri).unwrap();
        assert!(r.pass);
        assert!((r.max_dot + 0.5).abs() < 1e-15);

        let u = Vector::from_column_slice(&[0.6, 0.8]);
        let r = obtuse_pair_bound(&[u.clone(), -u]).unwrap();
        assert!(r.pass && r.max_dot == -1.0);

        let bad = [
            Vector::from_column_slice(&[2.0, 0.0]),
            Vector::from_column_slice(&[0.0, 1.0]),
        ];
        assert!(matches!(
            obtuse_pair_bound(&bad),
            Err(Error::NotUnitVectors(_))
        ));
    }

    #[test]
    fn monotonicity_examples() {
        let grid: Vec<f64> = (1..=100)
            .map(|i| i as f64 * (PI / 2.0 - 0.02) / 100.0)
            .collect();
        let r = sin_ratio_monotonicity_check(PI / 4.0, &grid).unwrap();
        assert!(r.pass && r.strictly_increasing);

        let r = sin_ratio_monotonicity_check(1e-3, &grid).unwrap();
        assert!(r.pass);

        let r = sin_ratio_monotonicity_check(0.5, &[0.7]).unwrap();
        assert!(r.pass);
        assert_eq!(r.ratios.len(), 1);
    }

    #[test]
    fn b_orthoschemes_contract_onto_canonical() {
        let p = random_section(2, 4, 9).unwrap().1;
        let c = canonical_orthoscheme(2);
        for t in build_simplices(&p) {
            let o = orthoscheme_from_b(&t).unwrap();
            assert!(orthoscheme_contraction_check(&o, &c, 100, 0)
                .unwrap()
                .pass());
        }
    }
}
