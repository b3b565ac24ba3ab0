//! Bounded polytopes in H-representation with the origin in their interior.
//!
//! Construction enumerates vertices by brute force over `n`-subsets of the
//! constraints, then builds the full face lattice keyed by vertex sets.
//! Closest points to the origin are cached per face at build time.

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::geometry::{
    facet_volume, gram_schmidt, project_onto_affine, simplex_volume, unit, AffineSpan, Vector,
    EPS_RANK,
};

/// Smallest admissible constraint offset; the origin must be this deep inside.
pub const EPS_INT: f64 = 1e-9;
/// Feasibility slack for points tested against the constraints.
pub const EPS_FEAS: f64 = 1e-9;
/// Distance below which two computed vertices are merged.
pub const MERGE_TOL: f64 = 1e-8;
/// Slack for deciding that a vertex lies on a constraint hyperplane.
const ACTIVE_TOL: f64 = 1e-8;
/// Highest supported ambient dimension.
pub const MAX_DIM: usize = 8;
/// Cap on the number of constraint subsets visited by vertex enumeration.
const MAX_SUBSETS: u128 = 2_000_000;

/// The constraint `normal · x ≤ offset` with a unit normal.
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace {
    pub normal: Vector,
    pub offset: f64,
}

impl Halfspace {
    fn slack(&self, x: &Vector) -> f64 {
        self.offset - self.normal.dot(x)
    }

    fn scale(&self) -> f64 {
        self.offset.abs().max(1.0)
    }
}

/// A face of a polytope, identified by the set of vertices it contains.
#[derive(Debug, Clone)]
pub struct Face {
    /// Constraints tight on every vertex of the face.
    pub active: Vec<usize>,
    pub codim: usize,
    pub span: AffineSpan,
    /// Sorted indices into [`Polytope::vertices`].
    pub vertex_ids: Vec<usize>,
}

impl Face {
    pub fn dim(&self) -> usize {
        self.span.dim()
    }

    /// Whether `self ⊆ other`.
    pub fn is_subface_of(&self, other: &Face) -> bool {
        is_sorted_subset(&self.vertex_ids, &other.vertex_ids)
    }
}

fn is_sorted_subset(small: &[usize], big: &[usize]) -> bool {
    let mut it = big.iter();
    small.iter().all(|x| it.any(|y| y == x))
}

#[derive(Debug, Clone)]
pub struct Polytope {
    dim: usize,
    halfspaces: Vec<Halfspace>,
    vertices: Vec<Vector>,
    faces: Vec<Face>,
    /// Faces of codimension one higher contained in each face.
    children: Vec<Vec<usize>>,
    /// Closest point of each face to the origin.
    anchors: Vec<Vector>,
    /// Closest point of each face's affine hull to the origin.
    foots: Vec<Vector>,
}

impl Polytope {
    /// Builds a polytope from `(normal, offset)` pairs describing
    /// `normal · x ≤ offset`. Normals are rescaled to unit length.
    pub fn from_halfspaces(dim: usize, hs: Vec<(Vector, f64)>) -> Result<Polytope> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::InvalidInput(format!(
                "dimension {dim} outside 1..={MAX_DIM}"
            )));
        }
        if hs.is_empty() {
            return Err(Error::InvalidInput("no halfspaces given".into()));
        }
        let mut halfspaces = Vec::with_capacity(hs.len());
        for (index, (normal, offset)) in hs.into_iter().enumerate() {
            if normal.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: normal.len(),
                });
            }
            if !offset.is_finite() || normal.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "constraint {index} has non-finite entries"
                )));
            }
            let norm = normal.norm();
            if !norm.is_finite() || norm < EPS_RANK {
                return Err(Error::InvalidInput(format!(
                    "constraint {index} has a zero normal"
                )));
            }
            let offset = offset / norm;
            if !offset.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "constraint {index} has a non-finite normalized offset"
                )));
            }
            if offset < EPS_INT {
                return Err(Error::OriginNotInterior { index, offset });
            }
            halfspaces.push(Halfspace {
                normal: normal / norm,
                offset,
            });
        }

        check_subset_budget(halfspaces.len(), dim)?;
        check_bounded(dim, &halfspaces)?;
        let vertices = enumerate_vertices(dim, &halfspaces);
        if vertices.len() <= dim {
            return Err(Error::EmptyInterior);
        }
        let full = AffineSpan::of_points(&vertices);
        if full.dim() < dim {
            return Err(Error::EmptyInterior);
        }

        let (faces, children) = build_lattice(dim, &halfspaces, &vertices);
        let mut polytope = Polytope {
            dim,
            halfspaces,
            vertices,
            faces,
            children,
            anchors: Vec::new(),
            foots: Vec::new(),
        };
        polytope.fill_closest_points();
        Ok(polytope)
    }

    /// The cube `[-1, 1]ⁿ`.
    pub fn cube(n: usize) -> Result<Polytope> {
        let hs = (0..n)
            .flat_map(|i| [(unit(n, i), 1.0), (-unit(n, i), 1.0)])
            .collect();
        Polytope::from_halfspaces(n, hs)
    }

    /// The section of `[-1, 1]^N` by the row space of `basis` (n rows of
    /// length N), expressed in an orthonormal chart of that subspace so
    /// that volumes and distances agree with the ambient section.
    pub fn cube_section(big_n: usize, basis: &[Vec<f64>]) -> Result<Polytope> {
        let n = basis.len();
        if n == 0 || n > big_n || big_n > MAX_DIM {
            return Err(Error::InvalidInput(format!(
                "section needs 1 <= n <= N <= {MAX_DIM}, got n={n}, N={big_n}"
            )));
        }
        let mut rows = Vec::with_capacity(n);
        for row in basis {
            if row.len() != big_n {
                return Err(Error::DimensionMismatch {
                    expected: big_n,
                    found: row.len(),
                });
            }
            if row.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidInput("basis has non-finite entries".into()));
            }
            rows.push(Vector::from_column_slice(row));
        }
        let q = gram_schmidt(&rows);
        if q.len() < n {
            return Err(Error::RankDeficient {
                rank: q.len(),
                expected: n,
            });
        }
        let mut hs = Vec::with_capacity(2 * big_n);
        #[allow(clippy::needless_range_loop)]
        for i in 0..big_n {
            let column = Vector::from_fn(n, |r, _| q[r][i]);
            // A zero column means the subspace is orthogonal to e_i and the
            // pair of constraints ±x_i ≤ 1 never binds.
            if column.norm() < 1e-12 {
                continue;
            }
            hs.push((column.clone(), 1.0));
            hs.push((-column, 1.0));
        }
        Polytope::from_halfspaces(n, hs)
    }

    /// The polytope scaled by `factor > 0` about the origin.
    pub fn scaled(&self, factor: f64) -> Result<Polytope> {
        let hs = self
            .halfspaces
            .iter()
            .map(|h| (h.normal.clone(), h.offset * factor))
            .collect();
        Polytope::from_halfspaces(self.dim, hs)
    }

    /// The image of the polytope under the orthogonal matrix `rotation`.
    pub fn rotated(&self, rotation: &DMatrix<f64>) -> Result<Polytope> {
        let hs = self
            .halfspaces
            .iter()
            .map(|h| (rotation * &h.normal, h.offset))
            .collect();
        Polytope::from_halfspaces(self.dim, hs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    /// Vertices in lexicographic order.
    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    /// All faces, sorted by codimension then vertex set; face 0 is `P` itself.
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, id: usize) -> &Face {
        &self.faces[id]
    }

    /// Faces of codimension one more than `id` that it contains.
    pub fn children(&self, id: usize) -> &[usize] {
        &self.children[id]
    }

    pub fn face_counts_by_codim(&self) -> Vec<usize> {
        let mut counts = vec![0; self.dim + 1];
        for f in &self.faces {
            counts[f.codim] += 1;
        }
        counts
    }

    /// Whether `x` satisfies every constraint within [`EPS_FEAS`].
    pub fn contains(&self, x: &Vector) -> bool {
        self.halfspaces
            .iter()
            .all(|h| h.slack(x) >= -EPS_FEAS * h.scale())
    }

    /// The point of face `id` closest to the origin.
    pub fn closest_point_in_face(&self, id: usize) -> &Vector {
        &self.anchors[id]
    }

    /// The point of the affine hull of face `id` closest to the origin.
    pub fn closest_point_in_affine_span(&self, id: usize) -> &Vector {
        &self.foots[id]
    }

    /// Largest vertex norm.
    pub fn circumradius(&self) -> f64 {
        self.vertices.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Axis-aligned bounding box as `(lower, upper)`.
    pub fn bounding_box(&self) -> (Vector, Vector) {
        let mut lo = self.vertices[0].clone();
        let mut hi = self.vertices[0].clone();
        for v in &self.vertices[1..] {
            lo = lo.inf(v);
            hi = hi.sup(v);
        }
        (lo, hi)
    }

    /// Triangulation of face `id` into simplices of its own dimension,
    /// each given by vertex indices. Faces are coned from their first
    /// vertex over the subfaces that avoid it.
    pub fn triangulate_face(&self, id: usize) -> Vec<Vec<usize>> {
        let face = &self.faces[id];
        if face.dim() == 0 {
            return vec![vec![face.vertex_ids[0]]];
        }
        let pivot = face.vertex_ids[0];
        let mut out = Vec::new();
        for &child in &self.children[id] {
            if self.faces[child].vertex_ids.binary_search(&pivot).is_ok() {
                continue;
            }
            for mut simplex in self.triangulate_face(child) {
                simplex.insert(0, pivot);
                out.push(simplex);
            }
        }
        out
    }

    /// Ids of the codimension-one faces.
    pub fn facets(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.faces.len()).filter(|&i| self.faces[i].codim == 1)
    }

    /// Volume by a fan from the origin over the triangulated boundary.
    pub fn volume(&self) -> f64 {
        let origin = Vector::zeros(self.dim);
        let mut total = 0.0;
        for facet in self.facets() {
            for simplex in self.triangulate_face(facet) {
                let mut verts = vec![origin.clone()];
                verts.extend(simplex.iter().map(|&i| self.vertices[i].clone()));
                total += simplex_volume(&verts);
            }
        }
        total
    }

    /// `(n−1)`-volume of the boundary.
    pub fn surface_area(&self) -> f64 {
        let mut total = 0.0;
        for facet in self.facets() {
            for simplex in self.triangulate_face(facet) {
                let verts: Vec<Vector> =
                    simplex.iter().map(|&i| self.vertices[i].clone()).collect();
                total += facet_volume(&verts);
            }
        }
        total
    }

    fn fill_closest_points(&mut self) {
        let origin = Vector::zeros(self.dim);
        let count = self.faces.len();
        self.foots = self
            .faces
            .iter()
            .map(|f| project_onto_affine(&f.span, &origin))
            .collect();
        let mut anchors: Vec<Option<Vector>> = vec![None; count];
        // Faces are sorted by codimension, so children come later.
        for id in (0..count).rev() {
            let foot = &self.foots[id];
            let best = if self.contains(foot) {
                foot.clone()
            } else {
                self.children[id]
                    .iter()
                    .map(|&c| anchors[c].as_ref().expect("child anchors computed first"))
                    .min_by(|a, b| a.norm().total_cmp(&b.norm()))
                    .cloned()
                    // Only vertices have no children, and their foot is the vertex.
                    .unwrap_or_else(|| foot.clone())
            };
            anchors[id] = Some(best);
        }
        self.anchors = anchors.into_iter().map(Option::unwrap).collect();
    }
}

fn binomial(m: usize, k: usize) -> u128 {
    if k > m {
        return 0;
    }
    let k = k.min(m - k);
    (0..k).fold(1u128, |acc, i| acc * (m - i) as u128 / (i + 1) as u128)
}

fn check_subset_budget(m: usize, n: usize) -> Result<()> {
    let work = binomial(m, n) + binomial(m, n - 1);
    if work > MAX_SUBSETS {
        return Err(Error::TooLarge(format!(
            "{m} constraints in dimension {n} exceed the enumeration budget"
        )));
    }
    Ok(())
}

/// Calls `f` on every `k`-subset of `0..m` in lexicographic order.
fn for_each_subset(m: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > m {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        while i > 0 && idx[i - 1] == i - 1 + m - k {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// With the origin interior, `P` is unbounded iff the recession cone
/// `{d : A d ≤ 0}` is nontrivial. When the normals have full rank that cone
/// is pointed, so it suffices to test its candidate extreme rays: null
/// directions of `n − 1` independent constraints.
fn check_bounded(n: usize, hs: &[Halfspace]) -> Result<()> {
    let normals: Vec<Vector> = hs.iter().map(|h| h.normal.clone()).collect();
    if gram_schmidt(&normals).len() < n {
        return Err(Error::Unbounded);
    }
    let mut unbounded = false;
    for_each_subset(hs.len(), n - 1, |subset| {
        if unbounded {
            return;
        }
        let rows: Vec<Vector> = subset.iter().map(|&i| normals[i].clone()).collect();
        let q = gram_schmidt(&rows);
        if q.len() < n - 1 {
            return;
        }
        // Complete the orthonormal basis; the first added vector spans the null space.
        let mut ext = q.clone();
        ext.extend((0..n).map(|i| unit(n, i)));
        let full = gram_schmidt(&ext);
        let d = &full[n - 1];
        for dir in [d.clone(), -d] {
            if normals.iter().all(|a| a.dot(&dir) <= 1e-12) {
                unbounded = true;
            }
        }
    });
    if unbounded {
        Err(Error::Unbounded)
    } else {
        Ok(())
    }
}

/// Solves every `n`-subset of constraints as equalities and keeps feasible
/// solutions, merged at [`MERGE_TOL`] and sorted lexicographically.
pub fn enumerate_vertices(n: usize, hs: &[Halfspace]) -> Vec<Vector> {
    let mut found: Vec<Vector> = Vec::new();
    for_each_subset(hs.len(), n, |subset| {
        let a = DMatrix::from_fn(n, n, |r, c| hs[subset[r]].normal[c]);
        if a.determinant().abs() < 1e-10 {
            return;
        }
        let b = Vector::from_fn(n, |r, _| hs[subset[r]].offset);
        let Some(x) = a.lu().solve(&b) else {
            return;
        };
        if x.iter().any(|c| !c.is_finite()) {
            return;
        }
        if hs.iter().all(|h| h.slack(&x) >= -EPS_FEAS * h.scale()) {
            found.push(x);
        }
    });
    found.sort_by(lex_cmp);
    let mut merged: Vec<Vector> = Vec::new();
    for x in found {
        if !merged.iter().any(|y| (y - &x).amax() <= MERGE_TOL) {
            merged.push(x);
        }
    }
    merged
}

fn lex_cmp(a: &Vector, b: &Vector) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Equal => continue,
            other => return other,
        }
    }
    std::cmp::Ordering::Equal
}

fn build_lattice(n: usize, hs: &[Halfspace], vertices: &[Vector]) -> (Vec<Face>, Vec<Vec<usize>>) {
    let vertex_active: Vec<Vec<usize>> = vertices
        .iter()
        .map(|v| {
            (0..hs.len())
                .filter(|&i| hs[i].slack(v).abs() <= ACTIVE_TOL * hs[i].scale())
                .collect()
        })
        .collect();

    let affine_dim = |ids: &[usize]| -> usize {
        let pts: Vec<Vector> = ids.iter().map(|&i| vertices[i].clone()).collect();
        AffineSpan::of_points(&pts).dim()
    };

    let mut facets: BTreeSet<Vec<usize>> = BTreeSet::new();
    for i in 0..hs.len() {
        let ids: Vec<usize> = (0..vertices.len())
            .filter(|&v| vertex_active[v].contains(&i))
            .collect();
        if !ids.is_empty() && affine_dim(&ids) + 1 == n {
            facets.insert(ids);
        }
    }

    // Every proper face is an intersection of facets.
    let mut sets: BTreeSet<Vec<usize>> = facets.clone();
    let mut frontier: Vec<Vec<usize>> = facets.iter().cloned().collect();
    while let Some(set) = frontier.pop() {
        for facet in &facets {
            let meet: Vec<usize> = set
                .iter()
                .copied()
                .filter(|v| facet.binary_search(v).is_ok())
                .collect();
            if !meet.is_empty() && sets.insert(meet.clone()) {
                frontier.push(meet);
            }
        }
    }
    sets.insert((0..vertices.len()).collect());

    let mut faces: Vec<Face> = sets
        .into_iter()
        .map(|ids| {
            let pts: Vec<Vector> = ids.iter().map(|&i| vertices[i].clone()).collect();
            let span = AffineSpan::of_points(&pts);
            let active = (0..hs.len())
                .filter(|c| ids.iter().all(|&v| vertex_active[v].contains(c)))
                .collect();
            Face {
                active,
                codim: n - span.dim(),
                span,
                vertex_ids: ids,
            }
        })
        .collect();
    faces.sort_by(|a, b| {
        a.codim
            .cmp(&b.codim)
            .then_with(|| a.vertex_ids.cmp(&b.vertex_ids))
    });

    let children = faces
        .iter()
        .map(|f| {
            (0..faces.len())
                .filter(|&g| faces[g].codim == f.codim + 1 && faces[g].is_subface_of(f))
                .collect()
        })
        .collect();
    (faces, children)
}

/// A section of `[-1, 1]^N` by a uniformly random `n`-dimensional subspace,
/// drawn as orthonormalized standard-normal rows. Returns the basis rows and
/// the section polytope.
pub fn random_section(n: usize, big_n: usize, seed: u64) -> Result<(Vec<Vec<f64>>, Polytope)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            (0..big_n)
                .map(|_| StandardNormal.sample(&mut rng))
                .collect()
        })
        .collect();
    let p = Polytope::cube_section(big_n, &basis)?;
    Ok((basis, p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_column_slice(xs)
    }

    pub(crate) fn hexagon() -> Polytope {
        Polytope::cube_section(3, &[vec![1.0, -1.0, 0.0], vec![1.0, 1.0, -2.0]]).unwrap()
    }

    fn shoelace(points: &[Vector]) -> f64 {
        // Sort by angle around the centroid, then apply the shoelace formula.
        let c = points.iter().fold(Vector::zeros(2), |acc, p| acc + p) / points.len() as f64;
        let mut pts: Vec<&Vector> = points.iter().collect();
        pts.sort_by(|a, b| {
            (a[1] - c[1])
                .atan2(a[0] - c[0])
                .total_cmp(&(b[1] - c[1]).atan2(b[0] - c[0]))
        });
        let mut twice = 0.0;
        for i in 0..pts.len() {
            let (p, q) = (pts[i], pts[(i + 1) % pts.len()]);
            twice += p[0] * q[1] - q[0] * p[1];
        }
        twice.abs() / 2.0
    }

    #[test]
    fn square_from_halfspaces() {
        let hs = vec![
            (v(&[1.0, 0.0]), 1.0),
            (v(&[-1.0, 0.0]), 1.0),
            (v(&[0.0, 1.0]), 1.0),
            (v(&[0.0, -1.0]), 1.0),
        ];
        let p = Polytope::from_halfspaces(2, hs).unwrap();
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(
            p.vertices(),
            &[
                v(&[-1.0, -1.0]),
                v(&[-1.0, 1.0]),
                v(&[1.0, -1.0]),
                v(&[1.0, 1.0])
            ]
        );
    }

    #[test]
    fn construction_errors() {
        let mut hs: Vec<(Vector, f64)> = (0..3)
            .flat_map(|i| [(unit(3, i), 1.0), (-unit(3, i), 1.0)])
            .collect();
        hs[2].1 = -0.5;
        assert!(matches!(
            Polytope::from_halfspaces(3, hs),
            Err(Error::OriginNotInterior { index: 2, .. })
        ));

        let slab = vec![(v(&[1.0, 0.0]), 1.0), (v(&[-1.0, 0.0]), 1.0)];
        assert!(matches!(
            Polytope::from_halfspaces(2, slab),
            Err(Error::Unbounded)
        ));

        // Full-rank normals but a recession direction (-1, -1).
        let wedge = vec![(v(&[1.0, 0.0]), 1.0), (v(&[0.0, 1.0]), 1.0)];
        assert!(matches!(
            Polytope::from_halfspaces(2, wedge),
            Err(Error::Unbounded)
        ));

        assert!(matches!(
            Polytope::from_halfspaces(2, vec![(v(&[1.0]), 1.0)]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            Polytope::from_halfspaces(2, vec![(v(&[0.0, 0.0]), 1.0)]),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            Polytope::from_halfspaces(2, vec![]),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn cubes() {
        let c1 = Polytope::cube(1).unwrap();
        assert_eq!(c1.vertices(), &[v(&[-1.0]), v(&[1.0])]);
        assert_eq!(c1.volume(), 2.0);

        let c2 = Polytope::cube(2).unwrap();
        assert_eq!(c2.face_counts_by_codim(), vec![1, 4, 4]);
        assert!((c2.surface_area() - 8.0).abs() < 1e-12);

        let c3 = Polytope::cube(3).unwrap();
        assert_eq!(c3.vertices().len(), 8);
        assert_eq!(c3.face_counts_by_codim(), vec![1, 6, 12, 8]);
        assert!((c3.volume() - 8.0).abs() < 1e-12 * 8.0);
        assert!((c3.surface_area() - 24.0).abs() < 1e-12 * 24.0);
        for n in 1..=6 {
            let c = Polytope::cube(n).unwrap();
            let exact = 2f64.powi(n as i32);
            assert!((c.volume() - exact).abs() <= 1e-12 * exact, "n={n}");
        }
    }

    #[test]
    fn identity_section_is_cube() {
        for n in 1..=4 {
            let basis: Vec<Vec<f64>> = (0..n)
                .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
                .collect();
            let s = Polytope::cube_section(n, &basis).unwrap();
            let c = Polytope::cube(n).unwrap();
            assert_eq!(s.vertices(), c.vertices());
        }
    }

    #[test]
    fn diagonal_segment_section() {
        let r = 1.0 / 2f64.sqrt();
        let s = Polytope::cube_section(2, &[vec![r, r]]).unwrap();
        assert_eq!(s.vertices().len(), 2);
        assert!((s.volume() - 2.0 * 2f64.sqrt()).abs() < 1e-12);
        for x in s.vertices() {
            assert!((x.norm() - 2f64.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn rank_deficient_section() {
        let err = Polytope::cube_section(3, &[vec![1.0, 1.0, 0.0], vec![2.0, 2.0, 0.0]]);
        assert!(matches!(
            err,
            Err(Error::RankDeficient {
                rank: 1,
                expected: 2
            })
        ));
    }

    #[test]
    fn hexagon_section() {
        let h = hexagon();
        assert_eq!(h.vertices().len(), 6);
        for x in h.vertices() {
            assert!((x.norm() - 2f64.sqrt()).abs() < 1e-12);
        }
        assert_eq!(h.face_counts_by_codim(), vec![1, 6, 6]);
        let area = 3.0 * 3f64.sqrt();
        assert!((shoelace(h.vertices()) - area).abs() < 1e-12);
        assert!((h.volume() - area).abs() < 1e-9);
        // Perimeter oracle: sum of consecutive edge lengths, each of length √2.
        let mut perimeter = 0.0;
        for f in h.facets() {
            let ids = &h.face(f).vertex_ids;
            perimeter += (&h.vertices()[ids[0]] - &h.vertices()[ids[1]]).norm();
        }
        assert!((h.surface_area() - perimeter).abs() < 1e-12);
        assert!((perimeter - 6.0 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn closest_points_on_cube() {
        let c = Polytope::cube(3).unwrap();
        assert_eq!(c.closest_point_in_face(0).norm(), 0.0);
        let facet = (0..c.faces().len())
            .find(|&i| c.face(i).codim == 1 && c.face(i).active == vec![0])
            .unwrap();
        assert!((c.closest_point_in_face(facet) - v(&[1.0, 0.0, 0.0])).norm() < 1e-14);
        assert!((c.closest_point_in_affine_span(facet) - v(&[1.0, 0.0, 0.0])).norm() < 1e-14);
        let edge = (0..c.faces().len())
            .find(|&i| c.face(i).codim == 2 && c.face(i).active == vec![0, 2])
            .unwrap();
        let a = c.closest_point_in_face(edge);
        assert!((a - v(&[1.0, 1.0, 0.0])).norm() < 1e-14);
        let vertex = (0..c.faces().len())
            .find(|&i| c.face(i).codim == 3 && c.face(i).active == vec![0, 2, 4])
            .unwrap();
        let b = c.closest_point_in_affine_span(vertex);
        assert!((b.norm() - 3f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn closest_point_on_boundary_of_face() {
        // Triangle whose facet x = 1 has its nearest point at a vertex.
        let hs = vec![
            (v(&[1.0, 0.0]), 1.0),
            (v(&[1.5, -2.0]), 0.5),
            (v(&[-3.0, 2.0]), 1.0),
        ];
        let p = Polytope::from_halfspaces(2, hs).unwrap();
        for id in 0..p.faces().len() {
            let a = p.closest_point_in_face(id);
            let b = p.closest_point_in_affine_span(id);
            assert!(a.norm() >= b.norm() - 1e-12);
            for &vid in &p.face(id).vertex_ids {
                let vx = &p.vertices()[vid];
                assert!(a.dot(&(vx - a)) >= -1e-8);
            }
        }
        let facet = p.facets().find(|&f| p.face(f).active == vec![0]).unwrap();
        let a = p.closest_point_in_face(facet);
        assert!(a[1] > 0.0 && (a[0] - 1.0).abs() < 1e-12);
        assert!(p
            .face(facet)
            .vertex_ids
            .iter()
            .any(|&i| (&p.vertices()[i] - a).norm() < 1e-12));
    }

    #[test]
    fn codim_matches_active_rank() {
        let (_, s) = random_section(3, 5, 11).unwrap();
        for f in s.faces() {
            let normals: Vec<Vector> = f
                .active
                .iter()
                .map(|&i| s.halfspaces()[i].normal.clone())
                .collect();
            assert_eq!(gram_schmidt(&normals).len(), f.codim);
        }
    }

    #[test]
    fn euler_characteristic() {
        let mut polys = vec![hexagon()];
        for n in 1..=5 {
            polys.push(Polytope::cube(n).unwrap());
        }
        for seed in 0..5 {
            polys.push(random_section(3, 6, seed).unwrap().1);
            polys.push(random_section(2, 5, seed).unwrap().1);
        }
        for p in polys {
            let n = p.dim();
            let chi: i64 = p
                .faces()
                .iter()
                .filter(|f| f.codim > 0)
                .map(|f| if f.dim() % 2 == 0 { 1 } else { -1 })
                .sum();
            assert_eq!(chi, 1 + if (n - 1) % 2 == 0 { 1 } else { -1 });
        }
    }

    #[test]
    fn subsets_enumerated_in_order() {
        let mut seen = Vec::new();
        for_each_subset(4, 2, |s| seen.push(s.to_vec()));
        assert_eq!(
            seen,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        let mut empty = 0;
        for_each_subset(3, 0, |s| {
            assert!(s.is_empty());
            empty += 1
        });
        assert_eq!(empty, 1);
    }

    #[test]
    fn random_section_is_deterministic() {
        let (b1, p1) = random_section(2, 5, 7).unwrap();
        let (b2, p2) = random_section(2, 5, 7).unwrap();
        assert_eq!(b1, b2);
        assert_eq!(p1.vertices(), p2.vertices());
    }
}
