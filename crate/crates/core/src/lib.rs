//! Executable volume and surface-area certificates for polytopes whose
//! faces stay far from the origin.
//!
//! A polytope `P ⊂ ℝⁿ` containing the origin, in which every codimension-`k`
//! face has affine hull at distance at least `√k` from the origin, has
//! volume at least `2ⁿ` (and, for `n ≤ 3`, boundary measure at least
//! `n 2ⁿ`). Sections of the cube `[-1, 1]^N` by linear subspaces are the
//! motivating family. This crate builds the flag subdivision of `P` into
//! simplices anchored at nearest points, evaluates every simplex against
//! its share of the bound, and exposes each intermediate inequality as a
//! separate checker.
//!
//! ```
//! use flagcert::{certify_volume, Polytope};
//!
//! let hexagon = Polytope::cube_section(3, &[vec![1.0, -1.0, 0.0], vec![1.0, 1.0, -2.0]])?;
//! let cert = certify_volume(&hexagon)?;
//! assert!(cert.pass);
//! assert!((cert.total - 3.0 * 3f64.sqrt()).abs() < 1e-9);
//! # Ok::<(), flagcert::Error>(())
//! ```

pub mod certify;
pub mod error;
pub mod geometry;
pub mod io;
pub mod measures;
pub mod polytope;
pub mod quadrature;
pub mod sampling;
pub mod subdivision;

pub use certify::{
    certify_surface, certify_volume, check_distance_hypothesis, circle_move_check,
    obtuse_pair_bound, orthoscheme_contraction_check, sin_ratio_monotonicity_check,
    stepwise_contraction_check, Certificate, HypothesisReport, Mode,
};
pub use error::{Error, Result};
pub use geometry::{AffineSpan, Vector};
pub use polytope::{Face, Polytope};
pub use sampling::McEstimate;
pub use subdivision::{
    build_simplices, canonical_orthoscheme, covering_check, enumerate_flags, orthoscheme_from_b,
    Flag, Orthoscheme, SimplexTriple,
};
