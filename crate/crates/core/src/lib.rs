//! fatoulab: a numerical laboratory for holomorphic dynamics in two complex
//! variables.
//!
//! The crate implements, at desk scale, two explicit families of polynomial
//! endomorphisms of C^2 and the machinery needed to probe their invariant
//! sets:
//!
//! * a skew product `(z, w) -> (lambda z + z^3, lambda^{-1}(w + z w^2) + w^3)`
//!   whose fiber dynamics contracts toward a rotating disk in the z-axis
//!   (`dynamics`, `siegel`);
//! * maps `F = Id + g^k (P, Q)` tangent to the identity along the curve
//!   `{g = 0}`, with characteristic directions, parabolic petals, and the
//!   monodromy of attracting directions for the cusp family
//!   `F = Id + (z^p - w^q)^k (z, -w)` (`parabolic`, `monodromy`).
//!
//! Everything is plain `f64` numerics: orbits are deterministic, grids and
//! seed batches parallelize over rayon (feature `parallel`, on by default)
//! with a sequential fallback that produces identical output.

pub mod algebra;
pub mod dynamics;
pub mod error;
pub mod exec;
pub mod monodromy;
pub mod parabolic;
pub mod siegel;
pub mod util;

pub use error::{Error, Result};

/// Default rotation number: the golden mean `(sqrt(5) - 1) / 2`.
///
/// Both `z -> lambda z + z^3` and `w -> lambda^{-1} w + w^3` are then
/// linearizable near the origin (the golden mean is Diophantine).
pub const GOLDEN_MEAN: f64 = 0.6180339887498949;
