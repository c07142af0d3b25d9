//! Bivariate complex polynomial arithmetic, homogeneous decomposition, and
//! root finding on the projective line.

mod form;
mod parse;
mod poly;
mod proj;
mod resultant;
mod roots;

pub use form::{homogeneous_part, BinaryForm};
pub use parse::{format_poly, parse_poly};
pub use poly::BivarPoly;
pub use proj::ProjPoint;
pub use resultant::{binary_resultant, shares_projective_root, RESULTANT_REL_TOL};
pub use roots::binary_form_roots;
