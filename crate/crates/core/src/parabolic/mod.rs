//! Characteristic directions of germs tangent to the identity, local normal
//! forms at regular points of the invariant curve, and attracting-sector
//! experiments.

mod chart;
mod germ;
mod petal;

pub use chart::{
    domination_stats, local_normal_form, normal_form_uncalibrated, LocalChart, NormalForm,
    DOMINATION_FACTOR, EPS_HALVINGS, EPS_START,
};
pub use germ::{
    char_directions, condition_check, germ_at, CharDirection, CharDirections, GermData,
    DEGENERATE_REL_TOL, ON_CURVE_TOL, SINGULAR_REL_TOL,
};
pub use petal::{
    inverse_duality_check, petal_convergence_test, petal_exit_test, ExitReport, PetalReport,
    PetalSpec, SeedRun, RATE_FIT_TOL,
};
