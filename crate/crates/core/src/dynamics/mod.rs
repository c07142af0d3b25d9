//! Map constructors, the orbit engine, orbit classification, basin grids,
//! and the invariant-circle sensitivity probe.

mod basin;
mod map;
mod orbit;
mod probe;

pub use basin::{
    classify_grid, classify_grid_checked, BasinGrid, CellKind, CellOutcome, GridParams, SliceSpec,
};
pub use map::{siegel_factor_step, CPoint, MapFamily, PlanarMap};
pub use orbit::{
    classify_orbit, iterate, target_residual, Orbit, OrbitVerdict, VerdictKind, CONV_WINDOW,
    ESCAPE_RADIUS,
};
pub use probe::{julia_probe_siegel_circle, JuliaProbeReport, SENSITIVITY_SEP};
