//! Torsion function `−Δφ = 1` with zero boundary values, its maximum, and
//! the estimates built on it.

mod field;
mod level_sets;
mod series;

pub use field::{
    solve_torsion_fd, solve_torsion_fd_with, torsion_closed_form, PoissonSolver, TorsionField,
    TorsionMethod, RESIDUAL_TARGET,
};
pub use level_sets::{
    level_set_chain, level_set_profile, talenti_deficit, LevelSetEntry, LevelSetProfile,
    ALPHA_NOISE_FLOOR, DEFAULT_LEVELS, ISOPERIMETRIC_CONSTANT, TALENTI_CONSTANT,
};
pub use series::{
    g_function, odd_power_sums, rect_deficit_bound, series_identities_check, torsion_disk_max,
    torsion_rect_series, GValue, OddPowerSums, SeriesValue,
};
