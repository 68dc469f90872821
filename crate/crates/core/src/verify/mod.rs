//! Desk-scale checks of the inequalities relating torsion, asymmetry and
//! magnetic eigenvalues, reported as [`BoundReport`]s.

mod checks;
mod fit;
mod report;
mod workbench;

pub use checks::{
    acceptance_sweep, check_conjecture, check_dirac_decay, check_dirac_sandwich, check_disk_decay,
    check_gauge_invariance, check_lower_bound, check_theorem1, check_theorem2, check_theorem3,
    check_torsion_chain, check_trial_exponent, fitted_display_constant, DEFAULT_FIELDS,
};
pub use fit::{fit_decay, DecayFit, MIN_FIT_POINTS};
pub use report::{BoundReport, CheckStatus, Provenance};
pub use workbench::{richardson_tolerance, Prepared, Workbench, SOLVER_SLACK};
