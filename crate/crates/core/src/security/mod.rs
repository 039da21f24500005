//! Eve's view of the ciphertext, tail bounds, key lengths and Monte-Carlo
//! checks of the concentration claims.

mod bounds;
mod empirical;
mod prior;
mod states;

pub use bounds::{
    chernoff_p1, chernoff_threshold, comparison_rows, failure_bound, fig2_row, key_length_bits,
    key_threshold, maurer_p2, maurer_threshold, Branch, Comparison, Fig2Row, KeyLength,
    KeyThreshold, SecurityParams, TailBound, MAX_BOUND_QUBITS, P_MAX_TOL,
};
pub use empirical::{
    chernoff_trial, draw_circuits, empirical_chernoff, empirical_maurer, locking_probe,
    maurer_trial, mixture_defect, ChernoffReport, ChernoffTrial, LockingReport, MaurerReport,
};
pub use prior::{min_entropy, PriorDistribution, PRIOR_SUM_TOL};
pub use states::{
    conditional_state, conditional_states, eve_state, holevo, measured_mi, Measurement, POVM_TOL,
};
