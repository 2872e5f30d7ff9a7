//! Zeros of the period polynomial: location, sign changes of the associated
//! trigonometric polynomial, sufficient criteria, and predicted angles.

pub mod angles;
pub mod criteria;
pub mod roots;
pub mod trig;

pub use angles::{angles_for, match_roots_to_angles, predict_angles, root_angle, weight4_angles, AngleMatch};
pub use criteria::{
    central_inequalities, evaluate_criteria, large_weight_criterion, least_level_for,
    least_level_table, szego_criteria, CriteriaReport, Criterion, SzegoReport,
};
pub use roots::{certify_circle, find_polynomial_roots, find_roots, CircleReport, RootSet};
pub use trig::{count_sign_changes, trig_polynomial, SignChangeReport, TrigPolynomial};
