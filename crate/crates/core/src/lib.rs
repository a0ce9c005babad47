//! Generalized Ramanujan root approximation.
//!
//! The crate computes the factorial-scaled T-sequence of a function at a
//! point from its Taylor jet, forms the order-`n` approximant
//! `z + n f(z) T_{n-1}(z) / T_n(z)` of a simple root, and iterates it as a
//! method of order `n + 1` (Newton at `n = 1`, Halley at `n = 2`). Every
//! algorithm is generic over [`Scalar`], so the same code runs in binary64
//! and in exact rational arithmetic.
//!
//! ```
//! use ramroot_core::{approximant_step, Polynomial, Rational, make_rational};
//!
//! // z^2 - 2 about z = 1: the order-3 approximant of sqrt(2) is 17/12
//! let f = Polynomial::from_ints(&[-2, 0, 1]);
//! let z = approximant_step(&f, &Rational::from(1), 3).unwrap();
//! assert_eq!(z, make_rational(17, 12).unwrap());
//! ```

pub mod error;
pub mod jet;
pub mod oracle;
pub mod problems;
pub mod ramanujan;
pub mod reference;
pub mod reproduce;
pub mod scalar;
pub mod series;

pub use error::{Error, Result};
pub use jet::{elementary_jet, jet_mul, jet_reciprocal, ElementaryKind, Jet};
pub use oracle::{oracle_from_expression, DerivativeOracle, Expr, FnOracle, Polynomial};
pub use problems::{log_problem, log_value_problem, mth_root_problem, named_problem, Problem};
pub use ramanujan::{
    approximant_step, convergence_indicator, convergent_table, empirical_order, iterate, p_sequence_unscaled,
    reference_halley_step, reference_newton_step, step_error_slope, t_sequence, IterationRecord, IterationTrace,
    SolverConfig, TSequence, TerminationReason,
};
pub use scalar::{make_rational, matching_digits, to_decimal, Rational, Scalar, ScalarMode};
pub use series::{oscillation_diagnostic, p_sequence, root_convergents, OscillationDiagnostic, PowerSeriesEquation};
