//! Fixtures shared by the benchmarks.

use num_rational::BigRational;

use ramroot_core::problems::{log_value_problem, mth_root_problem, named_problem, Problem};

pub fn cubic() -> Problem {
    named_problem("cubic_2_5").expect("registered")
}

pub fn cos_fixed() -> Problem {
    named_problem("cos_fixed").expect("registered")
}

pub fn cube_root_of_nine() -> Problem {
    mth_root_problem(3, &BigRational::from_integer(9.into()), 2).expect("valid parameters")
}

pub fn log_two() -> Problem {
    log_value_problem(&BigRational::from_integer(2.into())).expect("valid parameters")
}
