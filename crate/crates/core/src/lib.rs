//! Exact solver for quadratic Diophantine equations
//!
//! ```text
//! a·u² + b·u·v + c·v² + d·u + e·v + f = 0
//! ```
//!
//! of LA2 type, i.e. those that an integer change of variables turns into a
//! Pell-type equation `ũ² − τ·ṽ² = j`. For `j = 1` the crate enumerates
//! every solution and counts the solutions inside the rotated square
//! `|u| + |v| ≤ x` in closed form, with a brute-force oracle to check it.
//!
//! Everything is generic over the integer type (see [`Int`]); the `Big*`
//! aliases fix it to [`BigInt`].
//!
//! ```
//! use la2_core::{BigAnalysis, BigEquation, BigInt};
//!
//! let eq = BigEquation::from_i64([1, 0, -2, -6, 8, 0]).unwrap();
//! let analysis = BigAnalysis::new(&eq).unwrap();
//! assert_eq!(analysis.bound(), &BigInt::from(34));
//! assert_eq!(analysis.count(&BigInt::from(174)).unwrap(), 14);
//! ```

pub mod counting;
pub mod equation;
pub mod error;
pub mod oracle;
pub mod pell;
pub mod quad_ring;
pub mod scalar;

pub use num_bigint::BigInt;

pub use counting::{
    branch_parameters, compute_n0, compute_nl, compute_thresholds, count_branch, count_solutions,
    enumerate_solutions, scan_branch_count, Analysis, BranchParameters, BranchSolution,
    SolutionSet, Thresholds,
};
pub use equation::{
    branch_solution, class0_solutions, classify, derive, make_z1_equation, reduce,
    ClassificationReport, Condition, DerivedQuantities, Equation, ReducedForm, Verdict,
};
pub use error::{Error, Result};
pub use oracle::{
    brute_force_solutions, brute_force_with_mode, verify, OracleReport, ScanMode, VerifyOutcome,
    VerifyReport, DEFAULT_ORACLE_CAP,
};
pub use pell::{
    cf_expand_sqrt, fundamental_solution, pell_sequence, Branch, ContinuedFraction, PellCache,
    PellClass, PellFundamental, PellPoint, TrivialSign,
};
pub use quad_ring::{QuadInt, QuadRing};
pub use scalar::Int;

pub type BigQuadInt = QuadInt<BigInt>;
pub type BigQuadRing = QuadRing<BigInt>;
pub type BigEquation = Equation<BigInt>;
pub type BigReducedForm = ReducedForm<BigInt>;
pub type BigPellFundamental = PellFundamental<BigInt>;
pub type BigAnalysis = Analysis<BigInt>;
pub type BigSolutionSet = SolutionSet<BigInt>;
