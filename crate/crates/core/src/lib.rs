//! Exact solver for linear difference equations through the discrete
//! Laplace transform `ℓ{f}(s) = Σ_{n≥1} e^{-sn} f(n)`.
//!
//! Sequences ([`SeqExpr`]) map to images ([`SExpr`]) built from rational
//! functions of `x = e^s` and the two transcendental generators
//! `L = ℓ{1/n}` and `D = ℓ{1/n²}`. An initial value problem
//! ([`DifferenceEquation`]) is transformed, solved for its image, inverted
//! and then checked by the [`oracle`].
//!
//! ```
//! use delta_laplace::{solve_ivp, Coefficient, DifferenceEquation, InitialCondition, SeqExpr};
//! use delta_laplace::rational::int;
//!
//! let eq = DifferenceEquation::new(
//!     Coefficient::One,
//!     1,
//!     SeqExpr::n(),
//!     vec![InitialCondition::value(1, int(1))],
//! )
//! .unwrap();
//! let report = solve_ivp(&eq).unwrap();
//! assert_eq!(report.solution.to_text(), "1 + (n^2 - n)/2");
//! assert!(report.verification.passed);
//! ```

pub mod error;
pub mod exec;
mod linalg;
pub mod oracle;
pub mod poly;
pub mod ratfunc;
pub mod rational;
pub mod seq;
pub mod sexpr;
pub mod solver;
pub mod transform;

pub use error::{Error, Result};
pub use exec::Exec;
pub use oracle::{verify, verify_with, VerificationResult, VerifyOptions};
pub use ratfunc::RatFunc;
pub use rational::Rat;
pub use seq::{convolve, forward_difference, linear_combine, RecipPow, SeqExpr};
pub use sexpr::{Monomial, SExpr, SExprWithConstant};
pub use solver::{
    solve_ivp, solve_ivp_with, Coefficient, DifferenceEquation, IcKind, InitialCondition, Method,
    SolveReport,
};
pub use transform::{inverse_transform, transform, transform_difference, TransformPair};
