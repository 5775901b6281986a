//! Exact rational approximations to ζ(2) = π²/6, built from two families of
//! hypergeometric-style rational functions, together with the prime sieves,
//! growth constants, and high-precision numeric cross-checks needed to push
//! the resulting irrationality-measure bound down to μ(ζ(2)) ≤ 5.09541178.
//!
//! Everything arithmetic is exact (`BigInt`/`BigRational`); floating point
//! appears only in the [`hp`] fixed-point tower and the modules built on it
//! ([`measure`], [`oracle`]), where every value carries a stated precision.
//!
//! Module map:
//! - [`exact`]: lcm ranges, harmonic sums, p-adic orders, primes, and the
//!   integer-valuedness certificates used by the denominator lemmas.
//! - [`factors`]: a shared factored-rational-function representation with
//!   exact evaluation, residues, and derivatives.
//! - [`tale_one`], [`tale_two`]: the two linear-form constructions
//!   q·ζ(2) − p, their partial-fraction data, and integrality certificates.
//! - [`sieve`]: floor-sum step functions φ, their step tables, and the
//!   products Φ_n of primes certified to divide q_n and the denominators.
//! - [`hp`]: fixed-point big-number reals/complexes with π, exp, log, trig,
//!   and digamma.
//! - [`measure`]: growth cubics, the constants C0/C1/C2, and the final
//!   irrationality-measure pipeline.
//! - [`oracle`]: independent numeric evaluations (contour quadrature,
//!   residue series) that must reproduce the exact forms.
//! - [`verify`]: named check suites shared by the CLI `verify-all` command
//!   and the acceptance tests.

#![forbid(unsafe_code)]

pub mod error;
pub mod exact;
pub mod factors;
pub mod hp;
pub mod measure;
pub mod oracle;
pub mod sieve;
pub mod tale_one;
pub mod tale_two;
pub mod verify;

pub use error::{Error, Result};
pub use exact::{Int, Rat};
pub use hp::{Cx, Hp};
pub use measure::{CharpolyReport, GrowthConstants, MeasureReport};
pub use oracle::{OracleValue, QuadratureSpec};
pub use sieve::{InclusionReport, SieveSpec, StepFn};
pub use tale_one::{Family, LinForm, Params, PEX, REM3};
pub use tale_two::Params2;
pub use verify::Check;
