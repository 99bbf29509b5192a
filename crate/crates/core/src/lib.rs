//! Ampleness of general line bundles on general `k`-gonal curves.
//!
//! Given a genus `g` and a splitting type `e = (e_1 <= ... <= e_k)` of the
//! pushforward of a line bundle along a degree-`k` cover of the projective
//! line, this crate decides whether a general member of the corresponding
//! splitting locus is basepoint free, (birationally) relatively `p`-very
//! ample, or very ample, and counts the dependent fibral divisors that
//! obstruct relative `p`-very ampleness.
//!
//! All arithmetic is exact ([`num_bigint::BigInt`]). The verdicts describe the
//! general member of the dominating component and do not depend on the
//! characteristic of the ground field.

pub mod classify;
pub mod cli;
pub mod count;
pub mod enumerate;
pub mod error;
pub mod splitting;

pub use classify::{CaseLabel, Decision};
pub use count::{ClosedForm, CountReport, EdgeCase, FormulaMutation};
pub use enumerate::{Execution, SweepDomain, TableRow, ViolationReport};
pub use error::{HbnError, Result};
pub use splitting::{AmpleDegree, BNDatum, SplittingType};
