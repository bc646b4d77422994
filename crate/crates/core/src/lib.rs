//! Repairable threshold secret sharing over prime fields.
//!
//! * [`field`]: arithmetic in `F_Q`.
//! * [`ramp`]: `(k1, k2, n)` ramp and Shamir schemes.
//! * [`enrollment`]: dealer-free share repair by `k2` helpers.
//! * [`designs`]: distribution designs and their exhaustive checks.
//! * [`rts`]: expanded schemes where shares are bundles of subshares and
//!   repair is a matter of forwarding them.
//! * [`audit`]: exact secrecy audits, communication accounting and the
//!   regenerating-code rate bound used for comparison.

pub mod audit;
pub mod designs;
pub mod enrollment;
pub mod error;
pub mod field;
pub mod ramp;
pub mod rng;
pub mod rts;
pub mod transcript;

pub use error::{Error, Result};
pub use field::{FieldElement, PrimeField};
pub use ramp::{RampParams, Secret, Share};
pub use rng::{ElementSource, FixedSource, SeededRng};
pub use transcript::{Phase, Transcript};
