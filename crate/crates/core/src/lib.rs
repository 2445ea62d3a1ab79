//! Exact verification engine for fermionic sums attached to tensor products
//! of Kirillov-Reshetikhin modules.
//!
//! * [`liealg`]: Cartan data, the interaction matrix `B`, Weyl dimensions.
//! * [`symbolic`]: exact polynomial and rational-function arithmetic.
//! * [`fermionic`]: the restricted M-sum, unrestricted N-sum and their comparison.
//! * [`qsystem`]: symbolic Q-system iteration with exact-division certificates.
//! * [`genfun`]: the generating function `Z`, its closed form and constant-term checks.
//! * [`charoracle`]: independent character-theoretic multiplicities.
//! * [`sweep`]: exhaustive and seeded-random families of inputs.
//!
//! Every computation is exact; there is no floating point anywhere in the crate.

pub mod charoracle;
pub mod error;
pub mod fermionic;
pub mod genfun;
pub mod liealg;
pub mod par;
pub mod qsystem;
pub mod sweep;
pub mod symbolic;

pub use error::{Error, Result};
