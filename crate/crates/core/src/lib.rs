//! Link-level simulation and union-bound analysis of the two-user
//! power-domain NOMA uplink.
//!
//! Two single-antenna users share one time/frequency resource toward a
//! base station with two receive antennas. User 1 transmits with a fraction
//! `alpha` of the total power and user 2 with `1 - alpha`; `alpha = 1/2` is
//! the power-balanced (MU-MIMO) case.
//!
//! The crate is organized bottom-up:
//!
//! - [`constellation`]: Gray-mapped QPSK / 16QAM with unit bit energy.
//! - [`channel`]: power scaling, Rayleigh channel draws and complex AWGN.
//! - [`detect`]: joint ML detection over all `M^2` codewords and a `2M`-metric SIC baseline.
//! - [`bounds`]: pairwise error probability bound, error-event enumeration and the union bound.
//! - [`sim`]: deterministic parallel Monte Carlo BER estimation and SNR-degradation readout.
//! - [`cli`]: CSV emitters/parsers backing the `pdnoma` binary.
//!
//! ```
//! use pdnoma::bounds::union_bound_abep;
//! use pdnoma::constellation::{Constellation, ConstellationKind};
//!
//! let qpsk = Constellation::new(ConstellationKind::Qpsk);
//! let balanced = union_bound_abep(&qpsk, 0.5, 0.01).unwrap();
//! let skewed = union_bound_abep(&qpsk, 0.9, 0.01).unwrap();
//! assert!(balanced.bound < skewed.bound);
//! ```

pub mod bounds;
pub mod channel;
pub mod cli;
pub mod constellation;
pub mod detect;
mod error;
pub mod rng;
pub mod sim;
mod sum;

pub use error::{Error, Result};
pub use sum::CompensatedSum;
