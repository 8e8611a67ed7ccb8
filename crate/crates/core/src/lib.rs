//! Artificial protozoa optimizer (APO) and its experiment toolkit.
//!
//! - [`apo`]: the optimizer, its schedules and its four update operators
//! - [`bench`]: unconstrained test functions with an optional shift/rotation
//! - [`constraints`]: penalty handling and the engineering design problems
//! - [`segmentation`]: minimum cross-entropy multilevel thresholding, PSNR, SSIM
//! - [`metrics`]: diversity, stability, Friedman ranks, Wilcoxon signed-rank
//! - [`baseline`]: uniform random search
//! - [`experiment`]: the runners behind the `apo` binary

pub mod apo;
pub mod baseline;
pub mod bench;
pub mod constraints;
pub mod error;
pub mod experiment;
pub mod metrics;
pub mod segmentation;
pub mod rng;
pub mod space;

pub use apo::{optimize, ApoParams, ApoResult};
pub use error::{Error, Result};
pub use rng::RngStream;
pub use space::{Bounds, Candidate, ObjectiveFn, Population};
