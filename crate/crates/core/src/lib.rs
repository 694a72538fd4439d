//! Global passivity enforcement for linear time-invariant state-space models.
//!
//! Given a stable but non-passive model `H(s)`, the crate builds a passive
//! model `G(s)` whose Hermitian part approximates the pointwise nearest
//! positive-semidefinite projection of `H(iω) + H(iω)ᴴ` uniformly over all
//! frequencies. The approximation is obtained by applying a real-rational
//! over-approximation of the ramp `max(x, 0)` to the para-Hermitian system
//! `Z(s) = H(s) + H(−s)ᵀ` and keeping the stable half of the result.
//!
//! ```
//! use passify_core::{benchmarks, dissipation, passify};
//!
//! let h = benchmarks::toy();
//! let report = dissipation::classify(&h, None).unwrap();
//! assert!((report.delta_minus + 2.0).abs() < 1e-8);
//!
//! let out = passify::passify_partfrac(&h, 3, &passify::PassifyOptions::default()).unwrap();
//! assert!(out.achieved_delta_minus >= -1e-8);
//! ```

pub mod benchmarks;
pub mod dissipation;
pub mod error;
pub mod grid;
pub mod matkit;
pub mod nearness;
pub mod passify;
pub mod project;
pub mod ramp;
pub mod ss;

pub use error::{Error, Result};
pub use matkit::{ComplexMatrix, RealMatrix};
pub use ss::{ParaHermitianRealization, Realization};

/// The guide under `book/`, compiled so its snippets run as doctests.
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/models.md")]
    pub mod models {}
    #[doc = include_str!("../../../book/src/dissipation.md")]
    pub mod dissipation {}
    #[doc = include_str!("../../../book/src/ramp.md")]
    pub mod ramp {}
    #[doc = include_str!("../../../book/src/nearness.md")]
    pub mod nearness {}
    #[doc = include_str!("../../../book/src/splitting.md")]
    pub mod splitting {}
    #[doc = include_str!("../../../book/src/passivation.md")]
    pub mod passivation {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
