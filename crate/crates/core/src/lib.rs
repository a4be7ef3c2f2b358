//! Verification engine for pseudo-Riemannian geometry on multiply warped
//! products with a semi-symmetric metric connection.
//!
//! Layering, bottom up: [`jets`] (order-2 forward differentiation),
//! [`fieldexpr`] (expression language), [`metric`] (block metrics and the
//! product structure), [`connection`], [`lie`], [`curvature`], then the
//! [`manifest`] format and the [`suite`] of numbered checks.

// Tensor code indexes several arrays by the same coordinate.
#![allow(clippy::needless_range_loop)]

pub mod connection;
pub mod coordinate;
pub mod curvature;
pub mod fieldexpr;
pub mod jets;
pub mod killing;
pub mod lie;
pub mod manifest;
pub mod metric;
pub mod report;
pub mod sampling;
pub mod spacetime;
pub mod suite;

pub use connection::{ConnectionAt, ConnectionKind, TorsionLocation, TorsionSpec};
pub use curvature::CurvatureAt;
pub use fieldexpr::{FieldExpr, VectorFieldDef};
pub use jets::{Jet2, Point};
pub use killing::{killing_residual, KillingKind, KillingResidual};
pub use manifest::{Manifest, ManifestError};
pub use metric::{BlockMetric, LocalGeometry, MetricAt, ProductStructure};
pub use report::{Expectation, Judge, Report, ResidualReport, Verdict};
pub use sampling::{SplitMix64, Tolerances};
pub use spacetime::{build_spacetime, SpacetimeKind, SpacetimeSpec};

/// Crate version reported in machine-readable output.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
