//! Sharp constants of Young's convolution inequality on locally compact
//! groups: closed-form values, numerical lower bounds, and a verifier for the
//! subgroup-to-group inequality on a library of model groups.

pub mod catalog;
pub mod constants;
pub mod convolution;
pub mod error;
pub mod estimator;
pub mod exponents;
pub mod groups;
pub mod proof;
pub mod quotient;
pub mod report;
pub mod verify;

pub use catalog::{Catalog, ConsistencyReport, LieGroupDescriptor};
pub use error::{Error, Result};
pub use estimator::{estimate, EstimateReport, EstimatorConfig};
pub use exponents::{Exponent, YoungExponents};
pub use groups::{AffinePoint, GroupFunction, GroupModel};
pub use quotient::{build_subgroup_pair, SubgroupPair, SubgroupSpec};
pub use report::{exact_report, ExactReport, Format};
pub use verify::{run_battery, VerifyOptions, VerifyReport};
