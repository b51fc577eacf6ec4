//! The 8-bar linkages: topology, specs, assembly, verification and motion.

pub mod mobility;
pub mod report;
pub mod spec;
pub mod spatial;
pub mod spherical;
pub mod sweep;
pub mod topology;

pub use report::{Check, Family, Report};
pub use spec::{validate_spatial_spec, validate_spec, Design, EightBarSpec, SpatialDesign, SpatialEightBarSpec};
pub use spherical::{assemble_spherical, collapse_residual as spherical_collapse_residual, halfturn_products_report, EightBarPose, SphericalEightBar, SphericalSymmetry};
pub use topology::{Bar, JointId, CELLS, JOINTS};
pub use spatial::{assemble_spatial, collapse_residual as spatial_collapse_residual, symmetry_report_spatial, SpatialEightBar, SpatialEightBarPose, SpatialSymmetry};
pub use mobility::{mobility, oracle_agreement, spatial_problem, spherical_problem, MobilitySample};
pub use sweep::{sample_angles, sweep, AnyPose, EightBar, SampleStatus, Spacing, SweepSample};
