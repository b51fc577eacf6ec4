//! Either 8-bar behind one interface, and sampling along its motion.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::LoopProblem;

use super::mobility::{spatial_problem, spherical_problem};
use super::report::{Family, Report};
use super::spatial::{self, symmetry_report_spatial, SpatialEightBar, SpatialEightBarPose};
use super::spherical::{self, halfturn_products_report, EightBarPose, SphericalEightBar};

#[derive(Clone, Debug, PartialEq)]
pub enum EightBar {
    Spherical(SphericalEightBar),
    Spatial(SpatialEightBar),
}

#[derive(Clone, Debug, PartialEq)]
pub enum AnyPose {
    Spherical(EightBarPose),
    /// With the spherical pose of the same angular design.
    Spatial(SpatialEightBarPose, EightBarPose),
}

impl AnyPose {
    pub fn is_collapsed(&self) -> bool {
        match self {
            AnyPose::Spherical(p) => p.is_collapsed(),
            AnyPose::Spatial(p, _) => p.is_collapsed(),
        }
    }

    /// Joint coordinates: unit vectors for spherical joints, the point of
    /// each hinge nearest the origin followed by its direction for spatial
    /// hinges.
    pub fn joint_coordinates(&self) -> Vec<f64> {
        match self {
            AnyPose::Spherical(p) => p.joints.iter().flat_map(|j| j.vector().iter().copied().collect::<Vec<_>>()).collect(),
            AnyPose::Spatial(p, _) => p
                .hinges
                .iter()
                .flat_map(|l| l.point().iter().chain(l.direction().iter()).copied().collect::<Vec<_>>())
                .collect(),
        }
    }

    /// All applicable residual checks; a spatial pose also carries the
    /// half-turn report of its spherical image.
    pub fn report(&self) -> Result<Report> {
        match self {
            AnyPose::Spherical(p) => halfturn_products_report(p),
            AnyPose::Spatial(p, img) => {
                let mut r = symmetry_report_spatial(p, Some(img))?;
                r.extend(halfturn_products_report(img)?);
                Ok(r)
            }
        }
    }

    /// Residual of the aligned configuration, meaningful when collapsed.
    pub fn collapse_residual(&self) -> f64 {
        match self {
            AnyPose::Spherical(p) => spherical::collapse_residual(p),
            AnyPose::Spatial(p, img) => spatial::collapse_residual(p).max(spherical::collapse_residual(img)),
        }
    }

    pub fn loop_problem(&self) -> Result<(LoopProblem, Vec<f64>)> {
        match self {
            AnyPose::Spherical(p) => spherical_problem(p),
            AnyPose::Spatial(p, _) => spatial_problem(p),
        }
    }
}

impl EightBar {
    pub fn assemble(&self, phi1: f64) -> Result<AnyPose> {
        if !phi1.is_finite() {
            return Err(Error::InvalidArgument(format!("phi1 must be finite, got {phi1}")));
        }
        match self {
            EightBar::Spherical(lk) => Ok(AnyPose::Spherical(lk.assemble(phi1)?)),
            EightBar::Spatial(lk) => Ok(AnyPose::Spatial(lk.assemble(phi1)?, lk.image(phi1)?)),
        }
    }

    pub fn is_spatial(&self) -> bool {
        matches!(self, EightBar::Spatial(_))
    }
}

/// How samples are spread over `[from, to]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Spacing {
    /// Uniform in `tan((phi - mid) / 4)`: denser near the ends, and regular
    /// through the flip pose at `phi = pi`.
    HalfTangent,
    UniformAngle,
}

/// Sample angles, endpoints exact.
pub fn sample_angles(from: f64, to: f64, samples: usize, spacing: Spacing) -> Result<Vec<f64>> {
    if samples < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 samples, got {samples}")));
    }
    if !(from.is_finite() && to.is_finite()) {
        return Err(Error::InvalidArgument("sweep bounds must be finite".into()));
    }
    let (mid, half) = (0.5 * (from + to), 0.5 * (to - from));
    if spacing == Spacing::HalfTangent && half.abs() > std::f64::consts::PI {
        return Err(Error::InvalidArgument("half-tangent spacing needs |to - from| <= 2 pi".into()));
    }
    let last = samples - 1;
    let tmax = (half / 4.0).tan();
    Ok((0..samples)
        .map(|k| {
            let s = -1.0 + 2.0 * k as f64 / last as f64;
            match k {
                0 => from,
                k if k == last => to,
                _ => match spacing {
                    Spacing::HalfTangent => mid + 4.0 * (s * tmax).atan(),
                    Spacing::UniformAngle => mid + s * half,
                },
            }
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleStatus {
    Regular,
    Collapsed,
    Failed(String),
}

impl SampleStatus {
    pub fn label(&self) -> &str {
        match self {
            SampleStatus::Regular => "ok",
            SampleStatus::Collapsed => "collapsed",
            SampleStatus::Failed(_) => "failed",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepSample {
    pub phi1: f64,
    pub status: SampleStatus,
    /// See [`AnyPose::joint_coordinates`]; NaN when assembly failed.
    pub joints: Vec<f64>,
    /// Largest residual per [`Family::ALL`] entry; NaN where not
    /// applicable.
    pub families: [f64; 6],
}

impl SweepSample {
    pub fn max_residual(&self) -> f64 {
        self.families.iter().copied().filter(|x| !x.is_nan()).fold(0.0, f64::max)
    }
}

fn evaluate(linkage: &EightBar, phi1: f64) -> SweepSample {
    let width = if linkage.is_spatial() { 72 } else { 36 };
    let mut families = [f64::NAN; 6];
    let failed = |e: Error| SweepSample {
        phi1,
        status: SampleStatus::Failed(e.to_string()),
        joints: vec![f64::NAN; width],
        families: [f64::NAN; 6],
    };
    let pose = match linkage.assemble(phi1) {
        Ok(p) => p,
        Err(e) => return failed(e),
    };
    if pose.is_collapsed() {
        families[0] = pose.collapse_residual();
        return SweepSample { phi1, status: SampleStatus::Collapsed, joints: pose.joint_coordinates(), families };
    }
    let report = match pose.report() {
        Ok(r) => r,
        Err(e) => return failed(e),
    };
    for (k, f) in Family::ALL.iter().enumerate() {
        if let Some(x) = report.max_of(*f) {
            families[k] = x;
        }
    }
    SweepSample { phi1, status: SampleStatus::Regular, joints: pose.joint_coordinates(), families }
}

/// Poses and residuals at each angle, in input order. Per-sample failures
/// are recorded, never raised.
pub fn sweep(linkage: &EightBar, angles: &[f64]) -> Vec<SweepSample> {
    angles.par_iter().map(|&phi| evaluate(linkage, phi)).collect()
}
