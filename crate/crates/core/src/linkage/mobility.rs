//! Loop-closure systems of an assembled 8-bar, handed to the oracle.
//!
//! Unknowns are the twelve joint angles `psi_ij`, each the signed angle
//! from `g_i` to `h_j` about the hinge `R_ij`. Every cube face gives one
//! loop; the six loops are dependent (five are independent) but stacking all
//! of them keeps the system symmetric.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::{jacobian_nullity, solve_loop, Loop, LoopProblem, Step};
use crate::screw_geom::{signed_dual_angle, OrientedLine, Point};
use crate::tol;

use super::spatial::SpatialEightBarPose;
use super::spherical::EightBarPose;
use super::topology::{JointId, CELLS, JOINTS};

/// Bars `[g0..g3, h0..h3]` and hinges as lines; spherical poses use lines
/// through the origin.
fn lines_of_spherical(pose: &EightBarPose) -> ([OrientedLine; 8], [OrientedLine; 12]) {
    let o = Point::zeros();
    let line = |v| OrientedLine::through(&o, &v).expect("unit vector");
    let bars = std::array::from_fn(|k| if k < 4 { line(pose.g[k].normal()) } else { line(pose.h[k - 4].normal()) });
    (bars, pose.joints.map(|p| line(p.vector())))
}

fn bar_index(id: JointId, g_side: bool) -> usize {
    if g_side {
        id.g as usize
    } else {
        4 + id.h as usize
    }
}

/// Closure system of the cube linkgraph with the current angles as the
/// initial guess and `psi_01` as the driving joint.
fn cube_problem(bars: &[OrientedLine; 8], hinges: &[OrientedLine; 12], spatial: bool) -> Result<(LoopProblem, Vec<f64>)> {
    let psi: Vec<f64> = JOINTS
        .iter()
        .map(|&id| signed_dual_angle(&bars[bar_index(id, true)], &bars[bar_index(id, false)], &hinges[id.index()]).re)
        .collect();
    let mut loops = Vec::with_capacity(6);
    for cell in &CELLS {
        let mut steps = Vec::with_capacity(4);
        for k in 0..4 {
            let (prev, v, next) = (cell[(k + 3) % 4], cell[k], cell[(k + 1) % 4]);
            // the side to `next` runs along g when both share g_i
            let out_g = v.g == next.g;
            let in_bar = &bars[bar_index(v, v.g == prev.g)];
            let out_bar = &bars[bar_index(v, out_g)];
            let hinge = &hinges[v.index()];
            let turn = signed_dual_angle(in_bar, out_bar, hinge);
            let side = signed_dual_angle(hinge, &hinges[next.index()], out_bar);
            steps.push(Step {
                joint: v.index(),
                sign: if out_g { -1.0 } else { 1.0 },
                joint_offset: turn.du,
                twist: side.re,
                offset: if spatial { side.du } else { 0.0 },
            });
        }
        loops.push(Loop { steps });
    }
    let p = LoopProblem { loops, spatial, driving: Some((0, psi[0])), initial: psi.clone() };
    let res = p.residual(&psi).norm();
    if res > tol::CLOSURE {
        return Err(Error::closure("cube loop system", res));
    }
    Ok((p, psi))
}

pub fn spherical_problem(pose: &EightBarPose) -> Result<(LoopProblem, Vec<f64>)> {
    let (bars, hinges) = lines_of_spherical(pose);
    cube_problem(&bars, &hinges, false)
}

pub fn spatial_problem(pose: &SpatialEightBarPose) -> Result<(LoopProblem, Vec<f64>)> {
    let bars = std::array::from_fn(|k| if k < 4 { pose.g[k] } else { pose.h[k - 4] });
    cube_problem(&bars, &pose.hinges, true)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MobilitySample {
    pub phi1: f64,
    pub nullity: usize,
    /// Closure residual of the system at the assembled angles.
    pub residual: f64,
}

pub fn mobility(problem: &LoopProblem, angles: &[f64]) -> MobilitySample {
    MobilitySample {
        phi1: angles[0],
        nullity: jacobian_nullity(problem, angles),
        residual: problem.residual(angles).norm(),
    }
}

/// Largest joint-angle disagreement between the assembled pose and an
/// oracle solve seeded `perturbation` away from it with `psi_01` held.
pub fn oracle_agreement(problem: &LoopProblem, angles: &[f64], perturbation: f64) -> Result<f64> {
    let mut p = problem.clone();
    for (k, x) in p.initial.iter_mut().enumerate().skip(1) {
        *x += if k % 2 == 0 { perturbation } else { -perturbation };
    }
    let sol = solve_loop(&p).map_err(|e| Error::closure("oracle solve", e.last.residual))?;
    Ok(angles.iter().zip(&sol.angles).map(|(a, b)| angle_diff(*a, *b)).fold(0.0, f64::max))
}

pub(crate) fn angle_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(std::f64::consts::TAU);
    d.min(std::f64::consts::TAU - d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linkage::{spatial, spherical};

    #[test]
    fn spherical_eight_bar_has_one_dof() {
        let lk = spherical::tests::sample();
        for phi in [0.4, 1.3, 2.5, -2.0] {
            let (p, a) = spherical_problem(&lk.assemble(phi).unwrap()).unwrap();
            assert_eq!(mobility(&p, &a).nullity, 1, "phi {phi}");
            assert!((a[0] - phi).abs() < 1e-12);
        }
    }

    #[test]
    fn spatial_eight_bar_has_one_dof() {
        let lk = spatial::tests::sample();
        for phi in [0.4, 1.3, 2.5, -2.0] {
            let (p, a) = spatial_problem(&lk.assemble(phi).unwrap()).unwrap();
            assert_eq!(mobility(&p, &a).nullity, 1, "phi {phi}");
        }
    }

    #[test]
    fn oracle_recovers_assembled_angles() {
        let lk = spatial::tests::sample();
        let (p, a) = spatial_problem(&lk.assemble(0.9).unwrap()).unwrap();
        assert!(oracle_agreement(&p, &a, 0.03).unwrap() < 1e-8);
    }
}
