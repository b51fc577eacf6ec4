//! Brute-force loop closure, used as ground truth for the analytic solvers.
//!
//! A loop is a cyclic chain of hinges joined by bars. Each step turns about
//! the current hinge (frame z axis) from the incoming bar to the outgoing bar,
//! slides along the hinge, then screws about the outgoing bar (frame x axis)
//! onto the next hinge:
//!
//! `Rz(sign * psi) Tz(joint_offset) Rx(twist) Tx(offset)`
//!
//! The loop is closed when the ordered product is the identity. Nothing in
//! here knows about isograms or transmission laws; the only inputs are side
//! data and the closure condition.

use nalgebra::{DMatrix, DVector, Matrix4};

use crate::tol;

/// One hinge and the bar that leaves it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Step {
    /// Index into the joint-angle vector.
    pub joint: usize,
    /// +1 or -1: whether the step turns by `psi` or by `-psi`.
    pub sign: f64,
    pub joint_offset: f64,
    pub twist: f64,
    pub offset: f64,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Loop {
    pub steps: Vec<Step>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LoopProblem {
    pub loops: Vec<Loop>,
    /// When false only the rotation part of each loop product is constrained.
    pub spatial: bool,
    /// Joint held fixed during [`solve_loop`], with its value.
    pub driving: Option<(usize, f64)>,
    /// Initial guess for every joint angle (the driving entry is overwritten).
    pub initial: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LoopSolution {
    pub angles: Vec<f64>,
    /// Euclidean norm of the closure residual vector.
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Newton did not reach the tolerance; carries the last iterate.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[error("loop closure did not converge (residual {:.3e} after {} iterations)", .last.residual, .last.iterations)]
pub struct NoConvergence {
    pub last: LoopSolution,
}

pub const CONVERGED: f64 = 1e-11;
pub const MAX_ITERATIONS: usize = 100;
pub const MAX_HALVINGS: usize = 30;
pub const FD_STEP: f64 = 1e-6;
pub const NULLITY_RATIO: f64 = 1e-7;

#[rustfmt::skip]
fn step_matrix(theta: f64, e: f64, twist: f64, o: f64) -> Matrix4<f64> {
    let (st, ct) = theta.sin_cos();
    let (sa, ca) = twist.sin_cos();
    Matrix4::new(
        ct, -st * ca, st * sa, o * ct,
        st, ct * ca, -ct * sa, o * st,
        0.0, sa, ca, e,
        0.0, 0.0, 0.0, 1.0,
    )
}

impl LoopProblem {
    pub fn joint_count(&self) -> usize {
        self.initial.len()
    }

    pub fn loop_product(&self, l: &Loop, angles: &[f64]) -> Matrix4<f64> {
        l.steps.iter().fold(Matrix4::identity(), |acc, s| {
            acc * step_matrix(s.sign * angles[s.joint], s.joint_offset, s.twist, s.offset)
        })
    }

    /// Stacked entries of `T - I` over all loops: the 3x3 rotation block, plus
    /// the translation column for spatial problems.
    pub fn residual(&self, angles: &[f64]) -> DVector<f64> {
        let cols = if self.spatial { 4 } else { 3 };
        let mut out = Vec::with_capacity(self.loops.len() * 3 * cols);
        for l in &self.loops {
            let t = self.loop_product(l, angles) - Matrix4::identity();
            for i in 0..3 {
                for j in 0..cols {
                    out.push(t[(i, j)]);
                }
            }
        }
        DVector::from_vec(out)
    }

    /// Central-difference Jacobian with respect to the listed joints.
    pub fn jacobian(&self, angles: &[f64], joints: &[usize]) -> DMatrix<f64> {
        let m = self.residual(angles).len();
        let mut jac = DMatrix::zeros(m, joints.len());
        let mut x = angles.to_vec();
        for (c, &j) in joints.iter().enumerate() {
            let x0 = x[j];
            x[j] = x0 + FD_STEP;
            let rp = self.residual(&x);
            x[j] = x0 - FD_STEP;
            let rm = self.residual(&x);
            x[j] = x0;
            jac.set_column(c, &((rp - rm) / (2.0 * FD_STEP)));
        }
        jac
    }

    /// Structural sanity: every loop has at least three hinges (each step is
    /// one hinge plus one bar) and references existing joints.
    pub fn check(&self) -> Result<(), String> {
        for (k, l) in self.loops.iter().enumerate() {
            if l.steps.len() < 3 {
                return Err(format!("loop {k} has fewer than three hinges"));
            }
            if let Some(s) = l.steps.iter().find(|s| s.joint >= self.joint_count()) {
                return Err(format!("loop {k} references joint {} of {}", s.joint, self.joint_count()));
            }
        }
        Ok(())
    }
}

/// Damped Gauss-Newton on the closure residual, the driving joint held fixed.
pub fn solve_loop(problem: &LoopProblem) -> Result<LoopSolution, NoConvergence> {
    let mut x = problem.initial.clone();
    let free: Vec<usize> = match problem.driving {
        Some((j, v)) => {
            x[j] = v;
            (0..x.len()).filter(|&k| k != j).collect()
        }
        None => (0..x.len()).collect(),
    };
    let mut r = problem.residual(&x).norm();
    let mut it = 0;
    while r >= CONVERGED && it < MAX_ITERATIONS {
        it += 1;
        let jac = problem.jacobian(&x, &free);
        let rv = problem.residual(&x);
        let Ok(dx) = jac.svd(true, true).solve(&(-rv), 1e-14) else { break };
        let mut lambda = 1.0;
        let mut improved = false;
        for _ in 0..=MAX_HALVINGS {
            let mut trial = x.clone();
            for (c, &j) in free.iter().enumerate() {
                trial[j] += lambda * dx[c];
            }
            let rt = problem.residual(&trial).norm();
            if rt < r {
                x = trial;
                r = rt;
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if !improved {
            break;
        }
    }
    let sol = LoopSolution { angles: x, residual: r, iterations: it, converged: r < CONVERGED };
    if sol.converged {
        Ok(sol)
    } else {
        Err(NoConvergence { last: sol })
    }
}

/// Singular values of the closure Jacobian over all joints, largest first.
pub fn singular_values(problem: &LoopProblem, angles: &[f64]) -> Vec<f64> {
    let all: Vec<usize> = (0..angles.len()).collect();
    let mut sv: Vec<f64> = problem.jacobian(angles, &all).singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Number of independent infinitesimal motions at a closed configuration.
///
/// Counts singular values below `NULLITY_RATIO * sigma_max`, plus the columns
/// in excess of the rows.
pub fn jacobian_nullity(problem: &LoopProblem, angles: &[f64]) -> usize {
    let n = angles.len();
    let sv = singular_values(problem, angles);
    let smax = sv.first().copied().unwrap_or(0.0);
    let rank = sv.iter().filter(|&&s| s > NULLITY_RATIO * smax).count();
    n - rank
}

/// Spherical isogram A, B, C, D with basis/coupler arc `alpha` and arm arc
/// `beta`. Joint angles are measured from the aligned pose: joints 0 and 1
/// are the arm angles at A and B.
pub fn spherical_isogram_problem(alpha: f64, beta: f64, phi1: f64, guess: [f64; 4]) -> LoopProblem {
    isogram_problem(alpha, beta, 0.0, 0.0, false, phi1, guess)
}

/// Bennett isogram with twists `alpha`, `beta` and offsets `a`, `b`.
pub fn bennett_isogram_problem(alpha: f64, beta: f64, a: f64, b: f64, phi1: f64, guess: [f64; 4]) -> LoopProblem {
    isogram_problem(alpha, beta, a, b, true, phi1, guess)
}

fn isogram_problem(alpha: f64, beta: f64, a: f64, b: f64, spatial: bool, phi1: f64, guess: [f64; 4]) -> LoopProblem {
    let st = |joint, sign, twist, offset| Step { joint, sign, joint_offset: 0.0, twist, offset };
    LoopProblem {
        loops: vec![Loop {
            steps: vec![
                st(0, -1.0, alpha, a),
                st(1, 1.0, -beta, -b),
                st(2, -1.0, -alpha, -a),
                st(3, 1.0, beta, b),
            ],
        }],
        spatial,
        driving: Some((0, phi1)),
        initial: guess.to_vec(),
    }
}

/// A closed spatial 4R whose hinges are four generic lines. Bars are the
/// common perpendiculars of consecutive hinges, so the chain closes at the
/// returned angles; with generic lines it cannot move.
pub fn generic_4r_problem(hinges: &[(nalgebra::Vector3<f64>, nalgebra::Vector3<f64>); 4]) -> Option<(LoopProblem, Vec<f64>)> {
    use crate::screw_geom::{common_perpendicular, signed_dual_angle, OrientedLine};
    let lines: Vec<OrientedLine> = hinges.iter().map(|(p, d)| OrientedLine::through(p, d).ok()).collect::<Option<_>>()?;
    let bars: Vec<OrientedLine> = (0..4)
        .map(|k| common_perpendicular(&lines[k], &lines[(k + 1) % 4]).ok().map(|cp| cp.axis))
        .collect::<Option<_>>()?;
    let mut steps = Vec::new();
    let mut angles = Vec::new();
    for k in 0..4 {
        let incoming = &bars[(k + 3) % 4];
        let joint = signed_dual_angle(incoming, &bars[k], &lines[k]);
        let side = signed_dual_angle(&lines[k], &lines[(k + 1) % 4], &bars[k]);
        angles.push(joint.re);
        steps.push(Step { joint: k, sign: 1.0, joint_offset: joint.du, twist: side.re, offset: side.du });
    }
    let p = LoopProblem { loops: vec![Loop { steps }], spatial: true, driving: Some((0, angles[0])), initial: angles.clone() };
    (p.residual(&angles).norm() < tol::CLOSURE).then_some((p, angles))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Vector3;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4};

    #[test]
    fn aligned_seed_stays_aligned() {
        let p = spherical_isogram_problem(FRAC_PI_3, FRAC_PI_4, 0.0, [0.0; 4]);
        let s = solve_loop(&p).unwrap();
        assert!(s.angles.iter().all(|a| a.abs() < 1e-12));
        assert_eq!(s.iterations, 0);
    }

    #[test]
    fn converges_from_perturbed_seed() {
        // seed near a closed pose found by a coarse scan, then refine
        let p = spherical_isogram_problem(1.0, 0.6, 0.9, [0.9, 0.3, 0.3, 0.9]);
        let s = solve_loop(&p).unwrap();
        assert!(s.residual < CONVERGED);
        assert_eq!(s.angles[0], 0.9);
        // isogram symmetry: opposite joint angles agree
        assert!((s.angles[0] - s.angles[2]).abs() < 1e-9);
        assert!((s.angles[1] - s.angles[3]).abs() < 1e-9);
    }

    #[test]
    fn infeasible_loop_detected() {
        // a triangle of arcs 0.2, 0.2, 2.5 violates the triangle inequality
        let st = |joint, twist| Step { joint, sign: 1.0, joint_offset: 0.0, twist, offset: 0.0 };
        let p = LoopProblem {
            loops: vec![Loop { steps: vec![st(0, 0.2), st(1, 0.2), st(2, 2.5)] }],
            spatial: false,
            driving: None,
            initial: vec![0.5, 0.5, 0.5],
        };
        let e = solve_loop(&p).unwrap_err();
        assert!(!e.last.converged && e.last.residual > 1e-3);
    }

    #[test]
    fn generic_4r_is_rigid() {
        let h = [
            (Vector3::new(0.0, 0.0, 0.0), Vector3::new(0.0, 0.0, 1.0)),
            (Vector3::new(1.0, 0.2, 0.0), Vector3::new(0.3, 1.0, 0.2)),
            (Vector3::new(0.8, 1.1, 0.5), Vector3::new(1.0, -0.4, 0.6)),
            (Vector3::new(-0.3, 0.9, 0.7), Vector3::new(-0.2, 0.5, 1.0)),
        ];
        let (p, angles) = generic_4r_problem(&h).unwrap();
        assert_eq!(jacobian_nullity(&p, &angles), 0);
    }

    #[test]
    fn isogram_is_mobile() {
        let p = spherical_isogram_problem(1.0, 0.6, 0.9, [0.9, 0.3, 0.3, 0.9]);
        let s = solve_loop(&p).unwrap();
        assert_eq!(jacobian_nullity(&p, &s.angles), 1);
    }

    #[test]
    fn problem_check() {
        let p = spherical_isogram_problem(1.0, 0.6, 0.9, [0.0; 4]);
        assert!(p.check().is_ok());
    }
}
