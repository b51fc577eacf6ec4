//! Four-bar cells: spherical isograms and Bennett isograms.
//!
//! Cell layout: basis A -> B runs along the carrier `g0`, the arms leave A and
//! B backwards (arc `-beta` along `g0`, then rotated out of `g0` about A and B
//! through `phi1`, `phi2`), and the coupler joins C and D. At `phi1 = 0` all
//! four sides lie on `g0`; that is the zero of both arm angles.
//!
//! The transmission law `tan(phi2/2) = c tan(phi1/2)` holds with
//! `c = sin(beta - alpha) / (sin beta +- sin alpha)` for this layout.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dual::Dual;
use crate::error::{Error, Result};
use crate::screw_geom::{self, common_perpendicular, line_reflection, Displacement, OrientedLine, Point};
use crate::sphere_geom::{
    great_circle_through, rotation_about, symmetry_centers, vertex_angle, OrientedGreatCircle, SpherePoint,
    SphericalRotation,
};
use crate::tol;

/// Sign of the denominator in the transmission law.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Branch {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" | "+" => Ok(Branch::Plus),
            "minus" | "-" => Ok(Branch::Minus),
            _ => Err(Error::InvalidArgument(format!("unknown branch '{s}'"))),
        }
    }
}

pub(crate) fn check_arc(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > tol::RANGE && x < PI - tol::RANGE {
        Ok(())
    } else {
        Err(Error::spec(format!("{name} = {x} must lie in (0, pi)")))
    }
}

fn check_denominator(alpha: f64, beta: f64, branch: Branch) -> Result<f64> {
    let den = beta.sin() + branch.sign() * alpha.sin();
    if den.abs() < tol::DENOMINATOR {
        Err(Error::DegenerateBranch { denominator: den })
    } else {
        Ok(den)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphericalIsogramSpec {
    /// Arc of basis and coupler.
    pub alpha: f64,
    /// Arc of both arms.
    pub beta: f64,
    pub branch: Branch,
}

impl SphericalIsogramSpec {
    pub fn new(alpha: f64, beta: f64, branch: Branch) -> Result<Self> {
        let s = SphericalIsogramSpec { alpha, beta, branch };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        check_arc("alpha", self.alpha)?;
        check_arc("beta", self.beta)?;
        check_denominator(self.alpha, self.beta, self.branch).map(|_| ())
    }
}

/// The coefficient `c21` with `tan(phi2/2) = c21 tan(phi1/2)`.
pub fn transmission_coefficient(spec: &SphericalIsogramSpec) -> Result<f64> {
    spec.validate()?;
    let den = check_denominator(spec.alpha, spec.beta, spec.branch)?;
    Ok((spec.beta - spec.alpha).sin() / den)
}

/// Arm angle at B driven by `phi1` at A, in (-pi, pi].
///
/// Works on the half-angle pair so that `phi1 = pi` is a regular input.
pub fn coupled_angle(c21: f64, phi1: f64) -> f64 {
    let (mut s, mut c) = (0.5 * phi1).sin_cos();
    if c < 0.0 {
        s = -s;
        c = -c;
    }
    let phi2 = 2.0 * (c21 * s).atan2(c);
    if phi2 <= -PI {
        phi2 + 2.0 * PI
    } else {
        phi2
    }
}

/// Arm arc and branch of the isogram with basis `alpha` whose transmission
/// coefficient is `c`. Coefficients in (-1, 1) need the plus branch, those
/// outside need the minus branch; `|c| = 1` has no arm in (0, pi).
pub fn arm_for_coefficient(alpha: f64, c: f64) -> Result<(Branch, f64)> {
    check_arc("alpha", alpha)?;
    if !c.is_finite() || ((c.abs() - 1.0).abs() < tol::DENOMINATOR) {
        return Err(Error::spec(format!("coefficient {c} is not realized by any arm in (0, pi)")));
    }
    let (branch, t) = if c.abs() < 1.0 {
        (Branch::Plus, (1.0 + c) / (1.0 - c) * (0.5 * alpha).tan())
    } else {
        (Branch::Minus, (c - 1.0) / (c + 1.0) / (0.5 * alpha).tan())
    };
    let beta = 2.0 * t.atan();
    check_arc("derived beta", beta)?;
    check_denominator(alpha, beta, branch)?;
    Ok((branch, beta))
}

/// A solved spherical isogram.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphericalIsogramPose {
    /// A, B, C, D in cyclic order.
    pub vertices: [SpherePoint; 4],
    /// AB (the carrier), BC, CD (the coupler), DA. Arms carry the
    /// orientation of the carrier transported by the arm rotation.
    pub sides: [OrientedGreatCircle; 4],
    pub phi1: f64,
    pub phi2: f64,
}

impl SphericalIsogramPose {
    /// All four sides on one great circle.
    pub fn is_collapsed(&self) -> bool {
        self.sides[1].normal().cross(&self.sides[3].normal()).norm() < tol::COPLANAR
    }

    /// Interior angles at A, B, C, D.
    pub fn angles(&self) -> [f64; 4] {
        let v = &self.vertices;
        [
            vertex_angle(&v[0], &v[3], &v[1]),
            vertex_angle(&v[1], &v[0], &v[2]),
            vertex_angle(&v[2], &v[1], &v[3]),
            vertex_angle(&v[3], &v[2], &v[0]),
        ]
    }

    /// Largest deviation of opposite side lengths from the spec.
    pub fn side_residual(&self, spec: &SphericalIsogramSpec) -> f64 {
        let v = &self.vertices;
        let d = |i: usize, j: usize| v[i].distance(&v[j]);
        [
            (d(0, 1) - spec.alpha).abs(),
            (d(2, 3) - spec.alpha).abs(),
            (d(1, 2) - spec.beta).abs(),
            (d(3, 0) - spec.beta).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    fn incidence_residual(&self) -> f64 {
        let (v, s) = (&self.vertices, &self.sides);
        (0..4)
            .flat_map(|k| [s[k].incidence(&v[k]), s[k].incidence(&v[(k + 1) % 4])])
            .fold(0.0, f64::max)
    }
}

/// Builds the isogram on carrier `g0` with A = `p`, B at arc `alpha` along
/// `g0`, and the arm at A turned through `phi1`.
pub fn solve_spherical_isogram(
    spec: &SphericalIsogramSpec,
    g0: &OrientedGreatCircle,
    p: &SpherePoint,
    phi1: f64,
) -> Result<SphericalIsogramPose> {
    if g0.incidence(p) > tol::COPLANAR {
        return Err(Error::InvalidArgument("base point is not on the carrier".into()));
    }
    let c = transmission_coefficient(spec)?;
    let phi2 = coupled_angle(c, phi1);
    let a = *p;
    let b = g0.advance(&a, spec.alpha);
    let ra = rotation_about(&a, phi1);
    let rb = rotation_about(&b, phi2);
    let d = ra.apply(&g0.advance(&a, -spec.beta));
    let cc = rb.apply(&g0.advance(&b, -spec.beta));
    let arm_a = ra.apply(g0);
    let arm_b = rb.apply(g0);
    let coupler = match symmetry_centers(&arm_a, &arm_b.reversed()) {
        Ok(sc) => sc.half_turn().apply(g0).reversed(),
        Err(_) => *g0,
    };
    let pose = SphericalIsogramPose { vertices: [a, b, cc, d], sides: [*g0, arm_b, coupler, arm_a], phi1, phi2 };
    let res = pose.side_residual(spec).max(pose.incidence_residual());
    if res > tol::CLOSURE {
        return Err(Error::closure("spherical isogram", res));
    }
    Ok(pose)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IsogramSymmetry {
    /// Tie-broken intersection of the diagonal great circles.
    pub center: SpherePoint,
    /// Great circle with spherical center `center`.
    pub mirror: OrientedGreatCircle,
    /// For crossed isograms the half-turn about `center` carries A and B to
    /// the antipodes of C and D; the reflection in `mirror` swaps them
    /// exactly. For non-crossed ones the half-turn swaps them.
    pub crossed: bool,
}

impl IsogramSymmetry {
    pub fn half_turn(&self) -> SphericalRotation {
        SphericalRotation::half_turn(&self.center)
    }

    /// Deviation of the vertex swap A <-> C, B <-> D by the symmetry.
    pub fn swap_residual(&self, pose: &SphericalIsogramPose) -> f64 {
        use crate::sphere_geom::Reflect;
        let v = &pose.vertices;
        let map = |p: &SpherePoint| {
            if self.crossed {
                p.reflected_in(&self.mirror)
            } else {
                self.half_turn().apply(p)
            }
        };
        [(0, 2), (2, 0), (1, 3), (3, 1)]
            .into_iter()
            .map(|(i, j)| (map(&v[i]).vector() - v[j].vector()).norm())
            .fold(0.0, f64::max)
    }
}

pub fn isogram_symmetry_spherical(pose: &SphericalIsogramPose) -> Result<IsogramSymmetry> {
    let v = &pose.vertices;
    let ac = great_circle_through(&v[0], &v[2]).map_err(|_| Error::CollapsedPose("diagonal A-C undefined"))?;
    let bd = great_circle_through(&v[1], &v[3]).map_err(|_| Error::CollapsedPose("diagonal B-D undefined"))?;
    let (center, _) = ac.intersection(&bd).map_err(|_| Error::CollapsedPose("diagonals coincide"))?;
    let crossed = SphericalRotation::half_turn(&center).apply(&v[0]).vector().dot(&v[2].vector()) < 0.0;
    let mirror = OrientedGreatCircle::from_normal(center.vector())?;
    Ok(IsogramSymmetry { center, mirror, crossed })
}

/// Bennett isogram data: twists and offsets of basis/coupler (`alpha`, `a`)
/// and of the arms (`beta`, `b`). Offsets are signed; the proportion reads
/// `a sin(beta) = b sin(alpha)` on the plus branch and
/// `a sin(beta) = -b sin(alpha)` on the minus branch.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BennettIsogramSpec {
    pub alpha: f64,
    pub beta: f64,
    pub a: f64,
    pub b: f64,
    pub branch: Branch,
}

impl BennettIsogramSpec {
    pub fn new(alpha: f64, beta: f64, a: f64, b: f64, branch: Branch) -> Result<Self> {
        let s = BennettIsogramSpec { alpha, beta, a, b, branch };
        s.validate()?;
        Ok(s)
    }

    /// Fills in `b` from the proportion.
    pub fn from_basis(alpha: f64, beta: f64, a: f64, branch: Branch) -> Result<Self> {
        check_arc("alpha", alpha)?;
        Self::new(alpha, beta, a, branch.sign() * a * beta.sin() / alpha.sin(), branch)
    }

    pub fn spherical(&self) -> SphericalIsogramSpec {
        SphericalIsogramSpec { alpha: self.alpha, beta: self.beta, branch: self.branch }
    }

    /// Relative violation of the proportion.
    pub fn proportion_residual(&self) -> f64 {
        let lhs = self.a * self.beta.sin();
        let rhs = self.branch.sign() * self.b * self.alpha.sin();
        let scale = lhs.abs().max(rhs.abs());
        if scale == 0.0 {
            0.0
        } else {
            (lhs - rhs).abs() / scale
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.spherical().validate()?;
        if !(self.a.is_finite() && self.b.is_finite()) {
            return Err(Error::spec("offsets must be finite"));
        }
        let r = self.proportion_residual();
        if r > tol::PROPORTION {
            return Err(Error::spec(format!(
                "Bennett proportion a sin(beta) = {}b sin(alpha) violated (relative {r:.3e})",
                if self.branch == Branch::Plus { "" } else { "-" }
            )));
        }
        Ok(())
    }
}

/// Transmission coefficient evaluated on dual angles `alpha + eps a`,
/// `beta + eps b`. The proportion is not checked; a nonzero dual part means
/// the cell cannot move with pure rotations.
pub fn bennett_dual_coefficient(spec: &BennettIsogramSpec) -> Result<Dual> {
    spec.spherical().validate()?;
    let al = Dual::new(spec.alpha, spec.a);
    let be = Dual::new(spec.beta, spec.b);
    let den = be.sin() + al.sin().scale(spec.branch.sign());
    if den.re.abs() < tol::DENOMINATOR {
        return Err(Error::DegenerateBranch { denominator: den.re });
    }
    Ok((be - al).sin() / den)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BennettIsogramPose {
    /// Hinges at A, B, C, D.
    pub hinges: [OrientedLine; 4],
    /// AB (the base), BC, CD (the coupler), DA.
    pub sides: [OrientedLine; 4],
    /// Points where each hinge meets its two sides.
    pub vertices: [Point; 4],
    pub phi1: f64,
    pub phi2: f64,
}

impl BennettIsogramPose {
    pub fn is_collapsed(&self) -> bool {
        self.sides[1].direction().cross(&self.sides[3].direction()).norm() < tol::COPLANAR
    }

    fn closure_residual(&self, spec: &BennettIsogramSpec) -> f64 {
        let (h, s, v) = (&self.hinges, &self.sides, &self.vertices);
        let mut r: f64 = 0.0;
        for k in 0..4 {
            // side k joins hinges k and k+1
            for j in [k, (k + 1) % 4] {
                r = r.max(s[k].orthogonal_meet_residual(&h[j]));
                r = r.max(s[k].distance_to_point(&v[j]));
                r = r.max(h[j].distance_to_point(&v[j]));
            }
        }
        let fold = |x: f64| x.min(PI - x);
        let twist = |i: usize, j: usize| fold(h[i].direction().cross(&h[j].direction()).norm().atan2(h[i].direction().dot(&h[j].direction())));
        let len = |i: usize, j: usize| (v[i] - v[j]).norm();
        for (i, j, t, l) in [(0, 1, spec.alpha, spec.a), (2, 3, spec.alpha, spec.a), (1, 2, spec.beta, spec.b), (3, 0, spec.beta, spec.b)] {
            r = r.max((twist(i, j) - fold(t)).abs());
            r = r.max((len(i, j) - l.abs()).abs());
        }
        r
    }
}

fn foot(side: &OrientedLine, hinge: &OrientedLine) -> Result<Point> {
    Ok(common_perpendicular(side, hinge)?.foot1)
}

/// Builds the Bennett isogram on base line `base` with hinge A along `hinge`,
/// which must meet `base` at a right angle.
pub fn solve_bennett_isogram(
    spec: &BennettIsogramSpec,
    base: &OrientedLine,
    hinge: &OrientedLine,
    phi1: f64,
) -> Result<BennettIsogramPose> {
    spec.validate()?;
    if base.orthogonal_meet_residual(hinge) > tol::COPLANAR {
        return Err(Error::InvalidArgument("hinge A must meet the base line orthogonally".into()));
    }
    let c = bennett_dual_coefficient(spec)?.re;
    let phi2 = coupled_angle(c, phi1);
    let ia = *hinge;
    let ib = Displacement::screw(base, spec.alpha, spec.a).apply(&ia);
    let arm_a = Displacement::screw(&ia, phi1, 0.0).apply(base);
    let arm_b = Displacement::screw(&ib, phi2, 0.0).apply(base);
    let id = Displacement::screw(&arm_a, -spec.beta, -spec.b).apply(&ia);
    let ic = Displacement::screw(&arm_b, -spec.beta, -spec.b).apply(&ib);
    let coupler = match screw_geom::midline_symmetry_axis(&arm_a, &arm_b.reversed()) {
        Ok(s) => line_reflection(&s).apply(base).reversed(),
        Err(Error::ParallelLines(_)) => *base,
        Err(e) => return Err(e),
    };
    let hinges = [ia, ib, ic, id];
    let sides = [*base, arm_b, coupler, arm_a];
    let mut vertices = [Point::zeros(); 4];
    for (k, v) in vertices.iter_mut().enumerate() {
        let before = &sides[(k + 3) % 4];
        let after = &sides[k];
        *v = (foot(before, &hinges[k])? + foot(after, &hinges[k])?) * 0.5;
    }
    let pose = BennettIsogramPose { hinges, sides, vertices, phi1, phi2 };
    let res = pose.closure_residual(spec);
    if res > tol::CLOSURE {
        return Err(Error::closure("Bennett isogram", res));
    }
    Ok(pose)
}

/// Line whose reflection swaps opposite hinges of the pose.
pub fn bennett_symmetry_axis(pose: &BennettIsogramPose) -> Result<OrientedLine> {
    let s = screw_geom::midline_symmetry_axis(&pose.sides[3], &pose.sides[1].reversed()).map_err(|e| match e {
        Error::ParallelLines(_) => Error::CollapsedPose("arms are parallel"),
        e => e,
    })?;
    let res = bennett_swap_residual(pose, &s);
    if res > tol::CLOSURE {
        return Err(Error::closure("Bennett symmetry axis", res));
    }
    Ok(s)
}

/// Deviation of the hinge swap A <-> C, B <-> D under reflection in `s`,
/// with hinge orientation ignored.
pub fn bennett_swap_residual(pose: &BennettIsogramPose, s: &OrientedLine) -> f64 {
    let r = line_reflection(s);
    let h = &pose.hinges;
    [(0, 2), (2, 0), (1, 3), (3, 1)]
        .into_iter()
        .map(|(i, j)| r.apply(&h[i]).residual_unoriented(&h[j]))
        .fold(0.0, f64::max)
}
