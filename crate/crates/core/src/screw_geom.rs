//! Oriented lines in Plücker coordinates and rigid displacements as unit dual
//! quaternions.
//!
//! A displacement `x -> R x + t` is stored as `q_r + eps * q_d` with
//! `q_d = t q_r / 2`. Helical translations are right-handed: a positive
//! translation moves along the positive axis direction.

use nalgebra::{Quaternion, Vector3};

use crate::dual::Dual;
use crate::error::{Error, Result};
use crate::sphere_geom::tie_break;
use crate::tol;

pub type Vec3 = Vector3<f64>;
pub type Point = Vector3<f64>;

/// Line with a direction `d` (unit) and moment `m = p x d` for any point `p`
/// on it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrientedLine {
    d: Vec3,
    m: Vec3,
}

impl OrientedLine {
    /// Line through `p` with direction `dir`.
    pub fn through(p: &Point, dir: &Vec3) -> Result<Self> {
        let n = dir.norm();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::InvalidArgument("line direction is zero".into()));
        }
        let d = dir / n;
        Ok(OrientedLine { d, m: p.cross(&d) })
    }

    /// From Plücker coordinates; `d` is normalized and `m` scaled with it.
    pub fn from_plucker(d: &Vec3, m: &Vec3) -> Result<Self> {
        let n = d.norm();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::InvalidArgument("line direction is zero".into()));
        }
        let (d, m) = (d / n, m / n);
        if d.dot(&m).abs() > tol::PLUCKER {
            return Err(Error::InvalidArgument(format!("Plücker condition violated by {:.3e}", d.dot(&m))));
        }
        Ok(OrientedLine { d, m })
    }

    pub(crate) fn from_unit(d: Vec3, m: Vec3) -> Self {
        let n = d.norm();
        OrientedLine { d: d / n, m: m / n }
    }

    pub fn direction(&self) -> Vec3 {
        self.d
    }

    pub fn moment(&self) -> Vec3 {
        self.m
    }

    /// Point of the line closest to the origin.
    pub fn point(&self) -> Point {
        self.d.cross(&self.m)
    }

    pub fn reversed(&self) -> Self {
        OrientedLine { d: -self.d, m: -self.m }
    }

    pub fn point_at(&self, s: f64) -> Point {
        self.point() + self.d * s
    }

    pub fn distance_to_point(&self, p: &Point) -> f64 {
        (p.cross(&self.d) - self.m).norm()
    }

    /// Parameter of the orthogonal projection of `p` onto the line.
    pub fn parameter_of(&self, p: &Point) -> f64 {
        (p - self.point()).dot(&self.d)
    }

    /// Oriented equality residual, `|d1 - d2| + |m1 - m2|`.
    pub fn residual(&self, other: &OrientedLine) -> f64 {
        (self.d - other.d).norm() + (self.m - other.m).norm()
    }

    /// Equality of the underlying point sets.
    pub fn residual_unoriented(&self, other: &OrientedLine) -> f64 {
        self.residual(other).min(self.residual(&other.reversed()))
    }

    /// Orthogonal-intersection residual: `|d1 . d2|` plus the reciprocal
    /// product `|d1 . m2 + d2 . m1|`, both zero iff the lines meet at a right
    /// angle (or are parallel, which callers exclude).
    pub fn orthogonal_meet_residual(&self, other: &OrientedLine) -> f64 {
        self.d.dot(&other.d).abs() + (self.d.dot(&other.m) + other.d.dot(&self.m)).abs()
    }

    /// Plücker condition residual `|d . m|`.
    pub fn plucker_residual(&self) -> f64 {
        self.d.dot(&self.m).abs()
    }
}

/// Output of [`common_perpendicular`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CommonPerpendicular {
    /// Directed along `d1 x d2`, passing through both feet.
    pub axis: OrientedLine,
    pub distance: f64,
    /// Angle between the oriented directions, in [0, pi].
    pub angle: f64,
    pub foot1: Point,
    pub foot2: Point,
}

impl CommonPerpendicular {
    /// Signed offset from `foot1` to `foot2` along the axis.
    pub fn signed_distance(&self) -> f64 {
        (self.foot2 - self.foot1).dot(&self.axis.d)
    }
}

pub fn common_perpendicular(l1: &OrientedLine, l2: &OrientedLine) -> Result<CommonPerpendicular> {
    let c = l1.d.cross(&l2.d);
    let s = c.norm();
    if s < tol::COPLANAR {
        return Err(Error::ParallelLines(s));
    }
    let (p1, p2) = (l1.point(), l2.point());
    let w = p2 - p1;
    // feet: p1 + t1 d1 and p2 + t2 d2 with the connecting segment along c
    let t1 = w.cross(&l2.d).dot(&c) / (s * s);
    let t2 = w.cross(&l1.d).dot(&c) / (s * s);
    let foot1 = p1 + l1.d * t1;
    let foot2 = p2 + l2.d * t2;
    let u = c / s;
    Ok(CommonPerpendicular {
        axis: OrientedLine { d: u, m: foot1.cross(&u) },
        distance: (foot2 - foot1).norm(),
        angle: s.atan2(l1.d.dot(&l2.d)),
        foot1,
        foot2,
    })
}

/// Unsigned dual angle `(angle, distance)` between two lines.
pub fn dual_angle(l1: &OrientedLine, l2: &OrientedLine) -> Result<(f64, f64)> {
    let cp = common_perpendicular(l1, l2)?;
    Ok((cp.angle, cp.distance))
}

/// Signed dual angle from `l1` to `l2` measured about `about`, which must
/// meet both lines orthogonally: the rotation angle in (-pi, pi] and the
/// translation along `about` that carry `l1` onto `l2`.
pub fn signed_dual_angle(l1: &OrientedLine, l2: &OrientedLine, about: &OrientedLine) -> Dual {
    let a = about.d;
    let angle = l1.d.cross(&l2.d).dot(&a).atan2(l1.d.dot(&l2.d));
    let f1 = foot_on(about, l1);
    let f2 = foot_on(about, l2);
    Dual::new(angle, f2 - f1)
}

/// Parameter along `axis` of the point where `line` comes closest to it.
fn foot_on(axis: &OrientedLine, line: &OrientedLine) -> f64 {
    match common_perpendicular(axis, line) {
        Ok(cp) => axis.parameter_of(&cp.foot1),
        // no unique foot for parallel lines
        Err(_) => axis.parameter_of(&line.point()),
    }
}

/// Rigid displacement as a unit dual quaternion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Displacement {
    r: Quaternion<f64>,
    d: Quaternion<f64>,
}

/// Axis, angle and translation of a helical displacement.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScrewParams {
    pub axis: OrientedLine,
    /// In (-pi, pi]; recovered angles lie in [0, pi] with the axis oriented
    /// accordingly.
    pub angle: f64,
    pub translation: f64,
}

impl ScrewParams {
    pub fn is_line_reflection(&self) -> bool {
        (self.angle.abs() - std::f64::consts::PI).abs() < tol::HALF_TURN && self.translation.abs() < tol::HALF_TURN
    }
}

impl Displacement {
    pub fn identity() -> Self {
        Displacement { r: Quaternion::identity(), d: Quaternion::new(0.0, 0.0, 0.0, 0.0) }
    }

    /// `x -> R x + t` where `R` is the rotation of the unit quaternion `r`.
    pub fn from_rotation_translation(r: Quaternion<f64>, t: &Vec3) -> Self {
        let r = r / r.norm();
        Displacement { r, d: Quaternion::from_imag(*t) * r * 0.5 }
    }

    pub fn translation(t: &Vec3) -> Self {
        Self::from_rotation_translation(Quaternion::identity(), t)
    }

    /// Helical displacement: rotation through `angle` about `axis` and
    /// translation `shift` along it.
    pub fn screw(axis: &OrientedLine, angle: f64, shift: f64) -> Self {
        let (s, c) = (0.5 * angle).sin_cos();
        let u = axis.d;
        let r = Quaternion::from_parts(c, u * s);
        let p = axis.point();
        let rp = (r * Quaternion::from_imag(p) * r.conjugate()).imag();
        Self::from_rotation_translation(r, &(p - rp + u * shift))
    }

    pub fn from_parts(r: Quaternion<f64>, d: Quaternion<f64>) -> Result<Self> {
        let n = r.norm();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::InvalidArgument("zero real part".into()));
        }
        let (r, d) = (r / n, d / n);
        if r.dot(&d).abs() > tol::PLUCKER {
            return Err(Error::InvalidArgument(format!("Study condition violated by {:.3e}", r.dot(&d))));
        }
        Ok(Displacement { r, d })
    }

    pub fn real(&self) -> Quaternion<f64> {
        self.r
    }

    pub fn dual(&self) -> Quaternion<f64> {
        self.d
    }

    pub fn rotate(&self, v: &Vec3) -> Vec3 {
        (self.r * Quaternion::from_imag(*v) * self.r.conjugate()).imag()
    }

    pub fn translation_vector(&self) -> Vec3 {
        (self.d * self.r.conjugate()).imag() * 2.0
    }

    pub fn apply<T: Transform>(&self, x: &T) -> T {
        x.transformed(self)
    }

    /// `self` after `first`.
    pub fn after(&self, first: &Displacement) -> Self {
        Displacement { r: self.r * first.r, d: self.r * first.d + self.d * first.r }
    }

    pub fn inverse(&self) -> Self {
        Displacement { r: self.r.conjugate(), d: self.d.conjugate() }
    }

    /// Dual-quaternion distance up to the global sign.
    pub fn distance(&self, other: &Displacement) -> f64 {
        let minus = ((self.r - other.r).norm_squared() + (self.d - other.d).norm_squared()).sqrt();
        let plus = ((self.r + other.r).norm_squared() + (self.d + other.d).norm_squared()).sqrt();
        minus.min(plus)
    }

    pub fn study_residual(&self) -> f64 {
        self.r.dot(&self.d).abs()
    }

    /// Homogeneous 4x4 matrix, row major, last row omitted.
    pub fn matrix3x4(&self) -> [[f64; 4]; 3] {
        let t = self.translation_vector();
        let mut out = [[0.0; 4]; 3];
        for j in 0..3 {
            let col = self.rotate(&Vec3::ith(j, 1.0));
            for i in 0..3 {
                out[i][j] = col[i];
            }
        }
        for i in 0..3 {
            out[i][3] = t[i];
        }
        out
    }
}

pub fn line_reflection(axis: &OrientedLine) -> Displacement {
    Displacement { r: Quaternion::from_imag(axis.d), d: Quaternion::from_imag(axis.m) }
}

/// `d2 d1`: first `d1`, then `d2`.
pub fn compose(d2: &Displacement, d1: &Displacement) -> Displacement {
    d2.after(d1)
}

pub fn inverse(d: &Displacement) -> Displacement {
    d.inverse()
}

pub fn apply<T: Transform>(d: &Displacement, x: &T) -> T {
    x.transformed(d)
}

pub fn screw_axis(disp: &Displacement) -> Result<ScrewParams> {
    let (r, d) = if disp.r.w < 0.0 { (-disp.r, -disp.d) } else { (disp.r, disp.d) };
    let v = r.imag();
    let s = v.norm();
    let angle = 2.0 * s.atan2(r.w);
    if angle < tol::PURE_TRANSLATION {
        return Err(Error::NoFiniteAxis);
    }
    let u = v / s;
    let t = (d * r.conjugate()).imag() * 2.0;
    let shift = t.dot(&u);
    let tp = t - u * shift;
    let c = (tp + u.cross(&tp) / (0.5 * angle).tan()) * 0.5;
    Ok(ScrewParams { axis: OrientedLine { d: u, m: c.cross(&u) }, angle, translation: shift })
}

/// Axis `s` whose line reflection maps oriented `h1` onto oriented `h3rev`:
/// through the midpoint of their common perpendicular segment, along the
/// bisector `d1 + d2`.
pub fn midline_symmetry_axis(h1: &OrientedLine, h3rev: &OrientedLine) -> Result<OrientedLine> {
    let cp = common_perpendicular(h1, h3rev)?;
    let mid = (cp.foot1 + cp.foot2) * 0.5;
    let s = OrientedLine::through(&mid, &(h1.d + h3rev.d))?;
    let res = line_reflection(&s).apply(h1).residual(h3rev);
    if res > tol::CLOSURE {
        return Err(Error::closure("midline symmetry axis", res));
    }
    Ok(s)
}

/// Canonical orientation for lines whose orientation carries no meaning.
pub(crate) fn tie_broken(l: &OrientedLine) -> OrientedLine {
    if tie_break(l.d) == l.d {
        *l
    } else {
        l.reversed()
    }
}

/// Objects a [`Displacement`] acts on.
pub trait Transform: Sized {
    fn transformed(&self, d: &Displacement) -> Self;
}

impl Transform for Point {
    fn transformed(&self, d: &Displacement) -> Self {
        d.rotate(self) + d.translation_vector()
    }
}

impl Transform for OrientedLine {
    fn transformed(&self, disp: &Displacement) -> Self {
        let d = disp.rotate(&self.d);
        let m = disp.rotate(&self.m) + disp.translation_vector().cross(&d);
        OrientedLine::from_unit(d, m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_6};

    fn line(p: [f64; 3], d: [f64; 3]) -> OrientedLine {
        OrientedLine::through(&Vec3::from(p), &Vec3::from(d)).unwrap()
    }

    fn arb_vec(r: f64) -> impl Strategy<Value = Vec3> {
        (-r..r, -r..r, -r..r).prop_map(|(x, y, z)| Vec3::new(x, y, z))
    }

    fn arb_line() -> impl Strategy<Value = OrientedLine> {
        (arb_vec(2.0), arb_vec(1.0).prop_filter("nonzero", |v| v.norm() > 0.1))
            .prop_map(|(p, d)| OrientedLine::through(&p, &d).unwrap())
    }

    fn arb_disp() -> impl Strategy<Value = Displacement> {
        (arb_line(), -3.0..3.0f64, -2.0..2.0f64).prop_map(|(l, a, t)| Displacement::screw(&l, a, t))
    }

    #[test]
    fn common_perpendicular_of_skew_axes() {
        let cp = common_perpendicular(&line([0.0; 3], [1.0, 0.0, 0.0]), &line([0.0, 0.0, 1.0], [0.0, 1.0, 0.0])).unwrap();
        assert_relative_eq!(cp.distance, 1.0, epsilon = 1e-15);
        assert_relative_eq!(cp.angle, FRAC_PI_2, epsilon = 1e-15);
        assert!(cp.axis.residual(&line([0.0; 3], [0.0, 0.0, 1.0])) < 1e-15);
        assert_relative_eq!(cp.signed_distance(), 1.0);
    }

    #[test]
    fn parallel_lines_rejected() {
        let l = line([0.0; 3], [1.0, 0.0, 0.0]);
        let shifted = line([0.0, 0.0, 2.0], [1.0, 0.0, 0.0]);
        assert!(matches!(common_perpendicular(&l, &shifted), Err(Error::ParallelLines(_))));
        assert!(matches!(common_perpendicular(&l, &l), Err(Error::ParallelLines(_))));
    }

    #[test]
    fn intersecting_lines() {
        let p = Vec3::new(1.0, 2.0, 3.0);
        let l1 = OrientedLine::through(&p, &Vec3::new(1.0, 0.0, 0.0)).unwrap();
        let l2 = OrientedLine::through(&p, &Vec3::new(FRAC_PI_6.cos(), FRAC_PI_6.sin(), 0.0)).unwrap();
        let cp = common_perpendicular(&l1, &l2).unwrap();
        assert!(cp.distance < 1e-15);
        assert!(cp.axis.distance_to_point(&p) < 1e-14);
        let (a, o) = dual_angle(&l1, &l2).unwrap();
        assert_relative_eq!(a, FRAC_PI_6, epsilon = 1e-15);
        assert!(o < 1e-15);
        let (a, o) = dual_angle(&line([0.0; 3], [1.0, 0.0, 0.0]), &line([0.0, 0.0, 1.0], [0.0, 1.0, 0.0])).unwrap();
        assert_relative_eq!(a, FRAC_PI_2);
        assert_relative_eq!(o, 1.0);
    }

    #[test]
    fn reflections_in_z_axis() {
        let z = line([0.0; 3], [0.0, 0.0, 1.0]);
        let s = line_reflection(&z);
        assert_eq!(s.real().w, 0.0);
        assert!((s.apply(&Vec3::new(1.0, 0.0, 0.0)) - Vec3::new(-1.0, 0.0, 0.0)).norm() < 1e-15);
        let x = line([0.0; 3], [1.0, 0.0, 0.0]);
        assert!(s.apply(&x).residual(&x.reversed()) < 1e-15);
        assert!(compose(&s, &s).distance(&Displacement::identity()) < 1e-15);
    }

    #[test]
    fn reflections_about_orthogonal_intersecting_axes() {
        let s1 = line_reflection(&line([1.0, 1.0, 0.0], [1.0, 0.0, 0.0]));
        let s2 = line_reflection(&line([1.0, 1.0, 0.0], [0.0, 1.0, 0.0]));
        let p = screw_axis(&compose(&s2, &s1)).unwrap();
        assert!(p.is_line_reflection());
        assert!(p.axis.residual_unoriented(&line([1.0, 1.0, 0.0], [0.0, 0.0, 1.0])) < 1e-14);
    }

    #[test]
    fn screw_round_trip() {
        let z = line([0.0; 3], [0.0, 0.0, 1.0]);
        let p = screw_axis(&Displacement::screw(&z, 0.7, 0.3)).unwrap();
        assert!(p.axis.residual(&z) < 1e-12);
        assert_relative_eq!(p.angle, 0.7, epsilon = 1e-12);
        assert_relative_eq!(p.translation, 0.3, epsilon = 1e-12);
        assert!(matches!(screw_axis(&Displacement::identity()), Err(Error::NoFiniteAxis)));
        assert!(matches!(
            screw_axis(&Displacement::translation(&Vec3::new(1.0, 0.0, 0.0))),
            Err(Error::NoFiniteAxis)
        ));
    }

    #[test]
    fn product_of_two_reflections_is_screw_about_common_perpendicular() {
        let (theta, c) = (0.4f64, 0.25);
        let l1 = line([0.0; 3], [1.0, 0.0, 0.0]);
        let l2 = line([0.0, 0.0, c], [theta.cos(), theta.sin(), 0.0]);
        let cp = common_perpendicular(&l1, &l2).unwrap();
        let p = screw_axis(&compose(&line_reflection(&l2), &line_reflection(&l1))).unwrap();
        assert!(p.axis.residual(&cp.axis) < 1e-12);
        assert_relative_eq!(p.angle, 2.0 * cp.angle, epsilon = 1e-12);
        assert_relative_eq!(p.translation, 2.0 * cp.distance, epsilon = 1e-12);
    }

    #[test]
    fn midline_of_intersecting_lines() {
        let p = Vec3::new(0.5, -1.0, 2.0);
        let l1 = OrientedLine::through(&p, &Vec3::new(1.0, 0.2, 0.0)).unwrap();
        let l2 = OrientedLine::through(&p, &Vec3::new(0.0, 1.0, 0.4)).unwrap();
        let s = midline_symmetry_axis(&l1, &l2).unwrap();
        assert!(s.distance_to_point(&p) < 1e-14);
    }

    #[test]
    fn midline_recovers_reflection_axis() {
        let s0 = line([0.3, 0.2, 0.0], [1.0, 1.0, 0.5]);
        let z = line([0.0; 3], [0.0, 0.0, 1.0]);
        let img = line_reflection(&s0).apply(&z);
        let s = midline_symmetry_axis(&z, &img).unwrap();
        assert!(s.residual_unoriented(&s0) < 1e-12);
    }

    #[test]
    fn signed_dual_angle_about_perpendicular() {
        let z = line([0.0; 3], [0.0, 0.0, 1.0]);
        let a = line([0.0, 0.0, 0.5], [1.0, 0.0, 0.0]);
        let b = line([0.0, 0.0, -0.25], [0.0, -1.0, 0.0]);
        let da = signed_dual_angle(&a, &b, &z);
        assert_relative_eq!(da.re, -FRAC_PI_2, epsilon = 1e-15);
        assert_relative_eq!(da.du, -0.75, epsilon = 1e-15);
        assert!(Displacement::screw(&z, da.re, da.du).apply(&a).residual(&b) < 1e-15);
    }

    proptest! {
        #[test]
        fn chains_keep_unit_and_study(ds in proptest::collection::vec(arb_disp(), 100)) {
            let mut acc = Displacement::identity();
            for d in &ds {
                acc = compose(d, &acc);
            }
            prop_assert!((acc.real().norm() - 1.0).abs() < 1e-10);
            prop_assert!(acc.study_residual() < 1e-10);
            prop_assert!(compose(&acc, &inverse(&acc)).distance(&Displacement::identity()) < 1e-10);
        }

        #[test]
        fn lines_keep_plucker(l in arb_line(), d in arb_disp()) {
            let img = d.apply(&l);
            prop_assert!(img.plucker_residual() < 1e-10);
            let p = l.point_at(0.7);
            prop_assert!(img.distance_to_point(&d.apply(&p)) < 1e-12);
        }

        #[test]
        fn screw_params_round_trip(l in arb_line(), a in 0.01..3.1f64, t in -2.0..2.0f64) {
            let d = Displacement::screw(&l, a, t);
            let p = screw_axis(&d).unwrap();
            prop_assert!(p.axis.residual(&l) < 1e-10);
            prop_assert!((p.angle - a).abs() < 1e-10);
            prop_assert!((p.translation - t).abs() < 1e-10);
            prop_assert!(Displacement::screw(&p.axis, p.angle, p.translation).distance(&d) < 1e-10);
        }

        #[test]
        fn midline_maps_oriented(l1 in arb_line(), l2 in arb_line()) {
            prop_assume!(l1.direction().cross(&l2.direction()).norm() > 1e-3);
            let s = midline_symmetry_axis(&l1, &l2).unwrap();
            prop_assert!(line_reflection(&s).apply(&l1).residual(&l2) < 1e-10);
        }

        #[test]
        fn dual_angle_is_invariant(l1 in arb_line(), l2 in arb_line(), d in arb_disp()) {
            prop_assume!(l1.direction().cross(&l2.direction()).norm() > 1e-3);
            let (a0, o0) = dual_angle(&l1, &l2).unwrap();
            let (a1, o1) = dual_angle(&d.apply(&l1), &d.apply(&l2)).unwrap();
            prop_assert!((a0 - a1).abs() < 1e-10);
            prop_assert!((o0 - o1).abs() < 1e-10);
        }
    }
}
