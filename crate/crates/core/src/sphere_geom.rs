//! Geometry on the unit sphere: points, oriented great circles, rotations
//! about diameters and the symmetry centers of two oriented great circles.
//!
//! A great circle is stored as its unit normal. Traversal is counterclockwise
//! when seen from the tip of that normal, which is the same convention that
//! makes rotation angles about a point positive when counterclockwise seen
//! from outside the sphere.

use nalgebra::{Quaternion, Vector3};

use crate::error::{Error, Result};
use crate::tol;

pub type Vec3 = Vector3<f64>;

/// Picks the sign of `v` so that its first coordinate with magnitude above
/// [`tol::TIE_BREAK`] is positive.
pub fn tie_break(v: Vec3) -> Vec3 {
    for k in 0..3 {
        if v[k].abs() > tol::TIE_BREAK {
            return if v[k] > 0.0 { v } else { -v };
        }
    }
    v
}

fn unit(v: Vec3) -> Option<Vec3> {
    let n = v.norm();
    if n > 0.0 && n.is_finite() {
        Some(v / n)
    } else {
        None
    }
}

/// Point of the unit sphere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpherePoint {
    v: Vec3,
}

impl SpherePoint {
    /// Normalizes `v`. Fails on the zero vector.
    pub fn new(v: Vec3) -> Result<Self> {
        unit(v)
            .map(|v| SpherePoint { v })
            .ok_or_else(|| Error::InvalidArgument("sphere point from zero vector".into()))
    }

    pub fn from_xyz(x: f64, y: f64, z: f64) -> Result<Self> {
        Self::new(Vec3::new(x, y, z))
    }

    /// Renormalizes a vector known to be nonzero.
    pub(crate) fn from_unit(v: Vec3) -> Self {
        debug_assert!(v.norm() > 0.5);
        SpherePoint { v: v.normalize() }
    }

    pub fn vector(&self) -> Vec3 {
        self.v
    }

    pub fn antipode(&self) -> Self {
        SpherePoint { v: -self.v }
    }

    /// Central angle to `other`, in [0, pi].
    pub fn distance(&self, other: &SpherePoint) -> f64 {
        self.v.cross(&other.v).norm().atan2(self.v.dot(&other.v))
    }

    /// Representative of {P, P*} selected by [`tie_break`].
    pub fn tie_broken(&self) -> Self {
        SpherePoint { v: tie_break(self.v) }
    }

    /// Euclidean distance to `other` or to its antipode, whichever is smaller.
    pub fn residual_up_to_antipode(&self, other: &SpherePoint) -> f64 {
        (self.v - other.v).norm().min((self.v + other.v).norm())
    }
}

pub fn antipode(p: &SpherePoint) -> SpherePoint {
    p.antipode()
}

pub fn spherical_distance(p: &SpherePoint, q: &SpherePoint) -> f64 {
    p.distance(q)
}

/// Angle QPR between the arcs PQ and PR, in [0, pi].
pub fn vertex_angle(p: &SpherePoint, q: &SpherePoint, r: &SpherePoint) -> f64 {
    let pv = p.vector();
    let tq = q.vector() - pv * pv.dot(&q.vector());
    let tr = r.vector() - pv * pv.dot(&r.vector());
    tq.cross(&tr).norm().atan2(tq.dot(&tr))
}

/// Great circle with an orientation, represented by its unit normal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrientedGreatCircle {
    n: Vec3,
}

impl OrientedGreatCircle {
    pub fn from_normal(n: Vec3) -> Result<Self> {
        unit(n)
            .map(|n| OrientedGreatCircle { n })
            .ok_or(Error::DegenerateCircle("zero normal"))
    }

    pub(crate) fn from_unit_normal(n: Vec3) -> Self {
        debug_assert!(n.norm() > 0.5);
        OrientedGreatCircle { n: n.normalize() }
    }

    /// The circle through `p` and `q`, oriented from `p` toward `q` along the
    /// shorter arc.
    pub fn through(p: &SpherePoint, q: &SpherePoint) -> Result<Self> {
        let c = p.vector().cross(&q.vector());
        if c.norm() < tol::COPLANAR {
            return Err(Error::DegenerateCircle("points are equal or antipodal"));
        }
        Ok(OrientedGreatCircle { n: c.normalize() })
    }

    pub fn normal(&self) -> Vec3 {
        self.n
    }

    /// Spherical center on the positive side of the circle.
    pub fn pole(&self) -> SpherePoint {
        SpherePoint { v: self.n }
    }

    pub fn reversed(&self) -> Self {
        OrientedGreatCircle { n: -self.n }
    }

    /// |n · p|, the sine of the distance of `p` from the circle.
    pub fn incidence(&self, p: &SpherePoint) -> f64 {
        self.n.dot(&p.vector()).abs()
    }

    /// Angle between the planes of the two circles, in [0, pi/2].
    pub fn angle(&self, other: &OrientedGreatCircle) -> f64 {
        self.n.cross(&other.n).norm().atan2(self.n.dot(&other.n).abs())
    }

    fn check_distinct_planes(&self, other: &OrientedGreatCircle) -> Result<Vec3> {
        let c = self.n.cross(&other.n);
        if c.norm() < tol::COPLANAR {
            Err(Error::DegenerateCircle("circles span the same plane"))
        } else {
            Ok(c)
        }
    }

    /// The two antipodal intersection points, tie-broken one first.
    pub fn intersection(&self, other: &OrientedGreatCircle) -> Result<(SpherePoint, SpherePoint)> {
        let d = tie_break(self.check_distinct_planes(other)?.normalize());
        Ok((SpherePoint { v: d }, SpherePoint { v: -d }))
    }

    /// Great circle through the poles of both circles. Its spherical centers
    /// are the intersection points of `self` and `other`.
    pub fn common_perpendicular(&self, other: &OrientedGreatCircle) -> Result<Self> {
        let c = self.check_distinct_planes(other)?;
        Ok(OrientedGreatCircle { n: tie_break(c.normalize()) })
    }

    /// Point reached from `start` (assumed on the circle) after travelling
    /// `arc` radians along the orientation.
    pub fn advance(&self, start: &SpherePoint, arc: f64) -> SpherePoint {
        SphericalRotation::about(&self.pole(), arc).apply(start)
    }

    /// Signed arc from `p` to `q`, both on the circle, in (-pi, pi].
    pub fn signed_arc(&self, p: &SpherePoint, q: &SpherePoint) -> f64 {
        let (a, b) = (p.vector(), q.vector());
        a.cross(&b).dot(&self.n).atan2(a.dot(&b))
    }

    /// Difference of the oriented normals.
    pub fn residual(&self, other: &OrientedGreatCircle) -> f64 {
        (self.n - other.n).norm()
    }

    /// Difference of the circles as point sets (orientation ignored).
    pub fn residual_unoriented(&self, other: &OrientedGreatCircle) -> f64 {
        (self.n - other.n).norm().min((self.n + other.n).norm())
    }
}

pub fn great_circle_through(p: &SpherePoint, q: &SpherePoint) -> Result<OrientedGreatCircle> {
    OrientedGreatCircle::through(p, q)
}

pub fn circle_angle(g1: &OrientedGreatCircle, g2: &OrientedGreatCircle) -> f64 {
    g1.angle(g2)
}

pub fn common_perpendicular_circle(
    g1: &OrientedGreatCircle,
    g2: &OrientedGreatCircle,
) -> Result<OrientedGreatCircle> {
    g1.common_perpendicular(g2)
}

/// Bisector of the points `p` and `q`: the great circle in their plane of
/// symmetry, with normal along `q - p`.
pub fn bisector_circle(p: &SpherePoint, q: &SpherePoint) -> Result<OrientedGreatCircle> {
    if p.vector().cross(&q.vector()).norm() < tol::COPLANAR {
        return Err(Error::DegenerateCircle("bisector of equal or antipodal points"));
    }
    Ok(OrientedGreatCircle { n: (q.vector() - p.vector()).normalize() })
}

/// Rotation about a diameter, stored as a unit quaternion
/// `(cos(phi/2); sin(phi/2) * axis)`. `q` and `-q` are the same rotation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphericalRotation {
    q: Quaternion<f64>,
}

impl SphericalRotation {
    pub fn identity() -> Self {
        SphericalRotation { q: Quaternion::identity() }
    }

    /// Counterclockwise rotation through `phi` about `p`, seen from outside.
    pub fn about(p: &SpherePoint, phi: f64) -> Self {
        let (s, c) = (0.5 * phi).sin_cos();
        let a = p.vector() * s;
        SphericalRotation { q: Quaternion::new(c, a.x, a.y, a.z) }
    }

    pub fn half_turn(p: &SpherePoint) -> Self {
        let a = p.vector();
        SphericalRotation { q: Quaternion::new(0.0, a.x, a.y, a.z) }
    }

    pub fn from_quaternion(q: Quaternion<f64>) -> Result<Self> {
        let n = q.norm();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::InvalidArgument("zero quaternion".into()));
        }
        Ok(SphericalRotation { q: q / n })
    }

    pub fn quaternion(&self) -> Quaternion<f64> {
        self.q
    }

    /// `self` after `first`.
    pub fn after(&self, first: &SphericalRotation) -> Self {
        SphericalRotation { q: self.q * first.q }
    }

    pub fn inverse(&self) -> Self {
        SphericalRotation { q: self.q.conjugate() }
    }

    pub fn rotate_vector(&self, v: &Vec3) -> Vec3 {
        let p = Quaternion::from_imag(*v);
        (self.q * p * self.q.conjugate()).imag()
    }

    pub fn apply<T: Rotate>(&self, x: &T) -> T {
        x.rotated(self)
    }

    pub fn is_half_turn(&self) -> bool {
        self.q.w.abs() < tol::UNIT
    }

    /// Quaternion distance up to sign.
    pub fn distance(&self, other: &SphericalRotation) -> f64 {
        (self.q - other.q).norm().min((self.q + other.q).norm())
    }

    /// Axis and angle in [0, pi]; `None` for the identity.
    pub fn axis_angle(&self) -> Option<(SpherePoint, f64)> {
        let q = if self.q.w < 0.0 { -self.q } else { self.q };
        let v = q.imag();
        let s = v.norm();
        if s < tol::UNIT {
            return None;
        }
        Some((SpherePoint { v: v / s }, 2.0 * s.atan2(q.w)))
    }
}

pub fn rotation_about(p: &SpherePoint, phi: f64) -> SphericalRotation {
    SphericalRotation::about(p, phi)
}

/// `r2 r1`: first `r1`, then `r2`.
pub fn compose(r2: &SphericalRotation, r1: &SphericalRotation) -> SphericalRotation {
    r2.after(r1)
}

pub fn inverse(r: &SphericalRotation) -> SphericalRotation {
    r.inverse()
}

pub fn apply<T: Rotate>(r: &SphericalRotation, x: &T) -> T {
    x.rotated(r)
}

/// Objects a [`SphericalRotation`] acts on.
pub trait Rotate: Sized {
    fn rotated(&self, r: &SphericalRotation) -> Self;
}

impl Rotate for Vec3 {
    fn rotated(&self, r: &SphericalRotation) -> Self {
        r.rotate_vector(self)
    }
}

impl Rotate for SpherePoint {
    fn rotated(&self, r: &SphericalRotation) -> Self {
        SpherePoint::from_unit(r.rotate_vector(&self.v))
    }
}

impl Rotate for OrientedGreatCircle {
    fn rotated(&self, r: &SphericalRotation) -> Self {
        OrientedGreatCircle::from_unit_normal(r.rotate_vector(&self.n))
    }
}

/// Objects that can be mirrored in the plane of a great circle.
pub trait Reflect: Sized {
    fn reflected_in(&self, s: &OrientedGreatCircle) -> Self;
}

fn mirror(v: &Vec3, n: &Vec3) -> Vec3 {
    v - n * (2.0 * v.dot(n))
}

impl Reflect for SpherePoint {
    fn reflected_in(&self, s: &OrientedGreatCircle) -> Self {
        SpherePoint::from_unit(mirror(&self.v, &s.n))
    }
}

impl Reflect for OrientedGreatCircle {
    // The plane reflection has determinant -1, so the image normal picks up a
    // sign flip on top of the mirrored vector.
    fn reflected_in(&self, s: &OrientedGreatCircle) -> Self {
        OrientedGreatCircle::from_unit_normal(-mirror(&self.n, &s.n))
    }
}

pub fn reflect_in_circle<T: Reflect>(s: &OrientedGreatCircle, x: &T) -> T {
    x.reflected_in(s)
}

/// Result of the symmetry-center construction for two oriented circles.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymmetryCenters {
    /// Tie-broken center; the half-turn about it maps the first circle onto
    /// the second with orientation.
    pub center: SpherePoint,
    pub antipode: SpherePoint,
    /// Great circle with spherical centers `center` and `antipode`. The
    /// reflection in it also exchanges the two oriented circles.
    pub mirror: OrientedGreatCircle,
}

impl SymmetryCenters {
    pub fn half_turn(&self) -> SphericalRotation {
        SphericalRotation::half_turn(&self.center)
    }
}

/// Centers of the half-turn that maps oriented `g1` onto oriented `g2`.
///
/// The axis is perpendicular to the line where the two planes meet and lies
/// in a bisecting plane; of the two bisecting directions, `n1 + n2` is the one
/// that carries `n1` to `n2`.
pub fn symmetry_centers(g1: &OrientedGreatCircle, g2: &OrientedGreatCircle) -> Result<SymmetryCenters> {
    g1.check_distinct_planes(g2)?;
    let s = tie_break((g1.n + g2.n).normalize());
    Ok(SymmetryCenters {
        center: SpherePoint { v: s },
        antipode: SpherePoint { v: -s },
        mirror: OrientedGreatCircle { n: s },
    })
}
