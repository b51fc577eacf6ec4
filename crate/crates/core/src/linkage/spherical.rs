//! Bennett's spherical 8-bar: six spherical isograms on the faces of a cube.
//!
//! Isograms 1-3 share the carrier `g0` and are driven by the arm angles at
//! `R01`, `R02`, `R03`. Their half-turns `σ1, σ2, σ3` place the bars
//! `g3, g1, g2`; the half-turns `σ4, σ5, σ6` of the remaining cells then all
//! agree on the last bar `h0`.


use crate::error::{Error, Result};
use crate::isogram::coupled_angle;
use crate::sphere_geom::{
    rotation_about, symmetry_centers, OrientedGreatCircle, Reflect, SpherePoint, SphericalRotation, Vec3,
};
use crate::tol;

use super::report::{max_of, Family, Report};
use super::spec::{validate_spec, Design, EightBarSpec};
use super::topology::{Bar, JointId, CELLS, JOINTS};

/// Arm-angle offsets `γ_i`: in the aligned pose `R_ij` sits at `u_j - γ_i`.
pub(crate) fn gamma(design_beta: &[f64; 3], i: u8) -> f64 {
    match i {
        0 => 0.0,
        1 => design_beta[1],
        2 => design_beta[2],
        _ => design_beta[0],
    }
}

pub(crate) fn carrier_point(u: f64) -> Vec3 {
    Vec3::new(u.cos(), u.sin(), 0.0)
}

/// Arm angles `[phi1, phi2, phi3]` at the three base joints.
pub(crate) fn arm_angles(design: &Design, phi1: f64) -> [f64; 3] {
    [phi1, coupled_angle(design.c21, phi1), coupled_angle(design.c31, phi1)]
}

/// Candidate reference angles for measuring body dimensions; the first at
/// which the linkage is regular is used.
pub(crate) const REFERENCE_ANGLES: [f64; 4] = [1.0, 0.5, 2.0, -1.3];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphericalSymmetry {
    pub centers: [SpherePoint; 6],
    /// Whether each cell is crossed, see [`crate::isogram::IsogramSymmetry`].
    pub crossed: [bool; 6],
    /// Great circle through all six centers, with pole `pole`.
    pub n: OrientedGreatCircle,
    pub pole: SpherePoint,
    /// Orthogonal great circles through `pole`; `t1` bisects `S1` and `S4`.
    pub t1: OrientedGreatCircle,
    pub t2: OrientedGreatCircle,
}

impl SphericalSymmetry {
    pub fn half_turns(&self) -> [SphericalRotation; 6] {
        self.centers.map(|s| SphericalRotation::half_turn(&s))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EightBarPose {
    pub phi: [f64; 3],
    pub g: [OrientedGreatCircle; 4],
    pub h: [OrientedGreatCircle; 4],
    /// Indexed by [`JointId::index`].
    pub joints: [SpherePoint; 12],
    /// Absent in the aligned and flipped poses where all bars coincide.
    pub symmetry: Option<SphericalSymmetry>,
}

impl EightBarPose {
    pub fn joint(&self, id: JointId) -> SpherePoint {
        self.joints[id.index()]
    }

    pub fn bar(&self, bar: Bar) -> OrientedGreatCircle {
        match bar {
            Bar::G(i) => self.g[i as usize],
            Bar::H(j) => self.h[j as usize],
        }
    }

    pub fn is_collapsed(&self) -> bool {
        self.symmetry.is_none()
    }

    /// Largest distance of a joint from the plane of either of its bars.
    pub fn incidence_residual(&self) -> f64 {
        max_of(JOINTS.iter().flat_map(|&id| {
            let p = self.joint(id);
            [self.g[id.g as usize].incidence(&p), self.h[id.h as usize].incidence(&p)]
        }))
    }

    /// Per cell: deviation of the vertex swap by the cell half-turn, up to a
    /// common sign, and whether the sign is negative.
    pub fn cell_swaps(&self) -> Option<[(f64, bool); 6]> {
        let sym = self.symmetry.as_ref()?;
        let ht = sym.half_turns();
        Some(std::array::from_fn(|k| {
            let v = CELLS[k].map(|id| self.joint(id).vector());
            let img = v.map(|p| ht[k].rotate_vector(&p));
            let dev = |s: f64| {
                max_of((0..4).map(|m| (img[m] - v[(m + 2) % 4] * s).norm()))
            };
            let (plus, minus) = (dev(1.0), dev(-1.0));
            if plus <= minus {
                (plus, false)
            } else {
                (minus, true)
            }
        }))
    }
}

/// Signed arcs along the emergent bars fixed by a reference pose.
#[derive(Clone, Copy, Debug, PartialEq)]
struct BodyArcs {
    /// Arc on `g_i` from `R_ik` to `R_i0`, `k` the first index other than
    /// 0 and `i`.
    g: [f64; 3],
}

fn first_other(i: u8) -> u8 {
    (1..4).find(|&k| k != i).unwrap()
}

/// A validated spherical design, ready to be posed.
#[derive(Clone, Debug, PartialEq)]
pub struct SphericalEightBar {
    pub design: Design,
    arcs: BodyArcs,
}

impl SphericalEightBar {
    pub fn new(spec: &EightBarSpec) -> Result<Self> {
        Self::from_design(validate_spec(spec)?)
    }

    pub fn from_design(design: Design) -> Result<Self> {
        let mut last = Error::CollapsedPose("no regular reference pose");
        for &phi in &REFERENCE_ANGLES {
            match assemble_regular(&design, phi, None) {
                Ok(Some(pose)) => {
                    let g = std::array::from_fn(|m| {
                        let i = m as u8 + 1;
                        let from = pose.joint(JointId { g: i, h: first_other(i) });
                        let to = pose.joint(JointId { g: i, h: 0 });
                        pose.g[i as usize].signed_arc(&from, &to)
                    });
                    return Ok(SphericalEightBar { design, arcs: BodyArcs { g } });
                }
                Ok(None) => {}
                Err(e) => last = e,
            }
        }
        Err(last)
    }

    pub fn assemble(&self, phi1: f64) -> Result<EightBarPose> {
        match assemble_regular(&self.design, phi1, Some(&self.arcs))? {
            Some(pose) => Ok(pose),
            None => Ok(self.assemble_collapsed(phi1)),
        }
    }

    /// All bars on `g0`. Base-side joints follow from the arm angles (0 or
    /// pi); the joints of `h0` are placed with the arcs of the reference
    /// pose, since the bars are rigid.
    fn assemble_collapsed(&self, phi1: f64) -> EightBarPose {
        let d = &self.design;
        let phi = arm_angles(d, phi1);
        let g0 = OrientedGreatCircle::from_unit_normal(Vec3::z());
        let flipped = phi.map(|p| p.cos() < 0.0);
        let mut x = [0.0; 12];
        for id in JOINTS.iter().filter(|id| id.h != 0) {
            let (u, gm) = (d.u[id.h as usize - 1], gamma(&d.beta, id.g));
            x[id.index()] = if flipped[id.h as usize - 1] { u + gm } else { u - gm };
        }
        for i in 1..4u8 {
            let from = JointId { g: i, h: first_other(i) };
            x[JointId { g: i, h: 0 }.index()] = x[from.index()] + self.arcs.g[i as usize - 1];
        }
        let h: [OrientedGreatCircle; 4] = std::array::from_fn(|j| {
            let k = if j == 0 { 0 } else { j - 1 };
            rotation_about(&SpherePoint::from_unit(carrier_point(d.u[k])), phi[k]).apply(&g0)
        });
        EightBarPose {
            phi,
            g: [g0; 4],
            h,
            joints: x.map(|t| SpherePoint::from_unit(carrier_point(t))),
            symmetry: None,
        }
    }
}

/// Assembles the pose, or `None` if it is collapsed.
///
/// With known body arcs the joints of `h0` are placed along the rigid bars
/// `g1..g3`: near the aligned pose the second-level centers `S4..S6` come
/// from nearly coincident circles and lose about `eps / phi^2`.
fn assemble_regular(d: &Design, phi1: f64, arcs: Option<&BodyArcs>) -> Result<Option<EightBarPose>> {
    let phi = arm_angles(d, phi1);
    let g0 = OrientedGreatCircle::from_unit_normal(Vec3::z());
    let base = d.u.map(|u| SpherePoint::from_unit(carrier_point(u)));
    let rot: [SphericalRotation; 3] = std::array::from_fn(|k| rotation_about(&base[k], phi[k]));
    let h123: [OrientedGreatCircle; 3] = std::array::from_fn(|k| rot[k].apply(&g0));
    let spread = h123.iter().map(|h| h.normal().cross(&g0.normal()).norm()).fold(f64::MAX, f64::min);
    if spread < tol::COPLANAR {
        return Ok(None);
    }
    let arm = |k: usize, beta: f64| rot[k].apply(&SpherePoint::from_unit(carrier_point(d.u[k] - beta)));
    let [b1, b2, b3] = d.beta;

    let c1 = symmetry_centers(&h123[0], &h123[1].reversed())?;
    let c2 = symmetry_centers(&h123[1], &h123[2].reversed())?;
    let c3 = symmetry_centers(&h123[2], &h123[0].reversed())?;
    let g1 = c2.half_turn().apply(&g0).reversed();
    let g2 = c3.half_turn().apply(&g0).reversed();
    let g3 = c1.half_turn().apply(&g0).reversed();
    let (c4, c5, c6) = match (
        symmetry_centers(&g1, &g2.reversed()),
        symmetry_centers(&g2, &g3.reversed()),
        symmetry_centers(&g3, &g1.reversed()),
    ) {
        (Ok(a), Ok(b), Ok(c)) => (a, b, c),
        _ => return Ok(None),
    };
    let mut h0 = c4.half_turn().apply(&h123[2]).reversed();

    let mut joints = [base[0]; 12];
    let mut set = |g: u8, h: u8, p: SpherePoint| joints[JointId { g, h }.index()] = p;
    set(0, 1, base[0]);
    set(0, 2, base[1]);
    set(0, 3, base[2]);
    let (r31, r21) = (arm(0, b1), arm(0, b3));
    let (r32, r12) = (arm(1, b1), arm(1, b2));
    let (r13, r23) = (arm(2, b2), arm(2, b3));
    set(3, 1, r31);
    set(2, 1, r21);
    set(3, 2, r32);
    set(1, 2, r12);
    set(1, 3, r13);
    set(2, 3, r23);
    let gs = [g0, g1, g2, g3];
    let placed = match arcs {
        Some(arcs) => {
            let r: [SpherePoint; 3] = std::array::from_fn(|m| {
                let i = m as u8 + 1;
                gs[i as usize].advance(&joints[JointId { g: i, h: first_other(i) }.index()], arcs.g[m])
            });
            let through = OrientedGreatCircle::through(&r[0], &r[1])?;
            h0 = if through.normal().dot(&h0.normal()) < 0.0 { through.reversed() } else { through };
            r
        }
        None => {
            let (r10, r20) = (c4.half_turn().apply(&r23), c4.half_turn().apply(&r13));
            // R30 and -R30 are both on g3 and h0; take the one for which
            // cell 5 swaps with a single sign, as cell 4 fixed R20
            let r30 = c5.half_turn().apply(&r21);
            let flip = c5.half_turn().apply(&r31).vector().dot(&r20.vector()) < 0.0;
            [r10, r20, if flip { r30.antipode() } else { r30 }]
        }
    };
    for (m, p) in placed.into_iter().enumerate() {
        joints[JointId { g: m as u8 + 1, h: 0 }.index()] = p;
    }

    let centers = [c1, c2, c3, c4, c5, c6].map(|c| c.center);
    let (n, pole, t1, t2) = symmetry_circles(&centers)?;
    let mut pose = EightBarPose {
        phi,
        g: gs,
        h: [h0, h123[0], h123[1], h123[2]],
        joints,
        symmetry: Some(SphericalSymmetry { centers, crossed: [false; 6], n, pole, t1, t2 }),
    };
    let swaps = pose.cell_swaps().expect("symmetry present");
    if let Some(sym) = pose.symmetry.as_mut() {
        sym.crossed = swaps.map(|(_, c)| c);
    }
    let loose = max_of(swaps[3..].iter().map(|(r, _)| *r));
    let res = pose.incidence_residual().max(max_of(swaps[..3].iter().map(|(r, _)| *r)));
    if res > tol::CLOSURE.max(1e-15 / spread) || loose > tol::CLOSURE.max(1e-15 / (spread * spread)) {
        return Err(Error::closure("spherical 8-bar", res.max(loose)));
    }
    Ok(Some(pose))
}

/// The circle `n` through the centers, its pole and the bisecting circles.
fn symmetry_circles(
    s: &[SpherePoint; 6],
) -> Result<(OrientedGreatCircle, SpherePoint, OrientedGreatCircle, OrientedGreatCircle)> {
    let mut best = Vec3::zeros();
    for a in 0..6 {
        for b in a + 1..6 {
            let c = s[a].vector().cross(&s[b].vector());
            if c.norm() > best.norm() {
                best = c;
            }
        }
    }
    if best.norm() < tol::COPLANAR {
        return Err(Error::CollapsedPose("symmetry centers coincide"));
    }
    let nn = crate::sphere_geom::tie_break(best.normalize());
    let n = OrientedGreatCircle::from_unit_normal(nn);
    let (s1, s4) = (s[0].vector(), s[3].vector());
    let v1 = nn.cross(&(s1 + s4));
    let v2 = nn.cross(&(s1 - s4));
    let (t1n, t2n) = if v1.norm() >= v2.norm() {
        let t1n = v1.normalize();
        let t2 = nn.cross(&t1n);
        (t1n, if t2.dot(&v2) < 0.0 { -t2 } else { t2 })
    } else {
        let t2n = v2.normalize();
        let t1 = t2n.cross(&nn);
        (if t1.dot(&v1) < 0.0 { -t1 } else { t1 }, t2n)
    };
    Ok((
        n,
        SpherePoint::from_unit(nn),
        OrientedGreatCircle::from_unit_normal(t1n),
        OrientedGreatCircle::from_unit_normal(t2n),
    ))
}

pub fn assemble_spherical(spec: &EightBarSpec, phi1: f64) -> Result<EightBarPose> {
    SphericalEightBar::new(spec)?.assemble(phi1)
}

fn meet_n(pole: &Vec3, c: &OrientedGreatCircle) -> Option<SpherePoint> {
    let v = pole.cross(&c.normal());
    (v.norm() > tol::COPLANAR).then(|| SpherePoint::from_unit(v.normalize()))
}

fn axis_of(r: &SphericalRotation) -> Option<Vec3> {
    r.axis_angle().map(|(a, _)| a.vector())
}

/// Residuals of the half-turn identities and symmetry statements of the
/// spherical 8-bar at one pose.
pub fn halfturn_products_report(pose: &EightBarPose) -> Result<Report> {
    let sym = pose.symmetry.as_ref().ok_or(Error::CollapsedPose("aligned pose has no symmetry centers"))?;
    let s = sym.half_turns();
    let c = |a: &SphericalRotation, b: &SphericalRotation| a.after(b);
    let (g, h) = (&pose.g, &pose.h);
    let nn = sym.pole.vector();
    let mut r = Report::default();

    r.push(Family::Incidence, "joint incidence", pose.incidence_residual());
    r.push(Family::Incidence, "cell half-turn swap", max_of(pose.cell_swaps().unwrap().map(|(x, _)| x)));

    let tau321 = c(&s[2], &c(&s[1], &s[0]));
    let s123 = sym.centers[..3].iter().map(|p| p.vector()).collect::<Vec<_>>();
    let p12 = s123[0].cross(&s123[1]);
    let p = if p12.norm() > tol::COPLANAR { p12.normalize() } else { nn };
    r.push(Family::Triple, "S1 S2 S3 on one great circle", s123[2].dot(&p).abs());
    r.push(Family::Triple, "tau321 involutive", tau321.distance(&tau321.inverse()));
    r.push(Family::Triple, "tau321 half-turn", tau321.quaternion().w.abs());
    r.push(Family::Triple, "tau321 axis in plane of h1", axis_of(&tau321).map_or(f64::NAN, |a| a.dot(&h[1].normal()).abs()));
    r.push(Family::Triple, "tau321 reverses h1", tau321.apply(&h[1]).residual(&h[1].reversed()));

    r.push(Family::Operators, "s3 s2 s1 s3 = s1 s2", c(&c(&s[2], &c(&s[1], &s[0])), &s[2]).distance(&c(&s[0], &s[1])));
    r.push(Family::Operators, "s4 s2 = s5 s1", c(&s[3], &s[1]).distance(&c(&s[4], &s[0])));
    r.push(Family::Operators, "s6 s2 = s5 s3", c(&s[5], &s[1]).distance(&c(&s[4], &s[2])));
    r.push(Family::Operators, "s6 s1 = s4 s3", c(&s[5], &s[0]).distance(&c(&s[3], &s[2])));
    r.push(Family::Operators, "h0 agrees across cells 4-6", max_of([
        s[4].apply(&h[1]).reversed().residual(&h[0]),
        s[5].apply(&h[2]).reversed().residual(&h[0]),
    ]));
    let table = [(c(&s[5], &s[0]), 1), (c(&s[3], &s[1]), 2), (c(&s[4], &s[2]), 3)];
    let mut table_res = Vec::new();
    let mut table_axis = Vec::new();
    for (rho, i) in &table {
        table_res.push(rho.apply(&g[0]).residual(&g[*i]));
        table_res.push(rho.apply(&h[*i]).residual(&h[0]));
        table_axis.push(axis_of(rho).map_or(0.0, |a| a.cross(&nn).norm()));
    }
    r.push(Family::Operators, "rotation table g0->gi, hi->h0", max_of(table_res));
    r.push(Family::Operators, "rotation axes through N", max_of(table_axis));
    let meets = (0..4).filter_map(|i| {
        let (x, y) = (meet_n(&nn, &g[i])?, meet_n(&nn, &h[i])?);
        Some(x.reflected_in(&sym.t1).residual_up_to_antipode(&y))
    });
    r.push(Family::Operators, "n-g and n-h meets symmetric in t1", max_of(meets));

    r.push(Family::SymmetryCircle, "S1..S6 on great circle n", max_of(sym.centers.iter().map(|p| p.vector().dot(&nn).abs())));
    let pairs = |t: &OrientedGreatCircle| max_of((0..3).map(|k| sym.centers[k].reflected_in(t).residual_up_to_antipode(&sym.centers[k + 3])));
    r.push(Family::SymmetryCircle, "t1 swaps (S1,S4) (S2,S5) (S3,S6)", pairs(&sym.t1));
    r.push(Family::SymmetryCircle, "t2 swaps (S1,S4) (S2,S5) (S3,S6)", pairs(&sym.t2));
    let tau654 = c(&s[5], &c(&s[4], &s[3]));
    r.push(Family::SymmetryCircle, "tau654 half-turn", tau654.quaternion().w.abs());
    r.push(Family::SymmetryCircle, "tau654 reverses g1", tau654.apply(&g[1]).residual(&g[1].reversed()));
    let axes_sym = match (axis_of(&tau321), axis_of(&tau654)) {
        (Some(a), Some(b)) => SpherePoint::from_unit(a).reflected_in(&sym.t1).residual_up_to_antipode(&SpherePoint::from_unit(b)),
        _ => f64::NAN,
    };
    r.push(Family::SymmetryCircle, "tau654 axis mirrors tau321 axis in t1", axes_sym);
    let dists = [JointId { g: 1, h: 0 }, JointId { g: 0, h: 1 }, JointId { g: 2, h: 3 }, JointId { g: 3, h: 2 }]
        .map(|id| pose.joint(id).vector().dot(&nn).abs());
    let spread = dists.iter().cloned().fold(f64::MIN, f64::max) - dists.iter().cloned().fold(f64::MAX, f64::min);
    r.push(Family::SymmetryCircle, "R10 R01 R23 R32 equidistant from n", spread);
    Ok(r)
}

/// Aligned-pose check: every bar on `g0` and every joint on it.
pub fn collapse_residual(pose: &EightBarPose) -> f64 {
    let g0 = OrientedGreatCircle::from_unit_normal(Vec3::z());
    let bars = pose.g.iter().chain(pose.h.iter()).map(|c| c.residual_unoriented(&g0));
    let joints = pose.joints.iter().map(|p| g0.incidence(p));
    max_of(bars.chain(joints))
}
