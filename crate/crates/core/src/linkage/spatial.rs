//! The spatial 8-bar: six Bennett isograms whose spherical image is the
//! spherical 8-bar of the same angular design.
//!
//! Bars and hinges are lines. `g0` is the z axis; the base hinges `I01`,
//! `I02`, `I03` meet it orthogonally at heights `z` with directions on the
//! equator at `u1, u2, u3`. Line reflections in the axes `s1..s6` take the
//! place of the half-turns.

use crate::dual::Dual;
use crate::error::{Error, Result};
use crate::screw_geom::{
    common_perpendicular, line_reflection, screw_axis, signed_dual_angle, tie_broken, Displacement, OrientedLine,
    Point,
};
use crate::sphere_geom::Vec3;
use crate::tol;

use super::report::{max_of, Family, Report};
use super::spec::{validate_spatial_spec, SpatialDesign, SpatialEightBarSpec};
use super::spherical::{arm_angles, carrier_point, EightBarPose, SphericalEightBar, REFERENCE_ANGLES};
use super::topology::{JointId, CELLS, JOINTS};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpatialSymmetry {
    /// Axes of the line reflections of cells 1-6.
    pub axes: [OrientedLine; 6],
    /// Common perpendicular of the six axes.
    pub n: OrientedLine,
    /// Meets `n` orthogonally; its reflection swaps `s1 <-> s4`,
    /// `s2 <-> s5`, `s3 <-> s6`.
    pub t: OrientedLine,
}

impl SpatialSymmetry {
    pub fn reflections(&self) -> [Displacement; 6] {
        self.axes.map(|s| line_reflection(&s))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpatialEightBarPose {
    pub phi: [f64; 3],
    pub g: [OrientedLine; 4],
    pub h: [OrientedLine; 4],
    /// Indexed by [`JointId::index`]; `I_ij` is the common perpendicular of
    /// `g_i` and `h_j`.
    pub hinges: [OrientedLine; 12],
    pub symmetry: Option<SpatialSymmetry>,
}

impl SpatialEightBarPose {
    pub fn hinge(&self, id: JointId) -> OrientedLine {
        self.hinges[id.index()]
    }

    pub fn is_collapsed(&self) -> bool {
        self.symmetry.is_none()
    }

    /// Largest failure of a hinge to meet both of its bars orthogonally.
    pub fn incidence_residual(&self) -> f64 {
        max_of(JOINTS.iter().flat_map(|&id| {
            let l = self.hinge(id);
            [l.orthogonal_meet_residual(&self.g[id.g as usize]), l.orthogonal_meet_residual(&self.h[id.h as usize])]
        }))
    }

    /// Per cell: deviation of the hinge swap by the cell's line reflection,
    /// hinge orientation ignored.
    pub fn cell_swaps(&self) -> Option<[f64; 6]> {
        let refl = self.symmetry.as_ref()?.reflections();
        Some(std::array::from_fn(|k| {
            let v = CELLS[k].map(|id| self.hinge(id));
            max_of((0..4).map(|m| refl[k].apply(&v[m]).residual_unoriented(&v[(m + 2) % 4])))
        }))
    }

    /// Per cell: relative failure of `a sin(beta) = b sin(alpha)` for two
    /// adjacent sides, twists and offsets taken unsigned.
    pub fn bennett_proportions(&self) -> [f64; 6] {
        std::array::from_fn(|k| {
            let v = CELLS[k].map(|id| self.hinge(id));
            let side = |m: usize| match common_perpendicular(&v[m], &v[(m + 1) % 4]) {
                Ok(cp) => (cp.angle.sin(), cp.distance),
                Err(_) => (0.0, 0.0),
            };
            let ((sa, a), (sb, b)) = (side(0), side(1));
            (a * sb - b * sa).abs() / a.max(b).max(1.0)
        })
    }
}

/// A validated spatial design, ready to be posed.
#[derive(Clone, Debug, PartialEq)]
pub struct SpatialEightBar {
    pub design: SpatialDesign,
    pub spherical: SphericalEightBar,
    /// Dual arc on `g_i` from `I_ik` to `I_i0`, `k` the first index other
    /// than 0 and `i`.
    arcs: [Dual; 3],
}

fn first_other(i: u8) -> u8 {
    (1..4).find(|&k| k != i).unwrap()
}

pub(crate) fn base_line() -> OrientedLine {
    OrientedLine::through(&Point::zeros(), &Vec3::z()).expect("unit direction")
}

impl SpatialEightBar {
    pub fn new(spec: &SpatialEightBarSpec) -> Result<Self> {
        Self::from_design(validate_spatial_spec(spec)?)
    }

    pub fn from_design(design: SpatialDesign) -> Result<Self> {
        let spherical = SphericalEightBar::from_design(design.design)?;
        let mut last = Error::CollapsedPose("no regular reference pose");
        for &phi in &REFERENCE_ANGLES {
            match assemble_regular(&design, phi, None) {
                Ok(Some(pose)) => {
                    let arcs = std::array::from_fn(|m| {
                        let i = m as u8 + 1;
                        let from = pose.hinge(JointId { g: i, h: first_other(i) });
                        let to = pose.hinge(JointId { g: i, h: 0 });
                        signed_dual_angle(&from, &to, &pose.g[i as usize])
                    });
                    return Ok(SpatialEightBar { design, spherical, arcs });
                }
                Ok(None) => {}
                Err(e) => last = e,
            }
        }
        Err(last)
    }

    pub fn assemble(&self, phi1: f64) -> Result<SpatialEightBarPose> {
        match assemble_regular(&self.design, phi1, Some(&self.arcs))? {
            Some(pose) => Ok(pose),
            None => Ok(self.assemble_collapsed(phi1)),
        }
    }

    /// Spherical pose of the same angular design.
    pub fn image(&self, phi1: f64) -> Result<EightBarPose> {
        self.spherical.assemble(phi1)
    }

    /// All bars on `g0`; the base-side hinges follow from the arm
    /// formulas and the hinges of `h0` from the body arcs.
    fn assemble_collapsed(&self, phi1: f64) -> SpatialEightBarPose {
        let (phi, g0, h, mut hinges) = base_side(&self.design, phi1);
        for i in 1..4u8 {
            let from = hinges[JointId { g: i, h: first_other(i) }.index()];
            let a = self.arcs[i as usize - 1];
            hinges[JointId { g: i, h: 0 }.index()] = Displacement::screw(&g0, a.re, a.du).apply(&from);
        }
        SpatialEightBarPose { phi, g: [g0; 4], h: [h[0], h[0], h[1], h[2]], hinges, symmetry: None }
    }
}

/// Arm angles, `g0`, `h1..h3` and every hinge off `h0`.
fn base_side(d: &SpatialDesign, phi1: f64) -> ([f64; 3], OrientedLine, [OrientedLine; 3], [OrientedLine; 12]) {
    let sd = &d.design;
    let phi = arm_angles(sd, phi1);
    let g0 = base_line();
    let base: [OrientedLine; 3] = std::array::from_fn(|k| {
        OrientedLine::through(&Point::new(0.0, 0.0, d.z[k]), &carrier_point(sd.u[k])).expect("unit direction")
    });
    let h: [OrientedLine; 3] = std::array::from_fn(|k| Displacement::screw(&base[k], phi[k], 0.0).apply(&g0));
    let arm = |k: usize, m: usize| Displacement::screw(&h[k], -sd.beta[m], -d.b[m]).apply(&base[k]);
    let mut hinges = [g0; 12];
    let mut set = |g: u8, hh: u8, l: OrientedLine| hinges[JointId { g, h: hh }.index()] = l;
    set(0, 1, base[0]);
    set(0, 2, base[1]);
    set(0, 3, base[2]);
    set(3, 1, arm(0, 0));
    set(2, 1, arm(0, 2));
    set(3, 2, arm(1, 0));
    set(1, 2, arm(1, 1));
    set(1, 3, arm(2, 1));
    set(2, 3, arm(2, 2));
    (phi, g0, h, hinges)
}

/// Axis of the line reflection taking `l1` to `l2`, without verification.
fn reflection_axis(l1: &OrientedLine, l2: &OrientedLine) -> Option<OrientedLine> {
    let cp = common_perpendicular(l1, l2).ok()?;
    let mid = (cp.foot1 + cp.foot2) * 0.5;
    OrientedLine::through(&mid, &(l1.direction() + l2.direction())).ok()
}

fn assemble_regular(d: &SpatialDesign, phi1: f64, arcs: Option<&[Dual; 3]>) -> Result<Option<SpatialEightBarPose>> {
    let (phi, g0, h, mut hinges) = base_side(d, phi1);
    let spread = h.iter().map(|l| l.direction().cross(&g0.direction()).norm()).fold(f64::MAX, f64::min);
    if spread < tol::COPLANAR {
        return Ok(None);
    }
    let axes1 = (
        reflection_axis(&h[0], &h[1].reversed()),
        reflection_axis(&h[1], &h[2].reversed()),
        reflection_axis(&h[2], &h[0].reversed()),
    );
    let (Some(s1), Some(s2), Some(s3)) = axes1 else { return Ok(None) };
    let g1 = line_reflection(&s2).apply(&g0).reversed();
    let g2 = line_reflection(&s3).apply(&g0).reversed();
    let g3 = line_reflection(&s1).apply(&g0).reversed();
    let axes2 = (
        reflection_axis(&g1, &g2.reversed()),
        reflection_axis(&g2, &g3.reversed()),
        reflection_axis(&g3, &g1.reversed()),
    );
    let (Some(s4), Some(s5), Some(s6)) = axes2 else { return Ok(None) };
    let mut h0 = line_reflection(&s4).apply(&h[2]).reversed();
    let gs = [g0, g1, g2, g3];
    let id = |g: u8, h: u8| JointId { g, h }.index();
    let placed = match arcs {
        Some(arcs) => {
            let r: [OrientedLine; 3] = std::array::from_fn(|m| {
                let i = m as u8 + 1;
                let a = arcs[m];
                Displacement::screw(&gs[i as usize], a.re, a.du).apply(&hinges[id(i, first_other(i))])
            });
            let cp = common_perpendicular(&r[0], &r[1])?.axis;
            h0 = if cp.direction().dot(&h0.direction()) < 0.0 { cp.reversed() } else { cp };
            r
        }
        None => {
            let r20 = line_reflection(&s4).apply(&hinges[id(1, 3)]);
            // orient I30 like the spherical R30
            let r30 = line_reflection(&s5).apply(&hinges[id(2, 1)]);
            let flip = line_reflection(&s5).apply(&hinges[id(3, 1)]).direction().dot(&r20.direction()) < 0.0;
            [line_reflection(&s4).apply(&hinges[id(2, 3)]), r20, if flip { r30.reversed() } else { r30 }]
        }
    };
    for (m, l) in placed.into_iter().enumerate() {
        hinges[id(m as u8 + 1, 0)] = l;
    }
    let axes = [s1, s2, s3, s4, s5, s6];
    let (n, t) = symmetry_lines(&axes)?;
    let pose = SpatialEightBarPose {
        phi,
        g: gs,
        h: [h0, h[0], h[1], h[2]],
        hinges,
        symmetry: Some(SpatialSymmetry { axes, n, t }),
    };
    let swaps = pose.cell_swaps().expect("symmetry present");
    let res = pose.incidence_residual().max(max_of(swaps[..3].iter().copied()));
    let loose = max_of(swaps[3..].iter().copied());
    if res > tol::CLOSURE.max(1e-15 / spread) || loose > tol::CLOSURE.max(1e-15 / (spread * spread)) {
        return Err(Error::closure("spatial 8-bar", res.max(loose)));
    }
    Ok(Some(pose))
}

/// Common perpendicular `n` of the axes and the symmetry axis `t`.
fn symmetry_lines(s: &[OrientedLine; 6]) -> Result<(OrientedLine, OrientedLine)> {
    let mut best = (0, 1, 0.0);
    for a in 0..6 {
        for b in a + 1..6 {
            let c = s[a].direction().cross(&s[b].direction()).norm();
            if c > best.2 {
                best = (a, b, c);
            }
        }
    }
    if best.2 < tol::COPLANAR {
        return Err(Error::CollapsedPose("symmetry axes are parallel"));
    }
    let n = tie_broken(&common_perpendicular(&s[best.0], &s[best.1])?.axis);
    // t bisects s1 and s4 through their common perpendicular; of the two
    // bisectors keep the one that also swaps s2 and s5
    let cp = common_perpendicular(&s[0], &s[3]).ok();
    let mid = match &cp {
        Some(cp) => (cp.foot1 + cp.foot2) * 0.5,
        None => n.point_at(n.parameter_of(&s[0].point())),
    };
    let (d1, d4) = (s[0].direction(), s[3].direction());
    let score = |t: &OrientedLine| {
        let r = line_reflection(t);
        max_of((0..3).map(|k| r.apply(&s[k]).residual_unoriented(&s[k + 3])))
    };
    let candidates = [d1 + d4, d1 - d4]
        .into_iter()
        .filter(|v| v.norm() > tol::COPLANAR)
        .filter_map(|v| OrientedLine::through(&mid, &v).ok())
        .map(|t| tie_broken(&t));
    let t = candidates
        .min_by(|a, b| score(a).total_cmp(&score(b)))
        .ok_or(Error::CollapsedPose("symmetry axes coincide"))?;
    Ok((n, t))
}

pub fn assemble_spatial(spec: &SpatialEightBarSpec, phi1: f64) -> Result<SpatialEightBarPose> {
    SpatialEightBar::new(spec)?.assemble(phi1)
}

/// Folded dual angle of `l` to `n`: angle in [0, pi/2] and distance.
fn dual_angle_to(n: &OrientedLine, l: &OrientedLine) -> (f64, f64) {
    match common_perpendicular(n, l) {
        Ok(cp) => (cp.angle.min(std::f64::consts::PI - cp.angle), cp.distance),
        Err(_) => (0.0, l.distance_to_point(&n.point())),
    }
}

fn spread(xs: impl IntoIterator<Item = f64>) -> f64 {
    let v: Vec<f64> = xs.into_iter().collect();
    v.iter().cloned().fold(f64::MIN, f64::max) - v.iter().cloned().fold(f64::MAX, f64::min)
}

/// Residuals of symmetry statements at one spatial pose, plus the
/// cell closure and the spherical image when `image` is given.
pub fn symmetry_report_spatial(pose: &SpatialEightBarPose, image: Option<&EightBarPose>) -> Result<Report> {
    let sym = pose.symmetry.as_ref().ok_or(Error::CollapsedPose("aligned pose has no symmetry axes"))?;
    let s = sym.reflections();
    let (g, h, n, t) = (&pose.g, &pose.h, &sym.n, &sym.t);
    let c = |a: &Displacement, b: &Displacement| a.after(b);
    let mut r = Report::default();

    r.push(Family::Incidence, "hinge incidence", pose.incidence_residual());
    r.push(Family::Incidence, "cell line-reflection swap", max_of(pose.cell_swaps().unwrap()));
    r.push(Family::Incidence, "Bennett proportion of all cells", max_of(pose.bennett_proportions()));

    r.push(Family::Operators, "s3 s2 s1 s3 = s1 s2 (lines)", c(&c(&s[2], &c(&s[1], &s[0])), &s[2]).distance(&c(&s[0], &s[1])));
    r.push(Family::Operators, "s4 s2 = s5 s1 (lines)", c(&s[3], &s[1]).distance(&c(&s[4], &s[0])));
    r.push(Family::Operators, "s6 s2 = s5 s3, s6 s1 = s4 s3 (lines)", c(&s[5], &s[1]).distance(&c(&s[4], &s[2])).max(c(&s[5], &s[0]).distance(&c(&s[3], &s[2]))));

    r.push(Family::SymmetryLine, "s1..s6 meet n orthogonally", max_of(sym.axes.iter().map(|a| a.orthogonal_meet_residual(n))));
    r.push(Family::SymmetryLine, "t meets n orthogonally", t.orthogonal_meet_residual(n));
    let rt = line_reflection(t);
    r.push(Family::SymmetryLine, "t swaps (s1,s4) (s2,s5) (s3,s6)", max_of((0..3).map(|k| rt.apply(&sym.axes[k]).residual_unoriented(&sym.axes[k + 3]))));
    let table = [(c(&s[5], &s[0]), 1), (c(&s[3], &s[1]), 2), (c(&s[4], &s[2]), 3)];
    let mut helical = Vec::new();
    let mut helical_axis = Vec::new();
    for (rho, i) in &table {
        helical.push(rho.apply(&g[0]).residual(&g[*i]));
        helical.push(rho.apply(&h[*i]).residual(&h[0]));
        helical_axis.push(screw_axis(rho).map_or(0.0, |p| p.axis.residual_unoriented(n)));
    }
    r.push(Family::SymmetryLine, "helical table g0->gi, hi->h0", max_of(helical));
    r.push(Family::SymmetryLine, "helical axes on n", max_of(helical_axis));
    let dg = g.map(|l| dual_angle_to(n, &l));
    let dh = h.map(|l| dual_angle_to(n, &l));
    r.push(Family::SymmetryLine, "g cohort angles to n", spread(dg.map(|x| x.0)));
    r.push(Family::SymmetryLine, "g cohort distances to n", spread(dg.map(|x| x.1)));
    r.push(Family::SymmetryLine, "h cohort angles to n", spread(dh.map(|x| x.0)));
    r.push(Family::SymmetryLine, "h cohort distances to n", spread(dh.map(|x| x.1)));
    let feet = (0..4).filter_map(|i| {
        let (pg, ph) = (common_perpendicular(n, &g[i]).ok()?, common_perpendicular(n, &h[i]).ok()?);
        Some(rt.apply(&pg.axis).residual_unoriented(&ph.axis))
    });
    r.push(Family::SymmetryLine, "n-g and n-h perpendiculars symmetric in t", max_of(feet));

    if let Some(sp) = image {
        let dir = |a: Vec3, b: Vec3| (a - b).norm();
        let mut bars = Vec::new();
        for i in 0..4 {
            bars.push(dir(g[i].direction(), sp.g[i].normal()));
            bars.push(dir(h[i].direction(), sp.h[i].normal()));
        }
        r.push(Family::Image, "bar directions vs circle normals", max_of(bars));
        r.push(Family::Image, "hinge directions vs joints", max_of((0..12).map(|k| dir(pose.hinges[k].direction(), sp.joints[k].vector()))));
        if let Some(ss) = &sp.symmetry {
            let pm = |a: Vec3, b: Vec3| (a - b).norm().min((a + b).norm());
            r.push(Family::Image, "axis directions vs centers", max_of((0..6).map(|k| pm(sym.axes[k].direction(), ss.centers[k].vector()))));
            r.push(Family::Image, "n direction vs N", pm(n.direction(), ss.pole.vector()));
        }
    }
    Ok(r)
}

/// Spatial collapse: every bar on `g0` and every hinge meeting it
/// orthogonally.
pub fn collapse_residual(pose: &SpatialEightBarPose) -> f64 {
    let g0 = base_line();
    let bars = pose.g.iter().chain(pose.h.iter()).map(|l| l.residual_unoriented(&g0));
    let hinges = pose.hinges.iter().map(|l| l.orthogonal_meet_residual(&g0));
    max_of(bars.chain(hinges))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::isogram::Branch;
    use std::f64::consts::PI;

    pub fn sample() -> SpatialEightBar {
        SpatialEightBar::new(&SpatialEightBarSpec {
            u1: 0.0,
            u2: PI / 3.0,
            u3: 7.0 * PI / 12.0,
            beta1: PI / 4.0,
            beta2: PI / 5.0,
            beta3: None,
            branch1: Branch::Plus,
            branch2: Branch::Plus,
            branch3: None,
            a1: 1.0,
            a2: 0.6,
            b1: None,
            b2: None,
            b3: None,
            derive: true,
        })
        .unwrap()
    }

    #[test]
    fn report_over_a_cycle() {
        let lk = sample();
        for k in 0..25 {
            let phi = -PI + 2.0 * PI * (k as f64 + 0.3) / 25.0;
            let pose = lk.assemble(phi).unwrap();
            let img = lk.image(phi).unwrap();
            let r = symmetry_report_spatial(&pose, Some(&img)).unwrap();
            for c in &r.checks {
                assert!(c.residual < 1e-9, "phi {phi}: {} {} = {:e}", c.family, c.name, c.residual);
            }
        }
    }

    #[test]
    fn aligned_and_flipped_collapse() {
        let lk = sample();
        for phi in [0.0, PI] {
            let pose = lk.assemble(phi).unwrap();
            assert!(pose.is_collapsed());
            assert!(collapse_residual(&pose) < 1e-12, "{phi}");
            assert!(symmetry_report_spatial(&pose, None).is_err());
        }
    }

    #[test]
    fn collapsed_pose_is_limit_of_regular_ones() {
        let lk = sample();
        for phi in [0.0, PI] {
            let c = lk.assemble(phi).unwrap();
            let near = lk.assemble(phi + 1e-7).unwrap();
            for k in 0..12 {
                assert!(c.hinges[k].residual_unoriented(&near.hinges[k]) < 1e-5, "hinge {k} at {phi}");
            }
        }
    }
}
