//! Scene documents for external viewers, and polyline export as OBJ.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::isogram::{BennettIsogramPose, SphericalIsogramPose};
use crate::linkage::{AnyPose, Bar, JointId, JOINTS};
use crate::screw_geom::OrientedLine;
use crate::sphere_geom::{OrientedGreatCircle, SpherePoint, Vec3};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Geometry {
    Point { position: [f64; 3] },
    /// Great circle of the unit sphere.
    Circle { normal: [f64; 3] },
    Line { point: [f64; 3], direction: [f64; 3] },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Element {
    pub label: String,
    #[serde(flatten)]
    pub geometry: Geometry,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Scene {
    pub kind: &'static str,
    pub phi1: f64,
    /// Arm angles of the driving isograms (`phi1, phi2, phi3` for the
    /// 8-bars, `phi1, phi2` for a single isogram).
    pub arm_angles: Vec<f64>,
    pub collapsed: bool,
    pub bars: Vec<Element>,
    pub joints: Vec<Element>,
    /// Empty in collapsed poses.
    pub symmetry: Vec<Element>,
    /// Largest residual per check family; null where not applicable.
    pub residuals: BTreeMap<String, f64>,
}

fn arr(v: Vec3) -> [f64; 3] {
    [v.x, v.y, v.z]
}

fn point(label: impl Into<String>, p: &SpherePoint) -> Element {
    Element { label: label.into(), geometry: Geometry::Point { position: arr(p.vector()) } }
}

fn circle(label: impl Into<String>, c: &OrientedGreatCircle) -> Element {
    Element { label: label.into(), geometry: Geometry::Circle { normal: arr(c.normal()) } }
}

fn line(label: impl Into<String>, l: &OrientedLine) -> Element {
    Element { label: label.into(), geometry: Geometry::Line { point: arr(l.point()), direction: arr(l.direction()) } }
}

fn bar_label(b: Bar) -> String {
    b.to_string()
}

const BARS: [Bar; 8] = crate::linkage::topology::BARS;

pub fn eight_bar_scene(kind: &'static str, phi1: f64, pose: &AnyPose, residuals: BTreeMap<String, f64>) -> Scene {
    let (bars, joints, symmetry, phi) = match pose {
        AnyPose::Spherical(p) => {
            let bars = BARS.iter().map(|&b| circle(bar_label(b), &p.bar(b))).collect();
            let joints = JOINTS.iter().map(|&id: &JointId| point(id.label('R'), &p.joint(id))).collect();
            let mut sym = Vec::new();
            if let Some(s) = &p.symmetry {
                for (k, c) in s.centers.iter().enumerate() {
                    sym.push(point(format!("S{}", k + 1), c));
                }
                sym.push(circle("n", &s.n));
                sym.push(point("N", &s.pole));
                sym.push(circle("t1", &s.t1));
                sym.push(circle("t2", &s.t2));
            }
            (bars, joints, sym, p.phi)
        }
        AnyPose::Spatial(p, _) => {
            let lines: Vec<OrientedLine> = p.g.iter().chain(p.h.iter()).copied().collect();
            let bars = BARS.iter().zip(&lines).map(|(&b, l)| line(bar_label(b), l)).collect();
            let joints = JOINTS.iter().map(|&id| line(id.label('I'), &p.hinge(id))).collect();
            let mut sym = Vec::new();
            if let Some(s) = &p.symmetry {
                for (k, a) in s.axes.iter().enumerate() {
                    sym.push(line(format!("s{}", k + 1), a));
                }
                sym.push(line("n", &s.n));
                sym.push(line("t", &s.t));
            }
            (bars, joints, sym, p.phi)
        }
    };
    Scene { kind, phi1, arm_angles: phi.to_vec(), collapsed: pose.is_collapsed(), bars, joints, symmetry, residuals }
}

const SIDES: [&str; 4] = ["AB", "BC", "CD", "DA"];
const VERTICES: [&str; 4] = ["A", "B", "C", "D"];

pub fn spherical_isogram_scene(pose: &SphericalIsogramPose, center: Option<&SpherePoint>, residuals: BTreeMap<String, f64>) -> Scene {
    Scene {
        kind: "spherical-isogram",
        phi1: pose.phi1,
        arm_angles: vec![pose.phi1, pose.phi2],
        collapsed: pose.is_collapsed(),
        bars: pose.sides.iter().zip(SIDES).map(|(c, l)| circle(l, c)).collect(),
        joints: pose.vertices.iter().zip(VERTICES).map(|(p, l)| point(l, p)).collect(),
        symmetry: center.map(|c| vec![point("S", c)]).unwrap_or_default(),
        residuals,
    }
}

pub fn bennett_isogram_scene(pose: &BennettIsogramPose, axis: Option<&OrientedLine>, residuals: BTreeMap<String, f64>) -> Scene {
    Scene {
        kind: "bennett-isogram",
        phi1: pose.phi1,
        arm_angles: vec![pose.phi1, pose.phi2],
        collapsed: pose.is_collapsed(),
        bars: pose.sides.iter().zip(SIDES).map(|(s, l)| line(l, s)).collect(),
        joints: pose.hinges.iter().zip(VERTICES).map(|(h, l)| line(l, h)).collect(),
        symmetry: axis.map(|s| vec![line("s", s)]).unwrap_or_default(),
        residuals,
    }
}

/// Wavefront OBJ with one object per element: circles as closed polylines
/// of `segments` edges, lines as segments long enough to cover every
/// element's reference point, points as single vertices.
pub fn to_obj(scene: &Scene, segments: usize) -> String {
    let segments = segments.max(3);
    let all = || scene.bars.iter().chain(&scene.joints).chain(&scene.symmetry);
    let reach = all()
        .filter_map(|e| match &e.geometry {
            Geometry::Line { point, .. } => Some(Vec3::from(*point).norm()),
            _ => None,
        })
        .fold(0.0, f64::max)
        + 1.0;
    let mut out = format!("# {} at phi1 = {:.17e}\n", scene.kind, scene.phi1);
    let mut count = 0usize;
    // OBJ vertex indices start at 1
    let mut vertex = |out: &mut String, v: Vec3| {
        writeln!(out, "v {:.12} {:.12} {:.12}", v.x, v.y, v.z).unwrap();
        count += 1;
        count
    };
    for e in all() {
        writeln!(out, "o {}", e.label).unwrap();
        match &e.geometry {
            Geometry::Point { position } => {
                let k = vertex(&mut out, Vec3::from(*position));
                writeln!(out, "p {k}").unwrap();
            }
            Geometry::Circle { normal } => {
                let n = Vec3::from(*normal);
                let a = crate::sphere_geom::tie_break(n.cross(&if n.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() }).normalize());
                let b = n.cross(&a);
                let idx: Vec<usize> = (0..segments)
                    .map(|k| {
                        let t = std::f64::consts::TAU * k as f64 / segments as f64;
                        vertex(&mut out, a * t.cos() + b * t.sin())
                    })
                    .collect();
                let idx: Vec<String> = idx.iter().chain([&idx[0]]).map(|i| i.to_string()).collect();
                writeln!(out, "l {}", idx.join(" ")).unwrap();
            }
            Geometry::Line { point, direction } => {
                let (p, d) = (Vec3::from(*point), Vec3::from(*direction));
                let i = vertex(&mut out, p - d * reach);
                let j = vertex(&mut out, p + d * reach);
                writeln!(out, "l {i} {j}").unwrap();
            }
        }
    }
    out
}
