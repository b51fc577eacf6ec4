//! The `bennett8` command line: validate, pose, sweep, verify, derive.
//!
//! Exit codes: 0 on success, 1 when a spec or argument is rejected, 2 when
//! verification fails. Diagnostics go to standard error as one JSON object
//! per line.

pub mod scene;
pub mod specfile;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::isogram::{
    bennett_dual_coefficient, bennett_swap_residual, Branch, bennett_symmetry_axis, isogram_symmetry_spherical,
    solve_bennett_isogram, solve_spherical_isogram, transmission_coefficient, BennettIsogramSpec,
    SphericalIsogramSpec,
};
use crate::linkage::{
    mobility, oracle_agreement, sample_angles, sweep, validate_spatial_spec, validate_spec, EightBar, Family,
    SpatialEightBar, SphericalEightBar, Spacing, JOINTS,
};
use crate::oracle::{bennett_isogram_problem, jacobian_nullity, solve_loop, spherical_isogram_problem};
use crate::screw_geom::OrientedLine;
use crate::sphere_geom::{OrientedGreatCircle, SpherePoint, Vec3};

use scene::{bennett_isogram_scene, eight_bar_scene, spherical_isogram_scene, to_obj};
use specfile::SpecFile;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_FAILED: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "bennett8", version, about = "Bennett's spherical and spatial 8-bar linkages")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a spec and print it with its derived quantities.
    Validate { spec: PathBuf },
    /// Assemble one pose and print its scene as JSON.
    Pose {
        spec: PathBuf,
        /// Driving angle in radians.
        #[arg(long, allow_hyphen_values = true)]
        phi: f64,
        /// Also write the scene as OBJ polylines.
        #[arg(long)]
        obj: Option<PathBuf>,
        /// Polyline segments per circle in the OBJ export.
        #[arg(long, default_value_t = 128)]
        segments: usize,
    },
    /// Sample the motion and write one CSV row per pose.
    Sweep {
        spec: PathBuf,
        #[arg(long, allow_hyphen_values = true, default_value_t = -std::f64::consts::PI)]
        from: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = std::f64::consts::PI)]
        to: f64,
        #[arg(long, default_value_t = 101)]
        samples: usize,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Space samples uniformly in the angle instead of its half tangent.
        #[arg(long)]
        uniform_angle: bool,
    },
    /// Check every statement on a grid of poses.
    Verify {
        spec: PathBuf,
        #[arg(long, default_value_t = 25)]
        phi_grid: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Print the spec with every derivable field filled in.
    Derive { spec: PathBuf },
}

#[derive(Serialize)]
struct Diagnostic<'a> {
    error: &'a str,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    path: Option<String>,
}

/// Failure of a command, with the exit code it maps to.
#[derive(Debug)]
pub enum CliError {
    Invalid(Error),
    Io(PathBuf, std::io::Error),
    Failed(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Invalid(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => EXIT_FAILED,
            _ => EXIT_INVALID,
        }
    }

    fn diagnostic(&self) -> String {
        let d = match self {
            CliError::Invalid(e) => Diagnostic { error: e.kind(), message: e.to_string(), path: None },
            CliError::Io(p, e) => Diagnostic { error: "io", message: e.to_string(), path: Some(p.display().to_string()) },
            CliError::Failed(m) => Diagnostic { error: "verification-failed", message: m.clone(), path: None },
        };
        serde_json::to_string(&d).expect("diagnostic serializes")
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "{}", e.diagnostic());
            e.exit_code()
        }
    }
}

pub fn execute(command: &Command, out: &mut dyn Write) -> CliResult<i32> {
    match command {
        Command::Validate { spec } => cmd_validate(spec, out),
        Command::Pose { spec, phi, obj, segments } => cmd_pose(spec, *phi, obj.as_deref(), *segments, out),
        Command::Sweep { spec, from, to, samples, out: path, uniform_angle } => {
            let spacing = if *uniform_angle { Spacing::UniformAngle } else { Spacing::HalfTangent };
            let csv = cmd_sweep(spec, *from, *to, *samples, spacing)?;
            match path {
                Some(p) => std::fs::write(p, csv).map_err(|e| CliError::Io(p.clone(), e))?,
                None => write_out(out, &csv)?,
            }
            Ok(EXIT_OK)
        }
        Command::Verify { spec, phi_grid, tol } => cmd_verify(spec, *phi_grid, *tol, out),
        Command::Derive { spec } => cmd_derive(spec, out),
    }
}

fn write_out(out: &mut dyn Write, text: &str) -> CliResult<()> {
    out.write_all(text.as_bytes()).map_err(|e| CliError::Io(PathBuf::from("<stdout>"), e))
}

pub fn read_spec(path: &Path) -> CliResult<SpecFile> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
    Ok(SpecFile::parse(&text)?)
}

/// A spec brought to the form the commands work on.
pub enum Loaded {
    EightBar(EightBar),
    SphericalIsogram(SphericalIsogramSpec),
    BennettIsogram(BennettIsogramSpec),
}

pub fn load(spec: &SpecFile) -> Result<Loaded> {
    Ok(match spec {
        SpecFile::Spherical8(s) => Loaded::EightBar(EightBar::Spherical(SphericalEightBar::new(s)?)),
        SpecFile::Spatial8(s) => Loaded::EightBar(EightBar::Spatial(SpatialEightBar::new(s)?)),
        SpecFile::SphericalIsogram(f) => Loaded::SphericalIsogram(f.spec()?),
        SpecFile::BennettIsogram(f) => Loaded::BennettIsogram(f.spec()?),
    })
}

fn equator() -> OrientedGreatCircle {
    OrientedGreatCircle::from_normal(Vec3::z()).expect("unit normal")
}

fn x_point() -> SpherePoint {
    SpherePoint::new(Vec3::x()).expect("unit vector")
}

/// Base line and first hinge of a standalone Bennett isogram.
fn bennett_frame() -> (OrientedLine, OrientedLine) {
    let o = Vec3::zeros();
    (OrientedLine::through(&o, &Vec3::z()).expect("unit"), OrientedLine::through(&o, &Vec3::x()).expect("unit"))
}

pub fn cmd_validate(path: &Path, out: &mut dyn Write) -> CliResult<i32> {
    let spec = read_spec(path)?;
    let normalized = match &spec {
        SpecFile::Spherical8(s) => serde_json::to_value(validate_spec(s)?),
        SpecFile::Spatial8(s) => serde_json::to_value(validate_spatial_spec(s)?),
        SpecFile::SphericalIsogram(f) => {
            let s = f.spec()?;
            Ok(serde_json::json!({ "spec": s, "c21": transmission_coefficient(&s)? }))
        }
        SpecFile::BennettIsogram(f) => {
            let s = f.spec()?;
            let c = bennett_dual_coefficient(&s)?;
            Ok(serde_json::json!({ "spec": s, "c21": c.re, "c21_dual": c.du }))
        }
    }
    .expect("design serializes");
    // the 8-bars must also assemble at a reference pose
    load(&spec)?;
    let doc = serde_json::json!({ "kind": spec.kind(), "valid": true, "normalized": normalized });
    write_out(out, &(serde_json::to_string_pretty(&doc).expect("json") + "\n"))?;
    Ok(EXIT_OK)
}

fn family_residuals(report: &crate::linkage::Report) -> BTreeMap<String, f64> {
    Family::ALL.iter().filter_map(|f| report.max_of(*f).map(|x| (f.name().to_string(), x))).collect()
}

pub fn cmd_pose(path: &Path, phi: f64, obj: Option<&Path>, segments: usize, out: &mut dyn Write) -> CliResult<i32> {
    let spec = read_spec(path)?;
    let scene = match load(&spec)? {
        Loaded::EightBar(lk) => {
            let pose = lk.assemble(phi)?;
            let residuals = if pose.is_collapsed() {
                BTreeMap::from([("collapse".to_string(), pose.collapse_residual())])
            } else {
                family_residuals(&pose.report()?)
            };
            eight_bar_scene(spec.kind(), phi, &pose, residuals)
        }
        Loaded::SphericalIsogram(s) => {
            let pose = solve_spherical_isogram(&s, &equator(), &x_point(), phi)?;
            let mut res = BTreeMap::from([("closure".to_string(), pose.side_residual(&s))]);
            let sym = isogram_symmetry_spherical(&pose).ok();
            if let Some(sy) = &sym {
                res.insert("symmetry".into(), sy.swap_residual(&pose));
            }
            spherical_isogram_scene(&pose, sym.as_ref().map(|s| &s.center), res)
        }
        Loaded::BennettIsogram(s) => {
            let (base, hinge) = bennett_frame();
            let pose = solve_bennett_isogram(&s, &base, &hinge, phi)?;
            let axis = bennett_symmetry_axis(&pose).ok();
            let mut res = BTreeMap::new();
            if let Some(a) = &axis {
                res.insert("symmetry".to_string(), bennett_swap_residual(&pose, a));
            }
            bennett_isogram_scene(&pose, axis.as_ref(), res)
        }
    };
    if let Some(p) = obj {
        std::fs::write(p, to_obj(&scene, segments)).map_err(|e| CliError::Io(p.to_path_buf(), e))?;
    }
    write_out(out, &(serde_json::to_string_pretty(&scene).expect("json") + "\n"))?;
    Ok(EXIT_OK)
}

fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV text of a sweep. Floats carry 17 significant digits, so the output
/// is a pure function of the spec and flags.
pub fn cmd_sweep(path: &Path, from: f64, to: f64, samples: usize, spacing: Spacing) -> CliResult<String> {
    let spec = read_spec(path)?;
    let loaded = load(&spec)?;
    let angles = sample_angles(from, to, samples, spacing)?;
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    let mut record = |row: Vec<String>| w.write_record(&row).expect("in-memory csv");
    match &loaded {
        Loaded::EightBar(lk) => {
            let mut header = vec!["phi1".to_string(), "status".to_string()];
            for id in JOINTS {
                if lk.is_spatial() {
                    let l = id.label('I');
                    header.extend(["px", "py", "pz", "dx", "dy", "dz"].map(|c| format!("{l}_{c}")));
                } else {
                    let l = id.label('R');
                    header.extend(["x", "y", "z"].map(|c| format!("{l}_{c}")));
                }
            }
            header.extend(Family::ALL.map(|f| format!("max_{}", f.name())));
            record(header);
            for s in sweep(lk, &angles) {
                let mut row = vec![fmt_f(s.phi1), s.status.label().to_string()];
                row.extend(s.joints.iter().map(|x| fmt_f(*x)));
                row.extend(s.families.iter().map(|x| fmt_f(*x)));
                record(row);
            }
        }
        Loaded::SphericalIsogram(sp) => {
            let mut header = vec!["phi1".to_string(), "status".to_string(), "phi2".to_string()];
            for v in ["A", "B", "C", "D"] {
                header.extend(["x", "y", "z"].map(|c| format!("{v}_{c}")));
            }
            header.extend(["max_closure", "max_symmetry"].map(String::from));
            record(header);
            for &phi in &angles {
                let row = match solve_spherical_isogram(sp, &equator(), &x_point(), phi) {
                    Ok(p) => {
                        let sym = isogram_symmetry_spherical(&p).map(|s| s.swap_residual(&p)).unwrap_or(f64::NAN);
                        let status = if p.is_collapsed() { "collapsed" } else { "ok" };
                        let mut row = vec![fmt_f(phi), status.to_string(), fmt_f(p.phi2)];
                        row.extend(p.vertices.iter().flat_map(|v| v.vector().iter().map(|x| fmt_f(*x)).collect::<Vec<_>>()));
                        row.extend([fmt_f(p.side_residual(sp)), fmt_f(sym)]);
                        row
                    }
                    Err(_) => [fmt_f(phi), "failed".into()].into_iter().chain((0..15).map(|_| fmt_f(f64::NAN))).collect(),
                };
                record(row);
            }
        }
        Loaded::BennettIsogram(sp) => {
            let mut header = vec!["phi1".to_string(), "status".to_string(), "phi2".to_string()];
            for v in ["A", "B", "C", "D"] {
                header.extend(["px", "py", "pz", "dx", "dy", "dz"].map(|c| format!("{v}_{c}")));
            }
            header.push("max_symmetry".into());
            record(header);
            let (base, hinge) = bennett_frame();
            for &phi in &angles {
                let row = match solve_bennett_isogram(sp, &base, &hinge, phi) {
                    Ok(p) => {
                        let sym = bennett_symmetry_axis(&p).map(|a| bennett_swap_residual(&p, &a)).unwrap_or(f64::NAN);
                        let status = if p.is_collapsed() { "collapsed" } else { "ok" };
                        let mut row = vec![fmt_f(phi), status.to_string(), fmt_f(p.phi2)];
                        for h in &p.hinges {
                            row.extend(h.point().iter().chain(h.direction().iter()).map(|x| fmt_f(*x)));
                        }
                        row.push(fmt_f(sym));
                        row
                    }
                    Err(_) => [fmt_f(phi), "failed".into()].into_iter().chain((0..26).map(|_| fmt_f(f64::NAN))).collect(),
                };
                record(row);
            }
        }
    }
    let bytes = w.into_inner().expect("in-memory csv");
    Ok(String::from_utf8(bytes).expect("ascii csv"))
}

/// Grid over (-pi, pi) offset so that neither 0 nor pi is sampled.
pub fn verify_grid(n: usize) -> Vec<f64> {
    let pi = std::f64::consts::PI;
    (0..n).map(|k| -pi + 2.0 * pi * (k as f64 + 0.381966) / n as f64).collect()
}

/// Worst residual of one verified statement over the grid.
struct Verdict {
    name: &'static str,
    worst: f64,
    at: f64,
    detail: String,
    /// Overrides the residual comparison (mobility counts).
    pass: Option<bool>,
}

impl Verdict {
    fn new(name: &'static str) -> Self {
        Verdict { name, worst: 0.0, at: f64::NAN, detail: String::new(), pass: None }
    }

    fn record(&mut self, x: f64, phi: f64, detail: &str) {
        // the first NaN sticks
        if !self.worst.is_nan() && (x.is_nan() || x > self.worst) {
            self.worst = x;
            self.at = phi;
            self.detail = detail.to_string();
        }
    }

    fn passed(&self, tol: f64) -> bool {
        self.pass.unwrap_or(self.worst <= tol)
    }
}

const PERTURBATION: f64 = 0.02;

pub fn cmd_verify(path: &Path, grid: usize, tol: f64, out: &mut dyn Write) -> CliResult<i32> {
    if grid == 0 || !(tol > 0.0) {
        return Err(Error::InvalidArgument("phi-grid must be positive and tol > 0".into()).into());
    }
    let spec = read_spec(path)?;
    let loaded = load(&spec)?;
    let phis = verify_grid(grid);
    let mut verdicts: Vec<Verdict> = Vec::new();
    let mut mobile = 0usize;
    let mut mobility_total = 0usize;
    match &loaded {
        Loaded::EightBar(lk) => {
            let names: Vec<&'static str> = Family::ALL
                .iter()
                .filter(|f| lk.is_spatial() || !matches!(f, Family::SymmetryLine | Family::Image))
                .map(|f| f.name())
                .collect();
            verdicts.extend(names.iter().map(|n| Verdict::new(n)));
            verdicts.push(Verdict::new("oracle"));
            for &phi in &phis {
                let pose = lk.assemble(phi)?;
                let report = pose.report()?;
                for c in &report.checks {
                    let v = verdicts.iter_mut().find(|v| v.name == c.family.name()).expect("family listed");
                    v.record(c.residual, phi, c.name);
                }
                let (p, a) = pose.loop_problem()?;
                mobility_total += 1;
                if mobility(&p, &a).nullity == 1 {
                    mobile += 1;
                }
                let agree = oracle_agreement(&p, &a, PERTURBATION).unwrap_or(f64::INFINITY);
                verdicts.last_mut().unwrap().record(agree, phi, "joint angles vs Newton closure");
            }
        }
        Loaded::SphericalIsogram(s) => {
            verdicts.extend(["closure", "symmetry", "oracle"].map(Verdict::new));
            for &phi in &phis {
                let pose = solve_spherical_isogram(s, &equator(), &x_point(), phi)?;
                verdicts[0].record(pose.side_residual(s), phi, "opposite sides");
                let sym = isogram_symmetry_spherical(&pose)?;
                verdicts[1].record(sym.swap_residual(&pose), phi, "vertex swap");
                let (agree, nullity) = isogram_oracle(spherical_isogram_problem(s.alpha, s.beta, phi, isogram_seed(s.branch, phi, pose.phi2)), pose.phi2);
                verdicts[2].record(agree, phi, "phi2 vs Newton closure");
                mobility_total += 1;
                mobile += usize::from(nullity == 1);
            }
        }
        Loaded::BennettIsogram(s) => {
            verdicts.extend(["proportion", "symmetry", "oracle"].map(Verdict::new));
            let (base, hinge) = bennett_frame();
            let du = bennett_dual_coefficient(s)?.du.abs();
            for &phi in &phis {
                verdicts[0].record(du, phi, "dual part of the coefficient");
                let pose = solve_bennett_isogram(s, &base, &hinge, phi)?;
                let axis = bennett_symmetry_axis(&pose)?;
                verdicts[1].record(bennett_swap_residual(&pose, &axis), phi, "hinge swap");
                let prob = bennett_isogram_problem(s.alpha, s.beta, s.a, s.b, phi, isogram_seed(s.branch, phi, pose.phi2));
                let (agree, nullity) = isogram_oracle(prob, pose.phi2);
                verdicts[2].record(agree, phi, "phi2 vs Newton closure");
                mobility_total += 1;
                mobile += usize::from(nullity == 1);
            }
        }
    }
    let mut mob = Verdict::new("mobility");
    mob.pass = Some(mobile == mobility_total);
    mob.detail = format!("nullity 1 at {mobile}/{mobility_total} poses");
    verdicts.push(mob);

    let mut text = String::new();
    let mut failed = Vec::new();
    for v in &verdicts {
        let ok = v.passed(tol);
        if !ok {
            failed.push(v.name);
        }
        let status = if ok { "PASS" } else { "FAIL" };
        if v.pass.is_some() {
            writeln!(text, "{status} {:<15} {}", v.name, v.detail).unwrap();
        } else {
            writeln!(text, "{status} {:<15} worst {:.3e} at phi1 = {:+.6} ({})", v.name, v.worst, v.at, v.detail).unwrap();
        }
    }
    writeln!(text, "{} {} on {grid} poses at tol {tol:e}", spec.kind(), if failed.is_empty() { "verified" } else { "FAILED" })
        .unwrap();
    write_out(out, &text)?;
    if failed.is_empty() {
        Ok(EXIT_OK)
    } else {
        Err(CliError::Failed(format!("failed: {}", failed.join(", "))))
    }
}

/// Oracle seed: the analytic angles, perturbed. The closed loop has two
/// assembly modes; on the plus branch the angles at C and D are `-phi1`,
/// `-phi2`, on the minus branch `phi1`, `phi2`. The modes meet in the
/// aligned and flipped poses, so the perturbation shrinks there.
pub fn isogram_seed(branch: Branch, phi1: f64, phi2: f64) -> [f64; 4] {
    let s = -branch.sign();
    let d = PERTURBATION * phi1.sin().abs().max(0.005);
    [phi1, phi2 + d, s * phi1 - d, s * phi2 + d]
}

fn isogram_oracle(problem: crate::oracle::LoopProblem, phi2: f64) -> (f64, usize) {
    match solve_loop(&problem) {
        Ok(sol) => {
            let d = crate::linkage::mobility::angle_diff(sol.angles[1], phi2);
            (d, jacobian_nullity(&problem, &sol.angles))
        }
        Err(_) => (f64::INFINITY, 0),
    }
}

pub fn cmd_derive(path: &Path, out: &mut dyn Write) -> CliResult<i32> {
    let spec = read_spec(path)?;
    let completed = match &spec {
        SpecFile::Spherical8(s) => SpecFile::Spherical8(validate_spec(s)?.to_spec()),
        SpecFile::Spatial8(s) => SpecFile::Spatial8(validate_spatial_spec(s)?.to_spec()),
        SpecFile::SphericalIsogram(f) => {
            f.spec()?;
            spec.clone()
        }
        SpecFile::BennettIsogram(f) => {
            let s = f.spec()?;
            SpecFile::BennettIsogram(specfile::BennettIsogramFile { b: Some(s.b), derive: false, ..f.clone() })
        }
    };
    load(&completed)?;
    write_out(out, &completed.to_toml())?;
    Ok(EXIT_OK)
}
