//! Named residuals grouped by the statement they witness.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// Joints on their bars and cell symmetries: the pose is closed.
    Incidence,
    /// Centers of the first three cells and the half-turn product τ321.
    Triple,
    /// Half-turn product identities and the rotation table about N.
    Operators,
    /// Spherical symmetry structure: n, N, t1, t2, τ654.
    SymmetryCircle,
    /// Spatial symmetry structure: n, t and the helical table.
    SymmetryLine,
    /// Spatial line directions against the spherical pose.
    Image,
}

impl Family {
    pub const ALL: [Family; 6] =
        [Family::Incidence, Family::Triple, Family::Operators, Family::SymmetryCircle, Family::SymmetryLine, Family::Image];

    pub fn name(self) -> &'static str {
        match self {
            Family::Incidence => "incidence",
            Family::Triple => "triple",
            Family::Operators => "operators",
            Family::SymmetryCircle => "symmetry-circle",
            Family::SymmetryLine => "symmetry-line",
            Family::Image => "image",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub family: Family,
    pub name: &'static str,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Default, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn push(&mut self, family: Family, name: &'static str, residual: f64) {
        self.checks.push(Check { family, name, residual });
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    /// Largest residual; NaN entries count as failures.
    pub fn max(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, nan_max)
    }

    /// Largest residual of one family, `None` if the family is absent.
    pub fn max_of(&self, family: Family) -> Option<f64> {
        let mut it = self.checks.iter().filter(|c| c.family == family).peekable();
        it.peek()?;
        Some(it.map(|c| c.residual).fold(0.0, nan_max))
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.residual)
    }

    pub fn worst(&self) -> Option<&Check> {
        self.checks.iter().max_by(|a, b| nan_last(a.residual).total_cmp(&nan_last(b.residual)))
    }
}

fn nan_max(acc: f64, x: f64) -> f64 {
    if x.is_nan() || acc.is_nan() {
        f64::NAN
    } else {
        acc.max(x)
    }
}

fn nan_last(x: f64) -> f64 {
    if x.is_nan() {
        f64::INFINITY
    } else {
        x
    }
}

pub(crate) fn max_of(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(0.0, nan_max)
}
