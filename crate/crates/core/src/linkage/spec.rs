//! Design parameters of the 8-bar linkages and their validation.
//!
//! The base joints `R01`, `R02`, `R03` sit at arc positions `u1 < u2 < u3` on
//! `g0`. Isogram 1 has basis `R01 R02` and arms `beta1`, isogram 2 basis
//! `R02 R03` and arms `beta2`, isogram 3 basis `R01 R03` and arms `beta3`.
//! Their coefficients must satisfy `c31 = c32 c21`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::isogram::{arm_for_coefficient, check_arc, transmission_coefficient, Branch, SphericalIsogramSpec};
use crate::tol;

/// Relative tolerance on `c31 = c32 c21` when `beta3` is supplied.
pub const COMPATIBILITY: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EightBarSpec {
    pub u1: f64,
    pub u2: f64,
    pub u3: f64,
    pub beta1: f64,
    pub beta2: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta3: Option<f64>,
    pub branch1: Branch,
    pub branch2: Branch,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch3: Option<Branch>,
    /// Recompute `beta3` and `branch3` from the other parameters.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub derive: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpatialEightBarSpec {
    pub u1: f64,
    pub u2: f64,
    pub u3: f64,
    pub beta1: f64,
    pub beta2: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta3: Option<f64>,
    pub branch1: Branch,
    pub branch2: Branch,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch3: Option<Branch>,
    /// Offsets of `R02` from `R01` and of `R03` from `R02` along `g0`.
    pub a1: f64,
    pub a2: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b3: Option<f64>,
    /// Recompute `beta3`, `branch3` and the arm offsets.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub derive: bool,
}

impl SpatialEightBarSpec {
    pub fn angular(&self) -> EightBarSpec {
        EightBarSpec {
            u1: self.u1,
            u2: self.u2,
            u3: self.u3,
            beta1: self.beta1,
            beta2: self.beta2,
            beta3: self.beta3,
            branch1: self.branch1,
            branch2: self.branch2,
            branch3: self.branch3,
            derive: self.derive,
        }
    }
}

/// A complete and consistent spherical design.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Design {
    pub u: [f64; 3],
    /// `u2 - u1`, `u3 - u2`, `u3 - u1`.
    pub alpha: [f64; 3],
    pub beta: [f64; 3],
    pub branch: [Branch; 3],
    pub c21: f64,
    pub c32: f64,
    pub c31: f64,
}

impl Design {
    pub fn isogram(&self, k: usize) -> SphericalIsogramSpec {
        SphericalIsogramSpec { alpha: self.alpha[k], beta: self.beta[k], branch: self.branch[k] }
    }

    pub fn to_spec(&self) -> EightBarSpec {
        EightBarSpec {
            u1: self.u[0],
            u2: self.u[1],
            u3: self.u[2],
            beta1: self.beta[0],
            beta2: self.beta[1],
            beta3: Some(self.beta[2]),
            branch1: self.branch[0],
            branch2: self.branch[1],
            branch3: Some(self.branch[2]),
            derive: false,
        }
    }
}

/// A complete and consistent spatial design.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpatialDesign {
    pub design: Design,
    pub a: [f64; 2],
    /// Heights of `R01`, `R02`, `R03` along `g0`.
    pub z: [f64; 3],
    /// Moduli `k_i = offset_i / sin(alpha_i)` of the three base segments.
    pub k: [f64; 3],
    pub b: [f64; 3],
}

impl SpatialDesign {
    /// Offset of the basis of isogram `k`.
    pub fn basis_offset(&self, k: usize) -> f64 {
        [self.a[0], self.a[1], self.a[0] + self.a[1]][k]
    }

    pub fn to_spec(&self) -> SpatialEightBarSpec {
        let d = &self.design;
        SpatialEightBarSpec {
            u1: d.u[0],
            u2: d.u[1],
            u3: d.u[2],
            beta1: d.beta[0],
            beta2: d.beta[1],
            beta3: Some(d.beta[2]),
            branch1: d.branch[0],
            branch2: d.branch[1],
            branch3: Some(d.branch[2]),
            a1: self.a[0],
            a2: self.a[1],
            b1: Some(self.b[0]),
            b2: Some(self.b[1]),
            b3: Some(self.b[2]),
            derive: false,
        }
    }
}

fn isogram_err(k: usize, e: Error) -> Error {
    let reason = match e {
        Error::InvalidSpec(r) => r,
        Error::DegenerateBranch { denominator } => format!("degenerate branch (denominator {denominator:.3e})"),
        e => e.to_string(),
    };
    Error::spec(format!("isogram {}: {reason}", k + 1))
}

pub fn validate_spec(spec: &EightBarSpec) -> Result<Design> {
    let u = [spec.u1, spec.u2, spec.u3];
    if u.iter().any(|x| !x.is_finite()) {
        return Err(Error::spec("u1, u2, u3 must be finite"));
    }
    let alpha = [u[1] - u[0], u[2] - u[1], u[2] - u[0]];
    check_arc("alpha1 = u2 - u1", alpha[0])?;
    check_arc("alpha2 = u3 - u2", alpha[1])?;
    check_arc("alpha1 + alpha2 = u3 - u1", alpha[2])?;
    let coef = |k: usize, beta: f64, branch: Branch| {
        transmission_coefficient(&SphericalIsogramSpec { alpha: alpha[k], beta, branch }).map_err(|e| isogram_err(k, e))
    };
    let c21 = coef(0, spec.beta1, spec.branch1)?;
    let c32 = coef(1, spec.beta2, spec.branch2)?;
    let c31 = c32 * c21;
    let (branch3, beta3) = if spec.derive {
        arm_for_coefficient(alpha[2], c31).map_err(|e| isogram_err(2, e))?
    } else {
        match (spec.branch3, spec.beta3) {
            (Some(br), Some(b)) => {
                let c = coef(2, b, br)?;
                if (c - c31).abs() > COMPATIBILITY * c31.abs().max(1.0) {
                    return Err(Error::spec(format!(
                        "isogram 3: coefficient {c:.17e} differs from c32 * c21 = {c31:.17e}; \
                         set derive = true to compute beta3 and branch3"
                    )));
                }
                (br, b)
            }
            _ => return Err(Error::spec("beta3 and branch3 are required unless derive = true")),
        }
    };
    Ok(Design {
        u,
        alpha,
        beta: [spec.beta1, spec.beta2, beta3],
        branch: [spec.branch1, spec.branch2, branch3],
        c21,
        c32,
        c31,
    })
}

pub fn validate_spatial_spec(spec: &SpatialEightBarSpec) -> Result<SpatialDesign> {
    let design = validate_spec(&spec.angular())?;
    if !(spec.a1.is_finite() && spec.a2.is_finite()) {
        return Err(Error::spec("a1, a2 must be finite"));
    }
    let a = [spec.a1, spec.a2];
    let offsets = [a[0], a[1], a[0] + a[1]];
    let k: [f64; 3] = std::array::from_fn(|i| offsets[i] / design.alpha[i].sin());
    let fitted: [f64; 3] = std::array::from_fn(|i| design.branch[i].sign() * k[i] * design.beta[i].sin());
    let given = [spec.b1, spec.b2, spec.b3];
    let mut b = [0.0; 3];
    for i in 0..3 {
        b[i] = match given[i] {
            Some(v) if !spec.derive => {
                let scale = v.abs().max(fitted[i].abs());
                if !v.is_finite() || (scale > 0.0 && (v - fitted[i]).abs() > tol::PROPORTION * scale) {
                    return Err(Error::spec(format!(
                        "isogram {}: offset b{} = {v} violates the Bennett proportion (expected {:.17e})",
                        i + 1,
                        i + 1,
                        fitted[i]
                    )));
                }
                v
            }
            None if i < 2 && !spec.derive => {
                return Err(Error::spec(format!("b{} is required unless derive = true", i + 1)));
            }
            _ => fitted[i],
        };
    }
    Ok(SpatialDesign { design, a, z: [0.0, a[0], a[0] + a[1]], k, b })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sample_spec() -> EightBarSpec {
        EightBarSpec {
            u1: 0.0,
            u2: PI / 3.0,
            u3: 7.0 * PI / 12.0,
            beta1: PI / 4.0,
            beta2: PI / 5.0,
            beta3: None,
            branch1: Branch::Plus,
            branch2: Branch::Plus,
            branch3: None,
            derive: true,
        }
    }

    #[test]
    fn derive_completes_third_isogram() {
        let d = validate_spec(&sample_spec()).unwrap();
        // the three coefficients, evaluated independently
        let c = |a: f64, b: f64| (b - a).sin() / (b.sin() + a.sin());
        let c21 = c(PI / 3.0, PI / 4.0);
        let c32 = c(PI / 4.0, PI / 5.0);
        assert!((d.c21 - c21).abs() < 1e-15 && (d.c32 - c32).abs() < 1e-15);
        let c31 = transmission_coefficient(&d.isogram(2)).unwrap();
        assert!((c31 - c32 * c21).abs() < 1e-12);
        // the derived spec re-validates without derive
        assert_eq!(validate_spec(&d.to_spec()).unwrap(), d);
    }

    #[test]
    fn inconsistent_third_arm_names_isogram_3() {
        let mut s = sample_spec();
        s.derive = false;
        s.beta3 = Some(PI / 6.0);
        s.branch3 = Some(Branch::Plus);
        let e = validate_spec(&s).unwrap_err().to_string();
        assert!(e.contains("isogram 3"), "{e}");
        s.derive = true;
        assert!(validate_spec(&s).is_ok());
    }

    #[test]
    fn range_rule() {
        let mut s = sample_spec();
        s.u3 = 3.5;
        let e = validate_spec(&s).unwrap_err().to_string();
        assert!(e.contains("alpha1 + alpha2"), "{e}");
        s.u3 = 0.5;
        assert!(validate_spec(&s).is_err());
    }

    #[test]
    fn missing_third_arm_without_derive() {
        let mut s = sample_spec();
        s.derive = false;
        assert!(validate_spec(&s).is_err());
    }

    fn spatial() -> SpatialEightBarSpec {
        let a = sample_spec();
        SpatialEightBarSpec {
            u1: a.u1,
            u2: a.u2,
            u3: a.u3,
            beta1: a.beta1,
            beta2: a.beta2,
            beta3: None,
            branch1: a.branch1,
            branch2: a.branch2,
            branch3: None,
            a1: 0.7,
            a2: 0.8,
            b1: None,
            b2: None,
            b3: None,
            derive: true,
        }
    }

    #[test]
    fn spatial_proportions() {
        let d = validate_spatial_spec(&spatial()).unwrap();
        for i in 0..3 {
            let (al, be) = (d.design.alpha[i], d.design.beta[i]);
            let lhs = d.basis_offset(i) * be.sin();
            let rhs = d.design.branch[i].sign() * d.b[i] * al.sin();
            assert!((lhs - rhs).abs() < 1e-14);
        }
        let back = validate_spatial_spec(&d.to_spec()).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn spatial_b1_off_by_one_percent() {
        let d = validate_spatial_spec(&spatial()).unwrap();
        let mut s = d.to_spec();
        s.b1 = Some(d.b[0] * 1.01);
        let e = validate_spatial_spec(&s).unwrap_err().to_string();
        assert!(e.contains("isogram 1"), "{e}");
        // b3 may be left out and is then derived
        let mut s = d.to_spec();
        s.b3 = None;
        assert_eq!(validate_spatial_spec(&s).unwrap().b[2], d.b[2]);
    }
}
