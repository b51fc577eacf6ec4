//! Versioned TOML spec files.
//!
//! ```toml
//! schema_version = 1
//! kind = "spherical8"
//! u1 = 0.0
//! ...
//! ```
//!
//! `schema_version` and `kind` sit beside the linkage fields; anything the
//! kind does not know is rejected.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::isogram::{BennettIsogramSpec, Branch, SphericalIsogramSpec};
use crate::linkage::{EightBarSpec, SpatialEightBarSpec};

pub const SCHEMA_VERSION: i64 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SphericalIsogramFile {
    pub alpha: f64,
    pub beta: f64,
    pub branch: Branch,
}

/// `b` may be left out and derived from the proportion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BennettIsogramFile {
    pub alpha: f64,
    pub beta: f64,
    pub a: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    pub branch: Branch,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub derive: bool,
}

impl SphericalIsogramFile {
    pub fn spec(&self) -> Result<SphericalIsogramSpec> {
        SphericalIsogramSpec::new(self.alpha, self.beta, self.branch)
    }
}

impl BennettIsogramFile {
    pub fn spec(&self) -> Result<BennettIsogramSpec> {
        match self.b {
            Some(b) if !self.derive => BennettIsogramSpec::new(self.alpha, self.beta, self.a, b, self.branch),
            _ => BennettIsogramSpec::from_basis(self.alpha, self.beta, self.a, self.branch),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SpecFile {
    Spherical8(EightBarSpec),
    Spatial8(SpatialEightBarSpec),
    SphericalIsogram(SphericalIsogramFile),
    BennettIsogram(BennettIsogramFile),
}

impl SpecFile {
    pub fn kind(&self) -> &'static str {
        match self {
            SpecFile::Spherical8(_) => "spherical8",
            SpecFile::Spatial8(_) => "spatial8",
            SpecFile::SphericalIsogram(_) => "spherical-isogram",
            SpecFile::BennettIsogram(_) => "bennett-isogram",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut table: toml::Table = text.parse().map_err(|e: toml::de::Error| Error::spec(format!("TOML: {}", e.message())))?;
        match table.remove("schema_version") {
            Some(toml::Value::Integer(SCHEMA_VERSION)) => {}
            Some(v) => return Err(Error::spec(format!("unsupported schema_version {v}, expected {SCHEMA_VERSION}"))),
            None => return Err(Error::spec("missing schema_version")),
        }
        let kind = match table.remove("kind") {
            Some(toml::Value::String(k)) => k,
            Some(v) => return Err(Error::spec(format!("kind must be a string, got {v}"))),
            None => return Err(Error::spec("missing kind")),
        };
        let rest = toml::Value::Table(table);
        fn fields<T: for<'de> Deserialize<'de>>(v: toml::Value) -> Result<T> {
            v.try_into().map_err(|e: toml::de::Error| Error::spec(e.message().to_string()))
        }
        Ok(match kind.as_str() {
            "spherical8" => SpecFile::Spherical8(fields(rest)?),
            "spatial8" => SpecFile::Spatial8(fields(rest)?),
            "spherical-isogram" => SpecFile::SphericalIsogram(fields(rest)?),
            "bennett-isogram" => SpecFile::BennettIsogram(fields(rest)?),
            k => {
                return Err(Error::spec(format!(
                    "unknown kind {k:?}; expected spherical8, spatial8, spherical-isogram or bennett-isogram"
                )))
            }
        })
    }

    pub fn to_toml(&self) -> String {
        fn body<T: Serialize>(v: &T) -> String {
            toml::to_string(v).expect("spec fields serialize")
        }
        let fields = match self {
            SpecFile::Spherical8(s) => body(s),
            SpecFile::Spatial8(s) => body(s),
            SpecFile::SphericalIsogram(s) => body(s),
            SpecFile::BennettIsogram(s) => body(s),
        };
        format!("schema_version = {SCHEMA_VERSION}\nkind = \"{}\"\n{fields}", self.kind())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SPHERICAL: &str = r#"
schema_version = 1
kind = "spherical8"
u1 = 0.0
u2 = 1.0471975511965976
u3 = 1.8325957145940461
beta1 = 0.7853981633974483
beta2 = 0.6283185307179586
branch1 = "plus"
branch2 = "plus"
derive = true
"#;

    #[test]
    fn parses_and_round_trips() {
        let s = SpecFile::parse(SPHERICAL).unwrap();
        assert_eq!(s.kind(), "spherical8");
        assert_eq!(SpecFile::parse(&s.to_toml()).unwrap(), s);
    }

    #[test]
    fn rejects_unknown_fields_and_versions() {
        let e = SpecFile::parse(&SPHERICAL.replace("derive = true", "derive = true\ncolour = 3")).unwrap_err();
        assert!(e.to_string().contains("colour"), "{e}");
        let e = SpecFile::parse(&SPHERICAL.replace("schema_version = 1", "schema_version = 2")).unwrap_err();
        assert!(e.to_string().contains("schema_version"));
        assert!(SpecFile::parse(&SPHERICAL.replace("spherical8", "planar4")).is_err());
    }

    #[test]
    fn bennett_offset_is_derived() {
        let f = BennettIsogramFile { alpha: 1.0, beta: 0.5, a: 2.0, b: None, branch: Branch::Plus, derive: false };
        let s = f.spec().unwrap();
        assert!((s.b - 2.0 * 0.5f64.sin() / 1.0f64.sin()).abs() < 1e-15);
    }
}
