//! Surface configuration files.

use std::fmt;
use std::path::Path;

use linecurve::{HarmonicTerm, Matrix3, SupportSurface, Vector3};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Largest accepted magnitude of any number in a configuration.
pub const MAX_MAGNITUDE: f64 = 1e6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum SurfaceConfig {
    Sphere {
        center: [f64; 3],
        radius: f64,
    },
    Ellipsoid {
        semiaxes: [f64; 3],
        center: [f64; 3],
        /// Row-major; columns are the body axes in world coordinates.
        rotation: [[f64; 3]; 3],
    },
    Harmonic {
        base: f64,
        terms: Vec<TermConfig>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermConfig {
    pub l: u32,
    pub m: i32,
    pub c: f64,
}

/// Problems with the inputs rather than with the geometry.
#[derive(Debug)]
pub enum InputError {
    Schema(String),
    NonConvex { worst_margin: f64, direction: [f64; 3] },
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::Schema(msg) => write!(f, "invalid input: {msg}"),
            InputError::NonConvex {
                worst_margin,
                direction,
            } => write!(
                f,
                "surface is not convex: smallest radius {worst_margin:e} at normal {direction:?}"
            ),
        }
    }
}

impl std::error::Error for InputError {}

impl SurfaceConfig {
    pub fn parse(text: &str) -> Result<Self, InputError> {
        serde_json::from_str(text).map_err(|e| InputError::Schema(e.to_string()))
    }

    fn numbers(&self) -> Vec<f64> {
        match self {
            SurfaceConfig::Sphere { center, radius } => center.iter().chain([radius]).copied().collect(),
            SurfaceConfig::Ellipsoid {
                semiaxes,
                center,
                rotation,
            } => semiaxes
                .iter()
                .chain(center)
                .chain(rotation.iter().flatten())
                .copied()
                .collect(),
            SurfaceConfig::Harmonic { base, terms } => {
                std::iter::once(*base).chain(terms.iter().map(|t| t.c)).collect()
            }
        }
    }

    pub fn to_surface(&self) -> Result<SupportSurface, InputError> {
        if let Some(x) = self
            .numbers()
            .into_iter()
            .find(|x| x.is_nan() || x.abs() > MAX_MAGNITUDE)
        {
            return Err(InputError::Schema(format!(
                "value {x:e} exceeds {MAX_MAGNITUDE:e} in magnitude"
            )));
        }
        let built = match self {
            SurfaceConfig::Sphere { center, radius } => SupportSurface::sphere(Vector3::from(*center), *radius),
            SurfaceConfig::Ellipsoid {
                semiaxes,
                center,
                rotation,
            } => {
                let r = rotation;
                let q = Matrix3::new(
                    r[0][0], r[0][1], r[0][2], r[1][0], r[1][1], r[1][2], r[2][0], r[2][1], r[2][2],
                );
                SupportSurface::ellipsoid(*semiaxes, q, Vector3::from(*center))
            }
            SurfaceConfig::Harmonic { base, terms } => SupportSurface::harmonic(
                *base,
                terms
                    .iter()
                    .map(|t| HarmonicTerm {
                        l: t.l,
                        m: t.m,
                        coefficient: t.c,
                    })
                    .collect(),
            ),
        };
        built.map_err(|e| InputError::Schema(e.to_string()))
    }
}

/// A parsed configuration with the digest of the bytes it came from.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub name: String,
    pub sha256: String,
    pub config: SurfaceConfig,
}

pub fn load(path: &Path) -> anyhow::Result<LoadedConfig> {
    let bytes = std::fs::read(path)?;
    let text = std::str::from_utf8(&bytes).map_err(|e| InputError::Schema(format!("{}: {e}", path.display())))?;
    let config = serde_json::from_str(text).map_err(|e| InputError::Schema(format!("{}: {e}", path.display())))?;
    Ok(LoadedConfig {
        name: path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default(),
        sha256: hex::encode(Sha256::digest(&bytes)),
        config,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_each_kind() {
        let s = SurfaceConfig::parse(r#"{"type":"sphere","center":[0,0,1],"radius":2}"#).unwrap();
        assert!(s.to_surface().unwrap().is_sphere());
        let e = SurfaceConfig::parse(
            r#"{"type":"ellipsoid","semiaxes":[1,1.2,1.5],"center":[0,0,0],"rotation":[[1,0,0],[0,1,0],[0,0,1]]}"#,
        )
        .unwrap();
        e.to_surface().unwrap();
        let h = SurfaceConfig::parse(r#"{"type":"harmonic","base":1,"terms":[{"l":2,"m":1,"c":0.05}]}"#).unwrap();
        h.to_surface().unwrap();
    }

    #[test]
    fn rejects_unknown_fields() {
        assert!(SurfaceConfig::parse(r#"{"type":"sphere","center":[0,0,1],"radius":2,"colour":"red"}"#).is_err());
        assert!(
            SurfaceConfig::parse(r#"{"type":"harmonic","base":1,"terms":[{"l":2,"m":1,"c":0.05,"x":1}]}"#).is_err()
        );
        assert!(SurfaceConfig::parse(r#"{"type":"torus","radius":2}"#).is_err());
    }

    #[test]
    fn invalid_values_are_schema_errors() {
        for text in [
            r#"{"type":"sphere","center":[0,0,1],"radius":-2}"#,
            r#"{"type":"ellipsoid","semiaxes":[1,1,1],"center":[0,0,0],"rotation":[[1,0,0],[0,2,0],[0,0,1]]}"#,
            r#"{"type":"harmonic","base":1,"terms":[{"l":9,"m":1,"c":0.05}]}"#,
            r#"{"type":"harmonic","base":1,"terms":[{"l":2,"m":3,"c":0.05}]}"#,
            r#"{"type":"sphere","center":[1e300,0,1],"radius":2}"#,
        ] {
            let cfg = SurfaceConfig::parse(text).unwrap();
            assert!(matches!(cfg.to_surface(), Err(InputError::Schema(_))), "{text}");
        }
    }
}
