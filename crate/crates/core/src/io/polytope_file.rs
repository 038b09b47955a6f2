//! Polytope interchange JSON. Floats are written in shortest round-trip
//! form, so write-then-read reproduces every coordinate bit for bit.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{project, HPolytope, Tolerance, VPolytope};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeFile {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub affine_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rays: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub halfspaces: Option<Halfspaces>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<Meta>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Halfspaces {
    pub normals: Vec<Vec<f64>>,
    pub offsets: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Meta {
    pub source: String,
    pub tolerance: Tolerance,
    pub stats: FileStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileStats {
    pub n_vertices: usize,
    pub n_facets: usize,
    pub build_ms: f64,
}

impl PolytopeFile {
    pub fn new(dim: usize) -> Self {
        PolytopeFile {
            dim,
            affine_dim: None,
            vertices: None,
            rays: None,
            halfspaces: None,
            meta: None,
        }
    }

    pub fn with_v(mut self, v: &VPolytope) -> Self {
        self.affine_dim = Some(v.affine_dim());
        self.vertices = Some(v.vertices().to_vec());
        self.rays = Some(v.rays().to_vec());
        self
    }

    pub fn with_h(mut self, h: &HPolytope) -> Self {
        self.halfspaces = Some(Halfspaces {
            normals: h.normals().to_vec(),
            offsets: h.offsets().to_vec(),
        });
        self
    }

    pub fn with_meta(mut self, source: impl Into<String>, tol: &Tolerance, build_ms: f64) -> Self {
        let n_vertices = self.vertices.as_ref().map_or(0, |v| v.len());
        let n_facets = self.h().ok().flatten().map_or(0, |h| {
            if h.is_empty() {
                0
            } else {
                h.num_facets()
            }
        });
        self.meta = Some(Meta {
            source: source.into(),
            tolerance: *tol,
            stats: FileStats {
                n_vertices,
                n_facets,
                build_ms,
            },
        });
        self
    }

    /// The V-description, if present.
    pub fn v(&self) -> Result<Option<VPolytope>> {
        let Some(vertices) = &self.vertices else {
            return Ok(None);
        };
        let rays = self.rays.clone().unwrap_or_default();
        let affine_dim = self.affine_dim.unwrap_or(if vertices.is_empty() { 0 } else { self.dim });
        VPolytope::from_parts(self.dim, vertices.clone(), rays, affine_dim).map(Some)
    }

    /// The H-description, if present.
    pub fn h(&self) -> Result<Option<HPolytope>> {
        let Some(h) = &self.halfspaces else {
            return Ok(None);
        };
        if h.offsets.iter().chain(h.normals.iter().flatten()).any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("non-finite halfspace coefficient".into()));
        }
        HPolytope::from_parts(self.dim, h.normals.clone(), h.offsets.clone()).map(Some)
    }

    /// Empty when whichever description is present says so.
    pub fn is_empty(&self) -> bool {
        match (&self.vertices, self.h()) {
            (Some(v), _) => v.is_empty(),
            (None, Ok(Some(h))) => h.is_empty(),
            _ => false,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("polytope file serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let mut json = serde_json::Deserializer::from_str(text);
        let file: PolytopeFile = serde_path_to_error::deserialize(&mut json).map_err(|e| {
            let path = e.path().to_string();
            Error::field(
                if path == "." { "polytope".to_string() } else { path },
                e.into_inner().to_string(),
            )
        })?;
        json.end().map_err(|e| Error::field("polytope", e.to_string()))?;
        if file.dim == 0 {
            return Err(Error::field("dim", "must be positive"));
        }
        Ok(file)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            context: format!("reading {}", path.display()),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut text = self.to_json();
        text.push('\n');
        std::fs::write(path, text).map_err(|source| Error::Io {
            context: format!("writing {}", path.display()),
            source,
        })
    }
}

/// Orthogonal projection of the file's V-description onto `dims`.
pub fn project_file(input: &PolytopeFile, dims: &[usize], tol: &Tolerance) -> Result<PolytopeFile> {
    let v = input.v()?.ok_or_else(|| {
        Error::InvalidInput(
            "input has no vertex description; recompute it with `--rep both` or `--rep v`".into(),
        )
    })?;
    let started = std::time::Instant::now();
    let p = project(&v, dims, tol)?;
    let ms = started.elapsed().as_secs_f64() * 1e3;
    let source = match &input.meta {
        Some(m) => format!("{} projected onto {dims:?}", m.source),
        None => format!("projection onto {dims:?}"),
    };
    Ok(PolytopeFile::new(dims.len()).with_v(&p).with_meta(source, tol, ms))
}
