//! Robot snapshot JSON.
//!
//! ```json
//! {
//!   "name": "unit_quadruped",
//!   "com": [0, 0, 0],
//!   "limbs": [{"id": "lf", "jacobian": [[1,0,0],[0,1,0],[0,0,1]],
//!              "tau_min": [-1,-1,-1], "tau_max": [1,1,1],
//!              "bias": [0,0,0], "foot": [0.5, 0.3, 0]}],
//!   "contacts": [{"limb_id": "lf", "normal": [0,0,1], "mu": 0.5, "num_edges": 4}]
//! }
//! ```
//!
//! `bias` is optional. Contacts are matched to limbs by `limb_id`.

use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::Tolerance;
use crate::limb::{ContactSpec, LimbModel, MAX_JOINTS};
use crate::wrench::RobotSnapshot;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SnapshotFile {
    pub name: String,
    pub com: [f64; 3],
    pub limbs: Vec<LimbEntry>,
    pub contacts: Vec<ContactEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LimbEntry {
    pub id: String,
    pub jacobian: Vec<Vec<f64>>,
    pub tau_min: Vec<f64>,
    pub tau_max: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bias: Option<Vec<f64>>,
    pub foot: [f64; 3],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ContactEntry {
    pub limb_id: String,
    pub normal: [f64; 3],
    pub mu: f64,
    pub num_edges: usize,
}

/// Unknown keys are an error in strict mode and ignored otherwise.
pub fn parse_snapshot(text: &str, strict: bool, tol: &Tolerance) -> Result<RobotSnapshot> {
    let file = parse_file(text, strict)?;
    file.to_snapshot(tol)
}

pub fn load_snapshot(path: impl AsRef<Path>, strict: bool, tol: &Tolerance) -> Result<RobotSnapshot> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        context: format!("reading {}", path.display()),
        source,
    })?;
    parse_snapshot(&text, strict, tol).map_err(|e| match e {
        Error::Field { path: field, message } => Error::Field {
            path: format!("{}: {field}", path.display()),
            message,
        },
        other => other,
    })
}

fn parse_file(text: &str, strict: bool) -> Result<SnapshotFile> {
    let mut ignored = Vec::new();
    let mut json = serde_json::Deserializer::from_str(text);
    let mut track = serde_path_to_error::Track::new();
    let de = serde_path_to_error::Deserializer::new(&mut json, &mut track);
    let parsed: std::result::Result<SnapshotFile, _> =
        serde_ignored::deserialize(de, |p| ignored.push(p.to_string()));
    let file = match parsed {
        Ok(f) => f,
        Err(e) => {
            let path = track.path().to_string();
            return Err(Error::field(
                if path == "." { "snapshot".to_string() } else { path },
                format!("{e}"),
            ));
        }
    };
    json.end().map_err(|e| Error::field("snapshot", e.to_string()))?;
    if strict {
        if let Some(p) = ignored.first() {
            return Err(Error::field(bracket_path(p), "unknown key (use lax mode to ignore)"));
        }
    }
    Ok(file)
}

/// `limbs.0.foo` to `limbs[0].foo`.
fn bracket_path(dotted: &str) -> String {
    let mut out = String::new();
    for seg in dotted.split('.') {
        if !seg.is_empty() && seg.bytes().all(|b| b.is_ascii_digit()) {
            out.push_str(&format!("[{seg}]"));
        } else {
            if !out.is_empty() {
                out.push('.');
            }
            out.push_str(seg);
        }
    }
    out
}

fn finite(path: &str, v: &[f64]) -> Result<()> {
    match v.iter().position(|x| !x.is_finite()) {
        Some(j) => Err(Error::field(format!("{path}[{j}]"), "must be finite")),
        None => Ok(()),
    }
}

impl SnapshotFile {
    pub fn to_snapshot(&self, tol: &Tolerance) -> Result<RobotSnapshot> {
        finite("com", &self.com)?;
        if self.limbs.is_empty() {
            return Err(Error::field("limbs", "at least one limb is required"));
        }
        let mut limbs = Vec::with_capacity(self.limbs.len());
        for (i, l) in self.limbs.iter().enumerate() {
            let at = |f: &str| format!("limbs[{i}].{f}");
            if self.limbs[..i].iter().any(|o| o.id == l.id) {
                return Err(Error::field(at("id"), format!("duplicate limb id `{}`", l.id)));
            }
            if l.jacobian.len() != 3 {
                return Err(Error::field(
                    at("jacobian"),
                    format!("expected 3 rows, found {}", l.jacobian.len()),
                ));
            }
            let n = l.jacobian[0].len();
            if n == 0 {
                return Err(Error::field(at("jacobian"), "rows are empty"));
            }
            if n > MAX_JOINTS {
                return Err(Error::field(
                    at("jacobian"),
                    format!("{n} joints exceeds the cap of {MAX_JOINTS}"),
                ));
            }
            for (r, row) in l.jacobian.iter().enumerate() {
                if row.len() != n {
                    return Err(Error::field(
                        format!("limbs[{i}].jacobian[{r}]"),
                        format!("expected {n} columns, found {}", row.len()),
                    ));
                }
                finite(&format!("limbs[{i}].jacobian[{r}]"), row)?;
            }
            let bias = l.bias.clone().unwrap_or_else(|| vec![0.0; n]);
            for (name, v) in [("tau_min", &l.tau_min), ("tau_max", &l.tau_max), ("bias", &bias)] {
                if v.len() != n {
                    return Err(Error::field(
                        at(name),
                        format!("expected {n} entries (one per joint), found {}", v.len()),
                    ));
                }
                finite(&at(name), v)?;
            }
            if let Some(j) = (0..n).find(|&j| l.tau_min[j] >= l.tau_max[j]) {
                return Err(Error::field(
                    at("tau_min"),
                    format!(
                        "tau_min[{j}] = {} must be below tau_max[{j}] = {}",
                        l.tau_min[j], l.tau_max[j]
                    ),
                ));
            }
            finite(&at("foot"), &l.foot)?;
            let j = DMatrix::from_fn(3, n, |r, c| l.jacobian[r][c]);
            limbs.push(
                LimbModel::new(l.id.clone(), j, l.tau_min.clone(), l.tau_max.clone(), l.foot)
                    .with_bias(bias),
            );
        }

        let mut contacts: Vec<Option<ContactSpec>> = vec![None; limbs.len()];
        for (k, c) in self.contacts.iter().enumerate() {
            let at = |f: &str| format!("contacts[{k}].{f}");
            let Some(i) = self.limbs.iter().position(|l| l.id == c.limb_id) else {
                return Err(Error::field(at("limb_id"), format!("no limb with id `{}`", c.limb_id)));
            };
            if contacts[i].is_some() {
                return Err(Error::field(
                    at("limb_id"),
                    format!("limb `{}` already has a contact", c.limb_id),
                ));
            }
            finite(&at("normal"), &c.normal)?;
            let norm = c.normal.iter().map(|x| x * x).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > tol.eps_rank {
                return Err(Error::field(at("normal"), format!("must be a unit vector (length {norm})")));
            }
            if !(c.mu.is_finite() && c.mu > 0.0) {
                return Err(Error::field(at("mu"), format!("must be positive, found {}", c.mu)));
            }
            if c.num_edges < 3 {
                return Err(Error::field(
                    at("num_edges"),
                    format!("at least 3 edges required, found {}", c.num_edges),
                ));
            }
            contacts[i] = Some(ContactSpec {
                normal: c.normal,
                mu: c.mu,
                num_edges: c.num_edges,
                foot_position: self.limbs[i].foot,
            });
        }
        let contacts = contacts
            .into_iter()
            .enumerate()
            .map(|(i, c)| {
                c.ok_or_else(|| Error::field("contacts", format!("limb `{}` has no contact", self.limbs[i].id)))
            })
            .collect::<Result<Vec<_>>>()?;

        let robot = RobotSnapshot {
            name: self.name.clone(),
            com: self.com,
            limbs,
            contacts,
        };
        robot.validate(tol)?;
        Ok(robot)
    }

    pub fn from_snapshot(robot: &RobotSnapshot) -> Self {
        SnapshotFile {
            name: robot.name.clone(),
            com: robot.com,
            limbs: robot
                .limbs
                .iter()
                .map(|l| LimbEntry {
                    id: l.id.clone(),
                    jacobian: l.jacobian.row_iter().map(|r| r.iter().copied().collect()).collect(),
                    tau_min: l.tau_min.clone(),
                    tau_max: l.tau_max.clone(),
                    bias: Some(l.bias.clone()),
                    foot: l.foot_position,
                })
                .collect(),
            contacts: robot
                .limbs
                .iter()
                .zip(&robot.contacts)
                .map(|(l, c)| ContactEntry {
                    limb_id: l.id.clone(),
                    normal: c.normal,
                    mu: c.mu,
                    num_edges: c.num_edges,
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("snapshot serializes")
    }
}
