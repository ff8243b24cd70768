use ib_geometry::{AffineSubspace, Section};
use ib_numkit::{rank, RealMatrix};
use serde::{Deserialize, Serialize};

use crate::{ModelError, OutcomeSpace, Result};

/// An arm with its embedding into a coordinate space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Arm {
    pub label: String,
    pub embedding: Vec<f64>,
}

impl Arm {
    pub fn new(label: impl Into<String>, embedding: Vec<f64>) -> Self {
        Arm {
            label: label.into(),
            embedding,
        }
    }
}

/// Bilinear constraint map `F(x, z, y)_w = sum_ij T_x[w][i][j] z_i y_j` on a
/// finite arm grid, with a finite grid of hypotheses `θ in Z`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypothesisFamily {
    pub arms: Vec<Arm>,
    pub dim_z: usize,
    pub dim_w: usize,
    #[serde(rename = "H")]
    pub hypotheses: Vec<Vec<f64>>,
    #[serde(rename = "F")]
    pub tensors: Vec<Vec<Vec<Vec<f64>>>>,
}

impl HypothesisFamily {
    pub fn num_arms(&self) -> usize {
        self.arms.len()
    }

    pub fn num_hypotheses(&self) -> usize {
        self.hypotheses.len()
    }

    pub fn dim_y(&self) -> usize {
        self.tensors
            .first()
            .and_then(|t| t.first())
            .and_then(|t| t.first())
            .map_or(0, |r| r.len())
    }

    pub fn theta(&self, t: usize) -> Result<&[f64]> {
        self.hypotheses
            .get(t)
            .map(|v| v.as_slice())
            .ok_or(ModelError::IndexOutOfGrid(t))
    }

    fn tensor(&self, x: usize) -> Result<&Vec<Vec<Vec<f64>>>> {
        self.tensors.get(x).ok_or(ModelError::IndexOutOfGrid(x))
    }

    /// `F_{xz}` as a `dim_w × dim_y` matrix, for any `z in Z`.
    pub fn f_matrix_z(&self, x: usize, z: &[f64]) -> Result<RealMatrix> {
        let t = self.tensor(x)?;
        let dy = self.dim_y();
        let mut m = RealMatrix::zeros(self.dim_w, dy);
        for (w, tw) in t.iter().enumerate() {
            for (i, ti) in tw.iter().enumerate() {
                if z[i] == 0.0 {
                    continue;
                }
                for (j, v) in ti.iter().enumerate() {
                    m[(w, j)] += v * z[i];
                }
            }
        }
        Ok(m)
    }

    /// `F_{xθ}` for a grid hypothesis.
    pub fn f_matrix(&self, x: usize, theta: usize) -> Result<RealMatrix> {
        let z = self.theta(theta)?.to_vec();
        self.f_matrix_z(x, &z)
    }

    /// `F_x^y`: the map `z -> F(x, z, y)` as a `dim_w × dim_z` matrix.
    pub fn f_matrix_y(&self, x: usize, y: &[f64]) -> Result<RealMatrix> {
        let t = self.tensor(x)?;
        let mut m = RealMatrix::zeros(self.dim_w, self.dim_z);
        for (w, tw) in t.iter().enumerate() {
            for (i, ti) in tw.iter().enumerate() {
                m[(w, i)] = ti.iter().zip(y).map(|(a, b)| a * b).sum();
            }
        }
        Ok(m)
    }

    /// `F(x, z, y)`.
    pub fn apply(&self, x: usize, z: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        let m = self.f_matrix_y(x, y)?;
        Ok((0..self.dim_w)
            .map(|w| (0..self.dim_z).map(|i| m[(w, i)] * z[i]).sum())
            .collect())
    }

    /// The subspace `{y : F_{xθ} y = 0}`.
    pub fn kernel_subspace(&self, x: usize, theta: usize) -> Result<AffineSubspace> {
        let f = self.f_matrix(x, theta)?;
        let rows = f.nrows();
        Ok(AffineSubspace::new(f, ib_numkit::RealVector::zeros(rows))?)
    }

    /// The credal section `K_θ(x)⁺ = {y in body : F_{xθ} y = 0}`.
    pub fn credal_section(&self, space: &OutcomeSpace, x: usize, theta: usize) -> Result<Section> {
        Ok(Section::new(
            space.body.clone(),
            self.kernel_subspace(x, theta)?,
        ))
    }

    /// Structural checks on sizes; per-cell assumptions are in `validate_family`.
    pub fn check_shapes(&self, space: &OutcomeSpace) -> Result<()> {
        let bad = |m: String| Err(ModelError::InvalidScenario(m));
        if self.arms.is_empty() {
            return bad("empty arm grid".into());
        }
        if self.hypotheses.is_empty() {
            return bad("empty hypothesis grid".into());
        }
        if self.tensors.len() != self.arms.len() {
            return bad(format!(
                "{} tensors for {} arms",
                self.tensors.len(),
                self.arms.len()
            ));
        }
        if self.hypotheses.iter().any(|h| h.len() != self.dim_z) {
            return bad("hypothesis length differs from dim_z".into());
        }
        for (x, t) in self.tensors.iter().enumerate() {
            if t.len() != self.dim_w
                || t.iter()
                    .any(|tw| tw.len() != self.dim_z || tw.iter().any(|r| r.len() != space.dim))
            {
                return bad(format!("tensor of arm {x} has the wrong shape"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub arm: usize,
    pub theta: usize,
    pub onto: bool,
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub structural: Vec<String>,
    pub cells: Vec<CellReport>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.structural.is_empty() && self.cells.iter().all(|c| c.onto && c.feasible)
    }

    pub fn failures(&self) -> Vec<&CellReport> {
        self.cells
            .iter()
            .filter(|c| !(c.onto && c.feasible))
            .collect()
    }
}

/// Check that every `F_{xθ}` is onto and every credal section is nonempty.
pub fn validate_family(fam: &HypothesisFamily, space: &OutcomeSpace) -> ValidationReport {
    let mut structural = Vec::new();
    if let Err(e) = space.validate() {
        structural.push(e.to_string());
    }
    if let Err(e) = fam.check_shapes(space) {
        structural.push(e.to_string());
        return ValidationReport {
            structural,
            cells: Vec::new(),
        };
    }
    let mut cells = Vec::new();
    for x in 0..fam.num_arms() {
        for t in 0..fam.num_hypotheses() {
            let f = fam.f_matrix(x, t).expect("shapes checked");
            let onto = rank(&f) == fam.dim_w;
            let feasible = fam
                .credal_section(space, x, t)
                .and_then(|s| Ok(!s.is_empty()?))
                .unwrap_or(false);
            cells.push(CellReport {
                arm: x,
                theta: t,
                onto,
                feasible,
            });
        }
    }
    ValidationReport { structural, cells }
}
