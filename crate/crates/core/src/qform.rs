//! Symmetric bilinear forms over a number field: congruence
//! diagonalization, Galois conjugates, and signatures at real places.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactfield::json::{elem_from_json, elem_to_json, join};
use crate::exactfield::{same_field, FieldDescriptor, FieldElem};

/// Symmetric non-degenerate Gram matrix over `E`.
#[derive(Clone, Debug, PartialEq)]
pub struct GramForm {
    field: Arc<FieldDescriptor>,
    entries: Vec<Vec<FieldElem>>,
}

/// A diagonalization `Pᵀ G P = diag(entries)` with its certificate `P`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagForm {
    pub field: Arc<FieldDescriptor>,
    pub entries: Vec<FieldElem>,
    pub congruence: Vec<Vec<FieldElem>>,
}

impl GramForm {
    pub fn new(field: &Arc<FieldDescriptor>, entries: Vec<Vec<FieldElem>>) -> Result<Self> {
        let m = entries.len();
        if m == 0 {
            return Err(Error::InvalidGram("empty matrix".into()));
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != m {
                return Err(Error::InvalidGram(format!("row {i} has length {}", row.len())));
            }
            for (j, x) in row.iter().enumerate() {
                if !same_field(x.field(), field) {
                    return Err(Error::FieldMismatch);
                }
                if *x != entries[j][i] {
                    return Err(Error::InvalidGram(format!("not symmetric at ({i}, {j})")));
                }
            }
        }
        let g = GramForm {
            field: Arc::clone(field),
            entries,
        };
        g.diagonalize()?;
        Ok(g)
    }

    pub fn diagonal(field: &Arc<FieldDescriptor>, diag: Vec<FieldElem>) -> Result<Self> {
        let m = diag.len();
        let mut entries = vec![vec![FieldElem::zero(field); m]; m];
        for (i, x) in diag.into_iter().enumerate() {
            entries[i][i] = x;
        }
        Self::new(field, entries)
    }

    pub fn field(&self) -> &Arc<FieldDescriptor> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<FieldElem>] {
        &self.entries
    }

    /// Symmetric Gauss elimination by congruence.
    ///
    /// Pivot on the first nonzero diagonal entry of the active block; if the
    /// whole active diagonal vanishes, replace `e_i` by `e_i + e_j` for the
    /// first nonzero off-diagonal entry `(i, j)`.
    pub fn diagonalize(&self) -> Result<DiagForm> {
        let m = self.dim();
        let f = &self.field;
        let mut a = self.entries.clone();
        let mut p: Vec<Vec<FieldElem>> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| if i == j { FieldElem::one(f) } else { FieldElem::zero(f) })
                    .collect()
            })
            .collect();

        for k in 0..m {
            let pivot = match (k..m).find(|&j| !a[j][j].is_zero()) {
                Some(j) => j,
                None => {
                    let (i, j) = (k..m)
                        .flat_map(|i| (k..m).map(move |j| (i, j)))
                        .find(|&(i, j)| i != j && !a[i][j].is_zero())
                        .ok_or(Error::DegenerateForm)?;
                    add_basis_vector(&mut a, &mut p, i, j);
                    i
                }
            };
            if pivot != k {
                swap_basis_vectors(&mut a, &mut p, k, pivot);
            }
            let inv = a[k][k].inverse()?;
            for j in k + 1..m {
                if a[k][j].is_zero() {
                    continue;
                }
                let factor = &a[k][j] * &inv;
                // e_j ← e_j − factor·e_k
                for r in 0..m {
                    let t = &factor * &p[r][k];
                    p[r][j] = &p[r][j] - &t;
                }
                for c in 0..m {
                    let t = &factor * &a[k][c];
                    a[j][c] = &a[j][c] - &t;
                }
                for r in 0..m {
                    let t = &factor * &a[r][k];
                    a[r][j] = &a[r][j] - &t;
                }
            }
        }
        Ok(DiagForm {
            field: Arc::clone(f),
            entries: (0..m).map(|i| a[i][i].clone()).collect(),
            congruence: p,
        })
    }

    /// `q_i = σ_i(Q)` entrywise (1-based `i`).
    pub fn conjugate_form(&self, i: usize) -> Result<GramForm> {
        let k = self.field.check_index(i)?;
        Ok(self.conjugate0(k))
    }

    pub(crate) fn conjugate0(&self, k: usize) -> GramForm {
        GramForm {
            field: Arc::clone(&self.field),
            entries: self
                .entries
                .iter()
                .map(|row| row.iter().map(|x| x.apply_aut0(k)).collect())
                .collect(),
        }
    }

    /// `(positive, negative)` counts at real place `i` (1-based).
    pub fn signature(&self, i: usize) -> Result<(usize, usize)> {
        let k = self.field.check_index(i)?;
        Ok(self.diagonalize()?.signature0(k))
    }

    /// Passes when `m ≥ 3`, the signature at place 1 is `(2, m − 2)`, and
    /// every other place is negative definite. For `m > 3` a wrong signature
    /// profile is reported as a warning only.
    pub fn validate_k3_rm(&self) -> ValidationReport {
        let m = self.dim();
        let d = self.field.degree();
        let mut checks = vec![Check {
            name: "rank".into(),
            passed: m >= 3,
            severity: Severity::Error,
            detail: format!("dim_E T = {m}, need >= 3"),
        }];
        match self.diagonalize() {
            Err(_) => checks.push(Check {
                name: "non-degenerate".into(),
                passed: false,
                severity: Severity::Error,
                detail: "form is degenerate".into(),
            }),
            Ok(diag) => {
                let profile_severity = if m > 3 {
                    Severity::Warning
                } else {
                    Severity::Error
                };
                for k in 0..d {
                    let (pos, neg) = diag.signature0(k);
                    let want = if k == 0 {
                        (2, m.saturating_sub(2))
                    } else {
                        (0, m)
                    };
                    checks.push(Check {
                        name: format!("signature at place {}", k + 1),
                        passed: (pos, neg) == want,
                        severity: profile_severity,
                        detail: format!("({pos}+, {neg}-), expected ({}+, {}-)", want.0, want.1),
                    });
                }
            }
        }
        ValidationReport::from_checks(checks)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "dim": self.dim(),
            "entries": self.entries.iter()
                .map(|row| row.iter().map(elem_to_json).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value, field: &Arc<FieldDescriptor>, path: &str) -> Result<Self> {
        let dim_key = join(path, "dim");
        let dim = v
            .get("dim")
            .ok_or_else(|| Error::malformed(&dim_key, "missing key"))?
            .as_u64()
            .ok_or_else(|| Error::malformed(&dim_key, "expected a positive integer"))?
            as usize;
        let ent_key = join(path, "entries");
        let rows = v
            .get("entries")
            .ok_or_else(|| Error::malformed(&ent_key, "missing key"))?
            .as_array()
            .ok_or_else(|| Error::malformed(&ent_key, "expected an array"))?;
        if rows.len() != dim {
            return Err(Error::malformed(&ent_key, format!("expected {dim} rows")));
        }
        let mut entries = Vec::with_capacity(dim);
        for (i, row) in rows.iter().enumerate() {
            let rk = format!("{ent_key}[{i}]");
            let row = row
                .as_array()
                .filter(|r| r.len() == dim)
                .ok_or_else(|| Error::malformed(&rk, format!("expected {dim} entries")))?;
            entries.push(
                row.iter()
                    .enumerate()
                    .map(|(j, x)| elem_from_json(x, field, &format!("{rk}[{j}]")))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        GramForm::new(field, entries)
    }
}

fn swap_basis_vectors(a: &mut [Vec<FieldElem>], p: &mut [Vec<FieldElem>], i: usize, j: usize) {
    a.swap(i, j);
    for row in a.iter_mut() {
        row.swap(i, j);
    }
    for row in p.iter_mut() {
        row.swap(i, j);
    }
}

fn add_basis_vector(a: &mut [Vec<FieldElem>], p: &mut [Vec<FieldElem>], i: usize, j: usize) {
    let m = a.len();
    for row in p.iter_mut() {
        row[i] = &row[i] + &row[j];
    }
    for c in 0..m {
        a[i][c] = &a[i][c] + &a[j][c];
    }
    for r in 0..m {
        a[r][i] = &a[r][i] + &a[r][j];
    }
}

impl DiagForm {
    pub(crate) fn signature0(&self, k: usize) -> (usize, usize) {
        let mut pos = 0;
        let mut neg = 0;
        for x in &self.entries {
            match x.sign_at0(k) {
                1 => pos += 1,
                -1 => neg += 1,
                _ => {}
            }
        }
        (pos, neg)
    }

    /// Re-checks `Pᵀ G P = diag` exactly.
    pub fn verify(&self, g: &GramForm) -> bool {
        let m = g.dim();
        let p = &self.congruence;
        if p.len() != m || self.entries.len() != m {
            return false;
        }
        let f = &self.field;
        for i in 0..m {
            for j in 0..m {
                let mut acc = FieldElem::zero(f);
                for r in 0..m {
                    if p[r][i].is_zero() {
                        continue;
                    }
                    for c in 0..m {
                        if p[c][j].is_zero() || g.entries[r][c].is_zero() {
                            continue;
                        }
                        acc = &acc + &(&(&p[r][i] * &g.entries[r][c]) * &p[c][j]);
                    }
                }
                let want = if i == j {
                    self.entries[i].clone()
                } else {
                    FieldElem::zero(f)
                };
                if acc != want {
                    return false;
                }
            }
        }
        true
    }

    /// The diagonal conjugated by `σ_{k+1}`.
    pub fn conjugate0(&self, k: usize) -> Vec<FieldElem> {
        self.entries.iter().map(|x| x.apply_aut0(k)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub severity: Severity,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub flagged: bool,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    fn from_checks(checks: Vec<Check>) -> Self {
        let passed = checks
            .iter()
            .all(|c| c.passed || c.severity == Severity::Warning);
        let flagged = checks
            .iter()
            .any(|c| !c.passed && c.severity == Severity::Warning);
        ValidationReport {
            passed,
            flagged,
            checks,
        }
    }
}
