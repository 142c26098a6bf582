//! Finite-dimensional associative algebras given by structure constants,
//! tensor products, twisted algebras with their Galois action, and the
//! corestriction as an invariant subalgebra.

mod galois;
pub mod linalg;

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde_json::{json, Value};

use crate::brauer::QuaternionSymbol;
use crate::error::{Error, Result};
use crate::exactfield::json::elem_to_json;
use crate::exactfield::{same_field, FieldDescriptor, FieldElem, Rational};
use linalg::{nullspace, symmetric_signature, SparseVec};

pub use galois::{build_zg, invariants, verify_twisted_iso, verify_twisted_iso_with, GaloisModuleAlgebra, InvariantAlgebra, QOperator};

/// Associativity is checked exhaustively at construction up to this
/// dimension.
pub const ASSOCIATIVITY_CHECK_LIMIT: usize = 64;

/// `u_i u_j = Σ_k c_{ijk} u_k`, stored sparsely per pair `(i, j)`.
#[derive(Clone, Debug)]
pub struct StructureAlgebra {
    field: Arc<FieldDescriptor>,
    dim: usize,
    table: Vec<Vec<Vec<(usize, FieldElem)>>>,
    unit: Vec<FieldElem>,
}

impl StructureAlgebra {
    /// Builds an algebra and checks the unit law, plus associativity when
    /// `dim <= ASSOCIATIVITY_CHECK_LIMIT`.
    pub fn new(
        field: &Arc<FieldDescriptor>,
        dim: usize,
        table: Vec<Vec<Vec<(usize, FieldElem)>>>,
        unit: Vec<FieldElem>,
    ) -> Result<Self> {
        let a = Self::new_unchecked(field, dim, table, unit)?;
        a.check_unit()?;
        if dim <= ASSOCIATIVITY_CHECK_LIMIT {
            a.check_associative()?;
        }
        Ok(a)
    }

    pub(crate) fn new_unchecked(
        field: &Arc<FieldDescriptor>,
        dim: usize,
        mut table: Vec<Vec<Vec<(usize, FieldElem)>>>,
        unit: Vec<FieldElem>,
    ) -> Result<Self> {
        if table.len() != dim || table.iter().any(|r| r.len() != dim) || unit.len() != dim {
            return Err(Error::InvalidAlgebra("table shape does not match dimension".into()));
        }
        for row in table.iter_mut() {
            for cell in row.iter_mut() {
                cell.retain(|(_, c)| !c.is_zero());
                if cell.iter().any(|(k, c)| *k >= dim || !same_field(c.field(), field)) {
                    return Err(Error::InvalidAlgebra("bad structure constant".into()));
                }
            }
        }
        Ok(StructureAlgebra {
            field: Arc::clone(field),
            dim,
            table,
            unit,
        })
    }

    pub fn field(&self) -> &Arc<FieldDescriptor> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &[FieldElem] {
        &self.unit
    }

    /// Sparse product `u_i u_j`.
    pub fn basis_product(&self, i: usize, j: usize) -> &[(usize, FieldElem)] {
        &self.table[i][j]
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> FieldElem {
        self.table[i][j]
            .iter()
            .find(|(t, _)| *t == k)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| FieldElem::zero(&self.field))
    }

    pub fn zero_vec(&self) -> Vec<FieldElem> {
        vec![FieldElem::zero(&self.field); self.dim]
    }

    pub fn basis_vec(&self, i: usize) -> Vec<FieldElem> {
        let mut v = self.zero_vec();
        v[i] = FieldElem::one(&self.field);
        v
    }

    pub fn mul(&self, x: &[FieldElem], y: &[FieldElem]) -> Vec<FieldElem> {
        let mut out = self.zero_vec();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let s = xi * yj;
                for (k, c) in &self.table[i][j] {
                    out[*k] = &out[*k] + &(&s * c);
                }
            }
        }
        out
    }

    pub fn check_unit(&self) -> Result<()> {
        for i in 0..self.dim {
            let e = self.basis_vec(i);
            if self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e {
                return Err(Error::InvalidAlgebra(format!("unit law fails on u_{i}")));
            }
        }
        Ok(())
    }

    /// `(u_i u_j) u_k = u_i (u_j u_k)` for every basis triple.
    pub fn check_associative(&self) -> Result<()> {
        let accumulate = |out: &mut BTreeMap<usize, FieldElem>, c: &FieldElem, cell: &[(usize, FieldElem)]| {
            for (b, c2) in cell {
                let t = c * c2;
                let e = out.entry(*b).or_insert_with(|| FieldElem::zero(&self.field));
                *e = &*e + &t;
            }
        };
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    let mut left = BTreeMap::new();
                    for (a, c) in &self.table[i][j] {
                        accumulate(&mut left, c, &self.table[*a][k]);
                    }
                    let mut right = BTreeMap::new();
                    for (a, c) in &self.table[j][k] {
                        accumulate(&mut right, c, &self.table[i][*a]);
                    }
                    left.retain(|_, v| !v.is_zero());
                    right.retain(|_, v| !v.is_zero());
                    if left != right {
                        return Err(Error::InvalidAlgebra(format!(
                            "not associative on (u_{i}, u_{j}, u_{k})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The quaternion algebra `(a, b)` on the basis `1, i, j, k = ij`.
    pub fn from_symbol(s: &QuaternionSymbol) -> Result<Self> {
        let f = s.field();
        let (a, b) = (s.a().clone(), s.b().clone());
        if a.is_zero() || b.is_zero() {
            return Err(Error::ZeroSlot);
        }
        let one = FieldElem::one(f);
        let neg = |x: &FieldElem| -x;
        let ab = &a * &b;
        let mut t = vec![vec![Vec::new(); 4]; 4];
        for m in 0..4 {
            t[0][m] = vec![(m, one.clone())];
            t[m][0] = vec![(m, one.clone())];
        }
        t[1][1] = vec![(0, a.clone())];
        t[2][2] = vec![(0, b.clone())];
        t[3][3] = vec![(0, neg(&ab))];
        t[1][2] = vec![(3, one.clone())];
        t[2][1] = vec![(3, neg(&one))];
        t[1][3] = vec![(2, a.clone())];
        t[3][1] = vec![(2, neg(&a))];
        t[2][3] = vec![(1, neg(&b))];
        t[3][2] = vec![(1, b.clone())];
        let mut unit = vec![FieldElem::zero(f); 4];
        unit[0] = one;
        Self::new(f, 4, t, unit)
    }

    /// The full matrix algebra `Mat_n` on matrix units `E_{rc}` (index
    /// `r·n + c`).
    pub fn matrix(field: &Arc<FieldDescriptor>, n: usize) -> Result<Self> {
        let one = FieldElem::one(field);
        let dim = n * n;
        let mut t = vec![vec![Vec::new(); dim]; dim];
        for r in 0..n {
            for c in 0..n {
                for l in 0..n {
                    t[r * n + c][c * n + l] = vec![(r * n + l, one.clone())];
                }
            }
        }
        let mut unit = vec![FieldElem::zero(field); dim];
        for r in 0..n {
            unit[r * n + r] = one.clone();
        }
        Self::new(field, dim, t, unit)
    }

    /// Plain tensor product on the basis `u_i ⊗ v_j` (index `i·dim(b) + j`).
    pub fn tensor(&self, other: &StructureAlgebra) -> Result<Self> {
        if !same_field(&self.field, &other.field) {
            return Err(Error::FieldMismatch);
        }
        let (n, m) = (self.dim, other.dim);
        let mut t = vec![vec![Vec::new(); n * m]; n * m];
        for i1 in 0..n {
            for j1 in 0..n {
                for i2 in 0..m {
                    for j2 in 0..m {
                        let mut cell = Vec::new();
                        for (k1, c1) in &self.table[i1][j1] {
                            for (k2, c2) in &other.table[i2][j2] {
                                cell.push((k1 * m + k2, c1 * c2));
                            }
                        }
                        t[i1 * m + i2][j1 * m + j2] = cell;
                    }
                }
            }
        }
        let mut unit = vec![FieldElem::zero(&self.field); n * m];
        for (i, a) in self.unit.iter().enumerate() {
            for (j, b) in other.unit.iter().enumerate() {
                unit[i * m + j] = a * b;
            }
        }
        let out = Self::new_unchecked(&self.field, n * m, t, unit)?;
        out.check_unit()?;
        Ok(out)
    }

    /// The same algebra with every structure constant conjugated by
    /// `σ_{k+1}`.
    pub(crate) fn conjugate0(&self, k: usize) -> Self {
        StructureAlgebra {
            field: Arc::clone(&self.field),
            dim: self.dim,
            table: self
                .table
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|cell| cell.iter().map(|(t, c)| (*t, c.apply_aut0(k))).collect())
                        .collect()
                })
                .collect(),
            unit: self.unit.iter().map(|c| c.apply_aut0(k)).collect(),
        }
    }

    /// Restriction of scalars to Q, on the basis `α^l u_i` (index `i·d + l`).
    pub fn restrict_to_rationals(&self) -> Self {
        let d = self.field.degree();
        if d == 1 {
            return self.clone();
        }
        let q = FieldDescriptor::rationals();
        let n = self.dim * d;
        let powers: Vec<FieldElem> = (0..d)
            .map(|l| {
                let mut c = vec![Rational::default(); d];
                c[l] = Rational::from_integer(1.into());
                FieldElem::new(&self.field, c)
            })
            .collect();
        let mut t = vec![vec![Vec::new(); n]; n];
        for i in 0..self.dim {
            for j in 0..self.dim {
                for l in 0..d {
                    for m in 0..d {
                        let w = &powers[l] * &powers[m];
                        let mut cell = Vec::new();
                        for (k, c) in &self.table[i][j] {
                            let v = &w * c;
                            for (r, x) in v.coeffs().iter().enumerate() {
                                if !num_traits::Zero::is_zero(x) {
                                    cell.push((k * d + r, FieldElem::from_rational(&q, x.clone())));
                                }
                            }
                        }
                        t[i * d + l][j * d + m] = cell;
                    }
                }
            }
        }
        let mut unit = vec![FieldElem::zero(&q); n];
        for (i, u) in self.unit.iter().enumerate() {
            for (r, x) in u.coeffs().iter().enumerate() {
                unit[i * d + r] = FieldElem::from_rational(&q, x.clone());
            }
        }
        StructureAlgebra {
            field: q,
            dim: n,
            table: t,
            unit,
        }
    }

    fn rational_constants(&self) -> Result<Vec<Vec<Vec<(usize, Rational)>>>> {
        if !self.field.is_rationals() {
            return Err(Error::FieldMismatch);
        }
        Ok(self
            .table
            .iter()
            .map(|row| {
                row.iter()
                    .map(|cell| {
                        cell.iter()
                            .map(|(k, c)| (*k, c.as_rational().expect("rational constant")))
                            .collect()
                    })
                    .collect()
            })
            .collect())
    }

    /// Center over the base field, computed on the restriction of scalars to
    /// Q. The returned basis vectors live in the coordinates of
    /// [`restrict_to_rationals`](Self::restrict_to_rationals).
    pub fn center(&self) -> Center {
        let restricted = self.restrict_to_rationals();
        let c = restricted.rational_constants().expect("restricted algebra is over Q");
        let n = restricted.dim;
        // Σ_k x_k (c_{k,i,l} − c_{i,k,l}) = 0 for all i, l
        let mut rows: HashMap<(usize, usize), SparseVec> = HashMap::new();
        for k in 0..n {
            for i in 0..n {
                for (l, v) in &c[k][i] {
                    let e = rows.entry((i, *l)).or_default().entry(k).or_default();
                    *e += v;
                }
                for (l, v) in &c[i][k] {
                    let e = rows.entry((i, *l)).or_default().entry(k).or_default();
                    *e -= v;
                }
            }
        }
        let mut keys: Vec<_> = rows.keys().copied().collect();
        keys.sort_unstable();
        let rows: Vec<SparseVec> = keys.into_iter().map(|k| rows.remove(&k).unwrap()).collect();
        let ns = nullspace(&rows, n);
        let d = self.field.degree();
        Center {
            dim_over_q: ns.dim(),
            dim_over_base: ns.dim() / d,
            basis_over_q: ns.basis,
        }
    }

    /// Inertia `(pos, neg, null)` of `(x, y) ↦ Tr(L_x L_y)` on an algebra
    /// over Q. Uses `L_x L_y = L_{xy}`, so the Gram entry for `(u_i, u_j)` is
    /// `Σ_k c_{ijk} Tr(L_{u_k})`.
    pub fn trace_form_signature(&self) -> Result<(usize, usize, usize)> {
        let c = self.rational_constants()?;
        let n = self.dim;
        let traces: Vec<Rational> = (0..n)
            .map(|k| {
                (0..n)
                    .flat_map(|l| c[k][l].iter().filter(move |(t, _)| *t == l).map(|(_, v)| v.clone()))
                    .sum()
            })
            .collect();
        let gram: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| c[i][j].iter().map(|(k, v)| v * &traces[*k]).sum())
                    .collect()
            })
            .collect();
        Ok(symmetric_signature(&gram))
    }

    /// `{"dim": n, "constants": [[i, j, k, value], ...]}`.
    pub fn to_json(&self) -> Value {
        let mut constants = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                for (k, c) in &self.table[i][j] {
                    constants.push(json!([i, j, k, elem_to_json(c)]));
                }
            }
        }
        json!({"dim": self.dim, "constants": constants})
    }
}

#[derive(Clone, Debug)]
pub struct Center {
    pub dim_over_q: usize,
    pub dim_over_base: usize,
    pub basis_over_q: Vec<SparseVec>,
}
