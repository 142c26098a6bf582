//! `Z_G(A) = A_{σ_1} ⊗ … ⊗ A_{σ_d}` with its semilinear Galois action, and
//! the corestriction as the G-fixed Q-subalgebra.
//!
//! Multi-indices `K = (k_1, …, k_d)` are encoded base `m` with slot 1 most
//! significant. The Q-coordinate of `α^l · u_K` is `K·d + l`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::linalg::{axpy, Eliminator, Nullspace, SparseVec};
use super::StructureAlgebra;
use crate::clifford::CliffordAlgebra;
use crate::error::{Error, Result};
use crate::exactfield::{same_field, FieldDescriptor, FieldElem, Rational};
use crate::qform::DiagForm;

/// Largest Q-dimension `m^d · d` accepted by [`build_zg`].
pub const MAX_Q_DIM: usize = 4096;

/// A Q-linear operator stored by columns.
#[derive(Clone, Debug, PartialEq)]
pub struct QOperator {
    pub cols: Vec<SparseVec>,
}

impl QOperator {
    pub fn dim(&self) -> usize {
        self.cols.len()
    }

    pub fn apply(&self, x: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (k, v) in x {
            axpy(&mut out, v, &self.cols[*k]);
        }
        out
    }

    pub fn compose(&self, inner: &QOperator) -> QOperator {
        QOperator {
            cols: inner.cols.iter().map(|c| self.apply(c)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.cols
            .iter()
            .enumerate()
            .all(|(k, c)| c.len() == 1 && c.get(&k).is_some_and(One::is_one))
    }
}

/// Sparse element of `Z_G(A)` over E, keyed by multi-index.
type EVec = BTreeMap<usize, FieldElem>;

#[derive(Clone, Debug)]
pub struct GaloisModuleAlgebra {
    field: Arc<FieldDescriptor>,
    slot_dim: usize,
    /// `slots[i]` is `A_{σ_{i+1}}`: the constants of `A` conjugated by `σ_{i+1}`.
    slots: Vec<StructureAlgebra>,
    underlying: StructureAlgebra,
    actions: Vec<QOperator>,
}

fn multi_index(mut k: usize, m: usize, d: usize) -> Vec<usize> {
    let mut out = vec![0; d];
    for slot in (0..d).rev() {
        out[slot] = k % m;
        k /= m;
    }
    out
}

fn encode(ks: &[usize], m: usize) -> usize {
    ks.iter().fold(0, |acc, k| acc * m + k)
}

fn tensor_all(slots: &[StructureAlgebra]) -> Result<StructureAlgebra> {
    let mut it = slots.iter();
    let first = it.next().expect("at least one slot").clone();
    it.try_fold(first, |acc, s| acc.tensor(s))
}

/// Builds the semilinear operator attached to `τ`: slot `i` moves to slot
/// `τ(i)` and every E-coefficient is twisted by `σ_{τ(i)}^{-1} τ σ_i`,
/// which for Galois `E` is `τ` itself.
fn action_operator(f: &Arc<FieldDescriptor>, m: usize, tau: usize) -> Result<QOperator> {
    let d = f.degree();
    let perm = f.index_action(tau);
    for (i, &ti) in perm.iter().enumerate() {
        let twist = f.compose_index(f.inverse_index(ti), f.compose_index(tau, i));
        if twist != 0 {
            return Err(Error::NonGaloisField(format!(
                "coefficient twist on slot {} is not the identity",
                i + 1
            )));
        }
    }
    let powers: Vec<Vec<Rational>> = (0..d)
        .map(|l| {
            let mut c = vec![Rational::zero(); d];
            c[l] = Rational::one();
            FieldElem::new(f, c).apply_aut0(tau).coeffs().to_vec()
        })
        .collect();
    let n = m.pow(d as u32);
    let mut cols = Vec::with_capacity(n * d);
    for k in 0..n {
        let ks = multi_index(k, m, d);
        let mut moved = vec![0; d];
        for (i, &ti) in perm.iter().enumerate() {
            moved[ti] = ks[i];
        }
        let target = encode(&moved, m);
        for img in &powers {
            let col: SparseVec = img
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(r, v)| (target * d + r, v.clone()))
                .collect();
            cols.push(col);
        }
    }
    Ok(QOperator { cols })
}

/// Constructs `Z_G(A)` for an algebra `A` over the field of `f`.
pub fn build_zg(a: &StructureAlgebra, f: &Arc<FieldDescriptor>) -> Result<GaloisModuleAlgebra> {
    if !same_field(a.field(), f) {
        return Err(Error::FieldMismatch);
    }
    let d = f.degree();
    let m = a.dim();
    let n = m
        .checked_pow(d as u32)
        .filter(|n| n * d <= MAX_Q_DIM)
        .ok_or(Error::TooLarge(m.saturating_pow(d as u32).saturating_mul(d)))?;
    let slots: Vec<StructureAlgebra> = (0..d).map(|i| a.conjugate0(i)).collect();
    let underlying = tensor_all(&slots)?;
    debug_assert_eq!(underlying.dim(), n);
    let actions = (0..d)
        .map(|tau| action_operator(f, m, tau))
        .collect::<Result<Vec<_>>>()?;
    Ok(GaloisModuleAlgebra {
        field: Arc::clone(f),
        slot_dim: m,
        slots,
        underlying,
        actions,
    })
}

impl GaloisModuleAlgebra {
    pub fn field(&self) -> &Arc<FieldDescriptor> {
        &self.field
    }

    pub fn slot_dim(&self) -> usize {
        self.slot_dim
    }

    pub fn underlying(&self) -> &StructureAlgebra {
        &self.underlying
    }

    pub fn e_dim(&self) -> usize {
        self.underlying.dim()
    }

    pub fn q_dim(&self) -> usize {
        self.underlying.dim() * self.field.degree()
    }

    /// Operator of `σ_{tau+1}` on Q-coordinates.
    pub fn action(&self, tau: usize) -> &QOperator {
        &self.actions[tau]
    }

    pub fn action_mut(&mut self, tau: usize) -> &mut QOperator {
        &mut self.actions[tau]
    }

    pub fn actions(&self) -> &[QOperator] {
        &self.actions
    }

    fn to_evec(&self, x: &SparseVec) -> EVec {
        let d = self.field.degree();
        let mut grouped: BTreeMap<usize, Vec<Rational>> = BTreeMap::new();
        for (k, v) in x {
            grouped.entry(k / d).or_insert_with(|| vec![Rational::zero(); d])[k % d] = v.clone();
        }
        grouped
            .into_iter()
            .map(|(k, c)| (k, FieldElem::new(&self.field, c)))
            .filter(|(_, e)| !e.is_zero())
            .collect()
    }

    fn to_qvec(&self, x: &EVec) -> SparseVec {
        let d = self.field.degree();
        let mut out = SparseVec::new();
        for (k, e) in x {
            for (l, c) in e.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    out.insert(k * d + l, c.clone());
                }
            }
        }
        out
    }

    fn emul(&self, x: &EVec, y: &EVec) -> EVec {
        let mut out = EVec::new();
        for (i, a) in x {
            for (j, b) in y {
                let s = a * b;
                for (k, c) in self.underlying.basis_product(*i, *j) {
                    let t = &s * c;
                    let e = out.entry(*k).or_insert_with(|| FieldElem::zero(&self.field));
                    *e = &*e + &t;
                }
            }
        }
        out.retain(|_, e| !e.is_zero());
        out
    }

    /// Product of two vectors in Q-coordinates.
    pub fn qmul(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        self.to_qvec(&self.emul(&self.to_evec(x), &self.to_evec(y)))
    }

    pub fn unit_q(&self) -> SparseVec {
        let u: EVec = self
            .underlying
            .unit()
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.is_zero())
            .map(|(k, e)| (k, e.clone()))
            .collect();
        self.to_qvec(&u)
    }

    fn q_basis(&self, k: usize) -> SparseVec {
        SparseVec::from([(k, Rational::one())])
    }

    /// `act(τ)(xy) = act(τ)(x)·act(τ)(y)` on all Q-basis pairs.
    pub fn verify_multiplicative(&self) -> bool {
        let n = self.q_dim();
        self.actions.iter().all(|op| {
            (0..n).all(|i| {
                (0..n).all(|j| {
                    let x = self.q_basis(i);
                    let y = self.q_basis(j);
                    op.apply(&self.qmul(&x, &y)) == self.qmul(&op.apply(&x), &op.apply(&y))
                })
            })
        })
    }

    /// `act(σ_i)∘act(σ_j) = act(σ_i σ_j)` for every pair.
    pub fn verify_group_law(&self) -> bool {
        let d = self.field.degree();
        (0..d).all(|i| {
            (0..d).all(|j| {
                self.actions[i].compose(&self.actions[j]) == self.actions[self.field.compose_index(i, j)]
            })
        })
    }
}

/// The corestriction together with its embedding into `Z_G(A)`.
#[derive(Clone, Debug)]
pub struct InvariantAlgebra {
    pub algebra: StructureAlgebra,
    /// Q-coordinates in `Z_G(A)` of each basis vector of `algebra`.
    pub basis: Vec<SparseVec>,
}

/// The G-fixed Q-subalgebra of `Z_G(A)`, computed from generators of G.
pub fn invariants(z: &GaloisModuleAlgebra) -> Result<InvariantAlgebra> {
    let n = z.q_dim();
    let mut elim = Eliminator::new();
    for &g in &z.field.generators() {
        let op = &z.actions[g];
        let mut rows = vec![SparseVec::new(); n];
        for (c, col) in op.cols.iter().enumerate() {
            for (r, v) in col {
                rows[*r].insert(c, v.clone());
            }
        }
        for (r, mut row) in rows.into_iter().enumerate() {
            let e = row.entry(r).or_insert_with(Rational::zero);
            *e -= Rational::one();
            if e.is_zero() {
                row.remove(&r);
            }
            elim.push(&row);
        }
    }
    let ns: Nullspace = elim.nullspace(n);
    let expected = z.e_dim();
    if ns.dim() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: ns.dim(),
        });
    }
    let q = FieldDescriptor::rationals();
    let ev: Vec<EVec> = ns.basis.iter().map(|b| z.to_evec(b)).collect();
    let mut table = vec![vec![Vec::new(); expected]; expected];
    for (s, x) in ev.iter().enumerate() {
        for (t, y) in ev.iter().enumerate() {
            let prod = z.to_qvec(&z.emul(x, y));
            let coords = ns.coordinates(&prod);
            if ns.combine(&coords) != prod {
                return Err(Error::NotClosedUnderMultiplication);
            }
            table[s][t] = coords
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k, FieldElem::from_rational(&q, c)))
                .collect();
        }
    }
    let unit = z.unit_q();
    let coords = ns.coordinates(&unit);
    if ns.combine(&coords) != unit {
        return Err(Error::NotClosedUnderMultiplication);
    }
    let unit = coords.into_iter().map(|c| FieldElem::from_rational(&q, c)).collect();
    let algebra = StructureAlgebra::new_unchecked(&q, expected, table, unit)?;
    algebra.check_unit()?;
    Ok(InvariantAlgebra {
        algebra,
        basis: ns.basis,
    })
}

/// The Galois action on `C⁰(q_1) ⊗ … ⊗ C⁰(q_d)`: the monomial `e_S` of
/// `C(q_i)` goes to the same monomial of `C(q_{τ(i)})`, coefficients through
/// `τ`. Built from the Clifford monomials, independently of [`build_zg`].
fn clifford_tensor_action(
    even_masks: &[u32],
    f: &Arc<FieldDescriptor>,
    tau: usize,
) -> QOperator {
    let d = f.degree();
    let m = even_masks.len();
    let slot_of: BTreeMap<u32, usize> = even_masks.iter().enumerate().map(|(k, s)| (*s, k)).collect();
    let perm = f.index_action(tau);
    let n = m.pow(d as u32);
    let mut cols = Vec::with_capacity(n * d);
    for k in 0..n {
        let ks = multi_index(k, m, d);
        let monomials: Vec<u32> = ks.iter().map(|&x| even_masks[x]).collect();
        let mut moved = vec![0u32; d];
        for (i, &ti) in perm.iter().enumerate() {
            moved[ti] = monomials[i];
        }
        let target = encode(&moved.iter().map(|s| slot_of[s]).collect::<Vec<_>>(), m);
        for l in 0..d {
            let mut c = vec![Rational::zero(); d];
            c[l] = Rational::one();
            let img = FieldElem::new(f, c).apply_aut0(tau);
            let col: SparseVec = img
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(r, v)| (target * d + r, v.clone()))
                .collect();
            cols.push(col);
        }
    }
    QOperator { cols }
}

/// Checks `Z_G(C⁰(Q)) ≅ C⁰(q_1) ⊗ … ⊗ C⁰(q_d)` through the map sending
/// `u_{k_1} ⊗ … ⊗ u_{k_d}` to the monomial with the same exponents in each
/// `C⁰(q_i)`.
pub fn verify_twisted_iso(diag: &DiagForm, f: &Arc<FieldDescriptor>) -> Result<bool> {
    let c0 = CliffordAlgebra::new(f, diag.entries.clone())?.even_part();
    let left = build_zg(&c0, f)?;
    verify_twisted_iso_with(&left, diag, f)
}

/// As [`verify_twisted_iso`], against a caller-supplied left side.
pub fn verify_twisted_iso_with(
    left: &GaloisModuleAlgebra,
    diag: &DiagForm,
    f: &Arc<FieldDescriptor>,
) -> Result<bool> {
    let d = f.degree();
    let right_factors = (0..d)
        .map(|i| {
            let conj = diag.conjugate0(i);
            Ok(CliffordAlgebra::new(f, conj)?.even_part())
        })
        .collect::<Result<Vec<_>>>()?;
    let right = tensor_all(&right_factors)?;
    let n = right.dim();
    if left.e_dim() != n || left.slots.len() != d {
        return Ok(false);
    }
    // φ is the identity on multi-indices, so it is multiplicative iff the
    // two tables agree entry by entry.
    for i in 0..n {
        for j in 0..n {
            if left.underlying.basis_product(i, j) != right.basis_product(i, j) {
                return Ok(false);
            }
        }
    }
    if left.underlying.unit() != right.unit() {
        return Ok(false);
    }
    let masks = CliffordAlgebra::new(f, diag.entries.clone())?.even_masks();
    for tau in 0..d {
        if *left.action(tau) != clifford_tensor_action(&masks, f, tau) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brauer::QuaternionSymbol;
    use num_bigint::BigInt;

    fn q2() -> Arc<FieldDescriptor> {
        FieldDescriptor::quadratic(&BigInt::from(2)).unwrap()
    }

    #[test]
    fn rational_base_is_trivial() {
        let q = FieldDescriptor::rationals();
        let h = StructureAlgebra::from_symbol(
            &QuaternionSymbol::new(FieldElem::from_int(&q, -1), FieldElem::from_int(&q, -1)).unwrap(),
        )
        .unwrap();
        let z = build_zg(&h, &q).unwrap();
        assert_eq!(z.q_dim(), 4);
        assert!(z.action(0).is_identity());
        let inv = invariants(&z).unwrap();
        assert_eq!(inv.algebra.trace_form_signature().unwrap(), (1, 3, 0));
    }

    #[test]
    fn field_itself_has_rational_invariants() {
        let f = q2();
        let e = StructureAlgebra::matrix(&f, 1).unwrap();
        let z = build_zg(&e, &f).unwrap();
        assert_eq!(z.q_dim(), 2);
        let inv = invariants(&z).unwrap();
        assert_eq!(inv.algebra.dim(), 1);
    }

    #[test]
    fn quaternion_over_q_sqrt2() {
        let f = q2();
        let s = QuaternionSymbol::new(
            FieldElem::from_int(&f, -1),
            FieldElem::new(&f, vec![Rational::from_integer((-1).into()), Rational::one()]),
        )
        .unwrap();
        let a = StructureAlgebra::from_symbol(&s).unwrap();
        let z = build_zg(&a, &f).unwrap();
        assert_eq!((z.e_dim(), z.q_dim(), z.actions().len()), (16, 32, 2));
        assert!(z.verify_group_law());
        assert!(z.verify_multiplicative());
        let inv = invariants(&z).unwrap();
        assert_eq!(inv.algebra.dim(), 16);
        assert_eq!(inv.algebra.center().dim_over_q, 1);
    }

    #[test]
    fn cubic_action_group_law() {
        let f = FieldDescriptor::simplest_cubic();
        let e = StructureAlgebra::matrix(&f, 1).unwrap();
        let z = build_zg(&e, &f).unwrap();
        assert!(z.verify_group_law());
        assert_eq!(invariants(&z).unwrap().algebra.dim(), 1);
    }
}
