//! Clifford algebras of diagonal forms, on the monomial basis `e_S` indexed
//! by subset bitmasks (bit `i` is `e_{i+1}`), with `v·v = q(v)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::brauer::QuaternionSymbol;
use crate::csa::StructureAlgebra;
use crate::error::{Error, Result};
use crate::exactfield::{same_field, FieldDescriptor, FieldElem};

/// Masks of the rank-3 even part in basis order `1, e1e2, e1e3, e2e3`.
const E12: u32 = 0b011;
const E13: u32 = 0b101;
const E23: u32 = 0b110;

#[derive(Clone, Debug)]
pub struct CliffordAlgebra {
    field: Arc<FieldDescriptor>,
    diag: Arc<Vec<FieldElem>>,
}

/// An element `Σ_S λ_S e_S`.
#[derive(Clone, Debug, PartialEq)]
pub struct CliffordElem {
    pub terms: BTreeMap<u32, FieldElem>,
    diag: Arc<Vec<FieldElem>>,
}

/// `(sign, scalar, mask)` with `e_S e_T = sign · scalar · e_{S Δ T}`.
fn monomial_product(diag: &[FieldElem], s: u32, t: u32) -> (bool, FieldElem, u32) {
    let mut swaps = 0u32;
    for i in 0..diag.len() as u32 {
        if t & (1 << i) != 0 {
            swaps += (s >> (i + 1)).count_ones();
        }
    }
    let f = diag[0].field();
    let mut scalar = FieldElem::one(f);
    let common = s & t;
    for (i, a) in diag.iter().enumerate() {
        if common & (1 << i) != 0 {
            scalar = &scalar * a;
        }
    }
    (swaps % 2 == 1, scalar, s ^ t)
}

impl CliffordAlgebra {
    pub fn new(field: &Arc<FieldDescriptor>, diag: Vec<FieldElem>) -> Result<Self> {
        if diag.is_empty() || diag.len() > 16 {
            return Err(Error::InvalidAlgebra(format!("unsupported rank {}", diag.len())));
        }
        for (i, a) in diag.iter().enumerate() {
            if !same_field(a.field(), field) {
                return Err(Error::FieldMismatch);
            }
            if a.is_zero() {
                return Err(Error::ZeroDiagonalEntry(i + 1));
            }
        }
        Ok(CliffordAlgebra {
            field: Arc::clone(field),
            diag: Arc::new(diag),
        })
    }

    pub fn field(&self) -> &Arc<FieldDescriptor> {
        &self.field
    }

    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    pub fn dim(&self) -> usize {
        1 << self.rank()
    }

    pub fn monomial(&self, mask: u32) -> CliffordElem {
        self.element([(mask, FieldElem::one(&self.field))])
    }

    pub fn element(&self, terms: impl IntoIterator<Item = (u32, FieldElem)>) -> CliffordElem {
        let mut out = BTreeMap::new();
        for (s, c) in terms {
            assert!((s as usize) < self.dim(), "monomial outside the algebra");
            if !c.is_zero() {
                out.insert(s, c);
            }
        }
        CliffordElem {
            terms: out,
            diag: Arc::clone(&self.diag),
        }
    }

    /// Even masks in ascending order.
    pub fn even_masks(&self) -> Vec<u32> {
        (0..self.dim() as u32).filter(|s| s.count_ones() % 2 == 0).collect()
    }

    /// The even subalgebra on [`even_masks`](Self::even_masks).
    pub fn even_part(&self) -> StructureAlgebra {
        let masks = self.even_masks();
        let index: BTreeMap<u32, usize> = masks.iter().enumerate().map(|(k, s)| (*s, k)).collect();
        let n = masks.len();
        let mut table = vec![vec![Vec::new(); n]; n];
        for (i, &s) in masks.iter().enumerate() {
            for (j, &t) in masks.iter().enumerate() {
                let (neg, c, u) = monomial_product(&self.diag, s, t);
                table[i][j] = vec![(index[&u], if neg { -&c } else { c })];
            }
        }
        let mut unit = vec![FieldElem::zero(&self.field); n];
        unit[0] = FieldElem::one(&self.field);
        StructureAlgebra::new_unchecked(&self.field, n, table, unit)
            .expect("even Clifford table is well formed")
    }
}

impl CliffordElem {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

pub fn clifford_mul(x: &CliffordElem, y: &CliffordElem) -> Result<CliffordElem> {
    if !Arc::ptr_eq(&x.diag, &y.diag) && x.diag != y.diag {
        return Err(Error::AlgebraMismatch);
    }
    let mut out: BTreeMap<u32, FieldElem> = BTreeMap::new();
    for (s, a) in &x.terms {
        for (t, b) in &y.terms {
            let (neg, c, u) = monomial_product(&x.diag, *s, *t);
            let mut term = &(a * b) * &c;
            if neg {
                term = -&term;
            }
            match out.remove(&u) {
                Some(prev) => {
                    let sum = &prev + &term;
                    if !sum.is_zero() {
                        out.insert(u, sum);
                    }
                }
                None => {
                    out.insert(u, term);
                }
            }
        }
    }
    Ok(CliffordElem {
        terms: out,
        diag: Arc::clone(&x.diag),
    })
}

/// `C⁰(diag(a, b, c)) ≅ (−ab, −ac)` via `i ↦ e1e2`, `j ↦ e1e3`,
/// `k = ij ↦ −a·e2e3`.
#[derive(Clone, Debug)]
pub struct Rank3Symbol {
    pub symbol: QuaternionSymbol,
    /// Images of `1, i, j, k` in `C⁰`.
    pub images: [CliffordElem; 4],
}

pub fn even_rank3_to_symbol(field: &Arc<FieldDescriptor>, diag: [FieldElem; 3]) -> Result<Rank3Symbol> {
    let [a, b, c] = diag.clone();
    let cl = CliffordAlgebra::new(field, diag.to_vec())?;
    let symbol = QuaternionSymbol::new(-&(&a * &b), -&(&a * &c))?;
    let images = [
        cl.monomial(0),
        cl.monomial(E12),
        cl.monomial(E13),
        cl.element([(E23, -&a)]),
    ];
    let out = Rank3Symbol { symbol, images };
    if !out.verify()? {
        return Err(Error::InvalidAlgebra("rank-3 identification failed".into()));
    }
    Ok(out)
}

impl Rank3Symbol {
    /// Checks all 16 products of `1, i, j, k` against the quaternion table.
    pub fn verify(&self) -> Result<bool> {
        let h = StructureAlgebra::from_symbol(&self.symbol)?;
        for x in 0..4 {
            for y in 0..4 {
                let lhs = clifford_mul(&self.images[x], &self.images[y])?;
                let mut rhs: BTreeMap<u32, FieldElem> = BTreeMap::new();
                for (k, coeff) in h.basis_product(x, y) {
                    for (s, v) in &self.images[*k].terms {
                        let t = &(coeff * v) + rhs.get(s).unwrap_or(&FieldElem::zero(coeff.field()));
                        rhs.insert(*s, t);
                    }
                }
                rhs.retain(|_, v| !v.is_zero());
                if lhs.terms != rhs {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::rat;
    use num_bigint::BigInt;

    fn q() -> Arc<FieldDescriptor> {
        FieldDescriptor::rationals()
    }

    fn ints(f: &Arc<FieldDescriptor>, xs: &[i64]) -> Vec<FieldElem> {
        xs.iter().map(|&x| FieldElem::from_int(f, x)).collect()
    }

    #[test]
    fn defining_relations() {
        let f = q();
        let cl = CliffordAlgebra::new(&f, ints(&f, &[3, 5])).unwrap();
        let e1 = cl.monomial(1);
        let e2 = cl.monomial(2);
        assert_eq!(clifford_mul(&e1, &e1).unwrap(), cl.element([(0, FieldElem::from_int(&f, 3))]));
        let e12 = clifford_mul(&e1, &e2).unwrap();
        let e21 = clifford_mul(&e2, &e1).unwrap();
        assert_eq!(e12.terms[&3], -&e21.terms[&3]);
        // (e1e2)² = −ab
        assert_eq!(clifford_mul(&e12, &e12).unwrap(), cl.element([(0, FieldElem::from_int(&f, -15))]));
        let x = cl.element([(1, FieldElem::from_int(&f, 2)), (3, FieldElem::from_int(&f, -7))]);
        assert_eq!(clifford_mul(&cl.monomial(0), &x).unwrap(), x);
    }

    #[test]
    fn associative_on_rank4_monomials() {
        let f = q();
        let cl = CliffordAlgebra::new(&f, ints(&f, &[2, -3, 5, -7])).unwrap();
        for s in 0..16 {
            for t in 0..16 {
                for u in 0..16 {
                    let (x, y, z) = (cl.monomial(s), cl.monomial(t), cl.monomial(u));
                    let l = clifford_mul(&clifford_mul(&x, &y).unwrap(), &z).unwrap();
                    let r = clifford_mul(&x, &clifford_mul(&y, &z).unwrap()).unwrap();
                    assert_eq!(l, r);
                }
            }
        }
    }

    #[test]
    fn mismatched_algebras() {
        let f = q();
        let a = CliffordAlgebra::new(&f, ints(&f, &[1, 1])).unwrap();
        let b = CliffordAlgebra::new(&f, ints(&f, &[1, 2])).unwrap();
        assert_eq!(clifford_mul(&a.monomial(1), &b.monomial(1)), Err(Error::AlgebraMismatch));
        assert!(matches!(
            CliffordAlgebra::new(&f, ints(&f, &[1, 0])),
            Err(Error::ZeroDiagonalEntry(2))
        ));
    }

    #[test]
    fn even_parts() {
        let f = q();
        let c1 = CliffordAlgebra::new(&f, ints(&f, &[4])).unwrap().even_part();
        assert_eq!(c1.dim(), 1);
        let c3 = CliffordAlgebra::new(&f, ints(&f, &[1, 1, 1])).unwrap().even_part();
        assert_eq!(c3.dim(), 4);
        c3.check_associative().unwrap();
        assert_eq!(c3.basis_product(1, 1), &[(0, FieldElem::from_int(&f, -1))]);
        let c5 = CliffordAlgebra::new(&f, ints(&f, &[1, 2, 3, 4, 5])).unwrap().even_part();
        assert_eq!(c5.dim(), 16);
        c5.check_associative().unwrap();
    }

    #[test]
    fn rank3_symbols() {
        let f = q();
        let s = even_rank3_to_symbol(&f, ints(&f, &[1, 1, 1]).try_into().unwrap()).unwrap();
        assert_eq!((s.symbol.a().clone(), s.symbol.b().clone()), (FieldElem::from_int(&f, -1), FieldElem::from_int(&f, -1)));
        let s = even_rank3_to_symbol(&f, ints(&f, &[1, 1, -1]).try_into().unwrap()).unwrap();
        assert_eq!(s.symbol.b(), &FieldElem::from_int(&f, 1));

        let e = FieldDescriptor::quadratic(&BigInt::from(2)).unwrap();
        let r = FieldElem::generator(&e);
        let c = -&(&FieldElem::from_int(&e, 2) - &r);
        let s = even_rank3_to_symbol(&e, [r.clone(), r.clone(), c.clone()]).unwrap();
        assert_eq!(s.symbol.a(), &FieldElem::from_int(&e, -2));
        // √2(2 − √2) = 2√2 − 2
        assert_eq!(s.symbol.b(), &FieldElem::new(&e, vec![rat(-2), rat(2)]));
    }
}
