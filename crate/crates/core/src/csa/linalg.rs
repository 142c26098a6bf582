//! Exact linear algebra over Q on sparse rows.
//!
//! Elimination is fraction-free: every stored row is a primitive integer
//! vector, and combining two rows never introduces denominators.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactfield::Rational;

pub type SparseVec = BTreeMap<usize, Rational>;
type IntRow = BTreeMap<usize, BigInt>;

/// Reduced row echelon data of a homogeneous system and its kernel.
#[derive(Clone, Debug)]
pub struct Nullspace {
    pub ncols: usize,
    /// Free columns, ascending. Kernel vector `basis[t]` is 1 at `free[t]`
    /// and 0 at every other free column.
    pub free: Vec<usize>,
    pub basis: Vec<SparseVec>,
}

impl Nullspace {
    pub fn dim(&self) -> usize {
        self.free.len()
    }

    /// Coordinates of a kernel vector in `basis`: its entries at the free
    /// columns.
    pub fn coordinates(&self, v: &SparseVec) -> Vec<Rational> {
        self.free
            .iter()
            .map(|f| v.get(f).cloned().unwrap_or_else(Rational::zero))
            .collect()
    }

    pub fn combine(&self, coords: &[Rational]) -> SparseVec {
        let mut out = SparseVec::new();
        for (c, b) in coords.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            axpy(&mut out, c, b);
        }
        out
    }
}

/// `y += a·x`, dropping zeros.
pub fn axpy(y: &mut SparseVec, a: &Rational, x: &SparseVec) {
    for (k, v) in x {
        let e = y.entry(*k).or_insert_with(Rational::zero);
        *e += a * v;
        if e.is_zero() {
            y.remove(k);
        }
    }
}

fn to_int_row(row: &SparseVec) -> IntRow {
    let lcm = row
        .values()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let mut out: IntRow = row
        .iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(k, v)| (*k, (v * Rational::from_integer(lcm.clone())).to_integer()))
        .collect();
    make_primitive(&mut out);
    out
}

fn make_primitive(row: &mut IntRow) {
    let g = row.values().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    let lead_negative = row.values().next().is_some_and(Signed::is_negative);
    if g.is_zero() {
        return;
    }
    let g = if lead_negative { -g } else { g };
    if g.is_one() {
        return;
    }
    for v in row.values_mut() {
        *v = &*v / &g;
    }
}

/// `a·x − b·y`, made primitive.
fn combine_rows(a: &BigInt, x: &IntRow, b: &BigInt, y: &IntRow) -> IntRow {
    let mut out: IntRow = x.iter().map(|(k, v)| (*k, a * v)).collect();
    for (k, v) in y {
        let e = out.entry(*k).or_insert_with(BigInt::zero);
        *e -= b * v;
        if e.is_zero() {
            out.remove(k);
        }
    }
    make_primitive(&mut out);
    out
}

/// Incremental fraction-free Gauss–Jordan elimination.
#[derive(Default, Debug, Clone)]
pub struct Eliminator {
    rows: BTreeMap<usize, IntRow>,
}

impl Eliminator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds a row, keeping the stored rows in reduced echelon form.
    pub fn push(&mut self, row: &SparseVec) {
        let mut r = to_int_row(row);
        let hits: Vec<usize> = r.keys().filter(|k| self.rows.contains_key(k)).copied().collect();
        for p in hits {
            let Some(c) = r.get(&p).cloned() else { continue };
            let prow = &self.rows[&p];
            let lead = &prow[&p];
            r = combine_rows(lead, &r, &c, prow);
        }
        let Some((&q, lead)) = r.iter().next() else {
            return;
        };
        let lead = lead.clone();
        for prow in self.rows.values_mut() {
            if let Some(c) = prow.get(&q).cloned() {
                *prow = combine_rows(&lead, prow, &c, &r);
            }
        }
        self.rows.insert(q, r);
    }

    pub fn nullspace(&self, ncols: usize) -> Nullspace {
        let free: Vec<usize> = (0..ncols).filter(|c| !self.rows.contains_key(c)).collect();
        let basis = free
            .iter()
            .map(|&f| {
                let mut v = SparseVec::new();
                v.insert(f, Rational::one());
                for (p, row) in &self.rows {
                    if let Some(c) = row.get(&f) {
                        v.insert(*p, -Rational::new(c.clone(), row[p].clone()));
                    }
                }
                v
            })
            .collect();
        Nullspace { ncols, free, basis }
    }
}

pub fn nullspace(rows: &[SparseVec], ncols: usize) -> Nullspace {
    let mut e = Eliminator::new();
    for r in rows {
        e.push(r);
    }
    e.nullspace(ncols)
}

/// `(positive, negative, null)` inertia of a symmetric rational matrix, by
/// congruence diagonalization.
pub fn symmetric_signature(m: &[Vec<Rational>]) -> (usize, usize, usize) {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let (mut pos, mut neg) = (0, 0);
    let mut k = 0;
    while k < n {
        let pivot = (k..n).find(|&j| !a[j][j].is_zero());
        let pivot = match pivot {
            Some(j) => j,
            None => {
                let Some((i, j)) = (k..n)
                    .flat_map(|i| (k..n).map(move |j| (i, j)))
                    .find(|&(i, j)| i != j && !a[i][j].is_zero())
                else {
                    break;
                };
                for c in 0..n {
                    let t = a[j][c].clone();
                    a[i][c] += t;
                }
                for r in 0..n {
                    let t = a[r][j].clone();
                    a[r][i] += t;
                }
                i
            }
        };
        if pivot != k {
            a.swap(k, pivot);
            for row in a.iter_mut() {
                row.swap(k, pivot);
            }
        }
        let p = a[k][k].clone();
        if p.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for j in k + 1..n {
            if a[k][j].is_zero() {
                continue;
            }
            let f = &a[k][j] / &p;
            let rowk = a[k].clone();
            for c in k..n {
                let t = &f * &rowk[c];
                a[j][c] -= t;
            }
            for r in k..n {
                let t = &f * &a[r][k];
                a[r][j] -= t;
            }
        }
        k += 1;
    }
    (pos, neg, n - pos - neg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::{rat, rat_frac};

    fn row(entries: &[(usize, Rational)]) -> SparseVec {
        entries.iter().cloned().collect()
    }

    #[test]
    fn kernel_of_small_system() {
        // x0 + 2 x1 − x2 = 0, x1 + x2/3 = 0
        let rows = vec![
            row(&[(0, rat(1)), (1, rat(2)), (2, rat(-1))]),
            row(&[(1, rat(1)), (2, rat_frac(1, 3))]),
        ];
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.free, vec![2]);
        let v = &ns.basis[0];
        for r in &rows {
            let dot: Rational = r.iter().map(|(k, c)| c * v.get(k).cloned().unwrap_or_default()).sum();
            assert!(dot.is_zero());
        }
        assert_eq!(ns.coordinates(v), vec![rat(1)]);
    }

    #[test]
    fn dependent_rows_do_not_raise_rank() {
        let r = row(&[(0, rat(2)), (3, rat(4))]);
        let mut e = Eliminator::new();
        e.push(&r);
        e.push(&r);
        e.push(&SparseVec::new());
        assert_eq!(e.rank(), 1);
        assert_eq!(e.nullspace(4).dim(), 3);
    }

    #[test]
    fn inertia() {
        let m = vec![
            vec![rat(0), rat(1), rat(0)],
            vec![rat(1), rat(0), rat(0)],
            vec![rat(0), rat(0), rat(0)],
        ];
        assert_eq!(symmetric_signature(&m), (1, 1, 1));
        let d = vec![vec![rat(4), rat(0)], vec![rat(0), rat(-4)]];
        assert_eq!(symmetric_signature(&d), (1, 1, 0));
    }
}
