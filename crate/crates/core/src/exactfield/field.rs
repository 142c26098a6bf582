//! Totally real Galois number fields described by a minimal polynomial,
//! explicit automorphisms and isolating intervals for the real roots.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::Poly;
use super::rational::{rat, sign_of, Rational};
use crate::error::{Error, Result};

/// Bisection cap for sign determination. Never reached when the minimal
/// polynomial is irreducible.
const MAX_BISECTIONS: usize = 1 << 14;

/// A totally real Galois number field `E = Q(α)`.
///
/// `automorphisms[i]` is the polynomial `a_i` with `σ_{i+1}(α) = a_i(α)`;
/// `automorphisms[0]` is the identity. `embeddings` isolate the real roots of
/// the minimal polynomial in ascending order, and `primary` selects the real
/// place identified with `σ_1`. Real place `i` is then `primary ∘ σ_i`.
#[derive(Clone, Debug)]
pub struct FieldDescriptor {
    min_poly: Poly,
    automorphisms: Vec<Poly>,
    embeddings: Vec<(Rational, Rational)>,
    primary: usize,
    // compose[i][j] = k  with  σ_i ∘ σ_j = σ_k
    compose: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    // Reductions of α^k for k in d..2d-1, as coefficient vectors.
    high_powers: Vec<Vec<Rational>>,
    // aut_matrix[i][l] = coefficients of σ_i(α^l).
    aut_matrix: Vec<Vec<Vec<Rational>>>,
}

impl PartialEq for FieldDescriptor {
    fn eq(&self, other: &Self) -> bool {
        self.min_poly == other.min_poly
            && self.automorphisms == other.automorphisms
            && self.primary == other.primary
    }
}

impl Eq for FieldDescriptor {}

impl FieldDescriptor {
    /// Validates and builds a descriptor.
    pub fn new(
        min_poly: Poly,
        automorphisms: Vec<Poly>,
        embeddings: Vec<(Rational, Rational)>,
        primary: usize,
    ) -> Result<Arc<Self>> {
        let bad = |m: String| Err(Error::InvalidDescriptor(m));
        let d = match min_poly.degree() {
            Some(d) if d >= 1 => d,
            _ => return bad("minimal polynomial must have degree >= 1".into()),
        };
        if !min_poly.leading().is_one() {
            return bad("minimal polynomial must be monic".into());
        }
        if !min_poly.gcd(&min_poly.derivative()).degree().is_some_and(|k| k == 0) {
            return bad("minimal polynomial is not squarefree".into());
        }
        if d >= 2 && has_rational_root(&min_poly) {
            return bad("minimal polynomial has a rational root".into());
        }
        if min_poly.count_real_roots() != d {
            return bad("minimal polynomial is not totally real".into());
        }

        if embeddings.len() != d {
            return bad(format!("expected {d} embeddings, got {}", embeddings.len()));
        }
        for (k, (lo, hi)) in embeddings.iter().enumerate() {
            if lo >= hi {
                return bad(format!("embedding {k}: empty interval"));
            }
            let s = sign_of(&min_poly.eval(lo)) * sign_of(&min_poly.eval(hi));
            if s >= 0 {
                return bad(format!("embedding {k}: minimal polynomial does not change sign"));
            }
            if min_poly.count_roots(lo, hi) != 1 {
                return bad(format!("embedding {k}: interval does not isolate one root"));
            }
            if k > 0 && embeddings[k - 1].1 > *lo {
                return bad(format!("embedding {k}: intervals not ascending and disjoint"));
            }
        }
        if primary >= d {
            return bad(format!("primary embedding {primary} out of range"));
        }

        if automorphisms.len() != d {
            return Err(Error::NonGaloisField(format!(
                "expected {d} automorphisms, got {}",
                automorphisms.len()
            )));
        }
        let automorphisms: Vec<Poly> = automorphisms.into_iter().map(|a| a.rem(&min_poly)).collect();
        if automorphisms[0] != Poly::x().rem(&min_poly) {
            return bad("first automorphism must be the identity X".into());
        }
        for (i, a) in automorphisms.iter().enumerate() {
            if !min_poly.compose(a).rem(&min_poly).is_zero() {
                return Err(Error::NonGaloisField(format!(
                    "automorphism {} does not map α to a root",
                    i + 1
                )));
            }
            if automorphisms[..i].contains(a) {
                return Err(Error::NonGaloisField(format!("automorphism {} repeated", i + 1)));
            }
        }
        let mut compose = vec![vec![0; d]; d];
        for i in 0..d {
            for j in 0..d {
                // (σ_i ∘ σ_j)(α) = σ_i(a_j(α)) = a_j(a_i(α))
                let c = automorphisms[j].compose(&automorphisms[i]).rem(&min_poly);
                match automorphisms.iter().position(|a| *a == c) {
                    Some(k) => compose[i][j] = k,
                    None => {
                        return Err(Error::NonGaloisField(format!(
                            "σ_{} ∘ σ_{} is not in the list",
                            i + 1,
                            j + 1
                        )))
                    }
                }
            }
        }
        let inverse = (0..d)
            .map(|i| (0..d).find(|&j| compose[i][j] == 0).expect("group has inverses"))
            .collect();

        let mut high_powers = Vec::with_capacity(d);
        for k in d..2 * d {
            let mut mono = vec![Rational::zero(); k + 1];
            mono[k] = Rational::one();
            high_powers.push(pad(Poly::new(mono).rem(&min_poly), d));
        }
        let aut_matrix = automorphisms
            .iter()
            .map(|a| {
                let mut powers = Vec::with_capacity(d);
                let mut cur = Poly::constant(Rational::one());
                for _ in 0..d {
                    powers.push(pad(cur.clone(), d));
                    cur = cur.mul(a).rem(&min_poly);
                }
                powers
            })
            .collect();

        Ok(Arc::new(FieldDescriptor {
            min_poly,
            automorphisms,
            embeddings,
            primary,
            compose,
            inverse,
            high_powers,
            aut_matrix,
        }))
    }

    /// Q itself, as the degree-one field `Q[X]/(X)`.
    pub fn rationals() -> Arc<Self> {
        Self::new(
            Poly::x(),
            vec![Poly::zero()],
            vec![(rat(-1), rat(1))],
            0,
        )
        .expect("Q is a valid field")
    }

    /// `Q(√m)` for a positive non-square integer `m`, with the positive root as
    /// the primary place.
    pub fn quadratic(m: &BigInt) -> Result<Arc<Self>> {
        if !m.is_positive() {
            return Err(Error::InvalidDescriptor(format!("quadratic_d = {m} is not positive")));
        }
        let s = m.sqrt();
        if &s * &s == *m {
            return Err(Error::InvalidDescriptor(format!("quadratic_d = {m} is a square")));
        }
        let s = Rational::from_integer(s);
        let one = Rational::one();
        let min_poly = Poly::new(vec![-Rational::from_integer(m.clone()), Rational::zero(), one.clone()]);
        let aut = vec![Poly::x(), Poly::x().neg()];
        let emb = vec![(-(&s + &one), -s.clone()), (s.clone(), s + one)];
        Self::new(min_poly, aut, emb, 1)
    }

    /// The cyclic cubic field cut out by `X³ − 3X − 1` (the real subfield of
    /// the 9th cyclotomic field) with `σ_2(α) = 2 − α²`.
    pub fn simplest_cubic() -> Arc<Self> {
        let p = |c: &[i64]| Poly::new(c.iter().map(|&x| rat(x)).collect());
        Self::new(
            p(&[-1, -3, 0, 1]),
            vec![p(&[0, 1]), p(&[2, 0, -1]), p(&[-2, -1, 1])],
            vec![(rat(-2), rat(-1)), (rat(-1), rat(0)), (rat(1), rat(2))],
            2,
        )
        .expect("X^3 - 3X - 1 is a valid cyclic cubic")
    }

    pub fn degree(&self) -> usize {
        self.automorphisms.len()
    }

    pub fn min_poly(&self) -> &Poly {
        &self.min_poly
    }

    pub fn automorphisms(&self) -> &[Poly] {
        &self.automorphisms
    }

    pub fn embeddings(&self) -> &[(Rational, Rational)] {
        &self.embeddings
    }

    pub fn primary_embedding(&self) -> usize {
        self.primary
    }

    pub fn is_rationals(&self) -> bool {
        self.degree() == 1
    }

    /// 0-based index `k` with `σ_i ∘ σ_j = σ_k` (all indices 0-based).
    pub fn compose_index(&self, i: usize, j: usize) -> usize {
        self.compose[i][j]
    }

    pub fn inverse_index(&self, i: usize) -> usize {
        self.inverse[i]
    }

    /// The permutation `i ↦ τ(i)` of `{0..d-1}` defined by `τ σ_i = σ_{τ(i)}`.
    pub fn index_action(&self, tau: usize) -> Vec<usize> {
        self.compose[tau].clone()
    }

    /// A small generating set of the Galois group (0-based indices).
    pub fn generators(&self) -> Vec<usize> {
        let d = self.degree();
        let mut gens = Vec::new();
        let mut span = vec![false; d];
        span[0] = true;
        for g in 1..d {
            if span[g] {
                continue;
            }
            gens.push(g);
            // close the subgroup under the chosen generators
            let mut elems: Vec<usize> = (0..d).filter(|&k| span[k]).collect();
            let mut k = 0;
            while k < elems.len() {
                for &h in &gens {
                    let c = self.compose[elems[k]][h];
                    if !span[c] {
                        span[c] = true;
                        elems.push(c);
                    }
                }
                k += 1;
            }
        }
        gens
    }

    pub(crate) fn check_index(&self, i: usize) -> Result<usize> {
        if i == 0 || i > self.degree() {
            Err(Error::IndexOutOfRange {
                index: i,
                len: self.degree(),
            })
        } else {
            Ok(i - 1)
        }
    }

    /// Reduces a coefficient vector of length up to `2d - 1`.
    pub(crate) fn reduce(&self, mut c: Vec<Rational>) -> Vec<Rational> {
        let d = self.degree();
        if c.len() <= d {
            c.resize(d, Rational::zero());
            return c;
        }
        let high: Vec<Rational> = c.split_off(d);
        for (k, h) in high.iter().enumerate() {
            if h.is_zero() {
                continue;
            }
            for (t, r) in self.high_powers[k].iter().enumerate() {
                if !r.is_zero() {
                    c[t] += h * r;
                }
            }
        }
        c
    }

    pub(crate) fn mul_coeffs(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let d = self.degree();
        if d == 1 {
            return vec![&a[0] * &b[0]];
        }
        let mut out = vec![Rational::zero(); 2 * d - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        self.reduce(out)
    }

    /// Applies `σ_{i+1}` (0-based) to a coefficient vector.
    pub(crate) fn apply_aut_coeffs(&self, i: usize, x: &[Rational]) -> Vec<Rational> {
        if i == 0 {
            return x.to_vec();
        }
        let d = self.degree();
        let mut out = vec![Rational::zero(); d];
        for (l, xl) in x.iter().enumerate() {
            if xl.is_zero() {
                continue;
            }
            for (t, m) in self.aut_matrix[i][l].iter().enumerate() {
                if !m.is_zero() {
                    out[t] += xl * m;
                }
            }
        }
        out
    }

    /// Sign of the polynomial `p(α)` at the real root isolated by `root`.
    pub(crate) fn sign_at_root(&self, p: &Poly, root: usize) -> i8 {
        if p.is_zero() {
            return 0;
        }
        let (mut lo, mut hi) = self.embeddings[root].clone();
        let lo_sign = sign_of(&self.min_poly.eval(&lo));
        for _ in 0..MAX_BISECTIONS {
            let (a, b) = p.eval_interval(&lo, &hi);
            if a.is_positive() {
                return 1;
            }
            if b.is_negative() {
                return -1;
            }
            let mid = (&lo + &hi) / rat(2);
            let fm = sign_of(&self.min_poly.eval(&mid));
            if fm == 0 {
                return sign_of(&p.eval(&mid));
            }
            if fm == lo_sign {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        panic!("sign determination did not terminate; minimal polynomial is reducible")
    }

    /// Index into `embeddings` of the root `primary ∘ σ_i` (0-based `i`).
    pub fn place_root_index(&self, i: usize) -> usize {
        let a = &self.automorphisms[i];
        let (mut lo, mut hi) = self.embeddings[self.primary].clone();
        let lo_sign = sign_of(&self.min_poly.eval(&lo));
        loop {
            let (a_lo, a_hi) = a.eval_interval(&lo, &hi);
            let hits: Vec<usize> = self
                .embeddings
                .iter()
                .enumerate()
                .filter(|(_, (l, h))| !(a_hi < *l || a_lo > *h))
                .map(|(k, _)| k)
                .collect();
            if hits.len() == 1 {
                return hits[0];
            }
            let mid = (&lo + &hi) / rat(2);
            let fm = sign_of(&self.min_poly.eval(&mid));
            if fm == 0 {
                let v = a.eval(&mid);
                return self
                    .embeddings
                    .iter()
                    .position(|(l, h)| *l <= v && v <= *h)
                    .expect("image of a root is a root");
            }
            if fm == lo_sign {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
}

fn pad(p: Poly, d: usize) -> Vec<Rational> {
    let mut c = p.into_coeffs();
    c.resize(d, Rational::zero());
    c
}

/// Rational root test. Skipped (returns false) when the constant or leading
/// coefficient is too large to enumerate divisors.
fn has_rational_root(p: &Poly) -> bool {
    if p.coeff(0).is_zero() {
        return true;
    }
    let lcm = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denom().clone()));
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let (Some(a0), Some(ad)) = (ints[0].abs().to_u64(), ints.last().unwrap().abs().to_u64()) else {
        return false;
    };
    if a0 > 1_000_000 || ad > 1_000_000 {
        return false;
    }
    let divisors = |n: u64| (1..=n).filter(move |k| n % k == 0);
    for num in divisors(a0) {
        for den in divisors(ad) {
            for s in [1i64, -1] {
                let r = Rational::new(BigInt::from(s) * BigInt::from(num), BigInt::from(den));
                if p.eval(&r).is_zero() {
                    return true;
                }
            }
        }
    }
    false
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rationals() {
            write!(f, "Q")
        } else {
            write!(f, "Q[X]/({})", self.min_poly)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_shorthand() {
        let f = FieldDescriptor::quadratic(&BigInt::from(2)).unwrap();
        assert_eq!(f.degree(), 2);
        assert_eq!(f.compose_index(1, 1), 0);
        assert_eq!(f.inverse_index(1), 1);
        assert_eq!(f.generators(), vec![1]);
        assert!(FieldDescriptor::quadratic(&BigInt::from(4)).is_err());
        assert!(FieldDescriptor::quadratic(&BigInt::from(-3)).is_err());
    }

    #[test]
    fn cubic_group_law_is_cyclic() {
        let f = FieldDescriptor::simplest_cubic();
        assert_eq!(f.compose_index(1, 1), 2);
        assert_eq!(f.compose_index(1, 2), 0);
        assert_eq!(f.generators(), vec![1]);
        // places are the three distinct roots
        let mut roots: Vec<usize> = (0..3).map(|i| f.place_root_index(i)).collect();
        assert_eq!(roots[0], 2);
        roots.sort();
        assert_eq!(roots, vec![0, 1, 2]);
    }

    #[test]
    fn rejects_bad_descriptors() {
        let p = |c: &[i64]| Poly::new(c.iter().map(|&x| rat(x)).collect());
        // reducible: X² − 1
        assert!(FieldDescriptor::new(
            p(&[-1, 0, 1]),
            vec![p(&[0, 1]), p(&[0, -1])],
            vec![(rat(-2), rat(0)), (rat(0), rat(2))],
            1
        )
        .is_err());
        // not Galois: wrong automorphism
        assert!(matches!(
            FieldDescriptor::new(
                p(&[-2, 0, 1]),
                vec![p(&[0, 1]), p(&[1, 1])],
                vec![(rat(-2), rat(-1)), (rat(1), rat(2))],
                1
            ),
            Err(Error::NonGaloisField(_))
        ));
        // interval without a root
        assert!(FieldDescriptor::new(
            p(&[-2, 0, 1]),
            vec![p(&[0, 1]), p(&[0, -1])],
            vec![(rat(-2), rat(-1)), (rat(2), rat(3))],
            1
        )
        .is_err());
        // complex roots
        assert!(FieldDescriptor::new(
            p(&[2, 0, 1]),
            vec![p(&[0, 1]), p(&[0, -1])],
            vec![(rat(-2), rat(-1)), (rat(1), rat(2))],
            1
        )
        .is_err());
    }
}
