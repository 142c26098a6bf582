//! Dense univariate polynomials over Q.
//!
//! Coefficients are stored lowest degree first and kept trimmed, so the zero
//! polynomial is the empty vector.

use std::fmt;

use num_traits::{One, Signed, Zero};

use super::rational::{format_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly(Vec<Rational>);

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    /// The polynomial `X`.
    pub fn x() -> Self {
        Poly(vec![Rational::zero(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.0.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.0.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly::new((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, s: &Rational) -> Poly {
        Poly::new(self.0.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Euclidean division. Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = divisor.leading().recip();
        let mut rem = self.0.clone();
        let mut quot = vec![Rational::zero(); self.0.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let top = rem.len() - 1;
            let c = &rem[top] * &lead_inv;
            if !c.is_zero() {
                for (k, dc) in divisor.0.iter().enumerate() {
                    let t = &c * dc;
                    rem[top - dd + k] -= t;
                }
                quot[top - dd] = c;
            }
            rem.pop();
        }
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn rem(&self, divisor: &Poly) -> Poly {
        self.div_rem(divisor).1
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Conservative enclosure of `self` over `[lo, hi]` by interval Horner.
    pub fn eval_interval(&self, lo: &Rational, hi: &Rational) -> (Rational, Rational) {
        let mut a = Rational::zero();
        let mut b = Rational::zero();
        for c in self.0.iter().rev() {
            let products = [&a * lo, &a * hi, &b * lo, &b * hi];
            let min = products.iter().min().unwrap().clone();
            let max = products.iter().max().unwrap().clone();
            a = min + c;
            b = max + c;
        }
        (a, b)
    }

    /// `self(inner)`.
    pub fn compose(&self, inner: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for c in self.0.iter().rev() {
            acc = acc.mul(inner).add(&Poly::constant(c.clone()));
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(k.into()))
                .collect(),
        )
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&self.leading().recip())
    }

    /// Returns `(g, s, t)` with `s·self + t·other = g` and `g` monic.
    pub fn ext_gcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::constant(Rational::one()), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::constant(Rational::one()));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.leading().recip();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        self.ext_gcd(other).0
    }

    /// Resultant `Res(self, other)` by the Euclidean recurrence.
    pub fn resultant(&self, other: &Poly) -> Rational {
        let (Some(m), Some(n)) = (self.degree(), other.degree()) else {
            return Rational::zero();
        };
        if n == 0 {
            return pow(&other.leading(), m);
        }
        if m == 0 {
            return pow(&self.leading(), n);
        }
        let r = self.rem(other);
        let sign = if (m * n) % 2 == 1 {
            -Rational::one()
        } else {
            Rational::one()
        };
        match r.degree() {
            None => Rational::zero(),
            Some(k) => sign * pow(&other.leading(), m - k) * other.resultant(&r),
        }
    }

    /// Sturm sequence `p, p', -rem(p, p'), ...`.
    pub fn sturm_sequence(&self) -> Vec<Poly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].rem(&seq[n - 1]).neg();
            if r.is_zero() {
                break;
            }
            seq.push(r);
        }
        seq
    }

    /// Number of distinct real roots in the half-open interval `(lo, hi]`.
    pub fn count_roots(&self, lo: &Rational, hi: &Rational) -> usize {
        let seq = self.sturm_sequence();
        let va = sign_variations(&seq, lo);
        let vb = sign_variations(&seq, hi);
        va.saturating_sub(vb)
    }

    /// Number of distinct real roots, counted through Cauchy's bound.
    pub fn count_real_roots(&self) -> usize {
        let Some(d) = self.degree() else { return 0 };
        if d == 0 {
            return 0;
        }
        let lead = self.leading().abs();
        let bound = Rational::one()
            + self
                .0
                .iter()
                .take(d)
                .map(|c| c.abs() / &lead)
                .max()
                .unwrap_or_else(Rational::zero);
        self.count_roots(&-bound.clone(), &bound)
    }
}

fn sign_variations(seq: &[Poly], x: &Rational) -> usize {
    let signs: Vec<bool> = seq
        .iter()
        .map(|p| p.eval(x))
        .filter(|v| !v.is_zero())
        .map(|v| v.is_positive())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

pub(crate) fn pow(base: &Rational, exp: usize) -> Rational {
    num_traits::pow(base.clone(), exp)
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", format_rational(c))?,
                1 => write!(f, "({})X", format_rational(c))?,
                _ => write!(f, "({})X^{k}", format_rational(c))?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::rational::{rat, rat_frac};

    fn p(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&x| rat(x)).collect())
    }

    #[test]
    fn division_identity() {
        let a = p(&[1, 2, 3, 4]);
        let b = p(&[-1, 0, 2]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap() < 2);
    }

    #[test]
    fn ext_gcd_inverts_x_mod_x2_minus_2() {
        // X · (X/2) ≡ 1 mod X² − 2
        let (g, s, _t) = p(&[0, 1]).ext_gcd(&p(&[-2, 0, 1]));
        assert_eq!(g, p(&[1]));
        assert_eq!(s, Poly::new(vec![rat(0), rat_frac(1, 2)]));
    }

    #[test]
    fn resultant_matches_product_over_roots() {
        // Res(X² − 2, X + 1) = (√2 + 1)(−√2 + 1) = −1
        assert_eq!(p(&[-2, 0, 1]).resultant(&p(&[1, 1])), rat(-1));
        // Res(X² − 2, X) = (√2)(−√2) = −2
        assert_eq!(p(&[-2, 0, 1]).resultant(&p(&[0, 1])), rat(-2));
        assert_eq!(p(&[-2, 0, 1]).resultant(&p(&[7])), rat(49));
    }

    #[test]
    fn sturm_counts() {
        let cubic = p(&[-1, -3, 0, 1]);
        assert_eq!(cubic.count_real_roots(), 3);
        assert_eq!(cubic.count_roots(&rat(1), &rat(2)), 1);
        assert_eq!(p(&[1, 0, 1]).count_real_roots(), 0);
    }

    #[test]
    fn compose_and_interval() {
        let sq = p(&[-2, 0, 1]);
        assert_eq!(sq.compose(&p(&[0, -1])), sq);
        let (lo, hi) = sq.eval_interval(&rat(1), &rat(2));
        assert!(lo <= rat(-1) && hi >= rat(2));
    }
}
