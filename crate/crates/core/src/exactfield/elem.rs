use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::field::FieldDescriptor;
use super::poly::Poly;
use super::rational::{format_rational, rational_sqrt, Rational};
use crate::error::{Error, Result};

/// An element of a number field, stored as the residue `Σ c_k α^k`, `k < d`.
#[derive(Clone, Debug)]
pub struct FieldElem {
    field: Arc<FieldDescriptor>,
    coeffs: Vec<Rational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn same_field(a: &Arc<FieldDescriptor>, b: &Arc<FieldDescriptor>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && same_field(&self.field, &other.field)
    }
}

impl Eq for FieldElem {}

impl FieldElem {
    /// Builds an element from (at most `d`) coefficients; longer inputs are
    /// reduced modulo the minimal polynomial.
    pub fn new(field: &Arc<FieldDescriptor>, coeffs: Vec<Rational>) -> Self {
        let d = field.degree();
        let coeffs = if coeffs.len() < 2 * d {
            field.reduce(coeffs)
        } else {
            let mut c = Poly::new(coeffs).rem(field.min_poly()).into_coeffs();
            c.resize(d, Rational::zero());
            c
        };
        FieldElem {
            field: Arc::clone(field),
            coeffs,
        }
    }

    pub fn from_rational(field: &Arc<FieldDescriptor>, r: Rational) -> Self {
        let mut coeffs = vec![Rational::zero(); field.degree()];
        coeffs[0] = r;
        FieldElem {
            field: Arc::clone(field),
            coeffs,
        }
    }

    pub fn from_int(field: &Arc<FieldDescriptor>, n: i64) -> Self {
        Self::from_rational(field, Rational::from_integer(n.into()))
    }

    pub fn zero(field: &Arc<FieldDescriptor>) -> Self {
        Self::from_rational(field, Rational::zero())
    }

    pub fn one(field: &Arc<FieldDescriptor>) -> Self {
        Self::from_rational(field, Rational::one())
    }

    /// The generator `α` (in `Q` this is the root `0` of `X`).
    pub fn generator(field: &Arc<FieldDescriptor>) -> Self {
        Self::new(field, Poly::x().into_coeffs())
    }

    pub fn field(&self) -> &Arc<FieldDescriptor> {
        &self.field
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn to_poly(&self) -> Poly {
        Poly::new(self.coeffs.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// `Some(r)` when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.coeffs[0].clone())
    }

    fn check_field(&self, other: &FieldElem) -> Result<()> {
        if same_field(&self.field, &other.field) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn checked_add(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check_field(other)?;
        Ok(self.zip(other, |a, b| a + b))
    }

    pub fn checked_sub(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check_field(other)?;
        Ok(self.zip(other, |a, b| a - b))
    }

    pub fn checked_mul(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check_field(other)?;
        Ok(FieldElem {
            field: Arc::clone(&self.field),
            coeffs: self.field.mul_coeffs(&self.coeffs, &other.coeffs),
        })
    }

    pub fn checked_div(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check_field(other)?;
        self.checked_mul(&other.inverse()?)
    }

    fn zip(&self, other: &FieldElem, f: impl Fn(&Rational, &Rational) -> Rational) -> FieldElem {
        FieldElem {
            field: Arc::clone(&self.field),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    /// Multiplicative inverse through the extended gcd with the minimal
    /// polynomial.
    pub fn inverse(&self) -> Result<FieldElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(&self.field, r.recip()));
        }
        let (g, s, _) = self.to_poly().ext_gcd(self.field.min_poly());
        if g.degree() != Some(0) {
            return Err(Error::InvalidDescriptor(
                "minimal polynomial is reducible (zero divisor found)".into(),
            ));
        }
        Ok(Self::new(&self.field, s.into_coeffs()))
    }

    pub fn scale(&self, r: &Rational) -> FieldElem {
        FieldElem {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    pub fn square(&self) -> FieldElem {
        self * self
    }

    /// `σ_i(x)` for the 1-based automorphism index `i`.
    pub fn apply_automorphism(&self, i: usize) -> Result<FieldElem> {
        let k = self.field.check_index(i)?;
        Ok(self.apply_aut0(k))
    }

    pub(crate) fn apply_aut0(&self, k: usize) -> FieldElem {
        FieldElem {
            field: Arc::clone(&self.field),
            coeffs: self.field.apply_aut_coeffs(k, &self.coeffs),
        }
    }

    /// `N_{E/Q}(x)` as the resultant of the minimal polynomial and the
    /// representative (the minimal polynomial is monic).
    pub fn norm(&self) -> Rational {
        if let Some(r) = self.as_rational() {
            return num_traits::pow(r, self.field.degree());
        }
        self.field.min_poly().resultant(&self.to_poly())
    }

    /// Trace `Σ_i σ_i(x)`.
    pub fn trace(&self) -> Rational {
        let mut acc = Self::zero(&self.field);
        for k in 0..self.field.degree() {
            acc = &acc + &self.apply_aut0(k);
        }
        acc.as_rational().expect("trace of a Galois field element is rational")
    }

    /// Sign of the image under real place `i`, i.e. `σ_i(x)` at the primary
    /// embedding.
    pub fn sign_at_embedding(&self, i: usize) -> Result<i8> {
        let k = self.field.check_index(i)?;
        Ok(self.sign_at0(k))
    }

    pub(crate) fn sign_at0(&self, k: usize) -> i8 {
        if self.is_zero() {
            return 0;
        }
        if let Some(r) = self.as_rational() {
            return super::rational::sign_of(&r);
        }
        let image = self.apply_aut0(k);
        self.field
            .sign_at_root(&image.to_poly(), self.field.primary_embedding())
    }

    /// Square root in a quadratic field, if one exists.
    pub fn quadratic_is_square(&self) -> Result<Option<FieldElem>> {
        if self.field.degree() != 2 {
            return Err(Error::UnsupportedDegree(self.field.degree()));
        }
        // X² + pX + q; β = α + p/2 satisfies β² = m with m = p²/4 − q.
        let f = self.field.min_poly();
        let half_p = f.coeff(1) / Rational::from_integer(2.into());
        let m = &half_p * &half_p - f.coeff(0);
        let a = &self.coeffs[0] - &self.coeffs[1] * &half_p;
        let b = self.coeffs[1].clone();
        let build = |u: Rational, v: Rational| {
            // u + vβ = (u + v p/2) + v α
            FieldElem::new(&self.field, vec![&u + &v * &half_p, v])
        };
        let two = Rational::from_integer(2.into());
        if b.is_zero() {
            if let Some(s) = rational_sqrt(&a) {
                return Ok(Some(build(s, Rational::zero())));
            }
            if let Some(t) = rational_sqrt(&(&a / &m)) {
                return Ok(Some(build(Rational::zero(), t)));
            }
            return Ok(None);
        }
        let Some(s) = rational_sqrt(&(&a * &a - &m * &b * &b)) else {
            return Ok(None);
        };
        for cand in [(&a + &s) / &two, (&a - &s) / &two] {
            if let Some(u) = rational_sqrt(&cand) {
                if u.is_zero() {
                    continue;
                }
                let v = &b / (&two * &u);
                if &u * &u + &m * &v * &v == a {
                    return Ok(Some(build(u, v)));
                }
            }
        }
        Ok(None)
    }
}

/// Exact arithmetic on two elements of the same field.
pub fn field_arith(x: &FieldElem, y: &FieldElem, op: ArithOp) -> Result<FieldElem> {
    match op {
        ArithOp::Add => x.checked_add(y),
        ArithOp::Sub => x.checked_sub(y),
        ArithOp::Mul => x.checked_mul(y),
        ArithOp::Div => x.checked_div(y),
    }
}

impl Add for &FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: &FieldElem) -> FieldElem {
        self.checked_add(rhs).expect("field mismatch")
    }
}

impl Sub for &FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: &FieldElem) -> FieldElem {
        self.checked_sub(rhs).expect("field mismatch")
    }
}

impl Mul for &FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: &FieldElem) -> FieldElem {
        self.checked_mul(rhs).expect("field mismatch")
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = if is_pure_quadratic(&self.field) {
            format!("√{}", format_rational(&-self.field.min_poly().coeff(0)))
        } else {
            "a".to_string()
        };
        let mut terms = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cs = format_rational(c);
            terms.push(match (k, cs.as_str()) {
                (0, _) => cs,
                (1, "1") => name.clone(),
                (1, "-1") => format!("-{name}"),
                (1, _) => format!("{cs}*{name}"),
                (_, "1") => format!("{name}^{k}"),
                (_, "-1") => format!("-{name}^{k}"),
                _ => format!("{cs}*{name}^{k}"),
            });
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        let mut out = terms[0].clone();
        for t in &terms[1..] {
            match t.strip_prefix('-') {
                Some(rest) => out.push_str(&format!(" - {rest}")),
                None => out.push_str(&format!(" + {t}")),
            }
        }
        write!(f, "{out}")
    }
}

fn is_pure_quadratic(f: &FieldDescriptor) -> bool {
    f.degree() == 2 && f.min_poly().coeff(1).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::rational::{rat, rat_frac};
    use num_bigint::BigInt;

    fn q(m: i64) -> Arc<FieldDescriptor> {
        FieldDescriptor::quadratic(&BigInt::from(m)).unwrap()
    }

    fn e(f: &Arc<FieldDescriptor>, a: i64, b: i64) -> FieldElem {
        FieldElem::new(f, vec![rat(a), rat(b)])
    }

    #[test]
    fn difference_of_squares() {
        let f = q(2);
        assert_eq!(&e(&f, 1, 1) * &e(&f, 1, -1), FieldElem::from_int(&f, -1));
        assert!(field_arith(&e(&f, 1, 1), &e(&f, 1, 1), ArithOp::Div).unwrap().is_one());
    }

    #[test]
    fn inverse_of_sqrt2() {
        let f = q(2);
        let inv = e(&f, 0, 1).inverse().unwrap();
        assert_eq!(inv, FieldElem::new(&f, vec![rat(0), rat_frac(1, 2)]));
        assert_eq!(
            field_arith(&e(&f, 1, 0), &FieldElem::zero(&f), ArithOp::Div),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn mismatched_fields() {
        let a = e(&q(2), 1, 1);
        let b = e(&q(3), 1, 1);
        assert_eq!(field_arith(&a, &b, ArithOp::Add), Err(Error::FieldMismatch));
    }

    #[test]
    fn automorphisms_on_quadratic() {
        let f = q(5);
        let x = e(&f, 3, 7);
        assert_eq!(x.apply_automorphism(1).unwrap(), x);
        assert_eq!(x.apply_automorphism(2).unwrap(), e(&f, 3, -7));
        assert_eq!(
            x.apply_automorphism(2).unwrap().apply_automorphism(2).unwrap(),
            x
        );
        assert!(matches!(
            x.apply_automorphism(3),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn norms() {
        let f = q(2);
        assert_eq!(e(&f, -1, 1).norm(), rat(-1));
        assert_eq!(e(&f, 1, 1).norm(), rat(-1));
        assert_eq!(FieldElem::from_int(&f, 7).norm(), rat(49));
        let c = FieldDescriptor::simplest_cubic();
        assert_eq!(FieldElem::from_int(&c, 7).norm(), rat(343));
        assert_eq!(FieldElem::zero(&f).norm(), rat(0));
    }

    #[test]
    fn signs() {
        let f = q(2);
        assert_eq!(e(&f, 0, 1).sign_at_embedding(1).unwrap(), 1);
        assert_eq!(e(&f, 0, 1).sign_at_embedding(2).unwrap(), -1);
        // −(2 − √2) < 0
        assert_eq!(e(&f, -2, 1).sign_at_embedding(1).unwrap(), -1);
        assert_eq!(FieldElem::zero(&f).sign_at_embedding(2).unwrap(), 0);
        // 3 − 2√2 ≈ 0.17 sits close to zero
        assert_eq!(e(&f, 3, -2).sign_at_embedding(1).unwrap(), 1);
        assert_eq!(e(&f, 3, 2).sign_at_embedding(2).unwrap(), 1);
    }

    #[test]
    fn quadratic_square_roots() {
        let f = q(2);
        assert_eq!(
            FieldElem::from_int(&f, 2).quadratic_is_square().unwrap(),
            Some(e(&f, 0, 1))
        );
        assert!(FieldElem::one(&f).quadratic_is_square().unwrap().unwrap().is_one());
        let r = e(&f, 3, 2).quadratic_is_square().unwrap().unwrap();
        assert_eq!(r.square(), e(&f, 3, 2));
        assert_eq!(e(&f, 1, 1).quadratic_is_square().unwrap(), None);
        assert_eq!(
            FieldElem::one(&FieldDescriptor::simplest_cubic()).quadratic_is_square(),
            Err(Error::UnsupportedDegree(3))
        );
    }

    #[test]
    fn display() {
        let f = q(2);
        assert_eq!(e(&f, -2, 1).to_string(), "-2 + √2");
        assert_eq!(e(&f, 0, -1).to_string(), "-√2");
    }
}
