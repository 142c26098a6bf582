//! Quaternion symbols, Hilbert symbols over Q and ramification sets.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactfield::{format_rational, same_field, FieldDescriptor, FieldElem, Rational};

/// Default trial-division bound used by [`ramification`].
pub const DEFAULT_FACTOR_BOUND: u64 = 1 << 20;

/// The quaternion algebra `(a, b)_K`: `i² = a`, `j² = b`, `ij = −ji`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuaternionSymbol {
    a: FieldElem,
    b: FieldElem,
}

impl QuaternionSymbol {
    pub fn new(a: FieldElem, b: FieldElem) -> Result<Self> {
        if !same_field(a.field(), b.field()) {
            return Err(Error::FieldMismatch);
        }
        if a.is_zero() || b.is_zero() {
            return Err(Error::ZeroSlot);
        }
        Ok(QuaternionSymbol { a, b })
    }

    pub fn rational(a: Rational, b: Rational) -> Result<Self> {
        let q = FieldDescriptor::rationals();
        Self::new(FieldElem::from_rational(&q, a), FieldElem::from_rational(&q, b))
    }

    pub fn field(&self) -> &Arc<FieldDescriptor> {
        self.a.field()
    }

    pub fn a(&self) -> &FieldElem {
        &self.a
    }

    pub fn b(&self) -> &FieldElem {
        &self.b
    }

    pub fn slot(&self, slot: usize) -> &FieldElem {
        if slot == 1 {
            &self.a
        } else {
            &self.b
        }
    }

    fn rational_slots(&self) -> Result<(Rational, Rational)> {
        match (self.a.as_rational(), self.b.as_rational()) {
            (Some(a), Some(b)) if self.field().is_rationals() => Ok((a, b)),
            _ => Err(Error::FieldMismatch),
        }
    }
}

impl fmt::Display for QuaternionSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = if self.field().is_rationals() { "Q".to_string() } else { "E".to_string() };
        write!(f, "({},{})/{}", self.a, self.b, base)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Prime(BigInt),
    Infinity,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Prime(p) => write!(f, "{p}"),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

impl Place {
    /// Parses `inf`, `∞` or a prime.
    pub fn parse(s: &str) -> Result<Place> {
        let t = s.trim();
        if matches!(t, "inf" | "infinity" | "∞" | "oo") {
            return Ok(Place::Infinity);
        }
        let p: BigInt = t.parse().map_err(|_| Error::NotAPlace(s.to_string()))?;
        Place::prime(p)
    }

    pub fn prime(p: BigInt) -> Result<Place> {
        match is_prime(&p, DEFAULT_FACTOR_BOUND) {
            Ok(true) => Ok(Place::Prime(p)),
            _ => Err(Error::NotAPlace(p.to_string())),
        }
    }
}

/// Primality by trial division, giving up beyond `bound²`.
fn is_prime(n: &BigInt, bound: u64) -> Result<bool> {
    if *n < BigInt::from(2) {
        return Ok(false);
    }
    let (primes, rest) = factor(n, bound)?;
    Ok(rest.is_one() && primes.len() == 1 && primes[0].1 == 1)
}

/// Factors `|n|` into `(prime, exponent)` pairs by trial division. Returns
/// the cofactor 1 on success; a cofactor that may be composite raises an
/// error.
fn factor(n: &BigInt, bound: u64) -> Result<(Vec<(BigInt, u32)>, BigInt)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut p: u64 = 2;
    while p <= bound {
        let pb = BigInt::from(p);
        if &pb * &pb > n {
            break;
        }
        let mut e = 0;
        while (&n % &pb).is_zero() {
            n /= &pb;
            e += 1;
        }
        if e > 0 {
            out.push((pb, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n.is_one() {
        return Ok((out, n));
    }
    let pb = BigInt::from(p);
    if &pb * &pb > n {
        out.push((n, 1));
        return Ok((out, BigInt::one()));
    }
    Err(Error::FactorizationBoundExceeded(n.to_string()))
}

/// `a = p^v · u` with `p ∤ u`, for a nonzero integer `a`.
fn split_valuation(a: &BigInt, p: &BigInt) -> (u32, BigInt) {
    let mut u = a.clone();
    let mut v = 0;
    while (&u % p).is_zero() {
        u /= p;
        v += 1;
    }
    (v, u)
}

/// Legendre symbol `(u|p)` for odd prime `p ∤ u`, by Euler's criterion.
fn legendre(u: &BigInt, p: &BigInt) -> i8 {
    let r = u.mod_floor(p);
    let e = (p - 1u32) / 2u32;
    if r.modpow(&e, p).is_one() {
        1
    } else {
        -1
    }
}

/// Integer in the same square class: multiply by the denominator squared.
fn integral_rep(r: &Rational) -> BigInt {
    r.numer() * r.denom()
}

/// `(a, b)_v` for nonzero rationals.
pub fn hilbert_symbol(a: &Rational, b: &Rational, place: &Place) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroInput);
    }
    let p = match place {
        Place::Infinity => {
            return Ok(if a.is_negative() && b.is_negative() { -1 } else { 1 });
        }
        Place::Prime(p) => p,
    };
    let (alpha, u) = split_valuation(&integral_rep(a), p);
    let (beta, v) = split_valuation(&integral_rep(b), p);
    if *p == BigInt::from(2) {
        let eps = |x: &BigInt| (x.mod_floor(&BigInt::from(4)) == BigInt::from(3)) as u32;
        let omega = |x: &BigInt| {
            let r = x.mod_floor(&BigInt::from(8)).to_u32().unwrap();
            (r == 3 || r == 5) as u32
        };
        let e = eps(&u) * eps(&v) + alpha * omega(&v) + beta * omega(&u);
        return Ok(if e % 2 == 0 { 1 } else { -1 });
    }
    let mut s: i8 = 1;
    if (alpha * beta) % 2 == 1 {
        s *= legendre(&BigInt::from(-1), p);
    }
    if beta % 2 == 1 {
        s *= legendre(&u, p);
    }
    if alpha % 2 == 1 {
        s *= legendre(&v, p);
    }
    Ok(s)
}

/// Places of Q where a symbol over Q ramifies. Always of even size.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RamificationSet {
    pub places: BTreeSet<Place>,
}

impl RamificationSet {
    pub fn contains_infinity(&self) -> bool {
        self.places.contains(&Place::Infinity)
    }

    pub fn is_empty(&self) -> bool {
        self.places.is_empty()
    }

    pub fn len(&self) -> usize {
        self.places.len()
    }
}

impl fmt::Display for RamificationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.places.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", items.join(", "))
    }
}

/// `{∞, 2}` together with the primes dividing the numerators and
/// denominators of `a` and `b`.
pub fn candidate_places(a: &Rational, b: &Rational, bound: u64) -> Result<Vec<Place>> {
    let mut primes: BTreeSet<BigInt> = BTreeSet::from([BigInt::from(2)]);
    for n in [a.numer(), a.denom(), b.numer(), b.denom()] {
        for (p, _) in factor(n, bound)?.0 {
            primes.insert(p);
        }
    }
    let mut out: Vec<Place> = primes.into_iter().map(Place::Prime).collect();
    out.push(Place::Infinity);
    Ok(out)
}

pub fn ramification(s: &QuaternionSymbol) -> Result<RamificationSet> {
    ramification_with_bound(s, DEFAULT_FACTOR_BOUND)
}

pub fn ramification_with_bound(s: &QuaternionSymbol, bound: u64) -> Result<RamificationSet> {
    let (a, b) = s.rational_slots()?;
    let mut places = BTreeSet::new();
    for v in candidate_places(&a, &b, bound)? {
        if hilbert_symbol(&a, &b, &v)? == -1 {
            places.insert(v);
        }
    }
    if places.len() % 2 == 1 {
        return Err(Error::OddRamification);
    }
    Ok(RamificationSet { places })
}

pub fn is_split(s: &QuaternionSymbol) -> Result<bool> {
    Ok(ramification(s)?.is_empty())
}

pub fn is_definite(s: &QuaternionSymbol) -> Result<bool> {
    Ok(ramification(s)?.contains_infinity())
}

pub fn symbols_isomorphic_q(s1: &QuaternionSymbol, s2: &QuaternionSymbol) -> Result<bool> {
    Ok(ramification(s1)? == ramification(s2)?)
}

/// Rewrites `slot` (1 or 2) of `s` by dividing it by `u²`, which gives an
/// isomorphic symbol.
pub fn symbol_scale(s: &QuaternionSymbol, slot: usize, u: &FieldElem) -> Result<QuaternionSymbol> {
    if u.is_zero() {
        return Err(Error::ZeroScale);
    }
    let u2 = u.square();
    match slot {
        1 => QuaternionSymbol::new(s.a.checked_div(&u2)?, s.b.clone()),
        2 => QuaternionSymbol::new(s.a.clone(), s.b.checked_div(&u2)?),
        _ => Err(Error::IndexOutOfRange { index: slot, len: 2 }),
    }
}

/// `cores_{E/Q}(a, b)_E = (a, N(b))_Q` for rational `a`.
pub fn corestrict_symbol(s: &QuaternionSymbol) -> Result<QuaternionSymbol> {
    let a = s.a.as_rational().ok_or(Error::FirstSlotNotRational)?;
    QuaternionSymbol::rational(a, s.b.norm())
}

/// Squarefree integer in the square class of a nonzero rational.
pub fn squarefree_kernel(r: &Rational, bound: u64) -> Result<BigInt> {
    let n = integral_rep(r);
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    let (primes, _) = factor(&n, bound)?;
    let mut k = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    for (p, e) in primes {
        if e % 2 == 1 {
            k *= p;
        }
    }
    Ok(k)
}

/// Replaces both slots of a symbol over Q by their squarefree kernels.
pub fn normalize_rational_symbol(s: &QuaternionSymbol) -> Result<QuaternionSymbol> {
    let (a, b) = s.rational_slots()?;
    QuaternionSymbol::rational(
        Rational::from_integer(squarefree_kernel(&a, DEFAULT_FACTOR_BOUND)?),
        Rational::from_integer(squarefree_kernel(&b, DEFAULT_FACTOR_BOUND)?),
    )
}

/// `(a,b)/Q` with rationals as `p/q`.
pub fn format_rational_symbol(s: &QuaternionSymbol) -> Result<String> {
    let (a, b) = s.rational_slots()?;
    Ok(format!("({},{})/Q", format_rational(&a), format_rational(&b)))
}
