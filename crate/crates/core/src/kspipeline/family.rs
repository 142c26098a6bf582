//! The six-lines family over `Q(√d)` and a search for rank-3 forms with
//! the K3 signature profile.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::report::{ks_report, KSReport};
use crate::brauer::squarefree_kernel;
use crate::error::{Error, Result};
use crate::exactfield::{format_rational, rat, FieldDescriptor, FieldElem, Rational};
use crate::qform::GramForm;

pub const HAMILTON: &str = "(-1,-1)/Q";

/// Checks `d = c² + e²` with `d > 1` a squarefree integer and `c, e > 0`.
pub fn check_family_parameters(d: &Rational, c: &Rational, e: &Rational) -> Result<BigInt> {
    let show = |r: &Rational| format_rational(r);
    if !d.is_integer() || d <= &Rational::one() {
        return Err(Error::ParameterConstraintViolated(format!(
            "d = {} must be an integer greater than 1",
            show(d)
        )));
    }
    let dn = d.to_integer();
    if squarefree_kernel(d, 1 << 20)? != dn {
        return Err(Error::ParameterConstraintViolated(format!("d = {dn} is not squarefree")));
    }
    if !c.is_positive() || !e.is_positive() {
        return Err(Error::ParameterConstraintViolated("c and e must be positive".into()));
    }
    if c * c + e * e != *d {
        return Err(Error::ParameterConstraintViolated(format!(
            "{} != {}^2 + {}^2",
            show(d),
            show(c),
            show(e)
        )));
    }
    Ok(dn)
}

/// `√d X₁² + √d X₂² − (d − √d c) X₃²` over `Q(√d)`.
pub fn family_form(d: &Rational, c: &Rational, e: &Rational) -> Result<(Arc<FieldDescriptor>, GramForm)> {
    let dn = check_family_parameters(d, c, e)?;
    let f = FieldDescriptor::quadratic(&dn)?;
    let r = FieldElem::generator(&f);
    let third = -&(&FieldElem::from_rational(&f, d.clone()) - &r.scale(c));
    let g = GramForm::diagonal(&f, vec![r.clone(), r, third])?;
    Ok((f, g))
}

/// The family report; the classified corestriction must be `(−1,−1)_Q`.
pub fn six_lines_family(d: &Rational, c: &Rational, e: &Rational) -> Result<KSReport> {
    let (f, g) = family_form(d, c, e)?;
    let report = ks_report(&f, &g)?;
    match report.cores.as_deref() {
        Some(HAMILTON) => Ok(report),
        other => Err(Error::FamilyClassificationMismatch(format!(
            "expected {HAMILTON}, got {}",
            other.unwrap_or("no symbol-route result")
        ))),
    }
}

/// Integer triples `(d, c, e)` with `d = c² + e² ≤ max_d` squarefree.
pub fn integer_family_grid(max_d: u64) -> Vec<(u64, u64, u64)> {
    let mut out = Vec::new();
    let mut c = 1;
    while c * c < max_d {
        let mut e = 1;
        while c * c + e * e <= max_d {
            let d = c * c + e * e;
            let dr = rat(d as i64);
            if squarefree_kernel(&dr, 1 << 20).is_ok_and(|k| k == BigInt::from(d)) {
                out.push((d, c, e));
            }
            e += 1;
        }
        c += 1;
    }
    out.sort_unstable();
    out
}

/// All elements `Σ c_l α^l` with integer `|c_l| ≤ bound`, nonzero.
fn small_elements(f: &Arc<FieldDescriptor>, bound: i64) -> Vec<FieldElem> {
    let d = f.degree();
    let width = (2 * bound + 1) as usize;
    let total = width.pow(d as u32);
    (0..total)
        .map(|mut k| {
            let coeffs: Vec<Rational> = (0..d)
                .map(|_| {
                    let c = (k % width) as i64 - bound;
                    k /= width;
                    rat(c)
                })
                .collect();
            FieldElem::new(f, coeffs)
        })
        .filter(|x| !x.is_zero())
        .collect()
}

/// First `diag(a, a, c)` with small integer coefficients whose signature is
/// `(2, 1)` at place 1 and `(0, 3)` elsewhere. Repeating `a` keeps the
/// first slot of `C⁰ = (−a², −ac)` a square multiple of `−1`.
pub fn search_rank3_form(f: &Arc<FieldDescriptor>, bound: i64) -> Option<GramForm> {
    let d = f.degree();
    let elems = small_elements(f, bound);
    let signs = |x: &FieldElem| (0..d).map(|k| x.sign_at0(k)).collect::<Vec<_>>();
    let first_positive: Vec<&FieldElem> = elems
        .iter()
        .filter(|x| signs(x).iter().enumerate().all(|(k, s)| (*s > 0) == (k == 0)))
        .collect();
    let all_negative: Vec<&FieldElem> = elems
        .iter()
        .filter(|x| signs(x).iter().all(|s| *s < 0))
        .collect();
    let a = first_positive.first()?;
    let c = all_negative.first()?;
    let g = GramForm::diagonal(f, vec![(*a).clone(), (*a).clone(), (*c).clone()]).ok()?;
    g.validate_k3_rm().passed.then_some(g)
}
