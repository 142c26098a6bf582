//! The end-to-end report: validation, the even Clifford algebra, both
//! corestriction routes and the decomposition bookkeeping.

use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::orbits::{even_weight_orbits, OrbitData};
use crate::brauer::{
    corestrict_symbol, format_rational_symbol, normalize_rational_symbol, ramification, symbol_scale, Place,
    QuaternionSymbol, RamificationSet,
};
use crate::clifford::{even_rank3_to_symbol, CliffordAlgebra};
use crate::csa::{build_zg, invariants, StructureAlgebra};
use crate::error::{Error, Result};
use crate::exactfield::json::descriptor_to_json;
use crate::exactfield::{format_rational, same_field, FieldDescriptor, FieldElem, Rational};
use crate::qform::{GramForm, ValidationReport};

/// A symbol over E, coefficients as `"p/q"` strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolDoc {
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub text: String,
}

impl SymbolDoc {
    fn of(s: &QuaternionSymbol) -> Self {
        SymbolDoc {
            a: coeff_strings(s.a()),
            b: coeff_strings(s.b()),
            text: s.to_string(),
        }
    }
}

fn coeff_strings(x: &FieldElem) -> Vec<String> {
    x.coeffs().iter().map(format_rational).collect()
}

/// One rewrite `slot ↦ slot / factor²`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScaleStep {
    pub slot: usize,
    pub factor: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolRoute {
    pub rewrites: Vec<ScaleStep>,
    pub rewritten: SymbolDoc,
    /// `(a, N(b))/Q` before normalization.
    pub corestriction: String,
    /// Both slots replaced by squarefree integers.
    pub normalized: String,
    pub ramification: Vec<Value>,
    pub definite: bool,
    pub split: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantRoute {
    pub dim: usize,
    pub center_dim: usize,
    pub trace_form_signature: [usize; 3],
    /// Signature for `Mat_{2^{d−1}}((−1,−1)_Q)`.
    pub reference_definite: Option<[usize; 3]>,
    /// Signature for `Mat_{2^d}(Q)`.
    pub reference_split: Option<[usize; 3]>,
    /// Signature for `Mat_{2^{d−1}}(D)` with `D` from the symbol route.
    pub reference_symbol_route: Option<[usize; 3]>,
    /// `definite`, `indefinite`, or `unclassified`.
    pub verdict: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parity {
    pub expected: String,
    pub observed: String,
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KSReport {
    pub validation: ValidationReport,
    pub field: Value,
    pub m: usize,
    pub d: usize,
    pub dim_t_q: usize,
    pub ks_dim: Option<u64>,
    pub cores_dim: Option<u64>,
    pub smt_dim: usize,
    pub diagonal: Option<Vec<Vec<String>>>,
    pub c0_symbol: Option<SymbolDoc>,
    pub cores_symbol_route: Option<SymbolRoute>,
    pub cores_invariant_route: Option<InvariantRoute>,
    pub notes: Vec<String>,
    pub cores: Option<String>,
    pub ramification: Option<Vec<Value>>,
    pub definite: Option<bool>,
    pub decomposition: Option<String>,
    pub rank3_extras: Option<String>,
    pub orbit_data: OrbitData,
    pub parity: Option<Parity>,
}

fn pow2(e: usize) -> Option<u64> {
    1u64.checked_shl(e as u32).filter(|_| e < 64)
}

fn places_json(r: &RamificationSet) -> Vec<Value> {
    r.places
        .iter()
        .map(|p| match p {
            Place::Infinity => Value::String("inf".into()),
            Place::Prime(p) => match p.to_u64() {
                Some(n) => Value::from(n),
                None => Value::String(p.to_string()),
            },
        })
        .collect()
}

fn height(x: &FieldElem) -> BigInt {
    x.coeffs().iter().map(|c| c.numer().abs() + c.denom()).sum()
}

/// Generator first, then the diagonal entries, without repeats.
fn scale_candidates(f: &Arc<FieldDescriptor>, diag: &[FieldElem]) -> Vec<FieldElem> {
    let mut out: Vec<FieldElem> = Vec::new();
    if f.degree() > 1 {
        out.push(FieldElem::generator(f));
    }
    for x in diag {
        if !out.contains(x) {
            out.push(x.clone());
        }
    }
    out
}

struct SymbolRouteResult {
    doc: SymbolRoute,
    classified: QuaternionSymbol,
}

/// Rewrites slot 1 to a rational by dividing by a square, shrinks slot 2
/// the same way while its height drops, then corestricts.
fn symbol_route(
    f: &Arc<FieldDescriptor>,
    diag: &[FieldElem],
    c0: &QuaternionSymbol,
) -> Result<Option<SymbolRouteResult>> {
    let candidates = scale_candidates(f, diag);
    let mut best: Option<(BigInt, QuaternionSymbol, FieldElem)> = None;
    for u in candidates.iter().cloned().chain([FieldElem::one(f)]) {
        let t = symbol_scale(c0, 1, &u)?;
        if t.a().as_rational().is_none() {
            continue;
        }
        let h = height(t.a());
        if best.as_ref().is_none_or(|(bh, _, _)| h < *bh) {
            best = Some((h, t, u));
        }
    }
    let Some((_, mut s, u1)) = best else {
        return Ok(None);
    };
    let mut rewrites = Vec::new();
    if !u1.is_one() {
        rewrites.push(ScaleStep {
            slot: 1,
            factor: coeff_strings(&u1),
        });
    }
    for _ in 0..16 {
        let mut step: Option<(BigInt, QuaternionSymbol, FieldElem)> = None;
        let current = height(s.b());
        for u in &candidates {
            let t = symbol_scale(&s, 2, u)?;
            let h = height(t.b());
            if h < current && step.as_ref().is_none_or(|(bh, _, _)| h < *bh) {
                step = Some((h, t, u.clone()));
            }
        }
        let Some((_, t, u)) = step else { break };
        rewrites.push(ScaleStep {
            slot: 2,
            factor: coeff_strings(&u),
        });
        s = t;
    }
    let cores = corestrict_symbol(&s)?;
    let ram = ramification(&cores)?;
    let normalized = normalize_rational_symbol(&cores)?;
    Ok(Some(SymbolRouteResult {
        doc: SymbolRoute {
            rewrites,
            rewritten: SymbolDoc::of(&s),
            corestriction: format_rational_symbol(&cores)?,
            normalized: format_rational_symbol(&normalized)?,
            ramification: places_json(&ram),
            definite: ram.contains_infinity(),
            split: ram.is_empty(),
        },
        classified: normalized,
    }))
}

fn signature_array(a: &StructureAlgebra) -> Result<[usize; 3]> {
    let (p, n, z) = a.trace_form_signature()?;
    Ok([p, n, z])
}

/// `Mat_n(D)` over Q.
fn matrix_over(n: usize, d: &QuaternionSymbol) -> Result<StructureAlgebra> {
    let q = FieldDescriptor::rationals();
    StructureAlgebra::matrix(&q, n)?.tensor(&StructureAlgebra::from_symbol(d)?)
}

fn hamilton() -> QuaternionSymbol {
    QuaternionSymbol::rational(Rational::from_integer((-1).into()), Rational::from_integer((-1).into()))
        .expect("nonzero slots")
}

fn field_orbits(f: &FieldDescriptor) -> Result<OrbitData> {
    let gens: Vec<Vec<usize>> = f.generators().into_iter().map(|g| f.index_action(g)).collect();
    even_weight_orbits(f.degree(), &gens)
}

/// Runs the whole pipeline on `g` over `f`. Validation failures produce a
/// report without algebra data rather than an error.
pub fn ks_report(f: &Arc<FieldDescriptor>, g: &GramForm) -> Result<KSReport> {
    if !same_field(f, g.field()) {
        return Err(Error::FieldMismatch);
    }
    let m = g.dim();
    let d = f.degree();
    let validation = g.validate_k3_rm();
    let mut report = KSReport {
        validation: validation.clone(),
        field: descriptor_to_json(f),
        m,
        d,
        dim_t_q: m * d,
        ks_dim: (m * d).checked_sub(2).and_then(pow2),
        cores_dim: pow2((m.saturating_sub(1)) * d).filter(|_| m >= 1),
        smt_dim: d * m * m.saturating_sub(1) / 2,
        diagonal: None,
        c0_symbol: None,
        cores_symbol_route: None,
        cores_invariant_route: None,
        notes: Vec::new(),
        cores: None,
        ramification: None,
        definite: None,
        decomposition: None,
        rank3_extras: None,
        orbit_data: field_orbits(f)?,
        parity: None,
    };
    if !validation.passed {
        report.notes.push("validation failed; no algebra data computed".into());
        return Ok(report);
    }
    let diag = g.diagonalize()?;
    report.diagonal = Some(diag.entries.iter().map(coeff_strings).collect());

    let mut symbol = None;
    if m == 3 {
        let entries: [FieldElem; 3] = diag.entries.clone().try_into().expect("rank 3");
        let c0 = even_rank3_to_symbol(f, entries)?;
        report.c0_symbol = Some(SymbolDoc::of(&c0.symbol));
        match symbol_route(f, &diag.entries, &c0.symbol)? {
            Some(r) => {
                report.cores = Some(r.doc.normalized.clone());
                report.ramification = Some(r.doc.ramification.clone());
                report.definite = Some(r.doc.definite);
                report.cores_symbol_route = Some(r.doc);
                symbol = Some(r.classified);
            }
            None => report
                .notes
                .push("no square rewrite makes the first slot rational; symbol route skipped".into()),
        }
    } else {
        report
            .notes
            .push(format!("rank {m}: C0(Q) is not a quaternion algebra, symbol route unavailable"));
    }

    let c0_alg = CliffordAlgebra::new(f, diag.entries.clone())?.even_part();
    match build_zg(&c0_alg, f) {
        Err(Error::TooLarge(n)) => report
            .notes
            .push(format!("invariant route skipped: Q-dimension {n} exceeds the exact-solver limit")),
        Err(e) => return Err(e),
        Ok(z) => {
            let inv = invariants(&z)?;
            let center = inv.algebra.center();
            let sig = signature_array(&inv.algebra)?;
            let mut route = InvariantRoute {
                dim: inv.algebra.dim(),
                center_dim: center.dim_over_q,
                trace_form_signature: sig,
                reference_definite: None,
                reference_split: None,
                reference_symbol_route: None,
                verdict: "unclassified".into(),
            };
            if m == 3 {
                let n = 1usize << (d - 1);
                let definite_ref = signature_array(&matrix_over(n, &hamilton())?)?;
                let split_ref =
                    signature_array(&StructureAlgebra::matrix(&FieldDescriptor::rationals(), 2 * n)?)?;
                route.reference_definite = Some(definite_ref);
                route.reference_split = Some(split_ref);
                route.verdict = if sig == definite_ref {
                    "definite".into()
                } else if sig == split_ref {
                    "indefinite".into()
                } else {
                    "unclassified".into()
                };
                if let Some(dsym) = &symbol {
                    let r = signature_array(&matrix_over(n, dsym)?)?;
                    route.reference_symbol_route = Some(r);
                    if r != sig {
                        return Err(Error::RouteDisagreement(format!(
                            "trace-form signature {sig:?} of the invariant algebra differs from {r:?} for Mat_{n}(D)"
                        )));
                    }
                }
            }
            if let (Some(def), true) = (report.definite, route.verdict != "unclassified") {
                if def != (route.verdict == "definite") {
                    return Err(Error::RouteDisagreement(format!(
                        "symbol route says definite = {def}, invariant route says {}",
                        route.verdict
                    )));
                }
            }
            report.cores_invariant_route = Some(route);
        }
    }

    let blocks = 1u64 << (d - 1);
    report.decomposition = Some(format!("A ~ B'^{blocks}, End(B') = cores_(E/Q)(C0(Q))"));
    if m == 3 {
        report.decomposition = Some(format!(
            "A ~ B'^{blocks}, End(B') = cores_(E/Q)(C0(Q)) = Mat_{blocks}(D)"
        ));
        let observed = match (&report.definite, &report.cores_invariant_route) {
            (Some(true), _) => "definite".to_string(),
            (Some(false), _) => "indefinite".to_string(),
            (None, Some(r)) => r.verdict.clone(),
            (None, None) => "unclassified".to_string(),
        };
        let split = report.cores_symbol_route.as_ref().map(|r| r.split);
        let kind = match (observed.as_str(), split) {
            ("indefinite", Some(true)) => "split".to_string(),
            _ => observed.clone(),
        };
        report.rank3_extras = Some(format!(
            "A ~ B^{}, dim B = {}, D {kind}",
            1u64 << (2 * d - 2),
            1u64 << d
        ));
        let expected = if d % 2 == 0 { "definite" } else { "indefinite" };
        report.parity = Some(Parity {
            expected: expected.into(),
            consistent: observed == expected,
            observed,
        });
    }
    Ok(report)
}

impl KSReport {
    /// Canonical JSON: sorted keys, two-space indentation.
    pub fn to_json_string(&self) -> String {
        let v = serde_json::to_value(self).expect("report serializes");
        serde_json::to_string_pretty(&v).expect("value serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::malformed("report", e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "field: degree {}", self.d);
        let _ = writeln!(out, "rank m = {}, dim_Q T = {}", self.m, self.dim_t_q);
        let status = if !self.validation.passed {
            "FAILED"
        } else if self.validation.flagged {
            "passed (flagged)"
        } else {
            "passed"
        };
        let _ = writeln!(out, "validation: {status}");
        for c in &self.validation.checks {
            let mark = if c.passed { "ok" } else { "FAIL" };
            let _ = writeln!(out, "  [{mark}] {}: {}", c.name, c.detail);
        }
        let show = |x: Option<u64>| x.map_or("-".to_string(), |v| v.to_string());
        let _ = writeln!(out, "Kuga-Satake dimension: {}", show(self.ks_dim));
        let _ = writeln!(out, "dim cores: {}", show(self.cores_dim));
        let _ = writeln!(out, "dim SMT: {}", self.smt_dim);
        if let Some(s) = &self.c0_symbol {
            let _ = writeln!(out, "C0(Q) = {}", s.text);
        }
        if let Some(r) = &self.cores_symbol_route {
            let _ = writeln!(out, "rewritten: {}", r.rewritten.text);
            let _ = writeln!(out, "corestriction: {} ~ {}", r.corestriction, r.normalized);
            let ram: Vec<String> = r
                .ramification
                .iter()
                .map(|v| v.as_str().map_or_else(|| v.to_string(), str::to_string))
                .collect();
            let _ = writeln!(out, "ramification: {{{}}}", ram.join(", "));
            let _ = writeln!(out, "definite: {}, split: {}", r.definite, r.split);
        }
        if let Some(r) = &self.cores_invariant_route {
            let _ = writeln!(
                out,
                "invariant route: dim {}, center dim {}, trace form {:?} ({})",
                r.dim, r.center_dim, r.trace_form_signature, r.verdict
            );
        }
        if let Some(s) = &self.decomposition {
            let _ = writeln!(out, "{s}");
        }
        if let Some(s) = &self.rank3_extras {
            let _ = writeln!(out, "{s}");
        }
        let _ = writeln!(out, "orbit sizes: {:?}", self.orbit_data.sizes());
        if let Some(p) = &self.parity {
            let _ = writeln!(
                out,
                "parity: expected {}, observed {} ({})",
                p.expected,
                p.observed,
                if p.consistent { "consistent" } else { "INCONSISTENT" }
            );
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        out
    }
}
