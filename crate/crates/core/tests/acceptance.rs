//! Acceptance suite. Each test prints one `PASS`/`FAIL` line.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use kuga_satake::brauer::{candidate_places, hilbert_symbol, Place, QuaternionSymbol, DEFAULT_FACTOR_BOUND};
use kuga_satake::cli::run_with;
use kuga_satake::clifford::{clifford_mul, even_rank3_to_symbol, CliffordAlgebra, CliffordElem};
use kuga_satake::csa::{build_zg, invariants, verify_twisted_iso, verify_twisted_iso_with, StructureAlgebra};
use kuga_satake::exactfield::{format_rational, rat, rat_frac, FieldDescriptor, FieldElem, Rational};
use kuga_satake::kspipeline::{
    cyclic_generator, even_weight_orbits, family_form, ks_report, search_rank3_form, symmetric_generators,
};
use num_bigint::BigInt;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

const FAMILY_RUNTIME: Duration = Duration::from_secs(1);
const INVARIANT_RUNTIME: Duration = Duration::from_secs(10);
const HILBERT_RUNTIME: Duration = Duration::from_secs(5);
const RANDOM_FORMS: usize = 100;
const HILBERT_PAIRS: usize = 500;
const SEED: u64 = 0x6b73_3336;

fn verdict(n: u32, name: &str, failures: &[String]) {
    if failures.is_empty() {
        println!("PASS criterion {n}: {name}");
    } else {
        println!("FAIL criterion {n}: {name}: {}", failures.join("; "));
    }
    assert!(failures.is_empty(), "criterion {n} failed: {failures:?}");
}

/// Admissible `(d, c, e)` with `d = c² + e²`.
fn grid() -> Vec<(Rational, Rational, Rational)> {
    let ints = [(2, 1, 1), (5, 1, 2), (5, 2, 1), (13, 2, 3), (13, 3, 2), (10, 1, 3), (17, 1, 4)];
    let mut out: Vec<_> = ints.iter().map(|&(d, c, e)| (rat(d), rat(c), rat(e))).collect();
    out.push((rat(2), rat_frac(7, 5), rat_frac(1, 5)));
    out.push((rat(5), rat_frac(11, 5), rat_frac(2, 5)));
    out
}

fn cli_json(args: &[&str]) -> (i32, Value) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_with(std::iter::once("kuga-satake").chain(args.iter().copied()), &mut out, &mut err);
    let v = serde_json::from_slice(&out).unwrap_or(Value::Null);
    (code, v)
}

#[test]
fn criterion_1_six_lines_regression() {
    let mut failures = Vec::new();
    for (d, c, e) in [(2i64, 1i64, 1i64), (5, 1, 2), (13, 2, 3)] {
        let start = Instant::now();
        let (code, v) = cli_json(&["six-lines", "--d", &d.to_string(), "--c", &c.to_string(), "--e", &e.to_string()]);
        let elapsed = start.elapsed();
        let tag = format!("({d},{c},{e})");
        if code != 0 {
            failures.push(format!("{tag}: exit code {code}"));
            continue;
        }
        // C⁰ = (−ab, −ac) for (a, b, c) = (√d, √d, −(d − √d c)):
        // −ab = −d and −ac = −dc + d√d
        let want_a = json!([(-d).to_string(), "0"]);
        let want_b = json!([(-d * c).to_string(), d.to_string()]);
        if v["c0_symbol"]["a"] != want_a || v["c0_symbol"]["b"] != want_b {
            failures.push(format!("{tag}: C0 symbol {}", v["c0_symbol"]));
        }
        let route = &v["cores_symbol_route"];
        let want_cores = format!("(-1,{})/Q", c * c - d);
        if route["corestriction"] != json!(want_cores) {
            failures.push(format!("{tag}: corestriction {}", route["corestriction"]));
        }
        if v["cores"] != json!("(-1,-1)/Q") || route["normalized"] != json!("(-1,-1)/Q") {
            failures.push(format!("{tag}: cores {}", v["cores"]));
        }
        if v["ramification"] != json!([2, "inf"]) {
            failures.push(format!("{tag}: ramification {}", v["ramification"]));
        }
        if v["definite"] != json!(true) {
            failures.push(format!("{tag}: not definite"));
        }
        if elapsed >= FAMILY_RUNTIME {
            failures.push(format!("{tag}: took {elapsed:?}"));
        }
    }
    verdict(1, "six-lines family regression", &failures);
}

#[test]
fn criterion_2_dimension_law() {
    let mut failures = Vec::new();
    let start = Instant::now();
    let (f, g) = family_form(&rat(2), &rat(1), &rat(1)).unwrap();
    let diag = g.diagonalize().unwrap();
    let c0 = CliffordAlgebra::new(&f, diag.entries.clone()).unwrap().even_part();
    let z = build_zg(&c0, &f).unwrap();
    if z.q_dim() != 32 {
        failures.push(format!("Q-dimension of Z_G is {}", z.q_dim()));
    }
    let inv = invariants(&z).unwrap();
    let center = inv.algebra.center();
    let elapsed = start.elapsed();
    if inv.algebra.dim() != 16 {
        failures.push(format!("invariant dimension {}", inv.algebra.dim()));
    }
    if center.dim_over_q != 1 {
        failures.push(format!("center dimension {}", center.dim_over_q));
    }
    if elapsed >= INVARIANT_RUNTIME {
        failures.push(format!("took {elapsed:?}"));
    }
    verdict(2, "corestriction has dimension 16 and center Q", &failures);
}

#[test]
fn criterion_3_two_route_agreement() {
    let mut failures = Vec::new();
    let q = FieldDescriptor::rationals();
    let hamilton = QuaternionSymbol::rational(rat(-1), rat(-1)).unwrap();
    let mat2_h = StructureAlgebra::matrix(&q, 2)
        .unwrap()
        .tensor(&StructureAlgebra::from_symbol(&hamilton).unwrap())
        .unwrap();
    let definite = mat2_h.trace_form_signature().unwrap();
    let split = StructureAlgebra::matrix(&q, 4).unwrap().trace_form_signature().unwrap();
    let triples = grid();
    assert!(triples.len() >= 5);
    for (d, c, e) in &triples {
        let tag = format!("({},{},{})", format_rational(d), format_rational(c), format_rational(e));
        let (f, g) = family_form(d, c, e).unwrap();
        let diag = g.diagonalize().unwrap();
        let c0 = CliffordAlgebra::new(&f, diag.entries.clone()).unwrap().even_part();
        let inv = invariants(&build_zg(&c0, &f).unwrap()).unwrap();
        let sig = inv.algebra.trace_form_signature().unwrap();
        if sig != definite {
            failures.push(format!("{tag}: {sig:?} != {definite:?}"));
        }
        if sig == split {
            failures.push(format!("{tag}: matches Mat_4(Q) {split:?}"));
        }
        let report = ks_report(&f, &g).unwrap();
        if report.definite != Some(true) {
            failures.push(format!("{tag}: symbol route not definite"));
        }
    }
    verdict(3, &format!("invariant route matches Mat_2((-1,-1)) on {} triples", triples.len()), &failures);
}

/// Expected `x·y` for `x, y ∈ {1, i, j, k}` in `(a, b)` as `(coefficient, basis index)`.
fn quaternion_rule(x: usize, y: usize, a: &FieldElem, b: &FieldElem) -> (FieldElem, usize) {
    let one = FieldElem::one(a.field());
    match (x, y) {
        (0, y) => (one, y),
        (x, 0) => (one, x),
        (1, 1) => (a.clone(), 0),
        (2, 2) => (b.clone(), 0),
        (3, 3) => (-&(a * b), 0),
        (1, 2) => (one, 3),
        (2, 1) => (-&one, 3),
        (1, 3) => (a.clone(), 2),
        (3, 1) => (-a, 2),
        (2, 3) => (-b, 1),
        (3, 2) => (b.clone(), 1),
        _ => unreachable!(),
    }
}

fn scaled(x: &CliffordElem, c: &FieldElem) -> BTreeMap<u32, FieldElem> {
    x.terms.iter().map(|(s, v)| (*s, c * v)).filter(|(_, v)| !v.is_zero()).collect()
}

#[test]
fn criterion_4_rank3_identification() {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let fields = [FieldDescriptor::rationals(), FieldDescriptor::quadratic(&BigInt::from(2)).unwrap()];
    for f in &fields {
        let mut checked = 0;
        while checked < RANDOM_FORMS {
            let entries: Vec<FieldElem> = (0..3)
                .map(|_| {
                    let coeffs = (0..f.degree())
                        .map(|_| rat_frac(rng.gen_range(-9..=9), rng.gen_range(1..=4)))
                        .collect();
                    FieldElem::new(f, coeffs)
                })
                .collect();
            if entries.iter().any(FieldElem::is_zero) {
                continue;
            }
            checked += 1;
            let id = even_rank3_to_symbol(f, entries.clone().try_into().unwrap()).unwrap();
            let (a, b) = (id.symbol.a().clone(), id.symbol.b().clone());
            if a != -&(&entries[0] * &entries[1]) || b != -&(&entries[0] * &entries[2]) {
                failures.push(format!("slots for {entries:?}"));
            }
            for x in 0..4 {
                for y in 0..4 {
                    let lhs = clifford_mul(&id.images[x], &id.images[y]).unwrap();
                    let (coeff, k) = quaternion_rule(x, y, &a, &b);
                    if lhs.terms != scaled(&id.images[k], &coeff) {
                        failures.push(format!("product ({x},{y}) for {entries:?}"));
                    }
                }
            }
        }
    }
    verdict(4, "rank-3 even Clifford algebras satisfy all 16 quaternion products", &failures);
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let n: i64 = rng.gen_range(-2000..=2000);
        let d: i64 = rng.gen_range(1..=50);
        if n != 0 {
            return rat_frac(n, d);
        }
    }
}

#[test]
fn criterion_5_hilbert_suite() {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    let places: Vec<Place> = ["inf", "2", "3", "5", "7", "11", "13", "17", "19", "23"]
        .iter()
        .map(|p| Place::parse(p).unwrap())
        .collect();
    let start = Instant::now();
    for _ in 0..HILBERT_PAIRS {
        let (a, b, b2) = (random_rational(&mut rng), random_rational(&mut rng), random_rational(&mut rng));
        let tag = format!("({},{})", format_rational(&a), format_rational(&b));
        let mut product = 1i8;
        for v in candidate_places(&a, &b, DEFAULT_FACTOR_BOUND).unwrap() {
            product *= hilbert_symbol(&a, &b, &v).unwrap();
        }
        if product != 1 {
            failures.push(format!("{tag}: product formula"));
        }
        for v in &places {
            let h = |x: &Rational, y: &Rational| hilbert_symbol(x, y, v).unwrap();
            if h(&a, &(&b * &b2)) != h(&a, &b) * h(&a, &b2) {
                failures.push(format!("{tag} at {v}: bimultiplicativity"));
            }
            if h(&a, &b) != h(&b, &a) {
                failures.push(format!("{tag} at {v}: symmetry"));
            }
            if h(&a, &-&a) != 1 {
                failures.push(format!("{tag} at {v}: (a,-a)"));
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= HILBERT_RUNTIME {
        failures.push(format!("took {elapsed:?}"));
    }
    verdict(5, &format!("Hilbert symbol identities on {HILBERT_PAIRS} pairs"), &failures);
}

#[test]
fn criterion_6_orbit_sums() {
    let mut failures = Vec::new();
    for d in 1..=6 {
        for (name, gens) in [("cyclic", cyclic_generator(d)), ("symmetric", symmetric_generators(d))] {
            let o = even_weight_orbits(d, &gens).unwrap();
            let total: usize = o.sizes().iter().sum();
            if total != 1 << (d - 1) {
                failures.push(format!("d={d} {name}: sum {total}"));
            }
            // each even-weight vector lies in exactly one orbit: count them directly
            let even = (0u32..(1 << d)).filter(|v| v.count_ones() % 2 == 0).count();
            if even != total {
                failures.push(format!("d={d} {name}: {even} even vectors"));
            }
        }
    }
    verdict(6, "orbit sizes sum to 2^(d-1) for d = 1..6", &failures);
}

#[test]
fn criterion_7_parity_of_degree() {
    let mut failures = Vec::new();
    let (f2, g2) = family_form(&rat(2), &rat(1), &rat(1)).unwrap();
    let r2 = ks_report(&f2, &g2).unwrap();
    let ram2 = r2.ramification.clone().unwrap_or_default();
    if !ram2.contains(&json!("inf")) {
        failures.push(format!("d=2: ramification {ram2:?} misses infinity"));
    }
    let cubic = FieldDescriptor::simplest_cubic();
    match search_rank3_form(&cubic, 2) {
        None => failures.push("d=3: no form found".into()),
        Some(g3) => {
            let r3 = ks_report(&cubic, &g3).unwrap();
            match &r3.cores_symbol_route {
                None => failures.push("d=3: symbol route unavailable".into()),
                Some(route) => {
                    if route.ramification.contains(&json!("inf")) {
                        failures.push(format!("d=3: ramification {:?} contains infinity", route.ramification));
                    }
                    // oracle: the corestricted slots are not both negative
                    let inner = route.corestriction.trim_start_matches('(').trim_end_matches(")/Q");
                    let slots: Vec<Rational> = inner
                        .split(',')
                        .map(|s| kuga_satake::exactfield::parse_rational(s).unwrap())
                        .collect();
                    if slots.iter().all(Signed::is_negative) {
                        failures.push("d=3: both slots negative".into());
                    }
                }
            }
            if r3.parity.as_ref().is_none_or(|p| !p.consistent) {
                failures.push(format!("d=3: parity {:?}", r3.parity));
            }
        }
    }
    verdict(7, "d = 2 definite, cyclic cubic indefinite", &failures);
}

#[test]
fn criterion_8_twisted_isomorphism() {
    let mut failures = Vec::new();
    let (f, g) = family_form(&rat(2), &rat(1), &rat(1)).unwrap();
    let diag = g.diagonalize().unwrap();
    if !verify_twisted_iso(&diag, &f).unwrap() {
        failures.push("isomorphism rejected on the family form".into());
    }
    let c0 = CliffordAlgebra::new(&f, diag.entries.clone()).unwrap().even_part();
    let mut corrupted = build_zg(&c0, &f).unwrap();
    let entry = corrupted.action_mut(1).cols[5].values_mut().next().unwrap();
    *entry += Rational::one();
    if verify_twisted_iso_with(&corrupted, &diag, &f).unwrap() {
        failures.push("corrupted action accepted".into());
    }
    verdict(8, "Z_G(C0(Q)) matches the tensor of conjugate even Clifford algebras", &failures);
}
