//! Tests driven by the data files in `fixtures/`.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use clogic::basis::Basis;
use clogic::enumerate::census;
use clogic::experiment::Histogram;
use clogic::series::{grammar_coeffs, r0_stream, sum_densities, GrammarData};

fn fixture(name: &str) -> String {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("reading {path}: {e}"))
}

#[test]
fn reference_histogram_round_trips_byte_identically() {
    let text = fixture("reference_histogram.csv");
    let h = Histogram::from_csv(&text).unwrap();
    assert_eq!(h.to_csv(), text);
    // the run behind this histogram drew 1200 samples, 176 unnormalised
    assert_eq!(h.total(), 1200);
    assert_eq!(h.fuel_exhausted(), 176);
    assert_eq!(h.count(1), 110);
    assert_eq!(h.count(868), 1);
    let fraction = h.normalized() as f64 / h.total() as f64;
    assert!((fraction - 1024.0 / 1200.0).abs() < 1e-12);
}

#[test]
fn r1_grammar_fixture_matches_census() {
    let g = GrammarData::from_json(&fixture("r1_grammar.json")).unwrap();
    assert_eq!(g.n, 1);
    let r1 = grammar_coeffs(&g, &[r0_stream(8)], 8).unwrap();
    let b = Basis::sk();
    for n in 0..=6u64 {
        let res = census(&b, n, 200, None, false);
        assert_eq!(
            BigInt::from(res.bucket(1).to_u64().unwrap()),
            r1.coeff(n as usize).clone(),
            "n = {n}"
        );
    }
}

#[test]
fn r1_grammar_fixture_extends_to_known_column() {
    let g = GrammarData::from_json(&fixture("r1_grammar.json")).unwrap();
    let r1 = grammar_coeffs(&g, &[r0_stream(10)], 10).unwrap();
    let want = [
        0i64, 0, 4, 32, 200, 1152, 6528, 37184, 215328, 1275520, 7753472,
    ];
    for (n, &w) in want.iter().enumerate() {
        assert_eq!(r1.coeff(n), &BigInt::from(w), "n = {n}");
    }
}

#[test]
fn density_fixture_is_internally_consistent() {
    let file: serde_json::Value = serde_json::from_str(&fixture("densities.json")).unwrap();
    let densities: Vec<f64> = (1..=7)
        .map(|m| file["densities"][m.to_string()].as_f64().unwrap())
        .collect();
    assert!((sum_densities(&densities) - 0.34010402598726164).abs() < 1e-12);
    // reference constant for m = 1 is consistent with the m = 1 density
    let c1 = file["c_tilde"]["1"].as_f64().unwrap();
    assert!((clogic::series::density_from_constant(c1) - densities[0]).abs() < 1e-6);
}
