//! Acceptance suite: one test per engine-level guarantee, each printing a
//! single `acceptance <n> <slug>: pass` line when it holds.
//!
//! The guarantees cover catalog integrity, torsion certification, the
//! Laplacian coefficient table, flow and coflow parameters, the full
//! curvature and Ricci tables, soliton constants, the warm-up fixtures and
//! the randomized algebraic property suites.

use std::collections::BTreeMap;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use g2flow::curvature::{
    coflow_ricci_ratio_check, flat_limit_check, levi_civita, ricci, riemann, riemann_component,
    LimitDirection,
};
use g2flow::exterior::{EpsilonTable, Form, MultiIndex};
use g2flow::flow::{
    coflow_residual, correspondence_identity_holds, flow_residual, flow_to_coflow,
    heisenberg_coflow_example, lemma13_checks, nilpotent_flow_example, solve_flow_parameters,
    soliton_check, SolitonType,
};
use g2flow::g2ops::{
    canonical_phi, classify_torsion, laplacian, laplacian_coefficients_closed_form,
    lcp_conditions, G2Structure, TorsionClass,
};
use g2flow::liealg::{
    d_from_table, find_algebra, load_catalog, AlgebraSpec, FrameScaling, ScaledAlgebra,
};
use g2flow::scalar::{rat, rat_int, Rational, RingContext, Scalar};

const CP_NAMES: [&str; 7] = ["cp1", "cp2", "cp3", "cp4", "cp5", "cp6", "cp7"];

fn catalog() -> Vec<AlgebraSpec> {
    load_catalog().expect("bundled catalog loads")
}

fn spec(name: &str) -> AlgebraSpec {
    find_algebra(&catalog(), name).expect("algebra exists").clone()
}

fn mi(indices: &[u8]) -> MultiIndex {
    MultiIndex::new(indices).expect("valid index")
}

/// Catalog algebra equipped with its exact flow scaling.
fn flow_algebra(name: &str) -> ScaledAlgebra {
    let spec = spec(name);
    let sol = solve_flow_parameters(&spec).expect("flow solves");
    ScaledAlgebra::new(spec, sol.scaling())
}

/// The seven coefficient-pattern triples of the canonical three-form.
fn pattern_triples() -> [MultiIndex; 7] {
    [
        mi(&[1, 2, 7]),
        mi(&[3, 4, 7]),
        mi(&[5, 6, 7]),
        mi(&[1, 3, 5]),
        mi(&[1, 4, 6]),
        mi(&[2, 3, 6]),
        mi(&[2, 4, 5]),
    ]
}

fn passed(number: u8, slug: &str) {
    println!("acceptance {number} {slug}: pass");
}

#[test]
fn criterion_01_catalog_integrity() {
    let catalog = catalog();
    assert_eq!(catalog.len(), 10, "seven solvable + abelian + two fixtures");
    for spec in &catalog {
        if spec.is_numeric_only() {
            continue;
        }
        let algebra = ScaledAlgebra::unit(spec.clone(), RingContext::constant());
        for i in 1..=7u8 {
            let xi =
                Form::from_terms(1, vec![(mi(&[i]), Scalar::one(algebra.context()))]).unwrap();
            let ddxi = algebra.exterior_d(&algebra.exterior_d(&xi).unwrap()).unwrap();
            assert!(ddxi.is_zero(), "{} d^2 x^{i}", spec.name());
        }
    }
    // The numeric-only algebra closes up to floating-point error.
    let h7 = ScaledAlgebra::unit(spec("h7"), RingContext::constant());
    let table = h7.d_one_forms_numeric(&rat_int(1), &rat_int(0)).unwrap();
    for i in 1..=7u8 {
        let xi = Form::from_terms(1, vec![(mi(&[i]), 1.0)]).unwrap();
        let ddxi = d_from_table(&table, &d_from_table(&table, &xi));
        let sup = ddxi.terms().map(|(_, c)| c.abs()).fold(0.0f64, f64::max);
        assert!(sup < 1e-12, "h7 d^2 x^{i} residual {sup}");
    }
    passed(1, "catalog-integrity");
}

/// Asserts that the structure is LCP with Lee form `coeff x^7`.
fn assert_lee_form(structure: &G2Structure, coeff: &Scalar, label: &str) {
    match classify_torsion(structure).expect("classification runs") {
        TorsionClass::Lcp { tau } => {
            let mut expected: Form<Scalar> = Form::zero(1);
            expected.accumulate(mi(&[7]), coeff.clone());
            assert_eq!(tau, expected, "{label} lee form");
        }
        other => panic!("{label}: torsion class {other}, expected lcp"),
    }
}

#[test]
fn criterion_02_lcp_certification() {
    for name in CP_NAMES {
        let spec = spec(name);
        // Unit scaling: constant Lee form m x^7.
        let unit_ctx = RingContext::constant();
        let unit = G2Structure::canonical(ScaledAlgebra::unit(spec.clone(), unit_ctx.clone()));
        assert_lee_form(
            &unit,
            &Scalar::term(&unit_ctx, rat_int(1), 1, rat_int(0)),
            &format!("{name} unit"),
        );
        // Along the flow and coflow solutions, symbolically in t.
        let sol = solve_flow_parameters(&spec).expect("flow solves");
        let flow_scaling = sol.scaling();
        let flow_ctx = flow_scaling.context().clone();
        let on_flow = G2Structure::canonical(ScaledAlgebra::new(spec.clone(), flow_scaling));
        assert_lee_form(
            &on_flow,
            &Scalar::term(&flow_ctx, rat_int(1), 1, rat(-1, 2)),
            &format!("{name} flow"),
        );
        let co = flow_to_coflow(&sol).expect("correspondence applies");
        let co_scaling = co.scaling();
        let co_ctx = co_scaling.context().clone();
        let on_coflow = G2Structure::canonical(ScaledAlgebra::new(spec, co_scaling));
        assert_lee_form(
            &on_coflow,
            &Scalar::term(&co_ctx, rat_int(1), 1, rat(-1, 2)),
            &format!("{name} coflow"),
        );
    }
    passed(2, "lcp-certification");
}

#[test]
fn criterion_03_lcp_condition_sets() {
    let expected: [(&str, Vec<Vec<(u8, u8)>>); 7] = [
        ("cp1", vec![]),
        ("cp2", vec![vec![(1, 7), (3, 6)]]),
        ("cp3", vec![vec![(1, 7), (3, 6), (4, 5)]]),
        ("cp4", vec![vec![(1, 7), (3, 6), (4, 5)], vec![(2, 7), (4, 6)]]),
        ("cp5", vec![vec![(1, 7), (4, 5)], vec![(2, 7), (4, 6)]]),
        (
            "cp6",
            vec![vec![(1, 7), (3, 6), (4, 5)], vec![(2, 7), (3, 5), (4, 6)]],
        ),
        (
            "cp7",
            vec![vec![(1, 7), (3, 6)], vec![(2, 3), (5, 7)], vec![(2, 6), (4, 7)]],
        ),
    ];
    for (name, classes) in expected {
        let derived = lcp_conditions(&spec(name)).expect("conditions derive");
        let mut derived_sets: Vec<Vec<(u8, u8)>> = derived
            .iter()
            .map(|c| {
                let mut pairs = c.pairs().to_vec();
                pairs.sort();
                pairs
            })
            .collect();
        derived_sets.sort();
        let mut expected_sets = classes;
        for set in &mut expected_sets {
            set.sort();
        }
        expected_sets.sort();
        assert_eq!(derived_sets, expected_sets, "{name} condition classes");
    }
    passed(3, "lcp-condition-sets");
}

#[test]
fn criterion_04_laplacian_double_path() {
    let eps = EpsilonTable::new();
    for name in CP_NAMES {
        let spec = spec(name);
        let sol = solve_flow_parameters(&spec).expect("flow solves");
        let scaling = sol.scaling();
        let ctx = scaling.context().clone();
        let beta7 = scaling.exponents()[6].clone();
        let algebra = ScaledAlgebra::new(spec.clone(), scaling);
        let generic = laplacian(&algebra, &canonical_phi(&ctx)).unwrap();
        let table = laplacian_coefficients_closed_form(&spec, &ctx).unwrap();
        let inv_f7_sq = Scalar::term(&ctx, rat_int(1), 0, -rat(2, 1) * &beta7);
        for (idx, ratio_m2) in &table {
            let sign = eps.eps3(idx).expect("pattern triple");
            let expected = ratio_m2.mul(&inv_f7_sq).scale(&rat_int(i64::from(sign)));
            let actual = generic.coeff(idx).cloned().unwrap_or_else(|| Scalar::zero(&ctx));
            assert_eq!(actual, expected, "{name} coefficient at {idx}");
        }
        for idx in MultiIndex::all_of_degree(3) {
            if eps.eps3(&idx).is_none() {
                assert!(generic.coeff(&idx).is_none(), "{name} spurious term at {idx}");
            }
        }
    }
    passed(4, "laplacian-double-path");
}

#[test]
fn criterion_05_flow_parameters() {
    let expected: [(&str, (i64, i64), [(i64, i64); 7]); 7] = [
        ("cp1", (4, 1), [(3, 4), (3, 4), (3, 4), (3, 4), (3, 4), (3, 4), (1, 2)]),
        ("cp2", (10, 3), [(9, 10), (4, 5), (7, 10), (4, 5), (4, 5), (7, 10), (1, 2)]),
        ("cp3", (3, 1), [(1, 1), (5, 6), (3, 4), (3, 4), (3, 4), (3, 4), (1, 2)]),
        ("cp4", (14, 5), [(1, 1), (13, 14), (11, 14), (5, 7), (11, 14), (5, 7), (1, 2)]),
        ("cp5", (3, 1), [(11, 12), (11, 12), (5, 6), (2, 3), (3, 4), (3, 4), (1, 2)]),
        ("cp6", (8, 3), [(1, 1), (1, 1), (3, 4), (3, 4), (3, 4), (3, 4), (1, 2)]),
        ("cp7", (14, 5), [(13, 14), (5, 7), (5, 7), (13, 14), (13, 14), (5, 7), (1, 2)]),
    ];
    for (name, alpha, beta) in expected {
        let spec = spec(name);
        let sol = solve_flow_parameters(&spec).expect("flow solves");
        assert_eq!(sol.alpha, rat(alpha.0, alpha.1), "{name} alpha");
        for i in 0..7 {
            assert_eq!(sol.beta[i], rat(beta[i].0, beta[i].1), "{name} beta_{}", i + 1);
        }
        let residual = flow_residual(&spec, &sol).expect("residual computes");
        assert!(residual.is_zero(), "{name} flow residual");
    }
    passed(5, "flow-parameters");
}

#[test]
fn criterion_06_first_algebra_einstein_curvature() {
    let algebra = flow_algebra("cp1");
    let ctx = algebra.context().clone();
    let tensor = riemann(&algebra).expect("curvature computes");
    let minus_unit = Scalar::term(&ctx, rat_int(-1), 2, rat_int(-1));
    for i in 1..=7u8 {
        for j in (i + 1)..=7u8 {
            assert_eq!(tensor.get(i, j, j, i), minus_unit, "R_{i}{j}{j}{i}");
        }
    }
    let data = ricci(&algebra).expect("ricci computes");
    let einstein = Scalar::term(&ctx, rat_int(-6), 2, rat_int(-1));
    for i in 0..7 {
        for j in 0..7 {
            if i == j {
                assert_eq!(data.ric[i][i], einstein, "Ric_{}{}", i + 1, i + 1);
            } else {
                assert!(data.ric[i][j].is_zero(), "Ric_{}{}", i + 1, j + 1);
            }
        }
    }
    assert_eq!(data.einstein_constant, Some(einstein));
    assert!(flat_limit_check(&tensor, LimitDirection::MinusInfinity));
    passed(6, "first-algebra-einstein-curvature");
}

/// `(i, j, k, l, num, den)`: `R_ijkl = (num/den) C` in canonical order.
type Entry = (u8, u8, u8, u8, i64, i64);

/// Asserts the complete canonical nonzero entry set of the curvature
/// tensor: every expected entry with its multiple of `C = c m^2 u^{-1}`,
/// and nothing else.
fn assert_curvature_table(name: &str, c: (i64, i64), expected: &[Entry]) {
    let algebra = flow_algebra(name);
    let ctx = algebra.context().clone();
    let tensor = riemann(&algebra).expect("curvature computes");
    let unit = Scalar::term(&ctx, rat(c.0, c.1), 2, rat_int(-1));
    let mut want: BTreeMap<(u8, u8, u8, u8), Scalar> = BTreeMap::new();
    for &(i, j, k, l, num, den) in expected {
        want.insert((i, j, k, l), unit.scale(&rat(num, den)));
    }
    let got: BTreeMap<(u8, u8, u8, u8), Scalar> = tensor
        .nonzero_entries()
        .map(|(key, value)| (*key, value.clone()))
        .collect();
    assert_eq!(got.len(), want.len(), "{name} entry count");
    for (key, value) in &want {
        assert_eq!(got.get(key), Some(value), "{name} R_{key:?}");
    }
}

#[test]
fn criterion_07_appendix_curvature_tables() {
    assert_curvature_table(
        "cp2",
        (-1, 3),
        &[
            (1, 2, 1, 2, -4, 1),
            (1, 3, 1, 3, -7, 3),
            (1, 3, 6, 7, -2, 3),
            (1, 4, 1, 4, -4, 1),
            (1, 5, 1, 5, -4, 1),
            (1, 6, 1, 6, -7, 3),
            (1, 6, 3, 7, 2, 3),
            (1, 7, 1, 7, -16, 3),
            (1, 7, 3, 6, 4, 3),
            (2, 3, 2, 3, -2, 1),
            (2, 4, 2, 4, -3, 1),
            (2, 5, 2, 5, -3, 1),
            (2, 6, 2, 6, -2, 1),
            (2, 7, 2, 7, -3, 1),
            (3, 4, 3, 4, -2, 1),
            (3, 5, 3, 5, -2, 1),
            (3, 6, 3, 6, -7, 3),
            (3, 7, 3, 7, -4, 3),
            (4, 5, 4, 5, -3, 1),
            (4, 6, 4, 6, -2, 1),
            (4, 7, 4, 7, -3, 1),
            (5, 6, 5, 6, -2, 1),
            (5, 7, 5, 7, -3, 1),
            (6, 7, 6, 7, -4, 3),
        ],
    );
    assert_curvature_table(
        "cp3",
        (-1, 4),
        &[
            (1, 2, 1, 2, -6, 1),
            (1, 3, 1, 3, -17, 4),
            (1, 3, 6, 7, -3, 4),
            (1, 4, 1, 4, -17, 4),
            (1, 4, 5, 7, -3, 4),
            (1, 5, 1, 5, -17, 4),
            (1, 5, 4, 7, 3, 4),
            (1, 6, 1, 6, -17, 4),
            (1, 6, 3, 7, 3, 4),
            (1, 7, 1, 7, -9, 1),
            (1, 7, 3, 6, 3, 2),
            (1, 7, 4, 5, 3, 2),
            (2, 3, 2, 3, -3, 1),
            (2, 4, 2, 4, -3, 1),
            (2, 5, 2, 5, -3, 1),
            (2, 6, 2, 6, -3, 1),
            (2, 7, 2, 7, -4, 1),
            (3, 4, 3, 4, -9, 4),
            (3, 4, 5, 6, 1, 4),
            (3, 5, 3, 5, -9, 4),
            (3, 5, 4, 6, -1, 4),
            (3, 6, 3, 6, -3, 1),
            (3, 6, 4, 5, -1, 2),
            (3, 7, 3, 7, -9, 4),
            (4, 5, 4, 5, -3, 1),
            (4, 6, 4, 6, -9, 4),
            (4, 7, 4, 7, -9, 4),
            (5, 6, 5, 6, -9, 4),
            (5, 7, 5, 7, -9, 4),
            (6, 7, 6, 7, -9, 4),
        ],
    );
    assert_curvature_table(
        "cp4",
        (-1, 5),
        &[
            (1, 2, 1, 2, -42, 5),
            (1, 2, 3, 4, 1, 5),
            (1, 2, 5, 6, 1, 5),
            (1, 3, 1, 3, -27, 5),
            (1, 3, 6, 7, -3, 5),
            (1, 4, 1, 4, -4, 1),
            (1, 4, 2, 3, -1, 5),
            (1, 4, 5, 7, -4, 5),
            (1, 5, 1, 5, -27, 5),
            (1, 5, 4, 7, 3, 5),
            (1, 6, 1, 6, -4, 1),
            (1, 6, 2, 5, -1, 5),
            (1, 6, 3, 7, 4, 5),
            (1, 7, 1, 7, -49, 5),
            (1, 7, 3, 6, 7, 5),
            (1, 7, 4, 5, 7, 5),
            (2, 3, 2, 3, -24, 5),
            (2, 4, 2, 4, -17, 5),
            (2, 4, 6, 7, 3, 5),
            (2, 5, 2, 5, -24, 5),
            (2, 6, 2, 6, -17, 5),
            (2, 6, 4, 7, -3, 5),
            (2, 7, 2, 7, -36, 5),
            (2, 7, 4, 6, -6, 5),
            (3, 4, 3, 4, -12, 5),
            (3, 4, 5, 6, 1, 5),
            (3, 5, 3, 5, -16, 5),
            (3, 5, 4, 6, -1, 5),
            (3, 6, 3, 6, -3, 1),
            (3, 6, 4, 5, -2, 5),
            (3, 7, 3, 7, -16, 5),
            (4, 5, 4, 5, -3, 1),
            (4, 6, 4, 6, -12, 5),
            (4, 7, 4, 7, -9, 5),
            (5, 6, 5, 6, -12, 5),
            (5, 7, 5, 7, -16, 5),
            (6, 7, 6, 7, -9, 5),
        ],
    );
    assert_curvature_table(
        "cp5",
        (-1, 4),
        &[
            (1, 2, 1, 2, -25, 4),
            (1, 2, 5, 6, 1, 4),
            (1, 3, 1, 3, -5, 1),
            (1, 4, 1, 4, -9, 4),
            (1, 4, 5, 7, -3, 4),
            (1, 5, 1, 5, -7, 2),
            (1, 5, 4, 7, 1, 2),
            (1, 6, 1, 6, -15, 4),
            (1, 6, 2, 5, -1, 4),
            (1, 7, 1, 7, -25, 4),
            (1, 7, 4, 5, 5, 4),
            (2, 3, 2, 3, -5, 1),
            (2, 4, 2, 4, -9, 4),
            (2, 4, 6, 7, 3, 4),
            (2, 5, 2, 5, -15, 4),
            (2, 6, 2, 6, -7, 2),
            (2, 6, 4, 7, -1, 2),
            (2, 7, 2, 7, -25, 4),
            (2, 7, 4, 6, -5, 4),
            (3, 4, 3, 4, -2, 1),
            (3, 5, 3, 5, -3, 1),
            (3, 6, 3, 6, -3, 1),
            (3, 7, 3, 7, -4, 1),
            (4, 5, 4, 5, -9, 4),
            (4, 6, 4, 6, -9, 4),
            (4, 7, 4, 7, -1, 1),
            (5, 6, 5, 6, -9, 4),
            (5, 7, 5, 7, -9, 4),
            (6, 7, 6, 7, -9, 4),
        ],
    );
    assert_curvature_table(
        "cp6",
        (-1, 3),
        &[
            (1, 2, 1, 2, -16, 3),
            (1, 2, 3, 4, 1, 6),
            (1, 2, 5, 6, 1, 6),
            (1, 3, 1, 3, -31, 12),
            (1, 3, 2, 4, 1, 12),
            (1, 3, 6, 7, -1, 3),
            (1, 4, 1, 4, -31, 12),
            (1, 4, 2, 3, -1, 12),
            (1, 4, 5, 7, -1, 3),
            (1, 5, 1, 5, -31, 12),
            (1, 5, 2, 6, 1, 12),
            (1, 5, 4, 7, 1, 3),
            (1, 6, 1, 6, -31, 12),
            (1, 6, 2, 5, -1, 12),
            (1, 6, 3, 7, 1, 3),
            (1, 7, 1, 7, -16, 3),
            (1, 7, 3, 6, 2, 3),
            (1, 7, 4, 5, 2, 3),
            (2, 3, 2, 3, -31, 12),
            (2, 3, 5, 7, -1, 3),
            (2, 4, 2, 4, -31, 12),
            (2, 4, 6, 7, 1, 3),
            (2, 5, 2, 5, -31, 12),
            (2, 5, 3, 7, 1, 3),
            (2, 6, 2, 6, -31, 12),
            (2, 6, 4, 7, -1, 3),
            (2, 7, 2, 7, -16, 3),
            (2, 7, 3, 5, 2, 3),
            (2, 7, 4, 6, -2, 3),
            (3, 4, 3, 4, -4, 3),
            (3, 4, 5, 6, 1, 6),
            (3, 5, 3, 5, -19, 12),
            (3, 5, 4, 6, 1, 12),
            (3, 6, 3, 6, -19, 12),
            (3, 6, 4, 5, -1, 12),
            (3, 7, 3, 7, -4, 3),
            (4, 5, 4, 5, -19, 12),
            (4, 6, 4, 6, -19, 12),
            (4, 7, 4, 7, -4, 3),
            (5, 6, 5, 6, -4, 3),
            (5, 7, 5, 7, -4, 3),
            (6, 7, 6, 7, -4, 3),
        ],
    );
    assert_curvature_table(
        "cp7",
        (-1, 5),
        &[
            (1, 2, 1, 2, -18, 5),
            (1, 2, 3, 4, -1, 5),
            (1, 2, 5, 6, -1, 5),
            (1, 3, 1, 3, -17, 5),
            (1, 3, 6, 7, -3, 5),
            (1, 4, 1, 4, -36, 5),
            (1, 4, 2, 3, 1, 5),
            (1, 5, 1, 5, -36, 5),
            (1, 5, 2, 6, -1, 5),
            (1, 6, 1, 6, -17, 5),
            (1, 6, 3, 7, 3, 5),
            (1, 7, 1, 7, -36, 5),
            (1, 7, 3, 6, 6, 5),
            (2, 3, 2, 3, -12, 5),
            (2, 3, 5, 7, 6, 5),
            (2, 4, 2, 4, -17, 5),
            (2, 4, 6, 7, 3, 5),
            (2, 5, 2, 5, -17, 5),
            (2, 5, 3, 7, 3, 5),
            (2, 6, 2, 6, -12, 5),
            (2, 6, 4, 7, 6, 5),
            (2, 7, 2, 7, -9, 5),
            (2, 7, 3, 5, -3, 5),
            (2, 7, 4, 6, 3, 5),
            (3, 4, 3, 4, -18, 5),
            (3, 4, 5, 6, -1, 5),
            (3, 5, 3, 5, -17, 5),
            (3, 6, 3, 6, -12, 5),
            (3, 6, 4, 5, 1, 5),
            (3, 7, 3, 7, -9, 5),
            (4, 5, 4, 5, -36, 5),
            (4, 6, 4, 6, -17, 5),
            (4, 7, 4, 7, -36, 5),
            (5, 6, 5, 6, -18, 5),
            (5, 7, 5, 7, -36, 5),
            (6, 7, 6, 7, -9, 5),
        ],
    );
    passed(7, "appendix-curvature-tables");
}

#[test]
fn criterion_08_ricci_diagonals() {
    let profiles: [(&str, (i64, i64), [i64; 7]); 7] = [
        ("cp1", (-6, 1), [1, 1, 1, 1, 1, 1, 1]),
        ("cp2", (-1, 3), [22, 17, 12, 17, 17, 12, 17]),
        ("cp3", (-1, 4), [32, 22, 17, 17, 17, 17, 22]),
        ("cp4", (-1, 5), [37, 32, 22, 17, 22, 17, 27]),
        ("cp5", (-1, 4), [27, 27, 22, 12, 17, 17, 22]),
        ("cp6", (-1, 3), [21, 21, 11, 11, 11, 11, 16]),
        ("cp7", (-1, 5), [32, 17, 17, 32, 32, 17, 27]),
    ];
    for (name, c, diag) in profiles {
        let algebra = flow_algebra(name);
        let ctx = algebra.context().clone();
        let data = ricci(&algebra).expect("ricci computes");
        let unit = Scalar::term(&ctx, rat(c.0, c.1), 2, rat_int(-1));
        for i in 0..7 {
            assert_eq!(
                data.ric[i][i],
                unit.scale(&rat_int(diag[i])),
                "{name} Ric_{}{}",
                i + 1,
                i + 1
            );
        }
        // Einstein detection passes only for the first algebra.
        assert_eq!(data.einstein_constant.is_some(), name == "cp1", "{name} einstein");
    }
    passed(8, "ricci-diagonals");
}

#[test]
fn criterion_09_soliton_constants() {
    let expected: [(&str, (i64, i64)); 7] = [
        ("cp1", (-6, 1)),
        ("cp2", (-5, 1)),
        ("cp3", (-9, 2)),
        ("cp4", (-21, 5)),
        ("cp5", (-9, 2)),
        ("cp6", (-4, 1)),
        ("cp7", (-21, 5)),
    ];
    for (name, ratio) in expected {
        let cert = soliton_check(&spec(name)).expect("soliton certifies");
        assert_eq!(cert.lambda_ratio, rat(ratio.0, ratio.1), "{name} lambda ratio");
        assert_eq!(cert.soliton_type, SolitonType::Shrinking, "{name} type");
    }
    passed(9, "soliton-constants");
}

#[test]
fn criterion_10_flow_coflow_correspondence() {
    let expected: [(&str, (i64, i64), [(i64, i64); 7]); 7] = [
        ("cp1", (-6, 1), [(1, 3), (1, 3), (1, 3), (1, 3), (1, 3), (1, 3), (1, 2)]),
        ("cp2", (-16, 3), [(1, 4), (5, 16), (3, 8), (5, 16), (5, 16), (3, 8), (1, 2)]),
        ("cp3", (-5, 1), [(1, 5), (3, 10), (7, 20), (7, 20), (7, 20), (7, 20), (1, 2)]),
        ("cp4", (-24, 5), [(5, 24), (1, 4), (1, 3), (3, 8), (1, 3), (3, 8), (1, 2)]),
        ("cp5", (-5, 1), [(1, 4), (1, 4), (3, 10), (2, 5), (7, 20), (7, 20), (1, 2)]),
        ("cp6", (-14, 3), [(3, 14), (3, 14), (5, 14), (5, 14), (5, 14), (5, 14), (1, 2)]),
        ("cp7", (-24, 5), [(1, 4), (3, 8), (3, 8), (1, 4), (1, 4), (3, 8), (1, 2)]),
    ];
    for (name, gamma, delta) in expected {
        let spec = spec(name);
        let sol = solve_flow_parameters(&spec).expect("flow solves");
        let co = flow_to_coflow(&sol).expect("correspondence applies");
        assert_eq!(co.gamma, rat(gamma.0, gamma.1), "{name} gamma");
        for i in 0..7 {
            assert_eq!(co.delta[i], rat(delta[i].0, delta[i].1), "{name} delta_{}", i + 1);
        }
        let residual = coflow_residual(&spec, &co).expect("residual computes");
        assert!(residual.is_zero(), "{name} coflow residual");
        assert!(correspondence_identity_holds(&sol, &co), "{name} identity");
    }
    // Spot-check the resulting coefficient functions on the first algebra:
    // phi components scale as u^{7/6} on triples containing x^7 and as u^1
    // on the purely nilpotent triples, with base u = 1 + 6 m^2 t.
    let sol = solve_flow_parameters(&spec("cp1")).expect("flow solves");
    let co = flow_to_coflow(&sol).expect("correspondence applies");
    assert_eq!(co.gamma, rat_int(-6));
    let scaling = co.scaling();
    for triple in pattern_triples() {
        let expected = if triple.indices().contains(&7) { rat(7, 6) } else { rat_int(1) };
        assert_eq!(scaling.exponent_sum(&triple), expected, "cp1 exponent at {triple}");
    }
    passed(10, "flow-coflow-correspondence");
}

#[test]
fn criterion_11_coflow_ricci_ratio() {
    for name in CP_NAMES {
        let spec = spec(name);
        assert_eq!(coflow_ricci_ratio_check(&spec).ok(), Some(true), "{name} ratio");
        // Einstein on the coflow side only for the first algebra.
        let sol = solve_flow_parameters(&spec).expect("flow solves");
        let co = flow_to_coflow(&sol).expect("correspondence applies");
        let algebra = ScaledAlgebra::new(spec, co.scaling());
        let data = ricci(&algebra).expect("ricci computes");
        assert_eq!(data.einstein_constant.is_some(), name == "cp1", "{name} einstein");
    }
    passed(11, "coflow-ricci-ratio");
}

#[test]
fn criterion_12_warm_up_fixtures() {
    let n2 = nilpotent_flow_example(&spec("n2")).expect("fixture runs");
    assert!(n2.closed, "n2 closedness");
    assert!(n2.flow_equation_exact, "n2 flow equation");
    assert!(n2.laplacian_matches_expected, "n2 laplacian");
    assert!(n2.pass, "n2 overall");
    let times = [rat_int(-2), rat(-1, 2), rat_int(0), rat(1, 4), rat(1, 2)];
    let h7 = heisenberg_coflow_example(&spec("h7"), &times).expect("fixture runs");
    assert_eq!(h7.residuals.len(), 5);
    assert!(h7.max_residual < 1e-9, "h7 residual {}", h7.max_residual);
    assert!(h7.pass, "h7 overall");
    passed(12, "warm-up-fixtures");
}

/// Random small rational with moderate numerators and denominators.
fn arb_rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

/// Random u-exponent with denominators up to 4.
fn arb_u_pow() -> impl Strategy<Value = Rational> {
    (-8i64..=8, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

/// Random ring element with up to four terms.
fn arb_scalar(ctx: RingContext) -> impl Strategy<Value = Scalar> {
    proptest::collection::vec((arb_rational(), -3i64..=3, arb_u_pow()), 0..4).prop_map(
        move |terms| {
            let mut acc = Scalar::zero(&ctx);
            for (c, p, q) in terms {
                acc = acc.add(&Scalar::term(&ctx, c, p, q));
            }
            acc
        },
    )
}

/// Random form of the given degree with small integer coefficients.
fn arb_form(degree: usize) -> impl Strategy<Value = Form<f64>> {
    let all = MultiIndex::all_of_degree(degree);
    let n = all.len();
    proptest::collection::vec(((0..n).prop_map(move |i| all[i]), -9i32..=9), 0..5).prop_map(
        move |terms| {
            let mut acc = Form::zero(degree);
            for (idx, c) in terms {
                acc.accumulate(idx, f64::from(c));
            }
            acc
        },
    )
}

#[test]
fn criterion_13_property_suites() {
    let cases = Config::with_cases(1000);
    let ctx = RingContext::graded(rat(-10, 3));

    // Ring axioms and the Leibniz rule, 1000 randomized cases each.
    TestRunner::new(cases.clone())
        .run(
            &(arb_scalar(ctx.clone()), arb_scalar(ctx.clone()), arb_scalar(ctx.clone())),
            |(a, b, c)| {
                prop_assert_eq!(a.add(&b), b.add(&a));
                prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
                prop_assert!(a.sub(&a).is_zero());
                prop_assert_eq!(a.mul(&b), b.mul(&a));
                prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
                prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
                Ok(())
            },
        )
        .expect("ring axioms hold");
    TestRunner::new(cases.clone())
        .run(&(arb_scalar(ctx.clone()), arb_scalar(ctx.clone())), |(a, b)| {
            prop_assert_eq!(a.add(&b).ddt(), a.ddt().add(&b.ddt()));
            prop_assert_eq!(a.mul(&b).ddt(), a.ddt().mul(&b).add(&a.mul(&b.ddt())));
            Ok(())
        })
        .expect("leibniz rule holds");

    // Hodge star involution and the interior-product antiderivation law,
    // 1000 randomized cases each.
    TestRunner::new(cases.clone())
        .run(&arb_form(3), |a| {
            prop_assert_eq!(a.hodge_star().hodge_star(), a);
            Ok(())
        })
        .expect("star involution holds");
    TestRunner::new(cases)
        .run(&(1u8..=7, arb_form(2), arb_form(3)), |(v, a, b)| {
            // i_v(a ^ b) = (i_v a) ^ b + a ^ (i_v b) since deg a is even.
            let lhs = a.wedge(&b).unwrap().interior(v).unwrap();
            let rhs = a
                .interior(v)
                .unwrap()
                .wedge(&b)
                .unwrap()
                .add(&a.wedge(&b.interior(v).unwrap()).unwrap());
            prop_assert_eq!(lhs, rhs);
            Ok(())
        })
        .expect("interior antiderivation holds");

    // Riemann symmetries and the first Bianchi identity on every exact
    // catalog algebra at a realistic scaling.
    let mut algebras: Vec<(String, ScaledAlgebra)> = CP_NAMES
        .iter()
        .map(|name| (name.to_string(), flow_algebra(name)))
        .collect();
    algebras.push((
        "abelian".to_string(),
        ScaledAlgebra::unit(spec("abelian"), RingContext::constant()),
    ));
    let n2_beta: [Rational; 7] = [
        rat(1, 5),
        rat(1, 5),
        rat(1, 5),
        rat(-1, 10),
        rat(-1, 10),
        rat(-1, 10),
        rat(-1, 10),
    ];
    algebras.push((
        "n2".to_string(),
        ScaledAlgebra::new(
            spec("n2"),
            FrameScaling::new(RingContext::ungraded(rat(10, 3)), n2_beta),
        ),
    ));
    for (name, algebra) in &algebras {
        let conn = levi_civita(algebra).expect("connection computes");
        let brackets = algebra.x_structure_constants().expect("exact brackets");
        let mut raw: BTreeMap<(u8, u8, u8, u8), Scalar> = BTreeMap::new();
        for i in 1..=7u8 {
            for j in 1..=7u8 {
                for k in 1..=7u8 {
                    for l in 1..=7u8 {
                        raw.insert((i, j, k, l), riemann_component(&conn, &brackets, i, j, k, l));
                    }
                }
            }
        }
        let get = |i: u8, j: u8, k: u8, l: u8| raw.get(&(i, j, k, l)).unwrap().clone();
        for i in 1..=7u8 {
            for j in i..=7u8 {
                for k in 1..=7u8 {
                    for l in 1..=7u8 {
                        let r = get(i, j, k, l);
                        assert_eq!(r, get(j, i, k, l).neg(), "{name} antisym 12");
                        assert_eq!(r, get(i, j, l, k).neg(), "{name} antisym 34");
                        assert_eq!(r, get(k, l, i, j), "{name} pair exchange");
                        let bianchi = r.add(&get(j, k, i, l)).add(&get(k, i, j, l));
                        assert!(bianchi.is_zero(), "{name} bianchi at {i}{j}{k}{l}");
                    }
                }
            }
        }
    }

    // Coefficient-ratio closure properties on every flow solution.
    for name in CP_NAMES {
        let spec = spec(name);
        let sol = solve_flow_parameters(&spec).expect("flow solves");
        let report = lemma13_checks(&spec, &sol).expect("checks run");
        assert!(report.all_pass, "{name} lemma checks");
    }
    passed(13, "property-suites");
}
