//! Tests for the Levi-Civita connection and curvature of the flow metrics:
//! tensor symmetries from raw components, the exactly known first-algebra
//! curvature, frozen Riemann tables for the other six algebras, Ricci
//! diagonals, flat limits, and the flow/coflow Ricci ratio.

use std::collections::BTreeMap;

use g2flow::curvature::{
    coflow_ricci_ratio_check, flat_limit_check, levi_civita, ricci, riemann, riemann_component,
    LimitDirection,
};
use g2flow::flow::{flow_to_coflow, solve_flow_parameters};
use g2flow::liealg::{find_algebra, load_catalog, AlgebraSpec, FrameScaling, ScaledAlgebra};
use g2flow::scalar::{rat, rat_int, RingContext, Scalar};

fn catalog() -> Vec<AlgebraSpec> {
    load_catalog().expect("bundled catalog loads")
}

fn spec(name: &str) -> AlgebraSpec {
    find_algebra(&catalog(), name).expect("algebra exists").clone()
}

/// Catalog algebra equipped with its exact flow scaling.
fn flow_algebra(name: &str) -> ScaledAlgebra {
    let spec = spec(name);
    let sol = solve_flow_parameters(&spec).expect("flow solves");
    ScaledAlgebra::new(spec, sol.scaling())
}

const CP_NAMES: [&str; 7] = ["cp1", "cp2", "cp3", "cp4", "cp5", "cp6", "cp7"];

/// `(i, j, k, l, num, den)`: `R_ijkl = (num/den) · C` in canonical index
/// order `i<j`, `k<l`, `(i,j) <= (k,l)`.
type Entry = (u8, u8, u8, u8, i64, i64);

/// Asserts that the full canonical nonzero entry set of the Riemann tensor
/// equals `expected`, with every value the stated multiple of
/// `C = c · m² u^{-1}`.
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
fn first_algebra_has_constant_sectional_curvature_entries() {
    // R_ijij = m^2 u^{-1} for every coordinate plane, nothing else.
    let algebra = flow_algebra("cp1");
    let ctx = algebra.context().clone();
    let tensor = riemann(&algebra).unwrap();
    let expected = Scalar::term(&ctx, rat_int(1), 2, rat_int(-1));
    let mut count = 0;
    for ((i, j, k, l), value) in tensor.nonzero_entries() {
        assert_eq!((i, j), (k, l), "only plane diagonals");
        assert_eq!(value, &expected, "R_{i}{j}{k}{l}");
        count += 1;
    }
    assert_eq!(count, 21);
    // Equivalent convention check: R(x_1, x_2, x_2, x_1) = -m^2 u^{-1}.
    assert_eq!(tensor.get(1, 2, 2, 1), expected.neg());
}

#[test]
fn first_algebra_connection_curves_into_the_extension_direction() {
    // nabla_{x_1} x_1 = -m u^{-1/2} x_7 under the flow scaling.
    let algebra = flow_algebra("cp1");
    let ctx = algebra.context().clone();
    let conn = levi_civita(&algebra).unwrap();
    assert_eq!(
        conn.christoffel(1, 1, 7),
        Scalar::term(&ctx, rat_int(-1), 1, rat(-1, 2))
    );
    assert_eq!(
        conn.christoffel(1, 7, 1),
        Scalar::term(&ctx, rat_int(1), 1, rat(-1, 2))
    );
    assert!(conn.christoffel(1, 1, 1).is_zero());
    assert!(conn.christoffel(7, 1, 1).is_zero());
}

#[test]
fn raw_components_satisfy_all_tensor_symmetries() {
    // Antisymmetry in both pairs, pair exchange, the first Bianchi identity
    // and torsion-freeness, from raw (uncanonicalized) components, on every
    // exact catalog algebra at a realistic scaling.
    let mut algebras: Vec<(String, ScaledAlgebra)> = CP_NAMES
        .iter()
        .map(|name| (name.to_string(), flow_algebra(name)))
        .collect();
    algebras.push((
        "abelian".to_string(),
        ScaledAlgebra::unit(spec("abelian"), RingContext::constant()),
    ));
    // The nilpotent fixture with its adapted warm-up scaling.
    let n2_ctx = RingContext::ungraded(rat(10, 3));
    let n2_beta = [
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
        ScaledAlgebra::new(spec("n2"), FrameScaling::new(n2_ctx, n2_beta)),
    ));
    for (name, algebra) in &algebras {
        let conn = levi_civita(algebra).unwrap();
        let brackets = algebra.x_structure_constants().unwrap();
        let tensor = riemann(algebra).unwrap();
        // Compute each raw component once.
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
                        assert_eq!(r, get(j, i, k, l).neg(), "{name} antisym 12 at {i}{j}{k}{l}");
                        assert_eq!(r, get(i, j, l, k).neg(), "{name} antisym 34 at {i}{j}{k}{l}");
                        assert_eq!(r, get(k, l, i, j), "{name} pair exchange at {i}{j}{k}{l}");
                        let bianchi = r.add(&get(j, k, i, l)).add(&get(k, i, j, l));
                        assert!(bianchi.is_zero(), "{name} Bianchi at {i}{j}{k}{l}");
                        // Canonicalized storage returns the same component.
                        assert_eq!(tensor.get(i, j, k, l), r, "{name} storage at {i}{j}{k}{l}");
                    }
                }
            }
        }
        // Torsion-freeness of the connection.
        for i in 1..=7u8 {
            for j in 1..=7u8 {
                for k in 1..=7u8 {
                    let torsion = conn
                        .christoffel(i, j, k)
                        .sub(&conn.christoffel(j, i, k))
                        .sub(&brackets.coeff(k, i, j));
                    assert!(torsion.is_zero(), "{name} torsion at {i}{j}{k}");
                }
            }
        }
    }
}

#[test]
fn ricci_diagonals_match_the_frozen_einstein_like_profiles() {
    // Ric = C · diag(n_1, ..., n_7) with C a negative multiple of m^2 u^{-1}.
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
        let data = ricci(&algebra).unwrap();
        let unit = Scalar::term(&ctx, rat(c.0, c.1), 2, rat_int(-1));
        for i in 0..7 {
            for j in 0..7 {
                if i == j {
                    let expected = unit.scale(&rat_int(diag[i]));
                    assert_eq!(data.ric[i][i], expected, "{name} Ric_{}{}", i + 1, i + 1);
                } else {
                    assert!(data.ric[i][j].is_zero(), "{name} Ric_{}{}", i + 1, j + 1);
                }
            }
        }
    }
}

#[test]
fn only_the_first_algebra_is_einstein() {
    for name in CP_NAMES {
        let algebra = flow_algebra(name);
        let data = ricci(&algebra).unwrap();
        if name == "cp1" {
            let ctx = algebra.context().clone();
            let expected = Scalar::term(&ctx, rat_int(-6), 2, rat_int(-1));
            assert_eq!(data.einstein_constant, Some(expected));
        } else {
            assert_eq!(data.einstein_constant, None, "{name}");
        }
    }
    // The flat abelian structure is trivially Einstein with constant zero.
    let abelian = ScaledAlgebra::unit(spec("abelian"), RingContext::constant());
    let data = ricci(&abelian).unwrap();
    assert_eq!(data.einstein_constant, Some(Scalar::zero(&RingContext::constant())));
}

#[test]
fn first_algebra_scalar_curvature() {
    let algebra = flow_algebra("cp1");
    let ctx = algebra.context().clone();
    let data = ricci(&algebra).unwrap();
    assert_eq!(
        data.scalar_curvature(),
        Scalar::term(&ctx, rat_int(-42), 2, rat_int(-1))
    );
}

#[test]
fn abelian_algebra_is_flat() {
    let algebra = ScaledAlgebra::unit(spec("abelian"), RingContext::constant());
    let tensor = riemann(&algebra).unwrap();
    assert!(tensor.is_zero());
    assert!(flat_limit_check(&tensor, LimitDirection::MinusInfinity));
    assert!(flat_limit_check(&tensor, LimitDirection::PlusInfinity));
}

#[test]
fn flow_metrics_flatten_toward_the_infinite_past() {
    // Flow base u = 1 - alpha m^2 t grows as t -> -infinity and every
    // curvature entry is a multiple of u^{-1}.
    for name in CP_NAMES {
        let tensor = riemann(&flow_algebra(name)).unwrap();
        assert!(
            flat_limit_check(&tensor, LimitDirection::MinusInfinity),
            "{name} flat at -oo"
        );
        assert!(
            !flat_limit_check(&tensor, LimitDirection::PlusInfinity),
            "{name} not flat at +oo"
        );
    }
}

#[test]
fn coflow_metrics_flatten_toward_the_infinite_future() {
    for name in CP_NAMES {
        let spec = spec(name);
        let sol = solve_flow_parameters(&spec).expect("flow solves");
        let coflow = flow_to_coflow(&sol).expect("correspondence applies");
        let algebra = ScaledAlgebra::new(spec, coflow.scaling());
        let tensor = riemann(&algebra).unwrap();
        assert!(
            flat_limit_check(&tensor, LimitDirection::PlusInfinity),
            "{name} flat at +oo"
        );
        assert!(
            !flat_limit_check(&tensor, LimitDirection::MinusInfinity),
            "{name} not flat at -oo"
        );
    }
}

#[test]
fn coflow_ricci_is_an_exact_rational_multiple_of_the_flow_ricci() {
    for name in CP_NAMES {
        assert!(
            coflow_ricci_ratio_check(&spec(name)).expect("ratio check runs"),
            "{name} Ricci ratio"
        );
    }
}

#[test]
fn second_algebra_curvature_table() {
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
}

#[test]
fn third_algebra_curvature_table() {
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
}

#[test]
fn fourth_algebra_curvature_table() {
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
}

#[test]
fn fifth_algebra_curvature_table() {
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
}

#[test]
fn sixth_algebra_curvature_table() {
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
}

#[test]
fn seventh_algebra_curvature_table() {
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
}
