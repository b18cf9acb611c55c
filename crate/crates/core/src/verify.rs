//! Bundled identity suite: every algebraic fact the pipeline relies on,
//! re-checked on a validated ring and reported one line per check.

use serde::Serialize;

use crate::bs_models::{minimal_k0, minimal_k1};
use crate::cga::{algebra_map, identity_map, Polynomial};
use crate::error::Result;
use crate::poincare::PoincareData;
use crate::scalar::scalar;
use crate::selfclose::{self, witness_k0, witness_k1};
use crate::splitting::{build_certificate, build_splitting_iso};

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Empty on success, diagnostic text on failure.
    pub detail: String,
}

fn check(results: &mut Vec<CheckResult>, name: &str, violations: Vec<String>) {
    results.push(CheckResult {
        name: name.to_string(),
        passed: violations.is_empty(),
        detail: violations.join("; "),
    });
}

fn check_flag(results: &mut Vec<CheckResult>, name: &str, passed: bool, detail: String) {
    results.push(CheckResult {
        name: name.to_string(),
        passed,
        detail: if passed { String::new() } else { detail },
    });
}

/// Runs every identity check on the ring: pairing properties, model
/// construction, the degree-1 splitting certificate with its per-layer
/// decomposition, the splitting isomorphism, matrix relations for sample
/// self-maps, and both witness maps.
pub fn run_identity_suite(pd: &PoincareData) -> Result<Vec<CheckResult>> {
    let mut results = Vec::new();

    check(
        &mut results,
        "pairing supported on complementary degrees only",
        pd.check_epsilon_degree_support(),
    );
    check(
        &mut results,
        "pairing associativity over all basis 4-tuples",
        pd.check_epsilon_associativity(),
    );
    check(
        &mut results,
        "top pairing matrices regular in every degree",
        selfclose::check_e_w_regular(pd),
    );
    check(
        &mut results,
        "weight sums over interior triples equal 3",
        crate::splitting::check_lambda_sum(pd)?,
    );

    let m0 = minimal_k0(pd)?;
    check_flag(
        &mut results,
        "degree-0 minimal model constructed (d²=0, minimal)",
        true,
        String::new(),
    );

    let m1 = minimal_k1(pd)?;
    check_flag(
        &mut results,
        "degree-1 minimal model verified against the component model",
        true,
        String::new(),
    );

    let cert = build_certificate(pd, &m1)?;
    let fmt = |p: &Polynomial| m1.model.format_poly(p);
    check_flag(
        &mut results,
        "η² − ξ is exactly d(α)",
        cert.alpha_residual.is_zero(),
        format!("residual {}", fmt(&cert.alpha_residual)),
    );
    check_flag(
        &mut results,
        "ξ is exactly d(μ)",
        cert.mu_residual.is_zero(),
        format!("residual {}", fmt(&cert.mu_residual)),
    );
    check_flag(
        &mut results,
        "¼η² is exactly d(ζ)",
        cert.zeta_residual.is_zero(),
        format!("residual {}", fmt(&cert.zeta_residual)),
    );
    check_flag(
        &mut results,
        "ξ + dμ lies in the cubic span",
        cert.cubic_membership,
        "membership failed".to_string(),
    );
    check_flag(
        &mut results,
        "cubic span splits as the direct sum of its layers",
        cert.decomposition.cubic_dimension
            == cert.decomposition.layer_dimensions.iter().sum::<usize>(),
        format!(
            "dimension {} vs layers {:?}",
            cert.decomposition.cubic_dimension, cert.decomposition.layer_dimensions
        ),
    );
    for layer in &cert.layers {
        let i = layer.layer;
        check_flag(
            &mut results,
            &format!("layer {i}: projection of ξ matches the filtration"),
            layer.projection_residual.is_zero(),
            format!("residual {}", fmt(&layer.projection_residual)),
        );
        check_flag(
            &mut results,
            &format!("layer {i}: derivation case analysis matches"),
            layer.derived_residual.is_zero(),
            format!("residual {}", fmt(&layer.derived_residual)),
        );
        check_flag(
            &mut results,
            &format!("layer {i}: closed-form coefficients of the projected ξ"),
            layer.xi_coefficient_residual.is_zero(),
            format!("residual {}", fmt(&layer.xi_coefficient_residual)),
        );
        check_flag(
            &mut results,
            &format!("layer {i}: layered decomposition of d(μ)"),
            layer.dmu_decomposition_residual.is_zero(),
            format!("residual {}", fmt(&layer.dmu_decomposition_residual)),
        );
        check_flag(
            &mut results,
            &format!("layer {i}: layer derivation injective on the layer"),
            layer.partial_injective,
            "kernel nontrivial".to_string(),
        );
    }
    if cert.layers.is_empty() {
        check_flag(
            &mut results,
            "layer decomposition vacuous (no classes below the middle degree)",
            true,
            String::new(),
        );
    }

    build_splitting_iso(&m1, &cert)?;
    check_flag(
        &mut results,
        "splitting isomorphism onto the tensor model",
        true,
        String::new(),
    );

    // Matrix relations for a sample of verified self-maps.
    let identity = identity_map(&m0.model);
    check(
        &mut results,
        "matrix relations: identity self-map",
        selfclose::verify_matrix_relations(&identity, &m0, pd)?,
    );
    let mut values = vec![Polynomial::zero(); m0.model.generators().len()];
    for &id in m0.u_of.values() {
        values[id] = Polynomial::generator(id).scale(&scalar(2));
    }
    for &id in m0.v_of.values() {
        values[id] = Polynomial::generator(id).scale(&scalar(4));
    }
    let doubling = algebra_map(&m0.model, &m0.model, values)?;
    check(
        &mut results,
        "matrix relations: scalar self-map",
        selfclose::verify_matrix_relations(&doubling, &m0, pd)?,
    );

    let w0 = witness_k0(pd, &m0)?;
    check(
        &mut results,
        "matrix relations: degree-0 witness self-map",
        selfclose::verify_matrix_relations(&w0.map, &m0, pd)?,
    );
    check_flag(
        &mut results,
        "degree-0 witness verified (dga, iso below, singular at bound)",
        w0.is_verified(),
        format!("first singular degree {:?}", w0.first_singular_degree),
    );
    let w1 = witness_k1(&m1, &cert)?;
    check_flag(
        &mut results,
        "degree-1 witness verified (dga, iso below, singular at bound)",
        w1.is_verified(),
        format!("first singular degree {:?}", w1.first_singular_degree),
    );

    Ok(results)
}

pub fn all_passed(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.passed)
}
