//! End-to-end acceptance gate: one pass/fail line per criterion, all exact.

use std::time::Instant;

use mapsphere::bs_models::{component_model, full_model, homotopy_ranks, minimal_k0, minimal_k1};
use mapsphere::cga::identity_map;
use mapsphere::poincare::{parse_and_validate, PoincareData, RingDescription};
use mapsphere::ringgen;
use mapsphere::scalar::scalar;
use mapsphere::selfclose::{
    check_e_w_regular, self_closeness, verify_matrix_relations, witness_k0,
};
use mapsphere::splitting::{
    build_certificate, check_lambda_sum, ordered_bhat, partial_layer, project_layer,
};

fn corpus() -> Vec<RingDescription> {
    vec![
        ringgen::cp2(),
        ringgen::cp3(),
        ringgen::s2xs2(),
        ringgen::s3xs3(),
        ringgen::cp2xcp2(),
    ]
}

fn validated(desc: &RingDescription) -> PoincareData {
    parse_and_validate(desc).unwrap_or_else(|e| panic!("{} failed validation: {e}", desc.name))
}

struct Gate {
    failures: Vec<String>,
}

impl Gate {
    fn record(&mut self, criterion: &str, result: std::result::Result<(), String>) {
        match result {
            Ok(()) => println!("PASS {criterion}"),
            Err(detail) => {
                println!("FAIL {criterion}: {detail}");
                self.failures.push(criterion.to_string());
            }
        }
    }
}

fn criterion_1() -> std::result::Result<(), String> {
    let start = Instant::now();
    let cases: Vec<(RingDescription, Vec<(i64, i64)>)> = vec![
        (ringgen::cp2(), vec![(0, 4), (1, 7)]),
        (ringgen::cp3(), vec![(0, 4), (1, 11)]),
        (ringgen::s2xs2(), vec![(0, 4)]),
        (ringgen::s3xs3(), vec![(0, 6)]),
        (ringgen::cp2xcp2(), vec![(0, 4), (1, 15)]),
    ];
    for (desc, expectations) in cases {
        let pd = validated(&desc);
        // Independent oracle for the product-span criterion on the product
        // ring: a class below the top that is a product of positive-degree
        // classes forces non-primitivity.
        if desc.name.contains('x') || desc.name.contains("CP^3") {
            if pd.ring.name == "CP^2 x CP^2" && pd.is_primitive() {
                return Err("product ring reported primitive".into());
            }
        }
        for (k, expected) in expectations {
            let report = self_closeness(&pd, k)
                .map_err(|e| format!("{} k={k}: {e}", desc.name))?;
            if report.ne != expected {
                return Err(format!(
                    "{} k={k}: got {}, expected {expected}",
                    desc.name, report.ne
                ));
            }
            if !report.witness.is_verified()
                || report.witness.first_singular_degree != Some(expected)
            {
                return Err(format!(
                    "{} k={k}: witness not singular exactly at {expected}",
                    desc.name
                ));
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs_f64() >= 5.0 {
        return Err(format!("runtime {elapsed:?} exceeds 5 s"));
    }
    Ok(())
}

fn criterion_2() -> std::result::Result<(), String> {
    for desc in corpus() {
        let pd = validated(&desc);
        let m1 = minimal_k1(&pd).map_err(|e| format!("{}: {e}", desc.name))?;
        let cert = build_certificate(&pd, &m1).map_err(|e| format!("{}: {e}", desc.name))?;
        if !cert.zeta_residual.is_zero() {
            return Err(format!(
                "{}: ¼η² − dζ = {}",
                desc.name,
                m1.model.format_poly(&cert.zeta_residual)
            ));
        }
    }
    Ok(())
}

fn criterion_3() -> std::result::Result<(), String> {
    let expectations = [
        (ringgen::cp2(), 0usize),
        (ringgen::cp3(), 1),
        (ringgen::cp2xcp2(), 2),
    ];
    for (desc, layers) in expectations {
        let pd = validated(&desc);
        let m1 = minimal_k1(&pd).map_err(|e| format!("{}: {e}", desc.name))?;
        let cert = build_certificate(&pd, &m1).map_err(|e| format!("{}: {e}", desc.name))?;
        if !cert.mu_residual.is_zero() {
            return Err(format!(
                "{}: ξ − dμ = {}",
                desc.name,
                m1.model.format_poly(&cert.mu_residual)
            ));
        }
        if cert.layers.len() != layers {
            return Err(format!(
                "{}: {} layers, expected {layers}",
                desc.name,
                cert.layers.len()
            ));
        }
        // Layerwise: the layer derivation of the projected difference ξ − dμ
        // vanishes on every layer.
        let ob = ordered_bhat(&pd).map_err(|e| e.to_string())?;
        let dmu = m1.model.differential(&cert.mu).map_err(|e| e.to_string())?;
        for i in 1..=layers {
            let xi_part = partial_layer(
                &m1,
                &ob,
                i,
                &project_layer(&m1, &ob, i, &cert.xi).map_err(|e| e.to_string())?,
            )
            .map_err(|e| e.to_string())?;
            let dmu_part = partial_layer(
                &m1,
                &ob,
                i,
                &project_layer(&m1, &ob, i, &dmu).map_err(|e| e.to_string())?,
            )
            .map_err(|e| e.to_string())?;
            if xi_part != dmu_part {
                return Err(format!("{}: layer {i} residual nonzero", desc.name));
            }
        }
    }
    Ok(())
}

fn criterion_4() -> std::result::Result<(), String> {
    let start = Instant::now();
    for desc in corpus() {
        let pd = validated(&desc);
        let violations = pd.check_epsilon_associativity();
        if !violations.is_empty() {
            return Err(format!("{}: {}", desc.name, violations.join("; ")));
        }
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs_f64() >= 10.0 {
        return Err(format!("runtime {elapsed:?} exceeds 10 s"));
    }
    Ok(())
}

fn criterion_5() -> std::result::Result<(), String> {
    for desc in corpus() {
        let pd = validated(&desc);
        let violations = check_e_w_regular(&pd);
        if !violations.is_empty() {
            return Err(format!("{}: {}", desc.name, violations.join("; ")));
        }
    }
    Ok(())
}

fn criterion_6() -> std::result::Result<(), String> {
    for desc in corpus() {
        let pd = validated(&desc);
        let violations = check_lambda_sum(&pd).map_err(|e| e.to_string())?;
        if !violations.is_empty() {
            return Err(format!("{}: {}", desc.name, violations.join("; ")));
        }
    }
    Ok(())
}

fn criterion_7() -> std::result::Result<(), String> {
    use mapsphere::cga::{algebra_map, Polynomial};
    for desc in corpus() {
        let pd = validated(&desc);
        let m0 = minimal_k0(&pd).map_err(|e| e.to_string())?;
        let mut maps = vec![("identity", identity_map(&m0.model))];
        let mut values = vec![Polynomial::zero(); m0.model.generators().len()];
        for &id in m0.u_of.values() {
            values[id] = Polynomial::generator(id).scale(&scalar(3));
        }
        for &id in m0.v_of.values() {
            values[id] = Polynomial::generator(id).scale(&scalar(9));
        }
        maps.push((
            "scalar",
            algebra_map(&m0.model, &m0.model, values).map_err(|e| e.to_string())?,
        ));
        let witness = witness_k0(&pd, &m0).map_err(|e| e.to_string())?;
        maps.push(("witness", witness.map));
        for (label, f) in maps {
            let violations =
                verify_matrix_relations(&f, &m0, &pd).map_err(|e| e.to_string())?;
            if !violations.is_empty() {
                return Err(format!(
                    "{} {label}: {}",
                    desc.name,
                    violations.join("; ")
                ));
            }
        }
    }
    Ok(())
}

fn criterion_8() -> std::result::Result<(), String> {
    for desc in corpus() {
        let pd = validated(&desc);
        let full = full_model(&pd).map_err(|e| e.to_string())?;
        full.algebra.check_d_squared().map_err(|e| e.to_string())?;
        if full.algebra.is_minimal().is_minimal() {
            return Err(format!("{}: full model reported minimal", desc.name));
        }
        let quotient = component_model(&full, &pd, 1).map_err(|e| e.to_string())?;
        quotient.algebra.check_d_squared().map_err(|e| e.to_string())?;
        if quotient.algebra.is_minimal().is_minimal() {
            return Err(format!("{}: raw k=1 quotient reported minimal", desc.name));
        }
        let m0 = minimal_k0(&pd).map_err(|e| e.to_string())?;
        m0.model.check_d_squared().map_err(|e| e.to_string())?;
        if !m0.model.is_minimal().is_minimal() {
            return Err(format!("{}: k=0 model not minimal", desc.name));
        }
        let m1 = minimal_k1(&pd).map_err(|e| e.to_string())?;
        m1.model.check_d_squared().map_err(|e| e.to_string())?;
        if !m1.model.is_minimal().is_minimal() {
            return Err(format!("{}: k=1 minimal model not minimal", desc.name));
        }
    }
    let pd = validated(&ringgen::cp2());
    let ranks0 = homotopy_ranks(&minimal_k0(&pd).map_err(|e| e.to_string())?.model)
        .map_err(|e| e.to_string())?;
    let expected0: std::collections::BTreeMap<i64, usize> =
        [(2, 1), (3, 1), (4, 1), (5, 1), (7, 1)].into_iter().collect();
    if ranks0 != expected0 {
        return Err(format!("CP^2 k=0 ranks {ranks0:?}, expected {expected0:?}"));
    }
    let ranks1 = homotopy_ranks(&minimal_k1(&pd).map_err(|e| e.to_string())?.model)
        .map_err(|e| e.to_string())?;
    let expected1: std::collections::BTreeMap<i64, usize> =
        [(2, 1), (5, 1), (7, 1)].into_iter().collect();
    if ranks1 != expected1 {
        return Err(format!("CP^2 k=1 ranks {ranks1:?}, expected {expected1:?}"));
    }
    Ok(())
}

fn criterion_9() -> std::result::Result<(), String> {
    for seed in 0..100u64 {
        let desc = ringgen::random_ring(seed);
        let pd = parse_and_validate(&desc)
            .map_err(|e| format!("seed {seed} ({}): validation: {e}", desc.name))?;
        let assoc = pd.check_epsilon_associativity();
        if !assoc.is_empty() {
            return Err(format!("seed {seed}: associativity: {}", assoc.join("; ")));
        }
        let ew = check_e_w_regular(&pd);
        if !ew.is_empty() {
            return Err(format!("seed {seed}: top pairing: {}", ew.join("; ")));
        }
        let lam = check_lambda_sum(&pd).map_err(|e| e.to_string())?;
        if !lam.is_empty() {
            return Err(format!("seed {seed}: weight sums: {}", lam.join("; ")));
        }
        let m1 = minimal_k1(&pd).map_err(|e| format!("seed {seed}: {e}"))?;
        let cert = build_certificate(&pd, &m1).map_err(|e| format!("seed {seed}: {e}"))?;
        if !cert.is_valid() {
            return Err(format!("seed {seed} ({}): certificate invalid", desc.name));
        }
    }
    Ok(())
}

#[test]
fn acceptance() {
    let mut gate = Gate { failures: Vec::new() };
    gate.record("criterion 1: self-closeness values with verified witnesses", criterion_1());
    gate.record("criterion 2: ¼η² = dζ residual zero on the corpus", criterion_2());
    gate.record("criterion 3: ξ = dμ directly and layerwise", criterion_3());
    gate.record("criterion 4: pairing associativity over all 4-tuples", criterion_4());
    gate.record("criterion 5: top pairing matrices invertible", criterion_5());
    gate.record("criterion 6: weight sums over interior triples equal 3", criterion_6());
    gate.record("criterion 7: matrix relations for identity/scalar/witness maps", criterion_7());
    gate.record("criterion 8: structural verdicts and rank censuses", criterion_8());
    gate.record("criterion 9: 100 random rings pass the identity suite", criterion_9());
    assert!(gate.failures.is_empty(), "failed criteria: {:?}", gate.failures);
}
