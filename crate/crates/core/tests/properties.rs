//! Randomized laws of the graded-commutative algebra layer: commutativity
//! signs, normal-form idempotence, the signed Leibniz rule, and linear-part
//! functoriality.

use proptest::prelude::*;

use mapsphere::cga::{
    algebra_map, compose_maps, linear_part, Derivation, FreeCGA, GenId, Monomial, Polynomial,
};
use mapsphere::scalar::{koszul_sign, scalar};

/// Mixed-parity test algebra: a(2), b(3), c(3), e(4), f(5).
fn test_algebra() -> FreeCGA {
    FreeCGA::new(vec![
        ("a".into(), 2),
        ("b".into(), 3),
        ("c".into(), 3),
        ("e".into(), 4),
        ("f".into(), 5),
    ])
    .unwrap()
}

/// All normal-form monomials of the given degree (non-decreasing ids, no
/// repeated odd generator).
fn monomials_of_degree(alg: &FreeCGA, degree: i64) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<GenId>, i64)> = vec![(Vec::new(), 0)];
    while let Some((prefix, total)) = stack.pop() {
        if total == degree {
            out.push(Monomial(prefix));
            continue;
        }
        let start = prefix.last().map_or(0, |&last| last);
        for g in alg.generators().iter().skip(start) {
            if total + g.degree > degree {
                continue;
            }
            if g.degree % 2 != 0 && prefix.last() == Some(&g.id) {
                continue;
            }
            let mut next = prefix.clone();
            next.push(g.id);
            stack.push((next, total + g.degree));
        }
    }
    out
}

fn homogeneous_poly(degree: i64) -> impl Strategy<Value = Polynomial> {
    let monos = monomials_of_degree(&test_algebra(), degree);
    let count = monos.len();
    prop::collection::vec((0..count.max(1), -5i64..=5), 0..4).prop_map(move |picks| {
        let mut p = Polynomial::zero();
        if count == 0 {
            return p;
        }
        for (i, c) in picks {
            p.add_term(monos[i].clone(), scalar(c));
        }
        p
    })
}

fn degree_strategy() -> impl Strategy<Value = i64> {
    prop::sample::select(vec![2i64, 3, 4, 5, 6, 7, 8])
}

fn homogeneous_pair() -> impl Strategy<Value = (i64, Polynomial, i64, Polynomial)> {
    (degree_strategy(), degree_strategy()).prop_flat_map(|(dp, dq)| {
        (Just(dp), homogeneous_poly(dp), Just(dq), homogeneous_poly(dq))
    })
}

proptest! {
    #[test]
    fn multiplication_graded_commutative((dp, p, dq, q) in homogeneous_pair()) {
        let alg = test_algebra();
        let pq = alg.mul(&p, &q).unwrap();
        let qp = alg.mul(&q, &p).unwrap();
        prop_assert_eq!(pq, qp.scale(&koszul_sign(dp, dq)));
    }

    #[test]
    fn normal_form_is_idempotent(factors in prop::collection::vec(0usize..5, 0..5)) {
        let alg = test_algebra();
        if let Some((_, normal)) = alg.normalize_monomial(&factors).unwrap() {
            let again = alg.normalize_monomial(&normal.0).unwrap();
            prop_assert_eq!(again, Some((scalar(1), normal)));
        }
    }

    #[test]
    fn derivation_satisfies_signed_leibniz(
        (dp, p, _dq, q) in homogeneous_pair(),
        values in prop::collection::vec(-3i64..=3, 5),
    ) {
        let alg = test_algebra();
        // Degree +1 derivation with a single-monomial value on each generator.
        let d = Derivation {
            shift: 1,
            values: alg
                .generators()
                .iter()
                .map(|g| {
                    let monos = monomials_of_degree(&alg, g.degree + 1);
                    match monos.first() {
                        Some(m) => Polynomial::term(m.clone(), scalar(values[g.id])),
                        None => Polynomial::zero(),
                    }
                })
                .collect(),
        };
        let lhs = alg.apply_derivation(&d, &alg.mul(&p, &q).unwrap()).unwrap();
        let rhs = alg
            .mul(&alg.apply_derivation(&d, &p).unwrap(), &q)
            .unwrap()
            .add(
                &alg.mul(&p, &alg.apply_derivation(&d, &q).unwrap())
                    .unwrap()
                    .scale(&koszul_sign(dp, 1)),
            );
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn linear_part_is_functorial(coeffs in prop::collection::vec((-3i64..=3, -3i64..=3), 5)) {
        let alg = test_algebra();
        // Two degree-preserving algebra maps with random linear and
        // decomposable parts on each generator.
        let build = |which: usize| {
            let values: Vec<Polynomial> = alg
                .generators()
                .iter()
                .map(|g| {
                    let (lin, dec) = coeffs[g.id];
                    let c = if which == 0 { lin } else { dec };
                    let mut p = Polynomial::generator(g.id).scale(&scalar(c));
                    // Add a decomposable tail where one exists in this degree.
                    if let Some(m) = monomials_of_degree(&alg, g.degree)
                        .into_iter()
                        .find(|m| m.len() > 1)
                    {
                        p.add_term(m, scalar(if which == 0 { dec } else { lin }));
                    }
                    p
                })
                .collect();
            algebra_map(&alg, &alg, values).unwrap()
        };
        let f = build(0);
        let g = build(1);
        let gf = compose_maps(&f, &g, &alg, &alg, &alg).unwrap();
        let lp_f = linear_part(&f, &alg, &alg);
        let lp_g = linear_part(&g, &alg, &alg);
        let lp_gf = linear_part(&gf, &alg, &alg);
        for (degree, (m, _, _)) in &lp_gf.blocks {
            let expected = lp_g.matrix(*degree).unwrap().mul(lp_f.matrix(*degree).unwrap());
            prop_assert_eq!(m, &expected);
        }
    }
}
