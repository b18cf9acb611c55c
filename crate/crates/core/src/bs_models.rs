//! Mapping-space models: the full free model on u⊗x, v⊗x, its component
//! quotients, and the minimal models of the degree-0 and degree-1
//! components.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::cga::{algebra_map, apply_map, dga_map_defect, FreeCGA, GenId, Polynomial};
use crate::error::{Error, Result};
use crate::poincare::{BasisIdx, PoincareData};
use crate::scalar::{format_scalar, frac, scalar};

/// Free model on generators u⊗x (degree 2n−|x|) and v⊗x (degree 4n−1−|x|)
/// over the whole canonical basis, including the degree-0 generator u⊗w.
#[derive(Clone, Debug)]
pub struct FullModel {
    pub algebra: FreeCGA,
    pub u_of: BTreeMap<BasisIdx, GenId>,
    pub v_of: BTreeMap<BasisIdx, GenId>,
    pub n: i64,
}

/// The quotient modeling the degree-k component: u⊗w is substituted by the
/// constant k and removed from the generator set.
#[derive(Clone, Debug)]
pub struct ComponentModel {
    pub k: i64,
    pub algebra: FreeCGA,
    /// u⊗x for x ≠ w.
    pub u_of: BTreeMap<BasisIdx, GenId>,
    pub v_of: BTreeMap<BasisIdx, GenId>,
    pub n: i64,
}

/// Minimal model of the degree-0 component: the k=0 quotient verbatim.
#[derive(Clone, Debug)]
pub struct MinimalK0 {
    pub model: FreeCGA,
    pub u_of: BTreeMap<BasisIdx, GenId>,
    pub v_of: BTreeMap<BasisIdx, GenId>,
    pub n: i64,
}

/// Minimal model of the degree-1 component on the generators
/// u⊗x, v⊙x (x interior) and v⊙1, together with the closed element η.
#[derive(Clone, Debug)]
pub struct MinimalK1 {
    pub model: FreeCGA,
    pub u_of: BTreeMap<BasisIdx, GenId>,
    pub vdot_of: BTreeMap<BasisIdx, GenId>,
    pub vdot_one: GenId,
    /// η = d(v⊗w) − 2(u⊗1) rewritten in the u⊗ generators; dη = 0.
    pub eta: Polynomial,
    pub n: i64,
}

fn u_label(class: &str) -> String {
    format!("u⊗{class}")
}

fn v_label(class: &str) -> String {
    format!("v⊗{class}")
}

fn vdot_label(class: &str) -> String {
    format!("v⊙{class}")
}

/// Σ ε(x₁,x₂,x)(u⊗x₁)(u⊗x₂) with both indices running over `range`.
fn quadratic_sum(
    alg: &FreeCGA,
    u_of: &BTreeMap<BasisIdx, GenId>,
    pd: &PoincareData,
    range: &[BasisIdx],
    x: BasisIdx,
) -> Result<Polynomial> {
    let mut out = Polynomial::zero();
    for &x1 in range {
        for &x2 in range {
            let c = pd.epsilon(x1, x2, x);
            if c.is_zero() {
                continue;
            }
            let term = alg.mul(
                &Polynomial::generator(u_of[&x1]),
                &Polynomial::generator(u_of[&x2]),
            )?;
            out = out.add(&term.scale(&c));
        }
    }
    Ok(out)
}

pub fn full_model(pd: &PoincareData) -> Result<FullModel> {
    let n = pd.n;
    let dim = pd.dimension();
    // Generators in degree-major order, u's before v's at equal degree,
    // canonical basis order within a kind.
    let mut slots: Vec<(i64, u8, BasisIdx)> = Vec::new();
    for (pos, elem) in pd.basis.elements.iter().enumerate() {
        slots.push((2 * dim - 1 - elem.degree, 1, pos));
        slots.push((dim - elem.degree, 0, pos));
    }
    slots.sort_by_key(|&(degree, kind, x)| (degree, kind, degree_position(pd, x)));

    let mut names = Vec::new();
    for &(degree, kind, x) in &slots {
        let class = pd.basis.label(x);
        let label = if kind == 0 { u_label(class) } else { v_label(class) };
        names.push((label, degree));
    }
    let mut algebra = FreeCGA::new(names)?;
    let mut u_of = BTreeMap::new();
    let mut v_of = BTreeMap::new();
    for (id, &(_, kind, x)) in slots.iter().enumerate() {
        if kind == 0 {
            u_of.insert(x, id);
        } else {
            v_of.insert(x, id);
        }
    }

    let everything: Vec<BasisIdx> = (0..pd.basis.len()).collect();
    for (&x, &vid) in &v_of {
        let dv = quadratic_sum(&algebra, &u_of, pd, &everything, x)?;
        algebra.set_differential(vid, dv)?;
    }
    algebra.check_d_squared()?;
    Ok(FullModel { algebra, u_of, v_of, n })
}

/// Position of a basis element within its own degree, for reproducible
/// generator ordering.
fn degree_position(pd: &PoincareData, x: BasisIdx) -> usize {
    pd.basis
        .of_degree(pd.basis.degree(x))
        .iter()
        .position(|&y| y == x)
        .expect("basis element lives in its own degree")
}

pub fn component_model(full: &FullModel, pd: &PoincareData, k: i64) -> Result<ComponentModel> {
    let uw = full.u_of[&pd.basis.w];
    let keep: Vec<GenId> = full
        .algebra
        .generators()
        .iter()
        .filter(|g| g.id != uw)
        .map(|g| g.id)
        .collect();
    let names: Vec<(String, i64)> = keep
        .iter()
        .map(|&id| {
            let g = &full.algebra.generators()[id];
            (g.label.clone(), g.degree)
        })
        .collect();
    let mut algebra = FreeCGA::new(names)?;
    let old_to_new: BTreeMap<GenId, GenId> =
        keep.iter().enumerate().map(|(new, &old)| (old, new)).collect();

    // Substitution endomorphism u⊗w ↦ k, everything else fixed.
    let values: Vec<Polynomial> = full
        .algebra
        .generators()
        .iter()
        .map(|g| {
            if g.id == uw {
                Polynomial::constant(scalar(k))
            } else {
                Polynomial::generator(old_to_new[&g.id])
            }
        })
        .collect();
    let subst = algebra_map(&full.algebra, &algebra, values)?;
    for &old in &keep {
        let image = apply_map(&subst, &full.algebra, &algebra, full.algebra.differential_of(old))?;
        algebra.set_differential(old_to_new[&old], image)?;
    }
    algebra.check_d_squared()?;

    let u_of = full
        .u_of
        .iter()
        .filter(|(x, _)| **x != pd.basis.w)
        .map(|(&x, &id)| (x, old_to_new[&id]))
        .collect();
    let v_of = full
        .v_of
        .iter()
        .map(|(&x, &id)| (x, old_to_new[&id]))
        .collect();
    Ok(ComponentModel { k, algebra, u_of, v_of, n: full.n })
}

pub fn minimal_k0(pd: &PoincareData) -> Result<MinimalK0> {
    let full = full_model(pd)?;
    let quotient = component_model(&full, pd, 0)?;
    match quotient.algebra.is_minimal() {
        crate::cga::Minimality::Minimal => {}
        other => {
            return Err(Error::Internal(format!(
                "k=0 quotient failed the minimality check: {other:?}"
            )))
        }
    }
    Ok(MinimalK0 {
        model: quotient.algebra,
        u_of: quotient.u_of,
        v_of: quotient.v_of,
        n: quotient.n,
    })
}

pub fn minimal_k1(pd: &PoincareData) -> Result<MinimalK1> {
    let full = full_model(pd)?;
    let quotient = component_model(&full, pd, 1)?;
    let n = pd.n;
    let dim = pd.dimension();
    let bhat = pd.basis.bhat();

    // Generators of the minimal model, degree-major.
    let mut slots: Vec<(i64, u8, Option<BasisIdx>)> = Vec::new();
    for &x in &bhat {
        slots.push((dim - pd.basis.degree(x), 0, Some(x)));
        slots.push((2 * dim - 1 - pd.basis.degree(x), 1, Some(x)));
    }
    slots.push((2 * dim - 1, 2, None));
    slots.sort_by_key(|&(degree, kind, x)| {
        (degree, kind, x.map(|x| degree_position(pd, x)).unwrap_or(0))
    });

    let names: Vec<(String, i64)> = slots
        .iter()
        .map(|&(degree, kind, x)| {
            let label = match (kind, x) {
                (0, Some(x)) => u_label(pd.basis.label(x)),
                (1, Some(x)) => vdot_label(pd.basis.label(x)),
                _ => vdot_label("1"),
            };
            (label, degree)
        })
        .collect();
    let mut model = FreeCGA::new(names)?;
    let mut u_of = BTreeMap::new();
    let mut vdot_of = BTreeMap::new();
    let mut vdot_one = usize::MAX;
    for (id, &(_, kind, x)) in slots.iter().enumerate() {
        match (kind, x) {
            (0, Some(x)) => {
                u_of.insert(x, id);
            }
            (1, Some(x)) => {
                vdot_of.insert(x, id);
            }
            _ => vdot_one = id,
        }
    }

    // η = Σ_{x₁,x₂ interior} ε(x₁,x₂,w)(u⊗x₁)(u⊗x₂), a closed degree-2n
    // element.
    let eta = quadratic_sum(&model, &u_of, pd, &bhat, pd.basis.w)?;

    for &x in &bhat {
        // d(v⊙x) = η(u⊗x) − Σ ε(x₁,x₂,x)(u⊗x₁)(u⊗x₂).
        let sum = quadratic_sum(&model, &u_of, pd, &bhat, x)?;
        let dv = model
            .mul(&eta, &Polynomial::generator(u_of[&x]))?
            .sub(&sum);
        model.set_differential(vdot_of[&x], dv)?;
    }
    let quarter_eta_sq = model.pow(&eta, 2)?.scale(&frac(1, 4));
    model.set_differential(vdot_one, quarter_eta_sq)?;
    model.check_d_squared()?;
    if !model.differential(&eta)?.is_zero() {
        return Err(Error::Internal("η is not closed".into()));
    }
    match model.is_minimal() {
        crate::cga::Minimality::Minimal => {}
        other => {
            return Err(Error::Internal(format!(
                "k=1 minimal model failed the minimality check: {other:?}"
            )))
        }
    }

    // Verify the differentials against the k=1 quotient: the substitution
    // u⊗x ↦ u⊗x, v⊙x ↦ (v⊗w)(u⊗x) − v⊗x,
    // v⊙1 ↦ v⊗1 − ¼(v⊗w)(2(u⊗1) − η) must be a dga map into the quotient.
    let q = &quotient.algebra;
    let vw = Polynomial::generator(quotient.v_of[&pd.basis.w]);
    let eta_in_q = {
        let mut out = Polynomial::zero();
        for &x1 in &bhat {
            for &x2 in &bhat {
                let c = pd.epsilon(x1, x2, pd.basis.w);
                if !c.is_zero() {
                    let term = q.mul(
                        &Polynomial::generator(quotient.u_of[&x1]),
                        &Polynomial::generator(quotient.u_of[&x2]),
                    )?;
                    out = out.add(&term.scale(&c));
                }
            }
        }
        out
    };
    let values: Vec<Polynomial> = slots
        .iter()
        .map(|&(_, kind, x)| -> Result<Polynomial> {
            match (kind, x) {
                (0, Some(x)) => Ok(Polynomial::generator(quotient.u_of[&x])),
                (1, Some(x)) => {
                    let prod = q.mul(&vw, &Polynomial::generator(quotient.u_of[&x]))?;
                    Ok(prod.sub(&Polynomial::generator(quotient.v_of[&x])))
                }
                _ => {
                    let u1 = Polynomial::generator(quotient.u_of[&pd.basis.unit]);
                    let inner = u1.scale(&scalar(2)).sub(&eta_in_q);
                    let correction = q.mul(&vw, &inner)?.scale(&frac(1, 4));
                    Ok(Polynomial::generator(quotient.v_of[&pd.basis.unit])
                        .sub(&correction))
                }
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let inclusion = algebra_map(&model, q, values)?;
    if let Some(generator) = dga_map_defect(&inclusion, &model, q)? {
        return Err(Error::Internal(format!(
            "minimal-model differential of {generator} disagrees with the k=1 quotient"
        )));
    }

    Ok(MinimalK1 { model, u_of, vdot_of, vdot_one, eta, n })
}

/// Generator counts per degree of a minimal model, i.e. the ranks of the
/// rational homotopy groups of the modeled component.
pub fn homotopy_ranks(model: &FreeCGA) -> Result<BTreeMap<i64, usize>> {
    if !model.is_minimal().is_minimal() {
        return Err(Error::Structural(
            "homotopy ranks are only meaningful for minimal models".into(),
        ));
    }
    let mut out: BTreeMap<i64, usize> = BTreeMap::new();
    for g in model.generators() {
        *out.entry(g.degree).or_insert(0) += 1;
    }
    Ok(out)
}

/// JSON-exportable dump of a model: generators with provenance, and each
/// differential as a list of [coefficient, [factor labels]].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelExport {
    pub name: String,
    pub generators: Vec<GeneratorExport>,
    pub differential: BTreeMap<String, Vec<(String, Vec<String>)>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneratorExport {
    pub label: String,
    pub degree: i64,
    pub provenance: String,
}

pub fn export_model(model: &FreeCGA, name: &str) -> ModelExport {
    let generators = model
        .generators()
        .iter()
        .map(|g| GeneratorExport {
            label: g.label.clone(),
            degree: g.degree,
            provenance: if g.label.starts_with("u⊗") {
                "u ⊗ homology class".into()
            } else if g.label.starts_with("v⊗") {
                "v ⊗ homology class".into()
            } else {
                "derived v ⊙ class".into()
            },
        })
        .collect();
    let mut differential = BTreeMap::new();
    for g in model.generators() {
        let terms: Vec<(String, Vec<String>)> = model
            .differential_of(g.id)
            .terms()
            .map(|(m, c)| {
                let labels = m
                    .0
                    .iter()
                    .map(|&id| model.generators()[id].label.clone())
                    .collect();
                (format_scalar(c), labels)
            })
            .collect();
        differential.insert(g.label.clone(), terms);
    }
    ModelExport {
        name: name.into(),
        generators,
        differential,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poincare::parse_and_validate;
    use crate::ringgen;

    fn cp2() -> PoincareData {
        parse_and_validate(&ringgen::cp2()).unwrap()
    }

    #[test]
    fn full_model_cp2_differentials() {
        let pd = cp2();
        let full = full_model(&pd).unwrap();
        let alg = &full.algebra;
        let unit = pd.basis.unit;
        let x2 = pd.basis.of_degree(2)[0];
        let w = pd.basis.w;
        let u = |x: BasisIdx| Polynomial::generator(full.u_of[&x]);

        // d(u⊗x) = 0 for all x.
        for &uid in full.u_of.values() {
            assert!(alg.differential_of(uid).is_zero());
        }
        // d(v⊗x₂) = 2(u⊗1)(u⊗x₂).
        let expected = alg.mul(&u(unit), &u(x2)).unwrap().scale(&scalar(2));
        assert_eq!(*alg.differential_of(full.v_of[&x2]), expected);
        // d(v⊗w) = 2(u⊗1)(u⊗w) + (u⊗x₂)².
        let expected = alg
            .mul(&u(unit), &u(w))
            .unwrap()
            .scale(&scalar(2))
            .add(&alg.pow(&u(x2), 2).unwrap());
        assert_eq!(*alg.differential_of(full.v_of[&w]), expected);
        // d(v⊗1) = (u⊗1)².
        assert_eq!(
            *alg.differential_of(full.v_of[&unit]),
            alg.pow(&u(unit), 2).unwrap()
        );
        // Not minimal: u⊗w sits in degree 0.
        assert!(!alg.is_minimal().is_minimal());
    }

    #[test]
    fn s3xs3_full_model_has_no_odd_squares() {
        let pd = parse_and_validate(&ringgen::s3xs3()).unwrap();
        let full = full_model(&pd).unwrap();
        let w = pd.basis.w;
        let dvw = full.algebra.differential_of(full.v_of[&w]);
        assert!(!dvw.is_zero());
        for (m, _) in dvw.terms() {
            // Every monomial is a product of two distinct generators.
            assert_eq!(m.len(), 2);
            assert_ne!(m.0[0], m.0[1]);
        }
    }

    #[test]
    fn component_models_on_cp2() {
        let pd = cp2();
        let full = full_model(&pd).unwrap();
        let x2 = pd.basis.of_degree(2)[0];
        let w = pd.basis.w;
        let unit = pd.basis.unit;

        for (k, constant) in [(0i64, 0i64), (1, 2), (5, 10)] {
            let q = component_model(&full, &pd, k).unwrap();
            let u1 = Polynomial::generator(q.u_of[&unit]);
            let ux2 = Polynomial::generator(q.u_of[&x2]);
            let expected = u1
                .scale(&scalar(constant))
                .add(&q.algebra.pow(&ux2, 2).unwrap());
            assert_eq!(*q.algebra.differential_of(q.v_of[&w]), expected);
            assert!(q.algebra.generators().iter().all(|g| g.degree > 0));
        }
    }

    #[test]
    fn minimal_k0_cp2_census() {
        let pd = cp2();
        let m = minimal_k0(&pd).unwrap();
        assert!(m.model.is_minimal().is_minimal());
        let ranks = homotopy_ranks(&m.model).unwrap();
        let expected: BTreeMap<i64, usize> =
            [(2, 1), (3, 1), (4, 1), (5, 1), (7, 1)].into_iter().collect();
        assert_eq!(ranks, expected);
    }

    #[test]
    fn minimal_k0_s2xs2_diagonal_weights() {
        let pd = parse_and_validate(&ringgen::s2xs2()).unwrap();
        let m = minimal_k0(&pd).unwrap();
        let w = pd.basis.w;
        let dvw = m.model.differential_of(m.v_of[&w]);
        // d(v⊗w) = Σ_j g_j (u⊗e_j)² with g_j the diagonal Gram entries.
        let d2 = pd.basis.of_degree(2);
        let mut expected = Polynomial::zero();
        for &x in d2 {
            let g = pd.epsilon(x, x, w);
            assert!(!g.is_zero());
            let sq = m
                .model
                .pow(&Polynomial::generator(m.u_of[&x]), 2)
                .unwrap();
            expected = expected.add(&sq.scale(&g));
        }
        assert_eq!(*dvw, expected);
    }

    #[test]
    fn minimal_k1_cp2() {
        let pd = cp2();
        let m = minimal_k1(&pd).unwrap();
        let x2 = pd.basis.of_degree(2)[0];
        let ux2 = Polynomial::generator(m.u_of[&x2]);
        // η = (u⊗x₂)².
        assert_eq!(m.eta, m.model.pow(&ux2, 2).unwrap());
        // d(v⊙x₂) = (u⊗x₂)³, d(v⊙1) = ¼(u⊗x₂)⁴.
        assert_eq!(
            *m.model.differential_of(m.vdot_of[&x2]),
            m.model.pow(&ux2, 3).unwrap()
        );
        assert_eq!(
            *m.model.differential_of(m.vdot_one),
            m.model.pow(&ux2, 4).unwrap().scale(&frac(1, 4))
        );
        let ranks = homotopy_ranks(&m.model).unwrap();
        let expected: BTreeMap<i64, usize> = [(2, 1), (5, 1), (7, 1)].into_iter().collect();
        assert_eq!(ranks, expected);
    }

    #[test]
    fn minimal_k1_cp3_eta_terms() {
        let pd = parse_and_validate(&ringgen::cp3()).unwrap();
        let m = minimal_k1(&pd).unwrap();
        // η is a sum of mixed (u⊗x₂)(u⊗x₄) terms; H³ = 0 leaves no middle
        // squares.
        assert!(!m.eta.is_zero());
        let x2 = m.u_of[&pd.basis.of_degree(2)[0]];
        let x4 = m.u_of[&pd.basis.of_degree(4)[0]];
        for (mono, _) in m.eta.terms() {
            assert_eq!(mono.0, vec![x2.min(x4), x2.max(x4)]);
        }
        assert!(m.model.differential(&m.eta).unwrap().is_zero());
    }

    #[test]
    fn minimal_k1_top_rank_one() {
        for desc in [ringgen::cp2(), ringgen::s3xs3(), ringgen::cp2xcp2()] {
            let pd = parse_and_validate(&desc).unwrap();
            let m = minimal_k1(&pd).unwrap();
            let ranks = homotopy_ranks(&m.model).unwrap();
            let top = 2 * pd.dimension() - 1;
            assert_eq!(ranks[&top], 1, "{}", desc.name);
            assert!(ranks.keys().all(|&d| d >= 2));
        }
    }

    #[test]
    fn homotopy_ranks_rejects_non_minimal() {
        let pd = cp2();
        let full = full_model(&pd).unwrap();
        assert!(homotopy_ranks(&full.algebra).is_err());
    }

    #[test]
    fn export_round_trip() {
        let pd = cp2();
        let m = minimal_k0(&pd).unwrap();
        let export = export_model(&m.model, "CP^2 k=0");
        let text = serde_json::to_string(&export).unwrap();
        let back: ModelExport = serde_json::from_str(&text).unwrap();
        assert_eq!(back.generators.len(), 5);
        assert_eq!(back.differential.len(), 5);
    }
}
