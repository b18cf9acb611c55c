//! Splitting certificate for the degree-1 minimal model: the ordered
//! interior basis and its filtration, the elements ξ, α, μ, ζ, the layer
//! projections p_i with their derivations ∂_i, and the splitting
//! isomorphism (ΛU,d)⊗(Λ(s),0) ≅ (ΛW̄,d).

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::bs_models::MinimalK1;
use crate::cga::{algebra_map, AlgebraMap, Derivation, FreeCGA, GenId, Monomial, Polynomial};
use crate::cga::{dga_map_defect, linear_part};
use crate::error::{Error, Result};
use crate::poincare::{BasisIdx, PoincareData};
use crate::qmatrix::QMatrix;
use crate::scalar::{frac, scalar, Scalar};

/// Total order on the interior basis: degree-ascending; within a degree
/// ≤ n, canonical construction order; above the middle, x < y iff x̂ < ŷ.
#[derive(Clone, Debug)]
pub struct OrderedBhat {
    /// Interior basis elements, ascending in the total order.
    pub order: Vec<BasisIdx>,
    /// θ₁ > θ₂ > … > θ_m: the below-middle elements, descending.
    pub theta: Vec<BasisIdx>,
    /// F_0 ⊂ F_1 ⊂ … ⊂ F_m with F_0 the middle degree and
    /// F_i = F_{i−1} ⊔ {θ_i, θ̂_i}.
    pub filtration: Vec<BTreeSet<BasisIdx>>,
    position: BTreeMap<BasisIdx, usize>,
}

impl OrderedBhat {
    pub fn layers(&self) -> usize {
        self.theta.len()
    }

    pub fn position(&self, x: BasisIdx) -> usize {
        self.position[&x]
    }
}

pub fn ordered_bhat(pd: &PoincareData) -> Result<OrderedBhat> {
    let n = pd.n;
    let dim = pd.dimension();
    let mut order: Vec<BasisIdx> = Vec::new();
    for degree in 1..=n {
        order.extend_from_slice(pd.basis.of_degree(degree));
    }
    let low_position: BTreeMap<BasisIdx, usize> =
        order.iter().enumerate().map(|(p, &x)| (x, p)).collect();
    for degree in n + 1..dim {
        let mut layer: Vec<BasisIdx> = pd.basis.of_degree(degree).to_vec();
        let mut keyed: Vec<(usize, BasisIdx)> = layer
            .drain(..)
            .map(|x| Ok((low_position[&pd.hat(x)?], x)))
            .collect::<Result<Vec<_>>>()?;
        keyed.sort_by_key(|&(k, _)| k);
        order.extend(keyed.into_iter().map(|(_, x)| x));
    }
    let position: BTreeMap<BasisIdx, usize> =
        order.iter().enumerate().map(|(p, &x)| (x, p)).collect();

    let mut theta: Vec<BasisIdx> = order
        .iter()
        .copied()
        .filter(|&x| pd.basis.degree(x) < n)
        .collect();
    theta.reverse();

    let mut filtration = Vec::with_capacity(theta.len() + 1);
    let mut current: BTreeSet<BasisIdx> = pd.basis.of_degree(n).iter().copied().collect();
    filtration.push(current.clone());
    for &t in &theta {
        current.insert(t);
        current.insert(pd.hat(t)?);
        filtration.push(current.clone());
    }
    // F_m must exhaust the interior basis, and θ_i must be the least
    // element of F_i.
    let everything: BTreeSet<BasisIdx> = order.iter().copied().collect();
    if *filtration.last().unwrap() != everything {
        return Err(Error::Internal("filtration does not exhaust the basis".into()));
    }
    for (i, &t) in theta.iter().enumerate() {
        let least = filtration[i + 1]
            .iter()
            .min_by_key(|&&x| position[&x])
            .copied();
        if least != Some(t) {
            return Err(Error::Internal(format!(
                "layer {} is not anchored at its θ",
                i + 1
            )));
        }
    }
    Ok(OrderedBhat { order, theta, filtration, position })
}

/// λ(x) = 3(n−|x|)/n · ε(x̂) below the middle, 0 at the middle, −λ(x̂)
/// above it.
pub fn lambda_of(pd: &PoincareData, x: BasisIdx) -> Result<Scalar> {
    let n = pd.n;
    let degree = pd.basis.degree(x);
    if degree <= 0 || degree >= 2 * n {
        return Err(Error::Structural(format!(
            "λ is defined on the interior basis, not {}",
            pd.basis.label(x)
        )));
    }
    if degree == n {
        return Ok(Scalar::zero());
    }
    if degree < n {
        Ok(frac(3 * (n - degree), n) * pd.eps_of(pd.hat(x)?)?)
    } else {
        Ok(-lambda_of(pd, pd.hat(x)?)?)
    }
}

fn ugen(m1: &MinimalK1, x: BasisIdx) -> Polynomial {
    Polynomial::generator(m1.u_of[&x])
}

/// ξ = Σ ε(x₃)ε(x₁,x₂,x₃)(u⊗x₁)(u⊗x₂)(u⊗x̂₃) over interior triples.
pub fn build_xi(pd: &PoincareData, m1: &MinimalK1) -> Result<Polynomial> {
    let bhat = pd.basis.bhat();
    let mut out = Polynomial::zero();
    for &x1 in &bhat {
        for &x2 in &bhat {
            for &x3 in &bhat {
                let e = pd.epsilon(x1, x2, x3);
                if e.is_zero() {
                    continue;
                }
                let c = pd.eps_of(x3)? * e;
                let term = m1.model.mul_all(&[
                    &ugen(m1, x1),
                    &ugen(m1, x2),
                    &ugen(m1, pd.hat(x3)?),
                ])?;
                out = out.add(&term.scale(&c));
            }
        }
    }
    Ok(out)
}

/// α = Σ ε(x)(v⊙x)(u⊗x̂) over the interior basis.
pub fn build_alpha(pd: &PoincareData, m1: &MinimalK1) -> Result<Polynomial> {
    let mut out = Polynomial::zero();
    for &x in &pd.basis.bhat() {
        let c = pd.eps_of(x)?;
        let term = m1.model.mul(
            &Polynomial::generator(m1.vdot_of[&x]),
            &ugen(m1, pd.hat(x)?),
        )?;
        out = out.add(&term.scale(&c));
    }
    Ok(out)
}

/// μ(x) = (−1)^{|x||x̂|}(v⊙x)(u⊗x̂) − (v⊙x̂)(u⊗x).
pub fn mu_of(pd: &PoincareData, m1: &MinimalK1, x: BasisIdx) -> Result<Polynomial> {
    let hx = pd.hat(x)?;
    let sign = if (pd.basis.degree(x) * pd.basis.degree(hx)) % 2 == 0 {
        scalar(1)
    } else {
        scalar(-1)
    };
    let first = m1
        .model
        .mul(&Polynomial::generator(m1.vdot_of[&x]), &ugen(m1, hx))?;
    let second = m1
        .model
        .mul(&Polynomial::generator(m1.vdot_of[&hx]), &ugen(m1, x))?;
    Ok(first.scale(&sign).sub(&second))
}

/// μ = Σ_{x below the middle} λ(x)μ(x).
pub fn build_mu(pd: &PoincareData, m1: &MinimalK1, ob: &OrderedBhat) -> Result<Polynomial> {
    let mut out = Polynomial::zero();
    for &t in &ob.theta {
        out = out.add(&mu_of(pd, m1, t)?.scale(&lambda_of(pd, t)?));
    }
    Ok(out)
}

/// Map from u-generator ids back to basis elements.
fn u_classes(m1: &MinimalK1) -> BTreeMap<GenId, BasisIdx> {
    m1.u_of.iter().map(|(&x, &id)| (id, x)).collect()
}

/// True when every monomial is a product of exactly three u-generators
/// whose class degrees sum to the formal dimension.
pub fn in_cubic_span(pd: &PoincareData, m1: &MinimalK1, p: &Polynomial) -> bool {
    let classes = u_classes(m1);
    p.terms().all(|(m, _)| {
        m.len() == 3
            && m.0.iter().all(|id| classes.contains_key(id))
            && m.0
                .iter()
                .map(|id| pd.basis.degree(classes[id]))
                .sum::<i64>()
                == pd.dimension()
    })
}

/// Projection onto the layer V_i: keeps a cubic monomial iff all its class
/// factors lie in F_i and θ_i is among them.
pub fn project_layer(
    m1: &MinimalK1,
    ob: &OrderedBhat,
    i: usize,
    p: &Polynomial,
) -> Result<Polynomial> {
    if i == 0 || i > ob.layers() {
        return Err(Error::Structural(format!("layer {i} out of range")));
    }
    let classes = u_classes(m1);
    let theta = ob.theta[i - 1];
    let layer = &ob.filtration[i];
    let mut out = Polynomial::zero();
    for (m, c) in p.terms() {
        let factors: Vec<BasisIdx> = m
            .0
            .iter()
            .map(|id| {
                classes.get(id).copied().ok_or_else(|| {
                    Error::Structural("projection applied outside the cubic span".into())
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if factors.iter().all(|x| layer.contains(x)) && factors.contains(&theta) {
            out.add_term(m.clone(), c.clone());
        }
    }
    Ok(out)
}

/// The derivation ∂_i: value 1 on u⊗θ_i, 0 on every other generator,
/// extended by the signed Leibniz rule.
pub fn partial_layer(
    m1: &MinimalK1,
    ob: &OrderedBhat,
    i: usize,
    p: &Polynomial,
) -> Result<Polynomial> {
    if i == 0 || i > ob.layers() {
        return Err(Error::Structural(format!("layer {i} out of range")));
    }
    let target = m1.u_of[&ob.theta[i - 1]];
    let mut values = vec![Polynomial::zero(); m1.model.generators().len()];
    values[target] = Polynomial::one();
    let d = Derivation {
        shift: -m1.model.generators()[target].degree,
        values,
    };
    m1.model.apply_derivation(&d, p)
}

/// Direct-sum bookkeeping for the cubic span: every basis monomial lies in
/// exactly one layer and the dimensions add up.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub cubic_dimension: usize,
    pub layer_dimensions: Vec<usize>,
}

/// Monomial basis of the cubic span: normalized triple products of
/// u-generators with class degrees summing to 2n.
fn cubic_basis(pd: &PoincareData, m1: &MinimalK1) -> Result<Vec<Monomial>> {
    let bhat = pd.basis.bhat();
    let mut out = BTreeSet::new();
    for &x1 in &bhat {
        for &x2 in &bhat {
            for &x3 in &bhat {
                if pd.basis.degree(x1) + pd.basis.degree(x2) + pd.basis.degree(x3)
                    != pd.dimension()
                {
                    continue;
                }
                let ids = [m1.u_of[&x1], m1.u_of[&x2], m1.u_of[&x3]];
                if let Some((_, m)) = m1.model.normalize_monomial(&ids)? {
                    out.insert(m);
                }
            }
        }
    }
    Ok(out.into_iter().collect())
}

pub fn decompose_cubic_span(
    pd: &PoincareData,
    m1: &MinimalK1,
    ob: &OrderedBhat,
) -> Result<DecompositionReport> {
    let basis = cubic_basis(pd, m1)?;
    let classes = u_classes(m1);
    let mut layer_dimensions = vec![0usize; ob.layers()];
    for m in &basis {
        let factors: Vec<BasisIdx> = m.0.iter().map(|id| classes[id]).collect();
        let homes: Vec<usize> = (1..=ob.layers())
            .filter(|&i| {
                factors.iter().all(|x| ob.filtration[i].contains(x))
                    && factors.contains(&ob.theta[i - 1])
            })
            .collect();
        match homes.as_slice() {
            [i] => layer_dimensions[*i - 1] += 1,
            _ => {
                return Err(Error::Internal(format!(
                    "cubic monomial {} lies in {} layers, expected exactly one",
                    m1.model.format_monomial(m),
                    homes.len()
                )))
            }
        }
    }
    Ok(DecompositionReport {
        cubic_dimension: basis.len(),
        layer_dimensions,
    })
}

/// Full column rank of ∂_i on the layer's monomial basis.
pub fn partial_injective_on_layer(
    pd: &PoincareData,
    m1: &MinimalK1,
    ob: &OrderedBhat,
    i: usize,
) -> Result<bool> {
    let basis = cubic_basis(pd, m1)?;
    let classes = u_classes(m1);
    let layer_basis: Vec<Monomial> = basis
        .into_iter()
        .filter(|m| {
            let factors: Vec<BasisIdx> = m.0.iter().map(|id| classes[id]).collect();
            factors.iter().all(|x| ob.filtration[i].contains(x))
                && factors.contains(&ob.theta[i - 1])
        })
        .collect();
    if layer_basis.is_empty() {
        return Ok(true);
    }
    let images: Vec<Polynomial> = layer_basis
        .iter()
        .map(|m| partial_layer(m1, ob, i, &Polynomial::term(m.clone(), Scalar::one())))
        .collect::<Result<Vec<_>>>()?;
    let mut rows: BTreeSet<Monomial> = BTreeSet::new();
    for image in &images {
        rows.extend(image.terms().map(|(m, _)| m.clone()));
    }
    let rows: Vec<Monomial> = rows.into_iter().collect();
    let matrix = QMatrix::from_fn(rows.len(), images.len(), |r, c| {
        images[c].coefficient(&rows[r])
    });
    Ok(matrix.rank() == layer_basis.len())
}

/// Σᵢ ε(x̂ᵢ)ε(xᵢ)λ(xᵢ) = 3 for every interior triple with degree sum 2n.
pub fn check_lambda_sum(pd: &PoincareData) -> Result<Vec<String>> {
    let bhat = pd.basis.bhat();
    let mut violations = Vec::new();
    for &x1 in &bhat {
        for &x2 in &bhat {
            for &x3 in &bhat {
                if pd.basis.degree(x1) + pd.basis.degree(x2) + pd.basis.degree(x3)
                    != pd.dimension()
                {
                    continue;
                }
                let total: Scalar = [x1, x2, x3]
                    .iter()
                    .map(|&x| -> Result<Scalar> {
                        Ok(pd.eps_of(pd.hat(x)?)? * pd.eps_of(x)? * lambda_of(pd, x)?)
                    })
                    .sum::<Result<Scalar>>()?;
                if total != scalar(3) {
                    violations.push(format!(
                        "λ-sum at ({}, {}, {}) is {:?}, expected 3",
                        pd.basis.label(x1),
                        pd.basis.label(x2),
                        pd.basis.label(x3),
                        total
                    ));
                }
            }
        }
    }
    Ok(violations)
}

/// Per-layer verification record; all residuals must be zero.
#[derive(Clone, Debug)]
pub struct LayerReport {
    pub layer: usize,
    /// p_i(ξ) − p_i(dμ).
    pub projection_residual: Polynomial,
    /// ∂_i p_i(ξ) − ∂_i p_i(dμ).
    pub derived_residual: Polynomial,
    /// ∂ᵢpᵢ(ξ) against its closed-form coefficients
    /// (3/6/6/3 · ε(x₁,x₂,θ̂ᵢ) by case).
    pub xi_coefficient_residual: Polynomial,
    /// ∂ᵢpᵢ(dμ) against λ(θᵢ)∂ᵢpᵢ(dμ(θᵢ)) + the F_{i−1} correction sum.
    pub dmu_decomposition_residual: Polynomial,
    pub partial_injective: bool,
}

#[derive(Clone, Debug)]
pub struct SplittingCertificate {
    pub eta: Polynomial,
    pub xi: Polynomial,
    pub alpha: Polynomial,
    pub mu: Polynomial,
    pub zeta: Polynomial,
    /// η² − ξ − dα.
    pub alpha_residual: Polynomial,
    /// ξ − dμ.
    pub mu_residual: Polynomial,
    /// ¼η² − dζ.
    pub zeta_residual: Polynomial,
    pub cubic_membership: bool,
    pub decomposition: DecompositionReport,
    pub layers: Vec<LayerReport>,
}

impl SplittingCertificate {
    pub fn is_valid(&self) -> bool {
        self.alpha_residual.is_zero()
            && self.mu_residual.is_zero()
            && self.zeta_residual.is_zero()
            && self.cubic_membership
            && self.decomposition.cubic_dimension
                == self.decomposition.layer_dimensions.iter().sum::<usize>()
            && self.layers.iter().all(|l| {
                l.projection_residual.is_zero()
                    && l.derived_residual.is_zero()
                    && l.xi_coefficient_residual.is_zero()
                    && l.dmu_decomposition_residual.is_zero()
                    && l.partial_injective
            })
    }
}

/// Closed-form coefficient of (u⊗x₁)(u⊗x₂) in ∂ᵢpᵢ(ξ) for x₁ ≤ x₂ in F_i.
fn xi_coefficient(
    pd: &PoincareData,
    ob: &OrderedBhat,
    i: usize,
    x1: BasisIdx,
    x2: BasisIdx,
) -> Result<Scalar> {
    let theta = ob.theta[i - 1];
    let eps = pd.epsilon(x1, x2, pd.hat(theta)?);
    // 3ε when the pair is a square (x₁ = x₂), 6ε for distinct factors.
    let factor = if x1 == x2 { scalar(3) } else { scalar(6) };
    Ok(eps * factor)
}

fn expected_partial_xi(
    pd: &PoincareData,
    m1: &MinimalK1,
    ob: &OrderedBhat,
    i: usize,
) -> Result<Polynomial> {
    let layer: Vec<BasisIdx> = {
        let mut v: Vec<BasisIdx> = ob.filtration[i].iter().copied().collect();
        v.sort_by_key(|&x| ob.position(x));
        v
    };
    let mut out = Polynomial::zero();
    for (p, &x1) in layer.iter().enumerate() {
        for &x2 in &layer[p..] {
            let c = xi_coefficient(pd, ob, i, x1, x2)?;
            if c.is_zero() {
                continue;
            }
            let term = m1.model.mul(&ugen(m1, x1), &ugen(m1, x2))?;
            out = out.add(&term.scale(&c));
        }
    }
    Ok(out)
}

/// λ(θᵢ)∂ᵢpᵢ(dμ(θᵢ)) + 2 Σ_{x₁∈Fᵢ, x₂∈Fᵢ₋₁} (−1)^{|x₂||x̂₂|} λ(x₂)
/// ε(x₁,x₂,θ̂ᵢ)(u⊗x₁)(u⊗x₂).
fn expected_partial_dmu(
    pd: &PoincareData,
    m1: &MinimalK1,
    ob: &OrderedBhat,
    i: usize,
) -> Result<Polynomial> {
    let theta = ob.theta[i - 1];
    let d_mu_theta = m1.model.differential(&mu_of(pd, m1, theta)?)?;
    let head = partial_layer(m1, ob, i, &project_layer(m1, ob, i, &d_mu_theta)?)?
        .scale(&lambda_of(pd, theta)?);
    let mut tail = Polynomial::zero();
    let theta_hat = pd.hat(theta)?;
    for &x1 in &ob.filtration[i] {
        for &x2 in &ob.filtration[i - 1] {
            let eps = pd.epsilon(x1, x2, theta_hat);
            if eps.is_zero() {
                continue;
            }
            let sign = if (pd.basis.degree(x2) * pd.basis.degree(pd.hat(x2)?)) % 2 == 0 {
                scalar(1)
            } else {
                scalar(-1)
            };
            let c = sign * lambda_of(pd, x2)? * eps * scalar(2);
            let term = m1.model.mul(&ugen(m1, x1), &ugen(m1, x2))?;
            tail = tail.add(&term.scale(&c));
        }
    }
    Ok(head.add(&tail))
}

pub fn build_certificate(pd: &PoincareData, m1: &MinimalK1) -> Result<SplittingCertificate> {
    let ob = ordered_bhat(pd)?;
    let eta = m1.eta.clone();
    let xi = build_xi(pd, m1)?;
    let alpha = build_alpha(pd, m1)?;
    let mu = build_mu(pd, m1, &ob)?;
    let zeta = alpha.add(&mu).scale(&frac(1, 4));

    let eta_sq = m1.model.pow(&eta, 2)?;
    let alpha_residual = eta_sq.sub(&xi).sub(&m1.model.differential(&alpha)?);
    let d_mu = m1.model.differential(&mu)?;
    let mu_residual = xi.sub(&d_mu);
    let zeta_residual = eta_sq
        .scale(&frac(1, 4))
        .sub(&m1.model.differential(&zeta)?);

    let cubic_membership = in_cubic_span(pd, m1, &xi) && in_cubic_span(pd, m1, &d_mu);
    let decomposition = decompose_cubic_span(pd, m1, &ob)?;

    let mut layers = Vec::new();
    for i in 1..=ob.layers() {
        let p_xi = project_layer(m1, &ob, i, &xi)?;
        let p_dmu = project_layer(m1, &ob, i, &d_mu)?;
        let dp_xi = partial_layer(m1, &ob, i, &p_xi)?;
        let dp_dmu = partial_layer(m1, &ob, i, &p_dmu)?;
        layers.push(LayerReport {
            layer: i,
            projection_residual: p_xi.sub(&p_dmu),
            derived_residual: dp_xi.sub(&dp_dmu),
            xi_coefficient_residual: dp_xi.sub(&expected_partial_xi(pd, m1, &ob, i)?),
            dmu_decomposition_residual: dp_dmu.sub(&expected_partial_dmu(pd, m1, &ob, i)?),
            partial_injective: partial_injective_on_layer(pd, m1, &ob, i)?,
        });
    }

    Ok(SplittingCertificate {
        eta,
        xi,
        alpha,
        mu,
        zeta,
        alpha_residual,
        mu_residual,
        zeta_residual,
        cubic_membership,
        decomposition,
        layers,
    })
}

/// The splitting isomorphism f: (ΛU,d)⊗(Λ(s),0) → (ΛW̄,d), f(s) = v⊙1 − ζ.
#[derive(Clone, Debug)]
pub struct SplittingIso {
    /// Source algebra: the W̄ generators with v⊙1 replaced by a closed
    /// generator s of the same degree.
    pub source: FreeCGA,
    pub s_id: GenId,
    pub map: AlgebraMap,
}

pub fn build_splitting_iso(
    m1: &MinimalK1,
    cert: &SplittingCertificate,
) -> Result<SplittingIso> {
    if !cert.is_valid() {
        return Err(Error::Internal(
            "splitting isomorphism requested from an invalid certificate".into(),
        ));
    }
    let names: Vec<(String, i64)> = m1
        .model
        .generators()
        .iter()
        .map(|g| {
            if g.id == m1.vdot_one {
                ("s".to_string(), g.degree)
            } else {
                (g.label.clone(), g.degree)
            }
        })
        .collect();
    let mut source = FreeCGA::new(names)?;
    for g in m1.model.generators() {
        if g.id != m1.vdot_one {
            source.set_differential(g.id, m1.model.differential_of(g.id).clone())?;
        }
    }
    source.check_d_squared()?;

    let values: Vec<Polynomial> = m1
        .model
        .generators()
        .iter()
        .map(|g| {
            if g.id == m1.vdot_one {
                Polynomial::generator(m1.vdot_one).sub(&cert.zeta)
            } else {
                Polynomial::generator(g.id)
            }
        })
        .collect();
    let map = algebra_map(&source, &m1.model, values)?;
    if let Some(generator) = dga_map_defect(&map, &source, &m1.model)? {
        return Err(Error::Internal(format!(
            "splitting map fails to commute with d at {generator}"
        )));
    }
    if !linear_part(&map, &source, &m1.model).is_isomorphism() {
        return Err(Error::Internal(
            "splitting map linear part is not invertible".into(),
        ));
    }
    Ok(SplittingIso {
        source,
        s_id: m1.vdot_one,
        map,
    })
}

/// JSON dump of the certificate: formatted polynomials and per-layer
/// verdicts.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateExport {
    pub name: String,
    pub valid: bool,
    pub eta: String,
    pub xi: String,
    pub alpha: String,
    pub mu: String,
    pub zeta: String,
    pub alpha_residual: String,
    pub mu_residual: String,
    pub zeta_residual: String,
    pub cubic_dimension: usize,
    pub layer_dimensions: Vec<usize>,
    pub layers: Vec<LayerExport>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LayerExport {
    pub layer: usize,
    pub projection_residual: String,
    pub derived_residual: String,
    pub xi_coefficient_residual: String,
    pub dmu_decomposition_residual: String,
    pub partial_injective: bool,
}

pub fn export_certificate(
    m1: &MinimalK1,
    cert: &SplittingCertificate,
    name: &str,
) -> CertificateExport {
    let fmt = |p: &Polynomial| m1.model.format_poly(p);
    CertificateExport {
        name: name.into(),
        valid: cert.is_valid(),
        eta: fmt(&cert.eta),
        xi: fmt(&cert.xi),
        alpha: fmt(&cert.alpha),
        mu: fmt(&cert.mu),
        zeta: fmt(&cert.zeta),
        alpha_residual: fmt(&cert.alpha_residual),
        mu_residual: fmt(&cert.mu_residual),
        zeta_residual: fmt(&cert.zeta_residual),
        cubic_dimension: cert.decomposition.cubic_dimension,
        layer_dimensions: cert.decomposition.layer_dimensions.clone(),
        layers: cert
            .layers
            .iter()
            .map(|l| LayerExport {
                layer: l.layer,
                projection_residual: fmt(&l.projection_residual),
                derived_residual: fmt(&l.derived_residual),
                xi_coefficient_residual: fmt(&l.xi_coefficient_residual),
                dmu_decomposition_residual: fmt(&l.dmu_decomposition_residual),
                partial_injective: l.partial_injective,
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bs_models::minimal_k1;
    use crate::poincare::parse_and_validate;
    use crate::ringgen;

    fn setup(desc: crate::poincare::RingDescription) -> (PoincareData, MinimalK1) {
        let pd = parse_and_validate(&desc).unwrap();
        let m1 = minimal_k1(&pd).unwrap();
        (pd, m1)
    }

    #[test]
    fn cp2_certificate_is_vacuous_and_valid() {
        let (pd, m1) = setup(ringgen::cp2());
        let cert = build_certificate(&pd, &m1).unwrap();
        assert!(cert.xi.is_zero());
        assert!(cert.mu.is_zero());
        assert!(cert.layers.is_empty());
        assert!(cert.is_valid());
        // ζ = ¼(v⊙x₂)(u⊗x₂) and dα = η².
        let x2 = pd.basis.of_degree(2)[0];
        let expected = m1
            .model
            .mul(
                &Polynomial::generator(m1.vdot_of[&x2]),
                &ugen(&m1, x2),
            )
            .unwrap()
            .scale(&frac(1, 4));
        assert_eq!(cert.zeta, expected);
    }

    #[test]
    fn cp3_certificate_valid_with_one_layer() {
        let (pd, m1) = setup(ringgen::cp3());
        let ob = ordered_bhat(&pd).unwrap();
        assert_eq!(ob.layers(), 1);
        // λ(x₂) = 3(3−2)/3 · ε(x₄) = 1 on CP³.
        let x2 = pd.basis.of_degree(2)[0];
        assert_eq!(lambda_of(&pd, x2).unwrap(), scalar(1));
        assert_eq!(
            lambda_of(&pd, pd.hat(x2).unwrap()).unwrap(),
            scalar(-1)
        );
        let cert = build_certificate(&pd, &m1).unwrap();
        assert!(!cert.xi.is_zero());
        assert!(cert.is_valid(), "{:?}", export_certificate(&m1, &cert, "cp3"));
    }

    #[test]
    fn cp2xcp2_certificate_valid_with_two_layers() {
        let (pd, m1) = setup(ringgen::cp2xcp2());
        let cert = build_certificate(&pd, &m1).unwrap();
        assert_eq!(cert.layers.len(), 2);
        assert!(cert.is_valid());
        assert_eq!(
            cert.decomposition.cubic_dimension,
            cert.decomposition.layer_dimensions.iter().sum::<usize>()
        );
    }

    #[test]
    fn s3xs3_certificate_valid_odd_middle() {
        let (pd, m1) = setup(ringgen::s3xs3());
        let cert = build_certificate(&pd, &m1).unwrap();
        assert!(cert.is_valid());
        // Middle-degree classes carry λ = 0.
        for &x in pd.basis.of_degree(3) {
            assert!(lambda_of(&pd, x).unwrap().is_zero());
        }
    }

    #[test]
    fn partial_matches_case_analysis_on_cp3() {
        // ∂_i on (u⊗x₁)(u⊗x₂)(u⊗θ_i): coefficient 1, 2 or 3 depending on
        // how many factors equal θ_i.
        let (pd, m1) = setup(ringgen::cp3());
        let ob = ordered_bhat(&pd).unwrap();
        let theta = ob.theta[0];
        let hat = pd.hat(theta).unwrap();
        let u_t = ugen(&m1, theta);
        let u_h = ugen(&m1, hat);
        // (u⊗x̂)(u⊗θ): distinct factors, θ once.
        let p = m1.model.mul(&u_h, &u_t).unwrap();
        let expected = u_h.clone();
        assert_eq!(partial_layer(&m1, &ob, 1, &p).unwrap(), expected);
        // (u⊗θ)²(u⊗x̂): θ twice → coefficient 2.
        let p = m1
            .model
            .mul_all(&[&u_t, &u_t, &u_h])
            .unwrap();
        let expected = m1.model.mul(&u_t, &u_h).unwrap().scale(&scalar(2));
        assert_eq!(partial_layer(&m1, &ob, 1, &p).unwrap(), expected);
    }

    #[test]
    fn lambda_sum_is_three() {
        for desc in [ringgen::cp3(), ringgen::cp2xcp2(), ringgen::s3xs3()] {
            let pd = parse_and_validate(&desc).unwrap();
            let violations = check_lambda_sum(&pd).unwrap();
            assert!(violations.is_empty(), "{}: {violations:?}", desc.name);
        }
    }

    #[test]
    fn splitting_iso_verifies() {
        for desc in [ringgen::cp2(), ringgen::cp3(), ringgen::s2xs2()] {
            let (_pd, m1) = {
                let pd = parse_and_validate(&desc).unwrap();
                let m1 = minimal_k1(&pd).unwrap();
                (pd, m1)
            };
            let pd = parse_and_validate(&desc).unwrap();
            let cert = build_certificate(&pd, &m1).unwrap();
            let iso = build_splitting_iso(&m1, &cert).unwrap();
            // f(s) = v⊙1 − ζ has unit linear coefficient on v⊙1.
            assert_eq!(
                iso.map.values[iso.s_id].linear_coefficient(m1.vdot_one),
                scalar(1)
            );
        }
    }

    #[test]
    fn projection_rejects_non_cubic_input() {
        let (pd, m1) = setup(ringgen::cp3());
        let ob = ordered_bhat(&pd).unwrap();
        let junk = Polynomial::generator(m1.vdot_one);
        assert!(project_layer(&m1, &ob, 1, &junk).is_err());
    }
}
