//! Rational Poincaré-duality cohomology rings: ingestion, validation, the
//! epsilon pairing table and the canonical homology basis with its duality
//! involution.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmatrix::QMatrix;
use crate::scalar::{format_scalar, parse_scalar, Scalar};

/// On-disk ring description (see the corpus files for examples).
///
/// Products may list only one orientation of each unordered pair; the other
/// is inferred by graded commutativity. Omitted products are zero, except
/// unit products which are always inferred.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RingDescription {
    pub name: String,
    pub dimension: i64,
    pub generators: Vec<GeneratorSpec>,
    pub products: Vec<ProductSpec>,
    pub fundamental_class: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub label: String,
    pub degree: i64,
}

/// `[a, b, {e: "p/q", ...}]` meaning `a * b = sum p/q * e`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProductSpec(pub String, pub String, pub BTreeMap<String, String>);

impl RingDescription {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("ring description serializes")
    }
}

/// A cohomology class index into the ring's basis table.
pub type ClassIdx = usize;

/// Validated cohomology ring with full structure-constant table.
#[derive(Clone, Debug)]
pub struct CohomologyRing {
    pub name: String,
    /// Formal dimension 2n.
    pub dimension: i64,
    pub classes: Vec<GeneratorSpec>,
    pub by_degree: BTreeMap<i64, Vec<ClassIdx>>,
    pub unit: ClassIdx,
    pub top: ClassIdx,
    /// Full product table: (a, b) -> sparse coordinates of a*b.
    products: BTreeMap<(ClassIdx, ClassIdx), Vec<(ClassIdx, Scalar)>>,
}

impl CohomologyRing {
    /// Coordinates of the product a*b over the class basis.
    pub fn product(&self, a: ClassIdx, b: ClassIdx) -> &[(ClassIdx, Scalar)] {
        self.products
            .get(&(a, b))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn product_coefficient(&self, a: ClassIdx, b: ClassIdx, e: ClassIdx) -> Scalar {
        self.product(a, b)
            .iter()
            .find(|(i, _)| *i == e)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Scalar::zero)
    }

    pub fn degree(&self, a: ClassIdx) -> i64 {
        self.classes[a].degree
    }

    pub fn basis_of(&self, degree: i64) -> &[ClassIdx] {
        self.by_degree.get(&degree).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn rank(&self, degree: i64) -> usize {
        self.basis_of(degree).len()
    }
}

/// Element of the canonical homology basis, stored as coordinates over the
/// formal duals of the input cohomology basis in its degree.
#[derive(Clone, Debug)]
pub struct CanonicalElement {
    pub label: String,
    pub degree: i64,
    /// Coordinates over `ring.basis_of(degree)` duals, in input order.
    pub coords: Vec<Scalar>,
}

pub type BasisIdx = usize;

#[derive(Clone, Debug)]
pub struct CanonicalBasis {
    pub elements: Vec<CanonicalElement>,
    pub by_degree: BTreeMap<i64, Vec<BasisIdx>>,
    pub unit: BasisIdx,
    pub w: BasisIdx,
    /// Change-of-basis matrix per degree: columns are canonical elements
    /// expressed in the input dual basis.
    pub change: BTreeMap<i64, QMatrix>,
    /// Sparse epsilon table over the canonical basis.
    eps: BTreeMap<(BasisIdx, BasisIdx, BasisIdx), Scalar>,
    hat: Vec<Option<BasisIdx>>,
    eps_of: Vec<Option<Scalar>>,
}

/// Validated bundle: ring + canonical basis + derived degree data.
#[derive(Clone, Debug)]
pub struct PoincareData {
    pub ring: CohomologyRing,
    pub basis: CanonicalBasis,
    /// Half dimension n.
    pub n: i64,
}

pub fn parse_and_validate(desc: &RingDescription) -> Result<PoincareData> {
    let ring = build_ring(desc)?;
    validate_ring(ring)
}

fn build_ring(desc: &RingDescription) -> Result<CohomologyRing> {
    let mut diagnostics = Vec::new();
    if desc.dimension <= 0 || desc.dimension % 2 != 0 {
        return Err(Error::Validation(vec![format!(
            "dimension must be a positive even integer, got {}",
            desc.dimension
        )]));
    }
    let mut by_degree: BTreeMap<i64, Vec<ClassIdx>> = BTreeMap::new();
    let mut labels = BTreeMap::new();
    for (idx, g) in desc.generators.iter().enumerate() {
        if labels.insert(g.label.clone(), idx).is_some() {
            diagnostics.push(format!("duplicate generator label {}", g.label));
        }
        if g.degree < 0 || g.degree > desc.dimension {
            diagnostics.push(format!(
                "generator {} has degree {} outside 0..={}",
                g.label, g.degree, desc.dimension
            ));
        }
        by_degree.entry(g.degree).or_default().push(idx);
    }
    if !diagnostics.is_empty() {
        return Err(Error::Validation(diagnostics));
    }

    let unit = match by_degree.get(&0).map(Vec::as_slice) {
        Some([u]) => *u,
        _ => {
            return Err(Error::Validation(vec![
                "degree-0 basis must consist of exactly one class (the unit)".into(),
            ]))
        }
    };
    let top = match by_degree.get(&desc.dimension).map(Vec::as_slice) {
        Some([t]) => *t,
        _ => {
            return Err(Error::Validation(vec![format!(
                "top degree {} basis must consist of exactly one class",
                desc.dimension
            )]))
        }
    };
    if desc.generators[top].label != desc.fundamental_class {
        return Err(Error::Validation(vec![format!(
            "fundamental_class {:?} is not the top-degree generator {:?}",
            desc.fundamental_class, desc.generators[top].label
        )]));
    }

    let mut products: BTreeMap<(ClassIdx, ClassIdx), Vec<(ClassIdx, Scalar)>> = BTreeMap::new();
    let mut given: BTreeMap<(ClassIdx, ClassIdx), Vec<(ClassIdx, Scalar)>> = BTreeMap::new();
    for ProductSpec(a, b, terms) in &desc.products {
        let &ai = labels
            .get(a)
            .ok_or_else(|| Error::Parse(format!("unknown label {a:?} in products")))?;
        let &bi = labels
            .get(b)
            .ok_or_else(|| Error::Parse(format!("unknown label {b:?} in products")))?;
        let mut coords = Vec::new();
        for (e, coeff) in terms {
            let &ei = labels
                .get(e)
                .ok_or_else(|| Error::Parse(format!("unknown label {e:?} in products")))?;
            let c = parse_scalar(coeff)?;
            if !c.is_zero() {
                coords.push((ei, c));
            }
        }
        coords.sort_by_key(|(i, _)| *i);
        if given.insert((ai, bi), coords).is_some() {
            diagnostics.push(format!("product [{a}, {b}] listed twice"));
        }
    }

    // Complete the table: unit products, then graded commutativity.
    let count = desc.generators.len();
    for a in 0..count {
        for b in 0..count {
            let key = (a, b);
            let inferred: Vec<(ClassIdx, Scalar)> = if a == unit {
                vec![(b, Scalar::one())]
            } else if b == unit {
                vec![(a, Scalar::one())]
            } else if let Some(v) = given.get(&key) {
                v.clone()
            } else if let Some(v) = given.get(&(b, a)) {
                let sign = if (desc.generators[a].degree * desc.generators[b].degree) % 2 == 0 {
                    Scalar::one()
                } else {
                    -Scalar::one()
                };
                v.iter().map(|(i, c)| (*i, c * &sign)).collect()
            } else {
                Vec::new()
            };
            if let Some(explicit) = given.get(&key) {
                if a == unit || b == unit {
                    if *explicit != inferred {
                        diagnostics.push(format!(
                            "unit product [{}, {}] conflicts with the unit axiom",
                            desc.generators[a].label, desc.generators[b].label
                        ));
                    }
                }
            }
            if !inferred.is_empty() {
                products.insert(key, inferred);
            }
        }
    }
    // Both orientations given: must agree with graded commutativity.
    for (&(a, b), v) in &given {
        if let Some(w) = given.get(&(b, a)) {
            if a < b {
                let sign = if (desc.generators[a].degree * desc.generators[b].degree) % 2 == 0 {
                    Scalar::one()
                } else {
                    -Scalar::one()
                };
                let flipped: Vec<(ClassIdx, Scalar)> =
                    w.iter().map(|(i, c)| (*i, c * &sign)).collect();
                if *v != flipped {
                    diagnostics.push(format!(
                        "products [{}, {}] and [{}, {}] violate graded commutativity",
                        desc.generators[a].label,
                        desc.generators[b].label,
                        desc.generators[b].label,
                        desc.generators[a].label
                    ));
                }
            }
        }
    }
    if !diagnostics.is_empty() {
        return Err(Error::Validation(diagnostics));
    }

    Ok(CohomologyRing {
        name: desc.name.clone(),
        dimension: desc.dimension,
        classes: desc.generators.clone(),
        by_degree,
        unit,
        top,
        products,
    })
}

/// Runs every structural check; returns the validated bundle or the full
/// list of failures.
pub fn validate_ring(ring: CohomologyRing) -> Result<PoincareData> {
    let mut diagnostics = Vec::new();
    let dim = ring.dimension;
    let n = dim / 2;

    for bad_degree in [1, dim - 1] {
        if ring.rank(bad_degree) != 0 {
            diagnostics.push(format!("degree-{bad_degree} basis must be empty"));
        }
    }

    // Product degrees.
    for (&(a, b), coords) in &ring.products {
        let expected = ring.degree(a) + ring.degree(b);
        for (e, c) in coords {
            if !c.is_zero() && ring.degree(*e) != expected {
                diagnostics.push(format!(
                    "product [{}, {}] hits {} of degree {} (expected {})",
                    ring.classes[a].label,
                    ring.classes[b].label,
                    ring.classes[*e].label,
                    ring.degree(*e),
                    expected
                ));
            }
        }
    }

    // Graded commutativity of the completed table.
    let count = ring.classes.len();
    for a in 0..count {
        for b in 0..count {
            let sign = if (ring.degree(a) * ring.degree(b)) % 2 == 0 {
                Scalar::one()
            } else {
                -Scalar::one()
            };
            for e in 0..count {
                let lhs = ring.product_coefficient(a, b, e);
                let rhs = ring.product_coefficient(b, a, e) * &sign;
                if lhs != rhs {
                    diagnostics.push(format!(
                        "graded commutativity fails at ({}, {}) -> {}",
                        ring.classes[a].label, ring.classes[b].label, ring.classes[e].label
                    ));
                }
            }
        }
    }

    // Associativity over all basis triples.
    for a in 0..count {
        for b in 0..count {
            for c in 0..count {
                if ring.degree(a) + ring.degree(b) + ring.degree(c) > dim {
                    continue;
                }
                let mut lhs: BTreeMap<ClassIdx, Scalar> = BTreeMap::new();
                for (ab, cab) in ring.product(a, b) {
                    for (e, ce) in ring.product(*ab, c) {
                        *lhs.entry(*e).or_insert_with(Scalar::zero) += cab * ce;
                    }
                }
                let mut rhs: BTreeMap<ClassIdx, Scalar> = BTreeMap::new();
                for (bc, cbc) in ring.product(b, c) {
                    for (e, ce) in ring.product(a, *bc) {
                        *rhs.entry(*e).or_insert_with(Scalar::zero) += cbc * ce;
                    }
                }
                lhs.retain(|_, v| !v.is_zero());
                rhs.retain(|_, v| !v.is_zero());
                if lhs != rhs {
                    diagnostics.push(format!(
                        "associativity fails at ({}, {}, {})",
                        ring.classes[a].label, ring.classes[b].label, ring.classes[c].label
                    ));
                }
            }
        }
    }

    // Poincaré duality: every pairing matrix H^i x H^{2n-i} -> H^{2n}
    // nondegenerate.
    for i in 0..=dim {
        let rows = ring.basis_of(i);
        let cols = ring.basis_of(dim - i);
        if rows.len() != cols.len() {
            diagnostics.push(format!(
                "rank mismatch: dim H^{i} = {} but dim H^{} = {}",
                rows.len(),
                dim - i,
                cols.len()
            ));
            continue;
        }
        if rows.is_empty() {
            continue;
        }
        let pairing = QMatrix::from_fn(rows.len(), cols.len(), |r, c| {
            ring.product_coefficient(rows[r], cols[c], ring.top)
        });
        if !pairing.is_invertible() {
            diagnostics.push(format!("pairing H^{i} x H^{} is singular", dim - i));
        }
    }

    if !diagnostics.is_empty() {
        return Err(Error::Validation(diagnostics));
    }

    let basis = build_canonical_basis(&ring)?;
    Ok(PoincareData { ring, basis, n })
}

/// epsilon over the input dual basis: `<b* cup a*, c>` read straight from
/// the structure constants with the order swap preserved.
fn epsilon_input(ring: &CohomologyRing, a: ClassIdx, b: ClassIdx, c: ClassIdx) -> Scalar {
    ring.product_coefficient(b, a, c)
}

fn build_canonical_basis(ring: &CohomologyRing) -> Result<CanonicalBasis> {
    let dim = ring.dimension;
    let n = dim / 2;
    let mut elements: Vec<CanonicalElement> = Vec::new();
    let mut by_degree: BTreeMap<i64, Vec<BasisIdx>> = BTreeMap::new();
    let mut change: BTreeMap<i64, QMatrix> = BTreeMap::new();

    let push = |elements: &mut Vec<CanonicalElement>,
                    by_degree: &mut BTreeMap<i64, Vec<BasisIdx>>,
                    e: CanonicalElement| {
        let idx = elements.len();
        by_degree.entry(e.degree).or_default().push(idx);
        elements.push(e);
        idx
    };

    let unit = push(
        &mut elements,
        &mut by_degree,
        CanonicalElement {
            label: "1".into(),
            degree: 0,
            coords: vec![Scalar::one()],
        },
    );
    change.insert(0, QMatrix::identity(1));

    // Low degrees 2..n-1: keep the dualized input basis.
    for degree in 2..n {
        let input = ring.basis_of(degree);
        if input.is_empty() {
            continue;
        }
        for (p, &cls) in input.iter().enumerate() {
            let mut coords = vec![Scalar::zero(); input.len()];
            coords[p] = Scalar::one();
            push(
                &mut elements,
                &mut by_degree,
                CanonicalElement {
                    label: ring.classes[cls].label.clone(),
                    degree,
                    coords,
                },
            );
        }
        change.insert(degree, QMatrix::identity(input.len()));
    }

    // Middle degree: congruence-normalize the Gram matrix.
    let middle = ring.basis_of(n);
    if !middle.is_empty() {
        let gram = QMatrix::from_fn(middle.len(), middle.len(), |p, q| {
            epsilon_input(ring, middle[p], middle[q], ring.top)
        });
        let (cob, _normal) = if n % 2 == 0 {
            gram.symmetric_diagonalize().ok_or_else(|| {
                Error::Internal(format!(
                    "middle-degree Gram matrix of {} failed symmetric diagonalization",
                    ring.name
                ))
            })?
        } else {
            gram.skew_symplectic_form().ok_or_else(|| {
                Error::Internal(format!(
                    "middle-degree Gram matrix of {} failed symplectic reduction",
                    ring.name
                ))
            })?
        };
        let unchanged = cob == QMatrix::identity(middle.len());
        // epsilon is built from the *dual* basis, so it transforms
        // contravariantly: with homology coordinates X the new pairing is
        // X^{-1} M X^{-T}. Storing X = (C^T)^{-1} turns that into C^T M C,
        // the congruence normal form computed above.
        let cob = cob.transpose().inverse().ok_or_else(|| {
            Error::Internal("congruence matrix is singular".into())
        })?;
        for p in 0..middle.len() {
            let coords: Vec<Scalar> = (0..middle.len()).map(|r| cob.get(r, p).clone()).collect();
            let label = if unchanged {
                ring.classes[middle[p]].label.clone()
            } else {
                format!("h{n}_{}", p + 1)
            };
            push(
                &mut elements,
                &mut by_degree,
                CanonicalElement {
                    label,
                    degree: n,
                    coords,
                },
            );
        }
        change.insert(n, cob);
    }

    // High degrees 2n-i for i = 2..n-1: Poincaré duals of the low basis.
    for degree in 2..n {
        let low = ring.basis_of(degree);
        if low.is_empty() {
            continue;
        }
        let high_degree = dim - degree;
        let high = ring.basis_of(high_degree);
        // Want epsilon(x_p, PD(x_q), w) = delta_{pq} over the new duals.
        // With X the homology coordinates and G the input pairing, the new
        // pairing is G X^{-T}, so X = G^T: PD(x_p) has coordinates row p
        // of G.
        let gram = QMatrix::from_fn(low.len(), high.len(), |p, q| {
            epsilon_input(ring, low[p], high[q], ring.top)
        });
        if gram.inverse().is_none() {
            return Err(Error::Internal(format!(
                "degree-{degree} duality pairing of {} became singular after validation",
                ring.name
            )));
        }
        let cob = gram.transpose();
        for p in 0..low.len() {
            let coords: Vec<Scalar> = (0..high.len()).map(|r| cob.get(r, p).clone()).collect();
            push(
                &mut elements,
                &mut by_degree,
                CanonicalElement {
                    label: format!("PD({})", ring.classes[low[p]].label),
                    degree: high_degree,
                    coords,
                },
            );
        }
        change.insert(high_degree, cob);
    }

    let w = push(
        &mut elements,
        &mut by_degree,
        CanonicalElement {
            label: "w".into(),
            degree: dim,
            coords: vec![Scalar::one()],
        },
    );
    change.insert(dim, QMatrix::identity(1));

    // Inverse change-of-basis per degree, for the dual cohomology basis.
    let mut inv_change: BTreeMap<i64, QMatrix> = BTreeMap::new();
    for (&deg, c) in &change {
        let inv = c.inverse().ok_or_else(|| {
            Error::Internal(format!("change of basis in degree {deg} is singular"))
        })?;
        inv_change.insert(deg, inv);
    }

    // epsilon over the canonical basis.
    let mut eps: BTreeMap<(BasisIdx, BasisIdx, BasisIdx), Scalar> = BTreeMap::new();
    let degree_list: Vec<i64> = by_degree.keys().copied().collect();
    for &di in &degree_list {
        for &dj in &degree_list {
            let dk = di + dj;
            if !by_degree.contains_key(&dk) {
                continue;
            }
            let rows_i = ring.basis_of(di);
            let rows_j = ring.basis_of(dj);
            let rows_k = ring.basis_of(dk);
            let d_i = &inv_change[&di];
            let d_j = &inv_change[&dj];
            let c_k = &change[&dk];
            for (pi, &p) in by_degree[&di].iter().enumerate() {
                for (qi, &q) in by_degree[&dj].iter().enumerate() {
                    for (ri, &r) in by_degree[&dk].iter().enumerate() {
                        let mut total = Scalar::zero();
                        for a in 0..rows_i.len() {
                            let fa = d_i.get(pi, a);
                            if fa.is_zero() {
                                continue;
                            }
                            for b in 0..rows_j.len() {
                                let fb = d_j.get(qi, b);
                                if fb.is_zero() {
                                    continue;
                                }
                                for c in 0..rows_k.len() {
                                    let fc = c_k.get(c, ri);
                                    if fc.is_zero() {
                                        continue;
                                    }
                                    let base =
                                        epsilon_input(ring, rows_i[a], rows_j[b], rows_k[c]);
                                    if !base.is_zero() {
                                        total += fa * fb * fc * base;
                                    }
                                }
                            }
                        }
                        if !total.is_zero() {
                            eps.insert((p, q, r), total);
                        }
                    }
                }
            }
        }
    }

    // Duality involution on the interior basis.
    let mut hat = vec![None; elements.len()];
    let mut eps_of = vec![None; elements.len()];
    for (x, elem) in elements.iter().enumerate() {
        if elem.degree == 0 || elem.degree == dim {
            continue;
        }
        let partners: Vec<BasisIdx> = elements
            .iter()
            .enumerate()
            .filter(|(y, _)| {
                eps.get(&(x, *y, w))
                    .map(|v| !v.is_zero())
                    .unwrap_or(false)
            })
            .map(|(y, _)| y)
            .collect();
        match partners.as_slice() {
            [y] => {
                if elements[*y].degree != dim - elem.degree {
                    return Err(Error::Internal(format!(
                        "dual of {} has degree {}, expected {}",
                        elem.label,
                        elements[*y].degree,
                        dim - elem.degree
                    )));
                }
                hat[x] = Some(*y);
                eps_of[x] = Some(eps[&(x, *y, w)].clone());
            }
            _ => {
                return Err(Error::Internal(format!(
                    "element {} pairs with {} basis elements, expected exactly one",
                    elem.label,
                    partners.len()
                )))
            }
        }
    }
    for (x, h) in hat.iter().enumerate() {
        if let Some(y) = h {
            if hat[*y] != Some(x) {
                return Err(Error::Internal(format!(
                    "duality involution is not an involution at {}",
                    elements[x].label
                )));
            }
        }
    }
    // Lemma-level sanity pinned at construction: eps(x) = 1 below the middle.
    for (x, elem) in elements.iter().enumerate() {
        if elem.degree > 0 && elem.degree < n {
            if eps_of[x] != Some(Scalar::one()) {
                return Err(Error::Internal(format!(
                    "eps({}) = {} below the middle degree, expected 1",
                    elem.label,
                    format_scalar(eps_of[x].as_ref().unwrap())
                )));
            }
        }
    }

    Ok(CanonicalBasis {
        elements,
        by_degree,
        unit,
        w,
        change,
        eps,
        hat,
        eps_of,
    })
}

impl CanonicalBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn degree(&self, x: BasisIdx) -> i64 {
        self.elements[x].degree
    }

    pub fn label(&self, x: BasisIdx) -> &str {
        &self.elements[x].label
    }

    pub fn of_degree(&self, degree: i64) -> &[BasisIdx] {
        self.by_degree.get(&degree).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn epsilon(&self, x: BasisIdx, y: BasisIdx, z: BasisIdx) -> Scalar {
        self.eps
            .get(&(x, y, z))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    /// Interior basis elements 0 < |x| < 2n, in degree-major order.
    pub fn bhat(&self) -> Vec<BasisIdx> {
        self.by_degree
            .iter()
            .filter(|(deg, _)| **deg > 0 && **deg < self.elements[self.w].degree)
            .flat_map(|(_, v)| v.iter().copied())
            .collect()
    }
}

impl PoincareData {
    pub fn dimension(&self) -> i64 {
        self.ring.dimension
    }

    pub fn epsilon(&self, x: BasisIdx, y: BasisIdx, z: BasisIdx) -> Scalar {
        self.basis.epsilon(x, y, z)
    }

    pub fn by_label(&self, label: &str) -> Result<BasisIdx> {
        self.basis
            .elements
            .iter()
            .position(|e| e.label == label)
            .ok_or_else(|| Error::Structural(format!("unknown basis label {label:?}")))
    }

    /// The duality partner of an interior basis element.
    pub fn hat(&self, x: BasisIdx) -> Result<BasisIdx> {
        self.basis.hat[x].ok_or_else(|| {
            Error::Structural(format!(
                "hat is only defined on the interior basis, not {}",
                self.basis.label(x)
            ))
        })
    }

    /// eps(x) = epsilon(x, hat(x), w).
    pub fn eps_of(&self, x: BasisIdx) -> Result<Scalar> {
        self.basis.eps_of[x].clone().ok_or_else(|| {
            Error::Structural(format!(
                "eps is only defined on the interior basis, not {}",
                self.basis.label(x)
            ))
        })
    }

    /// True iff every cohomology class below the top degree is
    /// indecomposable (product span is zero in each interior degree).
    pub fn is_primitive(&self) -> bool {
        let dim = self.ring.dimension;
        for degree in 1..dim {
            let target = self.ring.basis_of(degree);
            if target.is_empty() {
                continue;
            }
            for (&(a, b), coords) in self.ring.products.iter() {
                if self.ring.degree(a) > 0
                    && self.ring.degree(b) > 0
                    && self.ring.degree(a) + self.ring.degree(b) == degree
                    && coords.iter().any(|(_, c)| !c.is_zero())
                {
                    return false;
                }
            }
        }
        true
    }

    /// Least degree d >= n with nonzero cohomology.
    pub fn d_of_x(&self) -> i64 {
        (self.n..=self.ring.dimension)
            .find(|&d| self.ring.rank(d) > 0)
            .expect("top class always exists")
    }

    /// Lemma-style associativity of epsilon over all basis 4-tuples:
    /// sum_y eps(x1,x2,y) eps(y,x3,x4) = sum_z eps(x2,x3,z) eps(x1,z,x4).
    pub fn check_epsilon_associativity(&self) -> Vec<String> {
        let mut violations = Vec::new();
        let count = self.basis.len();
        for x1 in 0..count {
            for x2 in 0..count {
                for x3 in 0..count {
                    for x4 in 0..count {
                        let lhs: Scalar = (0..count)
                            .map(|y| {
                                self.basis.epsilon(x1, x2, y) * self.basis.epsilon(y, x3, x4)
                            })
                            .sum();
                        let rhs: Scalar = (0..count)
                            .map(|z| {
                                self.basis.epsilon(x2, x3, z) * self.basis.epsilon(x1, z, x4)
                            })
                            .sum();
                        if lhs != rhs {
                            violations.push(format!(
                                "associativity identity fails at ({}, {}, {}, {})",
                                self.basis.label(x1),
                                self.basis.label(x2),
                                self.basis.label(x3),
                                self.basis.label(x4)
                            ));
                        }
                    }
                }
            }
        }
        violations
    }

    /// Degree-vanishing of epsilon outside |x| + |y| = |z|.
    pub fn check_epsilon_degree_support(&self) -> Vec<String> {
        let mut violations = Vec::new();
        for (&(x, y, z), v) in &self.basis.eps {
            if !v.is_zero()
                && self.basis.degree(x) + self.basis.degree(y) != self.basis.degree(z)
            {
                violations.push(format!(
                    "epsilon({}, {}, {}) nonzero outside the degree constraint",
                    self.basis.label(x),
                    self.basis.label(y),
                    self.basis.label(z)
                ));
            }
        }
        violations
    }
}

pub fn validate_description(desc: &RingDescription) -> Result<PoincareData> {
    parse_and_validate(desc)
}
