//! Free graded-commutative algebras over Q: Koszul-sign monomial
//! normalization, sparse polynomials, derivations, differentials, algebra
//! maps and their linear parts.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::qmatrix::QMatrix;
use crate::scalar::{format_scalar, Scalar};

pub type GenId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub id: GenId,
    pub label: String,
    pub degree: i64,
}

/// Normal form of a product of generators: ids sorted ascending, repeated
/// ids encode powers. Odd-degree generators never repeat in a normal form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<GenId>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(Vec::new())
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Sparse polynomial: monomial -> nonzero coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Polynomial(pub BTreeMap<Monomial, Scalar>);

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial(BTreeMap::new())
    }

    pub fn one() -> Self {
        Polynomial::term(Monomial::unit(), Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Polynomial::term(Monomial::unit(), c)
    }

    pub fn term(m: Monomial, c: Scalar) -> Self {
        let mut map = BTreeMap::new();
        if !c.is_zero() {
            map.insert(m, c);
        }
        Polynomial(map)
    }

    pub fn generator(id: GenId) -> Self {
        Polynomial::term(Monomial(vec![id]), Scalar::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.0.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.0 {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.0 {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> Polynomial {
        if s.is_zero() {
            return Polynomial::zero();
        }
        Polynomial(self.0.iter().map(|(m, c)| (m.clone(), c * s)).collect())
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.0.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.0.iter()
    }

    /// Coefficient of the length-1 monomial on generator `id`.
    pub fn linear_coefficient(&self, id: GenId) -> Scalar {
        self.coefficient(&Monomial(vec![id]))
    }

    /// True when every monomial has at least two factors.
    pub fn is_decomposable(&self) -> bool {
        self.0.keys().all(|m| m.len() >= 2)
    }
}

/// Verdict of a Sullivan minimality check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Minimality {
    Minimal,
    NotMinimal { generator: String, reason: String },
    /// Degree-0 generators present; the criterion does not apply.
    NotApplicable,
}

impl Minimality {
    pub fn is_minimal(&self) -> bool {
        matches!(self, Minimality::Minimal)
    }
}

/// Degree-shifting map extended by the signed Leibniz rule
/// `D(ab) = D(a)b + (-1)^{|a|} a D(b)`.
#[derive(Clone, Debug)]
pub struct Derivation {
    pub shift: i64,
    /// Value on each generator, indexed by id; missing entries are zero.
    pub values: Vec<Polynomial>,
}

/// Degree-preserving algebra map given by its values on source generators.
#[derive(Clone, Debug)]
pub struct AlgebraMap {
    pub values: Vec<Polynomial>,
}

/// Per-degree matrices of the induced map on generator spaces.
#[derive(Clone, Debug)]
pub struct LinearPart {
    /// degree -> (matrix, source gen ids as columns, target gen ids as rows)
    pub blocks: BTreeMap<i64, (QMatrix, Vec<GenId>, Vec<GenId>)>,
}

impl LinearPart {
    pub fn matrix(&self, degree: i64) -> Option<&QMatrix> {
        self.blocks.get(&degree).map(|(m, _, _)| m)
    }

    /// True iff every per-degree block of degree <= bound is a square
    /// invertible matrix. Degrees with no generators count as invertible.
    pub fn is_isomorphism_through(&self, bound: i64) -> bool {
        self.blocks
            .iter()
            .filter(|(deg, _)| **deg <= bound)
            .all(|(_, (m, _, _))| m.is_invertible())
    }

    pub fn is_isomorphism(&self) -> bool {
        self.blocks.values().all(|(m, _, _)| m.is_invertible())
    }

    /// Least degree whose block is singular, if any.
    pub fn first_singular_degree(&self) -> Option<i64> {
        self.blocks
            .iter()
            .find(|(_, (m, _, _))| !m.is_invertible())
            .map(|(deg, _)| *deg)
    }
}

#[derive(Clone, Debug)]
pub struct FreeCGA {
    gens: Vec<Generator>,
    diff: Vec<Polynomial>,
}

impl FreeCGA {
    /// Creates the algebra with zero differential.
    pub fn new(gens: Vec<(String, i64)>) -> Result<Self> {
        let mut table = Vec::with_capacity(gens.len());
        for (id, (label, degree)) in gens.into_iter().enumerate() {
            if degree < 0 {
                return Err(Error::Structural(format!(
                    "generator {label} has negative degree {degree}"
                )));
            }
            if table.iter().any(|g: &Generator| g.label == label) {
                return Err(Error::Structural(format!("duplicate generator label {label}")));
            }
            table.push(Generator { id, label, degree });
        }
        let diff = vec![Polynomial::zero(); table.len()];
        Ok(FreeCGA { gens: table, diff })
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn generator(&self, id: GenId) -> Result<&Generator> {
        self.gens
            .get(id)
            .ok_or_else(|| Error::Structural(format!("foreign generator id {id}")))
    }

    pub fn find_generator(&self, label: &str) -> Option<&Generator> {
        self.gens.iter().find(|g| g.label == label)
    }

    /// Sets `d(generator) = value`, checking the value is homogeneous of
    /// degree `|generator| + 1` (or zero).
    pub fn set_differential(&mut self, id: GenId, value: Polynomial) -> Result<()> {
        let degree = self.generator(id)?.degree;
        if !value.is_zero() {
            match self.homogeneous_degree(&value)? {
                Some(d) if d == degree + 1 => {}
                other => {
                    return Err(Error::Structural(format!(
                        "differential of {} must raise degree by 1, got degree {:?}",
                        self.gens[id].label, other
                    )))
                }
            }
        }
        self.diff[id] = value;
        Ok(())
    }

    pub fn differential_of(&self, id: GenId) -> &Polynomial {
        &self.diff[id]
    }

    pub fn differential_as_derivation(&self) -> Derivation {
        Derivation {
            shift: 1,
            values: self.diff.clone(),
        }
    }

    pub fn monomial_degree(&self, m: &Monomial) -> Result<i64> {
        m.0.iter().try_fold(0i64, |acc, &id| {
            Ok(acc + self.generator(id)?.degree)
        })
    }

    /// Degree of a homogeneous polynomial; `Ok(None)` for zero, error when
    /// the polynomial mixes degrees.
    pub fn homogeneous_degree(&self, p: &Polynomial) -> Result<Option<i64>> {
        let mut degree = None;
        for (m, _) in p.terms() {
            let d = self.monomial_degree(m)?;
            match degree {
                None => degree = Some(d),
                Some(prev) if prev == d => {}
                Some(prev) => {
                    return Err(Error::Structural(format!(
                        "polynomial mixes degrees {prev} and {d}"
                    )))
                }
            }
        }
        Ok(degree)
    }

    /// Splits a polynomial into homogeneous components by degree.
    pub fn homogeneous_components(&self, p: &Polynomial) -> Result<BTreeMap<i64, Polynomial>> {
        let mut out: BTreeMap<i64, Polynomial> = BTreeMap::new();
        for (m, c) in p.terms() {
            let d = self.monomial_degree(m)?;
            out.entry(d)
                .or_insert_with(Polynomial::zero)
                .add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    /// Sorts a factor sequence into normal form, tracking the Koszul sign.
    /// Returns `None` when an odd-degree generator repeats.
    pub fn normalize_monomial(&self, factors: &[GenId]) -> Result<Option<(Scalar, Monomial)>> {
        let mut degs = Vec::with_capacity(factors.len());
        for &id in factors {
            degs.push(self.generator(id)?.degree);
        }
        let mut ids: Vec<GenId> = factors.to_vec();
        let mut negative = false;
        // Bubble sort; each adjacent transposition of degrees p, q
        // contributes (-1)^{pq}.
        let n = ids.len();
        for end in (1..n).rev() {
            for j in 0..end {
                if ids[j] > ids[j + 1] {
                    if degs[j] % 2 != 0 && degs[j + 1] % 2 != 0 {
                        negative = !negative;
                    }
                    ids.swap(j, j + 1);
                    degs.swap(j, j + 1);
                }
            }
        }
        for k in 1..n {
            if ids[k] == ids[k - 1] && degs[k] % 2 != 0 {
                return Ok(None);
            }
        }
        let sign = if negative {
            -Scalar::one()
        } else {
            Scalar::one()
        };
        Ok(Some((sign, Monomial(ids))))
    }

    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Result<Option<(Scalar, Monomial)>> {
        let mut factors = Vec::with_capacity(a.len() + b.len());
        factors.extend_from_slice(&a.0);
        factors.extend_from_slice(&b.0);
        self.normalize_monomial(&factors)
    }

    pub fn mul(&self, p: &Polynomial, q: &Polynomial) -> Result<Polynomial> {
        let mut out = Polynomial::zero();
        for (ma, ca) in p.terms() {
            for (mb, cb) in q.terms() {
                if let Some((sign, m)) = self.mul_monomials(ma, mb)? {
                    out.add_term(m, ca * cb * sign);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_all(&self, factors: &[&Polynomial]) -> Result<Polynomial> {
        let mut acc = Polynomial::one();
        for f in factors {
            acc = self.mul(&acc, f)?;
        }
        Ok(acc)
    }

    pub fn pow(&self, p: &Polynomial, n: u32) -> Result<Polynomial> {
        let mut acc = Polynomial::one();
        for _ in 0..n {
            acc = self.mul(&acc, p)?;
        }
        Ok(acc)
    }

    /// Extends `d` over a monomial by `D(ab) = D(a)b + (-1)^{|a|} a D(b)`.
    pub fn apply_derivation(&self, d: &Derivation, p: &Polynomial) -> Result<Polynomial> {
        let mut out = Polynomial::zero();
        for (m, c) in p.terms() {
            let mut prefix_degree = 0i64;
            for (pos, &id) in m.0.iter().enumerate() {
                let value = d
                    .values
                    .get(id)
                    .ok_or_else(|| Error::Structural(format!("foreign generator id {id}")))?;
                if !value.is_zero() {
                    let prefix = Polynomial::term(Monomial(m.0[..pos].to_vec()), Scalar::one());
                    let suffix = Polynomial::term(Monomial(m.0[pos + 1..].to_vec()), Scalar::one());
                    let mut piece = self.mul(&prefix, value)?;
                    piece = self.mul(&piece, &suffix)?;
                    let sign = if prefix_degree % 2 == 0 {
                        c.clone()
                    } else {
                        -c.clone()
                    };
                    out = out.add(&piece.scale(&sign));
                }
                prefix_degree += self.generator(id)?.degree;
            }
        }
        Ok(out)
    }

    pub fn differential(&self, p: &Polynomial) -> Result<Polynomial> {
        self.apply_derivation(&self.differential_as_derivation(), p)
    }

    /// Checks `d(d(g)) = 0` for every generator.
    pub fn check_d_squared(&self) -> Result<()> {
        for g in &self.gens {
            let dd = self.differential(&self.diff[g.id])?;
            if !dd.is_zero() {
                return Err(Error::Structural(format!(
                    "d^2 != 0 at generator {}: residual {}",
                    g.label,
                    self.format_poly(&dd)
                )));
            }
        }
        Ok(())
    }

    /// Sullivan minimality: every differential is decomposable and built
    /// from generators of strictly smaller degree.
    pub fn is_minimal(&self) -> Minimality {
        if self.gens.iter().any(|g| g.degree == 0) {
            return Minimality::NotApplicable;
        }
        for g in &self.gens {
            for (m, _) in self.diff[g.id].terms() {
                if m.len() < 2 {
                    return Minimality::NotMinimal {
                        generator: g.label.clone(),
                        reason: "differential has a linear term".into(),
                    };
                }
                for &id in &m.0 {
                    if self.gens[id].degree >= g.degree {
                        return Minimality::NotMinimal {
                            generator: g.label.clone(),
                            reason: format!(
                                "differential uses generator {} of degree >= {}",
                                self.gens[id].label, g.degree
                            ),
                        };
                    }
                }
            }
        }
        Minimality::Minimal
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        if m.is_unit() {
            return "1".into();
        }
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < m.len() {
            let id = m.0[i];
            let mut power = 1;
            while i + power < m.len() && m.0[i + power] == id {
                power += 1;
            }
            let label = &self.gens[id].label;
            if power == 1 {
                parts.push(format!("({label})"));
            } else {
                parts.push(format!("({label})^{power}"));
            }
            i += power;
        }
        parts.join("")
    }

    pub fn format_poly(&self, p: &Polynomial) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (m, c) in p.terms() {
            let cs = format_scalar(c);
            if m.is_unit() {
                parts.push(cs);
            } else if cs == "1" {
                parts.push(self.format_monomial(m));
            } else if cs == "-1" {
                parts.push(format!("-{}", self.format_monomial(m)));
            } else {
                parts.push(format!("{cs}·{}", self.format_monomial(m)));
            }
        }
        parts.join(" + ")
    }
}

/// Builds an algebra map after checking each generator image is homogeneous
/// of the same degree (or zero).
pub fn algebra_map(source: &FreeCGA, target: &FreeCGA, values: Vec<Polynomial>) -> Result<AlgebraMap> {
    if values.len() != source.generators().len() {
        return Err(Error::Structural(
            "algebra map must give a value for every source generator".into(),
        ));
    }
    for (id, value) in values.iter().enumerate() {
        if value.is_zero() {
            continue;
        }
        let expected = source.generators()[id].degree;
        match target.homogeneous_degree(value)? {
            Some(d) if d == expected => {}
            other => {
                return Err(Error::Structural(format!(
                    "image of {} must be homogeneous of degree {expected}, got {other:?}",
                    source.generators()[id].label
                )))
            }
        }
    }
    Ok(AlgebraMap { values })
}

pub fn apply_map(
    f: &AlgebraMap,
    _source: &FreeCGA,
    target: &FreeCGA,
    p: &Polynomial,
) -> Result<Polynomial> {
    let mut out = Polynomial::zero();
    for (m, c) in p.terms() {
        let mut acc = Polynomial::constant(c.clone());
        for &id in &m.0 {
            let value = f
                .values
                .get(id)
                .ok_or_else(|| Error::Structural(format!("foreign generator id {id}")))?;
            acc = target.mul(&acc, value)?;
        }
        out = out.add(&acc);
    }
    Ok(out)
}

pub fn compose_maps(
    first: &AlgebraMap,
    second: &AlgebraMap,
    source: &FreeCGA,
    middle: &FreeCGA,
    target: &FreeCGA,
) -> Result<AlgebraMap> {
    let values = first
        .values
        .iter()
        .map(|v| apply_map(second, middle, target, v))
        .collect::<Result<Vec<_>>>()?;
    algebra_map(source, target, values)
}

pub fn identity_map(a: &FreeCGA) -> AlgebraMap {
    AlgebraMap {
        values: a
            .generators()
            .iter()
            .map(|g| Polynomial::generator(g.id))
            .collect(),
    }
}

/// True iff `f` commutes with the differentials on every generator.
pub fn is_dga_map(f: &AlgebraMap, source: &FreeCGA, target: &FreeCGA) -> Result<bool> {
    for g in source.generators() {
        let lhs = target.differential(&f.values[g.id])?;
        let rhs = apply_map(f, source, target, source.differential_of(g.id))?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Generator that witnesses a dga-map failure, if any.
pub fn dga_map_defect(f: &AlgebraMap, source: &FreeCGA, target: &FreeCGA) -> Result<Option<String>> {
    for g in source.generators() {
        let lhs = target.differential(&f.values[g.id])?;
        let rhs = apply_map(f, source, target, source.differential_of(g.id))?;
        if lhs != rhs {
            return Ok(Some(g.label.clone()));
        }
    }
    Ok(None)
}

/// Per-degree matrices of the induced map on generator spaces, discarding
/// decomposable terms of the generator images.
pub fn linear_part(f: &AlgebraMap, source: &FreeCGA, target: &FreeCGA) -> LinearPart {
    let mut degrees: Vec<i64> = source
        .generators()
        .iter()
        .chain(target.generators())
        .map(|g| g.degree)
        .collect();
    degrees.sort_unstable();
    degrees.dedup();
    let mut blocks = BTreeMap::new();
    for degree in degrees {
        let src: Vec<GenId> = source
            .generators()
            .iter()
            .filter(|g| g.degree == degree)
            .map(|g| g.id)
            .collect();
        let tgt: Vec<GenId> = target
            .generators()
            .iter()
            .filter(|g| g.degree == degree)
            .map(|g| g.id)
            .collect();
        let matrix = QMatrix::from_fn(tgt.len(), src.len(), |r, c| {
            f.values[src[c]].linear_coefficient(tgt[r])
        });
        blocks.insert(degree, (matrix, src, tgt));
    }
    LinearPart { blocks }
}
