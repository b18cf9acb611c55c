//! Constructors for Poincaré-duality cohomology rings: the standard corpus
//! rings, product and connected-sum combinators, and a seeded random
//! generator used for randomized verification runs.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::poincare::{GeneratorSpec, ProductSpec, RingDescription};
use crate::qmatrix::QMatrix;
use crate::scalar::{format_scalar, scalar, Scalar};

/// Working representation while combining rings: a basis with the full
/// product table (both orientations, unit rows included).
#[derive(Clone, Debug)]
struct Block {
    classes: Vec<(String, i64)>,
    dimension: i64,
    products: BTreeMap<(usize, usize), Vec<(usize, Scalar)>>,
}

impl Block {
    fn unit(&self) -> usize {
        self.classes.iter().position(|(_, d)| *d == 0).unwrap()
    }

    fn top(&self) -> usize {
        self.classes
            .iter()
            .position(|(_, d)| *d == self.dimension)
            .unwrap()
    }

    fn product(&self, a: usize, b: usize) -> &[(usize, Scalar)] {
        self.products.get(&(a, b)).map(Vec::as_slice).unwrap_or(&[])
    }

    fn set_product(&mut self, a: usize, b: usize, coords: Vec<(usize, Scalar)>) {
        let coords: Vec<(usize, Scalar)> =
            coords.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        if coords.is_empty() {
            self.products.remove(&(a, b));
        } else {
            self.products.insert((a, b), coords);
        }
    }

    /// Fill in unit products and the graded-commutative mirror images so the
    /// table is closed under both orientations.
    fn complete(&mut self) {
        let count = self.classes.len();
        let unit = self.unit();
        for a in 0..count {
            self.set_product(unit, a, vec![(a, Scalar::one())]);
            self.set_product(a, unit, vec![(a, Scalar::one())]);
        }
        let keys: Vec<(usize, usize)> = self.products.keys().copied().collect();
        for (a, b) in keys {
            if self.products.contains_key(&(b, a)) {
                continue;
            }
            let sign = if (self.classes[a].1 * self.classes[b].1) % 2 == 0 {
                Scalar::one()
            } else {
                -Scalar::one()
            };
            let mirrored: Vec<(usize, Scalar)> = self
                .product(a, b)
                .iter()
                .map(|(e, c)| (*e, c * &sign))
                .collect();
            self.set_product(b, a, mirrored);
        }
    }

    fn to_description(&self, name: &str) -> RingDescription {
        // Sibling sub-blocks can produce identical labels; disambiguate.
        let mut seen: BTreeMap<String, u32> = BTreeMap::new();
        let labels: Vec<String> = self
            .classes
            .iter()
            .map(|(label, _)| {
                let count = seen.entry(label.clone()).or_insert(0);
                *count += 1;
                if *count == 1 {
                    label.clone()
                } else {
                    format!("{label}_{count}")
                }
            })
            .collect();
        let unit = self.unit();
        let mut products = Vec::new();
        for (&(a, b), coords) in &self.products {
            if a == unit || b == unit || a > b {
                continue;
            }
            let terms: BTreeMap<String, String> = coords
                .iter()
                .map(|(e, c)| (labels[*e].clone(), format_scalar(c)))
                .collect();
            if !terms.is_empty() {
                products.push(ProductSpec(labels[a].clone(), labels[b].clone(), terms));
            }
        }
        RingDescription {
            name: name.into(),
            dimension: self.dimension,
            generators: self
                .classes
                .iter()
                .enumerate()
                .map(|(i, (_, degree))| GeneratorSpec {
                    label: labels[i].clone(),
                    degree: *degree,
                })
                .collect(),
            products,
            fundamental_class: labels[self.top()].clone(),
        }
    }
}

/// Truncated polynomial algebra Q[t]/(t^{height+1}) with |t| = gen_degree.
fn truncated(label: &str, gen_degree: i64, height: u32) -> Block {
    assert!(gen_degree >= 2 && gen_degree % 2 == 0 && height >= 1);
    let classes: Vec<(String, i64)> = (0..=height)
        .map(|k| {
            let name = match k {
                0 => "1".to_string(),
                1 => label.to_string(),
                _ => format!("{label}{k}"),
            };
            (name, gen_degree * k as i64)
        })
        .collect();
    let mut block = Block {
        classes,
        dimension: gen_degree * height as i64,
        products: BTreeMap::new(),
    };
    for a in 1..=height as usize {
        for b in 1..=height as usize {
            if a + b <= height as usize {
                block.set_product(a, b, vec![(a + b, Scalar::one())]);
            }
        }
    }
    block.complete();
    block
}

/// Sphere cohomology: exterior on one generator of the given degree >= 2.
fn sphere_block(label: &str, degree: i64) -> Block {
    if degree % 2 == 0 {
        return truncated(label, degree, 1);
    }
    let mut block = Block {
        classes: vec![("1".into(), 0), (label.into(), degree)],
        dimension: degree,
        products: BTreeMap::new(),
    };
    block.complete();
    block
}

/// Tensor product with Koszul signs; labels of mixed classes are joined
/// with '*'.
fn tensor(a: &Block, b: &Block) -> Block {
    let mut classes = Vec::new();
    let index = |p: usize, q: usize| p * b.classes.len() + q;
    for (la, da) in &a.classes {
        for (lb, db) in &b.classes {
            let label = match (da, db) {
                (0, _) => lb.clone(),
                (_, 0) => la.clone(),
                _ => format!("{la}*{lb}"),
            };
            classes.push((label, da + db));
        }
    }
    let mut block = Block {
        classes,
        dimension: a.dimension + b.dimension,
        products: BTreeMap::new(),
    };
    for p1 in 0..a.classes.len() {
        for q1 in 0..b.classes.len() {
            for p2 in 0..a.classes.len() {
                for q2 in 0..b.classes.len() {
                    // (x1 (x) y1)(x2 (x) y2) = (-1)^{|y1||x2|} x1x2 (x) y1y2
                    let sign = if (b.classes[q1].1 * a.classes[p2].1) % 2 == 0 {
                        Scalar::one()
                    } else {
                        -Scalar::one()
                    };
                    let mut coords = Vec::new();
                    for (ea, ca) in a.product(p1, p2) {
                        for (eb, cb) in b.product(q1, q2) {
                            coords.push((index(*ea, *eb), ca * cb * &sign));
                        }
                    }
                    block.set_product(index(p1, q1), index(p2, q2), coords);
                }
            }
        }
    }
    block
}

/// Connected sum: interiors are glued side by side, both pairings land in a
/// shared top class, and cross products of interior classes vanish.
fn connected_sum(a: &Block, b: &Block) -> Block {
    assert_eq!(a.dimension, b.dimension);
    let a_top = a.top();
    let b_top = b.top();
    // New index layout: unit, interior of a, interior of b, top.
    let mut classes = vec![("1".to_string(), 0)];
    let mut a_map = vec![usize::MAX; a.classes.len()];
    let mut b_map = vec![usize::MAX; b.classes.len()];
    a_map[a.unit()] = 0;
    b_map[b.unit()] = 0;
    for (i, (label, degree)) in a.classes.iter().enumerate() {
        if *degree > 0 && *degree < a.dimension {
            a_map[i] = classes.len();
            classes.push((format!("{label}'"), *degree));
        }
    }
    for (i, (label, degree)) in b.classes.iter().enumerate() {
        if *degree > 0 && *degree < b.dimension {
            b_map[i] = classes.len();
            classes.push((format!("{label}''"), *degree));
        }
    }
    let top = classes.len();
    classes.push(("w".to_string(), a.dimension));
    a_map[a_top] = top;
    b_map[b_top] = top;

    let mut block = Block {
        classes,
        dimension: a.dimension,
        products: BTreeMap::new(),
    };
    for (source, map) in [(a, &a_map), (b, &b_map)] {
        for (&(p, q), coords) in &source.products {
            // Interior products only; the completed table restores unit rows.
            if source.classes[p].1 == 0
                || source.classes[q].1 == 0
                || source.classes[p].1 == source.dimension
                || source.classes[q].1 == source.dimension
            {
                continue;
            }
            block.set_product(
                map[p],
                map[q],
                coords.iter().map(|(e, c)| (map[*e], c.clone())).collect(),
            );
        }
    }
    block.complete();
    block
}

/// Apply an invertible change of basis in every interior degree. The unit
/// and the fundamental class are kept fixed.
fn change_basis(block: &Block, rng: &mut ChaCha8Rng) -> Block {
    let count = block.classes.len();
    let mut by_degree: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (i, (_, d)) in block.classes.iter().enumerate() {
        by_degree.entry(*d).or_default().push(i);
    }
    // Per-class transition columns: new_p = sum_q U[q][p] old_q within the
    // degree of p; identity outside interior degrees.
    let mut forward: BTreeMap<i64, QMatrix> = BTreeMap::new();
    let mut backward: BTreeMap<i64, QMatrix> = BTreeMap::new();
    for (&degree, members) in &by_degree {
        let k = members.len();
        let u = if degree == 0 || degree == block.dimension {
            QMatrix::identity(k)
        } else {
            random_unimodular(k, rng)
        };
        let inv = u.inverse().expect("unimodular matrices invert");
        forward.insert(degree, u);
        backward.insert(degree, inv);
    }

    let pos_in_degree = |i: usize| -> usize {
        by_degree[&block.classes[i].1].iter().position(|&j| j == i).unwrap()
    };

    let mut out = Block {
        classes: block
            .classes
            .iter()
            .enumerate()
            .map(|(i, (label, degree))| {
                if *degree == 0 || *degree == block.dimension {
                    (label.clone(), *degree)
                } else {
                    (format!("g{}_{}", degree, pos_in_degree(i) + 1), *degree)
                }
            })
            .collect(),
        dimension: block.dimension,
        products: BTreeMap::new(),
    };

    for p in 0..count {
        for q in 0..count {
            let dp = block.classes[p].1;
            let dq = block.classes[q].1;
            let dr = dp + dq;
            if !by_degree.contains_key(&dr) {
                continue;
            }
            let up = &forward[&dp];
            let uq = &forward[&dq];
            let br = &backward[&dr];
            let mut coords: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (ai, &a) in by_degree[&dp].iter().enumerate() {
                let fa = up.get(ai, pos_in_degree(p));
                if fa.is_zero() {
                    continue;
                }
                for (bi, &b) in by_degree[&dq].iter().enumerate() {
                    let fb = uq.get(bi, pos_in_degree(q));
                    if fb.is_zero() {
                        continue;
                    }
                    for (e, c) in block.product(a, b) {
                        let ei = pos_in_degree(*e);
                        for (ri, &r) in by_degree[&dr].iter().enumerate() {
                            let fr = br.get(ri, ei);
                            if !fr.is_zero() {
                                *coords.entry(r).or_insert_with(Scalar::zero) +=
                                    fa * fb * c * fr;
                            }
                        }
                    }
                }
            }
            out.set_product(p, q, coords.into_iter().collect());
        }
    }
    out
}

/// Random integer matrix with determinant +-1: a product of elementary row
/// operations applied to the identity.
fn random_unimodular(k: usize, rng: &mut ChaCha8Rng) -> QMatrix {
    let mut m = QMatrix::identity(k);
    if k < 2 {
        return m;
    }
    for _ in 0..(2 * k) {
        let i = rng.gen_range(0..k);
        let mut j = rng.gen_range(0..k);
        while j == i {
            j = rng.gen_range(0..k);
        }
        let c = scalar(rng.gen_range(-2..=2));
        // row_i += c * row_j
        for col in 0..k {
            let v = m.get(i, col).clone() + m.get(j, col) * &c;
            m.set(i, col, v);
        }
    }
    m
}

pub fn cp2() -> RingDescription {
    truncated("t", 2, 2).to_description("CP^2")
}

pub fn cp3() -> RingDescription {
    truncated("t", 2, 3).to_description("CP^3")
}

pub fn sphere(degree: i64) -> RingDescription {
    sphere_block("x", degree).to_description(&format!("S^{degree}"))
}

pub fn s2xs2() -> RingDescription {
    tensor(&sphere_block("a", 2), &sphere_block("b", 2)).to_description("S^2 x S^2")
}

pub fn s3xs3() -> RingDescription {
    tensor(&sphere_block("a", 3), &sphere_block("b", 3)).to_description("S^3 x S^3")
}

pub fn cp2xcp2() -> RingDescription {
    tensor(&truncated("s", 2, 2), &truncated("t", 2, 2)).to_description("CP^2 x CP^2")
}

/// Random block of the given even dimension, built from spheres, truncated
/// polynomial algebras and Koszul-signed products.
fn random_block(dimension: i64, rng: &mut ChaCha8Rng, depth: u32) -> Block {
    let mut options: Vec<u8> = Vec::new();
    options.push(0); // even sphere
    if dimension % 4 == 0 || dimension % 6 == 0 {
        options.push(1); // truncated polynomial algebra
    }
    if dimension >= 4 && depth < 3 {
        options.push(2); // product of two blocks
        options.push(2);
    }
    match *options.choose(rng).unwrap() {
        0 => sphere_block(&format!("x{dimension}"), dimension),
        1 => {
            // Pick (gen degree, height) with gen_degree * height = dimension.
            let mut choices = Vec::new();
            for e in (2..=dimension).step_by(2) {
                if dimension % e == 0 && dimension / e >= 2 {
                    choices.push((e, (dimension / e) as u32));
                }
            }
            match choices.as_slice().choose(rng) {
                Some(&(e, h)) => truncated(&format!("t{e}"), e, h),
                None => sphere_block(&format!("x{dimension}"), dimension),
            }
        }
        _ => {
            // Split off a factor; odd spheres allowed when the remainder
            // stays even-or-matching so the total is even and H^1 = 0.
            let mut splits = Vec::new();
            for d1 in 2..=dimension / 2 {
                let d2 = dimension - d1;
                if d2 < 2 {
                    continue;
                }
                // Avoid classes in degree 2n-1: a factor of degree d1 paired
                // with the other factor's unit would sit at d1 < 2n, fine;
                // the dangerous degree is 2n-1 which needs d1 + (d2 part).
                splits.push((d1, d2));
            }
            let &(d1, d2) = splits.as_slice().choose(rng).unwrap();
            let left = if d1 % 2 == 1 {
                sphere_block(&format!("y{d1}"), d1)
            } else {
                random_block(d1, rng, depth + 1)
            };
            let right = if d2 % 2 == 1 {
                sphere_block(&format!("z{d2}"), d2)
            } else {
                random_block(d2, rng, depth + 1)
            };
            tensor(&left, &right)
        }
    }
}

fn has_bad_degrees(block: &Block) -> bool {
    block
        .classes
        .iter()
        .any(|(_, d)| *d == 1 || *d == block.dimension - 1)
}

/// Deterministic random Poincaré-duality ring for a given seed. The formal
/// dimension is at most 8 and the output always passes validation.
pub fn random_ring(seed: u64) -> RingDescription {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let dimension = *[4, 6, 8].choose(&mut rng).unwrap();
        let summands = if dimension == 4 {
            rng.gen_range(1..=3)
        } else {
            rng.gen_range(1..=2)
        };
        let mut block = random_block(dimension, &mut rng, 0);
        for _ in 1..summands {
            let other = random_block(dimension, &mut rng, 0);
            if has_bad_degrees(&other) || has_bad_degrees(&block) {
                continue;
            }
            block = connected_sum(&block, &other);
        }
        if has_bad_degrees(&block) {
            continue;
        }
        if rng.gen_bool(0.7) {
            block = change_basis(&block, &mut rng);
        }
        return block.to_description(&format!("random-{seed}"));
    }
}
