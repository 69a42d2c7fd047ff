//! Concrete components of the operads Lie, Assoc, Comm, Poiss_d, Gerst
//! (= Poiss_1) and BV_d (d odd): bases, symmetric-group actions, composition,
//! and the morphism chain Assoc -> Comm -> Poiss_d -> BV_d.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::One;

use crate::algebra::{self, Element, Term};
use crate::combinat::{set_partitions, subsets, permutations};
use crate::error::{Error, Result};
use crate::graded_lie::{multilinear_basis, Generator, LieWord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Lie,
    Assoc,
    Comm,
    Poiss,
    BV,
}

impl Family {
    fn chain_position(&self) -> Option<u8> {
        match self {
            Family::Assoc => Some(0),
            Family::Comm => Some(1),
            Family::Poiss => Some(2),
            Family::BV => Some(3),
            Family::Lie => None,
        }
    }
}

/// Identifies one operad family. The bracket has degree `-d`; Assoc and
/// Comm carry no bracket and ignore `d`. Gerst is Poiss with d = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OperadId {
    pub family: Family,
    pub d: i64,
    pub with_unit_component: bool,
}

impl OperadId {
    pub fn new(family: Family, d: i64) -> Result<Self> {
        if family == Family::BV && d.rem_euclid(2) == 0 {
            return Err(Error::EvenBvParameter(d));
        }
        let d = match family {
            Family::Assoc | Family::Comm => 0,
            _ => d,
        };
        Ok(OperadId { family, d, with_unit_component: family != Family::Lie })
    }

    pub fn lie() -> Self {
        OperadId { family: Family::Lie, d: 0, with_unit_component: false }
    }

    pub fn assoc() -> Self {
        OperadId { family: Family::Assoc, d: 0, with_unit_component: true }
    }

    pub fn comm() -> Self {
        OperadId { family: Family::Comm, d: 0, with_unit_component: true }
    }

    pub fn poiss(d: i64) -> Self {
        OperadId { family: Family::Poiss, d, with_unit_component: true }
    }

    pub fn gerst() -> Self {
        Self::poiss(1)
    }

    pub fn bv(d: i64) -> Result<Self> {
        Self::new(Family::BV, d)
    }

    fn is_symmetric_product(&self) -> bool {
        !matches!(self.family, Family::Assoc)
    }
}

/// One basis vector: a (star-)partition of the labels with one canonical
/// bracket word per block. The factor sequence is the order data; for the
/// symmetric families it is normalized to blocks sorted by least label, for
/// Assoc it is the monomial itself.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DiagramTerm(pub Term);

impl DiagramTerm {
    pub fn blocks(&self) -> Vec<BTreeSet<u32>> {
        self.0
            .factors
            .iter()
            .map(|w| w.labels().into_iter().collect())
            .collect()
    }

    pub fn stars(&self) -> BTreeSet<u32> {
        self.0
            .factors
            .iter()
            .flat_map(|w| w.0.iter())
            .filter(|g| g.starred)
            .map(|g| g.label)
            .collect()
    }

    pub fn degree(&self, d: i64) -> i64 {
        self.0.degree(d)
    }

    pub fn complexity(&self) -> usize {
        self.0.complexity()
    }

    pub fn arity(&self) -> usize {
        self.0.arity()
    }

    pub fn has_unstarred_singleton(&self) -> bool {
        self.0.has_unstarred_singleton()
    }
}

/// An exact linear combination of basis terms of one operad component, all of
/// the same homological degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperadElement {
    pub operad: OperadId,
    pub arity: usize,
    pub element: Element,
}

impl OperadElement {
    pub fn zero(operad: OperadId, arity: usize) -> Self {
        OperadElement { operad, arity, element: Element::zero(operad.d) }
    }

    pub fn from_term(operad: OperadId, arity: usize, t: Term) -> Self {
        OperadElement { operad, arity, element: Element::from_term(operad.d, t) }
    }

    pub fn identity(operad: OperadId) -> Self {
        let g = Generator::new(1, 0);
        OperadElement {
            operad,
            arity: 1,
            element: Element::from_term(operad.d, Term { factors: vec![LieWord(vec![g])] }),
        }
    }

    pub fn add(&mut self, other: &OperadElement) {
        assert_eq!(self.operad, other.operad);
        assert_eq!(self.arity, other.arity);
        self.element.add(&other.element);
    }

    pub fn scale(&mut self, c: &BigInt) {
        self.element.scale(c);
    }

    pub fn is_zero(&self) -> bool {
        self.element.is_zero()
    }

    /// Homological degree; error if not homogeneous (the zero element reports
    /// degree 0).
    pub fn degree(&self) -> Result<i64> {
        if self.element.is_zero() {
            return Ok(0);
        }
        self.element.degree().ok_or(Error::NotHomogeneous)
    }

    /// The total-space grading |x| = degree + arity - 1.
    pub fn pipe_degree(&self) -> Result<i64> {
        Ok(self.degree()? + self.arity as i64 - 1)
    }

    /// deg = |x| + 1.
    pub fn total_degree(&self) -> Result<i64> {
        Ok(self.pipe_degree()? + 1)
    }

    pub fn terms(&self) -> impl Iterator<Item = (DiagramTerm, &BigInt)> {
        self.element.terms.iter().map(|(t, c)| (DiagramTerm(t.clone()), c))
    }
}

/// The ordered basis of one operad component.
pub fn component_basis(operad: OperadId, n: usize) -> Result<Vec<DiagramTerm>> {
    if operad.family == Family::BV && operad.d.rem_euclid(2) == 0 {
        return Err(Error::EvenBvParameter(operad.d));
    }
    let labels: Vec<u32> = (1..=n as u32).collect();
    if n == 0 {
        return Ok(if operad.with_unit_component {
            vec![DiagramTerm(Term::empty())]
        } else {
            Vec::new()
        });
    }
    let mut out = Vec::new();
    match operad.family {
        Family::Lie => {
            let gens: Vec<Generator> = labels.iter().map(|&l| Generator::new(l, 0)).collect();
            for w in multilinear_basis(&gens, operad.d)? {
                out.push(DiagramTerm(Term { factors: vec![w] }));
            }
        }
        Family::Assoc => {
            for perm in permutations(&labels) {
                let factors: Vec<LieWord> = perm
                    .iter()
                    .map(|&l| LieWord(vec![Generator::new(l, 0)]))
                    .collect();
                out.push(DiagramTerm(Term { factors }));
            }
        }
        Family::Comm => {
            let factors: Vec<LieWord> = labels
                .iter()
                .map(|&l| LieWord(vec![Generator::new(l, 0)]))
                .collect();
            out.push(DiagramTerm(Term { factors }));
        }
        Family::Poiss => {
            for partition in set_partitions(&labels) {
                push_partition_terms(operad.d, &partition, &BTreeSet::new(), &mut out)?;
            }
        }
        Family::BV => {
            for partition in set_partitions(&labels) {
                for star_vec in subsets(&labels) {
                    let stars: BTreeSet<u32> = star_vec.into_iter().collect();
                    push_partition_terms(operad.d, &partition, &stars, &mut out)?;
                }
            }
        }
    }
    Ok(out)
}

fn push_partition_terms(
    d: i64,
    partition: &[Vec<u32>],
    stars: &BTreeSet<u32>,
    out: &mut Vec<DiagramTerm>,
) -> Result<()> {
    // canonical basis words for each block, blocks ordered by least label
    let mut blocks: Vec<&Vec<u32>> = partition.iter().collect();
    blocks.sort_by_key(|b| b[0]);
    let mut per_block: Vec<Vec<LieWord>> = Vec::with_capacity(blocks.len());
    for block in &blocks {
        let gens: Vec<Generator> = block
            .iter()
            .map(|&l| {
                if stars.contains(&l) {
                    Generator { label: l, degree: -d, starred: true }
                } else {
                    Generator::new(l, 0)
                }
            })
            .collect();
        per_block.push(multilinear_basis(&gens, d)?);
    }
    // odometer over per-block word choices, lexicographic
    let mut idx = vec![0usize; per_block.len()];
    loop {
        let factors: Vec<LieWord> = idx
            .iter()
            .enumerate()
            .map(|(b, &i)| per_block[b][i].clone())
            .collect();
        out.push(DiagramTerm(Term { factors }));
        let mut pos = per_block.len();
        loop {
            if pos == 0 {
                return Ok(());
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < per_block[pos].len() {
                break;
            }
            idx[pos] = 0;
            if pos == 0 {
                return Ok(());
            }
        }
    }
}

/// Map degree -> count over the component basis.
pub fn graded_dimensions(operad: OperadId, n: usize) -> Result<BTreeMap<i64, usize>> {
    let mut out = BTreeMap::new();
    for t in component_basis(operad, n)? {
        *out.entry(t.degree(operad.d)).or_insert(0) += 1;
    }
    Ok(out)
}

/// Relabel by a permutation of {1..n} and recanonicalize. `perm[i]` is the
/// image of label i+1.
pub fn sym_action(perm: &[u32], x: &OperadElement) -> Result<OperadElement> {
    if perm.len() != x.arity {
        return Err(Error::ArityMismatch { expected: x.arity, got: perm.len() });
    }
    let d = x.operad.d;
    let relabel = |g: &Generator| Generator { label: perm[(g.label - 1) as usize], ..*g };
    let mut out = OperadElement::zero(x.operad, x.arity);
    if x.operad.is_symmetric_product() {
        out.element = algebra::substitute(&x.element, &|g: &Generator| {
            Element::from_generator(d, relabel(g))
        });
    } else {
        // associative monomials permute their letters in place
        for (t, c) in &x.element.terms {
            let factors: Vec<LieWord> = t
                .factors
                .iter()
                .map(|w| LieWord(w.0.iter().map(|g| relabel(g)).collect()))
                .collect();
            out.element.add_term(Term { factors }, c.clone());
        }
    }
    Ok(out)
}

/// Operadic composition: substitute y_k for the k-th input of x, renumbering
/// the labels of the y's consecutively, then expand and recanonicalize. For
/// BV, a starred input applies the delta operator to its argument.
pub fn compose(x: &OperadElement, ys: &[OperadElement]) -> Result<OperadElement> {
    if ys.len() != x.arity {
        return Err(Error::ArityMismatch { expected: x.arity, got: ys.len() });
    }
    for y in ys {
        if y.operad != x.operad {
            return Err(Error::OperadMismatch);
        }
    }
    let d = x.operad.d;
    let mut offsets = Vec::with_capacity(ys.len());
    let mut acc = 0usize;
    for y in ys {
        offsets.push(acc);
        acc += y.arity;
    }
    let result_arity = acc;
    let mut out = OperadElement::zero(x.operad, result_arity);

    if x.operad.family == Family::Assoc {
        // substitute words into words, distributing over term choices
        for (t, c) in &x.element.terms {
            let slot_order: Vec<u32> = t.factors.iter().map(|w| w.0[0].label).collect();
            let mut partial: Vec<(Vec<LieWord>, BigInt)> = vec![(Vec::new(), c.clone())];
            for &slot in &slot_order {
                let y = &ys[(slot - 1) as usize];
                let off = offsets[(slot - 1) as usize] as u32;
                let mut next = Vec::new();
                for (yt, yc) in &y.element.terms {
                    for (prefix, pc) in &partial {
                        let mut word_list = prefix.clone();
                        for w in &yt.factors {
                            word_list.push(LieWord(
                                w.0.iter().map(|g| Generator { label: g.label + off, ..*g }).collect(),
                            ));
                        }
                        next.push((word_list, pc * yc));
                    }
                }
                partial = next;
            }
            for (factors, coeff) in partial {
                out.element.add_term(Term { factors }, coeff);
            }
        }
        return Ok(out);
    }

    // shifted copies of the arguments, one per slot
    let shifted: Vec<Element> = ys
        .iter()
        .zip(&offsets)
        .map(|(y, &off)| {
            let mut e = Element::zero(d);
            for (t, c) in &y.element.terms {
                let factors: Vec<LieWord> = t
                    .factors
                    .iter()
                    .map(|w| {
                        LieWord(
                            w.0.iter()
                                .map(|g| Generator { label: g.label + off as u32, ..*g })
                                .collect(),
                        )
                    })
                    .collect();
                e.add_term(Term { factors }, c.clone());
            }
            e
        })
        .collect();
    let arg_degrees: Vec<i64> = ys.iter().map(|y| y.degree()).collect::<Result<Vec<_>>>()?;

    // Sign rule: a basis term carries its bracket nodes and stars as odd
    // orientation symbols ordered by the written form, and the composite
    // interleaves the arguments' symbol blocks into the slot positions.
    // Moving the block of y_k out of the tensor order costs deg(y_k) against
    // every symbol of x written after slot k, plus deg(y_k) deg(y_k') for
    // every textually inverted slot pair.
    for (t, c) in &x.element.terms {
        // slots in textual order with the symbol count of each generator
        let mut slots_textual: Vec<usize> = Vec::with_capacity(x.arity);
        let mut sym_after = vec![0i64; x.arity + 1];
        let mut total_sym = 0i64;
        for w in &t.factors {
            for (gi, g) in w.0.iter().enumerate() {
                slots_textual.push((g.label - 1) as usize);
                let mut own = 0i64;
                if gi > 0 {
                    own += 1;
                }
                if g.starred {
                    own += 1;
                }
                sym_after[slots_textual.len()] = own;
                total_sym += own;
            }
        }
        // sym_after[p] currently holds the own-symbol count of the p-th
        // textual generator; convert to "symbols strictly after position p"
        let mut running = total_sym;
        let mut suffix = vec![0i64; slots_textual.len()];
        for p in 0..slots_textual.len() {
            running -= sym_after[p + 1];
            suffix[p] = running;
        }
        let mut exponent = 0i64;
        for (p, &k) in slots_textual.iter().enumerate() {
            exponent += arg_degrees[k] * suffix[p];
            for (q, &k2) in slots_textual.iter().enumerate() {
                if q > p && k2 < k {
                    exponent += arg_degrees[k] * arg_degrees[k2];
                }
            }
        }
        let sign = if exponent.rem_euclid(2) == 0 {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        let single = Element::from_term(d, t.clone());
        let mut v = algebra::substitute(&single, &|g: &Generator| {
            let val = &shifted[(g.label - 1) as usize];
            if g.starred {
                algebra::delta(val)
            } else {
                val.clone()
            }
        });
        v.scale(&(c * sign));
        out.element.add(&v);
    }
    Ok(out)
}

/// Image of x under the natural morphism chain
/// Assoc -> Comm -> Poiss_d -> BV_d (the last arrow only for odd d).
pub fn morphism_image(target: OperadId, x: &OperadElement) -> Result<OperadElement> {
    let src = x
        .operad
        .family
        .chain_position()
        .ok_or(Error::NoSuchMorphism)?;
    let tgt = target.family.chain_position().ok_or(Error::NoSuchMorphism)?;
    if src > tgt {
        return Err(Error::NoSuchMorphism);
    }
    if target.family == Family::BV && target.d.rem_euclid(2) == 0 {
        return Err(Error::EvenBvParameter(target.d));
    }
    if src == tgt {
        if x.operad != target {
            return Err(Error::NoSuchMorphism);
        }
        return Ok(x.clone());
    }
    // every arrow of the chain forgets word order (Assoc -> Comm) or widens
    // the target basis, so the underlying terms map through unchanged up to
    // the canonical factor sort (degrees are all zero here: no signs)
    let mut out = OperadElement::zero(target, x.arity);
    for (t, c) in &x.element.terms {
        let (sorted, sign) = algebra::canonical_sort(target.d, t.factors.clone());
        out.element.add_term(sorted, sign * c);
    }
    Ok(out)
}

/// The multiplication element m: the image of x1 x2 in this operad.
pub fn multiplication(operad: OperadId) -> Result<OperadElement> {
    if operad.family.chain_position().is_none() {
        return Err(Error::NoMultiplication);
    }
    let factors = vec![
        LieWord(vec![Generator::new(1, 0)]),
        LieWord(vec![Generator::new(2, 0)]),
    ];
    Ok(OperadElement::from_term(operad, 2, Term { factors }))
}

/// Koszul sign of permuting graded objects: the sign accumulated when the
/// sequence (1..n) with parities `par` is rearranged so that position i holds
/// the object previously at `src[i]`.
pub fn koszul_permutation_sign(src: &[usize], par: &[i64]) -> BigInt {
    // count weighted inversions of the source sequence
    let mut sign = 0i64;
    for i in 0..src.len() {
        for j in i + 1..src.len() {
            if src[i] > src[j] {
                sign += par[src[i]] * par[src[j]];
            }
        }
    }
    if sign.rem_euclid(2) == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn term_of(words: &[&[u32]]) -> Term {
        Term {
            factors: words
                .iter()
                .map(|w| LieWord(w.iter().map(|&l| Generator::new(l, 0)).collect()))
                .collect(),
        }
    }

    #[test]
    fn basis_sizes() {
        // Poiss_d(n) has n! terms, BV_d(n) has 2^n n!
        for n in 0..=5usize {
            let fact: usize = (1..=n).product();
            assert_eq!(component_basis(OperadId::poiss(2), n).unwrap().len(), fact.max(1));
            assert_eq!(
                component_basis(OperadId::bv(1).unwrap(), n).unwrap().len(),
                (1usize << n) * fact.max(1)
            );
            assert_eq!(component_basis(OperadId::assoc(), n).unwrap().len(), fact.max(1));
            assert_eq!(component_basis(OperadId::comm(), n).unwrap().len(), 1);
        }
        assert_eq!(component_basis(OperadId::lie(), 0).unwrap().len(), 0);
        assert_eq!(component_basis(OperadId::lie(), 4).unwrap().len(), 6);
    }

    #[test]
    fn poiss3_graded_dimensions() {
        // Poiss_2(3): degrees {0:1, -2:3, -4:2} from (1+t^-2)(1+2t^-2)
        let dims = graded_dimensions(OperadId::poiss(2), 3).unwrap();
        let expected: BTreeMap<i64, usize> = [(0i64, 1), (-2, 3), (-4, 2)].into_iter().collect();
        assert_eq!(dims, expected);
        let dims1 = graded_dimensions(OperadId::poiss(2), 1).unwrap();
        assert_eq!(dims1, [(0i64, 1)].into_iter().collect());
    }

    #[test]
    fn bv2_graded_dimensions() {
        // BV_1(2): (1+t^-1)^3 = {0:1, -1:3, -2:3, -3:1}
        let dims = graded_dimensions(OperadId::bv(1).unwrap(), 2).unwrap();
        let expected: BTreeMap<i64, usize> =
            [(0i64, 1), (-1, 3), (-2, 3), (-3, 1)].into_iter().collect();
        assert_eq!(dims, expected);
    }

    #[test]
    fn bv_requires_odd_d() {
        assert_eq!(OperadId::bv(2), Err(Error::EvenBvParameter(2)));
    }

    #[test]
    fn each_basis_term_sits_in_one_summand() {
        // direct sum decompositions: the (star-)partition of a term is unique
        for n in 1..=4usize {
            let mut seen = BTreeMap::new();
            for t in component_basis(OperadId::bv(1).unwrap(), n).unwrap() {
                let key = (t.blocks(), t.stars());
                *seen.entry(key).or_insert(0usize) += 1;
            }
            let total: usize = seen.values().sum();
            assert_eq!(total, (1usize << n) * (1..=n).product::<usize>());
        }
    }

    #[test]
    fn identity_permutation_fixes_elements() {
        let op = OperadId::poiss(1);
        let x = OperadElement::from_term(op, 3, term_of(&[&[1, 2], &[3]]));
        let y = sym_action(&[1, 2, 3], &x).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn swap_negates_even_chord() {
        // (1 2) on [x1,x2] in Lie(2) with even bracket degree: antisymmetry
        let op = OperadId::poiss(0);
        let x = OperadElement::from_term(op, 2, term_of(&[&[1, 2]]));
        let y = sym_action(&[2, 1], &x).unwrap();
        let mut expected = x.clone();
        expected.scale(&BigInt::from(-1));
        assert_eq!(y, expected);
    }

    #[test]
    fn group_action_composes() {
        // (1 2 3) twice equals (1 3 2) once on Poiss_1(3) basis elements
        let op = OperadId::poiss(1);
        let rho = [2u32, 3, 1]; // 1->2, 2->3, 3->1
        let rho2 = [3u32, 1, 2];
        for t in component_basis(op, 3).unwrap() {
            let x = OperadElement::from_term(op, 3, t.0);
            let once = sym_action(&rho, &sym_action(&rho, &x).unwrap()).unwrap();
            let twice = sym_action(&rho2, &x).unwrap();
            assert_eq!(once, twice);
        }
    }

    #[test]
    fn unit_laws() {
        let op = OperadId::poiss(2);
        let id = OperadElement::identity(op);
        let x = OperadElement::from_term(op, 3, term_of(&[&[1, 3], &[2]]));
        let ids: Vec<OperadElement> = (0..3).map(|_| id.clone()).collect();
        assert_eq!(compose(&x, &ids).unwrap(), x);
        assert_eq!(compose(&id, &[x.clone()]).unwrap(), x);
    }

    #[test]
    fn leibniz_composition_in_poiss0() {
        // compose([x1,x2]; x1 x2, x3) = x1 [x2,x3] + [x1,x3] x2
        let op = OperadId::poiss(0);
        let x = OperadElement::from_term(op, 2, term_of(&[&[1, 2]]));
        let y1 = OperadElement::from_term(op, 2, term_of(&[&[1], &[2]]));
        let y2 = OperadElement::from_term(op, 1, term_of(&[&[1]]));
        let r = compose(&x, &[y1, y2]).unwrap();
        let mut expected = OperadElement::zero(op, 3);
        expected.element.add_term(term_of(&[&[1], &[2, 3]]), BigInt::one());
        expected.element.add_term(term_of(&[&[1, 3], &[2]]), BigInt::one());
        assert_eq!(r, expected);
    }

    #[test]
    fn bv_delta_of_product() {
        // compose(delta(x1); x1 x2) = delta(x1) x2 + x1 delta(x2) + [x1,x2]
        let op = OperadId::bv(1).unwrap();
        let d = op.d;
        let delta_x1 = OperadElement::from_term(
            op,
            1,
            Term { factors: vec![LieWord(vec![Generator { label: 1, degree: -d, starred: true }])] },
        );
        let y = OperadElement::from_term(op, 2, term_of(&[&[1], &[2]]));
        let r = compose(&delta_x1, &[y]).unwrap();
        let star = |l: u32| Generator { label: l, degree: -d, starred: true };
        let mut expected = OperadElement::zero(op, 2);
        expected.element.add_term(
            Term { factors: vec![LieWord(vec![star(1)]), LieWord(vec![Generator::new(2, 0)])] },
            BigInt::one(),
        );
        expected.element.add_term(
            Term { factors: vec![LieWord(vec![Generator::new(1, 0)]), LieWord(vec![star(2)])] },
            BigInt::one(),
        );
        expected.element.add_term(
            Term { factors: vec![LieWord(vec![Generator::new(1, 0), Generator::new(2, 0)])] },
            BigInt::one(),
        );
        assert_eq!(r, expected);
    }

    #[test]
    fn morphisms_along_the_chain() {
        // Assoc -> Comm sends both orderings to the same product
        let a12 = OperadElement::from_term(OperadId::assoc(), 2, term_of(&[&[1], &[2]]));
        let a21 = OperadElement::from_term(OperadId::assoc(), 2, term_of(&[&[2], &[1]]));
        let c12 = morphism_image(OperadId::comm(), &a12).unwrap();
        let c21 = morphism_image(OperadId::comm(), &a21).unwrap();
        assert_eq!(c12, c21);

        // Comm -> Poiss_d: product of singletons
        let c = OperadElement::from_term(OperadId::comm(), 3, term_of(&[&[1], &[2], &[3]]));
        let p = morphism_image(OperadId::poiss(2), &c).unwrap();
        assert_eq!(p.element.terms.len(), 1);
        assert!(p.element.terms.contains_key(&term_of(&[&[1], &[2], &[3]])));

        // unit preservation along the composite arrow
        let id_a = OperadElement::identity(OperadId::assoc());
        let id_p = morphism_image(OperadId::poiss(2), &id_a).unwrap();
        assert_eq!(id_p, OperadElement::identity(OperadId::poiss(2)));

        // no arrow backwards
        let p2 = OperadElement::identity(OperadId::poiss(2));
        assert!(morphism_image(OperadId::assoc(), &p2).is_err());
        // Poiss -> BV requires odd d and is an inclusion of terms
        let g = OperadElement::from_term(OperadId::poiss(1), 2, term_of(&[&[1, 2]]));
        let b = morphism_image(OperadId::bv(1).unwrap(), &g).unwrap();
        assert_eq!(b.element.terms.len(), 1);
    }

    #[test]
    fn composition_associativity_samples() {
        let op = OperadId::poiss(1);
        let x = OperadElement::from_term(op, 2, term_of(&[&[1, 2]]));
        let y1 = OperadElement::from_term(op, 2, term_of(&[&[1], &[2]]));
        let y2 = OperadElement::from_term(op, 1, term_of(&[&[1]]));
        let z: Vec<OperadElement> = vec![
            OperadElement::from_term(op, 1, term_of(&[&[1]])),
            OperadElement::from_term(op, 2, term_of(&[&[1, 2]])),
            OperadElement::from_term(op, 1, term_of(&[&[1]])),
        ];
        // gamma(gamma(x; y1,y2); z1,z2,z3) = gamma(x; gamma(y1; z1,z2), gamma(y2; z3))
        let lhs = compose(&compose(&x, &[y1.clone(), y2.clone()]).unwrap(), &z).unwrap();
        let rhs = compose(
            &x,
            &[
                compose(&y1, &z[0..2].to_vec()).unwrap(),
                compose(&y2, &z[2..3].to_vec()).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn assoc_composition_concatenates() {
        let op = OperadId::assoc();
        let x = OperadElement::from_term(op, 2, term_of(&[&[2], &[1]]));
        let y1 = OperadElement::from_term(op, 2, term_of(&[&[1], &[2]]));
        let y2 = OperadElement::from_term(op, 2, term_of(&[&[2], &[1]]));
        // x = x2 x1; substitute y1 at slot 1 (labels 1,2), y2 at slot 2 (labels 3,4)
        // result: (y2 shifted) then (y1) = x4 x3 x1 x2
        let r = compose(&x, &[y1, y2]).unwrap();
        assert_eq!(r.element.terms.len(), 1);
        assert!(r.element.terms.contains_key(&term_of(&[&[4], &[3], &[1], &[2]])));
    }
}
