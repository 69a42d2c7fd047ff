//! Free graded Lie algebra machinery: canonical bases for multilinear
//! components and rewriting of arbitrary bracket words into that basis.
//!
//! The bracket has degree `-d`. All signs are driven by the reduced parity
//! eps(x) = (degree(x) + d) mod 2, for which the bracket is parity-additive
//! and satisfies the ordinary super antisymmetry and Jacobi identities:
//!
//!   [a,b] = -(-1)^{eps(a) eps(b)} [b,a]
//!   [a,[b,c]] = [[a,b],c] + (-1)^{eps(a) eps(b)} [b,[a,c]]
//!
//! Canonical basis: left-normed words [[..[x_{i1},x_{i2}],..],x_{ik}] with the
//! least label leading; there are (n-1)! of them on n labels.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::combinat::permutations;
use crate::error::{Error, Result};

/// A labeled formal variable with a homological degree. The star flag marks
/// delta-type generators for the callers that need them; it does not influence
/// signs beyond the degree the caller assigns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    pub label: u32,
    pub degree: i64,
    pub starred: bool,
}

impl Generator {
    pub fn new(label: u32, degree: i64) -> Self {
        Generator { label, degree, starred: false }
    }

    pub fn starred(label: u32, degree: i64) -> Self {
        Generator { label, degree, starred: true }
    }
}

/// A binary bracket word on generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LieTree {
    Leaf(Generator),
    Node(Box<LieTree>, Box<LieTree>),
}

impl LieTree {
    pub fn leaf(g: Generator) -> Self {
        LieTree::Leaf(g)
    }

    pub fn node(l: LieTree, r: LieTree) -> Self {
        LieTree::Node(Box::new(l), Box::new(r))
    }

    pub fn leaves(&self) -> Vec<Generator> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<Generator>) {
        match self {
            LieTree::Leaf(g) => out.push(*g),
            LieTree::Node(l, r) => {
                l.collect_leaves(out);
                r.collect_leaves(out);
            }
        }
    }
}

/// A canonical left-normed bracket word, stored as its leaf sequence. The
/// word (g1, g2, .., gk) denotes [[..[g1,g2],..],gk] and g1 carries the least
/// label.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LieWord(pub Vec<Generator>);

impl LieWord {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn labels(&self) -> Vec<u32> {
        self.0.iter().map(|g| g.label).collect()
    }

    pub fn min_label(&self) -> u32 {
        self.0[0].label
    }

    pub fn to_tree(&self) -> LieTree {
        let mut it = self.0.iter();
        let mut t = LieTree::leaf(*it.next().expect("empty word"));
        for g in it {
            t = LieTree::node(t, LieTree::leaf(*g));
        }
        t
    }

    /// Homological degree for a bracket of degree `-d`.
    pub fn degree(&self, d: i64) -> i64 {
        let gens: i64 = self.0.iter().map(|g| g.degree).sum();
        gens - d * (self.0.len() as i64 - 1)
    }

    /// Reduced parity: sum of (degree + d) over the generators, mod 2.
    pub fn eps(&self, d: i64) -> i64 {
        self.0.iter().map(|g| (g.degree + d).rem_euclid(2)).sum::<i64>() % 2
    }
}

/// A formal exact-coefficient combination of canonical words, all sharing one
/// label set and one bracket degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieElement {
    pub d: i64,
    pub terms: BTreeMap<LieWord, BigInt>,
}

impl LieElement {
    pub fn zero(d: i64) -> Self {
        LieElement { d, terms: BTreeMap::new() }
    }

    pub fn from_word(d: i64, w: LieWord) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(w, BigInt::one());
        LieElement { d, terms }
    }

    pub fn add_term(&mut self, w: LieWord, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(w).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove_entry_zero();
        }
    }

    pub fn add(&mut self, other: &LieElement) {
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c.clone());
        }
    }

    pub fn scale(&mut self, c: &BigInt) {
        if c.is_zero() {
            self.terms.clear();
            return;
        }
        for v in self.terms.values_mut() {
            *v *= c;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

trait RemoveZero {
    fn remove_entry_zero(&mut self);
}

impl RemoveZero for BTreeMap<LieWord, BigInt> {
    fn remove_entry_zero(&mut self) {
        self.retain(|_, v| !v.is_zero());
    }
}

fn eps_of(g: &Generator, d: i64) -> i64 {
    (g.degree + d).rem_euclid(2)
}

fn sign_pow(e: i64) -> BigInt {
    if e.rem_euclid(2) == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// The canonical basis of the multilinear component on the given generators:
/// all left-normed words with the least label leading, lexicographic on the
/// label sequence. Size (n-1)!.
pub fn multilinear_basis(generators: &[Generator], _d: i64) -> Result<Vec<LieWord>> {
    if generators.is_empty() {
        return Err(Error::EmptyComponent);
    }
    let mut gens = generators.to_vec();
    gens.sort();
    for w in gens.windows(2) {
        if w[0].label == w[1].label {
            return Err(Error::NotMultilinear(w[0].label));
        }
    }
    let head = gens[0];
    let rest = &gens[1..];
    let mut out = Vec::new();
    for perm in permutations(rest) {
        let mut word = Vec::with_capacity(gens.len());
        word.push(head);
        word.extend(perm);
        out.push(LieWord(word));
    }
    Ok(out)
}

/// Rewrite an arbitrary multilinear bracket word into the canonical basis.
pub fn canonicalize(d: i64, tree: &LieTree) -> Result<LieElement> {
    let leaves = tree.leaves();
    let mut seen = BTreeSet::new();
    for g in &leaves {
        if !seen.insert(g.label) {
            return Err(Error::NotMultilinear(g.label));
        }
    }
    Ok(canonicalize_unchecked(d, tree))
}

fn canonicalize_unchecked(d: i64, tree: &LieTree) -> LieElement {
    match tree {
        LieTree::Leaf(g) => LieElement::from_word(d, LieWord(vec![*g])),
        LieTree::Node(l, r) => {
            let el = canonicalize_unchecked(d, l);
            let er = canonicalize_unchecked(d, r);
            bracket_elements(&el, &er)
        }
    }
}

/// Graded Lie bracket of two canonical combinations (disjoint label sets).
pub fn lie_bracket(a: &LieElement, b: &LieElement) -> Result<LieElement> {
    assert_eq!(a.d, b.d, "bracket degree mismatch");
    let la: BTreeSet<u32> = a.terms.keys().flat_map(|w| w.labels()).collect();
    for w in b.terms.keys() {
        for l in w.labels() {
            if la.contains(&l) {
                return Err(Error::LabelOverlap(l));
            }
        }
    }
    Ok(bracket_elements(a, b))
}

pub(crate) fn bracket_elements(a: &LieElement, b: &LieElement) -> LieElement {
    let d = a.d;
    let mut out = LieElement::zero(d);
    for (wa, ca) in &a.terms {
        for (wb, cb) in &b.terms {
            let mut r = bracket_words(d, wa, wb);
            r.scale(&(ca * cb));
            out.add(&r);
        }
    }
    out
}

/// [a, b] for canonical words a, b with disjoint labels; result canonical.
fn bracket_words(d: i64, a: &LieWord, b: &LieWord) -> LieElement {
    if b.len() == 1 {
        let x = b.0[0];
        if a.min_label() < x.label {
            let mut word = a.0.clone();
            word.push(x);
            return LieElement::from_word(d, LieWord(word));
        }
        // [a, x] = -(-1)^{eps(a) eps(x)} [x, a]
        let mut r = bracket_min_leaf(d, x, a);
        r.scale(&-sign_pow(a.eps(d) * eps_of(&x, d)));
        return r;
    }
    // b = [bh, bl]:  [a,b] = [[a,bh],bl] - (-1)^{eps(bh) eps(bl)} [[a,bl],bh]
    let bh = LieWord(b.0[..b.len() - 1].to_vec());
    let bl = b.0[b.len() - 1];
    let bl_word = LieWord(vec![bl]);

    let inner1 = bracket_words(d, a, &bh);
    let mut t1 = bracket_element_word(d, &inner1, &bl_word);

    let inner2 = bracket_words(d, a, &bl_word);
    let mut t2 = bracket_element_word(d, &inner2, &bh);
    t2.scale(&-sign_pow(bh.eps(d) * eps_of(&bl, d)));

    t1.add(&t2);
    t1
}

fn bracket_element_word(d: i64, e: &LieElement, w: &LieWord) -> LieElement {
    let mut out = LieElement::zero(d);
    for (we, c) in &e.terms {
        let mut r = bracket_words(d, we, w);
        r.scale(c);
        out.add(&r);
    }
    out
}

/// [x, a] where the leaf x carries the least label overall; every resulting
/// word keeps x in the leading position.
fn bracket_min_leaf(d: i64, x: Generator, a: &LieWord) -> LieElement {
    if a.len() == 1 {
        return LieElement::from_word(d, LieWord(vec![x, a.0[0]]));
    }
    let ah = LieWord(a.0[..a.len() - 1].to_vec());
    let al = a.0[a.len() - 1];

    // [x,[ah,al]] = [[x,ah],al] - (-1)^{eps(ah) eps(al)} [[x,al],ah]
    let mut t1 = bracket_min_leaf(d, x, &ah);
    let mut appended = LieElement::zero(d);
    for (w, c) in &t1.terms {
        let mut word = w.0.clone();
        word.push(al);
        appended.add_term(LieWord(word), c.clone());
    }
    t1 = appended;

    let xa = LieWord(vec![x, al]);
    let mut t2 = bracket_element_word(d, &LieElement::from_word(d, xa), &ah);
    t2.scale(&-sign_pow(ah.eps(d) * eps_of(&al, d)));

    t1.add(&t2);
    t1
}

#[cfg(test)]
pub(crate) mod assoc_oracle {
    //! Independent oracle: the free Lie superalgebra embeds into the tensor
    //! algebra via [a,b] = ab - (-1)^{eps(a) eps(b)} ba, and distinct
    //! multilinear elements have distinct expansions. This path shares no
    //! code with the canonicalization rewriting.

    use super::*;

    pub type AssocExpansion = BTreeMap<Vec<u32>, BigInt>;

    pub fn expand_tree(d: i64, tree: &LieTree) -> AssocExpansion {
        match tree {
            LieTree::Leaf(g) => {
                let mut m = BTreeMap::new();
                m.insert(vec![g.label], BigInt::one());
                m
            }
            LieTree::Node(l, r) => {
                let el = expand_tree(d, l);
                let er = expand_tree(d, r);
                let eps_l: i64 = l.leaves().iter().map(|g| eps_of(g, d)).sum::<i64>() % 2;
                let eps_r: i64 = r.leaves().iter().map(|g| eps_of(g, d)).sum::<i64>() % 2;
                let sign = sign_pow(eps_l * eps_r);
                let mut out: AssocExpansion = BTreeMap::new();
                for (wl, cl) in &el {
                    for (wr, cr) in &er {
                        let mut fwd = wl.clone();
                        fwd.extend_from_slice(wr);
                        add(&mut out, fwd, cl * cr);
                        let mut bwd = wr.clone();
                        bwd.extend_from_slice(wl);
                        add(&mut out, bwd, -(&sign * cl * cr));
                    }
                }
                out
            }
        }
    }

    pub fn expand_element(e: &LieElement) -> AssocExpansion {
        let mut out = BTreeMap::new();
        for (w, c) in &e.terms {
            let exp = expand_tree(e.d, &w.to_tree());
            for (word, coeff) in exp {
                add(&mut out, word, coeff * c);
            }
        }
        out
    }

    fn add(m: &mut AssocExpansion, k: Vec<u32>, v: BigInt) {
        if v.is_zero() {
            return;
        }
        let e = m.entry(k).or_insert_with(BigInt::zero);
        *e += v;
        if e.is_zero() {
            m.retain(|_, val| !val.is_zero());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::assoc_oracle::*;
    use super::*;
    use crate::rng::SplitMix64;

    fn even(label: u32) -> Generator {
        Generator::new(label, 0)
    }

    fn random_tree(rng: &mut SplitMix64, gens: &[Generator]) -> LieTree {
        if gens.len() == 1 {
            return LieTree::leaf(gens[0]);
        }
        let cut = 1 + rng.below(gens.len() - 1);
        // random subset split of the given generators
        let mut left = Vec::new();
        let mut right = Vec::new();
        let mut idx: Vec<usize> = (0..gens.len()).collect();
        for i in (1..idx.len()).rev() {
            let j = rng.below(i + 1);
            idx.swap(i, j);
        }
        for (k, &i) in idx.iter().enumerate() {
            if k < cut {
                left.push(gens[i]);
            } else {
                right.push(gens[i]);
            }
        }
        LieTree::node(random_tree(rng, &left), random_tree(rng, &right))
    }

    #[test]
    fn basis_sizes_are_factorials() {
        let mut fact = 1usize;
        for n in 1..=7u32 {
            if n > 1 {
                fact *= (n - 1) as usize;
            }
            let gens: Vec<Generator> = (1..=n).map(even).collect();
            let basis = multilinear_basis(&gens, 0).unwrap();
            assert_eq!(basis.len(), fact);
            for w in &basis {
                assert_eq!(w.min_label(), 1);
            }
        }
    }

    #[test]
    fn empty_component_is_an_error() {
        assert_eq!(multilinear_basis(&[], 0), Err(Error::EmptyComponent));
    }

    #[test]
    fn antisymmetry_of_even_generators() {
        // [x2,x1] -> -[x1,x2] for even generators, bracket degree 0
        let t = LieTree::node(LieTree::leaf(even(2)), LieTree::leaf(even(1)));
        let e = canonicalize(0, &t).unwrap();
        let expected = LieWord(vec![even(1), even(2)]);
        assert_eq!(e.terms.len(), 1);
        assert_eq!(e.terms[&expected], BigInt::from(-1));
    }

    #[test]
    fn canonical_words_are_fixed_points() {
        let gens: Vec<Generator> = vec![even(1), even(2), even(3), even(4)];
        for d in [0i64, 1, 2] {
            for w in multilinear_basis(&gens, d).unwrap() {
                let e = canonicalize(d, &w.to_tree()).unwrap();
                assert_eq!(e.terms.len(), 1);
                assert_eq!(e.terms[&w], BigInt::one());
            }
        }
    }

    #[test]
    fn repeated_label_is_rejected() {
        let t = LieTree::node(LieTree::leaf(even(1)), LieTree::leaf(even(1)));
        assert_eq!(canonicalize(0, &t), Err(Error::NotMultilinear(1)));
    }

    #[test]
    fn example_word_rewrites_consistently() {
        // [[[x5,x3],[x1,x2]],x4] must canonicalize to a combination with the
        // same tensor-algebra expansion and support inside the basis
        let t = LieTree::node(
            LieTree::node(
                LieTree::node(LieTree::leaf(even(5)), LieTree::leaf(even(3))),
                LieTree::node(LieTree::leaf(even(1)), LieTree::leaf(even(2))),
            ),
            LieTree::leaf(even(4)),
        );
        for d in [0i64, 1] {
            let e = canonicalize(d, &t).unwrap();
            assert!(!e.is_zero());
            let basis = multilinear_basis(&t.leaves(), d).unwrap();
            for w in e.terms.keys() {
                assert!(basis.contains(w), "{w:?} not canonical");
            }
            assert_eq!(expand_element(&e), expand_tree(d, &t));
        }
    }

    #[test]
    fn canonicalization_agrees_with_tensor_oracle() {
        let mut rng = SplitMix64::new(2024);
        for trial in 0..200 {
            let d = [0i64, 1, 2][rng.below(3)];
            let n = 2 + rng.below(5);
            let gens: Vec<Generator> = (1..=n as u32)
                .map(|l| Generator::new(l, rng.range_i64(-1, 1)))
                .collect();
            let t = random_tree(&mut rng, &gens);
            let e = canonicalize(d, &t).unwrap();
            assert_eq!(expand_element(&e), expand_tree(d, &t), "trial {trial} d={d} tree={t:?}");
        }
    }

    #[test]
    fn graded_antisymmetry_holds() {
        let mut rng = SplitMix64::new(7);
        for _ in 0..100 {
            let d = [0i64, 1, 2][rng.below(3)];
            let n = 2 + rng.below(5);
            let gens: Vec<Generator> = (1..=n as u32)
                .map(|l| Generator::new(l, rng.range_i64(-1, 1)))
                .collect();
            let cut = 1 + rng.below(n - 1);
            let (ga, gb) = gens.split_at(cut);
            let ta = random_tree(&mut rng, ga);
            let tb = random_tree(&mut rng, gb);
            let eps_a: i64 = ga.iter().map(|g| (g.degree + d).rem_euclid(2)).sum::<i64>() % 2;
            let eps_b: i64 = gb.iter().map(|g| (g.degree + d).rem_euclid(2)).sum::<i64>() % 2;
            let mut ab = canonicalize(d, &LieTree::node(ta.clone(), tb.clone())).unwrap();
            let mut ba = canonicalize(d, &LieTree::node(tb, ta)).unwrap();
            ba.scale(&sign_pow(eps_a * eps_b));
            ab.add(&ba);
            assert!(ab.is_zero(), "antisymmetry failed d={d}");
        }
    }

    #[test]
    fn graded_jacobi_holds() {
        let mut rng = SplitMix64::new(11);
        for _ in 0..100 {
            let d = [0i64, 1, 2][rng.below(3)];
            let n = 3 + rng.below(4);
            let gens: Vec<Generator> = (1..=n as u32)
                .map(|l| Generator::new(l, rng.range_i64(-1, 1)))
                .collect();
            let c1 = 1 + rng.below(n - 2);
            let c2 = c1 + 1 + rng.below(n - c1 - 1);
            let ga = &gens[..c1];
            let gb = &gens[c1..c2];
            let gc = &gens[c2..];
            let eps = |gs: &[Generator]| -> i64 {
                gs.iter().map(|g| (g.degree + d).rem_euclid(2)).sum::<i64>() % 2
            };
            let (ta, tb, tc) = (
                random_tree(&mut rng, ga),
                random_tree(&mut rng, gb),
                random_tree(&mut rng, gc),
            );
            // [a,[b,c]] - [[a,b],c] - (-1)^{eps(a) eps(b)} [b,[a,c]]
            let t1 = LieTree::node(ta.clone(), LieTree::node(tb.clone(), tc.clone()));
            let t2 = LieTree::node(LieTree::node(ta.clone(), tb.clone()), tc.clone());
            let t3 = LieTree::node(tb, LieTree::node(ta, tc));
            let mut j = canonicalize(d, &t1).unwrap();
            let mut e2 = canonicalize(d, &t2).unwrap();
            e2.scale(&-BigInt::one());
            j.add(&e2);
            let mut e3 = canonicalize(d, &t3).unwrap();
            e3.scale(&-sign_pow(eps(ga) * eps(gb)));
            j.add(&e3);
            assert!(j.is_zero(), "jacobi failed d={d}");
        }
    }

    #[test]
    fn bracket_of_elements() {
        let x1 = LieElement::from_word(0, LieWord(vec![even(1)]));
        let x2 = LieElement::from_word(0, LieWord(vec![even(2)]));
        let b = lie_bracket(&x1, &x2).unwrap();
        assert_eq!(b.terms[&LieWord(vec![even(1), even(2)])], BigInt::one());
        assert_eq!(lie_bracket(&x1, &x1), Err(Error::LabelOverlap(1)));

        let x3 = LieElement::from_word(0, LieWord(vec![even(3)]));
        let bb = lie_bracket(&b, &x3).unwrap();
        assert_eq!(bb.terms[&LieWord(vec![even(1), even(2), even(3)])], BigInt::one());
        assert_eq!(bb.terms.len(), 1);
    }
}
