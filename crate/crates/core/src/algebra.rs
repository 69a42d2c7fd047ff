//! Products of canonical bracket words inside the free graded (super)
//! commutative algebra of a free graded Lie algebra: the term model behind
//! Poiss_d(n), BV_d(n) and the bracket star-diagram spaces.
//!
//! Factors of a canonical term are sorted by their least label; reordering
//! signs follow the Koszul rule on homological degrees. The bracket of two
//! products expands by
//!
//!   [A_1..A_k, B_1..B_l] = sum_{i,j} (-1)^eps A_1..^A_i..A_k [A_i,B_j] B_1..^B_j..B_l
//!   eps = deg(A_i) * sum_{i'>i} deg(A_{i'}) + deg(B_j) * sum_{j'<j} deg(B_{j'})

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::graded_lie::{self, Generator, LieElement, LieTree, LieWord};

/// A product of bracket words. For the symmetric families the factors are
/// kept sorted by least label (the coefficient absorbs the Koszul sign of the
/// sort); for the associative family the order is the data.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    pub factors: Vec<LieWord>,
}

impl Term {
    pub fn empty() -> Self {
        Term { factors: Vec::new() }
    }

    pub fn degree(&self, d: i64) -> i64 {
        self.factors.iter().map(|w| w.degree(d)).sum()
    }

    pub fn labels(&self) -> Vec<u32> {
        let mut out: Vec<u32> = self.factors.iter().flat_map(|w| w.labels()).collect();
        out.sort_unstable();
        out
    }

    pub fn arity(&self) -> usize {
        self.factors.iter().map(|w| w.len()).sum()
    }

    /// True if some factor is a single unstarred generator.
    pub fn has_unstarred_singleton(&self) -> bool {
        self.factors.iter().any(|w| w.len() == 1 && !w.0[0].starred)
    }

    pub fn star_count(&self) -> usize {
        self.factors.iter().flat_map(|w| w.0.iter()).filter(|g| g.starred).count()
    }

    /// Complexity of the underlying star-partition: sum of (block size - 1)
    /// plus the number of stars.
    pub fn complexity(&self) -> usize {
        let blocks = self.factors.len();
        self.arity() - blocks + self.star_count()
    }
}

/// A linear combination of terms with exact integer coefficients, over a
/// bracket of degree `-d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    pub d: i64,
    pub terms: BTreeMap<Term, BigInt>,
}

impl Element {
    pub fn zero(d: i64) -> Self {
        Element { d, terms: BTreeMap::new() }
    }

    pub fn from_term(d: i64, t: Term) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(t, BigInt::one());
        Element { d, terms }
    }

    pub fn from_generator(d: i64, g: Generator) -> Self {
        Element::from_term(d, Term { factors: vec![LieWord(vec![g])] })
    }

    pub fn unit(d: i64) -> Self {
        Element::from_term(d, Term::empty())
    }

    pub fn add_term(&mut self, t: Term, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(t).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&mut self, other: &Element) {
        for (t, c) in &other.terms {
            self.add_term(t.clone(), c.clone());
        }
    }

    pub fn scale(&mut self, c: &BigInt) {
        if c.is_zero() {
            self.terms.clear();
        } else {
            for v in self.terms.values_mut() {
                *v *= c;
            }
        }
    }

    pub fn negate(&mut self) {
        for v in self.terms.values_mut() {
            *v = -v.clone();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The common homological degree of the stored terms, if homogeneous.
    pub fn degree(&self) -> Option<i64> {
        let mut it = self.terms.keys();
        let first = it.next()?.degree(self.d);
        for t in it {
            if t.degree(self.d) != first {
                return None;
            }
        }
        Some(first)
    }
}

fn sign_pow(e: i64) -> BigInt {
    if e.rem_euclid(2) == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// Sort factors by least label, returning the Koszul sign of the permutation
/// (product of (-1)^{deg_i deg_j} over inversions).
pub fn canonical_sort(d: i64, factors: Vec<LieWord>) -> (Term, BigInt) {
    let mut sign = 0i64;
    let mut fs = factors;
    // insertion sort, counting weighted inversions
    for i in 1..fs.len() {
        let mut j = i;
        while j > 0 && fs[j - 1].min_label() > fs[j].min_label() {
            sign += fs[j - 1].degree(d) * fs[j].degree(d);
            fs.swap(j - 1, j);
            j -= 1;
        }
    }
    (Term { factors: fs }, sign_pow(sign))
}

/// Product of two elements (symmetric families).
pub fn mul(a: &Element, b: &Element) -> Element {
    let d = a.d;
    let mut out = Element::zero(d);
    for (ta, ca) in &a.terms {
        for (tb, cb) in &b.terms {
            let mut fs = ta.factors.clone();
            fs.extend(tb.factors.iter().cloned());
            let (t, s) = canonical_sort(d, fs);
            out.add_term(t, ca * cb * s);
        }
    }
    out
}

/// Lie bracket of two elements, extended to products of brackets by the
/// Leibniz expansion above.
pub fn bracket(a: &Element, b: &Element) -> Element {
    let d = a.d;
    let mut out = Element::zero(d);
    for (ta, ca) in &a.terms {
        for (tb, cb) in &b.terms {
            bracket_terms(d, ta, tb, &(ca * cb), &mut out);
        }
    }
    out
}

fn bracket_terms(d: i64, ta: &Term, tb: &Term, coeff: &BigInt, out: &mut Element) {
    let k = ta.factors.len();
    let l = tb.factors.len();
    let deg_a: Vec<i64> = ta.factors.iter().map(|w| w.degree(d)).collect();
    let deg_b: Vec<i64> = tb.factors.iter().map(|w| w.degree(d)).collect();
    for i in 0..k {
        let tail_a: i64 = deg_a[i + 1..].iter().sum();
        for j in 0..l {
            let head_b: i64 = deg_b[..j].iter().sum();
            let eps = deg_a[i] * tail_a + deg_b[j] * head_b;
            let pair = graded_lie::bracket_elements(
                &LieElement::from_word(d, ta.factors[i].clone()),
                &LieElement::from_word(d, tb.factors[j].clone()),
            );
            for (w, cw) in &pair.terms {
                let mut fs: Vec<LieWord> = Vec::with_capacity(k + l - 1);
                for (i2, f) in ta.factors.iter().enumerate() {
                    if i2 != i {
                        fs.push(f.clone());
                    }
                }
                fs.push(w.clone());
                for (j2, f) in tb.factors.iter().enumerate() {
                    if j2 != j {
                        fs.push(f.clone());
                    }
                }
                let (t, s) = canonical_sort(d, fs);
                out.add_term(t, coeff * cw * s * sign_pow(eps));
            }
        }
    }
}

/// Evaluate a bracket tree whose leaves are mapped to elements: the monad
/// flattening of a substitution. Signs arise only from the algebra
/// operations, never from the flattening itself.
pub fn evaluate_tree<F>(d: i64, tree: &LieTree, f: &F) -> Element
where
    F: Fn(&Generator) -> Element,
{
    match tree {
        LieTree::Leaf(g) => f(g),
        LieTree::Node(l, r) => bracket(&evaluate_tree(d, l, f), &evaluate_tree(d, r, f)),
    }
}

/// Evaluate a written product of bracket trees left to right.
pub fn evaluate_product<F>(d: i64, trees: &[LieTree], f: &F) -> Element
where
    F: Fn(&Generator) -> Element,
{
    let mut acc = Element::unit(d);
    for t in trees {
        let v = evaluate_tree(d, t, f);
        acc = mul(&acc, &v);
    }
    acc
}

/// Substitute elements for generators inside every term of `e` (generators
/// missing from the mapping stay themselves).
pub fn substitute<F>(e: &Element, f: &F) -> Element
where
    F: Fn(&Generator) -> Element,
{
    let d = e.d;
    let mut out = Element::zero(d);
    for (t, c) in &e.terms {
        let trees: Vec<LieTree> = t.factors.iter().map(|w| w.to_tree()).collect();
        let mut v = evaluate_product(d, &trees, f);
        v.scale(c);
        out.add(&v);
    }
    out
}

/// The Batalin-Vilkovisky operator: a square-zero derivation-with-defect of
/// degree -d acting on products of brackets by
///
///   delta(a b) = delta(a) b + (-1)^{deg a} a delta(b) + (-1)^{deg a} [a, b]
///   delta([a,b]) = [delta(a), b] + (-1)^{deg a + 1} [a, delta(b)]
///
/// with delta(x) the starred copy of an unstarred generator and
/// delta(starred) = 0.
pub fn delta(e: &Element) -> Element {
    let d = e.d;
    let mut out = Element::zero(d);
    for (t, c) in &e.terms {
        let mut v = delta_term(d, &t.factors);
        v.scale(c);
        out.add(&v);
    }
    out
}

fn delta_term(d: i64, factors: &[LieWord]) -> Element {
    if factors.is_empty() {
        return Element::zero(d);
    }
    let head = &factors[0];
    let head_el = Element::from_term(d, Term { factors: vec![head.clone()] });
    let rest = &factors[1..];
    if rest.is_empty() {
        return delta_tree(d, &head.to_tree());
    }
    let rest_el = Element::from_term(d, Term { factors: rest.to_vec() });
    let s = sign_pow(head.degree(d));

    let mut out = mul(&delta_tree(d, &head.to_tree()), &rest_el);
    let mut t2 = mul(&head_el, &delta_term(d, rest));
    t2.scale(&s);
    out.add(&t2);
    let mut t3 = bracket(&head_el, &rest_el);
    t3.scale(&s);
    out.add(&t3);
    out
}

fn delta_tree(d: i64, tree: &LieTree) -> Element {
    match tree {
        LieTree::Leaf(g) => {
            if g.starred {
                Element::zero(d)
            } else {
                Element::from_generator(d, Generator { label: g.label, degree: g.degree - d, starred: true })
            }
        }
        LieTree::Node(l, r) => {
            let leaves_l = l.leaves();
            let deg_l: i64 =
                leaves_l.iter().map(|g| g.degree).sum::<i64>() - d * (leaves_l.len() as i64 - 1);
            let el = evaluate_tree(d, l, &|g: &Generator| Element::from_generator(d, *g));
            let er = evaluate_tree(d, r, &|g: &Generator| Element::from_generator(d, *g));
            let mut t1 = bracket(&delta_tree(d, l), &er);
            let mut t2 = bracket(&el, &delta_tree(d, r));
            t2.scale(&sign_pow(deg_l + 1));
            t1.add(&t2);
            t1
        }
    }
}
