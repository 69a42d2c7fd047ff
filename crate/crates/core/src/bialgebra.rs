//! The differential bialgebra structure on bracket star-diagrams
//! (concatenation product and the symmetric coalgebra coproduct), chord
//! diagram extraction, and an independent four-term-relation oracle.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::algebra::Term;
use crate::combinat::perfect_matchings;
use crate::error::Result;
use crate::graded_lie::{Generator, LieWord};
use crate::star_diagrams::{star_slice_basis, BsdElement, Mode};

fn sign_pow(e: i64) -> BigInt {
    if e.rem_euclid(2) == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

fn shift_word(w: &LieWord, offset: u32) -> LieWord {
    LieWord(w.0.iter().map(|g| Generator { label: g.label + offset, ..*g }).collect())
}

/// A * B: all points of A placed before all points of B, factor sequences
/// concatenated. The empty diagram is the unit.
pub fn product(a: &BsdElement, b: &BsdElement) -> BsdElement {
    assert_eq!(a.mode, b.mode);
    let offset = a.points as u32;
    let mut out = BsdElement::zero(a.mode, a.points + b.points);
    for (ta, ca) in &a.element.terms {
        for (tb, cb) in &b.element.terms {
            let mut factors = ta.factors.clone();
            factors.extend(tb.factors.iter().map(|w| shift_word(w, offset)));
            out.element.add_term(Term { factors }, ca * cb);
        }
    }
    out
}

pub fn unit(mode: Mode) -> BsdElement {
    BsdElement::from_term(mode, 0, Term::empty())
}

/// Parity of one diagram factor: number of points (odd mode) or number of
/// stars (even mode).
fn factor_parity(mode: Mode, w: &LieWord) -> i64 {
    match mode {
        Mode::OddD => w.len() as i64 % 2,
        Mode::EvenD => w.0.iter().filter(|g| g.starred).count() as i64 % 2,
    }
}

/// A formal sum of tensor pairs of diagrams, each side renumbered to
/// canonical positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BsdTensor {
    pub mode: Mode,
    pub terms: BTreeMap<(Term, Term), BigInt>,
}

impl BsdTensor {
    pub fn zero(mode: Mode) -> Self {
        BsdTensor { mode, terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, l: Term, r: Term, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((l, r)).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&mut self, c: &BigInt) {
        for v in self.terms.values_mut() {
            *v *= c;
        }
    }

    pub fn add(&mut self, other: &BsdTensor) {
        for ((l, r), c) in &other.terms {
            self.add_term(l.clone(), r.clone(), c.clone());
        }
    }
}

fn renumber(factors: &[LieWord]) -> Term {
    let mut labels: Vec<u32> = factors.iter().flat_map(|w| w.labels()).collect();
    labels.sort_unstable();
    let map: BTreeMap<u32, u32> = labels
        .iter()
        .enumerate()
        .map(|(k, &l)| (l, k as u32 + 1))
        .collect();
    Term {
        factors: factors
            .iter()
            .map(|w| LieWord(w.0.iter().map(|g| Generator { label: map[&g.label], ..*g }).collect()))
            .collect(),
    }
}

/// The standard symmetric coalgebra coproduct: the sum over splittings of
/// the factor set into two ordered groups with the Koszul signs of the mode.
pub fn coproduct(x: &BsdElement) -> BsdTensor {
    let mode = x.mode;
    let mut out = BsdTensor::zero(mode);
    for (t, c) in &x.element.terms {
        let k = t.factors.len();
        let parities: Vec<i64> = t.factors.iter().map(|w| factor_parity(mode, w)).collect();
        for mask in 0u64..(1 << k) {
            let mut eps = 0i64;
            // crossing pairs: factor p in the left group after factor q in
            // the right group
            for p in 0..k {
                if mask & (1 << p) == 0 {
                    continue;
                }
                for q in 0..p {
                    if mask & (1 << q) != 0 {
                        continue;
                    }
                    eps += match mode {
                        Mode::OddD => parities[p] * parities[q],
                        Mode::EvenD => (parities[p] + 1) * (parities[q] + 1),
                    };
                }
            }
            let left: Vec<LieWord> = (0..k)
                .filter(|p| mask & (1 << p) != 0)
                .map(|p| t.factors[p].clone())
                .collect();
            let right: Vec<LieWord> = (0..k)
                .filter(|p| mask & (1 << p) == 0)
                .map(|p| t.factors[p].clone())
                .collect();
            out.add_term(renumber(&left), renumber(&right), c * sign_pow(eps));
        }
    }
    out
}

/// Counit: the coefficient of the empty diagram.
pub fn counit(x: &BsdElement) -> BigInt {
    x.element.terms.get(&Term::empty()).cloned().unwrap_or_else(BigInt::zero)
}

/// The parity for which the differential is a derivation of the product:
/// number of points (odd mode) or stars plus factors (even mode). In the
/// even mode this is the diagram parity shifted by one, matching the extra
/// product sign a point of B sees inside A * B.
pub fn derivation_parity(mode: Mode, t: &Term) -> i64 {
    match mode {
        Mode::OddD => (t.arity() as i64).rem_euclid(2),
        Mode::EvenD => (t.star_count() as i64 + t.factors.len() as i64).rem_euclid(2),
    }
}

/// Chord diagrams: the basis of the (i, 2i) slice, i perfect-matching chords
/// oriented low-to-high.
pub fn chord_basis(mode: Mode, i: usize) -> Result<Vec<Term>> {
    star_slice_basis(mode, i, 2 * i)
}

/// Independent four-term oracle.
///
/// The relators are the chord-diagram parts of the differentials of
/// (3,2,..,2)-configuration diagrams, expanded directly from the
/// super-Leibniz rule for a three-generator bracket word [[A,B],C]:
///
///   doubling A:  -+[a-,B][a+,C] + [a-,C][a+,B]   (odd: -,+ / even: +,+)
///   doubling B:  -+([A,b-][b+,C] - [A,b+][b-,C]) (odd: -(..) / even: +(..))
///   doubling C:  no chord terms
///
/// with every position above the doubled point shifted up by one, spectator
/// chords carried along unchanged, chords oriented low-to-high (an
/// orientation flip costs -1 in the even mode only), and factors sorted by
/// least position (a swap costs -1 in the even mode only). Spectator
/// doublings and the end-point corrections contribute no chord diagrams, and
/// prefix signs common to a whole relator are dropped.
///
/// This path shares no code with the complex builders or the homology
/// engine: diagrams are plain pair lists and the rank comes from a local
/// fraction-free elimination.
pub mod four_t {
    use super::*;

    pub type Chord = (u32, u32);

    /// Canonicalize a written chord list: orient each chord low-to-high and
    /// sort factors by first endpoint, tracking the mode's signs.
    fn canonical(mode: Mode, written: &[Chord]) -> (Vec<Chord>, i64) {
        let mut sign = 0i64;
        let mut list: Vec<Chord> = written
            .iter()
            .map(|&(x, y)| {
                if x > y {
                    if mode == Mode::EvenD {
                        sign += 1;
                    }
                    (y, x)
                } else {
                    (x, y)
                }
            })
            .collect();
        for i in 1..list.len() {
            let mut j = i;
            while j > 0 && list[j - 1].0 > list[j].0 {
                list.swap(j - 1, j);
                if mode == Mode::EvenD {
                    sign += 1;
                }
                j -= 1;
            }
        }
        (list, sign)
    }

    /// All relators at complexity i, as vectors over the chord basis.
    pub fn relators(mode: Mode, i: usize) -> Vec<BTreeMap<Vec<Chord>, i64>> {
        let mut out = Vec::new();
        if i < 2 {
            return out;
        }
        let n = 2 * i - 1;
        let positions: Vec<u32> = (1..=n as u32).collect();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let (q1, q2, q3) = (positions[a], positions[b], positions[c]);
                    let rest: Vec<u32> = positions
                        .iter()
                        .copied()
                        .filter(|&p| p != q1 && p != q2 && p != q3)
                        .collect();
                    for matching in perfect_matchings(&rest) {
                        // the two canonical words on the block: [[q1,q2],q3]
                        // and [[q1,q3],q2]
                        for (bb, cc) in [(q2, q3), (q3, q2)] {
                            let relator = expand_word(mode, q1, bb, cc, &matching);
                            if !relator.is_empty() {
                                out.push(relator);
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Chord-diagram part of the differential of the word [[A,B],C] times
    /// the spectator chords, up to a global sign.
    fn expand_word(
        mode: Mode,
        a: u32,
        b: u32,
        c: u32,
        spectators: &[Chord],
    ) -> BTreeMap<Vec<Chord>, i64> {
        let mut relator: BTreeMap<Vec<Chord>, i64> = BTreeMap::new();
        let odd = mode == Mode::OddD;
        let add = |relator: &mut BTreeMap<Vec<Chord>, i64>, written: Vec<Chord>, coeff: i64| {
            let (key, s) = canonical(mode, &written);
            let v = relator.entry(key).or_insert(0);
            *v += if s % 2 == 0 { coeff } else { -coeff };
            if *v == 0 {
                relator.retain(|_, x| *x != 0);
            }
        };
        let shift = |q: u32, t: u32| if q > t { q + 1 } else { q };
        let build = |t: u32, chord1: Chord, chord2: Chord| -> Vec<Chord> {
            // chords are given in final (shifted) coordinates; spectators
            // shift around the doubled point t and slot in around the word's
            // written position: the factor order only matters for the even
            // sign, which `canonical` recovers from any written order that
            // preserves the derived order of the two new chords. Keep the
            // new chords first, then the spectators in their own order.
            let mut w = vec![chord1, chord2];
            for &(x, y) in spectators {
                w.push((shift(x, t), shift(y, t)));
            }
            w
        };
        // doubling A at position a: partners shift
        let (b_a, c_a) = (shift(b, a), shift(c, a));
        add(&mut relator, build(a, (a, b_a), (a + 1, c_a)), if odd { -1 } else { 1 });
        add(&mut relator, build(a, (a, c_a), (a + 1, b_a)), 1);
        // doubling B at position b
        let (a_b, c_b) = (shift(a, b), shift(c, b));
        let b_sign = if odd { -1 } else { 1 };
        add(&mut relator, build(b, (a_b, b), (b + 1, c_b)), b_sign);
        add(&mut relator, build(b, (a_b, b + 1), (b, c_b)), -b_sign);
        relator.retain(|_, v| *v != 0);
        relator
    }

    /// Rank of the relator span and the dimension of the quotient of the
    /// chord space, over the rationals.
    pub fn quotient(mode: Mode, i: usize) -> (usize, usize) {
        let points: Vec<u32> = (1..=2 * i as u32).collect();
        let chords: Vec<Vec<Chord>> = perfect_matchings(&points)
            .into_iter()
            .map(|m| {
                let mut v: Vec<Chord> = m;
                v.sort();
                v
            })
            .collect();
        let index: BTreeMap<Vec<Chord>, usize> =
            chords.iter().enumerate().map(|(k, c)| (c.clone(), k)).collect();
        let mut rows: Vec<BTreeMap<usize, BigInt>> = Vec::new();
        for rel in relators(mode, i) {
            let mut row = BTreeMap::new();
            for (key, v) in rel {
                let col = *index.get(&key).expect("relator chord outside the basis");
                row.insert(col, BigInt::from(v));
            }
            rows.push(row);
        }
        // local fraction-free elimination
        let mut rank = 0usize;
        while let Some(pos) = rows.iter().position(|r| !r.is_empty()) {
            let pivot_row = rows.swap_remove(pos);
            let (&pcol, pval) = pivot_row
                .iter()
                .min_by(|(c1, v1), (c2, v2)| v1.abs().cmp(&v2.abs()).then(c1.cmp(c2)))
                .unwrap();
            let pval = pval.clone();
            rank += 1;
            for row in rows.iter_mut() {
                let e = match row.get(&pcol) {
                    Some(e) => e.clone(),
                    None => continue,
                };
                for v in row.values_mut() {
                    *v *= &pval;
                }
                for (c, v) in pivot_row.iter() {
                    let entry = row.entry(*c).or_insert_with(BigInt::zero);
                    *entry -= &e * v;
                }
                row.retain(|_, v| !v.is_zero());
            }
            rows.retain(|r| !r.is_empty());
        }
        (rank, chords.len() - rank)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;
    use crate::star_diagrams::full_differential;

    fn random_bsd(rng: &mut SplitMix64, mode: Mode, max_i: usize) -> BsdElement {
        loop {
            let i = 1 + rng.below(max_i);
            let j_lo = i.div_ceil(2);
            let j = j_lo + rng.below(2 * i - j_lo + 1);
            let basis = star_slice_basis(mode, i, j).unwrap();
            if basis.is_empty() {
                continue;
            }
            let t = basis[rng.below(basis.len())].clone();
            return BsdElement::from_term(mode, j, t);
        }
    }

    #[test]
    fn unit_and_concatenation() {
        for mode in [Mode::OddD, Mode::EvenD] {
            let chord = BsdElement::from_term(
                mode,
                2,
                Term { factors: vec![LieWord(vec![mode.generator(1, false), mode.generator(2, false)])] },
            );
            let u = unit(mode);
            assert_eq!(product(&u, &chord), chord);
            assert_eq!(product(&chord, &u), chord);
            let two = product(&chord, &chord);
            assert_eq!(two.points, 4);
            let t = two.element.terms.keys().next().unwrap();
            assert_eq!(t.factors.len(), 2);
            assert_eq!(t.factors[1].labels(), vec![3, 4]);
        }
    }

    #[test]
    fn product_is_associative() {
        let mut rng = SplitMix64::new(3);
        for mode in [Mode::OddD, Mode::EvenD] {
            for _ in 0..10 {
                let a = random_bsd(&mut rng, mode, 2);
                let b = random_bsd(&mut rng, mode, 2);
                let c = random_bsd(&mut rng, mode, 2);
                assert_eq!(product(&product(&a, &b), &c), product(&a, &product(&b, &c)));
            }
        }
    }

    #[test]
    fn differential_is_a_derivation() {
        // d(A * B) = dA * B + (-1)^{parity(A)} A * dB
        let mut rng = SplitMix64::new(9);
        for mode in [Mode::OddD, Mode::EvenD] {
            for _ in 0..12 {
                let a = random_bsd(&mut rng, mode, 2);
                let b = random_bsd(&mut rng, mode, 2);
                let lhs = full_differential(&product(&a, &b)).unwrap();
                let mut rhs = product(&full_differential(&a).unwrap(), &b);
                let ta = a.element.terms.keys().next().unwrap();
                let par = derivation_parity(mode, ta);
                let mut t2 = product(&a, &full_differential(&b).unwrap());
                t2.scale(&sign_pow(par));
                rhs.add(&t2);
                let mut diff = lhs;
                rhs.scale(&BigInt::from(-1));
                diff.add(&rhs);
                assert!(diff.is_zero(), "{mode:?}");
            }
        }
    }

    #[test]
    fn coproduct_of_a_single_factor_is_primitive() {
        for mode in [Mode::OddD, Mode::EvenD] {
            let chord = BsdElement::from_term(
                mode,
                2,
                Term { factors: vec![LieWord(vec![mode.generator(1, false), mode.generator(2, false)])] },
            );
            let cp = coproduct(&chord);
            assert_eq!(cp.terms.len(), 2);
            let t = chord.element.terms.keys().next().unwrap().clone();
            assert_eq!(cp.terms[&(t.clone(), Term::empty())], BigInt::one());
            assert_eq!(cp.terms[&(Term::empty(), t)], BigInt::one());
        }
    }

    #[test]
    fn coproduct_of_two_factors() {
        // Delta(A1 A2) = A1A2 (x) 1 + A1 (x) A2 + (-1)^{eps} A2 (x) A1 + 1 (x) A1A2;
        // with both factors renumbering to the same diagram the two middle
        // terms combine to (1 + (-1)^{eps})
        for mode in [Mode::OddD, Mode::EvenD] {
            let star = |l| mode.generator(l, true);
            let t = Term {
                factors: vec![LieWord(vec![star(1)]), LieWord(vec![star(2)])],
            };
            let x = BsdElement::from_term(mode, 2, t.clone());
            let cp = coproduct(&x);
            let single = Term { factors: vec![LieWord(vec![star(1)])] };
            assert_eq!(cp.terms[&(t.clone(), Term::empty())], BigInt::one());
            assert_eq!(cp.terms[&(Term::empty(), t.clone())], BigInt::one());
            let p = factor_parity(mode, &LieWord(vec![star(1)]));
            let eps = match mode {
                Mode::OddD => p * p,
                Mode::EvenD => (p + 1) * (p + 1),
            };
            let expected = BigInt::one() + sign_pow(eps);
            if expected.is_zero() {
                assert_eq!(cp.terms.len(), 2);
                assert!(!cp.terms.contains_key(&(single.clone(), single)));
            } else {
                assert_eq!(cp.terms.len(), 3);
                assert_eq!(cp.terms[&(single.clone(), single)], expected);
            }
        }
    }

    #[test]
    fn coproduct_is_coassociative() {
        let mut rng = SplitMix64::new(21);
        for mode in [Mode::OddD, Mode::EvenD] {
            for _ in 0..10 {
                let a = random_bsd(&mut rng, mode, 2);
                let b = random_bsd(&mut rng, mode, 2);
                let x = product(&a, &b);
                // (Delta (x) id) Delta = (id (x) Delta) Delta on term triples
                let cp = coproduct(&x);
                let mut lhs: BTreeMap<(Term, Term, Term), BigInt> = BTreeMap::new();
                let mut rhs: BTreeMap<(Term, Term, Term), BigInt> = BTreeMap::new();
                for ((l, r), c) in &cp.terms {
                    let el = BsdElement::from_term(mode, l.arity(), l.clone());
                    for ((l2, r2), c2) in &coproduct(&el).terms {
                        let e = lhs.entry((l2.clone(), r2.clone(), r.clone())).or_insert_with(BigInt::zero);
                        *e += c * c2;
                    }
                    let er = BsdElement::from_term(mode, r.arity(), r.clone());
                    for ((l2, r2), c2) in &coproduct(&er).terms {
                        let e = rhs.entry((l.clone(), l2.clone(), r2.clone())).or_insert_with(BigInt::zero);
                        *e += c * c2;
                    }
                }
                lhs.retain(|_, v| !v.is_zero());
                rhs.retain(|_, v| !v.is_zero());
                assert_eq!(lhs, rhs, "{mode:?}");
            }
        }
    }

    #[test]
    fn chord_bases_count_double_factorials() {
        for mode in [Mode::OddD, Mode::EvenD] {
            assert_eq!(chord_basis(mode, 1).unwrap().len(), 1);
            assert_eq!(chord_basis(mode, 2).unwrap().len(), 3);
            assert_eq!(chord_basis(mode, 3).unwrap().len(), 15);
        }
    }

    #[test]
    fn four_term_oracle_small_values() {
        // one chord: no relations possible
        for mode in [Mode::OddD, Mode::EvenD] {
            let (rank, dim) = four_t::quotient(mode, 1);
            assert_eq!((rank, dim), (0, 1), "{mode:?}");
        }
        // two chords: three diagrams; one relation for diagrams, two for
        // superdiagrams
        let (rank, dim) = four_t::quotient(Mode::OddD, 2);
        assert_eq!((rank, dim), (1, 2));
        let (rank, dim) = four_t::quotient(Mode::EvenD, 2);
        assert_eq!((rank, dim), (2, 1));
    }

    #[test]
    fn four_term_oracle_matches_classical_dimensions() {
        // the framed weight-system dimensions 1, 2, 3, 6 for i = 1..4
        let expected = [1usize, 2, 3, 6];
        for (k, &e) in expected.iter().enumerate() {
            let (_, dim) = four_t::quotient(Mode::OddD, k + 1);
            assert_eq!(dim, e, "i = {}", k + 1);
        }
    }
}
