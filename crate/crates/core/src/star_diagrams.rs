//! Complexes of bracket star-diagrams: (A,b)-configuration combinatorics,
//! insertion with the explicit signs of the odd- and even-parity modes,
//! point differentials, and the full bigraded complexes.
//!
//! Internally a diagram is a product of canonical bracket words on position
//! labels. The two parity modes ride the same graded machinery:
//!   odd mode:  all generators of degree 1, bracket degree 0
//!              (a symmetric algebra of a Lie superalgebra on odd generators);
//!   even mode: unstarred generators of degree 1, starred of degree 0,
//!              bracket degree -1 (the exterior convention in disguise).

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::One;

use crate::algebra::{self, Element, Term};
use crate::combinat::{set_partitions, subsets};
use crate::error::{Error, Result};
use crate::graded_lie::{multilinear_basis, Generator, LieTree, LieWord};
use crate::homology::SparseIntMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Mode {
    OddD,
    EvenD,
}

impl Mode {
    pub fn internal_d(&self) -> i64 {
        match self {
            Mode::OddD => 0,
            Mode::EvenD => 1,
        }
    }

    pub fn generator(&self, label: u32, starred: bool) -> Generator {
        let degree = match (self, starred) {
            (Mode::OddD, _) => 1,
            (Mode::EvenD, false) => 1,
            (Mode::EvenD, true) => 0,
        };
        Generator { label, degree, starred }
    }
}

/// An (A,b)-configuration up to orientation-preserving reparameterization:
/// j canonical positions 1..j, groups of collided points (size >= 2), and a
/// set of starred positions (stars may sit on group points).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ABConfiguration {
    pub points: usize,
    pub groups: Vec<BTreeSet<u32>>,
    pub stars: BTreeSet<u32>,
}

impl ABConfiguration {
    pub fn new(points: usize, groups: Vec<BTreeSet<u32>>, stars: BTreeSet<u32>) -> Result<Self> {
        let mut covered: BTreeSet<u32> = stars.clone();
        let mut seen: BTreeSet<u32> = BTreeSet::new();
        for g in &groups {
            if g.len() < 2 {
                return Err(Error::Invariant("groups have at least two points".into()));
            }
            for &p in g {
                if !seen.insert(p) {
                    return Err(Error::Invariant("groups overlap".into()));
                }
                covered.insert(p);
            }
        }
        let all: BTreeSet<u32> = (1..=points as u32).collect();
        if covered != all {
            return Err(Error::Invariant(
                "every position must belong to a group or carry a star".into(),
            ));
        }
        let mut groups = groups;
        groups.sort_by_key(|g| *g.iter().next().unwrap());
        Ok(ABConfiguration { points, groups, stars })
    }

    /// complexity i = sum (|group| - 1) + #stars
    pub fn complexity(&self) -> usize {
        self.groups.iter().map(|g| g.len() - 1).sum::<usize>() + self.stars.len()
    }

    /// Minimal components: lone stars and groups (with their stars).
    pub fn minimal_components(&self) -> Vec<BTreeSet<u32>> {
        let grouped: BTreeSet<u32> = self.groups.iter().flatten().copied().collect();
        let mut comps: Vec<BTreeSet<u32>> = self.groups.clone();
        for &s in &self.stars {
            if !grouped.contains(&s) {
                comps.push([s].into_iter().collect());
            }
        }
        comps.sort_by_key(|c| *c.iter().next().unwrap());
        comps
    }

    /// Read the configuration off a canonical diagram term.
    pub fn from_term(points: usize, t: &Term) -> Self {
        let mut groups = Vec::new();
        let mut stars = BTreeSet::new();
        for w in &t.factors {
            if w.len() >= 2 {
                groups.push(w.labels().into_iter().collect());
            }
            for g in &w.0 {
                if g.starred {
                    stars.insert(g.label);
                }
            }
        }
        ABConfiguration { points, groups, stars }
    }
}

/// A linear combination of canonical bracket star-diagrams of one mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BsdElement {
    pub mode: Mode,
    pub points: usize,
    pub element: Element,
}

impl BsdElement {
    pub fn zero(mode: Mode, points: usize) -> Self {
        BsdElement { mode, points, element: Element::zero(mode.internal_d()) }
    }

    pub fn from_term(mode: Mode, points: usize, t: Term) -> Self {
        BsdElement { mode, points, element: Element::from_term(mode.internal_d(), t) }
    }

    pub fn is_zero(&self) -> bool {
        self.element.is_zero()
    }

    pub fn add(&mut self, other: &BsdElement) {
        assert_eq!(self.mode, other.mode);
        assert_eq!(self.points, other.points);
        self.element.add(&other.element);
    }

    pub fn scale(&mut self, c: &BigInt) {
        self.element.scale(c);
    }
}

/// Diagram parity: number of distinct points for the odd mode; stars plus
/// factor count minus one for the even mode (zero for the empty diagram).
pub fn diagram_parity(mode: Mode, t: &Term) -> i64 {
    match mode {
        Mode::OddD => (t.arity() as i64).rem_euclid(2),
        Mode::EvenD => {
            if t.factors.is_empty() {
                0
            } else {
                (t.star_count() as i64 + t.factors.len() as i64 - 1).rem_euclid(2)
            }
        }
    }
}

/// Is some factor a single unstarred generator (a special generalized
/// diagram)?
pub fn is_special(t: &Term) -> bool {
    t.has_unstarred_singleton()
}

/// Kill the special generalized diagrams, keep the rest.
pub fn projection_p(x: &BsdElement) -> BsdElement {
    let mut out = BsdElement::zero(x.mode, x.points);
    for (t, c) in &x.element.terms {
        if !is_special(t) {
            out.element.add_term(t.clone(), c.clone());
        }
    }
    out
}

/// All configuration classes with the given complexity and number of points.
pub fn enumerate_configurations(i: usize, j: usize) -> Vec<ABConfiguration> {
    let mut out = Vec::new();
    if j == 0 {
        if i == 0 {
            out.push(ABConfiguration { points: 0, groups: Vec::new(), stars: BTreeSet::new() });
        }
        return out;
    }
    let labels: Vec<u32> = (1..=j as u32).collect();
    for partition in set_partitions(&labels) {
        let blocks = partition.len();
        if j < blocks {
            continue;
        }
        let base = j - blocks;
        if i < base {
            continue;
        }
        let star_count = i - base;
        if star_count > j {
            continue;
        }
        for stars in subsets(&labels) {
            if stars.len() != star_count {
                continue;
            }
            let starset: BTreeSet<u32> = stars.iter().copied().collect();
            // no unstarred singleton components
            if partition.iter().any(|b| b.len() == 1 && !starset.contains(&b[0])) {
                continue;
            }
            let groups: Vec<BTreeSet<u32>> = partition
                .iter()
                .filter(|b| b.len() >= 2)
                .map(|b| b.iter().copied().collect())
                .collect();
            out.push(ABConfiguration { points: j, groups, stars: starset });
        }
    }
    out.sort();
    out
}

/// The canonical diagram basis of one configuration: one canonical bracket
/// word per minimal component.
pub fn bsd_basis(config: &ABConfiguration, mode: Mode) -> Result<Vec<Term>> {
    let comps = config.minimal_components();
    if comps.is_empty() {
        return Ok(vec![Term::empty()]);
    }
    let mut per_comp: Vec<Vec<LieWord>> = Vec::with_capacity(comps.len());
    for comp in &comps {
        let gens: Vec<Generator> = comp
            .iter()
            .map(|&p| mode.generator(p, config.stars.contains(&p)))
            .collect();
        per_comp.push(multilinear_basis(&gens, mode.internal_d())?);
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; per_comp.len()];
    loop {
        let factors: Vec<LieWord> = idx
            .iter()
            .enumerate()
            .map(|(b, &k)| per_comp[b][k].clone())
            .collect();
        out.push(Term { factors });
        let mut pos = per_comp.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < per_comp[pos].len() {
                break;
            }
            idx[pos] = 0;
            if pos == 0 {
                return Ok(out);
            }
        }
    }
}

/// A written (not necessarily canonical) generalized bracket star-diagram:
/// an ordered product of bracket trees on position-labeled generators.
#[derive(Debug, Clone)]
pub struct GeneralizedDiagram {
    pub mode: Mode,
    pub factors: Vec<LieTree>,
}

impl GeneralizedDiagram {
    pub fn leaves(&self) -> Vec<Generator> {
        self.factors.iter().flat_map(|t| t.leaves()).collect()
    }

    pub fn point_count(&self) -> usize {
        self.leaves().len()
    }

    pub fn star_count(&self) -> usize {
        self.leaves().iter().filter(|g| g.starred).count()
    }

    fn as_element(&self, points: usize) -> BsdElement {
        let d = self.mode.internal_d();
        let el = algebra::evaluate_product(d, &self.factors, &|g: &Generator| {
            Element::from_generator(d, *g)
        });
        BsdElement { mode: self.mode, points, element: el }
    }

    fn from_term(mode: Mode, t: &Term) -> Self {
        GeneralizedDiagram { mode, factors: t.factors.iter().map(|w| w.to_tree()).collect() }
    }
}

/// The insertion sign of the two parity modes:
/// odd:  (-1)^{(A~ - 1) n}, A~ the number of points of A, n the number of
///       generators written before the target point in B;
/// even: (-1)^{(A~ - e0)(n1 + n2)}, A~ the (stars + factors - 1) parity of A,
///       e0 the star flag of the target, n1 the number of product signs and
///       n2 the number of starred generators written before the point.
pub fn insertion_sign(b: &GeneralizedDiagram, point: u32, a: &GeneralizedDiagram) -> Result<BigInt> {
    let mut gens_before = 0i64;
    let mut stars_before = 0i64;
    let mut seps_before = 0i64;
    let mut target: Option<Generator> = None;
    'outer: for (fi, tree) in b.factors.iter().enumerate() {
        for g in tree.leaves() {
            if g.label == point {
                seps_before = fi as i64;
                target = Some(g);
                break 'outer;
            }
            gens_before += 1;
            if g.starred {
                stars_before += 1;
            }
        }
    }
    let target = target.ok_or(Error::NoSuchPoint(point))?;
    let exponent = match b.mode {
        Mode::OddD => {
            let a_points = a.point_count() as i64;
            (a_points - 1) * gens_before
        }
        Mode::EvenD => {
            let a_parity = a.star_count() as i64 + a.factors.len() as i64 - 1;
            let e0 = if target.starred { 1 } else { 0 };
            (a_parity - e0) * (seps_before + stars_before)
        }
    };
    Ok(if exponent.rem_euclid(2) == 0 { BigInt::one() } else { -BigInt::one() })
}

/// B with the diagram A substituted for the generator at `point`, including
/// the insertion sign, expanded into canonical diagrams. The supports must be
/// disjoint away from the replaced point.
pub fn insert(
    b: &GeneralizedDiagram,
    point: u32,
    a: &GeneralizedDiagram,
    result_points: usize,
) -> Result<BsdElement> {
    if a.mode != b.mode {
        return Err(Error::OperadMismatch);
    }
    let b_support: BTreeSet<u32> = b.leaves().iter().map(|g| g.label).collect();
    if !b_support.contains(&point) {
        return Err(Error::NoSuchPoint(point));
    }
    for g in a.leaves() {
        if g.label != point && b_support.contains(&g.label) {
            return Err(Error::LabelOverlap(g.label));
        }
    }
    let sign = insertion_sign(b, point, a)?;
    let d = b.mode.internal_d();
    let a_el = a.as_element(0).element;
    let el = algebra::evaluate_product(d, &b.factors, &|g: &Generator| {
        if g.label == point {
            a_el.clone()
        } else {
            Element::from_generator(d, *g)
        }
    });
    let mut out = BsdElement { mode: b.mode, points: result_points, element: el };
    out.scale(&sign);
    Ok(out)
}

fn shift_term(t: &Term, from: u32) -> Term {
    Term {
        factors: t
            .factors
            .iter()
            .map(|w| {
                LieWord(
                    w.0.iter()
                        .map(|g| {
                            if g.label >= from {
                                Generator { label: g.label + 1, ..*g }
                            } else {
                                *g
                            }
                        })
                        .collect(),
                )
            })
            .collect(),
    }
}

/// The summands substituted for a doubled point, with their written shapes
/// and signs: t -> t- t+ for a plain point; the three-term expansions for a
/// starred point (with the even-mode minus signs).
fn doubling_summands(mode: Mode, starred: bool, t_minus: u32, t_plus: u32) -> Vec<(GeneralizedDiagram, BigInt)> {
    let gen = |label: u32, star: bool| LieTree::leaf(mode.generator(label, star));
    if !starred {
        return vec![(
            GeneralizedDiagram { mode, factors: vec![gen(t_minus, false), gen(t_plus, false)] },
            BigInt::one(),
        )];
    }
    let bracket = GeneralizedDiagram {
        mode,
        factors: vec![LieTree::node(
            LieTree::leaf(mode.generator(t_minus, false)),
            LieTree::leaf(mode.generator(t_plus, false)),
        )],
    };
    match mode {
        Mode::OddD => vec![
            (GeneralizedDiagram { mode, factors: vec![gen(t_minus, false), gen(t_plus, true)] }, BigInt::one()),
            (GeneralizedDiagram { mode, factors: vec![gen(t_minus, true), gen(t_plus, false)] }, BigInt::one()),
            (bracket, BigInt::one()),
        ],
        Mode::EvenD => vec![
            (GeneralizedDiagram { mode, factors: vec![gen(t_minus, false), gen(t_plus, true)] }, BigInt::one()),
            (GeneralizedDiagram { mode, factors: vec![gen(t_minus, true), gen(t_plus, false)] }, -BigInt::one()),
            (bracket, -BigInt::one()),
        ],
    }
}

/// The unprojected point substitution: positions above the point shift up,
/// the point splits into the ordered pair (t, t+1), and the mode's doubling
/// expression is inserted with the insertion sign.
pub fn point_substitution(mode: Mode, term: &Term, points: usize, point: u32) -> Result<BsdElement> {
    let support: BTreeSet<u32> = term.labels().into_iter().collect();
    if !support.contains(&point) {
        return Err(Error::NoSuchPoint(point));
    }
    let starred = term
        .factors
        .iter()
        .flat_map(|w| w.0.iter())
        .find(|g| g.label == point)
        .map(|g| g.starred)
        .unwrap_or(false);
    let shifted = shift_term(term, point + 1);
    let b = GeneralizedDiagram::from_term(mode, &shifted);
    let mut out = BsdElement::zero(mode, points + 1);
    for (a, coeff) in doubling_summands(mode, starred, point, point + 1) {
        let mut piece = insert(&b, point, &a, points + 1)?;
        piece.scale(&coeff);
        out.add(&piece);
    }
    Ok(out)
}

/// d_t = P(point substitution).
pub fn point_differential(mode: Mode, term: &Term, points: usize, point: u32) -> Result<BsdElement> {
    Ok(projection_p(&point_substitution(mode, term, points, point)?))
}

/// d = sum over all points of the point differentials.
pub fn full_differential(x: &BsdElement) -> Result<BsdElement> {
    let mut out = BsdElement::zero(x.mode, x.points + 1);
    for (t, c) in &x.element.terms {
        for p in 1..=x.points as u32 {
            if !t.labels().contains(&p) {
                continue;
            }
            let mut piece = point_differential(x.mode, t, x.points, p)?;
            piece.scale(c);
            out.add(&piece);
        }
    }
    Ok(out)
}

/// One slice of a star-diagram complex with its boundary matrix into
/// (i, j+1).
#[derive(Debug, Clone)]
pub struct StarSlice {
    pub mode: Mode,
    pub i: usize,
    pub j: usize,
    pub basis: Vec<Term>,
    pub boundary: SparseIntMatrix,
}

#[derive(Debug, Clone)]
pub struct StarComplex {
    pub mode: Mode,
    pub slices: BTreeMap<(usize, usize), StarSlice>,
}

/// Basis of the (i, j) slice: all diagrams over all configuration classes.
pub fn star_slice_basis(mode: Mode, i: usize, j: usize) -> Result<Vec<Term>> {
    let mut out = Vec::new();
    for config in enumerate_configurations(i, j) {
        out.extend(bsd_basis(&config, mode)?);
    }
    Ok(out)
}

pub fn build_star_complex(mode: Mode, max_i: usize, max_basis: usize) -> Result<StarComplex> {
    let mut slices = BTreeMap::new();
    for i in 0..=max_i {
        let j_lo = if i == 0 { 0 } else { i.div_ceil(2) };
        for j in j_lo..=2 * i {
            let basis = star_slice_basis(mode, i, j)?;
            if basis.is_empty() {
                continue;
            }
            if basis.len() > max_basis {
                return Err(Error::ResourceCap(format!(
                    "star slice ({i},{j}) has {} diagrams (cap {max_basis})",
                    basis.len()
                )));
            }
            let target = star_slice_basis(mode, i, j + 1)?;
            let index: BTreeMap<Term, usize> =
                target.iter().enumerate().map(|(k, t)| (t.clone(), k)).collect();
            let mut boundary = SparseIntMatrix::zero(target.len(), basis.len());
            for (cidx, t) in basis.iter().enumerate() {
                let x = BsdElement::from_term(mode, j, t.clone());
                let dx = full_differential(&x)?;
                for (t2, c) in &dx.element.terms {
                    let row = *index.get(t2).ok_or_else(|| {
                        Error::Invariant(format!("differential escapes slice ({i},{})", j + 1))
                    })?;
                    boundary.add_to(row, cidx, c.clone());
                }
            }
            slices.insert((i, j), StarSlice { mode, i, j, basis, boundary });
        }
    }
    Ok(StarComplex { mode, slices })
}

impl StarComplex {
    pub fn dim(&self, i: usize, j: usize) -> usize {
        self.slices.get(&(i, j)).map(|s| s.basis.len()).unwrap_or(0)
    }

    pub fn check_d_squared(&self) -> Result<()> {
        for (&(i, j), slice) in &self.slices {
            if let Some(next) = self.slices.get(&(i, j + 1)) {
                if !next.boundary.mul(&slice.boundary).is_zero() {
                    return Err(Error::Invariant(format!(
                        "star boundary squared is nonzero out of ({i},{j})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn slice_homology(&self, i: usize, j: usize, ring: crate::homology::Ring) -> Result<crate::homology::HomologySummary> {
        let dim = self.dim(i, j);
        let into = match (j.checked_sub(1)).and_then(|jm| self.slices.get(&(i, jm))) {
            Some(prev) => prev.boundary.clone(),
            None => SparseIntMatrix::zero(dim, 0),
        };
        let out_of = match self.slices.get(&(i, j)) {
            Some(s) => s.boundary.clone(),
            None => SparseIntMatrix::zero(0, dim),
        };
        crate::homology::homology(&into, &out_of, ring)
    }
}

/// Spectral-sequence coordinates of a slice for knots in R^d:
/// p = -i, q = i d - j, homology degree p + q = i(d-1) - j.
pub fn spectral_coordinates(i: usize, j: usize, d: i64) -> (i64, i64) {
    (-(i as i64), i as i64 * d - j as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(points: usize, groups: &[&[u32]], stars: &[u32]) -> ABConfiguration {
        ABConfiguration::new(
            points,
            groups.iter().map(|g| g.iter().copied().collect()).collect(),
            stars.iter().copied().collect(),
        )
        .unwrap()
    }

    #[test]
    fn slice_terms_recover_their_configurations() {
        for mode in [Mode::OddD, Mode::EvenD] {
            for (i, j) in [(2usize, 3usize), (3, 4), (3, 5)] {
                for t in star_slice_basis(mode, i, j).unwrap() {
                    let c = ABConfiguration::from_term(j, &t);
                    assert_eq!(c.complexity(), i);
                    assert_eq!(c.points, j);
                }
            }
        }
    }

    #[test]
    fn single_chord_and_single_star_classes() {
        let one_chord = enumerate_configurations(1, 2);
        assert_eq!(one_chord.len(), 1);
        assert_eq!(one_chord[0].groups.len(), 1);
        assert!(one_chord[0].stars.is_empty());

        let one_star = enumerate_configurations(1, 1);
        assert_eq!(one_star.len(), 1);
        assert!(one_star[0].groups.is_empty());
        assert_eq!(one_star[0].stars.len(), 1);
    }

    #[test]
    fn figure_configuration_has_three_minimal_components() {
        // groups {1,3} and {2,4,5}, stars {4,6}
        let c = config(6, &[&[1, 3], &[2, 4, 5]], &[4, 6]);
        assert_eq!(c.minimal_components().len(), 3);
        assert_eq!(c.complexity(), 1 + 2 + 2);
    }

    #[test]
    fn example_basis_is_two_dimensional() {
        let c = config(6, &[&[1, 3], &[2, 4, 5]], &[4, 6]);
        for mode in [Mode::OddD, Mode::EvenD] {
            assert_eq!(bsd_basis(&c, mode).unwrap().len(), 2);
        }
    }

    #[test]
    fn singleton_bases() {
        let chord = config(2, &[&[1, 2]], &[]);
        assert_eq!(bsd_basis(&chord, Mode::OddD).unwrap().len(), 1);
        let star = config(1, &[], &[1]);
        assert_eq!(bsd_basis(&star, Mode::EvenD).unwrap().len(), 1);
    }

    #[test]
    fn insertion_sign_example_odd_mode() {
        // B = [x_{t2}, x_{t3*}] . [x_{t1*}, x_{t0}], A = [x_{t4}, x_{t5}] . x_{t6*}
        // sign (-1)^{(3-1)*3} = +1
        let mode = Mode::OddD;
        let g = |l: u32, s: bool| LieTree::leaf(mode.generator(l, s));
        let b = GeneralizedDiagram {
            mode,
            factors: vec![
                LieTree::node(g(2, false), g(3, true)),
                LieTree::node(g(1, true), g(0, false)),
            ],
        };
        let a = GeneralizedDiagram {
            mode,
            factors: vec![LieTree::node(g(4, false), g(5, false)), g(6, true)],
        };
        assert_eq!(insertion_sign(&b, 0, &a).unwrap(), BigInt::one());
    }

    #[test]
    fn insertion_sign_example_even_mode() {
        // same shapes with the wedge bookkeeping: (-1)^{(2-0)(1+2)} = +1
        let mode = Mode::EvenD;
        let g = |l: u32, s: bool| LieTree::leaf(mode.generator(l, s));
        let b = GeneralizedDiagram {
            mode,
            factors: vec![
                LieTree::node(g(2, false), g(3, true)),
                LieTree::node(g(1, true), g(0, false)),
            ],
        };
        let a = GeneralizedDiagram {
            mode,
            factors: vec![LieTree::node(g(4, false), g(5, false)), g(6, true)],
        };
        assert_eq!(insertion_sign(&b, 0, &a).unwrap(), BigInt::one());
    }

    #[test]
    fn inserting_a_single_generator_is_plain() {
        for mode in [Mode::OddD, Mode::EvenD] {
            let g = |l: u32, s: bool| LieTree::leaf(mode.generator(l, s));
            let b = GeneralizedDiagram {
                mode,
                factors: vec![LieTree::node(g(1, false), g(2, false)), g(3, true)],
            };
            for point in [1u32, 2, 3] {
                let a = GeneralizedDiagram { mode, factors: vec![g(9, point == 3)] };
                assert_eq!(insertion_sign(&b, point, &a).unwrap(), BigInt::one(), "{mode:?} {point}");
            }
        }
    }

    #[test]
    fn chord_differential_vanishes() {
        // every doubling of a chord point leaves an unstarred singleton
        for mode in [Mode::OddD, Mode::EvenD] {
            let chord = Term {
                factors: vec![LieWord(vec![mode.generator(1, false), mode.generator(2, false)])],
            };
            let x = BsdElement::from_term(mode, 2, chord);
            assert!(full_differential(&x).unwrap().is_zero(), "{mode:?}");
        }
    }

    #[test]
    fn star_differential_gives_the_chord() {
        // d of the single star diagram: the two product terms are special,
        // the bracket term survives (the source of the 1-term relation)
        for mode in [Mode::OddD, Mode::EvenD] {
            let star = Term { factors: vec![LieWord(vec![mode.generator(1, true)])] };
            let x = BsdElement::from_term(mode, 1, star);
            let dx = full_differential(&x).unwrap();
            assert_eq!(dx.element.terms.len(), 1, "{mode:?}");
            let (t, c) = dx.element.terms.iter().next().unwrap();
            let chord = Term {
                factors: vec![LieWord(vec![mode.generator(1, false), mode.generator(2, false)])],
            };
            assert_eq!(t, &chord);
            let expected = match mode {
                Mode::OddD => BigInt::one(),
                Mode::EvenD => -BigInt::one(),
            };
            assert_eq!(c, &expected, "{mode:?}");
        }
    }

    #[test]
    fn d_squared_vanishes_on_small_slices() {
        for mode in [Mode::OddD, Mode::EvenD] {
            let c = build_star_complex(mode, 3, 100_000).unwrap();
            c.check_d_squared().unwrap();
        }
    }

    #[test]
    fn refined_identity_per_point() {
        // d_t A + (x_{t-} - x_{t+}) . A  =  A|_{x_t = doubling}, unprojected.
        // x_{t-} . A places the singleton just left of the point (A's labels
        // from the point upward shift by one); x_{t+} . A places it just
        // right (labels above the point shift).
        for mode in [Mode::OddD, Mode::EvenD] {
            let d = mode.internal_d();
            for (i, j) in [(1usize, 1usize), (1, 2), (2, 2), (2, 3), (2, 4), (3, 4)] {
                for t in star_slice_basis(mode, i, j).unwrap() {
                    for p in 1..=j as u32 {
                        let unprojected = point_substitution(mode, &t, j, p).unwrap();
                        let projected = point_differential(mode, &t, j, p).unwrap();
                        let minus = algebra::mul(
                            &Element::from_generator(d, mode.generator(p, false)),
                            &Element::from_term(d, shift_term(&t, p)),
                        );
                        let plus = algebra::mul(
                            &Element::from_generator(d, mode.generator(p + 1, false)),
                            &Element::from_term(d, shift_term(&t, p + 1)),
                        );
                        let mut lhs = projected.element.clone();
                        lhs.add(&minus);
                        let mut neg = plus;
                        neg.negate();
                        lhs.add(&neg);
                        assert_eq!(lhs, unprojected.element, "{mode:?} ({i},{j}) point {p} term {t:?}");
                    }
                }
            }
        }
    }
}
