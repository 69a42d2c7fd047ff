//! Assembly of the Hochschild complex of an operad-with-multiplication into
//! bigraded slices with explicit integer boundary matrices: the full complex,
//! the normalized subcomplex (no unstarred singleton blocks), the E0/F1
//! splitting, and the quotient by neighboring commutativity relations.
//!
//! Slices are indexed by (i, j) = (complexity, arity); the differential has
//! bidegree (0, 1).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

pub use crate::brace::differential;
use crate::combinat::{set_partitions, subsets};
use crate::error::{Error, Result};
use crate::graded_lie::{multilinear_basis, Generator, LieTree, LieWord};
use crate::homology::{homology, HomologySummary, Ring, SparseIntMatrix};
use crate::operad::{DiagramTerm, Family, OperadElement, OperadId};
use crate::{algebra, graded_lie};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ComplexKind {
    Full,
    Normalized,
    E0,
    F1,
    ZeroQuotient,
}

impl ComplexKind {
    fn admits(&self, t: &DiagramTerm) -> bool {
        match self {
            ComplexKind::Full => true,
            ComplexKind::Normalized | ComplexKind::E0 | ComplexKind::ZeroQuotient => {
                !t.has_unstarred_singleton()
            }
            ComplexKind::F1 => t.has_unstarred_singleton(),
        }
    }
}

/// One bigraded piece with its boundary matrix into the (i, j+1) slice.
#[derive(Debug, Clone)]
pub struct ChainComplexSlice {
    pub kind: ComplexKind,
    pub operad: OperadId,
    pub i: usize,
    pub j: usize,
    pub basis: Vec<DiagramTerm>,
    pub boundary: SparseIntMatrix,
}

#[derive(Debug, Clone)]
pub struct BuiltComplex {
    pub kind: ComplexKind,
    pub operad: OperadId,
    pub slices: BTreeMap<(usize, usize), ChainComplexSlice>,
    /// For the zero quotient: per slice, the relation columns in the ambient
    /// normalized basis.
    pub relations: BTreeMap<(usize, usize), SparseIntMatrix>,
}

/// Basis of the (i, j) slice: terms of arity j and complexity i admitted by
/// the kind, enumerated partition by partition.
pub fn slice_basis(kind: ComplexKind, operad: OperadId, i: usize, j: usize) -> Result<Vec<DiagramTerm>> {
    if operad.family == Family::BV && operad.d.rem_euclid(2) == 0 {
        return Err(Error::EvenBvParameter(operad.d));
    }
    let mut out = Vec::new();
    if j == 0 {
        if i == 0 && operad.with_unit_component {
            let t = DiagramTerm(algebra::Term::empty());
            if kind.admits(&t) {
                out.push(t);
            }
        }
        return Ok(out);
    }
    match operad.family {
        Family::Assoc | Family::Comm | Family::Lie => {
            for t in crate::operad::component_basis(operad, j)? {
                if t.complexity() == i && kind.admits(&t) {
                    out.push(t);
                }
            }
            return Ok(out);
        }
        Family::Poiss | Family::BV => {}
    }
    let labels: Vec<u32> = (1..=j as u32).collect();
    let d = operad.d;
    for partition in set_partitions(&labels) {
        let blocks = partition.len();
        // complexity = (j - #blocks) + #stars
        if j < blocks {
            continue;
        }
        let base = j - blocks;
        if i < base {
            continue;
        }
        let star_count = i - base;
        if operad.family == Family::Poiss {
            if star_count != 0 {
                continue;
            }
            push_slice_terms(kind, d, &partition, &[], &mut out)?;
        } else {
            if star_count > j {
                continue;
            }
            for stars in subsets(&labels) {
                if stars.len() != star_count {
                    continue;
                }
                push_slice_terms(kind, d, &partition, &stars, &mut out)?;
            }
        }
    }
    Ok(out)
}

fn push_slice_terms(
    kind: ComplexKind,
    d: i64,
    partition: &[Vec<u32>],
    stars: &[u32],
    out: &mut Vec<DiagramTerm>,
) -> Result<()> {
    // kind predicates depend only on the star-partition shape
    let starset: std::collections::BTreeSet<u32> = stars.iter().copied().collect();
    let has_unstarred_singleton = partition
        .iter()
        .any(|b| b.len() == 1 && !starset.contains(&b[0]));
    let admitted = match kind {
        ComplexKind::Full => true,
        ComplexKind::F1 => has_unstarred_singleton,
        _ => !has_unstarred_singleton,
    };
    if !admitted {
        return Ok(());
    }
    let mut blocks: Vec<&Vec<u32>> = partition.iter().collect();
    blocks.sort_by_key(|b| b[0]);
    let mut per_block: Vec<Vec<LieWord>> = Vec::with_capacity(blocks.len());
    for block in &blocks {
        let gens: Vec<Generator> = block
            .iter()
            .map(|&l| {
                if starset.contains(&l) {
                    Generator { label: l, degree: -d, starred: true }
                } else {
                    Generator::new(l, 0)
                }
            })
            .collect();
        per_block.push(multilinear_basis(&gens, d)?);
    }
    let mut idx = vec![0usize; per_block.len()];
    loop {
        let factors: Vec<LieWord> = idx
            .iter()
            .enumerate()
            .map(|(b, &k)| per_block[b][k].clone())
            .collect();
        out.push(DiagramTerm(algebra::Term { factors }));
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

/// The j-range of potentially nonempty slices at complexity i.
pub fn slice_j_range(kind: ComplexKind, operad: OperadId, i: usize, j_cap: usize) -> (usize, usize) {
    if i == 0 {
        return match kind {
            ComplexKind::Full | ComplexKind::F1 => (0, j_cap),
            _ => (0, 0),
        };
    }
    match kind {
        ComplexKind::Full | ComplexKind::F1 => (0, j_cap),
        ComplexKind::Normalized | ComplexKind::E0 | ComplexKind::ZeroQuotient => {
            if operad.family == Family::BV {
                // a group of size a with all points starred has complexity
                // 2a - 1, so j can fall below i
                (i.div_ceil(2), 2 * i)
            } else {
                (i + 1, 2 * i)
            }
        }
    }
}

/// Image of the differential of a basis term, expanded in a target slice
/// index. Terms outside the target basis raise an invariant error.
fn boundary_column(
    kind: ComplexKind,
    operad: OperadId,
    term: &DiagramTerm,
    arity: usize,
    target: &BTreeMap<algebra::Term, usize>,
) -> Result<Vec<(usize, BigInt)>> {
    let x = OperadElement::from_term(operad, arity, term.0.clone());
    let dx = differential(&x)?;
    let mut col = Vec::new();
    for (t, c) in &dx.element.terms {
        match target.get(t) {
            Some(&row) => col.push((row, c.clone())),
            None => {
                let dt = DiagramTerm(t.clone());
                if kind.admits(&dt) {
                    return Err(Error::Invariant(format!(
                        "boundary term escapes the ({}-slice) target basis: {t:?}",
                        dt.complexity()
                    )));
                }
                return Err(Error::Invariant(format!(
                    "boundary of a {kind:?} term leaves the subcomplex: {t:?}"
                )));
            }
        }
    }
    Ok(col)
}

/// Build all slices with complexity <= max_i. For the unbigraded families
/// (Assoc, Comm) everything lives in the i = 0 row with j the arity. The
/// basis-size cap aborts oversized builds with a resource error.
pub fn build_complex(
    kind: ComplexKind,
    operad: OperadId,
    max_i: usize,
    j_cap: usize,
    max_basis: usize,
) -> Result<BuiltComplex> {
    if kind == ComplexKind::ZeroQuotient && operad.family != Family::Poiss {
        return Err(Error::Invariant(
            "the neighboring-commutativity quotient is defined for the Poisson family".into(),
        ));
    }
    let mut built = BuiltComplex {
        kind,
        operad,
        slices: BTreeMap::new(),
        relations: BTreeMap::new(),
    };
    let ambient = if kind == ComplexKind::ZeroQuotient { ComplexKind::Normalized } else { kind };
    for i in 0..=max_i {
        let (j_lo, j_hi) = slice_j_range(ambient, operad, i, j_cap);
        for j in j_lo..=j_hi {
            let basis = slice_basis(ambient, operad, i, j)?;
            if basis.len() > max_basis {
                return Err(Error::ResourceCap(format!(
                    "slice ({i},{j}) has {} basis terms (cap {max_basis})",
                    basis.len()
                )));
            }
            if basis.is_empty() {
                continue;
            }
            let target_basis = slice_basis(ambient, operad, i, j + 1)?;
            let target: BTreeMap<algebra::Term, usize> = target_basis
                .iter()
                .enumerate()
                .map(|(k, t)| (t.0.clone(), k))
                .collect();
            let mut boundary = SparseIntMatrix::zero(target_basis.len(), basis.len());
            for (cidx, t) in basis.iter().enumerate() {
                for (row, v) in boundary_column(ambient, operad, t, j, &target)? {
                    boundary.set(row, cidx, v);
                }
            }
            built.slices.insert(
                (i, j),
                ChainComplexSlice { kind, operad, i, j, basis, boundary },
            );
        }
    }
    if kind == ComplexKind::ZeroQuotient {
        for ((i, j), slice) in &built.slices {
            let rel = relation_matrix(operad, &slice.basis, *i, *j)?;
            built.relations.insert((*i, *j), rel);
        }
    }
    Ok(built)
}

impl BuiltComplex {
    pub fn slice(&self, i: usize, j: usize) -> Option<&ChainComplexSlice> {
        self.slices.get(&(i, j))
    }

    pub fn dim(&self, i: usize, j: usize) -> usize {
        match self.kind {
            ComplexKind::ZeroQuotient => {
                let ambient = self.slices.get(&(i, j)).map(|s| s.basis.len()).unwrap_or(0);
                let r = self
                    .relations
                    .get(&(i, j))
                    .map(crate::homology::rank_q)
                    .unwrap_or(0);
                ambient - r
            }
            _ => self.slices.get(&(i, j)).map(|s| s.basis.len()).unwrap_or(0),
        }
    }

    /// Verify that consecutive boundaries compose to zero on every slice.
    pub fn check_d_squared(&self) -> Result<()> {
        for (&(i, j), slice) in &self.slices {
            if let Some(next) = self.slices.get(&(i, j + 1)) {
                if !next.boundary.mul(&slice.boundary).is_zero() {
                    return Err(Error::Invariant(format!(
                        "boundary squared is nonzero out of slice ({i},{j})"
                    )));
                }
            } else if !slice.boundary.is_zero() && self.dim(i, j + 1) == 0 {
                return Err(Error::Invariant(format!(
                    "boundary out of ({i},{j}) targets an empty slice"
                )));
            }
        }
        Ok(())
    }

    /// Homology of the (i, j) slice. For the zero quotient the Betti number
    /// is computed from ranks of stacked matrices, without choosing
    /// representatives.
    pub fn slice_homology(&self, i: usize, j: usize, ring: Ring) -> Result<HomologySummary> {
        match self.kind {
            ComplexKind::ZeroQuotient => self.zero_quotient_homology(i, j),
            _ => {
                let dim = self.dim(i, j);
                let into = match (j.checked_sub(1)).and_then(|jm| self.slices.get(&(i, jm))) {
                    Some(prev) => prev.boundary.clone(),
                    None => SparseIntMatrix::zero(dim, 0),
                };
                let out_of = match self.slices.get(&(i, j)) {
                    Some(s) => s.boundary.clone(),
                    None => SparseIntMatrix::zero(0, dim),
                };
                homology(&into, &out_of, ring)
            }
        }
    }

    fn zero_quotient_homology(&self, i: usize, j: usize) -> Result<HomologySummary> {
        let dim_v = self.slices.get(&(i, j)).map(|s| s.basis.len()).unwrap_or(0);
        let empty = SparseIntMatrix::zero(0, 0);
        let rel_here = self.relations.get(&(i, j)).unwrap_or(&empty);
        let rank_rel_here = crate::homology::rank_q(rel_here);
        let dim = dim_v - rank_rel_here;

        // rank of the induced boundary out of (i, j)
        let rank_out = self.induced_boundary_rank(i, j);
        // rank of the induced boundary into (i, j)
        let rank_in = if j == 0 { 0 } else { self.induced_boundary_rank(i, j - 1) };
        Ok(HomologySummary {
            dim,
            betti: dim - rank_out - rank_in,
            torsion: Vec::new(),
            rank_in,
            rank_out,
        })
    }

    /// Rank of the map (V_j / R_j) -> (V_{j+1} / R_{j+1}) induced by the
    /// ambient boundary: rank([d_j | R_{j+1}]) - rank(R_{j+1}). Relations are
    /// boundary-invariant, so columns of d_j over R_j do not change the span.
    fn induced_boundary_rank(&self, i: usize, j: usize) -> usize {
        let slice = match self.slices.get(&(i, j)) {
            Some(s) => s,
            None => return 0,
        };
        let empty_rows = slice.boundary.rows;
        let default = SparseIntMatrix::zero(empty_rows, 0);
        let rel_next = self.relations.get(&(i, j + 1)).unwrap_or(&default);
        let mut stacked = SparseIntMatrix::zero(empty_rows, slice.boundary.cols + rel_next.cols);
        for (r, c, v) in slice.boundary.iter() {
            stacked.set(r, c, v.clone());
        }
        for (r, c, v) in rel_next.iter() {
            stacked.set(r, slice.boundary.cols + c, v.clone());
        }
        crate::homology::rank_q(&stacked) - crate::homology::rank_q(rel_next)
    }
}

/// Split a BV element into its E0 part (no unstarred singleton blocks) and
/// F1 part (the rest). Each part spans a subcomplex.
pub fn split_e0_f1(x: &OperadElement) -> (OperadElement, OperadElement) {
    let mut e0 = OperadElement::zero(x.operad, x.arity);
    let mut f1 = OperadElement::zero(x.operad, x.arity);
    for (t, c) in &x.element.terms {
        if t.has_unstarred_singleton() {
            f1.element.add_term(t.clone(), c.clone());
        } else {
            e0.element.add_term(t.clone(), c.clone());
        }
    }
    (e0, f1)
}

/// Relation columns of the neighboring-commutativity quotient in one slice:
/// every product of brackets in which some bracket word contains a literal
/// inner bracket [x_p, x_{p+1}], expanded over the canonical basis.
fn relation_matrix(
    operad: OperadId,
    basis: &[DiagramTerm],
    _i: usize,
    j: usize,
) -> Result<SparseIntMatrix> {
    let d = operad.d;
    let index: BTreeMap<algebra::Term, usize> = basis
        .iter()
        .enumerate()
        .map(|(k, t)| (t.0.clone(), k))
        .collect();
    // collect the distinct partitions of the slice
    let mut partitions: Vec<Vec<Vec<u32>>> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for t in basis {
        let blocks: Vec<Vec<u32>> = t
            .blocks()
            .into_iter()
            .map(|b| b.into_iter().collect())
            .collect();
        if seen.insert(blocks.clone()) {
            partitions.push(blocks);
        }
    }
    let mut columns: Vec<Vec<(usize, BigInt)>> = Vec::new();
    for blocks in &partitions {
        for (bi, block) in blocks.iter().enumerate() {
            for p in 1..j as u32 {
                if !block.contains(&p) || !block.contains(&(p + 1)) {
                    continue;
                }
                // words on the block with [x_p, x_{p+1}] as an atomic leaf,
                // the pair marker reusing label p
                let reduced: Vec<Generator> = block
                    .iter()
                    .filter(|&&l| l != p + 1)
                    .map(|&l| Generator::new(l, 0))
                    .collect();
                let marker_words = multilinear_basis(&reduced, d)?;
                // canonical words on the other blocks
                let mut other_words: Vec<Vec<LieWord>> = Vec::new();
                for (oi, other) in blocks.iter().enumerate() {
                    if oi == bi {
                        continue;
                    }
                    let gens: Vec<Generator> =
                        other.iter().map(|&l| Generator::new(l, 0)).collect();
                    other_words.push(multilinear_basis(&gens, d)?);
                }
                for mw in &marker_words {
                    // substitute the pair bracket for the marker and
                    // canonicalize the block word
                    let tree = marker_tree(mw, p);
                    let expanded = graded_lie::canonicalize(d, &tree)?;
                    // distribute over the other blocks' word choices
                    let mut choice = vec![0usize; other_words.len()];
                    loop {
                        let mut col: BTreeMap<usize, BigInt> = BTreeMap::new();
                        for (w, c) in &expanded.terms {
                            let mut factors: Vec<LieWord> = vec![w.clone()];
                            for (k, words) in other_words.iter().enumerate() {
                                factors.push(words[choice[k]].clone());
                            }
                            let (t, s) = algebra::canonical_sort(d, factors);
                            if let Some(&row) = index.get(&t) {
                                let e = col.entry(row).or_insert_with(BigInt::zero);
                                *e += c * s;
                            } else {
                                return Err(Error::Invariant(
                                    "relation term escapes the slice basis".into(),
                                ));
                            }
                        }
                        col.retain(|_, v| !v.is_zero());
                        if !col.is_empty() {
                            columns.push(col.into_iter().collect());
                        }
                        let mut pos = other_words.len();
                        let mut done = other_words.is_empty();
                        while pos > 0 {
                            pos -= 1;
                            choice[pos] += 1;
                            if choice[pos] < other_words[pos].len() {
                                break;
                            }
                            choice[pos] = 0;
                            if pos == 0 {
                                done = true;
                            }
                        }
                        if done {
                            break;
                        }
                    }
                }
            }
        }
    }
    let mut m = SparseIntMatrix::zero(basis.len(), columns.len());
    for (c, col) in columns.iter().enumerate() {
        for (r, v) in col {
            m.set(*r, c, v.clone());
        }
    }
    Ok(m)
}

fn marker_tree(word: &LieWord, pair_label: u32) -> LieTree {
    // rebuild the left-normed word, replacing the marker leaf by the bracket
    // [x_p, x_{p+1}]
    let leaf = |g: &Generator| {
        if g.label == pair_label {
            LieTree::node(
                LieTree::leaf(Generator::new(pair_label, 0)),
                LieTree::leaf(Generator::new(pair_label + 1, 0)),
            )
        } else {
            LieTree::leaf(*g)
        }
    };
    let mut it = word.0.iter();
    let mut t = leaf(it.next().expect("empty word"));
    for g in it {
        t = LieTree::node(t, leaf(g));
    }
    t
}

/// Reduce a Poisson element modulo the neighboring commutativity relations:
/// the canonical-basis reduction against the echelonized relation span, over
/// the rationals.
pub fn zero_quotient_reduce(x: &OperadElement) -> Result<BTreeMap<DiagramTerm, BigRational>> {
    if x.operad.family != Family::Poiss {
        return Err(Error::OperadMismatch);
    }
    let mut by_slice: BTreeMap<(usize, usize), Vec<(algebra::Term, BigInt)>> = BTreeMap::new();
    for (t, c) in &x.element.terms {
        let dt = DiagramTerm(t.clone());
        by_slice
            .entry((dt.complexity(), x.arity))
            .or_default()
            .push((t.clone(), c.clone()));
    }
    let mut out: BTreeMap<DiagramTerm, BigRational> = BTreeMap::new();
    for ((i, j), terms) in by_slice {
        let basis = slice_basis(ComplexKind::Normalized, x.operad, i, j)?;
        let index: BTreeMap<algebra::Term, usize> = basis
            .iter()
            .enumerate()
            .map(|(k, t)| (t.0.clone(), k))
            .collect();
        let rel = relation_matrix(x.operad, &basis, i, j)?;
        let echelon = echelonize_q(&rel);
        let mut vec: BTreeMap<usize, BigRational> = BTreeMap::new();
        for (t, c) in terms {
            let row = *index.get(&t).ok_or_else(|| {
                Error::Invariant("element term is not in the normalized basis".into())
            })?;
            let e = vec.entry(row).or_insert_with(BigRational::zero);
            *e += BigRational::from_integer(c);
        }
        reduce_against(&mut vec, &echelon);
        for (row, v) in vec {
            if !v.is_zero() {
                out.insert(DiagramTerm(basis[row].0.clone()), v);
            }
        }
    }
    Ok(out)
}

/// Column echelon form of an integer matrix over Q: sorted pivot rows with
/// reduced columns.
fn echelonize_q(m: &SparseIntMatrix) -> Vec<(usize, BTreeMap<usize, BigRational>)> {
    let mut cols: Vec<BTreeMap<usize, BigRational>> = Vec::new();
    {
        let mut tmp: BTreeMap<usize, BTreeMap<usize, BigRational>> = BTreeMap::new();
        for (r, c, v) in m.iter() {
            tmp.entry(c)
                .or_default()
                .insert(r, BigRational::from_integer(v.clone()));
        }
        for (_, col) in tmp {
            cols.push(col);
        }
    }
    let mut echelon: Vec<(usize, BTreeMap<usize, BigRational>)> = Vec::new();
    for mut col in cols {
        reduce_against(&mut col, &echelon);
        if let Some((&pivot, _)) = col.iter().next() {
            let pval = col[&pivot].clone();
            for v in col.values_mut() {
                *v /= pval.clone();
            }
            echelon.push((pivot, col));
            echelon.sort_by_key(|(p, _)| *p);
        }
    }
    echelon
}

fn reduce_against(vec: &mut BTreeMap<usize, BigRational>, echelon: &[(usize, BTreeMap<usize, BigRational>)]) {
    for (pivot, col) in echelon {
        let coeff = match vec.get(pivot) {
            Some(c) if !c.is_zero() => c.clone(),
            _ => continue,
        };
        for (r, v) in col {
            let e = vec.entry(*r).or_insert_with(BigRational::zero);
            *e -= &coeff * v;
        }
        vec.retain(|_, v| !v.is_zero());
    }
}

/// The relation span is closed under the differential: the reduction of the
/// boundary of every relation column vanishes. Returns the checked count.
pub fn zero_quotient_boundary_invariance(operad: OperadId, i: usize, j: usize) -> Result<usize> {
    let basis = slice_basis(ComplexKind::Normalized, operad, i, j)?;
    let rel = relation_matrix(operad, &basis, i, j)?;
    let mut checked = 0;
    for cidx in 0..rel.cols {
        let mut x = OperadElement::zero(operad, j);
        for (r, c, v) in rel.iter() {
            if c == cidx {
                x.element.add_term(basis[r].0.clone(), v.clone());
            }
        }
        let dx = differential(&x)?;
        let reduced = zero_quotient_reduce(&dx)?;
        if !reduced.is_empty() {
            return Err(Error::Invariant(format!(
                "relation column {cidx} of slice ({i},{j}) has a boundary outside the relation span"
            )));
        }
        checked += 1;
    }
    Ok(checked)
}
