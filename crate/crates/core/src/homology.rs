//! Exact linear algebra over Z: ranks over Q by fraction-free elimination,
//! Smith normal form, and Betti/torsion extraction for chain-complex slices.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Sparse integer matrix. Entries map `(row, col)` to a nonzero value;
/// zeros are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseIntMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: BTreeMap<(usize, usize), BigInt>,
}

impl SparseIntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseIntMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SparseIntMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_entries<I>(rows: usize, cols: usize, it: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, BigInt)>,
    {
        let mut m = SparseIntMatrix::zero(rows, cols);
        for (r, c, v) in it {
            m.add_to(r, c, v);
        }
        m
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        assert!(r < self.rows && c < self.cols);
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: BigInt) {
        assert!(r < self.rows && c < self.cols);
        if v.is_zero() {
            return;
        }
        let e = self.entries.entry((r, c)).or_insert_with(BigInt::zero);
        *e += v;
        if e.is_zero() {
            self.entries.remove(&(r, c));
        }
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn transpose(&self) -> SparseIntMatrix {
        let mut m = SparseIntMatrix::zero(self.cols, self.rows);
        for (r, c, v) in self.iter() {
            m.set(c, r, v.clone());
        }
        m
    }

    /// self * other, sparse.
    pub fn mul(&self, other: &SparseIntMatrix) -> SparseIntMatrix {
        assert_eq!(self.cols, other.rows);
        // index other by row
        let mut by_row: BTreeMap<usize, Vec<(usize, &BigInt)>> = BTreeMap::new();
        for (r, c, v) in other.iter() {
            by_row.entry(r).or_default().push((c, v));
        }
        let mut out = SparseIntMatrix::zero(self.rows, other.cols);
        for (r, k, v) in self.iter() {
            if let Some(row) = by_row.get(&k) {
                for &(c, w) in row {
                    out.add_to(r, c, v * w);
                }
            }
        }
        out
    }

    /// Stack another matrix below this one (same number of columns).
    pub fn stack_below(&self, other: &SparseIntMatrix) -> SparseIntMatrix {
        assert_eq!(self.cols, other.cols);
        let mut out = SparseIntMatrix::zero(self.rows + other.rows, self.cols);
        for (r, c, v) in self.iter() {
            out.set(r, c, v.clone());
        }
        for (r, c, v) in other.iter() {
            out.set(self.rows + r, c, v.clone());
        }
        out
    }
}

fn row_content(row: &BTreeMap<usize, BigInt>) -> BigInt {
    let mut g = BigInt::zero();
    for v in row.values() {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Rank over the rationals, by exact integer (fraction-free) row elimination.
/// Rows are combined as `p*row - e*pivot_row` and divided by their content, so
/// every intermediate value stays an integer.
pub fn rank_q(m: &SparseIntMatrix) -> usize {
    let mut rows: Vec<BTreeMap<usize, BigInt>> = Vec::new();
    {
        let mut tmp: BTreeMap<usize, BTreeMap<usize, BigInt>> = BTreeMap::new();
        for (r, c, v) in m.iter() {
            tmp.entry(r).or_default().insert(c, v.clone());
        }
        for (_, row) in tmp {
            rows.push(row);
        }
    }
    let mut rank = 0usize;
    while !rows.is_empty() {
        // pick the sparsest row, break ties by smallest leading column
        let mut best = 0usize;
        for i in 1..rows.len() {
            let (li, lb) = (rows[i].len(), rows[best].len());
            if li < lb {
                best = i;
            }
        }
        let pivot_row = rows.swap_remove(best);
        if pivot_row.is_empty() {
            continue;
        }
        // pivot on the entry with the smallest magnitude (ties: lowest column)
        let (&pcol, _) = pivot_row
            .iter()
            .min_by(|(c1, v1), (c2, v2)| v1.abs().cmp(&v2.abs()).then(c1.cmp(c2)))
            .unwrap();
        let pval = pivot_row[&pcol].clone();
        rank += 1;
        for row in rows.iter_mut() {
            let e = match row.get(&pcol) {
                Some(e) => e.clone(),
                None => continue,
            };
            // row := p*row - e*pivot_row
            for (c, v) in row.iter_mut() {
                *v *= &pval;
                if let Some(pv) = pivot_row.get(c) {
                    *v -= &e * pv;
                }
            }
            for (c, pv) in pivot_row.iter() {
                if !row.contains_key(c) {
                    let w = -(&e * pv);
                    if !w.is_zero() {
                        row.insert(*c, w);
                    }
                }
            }
            row.retain(|_, v| !v.is_zero());
            let g = row_content(row);
            if g > BigInt::one() {
                for v in row.values_mut() {
                    *v /= &g;
                }
            }
        }
        rows.retain(|r| !r.is_empty());
    }
    rank
}

/// Result of a Smith normal form computation: the nonzero invariant factors
/// `d_1 | d_2 | ...` (all positive), and optionally unimodular transforms with
/// `p * m * q` diagonal equal to the factors.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub factors: Vec<BigInt>,
    pub p: Option<SparseIntMatrix>,
    pub q: Option<SparseIntMatrix>,
}

/// Smith normal form by gcd-driven elimination, pivoting on minimal-magnitude
/// entries to contain coefficient growth.
pub fn smith_normal_form(m: &SparseIntMatrix, with_transforms: bool) -> SmithForm {
    let rows = m.rows;
    let cols = m.cols;
    let mut a: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); cols]; rows];
    for (r, c, v) in m.iter() {
        a[r][c] = v.clone();
    }
    let mut p: Option<Vec<Vec<BigInt>>> = if with_transforms {
        Some((0..rows).map(|i| (0..rows).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect())
    } else {
        None
    };
    let mut q: Option<Vec<Vec<BigInt>>> = if with_transforms {
        Some((0..cols).map(|i| (0..cols).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect())
    } else {
        None
    };

    let dim = rows.min(cols);
    let mut t = 0usize;
    while t < dim {
        // locate the minimal-magnitude nonzero entry in the trailing submatrix
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() {
                    match pivot {
                        None => pivot = Some((i, j)),
                        Some((pi, pj)) => {
                            if a[i][j].abs() < a[pi][pj].abs() {
                                pivot = Some((i, j));
                            }
                        }
                    }
                }
            }
        }
        let (pi, pj) = match pivot {
            None => break,
            Some(x) => x,
        };
        a.swap(t, pi);
        if let Some(p) = p.as_mut() {
            p.swap(t, pi);
        }
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        if let Some(q) = q.as_mut() {
            for row in q.iter_mut() {
                row.swap(t, pj);
            }
        }

        'reduce: loop {
            // clear the pivot column by euclidean steps
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let quot = div_nearest(&a[i][t], &a[t][t]);
                if !quot.is_zero() {
                    for j in 0..cols {
                        let s = &quot * &a[t][j];
                        a[i][j] -= s;
                    }
                    if let Some(p) = p.as_mut() {
                        for j in 0..rows {
                            let s = &quot * &p[t][j];
                            p[i][j] -= s;
                        }
                    }
                }
                if !a[i][t].is_zero() {
                    // remainder smaller than pivot: swap it up and restart
                    a.swap(t, i);
                    if let Some(p) = p.as_mut() {
                        p.swap(t, i);
                    }
                    continue 'reduce;
                }
            }
            // clear the pivot row
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let quot = div_nearest(&a[t][j], &a[t][t]);
                if !quot.is_zero() {
                    for i in 0..rows {
                        let s = &quot * &a[i][t];
                        a[i][j] -= s;
                    }
                    if let Some(q) = q.as_mut() {
                        for i in 0..cols {
                            let s = &quot * &q[i][t];
                            q[i][j] -= s;
                        }
                    }
                }
                if !a[t][j].is_zero() {
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                    if let Some(q) = q.as_mut() {
                        for row in q.iter_mut() {
                            row.swap(t, j);
                        }
                    }
                    continue 'reduce;
                }
            }
            // divisibility: every entry of the trailing block must be a
            // multiple of the pivot
            for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(&a[i][j] % &a[t][t]).is_zero() {
                        // fold row i into row t and restart
                        for j2 in 0..cols {
                            let s = a[i][j2].clone();
                            a[t][j2] += s;
                        }
                        if let Some(p) = p.as_mut() {
                            for j2 in 0..rows {
                                let s = p[i][j2].clone();
                                p[t][j2] += s;
                            }
                        }
                        continue 'reduce;
                    }
                }
            }
            break;
        }
        if a[t][t].is_negative() {
            for j in 0..cols {
                a[t][j] = -a[t][j].clone();
            }
            if let Some(p) = p.as_mut() {
                for j in 0..rows {
                    p[t][j] = -p[t][j].clone();
                }
            }
        }
        t += 1;
    }

    let mut factors = Vec::new();
    for k in 0..dim {
        if !a[k][k].is_zero() {
            factors.push(a[k][k].clone());
        }
    }
    let dense_to_sparse = |d: &Vec<Vec<BigInt>>| {
        SparseIntMatrix::from_entries(
            d.len(),
            if d.is_empty() { 0 } else { d[0].len() },
            d.iter().enumerate().flat_map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(move |(j, v)| (i, j, v.clone()))
            }),
        )
    };
    SmithForm {
        factors,
        p: p.as_ref().map(dense_to_sparse),
        q: q.as_ref().map(dense_to_sparse),
    }
}

/// Division rounded to nearest, which keeps remainders at most half the divisor.
fn div_nearest(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut quot, rem) = a.div_rem(b);
    let two_rem: BigInt = &rem * 2;
    if two_rem.abs() > b.abs() {
        if (rem.is_negative()) == (b.is_negative()) {
            quot += 1;
        } else {
            quot -= 1;
        }
    }
    quot
}

/// Coefficient ring for homology computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ring {
    Q,
    Z,
}

/// Homology of one slice of a chain complex: Betti number, torsion invariant
/// factors, and the two boundary ranks that produced them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologySummary {
    pub dim: usize,
    pub betti: usize,
    pub torsion: Vec<BigInt>,
    pub rank_in: usize,
    pub rank_out: usize,
}

/// Homology at a slice with incoming boundary `into` (target dimension = this
/// slice) and outgoing boundary `out_of` (source dimension = this slice).
///
/// Torsion comes from the Smith form of the incoming boundary: because the
/// target of the outgoing boundary is free, every element that is torsion
/// modulo the image already lies in the kernel, so no kernel restriction is
/// needed.
pub fn homology(into: &SparseIntMatrix, out_of: &SparseIntMatrix, ring: Ring) -> Result<HomologySummary> {
    let dim = into.rows;
    if out_of.cols != dim {
        return Err(Error::ArityMismatch { expected: dim, got: out_of.cols });
    }
    if !out_of.mul(into).is_zero() {
        return Err(Error::NotAComplex);
    }
    let rank_in = rank_q(into);
    let rank_out = rank_q(out_of);
    let betti = dim - rank_in - rank_out;
    let torsion = match ring {
        Ring::Q => Vec::new(),
        Ring::Z => smith_normal_form(into, false)
            .factors
            .into_iter()
            .filter(|f| f > &BigInt::one())
            .collect(),
    };
    Ok(HomologySummary { dim, betti, torsion, rank_in, rank_out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn rank_of_zero_and_identity() {
        assert_eq!(rank_q(&SparseIntMatrix::zero(4, 7)), 0);
        assert_eq!(rank_q(&SparseIntMatrix::identity(5)), 5);
    }

    #[test]
    fn rank_of_constructed_rank_7_product() {
        // a (20 x 7) and b (7 x 20), both containing an identity block so the
        // factor ranks are exactly 7; the product then has rank exactly 7
        let mut rng = SplitMix64::new(7);
        let mut a = SparseIntMatrix::zero(20, 7);
        let mut b = SparseIntMatrix::zero(7, 20);
        for i in 0..7 {
            a.set(i, i, big(1));
            b.set(i, i, big(1));
        }
        for r in 7..20 {
            for c in 0..7 {
                a.set(r, c, big(rng.range_i64(-3, 3)));
            }
        }
        for r in 0..7 {
            for c in 7..20 {
                b.set(r, c, big(rng.range_i64(-3, 3)));
            }
        }
        let m = a.mul(&b);
        assert_eq!(rank_q(&m), 7);
    }

    #[test]
    fn snf_identity_and_zero() {
        let s = smith_normal_form(&SparseIntMatrix::identity(4), false);
        assert_eq!(s.factors, vec![big(1); 4]);
        let z = smith_normal_form(&SparseIntMatrix::zero(3, 5), false);
        assert!(z.factors.is_empty());
    }

    #[test]
    fn snf_diag_2_3_gives_1_6() {
        let mut m = SparseIntMatrix::zero(2, 2);
        m.set(0, 0, big(2));
        m.set(1, 1, big(3));
        let s = smith_normal_form(&m, false);
        assert_eq!(s.factors, vec![big(1), big(6)]);
    }

    #[test]
    fn snf_transforms_diagonalize() {
        let mut rng = SplitMix64::new(99);
        for _ in 0..20 {
            let rows = 2 + rng.below(4);
            let cols = 2 + rng.below(4);
            let mut m = SparseIntMatrix::zero(rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    m.set(r, c, big(rng.range_i64(-6, 6)));
                }
            }
            let s = smith_normal_form(&m, true);
            let d = s.p.as_ref().unwrap().mul(&m).mul(s.q.as_ref().unwrap());
            for (r, c, v) in d.iter() {
                assert_eq!(r, c, "transformed matrix must be diagonal");
                assert_eq!(v, &s.factors[r]);
            }
            let nnz_diag = d.iter().count();
            assert_eq!(nnz_diag, s.factors.len());
            // divisibility chain
            for w in s.factors.windows(2) {
                assert!((&w[1] % &w[0]).is_zero(), "{:?}", s.factors);
            }
            // rank over Q agrees with the number of invariant factors
            assert_eq!(rank_q(&m), s.factors.len());
        }
    }

    #[test]
    fn snf_determinant_magnitude() {
        // |det| of a square nonsingular matrix equals the product of factors
        let mut m = SparseIntMatrix::zero(3, 3);
        let vals = [[2, 1, 0], [-1, 3, 2], [0, 4, 1]];
        for r in 0..3 {
            for c in 0..3 {
                m.set(r, c, big(vals[r][c]));
            }
        }
        // det = 2*(3-8) - 1*(-1-0) + 0 = -9
        let s = smith_normal_form(&m, false);
        let prod: BigInt = s.factors.iter().product();
        assert_eq!(prod, big(9));
    }

    #[test]
    fn homology_free_and_torsion_cases() {
        // in = 0, out = 0, dim = 3 -> betti 3
        let h = homology(&SparseIntMatrix::zero(3, 0), &SparseIntMatrix::zero(0, 3), Ring::Z).unwrap();
        assert_eq!(h.betti, 3);
        assert!(h.torsion.is_empty());

        // in = (2) as 1x1, out = 0 -> betti 0, torsion {2}
        let mut two = SparseIntMatrix::zero(1, 1);
        two.set(0, 0, big(2));
        let h = homology(&two, &SparseIntMatrix::zero(0, 1), Ring::Z).unwrap();
        assert_eq!(h.betti, 0);
        assert_eq!(h.torsion, vec![big(2)]);
    }

    #[test]
    fn homology_rejects_non_complex() {
        let mut into = SparseIntMatrix::zero(2, 1);
        into.set(0, 0, big(1));
        let mut out = SparseIntMatrix::zero(1, 2);
        out.set(0, 0, big(1));
        assert_eq!(homology(&into, &out, Ring::Q), Err(Error::NotAComplex));
    }
}
