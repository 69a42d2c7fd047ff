//! End-to-end tables: the bigraded Betti numbers the engine produces for the
//! small complexes, pinned as regression values, and cross-path consistency
//! between the quotient, normalized, and star-diagram routes.

use std::collections::BTreeMap;

use operad_homology::checks::{betti_table, star_betti_table};
use operad_homology::hochschild::{build_complex, ComplexKind};
use operad_homology::homology::{rank_q, smith_normal_form, Ring};
use operad_homology::operad::OperadId;
use operad_homology::star_diagrams::{build_star_complex, Mode};

fn table(pairs: &[((usize, usize), usize)]) -> BTreeMap<(usize, usize), usize> {
    pairs.iter().copied().collect()
}

#[test]
fn zero_quotient_reproduces_the_known_first_term_values() {
    // knots in R^3: one class for the two-chord invariant, one in each of
    // (3,5) and (3,6), two at (4,7), three at (4,8)
    let zero = build_complex(ComplexKind::ZeroQuotient, OperadId::poiss(2), 4, 8, 2_000_000).unwrap();
    let t = betti_table(&zero, 4);
    let nonzero: BTreeMap<(usize, usize), usize> =
        t.into_iter().filter(|(_, b)| *b > 0).collect();
    assert_eq!(
        nonzero,
        table(&[
            ((0, 0), 1),
            ((2, 4), 1),
            ((3, 5), 1),
            ((3, 6), 1),
            ((4, 7), 2),
            ((4, 8), 3),
        ])
    );
}

#[test]
fn normalized_poisson_table_is_stable() {
    let norm = build_complex(ComplexKind::Normalized, OperadId::poiss(2), 3, 6, 2_000_000).unwrap();
    let t = betti_table(&norm, 3);
    assert_eq!(
        t,
        table(&[
            ((0, 0), 1),
            ((1, 2), 1),
            ((2, 3), 1),
            ((2, 4), 2),
            ((3, 4), 0),
            ((3, 5), 2),
            ((3, 6), 3),
        ])
    );
}

#[test]
fn star_complexes_agree_with_the_zero_quotients() {
    for (d, mode) in [(2i64, Mode::OddD), (1, Mode::EvenD)] {
        let zero = build_complex(ComplexKind::ZeroQuotient, OperadId::poiss(d), 3, 6, 2_000_000).unwrap();
        let star = build_star_complex(mode, 3, 2_000_000).unwrap();
        let tz = betti_table(&zero, 3);
        let ts = star_betti_table(&star, 3);
        let mut keys: std::collections::BTreeSet<(usize, usize)> = tz.keys().copied().collect();
        keys.extend(ts.keys().copied());
        for (i, j) in keys {
            if i == 0 {
                continue;
            }
            assert_eq!(
                tz.get(&(i, j)).copied().unwrap_or(0),
                ts.get(&(i, j)).copied().unwrap_or(0),
                "betti mismatch at ({i},{j}) for d'={d}"
            );
        }
    }
}

#[test]
fn integral_and_rational_betti_numbers_agree() {
    // over Z the Betti number must match the rational one, and the rank over
    // Q of each boundary equals its count of nonzero invariant factors
    let bv = build_complex(ComplexKind::Normalized, OperadId::bv(1).unwrap(), 3, 6, 2_000_000).unwrap();
    for (&(i, j), slice) in &bv.slices {
        let hq = bv.slice_homology(i, j, Ring::Q).unwrap();
        let hz = bv.slice_homology(i, j, Ring::Z).unwrap();
        assert_eq!(hq.betti, hz.betti, "({i},{j})");
        let snf = smith_normal_form(&slice.boundary, false);
        assert_eq!(rank_q(&slice.boundary), snf.factors.len(), "({i},{j})");
    }
}

#[test]
fn integral_torsion_tables() {
    // even bracket parameter: torsion-free in this window
    let c = build_complex(ComplexKind::Normalized, OperadId::poiss(2), 3, 6, 2_000_000).unwrap();
    for &(i, j) in c.slices.keys() {
        let h = c.slice_homology(i, j, Ring::Z).unwrap();
        assert!(h.torsion.is_empty(), "unexpected torsion at ({i},{j})");
        assert_eq!(h.dim, h.betti + h.rank_in + h.rank_out);
    }
    // odd bracket parameter: the complex carries 2- and 3-torsion
    let c = build_complex(ComplexKind::Normalized, OperadId::poiss(1), 3, 6, 2_000_000).unwrap();
    let mut torsion: BTreeMap<(usize, usize), Vec<String>> = BTreeMap::new();
    for &(i, j) in c.slices.keys() {
        let h = c.slice_homology(i, j, Ring::Z).unwrap();
        if !h.torsion.is_empty() {
            torsion.insert((i, j), h.torsion.iter().map(|t| t.to_string()).collect());
        }
    }
    let expected: BTreeMap<(usize, usize), Vec<String>> = [
        ((2usize, 4usize), vec!["2".to_string()]),
        ((3, 5), vec!["3".to_string()]),
        ((3, 6), vec!["2".to_string()]),
    ]
    .into_iter()
    .collect();
    assert_eq!(torsion, expected);
}
