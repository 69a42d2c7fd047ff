//! Seeded random sampling of operad elements for the property suites.

use num_bigint::BigInt;

use crate::error::Result;
use crate::operad::{component_basis, OperadElement, OperadId};
use crate::rng::SplitMix64;

/// A random single basis term with coefficient 1.
pub fn random_basis_term(rng: &mut SplitMix64, operad: OperadId, arity: usize) -> Result<OperadElement> {
    let basis = component_basis(operad, arity)?;
    let t = basis[rng.below(basis.len())].clone();
    Ok(OperadElement::from_term(operad, arity, t.0))
}

/// A random homogeneous element: a few basis terms of one degree class with
/// small nonzero coefficients.
pub fn random_homogeneous(
    rng: &mut SplitMix64,
    operad: OperadId,
    arity: usize,
    max_terms: usize,
) -> Result<OperadElement> {
    let basis = component_basis(operad, arity)?;
    let pick = basis[rng.below(basis.len())].clone();
    let degree = pick.degree(operad.d);
    let same: Vec<_> = basis.into_iter().filter(|t| t.degree(operad.d) == degree).collect();
    let mut out = OperadElement::zero(operad, arity);
    let count = 1 + rng.below(max_terms.min(same.len()));
    for _ in 0..count {
        let t = same[rng.below(same.len())].clone();
        let mut c = rng.range_i64(-3, 3);
        if c == 0 {
            c = 1;
        }
        out.element.add_term(t.0, BigInt::from(c));
    }
    if out.is_zero() {
        out = OperadElement::from_term(operad, arity, same[0].0.clone());
    }
    Ok(out)
}

/// A random permutation of 1..=n.
pub fn random_permutation(rng: &mut SplitMix64, n: usize) -> Vec<u32> {
    let mut p: Vec<u32> = (1..=n as u32).collect();
    for i in (1..n).rev() {
        let j = rng.below(i + 1);
        p.swap(i, j);
    }
    p
}
