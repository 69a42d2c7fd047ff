//! Brace operations on the total space of an operad, the circle product with
//! its Pre-Lie structure, the Lie bracket, and the star product.
//!
//! Gradings on an element of arity n: n_x = n - 1, |x| = deg(x) + n_x, and
//! deg_total = |x| + 1. The bracket is homogeneous of degree -1 for
//! deg_total, and the star product is additive for it.

use num_bigint::BigInt;
use num_traits::One;

use crate::combinat::increasing_tuples;
use crate::error::Result;
use crate::operad::{compose, multiplication, OperadElement};

fn sign_pow(e: i64) -> BigInt {
    if e.rem_euclid(2) == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// x{x_1,..,x_n}: the signed sum over all order-preserving substitutions of
/// the arguments into the inputs of x, remaining inputs filled with the
/// identity. The sign of a placement at slots i_1 < .. < i_n is
///
///   eps = sum_p n_{x_p} r_p + n_x sum_p deg(x_p) + sum_{p<q} n_{x_p} deg(x_q)
///
/// with r_p the number of inputs of x strictly after the slot of x_p.
pub fn brace(x: &OperadElement, args: &[OperadElement]) -> Result<OperadElement> {
    if args.is_empty() {
        return Ok(x.clone());
    }
    let l = x.arity;
    let n = args.len();
    let n_x = l as i64 - 1;
    let arg_n: Vec<i64> = args.iter().map(|a| a.arity as i64 - 1).collect();
    let arg_deg: Vec<i64> = args.iter().map(|a| a.degree()).collect::<Result<Vec<_>>>()?;
    let out_arity = (l as i64 - n as i64 + args.iter().map(|a| a.arity as i64).sum::<i64>()).max(0);
    let mut out = OperadElement::zero(x.operad, out_arity as usize);
    if n > l {
        return Ok(out);
    }
    let id = OperadElement::identity(x.operad);
    for placement in increasing_tuples(l, n) {
        let mut eps = 0i64;
        for (p, &slot) in placement.iter().enumerate() {
            let r_p = l as i64 - 1 - slot as i64;
            eps += arg_n[p] * r_p;
            eps += n_x * arg_deg[p];
            for q in p + 1..n {
                eps += arg_n[p] * arg_deg[q];
            }
        }
        let mut ys: Vec<OperadElement> = vec![id.clone(); l];
        for (p, &slot) in placement.iter().enumerate() {
            ys[slot] = args[p].clone();
        }
        let mut term = compose(x, &ys)?;
        term.scale(&sign_pow(eps));
        out.add(&term);
    }
    Ok(out)
}

/// x o y := x{y}.
pub fn circle(x: &OperadElement, y: &OperadElement) -> Result<OperadElement> {
    brace(x, std::slice::from_ref(y))
}

/// [x, y] := x o y - (-1)^{|x||y|} y o x.
pub fn op_bracket(x: &OperadElement, y: &OperadElement) -> Result<OperadElement> {
    let mut a = circle(x, y)?;
    let mut b = circle(y, x)?;
    b.scale(&-sign_pow(x.pipe_degree()? * y.pipe_degree()?));
    a.add(&b);
    Ok(a)
}

/// x * y := (-1)^{|x|} m{x, y}, with m the image of the associative product.
pub fn star(x: &OperadElement, y: &OperadElement) -> Result<OperadElement> {
    let m = multiplication(x.operad)?;
    let mut r = brace(&m, &[x.clone(), y.clone()])?;
    r.scale(&sign_pow(x.pipe_degree()?));
    Ok(r)
}

/// The Hochschild differential: dx = [m, x] = m o x - (-1)^{|x|} x o m.
pub fn differential(x: &OperadElement) -> Result<OperadElement> {
    let m = multiplication(x.operad)?;
    let mut a = circle(&m, x)?;
    let mut b = circle(x, &m)?;
    b.scale(&-sign_pow(x.pipe_degree()?));
    a.add(&b);
    Ok(a)
}
