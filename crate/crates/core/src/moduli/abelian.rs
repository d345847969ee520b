//! `(1, d)`-polarised abelian surfaces via the wedge lattice, and the
//! O'Grady reduction to square-free level.

use serde::Serialize;

use super::component::components;
use super::k3::binary_block;
use super::report::{build, two_pow_rho_plus_one, AutPolicy, BoundReport, Exponent, ReportInput};
use super::sharp::{assemble, choose_lambda_sharp};
use super::ModuliSpec;
use crate::arith::{exact_sqrt, factorize, is_squarefree, squarefree_part};
use crate::catalog;
use crate::discform::{isometry_cap, FiniteQuadraticForm};
use crate::error::{Error, Result};
use crate::lattice::{GramLattice, Signature};
use crate::matrix::{IntMatrix, Rat};
use crate::normal_form::integer_kernel;

/// `L ^ L` for `L = Z^4` on `e12, e13, e14, e23, e24, e34`, with
/// `x ^ y = (x, y) e1234`.
pub fn wedge_lattice() -> GramLattice {
    let mut g = IntMatrix::zeros(6, 6);
    for (i, j, v) in [(0, 5, 1), (1, 4, -1), (2, 3, 1)] {
        g[(i, j)] = v;
        g[(j, i)] = v;
    }
    GramLattice::new("L^L", g).expect("symmetric")
}

#[derive(Clone, Debug, Serialize)]
pub struct WedgeData {
    pub d: i128,
    pub wedge: GramLattice,
    /// `w_d = e13 + d e24`.
    pub w_d: Vec<i128>,
    pub w_d_norm: i128,
    /// Columns `e12, e34, e14, e23, e13 - d e24`.
    pub basis: IntMatrix,
    /// `U + U + <2d>` in the wedge pairing.
    pub lambda_d: GramLattice,
    /// `|disc|` of the complement computed from an integer kernel.
    pub kernel_disc: i128,
    pub signature: Signature,
    /// The explicit basis has Gram `U + U + <l, l>` and spans `w_d^perp`.
    pub split_ok: bool,
    pub sign_note: String,
}

pub fn wedge_lambda_d(d: i128) -> Result<WedgeData> {
    if d < 1 {
        return Err(Error::BadParams(format!("d must be positive, got {d}")));
    }
    let wedge = wedge_lattice();
    let w_d = vec![0, 1, 0, 0, d, 0];
    let w_d_norm = wedge.norm(&w_d);
    let basis = IntMatrix::from_cols(&[
        vec![1, 0, 0, 0, 0, 0],
        vec![0, 0, 0, 0, 0, 1],
        vec![0, 0, 1, 0, 0, 0],
        vec![0, 0, 0, 1, 0, 0],
        vec![0, 1, 0, 0, -d, 0],
    ])?;
    let lambda_d = GramLattice::new("Lambda_d", basis.congruence(wedge.gram())?)?;
    let row = IntMatrix::from_rows(&[wedge.gram().mul_vec(&w_d)])?;
    let kernel = integer_kernel(&row);
    let kernel_disc = kernel.congruence(wedge.gram())?.det().abs();
    let u = catalog::hyperbolic();
    let expected = GramLattice::direct_sum(&[&u, &u, &catalog::rank_one(2 * d)]);
    let orthogonal = (0..5).all(|j| wedge.pair(&basis.col(j), &w_d) == 0);
    let split_ok = orthogonal && lambda_d.gram() == expected.gram() && kernel_disc == lambda_d.disc();
    let signature = lambda_d.signature()?;
    let sign_note = format!(
        "(w_d, w_d) = {w_d_norm} and Lambda_d = U + U + <{}> has signature ({}, {}); \
         the period domain needs (2, 3), so Lambda_d(-1) = U + U + Z(-{}) is used",
        2 * d,
        signature.positive,
        signature.negative,
        2 * d
    );
    Ok(WedgeData { d, wedge, w_d, w_d_norm, basis, lambda_d, kernel_disc, signature, split_ok, sign_note })
}

/// Square-free part `k(d)`; `d / k(d)` is a square.
pub fn k_of_d(d: i128) -> i128 {
    squarefree_part(d)
}

/// Number of subgroups of `(Z/p^r)^4` isomorphic to `(Z/p^r)^2`.
pub fn ogrady_subgroup_count(p: i128, r: u32) -> Result<i128> {
    if p < 2 || factorize(p) != vec![(p, 1)] {
        return Err(Error::BadParams(format!("{p} is not prime")));
    }
    if r == 0 {
        return Err(Error::BadParams("r must be positive".into()));
    }
    Ok(p.pow(4 * r - 4) * (p * p + 1) * (p * p + p + 1))
}

/// Bound for the degree of `A_(1, n^2 k) -> A_(1, k)`: the number of
/// subgroups of `(Z/nk)^4` isomorphic to `(Z/nk)^2`.
pub fn ogrady_degree_bound(n: i128, k: i128) -> Result<i128> {
    if n < 1 || k < 1 {
        return Err(Error::BadParams(format!("n, k must be positive, got n={n}, k={k}")));
    }
    factorize(n * k).into_iter().try_fold(1i128, |acc, (p, r)| Ok(acc * ogrady_subgroup_count(p, r)?))
}

fn level_report(level: i128) -> Result<BoundReport> {
    let c = components(&ModuliSpec::abelian(level)?)?
        .pop()
        .ok_or_else(|| Error::Internal("abelian moduli always have a component".into()))?;
    let sharp = choose_lambda_sharp(&c)?;
    let fqf = FiniteQuadraticForm::from_lattice(&c.lambda_h)?;
    let mut r = build(ReportInput {
        c: &c,
        sharp: &sharp,
        policy: AutPolicy::Eps,
        exact: fqf.enumerate_isometries(isometry_cap()).exact,
        ell: fqf.ell(),
        bound: (Some(two_pow_rho_plus_one(2 * level)), "2^(rho(disc)+1)"),
    });
    r.n = None;
    r.cover_degree = Some(2);
    r.notes.push(wedge_lambda_d(level)?.sign_note);
    Ok(r)
}

/// Composed report: O'Grady reduction from level `d` to `k(d)` followed by
/// the square-free bound at level `k(d)`.
pub fn abelian_bound_report(d: i128) -> Result<BoundReport> {
    if d < 1 {
        return Err(Error::BadParams(format!("d must be positive, got {d}")));
    }
    let k = k_of_d(d);
    let n = exact_sqrt(d / k).ok_or_else(|| Error::Internal(format!("{d}/{k} is not a square")))?;
    let mut r = level_report(k)?;
    r.d = d;
    r.k = Some(k);
    if n == 1 {
        return Ok(r);
    }
    // the reduction has degree O((nk)^(4+eps)) = O(d^(2+eps) k^(2+eps))
    let level = r.final_exponent();
    let k_exp = Exponent { value: level.value + Rat::from_integer(2), eps: true };
    let d_exp = Exponent::new(2, 1, true);
    r.component = format!("level k={k}");
    r.ogrady_factor = Some(ogrady_degree_bound(n, k)?.to_string());
    r.d_exp = Some(d_exp.to_string());
    r.k_exp = Some(k_exp.to_string());
    r.final_exp = if k == 1 { d_exp.value } else { d_exp.value + k_exp.value };
    r.eps = true;
    r.constant = "C_eps";
    r.notes.push(format!("O'Grady reduction with n={n}, k={k}"));
    Ok(r)
}

/// Square-free `d = a X^2 - b X Y + c Y^2` with coprime `X, Y`: `Z(-2d)`
/// goes into `[[-2a, b], [b, -2c]]`.
pub fn abelian_quadratic_report(d: i128, a: i128, b: i128, c: i128) -> Result<BoundReport> {
    if !is_squarefree(d) {
        return Err(Error::NotApplicable(format!("{d} is not square-free")));
    }
    let q = catalog::q_abc_neg(a, b, c)?;
    let comp = components(&ModuliSpec::abelian(d)?)?
        .pop()
        .ok_or_else(|| Error::Internal("abelian moduli always have a component".into()))?;
    let block = binary_block(&comp.q_block, q, a, b, c, d)?;
    let sharp = assemble(&comp, "binary", false, block, None, 1)?;
    let fqf = FiniteQuadraticForm::from_lattice(&comp.lambda_h)?;
    let mut r = build(ReportInput {
        c: &comp,
        sharp: &sharp,
        policy: AutPolicy::Eps,
        exact: fqf.enumerate_isometries(isometry_cap()).exact,
        ell: fqf.ell(),
        bound: (Some(two_pow_rho_plus_one(2 * d)), "2^(rho(disc)+1)"),
    });
    r.n = None;
    r.cover_degree = Some(2);
    r.k = Some(d);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wedge_norm_of_w1() {
        let w = wedge_lambda_d(1).unwrap();
        assert_eq!(w.w_d_norm, -2);
        assert!(w.split_ok);
    }

    #[test]
    fn subgroup_spot_values() {
        assert_eq!(ogrady_subgroup_count(2, 1).unwrap(), 35);
        assert_eq!(ogrady_subgroup_count(3, 1).unwrap(), 130);
        assert_eq!(ogrady_subgroup_count(2, 2).unwrap(), 560);
        assert!(ogrady_subgroup_count(4, 1).is_err());
    }

    #[test]
    fn k_examples() {
        assert_eq!(k_of_d(1), 1);
        assert_eq!(k_of_d(12), 3);
        assert_eq!(k_of_d(36), 1);
    }
}
