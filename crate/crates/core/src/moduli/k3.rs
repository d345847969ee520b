//! Primitively polarised K3 surfaces: `Z(-2d)` placed in various
//! negative definite tails.

use serde::Serialize;

use super::component::components;
use super::report::{build, two_pow_rho_plus_one, AutPolicy, BoundReport, ReportInput};
use super::sharp::assemble;
use super::ModuliSpec;
use crate::catalog;
use crate::construct::{search_definite_embedding, DEFAULT_SEARCH_BUDGET};
use crate::discform::{isometry_cap, FiniteQuadraticForm};
use crate::embedding::LatticeEmbedding;
use crate::error::{Error, Result};
use crate::lattice::GramLattice;
use crate::matrix::IntMatrix;
use crate::squares::{coprime_four_squares, represent_binary_form, three_coprime_squares};

/// The negative definite lattice receiving `Z(-2d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum K3Series {
    E8,
    A1x4,
    A1x3,
    A2,
    A1x2,
    /// `[[-2a, b], [b, -2c]]` with `4ac - b^2 > 0`.
    Binary { a: i128, b: i128, c: i128 },
}

impl K3Series {
    pub fn tag(&self) -> &'static str {
        match self {
            K3Series::E8 => "e8",
            K3Series::A1x4 => "a1^4",
            K3Series::A1x3 => "a1^3",
            K3Series::A2 => "a2",
            K3Series::A1x2 => "a1^2",
            K3Series::Binary { .. } => "binary",
        }
    }

    /// Parses `e8`, `a1^4`, `a1^3`, `a2`, `a1^2`; binary forms are built
    /// directly.
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "e8" => Ok(K3Series::E8),
            "a1^4" | "a1x4" => Ok(K3Series::A1x4),
            "a1^3" | "a1x3" => Ok(K3Series::A1x3),
            "a2" => Ok(K3Series::A2),
            "a1^2" | "a1x2" => Ok(K3Series::A1x2),
            _ => Err(Error::Parse(format!("unknown K3 series {s}"))),
        }
    }
}

fn not_applicable(e: Error, what: &str) -> Error {
    match e {
        Error::NotRepresentable(_) | Error::NotFound(_) => Error::NotApplicable(format!("{what}: {e}")),
        other => other,
    }
}

fn descending<const N: usize>(p: [i128; N]) -> Vec<i128> {
    p.iter().rev().copied().collect()
}

/// `Z(-2d) -> Q(-1)` for a binary form `Q(-1) = [[-2a, b], [b, -2c]]`.
pub(crate) fn binary_block(
    source: &GramLattice,
    target: GramLattice,
    a: i128,
    b: i128,
    c: i128,
    d: i128,
) -> Result<LatticeEmbedding> {
    let r = represent_binary_form(a, b, c, d, true, None)
        .map_err(|e| not_applicable(e, &format!("d={d} by ({a}, {b}, {c})")))?;
    LatticeEmbedding::checked(source.clone(), target, IntMatrix::from_cols(&[vec![r.x, r.y]])?)
}

pub fn k3_bound_report(d: i128, series: K3Series) -> Result<BoundReport> {
    let spec = ModuliSpec::k3(d)?;
    let c = components(&spec)?.pop().ok_or_else(|| Error::Internal("K3 moduli always have a component".into()))?;
    let a1 = |k: usize| catalog::a_n(1).rescale(-1).power(k);
    let column = |v: Vec<i128>| IntMatrix::from_cols(&[v]);
    let block = match series {
        K3Series::E8 => search_definite_embedding(&c.q_block, &catalog::e8().rescale(-1), DEFAULT_SEARCH_BUDGET)?,
        K3Series::A1x4 => {
            let p = coprime_four_squares(d).map_err(|e| not_applicable(e, "coprime four squares"))?;
            LatticeEmbedding::checked(c.q_block.clone(), a1(4), column(descending(p))?)?
        }
        K3Series::A1x3 => {
            let p = three_coprime_squares(d).map_err(|e| not_applicable(e, "three coprime squares"))?;
            LatticeEmbedding::checked(c.q_block.clone(), a1(3), column(descending(p))?)?
        }
        K3Series::A2 => binary_block(&c.q_block, catalog::a_n(2).rescale(-1), 1, 1, 1, d)?,
        K3Series::A1x2 => binary_block(&c.q_block, a1(2), 1, 0, 1, d)?,
        K3Series::Binary { a, b, c: cc } => binary_block(&c.q_block, catalog::q_abc_neg(a, b, cc)?, a, b, cc, d)?,
    };
    let sharp = assemble(&c, series.tag(), false, block, None, 1)?;
    let fqf = FiniteQuadraticForm::from_lattice(&c.lambda_h)?;
    let exact = fqf.enumerate_isometries(isometry_cap()).exact;
    let mut r = build(ReportInput {
        c: &c,
        sharp: &sharp,
        policy: AutPolicy::Eps,
        exact,
        ell: fqf.ell(),
        bound: (Some(two_pow_rho_plus_one(2 * d)), "2^(rho(disc)+1)"),
    });
    r.n = None;
    Ok(r)
}
