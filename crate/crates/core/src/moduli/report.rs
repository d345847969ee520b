//! Assembly of the effective factors of the irrationality bound.

use std::fmt;

use serde::{Serialize, Serializer};

use super::component::{components, ComponentData, NormalForm};
use super::sharp::{lambda_sharp_variants, monodromy_case, SharpData};
use super::{abelian_bound_report, k3_bound_report, Family, K3Series, ModuliSpec};
use crate::arith::{gcd_all, rho};
use crate::discform::{isometry_cap, og10_split_aut_bound, FiniteQuadraticForm};
use crate::error::{Error, Result};
use crate::matrix::Rat;

/// Rational exponent with an optional `+eps`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Exponent {
    pub value: Rat,
    pub eps: bool,
}

impl Exponent {
    pub fn new(num: i128, den: i128, eps: bool) -> Self {
        Exponent { value: Rat::new(num, den), eps }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.value, if self.eps { "+ε" } else { "" })
    }
}

fn rat_str<S: Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AutFactor {
    /// `|O(D(Lambda_h))|` when the enumeration ran under the cap.
    pub exact: Option<u64>,
    pub bound: Option<i128>,
    /// Which estimate `bound` is.
    pub tag: &'static str,
}

/// All effective factors of the bound for one component and one choice of
/// `Lambda_#`; the analytic constant stays symbolic.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub family: Family,
    pub n: Option<i128>,
    pub d: i128,
    pub gamma: i128,
    pub component: String,
    pub m_prime: usize,
    pub disc: i128,
    pub ell: usize,
    pub aut: AutFactor,
    pub index_factor: i128,
    pub sat_index: i128,
    #[serde(serialize_with = "rat_str")]
    pub exp_disc: Rat,
    #[serde(serialize_with = "rat_str")]
    pub final_exp: Rat,
    pub eps: bool,
    pub constant: &'static str,
    pub case: String,
    pub lambda_sharp: String,
    /// Uniform bound on `ell` used in the exponent.
    pub ell_bound: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<i128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_exp: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_exp: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ogrady_factor: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cover_degree: Option<i128>,
    pub notes: Vec<String>,
}

impl BoundReport {
    pub fn final_exponent(&self) -> Exponent {
        Exponent { value: self.final_exp, eps: self.eps }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serialisable")
    }
}

/// How `|O(D(Lambda_h))|` enters the exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum AutPolicy {
    /// `|O(D)| <= |disc|^ell`.
    DiscPowEll,
    /// `|O(D)| = O(|disc|^eps)`.
    Eps,
}

/// `(exponent of |disc Lambda_h|, final exponent)`.
///
/// Primitive: `1 + m'/2`, or `m'/2` when the complement has rank one (the
/// special cycles are Heegner divisors), plus the automorphism part.
/// Otherwise `1 + m'/2 + 2 ell` with no separate automorphism factor.
pub(crate) fn exponents(sharp: &SharpData, ell_bound: usize, policy: AutPolicy) -> (Rat, Exponent) {
    let half_m = Rat::new(sharp.m_prime() as i128, 2);
    let one = Rat::from_integer(1);
    if sharp.saturation_index != 1 {
        let e = one + half_m + Rat::from_integer(2 * ell_bound as i128);
        return (e, Exponent { value: e, eps: false });
    }
    let e = if sharp.complement_rank() == 1 { half_m } else { one + half_m };
    match policy {
        AutPolicy::Eps => (e, Exponent { value: e, eps: true }),
        AutPolicy::DiscPowEll => (e, Exponent { value: e + Rat::from_integer(ell_bound as i128), eps: false }),
    }
}

pub(crate) fn two_pow_rho_plus_one(k: i128) -> i128 {
    1i128 << (rho(k.max(1)) + 1)
}

pub(crate) struct ReportInput<'a> {
    pub c: &'a ComponentData,
    pub sharp: &'a SharpData,
    pub policy: AutPolicy,
    pub exact: Option<u64>,
    pub ell: usize,
    pub bound: (Option<i128>, &'static str),
}

pub(crate) fn build(inp: ReportInput<'_>) -> BoundReport {
    let c = inp.c;
    let ell_bound = c.q_block.rank();
    let (exp_disc, fin) = exponents(inp.sharp, ell_bound, inp.policy);
    let mut notes = c.notes.clone();
    if inp.sharp.refined {
        notes.push(format!("refined tail {}", inp.sharp.case));
    }
    BoundReport {
        family: c.spec.family,
        n: c.spec.family.uses_n().then_some(c.spec.n),
        d: c.spec.d,
        gamma: c.spec.gamma,
        component: c.label(),
        m_prime: inp.sharp.m_prime(),
        disc: c.lambda_h.disc(),
        ell: inp.ell,
        aut: AutFactor { exact: inp.exact, bound: inp.bound.0, tag: inp.bound.1 },
        index_factor: monodromy_case(c).1,
        sat_index: inp.sharp.saturation_index,
        exp_disc,
        final_exp: fin.value,
        eps: fin.eps,
        constant: if fin.eps { "C_eps" } else { "C" },
        case: inp.sharp.case.to_string(),
        lambda_sharp: inp.sharp.lambda_sharp.name().to_string(),
        ell_bound,
        k: None,
        d_exp: None,
        k_exp: None,
        ogrady_factor: None,
        cover_degree: None,
        notes,
    }
}

/// `gcd(gamma, 2d/gamma, 2m/gamma) = 1`.
pub(crate) fn coprime_parameters(spec: &ModuliSpec) -> bool {
    let g = spec.gamma;
    gcd_all(&[g, 2 * spec.d / g, 2 * spec.m() / g]) == 1
}

/// Automorphism policies that the theorems assert for this component.
fn policies(c: &ComponentData, sharp: &SharpData) -> Vec<AutPolicy> {
    let spec = &c.spec;
    match spec.family {
        Family::K3n | Family::Kumn => {
            if sharp.saturation_index != 1 {
                return vec![AutPolicy::DiscPowEll];
            }
            let e8_case =
                if spec.family == Family::K3n { spec.n == 2 || spec.gamma >= 3 } else { spec.gamma >= 3 };
            match spec.gamma {
                1 => vec![AutPolicy::Eps],
                _ if e8_case && coprime_parameters(spec) => vec![AutPolicy::DiscPowEll, AutPolicy::Eps],
                _ => vec![AutPolicy::DiscPowEll],
            }
        }
        _ => vec![AutPolicy::Eps],
    }
}

/// The paper-stated estimate of `|O(D(Lambda_h))|` for the component.
fn aut_bound(c: &ComponentData, policy: AutPolicy, ell: usize) -> (Option<i128>, &'static str) {
    let (d, g) = (c.spec.d, c.spec.gamma);
    let disc = c.lambda_h.disc();
    match (c.spec.family, c.normal_form, policy) {
        (Family::Og10, NormalForm::Split, _) if d % 3 != 0 => (Some(og10_split_aut_bound(d)), "72*2^rho(d)"),
        (Family::Og10, NormalForm::NonSplit { .. }, _) => (Some(two_pow_rho_plus_one(2 * d / 3)), "2^(rho(2d/3)+1)"),
        (Family::K3n | Family::Kumn, _, AutPolicy::Eps) if g >= 2 => {
            let k = (2 * c.spec.m() / g) * (2 * d / g);
            (Some(two_pow_rho_plus_one(k)), "2^(rho(4dm/gamma^2)+1)")
        }
        _ if ell <= 1 => (Some(two_pow_rho_plus_one(disc)), "2^(rho(disc)+1)"),
        _ => (disc.checked_pow(ell as u32), "disc^ell"),
    }
}

/// Reports for every component and every applicable theorem case.
pub fn bound_report(spec: &ModuliSpec) -> Result<Vec<BoundReport>> {
    if spec.family == Family::AbelianSurface {
        return Ok(vec![abelian_bound_report(spec.d)?]);
    }
    if spec.is_k3() {
        if spec.gamma != 1 {
            return Err(Error::EmptyModuli(format!("K3 polarisations are unimodular, gamma={}", spec.gamma)));
        }
        return Ok(vec![k3_bound_report(spec.d, K3Series::E8)?]);
    }
    let comps = components(spec)?;
    if comps.is_empty() {
        return Err(Error::EmptyModuli(format!("{spec} has no components")));
    }
    let mut out = Vec::new();
    for c in &comps {
        let fqf = FiniteQuadraticForm::from_lattice(&c.lambda_h)?;
        let ell = fqf.ell();
        let exact = fqf.enumerate_isometries(isometry_cap()).exact;
        for sharp in lambda_sharp_variants(c)? {
            for policy in policies(c, &sharp) {
                let mut r = build(ReportInput { c, sharp: &sharp, policy, exact, ell, bound: aut_bound(c, policy, ell) });
                if c.spec.family == Family::Og10 && c.normal_form == NormalForm::Split && c.spec.d % 3 == 0 {
                    r.notes.push("3 | d: exact count only, no closed-form bound asserted".into());
                }
                out.push(r);
            }
        }
    }
    Ok(out)
}
