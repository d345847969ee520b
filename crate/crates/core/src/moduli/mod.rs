//! Polarised moduli problems: normal forms of the polarisation, the lattice
//! `Lambda_h = h^perp`, monodromy, the choice of `Lambda_#` and the
//! assembly of all effective factors of the irrationality bound.

mod abelian;
mod component;
mod k3;
mod report;
mod sharp;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

pub use abelian::{
    abelian_bound_report, abelian_quadratic_report, k_of_d, ogrady_degree_bound, ogrady_subgroup_count,
    wedge_lambda_d, WedgeData,
};
pub use component::{components, ComponentData, NormalForm, OgSixW};
pub use k3::{k3_bound_report, K3Series};
pub use report::{bound_report, AutFactor, BoundReport, Exponent};
pub use sharp::{choose_lambda_sharp, lambda_sharp_variants, monodromy_case, Extension, MonodromyCase, SharpData};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    #[serde(rename = "k3n")]
    K3n,
    #[serde(rename = "kumn")]
    Kumn,
    #[serde(rename = "og10")]
    Og10,
    #[serde(rename = "og6")]
    Og6,
    #[serde(rename = "ab")]
    AbelianSurface,
    #[serde(rename = "k3")]
    K3,
}

impl Family {
    pub fn tag(self) -> &'static str {
        match self {
            Family::K3n => "k3n",
            Family::Kumn => "kumn",
            Family::Og10 => "og10",
            Family::Og6 => "og6",
            Family::AbelianSurface => "ab",
            Family::K3 => "k3",
        }
    }

    /// Whether `n` is a meaningful parameter.
    pub fn uses_n(self) -> bool {
        matches!(self, Family::K3n | Family::Kumn)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "k3n" | "k3[n]" => Ok(Family::K3n),
            "kumn" | "kum" => Ok(Family::Kumn),
            "og10" => Ok(Family::Og10),
            "og6" => Ok(Family::Og6),
            "ab" | "abelian" => Ok(Family::AbelianSurface),
            "k3" => Ok(Family::K3),
            _ => Err(Error::Parse(format!("unknown family {s}"))),
        }
    }
}

/// A polarised moduli problem: family, `n`, `(h, h) = 2d` and divisibility.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ModuliSpec {
    pub family: Family,
    pub n: i128,
    pub d: i128,
    pub gamma: i128,
}

impl fmt::Display for ModuliSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.family.uses_n() {
            write!(f, "{} n={} d={} gamma={}", self.family, self.n, self.d, self.gamma)
        } else {
            write!(f, "{} d={} gamma={}", self.family, self.d, self.gamma)
        }
    }
}

impl ModuliSpec {
    pub fn new(family: Family, n: i128, d: i128, gamma: i128) -> Result<Self> {
        if d < 1 {
            return Err(Error::BadParams(format!("d must be positive, got {d}")));
        }
        if gamma < 1 {
            return Err(Error::BadParams(format!("gamma must be positive, got {gamma}")));
        }
        match family {
            Family::K3n if n < 1 => Err(Error::BadParams(format!("K3[n] needs n >= 1, got {n}"))),
            Family::Kumn if n < 1 => Err(Error::BadParams(format!("Kum_n needs n >= 1, got {n}"))),
            _ => Ok(ModuliSpec { family, n, d, gamma }),
        }
    }

    pub fn k3n(n: i128, d: i128, gamma: i128) -> Result<Self> {
        Self::new(Family::K3n, n, d, gamma)
    }

    pub fn kumn(n: i128, d: i128, gamma: i128) -> Result<Self> {
        Self::new(Family::Kumn, n, d, gamma)
    }

    pub fn og10(d: i128, gamma: i128) -> Result<Self> {
        Self::new(Family::Og10, 0, d, gamma)
    }

    pub fn og6(d: i128, gamma: i128) -> Result<Self> {
        Self::new(Family::Og6, 0, d, gamma)
    }

    pub fn k3(d: i128) -> Result<Self> {
        Self::new(Family::K3, 1, d, 1)
    }

    pub fn abelian(d: i128) -> Result<Self> {
        Self::new(Family::AbelianSurface, 0, d, 1)
    }

    /// `n -/+ 1`, the parameter of the rank-one summand of the ambient lattice.
    pub(crate) fn m(&self) -> i128 {
        match self.family {
            Family::K3n => self.n - 1,
            Family::Kumn => self.n + 1,
            _ => 0,
        }
    }

    /// K3[1] is the K3 problem.
    pub(crate) fn is_k3(&self) -> bool {
        self.family == Family::K3 || (self.family == Family::K3n && self.n == 1)
    }
}
