//! Monodromy of a component and the choice of `Lambda_#`.

use serde::Serialize;

use super::component::{ComponentData, NormalForm, OgSixW};
use super::Family;
use crate::catalog;
use crate::construct::{
    embed_qad_a1, embed_qad_e8, embed_split, search_definite_embedding, ConstructedEmbedding, DEFAULT_SEARCH_BUDGET,
};
use crate::embedding::{is_isometry, orientation_character, reflection, LatticeEmbedding};
use crate::error::{Error, Result};
use crate::lattice::GramLattice;
use crate::matrix::IntMatrix;
use crate::squares::{coprime_four_squares, four_squares};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MonodromyCase {
    /// The monodromy group is the stable group of `Lambda_h`.
    Stable,
    /// Generated by the stable group and the reflection in `vector`
    /// (coordinates in `Lambda_h`).
    StablePlusReflection { vector: Vec<i128> },
    /// A subgroup of index at most two of the stable group.
    StableIndexTwoUnknown,
}

/// Monodromy case together with the bound for `[O~+(Lambda_h) : Gamma cap O~+(Lambda_h)]`.
pub fn monodromy_case(c: &ComponentData) -> (MonodromyCase, i128) {
    let k = c.fixed_rank();
    let r = c.lambda_h.rank();
    let at = |q: &[i128]| -> Vec<i128> {
        let mut v = vec![0; r];
        v[k..].copy_from_slice(q);
        v
    };
    let (n, gamma) = (c.spec.n, c.spec.gamma);
    if c.spec.is_k3() {
        return (MonodromyCase::Stable, 1);
    }
    match (c.spec.family, c.normal_form) {
        (Family::K3n, _) if n == 2 || gamma >= 3 => (MonodromyCase::Stable, 1),
        (Family::K3n, _) => (MonodromyCase::StablePlusReflection { vector: at(&[1, 0]) }, 1),
        (Family::Kumn, _) if gamma >= 3 => (MonodromyCase::StableIndexTwoUnknown, 2),
        (Family::Kumn, _) => (MonodromyCase::StablePlusReflection { vector: at(&[1, 0]) }, 2),
        (Family::Og10, NormalForm::Split) => (MonodromyCase::StablePlusReflection { vector: at(&[1, -1, 0]) }, 1),
        (Family::Og6, NormalForm::Split) => (MonodromyCase::StablePlusReflection { vector: at(&[0, 1, -1]) }, 1),
        (Family::Og6, NormalForm::Og6 { w: OgSixW::V1PlusV2, .. }) => {
            (MonodromyCase::StablePlusReflection { vector: at(&[-1, 1, 0]) }, 1)
        }
        _ => (MonodromyCase::Stable, 1),
    }
}

/// Extension of the non-stable monodromy generator to `Lambda_#`.
#[derive(Clone, Debug)]
pub struct Extension {
    pub sigma_h: IntMatrix,
    pub sigma_sharp: IntMatrix,
}

/// A lemma-prescribed `Lambda_#` with its verified embedding.
#[derive(Clone, Debug)]
pub struct SharpData {
    /// Tag of the tail `M` in `Lambda_# = U^2 + fixed + M`.
    pub case: &'static str,
    /// A replacement of a larger tail that needs an extra arithmetic condition.
    pub refined: bool,
    pub lambda_sharp: GramLattice,
    /// `Lambda_h -> Lambda_#`, the identity on the unimodular part.
    pub embedding: LatticeEmbedding,
    /// `Q_h(-1) -> M`.
    pub block: LatticeEmbedding,
    /// The rank-two lemma used for the block, in its positive definite form.
    pub construction: Option<ConstructedEmbedding>,
    pub saturation_index: i128,
    pub extension: Option<Extension>,
}

impl SharpData {
    /// `m'` for `Lambda_#` of signature `(2, m')`.
    pub fn m_prime(&self) -> usize {
        self.lambda_sharp.rank() - 2
    }

    /// Rank of the orthogonal complement of `Lambda_h` in `Lambda_#`.
    pub fn complement_rank(&self) -> usize {
        self.lambda_sharp.rank() - self.embedding.source().rank()
    }
}

fn a1(k: usize) -> GramLattice {
    catalog::a_n(1).rescale(-1).power(k)
}

fn e8_neg() -> GramLattice {
    catalog::e8().rescale(-1)
}

fn sharp_name(fixed: &GramLattice, tail: &str) -> String {
    match (fixed.name(), tail) {
        ("U^2+E8(-1)^2", "E8(-1)") => "U^2+E8(-1)^3".into(),
        (f, t) => format!("{f}+{t}"),
    }
}

/// Negative definite version of a lemma embedding, with the source renamed.
fn negate(c: &ComponentData, ce: &ConstructedEmbedding) -> Result<LatticeEmbedding> {
    let target = ce.embedding.target().rescale(-1).with_name(match ce.lemma {
        crate::construct::Lemma::QadE8 => "E8(-1)".to_string(),
        _ => format!("A1(-1)^{}", ce.embedding.target().rank()),
    });
    LatticeEmbedding::checked(c.q_block.clone(), target, ce.embedding.matrix().clone())
}

fn internal(c: &ComponentData, what: impl std::fmt::Display) -> Error {
    Error::ConstructionFailed(format!("{} {}: {what}", c.spec, c.label()))
}

/// Builds `Lambda_h -> U^2 + fixed + M` from `Q_h(-1) -> M` and checks the
/// saturation index and, when the monodromy needs it, the extension of the
/// extra reflection.
pub(crate) fn assemble(
    c: &ComponentData,
    case: &'static str,
    refined: bool,
    block: LatticeEmbedding,
    construction: Option<ConstructedEmbedding>,
    expected_index: i128,
) -> Result<SharpData> {
    let name = sharp_name(&c.fixed, block.target().name());
    let embedding = LatticeEmbedding::direct_sum(&[&LatticeEmbedding::identity(&c.fixed), &block])
        .with_names("Lambda_h", &name);
    if embedding.source().gram() != c.lambda_h.gram() || !embedding.verify() {
        return Err(internal(c, "assembled embedding fails the Gram check"));
    }
    let saturation_index = embedding.saturation_index()?;
    if saturation_index != expected_index {
        return Err(internal(c, format!("saturation index {saturation_index}, expected {expected_index}")));
    }
    let extension = match monodromy_case(c).0 {
        MonodromyCase::StablePlusReflection { vector } => {
            let sigma_h = reflection(&c.lambda_h, &vector).map_err(|e| internal(c, format!("sigma on Lambda_h: {e}")))?;
            let target = embedding.target();
            let sigma_sharp = match construction.as_ref().and_then(|ce| ce.involution.clone()) {
                Some(s) => IntMatrix::block_diag(&[&IntMatrix::identity(c.fixed_rank()), &s]),
                None => reflection(target, &embedding.matrix().mul_vec(&vector))
                    .map_err(|e| internal(c, format!("sigma on Lambda_#: {e}")))?,
            };
            let ok = is_isometry(target, &sigma_sharp)
                && embedding.verify_extension(&sigma_sharp, &sigma_h)
                && orientation_character(target, &sigma_sharp)? == Some(1);
            if !ok {
                return Err(internal(c, "monodromy reflection does not extend"));
            }
            Some(Extension { sigma_h, sigma_sharp })
        }
        _ => None,
    };
    let lambda_sharp = embedding.target().clone();
    Ok(SharpData { case, refined, lambda_sharp, embedding, block, construction, saturation_index, extension })
}

fn descending(p: [i128; 4]) -> Vec<i128> {
    vec![p[3], p[2], p[1], p[0]]
}

fn e8_search(c: &ComponentData) -> Result<SharpData> {
    let block = search_definite_embedding(&c.q_block, &e8_neg(), DEFAULT_SEARCH_BUDGET)?;
    assemble(c, "e8", false, block, None, 1)
}

fn from_lemma(c: &ComponentData, case: &'static str, refined: bool, ce: ConstructedEmbedding) -> Result<SharpData> {
    let block = negate(c, &ce)?;
    let idx = ce.saturation_index;
    assemble(c, case, refined, block, Some(ce), idx)
}

/// Every lemma-prescribed `Lambda_#` for the component, the general one
/// first and the refined replacements after it.
pub fn lambda_sharp_variants(c: &ComponentData) -> Result<Vec<SharpData>> {
    let (d, gamma, n, m) = (c.spec.d, c.spec.gamma, c.spec.n, c.spec.m());
    if c.spec.is_k3() {
        return Ok(vec![e8_search(c)?]);
    }
    match (c.spec.family, c.normal_form) {
        (Family::K3n | Family::Kumn, _) => {
            let e8_case = if c.spec.family == Family::K3n { n == 2 || gamma >= 3 } else { gamma >= 3 };
            if e8_case && gamma != 2 {
                return Ok(vec![e8_search(c)?]);
            }
            match gamma {
                1 => {
                    let mut out = vec![from_lemma(c, "a1^10", false, embed_split(m, d, false)?)?];
                    if m % 8 != 0 && d % 8 != 0 {
                        out.push(from_lemma(c, "a1^8", true, embed_split(m, d, true)?)?);
                    }
                    Ok(out)
                }
                2 if m % 4 != 0 && d % 4 != 0 => Ok(vec![from_lemma(c, "e8", false, embed_qad_e8(m, d)?)?]),
                2 if m % 4 == 0 && d % 4 == 0 => Ok(vec![from_lemma(c, "a1^10", false, embed_qad_a1(m, d)?)?]),
                _ => Err(internal(c, "no lemma covers this case")),
            }
        }
        (Family::Og10, NormalForm::NonSplit { .. }) => Ok(vec![e8_search(c)?]),
        (Family::Og10, NormalForm::Split) => {
            // Q_h(-1) = [delta1, delta2, l]
            let a2 = catalog::a_n(2).rescale(-1);
            let ids = vec![vec![1, 0], vec![0, 1]];
            let mut parts = descending(four_squares(d - 1)?);
            parts.push(1);
            let mut out = vec![assemble(c, "a2+a1^5", false, tail_block(c, &a2, &ids, &parts, true)?, None, 1)?];
            if d % 8 != 0 {
                let parts = descending(coprime_four_squares(d)?);
                out.push(assemble(c, "a2+a1^4", true, tail_block(c, &a2, &ids, &parts, true)?, None, 1)?);
            }
            Ok(out)
        }
        (Family::Og6, NormalForm::Split) => {
            // Q_h(-1) = [l, v1, v2] -> A1(-1)^k + A1(-1)^2
            let mut parts = descending(four_squares(d - 1)?);
            parts.push(1);
            let mut out = vec![assemble(c, "a1^7", false, og6_split_block(c, &parts)?, None, 1)?];
            if d % 8 != 0 {
                let parts = descending(coprime_four_squares(d)?);
                out.push(assemble(c, "a1^6", true, og6_split_block(c, &parts)?, None, 1)?);
            }
            Ok(out)
        }
        (Family::Og6, NormalForm::Og6 { w: OgSixW::V1, .. }) => Ok(vec![e8_search(c)?]),
        (Family::Og6, NormalForm::Og6 { w: OgSixW::V1PlusV2, t }) => {
            // f - v1 -> delta1, f - v2 -> delta3, e - t f -> sum ai ei - delta1 - delta2 - delta3,
            // with t - 1 = sum ai^2
            let a = descending(four_squares(t - 1)?);
            let target = GramLattice::direct_sum(&[&catalog::a_n(3).rescale(-1), &a1(4)]);
            let mut x3 = vec![-1, -1, -1];
            x3.extend_from_slice(&a);
            let m = IntMatrix::from_cols(&[vec![1, 0, 0, 0, 0, 0, 0], vec![0, 0, 1, 0, 0, 0, 0], x3])?;
            let block = LatticeEmbedding::checked(c.q_block.clone(), target, m)?;
            Ok(vec![assemble(c, "a3+a1^4", false, block, None, 1)?])
        }
        (Family::AbelianSurface, _) => {
            let parts = if d % 8 != 0 {
                descending(coprime_four_squares(d)?)
            } else {
                let mut p = descending(four_squares(d - 1)?);
                p.push(1);
                p
            };
            let case = if parts.len() == 4 { "a1^4" } else { "a1^5" };
            let block =
                LatticeEmbedding::checked(c.q_block.clone(), a1(parts.len()), IntMatrix::from_cols(&[parts])?)?;
            Ok(vec![assemble(c, case, false, block, None, 1)?])
        }
        _ => Err(internal(c, "no Lambda_# prescribed")),
    }
}

/// `rest + Z l -> rest + A1(-1)^k`, identity on `rest`, `l -> parts`.
fn tail_block(
    c: &ComponentData,
    rest: &GramLattice,
    rest_ids: &[Vec<i128>],
    parts: &[i128],
    l_last: bool,
) -> Result<LatticeEmbedding> {
    let k = parts.len();
    let r = rest.rank();
    let target = GramLattice::direct_sum(&[rest, &a1(k)]).with_name(format!("{}+A1(-1)^{k}", rest.name()));
    let mut cols: Vec<Vec<i128>> = rest_ids
        .iter()
        .map(|v| {
            let mut v = v.clone();
            v.resize(r + k, 0);
            v
        })
        .collect();
    let mut l = vec![0; r];
    l.extend_from_slice(parts);
    if l_last {
        cols.push(l);
    } else {
        cols.insert(0, l);
    }
    LatticeEmbedding::checked(c.q_block.clone(), target, IntMatrix::from_cols(&cols)?)
}

/// `[l, v1, v2] -> A1(-1)^(k+2)`: `l -> (parts, 0, 0)`, `vi -> e(k+i)`.
fn og6_split_block(c: &ComponentData, parts: &[i128]) -> Result<LatticeEmbedding> {
    let k = parts.len();
    let mut l = parts.to_vec();
    l.extend([0, 0]);
    let mut v1 = vec![0; k + 2];
    v1[k] = 1;
    let mut v2 = vec![0; k + 2];
    v2[k + 1] = 1;
    LatticeEmbedding::checked(c.q_block.clone(), a1(k + 2), IntMatrix::from_cols(&[l, v1, v2])?)
}

/// The tightest lemma-prescribed `Lambda_#`.
pub fn choose_lambda_sharp(c: &ComponentData) -> Result<SharpData> {
    lambda_sharp_variants(c)?.pop().ok_or_else(|| internal(c, "no Lambda_# prescribed"))
}
