//! Lattice embeddings, saturation, orthogonal complements and extension of
//! isometries.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::arith::exact_sqrt;
use crate::error::{Error, Result};
use crate::lattice::{congruence_diagonalize, GramLattice};
use crate::matrix::{IntMatrix, Rat, RatMatrix};
use crate::normal_form::{column_hnf, integer_kernel, rank, smith_normal_form, solve_rational};

/// `source -> target` given by the integer matrix whose columns are the
/// images of the source basis in target coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeEmbedding {
    source: GramLattice,
    target: GramLattice,
    matrix: IntMatrix,
}

#[derive(Clone, Debug)]
pub struct Saturation {
    /// Product of the elementary divisors of the embedding matrix.
    pub index: i128,
    /// Basis of `(Q-span of the image) cap target`, target coordinates, column HNF.
    pub basis: IntMatrix,
    /// `matrix * source_coords = basis`.
    pub source_coords: RatMatrix,
    pub lattice: GramLattice,
}

#[derive(Clone, Debug)]
pub struct ComplementData {
    /// Basis of the orthogonal complement in target coordinates.
    pub basis: IntMatrix,
    pub lattice: GramLattice,
    /// Moment matrix `T = gram / 2`.
    pub moment: RatMatrix,
    pub det_t: Rat,
    /// `[target : source + complement]`.
    pub glue_index: i128,
    /// `[target : saturation + complement]`.
    pub glue_index_saturated: i128,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct VerificationReport {
    pub gram_ok: bool,
    pub primitive: bool,
    pub saturation_index: i128,
    pub glue_index: i128,
    #[serde(rename = "det_T")]
    pub det_t: String,
}

#[derive(Serialize)]
struct EmbeddingJson<'a> {
    source: &'a GramLattice,
    target: &'a GramLattice,
    matrix: &'a IntMatrix,
}

impl LatticeEmbedding {
    pub fn new(source: GramLattice, target: GramLattice, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.rank() || matrix.cols() != source.rank() {
            return Err(Error::ShapeMismatch(format!(
                "embedding matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.rank(),
                source.rank()
            )));
        }
        Ok(LatticeEmbedding { source, target, matrix })
    }

    /// Like [`new`](Self::new) but fails unless the Gram matrices match.
    pub fn checked(source: GramLattice, target: GramLattice, matrix: IntMatrix) -> Result<Self> {
        let e = Self::new(source, target, matrix)?;
        if !e.verify() {
            return Err(Error::ConstructionFailed(format!(
                "{} -> {} does not preserve the form",
                e.source.name(),
                e.target.name()
            )));
        }
        Ok(e)
    }

    pub fn identity(l: &GramLattice) -> Self {
        LatticeEmbedding { source: l.clone(), target: l.clone(), matrix: IntMatrix::identity(l.rank()) }
    }

    /// Block-diagonal sum of embeddings.
    pub fn direct_sum(parts: &[&LatticeEmbedding]) -> Self {
        let src: Vec<&GramLattice> = parts.iter().map(|e| &e.source).collect();
        let tgt: Vec<&GramLattice> = parts.iter().map(|e| &e.target).collect();
        let mats: Vec<&IntMatrix> = parts.iter().map(|e| &e.matrix).collect();
        LatticeEmbedding {
            source: GramLattice::direct_sum(&src),
            target: GramLattice::direct_sum(&tgt),
            matrix: IntMatrix::block_diag(&mats),
        }
    }

    pub fn source(&self) -> &GramLattice {
        &self.source
    }

    pub fn target(&self) -> &GramLattice {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn with_names(mut self, source: &str, target: &str) -> Self {
        self.source = self.source.with_name(source);
        self.target = self.target.with_name(target);
        self
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(EmbeddingJson { source: &self.source, target: &self.target, matrix: &self.matrix })
            .expect("embedding serialises")
    }

    /// `B^T G_target B = G_source` and `B` has full column rank.
    pub fn verify(&self) -> bool {
        let pulled = self.matrix.congruence(self.target.gram()).expect("shapes checked");
        pulled == *self.source.gram() && rank(&self.matrix) == self.source.rank()
    }

    pub fn saturation(&self) -> Result<Saturation> {
        let m = self.source.rank();
        let snf = smith_normal_form(&self.matrix);
        let diag = snf.diagonal();
        if diag.contains(&0) {
            return Err(Error::DegenerateLattice("embedding matrix is not of full rank".into()));
        }
        let index = diag.iter().product();
        let u_inv = snf
            .u
            .to_rat()
            .inverse()
            .and_then(|x| x.to_int())
            .ok_or_else(|| Error::Internal("Smith transform is not unimodular".into()))?;
        let basis = column_hnf(&u_inv.col_range(0, m));
        let bq = self.matrix.to_rat();
        let mut coords = RatMatrix::zeros(m, m);
        for j in 0..m {
            let col: Vec<Rat> = basis.col(j).iter().map(|&x| Rat::from_integer(x)).collect();
            let x = solve_rational(&bq, &col).ok_or_else(|| Error::Internal("saturation basis not in span".into()))?;
            for i in 0..m {
                coords[(i, j)] = x[i];
            }
        }
        let gram = basis.congruence(self.target.gram())?;
        let lattice = GramLattice::new(format!("{}_sat", self.source.name()), gram)?;
        Ok(Saturation { index, basis, source_coords: coords, lattice })
    }

    pub fn saturation_index(&self) -> Result<i128> {
        Ok(smith_normal_form(&self.matrix).diagonal().iter().product())
    }

    pub fn is_primitive(&self) -> Result<bool> {
        Ok(self.saturation_index()? == 1)
    }

    /// Orthogonal complement of the image, with glue indices computed from
    /// `|disc A| |disc A^perp| = [T : A + A^perp]^2 |disc T|`.
    pub fn complement(&self) -> Result<ComplementData> {
        let target_disc = self.target.disc();
        if target_disc == 0 {
            return Err(Error::DegenerateLattice(self.target.name().to_string()));
        }
        let a = self.matrix.transpose().mul(self.target.gram())?;
        let basis = integer_kernel(&a);
        let gram = basis.congruence(self.target.gram())?;
        let lattice = GramLattice::new(format!("{}_perp", self.source.name()), gram)?;
        let r = lattice.rank();
        let perp_disc = lattice.disc();
        let det_t = Rat::new(lattice.det(), 1i128 << r);
        let moment = lattice.gram().to_rat().scale(Rat::new(1, 2));
        let glue = |d: i128| -> Result<i128> {
            let num = d * perp_disc;
            if num % target_disc != 0 {
                return Err(Error::Internal(format!("glue index^2 = {num}/{target_disc} is not integral")));
            }
            exact_sqrt(num / target_disc)
                .ok_or_else(|| Error::Internal(format!("glue index^2 = {} is not a square", num / target_disc)))
        };
        let glue_index = glue(self.source.disc())?;
        let glue_index_saturated = glue(self.saturation()?.lattice.disc())?;
        Ok(ComplementData { basis, lattice, moment, det_t, glue_index, glue_index_saturated })
    }

    pub fn report(&self) -> Result<VerificationReport> {
        let gram_ok = self.verify();
        let saturation_index = self.saturation_index()?;
        let c = self.complement()?;
        Ok(VerificationReport {
            gram_ok,
            primitive: saturation_index == 1,
            saturation_index,
            glue_index: c.glue_index,
            det_t: c.det_t.to_string(),
        })
    }

    /// Extends a stable isometry `g` of the source by the identity on the
    /// orthogonal complement. Fails with `NotStable` if `g` moves the
    /// discriminant group and with `NotIntegral` if the result is not integral.
    pub fn extend_by_identity(&self, g: &IntMatrix) -> Result<IntMatrix> {
        if !self.is_primitive()? {
            return Err(Error::NotApplicable("extension by the identity needs a primitive embedding".into()));
        }
        if !is_isometry(&self.source, g) {
            return Err(Error::BadParams("source map is not an isometry".into()));
        }
        if !acts_trivially_on_discriminant(&self.source, g) {
            return Err(Error::NotStable);
        }
        self.extend(g)
    }

    /// Extension by the identity without the stability precondition, for
    /// maps that are known to glue (such as the involutions of the lemmas).
    pub fn extend(&self, g: &IntMatrix) -> Result<IntMatrix> {
        let k = self.complement()?.basis;
        let full = self.matrix.hstack(&k);
        let image = self.matrix.mul(g)?.hstack(&k);
        let inv = full.to_rat().inverse().ok_or_else(|| Error::Internal("source + complement is singular".into()))?;
        let gt = image.to_rat().mul(&inv).to_int().ok_or(Error::NotIntegral)?;
        if !is_isometry(&self.target, &gt) {
            return Err(Error::Internal("extension is not an isometry".into()));
        }
        Ok(gt)
    }

    /// `g_t B = B g_s` and `g_t` is an isometry of the target.
    pub fn verify_extension(&self, g_t: &IntMatrix, g_s: &IntMatrix) -> bool {
        let lhs = g_t.mul(&self.matrix);
        let rhs = self.matrix.mul(g_s);
        matches!((lhs, rhs), (Ok(a), Ok(b)) if a == b) && is_isometry(&self.target, g_t)
    }
}

/// `g^T G g = G` and `g` is invertible over Z.
pub fn is_isometry(l: &GramLattice, g: &IntMatrix) -> bool {
    g.rows() == l.rank() && g.cols() == l.rank() && g.det().abs() == 1 && g.congruence(l.gram()).as_ref() == Ok(l.gram())
}

/// Generators of `L^v / L` as rational coordinate vectors.
pub fn discriminant_generators(l: &GramLattice) -> Result<Vec<Vec<Rat>>> {
    let snf = smith_normal_form(l.gram());
    let diag = snf.diagonal();
    if diag.contains(&0) {
        return Err(Error::DegenerateLattice(l.name().to_string()));
    }
    Ok(diag
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > 1)
        .map(|(i, &s)| snf.v.col(i).iter().map(|&x| Rat::new(x, s)).collect())
        .collect())
}

/// Whether `g` induces the identity on the discriminant group.
pub fn acts_trivially_on_discriminant(l: &GramLattice, g: &IntMatrix) -> bool {
    let Ok(gens) = discriminant_generators(l) else { return false };
    let gr = g.to_rat();
    gens.iter().all(|x| {
        let n = x.len();
        (0..n).all(|i| {
            let gx: Rat = (0..n).map(|j| gr[(i, j)] * x[j]).fold(Rat::zero(), |a, b| a + b);
            (gx - x[i]).is_integer()
        })
    })
}

/// Reflection `x -> x - 2 (x, v) / (v, v) v` as an integer matrix.
pub fn reflection(l: &GramLattice, v: &[i128]) -> Result<IntMatrix> {
    let vv = l.norm(v);
    if vv == 0 {
        return Err(Error::IsotropicVector);
    }
    let gv = l.gram().mul_vec(v);
    let n = l.rank();
    let mut m = IntMatrix::identity(n);
    for j in 0..n {
        if (2 * gv[j]) % vv != 0 {
            return Err(Error::NonIntegralReflection);
        }
        let c = 2 * gv[j] / vv;
        for i in 0..n {
            m[(i, j)] -= c * v[i];
        }
    }
    Ok(m)
}

/// Sign of the action of `g` on the orientation of a maximal positive
/// definite subspace. `None` for negative definite lattices.
pub fn orientation_character(l: &GramLattice, g: &IntMatrix) -> Result<Option<i8>> {
    let (d, p) = congruence_diagonalize(&l.gram().to_rat());
    if d.iter().any(|x| x.is_zero()) {
        return Err(Error::DegenerateLattice(l.name().to_string()));
    }
    let pos: Vec<usize> = (0..d.len()).filter(|&i| d[i].is_positive()).collect();
    if pos.is_empty() {
        return Ok(None);
    }
    let gq = l.gram().to_rat();
    let gr = g.to_rat();
    let k = pos.len();
    let mut m = RatMatrix::zeros(k, k);
    for (a, &i) in pos.iter().enumerate() {
        let pi = p.col(i);
        let gpi: Vec<Rat> = gq.mul(&column(&pi)).col(0);
        for (b, &j) in pos.iter().enumerate() {
            let gpj = gr.mul(&column(&p.col(j))).col(0);
            let ip: Rat = gpj.iter().zip(&gpi).map(|(x, y)| *x * *y).fold(Rat::zero(), |s, t| s + t);
            m[(a, b)] = ip / d[i];
        }
    }
    let det = m.det();
    Ok(Some(if det.is_positive() { 1 } else { -1 }))
}

fn column(v: &[Rat]) -> RatMatrix {
    let mut m = RatMatrix::zeros(v.len(), 1);
    for (i, x) in v.iter().enumerate() {
        m[(i, 0)] = *x;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn a1_into_u_plus_a1() {
        let src = catalog::a_n(1).rescale(-1);
        let tgt = GramLattice::direct_sum(&[&catalog::hyperbolic(), &src]);
        let e = LatticeEmbedding::checked(src, tgt, IntMatrix::from_cols(&[vec![0, 0, 1]]).unwrap()).unwrap();
        let minus = IntMatrix::diagonal(&[-1]);
        let gt = e.extend_by_identity(&minus).unwrap();
        assert_eq!(gt, IntMatrix::diagonal(&[1, 1, -1]));
        assert!(e.verify_extension(&gt, &minus));
    }

    #[test]
    fn non_stable_map_is_rejected() {
        // -id on A2(-1) acts as -1 on Z/3
        let src = catalog::a_n(2).rescale(-1);
        let tgt = GramLattice::direct_sum(&[&catalog::hyperbolic(), &src]);
        let b = IntMatrix::from_cols(&[vec![0, 0, 1, 0], vec![0, 0, 0, 1]]).unwrap();
        let e = LatticeEmbedding::checked(src, tgt, b).unwrap();
        assert_eq!(e.extend_by_identity(&IntMatrix::diagonal(&[-1, -1])), Err(Error::NotStable));
    }

    #[test]
    fn reflection_examples() {
        let a2 = catalog::a_n(2).rescale(-1);
        let s = reflection(&a2, &[1, -1]).unwrap();
        assert!(is_isometry(&a2, &s));
        let a1 = catalog::a_n(1).rescale(-1);
        let l = GramLattice::direct_sum(&[&a2, &a1, &a1]);
        assert_eq!(reflection(&l, &[1, 0, 1, 1]), Err(Error::NonIntegralReflection));
        assert_eq!(reflection(&catalog::hyperbolic(), &[1, 0]), Err(Error::IsotropicVector));
    }

    #[test]
    fn orientation_of_reflections() {
        let l = GramLattice::direct_sum(&[&catalog::hyperbolic(), &catalog::hyperbolic()]);
        // reflection in a negative vector preserves the positive orientation
        let neg = reflection(&l, &[1, -1, 0, 0]).unwrap();
        assert_eq!(orientation_character(&l, &neg).unwrap(), Some(1));
        let pos = reflection(&l, &[1, 1, 0, 0]).unwrap();
        assert_eq!(orientation_character(&l, &pos).unwrap(), Some(-1));
        assert_eq!(orientation_character(&catalog::e8().rescale(-1), &IntMatrix::identity(8)).unwrap(), None);
    }
}
