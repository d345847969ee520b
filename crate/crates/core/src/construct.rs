//! Explicit embeddings of rank-two lattices into `E8` and `A1^k`, and an
//! exhaustive search for embeddings into small definite lattices.

use serde::Serialize;

use crate::catalog;
use crate::e8::{E8CoordModel, GlueCoset};
use crate::embedding::{is_isometry, reflection, LatticeEmbedding};
use crate::error::{Error, Result};
use crate::lattice::GramLattice;
use crate::matrix::{IntMatrix, Rat};
use crate::normal_form::smith_normal_form;
use crate::squares::{coprime_four_squares, four_squares};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Lemma {
    QadE8,
    QadA1,
    Split,
    SplitSmall,
    Search,
}

/// An embedding together with the involution of the target that restricts
/// to the reflection in the first basis vector of the source.
#[derive(Clone, Debug)]
pub struct ConstructedEmbedding {
    pub embedding: LatticeEmbedding,
    pub involution: Option<IntMatrix>,
    pub lemma: Lemma,
    pub glue_coset: Option<GlueCoset>,
    pub saturation_index: i128,
    /// Square decompositions used, in the order they were placed.
    pub parts: Vec<Vec<i128>>,
}

#[derive(Serialize)]
struct ConstructedJson<'a> {
    source: &'a GramLattice,
    target: &'a GramLattice,
    matrix: &'a IntMatrix,
    involution: &'a Option<IntMatrix>,
    lemma: Lemma,
    glue_coset: Option<GlueCoset>,
    saturation_index: i128,
    parts: &'a [Vec<i128>],
}

impl ConstructedEmbedding {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(ConstructedJson {
            source: self.embedding.source(),
            target: self.embedding.target(),
            matrix: self.embedding.matrix(),
            involution: &self.involution,
            lemma: self.lemma,
            glue_coset: self.glue_coset,
            saturation_index: self.saturation_index,
            parts: &self.parts,
        })
        .expect("serialisable")
    }

    /// Reflection in the first source basis vector, as a source isometry.
    pub fn source_reflection(&self) -> Result<IntMatrix> {
        let mut v = vec![0; self.embedding.source().rank()];
        v[0] = 1;
        reflection(self.embedding.source(), &v)
    }

    /// The involution restricts to the reflection in `z1` and is an isometry.
    pub fn involution_ok(&self) -> Result<bool> {
        let Some(sigma) = &self.involution else { return Ok(true) };
        let r = self.source_reflection()?;
        Ok(self.embedding.verify_extension(sigma, &r) && is_isometry(self.embedding.target(), sigma))
    }
}

fn finish(
    embedding: LatticeEmbedding,
    involution: Option<IntMatrix>,
    lemma: Lemma,
    glue_coset: Option<GlueCoset>,
    parts: Vec<Vec<i128>>,
) -> Result<ConstructedEmbedding> {
    if !embedding.verify() {
        return Err(Error::ConstructionFailed(format!("{lemma:?}: Gram check failed")));
    }
    let saturation_index = embedding.saturation_index()?;
    let c = ConstructedEmbedding { embedding, involution, lemma, glue_coset, saturation_index, parts };
    if !c.involution_ok()? {
        return Err(Error::ConstructionFailed(format!("{lemma:?}: involution does not restrict correctly")));
    }
    Ok(c)
}

/// Permutations of `0..4` in lexicographic order.
fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if (0..4).all(|i| (0..i).all(|j| p[i] != p[j])) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Primitive embedding `Q_(a,d) -> E8` for `4 | a + d` with `a`, `d` not
/// divisible by `4`.
///
/// With coprime decompositions `a = sum ai^2`, `d = sum bi^2` paired so that
/// `ai` is even exactly when `bi` is odd, `z1 = sum ai (ei - e(i+4))` and
/// `z2 = (sum bi (ei + e(i+4)) - z1) / 2`. The swap `ei <-> e(i+4)` restricts
/// to the reflection in `z1`.
pub fn embed_qad_e8(a: i128, d: i128) -> Result<ConstructedEmbedding> {
    let source = catalog::q_ad(a, d)?;
    if a % 4 == 0 || d % 4 == 0 {
        return Err(Error::BadParams(format!("E8 lemma needs 4 not dividing a and d, got a={a}, d={d}")));
    }
    let ap = coprime_four_squares(a)?;
    let bp = coprime_four_squares(d)?;
    let perm = permutations4()
        .into_iter()
        .find(|p| (0..4).all(|i| ap[i] % 2 != bp[p[i]] % 2))
        .ok_or_else(|| Error::ConstructionFailed(format!("no parity pairing for {ap:?}, {bp:?}")))?;
    let b: Vec<i128> = (0..4).map(|i| bp[perm[i]]).collect();
    let coset = if d % 2 == 0 { GlueCoset::Standard } else { GlueCoset::Alternate };
    let model = E8CoordModel::new(coset);
    let mut z1 = [0i128; 8];
    let mut z2 = [0i128; 8];
    for i in 0..4 {
        z1[i] = 2 * ap[i];
        z1[i + 4] = -2 * ap[i];
        z2[i] = b[i] - ap[i];
        z2[i + 4] = b[i] + ap[i];
    }
    let c1 = model.coords(&z1)?;
    let c2 = model.coords(&z2)?;
    let matrix = IntMatrix::from_cols(&[c1, c2])?;
    let mut swap = IntMatrix::zeros(8, 8);
    for i in 0..4 {
        swap[(i, i + 4)] = 1;
        swap[(i + 4, i)] = 1;
    }
    let sigma = model.transport(&swap)?;
    let e = LatticeEmbedding::new(source, model.lattice(), matrix)?;
    finish(e, Some(sigma), Lemma::QadE8, Some(coset), vec![ap.to_vec(), b])
}

fn a1_power(k: usize) -> GramLattice {
    catalog::a_n(1).power(k)
}

fn sign_diag(neg: usize, total: usize) -> IntMatrix {
    IntMatrix::diagonal(&(0..total).map(|i| if i < neg { -1 } else { 1 }).collect::<Vec<_>>())
}

/// Non-increasing order, used when placing square parts on coordinates.
fn descending(p: [i128; 4]) -> [i128; 4] {
    [p[3], p[2], p[1], p[0]]
}

/// Embedding `Q_(a,d) -> A1^10` of index two for `4 | a`, `4 | d`, using
/// `a/4 - 1 = sum ai^2` and `d/4 - 1 = sum bi^2`.
pub fn embed_qad_a1(a: i128, d: i128) -> Result<ConstructedEmbedding> {
    let source = catalog::q_ad(a, d)?;
    if a % 4 != 0 || d % 4 != 0 {
        return Err(Error::BadParams(format!("A1 lemma needs 4 | a and 4 | d, got a={a}, d={d}")));
    }
    let ap = four_squares(a / 4 - 1)?;
    let bp = four_squares(d / 4 - 1)?;
    let (pa, pb) = (descending(ap), descending(bp));
    let mut u = vec![0i128; 10];
    let mut w = vec![0i128; 10];
    for i in 0..4 {
        u[i] = pa[i];
        w[5 + i] = pb[i];
    }
    u[4] = 1;
    w[9] = 1;
    let z1: Vec<i128> = u.iter().map(|x| 2 * x).collect();
    let z2: Vec<i128> = w.iter().zip(&u).map(|(x, y)| x - y).collect();
    let e = LatticeEmbedding::new(source, a1_power(10), IntMatrix::from_cols(&[z1, z2])?)?;
    finish(e, Some(sign_diag(5, 10)), Lemma::QadA1, None, vec![ap.to_vec(), bp.to_vec()])
}

/// Primitive embedding `Z(2a) + Z(2d) -> A1^10` (or `A1^8` when `small`,
/// which needs `8` not dividing `a` and `d`).
pub fn embed_split(a: i128, d: i128, small: bool) -> Result<ConstructedEmbedding> {
    if a <= 0 || d <= 0 {
        return Err(Error::BadParams(format!("split lemma needs a, d > 0, got a={a}, d={d}")));
    }
    let source = GramLattice::direct_sum(&[&catalog::rank_one(2 * a), &catalog::rank_one(2 * d)]);
    if small {
        let ap = coprime_four_squares(a)?;
        let bp = coprime_four_squares(d)?;
        let (pa, pb) = (descending(ap), descending(bp));
        let mut z1 = vec![0i128; 8];
        let mut z2 = vec![0i128; 8];
        for i in 0..4 {
            z1[i] = pa[i];
            z2[4 + i] = pb[i];
        }
        let e = LatticeEmbedding::new(source, a1_power(8), IntMatrix::from_cols(&[z1, z2])?)?;
        return finish(e, Some(sign_diag(4, 8)), Lemma::SplitSmall, None, vec![ap.to_vec(), bp.to_vec()]);
    }
    let ap = four_squares(a - 1)?;
    let bp = four_squares(d - 1)?;
    let (pa, pb) = (descending(ap), descending(bp));
    let mut z1 = vec![0i128; 10];
    let mut z2 = vec![0i128; 10];
    for i in 0..4 {
        z1[i] = pa[i];
        z2[5 + i] = pb[i];
    }
    z1[4] = 1;
    z2[9] = 1;
    let e = LatticeEmbedding::new(source, a1_power(10), IntMatrix::from_cols(&[z1, z2])?)?;
    finish(e, Some(sign_diag(5, 10)), Lemma::Split, None, vec![ap.to_vec(), bp.to_vec()])
}

/// Default node budget for [`search_definite_embedding`].
pub const DEFAULT_SEARCH_BUDGET: u64 = 10_000_000;

/// First primitive embedding of a definite lattice into a definite lattice
/// of the same sign.
///
/// Basis images are chosen in order. Each image is enumerated by a
/// Fincke-Pohst walk over the affine sublattice cut out by the pairings with
/// the images already chosen, in lexicographic order of the free
/// coordinates. Partial choices that are already imprimitive are pruned.
pub fn search_definite_embedding(
    source: &GramLattice,
    target: &GramLattice,
    budget: u64,
) -> Result<LatticeEmbedding> {
    let sign = if source.is_positive_definite() && target.is_positive_definite() {
        1
    } else if source.is_negative_definite() && target.is_negative_definite() {
        -1
    } else {
        return Err(Error::BadParams("search needs definite lattices of the same sign".into()));
    };
    if source.rank() > target.rank() {
        return Err(Error::NotFound("source rank exceeds target rank".into()));
    }
    let mut s = Searcher {
        g: target.gram().scale(sign),
        q: source.gram().scale(sign),
        chosen: Vec::new(),
        visited: 0,
        budget,
    };
    match s.extend()? {
        true => {
            let m = IntMatrix::from_cols(&s.chosen)?;
            LatticeEmbedding::checked(source.clone(), target.clone(), m)
        }
        false => Err(Error::NotFound(format!("no primitive embedding of {} into {}", source.name(), target.name()))),
    }
}

struct Searcher {
    g: IntMatrix,
    q: IntMatrix,
    chosen: Vec<Vec<i128>>,
    visited: u64,
    budget: u64,
}

impl Searcher {
    /// Tries to complete `chosen`; true on success.
    fn extend(&mut self) -> Result<bool> {
        let k = self.chosen.len();
        if k == self.q.rows() {
            return Ok(true);
        }
        let n = self.g.rows();
        // constraints (x, v_j) = q_jk
        let mut rows = Vec::with_capacity(k);
        let mut rhs = Vec::with_capacity(k);
        for j in 0..k {
            rows.push(self.g.mul_vec(&self.chosen[j]));
            rhs.push(self.q[(j, k)]);
        }
        let (x0, kernel) = if k == 0 {
            (vec![0; n], IntMatrix::identity(n))
        } else {
            match solve_affine(&IntMatrix::from_rows(&rows)?, &rhs) {
                Some(s) => s,
                None => return Ok(false),
            }
        };
        let shell = Shell::new(&self.g, &x0, &kernel, self.q[(k, k)]);
        let mut y = Vec::with_capacity(kernel.cols());
        self.walk(&shell, &x0, &kernel, 0, &mut y, shell.radius)
    }

    fn walk(&mut self, sh: &Shell, x0: &[i128], k: &IntMatrix, level: usize, y: &mut Vec<i128>, rem: Rat) -> Result<bool> {
        self.visited += 1;
        if self.visited > self.budget {
            return Err(Error::BudgetExhausted(format!("{} nodes", self.budget)));
        }
        if rem < Rat::from_integer(0) {
            return Ok(false);
        }
        let r = sh.d.len();
        if level == r {
            if rem != Rat::from_integer(0) {
                return Ok(false);
            }
            let mut x = x0.to_vec();
            for (j, &yj) in y.iter().enumerate() {
                for (i, xi) in x.iter_mut().enumerate() {
                    *xi += k[(i, j)] * yj;
                }
            }
            self.chosen.push(x);
            let m = IntMatrix::from_cols(&self.chosen)?;
            let diag = smith_normal_form(&m).diagonal();
            if diag.iter().all(|&s| s == 1) && self.extend()? {
                return Ok(true);
            }
            self.chosen.pop();
            return Ok(false);
        }
        let mut u = Rat::from_integer(0);
        for j in 0..level {
            u += sh.l[level][j] * (Rat::from_integer(y[j]) - sh.center[j]);
        }
        let c = sh.center[level] - u;
        let w2 = rem / sh.d[level];
        let s = crate::arith::isqrt(w2.floor().to_integer()) + 1;
        let lo = (c - Rat::from_integer(s)).ceil().to_integer();
        let hi = (c + Rat::from_integer(s)).floor().to_integer();
        for yi in lo..=hi {
            let t = Rat::from_integer(yi) - c;
            let used = sh.d[level] * t * t;
            if used > rem {
                continue;
            }
            y.push(yi);
            let found = self.walk(sh, x0, k, level + 1, y, rem - used)?;
            y.pop();
            if found {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// `{y : |x0 + K y|^2 = norm}` written as `sum d_i (y_i - c_i + sum_{j<i} l_ij (y_j - c_j))^2 = radius`.
struct Shell {
    d: Vec<Rat>,
    l: Vec<Vec<Rat>>,
    center: Vec<Rat>,
    radius: Rat,
}

impl Shell {
    fn new(g: &IntMatrix, x0: &[i128], k: &IntMatrix, norm: i128) -> Shell {
        let r = k.cols();
        let a = k.congruence(g).expect("shapes agree").to_rat();
        let gx0 = g.mul_vec(x0);
        let bvec: Vec<Rat> = (0..r).map(|j| Rat::from_integer((0..k.rows()).map(|i| k[(i, j)] * gx0[i]).sum())).collect();
        let c0 = Rat::from_integer(x0.iter().zip(&gx0).map(|(x, y)| x * y).sum());
        let (center, shift) = if r == 0 {
            (Vec::new(), Rat::from_integer(0))
        } else {
            let inv = a.inverse().expect("definite");
            let center: Vec<Rat> =
                (0..r).map(|i| -(0..r).map(|j| inv[(i, j)] * bvec[j]).fold(Rat::from_integer(0), |s, t| s + t)).collect();
            let shift = (0..r).map(|i| bvec[i] * center[i]).fold(Rat::from_integer(0), |s, t| s + t);
            (center, shift)
        };
        // f(y) = (y-c)^T A (y-c) + c0 + b.c
        let radius = Rat::from_integer(norm) - c0 - shift;
        let mut m = a;
        let mut d = vec![Rat::from_integer(0); r];
        let mut l = vec![vec![Rat::from_integer(0); r]; r];
        for i in (0..r).rev() {
            d[i] = m[(i, i)];
            for j in 0..i {
                l[i][j] = m[(i, j)] / d[i];
            }
            for j in 0..i {
                for t in 0..i {
                    let v = l[i][j] * l[i][t] * d[i];
                    m[(j, t)] -= v;
                }
            }
        }
        Shell { d, l, center, radius }
    }
}

/// Integer solutions of `a x = c`: a particular solution and a kernel basis.
fn solve_affine(a: &IntMatrix, c: &[i128]) -> Option<(Vec<i128>, IntMatrix)> {
    let snf = smith_normal_form(a);
    let diag = snf.diagonal();
    let uc = snf.u.mul_vec(c);
    let n = a.cols();
    let mut y = vec![0i128; n];
    let rank = diag.iter().filter(|&&s| s != 0).count();
    for i in 0..uc.len() {
        if i < rank {
            if uc[i] % diag[i] != 0 {
                return None;
            }
            y[i] = uc[i] / diag[i];
        } else if uc[i] != 0 {
            return None;
        }
    }
    let x0 = snf.v.mul_vec(&y);
    Some((x0, snf.v.col_range(rank, n)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qad_e8_example_2_2() {
        let c = embed_qad_e8(2, 2).unwrap();
        assert_eq!(c.parts, vec![vec![0, 0, 1, 1], vec![1, 1, 0, 0]]);
        assert_eq!(c.glue_coset, Some(GlueCoset::Standard));
        assert_eq!(c.saturation_index, 1);
    }

    #[test]
    fn qad_e8_odd_d_uses_alternate_coset() {
        let c = embed_qad_e8(1, 3).unwrap();
        assert_eq!(c.glue_coset, Some(GlueCoset::Alternate));
        assert_eq!(c.saturation_index, 1);
        assert!(matches!(embed_qad_e8(4, 4), Err(Error::BadParams(_))));
    }

    #[test]
    fn qad_a1_examples() {
        let c = embed_qad_a1(4, 4).unwrap();
        let m = c.embedding.matrix();
        let mut z1 = vec![0; 10];
        z1[4] = 2;
        let mut z2 = vec![0; 10];
        z2[4] = -1;
        z2[9] = 1;
        assert_eq!(m.col(0), z1);
        assert_eq!(m.col(1), z2);
        assert_eq!(c.saturation_index, 2);
        assert_eq!(embed_qad_a1(8, 4).unwrap().parts[0], vec![0, 0, 0, 1]);
    }

    #[test]
    fn split_examples() {
        let c = embed_split(2, 3, false).unwrap();
        assert_eq!(c.embedding.matrix().col(0), vec![1, 0, 0, 0, 1, 0, 0, 0, 0, 0]);
        assert_eq!(c.embedding.matrix().col(1), vec![0, 0, 0, 0, 0, 1, 1, 0, 0, 1]);
        assert_eq!(c.saturation_index, 1);
        let s = embed_split(1, 1, true).unwrap();
        assert_eq!(s.embedding.matrix().col(0), vec![1, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(s.embedding.matrix().col(1), vec![0, 0, 0, 0, 1, 0, 0, 0]);
        assert_eq!(embed_split(8, 3, true).unwrap_err(), Error::NotRepresentable(8));
    }

    #[test]
    fn search_rank_one_into_a1_power() {
        let src = catalog::rank_one(-200);
        let tgt = catalog::a_n(1).rescale(-1).power(4);
        let e = search_definite_embedding(&src, &tgt, DEFAULT_SEARCH_BUDGET).unwrap();
        assert!(e.is_primitive().unwrap());
        let src8 = catalog::rank_one(-16);
        assert!(matches!(search_definite_embedding(&src8, &tgt, DEFAULT_SEARCH_BUDGET), Err(Error::NotFound(_))));
    }

    #[test]
    fn search_a2_into_e8() {
        let e = search_definite_embedding(&catalog::a_n(2), &catalog::e8(), DEFAULT_SEARCH_BUDGET).unwrap();
        assert!(e.verify() && e.is_primitive().unwrap());
    }
}
