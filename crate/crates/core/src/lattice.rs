//! Integral lattices given by a Gram matrix.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, Rat, RatMatrix};

/// Signature `(positive, negative)` of a non-degenerate form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
}

/// A free Z-module with a symmetric integral bilinear form, stored as the
/// Gram matrix of a fixed basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramLattice {
    name: String,
    gram: IntMatrix,
}

#[derive(Serialize, Deserialize)]
struct LatticeJson {
    name: String,
    rank: usize,
    gram: Vec<Vec<i128>>,
}

impl GramLattice {
    pub fn new(name: impl Into<String>, gram: IntMatrix) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::ShapeMismatch("Gram matrix must be square".into()));
        }
        if !gram.is_symmetric() {
            return Err(Error::ShapeMismatch("Gram matrix must be symmetric".into()));
        }
        Ok(GramLattice { name: name.into(), gram })
    }

    pub fn from_rows(name: impl Into<String>, rows: &[Vec<i128>]) -> Result<Self> {
        Self::new(name, IntMatrix::from_rows(rows)?)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn det(&self) -> i128 {
        self.gram.det()
    }

    /// `|det|`, the order of the discriminant group.
    pub fn disc(&self) -> i128 {
        self.det().abs()
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[(i, i)] % 2 == 0)
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.det() != 0
    }

    pub fn is_unimodular(&self) -> bool {
        self.disc() == 1
    }

    /// `(u, v)` for coordinate vectors.
    pub fn pair(&self, u: &[i128], v: &[i128]) -> i128 {
        let gv = self.gram.mul_vec(v);
        u.iter().zip(&gv).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self, v: &[i128]) -> i128 {
        self.pair(v, v)
    }

    /// Rational pairing, used for dual vectors.
    pub fn pair_rat(&self, u: &[Rat], v: &[Rat]) -> Rat {
        let n = self.rank();
        let mut s = Rat::zero();
        for i in 0..n {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..n {
                let g = self.gram[(i, j)];
                if g != 0 && !v[j].is_zero() {
                    s += u[i] * v[j] * g;
                }
            }
        }
        s
    }

    /// Signature by exact congruence diagonalisation over the rationals.
    /// Zero diagonals are handled by the 2x2 step `e_i -> e_i + e_j`.
    pub fn signature(&self) -> Result<Signature> {
        let diag = congruence_diagonal(&self.gram.to_rat());
        if diag.iter().any(|d| d.is_zero()) {
            return Err(Error::DegenerateLattice(self.name.clone()));
        }
        Ok(Signature {
            positive: diag.iter().filter(|d| d.is_positive()).count(),
            negative: diag.iter().filter(|d| d.is_negative()).count(),
        })
    }

    pub fn is_positive_definite(&self) -> bool {
        matches!(self.signature(), Ok(s) if s.negative == 0)
    }

    pub fn is_negative_definite(&self) -> bool {
        matches!(self.signature(), Ok(s) if s.positive == 0)
    }

    /// Orthogonal direct sum; the name joins the summand names with `+`.
    pub fn direct_sum(parts: &[&GramLattice]) -> GramLattice {
        let grams: Vec<&IntMatrix> = parts.iter().map(|p| &p.gram).collect();
        let name = parts.iter().map(|p| p.name.as_str()).collect::<Vec<_>>().join("+");
        GramLattice { name, gram: IntMatrix::block_diag(&grams) }
    }

    /// `L^{+k}`.
    pub fn power(&self, k: usize) -> GramLattice {
        let parts: Vec<&GramLattice> = std::iter::repeat_n(self, k).collect();
        GramLattice::direct_sum(&parts).with_name(format!("{}^{}", self.name, k))
    }

    /// `L(k)`: the same module with the form multiplied by `k`.
    pub fn rescale(&self, k: i128) -> GramLattice {
        let name = if k == -1 { format!("{}(-1)", self.name) } else { format!("{}({})", self.name, k) };
        GramLattice { name, gram: self.gram.scale(k) }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(LatticeJson { name: self.name.clone(), rank: self.rank(), gram: self.gram.to_rows() })
            .expect("lattice serialises")
    }

    /// Parses `{"name", "rank", "gram"}`; rejects asymmetric or ragged input.
    pub fn from_json_str(s: &str) -> Result<GramLattice> {
        let j: LatticeJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let l = GramLattice::from_rows(j.name, &j.gram)?;
        if l.rank() != j.rank {
            return Err(Error::ShapeMismatch(format!("rank {} does not match Gram size {}", j.rank, l.rank())));
        }
        Ok(l)
    }
}

impl Serialize for GramLattice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LatticeJson { name: self.name.clone(), rank: self.rank(), gram: self.gram.to_rows() }.serialize(s)
    }
}

/// Diagonal of a rational congruence diagonalisation of a symmetric matrix.
pub(crate) fn congruence_diagonal(g: &RatMatrix) -> Vec<Rat> {
    congruence_diagonalize(g).0
}

/// Returns `(d, p)` where the columns of `p` are pairwise orthogonal vectors
/// with `p^T g p = diag(d)`.
pub(crate) fn congruence_diagonalize(g: &RatMatrix) -> (Vec<Rat>, RatMatrix) {
    let n = g.rows();
    let mut a = g.clone();
    let mut p = RatMatrix::identity(n);
    let mut diag = Vec::with_capacity(n);
    for k in 0..n {
        if a[(k, k)].is_zero() {
            if let Some(i) = (k + 1..n).find(|&i| !a[(i, i)].is_zero()) {
                swap_sym(&mut a, &mut p, k, i);
            } else if let Some((i, j)) =
                (k..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !a[(i, j)].is_zero())
            {
                // all remaining diagonals vanish: e_i + e_j has norm 2 a_ij
                add_sym(&mut a, &mut p, i, j, Rat::from_integer(1));
                swap_sym(&mut a, &mut p, k, i);
            } else {
                diag.extend(std::iter::repeat_n(Rat::zero(), n - k));
                return (diag, p);
            }
        }
        let piv = a[(k, k)];
        for i in k + 1..n {
            let f = a[(i, k)] / piv;
            if !f.is_zero() {
                add_sym(&mut a, &mut p, i, k, -f);
            }
        }
        diag.push(piv);
    }
    (diag, p)
}

/// Simultaneous swap of basis vectors `i`, `j`.
fn swap_sym(a: &mut RatMatrix, p: &mut RatMatrix, i: usize, j: usize) {
    let n = a.rows();
    for t in 0..n {
        let x = a[(i, t)];
        a[(i, t)] = a[(j, t)];
        a[(j, t)] = x;
    }
    for t in 0..n {
        let x = a[(t, i)];
        a[(t, i)] = a[(t, j)];
        a[(t, j)] = x;
    }
    for t in 0..n {
        let x = p[(t, i)];
        p[(t, i)] = p[(t, j)];
        p[(t, j)] = x;
    }
}

/// Basis change `e_i -> e_i + f e_j` applied as a congruence.
fn add_sym(a: &mut RatMatrix, p: &mut RatMatrix, i: usize, j: usize, f: Rat) {
    let n = a.rows();
    for t in 0..n {
        let v = a[(j, t)];
        a[(i, t)] += f * v;
    }
    for t in 0..n {
        let v = a[(t, j)];
        a[(t, i)] += f * v;
    }
    for t in 0..n {
        let v = p[(t, j)];
        p[(t, i)] += f * v;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hyperbolic_plane_signature() {
        let u = GramLattice::from_rows("U", &[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(u.signature().unwrap(), Signature { positive: 1, negative: 1 });
        assert!(u.is_even() && u.is_unimodular());
    }

    #[test]
    fn diagonalisation_is_a_congruence() {
        let g = IntMatrix::from_rows(&[vec![0, 1, 2], vec![1, 0, 3], vec![2, 3, 0]]).unwrap().to_rat();
        let (d, p) = congruence_diagonalize(&g);
        let got = p.transpose().mul(&g).mul(&p);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { d[i] } else { Rat::zero() };
                assert_eq!(got[(i, j)], want);
            }
        }
    }

    #[test]
    fn json_rejects_asymmetric() {
        let bad = r#"{"name":"X","rank":2,"gram":[[2,1],[0,2]]}"#;
        assert!(matches!(GramLattice::from_json_str(bad), Err(Error::ShapeMismatch(_))));
        let ok = r#"{"name":"X","rank":2,"gram":[[2,1],[1,2]]}"#;
        assert_eq!(GramLattice::from_json_str(ok).unwrap().det(), 3);
    }
}
