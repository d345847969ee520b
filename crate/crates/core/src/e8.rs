//! Coordinate model of `E8` inside `Q^8`.
//!
//! `E8 = D8 + Z g` where `D8` is the even-sum integer vectors and the glue
//! vector `g` is `(1/2, ..., 1/2)` (standard coset) or
//! `(1/2, ..., 1/2, -1/2)` (alternate coset). Both are even unimodular.
//! Vectors are passed around in doubled coordinates `2v in Z^8`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::GramLattice;
use crate::matrix::{IntMatrix, RatMatrix};
use crate::normal_form::{column_hnf, solve_integral};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GlueCoset {
    Standard,
    Alternate,
}

#[derive(Clone, Debug)]
pub struct E8CoordModel {
    coset: GlueCoset,
    /// Columns are a Z-basis in doubled coordinates.
    basis: IntMatrix,
}

impl E8CoordModel {
    pub fn new(coset: GlueCoset) -> Self {
        let mut gens = Vec::new();
        for i in 0..7 {
            let mut v = vec![0; 8];
            v[i] = 2;
            v[i + 1] = -2;
            gens.push(v);
        }
        let mut v = vec![0; 8];
        v[6] = 2;
        v[7] = 2;
        gens.push(v);
        gens.push(Self::glue_doubled(coset).to_vec());
        let basis = column_hnf(&IntMatrix::from_cols(&gens).expect("rectangular"));
        E8CoordModel { coset, basis }
    }

    pub fn coset(&self) -> GlueCoset {
        self.coset
    }

    pub fn glue_doubled(coset: GlueCoset) -> [i128; 8] {
        match coset {
            GlueCoset::Standard => [1; 8],
            GlueCoset::Alternate => [1, 1, 1, 1, 1, 1, 1, -1],
        }
    }

    /// Membership test for a vector given in doubled coordinates.
    pub fn contains_doubled(&self, v2: &[i128]) -> bool {
        assert_eq!(v2.len(), 8);
        let sum: i128 = v2.iter().sum();
        if v2.iter().all(|x| x % 2 == 0) {
            return (sum / 2) % 2 == 0;
        }
        if v2.iter().all(|x| x.rem_euclid(2) == 1) {
            let s = (sum / 2).rem_euclid(2);
            return match self.coset {
                GlueCoset::Standard => s == 0,
                GlueCoset::Alternate => s == 1,
            };
        }
        false
    }

    /// Z-basis in doubled coordinates (columns).
    pub fn basis_doubled(&self) -> &IntMatrix {
        &self.basis
    }

    /// The model as an abstract lattice in its own basis.
    pub fn lattice(&self) -> GramLattice {
        let g = self.basis.transpose().mul(&self.basis).expect("shapes agree");
        let mut q = IntMatrix::zeros(8, 8);
        for i in 0..8 {
            for j in 0..8 {
                q[(i, j)] = g[(i, j)] / 4;
            }
        }
        GramLattice::new("E8", q).expect("symmetric")
    }

    /// Coordinates of a doubled vector in the model basis.
    pub fn coords(&self, v2: &[i128]) -> Result<Vec<i128>> {
        if !self.contains_doubled(v2) {
            return Err(Error::ConstructionFailed(format!("{v2:?}/2 is not in the {:?} E8 model", self.coset)));
        }
        solve_integral(&self.basis, v2).ok_or_else(|| Error::Internal("E8 basis solve failed".into()))
    }

    /// Matrix, in the model basis, of a linear map given in standard coordinates.
    pub fn transport(&self, map: &IntMatrix) -> Result<IntMatrix> {
        let b = self.basis.to_rat();
        let inv = b.inverse().ok_or_else(|| Error::Internal("singular E8 basis".into()))?;
        let m: RatMatrix = inv.mul(&map.to_rat()).mul(&b);
        m.to_int().ok_or_else(|| Error::ConstructionFailed("map does not preserve the E8 model".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_cosets_are_even_unimodular() {
        for c in [GlueCoset::Standard, GlueCoset::Alternate] {
            let l = E8CoordModel::new(c).lattice();
            assert_eq!(l.det(), 1);
            assert!(l.is_even());
            assert!(l.is_positive_definite());
        }
    }

    #[test]
    fn membership_examples() {
        let std = E8CoordModel::new(GlueCoset::Standard);
        let alt = E8CoordModel::new(GlueCoset::Alternate);
        assert!(std.contains_doubled(&[1, 1, -1, -1, 1, 1, 1, 1]));
        assert!(!alt.contains_doubled(&[1; 8]));
        assert!(alt.contains_doubled(&[1, 1, 1, 1, 1, 1, 1, -1]));
        assert!(!std.contains_doubled(&[2, 0, 0, 0, 0, 0, 0, 0]));
        assert!(std.contains_doubled(&[2, 2, 0, 0, 0, 0, 0, 0]));
    }

    #[test]
    fn coordinates_roundtrip() {
        let m = E8CoordModel::new(GlueCoset::Alternate);
        let v = [1, 1, 1, -1, 1, 1, 3, -1];
        let x = m.coords(&v).unwrap();
        assert_eq!(m.basis_doubled().mul_vec(&x), v.to_vec());
    }
}
