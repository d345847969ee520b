//! Discriminant forms of even lattices and their isometry groups.
//!
//! An element of `D = L^v / L` is stored by its coordinates `c_i mod d_i`
//! against the generators read off from the Smith normal form of the Gram
//! matrix. For fast arithmetic the values are scaled by the exponent `N`
//! of the group: `q * N` lives in `Z / 2N` and `b * N` in `Z / N`.

use num_traits::Zero;
use serde::Serialize;

use crate::arith::rho;
use crate::error::{Error, Result};
use crate::lattice::GramLattice;
use crate::matrix::Rat;
use crate::normal_form::smith_normal_form;

/// Default cap on candidate generator-image tuples.
pub const DEFAULT_ISOMETRY_CAP: u128 = 1_000_000;

/// Cap from `LATTICE_IRR_CAP`, falling back to [`DEFAULT_ISOMETRY_CAP`].
pub fn isometry_cap() -> u128 {
    std::env::var("LATTICE_IRR_CAP").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_ISOMETRY_CAP)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteQuadraticForm {
    factors: Vec<i128>,
    q: Vec<Rat>,
    b: Vec<Vec<Rat>>,
    /// Generators as rational coordinate vectors in the ambient basis.
    generators: Vec<Vec<Rat>>,
    exponent: i128,
    q_scaled: Vec<i128>,
    b_scaled: Vec<Vec<i128>>,
}

/// `r mod m` for a rational `r` and positive integer `m`, in `[0, m)`.
pub fn rat_mod(r: Rat, m: i128) -> Rat {
    let m = Rat::from_integer(m);
    r - m * (r / m).floor()
}

impl FiniteQuadraticForm {
    /// Discriminant form of an even non-degenerate lattice.
    pub fn from_lattice(l: &GramLattice) -> Result<Self> {
        if !l.is_even() {
            return Err(Error::BadParams(format!("{} is not even", l.name())));
        }
        let snf = smith_normal_form(l.gram());
        let diag = snf.diagonal();
        if diag.contains(&0) {
            return Err(Error::DegenerateLattice(l.name().to_string()));
        }
        let mut factors = Vec::new();
        let mut generators = Vec::new();
        for (i, &s) in diag.iter().enumerate() {
            if s > 1 {
                factors.push(s);
                generators.push(snf.v.col(i).iter().map(|&x| Rat::new(x, s)).collect::<Vec<_>>());
            }
        }
        let k = factors.len();
        let mut q = Vec::with_capacity(k);
        let mut b = vec![vec![Rat::zero(); k]; k];
        for i in 0..k {
            q.push(rat_mod(l.pair_rat(&generators[i], &generators[i]), 2));
            for j in 0..k {
                b[i][j] = rat_mod(l.pair_rat(&generators[i], &generators[j]), 1);
            }
        }
        Self::assemble(factors, q, b, generators)
    }

    fn assemble(factors: Vec<i128>, q: Vec<Rat>, b: Vec<Vec<Rat>>, generators: Vec<Vec<Rat>>) -> Result<Self> {
        let exponent = factors.iter().fold(1, |l, &f| crate::arith::lcm(l, f));
        let scale = |r: Rat, m: i128| -> Result<i128> {
            let v = r * Rat::from_integer(exponent);
            if !v.is_integer() {
                return Err(Error::Internal(format!("value {r} has denominator not dividing {exponent}")));
            }
            Ok(v.to_integer().rem_euclid(m))
        };
        let q_scaled = q.iter().map(|&x| scale(x, 2 * exponent)).collect::<Result<Vec<_>>>()?;
        let b_scaled = b
            .iter()
            .map(|row| row.iter().map(|&x| scale(x, exponent)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(FiniteQuadraticForm { factors, q, b, generators, exponent, q_scaled, b_scaled })
    }

    pub fn factors(&self) -> &[i128] {
        &self.factors
    }

    pub fn q_values(&self) -> &[Rat] {
        &self.q
    }

    pub fn b_values(&self) -> &[Vec<Rat>] {
        &self.b
    }

    pub fn generators(&self) -> &[Vec<Rat>] {
        &self.generators
    }

    /// Minimal number of generators.
    pub fn ell(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> i128 {
        self.factors.iter().product()
    }

    pub fn exponent(&self) -> i128 {
        self.exponent
    }

    /// `N q(x)` in `Z/2N`.
    pub fn q_scaled(&self, x: &[i128]) -> i128 {
        let k = self.ell();
        let mut s = 0i128;
        for i in 0..k {
            if x[i] == 0 {
                continue;
            }
            s += x[i] * x[i] * self.q_scaled[i];
            for j in i + 1..k {
                s += 2 * x[i] * x[j] * self.b_scaled[i][j];
            }
            s = s.rem_euclid(2 * self.exponent);
        }
        s
    }

    /// `N b(x, y)` in `Z/N`.
    pub fn b_scaled(&self, x: &[i128], y: &[i128]) -> i128 {
        let k = self.ell();
        let mut s = 0i128;
        for i in 0..k {
            if x[i] == 0 {
                continue;
            }
            for j in 0..k {
                s += x[i] * y[j] * self.b_scaled[i][j];
            }
            s = s.rem_euclid(self.exponent);
        }
        s
    }

    pub fn q_of(&self, x: &[i128]) -> Rat {
        Rat::new(self.q_scaled(x), self.exponent)
    }

    pub fn b_of(&self, x: &[i128], y: &[i128]) -> Rat {
        Rat::new(self.b_scaled(x, y), self.exponent)
    }

    pub fn add(&self, x: &[i128], y: &[i128]) -> Vec<i128> {
        x.iter().zip(y).zip(&self.factors).map(|((a, b), f)| (a + b).rem_euclid(*f)).collect()
    }

    pub fn scale(&self, k: i128, x: &[i128]) -> Vec<i128> {
        x.iter().zip(&self.factors).map(|(a, f)| (k * a).rem_euclid(*f)).collect()
    }

    pub fn is_zero(&self, x: &[i128]) -> bool {
        x.iter().all(|&a| a == 0)
    }

    /// All group elements in lexicographic order of coordinates.
    pub fn elements(&self) -> Vec<Vec<i128>> {
        let mut out = vec![vec![]];
        for &f in &self.factors {
            let mut next = Vec::with_capacity(out.len() * f as usize);
            for e in &out {
                for c in 0..f {
                    let mut v = e.clone();
                    v.push(c);
                    next.push(v);
                }
            }
            out = next;
        }
        out
    }

    /// Checks `q(x+y) - q(x) - q(y) = 2 b(x,y) mod 2` on all generator pairs.
    pub fn check_polarisation(&self) -> bool {
        let k = self.ell();
        let unit = |i: usize| {
            let mut v = vec![0; k];
            v[i] = 1;
            v
        };
        let two_n = 2 * self.exponent;
        (0..k).all(|i| {
            (0..k).all(|j| {
                let (x, y) = (unit(i), unit(j));
                let lhs = self.q_scaled(&self.add(&x, &y)) - self.q_scaled(&x) - self.q_scaled(&y);
                (lhs - 2 * self.b_scaled(&x, &y)).rem_euclid(two_n) == 0
            })
        })
    }

    /// True if `b` has trivial radical. Always the case for lattice discriminants.
    pub fn is_nondegenerate(&self) -> bool {
        let k = self.ell();
        self.elements().iter().skip(1).all(|x| {
            (0..k).any(|i| {
                let mut g = vec![0; k];
                g[i] = 1;
                self.b_scaled(x, &g) != 0
            })
        })
    }

    pub fn to_json(&self) -> FqfJson {
        FqfJson {
            factors: self.factors.clone(),
            q: self.q.iter().map(rat_string).collect(),
            b: self.b.iter().map(|r| r.iter().map(rat_string).collect()).collect(),
        }
    }

    /// Isometries of `(D, q)`, enumerated exactly when the number of
    /// candidate generator-image tuples is at most `cap`.
    ///
    /// Generator `i` must go to an element of order dividing `d_i` with the
    /// same `q`; a tuple is kept if it also preserves `b` on generator pairs,
    /// which together with the diagonal values forces `q` to be preserved on
    /// all of `D`. Such a map is injective because `b` is non-degenerate.
    pub fn enumerate_isometries(&self, cap: u128) -> IsometryCount {
        let k = self.ell();
        let order = self.order();
        let bound_disc_pow_ell = order.checked_pow(k as u32);
        let bound_two_pow_rho = (k <= 1).then(|| 1i128 << (rho(order.max(1)) + 1));
        if k == 0 {
            return IsometryCount { exact: Some(1), candidate_tuples: 1, bound_disc_pow_ell, bound_two_pow_rho };
        }
        let elements = self.elements();
        let mut cands: Vec<Vec<&Vec<i128>>> = Vec::with_capacity(k);
        for i in 0..k {
            let di = self.factors[i];
            let qi = self.q_scaled[i];
            cands.push(
                elements.iter().filter(|y| self.is_zero(&self.scale(di, y)) && self.q_scaled(y) == qi).collect(),
            );
        }
        let tuples = cands.iter().fold(1u128, |p, c| p.saturating_mul(c.len() as u128));
        if tuples > cap {
            return IsometryCount { exact: None, candidate_tuples: tuples, bound_disc_pow_ell, bound_two_pow_rho };
        }
        let mut chosen: Vec<&Vec<i128>> = Vec::with_capacity(k);
        let count = self.backtrack(&cands, &mut chosen);
        IsometryCount { exact: Some(count), candidate_tuples: tuples, bound_disc_pow_ell, bound_two_pow_rho }
    }

    fn backtrack<'a>(&self, cands: &[Vec<&'a Vec<i128>>], chosen: &mut Vec<&'a Vec<i128>>) -> u64 {
        let i = chosen.len();
        if i == cands.len() {
            return 1;
        }
        let mut total = 0;
        for &y in &cands[i] {
            if (0..i).all(|j| self.b_scaled(chosen[j], y) == self.b_scaled[j][i]) {
                chosen.push(y);
                total += self.backtrack(cands, chosen);
                chosen.pop();
            }
        }
        total
    }
}

fn rat_string(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct FqfJson {
    pub factors: Vec<i128>,
    pub q: Vec<String>,
    pub b: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct IsometryCount {
    /// `|O(D)|` when enumeration ran; `None` above the cap.
    pub exact: Option<u64>,
    pub candidate_tuples: u128,
    /// `|D|^ell`, the generic bound.
    pub bound_disc_pow_ell: Option<i128>,
    /// `2^(rho(|D|)+1)`, valid for cyclic `D`.
    pub bound_two_pow_rho: Option<i128>,
}

/// Exact `|O(D)|` for `D = D(Z(-2d) + A2(-1))`, counted with the explicit
/// generators `l/2d` and `(2 d1 + d2)/3` rather than Smith generators.
///
/// A matrix `(a11 a12; a21 a22)` with `a1j mod 2d`, `a2j mod 3` is kept when
/// it is a well-defined endomorphism, preserves `q` on both generators and
/// `b` on the pair, and is bijective.
pub fn og10_split_aut_count(d: i128) -> Result<u64> {
    if d < 1 {
        return Err(Error::BadParams(format!("d must be positive, got {d}")));
    }
    // Work in units of 1/(6d): q in Z/12d, b in Z/6d.
    let m = 6 * d;
    let q1 = (-3i128).rem_euclid(2 * m); // q(l/2d) = -1/2d
    let q2 = (-4 * d).rem_euclid(2 * m); // q(alpha) = -2/3
    let qv = |x: i128, y: i128| (x * x * q1 + y * y * q2).rem_euclid(2 * m);
    let bv = |x1: i128, y1: i128, x2: i128, y2: i128| (x1 * x2 * q1 + y1 * y2 * q2).rem_euclid(m);
    let mut count = 0u64;
    for a11 in 0..2 * d {
        for a21 in 0..3 {
            if (2 * d * a21) % 3 != 0 || qv(a11, a21) != q1 {
                continue;
            }
            for a12 in 0..2 * d {
                if (3 * a12) % (2 * d) != 0 {
                    continue;
                }
                for a22 in 0..3 {
                    if qv(a12, a22) != q2 || bv(a11, a21, a12, a22) != 0 {
                        continue;
                    }
                    if is_bijective_2x2(d, a11, a21, a12, a22) {
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(count)
}

fn is_bijective_2x2(d: i128, a11: i128, a21: i128, a12: i128, a22: i128) -> bool {
    let mut seen = vec![false; (6 * d) as usize];
    for x in 0..2 * d {
        for y in 0..3 {
            let u = (x * a11 + y * a12).rem_euclid(2 * d);
            let v = (x * a21 + y * a22).rem_euclid(3);
            let idx = (u * 3 + v) as usize;
            if seen[idx] {
                return false;
            }
            seen[idx] = true;
        }
    }
    true
}

/// `72 * 2^rho(d)`, the bound on [`og10_split_aut_count`] when `3` does not divide `d`.
pub fn og10_split_aut_bound(d: i128) -> i128 {
    72 * (1i128 << rho(d))
}

/// Checks `|O(D)| <= 2^(rho(|D|)+1)` style bounds; kept for reports.
pub fn two_pow_rho_plus_one(n: i128) -> i128 {
    1i128 << (rho(n.max(1)) + 1)
}

impl FiniteQuadraticForm {
    /// Order of the element `x`.
    pub fn element_order(&self, x: &[i128]) -> i128 {
        x.iter().zip(&self.factors).map(|(&c, &f)| f / crate::arith::gcd(c, f)).fold(1, crate::arith::lcm)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn a1_and_a2_examples() {
        let a1 = FiniteQuadraticForm::from_lattice(&catalog::a_n(1)).unwrap();
        assert_eq!(a1.factors(), &[2]);
        assert_eq!(a1.q_values(), &[Rat::new(1, 2)]);
        let a2m = FiniteQuadraticForm::from_lattice(&catalog::a_n(2).rescale(-1)).unwrap();
        assert_eq!(a2m.factors(), &[3]);
        assert_eq!(a2m.q_values(), &[Rat::new(4, 3)]);
        assert!(FiniteQuadraticForm::from_lattice(&catalog::hyperbolic()).unwrap().factors().is_empty());
    }

    #[test]
    fn isometry_examples() {
        let count = |l: &GramLattice| {
            FiniteQuadraticForm::from_lattice(l).unwrap().enumerate_isometries(DEFAULT_ISOMETRY_CAP).exact
        };
        assert_eq!(count(&catalog::a_n(1)), Some(1));
        assert_eq!(count(&catalog::a_n(2).rescale(-1)), Some(2));
    }
}
