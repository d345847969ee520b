//! Smith and Hermite normal forms, integer kernels and exact solving.

use num_traits::Zero;

use crate::matrix::{IntMatrix, Rat, RatMatrix};

/// Smith normal form `U * M * V = S` with unimodular `U`, `V`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    /// Diagonal entries of `S` (length `min(rows, cols)`).
    pub fn diagonal(&self) -> Vec<i128> {
        (0..self.s.rows().min(self.s.cols())).map(|i| self.s[(i, i)]).collect()
    }

    /// Number of non-zero invariant factors.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|&&d| d != 0).count()
    }
}

/// Smith normal form. The pivot at each stage is the entry of smallest
/// absolute value in the remaining block, first in row-major order, so the
/// transforms are deterministic. Invariant factors satisfy `d_1 | d_2 | ...`
/// and are non-negative.
pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let (r, c) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    for t in 0..r.min(c) {
        loop {
            let Some((pi, pj)) = smallest_entry(&a, t) else {
                return Snf { u, s: a, v };
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);
            let p = a[(t, t)];
            let mut clean = true;
            for i in t + 1..r {
                let q = a[(i, t)] / p;
                a.add_row(i, t, -q);
                u.add_row(i, t, -q);
                clean &= a[(i, t)] == 0;
            }
            for j in t + 1..c {
                let q = a[(t, j)] / p;
                a.add_col(j, t, -q);
                v.add_col(j, t, -q);
                clean &= a[(t, j)] == 0;
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| a[(i, j)] % p != 0));
            match bad {
                Some(i) => {
                    a.add_row(t, i, 1);
                    u.add_row(t, i, 1);
                }
                None => break,
            }
        }
        if a[(t, t)] < 0 {
            a.negate_row(t);
            u.negate_row(t);
        }
    }
    Snf { u, s: a, v }
}

fn smallest_entry(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, i128)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = a[(i, j)].abs();
            if x != 0 && best.is_none_or(|(_, _, b)| x < b) {
                best = Some((i, j, x));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Row-style Hermite normal form of the row span of `a`, restricted to the
/// first `width` columns for pivoting. Row operations act on whole rows, so
/// any trailing columns record the transform. Returns the rank.
fn row_echelon(a: &mut IntMatrix, width: usize, reduce_above: bool) -> usize {
    let m = a.rows();
    let mut r = 0;
    for c in 0..width {
        if r == m {
            break;
        }
        loop {
            let piv = (r..m).filter(|&i| a[(i, c)] != 0).min_by_key(|&i| a[(i, c)].abs());
            let Some(p) = piv else { break };
            a.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..m {
                let q = a[(i, c)] / a[(r, c)];
                a.add_row(i, r, -q);
                done &= a[(i, c)] == 0;
            }
            if done {
                break;
            }
        }
        if a[(r, c)] == 0 {
            continue;
        }
        if a[(r, c)] < 0 {
            a.negate_row(r);
        }
        if reduce_above {
            let p = a[(r, c)];
            for i in 0..r {
                let q = a[(i, c)].div_euclid(p);
                a.add_row(i, r, -q);
            }
        }
        r += 1;
    }
    r
}

/// Canonical basis of the lattice spanned by the columns of `gens`: the
/// column-style Hermite normal form with positive pivots, entries left of
/// each pivot reduced into `[0, pivot)`, and zero columns dropped.
pub fn column_hnf(gens: &IntMatrix) -> IntMatrix {
    let mut t = gens.transpose();
    let w = t.cols();
    let rank = row_echelon(&mut t, w, true);
    let rows: Vec<Vec<i128>> = (0..rank).map(|i| t.row(i).to_vec()).collect();
    if rows.is_empty() {
        return IntMatrix::zeros(gens.rows(), 0);
    }
    IntMatrix::from_rows(&rows).expect("rectangular").transpose()
}

/// Basis (as columns, in column Hermite normal form) of `{x in Z^n : a x = 0}`.
pub fn integer_kernel(a: &IntMatrix) -> IntMatrix {
    let (m, n) = (a.rows(), a.cols());
    let mut aug = a.transpose().hstack(&IntMatrix::identity(n));
    let rank = row_echelon(&mut aug, m, false);
    let rows: Vec<Vec<i128>> = (rank..n).map(|i| aug.row(i)[m..].to_vec()).collect();
    if rows.is_empty() {
        return IntMatrix::zeros(n, 0);
    }
    let k = IntMatrix::from_rows(&rows).expect("rectangular").transpose();
    column_hnf(&k)
}

/// Rank over the rationals.
pub fn rank(a: &IntMatrix) -> usize {
    let mut t = a.clone();
    let w = t.cols();
    row_echelon(&mut t, w, false)
}

/// Solves `b x = y` over the rationals for `b` of full column rank.
/// Returns `None` if the system is inconsistent.
pub fn solve_rational(b: &RatMatrix, y: &[Rat]) -> Option<Vec<Rat>> {
    let (n, k) = (b.rows(), b.cols());
    assert_eq!(y.len(), n);
    let mut a = RatMatrix::zeros(n, k + 1);
    for i in 0..n {
        for j in 0..k {
            a[(i, j)] = b[(i, j)];
        }
        a[(i, k)] = y[i];
    }
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..n).find(|&i| !a[(i, c)].is_zero()) else { continue };
        for j in 0..=k {
            let (x, z) = (a[(p, j)], a[(r, j)]);
            a[(p, j)] = z;
            a[(r, j)] = x;
        }
        let piv = a[(r, c)];
        for j in 0..=k {
            a[(r, j)] /= piv;
        }
        for i in 0..n {
            if i != r && !a[(i, c)].is_zero() {
                let f = a[(i, c)];
                for j in 0..=k {
                    let v = a[(r, j)];
                    a[(i, j)] -= f * v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if (r..n).any(|i| !a[(i, k)].is_zero()) {
        return None;
    }
    let mut x = vec![Rat::zero(); k];
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = a[(row, k)];
    }
    Some(x)
}

/// Solves `b x = y` over the integers, `None` if no integral solution exists.
pub fn solve_integral(b: &IntMatrix, y: &[i128]) -> Option<Vec<i128>> {
    let yr: Vec<Rat> = y.iter().map(|&v| Rat::from_integer(v)).collect();
    let x = solve_rational(&b.to_rat(), &yr)?;
    x.iter().map(|v| v.is_integer().then(|| v.to_integer())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i128]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn snf_identity_holds() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.u.mul(&a).unwrap().mul(&snf.v).unwrap(), snf.s);
        assert_eq!(snf.diagonal(), vec![2, 6, 12]);
        assert_eq!(snf.u.det().abs(), 1);
        assert_eq!(snf.v.det().abs(), 1);
    }

    #[test]
    fn snf_a1_and_u() {
        assert_eq!(smith_normal_form(&m(&[&[2]])).diagonal(), vec![2]);
        assert_eq!(smith_normal_form(&m(&[&[0, 1], &[1, 0]])).diagonal(), vec![1, 1]);
        assert_eq!(smith_normal_form(&m(&[&[2, 0], &[0, 0]])).diagonal(), vec![2, 0]);
    }

    #[test]
    fn kernel_of_row_vector() {
        let k = integer_kernel(&m(&[&[2, 3, 5]]));
        assert_eq!(k.cols(), 2);
        for j in 0..2 {
            let c = k.col(j);
            assert_eq!(2 * c[0] + 3 * c[1] + 5 * c[2], 0);
        }
        // covolume of the kernel equals the norm of the primitive normal vector
        let gram = k.transpose().mul(&k).unwrap();
        assert_eq!(gram.det(), 4 + 9 + 25);
    }

    #[test]
    fn hnf_is_canonical() {
        let a = m(&[&[2, 0], &[1, 3], &[0, 1]]);
        let b = m(&[&[2, 2], &[1, 4], &[0, 1]]);
        assert_eq!(column_hnf(&a), column_hnf(&b));
    }

    #[test]
    fn integral_solve() {
        let b = m(&[&[2, 0], &[0, 1], &[0, 0]]);
        assert_eq!(solve_integral(&b, &[4, 3, 0]), Some(vec![2, 3]));
        assert_eq!(solve_integral(&b, &[3, 3, 0]), None);
        assert_eq!(solve_integral(&b, &[4, 3, 1]), None);
    }
}
