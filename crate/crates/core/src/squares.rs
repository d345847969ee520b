//! Representations by sums of squares and by binary quadratic forms.
//!
//! All searches return the lexicographically smallest non-decreasing tuple,
//! which makes every downstream construction deterministic.

use serde::Serialize;

use crate::arith::{exact_sqrt, gcd, gcd_all, isqrt};
use crate::error::{Error, Result};

/// Smallest non-decreasing `(a1, a2, a3, a4)` with `sum ai^2 = n` and, if
/// `coprime`, `gcd(a1, ..., a4) = 1`.
fn four_squares_search(n: i128, coprime: bool) -> Option<[i128; 4]> {
    if n < 0 {
        return None;
    }
    let mut a1 = 0;
    while 4 * a1 * a1 <= n {
        let r1 = n - a1 * a1;
        let mut a2 = a1;
        while 3 * a2 * a2 <= r1 {
            let r2 = r1 - a2 * a2;
            let mut a3 = a2;
            while 2 * a3 * a3 <= r2 {
                if let Some(a4) = exact_sqrt(r2 - a3 * a3) {
                    if !coprime || gcd(gcd(a1, a2), gcd(a3, a4)) == 1 {
                        return Some([a1, a2, a3, a4]);
                    }
                }
                a3 += 1;
            }
            a2 += 1;
        }
        a1 += 1;
    }
    None
}

/// Lagrange decomposition `n = a1^2 + ... + a4^2`, lexicographically smallest
/// non-decreasing.
pub fn four_squares(n: i128) -> Result<[i128; 4]> {
    if n < 0 {
        return Err(Error::BadParams(format!("four_squares of negative {n}")));
    }
    four_squares_search(n, false).ok_or_else(|| Error::Internal(format!("no four-square decomposition of {n}")))
}

/// Decomposition into four squares with no common factor. Exists exactly
/// when `8` does not divide `n`.
pub fn coprime_four_squares(n: i128) -> Result<[i128; 4]> {
    if n <= 0 {
        return Err(Error::NotRepresentable(n));
    }
    four_squares_search(n, true).ok_or(Error::NotRepresentable(n))
}

/// `n = x^2 + y^2 + z^2` with `gcd(x, y, z) = 1`, smallest non-decreasing.
pub fn three_coprime_squares(n: i128) -> Result<[i128; 3]> {
    if n <= 0 {
        return Err(Error::NotRepresentable(n));
    }
    let mut x = 0;
    while 3 * x * x <= n {
        let r = n - x * x;
        let mut y = x;
        while 2 * y * y <= r {
            if let Some(z) = exact_sqrt(r - y * y) {
                if gcd_all(&[x, y, z]) == 1 {
                    return Ok([x, y, z]);
                }
            }
            y += 1;
        }
        x += 1;
    }
    Err(Error::NotFound(format!("{n} is not a sum of three coprime squares")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BinaryRepresentation {
    pub x: i128,
    pub y: i128,
}

/// Solves `a X^2 - b X Y + c Y^2 = d`.
///
/// Candidates are ordered by `(|X|, |Y|)` and then by sign, `+` before `-`.
/// For a positive definite form `|X|` and `|Y|` are bounded a priori; for
/// other forms the caller's `bound` (default `d`) limits the box.
pub fn represent_binary_form(
    a: i128,
    b: i128,
    c: i128,
    d: i128,
    require_coprime: bool,
    bound: Option<i128>,
) -> Result<BinaryRepresentation> {
    let disc = 4 * a * c - b * b;
    let bound = bound.unwrap_or_else(|| {
        if disc > 0 && a > 0 {
            isqrt(4 * a.max(c) * d.abs() / disc) + 1
        } else {
            d.abs().max(1)
        }
    });
    let f = |x: i128, y: i128| a * x * x - b * x * y + c * y * y;
    for ax in 0..=bound {
        for ay in 0..=bound {
            if require_coprime && gcd(ax, ay) != 1 {
                continue;
            }
            for sx in [1, -1] {
                if ax == 0 && sx == -1 {
                    continue;
                }
                for sy in [1, -1] {
                    if ay == 0 && sy == -1 {
                        continue;
                    }
                    let (x, y) = (sx * ax, sy * ay);
                    if f(x, y) == d {
                        return Ok(BinaryRepresentation { x, y });
                    }
                }
            }
        }
    }
    Err(Error::NotFound(format!("{d} is not represented by ({a}, {b}, {c}) within |X|, |Y| <= {bound}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lagrange_examples() {
        assert_eq!(four_squares(7).unwrap(), [1, 1, 1, 2]);
        assert_eq!(four_squares(15).unwrap(), [1, 1, 2, 3]);
        assert_eq!(four_squares(0).unwrap(), [0, 0, 0, 0]);
    }

    #[test]
    fn coprime_examples() {
        assert_eq!(coprime_four_squares(4).unwrap(), [1, 1, 1, 1]);
        assert_eq!(coprime_four_squares(2).unwrap(), [0, 0, 1, 1]);
        assert_eq!(coprime_four_squares(8), Err(Error::NotRepresentable(8)));
    }

    #[test]
    fn three_square_examples() {
        assert_eq!(three_coprime_squares(3).unwrap(), [1, 1, 1]);
        assert_eq!(three_coprime_squares(6).unwrap(), [1, 1, 2]);
        assert!(matches!(three_coprime_squares(7), Err(Error::NotFound(_))));
    }

    #[test]
    fn binary_form_examples() {
        assert_eq!(represent_binary_form(1, 1, 1, 3, true, None).unwrap(), BinaryRepresentation { x: 1, y: -1 });
        assert_eq!(represent_binary_form(1, 0, 1, 5, true, None).unwrap(), BinaryRepresentation { x: 1, y: 2 });
        assert!(matches!(represent_binary_form(1, 1, 1, 2, true, Some(10)), Err(Error::NotFound(_))));
    }
}
