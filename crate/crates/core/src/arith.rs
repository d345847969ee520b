//! Elementary number theory on machine integers.

use num_integer::Integer;

/// Non-negative gcd.
pub fn gcd(a: i128, b: i128) -> i128 {
    a.gcd(&b)
}

/// Gcd of a slice; zero for the empty slice.
pub fn gcd_all(xs: &[i128]) -> i128 {
    xs.iter().fold(0, |g, &x| gcd(g, x))
}

/// Extended gcd: returns `(g, s, t)` with `s*a + t*b = g >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let e = a.extended_gcd(&b);
    if e.gcd < 0 {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Floor of the square root of `n >= 0`.
pub fn isqrt(n: i128) -> i128 {
    assert!(n >= 0, "isqrt of negative number");
    n.isqrt()
}

/// `Some(r)` if `n = r^2` with `r >= 0`.
pub fn exact_sqrt(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let r = isqrt(n);
    (r * r == n).then_some(r)
}

/// Prime factorisation as `(p, e)` pairs with increasing `p`. `n >= 1`.
pub fn factorize(mut n: i128) -> Vec<(i128, u32)> {
    assert!(n >= 1, "factorize expects a positive integer");
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Number of distinct prime divisors.
pub fn rho(n: i128) -> u32 {
    factorize(n).len() as u32
}

/// Number of positive divisors.
pub fn nu(n: i128) -> u64 {
    factorize(n).iter().map(|&(_, e)| e as u64 + 1).product()
}

/// Number of residues `x mod r` with `x^2 = 1 mod r`, by the Chinese remainder theorem.
pub fn count_sqrt1(r: i128) -> u64 {
    factorize(r)
        .iter()
        .map(|&(p, e)| match (p, e) {
            (2, 1) => 1,
            (2, 2) => 2,
            (2, _) => 4,
            _ => 2,
        })
        .product()
}

/// Square-free part `k` of `d`, so that `d = n^2 k` with `k` square-free.
pub fn squarefree_part(d: i128) -> i128 {
    factorize(d)
        .iter()
        .filter(|&&(_, e)| e % 2 == 1)
        .map(|&(p, _)| p)
        .product()
}

pub fn is_squarefree(d: i128) -> bool {
    factorize(d).iter().all(|&(_, e)| e == 1)
}

/// Euclidean remainder in `[0, |m|)`.
pub fn modp(a: i128, m: i128) -> i128 {
    a.rem_euclid(m)
}

pub fn lcm(a: i128, b: i128) -> i128 {
    if a == 0 || b == 0 {
        0
    } else {
        (a / gcd(a, b) * b).abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorisation_roundtrip() {
        for n in 1..2000 {
            let f = factorize(n);
            let back: i128 = f.iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(back, n);
        }
    }

    #[test]
    fn rho_and_nu_examples() {
        assert_eq!((rho(12), nu(12)), (2, 6));
        assert_eq!((rho(30), nu(30)), (3, 8));
        assert_eq!((rho(1), nu(1)), (0, 1));
    }

    #[test]
    fn squarefree_examples() {
        assert_eq!(squarefree_part(12), 3);
        assert_eq!(squarefree_part(36), 1);
        assert_eq!(squarefree_part(30), 30);
    }

    #[test]
    fn ext_gcd_signs() {
        for a in -20..20 {
            for b in -20..20 {
                let (g, s, t) = ext_gcd(a, b);
                assert_eq!(s * a + t * b, g);
                assert_eq!(g, gcd(a, b));
            }
        }
    }
}
