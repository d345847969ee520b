//! Named lattices and a small parser for direct-sum expressions.
//!
//! Expressions are `+`-separated terms, each a base name with an optional
//! rescaling `(k)` and repetition `^m`, e.g. `U^2+E8(-1)^2+A2(-1)`.

use crate::error::{Error, Result};
use crate::lattice::GramLattice;
use crate::matrix::IntMatrix;

pub fn hyperbolic() -> GramLattice {
    GramLattice::from_rows("U", &[vec![0, 1], vec![1, 0]]).expect("valid")
}

/// Rank-one lattice `Z(k)`.
pub fn rank_one(k: i128) -> GramLattice {
    GramLattice::new(format!("Z({k})"), IntMatrix::diagonal(&[k])).expect("valid")
}

/// Positive definite root lattice `A_n` (Cartan matrix).
pub fn a_n(n: usize) -> GramLattice {
    let mut g = IntMatrix::zeros(n, n);
    for i in 0..n {
        g[(i, i)] = 2;
        if i + 1 < n {
            g[(i, i + 1)] = -1;
            g[(i + 1, i)] = -1;
        }
    }
    GramLattice::new(format!("A{n}"), g).expect("valid")
}

/// Positive definite root lattice `D_n`, `n >= 2`.
pub fn d_n(n: usize) -> GramLattice {
    assert!(n >= 2);
    let mut g = IntMatrix::zeros(n, n);
    for i in 0..n {
        g[(i, i)] = 2;
    }
    for i in 0..n.saturating_sub(2) {
        if i + 1 < n - 1 {
            g[(i, i + 1)] = -1;
            g[(i + 1, i)] = -1;
        }
    }
    if n >= 3 {
        g[(n - 3, n - 1)] = -1;
        g[(n - 1, n - 3)] = -1;
    }
    GramLattice::new(format!("D{n}"), g).expect("valid")
}

/// Positive definite `E8` (Bourbaki labelling of the Dynkin diagram).
pub fn e8() -> GramLattice {
    let edges = [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)];
    let mut g = IntMatrix::diagonal(&[2; 8]);
    for (i, j) in edges {
        g[(i - 1, j - 1)] = -1;
        g[(j - 1, i - 1)] = -1;
    }
    GramLattice::new("E8", g).expect("valid")
}

/// `Q_(a,d) = [[2a, -a], [-a, 2t]]` with `t = (a+d)/4`.
pub fn q_ad(a: i128, d: i128) -> Result<GramLattice> {
    if a <= 0 || d <= 0 || (a + d) % 4 != 0 {
        return Err(Error::BadParams(format!("Q_(a,d) needs a, d > 0 and a + d = 0 mod 4, got a={a}, d={d}")));
    }
    let t = (a + d) / 4;
    GramLattice::from_rows(format!("Q_({a},{d})"), &[vec![2 * a, -a], vec![-a, 2 * t]])
}

/// `Q(a,b,c)(-1) = [[-2a, b], [b, -2c]]`, negative definite.
pub fn q_abc_neg(a: i128, b: i128, c: i128) -> Result<GramLattice> {
    if a <= 0 || c <= 0 || 4 * a * c - b * b <= 0 {
        return Err(Error::BadParams(format!("Q({a},{b},{c}) needs a, c > 0 and 4ac - b^2 > 0")));
    }
    GramLattice::from_rows(format!("Q({a},{b},{c})(-1)"), &[vec![-2 * a, b], vec![b, -2 * c]])
}

fn sum(parts: &[GramLattice], name: &str) -> GramLattice {
    let refs: Vec<&GramLattice> = parts.iter().collect();
    GramLattice::direct_sum(&refs).with_name(name)
}

/// K3 lattice `U^3 + E8(-1)^2`.
pub fn k3() -> GramLattice {
    sum(&[hyperbolic().power(3), e8().rescale(-1).power(2)], "K3")
}

/// `U^3 + E8(-1)^2 + Z(-2(n-1))`, `n >= 2`.
pub fn k3n(n: i128) -> Result<GramLattice> {
    if n < 2 {
        return Err(Error::BadParams(format!("K3[n] lattice needs n >= 2, got {n}")));
    }
    Ok(sum(&[hyperbolic().power(3), e8().rescale(-1).power(2), rank_one(-2 * (n - 1))], &format!("K3n[{n}]")))
}

/// `U^3 + Z(-2(n+1))`, `n >= 1`.
pub fn kumn(n: i128) -> Result<GramLattice> {
    if n < 1 {
        return Err(Error::BadParams(format!("Kum_n lattice needs n >= 1, got {n}")));
    }
    Ok(sum(&[hyperbolic().power(3), rank_one(-2 * (n + 1))], &format!("Kumn[{n}]")))
}

/// `U^3 + E8(-1)^2 + A2(-1)`.
pub fn og10() -> GramLattice {
    sum(&[hyperbolic().power(3), e8().rescale(-1).power(2), a_n(2).rescale(-1)], "OG10")
}

/// `U^3 + A1(-1)^2`.
pub fn og6() -> GramLattice {
    sum(&[hyperbolic().power(3), a_n(1).rescale(-1).power(2)], "OG6")
}

/// Integer parameters for parametrised catalog entries.
#[derive(Clone, Copy, Debug, Default)]
pub struct Params {
    pub a: Option<i128>,
    pub b: Option<i128>,
    pub c: Option<i128>,
    pub d: Option<i128>,
    pub n: Option<i128>,
}

fn need(v: Option<i128>, what: &str, name: &str) -> Result<i128> {
    v.ok_or_else(|| Error::BadParams(format!("{name} needs parameter {what}")))
}

fn base(name: &str, p: &Params) -> Result<GramLattice> {
    let rank_suffix = |prefix: &str| -> Option<usize> { name.strip_prefix(prefix).and_then(|s| s.parse().ok()) };
    match name {
        "U" => return Ok(hyperbolic()),
        "E8" => return Ok(e8()),
        "Z" => return Ok(rank_one(1)),
        "K3" => return Ok(k3()),
        "OG10" => return Ok(og10()),
        "OG6" => return Ok(og6()),
        "K3n" => return k3n(need(p.n, "n", name)?),
        "Kumn" => return kumn(need(p.n, "n", name)?),
        "Q_ad" => return q_ad(need(p.a, "a", name)?, need(p.d, "d", name)?),
        "Q_abc" => return q_abc_neg(need(p.a, "a", name)?, need(p.b, "b", name)?, need(p.c, "c", name)?),
        _ => {}
    }
    if let Some(n) = rank_suffix("A").filter(|&n| n >= 1) {
        return Ok(a_n(n));
    }
    if let Some(n) = rank_suffix("D").filter(|&n| n >= 2) {
        return Ok(d_n(n));
    }
    Err(Error::NotFound(format!("unknown lattice name {name:?}")))
}

fn term(t: &str, p: &Params) -> Result<GramLattice> {
    let t = t.trim();
    let (body, reps) = match t.rsplit_once('^') {
        Some((b, r)) if !r.contains(')') => {
            let k: usize = r.trim().parse().map_err(|_| Error::Parse(format!("bad exponent in {t:?}")))?;
            (b.trim(), k)
        }
        _ => (t, 1),
    };
    let (name, scale) = match body.strip_suffix(')').and_then(|b| b.split_once('(')) {
        Some((n, k)) => {
            let k: i128 = k.trim().parse().map_err(|_| Error::Parse(format!("bad scale in {t:?}")))?;
            (n.trim(), Some(k))
        }
        None => (body, None),
    };
    let mut l = base(name, p)?;
    if let Some(k) = scale {
        if k == 0 {
            return Err(Error::BadParams("rescaling by 0".into()));
        }
        l = l.rescale(k);
    }
    Ok(if reps == 1 { l } else { l.power(reps) })
}

/// Looks up a catalog name or direct-sum expression.
pub fn lookup(expr: &str, p: &Params) -> Result<GramLattice> {
    let parts: Vec<GramLattice> = expr.split('+').map(|t| term(t, p)).collect::<Result<_>>()?;
    if parts.len() == 1 {
        return Ok(parts.into_iter().next().expect("one part"));
    }
    Ok(sum(&parts, expr))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Signature;

    #[test]
    fn e8_is_even_unimodular_positive() {
        let e = e8();
        assert_eq!(e.det(), 1);
        assert!(e.is_even());
        assert_eq!(e.signature().unwrap(), Signature { positive: 8, negative: 0 });
    }

    #[test]
    fn root_lattice_determinants() {
        for n in 1..8 {
            assert_eq!(a_n(n).det(), n as i128 + 1);
        }
        for n in 3..9 {
            assert_eq!(d_n(n).det(), 4);
        }
    }

    #[test]
    fn q_ad_example() {
        let q = q_ad(1, 3).unwrap();
        assert_eq!(q.gram().to_rows(), vec![vec![2, -1], vec![-1, 2]]);
        assert_eq!(q.det(), 3);
        assert!(q_ad(1, 2).is_err());
    }

    #[test]
    fn q_abc_example() {
        assert_eq!(q_abc_neg(1, 1, 1).unwrap().gram().to_rows(), vec![vec![-2, 1], vec![1, -2]]);
        assert!(q_abc_neg(1, 3, 1).is_err());
    }

    #[test]
    fn expression_parser() {
        let p = Params::default();
        let l = lookup("U^2+E8(-1)+A1(-1)^3", &p).unwrap();
        assert_eq!(l.rank(), 4 + 8 + 3);
        assert_eq!(l.disc(), 8);
        assert_eq!(lookup("Z(-4)", &p).unwrap().gram().to_rows(), vec![vec![-4]]);
        assert!(lookup("Q_ad", &p).is_err());
    }
}
