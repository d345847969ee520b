//! Property sweeps behind `lattice-irr verify`.
//!
//! Every property is a list of independent cells checked by a pure
//! function; cells run on a local thread pool and results are merged in
//! cell order, so the first counterexample is deterministic.

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{count_sqrt1, gcd, gcd_all, rho};
use crate::catalog;
use crate::construct::{embed_qad_a1, embed_qad_e8, embed_split, ConstructedEmbedding};
use crate::discform::{isometry_cap, og10_split_aut_bound, og10_split_aut_count, FiniteQuadraticForm};
use crate::embedding::{is_isometry, reflection};
use crate::error::{Error, Result};
use crate::lattice::GramLattice;
use crate::matrix::Rat;
use num_traits::Signed;
use crate::moduli::{
    abelian_bound_report, abelian_quadratic_report, bound_report, components, k3_bound_report, lambda_sharp_variants,
    monodromy_case, ogrady_subgroup_count, wedge_lambda_d, ComponentData, Family, K3Series, ModuliSpec, MonodromyCase,
};
use crate::squares::coprime_four_squares;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Embeddings,
    Discforms,
    Counts,
    Moduli,
    All,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "embeddings" => Ok(Suite::Embeddings),
            "discforms" => Ok(Suite::Discforms),
            "counts" => Ok(Suite::Counts),
            "moduli" => Ok(Suite::Moduli),
            "all" => Ok(Suite::All),
            _ => Err(Error::Parse(format!("unknown suite {s}"))),
        }
    }
}

/// Sweep ranges; the defaults are the acceptance ranges.
#[derive(Clone, Debug)]
pub struct Ranges {
    /// Bound on `a, d` for the rank-two lemmas.
    pub max: i128,
    /// Bound for the counting identities.
    pub r_max: i128,
    pub n_max: i128,
    pub d_max: i128,
    /// Bound on `|disc|` for isometry counts.
    pub disc_max: i128,
    pub threads: usize,
}

impl Default for Ranges {
    fn default() -> Self {
        Ranges { max: 200, r_max: 10_000, n_max: 30, d_max: 100, disc_max: 500, threads: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyResult {
    pub name: String,
    pub passed: bool,
    pub checked: u64,
    /// Cells outside a lemma's hypotheses or above the enumeration cap.
    pub skipped: u64,
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub passed: bool,
    pub properties: Vec<PropertyResult>,
}

/// Outcome of a single cell.
pub enum Cell {
    Pass,
    Skip,
    Fail(String),
}

fn cell(ok: bool, what: impl FnOnce() -> String) -> Cell {
    if ok {
        Cell::Pass
    } else {
        Cell::Fail(what())
    }
}

/// Runs `check` on every cell and keeps the first failure in cell order.
pub fn run_cells<T, F>(name: &str, cells: &[T], threads: usize, check: F) -> PropertyResult
where
    T: Sync + std::fmt::Debug,
    F: Fn(&T) -> Cell + Sync,
{
    let eval = |x: &T| match check(x) {
        Cell::Fail(msg) => Cell::Fail(format!("{x:?}: {msg}")),
        other => other,
    };
    let outcomes: Vec<Cell> = if threads > 1 {
        match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(|| cells.par_iter().map(eval).collect()),
            Err(_) => cells.iter().map(eval).collect(),
        }
    } else {
        cells.iter().map(eval).collect()
    };
    let mut r = PropertyResult { name: name.into(), passed: true, checked: 0, skipped: 0, counterexample: None };
    for o in outcomes {
        match o {
            Cell::Pass => r.checked += 1,
            Cell::Skip => r.skipped += 1,
            Cell::Fail(msg) => {
                r.checked += 1;
                if r.passed {
                    r.passed = false;
                    r.counterexample = Some(msg);
                }
            }
        }
    }
    r
}

fn from_result(r: Result<Cell>) -> Cell {
    match r {
        Ok(c) => c,
        Err(e) => Cell::Fail(e.to_string()),
    }
}

// ---------------------------------------------------------------- embeddings

/// Structural checks shared by all rank-two lemmas: Gram equality, the
/// declared saturation index, and an involution extending `sigma_z1`.
pub fn check_constructed(ce: &ConstructedEmbedding, expected_index: i128) -> Result<Cell> {
    let emb = &ce.embedding;
    if !emb.verify() {
        return Ok(Cell::Fail("Gram check failed".into()));
    }
    let idx = emb.saturation_index()?;
    if idx != expected_index {
        return Ok(Cell::Fail(format!("saturation index {idx}, expected {expected_index}")));
    }
    let Some(sigma) = &ce.involution else { return Ok(Cell::Fail("no involution".into())) };
    let squared = sigma.mul(sigma)?;
    let id = crate::matrix::IntMatrix::identity(sigma.rows());
    let ok = is_isometry(emb.target(), sigma) && squared == id && emb.verify_extension(sigma, &ce.source_reflection()?);
    Ok(cell(ok, || "involution check failed".into()))
}

/// The lemma applicable to `Q_(a,d)`: the `E8` lemma when `4` does not
/// divide `a`, otherwise the `A1^10` lemma with index two.
pub fn qad_cell(a: i128, d: i128) -> Cell {
    from_result((|| {
        if a % 4 == 0 {
            check_constructed(&embed_qad_a1(a, d)?, 2)
        } else {
            check_constructed(&embed_qad_e8(a, d)?, 1)
        }
    })())
}

pub fn qad_pairs(max: i128) -> Vec<(i128, i128)> {
    (1..=max).flat_map(|a| (1..=max).filter(move |d| (a + d) % 4 == 0).map(move |d| (a, d))).collect()
}

fn split_cell(a: i128, d: i128) -> Cell {
    from_result((|| {
        let big = check_constructed(&embed_split(a, d, false)?, 1)?;
        if !matches!(big, Cell::Pass) || a % 8 == 0 || d % 8 == 0 {
            return Ok(big);
        }
        check_constructed(&embed_split(a, d, true)?, 1)
    })())
}

pub fn embeddings_suite(r: &Ranges) -> Vec<PropertyResult> {
    let pairs = qad_pairs(r.max);
    let all: Vec<(i128, i128)> = (1..=r.max).flat_map(|a| (1..=r.max).map(move |d| (a, d))).collect();
    vec![
        run_cells("qad_lemmas", &pairs, r.threads, |&(a, d)| qad_cell(a, d)),
        run_cells("split_lemmas", &all, r.threads, |&(a, d)| split_cell(a, d)),
    ]
}

// ---------------------------------------------------------------- counts

pub fn brute_sqrt1(r: i128) -> u64 {
    (0..r).filter(|x| (x * x - 1).rem_euclid(r) == 0).count() as u64
}

/// `n` is a sum of four squares with `gcd = 1`, by exhaustive search.
pub fn brute_coprime_four_squares(n: i128) -> bool {
    let s = |x: i128| x * x;
    let mut a = 0;
    while 4 * s(a) <= n {
        let mut b = a;
        while s(a) + 3 * s(b) <= n {
            let mut c = b;
            while s(a) + s(b) + 2 * s(c) <= n {
                let rest = n - s(a) - s(b) - s(c);
                if let Some(dd) = crate::arith::exact_sqrt(rest) {
                    if dd >= c && gcd_all(&[a, b, c, dd]) == 1 {
                        return true;
                    }
                }
                c += 1;
            }
            b += 1;
        }
        a += 1;
    }
    false
}

/// Number of subgroups of `(Z/N)^4` isomorphic to `(Z/N)^2`, counted as
/// injective maps `(Z/N)^2 -> (Z/N)^4` modulo injective maps
/// `(Z/N)^2 -> (Z/N)^2`. Injective maps are counted as (elements of order
/// `N`) times (completions of the fixed element `e1`), using that
/// automorphisms act transitively on elements of order `N`.
pub fn brute_subgroup_count(big_n: i128) -> i128 {
    fn vectors(n: i128, k: usize) -> Vec<Vec<i128>> {
        let mut out = vec![vec![]];
        for _ in 0..k {
            out = out.into_iter().flat_map(|v| (0..n).map(move |x| [v.clone(), vec![x]].concat())).collect();
        }
        out
    }
    let order = |v: &[i128]| (1..=big_n).find(|&j| v.iter().all(|x| (j * x) % big_n == 0)).unwrap_or(big_n);
    let injective = |k: usize| -> i128 {
        let vs = vectors(big_n, k);
        let max_order = vs.iter().filter(|v| order(v) == big_n).count() as i128;
        let completions = vs
            .iter()
            .filter(|y| {
                (1..big_n).all(|j| {
                    let jy: Vec<i128> = y.iter().map(|x| (j * x) % big_n).collect();
                    // j y lies in <e1> iff it vanishes off the first coordinate
                    jy[1..].iter().any(|&x| x != 0)
                })
            })
            .count() as i128;
        max_order * completions
    };
    injective(4) / injective(2)
}

fn prime_powers(max: i128) -> Vec<(i128, u32)> {
    let mut out = Vec::new();
    for p in 2..=max {
        if crate::arith::factorize(p) != vec![(p, 1)] {
            continue;
        }
        let mut q = p;
        let mut r = 1;
        while q <= max {
            out.push((p, r));
            q *= p;
            r += 1;
        }
    }
    out
}

pub fn counts_suite(r: &Ranges) -> Vec<PropertyResult> {
    let rs: Vec<i128> = (1..=r.r_max).collect();
    vec![
        run_cells("sqrt1_crt", &rs, r.threads, |&n| {
            let c = count_sqrt1(n);
            cell(c == brute_sqrt1(n) && c as i128 <= 1 << (rho(n) + 1), || format!("formula gives {c}"))
        }),
        run_cells("coprime_four_squares_iff", &rs, r.threads, |&n| {
            let found = coprime_four_squares(n).is_ok();
            cell(found == (n % 8 != 0) && found == brute_coprime_four_squares(n), || format!("found={found}"))
        }),
        run_cells("ogrady_subgroup_count", &prime_powers(16), r.threads, |&(p, e)| {
            from_result((|| {
                let f = ogrady_subgroup_count(p, e)?;
                let b = brute_subgroup_count(p.pow(e));
                Ok(cell(f == b, || format!("formula {f}, brute force {b}")))
            })())
        }),
    ]
}

// ---------------------------------------------------------------- discforms

/// A lattice with a label, for the isometry-count sweep.
#[derive(Clone)]
pub struct Labeled {
    pub label: String,
    pub lattice: GramLattice,
    /// `(gamma, 2d/gamma, 2m/gamma)` for `K3^[n]`/`Kum_n` components.
    pub params: Option<(i128, i128, i128)>,
}

impl std::fmt::Debug for Labeled {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.label)
    }
}

/// Catalog lattices and `Lambda_h` of all `K3^[n]`, `Kum_n`, OG10 and OG6
/// components with `|disc| <= disc_max`.
pub fn count_lattices(disc_max: i128) -> Result<Vec<Labeled>> {
    let mut out = Vec::new();
    let mut push = |l: GramLattice, params| {
        if l.disc().abs() <= disc_max {
            out.push(Labeled { label: l.name().to_string(), lattice: l, params });
        }
    };
    push(catalog::hyperbolic(), None);
    push(catalog::e8(), None);
    push(catalog::og10(), None);
    push(catalog::og6(), None);
    for k in 1..=8 {
        push(catalog::a_n(k), None);
    }
    for k in 3..=8 {
        push(catalog::d_n(k), None);
    }
    for k in 2..=5 {
        push(catalog::a_n(1).power(k), None);
    }
    push(catalog::k3(), None);
    for n in 1..=disc_max / 2 + 1 {
        if n >= 2 {
            push(catalog::k3n(n)?, None);
        }
        push(catalog::kumn(n)?, None);
    }
    for a in 1..=disc_max {
        for d in 1..=disc_max / a {
            if (a + d) % 4 == 0 {
                push(catalog::q_ad(a, d)?, None);
            }
        }
    }
    let mut specs = Vec::new();
    for n in 1..=disc_max / 2 + 1 {
        for d in 1..=disc_max {
            for gamma in 1..=2 * (n + 1) {
                // |disc Lambda_h| = 4 d m / gamma^2 with m = n -+ 1
                if 4 * d * (n - 1) <= disc_max * gamma * gamma && (n == 1 || (2 * (n - 1)) % gamma == 0) {
                    specs.push(ModuliSpec::k3n(n, d, gamma)?);
                }
                if 4 * d * (n + 1) <= disc_max * gamma * gamma && (2 * (n + 1)) % gamma == 0 {
                    specs.push(ModuliSpec::kumn(n, d, gamma)?);
                }
            }
        }
    }
    for d in 1..=disc_max {
        for gamma in [1, 3] {
            specs.push(ModuliSpec::og10(d, gamma)?);
        }
        for gamma in [1, 2] {
            specs.push(ModuliSpec::og6(d, gamma)?);
        }
    }
    for s in specs {
        for c in components(&s)? {
            let params = matches!(s.family, Family::K3n | Family::Kumn)
                .then(|| (s.gamma, 2 * s.d / s.gamma, 2 * s.m() / s.gamma));
            let label = format!("{} {} n={} d={} gamma={}", c.lambda_h.name(), s.family, s.n, s.d, s.gamma);
            if c.lambda_h.disc().abs() <= disc_max && c.lambda_h.disc() != 0 {
                out.push(Labeled { label: format!("{label} [{}]", c.label()), lattice: c.lambda_h, params });
            }
        }
    }
    Ok(out)
}

fn exact_count(l: &GramLattice) -> Result<Option<(u64, i128, usize)>> {
    let f = FiniteQuadraticForm::from_lattice(l)?;
    Ok(f.enumerate_isometries(isometry_cap()).exact.map(|e| (e, f.order(), f.ell())))
}

/// `2^(rho(2m/gamma)+1)` from the coprime-parameter case, applied where
/// `gamma`, `2d/gamma`, `2m/gamma` are pairwise coprime.
pub fn ghs_subbound(params: (i128, i128, i128)) -> Option<i128> {
    let (g, x, y) = params;
    (gcd(g, x) == 1 && gcd(g, y) == 1 && gcd(x, y) == 1 && y > 0).then(|| 1i128 << (rho(y) + 1))
}

pub fn discforms_suite(r: &Ranges) -> Result<Vec<PropertyResult>> {
    let lattices = count_lattices(r.disc_max)?;
    let og10_ds: Vec<i128> = (1..=r.disc_max / 6).filter(|d| d % 3 != 0).collect();
    Ok(vec![
        run_cells("aut_le_disc_pow_ell", &lattices, r.threads, |l| {
            from_result((|| {
                Ok(match exact_count(&l.lattice)? {
                    None => Cell::Skip,
                    Some((e, order, ell)) => {
                        cell(e as i128 <= order.pow(ell as u32), || format!("|O(D)| = {e} > {order}^{ell}"))
                    }
                })
            })())
        }),
        run_cells("aut_coprime_subbound", &lattices, r.threads, |l| {
            from_result((|| {
                let Some(bound) = l.params.and_then(ghs_subbound) else { return Ok(Cell::Skip) };
                Ok(match exact_count(&l.lattice)? {
                    None => Cell::Skip,
                    Some((e, ..)) => cell(e as i128 <= bound, || format!("|O(D)| = {e} > {bound}")),
                })
            })())
        }),
        run_cells("og10_split_aut", &og10_ds, r.threads, |&d| {
            from_result((|| {
                let c = og10_split_aut_count(d)?;
                let b = og10_split_aut_bound(d);
                Ok(cell(c as i128 <= b, || format!("count {c} > {b}")))
            })())
        }),
    ])
}

// ---------------------------------------------------------------- moduli

pub fn moduli_specs(n_max: i128, d_max: i128) -> Result<Vec<ModuliSpec>> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        for d in 1..=d_max {
            for gamma in 1..=2 * (n + 1) {
                out.push(ModuliSpec::k3n(n, d, gamma)?);
                out.push(ModuliSpec::kumn(n, d, gamma)?);
            }
        }
    }
    for d in 1..=d_max {
        for gamma in [1, 3] {
            out.push(ModuliSpec::og10(d, gamma)?);
        }
        for gamma in [1, 2] {
            out.push(ModuliSpec::og6(d, gamma)?);
        }
    }
    Ok(out)
}

/// `(h, h) = 2d`, `div(h) = gamma`, and
/// `|disc Lambda_h| gamma^2 = 2d |disc Lambda|`, recomputed from `h`.
pub fn disc_identity(c: &ComponentData) -> Cell {
    let amb = &c.ambient;
    let (d, gamma) = (c.spec.d, c.spec.gamma);
    let hg = amb.gram().mul_vec(&c.h);
    let div = gcd_all(&hg);
    let lhs = c.lambda_h.disc().abs() * gamma * gamma;
    let rhs = 2 * d * amb.disc().abs();
    cell(amb.norm(&c.h) == 2 * d && div == gamma && lhs == rhs, || {
        format!("(h,h)={}, div={div}, |disc|*gamma^2={lhs}, 2d|disc|={rhs}", amb.norm(&c.h))
    })
}

fn disc_cell(s: &ModuliSpec) -> Cell {
    match components(s) {
        Ok(cs) if cs.is_empty() => Cell::Skip,
        Ok(cs) => cs.iter().map(disc_identity).find(|x| matches!(x, Cell::Fail(_))).unwrap_or(Cell::Pass),
        Err(e) => Cell::Fail(e.to_string()),
    }
}

/// `det(T) 2^(m'-m) = |disc(Lambda_h^perp)|` and
/// `|det T| <= |disc Lambda_#| |disc Lambda_h,s|` for every `Lambda_#`.
pub fn det_t_cell(c: &ComponentData) -> Cell {
    from_result((|| {
        for s in lambda_sharp_variants(c)? {
            let comp = s.embedding.complement()?;
            let r = comp.lattice.rank() as u32;
            let det_t = comp.det_t.abs();
            let perp = comp.lattice.disc().abs();
            if det_t * Rat::from_integer(1 << r) != Rat::from_integer(perp) {
                return Ok(Cell::Fail(format!("{}: det T = {det_t}, |disc perp| = {perp}", s.case)));
            }
            let sat = s.embedding.saturation()?.lattice.disc().abs();
            let cap = s.lambda_sharp.disc().abs() * sat;
            if det_t > Rat::from_integer(cap) {
                return Ok(Cell::Fail(format!("{}: det T = {det_t} > {cap}", s.case)));
            }
        }
        Ok(Cell::Pass)
    })())
}

fn spec_cells<F: Fn(&ComponentData) -> Cell>(s: &ModuliSpec, f: F) -> Cell {
    match components(s) {
        Ok(cs) if cs.is_empty() => Cell::Skip,
        Ok(cs) => cs.iter().map(f).find(|x| matches!(x, Cell::Fail(_))).unwrap_or(Cell::Pass),
        Err(e) => Cell::Fail(e.to_string()),
    }
}

/// The non-stable monodromy reflection is integral on `Lambda_h` and its
/// prescribed extension is an integral isometry of `Lambda_#`.
pub fn reflection_cell(c: &ComponentData) -> Cell {
    from_result((|| {
        let MonodromyCase::StablePlusReflection { vector } = monodromy_case(c).0 else { return Ok(Cell::Skip) };
        let sigma_h = reflection(&c.lambda_h, &vector)?;
        for s in lambda_sharp_variants(c)? {
            let Some(ext) = &s.extension else { return Ok(Cell::Fail(format!("{}: no extension", s.case))) };
            let image = s.embedding.matrix().mul_vec(&vector);
            let direct = reflection(&s.lambda_sharp, &image)?;
            let ok = ext.sigma_h == sigma_h
                && is_isometry(&s.lambda_sharp, &ext.sigma_sharp)
                && s.embedding.verify_extension(&ext.sigma_sharp, &sigma_h)
                && s.embedding.verify_extension(&direct, &sigma_h);
            if !ok {
                return Ok(Cell::Fail(format!("{}: extension check failed", s.case)));
            }
        }
        Ok(Cell::Pass)
    })())
}

/// A golden exponent case: the reports for a spec must carry exactly these
/// final exponents, in order.
#[derive(Clone, Debug)]
pub struct Golden {
    pub label: &'static str,
    pub query: GoldenQuery,
    pub expected: &'static [&'static str],
}

#[derive(Clone, Copy, Debug)]
pub enum GoldenQuery {
    Moduli(Family, i128, i128, i128),
    K3(i128, K3Series),
    Abelian(i128),
    AbelianQuadratic(i128, i128, i128, i128),
}

impl GoldenQuery {
    /// Final exponents as strings, plus `d_exp`/`k_exp` for composed reports.
    pub fn exponents(&self) -> Result<Vec<String>> {
        let show = |r: &crate::moduli::BoundReport| match (&r.d_exp, &r.k_exp) {
            (Some(de), Some(ke)) if r.k != Some(1) => format!("{} (d: {de}, k: {ke})", r.final_exponent()),
            _ => r.final_exponent().to_string(),
        };
        Ok(match *self {
            GoldenQuery::Moduli(family, n, d, gamma) => {
                bound_report(&ModuliSpec::new(family, n, d, gamma)?)?.iter().map(show).collect()
            }
            GoldenQuery::K3(d, s) => vec![show(&k3_bound_report(d, s)?)],
            GoldenQuery::Abelian(d) => vec![show(&abelian_bound_report(d)?)],
            GoldenQuery::AbelianQuadratic(d, a, b, c) => vec![show(&abelian_quadratic_report(d, a, b, c)?)],
        })
    }
}

macro_rules! golden {
    ($label:expr, $q:expr, [$($e:expr),*]) => {
        Golden { label: $label, query: $q, expected: &[$($e),*] }
    };
}

/// One representative per theorem case.
pub fn golden_table() -> Vec<Golden> {
    use Family::{K3n, Kumn, Og10, Og6};
    use GoldenQuery::{Abelian, AbelianQuadratic, Moduli};
    vec![
        golden!("K3[n] general", Moduli(K3n, 5, 4, 2), ["19"]),
        golden!("K3[n] n=1", Moduli(K3n, 1, 5, 1), ["14+ε"]),
        golden!("K3[n] n=2, gamma=2", Moduli(K3n, 2, 3, 2), ["16", "14+ε"]),
        golden!("K3[n] gamma>=3", Moduli(K3n, 4, 6, 3), ["16", "14+ε"]),
        golden!("K3[n] n=2, gamma=1", Moduli(K3n, 2, 5, 1), ["14+ε"]),
        golden!("K3[n] n>=3, gamma=1", Moduli(K3n, 3, 5, 1), ["15+ε", "14+ε"]),
        golden!("K3[n] n>=3, gamma=2", Moduli(K3n, 3, 2, 2), ["16"]),
        golden!("Kum_n general", Moduli(Kumn, 3, 4, 2), ["11"]),
        golden!("Kum_n gamma>=3", Moduli(Kumn, 2, 6, 3), ["8", "6+ε", "8", "6+ε"]),
        golden!("Kum_n gamma=1", Moduli(Kumn, 2, 1, 1), ["7+ε", "6+ε"]),
        golden!("Kum_n gamma=2", Moduli(Kumn, 1, 2, 2), ["8"]),
        golden!("OG10 gamma=3", Moduli(Og10, 0, 6, 3), ["14+ε"]),
        golden!("OG10 gamma=1", Moduli(Og10, 0, 5, 1), ["27/2+ε", "13+ε"]),
        golden!("OG6 w=v1", Moduli(Og6, 0, 7, 2), ["6+ε"]),
        golden!("OG6 w=v1+v2", Moduli(Og6, 0, 10, 2), ["11/2+ε"]),
        golden!("OG6 gamma=1", Moduli(Og6, 0, 5, 1), ["11/2+ε", "5+ε"]),
        golden!("abelian general", Abelian(12), ["8+ε (d: 2+ε, k: 6+ε)"]),
        golden!("abelian square-free", Abelian(5), ["4+ε"]),
        golden!("abelian perfect square", Abelian(9), ["2+ε"]),
        golden!("abelian quadratic series", AbelianQuadratic(7, 1, 1, 2), ["2+ε"]),
        golden!("K3 E8", GoldenQuery::K3(7, K3Series::E8), ["14+ε"]),
        golden!("K3 A1^4", GoldenQuery::K3(7, K3Series::A1x4), ["12+ε"]),
        golden!("K3 A1^3", GoldenQuery::K3(6, K3Series::A1x3), ["23/2+ε"]),
        golden!("K3 rank two", GoldenQuery::K3(7, K3Series::A2), ["10+ε"]),
    ]
}

pub fn golden_cell(g: &Golden) -> Cell {
    match g.query.exponents() {
        Ok(got) => cell(got == g.expected, || format!("{}: got {got:?}, expected {:?}", g.label, g.expected)),
        Err(e) => Cell::Fail(format!("{}: {e}", g.label)),
    }
}

/// `|disc Lambda_d| = 2d` and the explicit basis splits off `U + U`.
pub fn wedge_cell(d: i128) -> Cell {
    from_result((|| {
        let w = wedge_lambda_d(d)?;
        Ok(cell(w.split_ok && w.lambda_d.disc().abs() == 2 * d && w.kernel_disc == 2 * d, || {
            format!("split_ok={}, disc={}, kernel disc={}", w.split_ok, w.lambda_d.disc(), w.kernel_disc)
        }))
    })())
}

/// OG6 and OG10 components carrying a `kappa` or `v` reflection.
pub fn reflection_specs(limit: i128) -> Result<Vec<ModuliSpec>> {
    let mut out = Vec::new();
    for d in 1..=limit {
        out.push(ModuliSpec::og10(d, 1)?);
        out.push(ModuliSpec::og6(d, 1)?);
    }
    // w = v1 + v2 needs d = 4t - 2
    for t in 1..=limit {
        out.push(ModuliSpec::og6(4 * t - 2, 2)?);
    }
    Ok(out)
}

pub fn moduli_suite(r: &Ranges) -> Result<Vec<PropertyResult>> {
    let specs = moduli_specs(r.n_max, r.d_max)?;
    // Lambda_# constructions include E8 searches; keep the det(T) sweep smaller.
    let small = moduli_specs(r.n_max.min(8), r.d_max.min(30))?;
    let ds: Vec<i128> = (1..=r.d_max).collect();
    let refl = reflection_specs(r.d_max.min(50))?;
    Ok(vec![
        run_cells("disc_identity", &specs, r.threads, disc_cell),
        run_cells("det_t_identity", &small, r.threads, |s| spec_cells(s, det_t_cell)),
        run_cells("exponent_goldens", &golden_table(), r.threads, golden_cell),
        run_cells("wedge_split", &ds, r.threads, |&d| wedge_cell(d)),
        run_cells("reflection_extension", &refl, r.threads, |s| spec_cells(s, reflection_cell)),
    ])
}

pub fn run_suite(suite: Suite, r: &Ranges) -> Result<SuiteReport> {
    let mut properties = Vec::new();
    if matches!(suite, Suite::Embeddings | Suite::All) {
        properties.extend(embeddings_suite(r));
    }
    if matches!(suite, Suite::Discforms | Suite::All) {
        properties.extend(discforms_suite(r)?);
    }
    if matches!(suite, Suite::Counts | Suite::All) {
        properties.extend(counts_suite(r));
    }
    if matches!(suite, Suite::Moduli | Suite::All) {
        properties.extend(moduli_suite(r)?);
    }
    Ok(SuiteReport { passed: properties.iter().all(|p| p.passed), properties })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subgroup_brute_force_small() {
        assert_eq!(brute_subgroup_count(2), 35);
        assert_eq!(brute_subgroup_count(3), 130);
    }

    #[test]
    fn coprime_brute_force() {
        assert!(brute_coprime_four_squares(4));
        assert!(!brute_coprime_four_squares(8));
        assert!(!brute_coprime_four_squares(16));
    }
}
