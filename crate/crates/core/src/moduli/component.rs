//! Normal forms of the polarisation and the lattice `Lambda_h`.

use serde::Serialize;

use super::abelian::wedge_lattice;
use super::{Family, ModuliSpec};
use crate::arith::{gcd, gcd_all};
use crate::catalog;
use crate::error::{Error, Result};
use crate::lattice::GramLattice;
use crate::matrix::IntMatrix;
use crate::normal_form::integer_kernel;

/// Which `w` appears in the OG6 normal form `h = 2(e + t f) - w`. The
/// `w = v2` form is isometric to `w = v1` and is not listed separately.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OgSixW {
    V1,
    V1PlusV2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum NormalForm {
    /// `h = e + d f`.
    Split,
    /// `h = gamma (e + t f) - a delta` (K3[n]) or `- a eta` (Kum_n).
    Twisted { a: i128, t: i128 },
    /// OG10, `h = 3e + 3t f + delta1 + 2 delta2`.
    NonSplit { t: i128 },
    /// OG6, `h = 2(e + t f) - w`.
    Og6 { w: OgSixW, t: i128 },
    /// Abelian surfaces, `h = w_d` in the wedge lattice.
    Wedge,
}

impl NormalForm {
    pub fn label(&self) -> String {
        match self {
            NormalForm::Split => "split".into(),
            NormalForm::Twisted { a, t } => format!("a={a},t={t}"),
            NormalForm::NonSplit { t } => format!("t={t}"),
            NormalForm::Og6 { w: OgSixW::V1, t } => format!("w=v1,t={t}"),
            NormalForm::Og6 { w: OgSixW::V1PlusV2, t } => format!("w=v1+v2,t={t}"),
            NormalForm::Wedge => "w_d".into(),
        }
    }
}

/// One irreducible component, in an explicit normal form.
#[derive(Clone, Debug)]
pub struct ComponentData {
    pub spec: ModuliSpec,
    pub normal_form: NormalForm,
    pub ambient: GramLattice,
    pub h: Vec<i128>,
    /// Basis of `Lambda_h` in ambient coordinates: the unimodular part first,
    /// then the `Q_h(-1)` block.
    pub basis: IntMatrix,
    pub lambda_h: GramLattice,
    /// Unimodular summand `U^2 + ...` of `lambda_h`.
    pub fixed: GramLattice,
    /// `Q_h(-1)`, the trailing block of `lambda_h`.
    pub q_block: GramLattice,
    pub notes: Vec<String>,
}

#[derive(Serialize)]
struct ComponentJson<'a> {
    family: Family,
    n: Option<i128>,
    d: i128,
    gamma: i128,
    normal_form: &'a NormalForm,
    ambient: &'a GramLattice,
    h: &'a [i128],
    lambda_h: &'a GramLattice,
    q_h: GramLattice,
    notes: &'a [String],
}

impl ComponentData {
    /// `Q_h`, positive definite.
    pub fn q_h(&self) -> GramLattice {
        self.q_block.rescale(-1).with_name("Q_h")
    }

    pub fn label(&self) -> String {
        self.normal_form.label()
    }

    /// Positive generator of `(h, Lambda)`.
    pub fn divisibility(&self) -> i128 {
        gcd_all(&self.ambient.gram().mul_vec(&self.h))
    }

    /// `2d |disc Lambda| / gamma^2`.
    pub fn expected_disc(&self) -> i128 {
        let g = self.spec.gamma;
        2 * self.spec.d * self.ambient.disc() / (g * g)
    }

    pub fn fixed_rank(&self) -> usize {
        self.fixed.rank()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(ComponentJson {
            family: self.spec.family,
            n: self.spec.family.uses_n().then_some(self.spec.n),
            d: self.spec.d,
            gamma: self.spec.gamma,
            normal_form: &self.normal_form,
            ambient: &self.ambient,
            h: &self.h,
            lambda_h: &self.lambda_h,
            q_h: self.q_h(),
            notes: &self.notes,
        })
        .expect("serialisable")
    }
}

fn sparse(len: usize, entries: &[(usize, i128)]) -> Vec<i128> {
    let mut v = vec![0; len];
    for &(i, x) in entries {
        v[i] += x;
    }
    v
}

fn units(len: usize, range: std::ops::Range<usize>) -> Vec<Vec<i128>> {
    range.map(|i| sparse(len, &[(i, 1)])).collect()
}

struct Draft {
    normal_form: NormalForm,
    ambient: GramLattice,
    h: Vec<i128>,
    fixed: Vec<Vec<i128>>,
    fixed_name: &'static str,
    q: Vec<Vec<i128>>,
    expected_q: Vec<Vec<i128>>,
    notes: Vec<String>,
}

fn fail(spec: &ModuliSpec, what: &str) -> Error {
    Error::ConstructionFailed(format!("{} n={} d={} gamma={}: {what}", spec.family, spec.n, spec.d, spec.gamma))
}

/// Checks every invariant of the draft and assembles the component.
fn finish(spec: ModuliSpec, dr: Draft) -> Result<ComponentData> {
    let g = dr.ambient.gram();
    if dr.ambient.norm(&dr.h) != 2 * spec.d {
        return Err(fail(&spec, "(h, h) != 2d"));
    }
    if gcd_all(&g.mul_vec(&dr.h)) != spec.gamma {
        return Err(fail(&spec, "divisibility of h differs from gamma"));
    }
    let mut cols = dr.fixed.clone();
    cols.extend(dr.q.iter().cloned());
    let basis = IntMatrix::from_cols(&cols)?;
    let gram = basis.congruence(g)?;
    let fixed = GramLattice::new(dr.fixed_name, IntMatrix::from_cols(&dr.fixed)?.congruence(g)?)?;
    if !fixed.is_unimodular() {
        return Err(fail(&spec, "fixed part is not unimodular"));
    }
    let q_block = GramLattice::from_rows("Q_h(-1)", &dr.expected_q)?;
    let expected = GramLattice::direct_sum(&[&fixed, &q_block]);
    if &gram != expected.gram() {
        return Err(fail(&spec, "Gram of the explicit basis differs from U^k + fixed + Q_h(-1)"));
    }
    let hg: Vec<i128> = g.mul_vec(&dr.h);
    if (0..basis.cols()).any(|j| basis.col(j).iter().zip(&hg).map(|(x, y)| x * y).sum::<i128>() != 0) {
        return Err(fail(&spec, "basis is not orthogonal to h"));
    }
    let lambda_h = GramLattice::new("Lambda_h", gram)?;
    let gm = spec.gamma * spec.gamma;
    if lambda_h.disc() * gm != 2 * spec.d * dr.ambient.disc() {
        return Err(fail(&spec, "|disc Lambda_h| != 2d |disc Lambda| / gamma^2"));
    }
    // the explicit basis spans h^perp: same rank and same discriminant
    let row = IntMatrix::from_rows(&[hg])?;
    let kernel = integer_kernel(&row);
    if kernel.cols() != basis.cols() || kernel.congruence(g)?.det().abs() != lambda_h.disc() {
        return Err(fail(&spec, "explicit basis does not span h^perp"));
    }
    Ok(ComponentData {
        spec,
        normal_form: dr.normal_form,
        ambient: dr.ambient,
        h: dr.h,
        basis,
        lambda_h,
        fixed,
        q_block,
        notes: dr.notes,
    })
}

/// All components of the moduli space, one per normal form. Empty iff the
/// moduli space is empty.
pub fn components(spec: &ModuliSpec) -> Result<Vec<ComponentData>> {
    let drafts = if spec.is_k3() {
        k3_drafts(spec)
    } else {
        match spec.family {
            Family::K3n | Family::Kumn => twisted_drafts(spec)?,
            Family::Og10 => og10_drafts(spec),
            Family::Og6 => og6_drafts(spec),
            Family::AbelianSurface => abelian_drafts(spec)?,
            Family::K3 => unreachable!("handled above"),
        }
    };
    drafts.into_iter().map(|d| finish(*spec, d)).collect()
}

fn k3_drafts(spec: &ModuliSpec) -> Vec<Draft> {
    if spec.gamma != 1 {
        return vec![];
    }
    let ambient = catalog::k3();
    let len = ambient.rank();
    let d = spec.d;
    vec![Draft {
        normal_form: NormalForm::Split,
        h: sparse(len, &[(0, 1), (1, d)]),
        fixed: units(len, 2..len),
        fixed_name: "U^2+E8(-1)^2",
        q: vec![sparse(len, &[(0, 1), (1, -d)])],
        expected_q: vec![vec![-2 * d]],
        ambient,
        notes: vec![],
    }]
}

/// K3[n] (`m = n - 1`) and Kum_n (`m = n + 1`): `h = gamma (e + t f) - a x`
/// with `(x, x) = -2m`, `d = gamma^2 t - m a^2` and `gcd(a, gamma) = 1`.
fn twisted_drafts(spec: &ModuliSpec) -> Result<Vec<Draft>> {
    let (n, d, gamma, m) = (spec.n, spec.d, spec.gamma, spec.m());
    if (2 * m) % gamma != 0 {
        return Ok(vec![]);
    }
    let (ambient, fixed_name, a_max) = match spec.family {
        // a and gamma - a lie in one orbit since Mon^2 contains -1 on D
        Family::K3n => (catalog::k3n(n)?, "U^2+E8(-1)^2", gamma / 2),
        _ => (catalog::kumn(n)?, "U^2", gamma - 1),
    };
    let len = ambient.rank();
    let x = len - 1;
    let mut out = Vec::new();
    for a in 0..=a_max {
        if gcd(a, gamma) != 1 {
            continue;
        }
        let num = d + m * a * a;
        if num % (gamma * gamma) != 0 {
            continue;
        }
        let t = num / (gamma * gamma);
        let c = 2 * a * m / gamma;
        let mut notes = Vec::new();
        if spec.family == Family::K3n && gamma > 2 && 2 * a != gamma {
            notes.push(format!("a={a} also represents a={}", gamma - a));
        }
        out.push(Draft {
            normal_form: NormalForm::Twisted { a, t },
            h: sparse(len, &[(0, gamma), (1, gamma * t), (x, -a)]),
            fixed: units(len, 2..x),
            fixed_name,
            q: vec![sparse(len, &[(1, c), (x, -1)]), sparse(len, &[(0, 1), (1, -t)])],
            expected_q: vec![vec![-2 * m, c], vec![c, -2 * t]],
            ambient: ambient.clone(),
            notes,
        });
    }
    Ok(out)
}

fn og10_drafts(spec: &ModuliSpec) -> Vec<Draft> {
    let ambient = catalog::og10();
    let len = ambient.rank();
    let (d1, d2) = (22, 23);
    let d = spec.d;
    match spec.gamma {
        1 => vec![Draft {
            normal_form: NormalForm::Split,
            h: sparse(len, &[(0, 1), (1, d)]),
            fixed: units(len, 2..22),
            fixed_name: "U^2+E8(-1)^2",
            q: vec![sparse(len, &[(d1, 1)]), sparse(len, &[(d2, 1)]), sparse(len, &[(0, 1), (1, -d)])],
            expected_q: vec![vec![-2, 1, 0], vec![1, -2, 0], vec![0, 0, -2 * d]],
            ambient,
            notes: vec![],
        }],
        3 if d % 9 == 6 => {
            let t = (d + 3) / 9;
            vec![Draft {
                normal_form: NormalForm::NonSplit { t },
                h: sparse(len, &[(0, 3), (1, 3 * t), (d1, 1), (d2, 2)]),
                fixed: units(len, 2..22),
                fixed_name: "U^2+E8(-1)^2",
                q: vec![sparse(len, &[(d1, 1)]), sparse(len, &[(d2, 1), (1, 1)]), sparse(len, &[(0, -1), (1, t)])],
                expected_q: vec![vec![-2, 1, 0], vec![1, -2, -1], vec![0, -1, -2 * t]],
                ambient,
                notes: vec![],
            }]
        }
        _ => vec![],
    }
}

fn og6_drafts(spec: &ModuliSpec) -> Vec<Draft> {
    let ambient = catalog::og6();
    let len = ambient.rank();
    let (v1, v2) = (6, 7);
    let d = spec.d;
    let fixed = units(len, 2..6);
    match (spec.gamma, d % 4) {
        (1, _) => vec![Draft {
            normal_form: NormalForm::Split,
            h: sparse(len, &[(0, 1), (1, d)]),
            fixed,
            fixed_name: "U^2",
            q: vec![sparse(len, &[(0, 1), (1, -d)]), sparse(len, &[(v1, 1)]), sparse(len, &[(v2, 1)])],
            expected_q: vec![vec![-2 * d, 0, 0], vec![0, -2, 0], vec![0, 0, -2]],
            ambient,
            notes: vec![],
        }],
        (2, 3) => {
            let t = (d + 1) / 4;
            vec![Draft {
                normal_form: NormalForm::Og6 { w: OgSixW::V1, t },
                h: sparse(len, &[(0, 2), (1, 2 * t), (v1, -1)]),
                fixed,
                fixed_name: "U^2",
                q: vec![sparse(len, &[(1, 1), (v1, -1)]), sparse(len, &[(0, 1), (1, -t)]), sparse(len, &[(v2, 1)])],
                expected_q: vec![vec![-2, 1, 0], vec![1, -2 * t, 0], vec![0, 0, -2]],
                ambient,
                notes: vec!["w=v2 gives an isometric normal form and is not listed".into()],
            }]
        }
        (2, 2) => {
            let t = (d + 2) / 4;
            vec![Draft {
                normal_form: NormalForm::Og6 { w: OgSixW::V1PlusV2, t },
                h: sparse(len, &[(0, 2), (1, 2 * t), (v1, -1), (v2, -1)]),
                fixed,
                fixed_name: "U^2",
                q: vec![
                    sparse(len, &[(1, 1), (v1, -1)]),
                    sparse(len, &[(1, 1), (v2, -1)]),
                    sparse(len, &[(0, 1), (1, -t)]),
                ],
                expected_q: vec![vec![-2, 0, 1], vec![0, -2, 1], vec![1, 1, -2 * t]],
                ambient,
                notes: vec![],
            }]
        }
        _ => vec![],
    }
}

/// `Lambda = (L ^ L)(-1)` and `h = w_d`, so that `(h, h) = 2d`.
fn abelian_drafts(spec: &ModuliSpec) -> Result<Vec<Draft>> {
    if spec.gamma != 1 {
        return Ok(vec![]);
    }
    let ambient = wedge_lattice().rescale(-1);
    let d = spec.d;
    // basis order e12, e13, e14, e23, e24, e34
    Ok(vec![Draft {
        normal_form: NormalForm::Wedge,
        h: vec![0, 1, 0, 0, d, 0],
        fixed: vec![vec![1, 0, 0, 0, 0, 0], vec![0, 0, 0, 0, 0, -1], vec![0, 0, 1, 0, 0, 0], vec![0, 0, 0, -1, 0, 0]],
        fixed_name: "U^2",
        q: vec![vec![0, 1, 0, 0, -d, 0]],
        expected_q: vec![vec![-2 * d]],
        ambient,
        notes: vec!["ambient is the wedge lattice with the form negated".into()],
    }])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k3n_split_example() {
        let c = components(&ModuliSpec::k3n(2, 1, 1).unwrap()).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].q_h().gram(), &IntMatrix::diagonal(&[2, 2]));
    }

    #[test]
    fn og10_non_split_needs_d_6_mod_9() {
        assert!(components(&ModuliSpec::og10(7, 3).unwrap()).unwrap().is_empty());
        let c = components(&ModuliSpec::og10(6, 3).unwrap()).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].q_block.disc(), 4);
    }

    #[test]
    fn kumn_empty_example() {
        assert!(components(&ModuliSpec::kumn(2, 1, 3).unwrap()).unwrap().is_empty());
    }

    #[test]
    fn og6_w_v1_gram() {
        let c = components(&ModuliSpec::og6(7, 2).unwrap()).unwrap();
        assert_eq!(c[0].q_block.gram().to_rows(), vec![vec![-2, 1, 0], vec![1, -4, 0], vec![0, 0, -2]]);
        assert_eq!(c[0].lambda_h.disc(), 14);
        assert!(components(&ModuliSpec::og6(4, 2).unwrap()).unwrap().is_empty());
    }

    #[test]
    fn kumn_determinant_of_q_h() {
        // det Q_h = 4(n+1)d / gamma^2
        let c = components(&ModuliSpec::kumn(2, 6, 3).unwrap()).unwrap();
        // a and gamma - a are distinct orbits for Kum
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].normal_form, NormalForm::Twisted { a: 1, t: 1 });
        assert_eq!(c[1].normal_form, NormalForm::Twisted { a: 2, t: 2 });
        for comp in &c {
            assert_eq!(comp.q_h().det(), 4 * 3 * 6 / 9);
        }
    }
}
