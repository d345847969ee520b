//! Property tests for the invariants of each module.

use proptest::prelude::*;

use lattice_irr::arith::{count_sqrt1, gcd_all, rho};
use lattice_irr::catalog;
use lattice_irr::construct::{embed_qad_a1, embed_qad_e8, embed_split};
use lattice_irr::discform::FiniteQuadraticForm;
use lattice_irr::embedding::LatticeEmbedding;
use lattice_irr::lattice::GramLattice;
use lattice_irr::matrix::{IntMatrix, Rat};
use lattice_irr::moduli::{
    bound_report, choose_lambda_sharp, components, ogrady_subgroup_count, wedge_lambda_d, Family, ModuliSpec,
};
use lattice_irr::normal_form::smith_normal_form;
use lattice_irr::squares::{coprime_four_squares, four_squares, represent_binary_form};

fn small_matrix(max_dim: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-6i128..=6, c), r)
            .prop_map(|rows| IntMatrix::from_rows(&rows).unwrap())
    })
}

/// Direct sums of a few small named lattices.
fn small_lattice() -> impl Strategy<Value = GramLattice> {
    let atom = prop_oneof![
        Just(catalog::hyperbolic()),
        (1usize..=4).prop_map(catalog::a_n),
        (1usize..=4).prop_map(|n| catalog::a_n(n).rescale(-1)),
        (1i128..=12).prop_map(|k| catalog::rank_one(2 * k)),
        (1i128..=12).prop_map(|k| catalog::rank_one(-2 * k)),
        (4usize..=5).prop_map(catalog::d_n),
    ];
    prop::collection::vec(atom, 1..=3).prop_map(|parts| {
        let refs: Vec<&GramLattice> = parts.iter().collect();
        GramLattice::direct_sum(&refs)
    })
}

fn qad_pair() -> impl Strategy<Value = (i128, i128)> {
    (1i128..=120, 0i128..=30).prop_map(|(a, k)| {
        let d = 4 * k + (4 - a % 4) % 4;
        (a, if d == 0 { 4 } else { d })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn snf_is_a_unimodular_diagonalisation(m in small_matrix(4)) {
        let snf = smith_normal_form(&m);
        prop_assert_eq!(snf.u.mul(&m).unwrap().mul(&snf.v).unwrap(), snf.s.clone());
        prop_assert_eq!(snf.u.det().abs(), 1);
        prop_assert_eq!(snf.v.det().abs(), 1);
        let diag = snf.diagonal();
        for w in diag.windows(2) {
            prop_assert!(w[0] >= 0);
            let divides = if w[0] == 0 { w[1] == 0 } else { w[1] % w[0] == 0 };
            prop_assert!(divides);
        }
        if m.is_square() {
            prop_assert_eq!(diag.iter().product::<i128>().abs(), m.det().abs());
        }
    }

    #[test]
    fn signature_is_additive(a in small_lattice(), b in small_lattice()) {
        let (sa, sb) = (a.signature().unwrap(), b.signature().unwrap());
        let s = GramLattice::direct_sum(&[&a, &b]).signature().unwrap();
        prop_assert_eq!(s.positive, sa.positive + sb.positive);
        prop_assert_eq!(s.negative, sa.negative + sb.negative);
    }

    #[test]
    fn discriminant_group_order_is_det(l in small_lattice()) {
        let f = FiniteQuadraticForm::from_lattice(&l).unwrap();
        prop_assert_eq!(f.order(), l.det().abs());
        prop_assert!(f.ell() <= l.rank());
    }

    #[test]
    fn isometry_count_below_disc_power(l in small_lattice()) {
        let f = FiniteQuadraticForm::from_lattice(&l).unwrap();
        if let Some(e) = f.enumerate_isometries(1 << 20).exact {
            prop_assert!(e >= 1);
            prop_assert!((e as i128) <= f.order().pow(f.ell() as u32));
        }
    }

    #[test]
    fn lattice_json_round_trip(l in small_lattice()) {
        let text = serde_json::to_string(&l.to_json()).unwrap();
        let back = GramLattice::from_json_str(&text).unwrap();
        prop_assert_eq!(back.gram(), l.gram());
    }

    #[test]
    fn det_q_ad_is_a_times_d((a, d) in qad_pair()) {
        prop_assert_eq!(catalog::q_ad(a, d).unwrap().det(), a * d);
    }

    #[test]
    fn sqrt1_count_matches_residues(r in 1i128..3000) {
        let brute = (0..r).filter(|x| (x * x - 1).rem_euclid(r) == 0).count() as u64;
        prop_assert_eq!(count_sqrt1(r), brute);
        prop_assert!((count_sqrt1(r) as i128) <= 1 << (rho(r) + 1));
    }

    #[test]
    fn four_squares_sum_back(n in 0i128..100_000) {
        let p = four_squares(n).unwrap();
        prop_assert_eq!(p.iter().map(|x| x * x).sum::<i128>(), n);
        prop_assert!(p.windows(2).all(|w| w[0] <= w[1]));
        match coprime_four_squares(n.max(1)) {
            Ok(q) => {
                prop_assert_eq!(q.iter().map(|x| x * x).sum::<i128>(), n.max(1));
                prop_assert_eq!(gcd_all(&q), 1);
            }
            Err(_) => prop_assert_eq!(n.max(1) % 8, 0),
        }
    }

    #[test]
    fn binary_representations_solve_the_equation(a in 1i128..5, b in 0i128..3, c in 1i128..5, d in 1i128..200) {
        if let Ok(r) = represent_binary_form(a, b, c, d, true, None) {
            prop_assert_eq!(a * r.x * r.x - b * r.x * r.y + c * r.y * r.y, d);
            prop_assert_eq!(gcd_all(&[r.x, r.y]), 1);
        }
    }

    #[test]
    fn saturation_index_is_content_of_a_vector(v in prop::collection::vec(-5i128..=5, 4)) {
        prop_assume!(v.iter().any(|&x| x != 0));
        let target = catalog::a_n(1).power(4);
        let norm = target.norm(&v);
        let e = LatticeEmbedding::checked(
            catalog::rank_one(norm),
            target,
            IntMatrix::from_cols(&[v.clone()]).unwrap(),
        ).unwrap();
        let content = gcd_all(&v);
        prop_assert_eq!(e.saturation_index().unwrap(), content);
        prop_assert_eq!(e.is_primitive().unwrap(), content == 1);
    }

    #[test]
    fn moment_matrix_identity(v in prop::collection::vec(-5i128..=5, 4)) {
        prop_assume!(v.iter().any(|&x| x != 0));
        let target = catalog::a_n(1).rescale(-1).power(4);
        let src = catalog::rank_one(target.norm(&v));
        let e = LatticeEmbedding::checked(src, target.clone(), IntMatrix::from_cols(&[v.clone()]).unwrap()).unwrap();
        let c = e.complement().unwrap();
        let r = c.lattice.rank() as u32;
        prop_assert_eq!(r, 3);
        prop_assert_eq!(c.det_t * Rat::from_integer(1 << r), Rat::from_integer(c.lattice.det()));
        for j in 0..c.basis.cols() {
            prop_assert_eq!(target.pair(&c.basis.col(j), &v), 0);
        }
        let sat = e.saturation().unwrap().lattice.disc();
        prop_assert!(c.glue_index_saturated <= sat);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn qad_lemmas_hold((a, d) in qad_pair()) {
        let (ce, index) = if a % 4 == 0 {
            (embed_qad_a1(a, d).unwrap(), 2)
        } else {
            (embed_qad_e8(a, d).unwrap(), 1)
        };
        prop_assert!(ce.embedding.verify());
        prop_assert_eq!(ce.saturation_index, index);
        let sigma = ce.involution.clone().unwrap();
        prop_assert_eq!(sigma.mul(&sigma).unwrap(), IntMatrix::identity(sigma.rows()));
        prop_assert!(ce.involution_ok().unwrap());
        // sigma(z2) = z2 + z1
        let b = ce.embedding.matrix();
        let z1 = b.col(0);
        let z2 = b.col(1);
        let expected: Vec<i128> = z1.iter().zip(&z2).map(|(x, y)| x + y).collect();
        prop_assert_eq!(sigma.mul_vec(&z2), expected);
    }

    #[test]
    fn split_lemma_fixes_z2(a in 1i128..150, d in 1i128..150, small in any::<bool>()) {
        prop_assume!(!small || (a % 8 != 0 && d % 8 != 0));
        let ce = embed_split(a, d, small).unwrap();
        prop_assert_eq!(ce.saturation_index, 1);
        prop_assert!(ce.involution_ok().unwrap());
        let sigma = ce.involution.clone().unwrap();
        let z2 = ce.embedding.matrix().col(1);
        prop_assert_eq!(sigma.mul_vec(&z2), z2);
    }

    #[test]
    fn stable_isometries_extend(k in 1i128..20) {
        // U -> U + Z(-2k); U is unimodular so every isometry is stable
        let u = catalog::hyperbolic();
        let target = GramLattice::direct_sum(&[&u, &catalog::rank_one(-2 * k)]);
        let m = IntMatrix::from_rows(&[vec![1, 0], vec![0, 1], vec![0, 0]]).unwrap();
        let e = LatticeEmbedding::checked(u, target, m).unwrap();
        let swap = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        let ext = e.extend_by_identity(&swap).unwrap();
        prop_assert!(e.verify_extension(&ext, &swap));
    }

    #[test]
    fn components_satisfy_the_disc_identity(
        family in prop_oneof![Just(Family::K3n), Just(Family::Kumn)],
        n in 1i128..12,
        d in 1i128..60,
        gamma in 1i128..6,
    ) {
        let spec = ModuliSpec::new(family, n, d, gamma).unwrap();
        for c in components(&spec).unwrap() {
            let hg = c.ambient.gram().mul_vec(&c.h);
            prop_assert_eq!(gcd_all(&hg), gamma);
            prop_assert_eq!(c.ambient.norm(&c.h), 2 * d);
            prop_assert_eq!(c.lambda_h.disc() * gamma * gamma, 2 * d * c.ambient.disc());
            let sharp = choose_lambda_sharp(&c).unwrap();
            prop_assert!(sharp.embedding.verify());
            prop_assert!(sharp.saturation_index == 1 || sharp.saturation_index == 2);
        }
    }

    #[test]
    fn reports_are_consistent(d in 1i128..40, gamma in 1i128..4) {
        for spec in [ModuliSpec::og10(d, gamma).unwrap(), ModuliSpec::og6(d, gamma).unwrap()] {
            if let Ok(rs) = bound_report(&spec) {
                for r in rs {
                    prop_assert_eq!(r.final_exp, r.exp_disc);
                    prop_assert!(r.eps);
                    prop_assert_eq!(r.sat_index, 1);
                }
            }
        }
    }

    #[test]
    fn wedge_complement_splits(d in 1i128..500) {
        let w = wedge_lambda_d(d).unwrap();
        prop_assert!(w.split_ok);
        prop_assert_eq!(w.lambda_d.disc(), 2 * d);
        prop_assert_eq!(w.w_d_norm, -2 * d);
    }

    #[test]
    fn subgroup_count_is_multiplicative_in_r(p in prop_oneof![Just(2i128), Just(3), Just(5), Just(7)], r in 1u32..4) {
        let base = ogrady_subgroup_count(p, 1).unwrap();
        prop_assert_eq!(ogrady_subgroup_count(p, r).unwrap(), p.pow(4 * r - 4) * base);
    }
}
