mod common;

use common::{fixture, index, REP_FINITE};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tau2::exactlin::Mat;
use tau2::modcat::*;

fn base_change(m: &Module, rng: &mut ChaCha8Rng) -> Module {
    let f = m.field();
    let alg = m.algebra();
    let changes: Vec<Mat> = m
        .dims()
        .iter()
        .map(|&d| loop {
            let data = (0..d * d).map(|_| rng.gen_range(0..f.p())).collect();
            let g = Mat::from_data(f, d, d, data);
            if g.is_invertible() {
                break g;
            }
        })
        .collect();
    let action = (0..alg.num_arrows())
        .map(|a| {
            let arr = alg.arrow(a);
            changes[arr.target].mul(m.action(a)).mul(&changes[arr.source].inverse().unwrap())
        })
        .collect();
    Module::new(alg, m.dims().to_vec(), action).unwrap()
}

#[test]
fn hom_from_projectives_counts_dimensions() {
    for name in REP_FINITE {
        let idx = index(name);
        let alg = &idx.algebra;
        for m in &idx.modules {
            for v in 0..alg.num_vertices() {
                assert_eq!(hom_dim(&Module::projective(alg, v), m), m.dim_at(v), "{name}");
            }
        }
    }
}

#[test]
fn ext_agrees_with_opposite_algebra() {
    for name in ["lambda3_p101", "a3", "nakayama4", "dual_numbers"] {
        let idx = index(name);
        let op = idx.algebra.opposite();
        for m in &idx.modules {
            for n in &idx.modules {
                for i in 0..=3 {
                    let dn = n.dual().rebase(&op);
                    let dm = m.dual().rebase(&op);
                    assert_eq!(ext_dim(i, m, n), ext_dim(i, &dn, &dm), "{name} i={i}");
                }
            }
        }
    }
}

#[test]
fn translates_are_mutually_inverse_on_indecomposables() {
    for name in REP_FINITE {
        let idx = index(name);
        for m in &idx.modules {
            if is_projective(m) {
                assert!(tau(m).is_zero());
                continue;
            }
            assert!(is_isomorphic(&tau_inv(&tau(m)), m), "{name}");
            assert!(is_indecomposable(&tau(m)));
        }
    }
}

#[test]
fn projectives_and_injectives_appear_once() {
    for name in REP_FINITE {
        let idx = index(name);
        let alg = &idx.algebra;
        for v in 0..alg.num_vertices() {
            for m in [Module::projective(alg, v), Module::injective(alg, v)] {
                let hits = idx.modules.iter().filter(|x| indec_iso(&m, x).is_some()).count();
                assert_eq!(hits, 1, "{name}");
            }
        }
    }
}

#[test]
fn stable_hom_duality_for_two() {
    for name in ["lambda3_p2", "lambda3_p101", "a3", "nakayama4", "comm_square"] {
        let idx = index(name);
        let alg = &idx.algebra;
        let regular = direct_sum(alg, &(0..alg.num_vertices()).map(|v| Module::projective(alg, v)).collect::<Vec<_>>());
        let dual_regular =
            direct_sum(alg, &(0..alg.num_vertices()).map(|v| Module::injective(alg, v)).collect::<Vec<_>>());
        for m in &idx.modules {
            for n in &idx.modules {
                if ext_dim(1, m, &regular) == 0 {
                    let t = tau_d(m, 2);
                    assert_eq!(stable_hom_dim(m, n), ext_dim(2, n, &t), "{name}");
                    assert_eq!(ext_dim(1, m, n), ext_dim(1, n, &t), "{name}");
                }
                if ext_dim(1, &dual_regular, n) == 0 {
                    let t = tau_d_inv(n, 2);
                    assert_eq!(costable_hom_dim(m, n), ext_dim(2, &t, m), "{name}");
                }
            }
        }
    }
}

#[test]
fn global_dimension_of_fixtures() {
    assert_eq!(global_dimension(&fixture("lambda3_p101"), 8), Some(2));
    assert_eq!(global_dimension(&fixture("ss3"), 8), Some(0));
    assert_eq!(global_dimension(&fixture("a2"), 8), Some(1));
    assert_eq!(global_dimension(&fixture("nakayama4"), 8), Some(2));
    assert_eq!(global_dimension(&fixture("dual_numbers"), 8), None);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn decomposition_is_unique(seed in any::<u64>(), picks in prop::collection::vec(0usize..5, 1..4)) {
        let idx = index("lambda3_p101");
        let alg = &idx.algebra;
        let parts: Vec<Module> = picks.iter().map(|&i| idx.modules[i].clone()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = base_change(&direct_sum(alg, &parts), &mut rng);
        let cert = decompose(&m);
        prop_assert!(cert.iso_to_sum.is_iso());
        prop_assert!(ModMap::new(&m, &direct_sum(alg, &cert.expanded()), cert.iso_to_sum.mats().to_vec()).is_ok());
        let mut got: Vec<usize> = cert
            .expanded()
            .iter()
            .map(|x| idx.find(x).unwrap())
            .collect();
        got.sort();
        let mut want = picks.clone();
        want.sort();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn rank_nullity_for_random_maps(seed in any::<u64>(), i in 0usize..5, j in 0usize..5, k in 0usize..5) {
        let idx = index("lambda3_p101");
        let alg = &idx.algebra;
        let m = direct_sum(alg, &[idx.modules[i].clone(), idx.modules[k].clone()]);
        let n = direct_sum(alg, &[idx.modules[j].clone(), idx.modules[i].clone()]);
        let basis = hom_basis(&m, &n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs: Vec<u32> = basis.iter().map(|_| rng.gen_range(0..101)).collect();
        let terms: Vec<(u32, &ModMap)> = coeffs.iter().copied().zip(&basis).collect();
        let f = ModMap::combination(&m, &n, &terms);
        let parts = map_parts(&f);
        for v in 0..alg.num_vertices() {
            prop_assert_eq!(m.dim_at(v), parts.kernel.dim_at(v) + parts.image.dim_at(v));
            prop_assert_eq!(n.dim_at(v), parts.cokernel.dim_at(v) + parts.image.dim_at(v));
        }
        prop_assert!(f.compose(&parts.kernel_incl).is_zero());
        prop_assert!(parts.cokernel_proj.compose(&f).is_zero());
    }

    #[test]
    fn json_roundtrip(seed in any::<u64>(), i in 0usize..5, j in 0usize..5) {
        let idx = index("lambda3_p101");
        let alg = &idx.algebra;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = base_change(&direct_sum(alg, &[idx.modules[i].clone(), idx.modules[j].clone()]), &mut rng);
        let text = module_to_json(&m).to_string();
        let back = module_from_json(alg, &text).unwrap();
        prop_assert_eq!(back.actions(), m.actions());
    }
}
