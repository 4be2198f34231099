use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

use tame_measure::bounds::{
    corollary_measure_bound, diagram_component_bound, khovanskii_fewnomial_bound, optm_bound,
    zell_bound, BoundReport,
};
use tame_measure::sets::{Diagram, PfaffianFormat};

fn v(r: &BoundReport) -> f64 {
    r.value.expect("grid values stay in direct range")
}

#[test]
fn optm_and_khovanskii_are_monotone_on_grid() {
    for a in 1..=6 {
        for b in 1..=6 {
            let o = v(&optm_bound(a, b).unwrap());
            assert!(v(&optm_bound(a + 1, b).unwrap()) >= o);
            assert!(v(&optm_bound(a, b + 1).unwrap()) >= o);
            let k = v(&khovanskii_fewnomial_bound(a, b).unwrap());
            assert!(v(&khovanskii_fewnomial_bound(a + 1, b).unwrap()) >= k);
            assert!(v(&khovanskii_fewnomial_bound(a, b + 1).unwrap()) >= k);
        }
    }
}

#[test]
fn zell_is_monotone_on_grid() {
    let f = |m, l, alpha, beta, s, gamma| PfaffianFormat::new(m, l, alpha, beta, s, gamma).unwrap();
    for e in 0..=2 {
        for m in 1..=6 {
            for s in 1..=6 {
                for l in 1..=4 {
                    for alpha in 1..=4 {
                        for beta in 1..=4 {
                            for gamma in 1..=4 {
                                let base = v(&zell_bound(&f(m, l, alpha, beta, s, gamma), e));
                                let bumps = [
                                    f(m + 1, l, alpha, beta, s, gamma),
                                    f(m, l + 1, alpha, beta, s, gamma),
                                    f(m, l, alpha + 1, beta, s, gamma),
                                    f(m, l, alpha, beta + 1, s, gamma),
                                    f(m, l, alpha, beta, s + 1, gamma),
                                    f(m, l, alpha, beta, s, gamma + 1),
                                ];
                                for g in bumps {
                                    assert!(v(&zell_bound(&g, e)) >= base, "{g:?} e={e}");
                                }
                                assert!(v(&zell_bound(&f(m, l, alpha, beta, s, gamma), e + 1)) >= base);
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn diagram_bound_is_monotone_on_grid() {
    for m in 1..=6 {
        for d in 1..=6u32 {
            for s in 1..=6usize {
                let row = vec![d; s];
                let base = v(&diagram_component_bound(&Diagram::new(m, vec![row.clone()]).unwrap()));
                let mut deg = row.clone();
                deg[0] += 1;
                let mut more = row.clone();
                more.push(1);
                for bigger in [vec![deg], vec![more], vec![row.clone(), vec![1]]] {
                    assert!(v(&diagram_component_bound(&Diagram::new(m, bigger).unwrap())) >= base);
                }
                let wider = v(&diagram_component_bound(&Diagram::new(m + 1, vec![row]).unwrap()));
                // successive values in m differ by the factor 2ds/(m+1)
                if 2 * d as usize * s >= m + 1 {
                    assert!(wider >= base, "m={m} d={d} s={s}");
                }
            }
        }
    }
}

#[test]
fn diagram_bound_drops_with_m_when_ds_is_small() {
    let at = |m| v(&diagram_component_bound(&Diagram::new(m, vec![vec![1]]).unwrap()));
    assert_eq!(at(2), 2.0);
    assert!((at(3) - 4.0 / 3.0).abs() < 1e-15);
}

#[test]
fn corollary_is_monotone_in_b0_and_r() {
    for m in 1..=6 {
        for k in 0..=m {
            for b0 in 0..=6 {
                for r in 1..=6 {
                    let (b0, r) = (b0 as f64, r as f64);
                    let base = v(&corollary_measure_bound(m, k, b0, r).unwrap());
                    assert!(v(&corollary_measure_bound(m, k, b0 + 1.0, r).unwrap()) >= base);
                    assert!(v(&corollary_measure_bound(m, k, b0, r + 1.0).unwrap()) >= base);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(Config { cases: 256, rng_seed: RngSeed::Fixed(0xb0), failure_persistence: None, ..Config::default() })]

    #[test]
    fn corollary_scales_as_r_to_the_k(m in 1usize..8, k_frac in 0.0f64..1.0, b0 in 0.1f64..100.0, r in 0.01f64..50.0) {
        let k = ((m as f64 + 1.0) * k_frac) as usize;
        let k = k.min(m);
        let one = v(&corollary_measure_bound(m, k, b0, r).unwrap());
        let two = v(&corollary_measure_bound(m, k, b0, 2.0 * r).unwrap());
        prop_assert!((two / one - 2f64.powi(k as i32)).abs() <= 1e-12 * 2f64.powi(k as i32));
    }

    #[test]
    fn diagram_bound_is_permutation_invariant(
        m in 1usize..6,
        rows in prop::collection::vec(prop::collection::vec(0u32..8, 1..5), 1..6),
        shift in 0usize..6,
    ) {
        let mut permuted = rows.clone();
        permuted.reverse();
        let len = permuted.len();
        permuted.rotate_left(shift % len);
        let a = diagram_component_bound(&Diagram::new(m, rows).unwrap());
        let b = diagram_component_bound(&Diagram::new(m, permuted).unwrap());
        let (a, b) = (v(&a), v(&b));
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
    }
}
