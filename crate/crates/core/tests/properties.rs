mod common;

use common::*;
use gstrata::pipeline::{compute, run, Report};
use gstrata::{Exec, JobConfig, Mode, NuStrategy, OrderKind, OrderSpec};
use proptest::prelude::*;

#[test]
fn generators_are_weighted_homogeneous_without_constant_term() {
    for f in fixtures() {
        let st = stratum(&f.cfg);
        let si = &st.scheme;
        let w = |v| si.var_weight(v);
        for (v, _) in si.vars.iter() {
            assert!(w(v) > 0, "{}: variable {v} has weight {}", f.name, w(v));
        }
        for g in &si.generators {
            assert!(g.poly.is_homogeneous(&w), "{}: {} not homogeneous", f.name, g.tag);
            assert!(num_traits::Zero::is_zero(&g.poly.constant_term()), "{}: {}", f.name, g.tag);
        }
    }
}

#[test]
fn tangent_dimension_matches_dense_computation() {
    for f in fixtures() {
        let st = stratum(&f.cfg);
        assert_eq!(
            brute_force_tangent_dim(&st.scheme),
            st.tangent.embedding_dim,
            "{}",
            f.name
        );
    }
}

#[test]
fn stored_family_satisfies_its_defining_conditions() {
    for f in fixtures() {
        let st = stratum(&f.cfg);
        st.scheme.ufamily.check_conditions().unwrap_or_else(|e| panic!("{}: {e}", f.name));
    }
}

#[test]
fn points_on_the_stratum_pass_the_oracle_and_perturbed_points_fail() {
    for (k, f) in fixtures().into_iter().enumerate() {
        let st = stratum(&f.cfg);
        let (on, off) = sample_oracle(&st, 25, 1000 + k as u64);
        assert_eq!((on, off), (25, 25), "{}", f.name);
    }
}

#[test]
fn reruns_are_byte_identical() {
    for f in fixtures() {
        let a = run(&f.cfg).unwrap();
        let b = run(&f.cfg).unwrap();
        assert_eq!(a.to_json(), b.to_json(), "{}", f.name);
        assert_eq!(a.to_text(), b.to_text(), "{}", f.name);
        let mut seq = f.cfg.clone();
        seq.exec = Exec::Sequential;
        assert_eq!(run(&seq).unwrap().to_json(), a.to_json(), "{}", f.name);
    }
}

#[test]
fn reports_round_trip_through_json() {
    for f in fixtures() {
        let r = run(&f.cfg).unwrap();
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r, "{}", f.name);
    }
}

#[test]
fn direction_choice_does_not_change_the_stratum() {
    for f in fixtures() {
        let a = stratum(&f.cfg);
        let mut cfg = f.cfg.clone();
        cfg.nu = NuStrategy::Largest;
        let b = stratum(&cfg);
        assert_eq!(a.tangent.rank, b.tangent.rank, "{}", f.name);
        assert_eq!(a.tangent.eliminable, b.tangent.eliminable, "{}", f.name);
        assert_eq!(a.embedded.minimal_gens.len(), b.embedded.minimal_gens.len(), "{}", f.name);
        // Same ideal: each side's points satisfy the other's equations.
        let (on, _) = sample_oracle(&b, 10, 7);
        assert_eq!(on, 10, "{}", f.name);
    }
}

#[test]
fn larger_degree_bound_gives_the_same_stratum() {
    for f in fixtures() {
        let a = stratum(&f.cfg);
        let mut cfg = f.cfg.clone();
        cfg.degree_bound = Some(a.scheme.degree_bound + 1);
        let b = stratum(&cfg);
        assert_eq!(a.tangent.eliminable, b.tangent.eliminable, "{}", f.name);
        assert_eq!(a.embedded.minimal_gens, b.embedded.minimal_gens, "{}", f.name);
    }
}

/// Minimal generators of the monomial ideal spanned by `pts`.
fn minimalize(mut pts: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
    pts.sort();
    pts.dedup();
    let divides = |a: &Vec<u32>, b: &Vec<u32>| a.iter().zip(b).all(|(x, y)| x <= y);
    pts.iter()
        .filter(|b| !pts.iter().any(|a| a != *b && divides(a, b)))
        .cloned()
        .collect()
}

fn corner_sets() -> impl Strategy<Value = Vec<Vec<u32>>> {
    (2usize..=3)
        .prop_flat_map(|n| proptest::collection::vec(proptest::collection::vec(0u32..=2, n), 1..=4))
        .prop_map(minimalize)
        .prop_filter("no constant corner", |c| c.iter().all(|a| a.iter().any(|&k| k > 0)))
        .prop_filter("small", |c| c.iter().map(|a| a.iter().sum::<u32>()).max().unwrap_or(0) <= 3)
}

fn random_job(corners: &[Vec<u32>], kind: OrderKind) -> JobConfig {
    JobConfig::new(
        OrderSpec::named(kind),
        corners.iter().map(|c| e(c)).collect(),
        Mode::Full,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_strata_agree_with_the_independent_checks(
        corners in corner_sets(),
        graded in prop_oneof![Just(OrderKind::Grlex), Just(OrderKind::Grevlex)],
        seed in 0u64..1000,
    ) {
        let cfg = random_job(&corners, graded);
        let st = compute(&cfg).unwrap();
        let si = &st.scheme;
        prop_assert_eq!(brute_force_tangent_dim(si), st.tangent.embedding_dim);
        for g in &si.generators {
            prop_assert!(g.poly.is_homogeneous(&|v| si.var_weight(v)));
        }
        prop_assert!(si.ufamily.check_conditions().is_ok());
        let (on, off) = sample_oracle(&st, 3, seed);
        prop_assert_eq!(on, 3);
        if !st.tangent.eliminable.is_empty() {
            prop_assert_eq!(off, 3);
        }
    }

    #[test]
    fn sequential_and_parallel_runs_agree(corners in corner_sets()) {
        let mut cfg = random_job(&corners, OrderKind::Grlex);
        cfg.exec = Exec::Sequential;
        let a = run(&cfg).unwrap().to_json();
        cfg.exec = Exec::Parallel;
        prop_assert_eq!(a, run(&cfg).unwrap().to_json());
    }

    #[test]
    fn direction_choice_keeps_tangent_data(corners in corner_sets()) {
        let cfg = random_job(&corners, OrderKind::Grlex);
        let a = compute(&cfg).unwrap();
        let mut cfg2 = cfg.clone();
        cfg2.nu = NuStrategy::Largest;
        let b = compute(&cfg2).unwrap();
        prop_assert_eq!(a.tangent.eliminable, b.tangent.eliminable);
        prop_assert_eq!(a.embedded.minimal_gens.len(), b.embedded.minimal_gens.len());
    }
}
