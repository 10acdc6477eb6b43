//! Random-instance agreement between the production propagators and the
//! exhaustive-support reference filter.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cpq_core::{Constraint, DomainTuple, FilterOutcome};
use cpq_filter::{
    brute_force_dc, filter_alldifferent, filter_alldifferent_except0, filter_gcc, filter_inverse,
};

fn sorted(mut pairs: Vec<(usize, i64)>) -> Vec<(usize, i64)> {
    pairs.sort_unstable();
    pairs
}

fn random_domains(
    rng: &mut ChaCha8Rng,
    vars: usize,
    lo: i64,
    hi: i64,
    keep: f64,
) -> DomainTuple {
    DomainTuple::new(
        (0..vars)
            .map(|_| {
                let mut s: Vec<i64> = (lo..=hi).filter(|_| rng.gen_bool(keep)).collect();
                if s.is_empty() {
                    s.push(rng.gen_range(lo..=hi));
                }
                s
            })
            .collect(),
    )
}

#[test]
fn alldifferent_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..500 {
        let vars = rng.gen_range(1..=6);
        let hi = rng.gen_range(1..=7);
        let domains = random_domains(&mut rng, vars, 1, hi, 0.55);
        let scope: Vec<usize> = (0..vars).collect();
        let c = Constraint::AllDifferent {
            scope: scope.clone(),
        };
        let got = filter_alldifferent(&domains, &scope);
        let want = brute_force_dc(&domains, &c).unwrap();
        match (got, want) {
            (FilterOutcome::Infeasible, FilterOutcome::Infeasible) => {}
            (
                FilterOutcome::Filtered {
                    domains: dg,
                    removed: rg,
                },
                FilterOutcome::Filtered {
                    domains: dw,
                    removed: rw,
                },
            ) => {
                assert_eq!(sorted(rg), sorted(rw));
                assert_eq!(dg, dw);
            }
            (got, want) => panic!("flag mismatch: {got:?} vs {want:?}"),
        }
    }
}

#[test]
fn alldifferent_output_is_domain_consistent() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..200 {
        let vars = rng.gen_range(1..=6);
        let domains = random_domains(&mut rng, vars, 1, 7, 0.5);
        let scope: Vec<usize> = (0..vars).collect();
        if let FilterOutcome::Filtered { domains: filtered, .. } =
            filter_alldifferent(&domains, &scope)
        {
            let c = Constraint::AllDifferent { scope };
            match brute_force_dc(&filtered, &c).unwrap() {
                FilterOutcome::Filtered { removed, .. } => {
                    assert!(removed.is_empty(), "second pass removed {removed:?}")
                }
                FilterOutcome::Infeasible => panic!("filtered output became infeasible"),
            }
        }
    }
}

#[test]
fn alldifferent_except0_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..500 {
        let vars = rng.gen_range(1..=6);
        let hi = rng.gen_range(1..=6);
        let domains = random_domains(&mut rng, vars, 0, hi, 0.5);
        let scope: Vec<usize> = (0..vars).collect();
        let c = Constraint::AllDifferentExcept0 {
            scope: scope.clone(),
        };
        let got = filter_alldifferent_except0(&domains, &scope);
        let want = brute_force_dc(&domains, &c).unwrap();
        match (got, want) {
            (FilterOutcome::Infeasible, FilterOutcome::Infeasible) => {}
            (
                FilterOutcome::Filtered {
                    domains: dg,
                    removed: rg,
                },
                FilterOutcome::Filtered {
                    domains: dw,
                    removed: rw,
                },
            ) => {
                assert!(rg.iter().all(|&(_, v)| v != 0), "zero pruned: {rg:?}");
                assert_eq!(sorted(rg), sorted(rw));
                assert_eq!(dg, dw);
            }
            (got, want) => panic!("flag mismatch: {got:?} vs {want:?}"),
        }
    }
}

#[test]
fn inverse_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for _ in 0..500 {
        let n = rng.gen_range(2..=4);
        let domains = random_domains(&mut rng, 2 * n, 1, n as i64, 0.7);
        let scope_x: Vec<usize> = (0..n).collect();
        let scope_y: Vec<usize> = (n..2 * n).collect();
        let c = Constraint::Inverse {
            scope_x: scope_x.clone(),
            scope_y: scope_y.clone(),
        };
        let got = filter_inverse(&domains, &scope_x, &scope_y);
        let want = brute_force_dc(&domains, &c).unwrap();
        match (got, want) {
            (FilterOutcome::Infeasible, FilterOutcome::Infeasible) => {}
            (
                FilterOutcome::Filtered {
                    domains: dg,
                    removed: rg,
                },
                FilterOutcome::Filtered {
                    domains: dw,
                    removed: rw,
                },
            ) => {
                assert_eq!(sorted(rg), sorted(rw));
                assert_eq!(dg, dw);
            }
            (got, want) => panic!("flag mismatch: {got:?} vs {want:?}"),
        }
    }
}

#[test]
fn gcc_is_sound_and_feasibility_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    for _ in 0..500 {
        let vars = rng.gen_range(1..=5);
        let hi = rng.gen_range(1..=5i64);
        let domains = random_domains(&mut rng, vars, 1, hi, 0.6);
        let scope: Vec<usize> = (0..vars).collect();
        let n_counted = rng.gen_range(1..=hi) as usize;
        let values: Vec<i64> = (1..=n_counted as i64).collect();
        let bounds: Vec<(u32, u32)> = values
            .iter()
            .map(|_| {
                let lo = rng.gen_range(0..=2u32.min(vars as u32));
                let hi = rng.gen_range(lo..=vars as u32);
                (lo, hi)
            })
            .collect();
        let c = Constraint::Gcc {
            scope: scope.clone(),
            values: values.clone(),
            bounds: bounds.clone(),
        };
        let got = filter_gcc(&domains, &scope, &values, &bounds);
        let want = brute_force_dc(&domains, &c).unwrap();
        match (got, want) {
            (FilterOutcome::Infeasible, FilterOutcome::Infeasible) => {}
            (
                FilterOutcome::Filtered { removed: rg, .. },
                FilterOutcome::Filtered { removed: rw, .. },
            ) => {
                // Removals must be a subset of the oracle's.
                let oracle: std::collections::HashSet<_> = rw.into_iter().collect();
                for pair in &rg {
                    assert!(oracle.contains(pair), "unsound removal {pair:?}");
                }
            }
            (got, want) => panic!("feasibility mismatch: {got:?} vs {want:?}"),
        }
    }
}

#[test]
fn gcc_with_unit_bounds_prunes_at_least_alldifferent() {
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    let mut compared = 0;
    while compared < 200 {
        let vars = rng.gen_range(1..=5);
        let domains = random_domains(&mut rng, vars, 1, vars as i64, 0.7);
        let scope: Vec<usize> = (0..vars).collect();
        let values: Vec<i64> = (1..=vars as i64).collect();
        let bounds = vec![(1u32, 1u32); vars];
        let ad = filter_alldifferent(&domains, &scope);
        let gc = filter_gcc(&domains, &scope, &values, &bounds);
        match (ad, gc) {
            (FilterOutcome::Filtered { removed: ra, .. }, FilterOutcome::Filtered { removed: rg, .. }) => {
                let gcc_removed: std::collections::HashSet<_> = rg.into_iter().collect();
                for pair in &ra {
                    assert!(gcc_removed.contains(pair), "missing removal {pair:?}");
                }
                compared += 1;
            }
            // The unit lower bounds make gcc stricter than plain
            // difference; it may be infeasible where alldifferent is not.
            (FilterOutcome::Infeasible, _) | (_, FilterOutcome::Infeasible) => {}
        }
    }
}

#[test]
fn filters_are_contracting() {
    let mut rng = ChaCha8Rng::seed_from_u64(27);
    for _ in 0..200 {
        let vars = rng.gen_range(1..=6);
        let domains = random_domains(&mut rng, vars, 0, 6, 0.5);
        let scope: Vec<usize> = (0..vars).collect();
        for outcome in [
            filter_alldifferent(&domains, &scope),
            filter_alldifferent_except0(&domains, &scope),
        ] {
            if let FilterOutcome::Filtered {
                domains: out,
                removed,
            } = outcome
            {
                assert!(out.subset_of(&domains));
                for &(var, v) in &removed {
                    assert!(domains.contains(var, v));
                    assert!(!out.contains(var, v));
                }
            }
        }
    }
}
