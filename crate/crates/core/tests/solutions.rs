use cyclodiff::ff::field_of_order;
use cyclodiff::polysys::{
    dft_bridge, dft_bridge_inverse, explicit_solution, gauss_solution, gen_g_system, gen_ghat_system,
    symmetry_transform, unscale, verify_solution, Level, SolutionVector, Transform, VerifyMode,
};
use cyclodiff::{arith, QCyc};
use proptest::prelude::*;

fn on_variety(sol: &SolutionVector) -> bool {
    let sys = match sol.level {
        Level::G => gen_g_system(sol.m).unwrap(),
        Level::Ghat => gen_ghat_system(sol.m, sol.theta.unwrap() as i64).unwrap(),
    };
    let mode = if sol.scaled_by_sqrt_q.is_some() {
        VerifyMode::ScaledExact
    } else {
        VerifyMode::Exact
    };
    verify_solution(&sys, sol, mode).unwrap().all_zero
}

fn same_point(a: &SolutionVector, b: &SolutionVector) -> bool {
    let (a, b) = (a.exact_values().unwrap(), b.exact_values().unwrap());
    a.len() == b.len() && a.iter().zip(&b).all(|(x, y)| x.same_value(y))
}

/// Unscaled g-level points (on or off the variety) from explicit and Gauss-sum sources.
fn g_points(m: u64) -> Vec<SolutionVector> {
    let mut pts = vec![explicit_solution(m).unwrap()];
    for q in (3..=60).filter(|&q| arith::as_prime_power(q).is_some() && (q - 1) % m == 0) {
        let f = field_of_order(q).unwrap();
        for modified in [false, true] {
            pts.push(unscale(&gauss_solution(&f, m, modified).unwrap()).unwrap());
        }
    }
    pts
}

fn arb_transform(m: u64) -> impl Strategy<Value = Transform> {
    let units: Vec<i64> = (1..m as i64).filter(|&r| arith::gcd(r as u64, m) == 1).collect();
    prop_oneof![
        Just(Transform::Negate),
        (0..m as i64).prop_map(Transform::Twist),
        prop::sample::select(units).prop_map(Transform::Reindex),
    ]
}

fn transform_chain_preserves_variety(m: u64, level: Level, chain: &[Transform]) -> Result<(), TestCaseError> {
    let mut sol = explicit_solution(m).unwrap();
    if level == Level::Ghat {
        sol = dft_bridge_inverse(&sol).unwrap();
    }
    for &t in chain {
        sol = symmetry_transform(&sol, t).unwrap();
        prop_assert!(on_variety(&sol), "m={} {:?} after {:?}", m, level, chain);
    }
    Ok(())
}

macro_rules! transform_invariant {
    ($name:ident, $m:expr) => {
        proptest! {
            #![proptest_config(ProptestConfig { cases: 50, ..ProptestConfig::default() })]
            #[test]
            fn $name(chain in prop::collection::vec(arb_transform($m), 1..4)) {
                transform_chain_preserves_variety($m, Level::G, &chain)?;
                transform_chain_preserves_variety($m, Level::Ghat, &chain)?;
            }
        }
    };
}

transform_invariant!(transforms_preserve_solutions_m4, 4);
transform_invariant!(transforms_preserve_solutions_m6, 6);
transform_invariant!(transforms_preserve_solutions_m8, 8);

#[test]
fn transforms_preserve_non_solutions() {
    // Gauss tuples of non-difference sets stay off the variety.
    let f = field_of_order(29).unwrap();
    let base = unscale(&gauss_solution(&f, 4, false).unwrap()).unwrap();
    assert!(!on_variety(&base));
    for t in [Transform::Negate, Transform::Twist(1), Transform::Reindex(3)] {
        assert!(!on_variety(&symmetry_transform(&base, t).unwrap()), "{t:?}");
    }
}

#[test]
fn bridge_is_a_bijection_on_every_theta() {
    for m in [4u64, 6] {
        let half = m / 2;
        let mut seen_theta = vec![false; half as usize];
        let units: Vec<i64> = (1..m as i64).filter(|&r| arith::gcd(r as u64, m) == 1).collect();
        for base in g_points(m) {
            for &r in &units {
                let g = symmetry_transform(&base, Transform::Reindex(r)).unwrap();
                let ghat = dft_bridge_inverse(&g).unwrap();
                let theta = ghat.theta.unwrap();
                seen_theta[theta as usize] = true;
                assert!(same_point(&dft_bridge(&ghat, m, theta as i64).unwrap(), &g));
                assert_eq!(on_variety(&g), on_variety(&ghat), "m={m} theta={theta}");
                // Cross-membership for every theta, not only the one read off h.
                for other in (0..half).filter(|&t| t != theta) {
                    let mut relabeled = ghat.clone();
                    relabeled.theta = Some(other);
                    let moved = dft_bridge(&ghat, m, other as i64).unwrap();
                    assert_eq!(on_variety(&moved), on_variety(&relabeled), "m={m} theta={other}");
                }
            }
        }
        assert!(seen_theta.iter().all(|&s| s), "m={m}: theta coverage {seen_theta:?}");
    }
}

#[test]
fn dft_round_trip_on_random_vectors() {
    use cyclodiff::polysys::{dft, Direction};
    for m in [4u64, 6] {
        let v: Vec<QCyc> = (0..m as i64)
            .map(|i| &QCyc::zeta_pow(m, i * i) + &QCyc::from_int(1, i - 2))
            .collect();
        let back = dft(&dft(&v, Direction::Forward), Direction::Inverse);
        assert!(v.iter().zip(&back).all(|(a, b)| a.same_value(b)));
    }
}

#[test]
fn gauss_tuples_of_even_difference_sets_solve_the_system() {
    for (q, m, modified) in [(7, 2, false), (11, 2, false), (37, 4, false), (101, 4, false), (73, 8, false), (13, 4, true)] {
        let f = field_of_order(q).unwrap();
        let sol = gauss_solution(&f, m, modified).unwrap();
        assert!(!sol.non_solution_expected);
        let res = verify_solution(&gen_g_system(m).unwrap(), &sol, VerifyMode::ScaledExact).unwrap();
        assert!(res.all_zero, "q={q} m={m} modified={modified}");
        assert!(on_variety(&unscale(&sol).unwrap()));
    }
}

#[test]
fn gauss_tuples_of_non_difference_sets_fail() {
    for (q, m, modified) in [(29, 4, false), (13, 4, false), (31, 6, false), (41, 8, false)] {
        let f = field_of_order(q).unwrap();
        let sol = gauss_solution(&f, m, modified).unwrap();
        assert!(sol.non_solution_expected);
        let res = verify_solution(&gen_g_system(m).unwrap(), &sol, VerifyMode::ScaledExact).unwrap();
        assert!(!res.all_zero, "q={q} m={m}");
    }
}

#[test]
fn explicit_family_through_m22() {
    for m in (4..=22).step_by(2) {
        let sol = explicit_solution(m).unwrap();
        assert!(sol.exact_values().unwrap()[0].same_value(&QCyc::from_int(1, m as i64 / 2 - 1)));
        assert!(on_variety(&sol), "m={m}");
    }
}
