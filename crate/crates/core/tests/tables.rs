use cyclodiff::groebner::{
    coherence, eliminate_with, f_table, probe_g0_zero, Aggregate, ElimMethod, ElimOptions, ProbeOutcome, TABULATED_M,
};
use cyclodiff::polysys::{export_system, gen_g_system, gen_ghat_system, parse_system, planar_system};
use cyclodiff::{IntPoly, Limits};
use proptest::prelude::*;

#[test]
fn m6_reproduces_the_stored_table() {
    let table = f_table(6).unwrap();
    for entry in &table.entries {
        let sys = gen_ghat_system(6, entry.theta as i64).unwrap();
        for method in [ElimMethod::Block, ElimMethod::Minpoly] {
            let opts = ElimOptions {
                method,
                ..ElimOptions::default()
            };
            let e = eliminate_with(&sys, Aggregate::MeanGhat, &opts).unwrap();
            assert_eq!(e.squarefree, entry.poly().squarefree_part().unwrap(), "theta={} {method:?}", entry.theta);
            // Every stored factor divides the computed generator.
            for f in &entry.factors {
                assert!(e.generator.div_exact(f).is_some(), "{f} does not divide {}", e.generator);
            }
        }
        let (outcome, _) = probe_g0_zero(&sys, &Limits::default()).unwrap();
        assert_eq!(outcome, ProbeOutcome::Empty);
    }
    // The g-level aggregate sees every theta at once.
    let g = eliminate_with(&gen_g_system(6).unwrap(), Aggregate::G0, &ElimOptions::default()).unwrap();
    assert_eq!(g.squarefree, table.product().squarefree_part().unwrap());
}

#[test]
fn fixture_coherence() {
    for m in TABULATED_M {
        let r = coherence(m).unwrap();
        assert!(r.vanishes_at_explicit_g0, "m={m}");
        assert_eq!(r.has_prime_power_factor, r.m_plus_one_prime_power, "m={m}");
        assert_eq!(r.has_x_factor, m == 10 || m == 18, "m={m}");
        assert!(r.gate_violations.is_empty(), "m={m}: {:?}", r.gate_violations);
    }
}

#[test]
fn m16_product_discrepancy_is_reported() {
    let r = coherence(16).unwrap();
    assert!(!r.product_matches);
    assert_eq!(r.product_extra, Some(IntPoly::from_i64(&[3, 0, 4])));
    assert_eq!(r.product_missing, None);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, ..ProptestConfig::default() })]
    #[test]
    fn system_text_round_trip(half in 1u64..12, theta in -30i64..30, level in 0u8..3) {
        let m = 2 * half;
        let sys = match level {
            0 => gen_g_system(m).unwrap(),
            1 => gen_ghat_system(m, theta).unwrap(),
            _ => planar_system(m).unwrap(),
        };
        let text = export_system(&sys);
        let back = parse_system(&text).unwrap();
        prop_assert_eq!(&back, &sys);
        prop_assert_eq!(export_system(&back), text);
    }
}
