use std::sync::OnceLock;

use proptest::prelude::*;
use regensim::engine::{reconstruct, renewal_scan, sample_window, tau_direct, tau_window};
use regensim::house_of_cards::rho_table;
use regensim::models::{BinaryArSpec, CoefficientTail, FiniteOrderSpec, Link};
use regensim::oracle::{brute_force_phi, InstanceGenerator};
use regensim::{Alphabet, Error, ExplicitUniforms, ThresholdSchedule, UniformField};

const DEEP: usize = 1_000_000;

fn logistic_tail() -> BinaryArSpec {
    let tail = CoefficientTail::Power {
        scale: 0.3,
        exponent: 2.5,
    };
    BinaryArSpec::new(0.2, vec![0.4, -0.2], Some(tail), Link::Logistic).unwrap()
}

// exact enumeration to depth 16 is slow enough to build once
fn logistic_schedule() -> &'static ThresholdSchedule {
    static SCHEDULE: OnceLock<ThresholdSchedule> = OnceLock::new();
    SCHEDULE.get_or_init(|| logistic_tail().schedule().unwrap())
}

fn schedules() -> &'static [ThresholdSchedule] {
    static ALL: OnceLock<Vec<ThresholdSchedule>> = OnceLock::new();
    ALL.get_or_init(|| {
        vec![
            ThresholdSchedule::geometric(0.5, 0.5).unwrap(),
            ThresholdSchedule::power(0.5, 2.0).unwrap(),
            ThresholdSchedule::finite_memory(vec![0.3, 0.6, 0.8]).unwrap(),
            logistic_schedule().clone(),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn recursion_agrees_with_definition(seed in any::<u64>(), s in -30i64..30, len in 0i64..10, which in 0usize..4) {
        let schedule = &schedules()[which];
        let field = UniformField::new(seed);
        let rec = tau_window(s, s + len, &field, schedule, DEEP).unwrap();
        prop_assert_eq!(tau_direct(s, s + len, &field, schedule, DEEP).unwrap(), rec.tau);
        prop_assert_eq!(rec.uniforms_consumed as i64, s + len - rec.tau + 1);
    }

    #[test]
    fn outside_uniforms_do_not_matter(seed in any::<u64>(), len in 0i64..6, noise in any::<u64>()) {
        let spec = logistic_tail();
        let schedule = logistic_schedule();
        let field = UniformField::new(seed);
        let (s, t) = (0, len);
        let base = sample_window(s, t, &field, &spec, schedule, DEEP).unwrap();
        let tau = base.record.tau;
        let mut u = ExplicitUniforms::from_field(&field, tau - 50, t + 50);
        let other = UniformField::new(noise);
        for i in (tau - 50..tau).chain(t + 1..=t + 50) {
            u.set(i, other.uniform_at(i));
        }
        let moved = sample_window(s, t, &u, &spec, schedule, DEEP).unwrap();
        prop_assert_eq!(moved.symbols, base.symbols);
        prop_assert_eq!(moved.record, base.record);
    }

    #[test]
    fn deterministic(seed in any::<u64>(), s in -10i64..10, len in 0i64..8) {
        let spec = logistic_tail();
        let schedule = logistic_schedule();
        let a = sample_window(s, s + len, &UniformField::new(seed), &spec, schedule, DEEP).unwrap();
        let b = sample_window(s, s + len, &UniformField::new(seed), &spec, schedule, DEEP).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn lower_schedule_same_symbols(seed in any::<u64>(), len in 0i64..6, shrink in 0.5f64..1.0) {
        let spec = BinaryArSpec::logistic(0.0, vec![0.5, 0.25, -0.2]).unwrap();
        let upper = spec.schedule().unwrap();
        let lowered: Vec<f64> = upper.prefix().iter().map(|a| a * shrink).collect();
        let lower = ThresholdSchedule::finite_memory(lowered).unwrap();
        let field = UniformField::new(seed);
        let hi = sample_window(0, len, &field, &spec, &upper, DEEP).unwrap();
        let lo = sample_window(0, len, &field, &spec, &lower, DEEP).unwrap();
        prop_assert!(lo.record.tau <= hi.record.tau);
        prop_assert_eq!(lo.symbols, hi.symbols);
    }

    #[test]
    fn oracle_matches_on_random_instances(seed in any::<u64>()) {
        let inst = InstanceGenerator::new(seed, 4, 3, 8).next_instance();
        let schedule = inst.spec.schedule().unwrap();
        let field = UniformField::new(inst.field_seed);
        let u = ExplicitUniforms::from_field(&field, inst.s - 5000, inst.t);
        let engine = sample_window(inst.s, inst.t, &u, &inst.spec, &schedule, 5000).unwrap();
        prop_assert_eq!(Some(engine.symbols), brute_force_phi(&u, &inst.spec, &schedule, inst.s, inst.t));
    }
}

#[test]
fn truncated_field_is_undefined_for_both() {
    // a* = (0.7, 1, ...); u_0 >= 0.7 needs one site before the start
    let spec = FiniteOrderSpec::new(
        Alphabet::binary_signs(),
        1,
        vec![vec![0.55, 0.45], vec![0.25, 0.75]],
    )
    .unwrap();
    let schedule = spec.schedule().unwrap();
    let u = ExplicitUniforms::new(0, vec![0.95, 0.1]);
    assert!(matches!(
        sample_window(0, 1, &u, &spec, &schedule, 100),
        Err(Error::Aborted { .. })
    ));
    assert_eq!(brute_force_phi(&u, &spec, &schedule, 0, 1), None);
}

#[test]
fn reconstruction_covers_from_tau() {
    let spec = logistic_tail();
    let schedule = spec.schedule().unwrap();
    let field = UniformField::new(31);
    let rec = tau_window(-4, 4, &field, &schedule, DEEP).unwrap();
    let full = reconstruct(&rec, &field, &spec).unwrap();
    let window = sample_window(-4, 4, &field, &spec, &schedule, DEEP).unwrap();
    assert_eq!(full.len() as i64, 4 - rec.tau + 1);
    assert_eq!(&full[(-4 - rec.tau) as usize..], &window.symbols[..]);
}

#[test]
fn renewal_gaps_in_finite_memory_are_geometric() {
    // with a* = (a, 1, 1, ...) renewals are i.i.d. Bernoulli(a), so
    // P(gap > m) = (1 - a)^m, which is rho_m for this schedule
    let schedule = ThresholdSchedule::finite_memory(vec![0.4]).unwrap();
    let table = rho_table(&schedule, 10).unwrap();
    for m in 0..=10 {
        assert!((table.rho[m] - 0.6f64.powi(m as i32)).abs() < 1e-14);
    }
    let report = renewal_scan(0, 200_000, &UniformField::new(1), &schedule).unwrap();
    let gaps = report.gaps();
    let n = gaps.len() as f64;
    for m in 1..=10usize {
        let emp = gaps.iter().filter(|&&g| g > m as i64).count() as f64 / n;
        let se = (table.rho[m] * (1.0 - table.rho[m]) / n).sqrt();
        assert!(
            (emp - table.rho[m]).abs() <= 4.0 * se,
            "m = {m}: {emp} vs {}",
            table.rho[m]
        );
    }
    assert!(report
        .times
        .iter()
        .all(|r| !r.censored || r.time == 200_000));
}

#[test]
fn renewal_blocks_tile_the_stretch() {
    let spec = logistic_tail();
    let schedule = ThresholdSchedule::geometric(0.5, 0.5).unwrap();
    let field = UniformField::new(8);
    let report = renewal_scan(0, 400, &field, &schedule).unwrap();
    let first = report.times[0].time;
    let last = report.times.last().unwrap().time;
    assert_eq!(report.blocks.first().unwrap().0, first);
    assert_eq!(report.blocks.last().unwrap().1, last - 1);
    let sample =
        sample_window(first, last, &field, &spec, &spec.schedule().unwrap(), DEEP).unwrap();
    let blocks = report.block_symbols(first, &sample.symbols);
    assert_eq!(
        blocks.iter().map(|b| b.len()).sum::<usize>() as i64,
        last - first
    );
}
