mod support;

use proptest::prelude::*;
use rainbow_core::generators::random_colored;
use rainbow_core::harness::{run_instance, SweepRecord};
use rainbow_core::oracle::all_longest_paths;
use rainbow_core::{degree_bound, parse_ecg, serialize_ecg, union_bound, GenSpec};
use support::{check_minimal_repeat, check_rotation, PremiseTally};

fn small_graph() -> impl Strategy<Value = GenSpec> {
    (2usize..=8, 0.3f64..=1.0, 2u64..=10, any::<u64>()).prop_map(|(n, p, c, seed)| {
        GenSpec::Random {
            n,
            p: (p * 100.0).round() / 100.0,
            c,
            seed,
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn longest_paths_satisfy_exchange_facts(spec in small_graph()) {
        let g = spec.generate().unwrap();
        let longest = all_longest_paths(&g).unwrap();
        let mut tally = PremiseTally::default();
        let mut bad = check_rotation(&g, &longest, &mut tally);
        bad.extend(check_minimal_repeat(&g, &longest, &mut tally));
        prop_assert!(bad.is_empty(), "{}\n{:?}", g, bad);
    }

    #[test]
    fn exact_length_meets_both_bounds(spec in small_graph()) {
        let g = spec.generate().unwrap();
        let r = run_instance(&g, u64::MAX).unwrap().report;
        prop_assert!(r.exact_length >= degree_bound(r.k));
        if let Some(s) = r.s {
            prop_assert!(r.exact_length >= union_bound(s));
        }
        prop_assert!(r.heuristic_length <= r.exact_length);
    }

    #[test]
    fn records_round_trip_and_replay(spec in small_graph()) {
        let g = spec.generate().unwrap();
        let run = run_instance(&g, u64::MAX).unwrap();
        let rec = SweepRecord::from_run(0, rainbow_core::harness::InstanceSource::Gen(spec), &g, &run, false);
        let line = serde_json::to_string(&rec).unwrap();
        let back: SweepRecord = serde_json::from_str(&line).unwrap();
        prop_assert_eq!(&back, &rec);
        prop_assert!(back.replay(u64::MAX).unwrap());
    }

    #[test]
    fn persisted_graph_files_reproduce_reports(n in 1usize..=9, p in 0.0f64..=1.0, c in 1u64..=12, seed in any::<u64>()) {
        let g = random_colored(n, p, c, seed);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.ecg");
        std::fs::write(&path, serialize_ecg(&g)).unwrap();
        let loaded = rainbow_core::harness::load_graph(&path).unwrap();
        prop_assert_eq!(&loaded, &g);
        prop_assert_eq!(parse_ecg(&serialize_ecg(&loaded)).unwrap(), g.clone());
        prop_assert_eq!(
            run_instance(&loaded, u64::MAX).unwrap().report,
            run_instance(&g, u64::MAX).unwrap().report
        );
    }
}
