use num::Zero;
use palmcheck::instance::{build, generate, mutate, standard, InstanceFile, Limits, Mutation};
use palmcheck::suite::{run_suite, Suite, SuiteOptions};
use proptest::prelude::*;

fn exact(file: &InstanceFile) -> Vec<palmcheck::CheckReport> {
    let inst = build(file, &Limits::default()).unwrap();
    Suite::EXACT
        .iter()
        .flat_map(|&s| run_suite(&inst, s, &SuiteOptions::default()).unwrap())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn every_seed_passes_the_exact_suites(seed in 0u64..1_000_000) {
        let file = generate(&standard(seed)).unwrap();
        for r in exact(&file) {
            prop_assert!(r.is_pass(), "seed {}: {}", seed, r.summary_line());
            prop_assert!(r.residual.as_exact().is_some_and(Zero::is_zero));
        }
    }

    #[test]
    fn mutations_hit_their_target_for_every_seed(seed in 0u64..1_000_000, k in 1usize..5) {
        let kind = Mutation::ALL[k];
        let file = generate(&standard(seed)).unwrap();
        match mutate(&file, kind) {
            Err(palmcheck::Error::MutationNotApplicable(_)) => {}
            Err(e) => prop_assert!(false, "{}", e),
            Ok(m) => {
                let (target, status) = kind.target().unwrap();
                let reports = exact(&m);
                let r = reports.iter().find(|r| r.check_name == target).unwrap();
                prop_assert_eq!(r.status, status, "seed {}: {}", seed, r.summary_line());
                prop_assert!(r.witness.is_some());
            }
        }
    }

    #[test]
    fn instance_files_survive_a_json_round_trip(seed in 0u64..1_000_000) {
        let file = generate(&standard(seed)).unwrap();
        let back = InstanceFile::from_json(&file.to_json()).unwrap();
        prop_assert_eq!(back.digest(), file.digest());
        prop_assert_eq!(back, file);
    }
}
