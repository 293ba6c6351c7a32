use leonard_trio::battery::{draw_battery, BatterySpec, DEFAULT_MAX_ATTEMPTS};
use leonard_trio::suites::{run_suites, Mode, Suite};
use leonard_trio::{Error, ParameterSet, Scalar};

fn validate_all(ps: &ParameterSet) -> Result<(), Error> {
    Suite::ALL.iter().try_for_each(|s| s.validate(ps))
}

#[test]
fn every_suite_passes_on_a_seeded_battery() {
    let spec = BatterySpec {
        seed: 11,
        count: 4,
        q_choices: vec![
            Scalar::ratio(3, 5),
            Scalar::ratio(2, 7),
            Scalar::ratio(-1, 3),
        ],
        n_choices: vec![2, 3, 4],
        height: 9,
        max_attempts: DEFAULT_MAX_ATTEMPTS,
    };
    let battery = draw_battery(&spec, &validate_all).unwrap();
    for ps in &battery.sets {
        let rep = run_suites(ps, &Suite::ALL, Mode::Float(256));
        let bad: Vec<String> = rep
            .failures()
            .map(|r| {
                format!(
                    "{} N={} {:?} residual={} {:?}",
                    r.identity, r.n, r.params, r.max_residual, r.detail
                )
            })
            .collect();
        assert!(bad.is_empty(), "{}", bad.join("\n"));
    }
}
