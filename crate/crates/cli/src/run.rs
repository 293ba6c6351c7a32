//! Parameter preparation and parallel suite execution.

use leonard_trio::battery::{draw_battery, draw_one, RationalSampler};
use leonard_trio::report::{CheckRecord, VerificationReport};
use leonard_trio::suites::{run_suites, Mode, Suite};
use leonard_trio::{Error, ParameterSet};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Parameters, RunConfig};
use crate::CliError;

/// Height bound for replacements of explicit sets that fail genericity.
pub const RESAMPLE_HEIGHT: u64 = 9;

#[derive(Clone, Debug, Serialize)]
pub struct InstanceReport {
    pub instance: usize,
    pub records: Vec<CheckRecord>,
}

/// All records one suite produced, instance by instance.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteStream {
    pub suite: Suite,
    pub passed: bool,
    pub instances: Vec<InstanceReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunOutcome {
    pub mode: String,
    pub passed: bool,
    pub checks: usize,
    pub failures: usize,
    /// Reasons parameter sets were rejected and redrawn.
    pub resampled: Vec<String>,
    pub suites: Vec<SuiteStream>,
}

fn validator(suites: &[Suite]) -> impl Fn(&ParameterSet) -> leonard_trio::Result<()> + '_ {
    move |ps| suites.iter().try_for_each(|s| s.validate(ps))
}

fn lift(e: Error) -> CliError {
    match e {
        Error::GenericityExhausted { .. } => CliError::Exhausted(e.to_string()),
        other => CliError::Config(other.to_string()),
    }
}

/// Builds the parameter sets, replacing non-generic explicit sets by draws
/// at the same `q` and `N`.
pub fn prepare(cfg: &RunConfig) -> Result<(Vec<ParameterSet>, Vec<String>), CliError> {
    let validate = validator(&cfg.suites);
    match &cfg.parameters {
        Parameters::Seeded(spec) => {
            let mut spec = spec.clone();
            spec.max_attempts = cfg.attempts();
            let battery = draw_battery(&spec, &validate).map_err(lift)?;
            Ok((battery.sets, battery.resampled))
        }
        Parameters::Sets(literals) => {
            let mut sampler = RationalSampler::new(cfg.seed, RESAMPLE_HEIGHT);
            let mut sets = Vec::with_capacity(literals.len());
            let mut resampled = Vec::new();
            for (i, lit) in literals.iter().enumerate() {
                match lit.build().and_then(|ps| validate(&ps).map(|_| ps)) {
                    Ok(ps) => sets.push(ps),
                    Err(e @ (Error::Genericity { .. } | Error::Pole { .. })) => {
                        log::warn!(
                            "parameter set {i} rejected ({e}); resampling at q = {}, N = {}",
                            lit.q,
                            lit.n
                        );
                        resampled.push(format!("set {i}: {e}"));
                        let ps = draw_one(
                            &mut sampler,
                            &lit.q,
                            lit.n,
                            cfg.attempts(),
                            &validate,
                            &mut resampled,
                        )
                        .map_err(lift)?;
                        sets.push(ps);
                    }
                    Err(e) => return Err(CliError::Config(format!("parameter set {i}: {e}"))),
                }
            }
            Ok((sets, resampled))
        }
    }
}

/// Runs every `(instance, suite)` pair in parallel and assembles sorted streams.
pub fn run(cfg: &RunConfig, mode: Mode) -> Result<RunOutcome, CliError> {
    cfg.validate(mode)?;
    let (sets, resampled) = prepare(cfg)?;
    let mut suites = cfg.suites.clone();
    suites.sort();
    suites.dedup();
    let jobs: Vec<(usize, Suite)> = suites
        .iter()
        .flat_map(|s| (0..sets.len()).map(move |i| (i, *s)))
        .collect();
    let mut results: Vec<(Suite, usize, VerificationReport)> = jobs
        .par_iter()
        .map(|&(i, suite)| {
            let mut rep = run_suites(&sets[i], &[suite], mode);
            rep.sort();
            if !cfg.record_timings {
                rep.zero_timings();
            }
            (suite, i, rep)
        })
        .collect();
    results.sort_by_key(|(s, i, _)| (*s, *i));

    let mut streams: Vec<SuiteStream> = Vec::new();
    for (suite, i, rep) in results {
        if streams.last().map(|s| s.suite) != Some(suite) {
            streams.push(SuiteStream {
                suite,
                passed: true,
                instances: Vec::new(),
            });
        }
        let stream = streams.last_mut().expect("pushed above");
        stream.passed &= rep.all_pass();
        stream.instances.push(InstanceReport {
            instance: i,
            records: rep.records,
        });
    }
    let records = streams
        .iter()
        .flat_map(|s| &s.instances)
        .flat_map(|r| &r.records);
    let checks = records.clone().count();
    let failures = records.filter(|r| !r.passed()).count();
    Ok(RunOutcome {
        mode: mode.to_string(),
        passed: failures == 0 && checks > 0,
        checks,
        failures,
        resampled,
        suites: streams,
    })
}
