//! One PASS/FAIL line per acceptance criterion. Budgets are wall-clock
//! limits for the checks themselves; battery draws are timed separately.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use leonard_trio::battery::{draw_battery, BatterySpec, DEFAULT_MAX_ATTEMPTS};
use leonard_trio::limits::{
    ReducedForm, ReducedSequences, LADDER_EXPONENTS, LADDER_MIN_RATIO, LADDER_PRECISION,
};
use leonard_trio::report::VerificationReport;
use leonard_trio::suites::{run_suites, Mode, Suite};
use leonard_trio::trio::{build_realization, overlap_w_sum, w00_closed};
use leonard_trio::{ParameterSet, Result, Scalar};

const MAIN_SEED: u64 = 20_240_601;
const MAIN_COUNT: usize = 8;
const ORTHO_SEED: u64 = 7_001;
const ORTHO_COUNT: usize = 20;
const SUMMATION_SEED: u64 = 7_005;
const RACAH_SEED: u64 = 7_009;
const TEN_INSTANCES: usize = 10;
const CLASSIFIER_SEED: u64 = 7_011;

fn q_choices() -> Vec<Scalar> {
    ["3/5", "2/7", "-1/3", "5/2", "-4/9"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect()
}

fn battery(seed: u64, count: usize, ns: &[usize], suites: &[Suite]) -> Result<Vec<ParameterSet>> {
    let spec = BatterySpec {
        seed,
        count,
        q_choices: q_choices(),
        n_choices: ns.to_vec(),
        height: 9,
        max_attempts: DEFAULT_MAX_ATTEMPTS,
    };
    Ok(draw_battery(&spec, &|ps| suites.iter().try_for_each(|s| s.validate(ps)))?.sets)
}

struct Verdict {
    passed: bool,
    detail: String,
}

fn from_reports(reports: &[VerificationReport], required: &[&str]) -> Verdict {
    let mut checks = 0;
    let mut failures = Vec::new();
    for rep in reports {
        checks += rep.records.len();
        failures.extend(
            rep.failures()
                .map(|r| format!("{} (N = {}, residual {})", r.identity, r.n, r.max_residual)),
        );
        for id in required {
            if !rep.records.iter().any(|r| r.identity.starts_with(id)) {
                failures.push(format!("{id} not checked"));
            }
        }
    }
    let passed = failures.is_empty() && checks > 0;
    let detail = if passed {
        format!(
            "{} reports, {checks} checks, all residuals exactly zero",
            reports.len()
        )
    } else {
        format!(
            "{} of {checks} checks failed; first: {}",
            failures.len(),
            failures.first().cloned().unwrap_or_default()
        )
    };
    Verdict { passed, detail }
}

fn run(sets: &[ParameterSet], suites: &[Suite], mode: Mode) -> Vec<VerificationReport> {
    sets.iter().map(|ps| run_suites(ps, suites, mode)).collect()
}

fn only(mut reps: Vec<VerificationReport>, prefix: &str) -> Vec<VerificationReport> {
    for rep in &mut reps {
        rep.records.retain(|r| r.identity.starts_with(prefix));
    }
    reps
}

fn criterion_one() -> Result<Verdict> {
    let sets = battery(ORTHO_SEED, ORTHO_COUNT, &[2, 3, 4, 5], &[Suite::Qaskey])?;
    let reps = only(run(&sets, &[Suite::Qaskey], Mode::Exact), "qaskey.rho");
    let reps: Vec<_> = reps
        .into_iter()
        .map(|mut rep| {
            rep.records
                .retain(|r| r.identity.ends_with("orthogonality"));
            rep
        })
        .collect();
    Ok(from_reports(
        &reps,
        &["qaskey.rho.orthogonality", "qaskey.rho-tilde.orthogonality"],
    ))
}

fn criterion_eight(sets: &[ParameterSet]) -> Result<Verdict> {
    let mut bad = Vec::new();
    for ps in sets {
        let closed = w00_closed(ps);
        let summed = overlap_w_sum(ps, 0, 0)?;
        if closed != summed {
            bad.push(format!("N = {}: closed {closed} vs overlap {summed}", ps.n));
        }
    }
    Ok(Verdict {
        passed: bad.is_empty(),
        detail: if bad.is_empty() {
            format!(
                "{} instances, closed form equals the overlap sum exactly",
                sets.len()
            )
        } else {
            bad.join("; ")
        },
    })
}

fn seqs(xi: Vec<Scalar>, la: Vec<Scalar>) -> ReducedSequences {
    ReducedSequences::new(xi, la).expect("distinct test sequences")
}

/// Generated q-red, l-red and mixed-form sequences with the expected verdicts.
fn classifier_cases() -> Vec<(String, ReducedSequences, bool, ReducedForm)> {
    let mut cases = Vec::new();
    let mut sampler = leonard_trio::battery::RationalSampler::new(CLASSIFIER_SEED, 9);
    let pw = |q: &Scalar, e: i64| q.pow(e);
    for k in 0..6 {
        let q = sampler.pick(&q_choices()).clone();
        let len = 4 + k % 3;
        let (a0, a1, a3, a4) = (
            sampler.nonzero(),
            sampler.nonzero(),
            sampler.nonzero(),
            sampler.nonzero(),
        );
        let up: Vec<Scalar> = (0..len as i64).map(|x| &a0 + &a1 * pw(&q, x)).collect();
        let down: Vec<Scalar> = (0..len as i64).map(|x| &a3 + &a4 * pw(&q, -x)).collect();
        cases.push((
            format!("q-red #{k}"),
            seqs(up.clone(), down.clone()),
            true,
            ReducedForm::QRed,
        ));
        cases.push((
            format!("q-red swapped #{k}"),
            seqs(down, up),
            true,
            ReducedForm::QRed,
        ));
        let lin: Vec<Scalar> = (0..len as i64)
            .map(|x| &a0 + &a1 * Scalar::int(x))
            .collect();
        let lin2: Vec<Scalar> = (0..len as i64)
            .map(|x| &a3 + &a4 * Scalar::int(x))
            .collect();
        cases.push((
            format!("l-red #{k}"),
            seqs(lin.clone(), lin2),
            true,
            ReducedForm::LRed,
        ));
        let mixed: Vec<Scalar> = (0..len as i64).map(|x| pw(&q, -x) + pw(&q, x)).collect();
        cases.push((
            format!("mixed #{k}"),
            seqs(mixed, lin),
            false,
            ReducedForm::Other,
        ));
        let alternating: Vec<Scalar> = (0..len as i64)
            .map(|x| Scalar::int(if x % 2 == 0 { 1 } else { -1 }) * Scalar::int(x + 1))
            .collect();
        let affine: Vec<Scalar> = (0..len as i64).map(|x| &a3 + Scalar::int(x)).collect();
        cases.push((
            format!("alternating #{k}"),
            seqs(alternating, affine),
            false,
            ReducedForm::Other,
        ));
    }
    let q = Scalar::ratio(3, 5);
    let gd = q.pow(-4) * Scalar::int(2);
    cases.push((
        "(q^-x, gamma delta q^(x+1))".into(),
        seqs(
            (0..4).map(|x| q.pow(-x)).collect(),
            (0..4).map(|x| &gd * q.pow(x + 1)).collect(),
        ),
        true,
        ReducedForm::QRed,
    ));
    cases.push((
        "(x, x)".into(),
        seqs(
            (0..4).map(Scalar::int).collect(),
            (0..4).map(Scalar::int).collect(),
        ),
        true,
        ReducedForm::LRed,
    ));
    cases
}

fn criterion_eleven(sets: &[ParameterSet]) -> Result<Verdict> {
    let reps = run(sets, &[Suite::Reduced], Mode::Exact);
    let base = from_reports(
        &reps,
        &[
            "reduced-lp.v-eigen",
            "reduced-lp.z-action",
            "reduced-lp.r-vanishes-above-diagonal",
        ],
    );
    let mut wrong = Vec::new();
    let cases = classifier_cases();
    for (label, s, compatible, form) in &cases {
        let c = s.classify();
        if c.compatible != *compatible || c.form != *form {
            wrong.push(format!("{label}: got {:?}", c));
        }
    }
    Ok(Verdict {
        passed: base.passed && wrong.is_empty(),
        detail: format!(
            "{}; classifier {} of {} cases correct{}",
            base.detail,
            cases.len() - wrong.len(),
            cases.len(),
            wrong
                .first()
                .map(|w| format!(", first miss {w}"))
                .unwrap_or_default()
        ),
    })
}

fn criterion_twelve(sets: &[ParameterSet]) -> Verdict {
    let reps = only(
        run(sets, &[Suite::LimitLadders], Mode::Float(LADDER_PRECISION)),
        "ladder.",
    );
    let mut v = from_reports(
        &reps,
        &[
            "ladder.racah-s-to-0",
            "ladder.r1-alpha-to-0",
            "ladder.r3-alpha-to-0",
            "ladder.r-limit-beta-to-0",
        ],
    );
    if v.passed {
        v.detail = format!(
            "{} instances x 4 limits, t = 10^-k for k in {:?}, every ratio >= {} at {} bits",
            reps.len(),
            LADDER_EXPONENTS,
            LADDER_MIN_RATIO,
            LADDER_PRECISION
        );
    }
    v
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion {
            id: 1,
            name: "q-Racah orthogonality (full Gram check)",
            budget: secs(10),
        },
        Criterion {
            id: 2,
            name: "trio axiom band predicates with negative probe",
            budget: secs(10),
        },
        Criterion {
            id: 3,
            name: "Heun relations as zero matrices",
            budget: secs(20),
        },
        Criterion {
            id: 4,
            name: "constraint equations, root sets, nonzero conditions",
            budget: secs(10),
        },
        Criterion {
            id: 5,
            name: "summation formula two routes, N in 2..4, 10 instances",
            budget: secs(60),
        },
        Criterion {
            id: 6,
            name: "biorthogonality of the overlap matrices",
            budget: secs(5),
        },
        Criterion {
            id: 7,
            name: "both GEVPs from matrices, closed forms and Wilson tables",
            budget: secs(30),
        },
        Criterion {
            id: 8,
            name: "w_0(0) closed form",
            budget: secs(1),
        },
        Criterion {
            id: 9,
            name: "Racah relation on full grids, N in 2..3, 10 instances",
            budget: secs(30),
        },
        Criterion {
            id: 10,
            name: "R1 two routes and R_I relations; H1 relations and Z evidence",
            budget: secs(30),
        },
        Criterion {
            id: 11,
            name: "reduced classifier and reduced Leonard pair",
            budget: secs(10),
        },
        Criterion {
            id: 12,
            name: "float limit ladders",
            budget: secs(60),
        },
    ];

    let draw_start = Instant::now();
    let main_suites = [
        Suite::TrioAxioms,
        Suite::Heun,
        Suite::Constraints,
        Suite::Biorthogonality,
        Suite::Gevp,
        Suite::Wilson,
        Suite::R1,
        Suite::H1,
        Suite::Reduced,
        Suite::LimitLadders,
    ];
    let main = match battery(MAIN_SEED, MAIN_COUNT, &[2, 3, 4], &main_suites) {
        Ok(sets) => sets,
        Err(e) => {
            println!("FAIL battery: {e}");
            return ExitCode::FAILURE;
        }
    };
    println!(
        "battery: {} instances drawn in {:.2?}",
        main.len(),
        draw_start.elapsed()
    );

    // Build once so criteria 2, 3, 6 and 7 time only their own checks.
    let realizations: Vec<_> = main
        .iter()
        .map(|ps| build_realization(ps).map(|tr| (ps, tr)))
        .collect();

    let mut all_ok = true;
    for c in &criteria {
        let start = Instant::now();
        let verdict: Result<Verdict> = (|| {
            let per_realization = |f: &dyn Fn(
                &leonard_trio::trio::TrioRealization,
            ) -> VerificationReport|
             -> Result<Vec<_>> {
                realizations
                    .iter()
                    .map(|r| r.as_ref().map(|(_, tr)| f(tr)).map_err(Clone::clone))
                    .collect()
            };
            Ok(match c.id {
                1 => criterion_one()?,
                2 => from_reports(
                    &per_realization(&|tr| tr.verify_trio_axioms())?,
                    &["lt.probe.vt-not-tridiagonal-in-v-basis"],
                ),
                3 => from_reports(
                    &per_realization(&|tr| {
                        tr.verify_heun_relations(&leonard_trio::trio::HeunConstants::new(
                            &tr.params,
                        ))
                    })?,
                    &["heun."],
                ),
                4 => from_reports(
                    &run(&main, &[Suite::Constraints], Mode::Exact),
                    &["constraints.root-sets"],
                ),
                5 => {
                    let sets = battery(
                        SUMMATION_SEED,
                        TEN_INSTANCES,
                        &[2, 3, 4],
                        &[Suite::Summation],
                    )?;
                    from_reports(
                        &run(&sets, &[Suite::Summation], Mode::Exact),
                        &["summation.two-routes"],
                    )
                }
                6 => {
                    let reps: Vec<_> = per_realization(&|tr| tr.verify_biorthogonality())?;
                    from_reports(&reps, &["biorthogonality."])
                }
                7 => {
                    let mut reps = per_realization(&|tr| tr.verify_gevp_from_matrices())?;
                    reps.extend(run(&main, &[Suite::Wilson], Mode::Exact));
                    from_reports(&reps, &[])
                }
                8 => criterion_eight(&main)?,
                9 => {
                    let sets =
                        battery(RACAH_SEED, TEN_INSTANCES, &[2, 3], &[Suite::RacahRelation])?;
                    from_reports(
                        &run(&sets, &[Suite::RacahRelation], Mode::Exact),
                        &["racah-relation.grid"],
                    )
                }
                10 => from_reports(
                    &run(&main, &[Suite::R1, Suite::H1], Mode::Exact),
                    &[
                        "r1.two-routes",
                        "r1.two-term-difference",
                        "h1.two-term-difference",
                        "h1.z-not-diagonalizable",
                    ],
                ),
                11 => criterion_eleven(&main)?,
                12 => criterion_twelve(&main),
                _ => unreachable!(),
            })
        })();
        let elapsed = start.elapsed();
        let (passed, detail) = match verdict {
            Ok(v) => (v.passed, v.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let in_budget = elapsed <= c.budget;
        let ok = passed && in_budget;
        all_ok &= ok;
        println!(
            "{} criterion {}: {} [{:.2?} of {:?} budget{}] {}",
            if ok { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            elapsed,
            c.budget,
            if in_budget { "" } else { ", OVER BUDGET" },
            detail
        );
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
