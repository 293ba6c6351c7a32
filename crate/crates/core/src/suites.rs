//! Named groups of checks, run per parameter set.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::{
    build_reduced_lp, verify_limit_ladders, H1Params, R1Params, R3Params, RacahRelation,
    ReducedForm, ReducedSequences,
};
use crate::params::ParameterSet;
use crate::qaskey::{dual_qhahn_eval, qracah_eval_raw, QRacahParams, RLimitParams};
use crate::qseries::PochhammerCache;
use crate::report::{Outcome, Recorder, VerificationReport};
use crate::scalar::Scalar;
use crate::trio::{
    build_realization, verify_constraint_equations, verify_summation_formula, verify_wilson_gevps,
    w00_closed, HeunConstants, TrioRealization,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Qaskey,
    Wilson,
    TrioAxioms,
    Heun,
    Gevp,
    Summation,
    Biorthogonality,
    RacahRelation,
    R1,
    H1,
    R3,
    Reduced,
    Constraints,
    LimitLadders,
}

impl Suite {
    pub const ALL: [Suite; 14] = [
        Suite::Qaskey,
        Suite::Wilson,
        Suite::TrioAxioms,
        Suite::Heun,
        Suite::Gevp,
        Suite::Summation,
        Suite::Biorthogonality,
        Suite::RacahRelation,
        Suite::R1,
        Suite::H1,
        Suite::R3,
        Suite::Reduced,
        Suite::Constraints,
        Suite::LimitLadders,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Qaskey => "qaskey",
            Suite::Wilson => "wilson",
            Suite::TrioAxioms => "trio-axioms",
            Suite::Heun => "heun",
            Suite::Gevp => "gevp",
            Suite::Summation => "summation",
            Suite::Biorthogonality => "biorthogonality",
            Suite::RacahRelation => "racah-relation",
            Suite::R1 => "r1",
            Suite::H1 => "h1",
            Suite::R3 => "r3",
            Suite::Reduced => "reduced",
            Suite::Constraints => "constraints",
            Suite::LimitLadders => "limit-ladders",
        }
    }

    pub fn needs_float(&self) -> bool {
        matches!(self, Suite::LimitLadders)
    }

    fn needs_realization(&self) -> bool {
        matches!(
            self,
            Suite::TrioAxioms | Suite::Heun | Suite::Gevp | Suite::Biorthogonality
        )
    }

    /// Extra genericity the suite needs beyond the trio scan.
    pub fn validate(&self, ps: &ParameterSet) -> Result<()> {
        match self {
            Suite::RacahRelation => RacahRelation::new(ps).map(drop),
            Suite::R1 => R1Params::from_trio(ps).map(drop),
            Suite::H1 => H1Params::from_trio(ps).map(drop),
            Suite::R3 => r3_from_trio(ps).map(drop),
            Suite::Reduced => build_reduced_lp(&r_limit_from_trio(ps)?).map(drop),
            Suite::LimitLadders => {
                RacahRelation::new(ps)?;
                R1Params::from_trio(ps)?;
                r3_from_trio(ps)?;
                r_limit_from_trio(ps).map(drop)
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s}")))
    }
}

/// Arithmetic used by the limit ladders; the exact suites ignore it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float(usize),
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "exact" {
            return Ok(Mode::Exact);
        }
        let bits = s
            .strip_prefix("float:")
            .and_then(|b| b.parse::<usize>().ok())
            .filter(|b| *b >= 16)
            .ok_or_else(|| Error::Parse(format!("mode must be exact or float:<bits>, got {s}")))?;
        Ok(Mode::Float(bits))
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => f.write_str("exact"),
            Mode::Float(b) => write!(f, "float:{b}"),
        }
    }
}

/// The `R3` family at `sigma = s`.
pub fn r3_from_trio(ps: &ParameterSet) -> Result<R3Params> {
    R3Params::new(ps.s.clone(), ps.delta.clone(), ps.q.clone(), ps.n)
}

pub fn r_limit_from_trio(ps: &ParameterSet) -> Result<RLimitParams> {
    RLimitParams::new(ps.alpha.clone(), ps.delta.clone(), ps.q.clone(), ps.n)
}

fn grid(nn: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..=nn).flat_map(move |n| (0..=nn).map(move |x| (n, x)))
}

fn recorder(ps: &ParameterSet) -> Recorder {
    Recorder::new(ps.fingerprint(), ps.n)
}

/// Runs `suites` on one parameter set, building the realization once.
pub fn run_suites(ps: &ParameterSet, suites: &[Suite], mode: Mode) -> VerificationReport {
    let mut report = VerificationReport::new();
    let realization = if suites.iter().any(Suite::needs_realization) {
        Some(build_realization(ps))
    } else {
        None
    };
    for suite in suites {
        let part = match (suite.needs_realization(), &realization) {
            (true, Some(Ok(tr))) => run_on_realization(*suite, tr),
            (true, Some(Err(e))) => {
                let mut rec = recorder(ps);
                let e = e.clone();
                rec.run(
                    &format!("{suite}.realization"),
                    "build the trio matrices and bases",
                    || Err(e),
                );
                rec.finish()
            }
            _ => run_suite(*suite, ps, mode),
        };
        report.extend(part);
    }
    report
}

fn run_on_realization(suite: Suite, tr: &TrioRealization) -> VerificationReport {
    match suite {
        Suite::TrioAxioms => tr.verify_trio_axioms(),
        Suite::Heun => tr.verify_heun_relations(&HeunConstants::new(&tr.params)),
        Suite::Gevp => tr.verify_gevp_from_matrices(),
        Suite::Biorthogonality => tr.verify_biorthogonality(),
        other => run_suite(other, &tr.params, Mode::Exact),
    }
}

/// Runs one suite; realization-based suites build their own matrices.
pub fn run_suite(suite: Suite, ps: &ParameterSet, mode: Mode) -> VerificationReport {
    match suite {
        Suite::TrioAxioms | Suite::Heun | Suite::Gevp | Suite::Biorthogonality => {
            run_suites(ps, &[suite], mode)
        }
        Suite::Qaskey => qaskey_suite(ps),
        Suite::Wilson => verify_wilson_gevps(ps),
        Suite::Summation => verify_summation_formula(ps),
        Suite::Constraints => verify_constraint_equations(ps),
        Suite::RacahRelation => racah_relation_suite(ps),
        Suite::R1 => r1_suite(ps),
        Suite::H1 => h1_suite(ps),
        Suite::R3 => r3_suite(ps),
        Suite::Reduced => reduced_suite(ps),
        Suite::LimitLadders => match mode {
            Mode::Float(bits) => verify_limit_ladders(ps, bits),
            Mode::Exact => {
                let mut rec = recorder(ps);
                rec.run("ladder.mode", "limit ladders need float mode", || {
                    Err(Error::Constraint("limit ladders need float mode".into()))
                });
                rec.finish()
            }
        },
    }
}

fn qaskey_suite(ps: &ParameterSet) -> VerificationReport {
    let mut rec = recorder(ps);
    let cache = PochhammerCache::new();
    let nn = ps.n;
    for (label, fam) in [("rho", ps.rho()), ("rho-tilde", ps.rho_t())] {
        let fam = match fam {
            Ok(f) => f,
            Err(e) => {
                rec.run(
                    &format!("qaskey.{label}.setup"),
                    "q-Racah parameters",
                    || Err(e),
                );
                continue;
            }
        };
        rec.run(
            &format!("qaskey.{label}.orthogonality"),
            "sum_x Omega'_x R_m R_n = delta_mn/(M Omega_n)",
            || {
                Ok(Outcome::Residuals(
                    fam.orthogonality_residuals(&cache)?.concat(),
                ))
            },
        );
        rec.run(
            &format!("qaskey.{label}.closure"),
            "sum_n M Omega_n R_n(x) R_n(y) Omega'_x = delta_xy",
            || Ok(Outcome::Residuals(fam.closure_residuals(&cache)?.concat())),
        );
        rec.run(
            &format!("qaskey.{label}.recurrence"),
            "three-term recurrence in n",
            || Outcome::from_grid(grid(nn).map(|(n, x)| fam.recurrence_residual(n, x))),
        );
        rec.run(
            &format!("qaskey.{label}.difference"),
            "three-term difference in x",
            || Outcome::from_grid(grid(nn).map(|(n, x)| fam.difference_residual(n, x))),
        );
        rec.run(
            &format!("qaskey.{label}.duality"),
            "R_n(x; a, b, g, d) = R_x(n; g, d, a, b)",
            || {
                Outcome::from_grid(
                    grid(nn).map(|(n, x)| fam.duality_check(n, x).map(|(a, b)| a - b)),
                )
            },
        );
    }
    rec.run(
        "qaskey.dual-qhahn-specialization",
        "q-Racah with beta = 0 and truncating alpha is dual q-Hahn",
        || {
            let (a, b, g, q) = (&ps.alpha, &ps.beta, &ps.gamma, &ps.q);
            Outcome::from_grid(grid(nn).map(|(n, x)| {
                Ok(qracah_eval_raw(g, &Scalar::zero(), a, b, q, n, x)?
                    - dual_qhahn_eval(a, b, g, q, n, x)?)
            }))
        },
    );
    rec.run(
        "qaskey.inner-weight-sum",
        "M(gamma, delta~, alpha, beta) sum_i Omega_i(alpha, beta, gamma, alpha s) = w_0(0)",
        || {
            let inner = ps.rho_inner()?;
            let m = QRacahParams::new(
                ps.gamma.clone(),
                ps.delta_t.clone(),
                ps.alpha.clone(),
                ps.beta.clone(),
                ps.q.clone(),
                nn,
            )?
            .m()?;
            let total: Scalar = (0..=nn)
                .map(|i| inner.omega(i))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .sum();
            Ok(Outcome::residual(m * total - w00_closed(ps)))
        },
    );
    rec.finish()
}

fn racah_relation_suite(ps: &ParameterSet) -> VerificationReport {
    let mut rec = recorder(ps);
    rec.run(
        "racah-relation.grid",
        "q-Racah of the s -> 0 limit as a weighted product sum",
        || {
            let rel = RacahRelation::new(ps)?;
            Outcome::from_grid(grid(ps.n).map(|(n, x)| rel.residual(n, x)))
        },
    );
    rec.finish()
}

fn r1_suite(ps: &ParameterSet) -> VerificationReport {
    let mut rec = recorder(ps);
    let r1 = R1Params::from_trio(ps);
    let nn = ps.n;
    rec.run("r1.two-routes", "4phi3 against the dual q-Hahn sum", || {
        let r1 = r1.clone()?;
        Outcome::from_grid(grid(nn).map(|(n, x)| Ok(r1.eval(n, x)? - r1.sum_route(n, x)?)))
    });
    rec.run(
        "r1.recurrence",
        "recurrence in n with spectral factor q^{-x} - 1",
        || {
            let r1 = r1.clone()?;
            Outcome::from_grid(grid(nn).map(|(n, x)| r1.recurrence_residual(n, x)))
        },
    );
    rec.run(
        "r1.two-term-difference",
        "difference in x with only f(x), f(x-1) on the spectral side",
        || {
            let r1 = r1.clone()?;
            Outcome::from_grid(grid(nn).map(|(n, x)| r1.difference_residual(n, x)))
        },
    );
    rec.finish()
}

fn h1_suite(ps: &ParameterSet) -> VerificationReport {
    let mut rec = recorder(ps);
    let h1 = H1Params::from_trio(ps);
    let nn = ps.n;
    rec.run(
        "h1.recurrence",
        "recurrence in n with spectral factor q^{-x} - 1",
        || {
            let h1 = h1.clone()?;
            Outcome::from_grid(grid(nn).map(|(n, x)| h1.recurrence_residual(n, x)))
        },
    );
    rec.run(
        "h1.two-term-difference",
        "difference in x with constant -1 spectral diagonal",
        || {
            let h1 = h1.clone()?;
            Outcome::from_grid(grid(nn).map(|(n, x)| h1.difference_residual(n, x)))
        },
    );
    rec.run("h1.degree-zero-row", "H1_0(x) = 1", || {
        let h1 = h1.clone()?;
        Outcome::from_grid((0..=nn).map(|x| Ok(h1.eval(0, x)? - Scalar::one())))
    });
    rec.run(
        "h1.z-not-diagonalizable",
        "spectral-side matrix has one eigenvalue and Z + I of positive rank",
        || {
            let ev = h1.clone()?.jordan_evidence()?;
            Ok(Outcome::predicate(
                ev.non_diagonalizable(),
                format!("{ev:?}"),
            ))
        },
    );
    rec.finish()
}

fn r3_suite(ps: &ParameterSet) -> VerificationReport {
    let mut rec = recorder(ps);
    rec.run(
        "r3.two-routes",
        "balanced 4phi3 against the very-well-poised 8phi7 at sigma = s",
        || {
            let r3 = r3_from_trio(ps)?;
            Outcome::from_grid(grid(ps.n).map(|(n, x)| Ok(r3.eval(n, x)? - r3.wilson_route(n, x)?)))
        },
    );
    rec.finish()
}

fn reduced_suite(ps: &ParameterSet) -> VerificationReport {
    let mut report = match r_limit_from_trio(ps).and_then(|p| build_reduced_lp(&p)) {
        Ok(lp) => lp.verify(),
        Err(e) => {
            let mut rec = recorder(ps);
            rec.run("reduced-lp.setup", "reduced pair from r_n", || Err(e));
            rec.finish()
        }
    };
    let mut rec = recorder(ps);
    let size = ps.n + 1;
    let q = &ps.q;
    let a0 = &ps.alpha;
    let a1 = &ps.beta;
    type SequenceCase<'a> = (
        &'a str,
        Box<dyn Fn(usize) -> (Scalar, Scalar) + 'a>,
        bool,
        ReducedForm,
    );
    let cases: Vec<SequenceCase> = vec![
        (
            "reduced.classifier.q-red",
            Box::new(move |x| (a0 + a1 * q.pow(x as i64), a1 - a0 * q.pow(-(x as i64)))),
            true,
            ReducedForm::QRed,
        ),
        (
            "reduced.classifier.q-red-swapped",
            Box::new(move |x| (a0 + a1 * q.pow(-(x as i64)), a1 + a0 * q.pow(x as i64))),
            true,
            ReducedForm::QRed,
        ),
        (
            "reduced.classifier.l-red",
            Box::new(move |x| {
                (
                    a0 + a1 * Scalar::int(x as i64),
                    a1 - a0 * Scalar::int(x as i64),
                )
            }),
            true,
            ReducedForm::LRed,
        ),
        (
            "reduced.classifier.mixed-negative",
            Box::new(move |x| (q.pow(-(x as i64)) + q.pow(x as i64), Scalar::int(x as i64))),
            false,
            ReducedForm::Other,
        ),
        (
            "reduced.classifier.alternating-negative",
            Box::new(move |x| {
                let sign = if x % 2 == 0 { 1 } else { -1 };
                (
                    Scalar::int(sign * (x as i64 + 1)),
                    a1 + Scalar::int(x as i64),
                )
            }),
            false,
            ReducedForm::Other,
        ),
    ];
    for (id, gen, compatible, form) in cases {
        rec.run(id, "classifier verdict on generated sequences", || {
            let (xi, la): (Vec<_>, Vec<_>) = (0..size).map(&gen).unzip();
            let c = ReducedSequences::new(xi, la)?.classify();
            let expect_form = if size < 3 { ReducedForm::Other } else { form };
            let ok = if size < 3 && !compatible {
                true
            } else {
                c.compatible == compatible && c.form == expect_form
            };
            Ok(Outcome::predicate(ok, format!("{c:?}")))
        });
    }
    report.extend(rec.finish());
    report
}
