//! Seeded random parameter batteries with resampling of non-generic draws.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ParameterSet;
use crate::scalar::Scalar;

pub const DEFAULT_MAX_ATTEMPTS: usize = 32;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatterySpec {
    pub seed: u64,
    pub count: usize,
    pub q_choices: Vec<Scalar>,
    pub n_choices: Vec<usize>,
    /// Numerators and denominators of drawn rationals are bounded by this.
    pub height: u64,
    #[serde(default = "default_attempts")]
    pub max_attempts: usize,
}

fn default_attempts() -> usize {
    DEFAULT_MAX_ATTEMPTS
}

/// A battery together with the reasons draws were rejected.
#[derive(Clone, Debug, Default)]
pub struct Battery {
    pub sets: Vec<ParameterSet>,
    pub resampled: Vec<String>,
}

/// Deterministic source of rational parameters.
pub struct RationalSampler {
    rng: ChaCha8Rng,
    height: i64,
}

impl RationalSampler {
    pub fn new(seed: u64, height: u64) -> Self {
        RationalSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            height: height.max(2) as i64,
        }
    }

    /// Nonzero `p/r` with `|p|, r <= height`.
    pub fn nonzero(&mut self) -> Scalar {
        let h = self.height;
        let mut p = 0;
        while p == 0 {
            p = self.rng.gen_range(-h..=h);
        }
        let r = self.rng.gen_range(1..=h);
        Scalar::from(BigRational::new(BigInt::from(p), BigInt::from(r)))
    }

    pub fn pick<'a, T>(&mut self, choices: &'a [T]) -> &'a T {
        choices.choose(&mut self.rng).expect("nonempty choices")
    }

    /// Random `(alpha, beta, delta, s)` at fixed `q` and `N`.
    pub fn parameter_set(&mut self, q: &Scalar, n: usize) -> Result<ParameterSet> {
        let (alpha, beta, delta, s) = (
            self.nonzero(),
            self.nonzero(),
            self.nonzero(),
            self.nonzero(),
        );
        ParameterSet::new(q.clone(), alpha, beta, delta, s, n)
    }
}

/// Draws a set accepted by both the genericity scan and `validate`,
/// retrying up to `max_attempts` times.
pub fn draw_one(
    sampler: &mut RationalSampler,
    q: &Scalar,
    n: usize,
    max_attempts: usize,
    validate: &dyn Fn(&ParameterSet) -> Result<()>,
    resampled: &mut Vec<String>,
) -> Result<ParameterSet> {
    let mut last = String::from("no attempt made");
    for _ in 0..max_attempts {
        match sampler
            .parameter_set(q, n)
            .and_then(|ps| validate(&ps).map(|_| ps))
        {
            Ok(ps) => return Ok(ps),
            Err(e) => {
                log::info!("resampling (q = {q}, N = {n}): {e}");
                resampled.push(e.to_string());
                last = e.to_string();
            }
        }
    }
    Err(Error::GenericityExhausted {
        attempts: max_attempts,
        last,
    })
}

pub fn draw_battery(
    spec: &BatterySpec,
    validate: &dyn Fn(&ParameterSet) -> Result<()>,
) -> Result<Battery> {
    if spec.q_choices.is_empty() || spec.n_choices.is_empty() {
        return Err(Error::Constraint(
            "battery needs at least one q and one N".into(),
        ));
    }
    let mut sampler = RationalSampler::new(spec.seed, spec.height);
    let mut battery = Battery::default();
    for _ in 0..spec.count {
        let q = sampler.pick(&spec.q_choices).clone();
        let n = *sampler.pick(&spec.n_choices);
        let ps = draw_one(
            &mut sampler,
            &q,
            n,
            spec.max_attempts,
            validate,
            &mut battery.resampled,
        )?;
        battery.sets.push(ps);
    }
    Ok(battery)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(seed: u64) -> BatterySpec {
        BatterySpec {
            seed,
            count: 4,
            q_choices: vec![Scalar::ratio(3, 5), Scalar::ratio(2, 7)],
            n_choices: vec![2, 3],
            height: 9,
            max_attempts: DEFAULT_MAX_ATTEMPTS,
        }
    }

    #[test]
    fn same_seed_same_battery() {
        let a = draw_battery(&spec(7), &|_| Ok(())).unwrap();
        let b = draw_battery(&spec(7), &|_| Ok(())).unwrap();
        assert_eq!(a.sets, b.sets);
        assert_eq!(a.sets.len(), 4);
    }

    #[test]
    fn exhaustion_is_reported() {
        let e = draw_battery(&spec(1), &|_| Err(Error::Constraint("never".into()))).unwrap_err();
        assert!(matches!(e, Error::GenericityExhausted { attempts: 32, .. }));
    }
}
