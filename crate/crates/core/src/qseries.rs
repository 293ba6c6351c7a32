//! q-Pochhammer symbols and terminating basic hypergeometric sums.

use std::collections::HashMap;
use std::sync::Arc;

use num_rational::BigRational;
use parking_lot::RwLock;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `(a;q)_k = (1-a)(1-aq)...(1-aq^{k-1})`.
pub fn q_pochhammer(a: &Scalar, q: &Scalar, k: usize) -> Scalar {
    PochhammerLadder::new(a.clone(), q.clone())
        .nth(k)
        .expect("ladder is infinite")
}

/// `(b_1,...,b_r;q)_k`, the product of the individual symbols.
pub fn q_pochhammer_multi(bases: &[Scalar], q: &Scalar, k: usize) -> Scalar {
    bases.iter().map(|b| q_pochhammer(b, q, k)).product()
}

/// Yields `(a;q)_0, (a;q)_1, ...` with one multiplication per step.
#[derive(Clone, Debug)]
pub struct PochhammerLadder {
    q: Scalar,
    aqk: Scalar,
    value: Scalar,
}

impl PochhammerLadder {
    pub fn new(a: Scalar, q: Scalar) -> Self {
        PochhammerLadder {
            q,
            aqk: a,
            value: Scalar::one(),
        }
    }
}

impl Iterator for PochhammerLadder {
    type Item = Scalar;

    fn next(&mut self) -> Option<Scalar> {
        let out = self.value.clone();
        self.value = &self.value * (Scalar::one() - &self.aqk);
        self.aqk = &self.aqk * &self.q;
        Some(out)
    }
}

/// Shared memo of exact Pochhammer ladders keyed by `(a, q)`.
///
/// Readers never block each other; a longer ladder replaces a shorter one,
/// and concurrent inserts of the same key keep whichever is longer.
type LadderTable = HashMap<(BigRational, BigRational), Arc<Vec<Scalar>>>;

#[derive(Default, Debug)]
pub struct PochhammerCache {
    table: RwLock<LadderTable>,
}

impl PochhammerCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// `[(a;q)_0, ..., (a;q)_len]`. Float inputs bypass the table.
    pub fn ladder(&self, a: &Scalar, q: &Scalar, len: usize) -> Arc<Vec<Scalar>> {
        let key = match (a.as_exact(), q.as_exact()) {
            (Some(a), Some(q)) => (a.clone(), q.clone()),
            _ => {
                return Arc::new(
                    PochhammerLadder::new(a.clone(), q.clone())
                        .take(len + 1)
                        .collect(),
                )
            }
        };
        if let Some(hit) = self.table.read().get(&key) {
            if hit.len() > len {
                return hit.clone();
            }
        }
        let fresh: Arc<Vec<Scalar>> = Arc::new(
            PochhammerLadder::new(a.clone(), q.clone())
                .take(len + 1)
                .collect(),
        );
        let mut w = self.table.write();
        let slot = w.entry(key).or_insert_with(|| fresh.clone());
        if slot.len() < fresh.len() {
            *slot = fresh;
        }
        slot.clone()
    }

    pub fn len(&self) -> usize {
        self.table.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A terminating `_{r+1}phi_r` whose first upper parameter is `q^{-n}`.
///
/// `upper` holds the remaining `r` numerator parameters; the `q^{-n}` entry is
/// implied by `terminate_at`.
#[derive(Clone, Debug)]
pub struct PhiSpec {
    pub upper: Vec<Scalar>,
    pub lower: Vec<Scalar>,
    pub q: Scalar,
    pub z: Scalar,
    pub terminate_at: usize,
}

impl PhiSpec {
    pub fn new(
        upper: Vec<Scalar>,
        lower: Vec<Scalar>,
        q: Scalar,
        z: Scalar,
        n: usize,
    ) -> Result<Self> {
        if upper.len() != lower.len() {
            return Err(Error::Shape(format!(
                "{} numerator parameters besides q^-n but {} denominator parameters",
                upper.len(),
                lower.len()
            )));
        }
        Ok(PhiSpec {
            upper,
            lower,
            q,
            z,
            terminate_at: n,
        })
    }

    /// All upper parameters, including `q^{-n}` first.
    pub fn full_upper(&self) -> Vec<Scalar> {
        let mut v = vec![self.q.pow(-(self.terminate_at as i64))];
        v.extend(self.upper.iter().cloned());
        v
    }
}

/// Checks `(b;q)_k != 0` for every `k <= n`, i.e. `1 - b q^j != 0` for `j < n`.
fn check_lower(b: &Scalar, q: &Scalar, n: usize, name: &str) -> Result<()> {
    let mut bq = b.clone();
    for j in 0..n {
        if (Scalar::one() - &bq).is_zero() {
            return Err(Error::Pole {
                factor: format!("({};q)_{}", name, j + 1),
                index: j,
            });
        }
        bq = &bq * q;
    }
    Ok(())
}

fn check_q(q: &Scalar, n: usize) -> Result<()> {
    check_lower(q, q, n, "q")
}

/// Sums the terminating series left to right with incremental Pochhammers.
pub fn phi(spec: &PhiSpec) -> Result<Scalar> {
    let n = spec.terminate_at;
    for (i, b) in spec.lower.iter().enumerate() {
        check_lower(b, &spec.q, n, &format!("b{}", i + 1))?;
    }
    check_q(&spec.q, n)?;
    let one = Scalar::one();
    let q = &spec.q;
    let mut upper = spec.full_upper();
    let mut lower = spec.lower.clone();
    lower.push(q.clone());
    let mut term = one.clone();
    let mut total = one.clone();
    for _ in 1..=n {
        let num: Scalar = upper.iter().map(|a| &one - a).product();
        if num.is_zero() {
            break;
        }
        let den: Scalar = lower.iter().map(|b| &one - b).product();
        term = term * num * &spec.z / den;
        total = total + &term;
        for a in upper.iter_mut() {
            *a = &*a * q;
        }
        for b in lower.iter_mut() {
            *b = &*b * q;
        }
    }
    Ok(total)
}

/// Same sum as [`phi`], drawing each Pochhammer ladder from `cache`.
pub fn phi_cached(spec: &PhiSpec, cache: &PochhammerCache) -> Result<Scalar> {
    let n = spec.terminate_at;
    for (i, b) in spec.lower.iter().enumerate() {
        check_lower(b, &spec.q, n, &format!("b{}", i + 1))?;
    }
    check_q(&spec.q, n)?;
    let ups: Vec<_> = spec
        .full_upper()
        .iter()
        .map(|a| cache.ladder(a, &spec.q, n))
        .collect();
    let mut lows: Vec<_> = spec
        .lower
        .iter()
        .map(|b| cache.ladder(b, &spec.q, n))
        .collect();
    lows.push(cache.ladder(&spec.q, &spec.q, n));
    let mut total = Scalar::zero();
    let mut zk = Scalar::one();
    for k in 0..=n {
        let num: Scalar = ups.iter().map(|l| &l[k]).product::<Scalar>();
        if num.is_zero() {
            break;
        }
        let den: Scalar = lows.iter().map(|l| l[k].clone()).product();
        total = total + num * &zk / den;
        zk = zk * &spec.z;
    }
    Ok(total)
}

/// Terminating very-well-poised series at argument `z`:
///
/// `sum_k (1 - a q^{2k})/(1 - a) (a, q^{-n}, u_1..u_m;q)_k / (q, a q^{n+1}, aq/u_1..aq/u_m;q)_k z^k`.
///
/// The `(q sqrt a, -q sqrt a; sqrt a, -sqrt a)` pair is folded into the first
/// factor, so no square root is taken.
pub fn very_well_poised_sum(
    a: &Scalar,
    tail_upper: &[Scalar],
    q: &Scalar,
    z: &Scalar,
    n: usize,
) -> Result<Scalar> {
    let one = Scalar::one();
    let one_minus_a = &one - a;
    if one_minus_a.is_zero() {
        return Err(Error::Pole {
            factor: "1 - a".into(),
            index: 0,
        });
    }
    let aq = a * q;
    let mut upper = vec![a.clone(), q.pow(-(n as i64))];
    let mut lower = vec![q.clone(), &aq * q.pow(n as i64)];
    for (j, u) in tail_upper.iter().enumerate() {
        if u.is_zero() {
            return Err(Error::Pole {
                factor: format!("aq/u{} with u{} = 0", j + 1, j + 1),
                index: 0,
            });
        }
        upper.push(u.clone());
        lower.push(&aq / u);
    }
    for (i, b) in lower.iter().enumerate() {
        check_lower(b, q, n, &format!("b{}", i))?;
    }
    let q2 = q * q;
    let mut aq2k = a.clone();
    let mut ratio_part = one.clone();
    let mut total = one.clone();
    for _ in 1..=n {
        let num: Scalar = upper.iter().map(|x| &one - x).product();
        if num.is_zero() {
            break;
        }
        let den: Scalar = lower.iter().map(|x| &one - x).product();
        ratio_part = ratio_part * num * z / den;
        aq2k = aq2k * &q2;
        total = total + &ratio_part * (&one - &aq2k) / &one_minus_a;
        for x in upper.iter_mut() {
            *x = &*x * q;
        }
        for x in lower.iter_mut() {
            *x = &*x * q;
        }
    }
    Ok(total)
}

/// The very-well-poised series at `z = q`.
pub fn very_well_poised_phi(
    a: &Scalar,
    tail_upper: &[Scalar],
    q: &Scalar,
    n: usize,
) -> Result<Scalar> {
    very_well_poised_sum(a, tail_upper, q, q, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> Scalar {
        t.parse().unwrap()
    }

    #[test]
    fn pochhammer_small_cases() {
        let (a, q) = (s("2"), s("3"));
        assert_eq!(q_pochhammer(&a, &q, 0), Scalar::one());
        assert_eq!(q_pochhammer(&a, &q, 1), s("-1"));
        assert_eq!(q_pochhammer(&a, &q, 2), s("5"));
        assert_eq!(q_pochhammer_multi(&[s("2"), s("1/2")], &q, 1), s("-1/2"));
        assert_eq!(
            q_pochhammer_multi(&[s("2"), s("1/2")], &q, 0),
            Scalar::one()
        );
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let e = PhiSpec::new(vec![s("1/2")], vec![], s("1/3"), s("1/3"), 2).unwrap_err();
        assert!(matches!(e, Error::Shape(_)));
    }

    #[test]
    fn pole_reports_first_vanishing_factor() {
        let q = s("1/2");
        // b = q^{-1}: 1 - b q = 0 at j = 1.
        let spec = PhiSpec::new(vec![s("1/3")], vec![s("2")], q.clone(), q, 3).unwrap();
        match phi(&spec).unwrap_err() {
            Error::Pole { factor, index } => {
                assert_eq!(index, 1);
                assert!(factor.contains("b1"));
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn cache_grows_and_agrees() {
        let cache = PochhammerCache::new();
        let (a, q) = (s("2/3"), s("3/5"));
        let short = cache.ladder(&a, &q, 2);
        let long = cache.ladder(&a, &q, 6);
        assert_eq!(short.len(), 3);
        assert_eq!(long.len(), 7);
        assert_eq!(cache.len(), 1);
        for k in 0..=6 {
            assert_eq!(long[k], q_pochhammer(&a, &q, k));
        }
    }

    #[test]
    fn cached_and_plain_sums_agree() {
        let q = s("2/7");
        let spec = PhiSpec::new(
            vec![s("3/4"), s("-5/2"), s("1/9")],
            vec![s("7/3"), s("-1/4"), s("11/6")],
            q.clone(),
            q,
            4,
        )
        .unwrap();
        assert_eq!(
            phi(&spec).unwrap(),
            phi_cached(&spec, &PochhammerCache::new()).unwrap()
        );
    }
}
