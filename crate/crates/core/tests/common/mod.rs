//! Independent reference evaluations in plain `BigRational`, summed term by
//! term with every Pochhammer product rebuilt from scratch.

#![allow(dead_code)]

use leonard_trio::Scalar;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;

pub fn r(p: i64, d: i64) -> Q {
    Q::new(BigInt::from(p), BigInt::from(d))
}

pub fn sc(x: &Q) -> Scalar {
    Scalar::from(x.clone())
}

pub fn ex(x: &Scalar) -> Q {
    x.as_exact().expect("exact scalar").clone()
}

pub fn pw(x: &Q, e: i64) -> Q {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

pub fn poch(a: &Q, q: &Q, k: usize) -> Q {
    (0..k).fold(Q::one(), |acc, j| acc * (Q::one() - a * pw(q, j as i64)))
}

pub fn pochs(bases: &[Q], q: &Q, k: usize) -> Q {
    bases.iter().fold(Q::one(), |acc, b| acc * poch(b, q, k))
}

/// `sum_{k<=n} (upper;q)_k / (lower, q;q)_k z^k`, `upper` including `q^{-n}`.
pub fn phi_direct(upper: &[Q], lower: &[Q], q: &Q, z: &Q, n: usize) -> Q {
    let mut total = Q::zero();
    for k in 0..=n {
        let num = pochs(upper, q, k);
        if num.is_zero() {
            continue;
        }
        total += num / (pochs(lower, q, k) * poch(q, q, k)) * pw(z, k as i64);
    }
    total
}

pub fn qracah(al: &Q, be: &Q, ga: &Q, de: &Q, q: &Q, n: usize, x: usize) -> Q {
    phi_direct(
        &[
            pw(q, -(n as i64)),
            al * be * pw(q, n as i64 + 1),
            pw(q, -(x as i64)),
            ga * de * pw(q, x as i64 + 1),
        ],
        &[al * q, be * de * q, ga * q],
        q,
        q,
        n,
    )
}

pub fn dual_qhahn(a: &Q, b: &Q, g: &Q, q: &Q, n: usize, x: usize) -> Q {
    phi_direct(
        &[
            pw(q, -(n as i64)),
            pw(q, -(x as i64)),
            a * b * pw(q, x as i64 + 1),
        ],
        &[a * q, g * q],
        q,
        q,
        n,
    )
}

/// The `10phi9` written with the very-well-poised factor expanded per term.
#[allow(clippy::too_many_arguments)]
pub fn wilson(a: &Q, b: &Q, c: &Q, d: &Q, e: &Q, f: &Q, q: &Q, n: usize, x: usize) -> Q {
    let upper = [
        a.clone(),
        pw(q, -(n as i64)),
        b * pw(q, n as i64 + 1),
        pw(q, -(x as i64)),
        c * pw(q, x as i64 + 1),
        a * d,
        a * e,
        a * f,
    ];
    let lower = [
        a * pw(q, n as i64 + 1),
        a * pw(q, -(n as i64)) / b,
        a * pw(q, -(x as i64)) / c,
        a * pw(q, x as i64 + 1),
        q / d,
        q / e,
        q / f,
    ];
    let one = Q::one();
    (0..=n)
        .map(|k| {
            let wp = (&one - a * pw(q, 2 * k as i64)) / (&one - a);
            wp * pochs(&upper, q, k) / (pochs(&lower, q, k) * poch(q, q, k)) * pw(q, k as i64)
        })
        .sum()
}

/// Trio parameters `(q, alpha, beta, delta, s, N)` with `gamma = q^{-N-1}`.
#[derive(Clone, Debug)]
pub struct Trio {
    pub q: Q,
    pub al: Q,
    pub be: Q,
    pub de: Q,
    pub s: Q,
    pub n: usize,
    pub ga: Q,
}

impl Trio {
    pub fn new(q: Q, al: Q, be: Q, de: Q, s: Q, n: usize) -> Self {
        let ga = pw(&q, -(n as i64) - 1);
        Trio {
            q,
            al,
            be,
            de,
            s,
            n,
            ga,
        }
    }

    pub fn params(&self) -> leonard_trio::ParameterSet {
        leonard_trio::ParameterSet::new(
            sc(&self.q),
            sc(&self.al),
            sc(&self.be),
            sc(&self.de),
            sc(&self.s),
            self.n,
        )
        .expect("generic test point")
    }

    pub fn delta_t(&self) -> Q {
        &self.al / (&self.be * &self.de)
    }

    /// `(q beta delta, 1/(alpha s);q)_N / (beta delta/alpha, q/s;q)_N`.
    pub fn w00(&self) -> Q {
        let (q, al, be, de, s) = (&self.q, &self.al, &self.be, &self.de, &self.s);
        pochs(&[q * be * de, (al * s).recip()], q, self.n)
            / pochs(&[be * de / al, q / s], q, self.n)
    }
}

pub fn sample_points() -> Vec<Trio> {
    vec![
        Trio::new(r(3, 5), r(1, 3), r(1, 7), r(2, 1), r(1, 2), 3),
        Trio::new(r(2, 7), r(5, 3), r(-3, 11), r(4, 9), r(7, 5), 4),
        Trio::new(r(-1, 3), r(2, 1), r(3, 1), r(-5, 1), r(1, 4), 2),
    ]
}
