//! Wilson rational functions as terminating very-well-poised `10phi9` sums,
//! with the coefficient families of their recurrence-type eigenvalue problems.

use crate::error::{quot, Error, Result};
use crate::params::ParameterSet;
use crate::qaskey::{lambda, QRacahParams};
use crate::qseries::very_well_poised_phi;
use crate::scalar::Scalar;

/// Unchecked `W_n(x; a,b,c,d,e,f)`.
#[allow(clippy::too_many_arguments)]
pub fn wilson_eval_raw(
    a: &Scalar,
    b: &Scalar,
    c: &Scalar,
    d: &Scalar,
    e: &Scalar,
    f: &Scalar,
    q: &Scalar,
    n: usize,
    x: usize,
) -> Result<Scalar> {
    let tail = [
        b * q.pow(n as i64 + 1),
        q.pow(-(x as i64)),
        c * q.pow(x as i64 + 1),
        a * d,
        a * e,
        a * f,
    ];
    very_well_poised_phi(a, &tail, q, n)
}

#[derive(Clone, Debug)]
pub struct WilsonParams {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
    pub d: Scalar,
    pub e: Scalar,
    pub f: Scalar,
    pub q: Scalar,
    pub n: usize,
}

/// The three neighbours of the recurrence in `n`: coefficients of
/// `W_{n+1}`, `W_n`, `W_{n-1}` on the spectral (`z`) and plain (`x`) sides.
#[derive(Clone, Debug, PartialEq)]
pub struct GevpCoefficients {
    pub z_next: Scalar,
    pub z_same: Scalar,
    pub z_prev: Scalar,
    pub x_next: Scalar,
    pub x_same: Scalar,
    pub x_prev: Scalar,
}

impl GevpCoefficients {
    /// `x-side . (W_{n+1}, W_n, W_{n-1}) - spectral * z-side . (...)`.
    pub fn residual(
        &self,
        spectral: &Scalar,
        next: &Scalar,
        same: &Scalar,
        prev: &Scalar,
    ) -> Scalar {
        let lhs = &self.x_next * next + &self.x_same * same + &self.x_prev * prev;
        let rhs = &self.z_next * next + &self.z_same * same + &self.z_prev * prev;
        lhs - spectral * rhs
    }
}

impl WilsonParams {
    /// Sets `d = q^{N+1}` and checks the balancing `bcdef = 1` and every
    /// denominator over the `(n, x)` grid.
    pub fn new(
        a: Scalar,
        b: Scalar,
        c: Scalar,
        e: Scalar,
        f: Scalar,
        q: Scalar,
        n: usize,
    ) -> Result<Self> {
        let d = q.pow(n as i64 + 1);
        let p = WilsonParams {
            a,
            b,
            c,
            d,
            e,
            f,
            q,
            n,
        };
        if !(&p.b * &p.c * &p.d * &p.e * &p.f).is_one() {
            return Err(Error::Constraint("balancing b c d e f = 1 fails".into()));
        }
        for nn in 0..=n {
            for x in 0..=n {
                p.eval(nn, x).map_err(Error::into_genericity)?;
            }
            p.gevp_coeffs(nn).map_err(Error::into_genericity)?;
            p.swapped()
                .gevp_coeffs(nn)
                .map_err(Error::into_genericity)?;
        }
        Ok(p)
    }

    /// `(a, b, c, d, e, f) = (alpha gamma s q, gamma delta, alpha gamma/(beta delta), 1/gamma, 1/alpha, beta/gamma)`.
    pub fn from_trio(ps: &ParameterSet) -> Result<Self> {
        let (a, b, g, d, s, q) = (&ps.alpha, &ps.beta, &ps.gamma, &ps.delta, &ps.s, &ps.q);
        WilsonParams::new(
            a * g * s * q,
            g * d,
            a * g / (b * d),
            a.recip().expect("alpha nonzero"),
            b / g,
            q.clone(),
            ps.n,
        )
    }

    /// The same parameters with `b` and `c` exchanged.
    pub fn swapped(&self) -> Self {
        WilsonParams {
            b: self.c.clone(),
            c: self.b.clone(),
            ..self.clone()
        }
    }

    pub fn eval(&self, n: usize, x: usize) -> Result<Scalar> {
        wilson_eval_raw(
            &self.a, &self.b, &self.c, &self.d, &self.e, &self.f, &self.q, n, x,
        )
    }

    /// The q-Racah data `(1/d, bd, 1/e, f/d)` feeding the coefficients.
    fn racah(&self) -> Result<QRacahParams> {
        let inv_d = self.d.recip().ok_or(Error::Pole {
            factor: "d".into(),
            index: 0,
        })?;
        let inv_e = self.e.recip().ok_or(Error::Pole {
            factor: "e".into(),
            index: 0,
        })?;
        QRacahParams::unchecked(
            inv_d.clone(),
            &self.b * &self.d,
            inv_e,
            &self.f * &inv_d,
            self.q.clone(),
            self.n,
        )
    }

    pub fn gevp_coeffs(&self, n: usize) -> Result<GevpCoefficients> {
        let one = Scalar::one();
        let (a, b, c, f, q) = (&self.a, &self.b, &self.c, &self.f, &self.q);
        let (ra, rb, rc) = self.racah()?.abc(n)?;
        let qn = q.pow(n as i64);
        let qn1 = &qn * q;
        let (z_next, x_next) = if ra.is_zero() {
            (Scalar::zero(), Scalar::zero())
        } else {
            let common = &ra * (a - b * &qn1) * (f - &qn1);
            let z = quot(
                common.clone(),
                &((&one - a * &qn1) * (&one - b * f * &qn1)),
                "(1 - a q^(n+1))(1 - b f q^(n+1))",
                n,
            )?;
            let x = quot(
                common * (c - a * &qn),
                &(a * &qn * (&one - b * f * &qn1)),
                "a q^n (1 - b f q^(n+1))",
                n,
            )?;
            (z, x)
        };
        let (z_prev, x_prev) = if rc.is_zero() {
            (Scalar::zero(), Scalar::zero())
        } else {
            let common = &rc * (&one - a * &qn) * (&one - b * f * &qn);
            let z = quot(
                common.clone(),
                &((a - b * &qn) * (f - &qn)),
                "(a - b q^n)(f - q^n)",
                n,
            )?;
            let x = quot(
                common * (a - b * c * &qn1),
                &(a * b * &qn * (f - &qn)),
                "a b q^n (f - q^n)",
                n,
            )?;
            (z, x)
        };
        let z_same = rb - a * f - quot(q * b * c * f, a, "a", n)?;
        let x_same = -&x_next - &x_prev;
        Ok(GevpCoefficients {
            z_next,
            z_same,
            z_prev,
            x_next,
            x_same,
            x_prev,
        })
    }

    /// `lambda(x; c) - 1 - c q`.
    pub fn spectral(&self, x: usize) -> Scalar {
        lambda(x, &self.c, &self.q) - Scalar::one() - &self.c * &self.q
    }

    fn neighbours(&self, n: usize, x: usize) -> Result<(Scalar, Scalar, Scalar)> {
        let next = if n < self.n {
            self.eval(n + 1, x)?
        } else {
            Scalar::zero()
        };
        let prev = if n > 0 {
            self.eval(n - 1, x)?
        } else {
            Scalar::zero()
        };
        Ok((next, self.eval(n, x)?, prev))
    }

    /// Residual of the recurrence eigenvalue problem in `n` at `(n, x)`.
    pub fn gevp_residual(&self, n: usize, x: usize) -> Result<Scalar> {
        let co = self.gevp_coeffs(n)?;
        if n == self.n && !(co.x_next.is_zero() && co.z_next.is_zero()) {
            return Err(Error::Constraint(
                "top coefficients do not vanish at n = N".into(),
            ));
        }
        let (next, same, prev) = self.neighbours(n, x)?;
        Ok(co.residual(&self.spectral(x), &next, &same, &prev))
    }

    /// Residual of the difference problem in `x`, obtained from the
    /// recurrence of the `b <-> c` swapped family through `W_n(x) = W'_x(n)`.
    pub fn difference_residual(&self, n: usize, x: usize) -> Result<Scalar> {
        self.swapped().gevp_residual(x, n)
    }

    /// `(W_n(x), W'_x(n))` with `W'` the swapped family.
    pub fn duality_check(&self, n: usize, x: usize) -> Result<(Scalar, Scalar)> {
        Ok((self.eval(n, x)?, self.swapped().eval(x, n)?))
    }
}

/// The recurrence coefficients written directly in the trio parameters,
/// with q-Racah data `(gamma, delta, alpha, beta)`.
pub fn trio_gevp_coeffs(ps: &ParameterSet, n: usize) -> Result<GevpCoefficients> {
    let one = Scalar::one();
    let (al, be, ga, de, s, q) = (&ps.alpha, &ps.beta, &ps.gamma, &ps.delta, &ps.s, &ps.q);
    let (ra, rb, rc) = ps.rho_dual()?.abc(n)?;
    let qn = q.pow(n as i64);
    let qn1 = &qn * q;
    let ags = al * ga * s;
    let bd = be * de;
    let (z_next, x_next) = if ra.is_zero() {
        (Scalar::zero(), Scalar::zero())
    } else {
        let common = &ra * (al * s - de * &qn) * (be - ga * &qn1);
        let z = quot(
            q * &common,
            &((&one - &ags * &qn1 * q) * (&one - &bd * &qn1)),
            "(1 - alpha gamma s q^(n+2))(1 - beta delta q^(n+1))",
            n,
        )?;
        let x = quot(
            common * (&one - &bd * s * &qn1),
            &(&bd * s * &qn * (&one - &bd * &qn1)),
            "beta delta s q^n (1 - beta delta q^(n+1))",
            n,
        )?;
        (z, x)
    };
    let (z_prev, x_prev) = if rc.is_zero() {
        (Scalar::zero(), Scalar::zero())
    } else {
        let common = &rc * (&one - &ags * &qn1) * (&one - &bd * &qn);
        let qnm1 = &qn / q;
        let z = quot(
            common.clone(),
            &(q * (al * s - de * qnm1) * (be - ga * &qn)),
            "q (alpha s - delta q^(n-1))(beta - gamma q^n)",
            n,
        )?;
        let x = quot(
            common * (be * s - ga * &qn),
            &(&bd * s * &qn * (be - ga * &qn)),
            "beta delta s q^n (beta - gamma q^n)",
            n,
        )?;
        (z, x)
    };
    let z_same = rb + &ps.sigma;
    let x_same = -&x_next - &x_prev;
    Ok(GevpCoefficients {
        z_next,
        z_same,
        z_prev,
        x_next,
        x_same,
        x_prev,
    })
}

/// `(1 - q^x)(q^{-x} - alpha gamma q/(beta delta))`.
pub fn trio_spectral(ps: &ParameterSet, x: usize) -> Scalar {
    let q = &ps.q;
    (Scalar::one() - q.pow(x as i64))
        * (q.pow(-(x as i64)) - &ps.alpha * &ps.gamma * q / (&ps.beta * &ps.delta))
}

/// Residual of the trio-variable recurrence problem at `(n, x)`.
pub fn trio_wilson_gevp_residual(ps: &ParameterSet, n: usize, x: usize) -> Result<Scalar> {
    let w = WilsonParams::from_trio(ps)?;
    let co = trio_gevp_coeffs(ps, n)?;
    let (next, same, prev) = w.neighbours(n, x)?;
    Ok(co.residual(&trio_spectral(ps, x), &next, &same, &prev))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> Scalar {
        t.parse().unwrap()
    }

    fn sample() -> WilsonParams {
        let ps = ParameterSet::new(s("3/5"), s("1/3"), s("1/7"), s("2"), s("1/2"), 3).unwrap();
        WilsonParams::from_trio(&ps).unwrap()
    }

    #[test]
    fn balancing_enforced() {
        let q = s("1/2");
        let e = WilsonParams::new(s("1/3"), s("2"), s("3"), s("5"), s("7"), q, 2).unwrap_err();
        assert!(matches!(e, Error::Constraint(_)));
    }

    #[test]
    fn degree_zero_is_one() {
        let w = sample();
        for x in 0..=3 {
            assert_eq!(w.eval(0, x).unwrap(), Scalar::one());
        }
    }

    #[test]
    fn coefficient_edges() {
        let w = sample();
        let c0 = w.gevp_coeffs(0).unwrap();
        assert!(c0.x_prev.is_zero() && c0.z_prev.is_zero());
        let top = w.gevp_coeffs(3).unwrap();
        assert!(top.x_next.is_zero() && top.z_next.is_zero());
        for n in 0..=3 {
            let c = w.gevp_coeffs(n).unwrap();
            assert!((&c.x_next + &c.x_same + &c.x_prev).is_zero());
        }
    }
}
