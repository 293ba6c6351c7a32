//! The trio parameter set `(q, alpha, beta, delta, s, N)` and its
//! genericity scan.

use std::collections::BTreeMap;

use crate::error::{require_nonzero, Error, Result};
use crate::qaskey::{lambda, EigenvalueMap, QRacahParams};
use crate::scalar::Scalar;
use crate::wilson::{trio_gevp_coeffs, WilsonParams};

#[derive(Clone, Debug, PartialEq)]
pub struct ParameterSet {
    pub q: Scalar,
    pub alpha: Scalar,
    pub beta: Scalar,
    pub delta: Scalar,
    pub s: Scalar,
    pub n: usize,
    /// `q^{-N-1}`
    pub gamma: Scalar,
    /// `-1/s - q s alpha beta`
    pub sigma: Scalar,
    /// `alpha/(beta delta)`, the delta of the second q-Racah family.
    pub delta_t: Scalar,
}

impl ParameterSet {
    /// Builds the set and rejects it if any denominator used by the
    /// realization, the overlap formulas or the partner set at
    /// `s' = 1/(alpha beta s)` vanishes.
    pub fn new(
        q: Scalar,
        alpha: Scalar,
        beta: Scalar,
        delta: Scalar,
        s: Scalar,
        n: usize,
    ) -> Result<Self> {
        let ps = Self::unchecked(q, alpha, beta, delta, s, n)?;
        ps.check_generic()?;
        ps.partner_unchecked().check_generic()?;
        Ok(ps)
    }

    /// Derives `gamma`, `sigma`, `delta_t` after checking only that
    /// `q, alpha, beta, delta, s` are nonzero and `N > 0`.
    pub fn unchecked(
        q: Scalar,
        alpha: Scalar,
        beta: Scalar,
        delta: Scalar,
        s: Scalar,
        n: usize,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::Constraint("N must be positive".into()));
        }
        for (name, v) in [
            ("q", &q),
            ("alpha", &alpha),
            ("beta", &beta),
            ("delta", &delta),
            ("s", &s),
        ] {
            require_nonzero(v, name, 0)?;
        }
        if q.is_one() || (&q + Scalar::one()).is_zero() {
            return Err(Error::Genericity {
                factor: "1 - q^2".into(),
                index: 0,
            });
        }
        let gamma = q.pow(-(n as i64) - 1);
        let sigma = -s.recip().expect("s nonzero") - &q * &s * &alpha * &beta;
        let delta_t = &alpha / (&beta * &delta);
        Ok(ParameterSet {
            q,
            alpha,
            beta,
            delta,
            s,
            n,
            gamma,
            sigma,
            delta_t,
        })
    }

    fn partner_unchecked(&self) -> ParameterSet {
        let s2 = (&self.alpha * &self.beta * &self.s)
            .recip()
            .expect("nonzero");
        Self::unchecked(
            self.q.clone(),
            self.alpha.clone(),
            self.beta.clone(),
            self.delta.clone(),
            s2,
            self.n,
        )
        .expect("inputs already validated")
    }

    /// The same parameters at `s' = 1/(alpha beta s)`, validated.
    pub fn partner(&self) -> Result<ParameterSet> {
        let p = self.partner_unchecked();
        p.check_generic()?;
        Ok(p)
    }

    /// Name/value fingerprint for reports.
    pub fn fingerprint(&self) -> BTreeMap<String, String> {
        [
            ("q", &self.q),
            ("alpha", &self.alpha),
            ("beta", &self.beta),
            ("delta", &self.delta),
            ("s", &self.s),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
    }

    fn qr(&self, a: &Scalar, b: &Scalar, g: &Scalar, d: &Scalar) -> Result<QRacahParams> {
        QRacahParams::new(
            a.clone(),
            b.clone(),
            g.clone(),
            d.clone(),
            self.q.clone(),
            self.n,
        )
    }

    /// `(alpha, beta, gamma, delta)`.
    pub fn rho(&self) -> Result<QRacahParams> {
        self.qr(&self.alpha, &self.beta, &self.gamma, &self.delta)
    }

    /// `(alpha, beta, gamma, alpha/(beta delta))`.
    pub fn rho_t(&self) -> Result<QRacahParams> {
        self.qr(&self.alpha, &self.beta, &self.gamma, &self.delta_t)
    }

    /// `(gamma, delta, alpha, beta)`.
    pub fn rho_dual(&self) -> Result<QRacahParams> {
        Ok(self.rho()?.dual())
    }

    /// `(gamma, alpha/(beta delta), alpha, beta)`.
    pub fn rho_t_dual(&self) -> Result<QRacahParams> {
        Ok(self.rho_t()?.dual())
    }

    /// `(alpha, beta, gamma, alpha s)`, the inner weights of the overlap sum.
    pub fn rho_inner(&self) -> Result<QRacahParams> {
        self.qr(
            &self.alpha,
            &self.beta,
            &self.gamma,
            &(&self.alpha * &self.s),
        )
    }

    /// `nu_i = beta (s - q^i)(delta - alpha q^i) / ((1 - beta delta q^i)(1 - alpha beta s q^i))`.
    pub fn nu(&self, i: usize) -> Scalar {
        let one = Scalar::one();
        let qi = self.q.pow(i as i64);
        &self.beta * (&self.s - &qi) * (&self.delta - &self.alpha * &qi)
            / ((&one - &self.beta * &self.delta * &qi)
                * (&one - &self.alpha * &self.beta * &self.s * &qi))
    }

    /// Eigenvalue of `Z` on `z_i`: `q^{-i} + alpha beta q^{i+1} + sigma`.
    pub fn zeta(&self, i: usize) -> Scalar {
        lambda(i, &(&self.alpha * &self.beta), &self.q) + &self.sigma
    }

    /// Eigenvalue of `V` on `v_n`: `lambda(n; gamma delta)`.
    pub fn lambda_v(&self, n: usize) -> Scalar {
        lambda(n, &(&self.gamma * &self.delta), &self.q)
    }

    /// Eigenvalue of the second operator on its basis: `lambda(x; alpha gamma/(beta delta))`.
    pub fn lambda_vt(&self, x: usize) -> Scalar {
        lambda(
            x,
            &(&self.alpha * &self.gamma / (&self.beta * &self.delta)),
            &self.q,
        )
    }

    /// Closed-form sub-diagonal of `V~Z` on `v_n`, minus `lambda~_x` times that of `Z`.
    pub fn cond_recurrence(&self, n: usize, x: usize) -> Result<Scalar> {
        let q = &self.q;
        let (a, _, _) = self.rho_dual()?.abc(n)?;
        let bds = &self.beta * &self.delta * &self.s;
        let shifted = lambda(
            n,
            &(&self.alpha * &self.beta * &self.gamma * &self.delta * &self.s * &self.s * q * q),
            q,
        );
        Ok(a * (shifted / (q * bds) - self.lambda_vt(x)))
    }

    /// Closed-form super-diagonal of `ZV` on the second basis, minus `lambda_n` times that of `Z`.
    pub fn cond_difference(&self, x: usize, n: usize) -> Result<Scalar> {
        let q = &self.q;
        let (_, _, c) = self.rho_t_dual()?.abc(x + 1)?;
        let scale = &self.delta / (&self.alpha * &self.s);
        let shifted = lambda(
            x + 1,
            &(&self.alpha * &self.alpha * &self.gamma * &self.s * &self.s / &self.delta),
            q,
        );
        Ok(c * (scale * shifted - self.lambda_v(n)))
    }

    fn check_generic(&self) -> Result<()> {
        let one = Scalar::one();
        let (q, al, be, de, s, ga) = (
            &self.q,
            &self.alpha,
            &self.beta,
            &self.delta,
            &self.s,
            &self.gamma,
        );
        let nn = self.n;
        let bd = be * de;
        let bds = &bd * s;
        let abs_ = al * be * s;
        require_nonzero(&(&bds * s * (&one + q)), "beta delta s^2 (1 + q)", 0)?;
        for j in 0..nn {
            let qj = q.pow(j as i64);
            require_nonzero(&(&bds - &qj), "beta delta s - q^(x-1)", j + 1)?;
            require_nonzero(&(s - &qj * q), "s - q^(i+1)", j)?;
            require_nonzero(&(de - al * &qj * q), "delta - alpha q^(i+1)", j)?;
        }
        for i in 1..=nn {
            let qi = q.pow(i as i64);
            require_nonzero(&(&one - &bd * &qi), "1 - beta delta q^i", i)?;
            require_nonzero(&(&one - &abs_ * &qi), "1 - alpha beta s q^i", i)?;
            require_nonzero(
                &(al * s - de * q.pow(i as i64 - 1)),
                "alpha s - delta q^(n-1)",
                i,
            )?;
            require_nonzero(&(be - ga * &qi), "beta - gamma q^n", i)?;
        }
        for n in 0..=nn {
            require_nonzero(
                &(&one - al * ga * s * q.pow(n as i64 + 2)),
                "1 - alpha gamma s q^(n+2)",
                n,
            )?;
        }
        for (name, a) in [
            ("(delta/(alpha s);q)_N", de / (al * s)),
            ("(gamma q/beta;q)_N", ga * q / be),
            ("(1/(beta delta s);q)_N", bds.recip().expect("nonzero")),
            ("(beta delta/alpha;q)_N", &bd / al),
            ("(q/s;q)_N", q / s),
        ] {
            for k in 0..nn {
                if (&one - &a * q.pow(k as i64)).is_zero() {
                    return Err(Error::Genericity {
                        factor: name.into(),
                        index: k,
                    });
                }
            }
        }
        EigenvalueMap::new(ga * de, q.clone()).check_injective(nn)?;
        EigenvalueMap::new(al * ga / &bd, q.clone()).check_injective(nn)?;
        EigenvalueMap::new(al * be, q.clone()).check_injective(nn)?;
        self.rho()?;
        self.rho_t()?;
        self.rho_inner()?;
        self.qr(al, &(&one / (q * al * s)), ga, &self.delta_t)?;
        self.qr(al, &(ga / &bd), ga, &(&one / (s * q * ga)))?;
        self.qr(ga, de, al, &(&bd / (al * q)))?;
        self.qr(ga, &(al * s), al, be)?;
        WilsonParams::from_trio(self)?;
        for n in 0..=nn {
            trio_gevp_coeffs(self, n).map_err(Error::into_genericity)?;
        }
        for n in 0..nn {
            for x in 0..=nn {
                if self.cond_recurrence(n, x)?.is_zero() {
                    return Err(Error::Genericity {
                        factor: format!("recurrence condition at x = {x}"),
                        index: n,
                    });
                }
                if self.cond_difference(n, x)?.is_zero() {
                    return Err(Error::Genericity {
                        factor: format!("difference condition at n = {x}"),
                        index: n,
                    });
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> Scalar {
        t.parse().unwrap()
    }

    #[test]
    fn derived_quantities() {
        let ps = ParameterSet::new(s("3/5"), s("1/3"), s("1/7"), s("2"), s("1/2"), 3).unwrap();
        assert!((&ps.gamma * ps.q.pow(4)).is_one());
        assert_eq!(ps.delta_t, s("7/6"));
        for i in 0..=3 {
            let expect = (ps.q.pow(-(i as i64)) - ps.s.recip().unwrap())
                * (Scalar::one() - &ps.alpha * &ps.beta * &ps.s * ps.q.pow(i as i64 + 1));
            assert_eq!(ps.zeta(i), expect);
        }
    }

    #[test]
    fn pole_plant_is_named() {
        // beta delta s = q^1 makes (1/(beta delta s);q)_2 vanish.
        let q = s("3/5");
        let (beta, delta) = (s("1/7"), s("2"));
        let sv = &q / (&beta * &delta);
        let e = ParameterSet::new(q, s("1/3"), beta, delta, sv, 3).unwrap_err();
        match e {
            Error::Genericity { factor, index } => {
                assert_eq!(factor, "beta delta s - q^(x-1)");
                assert_eq!(index, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
