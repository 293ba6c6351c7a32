//! q-Racah polynomials, their recurrence and weight data, dual q-Hahn
//! polynomials, and the leading-order family obtained as `beta -> 0`.

use serde::Serialize;

use crate::error::{quot, Error, Result};
use crate::qseries::{phi, phi_cached, q_pochhammer, q_pochhammer_multi, PhiSpec, PochhammerCache};
use crate::scalar::Scalar;

/// Which parameter pins the family to degree `N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Truncation {
    /// `alpha = q^{-N-1}`
    Alpha,
    /// `beta delta = q^{-N-1}`
    BetaDelta,
    /// `gamma = q^{-N-1}`
    Gamma,
}

/// `x -> q^{-x} + a q^{x+1}`.
#[derive(Clone, Debug)]
pub struct EigenvalueMap {
    pub a: Scalar,
    pub q: Scalar,
}

impl EigenvalueMap {
    pub fn new(a: Scalar, q: Scalar) -> Self {
        EigenvalueMap { a, q }
    }

    pub fn eval(&self, x: usize) -> Scalar {
        lambda(x, &self.a, &self.q)
    }

    /// Fails if two of `eval(0..=n)` coincide.
    pub fn check_injective(&self, n: usize) -> Result<()> {
        let vals: Vec<_> = (0..=n).map(|x| self.eval(x)).collect();
        for i in 0..=n {
            for j in 0..i {
                if vals[i] == vals[j] {
                    return Err(Error::Genericity {
                        factor: format!("lambda({j}) - lambda({i}) with a = {}", self.a),
                        index: i,
                    });
                }
            }
        }
        Ok(())
    }
}

pub fn lambda(x: usize, a: &Scalar, q: &Scalar) -> Scalar {
    q.pow(-(x as i64)) + a * q.pow(x as i64 + 1)
}

/// Unchecked q-Racah value; poles surface as [`Error::Pole`].
pub fn qracah_eval_raw(
    alpha: &Scalar,
    beta: &Scalar,
    gamma: &Scalar,
    delta: &Scalar,
    q: &Scalar,
    n: usize,
    x: usize,
) -> Result<Scalar> {
    phi(&qracah_spec(alpha, beta, gamma, delta, q, n, x))
}

fn qracah_spec(
    alpha: &Scalar,
    beta: &Scalar,
    gamma: &Scalar,
    delta: &Scalar,
    q: &Scalar,
    n: usize,
    x: usize,
) -> PhiSpec {
    let ab = alpha * beta;
    PhiSpec {
        upper: vec![
            &ab * q.pow(n as i64 + 1),
            q.pow(-(x as i64)),
            gamma * delta * q.pow(x as i64 + 1),
        ],
        lower: vec![alpha * q, beta * delta * q, gamma * q],
        q: q.clone(),
        z: q.clone(),
        terminate_at: n,
    }
}

/// Dual q-Hahn `3phi2(q^{-n}, q^{-x}, alpha beta q^{x+1}; alpha q, gamma q; q, q)`.
pub fn dual_qhahn_eval(
    alpha: &Scalar,
    beta: &Scalar,
    gamma: &Scalar,
    q: &Scalar,
    n: usize,
    x: usize,
) -> Result<Scalar> {
    phi(&PhiSpec {
        upper: vec![q.pow(-(x as i64)), alpha * beta * q.pow(x as i64 + 1)],
        lower: vec![alpha * q, gamma * q],
        q: q.clone(),
        z: q.clone(),
        terminate_at: n,
    })
}

#[derive(Clone, Debug)]
pub struct QRacahParams {
    pub alpha: Scalar,
    pub beta: Scalar,
    pub gamma: Scalar,
    pub delta: Scalar,
    pub q: Scalar,
    pub n: usize,
    pub truncation: Truncation,
}

impl QRacahParams {
    /// Detects the truncation and checks every denominator used by the
    /// evaluators, for this parameter set and its dual.
    pub fn new(
        alpha: Scalar,
        beta: Scalar,
        gamma: Scalar,
        delta: Scalar,
        q: Scalar,
        n: usize,
    ) -> Result<Self> {
        let p = Self::unchecked(alpha, beta, gamma, delta, q, n)?;
        p.check_generic()?;
        p.dual().check_generic()?;
        Ok(p)
    }

    /// Detects the truncation without the genericity scan.
    pub fn unchecked(
        alpha: Scalar,
        beta: Scalar,
        gamma: Scalar,
        delta: Scalar,
        q: Scalar,
        n: usize,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::Constraint("N must be positive".into()));
        }
        if q.is_zero() || q.is_one() || q == Scalar::int(-1) {
            return Err(Error::Constraint(format!("q = {q} is excluded")));
        }
        let cut = q.pow(-(n as i64) - 1);
        let hits: Vec<Truncation> = [
            (alpha == cut, Truncation::Alpha),
            (&beta * &delta == cut, Truncation::BetaDelta),
            (gamma == cut, Truncation::Gamma),
        ]
        .into_iter()
        .filter_map(|(hit, t)| hit.then_some(t))
        .collect();
        let truncation = match hits.as_slice() {
            [t] => *t,
            [] => {
                return Err(Error::Constraint(format!(
                    "no truncation condition holds for N = {n}"
                )))
            }
            _ => {
                return Err(Error::Constraint(format!(
                    "several truncation conditions hold: {hits:?}"
                )))
            }
        };
        Ok(QRacahParams {
            alpha,
            beta,
            gamma,
            delta,
            q,
            n,
            truncation,
        })
    }

    /// `(gamma, delta, alpha, beta)`.
    pub fn dual(&self) -> QRacahParams {
        let truncation = match self.truncation {
            Truncation::Alpha => Truncation::Gamma,
            Truncation::Gamma => Truncation::Alpha,
            Truncation::BetaDelta => Truncation::BetaDelta,
        };
        QRacahParams {
            alpha: self.gamma.clone(),
            beta: self.delta.clone(),
            gamma: self.alpha.clone(),
            delta: self.beta.clone(),
            q: self.q.clone(),
            n: self.n,
            truncation,
        }
    }

    fn check_generic(&self) -> Result<()> {
        let lift = |e: Error| e.into_genericity();
        for k in 0..=self.n {
            self.abc(k).map_err(lift)?;
            self.omega(k).map_err(lift)?;
        }
        self.m().map_err(lift)?;
        let spec = qracah_spec(
            &self.alpha,
            &self.beta,
            &self.gamma,
            &self.delta,
            &self.q,
            self.n,
            0,
        );
        phi(&spec).map_err(lift)?;
        if !self.abc(self.n)?.0.is_zero() {
            return Err(Error::Constraint(
                "A_N does not vanish under the truncation".into(),
            ));
        }
        Ok(())
    }

    pub fn eval(&self, n: usize, x: usize) -> Result<Scalar> {
        qracah_eval_raw(
            &self.alpha,
            &self.beta,
            &self.gamma,
            &self.delta,
            &self.q,
            n,
            x,
        )
    }

    /// `grid[n][x] = R_n(x)` for `0 <= n, x <= N`.
    pub fn eval_grid(&self, cache: &PochhammerCache) -> Result<Vec<Vec<Scalar>>> {
        (0..=self.n)
            .map(|n| {
                (0..=self.n)
                    .map(|x| {
                        let spec = qracah_spec(
                            &self.alpha,
                            &self.beta,
                            &self.gamma,
                            &self.delta,
                            &self.q,
                            n,
                            x,
                        );
                        phi_cached(&spec, cache)
                    })
                    .collect()
            })
            .collect()
    }

    /// Recurrence coefficients `(A_n, B_n, C_n)`.
    pub fn abc(&self, n: usize) -> Result<(Scalar, Scalar, Scalar)> {
        let one = Scalar::one();
        let (a, b, g, d, q) = (&self.alpha, &self.beta, &self.gamma, &self.delta, &self.q);
        let ab = a * b;
        let qn = q.pow(n as i64);
        let qn1 = &qn * q;
        let a_num =
            (&one - a * &qn1) * (&one - &ab * &qn1) * (&one - b * d * &qn1) * (&one - g * &qn1);
        let a_den = (&one - &ab * q.pow(2 * n as i64 + 1)) * (&one - &ab * q.pow(2 * n as i64 + 2));
        let big_a = quot(
            a_num,
            &a_den,
            "(1 - alpha beta q^(2n+1))(1 - alpha beta q^(2n+2))",
            n,
        )?;
        let big_c = if n == 0 {
            Scalar::zero()
        } else {
            let c_num = q * (&one - &qn) * (&one - b * &qn) * (g - &ab * &qn) * (d - a * &qn);
            let c_den = (&one - &ab * q.pow(2 * n as i64)) * (&one - &ab * q.pow(2 * n as i64 + 1));
            quot(
                c_num,
                &c_den,
                "(1 - alpha beta q^(2n))(1 - alpha beta q^(2n+1))",
                n,
            )?
        };
        let big_b = -&big_a - &big_c + &one + g * d * q;
        Ok((big_a, big_b, big_c))
    }

    /// The weight `Omega_n` attached to degree `n`.
    pub fn omega(&self, n: usize) -> Result<Scalar> {
        let one = Scalar::one();
        let (a, b, g, d, q) = (&self.alpha, &self.beta, &self.gamma, &self.delta, &self.q);
        if g.is_zero() {
            return Err(Error::Pole {
                factor: "gamma".into(),
                index: n,
            });
        }
        if d.is_zero() {
            return Err(Error::Pole {
                factor: "delta".into(),
                index: n,
            });
        }
        let ab = a * b;
        let num = q_pochhammer_multi(&[a * q, g * q, b * d * q, &ab * q], q, n);
        let den = q_pochhammer_multi(&[q.clone(), &ab * q / g, a * q / d, b * q], q, n);
        let tail_num = &one - &ab * q.pow(2 * n as i64 + 1);
        let tail_den = (g * d * q).pow(n as i64) * (&one - &ab * q);
        let head = quot(
            num,
            &den,
            "(q, alpha beta q/gamma, alpha q/delta, beta q;q)_n",
            n,
        )?;
        Ok(head
            * quot(
                tail_num,
                &tail_den,
                "(gamma delta q)^n (1 - alpha beta q)",
                n,
            )?)
    }

    /// The normalization constant of the matching truncation.
    pub fn m(&self) -> Result<Scalar> {
        let (a, b, g, d, q) = (&self.alpha, &self.beta, &self.gamma, &self.delta, &self.q);
        let nn = self.n;
        let inv = |x: &Scalar, name: &str| -> Result<Scalar> {
            x.recip().ok_or_else(|| Error::Pole {
                factor: name.to_string(),
                index: 0,
            })
        };
        let (num, den, name) = match self.truncation {
            Truncation::Alpha => {
                let ib = inv(b, "beta")?;
                (
                    q_pochhammer_multi(&[g * q * &ib, d * q], q, nn),
                    q_pochhammer_multi(&[ib, g * d * q * q], q, nn),
                    "(1/beta, gamma delta q^2;q)_N",
                )
            }
            Truncation::BetaDelta => {
                let ig = inv(g, "gamma")?;
                (
                    q_pochhammer_multi(&[a * b * q * &ig, b * q], q, nn),
                    q_pochhammer_multi(&[a * b * q * q, b * &ig], q, nn),
                    "(alpha beta q^2, beta/gamma;q)_N",
                )
            }
            Truncation::Gamma => {
                let id = inv(d, "delta")?;
                (
                    q_pochhammer_multi(&[a * q * &id, b * q], q, nn),
                    q_pochhammer_multi(&[a * b * q * q, id], q, nn),
                    "(alpha beta q^2, 1/delta;q)_N",
                )
            }
        };
        quot(num, &den, name, nn)
    }

    /// `(Omega_n, M)`.
    pub fn weights(&self, n: usize) -> Result<(Scalar, Scalar)> {
        Ok((self.omega(n)?, self.m()?))
    }

    /// `lambda(x; gamma delta) R_n(x) - (A_n R_{n+1}(x) + B_n R_n(x) + C_n R_{n-1}(x))`.
    pub fn recurrence_residual(&self, n: usize, x: usize) -> Result<Scalar> {
        let (a, b, c) = self.abc(n)?;
        let lam = lambda(x, &(&self.gamma * &self.delta), &self.q);
        let mut rhs = b * self.eval(n, x)?;
        if n > 0 {
            rhs = rhs + c * self.eval(n - 1, x)?;
        }
        if n < self.n {
            rhs = rhs + a * self.eval(n + 1, x)?;
        } else if !a.is_zero() {
            return Err(Error::Constraint(
                "A_N does not vanish under the truncation".into(),
            ));
        }
        Ok(lam * self.eval(n, x)? - rhs)
    }

    /// The difference equation in `x`, written with the dual recurrence data.
    pub fn difference_residual(&self, n: usize, x: usize) -> Result<Scalar> {
        let dual = self.dual();
        let (a, b, c) = dual.abc(x)?;
        let lam = lambda(n, &(&self.alpha * &self.beta), &self.q);
        let mut rhs = b * self.eval(n, x)?;
        if x > 0 {
            rhs = rhs + c * self.eval(n, x - 1)?;
        }
        if x < self.n {
            rhs = rhs + a * self.eval(n, x + 1)?;
        } else if !a.is_zero() {
            return Err(Error::Constraint(
                "dual A_N does not vanish under the truncation".into(),
            ));
        }
        Ok(lam * self.eval(n, x)? - rhs)
    }

    /// `(R_n(x; rho), R_x(n; rho'))`, equal for a valid family.
    pub fn duality_check(&self, n: usize, x: usize) -> Result<(Scalar, Scalar)> {
        Ok((self.eval(n, x)?, self.dual().eval(x, n)?))
    }

    /// `G[m][n] = sum_x Omega'_x R_m(x) R_n(x) - delta_{mn} / (M Omega_n)`.
    pub fn orthogonality_residuals(&self, cache: &PochhammerCache) -> Result<Vec<Vec<Scalar>>> {
        let grid = self.eval_grid(cache)?;
        let dual = self.dual();
        let w: Vec<Scalar> = (0..=self.n).map(|x| dual.omega(x)).collect::<Result<_>>()?;
        let m = self.m()?;
        let mut out = vec![vec![Scalar::zero(); self.n + 1]; self.n + 1];
        for i in 0..=self.n {
            for j in 0..=self.n {
                let mut acc: Scalar = (0..=self.n)
                    .map(|x| &w[x] * &grid[i][x] * &grid[j][x])
                    .sum();
                if i == j {
                    acc = acc - (&m * self.omega(j)?).recip().expect("weights are nonzero");
                }
                out[i][j] = acc;
            }
        }
        Ok(out)
    }

    /// `C[x][y] = sum_n R_n(x) R_n(y) M Omega_n Omega'_x - delta_{xy}`.
    pub fn closure_residuals(&self, cache: &PochhammerCache) -> Result<Vec<Vec<Scalar>>> {
        let grid = self.eval_grid(cache)?;
        let dual = self.dual();
        let m = self.m()?;
        let om: Vec<Scalar> = (0..=self.n)
            .map(|n| self.omega(n).map(|o| o * &m))
            .collect::<Result<_>>()?;
        let mut out = vec![vec![Scalar::zero(); self.n + 1]; self.n + 1];
        for x in 0..=self.n {
            let wx = dual.omega(x)?;
            for y in 0..=self.n {
                let acc: Scalar = (0..=self.n)
                    .map(|n| &grid[n][x] * &grid[n][y] * &om[n])
                    .sum();
                let mut r = acc * &wx;
                if x == y {
                    r = r - Scalar::one();
                }
                out[x][y] = r;
            }
        }
        Ok(out)
    }
}

/// The family `r_n(x) = (q^{-x};q)_n (gamma delta q^{x+1})^n / (alpha q, gamma q, delta q;q)_n`,
/// leading behaviour of `beta^n R_n(x; alpha, beta, gamma, delta/beta)` as `beta -> 0`.
#[derive(Clone, Debug)]
pub struct RLimitParams {
    pub alpha: Scalar,
    pub gamma: Scalar,
    pub delta: Scalar,
    pub q: Scalar,
    pub n: usize,
}

impl RLimitParams {
    pub fn new(alpha: Scalar, delta: Scalar, q: Scalar, n: usize) -> Result<Self> {
        let gamma = q.pow(-(n as i64) - 1);
        let p = RLimitParams {
            alpha,
            gamma,
            delta,
            q,
            n,
        };
        for k in 0..=n {
            p.denominator(k).map_err(Error::into_genericity)?;
        }
        Ok(p)
    }

    fn denominator(&self, n: usize) -> Result<Scalar> {
        let q = &self.q;
        let d = q_pochhammer_multi(&[&self.alpha * q, &self.gamma * q, &self.delta * q], q, n);
        if d.is_zero() {
            return Err(Error::Pole {
                factor: "(alpha q, gamma q, delta q;q)_n".into(),
                index: n,
            });
        }
        Ok(d)
    }

    pub fn eval(&self, n: usize, x: usize) -> Result<Scalar> {
        r_limit_eval(&self.alpha, &self.gamma, &self.delta, &self.q, n, x)
    }

    /// `gamma delta q^{x+1} r_n(x) - (cA r_{n+1}(x) + gamma delta q^{n+1} r_n(x))`.
    pub fn recurrence_residual(&self, n: usize, x: usize) -> Result<Scalar> {
        let one = Scalar::one();
        let q = &self.q;
        let gd = &self.gamma * &self.delta;
        let qn1 = q.pow(n as i64 + 1);
        let up =
            (&one - &self.alpha * &qn1) * (&one - &self.delta * &qn1) * (&one - &self.gamma * &qn1);
        let next = if up.is_zero() {
            Scalar::zero()
        } else {
            up * self.eval(n + 1, x)?
        };
        let rn = self.eval(n, x)?;
        Ok(&gd * q.pow(x as i64 + 1) * &rn - next - gd * qn1 * rn)
    }

    /// `q^{-n} r_n(x) - ((1 - q^{-x}) r_n(x-1) + q^{-x} r_n(x))`.
    pub fn difference_residual(&self, n: usize, x: usize) -> Result<Scalar> {
        let q = &self.q;
        let qmx = q.pow(-(x as i64));
        let rn = self.eval(n, x)?;
        let prev = if x == 0 {
            Scalar::zero()
        } else {
            (Scalar::one() - &qmx) * self.eval(n, x - 1)?
        };
        Ok(q.pow(-(n as i64)) * &rn - prev - qmx * rn)
    }
}

/// `r_n(x)`; exactly zero for `n > x`.
pub fn r_limit_eval(
    alpha: &Scalar,
    gamma: &Scalar,
    delta: &Scalar,
    q: &Scalar,
    n: usize,
    x: usize,
) -> Result<Scalar> {
    if n > x {
        return Ok(Scalar::zero());
    }
    let num = q_pochhammer(&q.pow(-(x as i64)), q, n)
        * (gamma * delta * q.pow(x as i64 + 1)).pow(n as i64);
    let den = q_pochhammer_multi(&[alpha * q, gamma * q, delta * q], q, n);
    quot(num, &den, "(alpha q, gamma q, delta q;q)_n", n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> Scalar {
        t.parse().unwrap()
    }

    fn sample() -> QRacahParams {
        let q = s("3/5");
        QRacahParams::new(s("1/3"), s("1/7"), q.pow(-4), s("2"), q, 3).unwrap()
    }

    #[test]
    fn truncation_is_detected() {
        assert_eq!(sample().truncation, Truncation::Gamma);
        assert_eq!(sample().dual().truncation, Truncation::Alpha);
        let q = s("3/5");
        let e = QRacahParams::new(s("1/3"), s("1/7"), s("5"), s("2"), q, 3).unwrap_err();
        assert!(matches!(e, Error::Constraint(_)));
    }

    #[test]
    fn boundary_rows_are_one() {
        let p = sample();
        for k in 0..=3 {
            assert_eq!(p.eval(0, k).unwrap(), Scalar::one());
            assert_eq!(p.eval(k, 0).unwrap(), Scalar::one());
        }
    }

    #[test]
    fn recurrence_edges() {
        let p = sample();
        let (a0, b0, c0) = p.abc(0).unwrap();
        assert!(c0.is_zero());
        assert_eq!(&a0 + &b0 + &c0, Scalar::one() + &p.gamma * &p.delta * &p.q);
        assert!(p.abc(3).unwrap().0.is_zero());
        assert_eq!(p.omega(0).unwrap(), Scalar::one());
    }

    #[test]
    fn non_generic_delta_is_rejected() {
        // alpha q / delta = q^{-1} makes (alpha q/delta;q)_2 vanish.
        let q = s("3/5");
        let alpha = s("1/3");
        let delta = &alpha * &q * &q;
        let e = QRacahParams::new(alpha, s("1/7"), q.pow(-4), delta, q, 3).unwrap_err();
        assert!(matches!(e, Error::Genericity { .. }), "{e:?}");
    }

    #[test]
    fn eigenvalue_collision_detected() {
        let q = s("1/2");
        // a q^{x+y+1} = 1 at x = 0, y = 1 when a = q^{-2}.
        let m = EigenvalueMap::new(q.pow(-2), q);
        assert!(m.check_injective(1).is_err());
        assert!(EigenvalueMap::new(s("3"), s("1/2"))
            .check_injective(4)
            .is_ok());
    }

    #[test]
    fn r_limit_vanishes_above_diagonal() {
        let q = s("2/7");
        let p = RLimitParams::new(s("1/3"), s("5/2"), q, 3).unwrap();
        assert_eq!(p.eval(0, 2).unwrap(), Scalar::one());
        assert!(p.eval(3, 1).unwrap().is_zero());
        assert!(!p.eval(2, 3).unwrap().is_zero());
    }
}
