//! Degenerations of the trio overlaps: the Racah relation, the reduced
//! families `R1`, `H1`, `R3`, the reduced Leonard pair built from `r_n`,
//! and floating-point ladders that watch the limits being approached.

use crate::error::{quot, Error, Result};
use crate::matrix::DenseMatrix;
use crate::params::ParameterSet;
use crate::qaskey::{dual_qhahn_eval, qracah_eval_raw, QRacahParams, RLimitParams};
use crate::qseries::{phi, q_pochhammer, q_pochhammer_multi, very_well_poised_sum, PhiSpec};
use crate::report::{Outcome, Recorder, VerificationReport};
use crate::scalar::Scalar;
use crate::wilson::{wilson_eval_raw, GevpCoefficients};

fn grid(nn: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..=nn).flat_map(move |n| (0..=nn).map(move |x| (n, x)))
}

fn qp(q: &Scalar, e: i64) -> Scalar {
    q.pow(e)
}

/// Relation expressing `R_n(x; gamma/beta, beta delta, gamma, alpha/(beta delta))`
/// through products of the two trio q-Racah families.
#[derive(Clone, Debug)]
pub struct RacahRelation {
    pub params: ParameterSet,
    pub outer: QRacahParams,
}

impl RacahRelation {
    pub fn new(ps: &ParameterSet) -> Result<Self> {
        let outer = QRacahParams::new(
            &ps.gamma / &ps.beta,
            &ps.beta * &ps.delta,
            ps.gamma.clone(),
            ps.delta_t.clone(),
            ps.q.clone(),
            ps.n,
        )?;
        let rel = RacahRelation {
            params: ps.clone(),
            outer,
        };
        for (n, x) in grid(ps.n) {
            rel.sum_side(n, x).map_err(Error::into_genericity)?;
        }
        Ok(rel)
    }

    pub fn lhs(&self, n: usize, x: usize) -> Result<Scalar> {
        self.outer.eval(n, x)
    }

    pub fn sum_side(&self, n: usize, x: usize) -> Result<Scalar> {
        let ps = &self.params;
        let (q, al, be, ga, de) = (&ps.q, &ps.alpha, &ps.beta, &ps.gamma, &ps.delta);
        let one = Scalar::one();
        let nn = ps.n;
        let rho = ps.rho()?;
        let rho_t = ps.rho_t()?;
        let bd = be * de;
        let pre_num = q_pochhammer(&(de * qp(q, -(x as i64)) / al), q, x)
            * q_pochhammer(&(qp(q, -(n as i64)) / &bd), q, n)
            * q_pochhammer(&(be * q), q, nn)
            * (al * q).pow(nn as i64);
        let pre_den = q_pochhammer(&(ga * q / be), q, x)
            * q_pochhammer(&(ga * q / be), q, n)
            * q_pochhammer(&(al * be * q * q), q, nn);
        let pre = quot(
            pre_num,
            &pre_den,
            "(gamma q/beta;q)_x (gamma q/beta;q)_n (alpha beta q^2;q)_N",
            n,
        )?;
        let ab = al * be;
        let mut acc = Scalar::zero();
        for i in 0..=nn {
            let num = q_pochhammer_multi(&[al * q, qp(q, -(i as i64)) / ga, &ab * q], q, i)
                * (&one - &ab * qp(q, 2 * i as i64 + 1));
            let den = q_pochhammer_multi(&[q.clone(), &ab * q / ga, be * q], q, i)
                * (&one - &ab * q)
                * (al * q).pow(i as i64);
            acc = acc
                + quot(num, &den, "racah relation weight", i)?
                    * rho_t.eval(i, x)?
                    * rho.eval(i, n)?;
        }
        Ok(pre * acc)
    }

    pub fn residual(&self, n: usize, x: usize) -> Result<Scalar> {
        Ok(self.lhs(n, x)? - self.sum_side(n, x)?)
    }
}

/// Coefficients of a difference relation whose spectral side has only the
/// `x` and `x - 1` neighbours.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoTermDifference {
    pub x_next: Scalar,
    pub x_same: Scalar,
    pub x_prev: Scalar,
    pub z_same: Scalar,
    pub z_prev: Scalar,
}

impl TwoTermDifference {
    pub fn residual(
        &self,
        spectral: &Scalar,
        next: &Scalar,
        same: &Scalar,
        prev: &Scalar,
    ) -> Scalar {
        let lhs = &self.x_next * next + &self.x_same * same + &self.x_prev * prev;
        lhs - spectral * (&self.z_same * same + &self.z_prev * prev)
    }
}

/// Parameters of `R1_n(x) = 4phi3(q^{-n}, gamma delta q^{n+1}, q^{-x}, gamma s q; gamma q, gamma q/beta, beta delta s q^{1-x}; q, q)`.
#[derive(Clone, Debug)]
pub struct R1Params {
    pub beta: Scalar,
    pub gamma: Scalar,
    pub delta: Scalar,
    pub s: Scalar,
    pub q: Scalar,
    pub n: usize,
}

impl R1Params {
    pub fn new(beta: Scalar, delta: Scalar, s: Scalar, q: Scalar, n: usize) -> Result<Self> {
        let gamma = q.pow(-(n as i64) - 1);
        let p = R1Params {
            beta,
            gamma,
            delta,
            s,
            q,
            n,
        };
        for (m, x) in grid(n) {
            p.eval(m, x).map_err(Error::into_genericity)?;
            p.sum_route(m, x).map_err(Error::into_genericity)?;
        }
        for m in 0..=n {
            p.recurrence_coeffs(m).map_err(Error::into_genericity)?;
            p.difference_coeffs(m).map_err(Error::into_genericity)?;
        }
        Ok(p)
    }

    pub fn from_trio(ps: &ParameterSet) -> Result<Self> {
        Self::new(
            ps.beta.clone(),
            ps.delta.clone(),
            ps.s.clone(),
            ps.q.clone(),
            ps.n,
        )
    }

    pub fn eval(&self, n: usize, x: usize) -> Result<Scalar> {
        let (q, be, ga, de, s) = (&self.q, &self.beta, &self.gamma, &self.delta, &self.s);
        phi(&PhiSpec {
            upper: vec![
                ga * de * qp(q, n as i64 + 1),
                qp(q, -(x as i64)),
                ga * s * q,
            ],
            lower: vec![ga * q, ga * q / be, be * de * s * qp(q, 1 - x as i64)],
            q: q.clone(),
            z: q.clone(),
            terminate_at: n,
        })
    }

    /// The same value as a finite sum of dual q-Hahn polynomials
    /// `R^{dqH}_i(n; beta delta, gamma/beta, q^{-N-1})`.
    pub fn sum_route(&self, n: usize, x: usize) -> Result<Scalar> {
        let (q, be, ga, de, s) = (&self.q, &self.beta, &self.gamma, &self.delta, &self.s);
        let nn = self.n;
        let bd = be * de;
        let pre = quot(
            q_pochhammer(&(qp(q, -(n as i64)) / &bd), q, n),
            &(q_pochhammer(&(&bd * s).recip().ok_or(Error::Singular)?, q, x)
                * q_pochhammer(&(ga * q / be), q, n)),
            "(1/(beta delta s);q)_x (gamma q/beta;q)_n",
            x,
        )?;
        let mut acc = Scalar::zero();
        for i in (nn - x)..=nn {
            let k = i + x - nn;
            let num = q_pochhammer(&(qp(q, i as i64 + 1) / s), q, nn - i)
                * q_pochhammer_multi(
                    &[qp(q, -(x as i64)), &bd * qp(q, (nn - x) as i64 + 1)],
                    q,
                    k,
                );
            let den = q_pochhammer(q, q, k) * (&bd * s * qp(q, -(x as i64))).pow(k as i64);
            acc = acc
                + quot(num, &den, "(q;q)_k", k)? * dual_qhahn_eval(&bd, &(ga / be), ga, q, i, n)?;
        }
        Ok(pre * acc)
    }

    fn gd_den(&self, n: usize, lo: i64) -> Scalar {
        let one = Scalar::one();
        let gd = &self.gamma * &self.delta;
        (&one - &gd * qp(&self.q, 2 * n as i64 + lo))
            * (&one - &gd * qp(&self.q, 2 * n as i64 + lo + 1))
    }

    /// Recurrence in `n`, spectral variable `q^{-x} - 1`.
    pub fn recurrence_coeffs(&self, n: usize) -> Result<GevpCoefficients> {
        let one = Scalar::one();
        let (q, be, ga, de, s) = (&self.q, &self.beta, &self.gamma, &self.delta, &self.s);
        let qn = qp(q, n as i64);
        let qn1 = &qn * q;
        let gd = ga * de;
        let d12 = self.gd_den(n, 1);
        let d01 = self.gd_den(n, 0);
        let up = quot(
            (&one - ga * &qn1) * (&one - &gd * &qn1),
            &d12,
            "(1 - gamma delta q^(2n+1))(1 - gamma delta q^(2n+2))",
            n,
        )?;
        let down = quot(
            (&one - de * &qn) * (&one - &qn),
            &d01,
            "(1 - gamma delta q^(2n))(1 - gamma delta q^(2n+1))",
            n,
        )?;
        let z_next = -(de * &qn1 * (be - ga * &qn1) * &up);
        let z_prev = q * ga * (&one - be * de * &qn) * &down;
        let z_same =
            (s - &one) / s - (&one - be * de * &qn1) * &up + &gd * &qn1 * (be - ga * &qn) * &down;
        let bs = be * s;
        let x_next = -((be - ga * &qn1) * (&one - be * de * s * &qn1) * &up / &bs);
        let x_prev = q * ga * (&one - be * de * &qn) * (ga * &qn - &bs) * &down / &bs;
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

    /// Difference in `x`, spectral variable `(1 - q^n)(q^{-n} - gamma delta q)`.
    pub fn difference_coeffs(&self, x: usize) -> Result<TwoTermDifference> {
        let one = Scalar::one();
        let (q, be, ga, de, s) = (&self.q, &self.beta, &self.gamma, &self.delta, &self.s);
        let qx = qp(q, x as i64);
        let bd = be * de;
        let bs = be * s;
        let z_prev = quot(
            (&one - &qx) * (&bd - ga * &qx),
            &(&bd * s - qp(q, x as i64 - 1)),
            "beta delta s - q^(x-1)",
            x,
        )?;
        let z_same = ga * &qx * q - s.recip().ok_or(Error::Singular)?;
        let x_next = (&one - ga * &qx * q) * (&bd * s - &qx) * (be - ga * &qx * q) / (&bs * &qx);
        let x_prev =
            (&one - &qx) * (&bd - ga * &qx) * (&bs - ga * &qx) / (&bs * qp(q, x as i64 - 1));
        let x_same = -&x_next - &x_prev;
        Ok(TwoTermDifference {
            x_next,
            x_same,
            x_prev,
            z_same,
            z_prev,
        })
    }

    pub fn recurrence_residual(&self, n: usize, x: usize) -> Result<Scalar> {
        let co = self.recurrence_coeffs(n)?;
        let f = |m: usize| self.eval(m, x);
        let next = if n < self.n {
            f(n + 1)?
        } else {
            Scalar::zero()
        };
        let prev = if n > 0 { f(n - 1)? } else { Scalar::zero() };
        Ok(co.residual(
            &(qp(&self.q, -(x as i64)) - Scalar::one()),
            &next,
            &f(n)?,
            &prev,
        ))
    }

    pub fn difference_residual(&self, n: usize, x: usize) -> Result<Scalar> {
        let co = self.difference_coeffs(x)?;
        let f = |y: usize| self.eval(n, y);
        let next = if x < self.n {
            f(x + 1)?
        } else {
            Scalar::zero()
        };
        let prev = if x > 0 { f(x - 1)? } else { Scalar::zero() };
        Ok(co.residual(
            &two_term_spectral(&self.q, &self.gamma, &self.delta, n),
            &next,
            &f(x)?,
            &prev,
        ))
    }
}

fn two_term_spectral(q: &Scalar, gamma: &Scalar, delta: &Scalar, n: usize) -> Scalar {
    (Scalar::one() - qp(q, n as i64)) * (qp(q, -(n as i64)) - gamma * delta * q)
}

/// Parameters of `H1_n(x) = 3phi2(q^{-n}, gamma delta q^{n+1}, q^{-x}; gamma q, beta delta q^{1-x}; q, q)`.
#[derive(Clone, Debug)]
pub struct H1Params {
    pub beta: Scalar,
    pub gamma: Scalar,
    pub delta: Scalar,
    pub q: Scalar,
    pub n: usize,
}

/// Rank and spectrum facts showing a matrix with a single eigenvalue is
/// not diagonalizable.
#[derive(Clone, Debug, PartialEq)]
pub struct JordanEvidence {
    /// The repeated eigenvalue read off the diagonal.
    pub eigenvalue: Scalar,
    /// `M - eigenvalue I` is strictly lower triangular.
    pub shifted_strictly_lower: bool,
    pub shifted_rank: usize,
}

impl JordanEvidence {
    /// A diagonalizable matrix with one eigenvalue is a multiple of the
    /// identity, so a nonzero shifted rank rules it out.
    pub fn non_diagonalizable(&self) -> bool {
        self.shifted_strictly_lower && self.shifted_rank > 0
    }
}

impl H1Params {
    pub fn new(beta: Scalar, delta: Scalar, q: Scalar, n: usize) -> Result<Self> {
        let gamma = q.pow(-(n as i64) - 1);
        let p = H1Params {
            beta,
            gamma,
            delta,
            q,
            n,
        };
        for (m, x) in grid(n) {
            p.eval(m, x).map_err(Error::into_genericity)?;
        }
        for m in 0..=n {
            p.recurrence_coeffs(m).map_err(Error::into_genericity)?;
            p.difference_coeffs(m).map_err(Error::into_genericity)?;
        }
        Ok(p)
    }

    pub fn from_trio(ps: &ParameterSet) -> Result<Self> {
        Self::new(ps.beta.clone(), ps.delta.clone(), ps.q.clone(), ps.n)
    }

    pub fn eval(&self, n: usize, x: usize) -> Result<Scalar> {
        let (q, be, ga, de) = (&self.q, &self.beta, &self.gamma, &self.delta);
        phi(&PhiSpec {
            upper: vec![ga * de * qp(q, n as i64 + 1), qp(q, -(x as i64))],
            lower: vec![ga * q, be * de * qp(q, 1 - x as i64)],
            q: q.clone(),
            z: q.clone(),
            terminate_at: n,
        })
    }

    pub fn recurrence_coeffs(&self, n: usize) -> Result<GevpCoefficients> {
        let one = Scalar::one();
        let (q, be, ga, de) = (&self.q, &self.beta, &self.gamma, &self.delta);
        let qn = qp(q, n as i64);
        let qn1 = &qn * q;
        let gd = ga * de;
        let d12 = (&one - &gd * qp(q, 2 * n as i64 + 2)) * (&one - &gd * qp(q, 2 * n as i64 + 1));
        let d01 = (&one - &gd * qp(q, 2 * n as i64 + 1)) * (&one - &gd * qp(q, 2 * n as i64));
        let up = quot(
            (&one - &gd * &qn1) * (&one - ga * &qn1),
            &d12,
            "(1 - gamma delta q^(2n+1))(1 - gamma delta q^(2n+2))",
            n,
        )?;
        let down = quot(
            (&one - de * &qn) * (&one - &qn),
            &d01,
            "(1 - gamma delta q^(2n))(1 - gamma delta q^(2n+1))",
            n,
        )?;
        let z_next = -(&up * be * de * &qn1);
        let z_prev = -(&down * &gd * be * &qn1);
        let z_same = -&z_next - &z_prev - &one;
        let x_next = -(&up * (&one - be * de * &qn1));
        let x_prev = &down * (be - ga * &qn) * &gd * &qn1;
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

    pub fn difference_coeffs(&self, x: usize) -> Result<TwoTermDifference> {
        let one = Scalar::one();
        let (q, be, ga, de) = (&self.q, &self.beta, &self.gamma, &self.delta);
        let qx = qp(q, x as i64);
        let bd = be * de;
        let z_prev = quot(
            &bd * (&one - &qx),
            &(&bd - qp(q, x as i64 - 1)),
            "beta delta - q^(x-1)",
            x,
        )?;
        let z_same = -one.clone();
        let qmx = qp(q, -(x as i64));
        let x_next = (&bd - &qx) * (&qmx - ga * q);
        let x_prev = de * q * (be - ga * &qx) * (&qmx - &one);
        let x_same = -&x_next - &x_prev;
        Ok(TwoTermDifference {
            x_next,
            x_same,
            x_prev,
            z_same,
            z_prev,
        })
    }

    pub fn recurrence_residual(&self, n: usize, x: usize) -> Result<Scalar> {
        let co = self.recurrence_coeffs(n)?;
        let f = |m: usize| self.eval(m, x);
        let next = if n < self.n {
            f(n + 1)?
        } else {
            Scalar::zero()
        };
        let prev = if n > 0 { f(n - 1)? } else { Scalar::zero() };
        Ok(co.residual(
            &(qp(&self.q, -(x as i64)) - Scalar::one()),
            &next,
            &f(n)?,
            &prev,
        ))
    }

    pub fn difference_residual(&self, n: usize, x: usize) -> Result<Scalar> {
        let co = self.difference_coeffs(x)?;
        let f = |y: usize| self.eval(n, y);
        let next = if x < self.n {
            f(x + 1)?
        } else {
            Scalar::zero()
        };
        let prev = if x > 0 { f(x - 1)? } else { Scalar::zero() };
        Ok(co.residual(
            &two_term_spectral(&self.q, &self.gamma, &self.delta, n),
            &next,
            &f(x)?,
            &prev,
        ))
    }

    /// The spectral-side matrix of the difference relation, row `x` holding
    /// the coefficients of `f(x)` and `f(x - 1)`.
    pub fn difference_z_matrix(&self) -> Result<DenseMatrix> {
        let size = self.n + 1;
        let mut m = DenseMatrix::zeros(size, size);
        for x in 0..size {
            let co = self.difference_coeffs(x)?;
            m[(x, x)] = co.z_same;
            if x > 0 {
                m[(x, x - 1)] = co.z_prev;
            }
        }
        Ok(m)
    }

    pub fn jordan_evidence(&self) -> Result<JordanEvidence> {
        let m = self.difference_z_matrix()?;
        let eigenvalue = m[(0, 0)].clone();
        let constant = (0..m.rows()).all(|i| m[(i, i)] == eigenvalue);
        let shifted = m.sub(&DenseMatrix::identity(m.rows()).scale(&eigenvalue));
        let strictly_lower =
            constant && (0..m.rows()).all(|i| (i..m.cols()).all(|j| shifted[(i, j)].is_zero()));
        Ok(JordanEvidence {
            eigenvalue,
            shifted_strictly_lower: strictly_lower,
            shifted_rank: shifted.rank(),
        })
    }
}

/// `R3_n(x)`, the limit `alpha = beta -> 0`, `s = sigma/alpha` of the trio
/// Wilson function, as a balanced `4phi3` with prefactor.
#[derive(Clone, Debug)]
pub struct R3Params {
    pub sigma: Scalar,
    pub gamma: Scalar,
    pub delta: Scalar,
    pub q: Scalar,
    pub n: usize,
}

impl R3Params {
    pub fn new(sigma: Scalar, delta: Scalar, q: Scalar, n: usize) -> Result<Self> {
        let gamma = q.pow(-(n as i64) - 1);
        let p = R3Params {
            sigma,
            gamma,
            delta,
            q,
            n,
        };
        for (m, x) in grid(n) {
            p.eval(m, x).map_err(Error::into_genericity)?;
            p.wilson_route(m, x).map_err(Error::into_genericity)?;
        }
        Ok(p)
    }

    pub fn eval(&self, n: usize, x: usize) -> Result<Scalar> {
        r3_eval(&self.sigma, &self.delta, &self.gamma, &self.q, n, x)
    }

    /// The very-well-poised `8phi7` at argument `sigma q` this limit lands on.
    pub fn wilson_route(&self, n: usize, x: usize) -> Result<Scalar> {
        let (q, si, ga, de) = (&self.q, &self.sigma, &self.gamma, &self.delta);
        let a = ga * si * q;
        let tail = [
            ga * de * qp(q, n as i64 + 1),
            qp(q, -(x as i64)),
            ga / de * qp(q, x as i64 + 1),
            &a / ga,
        ];
        very_well_poised_sum(&a, &tail, q, &(si * q), n)
    }
}

/// `(gamma sigma q^2, q^{-n}/delta;q)_n / (sigma q^{1-n}/delta, gamma q;q)_n`
/// times `4phi3(q^{-n}, gamma delta q^{n+1}, sigma q, sigma delta q; gamma sigma q^{x+2}, sigma delta q^{1-x}, delta q; q, q)`.
pub fn r3_eval(
    sigma: &Scalar,
    delta: &Scalar,
    gamma: &Scalar,
    q: &Scalar,
    n: usize,
    x: usize,
) -> Result<Scalar> {
    let ni = n as i64;
    let pre = quot(
        q_pochhammer_multi(&[gamma * sigma * q * q, qp(q, -ni) / delta], q, n),
        &q_pochhammer_multi(&[sigma * qp(q, 1 - ni) / delta, gamma * q], q, n),
        "(sigma q^(1-n)/delta, gamma q;q)_n",
        n,
    )?;
    let series = phi(&PhiSpec {
        upper: vec![gamma * delta * qp(q, ni + 1), sigma * q, sigma * delta * q],
        lower: vec![
            gamma * sigma * qp(q, x as i64 + 2),
            sigma * delta * qp(q, 1 - x as i64),
            delta * q,
        ],
        q: q.clone(),
        z: q.clone(),
        terminate_at: n,
    })?;
    Ok(pre * series)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReducedForm {
    /// `(a0 + a1 r^x, a3 + a4 r^{-x})` in either orientation.
    QRed,
    /// Both sequences affine in `x`.
    LRed,
    Other,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Compatibility {
    pub compatible: bool,
    pub form: ReducedForm,
}

/// Eigenvalue sequences `xi_x`, `lambda_x` of a candidate reduced trio.
#[derive(Clone, Debug)]
pub struct ReducedSequences {
    pub xi: Vec<Scalar>,
    pub lambda: Vec<Scalar>,
}

fn distinct(v: &[Scalar]) -> bool {
    (0..v.len()).all(|i| (0..i).all(|j| v[i] != v[j]))
}

/// Ratio of consecutive first differences if it is constant along `v`.
fn common_ratio(v: &[Scalar]) -> Option<Scalar> {
    let d: Vec<Scalar> = v.windows(2).map(|w| &w[1] - &w[0]).collect();
    if d.iter().any(Scalar::is_zero) {
        return None;
    }
    let r = &d[1] / &d[0];
    d.windows(2).all(|w| w[1] == &w[0] * &r).then_some(r)
}

impl ReducedSequences {
    pub fn new(xi: Vec<Scalar>, lambda: Vec<Scalar>) -> Result<Self> {
        if xi.len() != lambda.len() || xi.is_empty() {
            return Err(Error::Shape(
                "sequences must be nonempty and of equal length".into(),
            ));
        }
        if !distinct(&xi) || !distinct(&lambda) {
            return Err(Error::Constraint(
                "sequence entries must be pairwise distinct".into(),
            ));
        }
        Ok(ReducedSequences { xi, lambda })
    }

    /// Every `(x, i)` with `1 <= x <= N`, `i < x` satisfies
    /// `(lambda_x - lambda_i)(xi_x - xi_{i+1}) = (xi_x - xi_i)(lambda_{x-1} - lambda_i)`.
    pub fn relation_holds(&self) -> bool {
        let (xi, la) = (&self.xi, &self.lambda);
        (1..xi.len()).all(|x| {
            (0..x).all(|i| {
                (&la[x] - &la[i]) * (&xi[x] - &xi[i + 1])
                    == (&xi[x] - &xi[i]) * (&la[x - 1] - &la[i])
            })
        })
    }

    pub fn form(&self) -> ReducedForm {
        if self.xi.len() < 3 {
            return ReducedForm::Other;
        }
        match (common_ratio(&self.xi), common_ratio(&self.lambda)) {
            (Some(a), Some(b)) if a.is_one() && b.is_one() => ReducedForm::LRed,
            (Some(a), Some(b)) if !a.is_one() && (&a * &b).is_one() => ReducedForm::QRed,
            _ => ReducedForm::Other,
        }
    }

    pub fn classify(&self) -> Compatibility {
        Compatibility {
            compatible: self.relation_holds(),
            form: self.form(),
        }
    }
}

/// `zeta(x, i) = prod_{j<i} (lambda_x - lambda_j) / a_j`.
pub fn reduced_coordinates(lambda: &[Scalar], lowering: &[Scalar]) -> Result<DenseMatrix> {
    let size = lambda.len();
    let mut m = DenseMatrix::zeros(size, size);
    for x in 0..size {
        let mut acc = Scalar::one();
        for i in 0..size {
            m[(i, x)] = acc.clone();
            if i + 1 < size {
                acc = quot(acc * (&lambda[x] - &lambda[i]), &lowering[i], "A_i", i)?;
            }
        }
    }
    Ok(m)
}

/// `Z = diag(q^{-i})` and `V z_i = (1 - alpha q^i)(1 - delta q^i)(1 - gamma q^i) z_{i-1} + gamma delta q^{i+1} z_i`,
/// with the eigenbasis `P[i][n] = r_i(n)`.
#[derive(Clone, Debug)]
pub struct ReducedLeonardPair {
    pub params: RLimitParams,
    pub z_z: DenseMatrix,
    pub v_z: DenseMatrix,
    pub p: DenseMatrix,
}

pub fn build_reduced_lp(p: &RLimitParams) -> Result<ReducedLeonardPair> {
    let one = Scalar::one();
    let (q, al, ga, de) = (&p.q, &p.alpha, &p.gamma, &p.delta);
    let size = p.n + 1;
    let z_z = DenseMatrix::diagonal((0..size).map(|i| qp(q, -(i as i64))).collect());
    let mut v_z = DenseMatrix::zeros(size, size);
    for i in 0..size {
        let qi = qp(q, i as i64);
        v_z[(i, i)] = ga * de * &qi * q;
        if i > 0 {
            v_z[(i - 1, i)] = (&one - al * &qi) * (&one - de * &qi) * (&one - ga * &qi);
        }
    }
    let pm = DenseMatrix::try_from_fn(size, size, |i, n| p.eval(i, n))?;
    if pm.rank() < size {
        return Err(Error::Genericity {
            factor: "r_n(n)".into(),
            index: 0,
        });
    }
    Ok(ReducedLeonardPair {
        params: p.clone(),
        z_z,
        v_z,
        p: pm,
    })
}

impl ReducedLeonardPair {
    /// `(xi_x, lambda_x) = (q^{-x}, gamma delta q^{x+1})`.
    pub fn sequences(&self) -> Result<ReducedSequences> {
        let size = self.p.rows();
        ReducedSequences::new(
            (0..size).map(|i| self.z_z[(i, i)].clone()).collect(),
            (0..size).map(|i| self.v_z[(i, i)].clone()).collect(),
        )
    }

    pub fn verify(&self) -> VerificationReport {
        let rp = &self.params;
        let size = rp.n + 1;
        let fp = [("alpha", &rp.alpha), ("delta", &rp.delta), ("q", &rp.q)]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        let mut rec = Recorder::new(fp, rp.n);
        let q = &rp.q;
        let lam: Vec<Scalar> = (0..size).map(|i| self.v_z[(i, i)].clone()).collect();
        rec.run(
            "reduced-lp.v-eigen",
            "V v_n = gamma delta q^{n+1} v_n",
            || {
                let r = self
                    .v_z
                    .mul(&self.p)
                    .sub(&self.p.mul(&DenseMatrix::diagonal(lam.clone())));
                Ok(Outcome::Residuals(r.row_major()))
            },
        );
        rec.run(
            "reduced-lp.z-action",
            "Z v_n = (1 - q^{-n}) v_{n-1} + q^{-n} v_n",
            || {
                let mut t = DenseMatrix::zeros(size, size);
                for n in 0..size {
                    t[(n, n)] = qp(q, -(n as i64));
                    if n > 0 {
                        t[(n - 1, n)] = Scalar::one() - qp(q, -(n as i64));
                    }
                }
                Ok(Outcome::Residuals(
                    self.z_z.mul(&self.p).sub(&self.p.mul(&t)).row_major(),
                ))
            },
        );
        rec.run(
            "reduced-lp.v-bidiagonal-in-z",
            "V upper bidiagonal with nonzero superdiagonal in the z basis",
            || {
                let b = self.v_z.band_predicates();
                let sup = (1..size).all(|i| !self.v_z[(i - 1, i)].is_zero());
                Ok(Outcome::predicate(
                    b.upper_bidiagonal && sup,
                    format!("{b:?}"),
                ))
            },
        );
        rec.run(
            "reduced-lp.z-bidiagonal-in-v",
            "Z upper bidiagonal with nonzero superdiagonal in the v basis",
            || {
                let zv = self.p.inverse()?.mul(&self.z_z.mul(&self.p));
                let b = zv.band_predicates();
                let sup = (1..size).all(|i| !zv[(i - 1, i)].is_zero());
                Ok(Outcome::predicate(
                    b.upper_bidiagonal && sup,
                    format!("{b:?}"),
                ))
            },
        );
        rec.run(
            "reduced-lp.coordinates-two-routes",
            "zeta(x, i) against r_i(x)",
            || {
                let lowering: Vec<Scalar> =
                    (1..size).map(|i| self.v_z[(i - 1, i)].clone()).collect();
                let z = reduced_coordinates(&lam, &lowering)?;
                let mut out = Vec::new();
                for x in 0..size {
                    for i in 0..size {
                        out.push(&z[(i, x)] * &self.p[(0, x)] - &self.p[(i, x)] * &z[(0, x)]);
                    }
                }
                Ok(Outcome::Residuals(out))
            },
        );
        rec.run(
            "reduced-lp.r-vanishes-above-diagonal",
            "r_n(x) = 0 for n > x",
            || {
                let bad: Vec<String> = grid(rp.n)
                    .filter(|(n, x)| n > x && !self.p[(*n, *x)].is_zero())
                    .map(|(n, x)| format!("({n}, {x})"))
                    .collect();
                Ok(Outcome::predicate(bad.is_empty(), bad.join(", ")))
            },
        );
        rec.run(
            "reduced-lp.r-recurrence",
            "three-term relation of r_n in n",
            || Outcome::from_grid(grid(rp.n).map(|(n, x)| rp.recurrence_residual(n, x))),
        );
        rec.run(
            "reduced-lp.r-difference",
            "two-term relation of r_n in x",
            || Outcome::from_grid(grid(rp.n).map(|(n, x)| rp.difference_residual(n, x))),
        );
        rec.run(
            "reduced-lp.sequences-q-red",
            "eigenvalue sequences are compatible and of q-red form",
            || {
                let c = self.sequences()?.classify();
                Ok(Outcome::predicate(
                    c.compatible && c.form == ReducedForm::QRed,
                    format!("{c:?}"),
                ))
            },
        );
        rec.finish()
    }
}

pub const LADDER_PRECISION: usize = 256;
/// Smallest accepted error ratio between consecutive rungs.
pub const LADDER_MIN_RATIO: f64 = 5.0;
/// The limit parameter takes the values `10^{-k}` for these `k`.
pub const LADDER_EXPONENTS: [i64; 3] = [4, 5, 6];

#[derive(Clone, Debug)]
pub struct LadderRung {
    pub t: Scalar,
    pub error: Scalar,
}

#[derive(Clone, Debug)]
pub struct LimitLadder {
    pub rungs: Vec<LadderRung>,
    pub min_ratio: f64,
}

impl LimitLadder {
    /// `error_k / error_{k+1}`; infinite when the later error vanishes.
    pub fn ratios(&self) -> Vec<f64> {
        self.rungs
            .windows(2)
            .map(|w| {
                if w[1].error.is_zero() {
                    f64::INFINITY
                } else {
                    (&w[0].error / &w[1].error).to_f64()
                }
            })
            .collect()
    }

    pub fn passed(&self) -> bool {
        self.rungs.len() >= 2 && self.ratios().iter().all(|r| *r >= self.min_ratio)
    }

    pub fn outcome(&self) -> Outcome {
        let errors: Vec<String> = self
            .rungs
            .iter()
            .map(|r| format!("{:.3e}", r.error.to_f64()))
            .collect();
        let ratios: Vec<String> = self.ratios().iter().map(|r| format!("{r:.2}")).collect();
        Outcome::Ladder {
            passed: self.passed(),
            error: self
                .rungs
                .last()
                .map(|r| r.error.clone())
                .unwrap_or_else(Scalar::zero),
            detail: format!(
                "errors [{}], ratios [{}], required >= {}",
                errors.join(", "),
                ratios.join(", "),
                self.min_ratio
            ),
        }
    }
}

/// Runs `error(t)` at `t = 10^{-k}` (as a float of `precision` bits) for each `k`.
pub fn run_ladder(
    precision: usize,
    exponents: &[i64],
    min_ratio: f64,
    error: impl Fn(&Scalar) -> Result<Scalar>,
) -> Result<LimitLadder> {
    let mut rungs = Vec::new();
    for &k in exponents {
        let t = Scalar::from(10).pow(-k).to_float(precision);
        rungs.push(LadderRung {
            error: error(&t)?,
            t,
        });
    }
    Ok(LimitLadder { rungs, min_ratio })
}

fn max_grid_error(nn: usize, cell: impl Fn(usize, usize) -> Result<Scalar>) -> Result<Scalar> {
    let mut worst = Scalar::zero();
    for (n, x) in grid(nn) {
        let e = cell(n, x)?.abs();
        if e > worst {
            worst = e;
        }
    }
    Ok(worst)
}

/// Float copies of the trio parameters at `precision` bits.
struct FloatTrio {
    q: Scalar,
    alpha: Scalar,
    beta: Scalar,
    delta: Scalar,
    s: Scalar,
    gamma: Scalar,
}

impl FloatTrio {
    fn new(ps: &ParameterSet, precision: usize) -> Self {
        let q = ps.q.to_float(precision);
        FloatTrio {
            gamma: q.pow(-(ps.n as i64) - 1),
            alpha: ps.alpha.to_float(precision),
            beta: ps.beta.to_float(precision),
            delta: ps.delta.to_float(precision),
            s: ps.s.to_float(precision),
            q,
        }
    }

    /// Trio Wilson function at explicit `(alpha, beta, s)`.
    fn wilson(
        &self,
        alpha: &Scalar,
        beta: &Scalar,
        s: &Scalar,
        n: usize,
        x: usize,
    ) -> Result<Scalar> {
        let (q, ga, de) = (&self.q, &self.gamma, &self.delta);
        wilson_eval_raw(
            &(alpha * ga * s * q),
            &(ga * de),
            &(alpha * ga / (beta * de)),
            &ga.recip().ok_or(Error::Singular)?,
            &alpha.recip().ok_or(Error::Singular)?,
            &(beta / ga),
            q,
            n,
            x,
        )
    }
}

/// The four limit ladders, each against exact values of the limiting family.
pub fn verify_limit_ladders(ps: &ParameterSet, precision: usize) -> VerificationReport {
    let mut rec = Recorder::new(ps.fingerprint(), ps.n);
    let f = FloatTrio::new(ps, precision);
    let nn = ps.n;
    let ladder = |err: &dyn Fn(&Scalar) -> Result<Scalar>| -> Result<Outcome> {
        Ok(run_ladder(precision, &LADDER_EXPONENTS, LADDER_MIN_RATIO, err)?.outcome())
    };
    rec.run(
        "ladder.racah-s-to-0",
        "trio Wilson function as s -> 0 tends to the q-Racah side of the Racah relation",
        || {
            let target = RacahRelation::new(ps)?;
            let exact = DenseMatrix::try_from_fn(nn + 1, nn + 1, |n, x| target.lhs(n, x))?;
            ladder(&|t| {
                max_grid_error(nn, |n, x| {
                    Ok(f.wilson(&f.alpha, &f.beta, t, n, x)? - &exact[(n, x)])
                })
            })
        },
    );
    rec.run(
        "ladder.r1-alpha-to-0",
        "trio Wilson function as alpha -> 0 tends to R1",
        || {
            let target = R1Params::from_trio(ps)?;
            let exact = DenseMatrix::try_from_fn(nn + 1, nn + 1, |n, x| target.eval(n, x))?;
            ladder(&|t| {
                max_grid_error(nn, |n, x| {
                    Ok(f.wilson(t, &f.beta, &f.s, n, x)? - &exact[(n, x)])
                })
            })
        },
    );
    rec.run(
        "ladder.r3-alpha-to-0",
        "trio Wilson function at alpha = beta, s = sigma/alpha as alpha -> 0 tends to R3",
        || {
            let target = R3Params::new(ps.s.clone(), ps.delta.clone(), ps.q.clone(), nn)?;
            let exact = DenseMatrix::try_from_fn(nn + 1, nn + 1, |n, x| target.eval(n, x))?;
            ladder(&|t| {
                max_grid_error(nn, |n, x| {
                    Ok(f.wilson(t, t, &(&f.s / t), n, x)? - &exact[(n, x)])
                })
            })
        },
    );
    rec.run(
        "ladder.r-limit-beta-to-0",
        "beta^n R_n(x; alpha, beta, gamma, delta/beta) as beta -> 0 tends to r_n(x)",
        || {
            let target = RLimitParams::new(ps.alpha.clone(), ps.delta.clone(), ps.q.clone(), nn)?;
            let exact = DenseMatrix::try_from_fn(nn + 1, nn + 1, |n, x| target.eval(n, x))?;
            ladder(&|t| {
                max_grid_error(nn, |n, x| {
                    let v = qracah_eval_raw(&f.alpha, t, &f.gamma, &(&f.delta / t), &f.q, n, x)?;
                    Ok(t.pow(n as i64) * v - &exact[(n, x)])
                })
            })
        },
    );
    rec.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> Scalar {
        t.parse().unwrap()
    }

    #[test]
    fn ladder_ratio_rules() {
        let mk = |errs: &[i64]| LimitLadder {
            rungs: errs
                .iter()
                .map(|e| LadderRung {
                    t: Scalar::one(),
                    error: Scalar::int(*e),
                })
                .collect(),
            min_ratio: LADDER_MIN_RATIO,
        };
        assert!(mk(&[100, 10, 1]).passed());
        assert!(!mk(&[100, 50, 1]).passed());
        assert!(mk(&[0, 0, 0]).passed());
    }

    #[test]
    fn form_fingerprints() {
        let q = s("1/2");
        let geo = ReducedSequences::new(
            (0..4).map(|x| q.pow(-x)).collect(),
            (0..4).map(|x| q.pow(x) * s("3")).collect(),
        )
        .unwrap();
        assert_eq!(geo.form(), ReducedForm::QRed);
        let lin = ReducedSequences::new(
            (0..4).map(Scalar::int).collect(),
            (0..4).map(Scalar::int).collect(),
        )
        .unwrap();
        assert_eq!(lin.form(), ReducedForm::LRed);
    }

    #[test]
    fn h1_z_matrix_is_lower_bidiagonal() {
        let h = H1Params::new(s("1/7"), s("2"), s("3/5"), 3).unwrap();
        let m = h.difference_z_matrix().unwrap();
        assert!(m.band_predicates().lower_bidiagonal);
        assert!(h.jordan_evidence().unwrap().non_diagonalizable());
    }
}
