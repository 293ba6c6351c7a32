//! The concrete trio `(V, V~, Z)`: matrices in the `z` basis, the two
//! eigenbases and their duals, and the checks built on them.

use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, RationalFunction};
use crate::params::ParameterSet;
use crate::qaskey::{lambda, QRacahParams};
use crate::qseries::{q_pochhammer_multi, PochhammerCache};
use crate::report::{Outcome, Recorder, VerificationReport};
use crate::scalar::Scalar;
use crate::wilson::{trio_gevp_coeffs, trio_spectral, trio_wilson_gevp_residual, WilsonParams};

#[derive(Clone, Debug)]
pub struct TrioRealization {
    pub params: ParameterSet,
    /// Diagonal, entries `zeta_i`.
    pub z_z: DenseMatrix,
    /// Column `i` is the image of `z_i`.
    pub v_z: DenseMatrix,
    pub vt_z: DenseMatrix,
    /// Column `n` holds the `z` coordinates of `v_n`.
    pub p_v: DenseMatrix,
    /// Column `x` holds the `z` coordinates of `v~_x`.
    pub p_vt: DenseMatrix,
    /// Column `n` holds the `z` coordinates of the dual vector `v*_n`.
    pub d_v: DenseMatrix,
    pub d_vt: DenseMatrix,
}

/// `(beta delta s)^i (q/s, q alpha/delta;q)_i / (beta delta q, alpha beta s q;q)_i`,
/// the normalization of the second eigenbasis.
pub fn second_basis_norm(ps: &ParameterSet, i: usize) -> Scalar {
    let (q, al, be, de, s) = (&ps.q, &ps.alpha, &ps.beta, &ps.delta, &ps.s);
    (be * de * s).pow(i as i64) * q_pochhammer_multi(&[q / s, q * al / de], q, i)
        / q_pochhammer_multi(&[be * de * q, al * be * s * q], q, i)
}

pub fn build_realization(ps: &ParameterSet) -> Result<TrioRealization> {
    let nn = ps.n;
    let size = nn + 1;
    let rho = ps.rho()?;
    let rho_t = ps.rho_t()?;
    let cache = PochhammerCache::new();
    let r = rho.eval_grid(&cache)?;
    let rt = rho_t.eval_grid(&cache)?;
    let abc: Vec<_> = (0..=nn).map(|i| rho.abc(i)).collect::<Result<_>>()?;
    let abct: Vec<_> = (0..=nn).map(|i| rho_t.abc(i)).collect::<Result<_>>()?;

    let z_z = DenseMatrix::diagonal((0..=nn).map(|i| ps.zeta(i)).collect());
    let mut v_z = DenseMatrix::zeros(size, size);
    let mut vt_z = DenseMatrix::zeros(size, size);
    for i in 0..=nn {
        v_z[(i, i)] = abc[i].1.clone();
        vt_z[(i, i)] = abct[i].1.clone();
        if i < nn {
            v_z[(i + 1, i)] = abc[i + 1].2.clone();
            vt_z[(i + 1, i)] = &abct[i + 1].2 * ps.nu(i + 1);
        }
        if i > 0 {
            v_z[(i - 1, i)] = abc[i - 1].0.clone();
            vt_z[(i - 1, i)] = &abct[i - 1].0 / ps.nu(i);
        }
    }

    let norms: Vec<Scalar> = (0..=nn).map(|i| second_basis_norm(ps, i)).collect();
    let p_v = DenseMatrix::from_fn(size, size, |i, n| r[i][n].clone());
    let p_vt = DenseMatrix::from_fn(size, size, |i, x| &norms[i] * &rt[i][x]);

    let dual = rho.dual();
    let dual_t = rho_t.dual();
    let (m, mt) = (dual.m()?, dual_t.m()?);
    let outer: Vec<Scalar> = (0..=nn)
        .map(|n| dual.omega(n).map(|o| o * &m))
        .collect::<Result<_>>()?;
    let outer_t: Vec<Scalar> = (0..=nn)
        .map(|x| dual_t.omega(x).map(|o| o * &mt))
        .collect::<Result<_>>()?;
    let inner: Vec<Scalar> = (0..=nn).map(|i| rho.omega(i)).collect::<Result<_>>()?;
    let inner_t: Vec<Scalar> = (0..=nn).map(|i| rho_t.omega(i)).collect::<Result<_>>()?;
    let d_v = DenseMatrix::from_fn(size, size, |i, n| &outer[n] * &inner[i] * &r[i][n]);
    let d_vt = DenseMatrix::from_fn(size, size, |i, x| {
        &outer_t[x] / &norms[i] * &inner_t[i] * &rt[i][x]
    });

    Ok(TrioRealization {
        params: ps.clone(),
        z_z,
        v_z,
        vt_z,
        p_v,
        p_vt,
        d_v,
        d_vt,
    })
}

/// `(P, P^{-1})` for one basis.
#[derive(Clone, Copy)]
pub struct Basis<'a> {
    pub p: &'a DenseMatrix,
    pub p_inv: &'a DenseMatrix,
}

impl Basis<'_> {
    pub fn express(&self, m: &DenseMatrix) -> DenseMatrix {
        m.conjugate(self.p, self.p_inv)
    }
}

/// Band facts for `(first, second, third)` expressed in two bases.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LtAxioms {
    pub first_diagonal: bool,
    pub third_tridiagonal_in_first: bool,
    /// `second * third` tridiagonal in the first basis.
    pub product_tridiagonal_in_first: bool,
    pub second_diagonal: bool,
    pub third_tridiagonal_in_second: bool,
    /// `third * first` tridiagonal in the second basis.
    pub product_tridiagonal_in_second: bool,
}

impl LtAxioms {
    pub fn all(&self) -> bool {
        self.first_diagonal
            && self.third_tridiagonal_in_first
            && self.product_tridiagonal_in_first
            && self.second_diagonal
            && self.third_tridiagonal_in_second
            && self.product_tridiagonal_in_second
    }
}

/// Checks the trio axioms for any triple, given its two candidate bases.
pub fn check_lt_axioms(
    first: &DenseMatrix,
    second: &DenseMatrix,
    third: &DenseMatrix,
    b1: Basis<'_>,
    b2: Basis<'_>,
) -> LtAxioms {
    LtAxioms {
        first_diagonal: b1
            .express(first)
            .band_predicates()
            .multiplicity_free_diagonal,
        third_tridiagonal_in_first: b1.express(third).band_predicates().tridiagonal,
        product_tridiagonal_in_first: b1.express(&second.mul(third)).band_predicates().tridiagonal,
        second_diagonal: b2
            .express(second)
            .band_predicates()
            .multiplicity_free_diagonal,
        third_tridiagonal_in_second: b2.express(third).band_predicates().tridiagonal,
        product_tridiagonal_in_second: b2.express(&third.mul(first)).band_predicates().tridiagonal,
    }
}

impl TrioRealization {
    pub fn size(&self) -> usize {
        self.params.n + 1
    }

    fn fingerprint(&self) -> Recorder {
        Recorder::new(self.params.fingerprint(), self.params.n)
    }

    /// The dual-basis matrices transposed, which are the inverses of the
    /// basis matrices once the pairing checks pass.
    pub fn v_basis(&self) -> (DenseMatrix, DenseMatrix) {
        (self.p_v.clone(), self.d_v.transpose())
    }

    pub fn vt_basis(&self) -> (DenseMatrix, DenseMatrix) {
        (self.p_vt.clone(), self.d_vt.transpose())
    }

    /// `D_v^T M P_v`.
    pub fn in_v_basis(&self, m: &DenseMatrix) -> DenseMatrix {
        self.d_v.transpose().mul(&m.mul(&self.p_v))
    }

    /// `D_vt^T M P_vt`.
    pub fn in_vt_basis(&self, m: &DenseMatrix) -> DenseMatrix {
        self.d_vt.transpose().mul(&m.mul(&self.p_vt))
    }

    /// `W[x][n] = <v~*_x, v_n>`.
    pub fn overlaps(&self) -> DenseMatrix {
        self.d_vt.transpose().mul(&self.p_v)
    }

    /// `W~[n][x] = <v*_n, v~_x>`.
    pub fn partner_overlaps(&self) -> DenseMatrix {
        self.d_v.transpose().mul(&self.p_vt)
    }

    pub fn overlap_w(&self, n: usize, x: usize) -> Scalar {
        let row: Vec<Scalar> = self.d_vt.column(x);
        row.iter().zip(self.p_v.column(n)).map(|(a, b)| a * b).sum()
    }

    pub fn overlap_w_partner(&self, n: usize, x: usize) -> Scalar {
        let row: Vec<Scalar> = self.d_v.column(n);
        row.iter()
            .zip(self.p_vt.column(x))
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn verify_trio_axioms(&self) -> VerificationReport {
        let mut rec = self.fingerprint();
        let ps = &self.params;
        let v_in_v = self.in_v_basis(&self.v_z);
        let z_in_v = self.in_v_basis(&self.z_z);
        let vtz_in_v = self.in_v_basis(&self.vt_z.mul(&self.z_z));
        let vt_in_vt = self.in_vt_basis(&self.vt_z);
        let z_in_vt = self.in_vt_basis(&self.z_z);
        let zv_in_vt = self.in_vt_basis(&self.z_z.mul(&self.v_z));
        let vt_in_v = self.in_v_basis(&self.vt_z);

        rec.run("bases.v-dual-pairing", "D_v^T P_v = I", || {
            Ok(Outcome::predicate(
                self.d_v.transpose().mul(&self.p_v).is_identity(),
                "",
            ))
        });
        rec.run("bases.vt-dual-pairing", "D_vt^T P_vt = I", || {
            Ok(Outcome::predicate(
                self.d_vt.transpose().mul(&self.p_vt).is_identity(),
                "",
            ))
        });
        rec.run(
            "bases.v-eigenvectors",
            "V v_n = lambda(n; gamma delta) v_n",
            || {
                let lam = DenseMatrix::diagonal((0..=ps.n).map(|n| ps.lambda_v(n)).collect());
                let r = self.v_z.mul(&self.p_v).sub(&self.p_v.mul(&lam));
                Ok(Outcome::Residuals(r.row_major()))
            },
        );
        rec.run(
            "bases.vt-eigenvectors",
            "V~ v~_x = lambda(x; alpha gamma/(beta delta)) v~_x",
            || {
                let lam = DenseMatrix::diagonal((0..=ps.n).map(|x| ps.lambda_vt(x)).collect());
                let r = self.vt_z.mul(&self.p_vt).sub(&self.p_vt.mul(&lam));
                Ok(Outcome::Residuals(r.row_major()))
            },
        );
        let band = |m: &DenseMatrix, pick: fn(&crate::matrix::BandPredicates) -> bool| {
            let p = m.band_predicates();
            Outcome::predicate(pick(&p), format!("{p:?}"))
        };
        rec.run(
            "lt.v-basis.v-diagonal",
            "V diagonal, simple spectrum, in the v basis",
            || Ok(band(&v_in_v, |p| p.multiplicity_free_diagonal)),
        );
        rec.run(
            "lt.v-basis.z-tridiagonal",
            "Z tridiagonal in the v basis",
            || Ok(band(&z_in_v, |p| p.tridiagonal)),
        );
        rec.run(
            "lt.v-basis.vtz-tridiagonal",
            "V~Z tridiagonal in the v basis",
            || Ok(band(&vtz_in_v, |p| p.tridiagonal)),
        );
        rec.run(
            "lt.vt-basis.vt-diagonal",
            "V~ diagonal, simple spectrum, in the v~ basis",
            || Ok(band(&vt_in_vt, |p| p.multiplicity_free_diagonal)),
        );
        rec.run(
            "lt.vt-basis.z-tridiagonal",
            "Z tridiagonal in the v~ basis",
            || Ok(band(&z_in_vt, |p| p.tridiagonal)),
        );
        rec.run(
            "lt.vt-basis.zv-tridiagonal",
            "ZV tridiagonal in the v~ basis",
            || Ok(band(&zv_in_vt, |p| p.tridiagonal)),
        );
        rec.run(
            "ilt.v-basis.z-irreducible",
            "Z irreducible tridiagonal in the v basis",
            || Ok(band(&z_in_v, |p| p.irreducible_tridiagonal)),
        );
        rec.run(
            "ilt.vt-basis.z-irreducible",
            "Z irreducible tridiagonal in the v~ basis",
            || Ok(band(&z_in_vt, |p| p.irreducible_tridiagonal)),
        );
        rec.run(
            "ilt.z-basis.z-diagonal",
            "Z diagonal, simple spectrum, in the z basis",
            || Ok(band(&self.z_z, |p| p.multiplicity_free_diagonal)),
        );
        rec.run(
            "ilt.z-basis.v-irreducible",
            "V irreducible tridiagonal in the z basis",
            || Ok(band(&self.v_z, |p| p.irreducible_tridiagonal)),
        );
        rec.run(
            "ilt.z-basis.vt-irreducible",
            "V~ irreducible tridiagonal in the z basis",
            || Ok(band(&self.vt_z, |p| p.irreducible_tridiagonal)),
        );
        rec.run(
            "lt.probe.vt-not-tridiagonal-in-v-basis",
            "V~ in the v basis is not tridiagonal",
            || {
                let off = vt_in_v.off_band_count();
                Ok(Outcome::predicate(
                    off > 0,
                    format!("{off} nonzero entries outside the band"),
                ))
            },
        );
        rec.run(
            "lt.reversal-invariance",
            "reversing the v basis keeps the band shapes",
            || {
                let ok = v_in_v
                    .reversed()
                    .band_predicates()
                    .multiplicity_free_diagonal
                    && z_in_v.reversed().band_predicates().tridiagonal
                    && vtz_in_v.reversed().band_predicates().tridiagonal;
                Ok(Outcome::predicate(ok, ""))
            },
        );
        rec.run(
            "lt.pair-with-identity",
            "(V, Z, I) with the v and z bases",
            || {
                let id = DenseMatrix::identity(self.size());
                let (p, p_inv) = self.v_basis();
                let b1 = Basis {
                    p: &p,
                    p_inv: &p_inv,
                };
                let b2 = Basis { p: &id, p_inv: &id };
                let ax = check_lt_axioms(&self.v_z, &self.z_z, &id, b1, b2);
                Ok(Outcome::predicate(ax.all(), format!("{ax:?}")))
            },
        );
        rec.finish()
    }

    pub fn verify_heun_relations(&self, hc: &HeunConstants) -> VerificationReport {
        let mut rec = self.fingerprint();
        let ps = &self.params;
        let one = Scalar::one();
        let (q, al, be, de, s) = (&ps.q, &ps.alpha, &ps.beta, &ps.delta, &ps.s);
        let id = DenseMatrix::identity(self.size());
        let (v, vt, z) = (&self.v_z, &self.vt_z, &self.z_z);
        let k = (&one - q * q).recip().expect("q^2 != 1");
        let abs2 = al * be * s * s;
        let opq = &one + q;
        let bds2 = be * de * s * s;
        let as2 = al * s * s;
        let z_rho = z.add(&id.scale(&hc.rho));

        rec.run(
            "heun.vtz",
            "V~Z = h0 I + c V + (a[Z,V]_q + b[V,Z]_q)/(1-q^2)",
            || {
                let c = (&one - &abs2) * (&one - &abs2 * q * q) / (&bds2 * &opq);
                let comm = z
                    .q_commutator(v, q)
                    .scale(&(al * q * s / de))
                    .add(&v.q_commutator(z, q).scale(&(&one / (be * de * s))));
                let r = vt
                    .mul(z)
                    .sub(&id.scale(&hc.h0))
                    .sub(&v.scale(&c))
                    .sub(&comm.scale(&k));
                Ok(Outcome::Residuals(r.row_major()))
            },
        );
        rec.run(
            "heun.zv",
            "ZV = h5 I + c V~ + (a[Z,V~]_q + b[V~,Z]_q)/(1-q^2)",
            || {
                let c = de * (&one - &abs2) * (&one - &abs2 * q * q) / (&as2 * &opq);
                let comm = z
                    .q_commutator(vt, q)
                    .scale(&(de / (s * al)))
                    .add(&vt.q_commutator(z, q).scale(&(q * be * de * s)));
                let r = z
                    .mul(v)
                    .sub(&id.scale(&hc.h5))
                    .sub(&vt.scale(&c))
                    .sub(&comm.scale(&k));
                Ok(Outcome::Residuals(r.row_major()))
            },
        );
        rec.run(
            "heun.shifted-z-vt",
            "(Z + rho I)V~ = h~0 I + c V + (a[Z,V]_q + b[V,Z]_q)/(1-q^2)",
            || {
                let c = q * (&one - &abs2).pow(2) / (&bds2 * &opq);
                let comm = z
                    .q_commutator(v, q)
                    .scale(&(s * al / de))
                    .add(&v.q_commutator(z, q).scale(&(q / (be * de * s))));
                let r = z_rho
                    .mul(vt)
                    .sub(&id.scale(&hc.h0_t))
                    .sub(&v.scale(&c))
                    .sub(&comm.scale(&k));
                Ok(Outcome::Residuals(r.row_major()))
            },
        );
        rec.run(
            "heun.v-shifted-z",
            "V(Z + rho I) = h~5 I + c V~ + (a[Z,V~]_q + b[V~,Z]_q)/(1-q^2)",
            || {
                let c = q * de * (&one - &abs2).pow(2) / (&as2 * &opq);
                let comm = z
                    .q_commutator(vt, q)
                    .scale(&(q * de / (s * al)))
                    .add(&vt.q_commutator(z, q).scale(&(s * be * de)));
                let r = v
                    .mul(&z_rho)
                    .sub(&id.scale(&hc.h5_t))
                    .sub(&vt.scale(&c))
                    .sub(&comm.scale(&k));
                Ok(Outcome::Residuals(r.row_major()))
            },
        );
        rec.run(
            "heun.constants-two-routes",
            "h0, h5 from the general constraint solution",
            || {
                let hp = HeunParameters::new(ps)?;
                Ok(Outcome::Residuals(vec![
                    &hp.h[0] - &hc.h0,
                    &hp.h[5] - &hc.h5,
                ]))
            },
        );
        rec.finish()
    }

    /// Both overlap eigenvalue problems assembled from conjugated matrices,
    /// plus entrywise agreement with their closed forms.
    pub fn verify_gevp_from_matrices(&self) -> VerificationReport {
        let mut rec = self.fingerprint();
        let ps = &self.params;
        let nn = ps.n;
        let sigma = &ps.sigma;
        let x_m = self.in_v_basis(&self.vt_z.mul(&self.z_z));
        let z_m = self.in_v_basis(&self.z_z);
        let xt_m = self.in_vt_basis(&self.z_z.mul(&self.v_z));
        let zt_m = self.in_vt_basis(&self.z_z);
        let w = self.overlaps();
        let lv: Vec<Scalar> = (0..=nn).map(|n| ps.lambda_v(n)).collect();
        let lt: Vec<Scalar> = (0..=nn).map(|x| ps.lambda_vt(x)).collect();

        rec.run(
            "gevp.matrix-recurrence",
            "sum_m X[m][n] w_m(x) = lambda~_x sum_m Z[m][n] w_m(x)",
            || {
                let mut out = Vec::new();
                for n in 0..=nn {
                    for x in 0..=nn {
                        let lhs: Scalar = (0..=nn).map(|m| &x_m[(m, n)] * &w[(x, m)]).sum();
                        let rhs: Scalar = (0..=nn).map(|m| &z_m[(m, n)] * &w[(x, m)]).sum();
                        out.push(lhs - &lt[x] * rhs);
                    }
                }
                Ok(Outcome::Residuals(out))
            },
        );
        rec.run(
            "gevp.matrix-difference",
            "sum_y X~[x][y] w_n(y) = lambda_n sum_y Z~[x][y] w_n(y)",
            || {
                let mut out = Vec::new();
                for n in 0..=nn {
                    for x in 0..=nn {
                        let lhs: Scalar = (0..=nn).map(|y| &xt_m[(x, y)] * &w[(y, n)]).sum();
                        let rhs: Scalar = (0..=nn).map(|y| &zt_m[(x, y)] * &w[(y, n)]).sum();
                        out.push(lhs - &lv[n] * rhs);
                    }
                }
                Ok(Outcome::Residuals(out))
            },
        );
        rec.run(
            "gevp.z-v-basis-closed-form",
            "Z v_n with q-Racah data (gamma, delta, alpha, beta)",
            || {
                let d = ps.rho_dual()?;
                let expect = tridiagonal_from(nn, |n| d.abc(n), Some(sigma))?;
                Ok(Outcome::Residuals(z_m.sub(&expect).row_major()))
            },
        );
        rec.run(
            "gevp.z-vt-basis-closed-form",
            "Z v~_x with q-Racah data (gamma, delta~, alpha, beta)",
            || {
                let d = ps.rho_t_dual()?;
                let expect = tridiagonal_from(nn, |n| d.abc(n), Some(sigma))?;
                Ok(Outcome::Residuals(zt_m.sub(&expect).row_major()))
            },
        );
        rec.run(
            "gevp.vtz-heun-form",
            "V~Z v_n through the Heun constants h0, h2, h3, h4",
            || {
                let hp = HeunParameters::new(ps)?;
                let (h0, h2, h3, h4) = (&hp.h[0], &hp.h[2], &hp.h[3], &hp.h[4]);
                let mut expect = DenseMatrix::zeros(nn + 1, nn + 1);
                for n in 0..=nn {
                    expect[(n, n)] = h0 + h2 * &lv[n] + (h3 + h4) * &lv[n] * &z_m[(n, n)];
                    if n < nn {
                        expect[(n + 1, n)] = (h3 * &lv[n + 1] + h4 * &lv[n]) * &z_m[(n + 1, n)];
                    }
                    if n > 0 {
                        expect[(n - 1, n)] = (h3 * &lv[n - 1] + h4 * &lv[n]) * &z_m[(n - 1, n)];
                    }
                }
                Ok(Outcome::Residuals(x_m.sub(&expect).row_major()))
            },
        );
        rec.run("gevp.vtz-closed-form", "V~Z v_n in closed form", || {
            let expect = vtz_closed_form(ps)?;
            Ok(Outcome::Residuals(x_m.sub(&expect).row_major()))
        });
        rec.run("gevp.zv-closed-form", "ZV v~_x in closed form", || {
            let expect = zv_closed_form(ps)?;
            Ok(Outcome::Residuals(xt_m.sub(&expect).row_major()))
        });
        rec.run(
            "gevp.conditions-nonzero",
            "X[n+1][n] - lambda~_x Z[n+1][n] and X~[x][x+1] - lambda_n Z~[x][x+1] nonzero",
            || {
                let mut bad = Vec::new();
                for n in 0..nn {
                    for x in 0..=nn {
                        if (&x_m[(n + 1, n)] - &lt[x] * &z_m[(n + 1, n)]).is_zero() {
                            bad.push(format!("recurrence (n={n}, x={x})"));
                        }
                        if (&xt_m[(n, n + 1)] - &lv[x] * &zt_m[(n, n + 1)]).is_zero() {
                            bad.push(format!("difference (x={n}, n={x})"));
                        }
                    }
                }
                Ok(Outcome::predicate(bad.is_empty(), bad.join(", ")))
            },
        );
        rec.run(
            "overlap.rational-degree",
            "w_n/w_0 is a degree (n, n) rational function of lambda~_x",
            || rational_degree_check(&w, &lt),
        );
        rec.finish()
    }

    pub fn verify_biorthogonality(&self) -> VerificationReport {
        let mut rec = self.fingerprint();
        let ps = &self.params;
        let nn = ps.n;
        let w = self.overlaps();
        let wt = self.partner_overlaps();
        rec.run(
            "biorthogonality.w-then-partner",
            "sum_n w_n(x) w~_n(y) = delta_xy",
            || {
                Ok(Outcome::Residuals(
                    w.mul(&wt).sub(&DenseMatrix::identity(nn + 1)).row_major(),
                ))
            },
        );
        rec.run(
            "biorthogonality.partner-then-w",
            "sum_x w~_m(x) w_n(x) = delta_mn",
            || {
                Ok(Outcome::Residuals(
                    wt.mul(&w).sub(&DenseMatrix::identity(nn + 1)).row_major(),
                ))
            },
        );
        rec.run(
            "bases.duals-are-inverses",
            "D_v^T and D_vt^T invert P_v and P_vt",
            || {
                let a = self.p_v.inverse()?.sub(&self.d_v.transpose());
                let b = self.p_vt.inverse()?.sub(&self.d_vt.transpose());
                let mut out = a.row_major();
                out.extend(b.row_major());
                Ok(Outcome::Residuals(out))
            },
        );
        rec.run(
            "overlap.w00-closed-form",
            "w_0(0) = (q beta delta, 1/(alpha s);q)_N / (beta delta/alpha, q/s;q)_N",
            || Ok(Outcome::residual(&w[(0, 0)] - w00_closed(ps))),
        );
        rec.run(
            "overlap.sum-route",
            "w_n(x) as a weighted sum of q-Racah products",
            || Outcome::from_grid(grid(nn).map(|(n, x)| Ok(overlap_w_sum(ps, n, x)? - &w[(x, n)]))),
        );
        rec.run(
            "overlap.wilson-route",
            "w_n(x) as normalized Wilson function",
            || {
                let wp = WilsonParams::from_trio(ps)?;
                Outcome::from_grid(
                    grid(nn).map(|(n, x)| Ok(overlap_w_wilson(ps, &wp, n, x)? - &w[(x, n)])),
                )
            },
        );
        rec.run(
            "overlap.partner-reflected",
            "w~_n(x) from w at s -> 1/(alpha beta s)",
            || {
                let reflected = ps.partner()?;
                Outcome::from_grid(grid(nn).map(|(n, x)| {
                    let via =
                        overlap_w_partner_reflected(ps, n, x, overlap_w_sum(&reflected, n, x)?)?;
                    Ok(via - &wt[(n, x)])
                }))
            },
        );
        rec.finish()
    }
}

fn grid(nn: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..=nn).flat_map(move |n| (0..=nn).map(move |x| (n, x)))
}

/// Matrix with `A_n` below, `B_n (+ shift)` on, and `C_n` above the diagonal of column `n`.
fn tridiagonal_from(
    nn: usize,
    abc: impl Fn(usize) -> Result<(Scalar, Scalar, Scalar)>,
    shift: Option<&Scalar>,
) -> Result<DenseMatrix> {
    let mut m = DenseMatrix::zeros(nn + 1, nn + 1);
    for n in 0..=nn {
        let (a, b, c) = abc(n)?;
        m[(n, n)] = match shift {
            Some(sh) => b + sh,
            None => b,
        };
        if n < nn {
            m[(n + 1, n)] = a;
        }
        if n > 0 {
            m[(n - 1, n)] = c;
        }
    }
    Ok(m)
}

/// `V~Z` on the `v` basis from the closed coefficient formulas.
pub fn vtz_closed_form(ps: &ParameterSet) -> Result<DenseMatrix> {
    let nn = ps.n;
    let (q, al, be, ga, de, s) = (&ps.q, &ps.alpha, &ps.beta, &ps.gamma, &ps.delta, &ps.s);
    let d = ps.rho_dual()?;
    let h0 = HeunConstants::new(ps).h0;
    let up = al * be * ga * de * s * s * q * q;
    let down = ga * de / (al * be * q * q * s * s);
    let mut m = DenseMatrix::zeros(nn + 1, nn + 1);
    for n in 0..=nn {
        let (a, b, c) = d.abc(n)?;
        let lv = ps.lambda_v(n);
        m[(n, n)] = &h0
            - al / de * (Scalar::one() + q) * &lv
            - &ps.sigma * &lv * b / (be * de * (Scalar::one() + q));
        if n < nn {
            m[(n + 1, n)] = lambda(n, &up, q) * a / (q * be * de * s);
        }
        if n > 0 {
            m[(n - 1, n)] = al * s * q / de * lambda(n, &down, q) * c;
        }
    }
    Ok(m)
}

/// `ZV` on the `v~` basis from the closed coefficient formulas.
pub fn zv_closed_form(ps: &ParameterSet) -> Result<DenseMatrix> {
    let nn = ps.n;
    let (q, al, be, ga, de, s) = (&ps.q, &ps.alpha, &ps.beta, &ps.gamma, &ps.delta, &ps.s);
    let d = ps.rho_t_dual()?;
    let h5 = HeunConstants::new(ps).h5;
    let up = ga / (be * be * de * s * s);
    let down = al * al * ga * s * s / de;
    let mut m = DenseMatrix::zeros(nn + 1, nn + 1);
    for x in 0..=nn {
        let (a, b, c) = d.abc(x)?;
        let lt = ps.lambda_vt(x);
        m[(x, x)] = &h5
            - (Scalar::one() + q) * be * de * &lt
            - &ps.sigma * de * &lt * b / (al * (Scalar::one() + q));
        if x < nn {
            m[(x + 1, x)] = be * de * s * lambda(x, &up, q) * a;
        }
        if x > 0 {
            m[(x - 1, x)] = de / (al * s) * lambda(x, &down, q) * c;
        }
    }
    Ok(m)
}

/// Fits `w_n/w_0` against `lambda~_x` on the first `2n + 1` nodes and checks
/// every remaining node; degrees without spare nodes are skipped.
fn rational_degree_check(w: &DenseMatrix, lt: &[Scalar]) -> Result<Outcome> {
    let size = lt.len();
    let mut residuals = Vec::new();
    let mut tested = Vec::new();
    let ratio: Vec<Vec<Scalar>> = (0..size)
        .map(|n| {
            (0..size)
                .map(|x| {
                    let w0 = &w[(x, 0)];
                    if w0.is_zero() {
                        Err(Error::Pole {
                            factor: "w_0(x)".into(),
                            index: x,
                        })
                    } else {
                        Ok(&w[(x, n)] / w0)
                    }
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    for (n, values) in ratio.iter().enumerate() {
        let need = 2 * n + 1;
        if need >= size {
            continue;
        }
        let fit = RationalFunction::fit(&lt[..need], &values[..need], n)?;
        for x in need..size {
            residuals.push(fit.cross_residual(&lt[x], &values[x]));
            if fit.eval(&lt[x]).is_none() {
                return Ok(Outcome::predicate(
                    false,
                    format!("fitted denominator vanishes at x = {x}"),
                ));
            }
        }
        tested.push(n);
    }
    if residuals.is_empty() {
        return Ok(Outcome::predicate(
            true,
            "no degree has spare nodes at this N",
        ));
    }
    let _ = tested;
    Ok(Outcome::Residuals(residuals))
}

/// `q (a + g)(1 + b d) + q (b + g)(a + d)`.
pub fn psi(a: &Scalar, b: &Scalar, g: &Scalar, d: &Scalar, q: &Scalar) -> Scalar {
    q * (a + g) * (Scalar::one() + b * d) + q * (b + g) * (a + d)
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeunConstants {
    pub h0: Scalar,
    pub h5: Scalar,
    pub h0_t: Scalar,
    pub h5_t: Scalar,
    /// `(1 - q)(1/s - alpha beta s)`
    pub rho: Scalar,
}

impl HeunConstants {
    pub fn new(ps: &ParameterSet) -> Self {
        let one = Scalar::one();
        let (q, al, be, ga, de, s) = (&ps.q, &ps.alpha, &ps.beta, &ps.gamma, &ps.delta, &ps.s);
        let p = psi(al, be, ga, de, q);
        let pt = psi(al, be, ga, &ps.delta_t, q);
        let opq = &one + q;
        let s2ab = s * s * al * be;
        let a1 = &one + q * &s2ab;
        let a2 = q + &s2ab;
        let lo = be * de * s * &opq;
        let hi = al * s * &opq / de;
        HeunConstants {
            h0: &pt - &a1 / &lo * &p,
            h5: &p - &a1 / &hi * &pt,
            h0_t: &pt - &a2 / &lo * &p,
            h5_t: &p - &a2 / &hi * &pt,
            rho: (&one - q) * (s.recip().expect("s nonzero") - al * be * s),
        }
    }
}

/// The ten Heun coefficients `h_0..h_9` reconstructed from the general
/// solution of the constraint equations, with the auxiliary roots.
#[derive(Clone, Debug)]
pub struct HeunParameters {
    pub h: [Scalar; 10],
    pub mu2: Scalar,
    pub mu7: Scalar,
    pub h34: Scalar,
    pub h43: Scalar,
    pub h89: Scalar,
    pub h98: Scalar,
}

impl HeunParameters {
    pub fn new(ps: &ParameterSet) -> Result<Self> {
        let one = Scalar::one();
        let (q, al, be, ga, de, s) = (&ps.q, &ps.alpha, &ps.beta, &ps.gamma, &ps.delta, &ps.s);
        let dt = &ps.delta_t;
        let h34 = (be * de * s).recip().ok_or(Error::Singular)?;
        let h43 = dt * q / (de * &h34);
        let h89 = q / &h34;
        let h98 = de * &h34 / dt;
        let mu2 = s.clone();
        let mu7 = (al * be * s).recip().ok_or(Error::Singular)?;
        let k = &one - q * q;
        let split = |u: &Scalar, v: &Scalar| ((u - q * v) / &k, (v - q * u) / &k);
        let (h3, h4) = split(&h34, &h43);
        let (h8, h9) = split(&h89, &h98);
        let sigma = &ps.sigma;
        let h2 = -(&h43 / &mu2) - &h34 * al * be * &mu2 - sigma * (&h3 + &h4);
        let h7 = -(&h98 / &mu7) - &h89 * al * be * &mu7 - sigma * (&h8 + &h9);
        let p = psi(al, be, ga, de, q);
        let pt = psi(al, be, ga, dt, q);
        let mix = de * &h34 * &h34 + q * dt;
        let opq = &one + q;
        let h0 = &pt - &mix / (de * &h34 * &opq) * &p;
        let h5 = &p - &mix / (dt * &h34 * &opq) * &pt;
        let zero = Scalar::zero();
        Ok(HeunParameters {
            h: [h0, zero.clone(), h2, h3, h4, h5, zero, h7, h8, h9],
            mu2,
            mu7,
            h34,
            h43,
            h89,
            h98,
        })
    }
}

/// Evaluates the constraint families on the `z`-basis matrix entries at the
/// stated solution, plus the root-set matching.
pub fn verify_constraint_equations(ps: &ParameterSet) -> VerificationReport {
    let mut rec = Recorder::new(ps.fingerprint(), ps.n);
    let nn = ps.n;
    let setup = || -> Result<_> {
        let hp = HeunParameters::new(ps)?;
        let rho = ps.rho()?;
        let rho_t = ps.rho_t()?;
        let abc: Vec<_> = (0..=nn).map(|i| rho.abc(i)).collect::<Result<Vec<_>>>()?;
        let abct: Vec<_> = (0..=nn).map(|i| rho_t.abc(i)).collect::<Result<Vec<_>>>()?;
        Ok((hp, abc, abct))
    };
    let (hp, abc, abct) = match setup() {
        Ok(v) => v,
        Err(e) => {
            rec.run("constraints.setup", "constraint parameters", || Err(e));
            return rec.finish();
        }
    };
    let h = &hp.h;
    let z = |i: usize| ps.zeta(i);
    let nu = |i: usize| ps.nu(i);
    let lin = |a: &Scalar, b: &Scalar, c: &Scalar, x: &Scalar, y: &Scalar| a + b * x + c * y;

    rec.run(
        "constraints.v-raise",
        "zeta_i C~_{i+1} nu_{i+1} = (h2 + h3 zeta_i + h4 zeta_{i+1}) C_{i+1}",
        || {
            Ok(Outcome::Residuals(
                (0..nn)
                    .map(|i| {
                        z(i) * &abct[i + 1].2 * nu(i + 1)
                            - lin(&h[2], &h[3], &h[4], &z(i), &z(i + 1)) * &abc[i + 1].2
                    })
                    .collect(),
            ))
        },
    );
    rec.run(
        "constraints.vt-raise",
        "zeta_{i+1} C_{i+1} = (h7 + h8 zeta_i + h9 zeta_{i+1}) C~_{i+1} nu_{i+1}",
        || {
            Ok(Outcome::Residuals(
                (0..nn)
                    .map(|i| {
                        z(i + 1) * &abc[i + 1].2
                            - lin(&h[7], &h[8], &h[9], &z(i), &z(i + 1))
                                * &abct[i + 1].2
                                * nu(i + 1)
                    })
                    .collect(),
            ))
        },
    );
    rec.run(
        "constraints.v-keep",
        "zeta_i B~_i = h0 + h1 zeta_i + (h2 + (h3 + h4) zeta_i) B_i",
        || {
            Ok(Outcome::Residuals(
                (0..=nn)
                    .map(|i| {
                        let zi = z(i);
                        &zi * &abct[i].1
                            - (&h[0] + &h[1] * &zi + (&h[2] + (&h[3] + &h[4]) * &zi) * &abc[i].1)
                    })
                    .collect(),
            ))
        },
    );
    rec.run(
        "constraints.vt-keep",
        "zeta_i B_i = h5 + h6 zeta_i + (h7 + (h8 + h9) zeta_i) B~_i",
        || {
            Ok(Outcome::Residuals(
                (0..=nn)
                    .map(|i| {
                        let zi = z(i);
                        &zi * &abc[i].1
                            - (&h[5] + &h[6] * &zi + (&h[7] + (&h[8] + &h[9]) * &zi) * &abct[i].1)
                    })
                    .collect(),
            ))
        },
    );
    rec.run(
        "constraints.v-lower",
        "zeta_i A~_{i-1}/nu_i = (h2 + h3 zeta_i + h4 zeta_{i-1}) A_{i-1}",
        || {
            Ok(Outcome::Residuals(
                (1..=nn)
                    .map(|i| {
                        z(i) * &abct[i - 1].0 / nu(i)
                            - lin(&h[2], &h[3], &h[4], &z(i), &z(i - 1)) * &abc[i - 1].0
                    })
                    .collect(),
            ))
        },
    );
    rec.run(
        "constraints.vt-lower",
        "zeta_{i-1} A_{i-1} = (h7 + h8 zeta_i + h9 zeta_{i-1}) A~_{i-1}/nu_i",
        || {
            Ok(Outcome::Residuals(
                (1..=nn)
                    .map(|i| {
                        z(i - 1) * &abc[i - 1].0
                            - lin(&h[7], &h[8], &h[9], &z(i), &z(i - 1)) * &abct[i - 1].0 / nu(i)
                    })
                    .collect(),
            ))
        },
    );
    rec.run(
        "constraints.root-product",
        "factored quartic in q^i matches the root parameters",
        || {
            let one = Scalar::one();
            let (q, al, be, s) = (&ps.q, &ps.alpha, &ps.beta, &ps.s);
            let ab = al * be;
            Ok(Outcome::Residuals(
                (0..=nn)
                    .map(|i| {
                        let qi = q.pow(i as i64);
                        let lhs = (&qi - s * q)
                            * (&qi - s)
                            * (&ab * s * &qi - &one)
                            * (&ab * s * &qi * q - &one)
                            / (s * s);
                        let rhs = (&qi - &hp.mu2)
                            * (&qi - &hp.mu7)
                            * (&ab * &hp.mu2 * &hp.h34 * &qi - &hp.h43)
                            * (&ab * &hp.mu7 * &hp.h89 * &qi - &hp.h98)
                            / (&hp.mu2 * &hp.mu7);
                        lhs - rhs
                    })
                    .collect(),
            ))
        },
    );
    rec.run(
        "constraints.zeta-product",
        "zeta_{i-1} zeta_i = (h2 + h3 zeta_{i-1} + h4 zeta_i)(h7 + h8 zeta_{i-1} + h9 zeta_i)",
        || {
            Ok(Outcome::Residuals(
                (1..=nn)
                    .map(|i| {
                        let (a, b) = (z(i - 1), z(i));
                        &a * &b
                            - lin(&h[2], &h[3], &h[4], &a, &b) * lin(&h[7], &h[8], &h[9], &a, &b)
                    })
                    .collect(),
            ))
        },
    );
    rec.run(
        "constraints.root-sets",
        "{sq, s, 1/(ab s), 1/(ab s q)} equals the solution's root set",
        || {
            let (q, al, be, de, s) = (&ps.q, &ps.alpha, &ps.beta, &ps.delta, &ps.s);
            let ab = al * be;
            let mut left = vec![
                s * q,
                s.clone(),
                (&ab * s).recip().unwrap(),
                (&ab * s * q).recip().unwrap(),
            ];
            let mut right = vec![
                hp.mu2.clone(),
                hp.mu7.clone(),
                &ps.delta_t * q / (&hp.h34 * &hp.h34 * &ab * de * &hp.mu2),
                de * &hp.h34 * &hp.h34 / (&ab * &ps.delta_t * &hp.mu7 * q),
            ];
            left.sort_by(|a, b| a.partial_cmp(b).unwrap());
            right.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let same = left == right;
            let show = |v: &[Scalar]| {
                v.iter()
                    .map(Scalar::to_string)
                    .collect::<Vec<_>>()
                    .join(", ")
            };
            Ok(Outcome::predicate(
                same,
                format!("[{}] vs [{}]", show(&left), show(&right)),
            ))
        },
    );
    rec.run(
        "constraints.conditions-nonzero",
        "both nondegeneracy conditions hold on the grid",
        || {
            let mut bad = Vec::new();
            for n in 0..nn {
                for x in 0..=nn {
                    if ps.cond_recurrence(n, x)?.is_zero() {
                        bad.push(format!("recurrence (n={n}, x={x})"));
                    }
                    if ps.cond_difference(n, x)?.is_zero() {
                        bad.push(format!("difference (x={n}, n={x})"));
                    }
                }
            }
            Ok(Outcome::predicate(bad.is_empty(), bad.join(", ")))
        },
    );
    rec.finish()
}

/// `w_n(x) = M' Omega'_x sum_i Omega_i(alpha, beta, gamma, alpha s) R_i(x; rho~) R_i(n; rho)`.
pub fn overlap_w_sum(ps: &ParameterSet, n: usize, x: usize) -> Result<Scalar> {
    let rho = ps.rho()?;
    let rho_t = ps.rho_t()?;
    let inner = ps.rho_inner()?;
    let outer = rho_t.dual();
    let mut acc = Scalar::zero();
    for i in 0..=ps.n {
        acc = acc + inner.omega(i)? * rho_t.eval(i, x)? * rho.eval(i, n)?;
    }
    Ok(outer.m()? * outer.omega(x)? * acc)
}

/// `w_n(x)` through the Wilson function with explicit normalization.
pub fn overlap_w_wilson(
    ps: &ParameterSet,
    wp: &WilsonParams,
    n: usize,
    x: usize,
) -> Result<Scalar> {
    let (q, al, be, ga, de, s) = (&ps.q, &ps.alpha, &ps.beta, &ps.gamma, &ps.delta, &ps.s);
    let one = Scalar::one();
    let m = QRacahParams::new(
        al.clone(),
        &one / (q * al * s),
        ga.clone(),
        ps.delta_t.clone(),
        q.clone(),
        ps.n,
    )?
    .m()?;
    let om = QRacahParams::new(
        al.clone(),
        ga / (be * de),
        ga.clone(),
        &one / (s * q * ga),
        q.clone(),
        ps.n,
    )?
    .omega(x)?;
    let pre = q_pochhammer_multi(&[de / (al * s), ga * q / be], q, n)
        * (al * be * s * q).pow(n as i64)
        / q_pochhammer_multi(&[be * de * q, al * ga * s * q * q], q, n);
    Ok(m * om * pre * wp.eval(n, x)?)
}

/// `w_0(0) = (q beta delta, 1/(alpha s);q)_N / (beta delta/alpha, q/s;q)_N`.
pub fn w00_closed(ps: &ParameterSet) -> Scalar {
    let (q, al, be, de, s) = (&ps.q, &ps.alpha, &ps.beta, &ps.delta, &ps.s);
    q_pochhammer_multi(&[q * be * de, (al * s).recip().unwrap()], q, ps.n)
        / q_pochhammer_multi(&[be * de / al, q / s], q, ps.n)
}

/// The partner `w~_n(x)` from the value of `w_n(x)` at `s' = 1/(alpha beta s)`.
pub fn overlap_w_partner_reflected(
    ps: &ParameterSet,
    n: usize,
    x: usize,
    w_reflected: Scalar,
) -> Result<Scalar> {
    let (q, al, be, ga, de) = (&ps.q, &ps.alpha, &ps.beta, &ps.gamma, &ps.delta);
    let m = QRacahParams::new(
        ga.clone(),
        de.clone(),
        al.clone(),
        be * de / (al * q),
        q.clone(),
        ps.n,
    )?
    .m()?;
    let num = ps.rho_dual()?.omega(n)?;
    let den = ps.rho_t_dual()?.omega(x)?;
    Ok(m * num / den * w_reflected)
}

/// Both sides of the summation formula for `W_n(x)` under the trio
/// substitution: `(wilson value, weighted q-Racah sum)`.
pub fn summation_formula_sides(
    ps: &ParameterSet,
    wp: &WilsonParams,
    n: usize,
    x: usize,
) -> Result<(Scalar, Scalar)> {
    let (q, al, be, ga, de, s) = (&ps.q, &ps.alpha, &ps.beta, &ps.gamma, &ps.delta, &ps.s);
    let rho = ps.rho()?;
    let rho_t = ps.rho_t()?;
    let inner = ps.rho_inner()?;
    let m = QRacahParams::new(ga.clone(), al * s, al.clone(), be.clone(), q.clone(), ps.n)?.m()?;
    let abq = al * be * s * q;
    let px = q_pochhammer_multi(&[al * q / de, al * ga * s * q * q], q, x)
        / (q_pochhammer_multi(&[(be * de * s).recip().unwrap(), ga * q / be], q, x)
            * abq.pow(x as i64));
    let pn = q_pochhammer_multi(&[be * de * q, al * ga * s * q * q], q, n)
        / (q_pochhammer_multi(&[de / (al * s), ga * q / be], q, n) * abq.pow(n as i64));
    let mut acc = Scalar::zero();
    for i in 0..=ps.n {
        acc = acc + inner.omega(i)? * rho_t.eval(i, x)? * rho.eval(i, n)?;
    }
    Ok((wp.eval(n, x)?, px * pn * m * acc))
}

pub fn verify_summation_formula(ps: &ParameterSet) -> VerificationReport {
    let mut rec = Recorder::new(ps.fingerprint(), ps.n);
    let nn = ps.n;
    let wp = WilsonParams::from_trio(ps);
    rec.run(
        "summation.two-routes",
        "W_n(x) equals the weighted q-Racah product sum",
        || {
            let wp = wp.clone()?;
            Outcome::from_grid(grid(nn).map(|(n, x)| {
                let (a, b) = summation_formula_sides(ps, &wp, n, x)?;
                Ok(a - b)
            }))
        },
    );
    rec.run(
        "summation.origin",
        "the sum at n = x = 0 reproduces 1/w_0(0) scaling",
        || {
            let wp = wp.clone()?;
            let (lhs, rhs) = summation_formula_sides(ps, &wp, 0, 0)?;
            Ok(Outcome::Residuals(vec![
                lhs - Scalar::one(),
                rhs - Scalar::one(),
            ]))
        },
    );
    rec.run(
        "summation.degree-variable-exchange",
        "W_n(x) = W_x(n) with delta -> alpha/(beta delta)",
        || {
            let wp = wp.clone()?;
            let swapped = wp.swapped();
            Outcome::from_grid(grid(nn).map(|(n, x)| Ok(wp.eval(n, x)? - swapped.eval(x, n)?)))
        },
    );
    rec.finish()
}

/// Recurrence problems for the Wilson function in trio and general form,
/// their agreement, and the difference problem obtained by transport.
pub fn verify_wilson_gevps(ps: &ParameterSet) -> VerificationReport {
    let mut rec = Recorder::new(ps.fingerprint(), ps.n);
    let nn = ps.n;
    let wp = WilsonParams::from_trio(ps);
    rec.run(
        "wilson.trio-recurrence",
        "trio-variable recurrence eigenvalue problem",
        || Outcome::from_grid(grid(nn).map(|(n, x)| trio_wilson_gevp_residual(ps, n, x))),
    );
    rec.run(
        "wilson.general-recurrence",
        "recurrence eigenvalue problem in (a, b, c, d, e, f)",
        || {
            let wp = wp.clone()?;
            Outcome::from_grid(grid(nn).map(|(n, x)| wp.gevp_residual(n, x)))
        },
    );
    rec.run(
        "wilson.difference-by-transport",
        "difference problem via b <-> c",
        || {
            let wp = wp.clone()?;
            Outcome::from_grid(grid(nn).map(|(n, x)| wp.difference_residual(n, x)))
        },
    );
    rec.run(
        "wilson.coefficients-agree",
        "trio and general coefficient tables coincide",
        || {
            let wp = wp.clone()?;
            let mut out = Vec::new();
            for n in 0..=nn {
                let t = trio_gevp_coeffs(ps, n)?;
                let g = wp.gevp_coeffs(n)?;
                out.extend([
                    &t.z_next - &g.z_next,
                    &t.z_same - &g.z_same,
                    &t.z_prev - &g.z_prev,
                    &t.x_next - &g.x_next,
                    &t.x_same - &g.x_same,
                    &t.x_prev - &g.x_prev,
                ]);
            }
            for x in 0..=nn {
                out.push(trio_spectral(ps, x) - wp.spectral(x));
            }
            Ok(Outcome::Residuals(out))
        },
    );
    rec.run("wilson.duality", "W_n(x; b, c) = W_x(n; c, b)", || {
        let wp = wp.clone()?;
        Outcome::from_grid(grid(nn).map(|(n, x)| {
            let (a, b) = wp.duality_check(n, x)?;
            Ok(a - b)
        }))
    });
    rec.run(
        "wilson.rational-degree",
        "W_n is a degree (n, n) rational function of the spectral variable",
        || {
            let wp = wp.clone()?;
            let nodes: Vec<Scalar> = (0..=nn).map(|x| lambda(x, &wp.c, &wp.q)).collect();
            let values = DenseMatrix::try_from_fn(nn + 1, nn + 1, |x, n| wp.eval(n, x))?;
            let ones = DenseMatrix::from_fn(nn + 1, nn + 1, |x, n| {
                if n == 0 {
                    Scalar::one()
                } else {
                    values[(x, n)].clone()
                }
            });
            rational_degree_check(&ones, &nodes)
        },
    );
    rec.finish()
}

/// Data of a bispectral family `P_n(x)`: recurrence in `n` with eigenvalues
/// `lambda_x`, difference in `x` with eigenvalues `xi_n`, and the weights of
/// the orthogonality `sum_x Omega_x P_m P_n = omega_n delta_mn`.
#[derive(Clone, Debug)]
pub struct PolynomialFamily {
    pub recurrence: Vec<(Scalar, Scalar, Scalar)>,
    pub difference: Vec<(Scalar, Scalar, Scalar)>,
    pub weight: Vec<Scalar>,
    pub norm: Vec<Scalar>,
    pub lambda: Vec<Scalar>,
    pub xi: Vec<Scalar>,
}

impl PolynomialFamily {
    pub fn from_qracah(p: &QRacahParams) -> Result<Self> {
        let dual = p.dual();
        let m = p.m()?;
        let nn = p.n;
        Ok(PolynomialFamily {
            recurrence: (0..=nn).map(|n| p.abc(n)).collect::<Result<_>>()?,
            difference: (0..=nn).map(|x| dual.abc(x)).collect::<Result<_>>()?,
            weight: (0..=nn).map(|x| dual.omega(x)).collect::<Result<_>>()?,
            norm: (0..=nn)
                .map(|n| p.omega(n).map(|o| (o * &m).recip().unwrap()))
                .collect::<Result<_>>()?,
            lambda: (0..=nn)
                .map(|x| lambda(x, &(&p.gamma * &p.delta), &p.q))
                .collect(),
            xi: (0..=nn)
                .map(|n| lambda(n, &(&p.alpha * &p.beta), &p.q))
                .collect(),
        })
    }
}

/// A Leonard pair `(V, Z)` built from a polynomial family.
#[derive(Clone, Debug)]
pub struct GenericLeonardPair {
    pub z_z: DenseMatrix,
    pub v_z: DenseMatrix,
    /// `P[i][n] = P_i(n)`, column `n` is `v_n`.
    pub p: DenseMatrix,
    /// Column `n` is the dual vector `v*_n`.
    pub d: DenseMatrix,
    pub report: VerificationReport,
}

/// Builds `Z` diagonal and `V` tridiagonal in the `z` basis, generates
/// `P_i(n)` from the recurrence, and checks the eigen-actions and the
/// dual-vector formula `v*_n = sum_i (Omega_n / omega_i) P_i(n) z_i`.
pub fn generic_lp_from_family(fam: &PolynomialFamily) -> Result<GenericLeonardPair> {
    let size = fam.lambda.len();
    let nn = size - 1;
    for (n, (a, _, _)) in fam.recurrence.iter().enumerate().take(nn) {
        if a.is_zero() {
            return Err(Error::Nondegeneracy {
                factor: "A_n".into(),
                index: n,
            });
        }
    }
    for (n, (_, _, c)) in fam.recurrence.iter().enumerate().skip(1) {
        if c.is_zero() {
            return Err(Error::Nondegeneracy {
                factor: "C_n".into(),
                index: n,
            });
        }
    }
    let mut p = DenseMatrix::zeros(size, size);
    for x in 0..size {
        p[(0, x)] = Scalar::one();
        for i in 0..nn {
            let (a, b, c) = &fam.recurrence[i];
            let prev = if i > 0 {
                &p[(i - 1, x)] * c
            } else {
                Scalar::zero()
            };
            p[(i + 1, x)] = ((&fam.lambda[x] - b) * &p[(i, x)] - prev) / a;
        }
    }
    let z_z = DenseMatrix::diagonal(fam.xi.clone());
    let v_z = tridiagonal_from(nn, |i| Ok(fam.recurrence[i].clone()), None)?.transpose();
    let d = DenseMatrix::from_fn(size, size, |i, n| {
        &fam.weight[n] / &fam.norm[i] * &p[(i, n)]
    });

    let mut rec = Recorder::new(Default::default(), nn);
    rec.run("generic-lp.v-eigen", "V v_n = lambda_n v_n", || {
        let lam = DenseMatrix::diagonal(fam.lambda.clone());
        Ok(Outcome::Residuals(
            v_z.mul(&p).sub(&p.mul(&lam)).row_major(),
        ))
    });
    rec.run(
        "generic-lp.z-tridiagonal-action",
        "Z v_n = A_n v_{n+1} + B_n v_n + C_n v_{n-1}",
        || {
            let t = tridiagonal_from(nn, |x| Ok(fam.difference[x].clone()), None)?;
            Ok(Outcome::Residuals(z_z.mul(&p).sub(&p.mul(&t)).row_major()))
        },
    );
    rec.run("generic-lp.dual-vectors", "<v*_m, v_n> = delta_mn", || {
        Ok(Outcome::Residuals(
            d.transpose()
                .mul(&p)
                .sub(&DenseMatrix::identity(size))
                .row_major(),
        ))
    });
    Ok(GenericLeonardPair {
        z_z,
        v_z,
        p,
        d,
        report: rec.finish(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> Scalar {
        t.parse().unwrap()
    }

    fn ps() -> ParameterSet {
        ParameterSet::new(s("3/5"), s("1/3"), s("1/7"), s("2"), s("1/2"), 3).unwrap()
    }

    #[test]
    fn z_diagonal_entries() {
        let tr = build_realization(&ps()).unwrap();
        assert!(tr.z_z.band_predicates().multiplicity_free_diagonal);
        assert_eq!(tr.z_z[(2, 2)], tr.params.zeta(2));
    }

    #[test]
    fn v_z_is_transposed_tridiagonal_layout() {
        let tr = build_realization(&ps()).unwrap();
        let rho = tr.params.rho().unwrap();
        assert_eq!(tr.v_z[(1, 0)], rho.abc(1).unwrap().2);
        assert_eq!(tr.v_z[(0, 1)], rho.abc(0).unwrap().0);
    }

    #[test]
    fn nondegeneracy_reported() {
        let mut fam = PolynomialFamily::from_qracah(&ps().rho().unwrap()).unwrap();
        fam.recurrence[1].0 = Scalar::zero();
        let e = generic_lp_from_family(&fam).unwrap_err();
        assert_eq!(
            e,
            Error::Nondegeneracy {
                factor: "A_n".into(),
                index: 1
            }
        );
    }
}
