//! Radial lookup table for the unit-time kernel.
//!
//! Grid discretizations and pointwise contractions evaluate the kernel at
//! hundreds of thousands of radii; running the full inversion quadrature per
//! point would dominate every solve. The profile tabulates `p(1, rho)` once
//! (dense near the origin, logarithmic through the power-law tail), serves
//! cubic interpolation, and verifies itself against the direct quadrature on
//! construction.

use crate::error::{Error, Result};
use crate::kernel::{heat_kernel_quadrature, radial_inversion};
use crate::law::StableLaw;

/// Largest tabulated radius; beyond it the tail is extrapolated with the
/// locally fitted power law.
const RHO_MAX: f64 = 1e13;
/// Dense section upper edge; lookups switch to the log table above DENSE_TOP.
const DENSE_TOP: f64 = 10.0;
const DENSE_END: f64 = 12.0;
const LOG_START: f64 = 8.0;
const LOG_POINTS_PER_DECADE: usize = 48;

#[derive(Clone, Debug)]
pub struct KernelProfile {
    law: StableLaw,
    step: f64,
    dense: Vec<f64>,
    log_rho0_ln: f64,
    log_step: f64,
    log_ln_vals: Vec<f64>,
    tail_slope: f64,
}

impl KernelProfile {
    /// Tabulate `p(1, .)` for a law in the quadrature range.
    pub fn build(law: StableLaw) -> Result<Self> {
        let alpha = law.alpha();
        // Fourth radial derivative scale at the origin bounds the cubic
        // interpolation error; step shrinks for the violently peaked small
        // alphas.
        let m4 = libm::tgamma((law.dim() as f64 + 4.0) / alpha) / alpha;
        let step = (2e-8 / m4.max(1.0)).powf(0.25).clamp(5e-4, 5e-3);
        let n_dense = (DENSE_END / step).ceil() as usize + 4;
        let mut dense = Vec::with_capacity(n_dense);
        for k in 0..n_dense {
            let rho = k as f64 * step;
            dense.push(heat_kernel_quadrature(law, 1.0, &pad(law, rho), 1e-11)?);
        }

        // Logarithmic tail table. Summation roundoff caps the achievable
        // relative accuracy deep in the tail, so the table ends where the
        // quadrature stops delivering 1e-4 relative and the extrapolation
        // takes over with the known tail exponent -(d + alpha).
        let decades = (RHO_MAX / LOG_START).log10();
        let n_log_max = (decades * LOG_POINTS_PER_DECADE as f64).ceil() as usize + 4;
        let log_rho0_ln = LOG_START.ln();
        let log_step = (RHO_MAX.ln() - log_rho0_ln) / (n_log_max - 4) as f64;
        let mut log_ln_vals = Vec::with_capacity(n_log_max);
        let mut last = dense[(LOG_START / step) as usize];
        for j in 0..n_log_max {
            let rho = (log_rho0_ln + j as f64 * log_step).exp();
            let point = pad(law, rho);
            let out = match radial_inversion(law, 1.0, &point, (last * 1e-8).max(1e-300)) {
                Ok(out) => out,
                Err(crate::error::Error::QuadratureNonConvergence { achieved, .. }) => {
                    radial_inversion(law, 1.0, &point, achieved * 8.0)?
                }
                Err(e) => return Err(e),
            };
            if !(out.value > 0.0) || out.error > 1e-4 * out.value {
                break;
            }
            log_ln_vals.push(out.value.ln());
            last = out.value;
        }
        if log_ln_vals.len() < 8 {
            return Err(Error::VerificationFailed(
                "kernel profile tail table too short".into(),
            ));
        }
        let tail_slope = -(law.dim() as f64 + alpha);

        let profile = KernelProfile {
            law,
            step,
            dense,
            log_rho0_ln,
            log_step,
            log_ln_vals,
            tail_slope,
        };
        profile.self_check()?;
        Ok(profile)
    }

    pub fn law(&self) -> StableLaw {
        self.law
    }

    /// `p(1, rho)` by cubic interpolation.
    pub fn eval_unit(&self, rho: f64) -> f64 {
        let rho = rho.abs();
        if rho <= DENSE_TOP {
            // The profile is even in rho; reflect stencil indices below zero.
            let u = rho / self.step;
            let i0 = u.floor() as i64;
            let f = u - i0 as f64;
            let w = lagrange4(f);
            let mut acc = 0.0;
            for (k, wk) in w.iter().enumerate() {
                let idx = (i0 + k as i64 - 1).unsigned_abs() as usize;
                acc += wk * self.dense[idx];
            }
            acc
        } else {
            let lr = rho.ln();
            let u = (lr - self.log_rho0_ln) / self.log_step;
            let m = self.log_ln_vals.len();
            let i0 = u.floor() as i64;
            if i0 as usize + 2 >= m {
                // power-law extrapolation beyond the table
                let last = self.log_ln_vals[m - 1];
                let lr_last = self.log_rho0_ln + (m - 1) as f64 * self.log_step;
                return (last + self.tail_slope * (lr - lr_last)).exp();
            }
            let f = u - i0 as f64;
            let w = lagrange4(f);
            let mut acc = 0.0;
            for (k, wk) in w.iter().enumerate() {
                let idx = (i0 + k as i64 - 1).clamp(0, m as i64 - 1) as usize;
                acc += wk * self.log_ln_vals[idx];
            }
            acc.exp()
        }
    }

    /// `p(t, rho)` through self-similarity.
    pub fn eval(&self, t: f64, rho: f64) -> f64 {
        let alpha = self.law.alpha();
        let factor = t.powf(-(self.law.dim() as f64) / alpha);
        factor * self.eval_unit(rho * t.powf(-1.0 / alpha))
    }

    /// Compare the table against the direct quadrature at awkward radii.
    fn self_check(&self) -> Result<()> {
        let probes = [
            0.000_37, 0.52, 1.337, 3.91, 7.7, 9.99, 11.3, 47.0, 512.3, 9.1e4, 3.3e8,
        ];
        for &rho in &probes {
            let direct = heat_kernel_quadrature(self.law, 1.0, &pad(self.law, rho), 1e-12)?;
            let interp = self.eval_unit(rho);
            let allowed = 5e-9_f64.max(1e-6 * direct);
            if (interp - direct).abs() > allowed {
                return Err(Error::VerificationFailed(format!(
                    "kernel profile self-check failed at rho={rho}: interp {interp}, direct {direct}"
                )));
            }
        }
        Ok(())
    }
}

fn pad(law: StableLaw, rho: f64) -> Vec<f64> {
    let mut x = vec![0.0; law.dim()];
    x[0] = rho;
    x
}

fn lagrange4(f: f64) -> [f64; 4] {
    [
        -f * (f - 1.0) * (f - 2.0) / 6.0,
        (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0,
        -f * (f + 1.0) * (f - 2.0) / 2.0,
        f * (f + 1.0) * (f - 1.0) / 6.0,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_matches_direct_quadrature_alpha_15() {
        let law = StableLaw::new(1.5, 1).unwrap();
        let p = KernelProfile::build(law).unwrap();
        for &rho in &[0.0, 0.013, 0.5, 2.75, 9.5, 20.0, 1e3, 1e7] {
            let direct = heat_kernel_quadrature(law, 1.0, &[rho], 1e-12).unwrap();
            let got = p.eval_unit(rho);
            assert!(
                (got - direct).abs() < 5e-9 + 1e-6 * direct,
                "rho={rho}: interp {got}, direct {direct}"
            );
        }
    }

    #[test]
    fn profile_rescales_by_self_similarity() {
        let law = StableLaw::new(0.7, 1).unwrap();
        let p = KernelProfile::build(law).unwrap();
        for &(t, rho) in &[(0.25, 0.5), (3.0, 2.0), (10.0, 0.0)] {
            let direct = heat_kernel_quadrature(law, t, &[rho], 1e-11).unwrap();
            let got = p.eval(t, rho);
            assert!(
                (got - direct).abs() < 1e-7 + 1e-5 * direct,
                "t={t} rho={rho}: {got} vs {direct}"
            );
        }
    }

    #[test]
    fn tail_extrapolation_follows_power_law() {
        let law = StableLaw::new(1.2, 1).unwrap();
        let p = KernelProfile::build(law).unwrap();
        // Beyond RHO_MAX the extrapolated slope should track rho^{-(1+alpha)}.
        let a = p.eval_unit(2e13);
        let b = p.eval_unit(4e13);
        let slope = (b / a).ln() / 2f64.ln();
        assert!(
            (slope + 2.2).abs() < 0.05,
            "tail slope {slope}, expected about -2.2"
        );
    }
}
