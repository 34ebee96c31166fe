//! The stable law `(alpha, d)` and the two-sided bound functions.
//!
//! The convention throughout is fixed by the Fourier symbol: the heat kernel
//! of index `alpha` in dimension `d` is the inverse Fourier transform of
//! `exp(-t |xi|^alpha)`, with no extra scale constant. `alpha = 2` is the
//! Gaussian endpoint (variance `2t` per axis), `alpha = 1` the Poisson/Cauchy
//! kernel.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest stability index the oscillatory quadrature accepts.
pub const ALPHA_QUAD_MIN: f64 = 0.3;

/// An isotropic stable law: stability index `alpha` in (0, 2] and spatial
/// dimension `d` in {1, 2, 3}.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StableLaw {
    alpha: f64,
    dim: usize,
}

impl StableLaw {
    pub fn new(alpha: f64, dim: usize) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 2.0) || !alpha.is_finite() {
            return Err(Error::invalid(format!(
                "alpha must lie in (0, 2], got {alpha}"
            )));
        }
        if !(1..=3).contains(&dim) {
            return Err(Error::invalid(format!("dim must be 1, 2 or 3, got {dim}")));
        }
        Ok(StableLaw { alpha, dim })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_gaussian(&self) -> bool {
        self.alpha == 2.0
    }

    /// Surface area of the unit sphere in `dim` dimensions (2, 2*pi, 4*pi).
    pub fn sphere_area(&self) -> f64 {
        match self.dim {
            1 => 2.0,
            2 => 2.0 * std::f64::consts::PI,
            _ => 4.0 * std::f64::consts::PI,
        }
    }
}

/// Which side of the two-sided kernel estimate `min(t/r^(d+alpha), t^(-d/alpha))`
/// produced a bound value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundBranch {
    /// Power-law side `t / r^(d+alpha)`, active far from the origin.
    Tail,
    /// On-diagonal side `t^(-d/alpha)`, active near the origin.
    Bulk,
    /// Both sides equal, at `r = t^(1/alpha)`.
    Crossover,
}

/// Value of a bound function together with the branch that was active.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundValue {
    pub value: f64,
    pub branch: BoundBranch,
}

/// The sharp two-sided envelope `min(t/r^(d+alpha), t^(-d/alpha))`.
///
/// At `r = 0` the bulk branch applies.
pub fn sharp_bound(law: StableLaw, t: f64, r: f64) -> Result<BoundValue> {
    if t <= 0.0 {
        return Err(Error::invalid(format!("t must be positive, got {t}")));
    }
    if r < 0.0 {
        return Err(Error::invalid(format!("r must be nonnegative, got {r}")));
    }
    let bulk = t.powf(-(law.dim as f64) / law.alpha);
    if r == 0.0 {
        return Ok(BoundValue {
            value: bulk,
            branch: BoundBranch::Bulk,
        });
    }
    let tail = t / r.powf(law.dim as f64 + law.alpha);
    let (value, branch) = if tail < bulk {
        (tail, BoundBranch::Tail)
    } else if tail > bulk {
        (bulk, BoundBranch::Bulk)
    } else {
        (bulk, BoundBranch::Crossover)
    };
    Ok(BoundValue { value, branch })
}

/// Envelope for the m-th spatial derivative of the heat kernel:
/// the sum over `n = 0..floor(m/2)` of
/// `r^(m-2n) * min(t/r^(d+alpha+2(m-n)), t^(-(d+2(m-n))/alpha))`,
/// with every prefactor set to 1. A verifier fits the single global
/// constant that makes it an upper bound.
pub fn derivative_bound(law: StableLaw, m: u32, t: f64, r: f64) -> Result<f64> {
    if t <= 0.0 {
        return Err(Error::invalid(format!("t must be positive, got {t}")));
    }
    if r < 0.0 {
        return Err(Error::invalid(format!("r must be nonnegative, got {r}")));
    }
    let d = law.dim as f64;
    let alpha = law.alpha;
    let mut total = 0.0;
    for n in 0..=(m / 2) {
        let pow = (m - 2 * n) as f64;
        // With the floor convention every power of r is nonnegative, so r = 0
        // is admissible; guard anyway in case the convention changes.
        if pow < 0.0 && r == 0.0 {
            return Err(Error::invalid(
                "r = 0 with a negative power of r in the derivative bound".to_string(),
            ));
        }
        let q = 2.0 * (m - n) as f64;
        let bulk = t.powf(-(d + q) / alpha);
        let term = if r == 0.0 {
            if pow == 0.0 {
                bulk
            } else {
                0.0
            }
        } else {
            let tail = t / r.powf(d + alpha + q);
            r.powf(pow) * tail.min(bulk)
        };
        total += term;
    }
    Ok(total)
}

/// A pointwise kernel evaluation request: time, point, and requested
/// absolute accuracy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelQuery {
    pub t: f64,
    pub x: Vec<f64>,
    pub tol: f64,
}

impl KernelQuery {
    pub fn new(t: f64, x: Vec<f64>, tol: f64) -> Result<Self> {
        if t <= 0.0 || !t.is_finite() {
            return Err(Error::invalid(format!("t must be positive, got {t}")));
        }
        if tol <= 0.0 || !tol.is_finite() {
            return Err(Error::invalid(format!("tol must be positive, got {tol}")));
        }
        Ok(KernelQuery { t, x, tol })
    }

    /// The heat kernel at this query point.
    pub fn evaluate(&self, law: StableLaw) -> Result<f64> {
        crate::kernel::heat_kernel(law, self.t, &self.x, self.tol)
    }

    /// The m-th derivative along the first coordinate at this query point.
    pub fn derivative(&self, law: StableLaw, m: u32) -> Result<f64> {
        crate::kernel::kernel_derivative(law, self.t, &self.x, m, self.tol)
    }
}

/// A drift-kernel evaluation request: `p(t, x, y)` with requested accuracy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OuKernelQuery {
    pub t: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub tol: f64,
}

impl OuKernelQuery {
    pub fn new(t: f64, x: Vec<f64>, y: Vec<f64>, tol: f64) -> Result<Self> {
        if t <= 0.0 || !t.is_finite() {
            return Err(Error::invalid(format!("t must be positive, got {t}")));
        }
        if tol <= 0.0 || !tol.is_finite() {
            return Err(Error::invalid(format!("tol must be positive, got {tol}")));
        }
        if x.len() != y.len() {
            return Err(Error::invalid("x and y must have the same dimension"));
        }
        Ok(OuKernelQuery { t, x, y, tol })
    }

    /// The drift kernel `p(t, x, y)` at this query.
    pub fn evaluate(&self, law: StableLaw) -> Result<f64> {
        crate::ou::ou_kernel(law, self.t, &self.x, &self.y, self.tol)
    }

    /// The m-th x-gradient of the drift kernel at this query.
    pub fn gradient(&self, law: StableLaw, m: u32) -> Result<f64> {
        crate::ou::ou_kernel_gradient(law, self.t, &self.x, &self.y, m, self.tol)
    }
}

pub(crate) fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn law_rejects_bad_parameters() {
        assert!(StableLaw::new(0.0, 1).is_err());
        assert!(StableLaw::new(-0.5, 1).is_err());
        assert!(StableLaw::new(2.0001, 1).is_err());
        assert!(StableLaw::new(f64::NAN, 1).is_err());
        assert!(StableLaw::new(1.0, 0).is_err());
        assert!(StableLaw::new(1.0, 4).is_err());
        assert!(StableLaw::new(2.0, 3).is_ok());
    }

    #[test]
    fn sharp_bound_crossover_at_unit_scale() {
        // alpha=1, d=1, t=1, r=1: both branches equal 1.
        let law = StableLaw::new(1.0, 1).unwrap();
        let b = sharp_bound(law, 1.0, 1.0).unwrap();
        assert_eq!(b.value, 1.0);
        assert_eq!(b.branch, BoundBranch::Crossover);
    }

    #[test]
    fn sharp_bound_tail_and_bulk() {
        let law = StableLaw::new(2.0, 1).unwrap();
        let b = sharp_bound(law, 1.0, 10.0).unwrap();
        assert!((b.value - 1e-3).abs() < 1e-18);
        assert_eq!(b.branch, BoundBranch::Tail);

        let law = StableLaw::new(1.5, 2).unwrap();
        let b = sharp_bound(law, 0.5, 0.0).unwrap();
        assert!((b.value - 0.5f64.powf(-4.0 / 3.0)).abs() < 1e-15);
        assert_eq!(b.branch, BoundBranch::Bulk);
    }

    #[test]
    fn derivative_bound_m0_matches_sharp_bound() {
        let law = StableLaw::new(1.3, 1).unwrap();
        for &(t, r) in &[(0.2, 0.5), (1.0, 1.0), (3.0, 7.0), (1.0, 0.0)] {
            let a = derivative_bound(law, 0, t, r).unwrap();
            let b = sharp_bound(law, t, r).unwrap().value;
            assert!((a - b).abs() <= 1e-15 * b.max(1.0), "t={t} r={r}");
        }
    }

    #[test]
    fn derivative_bound_hand_values() {
        // m=1, alpha=1, d=1, t=1, r=1: 1 * min(1, 1) = 1.
        let law = StableLaw::new(1.0, 1).unwrap();
        assert!((derivative_bound(law, 1, 1.0, 1.0).unwrap() - 1.0).abs() < 1e-15);

        // m=2, alpha=1.5, d=1, t=1, r=2: two-term sum evaluated by hand,
        // n=0: 4 * min(2^-6.5, 1), n=1: min(2^-4.5, 1).
        let law = StableLaw::new(1.5, 1).unwrap();
        let expect = 4.0 * 2f64.powf(-6.5) + 2f64.powf(-4.5);
        let got = derivative_bound(law, 2, 1.0, 2.0).unwrap();
        assert!((got - expect).abs() < 1e-15, "got {got}, expect {expect}");
    }
}

#[cfg(test)]
mod query_tests {
    use super::*;

    #[test]
    fn queries_validate_and_evaluate() {
        assert!(KernelQuery::new(0.0, vec![0.0], 1e-8).is_err());
        assert!(KernelQuery::new(1.0, vec![0.0], -1.0).is_err());
        assert!(OuKernelQuery::new(1.0, vec![0.0], vec![0.0, 1.0], 1e-8).is_err());

        let law = StableLaw::new(1.0, 1).unwrap();
        let q = KernelQuery::new(1.0, vec![0.0], 1e-10).unwrap();
        let v = q.evaluate(law).unwrap();
        assert!((v - 1.0 / std::f64::consts::PI).abs() < 1e-14);

        let q = OuKernelQuery::new(1.0, vec![0.3], vec![-0.2], 1e-10).unwrap();
        let v = q.evaluate(law).unwrap();
        let direct = crate::ou::ou_kernel(law, 1.0, &[0.3], &[-0.2], 1e-10).unwrap();
        assert_eq!(v, direct);
        let g = q.gradient(law, 1).unwrap();
        assert!(g.is_finite());
    }
}
