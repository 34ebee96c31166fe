//! Initial data for the Cauchy problem: bounded nonnegative densities with a
//! declared continuity set. Every kind supports grid discretization and
//! direct sampling; the latter feeds the Monte Carlo oracle.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Field, Grid};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MixtureComponent {
    pub weight: f64,
    pub mean: Vec<f64>,
    pub sigma: f64,
}

/// Supported initial densities.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InitialData {
    /// Normalized indicator of an axis-aligned box.
    IndicatorBox { lo: Vec<f64>, hi: Vec<f64> },
    /// Convex combination of isotropic Gaussians.
    GaussianMixture { components: Vec<MixtureComponent> },
    /// Empirical measure carried by explicit sample points (flattened
    /// row-major, `len = count * dim`). Has no pointwise density.
    CustomSamples { dim: usize, points: Vec<f64> },
}

impl InitialData {
    pub fn indicator_box(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.is_empty() || lo.len() > 3 || lo.len() != hi.len() {
            return Err(Error::invalid("box bounds must share dimension 1..=3"));
        }
        if lo.iter().zip(&hi).any(|(a, b)| !(a < b)) {
            return Err(Error::invalid("box must have positive extent"));
        }
        Ok(InitialData::IndicatorBox { lo, hi })
    }

    /// Uniform density over `[-w, w]^dim`.
    pub fn uniform(dim: usize, w: f64) -> Result<Self> {
        Self::indicator_box(vec![-w; dim], vec![w; dim])
    }

    pub fn gaussian_mixture(mut components: Vec<MixtureComponent>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::invalid("mixture needs at least one component"));
        }
        let dim = components[0].mean.len();
        if dim == 0 || dim > 3 {
            return Err(Error::invalid("mixture dimension must be 1..=3"));
        }
        let total: f64 = components.iter().map(|c| c.weight).sum();
        if !(total > 0.0) {
            return Err(Error::invalid("mixture weights must have positive sum"));
        }
        for c in &mut components {
            if c.mean.len() != dim || !(c.sigma > 0.0) || c.weight < 0.0 {
                return Err(Error::invalid("bad mixture component"));
            }
            c.weight /= total;
        }
        Ok(InitialData::GaussianMixture { components })
    }

    pub fn custom_samples(dim: usize, points: Vec<f64>) -> Result<Self> {
        if dim == 0 || dim > 3 || points.is_empty() || points.len() % dim != 0 {
            return Err(Error::invalid("sample list must be nonempty with len divisible by dim"));
        }
        Ok(InitialData::CustomSamples { dim, points })
    }

    pub fn dim(&self) -> usize {
        match self {
            InitialData::IndicatorBox { lo, .. } => lo.len(),
            InitialData::GaussianMixture { components } => components[0].mean.len(),
            InitialData::CustomSamples { dim, .. } => *dim,
        }
    }

    /// Pointwise density, normalized over the whole space. The empirical
    /// kind has none.
    pub fn density(&self, x: &[f64]) -> Result<f64> {
        match self {
            InitialData::IndicatorBox { lo, hi } => {
                let inside = lo
                    .iter()
                    .zip(hi)
                    .zip(x)
                    .all(|((a, b), xi)| xi >= a && xi <= b);
                let vol: f64 = lo.iter().zip(hi).map(|(a, b)| b - a).product();
                Ok(if inside { 1.0 / vol } else { 0.0 })
            }
            InitialData::GaussianMixture { components } => {
                let d = self.dim() as f64;
                let mut acc = 0.0;
                for c in components {
                    let r2: f64 = c
                        .mean
                        .iter()
                        .zip(x)
                        .map(|(m, xi)| (xi - m) * (xi - m))
                        .sum();
                    let norm = (2.0 * std::f64::consts::PI * c.sigma * c.sigma).powf(-d / 2.0);
                    acc += c.weight * norm * (-r2 / (2.0 * c.sigma * c.sigma)).exp();
                }
                Ok(acc)
            }
            InitialData::CustomSamples { .. } => Err(Error::Unsupported(
                "an empirical measure has no pointwise density".into(),
            )),
        }
    }

    /// Whether the density is continuous at `x` (box data is discontinuous
    /// on its faces; a face hit is detected up to a small relative margin).
    pub fn is_continuity_point(&self, x: &[f64]) -> bool {
        match self {
            InitialData::IndicatorBox { lo, hi } => {
                let margin = 1e-9;
                lo.iter().zip(hi).zip(x).all(|((a, b), xi)| {
                    let eps = margin * (1.0 + xi.abs());
                    (xi - a).abs() > eps && (xi - b).abs() > eps
                })
            }
            InitialData::GaussianMixture { .. } => true,
            InitialData::CustomSamples { .. } => false,
        }
    }

    /// Sample one point; the caller supplies the stream.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> [f64; 3] {
        let mut out = [0.0; 3];
        match self {
            InitialData::IndicatorBox { lo, hi } => {
                for (i, (a, b)) in lo.iter().zip(hi).enumerate() {
                    out[i] = rng.random_range(*a..*b);
                }
            }
            InitialData::GaussianMixture { components } => {
                let mut u: f64 = rng.random();
                let mut chosen = &components[components.len() - 1];
                for c in components {
                    if u < c.weight {
                        chosen = c;
                        break;
                    }
                    u -= c.weight;
                }
                for (i, m) in chosen.mean.iter().enumerate() {
                    let z: f64 = StandardNormal.sample(rng);
                    out[i] = m + chosen.sigma * z;
                }
            }
            InitialData::CustomSamples { dim, points } => {
                let count = points.len() / dim;
                let idx = rng.random_range(0..count);
                out[..*dim].copy_from_slice(&points[idx * dim..(idx + 1) * dim]);
            }
        }
        out
    }

    /// Discretize onto a grid and renormalize once to unit lattice mass.
    ///
    /// Box indicators are cell-averaged (exact per-axis overlap fractions)
    /// rather than node-sampled, so the discrete box carries its edges with
    /// O(h^2) instead of O(h) error.
    pub fn discretize(&self, grid: Grid) -> Result<Field> {
        if self.dim() != grid.dim() {
            return Err(Error::invalid(format!(
                "initial data dimension {} vs grid dimension {}",
                self.dim(),
                grid.dim()
            )));
        }
        let mut field = match self {
            InitialData::IndicatorBox { lo, hi } => {
                let h = grid.spacing();
                Field::from_fn(grid, 0.0, |p| {
                    let mut frac = 1.0;
                    for ((a, b), xi) in lo.iter().zip(hi).zip(p) {
                        let cell_lo = xi - 0.5 * h;
                        let cell_hi = xi + 0.5 * h;
                        let overlap = (b.min(cell_hi) - a.max(cell_lo)).max(0.0);
                        frac *= overlap / h;
                    }
                    frac
                })
            }
            InitialData::GaussianMixture { .. } => {
                Field::from_fn(grid, 0.0, |p| self.density(p).unwrap())
            }
            InitialData::CustomSamples { dim, points } => {
                let mut values = vec![0.0; grid.len()];
                let n = grid.n();
                let h = grid.spacing();
                let l = grid.half_width();
                let count = points.len() / dim;
                let mut outside = 0usize;
                for p in points.chunks(*dim) {
                    let mut idx = 0usize;
                    let mut stride = 1usize;
                    let mut ok = true;
                    for &c in p {
                        let i = ((c + l) / h).floor();
                        if i < 0.0 || i >= n as f64 {
                            ok = false;
                            break;
                        }
                        idx += (i as usize) * stride;
                        stride *= n;
                    }
                    if ok {
                        values[idx] += 1.0;
                    } else {
                        outside += 1;
                    }
                }
                if outside == count {
                    return Err(Error::invalid("all sample points fall outside the grid"));
                }
                Field::new(grid, values, 0.0)?
            }
        };
        field.normalize();
        Ok(field)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn box_density_and_continuity() {
        let u0 = InitialData::indicator_box(vec![-1.0], vec![1.0]).unwrap();
        assert_eq!(u0.density(&[0.2]).unwrap(), 0.5);
        assert_eq!(u0.density(&[1.5]).unwrap(), 0.0);
        assert!(u0.is_continuity_point(&[0.0]));
        assert!(u0.is_continuity_point(&[2.0]));
        assert!(!u0.is_continuity_point(&[1.0]));
    }

    #[test]
    fn discretized_box_has_unit_mass_and_soft_edges() {
        let grid = Grid::new(1, 64, 4.0).unwrap();
        let u0 = InitialData::indicator_box(vec![-1.0], vec![1.0]).unwrap();
        let f = u0.discretize(grid).unwrap();
        assert!((f.mass() - 1.0).abs() < 1e-12);
        // interior cells sit at the plateau, far cells at zero
        let mid = f.values()[32];
        assert!((mid - 0.5).abs() < 1e-9, "plateau {mid}");
        assert_eq!(f.values()[0], 0.0);
    }

    #[test]
    fn mixture_density_normalizes_weights() {
        let u0 = InitialData::gaussian_mixture(vec![
            MixtureComponent { weight: 2.0, mean: vec![0.0], sigma: 1.0 },
            MixtureComponent { weight: 2.0, mean: vec![3.0], sigma: 0.5 },
        ])
        .unwrap();
        let v = u0.density(&[0.0]).unwrap();
        let expect = 0.5 / (2.0 * std::f64::consts::PI).sqrt()
            + 0.5 * ((-18.0f64).exp() / (2.0 * std::f64::consts::PI * 0.25).sqrt());
        assert!((v - expect).abs() < 1e-12);
    }

    #[test]
    fn sampling_matches_box_moments() {
        let u0 = InitialData::indicator_box(vec![-1.0, 0.0], vec![1.0, 4.0]).unwrap();
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(7);
        let n = 20_000;
        let mut mean = [0.0f64; 2];
        for _ in 0..n {
            let p = u0.sample(&mut rng);
            mean[0] += p[0];
            mean[1] += p[1];
        }
        mean[0] /= n as f64;
        mean[1] /= n as f64;
        assert!(mean[0].abs() < 0.02, "{}", mean[0]);
        assert!((mean[1] - 2.0).abs() < 0.04, "{}", mean[1]);
    }

    #[test]
    fn custom_samples_histogram() {
        let grid = Grid::new(1, 16, 2.0).unwrap();
        let u0 = InitialData::custom_samples(1, vec![0.1, 0.1, 0.1, -1.9]).unwrap();
        let f = u0.discretize(grid).unwrap();
        assert!((f.mass() - 1.0).abs() < 1e-12);
        assert!(!u0.is_continuity_point(&[0.1]));
        assert!(u0.density(&[0.1]).is_err());
    }
}
