//! Uniform periodic grids on `[-L, L)^d` and real fields sampled on them.

use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerated spectral undershoot; anything between `-EPS_CLAMP` and 0 is
/// ringing, anything below is a fault the caller should surface.
pub const EPS_CLAMP: f64 = 1e-8;

/// A uniform periodic lattice: `n` points per axis (a power of two, at
/// least 16) on `[-half_width, half_width)`, spacing `h = 2 L / n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    dim: usize,
    n: usize,
    half_width: f64,
}

impl Grid {
    pub fn new(dim: usize, n: usize, half_width: f64) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::invalid(format!("dim must be 1, 2 or 3, got {dim}")));
        }
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::invalid(format!(
                "points per axis must be a power of two >= 16, got {n}"
            )));
        }
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(Error::invalid(format!(
                "half-width must be positive, got {half_width}"
            )));
        }
        Ok(Grid { dim, n, half_width })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Points per axis.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    /// Total number of lattice points, `n^dim`.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    pub fn axis_coord(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.spacing()
    }

    /// Decompose a flat index (first axis fastest).
    pub fn node(&self, flat: usize) -> [f64; 3] {
        let mut out = [0.0; 3];
        let mut rest = flat;
        for v in out.iter_mut().take(self.dim) {
            *v = self.axis_coord(rest % self.n);
            rest /= self.n;
        }
        out
    }

    /// Physical wavenumber of the k-th mode along one axis: the fundamental
    /// is `pi / L`, indices above `n/2` wrap to negative frequencies.
    pub fn wavenumber(&self, k: usize) -> f64 {
        let signed = if k <= self.n / 2 {
            k as f64
        } else {
            k as f64 - self.n as f64
        };
        signed * std::f64::consts::PI / self.half_width
    }
}

/// Metadata stored alongside a serialized field.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FieldMeta {
    pub dim: usize,
    pub n: usize,
    pub half_width: f64,
    pub time: f64,
    pub mass: f64,
}

/// A real-valued density sampled on a [`Grid`], stamped with the time it
/// represents.
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    grid: Grid,
    values: Vec<f64>,
    time: f64,
}

impl Field {
    pub fn new(grid: Grid, values: Vec<f64>, time: f64) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::invalid(format!(
                "field has {} values for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        Ok(Field { grid, values, time })
    }

    pub fn from_fn(grid: Grid, time: f64, mut f: impl FnMut(&[f64]) -> f64) -> Self {
        let values = (0..grid.len())
            .map(|i| {
                let p = grid.node(i);
                f(&p[..grid.dim()])
            })
            .collect();
        Field { grid, values, time }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn set_time(&mut self, t: f64) {
        self.time = t;
    }

    /// Lattice mass `h^d * sum(values)`; exact for the periodic trapezoid.
    pub fn mass(&self) -> f64 {
        self.grid.cell_volume() * self.values.iter().sum::<f64>()
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Rescale to unit lattice mass.
    pub fn normalize(&mut self) {
        let m = self.mass();
        if m > 0.0 {
            let inv = 1.0 / m;
            for v in &mut self.values {
                *v *= inv;
            }
        }
    }

    /// Zero out negative values, returning the most negative one seen.
    pub fn clamp_negative(&mut self) -> f64 {
        let mut worst = 0.0f64;
        for v in &mut self.values {
            if *v < 0.0 {
                worst = worst.min(*v);
                *v = 0.0;
            }
        }
        worst
    }

    /// Periodic cubic (4-point Lagrange) interpolation at an arbitrary point.
    pub fn sample_cubic(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.grid.dim());
        let n = self.grid.n();
        let h = self.grid.spacing();
        let l = self.grid.half_width();

        // Per-axis stencil: base index and 4 Lagrange weights.
        let mut base = [0i64; 3];
        let mut weights = [[0.0f64; 4]; 3];
        for (ax, &xi) in x.iter().enumerate() {
            let u = (xi + l) / h;
            let i0 = u.floor();
            let f = u - i0;
            base[ax] = i0 as i64;
            weights[ax] = [
                -f * (f - 1.0) * (f - 2.0) / 6.0,
                (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0,
                -f * (f + 1.0) * (f - 2.0) / 2.0,
                f * (f + 1.0) * (f - 1.0) / 6.0,
            ];
        }

        let wrap = |i: i64| -> usize { (i.rem_euclid(n as i64)) as usize };
        let dim = self.grid.dim();
        let mut acc = 0.0;
        let stencil = 4usize.pow(dim as u32);
        for s in 0..stencil {
            let mut idx = 0usize;
            let mut w = 1.0;
            let mut stride = 1usize;
            let mut rest = s;
            for ax in 0..dim {
                let o = (rest % 4) as i64 - 1;
                rest /= 4;
                idx += wrap(base[ax] + o) * stride;
                w *= weights[ax][(o + 1) as usize];
                stride *= n;
            }
            acc += w * self.values[idx];
        }
        acc
    }

    pub fn meta(&self) -> FieldMeta {
        FieldMeta {
            dim: self.grid.dim(),
            n: self.grid.n(),
            half_width: self.grid.half_width(),
            time: self.time,
            mass: self.mass(),
        }
    }

    /// Write the field as CSV (one row per point: coordinates then value)
    /// plus a JSON metadata sidecar. Values round-trip bit-exactly.
    pub fn write_files(&self, csv_path: &Path, meta_path: &Path) -> Result<()> {
        let mut w = BufWriter::new(std::fs::File::create(csv_path)?);
        let dim = self.grid.dim();
        let header: Vec<&str> = ["x1", "x2", "x3"][..dim].to_vec();
        writeln!(w, "{},value", header.join(","))?;
        for (i, v) in self.values.iter().enumerate() {
            let p = self.grid.node(i);
            for c in &p[..dim] {
                write!(w, "{c},")?;
            }
            writeln!(w, "{v}")?;
        }
        w.flush()?;
        let meta = serde_json::to_string_pretty(&self.meta())?;
        std::fs::write(meta_path, meta)?;
        Ok(())
    }

    pub fn read_files(csv_path: &Path, meta_path: &Path) -> Result<Field> {
        let meta: FieldMeta = serde_json::from_str(&std::fs::read_to_string(meta_path)?)?;
        let grid = Grid::new(meta.dim, meta.n, meta.half_width)?;
        let reader = BufReader::new(std::fs::File::open(csv_path)?);
        let mut values = Vec::with_capacity(grid.len());
        for (ln, line) in reader.lines().enumerate() {
            let line = line?;
            if ln == 0 {
                continue; // header
            }
            if line.is_empty() {
                continue;
            }
            let last = line
                .rsplit(',')
                .next()
                .ok_or_else(|| Error::Parse(format!("bad csv row {ln}")))?;
            let v: f64 = last
                .parse()
                .map_err(|e| Error::Parse(format!("row {ln}: {e}")))?;
            values.push(v);
        }
        Field::new(grid, values, meta.time)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert!(Grid::new(1, 16, 1.0).is_ok());
        assert!(Grid::new(1, 15, 1.0).is_err());
        assert!(Grid::new(1, 8, 1.0).is_err());
        assert!(Grid::new(0, 16, 1.0).is_err());
        assert!(Grid::new(1, 16, 0.0).is_err());
    }

    #[test]
    fn node_layout_is_x_fastest() {
        let g = Grid::new(2, 16, 4.0).unwrap();
        assert_eq!(g.node(0)[..2], [-4.0, -4.0]);
        assert_eq!(g.node(1)[..2], [-3.5, -4.0]);
        assert_eq!(g.node(16)[..2], [-4.0, -3.5]);
    }

    #[test]
    fn wavenumbers_wrap_to_negative() {
        let g = Grid::new(1, 16, 2.0).unwrap();
        assert_eq!(g.wavenumber(0), 0.0);
        assert!((g.wavenumber(1) - std::f64::consts::PI / 2.0).abs() < 1e-15);
        assert!((g.wavenumber(15) + std::f64::consts::PI / 2.0).abs() < 1e-15);
        assert!((g.wavenumber(8) - 8.0 * std::f64::consts::PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn cubic_interpolation_reproduces_cubics() {
        // On nodes a cubic is interpolated exactly (away from the wrap seam).
        let g = Grid::new(1, 64, 8.0).unwrap();
        let f = |x: f64| 0.3 + 0.2 * x - 0.05 * x * x + 0.01 * x * x * x;
        let fld = Field::from_fn(g, 0.0, |p| f(p[0]));
        for &x in &[-3.3, -0.77, 0.0, 1.234, 5.9] {
            let got = fld.sample_cubic(&[x]);
            assert!((got - f(x)).abs() < 1e-12, "x={x}: {got} vs {}", f(x));
        }
    }

    #[test]
    fn cubic_interpolation_2d_smooth_field() {
        let g = Grid::new(2, 128, 4.0).unwrap();
        let f = |x: f64, y: f64| (-(x * x + 0.5 * y * y) / 3.0).exp();
        let fld = Field::from_fn(g, 0.0, |p| f(p[0], p[1]));
        for &(x, y) in &[(0.3, -1.2), (2.0, 2.0), (-3.1, 0.4)] {
            let got = fld.sample_cubic(&[x, y]);
            let want = f(x, y);
            assert!((got - want).abs() < 2e-6, "({x},{y}): {got} vs {want}");
        }
    }

    #[test]
    fn mass_and_normalization() {
        let g = Grid::new(1, 32, 2.0).unwrap();
        let mut fld = Field::from_fn(g, 0.0, |_| 2.0);
        // 32 cells of width 0.125, each value 2 -> mass 8.
        assert!((fld.mass() - 8.0).abs() < 1e-12);
        fld.normalize();
        assert!((fld.mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn csv_roundtrip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let g = Grid::new(1, 32, 3.0).unwrap();
        let fld = Field::from_fn(g, 0.75, |p| (p[0] * 12.345).sin() / 7.0 + 1e-17);
        let csv = dir.path().join("f.csv");
        let meta = dir.path().join("f.json");
        fld.write_files(&csv, &meta).unwrap();
        let back = Field::read_files(&csv, &meta).unwrap();
        assert_eq!(back.grid(), fld.grid());
        assert_eq!(back.time(), fld.time());
        assert_eq!(back.values(), fld.values());
    }
}
