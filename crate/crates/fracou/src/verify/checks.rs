//! The individual claim checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde_json::json;

use super::CheckRecord;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::initial::InitialData;
use crate::kernel::{heat_kernel, kernel_derivative};
use crate::law::{derivative_bound, sharp_bound, StableLaw};
use crate::mc::{compare_densities, empirical_density, simulate_ensemble};
use crate::ou::{
    effective_time, ou_kernel, ou_kernel_gradient, ou_kernel_gradient_via_dilation,
    ou_kernel_via_dilation, ou_kernel_via_effective_time,
};
use crate::solver::{
    heat_propagate, initial_continuity_check, ou_solve_direct, ou_solve_unclamped, pde_residual,
    smoothness_probe, stationary_field, SolvePlan,
};

fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

// ---------------------------------------------------------------------------
// Two-sided estimate.
// ---------------------------------------------------------------------------

/// Ratio of the kernel to `min(t/r^(d+alpha), t^(-d/alpha))` over a
/// log-spaced `(t, |x|)` sweep: both extremes must be finite and positive,
/// and the ratio must collapse onto a single function of `|x| t^{-1/alpha}`.
pub fn check_two_sided_estimate(law: StableLaw) -> Result<CheckRecord> {
    let mut rec = CheckRecord::new(
        format!("two-sided/alpha={}", law.alpha()),
        "kernel within constant multiples of min(t/r^(d+a), t^(-d/a))",
    );
    // The polynomial tail bound holds for the jump range only; at the
    // Gaussian endpoint the sweep is restricted to moderate reduced radii
    // and the record says so.
    let reduced_cap = if law.is_gaussian() { 8.0 } else { 1e2 };
    if law.is_gaussian() {
        rec.note = "alpha=2 lies outside the jump-regime estimate; sweep restricted to \
                    reduced radius <= 8"
            .to_string();
    }
    let ts = logspace(1e-2, 1e2, 9);
    let mut xs = vec![0.0];
    xs.extend(logspace(1e-2, 1e2, 17));
    rec.params = json!({"t": [1e-2, 1e2], "x": [0.0, 1e2], "t_points": ts.len(), "x_points": xs.len()});

    let mut c1 = f64::INFINITY;
    let mut c2 = 0.0f64;
    for &t in &ts {
        for &x in &xs {
            let reduced = x * t.powf(-1.0 / law.alpha());
            if reduced > reduced_cap {
                continue;
            }
            let bound = sharp_bound(law, t, x)?.value;
            let tol = (bound * 1e-6).clamp(1e-250, 1e-8);
            let kernel = heat_kernel(law, t, &[x], tol)?;
            let ratio = kernel / bound;
            c1 = c1.min(ratio);
            c2 = c2.max(ratio);
        }
    }
    rec.measure("c1", c1);
    rec.measure("c2", c2);
    rec.require(c1 > 0.0 && c1.is_finite(), "lower ratio must be positive");
    rec.require(c2.is_finite(), "upper ratio must be finite");

    // Scaling collapse: the ratio at (t, x) and at (t', x') with equal
    // reduced radius must agree.
    let mut collapse = 0.0f64;
    for &reduced in logspace(1e-2, reduced_cap.min(50.0), 10).iter() {
        let mut ratios = Vec::new();
        for &t in &[0.037f64, 1.0, 29.0] {
            let x = reduced * t.powf(1.0 / law.alpha());
            let bound = sharp_bound(law, t, x)?.value;
            let tol = (bound * 1e-9).clamp(1e-250, 1e-10);
            ratios.push(heat_kernel(law, t, &[x], tol)? / bound);
        }
        for r in &ratios[1..] {
            collapse = collapse.max((r - ratios[0]).abs());
        }
    }
    rec.require_below("collapse_dev", collapse, 1e-6);
    Ok(rec)
}

// ---------------------------------------------------------------------------
// Derivative estimate.
// ---------------------------------------------------------------------------

/// Smallest constant with |d^m kernel| <= C * envelope over the sweep, and
/// its stability under doubling the sweep density.
pub fn check_derivative_estimate(law: StableLaw, m: u32) -> Result<CheckRecord> {
    let mut rec = CheckRecord::new(
        format!("derivative/alpha={}/m={m}", law.alpha()),
        "m-th kernel derivative bounded by the sum of shifted-envelope terms",
    );
    rec.note = "upper bound only: a signed derivative admits no pointwise lower bound".into();
    let fit = |points: usize| -> Result<f64> {
        let mut c_max = 0.0f64;
        for &r in &logspace(1e-2, 1e2, points) {
            let bound = derivative_bound(law, m, 1.0, r)?;
            let floor = match m {
                1 => 1e-11,
                _ => 1e-10,
            };
            let tol = (bound * 1e-4).clamp(floor, 1e-9);
            let d = kernel_derivative(law, 1.0, &[r], m, tol)?;
            c_max = c_max.max(d.abs() / bound);
        }
        Ok(c_max)
    };
    let base_points = 30;
    let c_base = fit(base_points)?;
    let c_dense = fit(2 * base_points)?;
    rec.params = json!({"t": 1.0, "r": [1e-2, 1e2], "points": base_points});
    rec.measure("c_max", c_dense);
    rec.require(c_dense.is_finite() && c_dense > 0.0, "constant must be finite");
    let drift = (c_dense / c_base - 1.0).abs();
    rec.require_below("sweep_doubling_drift", drift, 0.10);
    Ok(rec)
}

// ---------------------------------------------------------------------------
// Gradient transformation identity.
// ---------------------------------------------------------------------------

/// The drift-kernel gradient computed through the dilation identity must
/// match both the reduced-route evaluation and plain finite differences of
/// the kernel itself.
pub fn check_gradient_transform(law: StableLaw, seed: u64) -> Result<CheckRecord> {
    let mut rec = CheckRecord::new(
        format!("gradient-transform/alpha={}", law.alpha()),
        "d^m p(t,x,y) equals e^{(d+m)t} (-1)^m (d^m q)(dilated time, dilated point)",
    );
    let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0x67726164);
    let mut points: Vec<(f64, f64, f64)> = vec![(0.4, 0.3, -0.2), (0.5, 0.2, 0.1), (1.5, -0.6, 0.4)];
    for _ in 0..8 {
        points.push((
            0.2 + 1.8 * rng.random::<f64>(),
            2.0 * rng.random::<f64>() - 1.0,
            2.0 * rng.random::<f64>() - 1.0,
        ));
    }
    rec.params = json!({"points": points.len(), "m": [1, 2], "seed": seed});

    let mut dev_fd = 0.0f64;
    let mut dev_dilated = 0.0f64;
    for m in 1..=2u32 {
        // First pass: magnitudes, for the relative-deviation floor.
        let mut gmax = 0.0f64;
        let mut grads = Vec::new();
        for &(t, x, y) in &points {
            let g = ou_kernel_gradient(law, t, &[x], &[y], m, 1e-10)?;
            gmax = gmax.max(g.abs());
            grads.push(g);
        }
        let floor = 1e-3 * gmax;
        for (&(t, x, y), &g) in points.iter().zip(&grads) {
            let via_dilation = ou_kernel_gradient_via_dilation(law, t, &[x], &[y], m, 1e-10)?;
            dev_dilated =
                dev_dilated.max((g - via_dilation).abs() / g.abs().max(via_dilation.abs()).max(floor));

            // Richardson central differences of the kernel itself in x. The
            // step lives on the scale where the profile is smooth, which
            // shrinks rapidly for small stability indices.
            let alpha = law.alpha();
            let s = effective_time(alpha, t);
            let kappa = (libm::tgamma(1.0 / alpha) / libm::tgamma(7.0 / alpha))
                .powf(1.0 / 6.0)
                .clamp(1e-2, 1.0);
            let h0 = 0.05 * (s.powf(1.0 / alpha) * kappa).clamp(1e-4, 1.0);
            let f = |x1: f64| ou_kernel(law, t, &[x1], &[y], 1e-12);
            let stencil = |h: f64| -> Result<f64> {
                Ok(match m {
                    1 => (f(x + h)? - f(x - h)?) / (2.0 * h),
                    _ => (f(x + h)? - 2.0 * f(x)? + f(x - h)?) / (h * h),
                })
            };
            let d1 = stencil(h0)?;
            let d2 = stencil(h0 / 2.0)?;
            let fd = (4.0 * d2 - d1) / 3.0;
            dev_fd = dev_fd.max((g - fd).abs() / g.abs().max(fd.abs()).max(floor));
        }
    }
    rec.require_below("max_rel_dev_finite_differences", dev_fd, 1e-5);
    rec.require_below("max_rel_dev_dilated_route", dev_dilated, 1e-5);
    Ok(rec)
}

// ---------------------------------------------------------------------------
// Solution suite.
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct SolutionSuiteConfig {
    pub alphas: Vec<f64>,
    pub n_out: usize,
    /// Include the t = 5 horizon (large grids) in the stationarity check.
    pub long_horizon: bool,
    pub seed: u64,
}

impl Default for SolutionSuiteConfig {
    fn default() -> Self {
        SolutionSuiteConfig {
            alphas: vec![0.6, 1.0, 1.5, 2.0],
            n_out: 512,
            long_horizon: true,
            seed: 7,
        }
    }
}

pub fn check_solution_suite(cfg: &SolutionSuiteConfig) -> Result<Vec<CheckRecord>> {
    let mut records = Vec::new();

    records.push(mass_conservation_gaussian()?);
    records.push(mass_conservation_heavy_tail()?);
    records.push(ou_kernel_mass_in_x()?);
    records.push(positivity_and_route_agreement(cfg)?);
    records.push(spectral_semigroup()?);
    records.push(stationarity(cfg)?);
    records.push(flow_composition()?);
    records.push(continuity(cfg)?);
    records.push(smoothness(cfg)?);
    records.extend(residual_suite()?);
    records.push(negative_control()?);
    Ok(records)
}

fn mass_conservation_gaussian() -> Result<CheckRecord> {
    let mut rec = CheckRecord::new(
        "solution/mass/alpha=2",
        "lattice mass of the solved field stays within 1e-4 of 1",
    );
    let law = StableLaw::new(2.0, 1)?;
    let out = Grid::new(1, 512, 8.0)?;
    let u0 = InitialData::gaussian_mixture(vec![crate::initial::MixtureComponent {
        weight: 1.0,
        mean: vec![0.3],
        sigma: 1.0,
    }])?;
    let mut worst = 0.0f64;
    for &t in &[0.5, 1.0, 2.0] {
        let plan = SolvePlan::new(law, out, t, 1e-9)?;
        let u = plan.solve(&plan.discretize(&u0)?, t)?;
        worst = worst.max((u.mass() - 1.0).abs());
    }
    rec.params = json!({"t": [0.5, 1.0, 2.0], "n": 512, "half_width": 8.0});
    rec.require_below("max_mass_deviation", worst, 1e-4);
    Ok(rec)
}

/// Heavy tails lose mass through the output window unless the window obeys
/// the tail rule; with the rule applied the budget holds at 1e-4.
fn mass_conservation_heavy_tail() -> Result<CheckRecord> {
    let mut rec = CheckRecord::new(
        "solution/mass/alpha=1",
        "with the tail-rule window, solved mass stays within 1e-4 of 1",
    );
    let law = StableLaw::new(1.0, 1)?;
    // (2/pi) * s / L < 5e-5 at s = 1 - e^{-1} requires L ~ 8e3.
    let out = Grid::new(1, 1 << 16, 8100.0)?;
    let t = 1.0;
    let plan = SolvePlan::new(law, out, t, 1e-5)?;
    let u0 = InitialData::indicator_box(vec![-1.0], vec![1.0])?;
    let u = plan.solve(&plan.discretize(&u0)?, t)?;
    rec.params = json!({"t": t, "n_out": out.n(), "half_width": out.half_width(),
                        "n_in": plan.input.n(), "input_half_width": plan.input.half_width()});
    rec.require_below("mass_deviation", (u.mass() - 1.0).abs(), 1e-4);
    Ok(rec)
}

/// \int p(t, x, y) dx = 1 for fixed y (the kernel is the density in x).
fn ou_kernel_mass_in_x() -> Result<CheckRecord> {
    let mut rec = CheckRecord::new(
        "ou-kernel/mass-in-x/alpha=1.5",
        "the drift kernel integrates to 1 over the forward variable",
    );
    let law = StableLaw::new(1.5, 1)?;
    let (t, y) = (0.8, 0.4);
    // Tail rule: 2 c s / (alpha L^alpha) below 5e-7 needs L ~ 5.6e3.
    let l = 5600.0;
    let h = 0.5;
    let n = (2.0 * l / h) as usize;
    let mut mass = 0.0;
    for i in 0..n {
        let x = -l + (i as f64 + 0.5) * h;
        mass += ou_kernel_via_effective_time(law, t, &[x], &[y], 1e-11)?;
    }
    mass *= h;
    rec.params = json!({"t": t, "y": y, "half_width": l, "spacing": h});
    rec.require_below("mass_deviation", (mass - 1.0).abs(), 1e-6);
    Ok(rec)
}

fn positivity_and_route_agreement(cfg: &SolutionSuiteConfig) -> Result<CheckRecord> {
    let mut rec = CheckRecord::new(
        "solution/positivity-and-oracle",
        "solved fields stay above -1e-8 before clamping and match the direct \
         kernel contraction at random probes",
    );
    let u0 = InitialData::indicator_box(vec![-1.0], vec![1.0])?;
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed ^ 0x6f7261);
    let mut worst_min = 0.0f64;
    let mut worst_dev = 0.0f64;
    for &alpha in &[1.0, 1.5] {
        let law = StableLaw::new(alpha, 1)?;
        let out = Grid::new(1, cfg.n_out, 8.0)?;
        for &t in &[0.1, 0.5, 1.0] {
            let plan = SolvePlan::new(law, out, t, 1e-5)?;
            let field0 = plan.discretize(&u0)?;
            let u = ou_solve_unclamped(law, &field0, t, &out)?;
            worst_min = worst_min.min(u.min_value());
            if t >= 0.5 {
                for _ in 0..10 {
                    let x = 7.0 * (2.0 * rng.random::<f64>() - 1.0);
                    let direct = ou_solve_direct(law, &field0, t, &[x], 1e-8)?;
                    worst_dev = worst_dev.max((u.sample_cubic(&[x]) - direct).abs());
                }
            }
        }
    }
    rec.params = json!({"alphas": [1.0, 1.5], "t": [0.1, 0.5, 1.0], "probes": 20});
    rec.require_below("worst_undershoot", -worst_min, 1e-8);
    // Combined tolerance: box-edge discretization plus interpolation plus
    // trapezoid error of the oracle itself.
    rec.require_below("max_probe_deviation", worst_dev, 1e-3);
    Ok(rec)
}

fn spectral_semigroup() -> Result<CheckRecord> {
    let mut rec = CheckRecord::new(
        "solution/spectral-semigroup",
        "propagating a+b equals propagating a then b, to roundoff",
    );
    let law = StableLaw::new(0.8, 1)?;
    let grid = Grid::new(1, 256, 8.0)?;
    let u0 = InitialData::gaussian_mixture(vec![crate::initial::MixtureComponent {
        weight: 1.0,
        mean: vec![-0.4],
        sigma: 0.6,
    }])?;
    let f = u0.discretize(grid)?;
    let once = heat_propagate(law, &f, 0.9)?;
    let twice = heat_propagate(law, &heat_propagate(law, &f, 0.3)?, 0.6)?;
    let dev = once
        .values()
        .iter()
        .zip(twice.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    rec.require_below("max_deviation", dev, 1e-13);
    Ok(rec)
}

fn stationarity(cfg: &SolutionSuiteConfig) -> Result<CheckRecord> {
    let mut rec = CheckRecord::new(
        "solution/stationary-fixed-point",
        "the invariant density is reproduced by the solver at every horizon",
    );
    let horizons: &[f64] = if cfg.long_horizon {
        &[0.5, 1.0, 5.0]
    } else {
        &[0.5, 1.0]
    };
    let mut worst = 0.0f64;
    for &alpha in &cfg.alphas {
        let law = StableLaw::new(alpha, 1)?;
        let out = Grid::new(1, 256, 10.0)?;
        let reference = stationary_field(law, &out)?;
        for &t in horizons {
            let plan = SolvePlan::new(law, out, t, 2e-5)?;
            // Exact point values, deliberately not renormalized: the heavy
            // tail mass beyond any affordable window is a few permille (two
            // percent at alpha=0.6), and rescaling would bias the peak by
            // exactly that amount. The deficit sits beyond e^{-t} L_in and
            // never reaches the output window over the planned horizon.
            let u0 = stationary_field(law, &plan.input)?;
            let u = plan.solve(&u0, t)?;
            let dev = u
                .values()
                .iter()
                .zip(reference.values())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            worst = worst.max(dev);
        }
    }
    rec.params = json!({"alphas": cfg.alphas, "t": horizons, "n_out": 256, "half_width": 10.0});
    rec.require_below("sup_deviation", worst, 1e-4);
    Ok(rec)
}

fn flow_composition() -> Result<CheckRecord> {
    let mut rec = CheckRecord::new(
        "solution/flow-composition",
        "solving to t1 and then t2 equals solving to t1+t2 within twice the \
         solver tolerance",
    );
    let u0 = InitialData::indicator_box(vec![-1.0], vec![1.0])?;
    let mut worst = 0.0f64;
    for &alpha in &[1.0, 1.5] {
        let law = StableLaw::new(alpha, 1)?;
        let (t1, t2) = (0.4, 0.6);
        let out = Grid::new(1, 256, 8.0)?;
        let plan2 = SolvePlan::new(law, out, t2, 1e-5)?;
        let plan1 = SolvePlan::new(law, plan2.input, t1, 1e-5)?;
        let field0 = plan1.discretize(&u0)?;
        let mid = plan1.solve(&field0, t1)?;
        let chained = plan2.solve(&mid, t2)?;
        let direct = ou_solve_unclamped(law, &field0, t1 + t2, &out)?;
        let dev = chained
            .values()
            .iter()
            .zip(direct.values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        worst = worst.max(dev);
    }
    rec.params = json!({"alphas": [1.0, 1.5], "t1": 0.4, "t2": 0.6});
    rec.require_below("sup_deviation", worst, 2e-4);
    Ok(rec)
}

fn continuity(cfg: &SolutionSuiteConfig) -> Result<CheckRecord> {
    let mut rec = CheckRecord::new(
        "solution/initial-continuity",
        "u(t_k, x_k) -> u0(x0) along the probe sequence at continuity points",
    );
    let u0 = InitialData::indicator_box(vec![-1.0], vec![1.0])?;
    let mut worst_tail = 0.0f64;
    let mut all_monotone = true;
    for &alpha in &cfg.alphas {
        let law = StableLaw::new(alpha, 1)?;
        let report = initial_continuity_check(law, &u0, &[0.0], 3, 10)?;
        worst_tail = worst_tail.max(report.tail_deviation);
        all_monotone &= report.monotone_beyond_k5;
    }
    rec.params = json!({"alphas": cfg.alphas, "x0": 0.0, "k": [3, 10]});
    rec.require_below("max_tail_deviation", worst_tail, 1e-2);
    rec.require(all_monotone, "deviations must decrease beyond k=5");

    // Negative side: the box edge is not a continuity point and the probe
    // must refuse it.
    let edge = initial_continuity_check(StableLaw::new(1.0, 1)?, &u0, &[1.0], 3, 10);
    rec.require(
        matches!(edge, Err(Error::NotContinuityPoint(_))),
        "edge point must be rejected",
    );
    Ok(rec)
}

fn smoothness(cfg: &SolutionSuiteConfig) -> Result<CheckRecord> {
    let mut rec = CheckRecord::new(
        "solution/smoothness-proxy",
        "finite-difference derivative sup-norms of orders 1-4 stabilize under \
         refinement for indicator data, including the supercritical index",
    );
    let u0 = InitialData::indicator_box(vec![-1.0], vec![1.0])?;
    let orders = [1u32, 2, 3, 4];
    let mut worst = 0.0f64;
    // The window is tight (the contracted box edges sit at e^{-1/2} and the
    // high-order structure lives there); a wide window would leave the
    // supercritical smoothness scale unresolved at these lattice sizes.
    for &alpha in &[0.6, 2.0] {
        let law = StableLaw::new(alpha, 1)?;
        let rep = smoothness_probe(law, &u0, 0.5, &orders, 1.25, cfg.n_out, 1e-5)?;
        for (m, r) in rep.orders.iter().zip(&rep.ratios) {
            let dev = (r - 1.0).abs();
            worst = worst.max(dev);
            rec.measure(&format!("ratio_dev_alpha={alpha}_m={m}"), dev);
        }
    }
    rec.params = json!({"alphas": [0.6, 2.0], "t": 0.5, "half_width": 1.25, "n": [cfg.n_out, 2 * cfg.n_out]});
    rec.require_below("max_ratio_deviation", worst, 0.05);
    Ok(rec)
}

/// Window for residual evaluation. The spectral fractional Laplacian on a
/// periodic box sees the solution's images: an interior floor of about
/// `c L^{-(d+alpha)}` that no lattice refinement removes. The window grows
/// until that floor sits below 3e-7 (with c = 0.5, above the measured ratio
/// constants), so the probe-step order is observable down to dt = 0.01.
fn residual_window(law: StableLaw) -> (f64, usize) {
    let d = law.dim() as f64;
    let alpha = law.alpha();
    let l = if law.is_gaussian() {
        6.0
    } else {
        (0.5f64 / 3e-7).powf(1.0 / (d + alpha)).clamp(6.0, 2000.0)
    };
    let n = ((2.0 * l / 0.06).ceil() as usize)
        .next_power_of_two()
        .clamp(256, 1 << 16);
    (l, n)
}

fn residual_suite() -> Result<Vec<CheckRecord>> {
    let mut records = Vec::new();
    let u0 = InitialData::gaussian_mixture(vec![crate::initial::MixtureComponent {
        weight: 1.0,
        mean: vec![0.2],
        sigma: 1.0,
    }])?;

    // Convergence order in the probe step.
    let mut rec = CheckRecord::new(
        "residual/probe-order",
        "the equation residual vanishes at second order in the probe step",
    );
    let dts = [0.04, 0.02, 0.01];
    let t = 0.6;
    for &alpha in &[1.0, 1.5, 2.0] {
        let law = StableLaw::new(alpha, 1)?;
        let (l_out, n_out) = residual_window(law);
        let out = Grid::new(1, n_out, l_out)?;
        let plan = SolvePlan::with_refinement(law, out, t + 0.05, 1e-6, 4)?;
        let field0 = plan.discretize(&u0)?;
        let r: Vec<f64> = dts
            .iter()
            .map(|&dt| Ok(pde_residual(law, &field0, t, dt, &out)?.max_norm))
            .collect::<Result<_>>()?;
        let order = (r[1] / r[2]).log2().min((r[0] / r[1]).log2());
        rec.measure(&format!("order_alpha={alpha}"), order);
        rec.require(order >= 1.8, &format!("order {order:.2} < 1.8 at alpha={alpha}"));
        rec.require(r[2] < r[0], "residual must decrease with the probe step");
    }
    rec.params = json!({"dt": dts, "t": t});
    records.push(rec);

    // Grid refinement at a small probe step.
    let mut rec = CheckRecord::new(
        "residual/grid-refinement",
        "at a small probe step the residual decreases under grid refinement",
    );
    for &alpha in &[1.0, 1.5, 2.0] {
        let law = StableLaw::new(alpha, 1)?;
        let (l_out, n_out) = residual_window(law);
        let mut r_by_n = Vec::new();
        for n in [n_out / 2, n_out] {
            let out = Grid::new(1, n, l_out)?;
            // refinement 1: the measured error is the lattice ripple, which
            // must shrink when the lattice does (the image floor is far
            // below it at this window size)
            let plan = SolvePlan::new(law, out, t + 0.05, 1e-6)?;
            let field0 = plan.discretize(&u0)?;
            r_by_n.push(pde_residual(law, &field0, t, 1e-3, &out)?.max_norm);
        }
        rec.measure(&format!("coarse_alpha={alpha}"), r_by_n[0]);
        rec.measure(&format!("fine_alpha={alpha}"), r_by_n[1]);
        rec.require(
            r_by_n[1] < r_by_n[0],
            &format!("no refinement gain at alpha={alpha}"),
        );
    }
    records.push(rec);

    // Gaussian benchmark value, frozen after the first correct run.
    let mut rec = CheckRecord::new(
        "residual/gaussian-benchmark",
        "Gaussian data residual below 1e-4 at n=512, dt=1e-3",
    );
    let law = StableLaw::new(2.0, 1)?;
    let out = Grid::new(1, 512, 6.0)?;
    let plan = SolvePlan::with_refinement(law, out, t + 0.05, 1e-9, 4)?;
    let field0 = plan.discretize(&u0)?;
    let r = pde_residual(law, &field0, t, 1e-3, &out)?;
    rec.require_below("max_norm", r.max_norm, 1e-4);
    records.push(rec);

    // Stationary data: both sides of the equation vanish separately.
    let mut rec = CheckRecord::new(
        "residual/stationary-data",
        "for the invariant density the time term and the spatial operator \
         vanish independently",
    );
    for &alpha in &[1.0, 1.5] {
        let law = StableLaw::new(alpha, 1)?;
        let (l_out, n_out) = residual_window(law);
        let out = Grid::new(1, n_out, l_out)?;
        let plan = SolvePlan::with_refinement(law, out, 1.1, 3e-6, 4)?;
        let u0s = stationary_field(law, &plan.input)?;
        let r = pde_residual(law, &u0s, 1.0, 1e-3, &out)?;
        rec.require_below(&format!("time_term_alpha={alpha}"), r.time_max, 1e-4);
        rec.require_below(&format!("spatial_term_alpha={alpha}"), r.spatial_max, 1e-4);
    }
    records.push(rec);

    Ok(records)
}

/// A configuration that violates the headroom rule must fail loudly, which
/// demonstrates the guard has teeth.
fn negative_control() -> Result<CheckRecord> {
    let mut rec = CheckRecord::new(
        "solution/negative-control",
        "an input window too small for the horizon is rejected, not silently \
         accepted",
    );
    let law = StableLaw::new(1.0, 1)?;
    let grid = Grid::new(1, 64, 4.0)?;
    let u0 = InitialData::indicator_box(vec![-1.0], vec![1.0])?;
    let field0 = u0.discretize(grid)?;
    let outcome = crate::solver::ou_solve(law, &field0, 1.0, &grid);
    rec.require(
        matches!(outcome, Err(Error::GridHeadroom { .. })),
        "expected a headroom failure",
    );
    Ok(rec)
}

// ---------------------------------------------------------------------------
// Route equivalence of the drift kernel (the transformation identity).
// ---------------------------------------------------------------------------

/// The dilated and effective-time routes must agree at random queries,
/// including horizons far beyond the overflow switch (where only the safe
/// route runs inside `ou_kernel`, but the dilated route is still computable
/// here because alpha * t stays below the hard overflow).
pub fn check_route_equivalence(
    law: StableLaw,
    queries: usize,
    t_max: f64,
    seed: u64,
) -> Result<CheckRecord> {
    let mut rec = CheckRecord::new(
        format!("transformation/alpha={}", law.alpha()),
        "dilated-time evaluation equals effective-time evaluation",
    );
    let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0x726f7574);
    let tol = 1e-10;
    let mut worst = 0.0f64;
    let mut beyond_switch = 0usize;
    for _ in 0..queries {
        let t = (t_max * rng.random::<f64>()).max(1e-3);
        let x = 3.0 * (2.0 * rng.random::<f64>() - 1.0);
        let y = 3.0 * (2.0 * rng.random::<f64>() - 1.0);
        if t > crate::ou::overflow_switch(law.alpha()) {
            beyond_switch += 1;
        }
        let a = ou_kernel_via_dilation(law, t, &[x], &[y], tol)?;
        let b = ou_kernel_via_effective_time(law, t, &[x], &[y], tol)?;
        worst = worst.max((a - b).abs());
        // the production entry point must also succeed and stay consistent
        let v = ou_kernel(law, t, &[x], &[y], tol)?;
        worst = worst.max((v - a).abs().min((v - b).abs()));
    }
    rec.params = json!({"queries": queries, "t_max": t_max, "seed": seed});
    rec.measure("queries_beyond_switch", beyond_switch as f64);
    rec.require_below("max_abs_deviation", worst, 2.0 * tol);
    Ok(rec)
}

// ---------------------------------------------------------------------------
// Monte Carlo agreement.
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct McAgreementConfig {
    pub alphas: Vec<f64>,
    pub n_samples: usize,
    pub seed: u64,
}

/// Ensemble histograms against the solver: no bin may deviate by more than
/// five binomial standard errors, and the off-grid mass must match the
/// tail budget (scaled by the measured ratio constant) within a factor of 3.
pub fn check_mc_agreement(cfg: &McAgreementConfig) -> Result<Vec<CheckRecord>> {
    let mut records = Vec::new();
    let u0 = InitialData::indicator_box(vec![-1.0], vec![1.0])?;
    let t = 1.0;
    for &alpha in &cfg.alphas {
        let law = StableLaw::new(alpha, 1)?;
        let mut rec = CheckRecord::new(
            format!("mc-agreement/alpha={alpha}"),
            "the particle law equals the solved density",
        );
        let out = Grid::new(1, 128, 8.0)?;
        let plan = SolvePlan::new(law, out, t, 1e-6)?;
        let solved = plan.solve(&plan.discretize(&u0)?, t)?;

        let ensemble = simulate_ensemble(law, &u0, t, cfg.n_samples, cfg.seed)?;
        let hist = empirical_density(&ensemble, out)?;
        let cmp = compare_densities(&hist.field, &solved, &hist.std_err, 5.0)?;
        rec.params = json!({"t": t, "n_samples": cfg.n_samples, "bins": out.n(),
                             "half_width": out.half_width(), "seed": cfg.seed});
        rec.measure("sup_distance", cmp.sup_distance);
        rec.measure("l1_distance", cmp.l1_distance);
        rec.require_below("bins_beyond_5se", cmp.bins_exceeding as f64, 0.0);

        // Off-grid mass against the tail budget. The budget uses the
        // envelope with unit constant, scaled by the measured upper ratio
        // from the two-sided check; agreement within a factor of 3.
        let c2 = check_two_sided_estimate(law)?.measured["c2"];
        let s = effective_time(alpha, t);
        let budget = c2 * crate::kernel::tail_mass_bound(law, s, out.half_width());
        let measured = hist.outside_fraction;
        let ratio = if measured > 0.0 { budget / measured } else { f64::INFINITY };
        rec.measure("outside_fraction", measured);
        rec.measure("tail_budget", budget);
        rec.require(
            (1.0 / 3.0..=3.0).contains(&ratio),
            &format!("tail budget ratio {ratio:.2} outside [1/3, 3]"),
        );
        records.push(rec);
    }
    Ok(records)
}
