//! Gauss-Legendre nodes and weights on [-1, 1].

use std::sync::OnceLock;

/// Order used for the half-oscillation panels. A 21-point rule integrates a
/// smooth half-wave essentially to machine precision.
pub const PANEL_ORDER: usize = 21;

static PANEL_RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();

pub fn panel_rule() -> &'static (Vec<f64>, Vec<f64>) {
    PANEL_RULE.get_or_init(|| gauss_legendre(PANEL_ORDER))
}

/// Nodes and weights by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 1..=m {
        let mut x =
            (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..64 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i - 1] = x;
        nodes[n - i] = -x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i - 1] = w;
        weights[n - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Integrate `f` over [a, b] with the cached panel rule.
pub fn panel_integral<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64) -> f64 {
    let (nodes, weights) = panel_rule();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in nodes.iter().zip(weights) {
        acc += w * f(mid + half * x);
    }
    acc * half
}
