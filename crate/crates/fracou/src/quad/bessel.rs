//! Positive zeros of J0 and J1, used as panel breakpoints for the
//! two- and three-dimensional radial inversions.

use std::f64::consts::PI;

use libm::{j0, j1};

const J0_ZEROS: [f64; 8] = [
    2.404825557695773,
    5.520078110286311,
    8.653727912911013,
    11.791534439014281,
    14.930917708487786,
    18.071063967910923,
    21.21163662987926,
    24.352471530749302,
];

const J1_ZEROS: [f64; 8] = [
    3.8317059702075123,
    7.015586669815613,
    10.173468135062722,
    13.323691936314223,
    16.470630050877634,
    19.615858510468243,
    22.760084380592772,
    25.903672087618382,
];

/// k-th positive zero of J_nu for nu in {0, 1}, k >= 1.
/// Tabulated for small k, then McMahon's expansion refined by Newton steps.
pub fn bessel_zero(nu: u8, k: usize) -> f64 {
    debug_assert!(nu <= 1 && k >= 1);
    let table: &[f64] = if nu == 0 { &J0_ZEROS } else { &J1_ZEROS };
    if k <= table.len() {
        return table[k - 1];
    }
    let mu = 4.0 * f64::from(nu) * f64::from(nu);
    let beta = (k as f64 + 0.5 * f64::from(nu) - 0.25) * PI;
    let b8 = 8.0 * beta;
    let mut x = beta - (mu - 1.0) / b8 - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b8.powi(3));
    for _ in 0..2 {
        let (v, dv) = if nu == 0 {
            (j0(x), -j1(x))
        } else {
            (j1(x), j0(x) - j1(x) / x)
        };
        x -= v / dv;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeros_are_zeros() {
        for k in 1..200 {
            let z0 = bessel_zero(0, k);
            assert!(j0(z0).abs() < 1e-13, "j0 zero {k}: residual {}", j0(z0));
            let z1 = bessel_zero(1, k);
            assert!(j1(z1).abs() < 1e-13, "j1 zero {k}: residual {}", j1(z1));
        }
    }

    #[test]
    fn spacing_tends_to_pi() {
        let a = bessel_zero(0, 400);
        let b = bessel_zero(0, 401);
        assert!((b - a - PI).abs() < 1e-6);
    }
}
