//! Wynn's epsilon algorithm for accelerating slowly convergent
//! (alternating) sequences of partial sums.

/// Accelerate a sequence of partial sums. Returns the extrapolated limit and
/// a heuristic error estimate (difference between the two best successive
/// even-column values).
///
/// The estimate is what the caller budgets against, so a safety factor is
/// applied on top by the quadrature driver.
pub fn wynn_epsilon(sums: &[f64]) -> (f64, f64) {
    let n = sums.len();
    if n == 0 {
        return (0.0, f64::INFINITY);
    }
    if n == 1 {
        return (sums[0], f64::INFINITY);
    }
    let scale = sums.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let floor = 4.0 * f64::EPSILON * scale.max(f64::MIN_POSITIVE);

    let mut prev: Vec<f64> = vec![0.0; n + 1]; // epsilon_{-1}
    let mut curr: Vec<f64> = sums.to_vec(); // epsilon_0
    let mut best = *sums.last().unwrap();
    let mut best_err = f64::INFINITY;
    let mut last_even: Option<f64> = None;
    let mut col = 0usize;

    while curr.len() >= 2 {
        let mut next = Vec::with_capacity(curr.len() - 1);
        for i in 0..curr.len() - 1 {
            let delta = curr[i + 1] - curr[i];
            if delta == 0.0 {
                // The tail has converged exactly; nothing left to accelerate.
                return (curr[i + 1], floor);
            }
            next.push(prev[i + 1] + 1.0 / delta);
        }
        prev = std::mem::replace(&mut curr, next);
        col += 1;
        if col % 2 == 0 {
            let cand = *curr.last().unwrap();
            if let Some(last) = last_even {
                let err = (cand - last).abs();
                if err <= best_err {
                    best = cand;
                    best_err = err;
                }
            }
            last_even = Some(cand);
        }
    }
    (best, best_err.max(floor))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn partial_sums(terms: impl Iterator<Item = f64>) -> Vec<f64> {
        let mut acc = 0.0;
        terms
            .map(|t| {
                acc += t;
                acc
            })
            .collect()
    }

    #[test]
    fn accelerates_alternating_harmonic_series() {
        // sum (-1)^(k+1)/k = ln 2; 20 raw terms are good to ~2e-2, the
        // accelerated value should be good to ~1e-12.
        let sums = partial_sums((1..=20).map(|k| {
            let k = k as f64;
            if (k as i64) % 2 == 1 { 1.0 / k } else { -1.0 / k }
        }));
        let (value, err) = wynn_epsilon(&sums);
        let exact = std::f64::consts::LN_2;
        assert!((value - exact).abs() < 1e-11, "value {value}, err {err}");
        assert!((value - exact).abs() <= 10.0 * err.max(1e-15));
    }

    #[test]
    fn accelerates_leibniz_series() {
        let sums = partial_sums((0..24).map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign / (2.0 * k as f64 + 1.0)
        }));
        let (value, _) = wynn_epsilon(&sums);
        assert!((value - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
    }

    #[test]
    fn exact_convergence_short_circuits() {
        let sums = vec![1.0, 1.5, 1.5, 1.5, 1.5];
        let (value, err) = wynn_epsilon(&sums);
        assert_eq!(value, 1.5);
        assert!(err < 1e-14);
    }
}
