//! Property tests for the structural invariants.

use proptest::prelude::*;

use fracou::*;

proptest! {
    // Quadrature-backed cases are expensive; a couple dozen random draws
    // already sweep the parameter space well.
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// p(t, x) = t^{-d/alpha} p(1, x t^{-1/alpha}) for random laws and points.
    #[test]
    fn self_similarity_holds(
        alpha in 0.35f64..1.95,
        t in 0.05f64..20.0,
        x in -30.0f64..30.0,
    ) {
        let law = StableLaw::new(alpha, 1).unwrap();
        let tol = 1e-9;
        let direct = heat_kernel_quadrature(law, t, &[x], tol).unwrap();
        let (rx, factor) = self_similar_reduce(law, t, &[x]).unwrap();
        let reduced = factor * heat_kernel_quadrature(law, 1.0, &rx, tol / factor).unwrap();
        prop_assert!((direct - reduced).abs() < 2.0 * tol,
            "direct {direct}, reduced {reduced}");
    }

    /// The kernel is even and nonnegative wherever we sample it.
    #[test]
    fn kernel_symmetry_and_positivity(
        alpha in 0.35f64..2.0,
        t in 0.05f64..20.0,
        x in -20.0f64..20.0,
    ) {
        let law = StableLaw::new(alpha, 1).unwrap();
        let a = heat_kernel(law, t, &[x], 1e-10).unwrap();
        let b = heat_kernel(law, t, &[-x], 1e-10).unwrap();
        prop_assert!(a >= 0.0);
        prop_assert!((a - b).abs() < 2e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// The two time reparameterizations satisfy s = e^{-alpha t} * dilated.
    #[test]
    fn time_change_identity(alpha in 0.3f64..2.0, t in 1e-6f64..60.0) {
        let tc = TimeChange::new(alpha, t).unwrap();
        if tc.dilated.is_finite() {
            let rhs = (-alpha * t).exp() * tc.dilated;
            prop_assert!((tc.effective - rhs).abs() <= 1e-12 * tc.effective.max(1e-12));
        }
        // reaches 1/alpha exactly once e^{-alpha t} underflows
        prop_assert!(tc.effective <= 1.0 / alpha);
    }

    /// The envelope really is the minimum of its two branches, with the
    /// branch tag agreeing with the crossover radius t^{1/alpha}.
    #[test]
    fn sharp_bound_branches(alpha in 0.3f64..2.0, t in 1e-3f64..1e3, r in 0.0f64..100.0) {
        let law = StableLaw::new(alpha, 1).unwrap();
        let b = sharp_bound(law, t, r).unwrap();
        let bulk = t.powf(-1.0 / alpha);
        prop_assert!(b.value <= bulk * (1.0 + 1e-12));
        if r > 0.0 {
            let tail = t / r.powf(1.0 + alpha);
            prop_assert!(b.value <= tail * (1.0 + 1e-12));
            match b.branch {
                BoundBranch::Tail => prop_assert!(r >= t.powf(1.0 / alpha) * (1.0 - 1e-9)),
                BoundBranch::Bulk => prop_assert!(r <= t.powf(1.0 / alpha) * (1.0 + 1e-9)),
                BoundBranch::Crossover => {}
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Field CSV serialization round-trips bit-exactly.
    #[test]
    fn field_roundtrip_is_bit_exact(seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
        let grid = Grid::new(1, 32, 4.0).unwrap();
        let values: Vec<f64> = (0..grid.len())
            .map(|_| {
                // exercise subnormals, exact zeros and wide magnitudes
                let mag: f64 = rng.random_range(-320.0..300.0);
                let v = rng.random::<f64>() * 10f64.powf(mag);
                if rng.random::<f64>() < 0.05 { 0.0 } else { v }
            })
            .collect();
        let field = Field::new(grid, values, 0.25).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let csv = dir.path().join("f.csv");
        let meta = dir.path().join("f.json");
        field.write_files(&csv, &meta).unwrap();
        let back = Field::read_files(&csv, &meta).unwrap();
        prop_assert_eq!(back.values(), field.values());
        prop_assert_eq!(back.time(), field.time());
    }
}
