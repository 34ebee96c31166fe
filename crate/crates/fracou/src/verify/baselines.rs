//! Frozen first-run constants.
//!
//! The two-sided and derivative estimates assert only that certain ratios
//! are bounded; the constants themselves are implementation measurements,
//! not ground truth from theory. The values below were recorded from the
//! first correct run and act as regression anchors: later runs must
//! reproduce them within one percent or fail loudly.

pub struct Baseline {
    pub key: &'static str,
    pub value: f64,
}

/// Relative drift allowed against a frozen value.
pub const BASELINE_REL_TOL: f64 = 0.01;

pub static FROZEN: &[Baseline] = &[
    Baseline { key: "two-sided/alpha=0.6/c1", value: 0.10176169566270946 },
    Baseline { key: "two-sided/alpha=0.6/c2", value: 0.4789212524202268 },
    Baseline { key: "two-sided/alpha=1/c1", value: 0.15915494309189532 },
    Baseline { key: "two-sided/alpha=1/c2", value: 0.31830988618379075 },
    Baseline { key: "two-sided/alpha=1.5/c1", value: 0.2020381596059218 },
    Baseline { key: "two-sided/alpha=1.5/c2", value: 0.5046235356456821 },
    Baseline { key: "derivative/alpha=0.6/m=1/c_max", value: 12.645282262611785 },
    Baseline { key: "derivative/alpha=0.6/m=2/c_max", value: 12.471343965380349 },
    Baseline { key: "derivative/alpha=1/m=1/c_max", value: 0.6364924675081032 },
    Baseline { key: "derivative/alpha=1/m=2/c_max", value: 0.9546114131593784 },
    Baseline { key: "derivative/alpha=1.5/m=1/c_max", value: 1.3754186306465193 },
    Baseline { key: "derivative/alpha=1.5/m=2/c_max", value: 2.572870260915113 },
];

pub fn lookup(key: &str) -> Option<f64> {
    FROZEN.iter().find(|b| b.key == key).map(|b| b.value)
}
