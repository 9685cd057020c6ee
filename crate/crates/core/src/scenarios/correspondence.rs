// Copyright 2026 The qpt Contributors
// SPDX-License-Identifier: Apache-2.0

//! Bohr-model transition frequencies against harmonics of the orbital
//! frequency, in Rydberg units: `E_n = −1/n²`, `ν_orb(n) = 2/n³`.

use super::ScenarioReport;
use crate::{Error, Result};

const MAX_HARMONIC: usize = 3;
const RANGE_START: usize = 10;
const TABLE_NS: [usize; 6] = [2, 3, 5, 10, 100, 500];

fn energy(n: usize) -> f64 {
    -1.0 / (n * n) as f64
}

/// `ν(n → n−m) / (m·ν_orb(n))`.
pub fn frequency_ratio(n: usize, m: usize) -> f64 {
    assert!(m >= 1 && m < n, "need 1 <= m < n");
    let nu = energy(n) - energy(n - m);
    let nu_orb = 2.0 / (n as f64).powi(3);
    nu / (m as f64 * nu_orb)
}

/// Closed form of `ratio − 1 = (3mn − 2m²) / (2(n − m)²)`.
fn excess(n: usize, m: usize) -> f64 {
    let (n, m) = (n as f64, m as f64);
    (3.0 * m * n - 2.0 * m * m) / (2.0 * (n - m).powi(2))
}

pub fn correspondence_scenario(n_max: usize) -> Result<ScenarioReport> {
    if n_max < 3 {
        return Err(Error::InvalidParameter(format!("n_max must be at least 3, got {n_max}")));
    }
    let mut rep = ScenarioReport::new("correspond");
    rep.input("n_max", n_max);
    rep.input("units", "Rydberg: E_n = -1/n^2, nu_orb = 2/n^3");

    for &n in TABLE_NS.iter().filter(|&&n| n <= n_max.max(2)) {
        let ratios: Vec<f64> = (1..=MAX_HARMONIC).filter(|&m| m < n).map(|m| frequency_ratio(n, m)).collect();
        rep.derive(&format!("ratio n={n}, m=1..{}", ratios.len()), ratios, 1e-15);
    }

    rep.check_eq("ratio at n=2, m=1", 3.0, frequency_ratio(2, 1), "(1 - 1/4) / (2/8)");
    if n_max >= 100 {
        rep.check_close("ratio at n=100, m=1", 1.0 + excess(100, 1), frequency_ratio(100, 1), 1e-12, "closed form");
    }

    let range: Vec<(usize, usize)> =
        (RANGE_START..=n_max).flat_map(|n| (1..=MAX_HARMONIC).map(move |m| (n, m))).collect();
    let stated = |&(n, m): &(usize, usize)| (frequency_ratio(n, m) - 1.0).abs() <= 2.0 / (n as f64 - 3.0);
    let harmonic = |&(n, m): &(usize, usize)| (frequency_ratio(n, m) - 1.0).abs() <= 2.0 * m as f64 / (n as f64 - 3.0);
    if !range.is_empty() {
        let violations = range.iter().filter(|p| !stated(p)).count();
        let m1_violations = range.iter().filter(|p| p.1 == 1 && !stated(p)).count();
        rep.derive("pairs in range", range.len(), 0.0);
        rep.check_eq(
            &format!("|ratio-1| <= 2/(n-3), {RANGE_START}<=n<={n_max}, m<=3 (violations)"),
            0usize,
            violations,
            "series bound",
        );
        rep.check_eq("|ratio-1| <= 2/(n-3) for m=1 (violations)", 0usize, m1_violations, "series bound");
        rep.check_eq(
            "|ratio-1| <= 2m/(n-3) (violations)",
            0usize,
            range.iter().filter(|p| !harmonic(p)).count(),
            "(3mn - 2m^2)/(2(n-m)^2) <= 2m/(n-3) for n >= 6",
        );
        let worst = range
            .iter()
            .map(|&(n, m)| (frequency_ratio(n, m) - 1.0).abs() - 2.0 / (n as f64 - 3.0))
            .fold(f64::NEG_INFINITY, f64::max);
        rep.derive("max of |ratio-1| - 2/(n-3)", worst, 1e-15);
    }

    let monotone = (1..=MAX_HARMONIC).all(|m| {
        (m + 1..n_max).all(|n| (frequency_ratio(n + 1, m) - 1.0).abs() < (frequency_ratio(n, m) - 1.0).abs())
    });
    rep.check_eq("|ratio-1| decreases with n", true, monotone, "approach to the classical limit");
    Ok(rep)
}
