// Copyright 2026 The qpt Contributors
// SPDX-License-Identifier: Apache-2.0

use qpt_core::exec::Exec;
use qpt_core::scenarios::{
    correspondence_scenario, decoherence_scenario, epr_scenario, frequency_ratio, teleport_histogram,
    teleportation_scenario, DecoherenceParams, TeleportSetup,
};
use qpt_core::{Tolerance, C64};

fn tol() -> Tolerance {
    Tolerance::default()
}

#[test]
fn epr_report_passes() {
    let rep = epr_scenario(tol()).unwrap();
    assert!(rep.passed(), "{}", rep.to_text());
}

#[test]
fn teleport_report_passes_for_complex_amplitudes() {
    let (cp, cm) = (C64::new(0.6, 0.0), C64::new(0.0, 0.8));
    let rep = teleportation_scenario(cp, cm, 7, 4000, Exec::default(), tol()).unwrap();
    assert!(rep.passed(), "{}", rep.to_text());
}

#[test]
fn teleport_histogram_is_mode_independent() {
    let setup = TeleportSetup::new(C64::new(0.6, 0.0), C64::new(0.8, 0.0), tol()).unwrap();
    let a = teleport_histogram(&setup, 2000, 11, Exec::Sequential).unwrap();
    let b = teleport_histogram(&setup, 2000, 11, Exec::default()).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.iter().sum::<u64>(), 2000);
}

#[test]
fn decoherence_report_passes() {
    for n in [0, 3, 10] {
        let rep = decoherence_scenario(&DecoherenceParams::new(n, 0.4), Exec::default(), tol()).unwrap();
        assert!(rep.passed(), "n = {n}\n{}", rep.to_text());
    }
}

#[test]
fn correspondence_small_range_passes() {
    // below n = 10 the stated bound is not exercised
    let rep = correspondence_scenario(9).unwrap();
    assert!(rep.passed(), "{}", rep.to_text());
}

#[test]
fn frequency_ratio_matches_closed_form() {
    for n in 4..60usize {
        for m in 1..=3usize.min(n - 1) {
            let (nf, mf) = (n as f64, m as f64);
            let closed = 1.0 + (3.0 * mf * nf - 2.0 * mf * mf) / (2.0 * (nf - mf).powi(2));
            assert!((frequency_ratio(n, m) - closed).abs() < 1e-12 * closed, "({n},{m})");
        }
    }
}
