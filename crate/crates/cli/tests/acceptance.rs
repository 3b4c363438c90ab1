// Copyright 2026 The nwqed Authors
// SPDX-License-Identifier: Apache-2.0

//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nwqed::storage::{gaussian_photon, matched_storage_control};
use nwqed::{
    antibunching_time, control_for_target_pulse, convergence_report, field_observables,
    fixed_spacing_grids, g2, g2_weakfield_analytic, generate_photon, jump_state,
    params_from_purcell, saturation_closed_form, scatter_point, steady_state, store_photon,
    transistor_gain, Branch, EmitterParams, GainEstimate, InputPulse, PulseShape, ThreeLevelParams,
    TimeGrid,
};

type Outcome = Result<(bool, Vec<String>), nwqed::Error>;
type Criterion = (&'static str, fn() -> Outcome);

fn params(p: f64, omega: f64, delta: f64) -> Result<EmitterParams<f64>, nwqed::Error> {
    params_from_purcell(p, 1.0, omega, delta)
}

fn lossless_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let p = 10f64.powf(rng.gen_range(-2.0..3.0));
        let delta = rng.gen_range(-20.0..20.0);
        let s = scatter_point(&params(p, 0.0, delta)?);
        worst = worst.max((1.0 - s.reflectance - s.transmittance - 2.0 * s.reflectance / p).abs());
    }
    Ok((
        worst <= 1e-12,
        vec![format!("max |1−R−T−2R/P| = {worst:.3e} over 1000 pairs")],
    ))
}

fn resonant_mirror() -> Outcome {
    let s = scatter_point(&params(20.0, 0.0, 0.0)?);
    let expected = (0.907029, 0.0022676, 0.0907029);
    let dev = (s.reflectance - expected.0)
        .abs()
        .max((s.transmittance - expected.1).abs())
        .max((s.loss - expected.2).abs());
    let half = s.reflectance / 2.0;
    let (mut lo, mut hi) = (0.0, 10.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if scatter_point(&params(20.0, 0.0, mid)?).reflectance > half {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let width = 0.5 * (lo + hi);
    let pass = dev <= 1e-6 && (width - 0.5).abs() <= 1e-3;
    Ok((
        pass,
        vec![
            format!(
                "(R, T, κ) = ({:.7}, {:.7}, {:.7}), max deviation {dev:.2e}",
                s.reflectance, s.transmittance, s.loss
            ),
            format!("R half-width at half maximum = {width:.6} Γ"),
        ],
    ))
}

fn saturation() -> Outcome {
    let mut worst: f64 = 0.0;
    for p in [0.5, 1.0, 2.0, 5.0, 20.0, 100.0] {
        for omega in [1e-3, 1e-1, 1.0, 10.0] {
            let e = params(p, omega, 0.0)?;
            let obs = field_observables(&e, &steady_state(&e)?)?;
            let (t, r) = saturation_closed_form(p, omega);
            worst = worst
                .max((obs.transmittance - t).abs())
                .max((obs.reflectance - r).abs());
        }
    }
    let mut weak: f64 = 0.0;
    for p in [0.5, 1.0, 2.0, 5.0, 20.0, 100.0] {
        let e = params(p, 1e-4, 0.0)?;
        let obs = field_observables(&e, &steady_state(&e)?)?;
        let single = scatter_point(&params(p, 0.0, 0.0)?);
        weak = weak
            .max((obs.transmittance - single.transmittance).abs())
            .max((obs.reflectance - single.reflectance).abs());
    }
    Ok((
        worst <= 1e-8 && weak <= 1e-4,
        vec![
            format!("max |numeric − closed form| = {worst:.2e} on the 6×4 grid"),
            format!("max |weak drive (Ω = 1e-4) − single photon| = {weak:.2e}"),
        ],
    ))
}

fn weak_field_deviation(p: f64, omega: f64) -> Result<f64, nwqed::Error> {
    let curve = g2(
        &params(p, omega, 0.0)?,
        Branch::Transmitted,
        TimeGrid::spanning(0.0, 10.0, 0.01)?,
    )?;
    Ok(curve
        .times()
        .iter()
        .zip(&curve.values.values)
        .map(|(&t, &g)| {
            let weak = g2_weakfield_analytic(p, t);
            (g - weak).abs() / (1.0 + weak)
        })
        .fold(0.0, f64::max))
}

fn photon_statistics() -> Outcome {
    let omega = 0.01;
    let mut info = Vec::new();
    let mut pass = true;
    for p in [0.6, 1.0, 1.5, 2.0] {
        let dev = weak_field_deviation(p, omega)?;
        pass &= dev <= 1e-2;
        let at_half = weak_field_deviation(p, omega / 2.0)?;
        info.push(format!(
            "P = {p}: sup |g² − weak-field|/(1 + weak-field) = {dev:.4} (at Ω = {}: {at_half:.4})",
            omega / 2.0
        ));
    }
    for p in [1.5, 2.0] {
        let curve = g2(
            &params(p, omega, 0.0)?,
            Branch::Transmitted,
            TimeGrid::spanning(0.0, 10.0, 0.001)?,
        )?;
        let (i_min, _) =
            curve
                .values
                .values
                .iter()
                .enumerate()
                .fold(
                    (0, f64::INFINITY),
                    |acc, (i, &g)| if g < acc.1 { (i, g) } else { acc },
                );
        let t_min = curve.values.time(i_min);
        let t0 = antibunching_time(p).unwrap_or(f64::NAN);
        pass &= (t_min - t0).abs() <= 0.02;
        info.push(format!(
            "P = {p}: dip at {t_min:.3}, expected 4 ln P = {t0:.3}"
        ));
    }
    let g0 = g2(
        &params(2.0, omega, 0.0)?,
        Branch::Transmitted,
        TimeGrid::spanning(0.0, 0.01, 0.01)?,
    )?
    .values
    .values[0];
    pass &= (g0 - 9.0).abs() <= 0.09;
    info.push(format!("P = 2: g²(0) = {g0:.4}"));
    Ok((pass, info))
}

fn jump_identities() -> Outcome {
    let p = 20.0;
    let mut info = Vec::new();
    let mut pass = true;
    for omega in [1e-3, 1e-4] {
        let j = jump_state(&params(p, omega, 0.0)?, Branch::Transmitted)?;
        let c = (j.coherence_ratio - (1.0 + p)).norm() / (1.0 + p);
        let a = (j.amplitude_ratio - (1.0 - p * p)).norm() / (p * p - 1.0);
        if omega == 1e-3 {
            pass = c <= 1e-3 && a <= 1e-3;
        }
        info.push(format!(
            "Ω = {omega:e}: coherence ratio {:.4} (rel. error {c:.2e}), amplitude ratio {:.3} (rel. error {a:.2e})",
            j.coherence_ratio.re, j.amplitude_ratio.re
        ));
    }
    Ok((pass, info))
}

fn oracle() -> Outcome {
    let e = params(20.0, 0.0, 0.0)?;
    let grids = fixed_spacing_grids(&e, &[250, 500, 1000, 2000], 0.096)?;
    let pulse = InputPulse::Gaussian {
        center: 0.0,
        rms_bandwidth: 0.1,
    };
    let report = convergence_report(&grids, &pulse)?;
    let last = report.rows.last().expect("four rows");
    let dev = (last.reflectance - last.reference_reflectance)
        .abs()
        .max((last.transmittance - last.reference_transmittance).abs())
        .max((last.loss - last.reference_loss).abs());
    let monotone = report.check_monotone().is_ok();
    let errors: Vec<String> = report
        .rows
        .iter()
        .map(|r| format!("{:.2e}", r.abs_error))
        .collect();
    Ok((
        dev <= 1e-2 && monotone,
        vec![
            format!("n = 2000: max |Δ| over R, T, κ = {dev:.2e}"),
            format!(
                "|ΔR| for n = 250, 500, 1000, 2000: {}; monotone: {monotone}",
                errors.join(", ")
            ),
        ],
    ))
}

fn storage() -> Outcome {
    let input = gaussian_photon(50.0_f64, 0.02)?;
    let params = ThreeLevelParams::new(
        20.0 / 21.0,
        1.0 / 21.0,
        0.0,
        0.0,
        PulseShape::zeros(input.grid()),
    )?;
    let control = matched_storage_control(&params, &input)?;
    let stored = store_photon(&params, &input, &control)?;
    let ideal = 20.0 / 21.0;

    let target = input
        .time_reversed_conj()
        .scaled(params.max_efficiency().sqrt());
    let generated = generate_photon(
        &params
            .clone()
            .with_control(control_for_target_pulse(&params, &target)?),
    )?;
    let round_trip = generated.output.l2_distance(&target)?;
    let reversed = generated.output.time_reversed_conj().into_unit_norm()?;
    let restored = store_photon(
        &params,
        &reversed,
        &matched_storage_control(&params, &reversed)?,
    )?;

    Ok((
        (stored.efficiency - ideal).abs() <= 0.02 * ideal && round_trip < 1e-3,
        vec![
            format!("efficiency {:.5} (ideal {ideal:.5})", stored.efficiency),
            format!(
                "generated-pulse L2 error {round_trip:.2e}, re-stored efficiency {:.5}",
                restored.efficiency
            ),
        ],
    ))
}

fn transistor() -> Outcome {
    let grid = gaussian_photon(1.0_f64, 0.5)?.grid();
    let params = ThreeLevelParams::new(20.0, 0.0, 1.0, 0.0, PulseShape::zeros(grid))?;
    match transistor_gain(&params, 10_000, 2026)? {
        GainEstimate::Finite { mean, ci95, .. } => Ok((
            (mean - 20.0).abs() <= 1.0,
            vec![format!(
                "mean {mean:.3}, 95% interval [{:.3}, {:.3}]",
                ci95.0, ci95.1
            )],
        )),
        GainEstimate::Infinite => Ok((false, vec!["gain reported infinite".into()])),
    }
}

const DETERMINISM_RUNS: &[(&str, &[&str])] = &[
    ("scatter", &["delta_points=41"]),
    ("saturation", &[]),
    ("g2", &["t_max=3", "dt=0.05"]),
    ("jump", &["purcell=0.6, 2, 20"]),
    ("oracle", &["n_modes=250, 500"]),
    ("storage", &["duration=10", "dt=0.05"]),
    ("transistor", &["duration=10", "dt=0.05", "trials=500"]),
];

fn determinism() -> Outcome {
    let mut info = Vec::new();
    let mut pass = true;
    for (command, sets) in DETERMINISM_RUNS {
        let run = |workers: &str| {
            let mut cmd = Command::new(env!("CARGO_BIN_EXE_nwqed"));
            cmd.args([command, "--seed", "7", "--workers", workers]);
            for s in *sets {
                cmd.args(["--set", s]);
            }
            cmd.output().expect("binary runs")
        };
        let (a, b) = (run("1"), run("4"));
        let same = a.status.success()
            && b.status.success()
            && a.stdout == b.stdout
            && !a.stdout.is_empty();
        pass &= same;
        info.push(format!(
            "{command}: {} bytes, identical = {same}",
            a.stdout.len()
        ));
    }
    Ok((pass, info))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 lossless identity", lossless_identity),
        ("2 resonant mirror and linewidth", resonant_mirror),
        ("3 saturation curves", saturation),
        ("4 transmitted photon statistics", photon_statistics),
        ("5 jump identities", jump_identities),
        ("6 wavepacket oracle", oracle),
        ("7 storage efficiency", storage),
        ("8 transistor gain", transistor),
        ("9 determinism", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let (pass, info) = check().unwrap_or_else(|e| (false, vec![format!("error: {e}")]));
        let secs = start.elapsed().as_secs_f64();
        println!(
            "{} criterion {name} ({secs:.2} s)",
            if pass { "PASS" } else { "FAIL" }
        );
        for line in info {
            println!("    {line}");
        }
        failed += usize::from(!pass);
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
