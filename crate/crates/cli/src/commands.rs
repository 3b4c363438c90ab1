// Copyright 2026 The nwqed Authors
// SPDX-License-Identifier: Apache-2.0

//! One function per subcommand; each turns a validated config into a dataset.

use rayon::prelude::*;

use nwqed::bloch::{field_observables, saturation_closed_form, steady_state};
use nwqed::storage::{gaussian_photon, matched_storage_control};
use nwqed::{
    antibunching_time, control_for_target_pulse, convergence_report, fixed_spacing_grids, g2,
    g2_weakfield_analytic, generate_photon, jump_state, params_from_purcell, run_transistor,
    scatter_spectrum, store_photon, transistor_gain, Branch, GainEstimate, InputPulse, PulseShape,
    ThreeLevelParams, TimeGrid,
};

use crate::config::{Key, Kind, RunConfig};
use crate::dataset::Dataset;
use crate::error::CliError;

/// Largest allowed gap between closed-form and numeric saturation curves.
pub const SATURATION_TOL: f64 = 1e-8;
/// Largest allowed final oracle error.
pub const ORACLE_TOL: f64 = 1e-2;

const BRANCHES: &[&str] = &["transmitted", "reflected"];

pub const SCATTER_KEYS: &[Key] = &[
    Key {
        name: "purcell",
        kind: Kind::Float,
        default: "20",
        doc: "Purcell factor P = Γ_pl/Γ′",
    },
    Key {
        name: "delta_min",
        kind: Kind::Float,
        default: "-5",
        doc: "first detuning (units of Γ)",
    },
    Key {
        name: "delta_max",
        kind: Kind::Float,
        default: "5",
        doc: "last detuning (units of Γ)",
    },
    Key {
        name: "delta_points",
        kind: Kind::Count,
        default: "201",
        doc: "number of detunings",
    },
];

pub const SATURATION_KEYS: &[Key] = &[
    Key {
        name: "purcell",
        kind: Kind::Float,
        default: "20",
        doc: "Purcell factor",
    },
    Key {
        name: "omega",
        kind: Kind::FloatList,
        default: "0.0001, 0.001, 0.01, 0.1, 0.5, 1, 2, 5, 10",
        doc: "drive strengths Ω_c/Γ",
    },
];

pub const G2_KEYS: &[Key] = &[
    Key {
        name: "branch",
        kind: Kind::Choice(BRANCHES),
        default: "transmitted",
        doc: "monitored output",
    },
    Key {
        name: "purcell",
        kind: Kind::FloatList,
        default: "0.6, 1, 1.5, 2",
        doc: "Purcell factors, one column each",
    },
    Key {
        name: "omega",
        kind: Kind::Float,
        default: "0.01",
        doc: "drive Ω_c/Γ",
    },
    Key {
        name: "t_max",
        kind: Kind::Float,
        default: "10",
        doc: "largest delay (units of 1/Γ)",
    },
    Key {
        name: "dt",
        kind: Kind::Float,
        default: "0.01",
        doc: "delay step (units of 1/Γ)",
    },
];

pub const JUMP_KEYS: &[Key] = &[
    Key {
        name: "branch",
        kind: Kind::Choice(BRANCHES),
        default: "transmitted",
        doc: "detected output",
    },
    Key {
        name: "purcell",
        kind: Kind::FloatList,
        default: "20",
        doc: "Purcell factors, one row each",
    },
    Key {
        name: "omega",
        kind: Kind::Float,
        default: "0.001",
        doc: "drive Ω_c/Γ",
    },
];

pub const ORACLE_KEYS: &[Key] = &[
    Key {
        name: "purcell",
        kind: Kind::Float,
        default: "20",
        doc: "Purcell factor (0 decouples the guide)",
    },
    Key {
        name: "n_modes",
        kind: Kind::CountList,
        default: "250, 500, 1000, 2000",
        doc: "modes per branch, increasing",
    },
    Key {
        name: "spacing",
        kind: Kind::Float,
        default: "0.096",
        doc: "mode spacing when window = auto",
    },
    Key {
        name: "window",
        kind: Kind::FloatOr("auto"),
        default: "auto",
        doc: "fixed half-width of the detuning window, or auto",
    },
    Key {
        name: "pulse_center",
        kind: Kind::Float,
        default: "0",
        doc: "mean pulse detuning (units of Γ)",
    },
    Key {
        name: "pulse_rms",
        kind: Kind::Float,
        default: "0.1",
        doc: "rms spectral width (units of Γ)",
    },
];

pub const STORAGE_KEYS: &[Key] = &[
    Key {
        name: "purcell",
        kind: Kind::Float,
        default: "20",
        doc: "P = Γ_pl/(Γ′_g + Γ_es)",
    },
    Key {
        name: "es_fraction",
        kind: Kind::Float,
        default: "0",
        doc: "share of non-guided decay going e → s",
    },
    Key {
        name: "duration",
        kind: Kind::Float,
        default: "50",
        doc: "pulse duration (12 rms widths, units of 1/Γ)",
    },
    Key {
        name: "dt",
        kind: Kind::Float,
        default: "0.02",
        doc: "time step (units of 1/Γ)",
    },
    Key {
        name: "split",
        kind: Kind::Float,
        default: "0.5",
        doc: "intensity fraction incident from the left",
    },
];

pub const TRANSISTOR_KEYS: &[Key] = &[
    Key {
        name: "purcell",
        kind: Kind::Float,
        default: "20",
        doc: "P = Γ_pl/(Γ′_g + Γ_es)",
    },
    Key {
        name: "es_fraction",
        kind: Kind::Float,
        default: "1",
        doc: "share of non-guided decay going e → s",
    },
    Key {
        name: "duration",
        kind: Kind::Float,
        default: "50",
        doc: "gate photon duration (units of 1/Γ)",
    },
    Key {
        name: "dt",
        kind: Kind::Float,
        default: "0.02",
        doc: "time step (units of 1/Γ)",
    },
    Key {
        name: "gate",
        kind: Kind::Choice(&["both", "0", "1"]),
        default: "both",
        doc: "gate photon number",
    },
    Key {
        name: "signal_count",
        kind: Kind::Count,
        default: "10",
        doc: "signal photons per run",
    },
    Key {
        name: "trials",
        kind: Kind::Count,
        default: "10000",
        doc: "Monte Carlo trials for the gain",
    },
];

fn branch(cfg: &RunConfig) -> Branch {
    cfg.word("branch").parse().expect("validated by schema")
}

fn columns(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn label(p: f64) -> String {
    format!("P{p}")
}

pub fn scatter(cfg: &RunConfig, seed: u64) -> Result<Dataset, CliError> {
    let n = cfg.count("delta_points") as usize;
    let (lo, hi) = (cfg.float("delta_min"), cfg.float("delta_max"));
    if n == 0 || (n > 1 && !(hi > lo)) {
        return Err(CliError::Config(
            "need delta_points ≥ 1 and delta_max > delta_min".into(),
        ));
    }
    let deltas: Vec<f64> = (0..n)
        .map(|i| {
            if n == 1 {
                lo
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect();
    let params = params_from_purcell(cfg.float("purcell"), 1.0, 0.0, 0.0)?;
    let points = scatter_spectrum(&params, &deltas)?;
    let mut data = Dataset::new(
        "scatter",
        seed,
        cfg.echo(),
        columns(&["delta", "R", "T", "kappa"]),
    );
    for p in points {
        data.push(vec![p.delta, p.reflectance, p.transmittance, p.loss]);
    }
    Ok(data)
}

pub fn saturation(cfg: &RunConfig, seed: u64) -> Result<Dataset, CliError> {
    let purcell = cfg.float("purcell");
    let rows = cfg
        .floats("omega")
        .par_iter()
        .map(|&omega| {
            let params = params_from_purcell(purcell, 1.0, omega, 0.0)?;
            let obs = field_observables(&params, &steady_state(&params)?)?;
            let (t, r) = saturation_closed_form(purcell, omega);
            Ok(vec![omega, t, r, obs.transmittance, obs.reflectance])
        })
        .collect::<Result<Vec<_>, nwqed::Error>>()?;
    let mut data = Dataset::new(
        "saturation",
        seed,
        cfg.echo(),
        columns(&["omega", "T_closed", "R_closed", "T_numeric", "R_numeric"]),
    );
    let mut worst: f64 = 0.0;
    for row in rows {
        worst = worst
            .max((row[1] - row[3]).abs())
            .max((row[2] - row[4]).abs());
        data.push(row);
    }
    data.note("max_abs_difference", worst);
    if worst > SATURATION_TOL {
        return Err(CliError::Postcondition {
            invariant: "saturation_closed_form",
            detail: format!("closed form and master equation differ by {worst:e}"),
        });
    }
    Ok(data)
}

pub fn g2_curves(cfg: &RunConfig, seed: u64) -> Result<Dataset, CliError> {
    let branch = branch(cfg);
    let omega = cfg.float("omega");
    let grid = TimeGrid::spanning(0.0, cfg.float("t_max"), cfg.float("dt"))?;
    let purcells = cfg.floats("purcell");
    let curves = purcells
        .par_iter()
        .map(|&p| g2(&params_from_purcell(p, 1.0, omega, 0.0)?, branch, grid))
        .collect::<Result<Vec<_>, nwqed::Error>>()?;
    let weak = branch == Branch::Transmitted;
    let mut names = vec!["t".to_string()];
    for &p in purcells {
        names.push(format!("g2_{}", label(p)));
        if weak {
            names.push(format!("weak_{}", label(p)));
        }
    }
    let mut data = Dataset::new("g2", seed, cfg.echo(), names);
    for (i, t) in grid.times().enumerate() {
        let mut row = vec![t];
        for (curve, &p) in curves.iter().zip(purcells) {
            row.push(curve.values.values[i]);
            if weak {
                row.push(g2_weakfield_analytic(p, t));
            }
        }
        data.push(row);
    }
    for (curve, &p) in curves.iter().zip(purcells) {
        data.note(&format!("g2_zero_{}", label(p)), curve.values.values[0]);
        if let (true, Some(t0)) = (weak, antibunching_time(p)) {
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
            data.note(&format!("dip_time_{}", label(p)), curve.values.time(i_min));
            data.note(&format!("dip_time_weak_{}", label(p)), t0);
        }
    }
    Ok(data)
}

pub fn jump(cfg: &RunConfig, seed: u64) -> Result<Dataset, CliError> {
    let branch = branch(cfg);
    let omega = cfg.float("omega");
    let mut data = Dataset::new(
        "jump",
        seed,
        cfg.echo(),
        columns(&[
            "purcell",
            "coherence_ratio_re",
            "coherence_ratio_im",
            "amplitude_ratio_re",
            "amplitude_ratio_im",
            "coherence_ratio_weak",
            "amplitude_ratio_weak",
            "rho_ee_jump",
        ]),
    );
    for &p in cfg.floats("purcell") {
        let j = jump_state(&params_from_purcell(p, 1.0, omega, 0.0)?, branch)?;
        let (c_weak, a_weak) = match branch {
            Branch::Transmitted => (1.0 + p, 1.0 - p * p),
            Branch::Reflected => (0.0, 0.0),
        };
        data.push(vec![
            p,
            j.coherence_ratio.re,
            j.coherence_ratio.im,
            j.amplitude_ratio.re,
            j.amplitude_ratio.im,
            c_weak,
            a_weak,
            j.rho_jump.rho_ee(),
        ]);
    }
    Ok(data)
}

pub fn oracle(cfg: &RunConfig, seed: u64) -> Result<Dataset, CliError> {
    let params = params_from_purcell(cfg.float("purcell"), 1.0, 0.0, 0.0)?;
    let ns: Vec<usize> = cfg.counts("n_modes").iter().map(|&n| n as usize).collect();
    let grids = match cfg.float_or_word("window") {
        None => fixed_spacing_grids(&params, &ns, cfg.float("spacing"))?,
        Some(half) => ns
            .par_iter()
            .map(|&n| nwqed::build_grid(&params, n, (-half, half)))
            .collect::<Result<Vec<_>, _>>()?,
    };
    let pulse = InputPulse::Gaussian {
        center: cfg.float("pulse_center"),
        rms_bandwidth: cfg.float("pulse_rms"),
    };
    let report = convergence_report(&grids, &pulse)?;
    let mut data = Dataset::new(
        "oracle",
        seed,
        cfg.echo(),
        columns(&[
            "n_modes",
            "R_sim",
            "T_sim",
            "loss_sim",
            "R_avg",
            "T_avg",
            "loss_avg",
            "abs_error",
            "cleared",
        ]),
    );
    for r in &report.rows {
        data.push(vec![
            r.n_modes as f64,
            r.reflectance,
            r.transmittance,
            r.loss,
            r.reference_reflectance,
            r.reference_transmittance,
            r.reference_loss,
            r.abs_error,
            if r.cleared { 1.0 } else { 0.0 },
        ]);
    }
    data.note("final_error", report.final_error());
    data.note("noise_floor", report.noise_floor);
    report.check_monotone()?;
    if !(report.final_error() < ORACLE_TOL) {
        return Err(CliError::Postcondition {
            invariant: "oracle_final_error",
            detail: format!("final |R_sim − R_avg| = {:e}", report.final_error()),
        });
    }
    Ok(data)
}

fn three_level(cfg: &RunConfig) -> Result<(ThreeLevelParams<f64>, PulseShape<f64>), CliError> {
    let shape = gaussian_photon(cfg.float("duration"), cfg.float("dt"))?;
    let params = ThreeLevelParams::from_purcell(
        cfg.float("purcell"),
        1.0,
        cfg.float("es_fraction"),
        PulseShape::zeros(shape.grid()),
    )?;
    Ok((params, shape))
}

pub fn storage(cfg: &RunConfig, seed: u64) -> Result<Dataset, CliError> {
    let (params, input) = three_level(cfg)?;
    let params = params.with_split(cfg.float("split"))?;
    let control = matched_storage_control(&params, &input)?;
    let stored = store_photon(&params, &input, &control)?;

    // generate the time-reversed target, then store the reversed output
    let target = input
        .time_reversed_conj()
        .scaled(params.max_efficiency().sqrt());
    let gen_control = control_for_target_pulse(&params, &target)?;
    let generated = generate_photon(&params.clone().with_control(gen_control))?;
    let round_trip = generated.output.l2_distance(&target)?;
    let reversed = generated.output.time_reversed_conj().into_unit_norm()?;
    let reversed_control = matched_storage_control(&params, &reversed)?;
    let restored = store_photon(&params, &reversed, &reversed_control)?;

    let mut data = Dataset::new(
        "storage",
        seed,
        cfg.echo(),
        columns(&[
            "t",
            "input_re",
            "input_im",
            "control_re",
            "control_im",
            "ce_re",
            "ce_im",
            "cs_re",
            "cs_im",
        ]),
    );
    let grid = input.grid();
    for (i, t) in grid.times().enumerate() {
        let (e, w) = (input.values()[i], control.values()[i]);
        let (ce, cs) = stored.amplitudes[i];
        data.push(vec![t, e.re, e.im, w.re, w.im, ce.re, ce.im, cs.re, cs.im]);
    }
    data.note("efficiency", stored.efficiency);
    data.note("leakage", stored.leakage);
    data.note("loss", stored.loss);
    data.note("spin_flip_loss", stored.spin_flip_loss);
    data.note("max_efficiency", params.max_efficiency());
    data.note("generation_efficiency", generated.efficiency);
    data.note("round_trip_l2", round_trip);
    data.note("reversed_storage_efficiency", restored.efficiency);
    Ok(data)
}

pub fn transistor(cfg: &RunConfig, seed: u64) -> Result<Dataset, CliError> {
    let (params, shape) = three_level(cfg)?;
    let target = shape.scaled(params.max_efficiency().sqrt());
    let params = params
        .clone()
        .with_control(control_for_target_pulse(&params, &target)?);
    let gates: &[bool] = match cfg.word("gate") {
        "0" => &[false],
        "1" => &[true],
        _ => &[false, true],
    };
    let signals = cfg.count("signal_count") as usize;
    let outcomes = gates
        .par_iter()
        .map(|&g| run_transistor(&params, g, signals))
        .collect::<Result<Vec<_>, _>>()?;
    let mut data = Dataset::new(
        "transistor",
        seed,
        cfg.echo(),
        columns(&[
            "gate",
            "stored_probability",
            "reflected",
            "transmitted",
            "lost",
            "flip_probability",
            "flip_occurred",
        ]),
    );
    for (&g, o) in gates.iter().zip(&outcomes) {
        data.push(vec![
            if g { 1.0 } else { 0.0 },
            o.stored_probability,
            o.reflected,
            o.transmitted,
            o.lost,
            o.flip_probability,
            if o.flip_occurred { 1.0 } else { 0.0 },
        ]);
    }
    let mirror = outcomes[0].mirror;
    if let Some(storage) = outcomes.iter().find_map(|o| o.storage.as_ref()) {
        data.note("storage_efficiency", storage.efficiency);
    }
    data.note("mirror_R", mirror.reflectance);
    data.note("mirror_T", mirror.transmittance);
    data.note("mirror_kappa", mirror.loss);
    match transistor_gain(&params, cfg.count("trials") as usize, seed)? {
        GainEstimate::Finite {
            mean,
            ci95,
            analytic,
            ..
        } => {
            data.note("gain_mean", mean);
            data.note("gain_ci95_lo", ci95.0);
            data.note("gain_ci95_hi", ci95.1);
            data.note("gain_analytic", analytic);
        }
        GainEstimate::Infinite => data.note_text("gain_mean", "inf"),
    }
    Ok(data)
}
