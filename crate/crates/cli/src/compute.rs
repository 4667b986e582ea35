//! The five subcommands, each turning a validated config into a report.

use biphase::curve::linspace;
use biphase::geodesics::{harmonic_defect, scenario_curve, FdResidual};
use biphase::phases::{interference_intensity, plate_sequence};
use biphase::{
    compose, curve_length, detect_phase_jump, eigen, evolve, generalized_geodesic_check, geodesic_between,
    geodesic_residual, geometric_phase, horizontality_residual, parallel_lift, q_matrix, two_level_scenario,
    vertex_product, Basis, Curve, DerivativeMethod, GeodesicScenario, PhaseError, PlateSpec, StateVector,
};
use rayon::prelude::*;
use serde_json::{Map, Value};

use crate::config::{Config, Quantity, StateSpec, SweepParameter};
use crate::error::CliError;
use crate::report::{number, state_json, Field, Report, Table};

type Values = Result<Vec<f64>, PhaseError>;

fn plate_columns(q: Quantity) -> &'static [&'static str] {
    match q {
        Quantity::Phases => &["pancharatnam", "dynamical", "geometric", "visibility"],
        Quantity::Eigen => &["eigen_arg_1", "eigen_arg_2", "eigen_arg_3"],
        Quantity::GeodesicCheck => &["geodesic_residual", "harmonic_residual"],
        Quantity::Interference => &["intensity"],
        Quantity::Jump => &["jump"],
    }
}

fn scenario_columns(q: Quantity) -> &'static [&'static str] {
    match q {
        Quantity::Phases => &[
            "theta",
            "pancharatnam",
            "dynamical",
            "geometric",
            "geometric_numeric",
            "visibility",
        ],
        other => plate_columns(other),
    }
}

fn harmonic_residual(plate: &PlateSpec) -> f64 {
    harmonic_defect(plate)
        .iter()
        .map(|z| z.im.abs())
        .fold(0.0, f64::max)
}

fn jump_values(cfg: &Config) -> Result<Values, CliError> {
    let sc = cfg.require_scenario()?;
    Ok(detect_phase_jump(&sc, cfg.epsilon).map(|j| vec![j]))
}

fn plate_values(cfg: &Config, state: &StateVector, plates: &[PlateSpec], q: Quantity) -> Result<Values, CliError> {
    Ok(match q {
        Quantity::Phases => plate_sequence(state, plates, cfg.samples)
            .map(|seq| vec![seq.total.pancharatnam, seq.total.dynamical, seq.total.geometric, seq.total.visibility]),
        Quantity::Eigen => compose(plates)
            .and_then(|u| eigen(&u))
            .map(|sys| sys.arguments().to_vec()),
        Quantity::GeodesicCheck => (|| {
            let mut strict = 0.0f64;
            let mut current = *state;
            for p in plates {
                let curve = evolve(p, &current, cfg.samples)?;
                strict = strict.max(geodesic_residual(&curve)?.residual);
                current = curve.last().state;
            }
            let harmonic = plates.iter().map(harmonic_residual).fold(0.0, f64::max);
            Ok(vec![strict, harmonic])
        })(),
        Quantity::Interference => compose(plates)
            .and_then(|u| u.apply(state))
            .and_then(|out| interference_intensity(state, &out, cfg.phi))
            .map(|i| vec![i]),
        Quantity::Jump => return jump_values(cfg),
    })
}

fn scenario_values(cfg: &Config, sc: &GeodesicScenario, q: Quantity) -> Result<Values, CliError> {
    let s = sc.smax();
    Ok(match q {
        Quantity::Phases => {
            let (theta, phi_g) = two_level_scenario(sc);
            if s == 0.0 {
                Ok(vec![theta, 0.0, 0.0, phi_g, 0.0, 1.0])
            } else {
                scenario_curve(sc, cfg.samples)
                    .and_then(|c| geometric_phase(&c))
                    .map(|r| vec![theta, r.pancharatnam, r.dynamical, phi_g, r.geometric, r.visibility])
            }
        }
        Quantity::Eigen => eigen(&q_matrix(&sc.plate())).map(|sys| sys.arguments().to_vec()),
        Quantity::GeodesicCheck => {
            let strict = if s == 0.0 {
                Ok(0.0)
            } else {
                scenario_curve(sc, cfg.samples)
                    .and_then(|c| geodesic_residual(&c))
                    .map(|r| r.residual)
            };
            strict.map(|r| vec![r, harmonic_residual(&sc.plate())])
        }
        Quantity::Interference => sc
            .state_at(s)
            .and_then(|out| interference_intensity(&sc.state(), &out, cfg.phi))
            .map(|i| vec![i]),
        Quantity::Jump => return jump_values(cfg),
    })
}

/// Append one quantity's values to a row; undefined values become nulls.
fn push_values(row: &mut Vec<Field>, width: usize, values: Values) -> Result<(), CliError> {
    match values {
        Ok(v) => row.extend(v.into_iter().map(Field::Num)),
        Err(e) if e.is_numeric() => row.extend(std::iter::repeat_n(Field::Null, width)),
        Err(e) => return Err(e.into()),
    }
    Ok(())
}

fn header(first: &[&str], cfg: &Config, columns: fn(Quantity) -> &'static [&'static str]) -> Vec<String> {
    first
        .iter()
        .copied()
        .chain(cfg.outputs.iter().flat_map(|q| columns(*q).iter().copied()))
        .map(String::from)
        .collect()
}

/// A single record for the configured state and plates.
pub fn run(cfg: &Config) -> Result<Report, CliError> {
    let only_jump = cfg.outputs.iter().all(|q| *q == Quantity::Jump);
    let mut table = Table::new(header(&[], cfg, plate_columns));
    let mut row = Vec::new();
    let mut extras = Vec::new();
    if only_jump {
        row.extend(jump_values(cfg)?.map_err(CliError::from)?.into_iter().map(Field::Num));
        table.rows.push(row);
        return Ok(Report::record(table, extras));
    }
    let state = cfg.require_input()?;
    let plates = cfg.require_plates()?;
    for q in &cfg.outputs {
        let values = plate_values(cfg, &state, plates, *q)?.map_err(CliError::from)?;
        row.extend(values.into_iter().map(Field::Num));
    }
    table.rows.push(row);

    let basis = cfg.input.map(|(_, b)| b).unwrap_or(Basis::Pmz);
    let output = compose(plates)?.apply(&state)?;
    extras.push((
        "input_state".into(),
        state_json(&StateSpec::from_state(&state.to_basis(basis))),
    ));
    extras.push((
        "output_state".into(),
        state_json(&StateSpec::from_state(&output.to_basis(basis))),
    ));
    if cfg.outputs.contains(&Quantity::Phases) {
        let seq = plate_sequence(&state, plates, cfg.samples)?;
        let segments = seq
            .segments
            .iter()
            .map(|s| {
                let mut m = Map::new();
                m.insert("delta".into(), number(s.plate.delta));
                m.insert("chi".into(), number(s.plate.chi));
                m.insert("pancharatnam".into(), number(s.report.pancharatnam));
                m.insert("dynamical".into(), number(s.report.dynamical));
                m.insert("dynamical_closed_form".into(), number(s.dynamical_closed_form));
                m.insert("geometric".into(), number(s.report.geometric));
                m.insert("visibility".into(), number(s.report.visibility));
                Value::Object(m)
            })
            .collect();
        extras.push(("segments".into(), Value::Array(segments)));
    }
    Ok(Report::record(table, extras))
}

/// One record per grid point, in grid order.
pub fn sweep(cfg: &Config) -> Result<Report, CliError> {
    let sweep = cfg
        .sweep
        .ok_or_else(|| CliError::Config("the sweep command needs a sweep grid".into()))?;
    let grid = sweep.grid();
    let name = sweep.parameter.name();
    let rows: Vec<Result<Vec<Field>, CliError>> = match sweep.parameter {
        SweepParameter::S => {
            let sc = cfg.require_scenario()?;
            grid.par_iter()
                .map(|&s| {
                    let at = sc.at(s);
                    let mut row = vec![Field::Num(s)];
                    for q in &cfg.outputs {
                        push_values(&mut row, scenario_columns(*q).len(), scenario_values(cfg, &at, *q)?)?;
                    }
                    Ok(row)
                })
                .collect()
        }
        SweepParameter::Delta | SweepParameter::Chi => {
            let state = cfg.require_input()?;
            let base = cfg.require_plates()?.to_vec();
            grid.par_iter()
                .map(|&x| {
                    let mut plates = base.clone();
                    let p = &mut plates[sweep.plate];
                    match sweep.parameter {
                        SweepParameter::Delta => p.delta = x,
                        _ => p.chi = x,
                    }
                    let mut row = vec![Field::Num(x)];
                    for q in &cfg.outputs {
                        push_values(&mut row, plate_columns(*q).len(), plate_values(cfg, &state, &plates, *q)?)?;
                    }
                    Ok(row)
                })
                .collect()
        }
    };
    let columns = match sweep.parameter {
        SweepParameter::S => header(&[name], cfg, scenario_columns),
        _ => header(&[name], cfg, plate_columns),
    };
    let mut table = Table::new(columns);
    table.rows = rows.into_iter().collect::<Result<_, _>>()?;
    Ok(Report::records(table))
}

/// Spectrum of the composed plate matrix, one record per eigenpair.
pub fn eigen_report(cfg: &Config) -> Result<Report, CliError> {
    let u = compose(cfg.require_plates()?)?;
    let sys = eigen(&u)?;
    let mut columns: Vec<String> = ["index", "value_re", "value_im", "argument"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    for k in 1..=3 {
        columns.push(format!("v{k}_re"));
        columns.push(format!("v{k}_im"));
    }
    let mut table = Table::new(columns);
    for (k, pair) in sys.pairs().iter().enumerate() {
        let mut row = vec![
            Field::Int(k + 1),
            Field::Num(pair.value.re),
            Field::Num(pair.value.im),
            Field::Num(pair.argument()),
        ];
        for z in pair.vector.amplitudes() {
            row.push(Field::Num(z.re));
            row.push(Field::Num(z.im));
        }
        table.rows.push(row);
    }
    Ok(Report::records(table))
}

fn curve_row(label: String, curve: &Curve, harmonic: Option<f64>) -> Result<Vec<Field>, CliError> {
    let FdResidual { residual, step } = geodesic_residual(curve)?;
    Ok(vec![
        Field::Text(label),
        Field::Num(step),
        Field::Num(residual),
        Field::Num(horizontality_residual(curve)?),
        Field::Num(curve_length(curve)?),
        harmonic.map(Field::Num).unwrap_or(Field::Null),
    ])
}

/// Strict and general geodesic residuals of every curve the config defines.
pub fn geodesic_report(cfg: &Config) -> Result<Report, CliError> {
    let columns = [
        "curve",
        "step",
        "geodesic_residual",
        "horizontality_residual",
        "length",
        "harmonic_residual",
    ];
    let mut table = Table::new(columns.iter().map(|s| s.to_string()).collect());
    if let (Some((a, _)), Some(b)) = (cfg.input, cfg.target) {
        let curve = geodesic_between(&a, &b, cfg.samples)?;
        table.rows.push(curve_row("geodesic".into(), &curve, None)?);
    }
    if let Some((state, _)) = cfg.input {
        let mut current = state;
        for (k, p) in cfg.plates.iter().enumerate() {
            let curve = evolve(p, &current, cfg.samples)?;
            let span = if p.delta == 0.0 { 1.0 } else { p.delta.abs() };
            let grid = linspace(0.0, span, cfg.samples);
            let harmonic = generalized_geodesic_check(p.chi, &grid, DerivativeMethod::Analytic)?;
            table.rows.push(curve_row(format!("plate_{}", k + 1), &curve, Some(harmonic))?);
            current = curve.last().state;
        }
    }
    if let Some(sc) = cfg.scenario.filter(|sc| sc.smax() > 0.0) {
        let curve = scenario_curve(&sc, cfg.samples)?;
        let harmonic = Some(harmonic_residual(&sc.plate()));
        table.rows.push(curve_row("scenario".into(), &curve, harmonic)?);
        table.rows.push(curve_row("scenario_lifted".into(), &parallel_lift(&curve)?, harmonic)?);
    }
    if table.rows.is_empty() {
        return Err(CliError::Config(
            "nothing to check: give input_state with target_state or plates, or a scenario with s > 0".into(),
        ));
    }
    Ok(Report::records(table))
}

/// Geometric phase of the closed polygon through the listed states.
pub fn vertex_report(cfg: &Config) -> Result<Report, CliError> {
    let phase = vertex_product(&cfg.states)?;
    let mut table = Table::new(vec!["states".into(), "vertex_phase".into()]);
    table.rows.push(vec![Field::Int(cfg.states.len()), Field::Num(phase)]);
    Ok(Report::record(table, Vec::new()))
}
