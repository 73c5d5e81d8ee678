//! Default layouts for the standard concurrence maps. Ranges follow the usual
//! plot extents and can be overridden per axis.

use rayon::prelude::*;

use super::format::Csv;
use super::FigureArgs;
use crate::error::Result;
use crate::model::{Anisotropy, ChainSpec};
use crate::scan::{evaluate_point, sweep, AxisSpec, Parameter, Quantity, ScanGrid};
use crate::thermal::Temperature;

/// Fields used by the field-dependent thermal map.
pub const FIGURE_13_FIELDS: [f64; 6] = [1.0, 1.5, 1.71, 1.75, 2.0, 2.5];

struct Map2d {
    anisotropy: Anisotropy,
    pair: (usize, usize),
    x: (Parameter, f64, f64),
    y: (Parameter, f64, f64),
}

fn map_2d(number: u8) -> Option<Map2d> {
    use Anisotropy::{Xy, X};
    use Parameter::{J, T, W};
    let (anisotropy, pair, x, y) = match number {
        2 => (Xy, (0, 2), (J, 0.0, 2.0), (W, 0.0, 2.0)),
        3 => (Xy, (0, 1), (J, 0.0, 2.0), (W, 0.0, 2.0)),
        4 => (Xy, (0, 2), (J, -2.0, 0.0), (W, 0.0, 2.0)),
        5 => (Xy, (0, 3), (J, -2.0, 0.0), (W, 0.0, 2.0)),
        6 => (Xy, (0, 2), (J, 0.0, 2.0), (T, 0.0, 2.0)),
        7 => (Xy, (0, 1), (J, 0.0, 2.0), (T, 0.0, 2.0)),
        8 => (X, (0, 1), (J, 0.0, 2.0), (W, 0.0, 2.0)),
        9 => (X, (0, 1), (J, 0.0, 2.0), (T, 0.0, 2.0)),
        _ => return None,
    };
    Some(Map2d { anisotropy, pair, x, y })
}

fn axis(args: &FigureArgs, p: Parameter, start: f64, stop: f64, second: bool) -> Result<AxisSpec> {
    let (s, e) = if second {
        (args.y_start, args.y_stop)
    } else {
        (args.x_start, args.x_stop)
    };
    AxisSpec::linspace(p, s.unwrap_or(start), e.unwrap_or(stop), args.steps as usize)
}

pub fn figure_csv(args: &FigureArgs, precision: usize) -> Result<String> {
    if let Some(m) = map_2d(args.number) {
        let x = axis(args, m.x.0, m.x.1, m.x.2, false)?;
        let y = axis(args, m.y.0, m.y.1, m.y.2, true)?;
        let template = ChainSpec::two_site(m.anisotropy, 1.0, 1.0);
        let grid = ScanGrid::new(
            vec![x, y],
            template,
            Temperature::ZERO,
            Quantity::Pair(m.pair.0, m.pair.1),
        )?;
        let header = [m.x.0.to_string(), m.y.0.to_string(), "value".to_string()];
        let header: Vec<&str> = header.iter().map(String::as_str).collect();
        let mut csv = Csv::new(precision, &header);
        for r in sweep(&grid)? {
            csv.numbers(&[r.values[0], r.values[1], r.quantity]);
        }
        return Ok(csv.into_string());
    }
    match args.number {
        10 | 11 => size_comparison(args, precision),
        12 => field_response(args, precision),
        _ => thermal_field_map(args, precision),
    }
}

/// Figures 10 and 11: a tau bond or a Kondo pair against `J` for two and four sites.
fn size_comparison(args: &FigureArgs, precision: usize) -> Result<String> {
    let pair = if args.number == 10 { (0, 2) } else { (0, 1) };
    let js = axis(args, Parameter::J, 0.0, 4.0, false)?.values();
    let quantity = Quantity::Pair(pair.0, pair.1);
    let rows: Vec<[f64; 3]> = js
        .par_iter()
        .map(|&j| {
            let eval = |n: usize| -> Result<f64> {
                let spec = ChainSpec::two_site(Anisotropy::Xy, j, 1.0).with_sites(n);
                Ok(evaluate_point(&spec, Temperature::ZERO, quantity, &[])?.quantity)
            };
            Ok([j, eval(2)?, eval(4)?])
        })
        .collect::<Result<_>>()?;
    let mut csv = Csv::new(precision, &["J", "value_n2", "value_n4"]);
    for r in rows {
        csv.numbers(&r);
    }
    Ok(csv.into_string())
}

/// Figure 12: single-qubit concurrence against `B` at `J = W = 1`.
fn field_response(args: &FigureArgs, precision: usize) -> Result<String> {
    let bs = axis(args, Parameter::B, 0.0, 4.0, false)?.values();
    let rows: Vec<[f64; 3]> = bs
        .par_iter()
        .map(|&b| {
            let eval = |a: Anisotropy| -> Result<f64> {
                let spec = ChainSpec::two_site(a, 1.0, 1.0).with_field(b);
                Ok(evaluate_point(&spec, Temperature::ZERO, Quantity::Single(0), &[])?.quantity)
            };
            Ok([b, eval(Anisotropy::Xy)?, eval(Anisotropy::X)?])
        })
        .collect::<Result<_>>()?;
    let mut csv = Csv::new(precision, &["B", "value_xy", "value_x"]);
    for r in rows {
        csv.numbers(&r);
    }
    Ok(csv.into_string())
}

/// Figure 13: Kondo-pair thermal concurrence against `T` at several fields.
fn thermal_field_map(args: &FigureArgs, precision: usize) -> Result<String> {
    let t_axis = axis(args, Parameter::T, 0.0, 1.2, true)?;
    let mut csv = Csv::new(precision, &["B", "T", "value"]);
    for b in FIGURE_13_FIELDS {
        let template = ChainSpec::two_site(Anisotropy::Xy, 1.0, 1.0).with_field(b);
        let grid = ScanGrid::new(vec![t_axis], template, Temperature::ZERO, Quantity::Pair(0, 1))?;
        for r in sweep(&grid)? {
            csv.numbers(&[b, r.values[0], r.quantity]);
        }
    }
    Ok(csv.into_string())
}
