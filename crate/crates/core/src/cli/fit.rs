use std::fmt::Write as _;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::filters::sample_points;
use crate::svg;

use super::{write_atomic, FitFilterArgs};

/// Points in the exported waveform table.
const WAVEFORM_POINTS: usize = 201;

pub(super) fn run(args: FitFilterArgs, mut cfg: RunConfig) -> Result<()> {
    args.filter.apply(&mut cfg)?;
    let spec = cfg.filter.fitted_spec()?;
    let rmse = spec.fit_residual.unwrap_or(f64::NAN);
    log::info!("fit RMSE {rmse:.3e}");

    let json = serde_json::to_string_pretty(&spec)? + "\n";
    match &args.out {
        Some(path) => write_atomic(path, json.as_bytes())?,
        None => print!("{json}"),
    }

    if args.waveform.is_some() || args.svg.is_some() {
        let xs = sample_points(WAVEFORM_POINTS, Default::default());
        let f: Vec<f64> = xs.iter().map(|&x| spec.base_value(x)).collect();
        let g: Vec<f64> = xs.iter().map(|&x| spec.scaler_value(x)).collect();
        let scaled = spec.scaled_filter();
        let fp: Vec<f64> = xs.iter().map(|&x| scaled(x)).collect();
        let fpp: Vec<f64> = xs.iter().map(|&x| spec.fitted_value(x).unwrap_or(f64::NAN)).collect();
        if let Some(path) = &args.waveform {
            let mut text = String::from("lambda\tf\tg\tf_scaled\tf_fitted\n");
            for k in 0..xs.len() {
                let _ = writeln!(text, "{}\t{}\t{}\t{}\t{}", xs[k], f[k], g[k], fp[k], fpp[k]);
            }
            write_atomic(path, text.as_bytes())?;
        }
        if let Some(path) = &args.svg {
            let title = format!("{:?} backbone, quadrant {}", spec.basis, spec.quadrant);
            let plot = svg::waveform(&xs, &[("f", f), ("g", g), ("f'", fp), ("f''", fpp)], &title);
            write_atomic(path, plot.as_bytes())?;
        }
    }

    if let Some(max) = args.max_residual {
        if rmse.is_nan() || rmse > max {
            return Err(Error::CheckFailed(format!("fit RMSE {rmse:.3e} exceeds {max:.3e}")));
        }
    }
    Ok(())
}
