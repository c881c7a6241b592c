use std::collections::BTreeSet;
use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use phasecorr::density::density_grid;
use phasecorr::longtime::{cout_long, cout_long_small_c};
use phasecorr::montecarlo::{
    estimate_with, run_trials_with_workers, trial_seed, Bootstrap, Estimator, SimConfig, TrialRecord,
};
use phasecorr::quadrature::PeriodicGrid;
use phasecorr::shorttime::{cout_short, cout_short_slope};
use phasecorr::PrcShape;

use crate::error::CliError;
use crate::output::{fmt_f64, Table};
use crate::params::{
    DensityParams, LongParams, Params, PrcParams, ShortParams, SimSettings, SimulateParams, SweepParams,
};

/// Files written by a command, plus the number of estimates that came out
/// degenerate.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Written {
    pub outputs: Vec<PathBuf>,
    pub degenerate: Vec<String>,
}

pub fn execute(params: &Params, workers: usize) -> Result<Written, CliError> {
    match params {
        Params::Prc(p) => single(&p.out, prc_table(p)?),
        Params::Density(p) => single(&p.out, density_table(p)?),
        Params::Long(p) => single(&p.out, long_table(p)?),
        Params::Short(p) => single(&p.out, short_table(p)?),
        Params::Simulate(p) => simulate(p, workers),
        Params::Sweep(p) => sweep(p, workers),
    }
}

fn single(out: &Path, table: Table) -> Result<Written, CliError> {
    table.write(out)?;
    Ok(Written {
        outputs: vec![out.to_path_buf()],
        degenerate: Vec::new(),
    })
}

fn shapes(alphas: &[f64]) -> Result<Vec<PrcShape>, CliError> {
    alphas.iter().map(|&a| PrcShape::new(a).map_err(Into::into)).collect()
}

pub fn prc_table(p: &PrcParams) -> Result<Table, CliError> {
    if p.alphas.is_empty() {
        return Err(CliError::Usage("alpha list is empty".into()));
    }
    if p.points < 2 {
        return Err(CliError::Usage("need at least 2 points".into()));
    }
    let shapes = shapes(&p.alphas)?;
    let mut t = Table::new(["theta".to_string()]);
    t.header.extend(p.alphas.iter().map(|a| format!("alpha={}", fmt_f64(*a))));
    for k in 0..p.points {
        let theta = TAU * k as f64 / p.points as f64;
        let mut row = vec![fmt_f64(theta)];
        row.extend(shapes.iter().map(|s| fmt_f64(s.delta(theta))));
        t.push(row);
    }
    Ok(t)
}

pub fn density_table(p: &DensityParams) -> Result<Table, CliError> {
    let shape = PrcShape::new(p.alpha)?;
    PeriodicGrid::new(p.n)?;
    let grids = p
        .cs
        .iter()
        .map(|&c| density_grid(&shape, c, p.n))
        .collect::<Result<Vec<_>, _>>()?;
    let mut t = Table::new(["phi".to_string()]);
    t.header.extend(p.cs.iter().map(|c| format!("c={}", fmt_f64(*c))));
    for k in 0..p.n {
        let mut row = vec![fmt_f64(grids[0].phi(k))];
        row.extend(grids.iter().map(|g| fmt_f64(g.values()[k])));
        t.push(row);
    }
    Ok(t)
}

pub fn long_table(p: &LongParams) -> Result<Table, CliError> {
    let mut t = Table::new(["alpha", "c", "c_out", "c_out_small_c"]);
    for shape in shapes(&p.alphas)? {
        for &c in &p.cs {
            let full = cout_long(&shape, c)?.c_out;
            let small = cout_long_small_c(&shape, c)?;
            t.push(vec![fmt_f64(shape.alpha()), fmt_f64(c), fmt_f64(full), fmt_f64(small)]);
        }
    }
    Ok(t)
}

pub fn short_table(p: &ShortParams) -> Result<Table, CliError> {
    let shape = PrcShape::new(p.alpha)?;
    if let Some(&bad) = p.windows.iter().find(|&&w| !(w > 0.0 && w < TAU)) {
        return Err(CliError::Usage(format!(
            "window {bad} is outside (0, 2π); the short-window result degenerates at 2π"
        )));
    }
    let mut t = Table::new(["alpha", "T", "c", "cout_short", "linear_slope_times_T"]);
    for &c in &p.cs {
        let slope = cout_short_slope(&shape, c)?;
        for &w in &p.windows {
            let value = cout_short(&shape, c, w)?;
            t.push(vec![fmt_f64(p.alpha), fmt_f64(w), fmt_f64(c), fmt_f64(value), fmt_f64(slope * w)]);
        }
    }
    Ok(t)
}

const SUMMARY_HEADER: [&str; 11] = [
    "alpha", "c", "sigma", "T", "estimator", "value", "std_error", "n", "seed", "theory", "status",
];

fn estimators(window: f64) -> &'static [Estimator] {
    if window <= TAU {
        &[Estimator::PearsonCounts, Estimator::PearsonTotalPhase, Estimator::PhiBinary]
    } else {
        &[Estimator::PearsonCounts, Estimator::PearsonTotalPhase]
    }
}

/// Analytic value the estimate should be compared with: the long-window
/// result for windows of a period or more, the short-window one below.
fn theory(config: &SimConfig) -> f64 {
    let Ok(shape) = PrcShape::new(config.alpha) else {
        return f64::NAN;
    };
    let value = if config.window < TAU {
        cout_short(&shape, config.c, config.window)
    } else {
        cout_long(&shape, config.c).map(|r| r.c_out)
    };
    value.unwrap_or(f64::NAN)
}

fn summary_rows(config: &SimConfig, records: &[TrialRecord], table: &mut Table, degenerate: &mut Vec<String>) {
    let theory = fmt_f64(theory(config));
    for &est in estimators(config.window) {
        let (value, se, status) = match estimate_with(records, est, &Bootstrap::default()) {
            Ok(e) => (fmt_f64(e.value), fmt_f64(e.std_error), "ok"),
            Err(e) => {
                degenerate.push(format!(
                    "alpha={} c={} sigma={} T={}: {e}",
                    config.alpha, config.c, config.sigma, config.window
                ));
                ("NaN".into(), "NaN".into(), "degenerate")
            }
        };
        table.push(vec![
            fmt_f64(config.alpha),
            fmt_f64(config.c),
            fmt_f64(config.sigma),
            fmt_f64(config.window),
            est.name().into(),
            value,
            se,
            records.len().to_string(),
            config.master_seed.to_string(),
            theory.clone(),
            status.into(),
        ]);
    }
}

fn records_table(records: &[TrialRecord]) -> Table {
    let mut t = Table::new([
        "trial",
        "spike_count_1",
        "spike_count_2",
        "total_phase_1",
        "total_phase_2",
        "spiked_1",
        "spiked_2",
        "final_phase_diff",
    ]);
    for (k, r) in records.iter().enumerate() {
        t.push(vec![
            k.to_string(),
            r.spike_count_1.to_string(),
            r.spike_count_2.to_string(),
            fmt_f64(r.total_phase_1),
            fmt_f64(r.total_phase_2),
            (r.spiked_1 as u8).to_string(),
            (r.spiked_2 as u8).to_string(),
            fmt_f64(r.final_phase_diff),
        ]);
    }
    t
}

fn validated(settings: &SimSettings, alpha: f64, c: f64, sigma: f64, window: f64, seed: u64) -> Result<SimConfig, CliError> {
    let config = settings.config(alpha, c, sigma, window, seed);
    config.validate()?;
    Ok(config)
}

fn simulate(p: &SimulateParams, workers: usize) -> Result<Written, CliError> {
    let config = validated(&p.settings, p.alpha, p.c, p.sigma, p.window_t, p.seed)?;
    if p.records.as_ref() == Some(&p.out) {
        return Err(CliError::Usage("--records and --out name the same file".into()));
    }
    let records = run_trials_with_workers(&config, workers)?;
    let mut written = Written::default();
    let mut table = Table::new(SUMMARY_HEADER);
    summary_rows(&config, &records, &mut table, &mut written.degenerate);
    table.write(&p.out)?;
    written.outputs.push(p.out.clone());
    if let Some(path) = &p.records {
        records_table(&records).write(path)?;
        written.outputs.push(path.clone());
    }
    Ok(written)
}

/// File name of one sweep point. Values are rounded, so distinct but very
/// close grid points can collide; such grids are rejected.
pub fn point_file_name(alpha: f64, c: f64, sigma: f64, window: f64) -> String {
    format!("alpha={alpha:.4}_c={c:.4}_sigma={sigma:.4}_T={window:.4}.csv")
}

#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub index: usize,
    pub config: SimConfig,
    pub file: String,
}

/// Expand the grid in (alpha, c, sigma, T) order, each point with its own
/// seed derived from the master seed and the point index.
pub fn sweep_points(p: &SweepParams) -> Result<Vec<SweepPoint>, CliError> {
    let total = p.alphas.len() * p.cs.len() * p.sigmas.len() * p.windows.len();
    if total == 0 {
        return Err(CliError::Usage("sweep grid is empty".into()));
    }
    let mut seen = BTreeSet::new();
    let mut files = BTreeSet::new();
    let mut points = Vec::with_capacity(total);
    for &alpha in &p.alphas {
        for &c in &p.cs {
            for &sigma in &p.sigmas {
                for &window in &p.windows {
                    let index = points.len();
                    let key = [alpha, c, sigma, window].map(f64::to_bits);
                    if !seen.insert(key) {
                        return Err(CliError::Usage(format!(
                            "duplicate grid point alpha={alpha} c={c} sigma={sigma} T={window}"
                        )));
                    }
                    let file = point_file_name(alpha, c, sigma, window);
                    if !files.insert(file.clone()) || file == "summary.csv" {
                        return Err(CliError::Usage(format!(
                            "grid points too close together: output path {file} would be written twice"
                        )));
                    }
                    let seed = trial_seed(p.seed, index as u64);
                    let config = validated(&p.settings, alpha, c, sigma, window, seed)?;
                    points.push(SweepPoint { index, config, file });
                }
            }
        }
    }
    Ok(points)
}

fn sweep(p: &SweepParams, workers: usize) -> Result<Written, CliError> {
    let points = sweep_points(p)?;
    if p.out.exists() && !p.out.is_dir() {
        return Err(CliError::Usage(format!(
            "{} exists and is not a directory",
            p.out.display()
        )));
    }
    std::fs::create_dir_all(&p.out).map_err(|e| CliError::io(&p.out, e))?;
    let mut written = Written::default();
    let mut summary = Table::new(SUMMARY_HEADER);
    for point in &points {
        let records = run_trials_with_workers(&point.config, workers)?;
        let mut table = Table::new(SUMMARY_HEADER);
        summary_rows(&point.config, &records, &mut table, &mut written.degenerate);
        let path = p.out.join(&point.file);
        table.write(&path)?;
        summary.rows.extend(table.rows);
        written.outputs.push(path);
    }
    let path = p.out.join("summary.csv");
    summary.write(&path)?;
    written.outputs.push(path);
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::EquilibrationMode;
    use phasecorr::montecarlo::DEFAULT_DT;

    fn settings() -> SimSettings {
        SimSettings {
            dt: DEFAULT_DT,
            burn_in: 0.0,
            trials: 10,
            include_ito_drift: false,
            equilibration: EquilibrationMode::AnalyticSeed,
        }
    }

    fn sweep_params(alphas: Vec<f64>, cs: Vec<f64>) -> SweepParams {
        SweepParams {
            alphas,
            cs,
            sigmas: vec![0.1],
            windows: vec![TAU],
            seed: 1,
            settings: settings(),
            out: "unused".into(),
        }
    }

    #[test]
    fn sweep_grid_checks() {
        let points = sweep_points(&sweep_params(vec![0.0, 1.0], vec![0.2, 0.4, 0.8])).unwrap();
        assert_eq!(points.len(), 6);
        assert_eq!(points[4].config.c, 0.4);
        assert_eq!(points[4].config.master_seed, trial_seed(1, 4));
        assert!(matches!(sweep_points(&sweep_params(vec![], vec![0.2])), Err(CliError::Usage(_))));
        let err = sweep_points(&sweep_params(vec![0.0, 0.0], vec![0.2])).unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");
        let err = sweep_points(&sweep_params(vec![0.0], vec![0.2, 0.200001])).unwrap_err();
        assert!(err.to_string().contains("written twice"), "{err}");
        let err = sweep_points(&sweep_params(vec![0.0], vec![1.2])).unwrap_err();
        assert!(err.to_string().contains("`c`"), "{err}");
    }

    #[test]
    fn prc_columns() {
        let t = prc_table(&PrcParams {
            alphas: vec![std::f64::consts::FRAC_PI_2, 0.0],
            points: 512,
            out: "x".into(),
        })
        .unwrap();
        assert_eq!(t.header, ["theta", "alpha=1.5707963267948966", "alpha=0.0"]);
        assert_eq!(t.rows.len(), 512);
        for row in &t.rows {
            let theta: f64 = row[0].parse().unwrap();
            let i: f64 = row[1].parse().unwrap();
            let ii: f64 = row[2].parse().unwrap();
            assert!((i - (1.0 - theta.cos())).abs() < 1e-15);
            assert!((ii + theta.sin()).abs() < 1e-15);
        }
    }

    #[test]
    fn short_rejects_full_period() {
        let p = ShortParams {
            alpha: 0.0,
            cs: vec![0.4],
            windows: vec![1.0, TAU],
            out: "x".into(),
        };
        assert!(matches!(short_table(&p), Err(CliError::Usage(_))));
    }

    #[test]
    fn theory_switches_at_one_period() {
        let short = settings().config(0.0, 0.8, 0.05, std::f64::consts::FRAC_PI_4, 0);
        let long = settings().config(0.0, 0.8, 0.05, 10.0 * TAU, 0);
        let shape = PrcShape::type_ii();
        assert_eq!(theory(&short), cout_short(&shape, 0.8, std::f64::consts::FRAC_PI_4).unwrap());
        assert_eq!(theory(&long), cout_long(&shape, 0.8).unwrap().c_out);
    }
}
