//! Parallel parameter sweeps with deterministic output order.

use std::path::Path;

use halfline_core::{detect_regime, energy, run, Regime};
use rayon::prelude::*;

use crate::config::{ProblemConfig, SweepCell, SweepConfig};
use crate::error::{CliError, CliResult};

/// What a sweep records for one successful cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub m: f64,
    pub p: f64,
    pub regime: Regime,
    pub final_time: f64,
    pub final_sup: f64,
    pub blowup_time: Option<f64>,
    pub initial_energy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub cell: SweepCell,
    pub config: ProblemConfig,
    pub outcome: Result<CellSummary, String>,
}

/// Runs one cell: builds its problem and integrates it.
pub fn run_cell(cfg: &ProblemConfig, seed: u64) -> Result<CellSummary, String> {
    let spec = cfg.to_spec(seed).map_err(|e| e.to_string())?;
    let e0 = energy(&spec.initial_field().map_err(|e| e.to_string())?, &spec);
    let trace = run(&spec).map_err(|e| e.to_string())?;
    Ok(CellSummary {
        m: cfg.m,
        p: cfg.p,
        regime: detect_regime(&trace),
        final_time: trace.last_time(),
        final_sup: trace.sup_norms.last().copied().unwrap_or(f64::NAN),
        blowup_time: trace.blowup_time_estimate,
        initial_energy: e0,
    })
}

/// Runs `cells` on up to `jobs` threads (0 means one per core). `prepare`
/// adjusts each cell's problem before it runs. Results come back in cell
/// order whatever the completion order.
pub fn run_cells<F>(
    base: &ProblemConfig,
    cells: &[SweepCell],
    seed: u64,
    jobs: usize,
    prepare: F,
) -> CliResult<Vec<CellResult>>
where
    F: Fn(&mut ProblemConfig, &SweepCell) + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Config(format!("cannot start {jobs} workers: {e}")))?;
    let results = pool.install(|| {
        cells
            .par_iter()
            .map(|cell| match cell.apply(base) {
                Ok(mut cfg) => {
                    prepare(&mut cfg, cell);
                    let outcome = run_cell(&cfg, seed.wrapping_add(cell.index as u64));
                    CellResult {
                        cell: cell.clone(),
                        config: cfg,
                        outcome,
                    }
                }
                Err(e) => CellResult {
                    cell: cell.clone(),
                    config: base.clone(),
                    outcome: Err(e.to_string()),
                },
            })
            .collect()
    });
    Ok(results)
}

pub fn sweep(base: &ProblemConfig, sweep: &SweepConfig, seed: u64, jobs: usize) -> CliResult<Vec<CellResult>> {
    let cells = sweep.cells(base);
    if cells.is_empty() || sweep.is_empty() {
        return Err(CliError::Config("sweep grid is empty".into()));
    }
    run_cells(base, &cells, seed, jobs, |_, _| {})
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".into(), |x| x.to_string())
}

/// Summary CSV: the swept values, then the cell outcome. Failed cells keep
/// their row with the error message.
pub fn write_summary_csv(results: &[CellResult], path: &Path) -> CliResult<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)?;
    let keys: Vec<String> = results
        .first()
        .map(|r| r.cell.values.iter().map(|(k, _)| k.clone()).collect())
        .unwrap_or_default();
    let mut header = vec!["cell".to_string()];
    header.extend(keys.iter().cloned());
    header.extend(
        [
            "bump_height",
            "bump_width",
            "regime",
            "final_time",
            "final_sup",
            "blowup_time",
            "initial_energy",
            "error",
        ]
        .map(String::from),
    );
    w.write_record(&header)?;
    for r in results {
        let mut row = vec![r.cell.index.to_string()];
        row.extend(r.cell.values.iter().map(|(_, v)| v.to_string()));
        let (h, wd) = r
            .cell
            .bump
            .map_or(("NA".into(), "NA".into()), |(h, w)| (h.to_string(), w.to_string()));
        row.push(h);
        row.push(wd);
        match &r.outcome {
            Ok(s) => row.extend([
                s.regime.name().to_string(),
                s.final_time.to_string(),
                s.final_sup.to_string(),
                opt(s.blowup_time),
                s.initial_energy.to_string(),
                String::new(),
            ]),
            Err(e) => row.extend([
                "Error".into(),
                "NA".into(),
                "NA".into(),
                "NA".into(),
                "NA".into(),
                e.clone(),
            ]),
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
