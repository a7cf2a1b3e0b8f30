use std::path::Path;

use super::profile::ProfileSample;
use crate::error::Result;

fn writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)?)
}

/// Columns `xi, f, fm_prime`.
pub fn write_profile_csv(samples: &[ProfileSample], path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["xi", "f", "fm_prime"])?;
    for s in samples {
        w.write_record([s.xi.to_string(), s.f.to_string(), s.flux.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_profile_csv(path: &Path) -> Result<Vec<ProfileSample>> {
    let mut r = csv::Reader::from_path(path)?;
    let mut out = Vec::new();
    for rec in r.deserialize::<(f64, f64, f64)>() {
        let (xi, f, flux) = rec?;
        out.push(ProfileSample { xi, f, flux });
    }
    Ok(out)
}

/// One row of the shooting summary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingRow {
    pub m: f64,
    pub alpha: f64,
    pub lambda_plus: Option<f64>,
    pub lambda_minus: Option<f64>,
}

impl ShootingRow {
    pub fn mismatch(&self) -> Option<f64> {
        Some(self.lambda_plus? - self.lambda_minus?)
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| x.to_string())
}

/// Columns `m, alpha, lambda_plus, lambda_minus, h`; missing values are `NA`.
pub fn write_shooting_csv(rows: &[ShootingRow], path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["m", "alpha", "lambda_plus", "lambda_minus", "h"])?;
    for r in rows {
        w.write_record([
            r.m.to_string(),
            r.alpha.to_string(),
            opt(r.lambda_plus),
            opt(r.lambda_minus),
            opt(r.mismatch()),
        ])?;
    }
    w.flush()?;
    Ok(())
}
