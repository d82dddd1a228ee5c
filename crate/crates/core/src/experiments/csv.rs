use std::io::Write;

use super::trial::TrialRecord;
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "seed,n,gamma,c0,lambda_star,phi_star,repaired_W,repaired_C,feasible,z_max,c_max,predicted_W,regime,mst_calls,wall_time_ms";

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes records as CSV, rejecting any record that breaks its invariants.
pub fn write_csv<W: Write>(records: &[TrialRecord], mut out: W) -> Result<()> {
    let io = |e: std::io::Error| Error::Io(e.to_string());
    writeln!(out, "{CSV_HEADER}").map_err(io)?;
    for r in records {
        r.check_invariants()?;
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.seed,
            r.n,
            num(r.gamma),
            num(r.c0),
            num(r.lambda_star),
            num(r.phi_star),
            num(r.repaired_w),
            num(r.repaired_c),
            r.feasible,
            num(r.z_max),
            num(r.c_max),
            r.predicted_w.map(num).unwrap_or_default(),
            r.regime,
            r.mst_calls,
            num(r.wall_time_ms),
        )
        .map_err(io)?;
    }
    Ok(())
}
