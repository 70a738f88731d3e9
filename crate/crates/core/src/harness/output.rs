//! CSV tables (header row, fixed column order, 17 significant digits) and
//! JSON trial records.

use std::io::Write;

use serde::Serialize;

use super::certificate::CertificateReport;
use super::experiments::{ArRow, ScanRow, VSummary};
use crate::error::Result;
use crate::io::float17;

fn opt(x: Option<f64>) -> String {
    x.map(float17).unwrap_or_default()
}

fn ar_fields(r: &ArRow) -> Vec<String> {
    vec![
        r.radius.to_string(),
        r.trials.to_string(),
        r.successes.to_string(),
        r.exhausted.to_string(),
        float17(r.p),
        float17(r.ci_lo),
        float17(r.ci_hi),
        float17(r.mean_visits),
    ]
}

const AR_HEADER: [&str; 8] =
    ["radius", "trials", "successes", "exhausted", "p", "ci_lo", "ci_hi", "mean_visits"];

pub fn write_ar_csv<W: Write>(w: W, rows: &[ArRow]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(AR_HEADER)?;
    for r in rows {
        out.write_record(ar_fields(r))?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_scan_csv<W: Write>(w: W, rows: &[ScanRow]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec!["mu", "lambda"];
    header.extend(AR_HEADER);
    out.write_record(&header)?;
    for r in rows {
        let mut fields = vec![float17(r.mu), float17(r.lambda)];
        fields.extend(ar_fields(&r.row));
        out.write_record(fields)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_v_csv<W: Write>(w: W, rows: &[VSummary]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "radius", "trials", "f_trials", "epsilon", "N", "threshold", "p_exceeds", "ci_lo", "ci_hi",
        "mean_v", "sd_v", "mean_w", "mean_l", "mean_lhat",
    ])?;
    for r in rows {
        out.write_record([
            r.radius.to_string(),
            r.trials.to_string(),
            r.f_trials.to_string(),
            float17(r.epsilon),
            r.big_n.to_string(),
            float17(r.threshold),
            opt(r.p_exceeds),
            float17(r.ci_lo),
            float17(r.ci_hi),
            float17(r.mean_v),
            float17(r.sd_v),
            float17(r.mean_w),
            float17(r.mean_l),
            float17(r.mean_lhat),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_certificate_csv<W: Write>(w: W, rows: &[CertificateReport]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "dim", "radius", "mu", "epsilon", "N", "ball_size", "e_w", "e_lhat", "a", "v_threshold",
        "bound_w", "bound_w_exact", "bound_l", "total_bound", "empirical", "empirical_stderr",
    ])?;
    for r in rows {
        out.write_record([
            r.dim.to_string(),
            r.radius.to_string(),
            float17(r.mu),
            float17(r.epsilon),
            r.big_n.to_string(),
            r.ball_size.to_string(),
            float17(r.e_w),
            float17(r.e_lhat),
            float17(r.a),
            float17(r.v_threshold),
            float17(r.bound_w),
            r.bound_w_exact.to_string(),
            float17(r.bound_l),
            float17(r.total_bound),
            opt(r.empirical),
            opt(r.empirical_stderr),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Pretty-printed JSON followed by a newline.
pub fn write_json<W: Write, T: Serialize + ?Sized>(mut w: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    Ok(())
}
