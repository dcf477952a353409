//! CSV and JSON emission of sweep rows.

use std::io::Write;

use serde::Serialize;

use crate::entanglement::EntanglementReport;
use crate::error::Result;

pub const CSV_HEADER: [&str; 18] = [
    "k_index",
    "kx",
    "ky",
    "kz",
    "path_s",
    "abs_gamma",
    "gamma_re",
    "gamma_im",
    "eps_h_meV",
    "eps_full_meV",
    "E0_ab_bits",
    "E_alphabeta_bits",
    "E_ab_bits",
    "E_dm_ab_bits",
    "delta",
    "epr_uncertainty",
    "squeezed",
    "diverged",
];

#[derive(Debug, Clone, PartialEq)]
pub struct OutputRow {
    pub k_index: usize,
    pub path_s: Option<f64>,
    pub report: EntanglementReport,
}

/// `%.12g`-style rendering: 12 significant digits, trailing zeros trimmed.
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn opt(x: Option<f64>) -> String {
    x.map(format_sig12).unwrap_or_default()
}

impl OutputRow {
    fn csv_fields(&self) -> Vec<String> {
        let r = &self.report;
        let k = r.k.as_ref().map(|k| k.coords);
        vec![
            self.k_index.to_string(),
            opt(k.map(|c| c[0])),
            opt(k.map(|c| c[1])),
            opt(k.map(|c| c[2])),
            opt(self.path_s),
            format_sig12(r.gamma.norm()),
            format_sig12(r.gamma.re),
            format_sig12(r.gamma.im),
            opt(r.eps_heisenberg),
            opt(r.eps_full),
            opt(r.e0_ab),
            opt(r.e_alphabeta),
            opt(r.e_ab),
            opt(r.e_dm_ab),
            opt(r.delta),
            opt(r.epr_uncertainty),
            r.squeezed.map(|b| b.to_string()).unwrap_or_default(),
            r.diverged.to_string(),
        ]
    }

    fn json_row(&self) -> JsonRow {
        let r = &self.report;
        let k = r.k.as_ref().map(|k| k.coords);
        JsonRow {
            k_index: self.k_index,
            kx: k.map(|c| c[0]),
            ky: k.map(|c| c[1]),
            kz: k.map(|c| c[2]),
            path_s: self.path_s,
            abs_gamma: r.gamma.norm(),
            gamma_re: r.gamma.re,
            gamma_im: r.gamma.im,
            eps_h_mev: r.eps_heisenberg,
            eps_full_mev: r.eps_full,
            e0_ab_bits: r.e0_ab,
            e_alphabeta_bits: r.e_alphabeta,
            e_ab_bits: r.e_ab,
            e_dm_ab_bits: r.e_dm_ab,
            delta: r.delta,
            epr_uncertainty: r.epr_uncertainty,
            squeezed: r.squeezed,
            diverged: r.diverged,
        }
    }
}

#[derive(Serialize)]
struct JsonRow {
    k_index: usize,
    kx: Option<f64>,
    ky: Option<f64>,
    kz: Option<f64>,
    path_s: Option<f64>,
    abs_gamma: f64,
    gamma_re: f64,
    gamma_im: f64,
    #[serde(rename = "eps_h_meV")]
    eps_h_mev: Option<f64>,
    #[serde(rename = "eps_full_meV")]
    eps_full_mev: Option<f64>,
    #[serde(rename = "E0_ab_bits")]
    e0_ab_bits: Option<f64>,
    #[serde(rename = "E_alphabeta_bits")]
    e_alphabeta_bits: Option<f64>,
    #[serde(rename = "E_ab_bits")]
    e_ab_bits: Option<f64>,
    #[serde(rename = "E_dm_ab_bits")]
    e_dm_ab_bits: Option<f64>,
    delta: Option<f64>,
    epr_uncertainty: Option<f64>,
    squeezed: Option<bool>,
    diverged: bool,
}

pub fn write_csv<W: Write>(rows: &[OutputRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record(row.csv_fields())?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct JsonDocument<'a, M: Serialize> {
    meta: &'a M,
    rows: Vec<JsonRow>,
}

pub fn write_json<W: Write, M: Serialize>(meta: &M, rows: &[OutputRow], mut out: W) -> Result<()> {
    let doc = JsonDocument {
        meta,
        rows: rows.iter().map(OutputRow::json_row).collect(),
    };
    serde_json::to_writer_pretty(&mut out, &doc).map_err(std::io::Error::from)?;
    writeln!(out)?;
    Ok(())
}
