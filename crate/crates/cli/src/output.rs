//! Output records and their JSON / CSV rendering.

use serde::Serialize;
use tankpost::SerialSample;

/// Rounds to 12 significant digits, the precision of every printed float.
pub fn sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Serialize)]
pub struct Estimators {
    pub mle: u64,
    pub mvue: f64,
}

#[derive(Debug, Serialize)]
pub struct MassRow {
    pub n: u64,
    pub mass: f64,
}

#[derive(Debug, Serialize)]
pub struct Subset {
    pub alpha: f64,
    pub members: Vec<u64>,
    pub attained_mass: f64,
    pub threshold_mass: f64,
}

#[derive(Debug, Serialize)]
pub struct Query {
    pub gt: u64,
    pub probability: f64,
}

#[derive(Debug, Serialize)]
pub struct Predictive {
    pub serial: u64,
    pub capture_probability: f64,
}

#[derive(Debug, Serialize)]
pub struct PriorInfo {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u64>,
}

#[derive(Debug, Serialize)]
pub struct EstimateOutput {
    pub sample: SerialSample,
    pub prior: PriorInfo,
    pub estimators: Estimators,
    pub support_min: u64,
    /// Set when the support is unbounded and only a prefix is tabulated.
    pub posterior_truncated: bool,
    pub posterior: Vec<MassRow>,
    /// `null` when the mean diverges.
    pub posterior_mean: Option<f64>,
    pub median: u64,
    pub median_interval: [u64; 2],
    pub credible_subset: Subset,
    pub queries: Vec<Query>,
    pub ppc: Vec<Predictive>,
}

#[derive(Debug, Serialize)]
pub struct SweepRow {
    pub n_max: u64,
    pub median: u64,
    pub median_interval: [u64; 2],
    pub credible_min: u64,
    pub credible_max: u64,
    pub credible_size: usize,
    pub attained_mass: f64,
}

#[derive(Debug, Serialize)]
pub struct SensitivityOutput {
    pub sample: SerialSample,
    pub alpha: f64,
    pub sweep: Vec<SweepRow>,
}

#[derive(Debug, Serialize)]
pub struct SimulateOutput {
    pub n: u64,
    pub k: u64,
    pub seed: u64,
    pub sample: SerialSample,
}

#[derive(Debug, Serialize)]
pub struct ErrorObject<'a> {
    pub error: &'a str,
    pub detail: String,
}

pub fn to_json<T: Serialize>(value: &T) -> serde_json::Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(value)?;
    out.push(b'\n');
    Ok(out)
}

/// Writes `rows` as CSV with a header row.
pub fn to_csv<T: Serialize>(rows: &[T]) -> csv::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    w.into_inner().map_err(|e| e.into_error().into())
}

#[derive(Debug, Serialize)]
pub struct SweepCsvRow {
    pub n_max: u64,
    pub median: u64,
    pub median_lo: u64,
    pub median_hi: u64,
    pub credible_min: u64,
    pub credible_max: u64,
    pub credible_size: usize,
    pub attained_mass: f64,
}

impl From<&SweepRow> for SweepCsvRow {
    fn from(r: &SweepRow) -> Self {
        Self {
            n_max: r.n_max,
            median: r.median,
            median_lo: r.median_interval[0],
            median_hi: r.median_interval[1],
            credible_min: r.credible_min,
            credible_max: r.credible_max,
            credible_size: r.credible_size,
            attained_mass: r.attained_mass,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CaptureCsvRow {
    pub capture: usize,
    pub serial: u64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounds_to_twelve_significant_digits() {
        assert_eq!(sig(0.157410564225), 0.157410564225);
        assert_eq!(sig(0.1574105642251234), 0.157410564225);
        assert_eq!(sig(1.0 / 3.0), 0.333333333333);
        assert_eq!(sig(0.0), 0.0);
        assert_eq!(sig(19.0), 19.0);
    }

    #[test]
    fn csv_quotes_and_headers() {
        let rows = vec![MassRow { n: 15, mass: 0.5 }, MassRow { n: 16, mass: 0.5 }];
        let text = String::from_utf8(to_csv(&rows).unwrap()).unwrap();
        assert_eq!(text, "n,mass\n15,0.5\n16,0.5\n");
    }
}
