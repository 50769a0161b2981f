//! Series ingestion and elementary transforms: CSV loading, log returns,
//! and the mean-centered cumulative profile that the fluctuation analysis
//! operates on.

use std::io;

use crate::error::{Error, Result};
use crate::stats;

/// What a [`Series`] holds. Transforms check kinds so that, for example,
/// prices are never profiled directly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum SeriesKind {
    /// Positive price levels as read from a CSV close column.
    Prices,
    /// Logarithmic returns of a price series.
    LogReturns,
    /// Generator output or surrogate data; accepted wherever returns are.
    Synthetic,
}

impl std::fmt::Display for SeriesKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            SeriesKind::Prices => "Prices",
            SeriesKind::LogReturns => "LogReturns",
            SeriesKind::Synthetic => "Synthetic",
        };
        f.write_str(name)
    }
}

/// Descriptive metadata for a sector index.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SectorMeta {
    pub symbol: String,
    pub name: String,
    /// Number of constituent stocks; at least 1.
    pub stock_count: u32,
}

impl SectorMeta {
    pub fn new(symbol: impl Into<String>, name: impl Into<String>, stock_count: u32) -> Self {
        SectorMeta {
            symbol: symbol.into(),
            name: name.into(),
            stock_count: stock_count.max(1),
        }
    }
}

/// A labeled, typed sequence of samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub kind: SeriesKind,
    pub values: Vec<f64>,
}

impl Series {
    pub fn new(label: impl Into<String>, kind: SeriesKind, values: Vec<f64>) -> Self {
        Series {
            label: label.into(),
            kind,
            values,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Reads a price series from CSV text with a header row.
///
/// Both named columns must be present; every value cell must parse as a
/// positive finite decimal. Row numbers in errors are 1-based data rows
/// (the header is row 0).
pub fn load_series<R: io::Read>(
    source: R,
    date_column: &str,
    value_column: &str,
    label: &str,
) -> Result<Series> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(source);

    let headers = reader
        .headers()
        .map_err(|e| Error::MalformedCsv {
            row: 0,
            reason: e.to_string(),
        })?
        .clone();
    let find = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MissingColumn {
                name: name.to_string(),
            })
    };
    find(date_column)?;
    let value_idx = find(value_column)?;

    let mut values = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| Error::MalformedCsv {
            row,
            reason: e.to_string(),
        })?;
        let cell = record.get(value_idx).ok_or_else(|| Error::MalformedCsv {
            row,
            reason: format!("missing field {value_idx}"),
        })?;
        let value: f64 = cell.parse().map_err(|_| Error::MalformedCsv {
            row,
            reason: format!("unparseable value {cell:?}"),
        })?;
        if !value.is_finite() {
            return Err(Error::MalformedCsv {
                row,
                reason: format!("non-finite value {cell:?}"),
            });
        }
        if value <= 0.0 {
            return Err(Error::NonPositivePrice { row, value });
        }
        values.push(value);
    }
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(Series::new(label, SeriesKind::Prices, values))
}

/// Logarithmic returns `r[t] = ln P[t+lag] - ln P[t]`.
///
/// Output has length `len - lag` and kind [`SeriesKind::LogReturns`].
pub fn log_returns(series: &Series, lag: usize) -> Result<Series> {
    if series.kind != SeriesKind::Prices {
        return Err(Error::WrongKind {
            expected: "Prices",
            actual: series.kind,
        });
    }
    if lag == 0 || lag >= series.len() {
        return Err(Error::LagTooLarge {
            lag,
            len: series.len(),
        });
    }
    let p = &series.values;
    let values = (0..p.len() - lag)
        .map(|t| p[t + lag].ln() - p[t].ln())
        .collect();
    Ok(Series::new(
        series.label.clone(),
        SeriesKind::LogReturns,
        values,
    ))
}

/// Mean-centered cumulative profile `y[i] = sum_{k<=i} (x[k] - mean(x))`.
///
/// Accepts returns or synthetic data. Compensated summation keeps the
/// telescoped final element within a few ulps of zero regardless of length.
pub fn profile(series: &Series) -> Result<Vec<f64>> {
    if series.kind == SeriesKind::Prices {
        return Err(Error::WrongKind {
            expected: "LogReturns or Synthetic",
            actual: series.kind,
        });
    }
    if series.is_empty() {
        return Err(Error::EmptyInput);
    }
    let m = stats::mean(&series.values);
    // Neumaier-compensated running sum of (x - m).
    let mut out = Vec::with_capacity(series.len());
    let mut sum = 0.0;
    let mut comp = 0.0;
    for &x in &series.values {
        let v = x - m;
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
        out.push(sum + comp);
    }
    Ok(out)
}

/// Writes a series as two-column TSV `index\tvalue` with 17 significant
/// digits, enough for bit-exact round-tripping of every finite f64.
pub fn write_tsv<W: io::Write>(series: &Series, mut sink: W) -> Result<()> {
    for (i, v) in series.values.iter().enumerate() {
        writeln!(sink, "{i}\t{v:.16e}")?;
    }
    Ok(())
}

/// Reads the TSV format produced by [`write_tsv`]. The result is tagged
/// [`SeriesKind::Synthetic`]: generated and surrogate data travel as TSV.
pub fn read_tsv<R: io::Read>(source: R, label: &str) -> Result<Series> {
    let mut values = Vec::new();
    let text = io::read_to_string(source)?;
    for (i, line) in text.lines().enumerate() {
        let row = i + 1;
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split('\t');
        let (idx, val) = match (fields.next(), fields.next(), fields.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(Error::MalformedCsv {
                    row,
                    reason: "expected two tab-separated fields".into(),
                })
            }
        };
        let _: usize = idx.parse().map_err(|_| Error::MalformedCsv {
            row,
            reason: format!("bad index {idx:?}"),
        })?;
        let value: f64 = val.parse().map_err(|_| Error::MalformedCsv {
            row,
            reason: format!("unparseable value {val:?}"),
        })?;
        if !value.is_finite() {
            return Err(Error::MalformedCsv {
                row,
                reason: format!("non-finite value {val:?}"),
            });
        }
        values.push(value);
    }
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(Series::new(label, SeriesKind::Synthetic, values))
}
