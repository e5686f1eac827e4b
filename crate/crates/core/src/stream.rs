//! CSV stream files: a time column followed by one column per dimension.
//!
//! The header row is optional and detected by whether the first row parses
//! as numbers.

use std::path::Path;

use crate::error::{LtcError, Result};
use crate::geometry::{Sample, TransmittedPoint};

#[derive(Debug, Clone, PartialEq)]
pub struct StreamFile {
    /// Full header row including the time column, if the file had one.
    pub header: Option<Vec<String>>,
    pub samples: Vec<Sample>,
}

impl StreamFile {
    pub fn new(header: Option<Vec<String>>, samples: Vec<Sample>) -> Self {
        StreamFile { header, samples }
    }

    /// Number of value columns.
    pub fn dim(&self) -> usize {
        self.samples
            .first()
            .map(Sample::dim)
            .or_else(|| self.header.as_ref().map(|h| h.len().saturating_sub(1)))
            .unwrap_or(0)
    }

    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    /// Resolves a column selector to a value-column index. Accepts a header
    /// name, a 0-based index, or `x`/`y`/`z` for the first three columns.
    pub fn column_index(&self, selector: &str) -> Result<usize> {
        let n = self.dim();
        let sel = selector.trim();
        if let Some(h) = &self.header {
            if let Some(i) = h.iter().skip(1).position(|c| c.trim() == sel) {
                return Ok(i);
            }
        }
        let idx = match sel {
            "x" => Some(0),
            "y" => Some(1),
            "z" => Some(2),
            _ => sel.parse::<usize>().ok(),
        };
        match idx {
            Some(i) if i < n => Ok(i),
            _ => Err(LtcError::invalid(format!(
                "unknown column '{sel}' (stream has {n} value columns)"
            ))),
        }
    }

    /// Keeps only the selected value columns, in the given order.
    pub fn select(&self, selectors: &[String]) -> Result<StreamFile> {
        if selectors.is_empty() {
            return Err(LtcError::invalid("no columns selected"));
        }
        let idx = selectors
            .iter()
            .map(|s| self.column_index(s))
            .collect::<Result<Vec<_>>>()?;
        let header = self.header.as_ref().map(|h| {
            std::iter::once(h[0].clone())
                .chain(idx.iter().map(|&i| h[i + 1].clone()))
                .collect()
        });
        let samples = self
            .samples
            .iter()
            .map(|s| Sample::new(s.t, idx.iter().map(|&i| s.x[i]).collect::<Vec<_>>()))
            .collect();
        Ok(StreamFile { header, samples })
    }

    pub fn to_csv(&self) -> String {
        let rows = self.samples.iter().map(|s| (s.t, s.x.as_slice()));
        write_rows(self.header.as_deref(), rows)
    }
}

pub fn parse_stream(path: impl AsRef<Path>) -> Result<StreamFile> {
    let text = std::fs::read_to_string(path.as_ref())
        .map_err(|e| LtcError::Io(format!("{}: {e}", path.as_ref().display())))?;
    parse_stream_str(&text)
}

pub fn parse_stream_str(text: &str) -> Result<StreamFile> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let mut header = None;
    let mut samples: Vec<Sample> = Vec::new();
    let mut arity: Option<usize> = None;
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| LtcError::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(i + 1, |p| p.line() as usize);
        let cells: Vec<&str> = record.iter().collect();
        let parsed: Vec<Option<f64>> = cells.iter().map(|c| c.parse::<f64>().ok()).collect();

        if i == 0 && parsed.iter().any(Option::is_none) {
            if cells.len() < 2 {
                return Err(LtcError::Parse {
                    line,
                    message: "need a time column and at least one value column".into(),
                });
            }
            arity = Some(cells.len());
            header = Some(cells.iter().map(|c| c.to_string()).collect());
            continue;
        }

        let expected = *arity.get_or_insert(cells.len());
        if cells.len() != expected {
            return Err(LtcError::Parse {
                line,
                message: format!("expected {expected} columns, found {}", cells.len()),
            });
        }
        if expected < 2 {
            return Err(LtcError::Parse {
                line,
                message: "need a time column and at least one value column".into(),
            });
        }
        let mut values = Vec::with_capacity(expected);
        for (cell, v) in cells.iter().zip(&parsed) {
            match v {
                Some(v) if v.is_finite() => values.push(*v),
                _ => {
                    return Err(LtcError::Parse {
                        line,
                        message: format!("not a finite number: '{cell}'"),
                    })
                }
            }
        }
        let t = values.remove(0);
        if let Some(prev) = samples.last() {
            if !(t > prev.t) {
                return Err(LtcError::Parse {
                    line,
                    message: format!("non-monotone timestamp {t} after {}", prev.t),
                });
            }
        }
        samples.push(Sample::new(t, values));
    }
    Ok(StreamFile { header, samples })
}

/// Reads a file of transmitted points (same schema as a stream file).
pub fn parse_transmitted(path: impl AsRef<Path>) -> Result<Vec<TransmittedPoint>> {
    Ok(parse_stream(path)?
        .samples
        .iter()
        .map(TransmittedPoint::from)
        .collect())
}

pub fn transmitted_to_csv(header: Option<&[String]>, tx: &[TransmittedPoint]) -> String {
    write_rows(header, tx.iter().map(|p| (p.tau, p.xi.as_slice())))
}

pub fn write_rows<'a>(
    header: Option<&[String]>,
    rows: impl IntoIterator<Item = (f64, &'a [f64])>,
) -> String {
    let mut out = String::new();
    if let Some(h) = header {
        out.push_str(&h.join(","));
        out.push('\n');
    }
    for (t, xs) in rows {
        out.push_str(&t.to_string());
        for x in xs {
            out.push(',');
            out.push_str(&x.to_string());
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_is_optional() {
        let a = parse_stream_str("t,x\n0,1\n1,2\n").unwrap();
        let b = parse_stream_str("0,1\n1,2\n").unwrap();
        assert_eq!(a.samples, b.samples);
        assert_eq!(a.samples.len(), 2);
        assert_eq!(a.dim(), 1);
        assert_eq!(a.header, Some(vec!["t".to_string(), "x".to_string()]));
        assert_eq!(b.header, None);
    }

    #[test]
    fn non_monotone_time_names_the_line() {
        let err = parse_stream_str("0,1\n0,2\n").unwrap_err();
        assert_eq!(
            err,
            LtcError::Parse {
                line: 2,
                message: "non-monotone timestamp 0 after 0".into()
            }
        );
        let err = parse_stream_str("t,x\n0,1\n2,2\n1,3\n").unwrap_err();
        assert!(matches!(err, LtcError::Parse { line: 4, .. }));
    }

    #[test]
    fn ragged_and_non_numeric_rows() {
        assert!(matches!(
            parse_stream_str("0,1,2\n1,2\n").unwrap_err(),
            LtcError::Parse { line: 2, .. }
        ));
        assert!(matches!(
            parse_stream_str("t,x\n0,1\n1,abc\n").unwrap_err(),
            LtcError::Parse { line: 3, .. }
        ));
        assert!(matches!(
            parse_stream_str("0,1\n1,NaN\n").unwrap_err(),
            LtcError::Parse { line: 2, .. }
        ));
        assert!(parse_stream_str("0\n1\n").is_err());
    }

    #[test]
    fn column_selection() {
        let f = parse_stream_str("t,ax,ay,az\n0,1,2,3\n1,4,5,6\n").unwrap();
        let xy = f.select(&["x".into(), "y".into()]).unwrap();
        assert_eq!(xy.samples[1].x, vec![4., 5.]);
        assert_eq!(xy.header.as_ref().unwrap(), &["t", "ax", "ay"]);
        let zx = f.select(&["az".into(), "0".into()]).unwrap();
        assert_eq!(zx.samples[0].x, vec![3., 1.]);
        assert!(f.select(&["w".into()]).is_err());
        assert!(f.select(&["3".into()]).is_err());
        assert!(f.select(&[]).is_err());
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let f = StreamFile::new(
            Some(vec!["t".into(), "x".into(), "y".into()]),
            vec![
                Sample::new(0.0, vec![0.1, -1e-300]),
                Sample::new(0.02, vec![1.0 / 3.0, 12345.678]),
            ],
        );
        let text = f.to_csv();
        assert_eq!(parse_stream_str(&text).unwrap(), f);
    }
}
