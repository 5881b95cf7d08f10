//! Line-oriented text format for metric specifications.
//!
//! ```text
//! # comment
//! dim = 4
//! coords = x,u,v,y
//! g[0][0] = -1/3*u^3
//! g[0][3] = 1
//! g[1][2] = 1
//! ```
//!
//! Entries require `i <= j`; the symmetric entry is auto-filled and
//! unspecified entries are zero.

use thiserror::Error;

use crate::matrix::PolyMatrix;
use crate::metric::{MetricError, MetricSpec};
use crate::parse::poly_parse;
use crate::vars::VarTable;

#[derive(Debug, Error)]
pub enum MetricTextError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error(transparent)]
    Metric(#[from] MetricError),
}

fn err(line: usize, message: impl Into<String>) -> MetricTextError {
    MetricTextError::Line {
        line,
        message: message.into(),
    }
}

/// Parse the metric text format into a validated [`MetricSpec`].
pub fn parse_metric_text(text: &str) -> Result<MetricSpec, MetricTextError> {
    let mut dim: Option<usize> = None;
    let mut table: Option<VarTable> = None;
    let mut g: Option<PolyMatrix> = None;
    let mut seen: Vec<(usize, usize)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (lhs, rhs) = line
            .split_once('=')
            .ok_or_else(|| err(line_no, "expected `name = value`"))?;
        let lhs = lhs.trim();
        let rhs = rhs.trim();
        if lhs == "dim" {
            if dim.is_some() {
                return Err(err(line_no, "duplicate `dim` line"));
            }
            let k: usize = rhs
                .parse()
                .map_err(|_| err(line_no, format!("invalid dimension `{rhs}`")))?;
            if k == 0 {
                return Err(err(line_no, "dimension must be positive"));
            }
            dim = Some(k);
        } else if lhs == "coords" {
            let k = dim.ok_or_else(|| err(line_no, "`coords` must follow `dim`"))?;
            if table.is_some() {
                return Err(err(line_no, "duplicate `coords` line"));
            }
            let names: Vec<&str> = rhs.split(',').map(str::trim).collect();
            if names.len() != k {
                return Err(err(
                    line_no,
                    format!("expected {k} coordinates, found {}", names.len()),
                ));
            }
            let t = VarTable::coordinates(&names)
                .map_err(|e| err(line_no, e.to_string()))?;
            g = Some(PolyMatrix::zero(&t, k));
            table = Some(t);
        } else if let Some(rest) = lhs.strip_prefix("g[") {
            let t = table
                .as_ref()
                .ok_or_else(|| err(line_no, "metric entries must follow `coords`"))?;
            let k = dim.unwrap();
            let (i_str, rest) = rest
                .split_once("][")
                .ok_or_else(|| err(line_no, "expected `g[i][j] = expr`"))?;
            let j_str = rest
                .strip_suffix(']')
                .ok_or_else(|| err(line_no, "expected `g[i][j] = expr`"))?;
            let i: usize = i_str
                .trim()
                .parse()
                .map_err(|_| err(line_no, format!("invalid index `{i_str}`")))?;
            let j: usize = j_str
                .trim()
                .parse()
                .map_err(|_| err(line_no, format!("invalid index `{j_str}`")))?;
            if i >= k || j >= k {
                return Err(err(line_no, format!("index ({i},{j}) out of range for dim {k}")));
            }
            if i > j {
                return Err(err(line_no, format!("entries require i <= j, got ({i},{j})")));
            }
            if seen.contains(&(i, j)) {
                return Err(err(line_no, format!("duplicate entry g[{i}][{j}]")));
            }
            let p = poly_parse(rhs, t).map_err(|e| err(line_no, e.to_string()))?;
            let matrix = g.as_mut().unwrap();
            *matrix.get_mut(i, j) = p.clone();
            if i != j {
                *matrix.get_mut(j, i) = p;
            }
            seen.push((i, j));
        } else {
            return Err(err(line_no, format!("unrecognized line `{line}`")));
        }
    }

    let table = table.ok_or_else(|| err(text.lines().count() + 1, "missing `coords` line"))?;
    let g = g.unwrap();
    Ok(MetricSpec::from_matrix(table, g, None)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_g2_round_trip() {
        let text = "# the order-2 example metric\ndim = 4\ncoords = x,u,v,y\ng[0][0] = -1/3*u^3\ng[0][3] = 1\ng[1][2] = 1\n";
        let m = parse_metric_text(text).unwrap();
        assert_eq!(m.dim(), 4);
        assert_eq!(m.signature(), (2, 2));
        let round = parse_metric_text(&m.to_text()).unwrap();
        assert_eq!(&round, &m);
    }

    #[test]
    fn reports_line_numbers() {
        let text = "dim = 2\ncoords = u,v\ng[1][0] = 1\n";
        match parse_metric_text(text) {
            Err(MetricTextError::Line { line, message }) => {
                assert_eq!(line, 3);
                assert!(message.contains("i <= j"), "{message}");
            }
            other => panic!("expected line error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_unknown_identifier_in_entry() {
        let text = "dim = 2\ncoords = u,v\ng[0][0] = w\n";
        match parse_metric_text(text) {
            Err(MetricTextError::Line { line, message }) => {
                assert_eq!(line, 3);
                assert!(message.contains('w'));
            }
            other => panic!("expected line error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_oversized_dimension() {
        let coords: Vec<String> = (0..17).map(|i| format!("c{i}")).collect();
        let mut text = format!("dim = 17\ncoords = {}\n", coords.join(","));
        for i in 0..17 {
            text.push_str(&format!("g[{i}][{i}] = 1\n"));
        }
        match parse_metric_text(&text) {
            Err(MetricTextError::Metric(MetricError::DimensionTooLarge(17))) => {}
            other => panic!("expected dimension error, got {other:?}"),
        }
    }

    #[test]
    fn surfaces_non_constant_determinant() {
        let text = "dim = 2\ncoords = u,v\ng[0][0] = u\ng[1][1] = 1\n";
        match parse_metric_text(text) {
            Err(MetricTextError::Metric(MetricError::NonConstantDeterminant(d))) => {
                assert_eq!(d, "u");
            }
            other => panic!("expected metric error, got {other:?}"),
        }
    }
}
