//! Bivariate sample ingestion and validation.
//!
//! The canonical input is a plain CSV dialect: comma delimiter, decimal
//! point, optional single header row, no quoting. Values round-trip exactly
//! through [`BivariateSample::to_csv_string`] because floats are written in
//! shortest round-trip form.

use std::path::Path;

use crate::{Error, Result};

/// One observation of the pair (x, y). Both coordinates are finite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ObservationPair {
    pub x: f64,
    pub y: f64,
}

/// Duplicate-value counts per coordinate: the number of unordered pairs of
/// observations sharing an x value, and likewise for y.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TieReport {
    pub x_tie_count: u64,
    pub y_tie_count: u64,
}

impl TieReport {
    pub fn any(&self) -> bool {
        self.x_tie_count > 0 || self.y_tie_count > 0
    }
}

/// A validated bivariate sample: n ≥ 2, all values finite, observation
/// order preserved. Stored column-wise for the counting kernels. Immutable
/// after construction.
#[derive(Clone, Debug, PartialEq)]
pub struct BivariateSample {
    xs: Vec<f64>,
    ys: Vec<f64>,
    has_ties: bool,
}

impl BivariateSample {
    /// Builds a sample from (x, y) pairs, validating size and finiteness.
    /// Row/column coordinates in errors are 1-based.
    pub fn new(pairs: &[(f64, f64)]) -> Result<Self> {
        let xs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        Self::from_columns(xs, ys)
    }

    /// Builds a sample from two equal-length columns.
    pub fn from_columns(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        assert_eq!(xs.len(), ys.len(), "column lengths must match");
        if xs.len() < 2 {
            return Err(Error::TooFewRows(xs.len()));
        }
        for (i, (&x, &y)) in xs.iter().zip(&ys).enumerate() {
            if !x.is_finite() {
                return Err(Error::NonFinite { row: i + 1, column: 1 });
            }
            if !y.is_finite() {
                return Err(Error::NonFinite { row: i + 1, column: 2 });
            }
        }
        let has_ties = count_duplicate_pairs(&xs) > 0 || count_duplicate_pairs(&ys) > 0;
        Ok(Self { xs, ys, has_ties })
    }

    /// Reads a CSV file. `x_col`/`y_col` are 0-based column indices;
    /// error coordinates (row, column) are 1-based file positions.
    pub fn load_csv(path: &Path, has_header: bool, x_col: usize, y_col: usize) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse_csv(&text, has_header, x_col, y_col)
    }

    /// Parses CSV text; see [`BivariateSample::load_csv`].
    pub fn parse_csv(text: &str, has_header: bool, x_col: usize, y_col: usize) -> Result<Self> {
        let skip = usize::from(has_header);
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            if idx < skip {
                continue;
            }
            let row = idx + 1;
            let cells: Vec<&str> = line.split(',').collect();
            let needed = x_col.max(y_col) + 1;
            if cells.len() < needed {
                return Err(Error::MissingColumn {
                    row,
                    expected: needed,
                    found: cells.len(),
                });
            }
            xs.push(parse_cell(cells[x_col], row, x_col + 1)?);
            ys.push(parse_cell(cells[y_col], row, y_col + 1)?);
        }
        if xs.len() < 2 {
            return Err(Error::TooFewRows(xs.len()));
        }
        let has_ties = count_duplicate_pairs(&xs) > 0 || count_duplicate_pairs(&ys) > 0;
        Ok(Self { xs, ys, has_ties })
    }

    /// Serializes to the ingestion dialect (no header). Shortest
    /// round-trip float formatting: parsing the output reproduces the
    /// sample bit-for-bit.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        for (x, y) in self.xs.iter().zip(&self.ys) {
            out.push_str(&format!("{x},{y}\n"));
        }
        out
    }

    /// Writes [`BivariateSample::to_csv_string`] to a file.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv_string()).map_err(|source| Error::Write {
            path: path.to_path_buf(),
            source,
        })
    }

    /// Exact duplicate-value counts per coordinate. A value occurring m
    /// times contributes m(m−1)/2 unordered pairs.
    pub fn detect_ties(&self) -> TieReport {
        TieReport {
            x_tie_count: count_duplicate_pairs(&self.xs),
            y_tie_count: count_duplicate_pairs(&self.ys),
        }
    }

    /// True iff any two observations share an x value or any two share a y
    /// value (the continuous-data assumption is violated).
    pub fn has_ties(&self) -> bool {
        self.has_ties
    }

    pub fn n(&self) -> usize {
        self.xs.len()
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    /// The pair at 0-based index `j`.
    pub fn pair(&self, j: usize) -> Option<ObservationPair> {
        (j < self.n()).then(|| ObservationPair {
            x: self.xs[j],
            y: self.ys[j],
        })
    }

    pub fn pairs(&self) -> impl Iterator<Item = ObservationPair> + '_ {
        self.xs
            .iter()
            .zip(&self.ys)
            .map(|(&x, &y)| ObservationPair { x, y })
    }
}

fn parse_cell(cell: &str, row: usize, column: usize) -> Result<f64> {
    let trimmed = cell.trim();
    let value: f64 = trimmed.parse().map_err(|_| Error::ParseCell {
        row,
        column,
        content: trimmed.to_string(),
    })?;
    if !value.is_finite() {
        return Err(Error::NonFinite { row, column });
    }
    Ok(value)
}

/// Number of unordered pairs of equal values: Σ m·(m−1)/2 over value
/// multiplicities m.
fn count_duplicate_pairs(values: &[f64]) -> u64 {
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let mut pairs = 0u64;
    let mut run = 1u64;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            pairs += run * (run - 1) / 2;
            run = 1;
        }
    }
    pairs + run * (run - 1) / 2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_two_column_file() {
        let s = BivariateSample::parse_csv("1,1\n2,2", false, 0, 1).unwrap();
        assert_eq!(s.n(), 2);
        assert_eq!(s.pair(0), Some(ObservationPair { x: 1.0, y: 1.0 }));
        assert_eq!(s.pair(1), Some(ObservationPair { x: 2.0, y: 2.0 }));
    }

    #[test]
    fn skips_header_row() {
        let s = BivariateSample::parse_csv("x,y\n0.5,0.7\n0.1,0.9\n0.3,0.3", true, 0, 1).unwrap();
        assert_eq!(s.n(), 3);
        assert_eq!(s.pair(0), Some(ObservationPair { x: 0.5, y: 0.7 }));
    }

    #[test]
    fn reports_cell_coordinates_on_parse_failure() {
        let err = BivariateSample::parse_csv("1,abc", false, 0, 1).unwrap_err();
        match err {
            Error::ParseCell { row, column, .. } => {
                assert_eq!((row, column), (1, 2));
            }
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn rejects_single_row() {
        let err = BivariateSample::parse_csv("1,2", false, 0, 1).unwrap_err();
        assert!(matches!(err, Error::TooFewRows(1)));
    }

    #[test]
    fn rejects_non_finite_cells() {
        let err = BivariateSample::parse_csv("1,2\n3,inf", false, 0, 1).unwrap_err();
        assert!(matches!(err, Error::NonFinite { row: 2, column: 2 }));
        let err = BivariateSample::new(&[(1.0, 2.0), (f64::NAN, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::NonFinite { row: 2, column: 1 }));
    }

    #[test]
    fn reports_missing_columns() {
        let err = BivariateSample::parse_csv("1,2\n3", false, 0, 1).unwrap_err();
        assert!(matches!(err, Error::MissingColumn { row: 2, .. }));
    }

    #[test]
    fn selects_configured_columns() {
        let s = BivariateSample::parse_csv("9,1,5\n8,2,6", false, 2, 1).unwrap();
        assert_eq!(s.xs(), &[5.0, 6.0]);
        assert_eq!(s.ys(), &[1.0, 2.0]);
    }

    #[test]
    fn detect_ties_examples() {
        let all_distinct = BivariateSample::new(&[(1., 1.), (2., 2.), (3., 3.)]).unwrap();
        assert_eq!(
            all_distinct.detect_ties(),
            TieReport { x_tie_count: 0, y_tie_count: 0 }
        );
        assert!(!all_distinct.has_ties());

        let one_x_dup = BivariateSample::new(&[(1., 5.), (1., 7.)]).unwrap();
        assert_eq!(
            one_x_dup.detect_ties(),
            TieReport { x_tie_count: 1, y_tie_count: 0 }
        );
        assert!(one_x_dup.has_ties());

        // three equal y values form C(3,2) = 3 unordered duplicate pairs
        let y_triple = BivariateSample::new(&[(1., 5.), (2., 5.), (3., 5.)]).unwrap();
        assert_eq!(
            y_triple.detect_ties(),
            TieReport { x_tie_count: 0, y_tie_count: 3 }
        );
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let vals = [
            (0.1, -3.7e-11),
            (1.0 / 3.0, 2.0f64.sqrt()),
            (f64::MIN_POSITIVE, 12345.678901234567),
        ];
        let s = BivariateSample::new(&vals).unwrap();
        let back = BivariateSample::parse_csv(&s.to_csv_string(), false, 0, 1).unwrap();
        assert_eq!(s, back);
    }

    #[test]
    fn load_csv_reports_missing_file() {
        let err =
            BivariateSample::load_csv(Path::new("/nonexistent/file.csv"), false, 0, 1).unwrap_err();
        assert!(matches!(err, Error::Read { .. }));
        assert!(err.is_input_error());
    }

    #[test]
    fn load_csv_reads_from_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("data.csv");
        std::fs::write(&path, "1,1\n2,2\n").unwrap();
        let s = BivariateSample::load_csv(&path, false, 0, 1).unwrap();
        assert_eq!(s.n(), 2);
    }
}
