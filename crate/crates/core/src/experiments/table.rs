use std::fmt::Write as _;
use std::io;

use nalgebra::DVector;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::format::fixed;
use crate::mappings::{halving, ContractiveLike};
use crate::schemes::{run, InnerSolverConfig, Schedule, Scheme};
use crate::wspace::{Euclidean, Space};

/// Column order of the comparison table.
pub const COLUMNS: [Scheme; 3] = [Scheme::ImplicitMann, Scheme::ImplicitIshikawa, Scheme::ImplicitS];

/// The published table for `Tx = x/2`, `x₁ = 1`: `(n, IMI, III, ISI)`.
pub const PAPER_ROWS: [(usize, [&str; 3]); 14] = [
    (2, ["0.666666666666667", "0.615384615384615", "0.307692307692308"]),
    (5, ["0.406349206349206", "0.352704628530670", "0.022044039283167"]),
    (7, ["0.340992340992341", "0.292145335107371", "0.004564770861053"]),
    (10, ["0.283773192751521", "0.240691952056443", "0.000470101468860"]),
    (13, ["0.248169351176485", "0.209336831746067", "0.000051107624938"]),
    (16, ["0.223294138742407", "0.187699995568689", "0.000005728149279"]),
    (20, ["0.199408653447441", "0.167113839554526", "0.000000318744353"]),
    (25, ["0.178133771931084", "0.148920204678483", "0.000000008876336"]),
    (30, ["0.162477710197415", "0.135609685643003", "0.000000000252593"]),
    (35, ["0.150335628473559", "0.125328510781087", "0.000000000007295"]),
    (40, ["0.140563343828096", "0.117078595772533", "0.000000000000213"]),
    (43, ["0.135541774913220", "0.112847389889567", "0.000000000000026"]),
    (46, ["0.131022580805197", "0.109043978938918", "0.000000000000003"]),
    (50, ["0.125645129018549", "0.104523598655989", "0.000000000000000"]),
];

/// Digits used by the published table.
pub const PAPER_DIGITS: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TableRow {
    pub n: usize,
    /// `d(xₙ, p)` for IMI, III, ISI.
    pub values: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellMismatch {
    pub n: usize,
    pub scheme: Scheme,
    pub expected: String,
    /// `None` when the row is missing.
    pub actual: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonTable {
    pub rows: Vec<TableRow>,
}

impl ComparisonTable {
    pub fn row(&self, n: usize) -> Option<&TableRow> {
        self.rows.iter().find(|r| r.n == n)
    }

    /// Keeps only the rows that appear in the published table.
    pub fn paper_rows_only(&self) -> ComparisonTable {
        ComparisonTable {
            rows: self
                .rows
                .iter()
                .filter(|r| PAPER_ROWS.iter().any(|(n, _)| *n == r.n))
                .copied()
                .collect(),
        }
    }

    /// Compares every published cell after rounding to 15 decimals.
    pub fn verify_against_paper(&self) -> Vec<CellMismatch> {
        let mut out = Vec::new();
        for (n, cells) in PAPER_ROWS {
            let row = self.row(n);
            for (k, expected) in cells.iter().enumerate() {
                let actual = row.map(|r| fixed(r.values[k], PAPER_DIGITS));
                if actual.as_deref() != Some(*expected) {
                    out.push(CellMismatch {
                        n,
                        scheme: COLUMNS[k],
                        expected: (*expected).into(),
                        actual,
                    });
                }
            }
        }
        out
    }

    /// `n,imi,iii,isi` with a header row and LF line endings.
    pub fn write_csv<W: io::Write>(&self, digits: usize, out: W) -> csv::Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(["n", "imi", "iii", "isi"])?;
        for r in &self.rows {
            let mut rec = vec![r.n.to_string()];
            rec.extend(r.values.iter().map(|v| fixed(*v, digits)));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Aligned text table with the columns `n | IMI | III | ISI`.
    pub fn render(&self, digits: usize) -> String {
        let cells: Vec<[String; 4]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    r.n.to_string(),
                    fixed(r.values[0], digits),
                    fixed(r.values[1], digits),
                    fixed(r.values[2], digits),
                ]
            })
            .collect();
        let header = ["n".to_string(), "IMI".into(), "III".into(), "ISI".into()];
        let mut width = header.clone().map(|h| h.len());
        for row in &cells {
            for (w, c) in width.iter_mut().zip(row) {
                *w = (*w).max(c.len());
            }
        }
        let rule: String = {
            let mut s = String::from("+");
            for w in width {
                s.push_str(&"-".repeat(w + 2));
                s.push('+');
            }
            s
        };
        let mut out = String::new();
        let line = |out: &mut String, row: &[String; 4]| {
            out.push('|');
            for (c, w) in row.iter().zip(width) {
                let _ = write!(out, " {c:>w$} |");
            }
            out.push('\n');
        };
        out.push_str(&rule);
        out.push('\n');
        line(&mut out, &header);
        out.push_str(&rule);
        out.push('\n');
        for row in &cells {
            line(&mut out, row);
        }
        out.push_str(&rule);
        out.push('\n');
        out
    }
}

/// Runs the three schemes and tabulates `d(xₙ, p)` for `n = 1, …, n_max`.
pub fn comparison_table<S: Space>(
    space: &S,
    t: &ContractiveLike<S>,
    schedule: &Schedule,
    x0: &S::Point,
    n_max: usize,
    cfg: &InnerSolverConfig,
) -> Result<ComparisonTable> {
    let p = t
        .fixed_point()
        .ok_or_else(|| Error::Unsupported(format!("map `{}` has no known fixed point", t.name())))?;
    let mut columns = Vec::with_capacity(3);
    for scheme in COLUMNS {
        let trace = run(space, t, scheme, schedule, x0, n_max, cfg, Some(p)).map_err(|f| f.error)?;
        columns.push(trace.distances().expect("fixed point supplied"));
    }
    let rows = (0..n_max)
        .map(|i| TableRow {
            n: i + 1,
            values: [columns[0][i], columns[1][i], columns[2][i]],
        })
        .collect();
    Ok(ComparisonTable { rows })
}

/// The published experiment: `Tx = x/2` on the line, `x₁ = 1`,
/// `αₙ = βₙ = 1 − 1/n`, rows `n = 1, …, n_rows`.
pub fn reproduce_table(n_rows: usize) -> Result<ComparisonTable> {
    let space = Euclidean::new(1)?;
    let t = halving(1)?;
    comparison_table(
        &space,
        &t,
        &Schedule::paper_example(),
        &DVector::from_element(1, 1.0),
        n_rows,
        &InnerSolverConfig::default(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper_cells_reproduce() {
        let table = reproduce_table(50).unwrap();
        assert_eq!(table.verify_against_paper(), vec![]);
    }

    #[test]
    fn ordering_isi_iii_imi() {
        let table = reproduce_table(50).unwrap();
        for r in &table.rows {
            assert!(r.values[2] <= r.values[1] && r.values[1] <= r.values[0], "row {}", r.n);
        }
    }

    #[test]
    fn single_row() {
        let table = reproduce_table(1).unwrap();
        assert_eq!(table.rows, vec![TableRow { n: 1, values: [1.0; 3] }]);
        assert_eq!(table.verify_against_paper().len(), 42);
    }

    #[test]
    fn csv_and_text() {
        let table = reproduce_table(2).unwrap();
        let mut buf = Vec::new();
        table.write_csv(15, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "n,imi,iii,isi\n1,1.000000000000000,1.000000000000000,1.000000000000000\n\
             2,0.666666666666667,0.615384615384615,0.307692307692308\n"
        );
        let rendered = table.render(3);
        assert!(rendered.contains("| 2 | 0.667 | 0.615 | 0.308 |"));
    }
}
