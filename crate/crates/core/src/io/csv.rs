//! MSD curve tables: `iteration,msd_<name>,...` with one row per iteration.

use std::io::Write;

use crate::error::{Error, Result};
use crate::experiment::MsdCurve;

/// Curves read back from a CSV file.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveTable {
    /// Algorithm names, without the `msd_` prefix.
    pub names: Vec<String>,
    /// One-based iteration numbers.
    pub iterations: Vec<usize>,
    /// `columns[a][k]` is algorithm `a` at row `k`.
    pub columns: Vec<Vec<f64>>,
}

impl CurveTable {
    pub fn len(&self) -> usize {
        self.iterations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.iterations.is_empty()
    }
}

/// 17 significant digits, enough to recover every `f64` exactly.
fn format_value(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v:.16e}")
    }
}

pub fn write_curve_csv<W: Write>(curves: &[MsdCurve], mut out: W) -> Result<()> {
    let len = curves.first().map_or(0, |c| c.values.len());
    if let Some(c) = curves.iter().find(|c| c.values.len() != len) {
        return Err(Error::Dimension {
            expected: len,
            actual: c.values.len(),
        });
    }
    let mut header = String::from("iteration");
    for c in curves {
        header.push_str(",msd_");
        header.push_str(&c.name);
    }
    writeln!(out, "{header}")?;
    let mut row = String::new();
    for k in 0..len {
        row.clear();
        row.push_str(&(k + 1).to_string());
        for c in curves {
            row.push(',');
            row.push_str(&format_value(c.values[k]));
        }
        writeln!(out, "{row}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn curve_csv_string(curves: &[MsdCurve]) -> Result<String> {
    let mut buf = Vec::new();
    write_curve_csv(curves, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is ascii"))
}

/// Parses a curve table. Rows are numbered from 1 for the header.
pub fn read_curve_csv(text: &str) -> Result<CurveTable> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let Some((_, header)) = lines.next() else {
        return Err(Error::Csv {
            row: 1,
            reason: "missing header".into(),
        });
    };
    let mut fields = header.split(',').map(str::trim);
    if fields.next() != Some("iteration") {
        return Err(Error::Csv {
            row: 1,
            reason: "first column must be `iteration`".into(),
        });
    }
    let names = fields
        .map(|f| {
            f.strip_prefix("msd_")
                .filter(|n| !n.is_empty())
                .map(str::to_string)
                .ok_or_else(|| Error::Csv {
                    row: 1,
                    reason: format!("column `{f}` is not of the form msd_<name>"),
                })
        })
        .collect::<Result<Vec<_>>>()?;
    if names.is_empty() {
        return Err(Error::Csv {
            row: 1,
            reason: "no msd columns".into(),
        });
    }

    let mut table = CurveTable {
        columns: vec![Vec::new(); names.len()],
        names,
        iterations: Vec::new(),
    };
    for (idx, line) in lines {
        let row = idx + 1;
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != table.names.len() + 1 {
            return Err(Error::Csv {
                row,
                reason: format!(
                    "expected {} fields, found {}",
                    table.names.len() + 1,
                    fields.len()
                ),
            });
        }
        let iteration = fields[0].parse::<usize>().map_err(|_| Error::Csv {
            row,
            reason: format!("bad iteration `{}`", fields[0]),
        })?;
        table.iterations.push(iteration);
        for (col, field) in table.columns.iter_mut().zip(&fields[1..]) {
            let v = field.parse::<f64>().map_err(|_| Error::Csv {
                row,
                reason: format!("bad value `{field}`"),
            })?;
            col.push(v);
        }
    }
    if table.is_empty() {
        return Err(Error::Csv {
            row: 2,
            reason: "no data rows".into(),
        });
    }
    Ok(table)
}
