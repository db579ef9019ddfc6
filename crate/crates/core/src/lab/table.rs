//! Classical versus quantum query counts.

use crate::error::{Error, Result};
use crate::grover::{classical_baselines, optimal_queries};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TableRow {
    pub size: usize,
    pub binary: u32,
    pub unsorted_mean: f64,
    pub quantum_q: usize,
    pub success: f64,
}

pub fn grover_table(sizes: &[usize]) -> Result<Vec<TableRow>> {
    if sizes.is_empty() {
        return Err(Error::InvalidParameter("table needs at least one size".into()));
    }
    sizes
        .iter()
        .map(|&n| {
            let c = classical_baselines(n)?;
            let (q, p) = optimal_queries(n, 1)?;
            Ok(TableRow {
                size: n,
                binary: c.binary_sorted,
                unsorted_mean: c.unsorted_mean_with_memory,
                quantum_q: q,
                success: p,
            })
        })
        .collect()
}

const COLUMNS: [&str; 5] = ["N", "binary", "unsorted_mean", "quantum_Q", "success"];

fn cells(r: &TableRow) -> [String; 5] {
    [
        r.size.to_string(),
        r.binary.to_string(),
        format!("{}", r.unsorted_mean),
        r.quantum_q.to_string(),
        format!("{:.6}", r.success),
    ]
}

pub fn render_csv(rows: &[TableRow]) -> String {
    let mut out = COLUMNS.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&cells(r).join(","));
        out.push('\n');
    }
    out
}

/// Right-aligned columns.
pub fn render_text(rows: &[TableRow]) -> String {
    let body: Vec<[String; 5]> = rows.iter().map(cells).collect();
    let mut widths = COLUMNS.map(str::len);
    for row in &body {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let line = |items: &[String]| {
        items
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
    };
    let mut out = line(&COLUMNS.map(String::from));
    out.push('\n');
    for row in &body {
        out.push_str(&line(row));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn published_rows() {
        let rows = grover_table(&[1, 4, 1_000_000]).unwrap();
        assert_eq!((rows[0].binary, rows[0].unsorted_mean, rows[0].quantum_q), (0, 1.0, 0));
        assert_eq!(rows[0].success, 1.0);
        assert_eq!((rows[1].binary, rows[1].unsorted_mean, rows[1].quantum_q), (2, 2.5, 1));
        assert!((rows[1].success - 1.0).abs() < 1e-12);
        let ideal = std::f64::consts::PI * 1000.0 / 4.0;
        assert!((rows[2].quantum_q as f64 / ideal - 1.0).abs() < 0.02);
        assert!(grover_table(&[]).is_err());
    }

    #[test]
    fn renders() {
        let rows = grover_table(&[4, 1024]).unwrap();
        let csv = render_csv(&rows);
        assert_eq!(csv.lines().next().unwrap(), "N,binary,unsorted_mean,quantum_Q,success");
        assert_eq!(csv.lines().nth(1).unwrap(), "4,2,2.5,1,1.000000");
        let text = render_text(&rows);
        let widths: Vec<usize> = text.lines().map(str::len).collect();
        assert!(widths.windows(2).all(|w| w[0] == w[1]));
    }
}
