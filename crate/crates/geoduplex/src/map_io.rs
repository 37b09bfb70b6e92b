//! Plain-text radio-map grids.
//!
//! ```text
//! origin_x origin_y
//! pixel_size
//! n_cols n_rows
//! bs_x bs_y
//! <n_rows lines of n_cols path-loss values, row 0 (south) first>
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Values are written
//! in shortest round-trip form, so save followed by load is exact.

use std::fmt::Write as _;
use std::path::Path;

use geoduplex_core::{Position, RadioMap};

use crate::error::{read_file, write_file, Error, Result};

fn numbers(line: usize, text: &str, want: usize, what: &str) -> Result<Vec<f64>> {
    let vals: Vec<&str> = text.split_whitespace().collect();
    if vals.len() != want {
        return Err(Error::parse(
            line,
            format!("expected {want} value(s) for {what}, found {}", vals.len()),
        ));
    }
    vals.iter()
        .map(|v| {
            v.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::parse(line, format!("{what}: {v:?} is not a finite number")))
        })
        .collect()
}

fn count(line: usize, v: f64, what: &str) -> Result<usize> {
    if v >= 1.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
        Ok(v as usize)
    } else {
        Err(Error::parse(line, format!("{what} must be a positive integer, got {v}")))
    }
}

pub fn parse_radio_map(text: &str) -> Result<RadioMap> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let mut header = |what: &str, want: usize| -> Result<(usize, Vec<f64>)> {
        let (n, l) = lines
            .next()
            .ok_or_else(|| Error::parse(0, format!("file ends before the {what} header line")))?;
        Ok((n, numbers(n, l, want, what)?))
    };
    let (_, origin) = header("origin", 2)?;
    let (ln, pixel) = header("pixel size", 1)?;
    if pixel[0] <= 0.0 {
        return Err(Error::parse(ln, format!("pixel size must be positive, got {}", pixel[0])));
    }
    let (ln, dims) = header("grid dimensions", 2)?;
    let n_cols = count(ln, dims[0], "n_cols")?;
    let n_rows = count(ln, dims[1], "n_rows")?;
    let (_, bs) = header("base station position", 2)?;

    let mut values = Vec::with_capacity(n_cols * n_rows);
    for row in 0..n_rows {
        let (n, l) = lines.next().ok_or_else(|| {
            Error::parse(0, format!("expected {n_rows} grid rows, found {row}"))
        })?;
        let cells: Vec<&str> = l.split_whitespace().collect();
        if cells.len() != n_cols {
            return Err(Error::parse(
                n,
                format!("grid row {row} has {} values, header declares {n_cols} columns", cells.len()),
            ));
        }
        for (col, c) in cells.iter().enumerate() {
            let v: f64 = c.parse().map_err(|_| {
                Error::parse(n, format!("grid row {row}, column {col}: {c:?} is not a number"))
            })?;
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::parse(
                    n,
                    format!("grid row {row}, column {col}: path loss {v} must be finite and non-negative"),
                ));
            }
            values.push(v);
        }
    }
    if let Some((n, _)) = lines.next() {
        return Err(Error::parse(n, format!("unexpected data after {n_rows} grid rows")));
    }
    Ok(RadioMap::new(
        Position::new(origin[0], origin[1]),
        pixel[0],
        n_cols,
        n_rows,
        values,
        Position::new(bs[0], bs[1]),
    )?)
}

pub fn format_radio_map(map: &RadioMap) -> String {
    let mut s = String::new();
    let o = map.origin();
    let bs = map.bs_position();
    let _ = writeln!(s, "{} {}", o.x, o.y);
    let _ = writeln!(s, "{}", map.pixel_size());
    let _ = writeln!(s, "{} {}", map.n_cols(), map.n_rows());
    let _ = writeln!(s, "{} {}", bs.x, bs.y);
    for row in map.values().chunks(map.n_cols()) {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(s, "{}", line.join(" "));
    }
    s
}

pub fn load_radio_map(path: &Path) -> Result<RadioMap> {
    parse_radio_map(&read_file(path)?).map_err(|e| Error::in_file(path, e))
}

pub fn save_radio_map(map: &RadioMap, path: &Path) -> Result<()> {
    write_file(path, &format_radio_map(map))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_BY_TWO: &str = "0 0\n50\n2 2\n10 10\n100 110\n120 130\n";

    #[test]
    fn hand_written_grid() {
        let map = parse_radio_map(TWO_BY_TWO).unwrap();
        assert_eq!(map.get(0, 0), Some(100.0));
        assert_eq!(map.get(1, 0), Some(110.0));
        assert_eq!(map.get(0, 1), Some(120.0));
        assert_eq!(map.get(1, 1), Some(130.0));
        assert_eq!(format_radio_map(&map), TWO_BY_TWO);
    }

    #[test]
    fn short_row_is_named() {
        let err = parse_radio_map("0 0\n50\n3 2\n0 0\n1 2 3\n4 5\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 6") && msg.contains("grid row 1"), "{msg}");
    }

    #[test]
    fn bad_cells_report_location() {
        let msg = parse_radio_map("0 0\n50\n2 1\n0 0\n1 x\n").unwrap_err().to_string();
        assert!(msg.contains("column 1"), "{msg}");
        let msg = parse_radio_map("0 0\n50\n2 1\n0 0\n1 -3\n").unwrap_err().to_string();
        assert!(msg.contains("non-negative"), "{msg}");
    }

    #[test]
    fn malformed_header() {
        assert!(parse_radio_map("0\n50\n2 1\n0 0\n1 1\n").is_err());
        assert!(parse_radio_map("0 0\n50\n2.5 1\n0 0\n1 1\n").is_err());
        assert!(parse_radio_map("0 0\n50\n2 2\n0 0\n1 1\n").is_err());
        assert!(parse_radio_map("0 0\n50\n1 1\n0 0\n1\n2\n").is_err());
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# map\n0 0\n\n50\n1 1\n0 0\n# values\n99.5\n";
        assert_eq!(parse_radio_map(text).unwrap().get(0, 0), Some(99.5));
    }
}
