//! Isolation-database text files.
//!
//! A `key=value` provenance header, one per line, followed by one record per
//! region pair:
//!
//! ```text
//! # geoduplex isolation database
//! map_id=two-building seed 0
//! attenuation_model=...
//! detection_threshold_db=120
//! band_width_m=150
//! admission_threshold_db=100
//! sampling_step_m=25
//! split=2
//! pairs=8
//! k=1 alpha_db=140 a=600,650,950,1100 b=600,650,0,50
//! ```
//!
//! Rectangles are `x_min,x_max,y_min,y_max` in meters.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use geoduplex_core::region::Provenance;
use geoduplex_core::{ExtractionParams, IsolationDatabase, Rect, RegionPair};

use crate::error::{read_file, write_file, Error, Result};

const MAGIC: &str = "# geoduplex isolation database";

pub fn format_database(db: &IsolationDatabase) -> String {
    let p = db.provenance();
    let mut s = String::new();
    let _ = writeln!(s, "{MAGIC}");
    let _ = writeln!(s, "map_id={}", p.map_id);
    let _ = writeln!(s, "attenuation_model={}", p.attenuation_model);
    let _ = writeln!(s, "detection_threshold_db={}", p.params.detection_threshold_db);
    let _ = writeln!(s, "band_width_m={}", p.params.band_width_m);
    let _ = writeln!(s, "admission_threshold_db={}", p.params.admission_threshold_db);
    let _ = writeln!(s, "sampling_step_m={}", p.params.sampling_step_m);
    let _ = writeln!(s, "split={}", p.params.split);
    let _ = writeln!(s, "pairs={}", db.len());
    let rect = |r: &Rect| format!("{},{},{},{}", r.x_min, r.x_max, r.y_min, r.y_max);
    for pair in db.pairs() {
        let _ = writeln!(
            s,
            "k={} alpha_db={} a={} b={}",
            pair.k,
            pair.alpha_db,
            rect(&pair.region_a),
            rect(&pair.region_b)
        );
    }
    s
}

fn parse_rect(line: usize, entry: usize, field: &str, v: &str) -> Result<Rect> {
    let parts: Vec<&str> = v.split(',').collect();
    let nums: Option<Vec<f64>> = parts.iter().map(|p| p.trim().parse().ok()).collect();
    match nums {
        Some(n) if n.len() == 4 => Ok(Rect::new(n[0], n[1], n[2], n[3])),
        _ => Err(Error::parse(
            line,
            format!("entry {entry}: field {field} must be x_min,x_max,y_min,y_max, got {v:?}"),
        )),
    }
}

pub fn parse_database(text: &str) -> Result<IsolationDatabase> {
    let mut header: BTreeMap<String, (usize, String)> = BTreeMap::new();
    let mut pairs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        if l.starts_with("k=") {
            let entry = pairs.len() + 1;
            let mut fields: BTreeMap<&str, &str> = BTreeMap::new();
            for tok in l.split_whitespace() {
                let (k, v) = tok.split_once('=').ok_or_else(|| {
                    Error::parse(line, format!("entry {entry}: token {tok:?} is not key=value"))
                })?;
                if fields.insert(k, v).is_some() {
                    return Err(Error::parse(line, format!("entry {entry}: field {k} repeated")));
                }
            }
            let get = |f: &str| {
                fields
                    .get(f)
                    .copied()
                    .ok_or_else(|| Error::parse(line, format!("entry {entry}: missing field {f}")))
            };
            let k: usize = get("k")?
                .parse()
                .map_err(|_| Error::parse(line, format!("entry {entry}: field k is not an integer")))?;
            let alpha: f64 = get("alpha_db")?
                .parse()
                .map_err(|_| Error::parse(line, format!("entry {entry}: field alpha_db is not a number")))?;
            let a = parse_rect(line, entry, "a", get("a")?)?;
            let b = parse_rect(line, entry, "b", get("b")?)?;
            if let Some(extra) = fields.keys().find(|f| !["k", "alpha_db", "a", "b"].contains(f)) {
                return Err(Error::parse(line, format!("entry {entry}: unknown field {extra}")));
            }
            pairs.push((
                line,
                RegionPair {
                    k,
                    region_a: a,
                    region_b: b,
                    alpha_db: alpha,
                },
            ));
        } else {
            if !pairs.is_empty() {
                return Err(Error::parse(line, "header line after the first entry"));
            }
            let (k, v) = l
                .split_once('=')
                .ok_or_else(|| Error::parse(line, format!("expected key=value, got {l:?}")))?;
            header.insert(k.trim().to_string(), (line, v.to_string()));
        }
    }

    let text_field = |key: &str| -> Result<String> {
        header
            .get(key)
            .map(|(_, v)| v.clone())
            .ok_or_else(|| Error::parse(0, format!("header field {key} is missing")))
    };
    let num_field = |key: &str| -> Result<f64> {
        let (line, v) = header
            .get(key)
            .ok_or_else(|| Error::parse(0, format!("header field {key} is missing")))?;
        v.trim()
            .parse()
            .map_err(|_| Error::parse(*line, format!("header field {key}: {v:?} is not a number")))
    };
    let split = num_field("split")?;
    let params = ExtractionParams {
        detection_threshold_db: num_field("detection_threshold_db")?,
        band_width_m: num_field("band_width_m")?,
        admission_threshold_db: num_field("admission_threshold_db")?,
        sampling_step_m: num_field("sampling_step_m")?,
        split: if split == 1.0 || split == 2.0 { split as u8 } else { 0 },
    };
    params.validate()?;
    if header.contains_key("pairs") {
        let declared = num_field("pairs")?;
        if declared != pairs.len() as f64 {
            return Err(Error::parse(
                header["pairs"].0,
                format!("header declares {declared} pairs, file has {}", pairs.len()),
            ));
        }
    }
    let provenance = Provenance {
        map_id: text_field("map_id")?,
        attenuation_model: text_field("attenuation_model")?,
        params,
    };
    let lines: Vec<usize> = pairs.iter().map(|(l, _)| *l).collect();
    IsolationDatabase::new(pairs.into_iter().map(|(_, p)| p).collect(), provenance).map_err(|e| {
        // point at the offending record when the message names one
        let msg = e.to_string();
        let line = msg
            .split("entry ")
            .nth(1)
            .and_then(|r| r.split(|c: char| !c.is_ascii_digit()).next())
            .and_then(|n| n.parse::<usize>().ok())
            .and_then(|n| lines.get(n.wrapping_sub(1)).copied())
            .unwrap_or(0);
        Error::parse(line, msg)
    })
}

pub fn load_database(path: &Path) -> Result<IsolationDatabase> {
    parse_database(&read_file(path)?).map_err(|e| Error::in_file(path, e))
}

pub fn save_database(db: &IsolationDatabase, path: &Path) -> Result<()> {
    write_file(path, &format_database(db))
}
