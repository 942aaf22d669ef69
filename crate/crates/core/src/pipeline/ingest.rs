//! Reading and writing point files.
//!
//! JSONL: one object per line, `{"id": 7, "vec": [..], "color": 2}` or with
//! `"t": 1712.5` in place of `color`. CSV: a header `id`, then optionally `t`
//! or `color`, then `v0..v{d-1}`.

use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataset::{ColoredDataset, Point, PointId};
use crate::error::{Error, Result};
use crate::metric::Metric;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Jsonl,
    Csv,
}

impl Format {
    /// `.csv` means CSV; everything else is read as JSONL.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Jsonl,
        }
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "jsonl" | "json" => Ok(Format::Jsonl),
            "csv" => Ok(Format::Csv),
            other => Err(Error::input(format!("unknown format `{other}`"))),
        }
    }
}

/// How a record is assigned to a group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Label {
    Color(usize),
    Time(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawRecord {
    pub id: PointId,
    pub vec: Vec<f64>,
    pub label: Label,
}

#[derive(Deserialize)]
struct JsonRecord {
    id: PointId,
    vec: Vec<f64>,
    color: Option<usize>,
    t: Option<f64>,
}

#[derive(Serialize)]
struct JsonOut<'a> {
    id: PointId,
    vec: &'a [f64],
    color: usize,
}

pub fn ingest(path: &Path, format: Format) -> Result<Vec<RawRecord>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    ingest_reader(file, format, path)
}

/// Like [`ingest`] but from any reader; `path` is only used in error messages.
pub fn ingest_reader<R: Read>(reader: R, format: Format, path: &Path) -> Result<Vec<RawRecord>> {
    let records = match format {
        Format::Jsonl => read_jsonl(reader, path)?,
        Format::Csv => read_csv(reader, path)?,
    };
    if let Some(first) = records.first() {
        let dim = first.vec.len();
        let kind = std::mem::discriminant(&first.label);
        for (i, r) in records.iter().enumerate() {
            if r.vec.len() != dim {
                return Err(Error::input(format!(
                    "{}: record {} (id {}) has dimension {} but the first record has {dim}",
                    path.display(),
                    i + 1,
                    r.id,
                    r.vec.len()
                )));
            }
            if std::mem::discriminant(&r.label) != kind {
                return Err(Error::input(format!(
                    "{}: records mix colors and timestamps",
                    path.display()
                )));
            }
        }
    }
    Ok(records)
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn read_jsonl<R: Read>(reader: R, path: &Path) -> Result<Vec<RawRecord>> {
    let mut out = Vec::new();
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: JsonRecord =
            serde_json::from_str(&line).map_err(|e| parse_err(path, lineno, e.to_string()))?;
        let label = match (rec.color, rec.t) {
            (Some(c), None) => Label::Color(c),
            (None, Some(t)) if t.is_finite() => Label::Time(t),
            (None, Some(_)) => return Err(parse_err(path, lineno, "timestamp is not finite")),
            _ => return Err(parse_err(path, lineno, "exactly one of `color` and `t` is required")),
        };
        out.push(RawRecord {
            id: rec.id,
            vec: rec.vec,
            label,
        });
    }
    Ok(out)
}

fn read_csv<R: Read>(reader: R, path: &Path) -> Result<Vec<RawRecord>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| parse_err(path, 1, e.to_string()))?.clone();
    let names: Vec<&str> = headers.iter().collect();
    if names.first() != Some(&"id") {
        return Err(parse_err(path, 1, "first column must be `id`"));
    }
    let label_col = match names.get(1) {
        Some(&"t") => Some(false),
        Some(&"color") => Some(true),
        _ => None,
    };
    let first_v = if label_col.is_some() { 2 } else { 1 };
    for (j, name) in names[first_v..].iter().enumerate() {
        if *name != format!("v{j}") {
            return Err(parse_err(path, 1, format!("expected column `v{j}`, found `{name}`")));
        }
    }
    let Some(is_color) = label_col else {
        return Err(parse_err(path, 1, "a `t` or `color` column is required after `id`"));
    };

    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_err(path, line, e.to_string())
        })?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        let field = |j: usize| row.get(j).unwrap_or("");
        let id = field(0)
            .parse::<PointId>()
            .map_err(|_| parse_err(path, line, format!("bad id `{}`", field(0))))?;
        let label = if is_color {
            Label::Color(
                field(1)
                    .parse()
                    .map_err(|_| parse_err(path, line, format!("bad color `{}`", field(1))))?,
            )
        } else {
            let t: f64 = field(1)
                .parse()
                .map_err(|_| parse_err(path, line, format!("bad timestamp `{}`", field(1))))?;
            if !t.is_finite() {
                return Err(parse_err(path, line, "timestamp is not finite"));
            }
            Label::Time(t)
        };
        let vec = (first_v..row.len())
            .map(|j| {
                field(j)
                    .parse::<f64>()
                    .map_err(|_| parse_err(path, line, format!("bad coordinate `{}`", field(j))))
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(RawRecord { id, vec, label });
    }
    Ok(out)
}

/// Builds a dataset from records that carry explicit colors; `m` is the largest
/// color plus one unless given.
pub fn dataset_from_colors(records: Vec<RawRecord>, m: Option<usize>, metric: Metric) -> Result<ColoredDataset> {
    let mut points = Vec::with_capacity(records.len());
    for r in records {
        match r.label {
            Label::Color(c) => points.push(Point::new(r.id, r.vec, c)),
            Label::Time(_) => return Err(Error::input("record has a timestamp, not a color")),
        }
    }
    let m = m.unwrap_or_else(|| points.iter().map(|p| p.color + 1).max().unwrap_or(0));
    ColoredDataset::new(points, m, metric)
}

/// Colors records by splitting `[t_min, t_max]` into `m` equal intervals:
/// `color = floor(m·(t − t_min)/(t_max − t_min))`, with `t_max` itself going to `m − 1`.
pub fn assign_colors_by_time(records: Vec<RawRecord>, m: usize, metric: Metric) -> Result<ColoredDataset> {
    if m == 0 {
        return Err(Error::input("need at least one color"));
    }
    let mut times = Vec::with_capacity(records.len());
    for r in &records {
        match r.label {
            Label::Time(t) => times.push(t),
            Label::Color(_) => return Err(Error::input("record has a color, not a timestamp")),
        }
    }
    let lo = times.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = times.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi <= lo {
        return Err(Error::input("timestamps span an empty range"));
    }
    let points = records
        .into_iter()
        .zip(times)
        .map(|(r, t)| {
            let c = ((m as f64) * (t - lo) / (hi - lo)).floor() as usize;
            Point::new(r.id, r.vec, c.min(m - 1))
        })
        .collect();
    ColoredDataset::new(points, m, metric)
}

/// Dispatches on the record kind: explicit colors, or timestamps split into `m` colors.
pub fn into_dataset(records: Vec<RawRecord>, m: Option<usize>, metric: Metric) -> Result<ColoredDataset> {
    match records.first().map(|r| r.label) {
        Some(Label::Time(_)) => {
            let m = m.ok_or_else(|| Error::input("timestamped input needs a color count"))?;
            assign_colors_by_time(records, m, metric)
        }
        _ => dataset_from_colors(records, m, metric),
    }
}

/// Reads a file straight into a dataset.
pub fn load_dataset(path: &Path, format: Format, m: Option<usize>, metric: Metric) -> Result<ColoredDataset> {
    into_dataset(ingest(path, format)?, m, metric)
}

/// Writes points as JSONL with explicit colors, in dataset order.
pub fn write_jsonl<W: Write>(dataset: &ColoredDataset, mut out: W) -> std::io::Result<()> {
    for p in dataset.points() {
        let rec = JsonOut {
            id: p.id,
            vec: &p.vec,
            color: p.color,
        };
        serde_json::to_writer(&mut out, &rec)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

/// Writes points as CSV with a `color` column.
pub fn write_csv<W: Write>(dataset: &ColoredDataset, out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["id".to_string(), "color".to_string()];
    header.extend((0..dataset.dim()).map(|j| format!("v{j}")));
    w.write_record(&header)?;
    for p in dataset.points() {
        let mut row = vec![p.id.to_string(), p.color.to_string()];
        row.extend(p.vec.iter().map(|x| x.to_string()));
        w.write_record(&row)?;
    }
    w.flush()
}

pub fn write_dataset(dataset: &ColoredDataset, path: &Path, format: Format) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let out = std::io::BufWriter::new(file);
    match format {
        Format::Jsonl => write_jsonl(dataset, out),
        Format::Csv => write_csv(dataset, out),
    }
    .map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jsonl(text: &str) -> Result<Vec<RawRecord>> {
        ingest_reader(text.as_bytes(), Format::Jsonl, Path::new("mem.jsonl"))
    }

    fn csv(text: &str) -> Result<Vec<RawRecord>> {
        ingest_reader(text.as_bytes(), Format::Csv, Path::new("mem.csv"))
    }

    fn timed(ts: &[f64]) -> Vec<RawRecord> {
        ts.iter()
            .enumerate()
            .map(|(i, &t)| RawRecord {
                id: i as u64,
                vec: vec![0.0],
                label: Label::Time(t),
            })
            .collect()
    }

    #[test]
    fn explicit_colors_infer_m() {
        let recs = jsonl(
            "{\"id\":0,\"vec\":[0,1],\"color\":0}\n{\"id\":1,\"vec\":[2,3],\"color\":2}\n\n{\"id\":2,\"vec\":[4,5],\"color\":1}\n",
        )
        .unwrap();
        let ds = dataset_from_colors(recs, None, Metric::Euclidean).unwrap();
        assert_eq!(ds.num_colors(), 3);
        assert_eq!(ds.dim(), 2);
    }

    #[test]
    fn missing_vector_names_the_line() {
        let err = jsonl("{\"id\":0,\"vec\":[0],\"color\":0}\n{\"id\":1,\"color\":0}\n").unwrap_err();
        match err {
            Error::Parse { line, message, .. } => {
                assert_eq!(line, 2);
                assert!(message.contains("vec"), "{message}");
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn color_and_time_together_is_rejected() {
        let err = jsonl("{\"id\":0,\"vec\":[0],\"color\":0,\"t\":3}\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        assert!(jsonl("{\"id\":0,\"vec\":[0]}\n").is_err());
    }

    #[test]
    fn mixed_dimensions_are_rejected() {
        let err = jsonl("{\"id\":0,\"vec\":[0,1],\"color\":0}\n{\"id\":1,\"vec\":[0],\"color\":0}\n");
        assert!(err.is_err());
    }

    #[test]
    fn csv_with_timestamps() {
        let mut text = String::from("id,t");
        for j in 0..16 {
            text.push_str(&format!(",v{j}"));
        }
        text.push('\n');
        for i in 0..3 {
            text.push_str(&format!("{i},{}", i * 10));
            for j in 0..16 {
                text.push_str(&format!(",{}", i + j));
            }
            text.push('\n');
        }
        let recs = csv(&text).unwrap();
        assert_eq!(recs.len(), 3);
        assert_eq!(recs[0].vec.len(), 16);
        assert_eq!(recs[2].label, Label::Time(20.0));
    }

    #[test]
    fn csv_bad_cell_names_the_line() {
        let err = csv("id,color,v0\n0,0,1.5\n1,0,oops\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        assert!(csv("id,v0\n0,1\n").is_err());
        assert!(csv("id,color,v1\n0,0,1\n").is_err());
    }

    #[test]
    fn time_buckets() {
        let ds = assign_colors_by_time(timed(&[0.0, 25.0, 99.0, 100.0]), 4, Metric::Euclidean).unwrap();
        let colors: Vec<usize> = ds.points().iter().map(|p| p.color).collect();
        assert_eq!(colors, vec![0, 1, 3, 3]);
        let ds = assign_colors_by_time(timed(&[0.0, 5.0, 9.0]), 1, Metric::Euclidean).unwrap();
        assert!(ds.points().iter().all(|p| p.color == 0));
        assert!(assign_colors_by_time(timed(&[3.0, 3.0]), 2, Metric::Euclidean).is_err());
    }

    #[test]
    fn round_trip_through_both_formats() {
        let recs = jsonl("{\"id\":5,\"vec\":[0.25,-1],\"color\":1}\n{\"id\":2,\"vec\":[3,4],\"color\":0}\n").unwrap();
        let ds = dataset_from_colors(recs, None, Metric::Euclidean).unwrap();
        for format in [Format::Jsonl, Format::Csv] {
            let mut buf = Vec::new();
            match format {
                Format::Jsonl => write_jsonl(&ds, &mut buf).unwrap(),
                Format::Csv => write_csv(&ds, &mut buf).unwrap(),
            }
            let back = ingest_reader(buf.as_slice(), format, Path::new("x")).unwrap();
            let again = dataset_from_colors(back, None, Metric::Euclidean).unwrap();
            assert_eq!(again.points(), ds.points());
        }
    }
}
