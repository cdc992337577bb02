//! Deterministic report rendering and atomic file output.

use std::io::{self, Write};
use std::path::Path;

use serde::ser::{SerializeMap, SerializeSeq, Serializer};
use serde::Serialize;
use serde_json::ser::Formatter;

use crate::error::{Error, Result};
use crate::linalg::C64;

/// Shortest fixed-width form that round-trips every double: 17 significant
/// digits in scientific notation.
pub fn format_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.16e}")
    }
}

/// `serde_json` formatter that prints every float with 17 significant digits.
/// Non-finite values never reach it; the serializer turns them into `null`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sig17;

impl Formatter for Sig17 {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Compact JSON with [`Sig17`] floats and a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sig17);
    value.serialize(&mut ser).map_err(|e| Error::Numerical(format!("JSON encoding failed: {e}")))?;
    buf.push(b'\n');
    String::from_utf8(buf).map_err(|e| Error::Numerical(e.to_string()))
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
    Null,
    /// Complex numbers, rendered as `[re, im]` pairs.
    Pairs(Vec<C64>),
}

impl Cell {
    fn to_csv(&self) -> Result<String> {
        Ok(match self {
            Cell::Num(x) => format_f64(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Null => String::new(),
            Cell::Pairs(_) => to_json(self)?.trim_end().to_string(),
        })
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as u64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Null, Into::into)
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Cell::Num(x) => s.serialize_f64(*x),
            Cell::Int(n) => s.serialize_u64(*n),
            Cell::Bool(b) => s.serialize_bool(*b),
            Cell::Text(t) => s.serialize_str(t),
            Cell::Null => s.serialize_unit(),
            Cell::Pairs(zs) => {
                let mut seq = s.serialize_seq(Some(zs.len()))?;
                for z in zs {
                    seq.serialize_element(&[z.re, z.im])?;
                }
                seq.end()
            }
        }
    }
}

/// Rows under a fixed header. Renders as CSV, or as JSON objects whose keys
/// follow the header order.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

struct Row<'a>(&'a [String], &'a [Cell]);

impl Serialize for Row<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0.iter().zip(self.1) {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::Numerical(format!("CSV encoding failed: {e}"));
        w.write_record(&self.header).map_err(csv_err)?;
        for row in &self.rows {
            let fields = row.iter().map(Cell::to_csv).collect::<Result<Vec<_>>>()?;
            w.write_record(&fields).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Numerical(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Numerical(e.to_string()))
    }

    /// JSON array of row objects.
    pub fn to_json(&self) -> Result<String> {
        let rows: Vec<Row<'_>> = self.rows.iter().map(|r| Row(&self.header, r)).collect();
        to_json(&RowSeq(&rows))
    }

    /// The first row as a single JSON object.
    pub fn to_json_record(&self) -> Result<String> {
        let row = self.rows.first().ok_or_else(|| Error::Numerical("empty report".into()))?;
        to_json(&Row(&self.header, row))
    }
}

struct RowSeq<'a>(&'a [Row<'a>]);

impl Serialize for RowSeq<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for r in self.0 {
            seq.serialize_element(r)?;
        }
        seq.end()
    }
}

/// Writes `content` to `path` through a temporary file in the same
/// directory, so a failed run never leaves a partial file. `None` or `-`
/// means standard output.
pub fn emit(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        None => write_stdout(content),
        Some(p) if p.as_os_str() == "-" => write_stdout(content),
        Some(p) => write_atomically(p, content.as_bytes()),
    }
}

fn write_stdout(content: &str) -> Result<()> {
    let mut out = io::stdout().lock();
    out.write_all(content.as_bytes())?;
    out.flush()?;
    Ok(())
}

pub fn write_atomically(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_through_text() {
        for x in [0.1, 1.0 / 3.0, std::f64::consts::PI, 1e-300, -2.5e17, 5e-324, f64::MAX] {
            let s = format_f64(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
        }
        assert_eq!(format_f64(2.0), "2.0000000000000000e0");
        assert_eq!(format_f64(f64::NAN), "nan");
    }

    #[test]
    fn json_uses_seventeen_digits_and_nulls() {
        let mut t = Table::new(["a", "b", "c", "d"]);
        t.push(vec![Cell::Num(0.5), Cell::Num(f64::INFINITY), Cell::from("x"), Cell::Pairs(vec![C64::new(1.0, -1.0)])]);
        assert_eq!(
            t.to_json_record().unwrap(),
            "{\"a\":5.0000000000000000e-1,\"b\":null,\"c\":\"x\",\"d\":[[1.0000000000000000e0,-1.0000000000000000e0]]}\n"
        );
    }

    #[test]
    fn csv_has_header_and_quotes_commas() {
        let mut t = Table::new(["label", "x"]);
        t.push(vec![Cell::from("f(a=1, b=2)"), Cell::Num(1.0)]);
        t.push(vec![Cell::Null, Cell::Bool(true)]);
        assert_eq!(t.to_csv().unwrap(), "label,x\n\"f(a=1, b=2)\",1.0000000000000000e0\n,true\n");
    }

    #[test]
    fn atomic_write_replaces_whole_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.csv");
        write_atomically(&p, b"first").unwrap();
        write_atomically(&p, b"second").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "second");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
