//! Byte-stable output: every float is written as 17 significant digits in
//! scientific notation, lines end in `\n`, and nothing depends on locale.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::ser::Serializer;
use serde::Serialize;
use serde_json::value::RawValue;

pub fn sci(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

/// Float that serializes to JSON in the fixed scientific format (`null` when
/// not finite).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sci(pub f64);

impl Serialize for Sci {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        RawValue::from_string(sci(self.0))
            .map_err(serde::ser::Error::custom)?
            .serialize(s)
    }
}

pub fn sci_vec(xs: &[f64]) -> Vec<Sci> {
    xs.iter().copied().map(Sci).collect()
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

/// `out` if given, otherwise standard output.
pub fn open(out: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn write_csv(w: &mut dyn Write, header: &[&str], rows: &[Vec<f64>]) -> io::Result<()> {
    writeln!(w, "{}", header.join(","))?;
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&x| sci(x)).collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    w.flush()
}

/// `trace.csv` → `trace.json`.
pub fn sidecar(path: &Path) -> PathBuf {
    path.with_extension("json")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(sci(0.1), "1.0000000000000001e-1");
        assert_eq!(sci(-176.05), "-1.7605000000000001e2");
        assert_eq!(sci(0.0), "0.0000000000000000e0");
        assert_eq!(sci(f64::NAN), "NaN");
    }

    #[test]
    fn json_floats_use_fixed_format() {
        #[derive(Serialize)]
        struct R {
            a: Sci,
            b: Sci,
        }
        let s = serde_json::to_string(&R {
            a: Sci(2.5),
            b: Sci(f64::INFINITY),
        })
        .unwrap();
        assert_eq!(s, r#"{"a":2.5000000000000000e0,"b":null}"#);
    }

    #[test]
    fn sidecar_swaps_extension() {
        assert_eq!(
            sidecar(Path::new("out/trace.csv")),
            PathBuf::from("out/trace.json")
        );
        assert_eq!(sidecar(Path::new("trace")), PathBuf::from("trace.json"));
    }
}
