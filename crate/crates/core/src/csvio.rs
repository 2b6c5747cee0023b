//! Two-column `x,y` dataset files.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{DataPoint, Dataset};

/// Reads `x,y` rows. A leading non-numeric row is treated as a header.
pub fn parse_dataset_csv(reader: impl Read) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .comment(Some(b'#'))
        .from_reader(reader);
    let mut points = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        let line = record.position().map_or(i as u64 + 1, |p| p.line());
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if record.len() != 2 {
            return Err(Error::Parse {
                line,
                message: format!("expected 2 fields, found {}", record.len()),
            });
        }
        let parsed = (record[0].parse::<f64>(), record[1].parse::<f64>());
        let (x, y) = match parsed {
            (Ok(x), Ok(y)) => (x, y),
            _ if i == 0 => continue,
            _ => {
                return Err(Error::Parse {
                    line,
                    message: format!("malformed number in `{},{}`", &record[0], &record[1]),
                })
            }
        };
        if !(x.is_finite() && y.is_finite()) {
            return Err(Error::Parse {
                line,
                message: "non-finite value".into(),
            });
        }
        points.push(DataPoint::new(x, y));
    }
    Dataset::new(points)
}

pub fn read_dataset_csv(path: impl AsRef<Path>) -> Result<Dataset> {
    parse_dataset_csv(std::fs::File::open(path)?)
}

/// Writes with a header and shortest round-tripping float text.
pub fn write_dataset_csv(dataset: &Dataset, writer: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["x", "y"])?;
    for p in dataset {
        w.write_record([p.x.to_string(), p.y.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_optional() {
        let a = parse_dataset_csv("x,y\n0,0\n1,1\n".as_bytes()).unwrap();
        let b = parse_dataset_csv("0,0\n1, 1\n".as_bytes()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 2);
    }

    #[test]
    fn rejects_bad_rows() {
        for (text, bad_line) in [
            ("x,y\n0,0\n1,abc\n", 3),
            ("0,0\n1,NaN\n", 2),
            ("0,0\n1,inf\n", 2),
            ("0,0\n1,2,3\n", 2),
        ] {
            match parse_dataset_csv(text.as_bytes()) {
                Err(Error::Parse { line, .. }) => assert_eq!(line, bad_line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
        assert!(matches!(parse_dataset_csv("x,y\n".as_bytes()), Err(Error::EmptyDataset)));
    }

    #[test]
    fn roundtrip() {
        let d = Dataset::from_pairs(&[(0.1, -2.5e-17), (1.0 / 3.0, 7.0)]).unwrap();
        let mut buf = Vec::new();
        write_dataset_csv(&d, &mut buf).unwrap();
        assert_eq!(parse_dataset_csv(buf.as_slice()).unwrap(), d);
    }
}
