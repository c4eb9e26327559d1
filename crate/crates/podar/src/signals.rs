//! Signal CSV files: header `driver,obstacle,signal`, one row per (driver, obstacle).

use std::collections::HashMap;
use std::io::{Read, Write};
use std::path::Path;

use podar_core::calibration::{DriverSignals, RawSignals, SignalKind};
use podar_core::experiment::OBSTACLE_COUNT;

use crate::error::{CliError, Result};
use crate::format::sig6;

const HEADER: [&str; 3] = ["driver", "obstacle", "signal"];

/// Signals read from disk, tagged with the kind they will be standardized as.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalFile {
    pub kind: SignalKind,
    pub raw: RawSignals,
}

fn valid_driver_id(id: &str) -> bool {
    id.strip_prefix('P').is_some_and(|n| {
        !n.is_empty() && n.bytes().all(|b| b.is_ascii_digit()) && !n.starts_with('0')
    })
}

pub fn load_signals(path: &Path, kind: SignalKind) -> Result<SignalFile> {
    let file = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    let raw = read_signals(file, path)?;
    Ok(SignalFile { kind, raw })
}

/// Parses signal CSV; `origin` only labels error messages.
pub fn read_signals<R: Read>(reader: R, origin: &Path) -> Result<RawSignals> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| CliError::parse(origin, e))?
        .clone();
    if headers.is_empty() {
        return Err(CliError::parse(origin, "empty file"));
    }
    if headers.iter().ne(HEADER) {
        return Err(CliError::parse(
            origin,
            format!(
                "expected header `driver,obstacle,signal`, got `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            ),
        ));
    }

    let row_err = |row: usize, message: String| CliError::Row {
        path: origin.to_path_buf(),
        row,
        message,
    };
    let mut order: Vec<String> = Vec::new();
    let mut table: HashMap<String, Vec<Option<f64>>> = HashMap::new();
    for (i, record) in rdr.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| row_err(row, e.to_string()))?;
        if record.len() != 3 {
            return Err(row_err(
                row,
                format!("expected 3 fields, found {}", record.len()),
            ));
        }
        let driver = &record[0];
        if !valid_driver_id(driver) {
            return Err(row_err(
                row,
                format!("driver id {driver:?} does not look like P<n>"),
            ));
        }
        let obstacle: usize = record[1]
            .parse()
            .map_err(|_| row_err(row, format!("obstacle {:?} is not an integer", &record[1])))?;
        if !(1..=OBSTACLE_COUNT).contains(&obstacle) {
            return Err(row_err(
                row,
                format!("obstacle id {obstacle} outside 1..={OBSTACLE_COUNT}"),
            ));
        }
        let value: f64 = record[2]
            .parse()
            .map_err(|_| row_err(row, format!("signal {:?} is not a number", &record[2])))?;
        if !(value.is_finite() && value >= 0.0) {
            return Err(row_err(
                row,
                format!("signal {value} must be finite and non-negative"),
            ));
        }
        let slots = table.entry(driver.to_string()).or_insert_with(|| {
            order.push(driver.to_string());
            vec![None; OBSTACLE_COUNT]
        });
        if slots[obstacle - 1].replace(value).is_some() {
            return Err(row_err(
                row,
                format!("duplicate row for driver {driver}, obstacle {obstacle}"),
            ));
        }
    }
    if order.is_empty() {
        return Err(CliError::parse(origin, "no data rows"));
    }

    let mut drivers = Vec::with_capacity(order.len());
    for id in order {
        let slots = table.remove(&id).expect("driver recorded");
        let values = slots
            .iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| {
                    CliError::parse(origin, format!("driver {id} is missing obstacle {}", i + 1))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        drivers.push(DriverSignals { id, values });
    }
    Ok(RawSignals::new(drivers))
}

/// Writes in the format [`read_signals`] accepts. Values use shortest
/// round-trip formatting so a reload is exact.
pub fn write_signals<W: Write>(writer: W, signals: &RawSignals) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(HEADER)?;
    for d in &signals.drivers {
        for (i, v) in d.values.iter().enumerate() {
            w.write_record([d.id.as_str(), &(i + 1).to_string(), &format!("{v:?}")])?;
        }
    }
    w.flush()
}

/// Same layout with 6 significant digits, for human-facing tables.
pub fn write_signals_rounded<W: Write>(writer: W, signals: &RawSignals) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(HEADER)?;
    for d in &signals.drivers {
        for (i, v) in d.values.iter().enumerate() {
            w.write_record([d.id.as_str(), &(i + 1).to_string(), &sig6(*v)])?;
        }
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample(drivers: usize) -> String {
        let mut s = String::from("driver,obstacle,signal\n");
        for d in 1..=drivers {
            for o in 1..=77 {
                s.push_str(&format!("P{d},{o},{}\n", (o * d) as f64 / 10.0));
            }
        }
        s
    }

    fn parse(text: &str) -> Result<RawSignals> {
        read_signals(text.as_bytes(), Path::new("test.csv"))
    }

    #[test]
    fn eight_drivers() {
        let raw = parse(&sample(8)).unwrap();
        assert_eq!(raw.drivers.len(), 8);
        assert!(raw.drivers.iter().all(|d| d.values.len() == 77));
        assert_eq!(raw.drivers[2].id, "P3");
        assert_eq!(raw.drivers[2].values[9], 3.0);
    }

    #[test]
    fn empty_file() {
        assert!(matches!(parse(""), Err(CliError::Parse { .. })));
        assert!(matches!(
            parse("driver,obstacle,signal\n"),
            Err(CliError::Parse { .. })
        ));
    }

    #[test]
    fn obstacle_out_of_range() {
        let text = sample(1) + "P1,78,1.0\n";
        let err = parse(&text).unwrap_err();
        match err {
            CliError::Row { row, message, .. } => {
                assert_eq!(row, 78);
                assert!(message.contains("78"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicate_and_missing() {
        let text = sample(1) + "P1,5,1.0\n";
        assert!(matches!(parse(&text), Err(CliError::Row { row: 78, .. })));
        let full = sample(1);
        let mut lines: Vec<&str> = full.lines().collect();
        // header is line 0, so this drops obstacle 10
        lines.remove(10);
        let err = parse(&(lines.join("\n") + "\n")).unwrap_err();
        assert!(err.to_string().contains("missing obstacle 10"), "{err}");
    }

    #[test]
    fn malformed_rows() {
        for bad in [
            "P1,1\n",
            "X1,1,1.0\n",
            "P1,one,1.0\n",
            "P1,1,-2\n",
            "P1,1,abc\n",
        ] {
            let text = format!("driver,obstacle,signal\n{bad}");
            assert!(
                matches!(parse(&text), Err(CliError::Row { row: 1, .. })),
                "{bad}"
            );
        }
        assert!(parse("a,b,c\nP1,1,1\n").is_err());
    }

    proptest! {
        #[test]
        fn write_then_load_is_identity(values in proptest::collection::vec(0.0f64..1e6, 77 * 3)) {
            let raw = RawSignals::new(
                values.chunks(77).enumerate()
                    .map(|(i, c)| DriverSignals::new(format!("P{}", i + 1), c.to_vec()))
                    .collect(),
            );
            let mut buf = Vec::new();
            write_signals(&mut buf, &raw).unwrap();
            prop_assert_eq!(read_signals(buf.as_slice(), Path::new("mem")).unwrap(), raw);
        }
    }
}
