//! CSV tables: trajectories (`t,x,y,z`), return maps (`xmax_n,xmax_next`),
//! maxima, carrier sequences and bifurcation scans.
//!
//! Numbers use the shortest representation that parses back to the same
//! `f64`, so every table round-trips exactly. Lines end in LF.

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::Path;

use piecewise_attractor::carrier::{CarrierSequence, ScanPoint};
use piecewise_attractor::rossler::{Maximum, ReturnMap};
use piecewise_attractor::{Provenance, Trajectory, TrajectoryPoint};

use crate::error::{CliError, Result};

pub const TRAJECTORY_HEADER: [&str; 4] = ["t", "x", "y", "z"];
pub const RETURN_MAP_HEADER: [&str; 2] = ["xmax_n", "xmax_next"];
pub const MAXIMA_HEADER: [&str; 2] = ["t", "xmax"];
pub const BIFURCATION_HEADER: [&str; 4] = ["lambda", "period", "kind", "lyapunov"];
pub const CARRIER_HEADER: [&str; 3] = ["i", "x", "radius"];

/// Shortest round-trip decimal; `-0` is written as `0`.
pub fn format_number(v: f64) -> String {
    if v == 0.0 {
        "0".to_owned()
    } else {
        v.to_string()
    }
}

fn writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> CliError + '_ {
    move |source| CliError::Csv {
        path: path.to_path_buf(),
        source,
    }
}

fn write_rows<W, I, const N: usize>(out: W, header: [&str; N], rows: I) -> csv::Result<()>
where
    W: Write,
    I: IntoIterator<Item = [String; N]>,
{
    let mut w = writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn to_file<F>(path: &Path, write: F) -> Result<()>
where
    F: FnOnce(BufWriter<File>) -> csv::Result<()>,
{
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    write(BufWriter::new(file)).map_err(csv_err(path))
}

pub fn write_trajectory<W: Write>(traj: &Trajectory, out: W) -> csv::Result<()> {
    write_rows(
        out,
        TRAJECTORY_HEADER,
        traj.points()
            .iter()
            .map(|p| [p.t, p.x, p.y, p.z].map(format_number)),
    )
}

pub fn write_trajectory_csv(traj: &Trajectory, path: &Path) -> Result<()> {
    to_file(path, |w| write_trajectory(traj, w))
}

pub fn write_return_map<W: Write>(map: &ReturnMap, out: W) -> csv::Result<()> {
    write_rows(
        out,
        RETURN_MAP_HEADER,
        map.pairs.iter().map(|&(a, b)| [a, b].map(format_number)),
    )
}

pub fn write_return_map_csv(map: &ReturnMap, path: &Path) -> Result<()> {
    to_file(path, |w| write_return_map(map, w))
}

pub fn write_maxima<W: Write>(maxima: &[Maximum], out: W) -> csv::Result<()> {
    write_rows(
        out,
        MAXIMA_HEADER,
        maxima.iter().map(|m| [m.t, m.value].map(format_number)),
    )
}

pub fn write_maxima_csv(maxima: &[Maximum], path: &Path) -> Result<()> {
    to_file(path, |w| write_maxima(maxima, w))
}

pub fn write_carrier<W: Write>(seq: &CarrierSequence, out: W) -> csv::Result<()> {
    write_rows(
        out,
        CARRIER_HEADER,
        seq.xs
            .iter()
            .zip(&seq.radii)
            .enumerate()
            .map(|(i, (x, r))| [i.to_string(), format_number(*x), format_number(*r)]),
    )
}

/// `period` is empty and `lyapunov` blank when undefined.
pub fn write_bifurcation<W: Write>(scan: &[ScanPoint], out: W) -> csv::Result<()> {
    write_rows(
        out,
        BIFURCATION_HEADER,
        scan.iter().map(|p| {
            [
                format_number(p.lambda),
                p.result.period().map(|n| n.to_string()).unwrap_or_default(),
                p.result.kind_name().to_owned(),
                p.result
                    .lyapunov_estimate
                    .map(format_number)
                    .unwrap_or_default(),
            ]
        }),
    )
}

/// Parses a `t,x,y,z` table.
pub fn read_trajectory<R: Read>(input: R) -> std::result::Result<Trajectory, ReadError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(input);
    let header = reader.headers()?.clone();
    if header.iter().ne(TRAJECTORY_HEADER) {
        return Err(ReadError::Header(
            header.iter().collect::<Vec<_>>().join(","),
        ));
    }
    let mut points = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let mut v = [0.0; 4];
        for (slot, field) in v.iter_mut().zip(record.iter()) {
            *slot = field.parse().map_err(|_| ReadError::Number {
                row: line + 1,
                field: field.to_owned(),
            })?;
        }
        points.push(TrajectoryPoint::new(v[0], v[1], v[2], v[3]));
    }
    Ok(Trajectory::new(points, Provenance::External)?)
}

pub fn read_trajectory_csv(path: &Path) -> Result<Trajectory> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    read_trajectory(io::BufReader::new(file)).map_err(|e| match e {
        ReadError::Csv(source) => CliError::Csv {
            path: path.to_path_buf(),
            source,
        },
        other => CliError::config(format!("{}: {other}", path.display())),
    })
}

#[derive(Debug, thiserror::Error)]
pub enum ReadError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("expected header t,x,y,z, found {0}")]
    Header(String),
    #[error("row {row}: {field:?} is not a number")]
    Number { row: usize, field: String },
    #[error(transparent)]
    Trajectory(#[from] piecewise_attractor::Error),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_points() -> Trajectory {
        Trajectory::new(
            vec![
                TrajectoryPoint::new(0.0, -5.028478044964773, -0.0, 0.0005589484508023728),
                TrajectoryPoint::new(1.0, 1.0 / 3.0, 2.5, 1e-12),
            ],
            Provenance::External,
        )
        .unwrap()
    }

    #[test]
    fn header_and_rows() {
        let mut buf = Vec::new();
        write_trajectory(&two_points(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "t,x,y,z");
        assert_eq!(lines[1], "0,-5.028478044964773,0,0.0005589484508023728");
        assert!(!text.contains('\r'));
    }

    #[test]
    fn empty_trajectory_is_header_only() {
        let mut buf = Vec::new();
        let empty = Trajectory::new(Vec::new(), Provenance::External).unwrap();
        write_trajectory(&empty, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "t,x,y,z\n");
    }

    #[test]
    fn rejects_foreign_header() {
        let err = read_trajectory("a,b\n1,2\n".as_bytes()).unwrap_err();
        assert!(matches!(err, ReadError::Header(_)));
        let err = read_trajectory("t,x,y,z\n0,1,two,3\n".as_bytes()).unwrap_err();
        assert!(matches!(err, ReadError::Number { row: 1, .. }));
    }

    #[test]
    fn bifurcation_columns() {
        use piecewise_attractor::carrier::{bifurcation_scan, DetectionSettings};
        let scan = bifurcation_scan(3.3, 3.7, 2, 0.5, &DetectionSettings::default()).unwrap();
        let mut buf = Vec::new();
        write_bifurcation(&scan, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "lambda,period,kind,lyapunov");
        assert!(lines[1].starts_with("3.3,2,periodic,-"));
        assert!(lines[2].starts_with("3.7,,chaotic,0."));
    }
}
