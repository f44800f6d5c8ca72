//! CSV ingestion of point sets and polylines, and CSV emission of plane
//! coordinates, distortion reports, and per-latitude profiles.
//!
//! All files are plain comma-separated text with a header row; lines
//! starting with `#` are comments (the bundled fixtures carry their
//! provenance in such a header comment). Degrees at the file boundary,
//! radians in memory.

use crate::distortion::{ComparisonTable, ProfileSample, TissotEllipse};
use crate::error::{Error, Result};
use crate::projection::PlanePoint;
use crate::sphere::GeoPoint;
use std::io::Write;
use std::path::Path;

/// An ordered strip of at least two distinct points.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub id: String,
    pub points: Vec<GeoPoint>,
}

impl Polyline {
    pub fn new(id: impl Into<String>, points: Vec<GeoPoint>) -> Result<Self> {
        let id = id.into();
        if points.len() < 2 {
            return Err(Error::PolylineTooShort { id });
        }
        for w in points.windows(2) {
            if w[0] == w[1] {
                return Err(Error::Csv {
                    path: String::new(),
                    line: 0,
                    msg: format!("polyline {id:?} repeats a point consecutively"),
                });
            }
        }
        Ok(Self { id, points })
    }
}

fn csv_reader(path: &Path) -> Result<csv::Reader<std::fs::File>> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn record_line(record: &csv::StringRecord) -> u64 {
    record.position().map(|p| p.line()).unwrap_or(0)
}

fn check_header(path: &Path, reader: &mut csv::Reader<std::fs::File>, want: &[&str]) -> Result<()> {
    let headers = reader
        .headers()
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let got: Vec<&str> = headers.iter().collect();
    if got != want {
        return Err(Error::Csv {
            path: path.display().to_string(),
            line: 1,
            msg: format!("expected header {}, got {}", want.join(","), got.join(",")),
        });
    }
    Ok(())
}

fn parse_field(path: &Path, line: u64, name: &str, raw: &str) -> Result<f64> {
    raw.parse::<f64>().map_err(|_| Error::Csv {
        path: path.display().to_string(),
        line,
        msg: format!("{name} is not a number: {raw:?}"),
    })
}

fn point_from_record(path: &Path, record: &csv::StringRecord, lon_idx: usize, lat_idx: usize) -> Result<GeoPoint> {
    let line = record_line(record);
    let lon = parse_field(path, line, "lon_deg", &record[lon_idx])?;
    let lat = parse_field(path, line, "lat_deg", &record[lat_idx])?;
    if lat.abs() > 90.0 {
        return Err(Error::Csv {
            path: path.display().to_string(),
            line,
            msg: format!("latitude {lat} is outside [-90, 90]"),
        });
    }
    GeoPoint::from_degrees(lat, lon)
}

/// Read `lon_deg,lat_deg` rows together with their 1-based line numbers.
pub fn read_points_with_lines(path: &Path) -> Result<Vec<(u64, GeoPoint)>> {
    let mut reader = csv_reader(path)?;
    check_header(path, &mut reader, &["lon_deg", "lat_deg"])?;
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        if record.len() != 2 {
            return Err(Error::Csv {
                path: path.display().to_string(),
                line: record_line(&record),
                msg: format!("expected 2 fields, got {}", record.len()),
            });
        }
        out.push((record_line(&record), point_from_record(path, &record, 0, 1)?));
    }
    Ok(out)
}

/// Read a `lon_deg,lat_deg` point file.
pub fn read_points(path: &Path) -> Result<Vec<GeoPoint>> {
    Ok(read_points_with_lines(path)?
        .into_iter()
        .map(|(_, p)| p)
        .collect())
}

/// Read an `id,lon_deg,lat_deg` polyline file. Consecutive rows sharing an
/// id form one polyline; ids must be contiguous, and every polyline needs
/// at least two points.
pub fn read_polylines(path: &Path) -> Result<Vec<Polyline>> {
    let mut reader = csv_reader(path)?;
    check_header(path, &mut reader, &["id", "lon_deg", "lat_deg"])?;
    let mut out: Vec<Polyline> = Vec::new();
    let mut current_id: Option<String> = None;
    let mut current_points: Vec<GeoPoint> = Vec::new();

    let mut flush = |id: Option<String>, points: &mut Vec<GeoPoint>| -> Result<()> {
        if let Some(id) = id {
            out.push(Polyline::new(id, std::mem::take(points))?);
        }
        Ok(())
    };

    for record in reader.records() {
        let record = record.map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let line = record_line(&record);
        if record.len() != 3 {
            return Err(Error::Csv {
                path: path.display().to_string(),
                line,
                msg: format!("expected 3 fields, got {}", record.len()),
            });
        }
        let id = record[0].to_string();
        let point = point_from_record(path, &record, 1, 2)?;
        match current_id.as_deref() {
            Some(cur) if cur == id => {
                if current_points.last() == Some(&point) {
                    return Err(Error::Csv {
                        path: path.display().to_string(),
                        line,
                        msg: format!("polyline {id:?} repeats a point consecutively"),
                    });
                }
                current_points.push(point);
            }
            _ => {
                flush(current_id.take(), &mut current_points)?;
                current_id = Some(id);
                current_points.push(point);
            }
        }
    }
    flush(current_id, &mut current_points)?;
    Ok(out)
}

/// Fixed-point formatting with 15 fractional digits: at least 12
/// significant digits for every quantity these files carry, and exact
/// enough to round-trip through `parse::<f64>` within 1e-10.
pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v:.15}")
}

/// Write plane points as an `x,y` CSV.
pub fn write_plane_csv<W: Write>(points: &[PlanePoint], mut w: W) -> Result<()> {
    writeln!(w, "x,y")?;
    for p in points {
        writeln!(w, "{},{}", fmt_f64(p.x), fmt_f64(p.y))?;
    }
    Ok(())
}

/// Read an `x,y` CSV of plane points with line numbers.
pub fn read_plane_csv_with_lines(path: &Path) -> Result<Vec<(u64, PlanePoint)>> {
    let mut reader = csv_reader(path)?;
    check_header(path, &mut reader, &["x", "y"])?;
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let line = record_line(&record);
        if record.len() != 2 {
            return Err(Error::Csv {
                path: path.display().to_string(),
                line,
                msg: format!("expected 2 fields, got {}", record.len()),
            });
        }
        let x = parse_field(path, line, "x", &record[0])?;
        let y = parse_field(path, line, "y", &record[1])?;
        out.push((line, PlanePoint::new(x, y)));
    }
    Ok(out)
}

/// Write geographic points as a `lon_deg,lat_deg` CSV.
pub fn write_points_csv<W: Write>(points: &[GeoPoint], mut w: W) -> Result<()> {
    writeln!(w, "lon_deg,lat_deg")?;
    for p in points {
        writeln!(w, "{},{}", fmt_f64(p.lon_degrees()), fmt_f64(p.lat_degrees()))?;
    }
    Ok(())
}

/// Write a distortion report table:
/// `label,L,ell,v,K_max,witness_L_phi_deg,witness_ell_phi_deg`, rows in
/// table order. Failed rows keep their label with `nan` values.
pub fn write_report_csv<W: Write>(table: &ComparisonTable, mut w: W) -> Result<()> {
    writeln!(w, "label,L,ell,v,K_max,witness_L_phi_deg,witness_ell_phi_deg")?;
    for row in &table.rows {
        match &row.outcome {
            Ok(r) => writeln!(
                w,
                "{},{},{},{},{},{},{}",
                row.label,
                fmt_f64(r.sup_sigma),
                fmt_f64(r.inf_sigma),
                fmt_f64(r.metrical_distortion),
                fmt_f64(r.max_dilatation),
                fmt_f64(r.witness_sup.lat_degrees()),
                fmt_f64(r.witness_inf.lat_degrees()),
            )?,
            Err(_) => writeln!(w, "{},nan,nan,nan,nan,nan,nan", row.label)?,
        }
    }
    Ok(())
}

/// Write per-latitude profile samples as `phi_deg,k,sigma,K`.
pub fn write_profile_csv<W: Write>(samples: &[ProfileSample], mut w: W) -> Result<()> {
    writeln!(w, "phi_deg,k,sigma,K")?;
    for s in samples {
        writeln!(
            w,
            "{},{},{},{}",
            fmt_f64(s.phi.to_degrees()),
            fmt_f64(s.parallel_scale),
            fmt_f64(s.sigma),
            fmt_f64(s.dilatation),
        )?;
    }
    Ok(())
}

/// Write Tissot ellipses sampled at points as
/// `lon_deg,lat_deg,semi_major,semi_minor,orientation_rad`.
pub fn write_tissot_csv<W: Write>(rows: &[(GeoPoint, TissotEllipse)], mut w: W) -> Result<()> {
    writeln!(w, "lon_deg,lat_deg,semi_major,semi_minor,orientation_rad")?;
    for (p, e) in rows {
        writeln!(
            w,
            "{},{},{},{},{}",
            fmt_f64(p.lon_degrees()),
            fmt_f64(p.lat_degrees()),
            fmt_f64(e.semi_major),
            fmt_f64(e.semi_minor),
            fmt_f64(e.orientation),
        )?;
    }
    Ok(())
}

/// Write a search trace as `p1_deg,p2_deg,v`; the second column is empty
/// for one-parameter families.
pub fn write_trace_csv<W: Write>(
    trace: &[crate::optimizer::SearchSample],
    mut w: W,
) -> Result<()> {
    writeln!(w, "p1_deg,p2_deg,v")?;
    for s in trace {
        match s.p2 {
            Some(p2) => writeln!(
                w,
                "{},{},{}",
                fmt_f64(s.p1.to_degrees()),
                fmt_f64(p2.to_degrees()),
                fmt_f64(s.v)
            )?,
            None => writeln!(w, "{},,{}", fmt_f64(s.p1.to_degrees()), fmt_f64(s.v))?,
        }
    }
    Ok(())
}
