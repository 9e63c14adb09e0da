//! Plain-text artifacts: field dumps, traces, contours and key/value reports.
//!
//! Every artifact starts with `#` header lines naming the artifact kind, the
//! configuration hash and the transverse unit. Floats are written as the
//! shortest decimal that parses back to the same bits.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::contour::ContourSet;
use crate::grid::{AxisRange, FieldDump, SamplingGrid};
use crate::helix::TracePoint;
use crate::superposition::VectorFieldSample;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
}

fn malformed(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Malformed {
        line,
        message: message.into(),
    }
}

/// Shortest round-trip decimal; scientific notation for very small or large magnitudes.
pub fn fmt_f64(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && a.is_finite() && !(1e-5..1e16).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

/// Header shared by all artifacts.
#[derive(Debug, Clone, PartialEq)]
pub struct Header {
    pub kind: String,
    pub config_hash: String,
    /// Transverse coordinate unit, `wavelength` or `waist`.
    pub units: String,
    /// Extra `# key value` lines, in order.
    pub extra: Vec<(String, String)>,
}

impl Header {
    pub fn new(kind: &str, config_hash: &str, units: &str) -> Self {
        Self {
            kind: kind.into(),
            config_hash: config_hash.into(),
            units: units.into(),
            extra: Vec::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<String>) -> Self {
        self.extra.push((key.into(), value.into()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.extra.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    fn write(&self, out: &mut String) {
        let _ = writeln!(out, "# helixlight {}", self.kind);
        let _ = writeln!(out, "# config_hash {}", self.config_hash);
        let _ = writeln!(out, "# units transverse={} axial=wavelength", self.units);
        for (k, v) in &self.extra {
            let _ = writeln!(out, "# {k} {v}");
        }
    }

    /// Parses leading `#` lines; returns the header and the index of the first data line.
    fn parse(lines: &[&str]) -> Result<(Self, usize), FormatError> {
        let mut h = Header::new("", "", "");
        let mut i = 0;
        while i < lines.len() && lines[i].starts_with('#') {
            let body = lines[i][1..].trim();
            let (key, value) = body.split_once(' ').unwrap_or((body, ""));
            match key {
                "helixlight" => h.kind = value.into(),
                "config_hash" => h.config_hash = value.into(),
                "units" => {
                    let t = value
                        .split_whitespace()
                        .find_map(|p| p.strip_prefix("transverse="))
                        .ok_or_else(|| malformed(i + 1, "units line lacks transverse="))?;
                    h.units = t.into();
                }
                _ => h.extra.push((key.into(), value.into())),
            }
            i += 1;
        }
        if h.kind.is_empty() {
            return Err(malformed(1, "missing `# helixlight <kind>` line"));
        }
        Ok((h, i))
    }
}

fn parse_f64(tok: &str, line: usize) -> Result<f64, FormatError> {
    tok.parse().map_err(|_| malformed(line, format!("not a number: {tok:?}")))
}

fn axis_line(a: &AxisRange) -> String {
    format!("{} {} {}", fmt_f64(a.min), fmt_f64(a.max), a.count)
}

fn parse_axis(v: &str, line: usize) -> Result<AxisRange, FormatError> {
    let t: Vec<&str> = v.split_whitespace().collect();
    if t.len() != 3 {
        return Err(malformed(line, "grid axis needs min max count"));
    }
    let count = t[2].parse().map_err(|_| malformed(line, "bad count"))?;
    Ok(AxisRange::new(parse_f64(t[0], line)?, parse_f64(t[1], line)?, count))
}

/// Dump with coordinates divided by `scale` (the transverse unit in lengths).
pub fn write_dump(dump: &FieldDump, header: &Header, scale: f64) -> String {
    let g = &dump.grid;
    let file_grid = SamplingGrid {
        x: AxisRange::new(g.x.min / scale, g.x.max / scale, g.x.count),
        y: AxisRange::new(g.y.min / scale, g.y.max / scale, g.y.count),
        z: g.z,
    };
    let mut out = String::with_capacity(dump.samples.len() * 120);
    let h = header
        .clone()
        .with("grid_x", axis_line(&file_grid.x))
        .with("grid_y", axis_line(&file_grid.y))
        .with("grid_z", axis_line(&file_grid.z))
        .with("columns", "x y z re_ex im_ex re_ey im_ey intensity");
    h.write(&mut out);
    for (i, (s, v)) in dump.samples.iter().zip(&dump.intensity).enumerate() {
        let [x, y, z] = file_grid.point(i);
        let _ = writeln!(
            out,
            "{} {} {} {} {} {} {} {}",
            fmt_f64(x),
            fmt_f64(y),
            fmt_f64(z),
            fmt_f64(s.ex.re),
            fmt_f64(s.ex.im),
            fmt_f64(s.ey.re),
            fmt_f64(s.ey.im),
            fmt_f64(*v)
        );
    }
    out
}

/// Reads a dump back. The grid is in the file's transverse unit.
pub fn read_dump(text: &str) -> Result<(Header, FieldDump), FormatError> {
    let lines: Vec<&str> = text.lines().collect();
    let (mut header, start) = Header::parse(&lines)?;
    let mut axis = |key: &str| -> Result<AxisRange, FormatError> {
        let pos = header
            .extra
            .iter()
            .position(|(k, _)| k == key)
            .ok_or_else(|| malformed(start, format!("missing {key} header")))?;
        let (_, v) = header.extra.remove(pos);
        parse_axis(&v, pos + 1)
    };
    let (x, y, z) = (axis("grid_x")?, axis("grid_y")?, axis("grid_z")?);
    header.extra.retain(|(k, _)| k != "columns");
    let grid = SamplingGrid::new(x, y, z).map_err(|e| malformed(start, e.to_string()))?;
    let n = grid.len() as usize;
    let mut samples = Vec::with_capacity(n);
    let mut intensity = Vec::with_capacity(n);
    for (offset, line) in lines[start..].iter().enumerate() {
        let ln = start + offset + 1;
        if line.trim().is_empty() {
            continue;
        }
        let t: Vec<&str> = line.split_whitespace().collect();
        if t.len() != 8 {
            return Err(malformed(ln, format!("expected 8 columns, found {}", t.len())));
        }
        let v: Vec<f64> = t.iter().map(|s| parse_f64(s, ln)).collect::<Result<_, _>>()?;
        samples.push(VectorFieldSample::new(Complex64::new(v[3], v[4]), Complex64::new(v[5], v[6])));
        intensity.push(v[7]);
    }
    if samples.len() != n {
        return Err(malformed(lines.len(), format!("expected {n} samples, found {}", samples.len())));
    }
    Ok((
        header,
        FieldDump {
            grid,
            samples,
            intensity,
        },
    ))
}

/// Trace as `z x y I` lines, transverse coordinates divided by `scale`.
pub fn write_trace(points: &[TracePoint], header: &Header, scale: f64) -> String {
    let mut out = String::new();
    header.clone().with("columns", "z x y intensity").write(&mut out);
    for p in points {
        let _ = writeln!(
            out,
            "{} {} {} {}",
            fmt_f64(p.z),
            fmt_f64(p.x / scale),
            fmt_f64(p.y / scale),
            fmt_f64(p.intensity)
        );
    }
    out
}

/// Reads `z x y I` lines back (coordinates in the file's unit).
pub fn read_trace(text: &str) -> Result<(Header, Vec<TracePoint>), FormatError> {
    let lines: Vec<&str> = text.lines().collect();
    let (mut header, start) = Header::parse(&lines)?;
    header.extra.retain(|(k, _)| k != "columns");
    let mut points = Vec::new();
    for (offset, line) in lines[start..].iter().enumerate() {
        let ln = start + offset + 1;
        if line.trim().is_empty() {
            continue;
        }
        let v: Vec<f64> = line.split_whitespace().map(|s| parse_f64(s, ln)).collect::<Result<_, _>>()?;
        if v.len() != 4 {
            return Err(malformed(ln, "expected 4 columns"));
        }
        points.push(TracePoint {
            z: v[0],
            x: v[1],
            y: v[2],
            intensity: v[3],
        });
    }
    Ok((header, points))
}

/// Contours as `slice loop x y` lines, one blank line after each loop.
pub fn write_contours(set: &ContourSet, header: &Header, scale: f64) -> String {
    let mut out = String::new();
    header
        .clone()
        .with("fraction", fmt_f64(set.fraction))
        .with("level", fmt_f64(set.level))
        .with("loops", set.loop_count().to_string())
        .with("columns", "slice loop x y")
        .write(&mut out);
    for s in &set.slices {
        for (k, lp) in s.loops.iter().enumerate() {
            for p in lp {
                let _ = writeln!(out, "{} {} {} {}", s.slice, k, fmt_f64(p[0] / scale), fmt_f64(p[1] / scale));
            }
            out.push('\n');
        }
    }
    out
}

/// Ordered `key = value` report.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    entries: Vec<(String, String)>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn text(&mut self, key: &str, value: impl Into<String>) -> &mut Self {
        self.entries.push((key.into(), value.into()));
        self
    }

    pub fn num(&mut self, key: &str, value: f64) -> &mut Self {
        self.text(key, fmt_f64(value))
    }

    pub fn pair(&mut self, key: &str, a: f64, b: f64) -> &mut Self {
        self.text(key, format!("{} {}", fmt_f64(a), fmt_f64(b)))
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn render(&self, header: &Header) -> String {
        let mut out = String::new();
        header.write(&mut out);
        for (k, v) in &self.entries {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }

    /// Parses `key = value` lines after the header.
    pub fn parse(text: &str) -> Result<(Header, Report), FormatError> {
        let lines: Vec<&str> = text.lines().collect();
        let (header, start) = Header::parse(&lines)?;
        let mut r = Report::new();
        for (offset, line) in lines[start..].iter().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once(" = ")
                .ok_or_else(|| malformed(start + offset + 1, "expected `key = value`"))?;
            r.text(k.trim(), v.trim());
        }
        Ok((header, r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{evaluate_grid, DEFAULT_MAX_SAMPLES};
    use crate::modes::{BeamGeometry, Direction, ModeIndex, Normalization};
    use crate::superposition::{BeamComponent, FieldSpec};

    fn dump() -> FieldDump {
        let g = BeamGeometry::from_rayleigh_length(1.0, 50.0).unwrap();
        let spec = FieldSpec::new(
            vec![
                BeamComponent::new(g, ModeIndex::new(0, 0), Complex64::new(0.5, 0.0), Direction::Forward),
                BeamComponent::new(g, ModeIndex::new(0, 1), Complex64::new(1.0, 0.0), Direction::Backward)
                    .with_polarization(0.3),
            ],
            Normalization::UnitNorm,
        )
        .unwrap();
        let grid = SamplingGrid::new(
            AxisRange::new(-3.0, 3.0, 7),
            AxisRange::new(-2.0, 2.0, 5),
            AxisRange::new(-0.5, 0.5, 3),
        )
        .unwrap();
        evaluate_grid(&spec, &grid, DEFAULT_MAX_SAMPLES).unwrap()
    }

    #[test]
    fn shortest_decimal_round_trips() {
        for v in [0.0, -0.0, 1.0, 0.1, 1.0 / 3.0, 1e-300, -2.5e20, 7e-6, f64::MIN_POSITIVE] {
            let s = fmt_f64(v);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits(), "{s}");
        }
        assert_eq!(fmt_f64(0.5), "0.5");
        assert_eq!(fmt_f64(1e-20), "1e-20");
    }

    #[test]
    fn dump_round_trip_is_bit_exact() {
        let d = dump();
        let h = Header::new("field-dump", "abc", "wavelength");
        let text = write_dump(&d, &h, 1.0);
        let (h2, back) = read_dump(&text).unwrap();
        assert_eq!(h2, h);
        assert_eq!(back.grid, d.grid);
        for (a, b) in d.samples.iter().zip(&back.samples) {
            assert_eq!(a.ex.re.to_bits(), b.ex.re.to_bits());
            assert_eq!(a.ex.im.to_bits(), b.ex.im.to_bits());
            assert_eq!(a.ey.re.to_bits(), b.ey.re.to_bits());
            assert_eq!(a.ey.im.to_bits(), b.ey.im.to_bits());
        }
        assert_eq!(write_dump(&back, &h, 1.0), text);
    }

    #[test]
    fn dump_order_is_x_fastest() {
        let text = write_dump(&dump(), &Header::new("field-dump", "", "wavelength"), 1.0);
        let rows: Vec<Vec<f64>> = text
            .lines()
            .filter(|l| !l.starts_with('#'))
            .map(|l| l.split_whitespace().take(3).map(|t| t.parse().unwrap()).collect())
            .collect();
        assert_eq!(rows[0], vec![-3.0, -2.0, -0.5]);
        assert_eq!(rows[1], vec![-2.0, -2.0, -0.5]);
        assert_eq!(rows[7], vec![-3.0, -1.0, -0.5]);
        assert_eq!(rows[35], vec![-3.0, -2.0, 0.0]);
    }

    #[test]
    fn truncated_dump_is_rejected() {
        let text = write_dump(&dump(), &Header::new("field-dump", "", "wavelength"), 1.0);
        let cut: String = text.lines().take(20).map(|l| format!("{l}\n")).collect();
        assert!(read_dump(&cut).is_err());
        assert!(read_dump("1 2 3").is_err());
    }

    #[test]
    fn trace_and_report_round_trip() {
        let pts = vec![TracePoint {
            z: -0.25,
            x: 0.1,
            y: -1.0 / 7.0,
            intensity: 3e-30,
        }];
        let h = Header::new("dark-trace", "00", "waist").with("status", "ok");
        let (h2, back) = read_trace(&write_trace(&pts, &h, 1.0)).unwrap();
        assert_eq!((h2, back), (h.clone(), pts));

        let mut r = Report::new();
        r.num("pitch", 0.5).pair("zero", -1.0, 2.0).text("status", "ok");
        let (_, r2) = Report::parse(&r.render(&h)).unwrap();
        assert_eq!(r2, r);
        assert_eq!(r2.get("zero"), Some("-1 2"));
    }
}
