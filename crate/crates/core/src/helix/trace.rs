use crate::error::{HelixError, IllDefinedCause};
use crate::superposition::FieldSpec;

use super::zero::{ScalarField, ZeroOptions};

/// Rayleigh two-point criterion: strands whose connecting valley stays above
/// this fraction of the ridge intensity are not resolved.
pub const RAYLEIGH_VALLEY: f64 = 8.0 / (std::f64::consts::PI * std::f64::consts::PI);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HelixKind {
    Dark,
    Bright,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub z: f64,
    pub x: f64,
    pub y: f64,
    pub intensity: f64,
}

/// Ordered samples of one dark core or bright ridge.
#[derive(Debug, Clone, PartialEq)]
pub struct HelixTrace {
    pub kind: HelixKind,
    pub samples: Vec<TracePoint>,
    pub spec: FieldSpec,
    /// Helix axis the azimuth is measured around.
    pub axis: [f64; 2],
}

impl HelixTrace {
    /// Unwrapped azimuth of every sample about the axis.
    pub fn unwrapped_azimuth(&self) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::with_capacity(self.samples.len());
        for s in &self.samples {
            let raw = (s.y - self.axis[1]).atan2(s.x - self.axis[0]);
            let v = match out.last() {
                None => raw,
                Some(&prev) => {
                    let tau = std::f64::consts::TAU;
                    raw + ((prev - raw) / tau).round() * tau
                }
            };
            out.push(v);
        }
        out
    }

    pub fn radius(&self, i: usize) -> f64 {
        let s = &self.samples[i];
        (s.x - self.axis[0]).hypot(s.y - self.axis[1])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceOptions {
    pub zero: ZeroOptions,
    /// Cap on the transverse jump between consecutive samples, in waists.
    pub step_cap_w0: f64,
    pub min_steps_per_half_pitch: usize,
    pub axis: [f64; 2],
    /// Valley/peak ratio above which bright strands count as self-overlapping.
    pub self_overlap_ratio: f64,
}

impl Default for TraceOptions {
    fn default() -> Self {
        Self {
            zero: ZeroOptions::default(),
            step_cap_w0: 0.25,
            min_steps_per_half_pitch: 8,
            axis: [0.0, 0.0],
            self_overlap_ratio: RAYLEIGH_VALLEY,
        }
    }
}

fn slice_positions(spec: &FieldSpec, z_min: f64, z_max: f64, steps: usize, opts: &TraceOptions) -> Result<Vec<f64>, HelixError> {
    if steps < 2 || !(z_max > z_min) {
        return Err(HelixError::InvalidRequest(format!(
            "need z_max > z_min and at least 2 steps (got [{z_min}, {z_max}], {steps})"
        )));
    }
    if let Some(half) = spec.shortest_half_pitch() {
        let required = (opts.min_steps_per_half_pitch as f64 * (z_max - z_min) / half - 1e-9).ceil() as usize + 1;
        if steps < required {
            return Err(HelixError::TooFewSteps { given: steps, required });
        }
    }
    Ok((0..steps)
        .map(|i| z_min + (z_max - z_min) * i as f64 / (steps - 1) as f64)
        .collect())
}

/// Follows a field zero from `z_min` to `z_max`, seeding each slice with the
/// previous solution.
pub fn trace_dark_helix(
    spec: &FieldSpec,
    z_min: f64,
    z_max: f64,
    steps: usize,
    seed: (f64, f64),
    opts: &TraceOptions,
) -> Result<HelixTrace, HelixError> {
    let zs = slice_positions(spec, z_min, z_max, steps, opts)?;
    let field = ScalarField::new(spec)?;
    let cap = opts.step_cap_w0 * field.waist();
    let mut samples: Vec<TracePoint> = Vec::with_capacity(steps);
    let mut guess = seed;
    for z in zs {
        let (x, y) = field.find_zero(z, guess, &opts.zero).map_err(|e| HelixError::TraceFailed {
            z,
            source: Box::new(e),
        })?;
        if let Some(prev) = samples.last() {
            let jump = (x - prev.x).hypot(y - prev.y);
            if jump >= cap {
                return Err(HelixError::StepTooLarge { z, jump, cap });
            }
        }
        samples.push(TracePoint {
            z,
            x,
            y,
            intensity: field.value(x, y, z).norm_sqr(),
        });
        guess = (x, y);
    }
    Ok(HelixTrace {
        kind: HelixKind::Dark,
        samples,
        spec: spec.clone(),
        axis: opts.axis,
    })
}

/// Local intensity maximum in the transverse plane at `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RidgePoint {
    pub x: f64,
    pub y: f64,
    pub intensity: f64,
}

struct Derivatives {
    grad: [f64; 2],
    hess: [[f64; 2]; 2],
}

fn intensity_derivatives(spec: &FieldSpec, x: f64, y: f64, z: f64, h: f64) -> Derivatives {
    let f = |dx: f64, dy: f64| spec.intensity_at(x + dx, y + dy, z);
    let c = f(0.0, 0.0);
    let (xp, xm, yp, ym) = (f(h, 0.0), f(-h, 0.0), f(0.0, h), f(0.0, -h));
    let gxx = (xp - 2.0 * c + xm) / (h * h);
    let gyy = (yp - 2.0 * c + ym) / (h * h);
    let gxy = (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4.0 * h * h);
    Derivatives {
        grad: [(xp - xm) / (2.0 * h), (yp - ym) / (2.0 * h)],
        hess: [[gxx, gxy], [gxy, gyy]],
    }
}

fn negative_definite(h: &[[f64; 2]; 2]) -> bool {
    h[0][0] < 0.0 && h[0][0] * h[1][1] - h[0][1] * h[1][0] > 0.0
}

/// Climbs to the nearest transverse intensity maximum: Newton on the
/// gradient where the Hessian is negative definite, backtracking gradient
/// ascent elsewhere. `Err(None)` means the climb left the search radius.
fn climb(spec: &FieldSpec, z: f64, seed: (f64, f64), w: f64, limit: (f64, f64, f64)) -> Result<RidgePoint, Option<IllDefinedCause>> {
    let h = 1e-3 * w;
    let (mut x, mut y) = seed;
    let mut value = spec.intensity_at(x, y, z);
    let escaped = |x: f64, y: f64| (x - limit.0).hypot(y - limit.1) > limit.2;
    for _ in 0..200 {
        let d = intensity_derivatives(spec, x, y, z, h);
        let mut step = None;
        if negative_definite(&d.hess) {
            let det = d.hess[0][0] * d.hess[1][1] - d.hess[0][1] * d.hess[1][0];
            let sx = -(d.hess[1][1] * d.grad[0] - d.hess[0][1] * d.grad[1]) / det;
            let sy = -(d.hess[0][0] * d.grad[1] - d.hess[1][0] * d.grad[0]) / det;
            if sx.hypot(sy) < 0.25 * w {
                step = Some((sx, sy));
            }
        }
        let (sx, sy) = match step {
            Some(s) => s,
            None => {
                let g = d.grad[0].hypot(d.grad[1]);
                if g == 0.0 {
                    break;
                }
                (0.1 * w * d.grad[0] / g, 0.1 * w * d.grad[1] / g)
            }
        };
        let mut t = 1.0;
        let mut moved = false;
        while t * sx.hypot(sy) > 1e-13 * w {
            let (nx, ny) = (x + t * sx, y + t * sy);
            let nv = spec.intensity_at(nx, ny, z);
            if nv >= value {
                x = nx;
                y = ny;
                value = nv;
                moved = true;
                break;
            }
            t *= 0.5;
        }
        if escaped(x, y) {
            return Err(None);
        }
        if !moved || (t * sx.hypot(sy)) < 1e-11 * w {
            break;
        }
    }
    let d = intensity_derivatives(spec, x, y, z, h);
    if !negative_definite(&d.hess) {
        return Err(Some(IllDefinedCause::HessianIndefinite));
    }
    Ok(RidgePoint { x, y, intensity: value })
}

/// Maximizes intensity near `seed` at axial position `z`.
pub fn maximize_intensity(spec: &FieldSpec, z: f64, seed: (f64, f64), opts: &TraceOptions) -> Result<RidgePoint, HelixError> {
    let w = spec.geometry().beam_radius(z).max(spec.waist());
    climb(spec, z, seed, w, (opts.axis[0], opts.axis[1], 3.0 * w)).map_err(|cause| match cause {
        None => HelixError::RidgeLost { z },
        Some(cause) => HelixError::RidgeIllDefined { z, cause },
    })
}

/// Minimum over the segment from `p` through the axis to its mirror image,
/// relative to the intensity at `p`.
fn valley_ratio(spec: &FieldSpec, z: f64, p: &RidgePoint, axis: [f64; 2]) -> f64 {
    let (qx, qy) = (2.0 * axis[0] - p.x, 2.0 * axis[1] - p.y);
    let n = 256;
    let mut lowest = f64::INFINITY;
    for i in 0..=n {
        let t = i as f64 / n as f64;
        let v = spec.intensity_at(p.x + (qx - p.x) * t, p.y + (qy - p.y) * t, z);
        lowest = lowest.min(v);
    }
    lowest / p.intensity
}

/// Follows a bright intensity ridge along z.
pub fn trace_bright_ridge(
    spec: &FieldSpec,
    z_min: f64,
    z_max: f64,
    steps: usize,
    seed: (f64, f64),
    opts: &TraceOptions,
) -> Result<HelixTrace, HelixError> {
    let zs = slice_positions(spec, z_min, z_max, steps, opts)?;
    let w0 = spec.waist();
    let cap = opts.step_cap_w0 * w0;
    let mut samples: Vec<TracePoint> = Vec::with_capacity(steps);
    let mut guess = seed;
    for z in zs {
        let p = maximize_intensity(spec, z, guess, opts)?;
        if (p.x - opts.axis[0]).hypot(p.y - opts.axis[1]) < 1e-3 * w0 {
            return Err(HelixError::RidgeIllDefined {
                z,
                cause: IllDefinedCause::OnAxis,
            });
        }
        let valley = valley_ratio(spec, z, &p, opts.axis);
        if valley > opts.self_overlap_ratio {
            return Err(HelixError::RidgeIllDefined {
                z,
                cause: IllDefinedCause::SelfOverlap { valley_ratio: valley },
            });
        }
        if let Some(prev) = samples.last() {
            let jump = (p.x - prev.x).hypot(p.y - prev.y);
            if jump >= cap {
                return Err(HelixError::StepTooLarge { z, jump, cap });
            }
        }
        samples.push(TracePoint {
            z,
            x: p.x,
            y: p.y,
            intensity: p.intensity,
        });
        guess = (p.x, p.y);
    }
    Ok(HelixTrace {
        kind: HelixKind::Bright,
        samples,
        spec: spec.clone(),
        axis: opts.axis,
    })
}

/// Global intensity maximum of the plane `z` within a square of half-width
/// `half_width` around `center`: coarse scan, then local climb.
pub fn focal_peak(spec: &FieldSpec, z: f64, center: [f64; 2], half_width: f64, n: usize) -> RidgePoint {
    let mut best = RidgePoint {
        x: center[0],
        y: center[1],
        intensity: f64::MIN,
    };
    for j in 0..n {
        let y = center[1] - half_width + 2.0 * half_width * j as f64 / (n - 1) as f64;
        for i in 0..n {
            let x = center[0] - half_width + 2.0 * half_width * i as f64 / (n - 1) as f64;
            let v = spec.intensity_at(x, y, z);
            if v > best.intensity {
                best = RidgePoint { x, y, intensity: v };
            }
        }
    }
    let w = spec.waist();
    climb(spec, z, (best.x, best.y), w, (center[0], center[1], 2.0 * half_width)).unwrap_or(best)
}

/// Number of strict local intensity maxima over azimuth on a circle.
pub fn azimuthal_maxima(spec: &FieldSpec, z: f64, center: [f64; 2], radius: f64, samples: usize) -> usize {
    let vals: Vec<f64> = (0..samples)
        .map(|i| {
            let phi = std::f64::consts::TAU * i as f64 / samples as f64;
            spec.intensity_at(center[0] + radius * phi.cos(), center[1] + radius * phi.sin(), z)
        })
        .collect();
    let peak = vals.iter().copied().fold(0.0, f64::max);
    let flat = 1e-12 * peak;
    (0..samples)
        .filter(|&i| {
            let prev = vals[(i + samples - 1) % samples];
            let next = vals[(i + 1) % samples];
            vals[i] > prev + flat && vals[i] >= next
        })
        .count()
}
