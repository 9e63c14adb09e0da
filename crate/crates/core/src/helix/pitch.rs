use crate::error::HelixError;
use crate::modes::{BeamGeometry, ModeIndex};

use super::trace::HelixTrace;

/// Pitch of a traced helix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PitchEstimate {
    /// Signed axial advance per counterclockwise turn.
    pub pitch: f64,
    /// Angle between the helix tangent and the transverse plane near z = 0.
    pub focal_angle: f64,
    /// Unwrapped azimuth covered by the trace, in turns.
    pub turns: f64,
    /// Least-squares dφ/dz.
    pub slope: f64,
}

/// Fits `φ(z)` by least squares; pitch is `2π / slope`.
pub fn estimate_pitch(trace: &HelixTrace) -> Result<PitchEstimate, HelixError> {
    let n = trace.samples.len();
    let phi = trace.unwrapped_azimuth();
    if n < 3 {
        return Err(HelixError::InsufficientTurn { turns: 0.0 });
    }
    let turns = (phi[n - 1] - phi[0]).abs() / std::f64::consts::TAU;
    if turns < 0.5 {
        return Err(HelixError::InsufficientTurn { turns });
    }
    let zs: Vec<f64> = trace.samples.iter().map(|s| s.z).collect();
    let zm = zs.iter().sum::<f64>() / n as f64;
    let pm = phi.iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (z, p) in zs.iter().zip(&phi) {
        sxy += (z - zm) * (p - pm);
        sxx += (z - zm) * (z - zm);
    }
    let slope = sxy / sxx;

    let i = (0..n)
        .min_by(|&a, &b| zs[a].abs().partial_cmp(&zs[b].abs()).unwrap_or(std::cmp::Ordering::Equal))
        .unwrap_or(0);
    let (lo, hi) = (i.saturating_sub(1), (i + 1).min(n - 1));
    let dz = zs[hi] - zs[lo];
    let dphi = phi[hi] - phi[lo];
    let focal_angle = (dz.abs() / (trace.radius(i) * dphi.abs())).atan();

    Ok(PitchEstimate {
        pitch: std::f64::consts::TAU / slope,
        focal_angle,
        turns,
        slope,
    })
}

/// Approximate helix position for a forward/backward mode pair.
///
/// The radius grows as `w(z)/w0` and the azimuth follows the phase
/// `χ(z) = 2kz − (2(1+p+p') + |l| + |l'|) ζ(z)` of the interference term,
/// divided by the OAM difference and anchored so that `z = 0` returns
/// `start`.
pub fn helix_position_model(
    forward: ModeIndex,
    backward: ModeIndex,
    geom: &BeamGeometry,
    start: (f64, f64),
    z: f64,
) -> Result<(f64, f64), HelixError> {
    position(forward, backward, geom, start, z, false)
}

/// [`helix_position_model`] with the wavefront-curvature phase
/// `k r(z)² / ϱ(z)` added to `χ`. Away from the focus this term is what the
/// plain model misses; with it the zero of a two-beam pair is reproduced
/// to rounding error.
pub fn helix_position_curved(
    forward: ModeIndex,
    backward: ModeIndex,
    geom: &BeamGeometry,
    start: (f64, f64),
    z: f64,
) -> Result<(f64, f64), HelixError> {
    position(forward, backward, geom, start, z, true)
}

fn position(
    forward: ModeIndex,
    backward: ModeIndex,
    geom: &BeamGeometry,
    start: (f64, f64),
    z: f64,
    curvature: bool,
) -> Result<(f64, f64), HelixError> {
    let dl = backward.l - forward.l;
    if dl == 0 {
        return Err(HelixError::DegenerateOam(forward.l));
    }
    let gouy_order = 2 * (1 + forward.p + backward.p) + forward.l.unsigned_abs() + backward.l.unsigned_abs();
    let scale = geom.beam_radius(z) / geom.waist();
    let mut chi = 2.0 * geom.wavenumber() * z - gouy_order as f64 * geom.gouy_phase(z);
    if curvature {
        let r2 = (start.0 * start.0 + start.1 * start.1) * scale * scale;
        chi += geom.wavenumber() * r2 * geom.inverse_curvature(z);
    }
    let (s, c) = (chi / dl as f64).sin_cos();
    Ok((scale * (start.0 * c - start.1 * s), scale * (start.0 * s + start.1 * c)))
}
