//! Paraxial Laguerre-Gauss modes and the Gaussian-beam helper functions.
//!
//! Lengths are plain reals; callers pick the unit (the CLI works in
//! wavelengths). The azimuthal factor is built as `((x + iy) / r)^l` by
//! repeated squaring so no arctangent branch cut enters the field.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::GeometryError;
use crate::scalar::Real;

/// Wavelength, waist and Rayleigh length of a family of coaxial modes.
///
/// The constructors derive the waist from the Rayleigh length (or the
/// reverse) so `w0 = sqrt(λ z_R / π)` always holds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamGeometry<T = f64> {
    wavelength: T,
    waist: T,
    rayleigh_length: T,
    wavenumber: T,
}

impl<T: Real> BeamGeometry<T> {
    pub fn from_rayleigh_length(wavelength: T, rayleigh_length: T) -> Result<Self, GeometryError> {
        check_positive(wavelength, "wavelength")?;
        check_positive(rayleigh_length, "rayleigh length")?;
        let waist = (wavelength * rayleigh_length / T::PI()).sqrt();
        Ok(Self::assemble(wavelength, waist, rayleigh_length))
    }

    pub fn from_waist(wavelength: T, waist: T) -> Result<Self, GeometryError> {
        check_positive(wavelength, "wavelength")?;
        check_positive(waist, "waist")?;
        let rayleigh_length = T::PI() * waist * waist / wavelength;
        Ok(Self::assemble(wavelength, waist, rayleigh_length))
    }

    fn assemble(wavelength: T, waist: T, rayleigh_length: T) -> Self {
        Self {
            wavelength,
            waist,
            rayleigh_length,
            wavenumber: T::TAU() / wavelength,
        }
    }

    pub fn wavelength(&self) -> T {
        self.wavelength
    }

    pub fn waist(&self) -> T {
        self.waist
    }

    pub fn rayleigh_length(&self) -> T {
        self.rayleigh_length
    }

    pub fn wavenumber(&self) -> T {
        self.wavenumber
    }

    /// `w(z) = w0 sqrt(1 + z²/z_R²)`.
    pub fn beam_radius(&self, z: T) -> T {
        let s = z / self.rayleigh_length;
        self.waist * (T::one() + s * s).sqrt()
    }

    /// `ζ(z) = arctan(z / z_R)`.
    pub fn gouy_phase(&self, z: T) -> T {
        (z / self.rayleigh_length).atan()
    }

    /// `1/ϱ(z) = z / (z² + z_R²)`, finite at the focus.
    pub fn inverse_curvature(&self, z: T) -> T {
        z / (z * z + self.rayleigh_length * self.rayleigh_length)
    }

    /// Converts the geometry to another float width.
    pub fn cast<U: Real>(&self) -> BeamGeometry<U> {
        let c = |v: T| U::lit(v.to_f64().expect("finite"));
        BeamGeometry::assemble(
            c(self.wavelength),
            c(self.waist),
            c(self.rayleigh_length),
        )
    }
}

fn check_positive<T: Real>(v: T, name: &'static str) -> Result<(), GeometryError> {
    if v.is_finite() && v > T::zero() {
        Ok(())
    } else {
        Err(GeometryError::NonPositive(name))
    }
}

/// Radial node count `p` and OAM index `l` (the OAM is `ħl`; only `l` is used).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModeIndex {
    pub p: u32,
    pub l: i32,
}

impl ModeIndex {
    pub const fn new(p: u32, l: i32) -> Self {
        Self { p, l }
    }

    /// Order `2p + |l|` multiplying the Gouy phase (minus the constant 1).
    pub fn order(&self) -> u32 {
        2 * self.p + self.l.unsigned_abs()
    }
}

/// Normalization of the mode prefactor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// Literal prefactor `sqrt(2 p! / ((1 + δ_{0,l}) π (p+|l|)!))`; the
    /// l = 0 modes then carry half the power of the others.
    PaperExact,
    /// Every mode carries unit transverse power.
    #[default]
    UnitNorm,
}

/// Propagation direction of a beam along the z axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Direction {
    #[default]
    Forward,
    Backward,
}

impl Direction {
    pub fn sign(self) -> i8 {
        match self {
            Direction::Forward => 1,
            Direction::Backward => -1,
        }
    }

    pub fn from_sign(sign: i64) -> Option<Self> {
        match sign {
            1 => Some(Direction::Forward),
            -1 => Some(Direction::Backward),
            _ => None,
        }
    }
}

/// Generalized Laguerre polynomial `L_p^a(x)` by the upward three-term recurrence.
pub fn laguerre<T: Real>(p: u32, a: u32, x: T) -> T {
    let a = T::from_int(a as i64);
    let mut prev = T::one();
    if p == 0 {
        return prev;
    }
    let mut cur = T::one() + a - x;
    for n in 1..p {
        let n = T::from_int(n as i64);
        let next = ((n + n + T::one() + a - x) * cur - (n + a) * prev) / (n + T::one());
        prev = cur;
        cur = next;
    }
    cur
}

/// Constant prefactor of `U_{p,l}` (without the `1/w(z)`).
pub fn mode_prefactor<T: Real>(mode: ModeIndex, norm: Normalization) -> T {
    // p! / (p + |l|)! as a running product of reciprocals
    let mut ratio = T::one();
    for j in 1..=mode.l.unsigned_abs() {
        ratio = ratio / T::from_int((mode.p + j) as i64);
    }
    let two = T::lit(2.0);
    let delta = match norm {
        Normalization::PaperExact if mode.l == 0 => two,
        _ => T::one(),
    };
    (two * ratio / (delta * T::PI())).sqrt()
}

/// Transverse power `∫|U|² dA` of a mode under the given normalization.
pub fn mode_power<T: Real>(mode: ModeIndex, norm: Normalization) -> T {
    match norm {
        Normalization::PaperExact if mode.l == 0 => T::lit(0.5),
        _ => T::one(),
    }
}

/// `((x + iy) / r)^l`, exact zero on axis for `l != 0`.
pub fn azimuthal_winding<T: Real>(l: i32, x: T, y: T) -> Complex<T> {
    if l == 0 {
        return Complex::new(T::one(), T::zero());
    }
    let r = x.hypot(y);
    if r == T::zero() {
        return Complex::new(T::zero(), T::zero());
    }
    let base = Complex::new(x / r, if l > 0 { y / r } else { -y / r });
    let mut e = l.unsigned_abs();
    let mut acc = Complex::new(T::one(), T::zero());
    let mut sq = base;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * sq;
        }
        sq = sq * sq;
        e >>= 1;
    }
    acc
}

/// Slowly varying envelope `U_{p,l}(x, y, z)`.
pub fn lg_envelope<T: Real>(
    geom: &BeamGeometry<T>,
    mode: ModeIndex,
    norm: Normalization,
    x: T,
    y: T,
    z: T,
) -> Complex<T> {
    let winding = azimuthal_winding(mode.l, x, y);
    if winding.re == T::zero() && winding.im == T::zero() {
        return winding;
    }
    let w = geom.beam_radius(z);
    let r2 = x * x + y * y;
    let rho = T::lit(2.0) * r2 / (w * w);
    let abs_l = mode.l.unsigned_abs();
    let radial = if abs_l == 0 {
        T::one()
    } else {
        rho.sqrt().powi(abs_l as i32)
    };
    let amplitude = mode_prefactor::<T>(mode, norm) * radial * laguerre(mode.p, abs_l, rho)
        / w
        * (-r2 / (w * w)).exp();
    let phase = -T::from_int((mode.order() + 1) as i64) * geom.gouy_phase(z)
        + geom.wavenumber() * r2 * geom.inverse_curvature(z) / T::lit(2.0);
    winding * Complex::from_polar(amplitude, phase)
}

/// Full paraxial field: `U(x,y,z) e^{ikz}` forward, `U(x,y,-z) e^{-ikz}` backward.
pub fn paraxial_mode<T: Real>(
    geom: &BeamGeometry<T>,
    mode: ModeIndex,
    norm: Normalization,
    direction: Direction,
    x: T,
    y: T,
    z: T,
) -> Complex<T> {
    let zs = match direction {
        Direction::Forward => z,
        Direction::Backward => -z,
    };
    lg_envelope(geom, mode, norm, x, y, zs) * Complex::from_polar(T::one(), geom.wavenumber() * zs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, PI, SQRT_2};

    fn geom() -> BeamGeometry {
        BeamGeometry::from_rayleigh_length(1.0, 50.0).unwrap()
    }

    /// Explicit series `Σ_m (-1)^m C(p+a, p-m) x^m / m!`, summed exactly in
    /// integers for `x = num / 4`.
    fn laguerre_series(p: u32, a: u32, num: i128) -> f64 {
        let binom = |n: u32, k: u32| (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128);
        let fact = |n: u32| (1..=n).fold(1i128, |acc, i| acc * i as i128);
        // scaled by 4^p p!
        let mut sum = 0i128;
        for m in 0..=p {
            let term = binom(p + a, p - m) * num.pow(m) * 4i128.pow(p - m) * (fact(p) / fact(m));
            sum += if m % 2 == 0 { term } else { -term };
        }
        sum as f64 / (4i128.pow(p) * fact(p)) as f64
    }

    #[test]
    fn laguerre_low_orders() {
        assert_eq!(laguerre(0, 3, 7.2), 1.0);
        assert!((laguerre(1, 0, 0.5f64) - 0.5).abs() < 1e-15);
        // 1.3 is not a quarter-integer; compare at 1.25 and 1.5 plus the explicit polynomial
        let x: f64 = 1.3;
        let want = 15.0 - 20.0 * x + 7.5 * x * x - x.powi(3) + x.powi(4) / 24.0;
        assert!((laguerre(4, 2, x) - want).abs() <= 1e-12 * want.abs());
        for num in [5, 6] {
            let want = laguerre_series(4, 2, num);
            assert!((laguerre(4, 2, num as f64 / 4.0) - want).abs() <= 1e-12 * want.abs());
        }
    }

    #[test]
    fn laguerre_matches_series_everywhere() {
        for p in 0..=10 {
            for a in 0..=6 {
                for i in 0..=80 {
                    let x = i as f64 * 0.25;
                    let got = laguerre(p, a, x);
                    let want = laguerre_series(p, a, i);
                    let scale = want.abs().max(1.0);
                    assert!((got - want).abs() <= 1e-12 * scale, "p={p} a={a} x={x}: {got} vs {want}");
                }
            }
        }
    }

    #[test]
    fn geometry_helpers() {
        let g = geom();
        let w0 = g.waist();
        assert!(((w0 * w0 * PI / g.wavelength()) / g.rayleigh_length() - 1.0).abs() < 1e-12);
        assert_eq!(g.beam_radius(0.0), w0);
        assert!((g.beam_radius(50.0) - w0 * SQRT_2).abs() < 1e-12);
        assert_eq!(g.beam_radius(-50.0), g.beam_radius(50.0));
        assert_eq!(g.gouy_phase(0.0), 0.0);
        assert!((g.gouy_phase(50.0) - FRAC_PI_4).abs() < 1e-15);
        assert!((g.gouy_phase(106.0 * 50.0) - PI / 2.0).abs() < 1e-2);
        assert_eq!(g.inverse_curvature(0.0), 0.0);
        assert!((g.inverse_curvature(50.0) - 1.0 / 100.0).abs() < 1e-15);
        assert!((g.inverse_curvature(-50.0) + 1.0 / 100.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_geometry() {
        assert!(BeamGeometry::from_rayleigh_length(0.0, 1.0).is_err());
        assert!(BeamGeometry::from_waist(1.0, -2.0).is_err());
        assert!(BeamGeometry::from_waist(1.0, f64::NAN).is_err());
    }

    #[test]
    fn envelope_axis_values() {
        let g = geom();
        let on_axis = lg_envelope(&g, ModeIndex::new(0, 1), Normalization::PaperExact, 0.0, 0.0, 0.0);
        assert_eq!(on_axis, Complex::new(0.0, 0.0));
        let u00 = lg_envelope(&g, ModeIndex::new(0, 0), Normalization::PaperExact, 0.0, 0.0, 0.0);
        let want = 1.0 / (PI.sqrt() * g.waist());
        assert!((u00.re - want).abs() < 1e-15 && u00.im == 0.0);
    }

    #[test]
    fn phase_winding_is_exact() {
        let g = geom();
        let m = ModeIndex::new(1, 2);
        for r in [0.3, 1.0, 2.7, 6.0] {
            let a = lg_envelope(&g, m, Normalization::UnitNorm, r, 0.0, 0.0);
            let (s, c) = (PI / 3.0).sin_cos();
            let b = lg_envelope(&g, m, Normalization::UnitNorm, r * c, r * s, 0.0);
            let d = (b / a).arg() - 2.0 * PI / 3.0;
            let d = d - (d / (2.0 * PI)).round() * 2.0 * PI;
            assert!(d.abs() < 1e-12, "r={r}: {d}");
        }
    }

    #[test]
    fn negative_l_winds_backwards() {
        let w = azimuthal_winding(-3, 0.0, 2.0);
        // (i)^-3 = i
        assert!((w - Complex::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn normalization_ratio() {
        for l in -3..=3 {
            for p in 0..3 {
                let m = ModeIndex::new(p, l);
                let ratio: f64 =
                    mode_prefactor::<f64>(m, Normalization::UnitNorm) / mode_prefactor::<f64>(m, Normalization::PaperExact);
                let want = if l == 0 { SQRT_2 } else { 1.0 };
                assert!((ratio - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn carrier_phase() {
        let g = geom();
        let m = ModeIndex::new(0, 0);
        let u = paraxial_mode(&g, m, Normalization::UnitNorm, Direction::Forward, 0.0, 0.0, 0.5);
        let env = lg_envelope(&g, m, Normalization::UnitNorm, 0.0, 0.0, 0.5);
        assert!((u + env).norm() < 1e-14 * env.norm());
    }

    #[test]
    fn backward_mirrors_forward() {
        let g = geom();
        let m = ModeIndex::new(1, -2);
        for &(x, y, z) in &[(0.3, -1.2, 4.0), (2.0, 0.5, -17.3), (-1.0, -1.0, 0.25)] {
            let b = paraxial_mode(&g, m, Normalization::UnitNorm, Direction::Backward, x, y, z);
            let f = paraxial_mode(&g, m, Normalization::UnitNorm, Direction::Forward, x, y, -z);
            assert!((b.norm() - f.norm()).abs() < 1e-15);
        }
    }

    #[test]
    fn radial_node_count() {
        let g = geom();
        let w = g.waist();
        for p in 0..=4 {
            for l in [0, 1, -2, 3] {
                let m = ModeIndex::new(p, l);
                let mut changes = 0;
                let mut last = 0.0f64;
                for i in 1..4000 {
                    let r = 4.0 * w * i as f64 / 4000.0;
                    let v = lg_envelope(&g, m, Normalization::UnitNorm, r, 0.0, 0.0).re;
                    if v == 0.0 {
                        continue;
                    }
                    if last != 0.0 && v.signum() != last.signum() {
                        changes += 1;
                    }
                    last = v;
                }
                assert_eq!(changes, p, "p={p} l={l}");
            }
        }
    }

    #[test]
    fn single_precision_agrees() {
        let g = geom();
        let g32: BeamGeometry<f32> = g.cast();
        let m = ModeIndex::new(2, -1);
        let a = lg_envelope(&g, m, Normalization::UnitNorm, 1.7, -0.4, 3.0);
        let b = lg_envelope(&g32, m, Normalization::UnitNorm, 1.7f32, -0.4, 3.0);
        assert!(((b.re as f64) - a.re).abs() < 1e-5 * a.norm());
        assert!(((b.im as f64) - a.im).abs() < 1e-5 * a.norm());
    }
}
