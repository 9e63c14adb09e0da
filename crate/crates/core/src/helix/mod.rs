//! Dark-core and bright-ridge location, continuation along z, pitch fits and
//! gradient-based trap profiles.
//!
//! Zero finding and gradients work on uniformly polarized specs, where the
//! vector field is one complex scalar times a fixed polarization.

mod pitch;
mod trace;
mod trap;
mod zero;

pub use pitch::{estimate_pitch, helix_position_curved, helix_position_model, PitchEstimate};
pub use trace::{
    azimuthal_maxima, focal_peak, maximize_intensity, trace_bright_ridge, trace_dark_helix, HelixKind, HelixTrace,
    RidgePoint, TraceOptions, TracePoint, RAYLEIGH_VALLEY,
};
pub use trap::{field_gradients, trap_profile, Gradient, TrapOptions, TrapProfile};
pub use zero::{dark_zero_focal, darkest_point, find_zero, ScalarField, ZeroOptions};
