//! Counterpropagating Laguerre-Gauss superpositions and the intensity helices
//! they form: mode evaluation, vector-field synthesis on grids, dark-core and
//! bright-ridge tracing, pitch and trap analysis, hexagonal dark-helix
//! lattices, and a reproducible file-based command surface.
//!
//! Lengths are plain reals; the presets and CLI use the wavelength as unit.

pub mod config;
pub mod contour;
pub mod error;
pub mod grid;
pub mod helix;
pub mod io;
pub mod lattice;
pub mod modes;
pub mod presets;
pub mod run;
pub mod scalar;
pub mod superposition;

pub use config::{parse_config, serialize_config, ConfigError, RunConfig};
pub use contour::{extract_contours, ContourSet, SliceContours};
pub use error::{ContourError, FieldError, GeometryError, HelixError, IllDefinedCause, LatticeError};
pub use grid::{evaluate_grid, AxisRange, FieldDump, SamplingGrid, DEFAULT_MAX_SAMPLES};
pub use modes::{BeamGeometry, Direction, ModeIndex, Normalization};
pub use scalar::Real;
pub use run::{run, RunError, RunOptions, RunOutcome};
pub use superposition::{intensity, pitch_length, BeamComponent, FieldSpec, VectorFieldSample};

pub type BeamGeometry64 = BeamGeometry<f64>;
pub type BeamGeometry32 = BeamGeometry<f32>;
pub type FieldSpec64 = FieldSpec<f64>;
pub type FieldSpec32 = FieldSpec<f32>;
pub type FieldDump64 = FieldDump<f64>;
pub type FieldDump32 = FieldDump<f32>;
pub type VectorFieldSample64 = VectorFieldSample<f64>;
pub type VectorFieldSample32 = VectorFieldSample<f32>;
