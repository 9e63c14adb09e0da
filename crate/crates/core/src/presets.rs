//! Ready-made configurations for the canonical helices and lattices.
//!
//! All use λ = 1, z_R = 50 and transverse positions in waists.

use crate::config::*;
use crate::modes::Normalization;

pub const PRESET_NAMES: [&str; 7] = ["figure1", "figure2", "figure3a", "figure3b", "figure4b", "figure4c", "figure4d"];

fn beam(p: i64, l: i64, amplitude: f64, direction: i64) -> BeamConfig {
    BeamConfig {
        mode: ModeConfig { p, l },
        amplitude: [amplitude, 0.0],
        direction,
        polarization_deg: 0.0,
        offset: [0.0, 0.0],
    }
}

fn axis(min: f64, max: f64, count: usize) -> AxisConfig {
    AxisConfig { min, max, count }
}

fn base(command: Command, source: SourceConfig) -> RunConfig {
    RunConfig {
        command: Some(command),
        units: Units {
            transverse: TransverseUnit::Waist,
        },
        geometry: GeometryConfig {
            wavelength: 1.0,
            rayleigh_length: Some(50.0),
            waist: None,
        },
        normalization: Normalization::UnitNorm,
        source,
        grid: None,
        trace: None,
        contour: None,
        outputs: OutputsConfig::default(),
        tolerances: Tolerances::default(),
    }
}

/// Counterpropagating pair: dump, 90% contours, both traces and the pitch report.
fn helix_figure(forward: BeamConfig, backward: BeamConfig, half_range: f64) -> RunConfig {
    let mut c = base(
        Command::Pitch,
        SourceConfig::Field(FieldConfig {
            beams: vec![forward, backward],
        }),
    );
    c.grid = Some(GridConfig {
        x: axis(-1.5, 1.5, 61),
        y: axis(-1.5, 1.5, 61),
        z: axis(-half_range, half_range, 41),
    });
    c.trace = Some(TraceConfig {
        kind: TraceKind::Both,
        z_min: -half_range,
        z_max: half_range,
        steps: 129,
        seed: None,
        bright_seed: None,
        axis: [0.0, 0.0],
    });
    c.contour = Some(ContourConfig { fraction: 0.9 });
    c.outputs = OutputsConfig {
        dump: Some("field.dump".into()),
        contour: Some("contour.dat".into()),
        dark_trace: Some("dark_trace.dat".into()),
        bright_trace: Some("bright_trace.dat".into()),
        pitch: Some("pitch.txt".into()),
        ..OutputsConfig::default()
    };
    c
}

fn lattice_figure(lattice: LatticeConfig) -> RunConfig {
    let h = 0.6 * lattice.spacing;
    let mut c = base(Command::Lattice, SourceConfig::Lattice(lattice));
    c.grid = Some(GridConfig {
        x: axis(-h, h, 121),
        y: axis(-h, h, 121),
        z: axis(-0.125, 0.125, 9),
    });
    c.outputs.lattice_report = Some("lattice_report.txt".into());
    c
}

fn weak_helix() -> FieldConfig {
    FieldConfig {
        beams: vec![beam(0, 0, 0.125, 1), beam(0, 1, 1.0, -1)],
    }
}

pub fn preset(name: &str) -> Option<RunConfig> {
    Some(match name {
        "figure1" => helix_figure(beam(0, 0, 0.5, 1), beam(0, 1, 1.0, -1), 0.5),
        "figure2" => helix_figure(beam(0, 2, 1.0, 1), beam(1, 0, 0.5, -1), 1.0),
        "figure3a" => helix_figure(beam(0, 2, 1.0, 1), beam(0, 0, 0.5, -1), 1.0),
        "figure3b" => helix_figure(beam(0, 2, 1.0, 1), beam(0, 0, 1.0, -1), 1.0),
        "figure4b" => {
            let mut c = lattice_figure(LatticeConfig {
                spacing: 2.3,
                rings: 4,
                polarization_deg: [0.0, 60.0, 120.0],
                content: ContentConfig::Gaussian,
                central: CentralConfig::EmbedSingleHelix(EmbedConfig {
                    gaussian_ratio: 0.125,
                    power_factor: 2.0,
                }),
                core_rings: 1,
            });
            c.outputs.embed = Some("embed.txt".into());
            c
        }
        "figure4c" => lattice_figure(LatticeConfig {
            spacing: 2.5,
            rings: 4,
            polarization_deg: [0.0, 60.0, 120.0],
            content: ContentConfig::Helical(weak_helix()),
            central: CentralConfig::None,
            core_rings: 1,
        }),
        "figure4d" => {
            let mut c = base(Command::Pitch, SourceConfig::Field(weak_helix()));
            c.trace = Some(TraceConfig {
                kind: TraceKind::Dark,
                z_min: -0.5,
                z_max: 0.5,
                steps: 129,
                seed: None,
                bright_seed: None,
                axis: [0.0, 0.0],
            });
            c.grid = Some(GridConfig {
                x: axis(-1.5, 1.5, 61),
                y: axis(-1.5, 1.5, 61),
                z: axis(-0.5, 0.5, 21),
            });
            c.outputs = OutputsConfig {
                dump: Some("field.dump".into()),
                dark_trace: Some("dark_trace.dat".into()),
                pitch: Some("pitch.txt".into()),
                ..OutputsConfig::default()
            };
            c
        }
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate_and_round_trip() {
        for name in PRESET_NAMES {
            let c = preset(name).unwrap();
            c.validate().unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(parse_config(&serialize_config(&c)).unwrap(), c, "{name}");
        }
        assert!(preset("figure5").is_none());
    }
}
