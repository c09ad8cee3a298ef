//! Config-file ingestion and flag precedence.
//!
//! Precedence: built-in defaults < JSON config file < command-line flags.
//! Geometry flags are all-or-nothing: passing any of `--layers`, `--scale`,
//! `--r1` replaces the file geometry entirely.

use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use serde_json::{json, Value};

use resonator::medium::{
    geometry_equidistant, geometry_geometric, make_medium, LayeredGeometry, MediumSpec,
};
use resonator::rootfind::SearchConfig;

use crate::args::{FormatArg, Overrides};

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    radii: Option<Vec<f64>>,
    equidistant: Option<usize>,
    geometric: Option<GeometricSpec>,
    materials: Option<MaterialSpec>,
    delta: Option<f64>,
    mode_order: Option<u32>,
    search: Option<SearchOverrides>,
    output: Option<OutputSpec>,
    capacity: Option<f64>,
    volume: Option<f64>,
}

#[derive(Deserialize, Debug, Clone, Copy)]
#[serde(deny_unknown_fields)]
struct GeometricSpec {
    layers: usize,
    r1: f64,
    scale: f64,
}

#[derive(Deserialize, Debug, Clone, Copy)]
#[serde(deny_unknown_fields)]
struct MaterialSpec {
    rho_r: f64,
    kappa_r: f64,
    rho: f64,
    kappa: f64,
}

/// Partial search settings; unset fields keep the problem-derived defaults.
#[derive(Deserialize, Debug, Default, Clone, Copy)]
#[serde(deny_unknown_fields)]
pub struct SearchOverrides {
    pub omega_max: Option<f64>,
    pub grid_points: Option<usize>,
    pub tol_abs: Option<f64>,
    pub tol_rel: Option<f64>,
    pub max_iter: Option<usize>,
    pub imag_seed_offset: Option<f64>,
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct OutputSpec {
    dir: Option<PathBuf>,
    format: Option<String>,
}

/// Which output families to write.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Formats {
    pub csv: bool,
    pub json: bool,
    pub svg: bool,
}

impl Formats {
    fn from_arg(arg: FormatArg) -> Formats {
        match arg {
            FormatArg::Csv => Formats { csv: true, json: false, svg: false },
            FormatArg::Json => Formats { csv: false, json: true, svg: false },
            FormatArg::Svg => Formats { csv: false, json: false, svg: true },
            FormatArg::All => Formats { csv: true, json: true, svg: true },
        }
    }

    fn from_name(name: &str) -> Result<Formats> {
        Ok(match name {
            "csv" => Formats::from_arg(FormatArg::Csv),
            "json" => Formats::from_arg(FormatArg::Json),
            "svg" => Formats::from_arg(FormatArg::Svg),
            "all" => Formats::from_arg(FormatArg::All),
            other => bail!("unknown output format {other:?} (expected csv, json, svg or all)"),
        })
    }
}

/// Fully resolved run parameters.
#[derive(Debug)]
pub struct RunConfig {
    geometry: Option<LayeredGeometry>,
    pub medium: MediumSpec,
    pub mode_order: u32,
    pub search: SearchOverrides,
    pub out_dir: PathBuf,
    pub formats: Formats,
    pub capacity: Option<f64>,
    pub volume: Option<f64>,
}

impl RunConfig {
    pub fn geometry(&self) -> Result<&LayeredGeometry> {
        self.geometry
            .as_ref()
            .context("no geometry configured: give radii/equidistant/geometric in the config file or --layers on the command line")
    }

    pub fn has_geometry(&self) -> bool {
        self.geometry.is_some()
    }

    /// Problem-derived search settings with any explicit overrides applied.
    pub fn search_config(&self) -> Result<SearchConfig> {
        let geom = self.geometry()?;
        let mut cfg = SearchConfig::for_problem(geom, &self.medium);
        if let Some(v) = self.search.omega_max {
            cfg.omega_max = v;
        }
        if let Some(v) = self.search.grid_points {
            cfg.grid_points = v;
        }
        if let Some(v) = self.search.tol_abs {
            cfg.tol_abs = v;
        }
        if let Some(v) = self.search.tol_rel {
            cfg.tol_rel = v;
        }
        if let Some(v) = self.search.max_iter {
            cfg.max_iter = v;
        }
        if let Some(v) = self.search.imag_seed_offset {
            cfg.imag_seed_offset = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Configuration echo embedded in JSON metadata.
    pub fn echo(&self) -> Value {
        let search = json!({
            "omega_max": self.search.omega_max,
            "grid_points": self.search.grid_points,
            "tol_abs": self.search.tol_abs,
            "tol_rel": self.search.tol_rel,
            "max_iter": self.search.max_iter,
            "imag_seed_offset": self.search.imag_seed_offset,
        });
        json!({
            "radii": self.geometry.as_ref().map(|g| g.radii().to_vec()),
            "materials": {
                "rho_r": self.medium.rho_r,
                "kappa_r": self.medium.kappa_r,
                "rho": self.medium.rho,
                "kappa": self.medium.kappa,
            },
            "delta": self.medium.delta,
            "mode_order": self.mode_order,
            "search_overrides": search,
            "capacity": self.capacity,
            "volume": self.volume,
        })
    }

    /// Metadata object shared by all JSON outputs.
    pub fn metadata(&self) -> Value {
        json!({
            "version": env!("CARGO_PKG_VERSION"),
            "config": self.echo(),
        })
    }
}

fn load_file(path: &PathBuf) -> Result<FileConfig> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let parsed: FileConfig = serde_json::from_str(&text)
        .with_context(|| format!("parsing config {}", path.display()))?;
    Ok(parsed)
}

fn geometry_from_file(file: &FileConfig) -> Result<Option<LayeredGeometry>> {
    let forms = [
        file.radii.is_some(),
        file.equidistant.is_some(),
        file.geometric.is_some(),
    ]
    .iter()
    .filter(|p| **p)
    .count();
    if forms > 1 {
        bail!("config gives more than one geometry form; use exactly one of radii, equidistant, geometric");
    }
    if let Some(radii) = &file.radii {
        return Ok(Some(LayeredGeometry::from_radii(radii.clone())?));
    }
    if let Some(n) = file.equidistant {
        return Ok(Some(geometry_equidistant(n)?));
    }
    if let Some(g) = file.geometric {
        return Ok(Some(geometry_geometric(g.layers, g.r1, g.scale)?));
    }
    Ok(None)
}

fn geometry_from_flags(overrides: &Overrides) -> Result<Option<LayeredGeometry>> {
    if overrides.layers.is_none() && overrides.scale.is_none() && overrides.r1.is_none() {
        return Ok(None);
    }
    let layers = overrides
        .layers
        .context("--scale/--r1 need --layers to define a geometry")?;
    let geom = match overrides.scale {
        Some(scale) => {
            let r1 = overrides.r1.unwrap_or(layers as f64);
            geometry_geometric(layers, r1, scale)?
        }
        None => {
            if overrides.r1.is_some() {
                bail!("--r1 only applies to the geometric progression; add --scale");
            }
            geometry_equidistant(layers)?
        }
    };
    Ok(Some(geom))
}

fn medium_from(file: &FileConfig, overrides: &Overrides) -> Result<MediumSpec> {
    if let Some(delta) = overrides.delta {
        return Ok(MediumSpec::from_contrast(delta)?);
    }
    match (&file.materials, file.delta) {
        (Some(_), Some(_)) => {
            bail!("config gives both materials and delta; use exactly one")
        }
        (Some(m), None) => Ok(make_medium(m.rho_r, m.kappa_r, m.rho, m.kappa)?),
        (None, Some(delta)) => Ok(MediumSpec::from_contrast(delta)?),
        (None, None) => bail!(
            "no material contrast configured: set delta or materials in the config file, or pass --delta"
        ),
    }
}

fn output_from(file: OutputSpec, overrides: &Overrides) -> Result<OutputConfig> {
    let dir = overrides
        .out
        .clone()
        .or(file.dir)
        .unwrap_or_else(|| PathBuf::from("out"));
    let formats = match overrides.format {
        Some(arg) => Formats::from_arg(arg),
        None => match &file.format {
            Some(name) => Formats::from_name(name)?,
            None => Formats::from_arg(FormatArg::All),
        },
    };
    Ok(OutputConfig { dir, formats })
}

/// Output destination for commands that need no geometry or materials.
#[derive(Debug)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub formats: Formats,
}

/// Resolves only the output section of flags + optional config file.
pub fn resolve_output(overrides: &Overrides) -> Result<OutputConfig> {
    let file = match &overrides.config {
        Some(path) => load_file(path)?,
        None => FileConfig::default(),
    };
    output_from(file.output.unwrap_or_default(), overrides)
}

/// Resolves flags + optional config file into run parameters.
pub fn resolve(overrides: &Overrides) -> Result<RunConfig> {
    let file = match &overrides.config {
        Some(path) => load_file(path)?,
        None => FileConfig::default(),
    };

    let geometry = match geometry_from_flags(overrides)? {
        Some(g) => Some(g),
        None => geometry_from_file(&file)?,
    };
    let medium = medium_from(&file, overrides)?;

    let mut search = file.search.unwrap_or_default();
    if let Some(v) = overrides.omega_max {
        search.omega_max = Some(v);
    }
    if let Some(v) = overrides.grid {
        search.grid_points = Some(v);
    }
    if let Some(v) = overrides.tol {
        search.tol_abs = Some(v);
    }

    let output = output_from(file.output.unwrap_or_default(), overrides)?;

    Ok(RunConfig {
        geometry,
        medium,
        mode_order: file.mode_order.unwrap_or(0),
        search,
        out_dir: output.dir,
        formats: output.formats,
        capacity: file.capacity,
        volume: file.volume,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write as _;

    fn with_file(contents: &str) -> (tempfile::TempDir, Overrides) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.json");
        let mut f = fs::File::create(&path).unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        let overrides = Overrides {
            config: Some(path),
            ..Overrides::default()
        };
        (dir, overrides)
    }

    #[test]
    fn file_config_resolves_geometry_and_contrast() {
        let (_dir, overrides) =
            with_file(r#"{"radii": [4.0, 3.0, 2.0, 1.0], "delta": 1e-4}"#);
        let cfg = resolve(&overrides).unwrap();
        assert_eq!(cfg.geometry().unwrap().radii(), &[4.0, 3.0, 2.0, 1.0]);
        assert_eq!(cfg.medium.delta, 1e-4);
        assert_eq!(cfg.mode_order, 0);
        assert_eq!(cfg.out_dir, PathBuf::from("out"));
        assert!(cfg.formats.csv && cfg.formats.json && cfg.formats.svg);
    }

    #[test]
    fn flags_beat_the_file() {
        let (_dir, mut overrides) =
            with_file(r#"{"equidistant": 8, "delta": 1e-2, "output": {"dir": "elsewhere", "format": "csv"}}"#);
        overrides.layers = Some(3);
        overrides.delta = Some(1e-3);
        overrides.out = Some(PathBuf::from("cli-out"));
        overrides.format = Some(FormatArg::Json);
        overrides.grid = Some(512);
        let cfg = resolve(&overrides).unwrap();
        assert_eq!(cfg.geometry().unwrap().n_layers(), 3);
        assert_eq!(cfg.medium.delta, 1e-3);
        assert_eq!(cfg.out_dir, PathBuf::from("cli-out"));
        assert_eq!(cfg.formats, Formats { csv: false, json: true, svg: false });
        assert_eq!(cfg.search.grid_points, Some(512));
    }

    #[test]
    fn geometry_forms_are_mutually_exclusive() {
        let (_dir, overrides) =
            with_file(r#"{"radii": [2.0, 1.0], "equidistant": 4, "delta": 1e-3}"#);
        let err = resolve(&overrides).unwrap_err().to_string();
        assert!(err.contains("exactly one"), "{err}");
    }

    #[test]
    fn materials_and_delta_are_mutually_exclusive() {
        let (_dir, overrides) = with_file(
            r#"{"equidistant": 2, "delta": 1e-3,
                "materials": {"rho_r": 1.0, "kappa_r": 1.0, "rho": 1000.0, "kappa": 1000.0}}"#,
        );
        assert!(resolve(&overrides).is_err());
    }

    #[test]
    fn partial_geometry_flags_are_rejected() {
        let overrides = Overrides {
            scale: Some(0.8),
            delta: Some(1e-3),
            ..Overrides::default()
        };
        assert!(resolve(&overrides).unwrap_err().to_string().contains("--layers"));
        let overrides = Overrides {
            layers: Some(3),
            r1: Some(5.0),
            delta: Some(1e-3),
            ..Overrides::default()
        };
        assert!(resolve(&overrides).unwrap_err().to_string().contains("--scale"));
    }

    #[test]
    fn geometric_flags_build_the_progression() {
        let overrides = Overrides {
            layers: Some(7),
            scale: Some(0.8),
            delta: Some(1e-3),
            ..Overrides::default()
        };
        let cfg = resolve(&overrides).unwrap();
        let radii = cfg.geometry().unwrap().radii().to_vec();
        assert_eq!(radii.len(), 7);
        assert_eq!(radii[0], 7.0);
        assert!((radii[1] - 5.6).abs() < 1e-12);
    }

    #[test]
    fn search_overrides_apply_on_top_of_problem_defaults() {
        let (_dir, overrides) = with_file(
            r#"{"equidistant": 2, "delta": 1e-4,
                "search": {"grid_points": 256, "tol_abs": 1e-13}}"#,
        );
        let cfg = resolve(&overrides).unwrap();
        let sc = cfg.search_config().unwrap();
        assert_eq!(sc.grid_points, 256);
        assert_eq!(sc.tol_abs, 1e-13);
        assert_eq!(sc.max_iter, 100); // untouched default
    }

    #[test]
    fn bad_search_overrides_are_config_errors() {
        let (_dir, overrides) =
            with_file(r#"{"equidistant": 2, "delta": 1e-4, "search": {"grid_points": 3}}"#);
        let cfg = resolve(&overrides).unwrap();
        assert!(cfg.search_config().is_err());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let (_dir, overrides) = with_file(r#"{"equidistant": 2, "delta": 1e-4, "typo": 1}"#);
        assert!(resolve(&overrides).is_err());
    }

    #[test]
    fn metadata_embeds_version_and_echo() {
        let overrides = Overrides {
            layers: Some(2),
            delta: Some(1e-4),
            ..Overrides::default()
        };
        let cfg = resolve(&overrides).unwrap();
        let meta = cfg.metadata();
        assert_eq!(meta["version"], env!("CARGO_PKG_VERSION"));
        assert_eq!(meta["config"]["radii"][0], 2.0);
        assert_eq!(meta["config"]["materials"]["rho"], 10000.0);
    }
}
