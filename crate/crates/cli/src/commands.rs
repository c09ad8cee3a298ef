//! The five subcommands and their exit-code contract.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde_json::json;

use resonator::asymptotics::{
    cvr, hybridization_check, omega_dual3, omega_dual4, omega_general_single, omega_shell,
    omega_solid, AsymptoticFrequency,
};
use resonator::modes::{extract_profile, normalize, sample_plane, sample_radial};
use resonator::rootfind::{find_subwavelength_roots, ResonanceRoot};
use resonator::Error;

use crate::args::{Cli, Command, Overrides};
use crate::config::{self, Formats, RunConfig};
use crate::emit::{fmt_f64, json_text, write_text, Cell, DataTable};
use crate::svg::{mode_svg, spectrum_svg};
use crate::{selftest, table1};

pub const EXIT_OK: i32 = 0;
/// Config/usage errors and any unclassified failure.
pub const EXIT_CONFIG: i32 = 1;
/// Fewer roots than resonator layers after the window expansion.
pub const EXIT_SHORTFALL: i32 = 2;
/// Benchmark table disagrees with the embedded golden values.
pub const EXIT_TABLE_MISMATCH: i32 = 3;
/// At least one selftest invariant failed.
pub const EXIT_SELFTEST: i32 = 4;

/// Radial traces extend to this multiple of the outer radius.
const RADIAL_SPAN: f64 = 1.5;
const RADIAL_POINTS: usize = 601;
/// Plane sections cover [-1.25 r1, 1.25 r1]^2 on an odd grid (center included).
const PLANE_SPAN: f64 = 1.25;
const PLANE_RESOLUTION: usize = 101;

pub fn run(cli: &Cli) -> Result<i32> {
    match cli.command {
        Command::Freqs => cmd_freqs(&config::resolve(&cli.overrides)?),
        Command::Table1 => cmd_table1(&cli.overrides),
        Command::Modes => cmd_modes(&config::resolve(&cli.overrides)?),
        Command::Asymptotic => cmd_asymptotic(&config::resolve(&cli.overrides)?),
        Command::Selftest => cmd_selftest(&cli.overrides),
    }
}

fn emit_table(
    dir: &Path,
    stem: &str,
    table: &DataTable,
    formats: Formats,
    metadata: serde_json::Value,
) -> Result<()> {
    if formats.csv {
        write_text(&dir.join(format!("{stem}.csv")), &table.to_csv())?;
    }
    if formats.json {
        write_text(
            &dir.join(format!("{stem}.json")),
            &json_text(&table.to_json(metadata)),
        )?;
    }
    Ok(())
}

fn spectrum_table(roots: &[ResonanceRoot]) -> DataTable {
    let mut table = DataTable::new(vec![
        "index",
        "re_omega",
        "im_omega",
        "residual",
        "iterations",
    ]);
    for (i, root) in roots.iter().enumerate() {
        table.push(vec![
            Cell::from(i + 1),
            Cell::from(root.omega.re),
            Cell::from(root.omega.im),
            Cell::from(root.residual),
            Cell::from(root.iterations),
        ]);
    }
    table
}

fn cmd_freqs(cfg: &RunConfig) -> Result<i32> {
    let geom = cfg.geometry()?;
    let search = cfg.search_config()?;
    let expected = geom.n_resonators();
    let outcome = find_subwavelength_roots(geom, &cfg.medium, cfg.mode_order, &search);
    let (roots, shortfall) = match outcome {
        Ok(roots) => (roots, false),
        Err(Error::RootShortfall { found, .. }) => (found, true),
        Err(err) => return Err(err.into()),
    };

    emit_table(
        &cfg.out_dir,
        "spectrum",
        &spectrum_table(&roots),
        cfg.formats,
        cfg.metadata(),
    )?;
    if cfg.formats.svg {
        let points: Vec<(f64, f64)> = roots.iter().map(|r| (r.omega.re, r.omega.im)).collect();
        let title = format!(
            "subwavelength spectrum, N = {}, delta = {}",
            geom.n_layers(),
            fmt_f64(cfg.medium.delta)
        );
        write_text(
            &cfg.out_dir.join("spectrum.svg"),
            &spectrum_svg(&points, &title),
        )?;
    }

    println!(
        "{} of {} expected subwavelength roots (order n = {})",
        roots.len(),
        expected,
        cfg.mode_order
    );
    for (i, root) in roots.iter().enumerate() {
        println!(
            "  {:>3}  {} {}i  (residual {:.2e}, {} iterations)",
            i + 1,
            fmt_f64(root.omega.re),
            fmt_f64(root.omega.im),
            root.residual,
            root.iterations
        );
    }
    if shortfall {
        eprintln!(
            "shortfall: found {} of {} roots; partial spectrum written to {}",
            roots.len(),
            expected,
            cfg.out_dir.display()
        );
        return Ok(EXIT_SHORTFALL);
    }
    Ok(EXIT_OK)
}

fn cmd_table1(overrides: &Overrides) -> Result<i32> {
    let out = config::resolve_output(overrides)?;
    let report = table1::run()?;

    println!("1/delta      omega_1^c                 omega_2^c                 err%");
    for row in &report.rows {
        println!(
            "{:>7}  {:>11.7} {:>11.7}i  {:>11.7} {:>11.7}i  {:.4}",
            fmt_f64(1.0 / row.delta),
            row.characteristic[0].re,
            row.characteristic[0].im,
            row.characteristic[1].re,
            row.characteristic[1].im,
            row.percent
        );
        println!(
            "   asym  {:>11.7} {:>11.7}i  {:>11.7} {:>11.7}i",
            row.asymptotic[0].re,
            row.asymptotic[0].im,
            row.asymptotic[1].re,
            row.asymptotic[1].im
        );
    }

    let metadata = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "config": {
            "radii": [4.0, 3.0, 2.0, 1.0],
            "materials": "rho_r = kappa_r = 1, rho = kappa = 1/delta",
            "component_tol": table1::COMPONENT_TOL,
            "percent_tol": table1::PERCENT_TOL,
        },
    });
    emit_table(&out.dir, "table1", &table1::as_table(&report), out.formats, metadata)?;

    if report.passed() {
        println!("table1: all 8 frequencies and 4 percentages match the reference");
        Ok(EXIT_OK)
    } else {
        for cell in &report.mismatches {
            eprintln!("mismatch: {cell}");
        }
        Ok(EXIT_TABLE_MISMATCH)
    }
}

fn cmd_modes(cfg: &RunConfig) -> Result<i32> {
    let geom = cfg.geometry()?;
    if cfg.mode_order != 0 {
        bail!("mode extraction is implemented for the radial order n = 0 only");
    }
    let search = cfg.search_config()?;
    let expected = geom.n_resonators();
    let (roots, shortfall) = match find_subwavelength_roots(geom, &cfg.medium, 0, &search) {
        Ok(roots) => (roots, false),
        Err(Error::RootShortfall { found, .. }) => (found, true),
        Err(err) => return Err(err.into()),
    };

    let modes_dir = cfg.out_dir.join("modes");
    let r1 = geom.outer_radius();
    for (j, root) in roots.iter().enumerate() {
        let index = j + 1;
        let profile = normalize(extract_profile(geom, &cfg.medium, root.omega)?)?;
        let radial = sample_radial(&profile, RADIAL_SPAN * r1, RADIAL_POINTS)?;
        let plane = sample_plane(&profile, PLANE_SPAN * r1, PLANE_RESOLUTION)?;

        let mut radial_table = DataTable::new(vec!["r", "re_u", "im_u", "abs_u", "region"]);
        for row in &radial.rows {
            radial_table.push(vec![
                Cell::from(row.r),
                Cell::from(row.value.re),
                Cell::from(row.value.im),
                Cell::from(row.value.norm()),
                Cell::from(row.region),
            ]);
        }
        let mut plane_table = DataTable::new(vec!["x", "y", "re_u"]);
        for (iy, &y) in plane.coords.iter().enumerate() {
            for (ix, &x) in plane.coords.iter().enumerate() {
                plane_table.push(vec![
                    Cell::from(x),
                    Cell::from(y),
                    Cell::from(plane.values[iy * plane.resolution + ix]),
                ]);
            }
        }

        let mut metadata = cfg.metadata();
        metadata["omega"] = json!([root.omega.re, root.omega.im]);
        metadata["mode_index"] = json!(index);
        emit_table(
            &modes_dir,
            &format!("mode_{index}_radial"),
            &radial_table,
            cfg.formats,
            metadata.clone(),
        )?;
        emit_table(
            &modes_dir,
            &format!("mode_{index}_plane"),
            &plane_table,
            cfg.formats,
            metadata,
        )?;
        if cfg.formats.svg {
            let trace: Vec<(f64, f64)> = radial.rows.iter().map(|s| (s.r, s.value.re)).collect();
            let title = format!(
                "mode {index}: omega = {} {}i",
                fmt_f64(root.omega.re),
                fmt_f64(root.omega.im)
            );
            let svg = mode_svg(
                &trace,
                &radial.marker_radii,
                &plane.values,
                plane.resolution,
                plane.half_extent,
                &plane.circle_radii,
                &title,
            );
            write_text(&modes_dir.join(format!("mode_{index}.svg")), &svg)?;
        }
        println!(
            "mode {index}: omega = {} {}i",
            fmt_f64(root.omega.re),
            fmt_f64(root.omega.im)
        );
    }

    if shortfall {
        eprintln!(
            "shortfall: extracted {} of {} modes; partial output written to {}",
            roots.len(),
            expected,
            modes_dir.display()
        );
        return Ok(EXIT_SHORTFALL);
    }
    Ok(EXIT_OK)
}

fn asymptotic_rows(cfg: &RunConfig) -> Result<(Vec<(String, AsymptoticFrequency)>, DataTable)> {
    let medium = &cfg.medium;
    let (v_r, tau, delta) = (medium.v_r, medium.tau, medium.delta);
    let mut rows: Vec<(String, AsymptoticFrequency)> = Vec::new();

    if cfg.has_geometry() {
        let radii = cfg.geometry()?.radii().to_vec();
        match radii.len() {
            1 => rows.push(("solid".into(), omega_solid(radii[0], v_r, tau, delta)?)),
            2 => rows.push((
                "shell".into(),
                omega_shell(radii[0], radii[1], v_r, tau, delta)?,
            )),
            3 => {
                let (low, high) = omega_dual3(radii[0], radii[1], radii[2], v_r, tau, delta)?;
                rows.push(("triple_low".into(), low));
                rows.push(("triple_high".into(), high));
            }
            4 => {
                let (low, high) =
                    omega_dual4(radii[0], radii[1], radii[2], radii[3], v_r, tau, delta)?;
                rows.push(("quad_low".into(), low));
                rows.push(("quad_high".into(), high));
            }
            n => return Err(Error::NoClosedForm(n).into()),
        }
    } else {
        let capacity = cfg
            .capacity
            .context("asymptotic needs a geometry (N <= 4) or capacity + volume in the config")?;
        let volume = cfg
            .volume
            .context("asymptotic needs both capacity and volume for the general form")?;
        rows.push((
            "general_single".into(),
            omega_general_single(capacity, volume, v_r, tau, delta)?,
        ));
    }

    let mut table = DataTable::new(vec!["branch", "leading", "damping", "re_omega", "im_omega"]);
    for (label, freq) in &rows {
        table.push(vec![
            Cell::Text(label.clone()),
            Cell::from(freq.leading),
            Cell::from(freq.damping),
            Cell::from(freq.omega.re),
            Cell::from(freq.omega.im),
        ]);
    }
    Ok((rows, table))
}

fn cmd_asymptotic(cfg: &RunConfig) -> Result<i32> {
    let (rows, table) = asymptotic_rows(cfg)?;

    for (label, freq) in &rows {
        println!(
            "{label}: omega = {} {}i  (leading {} sqrt(delta), damping {} delta)",
            fmt_f64(freq.omega.re),
            fmt_f64(freq.omega.im),
            fmt_f64(freq.leading),
            fmt_f64(freq.damping)
        );
    }

    let mut metadata = cfg.metadata();
    if cfg.has_geometry() {
        let radii = cfg.geometry()?.radii().to_vec();
        if radii.len() == 2 {
            metadata["cvr"] = json!(cvr(radii[0], radii[1])?);
            println!("cvr: {}", fmt_f64(cvr(radii[0], radii[1])?));
        }
        if radii.len() == 4 {
            let outer = cvr(radii[0], radii[1])?;
            let inner = cvr(radii[2], radii[3])?;
            println!("cvr outer shell: {}", fmt_f64(outer));
            println!("cvr inner shell: {}", fmt_f64(inner));
            match hybridization_check(radii[0], radii[1], radii[2], radii[3], &cfg.medium) {
                Ok(report) => {
                    println!(
                        "hybridization ordering (low < outer <= inner < high): {}",
                        if report.ordering_holds { "holds" } else { "violated" }
                    );
                    metadata["hybridization"] = json!({
                        "cvr_outer": report.cvr_outer,
                        "cvr_inner": report.cvr_inner,
                        "re_low": report.dual_low.omega.re,
                        "re_outer_shell": report.outer_shell.omega.re,
                        "re_inner_shell": report.inner_shell.omega.re,
                        "re_high": report.dual_high.omega.re,
                        "ordering_holds": report.ordering_holds,
                    });
                }
                Err(Error::CvrPrecondition { outer, inner }) => {
                    println!(
                        "hybridization ordering not claimed: cvr precondition violated \
                         (outer {} > inner {})",
                        fmt_f64(outer),
                        fmt_f64(inner)
                    );
                    metadata["hybridization"] =
                        json!({ "cvr_outer": outer, "cvr_inner": inner, "ordering_holds": null });
                }
                Err(other) => return Err(other.into()),
            }
        }
    }

    emit_table(&cfg.out_dir, "asymptotic", &table, cfg.formats, metadata)?;
    Ok(EXIT_OK)
}

fn cmd_selftest(overrides: &Overrides) -> Result<i32> {
    let out = config::resolve_output(overrides)?;
    let checks = selftest::run_all();
    let report = selftest::to_json(&checks);
    print!("{}", json_text(&report));
    if out.formats.json {
        write_text(&out.dir.join("selftest.json"), &json_text(&report))?;
    }
    if checks.iter().all(|c| c.passed) {
        Ok(EXIT_OK)
    } else {
        for failed in checks.iter().filter(|c| !c.passed) {
            eprintln!("selftest failure: {}: {}", failed.name, failed.detail);
        }
        Ok(EXIT_SELFTEST)
    }
}
