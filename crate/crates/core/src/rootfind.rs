//! Muller root search for the subwavelength resonances.
//!
//! The search scans the scaled determinant along two real frequency grids
//! (a uniform one across the window and a log-spaced one for the low end,
//! where the determinant pole at omega = 0 would otherwise swallow the
//! dips), polishes every local minimum with Muller's method (seeded
//! slightly below the real axis, where the physical resonances live),
//! verifies each candidate against the undeflated determinant, and deflates
//! accepted roots together with their mirror images `-conj(omega)` so later
//! polishes cannot stumble back into them.

use num_complex::Complex64;

use crate::asymptotics;
use crate::dispersion::{dispersion_fn, ScaledDeterminant};
use crate::medium::{LayeredGeometry, MediumSpec};
use crate::{Error, Result};

/// Relative residual (against the local determinant scale) below which a
/// polished frequency counts as a genuine characteristic value.
pub const ROOT_RESIDUAL_TOL: f64 = 1e-6;

/// Radius of the verification circle, relative to `|omega|`.
const VERIFY_CIRCLE_RADIUS: f64 = 1e-2;
/// Points sampled on the verification circle.
const VERIFY_CIRCLE_POINTS: usize = 16;
/// Iterates beyond this multiple of the window abort as divergent.
const ESCAPE_FACTOR: f64 = 10.0;
/// Roots closer than this multiple of `tol_abs` are merged.
const MERGE_FACTOR: f64 = 10.0;
/// Deflation re-scan sweeps per window before giving up on new minima.
const MAX_SWEEPS: usize = 4;
/// The log-spaced scan reaches down to this fraction of the window.
const LOG_SPAN_FLOOR: f64 = 1e-4;
/// Sliding-window length (in grid steps) of the phase-swing detector.
const PHASE_WINDOW: usize = 16;
/// Accumulated phase change (radians) flagging a zero near the window.
const PHASE_SWING_MIN: f64 = 1.0;

/// Tuning of the root search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    /// Upper end of the scanned frequency window `(0, omega_max]`.
    pub omega_max: f64,
    /// Number of real-axis scan points.
    pub grid_points: usize,
    /// Absolute step tolerance for Muller convergence.
    pub tol_abs: f64,
    /// Relative step tolerance for Muller convergence.
    pub tol_rel: f64,
    /// Iteration cap per polish.
    pub max_iter: usize,
    /// Seeds start this far below the real axis.
    pub imag_seed_offset: f64,
}

impl SearchConfig {
    /// Defaults sized from the leading-order frequency scale of the
    /// outermost resonator shell: an 8x envelope around
    /// `v_r sqrt(3 delta r1 / (r1^3 - r2^3))`, widened by the square root
    /// of the resonator count to cover hybridized branches.
    pub fn for_problem(geom: &LayeredGeometry, medium: &MediumSpec) -> Self {
        let radii = geom.radii();
        let r1 = radii[0];
        let r2 = if radii.len() >= 2 { radii[1] } else { 0.0 };
        let shell_ratio = r1 / (r1.powi(3) - r2.powi(3) + 1e-30);
        let omega_max = 8.0
            * medium.v_r
            * (3.0 * medium.delta * shell_ratio).sqrt()
            * (geom.n_resonators() as f64).sqrt();
        SearchConfig {
            omega_max,
            grid_points: 2048,
            tol_abs: 1e-12,
            tol_rel: 1e-10,
            max_iter: 100,
            imag_seed_offset: medium.delta,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let complain = |msg: String| Err(Error::BadSearchConfig(msg));
        if !(self.omega_max > 0.0) || !self.omega_max.is_finite() {
            return complain(format!("omega_max must be positive (got {})", self.omega_max));
        }
        if self.grid_points < 64 {
            return complain(format!("grid_points must be >= 64 (got {})", self.grid_points));
        }
        if !(self.tol_abs > 0.0) || !(self.tol_rel > 0.0) {
            return complain(format!(
                "tolerances must be positive (got tol_abs {}, tol_rel {})",
                self.tol_abs, self.tol_rel
            ));
        }
        if self.max_iter < 3 {
            return complain(format!("max_iter must be >= 3 (got {})", self.max_iter));
        }
        if !(self.imag_seed_offset > 0.0) || !self.imag_seed_offset.is_finite() {
            return complain(format!(
                "imag_seed_offset must be positive (got {})",
                self.imag_seed_offset
            ));
        }
        Ok(())
    }
}

/// One verified resonance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceRoot {
    pub omega: Complex64,
    /// Determinant magnitude at `omega` relative to the local scale.
    pub residual: f64,
    /// Muller iterations spent on the final polish.
    pub iterations: usize,
    /// Seed that initiated convergence.
    pub seed: Complex64,
}

/// Muller's method: quadratic interpolation through three iterates, keeping
/// the root of the larger-magnitude denominator branch.
pub fn muller<F>(f: &F, seeds: [Complex64; 3], cfg: &SearchConfig) -> Result<ResonanceRoot>
where
    F: Fn(Complex64) -> Result<ScaledDeterminant>,
{
    cfg.validate()?;
    if seeds[0] == seeds[1] || seeds[1] == seeds[2] || seeds[0] == seeds[2] {
        return Err(Error::DegenerateSeeds);
    }
    let mut attempt = seeds;
    let mut restarts = 0;
    loop {
        match muller_once(f, attempt, seeds[2], cfg) {
            // An iterate (or seed) fell onto the omega = 0 pole: jitter and
            // restart.
            Err(Error::OmegaPole) if restarts < 3 => {
                restarts += 1;
                let nudge = Complex64::new(0.0, -(cfg.imag_seed_offset * 1e-3 + cfg.tol_abs))
                    * restarts as f64;
                for s in &mut attempt {
                    *s = *s * (1.0 + 1e-6 * restarts as f64) + nudge;
                }
            }
            other => return other,
        }
    }
}

fn muller_once<F>(
    f: &F,
    seeds: [Complex64; 3],
    reported_seed: Complex64,
    cfg: &SearchConfig,
) -> Result<ResonanceRoot>
where
    F: Fn(Complex64) -> Result<ScaledDeterminant>,
{
    let eval = |w: Complex64| -> Result<ScaledDeterminant> {
        let v = f(w)?;
        if !v.is_finite() {
            return Err(Error::Diverged { omega: w });
        }
        Ok(v)
    };

    let [mut x0, mut x1, mut x2] = seeds;
    let mut f0 = eval(x0)?;
    let mut f1 = eval(x1)?;
    let mut f2 = eval(x2)?;
    let mut iterations = 0;

    loop {
        if f2.is_zero() {
            break;
        }
        if iterations >= cfg.max_iter {
            return Err(Error::NoConvergence {
                iterations,
                last: x2,
            });
        }
        iterations += 1;

        // Bring the three determinant values to a common binary exponent;
        // near a root the spread is small, far away only ratios matter.
        let reference = [&f0, &f1, &f2]
            .iter()
            .filter(|v| !v.is_zero())
            .map(|v| v.exponent())
            .max()
            .unwrap_or(0);
        let g0 = f0.relative_to(reference);
        let g1 = f1.relative_to(reference);
        let g2 = f2.relative_to(reference);

        let h0 = x1 - x0;
        let h1 = x2 - x1;
        if h0 == Complex64::new(0.0, 0.0) || h1 == Complex64::new(0.0, 0.0) {
            break;
        }
        let d0 = (g1 - g0) / h0;
        let d1 = (g2 - g1) / h1;
        let span = h1 + h0;
        let a = if span == Complex64::new(0.0, 0.0) {
            Complex64::new(0.0, 0.0)
        } else {
            (d1 - d0) / span
        };
        let b = a * h1 + d1;
        let root = (b * b - 4.0 * a * g2).sqrt();
        let den_plus = b + root;
        let den_minus = b - root;
        let den = if den_plus.norm() >= den_minus.norm() {
            den_plus
        } else {
            den_minus
        };
        let dx = if den == Complex64::new(0.0, 0.0) {
            // Flat data: fall back to a secant-like shift.
            if d1 == Complex64::new(0.0, 0.0) {
                h1
            } else {
                -g2 / d1
            }
        } else {
            -2.0 * g2 / den
        };
        let x_next = x2 + dx;
        if !x_next.re.is_finite() || !x_next.im.is_finite() {
            return Err(Error::Diverged { omega: x2 });
        }
        if x_next.norm() > ESCAPE_FACTOR * cfg.omega_max {
            return Err(Error::Diverged { omega: x_next });
        }
        if x_next == Complex64::new(0.0, 0.0) {
            // Hitting the pole of the radiating terms exactly; restart with
            // jittered seeds.
            return Err(Error::OmegaPole);
        }
        let f_next = eval(x_next)?;
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
        x2 = x_next;
        f2 = f_next;
        if dx.norm() <= cfg.tol_abs + cfg.tol_rel * x2.norm() {
            break;
        }
    }

    let (_, residual) = verify_root(f, x2, ROOT_RESIDUAL_TOL);
    Ok(ResonanceRoot {
        omega: x2,
        residual,
        iterations,
        seed: reported_seed,
    })
}

/// Checks `|f(omega)|` against the median determinant magnitude on a circle
/// of radius `|omega| * 1e-2` around the candidate. Returns the pass flag
/// and the relative residual.
pub fn verify_root<F>(f: &F, omega: Complex64, scale_tol: f64) -> (bool, f64)
where
    F: Fn(Complex64) -> Result<ScaledDeterminant>,
{
    let center = match f(omega) {
        Ok(v) if v.is_finite() => v,
        _ => return (false, f64::INFINITY),
    };
    let radius = omega.norm() * VERIFY_CIRCLE_RADIUS;
    if radius == 0.0 {
        return (false, f64::INFINITY);
    }
    let mut logs = Vec::with_capacity(VERIFY_CIRCLE_POINTS);
    for k in 0..VERIFY_CIRCLE_POINTS {
        let angle = 2.0 * std::f64::consts::PI * k as f64 / VERIFY_CIRCLE_POINTS as f64;
        let point = omega + Complex64::from_polar(radius, angle);
        if let Ok(v) = f(point) {
            if v.is_finite() {
                logs.push(v.abs_log2());
            }
        }
    }
    if logs.len() < VERIFY_CIRCLE_POINTS / 2 {
        return (false, f64::INFINITY);
    }
    logs.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let median = logs[logs.len() / 2];
    let residual = (center.abs_log2() - median).exp2();
    (residual <= scale_tol, residual)
}

/// Divides out accepted roots and their mirror images.
fn deflated_value(
    value: ScaledDeterminant,
    omega: Complex64,
    roots: &[Complex64],
) -> ScaledDeterminant {
    let mut v = value;
    for &r in roots {
        v = v.div_complex(omega - r).div_complex(omega + r.conj());
    }
    v
}

/// Finds the subwavelength resonances of the layered structure at the given
/// angular order: all determinant zeros in `(0, omega_max] x [-omega_max, 0)`.
///
/// Returns them sorted by ascending real part. If fewer than one root per
/// resonator layer is found, the window is doubled once and rescanned; a
/// remaining shortfall is reported as [`Error::RootShortfall`] carrying the
/// verified partial result.
pub fn find_subwavelength_roots(
    geom: &LayeredGeometry,
    medium: &MediumSpec,
    order: u32,
    cfg: &SearchConfig,
) -> Result<Vec<ResonanceRoot>> {
    cfg.validate()?;
    let expected = geom.n_resonators();
    let raw = dispersion_fn(geom, medium, order);
    let mut accepted: Vec<ResonanceRoot> = Vec::new();

    let mut window = cfg.omega_max;
    for expansion in 0..2 {
        let local = SearchConfig {
            omega_max: window,
            ..*cfg
        };
        sweep_window(&raw, geom, medium, &local, expansion == 0, &mut accepted);
        if accepted.len() >= expected {
            break;
        }
        if expansion == 0 {
            log::info!(
                "found {}/{} roots in (0, {window}]; doubling the window",
                accepted.len(),
                expected
            );
            window *= 2.0;
        }
    }

    accepted.sort_by(|a, b| a.omega.re.partial_cmp(&b.omega.re).unwrap());
    if accepted.len() < expected {
        return Err(Error::RootShortfall {
            expected,
            found: accepted,
        });
    }
    Ok(accepted)
}

fn sweep_window<F>(
    raw: &F,
    geom: &LayeredGeometry,
    medium: &MediumSpec,
    cfg: &SearchConfig,
    seed_from_asymptotics: bool,
    accepted: &mut Vec<ResonanceRoot>,
) where
    F: Fn(Complex64) -> Result<ScaledDeterminant>,
{
    let expected = geom.n_resonators();
    for sweep in 0..MAX_SWEEPS {
        if accepted.len() >= expected {
            return;
        }
        let mut candidates: Vec<(Complex64, f64)> = Vec::new();
        if sweep == 0 && seed_from_asymptotics {
            for omega in closed_form_seeds(geom, medium) {
                candidates.push((omega, omega.norm() * 1e-3));
            }
        }
        let known: Vec<Complex64> = accepted.iter().map(|r| r.omega).collect();
        for grid in [uniform_grid(cfg), log_grid(cfg)] {
            let scan = scan_grid(raw, &known, &grid);
            candidates.extend(scan.minima);
            candidates.extend(scan.swings);
        }
        candidates.sort_by(|a, b| a.0.re.partial_cmp(&b.0.re).unwrap());

        let before = accepted.len();
        for (center, h) in candidates {
            if accepted.len() >= expected {
                break;
            }
            polish_candidate(raw, center, h, cfg, accepted);
        }
        if accepted.len() == before {
            return;
        }
    }
}

/// Two-term closed-form frequencies used as high-quality seeds for up to
/// four layers.
fn closed_form_seeds(geom: &LayeredGeometry, medium: &MediumSpec) -> Vec<Complex64> {
    let r = geom.radii();
    let (v_r, tau, delta) = (medium.v_r, medium.tau, medium.delta);
    let result: Result<Vec<Complex64>> = match r.len() {
        1 => asymptotics::omega_solid(r[0], v_r, tau, delta).map(|a| vec![a.omega]),
        2 => asymptotics::omega_shell(r[0], r[1], v_r, tau, delta).map(|a| vec![a.omega]),
        3 => asymptotics::omega_dual3(r[0], r[1], r[2], v_r, tau, delta)
            .map(|(lo, hi)| vec![lo.omega, hi.omega]),
        4 => asymptotics::omega_dual4(r[0], r[1], r[2], r[3], v_r, tau, delta)
            .map(|(lo, hi)| vec![lo.omega, hi.omega]),
        _ => Ok(Vec::new()),
    };
    result.unwrap_or_default()
}

/// Uniform scan points over `(0, omega_max]`.
fn uniform_grid(cfg: &SearchConfig) -> Vec<f64> {
    let h = cfg.omega_max / cfg.grid_points as f64;
    (1..=cfg.grid_points).map(|i| i as f64 * h).collect()
}

/// Log-spaced scan points over `[omega_max * LOG_SPAN_FLOOR, omega_max]`.
///
/// Near omega = 0 the radiating terms turn the determinant into a steep
/// power-law ramp; on a uniform grid its per-step growth can exceed the
/// local contrast of a genuine zero and no three-point minimum survives.
/// On a geometric grid, the ramp contributes a near-constant increment per
/// step, so the dips of the lowest resonances stay visible.
fn log_grid(cfg: &SearchConfig) -> Vec<f64> {
    let n = cfg.grid_points;
    let step = LOG_SPAN_FLOOR.ln().abs() / (n - 1) as f64;
    (0..n)
        .map(|i| cfg.omega_max * (-((n - 1 - i) as f64) * step).exp())
        .collect()
}

/// Candidates extracted from one scan pass: magnitude minima and phase
/// swings, each as `(center, seed half-width)`.
struct GridScan {
    minima: Vec<(Complex64, f64)>,
    swings: Vec<(Complex64, f64)>,
}

/// Scans the deflated determinant along an ascending frequency grid.
///
/// Two detectors share one evaluation pass. Three-point magnitude minima
/// catch well-separated zeros. Zeros whose |Im omega| exceeds the local
/// spacing leave no visible dip on a steep ramp, but their phase still
/// swings by ~pi along the real line (over a width of |Im omega|), so a
/// sliding window that accumulates more than [`PHASE_SWING_MIN`] radians
/// flags them regardless of the magnitude trend. Deflated roots contribute
/// no swing, which keeps re-detection of known roots suppressed.
fn scan_grid<F>(raw: &F, known: &[Complex64], omegas: &[f64]) -> GridScan
where
    F: Fn(Complex64) -> Result<ScaledDeterminant>,
{
    use std::f64::consts::{PI, TAU};

    let n = omegas.len();
    let mut vals = Vec::with_capacity(n);
    let mut args = Vec::with_capacity(n);
    for &om in omegas {
        let w = Complex64::new(om, 0.0);
        match raw(w) {
            Ok(v) if v.is_finite() && !v.is_zero() => {
                let d = deflated_value(v, w, known);
                vals.push(d.abs_log2());
                args.push(d.mantissa().arg());
            }
            Ok(v) if v.is_finite() => {
                vals.push(f64::NEG_INFINITY);
                args.push(f64::NAN);
            }
            _ => {
                vals.push(f64::INFINITY);
                args.push(f64::NAN);
            }
        }
    }

    let spacing = |i: usize| -> f64 {
        let left = if i == 0 { f64::INFINITY } else { omegas[i] - omegas[i - 1] };
        let right = if i + 1 == n { f64::INFINITY } else { omegas[i + 1] - omegas[i] };
        let h = left.min(right);
        if h.is_finite() { h } else { omegas[i] * 1e-3 }
    };

    let mut minima = Vec::new();
    for i in 0..n {
        let left = if i == 0 { f64::INFINITY } else { vals[i - 1] };
        let right = if i + 1 == n { f64::INFINITY } else { vals[i + 1] };
        if vals[i].is_finite() && vals[i] <= left && vals[i] <= right && (vals[i] < left || vals[i] < right)
        {
            minima.push((Complex64::new(omegas[i], 0.0), 0.5 * spacing(i)));
        }
    }

    let wrap = |mut d: f64| {
        d %= TAU;
        if d > PI {
            d -= TAU;
        } else if d < -PI {
            d += TAU;
        }
        d
    };
    let deltas: Vec<f64> = (0..n.saturating_sub(1))
        .map(|i| {
            if args[i].is_nan() || args[i + 1].is_nan() {
                0.0
            } else {
                wrap(args[i + 1] - args[i])
            }
        })
        .collect();
    let mut swings = Vec::new();
    let mut i = 0;
    while i + PHASE_WINDOW <= deltas.len() {
        let sum: f64 = deltas[i..i + PHASE_WINDOW].iter().sum();
        if sum.abs() >= PHASE_SWING_MIN {
            // The steepest step marks the closest approach to the zero.
            let k = (i..i + PHASE_WINDOW)
                .max_by(|&a, &b| deltas[a].abs().partial_cmp(&deltas[b].abs()).unwrap())
                .unwrap();
            swings.push((Complex64::new(omegas[k], 0.0), spacing(k)));
            i += PHASE_WINDOW;
        } else {
            i += 1;
        }
    }

    GridScan { minima, swings }
}

fn polish_candidate<F>(
    raw: &F,
    center: Complex64,
    h: f64,
    cfg: &SearchConfig,
    accepted: &mut Vec<ResonanceRoot>,
) where
    F: Fn(Complex64) -> Result<ScaledDeterminant>,
{
    let known: Vec<Complex64> = accepted.iter().map(|r| r.omega).collect();
    let deflated = |w: Complex64| raw(w).map(|v| deflated_value(v, w, &known));
    // Seed offset ladder: the configured offset first (sized for the
    // closed-form regime, where |Im omega| ~ delta), then the local grid
    // spacing and a fraction of the candidate itself. On the low-frequency
    // ramp a fixed offset can dwarf the dip and throw Muller off entirely.
    let offsets: &[f64] = if center.im == 0.0 {
        &[cfg.imag_seed_offset, h, 0.02 * center.re]
    } else {
        &[0.0, h]
    };
    for &off in offsets {
        let offset = Complex64::new(0.0, -off);
        let seeds = [center - h + offset, center + h + offset, center + offset];
        let polished = match muller(&deflated, seeds, cfg) {
            Ok(r) => r,
            Err(err) => {
                log::debug!("polish near {center} (offset {off:.3e}) failed: {err}");
                continue;
            }
        };
        let omega = polished.omega;
        if !(omega.re > 0.0) || !(omega.im <= 0.0) || omega.re > cfg.omega_max {
            log::debug!("rejecting {omega}: outside the physical window");
            continue;
        }
        let merge_radius = MERGE_FACTOR * cfg.tol_abs;
        if accepted.iter().any(|r| (r.omega - omega).norm() <= merge_radius) {
            // The candidate's basin is an already-known root; retrying with
            // other offsets would only land there again.
            log::info!("merging duplicate root at {omega}");
            return;
        }
        let (ok, residual) = verify_root(raw, omega, ROOT_RESIDUAL_TOL);
        if !ok {
            log::debug!("rejecting {omega}: residual {residual:.3e}");
            continue;
        }
        log::debug!(
            "accepted root {omega} (residual {residual:.3e}, {} iterations)",
            polished.iterations
        );
        accepted.push(ResonanceRoot {
            omega,
            residual,
            iterations: polished.iterations,
            seed: polished.seed,
        });
        return;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::medium::{geometry_equidistant, MediumSpec};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn plain_cfg() -> SearchConfig {
        SearchConfig {
            omega_max: 10.0,
            grid_points: 64,
            tol_abs: 1e-12,
            tol_rel: 1e-10,
            max_iter: 100,
            imag_seed_offset: 1e-4,
        }
    }

    fn quadratic(w: Complex64) -> Result<ScaledDeterminant> {
        Ok(ScaledDeterminant::from_complex(w * w + 1.0))
    }

    #[test]
    fn muller_finds_the_upper_root_of_w2_plus_1() {
        let root = muller(
            &quadratic,
            [c(0.5, 0.5), c(1.0, 1.0), c(0.3, 2.0)],
            &plain_cfg(),
        )
        .unwrap();
        assert!((root.omega - c(0.0, 1.0)).norm() <= 1e-10);
        assert!(root.residual <= 1e-12, "residual {}", root.residual);
        assert_eq!(root.seed, c(0.3, 2.0));

        let mirror = muller(
            &quadratic,
            [c(0.5, -0.5), c(1.0, -1.0), c(0.3, -2.0)],
            &plain_cfg(),
        )
        .unwrap();
        assert!((mirror.omega - c(0.0, -1.0)).norm() <= 1e-10);
    }

    #[test]
    fn muller_rejects_degenerate_seeds_and_caps_iterations() {
        assert!(matches!(
            muller(&quadratic, [c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)], &plain_cfg()),
            Err(Error::DegenerateSeeds)
        ));
        // exp has no zeros: the polish must give up rather than loop.
        let hopeless = |w: Complex64| Ok(ScaledDeterminant::from_complex(w.exp()));
        let err = muller(&hopeless, [c(0.1, 0.1), c(0.3, -0.2), c(0.5, 0.1)], &plain_cfg());
        assert!(
            matches!(err, Err(Error::NoConvergence { .. }) | Err(Error::Diverged { .. })),
            "got {err:?}"
        );
    }

    #[test]
    fn deflation_steers_muller_to_the_remaining_root() {
        let w1 = c(0.3, -0.05);
        let w2 = c(0.9, -0.01);
        let full = move |w: Complex64| {
            Ok(ScaledDeterminant::from_complex(
                (w - w1) * (w + w1.conj()) * (w - w2) * (w + w2.conj()),
            ))
        };
        // Seeds hug the first root, but with it deflated the polish must
        // land on the second.
        let known = [w1];
        let deflated = move |w: Complex64| full(w).map(|v| deflated_value(v, w, &known));
        let root = muller(
            &deflated,
            [c(0.28, -0.04), c(0.32, -0.06), c(0.3, -0.049)],
            &plain_cfg(),
        )
        .unwrap();
        assert!(
            (root.omega - w2).norm() <= 1e-9,
            "converged to {} instead of {w2}",
            root.omega
        );
    }

    #[test]
    fn phase_swing_detector_flags_a_ramp_buried_zero() {
        // A zero 8e-6 below the axis on an omega^-10 ramp: its |Im| exceeds
        // the local log-grid spacing, so the real-axis magnitude dip is
        // flattened below the three-point contrast and only the ~pi phase
        // swing across Re(root) betrays it.
        let w0 = c(6e-4, -8e-6);
        let f = move |w: Complex64| {
            Ok(ScaledDeterminant::from_complex(
                (w - w0) * (w + w0.conj()) / w.powu(10),
            ))
        };
        let mut cfg = plain_cfg();
        cfg.omega_max = 0.07;
        cfg.grid_points = 2048;
        let scan = scan_grid(&f, &[], &log_grid(&cfg));
        assert!(
            scan.swings.iter().any(|(w, _)| (w.re - w0.re).abs() < 5e-5),
            "phase detector missed the buried zero: {:?}",
            scan.swings
        );
        let mut accepted = Vec::new();
        for (center, h) in scan.minima.into_iter().chain(scan.swings) {
            polish_candidate(&f, center, h, &cfg, &mut accepted);
        }
        assert!(
            accepted.iter().any(|r| (r.omega - w0).norm() <= 1e-9),
            "polish did not land on the buried zero: {accepted:?}"
        );
    }

    #[test]
    fn log_grid_spans_four_decades_ascending() {
        let mut cfg = plain_cfg();
        cfg.omega_max = 2.0;
        cfg.grid_points = 256;
        let grid = log_grid(&cfg);
        assert_eq!(grid.len(), 256);
        assert!(grid.windows(2).all(|w| w[0] < w[1]));
        assert!((grid[255] - 2.0).abs() <= 1e-15);
        assert!((grid[0] - 2.0e-4).abs() <= 1e-12);
    }

    #[test]
    fn verify_root_separates_roots_from_near_misses() {
        let geom = geometry_equidistant(1).unwrap();
        let medium = MediumSpec::from_contrast(1e-4).unwrap();
        let f = dispersion_fn(&geom, &medium, 0);
        // 25-digit reference root of the single-layer structure.
        let root = c(0.017319685437909573, -0.00014999400100278001);
        let (ok, residual) = verify_root(&f, root, ROOT_RESIDUAL_TOL);
        assert!(ok, "true root rejected with residual {residual}");
        let (ok, residual) = verify_root(&f, root * 1.01, ROOT_RESIDUAL_TOL);
        assert!(!ok, "displaced root accepted with residual {residual}");
        // The mirror image is a root of the conjugate-symmetric determinant.
        let (ok, _) = verify_root(&f, -root.conj(), ROOT_RESIDUAL_TOL);
        assert!(ok);
    }

    #[test]
    fn single_layer_search_matches_reference() {
        let geom = geometry_equidistant(1).unwrap();
        let medium = MediumSpec::from_contrast(1e-4).unwrap();
        let cfg = SearchConfig::for_problem(&geom, &medium);
        let roots = find_subwavelength_roots(&geom, &medium, 0, &cfg).unwrap();
        assert_eq!(roots.len(), 1);
        let want = c(0.017319685437909573, -0.00014999400100278001);
        assert!(
            (roots[0].omega - want).norm() <= 1e-10,
            "got {} want {want}",
            roots[0].omega
        );
        assert!(roots[0].residual <= ROOT_RESIDUAL_TOL);
    }

    #[test]
    fn shell_and_triple_searches_match_references() {
        let medium = MediumSpec::from_contrast(1e-4).unwrap();

        let geom = geometry_equidistant(2).unwrap();
        let cfg = SearchConfig::for_problem(&geom, &medium);
        let roots = find_subwavelength_roots(&geom, &medium, 0, &cfg).unwrap();
        assert_eq!(roots.len(), 1);
        let want = c(0.0092576682232375687, -8.5710472760615222e-5);
        assert!((roots[0].omega - want).norm() <= 1e-10, "got {}", roots[0].omega);

        let geom = geometry_equidistant(3).unwrap();
        let cfg = SearchConfig::for_problem(&geom, &medium);
        let roots = find_subwavelength_roots(&geom, &medium, 0, &cfg).unwrap();
        assert_eq!(roots.len(), 2);
        let want_low = c(0.0066942169387008214, -6.693383628994746e-5);
        let want_high = c(0.025180122519678369, -4.1165127625630269e-6);
        assert!((roots[0].omega - want_low).norm() <= 1e-10, "got {}", roots[0].omega);
        assert!((roots[1].omega - want_high).norm() <= 1e-10, "got {}", roots[1].omega);
    }

    #[test]
    fn four_layer_search_reproduces_characteristic_pair() {
        let geom = geometry_equidistant(4).unwrap();
        let medium = MediumSpec::from_contrast(1.0 / 6000.0).unwrap();
        let cfg = SearchConfig::for_problem(&geom, &medium);
        let roots = find_subwavelength_roots(&geom, &medium, 0, &cfg).unwrap();
        assert_eq!(roots.len(), 2);
        for (root, want) in roots
            .iter()
            .zip([c(0.0066797, -0.0000875), c(0.0227810, -0.0000206)])
        {
            assert!(
                (root.omega.re - want.re).abs() <= 1e-7 && (root.omega.im - want.im).abs() <= 1e-7,
                "got {} want {want}",
                root.omega
            );
        }
    }

    #[test]
    fn search_is_deterministic() {
        let geom = geometry_equidistant(3).unwrap();
        let medium = MediumSpec::from_contrast(1e-3).unwrap();
        let cfg = SearchConfig::for_problem(&geom, &medium);
        let a = find_subwavelength_roots(&geom, &medium, 0, &cfg).unwrap();
        let b = find_subwavelength_roots(&geom, &medium, 0, &cfg).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.omega, y.omega);
            assert_eq!(x.residual, y.residual);
            assert_eq!(x.iterations, y.iterations);
        }
    }

    #[test]
    fn root_counts_follow_resonator_parity() {
        let medium = MediumSpec::from_contrast(1e-3).unwrap();
        for n in 1..=8 {
            let geom = geometry_equidistant(n).unwrap();
            let cfg = SearchConfig::for_problem(&geom, &medium);
            let roots = find_subwavelength_roots(&geom, &medium, 0, &cfg).unwrap();
            assert_eq!(
                roots.len(),
                geom.n_resonators(),
                "layer count {n}: got {} roots",
                roots.len()
            );
            for r in &roots {
                assert!(r.omega.re > 0.0 && r.omega.im <= 0.0);
            }
        }
    }

    #[test]
    fn starving_the_window_reports_a_shortfall() {
        let geom = geometry_equidistant(4).unwrap();
        let medium = MediumSpec::from_contrast(1.0 / 6000.0).unwrap();
        let mut cfg = SearchConfig::for_problem(&geom, &medium);
        // Even after one doubling the window only reaches the lower root.
        cfg.omega_max = 0.004;
        match find_subwavelength_roots(&geom, &medium, 0, &cfg) {
            Err(Error::RootShortfall { expected, found }) => {
                assert_eq!(expected, 2);
                assert_eq!(found.len(), 1);
                assert!((found[0].omega.re - 0.0066797).abs() <= 1e-6);
            }
            other => panic!("expected a shortfall, got {other:?}"),
        }
    }

    #[test]
    fn config_validation_rejects_nonsense() {
        let mut cfg = plain_cfg();
        cfg.grid_points = 32;
        assert!(cfg.validate().is_err());
        let mut cfg = plain_cfg();
        cfg.omega_max = 0.0;
        assert!(cfg.validate().is_err());
        let mut cfg = plain_cfg();
        cfg.tol_abs = -1.0;
        assert!(cfg.validate().is_err());
    }
}
