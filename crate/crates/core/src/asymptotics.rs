//! Two-term closed forms for the subwavelength resonances.
//!
//! Every frequency below has the shape `omega = a1 sqrt(delta) + i a2 delta`
//! with a real leading coefficient `a1 > 0` and a purely imaginary damping
//! term, `Im(a2) <= 0`. Single resonators (solid ball or one shell) follow
//! the capacity/volume form; three- and four-layer structures hybridize into
//! a low and a high branch.

use num_complex::Complex64;

use crate::medium::MediumSpec;
use crate::{Error, Result};

use std::f64::consts::PI;

/// One two-term frequency `leading * sqrt(delta) + i * damping * delta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticFrequency {
    pub omega: Complex64,
    /// Real coefficient of `sqrt(delta)`.
    pub leading: f64,
    /// Imaginary coefficient of `delta`; never positive.
    pub damping: f64,
    /// 1 for the lower hybridized branch (or a single resonance), 2 for the
    /// upper branch.
    pub branch: u8,
}

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if !(value > 0.0) || !value.is_finite() {
        return Err(Error::NonPositive { name, value });
    }
    Ok(())
}

fn frequency(leading: f64, damping: f64, delta: f64, branch: u8) -> AsymptoticFrequency {
    AsymptoticFrequency {
        omega: Complex64::new(leading * delta.sqrt(), damping * delta),
        leading,
        damping,
        branch,
    }
}

/// Electrostatic capacity of a ball of radius `r1`.
pub fn ball_capacity(r1: f64) -> f64 {
    4.0 * PI * r1
}

/// Volume of a ball of radius `r1`.
pub fn ball_volume(r1: f64) -> f64 {
    4.0 * PI * r1.powi(3) / 3.0
}

/// Volume of the shell between radii `r1 > r2`.
pub fn shell_volume(r1: f64, r2: f64) -> f64 {
    4.0 * PI * (r1.powi(3) - r2.powi(3)) / 3.0
}

/// Capacity-to-volume frequency of a single resonator of capacity `cap` and
/// material volume `vol`:
/// `v_r sqrt(cap/vol) sqrt(delta) - i (cap^2 v_r / (8 pi tau vol)) delta`.
pub fn omega_general_single(
    cap: f64,
    vol: f64,
    v_r: f64,
    tau: f64,
    delta: f64,
) -> Result<AsymptoticFrequency> {
    check_positive("capacity", cap)?;
    check_positive("volume", vol)?;
    check_positive("v_r", v_r)?;
    check_positive("tau", tau)?;
    check_positive("delta", delta)?;
    let leading = v_r * (cap / vol).sqrt();
    let damping = -cap * cap * v_r / (8.0 * PI * tau * vol);
    Ok(frequency(leading, damping, delta, 1))
}

/// Fundamental resonance of a solid ball of radius `r1`:
/// `sqrt(3) v_r / r1 * sqrt(delta) - i (3 v_r / (2 tau r1)) delta`.
pub fn omega_solid(r1: f64, v_r: f64, tau: f64, delta: f64) -> Result<AsymptoticFrequency> {
    check_positive("r1", r1)?;
    omega_general_single(ball_capacity(r1), ball_volume(r1), v_r, tau, delta)
}

/// Fundamental resonance of a single shell `r1 > r2`:
/// `sqrt(3 r1) v_r / sqrt(r1^3 - r2^3) * sqrt(delta)
///  - i (3 r1^2 v_r / (2 tau (r1^3 - r2^3))) delta`.
pub fn omega_shell(
    r1: f64,
    r2: f64,
    v_r: f64,
    tau: f64,
    delta: f64,
) -> Result<AsymptoticFrequency> {
    check_positive("r1", r1)?;
    check_positive("r2", r2)?;
    if r2 >= r1 {
        return Err(Error::BadRadii(vec![r1, r2]));
    }
    omega_general_single(ball_capacity(r1), shell_volume(r1, r2), v_r, tau, delta)
}

/// Hybridized pair of a shell enclosing a solid ball (`r1 > r2 > r3`).
pub fn omega_dual3(
    r1: f64,
    r2: f64,
    r3: f64,
    v_r: f64,
    tau: f64,
    delta: f64,
) -> Result<(AsymptoticFrequency, AsymptoticFrequency)> {
    for (name, v) in [("r1", r1), ("r2", r2), ("r3", r3)] {
        check_positive(name, v)?;
    }
    if !(r1 > r2 && r2 > r3) {
        return Err(Error::BadRadii(vec![r1, r2, r3]));
    }
    check_positive("v_r", v_r)?;
    check_positive("tau", tau)?;
    check_positive("delta", delta)?;

    let s1 = r1.powi(3) - r2.powi(3);
    let xi = r2 * (s1 + r3.powi(3)) + r1 * r3 * r3 * (r2 - r3);
    let disc = xi * xi - 4.0 * r1 * r2 * r3 * r3 * (r2 - r3) * s1;
    assert!(disc > 0.0, "hybridization discriminant must be positive");
    let sq = disc.sqrt();
    let den = 2.0 * (r2 - r3) * s1 * r3 * r3;

    let lead_arg_low = (3.0 * xi - 3.0 * sq) / den;
    let lead_arg_high = (3.0 * xi + 3.0 * sq) / den;
    assert!(lead_arg_low > 0.0 && lead_arg_high > 0.0);
    let damp_scale = r1 * r1 * v_r / (4.0 * tau * s1 * sq);
    let damp_low = (3.0 * (-xi + sq) + 6.0 * r2 * s1) * damp_scale;
    let damp_high = (3.0 * (xi + sq) - 6.0 * r2 * s1) * damp_scale;
    assert!(damp_low > 0.0 && damp_high > 0.0);

    Ok((
        frequency(v_r * lead_arg_low.sqrt(), -damp_low, delta, 1),
        frequency(v_r * lead_arg_high.sqrt(), -damp_high, delta, 2),
    ))
}

/// Hybridized pair of two nested shells (`r1 > r2 > r3 > r4`).
pub fn omega_dual4(
    r1: f64,
    r2: f64,
    r3: f64,
    r4: f64,
    v_r: f64,
    tau: f64,
    delta: f64,
) -> Result<(AsymptoticFrequency, AsymptoticFrequency)> {
    for (name, v) in [("r1", r1), ("r2", r2), ("r3", r3), ("r4", r4)] {
        check_positive(name, v)?;
    }
    if !(r1 > r2 && r2 > r3 && r3 > r4) {
        return Err(Error::BadRadii(vec![r1, r2, r3, r4]));
    }
    check_positive("v_r", v_r)?;
    check_positive("tau", tau)?;
    check_positive("delta", delta)?;

    let s1 = r1.powi(3) - r2.powi(3);
    let s2 = r3.powi(3) - r4.powi(3);
    let xi = r2 * r3 * (s1 + s2) + r1 * (r2 - r3) * s2;
    let disc = xi * xi - 4.0 * r1 * r2 * r3 * s1 * s2 * (r2 - r3);
    assert!(disc > 0.0, "hybridization discriminant must be positive");
    let sq = disc.sqrt();
    let den = 2.0 * s1 * s2 * (r2 - r3);

    let lead_arg_low = (3.0 * xi - 3.0 * sq) / den;
    let lead_arg_high = (3.0 * xi + 3.0 * sq) / den;
    assert!(lead_arg_low > 0.0 && lead_arg_high > 0.0);
    let damp_scale = r1 * r1 * v_r / (4.0 * tau * s1 * sq);
    let damp_low = (3.0 * (-xi + sq) + 6.0 * r2 * r3 * s1) * damp_scale;
    let damp_high = (3.0 * (xi + sq) - 6.0 * r2 * r3 * s1) * damp_scale;
    assert!(damp_low > 0.0 && damp_high > 0.0);

    Ok((
        frequency(v_r * lead_arg_low.sqrt(), -damp_low, delta, 1),
        frequency(v_r * lead_arg_high.sqrt(), -damp_high, delta, 2),
    ))
}

/// Capacity-to-volume ratio `r_outer / (r_outer^3 - r_inner^3)` of a shell
/// (or a solid ball when `r_inner = 0`).
pub fn cvr(r_outer: f64, r_inner: f64) -> Result<f64> {
    check_positive("r_outer", r_outer)?;
    if !(r_inner >= 0.0) || !r_inner.is_finite() || r_inner >= r_outer {
        return Err(Error::BadRadii(vec![r_outer, r_inner]));
    }
    Ok(r_outer / (r_outer.powi(3) - r_inner.powi(3)))
}

/// How the two isolated shells `(r1, r2)` and `(r3, r4)` hybridize inside a
/// four-layer structure.
#[derive(Debug, Clone, Copy)]
pub struct HybridizationReport {
    pub cvr_outer: f64,
    pub cvr_inner: f64,
    /// Lower hybridized branch of the full structure.
    pub dual_low: AsymptoticFrequency,
    /// Isolated outer shell `(r1, r2)`.
    pub outer_shell: AsymptoticFrequency,
    /// Isolated inner shell `(r3, r4)`.
    pub inner_shell: AsymptoticFrequency,
    /// Upper hybridized branch of the full structure.
    pub dual_high: AsymptoticFrequency,
    /// Re(dual_low) < Re(outer) <= Re(inner) < Re(dual_high).
    pub ordering_holds: bool,
}

/// Checks the level-repulsion ordering of the four-layer structure against
/// its isolated shells. Requires `cvr(r1, r2) <= cvr(r3, r4)`; a violating
/// quadruple is reported as [`Error::CvrPrecondition`] without any ordering
/// claim.
pub fn hybridization_check(
    r1: f64,
    r2: f64,
    r3: f64,
    r4: f64,
    medium: &MediumSpec,
) -> Result<HybridizationReport> {
    let cvr_outer = cvr(r1, r2)?;
    let cvr_inner = cvr(r3, r4)?;
    if !(r2 > r3) {
        return Err(Error::BadRadii(vec![r1, r2, r3, r4]));
    }
    if cvr_outer > cvr_inner {
        return Err(Error::CvrPrecondition {
            outer: cvr_outer,
            inner: cvr_inner,
        });
    }
    let (v_r, tau, delta) = (medium.v_r, medium.tau, medium.delta);
    let outer_shell = omega_shell(r1, r2, v_r, tau, delta)?;
    let inner_shell = omega_shell(r3, r4, v_r, tau, delta)?;
    let (dual_low, dual_high) = omega_dual4(r1, r2, r3, r4, v_r, tau, delta)?;
    let ordering_holds = dual_low.omega.re < outer_shell.omega.re
        && outer_shell.omega.re <= inner_shell.omega.re
        && inner_shell.omega.re < dual_high.omega.re;
    Ok(HybridizationReport {
        cvr_outer,
        cvr_inner,
        dual_low,
        outer_shell,
        inner_shell,
        dual_high,
        ordering_holds,
    })
}
