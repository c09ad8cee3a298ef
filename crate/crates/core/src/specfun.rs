//! Spherical Bessel and Hankel functions of complex argument.
//!
//! Orders up to two use closed trigonometric forms with power-series
//! fallbacks near the origin; higher orders use the power series for small
//! `|z|`, Miller's downward recurrence for `j_n`, and upward recurrence for
//! `h_n` (stable because the Hankel functions grow with order).
//!
//! Derivatives follow the ladder identities `f'_0 = -f_1` and
//! `f'_n = f_{n-1} - (n+1)/z * f_n`.

use num_complex::Complex64;

use crate::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `|z|` below which `j_0` switches from `sin z / z` to its power series,
/// truncated at the `z^8` term.
pub const J0_SERIES_RADIUS: f64 = 1e-2;

/// `|z|` below which `j_1` and `j_2` switch to their power series. The
/// closed trigonometric forms cancel like `|z|^-4` near the origin, which
/// would cost ~1e-11 relative accuracy around `|z| = 0.1`.
const LOW_ORDER_SERIES_RADIUS: f64 = 0.5;

/// `|z|` below which `j_n` for `n >= 3` uses the power series; beyond it
/// Miller's downward recurrence takes over.
const HIGH_ORDER_SERIES_RADIUS: f64 = 2.0;

/// Magnitude that triggers a rescale inside the downward recurrence.
const MILLER_RESCALE: f64 = 1e250;

/// Spherical Bessel function `j_n(z)`.
///
/// Entire in `z`; total over all finite arguments, including `z = 0` where
/// `j_0(0) = 1` and `j_n(0) = 0` for `n >= 1`.
pub fn sph_bessel_j(n: u32, z: Complex64) -> Complex64 {
    let az = z.norm();
    match n {
        0 => {
            if az < J0_SERIES_RADIUS {
                j0_series(z)
            } else {
                z.sin() / z
            }
        }
        1 => {
            if az < LOW_ORDER_SERIES_RADIUS {
                jn_series(1, z)
            } else {
                (z.sin() - z * z.cos()) / (z * z)
            }
        }
        2 => {
            if az < LOW_ORDER_SERIES_RADIUS {
                jn_series(2, z)
            } else {
                let z2 = z * z;
                ((3.0 / z2 - 1.0) * z.sin() - 3.0 * z.cos() / z) / z
            }
        }
        _ => {
            if az < HIGH_ORDER_SERIES_RADIUS {
                jn_series(n, z)
            } else {
                jn_miller(n, z)
            }
        }
    }
}

/// Spherical Hankel function of the first kind `h_n(z)`.
///
/// `h_0(z) = -i e^{iz} / z` exactly; higher orders come from the upward
/// recurrence `h_{k+1} = (2k+1)/z * h_k - h_{k-1}`, which is forward-stable
/// for the growing Hankel solution. Errors with [`Error::HankelPole`] at
/// `z = 0`.
pub fn sph_hankel1(n: u32, z: Complex64) -> Result<Complex64> {
    if z == ZERO {
        return Err(Error::HankelPole);
    }
    let eiz = (I * z).exp();
    let h0 = -I * eiz / z;
    if n == 0 {
        return Ok(h0);
    }
    let h1 = (-1.0 / z - I / (z * z)) * eiz;
    let mut below = h0;
    let mut at = h1;
    for k in 1..n {
        let above = (2 * k + 1) as f64 / z * at - below;
        below = at;
        at = above;
    }
    Ok(at)
}

/// Derivative `j'_n(z)` via the ladder identity.
///
/// `j'_0(0) = 0` is the regular limit; for `n >= 1` the identity divides by
/// `z`, so `z = 0` is rejected with [`Error::DerivativeAtOrigin`].
pub fn sph_bessel_j_prime(n: u32, z: Complex64) -> Result<Complex64> {
    if n == 0 {
        return Ok(-sph_bessel_j(1, z));
    }
    if z == ZERO {
        return Err(Error::DerivativeAtOrigin(n));
    }
    Ok(sph_bessel_j(n - 1, z) - (n + 1) as f64 / z * sph_bessel_j(n, z))
}

/// Derivative `h'_n(z)` via the ladder identity. Errors at `z = 0`.
pub fn sph_hankel1_prime(n: u32, z: Complex64) -> Result<Complex64> {
    if z == ZERO {
        return Err(Error::HankelPole);
    }
    if n == 0 {
        return Ok(-sph_hankel1(1, z)?);
    }
    Ok(sph_hankel1(n - 1, z)? - (n + 1) as f64 / z * sph_hankel1(n, z)?)
}

/// `j_0` power series through the `z^8` term (relative truncation error
/// below 1e-21 inside the switch radius).
fn j0_series(z: Complex64) -> Complex64 {
    let w = z * z;
    let mut p = Complex64::new(1.0 / 362_880.0, 0.0);
    p = p * w - 1.0 / 5040.0;
    p = p * w + 1.0 / 120.0;
    p = p * w - 1.0 / 6.0;
    p * w + 1.0
}

/// Power series `j_n(z) = z^n/(2n+1)!! * sum_k (-z^2/2)^k / (k! (2n+3)...(2n+2k+1))`.
fn jn_series(n: u32, z: Complex64) -> Complex64 {
    let mut lead = Complex64::new(1.0, 0.0);
    for k in 0..n {
        lead *= z / (2 * k + 3) as f64;
    }
    let w = z * z;
    let mut term = lead;
    let mut sum = lead;
    for k in 0_u32..60 {
        term *= -w * 0.5 / ((k + 1) as f64 * (2 * n + 2 * k + 3) as f64);
        sum += term;
        if term.norm() <= sum.norm() * 1e-18 {
            break;
        }
    }
    sum
}

/// Miller's downward recurrence, normalized against the closed forms of
/// `j_0` and `j_1` (whichever is larger, so the normalization never sits on
/// a zero of `sin`).
fn jn_miller(n: u32, z: Complex64) -> Complex64 {
    let order = n as usize;
    let start = order + z.norm().min(1e6) as usize + 21;
    let mut above = ZERO; // f_{k+1}
    let mut at = Complex64::new(1.0, 0.0); // f_k, k = start
    let mut saved = if order == start { at } else { ZERO };
    for k in (1..=start).rev() {
        let below = (2 * k + 1) as f64 / z * at - above;
        above = at;
        at = below;
        if k - 1 == order {
            saved = at;
        }
        if at.norm() > MILLER_RESCALE {
            let s = 1.0 / MILLER_RESCALE;
            at *= s;
            above *= s;
            saved *= s;
        }
    }
    // at = f_0, above = f_1 after the loop.
    let j0c = z.sin() / z;
    let j1c = (z.sin() - z * z.cos()) / (z * z);
    if j0c.norm() >= j1c.norm() {
        saved * (j0c / at)
    } else {
        saved * (j1c / above)
    }
}
