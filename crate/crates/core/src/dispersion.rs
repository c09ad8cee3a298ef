//! Dispersion matrix of the layered resonator and its scaled determinant.
//!
//! For `N` layers the transmission conditions at the `N` interfaces couple
//! the radiating (Hankel) and regular (Bessel) coefficients of adjacent
//! layers into a `2N x 2N` block-tridiagonal system, one `2 x 2` block row
//! per interface, unknowns ordered `(a_1, b_1, ..., a_N, b_N)`. Resonant
//! frequencies are the complex `omega` where the determinant vanishes.
//!
//! Determinants of large layered systems overflow `f64`, so they are
//! carried as `mantissa * 2^exponent` with `|mantissa|` in `[1, 2)`.

use num_complex::Complex64;

use crate::medium::{LayeredGeometry, MediumSpec};
use crate::specfun::{sph_bessel_j, sph_bessel_j_prime, sph_hankel1, sph_hankel1_prime};
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Dense `2N x 2N` matrix of transmission conditions at fixed `omega` and
/// angular order `n`.
#[derive(Debug, Clone)]
pub struct DispersionMatrix {
    order: u32,
    omega: Complex64,
    size: usize,
    entries: Vec<Complex64>,
}

impl DispersionMatrix {
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn omega(&self) -> Complex64 {
        self.omega
    }

    /// Matrix dimension `2N`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.size + col]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }
}

/// Assembles the dispersion matrix. The spherical-harmonic prefactor common
/// to every row is divided out, and `omega = 0` is a pole of the radiating
/// terms, hence rejected.
pub fn assemble(
    geom: &LayeredGeometry,
    medium: &MediumSpec,
    omega: Complex64,
    order: u32,
) -> Result<DispersionMatrix> {
    if omega == ZERO {
        return Err(Error::OmegaPole);
    }
    let (k, k_r) = medium.wavenumbers(omega);
    let n_layers = geom.n_layers();
    let size = 2 * n_layers;
    let mut entries = vec![ZERO; size * size];
    let delta = medium.delta;
    let tau = medium.tau;

    for i in 1..=n_layers {
        let r = geom.radii()[i - 1];
        let zb = k * r; // background-side argument
        let zr = k_r * r; // resonator-side argument
        let (jb, jbp) = (sph_bessel_j(order, zb), sph_bessel_j_prime(order, zb)?);
        let (jr, jrp) = (sph_bessel_j(order, zr), sph_bessel_j_prime(order, zr)?);
        let (hb, hbp) = (sph_hankel1(order, zb)?, sph_hankel1_prime(order, zb)?);
        let (hr, hrp) = (sph_hankel1(order, zr)?, sph_hankel1_prime(order, zr)?);

        let top = 2 * (i - 1) * size;
        let bot = top + size;
        let ca = 2 * (i - 1);
        let cb = ca + 1;
        if i % 2 == 1 {
            // Field above the interface lives in the background, below in
            // the resonator material.
            entries[top + ca] = -hb;
            entries[top + cb] = jr;
            entries[bot + ca] = -delta * hbp;
            entries[bot + cb] = tau * jrp;
            if i < n_layers {
                entries[top + ca + 2] = hr;
                entries[bot + ca + 2] = tau * hrp;
            }
            if i > 1 {
                entries[top + cb - 2] = -jb;
                entries[bot + cb - 2] = -delta * jbp;
            }
        } else {
            entries[top + ca] = -hr;
            entries[top + cb] = jb;
            entries[bot + ca] = -tau * hrp;
            entries[bot + cb] = delta * jbp;
            if i < n_layers {
                entries[top + ca + 2] = hb;
                entries[bot + ca + 2] = delta * hbp;
            }
            if i > 1 {
                entries[top + cb - 2] = -jr;
                entries[bot + cb - 2] = -tau * jrp;
            }
        }
    }

    Ok(DispersionMatrix {
        order,
        omega,
        size,
        entries,
    })
}

/// A complex number stored as `mantissa * 2^exponent` with `|mantissa|` in
/// `[1, 2)`, or exactly zero. Keeps determinants of deep structures inside
/// `f64` range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledDeterminant {
    mantissa: Complex64,
    exponent: i32,
}

impl ScaledDeterminant {
    pub fn zero() -> Self {
        ScaledDeterminant {
            mantissa: ZERO,
            exponent: 0,
        }
    }

    pub fn from_complex(value: Complex64) -> Self {
        Self::renormalize(value, 0)
    }

    pub fn mantissa(&self) -> Complex64 {
        self.mantissa
    }

    pub fn exponent(&self) -> i32 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == ZERO
    }

    pub fn is_finite(&self) -> bool {
        self.mantissa.re.is_finite() && self.mantissa.im.is_finite()
    }

    /// The plain value `mantissa * 2^exponent`. Overflows or underflows
    /// `f64` when the exponent is extreme; prefer [`Self::abs_log2`] or
    /// [`Self::relative_to`] in that regime.
    pub fn value(&self) -> Complex64 {
        self.mantissa * pow2(self.exponent)
    }

    /// `log2` of the magnitude (`-inf` for zero).
    pub fn abs_log2(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.mantissa.norm().log2() + self.exponent as f64
        }
    }

    /// Value relative to a reference binary exponent: `mantissa *
    /// 2^(exponent - reference)`. Values far below the reference flush to
    /// zero, far above overflow to infinity.
    pub fn relative_to(&self, reference: i32) -> Complex64 {
        self.mantissa * pow2(self.exponent.saturating_sub(reference))
    }

    pub fn mul_complex(&self, w: Complex64) -> Self {
        Self::renormalize(self.mantissa * w, self.exponent)
    }

    pub fn div_complex(&self, w: Complex64) -> Self {
        Self::renormalize(self.mantissa / w, self.exponent)
    }

    fn renormalize(mut mantissa: Complex64, mut exponent: i32) -> Self {
        let mag = mantissa.norm();
        if mag == 0.0 {
            return Self::zero();
        }
        if !mag.is_finite() {
            return ScaledDeterminant { mantissa, exponent };
        }
        let shift = mag.log2().floor() as i32;
        mantissa = mantissa * pow2(-shift);
        exponent = exponent.saturating_add(shift);
        // log2/floor rounding can leave the magnitude one step outside
        // [1, 2); fix up.
        let mut mag = mantissa.norm();
        while mag >= 2.0 {
            mantissa *= 0.5;
            exponent = exponent.saturating_add(1);
            mag = mantissa.norm();
        }
        while mag < 1.0 {
            mantissa *= 2.0;
            exponent = exponent.saturating_sub(1);
            mag = mantissa.norm();
        }
        ScaledDeterminant { mantissa, exponent }
    }
}

/// `2^k` evaluated safely for |k| beyond the f64 exponent range by
/// splitting into two factors.
fn pow2(k: i32) -> f64 {
    if k.abs() <= 1000 {
        (k as f64).exp2()
    } else {
        let half = k / 2;
        (half as f64).exp2() * ((k - half) as f64).exp2()
    }
}

/// Determinant of the dispersion matrix in scaled form.
pub fn scaled_det(matrix: &DispersionMatrix) -> ScaledDeterminant {
    scaled_det_dense(matrix.size, &matrix.entries)
}

/// Scaled determinant of a dense row-major complex matrix by LU
/// factorization with partial pivoting; the pivot product is renormalized
/// after every step so it never leaves `f64` range.
pub fn scaled_det_dense(size: usize, entries: &[Complex64]) -> ScaledDeterminant {
    assert_eq!(entries.len(), size * size, "entries must form a square matrix");
    if size == 0 {
        return ScaledDeterminant::from_complex(Complex64::new(1.0, 0.0));
    }
    let mut a = entries.to_vec();
    let mut det = ScaledDeterminant::from_complex(Complex64::new(1.0, 0.0));
    for col in 0..size {
        let mut pivot_row = col;
        let mut best = a[col * size + col].norm();
        for row in col + 1..size {
            let mag = a[row * size + col].norm();
            if mag > best {
                best = mag;
                pivot_row = row;
            }
        }
        if best == 0.0 {
            return ScaledDeterminant::zero();
        }
        if pivot_row != col {
            for c in 0..size {
                a.swap(col * size + c, pivot_row * size + c);
            }
            det = det.mul_complex(Complex64::new(-1.0, 0.0));
        }
        let pivot = a[col * size + col];
        det = det.mul_complex(pivot);
        let (top, below) = a.split_at_mut((col + 1) * size);
        let pivot_row_data = &top[col * size..(col + 1) * size];
        for row in below.chunks_exact_mut(size) {
            let factor = row[col] / pivot;
            if factor == ZERO {
                continue;
            }
            for c in col + 1..size {
                row[c] -= factor * pivot_row_data[c];
            }
        }
    }
    det
}

/// The determinant as a callable of `omega` at fixed geometry, medium and
/// angular order.
pub fn dispersion_fn<'a>(
    geom: &'a LayeredGeometry,
    medium: &'a MediumSpec,
    order: u32,
) -> impl Fn(Complex64) -> Result<ScaledDeterminant> + 'a {
    move |omega| Ok(scaled_det(&assemble(geom, medium, omega, order)?))
}
