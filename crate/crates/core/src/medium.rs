//! Material parameters and layered-ball geometry.
//!
//! Two homogeneous materials alternate through the structure: odd-indexed
//! layers carry the resonator material `(rho_r, kappa_r)` and even-indexed
//! layers — including the unbounded exterior, layer 0 — carry the background
//! `(rho, kappa)`. The contrast `delta = rho_r / rho` is the small parameter
//! of the subwavelength regime.

use num_complex::Complex64;

use crate::{Error, Result};

/// Derived material data for one resonator/background pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumSpec {
    pub rho_r: f64,
    pub kappa_r: f64,
    pub rho: f64,
    pub kappa: f64,
    /// Density contrast `rho_r / rho`.
    pub delta: f64,
    /// Wave-speed ratio `v / v_r = k_r / k`.
    pub tau: f64,
    /// Background sound speed `sqrt(kappa / rho)`.
    pub v: f64,
    /// Resonator sound speed `sqrt(kappa_r / rho_r)`.
    pub v_r: f64,
}

/// Builds a [`MediumSpec`], rejecting non-positive parameters.
pub fn make_medium(rho_r: f64, kappa_r: f64, rho: f64, kappa: f64) -> Result<MediumSpec> {
    for (name, value) in [
        ("rho_r", rho_r),
        ("kappa_r", kappa_r),
        ("rho", rho),
        ("kappa", kappa),
    ] {
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::NonPositive { name, value });
        }
    }
    Ok(MediumSpec {
        rho_r,
        kappa_r,
        rho,
        kappa,
        delta: rho_r / rho,
        tau: (rho_r * kappa / (rho * kappa_r)).sqrt(),
        v: (kappa / rho).sqrt(),
        v_r: (kappa_r / rho_r).sqrt(),
    })
}

impl MediumSpec {
    /// Unit resonator material inside a background of contrast `delta`:
    /// `(1, 1, 1/delta, 1/delta)`, so `v = v_r = tau = 1`.
    pub fn from_contrast(delta: f64) -> Result<Self> {
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::NonPositive {
                name: "delta",
                value: delta,
            });
        }
        make_medium(1.0, 1.0, 1.0 / delta, 1.0 / delta)
    }

    /// Background and resonator wavenumbers `(k, k_r) = (omega/v, omega/v_r)`.
    pub fn wavenumbers(&self, omega: Complex64) -> (Complex64, Complex64) {
        wavenumbers(self, omega)
    }
}

/// Background and resonator wavenumbers `(k, k_r)` at (complex) frequency.
pub fn wavenumbers(medium: &MediumSpec, omega: Complex64) -> (Complex64, Complex64) {
    (omega / medium.v, omega / medium.v_r)
}

/// Which material a layer carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    /// Background material (even layers and the exterior).
    Background,
    /// High-contrast resonator material (odd layers).
    Resonator,
}

/// Density, bulk modulus and wavenumber branch of one layer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerMaterial {
    pub density: f64,
    pub bulk_modulus: f64,
    pub phase: Phase,
}

/// Nested spherical interfaces, outermost first: `r_1 > r_2 > ... > r_N > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LayeredGeometry {
    radii: Vec<f64>,
}

impl LayeredGeometry {
    /// Validates and stores interface radii given outermost-first.
    pub fn from_radii(radii: Vec<f64>) -> Result<Self> {
        let ok = !radii.is_empty()
            && radii.iter().all(|r| r.is_finite() && *r > 0.0)
            && radii.windows(2).all(|w| w[0] > w[1]);
        if !ok {
            return Err(Error::BadRadii(radii));
        }
        Ok(LayeredGeometry { radii })
    }

    /// Interface radii, outermost first.
    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// Number of layers `N`.
    pub fn n_layers(&self) -> usize {
        self.radii.len()
    }

    /// Number of odd-indexed (resonator) layers: `floor((N + 1) / 2)`.
    pub fn n_resonators(&self) -> usize {
        (self.n_layers() + 1) / 2
    }

    pub fn outer_radius(&self) -> f64 {
        self.radii[0]
    }

    pub fn inner_radius(&self) -> f64 {
        *self.radii.last().unwrap()
    }
}

/// Equidistant structure `r_i = N - i + 1`, i.e. radii `N, N-1, ..., 1`.
pub fn geometry_equidistant(n: usize) -> Result<LayeredGeometry> {
    if n == 0 {
        return Err(Error::BadRadii(vec![]));
    }
    LayeredGeometry::from_radii((1..=n).rev().map(|i| i as f64).collect())
}

/// Geometric structure `r_{i+1} = s * r_i` starting from `r1`.
pub fn geometry_geometric(n: usize, r1: f64, s: f64) -> Result<LayeredGeometry> {
    if n == 0 {
        return Err(Error::BadRadii(vec![]));
    }
    if !(r1 > 0.0) || !r1.is_finite() {
        return Err(Error::NonPositive {
            name: "r1",
            value: r1,
        });
    }
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::BadScale(s));
    }
    let mut radii = Vec::with_capacity(n);
    let mut r = r1;
    for _ in 0..n {
        radii.push(r);
        r *= s;
    }
    LayeredGeometry::from_radii(radii)
}

/// Material of layer `j` for `0 <= j <= N` (layer 0 is the exterior).
pub fn layer_material(
    geom: &LayeredGeometry,
    j: usize,
    medium: &MediumSpec,
) -> Result<LayerMaterial> {
    let n = geom.n_layers();
    if j > n {
        return Err(Error::LayerIndex { index: j, max: n });
    }
    Ok(if j % 2 == 1 {
        LayerMaterial {
            density: medium.rho_r,
            bulk_modulus: medium.kappa_r,
            phase: Phase::Resonator,
        }
    } else {
        LayerMaterial {
            density: medium.rho,
            bulk_modulus: medium.kappa,
            phase: Phase::Background,
        }
    })
}
