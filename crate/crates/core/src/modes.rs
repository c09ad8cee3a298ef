//! Eigenmode extraction and field sampling.
//!
//! At a resonant frequency the boundary-condition matrix is singular; its
//! kernel holds the scattering coefficients `(a_1, b_1, ..., a_N, b_N)` of the
//! radial eigenmode.  Layer `j` carries
//!
//! ```text
//! u(r) = b_j j_0(kappa_j r) + a_{j+1} h_0(kappa_j r),   a_{N+1} = 0,
//! ```
//!
//! with `kappa_j` the wavenumber of the material filling the layer, while the
//! exterior is the pure radiating branch `a_1 h_0(k r)`.  Modes returned by
//! [`extract_profile`] + [`normalize`] have unit L2 mass over the resonator
//! shells and a positive real contrast coefficient in the innermost shell.

use num_complex::Complex64;

use crate::dispersion::{assemble, DispersionMatrix};
use crate::medium::{LayeredGeometry, MediumSpec};
use crate::quadrature::gauss_legendre;
use crate::specfun::{sph_bessel_j, sph_bessel_j_prime, sph_hankel1, sph_hankel1_prime};
use crate::{Error, Result};

/// Largest acceptable `||A c|| / (||A||_F ||c||)` for a kernel vector.
pub const KERNEL_RESIDUAL_TOL: f64 = 1e-6;

/// Quadrature order used for the normalization integrals.
const NORM_QUADRATURE_POINTS: usize = 32;

/// Sample count per shell when estimating radial variation.
const FLATNESS_SAMPLES: usize = 400;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Extracts an (approximate) kernel vector of a singular matrix by full-pivot
/// Gaussian elimination: the variable left without a pivot is set to one and
/// the rest follow by back substitution.  Fails with
/// [`Error::KernelResidual`] when the matrix is too far from singular.
pub fn null_vector(matrix: &DispersionMatrix) -> Result<Vec<Complex64>> {
    let n = matrix.size();
    let mut a = matrix.entries().to_vec();
    let mut col_of = (0..n).collect::<Vec<usize>>();

    for step in 0..n {
        let mut best = 0.0;
        let (mut pr, mut pc) = (step, step);
        for r in step..n {
            for c in step..n {
                let mag = a[r * n + c].norm();
                if mag > best {
                    best = mag;
                    pr = r;
                    pc = c;
                }
            }
        }
        if best == 0.0 {
            break;
        }
        if pr != step {
            for c in 0..n {
                a.swap(step * n + c, pr * n + c);
            }
        }
        if pc != step {
            for r in 0..n {
                a.swap(r * n + step, r * n + pc);
            }
            col_of.swap(step, pc);
        }
        let pivot = a[step * n + step];
        for r in step + 1..n {
            let factor = a[r * n + step] / pivot;
            a[r * n + step] = ZERO;
            for c in step + 1..n {
                let sub = factor * a[step * n + c];
                a[r * n + c] -= sub;
            }
        }
    }

    // Back substitution with the weakest-pivot variable pinned to one.
    let mut x = vec![ZERO; n];
    x[n - 1] = Complex64::new(1.0, 0.0);
    for i in (0..n - 1).rev() {
        let mut acc = ZERO;
        for j in i + 1..n {
            acc += a[i * n + j] * x[j];
        }
        let pivot = a[i * n + i];
        if pivot.norm() == 0.0 {
            return Err(Error::KernelResidual {
                residual: f64::INFINITY,
                limit: KERNEL_RESIDUAL_TOL,
            });
        }
        x[i] = -acc / pivot;
    }

    let mut kernel = vec![ZERO; n];
    for i in 0..n {
        kernel[col_of[i]] = x[i];
    }

    let residual = kernel_residual(matrix, &kernel);
    if !(residual <= KERNEL_RESIDUAL_TOL) {
        return Err(Error::KernelResidual {
            residual,
            limit: KERNEL_RESIDUAL_TOL,
        });
    }
    Ok(kernel)
}

/// Scale-free kernel quality: `||A c||_2 / (||A||_F ||c||_2)`.
pub fn kernel_residual(matrix: &DispersionMatrix, candidate: &[Complex64]) -> f64 {
    let n = matrix.size();
    assert_eq!(candidate.len(), n);
    let entries = matrix.entries();
    let mut image = 0.0;
    for r in 0..n {
        let mut acc = ZERO;
        for c in 0..n {
            acc += entries[r * n + c] * candidate[c];
        }
        image += acc.norm_sqr();
    }
    let frob = entries.iter().map(Complex64::norm_sqr).sum::<f64>();
    let mass = candidate.iter().map(Complex64::norm_sqr).sum::<f64>();
    (image / (frob * mass)).sqrt()
}

/// A radial eigenmode: geometry, materials, frequency and the layer
/// coefficients `(a_1, b_1, ..., a_N, b_N)` together with a scalar applied on
/// evaluation.
#[derive(Debug, Clone)]
pub struct ModeProfile {
    omega: Complex64,
    geom: LayeredGeometry,
    medium: MediumSpec,
    coeffs: Vec<Complex64>,
    scale: Complex64,
}

impl ModeProfile {
    pub fn omega(&self) -> Complex64 {
        self.omega
    }

    pub fn geometry(&self) -> &LayeredGeometry {
        &self.geom
    }

    pub fn medium(&self) -> &MediumSpec {
        &self.medium
    }

    /// Raw kernel coefficients, before the evaluation scale.
    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn scale(&self) -> Complex64 {
        self.scale
    }
}

/// Builds the eigenmode at `omega` from the kernel of the monopole
/// boundary-condition matrix.  `omega` must already be a resonance.
pub fn extract_profile(
    geom: &LayeredGeometry,
    medium: &MediumSpec,
    omega: Complex64,
) -> Result<ModeProfile> {
    let matrix = assemble(geom, medium, omega, 0)?;
    let coeffs = null_vector(&matrix)?;
    Ok(ModeProfile {
        omega,
        geom: geom.clone(),
        medium: *medium,
        coeffs,
        scale: Complex64::new(1.0, 0.0),
    })
}

/// Index of the region containing radius `r`: `0` is the exterior, `j` the
/// layer between `r_{j+1}` and `r_j` (upper boundary included).
pub fn region_of(geom: &LayeredGeometry, r: f64) -> usize {
    geom.radii().iter().filter(|&&edge| edge >= r).count()
}

fn layer_wavenumber(profile: &ModeProfile, region: usize) -> Complex64 {
    let (k, k_r) = profile.medium.wavenumbers(profile.omega);
    if region % 2 == 1 {
        k_r
    } else {
        k
    }
}

fn layer_density(profile: &ModeProfile, region: usize) -> f64 {
    if region % 2 == 1 {
        profile.medium.rho_r
    } else {
        profile.medium.rho
    }
}

/// Field value at radius `r >= 0` inside a given region.  Callers normally go
/// through [`evaluate_field`]; the split entry point exists so interface
/// values can be probed from both sides.
pub fn evaluate_field_in_region(profile: &ModeProfile, region: usize, r: f64) -> Result<Complex64> {
    let n = profile.geom.n_layers();
    if region > n {
        return Err(Error::LayerIndex {
            index: region,
            max: n,
        });
    }
    if !(r >= 0.0) {
        return Err(Error::InvalidInput(format!("negative radius {r}")));
    }
    let kappa = layer_wavenumber(profile, region);
    let raw = if region == 0 {
        profile.coeffs[0] * sph_hankel1(0, kappa * r)?
    } else {
        let b = profile.coeffs[2 * (region - 1) + 1];
        let mut value = b * sph_bessel_j(0, kappa * r);
        if region < n {
            let a_next = profile.coeffs[2 * region];
            value += a_next * sph_hankel1(0, kappa * r)?;
        }
        value
    };
    Ok(profile.scale * raw)
}

/// Field value at radius `r`, region inferred from the geometry.
pub fn evaluate_field(profile: &ModeProfile, r: f64) -> Result<Complex64> {
    evaluate_field_in_region(profile, region_of(&profile.geom, r), r)
}

/// Radial derivative `u'(r)` within a region.
pub fn radial_derivative_in_region(
    profile: &ModeProfile,
    region: usize,
    r: f64,
) -> Result<Complex64> {
    let n = profile.geom.n_layers();
    if region > n {
        return Err(Error::LayerIndex {
            index: region,
            max: n,
        });
    }
    let kappa = layer_wavenumber(profile, region);
    let raw = if region == 0 {
        profile.coeffs[0] * sph_hankel1_prime(0, kappa * r)?
    } else {
        let b = profile.coeffs[2 * (region - 1) + 1];
        let mut value = b * sph_bessel_j_prime(0, kappa * r)?;
        if region < n {
            let a_next = profile.coeffs[2 * region];
            value += a_next * sph_hankel1_prime(0, kappa * r)?;
        }
        value
    };
    Ok(profile.scale * kappa * raw)
}

/// Density-weighted flux `rho_j^{-1} u'(r)`, the quantity matched across
/// interfaces.
pub fn flux_in_region(profile: &ModeProfile, region: usize, r: f64) -> Result<Complex64> {
    Ok(radial_derivative_in_region(profile, region, r)? / layer_density(profile, region))
}

/// Bounds `(lo, hi)` of region `j >= 1`.
fn region_bounds(geom: &LayeredGeometry, region: usize) -> (f64, f64) {
    let radii = geom.radii();
    let hi = radii[region - 1];
    let lo = if region < radii.len() {
        radii[region]
    } else {
        0.0
    };
    (lo, hi)
}

/// Rescales the mode to unit L2 mass over the resonator shells,
///
/// ```text
/// sum_{j odd} 4 pi  int_{D_j} |u|^2 r^2 dr = 1,
/// ```
///
/// then rotates the phase so the contrast-material coefficient `b_j` of the
/// innermost resonator shell is positive real.
pub fn normalize(mut profile: ModeProfile) -> Result<ModeProfile> {
    let mass = resonator_mass(&profile, NORM_QUADRATURE_POINTS)?;
    if !(mass > 0.0) || !mass.is_finite() {
        return Err(Error::DegenerateMode);
    }
    let n = profile.geom.n_layers();
    let innermost_odd = if n % 2 == 1 { n } else { n - 1 };
    let anchor = profile.coeffs[2 * (innermost_odd - 1) + 1] * profile.scale;
    if anchor.norm() == 0.0 {
        return Err(Error::DegenerateMode);
    }
    let phase = Complex64::from_polar(1.0, -anchor.arg());
    profile.scale *= phase / mass.sqrt();
    Ok(profile)
}

/// Mass `sum_{j odd} 4 pi int |u|^2 r^2 dr` with an `n_points` rule per shell.
pub fn resonator_mass(profile: &ModeProfile, n_points: usize) -> Result<f64> {
    let (nodes, weights) = gauss_legendre(n_points);
    let mut mass = 0.0;
    for region in (1..=profile.geom.n_layers()).step_by(2) {
        let (lo, hi) = region_bounds(&profile.geom, region);
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let mut acc = 0.0;
        for (x, w) in nodes.iter().zip(&weights) {
            let r = mid + half * x;
            let u = evaluate_field_in_region(profile, region, r)?;
            acc += w * u.norm_sqr() * r * r;
        }
        mass += 4.0 * std::f64::consts::PI * acc * half;
    }
    Ok(mass)
}

/// One row of a radial trace.
#[derive(Debug, Clone, Copy)]
pub struct RadialSample {
    pub r: f64,
    pub value: Complex64,
    pub region: usize,
}

/// Radial trace of a mode plus the interface radii for plot markers.
#[derive(Debug, Clone)]
pub struct RadialSamples {
    pub rows: Vec<RadialSample>,
    pub marker_radii: Vec<f64>,
}

/// Samples `u` on `n_points` equispaced radii spanning `[0, r_max]`.
pub fn sample_radial(profile: &ModeProfile, r_max: f64, n_points: usize) -> Result<RadialSamples> {
    if !(r_max > 0.0) || !r_max.is_finite() {
        return Err(Error::NonPositive {
            name: "r_max",
            value: r_max,
        });
    }
    if n_points < 2 {
        return Err(Error::InvalidInput(format!(
            "radial trace needs at least 2 points, got {n_points}"
        )));
    }
    let mut rows = Vec::with_capacity(n_points);
    for i in 0..n_points {
        let r = r_max * i as f64 / (n_points - 1) as f64;
        let region = region_of(&profile.geom, r);
        let value = evaluate_field_in_region(profile, region, r)?;
        rows.push(RadialSample { r, value, region });
    }
    Ok(RadialSamples {
        rows,
        marker_radii: profile.geom.radii().to_vec(),
    })
}

/// Cross-section of `Re u` on a square grid through the ball centers.
#[derive(Debug, Clone)]
pub struct PlaneSamples {
    pub half_extent: f64,
    pub resolution: usize,
    /// Row-major `resolution x resolution` values, y varying slowest.
    pub values: Vec<f64>,
    /// Grid coordinates shared by both axes, symmetric about zero.
    pub coords: Vec<f64>,
    /// Interface radii, for overlaying layer circles.
    pub circle_radii: Vec<f64>,
}

/// Samples `Re u` on a `resolution x resolution` grid over
/// `[-half_extent, half_extent]^2`.  Coordinates are generated symmetrically
/// so the grid (and hence the output) is mirror-symmetric in both axes.
pub fn sample_plane(
    profile: &ModeProfile,
    half_extent: f64,
    resolution: usize,
) -> Result<PlaneSamples> {
    if !(half_extent > 0.0) || !half_extent.is_finite() {
        return Err(Error::NonPositive {
            name: "half_extent",
            value: half_extent,
        });
    }
    if resolution < 2 {
        return Err(Error::InvalidInput(format!(
            "plane grid needs resolution >= 2, got {resolution}"
        )));
    }
    let denom = (resolution - 1) as f64;
    let coords: Vec<f64> = (0..resolution)
        .map(|i| half_extent * ((2 * i) as f64 - denom) / denom)
        .collect();
    let mut values = Vec::with_capacity(resolution * resolution);
    for &y in &coords {
        for &x in &coords {
            let r = x.hypot(y);
            values.push(evaluate_field(profile, r)?.re);
        }
    }
    Ok(PlaneSamples {
        half_extent,
        resolution,
        values,
        coords,
        circle_radii: profile.geom.radii().to_vec(),
    })
}

/// Relative variation of `|u|` across one resonator shell.
#[derive(Debug, Clone, Copy)]
pub struct FlatnessEntry {
    /// Layer index (odd: resonator material).
    pub layer: usize,
    /// `(max |u| - min |u|) / mean |u|` over the shell.
    pub variation: f64,
}

/// Measures how close the mode is to piecewise-constant on each resonator
/// shell; the variation shrinks with the material contrast.
pub fn flatness(profile: &ModeProfile) -> Result<Vec<FlatnessEntry>> {
    let mut out = Vec::new();
    for region in (1..=profile.geom.n_layers()).step_by(2) {
        let (lo, hi) = region_bounds(&profile.geom, region);
        let mut min = f64::INFINITY;
        let mut max = 0.0f64;
        let mut sum = 0.0;
        for i in 0..FLATNESS_SAMPLES {
            let r = lo + (hi - lo) * i as f64 / (FLATNESS_SAMPLES - 1) as f64;
            let mag = evaluate_field_in_region(profile, region, r)?.norm();
            min = min.min(mag);
            max = max.max(mag);
            sum += mag;
        }
        let mean = sum / FLATNESS_SAMPLES as f64;
        if !(mean > 0.0) {
            return Err(Error::DegenerateMode);
        }
        out.push(FlatnessEntry {
            layer: region,
            variation: (max - min) / mean,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::medium::geometry_equidistant;
    use crate::rootfind::{find_subwavelength_roots, SearchConfig};

    // Monopole resonances pinned by the determinant searches in the
    // root-finder tests.
    const SOLID_ROOT: Complex64 = Complex64::new(0.017319685437909573, -1.4999400100278001e-4);
    const TRIPLE_ROOT: Complex64 = Complex64::new(0.0066942169387008214, -6.693383628994746e-5);

    fn solid_profile() -> ModeProfile {
        let geom = LayeredGeometry::from_radii(vec![1.0]).unwrap();
        let medium = MediumSpec::from_contrast(1e-4).unwrap();
        extract_profile(&geom, &medium, SOLID_ROOT).unwrap()
    }

    fn triple_profile() -> ModeProfile {
        let geom = geometry_equidistant(3).unwrap();
        let medium = MediumSpec::from_contrast(1e-4).unwrap();
        normalize(extract_profile(&geom, &medium, TRIPLE_ROOT).unwrap()).unwrap()
    }

    #[test]
    fn kernel_vector_satisfies_the_matrix_at_a_resonance() {
        let geom = geometry_equidistant(3).unwrap();
        let medium = MediumSpec::from_contrast(1e-4).unwrap();
        let matrix = assemble(&geom, &medium, TRIPLE_ROOT, 0).unwrap();
        let kernel = null_vector(&matrix).unwrap();
        assert_eq!(kernel.len(), 6);
        assert!(kernel_residual(&matrix, &kernel) <= 1e-9);
    }

    #[test]
    fn null_vector_rejects_a_regular_matrix() {
        let geom = LayeredGeometry::from_radii(vec![1.0]).unwrap();
        let medium = MediumSpec::from_contrast(1e-4).unwrap();
        // 5% off resonance the matrix is comfortably invertible.
        let matrix = assemble(&geom, &medium, SOLID_ROOT * 1.05, 0).unwrap();
        match null_vector(&matrix) {
            Err(Error::KernelResidual { residual, limit }) => {
                assert!(residual > limit);
            }
            other => panic!("expected kernel residual failure, got {other:?}"),
        }
    }

    #[test]
    fn field_and_flux_are_continuous_at_every_interface() {
        let profile = triple_profile();
        let scale = evaluate_field(&profile, 0.0).unwrap().norm();
        assert!(scale > 0.0);
        for (i, &edge) in profile.geometry().radii().iter().enumerate() {
            let outside = i; // region above the interface
            let inside = i + 1;
            let u_out = evaluate_field_in_region(&profile, outside, edge).unwrap();
            let u_in = evaluate_field_in_region(&profile, inside, edge).unwrap();
            assert!(
                (u_out - u_in).norm() <= 1e-8 * scale,
                "field jump {} at r = {edge}",
                (u_out - u_in).norm()
            );
            let f_out = flux_in_region(&profile, outside, edge).unwrap();
            let f_in = flux_in_region(&profile, inside, edge).unwrap();
            let flux_scale = f_out.norm().max(f_in.norm()).max(scale);
            assert!(
                (f_out - f_in).norm() <= 1e-8 * flux_scale,
                "flux jump {} at r = {edge}",
                (f_out - f_in).norm()
            );
        }
    }

    #[test]
    fn normalized_mode_has_unit_mass_and_anchored_phase() {
        let profile = triple_profile();
        let mass = resonator_mass(&profile, NORM_QUADRATURE_POINTS).unwrap();
        assert!((mass - 1.0).abs() <= 1e-8, "mass {mass}");
        // Doubling the quadrature order must not move the integral.
        let refined = resonator_mass(&profile, 2 * NORM_QUADRATURE_POINTS).unwrap();
        assert!((mass - refined).abs() <= 1e-10);
        // Innermost-shell contrast coefficient rotated onto the positive axis.
        let anchor = profile.coefficients()[2 * (3 - 1) + 1] * profile.scale();
        assert!(anchor.re > 0.0);
        assert!(anchor.im.abs() <= 1e-12 * anchor.re);
    }

    #[test]
    fn normalization_cancels_the_kernel_scale() {
        let base = triple_profile();
        let mut doubled = base.clone();
        for c in &mut doubled.coeffs {
            *c *= Complex64::new(-2.0, 0.5);
        }
        doubled.scale = Complex64::new(1.0, 0.0);
        let doubled = normalize(doubled).unwrap();
        for i in 0..=8 {
            let r = 3.2 * i as f64 / 8.0;
            let a = evaluate_field(&base, r).unwrap();
            let b = evaluate_field(&doubled, r).unwrap();
            assert!((a - b).norm() <= 1e-12 * a.norm().max(1e-300));
        }
    }

    #[test]
    fn exterior_field_is_a_pure_radiating_wave() {
        let profile = triple_profile();
        let (k, _) = profile.medium().wavenumbers(profile.omega());
        let mut ratios = Vec::new();
        for &r in &[3.5, 5.0, 9.0] {
            let u = evaluate_field(&profile, r).unwrap();
            ratios.push(u / sph_hankel1(0, k * r).unwrap());
        }
        for pair in ratios.windows(2) {
            assert!((pair[0] - pair[1]).norm() <= 1e-10 * pair[0].norm());
        }
    }

    #[test]
    fn solid_ball_mode_is_nearly_uniform_inside() {
        let profile = normalize(solid_profile()).unwrap();
        let flat = flatness(&profile).unwrap();
        assert_eq!(flat.len(), 1);
        assert_eq!(flat[0].layer, 1);
        // |u| inside varies like (omega r)^2 / 6 ~ 5e-5 at this contrast.
        assert!(flat[0].variation > 0.0 && flat[0].variation < 1e-3);
        // Outside, the radiating branch decays like 1/r.
        let near = evaluate_field(&profile, 1.5).unwrap().norm();
        let far = evaluate_field(&profile, 6.0).unwrap().norm();
        assert!(far < near);
    }

    #[test]
    fn region_lookup_honors_interface_ownership() {
        let geom = geometry_equidistant(3).unwrap();
        assert_eq!(region_of(&geom, 4.0), 0);
        assert_eq!(region_of(&geom, 3.0), 1); // boundary belongs to the layer below
        assert_eq!(region_of(&geom, 2.5), 1);
        assert_eq!(region_of(&geom, 2.0), 2);
        assert_eq!(region_of(&geom, 1.0), 3);
        assert_eq!(region_of(&geom, 0.0), 3);
    }

    #[test]
    fn radial_trace_covers_the_span_and_tags_regions() {
        let profile = triple_profile();
        let trace = sample_radial(&profile, 4.5, 181).unwrap();
        assert_eq!(trace.rows.len(), 181);
        assert_eq!(trace.rows[0].r, 0.0);
        assert_eq!(trace.rows[180].r, 4.5);
        assert_eq!(trace.marker_radii, vec![3.0, 2.0, 1.0]);
        for row in &trace.rows {
            assert_eq!(row.region, region_of(profile.geometry(), row.r));
            assert!(row.value.norm().is_finite());
        }
    }

    #[test]
    fn plane_samples_are_mirror_symmetric_bit_for_bit() {
        let profile = triple_profile();
        let plane = sample_plane(&profile, 4.0, 33).unwrap();
        let res = plane.resolution;
        assert_eq!(plane.values.len(), res * res);
        for iy in 0..res {
            for ix in 0..res {
                let v = plane.values[iy * res + ix];
                let mx = plane.values[iy * res + (res - 1 - ix)];
                let my = plane.values[(res - 1 - iy) * res + ix];
                assert_eq!(v.to_bits(), mx.to_bits());
                assert_eq!(v.to_bits(), my.to_bits());
            }
        }
        // Midpoint coordinate is exactly zero for odd resolutions.
        assert_eq!(plane.coords[res / 2], 0.0);
    }

    #[test]
    fn shells_flatten_as_the_contrast_sharpens() {
        let geom = geometry_equidistant(3).unwrap();
        let mut variations = Vec::new();
        for &delta in &[1e-2, 1e-3, 1e-4] {
            let medium = MediumSpec::from_contrast(delta).unwrap();
            let cfg = SearchConfig::for_problem(&geom, &medium);
            let roots = find_subwavelength_roots(&geom, &medium, 0, &cfg).unwrap();
            let profile =
                normalize(extract_profile(&geom, &medium, roots[0].omega).unwrap()).unwrap();
            let flat = flatness(&profile).unwrap();
            assert_eq!(flat.len(), 2);
            variations.push(flat.iter().map(|f| f.variation).fold(0.0, f64::max));
        }
        assert!(
            variations[0] > variations[1] && variations[1] > variations[2],
            "variations not decreasing: {variations:?}"
        );
    }
}
