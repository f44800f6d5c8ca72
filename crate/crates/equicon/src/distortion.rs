//! Per-point and region-wide distortion analysis.
//!
//! At a point, the differential of any family member is diagonal in the
//! (meridian, parallel) frame with singular values h = 1 and k(phi), so the
//! extreme stretches are M = max(1, k) and m = min(1, k), the infinitesimal
//! bi-Lipschitz constant is sigma = max(M, 1/m) and the quasiconformal
//! dilatation is K = M/m. Over an annulus, sigma depends on latitude alone;
//! region extrema are found from analytic candidate points with a uniform
//! latitude grid as a guard.

use crate::error::{Error, Result};
use crate::projection::{forward, scale_factors_meridian_parallel, Branch, ConicSpec, PlanePoint};
use crate::sphere::GeoPoint;
use std::f64::consts::{FRAC_PI_2, PI};

/// Keep-out margin from the poles for branches whose parallel scale
/// diverges there.
const POLE_MARGIN: f64 = 1e-9;

/// Partials of the plane coordinates with respect to the orthonormal
/// tangent directions (along-meridian, along-parallel) at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jacobian {
    pub dx_dm: f64,
    pub dx_dp: f64,
    pub dy_dm: f64,
    pub dy_dp: f64,
}

impl Jacobian {
    pub fn determinant(&self) -> f64 {
        self.dx_dm * self.dy_dp - self.dx_dp * self.dy_dm
    }

    /// Singular values (largest, smallest) by the closed form for 2x2
    /// matrices.
    pub fn singular_values(&self) -> (f64, f64) {
        let (a, b, c, d) = (self.dx_dm, self.dx_dp, self.dy_dm, self.dy_dp);
        let e = (a + d) / 2.0;
        let f = (a - d) / 2.0;
        let g = (c + b) / 2.0;
        let h = (c - b) / 2.0;
        let q = e.hypot(h);
        let r = f.hypot(g);
        (q + r, (q - r).abs())
    }
}

/// Extreme directional stretches and derived distortion numbers at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleFactors {
    /// Largest directional stretch M.
    pub max_stretch: f64,
    /// Smallest directional stretch m.
    pub min_stretch: f64,
    /// Infinitesimal bi-Lipschitz constant: max(M, 1/m) >= 1.
    pub sigma: f64,
    /// Quasiconformal dilatation: M/m >= 1.
    pub dilatation: f64,
    pub at: GeoPoint,
}

/// The image of an infinitesimal circle: semi-axes are the extreme
/// stretches, orientation is the plane angle of the major axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TissotEllipse {
    pub center: PlanePoint,
    pub semi_major: f64,
    pub semi_minor: f64,
    /// Angle of the major axis in the plane frame, normalized into
    /// (-pi/2, pi/2]; 0 by convention for circles.
    pub orientation: f64,
}

/// The region between two parallels, optionally bounded in longitude
/// (default: the full cut sphere).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalAnnulus {
    phi_south: f64,
    phi_north: f64,
    lon_west: f64,
    lon_east: f64,
}

impl SphericalAnnulus {
    pub fn new(phi_south: f64, phi_north: f64) -> Result<Self> {
        Self::with_longitudes(phi_south, phi_north, -PI, PI)
    }

    pub fn from_degrees(south_deg: f64, north_deg: f64) -> Result<Self> {
        Self::new(south_deg.to_radians(), north_deg.to_radians())
    }

    pub fn with_longitudes(
        phi_south: f64,
        phi_north: f64,
        lon_west: f64,
        lon_east: f64,
    ) -> Result<Self> {
        if !phi_south.is_finite()
            || !phi_north.is_finite()
            || !lon_west.is_finite()
            || !lon_east.is_finite()
        {
            return Err(Error::NonFiniteCoordinate);
        }
        if phi_south >= phi_north {
            return Err(Error::InvalidAnnulus(format!(
                "phi_south {phi_south} must be below phi_north {phi_north} (rad)"
            )));
        }
        if phi_south < -FRAC_PI_2 || phi_north > FRAC_PI_2 {
            return Err(Error::InvalidAnnulus(
                "latitudes must lie within [-pi/2, pi/2]".to_string(),
            ));
        }
        if lon_west >= lon_east {
            return Err(Error::InvalidAnnulus(format!(
                "lon_west {lon_west} must be below lon_east {lon_east} (rad)"
            )));
        }
        Ok(Self {
            phi_south,
            phi_north,
            lon_west,
            lon_east,
        })
    }

    pub fn phi_south(&self) -> f64 {
        self.phi_south
    }

    pub fn phi_north(&self) -> f64 {
        self.phi_north
    }

    pub fn lon_west(&self) -> f64 {
        self.lon_west
    }

    pub fn lon_east(&self) -> f64 {
        self.lon_east
    }

    pub fn mid_longitude(&self) -> f64 {
        0.5 * (self.lon_west + self.lon_east)
    }

    /// Branch-dependent latitude check: only the azimuthal member tolerates
    /// the north pole, nobody tolerates the south pole.
    fn validate_for(&self, spec: &ConicSpec) -> Result<()> {
        if self.phi_south <= -FRAC_PI_2 + POLE_MARGIN {
            return Err(Error::InvalidAnnulus(
                "annulus touches the south pole where the parallel scale diverges".to_string(),
            ));
        }
        let north_limit = if spec.branch() == Branch::Azimuthal {
            FRAC_PI_2
        } else {
            FRAC_PI_2 - POLE_MARGIN
        };
        if self.phi_north > north_limit {
            return Err(Error::InvalidAnnulus(format!(
                "annulus touches the north pole, not allowed for the {} branch",
                spec.branch().name()
            )));
        }
        Ok(())
    }
}

/// Region-wide distortion summary over a spherical annulus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistortionReport {
    /// L, the supremum of sigma over the region.
    pub sup_sigma: f64,
    /// ell, the infimum of sigma over the region (always >= 1).
    pub inf_sigma: f64,
    /// Metrical distortion v = log(L / ell).
    pub metrical_distortion: f64,
    /// K_max, the supremum of the quasiconformal dilatation.
    pub max_dilatation: f64,
    pub witness_sup: GeoPoint,
    pub witness_inf: GeoPoint,
    /// Latitude step of the guard grid that backed the scan, radians.
    pub grid_step: f64,
}

/// One row of the per-latitude profile dump.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileSample {
    pub phi: f64,
    pub parallel_scale: f64,
    pub sigma: f64,
    pub dilatation: f64,
}

/// Analytic differential at a point: columns are the images of unit tangent
/// vectors along the meridian and along the parallel.
pub fn analytic_jacobian(spec: &ConicSpec, p: GeoPoint) -> Result<Jacobian> {
    if p.lat().abs() >= FRAC_PI_2 {
        // The tangent frame degenerates at the poles for every member.
        return Err(Error::SingularLatitude { lat: p.lat() });
    }
    let (_, k) = scale_factors_meridian_parallel(spec, p.lat())?;
    match spec.branch() {
        Branch::Conic | Branch::Azimuthal => {
            let n = spec.cone_constant().expect("conic branch has n");
            let (s, c) = (n * p.lon()).sin_cos();
            Ok(Jacobian {
                dx_dm: -s,
                dx_dp: k * c,
                dy_dm: c,
                dy_dp: k * s,
            })
        }
        Branch::Cylindrical => Ok(Jacobian {
            dx_dm: 0.0,
            dx_dp: k,
            dy_dm: 1.0,
            dy_dp: 0.0,
        }),
    }
}

/// Extreme stretches, bi-Lipschitz constant and dilatation at a point.
pub fn scale_point(spec: &ConicSpec, p: GeoPoint) -> Result<ScaleFactors> {
    let (h, k) = scale_factors_meridian_parallel(spec, p.lat())?;
    let max_stretch = h.max(k);
    let min_stretch = h.min(k);
    Ok(ScaleFactors {
        max_stretch,
        min_stretch,
        sigma: max_stretch.max(1.0 / min_stretch),
        dilatation: max_stretch / min_stretch,
        at: p,
    })
}

fn normalize_axis_angle(a: f64) -> f64 {
    let mut r = a.rem_euclid(PI);
    if r > FRAC_PI_2 {
        r -= PI;
    }
    if r == -FRAC_PI_2 {
        r = FRAC_PI_2;
    }
    r
}

/// Tissot indicatrix at a point.
///
/// The major axis lies along the parallel image when k > 1 and along the
/// meridian image when k < 1; circles report orientation 0.
pub fn tissot(spec: &ConicSpec, p: GeoPoint) -> Result<TissotEllipse> {
    let sf = scale_point(spec, p)?;
    let center = forward(spec, p)?;
    let (_, k) = scale_factors_meridian_parallel(spec, p.lat())?;
    let orientation = if sf.max_stretch == sf.min_stretch {
        0.0
    } else {
        match spec.branch() {
            Branch::Conic | Branch::Azimuthal => {
                let n = spec.cone_constant().expect("conic branch has n");
                let theta = n * p.lon();
                // Parallel image direction is (cos theta, sin theta); the
                // meridian image direction is perpendicular to it.
                if k > 1.0 {
                    normalize_axis_angle(theta)
                } else {
                    normalize_axis_angle(theta + FRAC_PI_2)
                }
            }
            Branch::Cylindrical => {
                if k > 1.0 {
                    0.0
                } else {
                    FRAC_PI_2
                }
            }
        }
    };
    Ok(TissotEllipse {
        center,
        semi_major: sf.max_stretch,
        semi_minor: sf.min_stretch,
        orientation,
    })
}

/// sigma as a function of latitude alone (it does not depend on longitude
/// for this family).
pub(crate) fn sigma_at(spec: &ConicSpec, phi: f64) -> Result<f64> {
    let (h, k) = scale_factors_meridian_parallel(spec, phi)?;
    let max_stretch = h.max(k);
    let min_stretch = h.min(k);
    Ok(max_stretch.max(1.0 / min_stretch))
}

// Bisection for a root of f on [a, b] assuming f(a) and f(b) bracket zero.
fn bisect(mut a: f64, mut b: f64, f: impl Fn(f64) -> f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..200 {
        if (b - a).abs() < 1e-16 {
            break;
        }
        let m = 0.5 * (a + b);
        let fm = f(m);
        if (fa <= 0.0) == (fm <= 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Latitude of the interior minimum of the parallel scale, if one lies
/// strictly inside (lo, hi).
fn interior_scale_minimum(spec: &ConicSpec, lo: f64, hi: f64) -> Option<f64> {
    match spec.branch() {
        Branch::Conic | Branch::Azimuthal => {
            let c = spec.apex_offset().expect("conic branch has C");
            // k'(phi) vanishes where g(phi) = (C - phi) sin phi - cos phi
            // crosses zero; g is strictly increasing on the valid domain.
            let g = |phi: f64| (c - phi) * phi.sin() - phi.cos();
            if g(lo) >= 0.0 || g(hi) <= 0.0 {
                return None;
            }
            Some(bisect(lo, hi, g))
        }
        Branch::Cylindrical => {
            if lo < 0.0 && 0.0 < hi {
                Some(0.0)
            } else {
                None
            }
        }
    }
}

// Unity crossings of k on a piece where k is monotone.
fn unit_scale_crossing(spec: &ConicSpec, lo: f64, hi: f64) -> Option<f64> {
    let k = |phi: f64| {
        scale_factors_meridian_parallel(spec, phi)
            .map(|(_, k)| k - 1.0)
            .unwrap_or(f64::INFINITY)
    };
    let (ka, kb) = (k(lo), k(hi));
    if ka == 0.0 {
        return Some(lo);
    }
    if kb == 0.0 {
        return Some(hi);
    }
    if (ka < 0.0) != (kb < 0.0) {
        Some(bisect(lo, hi, k))
    } else {
        None
    }
}

/// Candidate latitudes where sigma can attain its extrema on the annulus:
/// the endpoints, the interior minimum of k, the k = 1 crossings, and any
/// standard parallels that fall inside.
pub(crate) fn sigma_candidates(spec: &ConicSpec, region: &SphericalAnnulus) -> Result<Vec<f64>> {
    region.validate_for(spec)?;
    let (lo, hi) = (region.phi_south(), region.phi_north());
    let mut cands = vec![lo, hi];
    let interior = interior_scale_minimum(spec, lo, hi);
    if let Some(m) = interior {
        if m > lo && m < hi {
            cands.push(m);
        }
    }
    // k is monotone on each side of the interior minimum, so it crosses 1 at
    // most once per piece.
    let pieces: Vec<(f64, f64)> = match interior {
        Some(m) if m > lo && m < hi => vec![(lo, m), (m, hi)],
        _ => vec![(lo, hi)],
    };
    for (a, b) in pieces {
        if let Some(x) = unit_scale_crossing(spec, a, b) {
            cands.push(x);
        }
    }
    for phi in spec.standard_parallels() {
        if phi >= lo && phi <= hi && sigma_at(spec, phi).is_ok() {
            cands.push(phi);
        }
    }
    cands.sort_by(|a, b| a.partial_cmp(b).expect("finite latitudes"));
    cands.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    Ok(cands)
}

pub(crate) struct Extrema {
    pub(crate) sup: f64,
    pub(crate) inf: f64,
    pub(crate) arg_sup: f64,
    pub(crate) arg_inf: f64,
}

fn scan_extrema(spec: &ConicSpec, phis: impl Iterator<Item = f64>) -> Result<Extrema> {
    let mut ext: Option<Extrema> = None;
    for phi in phis {
        let s = sigma_at(spec, phi)?;
        match ext.as_mut() {
            None => {
                ext = Some(Extrema {
                    sup: s,
                    inf: s,
                    arg_sup: phi,
                    arg_inf: phi,
                })
            }
            Some(e) => {
                if s > e.sup {
                    e.sup = s;
                    e.arg_sup = phi;
                }
                if s < e.inf {
                    e.inf = s;
                    e.arg_inf = phi;
                }
            }
        }
    }
    ext.ok_or_else(|| Error::InvalidAnnulus("empty region".to_string()))
}

/// Fast path used by the optimizer: extrema of sigma from the analytic
/// candidate points only.
pub(crate) fn sigma_extrema_fast(spec: &ConicSpec, region: &SphericalAnnulus) -> Result<Extrema> {
    let cands = sigma_candidates(spec, region)?;
    scan_extrema(spec, cands.into_iter())
}

/// Region-wide distortion report.
///
/// Extrema are taken over the analytic candidate points plus a uniform
/// latitude grid of the given step as a guard; sigma is piecewise monotone
/// between candidates for this family, so the candidates already carry the
/// true extrema.
pub fn analyze_annulus(
    spec: &ConicSpec,
    region: &SphericalAnnulus,
    grid_step: f64,
) -> Result<DistortionReport> {
    if !(grid_step > 0.0) || !grid_step.is_finite() {
        return Err(Error::InvalidGridStep(grid_step));
    }
    let cands = sigma_candidates(spec, region)?;
    let (lo, hi) = (region.phi_south(), region.phi_north());
    let steps = ((hi - lo) / grid_step).ceil() as usize;
    let grid = (0..=steps).map(move |i| (lo + i as f64 * grid_step).min(hi));
    let ext = scan_extrema(spec, cands.into_iter().chain(grid))?;

    let lon = region.mid_longitude();
    Ok(DistortionReport {
        sup_sigma: ext.sup,
        inf_sigma: ext.inf,
        metrical_distortion: (ext.sup / ext.inf).ln(),
        // h = 1 for the whole family, so K = max(k, 1/k) = sigma pointwise
        // and the suprema coincide.
        max_dilatation: ext.sup,
        witness_sup: GeoPoint::new(ext.arg_sup, lon)?,
        witness_inf: GeoPoint::new(ext.arg_inf, lon)?,
        grid_step,
    })
}

/// Uniform per-latitude samples of (k, sigma, K) over the annulus.
pub fn sigma_profile(
    spec: &ConicSpec,
    region: &SphericalAnnulus,
    grid_step: f64,
) -> Result<Vec<ProfileSample>> {
    if !(grid_step > 0.0) || !grid_step.is_finite() {
        return Err(Error::InvalidGridStep(grid_step));
    }
    region.validate_for(spec)?;
    let (lo, hi) = (region.phi_south(), region.phi_north());
    let steps = ((hi - lo) / grid_step).ceil() as usize;
    let mut out = Vec::with_capacity(steps + 1);
    for i in 0..=steps {
        let phi = (lo + i as f64 * grid_step).min(hi);
        let (h, k) = scale_factors_meridian_parallel(spec, phi)?;
        let max_stretch = h.max(k);
        let min_stretch = h.min(k);
        out.push(ProfileSample {
            phi,
            parallel_scale: k,
            sigma: max_stretch.max(1.0 / min_stretch),
            dilatation: max_stretch / min_stretch,
        });
    }
    Ok(out)
}

/// One labelled entry of a family comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub label: String,
    pub outcome: Result<DistortionReport>,
}

/// Comparison rows sorted by metrical distortion; failed analyses are kept
/// as annotations after the successful rows.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonTable {
    pub rows: Vec<ComparisonRow>,
}

impl ComparisonTable {
    pub fn from_single(label: impl Into<String>, report: DistortionReport) -> Self {
        Self {
            rows: vec![ComparisonRow {
                label: label.into(),
                outcome: Ok(report),
            }],
        }
    }
}

/// Analyze every spec on the same region and order the table by v
/// ascending, breaking ties by K_max and then by construction order.
/// Per-spec failures become annotated rows, not errors.
pub fn compare_specs(
    specs: &[ConicSpec],
    region: &SphericalAnnulus,
    grid_step: f64,
) -> ComparisonTable {
    let mut indexed: Vec<(usize, ComparisonRow)> = specs
        .iter()
        .enumerate()
        .map(|(i, spec)| {
            (
                i,
                ComparisonRow {
                    label: spec.label(),
                    outcome: analyze_annulus(spec, region, grid_step),
                },
            )
        })
        .collect();
    indexed.sort_by(|(ia, ra), (ib, rb)| match (&ra.outcome, &rb.outcome) {
        (Ok(a), Ok(b)) => a
            .metrical_distortion
            .partial_cmp(&b.metrical_distortion)
            .expect("finite distortion")
            .then(
                a.max_dilatation
                    .partial_cmp(&b.max_dilatation)
                    .expect("finite dilatation"),
            )
            .then(ia.cmp(ib)),
        (Ok(_), Err(_)) => std::cmp::Ordering::Less,
        (Err(_), Ok(_)) => std::cmp::Ordering::Greater,
        (Err(_), Err(_)) => ia.cmp(ib),
    });
    ComparisonTable {
        rows: indexed.into_iter().map(|(_, r)| r).collect(),
    }
}
