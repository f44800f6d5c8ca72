//! The unified equidistant projection family.
//!
//! Every member keeps true scale along all meridians. The conic members map
//! meridians to straight rays through a common apex and parallels to
//! concentric circular arcs of radius rho(phi) = C - phi; the azimuthal case
//! is exactly the cone with n = 1, C = pi/2, so all conic formulas apply to
//! it unchanged. The cylindrical member (x = lambda cos(phi_s), y = phi) is
//! a separate branch: it is not the n -> 0 limit of the same plane
//! coordinates.
//!
//! Plane frame: apex at the origin, central meridian (lambda = 0) along the
//! negative y-axis, east longitudes rotating toward positive x. All lengths
//! are in sphere radii.

use crate::error::{Error, Result};
use crate::sphere::GeoPoint;
use std::f64::consts::{FRAC_PI_2, PI};

/// Two-parallel builder gaps below this collapse to the tangent cone,
/// removing the removable singularity in the cone-constant quotient.
pub const COINCIDENT_PARALLEL_GAP: f64 = 1e-8;

/// A point in the projection plane, in units of sphere radii.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanePoint {
    pub x: f64,
    pub y: f64,
}

impl PlanePoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Distance from the plane origin (the cone apex for conic members).
    pub fn radius(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(&self, other: &PlanePoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Which member of the family a spec denotes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Conic,
    Azimuthal,
    Cylindrical,
}

impl Branch {
    pub fn name(&self) -> &'static str {
        match self {
            Branch::Conic => "conic",
            Branch::Azimuthal => "azimuthal",
            Branch::Cylindrical => "cylindrical",
        }
    }
}

/// Record of the inputs the spec was built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Provenance {
    OneParallel { phi0: f64 },
    TwoParallels { phi1: f64, phi2: f64 },
    Azimuthal,
    Cylindrical { phi_s: f64 },
}

impl Provenance {
    pub fn family_name(&self) -> &'static str {
        match self {
            Provenance::OneParallel { .. } => "conic1",
            Provenance::TwoParallels { .. } => "conic2",
            Provenance::Azimuthal => "azimuthal",
            Provenance::Cylindrical { .. } => "cylindrical",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Kind {
    /// Cone constant n in (0, 1] and apex offset C > 0; rho(phi) = C - phi.
    /// The azimuthal case is exactly n = 1, C = pi/2.
    Conic { n: f64, c: f64 },
    Cylindrical { phi_s: f64 },
}

/// An immutable, validated member of the equidistant family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConicSpec {
    kind: Kind,
    provenance: Provenance,
}

impl ConicSpec {
    pub fn branch(&self) -> Branch {
        match self.kind {
            Kind::Conic { n, c } if n == 1.0 && c == FRAC_PI_2 => Branch::Azimuthal,
            Kind::Conic { .. } => Branch::Conic,
            Kind::Cylindrical { .. } => Branch::Cylindrical,
        }
    }

    /// Cone constant n; absent for the cylindrical branch.
    pub fn cone_constant(&self) -> Option<f64> {
        match self.kind {
            Kind::Conic { n, .. } => Some(n),
            Kind::Cylindrical { .. } => None,
        }
    }

    /// Apex offset C with rho(phi) = C - phi; absent for cylindrical.
    pub fn apex_offset(&self) -> Option<f64> {
        match self.kind {
            Kind::Conic { c, .. } => Some(c),
            Kind::Cylindrical { .. } => None,
        }
    }

    /// Standard parallel of the cylindrical branch.
    pub fn cylindrical_parallel(&self) -> Option<f64> {
        match self.kind {
            Kind::Cylindrical { phi_s } => Some(phi_s),
            Kind::Conic { .. } => None,
        }
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// Latitudes where the builder pinned the parallel scale to 1.
    pub fn standard_parallels(&self) -> Vec<f64> {
        match self.provenance {
            Provenance::OneParallel { phi0 } => vec![phi0],
            Provenance::TwoParallels { phi1, phi2 } => vec![phi1, phi2],
            Provenance::Azimuthal => vec![FRAC_PI_2],
            Provenance::Cylindrical { phi_s } => vec![phi_s],
        }
    }

    /// Short deterministic label, e.g. `conic2(50,65)`.
    pub fn label(&self) -> String {
        match self.provenance {
            Provenance::OneParallel { phi0 } => format!("conic1({})", phi0.to_degrees()),
            Provenance::TwoParallels { phi1, phi2 } => {
                format!("conic2({},{})", phi1.to_degrees(), phi2.to_degrees())
            }
            Provenance::Azimuthal => "azimuthal".to_string(),
            Provenance::Cylindrical { phi_s } => format!("cylindrical({})", phi_s.to_degrees()),
        }
    }
}

fn check_parallel_latitude(phi: f64) -> Result<()> {
    if !phi.is_finite() {
        return Err(Error::NonFiniteCoordinate);
    }
    if phi.abs() >= FRAC_PI_2 {
        return Err(Error::InvalidStandardParallel {
            phi,
            reason: "must lie strictly between the poles",
        });
    }
    Ok(())
}

/// Cone through two standard parallels: true parallel scale at phi1 and
/// phi2, true meridian scale everywhere.
///
/// Coincident inputs (gap below [`COINCIDENT_PARALLEL_GAP`]) delegate to the
/// tangent cone at the midpoint.
pub fn build_conic_two_parallels(phi1: f64, phi2: f64) -> Result<ConicSpec> {
    check_parallel_latitude(phi1)?;
    check_parallel_latitude(phi2)?;
    if phi1 >= phi2 {
        return Err(Error::ParallelOrder { phi1, phi2 });
    }
    if phi2 - phi1 < COINCIDENT_PARALLEL_GAP {
        return build_conic_one_parallel(0.5 * (phi1 + phi2));
    }
    let n = (phi1.cos() - phi2.cos()) / (phi2 - phi1);
    if !(n > 0.0 && n <= 1.0) {
        return Err(Error::InvalidConeConstant { n });
    }
    let c = phi1 + phi1.cos() / n;
    Ok(ConicSpec {
        kind: Kind::Conic { n, c },
        provenance: Provenance::TwoParallels { phi1, phi2 },
    })
}

/// Tangent cone at a single standard parallel: the parallel scale is 1 at
/// phi0 and stationary there.
pub fn build_conic_one_parallel(phi0: f64) -> Result<ConicSpec> {
    check_parallel_latitude(phi0)?;
    if phi0 == 0.0 {
        return Err(Error::InvalidStandardParallel {
            phi: phi0,
            reason: "the equator has no tangent cone; use the cylindrical branch",
        });
    }
    let n = phi0.sin();
    if !(n > 0.0 && n <= 1.0) {
        return Err(Error::InvalidConeConstant { n });
    }
    let c = phi0 + 1.0 / phi0.tan();
    Ok(ConicSpec {
        kind: Kind::Conic { n, c },
        provenance: Provenance::OneParallel { phi0 },
    })
}

/// Azimuthal equidistant projection about the north pole: the n = 1,
/// C = pi/2 member of the conic branch.
pub fn build_azimuthal() -> ConicSpec {
    ConicSpec {
        kind: Kind::Conic {
            n: 1.0,
            c: FRAC_PI_2,
        },
        provenance: Provenance::Azimuthal,
    }
}

/// Equidistant cylindrical projection with true scale on the parallel
/// phi_s: x = lambda cos(phi_s), y = phi.
pub fn build_cylindrical(phi_s: f64) -> Result<ConicSpec> {
    check_parallel_latitude(phi_s)?;
    Ok(ConicSpec {
        kind: Kind::Cylindrical { phi_s },
        provenance: Provenance::Cylindrical { phi_s },
    })
}

/// Forward projection.
pub fn forward(spec: &ConicSpec, p: GeoPoint) -> Result<PlanePoint> {
    match spec.kind {
        Kind::Conic { n, c } => {
            let rho = c - p.lat();
            if rho < 0.0 {
                return Err(Error::BeyondApex {
                    lat: p.lat(),
                    apex_offset: c,
                });
            }
            let (s, co) = (n * p.lon()).sin_cos();
            Ok(PlanePoint::new(rho * s, -rho * co))
        }
        Kind::Cylindrical { phi_s } => Ok(PlanePoint::new(p.lon() * phi_s.cos(), p.lat())),
    }
}

/// Inverse projection; errors on plane points outside the image of the
/// valid domain.
pub fn inverse(spec: &ConicSpec, q: PlanePoint) -> Result<GeoPoint> {
    if !q.x.is_finite() || !q.y.is_finite() {
        return Err(Error::NonFiniteCoordinate);
    }
    match spec.kind {
        Kind::Conic { n, c } => {
            let rho = q.radius();
            if rho == 0.0 {
                // The apex is an image point only when it is the pole.
                if c > FRAC_PI_2 + 1e-12 {
                    return Err(Error::OutsideImage {
                        x: q.x,
                        y: q.y,
                        reason: "the apex is not an image point of this cone",
                    });
                }
                return GeoPoint::new(c.min(FRAC_PI_2), 0.0);
            }
            let lon = q.x.atan2(-q.y) / n;
            if lon.abs() > PI + 1e-12 {
                return Err(Error::OutsideImage {
                    x: q.x,
                    y: q.y,
                    reason: "the ray falls inside the cone's longitude gap",
                });
            }
            let lat = c - rho;
            if !(-FRAC_PI_2 - 1e-12..=FRAC_PI_2 + 1e-12).contains(&lat) {
                return Err(Error::OutsideImage {
                    x: q.x,
                    y: q.y,
                    reason: "the radius maps outside the latitude range",
                });
            }
            GeoPoint::new(lat.clamp(-FRAC_PI_2, FRAC_PI_2), lon.clamp(-PI, PI))
        }
        Kind::Cylindrical { phi_s } => {
            let lon = q.x / phi_s.cos();
            if lon.abs() > PI + 1e-12 {
                return Err(Error::OutsideImage {
                    x: q.x,
                    y: q.y,
                    reason: "longitude out of range",
                });
            }
            if q.y.abs() > FRAC_PI_2 + 1e-12 {
                return Err(Error::OutsideImage {
                    x: q.x,
                    y: q.y,
                    reason: "latitude out of range",
                });
            }
            GeoPoint::new(q.y.clamp(-FRAC_PI_2, FRAC_PI_2), lon.clamp(-PI, PI))
        }
    }
}

/// Meridian and parallel scale factors (h, k) at latitude phi.
///
/// h = 1 for the whole family. The azimuthal pole takes the limit value
/// k = 1; every other member is singular at the poles.
pub fn scale_factors_meridian_parallel(spec: &ConicSpec, phi: f64) -> Result<(f64, f64)> {
    if !phi.is_finite() {
        return Err(Error::NonFiniteCoordinate);
    }
    match spec.kind {
        Kind::Conic { n, c } => {
            let rho = c - phi;
            if rho < 0.0 {
                return Err(Error::BeyondApex {
                    lat: phi,
                    apex_offset: c,
                });
            }
            if phi.abs() >= FRAC_PI_2 {
                // rho/cos(phi) -> 1 as the azimuthal apex is approached.
                if phi == FRAC_PI_2 && spec.branch() == Branch::Azimuthal {
                    return Ok((1.0, 1.0));
                }
                return Err(Error::SingularLatitude { lat: phi });
            }
            Ok((1.0, n * rho / phi.cos()))
        }
        Kind::Cylindrical { phi_s } => {
            if phi.abs() >= FRAC_PI_2 {
                return Err(Error::SingularLatitude { lat: phi });
            }
            Ok((1.0, phi_s.cos() / phi.cos()))
        }
    }
}

/// Angular distance beyond the pole at which the meridian images meet:
/// C - pi/2. Zero exactly for the azimuthal member.
pub fn apex_colatitude(spec: &ConicSpec) -> Result<f64> {
    match spec.kind {
        Kind::Conic { c, .. } => Ok(c - FRAC_PI_2),
        Kind::Cylindrical { .. } => Err(Error::WrongBranch {
            got: Branch::Cylindrical.name(),
        }),
    }
}

/// Length of one radian of parallel image per radian of meridian image at
/// phi_rhodes, paired with the true ratio cos(phi_rhodes) on the sphere.
///
/// Callers compare the pair against Ptolemy's stipulated 4/5 for the
/// parallel of Rhodes.
pub fn rhodes_diagnostic(spec: &ConicSpec, phi_rhodes: f64) -> Result<(f64, f64)> {
    match spec.kind {
        Kind::Conic { n, c } => {
            if phi_rhodes.abs() >= FRAC_PI_2 {
                return Err(Error::SingularLatitude { lat: phi_rhodes });
            }
            let rho = c - phi_rhodes;
            if rho < 0.0 {
                return Err(Error::BeyondApex {
                    lat: phi_rhodes,
                    apex_offset: c,
                });
            }
            Ok((n * rho, phi_rhodes.cos()))
        }
        Kind::Cylindrical { .. } => Err(Error::WrongBranch {
            got: Branch::Cylindrical.name(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn gp(lat_deg: f64, lon_deg: f64) -> GeoPoint {
        GeoPoint::from_degrees(lat_deg, lon_deg).unwrap()
    }

    // Independent route to (n, C): bisection on the linear equation
    // cos(phi1) (C - phi2) = cos(phi2) (C - phi1), then n from one
    // true-scale condition.
    fn two_parallel_oracle(phi1: f64, phi2: f64) -> (f64, f64) {
        let f = |c: f64| phi1.cos() * (c - phi2) - phi2.cos() * (c - phi1);
        let (mut a, mut b) = (phi2, 100.0);
        assert!(f(a) * f(b) < 0.0);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if f(a) * f(m) <= 0.0 {
                b = m;
            } else {
                a = m;
            }
        }
        let c = 0.5 * (a + b);
        (phi1.cos() / (c - phi1), c)
    }

    #[test]
    fn two_parallels_equator_thule() {
        let spec = build_conic_two_parallels(0.0, 63f64.to_radians()).unwrap();
        let (n_oracle, c_oracle) = two_parallel_oracle(0.0, 63f64.to_radians());
        assert_relative_eq!(spec.cone_constant().unwrap(), n_oracle, epsilon = 1e-9);
        assert_relative_eq!(spec.apex_offset().unwrap(), c_oracle, epsilon = 1e-9);
        assert_relative_eq!(spec.cone_constant().unwrap(), 0.49657206252335, epsilon = 1e-9);
        assert_relative_eq!(spec.apex_offset().unwrap(), 2.01380640489209, epsilon = 1e-9);
    }

    #[test]
    fn two_parallels_mid_band() {
        let spec = build_conic_two_parallels(50f64.to_radians(), 65f64.to_radians()).unwrap();
        let (n_oracle, c_oracle) = two_parallel_oracle(50f64.to_radians(), 65f64.to_radians());
        assert_relative_eq!(spec.cone_constant().unwrap(), n_oracle, epsilon = 1e-9);
        assert_relative_eq!(spec.apex_offset().unwrap(), c_oracle, epsilon = 1e-9);
        assert_relative_eq!(spec.cone_constant().unwrap(), 0.84098496102960, epsilon = 1e-9);
        assert_relative_eq!(spec.apex_offset().unwrap(), 1.63699174178719, epsilon = 1e-9);
        assert_relative_eq!(
            apex_colatitude(&spec).unwrap().to_degrees(),
            3.79271790217550,
            epsilon = 1e-6
        );
    }

    #[test]
    fn coincident_parallels_collapse_to_tangent_cone() {
        let phi = 40f64.to_radians();
        let spec = build_conic_two_parallels(phi - 4e-9, phi + 4e-9).unwrap();
        assert_relative_eq!(spec.cone_constant().unwrap(), phi.sin(), epsilon = 1e-8);
        assert!(matches!(
            spec.provenance(),
            Provenance::OneParallel { .. }
        ));
    }

    #[test]
    fn two_parallels_rejects_bad_inputs() {
        assert!(matches!(
            build_conic_two_parallels(0.5, 0.4),
            Err(Error::ParallelOrder { .. })
        ));
        // Southern-dominant span: cone constant falls out of (0, 1].
        assert!(matches!(
            build_conic_two_parallels(-60f64.to_radians(), 10f64.to_radians()),
            Err(Error::InvalidConeConstant { .. })
        ));
        assert!(build_conic_two_parallels(0.0, FRAC_PI_2).is_err());
    }

    #[test]
    fn one_parallel_known_values() {
        let s45 = build_conic_one_parallel(45f64.to_radians()).unwrap();
        assert_relative_eq!(s45.cone_constant().unwrap(), 0.70710678118655, epsilon = 1e-12);
        assert_relative_eq!(s45.apex_offset().unwrap(), 1.78539816339745, epsilon = 1e-12);
        let s30 = build_conic_one_parallel(30f64.to_radians()).unwrap();
        assert_relative_eq!(s30.cone_constant().unwrap(), 0.5, epsilon = 1e-12);
        assert_relative_eq!(s30.apex_offset().unwrap(), 2.25564958316718, epsilon = 1e-12);
    }

    #[test]
    fn one_parallel_near_pole_tends_to_azimuthal() {
        let spec = build_conic_one_parallel(FRAC_PI_2 - 1e-7).unwrap();
        assert_relative_eq!(spec.cone_constant().unwrap(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(spec.apex_offset().unwrap(), FRAC_PI_2, epsilon = 1e-6);
    }

    #[test]
    fn one_parallel_rejects_equator_pole_and_south() {
        assert!(build_conic_one_parallel(0.0).is_err());
        assert!(build_conic_one_parallel(FRAC_PI_2).is_err());
        assert!(matches!(
            build_conic_one_parallel(-0.5),
            Err(Error::InvalidConeConstant { .. })
        ));
    }

    #[test]
    fn azimuthal_is_the_unit_cone() {
        let spec = build_azimuthal();
        assert_eq!(spec.branch(), Branch::Azimuthal);
        assert_eq!(spec.cone_constant(), Some(1.0));
        assert_eq!(spec.apex_offset(), Some(FRAC_PI_2));
        assert_eq!(apex_colatitude(&spec).unwrap(), 0.0);
        // Pole to the apex, equator to the radius-pi/2 circle.
        assert_eq!(forward(&spec, gp(90.0, 30.0)).unwrap(), PlanePoint::new(0.0, 0.0));
        let q = forward(&spec, gp(0.0, 77.0)).unwrap();
        assert_relative_eq!(q.radius(), FRAC_PI_2, epsilon = 1e-12);
        // Parallel scale at colatitude c is c / sin c.
        let (h, k) = scale_factors_meridian_parallel(&spec, 60f64.to_radians()).unwrap();
        assert_eq!(h, 1.0);
        assert_relative_eq!(k, 1.04719755119660, epsilon = 1e-12);
    }

    #[test]
    fn cylindrical_known_compressions() {
        let plate_carree = build_cylindrical(0.0).unwrap();
        let p = gp(10.0, 40.0);
        let q = forward(&plate_carree, p).unwrap();
        assert_relative_eq!(q.x, p.lon(), epsilon = 1e-15);
        assert_relative_eq!(q.y, p.lat(), epsilon = 1e-15);

        let rhodes = build_cylindrical(36f64.to_radians()).unwrap();
        let q = forward(&rhodes, gp(0.0, 100.0)).unwrap();
        assert_relative_eq!(q.x / 100f64.to_radians(), 0.80901699437495, epsilon = 1e-12);

        let s60 = build_cylindrical(60f64.to_radians()).unwrap();
        let q = forward(&s60, gp(0.0, 100.0)).unwrap();
        assert_relative_eq!(q.x / 100f64.to_radians(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn forward_central_meridian_and_worked_example() {
        for spec in [
            build_conic_two_parallels(50f64.to_radians(), 65f64.to_radians()).unwrap(),
            build_conic_one_parallel(45f64.to_radians()).unwrap(),
            build_azimuthal(),
        ] {
            let phi = 37f64.to_radians();
            let q = forward(&spec, GeoPoint::new(phi, 0.0).unwrap()).unwrap();
            assert_eq!(q.x, 0.0);
            assert_relative_eq!(q.y, -(spec.apex_offset().unwrap() - phi), epsilon = 1e-15);
        }
        // n = 0.5, C = 2 at (30 N, 90 E); frozen from direct evaluation.
        let spec = ConicSpec {
            kind: Kind::Conic { n: 0.5, c: 2.0 },
            provenance: Provenance::TwoParallels {
                phi1: 0.0,
                phi2: 1.0,
            },
        };
        let q = forward(&spec, gp(30.0, 90.0)).unwrap();
        assert_relative_eq!(q.radius(), 1.47640122440170, epsilon = 1e-12);
        assert_relative_eq!(q.x, 1.04397331752656, epsilon = 1e-12);
        assert_relative_eq!(q.y, -1.04397331752656, epsilon = 1e-12);
    }

    #[test]
    fn inverse_recovers_central_meridian_and_apex() {
        let spec = build_conic_two_parallels(50f64.to_radians(), 65f64.to_radians()).unwrap();
        let c = spec.apex_offset().unwrap();
        let phi = 41f64.to_radians();
        let p = inverse(&spec, PlanePoint::new(0.0, -(c - phi))).unwrap();
        assert_relative_eq!(p.lat(), phi, epsilon = 1e-12);
        assert_eq!(p.lon(), 0.0);

        let pole = inverse(&build_azimuthal(), PlanePoint::new(0.0, 0.0)).unwrap();
        assert_relative_eq!(pole.lat(), FRAC_PI_2, epsilon = 1e-15);

        // The apex of a taller cone is not an image point.
        assert!(matches!(
            inverse(&spec, PlanePoint::new(0.0, 0.0)),
            Err(Error::OutsideImage { .. })
        ));
    }

    #[test]
    fn inverse_rejects_points_outside_image() {
        let spec = build_conic_two_parallels(50f64.to_radians(), 65f64.to_radians()).unwrap();
        // Tiny radius: latitude beyond the pole.
        assert!(inverse(&spec, PlanePoint::new(0.0, -1e-3)).is_err());
        // Huge radius: latitude below the south pole.
        assert!(inverse(&spec, PlanePoint::new(0.0, -10.0)).is_err());
        // Inside the longitude gap of the cone.
        let n = spec.cone_constant().unwrap();
        assert!(n < 0.9);
        let theta = n * PI * 1.05;
        let rho = spec.apex_offset().unwrap() - 0.9;
        assert!(inverse(
            &spec,
            PlanePoint::new(rho * theta.sin(), -rho * theta.cos())
        )
        .is_err());

        let cyl = build_cylindrical(0.0).unwrap();
        assert!(inverse(&cyl, PlanePoint::new(PI * 1.01, 0.0)).is_err());
        assert!(inverse(&cyl, PlanePoint::new(0.0, FRAC_PI_2 * 1.01)).is_err());
    }

    #[test]
    fn scale_is_one_at_standard_parallels() {
        let specs = [
            build_conic_two_parallels(0.0, 63f64.to_radians()).unwrap(),
            build_conic_two_parallels(50f64.to_radians(), 65f64.to_radians()).unwrap(),
            build_conic_one_parallel(45f64.to_radians()).unwrap(),
            build_cylindrical(36f64.to_radians()).unwrap(),
        ];
        for spec in &specs {
            for phi in spec.standard_parallels() {
                let (h, k) = scale_factors_meridian_parallel(spec, phi).unwrap();
                assert_eq!(h, 1.0);
                assert_relative_eq!(k, 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn parallel_scale_worked_example() {
        // Frozen from the builder oracle: conic2(0, 63) at 36 degrees.
        let spec = build_conic_two_parallels(0.0, 63f64.to_radians()).unwrap();
        let (_, k) = scale_factors_meridian_parallel(&spec, 36f64.to_radians()).unwrap();
        assert_relative_eq!(k, 0.85040805825258, epsilon = 1e-9);
    }

    #[test]
    fn scale_errors_at_poles_except_azimuthal_apex() {
        let spec = build_conic_two_parallels(50f64.to_radians(), 65f64.to_radians()).unwrap();
        assert!(matches!(
            scale_factors_meridian_parallel(&spec, FRAC_PI_2),
            Err(Error::SingularLatitude { .. })
        ));
        let cyl = build_cylindrical(0.0).unwrap();
        assert!(scale_factors_meridian_parallel(&cyl, -FRAC_PI_2).is_err());
        let (_, k) = scale_factors_meridian_parallel(&build_azimuthal(), FRAC_PI_2).unwrap();
        assert_eq!(k, 1.0);
        assert!(scale_factors_meridian_parallel(&build_azimuthal(), -FRAC_PI_2).is_err());
    }

    #[test]
    fn rhodes_diagnostic_values() {
        // cos 36 vs Ptolemy's 4/5: the true ratio misses 0.8 by about 1.13%.
        let (map_ratio, true_ratio) =
            rhodes_diagnostic(&build_conic_one_parallel(36f64.to_radians()).unwrap(), 36f64.to_radians())
                .unwrap();
        assert_relative_eq!(true_ratio, 0.80901699437495, epsilon = 1e-12);
        // The tangent parallel is true to scale, so the map ratio is exactly the cosine.
        assert_relative_eq!(map_ratio, true_ratio, epsilon = 1e-15);
        assert!((true_ratio - 0.8).abs() / 0.8 < 0.012);

        // conic2(0, 63) shortens the Rhodes parallel: frozen oracle values.
        let spec = build_conic_two_parallels(0.0, 63f64.to_radians()).unwrap();
        let (map_ratio, true_ratio) = rhodes_diagnostic(&spec, 36f64.to_radians()).unwrap();
        assert_relative_eq!(map_ratio, 0.68799457127974, epsilon = 1e-9);
        assert_relative_eq!(true_ratio, 0.80901699437495, epsilon = 1e-12);

        assert!(matches!(
            rhodes_diagnostic(&build_cylindrical(0.0).unwrap(), 0.5),
            Err(Error::WrongBranch { .. })
        ));
    }

    #[test]
    fn apex_requires_conic_branch() {
        assert!(matches!(
            apex_colatitude(&build_cylindrical(0.3).unwrap()),
            Err(Error::WrongBranch { .. })
        ));
    }

    #[test]
    fn labels_are_deterministic() {
        assert_eq!(
            build_conic_two_parallels(50f64.to_radians(), 65f64.to_radians())
                .unwrap()
                .label(),
            "conic2(50,65)"
        );
        assert_eq!(build_azimuthal().label(), "azimuthal");
    }
}
