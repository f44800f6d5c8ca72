//! Spherical geometry on the unit sphere: positions, geodesic arcs,
//! midpoints, and triangles.
//!
//! The triangle routines double as classical impossibility oracles for flat
//! maps: in any spherical triangle the angle sum exceeds two right angles,
//! and the arc joining the midpoints of two sides exceeds half the third
//! side. Both facts are exercised by the test suite over large random
//! samples.

use crate::error::{Error, Result};
use std::f64::consts::{FRAC_PI_2, PI, TAU};

/// Pairwise geodesic distances closer than this to 0 or pi make a triangle
/// degenerate.
pub const DEGENERACY_THRESHOLD: f64 = 1e-9;

/// Normalize a longitude into (-pi, pi].
pub fn normalize_lon(lon: f64) -> f64 {
    let r = lon.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// A position on the unit sphere. Latitude in [-pi/2, pi/2], longitude
/// normalized into (-pi, pi], both radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeoPoint {
    lat: f64,
    lon: f64,
}

impl GeoPoint {
    pub fn new(lat: f64, lon: f64) -> Result<Self> {
        if !lat.is_finite() || !lon.is_finite() {
            return Err(Error::NonFiniteCoordinate);
        }
        if !(-FRAC_PI_2..=FRAC_PI_2).contains(&lat) {
            return Err(Error::InvalidLatitude(lat));
        }
        Ok(Self {
            lat,
            lon: normalize_lon(lon),
        })
    }

    pub fn from_degrees(lat_deg: f64, lon_deg: f64) -> Result<Self> {
        Self::new(lat_deg.to_radians(), lon_deg.to_radians())
    }

    pub fn lat(&self) -> f64 {
        self.lat
    }

    pub fn lon(&self) -> f64 {
        self.lon
    }

    pub fn lat_degrees(&self) -> f64 {
        self.lat.to_degrees()
    }

    pub fn lon_degrees(&self) -> f64 {
        self.lon.to_degrees()
    }

    pub(crate) fn unit_vector(&self) -> [f64; 3] {
        let (slat, clat) = self.lat.sin_cos();
        let (slon, clon) = self.lon.sin_cos();
        [clat * clon, clat * slon, slat]
    }

    pub(crate) fn from_unit_vector(v: [f64; 3]) -> Self {
        let lat = v[2].atan2(v[0].hypot(v[1]));
        let lon = if v[0] == 0.0 && v[1] == 0.0 {
            0.0
        } else {
            v[1].atan2(v[0])
        };
        Self {
            lat,
            lon: normalize_lon(lon),
        }
    }
}

/// Central angle between two points, in [0, pi].
///
/// Uses the two-argument arctangent form, which stays accurate for nearly
/// coincident and nearly antipodal points where plain arccosine loses
/// digits.
pub fn geodesic_distance(p: GeoPoint, q: GeoPoint) -> f64 {
    let (sp, cp) = p.lat.sin_cos();
    let (sq, cq) = q.lat.sin_cos();
    let (sdl, cdl) = (q.lon - p.lon).sin_cos();
    let cross = ((cq * sdl).powi(2) + (cp * sq - sp * cq * cdl).powi(2)).sqrt();
    let dot = sp * sq + cp * cq * cdl;
    cross.atan2(dot)
}

/// Geodesic midpoint of two non-antipodal points.
pub fn midpoint(p: GeoPoint, q: GeoPoint) -> Result<GeoPoint> {
    let a = p.unit_vector();
    let b = q.unit_vector();
    let s = [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
    let norm = (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt();
    // |a + b| = 2 cos(d/2) vanishes exactly at antipodes.
    if norm < DEGENERACY_THRESHOLD {
        return Err(Error::AntipodalPoints);
    }
    Ok(GeoPoint::from_unit_vector([
        s[0] / norm,
        s[1] / norm,
        s[2] / norm,
    ]))
}

/// A spherical triangle stored by its vertices; angles are derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalTriangle {
    a: GeoPoint,
    b: GeoPoint,
    c: GeoPoint,
}

impl SphericalTriangle {
    /// Rejects triangles with any pairwise distance closer than
    /// [`DEGENERACY_THRESHOLD`] to 0 or pi.
    pub fn new(a: GeoPoint, b: GeoPoint, c: GeoPoint) -> Result<Self> {
        for (label, d) in [
            ("ab", geodesic_distance(a, b)),
            ("bc", geodesic_distance(b, c)),
            ("ca", geodesic_distance(c, a)),
        ] {
            if d < DEGENERACY_THRESHOLD {
                return Err(Error::DegenerateTriangle(format!(
                    "vertices {label} are coincident (distance {d:.3e})"
                )));
            }
            if d > PI - DEGENERACY_THRESHOLD {
                return Err(Error::DegenerateTriangle(format!(
                    "vertices {label} are antipodal (distance {d:.6})"
                )));
            }
        }
        Ok(Self { a, b, c })
    }

    pub fn vertices(&self) -> (GeoPoint, GeoPoint, GeoPoint) {
        (self.a, self.b, self.c)
    }

    /// Side lengths opposite vertices a, b, c respectively.
    pub fn side_lengths(&self) -> [f64; 3] {
        [
            geodesic_distance(self.b, self.c),
            geodesic_distance(self.c, self.a),
            geodesic_distance(self.a, self.b),
        ]
    }
}

/// Interior angles of a spherical triangle, radians. Each lies in (0, pi)
/// and the sum exceeds pi.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleAngles {
    alpha: f64,
    beta: f64,
    gamma: f64,
}

impl TriangleAngles {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        for a in [alpha, beta, gamma] {
            if !a.is_finite() || a <= 0.0 || a >= PI {
                return Err(Error::InvalidAngles(format!(
                    "angle {a} rad is outside (0, pi)"
                )));
            }
        }
        let sum = alpha + beta + gamma;
        if sum <= PI {
            return Err(Error::AngleSumNotSpherical { sum_rad: sum });
        }
        Ok(Self { alpha, beta, gamma })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn sum(&self) -> f64 {
        self.alpha + self.beta + self.gamma
    }

    /// Spherical excess: angle sum minus pi. Equals the triangle area on the
    /// unit sphere.
    pub fn excess(&self) -> f64 {
        self.sum() - PI
    }
}

// Angle at `at` between the geodesics toward u and toward w, via tangent
// vectors in the tangent plane at `at`.
fn vertex_angle(at: [f64; 3], u: [f64; 3], w: [f64; 3]) -> f64 {
    let tangent = |v: [f64; 3]| -> [f64; 3] {
        let dot = at[0] * v[0] + at[1] * v[1] + at[2] * v[2];
        [v[0] - dot * at[0], v[1] - dot * at[1], v[2] - dot * at[2]]
    };
    let tu = tangent(u);
    let tw = tangent(w);
    let cross = [
        tu[1] * tw[2] - tu[2] * tw[1],
        tu[2] * tw[0] - tu[0] * tw[2],
        tu[0] * tw[1] - tu[1] * tw[0],
    ];
    let cross_norm = (cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]).sqrt();
    let dot = tu[0] * tw[0] + tu[1] * tw[1] + tu[2] * tw[2];
    cross_norm.atan2(dot)
}

/// Interior angles at vertices a, b, c.
pub fn triangle_angles(t: &SphericalTriangle) -> Result<TriangleAngles> {
    let va = t.a.unit_vector();
    let vb = t.b.unit_vector();
    let vc = t.c.unit_vector();
    TriangleAngles::new(
        vertex_angle(va, vb, vc),
        vertex_angle(vb, vc, va),
        vertex_angle(vc, va, vb),
    )
}

/// Side lengths of the spherical triangle with the given interior angles,
/// opposite alpha, beta, gamma respectively.
///
/// Unlike the planar case, the angles determine the triangle completely;
/// this inverts the angle data through the polar-dual cosine rule
/// cos a = (cos alpha + cos beta cos gamma) / (sin beta sin gamma).
pub fn solve_sides_from_angles(angles: &TriangleAngles) -> Result<[f64; 3]> {
    let (al, be, ga) = (angles.alpha(), angles.beta(), angles.gamma());
    // Polar-dual triangle inequality: each dual side pi - x must be shorter
    // than the other two combined.
    for (x, y, z) in [(al, be, ga), (be, ga, al), (ga, al, be)] {
        if y + z - x >= PI {
            return Err(Error::InvalidAngles(format!(
                "angles violate the polar-dual triangle inequality: {y} + {z} - {x} >= pi"
            )));
        }
    }
    let side = |opp: f64, adj1: f64, adj2: f64| -> Result<f64> {
        let q = (opp.cos() + adj1.cos() * adj2.cos()) / (adj1.sin() * adj2.sin());
        if q.abs() > 1.0 + 1e-12 {
            return Err(Error::InvalidAngles(format!(
                "cosine rule produced {q} outside [-1, 1]"
            )));
        }
        Ok(q.clamp(-1.0, 1.0).acos())
    };
    Ok([side(al, be, ga)?, side(be, ga, al)?, side(ga, al, be)?])
}

/// Ratio of the midline arc DE (D, E midpoints of ab and bc) to half the
/// side ac. Strictly greater than 1 on the sphere.
pub fn prop27_ratio(t: &SphericalTriangle) -> Result<f64> {
    let d = midpoint(t.a, t.b)?;
    let e = midpoint(t.b, t.c)?;
    let half_base = geodesic_distance(t.a, t.c) / 2.0;
    Ok(geodesic_distance(d, e) / half_base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn gp(lat_deg: f64, lon_deg: f64) -> GeoPoint {
        GeoPoint::from_degrees(lat_deg, lon_deg).unwrap()
    }

    #[test]
    fn distance_identity() {
        assert_eq!(geodesic_distance(gp(0.0, 0.0), gp(0.0, 0.0)), 0.0);
    }

    #[test]
    fn distance_quarter_great_circle() {
        assert_relative_eq!(
            geodesic_distance(gp(0.0, 0.0), gp(0.0, 90.0)),
            FRAC_PI_2,
            max_relative = 1e-15
        );
    }

    #[test]
    fn distance_same_parallel() {
        // Independent oracle: cos d = sin^2(45) + cos^2(45) cos(60).
        let expected = (0.75f64).acos();
        let d = geodesic_distance(gp(45.0, 0.0), gp(45.0, 60.0));
        assert!((d - expected).abs() < 1e-6f64.to_radians());
        assert_relative_eq!(d.to_degrees(), 41.409622109271, epsilon = 1e-9);
    }

    #[test]
    fn distance_is_symmetric() {
        let p = gp(12.5, -140.0);
        let q = gp(-67.0, 31.0);
        assert_eq!(geodesic_distance(p, q), geodesic_distance(q, p));
    }

    #[test]
    fn midpoint_on_equator() {
        let m = midpoint(gp(0.0, 0.0), gp(0.0, 60.0)).unwrap();
        assert_relative_eq!(m.lat_degrees(), 0.0, epsilon = 1e-12);
        assert_relative_eq!(m.lon_degrees(), 30.0, epsilon = 1e-12);
    }

    #[test]
    fn midpoint_on_meridian() {
        let m = midpoint(gp(0.0, 0.0), gp(90.0, 0.0)).unwrap();
        assert_relative_eq!(m.lat_degrees(), 45.0, epsilon = 1e-12);
        assert_relative_eq!(m.lon_degrees(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn midpoint_same_parallel() {
        // Frozen from the vector-sum oracle: the midpoint of two points at
        // latitude 45 separated by 60 degrees of longitude sits poleward of
        // the parallel, at 49.10660535 degrees.
        let m = midpoint(gp(45.0, 0.0), gp(45.0, 60.0)).unwrap();
        assert_relative_eq!(m.lon_degrees(), 30.0, epsilon = 1e-9);
        assert_relative_eq!(m.lat_degrees(), 49.10660535086909, epsilon = 1e-3);
        // Must be equidistant from both endpoints and lie on the geodesic.
        let d1 = geodesic_distance(gp(45.0, 0.0), m);
        let d2 = geodesic_distance(m, gp(45.0, 60.0));
        let total = geodesic_distance(gp(45.0, 0.0), gp(45.0, 60.0));
        assert_relative_eq!(d1, d2, epsilon = 1e-12);
        assert_relative_eq!(d1 + d2, total, epsilon = 1e-12);
    }

    #[test]
    fn midpoint_rejects_antipodes() {
        assert_eq!(
            midpoint(gp(10.0, 20.0), gp(-10.0, -160.0)),
            Err(Error::AntipodalPoints)
        );
    }

    #[test]
    fn octant_triangle_angles() {
        let t = SphericalTriangle::new(gp(0.0, 0.0), gp(0.0, 90.0), gp(90.0, 0.0)).unwrap();
        let a = triangle_angles(&t).unwrap();
        assert_relative_eq!(a.alpha(), FRAC_PI_2, epsilon = 1e-12);
        assert_relative_eq!(a.beta(), FRAC_PI_2, epsilon = 1e-12);
        assert_relative_eq!(a.gamma(), FRAC_PI_2, epsilon = 1e-12);
    }

    #[test]
    fn pole_triangle_angles() {
        // Two meridians 60 degrees apart meet the equator at right angles and
        // each other at the pole with the longitude gap.
        let t = SphericalTriangle::new(gp(0.0, 0.0), gp(0.0, 60.0), gp(90.0, 0.0)).unwrap();
        let a = triangle_angles(&t).unwrap();
        assert_relative_eq!(a.alpha(), FRAC_PI_2, epsilon = 1e-12);
        assert_relative_eq!(a.beta(), FRAC_PI_2, epsilon = 1e-12);
        assert_relative_eq!(a.gamma(), 60f64.to_radians(), epsilon = 1e-12);
    }

    #[test]
    fn solve_octant_triangle() {
        let a = TriangleAngles::new(FRAC_PI_2, FRAC_PI_2, FRAC_PI_2).unwrap();
        let sides = solve_sides_from_angles(&a).unwrap();
        for s in sides {
            assert_relative_eq!(s, FRAC_PI_2, epsilon = 1e-12);
        }
    }

    #[test]
    fn solve_pole_triangle() {
        let g = 60f64.to_radians();
        let a = TriangleAngles::new(FRAC_PI_2, FRAC_PI_2, g).unwrap();
        let sides = solve_sides_from_angles(&a).unwrap();
        assert_relative_eq!(sides[0], FRAC_PI_2, epsilon = 1e-12);
        assert_relative_eq!(sides[1], FRAC_PI_2, epsilon = 1e-12);
        assert_relative_eq!(sides[2], g, epsilon = 1e-12);
    }

    #[test]
    fn flat_angle_sum_is_rejected() {
        let g = 60f64.to_radians();
        match TriangleAngles::new(g, g, g) {
            Err(Error::AngleSumNotSpherical { sum_rad }) => {
                assert_relative_eq!(sum_rad, PI, epsilon = 1e-12);
            }
            other => panic!("expected the angle-sum obstruction, got {other:?}"),
        }
    }

    #[test]
    fn prop27_pole_triangle() {
        // D = (45, 0), E = (45, 60); DE = 41.4096 deg against 30 deg.
        let t = SphericalTriangle::new(gp(0.0, 0.0), gp(90.0, 0.0), gp(0.0, 60.0)).unwrap();
        let r = prop27_ratio(&t).unwrap();
        assert_relative_eq!(r, 1.380320736975695, epsilon = 1e-9);
        assert!(r > 1.0);
    }

    #[test]
    fn prop27_tends_to_one_for_small_triangles() {
        // Euclidean limit: shrink a fixed shape and watch the ratio fall
        // toward (but never reach) 1.
        let mut last = f64::INFINITY;
        for scale in [1.0, 0.1, 0.01] {
            let t = SphericalTriangle::new(
                gp(10.0 * scale, 0.0),
                gp(50.0 * scale, 10.0 * scale),
                gp(20.0 * scale, 40.0 * scale),
            )
            .unwrap();
            let r = prop27_ratio(&t).unwrap();
            assert!(r > 1.0, "ratio {r} not > 1 at scale {scale}");
            assert!(r < last, "ratio {r} did not shrink at scale {scale}");
            last = r;
        }
        assert!(last - 1.0 < 1e-4);
    }

    #[test]
    fn degenerate_triangles_are_rejected() {
        let p = gp(10.0, 10.0);
        assert!(matches!(
            SphericalTriangle::new(p, p, gp(20.0, 20.0)),
            Err(Error::DegenerateTriangle(_))
        ));
        assert!(matches!(
            SphericalTriangle::new(gp(10.0, 20.0), gp(-10.0, -160.0), gp(0.0, 0.0)),
            Err(Error::DegenerateTriangle(_))
        ));
    }

    #[test]
    fn longitude_normalization() {
        assert_relative_eq!(
            GeoPoint::from_degrees(10.0, 200.0).unwrap().lon_degrees(),
            -160.0,
            epsilon = 1e-12
        );
        assert_relative_eq!(
            GeoPoint::from_degrees(0.0, -180.0).unwrap().lon_degrees(),
            180.0,
            epsilon = 1e-12
        );
        assert_relative_eq!(
            GeoPoint::from_degrees(0.0, 540.0).unwrap().lon_degrees(),
            180.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn latitude_bounds_checked() {
        assert!(matches!(
            GeoPoint::from_degrees(95.0, 0.0),
            Err(Error::InvalidLatitude(_))
        ));
        assert!(GeoPoint::from_degrees(90.0, 0.0).is_ok());
        assert!(matches!(
            GeoPoint::new(f64::NAN, 0.0),
            Err(Error::NonFiniteCoordinate)
        ));
    }
}
