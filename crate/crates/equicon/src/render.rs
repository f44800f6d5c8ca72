//! Deterministic SVG rendering: graticule, projected polylines, and an
//! optional Tissot ellipse overlay.
//!
//! Conic parallels are emitted as true circular arcs about the apex image
//! (full circles for the azimuthal member over the whole longitude range),
//! meridians as straight segments, coastlines as polyline paths split at
//! out-of-domain vertices and at the longitude cut. The canvas transform is
//! a uniform scale-to-fit with a 5% margin and a flipped y-axis; every
//! coordinate is written with fixed 6-decimal formatting so identical
//! inputs give byte-identical documents.

use crate::distortion::tissot;
use crate::error::{Error, Result};
use crate::io::Polyline;
use crate::projection::{forward, Branch, ConicSpec, PlanePoint};
use crate::sphere::GeoPoint;
use std::f64::consts::PI;
use std::fmt::Write as _;

/// Graticule and canvas settings.
#[derive(Debug, Clone, PartialEq)]
pub struct RenderConfig {
    /// Graticule spacing in degrees; must divide 360 evenly.
    pub graticule_spacing_deg: f64,
    /// Canvas size in abstract SVG units.
    pub width: f64,
    pub height: f64,
    /// Stroke styling identifiers, written through to the stroke attributes.
    pub graticule_stroke: String,
    pub map_stroke: String,
    pub tissot_stroke: String,
}

impl Default for RenderConfig {
    fn default() -> Self {
        Self {
            graticule_spacing_deg: 15.0,
            width: 960.0,
            height: 720.0,
            graticule_stroke: "#9aa7c7".to_string(),
            map_stroke: "#1c1c1c".to_string(),
            tissot_stroke: "#c0392b".to_string(),
        }
    }
}

/// Optional Tissot overlay: a lat/lon lattice spacing and a display
/// multiplier for the (unit-sized) indicatrix radii.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TissotGrid {
    /// Lattice spacing in degrees; must divide 360 evenly.
    pub spacing_deg: f64,
    /// Multiplier applied to the ellipse semi-axes, in sphere radii.
    pub display_scale: f64,
}

fn check_spacing(spacing_deg: f64, what: &str) -> Result<()> {
    if !(spacing_deg > 0.0) || !spacing_deg.is_finite() {
        return Err(Error::InvalidRenderConfig(format!(
            "{what} spacing must be positive, got {spacing_deg}"
        )));
    }
    let ratio = 360.0 / spacing_deg;
    if (ratio - ratio.round()).abs() > 1e-9 {
        return Err(Error::InvalidRenderConfig(format!(
            "{what} spacing {spacing_deg} does not divide 360 evenly"
        )));
    }
    Ok(())
}

fn validate_config(cfg: &RenderConfig, tissot_grid: Option<&TissotGrid>) -> Result<()> {
    check_spacing(cfg.graticule_spacing_deg, "graticule")?;
    if !(cfg.width > 0.0) || !(cfg.height > 0.0) {
        return Err(Error::InvalidRenderConfig(
            "canvas size must be positive".to_string(),
        ));
    }
    if let Some(t) = tissot_grid {
        check_spacing(t.spacing_deg, "tissot")?;
        if !(t.display_scale > 0.0) {
            return Err(Error::InvalidRenderConfig(format!(
                "tissot display scale must be positive, got {}",
                t.display_scale
            )));
        }
    }
    Ok(())
}

// World-space elements collected before the canvas transform is known.
enum Element {
    /// Circular arc about the origin: radius and plane angle range
    /// (atan2(y, x) convention), counter-clockwise from a0 to a1.
    Arc { rho: f64, a0: f64, a1: f64 },
    Circle { rho: f64 },
    Path { points: Vec<PlanePoint> },
    Ellipse {
        center: PlanePoint,
        rx: f64,
        ry: f64,
        /// Major-axis angle in world coordinates, radians.
        angle: f64,
    },
}

struct Canvas {
    scale: f64,
    cx: f64,
    cy: f64,
    width: f64,
    height: f64,
}

impl Canvas {
    fn fit(bbox: (f64, f64, f64, f64), width: f64, height: f64) -> Self {
        let (min_x, min_y, max_x, max_y) = bbox;
        let bw = (max_x - min_x).max(1e-12);
        let bh = (max_y - min_y).max(1e-12);
        // 5% margin on every side.
        let scale = (0.9 * width / bw).min(0.9 * height / bh);
        Self {
            scale,
            cx: 0.5 * (min_x + max_x),
            cy: 0.5 * (min_y + max_y),
            width,
            height,
        }
    }

    fn to_screen(&self, p: PlanePoint) -> (f64, f64) {
        (
            (p.x - self.cx) * self.scale + 0.5 * self.width,
            (self.cy - p.y) * self.scale + 0.5 * self.height,
        )
    }
}

fn fmt6(v: f64) -> String {
    format!("{v:.6}")
}

// Collinearity of three plane points, as twice the triangle area.
fn collinear(a: PlanePoint, b: PlanePoint, c: PlanePoint, tol: f64) -> bool {
    ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y)).abs() <= tol
}

/// Render the map to an SVG document string.
///
/// Elements that cannot be projected are skipped and counted in the header
/// comment rather than aborting the document.
pub fn render_svg(
    spec: &ConicSpec,
    lines: &[Polyline],
    cfg: &RenderConfig,
    tissot_grid: Option<&TissotGrid>,
) -> Result<String> {
    validate_config(cfg, tissot_grid)?;
    let spacing = cfg.graticule_spacing_deg;
    let conic_like = spec.branch() != Branch::Cylindrical;
    let mut skipped: u64 = 0;

    let mut graticule: Vec<Element> = Vec::new();
    let mut sample_points: Vec<PlanePoint> = Vec::new();

    // Parallels at multiples of the spacing, poles excluded.
    let lat_steps = (180.0 / spacing).round() as i64;
    let lon_steps = (360.0 / spacing).round() as i64;
    for i in 1..lat_steps {
        let lat_deg = -90.0 + i as f64 * spacing;
        let phi = lat_deg.to_radians();
        match build_parallel(spec, phi, conic_like) {
            Some(el) => {
                sample_parallel(&el, &mut sample_points);
                graticule.push(el);
            }
            None => skipped += 1,
        }
    }
    // Meridians from pole to pole; the +180 meridian closes the sheet.
    for j in 0..=lon_steps {
        let lon_deg = -180.0 + j as f64 * spacing;
        if lon_deg == -180.0 {
            continue;
        }
        let lon = lon_deg.to_radians();
        match build_meridian(spec, lon) {
            Some(el) => {
                if let Element::Path { points } = &el {
                    sample_points.extend_from_slice(points);
                }
                graticule.push(el);
            }
            None => skipped += 1,
        }
    }

    // Projected polylines, split at out-of-domain vertices and at the cut.
    let mut map_paths: Vec<(String, Vec<Vec<PlanePoint>>)> = Vec::new();
    for line in lines {
        let mut subpaths: Vec<Vec<PlanePoint>> = Vec::new();
        let mut current: Vec<PlanePoint> = Vec::new();
        let mut prev_lon: Option<f64> = None;
        for p in &line.points {
            let wraps = prev_lon.is_some_and(|pl| (p.lon() - pl).abs() > PI);
            match forward(spec, *p) {
                Ok(q) => {
                    if wraps && !current.is_empty() {
                        if current.len() >= 2 {
                            subpaths.push(std::mem::take(&mut current));
                        } else {
                            current.clear();
                        }
                    }
                    current.push(q);
                    prev_lon = Some(p.lon());
                }
                Err(_) => {
                    skipped += 1;
                    if current.len() >= 2 {
                        subpaths.push(std::mem::take(&mut current));
                    } else {
                        current.clear();
                    }
                    prev_lon = None;
                }
            }
        }
        if current.len() >= 2 {
            subpaths.push(current);
        }
        for sub in &subpaths {
            sample_points.extend_from_slice(sub);
        }
        if !subpaths.is_empty() {
            map_paths.push((line.id.clone(), subpaths));
        }
    }

    // Tissot lattice.
    let mut ellipses: Vec<Element> = Vec::new();
    if let Some(grid) = tissot_grid {
        let t_lat_steps = (180.0 / grid.spacing_deg).round() as i64;
        let t_lon_steps = (360.0 / grid.spacing_deg).round() as i64;
        for i in 1..t_lat_steps {
            let lat = (-90.0 + i as f64 * grid.spacing_deg).to_radians();
            for j in 0..t_lon_steps {
                let lon = (-180.0 + (j + 1) as f64 * grid.spacing_deg).to_radians();
                let p = match GeoPoint::new(lat, lon) {
                    Ok(p) => p,
                    Err(_) => {
                        skipped += 1;
                        continue;
                    }
                };
                match tissot(spec, p) {
                    Ok(e) => {
                        let rx = e.semi_major * grid.display_scale;
                        let ry = e.semi_minor * grid.display_scale;
                        sample_points.push(PlanePoint::new(e.center.x - rx, e.center.y - rx));
                        sample_points.push(PlanePoint::new(e.center.x + rx, e.center.y + rx));
                        ellipses.push(Element::Ellipse {
                            center: e.center,
                            rx,
                            ry,
                            angle: e.orientation,
                        });
                    }
                    Err(_) => skipped += 1,
                }
            }
        }
    }

    if sample_points.is_empty() {
        return Err(Error::InvalidRenderConfig(
            "nothing to draw: every element fell outside the projection domain".to_string(),
        ));
    }
    let bbox = sample_points.iter().fold(
        (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY),
        |(ax, ay, bx, by), p| (ax.min(p.x), ay.min(p.y), bx.max(p.x), by.max(p.y)),
    );
    let canvas = Canvas::fit(bbox, cfg.width, cfg.height);

    let mut svg = String::new();
    writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        svg,
        "<!-- canvas: uniform scale-to-fit, 5% margin, y-axis flipped to screen convention -->"
    )
    .unwrap();
    writeln!(
        svg,
        "<!-- transform: scale={} center=({},{}) -->",
        fmt6(canvas.scale),
        fmt6(canvas.cx),
        fmt6(canvas.cy)
    )
    .unwrap();
    writeln!(svg, "<!-- skipped elements: {skipped} -->").unwrap();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = fmt6(cfg.width),
        h = fmt6(cfg.height)
    )
    .unwrap();

    writeln!(
        svg,
        r#"<g id="graticule" fill="none" stroke="{}" stroke-width="0.6">"#,
        cfg.graticule_stroke
    )
    .unwrap();
    for el in &graticule {
        emit_element(&mut svg, el, &canvas);
    }
    writeln!(svg, "</g>").unwrap();

    writeln!(
        svg,
        r#"<g id="map" fill="none" stroke="{}" stroke-width="1">"#,
        cfg.map_stroke
    )
    .unwrap();
    for (id, subpaths) in &map_paths {
        let mut d = String::new();
        for sub in subpaths {
            for (i, p) in sub.iter().enumerate() {
                let (x, y) = canvas.to_screen(*p);
                let op = if i == 0 { "M" } else { "L" };
                let _ = write!(d, "{op}{} {} ", fmt6(x), fmt6(y));
            }
        }
        writeln!(svg, r#"<path id="{}" d="{}"/>"#, id, d.trim_end()).unwrap();
    }
    writeln!(svg, "</g>").unwrap();

    if !ellipses.is_empty() {
        writeln!(
            svg,
            r#"<g id="tissot" fill="none" stroke="{}" stroke-width="0.8">"#,
            cfg.tissot_stroke
        )
        .unwrap();
        for el in &ellipses {
            emit_element(&mut svg, el, &canvas);
        }
        writeln!(svg, "</g>").unwrap();
    }

    writeln!(svg, "</svg>").unwrap();
    Ok(svg)
}

// A parallel as a world-space element, verified concentric before emission.
fn build_parallel(spec: &ConicSpec, phi: f64, conic_like: bool) -> Option<Element> {
    if conic_like {
        let c = spec.apex_offset().expect("conic branch");
        let n = spec.cone_constant().expect("conic branch");
        let rho = c - phi;
        if rho <= 0.0 {
            return None;
        }
        // Concentricity check on three sample longitudes.
        for lon in [-2.0, 0.3, 1.7] {
            let q = forward(spec, GeoPoint::new(phi, lon).ok()?).ok()?;
            if (q.radius() - rho).abs() > 1e-9 {
                return None;
            }
        }
        let theta_span = n * 2.0 * PI;
        if (theta_span - 2.0 * PI).abs() < 1e-12 {
            return Some(Element::Circle { rho });
        }
        // theta = n*lon measured from the negative y-axis; convert to the
        // atan2 angle convention about the origin.
        let a0 = -0.5 * PI - n * PI;
        let a1 = -0.5 * PI + n * PI;
        Some(Element::Arc { rho, a0, a1 })
    } else {
        let west = forward(spec, GeoPoint::new(phi, -PI).ok()?).ok()?;
        let east = forward(spec, GeoPoint::new(phi, PI).ok()?).ok()?;
        let mid = forward(spec, GeoPoint::new(phi, 0.0).ok()?).ok()?;
        if !collinear(west, mid, east, 1e-9) {
            return None;
        }
        Some(Element::Path {
            points: vec![west, east],
        })
    }
}

// A meridian as a straight segment, verified collinear (and through the
// apex for conic members) before emission.
fn build_meridian(spec: &ConicSpec, lon: f64) -> Option<Element> {
    let south = GeoPoint::new(-0.5 * PI, lon).ok()?;
    let north = GeoPoint::new(0.5 * PI, lon).ok()?;
    let mid = GeoPoint::new(0.1, lon).ok()?;
    let a = forward(spec, south).ok()?;
    let b = forward(spec, mid).ok()?;
    let c = forward(spec, north).ok()?;
    if !collinear(a, b, c, 1e-9) {
        return None;
    }
    if spec.branch() != Branch::Cylindrical && !collinear(a, c, PlanePoint::new(0.0, 0.0), 1e-9) {
        return None;
    }
    Some(Element::Path { points: vec![a, c] })
}

fn sample_parallel(el: &Element, out: &mut Vec<PlanePoint>) {
    match el {
        Element::Circle { rho } => {
            out.push(PlanePoint::new(-rho, -rho));
            out.push(PlanePoint::new(*rho, *rho));
        }
        Element::Arc { rho, a0, a1 } => {
            // Endpoints plus axis crossings inside the angular range bound
            // the arc tightly.
            out.push(PlanePoint::new(rho * a0.cos(), rho * a0.sin()));
            out.push(PlanePoint::new(rho * a1.cos(), rho * a1.sin()));
            let mut axis = (a0 / (0.5 * PI)).ceil() * 0.5 * PI;
            while axis <= *a1 {
                out.push(PlanePoint::new(rho * axis.cos(), rho * axis.sin()));
                axis += 0.5 * PI;
            }
        }
        Element::Path { points } => out.extend_from_slice(points),
        Element::Ellipse { .. } => {}
    }
}

fn emit_element(svg: &mut String, el: &Element, canvas: &Canvas) {
    match el {
        Element::Circle { rho } => {
            let (cx, cy) = canvas.to_screen(PlanePoint::new(0.0, 0.0));
            writeln!(
                svg,
                r#"<circle cx="{}" cy="{}" r="{}"/>"#,
                fmt6(cx),
                fmt6(cy),
                fmt6(rho * canvas.scale)
            )
            .unwrap();
        }
        Element::Arc { rho, a0, a1 } => {
            // Split into sub-arcs of at most a quarter turn. World angles
            // increase counter-clockwise; the y-flip makes the screen sweep
            // clockwise, which is SVG sweep-flag 0.
            let segments = ((a1 - a0) / (0.5 * PI)).ceil().max(1.0) as usize;
            let r = rho * canvas.scale;
            let mut d = String::new();
            for i in 0..=segments {
                let a = a0 + (a1 - a0) * i as f64 / segments as f64;
                let p = canvas.to_screen(PlanePoint::new(rho * a.cos(), rho * a.sin()));
                if i == 0 {
                    let _ = write!(d, "M{} {} ", fmt6(p.0), fmt6(p.1));
                } else {
                    let _ = write!(d, "A{r} {r} 0 0 0 {x} {y} ", r = fmt6(r), x = fmt6(p.0), y = fmt6(p.1));
                }
            }
            writeln!(svg, r#"<path d="{}"/>"#, d.trim_end()).unwrap();
        }
        Element::Path { points } => {
            let mut d = String::new();
            for (i, p) in points.iter().enumerate() {
                let (x, y) = canvas.to_screen(*p);
                let op = if i == 0 { "M" } else { "L" };
                let _ = write!(d, "{op}{} {} ", fmt6(x), fmt6(y));
            }
            writeln!(svg, r#"<path d="{}"/>"#, d.trim_end()).unwrap();
        }
        Element::Ellipse { center, rx, ry, angle } => {
            let (cx, cy) = canvas.to_screen(*center);
            // The y-flip negates angles.
            let angle_deg = -angle.to_degrees();
            writeln!(
                svg,
                r#"<ellipse cx="{cx}" cy="{cy}" rx="{rx}" ry="{ry}" transform="rotate({rot} {cx} {cy})"/>"#,
                cx = fmt6(cx),
                cy = fmt6(cy),
                rx = fmt6(rx * canvas.scale),
                ry = fmt6(ry * canvas.scale),
                rot = fmt6(angle_deg)
            )
            .unwrap();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projection::{build_azimuthal, build_conic_two_parallels, build_cylindrical};

    #[test]
    fn azimuthal_parallels_are_concentric_circles() {
        let cfg = RenderConfig {
            graticule_spacing_deg: 30.0,
            ..RenderConfig::default()
        };
        let svg = render_svg(&build_azimuthal(), &[], &cfg, None).unwrap();
        let circles: Vec<&str> = svg.lines().filter(|l| l.starts_with("<circle")).collect();
        // 5 parallels between the poles at 30-degree spacing.
        assert_eq!(circles.len(), 5);
        // All share the canvas centre.
        let first_center: Vec<&str> = circles[0].split('"').collect();
        for c in &circles {
            let fields: Vec<&str> = c.split('"').collect();
            assert_eq!(fields[1], first_center[1]);
            assert_eq!(fields[3], first_center[3]);
        }
    }

    #[test]
    fn conic_parallels_are_arcs_not_circles() {
        let spec = build_conic_two_parallels(50f64.to_radians(), 65f64.to_radians()).unwrap();
        let svg = render_svg(&spec, &[], &RenderConfig::default(), None).unwrap();
        assert!(!svg.contains("<circle"));
        assert!(svg.contains("A"));
    }

    #[test]
    fn byte_identical_output() {
        let spec = build_conic_two_parallels(45f64.to_radians(), 66f64.to_radians()).unwrap();
        let grid = TissotGrid {
            spacing_deg: 30.0,
            display_scale: 0.05,
        };
        let a = render_svg(&spec, &[], &RenderConfig::default(), Some(&grid)).unwrap();
        let b = render_svg(&spec, &[], &RenderConfig::default(), Some(&grid)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn out_of_domain_vertices_split_polylines() {
        // A polyline crossing the longitude cut splits rather than drawing
        // across the sheet.
        let line = Polyline::new(
            "cut",
            vec![
                GeoPoint::from_degrees(10.0, 170.0).unwrap(),
                GeoPoint::from_degrees(10.0, 179.0).unwrap(),
                GeoPoint::from_degrees(10.0, -179.0).unwrap(),
                GeoPoint::from_degrees(10.0, -170.0).unwrap(),
            ],
        )
        .unwrap();
        let svg = render_svg(
            &build_cylindrical(0.0).unwrap(),
            &[line],
            &RenderConfig::default(),
            None,
        )
        .unwrap();
        let map_path = svg
            .lines()
            .find(|l| l.contains(r#"id="cut""#))
            .expect("map path present");
        let m_count = map_path.matches('M').count();
        assert_eq!(m_count, 2, "expected a split path, got {map_path}");
    }

    #[test]
    fn spacing_must_divide_360() {
        let cfg = RenderConfig {
            graticule_spacing_deg: 25.0,
            ..RenderConfig::default()
        };
        assert!(matches!(
            render_svg(&build_azimuthal(), &[], &cfg, None),
            Err(Error::InvalidRenderConfig(_))
        ));
    }

    #[test]
    fn skipped_elements_are_counted_in_header() {
        let svg = render_svg(&build_azimuthal(), &[], &RenderConfig::default(), None).unwrap();
        assert!(svg.contains("<!-- skipped elements: 0 -->"));
    }
}
