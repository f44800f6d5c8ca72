//! Selection of standard parallels minimizing the metrical distortion v
//! over a given annulus.
//!
//! The search is deterministic: a coarse exhaustive grid over the parameter
//! simplex picks an incumbent, coordinate-wise golden-section passes refine
//! it, and a structure-aware equioscillation polish finishes the two-
//! parameter case. At a two-parallel optimum the parallel scale balances
//! k(phi_south) = k(phi_north) = 1/k_min; the reported certificate is the
//! largest pairwise mismatch of those quantities.

use crate::distortion::{sigma_at, sigma_extrema_fast, SphericalAnnulus};
use crate::error::{Error, Result};
use crate::projection::{
    build_conic_two_parallels, build_conic_one_parallel, build_cylindrical, apex_colatitude,
    scale_factors_meridian_parallel, ConicSpec,
};
use std::f64::consts::FRAC_PI_2;

/// Default coarse-grid step, radians (0.25 degrees). Narrow annuli use a
/// proportionally finer step.
const COARSE_STEP: f64 = 0.25 * std::f64::consts::PI / 180.0;

/// Golden-section bracket tolerance, radians.
const GOLDEN_TOL: f64 = 1e-12;

/// Outer loop stops when neither parameter moved by more than this.
const PASS_TOL: f64 = 1e-10;

/// Annuli narrower than two default analysis grid steps are rejected.
const MIN_SPAN: f64 = 0.02 * std::f64::consts::PI / 180.0;

/// One evaluated parameter set with its objective value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchSample {
    pub p1: f64,
    /// Second parameter; absent for one-parameter families.
    pub p2: Option<f64>,
    pub v: f64,
}

/// Outcome of a parameter search.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub best_spec: ConicSpec,
    /// Minimized metrical distortion.
    pub v_star: f64,
    /// Equioscillation residual at the optimum.
    pub certificate: f64,
    /// Number of objective evaluations spent.
    pub evaluations: u64,
    pub search_trace: Vec<SearchSample>,
}

struct Objective<'a> {
    region: &'a SphericalAnnulus,
    evaluations: u64,
    trace: Vec<SearchSample>,
}

impl<'a> Objective<'a> {
    fn new(region: &'a SphericalAnnulus) -> Self {
        Self {
            region,
            evaluations: 0,
            trace: Vec::new(),
        }
    }

    fn eval(&mut self, spec: Result<ConicSpec>, p1: f64, p2: Option<f64>) -> f64 {
        self.evaluations += 1;
        let v = spec
            .and_then(|s| sigma_extrema_fast(&s, self.region))
            .map(|e| (e.sup / e.inf).ln())
            .unwrap_or(f64::INFINITY);
        self.trace.push(SearchSample { p1, p2, v });
        v
    }

    fn two(&mut self, p1: f64, p2: f64) -> f64 {
        if p1 >= p2 {
            return f64::INFINITY;
        }
        self.eval(build_conic_two_parallels(p1, p2), p1, Some(p2))
    }

    fn one(&mut self, p0: f64) -> f64 {
        self.eval(build_conic_one_parallel(p0), p0, None)
    }

    fn cyl(&mut self, ps: f64) -> f64 {
        self.eval(build_cylindrical(ps), ps, None)
    }
}

fn validate_region(region: &SphericalAnnulus) -> Result<f64> {
    let span = region.phi_north() - region.phi_south();
    if span < MIN_SPAN {
        return Err(Error::InvalidAnnulus(format!(
            "annulus span {span} rad is narrower than two grid steps"
        )));
    }
    if region.phi_south() <= -FRAC_PI_2 + 1e-9 || region.phi_north() >= FRAC_PI_2 - 1e-9 {
        return Err(Error::InvalidAnnulus(
            "optimization region must lie strictly between the poles".to_string(),
        ));
    }
    Ok(span)
}

// Golden-section minimum of f on [a, b]; assumes f is unimodal there.
// Deterministic: fixed recurrence, no restarts.
fn golden_min(f: &mut impl FnMut(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    const INV_PHI2: f64 = 0.381_966_011_250_105_1;
    let mut h = b - a;
    let mut c = a + INV_PHI2 * h;
    let mut d = a + INV_PHI * h;
    let mut fc = f(c);
    let mut fd = f(d);
    while h > GOLDEN_TOL {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            h = b - a;
            c = a + INV_PHI2 * h;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            h = b - a;
            d = a + INV_PHI * h;
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

fn coarse_step_for(span: f64) -> f64 {
    COARSE_STEP.min(span / 16.0)
}

// k(phi_south), k(phi_north) and the interior minimum of k for a
// two-parallel cone; the parallels are assumed inside the annulus so k >= 1
// holds at both edges.
fn edge_scales(region: &SphericalAnnulus, p1: f64, p2: f64) -> Result<(f64, f64, f64)> {
    let spec = build_conic_two_parallels(p1, p2)?;
    let k_at = |phi: f64| scale_factors_meridian_parallel(&spec, phi).map(|(_, k)| k);
    let k_s = k_at(region.phi_south())?;
    let k_n = k_at(region.phi_north())?;
    // The interior minimum of k sits where (C - phi) sin phi = cos phi,
    // between the two standard parallels.
    let c = spec.apex_offset().expect("conic branch");
    let g = |phi: f64| (c - phi) * phi.sin() - phi.cos();
    let (mut a, mut b) = (p1, p2);
    for _ in 0..200 {
        if b - a < 1e-16 {
            break;
        }
        let m = 0.5 * (a + b);
        if g(m) < 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    let k_min = k_at(0.5 * (a + b))?;
    Ok((k_s, k_n, k_min))
}

fn two_parallel_certificate(region: &SphericalAnnulus, p1: f64, p2: f64) -> Result<f64> {
    let (k_s, k_n, k_min) = edge_scales(region, p1, p2)?;
    let inv = 1.0 / k_min;
    Ok((k_s - k_n)
        .abs()
        .max((k_s - inv).abs())
        .max((k_n - inv).abs()))
}

// Equioscillation polish: coordinate descent stalls on the kinked
// max-objective well above certificate accuracy, so the final step solves
// the balance equations directly. Inner bisection finds phi1 with
// k(phi_south) = k(phi_north) for a fixed phi2; the outer level drives
// k(phi_south) * k_min to 1.
fn equioscillation_polish(region: &SphericalAnnulus, evals: &mut u64) -> Result<(f64, f64)> {
    let (lo, hi) = (region.phi_south(), region.phi_north());
    let pad = 1e-13;

    let inner = |p2: f64, evals: &mut u64| -> Result<f64> {
        let (mut a, mut b) = (lo + pad, p2 - pad);
        let balance = |p1: f64, evals: &mut u64| -> Result<f64> {
            *evals += 1;
            let (k_s, k_n, _) = edge_scales(region, p1, p2)?;
            Ok(k_s - k_n)
        };
        if balance(a, evals)? > 0.0 {
            return Ok(a);
        }
        if balance(b, evals)? < 0.0 {
            return Ok(b);
        }
        for _ in 0..200 {
            if b - a < 1e-16 {
                break;
            }
            let m = 0.5 * (a + b);
            if balance(m, evals)? < 0.0 {
                a = m;
            } else {
                b = m;
            }
        }
        Ok(0.5 * (a + b))
    };

    let (mut a, mut b) = (lo + 2.0 * pad, hi - pad);
    for _ in 0..200 {
        if b - a < 1e-16 {
            break;
        }
        let m = 0.5 * (a + b);
        let p1 = inner(m, evals)?;
        let (k_s, _, k_min) = edge_scales(region, p1, m)?;
        *evals += 1;
        // Wide parallels overshoot: k_s k_min < 1 means phi2 went too far.
        if k_s * k_min - 1.0 > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    let p2 = 0.5 * (a + b);
    let p1 = inner(p2, evals)?;
    Ok((p1, p2))
}

/// Optimal two-parallel cone on the annulus.
pub fn optimize_two_parallels(region: &SphericalAnnulus) -> Result<OptimizationResult> {
    let span = validate_region(region)?;
    let step = coarse_step_for(span);
    let (lo, hi) = (region.phi_south(), region.phi_north());
    let cells = (span / step).floor() as usize;
    let mut obj = Objective::new(region);

    // Coarse exhaustive grid over the simplex phi1 < phi2; ties keep the
    // smallest (phi1, phi2) through strict improvement in scan order.
    let mut best = (f64::INFINITY, lo, hi);
    for i in 0..=cells {
        let p1 = (lo + i as f64 * step).min(hi);
        for j in (i + 1)..=cells {
            let p2 = (lo + j as f64 * step).min(hi);
            let v = obj.two(p1, p2);
            if v < best.0 {
                best = (v, p1, p2);
            }
        }
    }
    let (_, mut p1, mut p2) = best;

    // Coordinate-wise golden-section passes.
    for _ in 0..50 {
        let (old1, old2) = (p1, p2);
        p1 = golden_min(&mut |x| obj.two(x, p2), lo, p2 - 1e-12);
        p2 = golden_min(&mut |x| obj.two(p1, x), p1 + 1e-12, hi);
        if (p1 - old1).abs().max((p2 - old2).abs()) < PASS_TOL {
            break;
        }
    }
    let v_golden = obj.two(p1, p2);

    // Final polish on the balance equations.
    if let Ok((q1, q2)) = equioscillation_polish(region, &mut obj.evaluations) {
        let v_polished = obj.two(q1, q2);
        if v_polished <= v_golden {
            p1 = q1;
            p2 = q2;
        }
    }

    let v_star = obj.two(p1, p2);
    let certificate = two_parallel_certificate(region, p1, p2)?;
    Ok(OptimizationResult {
        best_spec: build_conic_two_parallels(p1, p2)?,
        v_star,
        certificate,
        evaluations: obj.evaluations,
        search_trace: obj.trace,
    })
}

/// Optimal tangent cone on the annulus.
pub fn optimize_one_parallel(region: &SphericalAnnulus) -> Result<OptimizationResult> {
    let span = validate_region(region)?;
    let step = coarse_step_for(span);
    let (lo, hi) = (region.phi_south(), region.phi_north());
    let pad = 1e-12;
    let mut obj = Objective::new(region);

    let cells = (span / step).floor() as usize;
    let mut best = (f64::INFINITY, lo + pad);
    for i in 0..=cells {
        let p = (lo + pad + i as f64 * step).min(hi - pad);
        let v = obj.one(p);
        if v < best.0 {
            best = (v, p);
        }
    }
    let incumbent = best.1;
    let mut p0 = golden_min(
        &mut |x| obj.one(x),
        (incumbent - step).max(lo + pad),
        (incumbent + step).min(hi - pad),
    );

    // The balance k(phi_south) = k(phi_north) is monotone in phi0; finish
    // with bisection so the certificate reaches machine precision.
    let balance = |p: f64| -> Result<f64> {
        let spec = build_conic_one_parallel(p)?;
        let k_s = scale_factors_meridian_parallel(&spec, lo)?.1;
        let k_n = scale_factors_meridian_parallel(&spec, hi)?.1;
        Ok(k_s - k_n)
    };
    let (mut a, mut b) = ((p0 - step).max(lo + pad), (p0 + step).min(hi - pad));
    if balance(a)? < 0.0 && balance(b)? > 0.0 {
        for _ in 0..200 {
            if b - a < 1e-16 {
                break;
            }
            let m = 0.5 * (a + b);
            obj.evaluations += 1;
            if balance(m)? < 0.0 {
                a = m;
            } else {
                b = m;
            }
        }
        let mid = 0.5 * (a + b);
        if obj.one(mid) <= obj.one(p0) {
            p0 = mid;
        }
    }

    let v_star = obj.one(p0);
    let spec = build_conic_one_parallel(p0)?;
    let certificate = (sigma_at(&spec, lo)? - sigma_at(&spec, hi)?).abs();
    Ok(OptimizationResult {
        best_spec: spec,
        v_star,
        certificate,
        evaluations: obj.evaluations,
        search_trace: obj.trace,
    })
}

/// Optimal equidistant cylindrical map on the annulus.
pub fn optimize_cylindrical(region: &SphericalAnnulus) -> Result<OptimizationResult> {
    let span = validate_region(region)?;
    let step = coarse_step_for(span);
    let (lo, hi) = (region.phi_south(), region.phi_north());
    let mut obj = Objective::new(region);

    let cells = (span / step).floor() as usize;
    let mut best = (f64::INFINITY, lo);
    for i in 0..=cells {
        let p = (lo + i as f64 * step).min(hi);
        let v = obj.cyl(p);
        if v < best.0 {
            best = (v, p);
        }
    }
    let incumbent = best.1;
    let ps = golden_min(
        &mut |x| obj.cyl(x),
        (incumbent - step).max(lo),
        (incumbent + step).min(hi),
    );

    let v_star = obj.cyl(ps);
    let spec = build_cylindrical(ps)?;
    // Certificate: gap between the two largest local maxima of sigma (the
    // annulus edges, plus the equator when the annulus straddles it). At a
    // balanced optimum at least two of them coincide.
    let mut tops = vec![sigma_at(&spec, lo)?, sigma_at(&spec, hi)?];
    if lo < 0.0 && 0.0 < hi {
        tops.push(sigma_at(&spec, 0.0)?);
    }
    tops.sort_by(|a, b| b.partial_cmp(a).expect("finite sigma"));
    let certificate = tops[0] - tops[1];
    Ok(OptimizationResult {
        best_spec: spec,
        v_star,
        certificate,
        evaluations: obj.evaluations,
        search_trace: obj.trace,
    })
}

/// Find a two-parallel cone whose apex colatitude hits the target, with
/// standard parallels symmetric about the band centre and spacing as the
/// free parameter.
pub fn solve_apex_offset(
    target_apex_colat: f64,
    region: &SphericalAnnulus,
) -> Result<ConicSpec> {
    if !(target_apex_colat > 0.0 && target_apex_colat < std::f64::consts::FRAC_PI_4) {
        return Err(Error::InvalidApexTarget {
            target_deg: target_apex_colat.to_degrees(),
        });
    }
    validate_region(region)?;
    let (lo, hi) = (region.phi_south(), region.phi_north());
    let centre = 0.5 * (lo + hi);
    let span = hi - lo;

    let apex_for = |s: f64| -> Result<f64> {
        let spec = build_conic_two_parallels(centre - 0.5 * s, centre + 0.5 * s)?;
        apex_colatitude(&spec)
    };

    // Attained range over the spacing parameter, sampled densely enough to
    // be honest in the error message.
    let samples: Vec<f64> = (0..=64)
        .map(|i| {
            let s = 1e-9 + (span - 1e-9) * i as f64 / 64.0;
            apex_for(s)
        })
        .collect::<Result<_>>()?;
    let attained_lo = samples.iter().cloned().fold(f64::INFINITY, f64::min);
    let attained_hi = samples.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if target_apex_colat < attained_lo || target_apex_colat > attained_hi {
        return Err(Error::ApexTargetUnreachable {
            target_deg: target_apex_colat.to_degrees(),
            lo_deg: attained_lo.to_degrees(),
            hi_deg: attained_hi.to_degrees(),
        });
    }

    // The apex offset shrinks as the parallels spread; bisection on spacing.
    let (mut a, mut b) = (1e-9, span);
    let fa = apex_for(a)? - target_apex_colat;
    for _ in 0..200 {
        if b - a < 1e-15 {
            break;
        }
        let m = 0.5 * (a + b);
        let fm = apex_for(m)? - target_apex_colat;
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    let s = 0.5 * (a + b);
    let spec = build_conic_two_parallels(centre - 0.5 * s, centre + 0.5 * s)?;
    let residual = (apex_colatitude(&spec)? - target_apex_colat).abs();
    if residual > 0.01f64.to_radians() {
        return Err(Error::ApexTargetUnreachable {
            target_deg: target_apex_colat.to_degrees(),
            lo_deg: attained_lo.to_degrees(),
            hi_deg: attained_hi.to_degrees(),
        });
    }
    Ok(spec)
}
