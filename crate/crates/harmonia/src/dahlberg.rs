//! Carleson-measure and strong-(p,p) diagnostics on lattice domains.
//!
//! For a nonnegative measure `mu` on the interior cells, the Carleson norm
//! `M` is the worst ratio `mu(C(P,r) ∩ D) / omega_O(ball(P,r))` over
//! boundary centers and dyadic radii, and the strong-(p,p) norm `K` is the
//! worst ratio of `p`-th moments of the harmonic extension against the
//! boundary data, over a declared test family (single atoms, surface-ball
//! indicators, and seeded random data). The two are linked through the
//! minimum boundary-ball mass `delta`, and the quantitative chain between
//! them is checked link by link at every witness.

use std::collections::HashMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dirichlet::{evaluate_measure, BoundaryData, HarmonicKernel};
use crate::error::{Error, Result};
use crate::lattice::{estimate_delta, LatticeDomain};
use crate::num::Real;

/// A nonnegative measure on interior cells.
#[derive(Debug, Clone)]
pub struct TestMeasure<T> {
    pub weights: HashMap<String, T>,
}

impl<T: Real> TestMeasure<T> {
    pub fn new(weights: HashMap<String, T>) -> Result<Self> {
        for (id, &w) in &weights {
            if w < T::zero() || !w.is_finite() {
                return Err(Error::input(format!("negative or non-finite mass at '{id}'")));
            }
        }
        Ok(Self { weights })
    }

    /// Cell-area measure: every interior cell carries `h^2`.
    pub fn area(dom: &LatticeDomain<T>) -> Self {
        let w = T::of(dom.h * dom.h);
        Self {
            weights: dom.interior_ids().iter().map(|id| (id.to_string(), w)).collect(),
        }
    }

    /// Unit point mass at one interior cell.
    pub fn point_mass(id: &str) -> Self {
        let mut weights = HashMap::new();
        weights.insert(id.to_string(), T::one());
        Self { weights }
    }

    /// Cell-area mass on the interior cells within `depth` of the boundary.
    pub fn boundary_layer(dom: &LatticeDomain<T>, depth: f64) -> Result<Self> {
        let w = T::of(dom.h * dom.h);
        let boundary: Vec<[f64; 2]> = dom
            .boundary_ids()
            .iter()
            .map(|id| dom.pos(id))
            .collect::<Result<_>>()?;
        let mut weights = HashMap::new();
        for id in dom.interior_ids() {
            let p = dom.pos(id)?;
            let dist = boundary
                .iter()
                .map(|b| ((p[0] - b[0]).powi(2) + (p[1] - b[1]).powi(2)).sqrt())
                .fold(f64::INFINITY, f64::min);
            if dist <= depth {
                weights.insert(id.to_string(), w);
            }
        }
        Ok(Self { weights })
    }

    pub fn scaled(&self, c: T) -> Self {
        Self {
            weights: self.weights.iter().map(|(k, &v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn mass(&self, id: &str) -> T {
        self.weights.get(id).copied().unwrap_or_else(T::zero)
    }

    pub fn mass_of(&self, cells: &[String]) -> T {
        cells.iter().map(|c| self.mass(c)).sum()
    }

    pub fn total(&self) -> T {
        self.weights.values().copied().sum()
    }
}

/// Carleson sweep result.
#[derive(Debug, Clone, Serialize)]
pub struct CarlesonReport {
    pub m: f64,
    /// (center cell, radius) attaining the maximum
    pub witness: (String, f64),
    /// (center, radius, ratio) rows
    pub ratios: Vec<(String, f64, f64)>,
}

/// Strong-(p,p) sweep result.
#[derive(Debug, Clone, Serialize)]
pub struct StrongPpReport {
    pub k: f64,
    pub p: f64,
    pub witness: String,
    pub family: String,
    pub tested: usize,
    pub skipped: usize,
}

/// One inequality chain at a Carleson witness.
#[derive(Debug, Clone, Serialize)]
pub struct ChainLink {
    pub center: String,
    pub radius: f64,
    pub scaled_radius: f64,
    /// delta^p * mu(C(P,r) ∩ D)
    pub lhs: f64,
    /// sum over C(P,r) ∩ D of omega_x(scaled ball)^p mu(x)
    pub over_cylinder: f64,
    /// same sum over all of D
    pub over_domain: f64,
    /// K * omega_O(scaled ball)
    pub rhs: f64,
}

/// Full equivalence check output.
#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceReport {
    pub p: f64,
    pub m: f64,
    pub k: f64,
    pub delta: f64,
    pub delta_witness: String,
    pub chain: Vec<ChainLink>,
    /// M <= delta^-p * K * (1 + tol_geom)
    pub bound_ok: bool,
    /// delta^-p * K * (1 + tol_geom) - M
    pub slack: f64,
}

/// `M = max mu(C(P,r) ∩ D) / omega_O(ball(P,r))` over all boundary centers
/// and the given radii.
pub fn carleson_norm<T: Real>(
    dom: &LatticeDomain<T>,
    k: &HarmonicKernel<T>,
    mu: &TestMeasure<T>,
    radii: &[f64],
) -> Result<CarlesonReport> {
    if radii.is_empty() {
        return Err(Error::input("empty radii list"));
    }
    let orow = k
        .row_of(dom.origin_id())
        .ok_or_else(|| Error::Inconsistency("origin is not an interior row".into()))?;
    let mut best = 0.0f64;
    let mut witness = (String::new(), 0.0);
    let mut ratios = Vec::new();
    for p in dom.boundary_ids() {
        for &r in radii {
            let ball = dom.surface_ball(p, r)?;
            let cols: Vec<usize> = ball
                .cells
                .iter()
                .map(|q| k.col_of(q).expect("ball cells are boundary"))
                .collect();
            let denom = k.mass(orow, &cols).to_f64_lossy();
            if !(denom > 0.0) {
                return Err(Error::Inconsistency(format!(
                    "zero origin mass for ball at '{p}', r={r}"
                )));
            }
            let num = mu.mass_of(&dom.cylinder_interior(p, r)?).to_f64_lossy();
            let ratio = num / denom;
            ratios.push((p.to_string(), r, ratio));
            if ratio > best {
                best = ratio;
                witness = (p.to_string(), r);
            }
        }
    }
    if witness.0.is_empty() {
        witness = (dom.boundary_ids()[0].to_string(), radii[0]);
    }
    Ok(CarlesonReport {
        m: best,
        witness,
        ratios,
    })
}

/// The default test family: every single-atom indicator, every surface-ball
/// indicator over the radii grid, and `extra` seeded random nonnegative data
/// vectors.
pub fn default_family<T: Real>(
    dom: &LatticeDomain<T>,
    radii: &[f64],
    extra: usize,
    seed: u64,
) -> Result<Vec<(String, BoundaryData<T>)>> {
    let boundary: Vec<String> = dom.boundary_ids().iter().map(|s| s.to_string()).collect();
    let mut family = Vec::new();
    for q in &boundary {
        family.push((format!("atom:{q}"), BoundaryData::indicator(q, &boundary)));
    }
    for q in &boundary {
        for &r in radii {
            let ball = dom.surface_ball(q, r)?;
            let values = boundary
                .iter()
                .map(|b| {
                    let v = if ball.cells.contains(b) { T::one() } else { T::zero() };
                    (b.clone(), v)
                })
                .collect();
            family.push((format!("ball:{q}:r={r:.6}"), BoundaryData::new(values)));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..extra {
        let values = boundary
            .iter()
            .map(|b| (b.clone(), T::of(rng.random::<f64>())))
            .collect();
        family.push((format!("random:{i}"), BoundaryData::new(values)));
    }
    Ok(family)
}

/// `K = max over the family of the p-th moment ratio`; data with zero
/// denominator are skipped (all skipped is an input error).
pub fn strong_pp_norm<T: Real>(
    dom: &LatticeDomain<T>,
    k: &HarmonicKernel<T>,
    mu: &TestMeasure<T>,
    p: f64,
    family: &[(String, BoundaryData<T>)],
) -> Result<StrongPpReport> {
    if family.is_empty() {
        return Err(Error::input("empty test family"));
    }
    if !(p > 1.0) {
        return Err(Error::input(format!("exponent must exceed 1, got {p}")));
    }
    let orow = k
        .row_of(dom.origin_id())
        .ok_or_else(|| Error::Inconsistency("origin is not an interior row".into()))?;
    let interior = dom.interior_ids();
    let mut best = 0.0f64;
    let mut witness = String::from("(none)");
    let mut tested = 0usize;
    let mut skipped = 0usize;
    for (name, f) in family {
        let mut denom = 0.0f64;
        for (col, q) in k.boundary_ids().iter().enumerate() {
            denom += f.get(q)?.to_f64_lossy().abs().powf(p) * k.entry(orow, col).to_f64_lossy();
        }
        if !(denom > 0.0) {
            skipped += 1;
            log::warn!("test data '{name}' has zero p-norm against the origin measure; skipped");
            continue;
        }
        let mut num = 0.0f64;
        for x in &interior {
            let w = mu.mass(x).to_f64_lossy();
            if w > 0.0 {
                num += evaluate_measure(k, x, f)?.to_f64_lossy().abs().powf(p) * w;
            }
        }
        tested += 1;
        let ratio = num / denom;
        if ratio > best {
            best = ratio;
            witness = name.clone();
        }
    }
    if tested == 0 {
        return Err(Error::input("every family member had zero denominator"));
    }
    Ok(StrongPpReport {
        k: best,
        p,
        witness,
        family: format!("{} members", family.len()),
        tested,
        skipped,
    })
}

/// Check the Carleson / strong-(p,p) link: estimates `delta`, augments the
/// family with the rescaled witness balls, verifies the moment chain link by
/// link at every (P, r), and asserts `M <= delta^-p * K * 1.1`.
pub fn check_equivalence<T: Real>(
    dom: &LatticeDomain<T>,
    k: &HarmonicKernel<T>,
    mu: &TestMeasure<T>,
    p: f64,
    radii: &[f64],
    family: &[(String, BoundaryData<T>)],
) -> Result<EquivalenceReport> {
    const TOL_GEOM: f64 = 0.1;
    let (delta, delta_witness) = estimate_delta(dom, k, radii, dom.boundary_ids().len())?;
    let carleson = carleson_norm(dom, k, mu, radii)?;
    let boundary: Vec<String> = dom.boundary_ids().iter().map(|s| s.to_string()).collect();

    // family must contain the scaled balls the chain quotients against
    let mut full_family: Vec<(String, BoundaryData<T>)> = family.to_vec();
    let diam = dom.diameter();
    let scaled_radius = |r: f64| (r / delta).min(2.0 * diam);
    let mut scaled_balls: Vec<(String, f64, f64)> = Vec::new(); // (P, r, r_scaled)
    for pc in dom.boundary_ids() {
        for &r in radii {
            let rs = scaled_radius(r);
            scaled_balls.push((pc.to_string(), r, rs));
            let ball = dom.surface_ball(pc, rs)?;
            let values = boundary
                .iter()
                .map(|b| {
                    let v = if ball.cells.contains(b) { T::one() } else { T::zero() };
                    (b.clone(), v)
                })
                .collect();
            full_family.push((format!("scaled-ball:{pc}:r={rs:.6}"), BoundaryData::new(values)));
        }
    }
    let strong = strong_pp_norm(dom, k, mu, p, &full_family)?;

    let mut chain = Vec::new();
    let eps = 1e-12;
    for (pc, r, rs) in &scaled_balls {
        let ball = dom.surface_ball(pc, *rs)?;
        let fball = BoundaryData::<T>::new(
            boundary
                .iter()
                .map(|b| {
                    let v = if ball.cells.contains(b) { T::one() } else { T::zero() };
                    (b.clone(), v)
                })
                .collect(),
        );
        let cyl = dom.cylinder_interior(pc, *r)?;
        let lhs = delta.powf(p) * mu.mass_of(&cyl).to_f64_lossy();
        let mut over_cylinder = 0.0f64;
        for x in &cyl {
            over_cylinder +=
                evaluate_measure(k, x, &fball)?.to_f64_lossy().powf(p) * mu.mass(x).to_f64_lossy();
        }
        let mut over_domain = 0.0f64;
        for x in dom.interior_ids() {
            let w = mu.mass(x).to_f64_lossy();
            if w > 0.0 {
                over_domain += evaluate_measure(k, x, &fball)?.to_f64_lossy().powf(p) * w;
            }
        }
        let orow = k.row_of(dom.origin_id()).unwrap();
        let cols: Vec<usize> = ball
            .cells
            .iter()
            .map(|q| k.col_of(q).expect("ball cells are boundary"))
            .collect();
        let rhs = strong.k * k.mass(orow, &cols).to_f64_lossy();
        let link = ChainLink {
            center: pc.clone(),
            radius: *r,
            scaled_radius: *rs,
            lhs,
            over_cylinder,
            over_domain,
            rhs,
        };
        if lhs > over_cylinder * (1.0 + eps) + eps
            || over_cylinder > over_domain * (1.0 + eps) + eps
            || over_domain > rhs * (1.0 + eps) + eps
        {
            return Err(Error::Inconsistency(format!(
                "moment chain violated at {}: {:?}",
                pc, link
            )));
        }
        chain.push(link);
    }

    let bound = delta.powf(-p) * strong.k * (1.0 + TOL_GEOM);
    let bound_ok = carleson.m <= bound;
    Ok(EquivalenceReport {
        p,
        m: carleson.m,
        k: strong.k,
        delta,
        delta_witness,
        chain,
        bound_ok,
        slack: bound - carleson.m,
    })
}

/// Maximal average of `f` over surface balls at `Q`: the largest
/// `omega_O`-weighted mean of `f` on `ball(Q, r)` over the radii.
pub fn maximal_function<T: Real>(
    dom: &LatticeDomain<T>,
    k: &HarmonicKernel<T>,
    f: &BoundaryData<T>,
    q: &str,
    radii: &[f64],
) -> Result<T> {
    if radii.is_empty() {
        return Err(Error::input("empty radii list"));
    }
    let orow = k
        .row_of(dom.origin_id())
        .ok_or_else(|| Error::Inconsistency("origin is not an interior row".into()))?;
    let mut best = T::neg_infinity();
    for &r in radii {
        let ball = dom.surface_ball(q, r)?;
        let mut num = T::zero();
        let mut den = T::zero();
        for c in &ball.cells {
            let col = k.col_of(c).expect("ball cells are boundary");
            let w = k.entry(orow, col);
            num += f.get(c)? * w;
            den += w;
        }
        if den > T::zero() {
            best = best.max(num / den);
        }
    }
    if !best.is_finite() {
        return Err(Error::Inconsistency(format!("no ball at '{q}' had positive mass")));
    }
    Ok(best)
}

/// Weak-(1,1) bound for the maximal averages: for each threshold `s`,
/// `omega_O(f* > s) <= C * ||f||_1 / s`; returns the empirical constant
/// `C = max_s s * omega_O(f* > s) / ||f||_1` and the per-threshold rows.
pub fn weak_11_check<T: Real>(
    dom: &LatticeDomain<T>,
    k: &HarmonicKernel<T>,
    f: &BoundaryData<T>,
    radii: &[f64],
    thresholds: &[f64],
) -> Result<(f64, Vec<(f64, f64, f64)>)> {
    if thresholds.is_empty() {
        return Err(Error::input("empty threshold list"));
    }
    let orow = k
        .row_of(dom.origin_id())
        .ok_or_else(|| Error::Inconsistency("origin is not an interior row".into()))?;
    let mut norm1 = 0.0f64;
    for (col, q) in k.boundary_ids().iter().enumerate() {
        norm1 += f.get(q)?.to_f64_lossy().abs() * k.entry(orow, col).to_f64_lossy();
    }
    let stars: Vec<(usize, f64)> = k
        .boundary_ids()
        .iter()
        .enumerate()
        .map(|(col, q)| {
            maximal_function(dom, k, f, q, radii).map(|v| (col, v.to_f64_lossy()))
        })
        .collect::<Result<_>>()?;
    let mut c_hat = 0.0f64;
    let mut rows = Vec::new();
    for &s in thresholds {
        if !(s > 0.0) {
            return Err(Error::input(format!("threshold must be positive, got {s}")));
        }
        let mut level = 0.0f64;
        for &(col, star) in &stars {
            if star > s {
                level += k.entry(orow, col).to_f64_lossy();
            }
        }
        let c_here = if norm1 > 0.0 { s * level / norm1 } else { 0.0 };
        c_hat = c_hat.max(c_here);
        rows.push((s, level, c_here));
    }
    Ok((c_hat, rows))
}
