//! Executable property checks against computed kernels: stochasticity and
//! support structure, boundary regularity under edge subdivision, weak and
//! strong maximum principles, the tower (compatibility) property, and the
//! indicator-measure bounds. All checks report witnesses on failure and are
//! deterministic given a seed.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dirichlet::{
    evaluate_measure, solve_dirichlet, BoundaryData, HarmonicKernel,
};
use crate::error::{Error, Result};
use crate::graph::{Subdomain, SubdivisionSpec, WeightedGraph};
use crate::num::Real;

/// Outcome of one check. Failed checks always carry at least one witness.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub passed: bool,
    /// (input description, offending value)
    pub witnesses: Vec<(String, f64)>,
    pub tolerance: f64,
}

impl VerificationReport {
    pub fn new(check: &str, tolerance: f64) -> Self {
        Self {
            check: check.to_string(),
            passed: true,
            witnesses: Vec::new(),
            tolerance,
        }
    }

    pub fn fail(&mut self, inputs: impl Into<String>, value: f64) {
        self.passed = false;
        self.witnesses.push((inputs.into(), value));
    }

    /// Record an informational value without affecting the verdict.
    pub fn note(&mut self, inputs: impl Into<String>, value: f64) {
        self.witnesses.push((inputs.into(), value));
    }
}

/// Serialize a batch of reports as a machine-readable JSON array.
pub fn reports_to_json(reports: &[VerificationReport]) -> String {
    serde_json::to_string_pretty(reports).expect("reports serialize")
}

pub fn all_passed(reports: &[VerificationReport]) -> bool {
    reports.iter().all(|r| r.passed)
}

const ROW_TOL: f64 = 1e-10;

/// Rows are probability vectors supported exactly on the component boundary:
/// per-row sum 1 within 1e-10, entries in [0,1], strictly positive on the
/// component's atoms and exactly zero off them.
pub fn verify_preharmonic<T: Real>(
    k: &HarmonicKernel<T>,
    _g: &WeightedGraph<T>,
    _d: &Subdomain,
) -> VerificationReport {
    let mut rep = VerificationReport::new("preharmonic", ROW_TOL);
    let ncols = k.boundary_ids().len();
    for (row, x) in k.interior_ids().iter().enumerate() {
        let comp = k.component_of_row(row);
        let cols = k.component_cols(comp);
        let sum = k.mass(row, cols);
        if (sum.to_f64_lossy() - 1.0).abs() > ROW_TOL {
            rep.fail(format!("row sum at '{x}'"), sum.to_f64_lossy());
        }
        let mut on: Vec<bool> = vec![false; ncols];
        for &c in cols {
            on[c] = true;
        }
        for c in 0..ncols {
            let v = k.entry(row, c).to_f64_lossy();
            if on[c] {
                if !(v > 0.0) || v > 1.0 + ROW_TOL {
                    rep.fail(
                        format!("entry ('{x}', '{}') outside (0, 1]", k.boundary_ids()[c]),
                        v,
                    );
                }
            } else if v != 0.0 {
                rep.fail(
                    format!(
                        "entry ('{x}', '{}') nonzero off the component boundary",
                        k.boundary_ids()[c]
                    ),
                    v,
                );
            }
        }
    }
    rep
}

/// Random nonnegative boundary data on the given atoms.
pub fn random_boundary<T: Real>(
    rng: &mut impl Rng,
    boundary_ids: &[String],
) -> BoundaryData<T> {
    BoundaryData::new(
        boundary_ids
            .iter()
            .map(|q| (q.clone(), T::of(rng.random::<f64>())))
            .collect(),
    )
}

/// Solutions approach the boundary data along subdivided edges: for each
/// boundary vertex y, each edge (x, y) with x interior is subdivided at
/// lambda = 1 - 2^-m (m = 1..probes) and the value at the added vertex must
/// satisfy |u - f(y)| <= (1 - lambda) * range(f) + 1e-10.
pub fn verify_regular<T: Real>(
    g: &WeightedGraph<T>,
    d: &Subdomain,
    probes: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new("regular", 1e-10);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let boundary_ids: Vec<String> = d.boundary().iter().map(|&b| g.id(b).to_string()).collect();
    let f = random_boundary::<T>(&mut rng, &boundary_ids);
    let lo = f.values.values().fold(T::infinity(), |m, &v| m.min(v));
    let hi = f.values.values().fold(T::neg_infinity(), |m, &v| m.max(v));
    let range = hi - lo;
    for &y in d.boundary() {
        let fy = f.get(g.id(y))?;
        for &(x, _) in g.neighbors(y) {
            if !d.contains_interior(x) {
                continue;
            }
            for m in 1..=probes {
                let lambda = 1.0 - 0.5f64.powi(m as i32);
                let probe_id = format!("__probe_{}_{}_{m}", g.id(x), g.id(y));
                let spec = SubdivisionSpec::new(g.id(x), g.id(y), T::of(lambda), probe_id.clone());
                let g2 = g.subdivide_edge(&spec)?;
                let mut interior: Vec<&str> =
                    d.interior().iter().map(|&i| g.id(i)).collect();
                interior.push(&probe_id);
                let d2 = Subdomain::new(&g2, &interior)?;
                let u = solve_dirichlet(&g2, &d2, &f)?;
                let err = (u[&probe_id] - fy).abs();
                let bound = T::of(1.0 - lambda) * range + T::of(1e-10);
                if err > bound {
                    rep.fail(
                        format!(
                            "probe toward '{}' from '{}' at lambda={lambda}",
                            g.id(y),
                            g.id(x)
                        ),
                        err.to_f64_lossy(),
                    );
                }
            }
        }
    }
    Ok(rep)
}

/// Interior values never exceed the boundary maximum (nor undershoot the
/// minimum) beyond 1e-10.
pub fn verify_weak_max<T: Real>(k: &HarmonicKernel<T>, f: &BoundaryData<T>) -> VerificationReport {
    let mut rep = VerificationReport::new("weak_max", ROW_TOL);
    let hi = f.values.values().fold(T::neg_infinity(), |m, &v| m.max(v));
    let lo = f.values.values().fold(T::infinity(), |m, &v| m.min(v));
    for x in k.interior_ids() {
        match evaluate_measure(k, x, f) {
            Ok(v) => {
                if v > hi + T::of(ROW_TOL) || v < lo - T::of(ROW_TOL) {
                    rep.fail(format!("omega at '{x}' outside boundary range"), v.to_f64_lossy());
                }
            }
            Err(e) => rep.fail(format!("evaluation failed at '{x}': {e}"), f64::NAN),
        }
    }
    rep
}

fn component_rows<T: Real>(k: &HarmonicKernel<T>) -> Vec<Vec<usize>> {
    let mut rows = vec![Vec::new(); k.num_components()];
    for r in 0..k.interior_ids().len() {
        rows[k.component_of_row(r)].push(r);
    }
    rows
}

/// On each component: constant boundary data gives constant interior values;
/// nonconstant data keeps every interior value strictly below the boundary
/// maximum over positive-mass atoms (the strictness margin is the reported
/// value on failure).
pub fn verify_strong_max<T: Real>(
    k: &HarmonicKernel<T>,
    _g: &WeightedGraph<T>,
    _d: &Subdomain,
    f: &BoundaryData<T>,
) -> VerificationReport {
    let mut rep = VerificationReport::new("strong_max", ROW_TOL);
    for (comp, rows) in component_rows(k).iter().enumerate() {
        let cols = k.component_cols(comp);
        let fvals: Vec<T> = cols
            .iter()
            .filter_map(|&c| f.values.get(&k.boundary_ids()[c]).copied())
            .collect();
        if fvals.len() != cols.len() {
            rep.fail(format!("missing boundary data on component {comp}"), f64::NAN);
            continue;
        }
        let c_hi = fvals.iter().fold(T::neg_infinity(), |m, &v| m.max(v));
        let c_lo = fvals.iter().fold(T::infinity(), |m, &v| m.min(v));
        let values: Vec<T> = rows
            .iter()
            .map(|&r| {
                cols.iter()
                    .map(|&c| k.entry(r, c) * f.values[&k.boundary_ids()[c]])
                    .sum()
            })
            .collect();
        let v_hi = values.iter().fold(T::neg_infinity(), |m, &v| m.max(v));
        let v_lo = values.iter().fold(T::infinity(), |m, &v| m.min(v));
        if (c_hi - c_lo).to_f64_lossy() <= 1e-12 {
            // constant data: interior must be constant at the same level
            if (v_hi - v_lo).to_f64_lossy() > ROW_TOL
                || (v_hi - c_hi).abs().to_f64_lossy() > ROW_TOL
            {
                rep.fail(
                    format!("constant data but interior spread on component {comp}"),
                    (v_hi - v_lo).to_f64_lossy(),
                );
            }
        } else {
            let margin = (c_hi - v_hi).to_f64_lossy();
            if !(margin > 0.0) {
                rep.fail(
                    format!("no strictness margin on component {comp}"),
                    margin,
                );
            }
        }
    }
    rep
}

/// Boundary version: with c0 the maximum of f over positive-mass atoms, an
/// interior value reaching c0 forces the component values to be constant and
/// f to equal c0 on every positive-mass atom. The proof's partition of the
/// atoms (above / at / below c0) is materialized and its measures reported.
pub fn verify_boundary_strong_max<T: Real>(
    k: &HarmonicKernel<T>,
    f: &BoundaryData<T>,
) -> VerificationReport {
    let mut rep = VerificationReport::new("boundary_strong_max", 1e-12);
    for (comp, rows) in component_rows(k).iter().enumerate() {
        let cols = k.component_cols(comp);
        if rows.is_empty() {
            continue;
        }
        let mut c0 = T::neg_infinity();
        for &c in cols {
            if let Some(&v) = f.values.get(&k.boundary_ids()[c]) {
                c0 = c0.max(v);
            } else {
                rep.fail(format!("missing boundary data on component {comp}"), f64::NAN);
                return rep;
            }
        }
        // partition of positive-mass atoms relative to the level c0
        let above: Vec<usize> = cols
            .iter()
            .copied()
            .filter(|&c| f.values[&k.boundary_ids()[c]] > c0)
            .collect();
        let below: Vec<usize> = cols
            .iter()
            .copied()
            .filter(|&c| f.values[&k.boundary_ids()[c]] < c0 - T::of(1e-12))
            .collect();
        if !above.is_empty() {
            rep.fail(
                format!("atoms above the maximum on component {comp}"),
                above.len() as f64,
            );
        }
        let values: Vec<T> = rows
            .iter()
            .map(|&r| {
                cols.iter()
                    .map(|&c| k.entry(r, c) * f.values[&k.boundary_ids()[c]])
                    .sum()
            })
            .collect();
        let v_hi = values.iter().fold(T::neg_infinity(), |m, &v| m.max(v));
        let v_lo = values.iter().fold(T::infinity(), |m, &v| m.min(v));
        if v_hi.to_f64_lossy() > c0.to_f64_lossy() + ROW_TOL {
            rep.fail(
                format!("interior exceeds boundary maximum on component {comp}"),
                v_hi.to_f64_lossy(),
            );
        }
        let triggered = v_hi >= c0 - T::of(1e-12);
        if triggered {
            if (v_hi - v_lo).to_f64_lossy() > ROW_TOL {
                rep.fail(
                    format!("maximum attained but values nonconstant on component {comp}"),
                    (v_hi - v_lo).to_f64_lossy(),
                );
            }
            if !below.is_empty() {
                rep.fail(
                    format!(
                        "maximum attained but {} positive-mass atoms sit below it on component {comp}",
                        below.len()
                    ),
                    below.len() as f64,
                );
            }
        }
    }
    rep
}

/// The tower property: solving on the large domain and re-solving on the
/// sub-domain with the solved trace as data reproduces the same interior
/// values within 1e-10, for `trials` random data vectors.
pub fn verify_compatibility<T: Real>(
    g: &WeightedGraph<T>,
    d: &Subdomain,
    d_sub: &Subdomain,
    trials: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new("compatibility", ROW_TOL);
    for &v in d_sub.interior() {
        if !d.contains_interior(v) {
            return Err(Error::input(format!(
                "'{}' is interior to the sub-domain but not the domain",
                g.id(v)
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let boundary_ids: Vec<String> = d.boundary().iter().map(|&b| g.id(b).to_string()).collect();
    for trial in 0..trials {
        let f = random_boundary::<T>(&mut rng, &boundary_ids);
        let u = solve_dirichlet(g, d, &f)?;
        // trace of u on the sub-domain boundary (u covers the closure of d)
        let h = BoundaryData::new(
            d_sub
                .boundary()
                .iter()
                .map(|&b| {
                    let id = g.id(b).to_string();
                    let v = u[&id];
                    (id, v)
                })
                .collect(),
        );
        let w = solve_dirichlet(g, d_sub, &h)?;
        for &x in d_sub.interior() {
            let id = g.id(x);
            let diff = (u[id] - w[id]).abs().to_f64_lossy();
            if diff > ROW_TOL {
                rep.fail(format!("trial {trial}, vertex '{id}'"), diff);
            }
        }
    }
    Ok(rep)
}

/// Indicator-measure bounds: for a boundary subset meeting a component's
/// atoms, interior masses lie in (0, 1]; if the mass reaches 1 anywhere it
/// is 1 everywhere on the component; components missed by the subset carry
/// exactly zero.
pub fn verify_chi_a_max<T: Real>(k: &HarmonicKernel<T>, a: &[&str]) -> VerificationReport {
    let mut rep = VerificationReport::new("chi_a_max", ROW_TOL);
    let sel: Vec<usize> = a.iter().filter_map(|q| k.col_of(q)).collect();
    if sel.len() != a.len() {
        rep.fail("unknown boundary vertex in subset", f64::NAN);
        return rep;
    }
    for (comp, rows) in component_rows(k).iter().enumerate() {
        let cols: Vec<usize> = k
            .component_cols(comp)
            .iter()
            .copied()
            .filter(|c| sel.contains(c))
            .collect();
        let masses: Vec<f64> = rows
            .iter()
            .map(|&r| k.mass(r, &cols).to_f64_lossy())
            .collect();
        if cols.is_empty() {
            for (&r, &m) in rows.iter().zip(&masses) {
                if m != 0.0 {
                    rep.fail(
                        format!("mass off-support at '{}'", k.interior_ids()[r]),
                        m,
                    );
                }
            }
            continue;
        }
        let top = masses.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        for (&r, &m) in rows.iter().zip(&masses) {
            if !(m > 0.0) || m > 1.0 + ROW_TOL {
                rep.fail(
                    format!("mass outside (0,1] at '{}'", k.interior_ids()[r]),
                    m,
                );
            }
            if top >= 1.0 - 1e-12 && (m - 1.0).abs() > ROW_TOL {
                rep.fail(
                    format!("mass 1 attained but not constant at '{}'", k.interior_ids()[r]),
                    m,
                );
            }
        }
    }
    rep
}
