//! Harmonic measure of a union of subdomains by alternating boundary
//! relaxation, and the increasing-exhaustion limit.
//!
//! The measure of a boundary set `A` on `D1 ∪ D2` is built without ever
//! solving on the union: boundary functions `f1` on `∂D1` and `f2` on `∂D2`
//! are updated in alternation, each feeding the other through the harmonic
//! measures of the two pieces. The iterates are pointwise nondecreasing and
//! bounded by 1, so they converge; the limit agrees with the direct solve on
//! the union, which the tests use as an oracle.

use std::collections::{HashMap, HashSet};

use crate::dirichlet::{evaluate_measure, harmonic_kernel, BoundaryData};
use crate::error::{Error, Result};
use crate::graph::{Subdomain, WeightedGraph};
use crate::num::Real;

/// Snapshot of the alternating iteration.
#[derive(Debug, Clone)]
pub struct UnionIterationState<T> {
    /// current boundary function on ∂D1
    pub f1: HashMap<String, T>,
    /// current boundary function on ∂D2
    pub f2: HashMap<String, T>,
    pub iteration: usize,
    /// sup-norm change of (f1, f2) in the last step
    pub delta: T,
    /// per-iteration rows (iteration, delta, min f1, max f1, min f2, max f2)
    pub trace: Vec<(usize, T, T, T, T, T)>,
}

impl<T: Real> UnionIterationState<T> {
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("iteration,delta,min_f1,max_f1,min_f2,max_f2\n");
        for (i, d, a, b, c, e) in &self.trace {
            out.push_str(&format!(
                "{i},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                d.to_f64_lossy(),
                a.to_f64_lossy(),
                b.to_f64_lossy(),
                c.to_f64_lossy(),
                e.to_f64_lossy()
            ));
        }
        out
    }
}

fn min_max<T: Real>(m: &HashMap<String, T>) -> (T, T) {
    m.values().fold((T::infinity(), T::neg_infinity()), |(lo, hi), &v| {
        (lo.min(v), hi.max(v))
    })
}

/// Build the union subdomain of two subdomains of the same graph.
pub fn union_subdomain<T: Real>(
    g: &WeightedGraph<T>,
    d1: &Subdomain,
    d2: &Subdomain,
) -> Result<Subdomain> {
    let mut interior: Vec<usize> = d1.interior().to_vec();
    for &v in d2.interior() {
        if !d1.contains_interior(v) {
            interior.push(v);
        }
    }
    interior.sort_unstable();
    Subdomain::from_indices(g, interior)
}

/// Split a boundary set of the union into its `∂D1` part and the rest.
pub fn decompose_boundary<T: Real>(
    g: &WeightedGraph<T>,
    d1: &Subdomain,
    d2: &Subdomain,
    a: &[&str],
) -> Result<(Vec<String>, Vec<String>)> {
    let du = union_subdomain(g, d1, d2)?;
    let mut a1 = Vec::new();
    let mut a2 = Vec::new();
    let mut seen = HashSet::new();
    for &q in a {
        let idx = g
            .index_of(q)
            .ok_or_else(|| Error::input(format!("unknown vertex '{q}'")))?;
        if !du.contains_boundary(idx) {
            return Err(Error::input(format!(
                "'{q}' is not on the boundary of the union"
            )));
        }
        if !seen.insert(idx) {
            return Err(Error::input(format!("duplicate vertex '{q}' in boundary set")));
        }
        if d1.contains_boundary(idx) {
            a1.push(q.to_string());
        } else {
            a2.push(q.to_string());
        }
    }
    Ok((a1, a2))
}

/// omega over the union of `d1` and `d2` of the indicator of `a`, by
/// alternating relaxation. Returns the values on the union's interior and
/// the final iteration state.
pub fn union_measure<T: Real>(
    g: &WeightedGraph<T>,
    d1: &Subdomain,
    d2: &Subdomain,
    a: &[&str],
    tol: T,
    max_iter: usize,
) -> Result<(HashMap<String, T>, UnionIterationState<T>)> {
    if !(tol > T::zero()) {
        return Err(Error::input("tol must be positive"));
    }
    let (a1, a2) = decompose_boundary(g, d1, d2, a)?;
    let a1: HashSet<String> = a1.into_iter().collect();
    let a2: HashSet<String> = a2.into_iter().collect();
    let k1 = harmonic_kernel(g, d1)?;
    let k2 = harmonic_kernel(g, d2)?;

    let chi = |set: &HashSet<String>, q: &str| {
        if set.contains(q) {
            T::one()
        } else {
            T::zero()
        }
    };

    // f1_0 = indicator of A1 on ∂D1
    let mut f1: HashMap<String, T> = d1
        .boundary()
        .iter()
        .map(|&b| {
            let id = g.id(b).to_string();
            let v = chi(&a1, &id);
            (id, v)
        })
        .collect();
    let mut f2: HashMap<String, T> = d2
        .boundary()
        .iter()
        .map(|&b| (g.id(b).to_string(), T::zero()))
        .collect();

    let slack = T::of(1e-12);
    let mut trace = Vec::new();
    let mut delta = T::infinity();
    let mut iteration = 0usize;

    while iteration < max_iter {
        iteration += 1;
        let b1 = BoundaryData::new(f1.clone());
        // f2 step: on ∂D2 ∩ closure(D1) take the D1-measure of f1 (boundary
        // points of D1 evaluate to f1 itself), elsewhere the A2 indicator.
        let mut f2_new = HashMap::new();
        for &b in d2.boundary() {
            let id = g.id(b).to_string();
            let v = if d1.contains_closure(b) {
                evaluate_measure(&k1, &id, &b1)?
            } else {
                chi(&a2, &id)
            };
            f2_new.insert(id, v);
        }
        let b2 = BoundaryData::new(f2_new.clone());
        // f1 step: on ∂D1 ∩ interior(D2) take the D2-measure of f2,
        // elsewhere the A1 indicator (strictly interior: the open-set side
        // of the asymmetric case split).
        let mut f1_new = HashMap::new();
        for &b in d1.boundary() {
            let id = g.id(b).to_string();
            let v = if d2.contains_interior(b) {
                evaluate_measure(&k2, &id, &b2)?
            } else {
                chi(&a1, &id)
            };
            f1_new.insert(id, v);
        }

        delta = T::zero();
        for (id, &v) in &f1_new {
            let old = f1[id];
            if v < old - slack || v > T::one() + slack {
                return Err(Error::Inconsistency(format!(
                    "iterate at '{id}' left [previous, 1]: {old} -> {v}"
                )));
            }
            delta = delta.max((v - old).abs());
        }
        for (id, &v) in &f2_new {
            let old = f2[id];
            if v < old - slack || v > T::one() + slack {
                return Err(Error::Inconsistency(format!(
                    "iterate at '{id}' left [previous, 1]: {old} -> {v}"
                )));
            }
            delta = delta.max((v - old).abs());
        }
        f1 = f1_new;
        f2 = f2_new;
        let (l1, h1) = min_max(&f1);
        let (l2, h2) = min_max(&f2);
        trace.push((iteration, delta, l1, h1, l2, h2));
        if delta <= tol {
            break;
        }
    }
    let state = UnionIterationState {
        f1: f1.clone(),
        f2: f2.clone(),
        iteration,
        delta,
        trace,
    };
    if delta > tol {
        return Err(Error::NonConvergence {
            iterations: iteration,
            delta: delta.to_f64_lossy(),
        });
    }

    let b1 = BoundaryData::new(f1);
    let b2 = BoundaryData::new(f2);
    let mut omega = HashMap::new();
    let overlap_tol = T::of(10.0) * tol;
    for &x in d1.interior() {
        let id = g.id(x).to_string();
        omega.insert(id.clone(), evaluate_measure(&k1, &id, &b1)?);
    }
    for &x in d2.interior() {
        let id = g.id(x).to_string();
        let v2 = evaluate_measure(&k2, &id, &b2)?;
        if let Some(&v1) = omega.get(&id) {
            if (v1 - v2).abs() > overlap_tol {
                return Err(Error::Inconsistency(format!(
                    "overlap values at '{id}' disagree: {v1} vs {v2}"
                )));
            }
        } else {
            omega.insert(id, v2);
        }
    }
    Ok((omega, state))
}

/// Solve along a nondecreasing chain of subdomains and report the values on
/// the final domain together with the per-step sup-norm increments.
///
/// Boundary transfer per step: points on the final domain's boundary take
/// `f`; points interior to the final domain take the previous step's solved
/// value where defined, else 0 (first pass). On finite graphs the chain
/// stabilizes and the result equals the direct solve.
pub fn exhaustion_limit<T: Real>(
    g: &WeightedGraph<T>,
    chain: &[Subdomain],
    f: &BoundaryData<T>,
    _tol: T,
) -> Result<(HashMap<String, T>, Vec<T>)> {
    if chain.is_empty() {
        return Err(Error::input("empty subdomain chain"));
    }
    for w in chain.windows(2) {
        for &v in w[0].interior() {
            if !w[1].contains_interior(v) {
                return Err(Error::input(format!(
                    "chain is not nondecreasing: '{}' dropped out",
                    g.id(v)
                )));
            }
        }
    }
    let last = chain.last().unwrap();
    let mut prev: HashMap<String, T> = HashMap::new();
    let mut increments = Vec::new();
    for dk in chain {
        let mut fk = HashMap::new();
        for &b in dk.boundary() {
            let id = g.id(b).to_string();
            let v = if last.contains_boundary(b) {
                f.get(&id)?
            } else {
                prev.get(&id).copied().unwrap_or_else(T::zero)
            };
            fk.insert(id, v);
        }
        let u = crate::dirichlet::solve_dirichlet(g, dk, &BoundaryData::new(fk))?;
        let mut inc = T::zero();
        for &x in dk.interior() {
            let id = g.id(x);
            if let Some(&p) = prev.get(id) {
                inc = inc.max((u[id] - p).abs());
            }
        }
        increments.push(inc);
        // carry interior values only; boundary values are re-derived each step
        prev = dk
            .interior()
            .iter()
            .map(|&x| (g.id(x).to_string(), u[g.id(x)]))
            .collect();
    }
    Ok((prev, increments))
}
