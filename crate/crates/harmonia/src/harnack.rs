//! Harnack indices and Radon-Nikodym ratios between harmonic-measure rows.
//!
//! For a set `A` of interior vertices in one component, the index
//! `H(A) = max K[x][q] / K[y][q]` over `x, y` in `A` and boundary atoms `q`
//! equals the supremum over nonnegative boundary data `f` of
//! `omega_x(f) / omega_y(f)`: on a finite boundary that supremum is attained
//! on single-atom indicators.

use std::collections::HashMap;

use serde::Serialize;

use crate::dirichlet::{harmonic_kernel, HarmonicKernel};
use crate::error::{Error, Result};
use crate::graph::{Subdomain, WeightedGraph};
use crate::num::Real;

/// Result of a Harnack index computation: the index and the triple
/// (x, y, q) attaining it.
#[derive(Debug, Clone, Serialize)]
pub struct HarnackReport {
    pub subset: Vec<String>,
    pub index: f64,
    pub witness: (String, String, String),
}

fn common_component<T: Real>(k: &HarmonicKernel<T>, a: &[&str]) -> Result<(Vec<usize>, usize)> {
    if a.is_empty() {
        return Err(Error::input("harnack subset is empty"));
    }
    let mut rows = Vec::with_capacity(a.len());
    for &x in a {
        rows.push(k.row_of(x).ok_or_else(|| {
            Error::input(format!("'{x}' is not an interior vertex of this kernel"))
        })?);
    }
    let comp = k.component_of_row(rows[0]);
    for (&x, &row) in a.iter().zip(&rows) {
        if k.component_of_row(row) != comp {
            return Err(Error::input(format!(
                "harnack subset spans multiple components ('{}' vs '{x}')",
                a[0]
            )));
        }
    }
    Ok((rows, comp))
}

/// Maximum kernel-row ratio over the subset, with its attaining triple.
pub fn harnack_index<T: Real>(k: &HarmonicKernel<T>, a: &[&str]) -> Result<HarnackReport> {
    let (rows, comp) = common_component(k, a)?;
    let cols = k.component_cols(comp);
    let mut best = T::one();
    // a singleton (or identical rows) attains 1 with x = y
    let mut witness = (a[0].to_string(), a[0].to_string(), k.boundary_ids()[cols[0]].clone());
    for (ix, &rx) in rows.iter().enumerate() {
        for (iy, &ry) in rows.iter().enumerate() {
            for &c in cols {
                let den = k.entry(ry, c);
                if den > T::zero() {
                    let ratio = k.entry(rx, c) / den;
                    if ratio > best {
                        best = ratio;
                        witness = (
                            a[ix].to_string(),
                            a[iy].to_string(),
                            k.boundary_ids()[c].clone(),
                        );
                    }
                }
            }
        }
    }
    Ok(HarnackReport {
        subset: a.iter().map(|s| s.to_string()).collect(),
        index: best.to_f64_lossy(),
        witness,
    })
}

/// Entrywise ratio r with K[x][q] = r[q] * K[y][q] on the common component
/// boundary.
pub fn radon_nikodym<T: Real>(
    k: &HarmonicKernel<T>,
    x: &str,
    y: &str,
) -> Result<HashMap<String, T>> {
    let (rows, comp) = common_component(k, &[x, y])?;
    let mut r = HashMap::new();
    for &c in k.component_cols(comp) {
        let den = k.entry(rows[1], c);
        if !(den > T::zero()) {
            return Err(Error::Inconsistency(format!(
                "zero kernel mass at component boundary atom '{}'",
                k.boundary_ids()[c]
            )));
        }
        r.insert(k.boundary_ids()[c].clone(), k.entry(rows[0], c) / den);
    }
    Ok(r)
}

/// Check that all pairwise Radon-Nikodym ratios over `a` stay below `bound`;
/// returns the verdict and every violating (x, y, q, ratio).
pub fn check_general_harnack<T: Real>(
    k: &HarmonicKernel<T>,
    a: &[&str],
    bound: T,
) -> Result<(bool, Vec<(String, String, String, T)>)> {
    let (rows, comp) = common_component(k, a)?;
    let cols = k.component_cols(comp);
    let mut violations = Vec::new();
    for (ix, &rx) in rows.iter().enumerate() {
        for (iy, &ry) in rows.iter().enumerate() {
            for &c in cols {
                let den = k.entry(ry, c);
                if den > T::zero() {
                    let ratio = k.entry(rx, c) / den;
                    if ratio > bound {
                        violations.push((
                            a[ix].to_string(),
                            a[iy].to_string(),
                            k.boundary_ids()[c].clone(),
                            ratio,
                        ));
                    }
                }
            }
        }
    }
    let ok = violations.is_empty();
    if ok {
        debug_assert!(harnack_index(k, a)?.index <= bound.to_f64_lossy());
    }
    Ok((ok, violations))
}

/// Shrinking the domain cannot increase the index: checks
/// `H(A; d1) <= H(A; d2) + 1e-10` for `interior(d2)` contained in
/// `interior(d1)` and `a` inside `interior(d2)`.
pub fn harnack_monotonicity_check<T: Real>(
    g: &WeightedGraph<T>,
    a: &[&str],
    d1: &Subdomain,
    d2: &Subdomain,
) -> Result<bool> {
    for &v in d2.interior() {
        if !d1.contains_interior(v) {
            return Err(Error::input(format!(
                "nesting violated: '{}' is interior to d2 but not d1",
                g.id(v)
            )));
        }
    }
    for &x in a {
        let idx = g
            .index_of(x)
            .ok_or_else(|| Error::input(format!("unknown vertex '{x}'")))?;
        if !d2.contains_interior(idx) {
            return Err(Error::input(format!("'{x}' is not interior to d2")));
        }
    }
    let h1 = harnack_index(&harmonic_kernel(g, d1)?, a)?.index;
    let h2 = harnack_index(&harmonic_kernel(g, d2)?, a)?.index;
    Ok(h1 <= h2 + 1e-10)
}
