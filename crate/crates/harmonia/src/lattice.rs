//! Grid discretization of planar star-like polygonal domains.
//!
//! A polygon star-like about an origin `O` is sampled on a square lattice of
//! spacing `h`: interior cells are grid points strictly inside, boundary
//! cells are outside points with an inside 4-neighbor. The resulting
//! unit-weight grid graph feeds the exact graph machinery, so every finite
//! theorem holds at each fixed `h`.
//!
//! Cell identifiers are anchored to the bounding box of the discretization
//! (`g{row}_{col}` with zero-padded local indices). Translating the shape by
//! grid vectors, or scaling shape and spacing by the same integer, therefore
//! yields the identical labeled graph and bit-identical kernels.

use serde::Deserialize;
use std::collections::HashMap;

use crate::dirichlet::{harmonic_kernel, HarmonicKernel};
use crate::error::{Error, Result};
use crate::graph::{Subdomain, WeightedGraph};
use crate::num::Real;
use crate::verify::VerificationReport;

/// A lattice discretization of a star-like polygon.
#[derive(Debug, Clone)]
pub struct LatticeDomain<T> {
    /// grid spacing
    pub h: f64,
    /// star center, snapped to the grid
    pub origin: [f64; 2],
    /// the continuum polygon being discretized
    pub polygon: Vec<[f64; 2]>,
    /// Lipschitz constant of the boundary in star charts
    pub lipschitz: f64,
    /// cylinder height factor (2 * lipschitz)
    pub s: f64,
    graph: WeightedGraph<T>,
    domain: Subdomain,
    /// absolute grid coordinates per vertex id
    cells: HashMap<String, (i64, i64)>,
    origin_id: String,
}

/// Boundary trace of a cylinder: the boundary cells inside `C(P, r)`.
#[derive(Debug, Clone)]
pub struct BoundaryBall {
    pub center_id: String,
    pub radius: f64,
    pub cells: Vec<String>,
}

/// Boundary-adapted cylinder with its corkscrew cell.
#[derive(Debug, Clone)]
pub struct Cylinder {
    pub center_id: String,
    pub center: [f64; 2],
    pub radius: f64,
    pub s: f64,
    /// unit vector along O -> P
    pub axis: [f64; 2],
    /// interior cell at the inner end of the cylinder
    pub corkscrew: String,
    /// distance(corkscrew, boundary) / radius
    pub clearance: f64,
}

#[derive(Deserialize)]
struct DomainSpecFile {
    polygon: Vec<[f64; 2]>,
    origin: [f64; 2],
    h: f64,
}

fn sub(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn norm(a: [f64; 2]) -> f64 {
    dot(a, a).sqrt()
}

fn dist_point_segment(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let ab = sub(b, a);
    let len2 = dot(ab, ab);
    if len2 == 0.0 {
        return norm(sub(p, a));
    }
    let t = (dot(sub(p, a), ab) / len2).clamp(0.0, 1.0);
    norm(sub(p, [a[0] + t * ab[0], a[1] + t * ab[1]]))
}

fn dist_to_polygon(p: [f64; 2], poly: &[[f64; 2]]) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|i| dist_point_segment(p, poly[i], poly[(i + 1) % n]))
        .fold(f64::INFINITY, f64::min)
}

/// Strictly-inside test: points within 1e-12 of the boundary count as not
/// inside, everything else is decided by even-odd crossing.
fn strictly_inside(p: [f64; 2], poly: &[[f64; 2]]) -> bool {
    if dist_to_polygon(p, poly) < 1e-12 {
        return false;
    }
    let n = poly.len();
    let mut inside = false;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let x = a[0] + (p[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
            if p[0] < x {
                inside = !inside;
            }
        }
    }
    inside
}

/// Number of distinct crossings of the ray from `o` in direction `dir` with
/// the polygon boundary (coincident crossings through a vertex deduplicated).
fn ray_crossings(o: [f64; 2], dir: [f64; 2], poly: &[[f64; 2]]) -> usize {
    let n = poly.len();
    let mut ts: Vec<f64> = Vec::new();
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        // solve o + t*dir = a + u*(b-a), t > 0, u in [0,1]
        let e = sub(b, a);
        let denom = dir[0] * (-e[1]) - dir[1] * (-e[0]);
        if denom.abs() < 1e-15 {
            continue; // parallel; endpoints are caught by adjacent edges
        }
        let ao = sub(a, o);
        let t = (ao[0] * (-e[1]) - ao[1] * (-e[0])) / denom;
        let u = (dir[0] * ao[1] - dir[1] * ao[0]) / denom;
        if t > 1e-12 && (-1e-12..=1.0 + 1e-12).contains(&u) {
            ts.push(t);
        }
    }
    ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ts.dedup_by(|a, b| (*a - *b).abs() < 1e-9 * (1.0 + b.abs()));
    ts.len()
}

/// Largest chart slope of the polygon boundary relative to rays from `o`:
/// for each edge and each anchor (both endpoints and the midpoint), the
/// component of the edge along the ray direction over its component across.
fn lipschitz_constant(o: [f64; 2], poly: &[[f64; 2]]) -> f64 {
    let n = poly.len();
    let mut l: f64 = 0.0;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let e = sub(b, a);
        let mid = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
        for anchor in [a, b, mid] {
            let ra = sub(anchor, o);
            let len = norm(ra);
            if len < 1e-12 {
                continue;
            }
            let u = [ra[0] / len, ra[1] / len];
            let w = [-u[1], u[0]];
            let across = dot(e, w).abs();
            if across > 1e-12 {
                l = l.max(dot(e, u).abs() / across);
            }
        }
    }
    l
}

impl<T: Real> LatticeDomain<T> {
    /// Parse a `{ "polygon": ..., "origin": ..., "h": ... }` spec and
    /// discretize it.
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: DomainSpecFile = serde_json::from_str(text)?;
        Self::discretize(&spec.polygon, spec.origin, spec.h)
    }

    /// Discretize a polygon star-like about `origin` at spacing `h`.
    pub fn discretize(polygon: &[[f64; 2]], origin: [f64; 2], h: f64) -> Result<Self> {
        if polygon.len() < 3 {
            return Err(Error::geometry("polygon needs at least 3 vertices"));
        }
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::geometry(format!("spacing must be positive, got {h}")));
        }
        let origin = [
            (origin[0] / h).round() * h,
            (origin[1] / h).round() * h,
        ];
        if !strictly_inside(origin, polygon) {
            return Err(Error::geometry(
                "origin (snapped to the grid) is not strictly inside the polygon",
            ));
        }
        // star-likeness: every one of 720 rays from the origin crosses the
        // boundary exactly once
        for m in 0..720 {
            let ang = 2.0 * std::f64::consts::PI * (m as f64) / 720.0;
            let c = ray_crossings(origin, [ang.cos(), ang.sin()], polygon);
            if c != 1 {
                return Err(Error::geometry(format!(
                    "polygon is not star-like about the origin: ray at {:.4} rad crosses the boundary {c} times",
                    ang
                )));
            }
        }

        // enumerate candidate grid cells over the polygon bounding box
        let (mut lo_x, mut hi_x, mut lo_y, mut hi_y) =
            (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for v in polygon {
            lo_x = lo_x.min(v[0]);
            hi_x = hi_x.max(v[0]);
            lo_y = lo_y.min(v[1]);
            hi_y = hi_y.max(v[1]);
        }
        let i0 = (lo_x / h).floor() as i64 - 2;
        let i1 = (hi_x / h).ceil() as i64 + 2;
        let j0 = (lo_y / h).floor() as i64 - 2;
        let j1 = (hi_y / h).ceil() as i64 + 2;

        let mut inside = HashMap::new();
        for i in i0..=i1 {
            for j in j0..=j1 {
                if strictly_inside([i as f64 * h, j as f64 * h], polygon) {
                    inside.insert((i, j), ());
                }
            }
        }
        if inside.is_empty() {
            return Err(Error::geometry("resolution too coarse: no interior cells"));
        }
        let mut boundary = HashMap::new();
        for &(i, j) in inside.keys() {
            for (di, dj) in [(1i64, 0i64), (-1, 0), (0, 1), (0, -1)] {
                let nb = (i + di, j + dj);
                if !inside.contains_key(&nb) {
                    boundary.insert(nb, ());
                }
            }
        }

        // ids anchored to the local bounding box so that translated or
        // integer-rescaled discretizations produce the identical graph
        let min_i = inside
            .keys()
            .chain(boundary.keys())
            .map(|&(i, _)| i)
            .min()
            .unwrap();
        let min_j = inside
            .keys()
            .chain(boundary.keys())
            .map(|&(_, j)| j)
            .min()
            .unwrap();
        let id_of = |i: i64, j: i64| format!("g{:04}_{:04}", i - min_i, j - min_j);

        let mut cells: HashMap<String, (i64, i64)> = HashMap::new();
        let mut vertices: Vec<String> = Vec::new();
        for &(i, j) in inside.keys().chain(boundary.keys()) {
            let id = id_of(i, j);
            vertices.push(id.clone());
            cells.insert(id, (i, j));
        }
        vertices.sort();
        let mut edges: Vec<(String, String, T)> = Vec::new();
        for &(i, j) in inside.keys() {
            // each interior cell emits its 4 stencil edges; edges between
            // two interior cells are emitted once (toward +x / +y)
            for (di, dj) in [(1i64, 0i64), (-1, 0), (0, 1), (0, -1)] {
                let nb = (i + di, j + dj);
                let emit = if inside.contains_key(&nb) {
                    di > 0 || dj > 0
                } else {
                    true
                };
                if emit {
                    edges.push((id_of(i, j), id_of(nb.0, nb.1), T::one()));
                }
            }
        }
        edges.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
        let graph = WeightedGraph::new(vertices, &edges)?;

        let interior_ids: Vec<String> = {
            let mut v: Vec<String> = inside.keys().map(|&(i, j)| id_of(i, j)).collect();
            v.sort();
            v
        };
        let interior_idx: Vec<usize> = interior_ids
            .iter()
            .map(|id| graph.index_of(id).unwrap())
            .collect();
        let domain = Subdomain::from_indices(&graph, interior_idx)?;
        if domain.components().len() != 1 {
            return Err(Error::geometry(format!(
                "resolution too coarse: interior splits into {} components",
                domain.components().len()
            )));
        }

        let oi = (origin[0] / h).round() as i64;
        let oj = (origin[1] / h).round() as i64;
        let origin_id = id_of(oi, oj);
        if !inside.contains_key(&(oi, oj)) {
            return Err(Error::geometry("resolution too coarse: origin cell is not interior"));
        }

        let lipschitz = lipschitz_constant(origin, polygon);
        Ok(Self {
            h,
            origin,
            polygon: polygon.to_vec(),
            lipschitz,
            s: 2.0 * lipschitz,
            graph,
            domain,
            cells,
            origin_id,
        })
    }

    pub fn graph(&self) -> &WeightedGraph<T> {
        &self.graph
    }

    pub fn domain(&self) -> &Subdomain {
        &self.domain
    }

    pub fn origin_id(&self) -> &str {
        &self.origin_id
    }

    pub fn interior_ids(&self) -> Vec<&str> {
        self.domain.interior().iter().map(|&i| self.graph.id(i)).collect()
    }

    pub fn boundary_ids(&self) -> Vec<&str> {
        self.domain.boundary().iter().map(|&i| self.graph.id(i)).collect()
    }

    pub fn num_interior(&self) -> usize {
        self.domain.interior().len()
    }

    /// Continuum position of a cell center.
    pub fn pos(&self, id: &str) -> Result<[f64; 2]> {
        let &(i, j) = self
            .cells
            .get(id)
            .ok_or_else(|| Error::input(format!("unknown cell '{id}'")))?;
        Ok([i as f64 * self.h, j as f64 * self.h])
    }

    /// Maximum distance between polygon vertices.
    pub fn diameter(&self) -> f64 {
        let n = self.polygon.len();
        let mut d: f64 = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                d = d.max(norm(sub(self.polygon[i], self.polygon[j])));
            }
        }
        d
    }

    /// Dyadic radii `diam * 2^-k` for `k = 2 ..= log2(diam / 4h)`.
    pub fn radii_grid(&self) -> Vec<f64> {
        let diam = self.diameter();
        let kmax = (diam / (4.0 * self.h)).log2().floor() as i32;
        (2..=kmax.max(2)).map(|k| diam * 0.5f64.powi(k)).collect()
    }

    fn in_cylinder(&self, z: [f64; 2], p: [f64; 2], axis: [f64; 2], r: f64) -> bool {
        let d = sub(z, p);
        let along = dot(d, axis);
        let across = d[0] * (-axis[1]) + d[1] * axis[0];
        across.abs() < r && along.abs() < self.s * r / 2.0
    }

    fn axis_of(&self, p: [f64; 2]) -> Result<[f64; 2]> {
        let d = sub(p, self.origin);
        let len = norm(d);
        if len < 1e-12 {
            return Err(Error::geometry("cylinder center coincides with the origin"));
        }
        Ok([d[0] / len, d[1] / len])
    }

    /// Boundary cells inside the cylinder `C(P, r)`.
    pub fn surface_ball(&self, center_id: &str, r: f64) -> Result<BoundaryBall> {
        let p = self.pos(center_id)?;
        let idx = self.graph.index_of(center_id).unwrap();
        if !self.domain.contains_boundary(idx) {
            return Err(Error::input(format!("'{center_id}' is not a boundary cell")));
        }
        let axis = self.axis_of(p)?;
        let mut cells = Vec::new();
        for &b in self.domain.boundary() {
            let id = self.graph.id(b);
            if self.in_cylinder(self.pos(id)?, p, axis, r) {
                cells.push(id.to_string());
            }
        }
        if !cells.iter().any(|c| c == center_id) {
            return Err(Error::geometry(format!(
                "surface ball at '{center_id}' does not contain its center"
            )));
        }
        Ok(BoundaryBall {
            center_id: center_id.to_string(),
            radius: r,
            cells,
        })
    }

    /// Interior cells inside the cylinder `C(P, r)`.
    pub fn cylinder_interior(&self, center_id: &str, r: f64) -> Result<Vec<String>> {
        let p = self.pos(center_id)?;
        let axis = self.axis_of(p)?;
        let mut cells = Vec::new();
        for &x in self.domain.interior() {
            let id = self.graph.id(x);
            if self.in_cylinder(self.pos(id)?, p, axis, r) {
                cells.push(id.to_string());
            }
        }
        Ok(cells)
    }

    /// The cylinder at `P` with its corkscrew cell: the interior cell nearest
    /// the inner end of the axis, stepped inward if that point rounds outside.
    pub fn cylinder(&self, center_id: &str, r: f64) -> Result<Cylinder> {
        let p = self.pos(center_id)?;
        let axis = self.axis_of(p)?;
        let max_steps = (r / self.h).ceil() as usize + 1;
        let mut t = self.s * r / 2.0;
        let mut corkscrew = None;
        for _ in 0..=max_steps {
            let z = [p[0] - t * axis[0], p[1] - t * axis[1]];
            let (ci, cj) = ((z[0] / self.h).round() as i64, (z[1] / self.h).round() as i64);
            if let Some(id) = self
                .cells
                .iter()
                .find(|(_, &c)| c == (ci, cj))
                .map(|(id, _)| id.clone())
            {
                let idx = self.graph.index_of(&id).unwrap();
                if self.domain.contains_interior(idx) {
                    corkscrew = Some(id);
                    break;
                }
            }
            t += self.h;
        }
        let corkscrew = corkscrew.ok_or_else(|| {
            Error::geometry(format!(
                "no interior corkscrew cell found for cylinder at '{center_id}' radius {r}"
            ))
        })?;
        let tp = self.pos(&corkscrew)?;
        let mut dist = f64::INFINITY;
        for &b in self.domain.boundary() {
            dist = dist.min(norm(sub(tp, self.pos(self.graph.id(b))?)));
        }
        Ok(Cylinder {
            center_id: center_id.to_string(),
            center: p,
            radius: r,
            s: self.s,
            axis,
            corkscrew,
            clearance: dist / r,
        })
    }

    /// Angle of a cell around the origin, for boundary-arc bookkeeping.
    pub fn angle_of(&self, id: &str) -> Result<f64> {
        let p = self.pos(id)?;
        let d = sub(p, self.origin);
        Ok(d[1].atan2(d[0]))
    }
}

/// Kernel of the unit-weight grid graph.
pub fn lattice_kernel<T: Real>(dom: &LatticeDomain<T>) -> Result<HarmonicKernel<T>> {
    harmonic_kernel(dom.graph(), dom.domain())
}

/// omega_O masses of 8 equal angular boundary sectors around the origin.
pub fn sector_masses<T: Real>(dom: &LatticeDomain<T>, k: &HarmonicKernel<T>) -> Result<Vec<f64>> {
    let row = k
        .row_of(dom.origin_id())
        .ok_or_else(|| Error::Inconsistency("origin is not an interior row".into()))?;
    let mut masses = vec![0.0; 8];
    for (col, q) in k.boundary_ids().iter().enumerate() {
        let ang = dom.angle_of(q)?;
        // half-bin offset keeps axis- and diagonal-aligned cells away from
        // bin edges, so opposite cells always land exactly 4 sectors apart
        let sector = ((((ang + std::f64::consts::PI) / (2.0 * std::f64::consts::PI) * 8.0 + 0.5)
            .floor() as usize)
            % 8)
            .min(7);
        masses[sector] += k.entry(row, col).to_f64_lossy();
    }
    Ok(masses)
}

/// Translation and scaling invariance of the discretization.
///
/// Shifting the shape by a grid vector, or scaling shape and spacing by the
/// same integer, must reproduce the kernel bit for bit. Scaling the shape at
/// fixed spacing is only approximate: the angular-sector masses at the origin
/// are compared and the defect reported (informational witness).
pub fn verify_tsci<T: Real>(
    dom: &LatticeDomain<T>,
    shift: (i64, i64),
    scale: i64,
) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new("tsci", 0.0);
    let base_csv = lattice_kernel(dom)?.to_csv();

    let dx = shift.0 as f64 * dom.h;
    let dy = shift.1 as f64 * dom.h;
    let shifted: Vec<[f64; 2]> = dom.polygon.iter().map(|v| [v[0] + dx, v[1] + dy]).collect();
    let dom_t = LatticeDomain::<T>::discretize(
        &shifted,
        [dom.origin[0] + dx, dom.origin[1] + dy],
        dom.h,
    )?;
    if lattice_kernel(&dom_t)?.to_csv() != base_csv {
        rep.fail(
            format!("translated kernel differs at shift ({}, {})", shift.0, shift.1),
            f64::NAN,
        );
    }

    if scale > 1 {
        let kf = scale as f64;
        let scaled: Vec<[f64; 2]> = dom.polygon.iter().map(|v| [v[0] * kf, v[1] * kf]).collect();
        let dom_s = LatticeDomain::<T>::discretize(
            &scaled,
            [dom.origin[0] * kf, dom.origin[1] * kf],
            dom.h * kf,
        )?;
        if lattice_kernel(&dom_s)?.to_csv() != base_csv {
            rep.fail(format!("matched-scaling kernel differs at factor {scale}"), f64::NAN);
        }

        // fixed-spacing rescale: compare angular mass profile at the origin
        let dom_f = LatticeDomain::<T>::discretize(
            &scaled,
            [dom.origin[0] * kf, dom.origin[1] * kf],
            dom.h,
        )?;
        let a = sector_masses(dom, &lattice_kernel(dom)?)?;
        let b = sector_masses(&dom_f, &lattice_kernel(&dom_f)?)?;
        let defect = a
            .iter()
            .zip(&b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0f64, f64::max);
        rep.note(
            format!("fixed-spacing rescale sector-mass defect at factor {scale}"),
            defect,
        );
    }
    Ok(rep)
}

/// Minimum boundary-ball mass seen from inside the half-radius cylinder:
/// `delta = min omega_x(ball(P, r))` over sampled boundary centers `P`,
/// radii `r`, and interior `x` in `C(P, r/2)`.
pub fn estimate_delta<T: Real>(
    dom: &LatticeDomain<T>,
    k: &HarmonicKernel<T>,
    radii: &[f64],
    probes: usize,
) -> Result<(f64, String)> {
    if radii.is_empty() {
        return Err(Error::input("empty radii list"));
    }
    let diam = dom.diameter();
    for &r in radii {
        if !(r > 0.0) || r >= diam {
            return Err(Error::input(format!("radius {r} outside (0, diam)")));
        }
    }
    let boundary = dom.boundary_ids();
    let step = (boundary.len() / probes.max(1)).max(1);
    let mut delta = f64::INFINITY;
    let mut witness = String::new();
    for p in boundary.iter().step_by(step) {
        for &r in radii {
            let ball = dom.surface_ball(p, r)?;
            let cols: Vec<usize> = ball
                .cells
                .iter()
                .map(|q| k.col_of(q).expect("ball cells are boundary cells"))
                .collect();
            for x in dom.cylinder_interior(p, r / 2.0)? {
                let row = k.row_of(&x).expect("cylinder cells are interior");
                let mass = k.mass(row, &cols).to_f64_lossy();
                if mass < delta {
                    delta = mass;
                    witness = format!("x='{x}', P='{p}', r={r:.6}");
                }
            }
        }
    }
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::Inconsistency(format!(
            "boundary-ball mass bound is not positive: {delta} ({witness})"
        )));
    }
    Ok((delta, witness))
}

/// `K[p][q] / K[O][q]` — the kernel normalized at the origin.
pub fn kernel_ratio<T: Real>(
    k: &HarmonicKernel<T>,
    p: &str,
    q: &str,
    origin: &str,
) -> Result<T> {
    let num = k.get(p, q)?;
    let den = k.get(origin, q)?;
    if !(den > T::zero()) {
        return Err(Error::Inconsistency(format!(
            "zero origin mass at boundary cell '{q}'"
        )));
    }
    Ok(num / den)
}

/// Nontangential-cone bound at a boundary cell: the supremum of
/// `omega_x(f)` over the discrete cone of aperture `aperture` (radians
/// around the inward ray Q -> O) against the maximal average `f*(Q)`.
/// Returns (sup, f_star, ratio).
pub fn nontangential_bound_check<T: Real>(
    dom: &LatticeDomain<T>,
    k: &HarmonicKernel<T>,
    q: &str,
    aperture: f64,
    f: &crate::dirichlet::BoundaryData<T>,
    radii: &[f64],
) -> Result<(f64, f64, f64)> {
    let qp = dom.pos(q)?;
    let inward = {
        let d = sub(dom.origin, qp);
        let len = norm(d);
        [d[0] / len, d[1] / len]
    };
    let mut sup = f64::NEG_INFINITY;
    for x in dom.interior_ids() {
        let d = sub(dom.pos(x)?, qp);
        let len = norm(d);
        if len < 1e-12 {
            continue;
        }
        let cosang = dot(d, inward) / len;
        if cosang >= aperture.cos() {
            let v = crate::dirichlet::evaluate_measure(k, x, f)?.to_f64_lossy();
            sup = sup.max(v);
        }
    }
    if !sup.is_finite() {
        return Err(Error::geometry(format!("empty cone at '{q}' with aperture {aperture}")));
    }
    let f_star = crate::dahlberg::maximal_function(dom, k, f, q, radii)?.to_f64_lossy();
    let ratio = if f_star.abs() > 0.0 { sup / f_star } else { f64::INFINITY };
    Ok((sup, f_star, ratio))
}
