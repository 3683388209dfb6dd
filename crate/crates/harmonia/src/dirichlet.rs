//! Exact solution of the Dirichlet problem on weighted graphs and assembly
//! of the full harmonic kernel.
//!
//! For an interior vertex set whose every component touches its relative
//! boundary, the Dirichlet system matrix is symmetric positive definite, so
//! each component is solved by one Cholesky factorization shared across all
//! right-hand sides (conjugate gradients above [`crate::solver::DENSE_LIMIT`]
//! interior vertices). Disconnected interiors are solved per component and
//! kernel entries across components are exactly zero.

use std::collections::HashMap;
use std::io::Write;

use rayon::prelude::*;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::graph::{Subdomain, SubdivisionSpec, WeightedGraph};
use crate::num::Real;
use crate::solver::{conjugate_gradient, DenseCholesky, CG_TOL, DENSE_LIMIT};

/// Boundary data f : B -> R, keyed by vertex identifier.
#[derive(Debug, Clone, Default)]
pub struct BoundaryData<T> {
    pub values: HashMap<String, T>,
}

impl<T: Real> BoundaryData<T> {
    pub fn new(values: HashMap<String, T>) -> Self {
        Self { values }
    }

    pub fn from_pairs(pairs: &[(&str, T)]) -> Self {
        Self {
            values: pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }

    /// Indicator of a single boundary atom over the given boundary.
    pub fn indicator(atom: &str, boundary_ids: &[String]) -> Self {
        Self {
            values: boundary_ids
                .iter()
                .map(|q| (q.clone(), if q == atom { T::one() } else { T::zero() }))
                .collect(),
        }
    }

    /// Constant data over the given boundary.
    pub fn constant(c: T, boundary_ids: &[String]) -> Self {
        Self {
            values: boundary_ids.iter().map(|q| (q.clone(), c)).collect(),
        }
    }

    /// Parse `{ "values": { id: number, ... } }`.
    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct File {
            values: HashMap<String, f64>,
        }
        let file: File = serde_json::from_str(text)?;
        Ok(Self {
            values: file.values.into_iter().map(|(k, v)| (k, T::of(v))).collect(),
        })
    }

    pub fn get(&self, id: &str) -> Result<T> {
        self.values
            .get(id)
            .copied()
            .ok_or_else(|| Error::input(format!("boundary data missing at '{id}'")))
    }

    pub fn max_abs(&self) -> T {
        self.values
            .values()
            .fold(T::zero(), |m, &v| m.max(v.abs()))
    }
}

enum Backend<T> {
    Dense(DenseCholesky<T>),
    /// Sparse operator rows: diagonal entry plus (column, -weight) couplings.
    Cg { diag: Vec<T>, off: Vec<Vec<(usize, T)>> },
}

/// Solver for one connected interior component.
struct ComponentSolver<T> {
    /// graph indices of the component interior, sorted (row order)
    members: Vec<usize>,
    /// per row: (boundary graph index, coupling weight)
    coupling: Vec<Vec<(usize, T)>>,
    backend: Backend<T>,
}

impl<T: Real> ComponentSolver<T> {
    fn build(g: &WeightedGraph<T>, members: &[usize], in_interior: impl Fn(usize) -> bool) -> Result<Self> {
        let n = members.len();
        let pos: HashMap<usize, usize> = members.iter().enumerate().map(|(r, &v)| (v, r)).collect();
        let mut coupling: Vec<Vec<(usize, T)>> = vec![Vec::new(); n];
        let mut diag = vec![T::zero(); n];
        let mut off: Vec<Vec<(usize, T)>> = vec![Vec::new(); n];
        for (row, &v) in members.iter().enumerate() {
            for &(w, mu) in g.neighbors(v) {
                diag[row] += mu;
                if in_interior(w) {
                    if let Some(&col) = pos.get(&w) {
                        off[row].push((col, mu));
                    }
                    // interior neighbor in another component cannot happen:
                    // an interior-interior edge keeps both ends in one block
                } else {
                    coupling[row].push((w, mu));
                }
            }
        }
        let backend = if n <= DENSE_LIMIT {
            let mut a = vec![T::zero(); n * n];
            for row in 0..n {
                a[row * n + row] = diag[row];
                for &(col, mu) in &off[row] {
                    a[row * n + col] = -mu;
                }
            }
            Backend::Dense(DenseCholesky::factor(&a, n)?)
        } else {
            Backend::Cg { diag, off }
        };
        Ok(Self {
            members: members.to_vec(),
            coupling,
            backend,
        })
    }

    fn solve(&self, rhs: &[T]) -> Result<Vec<T>> {
        match &self.backend {
            Backend::Dense(chol) => Ok(chol.solve(rhs)),
            Backend::Cg { diag, off } => conjugate_gradient(
                |p, out| {
                    for i in 0..p.len() {
                        let mut s = diag[i] * p[i];
                        for &(j, mu) in &off[i] {
                            s = s - mu * p[j];
                        }
                        out[i] = s;
                    }
                },
                rhs,
                T::of(CG_TOL),
                10 * rhs.len().max(100),
            ),
        }
    }

    fn rhs_from<F: Fn(usize) -> Result<T>>(&self, f: F) -> Result<Vec<T>> {
        self.coupling
            .iter()
            .map(|row| {
                let mut s = T::zero();
                for &(b, mu) in row {
                    s += mu * f(b)?;
                }
                Ok(s)
            })
            .collect()
    }
}

/// The assembled Dirichlet system over the full interior: the symmetric
/// matrix `A` in fixed (sorted-identifier) interior order, the couplings
/// into the relative boundary, and the right-hand-side builder.
#[derive(Debug, Clone)]
pub struct DirichletSystem<T> {
    interior: Vec<usize>,
    matrix: Vec<T>,
    coupling: Vec<Vec<(usize, T)>>,
}

impl<T: Real> DirichletSystem<T> {
    pub fn order(&self) -> &[usize] {
        &self.interior
    }

    /// Dense row-major matrix over the whole interior (block diagonal across
    /// components).
    pub fn matrix(&self) -> &[T] {
        &self.matrix
    }

    /// Coupling weights (boundary graph index, weight) per interior row.
    pub fn coupling(&self) -> &[Vec<(usize, T)>] {
        &self.coupling
    }

    /// Right-hand side y with y_i = sum over boundary neighbors of
    /// mu(x_i, y) f(y).
    pub fn rhs_with(&self, g: &WeightedGraph<T>, f: &BoundaryData<T>) -> Result<Vec<T>> {
        self.coupling
            .iter()
            .map(|row| {
                let mut s = T::zero();
                for &(b, mu) in row {
                    s += mu * f.get(g.id(b))?;
                }
                Ok(s)
            })
            .collect()
    }
}

/// Assemble the Dirichlet matrix and boundary couplings for `(g, d)`.
/// Errors with [`Error::NoBoundary`] when a component's relative boundary is
/// empty (the existence/uniqueness hypothesis fails there).
pub fn assemble_system<T: Real>(g: &WeightedGraph<T>, d: &Subdomain) -> Result<DirichletSystem<T>> {
    ensure_boundaries(g, d)?;
    let interior = d.interior().to_vec();
    let n = interior.len();
    if n == 0 {
        return Err(Error::input("interior is empty"));
    }
    let pos: HashMap<usize, usize> = interior.iter().enumerate().map(|(r, &v)| (v, r)).collect();
    let mut matrix = vec![T::zero(); n * n];
    let mut coupling: Vec<Vec<(usize, T)>> = vec![Vec::new(); n];
    for (row, &v) in interior.iter().enumerate() {
        let mut diag = T::zero();
        for &(w, mu) in g.neighbors(v) {
            diag += mu;
            if d.contains_interior(w) {
                matrix[row * n + pos[&w]] = -mu;
            } else {
                coupling[row].push((w, mu));
            }
        }
        matrix[row * n + row] = diag;
    }
    Ok(DirichletSystem {
        interior,
        matrix,
        coupling,
    })
}

fn ensure_boundaries<T: Real>(g: &WeightedGraph<T>, d: &Subdomain) -> Result<()> {
    for c in d.components() {
        if c.boundary.is_empty() {
            return Err(Error::NoBoundary {
                vertex: g.id(c.interior[0]).to_string(),
            });
        }
    }
    Ok(())
}

/// Solve the Dirichlet problem: returns `u` on the closure with `u = f` on
/// the relative boundary and zero Laplacian at every interior vertex.
pub fn solve_dirichlet<T: Real>(
    g: &WeightedGraph<T>,
    d: &Subdomain,
    f: &BoundaryData<T>,
) -> Result<HashMap<String, T>> {
    ensure_boundaries(g, d)?;
    if d.interior().is_empty() {
        return Err(Error::input("interior is empty"));
    }
    let mut u: HashMap<String, T> = HashMap::new();
    for &b in d.boundary() {
        u.insert(g.id(b).to_string(), f.get(g.id(b))?);
    }
    for comp in d.components() {
        let solver = ComponentSolver::build(g, &comp.interior, |w| d.contains_interior(w))?;
        let rhs = solver.rhs_from(|b| f.get(g.id(b)))?;
        let x = solver.solve(&rhs)?;
        for (row, &v) in solver.members.iter().enumerate() {
            u.insert(g.id(v).to_string(), x[row]);
        }
    }
    Ok(u)
}

/// The harmonic kernel: for every interior vertex x the probability vector
/// over its component's boundary atoms. Entries across components are
/// exactly zero.
#[derive(Debug, Clone)]
pub struct HarmonicKernel<T> {
    interior_ids: Vec<String>,
    boundary_ids: Vec<String>,
    interior_index: HashMap<String, usize>,
    boundary_index: HashMap<String, usize>,
    entries: Vec<T>,
    row_component: Vec<usize>,
    comp_boundary_cols: Vec<Vec<usize>>,
}

impl<T: Real> HarmonicKernel<T> {
    pub fn interior_ids(&self) -> &[String] {
        &self.interior_ids
    }

    pub fn boundary_ids(&self) -> &[String] {
        &self.boundary_ids
    }

    pub fn num_components(&self) -> usize {
        self.comp_boundary_cols.len()
    }

    pub fn row_of(&self, x: &str) -> Option<usize> {
        self.interior_index.get(x).copied()
    }

    pub fn col_of(&self, q: &str) -> Option<usize> {
        self.boundary_index.get(q).copied()
    }

    pub fn is_boundary(&self, id: &str) -> bool {
        self.boundary_index.contains_key(id)
    }

    pub fn entry(&self, row: usize, col: usize) -> T {
        self.entries[row * self.boundary_ids.len() + col]
    }

    pub fn row(&self, row: usize) -> &[T] {
        let w = self.boundary_ids.len();
        &self.entries[row * w..(row + 1) * w]
    }

    /// K[x][q] by identifier.
    pub fn get(&self, x: &str, q: &str) -> Result<T> {
        let row = self
            .row_of(x)
            .ok_or_else(|| Error::input(format!("'{x}' is not an interior vertex of this kernel")))?;
        let col = self
            .col_of(q)
            .ok_or_else(|| Error::input(format!("'{q}' is not a boundary vertex of this kernel")))?;
        Ok(self.entry(row, col))
    }

    pub fn component_of_row(&self, row: usize) -> usize {
        self.row_component[row]
    }

    /// Columns carrying the boundary of a given component, sorted.
    pub fn component_cols(&self, comp: usize) -> &[usize] {
        &self.comp_boundary_cols[comp]
    }

    /// omega_x(A) for a set of boundary atoms given as column indices.
    pub fn mass(&self, row: usize, cols: &[usize]) -> T {
        cols.iter().map(|&c| self.entry(row, c)).sum()
    }

    /// Additively perturb one entry; used by fault-injection tests to check
    /// the verifiers actually detect broken kernels.
    pub fn with_perturbed_entry(&self, row: usize, col: usize, delta: T) -> Self {
        let mut k = self.clone();
        k.entries[row * self.boundary_ids.len() + col] += delta;
        k
    }

    /// Replace all entries (same shape/structure), used when loading a dump.
    pub fn with_entries(&self, entries: Vec<T>) -> Result<Self> {
        if entries.len() != self.entries.len() {
            return Err(Error::input("kernel entry count mismatch"));
        }
        let mut k = self.clone();
        k.entries = entries;
        Ok(k)
    }

    /// CSV dump: header row of boundary ids, then one row per interior
    /// vertex, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str("interior");
        for q in &self.boundary_ids {
            out.push(',');
            out.push_str(q);
        }
        out.push('\n');
        for (row, x) in self.interior_ids.iter().enumerate() {
            out.push_str(x);
            for col in 0..self.boundary_ids.len() {
                out.push(',');
                out.push_str(&format!("{:.16e}", self.entry(row, col).to_f64_lossy()));
            }
            out.push('\n');
        }
        out
    }

    /// Read entries back from a dump produced by [`Self::to_csv`] for the
    /// same (graph, domain) pair.
    pub fn entries_from_csv(&self, text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty kernel csv".into()))?;
        let cols: Vec<&str> = header.split(',').skip(1).collect();
        if cols != self.boundary_ids.iter().map(|s| s.as_str()).collect::<Vec<_>>() {
            return Err(Error::Parse("kernel csv boundary header mismatch".into()));
        }
        let mut entries = vec![T::zero(); self.entries.len()];
        let width = self.boundary_ids.len();
        let mut seen = 0usize;
        for line in lines {
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split(',');
            let x = parts.next().unwrap();
            let row = self
                .row_of(x)
                .ok_or_else(|| Error::Parse(format!("unknown interior id '{x}' in kernel csv")))?;
            for (col, v) in parts.enumerate() {
                let v: f64 = v
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad number '{v}' in kernel csv")))?;
                entries[row * width + col] = T::of(v);
            }
            seen += 1;
        }
        if seen != self.interior_ids.len() {
            return Err(Error::Parse("kernel csv row count mismatch".into()));
        }
        self.with_entries(entries)
    }

    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        w.write_all(self.to_csv().as_bytes())?;
        Ok(())
    }
}

/// Compute the harmonic kernel of `(g, d)`: one factorization per component,
/// one solve per boundary atom, columns in parallel.
pub fn harmonic_kernel<T: Real>(g: &WeightedGraph<T>, d: &Subdomain) -> Result<HarmonicKernel<T>> {
    ensure_boundaries(g, d)?;
    if d.interior().is_empty() {
        return Err(Error::input("interior is empty"));
    }
    let interior_ids: Vec<String> = d.interior().iter().map(|&i| g.id(i).to_string()).collect();
    let boundary_ids: Vec<String> = d.boundary().iter().map(|&i| g.id(i).to_string()).collect();
    let interior_index: HashMap<String, usize> = interior_ids
        .iter()
        .enumerate()
        .map(|(r, s)| (s.clone(), r))
        .collect();
    let boundary_index: HashMap<String, usize> = boundary_ids
        .iter()
        .enumerate()
        .map(|(c, s)| (s.clone(), c))
        .collect();
    let row_of_graph: HashMap<usize, usize> = d
        .interior()
        .iter()
        .enumerate()
        .map(|(r, &v)| (v, r))
        .collect();
    let col_of_graph: HashMap<usize, usize> = d
        .boundary()
        .iter()
        .enumerate()
        .map(|(c, &v)| (v, c))
        .collect();

    let width = boundary_ids.len();
    let mut entries = vec![T::zero(); interior_ids.len() * width];
    let mut row_component = vec![0usize; interior_ids.len()];
    let mut comp_boundary_cols = Vec::new();

    for (cid, comp) in d.components().iter().enumerate() {
        for &v in &comp.interior {
            row_component[row_of_graph[&v]] = cid;
        }
        let cols: Vec<usize> = comp.boundary.iter().map(|&b| col_of_graph[&b]).collect();
        comp_boundary_cols.push(cols);

        let solver = ComponentSolver::build(g, &comp.interior, |w| d.contains_interior(w))?;
        let columns: Vec<(usize, Vec<T>)> = comp
            .boundary
            .par_iter()
            .map(|&atom| {
                let rhs: Vec<T> = solver
                    .coupling
                    .iter()
                    .map(|row| {
                        let mut s = T::zero();
                        for &(b, mu) in row {
                            if b == atom {
                                s += mu;
                            }
                        }
                        s
                    })
                    .collect();
                solver.solve(&rhs).map(|x| (col_of_graph[&atom], x))
            })
            .collect::<Result<_>>()?;
        for (col, x) in columns {
            for (crow, &v) in solver.members.iter().enumerate() {
                entries[row_of_graph[&v] * width + col] = x[crow];
            }
        }
    }

    Ok(HarmonicKernel {
        interior_ids,
        boundary_ids,
        interior_index,
        boundary_index,
        entries,
        row_component,
        comp_boundary_cols,
    })
}

/// omega_x(f) as a finite sum against the kernel row of `x`; boundary
/// vertices evaluate to `f` itself.
pub fn evaluate_measure<T: Real>(k: &HarmonicKernel<T>, x: &str, f: &BoundaryData<T>) -> Result<T> {
    if k.is_boundary(x) {
        return f.get(x);
    }
    let row = k
        .row_of(x)
        .ok_or_else(|| Error::input(format!("'{x}' is neither interior nor boundary")))?;
    let comp = k.component_of_row(row);
    let mut s = T::zero();
    for &col in k.component_cols(comp) {
        s += k.entry(row, col) * f.get(&k.boundary_ids()[col])?;
    }
    Ok(s)
}

/// Affine value at an edge point: `(1-lambda) u(x1) + lambda u(x2)`.
pub fn interpolate_on_edge<T: Real>(
    u: &HashMap<String, T>,
    spec: &SubdivisionSpec<T>,
) -> Result<T> {
    if !(spec.lambda >= T::zero() && spec.lambda <= T::one()) {
        return Err(Error::input(format!("lambda must lie in [0,1], got {}", spec.lambda)));
    }
    let u1 = *u
        .get(&spec.x1)
        .ok_or_else(|| Error::input(format!("u is not defined at '{}'", spec.x1)))?;
    let u2 = *u
        .get(&spec.x2)
        .ok_or_else(|| Error::input(format!("u is not defined at '{}'", spec.x2)))?;
    Ok((T::one() - spec.lambda) * u1 + spec.lambda * u2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path5() -> (WeightedGraph<f64>, Subdomain) {
        let g = WeightedGraph::<f64>::from_edges(&[
            ("b0", "x1", 1.0),
            ("x1", "x2", 1.0),
            ("x2", "x3", 1.0),
            ("x3", "b4", 1.0),
        ])
        .unwrap();
        let d = Subdomain::new(&g, &["x1", "x2", "x3"]).unwrap();
        (g, d)
    }

    #[test]
    fn assemble_single_interior_vertex() {
        let g = WeightedGraph::<f64>::from_edges(&[("a", "b", 1.0), ("b", "c", 1.0)]).unwrap();
        let d = Subdomain::new(&g, &["b"]).unwrap();
        let sys = assemble_system(&g, &d).unwrap();
        assert_eq!(sys.matrix(), &[2.0]);
        let f = BoundaryData::from_pairs(&[("a", 3.0), ("c", 5.0)]);
        assert_eq!(sys.rhs_with(&g, &f).unwrap(), vec![8.0]);
    }

    #[test]
    fn assemble_path_tridiagonal() {
        let (g, d) = path5();
        let sys = assemble_system(&g, &d).unwrap();
        let a = sys.matrix();
        let expect = [2.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 2.0];
        for (x, y) in a.iter().zip(expect) {
            assert_eq!(*x, y);
        }
        // symmetry holds bit-exactly
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(a[i * 3 + j].to_bits(), a[j * 3 + i].to_bits());
            }
        }
    }

    #[test]
    fn assemble_rejects_isolated_interior() {
        let g = WeightedGraph::<f64>::new(vec!["a".into(), "b".into(), "c".into()], &[("b".to_string(), "c".to_string(), 1.0)]).unwrap();
        let d = Subdomain::new(&g, &["a"]).unwrap();
        match assemble_system(&g, &d) {
            Err(Error::NoBoundary { vertex }) => assert_eq!(vertex, "a"),
            other => panic!("expected NoBoundary, got {other:?}"),
        }
    }

    #[test]
    fn solve_symmetric_path() {
        let g = WeightedGraph::<f64>::from_edges(&[("a", "b", 1.0), ("b", "c", 1.0)]).unwrap();
        let d = Subdomain::new(&g, &["b"]).unwrap();
        let f = BoundaryData::from_pairs(&[("a", 0.0), ("c", 1.0)]);
        let u = solve_dirichlet(&g, &d, &f).unwrap();
        assert!((u["b"] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn solve_gamblers_ruin() {
        let (g, d) = path5();
        let f = BoundaryData::from_pairs(&[("b0", 0.0), ("b4", 1.0)]);
        let u = solve_dirichlet(&g, &d, &f).unwrap();
        for (i, x) in ["x1", "x2", "x3"].iter().enumerate() {
            assert!((u[*x] - (i as f64 + 1.0) / 4.0).abs() < 1e-12);
        }
    }

    #[test]
    fn solve_constant_data() {
        let (g, d) = path5();
        let f = BoundaryData::from_pairs(&[("b0", 2.5), ("b4", 2.5)]);
        let u = solve_dirichlet(&g, &d, &f).unwrap();
        for v in u.values() {
            assert!((v - 2.5).abs() < 1e-12);
        }
    }

    #[test]
    fn kernel_single_vertex_is_normalized_weights() {
        let g = WeightedGraph::<f64>::from_edges(&[("x", "p", 2.0), ("x", "q", 3.0)]).unwrap();
        let d = Subdomain::new(&g, &["x"]).unwrap();
        let k = harmonic_kernel(&g, &d).unwrap();
        assert!((k.get("x", "p").unwrap() - 0.4).abs() < 1e-14);
        assert!((k.get("x", "q").unwrap() - 0.6).abs() < 1e-14);
    }

    #[test]
    fn kernel_path_matches_ruin_probabilities() {
        let (g, d) = path5();
        let k = harmonic_kernel(&g, &d).unwrap();
        for (i, x) in ["x1", "x2", "x3"].iter().enumerate() {
            let p = (i as f64 + 1.0) / 4.0;
            assert!((k.get(x, "b4").unwrap() - p).abs() < 1e-12);
            assert!((k.get(x, "b0").unwrap() - (1.0 - p)).abs() < 1e-12);
        }
    }

    #[test]
    fn kernel_two_components_has_exact_zeros() {
        let g = WeightedGraph::<f64>::from_edges(&[
            ("a", "b", 1.0),
            ("b", "c", 1.0),
            ("c", "d", 1.0),
            ("d", "e", 1.0),
        ])
        .unwrap();
        let d = Subdomain::new(&g, &["b", "d"]).unwrap();
        let k = harmonic_kernel(&g, &d).unwrap();
        // boundary of {b} is {a,c}; of {d} is {c,e}; c abuts both
        assert_eq!(k.get("b", "e").unwrap(), 0.0);
        assert_eq!(k.get("d", "a").unwrap(), 0.0);
        assert!((k.get("b", "a").unwrap() - 0.5).abs() < 1e-14);
        assert!((k.get("d", "e").unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn evaluate_measure_basics() {
        let (g, d) = path5();
        let k = harmonic_kernel(&g, &d).unwrap();
        let ones = BoundaryData::constant(1.0, &k.boundary_ids().to_vec());
        for x in ["x1", "x2", "x3"] {
            assert!((evaluate_measure(&k, x, &ones).unwrap() - 1.0).abs() < 1e-12);
        }
        let ind = BoundaryData::indicator("b4", &k.boundary_ids().to_vec());
        assert!(
            (evaluate_measure(&k, "x2", &ind).unwrap() - k.get("x2", "b4").unwrap()).abs()
                < 1e-15
        );
        // boundary convention: omega_y(f) = f(y)
        assert_eq!(evaluate_measure(&k, "b0", &ind).unwrap(), 0.0);
        assert_eq!(evaluate_measure(&k, "b4", &ind).unwrap(), 1.0);
    }

    #[test]
    fn interpolation_endpoints_and_interior() {
        let mut u = HashMap::new();
        u.insert("a".to_string(), 3.0);
        u.insert("b".to_string(), 0.0);
        let at = |l: f64| {
            interpolate_on_edge(&u, &SubdivisionSpec::new("a", "b", l, "m")).unwrap()
        };
        assert_eq!(at(0.0), 3.0);
        assert_eq!(at(1.0), 0.0);
        assert!((at(1.0 / 3.0) - 2.0).abs() < 1e-15);
        assert!((at(0.5) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn kernel_csv_round_trip() {
        let (g, d) = path5();
        let k = harmonic_kernel(&g, &d).unwrap();
        let csv = k.to_csv();
        let k2 = k.entries_from_csv(&csv).unwrap();
        for row in 0..3 {
            for col in 0..2 {
                assert_eq!(k.entry(row, col).to_bits(), k2.entry(row, col).to_bits());
            }
        }
    }
}
