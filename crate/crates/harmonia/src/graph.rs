//! Finite edge-weighted graphs, subdomains with their relative boundaries,
//! and the edge-subdivision construction.
//!
//! A graph is a finite vertex set with a symmetric nonnegative weight
//! function with zero diagonal; a positive weight is an edge. Vertex
//! identifiers are opaque strings; internally every graph fixes a dense
//! index order by sorting identifiers, so downstream matrix assembly is
//! reproducible run to run.

use std::collections::{HashMap, HashSet};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::num::Real;

/// Finite edge-weighted graph. Weights are stored once per unordered pair
/// and mirrored into both adjacency lists at construction time.
#[derive(Debug, Clone)]
pub struct WeightedGraph<T> {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    adj: Vec<Vec<(usize, T)>>,
}

impl<T: Real> WeightedGraph<T> {
    /// Build a graph from an explicit vertex list and undirected weighted
    /// edges. Rejects unknown endpoints, self-loops, nonpositive weights and
    /// duplicate unordered pairs.
    pub fn new(vertices: Vec<String>, edges: &[(String, String, T)]) -> Result<Self> {
        let mut ids = vertices;
        ids.sort();
        for w in ids.windows(2) {
            if w[0] == w[1] {
                return Err(Error::input(format!("duplicate vertex '{}'", w[0])));
            }
        }
        let index: HashMap<String, usize> =
            ids.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let mut adj: Vec<Vec<(usize, T)>> = vec![Vec::new(); ids.len()];
        let mut seen: HashSet<(usize, usize)> = HashSet::new();
        for (u, v, w) in edges {
            let ui = *index
                .get(u)
                .ok_or_else(|| Error::input(format!("unknown vertex '{u}' in edge list")))?;
            let vi = *index
                .get(v)
                .ok_or_else(|| Error::input(format!("unknown vertex '{v}' in edge list")))?;
            if ui == vi {
                return Err(Error::input(format!("self-loop at '{u}'")));
            }
            if !(*w > T::zero()) {
                return Err(Error::input(format!("edge ({u},{v}) has nonpositive weight {w}")));
            }
            let key = (ui.min(vi), ui.max(vi));
            if !seen.insert(key) {
                return Err(Error::input(format!("duplicate edge ({u},{v})")));
            }
            adj[ui].push((vi, *w));
            adj[vi].push((ui, *w));
        }
        for list in &mut adj {
            list.sort_by_key(|&(i, _)| i);
        }
        Ok(Self { ids, index, adj })
    }

    /// Convenience constructor: vertices are inferred from the edge list.
    pub fn from_edges(edges: &[(&str, &str, T)]) -> Result<Self> {
        let mut vertices: Vec<String> = Vec::new();
        let mut seen = HashSet::new();
        for (u, v, _) in edges {
            for id in [u, v] {
                if seen.insert(id.to_string()) {
                    vertices.push(id.to_string());
                }
            }
        }
        let owned: Vec<(String, String, T)> = edges
            .iter()
            .map(|(u, v, w)| (u.to_string(), v.to_string(), *w))
            .collect();
        Self::new(vertices, &owned)
    }

    /// Parse the on-disk graph format:
    /// `{ "vertices": [id...], "edges": [{"u": id, "v": id, "w": w}...] }`.
    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct EdgeSpec {
            u: String,
            v: String,
            w: f64,
        }
        #[derive(Deserialize)]
        struct GraphFile {
            vertices: Vec<String>,
            edges: Vec<EdgeSpec>,
        }
        let file: GraphFile = serde_json::from_str(text)?;
        let edges: Vec<(String, String, T)> = file
            .edges
            .into_iter()
            .map(|e| {
                if !e.w.is_finite() {
                    return Err(Error::input(format!("edge ({},{}) has non-finite weight", e.u, e.v)));
                }
                Ok((e.u, e.v, T::of(e.w)))
            })
            .collect::<Result<_>>()?;
        Self::new(file.vertices, &edges)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Vertex identifiers in index order (lexicographically sorted).
    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub(crate) fn require(&self, id: &str) -> Result<usize> {
        self.index_of(id)
            .ok_or_else(|| Error::input(format!("unknown vertex '{id}'")))
    }

    /// Neighbors of `i` with their (positive) weights, in index order.
    pub fn neighbors(&self, i: usize) -> &[(usize, T)] {
        &self.adj[i]
    }

    /// Weight between two vertices; zero when there is no edge.
    pub fn weight(&self, i: usize, j: usize) -> T {
        self.adj[i]
            .iter()
            .find(|&&(k, _)| k == j)
            .map(|&(_, w)| w)
            .unwrap_or_else(T::zero)
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.weight(i, j) > T::zero()
    }

    /// All edges as (smaller index, larger index, weight).
    pub fn edges(&self) -> Vec<(usize, usize, T)> {
        let mut out = Vec::new();
        for (i, list) in self.adj.iter().enumerate() {
            for &(j, w) in list {
                if i < j {
                    out.push((i, j, w));
                }
            }
        }
        out
    }

    /// Replace the edge of `spec` by two edges through a fresh vertex, with
    /// weights `a = mu/lambda`, `b = mu/(1-lambda)`. These are the closed
    /// forms of the two subdivision constraints: a/b = (1-lambda)/lambda and
    /// 1/a + 1/b = 1/mu.
    pub fn subdivide_edge(&self, spec: &SubdivisionSpec<T>) -> Result<WeightedGraph<T>> {
        let (x1, x2) = spec.validate(self)?;
        let mu = self.weight(x1, x2);
        // a couples x1 to the new vertex; a/(a+b) = 1-lambda is the harmonic
        // interpolation coefficient of u(x1).
        let a = mu / spec.lambda;
        let b = mu / spec.lambda_complement();
        let mut vertices = self.ids.clone();
        vertices.push(spec.new_vertex.clone());
        let mut edges: Vec<(String, String, T)> = Vec::new();
        for (i, j, w) in self.edges() {
            if (i, j) == (x1.min(x2), x1.max(x2)) {
                continue;
            }
            edges.push((self.ids[i].clone(), self.ids[j].clone(), w));
        }
        edges.push((self.ids[x1].clone(), spec.new_vertex.clone(), a));
        edges.push((spec.new_vertex.clone(), self.ids[x2].clone(), b));
        WeightedGraph::new(vertices, &edges)
    }
}

/// Request to split one edge at a normalized position `lambda` measured from
/// `x1` (the interpolated value at the new vertex is
/// `(1-lambda) u(x1) + lambda u(x2)`).
#[derive(Debug, Clone)]
pub struct SubdivisionSpec<T> {
    pub x1: String,
    pub x2: String,
    pub lambda: T,
    pub new_vertex: String,
}

impl<T: Real> SubdivisionSpec<T> {
    pub fn new(x1: impl Into<String>, x2: impl Into<String>, lambda: T, new_vertex: impl Into<String>) -> Self {
        Self {
            x1: x1.into(),
            x2: x2.into(),
            lambda,
            new_vertex: new_vertex.into(),
        }
    }

    fn lambda_complement(&self) -> T {
        T::one() - self.lambda
    }

    fn validate(&self, g: &WeightedGraph<T>) -> Result<(usize, usize)> {
        if !(self.lambda > T::zero() && self.lambda < T::one()) {
            return Err(Error::input(format!("lambda must lie in (0,1), got {}", self.lambda)));
        }
        let x1 = g.require(&self.x1)?;
        let x2 = g.require(&self.x2)?;
        if !g.has_edge(x1, x2) {
            return Err(Error::input(format!("({},{}) is not an edge", self.x1, self.x2)));
        }
        if g.index_of(&self.new_vertex).is_some() {
            return Err(Error::input(format!(
                "new vertex '{}' already exists",
                self.new_vertex
            )));
        }
        Ok((x1, x2))
    }
}

/// One connected component of a subdomain's interior together with its own
/// relative boundary.
#[derive(Debug, Clone)]
pub struct Component {
    pub interior: Vec<usize>,
    pub boundary: Vec<usize>,
}

/// An interior vertex set with its (cached) relative boundary and the
/// partition of the interior into edge-connected components.
#[derive(Debug, Clone)]
pub struct Subdomain {
    interior: Vec<usize>,
    boundary: Vec<usize>,
    components: Vec<Component>,
    in_interior: Vec<bool>,
    in_boundary: Vec<bool>,
    /// component index per graph vertex, usize::MAX outside the interior
    component_of: Vec<usize>,
}

impl Subdomain {
    /// Build a subdomain from interior vertex identifiers.
    pub fn new<T: Real>(g: &WeightedGraph<T>, interior_ids: &[&str]) -> Result<Self> {
        let mut interior: Vec<usize> = interior_ids
            .iter()
            .map(|id| g.require(id))
            .collect::<Result<_>>()?;
        interior.sort_unstable();
        interior.dedup();
        Self::from_indices(g, interior)
    }

    pub fn from_indices<T: Real>(g: &WeightedGraph<T>, interior: Vec<usize>) -> Result<Self> {
        let n = g.len();
        let mut in_interior = vec![false; n];
        for &i in &interior {
            if i >= n {
                return Err(Error::input(format!("vertex index {i} out of range")));
            }
            in_interior[i] = true;
        }
        let mut in_boundary = vec![false; n];
        for &i in &interior {
            for &(j, _) in g.neighbors(i) {
                if !in_interior[j] {
                    in_boundary[j] = true;
                }
            }
        }
        let boundary: Vec<usize> = (0..n).filter(|&i| in_boundary[i]).collect();

        // components of the interior, using only interior-interior edges
        let mut component_of = vec![usize::MAX; n];
        let mut components = Vec::new();
        for &start in &interior {
            if component_of[start] != usize::MAX {
                continue;
            }
            let cid = components.len();
            let mut stack = vec![start];
            let mut members = Vec::new();
            component_of[start] = cid;
            while let Some(v) = stack.pop() {
                members.push(v);
                for &(w, _) in g.neighbors(v) {
                    if in_interior[w] && component_of[w] == usize::MAX {
                        component_of[w] = cid;
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            let mut cb: Vec<usize> = members
                .iter()
                .flat_map(|&v| g.neighbors(v).iter().map(|&(w, _)| w))
                .filter(|&w| !in_interior[w])
                .collect();
            cb.sort_unstable();
            cb.dedup();
            components.push(Component {
                interior: members,
                boundary: cb,
            });
        }
        // deterministic component order: by smallest interior index
        components.sort_by_key(|c| c.interior[0]);
        for (cid, c) in components.iter().enumerate() {
            for &v in &c.interior {
                component_of[v] = cid;
            }
        }

        Ok(Self {
            interior,
            boundary,
            components,
            in_interior,
            in_boundary,
            component_of,
        })
    }

    /// Interior vertex indices in fixed (sorted-identifier) order.
    pub fn interior(&self) -> &[usize] {
        &self.interior
    }

    /// Relative boundary indices in fixed order.
    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn contains_interior(&self, i: usize) -> bool {
        self.in_interior.get(i).copied().unwrap_or(false)
    }

    pub fn contains_boundary(&self, i: usize) -> bool {
        self.in_boundary.get(i).copied().unwrap_or(false)
    }

    /// Interior union boundary membership.
    pub fn contains_closure(&self, i: usize) -> bool {
        self.contains_interior(i) || self.contains_boundary(i)
    }

    /// Component index of an interior vertex.
    pub fn component_of(&self, i: usize) -> Option<usize> {
        let c = *self.component_of.get(i)?;
        (c != usize::MAX).then_some(c)
    }
}

/// Vertices outside `interior` that carry an edge into it, as sorted
/// identifiers.
pub fn relative_boundary<T: Real>(g: &WeightedGraph<T>, interior: &[&str]) -> Result<Vec<String>> {
    let d = Subdomain::new(g, interior)?;
    Ok(d.boundary().iter().map(|&i| g.id(i).to_string()).collect())
}

/// Partition of `interior` into maximal edge-connected blocks, using only
/// edges with both endpoints inside.
pub fn connected_components<T: Real>(
    g: &WeightedGraph<T>,
    interior: &[&str],
) -> Result<Vec<Vec<String>>> {
    let d = Subdomain::new(g, interior)?;
    Ok(d.components()
        .iter()
        .map(|c| c.interior.iter().map(|&i| g.id(i).to_string()).collect())
        .collect())
}

/// The graph Laplacian of `u` at an interior vertex `x`:
/// sum over neighbors y inside the closure of mu(x,y) (u(x) - u(y)).
pub fn laplacian_apply<T: Real>(
    g: &WeightedGraph<T>,
    d: &Subdomain,
    u: &HashMap<String, T>,
    x: &str,
) -> Result<T> {
    let xi = g.require(x)?;
    if !d.contains_interior(xi) {
        return Err(Error::input(format!("'{x}' is not an interior vertex")));
    }
    let ux = *u
        .get(x)
        .ok_or_else(|| Error::input(format!("u is not defined at '{x}'")))?;
    let mut acc = T::zero();
    for &(j, w) in g.neighbors(xi) {
        if !d.contains_closure(j) {
            continue;
        }
        let uj = *u
            .get(g.id(j))
            .ok_or_else(|| Error::input(format!("u is not defined at '{}'", g.id(j))))?;
        acc += w * (ux - uj);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> WeightedGraph<f64> {
        WeightedGraph::from_edges(&[("a", "b", 1.0), ("b", "c", 1.0)]).unwrap()
    }

    #[test]
    fn relative_boundary_of_path_center() {
        let g = path3();
        let b = relative_boundary(&g, &["b"]).unwrap();
        assert_eq!(b, vec!["a".to_string(), "c".to_string()]);
    }

    #[test]
    fn relative_boundary_of_empty_interior_is_empty() {
        let g = path3();
        assert!(relative_boundary(&g, &[]).unwrap().is_empty());
    }

    #[test]
    fn relative_boundary_on_grid_center() {
        // 3x3 unit grid, interior = center
        let mut edges = Vec::new();
        for r in 0..3 {
            for c in 0..3 {
                if c + 1 < 3 {
                    edges.push((format!("v{r}{c}"), format!("v{r}{}", c + 1), 1.0));
                }
                if r + 1 < 3 {
                    edges.push((format!("v{r}{c}"), format!("v{}{c}", r + 1), 1.0));
                }
            }
        }
        let owned: Vec<(&str, &str, f64)> =
            edges.iter().map(|(u, v, w)| (u.as_str(), v.as_str(), *w)).collect();
        let g = WeightedGraph::<f64>::from_edges(&owned).unwrap();
        let b = relative_boundary(&g, &["v11"]).unwrap();
        assert_eq!(b, vec!["v01", "v10", "v12", "v21"]);
    }

    #[test]
    fn components_split_and_merge() {
        let g = WeightedGraph::<f64>::from_edges(&[("a", "b", 1.0), ("b", "c", 1.0), ("c", "d", 1.0)])
            .unwrap();
        let parts = connected_components(&g, &["a", "c"]).unwrap();
        assert_eq!(parts, vec![vec!["a".to_string()], vec!["c".to_string()]]);
        let parts = connected_components(&g, &["b", "c"]).unwrap();
        assert_eq!(parts.len(), 1);
        assert!(connected_components(&g, &[]).unwrap().is_empty());
    }

    #[test]
    fn laplacian_linear_on_path_is_zero() {
        let g = path3();
        let d = Subdomain::new(&g, &["b"]).unwrap();
        let u: HashMap<String, f64> =
            [("a", 0.0), ("b", 0.5), ("c", 1.0)].map(|(k, v)| (k.to_string(), v)).into();
        assert_eq!(laplacian_apply(&g, &d, &u, "b").unwrap(), 0.0);
    }

    #[test]
    fn laplacian_star_center() {
        let g = WeightedGraph::<f64>::from_edges(&[
            ("x", "p", 1.0),
            ("x", "q", 1.0),
            ("x", "r", 1.0),
            ("x", "s", 1.0),
        ])
        .unwrap();
        let d = Subdomain::new(&g, &["x"]).unwrap();
        let mut u = HashMap::new();
        u.insert("x".to_string(), 1.0);
        for v in ["p", "q", "r", "s"] {
            u.insert(v.to_string(), 0.0);
        }
        assert_eq!(laplacian_apply(&g, &d, &u, "x").unwrap(), 4.0);
    }

    #[test]
    fn laplacian_weighted_path_root() {
        // weights (1,2): zero iff t = (1*0 + 2*1)/3 = 2/3
        let g = WeightedGraph::<f64>::from_edges(&[("a", "b", 1.0), ("b", "c", 2.0)]).unwrap();
        let d = Subdomain::new(&g, &["b"]).unwrap();
        let mk = |t: f64| {
            let mut u = HashMap::new();
            u.insert("a".to_string(), 0.0);
            u.insert("b".to_string(), t);
            u.insert("c".to_string(), 1.0);
            u
        };
        assert!(laplacian_apply(&g, &d, &mk(2.0 / 3.0), "b").unwrap().abs() < 1e-15);
        assert!(laplacian_apply(&g, &d, &mk(0.5), "b").unwrap().abs() > 0.1);
    }

    #[test]
    fn laplacian_rejects_non_interior() {
        let g = path3();
        let d = Subdomain::new(&g, &["b"]).unwrap();
        let u = HashMap::new();
        assert!(laplacian_apply(&g, &d, &u, "a").is_err());
    }

    #[test]
    fn subdivide_half() {
        let g = path3();
        let spec = SubdivisionSpec::new("a", "b", 0.5, "m");
        let g2 = g.subdivide_edge(&spec).unwrap();
        let a = g2.weight(g2.index_of("a").unwrap(), g2.index_of("m").unwrap());
        let b = g2.weight(g2.index_of("m").unwrap(), g2.index_of("b").unwrap());
        assert!((a - 2.0).abs() < 1e-15);
        assert!((b - 2.0).abs() < 1e-15);
        assert!(!g2.has_edge(g2.index_of("a").unwrap(), g2.index_of("b").unwrap()));
    }

    #[test]
    fn subdivide_third() {
        let g = path3();
        let spec = SubdivisionSpec::new("a", "b", 1.0 / 3.0, "m");
        let g2 = g.subdivide_edge(&spec).unwrap();
        let a = g2.weight(g2.index_of("a").unwrap(), g2.index_of("m").unwrap());
        let b = g2.weight(g2.index_of("m").unwrap(), g2.index_of("b").unwrap());
        assert!((a - 3.0).abs() < 1e-12);
        assert!((b - 1.5).abs() < 1e-12);
    }

    #[test]
    fn subdivide_scales_with_weight() {
        let g = WeightedGraph::<f64>::from_edges(&[("a", "b", 5.0)]).unwrap();
        let spec = SubdivisionSpec::new("a", "b", 0.5, "m");
        let g2 = g.subdivide_edge(&spec).unwrap();
        let a = g2.weight(g2.index_of("a").unwrap(), g2.index_of("m").unwrap());
        assert!((a - 10.0).abs() < 1e-12);
    }

    #[test]
    fn subdivide_rejects_bad_lambda_and_missing_edge() {
        let g = path3();
        assert!(g.subdivide_edge(&SubdivisionSpec::new("a", "b", 0.0, "m")).is_err());
        assert!(g.subdivide_edge(&SubdivisionSpec::new("a", "b", 1.0, "m")).is_err());
        assert!(g.subdivide_edge(&SubdivisionSpec::new("a", "c", 0.5, "m")).is_err());
        assert!(g.subdivide_edge(&SubdivisionSpec::new("a", "b", 0.5, "c")).is_err());
    }

    #[test]
    fn parse_rejects_duplicates_and_loops() {
        let bad = r#"{"vertices":["a","b"],"edges":[{"u":"a","v":"b","w":1.0},{"u":"b","v":"a","w":2.0}]}"#;
        assert!(WeightedGraph::<f64>::from_json(bad).is_err());
        let loopy = r#"{"vertices":["a"],"edges":[{"u":"a","v":"a","w":1.0}]}"#;
        assert!(WeightedGraph::<f64>::from_json(loopy).is_err());
        let ok = r#"{"vertices":["a","b"],"edges":[{"u":"a","v":"b","w":1.5}]}"#;
        let g = WeightedGraph::<f64>::from_json(ok).unwrap();
        assert_eq!(g.len(), 2);
    }
}
