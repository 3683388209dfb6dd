//! Acceptance gate: one test per release criterion, each printing a single
//! PASS/FAIL line. Tolerances are pinned here and must not be loosened.

mod common;

use std::time::Instant;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use harmonia::dahlberg::{
    check_equivalence, default_family, maximal_function, TestMeasure,
};
use harmonia::dirichlet::{
    evaluate_measure, harmonic_kernel, solve_dirichlet, BoundaryData,
};
use harmonia::graph::{Subdomain, SubdivisionSpec, WeightedGraph};
use harmonia::harnack::{harnack_index, harnack_monotonicity_check};
use harmonia::lattice::{estimate_delta, lattice_kernel, LatticeDomain};
use harmonia::union::{union_measure, union_subdomain};
use harmonia::verify::{
    verify_boundary_strong_max, verify_compatibility, verify_preharmonic,
    verify_strong_max, verify_weak_max,
};

use common::{grid_graph, mean_value_fixed_point, random_data, random_graph};

fn verdict(n: usize, name: &str, failures: &[String]) {
    if failures.is_empty() {
        println!("criterion {n:2} ({name}): PASS");
    } else {
        println!("criterion {n:2} ({name}): FAIL ({} issue(s))", failures.len());
        for f in failures.iter().take(10) {
            println!("    {f}");
        }
        panic!("criterion {n} ({name}) failed");
    }
}

fn unit_square(h: f64) -> LatticeDomain<f64> {
    LatticeDomain::discretize(
        &[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
        [0.5, 0.5],
        h,
    )
    .expect("unit square discretizes")
}

/// 1. Kernel rows are probability measures supported exactly on the
///    component boundary, for 100 seeded random graphs of up to 200 vertices.
#[test]
fn criterion_01_kernel_axioms() {
    let mut failures = Vec::new();
    for seed in 0..100u64 {
        let (g, d) = random_graph(seed, 200);
        let k = harmonic_kernel(&g, &d).expect("kernel");
        let rep = verify_preharmonic(&k, &g, &d);
        if !rep.passed {
            failures.push(format!("seed {seed}: {:?}", rep.witnesses.first()));
        }
    }
    verdict(1, "kernel axioms", &failures);
}

/// 2. Direct solves agree with an independent mean-value fixed-point oracle
///    within 1e-8 in the sup norm on 50 seeded graphs of up to 50 vertices.
#[test]
fn criterion_02_oracle_agreement() {
    let mut failures = Vec::new();
    for seed in 0..50u64 {
        let (g, d) = random_graph(seed + 1000, 50);
        let mut rng = ChaCha8Rng::seed_from_u64(seed + 9000);
        let f = random_data(&mut rng, &d, &g);
        let u = solve_dirichlet(&g, &d, &f).expect("solve");
        let v = mean_value_fixed_point(&g, &d, &f, 1e-12);
        let sup = d
            .interior()
            .iter()
            .map(|&x| (u[g.id(x)] - v[g.id(x)]).abs())
            .fold(0.0f64, f64::max);
        if sup > 1e-8 {
            failures.push(format!("seed {seed}: sup deviation {sup:.3e}"));
        }
    }
    verdict(2, "oracle agreement", &failures);
}

/// 3. Closed forms: a single interior vertex sees normalized conductances
///    (1e-14); the unit path of length 4 yields u(x_i) = i/4 (1e-12).
#[test]
fn criterion_03_closed_forms() {
    let mut failures = Vec::new();

    let g = WeightedGraph::<f64>::from_edges(&[
        ("c", "q1", 2.0),
        ("c", "q2", 3.0),
        ("c", "q3", 5.0),
    ])
    .unwrap();
    let d = Subdomain::new(&g, &["c"]).unwrap();
    let k = harmonic_kernel(&g, &d).unwrap();
    for (q, expect) in [("q1", 0.2), ("q2", 0.3), ("q3", 0.5)] {
        let got = k.get("c", q).unwrap();
        if (got - expect).abs() > 1e-14 {
            failures.push(format!("single vertex at '{q}': {got} vs {expect}"));
        }
    }

    let g = WeightedGraph::<f64>::from_edges(&[
        ("b0", "x1", 1.0),
        ("x1", "x2", 1.0),
        ("x2", "x3", 1.0),
        ("x3", "b4", 1.0),
    ])
    .unwrap();
    let d = Subdomain::new(&g, &["x1", "x2", "x3"]).unwrap();
    let f = BoundaryData::from_pairs(&[("b0", 0.0), ("b4", 1.0)]);
    let u = solve_dirichlet(&g, &d, &f).unwrap();
    for (i, x) in [(1usize, "x1"), (2, "x2"), (3, "x3")] {
        let expect = i as f64 / 4.0;
        if (u[x] - expect).abs() > 1e-12 {
            failures.push(format!("path at '{x}': {} vs {expect}", u[x]));
        }
    }
    verdict(3, "closed forms", &failures);
}

/// 4. Subdividing a closure edge leaves all original values unchanged within
///    1e-10, and the new vertex interpolates linearly, on 100 seeded triples.
#[test]
fn criterion_04_subdivision_invariance() {
    let mut failures = Vec::new();
    let mut done = 0usize;
    let mut seed = 0u64;
    while done < 100 {
        seed += 1;
        let (g, d) = random_graph(seed + 2000, 40);
        let closure_edges: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .filter(|&&(a, b, _)| d.contains_closure(a) && d.contains_closure(b))
            .map(|&(a, b, _)| (a, b))
            .collect();
        if closure_edges.is_empty() {
            continue;
        }
        done += 1;
        let mut rng = ChaCha8Rng::seed_from_u64(seed + 8000);
        let (a, b) = closure_edges[rng.random_range(0..closure_edges.len())];
        let lambda: f64 = 0.05 + 0.9 * rng.random::<f64>();
        let f = random_data(&mut rng, &d, &g);
        let u = solve_dirichlet(&g, &d, &f).expect("base solve");

        let spec = SubdivisionSpec::new(g.id(a), g.id(b), lambda, "w_sub");
        let g2 = g.subdivide_edge(&spec).expect("subdivide");
        let mut interior: Vec<&str> = d.interior().iter().map(|&i| g.id(i)).collect();
        interior.push("w_sub");
        let d2 = Subdomain::new(&g2, &interior).expect("subdomain");
        let u2 = solve_dirichlet(&g2, &d2, &f).expect("subdivided solve");

        for (id, &val) in &u {
            if (u2[id] - val).abs() > 1e-10 {
                failures.push(format!(
                    "seed {seed}: value at '{id}' moved by {:.3e}",
                    (u2[id] - val).abs()
                ));
            }
        }
        let interp = (1.0 - lambda) * u[g.id(a)] + lambda * u[g.id(b)];
        if (u2["w_sub"] - interp).abs() > 1e-10 {
            failures.push(format!(
                "seed {seed}: added vertex off the chord by {:.3e}",
                (u2["w_sub"] - interp).abs()
            ));
        }
    }
    verdict(4, "subdivision invariance", &failures);
}

/// 5. Maximum principles hold on 1000 (kernel, data) pairs including strict
///    interior bounds, the boundary trigger, and 100% detection of a 1e-3
///    kernel fault by every corresponding check.
#[test]
fn criterion_05_maximum_principles() {
    let mut failures = Vec::new();
    for seed in 0..100u64 {
        let (g, d) = random_graph(seed + 3000, 60);
        let k = harmonic_kernel(&g, &d).expect("kernel");
        let mut rng = ChaCha8Rng::seed_from_u64(seed + 7000);
        for trial in 0..10 {
            let f = random_data(&mut rng, &d, &g);
            let rep = verify_weak_max(&k, &f);
            if !rep.passed {
                failures.push(format!("seed {seed} trial {trial}: weak bound broken"));
            }
        }
        let f = random_data(&mut rng, &d, &g);
        if !verify_strong_max(&k, &g, &d, &f).passed {
            failures.push(format!("seed {seed}: strict interior bound broken"));
        }
        if !verify_boundary_strong_max(&k, &f).passed {
            failures.push(format!("seed {seed}: boundary extremum logic broken"));
        }

        // constant data: every interior value equals the constant and the
        // boundary maximum is attained (trigger case)
        let ids: Vec<String> = d.boundary().iter().map(|&b| g.id(b).to_string()).collect();
        let one = BoundaryData::constant(1.0, &ids);
        if !verify_strong_max(&k, &g, &d, &one).passed {
            failures.push(format!("seed {seed}: constant data not preserved"));
        }
        if !verify_boundary_strong_max(&k, &one).passed {
            failures.push(format!("seed {seed}: attained maximum not detected"));
        }
        let max_val = (0..k.interior_ids().len())
            .map(|r| k.mass(r, k.component_cols(k.component_of_row(r))))
            .fold(f64::NEG_INFINITY, f64::max);
        if max_val < 1.0 - 1e-12 {
            failures.push(format!("seed {seed}: trigger threshold missed ({max_val})"));
        }

        // fault injection: +1e-3 on a supported entry must break every check
        let row = rng.random_range(0..k.interior_ids().len());
        let cols = k.component_cols(k.component_of_row(row));
        let col = cols[rng.random_range(0..cols.len())];
        let bad = k.with_perturbed_entry(row, col, 1e-3);
        let detected = !verify_preharmonic(&bad, &g, &d).passed
            && !verify_weak_max(&bad, &one).passed
            && !verify_strong_max(&bad, &g, &d, &one).passed
            && !verify_boundary_strong_max(&bad, &one).passed;
        if !detected {
            failures.push(format!("seed {seed}: injected fault went undetected"));
        }
    }
    verdict(5, "maximum principles", &failures);
}

/// 6. Restriction compatibility: solving on a sub-domain with traces of the
///    outer solution reproduces the outer solution (1e-10) on 100 nested pairs.
#[test]
fn criterion_06_compatibility() {
    let mut failures = Vec::new();
    for seed in 0..100u64 {
        let (g, d) = random_graph(seed + 4000, 60);
        let mut rng = ChaCha8Rng::seed_from_u64(seed + 6000);
        let mut sub: Vec<usize> = d
            .interior()
            .iter()
            .copied()
            .filter(|_| rng.random::<f64>() < 0.5)
            .collect();
        if sub.is_empty() {
            sub.push(d.interior()[0]);
        }
        let d_sub = Subdomain::from_indices(&g, sub).expect("nested subdomain");
        match verify_compatibility(&g, &d, &d_sub, 3, seed) {
            Ok(rep) if rep.passed => {}
            Ok(rep) => failures.push(format!("seed {seed}: {:?}", rep.witnesses.first())),
            Err(e) => failures.push(format!("seed {seed}: {e}")),
        }
    }
    verdict(6, "restriction compatibility", &failures);
}

/// 7. Alternating union iteration matches the direct kernel within 1e-8 on
///    20 path/grid fixtures; full boundary data drives the limit to 1.
#[test]
fn criterion_07_union_iteration() {
    let mut failures = Vec::new();
    let mut fixtures: Vec<(WeightedGraph<f64>, Vec<String>, Vec<String>)> = Vec::new();

    // 10 path fixtures with varying overlap
    for n in 6..16usize {
        let ids: Vec<String> = (0..n).map(|i| format!("p{i:02}")).collect();
        let edges: Vec<(String, String, f64)> = (0..n - 1)
            .map(|i| (ids[i].clone(), ids[i + 1].clone(), 1.0))
            .collect();
        let g = WeightedGraph::new(ids.clone(), &edges).unwrap();
        let d1: Vec<String> = ids[1..n - 3].to_vec();
        let d2: Vec<String> = ids[2..n - 1].to_vec();
        fixtures.push((g, d1, d2));
    }
    // 10 grid fixtures: overlapping vertical strips
    for m in [4usize, 5] {
        for split in 1..6usize {
            let g = grid_graph(m + 2, m + 2);
            let lo = 1 + split % 2;
            let cell = |i: usize, j: usize| format!("c{i:02}_{j:02}");
            let mut d1 = Vec::new();
            let mut d2 = Vec::new();
            for i in 1..=m {
                for j in 1..=m {
                    if i <= lo + split.min(m - 1) {
                        d1.push(cell(i, j));
                    }
                    if i >= lo {
                        d2.push(cell(i, j));
                    }
                }
            }
            fixtures.push((g, d1, d2));
        }
    }

    for (fi, (g, d1_ids, d2_ids)) in fixtures.iter().enumerate() {
        let d1_refs: Vec<&str> = d1_ids.iter().map(|s| s.as_str()).collect();
        let d2_refs: Vec<&str> = d2_ids.iter().map(|s| s.as_str()).collect();
        let d1 = Subdomain::new(g, &d1_refs).unwrap();
        let d2 = Subdomain::new(g, &d2_refs).unwrap();
        let du = union_subdomain(g, &d1, &d2).unwrap();
        let ku = harmonic_kernel(g, &du).unwrap();
        let boundary: Vec<String> = du.boundary().iter().map(|&b| g.id(b).to_string()).collect();

        // proper subset of the union boundary, then the full boundary
        let half: Vec<&str> = boundary
            .iter()
            .step_by(2)
            .map(|s| s.as_str())
            .collect();
        let full: Vec<&str> = boundary.iter().map(|s| s.as_str()).collect();
        for (which, a) in [("half", &half), ("full", &full)] {
            match union_measure(g, &d1, &d2, a, 1e-10, 100_000) {
                Ok((omega, _state)) => {
                    let f = BoundaryData::<f64>::from_pairs(
                        &boundary
                            .iter()
                            .map(|q| {
                                (q.as_str(), if a.contains(&q.as_str()) { 1.0 } else { 0.0 })
                            })
                            .collect::<Vec<_>>(),
                    );
                    for &x in du.interior() {
                        let direct = evaluate_measure(&ku, g.id(x), &f).unwrap();
                        let got = omega[g.id(x)];
                        if (got - direct).abs() > 1e-8 {
                            failures.push(format!(
                                "fixture {fi} ({which}): at '{}' got {got}, direct {direct}",
                                g.id(x)
                            ));
                        }
                        if which == "full" && (got - 1.0).abs() > 1e-8 {
                            failures.push(format!(
                                "fixture {fi}: full boundary mass {got} != 1 at '{}'",
                                g.id(x)
                            ));
                        }
                    }
                }
                Err(e) => failures.push(format!("fixture {fi} ({which}): {e}")),
            }
        }
    }
    verdict(7, "alternating union iteration", &failures);
}

/// 8. Harnack indices: witness ratios reproduce the index to 1e-12, sampled
///    measure ratios never exceed it (+1e-10 slack), the index grows as the
///    domain shrinks on 50 nested fixtures, and it is bit-identical under
///    lattice translation.
#[test]
fn criterion_08_harnack() {
    let mut failures = Vec::new();

    // witness reproduction on 20 random fixtures
    let mut done = 0usize;
    let mut seed = 0u64;
    let mut sample_fixture: Option<(WeightedGraph<f64>, Subdomain, Vec<String>)> = None;
    while done < 20 {
        seed += 1;
        let (g, d) = random_graph(seed + 5000, 60);
        let comp = match d.components().iter().find(|c| c.interior.len() >= 2) {
            Some(c) => c,
            None => continue,
        };
        done += 1;
        let a_ids: Vec<String> = comp
            .interior
            .iter()
            .take(3)
            .map(|&i| g.id(i).to_string())
            .collect();
        let a: Vec<&str> = a_ids.iter().map(|s| s.as_str()).collect();
        let k = harmonic_kernel(&g, &d).unwrap();
        let rep = harnack_index(&k, &a).unwrap();
        let (x, y, q) = &rep.witness;
        let ratio = k.get(x, q).unwrap() / k.get(y, q).unwrap();
        if (ratio - rep.index).abs() > 1e-12 {
            failures.push(format!(
                "seed {seed}: witness ratio {ratio} vs index {}",
                rep.index
            ));
        }
        if sample_fixture.is_none() {
            sample_fixture = Some((g, d, a_ids));
        }
    }

    // 1000 sampled positive data: measure ratios stay below the index
    let (g, d, a_ids) = sample_fixture.expect("at least one usable fixture");
    let a: Vec<&str> = a_ids.iter().map(|s| s.as_str()).collect();
    let k = harmonic_kernel(&g, &d).unwrap();
    let index = harnack_index(&k, &a).unwrap().index;
    let boundary: Vec<String> = d.boundary().iter().map(|&b| g.id(b).to_string()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for trial in 0..1000 {
        let f = BoundaryData::<f64>::new(
            boundary
                .iter()
                .map(|q| (q.clone(), 1e-6 + rng.random::<f64>()))
                .collect(),
        );
        for &x in &a {
            for &y in &a {
                let num = evaluate_measure(&k, x, &f).unwrap();
                let den = evaluate_measure(&k, y, &f).unwrap();
                if num / den > index + 1e-10 {
                    failures.push(format!(
                        "trial {trial}: ratio {} exceeds index {index}",
                        num / den
                    ));
                }
            }
        }
    }

    // monotonicity under domain shrinkage on 50 nested fixtures
    let mut done = 0usize;
    let mut seed = 0u64;
    while done < 50 {
        seed += 1;
        let (g, d1) = random_graph(seed + 5500, 60);
        // adjacent interior pair in one component of d1
        let pair = g.edges().iter().find_map(|&(u, v, _)| {
            if d1.contains_interior(u)
                && d1.contains_interior(v)
                && d1.component_of(u) == d1.component_of(v)
            {
                Some((u, v))
            } else {
                None
            }
        });
        let (u, v) = match pair {
            Some(p) => p,
            None => continue,
        };
        done += 1;
        let mut rng = ChaCha8Rng::seed_from_u64(seed + 5600);
        let mut sub: Vec<usize> = vec![u, v];
        for &w in d1.interior() {
            if w != u && w != v && rng.random::<f64>() < 0.5 {
                sub.push(w);
            }
        }
        sub.sort_unstable();
        let d2 = Subdomain::from_indices(&g, sub).unwrap();
        let a = [g.id(u), g.id(v)];
        match harnack_monotonicity_check(&g, &a, &d1, &d2) {
            Ok(true) => {}
            Ok(false) => failures.push(format!("seed {seed}: index shrank with the domain")),
            Err(e) => failures.push(format!("seed {seed}: {e}")),
        }
    }

    // translation invariance on the lattice: indices must agree bit for bit
    let dom1 = unit_square(0.125);
    let dom2 = LatticeDomain::<f64>::discretize(
        &[[0.375, 0.625], [1.375, 0.625], [1.375, 1.625], [0.375, 1.625]],
        [0.875, 1.125],
        0.125,
    )
    .unwrap();
    let k1 = lattice_kernel(&dom1).unwrap();
    let k2 = lattice_kernel(&dom2).unwrap();
    let a: Vec<&str> = dom1.interior_ids().into_iter().take(2).collect();
    let h1 = harnack_index(&k1, &a).unwrap().index;
    let h2 = harnack_index(&k2, &a).unwrap().index;
    if h1.to_bits() != h2.to_bits() {
        failures.push(format!("translated lattice index {h2} differs from {h1}"));
    }

    verdict(8, "Harnack indices", &failures);
}

/// 9. Lattice pipeline: the unit square at h = 1/16 solves in under 5 s, the
///    measure of a fixed half-boundary arc converges under refinement, and
///    the corkscrew lower bound is stable within 10% across one refinement.
#[test]
fn criterion_09_lattice_refinement() {
    let mut failures = Vec::new();

    let t0 = Instant::now();
    let dom16 = unit_square(1.0 / 16.0);
    let k16 = lattice_kernel(&dom16).unwrap();
    let elapsed = t0.elapsed().as_secs_f64();
    if elapsed >= 5.0 {
        failures.push(format!("h=1/16 pipeline took {elapsed:.2} s"));
    }

    // fixed continuum arc: boundary cells strictly below y = 1/2
    let arc_mass = |dom: &LatticeDomain<f64>, k: &harmonia::Kernel| -> f64 {
        let row = k.row_of(dom.origin_id()).unwrap();
        k.boundary_ids()
            .iter()
            .enumerate()
            .filter(|(_, q)| dom.pos(q).unwrap()[1] < 0.5 - 1e-9)
            .map(|(c, _)| k.entry(row, c))
            .sum()
    };
    let dom8 = unit_square(0.125);
    let k8 = lattice_kernel(&dom8).unwrap();
    let dom32 = unit_square(1.0 / 32.0);
    let k32 = lattice_kernel(&dom32).unwrap();
    let (m8, m16, m32) = (
        arc_mass(&dom8, &k8),
        arc_mass(&dom16, &k16),
        arc_mass(&dom32, &k32),
    );
    let (inc1, inc2) = ((m16 - m8).abs(), (m32 - m16).abs());
    if !(inc2 < inc1) {
        failures.push(format!(
            "arc measure increments not shrinking: {inc1:.3e} then {inc2:.3e} (m8={m8}, m16={m16}, m32={m32})"
        ));
    }

    // corkscrew lower bound at a common radius, stable across one refinement
    let r = dom16.diameter() / 4.0;
    let (d16, _) = estimate_delta(&dom16, &k16, &[r], dom16.boundary_ids().len()).unwrap();
    let (d32, _) = estimate_delta(&dom32, &k32, &[r], dom32.boundary_ids().len()).unwrap();
    if !(d16 > 0.0 && d32 > 0.0) {
        failures.push(format!("nonpositive lower bound: {d16} / {d32}"));
    } else if (d32 - d16).abs() / d16 > 0.10 {
        failures.push(format!(
            "lower bound drifted {:.1}% across refinement ({d16} to {d32})",
            100.0 * (d32 - d16).abs() / d16
        ));
    }

    verdict(9, "lattice refinement", &failures);
}

/// 10. Carleson vs strong-(p,p): the full comparison chain holds link by
///     link for p in {1.5, 2, 3} and three measures at h = 1/16, the bound
///     M <= delta^-p K holds with 10% slack, the ratio K/M is stable within
///     50% across one refinement, the sweep finishes in under 60 s, and the
///     maximal function obeys the power-mean inequality at 1e-12.
#[test]
fn criterion_10_carleson_strong_pp() {
    let mut failures = Vec::new();
    let t0 = Instant::now();
    let ps = [1.5f64, 2.0, 3.0];

    let mut ratios: Vec<Vec<f64>> = Vec::new(); // per h: K/M per (p, measure)
    for h in [1.0 / 16.0, 1.0 / 32.0] {
        let dom = unit_square(h);
        let k = lattice_kernel(&dom).unwrap();
        let radii = dom.radii_grid();
        let family = default_family(&dom, &radii, 200, 42).unwrap();

        let corkscrew = dom
            .cylinder(&dom.boundary_ids()[0].to_string(), radii[0])
            .unwrap()
            .corkscrew;
        let measures: Vec<(&str, TestMeasure<f64>)> = vec![
            ("area", TestMeasure::area(&dom)),
            ("point", TestMeasure::point_mass(&corkscrew)),
            ("layer", TestMeasure::boundary_layer(&dom, 3.0 * h).unwrap()),
        ];

        let mut row = Vec::new();
        for &p in &ps {
            for (name, mu) in &measures {
                match check_equivalence(&dom, &k, mu, p, &radii, &family) {
                    Ok(rep) => {
                        if !rep.bound_ok {
                            failures.push(format!(
                                "h={h}, p={p}, mu={name}: M={} exceeds delta^-p K={} x 1.1",
                                rep.m,
                                rep.delta.powf(-p) * rep.k
                            ));
                        }
                        row.push(rep.k / rep.m.max(f64::MIN_POSITIVE));
                    }
                    Err(e) => failures.push(format!("h={h}, p={p}, mu={name}: {e}")),
                }
            }
        }
        ratios.push(row);
    }
    if ratios.len() == 2 && ratios[0].len() == ratios[1].len() {
        for (i, (&a, &b)) in ratios[0].iter().zip(&ratios[1]).enumerate() {
            let drift = (b / a - 1.0).abs();
            if drift > 0.5 {
                failures.push(format!(
                    "case {i}: K/M drifted {:.0}% across refinement ({a:.3e} to {b:.3e})",
                    100.0 * drift
                ));
            }
        }
    }

    // power-mean inequality for the boundary maximal function
    let dom = unit_square(1.0 / 16.0);
    let k = lattice_kernel(&dom).unwrap();
    let radii = dom.radii_grid();
    let boundary: Vec<String> = dom.boundary_ids().iter().map(|s| s.to_string()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let f = BoundaryData::<f64>::new(
        boundary
            .iter()
            .map(|q| (q.clone(), rng.random::<f64>()))
            .collect(),
    );
    for &p in &ps {
        let fp = BoundaryData::<f64>::new(
            boundary
                .iter()
                .map(|q| (q.clone(), f.values[q].powf(p)))
                .collect(),
        );
        for q in &boundary {
            let star = maximal_function(&dom, &k, &f, q, &radii).unwrap();
            let star_p = maximal_function(&dom, &k, &fp, q, &radii).unwrap();
            if star > star_p.powf(1.0 / p) + 1e-12 {
                failures.push(format!(
                    "power-mean broken at '{q}' for p={p}: {star} vs {}",
                    star_p.powf(1.0 / p)
                ));
            }
        }
    }

    let elapsed = t0.elapsed().as_secs_f64();
    if elapsed >= 60.0 {
        failures.push(format!("sweep took {elapsed:.1} s"));
    }
    verdict(10, "Carleson / strong-(p,p)", &failures);
}

/// 11. Byte-identical reports regardless of worker thread count.
#[test]
fn criterion_11_determinism() {
    let mut failures = Vec::new();
    let bin = env!("CARGO_BIN_EXE_harmonia");
    let fixtures = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");

    let cases: Vec<(&str, Vec<String>, Vec<&str>)> = vec![
        (
            "kernel",
            vec![
                "kernel".into(),
                "--input".into(),
                fixtures.join("path_graph.json").display().to_string(),
                "--domain".into(),
                fixtures.join("path_domain.json").display().to_string(),
            ],
            vec!["kernel.csv"],
        ),
        (
            "lattice",
            vec![
                "lattice".into(),
                "--domain".into(),
                fixtures.join("square_h16.json").display().to_string(),
            ],
            vec!["kernel.csv", "lattice.json"],
        ),
        (
            "dahlberg",
            vec![
                "dahlberg".into(),
                "--domain".into(),
                fixtures.join("square_h16.json").display().to_string(),
                "--family-size".into(),
                "50".into(),
            ],
            vec!["dahlberg.json"],
        ),
    ];

    for (name, args, outputs) in &cases {
        let mut bytes: Vec<Vec<Vec<u8>>> = Vec::new();
        for jobs in ["1", "8"] {
            let dir = tempfile::tempdir().unwrap();
            let status = std::process::Command::new(bin)
                .args(args)
                .arg("--out")
                .arg(dir.path())
                .arg("--jobs")
                .arg(jobs)
                .status()
                .unwrap();
            if !status.success() {
                failures.push(format!("{name} with jobs={jobs} exited {status}"));
                continue;
            }
            bytes.push(
                outputs
                    .iter()
                    .map(|f| std::fs::read(dir.path().join(f)).unwrap())
                    .collect(),
            );
        }
        if bytes.len() == 2 && bytes[0] != bytes[1] {
            failures.push(format!("{name}: outputs differ between jobs=1 and jobs=8"));
        }
    }
    verdict(11, "determinism across thread counts", &failures);
}
