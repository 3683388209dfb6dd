//! Batch front-end: build graphs and lattice domains, compute kernels, run
//! the verification suites and the Carleson/strong-(p,p) harness, and write
//! deterministic reports.
//!
//! Exit codes: 0 = all checks passed, 1 = a check failed (witness file
//! written next to the reports), 2 = input error.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::json;

use harmonia::dahlberg::{check_equivalence, default_family, maximal_function, TestMeasure};
use harmonia::dirichlet::{harmonic_kernel, solve_dirichlet, BoundaryData, HarmonicKernel};
use harmonia::error::Error;
use harmonia::graph::{Subdomain, WeightedGraph};
use harmonia::harnack::{harnack_index, radon_nikodym};
use harmonia::lattice::{estimate_delta, lattice_kernel, sector_masses, verify_tsci, LatticeDomain};
use harmonia::union::{union_measure, union_subdomain};
use harmonia::verify::{
    all_passed, random_boundary, reports_to_json, verify_boundary_strong_max, verify_chi_a_max,
    verify_compatibility, verify_preharmonic, verify_regular, verify_strong_max, verify_weak_max,
};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "harmonia", version, about = "harmonic measure computations on graphs and lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Output directory for reports
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Convergence / comparison tolerance
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Seed for all randomized sweeps
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 = all cores)
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the Dirichlet problem on a weighted graph
    Solve {
        /// Graph JSON file
        #[arg(long)]
        input: PathBuf,
        /// Subdomain JSON file ({"interior": [...]})
        #[arg(long)]
        domain: PathBuf,
        /// Boundary data JSON file ({"values": {...}})
        #[arg(long)]
        boundary: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Compute and dump the harmonic kernel of a graph subdomain
    Kernel {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        domain: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Harnack index of an interior subset
    Harnack {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        domain: PathBuf,
        /// Comma-separated interior vertices
        #[arg(long)]
        subset: String,
        /// Also dump the full pairwise ratio table
        #[arg(long, default_value_t = false)]
        table: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Harmonic measure of a union of two subdomains by alternating iteration
    Union {
        #[arg(long)]
        input: PathBuf,
        /// JSON file {"d1": [...], "d2": [...], "a": [...]}
        #[arg(long)]
        domain: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Run all axiom/theorem checks on a graph subdomain
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        domain: PathBuf,
        /// Optional kernel CSV overriding the computed kernel entries
        #[arg(long)]
        kernel: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Discretize a star-like polygon and report kernel/geometry diagnostics
    Lattice {
        /// Domain spec JSON ({"polygon": ..., "origin": ..., "h": ...})
        #[arg(long)]
        domain: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Carleson vs strong-(p,p) harness on a lattice domain
    Dahlberg {
        #[arg(long)]
        domain: PathBuf,
        /// Comma-separated exponents (> 1)
        #[arg(long, default_value = "1.5,2,3")]
        p: String,
        /// Comma-separated radii (defaults to the dyadic grid)
        #[arg(long)]
        radii: Option<String>,
        /// Number of random test data vectors
        #[arg(long, default_value_t = 200)]
        family_size: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Deserialize)]
struct GraphDomainFile {
    interior: Vec<String>,
}

#[derive(Deserialize)]
struct UnionDomainFile {
    d1: Vec<String>,
    d2: Vec<String>,
    a: Vec<String>,
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<WeightedGraph<f64>, Error> {
    WeightedGraph::from_json(&read(path)?)
}

fn load_subdomain(g: &WeightedGraph<f64>, path: &Path) -> Result<Subdomain, Error> {
    let file: GraphDomainFile = serde_json::from_str(&read(path)?)?;
    let ids: Vec<&str> = file.interior.iter().map(|s| s.as_str()).collect();
    Subdomain::new(g, &ids)
}

fn write_out(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, Error> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, contents)?;
    Ok(path)
}

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

/// Failed checks exit 1 after writing their witnesses.
struct CheckFailure {
    witness_json: String,
}

enum RunError {
    Input(Error),
    Check(CheckFailure),
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        match e {
            // iteration blow-ups and internal mismatches are failed checks,
            // not malformed input
            Error::NonConvergence { .. } | Error::Inconsistency(_) => RunError::Check(CheckFailure {
                witness_json: json!({ "error": e.to_string() }).to_string(),
            }),
            other => RunError::Input(other),
        }
    }
}

fn init_pool(jobs: usize) {
    if jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .ok();
    }
}

fn solution_csv(g: &WeightedGraph<f64>, u: &HashMap<String, f64>) -> String {
    let mut ids: Vec<&String> = u.keys().collect();
    ids.sort();
    let _ = g;
    let mut out = String::from("vertex,value\n");
    for id in ids {
        out.push_str(&format!("{id},{}\n", fmt(u[id])));
    }
    out
}

fn cmd_solve(input: &Path, domain: &Path, boundary: &Path, common: &Common) -> Result<(), RunError> {
    let g = load_graph(input)?;
    let d = load_subdomain(&g, domain)?;
    let f = BoundaryData::<f64>::from_json(&read(boundary)?)?;
    let u = solve_dirichlet(&g, &d, &f)?;
    let path = write_out(&common.out, "solution.csv", &solution_csv(&g, &u))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_kernel(input: &Path, domain: &Path, common: &Common) -> Result<(), RunError> {
    let g = load_graph(input)?;
    let d = load_subdomain(&g, domain)?;
    let k = harmonic_kernel(&g, &d)?;
    let path = write_out(&common.out, "kernel.csv", &k.to_csv())?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_harnack(
    input: &Path,
    domain: &Path,
    subset: &str,
    table: bool,
    common: &Common,
) -> Result<(), RunError> {
    let g = load_graph(input)?;
    let d = load_subdomain(&g, domain)?;
    let k = harmonic_kernel(&g, &d)?;
    let a: Vec<&str> = subset.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    let rep = harnack_index(&k, &a)?;
    let mut doc = serde_json::to_value(&rep).expect("report serializes");
    if table {
        let mut rows = Vec::new();
        for &x in &a {
            for &y in &a {
                let r = radon_nikodym(&k, x, y)?;
                let mut qs: Vec<&String> = r.keys().collect();
                qs.sort();
                for q in qs {
                    rows.push(json!({ "x": x, "y": y, "q": q, "ratio": fmt(r[q]) }));
                }
            }
        }
        doc["ratios"] = json!(rows);
    }
    let path = write_out(
        &common.out,
        "harnack.json",
        &serde_json::to_string_pretty(&doc).expect("doc serializes"),
    )?;
    println!("index {} witness ({}, {}, {})", rep.index, rep.witness.0, rep.witness.1, rep.witness.2);
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_union(input: &Path, domain: &Path, common: &Common) -> Result<(), RunError> {
    let g = load_graph(input)?;
    let file: UnionDomainFile =
        serde_json::from_str(&read(domain)?).map_err(Error::from)?;
    let ids1: Vec<&str> = file.d1.iter().map(|s| s.as_str()).collect();
    let ids2: Vec<&str> = file.d2.iter().map(|s| s.as_str()).collect();
    let a: Vec<&str> = file.a.iter().map(|s| s.as_str()).collect();
    let d1 = Subdomain::new(&g, &ids1)?;
    let d2 = Subdomain::new(&g, &ids2)?;
    let (omega, state) = union_measure(&g, &d1, &d2, &a, common.tol, 100_000)?;
    write_out(&common.out, "union.csv", &solution_csv(&g, &omega))?;
    write_out(&common.out, "union_trace.csv", &state.trace_csv())?;

    // cross-check against the direct solve on the union
    let du = union_subdomain(&g, &d1, &d2)?;
    let k = harmonic_kernel(&g, &du)?;
    let boundary: Vec<String> = du.boundary().iter().map(|&b| g.id(b).to_string()).collect();
    let mut chi = BoundaryData::constant(0.0f64, &boundary);
    for &q in &a {
        chi.values.insert(q.to_string(), 1.0);
    }
    let mut worst = 0.0f64;
    for (id, &v) in &omega {
        let direct = harmonia::dirichlet::evaluate_measure(&k, id, &chi)?;
        worst = worst.max((v - direct).abs());
    }
    if worst > 10.0 * common.tol {
        return Err(RunError::Check(CheckFailure {
            witness_json: json!({
                "check": "union_vs_direct",
                "max_difference": worst,
                "tolerance": 10.0 * common.tol,
            })
            .to_string(),
        }));
    }
    println!(
        "converged in {} iterations (delta {:.3e}); max deviation from direct solve {:.3e}",
        state.iteration, state.delta, worst
    );
    Ok(())
}

fn cmd_verify(
    input: &Path,
    domain: &Path,
    kernel_csv: Option<&Path>,
    common: &Common,
) -> Result<(), RunError> {
    let g = load_graph(input)?;
    let d = load_subdomain(&g, domain)?;
    let mut k: HarmonicKernel<f64> = harmonic_kernel(&g, &d)?;
    if let Some(path) = kernel_csv {
        k = k.entries_from_csv(&read(path)?)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
    let boundary: Vec<String> = d.boundary().iter().map(|&b| g.id(b).to_string()).collect();
    let f = random_boundary::<f64>(&mut rng, &boundary);
    let subset: Vec<&str> = boundary
        .iter()
        .enumerate()
        .filter(|(i, _)| i % 2 == 0)
        .map(|(_, q)| q.as_str())
        .collect();
    // nested sub-domain: every other interior vertex that keeps a valid
    // boundary, falling back to the full domain
    let inner: Vec<&str> = d
        .interior()
        .iter()
        .enumerate()
        .filter(|(i, _)| i % 2 == 0)
        .map(|(_, &v)| g.id(v))
        .collect();
    let d_sub = if inner.is_empty() {
        d.clone()
    } else {
        Subdomain::new(&g, &inner).unwrap_or_else(|_| d.clone())
    };

    let mut reports = vec![
        verify_preharmonic(&k, &g, &d),
        verify_weak_max(&k, &f),
        verify_strong_max(&k, &g, &d, &f),
        verify_boundary_strong_max(&k, &f),
        verify_chi_a_max(&k, &subset),
    ];
    if kernel_csv.is_none() {
        // these two re-solve from the graph, so they only make sense for
        // kernels this run computed itself
        reports.push(verify_regular(&g, &d, 6, common.seed)?);
        reports.push(verify_compatibility(&g, &d, &d_sub, 25, common.seed)?);
    }
    let text = reports_to_json(&reports);
    write_out(&common.out, "verify.json", &text)?;
    if all_passed(&reports) {
        println!("all {} checks passed", reports.len());
        Ok(())
    } else {
        let failed: Vec<&str> = reports
            .iter()
            .filter(|r| !r.passed)
            .map(|r| r.check.as_str())
            .collect();
        println!("failed checks: {}", failed.join(", "));
        Err(RunError::Check(CheckFailure { witness_json: text }))
    }
}

fn cmd_lattice(domain: &Path, common: &Common) -> Result<(), RunError> {
    let dom = LatticeDomain::<f64>::from_json(&read(domain)?)?;
    let k = lattice_kernel(&dom)?;
    write_out(&common.out, "kernel.csv", &k.to_csv())?;
    let radii = dom.radii_grid();
    let tsci = verify_tsci(&dom, (3, 5), 2)?;
    let (delta, delta_witness) = if radii.is_empty() {
        (f64::NAN, String::from("(radii grid empty at this resolution)"))
    } else {
        estimate_delta(&dom, &k, &radii, dom.boundary_ids().len())?
    };
    let masses = sector_masses(&dom, &k)?;
    let doc = json!({
        "h": dom.h,
        "origin": dom.origin,
        "interior_cells": dom.num_interior(),
        "boundary_cells": dom.boundary_ids().len(),
        "lipschitz": dom.lipschitz,
        "s": dom.s,
        "radii": radii,
        "delta": delta,
        "delta_witness": delta_witness,
        "origin_sector_masses": masses,
        "tsci": serde_json::to_value(&tsci).expect("report serializes"),
    });
    let text = serde_json::to_string_pretty(&doc).expect("doc serializes");
    write_out(&common.out, "lattice.json", &text)?;
    if tsci.passed {
        println!(
            "{} interior cells, {} boundary cells, delta {delta:.6e}",
            dom.num_interior(),
            dom.boundary_ids().len()
        );
        Ok(())
    } else {
        Err(RunError::Check(CheckFailure { witness_json: text }))
    }
}

fn parse_list(text: &str, what: &str) -> Result<Vec<f64>, Error> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| Error::Input(format!("bad {what} value '{s}'")))
        })
        .collect()
}

fn cmd_dahlberg(
    domain: &Path,
    p_list: &str,
    radii_arg: Option<&str>,
    family_size: usize,
    common: &Common,
) -> Result<(), RunError> {
    let dom = LatticeDomain::<f64>::from_json(&read(domain)?)?;
    let k = lattice_kernel(&dom)?;
    let ps = parse_list(p_list, "exponent")?;
    let radii = match radii_arg {
        Some(text) => parse_list(text, "radius")?,
        None => dom.radii_grid(),
    };
    if radii.is_empty() {
        return Err(RunError::Input(Error::Input(
            "radii grid is empty at this resolution".into(),
        )));
    }
    let family = default_family(&dom, &radii, family_size, common.seed)?;

    // measure suite: cell area, a corkscrew point mass, and a boundary layer
    let corkscrew = {
        let p0 = dom.boundary_ids()[0].to_string();
        let r = radii[0];
        dom.cylinder(&p0, r)?.corkscrew
    };
    let measures: Vec<(&str, TestMeasure<f64>)> = vec![
        ("area", TestMeasure::area(&dom)),
        ("corkscrew_point_mass", TestMeasure::point_mass(&corkscrew)),
        ("boundary_layer", TestMeasure::boundary_layer(&dom, 2.5 * dom.h)?),
    ];

    let mut runs = Vec::new();
    let mut all_ok = true;
    for &p in &ps {
        for (name, mu) in &measures {
            let rep = check_equivalence(&dom, &k, mu, p, &radii, &family)?;
            all_ok &= rep.bound_ok;
            runs.push(json!({
                "measure": name,
                "report": serde_json::to_value(&rep).expect("report serializes"),
            }));
            println!(
                "p={p} mu={name}: M={:.6e} K={:.6e} delta={:.6e} bound_ok={}",
                rep.m, rep.k, rep.delta, rep.bound_ok
            );
        }
    }

    // maximal-average power-mean cross-check on a seeded data vector
    let boundary: Vec<String> = dom.boundary_ids().iter().map(|s| s.to_string()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed.wrapping_add(1));
    let f = random_boundary::<f64>(&mut rng, &boundary);
    let mut power_mean_ok = true;
    for q in &boundary {
        let star = maximal_function(&dom, &k, &f, q, &radii)?;
        for &p in &ps {
            let fp = BoundaryData::new(
                f.values
                    .iter()
                    .map(|(key, v)| (key.clone(), v.powf(p)))
                    .collect(),
            );
            let rhs = maximal_function(&dom, &k, &fp, q, &radii)?.powf(1.0 / p);
            power_mean_ok &= star <= rhs + 1e-12;
        }
    }

    let doc = json!({ "runs": runs, "power_mean_ok": power_mean_ok });
    let text = serde_json::to_string_pretty(&doc).expect("doc serializes");
    write_out(&common.out, "dahlberg.json", &text)?;
    if all_ok && power_mean_ok {
        Ok(())
    } else {
        Err(RunError::Check(CheckFailure { witness_json: text }))
    }
}

fn run(cli: Cli) -> Result<(), RunError> {
    match cli.command {
        Command::Solve { input, domain, boundary, common } => {
            init_pool(common.jobs);
            cmd_solve(&input, &domain, &boundary, &common)
        }
        Command::Kernel { input, domain, common } => {
            init_pool(common.jobs);
            cmd_kernel(&input, &domain, &common)
        }
        Command::Harnack { input, domain, subset, table, common } => {
            init_pool(common.jobs);
            cmd_harnack(&input, &domain, &subset, table, &common)
        }
        Command::Union { input, domain, common } => {
            init_pool(common.jobs);
            cmd_union(&input, &domain, &common)
        }
        Command::Verify { input, domain, kernel, common } => {
            init_pool(common.jobs);
            cmd_verify(&input, &domain, kernel.as_deref(), &common)
        }
        Command::Lattice { domain, common } => {
            init_pool(common.jobs);
            cmd_lattice(&domain, &common)
        }
        Command::Dahlberg { domain, p, radii, family_size, common } => {
            init_pool(common.jobs);
            cmd_dahlberg(&domain, &p, radii.as_deref(), family_size, &common)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("HARMONIA_LOG")).init();
    let cli = Cli::parse();
    let out = match &cli.command {
        Command::Solve { common, .. }
        | Command::Kernel { common, .. }
        | Command::Harnack { common, .. }
        | Command::Union { common, .. }
        | Command::Verify { common, .. }
        | Command::Lattice { common, .. }
        | Command::Dahlberg { common, .. } => common.out.clone(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(RunError::Check(fail)) => {
            let _ = write_out(&out, "witnesses.json", &fail.witness_json);
            eprintln!("check failed; witnesses written to {}", out.join("witnesses.json").display());
            ExitCode::from(1)
        }
        Err(RunError::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
