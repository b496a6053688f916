//! Command-line front end: rank tables, outer-automorphism graded pieces,
//! cohomology tables, the deformation subcommands, and the seeded property
//! suites. All outputs are deterministic for a fixed configuration and seed.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use liedef::cohom::{cohomology, ModuleData};
use liedef::deform::{eta_deformation, miniversal_step, quadratic_presentation, tangent_space_rep};
use liedef::format;
use liedef::free::{surface_algebra, SurfaceSpec};
use liedef::outgr::out_rank;
use liedef::{verify, CoeffRing, GradedLieAlgebra};

#[derive(Parser)]
#[command(
    name = "liedef",
    version,
    about = "Weight-graded Lie algebras of punctured curves: ranks, cohomology, deformations"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct RingArgs {
    /// Prime l of the coefficient ring Z/l^k
    #[arg(long, default_value_t = 2)]
    l: u64,
    /// Exponent k of the coefficient ring Z/l^k
    #[arg(long, default_value_t = 1)]
    k: u32,
}

#[derive(Args)]
struct SurfaceArgs {
    #[command(flatten)]
    ring: RingArgs,
    /// Genus of the surface
    #[arg(long)]
    genus: u32,
    /// Number of punctures
    #[arg(long)]
    punctures: u32,
    /// Truncation degree N
    #[arg(long, default_value_t = 6)]
    max_degree: u32,
    /// Write the table to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CohomArgs {
    #[command(flatten)]
    ring: RingArgs,
    /// Algebra file (brackets variant); alternative to --genus/--punctures
    #[arg(long)]
    algebra: Option<PathBuf>,
    #[arg(long)]
    genus: Option<u32>,
    #[arg(long)]
    punctures: Option<u32>,
    /// Truncation degree when building a surface algebra
    #[arg(long, default_value_t = 4)]
    max_degree: u32,
    /// Restrict to one cochain degree q (0..=3)
    #[arg(long)]
    q: Option<u32>,
    /// Restrict to one grade m
    #[arg(long)]
    grade: Option<i64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DeformArgs {
    /// Algebra file holding the special fiber (brackets variant)
    #[arg(long)]
    algebra: PathBuf,
    /// Number of miniversal induction steps
    #[arg(long, default_value_t = 2)]
    steps: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RepArgs {
    /// Representation file (source, target, generator images)
    #[arg(long)]
    rep: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Seed for the randomized property suites
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Run only the named suites (repeatable); others are marked skipped
    #[arg(long = "suite")]
    suites: Vec<String>,
    /// Also validate this algebra file before running suites
    #[arg(long)]
    algebra: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Ranks of the graded pieces gr^m through the truncation degree
    Ranks(SurfaceArgs),
    /// Outer-automorphism graded piece dimensions with exactness certificates
    OutRanks(SurfaceArgs),
    /// Chevalley-Eilenberg cohomology dimensions (q, m, dim, exact-through)
    Cohomology(CohomArgs),
    /// Deformation machinery
    Deform {
        #[command(subcommand)]
        cmd: DeformCmd,
    },
    /// Seeded property suites
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum DeformCmd {
    /// Emit the tautological first-order deformation as an envelope document
    Eta(DeformArgs),
    /// Run the miniversal base induction and emit the resulting envelope
    Miniversal(DeformArgs),
    /// Tangent space of representation deformations: dim H^1(G, Ad.rho)(0)
    Tangent(RepArgs),
    /// Quadratic presentation of the universal deformation parameters
    Quadratic(RepArgs),
}

enum CliError {
    /// bad configuration or unreadable input: exit 2
    Usage(String),
    /// a verification failure: exit 1
    Failure(String),
}

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn ring_of(args: &RingArgs) -> Result<CoeffRing, CliError> {
    CoeffRing::new(args.l, args.k).map_err(usage)
}

fn cmd_ranks(args: &SurfaceArgs) -> Result<(), CliError> {
    let ring = ring_of(&args.ring)?;
    let n = args.max_degree;
    if n < 1 {
        return Err(CliError::Usage("--max-degree must be at least 1".into()));
    }
    let spec = SurfaceSpec::new(args.genus, args.punctures).map_err(usage)?;
    let surf = surface_algebra(spec, ring, n.max(2)).map_err(usage)?;
    let mut csv = String::from("degree,rank,exact_through\n");
    for (d, r) in surf.algebra().rank_table() {
        if d <= n {
            csv.push_str(&format!("{d},{r},{n}\n"));
        }
    }
    emit(&args.out, &csv)
}

fn cmd_out_ranks(args: &SurfaceArgs) -> Result<(), CliError> {
    let ring = ring_of(&args.ring)?;
    let n = args.max_degree;
    if n < 2 {
        return Err(CliError::Usage("--max-degree must be at least 2".into()));
    }
    let spec = SurfaceSpec::new(args.genus, args.punctures).map_err(usage)?;
    let surf = surface_algebra(spec, ring, n).map_err(usage)?;
    let mut csv = String::from(
        "m,dim_m,dim_middle,rank_g,rank_f,out_dim,g_injective,f_surjective,fg_zero,middle_exact,certificate,exact_through\n",
    );
    for m in 1..=n {
        if m + 2 > n {
            csv.push_str(&format!("{m},,,,,,,,,,insufficient-N,{n}\n"));
            continue;
        }
        let rep = out_rank(&surf, m).map_err(|e| CliError::Failure(e.to_string()))?;
        let cert = if !rep.certified {
            "uncertified"
        } else if rep.all_certificates() {
            "certified"
        } else {
            "failed"
        };
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            rep.m,
            rep.dim_m,
            rep.dim_middle,
            rep.rank_g,
            rep.rank_f_induced,
            rep.out_dim,
            rep.g_injective,
            rep.f_surjective,
            rep.fg_zero,
            rep.middle_exact,
            cert,
            n
        ));
    }
    emit(&args.out, &csv)
}

fn load_lie(path: &PathBuf) -> Result<GradedLieAlgebra, CliError> {
    let s = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let doc = format::algebra_doc_from_str(&s).map_err(usage)?;
    format::lie_from_doc(&doc).map_err(usage)
}

fn cmd_cohomology(args: &CohomArgs) -> Result<(), CliError> {
    let l = match (&args.algebra, args.genus, args.punctures) {
        (Some(path), _, _) => load_lie(path)?,
        (None, Some(g), Some(p)) => {
            let ring = ring_of(&args.ring)?;
            let spec = SurfaceSpec::new(g, p).map_err(usage)?;
            surface_algebra(spec, ring, args.max_degree.max(2))
                .map_err(usage)?
                .algebra()
                .clone()
        }
        _ => {
            return Err(CliError::Usage(
                "provide --algebra or both --genus and --punctures".into(),
            ))
        }
    };
    let md = ModuleData::adjoint(&l);
    let n = l.truncation() as i64;
    let qs: Vec<u32> = match args.q {
        Some(q) if q <= 3 => vec![q],
        Some(q) => return Err(CliError::Usage(format!("--q {q} out of range (0..=3)"))),
        None => vec![0, 1, 2, 3],
    };
    let ms: Vec<i64> = match args.grade {
        Some(m) => vec![m],
        None => (-n..=n).collect(),
    };
    let mut csv = String::from("q,m,dim,exact_through\n");
    for &q in &qs {
        for &m in &ms {
            let h = cohomology(&l, &md, q, m).map_err(|e| CliError::Failure(e.to_string()))?;
            csv.push_str(&format!("{q},{m},{},{}\n", h.dim, h.exact_through));
        }
    }
    emit(&args.out, &csv)
}

fn cmd_deform_eta(args: &DeformArgs) -> Result<(), CliError> {
    let l = load_lie(&args.algebra)?;
    let step = eta_deformation(&l, None).map_err(|e| CliError::Failure(e.to_string()))?;
    let doc = format::deformation_to_doc(&step.eta);
    emit(&args.out, &format::to_json_string(&doc))
}

fn cmd_deform_miniversal(args: &DeformArgs) -> Result<(), CliError> {
    if args.steps < 1 {
        return Err(CliError::Usage("--steps must be at least 1".into()));
    }
    let l = load_lie(&args.algebra)?;
    let mut step = eta_deformation(&l, None).map_err(|e| CliError::Failure(e.to_string()))?;
    for _ in 1..args.steps {
        step = miniversal_step(&step).map_err(|e| CliError::Failure(e.to_string()))?;
    }
    let envelope = serde_json::json!({
        "step": step.k,
        "deformation": serde_json::to_value(format::deformation_to_doc(&step.eta))
            .expect("envelope serialization"),
    });
    let mut s = serde_json::to_string_pretty(&envelope).expect("envelope serialization");
    s.push('\n');
    emit(&args.out, &s)
}

fn load_rep(
    path: &PathBuf,
) -> Result<(GradedLieAlgebra, GradedLieAlgebra, liedef::lie::GradedLieHom), CliError> {
    let s = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let doc = format::representation_doc_from_str(&s).map_err(usage)?;
    format::representation_from_doc(&doc).map_err(usage)
}

fn cmd_deform_tangent(args: &RepArgs) -> Result<(), CliError> {
    let (g, lbar, rho) = load_rep(&args.rep)?;
    let h1 = tangent_space_rep(&g, &lbar, &rho).map_err(|e| CliError::Failure(e.to_string()))?;
    let csv = format!(
        "q,m,dim,exact_through\n1,0,{},{}\n",
        h1.dim, h1.exact_through
    );
    emit(&args.out, &csv)
}

fn cmd_deform_quadratic(args: &RepArgs) -> Result<(), CliError> {
    let (g, lbar, rho) = load_rep(&args.rep)?;
    let p = quadratic_presentation(&g, &lbar, &rho)
        .map_err(|e| CliError::Failure(e.to_string()))?;
    let relations = p.relations.map(|rels| {
        rels.iter()
            .map(|rel| {
                rel.iter()
                    .map(|((i, j), c)| serde_json::json!({"pair": [i, j], "coeff": c}))
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>()
    });
    let doc = serde_json::json!({
        "parameters": p.params,
        "relations": relations,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("presentation serialization");
    s.push('\n');
    emit(&args.out, &s)
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), CliError> {
    let mut lines = String::new();
    if let Some(path) = &args.algebra {
        let s = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        match format::load_algebra(&s) {
            Ok(_) => lines.push_str(&format!("fixture {}: ok\n", path.display())),
            Err(e) => {
                lines.push_str(&format!("fixture {}: FAILED ({e})\n", path.display()));
                emit(&args.out, &lines)?;
                return Err(CliError::Failure(format!(
                    "fixture {} failed validation",
                    path.display()
                )));
            }
        }
    }
    for s in &args.suites {
        if !verify::SUITES.contains(&s.as_str()) {
            return Err(CliError::Usage(format!(
                "unknown suite {s}; available: {}",
                verify::SUITES.join(", ")
            )));
        }
    }
    let only = if args.suites.is_empty() {
        None
    } else {
        Some(args.suites.as_slice())
    };
    let report = verify::run(args.seed, only);
    for suite in &report.suites {
        let status = if suite.skipped {
            "skipped".to_string()
        } else if suite.failures.is_empty() {
            "pass".to_string()
        } else {
            format!("FAIL ({})", suite.failures.join("; "))
        };
        lines.push_str(&format!(
            "suite {}: {} ({} checks)\n",
            suite.name, status, suite.checks
        ));
    }
    emit(&args.out, &lines)?;
    if report.all_passed() {
        Ok(())
    } else {
        Err(CliError::Failure("property suite failures".into()))
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.cmd {
        Cmd::Ranks(a) => cmd_ranks(a),
        Cmd::OutRanks(a) => cmd_out_ranks(a),
        Cmd::Cohomology(a) => cmd_cohomology(a),
        Cmd::Deform { cmd } => match cmd {
            DeformCmd::Eta(a) => cmd_deform_eta(a),
            DeformCmd::Miniversal(a) => cmd_deform_miniversal(a),
            DeformCmd::Tangent(a) => cmd_deform_tangent(a),
            DeformCmd::Quadratic(a) => cmd_deform_quadratic(a),
        },
        Cmd::Verify(a) => cmd_verify(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}
