//! `tnt`: construct the canonical tensors, run coherence and spectral
//! measures, verify and extract diagonal singular value decompositions,
//! and compute certified nuclear-norm bounds.
//!
//! Exit codes: 0 on success, 2 when a verification check fails (the report
//! names the violated clause), 1 on errors.

mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use report::{RunReport, SettingsEcho};
use tnt_core::canonical::{self, GroupTable};
use tnt_core::decomposition::{assemble, nuclear_cost, Decomposition, PureTensor};
use tnt_core::io;
use tnt_core::orthogonality::{
    bracket_alpha, bracket_alpha_upper, coherence_mu, dsvd_extract, dsvd_verify, mu_alpha,
    t_orthogonality_check, OptimizerSettings, Verdict,
};
use tnt_core::bounds::{nuclear_interval, spectral_bounds};

#[derive(Parser)]
#[command(name = "tnt", version, about = "tensor norm toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConstructName {
    Matmul,
    Strassen,
    Group,
    Dft,
    Det,
    Per,
    Glynn,
    Det3,
    Counterexample,
    GroupTuple,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GroupKind {
    Cyclic,
    Dihedral,
    Symmetric,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MeasureKind {
    Mu,
    MuAlpha,
    Bracket,
    BracketUpper,
    TOrtho,
}

/// Optimizer and tolerance flags shared by the measuring commands.
/// Defaults: seed 42, restarts 64, max iterations 10000, optimizer
/// tolerance 1e-12, verification tolerance 1e-9. A JSON settings object
/// can be supplied with `--settings`; explicit flags override it.
#[derive(Args, Clone)]
struct OptFlags {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    restarts: Option<u32>,
    #[arg(long)]
    max_iters: Option<u32>,
    #[arg(long)]
    opt_tol: Option<f64>,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long)]
    settings: Option<PathBuf>,
    /// Write the report to this path instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl OptFlags {
    fn resolve(&self) -> anyhow::Result<OptimizerSettings> {
        let mut s = OptimizerSettings::default();
        if let Some(path) = &self.settings {
            let data = std::fs::read_to_string(path)
                .with_context(|| format!("reading settings {}", path.display()))?;
            s = serde_json::from_str(&data)
                .with_context(|| format!("parsing settings {}", path.display()))?;
        }
        if let Some(v) = self.seed {
            s.seed = v;
        }
        if let Some(v) = self.restarts {
            s.restarts = v;
        }
        if let Some(v) = self.max_iters {
            s.max_iters = v;
        }
        if let Some(v) = self.opt_tol {
            s.opt_tol = v;
        }
        Ok(s)
    }

    fn echo(&self, s: &OptimizerSettings) -> SettingsEcho {
        SettingsEcho {
            seed: s.seed,
            restarts: s.restarts,
            max_iters: s.max_iters,
            opt_tol: s.opt_tol,
            tol: self.tol,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Construct a canonical tensor and/or decomposition and write JSON.
    Construct {
        name: ConstructName,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long)]
        q: Option<usize>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        /// Built-in group family (with --n); alternative to --table.
        #[arg(long)]
        kind: Option<GroupKind>,
        /// Group multiplication table JSON file.
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long)]
        tensor_out: Option<PathBuf>,
        #[arg(long)]
        dec_out: Option<PathBuf>,
        /// Write the report to this path instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coherence / spectral measures and t-orthogonality checks on a tuple
    /// file (decomposition JSON; coefficients are ignored).
    Measure {
        kind: MeasureKind,
        #[arg(long)]
        tuple: PathBuf,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        t: Option<f64>,
        #[command(flatten)]
        opt: OptFlags,
    },
    /// Verify that a decomposition file is a diagonal singular value
    /// decomposition; exit code 2 when a clause fails.
    VerifyDsvd {
        dec: PathBuf,
        #[command(flatten)]
        opt: OptFlags,
    },
    /// Certified spectral and nuclear bounds for a tensor file.
    Bounds {
        tensor: PathBuf,
        /// Known decomposition of the same tensor (sharpens the bounds).
        #[arg(long)]
        dec: Option<PathBuf>,
        #[command(flatten)]
        opt: OptFlags,
    },
    /// Greedy rank-one extraction; writes the decomposition found.
    Extract {
        tensor: PathBuf,
        #[arg(long)]
        dec_out: PathBuf,
        #[arg(long)]
        max_terms: Option<usize>,
        #[command(flatten)]
        opt: OptFlags,
    },
}

fn main() -> ExitCode {
    init_threads();
    // Exit code contract: 0 success, 2 verification failure, 1 any error
    // (including usage errors, which clap would otherwise exit 2 on).
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

/// TNT_THREADS caps optimizer parallelism; results do not depend on it.
fn init_threads() {
    if let Ok(v) = std::env::var("TNT_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
}

fn command_echo() -> String {
    std::env::args().collect::<Vec<_>>().join(" ")
}

fn witness_json(w: &Option<PureTensor>) -> serde_json::Value {
    match w {
        Some(p) => serde_json::to_value(io::pure_tensor_to_json(p)).unwrap_or(json!(null)),
        None => json!(null),
    }
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::CertifiedYes => "certified-yes",
        Verdict::CertifiedNo => "certified-no",
        Verdict::NumericallyConsistent => "numerically-consistent",
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let started = Instant::now();
    match cli.command {
        Command::Construct {
            name,
            p,
            q,
            r,
            n,
            kind,
            table,
            tensor_out,
            dec_out,
            out,
        } => {
            let mut inputs = Vec::new();
            if let Some(t) = &table {
                inputs.push(report::digest_file(t)?);
            }
            let (results, warnings) = run_construct(
                name,
                p,
                q,
                r,
                n,
                kind,
                table.as_deref(),
                tensor_out.as_deref(),
                dec_out.as_deref(),
            )?;
            let rep = RunReport {
                command: command_echo(),
                inputs,
                settings: None,
                results,
                warnings,
                wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
            };
            report::emit(&rep, out.as_deref())?;
            Ok(0)
        }
        Command::Measure {
            kind,
            tuple,
            alpha,
            t,
            opt,
        } => {
            let settings = opt.resolve()?;
            let inputs = vec![report::digest_file(&tuple)?];
            let loaded = io::load_tuple(&tuple)
                .with_context(|| format!("loading tuple {}", tuple.display()))?;
            let need_alpha = || {
                alpha.ok_or_else(|| anyhow::anyhow!("this measure needs --alpha"))
            };
            let results = match kind {
                MeasureKind::Mu => {
                    json!({ "kind": "mu", "value": coherence_mu(&loaded)? })
                }
                MeasureKind::MuAlpha => {
                    let a = need_alpha()?;
                    json!({ "kind": "mu-alpha", "alpha": a, "value": mu_alpha(&loaded, a)? })
                }
                MeasureKind::Bracket => {
                    let a = need_alpha()?;
                    let est = bracket_alpha(&loaded, a, &settings)?;
                    json!({
                        "kind": "bracket",
                        "alpha": a,
                        "value": est.value,
                        "status": est.status,
                        "route": est.route,
                        "witness": witness_json(&est.witness),
                    })
                }
                MeasureKind::BracketUpper => {
                    let a = need_alpha()?;
                    let est = bracket_alpha_upper(&loaded, a)?;
                    json!({
                        "kind": "bracket-upper",
                        "alpha": a,
                        "value": est.value,
                        "status": est.status,
                        "route": est.route,
                    })
                }
                MeasureKind::TOrtho => {
                    let t = t.ok_or_else(|| anyhow::anyhow!("t-ortho needs --t"))?;
                    let v = t_orthogonality_check(&loaded, t, opt.tol, &settings)?;
                    json!({
                        "kind": "t-ortho",
                        "t": t,
                        "verdict": verdict_name(v.verdict),
                        "detail": v.detail,
                        "max_found": v.max_found,
                        "witness": witness_json(&v.witness),
                    })
                }
            };
            let rep = RunReport {
                command: command_echo(),
                inputs,
                settings: Some(opt.echo(&settings)),
                results,
                warnings: Vec::new(),
                wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
            };
            report::emit(&rep, opt.out.as_deref())?;
            Ok(0)
        }
        Command::VerifyDsvd { dec, opt } => {
            let settings = opt.resolve()?;
            let inputs = vec![report::digest_file(&dec)?];
            let loaded = io::load_decomposition(&dec)
                .with_context(|| format!("loading decomposition {}", dec.display()))?;
            let (results, code) = match dsvd_verify(&loaded, opt.tol, &settings) {
                Ok(r) => (
                    json!({
                        "verified": true,
                        "singular_values": r.singular_values,
                        "nuclear": r.nuclear,
                        "spectral": r.spectral,
                        "frobenius": r.frobenius,
                        "unit_ok": r.unit_ok,
                        "two_ortho": {
                            "verdict": verdict_name(r.two_ortho.verdict),
                            "detail": r.two_ortho.detail,
                            "max_found": r.two_ortho.max_found,
                        },
                    }),
                    0u8,
                ),
                Err(f) => (
                    json!({
                        "verified": false,
                        "clause": f.clause,
                        "detail": f.detail,
                        "witness": witness_json(&f.witness),
                    }),
                    2u8,
                ),
            };
            let rep = RunReport {
                command: command_echo(),
                inputs,
                settings: Some(opt.echo(&settings)),
                results,
                warnings: Vec::new(),
                wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
            };
            report::emit(&rep, opt.out.as_deref())?;
            Ok(code)
        }
        Command::Bounds { tensor, dec, opt } => {
            let settings = opt.resolve()?;
            let mut inputs = vec![report::digest_file(&tensor)?];
            let t = io::load_tensor(&tensor)
                .with_context(|| format!("loading tensor {}", tensor.display()))?;
            let loaded_dec = match &dec {
                Some(path) => {
                    inputs.push(report::digest_file(path)?);
                    Some(
                        io::load_decomposition(path)
                            .with_context(|| format!("loading decomposition {}", path.display()))?,
                    )
                }
                None => None,
            };
            let sb = spectral_bounds(&t, &settings)?;
            let ni = nuclear_interval(&t, loaded_dec.as_ref(), &settings)?;
            let results = json!({
                "spectral": {
                    "lower": sb.lower,
                    "upper": sb.upper,
                    "witness": witness_json(&sb.witness),
                },
                "nuclear": {
                    "lower": ni.lower,
                    "upper": ni.upper,
                },
            });
            let rep = RunReport {
                command: command_echo(),
                inputs,
                settings: Some(opt.echo(&settings)),
                results,
                warnings: Vec::new(),
                wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
            };
            report::emit(&rep, opt.out.as_deref())?;
            Ok(0)
        }
        Command::Extract {
            tensor,
            dec_out,
            max_terms,
            opt,
        } => {
            let settings = opt.resolve()?;
            let inputs = vec![report::digest_file(&tensor)?];
            let t = io::load_tensor(&tensor)
                .with_context(|| format!("loading tensor {}", tensor.display()))?;
            let cap = max_terms.unwrap_or_else(|| t.space().total_dim().min(256));
            let outcome = dsvd_extract(&t, opt.tol, cap, &settings)?;
            io::save_decomposition(&dec_out, &outcome.decomposition)?;
            let singular_values: Vec<f64> = outcome
                .decomposition
                .terms()
                .iter()
                .map(|t| t.coeff.re)
                .collect();
            let mut warnings = Vec::new();
            if !outcome.complete {
                warnings.push(format!(
                    "extraction incomplete after {} terms; residual {:.3e}",
                    singular_values.len(),
                    outcome.residual_norm
                ));
            }
            let results = json!({
                "terms": singular_values.len(),
                "singular_values": singular_values,
                "residual_norm": outcome.residual_norm,
                "complete": outcome.complete,
                "decomposition_path": dec_out.display().to_string(),
            });
            let rep = RunReport {
                command: command_echo(),
                inputs,
                settings: Some(opt.echo(&settings)),
                results,
                warnings,
                wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
            };
            report::emit(&rep, opt.out.as_deref())?;
            Ok(0)
        }
    }
}

fn require(opt: Option<usize>, flag: &str) -> anyhow::Result<usize> {
    opt.ok_or_else(|| anyhow::anyhow!("missing required flag --{flag}"))
}

fn build_group(
    kind: Option<GroupKind>,
    n: Option<usize>,
    table: Option<&Path>,
) -> anyhow::Result<GroupTable> {
    if let Some(path) = table {
        if kind.is_some() {
            bail!("--table and --kind are mutually exclusive");
        }
        return io::load_group_table(path)
            .with_context(|| format!("loading group table {}", path.display()));
    }
    let n = require(n, "n")?;
    match kind {
        Some(GroupKind::Cyclic) => Ok(GroupTable::cyclic(n)?),
        Some(GroupKind::Dihedral) => Ok(GroupTable::dihedral(n)?),
        Some(GroupKind::Symmetric) => {
            if n != 3 {
                bail!("only the symmetric group on 3 letters is built in");
            }
            Ok(GroupTable::symmetric3())
        }
        None => bail!("group construction needs --kind or --table"),
    }
}

struct Artifacts {
    entries: Vec<serde_json::Value>,
}

impl Artifacts {
    fn new() -> Self {
        Self {
            entries: Vec::new(),
        }
    }

    fn tensor(
        &mut self,
        path: Option<&Path>,
        t: &tnt_core::DenseTensor,
    ) -> anyhow::Result<()> {
        if let Some(path) = path {
            io::save_tensor(path, t)?;
            self.entries.push(json!({
                "kind": "tensor",
                "path": path.display().to_string(),
                "dims": t.space().dims(),
            }));
        }
        Ok(())
    }

    fn decomposition(&mut self, path: Option<&Path>, d: &Decomposition) -> anyhow::Result<()> {
        if let Some(path) = path {
            io::save_decomposition(path, d)?;
            self.entries.push(json!({
                "kind": "decomposition",
                "path": path.display().to_string(),
                "dims": d.space().dims(),
                "terms": d.len(),
                "nuclear_cost": nuclear_cost(d),
            }));
        }
        Ok(())
    }

    fn tuple(&mut self, path: Option<&Path>, t: &tnt_core::PureTuple) -> anyhow::Result<()> {
        if let Some(path) = path {
            let j = io::tuple_to_json(t);
            std::fs::write(path, format!("{}\n", io::to_json_string(&j)?))?;
            self.entries.push(json!({
                "kind": "tuple",
                "path": path.display().to_string(),
                "dims": t.space().dims(),
                "members": t.len(),
            }));
        }
        Ok(())
    }
}

#[allow(clippy::too_many_arguments)]
fn run_construct(
    name: ConstructName,
    p: Option<usize>,
    q: Option<usize>,
    r: Option<usize>,
    n: Option<usize>,
    kind: Option<GroupKind>,
    table: Option<&Path>,
    tensor_out: Option<&Path>,
    dec_out: Option<&Path>,
) -> anyhow::Result<(serde_json::Value, Vec<String>)> {
    if tensor_out.is_none() && dec_out.is_none() {
        bail!("nothing to do: pass --tensor-out and/or --dec-out");
    }
    let mut artifacts = Artifacts::new();
    let warnings = Vec::new();
    let label = match name {
        ConstructName::Matmul => {
            let (p, q, r) = (require(p, "p")?, require(q, "q")?, require(r, "r")?);
            let (dense, dec) = canonical::matmul_tensor(p, q, r)?;
            artifacts.tensor(tensor_out, &dense)?;
            artifacts.decomposition(dec_out, &dec)?;
            format!("matmul p={p} q={q} r={r}")
        }
        ConstructName::Strassen => {
            let dec = canonical::strassen_decomposition();
            artifacts.tensor(tensor_out, &assemble(&dec))?;
            artifacts.decomposition(dec_out, &dec)?;
            "strassen".into()
        }
        ConstructName::Group => {
            let g = build_group(kind, n, table)?;
            artifacts.tensor(tensor_out, &canonical::group_tensor(&g)?)?;
            if dec_out.is_some() {
                bail!("group construction emits a tensor only; use `dft` for the cyclic decomposition");
            }
            format!("group order={}", g.order())
        }
        ConstructName::Dft => {
            let n = require(n, "n")?;
            let dec = canonical::dft_decomposition(n)?;
            artifacts.tensor(tensor_out, &canonical::group_tensor(&GroupTable::cyclic(n)?)?)?;
            artifacts.decomposition(dec_out, &dec)?;
            format!("dft n={n}")
        }
        ConstructName::Det => {
            let n = require(n, "n")?;
            artifacts.tensor(tensor_out, &canonical::determinant_tensor(n)?)?;
            if dec_out.is_some() {
                bail!("det emits a tensor only; use `det3` for the rank-5 decomposition");
            }
            format!("det n={n}")
        }
        ConstructName::Per => {
            let n = require(n, "n")?;
            artifacts.tensor(tensor_out, &canonical::permanent_tensor(n)?)?;
            if dec_out.is_some() {
                bail!("per emits a tensor only; use `glynn` for its decomposition");
            }
            format!("per n={n}")
        }
        ConstructName::Glynn => {
            let n = require(n, "n")?;
            let dec = canonical::glynn_decomposition(n)?;
            artifacts.tensor(tensor_out, &canonical::permanent_tensor(n)?)?;
            artifacts.decomposition(dec_out, &dec)?;
            format!("glynn n={n}")
        }
        ConstructName::Det3 => {
            let dec = canonical::det3_decomposition();
            artifacts.tensor(tensor_out, &canonical::determinant_tensor(3)?)?;
            artifacts.decomposition(dec_out, &dec)?;
            "det3".into()
        }
        ConstructName::Counterexample => {
            let tuple = canonical::pairwise_counterexample();
            if tensor_out.is_some() {
                bail!("counterexample is a tuple; pass --dec-out");
            }
            artifacts.tuple(dec_out, &tuple)?;
            "counterexample".into()
        }
        ConstructName::GroupTuple => {
            let g = build_group(kind, n, table)?;
            let tuple = canonical::group_tuple(&g)?;
            if tensor_out.is_some() {
                bail!("group-tuple is a tuple; pass --dec-out");
            }
            artifacts.tuple(dec_out, &tuple)?;
            format!("group-tuple order={}", g.order())
        }
    };
    Ok((
        json!({ "constructed": label, "artifacts": artifacts.entries }),
        warnings,
    ))
}
