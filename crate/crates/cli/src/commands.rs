use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use parind_core::chars::{enumerate_characters, CharFilter, MAX_SCAN_MODULUS};
use parind_core::classify::{classify_with_tol, closed_form_gamma_set, HeckeParams};
use parind_core::dihecke::{gamma_set_oracle, scan_non_simple, scan_points};
use parind_core::fingrp::{cache, FiniteGroup, GroupSpec, GroupType, ParabolicData, DEFAULT_MAX_ORDER};
use parind_core::finhecke::{check_lambda, verify};
use parind_core::finrep::{
    cuspidal_character_gl2, gl2_class, gl2_theta, green_constant_samples, realize_cuspidal_gl2, Gl2Class,
};
use parind_core::{Case, CharContext, Scalar};

use crate::envelope::{Backend, CliError, OutputFormat, RunConfig, Summary, DEFAULT_SEED, DEFAULT_TOL};
use crate::selftest;

#[derive(Debug, Parser)]
#[command(name = "parind", version, about = "Reducibility of depth-zero Siegel-parabolic induction for U(n,n)")]
pub struct Cli {
    /// Directory for the group cache.
    #[arg(long, global = true, env = "PARIND_CACHE")]
    pub cache: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Backend::Exact)]
    pub backend: Backend,
    /// Tolerance for float comparisons.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Seed for randomized spot checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reducibility verdict for (q, n, case, θ, ν(ζ)).
    Classify(ClassifyArgs),
    /// Finite Hecke algebra checks.
    Hecke {
        #[command(subcommand)]
        cmd: HeckeCmd,
    },
    /// Same as `hecke verify`.
    Verify(VerifyArgs),
    /// Run the acceptance suite.
    Selftest(SelftestArgs),
    /// Character exponents.
    Chars {
        #[command(subcommand)]
        cmd: CharsCmd,
    },
    /// Finite classical groups.
    Group {
        #[command(subcommand)]
        cmd: GroupCmd,
    },
    /// Cuspidal representations of GL_2.
    Rep {
        #[command(subcommand)]
        cmd: RepCmd,
    },
    /// The two-dimensional module of the dihedral Hecke algebra.
    Module {
        #[command(subcommand)]
        cmd: ModuleCmd,
    },
}

#[derive(Debug, Subcommand)]
pub enum HeckeCmd {
    Verify(VerifyArgs),
}

#[derive(Debug, Subcommand)]
pub enum CharsCmd {
    Enumerate(EnumerateArgs),
}

#[derive(Debug, Subcommand)]
pub enum GroupCmd {
    Build(GroupBuildArgs),
}

#[derive(Debug, Subcommand)]
pub enum RepCmd {
    Cuspidal(CuspidalArgs),
}

#[derive(Debug, Subcommand)]
pub enum ModuleCmd {
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub case: Case,
    /// Exponent of θ, or `all` for every exponent.
    #[arg(long)]
    pub theta: String,
    /// ν(ζ): `3`, `-1/3`, `1-2*sqrtq`, `0.5`, or `re,im`. Repeat for a batch.
    #[arg(long, required = true, allow_hyphen_values = true)]
    pub nu: Vec<String>,
    /// Accepted for compatibility; output is JSON unless `--format table`.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub group: GroupType,
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub theta: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_ORDER)]
    pub max_order: u64,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    /// Restrict to criteria by id or name (repeatable).
    #[arg(long)]
    pub only: Vec<String>,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub case: Case,
    /// all | regular | regular-and-condition
    #[arg(long, default_value = "all")]
    pub filter: CharFilter,
}

#[derive(Debug, Args)]
pub struct GroupBuildArgs {
    #[arg(long = "type")]
    pub kind: GroupType,
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub q: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_ORDER)]
    pub max_order: u64,
}

#[derive(Debug, Args)]
pub struct CuspidalArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub theta: u64,
    /// Write the matrix model to this JSON file.
    #[arg(long)]
    pub model: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub case: Case,
    /// Float sweep `lo:hi:steps` over the real line, plus `steps` points on the unit circle.
    #[arg(long, allow_hyphen_values = true)]
    pub scan: Option<String>,
}

impl Cli {
    pub fn config(&self) -> RunConfig {
        RunConfig {
            cache_dir: self.cache.clone(),
            backend: self.backend,
            tolerance: self.tol,
            parallelism: self.threads.unwrap_or_else(rayon::current_num_threads),
            format: self.format,
            seed: self.seed,
        }
    }
}

/// What a subcommand produced, before it is wrapped in an envelope.
#[derive(Debug, Clone)]
pub struct Output {
    pub command: String,
    pub payload: Value,
    pub summary: Option<Summary>,
    /// Notes for stderr; never part of the payload.
    pub notes: Vec<String>,
}

impl Output {
    fn new(command: impl Into<String>, payload: impl Serialize) -> Result<Self, CliError> {
        Ok(Self {
            command: command.into(),
            payload: serde_json::to_value(payload)?,
            summary: None,
            notes: Vec::new(),
        })
    }
}

/// Canonical command name for envelopes and error reports.
pub fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Classify(_) => "classify",
        Command::Hecke { .. } | Command::Verify(_) => "hecke verify",
        Command::Selftest(_) => "selftest",
        Command::Chars { .. } => "chars enumerate",
        Command::Group { .. } => "group build",
        Command::Rep { .. } => "rep cuspidal",
        Command::Module { .. } => "module oracle",
    }
}

pub fn run(cli: &Cli, cfg: &RunConfig) -> Result<Output, CliError> {
    match &cli.command {
        Command::Classify(a) => cmd_classify(a, cfg),
        Command::Hecke { cmd: HeckeCmd::Verify(a) } | Command::Verify(a) => cmd_verify(a, cfg),
        Command::Selftest(a) => cmd_selftest(a, cfg),
        Command::Chars { cmd: CharsCmd::Enumerate(a) } => cmd_chars(a),
        Command::Group { cmd: GroupCmd::Build(a) } => cmd_group(a, cfg),
        Command::Rep { cmd: RepCmd::Cuspidal(a) } => cmd_rep(a),
        Command::Module { cmd: ModuleCmd::Oracle(a) } => cmd_module(a, cfg),
    }
}

fn parse_nu(s: &str, q: u64, backend: Backend) -> Result<Scalar, CliError> {
    let v = Scalar::parse(s, q).ok_or_else(|| CliError::Usage(format!("cannot parse nu {s:?}")))?;
    Ok(match backend {
        Backend::Exact => v,
        Backend::Float => v.to_float(),
    })
}

pub fn cmd_classify(a: &ClassifyArgs, cfg: &RunConfig) -> Result<Output, CliError> {
    let ctx = CharContext::new(a.q, a.n, a.case)?;
    let thetas: Vec<u64> = if a.theta == "all" {
        if ctx.modulus() > MAX_SCAN_MODULUS {
            return Err(parind_core::Error::TooLarge(format!(
                "N = {} exceeds the scan cap {MAX_SCAN_MODULUS}",
                ctx.modulus()
            ))
            .into());
        }
        (0..ctx.modulus()).collect()
    } else {
        vec![a.theta.parse().map_err(|_| CliError::Usage(format!("bad theta {:?}", a.theta)))?]
    };
    let nus = a
        .nu
        .iter()
        .map(|s| parse_nu(s, a.q, cfg.backend))
        .collect::<Result<Vec<_>, _>>()?;
    let mut reports = Vec::new();
    let mut notes = Vec::new();
    for &t in &thetas {
        for nu in &nus {
            let r = classify_with_tol(a.q, a.n, a.case, t, nu.clone(), cfg.tolerance)?;
            notes.extend(r.warnings.iter().map(|w| format!("theta={t}: {w}")));
            reports.push(r.to_json());
        }
    }
    let mut out = if reports.len() == 1 {
        Output::new("classify", &reports[0])?
    } else {
        Output::new("classify", &reports)?
    };
    out.notes = notes;
    Ok(out)
}

pub fn cmd_verify(a: &VerifyArgs, cfg: &RunConfig) -> Result<Output, CliError> {
    let r = verify(a.group, a.n, a.q, a.theta, a.max_order, cfg.cache_dir.as_deref())?;
    let mut payload = serde_json::to_value(&r)?;
    payload["normalized_relation"] = match r.normalized {
        Some((x, y)) => json!(format!("phi^2 = {x:.6}*phi + {y:.6}")),
        None => Value::Null,
    };
    if !r.pass {
        let message = match (r.lambda, r.expected_lambda) {
            (Some(m), Some(e)) => match check_lambda(m, e) {
                Err(err) => err.to_string(),
                Ok(()) => "finite Hecke checks failed".into(),
            },
            _ => "finite Hecke checks failed".into(),
        };
        return Err(CliError::Verification { message, details: payload });
    }
    let mut out = Output::new("hecke verify", payload)?;
    out.summary = Some(Summary::from_flags([r.pass]));
    Ok(out)
}

pub fn cmd_selftest(a: &SelftestArgs, cfg: &RunConfig) -> Result<Output, CliError> {
    let opts = selftest::Options::from_config(cfg);
    let results = selftest::run(&a.only, &opts)?;
    let notes = results
        .iter()
        .map(|r| format!("criterion {} ({}) {:.2}s", r.id, r.name, r.seconds))
        .collect();
    let summary = Summary::from_flags(results.iter().map(|r| r.pass));
    let payload = json!({ "backend": cfg.backend, "criteria": results });
    if !summary.pass {
        return Err(CliError::Selftest { failed: summary.failed, details: payload });
    }
    let mut out = Output::new("selftest", payload)?;
    out.summary = Some(summary);
    out.notes = notes;
    Ok(out)
}

pub fn cmd_chars(a: &EnumerateArgs) -> Result<Output, CliError> {
    let ctx = CharContext::new(a.q, a.n, a.case)?;
    let list: Vec<_> = enumerate_characters(&ctx, a.filter)?
        .iter()
        .map(|c| c.summary())
        .collect();
    Output::new("chars enumerate", list)
}

#[derive(Serialize)]
struct GroupPayload {
    #[serde(rename = "type")]
    kind: GroupType,
    n: u32,
    q: u64,
    dim: usize,
    order: usize,
    parabolic_order: usize,
    levi_order: usize,
    unipotent_order: usize,
    num_double_cosets: usize,
    double_coset_sizes: Vec<usize>,
    form_preserved: bool,
    det_distribution: Vec<(u32, usize)>,
}

pub fn cmd_group(a: &GroupBuildArgs, cfg: &RunConfig) -> Result<Output, CliError> {
    let spec = GroupSpec::new(a.kind, a.n, a.q)?;
    let (g, hit) = cache::build_cached(spec, a.max_order, cfg.cache_dir.as_deref())?;
    let (parabolic_order, levi_order, unipotent_order, sizes) = if spec.kind == GroupType::Gl {
        (0, 0, 0, Vec::new())
    } else {
        let pd = ParabolicData::siegel(&g)?;
        (
            pd.p.len(),
            pd.levi.len(),
            pd.unipotent.len(),
            pd.double_cosets.iter().map(|d| d.size).collect(),
        )
    };
    let payload = GroupPayload {
        kind: a.kind,
        n: a.n,
        q: a.q,
        dim: g.dim(),
        order: g.order(),
        parabolic_order,
        levi_order,
        unipotent_order,
        num_double_cosets: sizes.len(),
        double_coset_sizes: sizes,
        form_preserved: g.form_check(),
        det_distribution: g.det_distribution(),
    };
    let mut out = Output::new("group build", payload)?;
    if cfg.cache_dir.is_some() {
        out.notes.push(format!("cache {}", if hit { "hit" } else { "miss" }));
    }
    Ok(out)
}

#[derive(Serialize)]
struct ClassRow {
    #[serde(rename = "type")]
    kind: &'static str,
    /// Discrete logs of the eigenvalues in `F_{q²}`.
    eigenvalue_logs: Vec<u32>,
    size: usize,
    re: f64,
    im: f64,
}

fn class_key(c: Gl2Class, t: &parind_core::gf::Tables) -> (&'static str, Vec<u32>) {
    let log = |x: u32| t.log(x).expect("eigenvalues are units");
    let pair = |x: u32, y: u32| {
        let mut v = vec![log(x), log(y)];
        v.sort_unstable();
        v
    };
    match c {
        Gl2Class::Central { z } => ("central", vec![log(z)]),
        Gl2Class::CentralUnipotent { z } => ("central-unipotent", vec![log(z)]),
        Gl2Class::Split { a, b } => ("split", pair(a, b)),
        Gl2Class::Elliptic { x, xq } => ("elliptic", pair(x, xq)),
    }
}

fn clean(x: f64) -> f64 {
    // Round away float noise so payloads are stable; -0.0 prints as 0.
    let r = (x * 1e9).round() / 1e9;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

pub fn cmd_rep(a: &CuspidalArgs) -> Result<Output, CliError> {
    let g = FiniteGroup::build(GroupSpec::new(GroupType::Gl, 2, a.q)?, DEFAULT_MAX_ORDER)?;
    let theta = gl2_theta(a.q, a.theta)?;
    let chi = cuspidal_character_gl2(&g, &theta)?;
    let t = g.tables();
    let mut classes: BTreeMap<(&'static str, Vec<u32>), (usize, Complex64)> = BTreeMap::new();
    for x in 0..g.order() as u32 {
        let key = class_key(gl2_class(t, a.q, g.element(x)), t);
        let e = classes.entry(key).or_insert((0, chi.values[x as usize]));
        e.0 += 1;
    }
    let rows: Vec<ClassRow> = classes
        .into_iter()
        .map(|((kind, eigenvalue_logs), (size, v))| ClassRow {
            kind,
            eigenvalue_logs,
            size,
            re: clean(v.re),
            im: clean(v.im),
        })
        .collect();
    let mut payload = json!({
        "q": a.q,
        "theta": a.theta,
        "orbit": theta.orbit(),
        "degree": 2,
        "num_classes": rows.len(),
        "classes": rows,
    });
    if let Some(path) = &a.model {
        let model = realize_cuspidal_gl2(&g, &theta)?;
        let samples = green_constant_samples(&g, &theta, &model);
        let c = samples.first().copied().unwrap_or_default();
        let constant = samples.iter().all(|s| (s - c).norm() < 1e-9);
        let elements: Vec<Value> = (0..g.order() as u32)
            .map(|x| {
                let m = &model.mats[x as usize];
                let rows: Vec<Vec<[f64; 2]>> = (0..m.nrows())
                    .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
                    .collect();
                json!({ "element": g.element(x), "matrix": rows })
            })
            .collect();
        let file = json!({
            "q": a.q,
            "theta": a.theta,
            "dim": model.dim,
            "field_size": g.field().size(),
            "elements": elements,
        });
        std::fs::write(path, serde_json::to_vec_pretty(&file)?)?;
        payload["model"] = json!({
            "path": path.display().to_string(),
            "dim": model.dim,
            "green_constant": { "re": clean(c.re), "im": clean(c.im) },
            "green_constant_is_constant": constant,
        });
    }
    Output::new("rep cuspidal", payload)
}

fn parse_scan(s: &str) -> Result<(f64, f64, usize), CliError> {
    let bad = || CliError::Usage(format!("scan must be lo:hi:steps, got {s:?}"));
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].parse().map_err(|_| bad())?;
    let steps: usize = parts[2].parse().map_err(|_| bad())?;
    if !(lo < hi) || steps == 0 {
        return Err(bad());
    }
    if steps > 1_000_000 {
        return Err(parind_core::Error::TooLarge(format!("{steps} scan steps")).into());
    }
    Ok((lo, hi, steps))
}

pub fn cmd_module(a: &OracleArgs, cfg: &RunConfig) -> Result<Output, CliError> {
    let scan = a.scan.as_deref().map(parse_scan).transpose()?;
    let q = a.q;
    let Some(h) = HeckeParams::new(q, a.n, a.case).filter(|_| a.case.parity_ok(a.n)) else {
        let payload = json!({
            "q": q, "n": a.n, "case": a.case,
            "applicable": false,
            "reason": "parity mismatch: the Hecke algebra is commutative and induction is irreducible",
        });
        return Output::new("module oracle", payload);
    };
    let closed = closed_form_gamma_set(&h.gamma);
    let oracle = gamma_set_oracle(&h.gamma)?;
    let agree = closed == oracle;
    let mut payload = json!({
        "q": q, "n": a.n, "case": a.case,
        "applicable": true,
        "gamma": h.gamma.to_json(q),
        "closed_form": closed.iter().map(|x| x.to_json(q)).collect::<Vec<_>>(),
        "oracle": oracle.iter().map(|x| x.to_json(q)).collect::<Vec<_>>(),
        "agree": agree,
    });
    let mut flags = vec![agree];
    if let Some((lo, hi, steps)) = scan {
        let tol = cfg.tolerance.max(1e-6);
        let pts = scan_points(lo, hi, steps);
        let hits = scan_non_simple(&h.gamma, &pts, tol);
        let unexplained: Vec<_> = hits
            .iter()
            .filter(|z| !closed.iter().any(|c| (c.to_complex() - **z).norm() < tol))
            .map(|z| json!({ "re": z.re, "im": z.im }))
            .collect();
        flags.push(unexplained.is_empty());
        payload["scan"] = json!({
            "lo": lo, "hi": hi, "steps": steps,
            "points": pts.len(),
            "non_simple": hits.iter().map(|z| json!({ "re": clean(z.re), "im": clean(z.im) })).collect::<Vec<_>>(),
            "unexplained": unexplained,
        });
    }
    let mut out = Output::new("module oracle", payload)?;
    out.summary = Some(Summary::from_flags(flags));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scan_parsing() {
        assert_eq!(parse_scan("-10:10:2000").unwrap(), (-10.0, 10.0, 2000));
        assert!(parse_scan("1:0:5").is_err());
        assert!(parse_scan("0:1").is_err());
        assert_eq!(parse_scan("0:1:10000000").unwrap_err().exit_code(), 3);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
