//! Command-line interface: kernel evaluation, verification suites, theorem
//! reproduction, coset enumeration and convergence tables. All output is
//! machine-readable (JSON with 17-significant-digit doubles; CSV per
//! RFC 4180). Exit codes: 0 pass, 1 verification failure, 2 usage or
//! precondition error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use std::io::Write;

use crate::algebra::{Multivector, Vector};
use crate::error::{Error, Result};
use crate::groups::{enumerate_cosets, GroupKind, GroupSpec};
use crate::integrals::{reproduce_integral, ReproduceConfig, TheoremKind};
use crate::jet::MultiIndex;
use crate::kernels::{cauchy_g, green_h, hyper_kernel, HyperKind};
use crate::lattice::{Lattice, Pairing, TruncationPolicy};
use crate::quadrature::sphere_quadrature;
use crate::report::to_json_17;
use crate::series::{
    cot_series, epsilon_series, hopf_series, hyper_cot_series, torus_kernel, CotKind, HopfKind,
    HopfParams, HyperCotKind, SeriesValue, TorusKind,
};

#[derive(Parser)]
#[command(name = "monogenic", version, about = "Kernels, periodized series and boundary integrals of Clifford analysis on conformally flat manifolds")]
pub struct Cli {
    /// Ambient dimension n (2..=8 where supported).
    #[arg(long, global = true)]
    n: Option<u32>,
    /// JSON config file; flags override file values.
    #[arg(long, global = true)]
    config: Option<String>,
    /// Write the primary output to this path as well as stdout.
    #[arg(long, global = true)]
    out: Option<String>,
    /// Scale factor applied to all verification budgets.
    #[arg(long, global = true)]
    tolerance_scale: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a kernel or series at a point.
    Eval(EvalArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Reproduce an integral theorem and report the error budget.
    Reproduce(ReproduceArgs),
    /// Enumerate cosets of an arithmetic group.
    Cosets(CosetArgs),
    /// Emit a CSV convergence table (value vs box radius).
    Table(TableArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EvalKind {
    Cauchy,
    Green,
    P1,
    P2,
    HopfG,
    HopfH,
    HopfH1,
    HopfH2,
    Cot1,
    Cot2,
    C1,
    C2,
    Torus2,
    Torus4,
    Epsilon,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long, value_enum)]
    kind: EvalKind,
    /// Kernel argument, comma separated: `--z 2,0,0`.
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    /// First point for two-point kernels.
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    /// Second point for two-point kernels.
    #[arg(long, allow_hyphen_values = true)]
    y: Option<String>,
    /// Derivative multi-index for epsilon series: `--m-index 1,0,0,0`.
    #[arg(long)]
    m_index: Option<String>,
    /// Hopf dilation base.
    #[arg(long)]
    hopf_m: Option<u32>,
    /// Lattice rank (cubic lattice Z e_1 + ... + Z e_k).
    #[arg(long)]
    lattice_k: Option<usize>,
    /// Spin-split index l.
    #[arg(long)]
    lattice_l: Option<usize>,
    /// Truncation shell radius.
    #[arg(long)]
    max_shell: Option<usize>,
    #[arg(long)]
    tail_tol: Option<f64>,
    /// Anchors for torus kernels: `--anchors "0.1,0.2,0.3;0.5,0.6,0.7"`.
    #[arg(long, allow_hyphen_values = true)]
    anchors: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// clifford|moebius|kernels|operators|periodization|groups|integrals|all
    #[arg(long)]
    suite: String,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TheoremArg {
    EuclidCauchy,
    HopfCauchy,
    HopfGreen,
    HopfHyper,
    TorusGreen4pt,
    CylinderHyper,
}

#[derive(Args)]
struct ReproduceArgs {
    #[arg(long, value_enum)]
    theorem: TheoremArg,
    /// Test field: `const` (f == 1) or `section` (a kernel-built section).
    #[arg(long, default_value = "section")]
    field: String,
    #[arg(long)]
    hopf_m: Option<u32>,
    #[arg(long)]
    max_shell: Option<usize>,
    #[arg(long)]
    quadrature_order: Option<usize>,
}

#[derive(Args)]
struct CosetArgs {
    #[arg(long, default_value_t = 1)]
    p: u32,
    #[arg(long, default_value_t = 1)]
    level: u32,
    /// full|principal|hecke0
    #[arg(long, default_value = "full")]
    kind: String,
    #[arg(long, default_value_t = 4)]
    max_word_length: usize,
}

#[derive(Args)]
struct TableArgs {
    /// Series kind for the convergence table.
    #[arg(long, value_enum)]
    kind: EvalKind,
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    y: Option<String>,
    #[arg(long)]
    hopf_m: Option<u32>,
    #[arg(long)]
    lattice_k: Option<usize>,
    #[arg(long)]
    lattice_l: Option<usize>,
    /// Comma-separated box radii, strictly increasing.
    #[arg(long, default_value = "2,4,6,8,10,12")]
    radii: String,
}

/// JSON config document; flags override these values.
#[derive(Debug, Default, Deserialize)]
struct RunConfig {
    n: Option<u32>,
    hopf_m: Option<u32>,
    lattice: Option<LatticeConfig>,
    truncation: Option<TruncationConfig>,
    quadrature_order: Option<usize>,
    tolerance_scale: Option<f64>,
}

#[derive(Debug, Deserialize)]
struct LatticeConfig {
    basis: Vec<Vec<f64>>,
    l: usize,
}

#[derive(Debug, Deserialize)]
struct TruncationConfig {
    max_shell: Option<usize>,
    tail_tol: Option<f64>,
    pairing: Option<String>,
}

#[derive(Serialize)]
struct ErrorJson<'a> {
    error: ErrorBody<'a>,
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    code: &'a str,
    message: String,
}

fn timestamp() -> String {
    let now = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    format!("{now}")
}

fn parse_vector(s: &str, n_expected: Option<u32>) -> Result<Vector> {
    let comps: std::result::Result<Vec<f64>, _> =
        s.split(',').map(|t| t.trim().parse::<f64>()).collect();
    let comps = comps.map_err(|_| Error::Usage(format!("cannot parse vector '{s}'")))?;
    if comps.len() < 2 || comps.len() > 8 {
        return Err(Error::Usage(format!("vector '{s}' must have 2..=8 components")));
    }
    if let Some(n) = n_expected {
        if comps.len() != n as usize {
            return Err(Error::Usage(format!(
                "vector '{s}' has {} components, expected n = {n}",
                comps.len()
            )));
        }
    }
    Ok(Vector::new(comps))
}

fn parse_multi_index(s: &str, n: usize) -> Result<MultiIndex> {
    let parts: std::result::Result<Vec<u32>, _> =
        s.split(',').map(|t| t.trim().parse::<u32>()).collect();
    let parts = parts.map_err(|_| Error::Usage(format!("cannot parse multi-index '{s}'")))?;
    if parts.len() != n {
        return Err(Error::Usage(format!(
            "multi-index '{s}' has {} entries, expected {n}",
            parts.len()
        )));
    }
    Ok(MultiIndex(parts))
}

fn load_config(path: &Option<String>) -> Result<RunConfig> {
    match path {
        None => Ok(RunConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)?;
            Ok(serde_json::from_str(&text)?)
        }
    }
}

fn pairing_from(s: &str) -> Result<Pairing> {
    Ok(match s {
        "none" => Pairing::None,
        "antipodal" => Pairing::Antipodal,
        "expanding_box" => Pairing::ExpandingBox,
        other => return Err(Error::Usage(format!("unknown pairing '{other}'"))),
    })
}

#[derive(Serialize)]
struct EvalOutput {
    kind: String,
    params: serde_json::Value,
    value: Multivector,
    tail_estimate: f64,
    terms_summed: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    warnings: Vec<String>,
    timestamp: String,
}

fn emit(out_path: &Option<String>, payload: &str) -> Result<()> {
    println!("{payload}");
    if let Some(p) = out_path {
        std::fs::write(p, payload)?;
    }
    Ok(())
}

/// Entry point; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            let payload = to_json_17(&ErrorJson {
                error: ErrorBody { code: e.code(), message: e.to_string() },
            })
            .unwrap_or_else(|_| format!("{{\"error\":{{\"code\":\"{}\"}}}}", e.code()));
            let _ = writeln!(std::io::stderr(), "{payload}");
            2
        }
    }
}

fn dispatch(cli: &Cli) -> Result<i32> {
    let cfg = load_config(&cli.config)?;
    let n_global = cli.n.or(cfg.n);
    match &cli.command {
        Command::Eval(args) => {
            let out = cmd_eval(args, &cfg, n_global)?;
            emit(&cli.out, &out)?;
            Ok(0)
        }
        Command::Verify(args) => {
            let scale = cli.tolerance_scale.or(cfg.tolerance_scale).unwrap_or(1.0);
            let suites = crate::verify::Suite::parse(&args.suite)?;
            let mut reports = Vec::new();
            let mut all_pass = true;
            for s in suites {
                let r = crate::verify::run_suite(s, scale)?;
                all_pass &= r.pass;
                reports.push(r);
            }
            #[derive(Serialize)]
            struct VerifyOutput {
                suites: Vec<crate::report::SuiteReport>,
                pass: bool,
                tolerance_scale: f64,
                timestamp: String,
            }
            let payload = to_json_17(&VerifyOutput {
                suites: reports,
                pass: all_pass,
                tolerance_scale: scale,
                timestamp: timestamp(),
            })?;
            emit(&cli.out, &payload)?;
            Ok(if all_pass { 0 } else { 1 })
        }
        Command::Reproduce(args) => {
            let (payload, ok) = cmd_reproduce(args, &cfg)?;
            emit(&cli.out, &payload)?;
            Ok(if ok { 0 } else { 1 })
        }
        Command::Cosets(args) => {
            let kind = match args.kind.as_str() {
                "full" => GroupKind::Full,
                "principal" => GroupKind::Principal,
                "hecke0" => GroupKind::Hecke0,
                other => return Err(Error::Usage(format!("unknown group kind '{other}'"))),
            };
            let n = n_global.unwrap_or(4);
            let spec = GroupSpec::new(args.p, args.level, kind, n)?;
            let table = enumerate_cosets(&spec, args.max_word_length)?;
            #[derive(Serialize)]
            struct CosetOutput {
                spec: GroupSpec,
                max_word_length: usize,
                count: usize,
                contains_minus_identity: bool,
                reps: Vec<crate::groups::CosetRep>,
                timestamp: String,
            }
            let payload = to_json_17(&CosetOutput {
                spec,
                max_word_length: table.max_word_length,
                count: table.reps.len(),
                contains_minus_identity: table.contains_minus_identity,
                reps: table.reps,
                timestamp: timestamp(),
            })?;
            emit(&cli.out, &payload)?;
            Ok(0)
        }
        Command::Table(args) => {
            let out = cmd_table(args, &cfg, n_global)?;
            emit(&cli.out, &out)?;
            Ok(0)
        }
    }
}

struct EvalContext {
    policy: TruncationPolicy,
    hopf: HopfParams,
    lattice_k: usize,
    lattice_l: usize,
}

fn eval_context(
    cfg: &RunConfig,
    hopf_m: Option<u32>,
    lattice_k: Option<usize>,
    lattice_l: Option<usize>,
    max_shell: Option<usize>,
    tail_tol: Option<f64>,
) -> Result<EvalContext> {
    let trunc = cfg.truncation.as_ref();
    let pairing = match trunc.and_then(|t| t.pairing.as_deref()) {
        Some(p) => pairing_from(p)?,
        None => Pairing::None,
    };
    let policy = TruncationPolicy::new(
        max_shell.or(trunc.and_then(|t| t.max_shell)).unwrap_or(12),
        tail_tol.or(trunc.and_then(|t| t.tail_tol)).unwrap_or(1e-2),
        pairing,
    )?;
    let hopf = HopfParams::new(hopf_m.or(cfg.hopf_m).unwrap_or(2))?;
    let (k, l) = match &cfg.lattice {
        Some(lc) => (lattice_k.unwrap_or(lc.basis.len()), lattice_l.unwrap_or(lc.l)),
        None => (lattice_k.unwrap_or(2), lattice_l.unwrap_or(1)),
    };
    Ok(EvalContext { policy, hopf, lattice_k: k, lattice_l: l })
}

fn cubic_lattice(n: u32, ctx: &EvalContext, cfg: &RunConfig) -> Result<Lattice> {
    if let Some(lc) = &cfg.lattice {
        let basis: Vec<Vector> = lc.basis.iter().map(|b| Vector::new(b.clone())).collect();
        return Lattice::new(basis, lc.l);
    }
    Lattice::cubic(n, ctx.lattice_k, ctx.lattice_l)
}

fn series_output(
    kind: &str,
    params: serde_json::Value,
    v: SeriesValue,
) -> Result<String> {
    to_json_17(&EvalOutput {
        kind: kind.into(),
        params,
        value: v.value,
        tail_estimate: v.tail_estimate,
        terms_summed: v.terms_summed,
        warnings: v.warnings,
        timestamp: timestamp(),
    })
}

fn cmd_eval(args: &EvalArgs, cfg: &RunConfig, n_global: Option<u32>) -> Result<String> {
    let ctx = eval_context(cfg, args.hopf_m, args.lattice_k, args.lattice_l, args.max_shell, args.tail_tol)?;
    let need = |s: &Option<String>, name: &str| -> Result<Vector> {
        let s = s
            .as_ref()
            .ok_or_else(|| Error::Usage(format!("--{name} is required for this kind")))?;
        parse_vector(s, n_global)
    };
    let single = |mv: Multivector, kind: &str, params: serde_json::Value| -> Result<String> {
        to_json_17(&EvalOutput {
            kind: kind.into(),
            params,
            value: mv,
            tail_estimate: 0.0,
            terms_summed: 1,
            warnings: Vec::new(),
            timestamp: timestamp(),
        })
    };
    match args.kind {
        EvalKind::Cauchy => {
            let z = need(&args.z, "z")?;
            single(cauchy_g(&z)?, "cauchy", serde_json::json!({"z": z.as_slice()}))
        }
        EvalKind::Green => {
            let z = need(&args.z, "z")?;
            single(
                Multivector::scalar(z.dim(), green_h(&z)?),
                "green",
                serde_json::json!({"z": z.as_slice()}),
            )
        }
        EvalKind::P1 | EvalKind::P2 => {
            let x = need(&args.x, "x")?;
            let y = need(&args.y, "y")?;
            let hk = if args.kind == EvalKind::P1 { HyperKind::P1 } else { HyperKind::P2 };
            single(
                hyper_kernel(&x, &y, hk)?,
                if args.kind == EvalKind::P1 { "p1" } else { "p2" },
                serde_json::json!({"x": x.as_slice(), "y": y.as_slice()}),
            )
        }
        EvalKind::HopfG | EvalKind::HopfH | EvalKind::HopfH1 | EvalKind::HopfH2 => {
            let x = need(&args.x, "x")?;
            let y = need(&args.y, "y")?;
            let kind = match args.kind {
                EvalKind::HopfG => HopfKind::G,
                EvalKind::HopfH => HopfKind::H,
                EvalKind::HopfH1 => HopfKind::H1,
                _ => HopfKind::H2,
            };
            let v = hopf_series(&x, &y, ctx.hopf, kind, &ctx.policy)?;
            series_output(
                &format!("hopf_{kind:?}").to_lowercase(),
                serde_json::json!({
                    "x": x.as_slice(), "y": y.as_slice(), "m": ctx.hopf.m,
                    "max_shell": ctx.policy.max_shell
                }),
                v,
            )
        }
        EvalKind::Cot1 | EvalKind::Cot2 => {
            let z = need(&args.z, "z")?;
            let lat = cubic_lattice(z.dim(), &ctx, cfg)?;
            let kind = if args.kind == EvalKind::Cot1 { CotKind::Monogenic } else { CotKind::Harmonic };
            let v = cot_series(&z, &lat, kind, &ctx.policy)?;
            series_output(
                if args.kind == EvalKind::Cot1 { "cot1" } else { "cot2" },
                serde_json::json!({
                    "z": z.as_slice(), "k": lat.rank(), "l": lat.spin_index(),
                    "max_shell": ctx.policy.max_shell
                }),
                v,
            )
        }
        EvalKind::C1 | EvalKind::C2 => {
            let x = need(&args.x, "x")?;
            let y = need(&args.y, "y")?;
            let lat = cubic_lattice(x.dim(), &ctx, cfg)?;
            let kind = if args.kind == EvalKind::C1 { HyperCotKind::C1 } else { HyperCotKind::C2 };
            let v = hyper_cot_series(&x, &y, &lat, kind, &ctx.policy)?;
            series_output(
                if args.kind == EvalKind::C1 { "c1" } else { "c2" },
                serde_json::json!({
                    "x": x.as_slice(), "y": y.as_slice(), "k": lat.rank(), "l": lat.spin_index()
                }),
                v,
            )
        }
        EvalKind::Torus2 | EvalKind::Torus4 => {
            let x = need(&args.x, "x")?;
            let anchors_s = args
                .anchors
                .as_ref()
                .ok_or_else(|| Error::Usage("--anchors required for torus kernels".into()))?;
            let anchors: Result<Vec<Vector>> = anchors_s
                .split(';')
                .map(|s| parse_vector(s, Some(x.dim())))
                .collect();
            let anchors = anchors?;
            let lat = Lattice::cubic(x.dim(), x.dim() as usize, ctx.lattice_l)?;
            let kind = if args.kind == EvalKind::Torus2 {
                TorusKind::TwoPointMonogenic
            } else {
                TorusKind::FourPointHarmonic
            };
            let mut policy = ctx.policy;
            policy.pairing = Pairing::ExpandingBox;
            let v = torus_kernel(&x, &anchors, &lat, kind, &policy)?;
            series_output(
                if args.kind == EvalKind::Torus2 { "torus2" } else { "torus4" },
                serde_json::json!({
                    "x": x.as_slice(),
                    "anchors": anchors.iter().map(|a| a.as_slice().to_vec()).collect::<Vec<_>>(),
                    "l": lat.spin_index(), "max_shell": policy.max_shell
                }),
                v,
            )
        }
        EvalKind::Epsilon => {
            let z = need(&args.z, "z")?;
            let lat = cubic_lattice(z.dim(), &ctx, cfg)?;
            let m = match &args.m_index {
                Some(s) => parse_multi_index(s, z.dim() as usize)?,
                None => MultiIndex::zero(z.dim() as usize),
            };
            let v = epsilon_series(&m, &z, &lat, CotKind::Monogenic, &ctx.policy)?;
            series_output(
                "epsilon",
                serde_json::json!({
                    "z": z.as_slice(), "m_index": m.0, "k": lat.rank(), "l": lat.spin_index()
                }),
                v,
            )
        }
    }
}

#[derive(Serialize)]
struct ReproduceOutput {
    theorem: String,
    params: serde_json::Value,
    reproduced_value: Multivector,
    reference_value: Multivector,
    abs_error: f64,
    tolerance_budget: BudgetOut,
    #[serde(skip_serializing_if = "Option::is_none")]
    reading_note: Option<String>,
    pass: bool,
    timestamp: String,
}

#[derive(Serialize)]
struct BudgetOut {
    quadrature: f64,
    truncation: f64,
}

fn cmd_reproduce(args: &ReproduceArgs, cfg: &RunConfig) -> Result<(String, bool)> {
    let n = 3u32;
    let shells = args
        .max_shell
        .or(cfg.truncation.as_ref().and_then(|t| t.max_shell))
        .unwrap_or(16);
    let order = args.quadrature_order.or(cfg.quadrature_order).unwrap_or(16);
    let policy = TruncationPolicy::new(shells, 1.0, Pairing::None)?;
    let params = HopfParams::new(args.hopf_m.or(cfg.hopf_m).unwrap_or(2))?;
    let theorem = match args.theorem {
        TheoremArg::EuclidCauchy => TheoremKind::EuclidCauchy,
        TheoremArg::HopfCauchy => TheoremKind::HopfCauchy,
        TheoremArg::HopfGreen => TheoremKind::HopfGreen,
        TheoremArg::HopfHyper => TheoremKind::HopfHyper,
        TheoremArg::TorusGreen4pt => TheoremKind::TorusGreen4pt,
        TheoremArg::CylinderHyper => TheoremKind::CylinderHyper,
    };
    let mut rcfg = ReproduceConfig::new(policy);
    rcfg.hopf = Some(params);

    let (rep, reference, pjson): (crate::integrals::Reproduction, Multivector, serde_json::Value) =
        match theorem {
            TheoremKind::EuclidCauchy => {
                let surf = sphere_quadrature(&Vector::zeros(n), 1.0, order.max(16), n)?;
                if args.field == "const" {
                    let f = |_: &Vector| Ok(Multivector::one(n));
                    let y = Vector::zeros(n);
                    let rep = reproduce_integral(theorem, &f, None, &surf, &y, &rcfg)?;
                    (rep, Multivector::one(n), serde_json::json!({"field": "const"}))
                } else {
                    let a = Vector::axis(n, 1, 3.0);
                    let f = move |v: &Vector| cauchy_g(&v.sub(&a));
                    let y = Vector::axis(n, 2, 0.3);
                    let rep = reproduce_integral(theorem, &f, None, &surf, &y, &rcfg)?;
                    let rf = f(&y)?;
                    (rep, rf, serde_json::json!({"field": "G(.-3e_1)", "y": y.as_slice()}))
                }
            }
            TheoremKind::HopfCauchy => {
                let y0 = Vector::new(vec![-0.9, 0.9, 0.6]);
                let f = {
                    let y0 = y0.clone();
                    move |v: &Vector| Ok(hopf_series(v, &y0, params, HopfKind::G, &policy)?.value)
                };
                let center = Vector::new(vec![0.4, 0.15, 1.25]);
                let surf = sphere_quadrature(&center, 0.2, order, n)?;
                let rep = reproduce_integral(theorem, &f, None, &surf, &center, &rcfg)?;
                let rf = f(&center)?;
                (rep, rf, serde_json::json!({"field": "G_H(., y0)", "m": params.m}))
            }
            TheoremKind::HopfGreen => {
                let y0 = Vector::new(vec![-0.9, 0.9, 0.6]);
                let f = {
                    let y0 = y0.clone();
                    move |v: &Vector| Ok(hopf_series(v, &y0, params, HopfKind::H, &policy)?.value)
                };
                let df = {
                    let y0 = y0.clone();
                    move |v: &Vector| {
                        let fl = |u: &Vector| {
                            Ok(hopf_series(u, &y0, params, HopfKind::H, &policy)?.value)
                        };
                        crate::operators::dirac_fd(&fl, v, 1e-4)
                    }
                };
                let center = Vector::new(vec![0.4, 0.15, 1.25]);
                let surf = sphere_quadrature(&center, 0.2, order.min(14), n)?;
                let rep = reproduce_integral(theorem, &f, Some(&df), &surf, &center, &rcfg)?;
                let rf = f(&center)?;
                (rep, rf, serde_json::json!({"field": "H_H(., y0)", "m": params.m}))
            }
            TheoremKind::HopfHyper => {
                let f = |_: &Vector| Ok(Multivector::one(n));
                let center = Vector::new(vec![0.1, 0.0, 1.4]);
                let surf = sphere_quadrature(&center, 0.2, order, n)?;
                let rep = reproduce_integral(theorem, &f, None, &surf, &center, &rcfg)?;
                (rep, Multivector::one(n), serde_json::json!({"field": "const", "m": params.m}))
            }
            TheoremKind::CylinderHyper => {
                let lat = Lattice::cubic(n, 1, 0)?;
                rcfg.lattice = Some(lat);
                let f = |_: &Vector| Ok(Multivector::one(n));
                let center = Vector::new(vec![0.3, 0.0, 1.2]);
                let surf = sphere_quadrature(&center, 0.25, order, n)?;
                let rep = reproduce_integral(theorem, &f, None, &surf, &center, &rcfg)?;
                (rep, Multivector::one(n), serde_json::json!({"field": "const", "k": 1}))
            }
            TheoremKind::TorusGreen4pt => {
                let lat = Lattice::cubic(n, 3, 1)?;
                let anchors = vec![
                    Vector::new(vec![0.0, 0.0, 0.0]),
                    Vector::new(vec![0.5, 0.25, 0.4]),
                    Vector::new(vec![0.25, 0.5, 0.15]),
                    Vector::new(vec![0.4, 0.1, 0.45]),
                ];
                // synthetic harmonic field from a second four-point kernel
                let banchors = vec![
                    Vector::new(vec![0.45, 0.45, 0.5]),
                    Vector::new(vec![0.1, 0.35, 0.3]),
                    Vector::new(vec![0.3, 0.15, 0.1]),
                    Vector::new(vec![0.2, 0.45, 0.25]),
                ];
                let mut tpolicy = policy;
                tpolicy.pairing = Pairing::ExpandingBox;
                tpolicy.tail_tol = 1.0;
                let latf = Lattice::cubic(n, 3, 1)?;
                let f = {
                    let banchors = banchors.clone();
                    let latf = latf.clone();
                    move |v: &Vector| {
                        Ok(torus_kernel(
                            v,
                            &banchors,
                            &latf,
                            TorusKind::FourPointHarmonic,
                            &tpolicy,
                        )?
                        .value)
                    }
                };
                let df = {
                    let banchors = banchors.clone();
                    let latf = Lattice::cubic(n, 3, 1)?;
                    move |v: &Vector| {
                        let fl = |u: &Vector| {
                            Ok(torus_kernel(
                                u,
                                &banchors,
                                &latf,
                                TorusKind::FourPointHarmonic,
                                &tpolicy,
                            )?
                            .value)
                        };
                        crate::operators::dirac_fd(&fl, v, 1e-4)
                    }
                };
                rcfg.lattice = Some(lat);
                rcfg.anchors = anchors;
                rcfg.policy.pairing = Pairing::ExpandingBox;
                rcfg.policy.tail_tol = 1.0;
                let center = Vector::new(vec![0.05, -0.05, 0.02]);
                let surf = sphere_quadrature(&center, 0.22, order.min(12), n)?;
                let rep = reproduce_integral(theorem, &f, Some(&df), &surf, &center, &rcfg)?;
                let rf = f(&center)?;
                (rep, rf, serde_json::json!({"field": "synthetic_4pt"}))
            }
        };

    let abs_error = (&rep.value - &reference).norm();
    let budget = (10.0 * (rep.quadrature_budget + rep.truncation_budget)).max(1e-2);
    let pass = abs_error < budget;
    let payload = to_json_17(&ReproduceOutput {
        theorem: format!("{theorem:?}"),
        params: pjson,
        reproduced_value: rep.value,
        reference_value: reference,
        abs_error,
        tolerance_budget: BudgetOut {
            quadrature: rep.quadrature_budget,
            truncation: rep.truncation_budget,
        },
        reading_note: rep.reading_note,
        pass,
        timestamp: timestamp(),
    })?;
    Ok((payload, pass))
}

fn blade_name(mask: u32, n: u32) -> String {
    if mask == 0 {
        return "scalar".into();
    }
    let mut s = String::from("e");
    for i in 1..=n {
        if mask & (1 << (i - 1)) != 0 {
            s.push_str(&i.to_string());
        }
    }
    s
}

fn cmd_table(args: &TableArgs, cfg: &RunConfig, n_global: Option<u32>) -> Result<String> {
    let radii: std::result::Result<Vec<usize>, _> =
        args.radii.split(',').map(|t| t.trim().parse::<usize>()).collect();
    let radii = radii.map_err(|_| Error::Usage("cannot parse --radii".into()))?;
    if radii.windows(2).any(|w| w[1] <= w[0]) || radii.is_empty() {
        return Err(Error::Usage("--radii must be strictly increasing".into()));
    }
    let ctx = eval_context(cfg, args.hopf_m, args.lattice_k, args.lattice_l, None, None)?;

    // evaluate the requested series at each radius
    let mut rows: Vec<(usize, Multivector, f64)> = Vec::new();
    let mut n_alg = n_global.unwrap_or(3);
    for r in &radii {
        let policy = TruncationPolicy::new(*r, ctx.policy.tail_tol, ctx.policy.pairing)?;
        let v: SeriesValue = match args.kind {
            EvalKind::HopfG | EvalKind::HopfH | EvalKind::HopfH1 | EvalKind::HopfH2 => {
                let x = parse_vector(args.x.as_deref().unwrap_or("0.5,0.4,1.0"), None)?;
                let y = parse_vector(args.y.as_deref().unwrap_or("-0.7,0.9,0.8"), None)?;
                n_alg = x.dim();
                let kind = match args.kind {
                    EvalKind::HopfG => HopfKind::G,
                    EvalKind::HopfH => HopfKind::H,
                    EvalKind::HopfH1 => HopfKind::H1,
                    _ => HopfKind::H2,
                };
                hopf_series(&x, &y, ctx.hopf, kind, &policy)?
            }
            EvalKind::Cot1 | EvalKind::Cot2 => {
                let z = parse_vector(args.z.as_deref().unwrap_or("0.37,0.21,0.4,0.3"), None)?;
                n_alg = z.dim();
                let lat = Lattice::cubic(n_alg, ctx.lattice_k, ctx.lattice_l)?;
                let kind =
                    if args.kind == EvalKind::Cot1 { CotKind::Monogenic } else { CotKind::Harmonic };
                let mut policy = policy;
                if kind == CotKind::Harmonic && lat.rank() == n_alg as usize - 2 {
                    policy.pairing = Pairing::ExpandingBox;
                    policy.tail_tol = 1.0;
                }
                cot_series(&z, &lat, kind, &policy)?
            }
            EvalKind::C1 | EvalKind::C2 => {
                let x = parse_vector(args.x.as_deref().unwrap_or("0.3,0.0,1.2"), None)?;
                let y = parse_vector(args.y.as_deref().unwrap_or("0.1,0.4,0.9"), None)?;
                n_alg = x.dim();
                let lat = Lattice::cubic(n_alg, ctx.lattice_k.min(n_alg as usize - 1), ctx.lattice_l.min(1))?;
                let kind = if args.kind == EvalKind::C1 { HyperCotKind::C1 } else { HyperCotKind::C2 };
                hyper_cot_series(&x, &y, &lat, kind, &policy)?
            }
            _ => {
                return Err(Error::Usage(
                    "table supports series kinds: hopf-g|hopf-h|hopf-h1|hopf-h2|cot1|cot2|c1|c2"
                        .into(),
                ))
            }
        };
        rows.push((*r, v.value, v.tail_estimate));
    }

    // RFC-4180 CSV: CRLF line endings, fixed header schema
    let mut csv = String::new();
    csv.push_str("radius");
    for mask in 0..(1u32 << n_alg) {
        csv.push(',');
        csv.push_str(&blade_name(mask, n_alg));
    }
    csv.push_str(",tail_estimate\r\n");
    for (r, v, tail) in rows {
        csv.push_str(&r.to_string());
        for mask in 0..(1u32 << n_alg) {
            csv.push(',');
            csv.push_str(&format!("{:.17e}", v.coeff(mask)));
        }
        csv.push_str(&format!(",{tail:.17e}\r\n"));
    }
    Ok(csv)
}
