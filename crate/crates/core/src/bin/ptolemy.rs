//! Command-line front end: triangulations, seeds, flips, Maslov indices,
//! loop phases, quantum-dilogarithm evaluation, rank-one Weil triples, and
//! relation verification. All I/O is JSON; exit code 0 on success, 1 on a
//! domain error, 2 on a usage error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use ptolemy_phases::groupoid::{
    standard_relation_loops, verify_relations, DecompositionJson, LoopKind, LoopMoveJson,
};
use ptolemy_phases::phase_calculus::{loop_word, normalize, LoopMove, Phase, SPtObject};
use ptolemy_phases::qdilog_numeric::{alpha, phi_with_error, QDParams};
use ptolemy_phases::ratlin::{rat_from_str, Mat, Rat};
use ptolemy_phases::seed_surface::{Seed, SeedJson, Triangulation, TriangulationJson};
use ptolemy_phases::symplectic_core::{kashiwara_index, SkewSpace, Subspace};
use ptolemy_phases::weil_numeric::{involutivity_defect, triple_phase_check, GridSpec};
use serde::Deserialize;
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

const SCHEMA_VERSION: &str = "ptolemy-phases schema 1";

#[derive(Parser)]
#[command(name = "ptolemy", version = SCHEMA_VERSION, about = "Exact phase constants for quantum Teichmüller intertwiners")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build or validate a triangulation; prints it with its exchange matrix.
    Surface(SurfaceArgs),
    /// Extract the cluster seed of a surface, or validate an abstract seed.
    Seed(SeedArgs),
    /// Flip a triangulation edge or mutate a seed at a label.
    Flip(FlipArgs),
    /// Kashiwara index of a Lagrangian triple in a skew space.
    Maslov(MaslovArgs),
    /// Phase constants of intertwiner loops.
    #[command(subcommand)]
    Phase(PhaseCmd),
    /// Quantum dilogarithm numerics.
    #[command(subcommand)]
    Qdilog(QdilogCmd),
    /// Rank-one Weil intertwiner numerics.
    #[command(subcommand)]
    Weil(WeilCmd),
    /// Verify the standard groupoid relations on a seed or surface.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SurfaceArgs {
    /// Genus of the standard surface to build.
    #[arg(long, conflicts_with = "input")]
    genus: Option<usize>,
    /// Puncture count of the standard surface to build.
    #[arg(long, conflicts_with = "input", requires = "genus")]
    punctures: Option<usize>,
    /// Triangulation JSON file to validate instead of building one.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct SeedArgs {
    /// Triangulation JSON file.
    #[arg(long, conflicts_with = "input")]
    surface: Option<PathBuf>,
    /// Abstract seed JSON file to validate.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct FlipArgs {
    /// Triangulation JSON file (geometric flip).
    #[arg(long, conflicts_with = "seed")]
    surface: Option<PathBuf>,
    /// Seed JSON file (matrix mutation only).
    #[arg(long)]
    seed: Option<PathBuf>,
    /// Edge label / seed label to flip at.
    #[arg(long)]
    edge: u32,
}

#[derive(Args)]
struct MaslovArgs {
    /// Skew space JSON: {"labels": [..], "form": [["p/q", ..], ..]} or
    /// {"labels": [..], "epsilon": [[..]]}.
    #[arg(long)]
    space: PathBuf,
    /// Lagrangian span JSON: [["p/q", ..], ..].
    #[arg(long)]
    l1: PathBuf,
    #[arg(long)]
    l2: PathBuf,
    #[arg(long)]
    l3: PathBuf,
}

#[derive(Subcommand)]
enum PhaseCmd {
    /// Normalize the intertwiner word of a loop and report its phase.
    Loop(PhaseLoopArgs),
}

#[derive(Args)]
struct PhaseLoopArgs {
    /// Base seed JSON file.
    #[arg(long, conflicts_with = "surface")]
    seed: Option<PathBuf>,
    /// Base triangulation JSON file (its seed is used).
    #[arg(long)]
    surface: Option<PathBuf>,
    /// Loop JSON file: list of moves.
    #[arg(long = "loop")]
    loop_file: PathBuf,
}

#[derive(Subcommand)]
enum QdilogCmd {
    /// Evaluate Φ^ħ at a point, optionally running an identity check there.
    Eval(QdilogEvalArgs),
}

#[derive(Copy, Clone, ValueEnum)]
enum QdCheck {
    Unitarity,
    Reflexivity,
    Difference,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct QdilogEvalArgs {
    #[arg(long)]
    hbar: f64,
    #[arg(long)]
    re: f64,
    #[arg(long, default_value_t = 0.0)]
    im: f64,
    /// Identity to check at the same point.
    #[arg(long, value_enum)]
    check: Option<QdCheck>,
}

#[derive(Subcommand)]
enum WeilCmd {
    /// Triple-composition scalar versus the Kashiwara-index prediction.
    Triple(WeilTripleArgs),
    /// Involutivity round-trip defect for a decomposition pair.
    Involutivity(WeilPairArgs),
}

#[derive(Args)]
struct WeilTripleArgs {
    /// JSON: {"space": {...}, "d1": {...}, "d2": {...}, "d3": {...}}.
    #[arg(long)]
    triple: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
    #[arg(long = "grid-n", default_value_t = 1024)]
    grid_n: usize,
    #[arg(long = "grid-l", default_value_t = 10.0)]
    grid_l: f64,
}

#[derive(Args)]
struct WeilPairArgs {
    /// JSON: {"space": {...}, "d1": {...}, "d2": {...}}.
    #[arg(long)]
    pair: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
    #[arg(long = "grid-n", default_value_t = 1024)]
    grid_n: usize,
    #[arg(long = "grid-l", default_value_t = 10.0)]
    grid_l: f64,
}

#[derive(Copy, Clone, ValueEnum)]
enum LoopFilter {
    All,
    Pentagon,
    Square,
    Twice,
}

#[derive(Args)]
struct VerifyArgs {
    /// Triangulation JSON file (its seed is verified).
    #[arg(long, conflicts_with = "seed")]
    surface: Option<PathBuf>,
    /// Seed JSON file.
    #[arg(long)]
    seed: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = LoopFilter::All)]
    loops: LoopFilter,
}

// ---------------------------------------------------------------------------
// JSON helpers
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct SpaceJson {
    labels: Vec<u32>,
    #[serde(default)]
    epsilon: Option<Vec<Vec<i64>>>,
    #[serde(default)]
    form: Option<Vec<Vec<String>>>,
}

#[derive(Deserialize)]
struct TripleJson {
    space: SpaceJson,
    d1: DecompositionJson,
    d2: DecompositionJson,
    #[serde(default)]
    d3: Option<DecompositionJson>,
}

fn complex_json(z: Complex64) -> serde_json::Value {
    json!({"re": z.re, "im": z.im})
}

type CliError = String;

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("bad JSON in {}: {e}", path.display()))
}

fn load_space(j: &SpaceJson) -> Result<SkewSpace, CliError> {
    match (&j.epsilon, &j.form) {
        (Some(eps), None) => Ok(SkewSpace::from_epsilon(&j.labels, eps)),
        (None, Some(rows)) => {
            let parsed: Result<Vec<Vec<Rat>>, CliError> = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|s| rat_from_str(s).ok_or_else(|| format!("bad rational {s:?}")))
                        .collect()
                })
                .collect();
            SkewSpace::new(j.labels.clone(), Mat::new(parsed?)).map_err(|e| e.to_string())
        }
        _ => Err("space JSON needs exactly one of \"epsilon\" or \"form\"".into()),
    }
}

fn load_subspace(path: &PathBuf) -> Result<Subspace, CliError> {
    let rows: Vec<Vec<String>> = read_json(path)?;
    let parsed: Result<Vec<Vec<Rat>>, CliError> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|s| rat_from_str(s).ok_or_else(|| format!("bad rational {s:?}")))
                .collect()
        })
        .collect();
    Ok(Subspace::from_span(&parsed?))
}

fn load_seed(seed: &Option<PathBuf>, surface: &Option<PathBuf>) -> Result<Seed, CliError> {
    match (seed, surface) {
        (Some(path), None) => {
            let j: SeedJson = read_json(path)?;
            Seed::from_json(&j).map_err(|e| e.to_string())
        }
        (None, Some(path)) => {
            let j: TriangulationJson = read_json(path)?;
            let t = Triangulation::from_json(&j).map_err(|e| e.to_string())?;
            Ok(Seed::from_triangulation(&t))
        }
        _ => Err("exactly one of --seed or --surface is required".into()),
    }
}

fn emit(value: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

// ---------------------------------------------------------------------------
// Subcommand bodies
// ---------------------------------------------------------------------------

fn run_surface(a: &SurfaceArgs) -> Result<(), CliError> {
    let t = match (&a.input, a.genus, a.punctures) {
        (Some(path), None, _) => {
            let j: TriangulationJson = read_json(path)?;
            Triangulation::from_json(&j).map_err(|e| e.to_string())?
        }
        (None, Some(g), Some(s)) => Triangulation::standard(g, s).map_err(|e| e.to_string())?,
        _ => return Err("give either --input, or both --genus and --punctures".into()),
    };
    emit(&json!({
        "triangulation": t.to_json(),
        "epsilon": t.exchange_matrix(),
    }));
    Ok(())
}

fn run_seed(a: &SeedArgs) -> Result<(), CliError> {
    let seed = load_seed(&a.input, &a.surface)?;
    emit(&serde_json::to_value(seed.to_json()).expect("serializable"));
    Ok(())
}

fn run_flip(a: &FlipArgs) -> Result<(), CliError> {
    match (&a.surface, &a.seed) {
        (Some(path), None) => {
            let j: TriangulationJson = read_json(path)?;
            let t = Triangulation::from_json(&j).map_err(|e| e.to_string())?;
            let flipped = t.flip(a.edge).map_err(|e| e.to_string())?;
            emit(&json!({
                "triangulation": flipped.to_json(),
                "epsilon": flipped.exchange_matrix(),
            }));
        }
        (None, Some(path)) => {
            let j: SeedJson = read_json(path)?;
            let seed = Seed::from_json(&j).map_err(|e| e.to_string())?;
            let mutated = seed.mutate(a.edge).map_err(|e| e.to_string())?;
            emit(&serde_json::to_value(mutated.to_json()).expect("serializable"));
        }
        _ => return Err("exactly one of --surface or --seed is required".into()),
    }
    Ok(())
}

fn run_maslov(a: &MaslovArgs) -> Result<(), CliError> {
    let space = load_space(&read_json(&a.space)?)?;
    let l1 = load_subspace(&a.l1)?;
    let l2 = load_subspace(&a.l2)?;
    let l3 = load_subspace(&a.l3)?;
    let tau = kashiwara_index(&space, &l1, &l2, &l3).map_err(|e| e.to_string())?;
    emit(&json!({"tau": tau}));
    Ok(())
}

fn run_phase_loop(a: &PhaseLoopArgs) -> Result<(), CliError> {
    let seed = load_seed(&a.seed, &a.surface)?;
    let wire: Vec<LoopMoveJson> = read_json(&a.loop_file)?;
    let moves: Result<Vec<LoopMove>, _> = wire.iter().map(|m| m.to_move()).collect();
    let moves = moves.map_err(|e| e.to_string())?;
    let base = SPtObject::canonical(seed).map_err(|e| e.to_string())?;
    let word = loop_word(&base, &moves).map_err(|e| e.to_string())?;
    let (phase, residual) = normalize(word).map_err(|e| e.to_string())?;
    emit(&json!({
        "alpha_pow": phase.alpha_pow,
        "eighth_pow": phase.eighth_pow,
        "residual": residual.iter().map(|f| f.summary()).collect::<Vec<_>>(),
    }));
    Ok(())
}

fn run_qdilog(a: &QdilogEvalArgs) -> Result<(), CliError> {
    let params = QDParams::new(a.hbar).map_err(|e| e.to_string())?;
    let z = Complex64::new(a.re, a.im);
    let (value, est) = phi_with_error(z, &params).map_err(|e| e.to_string())?;
    let mut out = json!({
        "re": value.re,
        "im": value.im,
        "abs": value.norm(),
        "est_error": est,
    });
    if let Some(check) = a.check {
        let (name, defect) = run_qd_check(check, z, value, &params)?;
        out["check"] = json!({"name": name, "defect": defect});
    }
    emit(&out);
    Ok(())
}

fn run_qd_check(
    check: QdCheck,
    z: Complex64,
    value: Complex64,
    params: &QDParams,
) -> Result<(&'static str, f64), CliError> {
    let hbar = params.hbar;
    let err = |e: ptolemy_phases::qdilog_numeric::QdError| e.to_string();
    Ok(match check {
        QdCheck::Unitarity => {
            if z.im.abs() > 1e-12 {
                return Err("unitarity check needs a real argument".into());
            }
            ("unitarity", (value.norm() - 1.0).abs())
        }
        QdCheck::Reflexivity => {
            let other = phi_with_error(-z, params).map_err(err)?.0;
            let a2 = alpha(hbar).powi(2);
            let gauss = (z * z / (Complex64::i() * 4.0 * std::f64::consts::PI * hbar)).exp();
            ("reflexivity", (value * other - gauss / a2).norm())
        }
        QdCheck::Difference => {
            // Φ(z + iπħ)/Φ(z − iπħ) = 1 + e^{z} and the ħ ↔ 1/ħ twin.
            let pi = std::f64::consts::PI;
            let mut worst: f64 = 0.0;
            for (step, factor_exp) in [(pi * hbar, z), (pi, z / hbar)] {
                let lo = phi_with_error(z - Complex64::i() * step, params).map_err(err)?.0;
                let hi = phi_with_error(z + Complex64::i() * step, params).map_err(err)?.0;
                let defect = (hi / lo - (Complex64::new(1.0, 0.0) + factor_exp.exp())).norm();
                worst = worst.max(defect);
            }
            ("difference", worst)
        }
    })
}

fn run_weil_triple(a: &WeilTripleArgs) -> Result<(), CliError> {
    let t: TripleJson = read_json(&a.triple)?;
    let space = load_space(&t.space)?;
    let d1 = t.d1.to_decomposition().map_err(|e| e.to_string())?;
    let d2 = t.d2.to_decomposition().map_err(|e| e.to_string())?;
    let d3 = t
        .d3
        .ok_or("triple JSON needs \"d3\"")?
        .to_decomposition()
        .map_err(|e| e.to_string())?;
    let grid = GridSpec { l: a.grid_l, n: a.grid_n };
    let measured =
        triple_phase_check(&space, &d1, &d2, &d3, grid, a.hbar).map_err(|e| e.to_string())?;
    let tau = kashiwara_index(&space, &d1.lagrangian, &d2.lagrangian, &d3.lagrangian)
        .map_err(|e| e.to_string())?;
    let predicted =
        (Complex64::i() * std::f64::consts::PI * tau as f64 / 4.0).exp();
    emit(&json!({
        "measured": complex_json(measured),
        "predicted": complex_json(predicted),
        "tau": tau,
        "deviation": (measured - predicted).norm(),
    }));
    Ok(())
}

fn run_weil_involutivity(a: &WeilPairArgs) -> Result<(), CliError> {
    let t: TripleJson = read_json(&a.pair)?;
    let space = load_space(&t.space)?;
    let d1 = t.d1.to_decomposition().map_err(|e| e.to_string())?;
    let d2 = t.d2.to_decomposition().map_err(|e| e.to_string())?;
    let grid = GridSpec { l: a.grid_l, n: a.grid_n };
    let defect = involutivity_defect(&space, &d1, &d2, grid, a.hbar).map_err(|e| e.to_string())?;
    emit(&json!({"defect": defect}));
    Ok(())
}

fn run_verify(a: &VerifyArgs) -> Result<(), CliError> {
    let seed = load_seed(&a.seed, &a.surface)?;
    let keep = |k: LoopKind| match a.loops {
        LoopFilter::All => true,
        LoopFilter::Pentagon => matches!(k, LoopKind::PentagonPlus | LoopKind::PentagonMinus),
        LoopFilter::Square => k == LoopKind::Square,
        LoopFilter::Twice => k == LoopKind::TwiceFlip,
    };
    let reports: Vec<_> = match a.loops {
        LoopFilter::All => verify_relations(&seed).map_err(|e| e.to_string())?,
        _ => {
            let loops = standard_relation_loops(&seed).map_err(|e| e.to_string())?;
            loops
                .into_iter()
                .filter(|l| keep(l.kind))
                .map(|l| {
                    match l.spec.phase() {
                        Ok(p) => json_report(&l.name, l.kind, Some(&p), None),
                        Err(e) => json_report(&l.name, l.kind, None, Some(e.to_string())),
                    }
                })
                .collect::<Result<Vec<_>, CliError>>()?
        }
    };
    let all_ok = reports.iter().all(|r| r.ok);
    emit(&serde_json::to_value(&reports).expect("serializable"));
    if !all_ok {
        return Err("one or more relation loops failed".into());
    }
    Ok(())
}

fn json_report(
    name: &str,
    kind: LoopKind,
    phase: Option<&Phase>,
    error: Option<String>,
) -> Result<ptolemy_phases::groupoid::LoopReport, CliError> {
    use ptolemy_phases::groupoid::LoopReport;
    Ok(match (phase, error) {
        (Some(p), None) => {
            let ok = p.alpha_pow == kind.expected_alpha() && p.eighth_pow.is_some();
            LoopReport {
                name: name.into(),
                kind,
                alpha_pow: p.alpha_pow,
                eighth_pow: p.eighth_pow,
                ok,
                detail: if ok { "reduced to a scalar".into() } else { "unexpected phase".into() },
            }
        }
        (None, Some(e)) => LoopReport {
            name: name.into(),
            kind,
            alpha_pow: 0,
            eighth_pow: None,
            ok: false,
            detail: e,
        },
        _ => return Err("internal: bad report".into()),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Surface(a) => run_surface(a),
        Command::Seed(a) => run_seed(a),
        Command::Flip(a) => run_flip(a),
        Command::Maslov(a) => run_maslov(a),
        Command::Phase(PhaseCmd::Loop(a)) => run_phase_loop(a),
        Command::Qdilog(QdilogCmd::Eval(a)) => run_qdilog(a),
        Command::Weil(WeilCmd::Triple(a)) => run_weil_triple(a),
        Command::Weil(WeilCmd::Involutivity(a)) => run_weil_involutivity(a),
        Command::Verify(a) => run_verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}
