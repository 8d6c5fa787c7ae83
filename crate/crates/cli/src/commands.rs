use std::cell::RefCell;
use std::fmt;
use std::fs;
use std::path::Path;

use clap::Parser;
use hyperfinite::certificates::{
    boundary_operator, coverage, reiter_defect, separator_quality, WeightFunction,
};
use hyperfinite::generators::FamilySpec;
use hyperfinite::io::{self, certificate_from_json, certificate_to_json, graph_from_json, graph_to_json, Certificate};
use hyperfinite::lp::LpScalar;
use hyperfinite::rational::{self, Rational};
use hyperfinite::solvers::game::{separator_game_column_generation, separator_game_exact, ColumnGenerationOptions};
use hyperfinite::solvers::partition_lp::{fractional_partition_lp, optimal_partition, PartitionLpResult};
use hyperfinite::solvers::profile::{uniform_profile, ProfileMode, EXACT_PROFILE_LIMIT};
use hyperfinite::solvers::separator::{min_weight_separator, SeparatorMode, DEFAULT_EXACT_LIMIT};
use hyperfinite::transforms::{
    amenable_to_local, distribution_to_partition, full_cycle, local_to_global, partition_to_reiter,
    uniform_to_weighted, weighted_to_distribution, Dichotomy, ReiterLocalOracle, SeparatorUhOracle, Stage,
    TransformReport,
};
use hyperfinite::{BoundedDegreeGraph, Error, VertexMeasure};
use serde_json::{json, Value};

use crate::manifest::{sha256_hex, sidecar_path, write_atomic, InputDigest, RunManifest};
use crate::{
    CertifyArgs, Cli, Command, Family, GameArgs, GameMethod, GenerateArgs, Mode, PartitionArgs, ProfileArgs,
    ReplayArgs, Response, TransformArgs,
};

#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed input, bad flags.
    Input(String),
    Lib(Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Lib(Error::Parse(_) | Error::BadParams(_) | Error::StageMismatch(_)) => 2,
            CliError::Lib(Error::Budget(_) | Error::ExplosionCap { .. }) => 3,
            CliError::Lib(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => f.write_str(m),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn input(path: &Path, e: impl fmt::Display) -> CliError {
    CliError::Input(format!("{}: {e}", path.display()))
}

/// Numbers in solver output: rationals as `"p/q"` strings, floats as JSON numbers.
trait Emit: LpScalar {
    fn emit(&self) -> Value;
}

impl Emit for Rational {
    fn emit(&self) -> Value {
        Value::String(rational::format(self))
    }
}

impl Emit for f64 {
    fn emit(&self) -> Value {
        json!(self)
    }
}

struct Ctx<'a> {
    cli: &'a Cli,
    argv: Vec<String>,
    inputs: RefCell<Vec<InputDigest>>,
}

impl Ctx<'_> {
    fn read(&self, path: &Path) -> CliResult<String> {
        let bytes = fs::read(path).map_err(|e| input(path, e))?;
        self.inputs.borrow_mut().push(InputDigest {
            path: path.display().to_string(),
            sha256: sha256_hex(&bytes),
        });
        String::from_utf8(bytes).map_err(|e| input(path, e))
    }

    fn json(&self, path: &Path) -> CliResult<Value> {
        io::parse_json(&self.read(path)?).map_err(|e| input(path, e))
    }

    /// The graph and its measure (uniform if the file has none).
    fn graph(&self, path: &Path) -> CliResult<(BoundedDegreeGraph, VertexMeasure)> {
        let (g, mu) = graph_from_json(&self.json(path)?).map_err(|e| input(path, e))?;
        let mu = mu.unwrap_or_else(|| VertexMeasure::uniform(g.n()));
        Ok((g, mu))
    }

    /// Malformed files are input errors; well-formed certificates that break
    /// an invariant are returned as library errors.
    fn certificate(&self, g: &BoundedDegreeGraph, path: &Path) -> CliResult<Result<Certificate, Error>> {
        let v = self.json(path)?;
        match certificate_from_json(g, &v) {
            Err(Error::Parse(m)) => Err(input(path, m)),
            r => Ok(r),
        }
    }

    fn mode(&self) -> Mode {
        self.cli.global.mode
    }

    fn manifest(&self) -> RunManifest {
        let gl = &self.cli.global;
        RunManifest {
            command_line: self.argv.clone(),
            inputs: self.inputs.borrow().clone(),
            seed: gl.seed,
            mode: gl.mode.name().to_string(),
            cap: gl.cap,
            budget: gl.budget,
            version: env!("CARGO_PKG_VERSION").to_string(),
            output_sha256: None,
        }
    }

    fn seed(&self, why: &str) -> CliResult<u64> {
        self.cli.global.seed.ok_or_else(|| CliError::Input(format!("--seed is required {why}")))
    }

    fn json_output(&self, mut v: Value, pass: bool) -> Output {
        v["pass"] = json!(pass);
        v["manifest"] = serde_json::to_value(self.manifest()).expect("manifest serializes");
        let mut bytes = serde_json::to_vec_pretty(&v).expect("output serializes");
        bytes.push(b'\n');
        Output { bytes, pass }
    }
}

pub struct Output {
    pub bytes: Vec<u8>,
    pub pass: bool,
}

/// Runs the command and writes its output; returns whether it passed.
pub fn execute(cli: &Cli, argv: Vec<String>) -> CliResult<bool> {
    if let Command::Replay(a) = &cli.command {
        return replay(a);
    }
    let (out, mut manifest) = run(cli, argv)?;
    match &cli.global.out {
        Some(path) => {
            write_atomic(path, &out.bytes).map_err(|e| input(path, e))?;
            manifest.output_sha256 = Some(sha256_hex(&out.bytes));
            let mut m = serde_json::to_vec_pretty(&manifest).expect("manifest serializes");
            m.push(b'\n');
            let side = sidecar_path(path);
            write_atomic(&side, &m).map_err(|e| input(&side, e))?;
        }
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(&out.bytes)
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Input(format!("stdout: {e}")))?;
        }
    }
    Ok(out.pass)
}

fn run(cli: &Cli, argv: Vec<String>) -> CliResult<(Output, RunManifest)> {
    let ctx = Ctx {
        cli,
        argv,
        inputs: RefCell::new(Vec::new()),
    };
    let out = match &cli.command {
        Command::Generate(a) => generate(&ctx, a)?,
        Command::Certify(a) => certify(&ctx, a)?,
        Command::Transform(a) => transform(&ctx, a)?,
        Command::Game(a) => game(&ctx, a)?,
        Command::PartitionLp(a) => match ctx.mode() {
            Mode::Rational => partition_lp_exact(&ctx, a)?,
            Mode::Float => partition_lp::<f64>(&ctx, a)?.0,
        },
        Command::Profile(a) => match ctx.mode() {
            Mode::Rational => profile::<Rational>(&ctx, a)?,
            Mode::Float => profile::<f64>(&ctx, a)?,
        },
        Command::Replay(_) => return Err(CliError::Input("a manifest cannot record a replay".into())),
    };
    let manifest = ctx.manifest();
    Ok((out, manifest))
}

fn replay(a: &ReplayArgs) -> CliResult<bool> {
    let path = &a.manifest;
    let text = fs::read(path).map_err(|e| input(path, e))?;
    let m: RunManifest = serde_json::from_slice(&text).map_err(|e| input(path, e))?;
    let expected = m
        .output_sha256
        .clone()
        .ok_or_else(|| input(path, "manifest records no output digest"))?;
    for inp in &m.inputs {
        let p = Path::new(&inp.path);
        let bytes = fs::read(p).map_err(|e| input(p, e))?;
        if sha256_hex(&bytes) != inp.sha256 {
            return Err(input(p, "contents differ from the recorded digest"));
        }
    }
    let args = std::iter::once("hyperfin".to_string()).chain(m.command_line.iter().cloned());
    let cli = Cli::try_parse_from(args).map_err(|e| input(path, e))?;
    let (out, _) = run(&cli, m.command_line.clone())?;
    let got = sha256_hex(&out.bytes);
    let identical = got == expected;
    println!(
        "{}",
        json!({"manifest": path.display().to_string(), "expected_sha256": expected, "replayed_sha256": got, "identical": identical})
    );
    Ok(identical)
}

fn family_spec(ctx: &Ctx, a: &GenerateArgs) -> CliResult<FamilySpec> {
    let need = |v: Option<usize>, flag: &str| {
        v.ok_or_else(|| CliError::Input(format!("--{flag} is required for this family")))
    };
    Ok(match a.family {
        Family::Cycle => FamilySpec::Cycle { n: need(a.n, "n")? },
        Family::Path => FamilySpec::Path { n: need(a.n, "n")? },
        Family::Complete => FamilySpec::Complete { n: need(a.n, "n")? },
        Family::Grid => FamilySpec::Grid {
            rows: need(a.rows, "rows")?,
            cols: need(a.cols, "cols")?,
        },
        Family::Torus => FamilySpec::Torus {
            rows: need(a.rows, "rows")?,
            cols: need(a.cols, "cols")?,
        },
        Family::Tree => FamilySpec::Tree {
            branching: need(a.branching, "branching")?,
            depth: need(a.depth, "depth")?,
        },
        Family::RandomRegular => FamilySpec::RandomRegular {
            n: need(a.n, "n")?,
            d: a.degree,
            seed: ctx.seed("for random regular graphs")?,
        },
        Family::Hybrid1 | Family::Hybrid2 => {
            let cycle = need(a.cycle, "cycle")?;
            let seed = ctx.seed("for hybrid gadgets")?;
            let gadgets: Vec<(usize, u64)> =
                a.gadget.iter().enumerate().map(|(i, &s)| (s, seed.wrapping_add(i as u64))).collect();
            let spacing = a.spacing.unwrap_or(cycle / gadgets.len().max(1));
            if a.family == Family::Hybrid1 {
                FamilySpec::Hybrid1 { cycle, gadgets, spacing }
            } else {
                FamilySpec::Hybrid2 { cycle, gadgets, spacing }
            }
        }
        Family::Cayley => {
            let rank = need(a.rank, "rank")?;
            FamilySpec::Cayley {
                rank,
                radius: need(a.radius, "radius")?,
                lambda: a.lambda.unwrap_or((2.0 * rank as f64).ln()),
            }
        }
    })
}

fn generate(ctx: &Ctx, a: &GenerateArgs) -> CliResult<Output> {
    let spec = family_spec(ctx, a)?;
    let (g, mu) = spec.generate()?;
    let mut v = graph_to_json(&g, mu.as_ref());
    v["family"] = serde_json::to_value(&spec).expect("family serializes");
    Ok(ctx.json_output(v, true))
}

fn certify(ctx: &Ctx, a: &CertifyArgs) -> CliResult<Output> {
    let (g, mu) = ctx.graph(&a.graph)?;
    let cert = match ctx.certificate(&g, &a.cert)? {
        Ok(c) => c,
        Err(e) => {
            let v = json!({"kind": Value::Null, "valid": false, "error": e.to_string()});
            return Ok(ctx.json_output(v, false));
        }
    };
    let le = |x: &Rational| a.eps.as_ref().map_or(true, |e| x <= e);
    let le_k = |x: usize| a.k.map_or(true, |k| x <= k);
    let thresholds = json!({
        "eps": a.eps.as_ref().map(rational::format),
        "K": a.k,
        "R": a.r,
    });
    let invalid = |e: Error| json!({"kind": cert.kind(), "valid": false, "error": e.to_string(), "thresholds": thresholds});
    let (achieved, valid, meets) = match &cert {
        Certificate::Separator(s) => {
            let q = separator_quality(&g, &mu, s)?;
            let valid = q.max_component <= s.k();
            let meets = le(&q.mass) && le_k(q.max_component);
            (json!({"eps": rational::format(&q.mass), "K": q.max_component}), valid, meets)
        }
        Certificate::Distribution(d) => {
            if let Err(e) = d.validate(&g) {
                return Ok(ctx.json_output(invalid(e), false));
            }
            let cov = coverage(g.n(), d, None)?;
            let mut k = 0;
            for (t, _) in d.atoms() {
                k = k.max(t.max_component(&g)?);
            }
            (json!({"eps": rational::format(&cov.max), "K": k}), true, le(&cov.max) && le_k(k))
        }
        Certificate::Partition(p) => {
            let b = boundary_operator(&g, p, None)?;
            let k = p.support().keys().map(|s| s.len()).max().unwrap_or(0);
            (json!({"eps": rational::format(&b.max), "K": k}), true, le(&b.max) && le_k(k))
        }
        Certificate::Reiter(f) => match reiter_defect(&g, f) {
            Ok(d) => {
                let meets = le(&d.epsilon) && a.r.map_or(true, |r| d.radius <= r);
                (json!({"eps": rational::format(&d.epsilon), "R": d.radius}), true, meets)
            }
            Err(e) => return Ok(ctx.json_output(invalid(e), false)),
        },
        Certificate::Weights(w) => {
            // a weight function witnesses that every K-separator carries at least eps of W
            let k = a.k.ok_or_else(|| CliError::Input("--k is required to certify weights".into()))?;
            if w.len() != g.n() {
                return Err(Error::BadParams(format!("{} weights for {} vertices", w.len(), g.n())).into());
            }
            let sep = min_weight_separator(&g, w.values(), k, SeparatorMode::Exact)?;
            let frac = w.of(sep.removed()) / w.total();
            let meets = a.eps.as_ref().map_or(true, |e| &frac >= e);
            (json!({"min_fraction": rational::format(&frac), "K": k, "separator": sep.removed()}), true, meets)
        }
    };
    let v = json!({
        "kind": cert.kind(),
        "valid": valid,
        "achieved": achieved,
        "thresholds": thresholds,
    });
    Ok(ctx.json_output(v, valid && meets))
}

fn stage_input<'c>(stage: Stage, cert: &'c Option<Certificate>, kind: &str) -> CliResult<&'c Certificate> {
    match cert {
        Some(c) if c.kind() == kind => Ok(c),
        Some(c) => Err(Error::StageMismatch(format!("{stage} takes a {kind} certificate, got {}", c.kind())).into()),
        None => Err(CliError::Input(format!("{stage} needs --cert with a {kind} certificate"))),
    }
}

fn transform(ctx: &Ctx, a: &TransformArgs) -> CliResult<Output> {
    let (g, mu) = ctx.graph(&a.graph)?;
    let cert = match &a.cert {
        Some(p) => Some(ctx.certificate(&g, p)?.map_err(CliError::Lib)?),
        None => None,
    };
    if a.full {
        return full_chain(ctx, &g, &mu, &cert);
    }
    let name = a.stage.as_deref().unwrap_or_default();
    let stage = Stage::parse(name).ok_or_else(|| {
        let names: Vec<&str> = Stage::ALL.iter().map(|s| s.name()).collect();
        CliError::Input(format!("unknown stage {name:?}; expected one of {}", names.join(", ")))
    })?;
    let eps_flag = || a.eps.clone().ok_or_else(|| CliError::Input(format!("{stage} needs --eps")));
    let k_flag = || a.k.ok_or_else(|| CliError::Input(format!("{stage} needs --k")));
    let all: Vec<usize> = (0..g.n()).collect();
    let mut extra = json!({});
    let (out_cert, report): (Value, TransformReport) = match stage {
        Stage::AmenableToLocal => {
            let Certificate::Reiter(f) = stage_input(stage, &cert, "reiter")? else { unreachable!() };
            let eps = match &a.eps {
                Some(e) => e.clone(),
                None => reiter_defect(&g, f)?.epsilon,
            };
            let (piece, report) = amenable_to_local(&g, &mu, f, &eps, &all)?;
            let v = json!({
                "A": piece.a,
                "boundary": piece.boundary,
                "threshold": rational::format(&piece.threshold),
                "color": piece.color,
                "max_component": piece.max_component,
                "component_bound": piece.component_bound,
            });
            (v, report)
        }
        Stage::LocalToGlobal => {
            let Certificate::Reiter(f) = stage_input(stage, &cert, "reiter")? else { unreachable!() };
            let eps = match &a.eps {
                Some(e) => e.clone(),
                None => reiter_defect(&g, f)?.epsilon,
            };
            let mut oracle = ReiterLocalOracle::new(&g, f, eps.clone())?;
            let k = oracle.component_bound();
            let gs = local_to_global(&g, &mu, &eps, k, &mut oracle)?;
            extra["pieces"] = json!(gs.steps.len());
            (certificate_to_json(&Certificate::Separator(gs.separator)), gs.report)
        }
        Stage::UniformToWeighted => {
            let Certificate::Weights(w) = stage_input(stage, &cert, "weights")? else { unreachable!() };
            let run = uniform_to_weighted(&g, &mu, w, &eps_flag()?, &uh_oracle(&g))?;
            extra = json!({
                "L": run.l,
                "j_star": run.j_star,
                "w_total": rational::format(&run.w_total),
                "w_separator": rational::format(&run.w_separator),
            });
            (certificate_to_json(&Certificate::Separator(run.separator)), run.report)
        }
        Stage::WeightedToDistribution => {
            let (dich, report) = weighted_to_distribution(&g, k_flag()?, &eps_flag()?, ctx.cli.global.cap)?;
            match dich {
                Dichotomy::Feasible { distribution, .. } => {
                    extra["outcome"] = json!("feasible");
                    (certificate_to_json(&Certificate::Distribution(distribution)), report)
                }
                Dichotomy::Infeasible { witness, .. } => {
                    extra["outcome"] = json!("infeasible");
                    (certificate_to_json(&Certificate::Weights(witness)), report)
                }
            }
        }
        Stage::DistributionToPartition => {
            let Certificate::Distribution(d) = stage_input(stage, &cert, "distribution")? else { unreachable!() };
            let (phi, _, report) = distribution_to_partition(&g, d)?;
            (certificate_to_json(&Certificate::Partition(phi)), report)
        }
        Stage::PartitionToReiter => {
            let Certificate::Partition(p) = stage_input(stage, &cert, "partition")? else { unreachable!() };
            let (fam, report) = partition_to_reiter(&g, p)?;
            (certificate_to_json(&Certificate::Reiter(fam)), report)
        }
    };
    let pass = report.holds();
    let v = json!({
        "stage": stage.name(),
        "certificate": out_cert,
        "reports": [report],
        "details": extra,
    });
    Ok(ctx.json_output(v, pass))
}

/// Exact oracle while the exact separator search is affordable.
fn uh_oracle(g: &BoundedDegreeGraph) -> SeparatorUhOracle {
    if g.n() <= DEFAULT_EXACT_LIMIT {
        SeparatorUhOracle::adaptive()
    } else {
        SeparatorUhOracle::greedy_adaptive()
    }
}

/// The chain with the bucketing stage run on uniform weights at the
/// family's defect, so every stage appears in the report.
fn full_chain(ctx: &Ctx, g: &BoundedDegreeGraph, mu: &VertexMeasure, cert: &Option<Certificate>) -> CliResult<Output> {
    let Certificate::Reiter(f) = stage_input(Stage::AmenableToLocal, cert, "reiter")? else { unreachable!() };
    let run = full_cycle(g, mu, f, ctx.cli.global.cap)?;
    let mut reports = run.reports.clone();
    let positive = run.eps > Rational::from_integer(0.into());
    if positive && run.eps <= Rational::from_integer(1.into()) {
        let b = uniform_to_weighted(g, mu, &WeightFunction::uniform(g.n()), &run.eps, &uh_oracle(g))?;
        reports.insert(2, b.report);
    }
    let pass = reports.iter().all(TransformReport::holds);
    let v = json!({
        "stage": "full",
        "eps": rational::format(&run.eps),
        "K": run.k,
        "composed_bound": rational::format(&run.composed_bound),
        "separator": certificate_to_json(&Certificate::Separator(run.global.separator.clone())),
        "distribution": certificate_to_json(&Certificate::Distribution(run.distribution.clone())),
        "partition": certificate_to_json(&Certificate::Partition(run.partition.clone())),
        "certificate": certificate_to_json(&Certificate::Reiter(run.family.clone())),
        "reports": reports,
    });
    Ok(ctx.json_output(v, pass))
}

fn response_mode(r: Response) -> SeparatorMode {
    match r {
        Response::Exact => SeparatorMode::Exact,
        Response::Greedy => SeparatorMode::Greedy,
        Response::LocalSearch => SeparatorMode::LocalSearch,
    }
}

fn column_options(ctx: &Ctx, r: Response) -> ColumnGenerationOptions {
    ColumnGenerationOptions {
        best_response: response_mode(r),
        max_iterations: ctx.cli.global.budget,
        exact_limit: DEFAULT_EXACT_LIMIT,
    }
}

fn game(ctx: &Ctx, a: &GameArgs) -> CliResult<Output> {
    let (g, _) = ctx.graph(&a.graph)?;
    match a.method {
        GameMethod::Exact => {
            let sol = separator_game_exact(&g, a.k, ctx.cli.global.cap)?;
            let v = json!({
                "method": "exact",
                "mode": "rational",
                "K": a.k,
                "value": rational::format(&sol.value),
                "columns": sol.columns,
                "distribution": certificate_to_json(&Certificate::Distribution(sol.primal)),
                "witness": certificate_to_json(&Certificate::Weights(sol.dual)),
            });
            Ok(ctx.json_output(v, true))
        }
        GameMethod::ColumnGeneration => match ctx.mode() {
            Mode::Rational => game_bracket::<Rational>(ctx, &g, a),
            Mode::Float => game_bracket::<f64>(ctx, &g, a),
        },
    }
}

fn game_bracket<T: Emit>(ctx: &Ctx, g: &BoundedDegreeGraph, a: &GameArgs) -> CliResult<Output> {
    let b = separator_game_column_generation::<T>(g, a.k, &column_options(ctx, a.response))?;
    let atoms: Vec<Value> = b
        .columns
        .iter()
        .zip(&b.probabilities)
        .filter(|(_, p)| p.is_positive_ish())
        .map(|(c, p)| json!({"T": c.removed(), "p": p.emit()}))
        .collect();
    let v = json!({
        "method": "column-generation",
        "mode": ctx.mode().name(),
        "K": a.k,
        "lower": b.lower.emit(),
        "upper": b.upper.emit(),
        "converged": b.converged,
        "iterations": b.iterations,
        "distribution": {"K": a.k, "atoms": atoms},
        "lower_witness": b.lower_witness.iter().map(Emit::emit).collect::<Vec<_>>(),
    });
    Ok(ctx.json_output(v, true))
}

type PartitionRun<T> = (Output, BoundedDegreeGraph, PartitionLpResult<T>);

fn partition_lp<T: Emit>(ctx: &Ctx, a: &PartitionArgs) -> CliResult<PartitionRun<T>> {
    let (g, _) = ctx.graph(&a.graph)?;
    let res = fractional_partition_lp::<T>(&g, a.k, ctx.cli.global.cap)?;
    let support: Vec<Value> =
        res.weights.iter().map(|(s, w)| json!({"A": s.vertices(), "phi": w.emit()})).collect();
    let v = json!({
        "mode": ctx.mode().name(),
        "K": a.k,
        "value": res.value.emit(),
        "pieces_considered": res.pieces_considered,
        "certificate": {"K": a.k, "support": support},
    });
    Ok((ctx.json_output(v, true), g, res))
}

/// Exact runs also check that the optimizer is a valid certificate.
fn partition_lp_exact(ctx: &Ctx, a: &PartitionArgs) -> CliResult<Output> {
    let (out, g, res) = partition_lp::<Rational>(ctx, a)?;
    optimal_partition(&g, a.k, &res)?;
    Ok(out)
}

const PROFILE_HEADER: &str = "K,game_value,game_lower,game_upper,game_kind,partition_lp_value,partition_lp_kind,\
uniform_profile,uniform_kind,game_value_exact,partition_lp_exact,uniform_profile_exact";

/// One CSV row per K. Values are decimals; the `*_exact` columns repeat
/// them as `p/q` when they are exact. The `*_kind` columns say what a value
/// is: `exact`, `bracket`, `lower_bound`, `float` or `skipped`.
fn profile<T: Emit>(ctx: &Ctx, a: &ProfileArgs) -> CliResult<Output> {
    let (g, mu) = ctx.graph(&a.graph)?;
    let cap = ctx.cli.global.cap;
    let n = g.n();
    let dec = |r: &Rational| rational::to_f64(r).to_string();
    let mut csv = String::from(PROFILE_HEADER);
    csv.push('\n');
    for &k in &a.k_range.0 {
        let method = a.method.unwrap_or(if n <= DEFAULT_EXACT_LIMIT {
            GameMethod::Exact
        } else {
            GameMethod::ColumnGeneration
        });
        let exact = match method {
            GameMethod::Exact => match separator_game_exact(&g, k, cap) {
                Ok(sol) => Some(sol.value),
                Err(Error::ExplosionCap { .. }) if a.method.is_none() => None,
                Err(e) => return Err(e.into()),
            },
            GameMethod::ColumnGeneration => None,
        };
        let game_cols = match exact {
            Some(v) => [dec(&v), dec(&v), dec(&v), "exact".into(), rational::format(&v)],
            None => {
                let b = separator_game_column_generation::<T>(&g, k, &column_options(ctx, a.response))?;
                let (lo, hi) = (b.lower.to_f64(), b.upper.to_f64());
                if T::EXACT && b.lower == b.upper {
                    let v = b.upper.emit();
                    let s = v.as_str().unwrap_or_default().to_string();
                    [hi.to_string(), lo.to_string(), hi.to_string(), "exact".into(), s]
                } else {
                    [String::new(), lo.to_string(), hi.to_string(), "bracket".into(), String::new()]
                }
            }
        };
        let part_cols = if a.no_partition_lp {
            [String::new(), "skipped".into(), String::new()]
        } else {
            let res = fractional_partition_lp::<T>(&g, k, cap)?;
            let v = res.value.emit();
            match v.as_str() {
                Some(s) => [res.value.to_f64().to_string(), "exact".into(), s.to_string()],
                None => [res.value.to_f64().to_string(), "float".into(), String::new()],
            }
        };
        let uni_cols = if a.no_uniform {
            [String::new(), "skipped".into(), String::new()]
        } else if n <= EXACT_PROFILE_LIMIT {
            let p = uniform_profile(&g, &mu, k, ProfileMode::Exact)?;
            [dec(&p.value), "exact".into(), rational::format(&p.value)]
        } else {
            let seed = ctx.seed("for the sampled uniform profile on graphs this large")?;
            let p = uniform_profile(&g, &mu, k, ProfileMode::Sampled { count: a.samples, seed })?;
            [dec(&p.value), "lower_bound".into(), rational::format(&p.value)]
        };
        let [gv, gl, gu, gk, ge] = game_cols;
        let [pv, pk, pe] = part_cols;
        let [uv, uk, ue] = uni_cols;
        csv.push_str(&[k.to_string(), gv, gl, gu, gk, pv, pk, uv, uk, ge, pe, ue].join(","));
        csv.push('\n');
    }
    Ok(Output {
        bytes: csv.into_bytes(),
        pass: true,
    })
}
