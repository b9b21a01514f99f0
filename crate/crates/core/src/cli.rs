//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a scenario check failed, 2 usage, parse or
//! unsupported input, 3 a resource limit was hit.

use std::io::Write;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use crate::closure::{star_member, starsp_member, ClosureConfig, ClosureVerdict, TestIdealInput};
use crate::error::{Error, Result};
use crate::examples::{example_source, EXAMPLE_IDS};
use crate::groebner::{normal_form, GbLimits};
use crate::ideals::{IdealHandle, QuotientRing};
use crate::poly::Polynomial;
use crate::report::Report;
use crate::runner::{evaluate_ideals, run_scenario, RunOptions};
use crate::scenario::{
    parse_ideal_expr, parse_ring_text, parse_scenario_with_limits, Env, Flag, Scenario, Value,
};
use crate::selftest::{oracle_agreement, reduction_number_experiment};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "starcore",
    version,
    about = "Ideal calculus over F_p and a *-core criteria checker"
)]
pub struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Largest Frobenius power tried by closure refutations (default p^2).
    #[arg(long, global = true)]
    pub qmax: Option<u64>,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Degree cap for Gröbner computations.
    #[arg(long, global = true, env = "STARCORE_MAX_DEGREE")]
    pub max_degree: Option<u32>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Context {
    /// Ring such as `F(7)[x,y,z] / (x^5 + y^5 + z^5)`.
    #[arg(long, conflicts_with = "scenario")]
    pub ring: Option<String>,
    /// Scenario file supplying the ring, named ideals and the test ideal.
    #[arg(long)]
    pub scenario: Option<String>,
    /// Test ideal, as an ideal expression.
    #[arg(long)]
    pub tau: Option<String>,
    /// Assert that the ideal is generated by part of a system of parameters
    /// of a Gorenstein ring.
    #[arg(long)]
    pub gorenstein: bool,
}

#[derive(Args, Debug, Clone, Default)]
pub struct StarContext {
    #[command(flatten)]
    pub ctx: Context,
    /// The reduction J (defaults to the scenario's J).
    #[arg(long = "j")]
    pub j: Option<String>,
    /// The extra generators U (defaults to the scenario's U).
    #[arg(long = "u")]
    pub u: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Reduced Gröbner basis of an ideal.
    Gb {
        #[command(flatten)]
        ctx: Context,
        ideal: String,
    },
    /// Normal form of a polynomial modulo an ideal.
    Nf {
        #[command(flatten)]
        ctx: Context,
        poly: String,
        ideal: String,
    },
    /// Colon ideal A : B.
    Colon {
        #[command(flatten)]
        ctx: Context,
        a: String,
        b: String,
    },
    /// Intersection of two ideals.
    Intersect {
        #[command(flatten)]
        ctx: Context,
        a: String,
        b: String,
    },
    /// Product of two ideals.
    Product {
        #[command(flatten)]
        ctx: Context,
        a: String,
        b: String,
    },
    /// Ordinary power A^n.
    Power {
        #[command(flatten)]
        ctx: Context,
        a: String,
        n: u32,
    },
    /// Frobenius bracket power A^[q].
    Bracket {
        #[command(flatten)]
        ctx: Context,
        a: String,
        q: u64,
    },
    /// Ideal membership.
    Member {
        #[command(flatten)]
        ctx: Context,
        poly: String,
        ideal: String,
    },
    /// Tight closure membership verdict.
    StarMember {
        #[command(flatten)]
        ctx: Context,
        poly: String,
        ideal: String,
    },
    /// Special tight closure membership verdict.
    StarspMember {
        #[command(flatten)]
        ctx: Context,
        poly: String,
        ideal: String,
    },
    /// Hypotheses a1, a2, b and the conclusion they license.
    Criteria {
        #[command(flatten)]
        sctx: StarContext,
    },
    /// The bracket tau I, J(J:I), I(J:I) and the finite intersection.
    CoreBracket {
        #[command(flatten)]
        sctx: StarContext,
    },
    /// Criteria and bracket after replacing J and U by Frobenius powers.
    FrobScale {
        #[command(flatten)]
        sctx: StarContext,
        /// Exponents e, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "0,1")]
        e: Vec<u32>,
    },
    /// Whether I^2 = JI, with the test-ideal lower bound.
    RedNumber {
        #[command(flatten)]
        sctx: StarContext,
    },
    /// Runs a scenario file and its checks.
    Run {
        file: String,
        /// Also run Frobenius scaling for these exponents.
        #[arg(long, value_delimiter = ',')]
        scale: Vec<u32>,
    },
    /// Runs a bundled example.
    Example {
        /// One of xyz, quintic, decic, cubic-mainm, mainsop.
        id: String,
        /// Characteristic (default 7).
        #[arg(long = "char")]
        characteristic: Option<u32>,
        /// Also run Frobenius scaling for these exponents.
        #[arg(long, value_delimiter = ',')]
        scale: Vec<u32>,
        /// Print the scenario source instead of running it.
        #[arg(long)]
        source: bool,
    },
    /// Compares the Gröbner kernel with the linear-algebra oracle.
    Selftest {
        #[arg(long, default_value_t = 100)]
        instances: usize,
        /// Also draw this many random J ⊆ I ⊆ J* and record whether I^2 = JI.
        #[arg(long, default_value_t = 0)]
        red_number: usize,
    },
}

/// Output of one invocation.
#[derive(Debug, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Resource(_) => EXIT_RESOURCE,
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            }
        }
    }
}

pub fn execute(cli: &Cli) -> Outcome {
    match dispatch(cli) {
        Ok((report, code)) => Outcome {
            code,
            stdout: report,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: exit_code(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

/// Entry point for the binary.
pub fn main_with_env() -> i32 {
    let out = run(std::env::args_os());
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    out.code
}

fn limits(cli: &Cli) -> GbLimits {
    let mut l = GbLimits::default();
    if let Some(d) = cli.max_degree {
        l.max_degree = d;
    }
    l
}

/// Ring, named ideals and optional scenario loaded from a context.
struct Loaded {
    name: String,
    ring: Arc<QuotientRing>,
    env: Env,
    scenario: Option<Scenario>,
}

impl Loaded {
    fn names(&self) -> Vec<String> {
        let mut v: Vec<String> = self.env.keys().cloned().collect();
        v.sort();
        v
    }

    fn ideal(&self, src: &str) -> Result<IdealHandle> {
        parse_ideal_expr(src, &self.ring, &self.names())?.eval(&self.ring, &self.env)
    }

    fn poly(&self, src: &str) -> Result<Polynomial> {
        self.ring.parse_poly(src)
    }

    fn tau(&self, ctx: &Context) -> Result<TestIdealInput> {
        if let Some(t) = &ctx.tau {
            return TestIdealInput::new(self.ideal(t)?, t.clone());
        }
        let sc = self.scenario.as_ref();
        match sc.and_then(|s| s.tau.as_ref()) {
            Some(d) => {
                let prov = d.provenance.clone().unwrap_or_else(|| d.expr.to_string());
                TestIdealInput::new(d.expr.eval(&self.ring, &self.env)?, prov)
            }
            None => Err(Error::usage(
                "a test ideal is required: pass --tau or a scenario declaring tau",
            )),
        }
    }

    fn config(&self, cli: &Cli, ctx: &Context) -> ClosureConfig {
        let flagged = self
            .scenario
            .as_ref()
            .is_some_and(|s| s.has_flag(Flag::GorensteinParameter));
        ClosureConfig {
            q_max: cli.qmax,
            gorenstein_parameter: ctx.gorenstein || flagged,
        }
    }
}

fn read_file(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::usage(format!("cannot read {path}: {e}")))
}

fn load(cli: &Cli, ctx: &Context) -> Result<Loaded> {
    match (&ctx.ring, &ctx.scenario) {
        (Some(r), None) => Ok(Loaded {
            name: "command line".into(),
            ring: parse_ring_text(r, limits(cli))?,
            env: Env::new(),
            scenario: None,
        }),
        (None, Some(path)) => {
            let sc = parse_scenario_with_limits(&read_file(path)?, limits(cli))?;
            Ok(Loaded {
                name: path.clone(),
                ring: sc.ring.clone(),
                env: evaluate_ideals(&sc)?,
                scenario: Some(sc),
            })
        }
        _ => Err(Error::usage(
            "exactly one of --ring and --scenario is required",
        )),
    }
}

fn braces(gens: &[Polynomial]) -> String {
    let v: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
    format!("{{{}}}", v.join(", "))
}

fn strings(gens: &[Polynomial]) -> Vec<String> {
    gens.iter().map(|g| g.to_string()).collect()
}

/// Prints an ideal result as `{g1, g2, ...}` or as a JSON report.
fn ideal_output(cli: &Cli, l: &Loaded, key: &str, gens: &[Polynomial]) -> String {
    if cli.json {
        let mut r = Report::new(&l.name, &l.ring);
        r.ideals.insert(key.into(), strings(gens));
        r.to_json() + "\n"
    } else {
        braces(gens) + "\n"
    }
}

fn verdict_output(cli: &Cli, l: &Loaded, key: &str, v: &ClosureVerdict) -> String {
    if cli.json {
        let mut r = Report::new(&l.name, &l.ring);
        r.verdicts
            .insert(key.into(), Value::Word(format!("{:?}", v.status)));
        r.scenario.closure.insert(key.into(), v.clone());
        return r.to_json() + "\n";
    }
    let mut s = format!("{:?} by {:?} (q_max {})\n", v.status, v.rule, v.q_max);
    for e in &v.evidence {
        s += &format!("  q = {}: {} = {}\n", e.q, e.check, e.holds);
    }
    for a in &v.assumptions {
        s += &format!("  assuming {a}\n");
    }
    s
}

/// Builds a scenario for the star-core commands from the context and
/// optional `--j`/`--u` overrides, with its checks removed.
fn star_scenario(cli: &Cli, sctx: &StarContext) -> Result<(String, Scenario)> {
    let ctx = &sctx.ctx;
    let mut src = match (&ctx.ring, &ctx.scenario) {
        (Some(r), None) => format!("ring R = {r};\n"),
        (None, Some(path)) => read_file(path)?,
        _ => {
            return Err(Error::usage(
                "exactly one of --ring and --scenario is required",
            ))
        }
    };
    // later declarations replace earlier ones
    let mut extra = String::new();
    if let Some(j) = &sctx.j {
        extra += &format!("ideal J = {j};\n");
    }
    if let Some(u) = &sctx.u {
        extra += &format!("ideal U = {u};\n");
    }
    if let Some(t) = &ctx.tau {
        extra += &format!("tau = {t};\n");
    }
    if ctx.gorenstein {
        extra += "flag gorenstein_parameter;\n";
    }
    let mut sc = parse_scenario_with_limits(&src, limits(cli))?;
    if !extra.is_empty() {
        src = strip_checks(&src);
        src += &extra;
        sc = parse_scenario_with_limits(&merge_declarations(&src), limits(cli))?;
    }
    sc.checks.clear();
    if !sc.declares("J") {
        return Err(Error::usage(
            "the reduction J is required: pass --j or a scenario declaring J",
        ));
    }
    if sc.tau.is_none() {
        return Err(Error::usage(
            "a test ideal is required: pass --tau or a scenario declaring tau",
        ));
    }
    let name = ctx
        .scenario
        .clone()
        .unwrap_or_else(|| "command line".into());
    Ok((name, sc))
}

/// Drops `check` statements so that declarations can be appended.
fn strip_checks(src: &str) -> String {
    let mut out = String::new();
    let mut in_check = false;
    for line in src.lines() {
        let t = line.trim_start();
        if t.starts_with("check ") {
            in_check = true;
        }
        if !in_check {
            out += line;
            out.push('\n');
        }
        if in_check && line.trim_end().ends_with(';') {
            in_check = false;
        }
    }
    out
}

/// Keeps the last declaration of each ideal name, tau and flag.
fn merge_declarations(src: &str) -> String {
    let mut lines: Vec<String> = src.lines().map(str::to_string).collect();
    let key = |l: &str| -> Option<String> {
        let t = l.trim_start();
        if let Some(rest) = t.strip_prefix("ideal ") {
            return rest
                .split('=')
                .next()
                .map(|n| format!("ideal {}", n.trim()));
        }
        if t.starts_with("tau ") || t.starts_with("tau=") {
            return Some("tau".into());
        }
        if t.starts_with("flag ") {
            return Some(t.trim_end_matches(';').trim().to_string());
        }
        None
    };
    let mut seen = std::collections::HashSet::new();
    for i in (0..lines.len()).rev() {
        if let Some(k) = key(&lines[i]) {
            if !seen.insert(k) {
                lines[i] = String::new();
            }
        }
    }
    lines.join("\n") + "\n"
}

fn scenario_output(cli: &Cli, report: &Report) -> String {
    if cli.json {
        report.to_json() + "\n"
    } else {
        report.to_text()
    }
}

fn dispatch(cli: &Cli) -> Result<(String, i32)> {
    let ok = |s: String| Ok((s, EXIT_OK));
    match &cli.command {
        Command::Gb { ctx, ideal } => {
            let l = load(cli, ctx)?;
            let a = l.ideal(ideal)?;
            ok(ideal_output(cli, &l, "gb", a.gb()?.elements()))
        }
        Command::Nf { ctx, poly, ideal } => {
            let l = load(cli, ctx)?;
            let a = l.ideal(ideal)?;
            let r = normal_form(&l.poly(poly)?, a.gb()?)?;
            if cli.json {
                let mut rep = Report::new(&l.name, &l.ring);
                rep.verdicts.insert("nf".into(), Value::Word(r.to_string()));
                ok(rep.to_json() + "\n")
            } else {
                ok(format!("{r}\n"))
            }
        }
        Command::Colon { ctx, a, b } => binary(cli, ctx, a, b, "colon", |x, y| x.colon(y)),
        Command::Intersect { ctx, a, b } => {
            binary(cli, ctx, a, b, "intersection", |x, y| x.intersect(y))
        }
        Command::Product { ctx, a, b } => binary(cli, ctx, a, b, "product", |x, y| x.product(y)),
        Command::Power { ctx, a, n } => {
            let l = load(cli, ctx)?;
            let r = l.ideal(a)?.power(*n)?;
            ok(ideal_output(cli, &l, "power", &r.presentation()?))
        }
        Command::Bracket { ctx, a, q } => {
            let l = load(cli, ctx)?;
            let r = l.ideal(a)?.bracket_power(*q)?;
            ok(ideal_output(cli, &l, "bracket_power", &r.presentation()?))
        }
        Command::Member { ctx, poly, ideal } => {
            let l = load(cli, ctx)?;
            let b = l.ideal(ideal)?.contains(&l.poly(poly)?)?;
            if cli.json {
                let mut rep = Report::new(&l.name, &l.ring);
                rep.verdicts.insert("member".into(), Value::Bool(b));
                ok(rep.to_json() + "\n")
            } else {
                ok(format!("{b}\n"))
            }
        }
        Command::StarMember { ctx, poly, ideal } | Command::StarspMember { ctx, poly, ideal } => {
            let l = load(cli, ctx)?;
            let f = l.poly(poly)?;
            let a = l.ideal(ideal)?;
            let tau = l.tau(ctx)?;
            let cfg = l.config(cli, ctx);
            let (key, v) = if matches!(cli.command, Command::StarMember { .. }) {
                ("star_member", star_member(&f, &a, &tau, &cfg)?)
            } else {
                ("starsp_member", starsp_member(&f, &a, &tau, &cfg)?)
            };
            ok(verdict_output(cli, &l, key, &v))
        }
        Command::Criteria { sctx } | Command::CoreBracket { sctx } => {
            let (name, sc) = star_scenario(cli, sctx)?;
            let opts = RunOptions {
                q_max: cli.qmax,
                ..Default::default()
            };
            ok(scenario_output(
                cli,
                &run_scenario(&sc, &name, &opts)?.report,
            ))
        }
        Command::RedNumber { sctx } => {
            let (name, sc) = star_scenario(cli, sctx)?;
            let opts = RunOptions {
                q_max: cli.qmax,
                extras: true,
                ..Default::default()
            };
            ok(scenario_output(
                cli,
                &run_scenario(&sc, &name, &opts)?.report,
            ))
        }
        Command::FrobScale { sctx, e } => {
            let (name, sc) = star_scenario(cli, sctx)?;
            let opts = RunOptions {
                q_max: cli.qmax,
                scaling: e.clone(),
                extras: false,
            };
            ok(scenario_output(
                cli,
                &run_scenario(&sc, &name, &opts)?.report,
            ))
        }
        Command::Run { file, scale } => {
            let sc = parse_scenario_with_limits(&read_file(file)?, limits(cli))?;
            run_checked(cli, &sc, file, scale)
        }
        Command::Example {
            id,
            characteristic,
            scale,
            source,
        } => {
            if !EXAMPLE_IDS.contains(&id.as_str()) {
                return Err(Error::usage(format!(
                    "unknown example `{id}`; known: {}",
                    EXAMPLE_IDS.join(", ")
                )));
            }
            let src = example_source(id, *characteristic)?;
            if *source {
                return ok(src);
            }
            let sc = parse_scenario_with_limits(&src, limits(cli))?;
            run_checked(cli, &sc, id, scale)
        }
        Command::Selftest {
            instances,
            red_number,
        } => {
            let stats = oracle_agreement(cli.seed, *instances)?;
            let red = if *red_number > 0 {
                Some(reduction_number_experiment(cli.seed, *red_number)?)
            } else {
                None
            };
            let agree = stats.disagreements.is_empty();
            let code = if agree { EXIT_OK } else { EXIT_CHECK_FAILED };
            if cli.json {
                let v = serde_json::json!({ "oracle": stats, "reduction_number": red });
                return Ok((
                    serde_json::to_string_pretty(&v).expect("stats serialize") + "\n",
                    code,
                ));
            }
            let mut s = format!(
                "{} instances (seed {}), {} membership and {} equality comparisons\n",
                stats.instances, cli.seed, stats.membership_checks, stats.equality_checks
            );
            for d in &stats.disagreements {
                s += &format!("disagreement: {d}\n");
            }
            s += if agree {
                "oracle agreement: PASS\n"
            } else {
                "oracle agreement: FAIL\n"
            };
            if let Some(r) = red {
                s += &format!(
                    "reduction number experiment: {} trials ({} draws skipped), I^2 = JI in {}\n",
                    r.trials, r.skipped, r.reduction_number_one
                );
                for e in &r.reduction_number_above_one {
                    s += &format!("  I^2 != JI: {e}\n");
                }
            }
            Ok((s, code))
        }
    }
}

fn run_checked(cli: &Cli, sc: &Scenario, name: &str, scale: &[u32]) -> Result<(String, i32)> {
    let opts = RunOptions {
        q_max: cli.qmax,
        scaling: scale.to_vec(),
        extras: true,
    };
    let out = run_scenario(sc, name, &opts)?;
    let code = if out.passed() {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    };
    Ok((scenario_output(cli, &out.report), code))
}

fn binary(
    cli: &Cli,
    ctx: &Context,
    a: &str,
    b: &str,
    key: &str,
    op: impl Fn(&IdealHandle, &IdealHandle) -> Result<IdealHandle>,
) -> Result<(String, i32)> {
    let l = load(cli, ctx)?;
    let r = op(&l.ideal(a)?, &l.ideal(b)?)?;
    Ok((ideal_output(cli, &l, key, &r.presentation()?), EXIT_OK))
}
