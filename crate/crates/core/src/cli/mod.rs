//! Command-line front end.
//!
//! Every subcommand is reachable through [`run`], which takes the argument
//! list and two writers and returns the process exit code:
//!
//! | code | meaning                                               |
//! |------|-------------------------------------------------------|
//! | 0    | success                                               |
//! | 1    | a requested check failed (verify, assert, axioms)     |
//! | 2    | configuration could not be resolved                   |
//! | 3    | a scheme run failed                                   |
//! | 4    | the data-dependence run did not converge              |
//!
//! Settings come from flags, then from `--config <file>`, then from the
//! built-in defaults, which reproduce the published experiment.

mod config;

pub use config::{FileConfig, KEYS};

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::bounds::{BoundSequences, EnvelopeForm, DEFAULT_HORIZON, DEFAULT_THRESHOLD};
use crate::error::{Error, Result};
use crate::experiments::{comparison_table, rate_race, run_datadep, Comparison, DataDepConfig, PAPER_ROWS};
use crate::format::fixed;
use crate::mappings::ContractiveLike;
use crate::registry::{resolve_schedule, resolve_space, Registered};
use crate::schemes::{run as run_scheme, InnerMode, InnerSolverConfig, PerturbedVariant, Schedule, Scheme};
use crate::wspace::{check_axioms, Space, DEFAULT_AXIOM_TOLERANCE};
use crate::with_space;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_SCHEME: i32 = 3;
pub const EXIT_INCONCLUSIVE: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "implicit-iter", version, about = "Implicit fixed-point iterations in W-hyperbolic spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Tabulate d(x_n, p) for the implicit Mann, Ishikawa and S schemes
    Table(TableArgs),
    /// Race the schemes and compare convergence rates
    Compare(CompareArgs),
    /// Emit the error envelopes next to the actual traces
    Bounds(BoundsArgs),
    /// Perturb the map and compare the fixed points with the data-dependence bound
    Datadep(DatadepArgs),
    /// Check the W-hyperbolic axioms on sampled tuples
    AxiomCheck(AxiomArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Args, Debug, Default)]
pub struct CommonArgs {
    /// Flat key = value file; flags take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// euclidean:<dim>, tripod, halfplane or broken-demo
    #[arg(long)]
    pub space: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub mapping: Option<String>,
    /// paper-example, sqrt or constant:<alpha>:<beta>
    #[arg(long)]
    pub schedule: Option<String>,
    /// Expression in n for alpha_n, e.g. "1 - 1/n"
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    /// Initial point x_1
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<String>,
    #[arg(long = "n-max")]
    pub n_max: Option<usize>,
    /// Inner solver tolerance (axiom tolerance for axiom-check)
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// picard, exact-affine or auto
    #[arg(long)]
    pub inner: Option<String>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Decimal places of numeric output
    #[arg(long)]
    pub digits: Option<usize>,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Check every cell against the published table
    #[arg(long)]
    pub verify: bool,
    /// Emit only the rows of the published table
    #[arg(long)]
    pub paper_rows: bool,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Scheme to race; the first is compared against the others
    #[arg(long = "scheme")]
    pub schemes: Vec<String>,
    /// Exit 1 unless every comparison says faster
    #[arg(long)]
    pub assert_faster: bool,
    #[arg(long)]
    pub horizon: Option<usize>,
    #[arg(long)]
    pub threshold: Option<f64>,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Use (Δ_n)^n d0 instead of the cumulative product
    #[arg(long)]
    pub literal: bool,
    /// Override the certificate's δ
    #[arg(long)]
    pub delta: Option<f64>,
    /// Override d(x_1, p)
    #[arg(long)]
    pub d0: Option<f64>,
    /// Exit 1 if a trace exceeds its envelope
    #[arg(long)]
    pub verify: bool,
}

#[derive(Args, Debug)]
pub struct DatadepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Offset c of the approximate operator S = T + c
    #[arg(long, allow_hyphen_values = true)]
    pub perturb: Option<String>,
    /// Initial point of the perturbed run; defaults to x0
    #[arg(long, allow_hyphen_values = true)]
    pub u0: Option<String>,
    /// Apply S instead of T to v_n
    #[arg(long)]
    pub proof_variant: bool,
}

#[derive(Args, Debug)]
pub struct AxiomArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

enum Failure {
    Config(Error),
    Scheme(Error),
}

type Outcome = std::result::Result<i32, Failure>;

fn config<T>(r: Result<T>) -> std::result::Result<T, Failure> {
    r.map_err(Failure::Config)
}

fn scheme<T>(r: Result<T>) -> std::result::Result<T, Failure> {
    r.map_err(Failure::Scheme)
}

/// Settings shared by all subcommands after merging flags, file and defaults.
struct Settings {
    file: FileConfig,
    space: String,
    mapping: Option<String>,
    schedule: Schedule,
    x0: Option<String>,
    n_max: usize,
    tolerance: Option<f64>,
    inner: String,
    output: Option<PathBuf>,
    format: Format,
    digits: usize,
}

impl Settings {
    fn resolve(c: CommonArgs, n_max_default: usize, inner_default: &str) -> Result<Self> {
        let file = match &c.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let schedule = resolve_schedule(
            file.string(c.schedule, "schedule").as_deref(),
            file.string(c.alpha, "alpha").as_deref(),
            file.string(c.beta, "beta").as_deref(),
        )?;
        let n_max = file.parsed(c.n_max, "n-max")?.unwrap_or(n_max_default);
        if n_max == 0 {
            return Err(Error::parameter("n-max must be at least 1"));
        }
        let tolerance = file.parsed(c.tolerance, "tolerance")?;
        if tolerance.is_some_and(|t| !(t > 0.0)) {
            return Err(Error::parameter("tolerance must be positive"));
        }
        let format = match file.string(None, "format") {
            _ if c.format.is_some() => c.format.expect("checked"),
            Some(f) => Format::from_str(&f, true).map_err(|_| Error::Parse(format!("unknown format `{f}`")))?,
            None => Format::Table,
        };
        Ok(Settings {
            space: file.string(c.space, "space").unwrap_or_else(|| "euclidean:1".into()),
            mapping: file.string(c.mapping, "mapping"),
            x0: file.string(c.x0, "x0"),
            inner: file.string(c.inner, "inner").unwrap_or_else(|| inner_default.into()),
            output: file.string(c.output.map(|p| p.display().to_string()), "output").map(PathBuf::from),
            digits: file.parsed(c.digits, "digits")?.unwrap_or(15),
            schedule,
            n_max,
            tolerance,
            format,
            file,
        })
    }

    fn reject_json(&self) -> Result<()> {
        if self.format == Format::Json {
            return Err(Error::Unsupported("json output is only available for datadep".into()));
        }
        Ok(())
    }

    fn inner_config(&self, affine: bool) -> Result<InnerSolverConfig> {
        let mode = match self.inner.as_str() {
            "picard" => InnerMode::Picard,
            "exact-affine" => InnerMode::ExactAffine,
            "auto" if affine => InnerMode::ExactAffine,
            "auto" => InnerMode::Picard,
            other => {
                return Err(Error::UnknownName {
                    kind: "inner solver",
                    name: other.into(),
                })
            }
        };
        let mut cfg = InnerSolverConfig {
            mode,
            ..InnerSolverConfig::default()
        };
        if let Some(t) = self.tolerance {
            cfg.tolerance = t;
        }
        Ok(cfg)
    }

    fn mapping<S: Registered>(&self, space: &S) -> Result<ContractiveLike<S>> {
        space.mapping(self.mapping.as_deref().unwrap_or(space.default_mapping()))
    }

    fn x0<S: Registered>(&self, space: &S) -> Result<S::Point> {
        match &self.x0 {
            Some(s) => space.parse_point(s),
            None => Ok(space.default_x0()),
        }
    }
}

/// Routes the main artifact to `--output` or stdout and status lines to
/// stdout, or to stderr when stdout carries CSV.
struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Io<'_> {
    fn artifact(&mut self, st: &Settings, bytes: &[u8]) -> std::result::Result<(), Failure> {
        match &st.output {
            Some(path) => std::fs::write(path, bytes)
                .map_err(|e| Failure::Config(Error::Parse(format!("cannot write {}: {e}", path.display())))),
            None => {
                let _ = self.out.write_all(bytes);
                Ok(())
            }
        }
    }

    fn status(&mut self, st: &Settings, line: &str) {
        let w: &mut dyn Write = if st.format != Format::Table && st.output.is_none() {
            self.err
        } else {
            self.out
        };
        let _ = writeln!(w, "{line}");
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = out.write_all(rendered.as_bytes());
                EXIT_OK
            } else {
                let _ = err.write_all(rendered.as_bytes());
                EXIT_CONFIG
            };
        }
    };
    let mut io = Io { out, err };
    let outcome = match cli.command {
        Command::Table(a) => cmd_table(a, &mut io),
        Command::Compare(a) => cmd_compare(a, &mut io),
        Command::Bounds(a) => cmd_bounds(a, &mut io),
        Command::Datadep(a) => cmd_datadep(a, &mut io),
        Command::AxiomCheck(a) => cmd_axiom_check(a, &mut io),
    };
    match outcome {
        Ok(code) => code,
        Err(Failure::Config(e)) => {
            let _ = writeln!(io.err, "configuration error: {e}");
            EXIT_CONFIG
        }
        Err(Failure::Scheme(e)) => {
            let _ = writeln!(io.err, "scheme failure: {e}");
            EXIT_SCHEME
        }
    }
}

fn cmd_table(a: TableArgs, io: &mut Io) -> Outcome {
    let st = config(Settings::resolve(a.common, 50, "picard"))?;
    config(st.reject_json())?;
    let verify = config(st.file.switch(a.verify, "verify"))?;
    let paper_rows = config(st.file.switch(a.paper_rows, "paper-rows"))?;
    let started = Instant::now();
    let table = with_space!(config(resolve_space(&st.space))?, space => {
        let t = config(st.mapping(&space))?;
        let x0 = config(st.x0(&space))?;
        let cfg = config(st.inner_config(t.affine().is_some()))?;
        scheme(comparison_table(&space, &t, &st.schedule, &x0, st.n_max, &cfg))?
    });
    let shown = if paper_rows { table.paper_rows_only() } else { table.clone() };
    let bytes = match st.format {
        Format::Csv => {
            let mut buf = Vec::new();
            config(shown.write_csv(st.digits, &mut buf).map_err(|e| Error::Parse(e.to_string())))?;
            buf
        }
        _ => shown.render(st.digits).into_bytes(),
    };
    io.artifact(&st, &bytes)?;
    if !verify {
        return Ok(EXIT_OK);
    }
    let mismatches = table.verify_against_paper();
    let total = PAPER_ROWS.len() * 3;
    let elapsed = started.elapsed().as_secs_f64();
    if mismatches.is_empty() {
        io.status(&st, &format!("verify: {total}/{total} cells match ({elapsed:.3} s)"));
        return Ok(EXIT_OK);
    }
    io.status(&st, &format!("verify: {} of {total} cells differ", mismatches.len()));
    for m in &mismatches {
        io.status(
            &st,
            &format!(
                "  n={} {}: expected {} got {}",
                m.n,
                m.scheme.label(),
                m.expected,
                m.actual.as_deref().unwrap_or("(missing row)")
            ),
        );
    }
    Ok(EXIT_CHECK_FAILED)
}

fn describe(c: &Comparison, kind: &str) -> String {
    let mut s = format!("{:<8} {} vs {}: ", kind, c.candidate, c.reference);
    match &c.verdict {
        Some(v) => {
            let _ = write!(
                s,
                "ratio at n={} is {:e}, tail monotone {}, {}",
                v.horizon, v.final_ratio, v.tail_monotone, v.verdict
            );
        }
        None => s.push_str("reference starts at p, no comparison"),
    }
    if let Some(n) = c.truncated_at {
        let _ = write!(s, " (reference converged exactly at n={n})");
    }
    s
}

fn cmd_compare(a: CompareArgs, io: &mut Io) -> Outcome {
    let st = config(Settings::resolve(a.common, DEFAULT_HORIZON, "picard"))?;
    config(st.reject_json())?;
    let assert_faster = config(st.file.switch(a.assert_faster, "assert-faster"))?;
    let horizon = config(st.file.parsed(a.horizon, "horizon"))?.unwrap_or(DEFAULT_HORIZON);
    let threshold = config(st.file.parsed(a.threshold, "threshold"))?.unwrap_or(DEFAULT_THRESHOLD);
    let names: Vec<String> = if !a.schemes.is_empty() {
        a.schemes
    } else if let Some(list) = st.file.get("scheme") {
        list.split(',').map(|s| s.trim().to_string()).collect()
    } else {
        Scheme::ALL.iter().map(|s| s.id().to_string()).collect()
    };
    let schemes: Vec<Scheme> = config(names.iter().map(|s| s.parse()).collect())?;

    let (artifact, lines, faster) = with_space!(config(resolve_space(&st.space))?, space => {
        let t = config(st.mapping(&space))?;
        let x0 = config(st.x0(&space))?;
        let cfg = config(st.inner_config(t.affine().is_some()))?;
        let report = match rate_race(&space, &t, &schemes, &st.schedule, &x0, st.n_max, &cfg, horizon, threshold) {
            Ok(r) => r,
            Err(e @ (Error::NonConvergence { .. } | Error::InvalidPoint(_))) => return Err(Failure::Scheme(e)),
            Err(e) => return Err(Failure::Config(e)),
        };
        let mut lines = Vec::new();
        for r in &report.runs {
            let mut line = format!(
                "{:<18} d(x_n, p) at n={} is {}, envelope excess {:e}",
                r.scheme.id(),
                r.distances.len(),
                fixed(*r.distances.last().expect("nonempty"), st.digits),
                r.envelope_excess
            );
            if let Some(n) = r.converged_exactly_at {
                let _ = write!(line, ", converged exactly at n={n}");
            }
            lines.push(line);
        }
        for c in &report.actual {
            lines.push(describe(c, "actual"));
        }
        for c in &report.envelope {
            lines.push(describe(c, "envelope"));
        }
        let artifact = match st.format {
            Format::Csv => {
                let mut header = vec!["n".to_string()];
                header.extend(report.runs.iter().map(|r| format!("d_{}", r.scheme.id())));
                header.extend(report.runs.iter().map(|r| format!("env_{}", r.scheme.id())));
                let mut text = header.join(",");
                text.push('\n');
                for i in 0..st.n_max {
                    let mut row = vec![(i + 1).to_string()];
                    row.extend(report.runs.iter().map(|r| format!("{:e}", r.distances[i])));
                    row.extend(report.runs.iter().map(|r| format!("{:e}", report.envelopes.for_scheme(r.scheme)[i])));
                    text.push_str(&row.join(","));
                    text.push('\n');
                }
                Some(text)
            }
            _ => None,
        };
        (artifact, lines, report.all_faster())
    });
    if let Some(text) = artifact {
        io.artifact(&st, text.as_bytes())?;
    }
    for line in &lines {
        io.status(&st, line);
    }
    if assert_faster {
        io.status(&st, &format!("assert-faster: {}", if faster { "ok" } else { "failed" }));
        if !faster {
            return Ok(EXIT_CHECK_FAILED);
        }
    }
    Ok(EXIT_OK)
}

fn cmd_bounds(a: BoundsArgs, io: &mut Io) -> Outcome {
    let st = config(Settings::resolve(a.common, DEFAULT_HORIZON, "picard"))?;
    config(st.reject_json())?;
    let literal = config(st.file.switch(a.literal, "literal"))?;
    let verify = config(st.file.switch(a.verify, "verify"))?;
    let delta_override = config(st.file.parsed(a.delta, "delta"))?;
    let d0_override = config(st.file.parsed(a.d0, "d0"))?;
    let form = if literal { EnvelopeForm::Literal } else { EnvelopeForm::CumulativeProduct };

    let (env, traces) = with_space!(config(resolve_space(&st.space))?, space => {
        let t = config(st.mapping(&space))?;
        let x0 = config(st.x0(&space))?;
        let cfg = config(st.inner_config(t.affine().is_some()))?;
        let p = config(t.fixed_point().cloned().ok_or_else(|| Error::Unsupported(format!("map `{}` has no known fixed point", t.name()))))?;
        let delta = delta_override.unwrap_or(t.delta());
        let d0 = d0_override.unwrap_or_else(|| space.distance(&x0, &p));
        let env = config(BoundSequences::compute(&st.schedule, delta, d0, st.n_max, form))?;
        let mut traces = Vec::new();
        for s in [Scheme::ImplicitS, Scheme::ImplicitIshikawa, Scheme::ImplicitMann] {
            let tr = run_scheme(&space, &t, s, &st.schedule, &x0, st.n_max, &cfg, Some(&p)).map_err(|f| Failure::Scheme(f.error))?;
            traces.push((s, tr.distances().expect("fixed point supplied")));
        }
        (env, traces)
    });

    let header = ["n", "a", "b", "c", "exp", "contraction", "isi", "iii", "imi"];
    let rows: Vec<Vec<String>> = (0..st.n_max)
        .map(|i| {
            let mut row = vec![(i + 1).to_string()];
            for v in [env.a[i], env.b[i], env.c[i], env.exp[i], env.contraction[i]] {
                row.push(format!("{v:.*e}", st.digits));
            }
            for (_, d) in &traces {
                row.push(format!("{:.*e}", st.digits, d[i]));
            }
            row
        })
        .collect();
    let text = match st.format {
        Format::Csv => {
            let mut text = header.join(",");
            text.push('\n');
            for r in &rows {
                text.push_str(&r.join(","));
                text.push('\n');
            }
            text
        }
        _ => {
            let width = rows.iter().flatten().map(String::len).chain(header.iter().map(|h| h.len())).max().unwrap_or(1);
            let mut text = String::new();
            for r in std::iter::once(header.iter().map(|h| h.to_string()).collect::<Vec<_>>()).chain(rows) {
                let cells: Vec<String> = r.iter().map(|c| format!("{c:>width$}")).collect();
                text.push_str(cells.join(" ").trim_end());
                text.push('\n');
            }
            text
        }
    };
    io.artifact(&st, text.as_bytes())?;
    if !verify {
        return Ok(EXIT_OK);
    }
    let mut ok = true;
    for (s, d) in &traces {
        let excess = d.iter().zip(env.for_scheme(*s)).map(|(x, e)| x - e).fold(f64::NEG_INFINITY, f64::max);
        let pass = excess <= 1e-12;
        ok &= pass;
        io.status(&st, &format!("{:<18} max(d - envelope) = {excess:e} {}", s.id(), if pass { "ok" } else { "exceeded" }));
    }
    Ok(if ok { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn cmd_datadep(a: DatadepArgs, io: &mut Io) -> Outcome {
    let st = config(Settings::resolve(a.common, DataDepConfig::default().n_max, "auto"))?;
    let perturb = st.file.string(a.perturb, "perturb").unwrap_or_else(|| "0.01".into());
    let u0 = st.file.string(a.u0, "u0");
    let proof = config(st.file.switch(a.proof_variant, "proof-variant"))?;
    let dd = DataDepConfig {
        n_max: st.n_max,
        variant: if proof { PerturbedVariant::Proof } else { PerturbedVariant::Displayed },
        ..DataDepConfig::default()
    };
    let digits = st.digits;

    let (fields, code) = with_space!(config(resolve_space(&st.space))?, space => {
        let t = config(st.mapping(&space))?;
        let s = config(space.perturb(&t, &perturb))?;
        let x0 = config(st.x0(&space))?;
        let u0 = match &u0 {
            Some(v) => config(space.parse_point(v))?,
            None => x0.clone(),
        };
        let cfg = config(st.inner_config(t.affine().is_some() && s.affine().is_some()))?;
        let r = match run_datadep(&space, &t, &s, &st.schedule, &x0, &u0, &cfg, &dd) {
            Ok(r) => r,
            Err(e @ (Error::NonConvergence { .. } | Error::InvalidPoint(_))) => return Err(Failure::Scheme(e)),
            Err(e) => return Err(Failure::Config(e)),
        };
        let verdict = if !r.converged {
            "inconclusive"
        } else if r.holds() {
            "holds"
        } else {
            "violated"
        };
        let code = match verdict {
            "inconclusive" => EXIT_INCONCLUSIVE,
            "holds" => EXIT_OK,
            _ => EXIT_CHECK_FAILED,
        };
        let mut fields: Vec<(&str, String)> = vec![
            ("epsilon", fixed(r.epsilon, digits)),
            ("delta", fixed(r.delta, digits)),
            ("p", space.format_point(&r.p, digits)),
            ("q", space.format_point(&r.q, digits)),
        ];
        if let Some(q) = &r.q_closed_form {
            fields.push(("q_closed_form", space.format_point(q, digits)));
        }
        fields.push(("observed", fixed(r.observed, digits)));
        if let Some(d) = r.observed_closed_form {
            fields.push(("observed_closed_form", fixed(d, digits)));
        }
        fields.extend([
            ("bound", fixed(r.bound, digits)),
            ("margin", fixed(r.margin, digits)),
            ("iterations", r.iterations.to_string()),
            ("converged", r.converged.to_string()),
            ("variant", match r.variant {
                PerturbedVariant::Displayed => "displayed".to_string(),
                PerturbedVariant::Proof => "proof".to_string(),
            }),
            ("lemma1_hypothesis", match r.lemma1.first_violation() {
                None => "holds".to_string(),
                Some(i) => format!("violated at step {} ({} steps)", i + 2, r.lemma1.violations.len()),
            }),
            ("lemma1_max_excess", format!("{:e}", r.lemma1.max_excess)),
            ("lemma1_tail_a", fixed(r.lemma1.tail_a, digits)),
            ("lemma1_tail_eta", fixed(r.lemma1.tail_eta, digits)),
            ("verdict", verdict.to_string()),
        ]);
        (fields, code)
    });

    let text = match st.format {
        Format::Json => {
            let map: serde_json::Map<String, serde_json::Value> =
                fields.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
            let mut s = serde_json::to_string_pretty(&map).map_err(|e| Failure::Config(Error::Parse(e.to_string())))?;
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::from("key,value\n");
            for (k, v) in &fields {
                let _ = writeln!(s, "{k},\"{v}\"");
            }
            s
        }
        Format::Table => fields.iter().map(|(k, v)| format!("{k}={v}\n")).collect(),
    };
    io.artifact(&st, text.as_bytes())?;
    Ok(code)
}

fn cmd_axiom_check(a: AxiomArgs, io: &mut Io) -> Outcome {
    let st = config(Settings::resolve(a.common, 1, "picard"))?;
    config(st.reject_json())?;
    let samples = config(st.file.parsed(a.samples, "samples"))?.unwrap_or(10_000);
    let seed = config(st.file.parsed(a.seed, "seed"))?.unwrap_or(0);
    let tol = st.tolerance.unwrap_or(DEFAULT_AXIOM_TOLERANCE);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let report = with_space!(config(resolve_space(&st.space))?, space => {
        config(check_axioms(&space, &mut rng, |r: &mut ChaCha8Rng| space.sample(r), samples, tol))?
    });
    let text = match st.format {
        Format::Csv => {
            let mut s = String::from("axiom,max_violation,passed\n");
            for r in &report.results {
                let _ = writeln!(s, "{},{:e},{}", r.axiom, r.max_violation, r.passed);
            }
            s
        }
        _ => report.to_string(),
    };
    io.artifact(&st, text.as_bytes())?;
    if report.passed() {
        Ok(EXIT_OK)
    } else {
        for r in report.failed() {
            io.status(&st, &format!("violated: {} (worst sample {:?})", r.axiom, r.worst_sample));
        }
        Ok(EXIT_CHECK_FAILED)
    }
}
