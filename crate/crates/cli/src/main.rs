//! `mdlogic`: evaluate, prove and refute MD-sentences from the command line.
//!
//! Exit status: 0 for success, valid or true; 1 for invalid or false; 2 for
//! usage and input errors.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context as _, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use mdlogic::calculus::{self, at_domain, Countermodel, Structure};
use mdlogic::format::{
    parse_frame, parse_md_file, parse_proof_file, write_md_file, write_proof_file, Context, MdFile, MdJson,
    ModalModelJson, ModelJson,
};
use mdlogic::infoset::Setting;
use mdlogic::semantics::{satisfies, satisfies_modal, tuple_of, tuple_of_modal};
use mdlogic::syntax::{parse_formula_open, Mode};
use mdlogic::zeroone::{self, ExperimentConfig, Row, Trend};
use mdlogic::{translate, Algebra, Derivation, Limits, MdSentence, TruthValue, Verdict, Vocabulary};

#[derive(Parser)]
#[command(name = "mdlogic", version, about = "Reasoning with multi-dimensional sentences")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// LP calls the real-valued solver may spend per query.
    #[arg(long, global = true, env = "MD_CASE_BUDGET")]
    case_budget: Option<u64>,
    /// Largest explicit set the calculus may build.
    #[arg(long, global = true)]
    max_points: Option<usize>,
    /// Largest box union the calculus may build.
    #[arg(long, global = true)]
    max_boxes: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Clone, Default)]
struct Setup {
    /// lukasiewicz, godel, product, classical, or l<n>, g<n>, p<n>.
    #[arg(long)]
    algebra: Option<String>,
    /// Domain size.
    #[arg(long, conflicts_with = "frame")]
    domain: Option<usize>,
    /// Kripke frame, e.g. "2 { (0,1), (1,1) }".
    #[arg(long)]
    frame: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check whether a model satisfies each sentence of a file.
    Eval {
        #[command(flatten)]
        setup: Setup,
        #[arg(long)]
        md: PathBuf,
        /// Model as JSON, e.g. a countermodel printed with --format json.
        #[arg(long)]
        model: PathBuf,
    },
    /// Find a model of a sentence.
    Sat {
        #[command(flatten)]
        setup: Setup,
        #[arg(long)]
        md: PathBuf,
        /// Sentence to use when the file has several.
        #[arg(long)]
        name: Option<String>,
    },
    /// Decide entailment over a finite domain.
    Entail(EntailArgs),
    /// Decide entailment over a Kripke frame.
    EntailModal(EntailArgs),
    /// Check a derivation file.
    Checkproof {
        #[command(flatten)]
        setup: Setup,
        file: PathBuf,
        /// Also require the derivation to end in this sentence.
        #[arg(long)]
        goal: Option<PathBuf>,
    },
    /// Keep only the good tuples of each sentence.
    Filter {
        #[command(flatten)]
        setup: Setup,
        #[arg(long)]
        md: PathBuf,
    },
    /// Translate a finitely-valued formula or sentence to classical logic.
    Translate {
        #[arg(long)]
        algebra: String,
        #[arg(long, requires = "formula")]
        value: Option<String>,
        #[arg(long, conflicts_with = "md")]
        formula: Option<String>,
        /// Sentence file to translate as a whole.
        #[arg(long)]
        md: Option<PathBuf>,
        /// Also print the axioms tying starred predicates together.
        #[arg(long)]
        sigma: bool,
    },
    /// Run a zero-one experiment.
    Zeroone {
        #[arg(long)]
        config: PathBuf,
        /// CSV destination (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        algebra: Option<String>,
    },
    /// Look for a countermodel on every domain size up to a bound.
    Sweep {
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long, num_args = 0..)]
        premises: Vec<PathBuf>,
        #[arg(long)]
        goal: PathBuf,
        #[arg(long, default_value_t = 4)]
        max: usize,
    },
}

#[derive(Args)]
struct EntailArgs {
    #[command(flatten)]
    setup: Setup,
    /// Files of premise sentences; every sentence in them is a premise.
    #[arg(long, num_args = 0..)]
    premises: Vec<PathBuf>,
    /// File holding the goal sentence.
    #[arg(long)]
    goal: PathBuf,
    /// Write the derivation here when valid.
    #[arg(long)]
    proof_out: Option<PathBuf>,
}

struct Out {
    format: Format,
    text: String,
    json: Value,
    code: u8,
}

fn setup_context(s: &Setup) -> Result<Context> {
    let algebra = s.algebra.as_deref().map(str::parse::<Algebra>).transpose()?;
    let setting = match (&s.domain, &s.frame) {
        (Some(m), _) => Some(Setting::FirstOrder { domain: *m }),
        (None, Some(f)) => Some(Setting::Modal(parse_frame(f).context("--frame")?)),
        (None, None) => None,
    };
    Ok(Context::new(algebra, setting))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// Prefixes parse positions with the file name.
fn located(path: &Path, e: mdlogic::Error) -> anyhow::Error {
    match e {
        mdlogic::Error::Parse { line, col, msg } => anyhow!("{}:{line}:{col}: {msg}", path.display()),
        e => anyhow!("{}: {e}", path.display()),
    }
}

fn md_file(path: &Path, ctx: &Context) -> Result<MdFile> {
    parse_md_file(&read(path)?, ctx).map_err(|e| located(path, e))
}

fn only(file: MdFile, path: &Path, name: Option<&str>) -> Result<(String, MdSentence)> {
    let mut s = file.sentences;
    match name {
        Some(n) => {
            s.into_iter().find(|(k, _)| k == n).ok_or_else(|| anyhow!("{}: no sentence named `{n}`", path.display()))
        }
        None if s.len() == 1 => Ok(s.remove(0)),
        None => bail!("{}: expected one sentence, found {}", path.display(), s.len()),
    }
}

fn values_text(vs: &[TruthValue]) -> String {
    let v: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
    format!("({})", v.join(", "))
}

fn structure_text(label: &str, s: &Structure) -> String {
    let mut t = String::new();
    match s {
        Structure::FirstOrder(m) => {
            let _ = writeln!(t, "{label} over domain {}:", m.domain());
            for (p, table) in m.tables() {
                let _ = writeln!(t, "  {p} = {}", values_text(table));
            }
        }
        Structure::Modal(mm) => {
            let es: Vec<String> = mm.frame().edges().iter().map(|(a, b)| format!("({a},{b})")).collect();
            let _ = writeln!(t, "{label} on frame {} {{ {} }}:", mm.frame().worlds(), es.join(", "));
            for (p, vals) in mm.valuation() {
                let _ = writeln!(t, "  {p} = {}", values_text(vals));
            }
        }
    }
    t
}

fn structure_json(s: &Structure) -> Value {
    match s {
        Structure::FirstOrder(m) => json!(ModelJson::from_model(m)),
        Structure::Modal(mm) => json!(ModalModelJson::from_model(mm)),
    }
}

fn countermodel_out(c: &Countermodel, format: Format) -> Out {
    let text = format!(
        "invalid\n{}goal values: {}\n",
        structure_text("countermodel", &c.structure),
        values_text(&c.violated_at)
    );
    let json = json!({ "verdict": "invalid", "model": structure_json(&c.structure), "violated_at": c.violated_at });
    Out { format, text, json, code: 1 }
}

/// Every step lists its components, so the steps cover all predicates.
fn proof_vocabulary(premises: &[MdSentence], goal: Option<&MdSentence>, d: &Derivation) -> Result<Vocabulary> {
    let all = premises.iter().chain(goal).chain(d.steps.iter().map(|s| &s.md));
    Ok(calculus::vocabulary_of(all.flat_map(|m| m.formulas()))?)
}

fn limits(cli: &Cli) -> Limits {
    let mut l = Limits::default();
    if let Some(b) = cli.case_budget {
        l.case_budget = b;
    }
    if let Some(p) = cli.max_points {
        l.max_points = p;
    }
    if let Some(b) = cli.max_boxes {
        l.max_boxes = b;
    }
    l
}

fn entail_cmd(a: &EntailArgs, modal: bool, lim: &Limits, format: Format) -> Result<Out> {
    let ctx = setup_context(&a.setup)?;
    let mut premises = Vec::new();
    for p in &a.premises {
        premises.extend(md_file(p, &ctx)?.sentences());
    }
    let (_, goal) = only(md_file(&a.goal, &ctx)?, &a.goal, None)?;
    let verdict =
        if modal { calculus::entail_modal(&premises, &goal, lim)? } else { calculus::entail(&premises, &goal, lim)? };
    match verdict {
        Verdict::Valid(d) => {
            let vocab = proof_vocabulary(&premises, Some(&goal), &d)?;
            let proof = write_proof_file(&premises, Some(&goal), &d, &vocab)?;
            if let Some(path) = &a.proof_out {
                fs::write(path, &proof).with_context(|| format!("cannot write {}", path.display()))?;
            }
            let text = format!("valid ({} steps)\n{proof}", d.len());
            Ok(Out {
                format,
                text,
                json: json!({ "verdict": "valid", "steps": d.len(), "derivation": proof }),
                code: 0,
            })
        }
        Verdict::Invalid(c) => Ok(countermodel_out(&c, format)),
    }
}

fn eval_cmd(setup: &Setup, md: &Path, model: &Path, format: Format) -> Result<Out> {
    let file = md_file(md, &setup_context(setup)?)?;
    let alg = file.context.algebra.ok_or_else(|| anyhow!("no algebra given"))?;
    let raw: Value = serde_json::from_str(&read(model)?).with_context(|| format!("{}: bad JSON", model.display()))?;
    let raw = raw.get("model").cloned().unwrap_or(raw);
    let modal = matches!(file.context.setting, Some(Setting::Modal(_)));
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut all = true;
    for (name, s) in &file.sentences {
        let (ok, vals) = if modal {
            let mm = serde_json::from_value::<ModalModelJson>(raw.clone())?.into_model()?;
            (satisfies_modal(&alg, &mm, s)?, tuple_of_modal(&alg, &mm, s.components())?)
        } else {
            let m = serde_json::from_value::<ModelJson>(raw.clone())?.into_model()?;
            (satisfies(&alg, &m, s)?, tuple_of(&alg, &m, s.components())?)
        };
        all &= ok;
        let _ = writeln!(text, "{name}: {ok} at {}", values_text(&vals));
        rows.push(json!({ "name": name, "satisfied": ok, "values": vals }));
    }
    Ok(Out { format, text, json: json!({ "results": rows }), code: if all { 0 } else { 1 } })
}

fn sat_cmd(setup: &Setup, md: &Path, name: Option<&str>, lim: &Limits, format: Format) -> Result<Out> {
    let (_, s) = only(md_file(md, &setup_context(setup)?)?, md, name)?;
    Ok(match calculus::satisfy(&s, lim)? {
        Some(st) => Out {
            format,
            text: format!("satisfiable\n{}", structure_text("model", &st)),
            json: json!({ "satisfiable": true, "model": structure_json(&st) }),
            code: 0,
        },
        None => Out { format, text: "unsatisfiable\n".into(), json: json!({ "satisfiable": false }), code: 1 },
    })
}

fn checkproof_cmd(setup: &Setup, file: &Path, goal: Option<&Path>, lim: &Limits, format: Format) -> Result<Out> {
    let ctx = setup_context(setup)?;
    let pf = parse_proof_file(&read(file)?, &ctx).map_err(|e| located(file, e))?;
    let goal = match goal {
        Some(g) => Some(only(md_file(g, &pf.context)?, g, None)?.1),
        None => pf.goal.clone(),
    };
    let res = match &goal {
        Some(g) => calculus::check_proves(&pf.derivation, &pf.premises, g, lim),
        None => calculus::check(&pf.derivation, &pf.premises, lim),
    };
    Ok(match res {
        Ok(()) => Out {
            format,
            text: format!("ok ({} steps)\n", pf.derivation.len()),
            json: json!({ "ok": true, "steps": pf.derivation.len() }),
            code: 0,
        },
        Err(f) => Out {
            format,
            text: format!("{f}\n"),
            json: json!({ "ok": false, "step": f.step + 1, "reason": f.reason }),
            code: 1,
        },
    })
}

fn filter_cmd(setup: &Setup, md: &Path, lim: &Limits, format: Format) -> Result<Out> {
    let file = md_file(md, &setup_context(setup)?)?;
    let mut out = Vec::new();
    for (name, s) in &file.sentences {
        out.push((name.clone(), calculus::good(s, lim)?));
    }
    let text = write_md_file(&out, &file.vocabulary)?;
    let json = json!({ "sentences": out.iter().map(|(n, s)| MdJson::from_md(n, s)).collect::<Vec<_>>() });
    Ok(Out { format, text, json, code: 0 })
}

fn translate_cmd(
    algebra: &str,
    value: Option<&str>,
    formula: Option<&str>,
    md: Option<&Path>,
    sigma: bool,
    format: Format,
) -> Result<Out> {
    let alg: Algebra = algebra.parse()?;
    let (result, vocab) = match (formula, md) {
        (Some(f), _) => {
            let (phi, vocab) = parse_formula_open(f, Mode::FirstOrder).map_err(|e| anyhow!("--formula: {e}"))?;
            let a = value.ok_or_else(|| anyhow!("--formula needs --value"))?;
            let a = TruthValue::new(mdlogic::algebra::parse_rational(a)?)?;
            (translate::translate(&alg, &vocab, &a, &phi)?, vocab)
        }
        (None, Some(path)) => {
            let ctx = Context::new(Some(alg), None).with_fallback(Setting::FirstOrder { domain: 1 });
            let file = md_file(path, &ctx)?;
            let (_, s) = only(file.clone(), path, None)?;
            (translate::md_translate(&alg, &file.vocabulary, &s)?, file.vocabulary)
        }
        (None, None) => bail!("give --formula or --md"),
    };
    let axioms: Vec<String> = if sigma {
        translate::sigma(&alg, &vocab)?.iter().map(|a| a.formula.to_string()).collect()
    } else {
        Vec::new()
    };
    let mut text = format!("{result}\n");
    for a in &axioms {
        let _ = writeln!(text, "sigma: {a}");
    }
    Ok(Out { format, text, json: json!({ "formula": result.to_string(), "sigma": axioms }), code: 0 })
}

fn trend_name(t: Trend) -> &'static str {
    match t {
        Trend::TowardOne => "toward 1",
        Trend::TowardZero => "toward 0",
        Trend::Inconclusive => "inconclusive",
    }
}

fn zeroone_cmd(
    config: &Path,
    out: Option<&Path>,
    seed: Option<u64>,
    algebra: Option<&str>,
    format: Format,
) -> Result<Out> {
    let alg = algebra.map(str::parse::<Algebra>).transpose()?;
    let mut cfg = ExperimentConfig::from_toml(&read(config)?, alg).map_err(|e| located(config, e))?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let report = zeroone::run(&cfg)?;
    let csv = report.to_csv()?;
    let mut text =
        format!("# seed {}\n# trend {} (heuristic, delta {})\n", cfg.seed, trend_name(report.trend), cfg.delta);
    match out {
        Some(path) => {
            fs::write(path, &csv).with_context(|| format!("cannot write {}", path.display()))?;
            for r in &report.rows {
                let _ = match r {
                    Row::Exact { n, hits, total } => writeln!(text, "n = {n}: {hits}/{total}"),
                    Row::Sampled { n, estimate } => {
                        writeln!(
                            text,
                            "n = {n}: {:.6} +- {:.6} ({} samples)",
                            estimate.mean, estimate.stderr, estimate.samples
                        )
                    }
                };
            }
        }
        None => text.push_str(&csv),
    }
    let json = json!({ "seed": cfg.seed, "trend": trend_name(report.trend), "delta": cfg.delta, "csv": csv });
    Ok(Out { format, text, json, code: 0 })
}

fn sweep_cmd(
    algebra: Option<&str>,
    premises: &[PathBuf],
    goal: &Path,
    max: usize,
    lim: &Limits,
    format: Format,
) -> Result<Out> {
    if max == 0 {
        bail!("--max must be at least 1");
    }
    let alg = algebra.map(str::parse::<Algebra>).transpose()?;
    let ctx = Context::new(alg, None).with_fallback(Setting::FirstOrder { domain: 1 });
    let mut ps = Vec::new();
    for p in premises {
        for s in md_file(p, &ctx)?.sentences() {
            ps.push(at_domain(&s, 1)?);
        }
    }
    let (_, g) = only(md_file(goal, &ctx)?, goal, None)?;
    let report = calculus::sweep(&ps, &g, max, lim)?;
    Ok(match &report.countermodel {
        Some((m, c)) => {
            let mut o = countermodel_out(c, format);
            o.text = format!("countermodel at domain size {m}\n{}", o.text);
            o.json["domain_size"] = json!(m);
            o
        }
        None => Out {
            format,
            text: format!("no countermodel up to domain size {max}\n"),
            json: json!({ "verdict": "none found", "checked": report.checked }),
            code: 0,
        },
    })
}

fn run(cli: &Cli) -> Result<Out> {
    let lim = limits(cli);
    let f = cli.format;
    match &cli.cmd {
        Cmd::Eval { setup, md, model } => eval_cmd(setup, md, model, f),
        Cmd::Sat { setup, md, name } => sat_cmd(setup, md, name.as_deref(), &lim, f),
        Cmd::Entail(a) => entail_cmd(a, false, &lim, f),
        Cmd::EntailModal(a) => entail_cmd(a, true, &lim, f),
        Cmd::Checkproof { setup, file, goal } => checkproof_cmd(setup, file, goal.as_deref(), &lim, f),
        Cmd::Filter { setup, md } => filter_cmd(setup, md, &lim, f),
        Cmd::Translate { algebra, value, formula, md, sigma } => {
            translate_cmd(algebra, value.as_deref(), formula.as_deref(), md.as_deref(), *sigma, f)
        }
        Cmd::Zeroone { config, out, seed, algebra } => {
            zeroone_cmd(config, out.as_deref(), *seed, algebra.as_deref(), f)
        }
        Cmd::Sweep { algebra, premises, goal, max } => sweep_cmd(algebra.as_deref(), premises, goal, *max, &lim, f),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: --jobs: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(out) => {
            match out.format {
                Format::Text => print!("{}", out.text),
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable")),
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
