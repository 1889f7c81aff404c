use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lambek::oracle::{lambek_member_with, parse_word, render_word, CfgDecider, MemberOptions};
use lambek::transform::{lambek_to_cfg_with, to_gnf_with_report, TranslationReport};
use lambek::{
    cfg_to_lambek, crosscheck, enumerate_strings, lambek_to_lcfg, lambek_to_reg, lcfg_to_lambek, parse_document,
    print_grammar, print_lexicon, prove, reg_to_lambek, CalculusConfig, Cfg, ConnectiveSet, Decider, Document,
    LambekGrammar, OracleError, Proof, RuleSet, Sequent, TypeRestriction,
};
use serde_json::{json, Value};

const FORMAT_VERSION: u32 = 1;

/// Lambek calculus prover, grammar translator and membership oracle.
#[derive(Parser)]
#[command(name = "lambek", version)]
struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the shape of every production and the class flags.
    Classify { grammar: PathBuf },
    /// Convert a grammar to Greibach normal form.
    Gnf {
        grammar: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Translate between grammars and lexicons.
    Convert {
        #[arg(long, value_enum)]
        to: Target,
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Keep useless nonterminals in lexicon-to-grammar output.
        #[arg(long)]
        no_prune: bool,
    },
    /// Decide membership of a string.
    Decide {
        file: PathBuf,
        /// Symbols run together (`aabb`) or separated by spaces.
        string: String,
        #[command(flatten)]
        calculus: CalculusArgs,
        /// Print a witnessing proof (lexicons only).
        #[arg(long)]
        proof: bool,
        /// Work budget per string; exceeding it is an error.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Search for a cut-free proof of a sequent such as "S/B, B -> S".
    Prove {
        sequent: String,
        #[command(flatten)]
        calculus: CalculusArgs,
        /// Admit Cut in the calculus. Search stays cut-free.
        #[arg(long)]
        allow_cut: bool,
    },
    /// List members up to a length.
    Enumerate {
        file: PathBuf,
        #[arg(long)]
        max_len: usize,
        #[command(flatten)]
        calculus: CalculusArgs,
    },
    /// Compare two grammars or lexicons on every string up to a length.
    Crosscheck {
        file_a: PathBuf,
        file_b: PathBuf,
        #[arg(long)]
        max_len: usize,
        /// Keep going after the first disagreement.
        #[arg(long)]
        exhaustive: bool,
        #[command(flatten)]
        calculus: CalculusArgs,
        #[arg(long)]
        budget: Option<u64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Lambek,
    Cfg,
    Lcfg,
    Reg,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fragment {
    /// L(/L) over `/`-types.
    Slash,
    /// L(/L, \L) over `/`- and `\`-types.
    SlashBackslash,
    /// All six rules.
    Full,
}

#[derive(clap::Args, Default)]
struct CalculusArgs {
    #[arg(long, value_enum, conflicts_with = "rules")]
    fragment: Option<Fragment>,
    /// Comma-separated rule labels, e.g. `/L,\L`.
    #[arg(long)]
    rules: Option<String>,
}

enum Failure {
    Parse(String),
    Precondition(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Parse(_) => 2,
            Failure::Precondition(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Parse(m) | Failure::Precondition(m) => m,
        }
    }
}

fn pre(e: impl std::fmt::Display) -> Failure {
    Failure::Precondition(e.to_string())
}

/// Text for stdout, the JSON report, and the exit code.
struct Output {
    text: String,
    json: Value,
    code: u8,
}

fn output(text: impl Into<String>, json: Value, code: u8) -> Output {
    Output {
        text: text.into(),
        json,
        code,
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Document, Failure> {
    let text = read(path)?;
    parse_document(&text).map_err(|d| Failure::Parse(format!("{}:{}:{}: {}", path.display(), d.line, d.column, d.message)))
}

fn load_grammar(path: &Path) -> Result<Cfg, Failure> {
    match load(path)? {
        Document::Grammar(g) => Ok(g),
        Document::Lexicon(_) => Err(pre(format!("{} is a lexicon, expected a grammar", path.display()))),
    }
}

fn write_or_print(path: &Option<PathBuf>, text: &str) -> Result<String, Failure> {
    match path {
        Some(p) => {
            fs::write(p, text).map_err(|e| pre(format!("{}: {e}", p.display())))?;
            Ok(String::new())
        }
        None => Ok(text.to_string()),
    }
}

impl CalculusArgs {
    /// The explicit choice, else the smallest named fragment containing
    /// every type in use.
    fn config(&self, lexicon: Option<&LambekGrammar>) -> Result<CalculusConfig, Failure> {
        if let Some(rules) = &self.rules {
            let rules: RuleSet = rules.parse().map_err(|e: String| Failure::Parse(e))?;
            return Ok(CalculusConfig::new(rules, TypeRestriction::unrestricted()));
        }
        let fragment = self.fragment.unwrap_or_else(|| {
            let used = lexicon
                .map(|lg| lg.all_types().fold(ConnectiveSet::empty(), |acc, t| acc | t.connectives()))
                .unwrap_or(ConnectiveSet::ALL);
            if ConnectiveSet::SLASH.contains_all(used) {
                Fragment::Slash
            } else if ConnectiveSet::SLASHES.contains_all(used) {
                Fragment::SlashBackslash
            } else {
                Fragment::Full
            }
        });
        Ok(match fragment {
            Fragment::Slash => CalculusConfig::slash_left(),
            Fragment::SlashBackslash => CalculusConfig::slash_backslash_left(),
            Fragment::Full => CalculusConfig::full(),
        })
    }
}

fn classify(path: &Path) -> Result<Output, Failure> {
    let g = load_grammar(path)?;
    let c = g.classify();
    let mut text = String::new();
    let mut rows = Vec::new();
    for (p, class) in &c.productions {
        let mut tags = Vec::new();
        if class.right_linear {
            tags.push("right-linear");
        }
        if class.left_linear {
            tags.push("left-linear");
        }
        if class.greibach {
            tags.push("greibach");
        }
        text.push_str(&format!("{p}  [{}]\n", tags.join(", ")));
        rows.push(json!({ "production": p.to_string(), "right_linear": class.right_linear, "left_linear": class.left_linear, "greibach": class.greibach }));
    }
    text.push_str(&format!(
        "lcfg: {}\nright-regular: {}\nleft-regular: {}\ngnf: {}\n",
        c.is_lcfg, c.is_right_regular, c.is_left_regular, c.is_gnf
    ));
    let json = json!({
        "productions": rows,
        "is_lcfg": c.is_lcfg,
        "is_right_regular": c.is_right_regular,
        "is_left_regular": c.is_left_regular,
        "is_gnf": c.is_gnf,
    });
    Ok(output(text, json, 0))
}

fn report_json(r: &TranslationReport) -> Value {
    json!({ "input": r.input, "output": r.output, "fresh_symbols": r.fresh_symbols, "warnings": r.warnings })
}

fn gnf(path: &Path, out: &Option<PathBuf>) -> Result<Output, Failure> {
    let g = load_grammar(path)?;
    let (result, report) = to_gnf_with_report(&g);
    let printed = print_grammar(&result);
    let text = write_or_print(out, &printed)? + &report.to_string();
    Ok(output(text, json!({ "grammar": printed, "report": report_json(&report) }), 0))
}

fn convert(to: Target, path: &Path, out: &Option<PathBuf>, no_prune: bool) -> Result<Output, Failure> {
    let (printed, translation, report) = match (load(path)?, to) {
        (Document::Grammar(g), Target::Lambek) => {
            let c = g.classify();
            let (lg, translation, mut report) = if c.is_right_regular {
                (reg_to_lambek(&g).map_err(pre)?, "reg_to_lambek", None)
            } else if c.is_lcfg {
                (lcfg_to_lambek(&g).map_err(pre)?, "lcfg_to_lambek", None)
            } else if c.is_gnf {
                (cfg_to_lambek(&g).map_err(pre)?, "cfg_to_lambek", None)
            } else {
                let (gnf, r) = to_gnf_with_report(&g);
                (cfg_to_lambek(&gnf).map_err(pre)?, "to_gnf+cfg_to_lambek", Some(r))
            };
            let mut full = TranslationReport::between(&(&g).into(), &(&lg).into());
            if let Some(r) = report.take() {
                full.warnings = r.warnings;
            }
            (print_lexicon(&lg), translation, full)
        }
        (Document::Lexicon(lg), Target::Cfg | Target::Lcfg | Target::Reg) => {
            let slash_only = lg.within(&TypeRestriction::new(ConnectiveSet::SLASH, None));
            let (g, translation) = match to {
                Target::Reg => (lambek_to_reg(&lg).map_err(pre)?, "lambek_to_reg"),
                Target::Lcfg => (lambek_to_lcfg(&lg).map_err(pre)?, "lambek_to_lcfg"),
                _ if slash_only => (lambek_to_cfg_with(&lg, !no_prune).map_err(pre)?, "lambek_to_cfg"),
                _ => (lambek_to_lcfg(&lg).map_err(pre)?, "lambek_to_lcfg"),
            };
            let report = TranslationReport::between(&(&lg).into(), &(&g).into());
            (print_grammar(&g), translation, report)
        }
        (Document::Grammar(_), _) => return Err(pre("a grammar can only be converted --to lambek")),
        (Document::Lexicon(_), Target::Lambek) => return Err(pre("input is already a lexicon")),
    };
    let text = write_or_print(out, &printed)? + &format!("translation: {translation}\n{report}");
    let json = json!({ "translation": translation, "output": printed, "report": report_json(&report) });
    Ok(output(text, json, 0))
}

fn verdict(member: bool) -> &'static str {
    if member {
        "member"
    } else {
        "non-member"
    }
}

fn decide(path: &Path, string: &str, calculus: &CalculusArgs, want_proof: bool, budget: Option<u64>) -> Result<Output, Failure> {
    let w = parse_word(string);
    let (member, proof, extra) = match load(path)? {
        Document::Grammar(g) => {
            if want_proof {
                return Err(pre("--proof needs a lexicon"));
            }
            (CfgDecider::new(&g).decide(&w).map_err(pre)?, None, json!({}))
        }
        Document::Lexicon(lg) => {
            let cfg = calculus.config(Some(&lg))?;
            let options = MemberOptions { budget, strategy: None };
            let m = lambek_member_with(&lg, &w, &cfg, &options, want_proof).map_err(pre)?;
            let extra = json!({ "calculus": cfg.to_string(), "strategy": format!("{:?}", m.strategy), "steps": m.steps });
            (m.member, m.witness.map(|(_, p)| p), extra)
        }
    };
    let mut text = format!("{}\n", verdict(member));
    if let Some(p) = &proof {
        text.push_str(&p.render_text());
    }
    let json = json!({
        "string": render_word(&w),
        "member": member,
        "details": extra,
        "proof": proof.as_ref().map(proof_json),
    });
    Ok(output(text, json, if member { 0 } else { 1 }))
}

fn proof_json(p: &Proof) -> Value {
    json!({
        "sequent": p.conclusion.to_string(),
        "rule": p.rule.label(),
        "position": p.position,
        "premises": p.premises.iter().map(proof_json).collect::<Vec<_>>(),
    })
}

fn prove_cmd(sequent: &str, calculus: &CalculusArgs, allow_cut: bool) -> Result<Output, Failure> {
    let s: Sequent = sequent
        .parse()
        .map_err(|e: lambek::TypeSyntaxError| Failure::Parse(format!("column {}: {}", e.column, e.message)))?;
    let cfg = calculus.config(None)?.with_cut(allow_cut);
    let r = prove(&s, &cfg).map_err(pre)?;
    let mut text = format!("{} in {cfg}\n", if r.provable { "provable" } else { "not provable" });
    if let Some(p) = &r.proof {
        text.push_str(&p.render_text());
    }
    let json = json!({
        "sequent": s.to_string(),
        "calculus": cfg.to_string(),
        "provable": r.provable,
        "proof": r.proof.as_ref().map(proof_json),
        "nodes_expanded": r.stats.nodes_expanded,
    });
    Ok(output(text, json, if r.provable { 0 } else { 1 }))
}

/// A membership function for either kind of file. Strings using symbols
/// outside the file's alphabet are non-members.
struct AnyDecider {
    alphabet: BTreeSet<String>,
    kind: Kind,
}

enum Kind {
    Grammar(CfgDecider),
    Lexicon(LambekGrammar, CalculusConfig, MemberOptions),
}

impl AnyDecider {
    fn new(doc: Document, calculus: &CalculusArgs, budget: Option<u64>) -> Result<Self, Failure> {
        Ok(match doc {
            Document::Grammar(g) => AnyDecider {
                alphabet: g.terminals().iter().cloned().collect(),
                kind: Kind::Grammar(CfgDecider::new(&g)),
            },
            Document::Lexicon(lg) => {
                let cfg = calculus.config(Some(&lg))?;
                AnyDecider {
                    alphabet: lg.alphabet().clone(),
                    kind: Kind::Lexicon(lg, cfg, MemberOptions { budget, strategy: None }),
                }
            }
        })
    }
}

impl Decider for AnyDecider {
    fn decide(&self, w: &[String]) -> Result<bool, OracleError> {
        if w.iter().any(|a| !self.alphabet.contains(a)) {
            return Ok(false);
        }
        match &self.kind {
            Kind::Grammar(d) => d.decide(w),
            Kind::Lexicon(lg, cfg, options) => Ok(lambek_member_with(lg, w, cfg, options, false)?.member),
        }
    }
}

fn enumerate(path: &Path, max_len: usize, calculus: &CalculusArgs) -> Result<Output, Failure> {
    let d = AnyDecider::new(load(path)?, calculus, None)?;
    let mut members = Vec::new();
    for w in enumerate_strings(d.alphabet.clone(), max_len) {
        if d.decide(&w).map_err(pre)? {
            members.push(render_word(&w));
        }
    }
    let text: String = members.iter().map(|m| format!("{m}\n")).collect();
    Ok(output(text, json!({ "max_len": max_len, "members": members }), 0))
}

fn crosscheck_cmd(a: &Path, b: &Path, max_len: usize, exhaustive: bool, calculus: &CalculusArgs, budget: Option<u64>) -> Result<Output, Failure> {
    let da = AnyDecider::new(load(a)?, calculus, budget)?;
    let db = AnyDecider::new(load(b)?, calculus, budget)?;
    let alphabet: BTreeSet<String> = da.alphabet.union(&db.alphabet).cloned().collect();
    let r = crosscheck(&da, &db, alphabet, max_len, exhaustive).map_err(pre)?;
    let first = r.first_disagreement.as_ref().map(|d| {
        json!({ "string": render_word(&d.word), "a": d.verdict_a, "b": d.verdict_b })
    });
    let json = json!({
        "max_length": r.max_length,
        "strings_tested": r.strings_tested,
        "agreements": r.agreements,
        "first_disagreement": first,
        "elapsed_ms": r.elapsed.as_millis() as u64,
    });
    Ok(output(format!("{r}\n"), json, if r.agree() { 0 } else { 1 }))
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Classify { grammar } => classify(grammar),
        Command::Gnf { grammar, output } => gnf(grammar, output),
        Command::Convert {
            to,
            file,
            output,
            no_prune,
        } => convert(*to, file, output, *no_prune),
        Command::Decide {
            file,
            string,
            calculus,
            proof,
            budget,
        } => decide(file, string, calculus, *proof, *budget),
        Command::Prove {
            sequent,
            calculus,
            allow_cut,
        } => prove_cmd(sequent, calculus, *allow_cut),
        Command::Enumerate { file, max_len, calculus } => enumerate(file, *max_len, calculus),
        Command::Crosscheck {
            file_a,
            file_b,
            max_len,
            exhaustive,
            calculus,
            budget,
        } => crosscheck_cmd(file_a, file_b, *max_len, *exhaustive, calculus, *budget),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = std::env::args().nth(1).unwrap_or_default();
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                let mut v = json!({ "format_version": FORMAT_VERSION, "ok": true, "exit_code": out.code });
                v["report"] = out.json;
                println!("{v}");
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(f) => {
            let code = f.code();
            if cli.json {
                let v = json!({ "format_version": FORMAT_VERSION, "ok": false, "exit_code": f.code(), "error": f.message() });
                println!("{v}");
            } else {
                match f {
                    Failure::Parse(m) => eprintln!("{m}"),
                    Failure::Precondition(m) => eprintln!("lambek {command}: {m}"),
                }
            }
            ExitCode::from(code)
        }
    }
}
