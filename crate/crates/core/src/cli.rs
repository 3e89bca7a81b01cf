//! Command-line front end for the `fpp` binary.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::error::{invalid, Result};
use crate::levi::{component_gammas, is_bottom_layer, levi_from_eta, LeviDatum, LeviTable};
use crate::rootsys::{Datum, Family, RootDatum, Weight};
use crate::verify::{self, AllOptions, ReportStatus, VerificationReport};
use crate::weyl::dominantize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_COUNTEREXAMPLE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "fpp", version, about = "Exact root-system computations and FPP case verification")]
pub struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write output to a file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<std::path::PathBuf>,
    /// Maximum number of worker threads.
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Cartan matrix and root data of a simple type.
    Datum(TypeArg),
    /// Dominant conjugate of a weight and the word reaching it.
    Dominantize(WeightArgs),
    /// The Levi subgroup M_f fixed by eta.
    Levi(EtaArgs),
    /// The maximal cx-basic Levi M_cx containing M_f.
    Mcx(EtaArgs),
    /// Bottom-layer check of the recorded K-types for eta.
    BottomLayer(BottomArgs),
    /// Indefinite K-types attached to each component of M_cx.
    Gammas(EtaArgs),
    /// Named verifications.
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Args, Debug)]
pub struct TypeArg {
    /// Simple type such as G2, F4, E8 or B5.
    #[arg(long = "type", value_name = "TYPE")]
    pub ty: String,
}

#[derive(Args, Debug)]
pub struct WeightArgs {
    #[arg(long = "type", value_name = "TYPE")]
    pub ty: String,
    /// Fundamental-weight coordinates, comma separated; rationals allowed.
    #[arg(long, allow_hyphen_values = true)]
    pub weight: String,
}

#[derive(Args, Debug)]
pub struct EtaArgs {
    #[arg(long = "type", value_name = "TYPE")]
    pub ty: String,
    /// Dominant integral weight, comma separated.
    #[arg(long)]
    pub eta: String,
}

#[derive(Args, Debug)]
pub struct BottomArgs {
    #[arg(long = "type", value_name = "TYPE")]
    pub ty: String,
    #[arg(long)]
    pub eta: String,
    /// Check this K-type instead of the recorded ones.
    #[arg(long, allow_hyphen_values = true)]
    pub weight: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum VerifyCommand {
    /// G2 and F4 parametric cases.
    Exceptional {
        /// One named case; all cases when omitted.
        #[arg(long)]
        case: Option<String>,
    },
    /// Random classical templates.
    Classical {
        /// A, B, C or D; all four when omitted.
        #[arg(long = "type", value_name = "FAMILY")]
        ty: Option<String>,
        /// One rank; every rank up to the cap when omitted.
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long, default_value_t = verify::DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = verify::DEFAULT_SEED)]
        seed: u64,
        /// Largest rank sampled.
        #[arg(long, default_value_t = verify::DEFAULT_CLASSICAL_RANK_CAP)]
        cap: usize,
    },
    /// Exhaustive bottom-layer sweep over small eta.
    Sweep {
        /// One type; every type up to the rank bound when omitted.
        #[arg(long = "type", value_name = "TYPE")]
        ty: Option<String>,
        /// Coordinate cap for eta.
        #[arg(long, default_value_t = 3)]
        cap: u32,
        /// Rank bound when no type is given.
        #[arg(long, default_value_t = 8)]
        rank: usize,
    },
    /// Every verification.
    All {
        #[arg(long, default_value_t = verify::DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = verify::DEFAULT_SEED)]
        seed: u64,
        /// Coordinate cap for the sweeps.
        #[arg(long, default_value_t = 3)]
        cap: u32,
    },
}

struct Output {
    text: String,
    json: String,
    code: i32,
}

impl Output {
    fn computed(text: String, json: Value) -> Self {
        Output { text, json: pretty(&json), code: EXIT_OK }
    }
}

fn pretty<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("json") + "\n"
}

fn parse_type(s: &str) -> Result<Datum> {
    RootDatum::parse(s)
}

fn parse_eta(d: &Datum, s: &str) -> Result<Weight> {
    let eta = Weight::parse(d, s)?;
    if !eta.is_integral() || !eta.is_dominant() {
        return Err(invalid(format!("eta {eta} must be dominant and integral")));
    }
    Ok(eta)
}

fn levi_json(l: &LeviDatum) -> Value {
    json!({
        "nodes": l.nodes.to_vec(),
        "components": l.components.iter().map(|c| json!({
            "name": c.name(),
            "nodes": c.nodes,
        })).collect::<Vec<_>>(),
    })
}

fn reports_output(reports: Vec<VerificationReport>) -> Output {
    let code = if reports.iter().any(|r| r.status == ReportStatus::Counterexample) {
        EXIT_COUNTEREXAMPLE
    } else if reports.iter().any(|r| r.status == ReportStatus::Error) {
        EXIT_INPUT
    } else {
        EXIT_OK
    };
    let mut text: String = reports.iter().map(|r| r.verdict_line() + "\n").collect();
    let verdict = match code {
        EXIT_OK => "VERIFIED",
        EXIT_COUNTEREXAMPLE => "COUNTEREXAMPLE",
        _ => "ERROR",
    };
    text.push_str(&format!("verdict: {verdict} ({} checks)\n", reports.len()));
    Output { text, json: pretty(&reports), code }
}

fn execute(cmd: Command) -> Result<Output> {
    match cmd {
        Command::Datum(a) => {
            let d = parse_type(&a.ty)?;
            let rows: Vec<String> = d
                .cartan()
                .iter()
                .map(|r| r.iter().map(|v| format!("{v:>3}")).collect::<String>())
                .collect();
            let text = format!(
                "type {}\nrank {}\npositive roots {}\nhighest root {:?}\ncartan\n{}\n",
                d.name(),
                d.rank(),
                d.positive_roots().len(),
                d.highest_root(),
                rows.join("\n")
            );
            let json = json!({
                "type": d.name(),
                "rank": d.rank(),
                "cartan": d.cartan(),
                "positive_roots": d.positive_roots().len(),
                "highest_root": d.highest_root(),
            });
            Ok(Output::computed(text, json))
        }
        Command::Dominantize(a) => {
            let d = parse_type(&a.ty)?;
            let lambda = Weight::parse(&d, &a.weight)?;
            let (big, word) = dominantize(&lambda);
            let inside = big.inside_fpp();
            let text = format!(
                "Lambda = {big}\nword = {word}\ninside FPP: {}\n",
                if inside { "yes" } else { "no" }
            );
            let json = json!({
                "weight": lambda.to_string(),
                "dominant": big.to_string(),
                "word": word.letters(),
                "inside_fpp": inside,
            });
            Ok(Output::computed(text, json))
        }
        Command::Levi(a) => {
            let d = parse_type(&a.ty)?;
            let l = levi_from_eta(&parse_eta(&d, &a.eta)?)?;
            Ok(Output::computed(format!("I(M_f) = {l}\n"), levi_json(&l)))
        }
        Command::Mcx(a) => {
            let d = parse_type(&a.ty)?;
            let eta = parse_eta(&d, &a.eta)?;
            let l = LeviTable::new(&d)?.compute_mcx(&eta)?;
            Ok(Output::computed(format!("I(M_cx) = {l}\n"), levi_json(&l)))
        }
        Command::Gammas(a) => {
            let d = parse_type(&a.ty)?;
            let eta = parse_eta(&d, &a.eta)?;
            let l = LeviTable::new(&d)?.compute_mcx(&eta)?;
            let mut text = format!("I(M_cx) = {l}\n");
            let mut items = Vec::new();
            for c in &l.components {
                let gs: Vec<String> = component_gammas(&eta, c)?.iter().map(|g| g.to_string()).collect();
                text.push_str(&format!("{c}: {}\n", gs.join(" ")));
                items.push(json!({ "component": c.to_string(), "gammas": gs }));
            }
            Ok(Output::computed(text, json!({ "mcx": levi_json(&l), "components": items })))
        }
        Command::BottomLayer(a) => {
            let d = parse_type(&a.ty)?;
            let eta = parse_eta(&d, &a.eta)?;
            let mut checks = Vec::new();
            if let Some(w) = &a.weight {
                let g = Weight::parse(&d, w)?;
                checks.push((String::from("given"), g));
            } else {
                let l = LeviTable::new(&d)?.compute_mcx(&eta)?;
                for c in &l.components {
                    for g in component_gammas(&eta, c)? {
                        checks.push((c.to_string(), g));
                    }
                }
            }
            let mut text = String::new();
            let mut items = Vec::new();
            let mut all = true;
            for (origin, g) in &checks {
                let ok = is_bottom_layer(&eta, g);
                all &= ok;
                text.push_str(&format!("{origin}: {g} {}\n", if ok { "bottom layer" } else { "NOT bottom layer" }));
                items.push(json!({ "component": origin, "gamma": g.to_string(), "bottom_layer": ok }));
            }
            text.push_str(&format!("verdict: {}\n", if all { "VERIFIED" } else { "COUNTEREXAMPLE" }));
            let code = if all { EXIT_OK } else { EXIT_COUNTEREXAMPLE };
            let json = pretty(&json!({ "eta": eta.to_string(), "checks": items, "verified": all }));
            Ok(Output { text, json, code })
        }
        Command::Verify(v) => verify_command(v),
    }
}

fn verify_command(v: VerifyCommand) -> Result<Output> {
    let reports = match v {
        VerifyCommand::Exceptional { case } => match case {
            Some(c) => {
                if !verify::CASES.contains(&c.as_str()) {
                    return Err(invalid(format!(
                        "unknown case {c:?}; known cases: {}",
                        verify::CASES.join(", ")
                    )));
                }
                verify::verify_case(&c)
            }
            None => verify::CASES.iter().flat_map(|c| verify::verify_case(c)).collect(),
        },
        VerifyCommand::Classical { ty, rank, samples, seed, cap } => {
            let families = match ty {
                Some(t) => {
                    let mut chars = t.chars();
                    let fam = match (chars.next(), chars.next()) {
                        (Some(c), None) => Family::from_letter(c)?,
                        _ => return Err(invalid(format!("expected a family letter, got {t:?}"))),
                    };
                    if !fam.is_classical() {
                        return Err(invalid(format!("family {fam} is not classical")));
                    }
                    vec![fam]
                }
                None => vec![Family::A, Family::B, Family::C, Family::D],
            };
            let mut out = Vec::new();
            for fam in families {
                let ranks = match rank {
                    Some(r) => {
                        if !fam.admits_rank(r) || r > cap {
                            return Err(invalid(format!("rank {r} is not available for {fam} (cap {cap})")));
                        }
                        vec![r]
                    }
                    None => verify::classical_ranks(fam, cap),
                };
                for r in ranks {
                    out.push(verify::verify_classical_capped(fam, r, samples, seed, cap));
                }
            }
            out
        }
        VerifyCommand::Sweep { ty, cap, rank } => {
            if cap > 4 || rank > 8 {
                return Err(invalid("sweeps need cap <= 4 and rank <= 8"));
            }
            let types = match ty {
                Some(t) => vec![parse_type(&t)?],
                None => verify::all_types(rank),
            };
            types.iter().map(|d| verify::verify_bottom_layer_sweep(d, cap)).collect()
        }
        VerifyCommand::All { samples, seed, cap } => {
            let opts = AllOptions { samples, seed, sweep_cap: cap, ..AllOptions::default() };
            verify::verify_all(&opts)
        }
    };
    Ok(reports_output(reports))
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK { stdout.write_all(rendered.as_bytes()) } else { stderr.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let json_mode = cli.json;
    let out_path = cli.out.clone();
    let work = move || execute(cli.command);
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(work),
            Err(e) => Err(invalid(format!("cannot start {n} threads: {e}"))),
        },
        None => work(),
    };
    let output = match result {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_INPUT;
        }
    };
    let body = if json_mode {
        output.json
    } else {
        output.text
    };
    match out_path {
        Some(p) => {
            if let Err(e) = std::fs::write(&p, body) {
                let _ = writeln!(stderr, "error: cannot write {}: {e}", p.display());
                return EXIT_INPUT;
            }
        }
        None => {
            let _ = stdout.write_all(body.as_bytes());
        }
    }
    output.code
}
