//! Command-line interface.
//!
//! Every command builds a report that can be printed as JSON, CSV or plain
//! text. Reports are deterministic: the same arguments give byte-identical
//! output regardless of the thread count. Errors are printed to stderr as
//! `{"error":{"code":…,"message":…}}`; exit status 1 means a failed
//! command, 3 means the search budget ran out.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cache::{count_table_cached, CountCache};
use crate::entropy::{
    closed_form_lower_bound, enclosure, entropy_gap_verdict, good_counts, lower_entropy_bound,
    q_constant_bound, verify_card_bounds,
};
use crate::error::{Error, Result};
use crate::gibbs::{
    distribution_csv, empirical_entropy, gibbs_ratio_report, rational_str,
    shift_discrepancy_series, two_step_gibbs_report, EmpiricalMeasure,
};
use crate::gluing::{glue_chain, glue_four, glue_same_length, GlueCertificate};
use crate::language::{count_table, extendable_words, first_violation, Budget, CountTable};
use crate::spec::{BetaArg, LanguageSpec, Mode};
use crate::structure::{decompose, is_good_word, is_power_concat_word, BLOCK_POWER};
use crate::suite::{run_criterion, Scale};
use crate::word::Word;
use crate::words::critical_repetition;

/// Exit status for a failed command.
pub const EXIT_FAILURE: i32 = 1;
/// Exit status when a search budget is exhausted.
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "powerfree",
    version,
    about = "Power-free languages: counting, gluing, entropy bounds"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads for enumeration (output does not depend on it).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Count cache directory.
    #[arg(long, global = true, env = crate::cache::CACHE_DIR_ENV)]
    pub cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Human,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WordFilter {
    /// No 4-power prefix or suffix.
    Good,
    /// Concatenation of 4-powers.
    PowerConcat,
}

#[derive(Args, Debug, Clone)]
pub struct SpecArgs {
    /// Alphabet size.
    #[arg(long)]
    pub d: Option<usize>,
    /// Threshold as `P` or `P/Q`; a trailing `+` selects the plus mode.
    #[arg(long)]
    pub beta: Option<String>,
    /// Forbid only exponents strictly above the threshold.
    #[arg(long)]
    pub plus: bool,
}

impl SpecArgs {
    pub fn spec(&self) -> Result<LanguageSpec> {
        let d = self
            .d
            .ok_or_else(|| Error::InvalidSpec("--d is required".into()))?;
        let beta: BetaArg = self
            .beta
            .as_deref()
            .ok_or_else(|| Error::InvalidSpec("--beta is required".into()))?
            .parse()?;
        let mode = if beta.plus || self.plus {
            Mode::Plus
        } else {
            Mode::Free
        };
        LanguageSpec::new(d, beta.num, beta.den, mode)
    }
}

#[derive(Args, Debug, Clone)]
pub struct BudgetArgs {
    /// Maximum number of search nodes; unlimited if absent.
    #[arg(long)]
    pub budget: Option<u64>,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        self.budget
            .map(|max_nodes| Budget { max_nodes })
            .unwrap_or(Budget::UNLIMITED)
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Fill the table of counts #Ext_m(n).
    Count {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        n_max: usize,
        #[arg(long, default_value_t = 0)]
        m_max: usize,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// List the words of length n extendable by m on both sides.
    Enumerate {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        m: usize,
        /// Keep only words passing a structure check.
        #[arg(long, value_enum)]
        filter: Option<WordFilter>,
    },
    /// Check a word, or replay a gluing certificate.
    Check {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, conflicts_with = "certificate")]
        word: Option<Word>,
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Critical exponent of a word with its witness.
    Exponent {
        #[arg(long)]
        word: Word,
    },
    /// Split a word into 4-power concatenations around a good core.
    Decompose {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        word: Word,
    },
    /// Glue good words and emit a certificate.
    Glue {
        #[command(subcommand)]
        op: GlueOp,
    },
    /// Entropy enclosure, gap, Q bound and cardinality checks.
    Entropy {
        #[command(flatten)]
        spec: SpecArgs,
        /// Largest length counted for the upper bound.
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        /// Extendability depth for the cardinality checks.
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// Also bound from below using #G_n for n up to this length.
        #[arg(long)]
        good_up_to: Option<usize>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Empirical measure reports.
    Gibbs {
        #[command(subcommand)]
        op: GibbsOp,
    },
    /// Run the acceptance checks.
    Verify {
        #[arg(long, value_enum, default_value_t = Scale::Quick)]
        scale: Scale,
        /// Only these criteria (comma separated).
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<u8>,
    },
    /// Inspect or compact the count cache.
    Cache {
        #[command(subcommand)]
        op: CacheOp,
    },
}

#[derive(Subcommand, Debug)]
pub enum GlueOp {
    /// Two good words of equal length.
    Pair {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        v: Word,
        #[arg(long)]
        w: Word,
    },
    /// Four good words of any lengths.
    Four {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        u: Word,
        #[arg(long)]
        v: Word,
        #[arg(long)]
        w: Word,
        #[arg(long)]
        x: Word,
    },
    /// A list of good words of equal length.
    Chain {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        words: Vec<Word>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct MeasureArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Length of the base words.
    #[arg(long)]
    pub n: usize,
    /// Extendability depth of the base.
    #[arg(long, default_value_t = 0)]
    pub m: usize,
}

impl MeasureArgs {
    fn measure(&self) -> Result<EmpiricalMeasure> {
        EmpiricalMeasure::new(self.spec.spec()?, self.n, self.m)
    }
}

#[derive(Subcommand, Debug)]
pub enum GibbsOp {
    /// Mass of one cylinder.
    Measure {
        #[command(flatten)]
        base: MeasureArgs,
        #[arg(long)]
        word: Word,
    },
    /// Masses of every cylinder of length j.
    Distribution {
        #[command(flatten)]
        base: MeasureArgs,
        #[arg(long)]
        j: usize,
    },
    /// Scaled masses over the good words of length j.
    Ratio {
        #[command(flatten)]
        base: MeasureArgs,
        #[arg(long)]
        j: usize,
    },
    /// Joint mass of two good words separated by the four-word gap.
    TwoStep {
        #[command(flatten)]
        base: MeasureArgs,
        #[arg(long)]
        u: Word,
        #[arg(long)]
        v: Word,
    },
    /// Entropy of the length-j cylinder distribution.
    Entropy {
        #[command(flatten)]
        base: MeasureArgs,
        #[arg(long)]
        j: usize,
        /// Also report the shift discrepancy at these base lengths.
        #[arg(long, value_delimiter = ',')]
        shift_lengths: Vec<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum CacheOp {
    /// Summarize the cached counts per language.
    Inspect,
    /// Remove duplicate records.
    Compact,
}

/// A rendered report in all the formats a command supports.
pub struct Report {
    pub json: Value,
    pub csv: Option<String>,
    pub human: String,
}

impl Report {
    fn new(value: &impl Serialize, human: String) -> Result<Self> {
        Ok(Report {
            json: serde_json::to_value(value)?,
            csv: None,
            human,
        })
    }

    fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(&self.json)? + "\n"),
            Format::Human => Ok(self.human.clone()),
            Format::Csv => self
                .csv
                .clone()
                .ok_or_else(|| Error::BadInput("this command has no CSV output".into())),
        }
    }
}

fn table_json(table: &CountTable) -> Value {
    let entries: Vec<Value> = table
        .entries()
        .map(|((n, m), c)| json!({"n": n, "m": m, "count": c.to_string()}))
        .collect();
    let stabilization: Vec<Value> = (0..=table.n_max())
        .filter_map(|n| {
            table
                .stabilization_depth(n)
                .map(|s| json!({"n": n, "depth": s}))
        })
        .collect();
    json!({
        "spec": table.spec(),
        "n_max": table.n_max(),
        "m_max": table.m_max(),
        "entries": entries,
        "stabilization": stabilization,
    })
}

fn table_csv(table: &CountTable) -> String {
    let mut out = String::from("n,m,count\n");
    for ((n, m), c) in table.entries() {
        out.push_str(&format!("{n},{m},{c}\n"));
    }
    out
}

fn table_human(table: &CountTable) -> String {
    let mut out = format!("{}\n", table.spec());
    for n in 0..=table.n_max() {
        let row: Vec<String> = (0..=table.m_max())
            .map(|m| {
                table
                    .count(n, m)
                    .map(|c| c.to_string())
                    .unwrap_or_else(|| "-".into())
            })
            .collect();
        out.push_str(&format!("n={n:>3}: {}\n", row.join(" ")));
    }
    out
}

fn counts(
    cli: &Cli,
    spec: LanguageSpec,
    n_max: usize,
    m_max: usize,
    budget: Budget,
) -> Result<CountTable> {
    match &cli.cache_dir {
        Some(dir) => count_table_cached(spec, n_max, m_max, budget, &CountCache::open(dir)?),
        None => count_table(spec, n_max, m_max, budget),
    }
}

fn certificate_report(cert: GlueCertificate) -> Result<Report> {
    cert.verify()?;
    let human = format!(
        "{} = {} ({:?}, {:?})\n",
        cert.result,
        cert.inputs
            .iter()
            .enumerate()
            .map(|(i, w)| match cert.connectors.get(i) {
                Some(c) => format!("{w}·{c}·"),
                None => w.to_string(),
            })
            .collect::<String>(),
        cert.lemma,
        cert.claim
    );
    Report::new(&cert, human)
}

fn check_word(spec: &LanguageSpec, word: &Word) -> Result<Report> {
    word.check_alphabet(spec.d())?;
    let violation = first_violation(word, spec);
    let witness = violation.as_ref().map(|r| {
        let e = r.exponent();
        json!({
            "factor": Word::from_slice(&word[r.start..r.start + r.len]),
            "start": r.start,
            "length": r.len,
            "period": r.period,
            "exponent": format!("{}/{}", e.numer(), e.denom()),
            "power": r.render(word),
        })
    });
    let admissible = violation.is_none();
    let good = admissible.then(|| is_good_word(word, BLOCK_POWER));
    let human = match &violation {
        None => format!("{word}: admissible for {spec}\n"),
        Some(r) => format!(
            "{word}: inadmissible for {spec}, witness {}\n",
            r.render(word)
        ),
    };
    let value = json!({
        "spec": spec,
        "word": word,
        "admissible": admissible,
        "good": good,
        "witness": witness,
    });
    Report::new(&value, human)
}

fn run_command(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Count {
            spec,
            n_max,
            m_max,
            budget,
        } => {
            let table = counts(cli, spec.spec()?, *n_max, *m_max, budget.budget())?;
            Ok(Report {
                json: table_json(&table),
                csv: Some(table_csv(&table)),
                human: table_human(&table),
            })
        }
        Command::Enumerate { spec, n, m, filter } => {
            let spec = spec.spec()?;
            let mut words = extendable_words(spec, *n, *m);
            match filter {
                Some(WordFilter::Good) => words.retain(|w| is_good_word(w, BLOCK_POWER)),
                Some(WordFilter::PowerConcat) => {
                    words.retain(|w| is_power_concat_word(w, BLOCK_POWER))
                }
                None => {}
            }
            let listing: String = words.iter().map(|w| format!("{w}\n")).collect();
            let value = json!({"spec": spec, "n": n, "m": m, "count": words.len(), "words": words});
            Ok(Report::new(&value, listing.clone())?.with_csv(format!("word\n{listing}")))
        }
        Command::Check {
            spec,
            word,
            certificate,
        } => match (word, certificate) {
            (Some(w), None) => check_word(&spec.spec()?, w),
            (None, Some(path)) => {
                let cert: GlueCertificate = serde_json::from_str(&fs::read_to_string(path)?)?;
                cert.verify()?;
                let value = json!({"valid": true, "spec": cert.spec, "result": cert.result, "claim": cert.claim});
                Report::new(&value, format!("certificate valid: {}\n", cert.result))
            }
            _ => Err(Error::BadInput(
                "give exactly one of --word or --certificate".into(),
            )),
        },
        Command::Exponent { word } => {
            let r = critical_repetition(word)?;
            let e = r.exponent();
            let value = json!({
                "word": word,
                "exponent": format!("{}/{}", e.numer(), e.denom()),
                "exponent_f64": r.exponent_f64(),
                "witness": {"start": r.start, "length": r.len, "period": r.period, "power": r.render(word)},
            });
            Report::new(
                &value,
                format!("{word}: exponent {e}, witness {}\n", r.render(word)),
            )
        }
        Command::Decompose { spec, word } => {
            let d = decompose(word, &spec.spec()?)?;
            let human = format!(
                "prefix {:?} core {:?} suffix {:?}\n",
                d.prefix.to_string(),
                d.core.to_string(),
                d.suffix.to_string()
            );
            Report::new(&d, human)
        }
        Command::Glue { op } => match op {
            GlueOp::Pair { spec, v, w } => {
                certificate_report(glue_same_length(v, w, &spec.spec()?)?)
            }
            GlueOp::Four { spec, u, v, w, x } => {
                certificate_report(glue_four(u, v, w, x, &spec.spec()?)?)
            }
            GlueOp::Chain { spec, words } => certificate_report(glue_chain(words, &spec.spec()?)?),
        },
        Command::Entropy {
            spec,
            n_max,
            m,
            good_up_to,
            budget,
        } => entropy_report(cli, &spec.spec()?, *n_max, *m, *good_up_to, budget.budget()),
        Command::Gibbs { op } => gibbs_report(op),
        Command::Verify { scale, criteria } => {
            let ids: Vec<u8> = if criteria.is_empty() {
                (1..=14).collect()
            } else {
                criteria.clone()
            };
            let outcomes: Vec<_> = ids.iter().map(|&id| run_criterion(id, *scale)).collect();
            let human: String = outcomes
                .iter()
                .map(|o| {
                    let v = if o.passed { "PASS" } else { "FAIL" };
                    format!("criterion {:>2} {v} {}: {}\n", o.id, o.title, o.detail)
                })
                .collect();
            let failed: Vec<u8> = outcomes
                .iter()
                .filter(|o| !o.passed)
                .map(|o| o.id)
                .collect();
            // timings vary between runs, so they stay out of the report
            let rows: Vec<Value> = outcomes
                .iter()
                .map(|o| json!({"id": o.id, "title": o.title, "passed": o.passed, "detail": o.detail}))
                .collect();
            if !failed.is_empty() {
                eprint!("{human}");
                return Err(Error::VerificationFailed(format!(
                    "criteria {failed:?} failed"
                )));
            }
            Report::new(
                &json!({"scale": scale, "criteria": rows, "all_passed": true}),
                human,
            )
        }
        Command::Cache { op } => {
            let dir = cli.cache_dir.as_ref().ok_or_else(|| {
                Error::BadInput(format!(
                    "set --cache-dir or {}",
                    crate::cache::CACHE_DIR_ENV
                ))
            })?;
            let cache = CountCache::open(dir)?;
            match op {
                CacheOp::Inspect => {
                    let s = cache.summary()?;
                    let human: String = s
                        .iter()
                        .map(|e| {
                            format!(
                                "{}: {} records, n <= {}, m <= {}\n",
                                e.spec, e.records, e.max_n, e.max_m
                            )
                        })
                        .collect();
                    Report::new(&json!({"path": cache.path(), "languages": s}), human)
                }
                CacheOp::Compact => {
                    let kept = cache.compact()?;
                    Report::new(
                        &json!({"path": cache.path(), "records": kept}),
                        format!("{kept} records kept\n"),
                    )
                }
            }
        }
    }
}

fn entropy_report(
    cli: &Cli,
    spec: &LanguageSpec,
    n_max: usize,
    m: usize,
    good_up_to: Option<usize>,
    budget: Budget,
) -> Result<Report> {
    let h_lo = closed_form_lower_bound(spec)?;
    let gap = entropy_gap_verdict(spec)?;
    let q = q_constant_bound(spec)?;
    let table = counts(cli, *spec, n_max, m, budget)?;
    let enc = enclosure(spec, &table)?;
    let card = verify_card_bounds(spec, &table, &enc)?;
    let from_good = match good_up_to {
        Some(j) => Some(lower_entropy_bound(spec, &good_counts(spec, 1..=j))?),
        None => None,
    };
    let human = format!(
        "{spec}\nh_lo = {} = {:.6}\nh_hi = {} = {:.6}\ngap: {} < {} ({})\nQ <= {} = {:.6}\ncardinality lower bounds hold: {}\n",
        enc.h_lo,
        enc.h_lo.value(),
        enc.h_hi,
        enc.h_hi.value(),
        gap.astar_witness,
        gap.h_lo_witness,
        gap.holds,
        q.value,
        q.value_f64,
        card.all_lower_hold
    );
    let value = json!({
        "spec": spec,
        "h_lo": h_lo,
        "enclosure": enc,
        "gap": gap,
        "q": q,
        "card": card,
        "lower_from_good_words": from_good,
    });
    let mut csv = String::from("n,m,count,lower_required,lower_holds,upper_ratio\n");
    for r in &card.rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.n, r.m, r.count, r.lower_required, r.lower_holds, r.upper_ratio
        ));
    }
    Ok(Report::new(&value, human)?.with_csv(csv))
}

fn gibbs_report(op: &GibbsOp) -> Result<Report> {
    match op {
        GibbsOp::Measure { base, word } => {
            let mu = base.measure()?;
            let r = mu.measure(word)?;
            let value = json!({
                "spec": mu.spec(), "n": mu.n(), "m": mu.m(), "word": word,
                "mass": rational_str(&r),
                "mass_f64": num_traits::ToPrimitive::to_f64(&r),
            });
            Report::new(&value, format!("mu[{word}] = {}\n", rational_str(&r)))
        }
        GibbsOp::Distribution { base, j } => {
            let mu = base.measure()?;
            let masses = mu.cylinder_masses(*j)?;
            let csv = distribution_csv(&masses);
            let rows: Vec<Value> = masses
                .iter()
                .map(|(w, r)| json!({"word": w, "mass": rational_str(r)}))
                .collect();
            let value =
                json!({"spec": mu.spec(), "n": mu.n(), "m": mu.m(), "j": j, "masses": rows});
            Ok(Report::new(&value, csv.clone())?.with_csv(csv))
        }
        GibbsOp::Ratio { base, j } => {
            let mu = base.measure()?;
            let r = gibbs_ratio_report(&mu, *j)?;
            let mut csv = String::from("word,mass,mass_f64,ratio\n");
            for e in &r.entries {
                csv.push_str(&format!(
                    "{},{},{},{}\n",
                    e.word, e.mass, e.mass_f64, e.ratio
                ));
            }
            let human = format!(
                "{} good words of length {}: min ratio {:.6} at {}, all positive: {}\n",
                r.good_words, r.j, r.min_ratio, r.argmin, r.all_positive
            );
            Ok(Report::new(&r, human)?.with_csv(csv))
        }
        GibbsOp::TwoStep { base, u, v } => {
            let mu = base.measure()?;
            let r = two_step_gibbs_report(&mu, u, v)?;
            let human = format!(
                "joint mass {} (scaled {:.6}), gap {}\n",
                r.joint, r.scaled, r.gap
            );
            Report::new(&r, human)
        }
        GibbsOp::Entropy {
            base,
            j,
            shift_lengths,
        } => {
            let mu = base.measure()?;
            let e = empirical_entropy(&mu, *j)?;
            let shifts = if shift_lengths.is_empty() {
                Vec::new()
            } else {
                shift_discrepancy_series(*mu.spec(), shift_lengths, mu.m(), *j)?
            };
            let mut human = format!(
                "H_{j}/{j} = {:.6} <= {:.6}: {}; normalized: {}\n",
                e.h_j_per_symbol, e.support_bound, e.within_bound, e.normalized
            );
            for s in &shifts {
                human.push_str(&format!(
                    "shift discrepancy at n={}: {:.6}\n",
                    s.n, s.discrepancy_f64
                ));
            }
            Report::new(&json!({"entropy": e, "shift_discrepancy": shifts}), human)
        }
    }
}

fn error_json(e: &Error) -> Value {
    let mut body = json!({"code": e.code(), "message": e.to_string()});
    if let Error::BudgetExceeded { partial, .. } = e {
        body["partial"] = table_json(partial);
    }
    json!({ "error": body })
}

fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Runs a parsed command line and returns the process exit status.
pub fn run(cli: &Cli) -> i32 {
    if let Some(n) = cli.threads {
        // fails only if a pool already exists, which is harmless
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let result = run_command(cli)
        .and_then(|r| r.render(cli.format))
        .and_then(|text| emit(&text, cli.output.as_deref()));
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", error_json(&e));
            if matches!(e, Error::BudgetExceeded { .. }) {
                EXIT_BUDGET
            } else {
                EXIT_FAILURE
            }
        }
    }
}

pub fn main() -> i32 {
    run(&Cli::parse())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("powerfree").chain(args.iter().copied())).unwrap()
    }

    fn json_of(args: &[&str]) -> Value {
        let cli = parse(args);
        let r = run_command(&cli).unwrap();
        r.json
    }

    #[test]
    fn spec_arguments() {
        let cli = parse(&[
            "check", "--d", "2", "--beta", "12", "--plus", "--word", "01",
        ]);
        let Command::Check { spec, .. } = &cli.command else {
            panic!()
        };
        assert_eq!(spec.spec().unwrap(), LanguageSpec::plus(2, 12, 1).unwrap());
        let cli = parse(&["check", "--d", "2", "--beta", "7/3+", "--word", "01"]);
        let Command::Check { spec, .. } = &cli.command else {
            panic!()
        };
        assert_eq!(spec.spec().unwrap(), LanguageSpec::plus(2, 7, 3).unwrap());
    }

    #[test]
    fn check_reports_witness() {
        let v = json_of(&["check", "--d", "2", "--beta", "2", "--word", "0101"]);
        assert_eq!(v["admissible"], false);
        assert_eq!(v["witness"]["power"], "(01)^2");
    }

    #[test]
    fn entropy_command() {
        let v = json_of(&["entropy", "--d", "3", "--beta", "12", "--n-max", "6"]);
        assert_eq!(v["h_lo"]["a"], 4);
        assert_eq!(v["h_lo"]["b"], "26");
        assert_eq!(v["gap"]["holds"], true);
        assert_eq!(v["q"]["value"], "529/400");
    }

    #[test]
    fn missing_spec_is_an_error() {
        let cli = parse(&["count", "--n-max", "3"]);
        assert!(matches!(run_command(&cli), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn budget_error_carries_partial_table() {
        let cli = parse(&[
            "count", "--d", "3", "--beta", "3", "--n-max", "12", "--budget", "100",
        ]);
        let Err(e) = run_command(&cli) else {
            panic!("expected budget error")
        };
        let v = error_json(&e);
        assert_eq!(v["error"]["code"], "BUDGET_EXCEEDED");
        assert!(v["error"]["partial"]["entries"].is_array());
    }
}
