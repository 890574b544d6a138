//! Command-line front end for `pdwords`.

use std::io::{self, Write};

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use pdwords::gaps::{self, Orientation, Placement};
use pdwords::kernel::{self, KernelParity};
use pdwords::oracle;
use pdwords::{Alphabet, Error, GapRule, LengthCap, Status, TokenKind, VerificationReport, Word};

#[derive(Parser, Debug)]
#[command(name = "pdwords", version, about = "Generalized period-doubling words, kernel words and gaps")]
struct Cli {
    /// Alphabet size k (letters 0..k-1).
    #[arg(short = 'k', long = "alphabet", global = true, default_value_t = 3)]
    k: usize,

    /// Emit JSON.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,

    /// Emit CSV.
    #[arg(long, global = true)]
    csv: bool,

    /// Follow the literal wording of a rule instead of the default.
    #[arg(long = "paper-literal", value_enum, global = true, action = clap::ArgAction::Append)]
    paper_literal: Vec<Literal>,

    /// Longest word the tool may materialize.
    #[arg(long, global = true, env = pdwords::word::LENGTH_CAP_ENV, default_value_t = pdwords::word::DEFAULT_LENGTH_CAP)]
    length_cap: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Literal {
    /// R_i appends 0 for odd i rather than for i ≡ 1 (mod k).
    KernelParity,
    /// G_n = p_n for n <= k-2 (unshifted gap indices).
    GapIndex,
    /// G_n = s_k(G_{n-1})0 for every n >= k+2.
    GapGrowth,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a prefix of P_k or the word W_n.
    #[command(group(ArgGroup::new("size").required(true).args(["length", "level"])))]
    Generate {
        #[arg(long)]
        length: Option<usize>,
        #[arg(long)]
        level: Option<usize>,
    },
    /// Tabulate W_n, r_i, g_n, kernel words or gap words.
    Table {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long, default_value_t = 10)]
        up_to: usize,
    },
    /// Print the factorization R_1 G_1 R_2 G_2 ... of a prefix of P_k.
    Factorize {
        /// Prefix length to cover.
        #[arg(long, default_value_t = 100)]
        cap: usize,
    },
    /// Gap sequence of a factor inside W_depth.
    Gaps {
        #[arg(long)]
        factor: String,
        #[arg(long, default_value_t = 10)]
        depth: usize,
    },
    /// Run the verification suite.
    Verify {
        #[arg(long, default_value_t = 12)]
        depth: usize,
        /// Treat documented failures as failures.
        #[arg(long)]
        strict: bool,
    },
    /// Print the oracle golden records.
    Golden,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Which {
    W,
    R,
    G,
    Kernel,
    Gaps,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Csv,
}

struct Ctx {
    alphabet: Alphabet,
    cap: LengthCap,
    format: Format,
    parity: KernelParity,
    rule: GapRule,
}

enum Failure {
    Falsified(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_falsification() {
            Failure::Falsified(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<u8, Failure>;

/// Parses `args` (program name first), runs the command writing to `out`,
/// and returns the process exit code: 0 on success or documented findings,
/// 1 on a falsification finding, 2 on usage or resource errors.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(Failure::Falsified(msg)) => {
            eprintln!("falsified: {msg}");
            1
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Outcome {
    let rule = if cli.paper_literal.contains(&Literal::GapIndex) {
        GapRule::PaperLiteral
    } else if cli.paper_literal.contains(&Literal::GapGrowth) {
        GapRule::UniformAppend
    } else {
        GapRule::Periodic
    };
    let ctx = Ctx {
        alphabet: Alphabet::new(cli.k)?,
        cap: LengthCap::new(cli.length_cap)?,
        format: match (cli.json, cli.csv) {
            (true, _) => Format::Json,
            (_, true) => Format::Csv,
            _ => Format::Text,
        },
        parity: if cli.paper_literal.contains(&Literal::KernelParity) {
            KernelParity::PaperLiteral
        } else {
            KernelParity::ModK
        },
        rule,
    };
    let mut out = io::BufWriter::new(out);
    let code = match &cli.command {
        Command::Generate { length, level } => generate(&ctx, *length, *level, &mut out),
        Command::Table { which, up_to } => table(&ctx, *which, *up_to, &mut out),
        Command::Factorize { cap } => factorize(&ctx, *cap, &mut out),
        Command::Gaps { factor, depth } => factor_gaps(&ctx, factor, *depth, &mut out),
        Command::Verify { depth, strict } => verify(&ctx, *depth, *strict, &mut out),
        Command::Golden => {
            let records = oracle::golden_records(ctx.cap)?;
            out.write_all(oracle::render_golden(&records).as_bytes())?;
            Ok(0)
        }
    }?;
    out.flush()?;
    Ok(code)
}

fn json<T: Serialize + ?Sized>(out: &mut impl Write, value: &T) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(|e| Failure::Usage(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn csv<T: Serialize>(out: &mut impl Write, rows: &[T]) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|e| Failure::Usage(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct GeneratedWord {
    k: usize,
    level: Option<usize>,
    length: usize,
    word: String,
}

fn generate(ctx: &Ctx, length: Option<usize>, level: Option<usize>, out: &mut impl Write) -> Outcome {
    let w = match (length, level) {
        (Some(len), _) => pdwords::prefix_of(ctx.alphabet, len, ctx.cap)?,
        (None, Some(n)) => pdwords::iterate(ctx.alphabet, n, ctx.cap)?,
        (None, None) => unreachable!("clap requires one of --length and --level"),
    };
    let rec = GeneratedWord {
        k: ctx.alphabet.size(),
        level,
        length: w.len(),
        word: w.to_text(),
    };
    match ctx.format {
        Format::Text => writeln!(out, "{}", rec.word)?,
        Format::Json => json(out, &rec)?,
        Format::Csv => csv(out, &[rec])?,
    }
    Ok(0)
}

#[derive(Serialize)]
struct NumberRow {
    index: usize,
    value: String,
}

#[derive(Serialize)]
struct WordRow {
    index: usize,
    length: usize,
    word: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    palindrome: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    first_occurrence: Option<usize>,
}

fn table(ctx: &Ctx, which: Which, up_to: usize, out: &mut impl Write) -> Outcome {
    let k = ctx.alphabet.size();
    match which {
        Which::R => {
            let r = kernel::kernel_numbers::<u128>(k, up_to)?;
            numbers(ctx, r.iter().enumerate(), out)?;
        }
        Which::G => {
            let g = gaps::gap_lengths::<u128>(k, up_to, ctx.rule)?;
            numbers(ctx, g.iter().enumerate().skip(1), out)?;
        }
        Which::W => {
            let fam = pdwords::PrefixFamily::build(ctx.alphabet, up_to, ctx.cap)?;
            let rows: Vec<WordRow> = fam
                .entries()
                .iter()
                .map(|e| WordRow {
                    index: e.n,
                    length: e.w.len(),
                    word: e.w.to_text(),
                    palindrome: None,
                    first_occurrence: None,
                })
                .collect();
            words(ctx, &rows, out)?;
        }
        Which::Kernel => {
            if ctx.parity == KernelParity::PaperLiteral {
                for d in kernel::parity_divergences(ctx.alphabet, up_to, ctx.cap)? {
                    eprintln!("note: literal parity gives |R_{}| = {} instead of r_{} = {}", d.i, d.literal_length, d.i, d.r);
                }
            }
            let words_ = kernel::kernel_words(ctx.alphabet, up_to, ctx.parity, ctx.cap)?;
            let table = pdwords::KernelTable::build(ctx.alphabet, up_to, ctx.cap)?;
            let occ = table.rows(ctx.cap)?;
            let rows: Vec<WordRow> = words_
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, w)| WordRow {
                    index: i,
                    length: w.len(),
                    word: w.to_text(),
                    palindrome: Some(w.is_palindrome()),
                    first_occurrence: if w == table.word(i) { occ[i].first_occurrence } else { first_occurrence(w, ctx.cap) },
                })
                .collect();
            words(ctx, &rows, out)?;
        }
        Which::Gaps => {
            if ctx.rule != GapRule::Periodic {
                let d = gaps::gap_rule_divergences(ctx.alphabet, up_to, ctx.rule, ctx.cap)?;
                if let Some(n) = d.first() {
                    eprintln!("note: {:?} gaps differ from the default from n = {n}", ctx.rule);
                }
            }
            let g = gaps::kernel_gaps(ctx.alphabet, up_to, ctx.rule, ctx.cap)?;
            let rows: Vec<WordRow> = g
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, w)| WordRow {
                    index: n,
                    length: w.len(),
                    word: w.to_text(),
                    palindrome: None,
                    first_occurrence: None,
                })
                .collect();
            words(ctx, &rows, out)?;
        }
    }
    Ok(0)
}

fn first_occurrence(w: &Word, cap: LengthCap) -> Option<usize> {
    pdwords::word::factor_occurrence(w, cap).ok().flatten().map(|o| o.start)
}

fn numbers<'a>(ctx: &Ctx, values: impl Iterator<Item = (usize, &'a u128)>, out: &mut impl Write) -> Result<(), Failure> {
    let values: Vec<(usize, u128)> = values.map(|(i, v)| (i, *v)).collect();
    match ctx.format {
        Format::Text => {
            let line: Vec<String> = values.iter().map(|(_, v)| v.to_string()).collect();
            writeln!(out, "{}", line.join(","))?;
        }
        Format::Json => {
            let vals: Vec<u128> = values.iter().map(|(_, v)| *v).collect();
            json(out, &vals)?;
        }
        Format::Csv => {
            let rows: Vec<NumberRow> = values
                .iter()
                .map(|(i, v)| NumberRow { index: *i, value: v.to_string() })
                .collect();
            csv(out, &rows)?;
        }
    }
    Ok(())
}

fn words(ctx: &Ctx, rows: &[WordRow], out: &mut impl Write) -> Result<(), Failure> {
    match ctx.format {
        Format::Text => {
            for r in rows {
                write!(out, "{}\t{}\t{}", r.index, r.length, r.word)?;
                if let Some(p) = r.palindrome {
                    write!(out, "\t{}", if p { "palindrome" } else { "not-palindrome" })?;
                }
                if let Some(o) = r.first_occurrence {
                    write!(out, "\tfirst@{o}")?;
                }
                writeln!(out)?;
            }
        }
        Format::Json => json(out, rows)?,
        Format::Csv => csv(out, rows)?,
    }
    Ok(())
}

#[derive(Serialize)]
struct TokenRow {
    kind: &'static str,
    index: usize,
    start: usize,
    length: usize,
    word: String,
}

fn factorize(ctx: &Ctx, length: usize, out: &mut impl Write) -> Outcome {
    let tokens = gaps::factorize_stream(ctx.alphabet, length, ctx.rule, ctx.cap)?;
    let checked = gaps::verify_stream(&tokens, ctx.alphabet);
    let rows: Vec<TokenRow> = tokens
        .iter()
        .map(|t| TokenRow {
            kind: match t.kind {
                TokenKind::Kernel => "R",
                TokenKind::Gap => "G",
            },
            index: t.index,
            start: t.start,
            length: t.len(),
            word: t.word.to_text(),
        })
        .collect();
    match ctx.format {
        Format::Text => {
            for r in &rows {
                writeln!(out, "{}\t{}\t{}\t{}\t{}", r.kind, r.index, r.start, r.length, r.word)?;
            }
        }
        Format::Json => json(out, &rows)?,
        Format::Csv => csv(out, &rows)?,
    }
    checked?;
    Ok(0)
}

#[derive(Serialize)]
struct GapRow {
    p: usize,
    left: usize,
    right: usize,
    placement: &'static str,
    inverse: bool,
    gap: String,
}

fn factor_gaps(ctx: &Ctx, factor: &str, depth: usize, out: &mut impl Write) -> Outcome {
    let w = Word::parse(ctx.alphabet, factor)?;
    let fg = gaps::factor_gaps(&w, depth, ctx.cap)?;
    let rows: Vec<GapRow> = fg
        .gaps
        .iter()
        .map(|g| GapRow {
            p: g.p,
            left: g.left.start,
            right: g.right.start,
            placement: match g.placement {
                Placement::Adjacent => "adjacent",
                Placement::Separated => "separated",
                Placement::Overlapped => "overlapped",
            },
            inverse: g.gap.orientation == Orientation::Inverse,
            gap: g.gap.word.to_text(),
        })
        .collect();
    match ctx.format {
        Format::Text => {
            writeln!(out, "0\t-\t{}\tprefix\t{}", fg.occurrences[0].start, fg.prefix)?;
            for r in &rows {
                let mark = if r.inverse { "~" } else { "" };
                writeln!(out, "{}\t{}\t{}\t{}\t{mark}{}", r.p, r.left, r.right, r.placement, r.gap)?;
            }
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                factor: String,
                depth: usize,
                prefix: String,
                occurrences: Vec<usize>,
                gaps: &'a [GapRow],
            }
            json(
                out,
                &Doc {
                    factor: fg.factor.to_text(),
                    depth,
                    prefix: fg.prefix.to_text(),
                    occurrences: fg.occurrences.iter().map(|o| o.start).collect(),
                    gaps: &rows,
                },
            )?;
        }
        Format::Csv => csv(out, &rows)?,
    }
    Ok(0)
}

#[derive(Serialize)]
struct ReportRow<'a> {
    check: &'a str,
    k: usize,
    n: Option<usize>,
    i: Option<usize>,
    depth: Option<usize>,
    status: Status,
    documented: bool,
    mismatch: Option<usize>,
    counterexample: Option<&'a str>,
    detail: &'a str,
}

fn verify(ctx: &Ctx, depth: usize, strict: bool, out: &mut impl Write) -> Outcome {
    let reports = oracle::verify_all(ctx.alphabet, depth, ctx.cap);
    match ctx.format {
        Format::Text => {
            for r in &reports {
                writeln!(out, "{r}")?;
            }
            let count = |f: &dyn Fn(&VerificationReport) -> bool| reports.iter().filter(|r| f(r)).count();
            writeln!(
                out,
                "{} checks: {} pass, {} fail, {} documented-fail, {} out-of-domain",
                reports.len(),
                count(&|r| r.passed()),
                count(&|r| r.is_unexpected_failure()),
                count(&|r| r.status == Status::Fail && r.documented),
                count(&|r| r.status == Status::OutOfDomain),
            )?;
        }
        Format::Json => json(out, &reports)?,
        Format::Csv => {
            let rows: Vec<ReportRow> = reports
                .iter()
                .map(|r| ReportRow {
                    check: &r.check,
                    k: r.params.k,
                    n: r.params.n,
                    i: r.params.i,
                    depth: r.params.depth,
                    status: r.status,
                    documented: r.documented,
                    mismatch: r.mismatch,
                    counterexample: r.counterexample.as_deref(),
                    detail: &r.detail,
                })
                .collect();
            csv(out, &rows)?;
        }
    }
    let unexpected = !oracle::all_expected(&reports);
    let documented = reports.iter().any(|r| r.status == Status::Fail && r.documented);
    Ok(if unexpected || (strict && documented) {
        1
    } else {
        0
    })
}
