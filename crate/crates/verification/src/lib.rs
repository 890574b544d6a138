//! Acceptance criteria with pinned time limits.

use std::time::{Duration, Instant};

use pdwords::gaps::{self, FactorizationTables};
use pdwords::kernel::{self, KernelParity};
use pdwords::oracle;
use pdwords::prefix::{self, PrefixFamily, SecondProductOrder};
use pdwords::{Alphabet, GapRule, KernelTable, LengthCap, Status, VerificationReport, Word};

const GOLDEN: &str = include_str!("../../core/tests/golden/oracle.tsv");

const P3_PREFIX: &str = "0102010001020101010201000102010201020100010201010102010001020100010201000";
const K3_R: [u64; 8] = [0, 1, 1, 1, 3, 5, 9, 19];
const K3_R4_TO_R7: [&str; 4] = ["000", "10101", "201020102", "0001020100010201000"];
const K4_G: [&str; 7] = [
    "",
    "0",
    "010",
    "010201",
    "102010301020",
    "0201030102010001020103010",
    "010301020100010201030102010101020103010201000102010",
];
const K4_G_LEN: [u64; 7] = [0, 1, 3, 6, 12, 25, 51];

/// Exact equality everywhere; the only tolerances are wall-clock limits.
const LIMIT_1: Duration = Duration::from_millis(100);
const LIMIT_2: Duration = Duration::from_millis(100);
const LIMIT_3: Duration = Duration::from_millis(100);
const LIMIT_4: Duration = Duration::from_secs(1);
const LIMIT_5: Duration = Duration::from_secs(30);
const LIMIT_6: Duration = Duration::from_secs(1);
const LIMIT_7: Duration = Duration::from_secs(2);
const LIMIT_8: Duration = Duration::from_secs(5);
const LIMIT_9: Duration = Duration::from_secs(10);
const LIMIT_10: Duration = Duration::from_millis(100);

const BINARY_FACTORIZATION_LENGTH: usize = 1 << 15;
const IDENTITY_MAX_EXPONENT: usize = 18;
const GAP_N_MAX: usize = 30;
const W_M_MAX: usize = 40;
const RANDOM_ACCESS_LENGTH: usize = 1 << 16;
const PALINDROMIC_PREFIX_MAX: usize = 14;
const KERNEL_PALINDROME_MAX: usize = 24;
const KERNEL_OCCURRENCE_MAX: usize = 12;
const PRODUCT_MAX: usize = 8;
const CONGRUENCE_POSITION_MAX: usize = 16;

type Outcome = Result<String, String>;

fn cap() -> LengthCap {
    LengthCap::default()
}

fn a(k: usize) -> Alphabet {
    Alphabet::new(k).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl ToString) -> String {
    e.to_string()
}

fn run_cli(args: &[&str]) -> Result<(i32, String), String> {
    let mut out = Vec::new();
    let code = pdwords_cli::run(std::iter::once("pdwords").chain(args.iter().copied()), &mut out);
    Ok((i32::from(code), String::from_utf8(out).map_err(err)?))
}

fn require_pass(r: VerificationReport) -> Result<(), String> {
    ensure(r.passed(), || r.to_string())
}

fn criterion_1() -> Outcome {
    let (code, out) = run_cli(&["generate", "-k", "3", "--length", "73"])?;
    ensure(code == 0, || format!("exit code {code}"))?;
    ensure(out.trim_end() == P3_PREFIX, || format!("got {}", out.trim_end()))?;
    Ok("P_3[1..73] byte-identical".into())
}

fn criterion_2() -> Outcome {
    let r = kernel::kernel_numbers::<u64>(3, 7).map_err(err)?;
    ensure(r == K3_R, || format!("r = {r:?}"))?;
    let words = kernel::kernel_words(a(3), 7, KernelParity::ModK, cap()).map_err(err)?;
    for (i, expected) in (4..=7).zip(K3_R4_TO_R7) {
        ensure(words[i].to_string() == expected, || format!("R_{i} = {}", words[i]))?;
    }
    Ok("r_0..r_7 and R_4..R_7 exact".into())
}

fn criterion_3() -> Outcome {
    let g = gaps::kernel_gaps(a(4), 7, GapRule::Periodic, cap()).map_err(err)?;
    let lengths = gaps::gap_lengths::<u64>(4, 7, GapRule::Periodic).map_err(err)?;
    for n in 1..=7 {
        ensure(g[n].letters() == Word::parse(a(4), K4_G[n - 1]).unwrap().letters(), || {
            format!("G_{n} = {}", g[n])
        })?;
        ensure(lengths[n] == K4_G_LEN[n - 1], || format!("g_{n} = {}", lengths[n]))?;
    }
    Ok("G_1..G_7 and g_1..g_7 exact".into())
}

fn criterion_4() -> Outcome {
    let two = a(2);
    let tokens = kernel::binary_kernel_factorization(BINARY_FACTORIZATION_LENGTH, cap()).map_err(err)?;
    let r = kernel::kernel_numbers::<u64>(2, tokens.len() + 1).map_err(err)?;
    let mut boundary = 1u64;
    for t in &tokens {
        ensure(t.start as u64 == boundary, || format!("R_{} starts at {}, expected {boundary}", t.index, t.start))?;
        boundary += r[t.index];
    }
    let mut joined = Word::concat(two, tokens.iter().map(|t| &t.word));
    let next = kernel::kernel_word(two, tokens.len() + 1, KernelParity::ModK, cap()).map_err(err)?;
    joined.append(&next.prefix(BINARY_FACTORIZATION_LENGTH - joined.len()).map_err(err)?);
    let naive = oracle::naive_prefix(2, BINARY_FACTORIZATION_LENGTH, cap()).map_err(err)?;
    ensure(joined == naive, || {
        format!("differs at {:?}", pdwords::first_difference(naive.letters(), joined.letters()))
    })?;
    Ok(format!("{} kernel tokens cover 2^15 letters", tokens.len()))
}

fn criterion_5() -> Outcome {
    let n_max = IDENTITY_MAX_EXPONENT;
    let mut count = 0usize;
    for k in 3..=6 {
        let fam = PrefixFamily::build(a(k), n_max, cap()).map_err(err)?;
        let tables = FactorizationTables::build(a(k), n_max, GapRule::Periodic, cap()).map_err(err)?;
        let mut check = |r: VerificationReport| {
            count += 1;
            require_pass(r)
        };
        for n in 0..=n_max {
            if n >= 2 {
                check(prefix::check_lemma_l1(&fam, n))?;
            }
            if n < n_max {
                check(prefix::check_lemma_c4(&fam, n))?;
                check(prefix::check_mirror_product(a(k), n, cap()))?;
            }
            if n >= k {
                for i in 1..k {
                    check(prefix::check_lcp_theorem(&fam, n, i, SecondProductOrder::Natural))?;
                }
            }
            if n >= 2 {
                for (v, expect) in [(fam.p(n), true), (fam.w(n), false)] {
                    let (x, y, z) = prefix::palindrome_equivalence(v, cap()).map_err(err)?;
                    let params = pdwords::Params::k(k).n(n);
                    check(if x == expect && y == expect && z == expect {
                        VerificationReport::pass("palindrome-equivalence", params)
                    } else {
                        VerificationReport::fail_with("palindrome-equivalence", params, v.to_string(), format!("{x}/{y}/{z}"))
                    })?;
                }
            }
            if n >= 1 {
                check(gaps::check_prefix_assembly(&tables, n, cap()))?;
            }
            if n > k {
                check(gaps::check_kernel_identity(&tables, n))?;
                check(gaps::check_kernel_expansion(&tables, n))?;
                check(gaps::check_gap_recurrence(&tables, n, cap()).0)?;
            }
        }
    }
    Ok(format!("{count} identity instances, k in 3..=6, |W_n| <= 2^18"))
}

fn criterion_6() -> Outcome {
    let mut findings = Vec::new();
    for k in 3..=6 {
        let mut first_bad = None;
        for n in 1..=GAP_N_MAX {
            let t = gaps::gap_length_triple::<u128>(k, n, cap()).map_err(err)?;
            if t.corollary.is_some_and(|c| c != t.constructed) {
                return Err(format!("k={k} n={n}: construction {} vs recurrence {:?}", t.constructed, t.corollary));
            }
            if !t.agrees() && first_bad.is_none() {
                first_bad = Some((n, t.constructed, t.closed_form.unwrap()));
            }
        }
        if let Some((n, c, f)) = first_bad {
            findings.push(format!("k={k} n={n}: construction {c}, closed form {f}"));
        }
    }
    require_pass(prefix::check_period_doubling_numbers::<u128>(3, W_M_MAX))?;
    if findings.is_empty() {
        Ok("construction, closed form and recurrence agree for n <= 30; w_m = 2^m for m <= 40".into())
    } else {
        Err(format!(
            "closed form disagrees with construction and recurrence ({}); construction = recurrence for all n <= 30; w_m = 2^m for m <= 40",
            findings.join("; ")
        ))
    }
}

fn criterion_7() -> Outcome {
    for k in 2..=8 {
        let naive = oracle::naive_prefix(k, RANDOM_ACCESS_LENGTH, cap()).map_err(err)?;
        for (i, &m) in naive.letters().iter().enumerate() {
            ensure(pdwords::letter_at(a(k), i as u64) == m, || format!("k={k} index {i}"))?;
        }
    }
    Ok("2^16 indices, k in 2..=8".into())
}

fn criterion_8() -> Outcome {
    let mut firsts = Vec::new();
    for k in 2..=6 {
        let fam = PrefixFamily::build(a(k), PALINDROMIC_PREFIX_MAX, cap()).map_err(err)?;
        for n in 0..=PALINDROMIC_PREFIX_MAX {
            ensure(fam.p(n).is_palindrome(), || format!("p_{n} (k={k})"))?;
        }
        let words = kernel::kernel_words(a(k), KERNEL_PALINDROME_MAX, KernelParity::ModK, cap()).map_err(err)?;
        for (i, w) in words.iter().enumerate() {
            ensure(w.is_palindrome(), || format!("R_{i} (k={k})"))?;
        }
        let rows = KernelTable::build(a(k), KERNEL_OCCURRENCE_MAX, cap()).map_err(err)?.rows(cap()).map_err(err)?;
        let pos: Vec<String> = rows[1..]
            .iter()
            .map(|r| r.first_occurrence.map(|p| p.to_string()).ok_or(format!("R_{} (k={k}) not found", r.i)))
            .collect::<Result<_, _>>()?;
        firsts.push(format!("k={k}: {}", pos.join(",")));
    }
    Ok(format!("first occurrences of R_1..R_12 [{}]", firsts.join("; ")))
}

fn criterion_9() -> Outcome {
    for k in 2..=5 {
        let host = pdwords::iterate(a(k), 2 * PRODUCT_MAX + 2, cap()).map_err(err)?;
        for n in 0..=PRODUCT_MAX {
            for l in 0..=PRODUCT_MAX {
                require_pass(prefix::product_factor_report_in(&host, n, l, cap()))?;
            }
        }
    }
    Ok("W_n W_l found for n, l <= 8, k in 2..=5".into())
}

fn criterion_10() -> Outcome {
    let report = oracle::congruence_check(3, oracle::CONGRUENCE_LENGTH, cap());
    ensure(report.status == Status::Fail && report.documented, || report.to_string())?;
    let pos = report.mismatch.ok_or("no mismatch position")?;
    ensure(pos <= CONGRUENCE_POSITION_MAX, || format!("mismatch at {pos}"))?;
    let frozen = oracle::parse_golden(GOLDEN)
        .map_err(err)?
        .into_iter()
        .find(|r| r.check == "congruence" && r.params == "k=3 length=64")
        .ok_or("no golden record")?;
    ensure(frozen.expected == format!("fail at {pos}"), || format!("golden says {}", frozen.expected))?;
    let (code, out) = run_cli(&["verify", "-k", "3", "--depth", "12"])?;
    ensure(code == 0, || format!("verify exited {code}"))?;
    ensure(out.lines().any(|l| l == report.to_string()), || "finding not reported verbatim".into())?;
    let (strict, _) = run_cli(&["verify", "-k", "3", "--depth", "12", "--strict"])?;
    ensure(strict == 1, || format!("verify --strict exited {strict}"))?;
    Ok(format!("first mismatch at {pos}, verify exit 0, --strict exit 1"))
}

/// One criterion: a name, its check and its time limit.
pub struct Criterion {
    pub name: &'static str,
    pub check: fn() -> Result<String, String>,
    pub limit: Duration,
}

/// Result of running a criterion.
pub struct Verdict {
    pub index: usize,
    pub name: &'static str,
    pub passed: bool,
    pub message: String,
    pub elapsed: Duration,
    pub limit: Duration,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} criterion {:>2} {}: {} [{:.3}s / limit {:.3}s]",
            if self.passed { "PASS" } else { "FAIL" },
            self.index,
            self.name,
            self.message,
            self.elapsed.as_secs_f64(),
            self.limit.as_secs_f64()
        )
    }
}

pub fn criteria() -> [Criterion; 10] {
    let c = |name, check, limit| Criterion { name, check, limit };
    [
        c("P_3 prefix", criterion_1, LIMIT_1),
        c("kernel tables k=3", criterion_2, LIMIT_2),
        c("gap tables k=4", criterion_3, LIMIT_3),
        c("binary factorization", criterion_4, LIMIT_4),
        c("identity suite", criterion_5, LIMIT_5),
        c("length formulas", criterion_6, LIMIT_6),
        c("random access", criterion_7, LIMIT_7),
        c("palindromicity", criterion_8, LIMIT_8),
        c("product factors", criterion_9, LIMIT_9),
        c("documented failure", criterion_10, LIMIT_10),
    ]
}

/// Runs criterion number `index` (1-based) and times it against its limit.
pub fn evaluate(index: usize, criterion: &Criterion) -> Verdict {
    let start = Instant::now();
    let outcome = (criterion.check)();
    let elapsed = start.elapsed();
    let (passed, message) = match outcome {
        Ok(m) if elapsed <= criterion.limit => (true, m),
        Ok(m) => (false, format!("{m}; too slow")),
        Err(m) => (false, m),
    };
    Verdict { index, name: criterion.name, passed, message, elapsed, limit: criterion.limit }
}
