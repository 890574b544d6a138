//! Brute-force reference implementations and the aggregated verification
//! suite.
//!
//! Nothing here calls the substitution, kernel or gap constructors of the
//! other modules: prefixes are produced by rewriting letter by letter,
//! occurrences by a quadratic scan, and kernel gaps by reading them off the
//! prefix of `P_k` between consecutive kernel words.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaps::{self, FactorizationTables, GapRule, Orientation, Placement};
use crate::kernel::{self, KernelTable};
use crate::prefix::{self, PrefixFamily};
use crate::report::{first_difference, Params, VerificationReport};
use crate::word::{self, Alphabet, LengthCap, Letter, Word};

/// Prefix length used by [`verify_all`] for the congruence check.
pub const CONGRUENCE_LENGTH: usize = 64;

/// Largest `n` for which [`verify_all`] compares gap lengths three ways.
pub const GAP_LENGTH_N_MAX: usize = 30;

/// Largest `m` for which [`verify_all`] checks `w_m = 2^m`.
pub const W_RECURRENCE_M_MAX: usize = 40;

/// Largest `n` and `l` for the product-factor checks in [`verify_all`].
pub const PRODUCT_FACTOR_MAX: usize = 6;

/// Command line that regenerates the committed golden file.
pub const GOLDEN_COMMAND: &str = "pdwords golden";

/// First `length` letters of `P_k`, by rewriting `0` letter by letter until
/// long enough.
pub fn naive_prefix(k: usize, length: usize, cap: LengthCap) -> Result<Word> {
    let alphabet = Alphabet::new(k)?;
    cap.check(length as u128)?;
    let mut w: Vec<Letter> = vec![0];
    while w.len() < length {
        let mut next = Vec::with_capacity(2 * w.len());
        for &m in &w {
            next.push(0);
            next.push(((m as usize + 1) % k) as Letter);
        }
        w = next;
    }
    w.truncate(length);
    Word::from_letters(alphabet, w)
}

/// 1-based start of every occurrence of `pattern` in `text`, overlapping
/// ones included. An empty pattern has no occurrences.
pub fn naive_occurrences(pattern: &[Letter], text: &[Letter]) -> Vec<usize> {
    if pattern.is_empty() || pattern.len() > text.len() {
        return Vec::new();
    }
    (0..=text.len() - pattern.len())
        .filter(|&i| (0..pattern.len()).all(|j| text[i + j] == pattern[j]))
        .map(|i| i + 1)
        .collect()
}

/// Gap between two consecutive occurrences, classified from positions
/// alone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NaiveGap {
    pub left: usize,
    pub right: usize,
    pub placement: Placement,
    pub orientation: Orientation,
    pub word: Vec<Letter>,
}

impl fmt::Display for NaiveGap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.orientation == Orientation::Inverse { "~" } else { "" };
        write!(f, "{}>{}:{}:{mark}{}", self.left, self.right, placement_name(self.placement), letters_text(&self.word))
    }
}

fn placement_name(p: Placement) -> &'static str {
    match p {
        Placement::Adjacent => "adjacent",
        Placement::Separated => "separated",
        Placement::Overlapped => "overlapped",
    }
}

fn letters_text(w: &[Letter]) -> String {
    if w.is_empty() {
        "-".to_string()
    } else {
        w.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(if w.iter().any(|&m| m > 9) { "," } else { "" })
    }
}

/// Consecutive-occurrence gaps of `pattern` in `text`.
pub fn naive_gaps(pattern: &[Letter], text: &[Letter]) -> Vec<NaiveGap> {
    let n = pattern.len();
    naive_occurrences(pattern, text)
        .windows(2)
        .map(|pair| {
            let (i, j) = (pair[0], pair[1]);
            let (placement, orientation, word) = if i + n == j {
                (Placement::Adjacent, Orientation::Positive, Vec::new())
            } else if i + n < j {
                (Placement::Separated, Orientation::Positive, text[i + n - 1..j - 1].to_vec())
            } else {
                (Placement::Overlapped, Orientation::Inverse, text[j - 1..i + n - 1].to_vec())
            };
            NaiveGap {
                left: i,
                right: j,
                placement,
                orientation,
                word,
            }
        })
        .collect()
}

/// `R_0, ..., R_{i_max}` straight from the definition, using a local
/// substitution.
pub fn naive_kernel_words(k: usize, i_max: usize) -> Result<Vec<Vec<Letter>>> {
    Alphabet::new(k)?;
    let s = |w: &[Letter]| -> Vec<Letter> { w.iter().flat_map(|&m| [0, ((m as usize + 1) % k) as Letter]).collect() };
    let mut r: Vec<Vec<Letter>> = vec![Vec::new()];
    for i in 1..=i_max {
        let w = if i <= k {
            vec![(i - 1) as Letter]
        } else if i == k + 1 {
            vec![0, 0, 0]
        } else if i == k + 2 {
            vec![1, 0, 1, 0, 1]
        } else if i % k == 1 {
            let mut w = s(&r[i - 1]);
            w.push(0);
            w
        } else {
            s(&r[i - 1])[1..].to_vec()
        };
        r.push(w);
    }
    Ok(r)
}

/// Kernel words and gaps read off a prefix of `P_k`: starting at position 1,
/// each `R_n` must sit at the current position, and `G_n` is everything up
/// to the next occurrence of `R_{n+1}`.
///
/// Returns `G_0 = ε, G_1, ..., G_{n_max}` and the 1-based start of every
/// `R_n`.
pub fn naive_kernel_gaps(k: usize, n_max: usize, cap: LengthCap) -> Result<(Vec<Vec<Letter>>, Vec<usize>)> {
    let r = naive_kernel_words(k, n_max + 1)?;
    let mut length = 64usize.max(4 * r.iter().map(Vec::len).sum::<usize>());
    loop {
        let text = naive_prefix(k, length, cap)?;
        if let Some(found) = scan_kernel_gaps(&r, text.letters(), n_max)? {
            return Ok(found);
        }
        length *= 2;
    }
}

type KernelScan = (Vec<Vec<Letter>>, Vec<usize>);

fn scan_kernel_gaps(r: &[Vec<Letter>], text: &[Letter], n_max: usize) -> Result<Option<KernelScan>> {
    let mut gaps = vec![Vec::new()];
    let mut starts = vec![0];
    let mut pos = 0usize;
    for n in 1..=n_max {
        let rn = &r[n];
        if pos + rn.len() > text.len() {
            return Ok(None);
        }
        if &text[pos..pos + rn.len()] != rn.as_slice() {
            return Err(Error::falsified(
                "kernel-scan",
                Some(pos + 1),
                format!("R_{n} does not start where G_{} ends", n - 1),
            ));
        }
        starts.push(pos + 1);
        pos += rn.len();
        let next = &r[n + 1];
        let Some(offset) = (pos..text.len()).find(|&i| text[i..].starts_with(next)) else {
            return Ok(None);
        };
        gaps.push(text[pos..offset].to_vec());
        pos = offset;
    }
    Ok(Some((gaps, starts)))
}

/// Compares `P_k` letterwise mod `k-1` with `P_2` over `length` letters.
///
/// The claimed congruence does not hold, so a failure is marked documented.
pub fn congruence_check(k: usize, length: usize, cap: LengthCap) -> VerificationReport {
    let params = Params::k(k).depth(length);
    const NAME: &str = "congruence";
    if k < 3 {
        return VerificationReport::out_of_domain(NAME, params, "reduction mod k-1 is trivial for k = 2");
    }
    let run = || -> Result<VerificationReport> {
        let pk = naive_prefix(k, length, cap)?;
        let p2 = naive_prefix(2, length, cap)?;
        let reduced: Vec<Letter> = pk.letters().iter().map(|&m| m % (k as Letter - 1)).collect();
        Ok(match first_difference(p2.letters(), &reduced) {
            None => VerificationReport::pass(NAME, params.clone()),
            Some(pos) => VerificationReport::fail_at(
                NAME,
                params.clone(),
                pos,
                format!(
                    "P_{k} mod {} has {} where P_2 has {}",
                    k - 1,
                    reduced[pos - 1],
                    p2.letters()[pos - 1]
                ),
            )
            .documented(),
        })
    };
    run().unwrap_or_else(|e| VerificationReport::out_of_domain(NAME, params.clone(), e.to_string()))
}

fn guard(check: &str, params: Params, f: impl FnOnce() -> Result<VerificationReport>) -> VerificationReport {
    VerificationReport::timed(|| match f() {
        Ok(r) => r,
        Err(Error::Falsified { position: Some(p), detail, .. }) => {
            VerificationReport::fail_at(check, params, p, detail)
        }
        Err(e @ Error::Falsified { .. }) => VerificationReport::fail_with(check, params, "-", e.to_string()),
        Err(e) => VerificationReport::out_of_domain(check, params, e.to_string()),
    })
}

fn bool_report(check: &str, params: Params, ok: bool, counterexample: impl FnOnce() -> String) -> VerificationReport {
    if ok {
        VerificationReport::pass(check, params)
    } else {
        VerificationReport::fail_with(check, params, counterexample(), "")
    }
}

/// Runs every check at prefix depth `depth` (words up to `W_depth`) and
/// returns the reports sorted by check name, then parameters.
pub fn verify_all(alphabet: Alphabet, depth: usize, cap: LengthCap) -> Vec<VerificationReport> {
    let k = alphabet.size();
    let mut out = Vec::new();
    let base = || Params::k(k);

    out.push(guard("naive-prefix", base().depth(depth), || {
        let fast = word::iterate(alphabet, depth, cap)?;
        let slow = naive_prefix(k, 1 << depth, cap)?;
        Ok(VerificationReport::compare("naive-prefix", base().depth(depth), slow.letters(), fast.letters()))
    }));
    out.push(guard("letter-at", base().depth(depth), || {
        let slow = naive_prefix(k, 1 << depth, cap)?;
        let fast: Vec<Letter> = (0..slow.len() as u64).map(|i| word::letter_at(alphabet, i)).collect();
        Ok(VerificationReport::compare("letter-at", base().depth(depth), slow.letters(), &fast))
    }));
    out.push(VerificationReport::timed(|| {
        prefix::check_period_doubling_numbers::<u128>(k, W_RECURRENCE_M_MAX)
    }));
    out.push(VerificationReport::timed(|| congruence_check(k, CONGRUENCE_LENGTH, cap)));

    match PrefixFamily::build(alphabet, depth, cap) {
        Ok(family) => {
            out.push(VerificationReport::pass("prefix-family", base().depth(depth)));
            prefix_checks(&family, depth, cap, &mut out);
        }
        Err(e) => out.push(guard("prefix-family", base().depth(depth), || Err(e))),
    }

    kernel_checks(alphabet, depth, cap, &mut out);
    gap_checks(alphabet, depth, cap, &mut out);

    out.sort_by(|a, b| (a.check.as_str(), &a.params).cmp(&(b.check.as_str(), &b.params)));
    out
}

fn prefix_checks(family: &PrefixFamily, depth: usize, cap: LengthCap, out: &mut Vec<VerificationReport>) {
    let alphabet = family.alphabet();
    let k = alphabet.size();
    for n in 2..=depth {
        out.push(VerificationReport::timed(|| prefix::check_lemma_l1(family, n)));
    }
    for n in 0..depth {
        out.push(VerificationReport::timed(|| prefix::check_lemma_c4(family, n)));
    }
    if depth >= 1 {
        out.push(VerificationReport::timed(|| prefix::check_mirror_product(alphabet, depth - 1, cap)));
    }
    for n in k..=depth {
        for i in 1..k {
            out.push(VerificationReport::timed(|| {
                prefix::check_lcp_theorem(family, n, i, prefix::SecondProductOrder::Natural)
            }));
        }
    }
    for n in 2..=depth.min(10) {
        for (name, v) in [("p", family.p(n)), ("W", family.w(n))] {
            let params = Params::k(k).n(n);
            out.push(guard("palindrome-equivalence", params.clone(), || {
                let (a, b, c) = prefix::palindrome_equivalence(v, cap)?;
                Ok(bool_report("palindrome-equivalence", params.clone(), a == b && b == c, || {
                    format!("{name}_{n}: {a}/{b}/{c}")
                }))
            }));
        }
        let params = Params::k(k).n(n);
        out.push(guard("desubstitution", params.clone(), || {
            let v = family.p(n);
            let (pre, form) = prefix::desubstitute_palindrome(v, cap)?;
            let s = word::substitute(&pre);
            let rebuilt = match form {
                prefix::DesubstitutionForm::AppendZero => {
                    let mut s = s;
                    s.push(0);
                    s
                }
                prefix::DesubstitutionForm::StripZero => s.strip_first(0)?,
            };
            Ok(VerificationReport::compare("desubstitution", params.clone(), v.letters(), rebuilt.letters()))
        }));
    }
    let top = depth.min(PRODUCT_FACTOR_MAX);
    match word::iterate(alphabet, 2 * top + 4, cap) {
        Ok(host) => {
            for n in 0..=top {
                for l in 0..=top {
                    out.push(VerificationReport::timed(|| prefix::product_factor_report_in(&host, n, l, cap)));
                }
            }
        }
        Err(e) => out.push(VerificationReport::out_of_domain("prop-P1", Params::k(k), e.to_string())),
    }
}

/// Largest `i` with `r_i <= 2^depth`.
fn kernel_index_for_depth(k: usize, depth: usize) -> Result<usize> {
    let r = kernel::kernel_numbers::<u64>(k, kernel::DEFAULT_KERNEL_INDEX_MAX)?;
    Ok((0..r.len()).take_while(|&i| r[i] <= 1 << depth).last().unwrap_or(0))
}

fn kernel_checks(alphabet: Alphabet, depth: usize, cap: LengthCap, out: &mut Vec<VerificationReport>) {
    let k = alphabet.size();
    let params = Params::k(k).depth(depth);
    let built = kernel_index_for_depth(k, depth).and_then(|i| KernelTable::build(alphabet, i, cap));
    let table = match built {
        Ok(t) => t,
        Err(e) => {
            out.push(guard("kernel-table", params, || Err(e)));
            return;
        }
    };
    out.push(guard("kernel-oracle", params.clone(), || {
        let naive = naive_kernel_words(k, table.i_max())?;
        for (i, w) in table.words().iter().enumerate() {
            if w.letters() != naive[i].as_slice() {
                return Ok(VerificationReport::fail_with("kernel-oracle", params.clone(), format!("R_{i}"), w.to_string()));
            }
        }
        Ok(VerificationReport::pass("kernel-oracle", params.clone()))
    }));
    match table.rows(cap) {
        Ok(rows) => {
            for row in rows.iter().skip(1) {
                let p = Params::k(k).i(row.i);
                out.push(bool_report("kernel-palindrome", p.clone(), row.is_palindrome, || row.word.to_string()));
                out.push(match row.first_occurrence {
                    Some(pos) => VerificationReport::pass("kernel-occurrence", p).with_detail(format!("first at {pos}")),
                    None => VerificationReport::fail_with("kernel-occurrence", p, row.word.to_string(), "not found"),
                });
            }
        }
        Err(e) => out.push(guard("kernel-occurrence", params.clone(), || Err(e))),
    }
    if k == 2 {
        out.push(guard("binary-kernel-factorization", params.clone(), || {
            let tokens = kernel::binary_kernel_factorization(1 << depth, cap)?;
            Ok(VerificationReport::pass("binary-kernel-factorization", params.clone())
                .with_detail(format!("{} kernel words", tokens.len())))
        }));
    }
}

fn gap_checks(alphabet: Alphabet, depth: usize, cap: LengthCap, out: &mut Vec<VerificationReport>) {
    let k = alphabet.size();
    let params = Params::k(k).depth(depth);
    out.push(VerificationReport::timed(|| {
        gaps::factorization_report(alphabet, 1 << depth, GapRule::Periodic, cap)
    }));
    let gap_n = gaps::gap_lengths::<u64>(k, 64, GapRule::Periodic)
        .map(|g| {
            let r = kernel::kernel_numbers::<u64>(k, 64).unwrap_or_default();
            (1..g.len().min(r.len())).take_while(|&n| r[n] + g[n] <= 1 << depth).last().unwrap_or(1)
        })
        .unwrap_or(1);
    out.push(guard("gap-oracle", params.clone().n(gap_n), || {
        let (naive, _) = naive_kernel_gaps(k, gap_n, cap)?;
        let ours = gaps::kernel_gaps(alphabet, gap_n, GapRule::Periodic, cap)?;
        for n in 1..=gap_n {
            if ours[n].letters() != naive[n].as_slice() {
                return Ok(VerificationReport::fail_with(
                    "gap-oracle",
                    params.clone().n(gap_n),
                    format!("G_{n}"),
                    format!("constructed {} but P_{k} has {}", ours[n], letters_text(&naive[n])),
                ));
            }
        }
        Ok(VerificationReport::pass("gap-oracle", params.clone().n(gap_n)))
    }));

    const GAP_ONLY: [&str; 5] = ["gap-length", "gap-recurrence", "kernel-expansion", "kernel-gap-prefix", "kernel-identity"];
    if k < 3 {
        for check in GAP_ONLY {
            out.push(VerificationReport::out_of_domain(check, params.clone(), "needs k >= 3"));
        }
        return;
    }
    out.push(VerificationReport::timed(|| gap_length_summary(k, GAP_LENGTH_N_MAX, cap)));
    let tables = match FactorizationTables::build(alphabet, depth, GapRule::Periodic, cap) {
        Ok(t) => t,
        Err(e) => {
            out.push(guard("kernel-gap-prefix", params, || Err(e)));
            return;
        }
    };
    for n in 1..=depth {
        out.push(VerificationReport::timed(|| gaps::check_prefix_assembly(&tables, n, cap)));
    }
    for n in k + 1..=depth {
        out.push(VerificationReport::timed(|| gaps::check_kernel_identity(&tables, n)));
        out.push(VerificationReport::timed(|| gaps::check_kernel_expansion(&tables, n)));
        out.push(VerificationReport::timed(|| gaps::check_gap_recurrence(&tables, n, cap).0));
    }
}

/// One report for `g_1, ..., g_{n_max}`: the first `n` where construction,
/// closed form and recurrence disagree, if any.
pub fn gap_length_summary(k: usize, n_max: usize, cap: LengthCap) -> VerificationReport {
    let params = Params::k(k).n(n_max);
    for n in 1..=n_max {
        let r = gaps::gap_length_report(k, n, cap);
        if !r.passed() {
            return VerificationReport { params, ..r };
        }
    }
    VerificationReport::pass("gap-length", params)
}

/// `true` iff no report is an unexpected failure.
pub fn all_expected(reports: &[VerificationReport]) -> bool {
    !reports.iter().any(VerificationReport::is_unexpected_failure)
}

/// One line of the golden file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoldenRecord {
    pub check: String,
    pub params: String,
    pub expected: String,
}

impl GoldenRecord {
    fn new(check: &str, params: impl Into<String>, expected: impl Into<String>) -> Self {
        GoldenRecord {
            check: check.to_string(),
            params: params.into(),
            expected: expected.into(),
        }
    }
}

impl fmt::Display for GoldenRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}\t{}", self.check, self.params, self.expected)
    }
}

fn join<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// Ground-truth records computed by the functions in this module alone.
pub fn golden_records(cap: LengthCap) -> Result<Vec<GoldenRecord>> {
    let mut out = Vec::new();
    for (k, len) in [(2, 16), (3, 16), (4, 16), (5, 2), (3, 73)] {
        out.push(GoldenRecord::new(
            "naive-prefix",
            format!("k={k} length={len}"),
            naive_prefix(k, len, cap)?.to_string(),
        ));
    }
    for (k, pattern, len) in [(2, "00", 16), (3, "0102", 64), (3, "000", 64)] {
        let text = naive_prefix(k, len, cap)?;
        let p = Word::parse(Alphabet::new(k)?, pattern)?;
        out.push(GoldenRecord::new(
            "naive-occurrences",
            format!("k={k} pattern={pattern} length={len}"),
            join(naive_occurrences(p.letters(), text.letters())),
        ));
    }
    for (k, pattern, depth) in [(2, "00", 4), (3, "0102", 4), (2, "00", 10)] {
        let text = naive_prefix(k, 1 << depth, cap)?;
        let p = Word::parse(Alphabet::new(k)?, pattern)?;
        let occ = naive_occurrences(p.letters(), text.letters());
        let head = letters_text(&text.letters()[..occ.first().map_or(0, |&o| o - 1)]);
        let gaps = naive_gaps(p.letters(), text.letters());
        out.push(GoldenRecord::new(
            "naive-gaps",
            format!("k={k} factor={pattern} depth={depth}"),
            format!("G0={head} {}", gaps.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")),
        ));
    }
    for (k, len) in [(3, CONGRUENCE_LENGTH), (3, 4), (4, CONGRUENCE_LENGTH), (5, CONGRUENCE_LENGTH)] {
        let r = congruence_check(k, len, cap);
        out.push(GoldenRecord::new(
            "congruence",
            format!("k={k} length={len}"),
            match r.mismatch {
                Some(p) => format!("fail at {p}"),
                None => r.status.to_string(),
            },
        ));
    }
    for k in 2..=4 {
        let (_, starts) = naive_kernel_gaps(k, 12, cap)?;
        out.push(GoldenRecord::new("kernel-starts", format!("k={k} n<=12"), join(&starts[1..])));
    }
    for k in 2..=4 {
        let r = naive_kernel_words(k, 14)?;
        let text = naive_prefix(k, 1 << 18, cap)?;
        let firsts = (1..=12).map(|i| naive_occurrences(&r[i], text.letters()).first().copied().unwrap_or(0));
        out.push(GoldenRecord::new("kernel-first-occurrence", format!("k={k} i<=12"), join(firsts)));
    }
    for k in 3..=6 {
        let (g, _) = naive_kernel_gaps(k, 14, cap)?;
        out.push(GoldenRecord::new("kernel-gap-lengths", format!("k={k} n<=14"), join(g.iter().map(Vec::len))));
    }
    for (k, n_max) in [(3, 6), (4, 7)] {
        let (g, _) = naive_kernel_gaps(k, n_max, cap)?;
        out.push(GoldenRecord::new(
            "kernel-gaps",
            format!("k={k} n<={n_max}"),
            g[1..].iter().map(|w| letters_text(w)).collect::<Vec<_>>().join(" "),
        ));
    }
    Ok(out)
}

/// The golden file: a header naming the generating command, then one record
/// per line.
pub fn render_golden(records: &[GoldenRecord]) -> String {
    let mut s = format!("# oracle ground truth, generated by `{GOLDEN_COMMAND}`\n# check\tparams\texpected\n");
    for r in records {
        s.push_str(&r.to_string());
        s.push('\n');
    }
    s
}

/// Parses [`render_golden`] output, skipping comment lines.
pub fn parse_golden(text: &str) -> Result<Vec<GoldenRecord>> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let mut parts = l.splitn(3, '\t');
            match (parts.next(), parts.next(), parts.next()) {
                (Some(c), Some(p), Some(e)) => Ok(GoldenRecord::new(c, p, e)),
                _ => Err(Error::Parse(format!("malformed golden record: {l}"))),
            }
        })
        .collect()
}
