//! Prefix words `W_n`, palindromic prefixes `p_n`, the letters `θ_n`, and
//! checks for the structural identities relating them.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::num::{self, ExactInt};
use crate::report::{Params, VerificationReport};
use crate::word::{
    self, factor_occurrence, iterate, iterate_from, prefix_of, substitute, Alphabet, LengthCap,
    Letter, Occurrence, Word,
};

/// One row of a [`PrefixFamily`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrefixEntry {
    pub n: usize,
    pub theta: Letter,
    /// `|W_n|`, always `2^n`.
    pub length: u64,
    pub w: Word,
    pub p: Word,
}

/// `W_n`, `p_n` and `θ_n = n mod k` for `0 <= n <= n_max`.
#[derive(Clone, Debug)]
pub struct PrefixFamily {
    alphabet: Alphabet,
    entries: Vec<PrefixEntry>,
}

impl PrefixFamily {
    /// Builds the family, computing `p_n` both by doubling
    /// (`p_{n+1} = p_n θ_n p_n`) and by substitution (`p_{n+1} = s_k(p_n) 0`),
    /// and failing if the two recurrences or `W_n = p_n θ_n` ever disagree.
    pub fn build(alphabet: Alphabet, n_max: usize, cap: LengthCap) -> Result<Self> {
        cap.check_pow2(n_max)?;
        let mut entries: Vec<PrefixEntry> = Vec::with_capacity(n_max + 1);
        let mut w = Word::single(alphabet, 0)?;
        let mut p = Word::empty(alphabet);
        for n in 0..=n_max {
            if n > 0 {
                let prev = &entries[n - 1];
                let mut doubled = prev.p.clone();
                doubled.push(prev.theta);
                doubled.append(&prev.p);
                let mut substituted = substitute(&prev.p);
                substituted.push(0);
                if doubled != substituted {
                    return Err(Error::falsified(
                        "prefix-family",
                        crate::report::first_difference(doubled.letters(), substituted.letters()),
                        format!("p_{n} recurrences disagree"),
                    ));
                }
                p = doubled;
                w = substitute(&prev.w);
            }
            let theta = alphabet.letter_mod(n as u64);
            let mut pt = p.clone();
            pt.push(theta);
            if pt != w {
                return Err(Error::falsified(
                    "prefix-family",
                    crate::report::first_difference(pt.letters(), w.letters()),
                    format!("W_{n} != p_{n} θ_{n}"),
                ));
            }
            entries.push(PrefixEntry {
                n,
                theta,
                length: 1u64 << n,
                w: w.clone(),
                p: p.clone(),
            });
        }
        Ok(PrefixFamily { alphabet, entries })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn n_max(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn entries(&self) -> &[PrefixEntry] {
        &self.entries
    }

    pub fn entry(&self, n: usize) -> &PrefixEntry {
        &self.entries[n]
    }

    /// `W_n`.
    pub fn w(&self, n: usize) -> &Word {
        &self.entries[n].w
    }

    /// `p_n`.
    pub fn p(&self, n: usize) -> &Word {
        &self.entries[n].p
    }
}

/// `W_{n,m} = s_k^n(m)` for a nonzero letter `m`, checked against the
/// decomposition `W_{n,m} = W_{n-1} W_{n-1,E_k(m)}` (which is `W_{n-1}^2` for
/// `m = k-1`).
pub fn letter_variant(alphabet: Alphabet, n: usize, m: Letter, cap: LengthCap) -> Result<Word> {
    alphabet.check(m as u64)?;
    if m == 0 {
        return Err(Error::domain("letter_variant needs m != 0; use iterate for W_n"));
    }
    let word = iterate_from(alphabet, m, n, cap)?;
    if n >= 1 {
        let head = iterate(alphabet, n - 1, cap)?;
        let next = alphabet.exchange_unchecked(m);
        let tail = if next == 0 {
            head.clone()
        } else {
            iterate_from(alphabet, next, n - 1, cap)?
        };
        let expected = Word::concat(alphabet, [&head, &tail]);
        if expected != word {
            return Err(Error::falsified(
                "letter-variant",
                crate::report::first_difference(expected.letters(), word.letters()),
                format!("W_({n},{m}) does not split as W_{} W_({},{next})", n - 1, n - 1),
            ));
        }
    }
    Ok(word)
}

/// `w_m` from the (k+1)-term recurrence
/// `w_m = w_{m-1} + ... + w_{m-(k-1)} + 2 w_{m-k}`, seeded with `w_j = 2^j`
/// for `j < k`.
pub fn period_doubling_numbers<T: ExactInt>(k: usize, m_max: usize) -> Result<Vec<T>> {
    Alphabet::new(k)?;
    let mut w: Vec<T> = Vec::with_capacity(m_max + 1);
    for m in 0..=m_max {
        let v = if m < k {
            num::pow2::<T>(m)?
        } else {
            let mut acc = T::zero();
            for i in 1..k {
                acc = num::add(&acc, &w[m - i], "w_m", m)?;
            }
            let twice = num::add(&w[m - k], &w[m - k], "w_m", m)?;
            num::add(&acc, &twice, "w_m", m)?
        };
        w.push(v);
    }
    Ok(w)
}

/// Checks `w_m = 2^m` for the recurrence values up to `m_max`.
pub fn check_period_doubling_numbers<T: ExactInt>(k: usize, m_max: usize) -> VerificationReport {
    let params = Params::k(k).n(m_max);
    let w = match period_doubling_numbers::<T>(k, m_max) {
        Ok(w) => w,
        Err(e) => return VerificationReport::out_of_domain("w-recurrence", params, e.to_string()),
    };
    for (m, v) in w.iter().enumerate() {
        match num::pow2::<T>(m) {
            Ok(p) if &p == v => {}
            Ok(p) => {
                return VerificationReport::fail_with(
                    "w-recurrence",
                    params,
                    format!("m={m}"),
                    format!("w_{m} = {v} but 2^{m} = {p}"),
                )
            }
            Err(e) => return VerificationReport::out_of_domain("w-recurrence", params, e.to_string()),
        }
    }
    VerificationReport::pass("w-recurrence", params)
}

/// `W_n = W_{n-1} W_{n-2} ... W_0 θ_n`, for `n >= 2`.
pub fn check_lemma_l1(family: &PrefixFamily, n: usize) -> VerificationReport {
    let a = family.alphabet();
    let params = Params::k(a.size()).n(n);
    if n < 2 || n > family.n_max() {
        return VerificationReport::out_of_domain("lemma-L1", params, "needs 2 <= n <= n_max");
    }
    let mut built = Word::concat(a, (0..n).rev().map(|l| family.w(l)));
    built.push(a.letter_mod(n as u64));
    VerificationReport::compare("lemma-L1", params, family.w(n).letters(), built.letters())
}

/// The palindromic-prefix relations at index `n`: `W_n = p_n θ_n`, `p_n` a
/// palindrome, `p_{n+1} = s_k(p_n) 0` and `p_{n+1} = W_n W_{n-1} ... W_0`.
pub fn check_lemma_c4(family: &PrefixFamily, n: usize) -> VerificationReport {
    let a = family.alphabet();
    let params = Params::k(a.size()).n(n);
    if n + 1 > family.n_max() {
        return VerificationReport::out_of_domain("lemma-C4", params, "needs n + 1 <= n_max");
    }
    let e = family.entry(n);
    let mut pt = e.p.clone();
    pt.push(e.theta);
    if pt != e.w {
        return VerificationReport::compare("lemma-C4", params, e.w.letters(), pt.letters())
            .with_detail("W_n != p_n θ_n");
    }
    if !e.p.is_palindrome() {
        return VerificationReport::fail_with("lemma-C4", params, e.p.to_string(), "p_n is not a palindrome");
    }
    let next = family.p(n + 1);
    let mut sp = substitute(&e.p);
    sp.push(0);
    if &sp != next {
        return VerificationReport::compare("lemma-C4", params, next.letters(), sp.letters())
            .with_detail("p_{n+1} != s_k(p_n) 0");
    }
    let product = Word::concat(a, (0..=n).rev().map(|l| family.w(l)));
    VerificationReport::compare("lemma-C4", params, next.letters(), product.letters())
        .with_detail(if &product == next { "" } else { "p_{n+1} != W_n ... W_0" })
}

/// `mirror(W_0) mirror(W_1) ... mirror(W_depth)` is a prefix of `P_k` and
/// equals `p_{depth+1}`.
pub fn check_mirror_product(alphabet: Alphabet, depth: usize, cap: LengthCap) -> VerificationReport {
    let params = Params::k(alphabet.size()).depth(depth);
    let run = || -> Result<VerificationReport> {
        cap.check_pow2(depth + 1)?;
        let mut product = Word::empty(alphabet);
        let mut w = Word::single(alphabet, 0)?;
        for i in 0..=depth {
            if i > 0 {
                w = substitute(&w);
            }
            product.append(&w.mirror());
        }
        let prefix = prefix_of(alphabet, product.len(), cap)?;
        if product != prefix {
            return Ok(VerificationReport::compare(
                "mirror-product",
                params.clone(),
                prefix.letters(),
                product.letters(),
            )
            .with_detail("not a prefix of P_k"));
        }
        let mut p = Word::empty(alphabet);
        for j in 0..=depth {
            let mut next = p.clone();
            next.push(alphabet.letter_mod(j as u64));
            next.append(&p);
            p = next;
        }
        Ok(VerificationReport::compare("mirror-product", params.clone(), p.letters(), product.letters()))
    };
    run().unwrap_or_else(|e| VerificationReport::out_of_domain("mirror-product", params.clone(), e.to_string()))
}

/// Where `W_n W_l` was found inside `P_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ProductFactor {
    pub occurrence: Occurrence,
    /// Exponent of the window `W_e` the occurrence was found in.
    pub window_exponent: usize,
}

/// Smallest admissible window exponent for [`check_product_factor`].
pub fn product_factor_min_depth(alphabet: Alphabet, n: usize, l: usize) -> usize {
    n + l + alphabet.size() + 2
}

/// Finds the first occurrence of `W_n W_l` in `P_k`, searching `W_e` for
/// `e = search_depth, search_depth + 1, ...` until found or the cap is hit.
///
/// Running out of room is reported as a falsification finding.
pub fn check_product_factor(
    alphabet: Alphabet,
    n: usize,
    l: usize,
    search_depth: usize,
    cap: LengthCap,
) -> Result<ProductFactor> {
    let min = product_factor_min_depth(alphabet, n, l);
    if search_depth < min {
        return Err(Error::domain(format!(
            "search depth {search_depth} is below the minimum n + l + k + 2 = {min}"
        )));
    }
    cap.check_pow2(n.max(l) + 1)?;
    let target = Word::concat(
        alphabet,
        [&iterate(alphabet, n, cap)?, &iterate(alphabet, l, cap)?],
    );
    let mut e = search_depth;
    loop {
        if cap.check_pow2(e).is_err() {
            return Err(Error::falsified(
                "prop-P1",
                None,
                format!("W_{n} W_{l} not found before the length cap (window exponent {e})"),
            ));
        }
        let host = iterate(alphabet, e, cap)?;
        if let Some(occurrence) = word::find(target.letters(), host.letters()) {
            return Ok(ProductFactor {
                occurrence,
                window_exponent: e,
            });
        }
        e += 1;
    }
}

/// First occurrence of `W_n W_l` inside `host`, a prefix of `P_k`, with the
/// window exponent reported as at least `search_depth`.
pub fn product_factor_in(host: &Word, n: usize, l: usize, search_depth: usize) -> Result<Option<ProductFactor>> {
    let a = host.alphabet();
    let min = product_factor_min_depth(a, n, l);
    if search_depth < min {
        return Err(Error::domain(format!(
            "search depth {search_depth} is below the minimum n + l + k + 2 = {min}"
        )));
    }
    let needed = (1usize << n) + (1usize << l);
    if needed > host.len() {
        return Ok(None);
    }
    let (wn, wl) = (&host.letters()[..1 << n], &host.letters()[..1 << l]);
    let target = [wn, wl].concat();
    Ok(word::find(&target, host.letters()).map(|occurrence| ProductFactor {
        window_exponent: search_depth.max(ceil_log2(occurrence.end())),
        occurrence,
    }))
}

fn ceil_log2(x: usize) -> usize {
    x.next_power_of_two().trailing_zeros() as usize
}

/// Report wrapper around [`check_product_factor`] using the minimum window.
pub fn product_factor_report(alphabet: Alphabet, n: usize, l: usize, cap: LengthCap) -> VerificationReport {
    let depth = product_factor_min_depth(alphabet, n, l);
    match check_product_factor(alphabet, n, l, depth, cap) {
        Ok(pf) => product_factor_pass(alphabet, n, l, &pf),
        Err(e @ Error::Falsified { .. }) => VerificationReport::fail_with(
            "prop-P1",
            Params::k(alphabet.size()).n(n).i(l),
            format!("W_{n} W_{l}"),
            e.to_string(),
        ),
        Err(e) => VerificationReport::out_of_domain("prop-P1", Params::k(alphabet.size()).n(n).i(l), e.to_string()),
    }
}

/// Like [`product_factor_report`] but searching a prefix generated once by
/// the caller. Falls back to [`check_product_factor`] if `host` is too short.
pub fn product_factor_report_in(host: &Word, n: usize, l: usize, cap: LengthCap) -> VerificationReport {
    let a = host.alphabet();
    let depth = product_factor_min_depth(a, n, l);
    match product_factor_in(host, n, l, depth) {
        Ok(Some(pf)) => product_factor_pass(a, n, l, &pf),
        _ => product_factor_report(a, n, l, cap),
    }
}

fn product_factor_pass(alphabet: Alphabet, n: usize, l: usize, pf: &ProductFactor) -> VerificationReport {
    VerificationReport::pass("prop-P1", Params::k(alphabet.size()).n(n).i(l))
        .with_detail(format!("first occurrence at {}", pf.occurrence.start))
}

/// How to read the second product `∏_{j=n-2}^{n-i} W_j` in the
/// longest-common-prefix identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SecondProductOrder {
    /// Ascending when `n-2 < n-i` (only `i = 1`), descending otherwise.
    #[default]
    Natural,
    Ascending,
    Descending,
}

/// The longest common prefix of
/// `(∏_{j=n-(i+1)}^{n-k} W_j) W_{n-1} (∏_{j=n-2}^{n-i} W_j)` and `W_n`
/// is `p_{n-i}`.
///
/// Instances with `n < k` would need `W_{-1}` and are out of domain.
pub fn check_lcp_theorem(
    family: &PrefixFamily,
    n: usize,
    i: usize,
    order: SecondProductOrder,
) -> VerificationReport {
    let a = family.alphabet();
    let k = a.size();
    let params = Params::k(k).n(n).i(i);
    if !(1..k).contains(&i) {
        return VerificationReport::out_of_domain("lcp-theorem", params, "needs 1 <= i <= k-1");
    }
    if n < k {
        return VerificationReport::out_of_domain("lcp-theorem", params, "needs W at a negative index");
    }
    if n > family.n_max() {
        return VerificationReport::out_of_domain("lcp-theorem", params, "n exceeds the prefix family");
    }
    let mut candidate = Word::concat(a, (n - k..=n - i - 1).rev().map(|j| family.w(j)));
    candidate.append(family.w(n - 1));
    let (lo, hi) = ((n - i).min(n - 2), (n - i).max(n - 2));
    let ascending = match order {
        SecondProductOrder::Natural => n - 2 < n - i,
        SecondProductOrder::Ascending => true,
        SecondProductOrder::Descending => false,
    };
    if ascending {
        (lo..=hi).for_each(|j| candidate.append(family.w(j)));
    } else {
        (lo..=hi).rev().for_each(|j| candidate.append(family.w(j)));
    }
    let lcp = candidate.lcp(family.w(n));
    let expected = family.p(n - i);
    if &lcp == expected {
        VerificationReport::pass("lcp-theorem", params).with_detail(format!("|lcp| = {}", lcp.len()))
    } else {
        VerificationReport::fail_with(
            "lcp-theorem",
            params,
            lcp.to_string(),
            format!("|lcp| = {} but |p_(n-i)| = {}", lcp.len(), expected.len()),
        )
    }
}

/// Palindromicity of `v`, `s_k(v) 0` and `0^{-1} s_k(v)` for a factor `v` of
/// `P_k` with `|v| > 2`.
pub fn palindrome_equivalence(v: &Word, cap: LengthCap) -> Result<(bool, bool, bool)> {
    if v.len() <= 2 {
        return Err(Error::domain("palindrome equivalence needs |v| > 2"));
    }
    if factor_occurrence(v, cap)?.is_none() {
        return Err(Error::domain(format!("{v} is not a factor of P_{}", v.alphabet().size())));
    }
    let s = substitute(v);
    let mut appended = s.clone();
    appended.push(0);
    let stripped = s.strip_first(0)?;
    Ok((v.is_palindrome(), appended.is_palindrome(), stripped.is_palindrome()))
}

/// How a palindrome was de-substituted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DesubstitutionForm {
    /// `v = s_k(v') 0`
    AppendZero,
    /// `v = 0^{-1} s_k(v')`
    StripZero,
}

/// Recovers the palindromic factor `v'` with `v = s_k(v') 0` (when `v`
/// starts with an odd run of zeros) or `v = 0^{-1} s_k(v')` (even run).
pub fn desubstitute_palindrome(v: &Word, cap: LengthCap) -> Result<(Word, DesubstitutionForm)> {
    let a = v.alphabet();
    if v.is_empty() {
        return Err(Error::domain("cannot de-substitute the empty word"));
    }
    if v.letters() == [0, 0] {
        return Err(Error::domain("00 has no palindromic preimage"));
    }
    if !v.is_palindrome() {
        return Err(Error::domain(format!("{v} is not a palindrome")));
    }
    if factor_occurrence(v, cap)?.is_none() {
        return Err(Error::domain(format!("{v} is not a factor of P_{}", a.size())));
    }
    let (image, form) = if v.leading_zeros() % 2 == 1 {
        (v.slice(1, v.len() - 1)?, DesubstitutionForm::AppendZero)
    } else {
        let mut u = Word::single(a, 0)?;
        u.append(v);
        (u, DesubstitutionForm::StripZero)
    };
    let preimage = unsubstitute(&image).ok_or_else(|| {
        Error::falsified(
            "desubstitution",
            None,
            format!("{image} is not an image under s_{}", a.size()),
        )
    })?;
    if !preimage.is_palindrome() {
        return Err(Error::falsified(
            "desubstitution",
            None,
            format!("preimage {preimage} of {v} is not a palindrome"),
        ));
    }
    if factor_occurrence(&preimage, cap)?.is_none() {
        return Err(Error::falsified(
            "desubstitution",
            None,
            format!("preimage {preimage} of {v} is not a factor"),
        ));
    }
    Ok((preimage, form))
}

/// Inverse of [`substitute`] on words that are images.
pub fn unsubstitute(image: &Word) -> Option<Word> {
    let a = image.alphabet();
    if !image.len().is_multiple_of(2) {
        return None;
    }
    let mut out = Vec::with_capacity(image.len() / 2);
    for pair in image.letters().chunks_exact(2) {
        if pair[0] != 0 {
            return None;
        }
        out.push(a.predecessor(pair[1]));
    }
    Some(Word::from_letters_unchecked(a, out))
}
