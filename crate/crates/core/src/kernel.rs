//! Kernel numbers `r_i`, kernel words `R_i`, and the factorization of the
//! binary sequence `P_2 = R_1 R_2 R_3 ...`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::num::{self, ExactInt};
use crate::word::{self, iterate, prefix_of, substitute, Alphabet, LengthCap, Word};

/// Default number of kernel numbers computed by the tables.
pub const DEFAULT_KERNEL_INDEX_MAX: usize = 64;

/// Which recursion step builds `R_i` for `i > k + 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelParity {
    /// Append a zero iff `i ≡ 1 (mod k)`, otherwise cancel the leading zero.
    /// Keeps `|R_i| = r_i` for every `k`.
    #[default]
    ModK,
    /// Cancel the leading zero iff `i` is even, otherwise append a zero.
    /// Agrees with `ModK` for `k = 2, 3` only.
    PaperLiteral,
}

impl KernelParity {
    fn appends_zero(self, k: usize, i: usize) -> bool {
        match self {
            KernelParity::ModK => i % k == 1,
            KernelParity::PaperLiteral => i % 2 == 1,
        }
    }
}

/// `r_0, ..., r_{i_max}`:
/// `r_0 = 0`, `r_1 = ... = r_k = 1`, and for `i > k`
/// `r_i = r_{i-1} + ... + r_{i-(k-1)} + 2 r_{i-k} - (k-2)`.
pub fn kernel_numbers<T: ExactInt>(k: usize, i_max: usize) -> Result<Vec<T>> {
    Alphabet::new(k)?;
    let offset = num::from_usize::<T>(k - 2, "kernel number", 0)?;
    let mut r: Vec<T> = Vec::with_capacity(i_max + 1);
    for i in 0..=i_max {
        let v = match i {
            0 => T::zero(),
            i if i <= k => T::one(),
            _ => {
                let mut acc = T::zero();
                for j in 1..k {
                    acc = num::add(&acc, &r[i - j], "kernel number", i)?;
                }
                let twice = num::add(&r[i - k], &r[i - k], "kernel number", i)?;
                let acc = num::add(&acc, &twice, "kernel number", i)?;
                num::sub(&acc, &offset, "kernel number", i)?
            }
        };
        r.push(v);
    }
    Ok(r)
}

/// `R_0, ..., R_{i_max}`.
pub fn kernel_words(
    alphabet: Alphabet,
    i_max: usize,
    parity: KernelParity,
    cap: LengthCap,
) -> Result<Vec<Word>> {
    let k = alphabet.size();
    let mut out: Vec<Word> = Vec::with_capacity(i_max + 1);
    for i in 0..=i_max {
        let r = match i {
            0 => Word::empty(alphabet),
            i if i <= k => Word::single(alphabet, (i - 1) as u8)?,
            i if i == k + 1 => Word::from_letters(alphabet, vec![0, 0, 0])?,
            i if i == k + 2 => Word::from_letters(alphabet, vec![1 % k as u8, 0, 1 % k as u8, 0, 1 % k as u8])?,
            _ => {
                let prev = &out[i - 1];
                cap.check(2 * prev.len() as u128 + 1)?;
                let s = substitute(prev);
                if parity.appends_zero(k, i) {
                    let mut s = s;
                    s.push(0);
                    s
                } else {
                    s.strip_first(0)?
                }
            }
        };
        out.push(r);
    }
    Ok(out)
}

/// `R_i` alone.
pub fn kernel_word(alphabet: Alphabet, i: usize, parity: KernelParity, cap: LengthCap) -> Result<Word> {
    Ok(kernel_words(alphabet, i, parity, cap)?.pop().expect("nonempty"))
}

/// Kernel numbers and kernel words for a fixed `k`, with `|R_i| = r_i`
/// checked at construction.
#[derive(Clone, Debug)]
pub struct KernelTable {
    alphabet: Alphabet,
    numbers: Vec<u64>,
    words: Vec<Word>,
}

impl KernelTable {
    pub fn build(alphabet: Alphabet, i_max: usize, cap: LengthCap) -> Result<Self> {
        let numbers = kernel_numbers::<u64>(alphabet.size(), i_max)?;
        let words = kernel_words(alphabet, i_max, KernelParity::ModK, cap)?;
        for (i, (r, w)) in numbers.iter().zip(&words).enumerate() {
            if *r != w.len() as u64 {
                return Err(Error::falsified(
                    "kernel-length",
                    None,
                    format!("|R_{i}| = {} but r_{i} = {r}", w.len()),
                ));
            }
        }
        Ok(KernelTable {
            alphabet,
            numbers,
            words,
        })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn i_max(&self) -> usize {
        self.words.len() - 1
    }

    /// `r_i`.
    pub fn r(&self, i: usize) -> usize {
        self.numbers[i] as usize
    }

    /// `R_i`.
    pub fn word(&self, i: usize) -> &Word {
        &self.words[i]
    }

    pub fn numbers(&self) -> &[u64] {
        &self.numbers
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    /// One printable row per kernel word; the occurrence search is limited
    /// to prefixes that fit `cap`.
    pub fn rows(&self, cap: LengthCap) -> Result<Vec<KernelRow>> {
        let longest = self.words.iter().map(Word::len).max().unwrap_or(0);
        let e = word::factor_window_exponent(self.alphabet, longest);
        let host = if cap.check_pow2(e).is_ok() {
            Some(iterate(self.alphabet, e, cap)?)
        } else {
            None
        };
        Ok(self
            .words
            .iter()
            .enumerate()
            .map(|(i, w)| KernelRow {
                i,
                r: self.numbers[i],
                word: w.clone(),
                is_palindrome: w.is_palindrome(),
                first_occurrence: match (&host, w.is_empty()) {
                    (_, true) => Some(1),
                    (Some(h), false) => word::find(w.letters(), h.letters()).map(|o| o.start),
                    (None, false) => None,
                },
            })
            .collect())
    }
}

/// Row of the kernel table output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelRow {
    pub i: usize,
    pub r: u64,
    pub word: Word,
    pub is_palindrome: bool,
    /// 1-based start of the first occurrence in `P_k`, if searched and found.
    pub first_occurrence: Option<usize>,
}

/// An index where the literal even/odd rule gives a different `R_i` than the
/// mod-k rule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParityDivergence {
    pub i: usize,
    pub r: u64,
    pub literal_length: usize,
}

/// Indices `i <= i_max` where the two parity rules disagree.
pub fn parity_divergences(alphabet: Alphabet, i_max: usize, cap: LengthCap) -> Result<Vec<ParityDivergence>> {
    let r = kernel_numbers::<u64>(alphabet.size(), i_max)?;
    let ours = kernel_words(alphabet, i_max, KernelParity::ModK, cap)?;
    let literal = kernel_words(alphabet, i_max, KernelParity::PaperLiteral, cap)?;
    Ok((0..=i_max)
        .filter(|&i| ours[i] != literal[i])
        .map(|i| ParityDivergence {
            i,
            r: r[i],
            literal_length: literal[i].len(),
        })
        .collect())
}

/// One kernel word of the binary factorization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelToken {
    pub index: usize,
    /// 1-based position in `P_2`.
    pub start: usize,
    pub word: Word,
}

/// `R_1, R_2, ...` with their positions in `P_2`, as long as each word ends
/// within `length_cap` letters. The concatenation is compared with the
/// prefix of `P_2`; any difference is a falsification finding.
pub fn binary_kernel_factorization(length_cap: usize, cap: LengthCap) -> Result<Vec<KernelToken>> {
    cap.check(length_cap as u128)?;
    let a = Alphabet::new(2)?;
    let mut i_max = 1;
    let mut total = 0u64;
    for (i, r) in kernel_numbers::<u64>(2, DEFAULT_KERNEL_INDEX_MAX)?.into_iter().enumerate() {
        total += r;
        if total > length_cap as u64 {
            break;
        }
        i_max = i;
    }
    let words = kernel_words(a, i_max, KernelParity::ModK, cap)?;
    let mut tokens = Vec::with_capacity(i_max);
    let mut start = 1usize;
    for (index, w) in words.into_iter().enumerate().skip(1) {
        if start + w.len() - 1 > length_cap {
            break;
        }
        let len = w.len();
        tokens.push(KernelToken { index, start, word: w });
        start += len;
    }
    let produced = Word::concat(a, tokens.iter().map(|t| &t.word));
    let expected = prefix_of(a, produced.len(), cap)?;
    if let Some(pos) = crate::report::first_difference(expected.letters(), produced.letters()) {
        return Err(Error::falsified(
            "binary-kernel-factorization",
            Some(pos),
            "kernel words do not reproduce P_2",
        ));
    }
    Ok(tokens)
}
