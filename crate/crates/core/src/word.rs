//! Alphabets, words and the period-doubling morphism.
//!
//! Positions exposed through [`Word::slice`] and [`Occurrence`] are 1-based
//! and inclusive; everything else uses ordinary 0-based slices.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A single symbol of `{0, 1, ..., k-1}`.
pub type Letter = u8;

/// Default maximum number of letters in any materialized word.
pub const DEFAULT_LENGTH_CAP: usize = 1 << 26;

/// Environment variable overriding [`DEFAULT_LENGTH_CAP`].
pub const LENGTH_CAP_ENV: &str = "PDWORDS_LENGTH_CAP";

/// The alphabet `A_k = {0, ..., k-1}` with `k >= 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alphabet {
    k: u8,
}

impl Alphabet {
    pub fn new(k: usize) -> Result<Self> {
        if !(2..=255).contains(&k) {
            return Err(Error::InvalidAlphabet(k));
        }
        Ok(Alphabet { k: k as u8 })
    }

    #[inline]
    pub fn size(self) -> usize {
        self.k as usize
    }

    pub fn contains(self, letter: Letter) -> bool {
        letter < self.k
    }

    /// Reduces an arbitrary integer to a letter, `n mod k`.
    pub fn letter_mod(self, n: u64) -> Letter {
        (n % self.k as u64) as Letter
    }

    pub fn check(self, letter: u64) -> Result<Letter> {
        if letter < self.k as u64 {
            Ok(letter as Letter)
        } else {
            Err(Error::LetterOutOfRange {
                letter,
                k: self.size(),
            })
        }
    }

    /// The exchange map `E_k`: cyclic successor on the alphabet.
    pub fn exchange(self, m: Letter) -> Result<Letter> {
        self.check(m as u64)?;
        Ok(self.exchange_unchecked(m))
    }

    #[inline]
    pub(crate) fn exchange_unchecked(self, m: Letter) -> Letter {
        if m + 1 == self.k {
            0
        } else {
            m + 1
        }
    }

    /// Inverse of [`Alphabet::exchange`].
    #[inline]
    pub(crate) fn predecessor(self, m: Letter) -> Letter {
        if m == 0 {
            self.k - 1
        } else {
            m - 1
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A_{}", self.k)
    }
}

/// Upper bound on the number of letters a single operation may materialize.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LengthCap(usize);

impl LengthCap {
    pub fn new(letters: usize) -> Result<Self> {
        if letters == 0 {
            return Err(Error::domain("length cap must be positive"));
        }
        Ok(LengthCap(letters))
    }

    /// Reads [`LENGTH_CAP_ENV`], falling back to the default when unset.
    pub fn from_env() -> Result<Self> {
        match std::env::var(LENGTH_CAP_ENV) {
            Ok(v) => {
                let n = v.trim().parse::<usize>().map_err(|_| {
                    Error::domain(format!("{LENGTH_CAP_ENV} must be a positive integer, got {v:?}"))
                })?;
                LengthCap::new(n)
            }
            Err(_) => Ok(LengthCap::default()),
        }
    }

    pub fn get(self) -> usize {
        self.0
    }

    pub fn check(self, requested: u128) -> Result<()> {
        if requested > self.0 as u128 {
            Err(Error::CapExceeded {
                requested,
                cap: self.0,
            })
        } else {
            Ok(())
        }
    }

    /// Checks that a word of length `2^exponent` fits.
    pub fn check_pow2(self, exponent: usize) -> Result<()> {
        if exponent >= 127 {
            return Err(Error::CapExceeded {
                requested: u128::MAX,
                cap: self.0,
            });
        }
        self.check(1u128 << exponent)
    }
}

impl Default for LengthCap {
    fn default() -> Self {
        LengthCap(DEFAULT_LENGTH_CAP)
    }
}

/// A finite word over an [`Alphabet`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    alphabet: Alphabet,
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty(alphabet: Alphabet) -> Self {
        Word {
            alphabet,
            letters: Vec::new(),
        }
    }

    pub fn with_capacity(alphabet: Alphabet, capacity: usize) -> Self {
        Word {
            alphabet,
            letters: Vec::with_capacity(capacity),
        }
    }

    pub fn from_letters(alphabet: Alphabet, letters: Vec<Letter>) -> Result<Self> {
        if let Some(&bad) = letters.iter().find(|&&m| !alphabet.contains(m)) {
            return Err(Error::LetterOutOfRange {
                letter: bad as u64,
                k: alphabet.size(),
            });
        }
        Ok(Word { alphabet, letters })
    }

    pub(crate) fn from_letters_unchecked(alphabet: Alphabet, letters: Vec<Letter>) -> Self {
        debug_assert!(letters.iter().all(|&m| alphabet.contains(m)));
        Word { alphabet, letters }
    }

    pub fn single(alphabet: Alphabet, letter: Letter) -> Result<Self> {
        alphabet.check(letter as u64)?;
        Ok(Word {
            alphabet,
            letters: vec![letter],
        })
    }

    /// Parses the text form: ASCII digits for `k <= 10`, comma separated
    /// decimals otherwise, and `-` (or nothing) for the empty word.
    pub fn parse(alphabet: Alphabet, text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() || text == "-" {
            return Ok(Word::empty(alphabet));
        }
        let letters: Vec<u64> = if text.contains(',') || alphabet.size() > 10 {
            text.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<u64>()
                        .map_err(|_| Error::Parse(format!("bad letter {t:?}")))
                })
                .collect::<Result<_>>()?
        } else {
            text.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(u64::from)
                        .ok_or_else(|| Error::Parse(format!("bad letter {c:?}")))
                })
                .collect::<Result<_>>()?
        };
        let letters = letters
            .into_iter()
            .map(|m| alphabet.check(m))
            .collect::<Result<Vec<_>>>()?;
        Ok(Word { alphabet, letters })
    }

    #[inline]
    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    #[inline]
    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    pub fn push(&mut self, letter: Letter) {
        debug_assert!(self.alphabet.contains(letter));
        self.letters.push(letter);
    }

    pub fn append(&mut self, other: &Word) {
        debug_assert_eq!(self.alphabet, other.alphabet);
        self.letters.extend_from_slice(&other.letters);
    }

    pub fn concat<'a, I>(alphabet: Alphabet, parts: I) -> Word
    where
        I: IntoIterator<Item = &'a Word>,
    {
        let mut out = Word::empty(alphabet);
        for p in parts {
            out.append(p);
        }
        out
    }

    pub fn mirror(&self) -> Word {
        let mut letters = self.letters.clone();
        letters.reverse();
        Word {
            alphabet: self.alphabet,
            letters,
        }
    }

    pub fn is_palindrome(&self) -> bool {
        is_palindrome(&self.letters)
    }

    /// `u[i, j]`: letters `i` through `j`, 1-based and inclusive.
    ///
    /// `slice(i, i - 1)` is the empty word for every `1 <= i <= len + 1`.
    pub fn slice(&self, i: usize, j: usize) -> Result<Word> {
        if i == 0 || j + 1 < i || j > self.len() {
            return Err(Error::domain(format!(
                "slice [{i}, {j}] is outside a word of length {}",
                self.len()
            )));
        }
        Ok(Word {
            alphabet: self.alphabet,
            letters: self.letters[i - 1..j].to_vec(),
        })
    }

    /// The prefix of length `n`.
    pub fn prefix(&self, n: usize) -> Result<Word> {
        self.slice(1, n)
    }

    pub fn starts_with(&self, other: &Word) -> bool {
        self.letters.starts_with(&other.letters)
    }

    pub fn ends_with(&self, other: &Word) -> bool {
        self.letters.ends_with(&other.letters)
    }

    /// Longest common prefix.
    pub fn lcp(&self, other: &Word) -> Word {
        let n = lcp_len(&self.letters, &other.letters);
        Word {
            alphabet: self.alphabet,
            letters: self.letters[..n].to_vec(),
        }
    }

    /// `a^{-1} u`: deletes the first letter, which must be `a`.
    pub fn strip_first(&self, a: Letter) -> Result<Word> {
        match self.letters.first() {
            Some(&b) if b == a => Ok(Word {
                alphabet: self.alphabet,
                letters: self.letters[1..].to_vec(),
            }),
            _ => Err(Error::domain(format!(
                "cannot cancel a leading {a} from {}",
                self
            ))),
        }
    }

    /// `u v^{-1}`: removes `suffix` from the end of the word.
    pub fn strip_suffix(&self, suffix: &Word) -> Result<Word> {
        if self.ends_with(suffix) {
            Ok(Word {
                alphabet: self.alphabet,
                letters: self.letters[..self.len() - suffix.len()].to_vec(),
            })
        } else {
            Err(Error::domain(format!("{suffix} is not a suffix of {self}")))
        }
    }

    /// `u^{-1} v`: removes `prefix` from the front of the word.
    pub fn strip_prefix(&self, prefix: &Word) -> Result<Word> {
        if self.starts_with(prefix) {
            Ok(Word {
                alphabet: self.alphabet,
                letters: self.letters[prefix.len()..].to_vec(),
            })
        } else {
            Err(Error::domain(format!("{prefix} is not a prefix of {self}")))
        }
    }

    /// Length of the leading run of the letter `0`.
    pub fn leading_zeros(&self) -> usize {
        self.letters.iter().take_while(|&&m| m == 0).count()
    }

    /// Text form as described on [`Word::parse`].
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("-");
        }
        if self.alphabet.size() <= 10 {
            let s: String = self.letters.iter().map(|&m| (b'0' + m) as char).collect();
            f.write_str(&s)
        } else {
            let mut first = true;
            for m in &self.letters {
                if !first {
                    f.write_str(",")?;
                }
                first = false;
                write!(f, "{m}")?;
            }
            Ok(())
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({}, {:?})", self.alphabet.size(), self.to_string())
    }
}

/// Words serialize as arrays of letters; the empty word is `[]`.
impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.letters.serialize(serializer)
    }
}

/// A 1-based occurrence `[start, start + length - 1]` inside a host word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Occurrence {
    pub start: usize,
    pub length: usize,
}

impl Occurrence {
    /// 1-based position of the last letter.
    pub fn end(&self) -> usize {
        self.start + self.length - 1
    }
}

pub fn is_palindrome(letters: &[Letter]) -> bool {
    let n = letters.len();
    (0..n / 2).all(|i| letters[i] == letters[n - 1 - i])
}

pub fn lcp_len(a: &[Letter], b: &[Letter]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// The k-period-doubling substitution `s_k(m) = 0 E_k(m)`, applied letterwise.
pub fn substitute(w: &Word) -> Word {
    let a = w.alphabet;
    let mut out = Vec::with_capacity(2 * w.len());
    for &m in &w.letters {
        out.push(0);
        out.push(a.exchange_unchecked(m));
    }
    Word {
        alphabet: a,
        letters: out,
    }
}

/// The mirror substitution `~s_k(m) = E_k(m) 0`.
pub fn mirror_substitute(w: &Word) -> Word {
    let a = w.alphabet;
    let mut out = Vec::with_capacity(2 * w.len());
    for &m in &w.letters {
        out.push(a.exchange_unchecked(m));
        out.push(0);
    }
    Word {
        alphabet: a,
        letters: out,
    }
}

/// `s_k^n(letter)`.
pub fn iterate_from(alphabet: Alphabet, letter: Letter, n: usize, cap: LengthCap) -> Result<Word> {
    cap.check_pow2(n)?;
    let mut w = Word::single(alphabet, letter)?;
    for _ in 0..n {
        w = substitute(&w);
    }
    Ok(w)
}

/// `W_n = s_k^n(0)`, the prefix of `P_k` of length `2^n`.
pub fn iterate(alphabet: Alphabet, n: usize, cap: LengthCap) -> Result<Word> {
    iterate_from(alphabet, 0, n, cap)
}

/// The prefix of `P_k` with exactly `length` letters.
pub fn prefix_of(alphabet: Alphabet, length: usize, cap: LengthCap) -> Result<Word> {
    cap.check(length as u128)?;
    let mut n = 0;
    while (1usize << n) < length {
        n += 1;
    }
    let mut w = iterate(alphabet, n, LengthCap(usize::MAX))?;
    w.letters.truncate(length);
    Ok(w)
}

/// Letter of `P_k` at 0-based `index`, in `O(log index)`.
///
/// `P[2i] = 0` and `P[2i+1] = E_k(P[i])`, so the letter is the number of
/// trailing one bits of `index`, reduced mod `k`.
pub fn letter_at(alphabet: Alphabet, index: u64) -> Letter {
    alphabet.letter_mod(index.trailing_ones() as u64)
}

/// All (possibly overlapping) occurrences of `pattern` in `text`, ascending.
///
/// Knuth-Morris-Pratt; the empty pattern has no occurrences.
pub fn occurrences(pattern: &[Letter], text: &[Letter]) -> Vec<Occurrence> {
    let mut out = Vec::new();
    for_each_occurrence(pattern, text, |o| {
        out.push(o);
        true
    });
    out
}

/// First occurrence of `pattern` in `text`.
pub fn find(pattern: &[Letter], text: &[Letter]) -> Option<Occurrence> {
    let mut found = None;
    for_each_occurrence(pattern, text, |o| {
        found = Some(o);
        false
    });
    found
}

fn for_each_occurrence(
    pattern: &[Letter],
    text: &[Letter],
    mut visit: impl FnMut(Occurrence) -> bool,
) {
    let m = pattern.len();
    if m == 0 || m > text.len() {
        return;
    }
    let fail = failure_function(pattern);
    let mut q = 0;
    for (i, &c) in text.iter().enumerate() {
        while q > 0 && pattern[q] != c {
            q = fail[q - 1];
        }
        if pattern[q] == c {
            q += 1;
        }
        if q == m {
            let o = Occurrence {
                start: i + 2 - m,
                length: m,
            };
            if !visit(o) {
                return;
            }
            q = fail[q - 1];
        }
    }
}

fn failure_function(pattern: &[Letter]) -> Vec<usize> {
    let mut fail = vec![0; pattern.len()];
    let mut q = 0;
    for i in 1..pattern.len() {
        while q > 0 && pattern[q] != pattern[i] {
            q = fail[q - 1];
        }
        if pattern[q] == pattern[i] {
            q += 1;
        }
        fail[i] = q;
    }
    fail
}

/// Smallest exponent `e` such that every factor of `P_k` of length `len`
/// already occurs inside `W_e`.
///
/// A factor of length at most `2^j` lies inside `s_k^j(ab)` for some factor
/// `ab` of length two, and all length-two factors occur in `W_{k+2}`.
pub fn factor_window_exponent(alphabet: Alphabet, len: usize) -> usize {
    let mut j = 0;
    while (1usize << j) < len.max(1) {
        j += 1;
    }
    j + alphabet.size() + 2
}

/// Whether `v` is a factor of `P_k`. Returns the first occurrence if so.
pub fn factor_occurrence(v: &Word, cap: LengthCap) -> Result<Option<Occurrence>> {
    if v.is_empty() {
        return Ok(Some(Occurrence {
            start: 1,
            length: 0,
        }));
    }
    let e_max = factor_window_exponent(v.alphabet, v.len());
    let mut e = e_max - v.alphabet.size() - 2;
    let mut host = iterate(v.alphabet, e, cap)?;
    loop {
        if let Some(o) = find(&v.letters, &host.letters) {
            return Ok(Some(o));
        }
        if e == e_max {
            return Ok(None);
        }
        cap.check_pow2(e + 1)?;
        host = substitute(&host);
        e += 1;
    }
}
