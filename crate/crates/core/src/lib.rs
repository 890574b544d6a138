//! Generalized period-doubling words.
//!
//! `P_k` is the fixed point of the substitution `s_k(m) = 0 (m+1 mod k)`
//! over the alphabet `{0, ..., k-1}`. The crate builds its prefixes, the
//! palindromic kernel words `R_i`, the kernel gaps `G_n`, and the
//! factorization `P_k = R_1 G_1 R_2 G_2 ...`, and checks every identity
//! relating them against a naive reference implementation in [`oracle`].
//!
//! ```
//! use pdwords::{iterate, Alphabet, LengthCap};
//!
//! let w = iterate(Alphabet::new(3)?, 4, LengthCap::default())?;
//! assert_eq!(w.to_string(), "0102010001020101");
//! # Ok::<(), pdwords::Error>(())
//! ```

mod error;
pub mod gaps;
pub mod kernel;
mod num;
pub mod oracle;
pub mod prefix;
mod report;
pub mod word;

pub use error::{Error, Result};
pub use gaps::{
    factor_gaps, factorize_stream, gap_length, gap_lengths, kernel_gap, kernel_gaps,
    FactorizationTables, FactorizationToken, GapRule, TokenKind,
};
pub use kernel::{kernel_numbers, kernel_word, kernel_words, KernelParity, KernelTable};
pub use num::{pow2, to_u64, ExactInt};
pub use prefix::PrefixFamily;
pub use report::{first_difference, Params, Status, VerificationReport};
pub use word::{
    iterate, iterate_from, letter_at, mirror_substitute, occurrences, prefix_of, substitute,
    Alphabet, LengthCap, Letter, Occurrence, Word,
};

/// Exact counts for sequences that stay within 64 bits at the depths used here.
pub type Count = u64;
/// Wider exact counts, e.g. `2^m` for `m` up to 127.
pub type WideCount = u128;
/// Unbounded exact counts.
pub type BigCount = num_bigint::BigUint;
