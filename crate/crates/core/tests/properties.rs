use pdwords::gaps::{self, FactorizationTables};
use pdwords::prefix::{self, PrefixFamily, SecondProductOrder};
use pdwords::word::{self, mirror_substitute, substitute};
use pdwords::{
    kernel_numbers, kernel_words, Alphabet, GapRule, KernelParity, LengthCap, TokenKind, Word,
};
use proptest::prelude::*;

fn cap() -> LengthCap {
    LengthCap::default()
}

fn a(k: usize) -> Alphabet {
    Alphabet::new(k).unwrap()
}

fn word_over(k: usize, max_len: usize) -> impl Strategy<Value = Word> {
    proptest::collection::vec(0u8..k as u8, 0..max_len).prop_map(move |v| Word::from_letters(a(k), v).unwrap())
}

fn any_word() -> impl Strategy<Value = Word> {
    (2usize..=9).prop_flat_map(|k| word_over(k, 40))
}

proptest! {
    #[test]
    fn substitution_is_a_uniform_morphism(u in any_word(), extra in proptest::collection::vec(0u8..2, 0..20)) {
        let v = Word::from_letters(u.alphabet(), extra).unwrap();
        let mut uv = u.clone();
        uv.append(&v);
        let mut s = substitute(&u);
        s.append(&substitute(&v));
        prop_assert_eq!(substitute(&uv).len(), 2 * uv.len());
        prop_assert_eq!(substitute(&uv), s);
    }

    #[test]
    fn mirror_substitution_reverses(u in any_word()) {
        prop_assert_eq!(mirror_substitute(&u), substitute(&u.mirror()).mirror());
    }

    #[test]
    fn letter_at_agrees_with_iterate(k in 2usize..=12, idx in 0u64..(1 << 14)) {
        let w = pdwords::iterate(a(k), 14, cap()).unwrap();
        prop_assert_eq!(pdwords::letter_at(a(k), idx), w.letters()[idx as usize]);
    }

    #[test]
    fn letter_at_satisfies_fixed_point_recursion(k in 2usize..=12, idx in 0u64..u64::MAX / 2) {
        prop_assert_eq!(pdwords::letter_at(a(k), 2 * idx), 0);
        let expected = ((pdwords::letter_at(a(k), idx) as usize + 1) % k) as u8;
        prop_assert_eq!(pdwords::letter_at(a(k), 2 * idx + 1), expected);
    }

    #[test]
    fn prefix_words_split_into_palindrome_and_theta(k in 2usize..=7, n in 0usize..=12) {
        let fam = PrefixFamily::build(a(k), n, cap()).unwrap();
        let e = fam.entry(n);
        prop_assert!(e.p.is_palindrome());
        prop_assert_eq!(e.theta as usize, n % k);
        let mut pt = e.p.clone();
        pt.push(e.theta);
        prop_assert_eq!(&pt, &e.w);
        prop_assert_eq!(e.w.len() as u64, e.length);
    }

    #[test]
    fn lemma_l1_and_c4_hold(k in 2usize..=7, n in 2usize..=11) {
        let fam = PrefixFamily::build(a(k), n + 1, cap()).unwrap();
        prop_assert!(prefix::check_lemma_l1(&fam, n).passed());
        prop_assert!(prefix::check_lemma_c4(&fam, n).passed());
    }

    #[test]
    fn lcp_theorem_holds_in_domain(k in 2usize..=7, extra in 0usize..6, i_seed in 0usize..100) {
        let n = k + extra;
        let i = 1 + i_seed % (k - 1).max(1);
        prop_assume!(i < k);
        let fam = PrefixFamily::build(a(k), n, cap()).unwrap();
        let r = prefix::check_lcp_theorem(&fam, n, i, SecondProductOrder::Natural);
        prop_assert!(r.passed(), "{}", r);
    }

    #[test]
    fn kernel_words_are_palindromes_of_length_r(k in 2usize..=7, i in 0usize..=18) {
        let r = kernel_numbers::<u64>(k, i).unwrap();
        let w = kernel_words(a(k), i, KernelParity::ModK, cap()).unwrap();
        prop_assert!(w[i].is_palindrome());
        prop_assert_eq!(w[i].len() as u64, r[i]);
    }

    #[test]
    fn kernel_word_is_not_a_factor_of_its_successor(k in 2usize..=6, i in 1usize..=14) {
        let w = kernel_words(a(k), i + 1, KernelParity::ModK, cap()).unwrap();
        prop_assert!(word::find(w[i].letters(), w[i + 1].letters()).is_none());
    }

    #[test]
    fn palindrome_equivalence_on_factors(k in 2usize..=6, start in 0usize..2000, len in 3usize..24) {
        let host = pdwords::iterate(a(k), 12, cap()).unwrap();
        let v = host.slice(start + 1, start + len).unwrap();
        let (x, y, z) = prefix::palindrome_equivalence(&v, cap()).unwrap();
        prop_assert_eq!(x, y);
        prop_assert_eq!(y, z);
    }

    #[test]
    fn palindromic_factors_desubstitute(k in 2usize..=6, start in 0usize..2000, len in 1usize..24) {
        let host = pdwords::iterate(a(k), 12, cap()).unwrap();
        // First palindromic factor of this length at or after `start`.
        let found = (start..host.len() - len)
            .map(|j| host.slice(j + 1, j + len).unwrap())
            .find(|v| v.is_palindrome() && v.letters() != [0, 0]);
        let Some(v) = found else { return Ok(()); };
        let (pre, form) = prefix::desubstitute_palindrome(&v, cap()).unwrap();
        prop_assert!(pre.is_palindrome());
        let s = substitute(&pre);
        let rebuilt = match form {
            prefix::DesubstitutionForm::AppendZero => { let mut s = s; s.push(0); s }
            prefix::DesubstitutionForm::StripZero => s.strip_first(0).unwrap(),
        };
        prop_assert_eq!(rebuilt, v);
    }

    #[test]
    fn stream_concatenation_is_a_prefix(k in 2usize..=6, length in 1usize..3000, m in 1usize..40) {
        let tokens = gaps::factorize_stream(a(k), length, GapRule::Periodic, cap()).unwrap();
        let take = (2 * m).min(tokens.len());
        let joined = Word::concat(a(k), tokens[..take].iter().map(|t| &t.word));
        let host = pdwords::prefix_of(a(k), joined.len(), cap()).unwrap();
        prop_assert_eq!(joined, host);
        prop_assert!(gaps::token_positions_match_lengths(&tokens, k, GapRule::Periodic).unwrap());
        if k == 2 {
            prop_assert!(tokens.iter().filter(|t| t.kind == TokenKind::Gap).all(|t| t.is_empty()));
        }
    }

    #[test]
    fn gap_lengths_double_plus_step(k in 3usize..=8, n in 1usize..=40) {
        let g = gaps::gap_lengths::<u128>(k, n + 1, GapRule::Periodic).unwrap();
        if n + 1 >= k {
            let step = u128::from((n + 1) % k >= 2);
            prop_assert_eq!(g[n + 1], 2 * g[n] + step);
        }
        let uniform = gaps::gap_lengths::<u128>(k, n + 1, GapRule::UniformAppend).unwrap();
        if n + 1 >= k + 2 {
            prop_assert_eq!(uniform[n + 1], 2 * uniform[n] + 1);
        }
    }

    #[test]
    fn corollary_recurrence_tracks_construction(k in 3usize..=7, n in 1usize..=40) {
        let g = gaps::gap_lengths::<u128>(k, n.max(k), GapRule::Periodic).unwrap();
        let c = gaps::corollary_gap_lengths::<u128>(k, n.max(k), &g[..=k]).unwrap();
        prop_assert_eq!(c, g);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn factorization_identities_hold(k in 3usize..=6, n in 1usize..=14) {
        let t = FactorizationTables::build(a(k), 14, GapRule::Periodic, cap()).unwrap();
        prop_assert!(gaps::check_prefix_assembly(&t, n, cap()).passed());
        if n > k {
            let id = gaps::check_kernel_identity(&t, n);
            prop_assert!(id.passed(), "{}", id);
            prop_assert!(gaps::check_kernel_expansion(&t, n).passed());
            let (r, star) = gaps::check_gap_recurrence(&t, n, cap());
            prop_assert!(r.passed(), "{}", r);
            let star = star.unwrap();
            prop_assert_eq!(star.word.len(), t.r(n) + usize::from(n % k == 0));
            prop_assert!(star.suffix_of_letter_two_image);
        }
    }
}
