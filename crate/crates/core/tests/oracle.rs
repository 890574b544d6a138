use pdwords::gaps::{self, Orientation};
use pdwords::oracle::{self, naive_gaps, naive_occurrences, naive_prefix};
use pdwords::word::{self, occurrences};
use pdwords::{Alphabet, GapRule, KernelTable, LengthCap, Status, Word};
use proptest::prelude::*;

const GOLDEN: &str = include_str!("golden/oracle.tsv");

fn cap() -> LengthCap {
    LengthCap::default()
}

fn a(k: usize) -> Alphabet {
    Alphabet::new(k).unwrap()
}

fn golden(check: &str, params: &str) -> String {
    oracle::parse_golden(GOLDEN)
        .unwrap()
        .into_iter()
        .find(|r| r.check == check && r.params == params)
        .unwrap_or_else(|| panic!("no golden record {check} / {params}"))
        .expected
}

fn parse_list(s: &str) -> Vec<usize> {
    s.split(',').map(|x| x.parse().unwrap()).collect()
}

#[test]
fn golden_file_is_current() {
    let fresh = oracle::render_golden(&oracle::golden_records(cap()).unwrap());
    assert_eq!(fresh, GOLDEN, "regenerate with `{}`", oracle::GOLDEN_COMMAND);
    assert!(GOLDEN.lines().next().unwrap().contains(oracle::GOLDEN_COMMAND));
}

#[test]
fn prefixes_match_golden() {
    for (k, len) in [(2, 16), (3, 16), (4, 16), (5, 2), (3, 73)] {
        let w = word::prefix_of(a(k), len, cap()).unwrap();
        assert_eq!(w.to_string(), golden("naive-prefix", &format!("k={k} length={len}")));
    }
}

#[test]
fn occurrences_match_golden() {
    for (k, pattern, len) in [(2, "00", 16), (3, "0102", 64), (3, "000", 64)] {
        let text = word::prefix_of(a(k), len, cap()).unwrap();
        let p = Word::parse(a(k), pattern).unwrap();
        let starts: Vec<usize> = occurrences(p.letters(), text.letters()).iter().map(|o| o.start).collect();
        assert_eq!(starts, parse_list(&golden("naive-occurrences", &format!("k={k} pattern={pattern} length={len}"))));
    }
}

#[test]
fn factor_gaps_match_golden() {
    for (k, pattern, depth) in [(2, "00", 4), (3, "0102", 4), (2, "00", 10)] {
        let fg = gaps::factor_gaps(&Word::parse(a(k), pattern).unwrap(), depth, cap()).unwrap();
        let rendered: Vec<String> = fg
            .gaps
            .iter()
            .map(|g| {
                let mark = if g.gap.orientation == Orientation::Inverse { "~" } else { "" };
                let place = format!("{:?}", g.placement).to_lowercase();
                format!("{}>{}:{place}:{mark}{}", g.left.start, g.right.start, g.gap.word)
            })
            .collect();
        let expected = golden("naive-gaps", &format!("k={k} factor={pattern} depth={depth}"));
        assert_eq!(format!("G0={} {}", fg.prefix, rendered.join(" ")), expected);
    }
}

#[test]
fn congruence_position_is_frozen() {
    let r = oracle::congruence_check(3, oracle::CONGRUENCE_LENGTH, cap());
    assert_eq!(format!("fail at {}", r.mismatch.unwrap()), golden("congruence", "k=3 length=64"));
    assert!(r.mismatch.unwrap() <= 16);
}

#[test]
fn kernel_table_matches_golden() {
    for k in 2..=4 {
        let t = KernelTable::build(a(k), 12, cap()).unwrap();
        let firsts: Vec<usize> = t.rows(cap()).unwrap()[1..].iter().map(|r| r.first_occurrence.unwrap()).collect();
        assert_eq!(firsts, parse_list(&golden("kernel-first-occurrence", &format!("k={k} i<=12"))));
    }
}

#[test]
fn kernel_gaps_match_golden() {
    for k in 3..=6 {
        let g = gaps::gap_lengths::<u64>(k, 14, GapRule::Periodic).unwrap();
        let expected: Vec<u64> = golden("kernel-gap-lengths", &format!("k={k} n<=14"))
            .split(',')
            .map(|x| x.parse().unwrap())
            .collect();
        assert_eq!(g, expected, "k = {k}");
    }
    for (k, n_max) in [(3, 6), (4, 7)] {
        let g = gaps::kernel_gaps(a(k), n_max, GapRule::Periodic, cap()).unwrap();
        let shown: Vec<String> = g[1..].iter().map(|w| w.to_string()).collect();
        assert_eq!(shown.join(" "), golden("kernel-gaps", &format!("k={k} n<={n_max}")));
    }
}

#[test]
fn kernel_starts_match_stream() {
    for k in 2..=4 {
        let expected = parse_list(&golden("kernel-starts", &format!("k={k} n<=12")));
        let tokens = gaps::factorize_stream(a(k), 1 << 13, GapRule::Periodic, cap()).unwrap();
        let starts: Vec<usize> = tokens
            .iter()
            .filter(|t| t.kind == pdwords::TokenKind::Kernel)
            .take(12)
            .map(|t| t.start)
            .collect();
        assert_eq!(starts, expected, "k = {k}");
    }
}

#[test]
fn iterate_matches_naive_prefix() {
    for k in 2..=8 {
        for n in 0..=16 {
            let fast = pdwords::iterate(a(k), n, cap()).unwrap();
            assert_eq!(fast, naive_prefix(k, 1 << n, cap()).unwrap(), "k={k} n={n}");
        }
    }
}

#[test]
fn letter_at_matches_naive_prefix() {
    for k in 2..=8 {
        let naive = naive_prefix(k, 1 << 16, cap()).unwrap();
        for (i, &m) in naive.letters().iter().enumerate() {
            assert_eq!(pdwords::letter_at(a(k), i as u64), m, "k={k} i={i}");
        }
    }
}

#[test]
fn kernel_gaps_match_greedy_scan() {
    for k in 3..=6 {
        let (naive, starts) = oracle::naive_kernel_gaps(k, 16, cap()).unwrap();
        let ours = gaps::kernel_gaps(a(k), 16, GapRule::Periodic, cap()).unwrap();
        for n in 1..=16 {
            assert_eq!(ours[n].letters(), naive[n].as_slice(), "k={k} n={n}");
        }
        let tokens = gaps::factorize_stream(a(k), 2 * starts[16], GapRule::Periodic, cap()).unwrap();
        let kernel_starts: Vec<usize> = tokens
            .iter()
            .filter(|t| t.kind == pdwords::TokenKind::Kernel)
            .map(|t| t.start)
            .collect();
        assert_eq!(kernel_starts[..16], starts[1..=16]);
    }
}

#[test]
fn literal_gap_rules_disagree_with_scan() {
    for k in 3..=6 {
        let (naive, _) = oracle::naive_kernel_gaps(k, 2 * k, cap()).unwrap();
        let uniform = gaps::kernel_gaps(a(k), 2 * k, GapRule::UniformAppend, cap()).unwrap();
        assert_ne!(uniform[2 * k].letters(), naive[2 * k].as_slice());
        let literal = gaps::kernel_gaps(a(k), 2, GapRule::PaperLiteral, cap()).unwrap();
        assert_ne!(literal[1].letters(), naive[1].as_slice());
    }
}

#[test]
fn verify_suite_examples() {
    let r3 = oracle::verify_all(a(3), 12, cap());
    assert!(oracle::all_expected(&r3));
    let r4 = oracle::verify_all(a(4), 12, cap());
    assert!(oracle::all_expected(&r4));
    let documented: Vec<&str> = r4.iter().filter(|r| r.documented).map(|r| r.check.as_str()).collect();
    assert_eq!(documented, ["congruence", "gap-length"]);
    let r2 = oracle::verify_all(a(2), 12, cap());
    assert!(r2.iter().any(|r| r.check == "binary-kernel-factorization" && r.passed()));
    assert!(r2
        .iter()
        .filter(|r| r.check == "gap-recurrence" || r.check == "kernel-identity")
        .all(|r| r.status == Status::OutOfDomain));
}

#[test]
fn verify_order_is_deterministic() {
    let a1 = oracle::verify_all(a(5), 10, cap());
    let a2 = oracle::verify_all(a(5), 10, cap());
    let key = |r: &pdwords::VerificationReport| (r.check.clone(), r.params.clone(), r.status);
    assert_eq!(a1.iter().map(key).collect::<Vec<_>>(), a2.iter().map(key).collect::<Vec<_>>());
    assert!(a1.windows(2).all(|w| (w[0].check.as_str(), &w[0].params) <= (w[1].check.as_str(), &w[1].params)));
}

fn factor_strategy() -> impl Strategy<Value = (usize, usize, usize)> {
    (2usize..=6, 0usize..1000, 1usize..=6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn factor_gaps_agree_with_quadratic_rescan((k, start, len) in factor_strategy()) {
        let host = pdwords::iterate(a(k), 10, cap()).unwrap();
        let w = host.slice(start + 1, start + len).unwrap();
        let fg = gaps::factor_gaps(&w, 10, cap()).unwrap();
        let naive = naive_gaps(w.letters(), host.letters());
        prop_assert_eq!(fg.gaps.len(), naive.len());
        for (g, n) in fg.gaps.iter().zip(&naive) {
            prop_assert_eq!(g.left.start, n.left);
            prop_assert_eq!(g.right.start, n.right);
            prop_assert_eq!(g.placement, n.placement);
            prop_assert_eq!(g.gap.orientation, n.orientation);
            prop_assert_eq!(g.gap.word.letters(), n.word.as_slice());
        }
    }

    #[test]
    fn kmp_matches_quadratic_scan(
        text in proptest::collection::vec(0u8..3, 0..200),
        pattern in proptest::collection::vec(0u8..3, 1..5),
    ) {
        let fast: Vec<usize> = occurrences(&pattern, &text).iter().map(|o| o.start).collect();
        prop_assert_eq!(fast, naive_occurrences(&pattern, &text));
    }
}
