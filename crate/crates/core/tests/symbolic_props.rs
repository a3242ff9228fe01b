mod common;

use chaos_boundary::symbolic::*;
use common::*;
use num_bigint::BigInt;
use proptest::prelude::*;

/// Parity order on the first `n` symbols, written independently of `compare`.
fn prefix_order(class: ClassLabel, s: &SymbolSequence, t: &SymbolSequence, n: usize) -> std::cmp::Ordering {
    let mut flips = 0;
    for i in 0..n {
        let (x, y) = (s.symbol(i).unwrap(), t.symbol(i).unwrap());
        if x != y {
            let lex = x.cmp(&y);
            return if flips % 2 == 0 { lex } else { lex.reverse() };
        }
        if class.parity(x) < 0 {
            flips += 1;
        }
    }
    std::cmp::Ordering::Equal
}

fn ord(c: Comparison) -> std::cmp::Ordering {
    c.ordering().expect("infinite sequences are always comparable")
}

#[test]
fn compare_is_a_total_order() {
    let mut r = rng(1);
    for class in CLASSES {
        for _ in 0..10_000 {
            let (s, t, u) = (eventually_periodic(&mut r), eventually_periodic(&mut r), eventually_periodic(&mut r));
            let st = ord(compare(class, &s, &t));
            assert_eq!(st, ord(compare(class, &t, &s)).reverse());
            assert_eq!(st == std::cmp::Ordering::Equal, s == t);
            let tu = ord(compare(class, &t, &u));
            if st != std::cmp::Ordering::Greater && tu != std::cmp::Ordering::Greater {
                assert_ne!(ord(compare(class, &s, &u)), std::cmp::Ordering::Greater, "{class} {s} {t} {u}");
            }
        }
    }
}

#[test]
fn compare_matches_long_prefix_order() {
    let mut r = rng(2);
    for class in CLASSES {
        for _ in 0..2_000 {
            let (s, t) = (eventually_periodic(&mut r), eventually_periodic(&mut r));
            assert_eq!(ord(compare(class, &s, &t)), prefix_order(class, &s, &t, 200), "{class} {s} {t}");
        }
    }
}

fn compatible_brute_force(class: ClassLabel, k: &KneadingInvariant) -> bool {
    let horizon = |s: &SymbolSequence| match s {
        SymbolSequence::Periodic { pre, period } => 2 * (pre.len() + period.len()),
        SymbolSequence::Finite(w) => w.len(),
    };
    [&k.minus, &k.plus].into_iter().all(|s| {
        let mut cur = s.clone();
        (0..horizon(s)).all(|_| {
            let ok = prefix_order(class, &cur, &k.minus, 200).is_le() || prefix_order(class, &cur, &k.plus, 200).is_ge();
            cur = cur.shift().unwrap();
            ok
        })
    })
}

#[test]
fn compatibility_agrees_with_brute_force() {
    let mut r = rng(3);
    let mut seen = [0usize; 2];
    for class in CLASSES {
        for _ in 0..3_000 {
            let k = KneadingInvariant::new(starting_with(&mut r, 0), starting_with(&mut r, 1)).unwrap();
            let fast = is_compatible_pair(class, &k);
            assert_eq!(fast, compatible_brute_force(class, &k), "{class} {k}");
            seen[fast as usize] += 1;
        }
    }
    assert!(seen[0] > 100 && seen[1] > 100, "both outcomes exercised: {seen:?}");
}

fn is_balanced_cyclic(w: &Word) -> bool {
    let s = w.as_slice();
    let q = s.len();
    (1..=q).all(|len| {
        let counts: Vec<usize> = (0..q).map(|i| (0..len).filter(|j| s[(i + j) % q] == 1).count()).collect();
        counts.iter().max().unwrap() - counts.iter().min().unwrap() <= 1
    })
}

#[test]
fn balanced_words_are_balanced() {
    for q in 2..=40u64 {
        for p in 1..q {
            if num_integer::Integer::gcd(&p, &q) != 1 {
                assert!(balanced_word(p, q).is_err());
                continue;
            }
            let w = mechanical_word(p, q).unwrap();
            assert_eq!(w.len() as u64, q);
            assert_eq!(w.ones() as u64, p);
            assert!(is_balanced_cyclic(&w), "{p}/{q}: {w}");
            let b = sturmian_bounds(p, q).unwrap();
            assert_eq!(b.r_minus.len() as u64, q);
            assert_eq!(b.r_plus.len() as u64, q);
        }
    }
}

#[test]
fn cascade_recurrences_hold_to_twenty() {
    let pm = |n: usize| if n.is_multiple_of(2) { BigInt::from(1) } else { BigInt::from(-1) };
    let b = cascade_periods(ClassLabel::B, 20).unwrap();
    let c = cascade_periods(ClassLabel::C, 20).unwrap();
    for n in 0..20 {
        assert_eq!(&b[n + 1], &(BigInt::from(2) * &b[n] - pm(n)));
        assert_eq!(&c[n + 1], &(BigInt::from(2) * &c[n] + pm(n)));
    }
}

#[test]
fn anharmonic_prefixes_are_coherent() {
    for class in [ClassLabel::B, ClassLabel::C] {
        let long = anharmonic_prefix(class, 500).unwrap();
        for len in [1, 2, 7, 33, 100, 499] {
            assert_eq!(anharmonic_prefix(class, len).unwrap(), long.prefix_word(len));
        }
        for len in [1, 3, 17, 40] {
            let image = apply_replacement(class, &long.prefix_word(len)).unwrap();
            assert_eq!(image, long.prefix_word(image.len()));
        }
    }
}

trait PrefixWord {
    fn prefix_word(&self, n: usize) -> Word;
}

impl PrefixWord for Word {
    fn prefix_word(&self, n: usize) -> Word {
        Word::new(self.as_slice()[..n].to_vec()).unwrap()
    }
}

fn arb_word(min: usize, max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0u8..2, min..=max).prop_map(|v| Word::new(v).unwrap())
}

proptest! {
    #[test]
    fn text_format_round_trips(pre in arb_word(0, 8), period in arb_word(1, 8)) {
        let s = SymbolSequence::periodic(pre, period).unwrap();
        let back: SymbolSequence = s.to_string().parse().unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn canonical_form_is_unique(pre in arb_word(0, 6), period in arb_word(1, 4), reps in 1usize..4, unroll in 0usize..6) {
        let s = SymbolSequence::periodic(pre.clone(), period.clone()).unwrap();
        let longer_pre = Word::new(s.prefix(pre.len() + unroll).as_slice().to_vec()).unwrap();
        let rotated = Word::new(
            (0..period.len() * reps).map(|i| s.symbol(pre.len() + unroll + i).unwrap()).collect()
        ).unwrap();
        prop_assert_eq!(SymbolSequence::periodic(longer_pre, rotated).unwrap(), s);
    }

    #[test]
    fn shift_drops_one_symbol(pre in arb_word(0, 6), period in arb_word(1, 6)) {
        let s = SymbolSequence::periodic(pre, period).unwrap();
        let t = s.shift().unwrap();
        for i in 0..30 {
            prop_assert_eq!(t.symbol(i), s.symbol(i + 1));
        }
    }
}
