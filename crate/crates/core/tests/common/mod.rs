#![allow(dead_code)]

use chaos_boundary::rational::rat;
use chaos_boundary::{ClassLabel, Rational, SymbolSequence, Word};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn word(rng: &mut ChaCha8Rng, min: usize, max: usize) -> Word {
    let n = rng.gen_range(min..=max);
    Word::new((0..n).map(|_| rng.gen_range(0..2u8)).collect()).unwrap()
}

pub fn eventually_periodic(rng: &mut ChaCha8Rng) -> SymbolSequence {
    let pre = word(rng, 0, 5);
    let period = word(rng, 1, 5);
    SymbolSequence::periodic(pre, period).unwrap()
}

/// Eventually periodic sequence whose first symbol is `first`.
pub fn starting_with(rng: &mut ChaCha8Rng, first: u8) -> SymbolSequence {
    eventually_periodic(rng).prepend(&Word::symbol(first))
}

/// Uniform rational in `[lo, hi]` with denominator `den`.
pub fn rational_in(rng: &mut ChaCha8Rng, lo: &Rational, hi: &Rational, den: i64) -> Rational {
    let t = rat(rng.gen_range(0..=den), den);
    lo + (hi - lo) * t
}

pub fn seq(s: &str) -> SymbolSequence {
    s.parse().unwrap()
}

pub const CLASSES: [ClassLabel; 4] = ClassLabel::ALL;
