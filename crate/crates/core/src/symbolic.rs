//! Combinatorics on words over `{0,1}`: eventually periodic sequences, the
//! parity-twisted order, kneading compatibility, mechanical (balanced) words and
//! the substitution rules of the anharmonic cascade.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Orientation class of a two-branch map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassLabel {
    A,
    B,
    C,
    D,
}

impl ClassLabel {
    pub const ALL: [ClassLabel; 4] = [ClassLabel::A, ClassLabel::B, ClassLabel::C, ClassLabel::D];

    /// `+1` when the branch carrying `symbol` is increasing, `-1` otherwise.
    pub fn parity(self, symbol: u8) -> i8 {
        let increasing = match (self, symbol) {
            (ClassLabel::A, _) => true,
            (ClassLabel::B, 0) | (ClassLabel::D, 1) => true,
            (ClassLabel::B, _) | (ClassLabel::D, _) => false,
            (ClassLabel::C, _) => false,
        };
        if increasing { 1 } else { -1 }
    }

    /// Class obtained by conjugating with the orientation reversal `x -> a_m + b_m - x`.
    pub fn mirror(self) -> ClassLabel {
        match self {
            ClassLabel::B => ClassLabel::D,
            ClassLabel::D => ClassLabel::B,
            other => other,
        }
    }

    pub fn letter(self) -> char {
        match self {
            ClassLabel::A => 'A',
            ClassLabel::B => 'B',
            ClassLabel::C => 'C',
            ClassLabel::D => 'D',
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for ClassLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(ClassLabel::A),
            "B" | "b" => Ok(ClassLabel::B),
            "C" | "c" => Ok(ClassLabel::C),
            "D" | "d" => Ok(ClassLabel::D),
            other => Err(Error::Parse { pos: 0, msg: format!("unknown class `{other}`") }),
        }
    }
}

/// A finite word over `{0,1}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(symbols: Vec<u8>) -> Result<Self> {
        if let Some(pos) = symbols.iter().position(|&s| s > 1) {
            return Err(Error::Parse { pos, msg: "symbols must be 0 or 1".into() });
        }
        Ok(Word(symbols))
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn symbol(s: u8) -> Self {
        Word(vec![s])
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn repeat(&self, n: usize) -> Word {
        Word(self.0.repeat(n))
    }

    pub fn ones(&self) -> usize {
        self.0.iter().filter(|&&s| s == 1).count()
    }

    /// Replaces every `0` by `zero` and every `1` by `one`.
    pub fn substitute(&self, zero: &Word, one: &Word) -> Word {
        let mut out = Vec::with_capacity(self.0.len() * zero.len().max(one.len()));
        for &s in &self.0 {
            out.extend_from_slice(if s == 0 { &zero.0 } else { &one.0 });
        }
        Word(out)
    }

    /// Exchanges the two symbols.
    pub fn swapped(&self) -> Word {
        Word(self.0.iter().map(|s| 1 - s).collect())
    }

    pub fn rotate(&self, k: usize) -> Word {
        let mut v = self.0.clone();
        if !v.is_empty() {
            let k = k % v.len();
            v.rotate_left(k);
        }
        Word(v)
    }

    /// Smallest `r` such that this word is `r`-th power of its first `len/r` symbols.
    fn primitive_root_len(&self) -> usize {
        let n = self.0.len();
        (1..=n)
            .find(|&d| n.is_multiple_of(d) && (d..n).all(|i| self.0[i] == self.0[i - d]))
            .unwrap_or(n)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .enumerate()
            .map(|(pos, ch)| match ch {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::Parse { pos, msg: format!("unexpected `{ch}` in word") }),
            })
            .collect::<Result<Vec<u8>>>()
            .map(Word)
    }
}

/// Either a finite word or an eventually periodic infinite sequence `pre (period)^∞`.
///
/// Periodic sequences are always stored in canonical form: the period is primitive
/// and the preperiod is as short as possible, so structural equality is sequence
/// equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SymbolSequence {
    Finite(Word),
    Periodic { pre: Word, period: Word },
}

impl SymbolSequence {
    pub fn finite(word: Word) -> Self {
        SymbolSequence::Finite(word)
    }

    pub fn periodic(pre: Word, period: Word) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::precondition("period of an eventually periodic sequence is empty"));
        }
        let root = period.primitive_root_len();
        let mut period = period.0[..root].to_vec();
        let mut pre = pre.0;
        while let (Some(&p), Some(&q)) = (pre.last(), period.last()) {
            if p != q {
                break;
            }
            pre.pop();
            period.rotate_right(1);
        }
        Ok(SymbolSequence::Periodic { pre: Word(pre), period: Word(period) })
    }

    /// `period^∞`.
    pub fn purely_periodic(period: Word) -> Result<Self> {
        Self::periodic(Word::empty(), period)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, SymbolSequence::Finite(_))
    }

    /// Length of the finite word, `None` for infinite sequences.
    pub fn finite_len(&self) -> Option<usize> {
        match self {
            SymbolSequence::Finite(w) => Some(w.len()),
            SymbolSequence::Periodic { .. } => None,
        }
    }

    pub fn symbol(&self, i: usize) -> Option<u8> {
        match self {
            SymbolSequence::Finite(w) => w.0.get(i).copied(),
            SymbolSequence::Periodic { pre, period } => Some(if i < pre.len() {
                pre.0[i]
            } else {
                period.0[(i - pre.len()) % period.len()]
            }),
        }
    }

    /// First `n` symbols (fewer for a short finite word).
    pub fn prefix(&self, n: usize) -> Word {
        Word((0..n).map_while(|i| self.symbol(i)).collect())
    }

    pub fn shift(&self) -> Result<Self> {
        match self {
            SymbolSequence::Finite(w) if w.is_empty() => {
                Err(Error::precondition("cannot shift the empty word"))
            }
            SymbolSequence::Finite(w) => Ok(SymbolSequence::Finite(Word(w.0[1..].to_vec()))),
            SymbolSequence::Periodic { pre, period } => {
                if pre.is_empty() {
                    Self::periodic(Word::empty(), period.rotate(1))
                } else {
                    Self::periodic(Word(pre.0[1..].to_vec()), period.clone())
                }
            }
        }
    }

    /// `σ^r` for `r` in `0..count`, where `count` covers every distinct shift of a
    /// periodic sequence (`|pre| + |period|`) or every suffix of a finite word.
    pub fn distinct_shifts(&self) -> Vec<SymbolSequence> {
        let count = match self {
            SymbolSequence::Finite(w) => w.len() + 1,
            SymbolSequence::Periodic { pre, period } => pre.len() + period.len(),
        };
        let mut out = Vec::with_capacity(count);
        let mut cur = self.clone();
        for r in 0..count {
            out.push(cur.clone());
            if r + 1 < count {
                cur = cur.shift().expect("shift count bounded by length");
            }
        }
        out
    }

    /// Applies a symbol substitution to every part of the sequence.
    pub fn substitute(&self, zero: &Word, one: &Word) -> Result<Self> {
        match self {
            SymbolSequence::Finite(w) => Ok(SymbolSequence::Finite(w.substitute(zero, one))),
            SymbolSequence::Periodic { pre, period } => {
                Self::periodic(pre.substitute(zero, one), period.substitute(zero, one))
            }
        }
    }

    pub fn swapped(&self) -> Self {
        match self {
            SymbolSequence::Finite(w) => SymbolSequence::Finite(w.swapped()),
            SymbolSequence::Periodic { pre, period } => {
                Self::periodic(pre.swapped(), period.swapped()).expect("period stays nonempty")
            }
        }
    }

    /// `w · self`.
    pub fn prepend(&self, w: &Word) -> Self {
        match self {
            SymbolSequence::Finite(v) => SymbolSequence::Finite(w.concat(v)),
            SymbolSequence::Periodic { pre, period } => {
                Self::periodic(w.concat(pre), period.clone()).expect("period stays nonempty")
            }
        }
    }

    /// Index range long enough to decide comparison with `other`.
    fn decision_horizon(&self, other: &SymbolSequence) -> usize {
        match (self, other) {
            (SymbolSequence::Finite(w), _) | (_, SymbolSequence::Finite(w)) => w.len(),
            (
                SymbolSequence::Periodic { pre: p1, period: q1 },
                SymbolSequence::Periodic { pre: p2, period: q2 },
            ) => p1.len().max(p2.len()) + q1.len().lcm(&q2.len()),
        }
    }
}

impl fmt::Display for SymbolSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolSequence::Finite(w) => write!(f, "{w}"),
            SymbolSequence::Periodic { pre, period } => write!(f, "{pre}({period})"),
        }
    }
}

impl FromStr for SymbolSequence {
    type Err = Error;

    /// `PRE(PERIOD)` for `PRE PERIOD^∞`; plain digits for a finite word.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.find('(') {
            None => Ok(SymbolSequence::Finite(s.parse()?)),
            Some(open) => {
                if !s.ends_with(')') {
                    return Err(Error::Parse { pos: s.len(), msg: "missing `)`".into() });
                }
                let pre: Word = s[..open].parse()?;
                let period: Word = s[open + 1..s.len() - 1].parse().map_err(|e| match e {
                    Error::Parse { pos, msg } => Error::Parse { pos: pos + open + 1, msg },
                    other => other,
                })?;
                if period.is_empty() {
                    return Err(Error::Parse { pos: open + 1, msg: "empty period".into() });
                }
                Self::periodic(pre, period)
            }
        }
    }
}

/// Outcome of comparing two sequences in the parity order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Comparison {
    Less,
    Equal,
    Greater,
    /// One argument is a finite word that is a proper prefix of the other.
    Prefix,
}

impl Comparison {
    pub fn ordering(self) -> Option<Ordering> {
        match self {
            Comparison::Less => Some(Ordering::Less),
            Comparison::Equal => Some(Ordering::Equal),
            Comparison::Greater => Some(Ordering::Greater),
            Comparison::Prefix => None,
        }
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Comparison::Less => "Less",
            Comparison::Equal => "Equal",
            Comparison::Greater => "Greater",
            Comparison::Prefix => "Prefix",
        };
        f.write_str(s)
    }
}

/// The order `<_s`: at the first disagreement the sequence carrying `0` is smaller
/// when the parity product of the common prefix is positive, larger otherwise.
pub fn compare(class: ClassLabel, s: &SymbolSequence, t: &SymbolSequence) -> Comparison {
    if let (Some(n), Some(m)) = (s.finite_len(), t.finite_len()) {
        if n != m {
            let shorter = n.min(m);
            if s.prefix(shorter) == t.prefix(shorter) {
                return Comparison::Prefix;
            }
        }
    }
    let horizon = s.decision_horizon(t);
    let mut sign = 1i8;
    for i in 0..horizon {
        let (x, y) = match (s.symbol(i), t.symbol(i)) {
            (Some(x), Some(y)) => (x, y),
            _ => return Comparison::Prefix,
        };
        if x != y {
            let s_smaller = (x < y) == (sign > 0);
            return if s_smaller { Comparison::Less } else { Comparison::Greater };
        }
        sign *= class.parity(x);
    }
    match (s.finite_len(), t.finite_len()) {
        (Some(_), None) | (None, Some(_)) => Comparison::Prefix,
        _ => Comparison::Equal,
    }
}

/// The pair `(k(c-), k(c+))` of one-sided kneading sequences.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KneadingInvariant {
    pub minus: SymbolSequence,
    pub plus: SymbolSequence,
}

impl KneadingInvariant {
    pub fn new(minus: SymbolSequence, plus: SymbolSequence) -> Result<Self> {
        if minus.symbol(0) != Some(0) {
            return Err(Error::precondition(format!("k- = {minus} must begin with 0")));
        }
        if plus.symbol(0) != Some(1) {
            return Err(Error::precondition(format!("k+ = {plus} must begin with 1")));
        }
        Ok(KneadingInvariant { minus, plus })
    }
}

impl fmt::Display for KneadingInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.minus, self.plus)
    }
}

/// Every shift of either sequence lies weakly below `k-` or weakly above `k+`.
pub fn is_compatible_pair(class: ClassLabel, k: &KneadingInvariant) -> bool {
    let below = |s: &SymbolSequence| {
        matches!(compare(class, s, &k.minus), Comparison::Less | Comparison::Equal)
    };
    let above = |s: &SymbolSequence| {
        matches!(compare(class, s, &k.plus), Comparison::Greater | Comparison::Equal)
    };
    [&k.minus, &k.plus]
        .into_iter()
        .flat_map(|s| s.distinct_shifts())
        .all(|s| below(&s) || above(&s))
}

fn check_pq(p: u64, q: u64) -> Result<()> {
    if p == 0 || p >= q || p.gcd(&q) != 1 {
        return Err(Error::precondition(format!("need 0 < p < q coprime, got {p}/{q}")));
    }
    Ok(())
}

/// Mechanical word of slope `p/q`: symbol `k` is `⌊(k+1)p/q⌋ - ⌊kp/q⌋`.
pub fn mechanical_word(p: u64, q: u64) -> Result<Word> {
    check_pq(p, q)?;
    Ok(Word((0..q).map(|k| ((k + 1) * p / q - k * p / q) as u8).collect()))
}

/// `ω_{p/q}` as the purely periodic sequence of the mechanical word.
pub fn balanced_word(p: u64, q: u64) -> Result<SymbolSequence> {
    SymbolSequence::purely_periodic(mechanical_word(p, q)?)
}

/// The extremal rotations of `ω_{p/q}` and the return words built from them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SturmianBounds {
    pub omega: Word,
    /// Lexicographically largest cyclic shift (one period of `M_{p/q}`).
    pub max_shift: Word,
    /// Lexicographically smallest cyclic shift (one period of `m_{p/q}`).
    pub min_shift: Word,
    pub r_minus: Word,
    pub r_plus: Word,
}

pub fn sturmian_bounds(p: u64, q: u64) -> Result<SturmianBounds> {
    let omega = mechanical_word(p, q)?;
    let q = q as usize;
    let shifts: Vec<Word> = (0..q).map(|k| omega.rotate(k)).collect();
    let max_shift = shifts.iter().max().cloned().expect("q >= 2");
    let min_shift = shifts.iter().min().cloned().expect("q >= 2");
    let r_minus = Word::symbol(0).concat(&max_shift).0[..q].to_vec();
    let r_plus = Word::symbol(1).concat(&min_shift).0[..q].to_vec();
    Ok(SturmianBounds { omega, max_shift, min_shift, r_minus: Word(r_minus), r_plus: Word(r_plus) })
}

/// Images of `0` under the cascade substitution (the image of `1` is `1`).
fn replacement_zero(class: ClassLabel) -> Result<Word> {
    match class {
        ClassLabel::C => Ok(Word(vec![0, 0, 1, 0, 0])),
        ClassLabel::B => Ok(Word(vec![0, 1, 0, 0, 1, 0])),
        other => Err(Error::precondition(format!(
            "replacement rule only exists for classes B and C, not {other}"
        ))),
    }
}

pub fn apply_replacement(class: ClassLabel, w: &Word) -> Result<Word> {
    Ok(w.substitute(&replacement_zero(class)?, &Word::symbol(1)))
}

/// First `length` symbols of the fixed point of the cascade substitution started at `0`.
pub fn anharmonic_prefix(class: ClassLabel, length: usize) -> Result<Word> {
    if length == 0 {
        return Err(Error::precondition("length must be at least 1"));
    }
    let zero = replacement_zero(class)?;
    let one = Word::symbol(1);
    let mut w = Word::symbol(0);
    while w.len() < length {
        w = w.substitute(&zero, &one);
    }
    w.0.truncate(length);
    Ok(w)
}

/// Periods `p_0..=p_{n_max}` of the cascade orbits.
///
/// Class C: `(4·2^n - (-1)^n)/3`, satisfying `p_{n+1} = 2p_n + (-1)^n`.
/// Class B: `(5·2^n + (-1)^n)/3`, satisfying `p_{n+1} = 2p_n - (-1)^n`.
/// The closed form is checked against the recurrence for every `n`.
pub fn cascade_periods(class: ClassLabel, n_max: usize) -> Result<Vec<BigInt>> {
    let (lead, alt) = match class {
        ClassLabel::C => (4, -1),
        ClassLabel::B => (5, 1),
        other => {
            return Err(Error::precondition(format!("no anharmonic cascade for class {other}")))
        }
    };
    let sign = |n: usize| if n.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
    let three = BigInt::from(3);
    let closed: Vec<BigInt> = (0..=n_max)
        .map(|n| {
            let v = BigInt::from(lead) * (BigInt::one() << n) + BigInt::from(alt) * sign(n);
            debug_assert!((&v % &three).is_zero());
            v / &three
        })
        .collect();
    for n in 0..n_max {
        let next = BigInt::from(2) * &closed[n] - BigInt::from(alt) * sign(n);
        if next != closed[n + 1] {
            return Err(Error::oracle(format!("cascade recurrence fails at n = {n}")));
        }
    }
    Ok(closed)
}

/// `p_{n+1} = 2p_n - (-1)^n`, the recurrence as it is usually quoted for both classes.
pub fn literal_recurrence_holds(periods: &[BigInt]) -> bool {
    periods.windows(2).enumerate().all(|(n, w)| {
        let s = if n % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        BigInt::from(2) * &w[0] - s == w[1]
    })
}
