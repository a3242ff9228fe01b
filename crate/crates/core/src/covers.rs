//! Canonical affine double covers, plateau maps over them, itineraries and the
//! exact address map `α`.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{fmt_rational, int, rat, Rational};
use crate::symbolic::{ClassLabel, KneadingInvariant, SymbolSequence, Word};

/// One-sided limit selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Minus,
    Plus,
}

impl Side {
    pub fn flipped(self) -> Side {
        match self {
            Side::Minus => Side::Plus,
            Side::Plus => Side::Minus,
        }
    }

    fn times(self, parity: i8) -> Side {
        if parity > 0 { self } else { self.flipped() }
    }
}

/// `x ↦ slope·x + offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Affine {
    pub slope: Rational,
    pub offset: Rational,
}

impl Affine {
    fn new(slope: Rational, offset: Rational) -> Self {
        Affine { slope, offset }
    }

    pub fn apply(&self, x: &Rational) -> Rational {
        &self.slope * x + &self.offset
    }

    pub fn invert(&self, y: &Rational) -> Rational {
        (y - &self.offset) / &self.slope
    }

    pub fn is_increasing(&self) -> bool {
        self.slope > Rational::zero()
    }
}

/// An expanding double cover with affine branches of slope `±λ`.
///
/// The left branch lives on `[a_m, a_M]`, the right one on `[b_M, b_m]`, and each maps
/// its piece onto `[a_m, b_m]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleCover {
    class: ClassLabel,
    lambda: u32,
    a_m: Rational,
    a_max: Rational,
    b_max: Rational,
    b_m: Rational,
    c: Rational,
    left: Affine,
    right: Affine,
}

/// The cover of `class` on `[0,1]` with slope magnitude `lambda`.
///
/// For `λ = 2` the two pieces meet at `c = 1/2`; for larger `λ` they are `[0, 1/λ]` and
/// `[1 - 1/λ, 1]` and `c = 1/2` sits in the gap.
pub fn canonical_cover(class: ClassLabel, lambda: u32) -> Result<DoubleCover> {
    if lambda < 2 {
        return Err(Error::precondition(format!("slope magnitude must be at least 2, got {lambda}")));
    }
    let l = int(lambda as i64);
    let one = Rational::one();
    let inc_left = Affine::new(l.clone(), Rational::zero());
    let dec_left = Affine::new(-l.clone(), one.clone());
    let inc_right = Affine::new(l.clone(), &one - &l);
    let dec_right = Affine::new(-l.clone(), l.clone());
    let (left, right) = match class {
        ClassLabel::A => (inc_left, inc_right),
        ClassLabel::B => (inc_left, dec_right),
        ClassLabel::C => (dec_left, dec_right),
        ClassLabel::D => (dec_left, inc_right),
    };
    let a_max = rat(1, lambda as i64);
    Ok(DoubleCover {
        class,
        lambda,
        a_m: Rational::zero(),
        b_max: &one - &a_max,
        a_max,
        b_m: one,
        c: rat(1, 2),
        left,
        right,
    })
}

impl DoubleCover {
    pub fn class(&self) -> ClassLabel {
        self.class
    }

    pub fn lambda(&self) -> u32 {
        self.lambda
    }

    pub fn a_m(&self) -> &Rational {
        &self.a_m
    }

    /// Right end of the left piece.
    pub fn a_max(&self) -> &Rational {
        &self.a_max
    }

    /// Left end of the right piece.
    pub fn b_max(&self) -> &Rational {
        &self.b_max
    }

    pub fn b_m(&self) -> &Rational {
        &self.b_m
    }

    pub fn c(&self) -> &Rational {
        &self.c
    }

    pub fn branch(&self, symbol: u8) -> &Affine {
        if symbol == 0 { &self.left } else { &self.right }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.a_m <= x && x <= &self.b_m
    }

    /// Inverse branch `symbol` composed along `word`: the map `y ↦ x` with
    /// `f^{|w|}(x) = y` and itinerary `w`, as an affine map.
    pub fn inverse_word(&self, word: &Word) -> Affine {
        let mut acc = Affine::new(Rational::one(), Rational::zero());
        for &s in word.as_slice().iter().rev() {
            let b = self.branch(s);
            // x = b^{-1}(acc(y))
            acc = Affine::new(&acc.slope / &b.slope, (&acc.offset - &b.offset) / &b.slope);
        }
        acc
    }

    /// Exact point whose one-sided itinerary is `s`.
    pub fn address(&self, s: &SymbolSequence) -> Result<Rational> {
        match s {
            SymbolSequence::Finite(_) => {
                Err(Error::precondition(format!("address needs an eventually periodic sequence, got {s}")))
            }
            SymbolSequence::Periodic { pre, period } => {
                let h = self.inverse_word(period);
                let fixed = &h.offset / (Rational::one() - &h.slope);
                Ok(self.inverse_word(pre).apply(&fixed))
            }
        }
    }

    /// Fixed point of the right branch.
    pub fn right_fixed_point(&self) -> Result<Rational> {
        let r = &self.right;
        if r.slope.is_one() {
            return Err(Error::precondition("right branch has slope 1"));
        }
        let x = &r.offset / (Rational::one() - &r.slope);
        if x < self.b_max || x > self.b_m {
            return Err(Error::precondition(format!(
                "class {} right branch has no fixed point in its piece",
                self.class
            )));
        }
        Ok(x)
    }
}

/// `α(s)` on `cover`.
pub fn address(cover: &DoubleCover, s: &SymbolSequence) -> Result<Rational> {
    cover.address(s)
}

pub fn right_fixed_point(cover: &DoubleCover) -> Result<Rational> {
    cover.right_fixed_point()
}

/// Plateau map `F_{a,b}`: the cover outside `(a, b)`, constant `f(a)` on `(a, c)` and
/// `f(b)` on `(c, b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlateauConfig {
    cover: DoubleCover,
    a: Rational,
    b: Rational,
}

impl PlateauConfig {
    pub fn new(cover: DoubleCover, a: Rational, b: Rational) -> Result<Self> {
        if a < cover.a_m || a > cover.a_max {
            return Err(Error::precondition(format!(
                "a = {} outside [{}, {}]",
                fmt_rational(&a),
                fmt_rational(&cover.a_m),
                fmt_rational(&cover.a_max)
            )));
        }
        if b < cover.b_max || b > cover.b_m {
            return Err(Error::precondition(format!(
                "b = {} outside [{}, {}]",
                fmt_rational(&b),
                fmt_rational(&cover.b_max),
                fmt_rational(&cover.b_m)
            )));
        }
        Ok(PlateauConfig { cover, a, b })
    }

    pub fn cover(&self) -> &DoubleCover {
        &self.cover
    }

    pub fn class(&self) -> ClassLabel {
        self.cover.class
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn c(&self) -> &Rational {
        &self.cover.c
    }

    /// Plateau value `F(a-)` carried by `(a, c)`.
    pub fn left_plateau(&self) -> Rational {
        self.cover.left.apply(&self.a)
    }

    /// Plateau value `F(b+)` carried by `(c, b)`.
    pub fn right_plateau(&self) -> Rational {
        self.cover.right.apply(&self.b)
    }

    /// `F(x)`, with `side` resolving the value at `c`.
    pub fn evaluate(&self, x: &Rational, side: Side) -> Result<Rational> {
        if !self.cover.contains(x) {
            return Err(Error::precondition(format!("x = {} outside the domain", fmt_rational(x))));
        }
        let c = &self.cover.c;
        let left = x < c || (x == c && side == Side::Minus);
        Ok(if left {
            self.cover.left.apply(if x < &self.a { x } else { &self.a })
        } else {
            self.cover.right.apply(if x > &self.b { x } else { &self.b })
        })
    }

    /// One step of the one-sided orbit. `side = None` marks an exact point;
    /// `requested` breaks the tie when an exact point sits on `c` between two plateaus.
    fn step(&self, y: &Rational, side: Option<Side>, requested: Side) -> (u8, Rational, Option<Side>) {
        let c = &self.cover.c;
        let symbol = match y.cmp(c) {
            std::cmp::Ordering::Less => 0,
            std::cmp::Ordering::Greater => 1,
            std::cmp::Ordering::Equal => match side {
                Some(Side::Minus) => 0,
                Some(Side::Plus) => 1,
                None if self.a < *c && self.b == *c => 1,
                None if self.a == *c && self.b > *c => 0,
                None => if requested == Side::Minus { 0 } else { 1 },
            },
        };
        let parity = self.cover.class.parity(symbol);
        if symbol == 0 {
            if *y < self.a || (*y == self.a && side == Some(Side::Minus)) {
                (0, self.cover.left.apply(y), side.map(|s| s.times(parity)))
            } else {
                (0, self.left_plateau(), None)
            }
        } else if *y > self.b || (*y == self.b && side == Some(Side::Plus)) {
            (1, self.cover.right.apply(y), side.map(|s| s.times(parity)))
        } else {
            (1, self.right_plateau(), None)
        }
    }

    /// First `n` addresses of the orbit of `x±`.
    ///
    /// An exact point landing on `c` is read as `b` when `a < c = b`, as `a` when
    /// `a = c < b`, and by `side` otherwise.
    pub fn itinerary(&self, x: &Rational, side: Side, n: usize) -> Result<Word> {
        if !self.cover.contains(x) {
            return Err(Error::precondition(format!("x = {} outside the domain", fmt_rational(x))));
        }
        let mut out = Vec::with_capacity(n);
        let mut y = x.clone();
        let mut s = Some(side);
        for _ in 0..n {
            let (sym, next, next_side) = self.step(&y, s, side);
            out.push(sym);
            y = next;
            s = next_side;
        }
        Word::new(out)
    }

    /// `(k(c-), k(c+))` truncated to `n` symbols.
    pub fn kneading_invariant(&self, n: usize) -> Result<(Word, Word)> {
        if n == 0 {
            return Err(Error::precondition("kneading depth must be at least 1"));
        }
        let c = self.cover.c.clone();
        Ok((self.itinerary(&c, Side::Minus, n)?, self.itinerary(&c, Side::Plus, n)?))
    }

    /// Kneading pair recovered exactly as eventually periodic sequences.
    ///
    /// Rational orbits of integer-slope maps have bounded denominators, so the orbit
    /// of each plateau value is eventually periodic; the cycle is found by recording
    /// visited (point, side) states.
    pub fn exact_kneading(&self) -> Result<KneadingInvariant> {
        let c = self.cover.c.clone();
        let minus = self.exact_itinerary(&c, Side::Minus)?;
        let plus = self.exact_itinerary(&c, Side::Plus)?;
        KneadingInvariant::new(minus, plus)
    }

    /// The full itinerary of `x±` as an eventually periodic sequence.
    pub fn exact_itinerary(&self, x: &Rational, side: Side) -> Result<SymbolSequence> {
        let budget = 10 * orbit_budget(&[x, &self.a, &self.b, &self.cover.c]);
        let mut seen = std::collections::HashMap::new();
        let mut symbols = Vec::new();
        let mut y = x.clone();
        let mut s = Some(side);
        for i in 0..budget {
            if let Some(&start) = seen.get(&(y.clone(), s)) {
                let pre = Word::new(symbols[..start].to_vec())?;
                let period = Word::new(symbols[start..i].to_vec())?;
                return SymbolSequence::periodic(pre, period);
            }
            seen.insert((y.clone(), s), i);
            let (sym, next, next_side) = self.step(&y, s, side);
            symbols.push(sym);
            y = next;
            s = next_side;
        }
        Err(Error::OrbitBudget { budget })
    }
}

/// Upper bound on the number of distinct points an orbit can visit before cycling.
/// Integer slopes and offsets keep every iterate on the grid of the common denominator.
pub(crate) fn orbit_budget(points: &[&Rational]) -> usize {
    let den = crate::rational::lcm_denominators(points.iter().copied());
    let den: usize = den.try_into().unwrap_or(usize::MAX / 64);
    den.saturating_add(1).saturating_mul(2)
}

impl fmt::Display for PlateauConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} λ={} a={},b={}",
            self.cover.class,
            self.cover.lambda,
            fmt_rational(&self.a),
            fmt_rational(&self.b)
        )
    }
}
