//! Renormalisation boxes in the `(a, b)` parameter square.
//!
//! A box `X(ω-, ω+)` is the set of parameters for which the plateau map has an
//! induced map of class `X` whose branches follow the return words `ω-` and `ω+`.
//! Child words are written relative to the parent box and composed by substituting
//! `0 ↦ ω-`, `1 ↦ ω+` of the parent.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::covers::{DoubleCover, PlateauConfig, Side};
use crate::error::{Error, Result};
use crate::markov::is_chaotic;
use crate::parallel::par_map;
use crate::rational::{fmt_rational, midpoint, rat, Rational};
use crate::symbolic::{sturmian_bounds, ClassLabel, KneadingInvariant, SymbolSequence, Word};

/// Closed rectangle `[a_lo, a_hi] × [b_lo, b_hi]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rect {
    #[serde(with = "crate::rational::serde_pq")]
    pub a_lo: Rational,
    #[serde(with = "crate::rational::serde_pq")]
    pub a_hi: Rational,
    #[serde(with = "crate::rational::serde_pq")]
    pub b_lo: Rational,
    #[serde(with = "crate::rational::serde_pq")]
    pub b_hi: Rational,
}

impl Rect {
    pub fn new(a: (Rational, Rational), b: (Rational, Rational)) -> Self {
        let (a_lo, a_hi) = if a.0 <= a.1 { a } else { (a.1, a.0) };
        let (b_lo, b_hi) = if b.0 <= b.1 { b } else { (b.1, b.0) };
        Rect { a_lo, a_hi, b_lo, b_hi }
    }

    pub fn contains(&self, a: &Rational, b: &Rational) -> bool {
        &self.a_lo <= a && a <= &self.a_hi && &self.b_lo <= b && b <= &self.b_hi
    }

    pub fn contains_rect(&self, other: &Rect) -> bool {
        self.a_lo <= other.a_lo && other.a_hi <= self.a_hi && self.b_lo <= other.b_lo && other.b_hi <= self.b_hi
    }

    /// Intersection with nonempty interior, if any.
    pub fn interior_intersection(&self, other: &Rect) -> Option<Rect> {
        let a_lo = self.a_lo.clone().max(other.a_lo.clone());
        let a_hi = self.a_hi.clone().min(other.a_hi.clone());
        let b_lo = self.b_lo.clone().max(other.b_lo.clone());
        let b_hi = self.b_hi.clone().min(other.b_hi.clone());
        (a_lo < a_hi && b_lo < b_hi).then_some(Rect { a_lo, a_hi, b_lo, b_hi })
    }

    pub fn center(&self) -> (Rational, Rational) {
        (midpoint(&self.a_lo, &self.a_hi), midpoint(&self.b_lo, &self.b_hi))
    }

    pub fn width(&self) -> Rational {
        &self.a_hi - &self.a_lo
    }

    pub fn height(&self) -> Rational {
        &self.b_hi - &self.b_lo
    }

    /// Smallest rectangle containing both.
    pub fn hull(&self, other: &Rect) -> Rect {
        Rect {
            a_lo: self.a_lo.clone().min(other.a_lo.clone()),
            a_hi: self.a_hi.clone().max(other.a_hi.clone()),
            b_lo: self.b_lo.clone().min(other.b_lo.clone()),
            b_hi: self.b_hi.clone().max(other.b_hi.clone()),
        }
    }

    /// Center plus four points `1/32` of the way in from each corner.
    pub fn samples(&self) -> Vec<(Rational, Rational)> {
        let (da, db) = (self.width() / rat(32, 1), self.height() / rat(32, 1));
        let mut out = vec![self.center()];
        for (a, sa) in [(&self.a_lo, 1), (&self.a_hi, -1)] {
            for (b, sb) in [(&self.b_lo, 1), (&self.b_hi, -1)] {
                out.push((a + &da * rat(sa, 1), b + &db * rat(sb, 1)));
            }
        }
        out
    }
}

impl fmt::Display for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}] x [{}, {}]",
            fmt_rational(&self.a_lo),
            fmt_rational(&self.a_hi),
            fmt_rational(&self.b_lo),
            fmt_rational(&self.b_hi)
        )
    }
}

/// A renormalisation box.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamBox {
    pub class: ClassLabel,
    /// Return words in the symbols of the original map.
    #[serde(serialize_with = "ser_word", deserialize_with = "de_word")]
    pub omega_minus: Word,
    #[serde(serialize_with = "ser_word", deserialize_with = "de_word")]
    pub omega_plus: Word,
    /// Return words relative to the parent's induced map.
    #[serde(serialize_with = "ser_word", deserialize_with = "de_word")]
    pub relative_minus: Word,
    #[serde(serialize_with = "ser_word", deserialize_with = "de_word")]
    pub relative_plus: Word,
    pub rect: Rect,
    pub depth: usize,
    /// Index of the parent in the enclosing [`BoxTree`].
    pub parent: Option<usize>,
}

fn ser_word<S: serde::Serializer>(w: &Word, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&w.to_string())
}

fn de_word<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Word, D::Error> {
    let s = String::deserialize(d)?;
    s.parse().map_err(serde::de::Error::custom)
}

impl ParamBox {
    /// The whole parameter square of `cover`, with the trivial induced map `F` itself.
    pub fn root(cover: &DoubleCover) -> ParamBox {
        ParamBox {
            class: cover.class(),
            omega_minus: Word::symbol(0),
            omega_plus: Word::symbol(1),
            relative_minus: Word::symbol(0),
            relative_plus: Word::symbol(1),
            rect: Rect::new(
                (cover.a_m().clone(), cover.a_max().clone()),
                (cover.b_max().clone(), cover.b_m().clone()),
            ),
            depth: 0,
            parent: None,
        }
    }

    /// `X(ω-,ω+)` with the relative words.
    pub fn label(&self) -> String {
        format!("{}({},{})", self.class, self.relative_minus, self.relative_plus)
    }

    /// `X(ω-,ω+)` with the composed words.
    pub fn full_label(&self) -> String {
        format!("{}({},{})", self.class, self.omega_minus, self.omega_plus)
    }

    /// Composes a sequence written in this box's induced symbols.
    pub fn compose(&self, s: &SymbolSequence) -> Result<SymbolSequence> {
        s.substitute(&self.omega_minus, &self.omega_plus)
    }

    pub fn compose_word(&self, w: &Word) -> Word {
        w.substitute(&self.omega_minus, &self.omega_plus)
    }
}

fn per(pre: &Word, period: &Word) -> SymbolSequence {
    SymbolSequence::periodic(pre.clone(), period.clone()).expect("return words are nonempty")
}

/// Endpoints `(a_g, b_g)` of the interval of the induced map `X(w-, w+)`.
pub fn induced_interval(cover: &DoubleCover, class: ClassLabel, wm: &Word, wp: &Word) -> Result<(Rational, Rational)> {
    let e = Word::empty();
    let (ag, bg) = match class {
        ClassLabel::A => (per(&e, wm), per(&e, wp)),
        ClassLabel::B => (per(&e, wm), per(wp, wm)),
        ClassLabel::C => (per(&e, &wm.concat(wp)), per(&e, &wp.concat(wm))),
        ClassLabel::D => (per(wm, wp), per(&e, wp)),
    };
    Ok((cover.address(&ag)?, cover.address(&bg)?))
}

/// Exact rectangle of the box `X(w-, w+)`.
///
/// The `a` range runs from `a_g` to the point `a_G` where the left induced branch
/// reaches its boundary value, and likewise for `b`: `a_G = α(w- · k(G(a_g)))`,
/// `b_G = α(w+ · k(G(b_g)))`.
pub fn box_corners(cover: &DoubleCover, class: ClassLabel, wm: &Word, wp: &Word) -> Result<Rect> {
    let (ag, bg) = induced_interval(cover, class, wm, wp)?;
    let (a_big, b_big) = match class {
        ClassLabel::A => (per(wm, wp), per(wp, wm)),
        ClassLabel::B => (per(&wm.concat(wp), wm), per(&wp.concat(wp), wm)),
        ClassLabel::C => (per(wm, &wm.concat(wp)), per(wp, &wp.concat(wm))),
        ClassLabel::D => (per(&wm.concat(wm), wp), per(&wp.concat(wm), wp)),
    };
    Ok(Rect::new((ag, cover.address(&a_big)?), (cover.address(&b_big)?, bg)))
}

/// Child classes and relative words of a box of class `class`.
///
/// Class D is the orientation-reversed mirror of class B: each child `Y(u, v)` of B
/// becomes `Y'(swap v, swap u)` with B and D exchanged.
pub fn relative_children(class: ClassLabel, q_max: u64, n_max: usize) -> Vec<(ClassLabel, Word, Word)> {
    let w = |s: &str| s.parse::<Word>().expect("literal word");
    match class {
        ClassLabel::C => vec![
            (ClassLabel::A, w("01"), w("11")),
            (ClassLabel::D, w("0"), w("11")),
            (ClassLabel::B, w("00"), w("1")),
            (ClassLabel::A, w("00"), w("10")),
        ],
        ClassLabel::B => {
            let mut out = vec![(ClassLabel::A, w("0"), w("11")), (ClassLabel::D, w("01"), w("11"))];
            for n in 0..=n_max {
                let zeros = "0".repeat(n);
                out.push((ClassLabel::C, w(&format!("010{zeros}")), w(&format!("1{zeros}"))));
            }
            out
        }
        ClassLabel::D => relative_children(ClassLabel::B, q_max, n_max)
            .into_iter()
            .map(|(y, m, p)| (y.mirror(), p.swapped(), m.swapped()))
            .collect(),
        ClassLabel::A => farey(q_max)
            .into_iter()
            .map(|(p, q)| {
                let s = sturmian_bounds(p, q).expect("coprime by construction");
                (ClassLabel::A, s.r_minus, s.r_plus)
            })
            .collect(),
    }
}

/// Coprime `0 < p < q <= q_max`, ordered by `q` then `p`.
pub fn farey(q_max: u64) -> Vec<(u64, u64)> {
    (2..=q_max).flat_map(|q| (1..q).filter(move |p| p.gcd(&q) == 1).map(move |p| (p, q))).collect()
}

/// Relative kneading pair at which the infinite C-family of a class-B box accumulates
/// (mirrored for class D).
fn family_limit(class: ClassLabel) -> Option<(SymbolSequence, SymbolSequence)> {
    let s = |t: &str| t.parse::<SymbolSequence>().expect("literal sequence");
    match class {
        ClassLabel::B => Some((s("01(0)"), s("1(0)"))),
        ClassLabel::D => Some((s("0(1)"), s("10(1)"))),
        _ => None,
    }
}

/// Children of one box, plus the hull of the part of an infinite family that was cut off.
#[derive(Clone, Debug)]
pub struct Children {
    pub boxes: Vec<ParamBox>,
    pub truncated: Option<Rect>,
}

/// Validated child boxes of `parent`; `parent_index` is recorded in each child.
pub fn child_boxes(
    cover: &DoubleCover,
    parent: &ParamBox,
    parent_index: Option<usize>,
    q_max: u64,
    n_max: usize,
) -> Result<Children> {
    let make = |(class, rm, rp): (ClassLabel, Word, Word)| -> Result<ParamBox> {
        let wm = parent.compose_word(&rm);
        let wp = parent.compose_word(&rp);
        let rect = box_corners(cover, class, &wm, &wp)?;
        let child = ParamBox {
            class,
            omega_minus: wm,
            omega_plus: wp,
            relative_minus: rm,
            relative_plus: rp,
            rect,
            depth: parent.depth + 1,
            parent: parent_index,
        };
        validate_box(cover, &child)?;
        Ok(child)
    };
    let boxes = relative_children(parent.class, q_max, n_max)
        .into_iter()
        .map(make)
        .collect::<Result<Vec<_>>>()?;
    let truncated = match family_limit(parent.class) {
        None => None,
        Some((lm, lp)) => {
            let next = relative_children(parent.class, q_max, n_max + 1).pop().expect("family is nonempty");
            let first_cut = make(next)?;
            let la = cover.address(&parent.compose(&lm)?)?;
            let lb = cover.address(&parent.compose(&lp)?)?;
            Some(first_cut.rect.hull(&Rect::new((la.clone(), la), (lb.clone(), lb))))
        }
    };
    Ok(Children { boxes, truncated })
}

/// The induced-map conditions for `bx` at the parameter `(a, b)`.
///
/// The left piece `[a_g, c)` must follow `ω-`, the right piece `(c, b_g]` must follow
/// `ω+`; intermediate images stay off the open interval `(a_g, b_g)` and the final
/// images land in `[a_g, b_g]`, with the endpoints going where the class prescribes.
pub fn check_induced_map(cover: &DoubleCover, bx: &ParamBox, a: &Rational, b: &Rational) -> Result<()> {
    let config = PlateauConfig::new(cover.clone(), a.clone(), b.clone())?;
    let (ag, bg) = induced_interval(cover, bx.class, &bx.omega_minus, &bx.omega_plus)?;
    let c = cover.c().clone();
    let (left_target, right_target) = match bx.class {
        ClassLabel::A => (&ag, &bg),
        ClassLabel::B => (&ag, &ag),
        ClassLabel::C => (&bg, &ag),
        ClassLabel::D => (&bg, &bg),
    };
    let fail = |what: String| {
        Err(Error::oracle(format!(
            "{} at a={}, b={}: {what}",
            bx.full_label(),
            fmt_rational(a),
            fmt_rational(b)
        )))
    };
    let pieces = [
        ((ag.clone(), c.clone()), ag.clone(), &bx.omega_minus, left_target),
        ((c.clone(), bg.clone()), bg.clone(), &bx.omega_plus, right_target),
    ];
    for ((mut lo, mut hi), mut end, word, target) in pieces {
        let n = word.len();
        for (k, &sym) in word.as_slice().iter().enumerate() {
            let on_side = if sym == 0 { hi <= c } else { lo >= c };
            if !on_side {
                return fail(format!("image {k} not on side {sym}"));
            }
            if k > 0 && !(hi <= ag || lo >= bg) {
                return fail(format!("image {k} returns early"));
            }
            let side = if sym == 0 { Side::Minus } else { Side::Plus };
            let (x, y) = (config.evaluate(&lo, side)?, config.evaluate(&hi, side)?);
            end = config.evaluate(&end, side)?;
            (lo, hi) = if x <= y { (x, y) } else { (y, x) };
            if k + 1 == n && !(ag <= lo && hi <= bg) {
                return fail("final image leaves the induced interval".into());
            }
        }
        if &end != target {
            return fail(format!("endpoint goes to {} not {}", fmt_rational(&end), fmt_rational(target)));
        }
    }
    Ok(())
}

/// Runs [`check_induced_map`] at the center and four near-corner samples.
pub fn validate_box(cover: &DoubleCover, bx: &ParamBox) -> Result<()> {
    if bx.omega_minus.as_slice().first() != Some(&0) || bx.omega_plus.as_slice().first() != Some(&1) {
        return Err(Error::oracle(format!("{} has badly anchored words", bx.full_label())));
    }
    if !(bx.rect.a_lo < bx.rect.a_hi && bx.rect.b_lo < bx.rect.b_hi) {
        return Err(Error::oracle(format!("{} has a degenerate rectangle {}", bx.full_label(), bx.rect)));
    }
    for (a, b) in bx.rect.samples() {
        check_induced_map(cover, bx, &a, &b)?;
    }
    Ok(())
}

/// Every box down to `depth`, parents before children.
#[derive(Clone, Debug, Serialize)]
pub struct BoxTree {
    pub class: ClassLabel,
    pub boxes: Vec<ParamBox>,
    /// Number of boxes at depth `1..=depth`.
    pub level_counts: Vec<usize>,
    /// Cut-off hulls of infinite families, keyed by parent index.
    pub truncations: Vec<(usize, Rect)>,
}

impl BoxTree {
    /// Boxes ordered by depth, then relative `ω-`, then the rest of the label (export order).
    pub fn export_order(&self) -> Vec<&ParamBox> {
        let mut v: Vec<&ParamBox> = self.boxes.iter().collect();
        v.sort_by(|x, y| {
            (x.depth, x.omega_minus.as_slice(), x.omega_plus.as_slice(), x.class)
                .cmp(&(y.depth, y.omega_minus.as_slice(), y.omega_plus.as_slice(), y.class))
        });
        v
    }
}

pub fn box_tree(cover: &DoubleCover, depth: usize, q_max: u64, n_max: usize) -> Result<BoxTree> {
    if depth == 0 {
        return Err(Error::precondition("box tree depth must be at least 1"));
    }
    let mut boxes = vec![ParamBox::root(cover)];
    let mut level = vec![0usize];
    let mut level_counts = Vec::new();
    let mut truncations = Vec::new();
    for _ in 0..depth {
        let jobs: Vec<(usize, ParamBox)> = level.iter().map(|&i| (i, boxes[i].clone())).collect();
        let results = par_map(jobs, |(i, bx)| child_boxes(cover, &bx, Some(i), q_max, n_max).map(|c| (i, c)));
        let mut next = Vec::new();
        for r in results {
            let (i, children) = r?;
            if let Some(hull) = children.truncated {
                truncations.push((i, hull));
            }
            for child in children.boxes {
                next.push(boxes.len());
                boxes.push(child);
            }
        }
        level_counts.push(next.len());
        level = next;
    }
    Ok(BoxTree { class: cover.class(), boxes, level_counts, truncations })
}

/// A point where the boundary of chaos meets an edge of a box.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeAnchor {
    pub label: String,
    #[serde(with = "crate::rational::serde_pq")]
    pub a: Rational,
    #[serde(with = "crate::rational::serde_pq")]
    pub b: Rational,
    #[serde(serialize_with = "ser_pair")]
    pub kneading: KneadingInvariant,
}

fn ser_pair<S: serde::Serializer>(k: &KneadingInvariant, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&k.minus.to_string())?;
    t.serialize_element(&k.plus.to_string())?;
    t.end()
}

/// Relative kneading pairs of the edge anchors of a box of each class.
fn relative_anchors(class: ClassLabel) -> Vec<(&'static str, &'static str, &'static str)> {
    match class {
        ClassLabel::A => vec![("b=b_M", "01(0)", "1(0)"), ("a=a_M", "0(1)", "10(1)")],
        ClassLabel::B => vec![("b=b_M", "011(0)", "11(0)"), ("a=a_M", "0(1)", "110(1)"), ("limit", "01(0)", "1(0)")],
        ClassLabel::D => vec![("a=a_M", "00(1)", "100(1)"), ("b=b_M", "001(0)", "1(0)"), ("limit", "0(1)", "10(1)")],
        ClassLabel::C => vec![
            ("P1", "0(01)", "100(01)"),
            ("P2", "001(0)", "1(0)"),
            ("P3", "0(1)", "110(1)"),
            ("P4", "011(10)", "1(10)"),
        ],
    }
}

/// Exact anchor points of `bx` on its edges, with their kneading pairs.
pub fn edge_anchors(cover: &DoubleCover, bx: &ParamBox) -> Result<Vec<EdgeAnchor>> {
    relative_anchors(bx.class)
        .into_iter()
        .map(|(label, m, p)| {
            let km = bx.compose(&m.parse()?)?;
            let kp = bx.compose(&p.parse()?)?;
            Ok(EdgeAnchor {
                label: label.to_string(),
                a: cover.address(&km)?,
                b: cover.address(&kp)?,
                kneading: KneadingInvariant::new(km, kp)?,
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Chaotic,
    NonChaotic,
    Undetermined,
}

/// Result of walking the box tree towards a parameter.
#[derive(Clone, Debug, Serialize)]
pub struct Descent {
    /// Boxes entered, outermost first (the root is not included).
    pub path: Vec<ParamBox>,
    pub verdict: Verdict,
}

impl Descent {
    pub fn labels(&self) -> Vec<String> {
        self.path.iter().map(ParamBox::label).collect()
    }
}

/// Walks down the tree of boxes containing `(a, b)`.
///
/// Outside every child the verdict is taken from the exact entropy decider; a point in
/// the cut-off part of an infinite family is a [`Error::TruncationLimit`].
pub fn descend(config: &PlateauConfig, max_depth: usize, q_max: u64, n_max: usize) -> Result<Descent> {
    let cover = config.cover();
    let (a, b) = (config.a(), config.b());
    let mut current = ParamBox::root(cover);
    let mut path = Vec::new();
    for _ in 0..max_depth {
        let children = child_boxes(cover, &current, None, q_max, n_max)?;
        let mut inside: Vec<ParamBox> = children.boxes.into_iter().filter(|c| c.rect.contains(a, b)).collect();
        if inside.is_empty() {
            if let Some(hull) = children.truncated {
                if hull.contains(a, b) {
                    return Err(Error::TruncationLimit(format!(
                        "({}, {}) lies beyond the first {} boxes of the family in {}",
                        fmt_rational(a),
                        fmt_rational(b),
                        n_max + 1,
                        current.full_label()
                    )));
                }
            }
            let verdict = if is_chaotic(config)? { Verdict::Chaotic } else { Verdict::NonChaotic };
            return Ok(Descent { path, verdict });
        }
        // Overlapping siblings meet in a box of class A; prefer it, then the smaller box.
        inside.sort_by(|x, y| {
            (x.class != ClassLabel::A)
                .cmp(&(y.class != ClassLabel::A))
                .then((x.rect.width() * x.rect.height()).cmp(&(y.rect.width() * y.rect.height())))
        });
        current = inside.swap_remove(0);
        path.push(current.clone());
    }
    Ok(Descent { path, verdict: Verdict::Undetermined })
}

/// Rotation number of the circle map of a class-A plateau map on the curve
/// `F²(a) = F²(b)`, `F(b) <= c <= F(a)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RotationData {
    #[serde(with = "crate::rational::serde_pq")]
    pub lo: Rational,
    #[serde(with = "crate::rational::serde_pq")]
    pub hi: Rational,
    /// The orbit closed up, so `lo == hi` is the rotation number.
    pub exact: bool,
    pub iterates: usize,
}

/// Counts visits to the right of `c` along the orbit of `F(a)`; exact when the orbit is
/// seen to be periodic within `2n` iterates, else an enclosure of width `1/n`.
pub fn rotation_data(config: &PlateauConfig, n: usize) -> Result<RotationData> {
    if config.class() != ClassLabel::A {
        return Err(Error::precondition("rotation data needs a class-A map"));
    }
    if n == 0 {
        return Err(Error::precondition("iterate count must be positive"));
    }
    let c = config.c();
    let fa = config.evaluate(config.a(), Side::Minus)?;
    let fb = config.evaluate(config.b(), Side::Plus)?;
    let on_curve = &fb <= c
        && c <= &fa
        && config.evaluate(&fa, Side::Minus)? == config.evaluate(&fb, Side::Minus)?;
    if !on_curve {
        return Err(Error::precondition(format!("{config} is not on the circle-map curve")));
    }
    let mut seen = std::collections::HashMap::new();
    let mut ones = Vec::with_capacity(2 * n + 1);
    let mut x = fa;
    let mut count = 0usize;
    for i in 0..2 * n {
        if let Some(&start) = seen.get(&x) {
            let cycle_ones = count - ones[start];
            let len = i - start;
            let rho = rat(cycle_ones as i64, len as i64);
            return Ok(RotationData { lo: rho.clone(), hi: rho, exact: true, iterates: i });
        }
        seen.insert(x.clone(), i);
        ones.push(count);
        if &x > c {
            count += 1;
        }
        x = config.evaluate(&x, Side::Minus)?;
    }
    let m = (2 * n) as i64;
    let k = count as i64;
    Ok(RotationData {
        lo: rat((k - 1).max(0), m),
        hi: rat((k + 1).min(m), m),
        exact: false,
        iterates: 2 * n,
    })
}
