//! The boundary of chaos: bisection along lines `a + b = c`, the anharmonic
//! accumulation points, heteroclinic segments and point classification.

use serde::Serialize;

use crate::covers::{DoubleCover, PlateauConfig};
use crate::error::{Error, Result};
use crate::markov::{build_markov, is_chaotic};
use crate::parallel::par_map;
use crate::rational::{dyadic_between, fmt_rational, int, rat, Rational};
use crate::renorm::{child_boxes, descend, farey, rotation_data, Descent, ParamBox, Rect, Verdict};
use crate::symbolic::{sturmian_bounds, ClassLabel, KneadingInvariant, SymbolSequence, Word};

/// `α(c)` bracketed on the line `a + b = c`: zero entropy at `a_lo`, positive at `a_hi`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryPoint {
    #[serde(with = "crate::rational::serde_pq")]
    pub c: Rational,
    #[serde(with = "crate::rational::serde_pq")]
    pub a_lo: Rational,
    #[serde(with = "crate::rational::serde_pq")]
    pub a_hi: Rational,
}

impl BoundaryPoint {
    pub fn width(&self) -> Rational {
        &self.a_hi - &self.a_lo
    }
}

/// Outcome on one line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum LineResult {
    Crossing(BoundaryPoint),
    /// Zero entropy on the whole line; `a_max` is its right end.
    AllNonChaotic {
        #[serde(with = "crate::rational::serde_pq")]
        c: Rational,
        #[serde(with = "crate::rational::serde_pq")]
        a_max: Rational,
    },
    /// Positive entropy on the whole line; `a_min` is its left end.
    AllChaotic {
        #[serde(with = "crate::rational::serde_pq")]
        c: Rational,
        #[serde(with = "crate::rational::serde_pq")]
        a_min: Rational,
    },
}

impl LineResult {
    pub fn c(&self) -> &Rational {
        match self {
            LineResult::Crossing(p) => &p.c,
            LineResult::AllNonChaotic { c, .. } | LineResult::AllChaotic { c, .. } => c,
        }
    }

    /// Enclosure of `α(c) = max{a : h_top = 0}`; `None` when no zero-entropy point exists.
    pub fn alpha_enclosure(&self) -> Option<(Rational, Rational)> {
        match self {
            LineResult::Crossing(p) => Some((p.a_lo.clone(), p.a_hi.clone())),
            LineResult::AllNonChaotic { a_max, .. } => Some((a_max.clone(), a_max.clone())),
            LineResult::AllChaotic { .. } => None,
        }
    }
}

/// The part `[a_min, a_max]` of the line `a + b = c` inside the parameter square.
pub fn line_extent(cover: &DoubleCover, c: &Rational) -> Result<(Rational, Rational)> {
    let lo = cover.a_m().clone().max(c - cover.b_m());
    let hi = cover.a_max().clone().min(c - cover.b_max());
    if lo > hi {
        return Err(Error::precondition(format!("the line a+b={} misses the parameter square", fmt_rational(c))));
    }
    Ok((lo, hi))
}

fn chaotic_at(cover: &DoubleCover, a: &Rational, b: &Rational) -> Result<bool> {
    is_chaotic(&PlateauConfig::new(cover.clone(), a.clone(), b.clone())?)
}

/// Bisection in `a` along `a + b = c` with dyadic probes and the exact decider.
pub fn alpha_of_c(cover: &DoubleCover, c: &Rational, tol: &Rational) -> Result<LineResult> {
    if *tol <= int(0) {
        return Err(Error::precondition("tolerance must be positive"));
    }
    let (lo, hi) = line_extent(cover, c)?;
    if !chaotic_at(cover, &hi, &(c - &hi))? {
        return Ok(LineResult::AllNonChaotic { c: c.clone(), a_max: hi });
    }
    if chaotic_at(cover, &lo, &(c - &lo))? {
        return Ok(LineResult::AllChaotic { c: c.clone(), a_min: lo });
    }
    let (mut a_lo, mut a_hi) = (lo, hi);
    while &a_hi - &a_lo > *tol {
        let m = dyadic_between(&a_lo, &a_hi);
        if chaotic_at(cover, &m, &(c - &m))? {
            a_hi = m;
        } else {
            a_lo = m;
        }
    }
    Ok(LineResult::Crossing(BoundaryPoint { c: c.clone(), a_lo, a_hi }))
}

/// `alpha_of_c` at `steps` equally spaced values in `[c_lo, c_hi]`, in parallel.
pub fn trace(cover: &DoubleCover, c_lo: &Rational, c_hi: &Rational, steps: usize, tol: &Rational) -> Result<Vec<LineResult>> {
    if c_lo >= c_hi || steps < 2 {
        return Err(Error::precondition("trace needs c_lo < c_hi and at least two steps"));
    }
    let step = (c_hi - c_lo) / int(steps as i64 - 1);
    let cs: Vec<Rational> = (0..steps).map(|k| c_lo + &step * int(k as i64)).collect();
    par_map(cs, |c| alpha_of_c(cover, &c, tol)).into_iter().collect()
}

/// Continuity bound between consecutive line results (`c0 < c1`):
/// `α(c0) <= α(c1) <= α(c0) + (c1 - c0)` up to the enclosure widths.
pub fn continuity_holds(first: &LineResult, second: &LineResult) -> bool {
    match (first.alpha_enclosure(), second.alpha_enclosure()) {
        (Some((l0, h0)), Some((l1, h1))) => {
            let dc = second.c() - first.c();
            h1 >= l0 && l1 <= h0 + dc
        }
        _ => true,
    }
}

/// Bisection in `a` at fixed `b` with the exact decider.
pub fn bisect_a(cover: &DoubleCover, b: &Rational, tol: &Rational) -> Result<(Rational, Rational)> {
    let (mut lo, mut hi) = (cover.a_m().clone(), cover.a_max().clone());
    if chaotic_at(cover, &lo, b)? || !chaotic_at(cover, &hi, b)? {
        return Err(Error::precondition(format!("no crossing on b = {}", fmt_rational(b))));
    }
    while &hi - &lo > *tol {
        let m = dyadic_between(&lo, &hi);
        if chaotic_at(cover, &m, b)? {
            hi = m;
        } else {
            lo = m;
        }
    }
    Ok((lo, hi))
}

/// Nested boxes of the anharmonic cascade containing the horizontal line at `b`.
#[derive(Clone, Debug, Serialize)]
pub struct AnharmonicEnclosure {
    #[serde(with = "crate::rational::serde_pq")]
    pub a_lo: Rational,
    #[serde(with = "crate::rational::serde_pq")]
    pub a_hi: Rational,
    /// One box per level, outermost first.
    pub levels: Vec<ParamBox>,
}

/// The two relative boxes the cascade alternates between, starting below a box of `class`.
fn cascade_steps(class: ClassLabel) -> Result<[(ClassLabel, &'static str, &'static str); 2]> {
    match class {
        ClassLabel::C => Ok([(ClassLabel::B, "00", "1"), (ClassLabel::C, "010", "1")]),
        ClassLabel::B => Ok([(ClassLabel::C, "010", "1"), (ClassLabel::B, "00", "1")]),
        other => Err(Error::precondition(format!("no anharmonic cascade for class {other}"))),
    }
}

/// Encloses `a_C` (class C) or `a_B` (class B) by the `a`-extents of the alternating
/// `B(00,1)` / `C(010,1)` boxes, stopping once the width is at most `tol`.
///
/// Every level must contain `b` in its `b`-range, otherwise the cascade does not pass
/// over `b` and the call fails with a precondition error naming the level.
pub fn anharmonic_point(cover: &DoubleCover, b: &Rational, tol: &Rational) -> Result<AnharmonicEnclosure> {
    let steps = cascade_steps(cover.class())?;
    if *tol <= int(0) {
        return Err(Error::precondition("tolerance must be positive"));
    }
    let x_star = cover.right_fixed_point()?;
    if b < cover.b_max() || *b > x_star {
        return Err(Error::precondition(format!(
            "b = {} outside [b_M, x*] = [{}, {}]",
            fmt_rational(b),
            fmt_rational(cover.b_max()),
            fmt_rational(&x_star)
        )));
    }
    let mut current = ParamBox::root(cover);
    let mut levels = Vec::new();
    for k in 0.. {
        let (class, m, p) = steps[k % 2];
        let children = child_boxes(cover, &current, None, 2, 0)?;
        let next = children
            .boxes
            .into_iter()
            .find(|c| c.class == class && c.relative_minus.to_string() == m && c.relative_plus.to_string() == p)
            .ok_or_else(|| Error::oracle(format!("{} has no child {class}({m},{p})", current.full_label())))?;
        if *b < next.rect.b_lo || *b > next.rect.b_hi {
            return Err(Error::precondition(format!(
                "b = {} leaves the cascade at level {}: {} has b-range [{}, {}]",
                fmt_rational(b),
                k + 1,
                next.full_label(),
                fmt_rational(&next.rect.b_lo),
                fmt_rational(&next.rect.b_hi)
            )));
        }
        current = next;
        levels.push(current.clone());
        if current.rect.width() <= *tol {
            break;
        }
    }
    Ok(AnharmonicEnclosure { a_lo: current.rect.a_lo.clone(), a_hi: current.rect.a_hi.clone(), levels })
}

/// Periods among `periods` for which the Markov graph of `config` carries an orbit of
/// exactly that least period.
pub fn periodic_orbits(config: &PlateauConfig, periods: &[usize]) -> Result<Vec<(usize, bool)>> {
    let sys = build_markov(config)?;
    Ok(periods.iter().map(|&p| (p, sys.primitive_periodic_count(p) > 0.into())).collect())
}

/// Which coordinate a heteroclinic segment holds fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Axis {
    A,
    B,
}

/// A parameter segment on which the kneading invariant is constant and of one of the
/// four heteroclinic forms
/// `1: (v^∞, uv^∞)`, `2: (vuv^∞, uv^∞)`, `3: (vu^∞, u^∞)`, `4: (vu^∞, uvu^∞)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Segment {
    pub form: u8,
    pub pinned: Axis,
    #[serde(with = "crate::rational::serde_pq")]
    pub value: Rational,
    #[serde(with = "crate::rational::serde_pq")]
    pub lo: Rational,
    #[serde(with = "crate::rational::serde_pq")]
    pub hi: Rational,
    #[serde(skip)]
    pub kneading: KneadingInvariant,
    pub k_minus: String,
    pub k_plus: String,
    /// Forms 2 and 4 are open at the point where they meet forms 1 and 3; that endpoint
    /// carries the neighbour's invariant, recorded here as `(endpoint, invariant)`.
    #[serde(skip)]
    pub open_end: Option<((Rational, Rational), KneadingInvariant)>,
}

impl Segment {
    pub fn endpoints(&self) -> [(Rational, Rational); 2] {
        match self.pinned {
            Axis::A => [(self.value.clone(), self.lo.clone()), (self.value.clone(), self.hi.clone())],
            Axis::B => [(self.lo.clone(), self.value.clone()), (self.hi.clone(), self.value.clone())],
        }
    }

    pub fn contains(&self, a: &Rational, b: &Rational) -> bool {
        let (fixed, free) = match self.pinned {
            Axis::A => (a, b),
            Axis::B => (b, a),
        };
        let open = matches!(&self.open_end, Some((pt, _)) if &pt.0 == a && &pt.1 == b);
        *fixed == self.value && &self.lo <= free && free <= &self.hi && !open
    }

    /// `count` evenly spaced points, endpoints included.
    pub fn points(&self, count: usize) -> Vec<(Rational, Rational)> {
        let n = count.max(2) - 1;
        (0..=n)
            .map(|k| {
                let t = &self.lo + (&self.hi - &self.lo) * rat(k as i64, n as i64);
                match self.pinned {
                    Axis::A => (self.value.clone(), t),
                    Axis::B => (t, self.value.clone()),
                }
            })
            .collect()
    }
}

fn seq(pre: &Word, period: &Word) -> SymbolSequence {
    SymbolSequence::periodic(pre.clone(), period.clone()).expect("nonempty period")
}

/// The heteroclinic segment of `form` for rotation number `p/q` inside the class-A box
/// `bx`.
///
/// `v` and `u` are `r-_{p/q}` and `r+_{p/q}` composed through the box words; `p/q = 0/1`
/// stands for the box's own edge points (`v = ω-`, `u = ω+`), where only forms 2 and 4
/// are proper and give zero-length segments. Every returned segment has had its kneading
/// invariant checked at five points.
pub fn heteroclinic_segment(cover: &DoubleCover, bx: &ParamBox, p: u64, q: u64, form: u8) -> Result<Segment> {
    if bx.class != ClassLabel::A {
        return Err(Error::precondition(format!("{} is not a class-A box", bx.full_label())));
    }
    if !(1..=4).contains(&form) {
        return Err(Error::precondition(format!("form must be 1..4, got {form}")));
    }
    let (v, u) = if p == 0 && q == 1 {
        if form == 1 || form == 3 {
            return Err(Error::precondition("p/q = 0/1 only has forms 2 and 4"));
        }
        (bx.omega_minus.clone(), bx.omega_plus.clone())
    } else {
        let s = sturmian_bounds(p, q)?;
        (bx.compose_word(&s.r_minus), bx.compose_word(&s.r_plus))
    };
    let e = Word::empty();
    let al = |s: &SymbolSequence| cover.address(s);
    let uv = seq(&u, &v);
    let vu = seq(&v, &u);
    // Forms 1 and 2 (3 and 4) meet where the orbit of a (of b) reaches c after |v| (|u|)
    // steps: before that it falls back into its own plateau, after it into the other one.
    let split_a = cover.inverse_word(&v).apply(cover.c());
    let split_b = cover.inverse_word(&u).apply(cover.c());
    let edge_point = p == 0 && q == 1;
    let split_value = match form {
        // At 0/1 the segments collapse onto the box's edge anchors.
        2 if edge_point => al(&seq(&v.concat(&u), &v))?,
        4 if edge_point => al(&seq(&u.concat(&v), &u))?,
        1 | 2 => split_a.clone(),
        _ => split_b.clone(),
    };
    let (pinned, value, lo, hi, km, kp) = match form {
        1 => (Axis::B, al(&uv)?, al(&seq(&e, &v))?, split_a, seq(&e, &v), uv.clone()),
        2 => {
            let vuv = seq(&v.concat(&u), &v);
            (Axis::B, al(&uv)?, split_value.clone(), al(&vuv)?, vuv, uv.clone())
        }
        3 => (Axis::A, al(&vu)?, split_b, al(&seq(&e, &u))?, vu.clone(), seq(&e, &u)),
        _ => {
            let uvu = seq(&u.concat(&v), &u);
            (Axis::A, al(&vu)?, al(&uvu)?, split_value.clone(), vu.clone(), uvu)
        }
    };
    let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let kneading = KneadingInvariant::new(km, kp)?;
    let open_end = match form {
        2 | 4 if !edge_point => {
            let neighbour = if form == 2 {
                KneadingInvariant::new(seq(&e, &v), uv.clone())?
            } else {
                KneadingInvariant::new(vu.clone(), seq(&e, &u))?
            };
            let point = match pinned {
                Axis::A => (value.clone(), split_value),
                Axis::B => (split_value, value.clone()),
            };
            Some((point, neighbour))
        }
        _ => None,
    };
    let segment = Segment {
        open_end,
        form,
        pinned,
        value,
        lo,
        hi,
        k_minus: kneading.minus.to_string(),
        k_plus: kneading.plus.to_string(),
        kneading,
    };
    verify_segment(cover, &segment, 5)?;
    Ok(segment)
}

/// Checks the stated kneading invariant at `count` points of the segment.
pub fn verify_segment(cover: &DoubleCover, segment: &Segment, count: usize) -> Result<()> {
    for (a, b) in segment.points(count) {
        let cfg = PlateauConfig::new(cover.clone(), a.clone(), b.clone())?;
        let k = cfg.exact_kneading()?;
        let expected = match &segment.open_end {
            Some((pt, neighbour)) if pt.0 == a && pt.1 == b => neighbour,
            _ => &segment.kneading,
        };
        if k != *expected {
            return Err(Error::oracle(format!(
                "form {} segment: kneading at ({}, {}) is {k}, expected {}",
                segment.form,
                fmt_rational(&a),
                fmt_rational(&b),
                expected
            )));
        }
    }
    Ok(())
}

/// Classification of a boundary parameter.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind")]
pub enum BoundaryClass {
    HeteroclinicSegment { chain: Vec<String>, p: u64, q: u64, segment: Box<Segment> },
    AnharmonicPoint { chain: Vec<String>, cascade: ClassLabel },
    InfiniteRenorm { prefix: Vec<String> },
    IrrationalRotation {
        #[serde(with = "crate::rational::serde_pq")]
        lo: Rational,
        #[serde(with = "crate::rational::serde_pq")]
        hi: Rational,
    },
    Undetermined { depth: usize },
}

impl BoundaryClass {
    pub fn name(&self) -> &'static str {
        match self {
            BoundaryClass::HeteroclinicSegment { .. } => "HeteroclinicSegment",
            BoundaryClass::AnharmonicPoint { .. } => "AnharmonicPoint",
            BoundaryClass::InfiniteRenorm { .. } => "InfiniteRenorm",
            BoundaryClass::IrrationalRotation { .. } => "IrrationalRotation",
            BoundaryClass::Undetermined { .. } => "Undetermined",
        }
    }
}

/// Minimum number of trailing alternations that identifies a cascade tail.
const CASCADE_TAIL: usize = 4;

fn cascade_tail(descent: &Descent, root: ClassLabel) -> Option<ClassLabel> {
    let labels = descent.labels();
    let pairs = [["B(00,1)", "C(010,1)"], ["D(0,11)", "C(0,101)"]];
    for pair in pairs {
        let tail = labels.iter().rev().take_while(|l| pair.contains(&l.as_str())).count();
        if tail < CASCADE_TAIL {
            continue;
        }
        let start = labels.len() - tail;
        let alternating = labels[start..].windows(2).all(|w| w[0] != w[1]);
        if alternating {
            let parent = if start == 0 { root } else { descent.path[start - 1].class };
            return Some(parent);
        }
    }
    None
}

/// Classifies `(a, b)` by descending the box tree.
///
/// A tail alternating between the two cascade boxes gives an anharmonic point; a point
/// on one of the heteroclinic segments of a class-A box on the path gives that segment;
/// a descent that is still inside boxes at `max_depth` is an infinite renormalisation
/// prefix.
pub fn classify_point(config: &PlateauConfig, max_depth: usize, q_max: u64, n_max: usize) -> Result<BoundaryClass> {
    let cover = config.cover();
    let descent = descend(config, max_depth, q_max, n_max)?;
    let labels = descent.labels();
    if let Some(cascade) = cascade_tail(&descent, cover.class()) {
        return Ok(BoundaryClass::AnharmonicPoint { chain: labels, cascade });
    }
    let mut a_boxes: Vec<(usize, ParamBox)> = Vec::new();
    if cover.class() == ClassLabel::A {
        a_boxes.push((0, ParamBox::root(cover)));
    }
    for (i, bx) in descent.path.iter().enumerate() {
        if bx.class == ClassLabel::A {
            a_boxes.push((i + 1, bx.clone()));
        }
    }
    let (a, b) = (config.a(), config.b());
    for (len, bx) in a_boxes.iter().rev() {
        let mut candidates = vec![(0u64, 1u64)];
        candidates.extend(farey(q_max));
        for &(p, q) in &candidates {
            for form in 1..=4u8 {
                if p == 0 && (form == 1 || form == 3) {
                    continue;
                }
                match heteroclinic_segment(cover, bx, p, q, form) {
                    Ok(seg) if seg.contains(a, b) => {
                        return Ok(BoundaryClass::HeteroclinicSegment {
                            chain: labels[..*len].to_vec(),
                            p,
                            q,
                            segment: Box::new(seg),
                        })
                    }
                    Ok(_) => {}
                    Err(Error::Oracle(msg)) => return Err(Error::Oracle(msg)),
                    Err(_) => {}
                }
            }
        }
    }
    if cover.class() == ClassLabel::A {
        if let Ok(rd) = rotation_data(config, 4096) {
            if !rd.exact {
                return Ok(BoundaryClass::IrrationalRotation { lo: rd.lo, hi: rd.hi });
            }
        }
    }
    match descent.verdict {
        Verdict::Undetermined => Ok(BoundaryClass::InfiniteRenorm { prefix: labels }),
        _ => Ok(BoundaryClass::Undetermined { depth: descent.path.len() }),
    }
}

/// Rectangle of the depth-1 boxes below the root, with the cut-off hull when present.
pub fn depth_one_union(cover: &DoubleCover, q_max: u64, n_max: usize) -> Result<Vec<Rect>> {
    let children = child_boxes(cover, &ParamBox::root(cover), None, q_max, n_max)?;
    let mut rects: Vec<Rect> = children.boxes.into_iter().map(|b| b.rect).collect();
    rects.extend(children.truncated);
    Ok(rects)
}
