//! CSV rows and SVG drawings. Rationals are written exactly as `p/q`; floats only
//! appear in estimate columns and SVG coordinates (12 significant digits).

use std::fmt::Write as _;

use chaos_boundary::rational::{fmt_rational, to_f64};
use chaos_boundary::{ClassLabel, DoubleCover, Rational, Rect};

pub const VIEWPORT: f64 = 1000.0;

/// `x` with 12 significant digits and no trailing zeros.
pub fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() { "0".into() } else { x.to_string() };
    }
    let decimals = (11 - x.abs().log10().floor() as i32).max(0) as usize;
    let s = format!("{x:.decimals$}");
    let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.') } else { &s };
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

pub fn csv_row(fields: &[String]) -> String {
    let quoted: Vec<String> = fields
        .iter()
        .map(|f| if f.contains([',', '"', '\n']) { format!("\"{}\"", f.replace('"', "\"\"")) } else { f.clone() })
        .collect();
    quoted.join(",") + "\n"
}

pub fn pq(x: &Rational) -> String {
    fmt_rational(x)
}

/// Parameter square of a cover mapped onto the viewport, `b` growing upwards.
pub struct Plane {
    a0: f64,
    a1: f64,
    b0: f64,
    b1: f64,
}

impl Plane {
    pub fn new(cover: &DoubleCover) -> Self {
        Plane {
            a0: to_f64(cover.a_m()),
            a1: to_f64(cover.a_max()),
            b0: to_f64(cover.b_max()),
            b1: to_f64(cover.b_m()),
        }
    }

    pub fn x(&self, a: &Rational) -> f64 {
        (to_f64(a) - self.a0) / (self.a1 - self.a0) * VIEWPORT
    }

    pub fn y(&self, b: &Rational) -> f64 {
        (self.b1 - to_f64(b)) / (self.b1 - self.b0) * VIEWPORT
    }
}

fn fill(class: ClassLabel) -> &'static str {
    match class {
        ClassLabel::A => "#4e79a7",
        ClassLabel::B => "#f28e2b",
        ClassLabel::C => "#59a14f",
        ClassLabel::D => "#e15759",
    }
}

pub struct Svg {
    body: String,
    plane: Plane,
}

impl Svg {
    pub fn new(cover: &DoubleCover) -> Self {
        let mut svg = Svg { body: String::new(), plane: Plane::new(cover) };
        let v = sig12(VIEWPORT);
        let _ = writeln!(svg.body, r#"<rect x="0" y="0" width="{v}" height="{v}" fill="none" stroke="black"/>"#);
        svg
    }

    pub fn rect(&mut self, r: &Rect, class: ClassLabel, title: &str) {
        let p = &self.plane;
        let (x0, x1) = (p.x(&r.a_lo), p.x(&r.a_hi));
        let (y0, y1) = (p.y(&r.b_hi), p.y(&r.b_lo));
        let _ = writeln!(
            self.body,
            r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{}" fill-opacity="0.25" stroke="{}" stroke-width="1"><title>{title}</title></rect>"#,
            sig12(x0),
            sig12(y0),
            sig12(x1 - x0),
            sig12(y1 - y0),
            fill(class),
            fill(class)
        );
    }

    pub fn polyline(&mut self, points: &[(Rational, Rational)]) {
        let p = &self.plane;
        let pts: Vec<String> = points.iter().map(|(a, b)| format!("{},{}", sig12(p.x(a)), sig12(p.y(b)))).collect();
        let _ = writeln!(self.body, r#"<polyline points="{}" fill="none" stroke="black" stroke-width="2"/>"#, pts.join(" "));
    }

    pub fn finish(self) -> String {
        let v = sig12(VIEWPORT);
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {v} {v}\" width=\"{v}\" height=\"{v}\">\n{}</svg>\n",
            self.body
        )
    }
}
