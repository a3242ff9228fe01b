use std::fmt::Write as _;

use chaos_boundary::boundary::{self, LineResult};
use chaos_boundary::markov::{cylinder_dimension, DimensionResult};
use chaos_boundary::rational::int;
use chaos_boundary::renorm::BoxTree;
use chaos_boundary::symbolic::{self, KneadingInvariant};
use chaos_boundary::{
    anharmonic_point, build_markov, canonical_cover, classify_point, descend, entropy, is_chaotic,
    survivor_dimension, DoubleCover, PlateauConfig, Rational,
};
use serde::Serialize;
use serde_json::json;

use crate::args::{Command, CoverArgs, Format, Limits, Point};
use crate::emit::{csv_row, pq, sig12, Svg};
use crate::error::CliError;

/// Rendered output. `side` is an extra file written next to `--out` (SVG exports carry
/// their JSON twin).
pub struct Output {
    pub body: String,
    pub side: Option<(&'static str, String)>,
}

impl From<String> for Output {
    fn from(body: String) -> Self {
        Output { body, side: None }
    }
}

type Res = Result<Output, CliError>;

pub fn run(command: &Command, format: Option<Format>) -> Res {
    match command {
        Command::Order { class, s, t } => {
            let c = symbolic::compare(*class, s, t);
            one_liner(format, c.to_string(), json!({ "class": class.to_string(), "result": c.to_string() }))
        }
        Command::Compat { class, minus, plus } => {
            let k = KneadingInvariant::new(minus.clone(), plus.clone())?;
            let ok = symbolic::is_compatible_pair(*class, &k);
            one_liner(format, ok.to_string(), json!({ "class": class.to_string(), "compatible": ok }))
        }
        Command::Words { pq: (p, q) } => words(*p, *q, format),
        Command::Cascade { class, n } => cascade(*class, *n, format),
        Command::Entropy(point) => entropy_cmd(point, format),
        Command::Dimension { point, n } => dimension(point, *n, format),
        Command::Boxes { cover, depth, limits } => boxes(cover, *depth, *limits, format),
        Command::Trace { cover, cmin, cmax, steps, tol } => trace(cover, cmin, cmax, *steps, tol, format),
        Command::Classify { point, depth, limits } => classify(point, *depth, *limits, format),
        Command::Anharmonic { cover, b, tol } => anharmonic(cover, b, tol, format),
    }
}

fn only(format: Option<Format>, default: Format, allowed: &[Format]) -> Result<Format, CliError> {
    let f = format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(CliError::Usage(format!("format {f:?} is not available for this command")))
    }
}

fn one_liner(format: Option<Format>, text: String, value: serde_json::Value) -> Res {
    match only(format, Format::Text, &[Format::Text, Format::Json])? {
        Format::Json => Ok(pretty(&value)?.into()),
        _ => Ok((text + "\n").into()),
    }
}

fn pretty<T: Serialize>(value: &T) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn cover_of(args: &CoverArgs) -> Result<DoubleCover, CliError> {
    Ok(canonical_cover(args.class, args.lambda)?)
}

fn config_of(point: &Point) -> Result<PlateauConfig, CliError> {
    Ok(PlateauConfig::new(cover_of(&point.cover)?, point.a.clone(), point.b.clone())?)
}

fn words(p: u64, q: u64, format: Option<Format>) -> Res {
    let w = symbolic::sturmian_bounds(p, q)?;
    match only(format, Format::Text, &[Format::Text, Format::Json])? {
        Format::Json => Ok(pretty(&json!({
            "p": p, "q": q,
            "omega": w.omega.to_string(),
            "r_minus": w.r_minus.to_string(),
            "r_plus": w.r_plus.to_string(),
            "max_shift": w.max_shift.to_string(),
            "min_shift": w.min_shift.to_string(),
        }))?
        .into()),
        _ => Ok(format!(
            "ω=({})\nr−={}\nr+={}\nM=({})\nm=({})\n",
            w.omega, w.r_minus, w.r_plus, w.max_shift, w.min_shift
        )
        .into()),
    }
}

fn cascade(class: chaos_boundary::ClassLabel, n: usize, format: Option<Format>) -> Res {
    let periods = symbolic::cascade_periods(class, n)?;
    let longest: usize = periods.last().and_then(|p| p.try_into().ok()).unwrap_or(1);
    let prefix = symbolic::anharmonic_prefix(class, longest.clamp(1, 4096))?;
    let listed: Vec<String> = periods.iter().map(ToString::to_string).collect();
    match only(format, Format::Text, &[Format::Text, Format::Json])? {
        Format::Json => Ok(pretty(&json!({
            "class": class.to_string(),
            "periods": listed,
            "prefix": prefix.to_string(),
        }))?
        .into()),
        _ => Ok(format!("{}\nprefix {}\n", listed.join(" "), prefix).into()),
    }
}

fn entropy_cmd(point: &Point, format: Option<Format>) -> Res {
    let config = config_of(point)?;
    let sys = build_markov(&config)?;
    let h = entropy(&sys);
    let verdict = if h.positive { "positive" } else { "zero" };
    match only(format, Format::Text, &[Format::Text, Format::Json])? {
        Format::Json => Ok(pretty(&json!({
            "config": config.to_string(),
            "verdict": verdict,
            "entropy": h,
            "partition": sys.partition_endpoints(),
        }))?
        .into()),
        _ => Ok(format!(
            "{verdict}\nh = {} in [{}, {}]\nmarkov states {}\n",
            sig12(h.value),
            sig12(h.lower),
            sig12(h.upper),
            h.matrix_size
        )
        .into()),
    }
}

fn dimension_line(d: &DimensionResult) -> String {
    match d.n {
        Some(n) => format!("cylinder_count n={n} {}", sig12(d.value)),
        None => format!("markov_exact {} in [{}, {}]", sig12(d.value), sig12(d.lower), sig12(d.upper)),
    }
}

fn dimension(point: &Point, n: Option<usize>, format: Option<Format>) -> Res {
    let cover = cover_of(&point.cover)?;
    let exact = survivor_dimension(&cover, &point.a, &point.b)?;
    let estimate = n.map(|n| cylinder_dimension(&cover, &point.a, &point.b, n)).transpose()?;
    match only(format, Format::Text, &[Format::Text, Format::Json])? {
        Format::Json => Ok(pretty(&json!({ "exact": exact, "estimate": estimate }))?.into()),
        _ => {
            let mut s = dimension_line(&exact) + "\n";
            if let Some(e) = &estimate {
                s += &(dimension_line(e) + "\n");
            }
            Ok(s.into())
        }
    }
}

#[derive(Serialize)]
struct BoxRow {
    label: String,
    word_label: String,
    depth: usize,
    parent: Option<usize>,
    a_lo: String,
    a_hi: String,
    b_lo: String,
    b_hi: String,
}

fn box_json(tree: &BoxTree, lambda: u32, limits: Limits) -> Result<String, CliError> {
    let rows: Vec<BoxRow> = tree
        .export_order()
        .into_iter()
        .map(|bx| BoxRow {
            label: bx.label(),
            word_label: bx.full_label(),
            depth: bx.depth,
            parent: bx.parent,
            a_lo: pq(&bx.rect.a_lo),
            a_hi: pq(&bx.rect.a_hi),
            b_lo: pq(&bx.rect.b_lo),
            b_hi: pq(&bx.rect.b_hi),
        })
        .collect();
    pretty(&json!({
        "class": tree.class.to_string(),
        "lambda": lambda,
        "q_max": limits.q_max,
        "n_max": limits.n_max,
        "level_counts": tree.level_counts,
        "boxes": rows,
        "truncations": tree.truncations,
    }))
}

fn boxes(args: &CoverArgs, depth: usize, limits: Limits, format: Option<Format>) -> Res {
    let cover = cover_of(args)?;
    let tree = chaos_boundary::box_tree(&cover, depth, limits.q_max, limits.n_max)?;
    match only(format, Format::Json, &[Format::Json, Format::Csv, Format::Svg])? {
        Format::Csv => {
            let mut s = csv_row(&["depth", "label", "word_label", "a_lo", "a_hi", "b_lo", "b_hi"].map(String::from));
            for bx in tree.export_order() {
                s += &csv_row(&[
                    bx.depth.to_string(),
                    bx.label(),
                    bx.full_label(),
                    pq(&bx.rect.a_lo),
                    pq(&bx.rect.a_hi),
                    pq(&bx.rect.b_lo),
                    pq(&bx.rect.b_hi),
                ]);
            }
            Ok(s.into())
        }
        Format::Svg => {
            let mut svg = Svg::new(&cover);
            for bx in tree.export_order().into_iter().filter(|b| b.depth > 0) {
                svg.rect(&bx.rect, bx.class, &format!("{} {}", bx.full_label(), bx.rect));
            }
            Ok(Output { body: svg.finish(), side: Some(("json", box_json(&tree, args.lambda, limits)?)) })
        }
        _ => Ok(box_json(&tree, args.lambda, limits)?.into()),
    }
}

/// One traced line with its endpoint verdicts re-decided exactly.
struct TraceRow {
    line: LineResult,
    checks: &'static str,
}

fn check_line(cover: &DoubleCover, line: LineResult) -> Result<TraceRow, CliError> {
    let chaotic = |a: &Rational| -> Result<bool, CliError> {
        let b = line.c() - a;
        Ok(is_chaotic(&PlateauConfig::new(cover.clone(), a.clone(), b)?)?)
    };
    let checks = match &line {
        LineResult::Crossing(p) => {
            if chaotic(&p.a_lo)? || !chaotic(&p.a_hi)? {
                return Err(chaos_boundary::Error::oracle(format!(
                    "bracket at c = {} does not straddle the boundary",
                    pq(&p.c)
                ))
                .into());
            }
            "zero|positive"
        }
        LineResult::AllNonChaotic { .. } => "zero",
        LineResult::AllChaotic { .. } => "positive",
    };
    Ok(TraceRow { line, checks })
}

fn trace(args: &CoverArgs, cmin: &Rational, cmax: &Rational, steps: usize, tol: &Rational, format: Option<Format>) -> Res {
    if *tol <= int(0) {
        return Err(chaos_boundary::Error::precondition("--tol must be positive").into());
    }
    let cover = cover_of(args)?;
    let lines = boundary::trace(&cover, cmin, cmax, steps, tol)?;
    let rows: Vec<TraceRow> = chaos_boundary::parallel::par_map(lines, |l| check_line(&cover, l))
        .into_iter()
        .collect::<Result<_, _>>()?;
    let bracket = |r: &TraceRow| -> [String; 5] {
        let c = r.line.c();
        match r.line.alpha_enclosure() {
            Some((lo, hi)) => [pq(c), pq(&lo), pq(&hi), pq(&(c - &hi)), pq(&(c - &lo))],
            None => [pq(c), String::new(), String::new(), String::new(), String::new()],
        }
    };
    match only(format, Format::Csv, &[Format::Csv, Format::Json, Format::Svg])? {
        Format::Json => {
            let lines: Vec<_> = rows.iter().map(|r| json!({ "line": r.line, "verdict_checks": r.checks })).collect();
            Ok(pretty(&lines)?.into())
        }
        Format::Svg => {
            let mut svg = Svg::new(&cover);
            let points: Vec<(Rational, Rational)> = rows
                .iter()
                .filter_map(|r| r.line.alpha_enclosure().map(|(lo, hi)| {
                    let a = chaos_boundary::rational::midpoint(&lo, &hi);
                    let b = r.line.c() - &a;
                    (a, b)
                }))
                .collect();
            svg.polyline(&points);
            Ok(svg.finish().into())
        }
        _ => {
            let mut s = csv_row(&["c", "a_lo", "a_hi", "b_lo", "b_hi", "verdict_checks"].map(String::from));
            for r in &rows {
                let mut fields = bracket(r).to_vec();
                fields.push(r.checks.to_string());
                s += &csv_row(&fields);
            }
            Ok(s.into())
        }
    }
}

fn classify(point: &Point, depth: usize, limits: Limits, format: Option<Format>) -> Res {
    let config = config_of(point)?;
    let descent = descend(&config, depth, limits.q_max, limits.n_max)?;
    let class = classify_point(&config, depth, limits.q_max, limits.n_max)?;
    let path = descent.labels();
    match only(format, Format::Json, &[Format::Json, Format::Text])? {
        Format::Text => {
            let mut s = format!("{}\n", class.name());
            let _ = writeln!(s, "path {}", if path.is_empty() { "-".to_string() } else { path.join(" ") });
            let _ = writeln!(s, "evidence_depth {}", path.len());
            Ok(s.into())
        }
        _ => Ok(pretty(&json!({
            "path": path,
            "class": class.name(),
            "evidence_depth": path.len(),
            "detail": class,
        }))?
        .into()),
    }
}

fn anharmonic(args: &CoverArgs, b: &Rational, tol: &Rational, format: Option<Format>) -> Res {
    let cover = cover_of(args)?;
    let enc = anharmonic_point(&cover, b, tol)?;
    let labels: Vec<String> = enc.levels.iter().map(|l| l.label()).collect();
    match only(format, Format::Text, &[Format::Text, Format::Json])? {
        Format::Json => Ok(pretty(&json!({
            "b": pq(b),
            "a_lo": pq(&enc.a_lo),
            "a_hi": pq(&enc.a_hi),
            "levels": labels,
        }))?
        .into()),
        _ => Ok(format!(
            "a in [{}, {}]\n~ [{}, {}]\nlevels {}\n",
            pq(&enc.a_lo),
            pq(&enc.a_hi),
            sig12(chaos_boundary::rational::to_f64(&enc.a_lo)),
            sig12(chaos_boundary::rational::to_f64(&enc.a_hi)),
            labels.join(" ")
        )
        .into()),
    }
}
