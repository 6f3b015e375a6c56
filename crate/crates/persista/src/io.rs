//! File formats and geometry plumbing: parsing and writing filtrations
//! (simplicial `.flt` and explicit-boundary `.cwf`), point clouds, the
//! Vietoris-Rips builder, barcode serialization (TSV and JSON), and SVG
//! persistence diagrams.
//!
//! Formats, all UTF-8 with `\n` line endings, `#` starting a comment, blank
//! lines ignored:
//!
//! - `.flt`: one simplex per line, `birth v0 v1 ... vk`; vertices are
//!   sorted automatically and boundaries get the alternating-sign
//!   convention. The filtration order is (birth, dimension, lexicographic).
//! - `.cwf`: one cell per line, `id dim birth face_id:coeff ...` with
//!   integer coefficients taken verbatim; ids must read 0..n in file order,
//!   and the boundary-squared and monotonicity invariants are validated.
//! - points: one point per line, whitespace-separated coordinates, all the
//!   same arity.
//! - barcode TSV: header `dim birth death kind` (tab-separated), infinities
//!   rendered `inf` / `-inf`, reals in shortest round-trip form.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::core::{
    euclidean, filtration_from_complex, Cell, Chain, Filtration, Simplex, SimplicialComplex,
};
use crate::error::{Error, Result};
use crate::persistence::{Barcode, Interval, IntervalKind};

/// Default cap on the number of simplices [`build_rips`] may produce.
pub const DEFAULT_RIPS_CAP: usize = 1_000_000;

/// The two filtration file formats.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiltrationFormat {
    /// `.flt`: simplicial, boundaries computed with the sign convention.
    Simplicial,
    /// `.cwf`: explicit integer boundary coefficients.
    CellComplex,
}

impl FiltrationFormat {
    /// Picks the format from a file extension (`flt` or `cwf`).
    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        match path.extension().and_then(|e| e.to_str()) {
            Some("flt") => Ok(Self::Simplicial),
            Some("cwf") => Ok(Self::CellComplex),
            _ => Err(Error::ValidationError(format!(
                "cannot infer a filtration format from {:?}; use a .flt or .cwf extension",
                path
            ))),
        }
    }
}

/// Strips the comment and surrounding whitespace off a raw line.
fn content(raw: &str) -> &str {
    raw.split('#').next().unwrap_or("").trim()
}

fn parse_token<T: std::str::FromStr>(token: &str, line: usize, what: &str) -> Result<T> {
    token.parse().map_err(|_| Error::ParseError {
        line,
        msg: format!("expected {what}, found {token:?}"),
    })
}

/// Parses filtration text in the given format into a validated filtration.
pub fn parse_filtration(text: &str, format: FiltrationFormat) -> Result<Filtration> {
    match format {
        FiltrationFormat::Simplicial => parse_flt(text),
        FiltrationFormat::CellComplex => parse_cwf(text),
    }
}

/// Parses the `.flt` grammar: `birth v0 v1 ... vk` per line. The simplices
/// must form a face-closed set; ordering is canonical (birth, dim, lex).
pub fn parse_flt(text: &str) -> Result<Filtration> {
    let mut births: BTreeMap<Simplex, f64> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let tokens: Vec<&str> = content(raw).split_whitespace().collect();
        let Some((birth_token, vertex_tokens)) = tokens.split_first() else {
            continue;
        };
        let birth: f64 = parse_token(birth_token, line, "a birth value")?;
        if vertex_tokens.is_empty() {
            return Err(Error::ParseError {
                line,
                msg: "expected at least one vertex id after the birth".into(),
            });
        }
        let vertices = vertex_tokens
            .iter()
            .map(|t| parse_token(t, line, "a vertex id"))
            .collect::<Result<Vec<u32>>>()?;
        let simplex = Simplex::try_new(vertices).map_err(|e| Error::ParseError {
            line,
            msg: match e {
                Error::ValidationError(m) => m,
                other => other.to_string(),
            },
        })?;
        if births.insert(simplex.clone(), birth).is_some() {
            return Err(Error::ParseError {
                line,
                msg: format!("simplex {simplex} appears twice"),
            });
        }
    }
    let complex = SimplicialComplex::from_simplices(births.keys().cloned())?;
    filtration_from_complex(&complex, |s| births[s])
}

/// Parses the `.cwf` grammar: `id dim birth face_id:coeff ...` per line,
/// ids required to be 0..n in file order, boundaries taken verbatim and
/// validated.
pub fn parse_cwf(text: &str) -> Result<Filtration> {
    let mut cells: Vec<Cell> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let tokens: Vec<&str> = content(raw).split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        if tokens.len() < 3 {
            return Err(Error::ParseError {
                line,
                msg: "expected `id dim birth face:coeff ...`".into(),
            });
        }
        let id: usize = parse_token(tokens[0], line, "a cell id")?;
        if id != cells.len() {
            return Err(Error::ParseError {
                line,
                msg: format!("expected cell id {}, found {id}", cells.len()),
            });
        }
        let dim: usize = parse_token(tokens[1], line, "a dimension")?;
        let birth: f64 = parse_token(tokens[2], line, "a birth value")?;
        let mut terms = Vec::new();
        for token in &tokens[3..] {
            let Some((face, coeff)) = token.split_once(':') else {
                return Err(Error::ParseError {
                    line,
                    msg: format!("expected face:coefficient, found {token:?}"),
                });
            };
            let face: usize = parse_token(face, line, "a face id")?;
            let coeff: i64 = parse_token(coeff, line, "an integer coefficient")?;
            terms.push((face, coeff));
        }
        let boundary = Chain::from_terms(terms)?;
        cells.push(Cell {
            id,
            dim,
            birth,
            boundary,
        });
    }
    Filtration::new(cells)
}

/// Writes `.flt` text for a simplicial filtration given as (simplex, birth)
/// pairs, in canonical (birth, dim, lex) order.
pub fn write_flt(entries: &[(Simplex, f64)]) -> String {
    let mut sorted: Vec<&(Simplex, f64)> = entries.iter().collect();
    sorted.sort_by(|(sa, ba), (sb, bb)| ba.total_cmp(bb).then_with(|| sa.cmp(sb)));
    let mut out = String::from("# birth v0 v1 ... vk\n");
    for (simplex, birth) in sorted {
        write!(out, "{birth}").unwrap();
        for v in simplex.vertices() {
            write!(out, " {v}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// Writes `.cwf` text for any filtration; parsing it back reproduces the
/// filtration exactly.
pub fn write_cwf(f: &Filtration) -> String {
    let mut out = String::from("# id dim birth face_id:coeff ...\n");
    for cell in f.cells() {
        write!(out, "{} {} {}", cell.id, cell.dim, cell.birth).unwrap();
        for (&face, coeff) in cell.boundary.terms() {
            write!(out, " {face}:{coeff}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// A finite set of points in a common Euclidean space.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    points: Vec<Vec<f64>>,
}

impl PointCloud {
    /// Validates arity (at least one coordinate, all points alike) and
    /// finiteness.
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        if let Some(first) = points.first() {
            if first.is_empty() {
                return Err(Error::ValidationError(
                    "points need at least one coordinate".into(),
                ));
            }
            for (i, p) in points.iter().enumerate() {
                if p.len() != first.len() {
                    return Err(Error::ValidationError(format!(
                        "point {i} has {} coordinates, expected {}",
                        p.len(),
                        first.len()
                    )));
                }
                if p.iter().any(|c| !c.is_finite()) {
                    return Err(Error::ValidationError(format!(
                        "point {i} has a non-finite coordinate"
                    )));
                }
            }
        }
        Ok(Self { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Ambient dimension, if there is at least one point.
    pub fn ambient_dim(&self) -> Option<usize> {
        self.points.first().map(Vec::len)
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    /// Euclidean distance between points `i` and `j`.
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        euclidean(&self.points[i], &self.points[j])
    }
}

/// Parses point-cloud text: one point per line, whitespace-separated
/// coordinates.
pub fn parse_points(text: &str) -> Result<PointCloud> {
    let mut points = Vec::new();
    let mut arity: Option<(usize, usize)> = None; // (arity, first line)
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let tokens: Vec<&str> = content(raw).split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        let coords = tokens
            .iter()
            .map(|t| parse_token(t, line, "a coordinate"))
            .collect::<Result<Vec<f64>>>()?;
        if let Some(c) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::ParseError {
                line,
                msg: format!("non-finite coordinate {c}"),
            });
        }
        match arity {
            None => arity = Some((coords.len(), line)),
            Some((m, first)) if coords.len() != m => {
                return Err(Error::ParseError {
                    line,
                    msg: format!(
                        "point has {} coordinates but line {first} has {m}",
                        coords.len()
                    ),
                });
            }
            _ => {}
        }
        points.push(coords);
    }
    PointCloud::new(points)
}

/// Writes point-cloud text in the format [`parse_points`] reads.
pub fn write_points(pc: &PointCloud) -> String {
    let mut out = String::new();
    for p in pc.points() {
        let coords: Vec<String> = p.iter().map(|c| format!("{c}")).collect();
        out.push_str(&coords.join(" "));
        out.push('\n');
    }
    out
}

/// Builds the Vietoris-Rips filtration of a point cloud: every simplex on
/// at most `max_dim + 1` vertices whose pairwise distances are all at most
/// `max_radius`, born at its largest pairwise distance (0 for vertices),
/// ordered by (birth, dim, lex). See [`build_rips_with_cap`] for the size
/// cap; the default is [`DEFAULT_RIPS_CAP`].
pub fn build_rips(pc: &PointCloud, max_dim: usize, max_radius: f64) -> Result<Filtration> {
    build_rips_with_cap(pc, max_dim, max_radius, DEFAULT_RIPS_CAP)
}

/// [`build_rips`] with an explicit simplex-count cap.
pub fn build_rips_with_cap(
    pc: &PointCloud,
    max_dim: usize,
    max_radius: f64,
    cap: usize,
) -> Result<Filtration> {
    if max_radius.is_nan() || max_radius <= 0.0 {
        return Err(Error::ValidationError(format!(
            "max radius must be positive, got {max_radius}"
        )));
    }
    let n = pc.len();
    let neighbors: Vec<Vec<u32>> = (0..n)
        .map(|i| {
            (i + 1..n)
                .filter(|&j| pc.distance(i, j) <= max_radius)
                .map(|j| j as u32)
                .collect()
        })
        .collect();
    type Births = Vec<(Simplex, f64)>;
    let mut births: Births = Vec::new();
    let mut push = |simplex: Simplex, birth: f64, births: &mut Births| -> Result<()> {
        if births.len() >= cap {
            return Err(Error::SizeError(format!(
                "Rips construction exceeded the cap of {cap} simplices"
            )));
        }
        births.push((simplex, birth));
        Ok(())
    };
    // Depth-first clique growth: `current` is a simplex already known to
    // have diameter `birth`, and `candidates` are exactly the common
    // neighbors (larger than every current vertex) within `max_radius`.
    struct Grow<'a> {
        pc: &'a PointCloud,
        neighbors: &'a [Vec<u32>],
        max_dim: usize,
    }
    impl Grow<'_> {
        fn run(
            &self,
            current: &mut Vec<u32>,
            birth: f64,
            candidates: &[u32],
            out: &mut Births,
            push: &mut dyn FnMut(Simplex, f64, &mut Births) -> Result<()>,
        ) -> Result<()> {
            if current.len() == self.max_dim + 1 {
                return Ok(());
            }
            for (idx, &v) in candidates.iter().enumerate() {
                let spread = current
                    .iter()
                    .map(|&u| self.pc.distance(u as usize, v as usize))
                    .fold(birth, f64::max);
                current.push(v);
                push(Simplex::new(current.clone()), spread, out)?;
                let rest: Vec<u32> = candidates[idx + 1..]
                    .iter()
                    .copied()
                    .filter(|w| self.neighbors[v as usize].contains(w))
                    .collect();
                self.run(current, spread, &rest, out, push)?;
                current.pop();
            }
            Ok(())
        }
    }
    let grow = Grow {
        pc,
        neighbors: &neighbors,
        max_dim,
    };
    for i in 0..n {
        push(Simplex::new(vec![i as u32]), 0.0, &mut births)?;
        grow.run(
            &mut vec![i as u32],
            0.0,
            &neighbors[i],
            &mut births,
            &mut push,
        )?;
    }
    let map: BTreeMap<Simplex, f64> = births.iter().cloned().collect();
    let complex = SimplicialComplex::from_simplices(map.keys().cloned())?;
    filtration_from_complex(&complex, |s| map[s])
}

/// Barcode serialization formats.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BarcodeFormat {
    Tsv,
    Json,
}

fn endpoint_text(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{v}")
    }
}

fn endpoint_json(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        Value::String(endpoint_text(v))
    }
}

fn kind_name(kind: IntervalKind) -> &'static str {
    match kind {
        IntervalKind::Finite => "finite",
        IntervalKind::Essential => "essential",
    }
}

/// Serializes a barcode in canonical order. TSV has the tab-separated
/// columns `dim birth death kind` with infinities as `inf` / `-inf` and
/// reals in shortest round-trip form; JSON mirrors the same fields plus the
/// provenance indices.
pub fn write_barcode(b: &Barcode, format: BarcodeFormat) -> String {
    match format {
        BarcodeFormat::Tsv => {
            let mut out = String::from("dim\tbirth\tdeath\tkind\n");
            for i in b.intervals() {
                writeln!(
                    out,
                    "{}\t{}\t{}\t{}",
                    i.dim,
                    endpoint_text(i.birth),
                    endpoint_text(i.death),
                    kind_name(i.kind)
                )
                .unwrap();
            }
            out
        }
        BarcodeFormat::Json => {
            let intervals: Vec<Value> = b
                .intervals()
                .iter()
                .map(|i| {
                    let provenance = match i.provenance {
                        None => Value::Null,
                        Some((birth_index, death_index)) => json!({
                            "birth_index": birth_index,
                            "death_index": death_index,
                        }),
                    };
                    json!({
                        "dim": i.dim,
                        "birth": endpoint_json(i.birth),
                        "death": endpoint_json(i.death),
                        "kind": kind_name(i.kind),
                        "provenance": provenance,
                    })
                })
                .collect();
            let mut text =
                serde_json::to_string_pretty(&json!({ "intervals": intervals })).unwrap();
            text.push('\n');
            text
        }
    }
}

fn parse_endpoint(token: &str, line: usize) -> Result<f64> {
    match token {
        "inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        _ => {
            let v: f64 = parse_token(token, line, "an endpoint")?;
            if !v.is_finite() {
                return Err(Error::ParseError {
                    line,
                    msg: format!("non-finite endpoint {token:?}"),
                });
            }
            Ok(v)
        }
    }
}

/// Reads barcode TSV back into a [`Barcode`]. Provenance is not part of the
/// TSV format, so it comes back empty; barcode equality ignores it.
pub fn read_barcode_tsv(text: &str) -> Result<Barcode> {
    let mut lines = text.lines().enumerate();
    let header = loop {
        match lines.next() {
            None => {
                return Err(Error::ParseError {
                    line: 1,
                    msg: "missing header `dim birth death kind`".into(),
                })
            }
            Some((idx, raw)) if !content(raw).is_empty() => break (idx + 1, content(raw)),
            _ => continue,
        }
    };
    if header.1.split_whitespace().collect::<Vec<_>>() != ["dim", "birth", "death", "kind"] {
        return Err(Error::ParseError {
            line: header.0,
            msg: format!("expected header `dim birth death kind`, found {:?}", header.1),
        });
    }
    let mut intervals = Vec::new();
    for (idx, raw) in lines {
        let line = idx + 1;
        let tokens: Vec<&str> = content(raw).split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        let [dim, birth, death, kind] = tokens[..] else {
            return Err(Error::ParseError {
                line,
                msg: format!("expected 4 columns, found {}", tokens.len()),
            });
        };
        let dim: usize = parse_token(dim, line, "a dimension")?;
        let birth = parse_endpoint(birth, line)?;
        let death = parse_endpoint(death, line)?;
        if birth >= death {
            return Err(Error::ParseError {
                line,
                msg: format!("empty interval [{}, {})", birth, death),
            });
        }
        let interval = match (birth.is_finite(), death.is_finite()) {
            (true, true) => Interval::finite(dim, birth, death),
            (true, false) => Interval::essential(dim, birth),
            (false, true) => Interval::essential_from_below(dim, death),
            (false, false) => {
                return Err(Error::ParseError {
                    line,
                    msg: "an interval cannot have two infinite endpoints".into(),
                })
            }
        };
        if kind != kind_name(interval.kind) {
            return Err(Error::ParseError {
                line,
                msg: format!(
                    "kind {kind:?} does not match the endpoints (expected {:?})",
                    kind_name(interval.kind)
                ),
            });
        }
        intervals.push(interval);
    }
    Ok(Barcode::from_intervals(intervals))
}

/// Persistence-diagram rendering styles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagramStyle {
    /// Scatter of (birth, death) points above the diagonal, with essential
    /// points on marked infinity bands.
    Diagram,
    /// One horizontal strip per interval, grouped by dimension.
    BarcodeStrips,
}

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

fn color(dim: usize) -> &'static str {
    PALETTE[dim % PALETTE.len()]
}

/// The finite value range a barcode spans, padded to nonzero width.
fn value_range(b: &Barcode) -> (f64, f64) {
    let finite: Vec<f64> = b
        .intervals()
        .iter()
        .flat_map(|i| [i.birth, i.death])
        .filter(|v| v.is_finite())
        .collect();
    let lo = finite.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = finite.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if lo > hi {
        (0.0, 1.0)
    } else if lo == hi {
        (lo, lo + 1.0)
    } else {
        (lo, hi)
    }
}

/// Renders a barcode as deterministic SVG 1.1 text: no timestamps, no
/// randomness, identical bytes for identical barcodes.
pub fn emit_diagram_svg(b: &Barcode, style: DiagramStyle) -> String {
    match style {
        DiagramStyle::Diagram => diagram_svg(b),
        DiagramStyle::BarcodeStrips => strips_svg(b),
    }
}

fn svg_open(width: f64, height: f64) -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n"
    )
}

fn diagram_svg(b: &Barcode) -> String {
    let size = 480.0;
    let pad = 64.0;
    let band = 26.0; // distance of the infinity bands from the plot frame
    let (lo, hi) = value_range(b);
    let scale = (size - 2.0 * pad) / (hi - lo);
    let x = |v: f64| pad + (v - lo) * scale;
    let y = |v: f64| size - pad - (v - lo) * scale;
    let mut s = svg_open(size, size);
    s.push_str("<g font-family=\"monospace\" font-size=\"11\">\n");
    // Frame, diagonal, and the two infinity bands.
    let _ = writeln!(
        s,
        "<rect x=\"{pad}\" y=\"{pad}\" width=\"{w:.2}\" height=\"{w:.2}\" fill=\"none\" stroke=\"#333\"/>",
        w = size - 2.0 * pad
    );
    let _ = writeln!(
        s,
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#999\"/>",
        x(lo),
        y(lo),
        x(hi),
        y(hi)
    );
    let _ = writeln!(
        s,
        "<line x1=\"{pad}\" y1=\"{t:.2}\" x2=\"{r:.2}\" y2=\"{t:.2}\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>",
        t = pad - band,
        r = size - pad
    );
    let _ = writeln!(
        s,
        "<line x1=\"{l:.2}\" y1=\"{pad}\" x2=\"{l:.2}\" y2=\"{b:.2}\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>",
        l = pad - band,
        b = size - pad
    );
    let _ = writeln!(
        s,
        "<text x=\"{:.2}\" y=\"{:.2}\">inf</text>",
        size - pad + 6.0,
        pad - band + 4.0
    );
    let _ = writeln!(
        s,
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">-inf</text>",
        pad - band + 4.0,
        size - pad + 14.0
    );
    // Tick labels for the value range on both axes.
    let _ = writeln!(
        s,
        "<text x=\"{:.2}\" y=\"{:.2}\">{}</text>",
        x(lo),
        size - pad + 14.0,
        lo
    );
    let _ = writeln!(
        s,
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>",
        x(hi),
        size - pad + 14.0,
        hi
    );
    let _ = writeln!(
        s,
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>",
        pad - 6.0,
        y(lo) + 4.0,
        lo
    );
    let _ = writeln!(
        s,
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>",
        pad - 6.0,
        y(hi) + 4.0,
        hi
    );
    for i in b.intervals() {
        let cx = if i.birth == f64::NEG_INFINITY {
            pad - band
        } else {
            x(i.birth)
        };
        let cy = if i.death == f64::INFINITY {
            pad - band
        } else {
            y(i.death)
        };
        let _ = writeln!(
            s,
            "<circle class=\"point dim-{} {}\" cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"4\" \
             fill=\"{}\" fill-opacity=\"0.8\"/>",
            i.dim,
            kind_name(i.kind),
            color(i.dim)
        );
    }
    s.push_str("</g>\n</svg>\n");
    s
}

fn strips_svg(b: &Barcode) -> String {
    let width = 480.0;
    let pad = 64.0;
    let row = 14.0;
    let section_gap = 22.0;
    let dims: Vec<usize> = match b.max_dim() {
        None => Vec::new(),
        Some(top) => (0..=top).collect(),
    };
    let rows: usize = b.len();
    let height = 2.0 * pad + rows as f64 * row + dims.len() as f64 * section_gap;
    let (lo, hi) = value_range(b);
    let scale = (width - 2.0 * pad) / (hi - lo);
    let x = |v: f64| pad + (v - lo) * scale;
    let mut s = svg_open(width, height);
    s.push_str("<g font-family=\"monospace\" font-size=\"11\">\n");
    // Bottom axis with the value range.
    let _ = writeln!(
        s,
        "<line x1=\"{pad}\" y1=\"{a:.2}\" x2=\"{r:.2}\" y2=\"{a:.2}\" stroke=\"#333\"/>",
        a = height - pad,
        r = width - pad
    );
    let _ = writeln!(
        s,
        "<text x=\"{:.2}\" y=\"{:.2}\">{}</text>",
        x(lo),
        height - pad + 14.0,
        lo
    );
    let _ = writeln!(
        s,
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>",
        x(hi),
        height - pad + 14.0,
        hi
    );
    let mut cursor = pad;
    for dim in dims {
        let _ = writeln!(
            s,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-weight=\"bold\">H{dim}</text>",
            pad - 40.0,
            cursor + 11.0
        );
        cursor += section_gap;
        for i in b.intervals_of_dim(dim) {
            let x1 = if i.birth == f64::NEG_INFINITY {
                pad - 20.0
            } else {
                x(i.birth)
            };
            let x2 = if i.death == f64::INFINITY {
                width - pad + 20.0
            } else {
                x(i.death)
            };
            let yy = cursor + row / 2.0;
            let _ = writeln!(
                s,
                "<line class=\"bar dim-{} {}\" x1=\"{x1:.2}\" y1=\"{yy:.2}\" x2=\"{x2:.2}\" \
                 y2=\"{yy:.2}\" stroke=\"{}\" stroke-width=\"4\"/>",
                i.dim,
                kind_name(i.kind),
                color(i.dim)
            );
            cursor += row;
        }
    }
    s.push_str("</g>\n</svg>\n");
    s
}
