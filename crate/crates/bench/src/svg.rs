//! Hand-written SVG figures. Coordinates are printed with two decimals so
//! identical inputs give identical bytes.

use std::fmt::Write;

use commbench_core::network::DegreeSummary;
use commbench_core::Partition;

use crate::format::sig6;

const WIDTH: f64 = 560.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 60.0;
const GRAY: &str = "#c8c8c8";

/// Colors for the largest communities; everything else is drawn gray.
pub const PALETTE: [&str; 15] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
    "#393b79", "#637939", "#8c6d31", "#843c39", "#7b4173",
];

pub fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for ch in text.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn open(width: f64, height: f64, title: &str) -> String {
    let mut s = String::new();
    writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(s, r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="16">{}</text>"#, width / 2.0, escape(title))
        .unwrap();
    s
}

fn close(mut s: String) -> String {
    s.push_str("</svg>\n");
    s
}

/// Radius fraction for each value: `v / max` over the finite values,
/// clamped to `[0, 1]`. Missing values sit at the center, `+inf` on the rim.
pub fn radar_scale(values: &[Option<f64>]) -> Vec<f64> {
    let max = values.iter().flatten().copied().filter(|v| v.is_finite()).fold(0.0, f64::max);
    values
        .iter()
        .map(|v| match v {
            Some(x) if *x == f64::INFINITY => 1.0,
            Some(x) if x.is_finite() && max > 0.0 => (x / max).clamp(0.0, 1.0),
            _ => 0.0,
        })
        .collect()
}

/// One spoke per algorithm; the polygon has exactly one vertex per entry.
pub fn radar_chart(title: &str, entries: &[(String, Option<f64>)]) -> String {
    let mut s = open(WIDTH, HEIGHT + 40.0, title);
    let (cx, cy, radius) = (WIDTH / 2.0, HEIGHT / 2.0 + 30.0, 150.0);
    let n = entries.len().max(1);
    let angle = |i: usize| -std::f64::consts::FRAC_PI_2 + std::f64::consts::TAU * i as f64 / n as f64;
    let point = |i: usize, r: f64| (cx + r * angle(i).cos(), cy + r * angle(i).sin());

    for ring in [0.25, 0.5, 0.75, 1.0] {
        writeln!(s, r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="{:.2}" fill="none" stroke="{GRAY}"/>"#, radius * ring)
            .unwrap();
    }
    for (i, (name, value)) in entries.iter().enumerate() {
        let (x, y) = point(i, radius);
        writeln!(s, r#"<line x1="{cx:.2}" y1="{cy:.2}" x2="{x:.2}" y2="{y:.2}" stroke="{GRAY}"/>"#).unwrap();
        let (lx, ly) = point(i, radius + 28.0);
        writeln!(s, r#"<text x="{lx:.2}" y="{ly:.2}" text-anchor="middle">{} ({})</text>"#, escape(name), sig6(*value))
            .unwrap();
    }
    let scale = radar_scale(&entries.iter().map(|(_, v)| *v).collect::<Vec<_>>());
    let vertices: Vec<String> = scale
        .iter()
        .enumerate()
        .map(|(i, &f)| {
            let (x, y) = point(i, radius * f);
            format!("{x:.2},{y:.2}")
        })
        .collect();
    writeln!(
        s,
        r##"<polygon class="values" points="{}" fill="#1f77b4" fill-opacity="0.3" stroke="#1f77b4" stroke-width="2"/>"##,
        vertices.join(" ")
    )
    .unwrap();
    close(s)
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        let widen = |a: f64, b: f64| if b > a { (a, b) } else { (a - 0.5, a + 0.5) };
        let (x0, x1) = widen(x0, x1);
        let (y0, y1) = widen(y0, y1);
        Frame { x0, x1, y0, y1 }
    }

    fn x(&self, v: f64) -> f64 {
        MARGIN + (v - self.x0) / (self.x1 - self.x0) * (WIDTH - 2.0 * MARGIN)
    }

    fn y(&self, v: f64) -> f64 {
        HEIGHT - MARGIN - (v - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2.0 * MARGIN)
    }

    fn axes(&self, s: &mut String, x_label: &str, y_label: &str) {
        let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
        writeln!(s, r#"<line x1="{left:.2}" y1="{bottom:.2}" x2="{right:.2}" y2="{bottom:.2}" stroke="black"/>"#)
            .unwrap();
        writeln!(s, r#"<line x1="{left:.2}" y1="{top:.2}" x2="{left:.2}" y2="{bottom:.2}" stroke="black"/>"#).unwrap();
        for (v, anchor, x) in [(self.x0, "start", left), (self.x1, "end", right)] {
            writeln!(s, r#"<text x="{x:.2}" y="{:.2}" text-anchor="{anchor}">{}</text>"#, bottom + 16.0, sig6(Some(v)))
                .unwrap();
        }
        for (v, y) in [(self.y0, bottom), (self.y1, top)] {
            writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#, left - 6.0, y + 4.0, sig6(Some(v)))
                .unwrap();
        }
        writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            WIDTH / 2.0,
            HEIGHT - 18.0,
            escape(x_label)
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">{}</text>"#,
            HEIGHT / 2.0,
            HEIGHT / 2.0,
            escape(y_label)
        )
        .unwrap();
    }
}

/// Vertical bars on a fixed `[lo, hi]` value range with a zero baseline.
pub fn bar_chart(title: &str, y_label: &str, entries: &[(String, Option<f64>)], lo: f64, hi: f64) -> String {
    let mut s = open(WIDTH, HEIGHT, title);
    let frame = Frame::new(0.0, entries.len().max(1) as f64, lo, hi);
    frame.axes(&mut s, "algorithm", y_label);
    let base = frame.y(0.0_f64.clamp(lo, hi));
    writeln!(s, r#"<line x1="{MARGIN:.2}" y1="{base:.2}" x2="{:.2}" y2="{base:.2}" stroke="{GRAY}"/>"#, WIDTH - MARGIN)
        .unwrap();
    for (i, (name, value)) in entries.iter().enumerate() {
        let (left, right) = (frame.x(i as f64 + 0.15), frame.x(i as f64 + 0.85));
        if let Some(v) = value.filter(|v| v.is_finite()) {
            let top = frame.y(v.clamp(lo, hi));
            let (y, h) = if top < base { (top, base - top) } else { (base, top - base) };
            writeln!(
                s,
                r#"<rect class="bar" x="{left:.2}" y="{y:.2}" width="{:.2}" height="{h:.2}" fill="{}"/>"#,
                right - left,
                PALETTE[i % PALETTE.len()]
            )
            .unwrap();
        }
        writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{} ({})</text>"#,
            (left + right) / 2.0,
            MARGIN - 8.0 + if i % 2 == 1 { 14.0 } else { 0.0 },
            escape(name),
            sig6(*value)
        )
        .unwrap();
    }
    close(s)
}

/// Nodes at `points`, colored by community. Only the `top` largest
/// communities get palette colors; the rest are gray.
pub fn community_scatter(title: &str, points: &[(f64, f64)], partition: &Partition, top: usize) -> String {
    let mut s = open(WIDTH, HEIGHT, title);
    let frame = bounds(points);
    frame.axes(&mut s, "embedding coordinate 0", "embedding coordinate 1");
    let mut color = vec![GRAY; partition.community_count()];
    let mut ranked = partition.top_k_communities(top.min(PALETTE.len()));
    ranked.sort_by(|&a, &b| partition.sizes()[b].cmp(&partition.sizes()[a]).then(a.cmp(&b)));
    for (rank, &c) in ranked.iter().enumerate() {
        color[c] = PALETTE[rank];
    }
    // Gray nodes first so colored ones stay visible.
    for gray_pass in [true, false] {
        for (u, &(x, y)) in points.iter().enumerate() {
            let c = color[partition.community_of(u)];
            if (c == GRAY) == gray_pass {
                writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{c}"/>"#, frame.x(x), frame.y(y)).unwrap();
            }
        }
    }
    close(s)
}

fn bounds(points: &[(f64, f64)]) -> Frame {
    let fold = |f: fn(&(f64, f64)) -> f64| {
        points.iter().map(f).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
    };
    let (x0, x1) = fold(|p| p.0);
    let (y0, y1) = fold(|p| p.1);
    if points.is_empty() {
        Frame::new(0.0, 1.0, 0.0, 1.0)
    } else {
        Frame::new(x0, x1, y0, y1)
    }
}

pub fn degree_histogram_plot(summary: &DegreeSummary) -> String {
    let mut s = open(WIDTH, HEIGHT, "Degree distribution");
    let max_count = summary.histogram.values().copied().max().unwrap_or(1) as f64;
    let frame = Frame::new(0.0, summary.max_degree as f64 + 1.0, 0.0, max_count);
    frame.axes(&mut s, "degree", "number of nodes");
    let bar = ((WIDTH - 2.0 * MARGIN) / (summary.max_degree as f64 + 1.0)).max(1.0);
    for (&d, &c) in &summary.histogram {
        let top = frame.y(c as f64);
        writeln!(
            s,
            r##"<rect x="{:.2}" y="{top:.2}" width="{bar:.2}" height="{:.2}" fill="#1f77b4"/>"##,
            frame.x(d as f64),
            frame.y(0.0) - top
        )
        .unwrap();
    }
    close(s)
}

pub fn degree_cdf_plot(summary: &DegreeSummary) -> String {
    let mut s = open(WIDTH, HEIGHT, "Cumulative degree distribution");
    let frame = Frame::new(0.0, summary.max_degree as f64, 0.0, 1.0);
    frame.axes(&mut s, "degree", "fraction of nodes with degree at most x");
    let mut path = Vec::with_capacity(2 * summary.cdf.len());
    let mut previous = 0.0;
    for &(d, f) in &summary.cdf {
        path.push(format!("{:.2},{:.2}", frame.x(d as f64), frame.y(previous)));
        path.push(format!("{:.2},{:.2}", frame.x(d as f64), frame.y(f)));
        previous = f;
    }
    writeln!(s, r##"<polyline points="{}" fill="none" stroke="#1f77b4" stroke-width="2"/>"##, path.join(" ")).unwrap();
    close(s)
}

pub fn centrality_plot(centrality: &[f64]) -> String {
    let mut s = open(WIDTH, HEIGHT, "Degree centrality per node");
    let max = centrality.iter().copied().fold(0.0, f64::max);
    let frame = Frame::new(0.0, centrality.len().saturating_sub(1) as f64, 0.0, max);
    frame.axes(&mut s, "node index", "degree centrality");
    for (u, &c) in centrality.iter().enumerate() {
        writeln!(s, r##"<circle cx="{:.2}" cy="{:.2}" r="1.5" fill="#1f77b4"/>"##, frame.x(u as f64), frame.y(c))
            .unwrap();
    }
    close(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radar_has_one_vertex_per_entry() {
        let entries: Vec<(String, Option<f64>)> = vec![
            ("a".into(), Some(1.0)),
            ("b".into(), None),
            ("c".into(), Some(f64::INFINITY)),
            ("d".into(), Some(0.5)),
        ];
        let svg = radar_chart("t", &entries);
        let points = svg.split("points=\"").nth(1).unwrap().split('"').next().unwrap();
        assert_eq!(points.split_whitespace().count(), 4);
        assert_eq!(radar_scale(&entries.iter().map(|e| e.1).collect::<Vec<_>>()), vec![1.0, 0.0, 1.0, 0.5]);
    }

    #[test]
    fn negative_values_clamp_to_center() {
        assert_eq!(radar_scale(&[Some(-0.2), Some(0.4)]), vec![0.0, 1.0]);
        assert_eq!(radar_scale(&[Some(0.0), Some(0.0)]), vec![0.0, 0.0]);
    }

    #[test]
    fn escapes_markup() {
        assert_eq!(escape("a<b & \"c\""), "a&lt;b &amp; &quot;c&quot;");
    }

    #[test]
    fn scatter_grays_small_communities() {
        let raw: Vec<usize> = (0..20).collect();
        let p = Partition::canonicalize(&raw);
        let points: Vec<(f64, f64)> = (0..20).map(|i| (i as f64, 0.0)).collect();
        let svg = community_scatter("s", &points, &p, 15);
        assert_eq!(svg.matches(GRAY).count() - svg.matches(&format!("stroke=\"{GRAY}\"")).count(), 5);
    }
}
