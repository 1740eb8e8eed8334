//! `plot`: SVG rendering of trajectory files.

use std::fmt::Write;

use crate::output::Table;

const SIZE: f64 = 600.0;
const MARGIN: f64 = 40.0;

/// Which columns are drawn, chosen from the header.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    Plane,
    Minkowski,
    /// Orthographic view of the sphere from the `n3` axis.
    Sphere,
    /// First two columns after `t`.
    Generic,
}

pub fn detect_layout(columns: &[String]) -> Layout {
    let has = |c: &str| columns.iter().any(|x| x == c);
    if has("n1") && has("n2") && has("n3") {
        Layout::Sphere
    } else if has("xplus") && has("xminus") {
        Layout::Minkowski
    } else if has("x1") && has("x2") {
        Layout::Plane
    } else {
        Layout::Generic
    }
}

fn column_pair(table: &Table, layout: Layout) -> Option<(usize, usize)> {
    let idx = |name: &str| table.columns.iter().position(|c| c == name);
    match layout {
        Layout::Plane => Some((idx("x1")?, idx("x2")?)),
        Layout::Minkowski => Some((idx("xplus")?, idx("xminus")?)),
        Layout::Sphere => Some((idx("n1")?, idx("n2")?)),
        Layout::Generic => {
            let rest: Vec<usize> = (0..table.columns.len()).filter(|&i| table.columns[i] != "t").collect();
            (rest.len() >= 2).then(|| (rest[0], rest[1]))
        }
    }
}

struct Frame {
    min: (f64, f64),
    scale: f64,
}

impl Frame {
    /// Equal scale on both axes so circles stay round.
    fn fit(points: &[(f64, f64)], layout: Layout) -> Self {
        let (mut lo, mut hi) = ((-1.0, -1.0), (1.0, 1.0));
        if layout != Layout::Sphere && !points.is_empty() {
            lo = (f64::INFINITY, f64::INFINITY);
            hi = (f64::NEG_INFINITY, f64::NEG_INFINITY);
            for &(x, y) in points {
                lo = (lo.0.min(x), lo.1.min(y));
                hi = (hi.0.max(x), hi.1.max(y));
            }
        }
        let span = (hi.0 - lo.0).max(hi.1 - lo.1).max(1e-12) * 1.1;
        let mid = ((lo.0 + hi.0) / 2.0, (lo.1 + hi.1) / 2.0);
        Self { min: (mid.0 - span / 2.0, mid.1 - span / 2.0), scale: (SIZE - 2.0 * MARGIN) / span }
    }

    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        (MARGIN + (x - self.min.0) * self.scale, SIZE - MARGIN - (y - self.min.1) * self.scale)
    }

    fn max(&self) -> (f64, f64) {
        let span = (SIZE - 2.0 * MARGIN) / self.scale;
        (self.min.0 + span, self.min.1 + span)
    }
}

pub fn render_svg(table: &Table) -> String {
    let layout = detect_layout(&table.columns);
    let points: Vec<(f64, f64)> = match column_pair(table, layout) {
        Some((a, b)) => table.rows.iter().map(|r| (r[a], r[b])).filter(|(x, y)| x.is_finite() && y.is_finite()).collect(),
        None => Vec::new(),
    };
    let frame = Frame::fit(&points, layout);
    let (xlabel, ylabel) = match layout {
        Layout::Plane => ("x1", "x2"),
        Layout::Minkowski => ("x+", "x-"),
        Layout::Sphere => ("n1", "n2"),
        Layout::Generic => ("", ""),
    };
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    // Axes through the origin when it is in view, otherwise along the frame edge.
    let max = frame.max();
    let ox = 0f64.clamp(frame.min.0, max.0);
    let oy = 0f64.clamp(frame.min.1, max.1);
    let (x0, y0) = frame.map((frame.min.0, oy));
    let (x1, _) = frame.map((max.0, oy));
    let _ = writeln!(s, r#"<line x1="{x0:.3}" y1="{y0:.3}" x2="{x1:.3}" y2="{y0:.3}" stroke="gray" stroke-width="1"/>"#);
    let (ax, ay0) = frame.map((ox, frame.min.1));
    let (_, ay1) = frame.map((ox, max.1));
    let _ = writeln!(s, r#"<line x1="{ax:.3}" y1="{ay0:.3}" x2="{ax:.3}" y2="{ay1:.3}" stroke="gray" stroke-width="1"/>"#);
    let _ = writeln!(s, r#"<text x="{:.3}" y="{:.3}" font-size="12">{xlabel}</text>"#, SIZE - MARGIN + 4.0, y0 + 4.0);
    let _ = writeln!(s, r#"<text x="{:.3}" y="{:.3}" font-size="12">{ylabel}</text>"#, ax + 4.0, MARGIN - 8.0);
    if layout == Layout::Sphere {
        let (cx, cy) = frame.map((0.0, 0.0));
        let r = frame.scale;
        let _ = writeln!(s, r#"<circle cx="{cx:.3}" cy="{cy:.3}" r="{r:.3}" fill="none" stroke="black" stroke-width="1"/>"#);
    }
    if !points.is_empty() {
        let coords: Vec<String> = points
            .iter()
            .map(|p| {
                let (x, y) = frame.map(*p);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="1.5"/>"#,
            coords.join(" ")
        );
    }
    s.push_str("</svg>\n");
    s
}
