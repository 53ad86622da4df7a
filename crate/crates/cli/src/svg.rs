//! Hand-written SVG 1.1. Coordinates are printed with fixed precision so
//! the same input always produces the same bytes.

use std::f64::consts::TAU;
use std::fmt::Write;

use cleanflex::{Conic, FlexKind, FlexRecord, SextacticRecord, Smooth, SupportCurve, VertexRecord};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 400.0;
const SIDE: f64 = 600.0;
const MARGIN: f64 = 30.0;
const SAMPLES: usize = 720;

const STYLE: &str = "\
.axis{stroke:#999;stroke-width:1}\
.u{fill:none;stroke:#000;stroke-width:1.5}\
.osc{fill:none;stroke-width:1;stroke-opacity:0.7}\
.osc.clean-max,.circle.clean-max,.conic.clean-max{stroke:#c0392b}\
.osc.clean-min,.circle.clean-min,.conic.clean-min{stroke:#2464a4;stroke-dasharray:5,3}\
.circle,.conic{fill:none;stroke-width:1}\
.marker.clean-max{fill:#c0392b}\
.marker.clean-min{fill:#2464a4}\
.marker.global-max,.marker.global-min{fill:#e08e0b}\
.marker.plain{fill:#888}";

struct Canvas {
    body: String,
    w: f64,
    h: f64,
}

impl Canvas {
    fn new(w: f64, h: f64) -> Self {
        Self {
            body: String::new(),
            w,
            h,
        }
    }

    /// Polyline split wherever a point is missing.
    fn path(&mut self, class: &str, pts: &[Option<(f64, f64)>]) {
        let mut d = String::new();
        let mut pen_down = false;
        for p in pts {
            match p {
                Some((x, y)) => {
                    let _ = write!(d, "{}{:.2},{:.2}", if pen_down { 'L' } else { 'M' }, x, y);
                    pen_down = true;
                }
                None => pen_down = false,
            }
        }
        if !d.is_empty() {
            let _ = writeln!(self.body, r#"<path class="{class}" d="{d}"/>"#);
        }
    }

    fn marker(&mut self, kind: FlexKind, x: f64, y: f64) {
        let class = kind.as_str();
        let _ = match kind {
            FlexKind::CleanMax => writeln!(
                self.body,
                r#"<path class="marker {class}" d="M{:.2},{:.2}l6,10h-12z"/>"#,
                x,
                y - 6.0
            ),
            FlexKind::CleanMin => writeln!(
                self.body,
                r#"<path class="marker {class}" d="M{:.2},{:.2}l6,-10h-12z"/>"#,
                x,
                y + 6.0
            ),
            FlexKind::GlobalMax | FlexKind::GlobalMin => writeln!(
                self.body,
                r#"<rect class="marker {class}" x="{:.2}" y="{:.2}" width="8" height="8"/>"#,
                x - 4.0,
                y - 4.0
            ),
            FlexKind::Plain => writeln!(
                self.body,
                r#"<circle class="marker {class}" cx="{:.2}" cy="{:.2}" r="4"/>"#,
                x,
                y
            ),
        };
    }

    fn finish(self) -> String {
        format!(
            concat!(
                r#"<?xml version="1.0" encoding="UTF-8"?>"#,
                "\n",
                r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
                "\n<style>{style}</style>\n",
                r##"<rect width="{w}" height="{h}" fill="#fff"/>"##,
                "\n{body}</svg>\n"
            ),
            w = self.w,
            h = self.h,
            style = STYLE,
            body = self.body
        )
    }
}

/// Affine map from a data box onto the canvas, `y` pointing up.
#[derive(Clone, Copy)]
struct Frame {
    x0: f64,
    y0: f64,
    sx: f64,
    sy: f64,
    h: f64,
}

impl Frame {
    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        (MARGIN + (x - self.x0) * self.sx, self.h - MARGIN - (y - self.y0) * self.sy)
    }

    fn clip(&self, x: f64, y: f64) -> Option<(f64, f64)> {
        let (px, py) = self.map(x, y);
        (px.is_finite() && (0.0..=self.h).contains(&py)).then_some((px, py))
    }
}

fn samples() -> impl Iterator<Item = f64> {
    (0..=SAMPLES).map(|i| i as f64 * TAU / SAMPLES as f64)
}

/// `u` on one period, the osculating polynomial at each clean flex, and a
/// marker per flex.
pub fn function_svg<F: Smooth + ?Sized>(u: &F, records: &[FlexRecord]) -> String {
    let values: Vec<f64> = samples().map(|t| u.value(t)).collect();
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let pad = 0.25 * (hi - lo).max(1e-3);
    let (lo, hi) = (lo - pad, hi + pad);
    let frame = Frame {
        x0: 0.0,
        y0: lo,
        sx: (WIDTH - 2.0 * MARGIN) / TAU,
        sy: (HEIGHT - 2.0 * MARGIN) / (hi - lo),
        h: HEIGHT,
    };

    let mut svg = Canvas::new(WIDTH, HEIGHT);
    if lo < 0.0 && hi > 0.0 {
        let (a, y) = frame.map(0.0, 0.0);
        let (b, _) = frame.map(TAU, 0.0);
        let _ = writeln!(svg.body, r#"<line class="axis" x1="{a:.2}" y1="{y:.2}" x2="{b:.2}" y2="{y:.2}"/>"#);
    }
    for r in records.iter().filter(|r| r.kind.is_clean()) {
        let pts: Vec<_> = samples().map(|t| frame.clip(t, r.osculating.eval(t, 0))).collect();
        svg.path(&format!("osc {}", r.kind.as_str()), &pts);
    }
    let pts: Vec<_> = samples().zip(&values).map(|(t, v)| Some(frame.map(t, *v))).collect();
    svg.path("u", &pts);
    for r in records {
        let t = r.location.midpoint();
        let t = if t >= TAU { t - TAU } else { t };
        let (x, y) = frame.map(t, u.value(t));
        svg.marker(r.kind, x, y);
    }
    svg.finish()
}

fn curve_frame(c: &SupportCurve) -> Frame {
    let pts: Vec<[f64; 2]> = samples().map(|t| c.point(t)).collect();
    let (mut xl, mut xh, mut yl, mut yh) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in &pts {
        xl = xl.min(p[0]);
        xh = xh.max(p[0]);
        yl = yl.min(p[1]);
        yh = yh.max(p[1]);
    }
    let span = (xh - xl).max(yh - yl) * 1.4;
    let s = (SIDE - 2.0 * MARGIN) / span;
    Frame {
        x0: 0.5 * (xl + xh) - 0.5 * span,
        y0: 0.5 * (yl + yh) - 0.5 * span,
        sx: s,
        sy: s,
        h: SIDE,
    }
}

fn draw_curve(svg: &mut Canvas, frame: &Frame, c: &SupportCurve) {
    let pts: Vec<_> = samples()
        .map(|t| {
            let p = c.point(t);
            Some(frame.map(p[0], p[1]))
        })
        .collect();
    svg.path("u", &pts);
}

/// The curve with the osculating circle of every clean vertex.
pub fn vertex_svg(c: &SupportCurve, records: &[VertexRecord]) -> String {
    let frame = curve_frame(c);
    let mut svg = Canvas::new(SIDE, SIDE);
    draw_curve(&mut svg, &frame, c);
    for r in records.iter().filter(|r| r.kind.is_clean()) {
        let (x, y) = frame.map(r.circle.center[0], r.circle.center[1]);
        let _ = writeln!(
            svg.body,
            r#"<circle class="circle {}" cx="{x:.2}" cy="{y:.2}" r="{:.2}"/>"#,
            r.kind.as_str(),
            r.circle.radius * frame.sx
        );
    }
    for r in records {
        let p = c.point(r.location.midpoint());
        let (x, y) = frame.map(p[0], p[1]);
        svg.marker(r.kind, x, y);
    }
    svg.finish()
}

/// Visible part of a conic, traced by casting rays from `o`; the near and
/// far intersections form separate tracks.
fn conic_tracks(q: &Conic, o: [f64; 2], frame: &Frame) -> [Vec<Option<(f64, f64)>>; 2] {
    let n = 4 * SAMPLES;
    let jump = 0.1 * SIDE;
    let mut tracks: [Vec<Option<(f64, f64)>>; 2] = [Vec::with_capacity(n + 1), Vec::with_capacity(n + 1)];
    for i in 0..=n {
        let th = i as f64 * TAU / n as f64;
        let (sn, cs) = th.sin_cos();
        let hits = q.ray_hits(o, th);
        for (k, track) in tracks.iter_mut().enumerate() {
            let p = hits
                .get(k)
                .and_then(|s| frame.clip(o[0] + s * cs, o[1] + s * sn))
                .filter(|p| (MARGIN * 0.5..=SIDE - MARGIN * 0.5).contains(&p.0));
            // break the stroke where consecutive hits are far apart
            if let (Some(p), Some(Some(prev))) = (p, track.last()) {
                if (p.0 - prev.0).hypot(p.1 - prev.1) > jump {
                    track.push(None);
                }
            }
            track.push(p);
        }
    }
    tracks
}

/// The curve with the osculating conic of every clean sextactic point.
pub fn sextactic_svg(c: &SupportCurve, records: &[SextacticRecord]) -> String {
    let frame = curve_frame(c);
    let mut svg = Canvas::new(SIDE, SIDE);
    draw_curve(&mut svg, &frame, c);
    for r in records.iter().filter(|r| r.kind.is_clean()) {
        for track in conic_tracks(&r.conic, c.origin(), &frame) {
            svg.path(&format!("conic {}", r.kind.as_str()), &track);
        }
    }
    for r in records {
        let p = c.point(r.location.midpoint());
        let (x, y) = frame.map(p[0], p[1]);
        svg.marker(r.kind, x, y);
    }
    svg.finish()
}

/// Just the curve, for inputs where every point is a vertex.
pub fn bare_curve_svg(c: &SupportCurve) -> String {
    let frame = curve_frame(c);
    let mut svg = Canvas::new(SIDE, SIDE);
    draw_curve(&mut svg, &frame, c);
    svg.finish()
}
