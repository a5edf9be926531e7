//! Standalone SVG rendering of a useful workspace, its inscribed square and
//! iso-value curves.

use std::fmt::Write;

use crate::atlas::{Rect, ZoneResult};
use crate::contour::Polyline;
use crate::format::fmt_g;
use crate::linalg::Point2;

const VIEW: f64 = 1000.0;
const MARGIN: f64 = 40.0;

struct Frame {
    origin: Point2,
    scale: f64,
}

impl Frame {
    fn fit(bbox: Rect) -> Self {
        let extent = bbox.width().max(bbox.height()).max(f64::MIN_POSITIVE);
        Frame { origin: Point2::new(bbox.u_min, bbox.v_min), scale: (VIEW - 2.0 * MARGIN) / extent }
    }

    // y grows downward in SVG
    fn map(&self, p: Point2) -> (f64, f64) {
        (MARGIN + (p.x - self.origin.x) * self.scale, VIEW - MARGIN - (p.y - self.origin.y) * self.scale)
    }

    fn path(&self, points: &[Point2], closed: bool) -> String {
        let mut d = String::new();
        for (k, &p) in points.iter().enumerate() {
            let (x, y) = self.map(p);
            let _ = write!(d, "{}{} {}", if k == 0 { "M" } else { " L" }, fmt_g(x), fmt_g(y));
        }
        if closed {
            d.push_str(" Z");
        }
        d
    }
}

/// Renders the region outline, the optional inscribed square and one
/// `<path>` per curve, with the curve's level in `data-level`.
pub fn render(boundary: &[Point2], square: Option<&ZoneResult>, curves: &[Polyline], field: &str) -> String {
    let bbox = Rect::bounding(boundary).unwrap_or(Rect { u_min: 0.0, u_max: 1.0, v_min: 0.0, v_max: 1.0 });
    let frame = Frame::fit(bbox);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {v} {v}" width="{v}" height="{v}">"#,
        v = VIEW
    );
    let _ = writeln!(out, r#"  <rect x="0" y="0" width="{v}" height="{v}" fill="white"/>"#, v = VIEW);
    let _ = writeln!(
        out,
        r#"  <path class="boundary" d="{}" fill="none" stroke="black" stroke-width="2"/>"#,
        frame.path(boundary, true)
    );
    if let Some(sq) = square {
        let o = sq.origin;
        let s = sq.side;
        let corners = [o, Point2::new(o.x + s, o.y), Point2::new(o.x + s, o.y + s), Point2::new(o.x, o.y + s)];
        let _ = writeln!(
            out,
            r#"  <path class="inscribed-square" d="{}" fill="none" stroke="blue" stroke-width="2" stroke-dasharray="8 4"/>"#,
            frame.path(&corners, true)
        );
    }
    let _ = writeln!(out, r#"  <g class="iso-curves" data-field="{field}">"#);
    for c in curves {
        let _ = writeln!(
            out,
            r#"    <path class="iso-curve" data-level="{}" d="{}" fill="none" stroke="red" stroke-width="1.5"/>"#,
            fmt_g(c.level),
            frame.path(&c.points, false)
        );
    }
    out.push_str("  </g>\n</svg>\n");
    out
}

/// Raw polylines as CSV: `curve,level,closed,x,y`.
pub fn polylines_csv(curves: &[Polyline]) -> String {
    let mut out = String::from("curve,level,closed,x,y\n");
    for (k, c) in curves.iter().enumerate() {
        for p in &c.points {
            let _ = writeln!(out, "{k},{},{},{},{}", fmt_g(c.level), c.closed, fmt_g(p.x), fmt_g(p.y));
        }
    }
    out
}
