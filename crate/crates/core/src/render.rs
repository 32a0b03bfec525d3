//! Deterministic SVG figures: shaded core, trajectories by sign, thickened
//! double trajectories and saddle paths, zeros and the pole. Coordinates are
//! printed with four decimals in a 600×600 pixel frame.

use crate::network::SpectralNetwork;
use crate::spectralcore::CorePolygon;
use crate::{Sign, C64};
use serde::{Deserialize, Serialize};
use std::fmt::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frame {
    /// The computation chart; for the normalized family `0, 1, ∞` sit at
    /// `−1/t, 1/(1−t), 0`.
    #[default]
    Chart,
    /// The x-plane.
    Original,
}

const SIZE: f64 = 600.0;

struct View {
    center: C64,
    radius: f64,
    map: Box<dyn Fn(C64) -> Option<C64>>,
}

impl View {
    fn px(&self, z: C64) -> Option<(f64, f64)> {
        self.px_frame((self.map)(z)?)
    }

    fn px_frame(&self, w: C64) -> Option<(f64, f64)> {
        let u = (w - self.center) / self.radius;
        let p = (SIZE / 2.0 * (1.0 + u.re), SIZE / 2.0 * (1.0 - u.im));
        (p.0.abs() < 4.0 * SIZE && p.1.abs() < 4.0 * SIZE).then_some(p)
    }
}

fn num(x: f64) -> String {
    let s = format!("{x:.4}");
    if s == "-0.0000" {
        "0.0000".into()
    } else {
        s
    }
}

fn view(net: &SpectralNetwork, frame: Frame) -> View {
    let phi = net.phi.clone();
    let chart = frame == Frame::Chart || !phi.is_normalized();
    let map: Box<dyn Fn(C64) -> Option<C64>> = if chart { Box::new(Some) } else { Box::new(move |y| phi.to_original(y)) };
    let marks: Vec<C64> = if chart {
        net.phi.zero_list().iter().map(|z| z.chart).collect()
    } else {
        vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0), net.phi.t]
    };
    let center = if marks.is_empty() { C64::new(0.0, 0.0) } else { marks.iter().sum::<C64>() / marks.len() as f64 };
    let spread = marks.iter().map(|m| (m - center).norm()).fold(0.0, f64::max);
    View { center, radius: (1.6 * spread).max(1.0), map }
}

/// Points split into runs that stay inside the drawable range.
fn runs(v: &View, pts: &[C64]) -> Vec<Vec<(f64, f64)>> {
    let mut out = vec![];
    let mut cur = vec![];
    for &p in pts {
        match v.px(p) {
            Some(q) => cur.push(q),
            None => {
                if cur.len() > 1 {
                    out.push(std::mem::take(&mut cur));
                }
                cur.clear();
            }
        }
    }
    if cur.len() > 1 {
        out.push(cur);
    }
    out
}

fn path_d(run: &[(f64, f64)]) -> String {
    let mut d = String::new();
    for (i, (x, y)) in run.iter().enumerate() {
        let _ = write!(d, "{}{} {}", if i == 0 { "M" } else { " L" }, num(*x), num(*y));
    }
    d
}

/// SVG of a network with an optional core and extra thickened paths (saddle
/// connections or tripod legs, chart coordinates).
pub fn render_svg(net: &SpectralNetwork, core: Option<&CorePolygon>, degenerations: &[Vec<C64>], frame: Frame) -> String {
    let v = view(net, frame);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{0}" height="{0}" viewBox="0 0 {0} {0}">"#,
        SIZE as u32
    );
    s.push_str(
        "<style>.core{fill:#f2d9a6;stroke:none}.pos{stroke:#1f4e9c;fill:none;stroke-width:1}\
         .neg{stroke:#b8322a;fill:none;stroke-width:1}.double{stroke-width:3.5}\
         .saddle{stroke:#111;fill:none;stroke-width:4}.zero{fill:#111}.pole{stroke:#111;fill:none;stroke-width:1.5}\
         .label{font:12px sans-serif;fill:#111}</style>\n",
    );
    let _ = writeln!(s, r##"<rect id="frame" x="0" y="0" width="{0}" height="{0}" fill="#fff" stroke="#999"/>"##, SIZE as u32);
    if let Some(core) = core {
        for (i, c) in core.components.iter().enumerate() {
            let b = c.boundary();
            if c.is_degenerate() || b.len() < 3 {
                continue;
            }
            let pts: Vec<String> = b.iter().filter_map(|&p| v.px(p)).map(|(x, y)| format!("{},{}", num(x), num(y))).collect();
            let _ = writeln!(s, r#"<polygon id="core{i}" class="core" points="{}"/>"#, pts.join(" "));
        }
    }
    let double: Vec<usize> = net.double_pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    for (i, t) in net.trajectories.iter().enumerate() {
        let class = match (t.sign, double.contains(&i)) {
            (Sign::Pos, false) => "pos",
            (Sign::Neg, false) => "neg",
            (Sign::Pos, true) => "pos double",
            (Sign::Neg, true) => "neg double",
        };
        for (k, r) in runs(&v, &t.points).iter().enumerate() {
            let _ = writeln!(s, r#"<path id="t{i}-{k}" class="{class}" d="{}"/>"#, path_d(r));
        }
    }
    for (i, p) in degenerations.iter().enumerate() {
        for (k, r) in runs(&v, p).iter().enumerate() {
            let _ = writeln!(s, r#"<path id="s{i}-{k}" class="saddle" d="{}"/>"#, path_d(r));
        }
    }
    for z in net.phi.zero_list() {
        if let Some((x, y)) = v.px(z.chart) {
            let _ = writeln!(s, r#"<circle id="z{}" class="zero" cx="{}" cy="{}" r="4"/>"#, z.id, num(x), num(y));
            let _ = writeln!(s, r#"<text class="label" x="{}" y="{}">{}</text>"#, num(x + 6.0), num(y - 6.0), z.label);
        }
    }
    let pole = if frame == Frame::Original && net.phi.is_normalized() { v.px_frame(net.phi.t) } else { None };
    match pole {
        Some((x, y)) => {
            let _ = writeln!(
                s,
                r#"<path id="pole" class="pole" d="M{} {} L{} {} M{} {} L{} {}"/>"#,
                num(x - 5.0),
                num(y - 5.0),
                num(x + 5.0),
                num(y + 5.0),
                num(x - 5.0),
                num(y + 5.0),
                num(x + 5.0),
                num(y - 5.0)
            );
        }
        None => {
            let _ = writeln!(s, r#"<text id="pole" class="label" x="8" y="18">pole at ∞</text>"#);
        }
    }
    s.push_str("</svg>\n");
    s
}
