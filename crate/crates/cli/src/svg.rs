//! SVG drawings of level-r slices of rank-2 fans.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use vtoric::fan::GammaFan;
use vtoric::polyhedral::{linalg, LinearForm, Polyhedron, Vector};
use vtoric::{Error, Result, Scalar};

const SIZE: f64 = 400.0;
const MARGIN: f64 = 20.0;
const PALETTE: [&str; 6] = ["#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2", "#edc948"];

fn fmt_point(v: &[Scalar]) -> String {
    format!("({}, {})", v[0], v[1])
}

struct Viewport {
    b: f64,
}

impl Viewport {
    fn map(&self, v: &[Scalar]) -> (f64, f64) {
        let scale = (SIZE - 2.0 * MARGIN) / (2.0 * self.b);
        let x = MARGIN + (v[0].to_f64() + self.b) * scale;
        let y = MARGIN + (self.b - v[1].to_f64()) * scale;
        (x, y)
    }
}

/// Counter-clockwise order of the vertices of a convex polygon.
fn around(vs: &[Vector]) -> Vec<Vector> {
    let n = vs.len() as f64;
    let cx = vs.iter().map(|v| v[0].to_f64()).sum::<f64>() / n;
    let cy = vs.iter().map(|v| v[1].to_f64()).sum::<f64>() / n;
    let mut out = vs.to_vec();
    out.sort_by(|a, b| {
        let ta = (a[1].to_f64() - cy).atan2(a[0].to_f64() - cx);
        let tb = (b[1].to_f64() - cy).atan2(b[0].to_f64() - cx);
        ta.total_cmp(&tb).then_with(|| a.cmp(b))
    });
    out
}

/// One shape per cone for its slice at level `r`, clipped to `[−B, B]²` with
/// `B = 2·max(max |vertex coordinate|, 1)`, plus axes and exact vertex labels.
pub fn render_slice_svg(fan: &GammaFan, r: &Scalar) -> Result<String> {
    if fan.n() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: fan.n(),
        });
    }
    let slices: Vec<Polyhedron> = fan
        .cones()
        .iter()
        .map(|c| c.slice(r))
        .collect::<Result<_>>()?;
    let mut labels: BTreeSet<Vector> = BTreeSet::new();
    for p in &slices {
        labels.extend(p.vertices());
    }
    let mut bound = Scalar::one();
    for v in &labels {
        for x in v {
            if x.abs() > bound {
                bound = x.abs();
            }
        }
    }
    let b = &Scalar::from_int(2) * &bound;
    let view = Viewport { b: b.to_f64() };
    let clip = [
        LinearForm::new(linalg::from_ints(&[1, 0]), b.clone()),
        LinearForm::new(linalg::from_ints(&[-1, 0]), b.clone()),
        LinearForm::new(linalg::from_ints(&[0, 1]), b.clone()),
        LinearForm::new(linalg::from_ints(&[0, -1]), b.clone()),
    ];

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )
    .unwrap();
    writeln!(out, "<title>level {r} slice, viewport [-{b}, {b}]^2</title>").unwrap();
    writeln!(out, r#"<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>"#).unwrap();
    for (i, p) in slices.iter().enumerate() {
        let mut forms = p.forms().to_vec();
        forms.extend(clip.iter().cloned());
        let clipped = Polyhedron::new(2, forms)?;
        let vs = clipped.vertices();
        let color = PALETTE[i % PALETTE.len()];
        match clipped.dim() {
            None => continue,
            Some(2) => {
                let pts: Vec<String> = around(&vs)
                    .iter()
                    .map(|v| {
                        let (x, y) = view.map(v);
                        format!("{x:.3},{y:.3}")
                    })
                    .collect();
                writeln!(
                    out,
                    r#"<polygon class="cone" data-cone="{i}" points="{}" fill="{color}" fill-opacity="0.45" stroke="{color}" stroke-width="1.5"/>"#,
                    pts.join(" ")
                )
                .unwrap();
            }
            Some(1) => {
                let (x1, y1) = view.map(&vs[0]);
                let (x2, y2) = view.map(&vs[vs.len() - 1]);
                writeln!(
                    out,
                    r#"<line class="cone" data-cone="{i}" x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" stroke="{color}" stroke-width="2.5"/>"#
                )
                .unwrap();
            }
            Some(_) => {
                let (x, y) = view.map(&vs[0]);
                writeln!(
                    out,
                    r#"<circle class="cone" data-cone="{i}" cx="{x:.3}" cy="{y:.3}" r="3" fill="{color}"/>"#
                )
                .unwrap();
            }
        }
    }
    let zero = Scalar::zero();
    let neg = -&b;
    let (ax1, ay) = view.map(&[neg.clone(), zero.clone()]);
    let (ax2, _) = view.map(&[b.clone(), zero.clone()]);
    let (ax, ay1) = view.map(&[zero.clone(), b.clone()]);
    let (_, ay2) = view.map(&[zero.clone(), neg]);
    writeln!(
        out,
        r##"<line class="axis" x1="{ax1:.3}" y1="{ay:.3}" x2="{ax2:.3}" y2="{ay:.3}" stroke="#333" stroke-width="0.75"/>"##
    )
    .unwrap();
    writeln!(
        out,
        r##"<line class="axis" x1="{ax:.3}" y1="{ay1:.3}" x2="{ax:.3}" y2="{ay2:.3}" stroke="#333" stroke-width="0.75"/>"##
    )
    .unwrap();
    for v in &labels {
        let (x, y) = view.map(v);
        writeln!(out, r#"<circle class="vertex" cx="{x:.3}" cy="{y:.3}" r="2.5" fill="black"/>"#).unwrap();
        writeln!(
            out,
            r#"<text class="label" x="{:.3}" y="{:.3}" font-family="monospace" font-size="11">{}</text>"#,
            x + 4.0,
            y - 4.0,
            fmt_point(v)
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    Ok(out)
}
