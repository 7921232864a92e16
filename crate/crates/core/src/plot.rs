//! SVG rendering of planar instances and witnesses.

use std::fmt::Write;

use thiserror::Error;

use crate::model::{Instance, TverbergWitness};
use crate::rational::to_f64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlotError {
    #[error("plot requires d=2, instance has d={0}")]
    NotPlanar(usize),
}

const SIZE: f64 = 480.0;
const MARGIN: f64 = 32.0;

const CLASS_COLORS: [&str; 10] = [
    "#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];
const FACE_COLORS: [&str; 6] = ["#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3", "#937860"];

struct Frame {
    min: (f64, f64),
    scale: f64,
}

impl Frame {
    fn fit(points: &[(f64, f64)]) -> Self {
        let (mut lo, mut hi) = ((f64::MAX, f64::MAX), (f64::MIN, f64::MIN));
        for &(x, y) in points {
            lo = (lo.0.min(x), lo.1.min(y));
            hi = (hi.0.max(x), hi.1.max(y));
        }
        if points.is_empty() {
            lo = (0.0, 0.0);
            hi = (1.0, 1.0);
        }
        let span = (hi.0 - lo.0).max(hi.1 - lo.1).max(1e-9);
        Self {
            min: lo,
            scale: (SIZE - 2.0 * MARGIN) / span,
        }
    }

    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        (
            MARGIN + (x - self.min.0) * self.scale,
            SIZE - MARGIN - (y - self.min.1) * self.scale,
        )
    }
}

/// Convex hull by monotone chain, counter-clockwise, collinear points dropped.
fn hull(mut pts: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite coordinates"));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let mut lower: Vec<(f64, f64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(f64, f64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Points colored by class; witness faces as translucent polygons,
/// segments or rings; the common point as a cross.
pub fn render_svg(instance: &Instance, witness: Option<&TverbergWitness>) -> Result<String, PlotError> {
    if instance.d() != 2 {
        return Err(PlotError::NotPlanar(instance.d()));
    }
    let coords = instance
        .points()
        .iter()
        .map(|p| (to_f64(&p[0]), to_f64(&p[1])))
        .collect::<Vec<_>>();
    let frame = Frame::fit(&coords);
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);

    if let Some(witness) = witness {
        let _ = writeln!(svg, r#"<g id="faces">"#);
        for (index, face) in witness.faces().iter().enumerate() {
            let color = FACE_COLORS[index % FACE_COLORS.len()];
            let pts = hull(face.vertices().iter().map(|&v| frame.map(coords[v])).collect());
            match pts.as_slice() {
                [] => {}
                [(x, y)] => {
                    let _ = writeln!(
                        svg,
                        r#"<circle cx="{x:.3}" cy="{y:.3}" r="9" fill="none" stroke="{color}" stroke-width="2"/>"#
                    );
                }
                [(x1, y1), (x2, y2)] => {
                    let _ = writeln!(
                        svg,
                        r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" stroke="{color}" stroke-width="3" stroke-opacity="0.6"/>"#
                    );
                }
                polygon => {
                    let list = polygon
                        .iter()
                        .map(|(x, y)| format!("{x:.3},{y:.3}"))
                        .collect::<Vec<_>>()
                        .join(" ");
                    let _ = writeln!(
                        svg,
                        r#"<polygon points="{list}" fill="{color}" fill-opacity="0.25" stroke="{color}" stroke-width="1.5"/>"#
                    );
                }
            }
        }
        let _ = writeln!(svg, "</g>");
    }

    let _ = writeln!(svg, r#"<g id="points">"#);
    for (vertex, &p) in coords.iter().enumerate() {
        let (x, y) = frame.map(p);
        let class = instance.coloring().class_of(vertex);
        let color = CLASS_COLORS[class % CLASS_COLORS.len()];
        let _ = writeln!(
            svg,
            r#"<circle cx="{x:.3}" cy="{y:.3}" r="4.5" fill="{color}" stroke="black" stroke-width="0.5"><title>v{vertex} class {class}</title></circle>"#
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="10">{vertex}</text>"#,
            x + 6.0,
            y - 6.0
        );
    }
    let _ = writeln!(svg, "</g>");

    if let Some(witness) = witness {
        let (x, y) = frame.map((to_f64(&witness.point()[0]), to_f64(&witness.point()[1])));
        let _ = writeln!(
            svg,
            r#"<path id="common-point" d="M {:.3} {:.3} L {:.3} {:.3} M {:.3} {:.3} L {:.3} {:.3}" stroke="black" stroke-width="2"/>"#,
            x - 6.0,
            y - 6.0,
            x + 6.0,
            y + 6.0,
            x - 6.0,
            y + 6.0,
            x + 6.0,
            y - 6.0
        );
    }
    let _ = writeln!(svg, "</svg>");
    Ok(svg)
}
