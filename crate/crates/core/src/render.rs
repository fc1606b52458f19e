//! Static SVG drawings of instances, with an optional highlighted solution.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::geom::{rat_to_f64, Seg};
use crate::io::InstanceFile;

type Line = ((f64, f64), (f64, f64));

struct Item {
    line: Line,
    /// Highlighted items are drawn thick and red.
    selected: bool,
    dashed: bool,
}

fn seg_line(s: &Seg) -> Line {
    match s {
        Seg::H(h) => ((rat_to_f64(&h.x_lo), rat_to_f64(&h.y)), (rat_to_f64(&h.x_hi), rat_to_f64(&h.y))),
        Seg::V(v) => ((rat_to_f64(&v.x), rat_to_f64(&v.y_lo)), (rat_to_f64(&v.x), rat_to_f64(&v.y_hi))),
    }
}

fn items(inst: &InstanceFile, sel: &BTreeSet<usize>) -> Vec<Item> {
    let mut out = Vec::new();
    let vseg = |x: f64, lo: f64, hi: f64, selected: bool, out: &mut Vec<Item>| {
        out.push(Item { line: ((x, lo), (x, hi)), selected, dashed: false })
    };
    match inst {
        InstanceFile::Ssr(i) => {
            let left = i.segments.iter().map(|s| rat_to_f64(&s.x)).fold(0.0, f64::min) - 1.0;
            for r in &i.rays {
                let y = rat_to_f64(&r.y);
                out.push(Item { line: ((left, y), (rat_to_f64(&r.x_right), y)), selected: sel.contains(&r.id), dashed: true });
            }
            for s in &i.segments {
                vseg(rat_to_f64(&s.x), rat_to_f64(&s.y_lo), rat_to_f64(&s.y_hi), false, &mut out);
            }
        }
        InstanceFile::Srs(i) => {
            let left = i.segments.iter().map(|s| rat_to_f64(&s.x)).fold(0.0, f64::min) - 1.0;
            for r in &i.rays {
                let y = rat_to_f64(&r.y);
                out.push(Item { line: ((left, y), (rat_to_f64(&r.x_right), y)), selected: false, dashed: true });
            }
            for s in &i.segments {
                vseg(rat_to_f64(&s.x), rat_to_f64(&s.y_lo), rat_to_f64(&s.y_hi), sel.contains(&s.id), &mut out);
            }
        }
        InstanceFile::StabbedL(i) => {
            for p in &i.paths {
                for l in p.legs() {
                    out.push(Item { line: seg_line(&l), selected: sel.contains(&p.id), dashed: false });
                }
            }
            let ys: Vec<f64> = i.paths.iter().map(|p| rat_to_f64(&p.corner.1)).collect();
            let top = i.paths.iter().map(|p| rat_to_f64(&(&p.corner.1 + &p.vlen))).fold(1.0, f64::max);
            let x = rat_to_f64(&i.line_x);
            out.push(Item { line: ((x, ys.iter().copied().fold(0.0, f64::min) - 1.0), (x, top + 1.0)), selected: false, dashed: true });
        }
        InstanceFile::OrthoPsd(i) => {
            for s in i.segments() {
                let dashed = !i.constraint_ids.contains(&s.id());
                out.push(Item { line: seg_line(&s), selected: sel.contains(&s.id()), dashed });
            }
        }
        InstanceFile::UnitBk(i) => {
            for p in &i.paths {
                for l in p.segments() {
                    out.push(Item { line: seg_line(&l), selected: sel.contains(&p.id), dashed: false });
                }
            }
        }
    }
    out
}

/// Renders the instance; ids in `selected` are highlighted.
pub fn render_svg(inst: &InstanceFile, selected: &BTreeSet<usize>) -> String {
    let items = items(inst, selected);
    let pts = items.iter().flat_map(|it| [it.line.0, it.line.1]);
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for (x, y) in pts {
        x0 = x0.min(x);
        y0 = y0.min(y);
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    if items.is_empty() {
        (x0, y0, x1, y1) = (0.0, 0.0, 1.0, 1.0);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-9);
    let scale = 760.0 / span;
    let tx = |x: f64| 20.0 + (x - x0) * scale;
    let ty = |y: f64| 20.0 + (y1 - y) * scale;
    let (w, h) = (tx(x1) + 20.0, ty(y0) + 20.0);
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.1}" height="{h:.1}" viewBox="0 0 {w:.1} {h:.1}">"#);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for it in &items {
        let ((ax, ay), (bx, by)) = it.line;
        let (color, width) = if it.selected { ("#d62728", 3.0) } else { ("#1f77b4", 1.5) };
        let dash = if it.dashed { r#" stroke-dasharray="6 3""# } else { "" };
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-width="{width}"{dash}/>"#,
            tx(ax),
            ty(ay),
            tx(bx),
            ty(by)
        );
    }
    s.push_str("</svg>\n");
    s
}
