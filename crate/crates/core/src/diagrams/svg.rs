use std::fmt::Write;

use super::ModuleDiagram;

const COLORS: &[&str] = &[
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];
const DASHES: &[&str] = &["", "6,3", "2,3", "8,3,2,3"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// SVG drawing with vertices in rows by depth and one stroke style per generator.
pub fn to_svg(d: &ModuleDiagram) -> String {
    let depth = d.depths();
    let rows = depth.iter().copied().max().map_or(0, |m| m + 1);
    let mut layers: Vec<Vec<usize>> = vec![Vec::new(); rows];
    for (v, &k) in depth.iter().enumerate() {
        layers[k].push(v);
    }
    let width = layers.iter().map(Vec::len).max().unwrap_or(1).max(1) * 80 + 160;
    let height = rows * 80 + 40;
    let mut pos = vec![(0.0f64, 0.0f64); d.vertices().len()];
    for (k, layer) in layers.iter().enumerate() {
        let span = (width - 160) as f64;
        for (i, &v) in layer.iter().enumerate() {
            let x = 40.0 + span * (i as f64 + 0.5) / layer.len() as f64;
            pos[v] = (x, 40.0 + 80.0 * k as f64);
        }
    }
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    for e in d.edges() {
        let (x1, y1) = pos[e.source];
        let (x2, y2) = pos[e.target];
        let color = COLORS[e.generator % COLORS.len()];
        let dash = DASHES[(e.generator / COLORS.len()) % DASHES.len()];
        let dash_attr = if dash.is_empty() {
            String::new()
        } else {
            format!(r#" stroke-dasharray="{dash}""#)
        };
        let _ = writeln!(
            out,
            r#"  <line x1="{x1:.1}" y1="{y1:.1}" x2="{x2:.1}" y2="{y2:.1}" stroke="{color}" stroke-width="2"{dash_attr}/>"#
        );
    }
    for (v, name) in d.vertices().iter().enumerate() {
        let (x, y) = pos[v];
        let _ = writeln!(
            out,
            r#"  <circle cx="{x:.1}" cy="{y:.1}" r="4" fill="black"/>"#
        );
        let _ = writeln!(
            out,
            r#"  <text x="{:.1}" y="{:.1}" font-size="12">{}</text>"#,
            x + 6.0,
            y - 6.0,
            escape(name)
        );
    }
    let legend_x = width - 110;
    for (g, name) in d.generators().iter().enumerate() {
        let y = 30 + 20 * g;
        let color = COLORS[g % COLORS.len()];
        let _ = writeln!(
            out,
            r#"  <line x1="{legend_x}" y1="{y}" x2="{}" y2="{y}" stroke="{color}" stroke-width="2"/>"#,
            legend_x + 30
        );
        let _ = writeln!(
            out,
            r#"  <text x="{}" y="{}" font-size="12">{}</text>"#,
            legend_x + 36,
            y + 4,
            escape(name)
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::bundled;

    #[test]
    fn draws_every_vertex_and_edge() {
        let d = bundled("d3genEq").unwrap();
        let svg = to_svg(&d);
        assert_eq!(svg.matches("<circle").count(), 7);
        assert_eq!(svg.matches("<line").count(), 12 + 3);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    }
}
