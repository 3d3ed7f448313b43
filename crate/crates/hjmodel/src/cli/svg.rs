//! Static SVG diagnostics: the line arrangement with labeled cells, and the
//! rhombic tiling with its snakes.
//!
//! Output sticks to a fixed element whitelist (svg, g, rect, line,
//! polyline, polygon, circle, text) so the files validate against SVG 1.1
//! structural rules.

use crate::arrangement::LineFamily;
use crate::error::Result;
use crate::moment::cell_center;
use crate::spectrum::Spectrum;
use crate::tiling::{RhombicTiling, Snake};

const CANVAS: f64 = 640.0;
const MARGIN: f64 = 50.0;

fn fmt(v: f64) -> String {
    format!("{v:.2}")
}

/// Render the straightened arrangement: lines clipped to a box, each cell
/// labeled with its spectrum bitstring.
pub fn arrangement_panel(family: &LineFamily, spectra: &[Spectrum]) -> Result<String> {
    let coeffs = family.coeffs();
    let reach = coeffs
        .iter()
        .flat_map(|&(a, b)| [1.0 / a, 1.0 / b])
        .fold(0.0f64, f64::max)
        * 1.6;
    let scale = (CANVAS - 2.0 * MARGIN) / reach;
    let to_px = |z1: f64, z2: f64| -> (f64, f64) {
        (MARGIN + z1 * scale, CANVAS - MARGIN - z2 * scale)
    };
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{CANVAS}\" height=\"{CANVAS}\" \
         viewBox=\"0 0 {CANVAS} {CANVAS}\">\n"
    ));
    out.push_str(&format!(
        "  <rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#888\"/>\n",
        fmt(MARGIN),
        fmt(MARGIN),
        fmt(CANVAS - 2.0 * MARGIN),
        fmt(CANVAS - 2.0 * MARGIN)
    ));
    out.push_str("  <g stroke=\"#2266aa\" stroke-width=\"1.5\">\n");
    for (k, &(a, b)) in coeffs.iter().enumerate() {
        // Clip a z1 + b z2 = 1 to the [0, reach]^2 box.
        let mut pts: Vec<(f64, f64)> = Vec::new();
        let z2_at = |z1: f64| (1.0 - a * z1) / b;
        let z1_at = |z2: f64| (1.0 - b * z2) / a;
        for (z1, z2) in [
            (0.0, z2_at(0.0)),
            (reach, z2_at(reach)),
            (z1_at(0.0), 0.0),
            (z1_at(reach), reach),
        ] {
            if (0.0..=reach).contains(&z1) && (0.0..=reach).contains(&z2) {
                pts.push((z1, z2));
            }
        }
        pts.sort_by(|p, q| p.partial_cmp(q).unwrap());
        pts.dedup_by(|p, q| (p.0 - q.0).abs() < 1e-12 && (p.1 - q.1).abs() < 1e-12);
        if pts.len() >= 2 {
            let (x1, y1) = to_px(pts[0].0, pts[0].1);
            let (x2, y2) = to_px(pts[pts.len() - 1].0, pts[pts.len() - 1].1);
            out.push_str(&format!(
                "    <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>\n",
                fmt(x1),
                fmt(y1),
                fmt(x2),
                fmt(y2)
            ));
            let orig = family.original_index(k) + 1;
            let (lx, ly) = to_px(pts[pts.len() - 1].0, pts[pts.len() - 1].1);
            out.push_str(&format!(
                "    <text x=\"{}\" y=\"{}\" font-size=\"11\" fill=\"#2266aa\" \
                 stroke=\"none\">t{orig}</text>\n",
                fmt(lx + 4.0),
                fmt(ly - 4.0)
            ));
        }
    }
    out.push_str("  </g>\n  <g font-size=\"11\" fill=\"#333\">\n");
    for spectrum in spectra {
        if let Ok((center, _)) = cell_center(family, spectrum) {
            if center[0] > reach || center[1] > reach {
                continue;
            }
            let (x, y) = to_px(center[0], center[1]);
            out.push_str(&format!(
                "    <text x=\"{}\" y=\"{}\">{}</text>\n",
                fmt(x),
                fmt(y),
                spectrum.bitstring()
            ));
        }
    }
    out.push_str("  </g>\n</svg>\n");
    Ok(out)
}

/// Render the rhombic tiling: rhombi filled, all snakes drawn, and the
/// highlighted snake (if any) emphasized.
pub fn tiling_panel(tiling: &RhombicTiling, highlight: Option<&Snake>) -> String {
    let t = tiling.t() as f64;
    let half = (tiling.t() / 2) as f64 + 1.0;
    let scale = (CANVAS - 2.0 * MARGIN) / (2.0 * half.max(t));
    let to_px = |x: i64, y: i64| -> (f64, f64) {
        (
            CANVAS / 2.0 + x as f64 * scale,
            CANVAS - MARGIN - y as f64 * scale,
        )
    };
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{CANVAS}\" height=\"{CANVAS}\" \
         viewBox=\"0 0 {CANVAS} {CANVAS}\">\n"
    ));
    out.push_str("  <g fill=\"#cfe3f5\" stroke=\"#6699cc\" stroke-width=\"1\">\n");
    for rhombus in tiling.rhombi() {
        // vertices come as [V_k, V_{k+1}, V_{k+2}, V'_{k+1}]: reorder into
        // the quadrilateral boundary V_k, V_{k+1}, V_{k+2}, V'_{k+1}.
        let ordered = [
            rhombus.vertices[0],
            rhombus.vertices[1],
            rhombus.vertices[2],
            rhombus.vertices[3],
        ];
        let pts: Vec<String> = [ordered[0], ordered[1], ordered[2], ordered[3]]
            .iter()
            .map(|&(x, y)| {
                let (px, py) = to_px(x, y);
                format!("{},{}", fmt(px), fmt(py))
            })
            .collect();
        out.push_str(&format!("    <polygon points=\"{}\"/>\n", pts.join(" ")));
    }
    out.push_str("  </g>\n  <g fill=\"none\" stroke=\"#444\" stroke-width=\"1\">\n");
    for snake in tiling.snakes() {
        out.push_str(&polyline(snake, &to_px));
    }
    out.push_str("  </g>\n");
    if let Some(snake) = highlight {
        out.push_str("  <g fill=\"none\" stroke=\"#cc3322\" stroke-width=\"3\">\n");
        out.push_str(&polyline(snake, &to_px));
        out.push_str("  </g>\n");
    }
    out.push_str("  <g fill=\"#222\">\n");
    for v in tiling.vertices() {
        let (px, py) = to_px(v.position.0, v.position.1);
        out.push_str(&format!(
            "    <circle cx=\"{}\" cy=\"{}\" r=\"2.5\"/>\n",
            fmt(px),
            fmt(py)
        ));
    }
    out.push_str("  </g>\n</svg>\n");
    out
}

fn polyline(snake: &Snake, to_px: &dyn Fn(i64, i64) -> (f64, f64)) -> String {
    let pts: Vec<String> = snake
        .vertices()
        .iter()
        .map(|&(x, y)| {
            let (px, py) = to_px(x, y);
            format!("{},{}", fmt(px), fmt(py))
        })
        .collect();
    format!("    <polyline points=\"{}\"/>\n", pts.join(" "))
}

/// Two panels side by side: the arrangement on the left, the tiling on the
/// right, as nested svg elements.
pub fn combined_panel(arrangement: &str, tiling: &str) -> String {
    let strip = |panel: &str| -> String {
        panel
            .replacen(
                &format!(
                    "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{CANVAS}\" height=\"{CANVAS}\" \
                     viewBox=\"0 0 {CANVAS} {CANVAS}\">"
                ),
                "",
                1,
            )
            .trim_end()
            .trim_end_matches("</svg>")
            .to_string()
    };
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{CANVAS}\" \
         viewBox=\"0 0 {} {CANVAS}\">\n",
        2.0 * CANVAS,
        2.0 * CANVAS
    ));
    out.push_str(&format!(
        "<svg x=\"0\" y=\"0\" width=\"{CANVAS}\" height=\"{CANVAS}\">{}</svg>\n",
        strip(arrangement)
    ));
    out.push_str(&format!(
        "<svg x=\"{CANVAS}\" y=\"0\" width=\"{CANVAS}\" height=\"{CANVAS}\">{}</svg>\n",
        strip(tiling)
    ));
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{enumerate_spectra, transform_coordinates};
    use crate::series::{NormalizedPrices, TimeSeriesRecord};
    use crate::tiling::tiling_from_word;

    /// Minimal structural validation: tags balanced, only whitelisted
    /// elements, attributes quoted.
    fn check_svg(svg: &str) {
        let allowed = [
            "svg", "g", "rect", "line", "polyline", "polygon", "circle", "text",
        ];
        let mut stack: Vec<String> = Vec::new();
        let mut rest = svg;
        while let Some(start) = rest.find('<') {
            let end = rest[start..].find('>').expect("unclosed tag") + start;
            let tag = &rest[start + 1..end];
            rest = &rest[end + 1..];
            if let Some(name) = tag.strip_prefix('/') {
                assert_eq!(stack.pop().as_deref(), Some(name.trim()), "tag mismatch");
                continue;
            }
            let self_closing = tag.ends_with('/');
            let name = tag
                .trim_end_matches('/')
                .split_whitespace()
                .next()
                .unwrap()
                .to_string();
            assert!(allowed.contains(&name.as_str()), "element {name} not allowed");
            if !self_closing {
                stack.push(name);
            }
        }
        assert!(stack.is_empty(), "unbalanced tags: {stack:?}");
    }

    #[test]
    fn arrangement_svg_is_well_formed() {
        let records = vec![
            TimeSeriesRecord::new(1, 2.0, 1.0, vec![1.0, 0.6]).unwrap(),
            TimeSeriesRecord::new(2, 1.0, 1.0, vec![0.7, 1.2]).unwrap(),
        ];
        let phat = NormalizedPrices::from_records(&records).unwrap();
        let family = transform_coordinates(-0.5, &phat).unwrap();
        let spectra: Vec<_> = enumerate_spectra(&family).unwrap().into_iter().collect();
        let svg = arrangement_panel(&family, &spectra).unwrap();
        check_svg(&svg);
        assert!(svg.contains("<line"));
        assert!(svg.contains("00")); // some cell label
    }

    #[test]
    fn combined_svg_is_well_formed() {
        let records = vec![
            TimeSeriesRecord::new(1, 2.0, 1.0, vec![1.0, 0.6]).unwrap(),
            TimeSeriesRecord::new(2, 1.0, 1.0, vec![0.7, 1.2]).unwrap(),
        ];
        let phat = NormalizedPrices::from_records(&records).unwrap();
        let family = transform_coordinates(-0.5, &phat).unwrap();
        let spectra: Vec<_> = enumerate_spectra(&family).unwrap().into_iter().collect();
        let arrangement = arrangement_panel(&family, &spectra).unwrap();
        let word = crate::arrangement::FormalWord::new(vec![1], 2).unwrap();
        let tiling = tiling_from_word(&word, 2).unwrap();
        let tiles = tiling_panel(&tiling, None);
        let combined = combined_panel(&arrangement, &tiles);
        check_svg(&combined);
        assert!(combined.matches("<svg").count() >= 3);
    }

    #[test]
    fn tiling_svg_is_well_formed() {
        let word = crate::arrangement::FormalWord::new(vec![1, 2, 1], 4).unwrap();
        let tiling = tiling_from_word(&word, 3).unwrap();
        let svg = tiling_panel(&tiling, Some(&tiling.snakes()[0]));
        check_svg(&svg);
        assert!(svg.contains("<polygon"));
        assert!(svg.contains("polyline"));
    }
}
