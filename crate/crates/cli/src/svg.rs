//! SVG rendering of a classified diagram with boundary overlays.

use std::fmt::Write as _;

use kapitza_core::stability::Stability;
use kapitza_core::BoundaryCurve;

use crate::format::DiagramRow;

const PLOT: f64 = 600.0;
const MARGIN: f64 = 50.0;

fn sorted_unique(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

fn fill(c: Stability) -> &'static str {
    match c {
        Stability::Stable => "#ffffff",
        Stability::Unstable => "#a0a0a0",
        Stability::Boundary => "#404040",
    }
}

/// Renders cells (white stable, grey unstable) and black boundary polylines.
/// Rows must form a full rectangular grid.
pub fn render(rows: &[DiagramRow], curves: &[BoundaryCurve], title: &str) -> Option<String> {
    let alphas = sorted_unique(rows.iter().map(|r| r.alpha).collect());
    let betas = sorted_unique(rows.iter().map(|r| r.beta).collect());
    let (na, nb) = (alphas.len(), betas.len());
    if na < 2 || nb < 2 || rows.len() != na * nb {
        return None;
    }
    let mut classes = vec![Stability::Boundary; na * nb];
    for r in rows {
        let i = alphas.binary_search_by(|a| a.total_cmp(&r.alpha)).ok()?;
        let j = betas.binary_search_by(|b| b.total_cmp(&r.beta)).ok()?;
        classes[j * na + i] = r.class;
    }
    let ha = (alphas[na - 1] - alphas[0]) / (na - 1) as f64;
    let hb = (betas[nb - 1] - betas[0]) / (nb - 1) as f64;
    let (a0, a1) = (alphas[0] - 0.5 * ha, alphas[na - 1] + 0.5 * ha);
    let (b0, b1) = (betas[0] - 0.5 * hb, betas[nb - 1] + 0.5 * hb);
    let x = |a: f64| MARGIN + (a - a0) / (a1 - a0) * PLOT;
    let y = |b: f64| MARGIN + (b1 - b) / (b1 - b0) * PLOT;
    let cw = PLOT / na as f64;
    let ch = PLOT / nb as f64;

    let size = PLOT + 2.0 * MARGIN;
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(s, "<title>{title}</title>");
    let _ = writeln!(s, r#"<g shape-rendering="crispEdges" stroke="none">"#);
    // one rect per horizontal run of equal class
    for j in 0..nb {
        let top = MARGIN + (nb - 1 - j) as f64 * ch;
        let mut i = 0;
        while i < na {
            let c = classes[j * na + i];
            let mut k = i + 1;
            while k < na && classes[j * na + k] == c {
                k += 1;
            }
            let _ = writeln!(
                s,
                r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{}"/>"#,
                MARGIN + i as f64 * cw,
                top,
                (k - i) as f64 * cw,
                ch,
                fill(c)
            );
            i = k;
        }
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g fill="none" stroke="black" stroke-width="1.5">"#);
    for c in curves {
        let pts: Vec<String> = c
            .points
            .iter()
            .filter(|(a, b)| (a0..=a1).contains(a) && (b0..=b1).contains(b))
            .map(|&(a, b)| format!("{:.3},{:.3}", x(a), y(b)))
            .collect();
        if pts.len() >= 2 {
            let _ = writeln!(s, r#"<polyline points="{}"/>"#, pts.join(" "));
        }
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{PLOT}" height="{PLOT}" fill="none" stroke="black" stroke-width="1"/>"#
    );
    let label = |s: &mut String, px: f64, py: f64, anchor: &str, text: String| {
        let _ = writeln!(
            s,
            r#"<text x="{px:.3}" y="{py:.3}" font-family="sans-serif" font-size="12" text-anchor="{anchor}">{text}</text>"#
        );
    };
    label(
        &mut s,
        MARGIN,
        MARGIN + PLOT + 18.0,
        "start",
        format!("{:.3}", alphas[0]),
    );
    label(
        &mut s,
        MARGIN + PLOT,
        MARGIN + PLOT + 18.0,
        "end",
        format!("{:.3}", alphas[na - 1]),
    );
    label(
        &mut s,
        MARGIN + 0.5 * PLOT,
        MARGIN + PLOT + 36.0,
        "middle",
        "alpha".into(),
    );
    label(
        &mut s,
        MARGIN - 6.0,
        MARGIN + PLOT,
        "end",
        format!("{:.3}", betas[0]),
    );
    label(
        &mut s,
        MARGIN - 6.0,
        MARGIN + 12.0,
        "end",
        format!("{:.3}", betas[nb - 1]),
    );
    label(
        &mut s,
        MARGIN - 6.0,
        MARGIN + 0.5 * PLOT,
        "end",
        "beta".into(),
    );
    let _ = writeln!(s, "</svg>");
    Some(s)
}
