//! Self-contained static SVG plots: matrix heatmaps, filter waveforms and
//! grouped metric bars.

use std::fmt::Write;

use crate::dense::DenseMatrix;

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Diverging blue-white-red colour for `v ∈ [-1, 1]`.
fn diverging(v: f64) -> String {
    let t = v.clamp(-1.0, 1.0);
    let (r, g, b) = if t >= 0.0 {
        (255.0, 255.0 * (1.0 - t), 255.0 * (1.0 - t))
    } else {
        (255.0 * (1.0 + t), 255.0 * (1.0 + t), 255.0)
    };
    format!("#{:02x}{:02x}{:02x}", r as u8, g as u8, b as u8)
}

/// Square-cell heatmap of `m`, coloured on a symmetric scale around 0 and
/// annotated with values when the matrix is small.
pub fn heatmap(m: &DenseMatrix, labels: &[String], title: &str) -> String {
    let (rows, cols) = (m.rows(), m.cols());
    let cell = if rows.max(cols) <= 16 {
        40.0
    } else {
        (640.0 / rows.max(cols) as f64).max(2.0)
    };
    let margin = 40.0;
    let width = margin + cell * cols as f64 + 10.0;
    let height = margin + cell * rows as f64 + 10.0;
    let scale = m.max_abs().max(f64::MIN_POSITIVE);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="10">"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{margin}" y="14" font-size="12">{}</text>"#,
        escape(title)
    );
    for r in 0..rows {
        for c in 0..cols {
            let v = m.get(r, c);
            let (x, y) = (margin + c as f64 * cell, margin + r as f64 * cell);
            let _ = writeln!(
                s,
                r#"<rect x="{x}" y="{y}" width="{cell}" height="{cell}" fill="{}"><title>{r},{c}: {v:.4}</title></rect>"#,
                diverging(v / scale)
            );
            if cell >= 30.0 {
                let _ = writeln!(
                    s,
                    r#"<text x="{}" y="{}" text-anchor="middle">{v:.2}</text>"#,
                    x + cell / 2.0,
                    y + cell / 2.0 + 3.0
                );
            }
        }
    }
    if cell >= 30.0 {
        for (k, label) in labels.iter().enumerate().take(rows.max(cols)) {
            let mid = margin + k as f64 * cell + cell / 2.0;
            let _ = writeln!(
                s,
                r#"<text x="{mid}" y="{}" text-anchor="middle">{}</text>"#,
                margin - 4.0,
                escape(label)
            );
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
                margin - 4.0,
                mid + 3.0,
                escape(label)
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

/// Line plot of several series sampled at common `xs`.
pub fn waveform(xs: &[f64], series: &[(&str, Vec<f64>)], title: &str) -> String {
    let (w, h, pad) = (640.0, 360.0, 48.0);
    let (xmin, xmax) = xs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    let (mut ymin, mut ymax) = series
        .iter()
        .flat_map(|(_, ys)| ys.iter())
        .fold((0.0f64, 0.0f64), |(a, b), &y| (a.min(y), b.max(y)));
    if ymax - ymin < 1e-12 {
        ymin -= 1.0;
        ymax += 1.0;
    }
    let xspan = (xmax - xmin).max(1e-12);
    let px = |x: f64| pad + (x - xmin) / xspan * (w - 2.0 * pad);
    let py = |y: f64| h - pad - (y - ymin) / (ymax - ymin) * (h - 2.0 * pad);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<text x="{pad}" y="20" font-size="13">{}</text>"#, escape(title));
    let _ = writeln!(
        s,
        r##"<line x1="{pad}" y1="{0}" x2="{1}" y2="{0}" stroke="#888"/>"##,
        py(0.0),
        w - pad
    );
    let _ = writeln!(
        s,
        r##"<line x1="{0}" y1="{pad}" x2="{0}" y2="{1}" stroke="#888"/>"##,
        px(0.0_f64.clamp(xmin, xmax)),
        h - pad
    );
    let _ = writeln!(s, r#"<text x="{pad}" y="{}">{xmin}</text>"#, h - pad + 16.0);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="end">{xmax}</text>"#,
        w - pad,
        h - pad + 16.0
    );
    let _ = writeln!(s, r#"<text x="4" y="{}">{ymax:.3}</text>"#, py(ymax) + 4.0);
    let _ = writeln!(s, r#"<text x="4" y="{}">{ymin:.3}</text>"#, py(ymin) + 4.0);
    for (k, (name, ys)) in series.iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        let points: Vec<String> = xs
            .iter()
            .zip(ys)
            .map(|(&x, &y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{}"/>"#,
            points.join(" ")
        );
        let ly = pad + 14.0 * k as f64;
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{ly}" fill="{colour}">{}</text>"#,
            w - pad - 90.0,
            escape(name)
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Grouped bars: one group per metric, one bar per model.
pub fn metric_bars(metrics: &[String], models: &[String], values: &[Vec<f64>], title: &str) -> String {
    let (h, pad, bar) = (320.0, 48.0, 18.0);
    let group = bar * models.len().max(1) as f64 + 16.0;
    let w = 2.0 * pad + group * metrics.len().max(1) as f64 + 120.0;
    let top = values.iter().flatten().cloned().fold(0.0f64, f64::max).max(1e-12);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<text x="{pad}" y="20" font-size="13">{}</text>"#, escape(title));
    let base = h - pad;
    for (g, metric) in metrics.iter().enumerate() {
        let gx = pad + g as f64 * group;
        for (m, _) in models.iter().enumerate() {
            let v = values.get(m).and_then(|row| row.get(g)).copied().unwrap_or(0.0);
            let bh = v / top * (h - 2.0 * pad - 10.0);
            let _ = writeln!(
                s,
                r#"<rect x="{}" y="{}" width="{bar}" height="{bh}" fill="{}"><title>{v:.4}</title></rect>"#,
                gx + m as f64 * bar,
                base - bh,
                PALETTE[m % PALETTE.len()]
            );
        }
        let _ = writeln!(s, r#"<text x="{gx}" y="{}">{}</text>"#, base + 14.0, escape(metric));
    }
    for (m, model) in models.iter().enumerate() {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" fill="{}">{}</text>"#,
            w - 110.0,
            pad + 14.0 * m as f64,
            PALETTE[m % PALETTE.len()],
            escape(model)
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn balanced(s: &str) -> bool {
        s.starts_with("<svg")
            && s.trim_end().ends_with("</svg>")
            && s.matches("<text").count() == s.matches("</text>").count()
    }

    #[test]
    fn heatmap_has_one_cell_per_entry() {
        let m = DenseMatrix::from_vec(2, 2, vec![1.0, -0.5, -0.5, 0.0]).unwrap();
        let s = heatmap(&m, &["a".into(), "b<".into()], "S & T");
        assert!(balanced(&s));
        assert_eq!(s.matches("<rect").count(), 4);
        assert!(s.contains("S &amp; T") && s.contains("b&lt;"));
        assert!(s.contains("#ff0000") && s.contains("#ffffff"));
    }

    #[test]
    fn waveform_and_bars_are_well_formed() {
        let xs = [-1.0, 0.0, 1.0];
        let s = waveform(&xs, &[("f", vec![0.0, 1.0, 2.0]), ("g", vec![1.0, 1.0, 1.0])], "w");
        assert!(balanced(&s));
        assert_eq!(s.matches("<polyline").count(), 2);
        let b = metric_bars(
            &["recall@20".into()],
            &["a".into(), "b".into()],
            &[vec![0.1], vec![0.2]],
            "m",
        );
        assert!(balanced(&b));
        assert_eq!(b.matches("<rect").count(), 2);
    }
}
