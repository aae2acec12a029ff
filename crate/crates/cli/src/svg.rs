//! Minimal SVG line plots.

use std::fmt::Write;

pub struct Series<'a> {
    pub name: &'a str,
    pub color: &'a str,
    pub points: Vec<(f64, f64)>,
}

const W: f64 = 640.0;
const H: f64 = 420.0;
const PAD: f64 = 50.0;

/// One `<polyline>` per series, an optional dashed horizontal reference
/// line, axes with their ranges as labels.
pub fn line_plot(title: &str, series: &[Series], hline: Option<(f64, &str)>) -> String {
    let pts = series.iter().flat_map(|s| s.points.iter());
    let (mut x0, mut x1, mut y0, mut y1) =
        (f64::INFINITY, f64::NEG_INFINITY, 0.0f64, f64::NEG_INFINITY);
    for &(x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if let Some((y, _)) = hline {
        y1 = y1.max(y);
    }
    if !(x1 > x0) {
        x1 = x0 + 1.0;
    }
    if !(y1 > y0) {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(s, r#"<title>{title}</title>"#);
    let _ = writeln!(
        s,
        r#"<path d="M{PAD} {PAD} V{} H{}" fill="none" stroke="black"/>"#,
        H - PAD,
        W - PAD
    );
    let _ = writeln!(
        s,
        r#"<text x="{PAD}" y="{}" font-size="12">{x0:.3}</text>"#,
        H - PAD + 16.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-size="12" text-anchor="end">{x1:.3}</text>"#,
        W - PAD,
        H - PAD + 16.0
    );
    let _ = writeln!(
        s,
        r#"<text x="4" y="{}" font-size="12">{y0:.3}</text>"#,
        H - PAD
    );
    let _ = writeln!(
        s,
        r#"<text x="4" y="{}" font-size="12">{y1:.3}</text>"#,
        PAD
    );
    if let Some((y, label)) = hline {
        let _ = writeln!(
            s,
            r#"<line x1="{PAD}" x2="{0}" y1="{1:.2}" y2="{1:.2}" stroke="gray" stroke-dasharray="6 4"><title>{label}</title></line>"#,
            W - PAD,
            sy(y)
        );
    }
    for (k, ser) in series.iter().enumerate() {
        let coords: Vec<String> = ser
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline data-name="{}" points="{}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
            ser.name,
            coords.join(" "),
            ser.color
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-size="12" fill="{}">{}</text>"#,
            W - PAD - 150.0,
            PAD + 16.0 * k as f64,
            ser.color,
            ser.name
        );
    }
    s.push_str("</svg>\n");
    s
}
