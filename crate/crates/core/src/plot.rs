//! Self-contained SVG line charts; no external plotting dependency.

use std::fs;
use std::path::Path;

use crate::error::Result;

const COLORS: [&str; 5] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];
const WIDTH: f64 = 960.0;
const HEIGHT: f64 = 540.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 55.0;

pub struct LineChart {
    title: String,
    x_label: String,
    y_label: String,
    traces: Vec<(String, Vec<(f64, f64)>)>,
}

impl LineChart {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Self {
            title: title.to_string(),
            x_label: x_label.to_string(),
            y_label: y_label.to_string(),
            traces: Vec::new(),
        }
    }

    pub fn add_trace(&mut self, label: &str, xs: &[f64], ys: &[f64]) {
        let points = xs.iter().cloned().zip(ys.iter().cloned()).collect();
        self.traces.push((label.to_string(), points));
    }

    pub fn write_svg(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_svg())?;
        Ok(())
    }

    pub fn to_svg(&self) -> String {
        let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
        for (_, pts) in &self.traces {
            for &(x, y) in pts {
                x_min = x_min.min(x);
                x_max = x_max.max(x);
                y_min = y_min.min(y);
                y_max = y_max.max(y);
            }
        }
        if !x_min.is_finite() {
            (x_min, x_max, y_min, y_max) = (0.0, 1.0, 0.0, 1.0);
        }
        if (x_max - x_min).abs() < f64::MIN_POSITIVE {
            x_max = x_min + 1.0;
        }
        y_min = y_min.min(0.0);
        if (y_max - y_min).abs() < f64::MIN_POSITIVE {
            y_max = y_min + 1.0;
        }
        y_max += 0.05 * (y_max - y_min);

        let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        let to_px = |x: f64, y: f64| -> (f64, f64) {
            (
                MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w,
                MARGIN_TOP + (1.0 - (y - y_min) / (y_max - y_min)) * plot_h,
            )
        };

        let mut svg = format!(
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
        );
        svg.push_str(r#"<rect width="100%" height="100%" fill="white"/>"#);
        svg.push_str(&format!(
            r#"<text x="{}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        ));

        // axes and ticks
        svg.push_str(&format!(
            r##"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="#333" stroke-width="1"/>"##
        ));
        for k in 0..=5 {
            let fx = x_min + (x_max - x_min) * k as f64 / 5.0;
            let (px, _) = to_px(fx, y_min);
            svg.push_str(&format!(
                r##"<line x1="{px:.1}" y1="{}" x2="{px:.1}" y2="{}" stroke="#bbb" stroke-width="0.5"/>"##,
                MARGIN_TOP,
                MARGIN_TOP + plot_h
            ));
            svg.push_str(&format!(
                r#"<text x="{px:.1}" y="{}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#,
                MARGIN_TOP + plot_h + 18.0,
                format_tick(fx)
            ));
            let fy = y_min + (y_max - y_min) * k as f64 / 5.0;
            let (_, py) = to_px(x_min, fy);
            svg.push_str(&format!(
                r##"<line x1="{}" y1="{py:.1}" x2="{}" y2="{py:.1}" stroke="#bbb" stroke-width="0.5"/>"##,
                MARGIN_LEFT,
                MARGIN_LEFT + plot_w
            ));
            svg.push_str(&format!(
                r#"<text x="{}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>"#,
                MARGIN_LEFT - 6.0,
                py + 4.0,
                format_tick(fy)
            ));
        }
        svg.push_str(&format!(
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="13" text-anchor="middle">{}</text>"#,
            MARGIN_LEFT + plot_w / 2.0,
            HEIGHT - 12.0,
            escape(&self.x_label)
        ));
        svg.push_str(&format!(
            r#"<text x="16" y="{}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
            MARGIN_TOP + plot_h / 2.0,
            MARGIN_TOP + plot_h / 2.0,
            escape(&self.y_label)
        ));

        // traces and legend
        for (idx, (label, pts)) in self.traces.iter().enumerate() {
            let color = COLORS[idx % COLORS.len()];
            let mut d = String::with_capacity(pts.len() * 16);
            for (i, &(x, y)) in pts.iter().enumerate() {
                let (px, py) = to_px(x, y);
                d.push_str(&format!("{}{px:.2} {py:.2}", if i == 0 { "M" } else { "L" }));
            }
            svg.push_str(&format!(
                r#"<path d="{d}" fill="none" stroke="{color}" stroke-width="1.5"/>"#
            ));
            let ly = MARGIN_TOP + 16.0 + 18.0 * idx as f64;
            svg.push_str(&format!(
                r#"<rect x="{}" y="{:.1}" width="14" height="4" fill="{color}"/>"#,
                MARGIN_LEFT + 10.0,
                ly - 3.0
            ));
            svg.push_str(&format!(
                r#"<text x="{}" y="{ly:.1}" font-family="sans-serif" font-size="12">{}</text>"#,
                MARGIN_LEFT + 30.0,
                escape(label)
            ));
        }

        svg.push_str("</svg>\n");
        svg
    }
}

fn format_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let a = v.abs();
    if (1e-3..1e4).contains(&a) {
        format!("{v:.3}")
    } else {
        format!("{v:.2e}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
