//! Static SVG line plots and heatmaps.

use std::fmt::Write;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const COLORBAR: f64 = 90.0;

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

pub struct Series<'a> {
    pub label: &'a str,
    pub x: &'a [f64],
    pub y: &'a [f64],
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn finite_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if lo == hi {
        let pad = if lo == 0.0 { 1.0 } else { lo.abs() * 0.05 };
        (lo - pad, hi + pad)
    } else {
        (lo, hi)
    }
}

/// Roughly five round tick positions within `[lo, hi]`.
fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let raw = (hi - lo) / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let k0 = (lo / step - 1e-9).ceil() as i64;
    let k1 = (hi / step + 1e-9).floor() as i64;
    let mut out: Vec<f64> = (k0..=k1).map(|k| k as f64 * step).collect();
    for t in &mut out {
        *t = t.clamp(lo, hi);
    }
    out
}

fn fmt_tick(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-3 || v.abs() >= 1e5) {
        format!("{v:.1e}")
    } else {
        let s = format!("{v:.4}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    plot_w: f64,
    plot_h: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x0) / (self.x1 - self.x0) * self.plot_w
    }

    fn py(&self, y: f64) -> f64 {
        TOP + (self.y1 - y) / (self.y1 - self.y0) * self.plot_h
    }

    fn axes(&self, svg: &mut String, title: &str, xlabel: &str, ylabel: &str) {
        let (l, t, w, h) = (LEFT, TOP, self.plot_w, self.plot_h);
        let _ = writeln!(
            svg,
            r#"<rect x="{l}" y="{t}" width="{w}" height="{h}" fill="none" stroke="black"/>"#
        );
        for tx in ticks(self.x0, self.x1) {
            let x = self.px(tx);
            let _ = writeln!(
                svg,
                r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle" font-size="12">{}</text>"#,
                t + h,
                t + h + 5.0,
                t + h + 20.0,
                fmt_tick(tx)
            );
        }
        for ty in ticks(self.y0, self.y1) {
            let y = self.py(ty);
            let _ = writeln!(
                svg,
                r#"<line x1="{:.2}" y1="{y:.2}" x2="{l}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end" font-size="12">{}</text>"#,
                l - 5.0,
                l - 8.0,
                y + 4.0,
                fmt_tick(ty)
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="14">{}</text>"#,
            l + w / 2.0,
            t + h + 45.0,
            escape(xlabel)
        );
        let _ = writeln!(
            svg,
            r#"<text x="20" y="{:.2}" text-anchor="middle" font-size="14" transform="rotate(-90 20 {:.2})">{}</text>"#,
            t + h / 2.0,
            t + h / 2.0,
            escape(ylabel)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
            l + w / 2.0,
            escape(title)
        );
    }
}

fn header(svg: &mut String, desc: &str) {
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, "<desc>{}</desc>", escape(desc));
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
}

/// Line plot of one or more series sharing axes.
pub fn line_plot(title: &str, xlabel: &str, ylabel: &str, series: &[Series<'_>]) -> String {
    let (x0, x1) = finite_range(series.iter().flat_map(|s| s.x.iter().copied()));
    let (y0, y1) = finite_range(series.iter().flat_map(|s| s.y.iter().copied()));
    let frame = Frame {
        x0,
        x1,
        y0,
        y1,
        plot_w: WIDTH - LEFT - RIGHT,
        plot_h: HEIGHT - TOP - BOTTOM,
    };
    let mut svg = String::new();
    header(&mut svg, &format!("{title}; x in [{x0:e}, {x1:e}], y in [{y0:e}, {y1:e}]"));
    frame.axes(&mut svg, title, xlabel, ylabel);
    for (k, s) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let mut path = String::new();
        let mut pen_up = true;
        for (&x, &y) in s.x.iter().zip(s.y) {
            if !x.is_finite() || !y.is_finite() {
                pen_up = true;
                continue;
            }
            let _ = write!(path, "{}{:.2},{:.2} ", if pen_up { "M" } else { "L" }, frame.px(x), frame.py(y));
            pen_up = false;
        }
        let _ = writeln!(
            svg,
            r#"<path d="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            path.trim_end()
        );
        let ly = TOP + 18.0 + 18.0 * k as f64;
        let lx = WIDTH - RIGHT - 130.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx}" y1="{ly}" x2="{:.1}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{:.1}" y="{:.1}" font-size="12">{}</text>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            escape(s.label)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn viridis(t: f64) -> String {
    let c = colorous::VIRIDIS.eval_continuous(t.clamp(0.0, 1.0));
    format!("#{c:x}")
}

/// Cell-centred heatmap of a row-major `ys.len() × xs.len()` matrix with a
/// colorbar. Non-finite cells are drawn grey.
pub fn heatmap(title: &str, xlabel: &str, ylabel: &str, xs: &[f64], ys: &[f64], values: &[f64]) -> String {
    let (vmin, vmax) = finite_range(values.iter().copied());
    let half = |v: &[f64]| if v.len() > 1 { 0.5 * (v[1] - v[0]) } else { 0.5 };
    let (hx, hy) = (half(xs), half(ys));
    let frame = Frame {
        x0: xs.first().copied().unwrap_or(0.0) - hx,
        x1: xs.last().copied().unwrap_or(1.0) + hx,
        y0: ys.first().copied().unwrap_or(0.0) - hy,
        y1: ys.last().copied().unwrap_or(1.0) + hy,
        plot_w: WIDTH - LEFT - RIGHT - COLORBAR,
        plot_h: HEIGHT - TOP - BOTTOM,
    };
    let mut svg = String::new();
    header(&mut svg, &format!("{title}; colormap viridis; min {vmin:.17e}; max {vmax:.17e}"));
    let nx = xs.len();
    for (iy, &y) in ys.iter().enumerate() {
        for (ix, &x) in xs.iter().enumerate() {
            let v = values[iy * nx + ix];
            let fill = if v.is_finite() {
                viridis((v - vmin) / (vmax - vmin))
            } else {
                "#999999".to_string()
            };
            let (xa, xb) = (frame.px(x - hx), frame.px(x + hx));
            let (ya, yb) = (frame.py(y + hy), frame.py(y - hy));
            let _ = writeln!(
                svg,
                r#"<rect x="{xa:.2}" y="{ya:.2}" width="{:.2}" height="{:.2}" fill="{fill}" stroke="{fill}" stroke-width="0.3"/>"#,
                xb - xa,
                yb - ya
            );
        }
    }
    frame.axes(&mut svg, title, xlabel, ylabel);

    let bx = LEFT + frame.plot_w + 25.0;
    let steps = 64;
    let bh = frame.plot_h / steps as f64;
    for k in 0..steps {
        let t = (k as f64 + 0.5) / steps as f64;
        let y = TOP + frame.plot_h - (k + 1) as f64 * bh;
        let _ = writeln!(
            svg,
            r#"<rect x="{bx:.2}" y="{y:.2}" width="20" height="{:.2}" fill="{}"/>"#,
            bh + 0.3,
            viridis(t)
        );
    }
    let _ = writeln!(
        svg,
        r#"<rect x="{bx:.2}" y="{TOP}" width="20" height="{:.2}" fill="none" stroke="black"/>"#,
        frame.plot_h
    );
    for tv in ticks(vmin, vmax) {
        let y = TOP + frame.plot_h * (1.0 - (tv - vmin) / (vmax - vmin));
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-size="11">{}</text>"#,
            bx + 24.0,
            y + 4.0,
            fmt_tick(tv)
        );
    }
    svg.push_str("</svg>\n");
    svg
}
