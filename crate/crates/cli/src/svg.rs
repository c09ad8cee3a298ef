//! Minimal hand-emitted SVG plots: no plotting dependency, no external
//! resources, deterministic output.

use std::fmt::Write as _;

const PLOT_W: f64 = 640.0;
const PLOT_H: f64 = 480.0;
const MARGIN_L: f64 = 72.0;
const MARGIN_R: f64 = 24.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 56.0;

/// Coordinate values are rounded to 1/100 px so the files stay small and
/// byte-stable.
fn px(v: f64) -> String {
    let r = (v * 100.0).round() / 100.0;
    format!("{r}")
}

struct Frame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
    left: f64,
    top: f64,
    width: f64,
    height: f64,
}

impl Frame {
    fn new(x: (f64, f64), y: (f64, f64), left: f64, top: f64, width: f64, height: f64) -> Frame {
        let pad = |lo: f64, hi: f64| {
            let span = (hi - lo).abs().max(1e-12);
            (lo - 0.06 * span, hi + 0.06 * span)
        };
        let (x_min, x_max) = pad(x.0, x.1);
        let (y_min, y_max) = pad(y.0, y.1);
        Frame {
            x_min,
            x_max,
            y_min,
            y_max,
            left,
            top,
            width,
            height,
        }
    }

    fn sx(&self, x: f64) -> f64 {
        self.left + (x - self.x_min) / (self.x_max - self.x_min) * self.width
    }

    fn sy(&self, y: f64) -> f64 {
        // SVG y grows downward.
        self.top + (self.y_max - y) / (self.y_max - self.y_min) * self.height
    }
}

/// Rounds to a 1/2/5 x 10^k tick step near `span / 5`.
fn tick_step(span: f64) -> f64 {
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.abs().log10().floor());
    let frac = raw / mag;
    let nice = if frac < 1.5 {
        1.0
    } else if frac < 3.5 {
        2.0
    } else if frac < 7.5 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let step = tick_step(hi - lo);
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi + 1e-12 * step {
        // snap values that should be zero
        out.push(if t.abs() < 1e-12 * step { 0.0 } else { t });
        t += step;
    }
    out
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        return "0".to_owned();
    }
    let a = v.abs();
    if a >= 0.01 && a < 10000.0 {
        let s = format!("{:.6}", v);
        let s = s.trim_end_matches('0').trim_end_matches('.');
        s.to_owned()
    } else {
        format!("{v:e}")
    }
}

fn axes(out: &mut String, f: &Frame, x_label: &str, y_label: &str) {
    let _ = write!(
        out,
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>",
        px(f.left), px(f.top), px(f.width), px(f.height)
    );
    for t in ticks(f.x_min, f.x_max) {
        let x = f.sx(t);
        let _ = write!(
            out,
            "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{y1}\" stroke=\"#333333\" stroke-width=\"1\"/>\
             <text x=\"{x0}\" y=\"{yt}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{label}</text>",
            x0 = px(x),
            y0 = px(f.top + f.height),
            y1 = px(f.top + f.height + 5.0),
            yt = px(f.top + f.height + 18.0),
            label = tick_label(t)
        );
    }
    for t in ticks(f.y_min, f.y_max) {
        let y = f.sy(t);
        let _ = write!(
            out,
            "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"#333333\" stroke-width=\"1\"/>\
             <text x=\"{xt}\" y=\"{yt}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{label}</text>",
            x0 = px(f.left - 5.0),
            x1 = px(f.left),
            y0 = px(y),
            xt = px(f.left - 8.0),
            yt = px(y + 4.0),
            label = tick_label(t)
        );
    }
    let _ = write!(
        out,
        "<text x=\"{x}\" y=\"{y}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">{x_label}</text>",
        x = px(f.left + f.width / 2.0),
        y = px(f.top + f.height + 38.0)
    );
    let _ = write!(
        out,
        "<text x=\"{x}\" y=\"{y}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 {x} {y})\">{y_label}</text>",
        x = px(f.left - 52.0),
        y = px(f.top + f.height / 2.0)
    );
}

fn document(width: f64, height: f64, title: &str, body: &str) -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n\
         <rect x=\"0\" y=\"0\" width=\"{w}\" height=\"{h}\" fill=\"#ffffff\"/>\n\
         <text x=\"{tx}\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">{title}</text>\n\
         {body}\n</svg>\n",
        w = px(width),
        h = px(height),
        tx = px(width / 2.0),
        title = title,
        body = body
    )
}

/// Scatter of resonances in the complex plane.  Each computed root (filled)
/// is drawn with its mirror image about the imaginary axis (hollow) to show
/// the spectral symmetry.
pub fn spectrum_svg(roots: &[(f64, f64)], title: &str) -> String {
    let re_max = roots.iter().map(|r| r.0.abs()).fold(1e-12, f64::max);
    let im_min = roots.iter().map(|r| r.1).fold(0.0, f64::min);
    let im_max = roots.iter().map(|r| r.1).fold(0.0, f64::max);
    let frame = Frame::new(
        (-re_max, re_max),
        (im_min, im_max),
        MARGIN_L,
        MARGIN_T,
        PLOT_W - MARGIN_L - MARGIN_R,
        PLOT_H - MARGIN_T - MARGIN_B,
    );
    let mut body = String::new();
    axes(&mut body, &frame, "Re omega", "Im omega");
    // imaginary axis reference
    let _ = write!(
        body,
        "<line x1=\"{x}\" y1=\"{y0}\" x2=\"{x}\" y2=\"{y1}\" stroke=\"#bbbbbb\" stroke-width=\"1\" stroke-dasharray=\"4 3\"/>",
        x = px(frame.sx(0.0)),
        y0 = px(frame.top),
        y1 = px(frame.top + frame.height)
    );
    for &(re, im) in roots {
        let _ = write!(
            body,
            "<circle cx=\"{}\" cy=\"{}\" r=\"3.5\" fill=\"#1f6fb2\"/>",
            px(frame.sx(re)),
            px(frame.sy(im))
        );
        let _ = write!(
            body,
            "<circle cx=\"{}\" cy=\"{}\" r=\"3.5\" fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1.2\"/>",
            px(frame.sx(-re)),
            px(frame.sy(im))
        );
    }
    document(PLOT_W, PLOT_H, title, &body)
}

/// Diverging blue-white-red map for `v` in `[-limit, limit]`.
fn heat_color(v: f64, limit: f64) -> String {
    let t = if limit > 0.0 {
        (v / limit).clamp(-1.0, 1.0)
    } else {
        0.0
    };
    let (r, g, b) = if t >= 0.0 {
        (255.0, 255.0 * (1.0 - t), 255.0 * (1.0 - t))
    } else {
        (255.0 * (1.0 + t), 255.0 * (1.0 + t), 255.0)
    };
    format!("#{:02x}{:02x}{:02x}", r as u8, g as u8, b as u8)
}

/// Mode figure: radial trace of `Re u` with dotted interface markers on the
/// left, plane heatmap of `Re u` with the layer circles on the right.
#[allow(clippy::too_many_arguments)]
pub fn mode_svg(
    radial: &[(f64, f64)],
    markers: &[f64],
    plane: &[f64],
    resolution: usize,
    half_extent: f64,
    circles: &[f64],
    title: &str,
) -> String {
    assert_eq!(plane.len(), resolution * resolution);
    let total_w = 1160.0;
    let total_h = 520.0;

    // Left panel: radial line plot.
    let r_max = radial.iter().map(|p| p.0).fold(0.0, f64::max);
    let u_min = radial.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let u_max = radial.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let left = Frame::new((0.0, r_max), (u_min.min(0.0), u_max.max(0.0)), MARGIN_L, 56.0, 440.0, 380.0);
    let mut body = String::new();
    axes(&mut body, &left, "r", "Re u");
    for &m in markers {
        let _ = write!(
            body,
            "<line x1=\"{x}\" y1=\"{y0}\" x2=\"{x}\" y2=\"{y1}\" stroke=\"#cc0000\" stroke-width=\"1.2\" stroke-dasharray=\"2 4\"/>",
            x = px(left.sx(m)),
            y0 = px(left.top),
            y1 = px(left.top + left.height)
        );
    }
    let pts: Vec<String> = radial
        .iter()
        .map(|&(r, u)| format!("{},{}", px(left.sx(r)), px(left.sy(u))))
        .collect();
    let _ = write!(
        body,
        "<polyline points=\"{}\" fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1.6\"/>",
        pts.join(" ")
    );

    // Right panel: heatmap.
    let hm_left = 620.0;
    let hm_top = 56.0;
    let hm_size = 400.0;
    let cell = hm_size / resolution as f64;
    let limit = plane.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    for iy in 0..resolution {
        for ix in 0..resolution {
            let v = plane[iy * resolution + ix];
            // y index 0 is the smallest coordinate; flip so +y points up.
            let _ = write!(
                body,
                "<rect x=\"{x}\" y=\"{y}\" width=\"{w}\" height=\"{w}\" fill=\"{c}\"/>",
                x = px(hm_left + ix as f64 * cell),
                y = px(hm_top + (resolution - 1 - iy) as f64 * cell),
                w = px(cell + 0.05),
                c = heat_color(v, limit)
            );
        }
    }
    let scale = hm_size / (2.0 * half_extent);
    let (cx, cy) = (hm_left + hm_size / 2.0, hm_top + hm_size / 2.0);
    for &r in circles {
        let _ = write!(
            body,
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>",
            px(cx),
            px(cy),
            px(r * scale)
        );
    }
    let _ = write!(
        body,
        "<rect x=\"{x}\" y=\"{y}\" width=\"{s}\" height=\"{s}\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\
         <text x=\"{tx}\" y=\"{ty}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">plane section, extent {e}</text>",
        x = px(hm_left),
        y = px(hm_top),
        s = px(hm_size),
        tx = px(cx),
        ty = px(hm_top + hm_size + 24.0),
        e = tick_label(half_extent)
    );

    document(total_w, total_h, title, &body)
}

/// Structural well-formedness: tags balance, attributes are quoted, and the
/// document references nothing external (no href, no url(), the only URL-like
/// text is the XML namespace).
pub fn is_well_formed(svg: &str) -> bool {
    if svg.contains("href") || svg.contains("url(") {
        return false;
    }
    let mut stack: Vec<String> = Vec::new();
    let mut rest = svg;
    while let Some(start) = rest.find('<') {
        let Some(end_rel) = rest[start..].find('>') else {
            return false;
        };
        let tag = &rest[start + 1..start + end_rel];
        rest = &rest[start + end_rel + 1..];
        if tag.starts_with('?') {
            if !tag.ends_with('?') {
                return false;
            }
            continue;
        }
        if let Some(name) = tag.strip_prefix('/') {
            if stack.pop().as_deref() != Some(name.trim()) {
                return false;
            }
            continue;
        }
        // Unquoted attribute values would show up as = not followed by a quote.
        let inner = tag.trim_end_matches('/');
        let mut chars = inner.char_indices().peekable();
        let mut in_quotes = false;
        while let Some((i, ch)) = chars.next() {
            match ch {
                '"' => in_quotes = !in_quotes,
                '=' if !in_quotes => {
                    if inner[i + 1..].chars().next() != Some('"') {
                        return false;
                    }
                }
                '<' => return false,
                _ => {}
            }
        }
        if in_quotes {
            return false;
        }
        if !tag.ends_with('/') {
            let name = inner.split_whitespace().next().unwrap_or("");
            if name.is_empty() {
                return false;
            }
            stack.push(name.to_owned());
        }
    }
    stack.is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectrum_plot_is_well_formed_and_self_contained() {
        let svg = spectrum_svg(&[(0.017, -0.00015), (0.05, -0.005)], "spectrum");
        assert!(svg.starts_with("<?xml"));
        assert!(is_well_formed(&svg));
        assert_eq!(svg.matches("<circle").count(), 4); // two roots + mirrors
    }

    #[test]
    fn mode_plot_is_well_formed() {
        let radial: Vec<(f64, f64)> = (0..50)
            .map(|i| (i as f64 * 0.1, (i as f64 * 0.3).sin()))
            .collect();
        let plane: Vec<f64> = (0..25).map(|i| (i as f64 - 12.0) / 12.0).collect();
        let svg = mode_svg(&radial, &[3.0, 2.0, 1.0], &plane, 5, 4.0, &[3.0, 2.0, 1.0], "mode 1");
        assert!(is_well_formed(&svg));
        assert!(svg.contains("stroke-dasharray")); // the dotted markers
    }

    #[test]
    fn checker_rejects_broken_documents() {
        assert!(!is_well_formed("<svg><g></svg>"));
        assert!(!is_well_formed("<svg a=1></svg>"));
        assert!(!is_well_formed("<svg><image href=\"x.png\"/></svg>"));
        assert!(is_well_formed("<svg a=\"1\"><g/></svg>"));
    }

    #[test]
    fn heat_colors_span_the_diverging_ramp() {
        assert_eq!(heat_color(1.0, 1.0), "#ff0000");
        assert_eq!(heat_color(-1.0, 1.0), "#0000ff");
        assert_eq!(heat_color(0.0, 1.0), "#ffffff");
    }

    #[test]
    fn tick_steps_are_round_numbers() {
        assert_eq!(tick_step(1.0), 0.2);
        assert_eq!(tick_step(0.037), 0.005);
        assert_eq!(tick_step(230.0), 50.0);
    }
}
