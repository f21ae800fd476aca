//! Self-contained SVG line plots rendered straight from CSV columns.
//! No display server, no fonts beyond SVG defaults; data provenance is
//! embedded as a comment.

const W: f64 = 640.0;
const H: f64 = 420.0;
const MARGIN: f64 = 60.0;

pub struct Series<'a> {
    pub label: &'a str,
    pub color: &'a str,
    pub xs: &'a [f64],
    pub ys: &'a [f64],
}

/// Render one or more series as polylines with linear axes.
pub fn line_plot(
    title: &str,
    x_label: &str,
    y_label: &str,
    log_x: bool,
    log_y: bool,
    series: &[Series],
    provenance: &str,
) -> String {
    let tx = |v: f64| if log_x { v.max(f64::MIN_POSITIVE).log10() } else { v };
    let ty = |v: f64| if log_y { v.max(f64::MIN_POSITIVE).log10() } else { v };
    let mut xmin = f64::INFINITY;
    let mut xmax = f64::NEG_INFINITY;
    let mut ymin = f64::INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    for s in series {
        for (&x, &y) in s.xs.iter().zip(s.ys) {
            if log_y && y <= 0.0 {
                continue;
            }
            xmin = xmin.min(tx(x));
            xmax = xmax.max(tx(x));
            ymin = ymin.min(ty(y));
            ymax = ymax.max(ty(y));
        }
    }
    if !xmin.is_finite() || xmin == xmax {
        xmax = xmin + 1.0;
    }
    if !ymin.is_finite() || ymin == ymax {
        ymax = ymin + 1.0;
    }
    let sx = (W - 2.0 * MARGIN) / (xmax - xmin);
    let sy = (H - 2.0 * MARGIN) / (ymax - ymin);
    let px = |x: f64| MARGIN + (tx(x) - xmin) * sx;
    let py = |y: f64| H - MARGIN - (ty(y) - ymin) * sy;

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n"
    ));
    out.push_str(&format!("<!-- provenance: {provenance} -->\n"));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    out.push_str(&format!(
        "<text x=\"{}\" y=\"24\" font-size=\"15\" text-anchor=\"middle\">{}</text>\n",
        W / 2.0,
        xml_escape(title)
    ));
    // axes
    out.push_str(&format!(
        "<line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n<line x1=\"{m}\" y1=\"{t}\" x2=\"{m}\" y2=\"{b}\" stroke=\"black\"/>\n",
        m = MARGIN,
        r = W - MARGIN,
        t = MARGIN,
        b = H - MARGIN
    ));
    let fmt_tick = |v: f64, log: bool| {
        let raw = if log { 10f64.powf(v) } else { v };
        if raw != 0.0 && (raw.abs() >= 1e4 || raw.abs() < 1e-3) {
            format!("{raw:.2e}")
        } else {
            format!("{raw:.3}")
        }
    };
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
        MARGIN,
        H - MARGIN + 16.0,
        fmt_tick(xmin, log_x)
    ));
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
        W - MARGIN,
        H - MARGIN + 16.0,
        fmt_tick(xmax, log_x)
    ));
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"end\">{}</text>\n",
        MARGIN - 6.0,
        H - MARGIN,
        fmt_tick(ymin, log_y)
    ));
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"end\">{}</text>\n",
        MARGIN - 6.0,
        MARGIN + 4.0,
        fmt_tick(ymax, log_y)
    ));
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
        W / 2.0,
        H - 14.0,
        xml_escape(x_label)
    ));
    out.push_str(&format!(
        "<text x=\"16\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">{}</text>\n",
        H / 2.0,
        H / 2.0,
        xml_escape(y_label)
    ));
    for (i, s) in series.iter().enumerate() {
        let pts: Vec<String> = s
            .xs
            .iter()
            .zip(s.ys)
            .filter(|(_, &y)| !log_y || y > 0.0)
            .map(|(&x, &y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        out.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            s.color,
            pts.join(" ")
        ));
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"{}\">{}</text>\n",
            W - MARGIN - 150.0,
            MARGIN + 16.0 * (i as f64 + 1.0),
            s.color,
            xml_escape(s.label)
        ));
    }
    out.push_str("</svg>\n");
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
