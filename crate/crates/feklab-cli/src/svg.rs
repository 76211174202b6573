//! Minimal hand-rolled log-log SVG plots: axes, one polyline per series,
//! slope annotations.  No dependencies, machine-checkable output.

pub struct Series<'a> {
    pub label: &'a str,
    pub color: &'a str,
    pub points: Vec<(f64, f64)>,
    pub slope: Option<f64>,
}

const W: f64 = 640.0;
const H: f64 = 440.0;
const MARGIN: f64 = 60.0;

pub fn log_log_plot(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for s in series {
        pts.extend(s.points.iter().filter(|&&(x, y)| x > 0.0 && y > 0.0));
    }
    if pts.is_empty() {
        return format!("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\"><text x=\"20\" y=\"20\">{title}: no positive data</text></svg>\n");
    }
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in &pts {
        x0 = x0.min(x.ln());
        x1 = x1.max(x.ln());
        y0 = y0.min(y.ln());
        y1 = y1.max(y.ln());
    }
    if x1 - x0 < 1e-12 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 < 1e-12 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| MARGIN + (x.ln() - x0) / (x1 - x0) * (W - 2.0 * MARGIN);
    let sy = |y: f64| H - MARGIN - (y.ln() - y0) / (y1 - y0) * (H - 2.0 * MARGIN);
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" \
         font-family=\"monospace\" font-size=\"12\">\n"
    ));
    out.push_str(&format!(
        "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">{title}</text>\n",
        W / 2.0
    ));
    // axes
    out.push_str(&format!(
        "<line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n\
         <line x1=\"{m}\" y1=\"{t}\" x2=\"{m}\" y2=\"{b}\" stroke=\"black\"/>\n",
        m = MARGIN,
        b = H - MARGIN,
        r = W - MARGIN,
        t = MARGIN
    ));
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{x_label} (log)</text>\n",
        W / 2.0,
        H - 16.0
    ));
    out.push_str(&format!(
        "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">{y_label} (log)</text>\n",
        H / 2.0,
        H / 2.0
    ));
    // decade-ish ticks: at each distinct x of the first series, and 4 y ticks
    for &(x, _) in &series[0].points {
        if x <= 0.0 {
            continue;
        }
        let px = sx(x);
        out.push_str(&format!(
            "<line x1=\"{px}\" y1=\"{b}\" x2=\"{px}\" y2=\"{b2}\" stroke=\"black\"/>\n\
             <text x=\"{px}\" y=\"{ty}\" text-anchor=\"middle\">{x}</text>\n",
            b = H - MARGIN,
            b2 = H - MARGIN + 5.0,
            ty = H - MARGIN + 18.0,
        ));
    }
    for i in 0..5 {
        let ly = y0 + (y1 - y0) * i as f64 / 4.0;
        let py = H - MARGIN - (ly - y0) / (y1 - y0) * (H - 2.0 * MARGIN);
        out.push_str(&format!(
            "<line x1=\"{m2}\" y1=\"{py}\" x2=\"{m}\" y2=\"{py}\" stroke=\"black\"/>\n\
             <text x=\"{tx}\" y=\"{ty}\" text-anchor=\"end\">{v:.2e}</text>\n",
            m = MARGIN,
            m2 = MARGIN - 5.0,
            tx = MARGIN - 8.0,
            ty = py + 4.0,
            v = ly.exp(),
        ));
    }
    // series
    for (i, s) in series.iter().enumerate() {
        let path: Vec<String> = s
            .points
            .iter()
            .filter(|&&(x, y)| x > 0.0 && y > 0.0)
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        out.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>\n",
            path.join(" "),
            s.color
        ));
        for &(x, y) in s.points.iter().filter(|&&(x, y)| x > 0.0 && y > 0.0) {
            out.push_str(&format!(
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"{}\"/>\n",
                sx(x),
                sy(y),
                s.color
            ));
        }
        let label = match s.slope {
            Some(sl) => format!("{} (slope {:.3})", s.label, sl),
            None => s.label.to_string(),
        };
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" fill=\"{}\">{label}</text>\n",
            W - MARGIN - 220.0,
            MARGIN + 16.0 * (i as f64 + 1.0),
            s.color
        ));
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn produces_wellformed_svg() {
        let s = Series {
            label: "w1",
            color: "steelblue",
            points: vec![(8.0, 0.2), (16.0, 0.11), (32.0, 0.06)],
            slope: Some(-0.87),
        };
        let svg = log_log_plot("demo", "degree", "distance", &[s]);
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("polyline"));
        assert!(svg.contains("slope -0.870"));
    }
}
