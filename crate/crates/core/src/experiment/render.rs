//! Self-contained SVG line charts of sweep, runtime and curves CSV files.

use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub label: String,
    /// `(x, y, half-width of the 95% interval)`
    pub points: Vec<(f64, f64, Option<f64>)>,
    pub dashed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Chart {
    pub y_label: String,
    pub series: Vec<Series>,
}

const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];

fn parse_error(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Builds a chart from CSV text, recognizing the three schemas by header.
pub fn chart_from_csv(text: &str) -> Result<Chart> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers().map_err(|e| parse_error(1, e.to_string()))?.iter().map(str::to_string).collect();
    let col = |name: &str| header.iter().position(|h| h == name);
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| parse_error(i + 2, e.to_string()))?;
        if rec.len() != header.len() {
            return Err(parse_error(i + 2, format!("expected {} fields, found {}", header.len(), rec.len())));
        }
        rows.push((i + 2, rec));
    }
    if rows.is_empty() {
        return Err(Error::Parameter("the CSV has no data rows (empty grid)".into()));
    }
    let num = |line: usize, rec: &csv::StringRecord, c: usize| -> Result<Option<f64>> {
        match rec[c].trim() {
            "NA" => Ok(None),
            "inf" => Ok(Some(f64::INFINITY)),
            s => s.parse::<f64>().map(Some).map_err(|_| parse_error(line, format!("column {} is not numeric: {s:?}", header[c]))),
        }
    };
    let need = |name: &str| col(name).ok_or_else(|| parse_error(1, format!("missing column {name:?}")));

    if let Some(p_inf) = col("p_inf") {
        let chat = need("chat")?;
        let p2 = need("p2")?;
        let mut series = vec![
            Series { label: "k=2".into(), points: Vec::new(), dashed: false },
            Series { label: "k=∞".into(), points: Vec::new(), dashed: true },
        ];
        let chain_cols: Vec<(usize, Option<usize>, String)> = header
            .iter()
            .enumerate()
            .filter(|(_, h)| h.starts_with('p') && h[1..].parse::<u32>().is_ok() && h.as_str() != "p2")
            .map(|(i, h)| (i, col(&format!("{h}_hw")), format!("k={}", &h[1..])))
            .collect();
        for (_, _, label) in &chain_cols {
            series.push(Series { label: label.clone(), points: Vec::new(), dashed: false });
        }
        for (line, rec) in &rows {
            let x = num(*line, rec, chat)?.ok_or_else(|| parse_error(*line, "chat is NA"))?;
            if let Some(y) = num(*line, rec, p2)? {
                series[0].points.push((x, y, None));
            }
            if let Some(y) = num(*line, rec, p_inf)? {
                series[1].points.push((x, y, None));
            }
            for (j, (c, hw, _)) in chain_cols.iter().enumerate() {
                if let Some(y) = num(*line, rec, *c)? {
                    let hw = match hw {
                        Some(h) => num(*line, rec, *h)?,
                        None => None,
                    };
                    series[2 + j].points.push((x, y, hw));
                }
            }
        }
        return Ok(Chart { y_label: "satisfaction probability".into(), series });
    }

    let k = need("k")?;
    let chat = need("chat")?;
    let runtime = col("q_analytic");
    let (y_col, y_label) = match runtime {
        Some(_) => (need("mean_iterations_sat")?, "mean PUR stages (satisfiable)"),
        None => (need("sat_fraction")?, "satisfaction probability"),
    };
    let trials = need("trials")?;
    let sd = need("stddev_iterations_sat")?;
    let sat = need("sat_count")?;
    let mut series: Vec<Series> = Vec::new();
    let mut q_series = Series { label: "q (k=2)".into(), points: Vec::new(), dashed: true };
    for (line, rec) in &rows {
        let key = format!("k={}", rec[k].trim());
        let x = num(*line, rec, chat)?.ok_or_else(|| parse_error(*line, "chat is NA"))?;
        let Some(y) = num(*line, rec, y_col)? else { continue };
        let hw = if runtime.is_some() {
            match (num(*line, rec, sd)?, num(*line, rec, sat)?) {
                (Some(s), Some(c)) if c > 0.0 => Some(1.96 * s / c.sqrt()),
                _ => None,
            }
        } else {
            let t = num(*line, rec, trials)?.unwrap_or(0.0);
            (t > 0.0).then(|| 1.96 * (y * (1.0 - y) / t).sqrt())
        };
        match series.iter_mut().find(|s| s.label == key) {
            Some(s) => s.points.push((x, y, hw)),
            None => series.push(Series { label: key, points: vec![(x, y, hw)], dashed: false }),
        }
        if let Some(qc) = runtime {
            if let Some(q) = num(*line, rec, qc)?.filter(|q| q.is_finite()) {
                q_series.points.push((x, q, None));
            }
        }
    }
    if !q_series.points.is_empty() {
        series.push(q_series);
    }
    Ok(Chart { y_label: y_label.into(), series })
}

fn nice_step(range: f64) -> f64 {
    let raw = range / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let f = raw / mag;
    mag * if f < 1.5 {
        1.0
    } else if f < 3.5 {
        2.0
    } else if f < 7.5 {
        5.0
    } else {
        10.0
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders `chart` as a standalone SVG document.
pub fn render_svg(chart: &Chart) -> Result<String> {
    let finite = |v: f64| v.is_finite();
    let all: Vec<(f64, f64, Option<f64>)> = chart.series.iter().flat_map(|s| s.points.iter().copied()).filter(|p| finite(p.0) && finite(p.1)).collect();
    if all.is_empty() {
        return Err(Error::Parameter("nothing to plot (empty grid)".into()));
    }
    let (mut x0, mut x1) = all.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.0), b.max(p.0)));
    let lo = |p: &(f64, f64, Option<f64>)| p.1 - p.2.unwrap_or(0.0);
    let hi = |p: &(f64, f64, Option<f64>)| p.1 + p.2.unwrap_or(0.0);
    let mut y0 = all.iter().map(lo).fold(f64::INFINITY, f64::min).min(0.0);
    let mut y1 = all.iter().map(hi).fold(f64::NEG_INFINITY, f64::max);
    if x1 - x0 < 1e-12 {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if y1 - y0 < 1e-12 {
        y1 = y0 + 1.0;
    }
    let (xs, ys) = (nice_step(x1 - x0), nice_step(y1 - y0));
    x0 = (x0 / xs).floor() * xs;
    x1 = (x1 / xs).ceil() * xs;
    y0 = (y0 / ys).floor() * ys;
    y1 = (y1 / ys).ceil() * ys;

    let (w, h) = (720.0, 440.0);
    let (left, right, top, bottom) = (64.0, 150.0, 20.0, 50.0);
    let pw = w - left - right;
    let ph = h - top - bottom;
    let sx = |x: f64| left + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| top + (y1 - y) / (y1 - y0) * ph;

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(svg, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(svg, r##"<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="#333"/>"##);
    let mut tick = x0;
    while tick <= x1 + xs * 1e-9 {
        let x = sx(tick);
        let _ = writeln!(svg, r##"<line x1="{x:.2}" y1="{top}" x2="{x:.2}" y2="{:.2}" stroke="#ddd"/>"##, top + ph);
        let _ = writeln!(svg, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, top + ph + 16.0, fmt_tick(tick, xs));
        tick += xs;
    }
    let mut tick = y0;
    while tick <= y1 + ys * 1e-9 {
        let y = sy(tick);
        let _ = writeln!(svg, r##"<line x1="{left}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/>"##, left + pw);
        let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#, left - 6.0, y + 4.0, fmt_tick(tick, ys));
        tick += ys;
    }
    let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">rescaled density ĉ</text>"#, left + pw / 2.0, h - 10.0);
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
        top + ph / 2.0,
        top + ph / 2.0,
        escape(&chart.y_label)
    );

    for (i, s) in chart.series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<&(f64, f64, Option<f64>)> = s.points.iter().filter(|p| finite(p.0) && finite(p.1)).collect();
        let dash = if s.dashed { r#" stroke-dasharray="6 4""# } else { "" };
        let path: Vec<String> = pts.iter().map(|p| format!("{:.2},{:.2}", sx(p.0), sy(p.1))).collect();
        let _ = writeln!(svg, r#"<g class="series" data-label="{}">"#, escape(&s.label));
        let _ = writeln!(svg, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.8"{dash}/>"#, path.join(" "));
        for p in &pts {
            let (x, y) = (sx(p.0), sy(p.1));
            if let Some(hw) = p.2.filter(|v| v.is_finite() && *v > 0.0) {
                let (ya, yb) = (sy(p.1 + hw), sy(p.1 - hw));
                let _ = writeln!(svg, r#"<line class="ci" x1="{x:.2}" y1="{ya:.2}" x2="{x:.2}" y2="{yb:.2}" stroke="{color}"/>"#);
                let _ = writeln!(svg, r#"<line x1="{:.2}" y1="{ya:.2}" x2="{:.2}" y2="{ya:.2}" stroke="{color}"/>"#, x - 3.0, x + 3.0);
                let _ = writeln!(svg, r#"<line x1="{:.2}" y1="{yb:.2}" x2="{:.2}" y2="{yb:.2}" stroke="{color}"/>"#, x - 3.0, x + 3.0);
            }
            if !s.dashed {
                let _ = writeln!(svg, r#"<circle cx="{x:.2}" cy="{y:.2}" r="2.5" fill="{color}"/>"#);
            }
        }
        let ly = top + 14.0 + 20.0 * i as f64;
        let lx = left + pw + 14.0;
        let _ = writeln!(svg, r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="1.8"{dash}/>"#, lx + 24.0);
        let _ = writeln!(svg, r#"<text class="legend" x="{:.2}" y="{:.2}">{}</text>"#, lx + 30.0, ly + 4.0, escape(&s.label));
        svg.push_str("</g>\n");
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn fmt_tick(v: f64, step: f64) -> String {
    let decimals = (-step.log10().floor()).max(0.0) as usize;
    format!("{:.*}", decimals, if v.abs() < step * 1e-9 { 0.0 } else { v })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curves_csv_has_two_analytic_series() {
        let chart = chart_from_csv("chat,p2,p_inf\n0.5,1,0.9\n1.2,0.686,0.37\n").unwrap();
        let labels: Vec<&str> = chart.series.iter().map(|s| s.label.as_str()).collect();
        assert_eq!(labels, vec!["k=2", "k=∞"]);
        let svg = render_svg(&chart).unwrap();
        assert!(svg.contains(">k=2</text>") && svg.contains(">k=∞</text>"));
        assert_eq!(svg.matches("<polyline").count(), 2);
    }

    #[test]
    fn chain_columns_become_series() {
        let chart = chart_from_csv("chat,p2,p_inf,p3,p3_hw\n1,1,0.46,0.6,0.01\n").unwrap();
        assert_eq!(chart.series[2].label, "k=3");
        assert_eq!(chart.series[2].points[0].2, Some(0.01));
    }

    #[test]
    fn sweep_csv_gets_interval_bars() {
        let text = "k,n,chat,m,trials,sat_count,sat_fraction,mean_iterations_sat,stddev_iterations_sat,wall_ms\n\
                    2,100,0.5,75,100,98,0.98,2,1,3\n2,100,1.5,226,100,40,0.4,3,2,3\n3,50,1,10,100,0,0,NA,NA,1\n";
        let chart = chart_from_csv(text).unwrap();
        assert_eq!(chart.series.len(), 2);
        let svg = render_svg(&chart).unwrap();
        assert!(svg.matches(r#"class="ci""#).count() >= 2);
        assert!(!svg.contains("href"));
    }

    #[test]
    fn empty_and_malformed_inputs_fail() {
        assert!(chart_from_csv("chat,p2,p_inf\n").is_err());
        assert!(matches!(chart_from_csv("chat,p2,p_inf\n1,x,0.3\n"), Err(Error::Parse { line: 2, .. })));
        assert!(chart_from_csv("a,b\n1,2\n").is_err());
    }
}
