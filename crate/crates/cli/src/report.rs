//! CSV tables and log-log SVG plots of study records.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use holefem::{CouplingMode, Degree, ErrorRecord};

pub const CSV_HEADER: [&str; 9] = ["delta", "h_avg", "degree", "chi", "mode", "dofs", "err_l2", "err_h1", "runtime_ms"];

/// Floats are written with 17 significant digits so identical records give
/// identical bytes.
fn float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "NaN".to_string()
    }
}

pub fn emit_csv(records: &[ErrorRecord]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("writing to memory");
    for r in records {
        w.write_record([
            float(r.delta),
            float(r.h_avg),
            r.degree.order().to_string(),
            r.chi.to_string(),
            r.mode.to_string(),
            r.dofs.to_string(),
            float(r.err_l2),
            float(r.err_h1),
            float(r.runtime_ms),
        ])
        .expect("writing to memory");
    }
    w.into_inner().expect("flushing to memory")
}

/// A curve of the plot: `(delta, degree, mode)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesKey {
    pub delta: f64,
    pub degree: Degree,
    pub mode: CouplingMode,
}

impl SeriesKey {
    fn of(r: &ErrorRecord) -> Self {
        SeriesKey { delta: r.delta, degree: r.degree, mode: r.mode }
    }

    fn label(&self) -> String {
        format!("delta={:e} P{} {}", self.delta, self.degree.order(), self.mode)
    }
}

/// Records grouped by series, in order of first appearance.
pub fn series(records: &[ErrorRecord]) -> Vec<(SeriesKey, Vec<&ErrorRecord>)> {
    let mut out: Vec<(SeriesKey, Vec<&ErrorRecord>)> = Vec::new();
    for r in records {
        let key = SeriesKey::of(r);
        match out.iter_mut().find(|(k, _)| *k == key) {
            Some((_, v)) => v.push(r),
            None => out.push((key, vec![r])),
        }
    }
    out
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 540.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 220.0;
const MARGIN_Y: f64 = 50.0;
const COLORS: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"];

struct Axes {
    x: (f64, f64),
    y: (f64, f64),
}

impl Axes {
    /// Decade-aligned bounds in log10 around the finite points.
    fn fit(points: impl Iterator<Item = (f64, f64)>) -> Self {
        let mut x = (f64::INFINITY, f64::NEG_INFINITY);
        let mut y = (f64::INFINITY, f64::NEG_INFINITY);
        for (h, e) in points {
            x = (x.0.min(h.log10()), x.1.max(h.log10()));
            y = (y.0.min(e.log10()), y.1.max(e.log10()));
        }
        let decades = |(lo, hi): (f64, f64)| {
            if lo.is_finite() {
                let (lo, hi) = (lo.floor(), hi.ceil());
                (lo, if hi > lo { hi } else { lo + 1.0 })
            } else {
                (-2.0, 0.0)
            }
        };
        Axes { x: decades(x), y: decades(y) }
    }

    fn px(&self, h: f64) -> f64 {
        let t = (h.log10() - self.x.0) / (self.x.1 - self.x.0);
        MARGIN_LEFT + t * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn py(&self, e: f64) -> f64 {
        let t = (e.log10() - self.y.0) / (self.y.1 - self.y.0);
        HEIGHT - MARGIN_Y - t * (HEIGHT - 2.0 * MARGIN_Y)
    }
}

fn plottable(r: &ErrorRecord) -> bool {
    r.h_avg > 0.0 && r.err_h1 > 0.0 && r.err_h1.is_finite()
}

/// Log-log plot of `err_h1` against `h_avg`, one polyline per series, with
/// guide lines of slope 1, 2 and 3.
pub fn emit_svg_loglog(records: &[ErrorRecord]) -> Vec<u8> {
    let axes = Axes::fit(records.iter().filter(|r| plottable(r)).map(|r| (r.h_avg, r.err_h1)));
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let (x0, x1) = (MARGIN_LEFT, WIDTH - MARGIN_RIGHT);
    let (y0, y1) = (HEIGHT - MARGIN_Y, MARGIN_Y);
    let _ = writeln!(s, r#"<g stroke="black" fill="none"><rect x="{x0}" y="{y1}" width="{}" height="{}"/></g>"#, x1 - x0, y0 - y1);

    let _ = writeln!(s, r#"<g font-family="sans-serif" font-size="11" fill="black">"#);
    for d in axes.x.0 as i32..=axes.x.1 as i32 {
        let x = axes.px(10f64.powi(d));
        let _ = writeln!(s, r#"<line x1="{x:.2}" y1="{y0}" x2="{x:.2}" y2="{}" stroke="black"/>"#, y0 - 5.0);
        let _ = writeln!(s, r#"<text x="{x:.2}" y="{}" text-anchor="middle">1e{d}</text>"#, y0 + 16.0);
    }
    for d in axes.y.0 as i32..=axes.y.1 as i32 {
        let y = axes.py(10f64.powi(d));
        let _ = writeln!(s, r#"<line x1="{x0}" y1="{y:.2}" x2="{}" y2="{y:.2}" stroke="black"/>"#, x0 + 5.0);
        let _ = writeln!(s, r#"<text x="{}" y="{:.2}" text-anchor="end">1e{d}</text>"#, x0 - 6.0, y + 4.0);
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">h</text>"#, 0.5 * (x0 + x1), HEIGHT - 12.0);
    let _ = writeln!(s, r#"<text x="16" y="{}" transform="rotate(-90 16 {})" text-anchor="middle">H1 error</text>"#, 0.5 * (y0 + y1), 0.5 * (y0 + y1));
    let _ = writeln!(s, "</g>");

    // guides through the lower right corner of the data box
    let (hx, ey) = (10f64.powf(axes.x.1), 10f64.powf(axes.y.0 + 0.5));
    let hmin = 10f64.powf(axes.x.0);
    for rate in 1..=3 {
        let e_at = |h: f64| ey * (h / hx).powi(rate);
        let h_start = hmin.max(hx * (10f64.powf(axes.y.0) / ey).powf(1.0 / rate as f64));
        let _ = writeln!(
            s,
            r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#999999" stroke-dasharray="4 3"/>"##,
            axes.px(h_start),
            axes.py(e_at(h_start)),
            axes.px(hx),
            axes.py(ey)
        );
        let _ = writeln!(
            s,
            r##"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="10" fill="#666666">slope {rate}</text>"##,
            axes.px(h_start) + 3.0,
            axes.py(e_at(h_start)) - 3.0
        );
    }

    for (k, (key, recs)) in series(records).iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let pts: Vec<String> = recs
            .iter()
            .filter(|r| plottable(r))
            .map(|r| format!("{:.2},{:.2}", axes.px(r.h_avg), axes.py(r.err_h1)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"><title>{}</title></polyline>"#,
            pts.join(" "),
            key.label()
        );
        let ly = MARGIN_Y + 16.0 * k as f64 + 8.0;
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{ly:.2}" font-family="sans-serif" font-size="11" fill="{color}">{}</text>"#,
            x1 + 12.0,
            key.label()
        );
    }
    s.push_str("</svg>\n");
    s.into_bytes()
}

/// Fitted `(H1, L2)` rates over the three finest levels, by series label.
pub fn rate_table(records: &[ErrorRecord]) -> BTreeMap<String, (Option<f64>, Option<f64>)> {
    series(records)
        .into_iter()
        .map(|(key, recs)| {
            let owned: Vec<ErrorRecord> = recs.into_iter().cloned().collect();
            let h1 = holefem::fit_rate(&owned, holefem::Norm::H1).ok();
            let l2 = holefem::fit_rate(&owned, holefem::Norm::L2).ok();
            (key.label(), (h1, l2))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use holefem::CutoffKind;

    fn record(delta: f64, h: f64, degree: Degree) -> ErrorRecord {
        ErrorRecord {
            delta,
            h_avg: h,
            degree,
            chi: CutoffKind::Exp,
            mode: CouplingMode::Point,
            dofs: 10,
            err_l2: h * h,
            err_h1: h,
            runtime_ms: 0.0,
            failure: None,
        }
    }

    #[test]
    fn one_record_two_lines() {
        let csv = String::from_utf8(emit_csv(&[record(1e-2, 0.1, Degree::P1)])).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], "delta,h_avg,degree,chi,mode,dofs,err_l2,err_h1,runtime_ms");
        assert_eq!(
            lines[1],
            "1.0000000000000000e-2,1.0000000000000001e-1,1,exp,point,10,1.0000000000000002e-2,1.0000000000000001e-1,0.0000000000000000e0"
        );
    }

    #[test]
    fn nan_is_written_for_failed_cells() {
        let mut r = record(1e-2, 0.1, Degree::P1);
        r.err_h1 = f64::NAN;
        let csv = String::from_utf8(emit_csv(&[r])).unwrap();
        assert!(csv.lines().nth(1).unwrap().contains(",NaN,"));
    }

    #[test]
    fn series_grouping() {
        let recs = vec![
            record(1e-2, 0.2, Degree::P1),
            record(1e-2, 0.1, Degree::P1),
            record(1e-2, 0.2, Degree::P2),
            record(1e-10, 0.2, Degree::P1),
        ];
        let s = series(&recs);
        assert_eq!(s.len(), 3);
        assert_eq!(s[0].1.len(), 2);
    }

    #[test]
    fn rate_table_fits_synthetic_series() {
        let recs: Vec<_> = [0.4, 0.2, 0.1].iter().map(|&h| record(1e-2, h, Degree::P1)).collect();
        let t = rate_table(&recs);
        let (h1, l2) = t.values().next().unwrap();
        assert!((h1.unwrap() - 1.0).abs() < 1e-12 && (l2.unwrap() - 2.0).abs() < 1e-12);
    }
}
