use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::harness::{Aggregate, ExperimentResult, SweepParam, TrialRecord};

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

/// Aggregate table: `sweep_param,value,scheme,mean_rate,ci95_lo,ci95_hi,trials`.
pub fn emit_csv<W: Write>(aggregates: &[Aggregate], out: W) -> Result<()> {
    if aggregates.is_empty() {
        return Err(Error::input("no aggregates to write"));
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "sweep_param",
        "value",
        "scheme",
        "mean_rate",
        "ci95_lo",
        "ci95_hi",
        "trials",
    ])?;
    for a in aggregates {
        w.write_record([
            a.sweep_param.name().to_string(),
            a.value.to_string(),
            a.scheme.name().to_string(),
            a.mean_rate.to_string(),
            a.ci95_lo.to_string(),
            a.ci95_hi.to_string(),
            a.trials.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Per-trial table. Empty cells mark fields that do not apply to a scheme.
pub fn emit_trials_csv<W: Write>(records: &[TrialRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "point",
        "value",
        "scheme",
        "trial",
        "rate",
        "nu",
        "num_colors",
        "vertices",
        "edges",
        "runtime_ms",
        "decode_ok",
    ])?;
    let opt = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_default();
    for r in records {
        w.write_record([
            r.point.to_string(),
            r.value.to_string(),
            r.scheme.name().to_string(),
            r.trial.to_string(),
            r.rate.to_string(),
            opt(r.nu),
            opt(r.num_colors),
            opt(r.vertices),
            opt(r.edges),
            format!("{:.3}", r.runtime_ms),
            r.decode_ok.map(|b| b.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Line chart of mean rate against the swept parameter, one series per scheme.
pub fn emit_svg(aggregates: &[Aggregate], param: SweepParam) -> Result<String> {
    if aggregates.is_empty() {
        return Err(Error::input("no aggregates to plot"));
    }
    let (width, height) = (640.0, 420.0);
    let (left, right, top, bottom) = (70.0, 150.0, 20.0, 55.0);
    let plot_w = width - left - right;
    let plot_h = height - top - bottom;

    let x_min = aggregates.iter().map(|a| a.value).fold(f64::INFINITY, f64::min);
    let mut x_max = aggregates
        .iter()
        .map(|a| a.value)
        .fold(f64::NEG_INFINITY, f64::max);
    if x_max <= x_min {
        x_max = x_min + 1.0;
    }
    let mut y_max = aggregates
        .iter()
        .map(|a| a.ci95_hi.max(a.mean_rate))
        .fold(0.0, f64::max)
        * 1.05;
    if y_max <= 0.0 {
        y_max = 1.0;
    }
    let sx = |x: f64| left + (x - x_min) / (x_max - x_min) * plot_w;
    let sy = |y: f64| top + plot_h - y / y_max * plot_h;

    let mut schemes = Vec::new();
    for a in aggregates {
        if !schemes.contains(&a.scheme) {
            schemes.push(a.scheme);
        }
    }

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{width}" height="{height}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<g stroke="black" fill="none"><line x1="{left}" y1="{y0}" x2="{x1}" y2="{y0}"/><line x1="{left}" y1="{top}" x2="{left}" y2="{y0}"/></g>"#,
        y0 = top + plot_h,
        x1 = left + plot_w
    );
    for k in 0..=5 {
        let x = x_min + (x_max - x_min) * k as f64 / 5.0;
        let y = y_max * k as f64 / 5.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            sx(x),
            top + plot_h + 18.0,
            tick(x)
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
            left - 6.0,
            sy(y) + 4.0,
            tick(y)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        left + plot_w / 2.0,
        height - 12.0,
        param.axis_label()
    );
    let _ = writeln!(
        s,
        r#"<text x="18" y="{:.1}" text-anchor="middle" transform="rotate(-90 18 {:.1})">average rate (file units)</text>"#,
        top + plot_h / 2.0,
        top + plot_h / 2.0
    );
    for (k, scheme) in schemes.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let mut pts: Vec<&Aggregate> = aggregates.iter().filter(|a| a.scheme == *scheme).collect();
        pts.sort_by(|a, b| a.value.total_cmp(&b.value));
        let path: Vec<String> = pts
            .iter()
            .map(|a| format!("{:.1},{:.1}", sx(a.value), sy(a.mean_rate)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            path.join(" ")
        );
        for a in &pts {
            let _ = writeln!(
                s,
                r#"<circle cx="{:.1}" cy="{:.1}" r="3" fill="{color}"/>"#,
                sx(a.value),
                sy(a.mean_rate)
            );
        }
        let ly = top + 14.0 + 18.0 * k as f64;
        let lx = left + plot_w + 14.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            scheme.name()
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn tick(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e9 {
        format!("{}", x as i64)
    } else {
        format!("{x:.2}")
    }
}

/// Writes `results.csv`, `trials.csv` and `rates.svg` into `dir`.
pub fn write_outputs(result: &ExperimentResult, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    emit_csv(&result.aggregates, fs::File::create(dir.join("results.csv"))?)?;
    emit_trials_csv(&result.records, fs::File::create(dir.join("trials.csv"))?)?;
    fs::write(dir.join("rates.svg"), emit_svg(&result.aggregates, result.param)?)?;
    Ok(())
}
