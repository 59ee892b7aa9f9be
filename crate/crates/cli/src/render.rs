//! CSV interval lists and an SVG of stacked level bars.

use std::fmt::Write;

use selfsim_core::numeric::{
    approx_attractor_resolution, approx_gamma_t, ApproxOptions, IntervalUnion, NumericError,
    NumericIfs,
};

const WIDTH: f64 = 1000.0;
const BAR: f64 = 18.0;
const GAP: f64 = 6.0;
const MARGIN: f64 = 10.0;

pub struct RenderOutput {
    /// `level,left,right` rows of `Γ_t` at the requested depth.
    pub csv: String,
    /// Rows of the witness attractor, when requested and available.
    pub witness_csv: Option<String>,
    pub svg: String,
    pub rows: usize,
}

fn csv(level: usize, u: &IntervalUnion<f64>) -> String {
    let mut out = String::from("level,left,right\n");
    for &(a, b) in u.intervals() {
        writeln!(out, "{level},{a},{b}").unwrap();
    }
    out
}

pub fn render(
    n: u32,
    beta: f64,
    t: &[f64],
    depth: usize,
    witness: Option<&NumericIfs<f64>>,
    ub: f64,
) -> Result<RenderOutput, NumericError> {
    let opts = ApproxOptions::default();
    let levels = (0..=depth)
        .map(|d| approx_gamma_t(n, beta, t, d, &opts))
        .collect::<Result<Vec<_>, _>>()?;
    let last = &levels[depth];
    let t_m = t.iter().copied().fold(0.0, f64::max);
    let w = witness
        .map(|ifs| approx_attractor_resolution(ifs, ub.powi(depth as i32) * (1.0 + t_m), &opts))
        .transpose()?;

    let (lo, hi) = last.hull().unwrap_or((0.0, 1.0));
    let span = (hi - lo).max(f64::EPSILON);
    let x = |v: f64| MARGIN + (v - lo) / span * (WIDTH - 2.0 * MARGIN);
    let bars = levels.len() + usize::from(w.is_some());
    let height = 2.0 * MARGIN + bars as f64 * (BAR + GAP);
    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}">"#
    )
    .unwrap();
    let row = |svg: &mut String, k: usize, u: &IntervalUnion<f64>, fill: &str| {
        let y = MARGIN + k as f64 * (BAR + GAP);
        for &(a, b) in u.intervals() {
            let w = (x(b) - x(a)).max(0.5);
            writeln!(
                svg,
                r#"  <rect x="{:.3}" y="{y}" width="{w:.3}" height="{BAR}" fill="{fill}"/>"#,
                x(a)
            )
            .unwrap();
        }
    };
    for (k, u) in levels.iter().enumerate() {
        row(&mut svg, k, u, "#1f4e79");
    }
    if let Some(u) = &w {
        row(&mut svg, levels.len(), u, "#b03a2e");
    }
    svg.push_str("</svg>\n");

    Ok(RenderOutput {
        csv: csv(depth, last),
        witness_csv: w.as_ref().map(|u| csv(depth, u)),
        svg,
        rows: last.len(),
    })
}
