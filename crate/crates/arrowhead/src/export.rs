//! Deterministic text renderings: CSV tables and SVG drawings.
//!
//! Every float is written with [`fmt_float`] (17 significant digits) so
//! exports are byte-stable across runs and platforms that round the same
//! way; all tables carry a header row and end with a trailing newline.

use crate::curve::GraphLevel;
use crate::energy::EnergySequenceReport;
use crate::error::{Error, Result};
use crate::function::VertexFunction;
use crate::laplacian::LaplacianField;
use crate::spectrum::{CountingSeries, DecimationBranches, Spectrum};

/// Canonical float rendering: scientific with 16 fractional digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// `chain_index,x,y,arc_coordinate` — one row per vertex.
pub fn vertices_csv(graph: &GraphLevel) -> String {
    let mut out = String::from("chain_index,x,y,arc_coordinate\n");
    for (i, p) in graph.vertices().iter().enumerate() {
        let idx = i + 1;
        let arc = graph.arc_coordinate(idx).expect("index in range");
        out.push_str(&format!(
            "{idx},{},{},{}\n",
            fmt_float(p.x),
            fmt_float(p.y),
            fmt_float(arc)
        ));
    }
    out
}

/// `level,scheme,energy,ratio` — the ratio column relates each level to the
/// previous one and is empty on the first row.
pub fn energy_csv(report: &EnergySequenceReport) -> String {
    let mut out = String::from("level,scheme,energy,ratio\n");
    for (i, e) in report.energies.iter().enumerate() {
        let ratio = if i == 0 {
            String::new()
        } else {
            fmt_float(report.ratios[i - 1])
        };
        out.push_str(&format!(
            "{},{},{},{ratio}\n",
            i + 1,
            report.scheme.label(),
            fmt_float(*e)
        ));
    }
    out
}

/// `chain_index,arc_coordinate,f_m` — interior vertices only.
pub fn laplacian_csv(field: &LaplacianField) -> String {
    let mut out = String::from("chain_index,arc_coordinate,f_m\n");
    let denom = 3f64.powi(field.level() as i32);
    for (i, v) in field.iter() {
        let arc = (i - 1) as f64 / denom;
        out.push_str(&format!("{i},{},{}\n", fmt_float(arc), fmt_float(v)));
    }
    out
}

/// `level,k,eigenvalue,multiplicity` — one row per distinct line, ascending.
pub fn spectrum_csv(spectrum: &Spectrum) -> String {
    let mut out = String::from("level,k,eigenvalue,multiplicity\n");
    for (k, line) in spectrum.lines().iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            spectrum.level(),
            k + 1,
            fmt_float(line.value),
            line.multiplicity
        ));
    }
    out
}

/// `parent,branch,child` — the three branches in order `n = 0, 1, 2`.
pub fn decimate_csv(branches: &DecimationBranches) -> String {
    let mut out = String::from("parent,branch,child\n");
    for (n, child) in branches.children.iter().enumerate() {
        out.push_str(&format!(
            "{},{n},{}\n",
            fmt_float(branches.parent),
            fmt_float(*child)
        ));
    }
    out
}

/// `x,N,scaling` — the log-spaced grid samples of the deepest level.
pub fn counting_csv(series: &CountingSeries) -> String {
    let mut out = String::from("x,N,scaling\n");
    for &(x, n) in series.grid() {
        out.push_str(&format!(
            "{},{n},{}\n",
            fmt_float(x),
            series.scaling().label()
        ));
    }
    out
}

fn svg_coord(x: f64) -> String {
    format!("{x:.6}")
}

/// Screen position of a curve point: x unchanged, y flipped into the
/// fixed viewBox so the curve sits upright.
fn to_screen(p: &crate::geometry::Point2) -> (String, String) {
    (svg_coord(p.x), svg_coord(0.9 - p.y))
}

/// Blue-to-red ramp over `t ∈ [0, 1]`.
fn ramp_color(t: f64) -> String {
    let t = t.clamp(0.0, 1.0);
    let r = (255.0 * t).round() as u8;
    let b = (255.0 * (1.0 - t)).round() as u8;
    format!("#{r:02x}00{b:02x}")
}

/// Renders the curve as SVG.
///
/// Without an overlay the chain is a single dark polyline.  With one, each
/// edge becomes a `<line>` colored by the blue→red ramp over the mean of its
/// endpoint values (the whole range of the overlay maps onto the ramp).
pub fn render_svg(graph: &GraphLevel, overlay: Option<&VertexFunction>) -> Result<String> {
    let mut out = String::from(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-0.05 -0.05 1.1 1.0\">\n",
    );
    out.push_str("<rect x=\"-0.05\" y=\"-0.05\" width=\"1.1\" height=\"1.0\" fill=\"white\"/>\n");
    match overlay {
        None => {
            out.push_str(
                "<polyline fill=\"none\" stroke=\"#203864\" stroke-width=\"0.004\" points=\"",
            );
            for (i, p) in graph.vertices().iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                let (x, y) = to_screen(p);
                out.push_str(&format!("{x},{y}"));
            }
            out.push_str("\"/>\n");
        }
        Some(u) => {
            if u.level() != graph.level() {
                return Err(Error::LevelMismatch {
                    expected: graph.level(),
                    got: u.level(),
                });
            }
            let values = u.values();
            let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let span = hi - lo;
            let verts = graph.vertices();
            for i in 0..verts.len() - 1 {
                let mean = 0.5 * (values[i] + values[i + 1]);
                let t = if span > 0.0 { (mean - lo) / span } else { 0.5 };
                let (x1, y1) = to_screen(&verts[i]);
                let (x2, y2) = to_screen(&verts[i + 1]);
                out.push_str(&format!(
                    "<line x1=\"{x1}\" y1=\"{y1}\" x2=\"{x2}\" y2=\"{y2}\" stroke=\"{}\" stroke-width=\"0.006\" stroke-linecap=\"round\"/>\n",
                    ramp_color(t)
                ));
            }
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}
