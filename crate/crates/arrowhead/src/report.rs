//! Deterministic self-check report.
//!
//! [`build_report`] sweeps every module at a requested depth and records one
//! flat `key: value status (tol …)` line per check.  The sweep is fully
//! deterministic — sampled inputs come from a golden-ratio low-discrepancy
//! sequence, not an RNG — so two runs of the same build produce
//! byte-identical output.

use crate::curve::{build_level, level_one_chain_indices};
use crate::energy::{
    delta, energy, energy_ratio, energy_scaling_rho, markov_cut, normalized_energy_sequence,
    ConductanceScheme,
};
use crate::error::{Error, Result};
use crate::export::fmt_float;
use crate::function::VertexFunction;
use crate::laplacian::{
    convergence_probe, graph_laplacian_apply, pointwise_laplacian, summation_by_parts_check,
};
use crate::measure::MeasureModel;
use crate::spectrum::{
    counting_function, decimate_down, decimate_up, dirichlet_eigenfunction,
    dirichlet_spectrum_exact, dirichlet_spectrum_numeric, extend_eigenfunction, forbidden_check,
    phi, ratio_periodicity_probe, weyl_fit, Boundary, PhiBranch, ScalingMode, Spectrum,
    WeylReferences,
};
use crate::trapeze::{cell_area, trapeze_decomposition};

/// Outcome of one report entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportStatus {
    Pass,
    Fail,
    Info,
}

impl ReportStatus {
    pub fn label(&self) -> &'static str {
        match self {
            ReportStatus::Pass => "pass",
            ReportStatus::Fail => "fail",
            ReportStatus::Info => "info",
        }
    }
}

/// Typed value carried by a report entry.
#[derive(Clone, Debug)]
pub enum ReportValue {
    Float(f64),
    Int(i64),
    Text(String),
}

impl ReportValue {
    pub fn render(&self) -> String {
        match self {
            ReportValue::Float(x) => fmt_float(*x),
            ReportValue::Int(n) => n.to_string(),
            ReportValue::Text(s) => s.clone(),
        }
    }
}

/// One flat line of the report.
#[derive(Clone, Debug)]
pub struct ReportEntry {
    pub key: String,
    pub value: ReportValue,
    pub status: ReportStatus,
    /// Human-readable tolerance annotation, when one applies.
    pub tol: Option<String>,
}

/// Full report: ordered entries plus an abort message when a numeric step
/// failed partway (entries gathered before the failure are retained).
#[derive(Clone, Debug)]
pub struct ReportSummary {
    depth: u32,
    entries: Vec<ReportEntry>,
    aborted: Option<String>,
}

impl ReportSummary {
    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn entries(&self) -> &[ReportEntry] {
        &self.entries
    }

    pub fn aborted(&self) -> Option<&str> {
        self.aborted.as_deref()
    }

    pub fn has_failures(&self) -> bool {
        self.entries.iter().any(|e| e.status == ReportStatus::Fail)
    }

    /// Renders the flat text form, one `key: value status (tol …)` per line.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&e.key);
            out.push_str(": ");
            out.push_str(&e.value.render());
            out.push(' ');
            out.push_str(e.status.label());
            if let Some(tol) = &e.tol {
                out.push_str(" (tol ");
                out.push_str(tol);
                out.push(')');
            }
            out.push('\n');
        }
        if let Some(msg) = &self.aborted {
            out.push_str("aborted: ");
            out.push_str(msg);
            out.push('\n');
        }
        out
    }
}

/// Fractional part of multiples of the golden ratio: a deterministic
/// low-discrepancy stand-in for random samples.
fn golden_samples(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    (1..=n)
        .map(|k| {
            let f = (k as f64 * INV_PHI).fract();
            lo + (hi - lo) * f
        })
        .collect()
}

struct Builder {
    entries: Vec<ReportEntry>,
}

impl Builder {
    fn push(&mut self, key: &str, value: ReportValue, status: ReportStatus, tol: Option<&str>) {
        self.entries.push(ReportEntry {
            key: key.to_string(),
            value,
            status,
            tol: tol.map(str::to_string),
        });
    }

    fn info_float(&mut self, key: &str, value: f64) {
        self.push(key, ReportValue::Float(value), ReportStatus::Info, None);
    }

    fn check_abs(&mut self, key: &str, value: f64, tol: f64) {
        let status = if value.abs() <= tol {
            ReportStatus::Pass
        } else {
            ReportStatus::Fail
        };
        self.push(
            key,
            ReportValue::Float(value),
            status,
            Some(&format!("{tol:e}")),
        );
    }

    fn check_int(&mut self, key: &str, value: i64, expected: i64) {
        let status = if value == expected {
            ReportStatus::Pass
        } else {
            ReportStatus::Fail
        };
        self.push(key, ReportValue::Int(value), status, Some("exact"));
    }
}

/// Smallest depth the report accepts: the sweep needs at least three
/// counting anchors and a level-4 summation-by-parts stage.
pub const MIN_REPORT_DEPTH: u32 = 4;

/// Runs the full deterministic sweep at `depth`.
///
/// Entries gathered before a numeric failure are kept and the failure is
/// recorded in [`ReportSummary::aborted`]; only an invalid depth is a
/// hard error.
pub fn build_report(depth: u32) -> Result<ReportSummary> {
    if depth < MIN_REPORT_DEPTH {
        return Err(Error::Precondition("report depth must be at least 4"));
    }
    let mut b = Builder {
        entries: Vec::new(),
    };
    let aborted = build_into(&mut b, depth).err().map(|e| e.to_string());
    Ok(ReportSummary {
        depth,
        entries: b.entries,
        aborted,
    })
}

fn build_into(b: &mut Builder, depth: u32) -> Result<()> {
    b.push(
        "meta.depth",
        ReportValue::Int(depth as i64),
        ReportStatus::Info,
        None,
    );
    b.info_float("meta.delta", delta());
    b.info_float("meta.rho", energy_scaling_rho());

    curve_section(b, depth)?;
    trapeze_section(b, depth)?;
    measure_section(b, depth)?;
    energy_section(b, depth)?;
    laplacian_section(b, depth)?;
    spectrum_section(b, depth)?;
    counting_section(b, depth)?;
    Ok(())
}

fn curve_section(b: &mut Builder, depth: u32) -> Result<()> {
    let g = build_level(depth)?;
    b.check_int(
        "curve.vertex_count",
        g.vertex_count() as i64,
        3i64.pow(depth) + 1,
    );

    let step = 0.5f64.powi(depth as i32);
    let verts = g.vertices();
    let mut step_dev = 0f64;
    for w in verts.windows(2) {
        step_dev = step_dev.max((w[0].dist(&w[1]) - step).abs());
    }
    b.check_abs("curve.step_length_max_dev", step_dev, 1e-12);

    let endpoint_gap = verts[0]
        .dist(&crate::curve::CORNER_A)
        .max(verts.last().unwrap().dist(&crate::curve::CORNER_D));
    b.check_abs("curve.endpoint_gap", endpoint_gap, 1e-12);

    // Nesting of the previous level into this one.
    let coarse = build_level(depth - 1)?;
    let mut nest_dev = 0f64;
    for p in coarse.vertices() {
        let nearest = verts
            .iter()
            .map(|q| p.dist(q))
            .fold(f64::INFINITY, f64::min);
        nest_dev = nest_dev.max(nearest);
    }
    b.check_abs("curve.nesting_max_dev", nest_dev, 1e-9);

    let sub = crate::curve::subset_checks(depth.min(6) - 1)?;
    let ok = sub.nested_in_next && sub.strict_subset_of_gasket;
    b.push(
        "curve.gasket_strict_subset",
        ReportValue::Text(if ok { "true".into() } else { "false".into() }),
        if ok {
            ReportStatus::Pass
        } else {
            ReportStatus::Fail
        },
        None,
    );
    Ok(())
}

fn trapeze_section(b: &mut Builder, depth: u32) -> Result<()> {
    let g = build_level(depth)?;
    let cells = trapeze_decomposition(&g)?;
    b.check_int(
        "trapeze.cell_count",
        cells.len() as i64,
        3i64.pow(depth - 1),
    );
    let formula = cell_area(depth);
    let mut area_dev = 0f64;
    for cell in cells.cells() {
        area_dev = area_dev.max((cell.area() - formula).abs());
    }
    b.check_abs("trapeze.area_max_dev", area_dev, 1e-12);
    let expected_total = formula * 3f64.powi(depth as i32 - 1);
    b.check_abs(
        "trapeze.total_area_dev",
        cells.total_area() - expected_total,
        1e-12,
    );
    Ok(())
}

fn measure_section(b: &mut Builder, depth: u32) -> Result<()> {
    let model = MeasureModel::default();
    let ones = VertexFunction::constant(depth, 1.0);
    b.check_abs(
        "measure.total_mass_dev",
        crate::measure::integrate(&ones, &model)? - 1.0,
        1e-12,
    );

    let skew = MeasureModel::new(0.5, 0.3, 0.2)?;
    let skew_ones = VertexFunction::constant(depth.min(7), 1.0);
    b.check_abs(
        "measure.skew_mass_dev",
        crate::measure::integrate(&skew_ones, &skew)? - 1.0,
        1e-12,
    );

    let m = depth.min(7);
    let uniform = 3f64.powi(1 - m as i32) / 4.0;
    let mut spline_dev = 0f64;
    for i in 2..=3usize.pow(m) {
        let v = crate::measure::spline_integral(m, i, &model)?;
        spline_dev = spline_dev.max((v - uniform).abs());
    }
    b.check_abs("measure.spline_uniform_max_dev", spline_dev, 1e-12);
    Ok(())
}

fn energy_section(b: &mut Builder, depth: u32) -> Result<()> {
    let boundary = golden_samples(4, -1.0, 1.0);
    let u1 = VertexFunction::new(1, boundary.clone())?;
    for (scheme, target, key) in [
        (ConductanceScheme::raw(), 1.0 / 3.0, "energy.ratio.raw_dev"),
        (
            ConductanceScheme::geometric(),
            5.0 / 3.0,
            "energy.ratio.geometric_dev",
        ),
        (
            ConductanceScheme::renormalized(),
            1.0,
            "energy.ratio.renormalized_dev",
        ),
    ] {
        let r = energy_ratio(&u1, scheme)?;
        b.check_abs(key, r - target, 1e-12);
    }

    let seq = normalized_energy_sequence(
        [boundary[0], boundary[1], boundary[2], boundary[3]],
        depth.min(6),
        ConductanceScheme::renormalized(),
    )?;
    let first = seq.energies[0];
    let drift = seq
        .energies
        .iter()
        .map(|e| (e - first).abs())
        .fold(0f64, f64::max);
    b.check_abs("energy.renormalized_drift", drift, 1e-10);

    let level = depth.min(4);
    let n = 3usize.pow(level) + 1;
    let mut max_incr = f64::NEG_INFINITY;
    for block in 0..20 {
        let vals = golden_samples(n + block, -0.5, 1.5)[block..].to_vec();
        let u = VertexFunction::new(level, vals)?;
        let cut = markov_cut(&u);
        for scheme in [
            ConductanceScheme::raw(),
            ConductanceScheme::geometric(),
            ConductanceScheme::renormalized(),
        ] {
            max_incr = max_incr.max(energy(&cut, &cut, scheme)? - energy(&u, &u, scheme)?);
        }
    }
    let status = if max_incr <= 0.0 {
        ReportStatus::Pass
    } else {
        ReportStatus::Fail
    };
    b.push(
        "energy.markov_max_increase",
        ReportValue::Float(max_incr),
        status,
        Some("<= 0"),
    );
    Ok(())
}

fn laplacian_section(b: &mut Builder, depth: u32) -> Result<()> {
    let model = MeasureModel::default();
    let scheme = ConductanceScheme::renormalized();

    let m = depth.min(6);
    let parabola = VertexFunction::from_arc_fn(m, |s| s * (1.0 - s));
    let field = pointwise_laplacian(&parabola, scheme, &model)?;
    let mut dev = 0f64;
    for (_, v) in field.iter() {
        dev = dev.max((v + 8.0 / 3.0).abs());
    }
    b.check_abs("laplacian.parabola_max_dev", dev, 1e-9);

    let m5 = depth.min(5);
    let sine = VertexFunction::from_arc_fn(m5, |s| (std::f64::consts::PI * s).sin());
    let sine_field = pointwise_laplacian(&sine, scheme, &model)?;
    let target = -4.0 / 3.0 * std::f64::consts::PI * std::f64::consts::PI;
    let mut rel = 0f64;
    for (i, v) in sine_field.iter() {
        let u = sine.value(i)?;
        if u.abs() > 1e-12 {
            rel = rel.max((v / u - target).abs() / target.abs());
        }
    }
    b.check_abs("laplacian.sine_rel_dev", rel, 1e-3);

    let probe = convergence_probe(
        |s| (std::f64::consts::PI * s).sin(),
        2,
        depth.min(6),
        scheme,
        &model,
    )?;
    let last = *probe.decay_ratios.last().unwrap();
    let in_band = (1.0 / 11.0..=1.0 / 7.0).contains(&last);
    b.push(
        "laplacian.sine_decay_ratio",
        ReportValue::Float(last),
        if in_band {
            ReportStatus::Pass
        } else {
            ReportStatus::Fail
        },
        Some("band [1/11, 1/7]"),
    );

    let lv = depth.min(4);
    let n = 3usize.pow(lv) + 1;
    let mut sbp_max = 0f64;
    for pair in 0..5 {
        let raw = golden_samples(2 * n + pair, -1.0, 1.0)[pair..].to_vec();
        let uv = raw[..n].to_vec();
        let mut vv = raw[n..].to_vec();
        // The pairing identity needs the test function to vanish on the
        // level-1 vertices.
        for i in level_one_chain_indices(lv) {
            vv[i - 1] = 0.0;
        }
        let u = VertexFunction::new(lv, uv)?;
        let v = VertexFunction::new(lv, vv)?;
        for scheme in [
            ConductanceScheme::raw(),
            ConductanceScheme::geometric(),
            ConductanceScheme::renormalized(),
        ] {
            sbp_max = sbp_max.max(summation_by_parts_check(&u, &v, scheme)?);
        }
    }
    b.check_abs("laplacian.sbp_residual_max", sbp_max, 1e-10);
    Ok(())
}

fn spectrum_section(b: &mut Builder, depth: u32) -> Result<()> {
    let mut num_dev = 0f64;
    for m in 2..=depth.min(6) {
        let num = dirichlet_spectrum_numeric(m, Boundary::LevelOne)?;
        let exact = dirichlet_spectrum_exact(m, Boundary::LevelOne)?;
        for (a, e) in num.flat().iter().zip(exact.flat()) {
            num_dev = num_dev.max((a - e).abs());
        }
    }
    b.check_abs("spectrum.numeric_vs_exact_max_dev", num_dev, 1e-9);

    let s2 = dirichlet_spectrum_exact(2, Boundary::LevelOne)?;
    let shape: Vec<String> = s2
        .lines()
        .iter()
        .map(|l| format!("{:.0}x{}", l.value, l.multiplicity))
        .collect();
    let shape = shape.join(",");
    b.push(
        "spectrum.level2_lines",
        ReportValue::Text(shape.clone()),
        if shape == "1x3,3x3" {
            ReportStatus::Pass
        } else {
            ReportStatus::Fail
        },
        None,
    );

    let deep = dirichlet_spectrum_exact(depth, Boundary::LevelOne)?;
    b.check_int(
        "spectrum.count_deepest",
        deep.total_count() as i64,
        3i64.pow(depth) - 3,
    );

    let fm = forbidden_check(depth.min(7))?;
    b.push(
        "spectrum.forbidden_margin",
        ReportValue::Float(fm.margin),
        if fm.absent && fm.margin > 1e-3 {
            ReportStatus::Pass
        } else {
            ReportStatus::Fail
        },
        Some("> 1e-3"),
    );

    let mut closure_dev = 0f64;
    for m in 3..=depth.min(6) {
        let fine = dirichlet_spectrum_exact(m, Boundary::LevelOne)?;
        let coarse = dirichlet_spectrum_exact(m - 1, Boundary::LevelOne)?;
        let mut coarse_padded = coarse.flat();
        coarse_padded.extend_from_slice(&[0.0, 4.0]);
        for &lambda in &fine.flat() {
            let down = decimate_down(lambda);
            let best = coarse_padded
                .iter()
                .map(|c| (down - c).abs())
                .fold(f64::INFINITY, f64::min);
            closure_dev = closure_dev.max(best);
        }
        let fine_flat = fine.flat();
        for &lambda in &coarse.flat() {
            for child in decimate_up(lambda)?.children {
                let best = fine_flat
                    .iter()
                    .map(|c| (child - c).abs())
                    .fold(f64::INFINITY, f64::min);
                closure_dev = closure_dev.max(best);
            }
        }
    }
    b.check_abs("spectrum.closure_max_dev", closure_dev, 1e-9);

    let mut phi_dev = 0f64;
    for x in golden_samples(50, 4.01, 50.0) {
        let lhs = phi(decimate_down(x), PhiBranch::Contracting)?;
        let rhs = phi(x, PhiBranch::Contracting)?.powi(3);
        phi_dev = phi_dev.max((lhs - rhs).abs());
    }
    b.check_abs("spectrum.phi_cube_max_dev", phi_dev, 1e-10);

    let mut ext_dev = 0f64;
    for segment in 0..3 {
        for k in 1..=2 {
            let (parent, u) = dirichlet_eigenfunction(2, segment, k)?;
            for child in decimate_up(parent)?.children {
                let fine = extend_eigenfunction(&u, parent, child)?;
                let field = graph_laplacian_apply(&fine);
                for (i, d) in field.iter_excluding_level_one() {
                    ext_dev = ext_dev.max((-d - child * fine.value(i)?).abs());
                }
            }
        }
    }
    b.check_abs("spectrum.extension_residual_max", ext_dev, 1e-10);
    Ok(())
}

fn counting_section(b: &mut Builder, depth: u32) -> Result<()> {
    let spectra: Vec<Spectrum> = (2..=depth)
        .map(|m| dirichlet_spectrum_exact(m, Boundary::LevelOne))
        .collect::<Result<_>>()?;

    let geometric = counting_function(&spectra, ScalingMode::Geometric)?;
    for &(m, _, n) in geometric.anchors() {
        b.check_int(
            &format!("counting.anchor.level{m}"),
            n as i64,
            3i64.pow(m) - 3,
        );
    }

    let refs = WeylReferences::standard();
    let geo_fit = weyl_fit(&geometric)?;
    let geo_ok = (geo_fit.alpha - refs.identity_exponent).abs() <= 0.02 * refs.identity_exponent;
    b.push(
        "counting.alpha_geometric",
        ReportValue::Float(geo_fit.alpha),
        if geo_ok {
            ReportStatus::Pass
        } else {
            ReportStatus::Fail
        },
        Some("2% rel"),
    );
    b.info_float("counting.alpha_geometric_residual", geo_fit.residual);
    b.push(
        "counting.fit_window",
        ReportValue::Text(format!("{}..{}", geo_fit.window.0, geo_fit.window.1)),
        ReportStatus::Info,
        None,
    );

    let arclength = counting_function(&spectra, ScalingMode::Arclength)?;
    let arc_fit = weyl_fit(&arclength)?;
    let arc_ok = (arc_fit.alpha - 0.5).abs() <= 0.02 * 0.5;
    b.push(
        "counting.alpha_arclength",
        ReportValue::Float(arc_fit.alpha),
        if arc_ok {
            ReportStatus::Pass
        } else {
            ReportStatus::Fail
        },
        Some("2% rel"),
    );

    b.info_float("counting.alpha_identity_ref", refs.identity_exponent);
    b.info_float("counting.alpha_arclength_ref", refs.arclength_exponent);
    b.info_float("counting.alpha_gasket_ref", refs.gasket_exponent);
    b.info_float(
        "counting.alpha_delta_formula_ref",
        refs.delta_formula_exponent,
    );

    let probe = ratio_periodicity_probe(&geometric, refs.identity_exponent)?;
    for (c, band) in [(4.0, 0.10), (2.0, 0.25)] {
        let ratios: Vec<f64> = probe
            .rows
            .iter()
            .filter(|r| r.c == c && r.level >= 3)
            .map(|r| r.ratio)
            .collect();
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        let max_rel = ratios
            .iter()
            .map(|r| (r - mean).abs() / mean)
            .fold(0f64, f64::max);
        let key = format!("counting.periodicity_c{c:.0}_max_rel_dev");
        let status = if max_rel <= band {
            ReportStatus::Pass
        } else {
            ReportStatus::Fail
        };
        b.push(
            &key,
            ReportValue::Float(max_rel),
            status,
            Some(&format!("{band}")),
        );
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_shallow_depth() {
        assert!(build_report(3).is_err());
        assert!(build_report(0).is_err());
    }

    #[test]
    fn default_depth_report_is_all_green() {
        let r = build_report(7).unwrap();
        assert!(r.aborted().is_none());
        assert!(!r.has_failures(), "failures:\n{}", r.render_text());
        assert!(r.entries().len() > 25);
        // Every non-info entry carries a tolerance or an exactness note.
        for e in r.entries() {
            if e.status != ReportStatus::Info {
                assert!(e.tol.is_some() || matches!(e.value, ReportValue::Text(_)));
            }
        }
    }

    #[test]
    fn report_is_deterministic() {
        let a = build_report(4).unwrap().render_text();
        let b = build_report(4).unwrap().render_text();
        assert_eq!(a, b);
        assert!(a.contains("counting.alpha_geometric"));
        assert!(a.lines().all(|l| l.contains(": ")));
    }

    #[test]
    fn shallow_depth_runs_green_except_asymptotics() {
        // Depth 4 is legal but the Weyl window is still pre-asymptotic;
        // only counting.alpha_* entries may fail there.
        let r = build_report(4).unwrap();
        assert!(r.aborted().is_none());
        for e in r.entries() {
            if e.status == ReportStatus::Fail {
                assert!(
                    e.key.starts_with("counting.alpha_"),
                    "unexpected failure {}",
                    e.key
                );
            }
        }
    }
}
