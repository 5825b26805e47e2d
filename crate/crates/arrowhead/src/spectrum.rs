//! Dirichlet spectra of the chain Laplacian, the spectral-decimation maps
//! between consecutive levels, and eigenvalue counting.
//!
//! With the four level-1 vertices held at zero, `−Δ_m` decouples into three
//! identical Dirichlet path blocks (one per segment `A–B`, `B–C`, `C–D`),
//! each symmetric tridiagonal with diagonal 2 and off-diagonal −1.  Their
//! eigenvalues are known in closed form, `2 − 2 cos(kπ/3^(m−1))`, each with
//! multiplicity three, which gives an independent oracle for the numeric
//! route.  Under the substitution `Λ = 2 − 2 cos θ` the one-level decimation
//! map is the angle tripling `θ ↦ 3θ`, i.e. the cubic
//! `Λ ↦ 2 + 3(2 − Λ) − (2 − Λ)³`, and each eigenvalue has three preimages
//! obtained by dividing the angle.

use crate::curve::level_one_chain_indices;
use crate::error::{Error, Result};
use crate::function::VertexFunction;
use crate::tridiag;

/// Which vertices carry the Dirichlet condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Boundary {
    /// All four level-1 vertices `A`, `B`, `C`, `D` (the default).
    LevelOne,
    /// Only the chain endpoints `A`, `D`.
    Endpoints,
}

/// One eigenvalue with its multiplicity.
#[derive(Clone, Copy, Debug)]
pub struct SpectralLine {
    pub value: f64,
    pub multiplicity: usize,
}

/// Sorted Dirichlet spectrum of one level.
#[derive(Clone, Debug)]
pub struct Spectrum {
    level: u32,
    boundary: Boundary,
    lines: Vec<SpectralLine>,
}

impl Spectrum {
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    /// Distinct eigenvalues in ascending order.
    pub fn lines(&self) -> &[SpectralLine] {
        &self.lines
    }

    /// Total eigenvalue count with multiplicity.
    pub fn total_count(&self) -> usize {
        self.lines.iter().map(|l| l.multiplicity).sum()
    }

    /// Eigenvalues repeated according to multiplicity, ascending.
    pub fn flat(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.total_count());
        for line in &self.lines {
            out.extend(std::iter::repeat_n(line.value, line.multiplicity));
        }
        out
    }
}

fn boundary_indices(m: u32, boundary: Boundary) -> Vec<usize> {
    match boundary {
        Boundary::LevelOne => level_one_chain_indices(m).to_vec(),
        Boundary::Endpoints => vec![1, 3usize.pow(m) + 1],
    }
}

fn validate_level(m: u32, boundary: Boundary) -> Result<()> {
    let min = match boundary {
        Boundary::LevelOne => 2,
        Boundary::Endpoints => 1,
    };
    if m < min {
        return Err(Error::Precondition(
            "spectrum needs at least one interior vertex per block",
        ));
    }
    Ok(())
}

/// Sizes of the decoupled interior blocks between boundary vertices.
fn block_sizes(m: u32, boundary: Boundary) -> Vec<usize> {
    boundary_indices(m, boundary)
        .windows(2)
        .map(|w| w[1] - w[0] - 1)
        .collect()
}

fn assemble_lines(
    m: u32,
    boundary: Boundary,
    solve: impl Fn(usize) -> Result<Vec<f64>>,
) -> Result<Spectrum> {
    validate_level(m, boundary)?;
    // Identical block sizes share one solve; their eigenspaces are disjoint,
    // so multiplicities add.
    let mut by_size = std::collections::BTreeMap::new();
    for size in block_sizes(m, boundary) {
        *by_size.entry(size).or_insert(0usize) += 1;
    }
    let mut lines = Vec::new();
    for (size, mult) in by_size {
        for value in solve(size)? {
            lines.push(SpectralLine {
                value,
                multiplicity: mult,
            });
        }
    }
    lines.sort_by(|a, b| a.value.total_cmp(&b.value));
    Ok(Spectrum {
        level: m,
        boundary,
        lines,
    })
}

/// Dirichlet spectrum by bisection on the tridiagonal interior blocks.
pub fn dirichlet_spectrum_numeric(m: u32, boundary: Boundary) -> Result<Spectrum> {
    assemble_lines(m, boundary, |size| {
        // Every interior chain vertex has exactly two chain neighbours, so
        // each block is (2 on the diagonal, −1 off it).
        let diag = vec![2.0; size];
        let off = vec![-1.0; size.saturating_sub(1)];
        tridiag::eigenvalues(&diag, &off, 1e-12)
    })
}

/// Dirichlet spectrum from the closed form for path blocks:
/// a block with `n` interior vertices (hence `n + 1` edges) contributes
/// `2 − 2 cos(kπ/(n+1))`, `k = 1..n`.
pub fn dirichlet_spectrum_exact(m: u32, boundary: Boundary) -> Result<Spectrum> {
    assemble_lines(m, boundary, |size| {
        let edges = (size + 1) as f64;
        Ok((1..=size)
            .map(|k| 2.0 - 2.0 * (k as f64 * std::f64::consts::PI / edges).cos())
            .collect())
    })
}

/// Closed-form Dirichlet eigenpair supported on one of the three segments
/// (`segment` in `0..3`): the sine profile `sin(kπ i / 3^(m−1))` on the
/// segment's interior, zero elsewhere, with eigenvalue
/// `2 − 2 cos(kπ/3^(m−1))`.
pub fn dirichlet_eigenfunction(m: u32, segment: usize, k: usize) -> Result<(f64, VertexFunction)> {
    validate_level(m, Boundary::LevelOne)?;
    if segment >= 3 {
        return Err(Error::IndexOutOfRange {
            what: "segment",
            index: segment,
            max: 2,
        });
    }
    let edges = 3usize.pow(m - 1);
    if k == 0 || k >= edges {
        return Err(Error::IndexOutOfRange {
            what: "mode",
            index: k,
            max: edges - 1,
        });
    }
    let theta = k as f64 * std::f64::consts::PI / edges as f64;
    let mut u = VertexFunction::constant(m, 0.0);
    let start = segment * edges; // 0-based chain offset of the segment start
    for i in 1..edges {
        u.values_mut()[start + i] = (theta * i as f64).sin();
    }
    Ok((2.0 - 2.0 * theta.cos(), u))
}

/// Which root of `r² − (x − 2) r + 1 = 0` the map `phi` returns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhiBranch {
    /// `ε = +1`: the root in `(0, 1)`.
    Contracting,
    /// `ε = −1`: the reciprocal root in `(1, ∞)`.
    Expanding,
}

/// `φ(x) = (x − 2 − ε √((x−2)² − 4)) / 2` for `x > 4`.
///
/// The two branches multiply to one; the contracting branch lies in
/// `(0, 1)` and satisfies `φ(decimate_down⁻¹-chain)` products, in
/// particular `φ(decimate_down(x)) = φ(x)³`.
pub fn phi(x: f64, branch: PhiBranch) -> Result<f64> {
    if x.is_nan() || x <= 4.0 {
        return Err(Error::OutOfDomain {
            op: "phi",
            value: x,
            domain: "(4, inf)",
        });
    }
    let t = x - 2.0;
    let root = (t * t - 4.0).sqrt();
    Ok(match branch {
        PhiBranch::Contracting => (t - root) / 2.0,
        PhiBranch::Expanding => (t + root) / 2.0,
    })
}

/// Inverse of the contracting branch on `(0, 1]`: `φ⁻¹(y) = (y + 1)² / y`.
pub fn phi_inverse(y: f64) -> Result<f64> {
    if !(y > 0.0 && y <= 1.0) {
        return Err(Error::OutOfDomain {
            op: "phi_inverse",
            value: y,
            domain: "(0, 1]",
        });
    }
    Ok((y + 1.0) * (y + 1.0) / y)
}

/// One-level decimation towards the coarser spectrum:
/// `Λ ↦ 2 + 3(2 − Λ) − (2 − Λ)³`, the triple-angle map under
/// `Λ = 2 − 2 cos θ`.
pub fn decimate_down(lambda: f64) -> f64 {
    let t = 2.0 - lambda;
    2.0 + 3.0 * t - t * t * t
}

/// The three child eigenvalues of one parent under decimation.
#[derive(Clone, Copy, Debug)]
pub struct DecimationBranches {
    pub parent: f64,
    /// Children in branch order `n = 0, 1, 2` (angles `(θ′ + 2πn)/3`).
    pub children: [f64; 3],
}

/// Inverts the decimation map: the three solutions of
/// `decimate_down(Λ) = Λ′` for `Λ′ ∈ [0, 4]`, via angle division.
pub fn decimate_up(lambda_parent: f64) -> Result<DecimationBranches> {
    if !(0.0..=4.0).contains(&lambda_parent) {
        return Err(Error::OutOfDomain {
            op: "decimate_up",
            value: lambda_parent,
            domain: "[0, 4]",
        });
    }
    let theta = ((2.0 - lambda_parent) / 2.0).clamp(-1.0, 1.0).acos();
    let mut children = [0.0; 3];
    for (n, child) in children.iter_mut().enumerate() {
        let angle = (theta + 2.0 * std::f64::consts::PI * n as f64) / 3.0;
        *child = 2.0 - 2.0 * angle.cos();
    }
    Ok(DecimationBranches {
        parent: lambda_parent,
        children,
    })
}

/// Tolerance used to accept a child eigenvalue as a branch of its parent.
pub const BRANCH_TOL: f64 = 1e-9;

/// Extends an eigenfunction one level down the refinement.
///
/// Given `u` at level `m − 1` with eigenvalue `parent` and a chosen branch
/// eigenvalue `child` at level `m`, each subdivided edge `(a, b)` receives
/// ```text
///   y1 = ((2 − child) a + b) / ((2 − child)² − 1)
///   y2 = (a + (2 − child) b) / ((2 − child)² − 1)
/// ```
/// which makes the eigenvalue equation hold at every new vertex, and — by
/// the decimation identity — at every old interior vertex as well.
/// Children `1` and `3` are singular for this rule and rejected.
pub fn extend_eigenfunction(u: &VertexFunction, parent: f64, child: f64) -> Result<VertexFunction> {
    let residual = (decimate_down(child) - parent).abs();
    if residual > BRANCH_TOL {
        return Err(Error::BranchMismatch {
            parent,
            child,
            residual,
        });
    }
    let t = 2.0 - child;
    let denom = t * t - 1.0;
    if denom.abs() <= 1e-9 {
        return Err(Error::ExtensionSingular { lambda: child });
    }
    let old = u.values();
    let mut values = Vec::with_capacity((old.len() - 1) * 3 + 1);
    for i in 0..old.len() - 1 {
        let (a, b) = (old[i], old[i + 1]);
        values.push(a);
        values.push((t * a + b) / denom);
        values.push((a + t * b) / denom);
    }
    values.push(*old.last().unwrap());
    VertexFunction::new(u.level() + 1, values)
}

/// Result of scanning a spectrum for the forbidden eigenvalue 2.
#[derive(Clone, Copy, Debug)]
pub struct ForbiddenReport {
    /// True when no eigenvalue sits at 2 (margin clears numeric noise).
    pub absent: bool,
    /// `min |Λ − 2|` over the spectrum.
    pub margin: f64,
}

/// Checks that 2 is absent from the level-`m` Dirichlet spectrum.
pub fn forbidden_check(m: u32) -> Result<ForbiddenReport> {
    let spectrum = dirichlet_spectrum_numeric(m, Boundary::LevelOne)?;
    let margin = spectrum
        .lines()
        .iter()
        .map(|l| (l.value - 2.0).abs())
        .fold(f64::INFINITY, f64::min);
    Ok(ForbiddenReport {
        absent: margin > 1e-9,
        margin,
    })
}

/// How eigenvalues are renormalized across levels before counting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalingMode {
    /// Factor `(4^δ/3)^m = (5/3)^m`, the energy-form scaling.
    Geometric,
    /// Factor `9^m`, the arc-length scaling (squared mesh refinement).
    Arclength,
}

impl ScalingMode {
    pub fn label(&self) -> &'static str {
        match self {
            ScalingMode::Geometric => "geometric",
            ScalingMode::Arclength => "arclength",
        }
    }

    pub fn factor(&self) -> f64 {
        match self {
            ScalingMode::Geometric => crate::energy::energy_scaling_rho(),
            ScalingMode::Arclength => 9.0,
        }
    }
}

/// Number of grid samples of the merged counting function.
const GRID_POINTS: usize = 200;

/// Renormalized spectra of several levels with counting-function samples.
#[derive(Clone, Debug)]
pub struct CountingSeries {
    scaling: ScalingMode,
    levels: Vec<u32>,
    /// Sorted renormalized eigenvalues per level (flat, with multiplicity).
    per_level: Vec<Vec<f64>>,
    /// `(level, x_m = 4·factor^m, N_level(x_m))` — one anchor per level.
    anchors: Vec<(u32, f64, u64)>,
    /// `(x, N(x))` for the deepest level on a log-spaced grid.
    grid: Vec<(f64, u64)>,
}

impl CountingSeries {
    pub fn scaling(&self) -> ScalingMode {
        self.scaling
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    pub fn anchors(&self) -> &[(u32, f64, u64)] {
        &self.anchors
    }

    pub fn grid(&self) -> &[(f64, u64)] {
        &self.grid
    }

    /// Counting function of one level's renormalized spectrum.
    pub fn count_at_level(&self, level: u32, x: f64) -> Result<u64> {
        let idx = self
            .levels
            .iter()
            .position(|&l| l == level)
            .ok_or(Error::LevelMismatch {
                expected: *self.levels.first().unwrap_or(&0),
                got: level,
            })?;
        Ok(self.per_level[idx].partition_point(|&v| v <= x) as u64)
    }
}

/// Builds the renormalized counting data from per-level spectra
/// (strictly increasing levels).
pub fn counting_function(spectra: &[Spectrum], scaling: ScalingMode) -> Result<CountingSeries> {
    if spectra.is_empty() {
        return Err(Error::InsufficientFitData { needed: 1, got: 0 });
    }
    if !spectra.windows(2).all(|w| w[0].level() < w[1].level()) {
        return Err(Error::Precondition(
            "spectra must have strictly increasing levels",
        ));
    }
    let factor = scaling.factor();
    let mut levels = Vec::with_capacity(spectra.len());
    let mut per_level = Vec::with_capacity(spectra.len());
    let mut anchors = Vec::with_capacity(spectra.len());
    for s in spectra {
        let m = s.level();
        let scale = factor.powi(m as i32);
        let mut values: Vec<f64> = s.flat().iter().map(|v| v * scale).collect();
        values.sort_by(|a, b| a.total_cmp(b));
        let anchor_x = 4.0 * scale;
        let anchor_n = values.partition_point(|&v| v <= anchor_x) as u64;
        levels.push(m);
        anchors.push((m, anchor_x, anchor_n));
        per_level.push(values);
    }
    let deepest = per_level.last().unwrap();
    let lo = deepest.first().copied().unwrap_or(1.0) * 0.9;
    let hi = deepest.last().copied().unwrap_or(1.0) * 1.1;
    let (ln_lo, ln_hi) = (lo.ln(), hi.ln());
    let grid = (0..GRID_POINTS)
        .map(|i| {
            let x = (ln_lo + (ln_hi - ln_lo) * i as f64 / (GRID_POINTS - 1) as f64).exp();
            (x, deepest.partition_point(|&v| v <= x) as u64)
        })
        .collect();
    Ok(CountingSeries {
        scaling,
        levels,
        per_level,
        anchors,
        grid,
    })
}

/// Reference exponents reported next to a fitted one.
#[derive(Clone, Copy, Debug)]
pub struct WeylReferences {
    /// `ln 3 / ln(5/3)` — forced by the per-level counting identity.
    pub identity_exponent: f64,
    /// `1/2` — the arc-length exponent.
    pub arclength_exponent: f64,
    /// `ln 3 / ln 5` — the gasket eigenvalue-counting exponent.
    pub gasket_exponent: f64,
    /// `ln 3 / (δ ln(4/3))` — the alternative δ-based formula value.
    pub delta_formula_exponent: f64,
}

impl WeylReferences {
    pub fn standard() -> Self {
        let ln3 = 3f64.ln();
        WeylReferences {
            identity_exponent: ln3 / (5f64 / 3.0).ln(),
            arclength_exponent: 0.5,
            gasket_exponent: ln3 / 5f64.ln(),
            delta_formula_exponent: ln3 / (crate::energy::delta() * (4f64 / 3.0).ln()),
        }
    }
}

/// Least-squares exponent of the counting function along its anchors.
#[derive(Clone, Copy, Debug)]
pub struct WeylFit {
    pub alpha: f64,
    /// Root-mean-square residual of the log-log fit.
    pub residual: f64,
    /// Levels `(lowest, highest)` entering the fit window.
    pub window: (u32, u32),
    pub references: WeylReferences,
}

/// Maximum number of anchor levels entering the fit window.
const FIT_WINDOW: usize = 4;

/// Fits `log N(x_m)` against `log x_m` along the anchors `x_m = 4·factor^m`.
///
/// The window keeps the deepest four levels: the anchor counts carry a
/// finite-size deficit (`3^m − 3` versus `3^m`) that biases shallow levels,
/// and the exponent is an asymptotic statement.
pub fn weyl_fit(series: &CountingSeries) -> Result<WeylFit> {
    let anchors = series.anchors();
    if anchors.len() < 3 {
        return Err(Error::InsufficientFitData {
            needed: 3,
            got: anchors.len(),
        });
    }
    let start = anchors.len().saturating_sub(FIT_WINDOW);
    let window = &anchors[start..];
    let pts: Vec<(f64, f64)> = window
        .iter()
        .map(|&(_, x, n)| (x.ln(), (n as f64).ln()))
        .collect();
    let n = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.0 - mean_x)).sum();
    let alpha = sxy / sxx;
    let intercept = mean_y - alpha * mean_x;
    let residual = (pts
        .iter()
        .map(|p| {
            let r = p.1 - (alpha * p.0 + intercept);
            r * r
        })
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(WeylFit {
        alpha,
        residual,
        window: (window.first().unwrap().0, window.last().unwrap().0),
        references: WeylReferences::standard(),
    })
}

/// One sample of `N(x)/x^α` along a geometric subsequence.
#[derive(Clone, Copy, Debug)]
pub struct PeriodicityRow {
    pub c: f64,
    pub level: u32,
    pub x: f64,
    pub count: u64,
    pub ratio: f64,
}

/// `N(x)/x^α` sampled at `x = c · factor^m`, per level and offset `c`.
#[derive(Clone, Debug)]
pub struct PeriodicityProbe {
    pub alpha: f64,
    /// Log-period of the subsequences, `ln factor`.
    pub period: f64,
    pub rows: Vec<PeriodicityRow>,
}

/// Observational probe of the approximate log-periodicity of `N(x)/x^α`.
pub fn ratio_periodicity_probe(series: &CountingSeries, alpha: f64) -> Result<PeriodicityProbe> {
    if series.scaling() != ScalingMode::Geometric {
        return Err(Error::Precondition(
            "periodicity probe expects the geometric scaling",
        ));
    }
    let factor = series.scaling().factor();
    let offsets = [1.0, 2.0, 3.0, 4.0];
    let mut rows = Vec::new();
    for &c in &offsets {
        for &m in series.levels() {
            let x = c * factor.powi(m as i32);
            let count = series.count_at_level(m, x)?;
            rows.push(PeriodicityRow {
                c,
                level: m,
                x,
                count,
                ratio: count as f64 / x.powf(alpha),
            });
        }
    }
    Ok(PeriodicityProbe {
        alpha,
        period: factor.ln(),
        rows,
    })
}
