//! Graph Laplacians on the chain and their measure-renormalized pointwise
//! form.
//!
//! The plain stencil at an interior chain vertex is
//! `Δ_m u(X) = u(left) + u(right) − 2 u(X)`.  Weighting it by the
//! conductance of a scheme and the inverse integral of the vertex hat
//! function yields the pointwise estimator
//! `f_m(X) = c_m · Δ_m u(X) / ∫hat_X`, which under the renormalized scheme
//! and the uniform measure equals `(4/3) · 9^m · Δ_m u(X)` and converges to
//! a Laplacian of the arc parametrization for smooth profiles: sampling
//! `s(1−s)` gives exactly `−8/3` at every level, and `sin(πs)` converges
//! with error shrinking ninefold per level.

use crate::curve::level_one_chain_indices;
use crate::energy::{energy, ConductanceScheme};
use crate::error::{Error, Result};
use crate::function::VertexFunction;
use crate::measure::{spline_integral, MeasureModel};

/// Values of a (possibly renormalized) Laplacian at the interior chain
/// vertices `2 ..= 3^m` of level `m`.
#[derive(Clone, Debug)]
pub struct LaplacianField {
    level: u32,
    values: Vec<f64>,
    scheme: Option<ConductanceScheme>,
}

impl LaplacianField {
    pub fn level(&self) -> u32 {
        self.level
    }

    /// Scheme used by `pointwise_laplacian`; `None` for the plain stencil.
    pub fn scheme(&self) -> Option<ConductanceScheme> {
        self.scheme
    }

    /// Values in chain order, starting at chain index 2.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Value at a 1-based interior chain index.
    pub fn value(&self, chain_index: usize) -> Result<f64> {
        if chain_index < 2 || chain_index > self.values.len() + 1 {
            return Err(Error::IndexOutOfRange {
                what: "interior chain",
                index: chain_index,
                max: self.values.len() + 1,
            });
        }
        Ok(self.values[chain_index - 2])
    }

    /// Iterates `(chain_index, value)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.values.iter().enumerate().map(|(k, &v)| (k + 2, v))
    }

    /// Largest absolute value over the interior.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// Iterates interior vertices that are not level-1 vertices.
    pub fn iter_excluding_level_one(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        let [_, b, c, _] = level_one_chain_indices(self.level);
        self.iter().filter(move |(i, _)| *i != b && *i != c)
    }
}

/// Plain second-difference stencil at every interior chain vertex.
pub fn graph_laplacian_apply(u: &VertexFunction) -> LaplacianField {
    let vals = u.values();
    let values = (1..vals.len() - 1)
        .map(|i| vals[i - 1] + vals[i + 1] - 2.0 * vals[i])
        .collect();
    LaplacianField {
        level: u.level(),
        values,
        scheme: None,
    }
}

/// True when the stencil vanishes (within `tol`) at every interior vertex.
pub fn is_harmonic(u: &VertexFunction, tol: f64) -> bool {
    graph_laplacian_apply(u).max_abs() <= tol
}

/// Default tolerance for [`is_harmonic`].
pub const HARMONIC_TOL: f64 = 1e-12;

/// The hat function of one interior chain vertex together with its integral.
#[derive(Clone, Debug)]
pub struct SplineFunction {
    pub center: usize,
    pub values: VertexFunction,
    pub integral: f64,
}

/// Builds the vertex hat (Kronecker data) at `center` and integrates it
/// against the model measure.
pub fn spline_function(m: u32, center: usize, model: &MeasureModel) -> Result<SplineFunction> {
    let integral = spline_integral(m, center, model)?;
    Ok(SplineFunction {
        center,
        values: VertexFunction::kronecker(m, center)?,
        integral,
    })
}

/// Measure-renormalized pointwise Laplacian
/// `f_m(X) = c_m · Δ_m u(X) / ∫hat_X`.
pub fn pointwise_laplacian(
    u: &VertexFunction,
    scheme: ConductanceScheme,
    model: &MeasureModel,
) -> Result<LaplacianField> {
    let m = u.level();
    let c = scheme.conductance(m);
    let stencil = graph_laplacian_apply(u);
    let mut values = Vec::with_capacity(stencil.values().len());
    for (chain_index, d) in stencil.iter() {
        let w = spline_integral(m, chain_index, model)?;
        values.push(c * d / w);
    }
    Ok(LaplacianField {
        level: m,
        values,
        scheme: Some(scheme),
    })
}

/// Sup-norm distances between successive pointwise-Laplacian fields of one
/// arc profile, restricted to the common vertices away from the level-1 set.
#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    pub scheme: ConductanceScheme,
    /// `(m, sup |f_{m+1} − f_m|)` over common non-level-1 interior vertices.
    pub deviations: Vec<(u32, f64)>,
    /// Ratios of consecutive deviations where defined.
    pub decay_ratios: Vec<f64>,
}

/// Probes convergence of the pointwise Laplacian for `f` sampled at the
/// arc coordinates of levels `m_lo ..= m_hi`.
pub fn convergence_probe(
    f: impl Fn(f64) -> f64,
    m_lo: u32,
    m_hi: u32,
    scheme: ConductanceScheme,
    model: &MeasureModel,
) -> Result<ConvergenceReport> {
    if m_lo < 1 || m_hi <= m_lo {
        return Err(Error::Precondition("need 1 <= m_lo < m_hi"));
    }
    let fields: Vec<LaplacianField> = (m_lo..=m_hi)
        .map(|m| pointwise_laplacian(&VertexFunction::from_arc_fn(m, &f), scheme, model))
        .collect::<Result<_>>()?;
    let mut deviations = Vec::new();
    for (k, pair) in fields.windows(2).enumerate() {
        let m = m_lo + k as u32;
        let mut sup: f64 = 0.0;
        for (i, coarse) in pair[0].iter_excluding_level_one() {
            // Chain index i at level m sits at 3(i−1)+1 one level deeper.
            let fine = pair[1].value(3 * (i - 1) + 1)?;
            sup = sup.max((fine - coarse).abs());
        }
        deviations.push((m, sup));
    }
    let decay_ratios = deviations
        .windows(2)
        .filter(|w| w[0].1 > 0.0)
        .map(|w| w[1].1 / w[0].1)
        .collect();
    Ok(ConvergenceReport {
        scheme,
        deviations,
        decay_ratios,
    })
}

/// Residual of the discrete integration-by-parts identity
/// `E(u, v) = − c_m Σ v(X) Δ_m u(X)` for `v` vanishing on the level-1
/// vertices.  The two sums are accumulated in one compensated pass, so the
/// returned residual is a faithful measure of the identity itself rather
/// than of floating-point summation order.
pub fn summation_by_parts_check(
    u: &VertexFunction,
    v: &VertexFunction,
    scheme: ConductanceScheme,
) -> Result<f64> {
    u.same_level(v)?;
    let m = u.level();
    for i in level_one_chain_indices(m) {
        if v.value(i)? != 0.0 {
            return Err(Error::Precondition("v must vanish on the level-1 vertices"));
        }
    }
    let us = u.values();
    let vs = v.values();
    // Kahan-compensated sum of edge terms plus interior stencil terms; the
    // exact total is zero by Abel summation.
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut add = |term: f64| {
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    };
    for i in 0..us.len() - 1 {
        add((us[i + 1] - us[i]) * (vs[i + 1] - vs[i]));
    }
    for i in 1..us.len() - 1 {
        add(vs[i] * (us[i - 1] + us[i + 1] - 2.0 * us[i]));
    }
    Ok((scheme.conductance(m) * sum).abs())
}

/// Convenience: the energy two-form alongside the stencil pairing, exposed
/// for diagnostics.
pub fn pairing_against_laplacian(
    u: &VertexFunction,
    v: &VertexFunction,
    scheme: ConductanceScheme,
) -> Result<(f64, f64)> {
    let e = energy(u, v, scheme)?;
    let field = graph_laplacian_apply(u);
    let c = scheme.conductance(u.level());
    let mut pair = 0.0;
    for (i, d) in field.iter() {
        pair += v.value(i)? * d;
    }
    Ok((e, -c * pair))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn stencil_of_indicator() {
        let u = VertexFunction::kronecker(2, 2).unwrap();
        let field = graph_laplacian_apply(&u);
        assert_eq!(field.value(2).unwrap(), -2.0);
        assert_eq!(field.value(3).unwrap(), 1.0);
        for (i, v) in field.iter() {
            if i > 3 {
                assert_eq!(v, 0.0, "index {i}");
            }
        }
        assert!(field.value(1).is_err());
        assert!(field.value(10).is_err());
    }

    #[test]
    fn stencil_of_linear_profile_vanishes() {
        for m in 1..=5 {
            let u = VertexFunction::from_arc_fn(m, |s| 3.0 * s - 0.25);
            assert!(graph_laplacian_apply(&u).max_abs() <= 1e-14);
            assert!(is_harmonic(&u, HARMONIC_TOL));
        }
    }

    #[test]
    fn stencil_of_parabola_is_constant() {
        for m in 1..=6 {
            let u = VertexFunction::from_arc_fn(m, |s| s * (1.0 - s));
            let want = -2.0 * 9f64.powi(-(m as i32));
            for (_, v) in graph_laplacian_apply(&u).iter() {
                assert_abs_diff_eq!(v, want, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn harmonicity_of_extensions_away_from_level_one() {
        let boundary = VertexFunction::new(1, vec![0.3, -1.0, 2.0, 0.7]).unwrap();
        for m in 2..=5 {
            let ext = crate::energy::harmonic_extension(&boundary, m).unwrap();
            let field = graph_laplacian_apply(&ext);
            for (_, v) in field.iter_excluding_level_one() {
                assert!(v.abs() <= 1e-12);
            }
            // The stencil need not vanish at the interior level-1 vertices.
            assert!(!is_harmonic(&ext, HARMONIC_TOL));
        }
    }

    #[test]
    fn indicator_is_not_harmonic() {
        let u = VertexFunction::kronecker(3, 9).unwrap();
        assert!(!is_harmonic(&u, HARMONIC_TOL));
    }

    #[test]
    fn spline_function_data() {
        let model = MeasureModel::default();
        let s = spline_function(2, 4, &model).unwrap();
        assert_eq!(s.center, 4);
        assert_eq!(s.values.value(4).unwrap(), 1.0);
        assert_eq!(s.values.values().iter().sum::<f64>(), 1.0);
        assert_abs_diff_eq!(s.integral, 1.0 / 12.0, epsilon = 1e-15);
        assert!(spline_function(2, 1, &model).is_err());
    }

    #[test]
    fn unit_interval_tent_analogy() {
        // On [0, 1] the tent at either endpoint integrates to 1/2; the
        // vertex-hat quadrature here is the two-dimensional analogue.  A
        // plain trapezoid rule on a fine grid recovers the same constant.
        let n = 1 << 16;
        let h = 1.0 / n as f64;
        let tent = |x: f64| 1.0 - x;
        let mut integral = 0.5 * (tent(0.0) + tent(1.0)) * h;
        for k in 1..n {
            integral += tent(k as f64 * h) * h;
        }
        assert_abs_diff_eq!(integral, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn pointwise_parabola_hits_constant() {
        let model = MeasureModel::default();
        let scheme = ConductanceScheme::renormalized();
        for m in 1..=6 {
            let u = VertexFunction::from_arc_fn(m, |s| s * (1.0 - s));
            let field = pointwise_laplacian(&u, scheme, &model).unwrap();
            for (i, v) in field.iter() {
                assert_abs_diff_eq!(v, -8.0 / 3.0, epsilon = 1e-9);
                let _ = i;
            }
        }
    }

    #[test]
    fn pointwise_factor_is_four_thirds_nine_to_m() {
        let model = MeasureModel::default();
        let scheme = ConductanceScheme::renormalized();
        let u = VertexFunction::from_arc_fn(3, |s| (2.0 * s).exp());
        let plain = graph_laplacian_apply(&u);
        let field = pointwise_laplacian(&u, scheme, &model).unwrap();
        let factor = 4.0 / 3.0 * 9f64.powi(3);
        for ((_, a), (_, b)) in field.iter().zip(plain.iter()) {
            assert_relative_eq!(a, factor * b, epsilon = 1e-12, max_relative = 1e-12);
        }
    }

    #[test]
    fn scheme_fields_are_proportional() {
        let model = MeasureModel::default();
        let u = VertexFunction::from_arc_fn(4, |s| (PI * s).sin());
        let geo = pointwise_laplacian(&u, ConductanceScheme::geometric(), &model).unwrap();
        let ren = pointwise_laplacian(&u, ConductanceScheme::renormalized(), &model).unwrap();
        let ratio = ConductanceScheme::geometric().conductance(4)
            / ConductanceScheme::renormalized().conductance(4);
        for ((_, g), (_, r)) in geo.iter().zip(ren.iter()) {
            assert_relative_eq!(g, ratio * r, epsilon = 1e-12, max_relative = 1e-12);
        }
    }

    #[test]
    fn sine_converges_to_its_continuum_laplacian() {
        let model = MeasureModel::default();
        let scheme = ConductanceScheme::renormalized();
        let mut relative_devs = Vec::new();
        for m in 2..=6 {
            let u = VertexFunction::from_arc_fn(m, |s| (PI * s).sin());
            let field = pointwise_laplacian(&u, scheme, &model).unwrap();
            let mut worst: f64 = 0.0;
            for (i, v) in field.iter_excluding_level_one() {
                let s = (i - 1) as f64 / 3f64.powi(m as i32);
                let target = -(4.0 / 3.0) * PI * PI * (PI * s).sin();
                worst = worst.max(((v - target) / target).abs());
            }
            relative_devs.push(worst);
        }
        // Level 5 corresponds to index 3 in 2..=6.
        assert!(relative_devs[3] < 1e-3, "deviation {}", relative_devs[3]);
        for pair in relative_devs.windows(2) {
            let factor = pair[1] / pair[0];
            assert!(
                (1.0 / 11.0..=1.0 / 7.0).contains(&factor),
                "decay factor {factor}"
            );
        }
    }

    #[test]
    fn convergence_probe_reports() {
        let model = MeasureModel::default();
        let scheme = ConductanceScheme::renormalized();

        let parabola = convergence_probe(|s| s * (1.0 - s), 2, 6, scheme, &model).unwrap();
        for (_, dev) in &parabola.deviations {
            assert!(*dev <= 1e-8, "deviation {dev}");
        }

        let ramp = convergence_probe(|s| s, 2, 6, scheme, &model).unwrap();
        for (_, dev) in &ramp.deviations {
            assert!(*dev <= 1e-9);
        }

        let sine = convergence_probe(|s| (PI * s).sin(), 3, 7, scheme, &model).unwrap();
        for r in &sine.decay_ratios {
            assert!((1.0 / 11.0..=1.0 / 7.0).contains(r), "ratio {r}");
        }

        assert!(convergence_probe(|s| s, 3, 3, scheme, &model).is_err());
    }

    #[test]
    fn summation_by_parts_basics() {
        let scheme = ConductanceScheme::renormalized();
        let u = VertexFunction::from_arc_fn(3, |s| s * s);
        let zero = VertexFunction::constant(3, 0.0);
        assert_eq!(summation_by_parts_check(&u, &zero, scheme).unwrap(), 0.0);

        let mut v = VertexFunction::from_arc_fn(3, |s| (PI * s).sin() * (3.0 * PI * s).sin());
        for i in level_one_chain_indices(3) {
            v.values_mut()[i - 1] = 0.0;
        }
        let c = VertexFunction::constant(3, 2.0);
        assert!(summation_by_parts_check(&c, &v, scheme).unwrap() <= 1e-12);

        let bad = VertexFunction::constant(3, 1.0);
        assert!(matches!(
            summation_by_parts_check(&u, &bad, scheme),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn summation_by_parts_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        let schemes = [
            ConductanceScheme::raw(),
            ConductanceScheme::geometric(),
            ConductanceScheme::renormalized(),
        ];
        for m in 2..=5 {
            let n = 3usize.pow(m) + 1;
            for _ in 0..10 {
                let u = VertexFunction::new(m, (0..n).map(|_| rng.gen::<f64>()).collect()).unwrap();
                let mut v =
                    VertexFunction::new(m, (0..n).map(|_| rng.gen::<f64>()).collect()).unwrap();
                for i in level_one_chain_indices(m) {
                    v.values_mut()[i - 1] = 0.0;
                }
                for scheme in schemes {
                    let residual = summation_by_parts_check(&u, &v, scheme).unwrap();
                    assert!(residual <= 1e-10, "residual {residual} at level {m}");
                    let (e, p) = pairing_against_laplacian(&u, &v, scheme).unwrap();
                    assert_relative_eq!(e, p, epsilon = 1e-9, max_relative = 1e-9);
                }
            }
        }
    }

    #[test]
    fn stencil_is_local() {
        let m = 3;
        let n = 3usize.pow(m) + 1;
        let base = VertexFunction::from_arc_fn(m, |s| s * s);
        let mut bumped = base.clone();
        let k = 14usize; // 1-based chain index of the bump
        bumped.values_mut()[k - 1] += 1.0;
        let a = graph_laplacian_apply(&base);
        let b = graph_laplacian_apply(&bumped);
        for i in 2..n {
            let changed = (a.value(i).unwrap() - b.value(i).unwrap()).abs() > 0.0;
            assert_eq!(changed, i >= k - 1 && i <= k + 1, "index {i}");
        }
    }
}
