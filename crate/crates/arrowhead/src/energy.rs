//! Discrete energy (Dirichlet) forms on the chain and the harmonic
//! extension between consecutive levels.
//!
//! Three conductance schemes scale the per-edge sum `Σ Δu · Δv`:
//! `raw` leaves it alone, `geometric` multiplies by `4^(mδ)` with
//! `δ = ln 5 / ln 4` (so the factor is `5^m`), and `renormalized`
//! multiplies by `3^m`, the unique scaling under which harmonic extension
//! preserves energy.  Subdividing one edge `(a, b)` harmonically places
//! the values `(2a + b)/3` and `(a + 2b)/3` on the two new vertices; the
//! raw energy of an edge therefore drops by exactly one third per level.

use crate::error::{Error, Result};
use crate::function::VertexFunction;

/// `δ = ln 5 / ln 4`, the conductance exponent of the geometric scheme.
pub fn delta() -> f64 {
    5f64.ln() / 4f64.ln()
}

/// `ρ = 4^δ / 3`, the per-level growth of geometric-scheme energies.
pub fn energy_scaling_rho() -> f64 {
    4f64.powf(delta()) / 3.0
}

/// Which conductance scaling a form uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchemeKind {
    Raw,
    Geometric,
    Renormalized,
}

/// A conductance scheme: the kind plus the exponent used by the geometric
/// scaling.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConductanceScheme {
    pub kind: SchemeKind,
    pub delta: f64,
}

impl ConductanceScheme {
    pub fn raw() -> Self {
        ConductanceScheme {
            kind: SchemeKind::Raw,
            delta: delta(),
        }
    }

    pub fn geometric() -> Self {
        ConductanceScheme {
            kind: SchemeKind::Geometric,
            delta: delta(),
        }
    }

    pub fn renormalized() -> Self {
        ConductanceScheme {
            kind: SchemeKind::Renormalized,
            delta: delta(),
        }
    }

    /// Per-edge conductance at level `m`.
    pub fn conductance(&self, m: u32) -> f64 {
        match self.kind {
            SchemeKind::Raw => 1.0,
            SchemeKind::Geometric => 4f64.powf(self.delta).powi(m as i32),
            SchemeKind::Renormalized => 3f64.powi(m as i32),
        }
    }

    pub fn label(&self) -> &'static str {
        match self.kind {
            SchemeKind::Raw => "raw",
            SchemeKind::Geometric => "geometric",
            SchemeKind::Renormalized => "renormalized",
        }
    }
}

/// Bilinear energy of `u` and `v` at their common level.
pub fn energy(u: &VertexFunction, v: &VertexFunction, scheme: ConductanceScheme) -> Result<f64> {
    u.same_level(v)?;
    let c = scheme.conductance(u.level());
    let us = u.values();
    let vs = v.values();
    let mut sum = 0.0;
    for i in 0..us.len() - 1 {
        sum += (us[i + 1] - us[i]) * (vs[i + 1] - vs[i]);
    }
    Ok(c * sum)
}

/// Quadratic energy of `u`.
pub fn energy_quadratic(u: &VertexFunction, scheme: ConductanceScheme) -> Result<f64> {
    energy(u, u, scheme)
}

/// Extends `u` one level down the refinement, filling each subdivided edge
/// `(a, b)` with the energy minimizers `(2a + b)/3` and `(a + 2b)/3`.
/// The minimizer does not depend on the conductance scheme.
pub fn harmonic_extension_step(u: &VertexFunction) -> VertexFunction {
    let old = u.values();
    let mut values = Vec::with_capacity((old.len() - 1) * 3 + 1);
    for i in 0..old.len() - 1 {
        let (a, b) = (old[i], old[i + 1]);
        values.push(a);
        values.push((2.0 * a + b) / 3.0);
        values.push((a + 2.0 * b) / 3.0);
    }
    values.push(*old.last().unwrap());
    VertexFunction::new(u.level() + 1, values).expect("extension length is 3^(m+1)+1")
}

/// Repeats `harmonic_extension_step` until reaching `target_level`.
pub fn harmonic_extension(u: &VertexFunction, target_level: u32) -> Result<VertexFunction> {
    if target_level < u.level() {
        return Err(Error::LevelMismatch {
            expected: u.level(),
            got: target_level,
        });
    }
    let mut current = u.clone();
    while current.level() < target_level {
        current = harmonic_extension_step(&current);
    }
    Ok(current)
}

/// Ratio `E_{m+1}(extension) / E_m(u)` under the given scheme.
pub fn energy_ratio(u: &VertexFunction, scheme: ConductanceScheme) -> Result<f64> {
    if u.is_constant() {
        return Err(Error::ConstantFunction);
    }
    let coarse = energy_quadratic(u, scheme)?;
    let fine = energy_quadratic(&harmonic_extension_step(u), scheme)?;
    Ok(fine / coarse)
}

/// Energies of the successive harmonic extensions of boundary data on the
/// four level-1 vertices.
#[derive(Clone, Debug)]
pub struct EnergySequenceReport {
    pub scheme: ConductanceScheme,
    /// `energies[k]` is the energy at level `k + 1`.
    pub energies: Vec<f64>,
    /// Ratios of consecutive energies (empty if only one level).
    pub ratios: Vec<f64>,
}

/// Extends `boundary = (u(A), u(B), u(C), u(D))` harmonically up to
/// `m_max` and records the energy at every level.
pub fn normalized_energy_sequence(
    boundary: [f64; 4],
    m_max: u32,
    scheme: ConductanceScheme,
) -> Result<EnergySequenceReport> {
    if m_max < 1 {
        return Err(Error::Precondition("m_max must be at least 1"));
    }
    let mut current = VertexFunction::new(1, boundary.to_vec())?;
    let mut energies = Vec::with_capacity(m_max as usize);
    energies.push(energy_quadratic(&current, scheme)?);
    for _ in 1..m_max {
        current = harmonic_extension_step(&current);
        energies.push(energy_quadratic(&current, scheme)?);
    }
    let ratios = energies.windows(2).map(|w| w[1] / w[0]).collect();
    Ok(EnergySequenceReport {
        scheme,
        energies,
        ratios,
    })
}

/// Clamps every value into `[0, 1]`.  Clamping never increases energy,
/// which is the Markov property of the forms.
pub fn markov_cut(u: &VertexFunction) -> VertexFunction {
    let values = u.values().iter().map(|v| v.clamp(0.0, 1.0)).collect();
    VertexFunction::new(u.level(), values).expect("clamp preserves length")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn conductances() {
        assert_eq!(ConductanceScheme::raw().conductance(5), 1.0);
        assert_abs_diff_eq!(
            ConductanceScheme::geometric().conductance(1),
            5.0,
            epsilon = 1e-12
        );
        assert_eq!(ConductanceScheme::renormalized().conductance(2), 9.0);
    }

    #[test]
    fn energy_level_one_examples() {
        let step = VertexFunction::new(1, vec![0.0, 0.0, 0.0, 1.0]).unwrap();
        assert_abs_diff_eq!(
            energy_quadratic(&step, ConductanceScheme::raw()).unwrap(),
            1.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            energy_quadratic(&step, ConductanceScheme::geometric()).unwrap(),
            5.0,
            epsilon = 1e-12
        );
        let ramp = VertexFunction::new(1, vec![0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0]).unwrap();
        assert_abs_diff_eq!(
            energy_quadratic(&ramp, ConductanceScheme::raw()).unwrap(),
            1.0 / 3.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn energy_is_symmetric_bilinear_and_positive() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let scheme = ConductanceScheme::renormalized();
        for _ in 0..20 {
            let m = rng.gen_range(1..=4);
            let n = 3usize.pow(m) + 1;
            let u = VertexFunction::new(m, (0..n).map(|_| rng.gen::<f64>()).collect()).unwrap();
            let v = VertexFunction::new(m, (0..n).map(|_| rng.gen::<f64>()).collect()).unwrap();
            let uv = energy(&u, &v, scheme).unwrap();
            let vu = energy(&v, &u, scheme).unwrap();
            assert_abs_diff_eq!(uv, vu, epsilon = 1e-12);
            assert!(energy_quadratic(&u, scheme).unwrap() >= 0.0);
            // Bilinearity in the first slot.
            let w = VertexFunction::new(
                m,
                u.values()
                    .iter()
                    .zip(v.values())
                    .map(|(a, b)| 3.0 * a + b)
                    .collect(),
            )
            .unwrap();
            let lhs = energy(&w, &v, scheme).unwrap();
            let rhs = 3.0 * uv + energy_quadratic(&v, scheme).unwrap();
            assert_relative_eq!(lhs, rhs, epsilon = 1e-10, max_relative = 1e-10);
        }
    }

    #[test]
    fn energy_vanishes_only_for_constants() {
        let c = VertexFunction::constant(3, 4.2);
        assert_eq!(energy_quadratic(&c, ConductanceScheme::raw()).unwrap(), 0.0);
        let u = VertexFunction::kronecker(3, 5).unwrap();
        assert!(energy_quadratic(&u, ConductanceScheme::raw()).unwrap() > 0.0);
    }

    #[test]
    fn level_mismatch_is_rejected() {
        let u = VertexFunction::constant(1, 0.0);
        let v = VertexFunction::constant(2, 0.0);
        assert!(matches!(
            energy(&u, &v, ConductanceScheme::raw()),
            Err(Error::LevelMismatch { .. })
        ));
    }

    #[test]
    fn extension_of_corner_indicator() {
        let u = VertexFunction::new(1, vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        let e = harmonic_extension_step(&u);
        assert_eq!(e.level(), 2);
        assert_abs_diff_eq!(e.value(2).unwrap(), 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(e.value(3).unwrap(), 1.0 / 3.0, epsilon = 1e-15);
        for i in 5..=10 {
            assert_eq!(e.value(i).unwrap(), 0.0);
        }
    }

    #[test]
    fn extension_preserves_constants_and_ramps() {
        let c = VertexFunction::constant(2, 2.5);
        assert!(harmonic_extension_step(&c)
            .values()
            .iter()
            .all(|&v| v == 2.5));

        let ramp = VertexFunction::from_arc_fn(1, |s| s);
        let fine = harmonic_extension(&ramp, 3).unwrap();
        let want = VertexFunction::from_arc_fn(3, |s| s);
        for (a, b) in fine.values().iter().zip(want.values()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-14);
        }
        assert!(harmonic_extension(&want, 1).is_err());
    }

    #[test]
    fn extension_values_match_local_rule_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let u = VertexFunction::new(1, (0..4).map(|_| rng.gen::<f64>()).collect()).unwrap();
            let e = harmonic_extension_step(&u);
            for i in 0..3 {
                let a = u.values()[i];
                let b = u.values()[i + 1];
                assert_eq!(e.values()[3 * i + 1], (2.0 * a + b) / 3.0);
                assert_eq!(e.values()[3 * i + 2], (a + 2.0 * b) / 3.0);
            }
        }
    }

    /// Independent minimization oracle: assemble the level-(m+1) energy as a
    /// quadratic form in the new-vertex values and solve the normal
    /// equations by Gaussian elimination.
    #[allow(clippy::needless_range_loop)]
    fn minimizing_extension(u: &VertexFunction) -> VertexFunction {
        let old = u.values();
        let fine_len = (old.len() - 1) * 3 + 1;
        // Unknowns: values at indices not divisible by 3 (0-based fine grid).
        let unknown_at: Vec<usize> = (0..fine_len).filter(|i| i % 3 != 0).collect();
        let col_of: std::collections::HashMap<usize, usize> = unknown_at
            .iter()
            .enumerate()
            .map(|(c, &i)| (i, c))
            .collect();
        let n = unknown_at.len();
        let mut a = vec![vec![0.0f64; n]; n];
        let mut rhs = vec![0.0f64; n];
        // Energy = Σ_edges (w_{i+1} − w_i)²; differentiate per unknown.
        for edge in 0..fine_len - 1 {
            let (i, j) = (edge, edge + 1);
            let fixed = |k: usize| -> Option<f64> { k.is_multiple_of(3).then(|| old[k / 3]) };
            match (fixed(i), fixed(j)) {
                (Some(_), Some(_)) => {}
                (Some(fi), None) => {
                    let cj = col_of[&j];
                    a[cj][cj] += 2.0;
                    rhs[cj] += 2.0 * fi;
                }
                (None, Some(fj)) => {
                    let ci = col_of[&i];
                    a[ci][ci] += 2.0;
                    rhs[ci] += 2.0 * fj;
                }
                (None, None) => {
                    let (ci, cj) = (col_of[&i], col_of[&j]);
                    a[ci][ci] += 2.0;
                    a[cj][cj] += 2.0;
                    a[ci][cj] -= 2.0;
                    a[cj][ci] -= 2.0;
                }
            }
        }
        // Plain Gaussian elimination with partial pivoting.
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&p, &q| a[p][col].abs().total_cmp(&a[q][col].abs()))
                .unwrap();
            a.swap(col, pivot);
            rhs.swap(col, pivot);
            let d = a[col][col];
            for row in col + 1..n {
                let f = a[row][col] / d;
                if f != 0.0 {
                    for k in col..n {
                        a[row][k] -= f * a[col][k];
                    }
                    rhs[row] -= f * rhs[col];
                }
            }
        }
        let mut x = vec![0.0f64; n];
        for row in (0..n).rev() {
            let mut s = rhs[row];
            for k in row + 1..n {
                s -= a[row][k] * x[k];
            }
            x[row] = s / a[row][row];
        }
        let mut values = vec![0.0f64; fine_len];
        for i in 0..fine_len {
            values[i] = if i % 3 == 0 {
                old[i / 3]
            } else {
                x[col_of[&i]]
            };
        }
        VertexFunction::new(u.level() + 1, values).unwrap()
    }

    #[test]
    fn closed_form_matches_minimization_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for m in 1..=3 {
            let n = 3usize.pow(m) + 1;
            let u = VertexFunction::new(m, (0..n).map(|_| rng.gen::<f64>()).collect()).unwrap();
            let closed = harmonic_extension_step(&u);
            let solved = minimizing_extension(&u);
            for (a, b) in closed.values().iter().zip(solved.values()) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-12);
            }
            // The minimizer is scheme-independent: scaling the quadratic form
            // by any positive conductance cannot move its argmin, so one
            // solve stands for all three schemes.
        }
    }

    #[test]
    fn extension_minimizes_energy_against_perturbations() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let scheme = ConductanceScheme::raw();
        for _ in 0..50 {
            let u = VertexFunction::new(2, (0..10).map(|_| rng.gen::<f64>()).collect()).unwrap();
            let ext = harmonic_extension_step(&u);
            let base = energy_quadratic(&ext, scheme).unwrap();
            let mut perturbed = ext.clone();
            let mut nonzero = false;
            for (i, v) in perturbed.values_mut().iter_mut().enumerate() {
                if i % 3 != 0 {
                    let p = rng.gen::<f64>() - 0.5;
                    nonzero |= p != 0.0;
                    *v += p;
                }
            }
            let worse = energy_quadratic(&perturbed, scheme).unwrap();
            assert!(worse >= base - 1e-12);
            if nonzero {
                assert!(worse > base);
            }
        }
    }

    #[test]
    fn energy_ratios_per_scheme() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..30 {
            let m = rng.gen_range(1..=4);
            let n = 3usize.pow(m) + 1;
            let u = VertexFunction::new(m, (0..n).map(|_| rng.gen::<f64>()).collect()).unwrap();
            assert_abs_diff_eq!(
                energy_ratio(&u, ConductanceScheme::raw()).unwrap(),
                1.0 / 3.0,
                epsilon = 1e-14
            );
            assert_abs_diff_eq!(
                energy_ratio(&u, ConductanceScheme::geometric()).unwrap(),
                5.0 / 3.0,
                epsilon = 1e-12
            );
            assert_abs_diff_eq!(
                energy_ratio(&u, ConductanceScheme::renormalized()).unwrap(),
                1.0,
                epsilon = 1e-12
            );
        }
        assert!(matches!(
            energy_ratio(&VertexFunction::constant(2, 1.0), ConductanceScheme::raw()),
            Err(Error::ConstantFunction)
        ));
    }

    #[test]
    fn renormalized_sequence_is_constant() {
        let report = normalized_energy_sequence(
            [0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0],
            6,
            ConductanceScheme::renormalized(),
        )
        .unwrap();
        for e in &report.energies {
            assert_abs_diff_eq!(*e, 1.0, epsilon = 1e-12);
        }
        for r in &report.ratios {
            assert_abs_diff_eq!(*r, 1.0, epsilon = 1e-12);
        }

        let step =
            normalized_energy_sequence([1.0, 0.0, 0.0, 0.0], 5, ConductanceScheme::renormalized())
                .unwrap();
        for e in &step.energies {
            assert_abs_diff_eq!(*e, 3.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn restricted_energies_of_smooth_samples_are_non_decreasing() {
        let scheme = ConductanceScheme::renormalized();
        for f in [
            |s: f64| s * s,
            |s: f64| (std::f64::consts::PI * s).sin(),
            |s: f64| s * (1.0 - s),
        ] {
            let energies: Vec<f64> = (1..=6)
                .map(|m| energy_quadratic(&VertexFunction::from_arc_fn(m, f), scheme).unwrap())
                .collect();
            for w in energies.windows(2) {
                assert!(w[1] >= w[0] - 1e-12, "sequence {energies:?}");
            }
        }
    }

    #[test]
    fn markov_cut_examples_and_property() {
        let u = VertexFunction::new(1, vec![-0.5, 0.25, 1.5, 1.0]).unwrap();
        let cut = markov_cut(&u);
        assert_eq!(cut.values(), &[0.0, 0.25, 1.0, 1.0]);
        let inside = VertexFunction::new(1, vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        assert_eq!(markov_cut(&inside).values(), inside.values());

        let mut rng = ChaCha8Rng::seed_from_u64(59);
        let schemes = [
            ConductanceScheme::raw(),
            ConductanceScheme::geometric(),
            ConductanceScheme::renormalized(),
        ];
        for _ in 0..100 {
            let m = rng.gen_range(1..=3);
            let n = 3usize.pow(m) + 1;
            let u = VertexFunction::new(m, (0..n).map(|_| 4.0 * rng.gen::<f64>() - 1.5).collect())
                .unwrap();
            let cut = markov_cut(&u);
            for scheme in schemes {
                let before = energy_quadratic(&u, scheme).unwrap();
                let after = energy_quadratic(&cut, scheme).unwrap();
                assert!(after <= before + 1e-12);
            }
        }
    }
}
