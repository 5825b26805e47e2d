//! Graph approximations of the Sierpiński arrowhead curve and their
//! analysis: exact vertex chains on the triangular lattice, trapezoidal
//! cell decompositions, self-similar measures, graph energies with
//! harmonic extension, normalized Laplacians with convergence probes,
//! Dirichlet spectra with spectral decimation, and eigenvalue counting
//! with scaling-exponent fits.
//!
//! The level-`m` approximation is a chain of `3^m + 1` vertices from
//! `(0, 0)` to `(1, 0)` with every edge of length `2^−m`; consecutive
//! levels nest, and all of them live inside the Sierpiński gasket over the
//! same base triangle.  Everything downstream — measures, energies,
//! Laplacians, spectra — is indexed by the same 1-based chain positions.
//!
//! # Quick tour
//!
//! ```
//! use arrowhead::{build_level, ConductanceScheme, VertexFunction};
//!
//! let graph = build_level(3).unwrap();
//! assert_eq!(graph.vertex_count(), 28);
//!
//! // A ramp in the arc-length coordinate has unit renormalized energy.
//! let u = VertexFunction::from_arc_fn(3, |s| s);
//! let e = arrowhead::energy(&u, &u, ConductanceScheme::renormalized()).unwrap();
//! assert!((e - 1.0).abs() < 1e-12);
//! ```

pub mod curve;
pub mod energy;
pub mod error;
pub mod export;
pub mod function;
pub mod geometry;
pub mod laplacian;
pub mod measure;
pub mod report;
pub mod spectrum;
pub mod trapeze;
mod tridiag;

pub use curve::{
    build_level, build_level_with_limit, gasket_vertices, level_one_chain_indices, subset_checks,
    vertex_count, GraphLevel, SubsetReport, DEFAULT_DEPTH_LIMIT,
};
pub use energy::{
    delta, energy, energy_ratio, energy_scaling_rho, harmonic_extension, harmonic_extension_step,
    markov_cut, normalized_energy_sequence, ConductanceScheme, EnergySequenceReport, SchemeKind,
};
pub use error::{Error, Result};
pub use function::VertexFunction;
pub use geometry::Point2;
pub use laplacian::{
    convergence_probe, graph_laplacian_apply, is_harmonic, pointwise_laplacian,
    summation_by_parts_check, ConvergenceReport, LaplacianField,
};
pub use measure::{integrate, spline_integral, MeasureModel, SharedVertexRule};
pub use report::{build_report, ReportEntry, ReportStatus, ReportSummary, ReportValue};
pub use spectrum::{
    counting_function, decimate_down, decimate_up, dirichlet_eigenfunction,
    dirichlet_spectrum_exact, dirichlet_spectrum_numeric, extend_eigenfunction, forbidden_check,
    phi, phi_inverse, ratio_periodicity_probe, weyl_fit, Boundary, CountingSeries,
    DecimationBranches, ForbiddenReport, PeriodicityProbe, PhiBranch, ScalingMode, SpectralLine,
    Spectrum, WeylFit, WeylReferences,
};
pub use trapeze::{cell_area, trapeze_decomposition, Trapeze, TrapezeSet};
