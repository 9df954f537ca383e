//! # kdist
//!
//! Kernel distances between weighted point sets, polygonal curves and
//! triangle meshes.
//!
//! Given a similarity function `K` with `K(x, x) = 1`, the squared kernel
//! distance between two weighted sets is
//!
//! ```text
//! D²(P, Q) = κ(P, P) + κ(Q, Q) − 2 κ(P, Q),    κ(P, Q) = Σ_p Σ_q w(p) K(p, q) w'(q)
//! ```
//!
//! For oriented curves and surfaces (currents) the weight product is replaced
//! by the inner product of tangent (or normal) vectors.
//!
//! When `K` is positive definite, `D` is the Euclidean distance between the
//! two sets after lifting every point into a feature space. The crate realizes
//! that lifting twice: exactly on a finite sample through an eigendecomposition
//! of the Gram matrix ([`spectral`]), and approximately for the Gaussian kernel
//! through random Fourier features ([`features`]), which turns the Θ(n²)
//! double sum into an O(nρ) embedding.
//!
//! | Module | Purpose |
//! |--------|---------|
//! | [`kernels`] | Gaussian and box similarities, Gram matrices, PSD checks |
//! | [`shapes`] | `DiscreteMeasure`, `PolyCurve`, `TriMesh` |
//! | [`io`] | Plain-text point, polyline and OFF formats |
//! | [`distance`] | Exact κ and `D²` for discrete measures |
//! | [`currents`] | Curve and surface atoms, current distances |
//! | [`features`] | Random Fourier feature maps and lifted embeddings |
//! | [`spectral`] | Exact finite-sample lifting `B = Λ^{1/2} Qᵀ` |
//! | [`ipm`] | Witness functions, sampled IPM bounds, total variation |
//! | [`collection`] | Distance matrices, nearest neighbours and means of embeddings |
//! | [`bench`] | Exact vs feature timing harness |
//! | [`cli`] | The `kdist` command line |
//!
//! ## Quick start
//!
//! ```rust
//! use kdist::{kernel_distance_sq, DiscreteMeasure, KernelSpec};
//!
//! let k = KernelSpec::gaussian(1.0).unwrap();
//! let p = DiscreteMeasure::unweighted(vec![vec![0.0]]).unwrap();
//! let q = DiscreteMeasure::unweighted(vec![vec![1.0]]).unwrap();
//! let d2 = kernel_distance_sq(&k, &p, &q).unwrap();
//! assert!((d2 - 2.0 * (1.0 - (-1.0f64).exp())).abs() < 1e-12);
//! ```
//!
//! The Gaussian kernel here is `exp(−‖x − y‖² / σ²)`, with no factor of two in
//! the denominator. Other libraries often use `2σ²`; bandwidths are not
//! interchangeable between the two conventions.

pub mod bench;
pub mod cli;
pub mod collection;
pub mod currents;
pub mod distance;
mod error;
pub mod features;
pub mod io;
pub mod ipm;
pub mod kernels;
mod linalg;
mod reduce;
pub mod shapes;
pub mod spectral;

pub use crate::currents::{
    current_cross_similarity, current_distance, current_distance_sq, curve_atoms, mesh_atoms, refine_curve,
    CurrentAtoms,
};
pub use crate::distance::{cross_similarity, kernel_distance, kernel_distance_sq, DistanceResult, SimilarityTerms};
pub use crate::error::{Error, Result};
pub use crate::features::{
    approx_distance_sq, embed_current, embed_measure, feature_error_report, lift_point, sample_feature_map,
    FeatureErrorReport, FeatureMapSpec, Lifted, LiftedCurrent, LiftedMeasure,
};
pub use crate::kernels::{check_positive_definite, eval_kernel, gram_matrix, GramReport, KernelSpec};
pub use crate::shapes::{DiscreteMeasure, PolyCurve, TriMesh};
pub use crate::spectral::{lifted_distance_sq, spectral_lift, SpectralLift};
