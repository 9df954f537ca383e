//! Current distances between oriented curves and surfaces.
//!
//! A shape is discretized into atoms `(position, vector)`:
//!
//! - a polyline segment `v_i → v_{i+1}` becomes its midpoint and the edge
//!   vector `v_{i+1} − v_i`, whose length is the segment's arclength;
//! - a triangle `(a, b, c)` becomes its centroid and the area-weighted normal
//!   `½ (b − a) × (c − a)`.
//!
//! The cross-similarity of two atom sets is the finite bilinear form
//! `κ(S, T) = Σ_i Σ_j K(x_i, y_j) ⟨u_i, v_j⟩`, the midpoint-rule quadrature of
//! `∫_S ∫_T K(x, y) ⟨t_S(x), t_T(y)⟩`. Reversing orientation negates every
//! vector, so `κ(S, −S) = −κ(S, S)` and `D²(S, −S) = 4 κ(S, S)`.

use crate::distance::{bilinear_form, should_swap, DistanceResult, CLAMP_TOLERANCE_REL};
use crate::error::{Error, Result};
use crate::kernels::KernelSpec;
use crate::shapes::{DiscreteMeasure, PolyCurve, TriMesh};

/// Maximum number of halvings accepted by [`refine_curve`].
pub const MAX_REFINE_LEVELS: u32 = 16;

/// Position/vector pairs discretizing an oriented curve or surface.
#[derive(Clone, Debug, PartialEq)]
pub struct CurrentAtoms {
    dim: usize,
    positions: Vec<f64>,
    vectors: Vec<f64>,
}

impl CurrentAtoms {
    /// Builds atoms from row-major positions and vectors of dimension `dim`.
    pub fn new(dim: usize, positions: Vec<f64>, vectors: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Empty("atoms need at least one coordinate"));
        }
        if positions.len() != vectors.len() || !positions.len().is_multiple_of(dim) {
            return Err(Error::InvalidParameter(format!(
                "{} position and {} vector coordinates do not pair up in dimension {dim}",
                positions.len(),
                vectors.len()
            )));
        }
        if positions.is_empty() {
            return Err(Error::Empty("no atoms"));
        }
        if positions.iter().chain(&vectors).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("non-finite atom coordinate".into()));
        }
        Ok(CurrentAtoms {
            dim,
            positions,
            vectors,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.positions.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn position(&self, i: usize) -> &[f64] {
        &self.positions[i * self.dim..(i + 1) * self.dim]
    }

    pub fn vector(&self, i: usize) -> &[f64] {
        &self.vectors[i * self.dim..(i + 1) * self.dim]
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn vectors(&self) -> &[f64] {
        &self.vectors
    }

    /// Opposite orientation: same positions and atom order, vectors negated.
    pub fn negated(&self) -> Self {
        CurrentAtoms {
            dim: self.dim,
            positions: self.positions.clone(),
            vectors: self.vectors.iter().map(|v| -v).collect(),
        }
    }

    /// `Σ_i u_i`; zero for closed curves and closed consistently oriented surfaces.
    pub fn vector_sum(&self) -> Vec<f64> {
        let mut total = vec![0.0; self.dim];
        for v in self.vectors.chunks_exact(self.dim) {
            for (t, x) in total.iter_mut().zip(v) {
                *t += x;
            }
        }
        total
    }

    /// `Σ_i ‖u_i‖`: curve length or surface area.
    pub fn total_mass(&self) -> f64 {
        self.vectors
            .chunks_exact(self.dim)
            .map(|v| v.iter().map(|x| x * x).sum::<f64>().sqrt())
            .sum()
    }

    /// The atom positions as an unweighted point set, dropping orientation.
    pub fn positions_as_measure(&self) -> DiscreteMeasure {
        DiscreteMeasure::from_flat(self.dim, self.positions.clone(), vec![1.0; self.len()])
            .expect("atoms are non-empty and finite")
    }

    fn ensure_dim(&self, other: &CurrentAtoms) -> Result<()> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            })
        }
    }
}

/// One atom per segment: midpoint and edge vector.
pub fn curve_atoms(c: &PolyCurve) -> CurrentAtoms {
    let dim = c.dim();
    let mut positions = Vec::with_capacity(c.num_segments() * dim);
    let mut vectors = Vec::with_capacity(c.num_segments() * dim);
    for i in 0..c.num_segments() {
        let (a, b) = (c.vertex(i), c.vertex(i + 1));
        positions.extend(a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)));
        vectors.extend(a.iter().zip(b).map(|(x, y)| y - x));
    }
    CurrentAtoms {
        dim,
        positions,
        vectors,
    }
}

/// One atom per triangle: centroid and area-weighted normal.
pub fn mesh_atoms(m: &TriMesh) -> CurrentAtoms {
    let nf = m.triangles().len();
    let mut positions = Vec::with_capacity(nf * 3);
    let mut vectors = Vec::with_capacity(nf * 3);
    for f in 0..nf {
        let [a, b, c] = m.triangle_corners(f);
        positions.extend((0..3).map(|k| (a[k] + b[k] + c[k]) / 3.0));
        vectors.extend(m.area_normal(f));
    }
    CurrentAtoms {
        dim: 3,
        positions,
        vectors,
    }
}

fn cross_unchecked(k: &KernelSpec, s: &CurrentAtoms, t: &CurrentAtoms) -> f64 {
    let dim = s.dim;
    bilinear_form(k, dim, &s.positions, &t.positions, |i, j, kv| {
        let u = &s.vectors[i * dim..(i + 1) * dim];
        let v = &t.vectors[j * dim..(j + 1) * dim];
        kv * u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>()
    })
}

/// `κ(S, T) = Σ_i Σ_j K(x_i, y_j) ⟨u_i, v_j⟩`.
pub fn current_cross_similarity(k: &KernelSpec, s: &CurrentAtoms, t: &CurrentAtoms) -> Result<f64> {
    s.ensure_dim(t)?;
    Ok(cross_unchecked(k, s, t))
}

fn terms(k: &KernelSpec, s: &CurrentAtoms, t: &CurrentAtoms) -> Result<(f64, f64, f64)> {
    s.ensure_dim(t)?;
    let st = if should_swap((&s.positions, &s.vectors), (&t.positions, &t.vectors)) {
        cross_unchecked(k, t, s)
    } else {
        cross_unchecked(k, s, t)
    };
    Ok((cross_unchecked(k, s, s), cross_unchecked(k, t, t), st))
}

pub fn current_distance_sq(k: &KernelSpec, s: &CurrentAtoms, t: &CurrentAtoms) -> Result<f64> {
    let (ss, tt, st) = terms(k, s, t)?;
    Ok(ss + tt - 2.0 * st)
}

/// Current distance; `clamp_tolerance` defaults to `1e-9 · max(κ(S,S), κ(T,T), 1)`.
pub fn current_distance(
    k: &KernelSpec,
    s: &CurrentAtoms,
    t: &CurrentAtoms,
    clamp_tolerance: Option<f64>,
) -> Result<DistanceResult> {
    let (ss, tt, st) = terms(k, s, t)?;
    let tol = clamp_tolerance.unwrap_or(CLAMP_TOLERANCE_REL * ss.max(tt).max(1.0));
    Ok(DistanceResult::from_squared(ss + tt - 2.0 * st, tol))
}

/// Splits every segment into `2^levels` equal pieces.
pub fn refine_curve(c: &PolyCurve, levels: u32) -> Result<PolyCurve> {
    if levels > MAX_REFINE_LEVELS {
        return Err(Error::InvalidParameter(format!(
            "refinement levels must be at most {MAX_REFINE_LEVELS}, got {levels}"
        )));
    }
    if levels == 0 {
        return Ok(c.clone());
    }
    let pieces = 1usize << levels;
    let dim = c.dim();
    let mut coords = Vec::with_capacity((c.num_segments() * pieces + 1) * dim);
    for i in 0..c.num_segments() {
        let (a, b) = (c.vertex(i), c.vertex(i + 1));
        for s in 0..pieces {
            let t = s as f64 / pieces as f64;
            coords.extend(a.iter().zip(b).map(|(x, y)| x + t * (y - x)));
        }
    }
    coords.extend_from_slice(c.vertex(c.num_segments()));
    PolyCurve::from_flat(dim, coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance::cross_similarity;
    use std::f64::consts::PI;

    fn curve(vs: &[&[f64]]) -> PolyCurve {
        PolyCurve::new(vs.iter().map(|v| v.to_vec()).collect()).unwrap()
    }

    fn arc(radius: f64, start: f64, sweep: f64, n: usize) -> PolyCurve {
        PolyCurve::new(
            (0..n)
                .map(|i| {
                    let t = start + sweep * i as f64 / (n - 1) as f64;
                    vec![radius * t.cos(), radius * t.sin()]
                })
                .collect(),
        )
        .unwrap()
    }

    fn gauss(s: f64) -> KernelSpec {
        KernelSpec::gaussian(s).unwrap()
    }

    #[test]
    fn unit_segment_atom() {
        let a = curve_atoms(&curve(&[&[0.0, 0.0], &[1.0, 0.0]]));
        assert_eq!(a.len(), 1);
        assert_eq!(a.position(0), &[0.5, 0.0]);
        assert_eq!(a.vector(0), &[1.0, 0.0]);
    }

    #[test]
    fn reversal_negates_vectors() {
        let c = arc(1.0, 0.2, 2.0, 9);
        let fwd = curve_atoms(&c);
        let rev = curve_atoms(&c.reversed());
        let n = fwd.len();
        for i in 0..n {
            assert_eq!(rev.position(n - 1 - i), fwd.position(i));
            let neg: Vec<f64> = fwd.vector(i).iter().map(|v| -v).collect();
            assert_eq!(rev.vector(n - 1 - i), &neg[..]);
        }
    }

    #[test]
    fn closed_square_vectors_cancel() {
        let sq = curve(&[&[0.0, 0.0], &[1.0, 0.0], &[1.0, 1.0], &[0.0, 1.0], &[0.0, 0.0]]);
        let a = curve_atoms(&sq);
        assert_eq!(a.len(), 4);
        assert_eq!(a.vector_sum(), vec![0.0, 0.0]);
        assert_eq!(a.total_mass(), 4.0);
    }

    #[test]
    fn curve_mass_is_length() {
        let c = arc(2.0, 0.0, 3.0, 40);
        assert!((curve_atoms(&c).total_mass() - c.length()).abs() < 1e-12);
    }

    fn tetrahedron() -> TriMesh {
        let v = vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        // outward orientation
        TriMesh::new(v, vec![[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]]).unwrap()
    }

    #[test]
    fn triangle_atom() {
        let m = TriMesh::new(vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]], vec![[0, 1, 2]]).unwrap();
        let a = mesh_atoms(&m);
        assert_eq!(a.vector(0), &[0.0, 0.0, 0.5]);
        for (x, y) in a.position(0).iter().zip([1.0 / 3.0, 1.0 / 3.0, 0.0]) {
            assert!((x - y).abs() < 1e-15);
        }
        let swapped = TriMesh::new(m.vertices().to_vec(), vec![[1, 0, 2]]).unwrap();
        assert_eq!(mesh_atoms(&swapped).vector(0), &[-0.0, -0.0, -0.5]);
    }

    #[test]
    fn closed_tetrahedron_normals_cancel() {
        let m = tetrahedron();
        let a = mesh_atoms(&m);
        for s in a.vector_sum() {
            assert!(s.abs() < 1e-15);
        }
        // outward: the face on z = 0 points down
        assert!(a.vector(0)[2] < 0.0);
        assert!((a.total_mass() - m.area()).abs() < 1e-15);
        assert!((m.area() - (1.5 + 3f64.sqrt() / 2.0)).abs() < 1e-12);
    }

    #[test]
    fn zero_vectors_give_zero_similarity() {
        let t = curve_atoms(&arc(1.0, 0.0, 1.0, 5));
        let s = CurrentAtoms::new(2, vec![0.0, 0.0, 1.0, 1.0], vec![0.0; 4]).unwrap();
        assert_eq!(current_cross_similarity(&gauss(1.0), &s, &t).unwrap(), 0.0);
    }

    #[test]
    fn single_atom_self_similarity() {
        let s = CurrentAtoms::new(3, vec![1.0, 2.0, 3.0], vec![3.0, 4.0, 12.0]).unwrap();
        assert_eq!(current_cross_similarity(&gauss(0.3), &s, &s).unwrap(), 169.0);
    }

    #[test]
    fn negation_flips_sign_exactly() {
        let s = curve_atoms(&arc(1.0, 0.0, 2.5, 17));
        let k = gauss(0.7);
        let ss = current_cross_similarity(&k, &s, &s).unwrap();
        let sn = current_cross_similarity(&k, &s, &s.negated()).unwrap();
        assert_eq!(sn, -ss);
        let d2 = current_distance_sq(&k, &s, &s.negated()).unwrap();
        assert!((d2 - 4.0 * ss).abs() <= 1e-10 * 4.0 * ss);
    }

    #[test]
    fn identical_curves_zero() {
        let s = curve_atoms(&arc(1.0, 0.0, 2.5, 33));
        let d2 = current_distance_sq(&gauss(1.0), &s, &s).unwrap();
        let scale: f64 = s.vectors().iter().map(|v| v * v).sum();
        assert!(d2.abs() <= 1e-12 * scale);
    }

    #[test]
    fn far_apart_parallel_segments() {
        let s = curve_atoms(&curve(&[&[0.0, 0.0], &[1.0, 0.0]]));
        let t = curve_atoms(&curve(&[&[0.0, 10.0], &[1.0, 10.0]]));
        let d2 = current_distance_sq(&gauss(0.1), &s, &t).unwrap();
        assert!((d2 - 2.0).abs() < 1e-8);
    }

    #[test]
    fn orientation_covariance() {
        let k = gauss(0.8);
        let a = arc(1.0, 0.0, 2.0, 20);
        let b = arc(1.3, 0.4, 1.5, 12);
        let (sa, sb) = (curve_atoms(&a), curve_atoms(&b));
        let base = current_distance_sq(&k, &sa, &sb).unwrap();
        let both_neg = current_distance_sq(&k, &sa.negated(), &sb.negated()).unwrap();
        assert_eq!(both_neg, base);
        let both_rev = current_distance_sq(&k, &curve_atoms(&a.reversed()), &curve_atoms(&b.reversed())).unwrap();
        assert!((both_rev - base).abs() <= 1e-12 * base.abs());
        // one reversed: D² = κSS + κTT + 2κST
        let ss = current_cross_similarity(&k, &sa, &sa).unwrap();
        let tt = current_cross_similarity(&k, &sb, &sb).unwrap();
        let st = current_cross_similarity(&k, &sa, &sb).unwrap();
        let one = current_distance_sq(&k, &sa, &sb.negated()).unwrap();
        assert!((one - (ss + tt + 2.0 * st)).abs() <= 1e-12 * (ss + tt));
    }

    #[test]
    fn rigid_motion_invariance() {
        let k = gauss(0.9);
        let a = arc(1.0, 0.0, 2.0, 25);
        let b = arc(0.8, 1.0, 2.5, 19);
        let base = current_distance_sq(&k, &curve_atoms(&a), &curve_atoms(&b)).unwrap();
        let (c, s) = (0.83f64.cos(), 0.83f64.sin());
        let motion = |v: &[f64]| vec![c * v[0] - s * v[1] + 3.5, s * v[0] + c * v[1] - 1.25];
        let moved = current_distance_sq(
            &k,
            &curve_atoms(&a.map_vertices(motion).unwrap()),
            &curve_atoms(&b.map_vertices(motion).unwrap()),
        )
        .unwrap();
        assert!((moved - base).abs() < 1e-9 * base);
    }

    #[test]
    fn refine_levels() {
        let seg = curve(&[&[0.0, 0.0], &[1.0, 0.0]]);
        assert_eq!(refine_curve(&seg, 0).unwrap(), seg);
        let r = refine_curve(&seg, 1).unwrap();
        assert_eq!(r, curve(&[&[0.0, 0.0], &[0.5, 0.0], &[1.0, 0.0]]));
        assert!(refine_curve(&seg, 17).is_err());
        let c = arc(1.0, 0.0, PI, 11);
        let r = refine_curve(&c, 5).unwrap();
        assert_eq!(r.num_segments(), 10 * 32);
        assert!((r.length() - c.length()).abs() < 1e-12 * c.length());
        assert_eq!(r.vertex(0), c.vertex(0));
        assert_eq!(r.vertex(r.num_vertices() - 1), c.vertex(10));
    }

    #[test]
    fn refinement_converges() {
        let k = gauss(1.0);
        let a = arc(1.0, 0.0, PI, 64);
        let b = arc(1.0, 0.5, PI, 64);
        let d2 = |l| {
            current_distance_sq(
                &k,
                &curve_atoms(&refine_curve(&a, l).unwrap()),
                &curve_atoms(&refine_curve(&b, l).unwrap()),
            )
            .unwrap()
        };
        let (d3, d4) = (d2(3), d2(4));
        assert!((d3 - d4).abs() / d4 < 0.01, "{d3} vs {d4}");
    }

    #[test]
    fn unit_vectors_reduce_to_point_similarity() {
        let k = gauss(0.6);
        let s = curve_atoms(&arc(1.0, 0.0, 2.0, 13));
        let t = curve_atoms(&arc(0.7, 0.3, 1.0, 8));
        let via_core = bilinear_form(&k, 2, s.positions(), t.positions(), |_, _, kv| 1.0 * kv * 1.0);
        let via_points = cross_similarity(&k, &s.positions_as_measure(), &t.positions_as_measure()).unwrap();
        assert_eq!(via_core.to_bits(), via_points.to_bits());
    }

    #[test]
    fn symmetric_exactly() {
        let k = gauss(0.4);
        let s = curve_atoms(&arc(1.0, 0.0, 2.0, 20));
        let t = curve_atoms(&arc(1.1, 0.3, 2.4, 15));
        let a = current_distance_sq(&k, &s, &t).unwrap();
        let b = current_distance_sq(&k, &t, &s).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn dimension_mismatch() {
        let s = curve_atoms(&arc(1.0, 0.0, 1.0, 4));
        let t = mesh_atoms(&tetrahedron());
        assert!(current_cross_similarity(&gauss(1.0), &s, &t).is_err());
        assert!(current_distance_sq(&gauss(1.0), &s, &t).is_err());
    }
}
