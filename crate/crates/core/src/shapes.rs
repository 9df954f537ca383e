//! Geometric inputs: weighted point sets, oriented polylines and oriented
//! triangle meshes.
//!
//! Coordinates are stored flat (row-major, `dim` values per point).

use crate::error::{Error, Result};

/// Points in `ℝ^d` with one real weight each.
///
/// Unweighted point sets are the special case where every weight is 1.
/// Weights may be negative; signed measures are handled by every distance in
/// this crate.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteMeasure {
    dim: usize,
    coords: Vec<f64>,
    weights: Vec<f64>,
}

fn check_dim_and_flatten(points: &[Vec<f64>]) -> Result<(usize, Vec<f64>)> {
    let first = points.first().ok_or(Error::Empty("no points"))?;
    let dim = first.len();
    if dim == 0 {
        return Err(Error::Empty("point has no coordinates"));
    }
    let mut coords = Vec::with_capacity(points.len() * dim);
    for p in points {
        if p.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.len(),
            });
        }
        coords.extend_from_slice(p);
    }
    Ok((dim, coords))
}

fn check_finite(values: &[f64], what: &str) -> Result<()> {
    match values.iter().find(|v| !v.is_finite()) {
        Some(v) => Err(Error::InvalidParameter(format!("non-finite {what}: {v}"))),
        None => Ok(()),
    }
}

impl DiscreteMeasure {
    pub fn new(points: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        let (dim, coords) = check_dim_and_flatten(&points)?;
        Self::from_flat(dim, coords, weights)
    }

    pub fn unweighted(points: Vec<Vec<f64>>) -> Result<Self> {
        let n = points.len();
        Self::new(points, vec![1.0; n])
    }

    /// Builds a measure from row-major coordinates.
    pub fn from_flat(dim: usize, coords: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Empty("point has no coordinates"));
        }
        if weights.is_empty() {
            return Err(Error::Empty("no points"));
        }
        if coords.len() != weights.len() * dim {
            return Err(Error::InvalidParameter(format!(
                "{} coordinates do not form {} points of dimension {dim}",
                coords.len(),
                weights.len()
            )));
        }
        check_finite(&coords, "coordinate")?;
        check_finite(&weights, "weight")?;
        Ok(DiscreteMeasure { dim, coords, weights })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> std::slice::ChunksExact<'_, f64> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn is_unweighted(&self) -> bool {
        self.weights.iter().all(|&w| w == 1.0)
    }

    /// The same points with every weight multiplied by `alpha`.
    pub fn scaled(&self, alpha: f64) -> Self {
        DiscreteMeasure {
            dim: self.dim,
            coords: self.coords.clone(),
            weights: self.weights.iter().map(|w| alpha * w).collect(),
        }
    }

    /// Disjoint union: `other`'s points appended after `self`'s.
    pub fn concat(&self, other: &DiscreteMeasure) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let mut coords = self.coords.clone();
        coords.extend_from_slice(&other.coords);
        let mut weights = self.weights.clone();
        weights.extend_from_slice(&other.weights);
        Ok(DiscreteMeasure {
            dim: self.dim,
            coords,
            weights,
        })
    }

    pub(crate) fn ensure_dim(&self, other: &DiscreteMeasure) -> Result<()> {
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

/// An oriented polygonal curve; orientation follows vertex order.
///
/// Closed curves repeat their first vertex at the end.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyCurve {
    dim: usize,
    coords: Vec<f64>,
}

impl PolyCurve {
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::Geometry(format!(
                "a polyline needs at least 2 vertices, got {}",
                vertices.len()
            )));
        }
        let (dim, coords) = check_dim_and_flatten(&vertices)?;
        Self::from_flat(dim, coords)
    }

    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Geometry(format!(
                "polyline dimension must be at least 2, got {dim}"
            )));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::InvalidParameter(format!(
                "{} coordinates are not a multiple of dimension {dim}",
                coords.len()
            )));
        }
        let n = coords.len() / dim;
        if n < 2 {
            return Err(Error::Geometry(format!(
                "a polyline needs at least 2 vertices, got {n}"
            )));
        }
        check_finite(&coords, "coordinate")?;
        let curve = PolyCurve { dim, coords };
        for i in 0..n - 1 {
            if curve.vertex(i) == curve.vertex(i + 1) {
                return Err(Error::Geometry(format!(
                    "zero-length segment between vertices {i} and {}",
                    i + 1
                )));
            }
        }
        Ok(curve)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_vertices(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn num_segments(&self) -> usize {
        self.num_vertices() - 1
    }

    pub fn vertex(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn vertices(&self) -> std::slice::ChunksExact<'_, f64> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn length(&self) -> f64 {
        self.coords
            .chunks_exact(self.dim)
            .zip(self.coords.chunks_exact(self.dim).skip(1))
            .map(|(a, b)| crate::kernels::sq_dist(a, b).sqrt())
            .sum()
    }

    /// Same geometry traversed in the opposite direction.
    pub fn reversed(&self) -> Self {
        let coords = self.coords.chunks_exact(self.dim).rev().flatten().copied().collect();
        PolyCurve { dim: self.dim, coords }
    }

    /// Applies `f` to every vertex.
    pub fn map_vertices(&self, mut f: impl FnMut(&[f64]) -> Vec<f64>) -> Result<Self> {
        let vertices = self.vertices().map(&mut f).collect();
        Self::new(vertices)
    }
}

/// An oriented triangle mesh in `ℝ³`.
///
/// Each triangle's orientation is given by the order of its indices.
#[derive(Clone, Debug, PartialEq)]
pub struct TriMesh {
    vertices: Vec<[f64; 3]>,
    triangles: Vec<[usize; 3]>,
}

pub(crate) fn cross(u: [f64; 3], v: [f64; 3]) -> [f64; 3] {
    [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]
}

pub(crate) fn sub3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

impl TriMesh {
    pub fn new(vertices: Vec<[f64; 3]>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        for v in &vertices {
            check_finite(v, "coordinate")?;
        }
        if triangles.is_empty() {
            return Err(Error::Empty("mesh has no triangles"));
        }
        let mesh = TriMesh { vertices, triangles };
        for (f, tri) in mesh.triangles.iter().enumerate() {
            if let Some(&bad) = tri.iter().find(|&&i| i >= mesh.vertices.len()) {
                return Err(Error::Geometry(format!(
                    "triangle {f} references vertex {bad} of {}",
                    mesh.vertices.len()
                )));
            }
            if mesh.triangle_area(f) <= 0.0 {
                return Err(Error::Geometry(format!("triangle {f} is degenerate")));
            }
        }
        Ok(mesh)
    }

    pub fn vertices(&self) -> &[[f64; 3]] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn triangle_corners(&self, f: usize) -> [[f64; 3]; 3] {
        let [a, b, c] = self.triangles[f];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    /// `½ (b − a) × (c − a)` for triangle `f`.
    pub fn area_normal(&self, f: usize) -> [f64; 3] {
        let [a, b, c] = self.triangle_corners(f);
        let n = cross(sub3(b, a), sub3(c, a));
        [0.5 * n[0], 0.5 * n[1], 0.5 * n[2]]
    }

    pub fn triangle_area(&self, f: usize) -> f64 {
        let n = self.area_normal(f);
        (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt()
    }

    pub fn area(&self) -> f64 {
        (0..self.triangles.len()).map(|f| self.triangle_area(f)).sum()
    }

    /// Same surface with every triangle's orientation flipped.
    pub fn flipped(&self) -> Self {
        TriMesh {
            vertices: self.vertices.clone(),
            triangles: self.triangles.iter().map(|&[a, b, c]| [a, c, b]).collect(),
        }
    }
}
