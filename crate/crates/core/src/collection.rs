//! Shape collections as points in the lifted space.
//!
//! Once every shape is a single vector (or matrix) under one feature map,
//! distances, nearest neighbours and averages are plain Euclidean operations.

use crate::error::{Error, Result};
use crate::features::{approx_distance_sq, FeatureMapSpec, Lifted, LiftedCurrent, LiftedMeasure};

/// A lifted measure or current.
#[derive(Clone, Debug, PartialEq)]
pub enum Embedding {
    Measure(LiftedMeasure),
    Current(LiftedCurrent),
}

impl Embedding {
    pub fn shape(&self) -> (usize, usize) {
        match self {
            Embedding::Measure(m) => m.shape(),
            Embedding::Current(c) => c.shape(),
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        match self {
            Embedding::Measure(m) => m.as_slice(),
            Embedding::Current(c) => c.as_slice(),
        }
    }

    fn same_kind(&self, other: &Embedding) -> bool {
        matches!(
            (self, other),
            (Embedding::Measure(_), Embedding::Measure(_)) | (Embedding::Current(_), Embedding::Current(_))
        )
    }

    fn check_compatible(&self, other: &Embedding) -> Result<()> {
        if !self.same_kind(other) {
            return Err(Error::InvalidParameter(
                "cannot mix measure and current embeddings".into(),
            ));
        }
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch {
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(())
    }

    pub fn distance_sq(&self, other: &Embedding) -> Result<f64> {
        self.check_compatible(other)?;
        match (self, other) {
            (Embedding::Measure(a), Embedding::Measure(b)) => approx_distance_sq(a, b),
            (Embedding::Current(a), Embedding::Current(b)) => approx_distance_sq(a, b),
            _ => unreachable!("kinds checked above"),
        }
    }

    fn with_values(&self, values: Vec<f64>) -> Embedding {
        match self {
            Embedding::Measure(_) => Embedding::Measure(LiftedMeasure { vector: values }),
            Embedding::Current(c) => {
                Embedding::Current(LiftedCurrent::from_row_major(c.rho(), c.dim(), values).expect("same shape"))
            }
        }
    }
}

impl From<LiftedMeasure> for Embedding {
    fn from(m: LiftedMeasure) -> Self {
        Embedding::Measure(m)
    }
}

impl From<LiftedCurrent> for Embedding {
    fn from(c: LiftedCurrent) -> Self {
        Embedding::Current(c)
    }
}

#[derive(Clone, Debug)]
pub struct ShapeCollection {
    feature_map: FeatureMapSpec,
    names: Vec<String>,
    embeddings: Vec<Embedding>,
}

impl ShapeCollection {
    pub fn new(feature_map: FeatureMapSpec) -> Self {
        ShapeCollection {
            feature_map,
            names: Vec::new(),
            embeddings: Vec::new(),
        }
    }

    /// Adds an entry; rejects embeddings whose kind or shape differs from
    /// the existing entries or whose row count is not the map's `ρ`.
    pub fn push(&mut self, name: impl Into<String>, embedding: impl Into<Embedding>) -> Result<()> {
        let embedding = embedding.into();
        let rows = embedding.shape().0;
        if rows != self.feature_map.rho() {
            return Err(Error::ShapeMismatch {
                left: (self.feature_map.rho(), embedding.shape().1),
                right: embedding.shape(),
            });
        }
        if let Some(first) = self.embeddings.first() {
            first.check_compatible(&embedding)?;
        }
        self.names.push(name.into());
        self.embeddings.push(embedding);
        Ok(())
    }

    pub fn feature_map(&self) -> &FeatureMapSpec {
        &self.feature_map
    }

    pub fn len(&self) -> usize {
        self.embeddings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.embeddings.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn embeddings(&self) -> &[Embedding] {
        &self.embeddings
    }
}

/// Pairwise lifted distances (not squared), row-major `n × n`.
pub fn distance_matrix(c: &ShapeCollection) -> Vec<Vec<f64>> {
    let n = c.len();
    let mut out = vec![vec![0.0; n]; n];
    #[allow(clippy::needless_range_loop)] // fills both triangles at once
    for i in 0..n {
        for j in (i + 1)..n {
            let d = c.embeddings[i]
                .distance_sq(&c.embeddings[j])
                .expect("collection entries are compatible")
                .sqrt();
            out[i][j] = d;
            out[j][i] = d;
        }
    }
    out
}

/// Index and distance of the closest entry; ties go to the lowest index.
pub fn nearest_neighbor(c: &ShapeCollection, query: &Embedding) -> Result<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, e) in c.embeddings.iter().enumerate() {
        let d2 = e.distance_sq(query)?;
        if best.is_none_or(|(_, b)| d2 < b) {
            best = Some((i, d2));
        }
    }
    best.map(|(i, d2)| (i, d2.sqrt()))
        .ok_or(Error::Empty("collection has no entries"))
}

/// Arithmetic mean of the embeddings, the minimizer of `Σ_i ‖x − e_i‖²`.
pub fn mean_shape_embedding(c: &ShapeCollection) -> Result<Embedding> {
    let first = c.embeddings.first().ok_or(Error::Empty("collection has no entries"))?;
    let mut acc = vec![0.0; first.as_slice().len()];
    for e in &c.embeddings {
        for (a, v) in acc.iter_mut().zip(e.as_slice()) {
            *a += v;
        }
    }
    let n = c.len() as f64;
    Ok(first.with_values(acc.into_iter().map(|v| v / n).collect()))
}
