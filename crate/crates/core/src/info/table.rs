//! Dense joint probability tables over named, labelled axes.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::MASS_TOLERANCE;
use crate::error::InfoError;

/// One named variable and its outcome labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    pub labels: Vec<String>,
}

impl Axis {
    pub fn new(name: impl Into<String>, labels: Vec<String>) -> Self {
        Self {
            name: name.into(),
            labels,
        }
    }

    pub fn binary(name: impl Into<String>) -> Self {
        Self::new(name, vec!["0".to_string(), "1".to_string()])
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// Probability mass in one of two representations.
#[derive(Clone, Debug, PartialEq)]
pub enum Mass {
    Float(Vec<f64>),
    Exact(Vec<BigRational>),
}

impl Mass {
    pub fn len(&self) -> usize {
        match self {
            Mass::Float(v) => v.len(),
            Mass::Exact(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        match self {
            Mass::Float(v) => v.clone(),
            Mass::Exact(v) => v.iter().map(|r| r.to_f64().unwrap_or(f64::NAN)).collect(),
        }
    }
}

/// An exact finite probability table over tuples of discrete variables.
#[derive(Clone, Debug)]
pub struct JointDistribution {
    axes: Vec<Axis>,
    mass: Mass,
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    axes: Vec<Axis>,
    probs: Vec<f64>,
}

impl JointDistribution {
    pub fn from_floats(axes: Vec<Axis>, probs: Vec<f64>) -> Result<Self, InfoError> {
        Self::from_floats_with_tolerance(axes, probs, MASS_TOLERANCE)
    }

    pub fn from_floats_with_tolerance(
        axes: Vec<Axis>,
        probs: Vec<f64>,
        tolerance: f64,
    ) -> Result<Self, InfoError> {
        check_shape(&axes, probs.len())?;
        let mut total = 0.0;
        for (index, &value) in probs.iter().enumerate() {
            if value < -tolerance || !value.is_finite() {
                return Err(InfoError::NegativeProbability { index, value });
            }
            total += value;
        }
        if (total - 1.0).abs() > tolerance {
            return Err(InfoError::NotNormalized { total, tolerance });
        }
        Ok(Self {
            axes,
            mass: Mass::Float(probs),
        })
    }

    pub fn from_rationals(axes: Vec<Axis>, probs: Vec<BigRational>) -> Result<Self, InfoError> {
        check_shape(&axes, probs.len())?;
        let mut total = BigRational::zero();
        for (index, value) in probs.iter().enumerate() {
            if value.is_negative() {
                return Err(InfoError::NegativeProbability {
                    index,
                    value: value.to_f64().unwrap_or(f64::NAN),
                });
            }
            total += value;
        }
        if !total.is_one() {
            return Err(InfoError::NotNormalized {
                total: total.to_f64().unwrap_or(f64::NAN),
                tolerance: 0.0,
            });
        }
        Ok(Self {
            axes,
            mass: Mass::Exact(probs),
        })
    }

    /// Exact table from integer weights (normalized by their sum).
    pub fn from_weights(axes: Vec<Axis>, weights: &[u64]) -> Result<Self, InfoError> {
        let total: u64 = weights.iter().sum();
        if total == 0 {
            return Err(InfoError::NotNormalized {
                total: 0.0,
                tolerance: 0.0,
            });
        }
        let denom = BigInt::from(total);
        let probs = weights
            .iter()
            .map(|&w| BigRational::new(BigInt::from(w), denom.clone()))
            .collect();
        Self::from_rationals(axes, probs)
    }

    /// Exact uniform distribution over the axes' product space.
    pub fn uniform(axes: Vec<Axis>) -> Self {
        let n: usize = axes.iter().map(Axis::len).product();
        let probs = vec![BigRational::new(BigInt::one(), BigInt::from(n)); n];
        Self::from_rationals(axes, probs).expect("uniform table is normalized")
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn arity(&self) -> usize {
        self.axes.len()
    }

    pub fn len(&self) -> usize {
        self.mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mass.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.mass, Mass::Exact(_))
    }

    pub fn mass(&self) -> &Mass {
        &self.mass
    }

    pub fn probabilities_f64(&self) -> Vec<f64> {
        self.mass.to_f64_vec()
    }

    pub fn axis_index(&self, name: &str) -> Result<usize, InfoError> {
        self.axes
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| InfoError::UnknownAxis(name.to_string()))
    }

    /// Row-major strides, axis 0 slowest.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1usize; self.axes.len()];
        for i in (0..self.axes.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.axes[i + 1].len();
        }
        strides
    }

    pub fn flat_index(&self, coords: &[usize]) -> usize {
        debug_assert_eq!(coords.len(), self.axes.len());
        coords
            .iter()
            .zip(self.strides())
            .map(|(&c, s)| c * s)
            .sum()
    }

    pub fn coords_of(&self, mut flat: usize) -> Vec<usize> {
        let strides = self.strides();
        strides
            .iter()
            .map(|&s| {
                let c = flat / s;
                flat %= s;
                c
            })
            .collect()
    }

    /// Marginal over the given axes, in the given order.
    pub fn marginalize(&self, keep: &[usize]) -> Self {
        let axes: Vec<Axis> = keep.iter().map(|&i| self.axes[i].clone()).collect();
        let out_len: usize = axes.iter().map(Axis::len).product();
        let mut out_strides = vec![1usize; keep.len()];
        for i in (0..keep.len().saturating_sub(1)).rev() {
            out_strides[i] = out_strides[i + 1] * axes[i + 1].len();
        }
        let map_index = |flat: usize| -> usize {
            let coords = self.coords_of(flat);
            keep.iter()
                .zip(&out_strides)
                .map(|(&axis, &stride)| coords[axis] * stride)
                .sum()
        };
        let mass = match &self.mass {
            Mass::Float(v) => {
                let mut out = vec![0.0f64; out_len];
                for (flat, &p) in v.iter().enumerate() {
                    out[map_index(flat)] += p;
                }
                Mass::Float(out)
            }
            Mass::Exact(v) => {
                let mut out = vec![BigRational::zero(); out_len];
                for (flat, p) in v.iter().enumerate() {
                    out[map_index(flat)] += p;
                }
                Mass::Exact(out)
            }
        };
        Self { axes, mass }
    }

    /// Normalized statistical distance: half the entrywise L1 difference.
    pub fn statistical_distance(&self, other: &Self) -> Result<f64, InfoError> {
        let same_shape = self.axes.len() == other.axes.len()
            && self
                .axes
                .iter()
                .zip(&other.axes)
                .all(|(a, b)| a.len() == b.len());
        if !same_shape {
            return Err(InfoError::ShapeMismatch);
        }
        let p = self.probabilities_f64();
        let q = other.probabilities_f64();
        Ok(0.5 * p.iter().zip(&q).map(|(a, b)| (a - b).abs()).sum::<f64>())
    }

    /// JSON interchange form: `{"axes": [{"name", "labels"}], "probs": [..]}`
    /// row-major. Exact tables are emitted as doubles.
    pub fn to_json_string(&self) -> String {
        let doc = TableJson {
            axes: self.axes.clone(),
            probs: self.probabilities_f64(),
        };
        serde_json::to_string(&doc).expect("table serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self, InfoError> {
        let doc: TableJson = serde_json::from_str(s)
            .map_err(|e| InfoError::BadLabel(format!("json parse: {e}")))?;
        Self::from_floats(doc.axes, doc.probs)
    }

    /// CSV form: one header row of axis names plus `prob`, then one row per
    /// cell in row-major order.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        for axis in &self.axes {
            out.push_str(&axis.name);
            out.push(',');
        }
        out.push_str("prob\n");
        let probs = self.probabilities_f64();
        for (flat, p) in probs.iter().enumerate() {
            let coords = self.coords_of(flat);
            for (axis, &c) in self.axes.iter().zip(&coords) {
                out.push_str(&axis.labels[c]);
                out.push(',');
            }
            out.push_str(&format!("{p}\n"));
        }
        out
    }

    pub fn from_csv_str(s: &str) -> Result<Self, InfoError> {
        let mut lines = s.lines();
        let header = lines
            .next()
            .ok_or_else(|| InfoError::BadLabel("empty csv".into()))?;
        let names: Vec<&str> = header.split(',').collect();
        if names.last() != Some(&"prob") {
            return Err(InfoError::BadLabel("last csv column must be prob".into()));
        }
        let axis_names = &names[..names.len() - 1];
        let mut labels: Vec<Vec<String>> = vec![Vec::new(); axis_names.len()];
        let mut rows: Vec<(Vec<String>, f64)> = Vec::new();
        for line in lines {
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != names.len() {
                return Err(InfoError::BadLabel(format!("bad csv row: {line}")));
            }
            let p: f64 = fields[fields.len() - 1]
                .parse()
                .map_err(|_| InfoError::BadLabel(format!("bad probability: {line}")))?;
            let coords: Vec<String> = fields[..fields.len() - 1]
                .iter()
                .map(|s| s.to_string())
                .collect();
            for (axis, label) in coords.iter().enumerate() {
                if !labels[axis].contains(label) {
                    labels[axis].push(label.clone());
                }
            }
            rows.push((coords, p));
        }
        let axes: Vec<Axis> = axis_names
            .iter()
            .zip(labels)
            .map(|(&n, l)| Axis::new(n, l))
            .collect();
        let mut probs = vec![0.0f64; axes.iter().map(Axis::len).product()];
        let strides = {
            let mut strides = vec![1usize; axes.len()];
            for i in (0..axes.len().saturating_sub(1)).rev() {
                strides[i] = strides[i + 1] * axes[i + 1].len();
            }
            strides
        };
        for (coords, p) in rows {
            let flat: usize = coords
                .iter()
                .enumerate()
                .map(|(axis, label)| {
                    axes[axis]
                        .labels
                        .iter()
                        .position(|l| l == label)
                        .expect("label registered above")
                        * strides[axis]
                })
                .sum();
            probs[flat] += p;
        }
        Self::from_floats(axes, probs)
    }
}

fn check_shape(axes: &[Axis], len: usize) -> Result<(), InfoError> {
    let expected: usize = axes.iter().map(Axis::len).product();
    if expected != len || axes.iter().any(Axis::is_empty) {
        return Err(InfoError::TableShapeMismatch {
            expected,
            actual: len,
        });
    }
    Ok(())
}
