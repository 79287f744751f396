use std::ops::{Add, Mul, Neg, Sub};

/// Real values at the grid nodes, ring-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    n_theta: usize,
    n_phi: usize,
    values: Vec<f64>,
}

impl ScalarField {
    pub(crate) fn from_parts(n_theta: usize, n_phi: usize, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), n_theta * n_phi);
        Self {
            n_theta,
            n_phi,
            values,
        }
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn zeros_like(&self) -> Self {
        self.map(|_| 0.0)
    }

    pub fn constant_like(&self, c: f64) -> Self {
        self.map(|_| c)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            n_theta: self.n_theta,
            n_phi: self.n_phi,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        self.assert_same_shape(other);
        Self {
            n_theta: self.n_theta,
            n_phi: self.n_phi,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn exp(&self) -> Self {
        self.map(f64::exp)
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    fn assert_same_shape(&self, other: &Self) {
        assert!(
            self.n_theta == other.n_theta && self.n_phi == other.n_phi,
            "scalar fields live on different grids"
        );
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&ScalarField> for &ScalarField {
            type Output = ScalarField;
            fn $method(self, rhs: &ScalarField) -> ScalarField {
                self.zip_map(rhs, |a, b| a $op b)
            }
        }
        impl $trait<ScalarField> for ScalarField {
            type Output = ScalarField;
            fn $method(self, rhs: ScalarField) -> ScalarField {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&ScalarField> for ScalarField {
            type Output = ScalarField;
            fn $method(self, rhs: &ScalarField) -> ScalarField {
                (&self).$method(rhs)
            }
        }
        impl $trait<f64> for &ScalarField {
            type Output = ScalarField;
            fn $method(self, rhs: f64) -> ScalarField {
                self.map(|a| a $op rhs)
            }
        }
        impl $trait<f64> for ScalarField {
            type Output = ScalarField;
            fn $method(self, rhs: f64) -> ScalarField {
                self.map(|a| a $op rhs)
            }
        }
    };
}

scalar_binop!(Add, add, +);
scalar_binop!(Sub, sub, -);
scalar_binop!(Mul, mul, *);

impl Mul<&ScalarField> for f64 {
    type Output = ScalarField;
    fn mul(self, rhs: &ScalarField) -> ScalarField {
        rhs.scale(self)
    }
}

impl Neg for &ScalarField {
    type Output = ScalarField;
    fn neg(self) -> ScalarField {
        self.map(|v| -v)
    }
}

impl Neg for ScalarField {
    type Output = ScalarField;
    fn neg(self) -> ScalarField {
        self.map(|v| -v)
    }
}

/// A 1-form, by its components `(ω(e₁), ω(e₂))` in the round orthonormal frame.
#[derive(Debug, Clone, PartialEq)]
pub struct CovectorField {
    pub c1: ScalarField,
    pub c2: ScalarField,
}

impl CovectorField {
    pub fn new(c1: ScalarField, c2: ScalarField) -> Self {
        c1.assert_same_shape(&c2);
        Self { c1, c2 }
    }

    pub fn zeros_like(f: &ScalarField) -> Self {
        Self::new(f.zeros_like(), f.zeros_like())
    }

    pub fn component(&self, a: usize) -> &ScalarField {
        if a == 0 {
            &self.c1
        } else {
            &self.c2
        }
    }

    /// Pointwise product with a scalar weight.
    pub fn weighted(&self, w: &ScalarField) -> Self {
        Self::new(&self.c1 * w, &self.c2 * w)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::new(self.c1.scale(c), self.c2.scale(c))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(&self.c1 + &other.c1, &self.c2 + &other.c2)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(&self.c1 - &other.c1, &self.c2 - &other.c2)
    }

    /// Round-metric pairing `Σ_A ω_A θ_A`.
    pub fn dot(&self, other: &Self) -> ScalarField {
        self.c1.zip_map(&other.c1, |a, b| a * b) + self.c2.zip_map(&other.c2, |a, b| a * b)
    }

    /// Pairing with a vector field: `ω(X)`.
    pub fn apply(&self, x: &VectorField) -> ScalarField {
        &self.c1 * &x.x1 + &self.c2 * &x.x2
    }

    /// Rotation by a quarter turn: `(ω₁, ω₂) ↦ (-ω₂, ω₁)`.
    pub fn rotated(&self) -> Self {
        Self::new(-&self.c2, self.c1.clone())
    }

    /// Round pointwise norm.
    pub fn norm(&self) -> ScalarField {
        self.c1.zip_map(&self.c2, f64::hypot)
    }

    /// Maximum over nodes of the round pointwise norm.
    pub fn max_norm(&self) -> f64 {
        self.norm().max_abs()
    }

    /// Raise the index with the round metric.
    pub fn sharp(&self) -> VectorField {
        VectorField::new(self.c1.clone(), self.c2.clone())
    }
}

/// A tangent vector field, by its components `(X¹, X²)` in the round orthonormal frame.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    pub x1: ScalarField,
    pub x2: ScalarField,
}

impl VectorField {
    pub fn new(x1: ScalarField, x2: ScalarField) -> Self {
        x1.assert_same_shape(&x2);
        Self { x1, x2 }
    }

    pub fn component(&self, a: usize) -> &ScalarField {
        if a == 0 {
            &self.x1
        } else {
            &self.x2
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::new(self.x1.scale(c), self.x2.scale(c))
    }

    pub fn weighted(&self, w: &ScalarField) -> Self {
        Self::new(&self.x1 * w, &self.x2 * w)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(&self.x1 + &other.x1, &self.x2 + &other.x2)
    }

    /// Lower the index with the round metric.
    pub fn flat(&self) -> CovectorField {
        CovectorField::new(self.x1.clone(), self.x2.clone())
    }

    pub fn norm(&self) -> ScalarField {
        self.x1.zip_map(&self.x2, f64::hypot)
    }

    pub fn max_norm(&self) -> f64 {
        self.norm().max_abs()
    }
}

/// A symmetric covariant 2-tensor by its frame components `T₁₁, T₁₂, T₂₂`.
///
/// Trace-free tensors are built with [`SymTensorField::traceless`], which stores
/// `T₂₂ = -T₁₁` so the round trace vanishes exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTensorField {
    pub t11: ScalarField,
    pub t12: ScalarField,
    pub t22: ScalarField,
    traceless: bool,
}

impl SymTensorField {
    pub fn new(t11: ScalarField, t12: ScalarField, t22: ScalarField) -> Self {
        t11.assert_same_shape(&t12);
        t11.assert_same_shape(&t22);
        Self {
            t11,
            t12,
            t22,
            traceless: false,
        }
    }

    pub fn traceless(t11: ScalarField, t12: ScalarField) -> Self {
        let t22 = -&t11;
        let mut t = Self::new(t11, t12, t22);
        t.traceless = true;
        t
    }

    /// The round metric `δ_AB`, scaled pointwise by `w`.
    pub fn metric(w: &ScalarField) -> Self {
        Self::new(w.clone(), w.zeros_like(), w.clone())
    }

    pub fn is_traceless(&self) -> bool {
        self.traceless
    }

    pub fn component(&self, a: usize, b: usize) -> &ScalarField {
        match (a, b) {
            (0, 0) => &self.t11,
            (1, 1) => &self.t22,
            _ => &self.t12,
        }
    }

    /// Round trace `T₁₁ + T₂₂`.
    pub fn trace(&self) -> ScalarField {
        &self.t11 + &self.t22
    }

    /// Round trace-free part `T - ½ (tr T) δ`.
    pub fn trace_free(&self) -> Self {
        Self::traceless(
            self.t11.zip_map(&self.t22, |a, b| 0.5 * (a - b)),
            self.t12.clone(),
        )
    }

    pub fn weighted(&self, w: &ScalarField) -> Self {
        Self {
            t11: &self.t11 * w,
            t12: &self.t12 * w,
            t22: &self.t22 * w,
            traceless: self.traceless,
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            t11: self.t11.scale(c),
            t12: self.t12.scale(c),
            t22: self.t22.scale(c),
            traceless: self.traceless,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.traceless && other.traceless {
            Self::traceless(&self.t11 + &other.t11, &self.t12 + &other.t12)
        } else {
            Self::new(
                &self.t11 + &other.t11,
                &self.t12 + &other.t12,
                &self.t22 + &other.t22,
            )
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    /// Round double contraction `Σ_AB S_AB T_AB`.
    pub fn contract(&self, other: &Self) -> ScalarField {
        let diag = &(&self.t11 * &other.t11) + &(&self.t22 * &other.t22);
        &diag + &(&self.t12 * &other.t12).scale(2.0)
    }

    /// `T(ω, ·)` with the index of `ω` raised by the round metric.
    pub fn contract_covector(&self, w: &CovectorField) -> CovectorField {
        CovectorField::new(
            &(&self.t11 * &w.c1) + &(&self.t12 * &w.c2),
            &(&self.t12 * &w.c1) + &(&self.t22 * &w.c2),
        )
    }

    /// `T(ω♯, X)` in the round metric.
    pub fn bilinear(&self, w: &CovectorField, x: &VectorField) -> ScalarField {
        self.contract_covector(w).apply(x)
    }

    pub fn max_abs(&self) -> f64 {
        self.t11
            .max_abs()
            .max(self.t12.max_abs())
            .max(self.t22.max_abs())
    }

    /// Pointwise `|T₁₁ + T₂₂|` maximum.
    pub fn max_trace(&self) -> f64 {
        self.trace().max_abs()
    }
}

/// A general covariant 2-tensor `T_AB` (first index is the derivative slot for
/// covariant derivatives).
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor2Field {
    pub t11: ScalarField,
    pub t12: ScalarField,
    pub t21: ScalarField,
    pub t22: ScalarField,
}

impl Tensor2Field {
    pub fn component(&self, a: usize, b: usize) -> &ScalarField {
        match (a, b) {
            (0, 0) => &self.t11,
            (0, 1) => &self.t12,
            (1, 0) => &self.t21,
            _ => &self.t22,
        }
    }

    /// `T_AB + T_BA`.
    pub fn sym(&self) -> SymTensorField {
        SymTensorField::new(
            self.t11.scale(2.0),
            &self.t12 + &self.t21,
            self.t22.scale(2.0),
        )
    }

    pub fn trace(&self) -> ScalarField {
        &self.t11 + &self.t22
    }

    /// `ε^{AB} T_AB = T₁₂ - T₂₁`.
    pub fn antisym_contraction(&self) -> ScalarField {
        &self.t12 - &self.t21
    }
}
