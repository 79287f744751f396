use std::f64::consts::PI;

use super::fields::ScalarField;
use super::legendre::{gauss_legendre, normalized_legendre, theta_derivative};
use crate::{Error, Result};

/// Orthonormal round frame and unit normal at a node, as Cartesian 3-vectors.
#[derive(Clone, Copy, Debug)]
pub struct NodeFrame {
    /// `n(θ, φ)`, the position on the unit sphere.
    pub normal: [f64; 3],
    /// `e₁ = ∂_θ n`.
    pub e1: [f64; 3],
    /// `e₂ = (1/sin θ) ∂_φ n`.
    pub e2: [f64; 3],
}

impl NodeFrame {
    pub fn e(&self, a: usize) -> [f64; 3] {
        if a == 0 {
            self.e1
        } else {
            self.e2
        }
    }
}

/// Per-ring tables of the orthonormal Legendre functions.
#[derive(Debug, Clone)]
pub(crate) struct RingTables {
    pub lam: Vec<f64>,
    pub dlam: Vec<f64>,
    pub lam_over_sin: Vec<f64>,
}

/// Quadrature grid and transform tables for the unit sphere at band limit `L`.
///
/// `n_θ = L + 1` Gauss–Legendre colatitudes and `n_φ = 2L + 1` equispaced
/// longitudes. Node `(j, k)` is stored at `j * n_φ + k`.
#[derive(Debug, Clone)]
pub struct SphereGrid {
    band_limit: usize,
    n_theta: usize,
    n_phi: usize,
    theta: Vec<f64>,
    cos_theta: Vec<f64>,
    sin_theta: Vec<f64>,
    phi: Vec<f64>,
    cos_phi: Vec<f64>,
    sin_phi: Vec<f64>,
    ring_weights: Vec<f64>,
    pub(crate) rings: Vec<RingTables>,
    /// `cos(mφ_k)` at `k * (L+1) + m`.
    pub(crate) fourier_cos: Vec<f64>,
    pub(crate) fourier_sin: Vec<f64>,
}

impl SphereGrid {
    pub fn new(band_limit: usize) -> Result<Self> {
        if band_limit < 4 {
            return Err(Error::BandLimitTooSmall(band_limit));
        }
        let n_theta = band_limit + 1;
        let n_phi = 2 * band_limit + 1;
        let (x, w) = gauss_legendre(n_theta);
        let theta: Vec<f64> = x.iter().map(|x| x.acos()).collect();
        let cos_theta = x;
        let sin_theta: Vec<f64> = cos_theta.iter().map(|c| (1.0 - c * c).sqrt()).collect();
        let dphi = 2.0 * PI / n_phi as f64;
        let phi: Vec<f64> = (0..n_phi).map(|k| k as f64 * dphi).collect();
        let cos_phi = phi.iter().map(|p| p.cos()).collect();
        let sin_phi = phi.iter().map(|p| p.sin()).collect();
        let ring_weights = w.iter().map(|w| w * dphi).collect();

        let rings = (0..n_theta)
            .map(|j| {
                let lam = normalized_legendre(band_limit, cos_theta[j], sin_theta[j]);
                let dlam = theta_derivative(band_limit, &lam);
                let lam_over_sin = lam.iter().map(|v| v / sin_theta[j]).collect();
                RingTables {
                    lam,
                    dlam,
                    lam_over_sin,
                }
            })
            .collect();

        let nm = band_limit + 1;
        let mut fourier_cos = vec![0.0; n_phi * nm];
        let mut fourier_sin = vec![0.0; n_phi * nm];
        for k in 0..n_phi {
            for m in 0..nm {
                // Reduce m·k modulo n_φ before forming the angle.
                let ang = 2.0 * PI * ((m * k) % n_phi) as f64 / n_phi as f64;
                fourier_cos[k * nm + m] = ang.cos();
                fourier_sin[k * nm + m] = ang.sin();
            }
        }

        Ok(Self {
            band_limit,
            n_theta,
            n_phi,
            theta,
            cos_theta,
            sin_theta,
            phi,
            cos_phi,
            sin_phi,
            ring_weights,
            rings,
            fourier_cos,
            fourier_sin,
        })
    }

    pub fn band_limit(&self) -> usize {
        self.band_limit
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    pub fn n_nodes(&self) -> usize {
        self.n_theta * self.n_phi
    }

    pub fn colatitudes(&self) -> &[f64] {
        &self.theta
    }

    pub fn longitudes(&self) -> &[f64] {
        &self.phi
    }

    pub fn sin_theta(&self, j: usize) -> f64 {
        self.sin_theta[j]
    }

    pub fn cos_theta(&self, j: usize) -> f64 {
        self.cos_theta[j]
    }

    /// `(θ, φ)` of a flat node index.
    pub fn node(&self, idx: usize) -> (f64, f64) {
        (self.theta[idx / self.n_phi], self.phi[idx % self.n_phi])
    }

    /// Quadrature weight `w_{jk}` in steradians.
    pub fn weight(&self, idx: usize) -> f64 {
        self.ring_weights[idx / self.n_phi]
    }

    /// Per-ring weights (constant along each ring).
    pub fn ring_weights(&self) -> &[f64] {
        &self.ring_weights
    }

    pub fn frame(&self, idx: usize) -> NodeFrame {
        let (j, k) = (idx / self.n_phi, idx % self.n_phi);
        let (ct, st) = (self.cos_theta[j], self.sin_theta[j]);
        let (cp, sp) = (self.cos_phi[k], self.sin_phi[k]);
        NodeFrame {
            normal: [st * cp, st * sp, ct],
            e1: [ct * cp, ct * sp, -st],
            e2: [-sp, cp, 0.0],
        }
    }

    /// Cartesian coordinate `x_i` (i = 0, 1, 2 for x₁, x₂, x₃) restricted to the sphere.
    pub fn coordinate(&self, i: usize) -> ScalarField {
        self.field_from_nodes(|idx| self.frame(idx).normal[i])
    }

    pub fn field_from_fn(&self, f: impl Fn(f64, f64) -> f64) -> ScalarField {
        self.field_from_nodes(|idx| {
            let (t, p) = self.node(idx);
            f(t, p)
        })
    }

    pub fn field_from_nodes(&self, f: impl Fn(usize) -> f64) -> ScalarField {
        ScalarField::from_parts(
            self.n_theta,
            self.n_phi,
            (0..self.n_nodes()).map(f).collect(),
        )
    }

    pub(crate) fn check(&self, f: &ScalarField) {
        assert!(
            f.n_theta() == self.n_theta && f.n_phi() == self.n_phi,
            "field of shape {}x{} does not live on a grid of shape {}x{}",
            f.n_theta(),
            f.n_phi(),
            self.n_theta,
            self.n_phi
        );
    }

    /// `∫ f dvol_{S²} = Σ w_{jk} f_{jk}`, summed ring by ring in a fixed order.
    pub fn integrate(&self, f: &ScalarField) -> f64 {
        self.check(f);
        f.values()
            .chunks(self.n_phi)
            .zip(&self.ring_weights)
            .map(|(ring, w)| w * ring.iter().sum::<f64>())
            .sum()
    }
}
