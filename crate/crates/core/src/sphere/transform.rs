use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use super::fields::ScalarField;
use super::grid::SphereGrid;
use super::legendre::tri;
use crate::{par, Error, Result};

/// Coefficients of a real spherical-harmonic expansion, `0 ≤ l ≤ band_limit`,
/// `-l ≤ m ≤ l`, stored at `l² + l + m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphCoeffs {
    band_limit: usize,
    data: Vec<f64>,
}

impl SphCoeffs {
    pub fn zeros(band_limit: usize) -> Self {
        Self {
            band_limit,
            data: vec![0.0; (band_limit + 1) * (band_limit + 1)],
        }
    }

    pub fn band_limit(&self) -> usize {
        self.band_limit
    }

    fn index(&self, l: usize, m: i64) -> Result<usize> {
        if l > self.band_limit || m.unsigned_abs() as usize > l {
            return Err(Error::OutOfBand {
                l,
                m,
                band_limit: self.band_limit,
            });
        }
        Ok(((l * l + l) as i64 + m) as usize)
    }

    pub fn get(&self, l: usize, m: i64) -> Result<f64> {
        self.index(l, m).map(|i| self.data[i])
    }

    pub fn set(&mut self, l: usize, m: i64, value: f64) -> Result<()> {
        let i = self.index(l, m)?;
        self.data[i] = value;
        Ok(())
    }

    pub fn add(&mut self, l: usize, m: i64, value: f64) -> Result<()> {
        let i = self.index(l, m)?;
        self.data[i] += value;
        Ok(())
    }

    /// `(l, m, coefficient)` in storage order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, i64, f64)> + '_ {
        (0..=self.band_limit).flat_map(move |l| {
            (-(l as i64)..=l as i64)
                .map(move |m| (l, m, self.data[((l * l + l) as i64 + m) as usize]))
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |a, v| a.max(v.abs()))
    }

    /// `Σ a_lm²`, equal to `∫ f² dvol` by Parseval.
    pub fn energy(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    /// Multiply each degree-`l` block by `factor(l)`.
    pub fn map_degree(&self, factor: impl Fn(usize) -> f64) -> Self {
        let mut out = self.clone();
        for l in 0..=self.band_limit {
            let f = factor(l);
            for m in 0..(2 * l + 1) {
                out.data[l * l + m] *= f;
            }
        }
        out
    }

    /// Coefficients restricted or zero-padded to another band limit.
    pub fn with_band_limit(&self, band_limit: usize) -> Self {
        let mut out = Self::zeros(band_limit);
        for (l, m, v) in self.iter() {
            if l <= band_limit {
                out.set(l, m, v).expect("index within target band");
            }
        }
        out
    }

    fn raw(&self, l: usize, m: i64) -> f64 {
        self.data[((l * l + l) as i64 + m) as usize]
    }
}

/// Which Legendre table a synthesis uses.
#[derive(Clone, Copy)]
pub(crate) enum Synthesis {
    /// `f`.
    Value,
    /// `∂_θ f`.
    ThetaDerivative,
    /// `(1/sin θ) ∂_φ f`.
    PhiDerivative,
}

impl SphereGrid {
    /// Real spherical-harmonic coefficients `a_lm = ∫ f Y_lm dvol` by quadrature,
    /// exact for fields of degree at most `L`.
    pub fn analyze(&self, f: &ScalarField) -> SphCoeffs {
        self.check(f);
        let lmax = self.band_limit();
        let nm = lmax + 1;
        let n_phi = self.n_phi();

        // Longitude sums per ring: cosine and sine parts for every order m.
        let ring_sums: Vec<(Vec<f64>, Vec<f64>)> = par::map_indices(self.n_theta(), |j| {
            let ring = &f.values()[j * n_phi..(j + 1) * n_phi];
            let mut a = vec![0.0; nm];
            let mut b = vec![0.0; nm];
            for (k, &v) in ring.iter().enumerate() {
                let cs = &self.fourier_cos[k * nm..(k + 1) * nm];
                let sn = &self.fourier_sin[k * nm..(k + 1) * nm];
                for m in 0..nm {
                    a[m] += v * cs[m];
                    b[m] += v * sn[m];
                }
            }
            (a, b)
        });

        // Legendre projection, one order m at a time.
        let per_order: Vec<(Vec<f64>, Vec<f64>)> = par::map_indices(nm, |m| {
            let scale = if m == 0 { 1.0 } else { SQRT_2 };
            let mut cos_part = vec![0.0; nm - m];
            let mut sin_part = vec![0.0; nm - m];
            for (j, (a, b)) in ring_sums.iter().enumerate() {
                let w = self.ring_weights()[j] * scale;
                let lam = &self.rings[j].lam;
                for l in m..nm {
                    let p = w * lam[tri(l, m)];
                    cos_part[l - m] += p * a[m];
                    sin_part[l - m] += p * b[m];
                }
            }
            (cos_part, sin_part)
        });

        let mut out = SphCoeffs::zeros(lmax);
        for (m, (c, s)) in per_order.into_iter().enumerate() {
            for l in m..nm {
                out.data[l * l + l + m] = c[l - m];
                if m > 0 {
                    out.data[l * l + l - m] = s[l - m];
                }
            }
        }
        out
    }

    /// Field values of a coefficient table with band limit at most `L`.
    pub fn synthesize(&self, coeffs: &SphCoeffs) -> Result<ScalarField> {
        if coeffs.band_limit() > self.band_limit() {
            let l = coeffs.band_limit();
            return Err(Error::OutOfBand {
                l,
                m: 0,
                band_limit: self.band_limit(),
            });
        }
        Ok(self.synthesize_with(coeffs, Synthesis::Value))
    }

    pub(crate) fn synthesize_with(&self, coeffs: &SphCoeffs, kind: Synthesis) -> ScalarField {
        let lmax = coeffs.band_limit().min(self.band_limit());
        let nm_grid = self.band_limit() + 1;
        let n_phi = self.n_phi();
        let mut values = vec![0.0; self.n_nodes()];
        par::for_each_chunk_mut(&mut values, n_phi, |j, ring| {
            let tables = &self.rings[j];
            let table = match kind {
                Synthesis::Value => &tables.lam,
                Synthesis::ThetaDerivative => &tables.dlam,
                Synthesis::PhiDerivative => &tables.lam_over_sin,
            };
            let mut a = vec![0.0; lmax + 1];
            let mut b = vec![0.0; lmax + 1];
            for m in 0..=lmax {
                let scale = if m == 0 { 1.0 } else { SQRT_2 };
                let (mut sa, mut sb) = (0.0, 0.0);
                for l in m..=lmax {
                    let p = table[tri(l, m)];
                    sa += coeffs.raw(l, m as i64) * p;
                    if m > 0 {
                        sb += coeffs.raw(l, -(m as i64)) * p;
                    }
                }
                let (sa, sb) = (scale * sa, scale * sb);
                match kind {
                    // ∂_φ (a cos mφ + b sin mφ) = m (b cos mφ - a sin mφ)
                    Synthesis::PhiDerivative => {
                        a[m] = m as f64 * sb;
                        b[m] = -(m as f64) * sa;
                    }
                    _ => {
                        a[m] = sa;
                        b[m] = sb;
                    }
                }
            }
            for (k, out) in ring.iter_mut().enumerate() {
                let cs = &self.fourier_cos[k * nm_grid..k * nm_grid + lmax + 1];
                let sn = &self.fourier_sin[k * nm_grid..k * nm_grid + lmax + 1];
                let mut v = 0.0;
                for m in 0..=lmax {
                    v += a[m] * cs[m] + b[m] * sn[m];
                }
                *out = v;
            }
        });
        ScalarField::from_parts(self.n_theta(), n_phi, values)
    }

    /// The grid samples of a single real harmonic `Y_lm`.
    pub fn ylm(&self, l: usize, m: i64) -> Result<ScalarField> {
        let mut c = SphCoeffs::zeros(self.band_limit());
        c.set(l, m, 1.0)?;
        self.synthesize(&c)
    }
}
