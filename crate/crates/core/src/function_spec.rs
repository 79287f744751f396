//! Compact textual descriptions of scalar functions on the sphere.
//!
//! Grammar:
//!
//! ```text
//! zero
//! const:<c>
//! ylm:<l>,<m>,<amplitude>
//! sum:<l>,<m>,<amplitude>;<l>,<m>,<amplitude>;...
//! random:<seed>,<lmax>,<amplitude>
//! ```
//!
//! `random` draws degrees `1..=lmax` and scales them so `max |f| = amplitude`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::seeded::{random_coeffs, synthesize_on};
use crate::sphere::{ScalarField, SphCoeffs, SphereGrid};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct YlmTerm {
    pub l: usize,
    pub m: i64,
    pub amplitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FunctionSpec {
    Zero,
    Constant(f64),
    Ylm(YlmTerm),
    Sum(Vec<YlmTerm>),
    Random {
        seed: u64,
        lmax: usize,
        amplitude: f64,
    },
}

impl FunctionSpec {
    /// Highest spherical-harmonic degree present.
    pub fn degree(&self) -> usize {
        match self {
            Self::Zero | Self::Constant(_) => 0,
            Self::Ylm(t) => t.l,
            Self::Sum(ts) => ts.iter().map(|t| t.l).max().unwrap_or(0),
            Self::Random { lmax, .. } => *lmax,
        }
    }

    pub fn coefficients(&self) -> Result<SphCoeffs> {
        let mut c = SphCoeffs::zeros(self.degree());
        match self {
            Self::Zero => {}
            Self::Constant(v) => {
                c.set(0, 0, v * (4.0 * std::f64::consts::PI).sqrt())?;
            }
            Self::Ylm(t) => c.add(t.l, t.m, t.amplitude)?,
            Self::Sum(ts) => {
                for t in ts {
                    c.add(t.l, t.m, t.amplitude)?;
                }
            }
            Self::Random {
                seed,
                lmax,
                amplitude,
            } => c = random_coeffs(*seed, *lmax, *amplitude),
        }
        Ok(c)
    }

    /// Samples the function on `grid`; degrees above `L` are rejected and
    /// degrees above `L/4` are resolved but logged as under-resolved for
    /// the spectral tolerances.
    pub fn to_field(&self, grid: &SphereGrid) -> Result<ScalarField> {
        let degree = self.degree();
        if degree > grid.band_limit() {
            return Err(Error::OutOfBand {
                l: degree,
                m: 0,
                band_limit: grid.band_limit(),
            });
        }
        if 4 * degree > grid.band_limit() {
            log::warn!(
                "function '{self}' has degree {degree} > L/4 = {}; tolerances assume at most L/4",
                grid.band_limit() / 4
            );
        }
        Ok(synthesize_on(grid, &self.coefficients()?))
    }
}

fn bad(spec: &str, reason: impl Into<String>) -> Error {
    Error::FunctionSpec {
        spec: spec.to_string(),
        reason: reason.into(),
    }
}

fn parse_term(spec: &str, s: &str) -> Result<YlmTerm> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(bad(spec, "expected l,m,amplitude"));
    }
    let l: usize = parts[0]
        .parse()
        .map_err(|_| bad(spec, "l must be a non-negative integer"))?;
    let m: i64 = parts[1]
        .parse()
        .map_err(|_| bad(spec, "m must be an integer"))?;
    let amplitude: f64 = parts[2]
        .parse()
        .map_err(|_| bad(spec, "amplitude must be a number"))?;
    if m.unsigned_abs() as usize > l {
        return Err(bad(spec, "|m| must not exceed l"));
    }
    if !amplitude.is_finite() {
        return Err(bad(spec, "amplitude must be finite"));
    }
    Ok(YlmTerm { l, m, amplitude })
}

impl FromStr for FunctionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "zero" {
            return Ok(Self::Zero);
        }
        let (kind, args) = s.split_once(':').ok_or_else(|| bad(s, "missing ':'"))?;
        match kind {
            "const" => {
                let v: f64 = args
                    .trim()
                    .parse()
                    .map_err(|_| bad(s, "constant must be a number"))?;
                if !v.is_finite() {
                    return Err(bad(s, "constant must be finite"));
                }
                Ok(Self::Constant(v))
            }
            "ylm" => Ok(Self::Ylm(parse_term(s, args)?)),
            "sum" => {
                let terms = args
                    .split(';')
                    .filter(|t| !t.trim().is_empty())
                    .map(|t| parse_term(s, t))
                    .collect::<Result<Vec<_>>>()?;
                if terms.is_empty() {
                    return Err(bad(s, "sum needs at least one term"));
                }
                Ok(Self::Sum(terms))
            }
            "random" => {
                let parts: Vec<&str> = args.split(',').map(str::trim).collect();
                if parts.len() != 3 {
                    return Err(bad(s, "expected seed,lmax,amplitude"));
                }
                let seed = parts[0]
                    .parse()
                    .map_err(|_| bad(s, "seed must be a non-negative integer"))?;
                let lmax = parts[1]
                    .parse()
                    .map_err(|_| bad(s, "lmax must be a non-negative integer"))?;
                let amplitude: f64 = parts[2]
                    .parse()
                    .map_err(|_| bad(s, "amplitude must be a number"))?;
                if !amplitude.is_finite() {
                    return Err(bad(s, "amplitude must be finite"));
                }
                Ok(Self::Random {
                    seed,
                    lmax,
                    amplitude,
                })
            }
            other => Err(bad(s, format!("unknown kind '{other}'"))),
        }
    }
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Zero => write!(f, "zero"),
            Self::Constant(c) => write!(f, "const:{c}"),
            Self::Ylm(t) => write!(f, "ylm:{},{},{}", t.l, t.m, t.amplitude),
            Self::Sum(ts) => {
                write!(f, "sum:")?;
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{},{},{}", t.l, t.m, t.amplitude)?;
                }
                Ok(())
            }
            Self::Random {
                seed,
                lmax,
                amplitude,
            } => write!(f, "random:{seed},{lmax},{amplitude}"),
        }
    }
}
