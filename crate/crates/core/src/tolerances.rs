//! Named tolerances used by the verification suites.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// `(name, default, meaning)`.
pub const DEFAULTS: &[(&str, f64, &str)] = &[
    ("area", 1e-13, "relative error of the quadrature area"),
    (
        "roundtrip",
        1e-12,
        "analysis/synthesis round trip, max norm",
    ),
    (
        "eigen",
        1e-10,
        "relative error of Laplacian eigenvalues, l <= L/2",
    ),
    ("poisson", 1e-11, "Poisson solve of a Laplacian, max norm"),
    ("gauss_bonnet", 1e-9, "total curvature minus 4 pi"),
    (
        "ckv",
        1e-9,
        "conformal Killing residual of the standard fields",
    ),
    (
        "kw",
        1e-8,
        "Kazdan-Warner integral relative to its normalization",
    ),
    ("induced_metric", 1e-10, "induced metric minus e^{2h} delta"),
    (
        "cone",
        1e-13,
        "distance of the embedded surface from the cone",
    ),
    ("frame", 1e-12, "null frame constraints"),
    ("chihat", 1e-10, "trace-free part of chi"),
    ("trchi", 1e-9, "trchi minus 2 e^{-h}"),
    ("zeta", 1e-9, "torsion minus dh"),
    ("gauss_codazzi", 1e-8, "Gauss and Codazzi residuals"),
    ("transform", 1e-10, "boost law against recomputation"),
    ("curl", 1e-10, "change of curl zeta under a boost"),
    ("group", 1e-10, "composition of boosts"),
    ("torsion", 1e-8, "torsion after the divergence-free gauge"),
    ("trchi_std", 1e-8, "spread of trchi after normalization"),
    (
        "integrability",
        1e-8,
        "dK + div(chibar-hat)/2 in the normalized gauge",
    ),
    ("adjoint", 1e-9, "relative gap of the adjoint identity"),
    (
        "chain",
        1e-7,
        "spread of the chain lines relative to the normalization",
    ),
    (
        "isometry",
        1e-10,
        "first chain line minus the intrinsic integral",
    ),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Tolerances(BTreeMap<String, f64>);

impl Default for Tolerances {
    fn default() -> Self {
        Self(
            DEFAULTS
                .iter()
                .map(|&(n, v, _)| (n.to_string(), v))
                .collect(),
        )
    }
}

impl Tolerances {
    pub fn get(&self, name: &str) -> Result<f64> {
        self.0
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownTolerance(name.to_string()))
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        match self.0.get_mut(name) {
            Some(slot) => {
                *slot = value;
                Ok(())
            }
            None => Err(Error::UnknownTolerance(name.to_string())),
        }
    }

    /// Applies an override written as `name=value`.
    pub fn apply(&mut self, assignment: &str) -> Result<()> {
        let o: Override = assignment.parse()?;
        self.set(&o.name, o.value)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

/// A parsed `name=value` pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Override {
    pub name: String,
    pub value: f64,
}

impl FromStr for Override {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnknownTolerance(s.to_string());
        let (name, value) = s.split_once('=').ok_or_else(bad)?;
        let value: f64 = value.trim().parse().map_err(|_| bad())?;
        if !value.is_finite() || value < 0.0 {
            return Err(bad());
        }
        Ok(Self {
            name: name.trim().to_string(),
            value,
        })
    }
}
