use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::{lowest_eigenpairs, nested_dissection, CsrMatrix, EigenOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Gauge {
    Landau,
    Torsion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumMethod {
    LandauFd,
    TorsionGaugeFd,
    RadialDisk,
    TrialUpper,
}

impl fmt::Display for SpectrumMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpectrumMethod::LandauFd => "landau-fd",
            SpectrumMethod::TorsionGaugeFd => "torsion-gauge-fd",
            SpectrumMethod::RadialDisk => "radial-disk",
            SpectrumMethod::TrialUpper => "trial-upper",
        })
    }
}

/// Discrete quadratic form pair `(K, M)` whose pencil eigenvalues
/// approximate `λ_n(Ω, B)`. One unknown per inside cell.
#[derive(Debug, Clone)]
pub struct MagneticForm {
    pub stiffness: CsrMatrix<Complex64>,
    /// Diagonal of the mass matrix.
    pub mass: Vec<f64>,
    pub gauge: Gauge,
    pub field: f64,
    /// Grid coordinates of each unknown.
    pub coords: Vec<(i32, i32)>,
    /// Storage index of each unknown in the raster.
    pub cells: Vec<usize>,
    pub domain: String,
    pub resolution: usize,
}

impl MagneticForm {
    pub fn dim(&self) -> usize {
        self.mass.len()
    }

    /// `v^H K v / v^H M v`.
    pub fn rayleigh_quotient(&self, v: &[Complex64]) -> f64 {
        let kv = self.stiffness.apply(v);
        let num: f64 = v.iter().zip(&kv).map(|(a, b)| (a.conj() * b).re).sum();
        let den: f64 = v
            .iter()
            .zip(&self.mass)
            .map(|(a, m)| a.norm_sqr() * m)
            .sum();
        num / den
    }
}

/// Ordered eigenvalues with solver metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// Per-eigenvalue accuracy indicator: the pencil residual for the grid
    /// solvers, the node-doubling difference for the radial solver.
    pub residuals: Vec<f64>,
    #[serde(rename = "B")]
    pub field: f64,
    pub method: SpectrumMethod,
    pub resolution: usize,
    pub domain: String,
}

impl Spectrum {
    pub fn get(&self, n: usize) -> f64 {
        self.eigenvalues[n - 1]
    }
}

/// The `n` lowest pencil eigenvalues of `form`.
pub fn eigenvalues(form: &MagneticForm, n: usize) -> Result<Spectrum> {
    let pairs = lowest_eigenpairs(
        &form.stiffness,
        &form.mass,
        n,
        Some(nested_dissection(&form.coords)),
        &EigenOptions::default(),
    )?;
    let method = match form.gauge {
        Gauge::Landau => SpectrumMethod::LandauFd,
        Gauge::Torsion => SpectrumMethod::TorsionGaugeFd,
    };
    Ok(Spectrum {
        eigenvalues: pairs.values,
        residuals: pairs.residuals,
        field: form.field,
        method,
        resolution: form.resolution,
        domain: form.domain.clone(),
    })
}
