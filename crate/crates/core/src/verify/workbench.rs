use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::dirac::{dirac_upper_bounds, hardy_basis_grams, ParametricBoundary};
use crate::error::{Error, Result};
use crate::geometry::{fraenkel_asymmetry, rasterize, DomainSpec, RasterDomain, MIN_RESOLUTION};
use crate::maglap::{
    assemble_landau, assemble_torsion_gauge, disk_eigs_default, eigenvalues, Gauge, Spectrum,
};
use crate::torsion::{solve_torsion_fd, TorsionField};

/// Eigenvalues computed per grid solve, so that `n ≤ 3` requests share work.
const MIN_EIGS: usize = 3;

/// Relative slack added to every discretization estimate.
pub const SOLVER_SLACK: f64 = 0.005;

/// A rasterized domain with its torsion function.
#[derive(Debug)]
pub struct Prepared {
    pub domain: RasterDomain,
    pub torsion: TorsionField,
}

type SpectrumKey = (String, usize, u64, Gauge);

/// Memoizes rasters, torsion fields, spectra and asymmetries across checks.
/// Safe to share between threads; concurrent misses may compute twice.
#[derive(Debug)]
pub struct Workbench {
    pub resolution: usize,
    prepared: Mutex<HashMap<(String, usize), Arc<Prepared>>>,
    spectra: Mutex<HashMap<SpectrumKey, Arc<Spectrum>>>,
    disk: Mutex<HashMap<u64, Arc<Spectrum>>>,
    asymmetry: Mutex<HashMap<String, f64>>,
}

impl Workbench {
    pub fn new(resolution: usize) -> Result<Self> {
        if resolution / 2 < MIN_RESOLUTION {
            return Err(Error::ResolutionTooLow(resolution, 2 * MIN_RESOLUTION));
        }
        Ok(Self {
            resolution,
            prepared: Mutex::default(),
            spectra: Mutex::default(),
            disk: Mutex::default(),
            asymmetry: Mutex::default(),
        })
    }

    /// Half the working resolution, used for Richardson estimates.
    pub fn coarse_resolution(&self) -> usize {
        self.resolution / 2
    }

    pub fn prepare(&self, spec: &DomainSpec, resolution: usize) -> Result<Arc<Prepared>> {
        let key = (spec.tag(), resolution);
        if let Some(p) = self.prepared.lock().expect("cache lock").get(&key) {
            return Ok(Arc::clone(p));
        }
        let domain = rasterize(spec, resolution)?;
        let torsion = solve_torsion_fd(&domain)?;
        let p = Arc::new(Prepared { domain, torsion });
        self.prepared
            .lock()
            .expect("cache lock")
            .insert(key, Arc::clone(&p));
        Ok(p)
    }

    /// The lowest `max(n, 3)` eigenvalues on the grid.
    pub fn spectrum(
        &self,
        spec: &DomainSpec,
        resolution: usize,
        field: f64,
        n: usize,
        gauge: Gauge,
    ) -> Result<Arc<Spectrum>> {
        let key = (spec.tag(), resolution, field.to_bits(), gauge);
        if let Some(s) = self.spectra.lock().expect("cache lock").get(&key) {
            if s.eigenvalues.len() >= n {
                return Ok(Arc::clone(s));
            }
        }
        let p = self.prepare(spec, resolution)?;
        let form = match gauge {
            Gauge::Landau => assemble_landau(&p.domain, field)?,
            Gauge::Torsion => assemble_torsion_gauge(&p.domain, field, &p.torsion)?,
        };
        let s = Arc::new(eigenvalues(&form, n.max(MIN_EIGS))?);
        self.spectra
            .lock()
            .expect("cache lock")
            .insert(key, Arc::clone(&s));
        Ok(s)
    }

    /// `λ_n` at the working resolution and its relative tolerance: the
    /// Richardson estimate `|λ_h − λ_{2h}| / 3` plus [`SOLVER_SLACK`].
    pub fn eigenvalue_with_tolerance(
        &self,
        spec: &DomainSpec,
        field: f64,
        n: usize,
        gauge: Gauge,
    ) -> Result<(f64, f64)> {
        let fine = self
            .spectrum(spec, self.resolution, field, n, gauge)?
            .get(n);
        let coarse = self
            .spectrum(spec, self.coarse_resolution(), field, n, gauge)?
            .get(n);
        Ok((fine, richardson_tolerance(fine, coarse)))
    }

    /// Unit-area disk spectrum from the radial solver.
    pub fn disk_spectrum(&self, field: f64, n: usize) -> Result<Arc<Spectrum>> {
        if let Some(s) = self.disk.lock().expect("cache lock").get(&field.to_bits()) {
            if s.eigenvalues.len() >= n {
                return Ok(Arc::clone(s));
            }
        }
        let s = Arc::new(disk_eigs_default(1.0, field, n.max(MIN_EIGS))?);
        self.disk
            .lock()
            .expect("cache lock")
            .insert(field.to_bits(), Arc::clone(&s));
        Ok(s)
    }

    pub fn asymmetry(&self, spec: &DomainSpec) -> Result<f64> {
        let key = spec.tag();
        if let Some(&a) = self.asymmetry.lock().expect("cache lock").get(&key) {
            return Ok(a);
        }
        let p = self.prepare(spec, self.resolution)?;
        let a = fraenkel_asymmetry(&p.domain);
        self.asymmetry.lock().expect("cache lock").insert(key, a);
        Ok(a)
    }

    /// Lowest `n` Hardy-space upper bounds with basis degree `k_max`.
    pub fn dirac_upper(
        &self,
        spec: &DomainSpec,
        field: f64,
        k_max: usize,
        n: usize,
    ) -> Result<Vec<f64>> {
        let p = self.prepare(spec, self.resolution)?;
        let pb = ParametricBoundary::from_spec(spec, 16 * (k_max + 1))?;
        let g = hardy_basis_grams(&p.domain, &pb, &p.torsion, field, k_max)?;
        dirac_upper_bounds(&g, n)
    }
}

/// Relative tolerance from a fine and a coarse value of a second-order
/// discretization.
pub fn richardson_tolerance(fine: f64, coarse: f64) -> f64 {
    (fine - coarse).abs() / (3.0 * fine.abs()) + SOLVER_SLACK
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn caches_are_reused() {
        let wb = Workbench::new(64).unwrap();
        let spec = DomainSpec::rectangle(1.0).unwrap();
        let a = wb.spectrum(&spec, 64, 5.0, 2, Gauge::Landau).unwrap();
        let b = wb.spectrum(&spec, 64, 5.0, 3, Gauge::Landau).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        assert!(Arc::ptr_eq(
            &wb.prepare(&spec, 64).unwrap(),
            &wb.prepare(&spec, 64).unwrap()
        ));
    }

    #[test]
    fn tolerance_has_slack_floor() {
        assert_eq!(richardson_tolerance(2.0, 2.0), SOLVER_SLACK);
        assert!((richardson_tolerance(3.0, 3.9) - (0.1 + SOLVER_SLACK)).abs() < 1e-15);
    }

    #[test]
    fn low_resolution_rejected() {
        assert!(Workbench::new(16).is_err());
    }
}
