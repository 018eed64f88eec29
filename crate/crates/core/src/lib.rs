//! Finite-scale laboratory for almost periodic points of symbolic systems
//! over the integers.
//!
//! The crate is organised bottom-up:
//!
//! * [`mean`]: Følner schedules, window averages and admissible seminorms;
//! * [`systems`]: point generators, cylinder observables and orbit metrics;
//! * [`almostper`]: averaged metrics, almost-period scans and the point
//!   classifier;
//! * [`spectral`]: Fourier–Bohr coefficients, frequency detection, Parseval
//!   defects and eigenfunction samples;
//! * [`diffraction`]: weighted combs, autocorrelation, diffraction density
//!   and atom estimates.
//!
//! Numerical code is generic over the scalar type; the aliases below fix it
//! to `f64`, which is what the command line front end uses.

pub mod almostper;
pub mod diffraction;
pub mod error;
pub mod mean;
pub mod scalar;
pub mod spectral;
pub mod systems;

pub use error::{Error, Result};
pub use scalar::{Real, Scalar, Value};

use num_complex::Complex64;

pub type Estimate = mean::MeanEstimate<f64, Complex64>;
pub type RealEstimate = mean::MeanEstimate<f64, f64>;
pub type Obs = systems::Observable<f64>;
pub type Metric = systems::CylinderMetric<f64>;
pub type Grid = spectral::FourierBohrGrid<f64>;
pub type Spectrum = spectral::SpectralReport<f64>;
pub type Comb = diffraction::WeightedComb<f64>;
pub type Autocorr = diffraction::AutocorrEstimate<f64>;
pub type Density = diffraction::DiffractionDensity<f64>;
pub type Scan = almostper::AlmostPeriodScan<f64>;
pub type Budget = almostper::ScanBudget<f64>;
