//! Exact and asymptotic threshold results: the analytic solution of the
//! frequency-space equation when the bound state just touches the continuum,
//! the universal retention constant, and the scattering-length pole model
//! that extends it to arbitrary wells and excited states.

pub mod hankel;

use crate::sturmian::{self, RECT_A};
use crate::C64;
use hankel::{hankel_arg, PolarArg, SpecialFnError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ThresholdError {
    #[error(transparent)]
    SpecialFn(#[from] SpecialFnError),
    #[error("linear window too wide: residual {residual:.3e} after {shrinks} shrinks")]
    FitWindowTooWide { residual: f64, shrinks: usize },
    #[error("sturmian evaluation failed: {0}")]
    Sturmian(#[from] sturmian::SturmianError),
}

/// The universal retention probability `4 cos^2(2 pi/5)` of a state touching
/// the threshold in the slow-passage limit.
pub fn universal_constant() -> f64 {
    let c = (2.0 * std::f64::consts::PI / 5.0).cos();
    4.0 * c * c
}

/// Exact solution of the threshold equation (`E = 0`, zero-range well):
/// `B(w) = sqrt(w) H1_{2/5}(z)`, `z = (4/5) (2/mu)^{1/4} e^{3 pi i/4} w^{5/4} / v`,
/// continued to `w < 0` along the first sheet (total `arg z` reaches `2 pi`).
pub fn analytic_threshold_solution(omega: f64, rate: f64, mass: f64) -> Result<C64, ThresholdError> {
    let nu = 0.4;
    let coef = 0.8 * (2.0 / mass).powf(0.25) / rate;
    let modulus = coef * omega.abs().powf(1.25);
    if modulus == 0.0 {
        return Ok(C64::new(0.0, 0.0));
    }
    let (sqrt_w, total_arg) = if omega >= 0.0 {
        (C64::new(omega.sqrt(), 0.0), 0.75 * std::f64::consts::PI)
    } else {
        // arg w = pi on the first sheet: sqrt(w) = i sqrt(|w|),
        // arg z = 3 pi/4 + 5 pi/4 = 2 pi
        (C64::new(0.0, (-omega).sqrt()), 2.0 * std::f64::consts::PI)
    };
    let h = hankel_arg(nu, 1, PolarArg::new(modulus, total_arg))?;
    Ok(sqrt_w * h)
}

/// Decay constant of the threshold solution, `|B| ~ w^{-1/8} exp(-K w^{5/4})`
/// as `w -> +infinity`.
pub fn threshold_decay_constant(mass: f64) -> f64 {
    2.0_f64.powf(1.75) / (5.0 * mass.powf(0.25))
}

/// Linear pole model of the near-threshold branch: the exterior decay
/// constant of the `m`-th bound state vanishes linearly in the strength,
/// `kappa(rho) ~ C_m (rho0_m - rho)`, which pins the Sturmian branch to
/// `rho_m(w) = rho0_m + i sqrt(2 mu w)/C_m` near `w = 0`.
#[derive(Debug, Clone, Copy)]
pub struct ThresholdPoleModel {
    pub state: usize,
    /// Positive slope magnitude of `kappa` versus strength.
    pub c_m: f64,
    /// Critical strength at which state `m` touches the threshold.
    pub rho0: f64,
    /// Residual of the linear fit over the fitted window (relative).
    pub fit_residual: f64,
    /// Fitted window half-width in strength.
    pub window: f64,
}

impl ThresholdPoleModel {
    pub fn kappa(&self, rho: f64) -> f64 {
        self.c_m * (self.rho0 - rho)
    }

    /// Scattering length `-1/kappa`; diverges and changes sign across the
    /// critical strength.
    pub fn scattering_length(&self, rho: f64) -> f64 {
        -1.0 / self.kappa(rho)
    }

    /// Predicted Sturmian branch near threshold.
    pub fn rho_predicted(&self, omega: f64) -> C64 {
        self.rho0 + C64::i() * sturmian::k_of_omega(omega, 1.0) / self.c_m
    }
}

/// Critical strength of the `m`-th even rectangular state (internal units
/// `mu = 1`, `a = 1/2`).
pub fn rect_critical_strength(m: usize) -> f64 {
    let mpi = m as f64 * std::f64::consts::PI;
    -2.0 * mpi * mpi
}

/// Exterior decay constant of the `m`-th even rectangular bound state at
/// strength `rho < rho0_m` (internal units), from the quantisation condition.
pub fn rect_kappa(rho: f64, m: usize) -> f64 {
    let depth = -rho; // interior |V| at a = 1/2
    let l_max = (2.0 * depth).sqrt();
    let a = RECT_A;
    // m-th even root: la in (m pi, m pi + pi/2), tan(la) = kappa/l
    let g = |la: f64| -> f64 {
        let l = la / a;
        let k2 = l_max * l_max - l * l;
        if k2 <= 0.0 {
            return -1.0;
        }
        la.tan() - k2.sqrt() / l
    };
    let mpi = m as f64 * std::f64::consts::PI;
    let (mut lo, mut hi) = (mpi + 1e-14, (mpi + std::f64::consts::FRAC_PI_2 - 1e-14).min(l_max * a - 1e-15));
    if hi <= lo {
        return 0.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let l = 0.5 * (lo + hi) / a;
    (l_max * l_max - l * l).sqrt()
}

/// Fit the linear pole model for the `m`-th even rectangular state by
/// sampling `kappa(rho)` just below the critical strength. The window is
/// shrunk until the linear residual is below `1e-3`.
pub fn fit_threshold_pole(m: usize) -> Result<ThresholdPoleModel, ThresholdError> {
    let rho0 = rect_critical_strength(m);
    let mut window = 0.05 * rho0.abs().max(1.0);
    for shrinks in 0..8 {
        let npts = 24;
        let mut xs = Vec::with_capacity(npts);
        let mut ys = Vec::with_capacity(npts);
        for i in 0..npts {
            let rho = rho0 - window + window * 0.95 * i as f64 / (npts - 1) as f64;
            xs.push(rho);
            ys.push(rect_kappa(rho, m));
        }
        // affine least squares kappa = c0 + c1 rho
        let n = npts as f64;
        let sx: f64 = xs.iter().sum();
        let sy: f64 = ys.iter().sum();
        let sxx: f64 = xs.iter().map(|x| x * x).sum();
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| x * y).sum();
        let c1 = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        let c0 = (sy - c1 * sx) / n;
        let kmax = ys.iter().cloned().fold(0.0, f64::max);
        let residual = xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| (y - (c0 + c1 * x)).abs())
            .fold(0.0, f64::max)
            / kmax.max(1e-300);
        if residual < 1e-3 {
            return Ok(ThresholdPoleModel {
                state: m,
                c_m: -c1,
                rho0: -c0 / c1, // fitted critical strength (kappa = 0)
                fit_residual: residual,
                window,
            });
        }
        window *= 0.5;
        if shrinks == 7 {
            return Err(ThresholdError::FitWindowTooWide { residual, shrinks });
        }
    }
    unreachable!()
}
