//! Sturmian eigenvalue branches `rho_n(omega)` and eigenfunctions.
//!
//! A Sturmian at energy `omega` is a solution of the stationary equation with
//! the *potential strength* as eigenvalue: `-S''/2mu + rho W(x) S = omega S`,
//! subject to outgoing (`omega > 0`) or decaying (`omega < 0`) boundary
//! conditions. The contour is the real `omega` axis approached from above the
//! cut of `sqrt(omega)` on the first Riemann sheet, so
//! `k(omega) = sqrt(2 mu omega)` is positive real for `omega > 0` and
//! `+i sqrt(2 mu |omega|)` for `omega < 0`.
//!
//! For the zero-range well there is a single branch, `rho_0 = i k / mu`. For
//! the rectangular well (internal units `mu = 1`, `a = 1/2`) the symmetric
//! branches solve `p sin(pa) + i k cos(pa) = 0` with
//! `p = sqrt(2(omega - rho))`; branches are labelled by the sequential index
//! `n = 0, 1, 2, ...` of the symmetric states and connect continuously to the
//! box modes `p a -> (2n+1) pi/2` as `omega -> -infinity`.

pub mod coupling;

use crate::C64;
use thiserror::Error;

/// Internal rectangular half-width (unit-width well).
pub const RECT_A: f64 = 0.5;

#[derive(Debug, Error)]
pub enum SturmianError {
    #[error("branch continuation lost the root for channel {channel} near omega={omega:.6e} (residual {residual:.3e})")]
    ContinuationFailure { channel: usize, omega: f64, residual: f64 },
    #[error("channel budget exceeded: requested {requested} channels, constructed {constructed}")]
    ChannelBudgetExceeded { requested: usize, constructed: usize },
}

/// `sqrt(z)` on the first sheet: cut along the positive real axis, approached
/// from above (`arg z` in `[0, 2pi)`), so negative reals map to `+i sqrt(|z|)`.
pub fn sqrt_first_sheet(z: C64) -> C64 {
    let mut arg = z.arg(); // (-pi, pi]
    if arg < 0.0 {
        arg += 2.0 * std::f64::consts::PI;
    }
    let r = z.norm().sqrt();
    C64::from_polar(r, 0.5 * arg)
}

/// External momentum `k(omega) = sqrt(2 mu omega)` on the contour.
pub fn k_of_omega(omega: f64, mass: f64) -> C64 {
    if omega >= 0.0 {
        C64::new((2.0 * mass * omega).sqrt(), 0.0)
    } else {
        C64::new(0.0, (-2.0 * mass * omega).sqrt())
    }
}

/// Zero-range Sturmian eigenvalue `rho_0(omega) = i sqrt(2 omega / mu)` on
/// the contour: emitting (`Im rho > 0`) for `omega > 0`, real negative for
/// `omega < 0` (the strength whose bound state sits at `omega`).
pub fn rho_zero_range(omega: f64, mass: f64) -> C64 {
    C64::i() * k_of_omega(omega, mass) / mass
}

/// Same branch for complex `omega` on the first sheet.
pub fn rho_zero_range_complex(omega: C64, mass: f64) -> C64 {
    C64::i() * sqrt_first_sheet(2.0 * omega / mass)
}

/// Quantisation function for symmetric rectangular Sturmians,
/// `f(p) = p sin(pa) + i k cos(pa)`; roots of `f` are the branches.
fn f_rect(p: C64, k: C64) -> C64 {
    p * (p * RECT_A).sin() + C64::i() * k * (p * RECT_A).cos()
}

fn f_rect_dp(p: C64, k: C64) -> C64 {
    let (s, c) = ((p * RECT_A).sin(), (p * RECT_A).cos());
    s + p * RECT_A * c - C64::i() * k * RECT_A * s
}

fn newton_p(mut p: C64, k: C64) -> Option<C64> {
    for _ in 0..80 {
        let d = f_rect(p, k) / f_rect_dp(p, k);
        p -= d;
        if d.norm() < 1e-14 * p.norm().max(1.0) {
            return Some(p);
        }
    }
    None
}

/// Real root for `omega < 0`: `p a` bracketed in `(n pi, n pi + pi/2)`,
/// bisection on `tan(pa) - kappa/p` then a Newton polish.
fn root_negative(omega: f64, n: usize) -> C64 {
    let kappa = (-2.0 * omega).sqrt();
    let g = |pa: f64| -> f64 {
        let p = pa / RECT_A;
        pa.tan() - kappa / p
    };
    let npi = n as f64 * std::f64::consts::PI;
    let (mut lo, mut hi) = (npi + 1e-13, npi + std::f64::consts::FRAC_PI_2 - 1e-13);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if g(mid) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let seed = C64::new(0.5 * (lo + hi) / RECT_A, 0.0);
    newton_p(seed, C64::new(0.0, kappa)).unwrap_or(seed)
}

/// Near-threshold seeds: `p_0^2 ~ -ik/a`, `p_n ~ n pi/a - ik/(n pi)`.
fn root_near_threshold(omega: f64, n: usize) -> Option<C64> {
    let k = k_of_omega(omega, 1.0);
    if n == 0 {
        // Newton in P = p^2 on g(P) = P a sinc(pa) + i k cos(pa), regular at P = 0
        let mut pp = -C64::i() * k / RECT_A;
        for _ in 0..80 {
            let p = pp.sqrt();
            let x = p * RECT_A;
            let sinc = if x.norm() < 1e-8 { C64::new(1.0, 0.0) } else { x.sin() / x };
            let g = pp * RECT_A * sinc + C64::i() * k * x.cos();
            // dg/dP via dp/dP = 1/(2p); all terms even in p
            let dsinc = if x.norm() < 1e-8 {
                -x / 3.0
            } else {
                x.cos() / x - x.sin() / (x * x)
            };
            let dg = RECT_A * sinc
                + pp * RECT_A * dsinc * (RECT_A / (2.0 * p))
                - C64::i() * k * x.sin() * (RECT_A / (2.0 * p));
            let d = g / dg;
            pp -= d;
            if d.norm() < 1e-15 * pp.norm().max(1e-30) {
                return Some(pp.sqrt());
            }
        }
        None
    } else {
        let npi = n as f64 * std::f64::consts::PI;
        let seed = C64::new(npi / RECT_A, 0.0) - C64::i() * k / npi;
        newton_p(seed, k)
    }
}

/// Stateless branch evaluation: solve for `p_n(omega)` on the physical branch.
///
/// For `omega > 0` the branch is reached by continuing the real root at
/// `-omega` along the quarter circle `k = |k| e^{i theta}`, `theta: pi/2 -> 0`
/// (fixed `|k|` keeps the path clear of the threshold branch point).
pub fn rect_root(omega: f64, n: usize) -> Result<C64, SturmianError> {
    let p = if omega == 0.0 {
        Some(C64::new(n as f64 * std::f64::consts::PI / RECT_A, 0.0))
    } else if omega < 0.0 {
        Some(root_negative(omega, n))
    } else if omega < 0.25 {
        root_near_threshold(omega, n)
    } else {
        let kmod = (2.0 * omega).sqrt();
        let mut p = root_negative(-omega, n);
        let mut nstep = 16usize;
        'outer: loop {
            let mut pj = p;
            let mut ok = true;
            for j in 1..=nstep {
                let th = std::f64::consts::FRAC_PI_2 * (1.0 - j as f64 / nstep as f64);
                let k = C64::from_polar(kmod, th);
                match newton_p(pj, k) {
                    Some(next) if (next - pj).norm() < 1.5 => pj = next,
                    _ => {
                        ok = false;
                    }
                }
                if !ok {
                    break;
                }
            }
            if ok {
                p = pj;
                break 'outer;
            }
            nstep *= 2;
            if nstep > 1024 {
                return Err(SturmianError::ContinuationFailure {
                    channel: n,
                    omega,
                    residual: f64::NAN,
                });
            }
        }
        Some(p)
    };
    let p = p.ok_or(SturmianError::ContinuationFailure { channel: n, omega, residual: f64::NAN })?;
    let k = k_of_omega(omega, 1.0);
    let res = f_rect(p, k).norm() / p.norm().max(k.norm()).max(1.0);
    if res > 1e-11 {
        return Err(SturmianError::ContinuationFailure { channel: n, omega, residual: res });
    }
    Ok(p)
}

/// Branch point data at one `omega` for a rectangular channel: the internal
/// momentum with its contour derivatives, and the eigenvalue
/// `rho = omega - p^2 / 2`.
#[derive(Debug, Clone, Copy)]
pub struct ChannelPoint {
    pub omega: f64,
    pub p: C64,
    pub dp: C64,
    pub d2p: C64,
    pub rho: C64,
    pub drho: C64,
    pub d2rho: C64,
}

/// Implicit contour derivatives of `p(omega)` from the quantisation function
/// (`k' = 1/k`, `k'' = -1/k^3` at `mu = 1`). They carry the threshold
/// branching singularity and blow up as `omega -> 0`.
pub fn rect_point(omega: f64, n: usize) -> Result<ChannelPoint, SturmianError> {
    let p = rect_root(omega, n)?;
    let k = k_of_omega(omega, 1.0);
    let (s, c) = ((p * RECT_A).sin(), (p * RECT_A).cos());
    let a = RECT_A;
    let fp = s + p * a * c - C64::i() * k * a * s;
    let fpp = 2.0 * a * c - p * a * a * s - C64::i() * k * a * a * c;
    let fk = C64::i() * c;
    let fpk = -C64::i() * a * s;
    let kp = 1.0 / k;
    let kpp = -1.0 / (k * k * k);
    let fw = fk * kp;
    let fww = fk * kpp;
    let fpw = fpk * kp;
    let dp = -fw / fp;
    let d2p = -(fpp * dp * dp + 2.0 * fpw * dp + fww) / fp;
    let rho = omega - p * p / 2.0;
    let drho = 1.0 - p * dp;
    let d2rho = -(dp * dp + p * d2p);
    Ok(ChannelPoint { omega, p, dp, d2p, rho, drho, d2rho })
}

/// Rectangular eigenvalue on the physical branch (internal units).
pub fn rho_rectangular(omega: f64, n: usize) -> Result<C64, SturmianError> {
    let p = rect_root(omega, n)?;
    Ok(omega - p * p / 2.0)
}

/// One eigenvalue branch with a continuation cache for fast near-monotone
/// sweeps (as performed by the reflection integrator). The cached state only
/// accelerates the stateless solve and never changes which branch is found:
/// any suspect step falls back to [`rect_root`].
#[derive(Debug, Clone)]
pub struct ChannelTracker {
    pub n: usize,
    last: Option<(f64, C64)>,
}

impl ChannelTracker {
    pub fn new(n: usize) -> Self {
        ChannelTracker { n, last: None }
    }

    pub fn point(&mut self, omega: f64) -> Result<ChannelPoint, SturmianError> {
        if let Some((w0, p0)) = self.last {
            let dw = (omega - w0).abs();
            let near_threshold = omega.abs() < 0.02 || w0.abs() < 0.02;
            let crosses = (omega >= 0.0) != (w0 >= 0.0);
            if dw < 0.05 * (1.0 + omega.abs().sqrt()) && !near_threshold && !crosses {
                if let Some(p) = newton_p(p0, k_of_omega(omega, 1.0)) {
                    if (p - p0).norm() < 1.0 {
                        let res = f_rect(p, k_of_omega(omega, 1.0)).norm() / p.norm().max(1.0);
                        if res < 1e-11 {
                            self.last = Some((omega, p));
                            return point_from_p(omega, p);
                        }
                    }
                }
            }
        }
        let pt = rect_point(omega, self.n)?;
        self.last = Some((omega, pt.p));
        Ok(pt)
    }
}

fn point_from_p(omega: f64, p: C64) -> Result<ChannelPoint, SturmianError> {
    let k = k_of_omega(omega, 1.0);
    let a = RECT_A;
    let (s, c) = ((p * a).sin(), (p * a).cos());
    let fp = s + p * a * c - C64::i() * k * a * s;
    let fpp = 2.0 * a * c - p * a * a * s - C64::i() * k * a * a * c;
    let fk = C64::i() * c;
    let fpk = -C64::i() * a * s;
    let kp = 1.0 / k;
    let kpp = -1.0 / (k * k * k);
    let dp = -(fk * kp) / fp;
    let d2p = -(fpp * dp * dp + 2.0 * (fpk * kp) * dp + fk * kpp) / fp;
    Ok(ChannelPoint {
        omega,
        p,
        dp,
        d2p,
        rho: omega - p * p / 2.0,
        drho: 1.0 - p * dp,
        d2rho: -(dp * dp + p * d2p),
    })
}

/// Normalisation constant `N` with `(S_n|S_n) = 1` in the weighted bilinear
/// form: `N^2 = (1 + F(2 p a)) / 2` where `F(x) = sin(x)/x` (at `a = 1/2`
/// the argument is just `p`).
pub fn rect_norm(p: C64) -> C64 {
    ((1.0 + coupling::sinc(2.0 * p * RECT_A)) / 2.0).sqrt()
}

/// Sturmian eigenfunction value. Zero-range: `S_0 = exp(i k |x|)` with
/// `S_0(0) = 1`. Rectangular: `cos(p x)/N` inside, matched outgoing/decaying
/// exponential outside.
pub fn sturmian_function(shape: Shape, n: usize, x: f64, omega: f64) -> Result<C64, SturmianError> {
    match shape {
        Shape::ZeroRange => {
            let k = k_of_omega(omega, 1.0);
            Ok((C64::i() * k * x.abs()).exp())
        }
        Shape::Rectangular => {
            let p = rect_root(omega, n)?;
            let norm = rect_norm(p);
            let k = k_of_omega(omega, 1.0);
            if x.abs() <= RECT_A {
                Ok((p * x).cos() / norm)
            } else {
                Ok((p * RECT_A).cos() / norm * (C64::i() * k * (x.abs() - RECT_A)).exp())
            }
        }
    }
}

/// Shape selector for the two families with Sturmian machinery.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    ZeroRange,
    Rectangular,
}
