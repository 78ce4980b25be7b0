//! Coupling matrix elements `M1_mn = (S_m|dS_n/dw)` and
//! `M2_mn = (S_m|d2S_n/dw2)` for symmetric rectangular channels.
//!
//! With the overlap of two interior cosines expressed through
//! `F(x) = sin(x)/x`,
//!
//! ```text
//! (S_m(w)|S_n(w')) = G(p_m, p_n)
//!                  = [F((p_m+p_n) a) + F((p_m-p_n) a)]
//!                    / sqrt((1 + F(2 p_m a)) (1 + F(2 p_n a)))
//! ```
//!
//! which is exactly one on the diagonal, so `M1_mm = 0` identically and the
//! matrix elements follow from partial derivatives of `G` and the implicit
//! contour derivatives of `p_n(w)`. All entries inherit the threshold
//! branching singularity of `p_n` at `w = 0`: the elements blow up there and
//! are flagged (not modified) inside the guard window.

use super::{ChannelPoint, ChannelTracker, SturmianError, RECT_A};
use crate::C64;

/// Guard half-width around the threshold; elements evaluated inside are
/// returned as-is but flagged.
pub const OMEGA_GUARD_DEFAULT: f64 = 1e-6;

/// `sin(x)/x`, series-switched for small `|x|` to avoid cancellation.
pub fn sinc(x: C64) -> C64 {
    if x.norm() < 0.5 {
        let x2 = x * x;
        // 1 - x^2/3! + x^4/5! - x^6/7! + x^8/9! - x^10/11!
        let mut s = C64::new(1.0, 0.0);
        let mut term = C64::new(1.0, 0.0);
        for k in 1..=6 {
            term = -term * x2 / ((2 * k) as f64 * (2 * k + 1) as f64);
            s += term;
        }
        s
    } else {
        x.sin() / x
    }
}

/// `d/dx sin(x)/x`.
pub fn sinc_d1(x: C64) -> C64 {
    if x.norm() < 0.5 {
        let x2 = x * x;
        // -x/3 + x^3/30 - x^5/840 + x^7/45360 - x^9/3991680
        x * (-1.0 / 3.0
            + x2 * (1.0 / 30.0 + x2 * (-1.0 / 840.0 + x2 * (1.0 / 45360.0 - x2 / 3991680.0))))
    } else {
        x.cos() / x - x.sin() / (x * x)
    }
}

/// `d2/dx2 sin(x)/x`.
pub fn sinc_d2(x: C64) -> C64 {
    if x.norm() < 0.5 {
        let x2 = x * x;
        C64::new(-1.0 / 3.0, 0.0)
            + x2 * (1.0 / 10.0
                + x2 * (-1.0 / 168.0 + x2 * (1.0 / 6480.0 - x2 / 443520.0)))
    } else {
        let (s, c) = (x.sin(), x.cos());
        -s / x - 2.0 * c / (x * x) + 2.0 * s / (x * x * x)
    }
}

/// Weighted overlap `G(p_m, p_n)` of two normalised symmetric Sturmians.
pub fn overlap(pm: C64, pn: C64) -> C64 {
    let a = RECT_A;
    let num = sinc((pm + pn) * a) + sinc((pm - pn) * a);
    let den = ((1.0 + sinc(2.0 * pm * a)) * (1.0 + sinc(2.0 * pn * a))).sqrt();
    num / den
}

/// `dG/dp_n` at fixed `p_m`.
pub fn overlap_d1(pm: C64, pn: C64) -> C64 {
    let a = RECT_A;
    let num = sinc((pm + pn) * a) + sinc((pm - pn) * a);
    let num_d = a * (sinc_d1((pm + pn) * a) - sinc_d1((pm - pn) * a));
    let fm = 1.0 + sinc(2.0 * pm * a);
    let fn_ = 1.0 + sinc(2.0 * pn * a);
    let fn_d = 2.0 * a * sinc_d1(2.0 * pn * a);
    let den = (fm * fn_).sqrt();
    (num_d - num * fn_d / (2.0 * fn_)) / den
}

/// `d2G/dp_n^2` at fixed `p_m`.
pub fn overlap_d2(pm: C64, pn: C64) -> C64 {
    let a = RECT_A;
    let num = sinc((pm + pn) * a) + sinc((pm - pn) * a);
    let num_d = a * (sinc_d1((pm + pn) * a) - sinc_d1((pm - pn) * a));
    let num_dd = a * a * (sinc_d2((pm + pn) * a) + sinc_d2((pm - pn) * a));
    let fm = 1.0 + sinc(2.0 * pm * a);
    let fn_ = 1.0 + sinc(2.0 * pn * a);
    let fn_d = 2.0 * a * sinc_d1(2.0 * pn * a);
    let fn_dd = 4.0 * a * a * sinc_d2(2.0 * pn * a);
    let den = (fm * fn_).sqrt();
    // G = num * fn^{-1/2} * fm^{-1/2}
    let t1 = num_dd;
    let t2 = -num_d * fn_d / fn_;
    let t3 = num * (0.75 * fn_d * fn_d / (fn_ * fn_) - 0.5 * fn_dd / fn_);
    (t1 + t2 + t3) / den
}

/// Coupling matrices for a set of channels at one contour point.
#[derive(Debug, Clone)]
pub struct CouplingMatrices {
    pub omega: f64,
    pub m1: Vec<Vec<C64>>,
    pub m2: Vec<Vec<C64>>,
    /// Set when `|omega|` is inside the guard window: values are returned
    /// unmodified but the threshold singularity dominates them.
    pub threshold_flagged: bool,
}

/// Evaluate `M1`, `M2` for the given channel points (Appendix-style closed
/// forms through `G` and the implicit `p` derivatives).
pub fn coupling_matrices(points: &[ChannelPoint], omega_guard: f64) -> CouplingMatrices {
    let n = points.len();
    let omega = if n > 0 { points[0].omega } else { 0.0 };
    let mut m1 = vec![vec![C64::new(0.0, 0.0); n]; n];
    let mut m2 = vec![vec![C64::new(0.0, 0.0); n]; n];
    for (i, pi) in points.iter().enumerate() {
        for (j, pj) in points.iter().enumerate() {
            let g1 = overlap_d1(pi.p, pj.p);
            let g2 = overlap_d2(pi.p, pj.p);
            m1[i][j] = if i == j { C64::new(0.0, 0.0) } else { g1 * pj.dp };
            m2[i][j] = g1 * pj.d2p + g2 * pj.dp * pj.dp;
        }
    }
    CouplingMatrices { omega, m1, m2, threshold_flagged: omega.abs() < omega_guard }
}

/// Convenience entry: evaluate matrices for channel indices `0..n_channels`
/// at `omega` using fresh trackers.
pub fn coupling_at(omega: f64, n_channels: usize, omega_guard: f64) -> Result<CouplingMatrices, SturmianError> {
    let mut pts = Vec::with_capacity(n_channels);
    for n in 0..n_channels {
        pts.push(ChannelTracker::new(n).point(omega)?);
    }
    Ok(coupling_matrices(&pts, omega_guard))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sturmian::{rect_point, rect_root, rect_norm};
    use approx::assert_relative_eq;

    fn gauss_legendre_64() -> (Vec<f64>, Vec<f64>) {
        // 64-point rule on [-1, 1] via Newton iteration on Legendre polynomials
        let n = 64;
        let mut xs = vec![0.0; n];
        let mut ws = vec![0.0; n];
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, 0.0);
                for j in 0..n {
                    let p2 = p1;
                    p1 = p0;
                    p0 = ((2 * j + 1) as f64 * x * p1 - j as f64 * p2) / (j + 1) as f64;
                }
                let dp = n as f64 * (x * p0 - p1) / (x * x - 1.0);
                let dx = p0 / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            let (mut p0, mut p1) = (1.0, 0.0);
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * x * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            let dp = n as f64 * (x * p0 - p1) / (x * x - 1.0);
            xs[i] = x;
            ws[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (xs, ws)
    }

    /// Quadrature oracle for the weighted bilinear overlap of interior forms.
    fn overlap_quadrature(pm: C64, pn: C64) -> C64 {
        let (xs, ws) = gauss_legendre_64();
        let (nm, nn) = (rect_norm(pm), rect_norm(pn));
        let mut s = C64::new(0.0, 0.0);
        for (x, w) in xs.iter().zip(&ws) {
            let xv = x * RECT_A;
            // W = 1 inside the unit-width well
            s += *w * RECT_A * (pm * xv).cos() * (pn * xv).cos();
        }
        s / (nm * nn)
    }

    #[test]
    fn overlap_matches_quadrature_and_orthogonality() {
        // orthogonality |(S_m|S_n)| < 1e-8 for m != n over a grid of >= 50
        // omega values spanning [-20, 20]
        let mut checked = 0;
        for i in 0..=54 {
            let w = -20.0 + 40.0 * i as f64 / 54.0;
            if w.abs() < 1e-6 {
                continue;
            }
            let ps: Vec<C64> = (0..3).map(|n| rect_root(w, n).unwrap()).collect();
            for a in 0..3 {
                for b in 0..3 {
                    let g = overlap(ps[a], ps[b]);
                    let q = overlap_quadrature(ps[a], ps[b]);
                    assert!((g - q).norm() < 1e-9, "w={w} ({a},{b}): G={g} quad={q}");
                    if a == b {
                        assert!((g - 1.0).norm() < 1e-10);
                    } else {
                        assert!(g.norm() < 1e-8, "w={w} ({a},{b}): |G| = {}", g.norm());
                    }
                }
            }
            checked += 1;
        }
        assert!(checked >= 50);
    }

    #[test]
    fn overlap_derivatives_match_finite_differences() {
        let pm = rect_root(3.0, 0).unwrap();
        let pn = rect_root(3.0, 1).unwrap();
        let h = 1e-6;
        let pairs: [(fn(C64, C64) -> C64, fn(C64, C64) -> C64); 2] =
            [(overlap, overlap_d1), (overlap_d1, overlap_d2)];
        for (f, d) in pairs {
            let fd = (f(pm, pn + C64::new(h, 0.0)) - f(pm, pn - C64::new(h, 0.0))) / (2.0 * h);
            let an = d(pm, pn);
            assert!((fd - an).norm() < 1e-7 * an.norm().max(1.0), "fd={fd} an={an}");
        }
    }

    #[test]
    fn m1_diagonal_identically_zero() {
        for w in [0.3, -2.0, 5.0, 1e-3] {
            let pts: Vec<_> = (0..3).map(|n| rect_point(w, n).unwrap()).collect();
            // the closed form returns exactly zero on the diagonal; also check
            // the underlying derivative dG/dp_n at the diagonal vanishes
            for pt in &pts {
                assert!(overlap_d1(pt.p, pt.p).norm() < 1e-12, "w={w}");
            }
            let m = coupling_matrices(&pts, OMEGA_GUARD_DEFAULT);
            for i in 0..3 {
                assert_eq!(m.m1[i][i], C64::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn matrices_match_numerical_omega_differentiation() {
        // independent oracle: FD in omega of the normalised interior form,
        // integrated by quadrature
        let (xs, ws) = gauss_legendre_64();
        let sval = |w: f64, n: usize, x: f64| -> C64 {
            let p = rect_root(w, n).unwrap();
            (p * x).cos() / rect_norm(p)
        };
        for (w, m, n) in [(1e-2, 1, 0), (1e-2, 0, 0), (0.7, 0, 1), (-1.3, 2, 0)] {
            let pts: Vec<_> = (0..3).map(|c| rect_point(w, c).unwrap()).collect();
            let mats = coupling_matrices(&pts, OMEGA_GUARD_DEFAULT);
            // step sizes balancing rounding noise against the curvature of the
            // branch-point structure (first/second differences)
            let h1 = 1e-6 * w.abs().max(0.05);
            let h2 = 3e-3 * w.abs();
            let mut m1q = C64::new(0.0, 0.0);
            let mut m2q = C64::new(0.0, 0.0);
            for (x, wt) in xs.iter().zip(&ws) {
                let xv = x * RECT_A;
                let sm = sval(w, m, xv);
                let d1 = (sval(w + h1, n, xv) - sval(w - h1, n, xv)) / (2.0 * h1);
                let d2 = (sval(w + h2, n, xv) - 2.0 * sval(w, n, xv) + sval(w - h2, n, xv)) / (h2 * h2);
                m1q += *wt * RECT_A * sm * d1;
                m2q += *wt * RECT_A * sm * d2;
            }
            assert!(
                (mats.m1[m][n] - m1q).norm() < 2e-4 * m1q.norm() + 5e-9,
                "M1[{m}][{n}] @w={w}: closed={} fd={}",
                mats.m1[m][n],
                m1q
            );
            assert!(
                (mats.m2[m][n] - m2q).norm() < 2e-3 * m2q.norm() + 5e-7,
                "M2[{m}][{n}] @w={w}: closed={} fd={}",
                mats.m2[m][n],
                m2q
            );
        }
    }

    #[test]
    fn matrices_vanish_at_large_omega() {
        let small = coupling_at(2.0, 2, OMEGA_GUARD_DEFAULT).unwrap();
        let large = coupling_at(4.0e3, 2, OMEGA_GUARD_DEFAULT).unwrap();
        let large_neg = coupling_at(-4.0e3, 2, OMEGA_GUARD_DEFAULT).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                if i != j {
                    assert!(large.m1[i][j].norm() < 0.02 * small.m1[i][j].norm().max(1e-3));
                    assert!(large_neg.m1[i][j].norm() < 0.02 * small.m1[i][j].norm().max(1e-3));
                }
            }
        }
        assert!(large.m2[0][0].norm() < 1e-3);
        assert!(large_neg.m2[0][0].norm() < 1e-3);
    }

    #[test]
    fn threshold_flag() {
        let m = coupling_at(1e-8, 2, OMEGA_GUARD_DEFAULT).unwrap();
        assert!(m.threshold_flagged);
        assert!(m.m2[0][0].norm().is_finite());
        let m = coupling_at(1e-3, 2, OMEGA_GUARD_DEFAULT).unwrap();
        assert!(!m.threshold_flagged);
    }

    #[test]
    fn threshold_momentum_exponents() {
        // p_0 ~ w^{1/4}, p_{n!=0} - p_n(0) ~ w^{1/2}
        let fit = |vals: &[(f64, f64)]| -> f64 {
            let n = vals.len() as f64;
            let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
            for &(x, y) in vals {
                let (lx, ly) = (x.ln(), y.ln());
                sx += lx;
                sy += ly;
                sxx += lx * lx;
                sxy += lx * ly;
            }
            (n * sxy - sx * sy) / (n * sxx - sx * sx)
        };
        let mut v0 = Vec::new();
        let mut v1 = Vec::new();
        for i in 0..10 {
            let w = 1e-4 * 10f64.powf(2.0 * i as f64 / 9.0);
            v0.push((w, rect_root(w, 0).unwrap().norm()));
            let p1 = rect_root(w, 1).unwrap();
            let p10 = C64::new(std::f64::consts::PI / RECT_A, 0.0);
            v1.push((w, (p1 - p10).norm()));
        }
        assert_relative_eq!(fit(&v0), 0.25, epsilon = 0.01);
        assert_relative_eq!(fit(&v1), 0.5, epsilon = 0.01);
    }
}
