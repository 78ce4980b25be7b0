//! Trap shapes, the quadratic passage, dimensionless scalings and adiabatic
//! bound states.
//!
//! The potential is `V(x,t) = s(t) W(x)` with the depth factor
//! `s(t) = E - v^2 t^2` and a unit-normalised profile, `int W(x) dx = 1`.
//! Negative `s` means an attractive well; the well is deep in the distant
//! past and future and shallowest at `t = 0`. Depending on the sign of the
//! threshold offset `E` the bound state turns below threshold (`E < 0`),
//! touches it (`E = 0`) or disappears on `|t| < sqrt(E)/v` (`E > 0`).
//!
//! All solvers work in scaled units internally (`mu = 1`, and for the
//! rectangular well additionally `a = 1/2`); this module owns the
//! conversions.

use std::f64::consts::PI;
use thiserror::Error;

/// Threshold interaction energy scale is `mu^{1/5} v^{4/5}`; dynamics start
/// where the bound energy is at least this many interaction scales deep.
pub const TMIN_ENERGY_FACTOR: f64 = 50.0;

#[derive(Debug, Error, PartialEq)]
pub enum TrapError {
    #[error("no bound state: depth factor {depth:.6e} is not attractive at t={t:.6e}")]
    NoBoundState { t: f64, depth: f64 },
    #[error("invalid trap spec: {0}")]
    InvalidSpec(String),
}

/// Spatial profile of the well. Finite-range profiles vanish for `|x| > a`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TrapShape {
    /// `W(x) = delta(x)`.
    ZeroRange,
    /// `W(x) = 1/(2a)` on `|x| <= a`.
    Rectangular { half_width: f64 },
    /// `W(x) = 1.5 x^2 / a^3` on `|x| <= a` (zero at the centre, maximal at
    /// the edges; integrates to one exactly).
    ParabolicCutoff { half_width: f64 },
}

impl TrapShape {
    pub fn half_width(&self) -> Option<f64> {
        match *self {
            TrapShape::ZeroRange => None,
            TrapShape::Rectangular { half_width } | TrapShape::ParabolicCutoff { half_width } => {
                Some(half_width)
            }
        }
    }

    /// Normalised profile value `W(x)`; `None` for the distributional shape.
    pub fn profile(&self, x: f64) -> Option<f64> {
        match *self {
            TrapShape::ZeroRange => None,
            TrapShape::Rectangular { half_width: a } => {
                Some(if x.abs() <= a { 1.0 / (2.0 * a) } else { 0.0 })
            }
            TrapShape::ParabolicCutoff { half_width: a } => Some(if x.abs() <= a {
                1.5 * x * x / (a * a * a)
            } else {
                0.0
            }),
        }
    }
}

/// Value of the potential at a point, distinguishing the distributional part
/// of the zero-range shape from plain values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PotentialTerm {
    Value(f64),
    /// A `strength * delta(x)` spike at the origin.
    DeltaSpike { strength: f64 },
}

/// Physical definition of the problem: shape, particle mass and the
/// quadratic passage parameters.
///
/// `threshold_offset` is the depth-factor strength `E` multiplying the
/// unit-normalised profile (units energy x length), `rate` is `v` in
/// `s(t) = E - v^2 t^2`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TrapSpec {
    pub shape: TrapShape,
    pub mass: f64,
    pub threshold_offset: f64,
    pub rate: f64,
}

impl TrapSpec {
    pub fn new(shape: TrapShape, mass: f64, threshold_offset: f64, rate: f64) -> Result<Self, TrapError> {
        if !(mass > 0.0) {
            return Err(TrapError::InvalidSpec(format!("mass must be positive, got {mass}")));
        }
        if !(rate > 0.0) {
            return Err(TrapError::InvalidSpec(format!("rate must be positive, got {rate}")));
        }
        if let Some(a) = shape.half_width() {
            if !(a > 0.0) {
                return Err(TrapError::InvalidSpec(format!("half width must be positive, got {a}")));
            }
        }
        Ok(TrapSpec { shape, mass, threshold_offset, rate })
    }

    /// Zero-range spec in scaled units (`mu = 1`, `v = 1`) with `E = gamma`.
    pub fn zero_range_gamma(gamma: f64) -> Self {
        TrapSpec { shape: TrapShape::ZeroRange, mass: 1.0, threshold_offset: gamma, rate: 1.0 }
    }

    /// Rectangular spec in scaled units (`mu = 1`, `a = 1/2`) where the
    /// barred depth and rate are plain numbers.
    pub fn rectangular_scaled(e_bar: f64, v_bar: f64) -> Self {
        TrapSpec {
            shape: TrapShape::Rectangular { half_width: 0.5 },
            mass: 1.0,
            threshold_offset: e_bar,
            rate: v_bar,
        }
    }

    /// Depth factor `s(t) = E - v^2 t^2` multiplying `W(x)`.
    pub fn depth_factor(&self, t: f64) -> f64 {
        self.threshold_offset - self.rate * self.rate * t * t
    }

    /// `V(x,t) = s(t) W(x)`; negative values are attractive.
    pub fn potential_at(&self, x: f64, t: f64) -> PotentialTerm {
        let s = self.depth_factor(t);
        match self.shape.profile(x) {
            Some(w) => PotentialTerm::Value(s * w),
            None => {
                if x == 0.0 {
                    PotentialTerm::DeltaSpike { strength: s }
                } else {
                    PotentialTerm::Value(0.0)
                }
            }
        }
    }

    pub fn scaling(&self) -> ScalingParams {
        ScalingParams::for_spec(self)
    }

    /// Earliest start time for dynamics: `|E_m(t)|` is at least
    /// [`TMIN_ENERGY_FACTOR`] threshold interaction scales deep there.
    pub fn dynamics_start_time(&self) -> f64 {
        let scale = self.scaling().tau_scale; // energy scale mu^{1/5} v^{4/5}
        let target = TMIN_ENERGY_FACTOR * scale;
        match self.shape {
            TrapShape::ZeroRange => {
                // |E_0| = mu s^2/2 >= target  =>  -s >= sqrt(2 target / mu)
                let s_needed = (2.0 * target / self.mass).sqrt();
                -((self.threshold_offset + s_needed) / (self.rate * self.rate))
                    .max(0.0)
                    .sqrt()
            }
            TrapShape::Rectangular { half_width: a } | TrapShape::ParabolicCutoff { half_width: a } => {
                // deep well: |E_0| ~ depth of the well interior minus the box level
                let box0 = PI * PI / (8.0 * self.mass * a * a);
                let v_in_needed = target + box0; // |V_in| = -s/(2a)
                let s_needed = v_in_needed * 2.0 * a;
                -((self.threshold_offset + s_needed) / (self.rate * self.rate))
                    .max(0.0)
                    .sqrt()
            }
        }
    }
}

/// Dimensionless groups of the quadratic passage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingParams {
    /// `gamma = E mu^{2/5} v^{-2/5}`, the single parameter of the zero-range
    /// problem.
    pub gamma: f64,
    /// Inverse time scale `mu^{1/5} v^{4/5}` (also the threshold interaction
    /// energy scale).
    pub tau_scale: f64,
    /// Inverse length scale `mu^{3/5} v^{2/5}`.
    pub y_scale: f64,
    /// Barred depth/rate of the finite well, `(e_bar, v_bar)`; `None` for the
    /// zero-range shape.
    pub rect: Option<(f64, f64)>,
}

impl ScalingParams {
    pub fn for_spec(spec: &TrapSpec) -> Self {
        let mu = spec.mass;
        let v = spec.rate;
        let e = spec.threshold_offset;
        let gamma = e * mu.powf(0.4) * v.powf(-0.4);
        let tau_scale = mu.powf(0.2) * v.powf(0.8);
        let y_scale = mu.powf(0.6) * v.powf(0.4);
        let rect = spec.shape.half_width().map(|a| {
            // Dimensionless depth/rate of a unit-width (a = 1/2), unit-mass
            // well; for a = 1/2 these reduce to the conventional
            // 4 mu a^2 E and 8 mu^{3/2} a^3 v.
            let e_bar = 2.0 * mu * a * e;
            let v_bar = 4.0 * 2.0_f64.sqrt() * mu.powf(1.5) * a.powf(2.5) * v;
            (e_bar, v_bar)
        });
        ScalingParams { gamma, tau_scale, y_scale, rect }
    }
}

/// One instantaneous bound state of the well at a fixed time.
#[derive(Debug, Clone)]
pub struct AdiabaticState {
    pub index: usize,
    pub energy: f64,
    form: StateForm,
}

#[derive(Debug, Clone)]
enum StateForm {
    /// `sqrt(kappa) exp(-kappa |x|)`.
    ZeroRange { kappa: f64 },
    /// `c_in cos(l x)` inside, `c_in cos(l a) exp(-kappa (|x|-a))` outside.
    RectangularEven { l: f64, kappa: f64, a: f64, c_in: f64 },
}

impl AdiabaticState {
    /// Normalised wavefunction amplitude at `x`.
    pub fn eval(&self, x: f64) -> f64 {
        match self.form {
            StateForm::ZeroRange { kappa } => kappa.sqrt() * (-kappa * x.abs()).exp(),
            StateForm::RectangularEven { l, kappa, a, c_in } => {
                if x.abs() <= a {
                    c_in * (l * x).cos()
                } else {
                    c_in * (l * a).cos() * (-kappa * (x.abs() - a)).exp()
                }
            }
        }
    }

    /// Exterior decay constant (log-derivative magnitude outside the well).
    pub fn kappa(&self) -> f64 {
        match self.form {
            StateForm::ZeroRange { kappa } => kappa,
            StateForm::RectangularEven { kappa, .. } => kappa,
        }
    }
}

/// Bound state of the zero-range well at time `t`.
///
/// The well is attractive when the depth factor is negative;
/// `kappa = -mu s(t)` and `E_0 = -mu s(t)^2 / 2`.
pub fn bound_state_zero_range(spec: &TrapSpec, t: f64) -> Result<AdiabaticState, TrapError> {
    debug_assert!(matches!(spec.shape, TrapShape::ZeroRange));
    let s = spec.depth_factor(t);
    if s >= 0.0 {
        return Err(TrapError::NoBoundState { t, depth: s });
    }
    let kappa = -spec.mass * s;
    Ok(AdiabaticState {
        index: 0,
        energy: -kappa * kappa / (2.0 * spec.mass),
        form: StateForm::ZeroRange { kappa },
    })
}

/// All even-parity bound states of the rectangular well at time `t`, energies
/// strictly increasing.
pub fn bound_states_rectangular(spec: &TrapSpec, t: f64) -> Result<Vec<AdiabaticState>, TrapError> {
    let a = match spec.shape {
        TrapShape::Rectangular { half_width } => half_width,
        _ => return Err(TrapError::InvalidSpec("not a rectangular shape".into())),
    };
    let s = spec.depth_factor(t);
    if s >= 0.0 {
        return Err(TrapError::NoBoundState { t, depth: s });
    }
    let mu = spec.mass;
    let depth = -s / (2.0 * a); // interior |V|
    let l_max = (2.0 * mu * depth).sqrt();
    let mut states = Vec::new();
    let mut n = 0;
    while (n as f64) * PI < l_max * a {
        let l = even_root(l_max, a, n);
        let energy = l * l / (2.0 * mu) - depth;
        let kappa = (-2.0 * mu * energy).sqrt();
        // normalisation: c^2 [a + sin(2la)/(2l)] + c^2 cos^2(la)/kappa = 1
        let inside = a + (2.0 * l * a).sin() / (2.0 * l);
        let outside = (l * a).cos().powi(2) / kappa;
        let c_in = 1.0 / (inside + outside).sqrt();
        states.push(AdiabaticState {
            index: n,
            energy,
            form: StateForm::RectangularEven { l, kappa, a, c_in },
        });
        n += 1;
    }
    if states.is_empty() {
        return Err(TrapError::NoBoundState { t, depth: s });
    }
    Ok(states)
}

/// Even-state quantisation `tan(l a) = kappa / l` with
/// `kappa = sqrt(l_max^2 - l^2)`; the `n`-th root has `l a` in
/// `(n pi, n pi + pi/2)`.
fn even_root(l_max: f64, a: f64, n: usize) -> f64 {
    let g = |la: f64| -> f64 {
        let l = la / a;
        let kappa2 = l_max * l_max - l * l;
        if kappa2 <= 0.0 {
            return -1.0; // past the entry edge: treat as negative side
        }
        la.tan() - kappa2.sqrt() / l
    };
    let mut lo = n as f64 * PI + 1e-12;
    let mut hi = ((n as f64 * PI + PI / 2.0) - 1e-12).min(l_max * a - 1e-15);
    if hi <= lo {
        hi = lo + 1e-12;
    }
    // g(lo) < 0 (tan ~ 0+, kappa/l > 0), g(hi) > 0 or the state is marginal
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi) / a
}

/// Depth factor at which the `n`-th even state enters the rectangular well
/// (interior value; the state is bound for `-s/(2a) > entry`).
pub fn rectangular_entry_depth(mass: f64, a: f64, n: usize) -> f64 {
    let np = n as f64 * PI;
    np * np / (2.0 * mass * a * a)
}

/// Interval(s) of existence of bound state `m`. For the quadratic passage
/// the state exists outside a symmetric window `|t| < t_gap` (possibly empty).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExistenceWindow {
    /// Half-width of the gap around `t = 0` where the state does not exist;
    /// zero when the state exists at all times.
    pub t_gap: f64,
}

pub fn existence_window(spec: &TrapSpec, m: usize) -> ExistenceWindow {
    let v2 = spec.rate * spec.rate;
    let gap2 = match spec.shape {
        TrapShape::ZeroRange => spec.threshold_offset / v2,
        TrapShape::Rectangular { half_width: a } | TrapShape::ParabolicCutoff { half_width: a } => {
            let entry = rectangular_entry_depth(spec.mass, a, m) * 2.0 * a;
            (spec.threshold_offset + entry) / v2
        }
    };
    ExistenceWindow { t_gap: gap2.max(0.0).sqrt() }
}
