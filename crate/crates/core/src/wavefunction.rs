//! Momentum eigenstates `ψ_n(s) = B_n s^{γ₁} (1 - s)^{1/R} P_n^{(2γ₁, 2/R - 1)}(1 - 2s)`.
//!
//! The states live on `s ∈ (0, 1)`, i.e. `t ∈ (t_s, ∞)` between the
//! singular time and infinity, where both boundary factors vanish. Only
//! `q > 0` maps time onto positive `s`.

use crate::closed_form::QuantizedState;
use crate::error::{Error, Result};
use crate::potential::GeneralMolecularPotential;
use crate::special::{gauss_legendre, jacobi_unchecked};

/// Amplitude below which the tail of `|ψ|` is dropped from the integration window.
pub const TAIL_CUTOFF: f64 = 1e-12;
/// Relative change of the norm at which panel doubling stops.
pub const NORM_TOLERANCE: f64 = 1e-10;
const QUADRATURE_POINTS: usize = 128;
const MAX_PANELS: usize = 1 << 12;

/// A point `s ∈ (0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SCoordinate(f64);

impl SCoordinate {
    pub fn new(s: f64) -> Result<Self> {
        if s > 0.0 && s < 1.0 {
            Ok(SCoordinate(s))
        } else {
            Err(Error::Domain(format!("s = {s} is not in (0, 1)")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// `ln |ψ|` pieces for a state at `ln s`; returns `(log_envelope, jacobi)`.
fn log_parts(state: &QuantizedState, ln_s: f64) -> (f64, f64) {
    let s = ln_s.exp();
    let one_minus = -ln_s.exp_m1();
    let log_env = state.gamma1 * ln_s + state.inv_r * one_minus.ln();
    let jac = jacobi_unchecked(state.n, state.jacobi_a, state.jacobi_b, 1.0 - 2.0 * s);
    (log_env, jac)
}

fn eval_log_s(state: &QuantizedState, ln_s: f64) -> f64 {
    if ln_s == 0.0 || ln_s == f64::NEG_INFINITY {
        return 0.0;
    }
    let (log_env, jac) = log_parts(state, ln_s);
    log_env.exp() * jac
}

/// `s^{γ₁}(1 - s)^{1/R} P_n^{(2γ₁, 2/R-1)}(1 - 2s)`.
pub fn eval_unnormalized(state: &QuantizedState, s: SCoordinate) -> Result<f64> {
    state.require_bound()?;
    Ok(eval_log_s(state, s.0.ln()))
}

fn ln_s_of_t(p: &GeneralMolecularPotential, t: f64) -> Result<f64> {
    if p.q <= 0.0 {
        return Err(Error::Domain(format!(
            "closed-form wavefunctions need q > 0 (got q = {})",
            p.q
        )));
    }
    let ln_s = p.q.ln() - p.alpha * (t - p.t_e);
    if ln_s > 0.0 {
        return Err(Error::Domain(format!(
            "t = {t} lies before the singular time (s = {} > 1)",
            ln_s.exp()
        )));
    }
    Ok(ln_s)
}

/// Unnormalized `ψ_n` at time `t`. The boundary `s = 1` and the `t → ∞`
/// limit evaluate to 0; `s > 1` is an error.
pub fn eval_t(state: &QuantizedState, p: &GeneralMolecularPotential, t: f64) -> Result<f64> {
    state.require_bound()?;
    Ok(eval_log_s(state, ln_s_of_t(p, t)?))
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedWavefunction {
    pub state: QuantizedState,
    pub potential: GeneralMolecularPotential,
    pub b_n: f64,
    /// Integration window; `t_lo` is the singular time.
    pub t_lo: f64,
    pub t_hi: f64,
}

impl NormalizedWavefunction {
    pub fn eval(&self, t: f64) -> Result<f64> {
        Ok(self.b_n * eval_t(&self.state, &self.potential, t)?)
    }

    /// `ψ` with a different normalization constant.
    pub fn with_scale(&self, b_n: f64) -> Self {
        NormalizedWavefunction {
            b_n,
            ..self.clone()
        }
    }

    /// `∫ |ψ|² dt` over the window, recomputed from scratch.
    pub fn norm(&self) -> Result<f64> {
        let raw = integrate_window(self.t_lo, self.t_hi, |t| {
            let v = eval_log_s(&self.state, ln_s_of_t_unchecked(&self.potential, t));
            v * v
        })?;
        Ok(self.b_n * self.b_n * raw)
    }
}

fn ln_s_of_t_unchecked(p: &GeneralMolecularPotential, t: f64) -> f64 {
    (p.q.ln() - p.alpha * (t - p.t_e)).min(0.0)
}

/// Upper bound of `|P_n^{(a,b)}|` on `[-1, 1]` for `max(a, b) ≥ -1/2`.
fn jacobi_sup(state: &QuantizedState) -> f64 {
    let at_plus = jacobi_unchecked(state.n, state.jacobi_a, state.jacobi_b, 1.0).abs();
    let at_minus = jacobi_unchecked(state.n, state.jacobi_a, state.jacobi_b, -1.0).abs();
    at_plus.max(at_minus).max(1.0)
}

/// The `t` at which `|ψ|` has decayed below [`TAIL_CUTOFF`] times its peak.
fn tail_time(state: &QuantizedState, p: &GeneralMolecularPotential) -> f64 {
    // peak by scanning ln s; the envelope peaks at s = γ₁/(γ₁ + 1/R)
    let mut peak: f64 = 0.0;
    let scan = 4000;
    for i in 0..scan {
        let s = (i as f64 + 0.5) / scan as f64;
        peak = peak.max(eval_log_s(state, s.ln()).abs());
    }
    let s_star = state.gamma1 / (state.gamma1 + state.inv_r);
    peak = peak.max(eval_log_s(state, s_star.ln()).abs());
    // for s below the cut, |ψ| <= s^{γ₁} sup|P_n| < cutoff · peak
    let ln_s_cut = ((TAIL_CUTOFF * peak).ln() - jacobi_sup(state).ln()) / state.gamma1;
    let ln_s_cut = ln_s_cut.min(s_star.ln());
    p.t_e + (p.q.ln() - ln_s_cut) / p.alpha
}

/// Composite Gauss-Legendre over `[lo, hi]`, doubling panels until the
/// relative change drops below [`NORM_TOLERANCE`].
fn integrate_window<F: Fn(f64) -> f64>(lo: f64, hi: f64, f: F) -> Result<f64> {
    let rule = gauss_legendre(QUADRATURE_POINTS)?;
    let mut panels = 1;
    let mut prev = rule.integrate_composite(lo, hi, panels, &f);
    while panels < MAX_PANELS {
        panels *= 2;
        let next = rule.integrate_composite(lo, hi, panels, &f);
        if (next - prev).abs() <= NORM_TOLERANCE * next.abs() {
            return Ok(next);
        }
        prev = next;
    }
    Ok(prev)
}

/// Computes `B_n > 0` so that `∫ |ψ_n(t)|² dt = 1` over `t ∈ (t_s, ∞)`.
pub fn normalize(
    state: &QuantizedState,
    p: &GeneralMolecularPotential,
) -> Result<NormalizedWavefunction> {
    state.require_bound()?;
    let t_lo = p.singular_time().ok_or_else(|| {
        Error::Domain(format!(
            "closed-form wavefunctions need q > 0 (got q = {})",
            p.q
        ))
    })?;
    let t_hi = tail_time(state, p);
    let raw = integrate_window(t_lo, t_hi, |t| {
        let v = eval_log_s(state, ln_s_of_t_unchecked(p, t));
        v * v
    })?;
    if !(raw.is_finite() && raw > 0.0) {
        return Err(Error::IntegralNonFinite { value: raw });
    }
    Ok(NormalizedWavefunction {
        state: *state,
        potential: *p,
        b_n: raw.sqrt().recip(),
        t_lo,
        t_hi,
    })
}

/// Number of strict sign changes in a sequence, skipping exact zeros.
pub fn count_sign_changes(values: impl IntoIterator<Item = f64>) -> usize {
    let mut last = 0.0f64;
    let mut changes = 0;
    for v in values {
        if v == 0.0 {
            continue;
        }
        if last != 0.0 && (v > 0.0) != (last > 0.0) {
            changes += 1;
        }
        last = v;
    }
    changes
}

/// `∫ ψ_a ψ_b dt` from the later singular time to the farther tail.
pub fn overlap(a: &NormalizedWavefunction, b: &NormalizedWavefunction) -> Result<f64> {
    let lo = a.t_lo.max(b.t_lo);
    let hi = a.t_hi.max(b.t_hi);
    integrate_window(lo, hi, |t| {
        let x = eval_log_s(&a.state, ln_s_of_t_unchecked(&a.potential, t));
        let y = eval_log_s(&b.state, ln_s_of_t_unchecked(&b.potential, t));
        a.b_n * b.b_n * x * y
    })
}
