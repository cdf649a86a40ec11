//! Closed-form quantized momenta `P_n` of the Feinberg-Horodecki equation
//! with the general molecular potential, obtained by the Nikiforov-Uvarov
//! reduction to a hypergeometric equation in `s = q e^{-α(t-t_e)}`.
//!
//! With `κ = 2mc²/(ħ²α²)` the eigenfunctions are
//! `ψ_n(s) = s^{γ₁} (1 - s)^{1/R} P_n^{(2γ₁, 2/R - 1)}(1 - 2s)` where
//!
//! ```text
//! 1/R = 1/2 + sqrt(κ [q̃(C - D/q)² + A - B/q] + 1/4)
//! γ₁  = [κ (B/q + 2q̃CD/q - 2A - 2q̃C²) - n(n + 2/R) - 1/R] / (2(n + 1/R))
//! cP_n = A + q̃C² - γ₁²/κ
//! ```
//!
//! The state is bound (normalizable as `s → 0`) only when `γ₁ > 0`.

use crate::error::{Error, Result};
use crate::potential::{
    reduce_manning_rosen, reduce_wei_hua, GeneralMolecularPotential, ManningRosenParams,
    PhysicalConstants, WeiHuaParams,
};

/// `κ = 2mc²/(ħ²α²)`.
pub fn kinetic_scale(alpha: f64, k: &PhysicalConstants) -> f64 {
    2.0 * k.mass_energy / (k.hbar * k.hbar * alpha * alpha)
}

/// The coefficients of `-γ₁² - γ₃ s + γ₂ s²` in the reduced equation, each
/// affine in `cP`. Only diagnostics consume `γ₂` and `γ₃`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntermediateCoefficients {
    pub kinetic_scale: f64,
    /// `A + q̃C²`; `γ₁² = κ (asymptote - cP)`.
    pub asymptote: f64,
    /// `q̃D²/q²`; `γ₂ = -κ (this - cP)`.
    pub quadratic_strength: f64,
    /// `B/q + 2q̃CD/q`; `γ₃ = -κ (this - 2cP)`.
    pub linear_strength: f64,
}

impl IntermediateCoefficients {
    pub fn new(p: &GeneralMolecularPotential, k: &PhysicalConstants) -> Self {
        IntermediateCoefficients {
            kinetic_scale: kinetic_scale(p.alpha, k),
            asymptote: p.asymptote(),
            quadratic_strength: p.q_tilde * p.d * p.d / (p.q * p.q),
            linear_strength: p.b / p.q + 2.0 * p.q_tilde * p.c * p.d / p.q,
        }
    }

    pub fn gamma1_sq(&self, c_p: f64) -> f64 {
        self.kinetic_scale * (self.asymptote - c_p)
    }

    pub fn gamma2(&self, c_p: f64) -> f64 {
        -self.kinetic_scale * (self.quadratic_strength - c_p)
    }

    pub fn gamma3(&self, c_p: f64) -> f64 {
        -self.kinetic_scale * (self.linear_strength - 2.0 * c_p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseR {
    pub inv_r: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantizedState {
    pub n: usize,
    /// Quantized momentum `P_n`.
    pub momentum: f64,
    pub gamma1: f64,
    pub inv_r: f64,
    /// `2γ₁`, the first Jacobi exponent.
    pub jacobi_a: f64,
    /// `2/R - 1`, the second Jacobi exponent.
    pub jacobi_b: f64,
    /// Residual of `γ₁² = κ(A + q̃C² - cP_n)` relative to the largest term,
    /// `max(γ₁², κ|A + q̃C²|, κ|cP_n|)`.
    pub closure_residual: f64,
}

impl QuantizedState {
    pub fn is_bound(&self) -> bool {
        self.gamma1 > 0.0
    }

    /// Returns `self` when bound, otherwise a [`Error::NonBoundState`].
    pub fn require_bound(&self) -> Result<&Self> {
        if self.is_bound() {
            Ok(self)
        } else {
            Err(Error::NonBoundState {
                n: self.n,
                gamma1: self.gamma1,
            })
        }
    }
}

/// Tolerance on [`QuantizedState::closure_residual`].
pub const CLOSURE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct MomentumSpectrum {
    pub potential: GeneralMolecularPotential,
    pub constants: PhysicalConstants,
    pub inv_r: InverseR,
    pub states: Vec<QuantizedState>,
    pub n_max: usize,
}

impl MomentumSpectrum {
    pub fn bound_states(&self) -> impl Iterator<Item = &QuantizedState> {
        self.states.iter().filter(|s| s.is_bound())
    }
}

pub fn compute_inv_r(p: &GeneralMolecularPotential, k: &PhysicalConstants) -> Result<InverseR> {
    let kappa = kinetic_scale(p.alpha, k);
    let offset = p.c - p.d / p.q;
    let radicand = kappa * (p.q_tilde * offset * offset + p.a - p.b / p.q) + 0.25;
    inv_r_from_radicand(radicand)
}

fn inv_r_from_radicand(radicand: f64) -> Result<InverseR> {
    if radicand < 0.0 || !radicand.is_finite() {
        return Err(Error::RNotReal { radicand });
    }
    Ok(InverseR {
        inv_r: 0.5 + radicand.sqrt(),
    })
}

/// Assembles a state from the quantities shared by every potential family.
/// `coupling` is the `κ(...)` term of the γ₁ numerator; `asymptote` is `A + q̃C²`.
fn build_state(
    n: usize,
    inv_r: f64,
    coupling: f64,
    asymptote: f64,
    kappa: f64,
    k: &PhysicalConstants,
) -> QuantizedState {
    let nf = n as f64;
    // quotient before squaring keeps large n finite
    let gamma1 = (coupling - nf * (nf + 2.0 * inv_r) - inv_r) / (2.0 * (nf + inv_r));
    let momentum = (asymptote - gamma1 * gamma1 / kappa) / k.c;
    let g2 = gamma1 * gamma1;
    let c_p = k.c * momentum;
    let recon = kappa * (asymptote - c_p);
    let scale = g2.max(kappa * asymptote.abs()).max(kappa * c_p.abs());
    let closure_residual = if scale == 0.0 {
        0.0
    } else {
        (g2 - recon).abs() / scale
    };
    QuantizedState {
        n,
        momentum,
        gamma1,
        inv_r,
        jacobi_a: 2.0 * gamma1,
        jacobi_b: 2.0 * inv_r - 1.0,
        closure_residual,
    }
}

pub fn compute_momentum(
    p: &GeneralMolecularPotential,
    k: &PhysicalConstants,
    n: usize,
) -> Result<QuantizedState> {
    let inv_r = compute_inv_r(p, k)?;
    Ok(state_with_inv_r(p, k, inv_r.inv_r, n))
}

fn state_with_inv_r(
    p: &GeneralMolecularPotential,
    k: &PhysicalConstants,
    inv_r: f64,
    n: usize,
) -> QuantizedState {
    let kappa = kinetic_scale(p.alpha, k);
    let coupling = kappa
        * (p.b / p.q + 2.0 * p.q_tilde * p.c * p.d / p.q - 2.0 * p.a - 2.0 * p.q_tilde * p.c * p.c);
    build_state(n, inv_r, coupling, p.asymptote(), kappa, k)
}

/// Momentum for the Wei-Hua oscillator from its own closed form,
/// `1/R = 1/2 + sqrt(κ q̃ (1 - 1/q)² + 1/4)`.
pub fn wei_hua_momentum(
    w: &WeiHuaParams,
    k: &PhysicalConstants,
    n: usize,
) -> Result<QuantizedState> {
    w.validate()?;
    let kappa = kinetic_scale(w.alpha, k);
    let offset = 1.0 - 1.0 / w.q;
    let inv_r = inv_r_from_radicand(kappa * w.q_tilde * offset * offset + 0.25)?;
    let coupling = kappa * (2.0 * w.q_tilde / w.q - 2.0 * w.q_tilde);
    Ok(build_state(n, inv_r.inv_r, coupling, w.q_tilde, kappa, k))
}

/// `1/R = 1/2 + sqrt((2mc²/ħ²) β(β-1) + 1/4)`, independent of `α`.
pub fn manning_rosen_inv_r(mr: &ManningRosenParams, k: &PhysicalConstants) -> Result<InverseR> {
    let reduced_mass = 2.0 * k.mass_energy / (k.hbar * k.hbar);
    inv_r_from_radicand(reduced_mass * mr.barrier_strength() + 0.25)
}

/// Momentum for the Manning-Rosen potential,
/// `P_n = -(ħ²α²/2mc³) γ₁²` with the `α²` in `κ B = 2mc² V0/ħ²` cancelled.
pub fn manning_rosen_momentum(
    mr: &ManningRosenParams,
    k: &PhysicalConstants,
    n: usize,
) -> Result<QuantizedState> {
    mr.validate()?;
    let inv_r = manning_rosen_inv_r(mr, k)?;
    let kappa = kinetic_scale(mr.alpha, k);
    let coupling = 2.0 * k.mass_energy * mr.v0 / (k.hbar * k.hbar);
    Ok(build_state(n, inv_r.inv_r, coupling, 0.0, kappa, k))
}

pub fn compute_spectrum(
    p: &GeneralMolecularPotential,
    k: &PhysicalConstants,
    n_max: usize,
) -> Result<MomentumSpectrum> {
    let inv_r = compute_inv_r(p, k)?;
    let states = (0..=n_max)
        .map(|n| state_with_inv_r(p, k, inv_r.inv_r, n))
        .collect();
    Ok(MomentumSpectrum {
        potential: *p,
        constants: *k,
        inv_r,
        states,
        n_max,
    })
}

/// Convenience wrappers going through the general formula.
pub fn wei_hua_spectrum(
    w: &WeiHuaParams,
    k: &PhysicalConstants,
    n_max: usize,
) -> Result<MomentumSpectrum> {
    compute_spectrum(&reduce_wei_hua(w)?, k, n_max)
}

pub fn manning_rosen_spectrum(
    mr: &ManningRosenParams,
    k: &PhysicalConstants,
    n_max: usize,
) -> Result<MomentumSpectrum> {
    compute_spectrum(&reduce_manning_rosen(mr)?, k, n_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn natural() -> PhysicalConstants {
        PhysicalConstants::default()
    }

    fn fig2(alpha: f64) -> GeneralMolecularPotential {
        GeneralMolecularPotential::new(0.6, 0.6, 1.0, 1.0, alpha, 0.6, 1.0, 0.0).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        if a == b {
            0.0
        } else {
            (a - b).abs() / a.abs().max(b.abs())
        }
    }

    #[test]
    fn inverse_r_degenerate_cases() {
        // Wei-Hua shape with q = 1: C - D/q = 0, A - B/q = 0
        let p = GeneralMolecularPotential::new(0.0, 0.0, 1.0, 1.0, 0.3, 1.0, 1.0, 0.0).unwrap();
        assert_eq!(compute_inv_r(&p, &natural()).unwrap().inv_r, 1.0);
        let mr = ManningRosenParams::new(0.4, 0.0, 1.0, 0.0).unwrap();
        let p = reduce_manning_rosen(&mr).unwrap();
        assert_eq!(compute_inv_r(&p, &natural()).unwrap().inv_r, 1.0);
        assert_eq!(manning_rosen_inv_r(&mr, &natural()).unwrap().inv_r, 1.0);
    }

    #[test]
    fn inverse_r_manning_rosen_alpha_cancels() {
        let expected = 0.5 + (2.0f64 * 20.0 + 0.25).sqrt();
        for alpha in [0.05, 0.1, 0.5] {
            let mr = ManningRosenParams::new(alpha, 2.5, 5.0, 0.0).unwrap();
            let special = manning_rosen_inv_r(&mr, &natural()).unwrap().inv_r;
            assert_eq!(special, expected);
            let general = compute_inv_r(&reduce_manning_rosen(&mr).unwrap(), &natural())
                .unwrap()
                .inv_r;
            assert!(rel(general, expected) < 1e-14, "alpha={alpha}: {general}");
        }
    }

    #[test]
    fn r_not_real_carries_radicand() {
        // A - B/q strongly negative with no q̃ term
        let p = GeneralMolecularPotential::new(0.0, 5.0, 0.0, 0.0, 1.0, 0.5, 0.0, 0.0).unwrap();
        match compute_inv_r(&p, &natural()) {
            Err(Error::RNotReal { radicand }) => {
                assert!((radicand - (2.0 * -10.0 + 0.25)).abs() < 1e-12)
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            compute_momentum(&p, &natural(), 0),
            Err(Error::RNotReal { .. })
        ));
        assert!(matches!(
            compute_spectrum(&p, &natural(), 3),
            Err(Error::RNotReal { .. })
        ));
    }

    #[test]
    fn free_case_collapses() {
        for alpha in [0.1, 0.7] {
            let p =
                GeneralMolecularPotential::new(0.0, 0.0, 0.0, 0.0, alpha, 0.5, 1.0, 0.0).unwrap();
            for n in 0..6 {
                let s = compute_momentum(&p, &natural(), n).unwrap();
                let half = (n as f64 + 1.0) / 2.0;
                assert_eq!(s.inv_r, 1.0);
                assert!((s.gamma1 + half).abs() < 1e-15);
                assert!(!s.is_bound(), "a free particle has no bound states");
                let expected = -(alpha * alpha / 2.0) * half * half;
                assert!(
                    rel(s.momentum, expected) < 1e-15,
                    "{} vs {expected}",
                    s.momentum
                );
            }
        }
    }

    #[test]
    fn fig2_ground_state_value() {
        // independent arithmetic: κ = 8, 1/R = 1/2 + sqrt(8·(4/9 + 0.6 - 1) + 1/4),
        // γ₁ = (8·(1 + 2/0.6 - 1.2 - 2) - 1/R) / (2/R), cP = 1.6 - γ₁²/8
        let kappa = 8.0f64;
        let inv_r = 0.5 + (kappa * (4.0 / 9.0 + 0.6 - 1.0) + 0.25).sqrt();
        let g = (kappa * (1.0 + 2.0 / 0.6 - 1.2 - 2.0) - inv_r) / (2.0 * inv_r);
        let by_hand = 1.6 - g * g / kappa;
        assert!((by_hand - 0.439_683_422_630_286_1).abs() < 1e-14);
        let s = compute_momentum(&fig2(0.5), &natural(), 0).unwrap();
        assert!(
            rel(s.momentum, 0.439_683_422_630_286_1) < 1e-13,
            "{}",
            s.momentum
        );
        assert!(s.is_bound());
    }

    #[test]
    fn fig2_ground_state_rises_with_alpha() {
        let small = compute_momentum(&fig2(0.05), &natural(), 0)
            .unwrap()
            .momentum;
        assert!(small < 0.0);
        let mut prev = f64::NEG_INFINITY;
        for i in 0..10 {
            let alpha = 0.05 + 0.05 * i as f64;
            let m = compute_momentum(&fig2(alpha), &natural(), 0)
                .unwrap()
                .momentum;
            assert!(m > prev, "alpha={alpha}");
            prev = m;
        }
        assert!(prev > 0.0);
    }

    #[test]
    fn wei_hua_zero_strength() {
        let w = WeiHuaParams::new(0.3, 0.6, 0.0, 0.0).unwrap();
        for n in 0..4 {
            let s = wei_hua_momentum(&w, &natural(), n).unwrap();
            assert_eq!(s.inv_r, 1.0);
            let half = (n as f64 + 1.0) / 2.0;
            assert!(rel(s.momentum, -0.045 * half * half) < 1e-14);
        }
    }

    #[test]
    fn wei_hua_matches_general_form() {
        let k = natural();
        let w = WeiHuaParams::new(0.3, 0.6, 1.0, 0.0).unwrap();
        let p = reduce_wei_hua(&w).unwrap();
        for n in 0..3 {
            let a = wei_hua_momentum(&w, &k, n).unwrap();
            let b = compute_momentum(&p, &k, n).unwrap();
            assert!(rel(a.momentum, b.momentum) < 1e-14);
            assert!(rel(a.gamma1, b.gamma1) < 1e-14);
            assert!(a.is_bound());
        }
        // fourth state lies above the well
        assert!(!wei_hua_momentum(&w, &k, 3).unwrap().is_bound());
    }

    #[test]
    fn wei_hua_negative_q_descends_with_n() {
        let w = WeiHuaParams::new(0.3, -0.6, 1.0, 0.0).unwrap();
        let m: Vec<f64> = (0..5)
            .map(|n| wei_hua_momentum(&w, &natural(), n).unwrap().momentum)
            .collect();
        assert!(m.windows(2).all(|p| p[1] < p[0]), "{m:?}");
        assert!(m[1..].iter().all(|&x| x < 0.0));
    }

    #[test]
    fn manning_rosen_zero_bracket() {
        let k = natural();
        let inv_r = 0.5 + (2.0f64 * 20.0 + 0.25).sqrt();
        let v0 = inv_r / 2.0;
        let mr = ManningRosenParams::new(0.2, v0, 5.0, 0.0).unwrap();
        let s = manning_rosen_momentum(&mr, &k, 0).unwrap();
        assert!(s.momentum.abs() < 1e-28, "{}", s.momentum);
        assert!(!s.is_bound());
    }

    #[test]
    fn manning_rosen_matches_general_form() {
        let k = natural();
        let mr = ManningRosenParams::new(0.1, 2.5, 5.0, 0.0).unwrap();
        let p = reduce_manning_rosen(&mr).unwrap();
        for n in 0..4 {
            let a = manning_rosen_momentum(&mr, &k, n).unwrap();
            let b = compute_momentum(&p, &k, n).unwrap();
            assert!(rel(a.momentum, b.momentum) < 1e-12, "n={n}");
            assert!(a.momentum <= 0.0);
        }
        // κB = (2/α²)(V0 α²) = 2V0
        let coupling_general = kinetic_scale(0.1, &k) * p.b;
        assert!(rel(coupling_general, 5.0) < 1e-15);
    }

    #[test]
    fn manning_rosen_attractive_vs_repulsive() {
        let k = natural();
        for alpha in [0.05, 0.1, 0.3, 0.5] {
            for n in 0..4 {
                let plus = ManningRosenParams::new(alpha, 2.5, 5.0, 0.0).unwrap();
                let minus = ManningRosenParams::new(alpha, -2.5, 5.0, 0.0).unwrap();
                let a = manning_rosen_momentum(&plus, &k, n).unwrap().momentum;
                let b = manning_rosen_momentum(&minus, &k, n).unwrap().momentum;
                assert!(b < a, "alpha={alpha} n={n}");
            }
        }
    }

    #[test]
    fn spectrum_matches_per_state_calls() {
        let k = natural();
        let p = fig2(0.5);
        let single = compute_spectrum(&p, &k, 0).unwrap();
        assert_eq!(single.states, vec![compute_momentum(&p, &k, 0).unwrap()]);
        let spec = compute_spectrum(&p, &k, 4).unwrap();
        assert_eq!(spec.states.len(), 5);
        for (n, s) in spec.states.iter().enumerate() {
            assert_eq!(*s, compute_momentum(&p, &k, n).unwrap());
        }
        let mr =
            manning_rosen_spectrum(&ManningRosenParams::new(0.1, 2.5, 5.0, 0.0).unwrap(), &k, 3)
                .unwrap();
        assert!(mr.states.iter().all(|s| s.momentum <= 0.0));
    }

    #[test]
    fn intermediate_coefficients_reproduce_gamma1() {
        let k = natural();
        let p = fig2(0.3);
        let coeffs = IntermediateCoefficients::new(&p, &k);
        for n in 0..4 {
            let s = compute_momentum(&p, &k, n).unwrap();
            let cp = s.momentum * k.c;
            assert!(rel(coeffs.gamma1_sq(cp), s.gamma1 * s.gamma1) < 1e-10);
            // the s² and s coefficients vanish together with the constant one at s = 1
            // only through 1/R; check the indicial relation ν(ν-1) = -(−γ₁² − γ₃ + γ₂)
            let nu = s.inv_r;
            let at_one = -coeffs.gamma1_sq(cp) - coeffs.gamma3(cp) + coeffs.gamma2(cp);
            assert!((nu * (nu - 1.0) + at_one).abs() < 1e-10 * nu * nu);
        }
    }

    #[test]
    fn nonstandard_units() {
        let k = PhysicalConstants::new(3.0, 0.7, 2.0).unwrap();
        let w = WeiHuaParams::new(0.25, 0.4, 2.0, 0.0).unwrap();
        let a = wei_hua_momentum(&w, &k, 1).unwrap();
        let b = compute_momentum(&reduce_wei_hua(&w).unwrap(), &k, 1).unwrap();
        assert!(rel(a.momentum, b.momentum) < 1e-13);
        assert!(a.closure_residual < CLOSURE_TOLERANCE);
    }

    proptest! {
        #[test]
        fn closure_holds(
            alpha in 0.05f64..1.0,
            q in 0.05f64..0.95,
            q_tilde in 0.1f64..4.0,
            n in 0usize..10,
        ) {
            let w = WeiHuaParams::new(alpha, q, q_tilde, 0.0).unwrap();
            let s = wei_hua_momentum(&w, &natural(), n).unwrap();
            prop_assert!(s.closure_residual < CLOSURE_TOLERANCE, "{}", s.closure_residual);
        }

        #[test]
        fn manning_rosen_never_positive(
            alpha in 0.01f64..1.0,
            v0 in -10.0f64..40.0,
            beta in 1.0f64..8.0,
            n in 0usize..12,
        ) {
            prop_assume!(beta * (beta - 1.0) + v0 >= 0.0);
            let mr = ManningRosenParams::new(alpha, v0, beta, 0.0).unwrap();
            prop_assert!(manning_rosen_momentum(&mr, &natural(), n).unwrap().momentum <= 0.0);
        }
    }
}
