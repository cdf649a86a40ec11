//! The time-dependent general molecular potential and its Wei-Hua and
//! Manning-Rosen reductions.
//!
//! ```text
//!          A - B e^{-α(t-t_e)} + q̃ (C - D e^{-α(t-t_e)})²
//!   V(t) = ----------------------------------------------
//!                  (1 - q e^{-α(t-t_e)})²
//! ```

use crate::error::{Error, Result};

/// Denominators with magnitude below this are treated as singular.
pub const DEFAULT_DENOMINATOR_FLOOR: f64 = 1e-12;

/// Mass energy `mc²`, `ħ` and `c`. Natural units by default.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub mass_energy: f64,
    pub hbar: f64,
    pub c: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        PhysicalConstants {
            mass_energy: 1.0,
            hbar: 1.0,
            c: 1.0,
        }
    }
}

impl PhysicalConstants {
    pub fn new(mass_energy: f64, hbar: f64, c: f64) -> Result<Self> {
        let k = PhysicalConstants {
            mass_energy,
            hbar,
            c,
        };
        k.validate()?;
        Ok(k)
    }

    pub fn validate(&self) -> Result<()> {
        for (field, v) in [
            ("mass_energy", self.mass_energy),
            ("hbar", self.hbar),
            ("c", self.c),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(
                    field,
                    format!("must be finite and > 0, got {v}"),
                ));
            }
        }
        Ok(())
    }

    /// The kinetic prefactor `ħ²/(2mc²)` multiplying `-d²/dt²`.
    pub fn kinetic_prefactor(&self) -> f64 {
        self.hbar * self.hbar / (2.0 * self.mass_energy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralMolecularPotential {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub alpha: f64,
    pub q: f64,
    pub q_tilde: f64,
    pub t_e: f64,
}

impl GeneralMolecularPotential {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        a: f64,
        b: f64,
        c: f64,
        d: f64,
        alpha: f64,
        q: f64,
        q_tilde: f64,
        t_e: f64,
    ) -> Result<Self> {
        let p = GeneralMolecularPotential {
            a,
            b,
            c,
            d,
            alpha,
            q,
            q_tilde,
            t_e,
        };
        p.validate()?;
        Ok(p)
    }

    /// Checks `α > 0`, `q ≠ 0` and, for `q > 0`, that the singular time
    /// `t_s = t_e + ln(q)/α` is not positive.
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("A", self.a),
            ("B", self.b),
            ("C", self.c),
            ("D", self.d),
            ("alpha", self.alpha),
            ("q", self.q),
            ("q_tilde", self.q_tilde),
            ("t_e", self.t_e),
        ];
        for (field, v) in fields {
            if !v.is_finite() {
                return Err(Error::invalid(field, format!("must be finite, got {v}")));
            }
        }
        if self.alpha <= 0.0 {
            return Err(Error::invalid(
                "alpha",
                format!("must be > 0, got {}", self.alpha),
            ));
        }
        if self.q == 0.0 {
            return Err(Error::invalid("q", "must be non-zero"));
        }
        if let Some(ts) = self.singular_time() {
            if ts > 0.0 {
                return Err(Error::invalid(
                    "q",
                    format!(
                        "singularity guard ln(q)/alpha + t_e <= 0 violated: singular time t_s = {ts}"
                    ),
                ));
            }
        }
        Ok(())
    }

    /// `t_s = t_e + ln(q)/α`, where the denominator vanishes. `None` for `q < 0`.
    pub fn singular_time(&self) -> Option<f64> {
        (self.q > 0.0).then(|| self.t_e + self.q.ln() / self.alpha)
    }

    /// `s(t) = q e^{-α(t - t_e)}`.
    pub fn s_of_t(&self, t: f64) -> f64 {
        self.q * (-self.alpha * (t - self.t_e)).exp()
    }

    /// Inverse of [`s_of_t`](Self::s_of_t); requires `s/q > 0`.
    pub fn t_of_s(&self, s: f64) -> f64 {
        self.t_e - (s / self.q).ln() / self.alpha
    }

    /// The `t → ∞` limit `A + q̃C²`.
    pub fn asymptote(&self) -> f64 {
        self.a + self.q_tilde * self.c * self.c
    }

    /// The `t → -∞` limit `q̃D²/q²`, reached only when `q < 0`.
    pub fn lower_asymptote(&self) -> Option<f64> {
        (self.q < 0.0).then(|| self.q_tilde * self.d * self.d / (self.q * self.q))
    }

    pub fn evaluate(&self, t: f64) -> Result<f64> {
        self.evaluate_with_floor(t, DEFAULT_DENOMINATOR_FLOOR)
    }

    pub fn evaluate_with_floor(&self, t: f64, floor: f64) -> Result<f64> {
        let x = (-self.alpha * (t - self.t_e)).exp();
        let denominator = 1.0 - self.q * x;
        if denominator.abs() < floor || !denominator.is_finite() {
            return Err(Error::SingularPotential { t, denominator });
        }
        let well = self.c - self.d * x;
        let numerator = self.a - self.b * x + self.q_tilde * well * well;
        Ok(numerator / (denominator * denominator))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeiHuaParams {
    pub alpha: f64,
    pub q: f64,
    pub q_tilde: f64,
    pub t_e: f64,
}

impl WeiHuaParams {
    pub fn new(alpha: f64, q: f64, q_tilde: f64, t_e: f64) -> Result<Self> {
        let w = WeiHuaParams {
            alpha,
            q,
            q_tilde,
            t_e,
        };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(Error::invalid(
                "alpha",
                format!("must be > 0, got {}", self.alpha),
            ));
        }
        if !self.q.is_finite() || self.q == 0.0 || self.q == 1.0 {
            return Err(Error::invalid(
                "q",
                format!("must be finite and not 0 or 1, got {}", self.q),
            ));
        }
        if !self.q_tilde.is_finite() {
            return Err(Error::invalid("q_tilde", "must be finite"));
        }
        if !self.t_e.is_finite() {
            return Err(Error::invalid("t_e", "must be finite"));
        }
        Ok(())
    }

    /// `q̃ [(1 - e^{-α(t-t_e)}) / (1 - q e^{-α(t-t_e)})]²`, evaluated directly.
    pub fn evaluate(&self, t: f64) -> f64 {
        let x = (-self.alpha * (t - self.t_e)).exp();
        let ratio = (1.0 - x) / (1.0 - self.q * x);
        self.q_tilde * ratio * ratio
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManningRosenParams {
    pub alpha: f64,
    pub v0: f64,
    pub beta: f64,
    pub t_e: f64,
}

impl ManningRosenParams {
    pub fn new(alpha: f64, v0: f64, beta: f64, t_e: f64) -> Result<Self> {
        let mr = ManningRosenParams {
            alpha,
            v0,
            beta,
            t_e,
        };
        mr.validate()?;
        Ok(mr)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(Error::invalid(
                "alpha",
                format!("must be > 0, got {}", self.alpha),
            ));
        }
        if !self.v0.is_finite() {
            return Err(Error::invalid("V0", "must be finite"));
        }
        if !self.beta.is_finite() {
            return Err(Error::invalid("beta", "must be finite"));
        }
        if !self.t_e.is_finite() {
            return Err(Error::invalid("t_e", "must be finite"));
        }
        let strength = self.barrier_strength() + self.v0;
        if strength < 0.0 {
            return Err(Error::invalid(
                "beta",
                format!("beta(beta-1) + V0 must be >= 0, got {strength}"),
            ));
        }
        Ok(())
    }

    /// `β(β - 1)`.
    pub fn barrier_strength(&self) -> f64 {
        self.beta * (self.beta - 1.0)
    }

    /// `[-V0 α² x + α²(β(β-1) + V0) x²] / (1 - x)²` with `x = e^{-α(t-t_e)}`.
    pub fn evaluate(&self, t: f64) -> f64 {
        let x = (-self.alpha * (t - self.t_e)).exp();
        let a2 = self.alpha * self.alpha;
        let num = -self.v0 * a2 * x + a2 * (self.barrier_strength() + self.v0) * x * x;
        let den = 1.0 - x;
        num / (den * den)
    }
}

/// `A = B = 0`, `C = D = 1`; the other parameters carry over.
pub fn reduce_wei_hua(w: &WeiHuaParams) -> Result<GeneralMolecularPotential> {
    w.validate()?;
    GeneralMolecularPotential::new(0.0, 0.0, 1.0, 1.0, w.alpha, w.q, w.q_tilde, w.t_e)
}

/// `A = C = 0`, `q = 1`, `B = V0 α²`. Only the product `q̃D² = α²(β(β-1) + V0)`
/// is fixed by the reduction; the split used here is `q̃ = 1`.
pub fn reduce_manning_rosen(mr: &ManningRosenParams) -> Result<GeneralMolecularPotential> {
    mr.validate()?;
    let b = mr.v0 * mr.alpha * mr.alpha;
    let d = mr.alpha * (mr.barrier_strength() + mr.v0).sqrt();
    GeneralMolecularPotential::new(0.0, b, 0.0, d, mr.alpha, 1.0, 1.0, mr.t_e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fig1(alpha: f64) -> GeneralMolecularPotential {
        GeneralMolecularPotential::new(0.6, 0.6, 1.0, 1.0, alpha, 0.6, 1.0, 0.0).unwrap()
    }

    #[test]
    fn vanishes_at_equilibrium_time() {
        assert_eq!(fig1(0.5).evaluate(0.0).unwrap(), 0.0);
    }

    #[test]
    fn approaches_asymptote() {
        let p = fig1(0.5);
        let v = p.evaluate(p.t_e + 50.0 / p.alpha).unwrap();
        assert!((v - 1.6).abs() / 1.6 < 1e-6, "{v}");
        assert_eq!(p.asymptote(), 1.6);
    }

    #[test]
    fn value_at_t_one() {
        // x = e^{-0.5}; numerator 0.6 - 0.6x + (1 - x)², denominator (1 - 0.6x)²
        let x = (-0.5f64).exp();
        let expected =
            (0.6 - 0.6 * x + (1.0 - x) * (1.0 - x)) / ((1.0 - 0.6 * x) * (1.0 - 0.6 * x));
        assert!((expected - 0.966_139_179_986_499_9).abs() < 1e-15);
        let v = fig1(0.5).evaluate(1.0).unwrap();
        assert!((v - 0.966_139_179_986_499_9).abs() < 1e-15, "{v}");
    }

    #[test]
    fn singular_point_is_rejected() {
        let p = fig1(0.5);
        let ts = p.singular_time().unwrap();
        assert!((ts - 0.6f64.ln() / 0.5).abs() < 1e-15);
        match p.evaluate(ts) {
            Err(Error::SingularPotential { .. }) => {}
            other => panic!("expected singular error, got {other:?}"),
        }
    }

    #[test]
    fn validation_failures_name_the_field() {
        let bad = [
            (
                GeneralMolecularPotential::new(0.0, 0.0, 1.0, 1.0, 0.0, 0.6, 1.0, 0.0),
                "alpha",
            ),
            (
                GeneralMolecularPotential::new(0.0, 0.0, 1.0, 1.0, 0.1, 0.0, 1.0, 0.0),
                "q",
            ),
            // t_s = 2 + ln(0.6)/0.5 > 0
            (
                GeneralMolecularPotential::new(0.0, 0.0, 1.0, 1.0, 0.5, 0.6, 1.0, 2.0),
                "q",
            ),
            (
                GeneralMolecularPotential::new(f64::NAN, 0.0, 1.0, 1.0, 0.5, 0.6, 1.0, 0.0),
                "A",
            ),
        ];
        for (res, name) in bad {
            match res {
                Err(Error::InvalidParameter { field, .. }) => assert_eq!(field, name),
                other => panic!("expected {name} error, got {other:?}"),
            }
        }
        // q < 0 has no real singular time
        let p = GeneralMolecularPotential::new(0.0, 0.0, 1.0, 1.0, 0.5, -0.6, 1.0, 10.0).unwrap();
        assert!(p.singular_time().is_none());
        assert!(WeiHuaParams::new(0.1, 1.0, 1.0, 0.0).is_err());
        assert!(ManningRosenParams::new(0.1, -1.0, 0.5, 0.0).is_err());
    }

    #[test]
    fn wei_hua_substitution() {
        let w = WeiHuaParams::new(0.01, 0.6, 1.0, 0.0).unwrap();
        let p = reduce_wei_hua(&w).unwrap();
        assert_eq!(
            p,
            GeneralMolecularPotential {
                a: 0.0,
                b: 0.0,
                c: 1.0,
                d: 1.0,
                alpha: 0.01,
                q: 0.6,
                q_tilde: 1.0,
                t_e: 0.0
            }
        );
        assert_eq!(p.evaluate(0.0).unwrap(), 0.0);
        let direct = w.evaluate(100.0);
        let x = (-1.0f64).exp();
        let by_hand = ((1.0 - x) / (1.0 - 0.6 * x)).powi(2);
        assert!((direct - by_hand).abs() < 1e-15);
        assert!((p.evaluate(100.0).unwrap() - by_hand).abs() < 1e-15);
    }

    #[test]
    fn manning_rosen_substitution() {
        let mr = ManningRosenParams::new(0.1, 2.5, 5.0, 0.0).unwrap();
        let p = reduce_manning_rosen(&mr).unwrap();
        assert!((p.b - 0.025).abs() < 1e-17);
        assert!((p.d - 0.1 * 22.5f64.sqrt()).abs() < 1e-16);
        assert_eq!((p.a, p.c, p.q, p.q_tilde), (0.0, 0.0, 1.0, 1.0));
        let x = (-0.5f64).exp();
        let by_hand = (-0.025 * x + 0.225 * x * x) / ((1.0 - x) * (1.0 - x));
        assert!((mr.evaluate(5.0) - by_hand).abs() < 1e-15);
        let v = p.evaluate(5.0).unwrap();
        assert!(
            (v - by_hand).abs() <= 1e-12 * by_hand.abs(),
            "{v} vs {by_hand}"
        );
    }

    #[test]
    fn manning_rosen_zero_strength_is_flat() {
        let mr = ManningRosenParams::new(0.3, 0.0, 1.0, 0.0).unwrap();
        let p = reduce_manning_rosen(&mr).unwrap();
        assert_eq!((p.b, p.d), (0.0, 0.0));
        for t in [0.1, 1.0, 10.0] {
            assert_eq!(p.evaluate(t).unwrap(), 0.0);
        }
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
    }

    proptest! {
        #[test]
        fn wei_hua_reduction_matches_closed_form(
            alpha in 0.01f64..1.0,
            q in prop_oneof![-0.95f64..-0.05, 0.05f64..0.95],
            q_tilde in 0.1f64..5.0,
            dt in 0.0f64..40.0,
        ) {
            let w = WeiHuaParams::new(alpha, q, q_tilde, 0.0).unwrap();
            let p = reduce_wei_hua(&w).unwrap();
            // stay clear of t_s for q > 0
            let t = p.singular_time().map_or(-5.0, |ts| ts) + 0.05 / alpha + dt / alpha;
            let a = p.evaluate(t).unwrap();
            let b = w.evaluate(t);
            prop_assert!(a >= 0.0);
            prop_assert!(a == b || rel(a, b) < 1e-12, "{} vs {}", a, b);
        }

        #[test]
        fn manning_rosen_reduction_matches_closed_form(
            alpha in 0.01f64..1.0,
            v0 in -3.0f64..30.0,
            beta in 1.5f64..8.0,
            dt in 0.05f64..40.0,
        ) {
            prop_assume!(beta * (beta - 1.0) + v0 >= 0.0);
            let mr = ManningRosenParams::new(alpha, v0, beta, 0.0).unwrap();
            let p = reduce_manning_rosen(&mr).unwrap();
            let t = dt / alpha;
            let a = p.evaluate(t).unwrap();
            let b = mr.evaluate(t);
            // relative to the size of the terms that cancel where V crosses zero
            let x = (-alpha * t).exp();
            let a2 = alpha * alpha;
            let scale = (v0.abs() * a2 * x + a2 * (mr.barrier_strength() + v0) * x * x) / ((1.0 - x) * (1.0 - x));
            prop_assert!((a - b).abs() <= 1e-12 * scale, "{} vs {}", a, b);
        }
    }
}
