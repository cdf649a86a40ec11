//! Jacobi polynomials and Gauss-Legendre quadrature.

use crate::error::{Error, Result};

/// Parameters of `P_n^{(a,b)}`; both exponents must exceed -1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    pub a: f64,
    pub b: f64,
    pub n: usize,
}

impl JacobiParams {
    pub fn new(a: f64, b: f64, n: usize) -> Result<Self> {
        let jp = JacobiParams { a, b, n };
        jp.validate()?;
        Ok(jp)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a.is_finite() && self.a > -1.0) {
            return Err(Error::invalid(
                "a",
                format!("Jacobi exponent must be > -1, got {}", self.a),
            ));
        }
        if !(self.b.is_finite() && self.b > -1.0) {
            return Err(Error::invalid(
                "b",
                format!("Jacobi exponent must be > -1, got {}", self.b),
            ));
        }
        Ok(())
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        jacobi_eval(self, x)
    }
}

/// `P_n^{(a,b)}(x)` by the three-term recurrence in `n`.
pub fn jacobi_eval(jp: &JacobiParams, x: f64) -> Result<f64> {
    jp.validate()?;
    Ok(jacobi_unchecked(jp.n, jp.a, jp.b, x))
}

pub(crate) fn jacobi_unchecked(n: usize, a: f64, b: f64, x: f64) -> f64 {
    let mut p_prev = 1.0;
    if n == 0 {
        return p_prev;
    }
    let mut p = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
    let ab = a + b;
    let ab_diff = a * a - b * b;
    for k in 2..=n {
        let k = k as f64;
        let c = 2.0 * k + ab;
        let lead = 2.0 * k * (k + ab) * (c - 2.0);
        let mid = (c - 1.0) * (c * (c - 2.0) * x + ab_diff);
        let back = 2.0 * (k + a - 1.0) * (k + b - 1.0) * c;
        let next = (mid * p - back * p_prev) / lead;
        p_prev = p;
        p = next;
    }
    p
}

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

const NEWTON_TOL: f64 = 1e-15;
const NEWTON_MAX_ITER: usize = 100;

/// Returns `(P_n(x), P_n'(x))` for the Legendre polynomial of degree `n`.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let n = n as f64;
    (p1, n * (x * p1 - p0) / (x * x - 1.0))
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `∫_lo^hi f(x) dx` with the rule mapped affinely onto `[lo, hi]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, lo: f64, hi: f64, mut f: F) -> f64 {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }

    /// Like [`integrate`](Self::integrate) over `panels` equal sub-intervals.
    pub fn integrate_composite<F: FnMut(f64) -> f64>(
        &self,
        lo: f64,
        hi: f64,
        panels: usize,
        mut f: F,
    ) -> f64 {
        let width = (hi - lo) / panels as f64;
        (0..panels)
            .map(|i| {
                let a = lo + width * i as f64;
                self.integrate(a, a + width, &mut f)
            })
            .sum()
    }
}

/// Newton iteration on `P_n` started from the Tricomi-style guess
/// `cos(π(i - 1/4)/(n + 1/2))`. Non-convergence is an error.
pub fn gauss_legendre(npoints: usize) -> Result<QuadratureRule> {
    if npoints == 0 {
        return Err(Error::invalid("npoints", "must be >= 1"));
    }
    let n = npoints;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    // roots are symmetric; solve for the non-negative half
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut converged = false;
        let mut dp = 0.0;
        for _ in 0..NEWTON_MAX_ITER {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let step = p / d;
            x -= step;
            if step.abs() <= NEWTON_TOL * x.abs().max(1.0) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::QuadratureNoConvergence { index: i, npoints });
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok(QuadratureRule { nodes, weights })
}

/// `∫_{-1}^{1} (1-x)^a (1+x)^b P_m P_n dx` by Gauss-Legendre in `θ` with
/// `x = cos θ`, on panels refined geometrically towards both endpoints.
pub fn jacobi_inner_product(
    m: usize,
    n: usize,
    a: f64,
    b: f64,
    rule: &QuadratureRule,
) -> Result<f64> {
    JacobiParams::new(a, b, m)?;
    let half_pi = 0.5 * std::f64::consts::PI;
    let mut breaks: Vec<f64> = (0..GRADED_LEVELS)
        .map(|k| half_pi * 0.5f64.powi(k as i32))
        .collect();
    breaks.push(0.0);
    breaks.reverse();
    let scale = 2f64.powf(a + b + 1.0);
    let f = |theta: f64| {
        let (sh, ch) = (0.5 * theta).sin_cos();
        let x = theta.cos();
        scale
            * sh.powf(2.0 * a + 1.0)
            * ch.powf(2.0 * b + 1.0)
            * jacobi_unchecked(m, a, b, x)
            * jacobi_unchecked(n, a, b, x)
    };
    let total: f64 = breaks
        .windows(2)
        .map(|w| {
            rule.integrate(w[0], w[1], f)
                + rule.integrate(std::f64::consts::PI - w[1], std::f64::consts::PI - w[0], f)
        })
        .sum();
    if !total.is_finite() {
        return Err(Error::IntegralNonFinite { value: total });
    }
    Ok(total)
}

const GRADED_LEVELS: usize = 48;
