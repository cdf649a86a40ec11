//! Finite-difference check of the closed-form momenta.
//!
//! The Feinberg-Horodecki equation `-(ħ²/2mc²) ψ'' + V(t) ψ = cP ψ` is
//! discretized with the three-point stencil on a uniform grid with Dirichlet
//! ends. The resulting symmetric tridiagonal matrix is solved by Sturm
//! sequence bisection, on two grids, and the two estimates are combined by
//! Richardson extrapolation (error model `C h²`).

use std::fmt;

use crate::closed_form::compute_spectrum;
use crate::error::{Error, Result};
use crate::potential::{GeneralMolecularPotential, PhysicalConstants};

/// Interior nodes on the coarse grid of [`verify_spectrum`] by default;
/// the fine grid has `2·N + 1`.
pub const DEFAULT_NPOINTS: usize = 3999;
pub const DEFAULT_THRESHOLD: f64 = 1e-3;

/// Uniform grid with `npoints` interior nodes `t_lo + i h`, `i = 1..=npoints`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub t_lo: f64,
    pub t_hi: f64,
    pub npoints: usize,
}

impl Grid {
    pub fn new(t_lo: f64, t_hi: f64, npoints: usize) -> Result<Self> {
        if npoints < 3 {
            return Err(Error::InvalidGrid(format!(
                "npoints must be >= 3, got {npoints}"
            )));
        }
        if !(t_lo.is_finite() && t_hi.is_finite() && t_lo < t_hi) {
            return Err(Error::InvalidGrid(format!(
                "need t_lo < t_hi, got [{t_lo}, {t_hi}]"
            )));
        }
        Ok(Grid {
            t_lo,
            t_hi,
            npoints,
        })
    }

    pub fn spacing(&self) -> f64 {
        (self.t_hi - self.t_lo) / (self.npoints + 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        self.t_lo + self.spacing() * (i + 1) as f64
    }

    /// Same window with the spacing halved.
    pub fn refined(&self) -> Grid {
        Grid {
            npoints: 2 * self.npoints + 1,
            ..*self
        }
    }

    /// Window used for a potential: from the singular time (or `t_e - 20/α`
    /// when `q < 0`) up to `t_e + 60/α`.
    pub fn for_potential(p: &GeneralMolecularPotential, npoints: usize) -> Result<Grid> {
        let t_lo = p.singular_time().unwrap_or(p.t_e - 20.0 / p.alpha);
        Grid::new(t_lo, p.t_e + 60.0 / p.alpha, npoints)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalOperator {
    pub diagonal: Vec<f64>,
    pub off_diagonal: Vec<f64>,
}

impl TridiagonalOperator {
    pub fn new(diagonal: Vec<f64>, off_diagonal: Vec<f64>) -> Result<Self> {
        if diagonal.is_empty() || off_diagonal.len() + 1 != diagonal.len() {
            return Err(Error::InvalidGrid(format!(
                "tridiagonal shape mismatch: {} diagonal, {} off-diagonal",
                diagonal.len(),
                off_diagonal.len()
            )));
        }
        Ok(TridiagonalOperator {
            diagonal,
            off_diagonal,
        })
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    /// Adds `v0` to every diagonal entry.
    pub fn shifted(&self, v0: f64) -> Self {
        TridiagonalOperator {
            diagonal: self.diagonal.iter().map(|d| d + v0).collect(),
            off_diagonal: self.off_diagonal.clone(),
        }
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 {
                self.off_diagonal[i - 1].abs()
            } else {
                0.0
            };
            let right = if i + 1 < n {
                self.off_diagonal[i].abs()
            } else {
                0.0
            };
            lo = lo.min(self.diagonal[i] - left - right);
            hi = hi.max(self.diagonal[i] + left + right);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `lambda` (negative LDLᵀ pivots).
    pub fn sturm_count(&self, lambda: f64) -> usize {
        let max_e2 = self.off_diagonal.iter().fold(1.0f64, |m, e| m.max(e * e));
        let pivmin = f64::MIN_POSITIVE * max_e2;
        let mut count = 0;
        let mut pivot = self.diagonal[0] - lambda;
        for i in 0..self.dim() {
            if i > 0 {
                let e = self.off_diagonal[i - 1];
                pivot = self.diagonal[i] - lambda - e * e / pivot;
            }
            if pivot.abs() < pivmin {
                pivot = -pivmin;
            }
            if pivot < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `index`-th smallest eigenvalue (0-based) by bisection.
    pub fn eigenvalue(&self, index: usize) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        // count(lo) <= index < count(hi)
        let pad = 1e-12 * lo.abs().max(hi.abs()).max(1e-300);
        lo -= pad;
        hi += pad;
        for _ in 0..256 {
            let width = hi - lo;
            if width <= 1e-12 * lo.abs().max(hi.abs()) || width <= f64::MIN_POSITIVE {
                break;
            }
            let mid = lo + 0.5 * width;
            if mid == lo || mid == hi {
                break;
            }
            if self.sturm_count(mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// The `count` smallest eigenvalues in ascending order.
pub fn lowest_eigenvalues(op: &TridiagonalOperator, count: usize) -> Vec<f64> {
    (0..count.min(op.dim())).map(|i| op.eigenvalue(i)).collect()
}

/// Stencil for `-(ħ²/2mc²) d²/dt² + V(t)` with Dirichlet ends.
pub fn discretize_fn<F>(
    potential: F,
    k: &PhysicalConstants,
    g: &Grid,
) -> Result<TridiagonalOperator>
where
    F: Fn(f64) -> Result<f64>,
{
    let h = g.spacing();
    let kinetic = k.kinetic_prefactor() / (h * h);
    let diagonal = (0..g.npoints)
        .map(|i| {
            let v = potential(g.node(i))?;
            if !v.is_finite() {
                return Err(Error::InvalidGrid(format!(
                    "potential not finite at t = {}",
                    g.node(i)
                )));
            }
            Ok(2.0 * kinetic + v)
        })
        .collect::<Result<Vec<_>>>()?;
    TridiagonalOperator::new(diagonal, vec![-kinetic; g.npoints - 1])
}

/// Discretizes the general molecular potential. The singular time may sit
/// on the left end (where ψ vanishes) but not inside the window.
pub fn discretize(
    p: &GeneralMolecularPotential,
    k: &PhysicalConstants,
    g: &Grid,
) -> Result<TridiagonalOperator> {
    if let Some(ts) = p.singular_time() {
        if ts > g.t_lo && ts < g.t_hi {
            return Err(Error::SingularityInWindow {
                t_lo: g.t_lo,
                t_hi: g.t_hi,
                t_singular: ts,
            });
        }
    }
    discretize_fn(|t| p.evaluate(t), k, g)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    /// Richardson-extrapolated estimates of `cP_n`, ascending.
    pub eigenvalues: Vec<f64>,
    /// Estimates on the coarse and fine grid.
    pub coarse: Vec<f64>,
    pub fine: Vec<f64>,
    pub grid: Grid,
    /// `|extrapolated - fine|` per eigenvalue.
    pub richardson_error: Vec<f64>,
}

/// Solves on `grid` and its refinement and extrapolates.
pub fn solve_richardson<F>(
    potential: F,
    k: &PhysicalConstants,
    grid: &Grid,
    count: usize,
) -> Result<OracleResult>
where
    F: Fn(f64) -> Result<f64>,
{
    let coarse = lowest_eigenvalues(&discretize_fn(&potential, k, grid)?, count);
    let fine = lowest_eigenvalues(&discretize_fn(&potential, k, &grid.refined())?, count);
    let eigenvalues: Vec<f64> = coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| (4.0 * f - c) / 3.0)
        .collect();
    let richardson_error = eigenvalues
        .iter()
        .zip(&fine)
        .map(|(e, f)| (e - f).abs())
        .collect();
    Ok(OracleResult {
        eigenvalues,
        coarse,
        fine,
        grid: *grid,
        richardson_error,
    })
}

pub fn solve_potential(
    p: &GeneralMolecularPotential,
    k: &PhysicalConstants,
    grid: &Grid,
    count: usize,
) -> Result<OracleResult> {
    // run the singularity check once for the coarse grid
    discretize(p, k, grid)?;
    solve_richardson(|t| p.evaluate(t), k, grid, count)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub npoints: usize,
    /// Pass threshold on the relative deviation.
    pub threshold: f64,
    /// Upper bound on the relative Richardson error of trusted eigenvalues.
    pub convergence_tolerance: f64,
    /// Added to every closed-form value; a test hook for injected failures.
    pub closed_form_offset: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            npoints: DEFAULT_NPOINTS,
            threshold: DEFAULT_THRESHOLD,
            convergence_tolerance: DEFAULT_THRESHOLD,
            closed_form_offset: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationRow {
    pub n: usize,
    /// Closed-form `cP_n`.
    pub closed_form: f64,
    pub bound: bool,
    /// Oracle estimate, present only when it lies below the continuum threshold.
    pub oracle: Option<f64>,
    pub relative_deviation: Option<f64>,
    pub richardson_error: Option<f64>,
}

impl VerificationRow {
    pub fn passes(&self, threshold: f64) -> bool {
        self.relative_deviation.is_some_and(|d| d <= threshold)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub rows: Vec<VerificationRow>,
    pub threshold: f64,
    /// Eigenvalues at or above this are box states and not compared.
    pub continuum_threshold: f64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        !self.rows.is_empty() && self.rows.iter().all(|r| r.passes(self.threshold))
    }

    pub fn max_deviation(&self) -> Option<f64> {
        self.rows
            .iter()
            .map(|r| r.relative_deviation)
            .try_fold(0.0f64, |m, d| d.map(|d| m.max(d)))
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.16e}")).unwrap_or_default()
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "n,closed_form,oracle,relative_deviation,richardson_error"
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "{},{:.16e},{},{},{}",
                r.n,
                r.closed_form,
                fmt_opt(r.oracle),
                fmt_opt(r.relative_deviation),
                fmt_opt(r.richardson_error)
            )?;
        }
        Ok(())
    }
}

fn build_report<I>(
    closed: I,
    oracle: &OracleResult,
    continuum_threshold: f64,
    opts: &VerifyOptions,
) -> Result<VerificationReport>
where
    I: IntoIterator<Item = (usize, f64, bool)>,
{
    let mut rows = Vec::new();
    for (n, closed_form, bound) in closed {
        let closed_form = closed_form + opts.closed_form_offset;
        let trusted = oracle
            .eigenvalues
            .get(n)
            .copied()
            .filter(|&e| e < continuum_threshold);
        let err = trusted.map(|_| oracle.richardson_error[n]);
        if let (Some(e), Some(est)) = (trusted, err) {
            if est > opts.convergence_tolerance * e.abs() {
                return Err(Error::ConvergenceFailure {
                    n,
                    estimate: est / e.abs(),
                    tolerance: opts.convergence_tolerance,
                });
            }
        }
        rows.push(VerificationRow {
            n,
            closed_form,
            bound,
            oracle: trusted,
            relative_deviation: trusted.map(|e| (closed_form - e).abs() / e.abs()),
            richardson_error: err,
        });
    }
    Ok(VerificationReport {
        rows,
        threshold: opts.threshold,
        continuum_threshold,
    })
}

/// Compares the closed-form `cP_0 .. cP_{n_check-1}` with the oracle's
/// lowest `n_check` eigenvalues.
pub fn verify_spectrum(
    p: &GeneralMolecularPotential,
    k: &PhysicalConstants,
    n_check: usize,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    if n_check == 0 {
        return Err(Error::invalid("n_check", "must be >= 1"));
    }
    let spectrum = compute_spectrum(p, k, n_check - 1)?;
    let grid = Grid::for_potential(p, opts.npoints)?;
    let oracle = solve_potential(p, k, &grid, n_check)?;
    let continuum = p
        .lower_asymptote()
        .map_or(p.asymptote(), |low| low.min(p.asymptote()));
    build_report(
        spectrum
            .states
            .iter()
            .map(|s| (s.n, k.c * s.momentum, s.is_bound())),
        &oracle,
        continuum,
        opts,
    )
}

/// Self-test against `V ≡ 0` on `[0, length]`, whose spectrum is
/// `(ħ²/2mc²)(π n / length)²`, `n = 1, 2, ...`.
pub fn verify_box(
    length: f64,
    k: &PhysicalConstants,
    n_check: usize,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    if !(length.is_finite() && length > 0.0) {
        return Err(Error::invalid(
            "box_length",
            format!("must be > 0, got {length}"),
        ));
    }
    if n_check == 0 {
        return Err(Error::invalid("n_check", "must be >= 1"));
    }
    let grid = Grid::new(0.0, length, opts.npoints)?;
    let oracle = solve_richardson(|_| Ok(0.0), k, &grid, n_check)?;
    let analytic = (0..n_check).map(|n| {
        let wave = std::f64::consts::PI * (n + 1) as f64 / length;
        (n, k.kinetic_prefactor() * wave * wave, true)
    });
    build_report(analytic, &oracle, f64::INFINITY, opts)
}
