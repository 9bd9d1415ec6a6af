//! Closed-form spectrum values and root solvers.
//!
//! The entropy spectra of the pair-frequency level sets come in four
//! flavors, all in nats:
//!
//! - `solve_kps`: the base constraint set, `-ln(1-p)` at the root of
//!   `p^2 = (1-p)^3`;
//! - `h_a_alpha`: the level set at pair frequency alpha, from the two-
//!   equation root system;
//! - `h_normal_alpha`: the normal-sequence slice, `(1/2) ln 2 + (1/2)
//!   H(2 alpha)`, empty for alpha > 1/2;
//! - `h_freq`: the digit-frequency slice, `(1 - t/2) H((2t - a)/(2 - t))
//!   + (t/2) H((t - a)/t)` on `a <= t <= (2 + a)/3`.
//!
//! All solvers are bisection-first on brackets guaranteed by monotonicity
//! or concavity, with residuals reported. Entropies convert to bits by
//! dividing by ln 2 (the Hausdorff-dimension normalization on the binary
//! shift).

use std::io::Write;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpectraError {
    #[error("binary entropy argument {0} outside [0, 1]")]
    EntropyDomain(f64),
    #[error("alpha = {0} outside [0, 1]")]
    AlphaDomain(f64),
    #[error("alpha = {0} outside [0, 1) for this solver")]
    SolverAlphaDomain(f64),
    #[error("theta = {0} outside [0, 1]")]
    ThetaDomain(f64),
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("solver detected multiple sign changes on the bracket; root is not unique")]
    MultipleBrackets,
    #[error("grid step must be positive, got {0}")]
    BadGridStep(f64),
    #[error("grid range [{start}, {stop}] must lie within [0, 1]")]
    GridRange { start: f64, stop: f64 },
    #[error("frequency family scan requires a theta value or grid")]
    MissingTheta,
}

const LN_2: f64 = std::f64::consts::LN_2;

/// x ln x with the 0 ln 0 = 0 convention.
#[inline]
pub(crate) fn xlnx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Binary entropy H(t) = -t ln t - (1-t) ln(1-t) in nats, H(0) = H(1) = 0.
pub fn binary_entropy(t: f64) -> Result<f64, SpectraError> {
    if !(0.0..=1.0).contains(&t) {
        return Err(SpectraError::EntropyDomain(t));
    }
    Ok(-xlnx(t) - xlnx(1.0 - t))
}

/// Bisection on a bracket with f(lo) < 0 < f(hi) (signs may be swapped).
/// Runs to floating-point interval exhaustion.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = f(lo);
    debug_assert!(f_lo * f(hi) <= 0.0, "bisect called without a sign change");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Regime tag on a spectrum value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// Formula evaluated strictly inside its domain.
    Interior,
    /// Domain edge reached by a limit convention.
    Boundary,
    /// The level set is empty; no entropy value exists.
    EmptySet,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Interior => "interior",
            Regime::Boundary => "boundary",
            Regime::EmptySet => "empty-set",
        }
    }
}

/// One row of a spectrum tabulation.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumPoint {
    pub alpha: f64,
    pub theta: Option<f64>,
    /// Entropy in nats; `None` in the empty-set regime.
    pub entropy_nats: Option<f64>,
    /// Solver residual (0 for closed forms).
    pub residual: f64,
    pub regime: Regime,
}

impl SpectrumPoint {
    pub fn entropy_bits(&self) -> Option<f64> {
        self.entropy_nats.map(|h| h / LN_2)
    }
}

impl Serialize for SpectrumPoint {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Row {
            alpha: f64,
            theta: Option<f64>,
            entropy_nats: Option<f64>,
            entropy_bits: Option<f64>,
            regime: &'static str,
            residual: f64,
        }
        Row {
            alpha: self.alpha,
            theta: self.theta,
            entropy_nats: self.entropy_nats,
            entropy_bits: self.entropy_bits(),
            regime: self.regime.as_str(),
            residual: self.residual,
        }
        .serialize(serializer)
    }
}

/// Root of `p^2 = (1-p)^3` and the base-set entropy `-ln(1-p)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KpsSolution {
    pub p: f64,
    pub entropy_nats: f64,
    pub residual: f64,
}

/// Solve `p^2 = (1-p)^3` by bisection on [0, 1]; the left side minus the
/// right is strictly increasing from -1 to 1, so the root is unique.
pub fn solve_kps(tol: f64) -> Result<KpsSolution, SpectraError> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(SpectraError::BadTolerance(tol));
    }
    let f = |p: f64| p * p - (1.0 - p).powi(3);
    let p = bisect(f, 0.0, 1.0);
    let residual = f(p).abs();
    debug_assert!(residual <= tol.max(1e-15));
    Ok(KpsSolution {
        p,
        entropy_nats: -(1.0 - p).ln(),
        residual,
    })
}

/// Roots of the two-equation system behind the level-set spectrum:
/// `p^2 (1-q) = (1-p)^3` and `2 p q = alpha (2 + p - q)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PsRoots {
    pub p: f64,
    pub q: f64,
    /// |p^2 (1-q) - (1-p)^3|
    pub residual_growth: f64,
    /// |2 p q - alpha (2 + p - q)|
    pub residual_frequency: f64,
}

/// Eliminate q = alpha (2 + p) / (2 p + alpha) from the second equation
/// and bisect the first in p. A 64-point scan asserts the sign change is
/// unique before bisecting (uniqueness is not re-proved here).
pub fn solve_ps(alpha: f64, tol: f64) -> Result<PsRoots, SpectraError> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(SpectraError::SolverAlphaDomain(alpha));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(SpectraError::BadTolerance(tol));
    }
    let q_of = |p: f64| {
        if alpha == 0.0 {
            0.0
        } else {
            alpha * (2.0 + p) / (2.0 * p + alpha)
        }
    };
    let g = |p: f64| {
        if p == 0.0 {
            // p^2 (1 - q) vanishes; only -(1-p)^3 survives.
            return -1.0;
        }
        p * p * (1.0 - q_of(p)) - (1.0 - p).powi(3)
    };
    // A 64-point scan asserts the sign changes exactly once; hitting an
    // exact zero counts as that one crossing.
    let mut sign_changes = 0u32;
    let mut prev_sign = -1i32; // g(0) = -1
    for i in 1..=64 {
        let val = g(i as f64 / 64.0);
        let sign = if val > 0.0 {
            1
        } else if val < 0.0 {
            -1
        } else {
            continue;
        };
        if sign != prev_sign {
            sign_changes += 1;
        }
        prev_sign = sign;
    }
    if sign_changes > 1 {
        return Err(SpectraError::MultipleBrackets);
    }
    let p = bisect(g, 0.0, 1.0);
    let q = q_of(p).clamp(0.0, 1.0);
    let residual_growth = (p * p * (1.0 - q) - (1.0 - p).powi(3)).abs();
    let residual_frequency = (2.0 * p * q - alpha * (2.0 + p - q)).abs();
    debug_assert!(residual_growth <= tol.max(1e-14));
    Ok(PsRoots {
        p,
        q,
        residual_growth,
        residual_frequency,
    })
}

/// Entropy of the pair-frequency level set at alpha:
/// `-ln(1-p) - (alpha/2) ln [q (1-p) / (p (1-q))]` at the system roots.
/// alpha = 1 degenerates to (p, q) = (1, 1); it is reported as a zero-
/// entropy boundary point rather than extrapolated.
pub fn h_a_alpha(alpha: f64) -> Result<SpectrumPoint, SpectraError> {
    h_a_alpha_with_tol(alpha, 1e-12)
}

pub fn h_a_alpha_with_tol(alpha: f64, tol: f64) -> Result<SpectrumPoint, SpectraError> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(SpectraError::AlphaDomain(alpha));
    }
    if alpha == 1.0 {
        return Ok(SpectrumPoint {
            alpha,
            theta: None,
            entropy_nats: Some(0.0),
            residual: 0.0,
            regime: Regime::Boundary,
        });
    }
    let roots = solve_ps(alpha, tol)?;
    let base = -(1.0 - roots.p).ln();
    let correction = if alpha == 0.0 {
        0.0
    } else {
        let log_ratio = roots.q.ln() + (1.0 - roots.p).ln() - roots.p.ln() - (1.0 - roots.q).ln();
        alpha / 2.0 * log_ratio
    };
    Ok(SpectrumPoint {
        alpha,
        theta: None,
        entropy_nats: Some(base - correction),
        residual: roots.residual_growth.max(roots.residual_frequency),
        regime: Regime::Interior,
    })
}

/// Entropy of the normal slice: `(1/2) ln 2 + (1/2) H(2 alpha)` for
/// alpha <= 1/2, empty set beyond.
pub fn h_normal_alpha(alpha: f64) -> Result<SpectrumPoint, SpectraError> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(SpectraError::AlphaDomain(alpha));
    }
    if alpha > 0.5 {
        return Ok(SpectrumPoint {
            alpha,
            theta: None,
            entropy_nats: None,
            residual: 0.0,
            regime: Regime::EmptySet,
        });
    }
    let h = 0.5 * LN_2 + 0.5 * binary_entropy(2.0 * alpha)?;
    Ok(SpectrumPoint {
        alpha,
        theta: None,
        entropy_nats: Some(h),
        residual: 0.0,
        regime: Regime::Interior,
    })
}

/// Entropy of the digit-frequency slice at (theta, alpha):
/// `(1 - theta/2) H((2 theta - alpha)/(2 - theta)) + (theta/2) H((theta -
/// alpha)/theta)` on `alpha <= theta <= (2 + alpha)/3`, empty set off the
/// domain. (0, 0) is the all-zeros point mass with entropy 0.
pub fn h_freq(theta: f64, alpha: f64) -> Result<SpectrumPoint, SpectraError> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(SpectraError::AlphaDomain(alpha));
    }
    if !(0.0..=1.0).contains(&theta) {
        return Err(SpectraError::ThetaDomain(theta));
    }
    let upper = (2.0 + alpha) / 3.0;
    if alpha > theta || theta > upper {
        return Ok(SpectrumPoint {
            alpha,
            theta: Some(theta),
            entropy_nats: None,
            residual: 0.0,
            regime: Regime::EmptySet,
        });
    }
    if theta == 0.0 {
        // alpha = 0 forced: the single all-zeros sequence.
        return Ok(SpectrumPoint {
            alpha,
            theta: Some(theta),
            entropy_nats: Some(0.0),
            residual: 0.0,
            regime: Regime::Boundary,
        });
    }
    let first = (1.0 - theta / 2.0) * binary_entropy((2.0 * theta - alpha) / (2.0 - theta))?;
    let second = theta / 2.0 * binary_entropy((theta - alpha) / theta)?;
    let edge = 1e-12;
    let regime = if (theta - alpha).abs() <= edge || (upper - theta).abs() <= edge {
        Regime::Boundary
    } else {
        Regime::Interior
    };
    Ok(SpectrumPoint {
        alpha,
        theta: Some(theta),
        entropy_nats: Some(first + second),
        residual: 0.0,
        regime,
    })
}

/// Result of the stationary-theta solve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorollaryRoot {
    pub theta: f64,
    /// |d h_freq / d theta| at the root.
    pub derivative_residual: f64,
    /// |(2t-a)^2 (t-a) (2-t) - t (2-3t+a)^3| at the root.
    pub relation_residual: f64,
}

/// The theta maximizing `h_freq(theta, alpha)`, i.e. the unique root of
/// `(2t-a)^2 (t-a)(2-t) = t (2-3t+a)^3` inside `(alpha, (2+alpha)/3)`.
///
/// The half-log of that ratio is the theta-derivative of the spectrum;
/// it decreases from +inf to -inf across the admissible interval, so
/// bisection brackets it directly.
pub fn solve_corollary_theta(alpha: f64, tol: f64) -> Result<CorollaryRoot, SpectraError> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(SpectraError::SolverAlphaDomain(alpha));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(SpectraError::BadTolerance(tol));
    }
    let upper = (2.0 + alpha) / 3.0;
    let derivative = |theta: f64| {
        0.5 * (theta.ln() + 3.0 * (2.0 - 3.0 * theta + alpha).ln()
            - 2.0 * (2.0 * theta - alpha).ln()
            - (theta - alpha).ln()
            - (2.0 - theta).ln())
    };
    let margin = 1e-13_f64.max((upper - alpha) * 1e-14);
    let theta = bisect(derivative, alpha + margin, upper - margin);
    let relation = ((2.0 * theta - alpha).powi(2) * (theta - alpha) * (2.0 - theta)
        - theta * (2.0 - 3.0 * theta + alpha).powi(3))
    .abs();
    let root = CorollaryRoot {
        theta,
        derivative_residual: derivative(theta).abs(),
        relation_residual: relation,
    };
    debug_assert!(root.relation_residual <= tol.max(1e-12));
    Ok(root)
}

/// The alpha = 0 stationary point in closed radical form:
/// `(2/3) (1 + (2/23)^(2/3) (cbrt(3 sqrt 69 - 23) - cbrt(3 sqrt 69 + 23)))`,
/// the unique real root of `4 t^2 (2 - t) = (2 - 3t)^3`.
pub fn theta_star_closed_form() -> f64 {
    let s = 69.0_f64.sqrt();
    let scale = (2.0 / 23.0_f64).powf(2.0 / 3.0);
    2.0 / 3.0 * (1.0 + scale * ((3.0 * s - 23.0).cbrt() - (3.0 * s + 23.0).cbrt()))
}

/// Which spectrum family a scan tabulates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumFamily {
    /// h_top of the pair-frequency level set (solver-backed).
    LevelSet,
    /// h_top of the normal slice.
    Normal,
    /// h_top of the digit-frequency slice (needs theta).
    Frequency,
}

/// Inclusive numeric grid `start, start+step, ..., stop` (endpoints hit
/// within 1e-9).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    start: f64,
    stop: f64,
    step: f64,
}

impl GridSpec {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self, SpectraError> {
        if step.is_nan() || step <= 0.0 {
            return Err(SpectraError::BadGridStep(step));
        }
        if !(0.0..=1.0).contains(&start) || !(0.0..=1.0).contains(&stop) {
            return Err(SpectraError::GridRange { start, stop });
        }
        Ok(GridSpec { start, stop, step })
    }

    /// Single-point grid.
    pub fn point(value: f64) -> Result<Self, SpectraError> {
        GridSpec::new(value, value, 1.0)
    }

    pub fn points(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut k = 0u64;
        loop {
            let value = self.start + k as f64 * self.step;
            if value > self.stop + 1e-9 {
                break;
            }
            out.push(value.min(self.stop));
            k += 1;
        }
        out
    }
}

impl std::str::FromStr for GridSpec {
    type Err = String;

    /// Parse `start:stop:step` (or a bare number as a single point).
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = text.split(':').collect();
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| format!("bad number {s:?}: {e}"))
        };
        match parts.as_slice() {
            [single] => GridSpec::point(parse(single)?).map_err(|e| e.to_string()),
            [start, stop, step] => {
                GridSpec::new(parse(start)?, parse(stop)?, parse(step)?).map_err(|e| e.to_string())
            }
            _ => Err(format!(
                "grid {text:?} must be start:stop:step or a single value"
            )),
        }
    }
}

/// Tabulate a spectrum family over an alpha grid (and a theta grid for
/// the frequency family). Rows are emitted in grid order, alpha outer.
pub fn spectrum_scan(
    family: SpectrumFamily,
    alpha_grid: &GridSpec,
    theta_grid: Option<&GridSpec>,
    tol: f64,
) -> Result<Vec<SpectrumPoint>, SpectraError> {
    let mut rows = Vec::new();
    for alpha in alpha_grid.points() {
        match family {
            SpectrumFamily::LevelSet => rows.push(h_a_alpha_with_tol(alpha, tol)?),
            SpectrumFamily::Normal => rows.push(h_normal_alpha(alpha)?),
            SpectrumFamily::Frequency => {
                let thetas = theta_grid.ok_or(SpectraError::MissingTheta)?;
                for theta in thetas.points() {
                    rows.push(h_freq(theta, alpha)?);
                }
            }
        }
    }
    Ok(rows)
}

/// Fixed-layout CSV for scan rows:
/// `alpha,theta,entropy_nats,entropy_bits,regime,residual` with empty
/// fields where a value does not exist.
pub fn write_scan_csv<W: Write>(rows: &[SpectrumPoint], mut out: W) -> std::io::Result<()> {
    writeln!(out, "alpha,theta,entropy_nats,entropy_bits,regime,residual")?;
    for row in rows {
        let theta = row.theta.map(|t| t.to_string()).unwrap_or_default();
        let nats = row.entropy_nats.map(|h| h.to_string()).unwrap_or_default();
        let bits = row
            .entropy_bits()
            .map(|h| h.to_string())
            .unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{}",
            row.alpha,
            theta,
            nats,
            bits,
            row.regime.as_str(),
            row.residual
        )?;
    }
    Ok(())
}
