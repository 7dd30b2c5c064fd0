//! Bounded objective functions with evaluation counting.
//!
//! Minimization is the canonical direction throughout the crate.

use std::f64::consts::{E, PI};
use std::fmt;
use std::sync::Arc;

use crate::{Error, Result};

type Evaluator = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// An objective `f: R^d -> R` over a box, with a per-trial evaluation counter.
///
/// Cloning shares the evaluator but copies the counter, so each trial works
/// on its own clone via [`Objective::fresh`].
#[derive(Clone)]
pub struct Objective {
    name: String,
    lower: Vec<f64>,
    upper: Vec<f64>,
    evaluator: Evaluator,
    known_optimum: Option<(Vec<f64>, f64)>,
    eval_count: u64,
    max_evals: Option<u64>,
}

impl fmt::Debug for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Objective")
            .field("name", &self.name)
            .field("dim", &self.dim())
            .field("eval_count", &self.eval_count)
            .field("max_evals", &self.max_evals)
            .finish()
    }
}

impl Objective {
    pub fn new<F>(name: impl Into<String>, lower: Vec<f64>, upper: Vec<f64>, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(Error::domain(format!(
                "bounds must be non-empty and of equal length, got {} and {}",
                lower.len(),
                upper.len()
            )));
        }
        if let Some(i) = (0..lower.len())
            .find(|&i| !(lower[i].is_finite() && upper[i].is_finite() && lower[i] < upper[i]))
        {
            return Err(Error::domain(format!(
                "bound {i} must satisfy lower < upper, got [{}, {}]",
                lower[i], upper[i]
            )));
        }
        Ok(Self {
            name: name.into(),
            lower,
            upper,
            evaluator: Arc::new(f),
            known_optimum: None,
            eval_count: 0,
            max_evals: None,
        })
    }

    /// Same bounds on every coordinate.
    pub fn boxed<F>(name: impl Into<String>, dim: usize, lo: f64, hi: f64, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        Self::new(name, vec![lo; dim], vec![hi; dim], f)
    }

    pub fn with_known_optimum(mut self, point: Vec<f64>, value: f64) -> Result<Self> {
        if point.len() != self.dim() {
            return Err(Error::domain("known optimum has the wrong dimension"));
        }
        self.known_optimum = Some((point, value));
        Ok(self)
    }

    /// Caps the number of evaluations; further calls fail with
    /// [`Error::BudgetExhausted`].
    pub fn with_max_evals(mut self, max_evals: Option<u64>) -> Self {
        self.max_evals = max_evals;
        self
    }

    /// A clone with the counter reset.
    pub fn fresh(&self) -> Self {
        let mut o = self.clone();
        o.eval_count = 0;
        o
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn width(&self, k: usize) -> f64 {
        self.upper[k] - self.lower[k]
    }

    pub fn known_optimum(&self) -> Option<(&[f64], f64)> {
        self.known_optimum.as_ref().map(|(p, v)| (p.as_slice(), *v))
    }

    pub fn eval_count(&self) -> u64 {
        self.eval_count
    }

    pub fn max_evals(&self) -> Option<u64> {
        self.max_evals
    }

    pub fn budget_left(&self) -> Option<u64> {
        self.max_evals.map(|m| m.saturating_sub(self.eval_count))
    }

    /// Evaluates `f(x)` and increments the counter by one.
    pub fn evaluate(&mut self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::domain(format!(
                "point has dimension {}, objective `{}` expects {}",
                x.len(),
                self.name,
                self.dim()
            )));
        }
        if let Some(m) = self.max_evals {
            if self.eval_count >= m {
                return Err(Error::BudgetExhausted(m));
            }
        }
        self.eval_count += 1;
        Ok((self.evaluator)(x))
    }

    /// Evaluates without touching the counter (for reporting only).
    pub fn peek(&self, x: &[f64]) -> f64 {
        (self.evaluator)(x)
    }

    /// Clamps `x` into the box in place.
    pub fn clamp(&self, x: &mut [f64]) {
        for (k, xi) in x.iter_mut().enumerate() {
            *xi = xi.clamp(self.lower[k], self.upper[k]);
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .enumerate()
                .all(|(k, v)| *v >= self.lower[k] && *v <= self.upper[k])
    }
}

/// Sphere `sum x_i^2`; minimum 0 at the origin.
pub fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// Rosenbrock with `a = 1`, `b = 100`; minimum 0 at `(1, ..., 1)`.
pub fn rosenbrock(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
        .sum()
}

/// Ackley (`a = 20`, `b = 0.2`, `c = 2 pi`); minimum 0 at the origin.
pub fn ackley(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let sq = x.iter().map(|v| v * v).sum::<f64>() / n;
    let cs = x.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / n;
    -20.0 * (-0.2 * sq.sqrt()).exp() - cs.exp() + 20.0 + E
}

/// Rastrigin `10 d + sum (x_i^2 - 10 cos(2 pi x_i))`; minimum 0 at the origin.
pub fn rastrigin(x: &[f64]) -> f64 {
    10.0 * x.len() as f64
        + x.iter()
            .map(|v| v * v - 10.0 * (2.0 * PI * v).cos())
            .sum::<f64>()
}

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: [&str; 4] = ["sphere", "rosenbrock", "ackley", "rastrigin"];

/// Conventional search box for a builtin.
pub fn default_bounds(name: &str) -> Option<(f64, f64)> {
    match name {
        "sphere" | "rastrigin" => Some((-5.12, 5.12)),
        "rosenbrock" => Some((-5.0, 10.0)),
        "ackley" => Some((-32.768, 32.768)),
        _ => None,
    }
}

/// Builds a benchmark objective by name with its known optimum filled in.
pub fn builtin(name: &str, dim: usize, bounds: Option<(f64, f64)>) -> Result<Objective> {
    if dim == 0 {
        return Err(Error::domain("objective dimension must be >= 1"));
    }
    let (lo, hi) = match bounds.or_else(|| default_bounds(name)) {
        Some(b) => b,
        None => {
            return Err(Error::domain(format!(
                "unknown objective `{name}` (expected one of {})",
                BUILTIN_NAMES.join(", ")
            )))
        }
    };
    let (f, opt): (fn(&[f64]) -> f64, f64) = match name {
        "sphere" => (sphere, 0.0),
        "rosenbrock" => (rosenbrock, 1.0),
        "ackley" => (ackley, 0.0),
        "rastrigin" => (rastrigin, 0.0),
        _ => return Err(Error::domain(format!("unknown objective `{name}`"))),
    };
    Objective::boxed(name, dim, lo, hi, f)?.with_known_optimum(vec![opt; dim], 0.0)
}
