//! LMS-family update rules and the lp-norm penalty.
//!
//! Every rule has the shape
//!
//! ```text
//! w' = leak * w + mu * e * x - rho_p * g(w)
//! ```
//!
//! with `e = d - w.x`. Plain LMS has `leak = 1` and no penalty, leaky LMS uses
//! `leak = 1 - mu*gamma`, the lp variants subtract the bounded lp-norm
//! gradient `g`, and the leaky lp variant uses `1 + mu*gamma` by default (see
//! [`LeakSign`]).
//!
//! The public `*_update` functions are pure. [`Algorithm::step`] performs the
//! same arithmetic in place and is what the Monte-Carlo harness uses; both go
//! through one code path so their results agree bit for bit.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Which direction the leakage term pushes the weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum LeakSign {
    /// `(1 + mu*gamma) w`: weight growth. Default for the leaky lp rule.
    #[default]
    Plus,
    /// `(1 - mu*gamma) w`: classical leakage toward zero.
    Minus,
}

impl LeakSign {
    pub fn as_str(self) -> &'static str {
        match self {
            LeakSign::Plus => "plus",
            LeakSign::Minus => "minus",
        }
    }
}

impl FromStr for LeakSign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "plus" | "+" => Ok(LeakSign::Plus),
            "minus" | "-" => Ok(LeakSign::Minus),
            other => Err(Error::param(
                "leak_sign",
                format!("expected `plus` or `minus`, got `{other}`"),
            )),
        }
    }
}

/// The four supported update rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Lms,
    Llms,
    LpLms,
    LpLlms,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Lms,
        Algorithm::Llms,
        Algorithm::LpLms,
        Algorithm::LpLlms,
    ];

    /// Machine-readable key used in config files and CSV headers.
    pub fn key(self) -> &'static str {
        match self {
            Algorithm::Lms => "lms",
            Algorithm::Llms => "llms",
            Algorithm::LpLms => "lp_lms",
            Algorithm::LpLlms => "lp_llms",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Algorithm::Lms => "LMS",
            Algorithm::Llms => "LLMS",
            Algorithm::LpLms => "lp-LMS",
            Algorithm::LpLlms => "lp-LLMS",
        }
    }

    /// Whether the rule carries the lp-norm penalty term.
    pub fn is_penalized(self) -> bool {
        matches!(self, Algorithm::LpLms | Algorithm::LpLlms)
    }

    pub fn is_leaky(self) -> bool {
        matches!(self, Algorithm::Llms | Algorithm::LpLlms)
    }

    /// Checks the parameters this rule actually reads.
    pub fn validate(self, params: &FilterParams) -> Result<()> {
        if !(params.mu.is_finite() && params.mu > 0.0) {
            return Err(Error::param(
                "mu",
                format!("must be > 0, got {}", params.mu),
            ));
        }
        if self == Algorithm::Llms && !(0.0..1.0).contains(&params.gamma) {
            return Err(Error::param(
                "gamma",
                format!("must lie in [0, 1), got {}", params.gamma),
            ));
        }
        if self == Algorithm::LpLlms && !(params.gamma.is_finite() && params.gamma >= 0.0) {
            return Err(Error::param(
                "gamma",
                format!("must be >= 0, got {}", params.gamma),
            ));
        }
        if self.is_penalized() {
            if !(params.rho_p.is_finite() && params.rho_p >= 0.0) {
                return Err(Error::param(
                    "rho_p",
                    format!("must be >= 0, got {}", params.rho_p),
                ));
            }
            if params.rho_p > 0.0 {
                check_p(params.p)?;
                if !(params.epsilon_p.is_finite() && params.epsilon_p >= 0.0) {
                    return Err(Error::param(
                        "epsilon_p",
                        format!("must be >= 0, got {}", params.epsilon_p),
                    ));
                }
            }
        }
        Ok(())
    }

    /// In-place update of `w`. Returns `(prediction, error)`.
    ///
    /// On divergence `w` is left partially updated and must be discarded.
    pub fn step(
        self,
        w: &mut [f64],
        x: &[f64],
        desired: f64,
        params: &FilterParams,
    ) -> Result<(f64, f64)> {
        self.validate(params)?;
        let leak = match self {
            Algorithm::Lms | Algorithm::LpLms => None,
            Algorithm::Llms => Some(1.0 - params.mu * params.gamma),
            Algorithm::LpLlms => Some(match params.leak_sign {
                LeakSign::Plus => 1.0 + params.mu * params.gamma,
                LeakSign::Minus => 1.0 - params.mu * params.gamma,
            }),
        };
        let penalty = if self.is_penalized() && params.rho_p != 0.0 {
            Some(Penalty::new(w, params)?)
        } else {
            None
        };
        adapt_in_place(w, x, desired, params.mu, leak, penalty)
    }

    pub fn update(
        self,
        w: &[f64],
        x: &[f64],
        desired: f64,
        params: &FilterParams,
    ) -> Result<UpdateResult> {
        let mut new_weights = w.to_vec();
        let (prediction, error) = self.step(&mut new_weights, x, desired, params)?;
        Ok(UpdateResult {
            new_weights,
            error,
            prediction,
        })
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        Algorithm::ALL
            .into_iter()
            .find(|a| a.key() == key)
            .ok_or_else(|| {
                Error::param(
                    "algorithm",
                    format!("unknown algorithm `{s}` (expected lms, llms, lp_lms or lp_llms)"),
                )
            })
    }
}

/// Hyperparameters shared by the four rules. Each rule ignores the fields it
/// does not use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterParams {
    /// Step size.
    pub mu: f64,
    /// Leakage factor.
    pub gamma: f64,
    /// Penalty step, `mu * gamma_p`.
    pub rho_p: f64,
    /// Bound added to the penalty denominator.
    pub epsilon_p: f64,
    /// Norm exponent, in (0, 1).
    pub p: f64,
    pub leak_sign: LeakSign,
}

impl Default for FilterParams {
    fn default() -> Self {
        FilterParams {
            mu: 0.015,
            gamma: 0.0,
            rho_p: 0.0,
            epsilon_p: 10.0,
            p: 0.5,
            leak_sign: LeakSign::Plus,
        }
    }
}

impl FilterParams {
    pub fn with_mu(mu: f64) -> Self {
        FilterParams {
            mu,
            ..Default::default()
        }
    }

    /// Penalty weight in the cost function, `rho_p / mu`.
    pub fn gamma_p(&self) -> f64 {
        self.rho_p / self.mu
    }

    /// Sets `rho_p = mu * gamma_p`.
    pub fn set_gamma_p(&mut self, gamma_p: f64) {
        self.rho_p = self.mu * gamma_p;
    }

    /// Resolves the penalty step from whichever of `rho_p` / `gamma_p` was
    /// supplied, rejecting inconsistent pairs.
    pub fn resolve_rho_p(mu: f64, rho_p: Option<f64>, gamma_p: Option<f64>) -> Result<Option<f64>> {
        match (rho_p, gamma_p) {
            (None, None) => Ok(None),
            (Some(rho), None) => Ok(Some(rho)),
            (None, Some(g)) => Ok(Some(mu * g)),
            (Some(rho), Some(g)) => {
                let implied = mu * g;
                let scale = rho.abs().max(implied.abs()).max(f64::MIN_POSITIVE);
                if (rho - implied).abs() / scale > 1e-9 {
                    Err(Error::param(
                        "rho_p",
                        format!("rho_p = {rho} is inconsistent with mu * gamma_p = {implied}"),
                    ))
                } else {
                    Ok(Some(rho))
                }
            }
        }
    }
}

/// Outcome of one pure update.
#[derive(Debug, Clone, PartialEq)]
pub struct UpdateResult {
    pub new_weights: Vec<f64>,
    /// `desired - prediction`.
    pub error: f64,
    pub prediction: f64,
}

fn check_len(w: &[f64], x: &[f64]) -> Result<()> {
    if w.len() != x.len() {
        return Err(Error::Dimension {
            expected: w.len(),
            actual: x.len(),
        });
    }
    Ok(())
}

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::param("p", format!("must lie in (0, 1), got {p}")))
    }
}

/// Inner product `w . x`.
pub fn predict(w: &[f64], x: &[f64]) -> Result<f64> {
    check_len(w, x)?;
    Ok(dot(w, x))
}

#[inline]
fn dot(w: &[f64], x: &[f64]) -> f64 {
    w.iter().zip(x).map(|(a, b)| a * b).sum()
}

/// Sign function with `sgn(0) = 0`.
#[inline]
pub fn sgn(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `(sum |w_i|^p)^(1/p)` for `0 < p < 1`. Zero for the zero vector.
pub fn lp_norm(w: &[f64], p: f64) -> Result<f64> {
    check_p(p)?;
    if let Some(tap) = w.iter().position(|v| !v.is_finite()) {
        return Err(Error::Divergence {
            tap,
            iteration: None,
        });
    }
    Ok(lp_norm_unchecked(w, p))
}

fn lp_norm_unchecked(w: &[f64], p: f64) -> f64 {
    let sum: f64 = w.iter().map(|v| v.abs().powf(p)).sum();
    if sum == 0.0 {
        0.0
    } else {
        sum.powf(1.0 / p)
    }
}

/// Per-update penalty state: `||w||_p^(1-p)` is shared by every tap.
#[derive(Debug, Clone, Copy)]
struct Penalty {
    rho_p: f64,
    p: f64,
    epsilon_p: f64,
    norm_factor: f64,
}

impl Penalty {
    fn new(w: &[f64], params: &FilterParams) -> Result<Self> {
        let norm = lp_norm(w, params.p)?;
        Ok(Penalty {
            rho_p: params.rho_p,
            p: params.p,
            epsilon_p: params.epsilon_p,
            norm_factor: norm.powf(1.0 - params.p),
        })
    }

    /// `||w||_p^(1-p) sgn(w_i) / (eps + |w_i|^(1-p))`; zero when `w_i = 0`.
    #[inline]
    fn direction(&self, wi: f64) -> f64 {
        if wi == 0.0 {
            return 0.0;
        }
        self.norm_factor * sgn(wi) / (self.epsilon_p + wi.abs().powf(1.0 - self.p))
    }
}

/// Unscaled lp-norm penalty direction, one entry per tap.
///
/// With `epsilon_p = 0` this is exactly the gradient of [`lp_norm`] at every
/// nonzero tap. Zero taps always get 0.
pub fn lp_penalty_gradient(w: &[f64], p: f64, epsilon_p: f64) -> Result<Vec<f64>> {
    if !(epsilon_p.is_finite() && epsilon_p >= 0.0) {
        return Err(Error::param(
            "epsilon_p",
            format!("must be >= 0, got {epsilon_p}"),
        ));
    }
    let penalty = Penalty::new(
        w,
        &FilterParams {
            p,
            epsilon_p,
            rho_p: 1.0,
            ..Default::default()
        },
    )?;
    let g: Vec<f64> = w.iter().map(|&wi| penalty.direction(wi)).collect();
    if let Some(tap) = g.iter().position(|v| !v.is_finite()) {
        return Err(Error::Divergence {
            tap,
            iteration: None,
        });
    }
    Ok(g)
}

fn adapt_in_place(
    w: &mut [f64],
    x: &[f64],
    desired: f64,
    mu: f64,
    leak: Option<f64>,
    penalty: Option<Penalty>,
) -> Result<(f64, f64)> {
    check_len(w, x)?;
    let prediction = dot(w, x);
    let error = desired - prediction;
    let gain = mu * error;
    for (tap, (wi, &xi)) in w.iter_mut().zip(x).enumerate() {
        let old = *wi;
        let mut next = match leak {
            Some(factor) => factor * old + gain * xi,
            None => old + gain * xi,
        };
        if let Some(pen) = &penalty {
            next -= pen.rho_p * pen.direction(old);
        }
        if !next.is_finite() {
            return Err(Error::Divergence {
                tap,
                iteration: None,
            });
        }
        *wi = next;
    }
    Ok((prediction, error))
}

/// `w' = w + mu e x`.
pub fn lms_update(
    w: &[f64],
    x: &[f64],
    desired: f64,
    params: &FilterParams,
) -> Result<UpdateResult> {
    Algorithm::Lms.update(w, x, desired, params)
}

/// `w' = (1 - mu gamma) w + mu e x`.
pub fn llms_update(
    w: &[f64],
    x: &[f64],
    desired: f64,
    params: &FilterParams,
) -> Result<UpdateResult> {
    Algorithm::Llms.update(w, x, desired, params)
}

/// `w' = w + mu e x - rho_p g(w)`.
pub fn lp_lms_update(
    w: &[f64],
    x: &[f64],
    desired: f64,
    params: &FilterParams,
) -> Result<UpdateResult> {
    Algorithm::LpLms.update(w, x, desired, params)
}

/// `w' = (1 +/- mu gamma) w + mu e x - rho_p g(w)`, sign from
/// [`FilterParams::leak_sign`].
pub fn lp_llms_update(
    w: &[f64],
    x: &[f64],
    desired: f64,
    params: &FilterParams,
) -> Result<UpdateResult> {
    Algorithm::LpLlms.update(w, x, desired, params)
}
