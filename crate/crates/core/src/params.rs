//! Bernoulli trial parameters and the scalar summaries derived from them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;

/// Hard cap on the number of trials accepted by the convolution routines.
pub const MAX_TRIALS: usize = 10_000;

/// Success probabilities of independent Bernoulli trials together with the
/// power sums `lambda_m = sum p_j^m` and the shape parameters every bound in
/// this crate consumes.
#[derive(Debug, Clone, Serialize)]
pub struct BernoulliParams {
    probs: Vec<f64>,
    lambda: f64,
    lambda2: f64,
    lambda3: f64,
    lambda4: f64,
    theta: f64,
    sigma: f64,
    p_star: f64,
    varpi: f64,
}

impl BernoulliParams {
    /// Validate the probabilities and derive all scalar summaries.
    ///
    /// `theta` is defined as 0 when `lambda` is 0, and `varpi` is the closed-form
    /// maximum of exp(2 p t (1 - p t)) over t in [0, 1] (attained at
    /// t = min(1, 1/(2p))), maximized over the trials.
    pub fn from_probs(probs: impl Into<Vec<f64>>) -> Result<Self> {
        let probs = probs.into();
        for (index, &p) in probs.iter().enumerate() {
            if !(0.0..=1.0).contains(&p) || p.is_nan() {
                return Err(Error::ProbOutOfRange { index, value: p });
            }
        }
        let mut sums = [CompensatedSum::new(); 4];
        let mut p_star = 0.0f64;
        let mut max_exponent = 0.0f64;
        for &p in &probs {
            let mut pow = p;
            for acc in sums.iter_mut() {
                acc.add(pow);
                pow *= p;
            }
            p_star = p_star.max(p);
            let exponent = if p >= 0.5 { 0.5 } else { 2.0 * p * (1.0 - p) };
            max_exponent = max_exponent.max(exponent);
        }
        let [lambda, lambda2, lambda3, lambda4] = sums.map(|s| s.total());
        let theta = if lambda > 0.0 { lambda2 / lambda } else { 0.0 };
        Ok(Self {
            probs,
            lambda,
            lambda2,
            lambda3,
            lambda4,
            theta,
            sigma: (lambda - lambda2).max(0.0).sqrt(),
            p_star,
            varpi: max_exponent.exp(),
        })
    }

    /// n identical trials with success probability p.
    pub fn uniform(n: usize, p: f64) -> Result<Self> {
        Self::from_probs(vec![p; n])
    }

    /// The infinitely-divided limit with mean `lambda`: every higher power sum
    /// vanishes, so theta = 0 and the signed approximants collapse to Poisson.
    pub fn poisson_limit(lambda: f64) -> Result<Self> {
        if lambda < 0.0 || lambda.is_nan() {
            return Err(Error::NegativeLambda(lambda));
        }
        Ok(Self {
            probs: Vec::new(),
            lambda,
            lambda2: 0.0,
            lambda3: 0.0,
            lambda4: 0.0,
            theta: 0.0,
            sigma: lambda.sqrt(),
            p_star: 0.0,
            varpi: 1.0,
        })
    }

    pub fn n(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// lambda = sum of the p_j.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn lambda2(&self) -> f64 {
        self.lambda2
    }

    pub fn lambda3(&self) -> f64 {
        self.lambda3
    }

    pub fn lambda4(&self) -> f64 {
        self.lambda4
    }

    /// theta = lambda2 / lambda, the universal small parameter.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// sigma = sqrt(lambda - lambda2).
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Largest success probability.
    pub fn p_star(&self) -> f64 {
        self.p_star
    }

    /// max_j sup_{0<=t<=1} exp(2 p_j t (1 - p_j t)).
    pub fn varpi(&self) -> f64 {
        self.varpi
    }
}

/// JSON input document: either explicit probabilities or a uniform family.
///
/// ```json
/// {"probs": [0.1, 0.2, 0.3]}
/// {"uniform": {"n": 100, "p": 0.05}}
/// ```
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct InputDoc {
    probs: Option<Vec<f64>>,
    uniform: Option<UniformSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct UniformSpec {
    n: usize,
    p: f64,
}

/// Parse a probability input document. Decimal literals go through the
/// standard correctly-rounded text-to-f64 conversion.
pub fn params_from_json(text: &str) -> Result<BernoulliParams> {
    let doc: InputDoc =
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))?;
    match (doc.probs, doc.uniform) {
        (Some(probs), None) => BernoulliParams::from_probs(probs),
        (None, Some(u)) => {
            if u.n > MAX_TRIALS {
                return Err(Error::TooManyTrials(u.n));
            }
            BernoulliParams::uniform(u.n, u.p)
        }
        _ => Err(Error::InvalidInput(
            "expected exactly one of \"probs\" or \"uniform\"".into(),
        )),
    }
}
