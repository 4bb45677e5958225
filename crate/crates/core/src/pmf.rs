//! Exact pmf construction (Poisson and Poisson-binomial) and Poisson tail splits.

use crate::error::{Error, Result};
use crate::numeric::{ln_gamma, CompensatedSum};
use crate::params::{BernoulliParams, MAX_TRIALS};

/// Per-mass truncation threshold: support ends where masses drop below this.
/// Keeps distance truncation errors far below every test tolerance (1e-8).
pub const MASS_TRUNCATION: f64 = 1e-18;

/// Finitely supported probability mass sequence on the integers `offset..`.
#[derive(Debug, Clone)]
pub struct Pmf {
    offset: usize,
    masses: Vec<f64>,
    log_masses: Option<Vec<f64>>,
}

impl Pmf {
    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn log_masses(&self) -> Option<&[f64]> {
        self.log_masses.as_deref()
    }

    /// Inclusive support bounds (lo, hi).
    pub fn support(&self) -> (usize, usize) {
        (self.offset, self.offset + self.masses.len() - 1)
    }

    pub fn mass_at(&self, m: usize) -> f64 {
        if m < self.offset {
            return 0.0;
        }
        self.masses.get(m - self.offset).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        crate::numeric::compensated_sum(self.masses.iter().copied())
    }

    pub fn mean(&self) -> f64 {
        let mut acc = CompensatedSum::new();
        for (i, &mass) in self.masses.iter().enumerate() {
            acc.add((self.offset + i) as f64 * mass);
        }
        acc.total()
    }

    pub fn view(&self) -> MassView<'_> {
        MassView {
            offset: self.offset,
            values: &self.masses,
            log_values: self.log_masses.as_deref(),
            probability: true,
        }
    }
}

/// Finitely supported signed mass sequence; the approximants carry total mass 1
/// but individual entries may be negative.
#[derive(Debug, Clone)]
pub struct SignedPmf {
    offset: usize,
    values: Vec<f64>,
    variant: SignedVariant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignedVariant {
    P1,
    P2,
    Custom,
}

impl SignedPmf {
    pub(crate) fn new(offset: usize, values: Vec<f64>, variant: SignedVariant) -> Self {
        Self {
            offset,
            values,
            variant,
        }
    }

    /// Wrap an arbitrary signed sequence.
    pub fn from_parts(offset: usize, values: Vec<f64>) -> Self {
        Self::new(offset, values, SignedVariant::Custom)
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn variant(&self) -> SignedVariant {
        self.variant
    }

    pub fn support(&self) -> (usize, usize) {
        (self.offset, self.offset + self.values.len() - 1)
    }

    pub fn value_at(&self, m: usize) -> f64 {
        if m < self.offset {
            return 0.0;
        }
        self.values.get(m - self.offset).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        crate::numeric::compensated_sum(self.values.iter().copied())
    }

    pub fn mean(&self) -> f64 {
        let mut acc = CompensatedSum::new();
        for (i, &v) in self.values.iter().enumerate() {
            acc.add((self.offset + i) as f64 * v);
        }
        acc.total()
    }

    pub fn view(&self) -> MassView<'_> {
        MassView {
            offset: self.offset,
            values: &self.values,
            log_values: None,
            probability: false,
        }
    }
}

/// Borrowed view of a finitely supported (possibly signed) mass sequence,
/// the common currency of the distance routines.
#[derive(Debug, Clone, Copy)]
pub struct MassView<'a> {
    pub offset: usize,
    pub values: &'a [f64],
    pub log_values: Option<&'a [f64]>,
    pub probability: bool,
}

impl<'a> MassView<'a> {
    pub fn support(&self) -> (usize, usize) {
        (self.offset, self.offset + self.values.len() - 1)
    }

    pub fn value_at(&self, m: usize) -> f64 {
        if m < self.offset {
            return 0.0;
        }
        self.values.get(m - self.offset).copied().unwrap_or(0.0)
    }

    pub fn log_value_at(&self, m: usize) -> Option<f64> {
        let logs = self.log_values?;
        if m < self.offset {
            return None;
        }
        logs.get(m - self.offset).copied()
    }

    pub fn total(&self) -> f64 {
        crate::numeric::compensated_sum(self.values.iter().copied())
    }
}

impl<'a> From<&'a Pmf> for MassView<'a> {
    fn from(pmf: &'a Pmf) -> Self {
        pmf.view()
    }
}

impl<'a> From<&'a SignedPmf> for MassView<'a> {
    fn from(pmf: &'a SignedPmf) -> Self {
        pmf.view()
    }
}

fn poisson_log_mass(lambda: f64, m: usize) -> f64 {
    if lambda == 0.0 {
        return if m == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    m as f64 * lambda.ln() - lambda - ln_gamma(m as f64 + 1.0)
}

/// Poisson(lambda) pmf, computed in log space via log-gamma and truncated where
/// masses fall below [`MASS_TRUNCATION`] unless the hint widens the support.
pub fn poisson_pmf(lambda: f64, support_hint: Option<(usize, usize)>) -> Result<Pmf> {
    if lambda < 0.0 || lambda.is_nan() {
        return Err(Error::NegativeLambda(lambda));
    }
    let (auto_lo, auto_hi) = if lambda == 0.0 {
        (0usize, 0usize)
    } else {
        let sd = lambda.sqrt();
        let cand_lo = (lambda - 12.0 * sd - 30.0).floor().max(0.0) as usize;
        let cand_hi = (lambda + 12.0 * sd + 30.0).ceil() as usize;
        let mut lo = cand_lo;
        while lo < cand_hi && poisson_log_mass(lambda, lo).exp() < MASS_TRUNCATION {
            lo += 1;
        }
        let mut hi = cand_hi;
        while hi > lo && poisson_log_mass(lambda, hi).exp() < MASS_TRUNCATION {
            hi -= 1;
        }
        (lo, hi)
    };
    let (mut lo, mut hi) = (auto_lo, auto_hi);
    if let Some((hint_lo, hint_hi)) = support_hint {
        lo = lo.min(hint_lo);
        hi = hi.max(hint_hi);
    }
    let log_masses: Vec<f64> = (lo..=hi).map(|m| poisson_log_mass(lambda, m)).collect();
    let masses: Vec<f64> = log_masses.iter().map(|lm| lm.exp()).collect();
    Ok(Pmf {
        offset: lo,
        masses,
        log_masses: Some(log_masses),
    })
}

/// Exact Poisson-binomial pmf by iterative convolution: the running pmf is
/// multiplied by (q_j, p_j) one trial at a time, in linear space (all masses
/// are bounded by 1, so nothing can overflow).
pub fn poisson_binomial_pmf(params: &BernoulliParams) -> Result<Pmf> {
    let n = params.n();
    if n > MAX_TRIALS {
        return Err(Error::TooManyTrials(n));
    }
    let mut masses = Vec::with_capacity(n + 1);
    masses.push(1.0);
    for &p in params.probs() {
        let q = 1.0 - p;
        masses.push(0.0);
        for i in (1..masses.len()).rev() {
            masses[i] = masses[i] * q + masses[i - 1] * p;
        }
        masses[0] *= q;
    }
    let pmf = Pmf {
        offset: 0,
        masses,
        log_masses: None,
    };
    debug_assert!((pmf.total() - 1.0).abs() < 1e-12);
    Ok(pmf)
}

/// psi(x) = 1 - x + x log x, the exponent of the Poisson large-deviation tail.
pub fn psi(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        1.0 - x + x * x.ln()
    }
}

/// Poisson tail masses split at m, with the min of the two sides and its
/// closed-form upper estimate exp(-(m - lambda)^2 / (2 (m + lambda))).
#[derive(Debug, Clone, Copy)]
pub struct TailSplit {
    pub m: usize,
    pub lower_mass: f64,
    pub upper_mass: f64,
    pub z_value: f64,
    pub z_bound: f64,
}

pub fn tail_split(lambda: f64, m: usize) -> Result<TailSplit> {
    if lambda < 0.0 || lambda.is_nan() {
        return Err(Error::NegativeLambda(lambda));
    }
    let (lower, upper) = poisson_tail_table(lambda, m);
    let lower_mass = lower[m];
    let upper_mass = upper[m];
    let mf = m as f64;
    let z_bound = if mf + lambda == 0.0 {
        1.0
    } else {
        (-(mf - lambda).powi(2) / (2.0 * (mf + lambda))).exp()
    };
    Ok(TailSplit {
        m,
        lower_mass,
        upper_mass,
        z_value: lower_mass.min(upper_mass),
        z_bound,
    })
}

/// lower[m] = P(Poisson(lambda) <= m) and upper[m] = P(Poisson(lambda) > m)
/// for every m in 0..=m_max. The lower tails accumulate ascending and the
/// upper tails descending from a cap far beyond the mode, so neither side is
/// computed as a cancelling 1 - x.
pub fn poisson_tail_table(lambda: f64, m_max: usize) -> (Vec<f64>, Vec<f64>) {
    let cap = (lambda + 60.0 * lambda.sqrt() + 80.0).ceil() as usize;
    let cap = cap.max(m_max + 1);
    let mut lower = Vec::with_capacity(m_max + 1);
    let mut acc = CompensatedSum::new();
    for m in 0..=m_max {
        acc.add(poisson_log_mass(lambda, m).exp());
        lower.push(acc.total().min(1.0));
    }
    let mut upper = vec![0.0; m_max + 1];
    let mut tail = CompensatedSum::new();
    for m in (0..=cap).rev() {
        if m <= m_max {
            upper[m] = tail.total().min(1.0);
        }
        tail.add(poisson_log_mass(lambda, m).exp());
    }
    (lower, upper)
}
