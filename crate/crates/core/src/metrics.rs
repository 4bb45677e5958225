//! Exact distance evaluation between finitely supported (signed) mass
//! sequences, plus per-point gap profiles against a Poisson baseline.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;
use crate::pmf::{poisson_pmf, poisson_tail_table, MassView};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceKind {
    Tv,
    Chi2,
    Kl,
    Wasserstein,
    Kolmogorov,
    Point,
}

impl DistanceKind {
    pub const ALL: [DistanceKind; 6] = [
        DistanceKind::Tv,
        DistanceKind::Chi2,
        DistanceKind::Kl,
        DistanceKind::Wasserstein,
        DistanceKind::Kolmogorov,
        DistanceKind::Point,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DistanceKind::Tv => "tv",
            DistanceKind::Chi2 => "chi2",
            DistanceKind::Kl => "kl",
            DistanceKind::Wasserstein => "wasserstein",
            DistanceKind::Kolmogorov => "kolmogorov",
            DistanceKind::Point => "point",
        }
    }
}

impl std::str::FromStr for DistanceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DistanceKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown distance kind {s:?}")))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DistanceReport {
    pub kind: DistanceKind,
    pub value: f64,
    /// Inclusive bounds of the support the summation ran over.
    pub support_used: (usize, usize),
    /// Mass unaccounted for by the truncated inputs.
    pub truncation_residual: f64,
}

fn union_support(p: MassView<'_>, q: MassView<'_>) -> (usize, usize) {
    let (plo, phi) = p.support();
    let (qlo, qhi) = q.support();
    (plo.min(qlo), phi.max(qhi))
}

/// Exact distance between two mass sequences.
///
/// `chi2` is the weighted quadratic form sum (p - q)^2 / weight, so the
/// second-order and signed-measure left-hand sides are expressible by passing
/// the Poisson baseline as the weight; it defaults to `q` when `q` is a
/// probability sequence. `kl` requires probability arguments with `p`
/// absolutely continuous with respect to `q`.
pub fn distance<'a, 'b>(
    kind: DistanceKind,
    p: impl Into<MassView<'a>>,
    q: impl Into<MassView<'b>>,
    weight: Option<&crate::pmf::Pmf>,
) -> Result<DistanceReport> {
    let p = p.into();
    let q = q.into();
    let residual = (1.0 - p.total()).abs() + (1.0 - q.total()).abs();
    let (value, support) = match kind {
        DistanceKind::Tv => {
            let (lo, hi) = union_support(p, q);
            let mut acc = CompensatedSum::new();
            for m in lo..=hi {
                acc.add((p.value_at(m) - q.value_at(m)).abs());
            }
            let tv = 0.5 * acc.total();
            debug_assert!(!(p.probability && q.probability) || tv <= 1.0 + 1e-12);
            (tv, (lo, hi))
        }
        DistanceKind::Point => {
            let (lo, hi) = union_support(p, q);
            let mut max = 0.0f64;
            for m in lo..=hi {
                max = max.max((p.value_at(m) - q.value_at(m)).abs());
            }
            (max, (lo, hi))
        }
        DistanceKind::Kolmogorov | DistanceKind::Wasserstein => {
            let (lo, hi) = union_support(p, q);
            let mut cum = CompensatedSum::new();
            let mut sup = 0.0f64;
            let mut sum = CompensatedSum::new();
            for m in lo..=hi {
                cum.add(p.value_at(m) - q.value_at(m));
                let gap = cum.total().abs();
                sup = sup.max(gap);
                sum.add(gap);
            }
            match kind {
                DistanceKind::Kolmogorov => (sup, (lo, hi)),
                _ => (sum.total(), (lo, hi)),
            }
        }
        DistanceKind::Chi2 => chi2_distance(p, q, weight)?,
        DistanceKind::Kl => {
            if !p.probability || !q.probability {
                return Err(Error::InvalidInput(
                    "kl divergence is defined for probability arguments only".into(),
                ));
            }
            let (lo, hi) = union_support(p, q);
            let mut acc = CompensatedSum::new();
            for m in lo..=hi {
                let pm = p.value_at(m);
                if pm == 0.0 {
                    continue; // 0 log 0 = 0
                }
                let qm = q.value_at(m);
                let log_q = if qm > 0.0 {
                    qm.ln()
                } else {
                    match q.log_value_at(m) {
                        Some(lq) if lq.is_finite() => lq,
                        _ => return Err(Error::AbsoluteContinuity { m, p: pm }),
                    }
                };
                acc.add(pm * (pm.ln() - log_q));
            }
            (acc.total(), (lo, hi))
        }
    };
    Ok(DistanceReport {
        kind,
        value,
        support_used: support,
        truncation_residual: residual,
    })
}

fn chi2_distance(
    p: MassView<'_>,
    q: MassView<'_>,
    weight: Option<&crate::pmf::Pmf>,
) -> Result<(f64, (usize, usize))> {
    let (weight_view, weight_is_q) = match weight {
        Some(w) => (w.view(), false),
        None => {
            if !q.probability {
                return Err(Error::InvalidInput(
                    "chi2 needs an explicit positive weight when q is signed".into(),
                ));
            }
            (q, true)
        }
    };
    let (wlo, whi) = weight_view.support();
    // mass outside the weight support cannot be normalized
    for view in [&p, &q] {
        let (lo, hi) = view.support();
        for m in (lo..wlo.min(hi + 1)).chain((whi + 1).max(lo)..=hi) {
            if view.value_at(m) != 0.0 {
                return Err(Error::InvalidInput(format!(
                    "chi2 weight support [{wlo}, {whi}] does not cover mass at m = {m}; widen the weight's support hint"
                )));
            }
        }
    }
    let mut acc = CompensatedSum::new();
    for m in wlo..=whi {
        let diff = p.value_at(m) - q.value_at(m);
        let w = weight_view.value_at(m);
        if w > 0.0 {
            acc.add(diff * diff / w);
        } else if diff != 0.0 {
            // the weight underflowed linearly; fall back to its log value
            match weight_view.log_value_at(m) {
                Some(lw) if lw.is_finite() => acc.add((2.0 * diff.abs().ln() - lw).exp()),
                _ => return Err(Error::ZeroWeight(m)),
            }
        }
    }
    if weight_is_q {
        // far-tail terms where p = 0 reduce to the q-tail mass, added
        // analytically instead of term-by-term
        acc.add((1.0 - weight_view.total()).max(0.0));
    }
    Ok((acc.total(), (wlo, whi)))
}

/// Per-point absolute pmf and CDF gaps between two mass sequences over the
/// union of their supports.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GapPoint {
    pub m: usize,
    pub pmf_gap: f64,
    pub cdf_gap: f64,
}

pub fn pointwise_gaps<'a, 'b>(
    p: impl Into<MassView<'a>>,
    q: impl Into<MassView<'b>>,
) -> Vec<GapPoint> {
    let p = p.into();
    let q = q.into();
    let (lo, hi) = union_support(p, q);
    let mut cum = CompensatedSum::new();
    let mut out = Vec::with_capacity(hi - lo + 1);
    for m in lo..=hi {
        let diff = p.value_at(m) - q.value_at(m);
        cum.add(diff);
        out.push(GapPoint {
            m,
            pmf_gap: diff.abs(),
            cdf_gap: cum.total().abs(),
        });
    }
    out
}

/// One row of the nonuniform gap profile against Poisson(lambda).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct NonuniformGap {
    pub m: usize,
    pub cdf_gap: f64,
    pub pmf_gap: f64,
    pub z_value: f64,
}

/// Per-point CDF and pmf gaps of `p` against Poisson(lambda), paired with the
/// Poisson tail split Z(m), over the union support.
pub fn nonuniform_gap<'a>(p: impl Into<MassView<'a>>, lambda: f64) -> Result<Vec<NonuniformGap>> {
    if lambda <= 0.0 || lambda.is_nan() {
        return Err(Error::NonpositiveLambda(lambda));
    }
    let p = p.into();
    let pois = poisson_pmf(lambda, Some(p.support()))?;
    let gaps = pointwise_gaps(p, &pois);
    let hi = gaps.last().map_or(0, |g| g.m);
    let (lower, upper) = poisson_tail_table(lambda, hi);
    Ok(gaps
        .into_iter()
        .map(|g| NonuniformGap {
            m: g.m,
            cdf_gap: g.cdf_gap,
            pmf_gap: g.pmf_gap,
            z_value: lower[g.m].min(upper[g.m]),
        })
        .collect())
}
