//! The signed approximants with generating functions
//! e^(lambda(z-1)) (1 - lambda2 (z-1)^2 / 2) and e^(lambda(z-1) - lambda2 (z-1)^2 / 2),
//! plus the probabilists' Hermite machinery backing the second one.

use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::numeric::ln_gamma;
use crate::params::BernoulliParams;
use crate::pmf::{poisson_pmf, SignedPmf, SignedVariant, MASS_TRUNCATION};

/// Which signed approximant to construct.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Approximant {
    /// Poisson times (1 - lambda2/2 C_2): the two-term Charlier correction.
    P1,
    /// Coefficients of e^(lambda(z-1) - lambda2 (z-1)^2 / 2).
    P2,
}

/// Probabilists' Hermite polynomial He_m(x): He_0 = 1, He_1 = x,
/// He_{m+1} = x He_m - m He_{m-1}.
pub fn hermite_poly(m: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if m == 0 {
        return prev;
    }
    let mut cur = x;
    for j in 1..m {
        let next = x * cur - j as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// (sign, ln |He_m(x)|) for every m in 0..=m_max, by the same recurrence with
/// periodic renormalization so large degrees cannot overflow.
fn hermite_ln_all(m_max: usize, x: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(m_max + 1);
    let mut prev = 1.0f64;
    let mut cur = x;
    let mut shift = 0i64; // true value = stored * 2^shift
    out.push((1.0, 0.0));
    if m_max == 0 {
        return out;
    }
    let ln_of = |v: f64, shift: i64| {
        if v == 0.0 {
            (0.0, f64::NEG_INFINITY)
        } else {
            (v.signum(), v.abs().ln() + shift as f64 * LN_2)
        }
    };
    out.push(ln_of(cur, shift));
    for j in 1..m_max {
        let next = x * cur - j as f64 * prev;
        prev = cur;
        cur = next;
        let mag = cur.abs().max(prev.abs());
        if mag > 2f64.powi(512) {
            cur *= 2f64.powi(-512);
            prev *= 2f64.powi(-512);
            shift += 512;
        } else if mag > 0.0 && mag < 2f64.powi(-512) {
            cur *= 2f64.powi(512);
            prev *= 2f64.powi(512);
            shift -= 512;
        }
        out.push(ln_of(cur, shift));
    }
    out
}

fn ldexp(x: f64, e: i64) -> f64 {
    let mut v = x;
    let mut e = e;
    while e > 600 {
        v *= 2f64.powi(600);
        e -= 600;
    }
    while e < -600 {
        v *= 2f64.powi(-600);
        e += 600;
    }
    v * 2f64.powi(e as i32)
}

/// The signed measure as a finitely supported sequence. Total mass is 1 for
/// both variants (their generating functions equal 1 at z = 1); the support is
/// extended past the bulk until entries stay below the truncation threshold.
pub fn signed_measure_pmf(
    params: &BernoulliParams,
    variant: Approximant,
    support_hint: Option<(usize, usize)>,
) -> Result<SignedPmf> {
    let lambda = params.lambda();
    if lambda <= 0.0 {
        return Err(Error::NonpositiveLambda(lambda));
    }
    let lambda2 = params.lambda2();
    if lambda2 == 0.0 {
        // both corrections vanish: plain Poisson
        let pois = poisson_pmf(lambda, support_hint)?;
        let tag = match variant {
            Approximant::P1 => SignedVariant::P1,
            Approximant::P2 => SignedVariant::P2,
        };
        return Ok(SignedPmf::new(pois.offset(), pois.masses().to_vec(), tag));
    }
    match variant {
        Approximant::P1 => p1_pmf(lambda, lambda2, support_hint),
        Approximant::P2 => p2_pmf(lambda, lambda2, support_hint),
    }
}

fn support_cap(lambda: f64, hint: Option<(usize, usize)>) -> usize {
    let cap = (lambda + 40.0 * (lambda + 1.0).sqrt() + 120.0).ceil() as usize;
    cap.max(hint.map_or(0, |h| h.1))
}

/// Trim sub-threshold entries from both ends, never cutting into the hint.
fn trim_support(
    values: Vec<f64>,
    hint: Option<(usize, usize)>,
    variant: SignedVariant,
) -> SignedPmf {
    let (hint_lo, hint_hi) = hint.unwrap_or((usize::MAX, 0));
    let mut lo = 0usize;
    while lo + 1 < values.len() && values[lo].abs() < MASS_TRUNCATION && lo < hint_lo {
        lo += 1;
    }
    let mut hi = values.len() - 1;
    while hi > lo && values[hi].abs() < MASS_TRUNCATION && hi > hint_hi {
        hi -= 1;
    }
    SignedPmf::new(lo, values[lo..=hi].to_vec(), variant)
}

fn p1_pmf(lambda: f64, lambda2: f64, hint: Option<(usize, usize)>) -> Result<SignedPmf> {
    let cap = support_cap(lambda, hint);
    let ln_lambda = lambda.ln();
    let mut values = Vec::new();
    let mut below = 0usize;
    for m in 0..=cap {
        let mf = m as f64;
        let log_mass = mf * ln_lambda - lambda - ln_gamma(mf + 1.0);
        // C_2(lambda, m) in closed form
        let c2 = (mf * mf - (2.0 * lambda + 1.0) * mf + lambda * lambda) / (lambda * lambda);
        let poly = 1.0 - 0.5 * lambda2 * c2;
        let v = if poly == 0.0 {
            0.0
        } else {
            poly.signum() * (log_mass + poly.abs().ln()).exp()
        };
        values.push(v);
        below = if v.abs() < MASS_TRUNCATION { below + 1 } else { 0 };
        if mf > lambda && below >= 5 && m >= hint.map_or(0, |h| h.1) {
            break;
        }
    }
    Ok(trim_support(values, hint, SignedVariant::P1))
}

fn p2_pmf(lambda: f64, lambda2: f64, hint: Option<(usize, usize)>) -> Result<SignedPmf> {
    let cap = support_cap(lambda, hint);
    // Stable linear recurrence from the exponent's derivative:
    //   m q_m = (lambda + lambda2) q_{m-1} - lambda2 q_{m-2},
    // run on a power-of-two-scaled pair so q_0 = e^(-lambda - lambda2/2) may sit
    // far below the representable range without losing the recurrence.
    let ln_q0 = -(lambda + 0.5 * lambda2);
    let mut shift = (ln_q0 / LN_2).floor() as i64;
    let mut prev2 = (ln_q0 - shift as f64 * LN_2).exp(); // scaled q_0
    let mut prev = (lambda + lambda2) * prev2; // scaled q_1
    let mut values = Vec::new();
    values.push(ldexp(prev2, shift));
    values.push(ldexp(prev, shift));
    let mut below = 0usize;
    for m in 2..=cap {
        let next = ((lambda + lambda2) * prev - lambda2 * prev2) / m as f64;
        prev2 = prev;
        prev = next;
        let mag = prev.abs().max(prev2.abs());
        if mag > 2f64.powi(512) {
            prev *= 2f64.powi(-512);
            prev2 *= 2f64.powi(-512);
            shift += 512;
        } else if mag > 0.0 && mag < 2f64.powi(-512) {
            prev *= 2f64.powi(512);
            prev2 *= 2f64.powi(512);
            shift -= 512;
        }
        let v = ldexp(prev, shift);
        values.push(v);
        below = if v.abs() < MASS_TRUNCATION { below + 1 } else { 0 };
        if m as f64 > lambda + lambda2 && below >= 5 && m >= hint.map_or(0, |h| h.1) {
            break;
        }
    }
    cross_check_hermite(lambda, lambda2, &values)?;
    Ok(trim_support(values, hint, SignedVariant::P2))
}

/// Hermite closed form: q_m = e^(-lambda - lambda2/2) lambda2^(m/2)
/// He_m((lambda + lambda2)/sqrt(lambda2)) / m!, checked against the recurrence
/// wherever either route is meaningfully nonzero relative to the peak.
fn cross_check_hermite(lambda: f64, lambda2: f64, recurrence: &[f64]) -> Result<()> {
    let max_rel = hermite_disagreement(lambda, lambda2, recurrence);
    if max_rel > 1e-8 {
        return Err(Error::Inconsistent(format!(
            "recurrence vs Hermite closed form disagree by {max_rel:e} (relative)"
        )));
    }
    Ok(())
}

fn hermite_disagreement(lambda: f64, lambda2: f64, recurrence: &[f64]) -> f64 {
    let x = (lambda + lambda2) / lambda2.sqrt();
    let hermites = hermite_ln_all(recurrence.len() - 1, x);
    let ln_base = -(lambda + 0.5 * lambda2);
    let peak = recurrence.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let mut max_rel = 0.0f64;
    for (m, &rec) in recurrence.iter().enumerate() {
        let (sign, ln_he) = hermites[m];
        let ln_q = ln_base + 0.5 * m as f64 * lambda2.ln() + ln_he - ln_gamma(m as f64 + 1.0);
        let herm = sign * ln_q.exp();
        let scale = rec.abs().max(herm.abs());
        if scale >= 1e-12 * peak && scale > 0.0 {
            max_rel = max_rel.max((rec - herm).abs() / scale);
        }
    }
    max_rel
}

/// Largest gated relative disagreement between the recurrence and the Hermite
/// closed form over 0..=m_max; diagnostic surface for the consistency check
/// applied inside [`signed_measure_pmf`].
pub fn p2_cross_check(params: &BernoulliParams, m_max: usize) -> Result<f64> {
    let lambda = params.lambda();
    if lambda <= 0.0 {
        return Err(Error::NonpositiveLambda(lambda));
    }
    let lambda2 = params.lambda2();
    if lambda2 == 0.0 {
        return Ok(0.0);
    }
    let p2 = p2_pmf(lambda, lambda2, Some((0, m_max)))?;
    let mut values = vec![0.0; p2.offset()];
    values.extend_from_slice(p2.values());
    values.truncate(m_max + 1);
    Ok(hermite_disagreement(lambda, lambda2, &values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::compensated_sum;

    #[test]
    fn hermite_base_cases() {
        for x in [-2.0, 0.0, 0.5, 3.0] {
            assert_eq!(hermite_poly(0, x), 1.0);
            assert_eq!(hermite_poly(1, x), x);
        }
        // He_2(2) = 4 - 1
        assert_eq!(hermite_poly(2, 2.0), 3.0);
        // stored-triple recurrence identity
        for m in 1..12usize {
            let x = 1.7;
            let lhs = hermite_poly(m + 1, x);
            let rhs = x * hermite_poly(m, x) - m as f64 * hermite_poly(m - 1, x);
            assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1.0));
        }
    }

    #[test]
    fn hermite_generating_function_oracle() {
        // [t^m] exp(x t - t^2/2) = He_m(x)/m!, by truncated series multiplication
        for &x in &[0.0, 1.0, 3.0] {
            let order = 24;
            let mut exp_xt = vec![0.0f64; order + 1];
            let mut term = 1.0;
            for (k, slot) in exp_xt.iter_mut().enumerate() {
                *slot = term;
                term *= x / (k as f64 + 1.0);
            }
            let mut gauss = vec![0.0f64; order + 1];
            let mut gterm = 1.0;
            for k in 0..=order / 2 {
                gauss[2 * k] = gterm;
                gterm *= -0.5 / (k as f64 + 1.0);
            }
            let mut product = vec![0.0f64; order + 1];
            for i in 0..=order {
                for j in 0..=order - i {
                    product[i + j] += exp_xt[i] * gauss[j];
                }
            }
            let mut factorial = 1.0;
            for (m, &coeff) in product.iter().enumerate().take(11) {
                if m > 0 {
                    factorial *= m as f64;
                }
                let want = hermite_poly(m, x) / factorial;
                assert!(
                    (coeff - want).abs() <= 1e-12 * want.abs().max(1.0),
                    "x={x} m={m}"
                );
            }
        }
    }

    #[test]
    fn p1_value_by_hand() {
        // probs = [0.5]: P1 at 0 is e^(-1/2) (1 - 0.125 C_2(0.5, 0)) with C_2(0.5, 0) = 1
        let params = BernoulliParams::from_probs([0.5]).unwrap();
        let p1 = signed_measure_pmf(&params, Approximant::P1, None).unwrap();
        let want = (-0.5f64).exp() * 0.875;
        assert!((p1.value_at(0) - want).abs() < 1e-15);
        assert!((want - 0.5307).abs() < 1e-4);
    }

    #[test]
    fn signed_totals_and_p1_mean() {
        for (n, p) in [(10, 0.1), (25, 0.2), (200, 0.25), (60, 0.45)] {
            let params = BernoulliParams::uniform(n, p).unwrap();
            for variant in [Approximant::P1, Approximant::P2] {
                let sm = signed_measure_pmf(&params, variant, None).unwrap();
                assert!(
                    (sm.total() - 1.0).abs() < 1e-9,
                    "n={n} p={p} {variant:?}: total {}",
                    sm.total()
                );
            }
            let p1 = signed_measure_pmf(&params, Approximant::P1, None).unwrap();
            assert!((p1.mean() - params.lambda()).abs() < 1e-8);
        }
    }

    #[test]
    fn lambda2_zero_degenerates_to_poisson() {
        // lambda2 = 0 with lambda > 0 only arises in the infinitely-divided limit
        let params = BernoulliParams::poisson_limit(2.0).unwrap();
        let pois = crate::pmf::poisson_pmf(2.0, None).unwrap();
        for variant in [Approximant::P1, Approximant::P2] {
            let sm = signed_measure_pmf(&params, variant, None).unwrap();
            for m in 0..=pois.support().1 {
                assert_eq!(sm.value_at(m), pois.mass_at(m));
            }
        }
        // all-zero trials have lambda = 0 and stay a domain error
        let zero = BernoulliParams::from_probs([0.0, 0.0]).unwrap();
        assert!(signed_measure_pmf(&zero, Approximant::P1, None).is_err());
    }

    #[test]
    fn taylor_series_oracle_small_n() {
        // direct power-series coefficients of the generating functions,
        // multiplied out to order n + 30
        for probs in [vec![0.3, 0.1, 0.25], vec![0.05; 8]] {
            let params = BernoulliParams::from_probs(probs).unwrap();
            let lambda = params.lambda();
            let lambda2 = params.lambda2();
            let order = params.n() + 30;
            // e^(lambda (z-1)) = e^-lambda sum lambda^m/m! z^m
            let mut pois = vec![0.0f64; order + 1];
            let mut term = (-lambda).exp();
            for (m, slot) in pois.iter_mut().enumerate() {
                *slot = term;
                term *= lambda / (m as f64 + 1.0);
            }
            // P1 = pois * (1 - lambda2/2 (z-1)^2)
            let quad = [1.0 - lambda2 / 2.0, lambda2, -lambda2 / 2.0];
            let mut p1_series = vec![0.0f64; order + 1];
            for (i, &c) in quad.iter().enumerate() {
                for m in 0..=order - i {
                    p1_series[m + i] += c * pois[m];
                }
            }
            // P2 = pois * exp(-lambda2 (z-1)^2 / 2)
            let mut gauss = vec![0.0f64; order + 1];
            gauss[0] = 1.0;
            let mut pow = vec![0.0f64; order + 1]; // (z-1)^(2k) scaled
            pow[0] = 1.0;
            let mut coeff = 1.0;
            for k in 1..=order / 2 {
                // multiply pow by (z-1)^2 = 1 - 2z + z^2
                let mut next = vec![0.0f64; order + 1];
                for m in 0..=order {
                    if pow[m] == 0.0 {
                        continue;
                    }
                    next[m] += pow[m];
                    if m < order {
                        next[m + 1] -= 2.0 * pow[m];
                    }
                    if m + 2 <= order {
                        next[m + 2] += pow[m];
                    }
                }
                pow = next;
                coeff *= -lambda2 / 2.0 / k as f64;
                for m in 0..=order {
                    gauss[m] += coeff * pow[m];
                }
            }
            let mut p2_series = vec![0.0f64; order + 1];
            for i in 0..=order {
                if gauss[i] == 0.0 {
                    continue;
                }
                for m in 0..=order - i {
                    p2_series[m + i] += gauss[i] * pois[m];
                }
            }

            let p1 = signed_measure_pmf(&params, Approximant::P1, Some((0, order))).unwrap();
            let p2 = signed_measure_pmf(&params, Approximant::P2, Some((0, order))).unwrap();
            for m in 0..=params.n() + 10 {
                assert!(
                    (p1.value_at(m) - p1_series[m]).abs() < 1e-10,
                    "P1 m={m}: {} vs {}",
                    p1.value_at(m),
                    p1_series[m]
                );
                assert!(
                    (p2.value_at(m) - p2_series[m]).abs() < 1e-10,
                    "P2 m={m}: {} vs {}",
                    p2.value_at(m),
                    p2_series[m]
                );
            }
        }
    }

    #[test]
    fn p2_recurrence_agrees_with_hermite() {
        let params = BernoulliParams::uniform(10, 0.1).unwrap();
        let rel = p2_cross_check(&params, 30).unwrap();
        assert!(rel < 1e-9, "relative disagreement {rel}");
        let p2 = signed_measure_pmf(&params, Approximant::P2, None).unwrap();
        assert!((p2.total() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn p2_chi2_identity() {
        // sum (pois - P2)^2 / pois = 1/sqrt(1 - theta^2) - 1
        for (n, p) in [(25usize, 0.2), (9, 0.6)] {
            let params = BernoulliParams::uniform(n, p).unwrap();
            let theta = params.theta();
            let lambda = params.lambda();
            let hi = (lambda + 25.0 * lambda.sqrt() + 40.0).ceil() as usize;
            let pois = poisson_pmf(lambda, Some((0, hi))).unwrap();
            let p2 = signed_measure_pmf(&params, Approximant::P2, Some((0, hi))).unwrap();
            let logs = pois.log_masses().unwrap();
            let terms: Vec<f64> = (0..=hi)
                .map(|m| {
                    let diff = pois.mass_at(m) - p2.value_at(m);
                    if diff == 0.0 {
                        0.0
                    } else {
                        (2.0 * diff.abs().ln() - logs[m - pois.offset()]).exp()
                    }
                })
                .collect();
            let lhs = compensated_sum(terms);
            let rhs = 1.0 / (1.0 - theta * theta).sqrt() - 1.0;
            assert!(
                (lhs - rhs).abs() < 1e-6 * rhs,
                "n={n} p={p}: {lhs} vs {rhs}"
            );
        }
    }
}
