//! Charlier polynomial evaluation, the remainder-envelope constants c_m,
//! absolute Charlier moments, and truncation tail bounds for Charlier-series
//! remainders.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::numeric::{integrate_adaptive, ln_gamma, CompensatedSum};

/// C_k(lambda, n) for the polynomials generated by (z-1)^k e^(lambda z),
/// orthogonal with respect to the Poisson(lambda) measure.
///
/// Evaluated by the three-term recurrence in the degree,
/// C_{k+1} = ((n - k - lambda) C_k - k C_{k-1}) / lambda,
/// which follows from the difference-equation system with C_0 = 1. The
/// alternating explicit sum is kept as a cross-check only (worse cancellation
/// for k > 2).
pub fn charlier_eval(k: usize, lambda: f64, n: usize) -> Result<f64> {
    Ok(*charlier_row(k, lambda, n)?.last().unwrap())
}

/// C_0(lambda, n) .. C_k(lambda, n) in one pass of the recurrence.
pub fn charlier_row(k: usize, lambda: f64, n: usize) -> Result<Vec<f64>> {
    if lambda <= 0.0 || lambda.is_nan() {
        return Err(Error::NonpositiveLambda(lambda));
    }
    let nf = n as f64;
    let mut row = Vec::with_capacity(k + 1);
    row.push(1.0);
    if k == 0 {
        return Ok(row);
    }
    row.push((nf - lambda) / lambda);
    for j in 1..k {
        let jf = j as f64;
        let next = ((nf - jf - lambda) * row[j] - jf * row[j - 1]) / lambda;
        row.push(next);
    }
    Ok(row)
}

/// The alternating falling-factorial expansion of C_k(lambda, n);
/// cross-check route for the recurrence.
pub fn charlier_explicit_sum(k: usize, lambda: f64, n: usize) -> Result<f64> {
    if lambda <= 0.0 || lambda.is_nan() {
        return Err(Error::NonpositiveLambda(lambda));
    }
    let mut binom = 1.0; // binom(k, j)
    let mut falling = 1.0; // n (n-1) ... (n-j+1)
    let mut lambda_pow = 1.0;
    let mut sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut acc = CompensatedSum::new();
    for j in 0..=k {
        acc.add(sign * binom * falling / lambda_pow);
        if j < k {
            binom *= (k - j) as f64 / (j + 1) as f64;
            falling *= n as f64 - j as f64;
            lambda_pow *= lambda;
            sign = -sign;
        }
    }
    Ok(acc.total())
}

/// The remainder-envelope constant
/// c_m = (1/m!) int_0^1 e^(t^2/2) (1-t)^(m-1) (m-1+t) dt,
/// which caps the order-m remainder of (1+z)e^-z against c_m |z|^(m+1) e^(|z|^2/2).
///
/// c_1 = sqrt(e) - 1 in closed form; the rest by quadrature of the smooth
/// integrand on [0, 1] to absolute error 1e-12.
pub fn remainder_constant(m: usize) -> f64 {
    assert!(m >= 1, "remainder constants are defined for m >= 1");
    if m == 1 {
        return c1();
    }
    let mf = m as f64;
    let integral = integrate_adaptive(
        &|t: f64| (t * t / 2.0).exp() * (1.0 - t).powi(m as i32 - 1) * (mf - 1.0 + t),
        0.0,
        1.0,
        1e-12,
        0.0,
    );
    integral / ln_gamma(mf + 1.0).exp()
}

/// c_1 = sqrt(e) - 1.
pub fn c1() -> f64 {
    std::f64::consts::E.sqrt() - 1.0
}

/// c_2 = (1/2) int_0^1 e^(t^2/2) (1 - t^2) dt, approximately 0.3706.
pub fn c2() -> f64 {
    static C2: OnceLock<f64> = OnceLock::new();
    *C2.get_or_init(|| remainder_constant(2))
}

/// S_k(lambda) = (1/2) sum_m e^(-lambda) lambda^m / m! |C_k(lambda, m)|
/// by direct truncated summation; the tail beyond lambda + 20 sqrt(lambda) + 20
/// is negligible by Cauchy-Schwarz against the orthogonality norms.
///
/// For k = 2 the m+/- boundary closed form is evaluated as well and the two
/// routes must agree to 1e-12.
pub fn charlier_abs_moment(k: usize, lambda: f64) -> Result<f64> {
    if lambda <= 0.0 || lambda.is_nan() {
        return Err(Error::NonpositiveLambda(lambda));
    }
    assert!(k >= 1);
    let m_max = (lambda + 20.0 * lambda.sqrt() + 20.0 + 3.0 * k as f64).ceil() as usize;
    let mut acc = CompensatedSum::new();
    for m in 0..=m_max {
        let log_mass = m as f64 * lambda.ln() - lambda - ln_gamma(m as f64 + 1.0);
        let row = charlier_row(k, lambda, m)?;
        acc.add(log_mass.exp() * row[k].abs());
    }
    let direct = 0.5 * acc.total();
    if k == 2 {
        let closed = abs_moment_k2_closed(lambda)?;
        if (closed - direct).abs() > 1e-12 * direct.abs().max(1.0) {
            return Err(Error::Inconsistent(format!(
                "second absolute Charlier moment: direct sum {direct:e} vs closed form {closed:e}"
            )));
        }
    }
    Ok(direct)
}

/// Closed form of S_2(lambda) at the sign changes of C_2:
/// e^(-lambda) (lambda^(m+ - 1)/m+! (m+ - lambda) + lambda^(m- - 1)/m-! (lambda - m-))
/// with m+/- = floor(lambda + 1/2 +/- sqrt(lambda + 1/4)).
pub fn abs_moment_k2_closed(lambda: f64) -> Result<f64> {
    if lambda <= 0.0 || lambda.is_nan() {
        return Err(Error::NonpositiveLambda(lambda));
    }
    let root = (lambda + 0.25).sqrt();
    let m_plus = (lambda + 0.5 + root).floor();
    let m_minus = (lambda + 0.5 - root).floor().max(0.0);
    let term = |m: f64, diff: f64| {
        ((m - 1.0) * lambda.ln() - lambda - ln_gamma(m + 1.0)).exp() * diff
    };
    Ok(term(m_plus, m_plus - lambda) + term(m_minus, lambda - m_minus))
}

/// Right-hand sides of the truncation tail bounds for an N-term Charlier
/// expansion of a function with |f(z)| <= K e^(H |z-1|^2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailBoundForm {
    /// Weighted-L2 remainder: K^2 ((2+eps)/eps) ((2+eps)H/lambda)^(N+1).
    L2,
    /// L1 remainder: K sqrt((2+eps)/eps) ((2+eps)H/lambda)^((N+1)/2).
    L1,
    /// Pointwise remainder: K ((2+eps)/eps) lambda^(-1/2) ((2+eps)H/lambda)^((N+1)/2).
    Pointwise,
}

/// The inequalities hold uniformly in N for lambda >= (2+eps)H; outside that
/// region nothing is asserted, so the call is rejected.
pub fn truncation_tail_bound(
    order: usize,
    lambda: f64,
    k_const: f64,
    h_const: f64,
    eps: f64,
    form: TailBoundForm,
) -> Result<f64> {
    assert!(k_const > 0.0 && h_const > 0.0 && eps > 0.0);
    let threshold = (2.0 + eps) * h_const;
    if lambda < threshold {
        return Err(Error::TailBoundHypothesis { lambda, threshold });
    }
    let ratio = threshold / lambda;
    let factor = (2.0 + eps) / eps;
    let half_power = ratio.powf((order as f64 + 1.0) / 2.0);
    Ok(match form {
        TailBoundForm::L2 => k_const * k_const * factor * half_power * half_power,
        TailBoundForm::L1 => k_const * factor.sqrt() * half_power,
        TailBoundForm::Pointwise => k_const * factor / lambda.sqrt() * half_power,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_degree_closed_forms() {
        // C_0 = 1, C_1 = (n - lambda)/lambda, C_2 = (n^2 - (2 lambda + 1) n + lambda^2)/lambda^2
        assert_eq!(charlier_eval(0, 3.7, 11).unwrap(), 1.0);
        assert!((charlier_eval(1, 2.0, 3).unwrap() - 0.5).abs() < 1e-15);
        assert!((charlier_eval(2, 1.0, 2).unwrap() - (-1.0)).abs() < 1e-15);
        assert!((charlier_eval(2, 0.5, 0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn charlier_at_zero_alternates() {
        // C_k(lambda, 0) = (-1)^k
        for k in 0..10 {
            let want = if k % 2 == 0 { 1.0 } else { -1.0 };
            assert!((charlier_eval(k, 1.7, 0).unwrap() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn recurrence_matches_explicit_sum() {
        for &lambda in &[0.5f64, 2.0, 10.0] {
            let hi = (lambda + 10.0 * lambda.sqrt()).ceil() as usize;
            for k in 0..=8 {
                for n in 0..=hi {
                    let rec = charlier_eval(k, lambda, n).unwrap();
                    let sum = charlier_explicit_sum(k, lambda, n).unwrap();
                    let scale = rec.abs().max(sum.abs()).max(1.0);
                    assert!(
                        (rec - sum).abs() <= 1e-8 * scale,
                        "k={k} lambda={lambda} n={n}: {rec} vs {sum}"
                    );
                }
            }
        }
    }

    #[test]
    fn symmetry_in_degree_and_argument() {
        // C_k(lambda, n) = (-1)^(n+k) C_n(lambda, k), relative to the natural
        // scale sqrt(k!/lambda^k) (the L2 norm under the Poisson weight); the
        // floor keeps the comparison meaningful at exact polynomial zeros such
        // as C_1(10, 10) = 0.
        for &lambda in &[0.5f64, 2.0, 10.0] {
            for k in 0..=10usize {
                for n in 0..=10usize {
                    let a = charlier_eval(k, lambda, n).unwrap();
                    let b = charlier_eval(n, lambda, k).unwrap();
                    let sign = if (n + k) % 2 == 0 { 1.0 } else { -1.0 };
                    let norm = |d: usize| {
                        (ln_gamma(d as f64 + 1.0) - d as f64 * lambda.ln()).exp().sqrt()
                    };
                    let scale = a.abs().max(b.abs()).max(norm(k)).max(norm(n));
                    assert!(
                        ((a - sign * b) / scale).abs() < 1e-9,
                        "k={k} n={n} lambda={lambda}: {a} vs {b}"
                    );
                }
            }
        }
    }

    #[test]
    fn rejects_nonpositive_lambda() {
        assert!(charlier_eval(2, 0.0, 1).is_err());
        assert!(charlier_eval(2, -1.0, 1).is_err());
    }

    #[test]
    fn remainder_constants() {
        assert!((remainder_constant(1) - 0.6487212707001282).abs() < 1e-15);
        assert!((c2() - 0.3706).abs() < 5e-5);
        // decreasing through m = 6
        let cs: Vec<f64> = (1..=6).map(remainder_constant).collect();
        for w in cs.windows(2) {
            assert!(w[1] < w[0]);
        }
        assert!(cs.iter().all(|&c| c > 0.0));
    }

    #[test]
    fn remainder_constant_m3_against_simpson_oracle() {
        // independent oracle: composite Simpson at fixed fine resolution
        let f = |t: f64| (t * t / 2.0).exp() * (1.0 - t).powi(2) * (2.0 + t);
        let n = 4000;
        let h = 1.0 / n as f64;
        let mut s = f(0.0) + f(1.0);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(i as f64 * h);
        }
        let oracle = s * h / 3.0 / 6.0;
        assert!((remainder_constant(3) - oracle).abs() < 1e-12);
    }

    #[test]
    fn abs_moment_small_lambda() {
        // at lambda = 1 the closed form gives exactly 3/(2e)
        let v = charlier_abs_moment(2, 1.0).unwrap();
        assert!((v - 1.5 * (-1.0f64).exp()).abs() < 1e-13);
        // Roos bound, tight at lambda = 1
        for &lambda in &[1.0, 2.0, 5.0] {
            let v = charlier_abs_moment(2, lambda).unwrap();
            assert!(v <= 3.0 / (2.0 * std::f64::consts::E * lambda) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn abs_moment_l1_bound() {
        // S_k <= (1/2) sqrt(k!) lambda^(-k/2)
        for &lambda in &[0.5, 2.0, 10.0] {
            for k in 1..=6usize {
                let v = charlier_abs_moment(k, lambda).unwrap();
                let cap = 0.5 * ln_gamma(k as f64 + 1.0).exp().sqrt() * lambda.powf(-(k as f64) / 2.0);
                assert!(v <= cap * (1.0 + 1e-12), "k={k} lambda={lambda}");
            }
        }
    }

    #[test]
    fn tail_bound_closed_forms() {
        // sqrt(3) * (1.5/3)^(3/2)
        let v = truncation_tail_bound(2, 3.0, 1.0, 0.5, 1.0, TailBoundForm::L1).unwrap();
        assert!((v - 3.0f64.sqrt() * 0.5f64.powf(1.5)).abs() < 1e-12);
        assert!((v - 0.61237).abs() < 1e-5);

        // ratio exactly 1: independent of order
        let a = truncation_tail_bound(0, 1.5, 1.0, 0.5, 1.0, TailBoundForm::L1).unwrap();
        let b = truncation_tail_bound(9, 1.5, 1.0, 0.5, 1.0, TailBoundForm::L1).unwrap();
        assert_eq!(a, b);
        assert!((a - 3.0f64.sqrt()).abs() < 1e-12);

        // strictly decreasing in the order when lambda is above the threshold
        let mut prev = f64::INFINITY;
        for order in 0..6 {
            let v = truncation_tail_bound(order, 3.0, 1.0, 0.5, 1.0, TailBoundForm::L2).unwrap();
            assert!(v < prev);
            prev = v;
        }

        assert!(truncation_tail_bound(2, 1.0, 1.0, 0.5, 1.0, TailBoundForm::L1).is_err());
    }
}
