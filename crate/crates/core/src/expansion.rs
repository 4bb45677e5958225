//! Charlier-Jordan coefficients of the Poisson-binomial generating function
//! against the Poisson baseline, the radial energy I(r), and the three-way
//! verification of the quadratic-sum identity
//!   sum |A_m|^2 / pois_m = int_0^inf I(sqrt(r/lambda)) e^-r dr
//!                        = sum |a_j|^2 j! / lambda^j.

use num_complex::Complex64;
use serde::Serialize;

use crate::charlier::{c1, c2};
use crate::error::{Error, Result};
use crate::measures::{signed_measure_pmf, Approximant};
use crate::numeric::{circle_mean, integrate_gl, ln_gamma, CompensatedSum};
use crate::params::BernoulliParams;
use crate::pmf::{poisson_binomial_pmf, poisson_pmf};

/// Which function family the coefficients expand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpansionVariant {
    /// f itself: F(z) = e^(lambda(z-1)) f(z).
    FullF,
    /// f - 1, the deviation from the plain Poisson baseline.
    MinusPoisson,
    /// f - (1 - lambda2 (z-1)^2 / 2).
    MinusP1,
    /// f - e^(-lambda2 (z-1)^2 / 2).
    MinusP2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientMethod {
    SymmetricConvolution,
    CircleQuadrature,
}

/// Coefficients a_0..a_N of the chosen variant in powers of (z - 1).
///
/// Both extraction routes always run: the elementary-symmetric convolution
/// (exact algebra, but catastrophic cancellation for large lambda) and contour
/// quadrature at a per-coefficient radius. `coeffs` holds the better
/// conditioned route; `method_disagreement` records the per-coefficient gap
/// between the two.
#[derive(Debug, Clone, Serialize)]
pub struct ExpansionCoefficients {
    pub variant: ExpansionVariant,
    pub lambda: f64,
    pub coeffs: Vec<f64>,
    pub method: CoefficientMethod,
    /// Largest intermediate magnitude over the largest coefficient magnitude,
    /// for the method that produced `coeffs`. Noise floor is roughly
    /// condition_estimate * 1e-16 * max |a_j|.
    pub condition_estimate: f64,
    pub method_disagreement: Vec<f64>,
}

/// Shorgin's coefficient envelope (e lambda2 / j)^(j/2), valid for j >= 2 of
/// the `MinusPoisson` variant.
pub fn shorgin_envelope(j: usize, lambda2: f64) -> f64 {
    (std::f64::consts::E * lambda2 / j as f64).powf(j as f64 / 2.0)
}

/// f(1 + w) for the chosen variant. The product form is evaluated directly,
/// so no cancellation enters before coefficient extraction.
fn eval_variant(params: &BernoulliParams, variant: ExpansionVariant, w: Complex64) -> Complex64 {
    let lambda = params.lambda();
    let mut f = if params.probs().is_empty() && lambda > 0.0 {
        // infinitely-divided limit: F = e^(lambda(z-1)) exactly, f = 1
        Complex64::new(1.0, 0.0)
    } else {
        let mut prod = (-lambda * w).exp();
        for &p in params.probs() {
            prod *= Complex64::new(1.0, 0.0) + p * w;
        }
        prod
    };
    let lambda2 = params.lambda2();
    match variant {
        ExpansionVariant::FullF => {}
        ExpansionVariant::MinusPoisson => f -= 1.0,
        ExpansionVariant::MinusP1 => {
            f -= Complex64::new(1.0, 0.0) - 0.5 * lambda2 * w * w;
        }
        ExpansionVariant::MinusP2 => {
            f -= (-0.5 * lambda2 * w * w).exp();
        }
    }
    f
}

/// Coefficients of the variant's subtrahend in powers of (z - 1).
fn subtrahend_coeffs(variant: ExpansionVariant, lambda2: f64, order: usize) -> Vec<f64> {
    let mut sub = vec![0.0; order + 1];
    match variant {
        ExpansionVariant::FullF => {}
        ExpansionVariant::MinusPoisson => sub[0] = 1.0,
        ExpansionVariant::MinusP1 => {
            sub[0] = 1.0;
            if order >= 2 {
                sub[2] = -0.5 * lambda2;
            }
        }
        ExpansionVariant::MinusP2 => {
            // e^(-lambda2 w^2 / 2) = sum_k (-lambda2/2)^k w^(2k) / k!
            let mut coeff = 1.0;
            let mut k = 0usize;
            while 2 * k <= order {
                sub[2 * k] = coeff;
                k += 1;
                coeff *= -0.5 * lambda2 / k as f64;
            }
        }
    }
    sub
}

fn elementary_symmetric(probs: &[f64], order: usize) -> Vec<f64> {
    let mut e = vec![0.0f64; order + 1];
    e[0] = 1.0;
    for (i, &p) in probs.iter().enumerate() {
        let top = (i + 1).min(order);
        for k in (1..=top).rev() {
            e[k] += p * e[k - 1];
        }
    }
    e
}

/// a_j = sum_k e_k (-lambda)^(j-k) / (j-k)! minus the subtrahend coefficient.
fn convolution_coefficients(
    params: &BernoulliParams,
    variant: ExpansionVariant,
    order: usize,
) -> (Vec<f64>, f64) {
    let lambda = params.lambda();
    let sub = subtrahend_coeffs(variant, params.lambda2(), order);
    let mut max_term = 0.0f64;
    let full: Vec<f64> = if params.probs().is_empty() && lambda > 0.0 {
        let mut v = vec![0.0; order + 1];
        v[0] = 1.0;
        v
    } else {
        let e = elementary_symmetric(params.probs(), order);
        let mut pow = Vec::with_capacity(order + 1); // (-lambda)^d / d!
        pow.push(1.0);
        for d in 1..=order {
            let last = *pow.last().unwrap();
            pow.push(last * (-lambda) / d as f64);
        }
        (0..=order)
            .map(|j| {
                let mut acc = CompensatedSum::new();
                for k in 0..=j.min(params.n()) {
                    let term = e[k] * pow[j - k];
                    max_term = max_term.max(term.abs());
                    acc.add(term);
                }
                acc.total()
            })
            .collect()
    };
    let coeffs: Vec<f64> = full
        .iter()
        .zip(&sub)
        .map(|(a, s)| {
            max_term = max_term.max(s.abs());
            a - s
        })
        .collect();
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let condition = if coeffs.iter().any(|c| !c.is_finite()) || !max_term.is_finite() {
        f64::INFINITY
    } else {
        max_term.max(1.0) / scale.max(f64::MIN_POSITIVE)
    };
    (coeffs, condition)
}

/// a_j extracted as the j-th Fourier coefficient of f on the circle of radius
/// r_j around 1, with r_j = min(3, sqrt(j / lambda2)) sitting near the saddle
/// of the Shorgin envelope.
fn quadrature_coefficients(
    params: &BernoulliParams,
    variant: ExpansionVariant,
    order: usize,
) -> (Vec<f64>, f64) {
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut worst = 0.0f64;
    let mut amps = Vec::with_capacity(order + 1);
    coeffs.push(eval_variant(params, variant, Complex64::new(0.0, 0.0)).re);
    amps.push(1.0);
    for j in 1..=order {
        let r = (j as f64 / params.lambda2().max(1e-6)).sqrt().min(3.0);
        let mut points = 64usize.max((4 * j).next_power_of_two());
        let mut prev: Option<f64> = None;
        let (mut value, mut f_max): (f64, f64);
        loop {
            let mut acc_re = CompensatedSum::new();
            let mut max_mod = 0.0f64;
            for k in 0..points {
                let t = -std::f64::consts::PI
                    + 2.0 * std::f64::consts::PI * k as f64 / points as f64;
                let w = Complex64::from_polar(r, t);
                let fv = eval_variant(params, variant, w);
                max_mod = max_mod.max(fv.norm());
                let phase = Complex64::from_polar(1.0, -(j as f64) * t);
                acc_re.add((fv * phase).re);
            }
            value = acc_re.total() / points as f64;
            f_max = max_mod;
            if let Some(p) = prev {
                let tol = 1e-13 * f_max.max(1e-300);
                if (value - p).abs() <= tol || points >= 1 << 15 {
                    break;
                }
            }
            prev = Some(value);
            points *= 2;
        }
        let r_pow = r.powi(j as i32);
        coeffs.push(value / r_pow);
        amps.push(f_max / r_pow);
    }
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    for a in amps {
        worst = worst.max(a);
    }
    let condition = worst.max(1.0) / scale.max(f64::MIN_POSITIVE);
    (coeffs, condition)
}

/// Both extraction routes, cross-checked; the better conditioned one wins.
pub fn charlier_coefficients(
    params: &BernoulliParams,
    variant: ExpansionVariant,
    order: usize,
) -> Result<ExpansionCoefficients> {
    let lambda = params.lambda();
    if lambda <= 0.0 {
        return Err(Error::NonpositiveLambda(lambda));
    }
    if order > 200 {
        return Err(Error::OrderTooLarge(order));
    }
    let (conv, cond_conv) = convolution_coefficients(params, variant, order);
    let (quad, cond_quad) = quadrature_coefficients(params, variant, order);
    let (coeffs, method, condition) = if cond_conv <= cond_quad {
        (conv.clone(), CoefficientMethod::SymmetricConvolution, cond_conv)
    } else {
        (quad.clone(), CoefficientMethod::CircleQuadrature, cond_quad)
    };
    if condition > 1e12 {
        return Err(Error::IllConditioned(condition));
    }
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let disagreement: Vec<f64> = conv.iter().zip(&quad).map(|(a, b)| (a - b).abs()).collect();
    if cond_conv.is_finite() && cond_conv <= 1e12 {
        // the gap is bounded by the sum of the two routes' noise floors
        let tol = (1e-15 * (cond_conv + cond_quad) * scale).max(1e-9);
        for (j, &d) in disagreement.iter().enumerate() {
            if d > tol {
                return Err(Error::Inconsistent(format!(
                    "coefficient methods disagree at j = {j}: {:e} vs {:e}",
                    conv[j], quad[j]
                )));
            }
        }
    }
    Ok(ExpansionCoefficients {
        variant,
        lambda,
        coeffs,
        method,
        condition_estimate: condition,
        method_disagreement: disagreement,
    })
}

/// I(r): mean of |f(1 + r e^(it))|^2 over the circle, by periodic trapezoid
/// with point doubling (spectrally accurate for these entire integrands).
pub fn radial_energy(params: &BernoulliParams, variant: ExpansionVariant, r: f64) -> f64 {
    assert!(r >= 0.0, "radius must be nonnegative");
    if r == 0.0 {
        return eval_variant(params, variant, Complex64::new(0.0, 0.0)).norm_sqr();
    }
    circle_mean(
        &|t| {
            eval_variant(params, variant, Complex64::from_polar(r, t)).norm_sqr()
        },
        1e-10,
    )
}

/// The three values of the quadratic-sum identity and their worst pairwise
/// relative disagreement.
#[derive(Debug, Clone, Serialize)]
pub struct ParsevalReport {
    pub chi2_sum: f64,
    pub coeff_series: f64,
    pub quadrature_integral: f64,
    pub max_rel_disagreement: f64,
}

/// Certified bound on the integrand's tail contribution past R, from the
/// per-variant product envelopes (|f| <= K e^(lambda2 |w|^2 / 2) and its
/// refinements), expressed in the integrated variable u = lambda r^2.
fn envelope_tail(params: &BernoulliParams, variant: ExpansionVariant, r_cut: f64) -> f64 {
    let theta = params.theta();
    let b = 1.0 - theta;
    let lambda = params.lambda();
    let l2 = params.lambda2();
    let l3 = params.lambda3();
    let l4 = params.lambda4();
    // sum_k coeff_k * u^k * e^(-b u), with half powers rounded up via
    // u^(3/2) <= u^2 / sqrt(R) for u >= R >= 1
    let terms: Vec<(usize, f64)> = match variant {
        ExpansionVariant::FullF => vec![(0, 1.0)],
        ExpansionVariant::MinusPoisson => vec![(2, c1() * c1() * theta * theta)],
        ExpansionVariant::MinusP1 => vec![
            (4, c1() * c1() * theta.powi(4) / 8.0),
            (3, 2.0 * c2() * c2() * (l3 / lambda.powf(1.5)).powi(2)),
        ],
        ExpansionVariant::MinusP2 => vec![
            (3, 2.0 * c2() * c2() * (l3 / lambda.powf(1.5)).powi(2)),
            (4, (l4 / (8.0 * lambda * lambda)).powi(2) * 2.0),
        ],
    };
    let _ = l2;
    let mut tail = 0.0;
    for (k, coeff) in terms {
        // int_R^inf u^k e^(-b u) du = e^(-bR) sum_i (k!/i!) R^i / b^(k-i+1)
        let mut sum = 0.0;
        let mut fac = 1.0; // k!/i! built downward
        for i in (0..=k).rev() {
            sum += fac * r_cut.powi(i as i32) / b.powi((k - i) as i32 + 1);
            fac *= i as f64;
        }
        tail += coeff * (-b * r_cut).exp() * sum;
    }
    tail
}

/// chi2-style sum over m of |A_m|^2 / pois_m for the variant's A sequence.
fn direct_chi2_sum(params: &BernoulliParams, variant: ExpansionVariant) -> Result<f64> {
    let lambda = params.lambda();
    let n = params.n();
    let hi = (lambda + 20.0 * lambda.sqrt()).ceil() as usize + n + 10;
    let pois = poisson_pmf(lambda, Some((0, hi)))?;
    let pb = if params.probs().is_empty() {
        poisson_pmf(lambda, Some((0, hi)))?
    } else {
        poisson_binomial_pmf(params)?
    };
    let reference: Box<dyn Fn(usize) -> f64> = match variant {
        ExpansionVariant::FullF => Box::new(|_| 0.0),
        ExpansionVariant::MinusPoisson => {
            let p = pois.clone();
            Box::new(move |m| p.mass_at(m))
        }
        ExpansionVariant::MinusP1 => {
            let p1 = signed_measure_pmf(params, Approximant::P1, Some((0, hi)))?;
            Box::new(move |m| p1.value_at(m))
        }
        ExpansionVariant::MinusP2 => {
            let p2 = signed_measure_pmf(params, Approximant::P2, Some((0, hi)))?;
            Box::new(move |m| p2.value_at(m))
        }
    };
    let logs = pois.log_masses().expect("poisson pmf carries logs");
    let mut acc = CompensatedSum::new();
    for m in 0..=hi {
        let a = pb.mass_at(m) - reference(m);
        if a == 0.0 {
            continue;
        }
        let w = pois.mass_at(m);
        if w > 0.0 {
            acc.add(a * a / w);
        } else {
            let lw = logs[m - pois.offset()];
            acc.add((2.0 * a.abs().ln() - lw).exp());
        }
    }
    Ok(acc.total())
}

/// Evaluate the identity three independent ways: the direct chi2-style sum,
/// the coefficient series, and the outer quadrature of the radial energy.
pub fn parseval_triple(params: &BernoulliParams, variant: ExpansionVariant) -> Result<ParsevalReport> {
    let lambda = params.lambda();
    if lambda <= 0.0 {
        return Err(Error::NonpositiveLambda(lambda));
    }
    let theta = params.theta();
    if theta >= 1.0 {
        return Err(Error::ThetaNotBelowOne {
            context: "the quadratic-sum identity",
            theta,
        });
    }

    let chi2_sum = direct_chi2_sum(params, variant)?;

    // coefficient series: pick the order so the envelope tail is negligible
    let mut order = 12usize;
    while order < 200 {
        let tail = 4.0
            * (2.0 * std::f64::consts::PI * (order + 1) as f64).sqrt()
            * theta.powi(order as i32 + 1)
            / (1.0 - theta).max(1e-6);
        if tail < 1e-16 {
            break;
        }
        order += 8;
    }
    let expansion = charlier_coefficients(params, variant, order)?;
    let mut series = CompensatedSum::new();
    for (j, &a) in expansion.coeffs.iter().enumerate() {
        if a == 0.0 {
            continue;
        }
        let ln_term = 2.0 * a.abs().ln() + ln_gamma(j as f64 + 1.0) - j as f64 * lambda.ln();
        series.add(ln_term.exp());
    }
    let coeff_series = series.total();

    // outer integral on [0, R], R certified by the envelope tail
    let mut r_cut = (30.0f64).max(10.0 / (1.0 - theta));
    let scale = coeff_series.abs().max(chi2_sum.abs()).max(1e-30);
    while envelope_tail(params, variant, r_cut) > 1e-14 * scale && r_cut < 6000.0 {
        r_cut *= 1.25;
    }
    let integrand = |u: f64| radial_energy(params, variant, (u / lambda).sqrt()) * (-u).exp();
    let mut panels = ((r_cut / 2.0) as usize).clamp(16, 256);
    let mut prev = integrate_gl(&integrand, 0.0, r_cut, panels, 16);
    let quadrature_integral = loop {
        panels *= 2;
        let cur = integrate_gl(&integrand, 0.0, r_cut, panels, 16);
        if (cur - prev).abs() <= 1e-8 * cur.abs().max(1e-30) || panels >= 2048 {
            break cur;
        }
        prev = cur;
    };

    let vals = [chi2_sum, coeff_series, quadrature_integral];
    let mut max_rel: f64 = 0.0;
    for i in 0..3 {
        for j in i + 1..3 {
            let scale = vals[i].abs().max(vals[j].abs()).max(1e-30);
            max_rel = max_rel.max((vals[i] - vals[j]).abs() / scale);
        }
    }
    Ok(ParsevalReport {
        chi2_sum,
        coeff_series,
        quadrature_integral,
        max_rel_disagreement: max_rel,
    })
}
