//! Compensated summation and the quadrature rules used throughout the crate.

pub use statrs::function::gamma::ln_gamma;

/// Neumaier-compensated accumulator. Power sums and cumulative masses can
/// aggregate 1e5 terms, so plain summation would lose digits we later assert on.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = CompensatedSum::new();
    for v in values {
        acc.add(v);
    }
    acc.total()
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre P_n(x) and its derivative via the three-term recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 1..n {
                let kf = k as f64;
                let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Integrate f over [a, b] with a fixed composite Gauss-Legendre rule.
pub fn integrate_gl(f: &dyn Fn(f64) -> f64, a: f64, b: f64, panels: usize, order: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut acc = CompensatedSum::new();
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + 0.5 * h;
        for (x, w) in nodes.iter().zip(&weights) {
            acc.add(w * 0.5 * h * f(mid + 0.5 * h * x));
        }
    }
    acc.total()
}

/// Integrate a smooth f over [a, b], doubling the panel count until two
/// successive composite Gauss-Legendre values agree within the tolerances.
pub fn integrate_adaptive(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> f64 {
    let mut panels = 4;
    let mut prev = integrate_gl(f, a, b, panels, 16);
    loop {
        panels *= 2;
        let cur = integrate_gl(f, a, b, panels, 16);
        let diff = (cur - prev).abs();
        if diff <= abs_tol.max(rel_tol * cur.abs()) || panels >= 4096 {
            return cur;
        }
        prev = cur;
    }
}

/// Mean of a periodic function over [-pi, pi), doubling the point count until
/// two successive trapezoidal values agree within the relative tolerance.
/// The integrands here are analytic and periodic, so convergence is spectral.
pub fn circle_mean(f: &dyn Fn(f64) -> f64, rel_tol: f64) -> f64 {
    let mut m = 64usize;
    let mut prev = trapezoid_circle(f, m);
    loop {
        m *= 2;
        let cur = trapezoid_circle(f, m);
        let scale = cur.abs().max(1e-300);
        if (cur - prev).abs() <= rel_tol * scale || m >= 1 << 17 {
            return cur;
        }
        prev = cur;
    }
}

fn trapezoid_circle(f: &dyn Fn(f64) -> f64, m: usize) -> f64 {
    let mut acc = CompensatedSum::new();
    for k in 0..m {
        let t = -std::f64::consts::PI + 2.0 * std::f64::consts::PI * k as f64 / m as f64;
        acc.add(f(t));
    }
    acc.total() / m as f64
}
