use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};
use crate::linkpred::average_ranks;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub spearman_rho: f64,
    pub n: usize,
}

fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Pearson correlation; `None` when either input has zero variance.
fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let (mx, my) = (mean(x), mean(y));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    (sxx > 0.0 && syy > 0.0).then(|| (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Pearson correlation of average ranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<CorrelationReport> {
    if x.len() != y.len() {
        return Err(Error::ShapeMismatch {
            expected: x.len(),
            actual: y.len(),
        });
    }
    if x.len() < 3 {
        return Err(Error::InsufficientData(format!("spearman needs n >= 3, got {}", x.len())));
    }
    let rho = pearson(&average_ranks(x), &average_ranks(y))
        .ok_or_else(|| Error::InsufficientData("constant input has no rank variance".into()))?;
    Ok(CorrelationReport { spearman_rho: rho, n: x.len() })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KsReport {
    pub d_statistic: f64,
    pub p_value: f64,
    pub n_a: usize,
    pub n_b: usize,
}

/// Kolmogorov survival function `Q(λ) = 2 Σ (-1)^(j-1) exp(-2 j² λ²)`.
fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.18 {
        // Jacobi-transformed series, fast for small λ
        let y = (-std::f64::consts::PI.powi(2) / (8.0 * lambda * lambda)).exp();
        let s = y + y.powi(9) + y.powi(25) + y.powi(49);
        1.0 - (2.0 * std::f64::consts::PI).sqrt() / lambda * s
    } else {
        let x = (-2.0 * lambda * lambda).exp();
        2.0 * (x - x.powi(4) + x.powi(9) - x.powi(16))
    }
}

/// Two-sample KS test: exact `D` and the asymptotic p-value with the
/// `√Ne + 0.12 + 0.11/√Ne` small-sample correction.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsReport> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InsufficientData("KS test needs two nonempty samples".into()));
    }
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let (na, nb) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < xs.len() && j < ys.len() {
        let x = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] <= x {
            i += 1;
        }
        while j < ys.len() && ys[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let ne = (na * nb / (na + nb)).sqrt();
    let p = kolmogorov_q((ne + 0.12 + 0.11 / ne) * d).clamp(f64::MIN_POSITIVE, 1.0);
    Ok(KsReport {
        d_statistic: d,
        p_value: p,
        n_a: a.len(),
        n_b: b.len(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegressionReport {
    pub slope: f64,
    pub intercept: f64,
    pub std_error: f64,
    pub t_statistic: f64,
    /// Two-sided p-value of the slope t-test.
    pub p_value: f64,
    pub significant_5pct: bool,
    /// Slope in standard-deviation units (equal to Pearson r).
    pub standardized_slope: f64,
    pub n: usize,
}

impl RegressionReport {
    /// Slope to three decimals with a star when significant at 5%, e.g. `−0.875*`.
    pub fn starred(&self) -> String {
        star(self.slope, self.significant_5pct)
    }

    pub fn starred_standardized(&self) -> String {
        star(self.standardized_slope, self.significant_5pct)
    }
}

fn star(value: f64, significant: bool) -> String {
    let text = format!("{value:.3}");
    let text = match text.strip_prefix('-') {
        Some(rest) if rest.chars().any(|c| c != '0' && c != '.') => format!("\u{2212}{rest}"),
        Some(rest) => rest.to_string(),
        None => text,
    };
    if significant {
        text + "*"
    } else {
        text
    }
}

/// Ordinary least squares of `y` on `x` with a two-sided t-test on the slope.
pub fn ols(x: &[f64], y: &[f64]) -> Result<RegressionReport> {
    if x.len() != y.len() {
        return Err(Error::ShapeMismatch {
            expected: x.len(),
            actual: y.len(),
        });
    }
    let n = x.len();
    if n < 3 {
        return Err(Error::InsufficientData(format!("regression needs >= 3 points, got {n}")));
    }
    let (mx, my) = (mean(x), mean(y));
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData("regressor is constant".into()));
    }
    if y.iter().all(|&v| v == y[0]) {
        return Ok(RegressionReport {
            slope: 0.0,
            intercept: y[0],
            std_error: 0.0,
            t_statistic: 0.0,
            p_value: 1.0,
            significant_5pct: false,
            standardized_slope: 0.0,
            n,
        });
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let df = (n - 2) as f64;
    let std_error = (sse / df / sxx).sqrt();
    let (t_statistic, p_value) = if std_error > 0.0 {
        let t = slope / std_error;
        let dist = StudentsT::new(0.0, 1.0, df).expect("df >= 1");
        (t, (2.0 * dist.sf(t.abs())).clamp(0.0, 1.0))
    } else if slope != 0.0 {
        (f64::INFINITY.copysign(slope), 0.0)
    } else {
        (0.0, 1.0)
    };
    Ok(RegressionReport {
        slope,
        intercept,
        std_error,
        t_statistic,
        p_value,
        significant_5pct: p_value < 0.05,
        standardized_slope: slope * (sxx / syy).sqrt(),
        n,
    })
}
