//! L2-regularized logistic regression fitted by damped Newton steps.
//!
//! Objective, with `z = b + w·x`:
//! `J = (1/n) Σ [log(1 + e^z) - y z] + (λ / 2n) ‖w‖²`; the bias is not
//! penalized. Each step solves the Newton system and backtracks until the
//! objective does not increase, so the recorded losses are non-increasing.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::FEATURES;

const P: usize = FEATURES + 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LogisticConfig {
    pub l2: f64,
    /// Convergence when the gradient norm falls to this value.
    pub tolerance: f64,
    pub max_iter: usize,
}

impl Default for LogisticConfig {
    fn default() -> Self {
        Self {
            l2: 1.0,
            tolerance: 1e-6,
            max_iter: 10_000,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LogisticModel {
    pub weights: [f64; FEATURES],
    pub bias: f64,
}

impl LogisticModel {
    pub fn decision(&self, x: &[f64; FEATURES]) -> f64 {
        self.bias + self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>()
    }

    pub fn predict(&self, x: &[f64; FEATURES]) -> f64 {
        sigmoid(self.decision(x))
    }
}

#[derive(Clone, Debug)]
pub struct LogisticFit {
    pub model: LogisticModel,
    pub iterations: usize,
    pub gradient_norm: f64,
    /// Objective before the first step and after every step.
    pub loss_history: Vec<f64>,
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `log(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

fn augment(x: &[f64; FEATURES]) -> [f64; P] {
    let mut a = [1.0; P];
    a[1..].copy_from_slice(x);
    a
}

fn dot(a: &[f64; P], b: &[f64; P]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

struct Problem<'a> {
    x: &'a [[f64; FEATURES]],
    y: &'a [bool],
    l2: f64,
}

impl Problem<'_> {
    fn n(&self) -> f64 {
        self.x.len() as f64
    }

    fn loss(&self, theta: &[f64; P]) -> f64 {
        let data: f64 = self
            .x
            .iter()
            .zip(self.y)
            .map(|(x, &y)| {
                let z = dot(theta, &augment(x));
                softplus(z) - if y { z } else { 0.0 }
            })
            .sum();
        let penalty: f64 = theta[1..].iter().map(|w| w * w).sum();
        (data + 0.5 * self.l2 * penalty) / self.n()
    }

    fn gradient_hessian(&self, theta: &[f64; P]) -> ([f64; P], [[f64; P]; P]) {
        let mut g = [0.0; P];
        let mut h = [[0.0; P]; P];
        for (x, &y) in self.x.iter().zip(self.y) {
            let a = augment(x);
            let p = sigmoid(dot(theta, &a));
            let r = p - if y { 1.0 } else { 0.0 };
            let s = p * (1.0 - p);
            for i in 0..P {
                g[i] += r * a[i];
                for j in 0..P {
                    h[i][j] += s * a[i] * a[j];
                }
            }
        }
        let n = self.n();
        for i in 0..P {
            if i > 0 {
                g[i] += self.l2 * theta[i];
                h[i][i] += self.l2;
            }
            g[i] /= n;
            for v in &mut h[i] {
                *v /= n;
            }
        }
        (g, h)
    }
}

/// Solves `h d = b` for symmetric positive definite `h` by Cholesky.
fn cholesky_solve(h: &[[f64; P]; P], b: &[f64; P]) -> Option<[f64; P]> {
    let mut l = [[0.0; P]; P];
    for i in 0..P {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                let d = h[i][i] - s;
                if d <= 1e-300 || !d.is_finite() {
                    return None;
                }
                l[i][i] = d.sqrt();
            } else {
                l[i][j] = (h[i][j] - s) / l[j][j];
            }
        }
    }
    let mut z = [0.0; P];
    for i in 0..P {
        z[i] = (b[i] - (0..i).map(|k| l[i][k] * z[k]).sum::<f64>()) / l[i][i];
    }
    let mut x = [0.0; P];
    for i in (0..P).rev() {
        x[i] = (z[i] - (i + 1..P).map(|k| l[k][i] * x[k]).sum::<f64>()) / l[i][i];
    }
    Some(x)
}

fn norm(v: &[f64; P]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn fit_logistic(
    x: &[[f64; FEATURES]],
    y: &[bool],
    config: &LogisticConfig,
) -> Result<LogisticFit> {
    if !y.iter().any(|&v| v) {
        return Err(Error::SingleClass("negative"));
    }
    if y.iter().all(|&v| v) {
        return Err(Error::SingleClass("positive"));
    }
    if !(config.l2 >= 0.0 && config.tolerance > 0.0) {
        return Err(Error::InvalidConfig(
            "logistic regression needs l2 >= 0 and tolerance > 0".into(),
        ));
    }
    let problem = Problem {
        x,
        y,
        l2: config.l2,
    };
    let mut theta = [0.0; P];
    let mut loss = problem.loss(&theta);
    let mut history = vec![loss];
    let mut iterations = 0;
    loop {
        let (g, h) = problem.gradient_hessian(&theta);
        let gnorm = norm(&g);
        if gnorm <= config.tolerance {
            return Ok(LogisticFit {
                model: LogisticModel {
                    bias: theta[0],
                    weights: theta[1..].try_into().expect("length is FEATURES"),
                },
                iterations,
                gradient_norm: gnorm,
                loss_history: history,
            });
        }
        if iterations >= config.max_iter {
            return Err(Error::NonConvergence {
                iterations,
                gradient_norm: gnorm,
            });
        }
        iterations += 1;
        let neg_g = g.map(|v| -v);
        // Fall back to steepest descent where the Hessian is numerically singular.
        let direction = cholesky_solve(&h, &neg_g)
            .filter(|d| dot(d, &g) < 0.0)
            .unwrap_or(neg_g);
        let slope = dot(&direction, &g);
        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let mut candidate = theta;
            for (c, d) in candidate.iter_mut().zip(&direction) {
                *c += step * d;
            }
            let candidate_loss = problem.loss(&candidate);
            if candidate_loss <= loss + 1e-4 * step * slope {
                theta = candidate;
                loss = candidate_loss;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        history.push(loss);
        if !accepted {
            return Err(Error::NonConvergence {
                iterations,
                gradient_norm: gnorm,
            });
        }
    }
}
