//! Gaussian naive Bayes with maximum-likelihood means and variances.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::FEATURES;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NaiveBayesConfig {
    /// Added to every variance so constant features stay finite.
    pub variance_floor: f64,
}

impl Default for NaiveBayesConfig {
    fn default() -> Self {
        Self {
            variance_floor: 1e-9,
        }
    }
}

/// Index 0 holds the negative class, index 1 the positive class.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NaiveBayesModel {
    pub priors: [f64; 2],
    pub means: [[f64; FEATURES]; 2],
    pub variances: [[f64; FEATURES]; 2],
}

impl NaiveBayesModel {
    fn log_joint(&self, class: usize, x: &[f64; FEATURES]) -> f64 {
        let mut lp = self.priors[class].ln();
        for (f, &xf) in x.iter().enumerate() {
            let var = self.variances[class][f];
            let d = xf - self.means[class][f];
            lp -= 0.5 * ((2.0 * std::f64::consts::PI * var).ln() + d * d / var);
        }
        lp
    }

    /// Posterior probability of the positive class.
    pub fn predict(&self, x: &[f64; FEATURES]) -> f64 {
        let diff = self.log_joint(0, x) - self.log_joint(1, x);
        super::logistic::sigmoid(-diff)
    }
}

pub fn fit_naive_bayes(
    x: &[[f64; FEATURES]],
    y: &[bool],
    config: &NaiveBayesConfig,
) -> Result<NaiveBayesModel> {
    let mut counts = [0usize; 2];
    let mut sums = [[0.0; FEATURES]; 2];
    for (row, &label) in x.iter().zip(y) {
        let c = usize::from(label);
        counts[c] += 1;
        for f in 0..FEATURES {
            sums[c][f] += row[f];
        }
    }
    if counts[0] == 0 {
        return Err(Error::SingleClass("positive"));
    }
    if counts[1] == 0 {
        return Err(Error::SingleClass("negative"));
    }
    let mut means = [[0.0; FEATURES]; 2];
    for c in 0..2 {
        for f in 0..FEATURES {
            means[c][f] = sums[c][f] / counts[c] as f64;
        }
    }
    let mut variances = [[0.0; FEATURES]; 2];
    for (row, &label) in x.iter().zip(y) {
        let c = usize::from(label);
        for f in 0..FEATURES {
            let d = row[f] - means[c][f];
            variances[c][f] += d * d;
        }
    }
    for (vars, &count) in variances.iter_mut().zip(&counts) {
        for v in vars.iter_mut() {
            *v = *v / count as f64 + config.variance_floor;
        }
    }
    let n = x.len() as f64;
    Ok(NaiveBayesModel {
        priors: [counts[0] as f64 / n, counts[1] as f64 / n],
        means,
        variances,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    #[test]
    fn recovers_gaussian_means() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let truth = [[0.2, -1.0, 3.0], [1.5, 0.0, -2.0]];
        let n = 2000;
        let mut x = Vec::new();
        let mut y = Vec::new();
        for i in 0..n {
            let c = i % 2;
            let mut row = [0.0; FEATURES];
            for f in 0..FEATURES {
                row[f] = Normal::new(truth[c][f], 1.0).unwrap().sample(&mut rng);
            }
            x.push(row);
            y.push(c == 1);
        }
        let model = fit_naive_bayes(&x, &y, &NaiveBayesConfig::default()).unwrap();
        let se = 1.0 / ((n / 2) as f64).sqrt();
        for (c, class_truth) in truth.iter().enumerate() {
            for (f, &mean) in class_truth.iter().enumerate() {
                assert!(
                    (model.means[c][f] - mean).abs() < 3.0 * se,
                    "class {c} feature {f}"
                );
                assert!((model.variances[c][f] - 1.0).abs() < 0.15);
            }
        }
        assert_eq!(model.priors, [0.5, 0.5]);
    }

    #[test]
    fn constant_features_stay_finite() {
        let x = vec![[0.0, 1.0, 0.5]; 4];
        let y = vec![true, false, true, false];
        let model = fit_naive_bayes(&x, &y, &NaiveBayesConfig::default()).unwrap();
        let p = model.predict(&[0.0, 1.0, 0.5]);
        assert!((p - 0.5).abs() < 1e-12);
        assert!(model.predict(&[0.3, 0.2, 0.9]).is_finite());
    }

    #[test]
    fn single_class_is_rejected() {
        assert!(
            fit_naive_bayes(&[[0.0; FEATURES]], &[true], &NaiveBayesConfig::default()).is_err()
        );
    }
}
