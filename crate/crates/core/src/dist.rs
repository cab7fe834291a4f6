//! Probability vectors and row-stochastic matrices.

use crate::error::{Error, Result};

/// Input tolerance on probability mass. Deviations below it are renormalized
/// away, deviations above it are rejected.
pub const PROB_TOL: f64 = 1e-12;

/// Validates `p` as a probability vector and renormalizes it.
pub fn normalize_probability(p: &[f64], what: &str) -> Result<Vec<f64>> {
    normalize_with_tol(p, PROB_TOL, what)
}

/// Same as [`normalize_probability`] with an explicit sum tolerance.
pub fn normalize_with_tol(p: &[f64], tol: f64, what: &str) -> Result<Vec<f64>> {
    if p.is_empty() {
        return Err(Error::Distribution(format!("{what}: empty probability vector")));
    }
    for (i, &x) in p.iter().enumerate() {
        if !x.is_finite() || x < 0.0 {
            return Err(Error::Distribution(format!("{what}: entry {i} = {x} is not a nonnegative finite number")));
        }
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > tol {
        return Err(Error::Distribution(format!("{what}: mass sums to {sum}, expected 1")));
    }
    Ok(p.iter().map(|x| x / sum).collect())
}

/// Row-stochastic matrix: row `i` is the distribution of the output given input `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalDistribution {
    from_size: usize,
    to_size: usize,
    probs: Vec<f64>,
}

impl ConditionalDistribution {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::with_tol(rows, PROB_TOL)
    }

    pub fn with_tol(rows: Vec<Vec<f64>>, tol: f64) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Distribution("conditional distribution has no rows".into()));
        }
        let to_size = rows[0].len();
        let mut probs = Vec::with_capacity(rows.len() * to_size);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != to_size {
                return Err(Error::Dimension(format!("row {i} has {} entries, expected {to_size}", row.len())));
            }
            probs.extend(normalize_with_tol(row, tol, &format!("row {i}"))?);
        }
        Ok(Self { from_size: rows.len(), to_size, probs })
    }

    /// Every input maps to the same output distribution.
    pub fn constant(from_size: usize, row: &[f64]) -> Result<Self> {
        Self::new(vec![row.to_vec(); from_size])
    }

    pub fn uniform(from_size: usize, to_size: usize) -> Self {
        Self { from_size, to_size, probs: vec![1.0 / to_size as f64; from_size * to_size] }
    }

    /// Deterministic channel `i -> map[i]`.
    pub fn deterministic(map: &[usize], to_size: usize) -> Result<Self> {
        let mut probs = vec![0.0; map.len() * to_size];
        for (i, &j) in map.iter().enumerate() {
            if j >= to_size {
                return Err(Error::Dimension(format!("input {i} maps to {j}, output size is {to_size}")));
            }
            probs[i * to_size + j] = 1.0;
        }
        Ok(Self { from_size: map.len(), to_size, probs })
    }

    pub fn identity(size: usize) -> Self {
        let map: Vec<usize> = (0..size).collect();
        Self::deterministic(&map, size).expect("identity map is in range")
    }

    pub fn from_size(&self) -> usize {
        self.from_size
    }

    pub fn to_size(&self) -> usize {
        self.to_size
    }

    #[inline]
    pub fn prob(&self, from: usize, to: usize) -> f64 {
        self.probs[from * self.to_size + to]
    }

    pub fn row(&self, from: usize) -> &[f64] {
        &self.probs[from * self.to_size..(from + 1) * self.to_size]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.from_size).map(|i| self.row(i).to_vec()).collect()
    }

    /// Output marginal under the input distribution `p`.
    pub fn push_forward(&self, p: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.to_size];
        for (i, &pi) in p.iter().enumerate() {
            for (j, o) in out.iter_mut().enumerate() {
                *o += pi * self.prob(i, j);
            }
        }
        out
    }

    /// Channel composition `self` then `next`.
    pub fn compose(&self, next: &ConditionalDistribution) -> Result<Self> {
        if self.to_size != next.from_size {
            return Err(Error::Dimension(format!(
                "cannot compose {}x{} with {}x{}",
                self.from_size, self.to_size, next.from_size, next.to_size
            )));
        }
        let rows = (0..self.from_size).map(|i| next.push_forward(self.row(i))).collect();
        Self::with_tol(rows, 1e-9)
    }

    /// Bayes inversion: given input prior `p`, returns the channel output -> input.
    /// Outputs with zero mass get a uniform row.
    pub fn invert(&self, p: &[f64]) -> Self {
        let q = self.push_forward(p);
        let mut probs = vec![0.0; self.to_size * self.from_size];
        for j in 0..self.to_size {
            for i in 0..self.from_size {
                probs[j * self.from_size + i] =
                    if q[j] > 0.0 { p[i] * self.prob(i, j) / q[j] } else { 1.0 / self.from_size as f64 };
            }
            if q[j] > 0.0 {
                let row = &mut probs[j * self.from_size..(j + 1) * self.from_size];
                let s: f64 = row.iter().sum();
                row.iter_mut().for_each(|x| *x /= s);
            }
        }
        Self { from_size: self.to_size, to_size: self.from_size, probs }
    }

    /// Relabels inputs by `perm_in` and outputs by `perm_out` (new index = perm[old]).
    pub fn permuted(&self, perm_in: &[usize], perm_out: &[usize]) -> Self {
        let mut probs = vec![0.0; self.probs.len()];
        for i in 0..self.from_size {
            for j in 0..self.to_size {
                probs[perm_in[i] * self.to_size + perm_out[j]] = self.prob(i, j);
            }
        }
        Self { from_size: self.from_size, to_size: self.to_size, probs }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renormalizes_tiny_drift() {
        let p = normalize_probability(&[0.5, 0.5 + 5e-13], "p").unwrap();
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_large_drift_and_negatives() {
        assert!(normalize_probability(&[0.5, 0.6], "p").is_err());
        assert!(normalize_probability(&[1.5, -0.5], "p").is_err());
        assert!(normalize_probability(&[], "p").is_err());
        assert!(ConditionalDistribution::new(vec![vec![1.0], vec![0.5, 0.5]]).is_err());
    }

    #[test]
    fn bayes_inversion_of_erasure_channel() {
        let ch = ConditionalDistribution::new(vec![vec![0.25, 0.75, 0.0], vec![0.0, 0.75, 0.25]]).unwrap();
        let back = ch.invert(&[0.5, 0.5]);
        assert_eq!(back.from_size(), 3);
        assert!((back.prob(0, 0) - 1.0).abs() < 1e-15);
        assert!((back.prob(1, 0) - 0.5).abs() < 1e-15);
        assert!((back.prob(2, 1) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_mass_outputs_get_uniform_rows() {
        let ch = ConditionalDistribution::deterministic(&[0, 0], 3).unwrap();
        let back = ch.invert(&[0.3, 0.7]);
        assert_eq!(back.row(1), &[0.5, 0.5]);
        assert!((back.prob(0, 1) - 0.7).abs() < 1e-15);
    }
}
