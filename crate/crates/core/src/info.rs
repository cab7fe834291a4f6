//! Discrete information measures in bits, and a search for Wyner's common
//! information of a pair.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dist::{normalize_probability, ConditionalDistribution};
use crate::error::{Error, Result};
use crate::lp;

/// Reconstruction tolerance (total variation) for common-information decompositions.
pub const FEASIBILITY_TOL: f64 = 1e-6;

/// A probability mass function over a product of finite alphabets, stored
/// row-major (last axis fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    shape: Vec<usize>,
    mass: Vec<f64>,
}

impl JointDistribution {
    pub fn new(shape: Vec<usize>, mass: Vec<f64>) -> Result<Self> {
        if shape.is_empty() || shape.contains(&0) {
            return Err(Error::Dimension(format!("invalid joint shape {shape:?}")));
        }
        let len: usize = shape.iter().product();
        if mass.len() != len {
            return Err(Error::Dimension(format!("shape {shape:?} needs {len} entries, got {}", mass.len())));
        }
        let mass = normalize_probability(&mass, "joint")?;
        Ok(Self { shape, mass })
    }

    /// Joint of a pair from a matrix `p[x][y]`.
    pub fn from_matrix(p: &[Vec<f64>]) -> Result<Self> {
        let rows = p.len();
        let cols = p.first().map_or(0, Vec::len);
        if p.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged joint matrix".into()));
        }
        Self::new(vec![rows, cols], p.concat())
    }

    /// Joint of `(X, Y)` from a marginal and a channel.
    pub fn from_channel(p_x: &[f64], channel: &ConditionalDistribution) -> Result<Self> {
        if channel.from_size() != p_x.len() {
            return Err(Error::Dimension("channel input size differs from marginal".into()));
        }
        let rows: Vec<Vec<f64>> =
            p_x.iter().enumerate().map(|(x, &px)| channel.row(x).iter().map(|q| px * q).collect()).collect();
        Self::from_matrix(&rows)
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.shape.len()];
        for i in (0..self.shape.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.shape[i + 1];
        }
        strides
    }

    /// Marginal over `axes`, flattened in the order given.
    pub fn marginal(&self, axes: &[usize]) -> Result<Vec<f64>> {
        if let Some(&bad) = axes.iter().find(|&&a| a >= self.shape.len()) {
            return Err(Error::Contract(format!("axis {bad} out of range for shape {:?}", self.shape)));
        }
        let strides = self.strides();
        let out_len: usize = axes.iter().map(|&a| self.shape[a]).product();
        let mut out = vec![0.0; out_len];
        for (flat, &p) in self.mass.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let mut idx = 0;
            for &ax in axes {
                idx = idx * self.shape[ax] + (flat / strides[ax]) % self.shape[ax];
            }
            out[idx] += p;
        }
        Ok(out)
    }

    /// Entropy of the marginal over `axes` (empty set has entropy 0).
    pub fn entropy_of(&self, axes: &[usize]) -> Result<f64> {
        if axes.is_empty() {
            return Ok(0.0);
        }
        Ok(entropy_unchecked(&self.marginal(axes)?))
    }

    /// Total-variation distance to another joint of the same shape.
    pub fn total_variation(&self, other: &JointDistribution) -> Result<f64> {
        if self.shape != other.shape {
            return Err(Error::Dimension("total variation between different shapes".into()));
        }
        Ok(0.5 * self.mass.iter().zip(&other.mass).map(|(a, b)| (a - b).abs()).sum::<f64>())
    }
}

fn entropy_unchecked(p: &[f64]) -> f64 {
    -p.iter().filter(|&&x| x > 0.0).map(|&x| x * x.log2()).sum::<f64>()
}

/// Shannon entropy in bits, with `0 log 0 = 0`.
pub fn entropy(p: &[f64]) -> Result<f64> {
    let p = normalize_probability(p, "entropy argument")?;
    Ok(entropy_unchecked(&p))
}

pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("binary entropy needs p in [0, 1], got {p}")));
    }
    Ok(entropy_unchecked(&[p, 1.0 - p]))
}

/// The `p` in `[0, 1/2]` with `binary_entropy(p) = h`.
pub fn inverse_binary_entropy(h: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&h) {
        return Err(Error::Domain(format!("binary entropy takes values in [0, 1], got {h}")));
    }
    let (mut lo, mut hi) = (0.0_f64, 0.5_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if entropy_unchecked(&[mid, 1.0 - mid]) < h {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn check_groups(joint: &JointDistribution, groups: &[&[usize]]) -> Result<()> {
    let mut seen = vec![false; joint.shape.len()];
    for g in groups {
        if g.is_empty() {
            return Err(Error::Contract("empty variable group".into()));
        }
        for &ax in g.iter() {
            if ax >= seen.len() {
                return Err(Error::Contract(format!("axis {ax} out of range")));
            }
            if seen[ax] {
                return Err(Error::Contract(format!("axis {ax} appears in two groups")));
            }
            seen[ax] = true;
        }
    }
    Ok(())
}

/// `I(X;Y)` between the variable groups `x` and `y`; axes in neither group
/// are marginalized out.
pub fn mutual_information(joint: &JointDistribution, x: &[usize], y: &[usize]) -> Result<f64> {
    check_groups(joint, &[x, y])?;
    let xy: Vec<usize> = x.iter().chain(y).copied().collect();
    let v = joint.entropy_of(x)? + joint.entropy_of(y)? - joint.entropy_of(&xy)?;
    Ok(v.max(0.0))
}

/// `I(X;Y|Z)`.
pub fn conditional_mutual_information(
    joint: &JointDistribution,
    x: &[usize],
    y: &[usize],
    z: &[usize],
) -> Result<f64> {
    if z.is_empty() {
        return mutual_information(joint, x, y);
    }
    check_groups(joint, &[x, y, z])?;
    let cat = |a: &[usize], b: &[usize]| a.iter().chain(b).copied().collect::<Vec<_>>();
    let v = joint.entropy_of(&cat(x, z))? + joint.entropy_of(&cat(y, z))?
        - joint.entropy_of(&cat(&cat(x, y), z))?
        - joint.entropy_of(z)?;
    Ok(v.max(0.0))
}

/// Knobs for [`wyner_common_information`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WynerSearch {
    /// Random starts per support rectangle when pricing new columns.
    pub restarts: usize,
    /// Column-generation rounds.
    pub iterations: usize,
    /// Alternating-maximization sweeps per start.
    pub inner_iterations: usize,
    pub seed: u64,
}

impl Default for WynerSearch {
    fn default() -> Self {
        Self { restarts: 4, iterations: 60, inner_iterations: 300, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommonInfoResult {
    /// Best `I(S,A;U)` found; an upper bound on the common information.
    pub value: f64,
    pub aux_cardinality: usize,
    pub p_u: Vec<f64>,
    pub p_s_given_u: ConditionalDistribution,
    pub p_a_given_u: ConditionalDistribution,
    pub achieved_joint_error: f64,
    /// `I(S;A)` of the target, a lower bound on the common information.
    pub mutual_information: f64,
}

#[derive(Debug, Clone)]
struct Column {
    alpha: Vec<f64>,
    beta: Vec<f64>,
    score: f64,
}

impl Column {
    fn new(alpha: Vec<f64>, beta: Vec<f64>) -> Self {
        let score = entropy_unchecked(&alpha) + entropy_unchecked(&beta);
        Self { alpha, beta, score }
    }
}

/// Gibbs update `x_i ∝ 2^{-g_i}` on the coordinates in `support`.
fn gibbs(g: &[f64], support: &[usize], out: &mut [f64]) {
    out.iter_mut().for_each(|x| *x = 0.0);
    let gmin = support.iter().map(|&i| g[i]).fold(f64::INFINITY, f64::min);
    let mut z = 0.0;
    for &i in support {
        out[i] = (-(g[i] - gmin)).exp2();
        z += out[i];
    }
    for &i in support {
        out[i] /= z;
    }
}

fn mask_members(mask: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|i| mask >> i & 1 == 1).collect()
}

/// Rectangles `S' x A'` inside the support of `target`, maximal on one side.
fn support_rectangles(target: &[Vec<f64>]) -> Vec<(Vec<usize>, Vec<usize>)> {
    let ns = target.len();
    let na = target[0].len();
    let mut found: Vec<(u64, u64)> = Vec::new();
    let enumerate = |n: usize| -> Vec<u64> {
        if n <= 12 {
            (1..(1u64 << n)).collect()
        } else {
            let mut v: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
            v.push(if n >= 64 { u64::MAX } else { (1u64 << n) - 1 });
            v
        }
    };
    for ms in enumerate(ns) {
        let rows = mask_members(ms, ns);
        let ma = (0..na)
            .filter(|&a| rows.iter().all(|&s| target[s][a] > 0.0))
            .fold(0u64, |m, a| m | 1 << a);
        if ma != 0 {
            found.push((ms, ma));
        }
    }
    for ma in enumerate(na) {
        let cols = mask_members(ma, na);
        let ms = (0..ns)
            .filter(|&s| cols.iter().all(|&a| target[s][a] > 0.0))
            .fold(0u64, |m, s| m | 1 << s);
        if ms != 0 {
            found.push((ms, ma));
        }
    }
    found.sort_unstable();
    found.dedup();
    found.into_iter().map(|(ms, ma)| (mask_members(ms, ns), mask_members(ma, na))).collect()
}

struct Decomposition {
    weights: Vec<f64>,
    columns: Vec<Column>,
}

/// Searches for the auxiliary `U` minimizing `I(S,A;U)` subject to `S - U - A`
/// and the induced joint matching `target` (axes `[S, A]`).
///
/// The joint is written as a mixture of product distributions; the mixture
/// weights are chosen by a linear program over a growing pool of product
/// columns and new columns are priced by seeded alternating maximization.
/// The pool is seeded with the decompositions `U = S`, `U = A` and
/// `U = (S, A)`, so the result never exceeds `min(H(S), H(A))` when those fit
/// within `max_card_u`.
pub fn wyner_common_information(
    target: &JointDistribution,
    max_card_u: usize,
    search: &WynerSearch,
) -> Result<CommonInfoResult> {
    if target.shape().len() != 2 {
        return Err(Error::Dimension("common information needs a joint over exactly two variables".into()));
    }
    if max_card_u == 0 {
        return Err(Error::Domain("auxiliary cardinality must be at least 1".into()));
    }
    let (ns, na) = (target.shape()[0], target.shape()[1]);
    let t: Vec<Vec<f64>> = (0..ns).map(|s| target.mass()[s * na..(s + 1) * na].to_vec()).collect();
    let p_s = target.marginal(&[0])?;
    let p_a = target.marginal(&[1])?;
    let cells: Vec<(usize, usize)> =
        (0..ns).flat_map(|s| (0..na).map(move |a| (s, a))).filter(|&(s, a)| t[s][a] > 0.0).collect();

    let delta = |n: usize, i: usize| {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        v
    };
    let mut seeds: Vec<Decomposition> = Vec::new();
    // U = S
    let by_s: Vec<usize> = (0..ns).filter(|&s| p_s[s] > 0.0).collect();
    seeds.push(Decomposition {
        weights: by_s.iter().map(|&s| p_s[s]).collect(),
        columns: by_s.iter().map(|&s| Column::new(delta(ns, s), t[s].iter().map(|x| x / p_s[s]).collect())).collect(),
    });
    // U = A
    let by_a: Vec<usize> = (0..na).filter(|&a| p_a[a] > 0.0).collect();
    seeds.push(Decomposition {
        weights: by_a.iter().map(|&a| p_a[a]).collect(),
        columns: by_a.iter().map(|&a| Column::new((0..ns).map(|s| t[s][a] / p_a[a]).collect(), delta(na, a))).collect(),
    });
    // U = (S, A)
    seeds.push(Decomposition {
        weights: cells.iter().map(|&(s, a)| t[s][a]).collect(),
        columns: cells.iter().map(|&(s, a)| Column::new(delta(ns, s), delta(na, a))).collect(),
    });
    // U constant, when the target is a product on its support.
    let product_fits = by_s.iter().all(|&s| by_a.iter().all(|&a| t[s][a] > 0.0));
    if product_fits {
        seeds.push(Decomposition { weights: vec![1.0], columns: vec![Column::new(p_s.clone(), p_a.clone())] });
    }

    let mut pool: Vec<Column> = seeds.iter().flat_map(|d| d.columns.iter().cloned()).collect();
    let rectangles = support_rectangles(&t);
    let mut rng = ChaCha8Rng::seed_from_u64(search.seed);
    let lp_matrix = |pool: &[Column]| -> Vec<Vec<f64>> {
        cells.iter().map(|&(s, a)| pool.iter().map(|c| c.alpha[s] * c.beta[a]).collect()).collect()
    };
    let rhs: Vec<f64> = cells.iter().map(|&(s, a)| t[s][a]).collect();
    let mut best_lp: Option<Decomposition> = None;

    for _round in 0..search.iterations.max(1) {
        let scores: Vec<f64> = pool.iter().map(|c| c.score).collect();
        let sol = lp::maximize(&lp_matrix(&pool), &rhs, &scores)?;
        let support: Vec<usize> = (0..pool.len()).filter(|&k| sol.x[k] > 1e-14).collect();
        best_lp = Some(Decomposition {
            weights: support.iter().map(|&k| sol.x[k]).collect(),
            columns: support.iter().map(|&k| pool[k].clone()).collect(),
        });
        let mut lambda = vec![vec![0.0; na]; ns];
        for (r, &(s, a)) in cells.iter().enumerate() {
            lambda[s][a] = sol.duals[r];
        }
        let mut new_cols = Vec::new();
        for (rows, cols) in &rectangles {
            let mut best: Option<(f64, Column)> = None;
            for restart in 0..search.restarts.max(1) {
                let mut beta = vec![0.0; na];
                for &a in cols {
                    beta[a] = if restart == 0 { 1.0 } else { rng.random::<f64>() + 1e-3 };
                }
                let z: f64 = beta.iter().sum();
                beta.iter_mut().for_each(|b| *b /= z);
                let mut alpha = vec![0.0; ns];
                let mut g = vec![0.0; ns.max(na)];
                let mut prev = f64::NEG_INFINITY;
                let mut reduced = f64::NEG_INFINITY;
                for _ in 0..search.inner_iterations.max(1) {
                    for &s in rows {
                        g[s] = cols.iter().map(|&a| lambda[s][a] * beta[a]).sum();
                    }
                    gibbs(&g[..ns], rows, &mut alpha);
                    for &a in cols {
                        g[a] = rows.iter().map(|&s| lambda[s][a] * alpha[s]).sum();
                    }
                    gibbs(&g[..na], cols, &mut beta);
                    let bilinear: f64 =
                        rows.iter().map(|&s| alpha[s] * cols.iter().map(|&a| lambda[s][a] * beta[a]).sum::<f64>()).sum();
                    reduced = entropy_unchecked(&alpha) + entropy_unchecked(&beta) - bilinear;
                    if (reduced - prev).abs() < 1e-14 {
                        break;
                    }
                    prev = reduced;
                }
                if best.as_ref().is_none_or(|(r, _)| reduced > *r) {
                    best = Some((reduced, Column::new(alpha.clone(), beta.clone())));
                }
            }
            if let Some((reduced, col)) = best {
                if reduced > 1e-10 {
                    new_cols.push(col);
                }
            }
        }
        if new_cols.is_empty() {
            break;
        }
        // Keep the current basis plus the new columns to bound the pool size.
        let mut next: Vec<Column> = support.iter().map(|&k| pool[k].clone()).collect();
        next.extend(seeds.iter().flat_map(|d| d.columns.iter().cloned()));
        next.extend(new_cols);
        pool = next;
    }

    let mut candidates: Vec<Decomposition> = Vec::new();
    if let Some(d) = best_lp {
        candidates.push(d);
    }
    candidates.extend(seeds);
    let mut best: Option<CommonInfoResult> = None;
    for d in candidates {
        let d = merge_duplicates(d);
        if d.weights.len() > max_card_u {
            continue;
        }
        let r = decomposition_result(target, &d)?;
        if r.achieved_joint_error > FEASIBILITY_TOL {
            continue;
        }
        if best.as_ref().is_none_or(|b| r.value < b.value) {
            best = Some(r);
        }
    }
    best.ok_or_else(|| {
        Error::Infeasible(format!("no decomposition with |U| <= {max_card_u} reconstructs the target"))
    })
}

/// Pools mixture components whose factors agree to within `1e-4`, so that
/// copies of one product column count as a single auxiliary symbol.
fn merge_duplicates(d: Decomposition) -> Decomposition {
    let close = |x: &[f64], y: &[f64]| x.iter().zip(y).all(|(a, b)| (a - b).abs() <= 1e-4);
    let mut out = Decomposition { weights: Vec::new(), columns: Vec::new() };
    for (w, c) in d.weights.into_iter().zip(d.columns) {
        match out.columns.iter().position(|o| close(&o.alpha, &c.alpha) && close(&o.beta, &c.beta)) {
            Some(k) => {
                let (w0, o) = (out.weights[k], &out.columns[k]);
                let mix = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(a, b)| (w0 * a + w * b) / (w0 + w)).collect();
                out.columns[k] = Column::new(mix(&o.alpha, &c.alpha), mix(&o.beta, &c.beta));
                out.weights[k] += w;
            }
            None => {
                out.weights.push(w);
                out.columns.push(c);
            }
        }
    }
    out
}

fn decomposition_result(target: &JointDistribution, d: &Decomposition) -> Result<CommonInfoResult> {
    let (ns, na) = (target.shape()[0], target.shape()[1]);
    let nu = d.weights.len();
    let wsum: f64 = d.weights.iter().sum();
    let p_u: Vec<f64> = d.weights.iter().map(|w| w / wsum).collect();
    let mut joint = Vec::with_capacity(nu * ns * na);
    for (u, col) in d.columns.iter().enumerate() {
        for s in 0..ns {
            for a in 0..na {
                joint.push(p_u[u] * col.alpha[s] * col.beta[a]);
            }
        }
    }
    let j = JointDistribution::new(vec![nu, ns, na], joint)?;
    let recon = JointDistribution::new(vec![ns, na], j.marginal(&[1, 2])?)?;
    Ok(CommonInfoResult {
        value: mutual_information(&j, &[0], &[1, 2])?,
        aux_cardinality: nu,
        p_s_given_u: ConditionalDistribution::with_tol(d.columns.iter().map(|c| c.alpha.clone()).collect(), 1e-9)?,
        p_a_given_u: ConditionalDistribution::with_tol(d.columns.iter().map(|c| c.beta.clone()).collect(), 1e-9)?,
        p_u,
        achieved_joint_error: recon.total_variation(target)?,
        mutual_information: mutual_information(target, &[0], &[1])?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn erasure_joint() -> JointDistribution {
        JointDistribution::from_matrix(&[vec![0.125, 0.375, 0.0], vec![0.0, 0.375, 0.125]]).unwrap()
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy(&[0.5, 0.5]).unwrap(), 1.0);
        assert_eq!(entropy(&[1.0, 0.0]).unwrap(), 0.0);
        // -(1/4) log2(1/4) - (3/4) log2(3/4) = 1/2 + (3/4)(2 - log2 3)
        let h = 0.5 + 0.75 * (2.0 - 3f64.log2());
        assert!((entropy(&[0.25, 0.75]).unwrap() - h).abs() < 1e-15);
        assert!((h - 0.811_278_124_459_132_8).abs() < 1e-15);
    }

    #[test]
    fn binary_entropy_examples_and_domain() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert!((binary_entropy(0.25).unwrap() - 0.811_278_124_459_132_8).abs() < 1e-15);
        assert!(binary_entropy(1.5).is_err());
        assert!(binary_entropy(-0.1).is_err());
        let p = inverse_binary_entropy(0.5).unwrap();
        assert!((binary_entropy(p).unwrap() - 0.5).abs() < 1e-12);
        assert!((p - 0.11).abs() < 1e-3);
    }

    #[test]
    fn mutual_information_examples() {
        assert!((mutual_information(&erasure_joint(), &[0], &[1]).unwrap() - 0.25).abs() < 1e-15);
        let prod = JointDistribution::from_matrix(&[vec![0.12, 0.28], vec![0.18, 0.42]]).unwrap();
        assert!(mutual_information(&prod, &[0], &[1]).unwrap() < 1e-12);
        let id = JointDistribution::from_matrix(&[vec![0.5, 0.0], vec![0.0, 0.5]]).unwrap();
        assert!((mutual_information(&id, &[0], &[1]).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bad_groupings_are_rejected() {
        let j = erasure_joint();
        assert!(matches!(mutual_information(&j, &[0], &[0]), Err(Error::Contract(_))));
        assert!(matches!(mutual_information(&j, &[0], &[2]), Err(Error::Contract(_))));
        assert!(matches!(mutual_information(&j, &[], &[1]), Err(Error::Contract(_))));
        assert!(conditional_mutual_information(&j, &[0], &[1], &[1]).is_err());
    }

    #[test]
    fn common_information_trivial_cases() {
        let prod = JointDistribution::from_matrix(&[vec![0.12, 0.28], vec![0.18, 0.42]]).unwrap();
        let r = wyner_common_information(&prod, 4, &WynerSearch::default()).unwrap();
        assert!(r.value < 1e-9);
        let id = JointDistribution::from_matrix(&[vec![0.5, 0.0], vec![0.0, 0.5]]).unwrap();
        let r = wyner_common_information(&id, 2, &WynerSearch::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-9);
        assert!(r.achieved_joint_error <= FEASIBILITY_TOL);
    }

    #[test]
    fn common_information_needs_enough_symbols() {
        let id = JointDistribution::from_matrix(&[vec![0.5, 0.0], vec![0.0, 0.5]]).unwrap();
        let r = wyner_common_information(&id, 1, &WynerSearch::default());
        assert!(matches!(r, Err(Error::Infeasible(_))));
        assert!(wyner_common_information(&id, 0, &WynerSearch::default()).is_err());
    }
}
