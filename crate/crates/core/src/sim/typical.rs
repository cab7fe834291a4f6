//! Joint-type boxes and exact sampling of multinomial counts restricted to them.
//!
//! A codeword `u^n` is typical with `s^n` when, for every state `s` and symbol
//! `u`, the count `N(s,u)` is within `eps * n` of `n_s * p(u|s)`, and
//! `N(s,u) = 0` wherever `p(u|s) = 0`. The constraint factorizes over states,
//! so box probabilities and conditional samples are computed one state at a
//! time with a small dynamic program over symbols.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::dist::ConditionalDistribution;

/// `ln k!` for `k <= n`.
#[derive(Debug, Clone)]
pub struct LnFactorial(Vec<f64>);

impl LnFactorial {
    pub fn new(n: usize) -> Self {
        let mut t = Vec::with_capacity(n + 1);
        t.push(0.0);
        for k in 1..=n {
            t.push(t[k - 1] + (k as f64).ln());
        }
        Self(t)
    }

    #[inline]
    pub fn get(&self, k: usize) -> f64 {
        self.0[k]
    }
}

/// Allowed count range `[lo, hi]` for each symbol, for one state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountBox {
    pub lo: Vec<usize>,
    pub hi: Vec<usize>,
}

impl CountBox {
    /// Box around `n_s * p(.|s)` with half-width `eps * n`.
    pub fn around(n_s: usize, target: &[f64], eps: f64, n: usize) -> Self {
        let half = eps * n as f64;
        let mut lo = Vec::with_capacity(target.len());
        let mut hi = Vec::with_capacity(target.len());
        for &p in target {
            if p == 0.0 {
                lo.push(0);
                hi.push(0);
            } else {
                let c = n_s as f64 * p;
                // Small slack so that boundary counts are not lost to round-off.
                lo.push(((c - half - 1e-9).ceil().max(0.0)) as usize);
                hi.push((c + half + 1e-9).floor().min(n_s as f64) as usize);
            }
        }
        Self { lo, hi }
    }

    pub fn contains(&self, counts: &[usize]) -> bool {
        counts.iter().zip(self.lo.iter().zip(&self.hi)).all(|(&c, (&l, &h))| l <= c && c <= h)
    }
}

/// Per-state boxes for a state sequence.
pub fn state_boxes(states: &[usize], p_u_given_s: &ConditionalDistribution, eps: f64) -> Vec<CountBox> {
    let n = states.len();
    let counts = state_counts(states, p_u_given_s.from_size());
    (0..p_u_given_s.from_size()).map(|s| CountBox::around(counts[s], p_u_given_s.row(s), eps, n)).collect()
}

pub fn state_counts(states: &[usize], ns: usize) -> Vec<usize> {
    let mut c = vec![0; ns];
    for &s in states {
        c[s] += 1;
    }
    c
}

/// Whether `codeword` is jointly typical with `states`.
pub fn is_typical(states: &[usize], codeword: &[u16], boxes: &[CountBox], card_u: usize) -> bool {
    let ns = boxes.len();
    let mut joint = vec![0usize; ns * card_u];
    for (&s, &u) in states.iter().zip(codeword) {
        joint[s * card_u + u as usize] += 1;
    }
    (0..ns).all(|s| boxes[s].contains(&joint[s * card_u..(s + 1) * card_u]))
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// Multinomial `(n_s, probs)` restricted to a box.
pub struct BoxedMultinomial<'a> {
    n_s: usize,
    probs: &'a [f64],
    bx: &'a CountBox,
    /// `suffix[u][j]`: log of the sum over counts for symbols `u..` totalling `j`.
    suffix: Vec<Vec<f64>>,
    lnf: &'a LnFactorial,
}

impl<'a> BoxedMultinomial<'a> {
    pub fn new(n_s: usize, probs: &'a [f64], bx: &'a CountBox, lnf: &'a LnFactorial) -> Self {
        let k = probs.len();
        let mut suffix = vec![vec![f64::NEG_INFINITY; n_s + 1]; k + 1];
        suffix[k][0] = 0.0;
        for u in (0..k).rev() {
            for j in 0..=n_s {
                let mut acc = f64::NEG_INFINITY;
                for c in bx.lo[u]..=bx.hi[u].min(j) {
                    let rest = suffix[u + 1][j - c];
                    if rest == f64::NEG_INFINITY {
                        continue;
                    }
                    let t = Self::term(probs[u], c, lnf);
                    if t == f64::NEG_INFINITY {
                        continue;
                    }
                    acc = log_add(acc, t + rest);
                }
                suffix[u][j] = acc;
            }
        }
        Self { n_s, probs, bx, suffix, lnf }
    }

    fn term(p: f64, c: usize, lnf: &LnFactorial) -> f64 {
        if c == 0 {
            0.0
        } else if p == 0.0 {
            f64::NEG_INFINITY
        } else {
            c as f64 * p.ln() - lnf.get(c)
        }
    }

    /// `ln P(counts in box)`.
    pub fn ln_prob(&self) -> f64 {
        self.ln_mass().min(0.0)
    }

    /// Log of the multinomial sum over the box; equals `ln_prob` for
    /// stochastic `probs` but also accepts unnormalized weights.
    pub fn ln_mass(&self) -> f64 {
        let s = self.suffix[0][self.n_s];
        if s == f64::NEG_INFINITY {
            s
        } else {
            self.lnf.get(self.n_s) + s
        }
    }

    /// Draws counts from the restricted law. Requires a nonempty box.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Vec<usize> {
        let k = self.probs.len();
        let mut rem = self.n_s;
        let mut out = vec![0; k];
        for u in 0..k {
            let here = self.suffix[u][rem];
            let mut x: f64 = rng.random();
            let hi = self.bx.hi[u].min(rem);
            let mut pick = hi;
            for c in self.bx.lo[u]..=hi {
                let rest = self.suffix[u + 1][rem - c];
                if rest == f64::NEG_INFINITY {
                    continue;
                }
                let w = (Self::term(self.probs[u], c, self.lnf) + rest - here).exp();
                pick = c;
                if x < w {
                    break;
                }
                x -= w;
            }
            out[u] = pick;
            rem -= pick;
        }
        out
    }
}

/// `ln P(u^n typical)` when `u_t ~ base(.|s_t)` independently.
pub fn ln_box_prob(
    counts_s: &[usize],
    base: &dyn Fn(usize) -> Vec<f64>,
    boxes: &[CountBox],
    lnf: &LnFactorial,
) -> f64 {
    let mut total = 0.0;
    for (s, &n_s) in counts_s.iter().enumerate() {
        let p = base(s);
        total += BoxedMultinomial::new(n_s, &p, &boxes[s], lnf).ln_prob();
        if total == f64::NEG_INFINITY {
            break;
        }
    }
    total
}

/// `draws` independent joint types (per-state symbol counts) of a codeword
/// drawn from `base` conditioned on being typical. `None` if the box is empty.
pub fn sample_box_types<R: Rng>(
    counts_s: &[usize],
    base: &dyn Fn(usize) -> Vec<f64>,
    boxes: &[CountBox],
    lnf: &LnFactorial,
    draws: usize,
    rng: &mut R,
) -> Option<Vec<Vec<Vec<usize>>>> {
    let probs: Vec<Vec<f64>> = (0..counts_s.len()).map(base).collect();
    let laws: Vec<BoxedMultinomial> =
        counts_s.iter().enumerate().map(|(s, &n_s)| BoxedMultinomial::new(n_s, &probs[s], &boxes[s], lnf)).collect();
    if laws.iter().any(|m| m.ln_mass() == f64::NEG_INFINITY) {
        return None;
    }
    Some((0..draws).map(|_| laws.iter().map(|m| m.sample(rng)).collect()).collect())
}

/// Draws a codeword with `u_t ~ base(.|s_t)` independently, conditioned on
/// being typical. Returns `None` if the box is empty.
pub fn sample_typical<R: Rng>(
    states: &[usize],
    base: &dyn Fn(usize) -> Vec<f64>,
    boxes: &[CountBox],
    lnf: &LnFactorial,
    rng: &mut R,
) -> Option<Vec<u16>> {
    let ns = boxes.len();
    let mut positions: Vec<Vec<usize>> = vec![Vec::new(); ns];
    for (t, &s) in states.iter().enumerate() {
        positions[s].push(t);
    }
    let mut out = vec![0u16; states.len()];
    for s in 0..ns {
        let p = base(s);
        let m = BoxedMultinomial::new(positions[s].len(), &p, &boxes[s], lnf);
        if m.ln_prob() == f64::NEG_INFINITY {
            return None;
        }
        let counts = m.sample(rng);
        let mut symbols: Vec<u16> =
            counts.iter().enumerate().flat_map(|(u, &c)| std::iter::repeat_n(u as u16, c)).collect();
        symbols.shuffle(rng);
        for (&t, u) in positions[s].iter().zip(symbols) {
            out[t] = u;
        }
    }
    Some(out)
}
