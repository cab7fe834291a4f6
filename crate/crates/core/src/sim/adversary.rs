//! Opponent models. The decoders keep a posterior over which codeword the
//! helper sent and best-respond to the implied prediction of A's next action.

use rand::distr::{weighted::WeightedIndex, Distribution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Binomial;

use super::codebook::{encoder_log_weights, Codebook, EncoderRule};
use crate::dist::ConditionalDistribution;
use crate::error::{Error, Result};
use crate::game::{game_value, Game, SignalFunction};
use crate::rate_value::Scheme;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Adversary {
    /// Plays the minimax mix of the game in which A knows the state.
    Oblivious,
    /// Decodes from past states and actions; sees the state sequence only if
    /// the match says B knows it.
    Decoder,
    /// Decodes knowing the whole state sequence.
    DecoderWithState,
}

impl std::str::FromStr for Adversary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oblivious" => Ok(Self::Oblivious),
            "decoder" => Ok(Self::Decoder),
            "decoder_with_state" | "decoder-with-state" => Ok(Self::DecoderWithState),
            _ => Err(Error::Domain(format!("unknown adversary '{s}'"))),
        }
    }
}

impl Adversary {
    /// Whether B conditions on the state when playing against this model.
    pub fn sees_state(self, b_knows_state: bool) -> bool {
        matches!(self, Adversary::DecoderWithState) || b_knows_state
    }
}

/// Probability tables shared by every trial of a match.
#[derive(Debug, Clone)]
pub(crate) struct Model {
    pub ns: usize,
    pub nu: usize,
    pub na: usize,
    pub p_u: Vec<f64>,
    pub p_u_given_s: ConditionalDistribution,
    pub p_s_given_u: ConditionalDistribution,
    pub p_a_given_u: ConditionalDistribution,
    /// `p(s, a)` flattened `s * na + a`.
    pub p_sa: Vec<f64>,
}

impl Model {
    pub fn new(scheme: &Scheme, prior: &[f64]) -> Self {
        let p_a_given_s = scheme.p_a_given_s();
        let na = scheme.p_a_given_u.to_size();
        let p_sa = (0..prior.len()).flat_map(|s| (0..na).map(move |a| (s, a))).map(|(s, a)| prior[s] * p_a_given_s.prob(s, a)).collect();
        Self {
            ns: prior.len(),
            nu: scheme.card_u(),
            na,
            p_u: scheme.p_u(prior),
            p_u_given_s: scheme.p_u_given_s.clone(),
            p_s_given_u: scheme.p_u_given_s.invert(prior),
            p_a_given_u: scheme.p_a_given_u.clone(),
            p_sa,
        }
    }

    /// Per-symbol likelihood factor for an observation at one iteration.
    fn factor(&self, informed: bool, u: usize, s: usize, a: usize) -> f64 {
        if informed {
            self.p_a_given_u.prob(u, a)
        } else {
            self.p_s_given_u.prob(u, s) * self.p_a_given_u.prob(u, a)
        }
    }
}

/// B's best pure response to a prediction of the next action. For an
/// informed B, `pred` is over actions and `state` is known; otherwise `pred`
/// is over `(s, a)` pairs. Ties go to the lowest index.
pub(crate) fn best_response(game: &Game, pred: &[f64], state: Option<usize>) -> usize {
    let (na, nb) = (game.num_actions_a(), game.num_actions_b());
    let costs: Vec<f64> = (0..nb)
        .map(|b| match state {
            Some(s) => (0..na).filter(|&a| pred[a] > 0.0).map(|a| pred[a] * game.payoff(a, b, s)).sum(),
            None => (0..game.num_states())
                .flat_map(|s| (0..na).map(move |a| (s, a)))
                .filter(|&(s, a)| pred[s * na + a] > 0.0)
                .map(|(s, a)| pred[s * na + a] * game.payoff(a, b, s))
                .sum(),
        })
        .collect();
    let lowest = costs.iter().copied().fold(f64::INFINITY, f64::min);
    let tol = 1e-12 * (1.0 + lowest.abs());
    costs.iter().position(|&c| c <= lowest + tol).unwrap_or(0)
}

/// Posterior over an explicit codebook.
pub(crate) struct ExplicitTracker<'a> {
    informed: bool,
    codebook: &'a Codebook,
    truth: usize,
    lw: Vec<f64>,
}

impl<'a> ExplicitTracker<'a> {
    /// `prior_lw` is the log2 prior over codewords before any iteration is seen.
    pub fn new(informed: bool, codebook: &'a Codebook, truth: usize, prior_lw: Vec<f64>) -> Self {
        Self { informed, codebook, truth, lw: prior_lw }
    }

    fn shares(&self) -> (f64, Vec<f64>) {
        let m = self.lw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let w: Vec<f64> = self.lw.iter().map(|&x| if m == f64::NEG_INFINITY { 0.0 } else { (x - m).exp2() }).collect();
        (w.iter().sum(), w)
    }

    pub fn predictive(&self, model: &Model, k: usize, state: Option<usize>) -> Vec<f64> {
        let (z, w) = self.shares();
        let mut by_u = vec![0.0; model.nu];
        for (i, wi) in w.iter().enumerate() {
            if *wi > 0.0 {
                by_u[self.codebook.codeword(i)[k] as usize] += wi / z;
            }
        }
        predict_from_u(model, &by_u, state)
    }

    pub fn true_share(&self) -> f64 {
        let (z, w) = self.shares();
        if z > 0.0 {
            w[self.truth] / z
        } else {
            0.0
        }
    }

    pub fn observe(&mut self, model: &Model, k: usize, s: usize, a: usize) {
        for (i, lw) in self.lw.iter_mut().enumerate() {
            if *lw == f64::NEG_INFINITY {
                continue;
            }
            let u = self.codebook.codeword(i)[k] as usize;
            *lw += model.factor(self.informed, u, s, a).log2();
        }
    }
}

fn predict_from_u(model: &Model, by_u: &[f64], state: Option<usize>) -> Vec<f64> {
    match state {
        Some(_) => {
            let mut pred = vec![0.0; model.na];
            for (u, &w) in by_u.iter().enumerate() {
                if w > 0.0 {
                    for (a, p) in pred.iter_mut().enumerate() {
                        *p += w * model.p_a_given_u.prob(u, a);
                    }
                }
            }
            pred
        }
        None => {
            let mut pred = vec![0.0; model.ns * model.na];
            for (u, &w) in by_u.iter().enumerate() {
                if w > 0.0 {
                    for s in 0..model.ns {
                        let ws = w * model.p_s_given_u.prob(u, s);
                        for a in 0..model.na {
                            pred[s * model.na + a] += ws * model.p_a_given_u.prob(u, a);
                        }
                    }
                }
            }
            pred
        }
    }
}

/// Past this many groups, weights are bucketed more coarsely.
const MAX_GROUPS: usize = 4096;
/// Groups whose posterior share falls below `2^-PRUNE_BITS` are dropped.
const PRUNE_BITS: f64 = 200.0;
/// Counts below this are split with exact binomial draws.
const EXACT_SPLIT: f64 = 9.0e15;

/// Exchangeable impostors sharing a log2 weight and a symbol law.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Group {
    pub lw: f64,
    pub count: f64,
    /// Index into the tracker's symbol laws.
    pub kind: usize,
}

/// Posterior over a codebook too large to store. Codewords other than the
/// one sent are tracked as groups of exchangeable impostors whose symbols
/// are drawn one iteration at a time.
pub(crate) struct GroupTracker {
    informed: bool,
    groups: Vec<Group>,
    /// Groups split by their symbol at the current iteration.
    revealed: Vec<(Group, usize)>,
    /// `kinds[j][s]`: law of the symbol of a kind-`j` impostor in state `s`.
    kinds: Vec<Vec<Vec<f64>>>,
    true_lw: f64,
    truth: Vec<u16>,
}

impl GroupTracker {
    pub fn new(informed: bool, groups: Vec<Group>, kinds: Vec<Vec<Vec<f64>>>, true_lw: f64, truth: Vec<u16>) -> Self {
        let groups = groups.into_iter().filter(|g| g.count > 0.0).collect();
        Self { informed, groups, revealed: Vec::new(), kinds, true_lw, truth }
    }

    fn reference(&self) -> f64 {
        self.groups.iter().map(|g| g.lw).fold(self.true_lw, f64::max)
    }

    /// `(impostor mass, true mass)` relative to a common reference.
    fn masses(&self) -> (f64, f64) {
        let r = self.reference();
        let imp = self.groups.iter().map(|g| g.count * (g.lw - r).exp2()).sum();
        (imp, (self.true_lw - r).exp2())
    }

    pub fn true_share(&self) -> f64 {
        let (imp, t) = self.masses();
        t / (imp + t)
    }

    /// Draws every impostor's symbol at the current iteration.
    fn reveal<R: Rng>(&mut self, rng: &mut R, s: usize) {
        self.revealed.clear();
        for g in &self.groups {
            for (u, cu) in split(rng, g.count, &self.kinds[g.kind][s]).into_iter().enumerate() {
                if cu > 0.0 {
                    self.revealed.push((Group { count: cu, ..*g }, u));
                }
            }
        }
    }

    /// Posterior-predictive of iteration `k`, after drawing the impostors'
    /// symbols there. `s_k` is the true state; an ignorant B's impostor laws
    /// do not depend on it.
    pub fn predictive<R: Rng>(&mut self, model: &Model, rng: &mut R, k: usize, s_k: usize, state: Option<usize>) -> Vec<f64> {
        self.reveal(rng, s_k);
        let r = self.reference();
        let mut by_u = vec![0.0; model.nu];
        for (g, u) in &self.revealed {
            by_u[*u] += g.count * (g.lw - r).exp2();
        }
        by_u[self.truth[k] as usize] += (self.true_lw - r).exp2();
        let z: f64 = by_u.iter().sum();
        by_u.iter_mut().for_each(|w| *w /= z);
        predict_from_u(model, &by_u, state)
    }

    /// Updates weights with the observation at `k`; `predictive` must have been called for `k`.
    pub fn observe(&mut self, model: &Model, k: usize, s: usize, a: usize) {
        self.true_lw += model.factor(self.informed, self.truth[k] as usize, s, a).log2();
        let informed = self.informed;
        self.groups = self
            .revealed
            .drain(..)
            .filter_map(|(g, u)| {
                let f = model.factor(informed, u, s, a);
                (f > 0.0).then(|| Group { lw: g.lw + f.log2(), ..g })
            })
            .collect();
        self.tidy();
    }

    fn tidy(&mut self) {
        if self.groups.is_empty() {
            return;
        }
        let r = self.reference();
        let (imp, t) = self.masses();
        let floor = (imp + t) * (-PRUNE_BITS).exp2();
        self.groups.retain(|g| g.count * (g.lw - r).exp2() >= floor);
        // Merge equal weights, then coarsen until under the cap.
        let mut quantum = 1e-9;
        loop {
            self.merge(quantum, r);
            if self.groups.len() <= MAX_GROUPS {
                break;
            }
            quantum = if quantum < 1.0 / 64.0 { 1.0 / 64.0 } else { quantum * 2.0 };
        }
    }

    /// Mass-preserving merge of same-kind groups whose log weights share a bucket.
    fn merge(&mut self, quantum: f64, r: f64) {
        let key = |g: &Group| (g.kind, (g.lw / quantum).round() as i64);
        self.groups.sort_by(|x, y| key(x).cmp(&key(y)));
        let mut out: Vec<((usize, i64), f64, f64, Group)> = Vec::with_capacity(self.groups.len());
        for g in &self.groups {
            let kk = key(g);
            let m = g.count * (g.lw - r).exp2();
            match out.last_mut() {
                Some(last) if last.0 == kk => {
                    last.1 += g.count;
                    last.2 += m;
                }
                _ => out.push((kk, g.count, m, *g)),
            }
        }
        self.groups = out
            .into_iter()
            .map(|(_, c, m, g)| Group { lw: if m > 0.0 { (m / c).log2() + r } else { g.lw }, count: c, kind: g.kind })
            .collect();
    }
}

/// Multinomial split of `count` items over `probs`; huge counts split in proportion.
fn split<R: Rng>(rng: &mut R, count: f64, probs: &[f64]) -> Vec<f64> {
    if count > EXACT_SPLIT {
        return probs.iter().map(|p| count * p).collect();
    }
    let whole = count.floor();
    let mut n = whole as u64 + u64::from(rng.random::<f64>() < count - whole);
    let mut rest = 1.0;
    let mut out = vec![0.0; probs.len()];
    for (i, &p) in probs.iter().enumerate() {
        if n == 0 {
            break;
        }
        if i + 1 == probs.len() || rest <= p {
            out[i] = n as f64;
            break;
        }
        let q = (p / rest).clamp(0.0, 1.0);
        let k = if q == 0.0 { 0 } else { Binomial::new(n, q).expect("valid binomial").sample(rng) };
        out[i] = k as f64;
        n -= k;
        rest -= p;
    }
    out
}

/// Mixed strategy of the oblivious opponent, rows indexed by B's signal.
pub(crate) fn oblivious_mix(game: &Game, sees_state: bool) -> Result<ConditionalDistribution> {
    let ns = game.num_states();
    let f_b = if sees_state { SignalFunction::identity(ns) } else { SignalFunction::constant(ns) };
    Ok(game_value(game, &SignalFunction::identity(ns), &f_b)?.strategy_b)
}

/// What B has seen before iteration `k`.
#[derive(Debug, Clone, Copy)]
pub struct AdversaryView<'a> {
    /// The whole state sequence; only `states[..k]` is used unless B knows the state.
    pub states: &'a [usize],
    /// A's actions; only `actions[..k]` is used.
    pub actions: &'a [usize],
}

/// Settings the opponent needs to model the helper.
#[derive(Debug, Clone, Copy)]
pub struct AdversarySetup {
    pub model: Adversary,
    pub b_knows_state: bool,
    pub epsilon: f64,
    pub encoder: EncoderRule,
}

/// B's action at iteration `k` under the chosen opponent model.
///
/// The decoders rebuild their posterior over `codebook` from scratch; the
/// oblivious model samples its minimax mix with `seed`.
pub fn adversary_play(
    game: &Game,
    scheme: &Scheme,
    codebook: &Codebook,
    setup: &AdversarySetup,
    view: &AdversaryView,
    k: usize,
    seed: u64,
) -> Result<usize> {
    let n = codebook.n;
    if k >= n || view.states.len() != n || view.actions.len() < k {
        return Err(Error::Dimension("adversary view does not match the block".into()));
    }
    let sees = setup.model.sees_state(setup.b_knows_state);
    let state = sees.then(|| view.states[k]);
    if setup.model == Adversary::Oblivious {
        let mix = oblivious_mix(game, sees)?;
        let row = mix.row(state.unwrap_or(0));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        return Ok(WeightedIndex::new(row).expect("stochastic row").sample(&mut rng));
    }
    let prior = game.prior();
    let model = Model::new(scheme, prior);
    let start = if sees {
        encoder_log_weights(codebook, view.states, scheme, prior, setup.epsilon, setup.encoder)
    } else {
        vec![0.0; codebook.len()]
    };
    let mut tracker = ExplicitTracker::new(sees, codebook, 0, start);
    for t in 0..k {
        tracker.observe(&model, t, view.states[t], view.actions[t]);
    }
    Ok(best_response(game, &tracker.predictive(&model, k, state), state))
}
