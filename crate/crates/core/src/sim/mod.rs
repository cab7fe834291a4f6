//! Monte Carlo matches: a helper encodes the state block into a random
//! codebook, A plays through a memoryless channel from the codeword, and B
//! answers each iteration using what it has seen so far.
//!
//! Small codebooks are sampled explicitly. Larger ones use an ensemble
//! engine: only the sent codeword is drawn, and the other codewords enter
//! B's posterior as groups of exchangeable impostors whose symbols are drawn
//! as the block unfolds. Both engines have the same law for everything B sees.

mod adversary;
mod codebook;
mod typical;

use rand::distr::{weighted::WeightedIndex, Distribution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Poisson;

pub use adversary::{adversary_play, Adversary, AdversarySetup, AdversaryView};
pub use codebook::{
    build_codebook, build_codebook_capped, codebook_bits, decode_actions, encode, Codebook, EncoderRule,
    DEFAULT_MAX_SYMBOLS,
};
pub use typical::{is_typical, state_boxes, CountBox};

use adversary::{best_response, oblivious_mix, ExplicitTracker, Group, GroupTracker, Model};
use codebook::{decode_actions_with, encoder_log_weights, likelihood_table, normalize_log2, sample_codebook};
use typical::{ln_box_prob, sample_box_types, sample_typical, state_counts, LnFactorial};

use crate::dist::ConditionalDistribution;
use crate::error::{Error, Result};
use crate::game::{game_value, Game, SignalFunction};
use crate::rate_value::Scheme;

/// Joint types sampled to represent an informed opponent's impostors.
const STRATA: usize = 64;

/// `Auto` switches to the ensemble engine above this many codebook symbols.
pub const AUTO_EXPLICIT_SYMBOLS: usize = 1 << 18;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Engine {
    #[default]
    Auto,
    Explicit,
    Ensemble,
}

impl std::str::FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Self::Auto),
            "explicit" => Ok(Self::Explicit),
            "ensemble" => Ok(Self::Ensemble),
            _ => Err(Error::Domain(format!("unknown engine '{s}'"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct MatchConfig {
    pub n: usize,
    pub trials: usize,
    pub rate: f64,
    pub epsilon: f64,
    pub adversary: Adversary,
    pub b_knows_state: bool,
    pub seed: u64,
    pub encoder: EncoderRule,
    pub engine: Engine,
    /// Cap on `codewords * n` for the explicit engine.
    pub max_symbols: usize,
}

impl MatchConfig {
    pub fn new(n: usize, trials: usize, rate: f64, adversary: Adversary, b_knows_state: bool, seed: u64) -> Self {
        Self {
            n,
            trials,
            rate,
            epsilon: 0.05,
            adversary,
            b_knows_state,
            seed,
            encoder: EncoderRule::default(),
            engine: Engine::Auto,
            max_symbols: DEFAULT_MAX_SYMBOLS,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchResult {
    pub n: usize,
    pub trials: usize,
    /// Engine actually used.
    pub engine: Engine,
    /// Mean payoff at each iteration across trials.
    pub per_iteration_payoff: Vec<f64>,
    /// Fraction of trials in which B's posterior puts more than half its
    /// mass on the sent codeword before iteration `k`.
    pub decode_success: Vec<f64>,
    pub encoder_failure_rate: f64,
    pub mean_payoff: f64,
    /// Block-average payoff of each trial.
    pub trial_mean_payoffs: Vec<f64>,
    /// `sa_counts[k][s][a]` over trials where encoding succeeded.
    pub sa_counts: Vec<Vec<Vec<u64>>>,
}

impl MatchResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,mean_payoff_at_k,decode_success_at_k\n");
        for (k, (p, d)) in self.per_iteration_payoff.iter().zip(&self.decode_success).enumerate() {
            out.push_str(&format!("{k},{p},{d}\n"));
        }
        out
    }

    /// Standard error of `mean_payoff` across trials.
    pub fn standard_error(&self) -> f64 {
        let t = self.trial_mean_payoffs.len() as f64;
        if t < 2.0 {
            return 0.0;
        }
        let var = self.trial_mean_payoffs.iter().map(|x| (x - self.mean_payoff).powi(2)).sum::<f64>() / (t - 1.0);
        (var / t).sqrt()
    }
}

/// Plays `config.trials` independent blocks of the scheme against the chosen opponent.
///
/// Trial `i` draws its codebook, states and actions from a ChaCha8 stream
/// `i` seeded with `config.seed`, so results do not depend on trial order.
/// An encoder failure scores every iteration as if A played its marginal
/// action distribution blind.
pub fn run_match(game: &Game, scheme: &Scheme, config: &MatchConfig) -> Result<MatchResult> {
    scheme.check(game)?;
    let n = config.n;
    if n == 0 || config.trials == 0 {
        return Err(Error::Domain("block length and trial count must be positive".into()));
    }
    if !(config.epsilon > 0.0) {
        return Err(Error::Domain("typicality tolerance must be positive".into()));
    }
    if !(config.rate.is_finite() && config.rate >= 0.0) {
        return Err(Error::Domain(format!("rate must be finite and nonnegative, got {}", config.rate)));
    }
    let bits = codebook_bits(n, config.rate);
    let symbols = 2f64.powi(bits.min(1100) as i32) * n as f64;
    let engine = match config.engine {
        Engine::Auto if symbols <= AUTO_EXPLICIT_SYMBOLS.min(config.max_symbols) as f64 => Engine::Explicit,
        Engine::Auto => Engine::Ensemble,
        e => e,
    };
    if engine == Engine::Ensemble && bits > 1000 {
        return Err(Error::Capacity { what: "codebook bits".into(), needed: bits as f64, cap: 1000.0 });
    }

    let prior = game.prior();
    let model = Model::new(scheme, prior);
    let sees = config.adversary.sees_state(config.b_knows_state);
    let mix = match config.adversary {
        Adversary::Oblivious => Some(oblivious_mix(game, sees)?),
        _ => None,
    };
    let fallback = failure_payoff(game, &model, mix.as_ref(), sees);
    let ctx = Context { game, scheme, prior, model: &model, config, sees, mix: mix.as_ref(), bits, engine };

    let (ns, na) = (model.ns, model.na);
    let mut pay = vec![0.0; n];
    let mut dec = vec![0.0; n];
    let mut failures = 0usize;
    let mut trial_means = Vec::with_capacity(config.trials);
    let mut sa_counts = vec![vec![vec![0u64; na]; ns]; n];
    for trial in 0..config.trials {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(trial as u64);
        match ctx.play(&mut rng)? {
            None => {
                failures += 1;
                pay.iter_mut().for_each(|p| *p += fallback);
                trial_means.push(fallback);
            }
            Some(t) => {
                for k in 0..n {
                    pay[k] += t.payoffs[k];
                    dec[k] += f64::from(u8::from(t.decoded[k]));
                    sa_counts[k][t.states[k]][t.actions[k]] += 1;
                }
                trial_means.push(t.payoffs.iter().sum::<f64>() / n as f64);
            }
        }
    }
    let tr = config.trials as f64;
    pay.iter_mut().for_each(|p| *p /= tr);
    dec.iter_mut().for_each(|d| *d /= tr);
    Ok(MatchResult {
        n,
        trials: config.trials,
        engine,
        mean_payoff: trial_means.iter().sum::<f64>() / tr,
        per_iteration_payoff: pay,
        decode_success: dec,
        encoder_failure_rate: failures as f64 / tr,
        trial_mean_payoffs: trial_means,
        sa_counts,
    })
}

/// Expected per-iteration payoff when A plays its marginal action law blind.
fn failure_payoff(game: &Game, model: &Model, mix: Option<&ConditionalDistribution>, sees: bool) -> f64 {
    let prior = game.prior();
    let p_a: Vec<f64> = (0..model.na).map(|a| (0..model.ns).map(|s| model.p_sa[s * model.na + a]).sum()).collect();
    let g = |b: usize, s: usize| -> f64 { (0..model.na).filter(|&a| p_a[a] > 0.0).map(|a| p_a[a] * game.payoff(a, b, s)).sum() };
    let nb = game.num_actions_b();
    match (mix, sees) {
        (Some(y), _) => (0..model.ns)
            .map(|s| {
                let row = y.row(if sees { s } else { 0 });
                prior[s] * (0..nb).map(|b| row[b] * g(b, s)).sum::<f64>()
            })
            .sum(),
        (None, true) => {
            (0..model.ns).map(|s| prior[s] * (0..nb).map(|b| g(b, s)).fold(f64::INFINITY, f64::min)).sum()
        }
        (None, false) => {
            (0..nb).map(|b| (0..model.ns).map(|s| prior[s] * g(b, s)).sum::<f64>()).fold(f64::INFINITY, f64::min)
        }
    }
}

struct Context<'a> {
    game: &'a Game,
    scheme: &'a Scheme,
    prior: &'a [f64],
    model: &'a Model,
    config: &'a MatchConfig,
    sees: bool,
    mix: Option<&'a ConditionalDistribution>,
    bits: usize,
    engine: Engine,
}

struct Trial {
    states: Vec<usize>,
    actions: Vec<usize>,
    payoffs: Vec<f64>,
    decoded: Vec<bool>,
}

enum Tracker<'a> {
    None,
    Explicit(ExplicitTracker<'a>),
    Groups(GroupTracker),
}

impl Context<'_> {
    fn play(&self, rng: &mut ChaCha8Rng) -> Result<Option<Trial>> {
        let n = self.config.n;
        let state_dist = WeightedIndex::new(self.prior).map_err(|e| Error::Distribution(format!("prior: {e}")))?;
        let states: Vec<usize> = (0..n).map(|_| state_dist.sample(rng)).collect();
        let codebook;
        let (codeword, mut tracker) = match self.engine {
            Engine::Explicit => {
                codebook = sample_codebook(self.scheme, self.prior, n, self.config.rate, self.config.max_symbols, rng)?;
                let lw = encoder_log_weights(&codebook, &states, self.scheme, self.prior, self.config.epsilon, self.config.encoder);
                let Some(probs) = normalize_log2(&lw) else { return Ok(None) };
                let truth = WeightedIndex::new(&probs).expect("normalized weights").sample(rng);
                let tracker = if self.mix.is_some() {
                    Tracker::None
                } else {
                    let start = if self.sees { lw } else { vec![0.0; codebook.len()] };
                    Tracker::Explicit(ExplicitTracker::new(self.sees, &codebook, truth, start))
                };
                (codebook.codeword(truth).to_vec(), tracker)
            }
            _ => match self.ensemble_start(&states, rng) {
                None => return Ok(None),
                Some((cw, t)) => (cw, t),
            },
        };
        let actions = decode_actions_with(&codeword, self.scheme, rng);
        let mut payoffs = Vec::with_capacity(n);
        let mut decoded = Vec::with_capacity(n);
        for k in 0..n {
            let (s, a) = (states[k], actions[k]);
            let state = self.sees.then_some(s);
            let (b, ok) = match &mut tracker {
                Tracker::None => {
                    let row = self.mix.expect("oblivious mix").row(state.unwrap_or(0));
                    (WeightedIndex::new(row).expect("stochastic row").sample(rng), false)
                }
                Tracker::Explicit(t) => {
                    (best_response(self.game, &t.predictive(self.model, k, state), state), t.true_share() > 0.5)
                }
                Tracker::Groups(t) => {
                    let ok = t.true_share() > 0.5;
                    (best_response(self.game, &t.predictive(self.model, rng, k, s, state), state), ok)
                }
            };
            payoffs.push(self.game.payoff(a, b, s));
            decoded.push(ok);
            match &mut tracker {
                Tracker::None => {}
                Tracker::Explicit(t) => t.observe(self.model, k, s, a),
                Tracker::Groups(t) => t.observe(self.model, k, s, a),
            }
        }
        Ok(Some(Trial { states, actions, payoffs, decoded }))
    }

    /// Draws the sent codeword and B's initial impostor groups without
    /// materializing the codebook. `None` is an encoder failure.
    fn ensemble_start(&self, states: &[usize], rng: &mut ChaCha8Rng) -> Option<(Vec<u16>, Tracker<'static>)> {
        let n = states.len();
        let model = self.model;
        let boxes = state_boxes(states, &model.p_u_given_s, self.config.epsilon);
        let counts = state_counts(states, model.ns);
        let lnf = LnFactorial::new(n);
        let marginal = |_: usize| model.p_u.clone();
        let conditional = |s: usize| model.p_u_given_s.row(s).to_vec();
        let ln_typ = ln_box_prob(&counts, &marginal, &boxes, &lnf);
        // P(no codeword typical) = (1 - p_typ)^M, evaluated in log space.
        let p_typ = ln_typ.exp();
        let x = self.bits as f64 * std::f64::consts::LN_2 + (-(-p_typ).ln_1p()).ln();
        let p_fail = (-x.exp()).exp();
        if p_fail > 0.0 && rng.random::<f64>() < p_fail {
            return None;
        }
        let rule = self.config.encoder;
        let base: &dyn Fn(usize) -> Vec<f64> = match rule {
            EncoderRule::Likelihood => &conditional,
            _ => &marginal,
        };
        let truth = sample_typical(states, base, &boxes, &lnf, rng)?;
        if self.mix.is_some() {
            return Some((truth, Tracker::None));
        }
        let ln_others = (2f64.powi(self.bits as i32) - 1.0).ln();
        if !self.sees {
            let group = Group { lw: 0.0, count: poisson(rng, ln_others.exp()), kind: 0 };
            let kinds = vec![vec![model.p_u.clone(); model.ns]];
            return Some((truth.clone(), Tracker::Groups(GroupTracker::new(false, vec![group], kinds, 0.0, truth))));
        }
        let table = likelihood_table(self.scheme, self.prior);
        let log_lik = |cs: &[Vec<usize>]| -> f64 {
            cs.iter()
                .enumerate()
                .flat_map(|(s, c)| c.iter().enumerate().filter(|&(_, &x)| x > 0).map(move |(u, &x)| (s, u, x)))
                .map(|(s, u, x)| x as f64 * table[s][u])
                .sum()
        };
        let true_lw = match rule {
            EncoderRule::Likelihood => states.iter().zip(&truth).map(|(&s, &u)| table[s][u as usize]).sum(),
            _ => 0.0,
        };
        if rule == EncoderRule::FirstTypical {
            return Some((truth.clone(), Tracker::Groups(GroupTracker::new(true, Vec::new(), Vec::new(), 0.0, truth))));
        }
        // Typical impostors are stratified by joint type, sampled from the
        // same law as the sent codeword. Under the likelihood rule a stratum
        // of weight L stands for (M-1) q / (K L) codewords drawn from p_U.
        let types = sample_box_types(&counts, base, &boxes, &lnf, STRATA, rng)?;
        let ln_mass = match rule {
            EncoderRule::Likelihood => ln_box_prob(&counts, &conditional, &boxes, &lnf),
            _ => ln_typ,
        } + ln_others
            - (STRATA as f64).ln();
        let mut groups = Vec::with_capacity(STRATA);
        let mut kinds = Vec::with_capacity(STRATA);
        for (j, cs) in types.iter().enumerate() {
            let lw = if rule == EncoderRule::Likelihood { log_lik(cs) } else { 0.0 };
            let mean = (ln_mass - lw * std::f64::consts::LN_2).exp();
            groups.push(Group { lw, count: poisson(rng, mean), kind: j });
            kinds.push(
                cs.iter()
                    .enumerate()
                    .map(|(s, c)| {
                        let n_s: usize = c.iter().sum();
                        if n_s == 0 {
                            base(s)
                        } else {
                            c.iter().map(|&x| x as f64 / n_s as f64).collect()
                        }
                    })
                    .collect(),
            );
        }
        Some((truth.clone(), Tracker::Groups(GroupTracker::new(true, groups, kinds, true_lw, truth))))
    }
}

/// Number of codewords landing in a stratum of expected size `mean`.
fn poisson<R: Rng>(rng: &mut R, mean: f64) -> f64 {
    if !(mean > 0.0) {
        0.0
    } else if mean > 1e15 {
        mean
    } else {
        Poisson::new(mean).expect("positive mean").sample(rng)
    }
}

/// The scheme in which the helper describes A's full-information action
/// directly: `U = A`, with `p(u|s)` the minimax strategy of the game in which
/// both players know the state.
pub fn baseline_scheme(game: &Game) -> Result<Scheme> {
    let ns = game.num_states();
    let id = SignalFunction::identity(ns);
    let v = game_value(game, &id, &id)?;
    Scheme::new(v.strategy_a, ConditionalDistribution::identity(game.num_actions_a()))
}

/// Match for the deterministic "send A's action" baseline with a
/// first-typical encoder. At rates below the entropy of the action sequence
/// the encoder usually fails or a decoding opponent learns the codeword.
pub fn deterministic_baseline(
    game: &Game,
    rate: f64,
    n: usize,
    trials: usize,
    adversary: Adversary,
    seed: u64,
) -> Result<MatchResult> {
    let scheme = baseline_scheme(game)?;
    let mut config = MatchConfig::new(n, trials, rate, adversary, adversary == Adversary::DecoderWithState, seed);
    config.encoder = EncoderRule::FirstTypical;
    run_match(game, &scheme, &config)
}
