//! Achievable rate-value tradeoffs for a helper that describes the state to
//! Player A at a limited rate.
//!
//! A scheme is a Markov chain `S - U - A`. Over a block, the opponent learns
//! nothing about the codeword for a fraction `alpha` of the iterations and
//! knows it for the rest, so the achievable payoff is a time average of two
//! best-response functionals. The layered variant adds a second auxiliary and
//! a third phase.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::dist::ConditionalDistribution;
use crate::error::{Error, Result};
use crate::game::{self, best_response_with_signal, Game, SignalFunction};
use crate::info::{self, conditional_mutual_information, mutual_information, JointDistribution};

/// Information denominators below this are treated as zero.
const INFO_EPS: f64 = 1e-12;
/// Slack on `R >= I(U;S)` so that rate equal to the requirement is feasible.
const RATE_SLACK: f64 = 1e-12;
/// Thresholds this close to 0 or 1 are treated as the endpoint.
const ALPHA_SNAP: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Scheme {
    pub p_u_given_s: ConditionalDistribution,
    pub p_a_given_u: ConditionalDistribution,
}

impl Scheme {
    pub fn new(p_u_given_s: ConditionalDistribution, p_a_given_u: ConditionalDistribution) -> Result<Self> {
        if p_u_given_s.to_size() != p_a_given_u.from_size() {
            return Err(Error::Dimension(format!(
                "p(u|s) has {} auxiliary symbols, p(a|u) has {}",
                p_u_given_s.to_size(),
                p_a_given_u.from_size()
            )));
        }
        Ok(Self { p_u_given_s, p_a_given_u })
    }

    pub fn card_u(&self) -> usize {
        self.p_u_given_s.to_size()
    }

    pub fn check(&self, game: &Game) -> Result<()> {
        if self.p_u_given_s.from_size() != game.num_states() {
            return Err(Error::Dimension(format!(
                "scheme covers {} states, game has {}",
                self.p_u_given_s.from_size(),
                game.num_states()
            )));
        }
        if self.p_a_given_u.to_size() != game.num_actions_a() {
            return Err(Error::Dimension(format!(
                "scheme produces {} actions, game has {}",
                self.p_a_given_u.to_size(),
                game.num_actions_a()
            )));
        }
        Ok(())
    }

    /// Marginal of `U`.
    pub fn p_u(&self, prior: &[f64]) -> Vec<f64> {
        self.p_u_given_s.push_forward(prior)
    }

    /// Induced mixed strategy `p(a|s)`.
    pub fn p_a_given_s(&self) -> ConditionalDistribution {
        self.p_u_given_s.compose(&self.p_a_given_u).expect("shapes checked at construction")
    }

    /// Joint over axes `[S, U, A]`.
    pub fn joint(&self, prior: &[f64]) -> Result<JointDistribution> {
        let (ns, nu, na) = (prior.len(), self.card_u(), self.p_a_given_u.to_size());
        let mut mass = Vec::with_capacity(ns * nu * na);
        for (s, &ps) in prior.iter().enumerate() {
            for u in 0..nu {
                let psu = ps * self.p_u_given_s.prob(s, u);
                mass.extend(self.p_a_given_u.row(u).iter().map(|pa| psu * pa));
            }
        }
        JointDistribution::new(vec![ns, nu, na], mass)
    }
}

/// Two auxiliaries with `S - (U1, U2) - A`.
///
/// `p_u2_given_u1_s` has rows indexed `u1 * |S| + s`; `p_a_given_u1_u2` has
/// rows indexed `u1 * |U2| + u2`.
#[derive(Debug, Clone, PartialEq)]
pub struct LayeredScheme {
    pub p_u1_given_s: ConditionalDistribution,
    pub p_u2_given_u1_s: ConditionalDistribution,
    pub p_a_given_u1_u2: ConditionalDistribution,
}

impl LayeredScheme {
    pub fn new(
        p_u1_given_s: ConditionalDistribution,
        p_u2_given_u1_s: ConditionalDistribution,
        p_a_given_u1_u2: ConditionalDistribution,
    ) -> Result<Self> {
        let (ns, n1, n2) = (p_u1_given_s.from_size(), p_u1_given_s.to_size(), p_u2_given_u1_s.to_size());
        if p_u2_given_u1_s.from_size() != n1 * ns {
            return Err(Error::Dimension(format!(
                "p(u2|u1,s) needs {} rows, has {}",
                n1 * ns,
                p_u2_given_u1_s.from_size()
            )));
        }
        if p_a_given_u1_u2.from_size() != n1 * n2 {
            return Err(Error::Dimension(format!(
                "p(a|u1,u2) needs {} rows, has {}",
                n1 * n2,
                p_a_given_u1_u2.from_size()
            )));
        }
        Ok(Self { p_u1_given_s, p_u2_given_u1_s, p_a_given_u1_u2 })
    }

    /// Embeds a single-auxiliary scheme with a constant first layer.
    pub fn from_second_layer(scheme: &Scheme) -> Self {
        let ns = scheme.p_u_given_s.from_size();
        Self {
            p_u1_given_s: ConditionalDistribution::constant(ns, &[1.0]).expect("unit row"),
            p_u2_given_u1_s: scheme.p_u_given_s.clone(),
            p_a_given_u1_u2: scheme.p_a_given_u.clone(),
        }
    }

    /// Embeds a single-auxiliary scheme with a constant second layer.
    pub fn from_first_layer(scheme: &Scheme) -> Self {
        let (ns, nu) = (scheme.p_u_given_s.from_size(), scheme.card_u());
        Self {
            p_u1_given_s: scheme.p_u_given_s.clone(),
            p_u2_given_u1_s: ConditionalDistribution::constant(nu * ns, &[1.0]).expect("unit row"),
            p_a_given_u1_u2: scheme.p_a_given_u.clone(),
        }
    }

    pub fn card_u1(&self) -> usize {
        self.p_u1_given_s.to_size()
    }

    pub fn card_u2(&self) -> usize {
        self.p_u2_given_u1_s.to_size()
    }

    fn check(&self, game: &Game) -> Result<()> {
        if self.p_u1_given_s.from_size() != game.num_states() || self.p_a_given_u1_u2.to_size() != game.num_actions_a() {
            return Err(Error::Dimension("layered scheme does not match the game".into()));
        }
        Ok(())
    }

    /// The pair `(U1, U2)` flattened into one auxiliary, index `u1 * |U2| + u2`.
    pub fn flattened(&self) -> Scheme {
        let (ns, n1, n2) = (self.p_u1_given_s.from_size(), self.card_u1(), self.card_u2());
        let rows = (0..ns)
            .map(|s| {
                let mut row = vec![0.0; n1 * n2];
                for u1 in 0..n1 {
                    for u2 in 0..n2 {
                        row[u1 * n2 + u2] = self.p_u1_given_s.prob(s, u1) * self.p_u2_given_u1_s.prob(u1 * ns + s, u2);
                    }
                }
                row
            })
            .collect();
        let p_u = ConditionalDistribution::with_tol(rows, 1e-9).expect("product of stochastic rows");
        Scheme { p_u_given_s: p_u, p_a_given_u: self.p_a_given_u1_u2.clone() }
    }

    /// Joint over axes `[S, U1, U2, A]`.
    pub fn joint(&self, prior: &[f64]) -> Result<JointDistribution> {
        let flat = self.flattened().joint(prior)?;
        let (ns, n1, n2, na) = (prior.len(), self.card_u1(), self.card_u2(), self.p_a_given_u1_u2.to_size());
        JointDistribution::new(vec![ns, n1, n2, na], flat.mass().to_vec())
    }
}

/// Information quantities and best-response functionals of a scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeStats {
    /// `I(U;S)`
    pub i_us: f64,
    /// `I(U;S,A)`
    pub i_usa: f64,
    /// `I(U;A|S)`
    pub i_ua_given_s: f64,
    /// Induced strategy against an uninformed B.
    pub pi_low: f64,
    /// B sees the state.
    pub pi_low_s: f64,
    /// B sees the auxiliary.
    pub pi_low_u: f64,
    /// B sees both.
    pub pi_low_su: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateValuePoint {
    pub rate: f64,
    pub payoff: f64,
    pub alpha: f64,
    pub b_knows_state: bool,
}

fn functionals(game: &Game, scheme: &Scheme, u_signals: &[SignalFunction], b_sees_s: bool) -> Result<Vec<f64>> {
    let prior = game.prior();
    let p_u = scheme.p_u(prior);
    let p_s_given_u = scheme.p_u_given_s.invert(prior);
    u_signals
        .iter()
        .map(|sig| best_response_with_signal(game, &p_u, &p_s_given_u, &scheme.p_a_given_u, b_sees_s, sig))
        .collect()
}

pub fn scheme_statistics(game: &Game, scheme: &Scheme) -> Result<SchemeStats> {
    scheme.check(game)?;
    let joint = scheme.joint(game.prior())?;
    let (s, u, a) = (0, 1, 2);
    let nu = scheme.card_u();
    let signals = [SignalFunction::constant(nu), SignalFunction::identity(nu)];
    let ignorant = functionals(game, scheme, &signals, false)?;
    let informed = functionals(game, scheme, &signals, true)?;
    Ok(SchemeStats {
        i_us: mutual_information(&joint, &[u], &[s])?,
        i_usa: mutual_information(&joint, &[u], &[s, a])?,
        i_ua_given_s: conditional_mutual_information(&joint, &[u], &[a], &[s])?,
        pi_low: ignorant[0],
        pi_low_u: ignorant[1],
        pi_low_s: informed[0],
        pi_low_su: informed[1],
    })
}

/// Fraction of the block during which the opponent has not yet decoded `U`.
///
/// Clamped to `[0, 1]`; a vanishing denominator gives 1. Values within
/// `1e-12` of an endpoint are reported as the endpoint.
pub fn threshold_alpha(stats: &SchemeStats, rate: f64, b_knows_state: bool) -> f64 {
    let (num, den) = if b_knows_state {
        ((rate - stats.i_us).max(0.0), stats.i_ua_given_s)
    } else {
        (rate.max(0.0), stats.i_usa)
    };
    if den <= INFO_EPS {
        return 1.0;
    }
    // Snap round-off in the entropy sums onto the endpoints.
    let alpha = (num / den).clamp(0.0, 1.0);
    if alpha > 1.0 - ALPHA_SNAP {
        1.0
    } else if alpha < ALPHA_SNAP {
        0.0
    } else {
        alpha
    }
}

fn check_rate(rate: f64) -> Result<()> {
    if !(rate.is_finite() && rate >= 0.0) {
        return Err(Error::Domain(format!("rate must be finite and nonnegative, got {rate}")));
    }
    Ok(())
}

/// Two-phase payoff of a scheme at `rate` from precomputed statistics.
pub fn payoff_from_stats(stats: &SchemeStats, rate: f64, b_knows_state: bool) -> Result<RateValuePoint> {
    check_rate(rate)?;
    if rate < stats.i_us - RATE_SLACK {
        return Err(Error::InfeasibleRate { rate, required: stats.i_us });
    }
    let alpha = threshold_alpha(stats, rate, b_knows_state);
    let (early, late) = if b_knows_state { (stats.pi_low_s, stats.pi_low_su) } else { (stats.pi_low, stats.pi_low_u) };
    let payoff = if alpha == 1.0 {
        early
    } else if alpha == 0.0 {
        late
    } else {
        alpha * early + (1.0 - alpha) * late
    };
    Ok(RateValuePoint { rate, payoff, alpha, b_knows_state })
}

pub fn theorem1_payoff(game: &Game, scheme: &Scheme, rate: f64, b_knows_state: bool) -> Result<RateValuePoint> {
    payoff_from_stats(&scheme_statistics(game, scheme)?, rate, b_knows_state)
}

/// `1 - H(-payoff)`: rate needed for payoff `payoff` in the game where A is
/// scored by minus the Hamming distortion and B has no move.
pub fn degenerate_rd_rate(payoff: f64) -> Result<f64> {
    if !(-0.5..=0.0).contains(&payoff) {
        return Err(Error::Domain(format!("payoff must lie in [-1/2, 0], got {payoff}")));
    }
    Ok(1.0 - info::binary_entropy(-payoff)?)
}

/// Knobs for [`optimize_bound`] and [`optimize_layered`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundSearch {
    /// Random starting points on top of the structured seeds.
    pub restarts: usize,
    /// Local-ascent proposals per starting point.
    pub iterations: usize,
    pub seed: u64,
}

impl Default for BoundSearch {
    fn default() -> Self {
        Self { restarts: 16, iterations: 1500, seed: 0 }
    }
}

/// Default auxiliary alphabet size `|S| * |A| + 2`.
pub fn default_card_u(game: &Game) -> usize {
    game.num_states() * game.num_actions_a() + 2
}

/// Search objective: feasible points first, then payoff.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
struct Score(f64, f64);

const WORST: Score = Score(-1.0, f64::NEG_INFINITY);

fn score_scheme(game: &Game, scheme: &Scheme, rate: f64, b_knows_state: bool) -> Score {
    match scheme_statistics(game, scheme) {
        Ok(stats) => match payoff_from_stats(&stats, rate, b_knows_state) {
            Ok(p) => Score(1.0, p.payoff),
            Err(_) => Score(0.0, rate - stats.i_us),
        },
        Err(_) => WORST,
    }
}

fn random_row<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let z: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= z);
    v
}

/// Perturbs one row of one of the tables in place.
fn perturb_row<R: Rng>(rng: &mut R, row: &mut [f64], step: f64) {
    let n = row.len();
    if n < 2 {
        return;
    }
    if rng.random_bool(0.5) {
        // Move mass between two entries.
        let i = rng.random_range(0..n);
        let mut j = rng.random_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let m = (step * rng.random::<f64>()).min(row[i]);
        row[i] -= m;
        row[j] += m;
    } else {
        let target = random_row(rng, n);
        let t = step * rng.random::<f64>();
        for (x, y) in row.iter_mut().zip(&target) {
            *x = (1.0 - t) * *x + t * y;
        }
    }
    let z: f64 = row.iter().sum();
    row.iter_mut().for_each(|x| *x = (*x / z).max(0.0));
}

type Tables = Vec<Vec<Vec<f64>>>;

/// Projected random local ascent over a list of row-stochastic tables.
/// Moves that do not lower the score are kept so plateaus can be crossed.
fn local_ascent<R: Rng, F: FnMut(&[Vec<Vec<f64>>]) -> Score>(
    rng: &mut R,
    mut tables: Tables,
    iterations: usize,
    initial_step: f64,
    score: &mut F,
) -> (Tables, Score) {
    let mut best = score(&tables);
    let mut step = initial_step;
    let mut stale = 0;
    let nrows: usize = tables.iter().map(Vec::len).sum();
    for _ in 0..iterations {
        let mut pick = rng.random_range(0..nrows);
        let mut ti = 0;
        while pick >= tables[ti].len() {
            pick -= tables[ti].len();
            ti += 1;
        }
        let saved = tables[ti][pick].clone();
        perturb_row(rng, &mut tables[ti][pick], step);
        let s = score(&tables);
        if s >= best {
            if s > best {
                stale = 0;
                step = (step * 1.25).min(0.5);
            }
            best = s;
        } else {
            tables[ti][pick] = saved;
            stale += 1;
            if stale >= 2 * nrows.max(4) {
                step = (step * 0.6).max(1e-5);
                stale = 0;
            }
        }
    }
    (tables, best)
}

/// Runs local ascent from every start, then refines the three best results
/// with a smaller initial step.
fn multistart<R: Rng, F: FnMut(&[Vec<Vec<f64>>]) -> Score>(
    rng: &mut R,
    starts: Vec<Tables>,
    iterations: usize,
    mut score: F,
) -> Tables {
    let mut results: Vec<(Tables, Score)> =
        starts.into_iter().map(|t| local_ascent(rng, t, iterations, 0.5, &mut score)).collect();
    // Stable sort keeps the earlier start on ties.
    results.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal));
    results.truncate(3);
    let mut best: Option<(Tables, Score)> = None;
    for (tables, s0) in results {
        let (tables, s) = local_ascent(rng, tables, 2 * iterations, 0.05, &mut score);
        let s = if s >= s0 { s } else { s0 };
        if best.as_ref().is_none_or(|(_, b)| s > *b) {
            best = Some((tables, s));
        }
    }
    best.expect("at least one start").0
}

fn scheme_from_tables(t: &[Vec<Vec<f64>>]) -> Result<Scheme> {
    Scheme::new(
        ConditionalDistribution::with_tol(t[0].clone(), 1e-9)?,
        ConditionalDistribution::with_tol(t[1].clone(), 1e-9)?,
    )
}

/// Pads the auxiliary alphabet of `(p(u|s), p(a|u))` to `card_u`, dropping
/// unused symbols if it is too large. Returns `None` if mass would be lost.
fn fit_card(p_u_given_s: Vec<Vec<f64>>, p_a_given_u: Vec<Vec<f64>>, card_u: usize, na: usize) -> Option<Scheme> {
    let nu = p_a_given_u.len();
    let used: Vec<usize> = if nu <= card_u {
        (0..nu).collect()
    } else {
        (0..nu).filter(|&u| p_u_given_s.iter().any(|r| r[u] > 0.0)).collect()
    };
    if used.len() > card_u {
        return None;
    }
    let mut pu = vec![vec![0.0; card_u]; p_u_given_s.len()];
    let mut pa = vec![vec![1.0 / na as f64; na]; card_u];
    for (slot, &u) in used.iter().enumerate() {
        for (s, row) in p_u_given_s.iter().enumerate() {
            pu[s][slot] = row[u];
        }
        pa[slot] = p_a_given_u[u].clone();
    }
    let pu = ConditionalDistribution::with_tol(pu, 1e-9).ok()?;
    let pa = ConditionalDistribution::with_tol(pa, 1e-9).ok()?;
    Scheme::new(pu, pa).ok()
}

/// Mixes every row of `kernel` with `toward`, using the largest weight on
/// `kernel` whose `I(U;S)` fits within `rate`.
fn rate_matched_blend(game: &Game, kernel: &Scheme, toward: &[f64], rate: f64) -> Option<Scheme> {
    let prior = game.prior();
    let q = toward;
    let blend = |lambda: f64| -> Option<Scheme> {
        let rows = kernel
            .p_u_given_s
            .rows()
            .into_iter()
            .map(|r| r.iter().zip(q).map(|(k, qu)| lambda * k + (1.0 - lambda) * qu).collect())
            .collect();
        Scheme::new(ConditionalDistribution::with_tol(rows, 1e-9).ok()?, kernel.p_a_given_u.clone()).ok()
    };
    let i_us = |s: &Scheme| -> f64 {
        s.joint(prior).and_then(|j| mutual_information(&j, &[1], &[0])).unwrap_or(f64::INFINITY)
    };
    if i_us(kernel) <= rate {
        return Some(kernel.clone());
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if i_us(&blend(mid)?) <= rate {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    blend(lo)
}

/// Structured starting points: constant `U`, `U = S`, `U` = A's optimal action
/// and rate-matched blends of the latter two.
fn seed_schemes(game: &Game, rate: f64, b_knows_state: bool, card_u: usize) -> Result<Vec<Scheme>> {
    let (ns, na) = (game.num_states(), game.num_actions_a());
    let none = SignalFunction::constant(ns);
    let state = SignalFunction::identity(ns);
    let f_b = if b_knows_state { &state } else { &none };
    let mut out = Vec::new();

    let blind = game::game_value(game, &none, f_b)?;
    let mix = blind.strategy_a.row(0).to_vec();
    if let Some(s) = fit_card(vec![vec![1.0]; ns], vec![mix], card_u, na) {
        out.push(s);
    }
    let seeing = game::game_value(game, &state, f_b)?;
    let per_state = seeing.strategy_a.rows();
    let mut kernels = Vec::new();
    let identity_rows = ConditionalDistribution::identity(ns).rows();
    if let Some(s) = fit_card(identity_rows, per_state.clone(), card_u, na) {
        kernels.push(s);
    }
    let delta_rows = ConditionalDistribution::identity(na).rows();
    if let Some(s) = fit_card(per_state, delta_rows, card_u, na) {
        kernels.push(s);
    }
    for k in &kernels {
        if let Some(b) = rate_matched_blend(game, k, &k.p_u(game.prior()), rate) {
            out.push(b);
        }
    }
    // Partial reveal: U = S, or a blank symbol on which A plays blind. On a
    // revealed state A mixes the strategies that are optimal when B does and
    // does not see the state.
    if card_u > ns {
        let open = game::game_value(game, &state, &none)?;
        let mut pu = ConditionalDistribution::identity(ns).rows();
        pu.iter_mut().for_each(|r| r.push(0.0));
        let mut blank = vec![0.0; card_u];
        blank[ns] = 1.0;
        let mus: &[f64] = if b_knows_state { &[0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0] } else { &[1.0] };
        for &mu in mus {
            let mut pa: Vec<Vec<f64>> = (0..ns)
                .map(|s| {
                    let (x, y) = (seeing.strategy_a.row(s), open.strategy_a.row(s));
                    x.iter().zip(y).map(|(x, y)| mu * x + (1.0 - mu) * y).collect()
                })
                .collect();
            pa.push(blind.strategy_a.row(0).to_vec());
            if let Some(k) = fit_card(pu.clone(), pa, card_u, na) {
                if let Some(b) = rate_matched_blend(game, &k, &blank, rate) {
                    out.push(b);
                }
                for lambda in [0.25, 0.5, 0.75] {
                    let rows = pu.iter().map(|r| {
                        let mut r: Vec<f64> = r.iter().map(|x| lambda * x).collect();
                        r.resize(card_u, 0.0);
                        r[ns] += 1.0 - lambda;
                        r
                    });
                    if let Ok(p) = ConditionalDistribution::with_tol(rows.collect(), 1e-9) {
                        out.push(Scheme { p_u_given_s: p, p_a_given_u: k.p_a_given_u.clone() });
                    }
                }
            }
        }
    }
    out.extend(kernels);
    Ok(out)
}

/// Best Theorem-1 scheme found by seeded multistart local ascent.
///
/// The returned point is achievable; it is not certified optimal.
pub fn optimize_bound(
    game: &Game,
    rate: f64,
    b_knows_state: bool,
    card_u: usize,
    search: &BoundSearch,
) -> Result<(Scheme, RateValuePoint)> {
    check_rate(rate)?;
    if card_u == 0 {
        return Err(Error::Domain("auxiliary cardinality must be at least 1".into()));
    }
    let (ns, na) = (game.num_states(), game.num_actions_a());
    let mut rng = ChaCha8Rng::seed_from_u64(search.seed);
    let mut starts: Vec<Vec<Vec<Vec<f64>>>> = seed_schemes(game, rate, b_knows_state, card_u)?
        .into_iter()
        .map(|s| vec![s.p_u_given_s.rows(), s.p_a_given_u.rows()])
        .collect();
    for _ in 0..search.restarts {
        let pu = (0..ns).map(|_| random_row(&mut rng, card_u)).collect();
        let pa = (0..card_u).map(|_| random_row(&mut rng, na)).collect();
        starts.push(vec![pu, pa]);
    }
    let tables = multistart(&mut rng, starts, search.iterations, |t| match scheme_from_tables(t) {
        Ok(s) => score_scheme(game, &s, rate, b_knows_state),
        Err(_) => WORST,
    });
    let scheme = scheme_from_tables(&tables)?;
    let point = match theorem1_payoff(game, &scheme, rate, b_knows_state) {
        Ok(p) => p,
        Err(Error::InfeasibleRate { .. }) => {
            return Err(Error::Infeasible(format!("no scheme found with I(U;S) <= {rate}")));
        }
        Err(e) => return Err(e),
    };
    Ok((scheme, point))
}

/// Information quantities of a layered scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayeredStats {
    /// `I(U1;S)`
    pub i_u1s: f64,
    /// `I(U1;S,A)`
    pub i_u1sa: f64,
    /// `I(U2;S,A|U1)`
    pub i_u2sa_given_u1: f64,
    /// `I(U1,U2;S)`
    pub i_u12s: f64,
    /// `I(U2;A|U1,S)`
    pub i_u2a_given_u1s: f64,
    /// Phase payoffs with B seeing nothing, `U1`, and `(U1, U2)`; the state
    /// is added to B's view in the informed case.
    pub phases_ignorant: [f64; 3],
    pub phases_informed: [f64; 3],
}

/// Outcome of evaluating a layered scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LayeredPayoff {
    /// Three-phase payoff. `alpha2` is reported unclamped so values above 1
    /// remain visible; the payoff uses `min(alpha2, 1)`.
    Achieved { payoff: f64, alpha1: f64, alpha2: f64 },
    /// `alpha1 > alpha2`: the second layer is revealed before the first
    /// phase ends and the scheme offers nothing over a single auxiliary.
    NoBenefit { alpha1: f64, alpha2: f64 },
}

impl LayeredPayoff {
    pub fn payoff(&self) -> Option<f64> {
        match *self {
            LayeredPayoff::Achieved { payoff, .. } => Some(payoff),
            LayeredPayoff::NoBenefit { .. } => None,
        }
    }
}

pub fn layered_statistics(game: &Game, lscheme: &LayeredScheme) -> Result<LayeredStats> {
    lscheme.check(game)?;
    let joint = lscheme.joint(game.prior())?;
    let (s, u1, u2, a) = (0, 1, 2, 3);
    let flat = lscheme.flattened();
    let (n1, n2) = (lscheme.card_u1(), lscheme.card_u2());
    let first = SignalFunction::new((0..n1 * n2).map(|u| u / n2).collect(), n1)?;
    let signals = [SignalFunction::constant(n1 * n2), first, SignalFunction::identity(n1 * n2)];
    let ig = functionals(game, &flat, &signals, false)?;
    let inf = functionals(game, &flat, &signals, true)?;
    Ok(LayeredStats {
        i_u1s: mutual_information(&joint, &[u1], &[s])?,
        i_u1sa: mutual_information(&joint, &[u1], &[s, a])?,
        i_u2sa_given_u1: conditional_mutual_information(&joint, &[u2], &[s, a], &[u1])?,
        i_u12s: mutual_information(&joint, &[u1, u2], &[s])?,
        i_u2a_given_u1s: conditional_mutual_information(&joint, &[u2], &[a], &[u1, s])?,
        phases_ignorant: [ig[0], ig[1], ig[2]],
        phases_informed: [inf[0], inf[1], inf[2]],
    })
}

/// Three-phase payoff from precomputed layered statistics.
pub fn layered_from_stats(stats: &LayeredStats, rate: f64, b_knows_state: bool) -> Result<LayeredPayoff> {
    check_rate(rate)?;
    if rate < stats.i_u12s - RATE_SLACK {
        return Err(Error::InfeasibleRate { rate, required: stats.i_u12s });
    }
    let ratio = |num: f64, den: f64, zero: f64| if den <= INFO_EPS { zero } else { num / den };
    let (alpha1, alpha2, phases) = if b_knows_state {
        (0.0, ratio((rate - stats.i_u12s).max(0.0), stats.i_u2a_given_u1s, 1.0), stats.phases_informed)
    } else {
        (
            ratio(stats.i_u1s, stats.i_u1sa, 0.0).clamp(0.0, 1.0),
            ratio((rate - stats.i_u1s).max(0.0), stats.i_u2sa_given_u1, 1.0),
            stats.phases_ignorant,
        )
    };
    let a2 = alpha2.min(1.0);
    if alpha1 > a2 {
        return Ok(LayeredPayoff::NoBenefit { alpha1, alpha2 });
    }
    let payoff = alpha1 * phases[0] + (a2 - alpha1) * phases[1] + (1.0 - a2) * phases[2];
    Ok(LayeredPayoff::Achieved { payoff, alpha1, alpha2 })
}

/// Payoff of the layered scheme: `alpha1` of the block at the induced
/// strategy, up to `alpha2` with B knowing `U1`, the rest with B knowing both
/// auxiliaries.
pub fn layered_payoff(game: &Game, lscheme: &LayeredScheme, rate: f64, b_knows_state: bool) -> Result<LayeredPayoff> {
    layered_from_stats(&layered_statistics(game, lscheme)?, rate, b_knows_state)
}

fn layered_from_tables(t: &[Vec<Vec<f64>>]) -> Result<LayeredScheme> {
    LayeredScheme::new(
        ConditionalDistribution::with_tol(t[0].clone(), 1e-9)?,
        ConditionalDistribution::with_tol(t[1].clone(), 1e-9)?,
        ConditionalDistribution::with_tol(t[2].clone(), 1e-9)?,
    )
}

/// Best layered scheme found by local ascent, started from the best
/// single-auxiliary scheme placed in the second layer (so the result is never
/// worse than [`optimize_bound`] with the same budget) and from random points.
pub fn optimize_layered(
    game: &Game,
    rate: f64,
    b_knows_state: bool,
    card_u1: usize,
    card_u2: usize,
    search: &BoundSearch,
) -> Result<(LayeredScheme, LayeredPayoff)> {
    check_rate(rate)?;
    if card_u1 == 0 || card_u2 == 0 {
        return Err(Error::Domain("auxiliary cardinalities must be at least 1".into()));
    }
    let (ns, na) = (game.num_states(), game.num_actions_a());
    let (single, _) = optimize_bound(game, rate, b_knows_state, card_u2, search)?;
    let embed = LayeredScheme::from_second_layer(&single);
    // Widen U1 to card_u1 with the extra symbols unused.
    let mut t0 = vec![vec![0.0; card_u1]; ns];
    t0.iter_mut().for_each(|r| r[0] = 1.0);
    let t1: Vec<Vec<f64>> = (0..card_u1 * ns).map(|i| embed.p_u2_given_u1_s.row(i % ns).to_vec()).collect();
    let t2: Vec<Vec<f64>> = (0..card_u1 * card_u2).map(|i| embed.p_a_given_u1_u2.row(i % card_u2).to_vec()).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(search.seed ^ 0x6c61_7965_7265_64);
    let mut starts = vec![vec![t0, t1, t2]];
    for _ in 0..search.restarts {
        starts.push(vec![
            (0..ns).map(|_| random_row(&mut rng, card_u1)).collect(),
            (0..card_u1 * ns).map(|_| random_row(&mut rng, card_u2)).collect(),
            (0..card_u1 * card_u2).map(|_| random_row(&mut rng, na)).collect(),
        ]);
    }
    let score = |t: &[Vec<Vec<f64>>]| -> Score {
        let Ok(ls) = layered_from_tables(t) else { return WORST };
        let Ok(stats) = layered_statistics(game, &ls) else { return WORST };
        match layered_from_stats(&stats, rate, b_knows_state) {
            Ok(LayeredPayoff::Achieved { payoff, .. }) => Score(1.0, payoff),
            Ok(LayeredPayoff::NoBenefit { .. }) => Score(0.0, 0.0),
            Err(_) => Score(-0.5, rate - stats.i_u12s),
        }
    };
    let tables = multistart(&mut rng, starts, search.iterations, score);
    let ls = layered_from_tables(&tables)?;
    let outcome = layered_payoff(game, &ls, rate, b_knows_state)?;
    Ok((ls, outcome))
}

/// Schemes that appear in the examples and tests.
pub mod catalog {
    use super::*;

    /// Three-symbol scheme for the erasure game: `U` reveals the state with
    /// probability 1/2 and A plays the revealed state or `e` with equal odds.
    pub fn erasure_optimal() -> Scheme {
        Scheme::new(
            ConditionalDistribution::new(vec![vec![0.5, 0.0, 0.5], vec![0.0, 0.5, 0.5]]).expect("rows"),
            ConditionalDistribution::new(vec![vec![0.5, 0.5, 0.0], vec![0.0, 0.5, 0.5], vec![0.0, 1.0, 0.0]])
                .expect("rows"),
        )
        .expect("shapes")
    }

    /// `U = A = S` for a two-state game whose actions 0 and 2 name the states.
    pub fn erasure_reveal_state() -> Scheme {
        Scheme::new(
            ConditionalDistribution::deterministic(&[0, 2], 3).expect("map"),
            ConditionalDistribution::identity(3),
        )
        .expect("shapes")
    }

    /// Constant auxiliary with A playing `mix`.
    pub fn constant(num_states: usize, mix: &[f64]) -> Result<Scheme> {
        Scheme::new(ConditionalDistribution::constant(num_states, &[1.0])?, ConditionalDistribution::new(vec![mix.to_vec()])?)
    }
}
