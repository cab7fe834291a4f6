//! Finite two-player zero-sum Bayesian games.
//!
//! Payoffs are to Player A (the maximizer); Player B receives the negative.
//! The payoff tensor is indexed `(a, b, s)`.

use crate::dist::{normalize_probability, ConditionalDistribution};
use crate::error::{Error, Result};
use crate::lp;

/// Finite stand-in for a `-inf` payoff unless the caller overrides it.
pub const DEFAULT_NEG_INF: f64 = -1e6;

/// Default cap on `rows * cols` of the expanded pure-strategy matrix.
pub const DEFAULT_STRATEGY_CELLS: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq)]
pub struct Game {
    states: Vec<String>,
    prior: Vec<f64>,
    actions_a: Vec<String>,
    actions_b: Vec<String>,
    /// Flattened `(a, b, s)`.
    payoff: Vec<f64>,
    neg_inf_value: f64,
}

impl Game {
    /// Builds a game from per-state payoff matrices `matrices[s][a][b]`.
    ///
    /// Entries equal to `f64::NEG_INFINITY` are replaced by `neg_inf_value`.
    pub fn from_state_matrices(
        states: Vec<String>,
        prior: Vec<f64>,
        actions_a: Vec<String>,
        actions_b: Vec<String>,
        matrices: &[Vec<Vec<f64>>],
        neg_inf_value: f64,
    ) -> Result<Self> {
        let (ns, na, nb) = (states.len(), actions_a.len(), actions_b.len());
        if ns == 0 || na == 0 || nb == 0 {
            return Err(Error::Dimension("games need at least one state and one action per player".into()));
        }
        if !(neg_inf_value.is_finite() && neg_inf_value < 0.0) {
            return Err(Error::Domain(format!("neg_inf_value must be finite and negative, got {neg_inf_value}")));
        }
        if prior.len() != ns {
            return Err(Error::Dimension(format!("prior has {} entries for {ns} states", prior.len())));
        }
        let prior = normalize_probability(&prior, "prior")?;
        if matrices.len() != ns {
            return Err(Error::Dimension(format!("{} payoff blocks for {ns} states", matrices.len())));
        }
        let mut payoff = vec![0.0; na * nb * ns];
        for (s, block) in matrices.iter().enumerate() {
            if block.len() != na || block.iter().any(|row| row.len() != nb) {
                return Err(Error::Dimension(format!("payoff block for state {s} is not {na}x{nb}")));
            }
            for a in 0..na {
                for b in 0..nb {
                    let mut v = block[a][b];
                    if v == f64::NEG_INFINITY {
                        v = neg_inf_value;
                    }
                    if !v.is_finite() {
                        return Err(Error::Domain(format!("payoff ({a},{b},{s}) is not finite")));
                    }
                    if v < neg_inf_value {
                        return Err(Error::Domain(format!(
                            "payoff ({a},{b},{s}) = {v} is below neg_inf_value {neg_inf_value}"
                        )));
                    }
                    payoff[(a * nb + b) * ns + s] = v;
                }
            }
        }
        Ok(Self { states, prior, actions_a, actions_b, payoff, neg_inf_value })
    }

    /// Single-state game from a plain payoff matrix `m[a][b]`.
    pub fn matrix(m: &[Vec<f64>]) -> Result<Self> {
        let na = m.len();
        let nb = m.first().map_or(0, Vec::len);
        Self::from_state_matrices(
            vec!["s".into()],
            vec![1.0],
            (0..na).map(|a| a.to_string()).collect(),
            (0..nb).map(|b| b.to_string()).collect(),
            &[m.to_vec()],
            DEFAULT_NEG_INF,
        )
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_actions_a(&self) -> usize {
        self.actions_a.len()
    }

    pub fn num_actions_b(&self) -> usize {
        self.actions_b.len()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn actions_a(&self) -> &[String] {
        &self.actions_a
    }

    pub fn actions_b(&self) -> &[String] {
        &self.actions_b
    }

    pub fn prior(&self) -> &[f64] {
        &self.prior
    }

    pub fn neg_inf_value(&self) -> f64 {
        self.neg_inf_value
    }

    #[inline]
    pub fn payoff(&self, a: usize, b: usize, s: usize) -> f64 {
        self.payoff[(a * self.actions_b.len() + b) * self.states.len() + s]
    }

    /// `matrices[s][a][b]`, the inverse of [`Game::from_state_matrices`].
    pub fn state_matrices(&self) -> Vec<Vec<Vec<f64>>> {
        (0..self.num_states()).map(|s| self.state_matrix(s)).collect()
    }

    pub fn state_matrix(&self, s: usize) -> Vec<Vec<f64>> {
        (0..self.num_actions_a())
            .map(|a| (0..self.num_actions_b()).map(|b| self.payoff(a, b, s)).collect())
            .collect()
    }

    /// `sum_s prior(s) * payoff(., ., s)`.
    pub fn prior_averaged_matrix(&self) -> Vec<Vec<f64>> {
        (0..self.num_actions_a())
            .map(|a| {
                (0..self.num_actions_b())
                    .map(|b| (0..self.num_states()).map(|s| self.prior[s] * self.payoff(a, b, s)).sum())
                    .collect()
            })
            .collect()
    }

    pub fn payoff_range(&self) -> (f64, f64) {
        let lo = self.payoff.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.payoff.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }

    /// Same game with states, A-actions and B-actions relabeled (`new = perm[old]`).
    pub fn permuted(&self, perm_s: &[usize], perm_a: &[usize], perm_b: &[usize]) -> Self {
        let (ns, na, nb) = (self.num_states(), self.num_actions_a(), self.num_actions_b());
        let mut g = self.clone();
        for s in 0..ns {
            g.prior[perm_s[s]] = self.prior[s];
            g.states[perm_s[s]] = self.states[s].clone();
        }
        for a in 0..na {
            g.actions_a[perm_a[a]] = self.actions_a[a].clone();
        }
        for b in 0..nb {
            g.actions_b[perm_b[b]] = self.actions_b[b].clone();
        }
        for a in 0..na {
            for b in 0..nb {
                for s in 0..ns {
                    g.payoff[(perm_a[a] * nb + perm_b[b]) * ns + perm_s[s]] = self.payoff(a, b, s);
                }
            }
        }
        g
    }
}

/// What a player observes about the state: a total map from states to signals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignalFunction {
    map: Vec<usize>,
    signal_count: usize,
}

impl SignalFunction {
    pub fn new(map: Vec<usize>, signal_count: usize) -> Result<Self> {
        if let Some((s, &x)) = map.iter().enumerate().find(|(_, &x)| x >= signal_count) {
            return Err(Error::Dimension(format!("state {s} maps to signal {x}, only {signal_count} signals")));
        }
        Ok(Self { map, signal_count })
    }

    /// The player does not observe the state.
    pub fn constant(num_states: usize) -> Self {
        Self { map: vec![0; num_states], signal_count: 1 }
    }

    /// The player observes the state.
    pub fn identity(num_states: usize) -> Self {
        Self { map: (0..num_states).collect(), signal_count: num_states }
    }

    #[inline]
    pub fn signal(&self, s: usize) -> usize {
        self.map[s]
    }

    pub fn num_states(&self) -> usize {
        self.map.len()
    }

    pub fn signal_count(&self) -> usize {
        self.signal_count
    }

    fn used_signals(&self) -> Vec<usize> {
        let mut used = self.map.clone();
        used.sort_unstable();
        used.dedup();
        used
    }
}

#[derive(Debug, Clone)]
pub struct GameValueResult {
    pub value: f64,
    /// Rows indexed by A's signal.
    pub strategy_a: ConditionalDistribution,
    /// Rows indexed by B's signal.
    pub strategy_b: ConditionalDistribution,
    /// Upper guarantee minus lower guarantee of the returned strategies.
    pub lp_gap: f64,
}

/// Average payoff to A when both players use signal-dependent mixed strategies.
pub fn expected_payoff(
    game: &Game,
    strat_a: &ConditionalDistribution,
    strat_b: &ConditionalDistribution,
    f_a: &SignalFunction,
    f_b: &SignalFunction,
) -> Result<f64> {
    check_signal(game, f_a, strat_a, game.num_actions_a(), "A")?;
    check_signal(game, f_b, strat_b, game.num_actions_b(), "B")?;
    let mut total = 0.0;
    for s in 0..game.num_states() {
        let (xa, yb) = (strat_a.row(f_a.signal(s)), strat_b.row(f_b.signal(s)));
        let mut inner = 0.0;
        for (a, &pa) in xa.iter().enumerate() {
            if pa == 0.0 {
                continue;
            }
            for (b, &pb) in yb.iter().enumerate() {
                inner += pa * pb * game.payoff(a, b, s);
            }
        }
        total += game.prior()[s] * inner;
    }
    Ok(total)
}

fn check_signal(
    game: &Game,
    f: &SignalFunction,
    strat: &ConditionalDistribution,
    actions: usize,
    who: &str,
) -> Result<()> {
    if f.num_states() != game.num_states() {
        return Err(Error::Dimension(format!(
            "{who}'s signal covers {} states, game has {}",
            f.num_states(),
            game.num_states()
        )));
    }
    if strat.from_size() != f.signal_count() || strat.to_size() != actions {
        return Err(Error::Dimension(format!(
            "{who}'s strategy is {}x{}, expected {}x{actions}",
            strat.from_size(),
            strat.to_size(),
            f.signal_count()
        )));
    }
    Ok(())
}

/// Max-min mixed strategy of the row player for `matrix[row][col]`.
/// Optimal mixed strategy of the minimizing column player when every entry
/// lies in `[1, 2]`: maximize `sum(y)` subject to `P y <= 1`, `y >= 0`.
fn column_strategy(matrix: &[Vec<f64>]) -> Result<Vec<f64>> {
    let m = matrix.len();
    let k = matrix[0].len();
    let mut a = Vec::with_capacity(m);
    for (i, r) in matrix.iter().enumerate() {
        let mut row = vec![0.0; k + m];
        row[..k].copy_from_slice(r);
        row[k + i] = 1.0;
        a.push(row);
    }
    let mut c = vec![0.0; k + m];
    c[..k].iter_mut().for_each(|x| *x = 1.0);
    let sol = lp::maximize(&a, &vec![1.0; m], &c)?;
    let y: Vec<f64> = sol.x[..k].iter().map(|&v| v.max(0.0)).collect();
    let sum: f64 = y.iter().sum();
    Ok(y.into_iter().map(|v| v / sum).collect())
}

/// Solves the zero-sum matrix game with A choosing rows (maximizer) and B columns.
pub fn solve_matrix_game(matrix: &[Vec<f64>]) -> Result<GameValueResult> {
    if matrix.is_empty() || matrix[0].is_empty() {
        return Err(Error::Dimension("matrix game needs at least one row and column".into()));
    }
    let k = matrix[0].len();
    if matrix.iter().any(|r| r.len() != k) {
        return Err(Error::Dimension("ragged payoff matrix".into()));
    }
    if matrix.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::Domain("matrix entries must be finite".into()));
    }
    let m = matrix.len();
    // Solve on an affinely rescaled copy in [1, 2]; the optimal strategies are
    // unchanged and the tableau stays well conditioned with `-inf` stand-ins.
    let lo = matrix.iter().flatten().copied().fold(f64::INFINITY, f64::min);
    let hi = matrix.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = if hi > lo { hi - lo } else { 1.0 };
    let scaled: Vec<Vec<f64>> = matrix.iter().map(|r| r.iter().map(|v| 1.0 + (v - lo) / span).collect()).collect();
    let y = column_strategy(&scaled)?;
    let mirrored: Vec<Vec<f64>> = (0..k).map(|j| (0..m).map(|i| 3.0 - scaled[i][j]).collect()).collect();
    let x = column_strategy(&mirrored)?;

    let guarantees = |x: &[f64], y: &[f64]| {
        let lower = (0..k)
            .map(|j| (0..m).map(|i| x[i] * matrix[i][j]).sum::<f64>())
            .fold(f64::INFINITY, f64::min);
        let upper = (0..m)
            .map(|i| (0..k).map(|j| y[j] * matrix[i][j]).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max);
        (lower, upper)
    };
    let (mut x, mut y) = (x, y);
    let (mut lower, mut upper) = guarantees(&x, &y);
    // Re-solve each strategy from its equalizing equations; keep it only if
    // its guarantee does not get worse.
    if let Some(px) = equalize(matrix, &x, span) {
        let (pl, _) = guarantees(&px, &y);
        if pl >= lower {
            (x, lower) = (px, pl);
        }
    }
    let negated_t: Vec<Vec<f64>> = (0..k).map(|j| (0..m).map(|i| -matrix[i][j]).collect()).collect();
    if let Some(py) = equalize(&negated_t, &y, span) {
        let (_, pu) = guarantees(&x, &py);
        if pu <= upper {
            (y, upper) = (py, pu);
        }
    }
    Ok(GameValueResult {
        value: 0.5 * (lower + upper),
        strategy_a: ConditionalDistribution::with_tol(vec![x], 1e-9)?,
        strategy_b: ConditionalDistribution::with_tol(vec![y], 1e-9)?,
        lp_gap: (upper - lower).max(0.0),
    })
}

/// Row strategy supported on `x`'s support that makes every column tight
/// against `x` pay the same. `None` when that does not pin it down.
fn equalize(matrix: &[Vec<f64>], x: &[f64], span: f64) -> Option<Vec<f64>> {
    let k = matrix[0].len();
    let rows: Vec<usize> = (0..x.len()).filter(|&i| x[i] > 1e-9).collect();
    let pay: Vec<f64> = (0..k).map(|j| rows.iter().map(|&i| x[i] * matrix[i][j]).sum()).collect();
    let low = pay.iter().copied().fold(f64::INFINITY, f64::min);
    let tight: Vec<usize> = (0..k).filter(|&j| pay[j] <= low + 1e-7 * span).collect();
    let n = rows.len();
    // sum_i x_i M[i][j] - v = 0 for tight j, and sum_i x_i = 1.
    let mut eqs: Vec<Vec<f64>> = tight
        .iter()
        .map(|&j| {
            let mut e: Vec<f64> = rows.iter().map(|&i| matrix[i][j]).collect();
            e.extend([-1.0, 0.0]);
            e
        })
        .collect();
    let mut norm = vec![1.0; n];
    norm.extend([0.0, 1.0]);
    eqs.push(norm);
    let sol = solve_consistent(eqs, n + 1)?;
    if sol[..n].iter().any(|&v| v < -1e-12) {
        return None;
    }
    let mut out = vec![0.0; x.len()];
    for (c, &i) in rows.iter().enumerate() {
        out[i] = sol[c].max(0.0);
    }
    let z: f64 = out.iter().sum();
    Some(out.into_iter().map(|v| v / z).collect())
}

/// Solves a possibly overdetermined augmented system that is expected to be
/// consistent, choosing pivot equations by magnitude. `None` when singular or
/// when a leftover equation is violated.
fn solve_consistent(mut a: Vec<Vec<f64>>, unknowns: usize) -> Option<Vec<f64>> {
    let m = a.len();
    if m < unknowns {
        return None;
    }
    let scale = a.iter().flatten().fold(0.0f64, |acc, v| acc.max(v.abs())).max(1.0);
    for col in 0..unknowns {
        let piv = (col..m).max_by(|&p, &q| a[p][col].abs().total_cmp(&a[q][col].abs()))?;
        if a[piv][col].abs() <= 1e-12 * scale {
            return None;
        }
        a.swap(col, piv);
        for r in 0..m {
            if r != col {
                let f = a[r][col] / a[col][col];
                if f != 0.0 {
                    for c in col..=unknowns {
                        a[r][c] -= f * a[col][c];
                    }
                }
            }
        }
    }
    if a[unknowns..].iter().any(|r| r[unknowns].abs() > 1e-9 * scale) {
        return None;
    }
    Some((0..unknowns).map(|i| a[i][unknowns] / a[i][i]).collect())
}

/// Value of the one-shot game in which A sees `f_a(S)` and B sees `f_b(S)`.
pub fn game_value(game: &Game, f_a: &SignalFunction, f_b: &SignalFunction) -> Result<GameValueResult> {
    game_value_capped(game, f_a, f_b, DEFAULT_STRATEGY_CELLS)
}

/// [`game_value`] with an explicit cap on the expanded strategy matrix size.
pub fn game_value_capped(
    game: &Game,
    f_a: &SignalFunction,
    f_b: &SignalFunction,
    max_cells: usize,
) -> Result<GameValueResult> {
    for (f, who) in [(f_a, "A"), (f_b, "B")] {
        if f.num_states() != game.num_states() {
            return Err(Error::Dimension(format!("{who}'s signal covers {} states", f.num_states())));
        }
    }
    let used_a = f_a.used_signals();
    let used_b = f_b.used_signals();
    let (na, nb) = (game.num_actions_a(), game.num_actions_b());
    let rows = checked_power(na, used_a.len());
    let cols = checked_power(nb, used_b.len());
    let cells = rows.and_then(|r| cols.and_then(|c| r.checked_mul(c)));
    match cells {
        Some(cells) if cells <= max_cells => {}
        _ => {
            let needed = (na as f64).powi(used_a.len() as i32) * (nb as f64).powi(used_b.len() as i32);
            return Err(Error::Capacity {
                what: "expanded pure-strategy matrix".into(),
                needed,
                cap: max_cells as f64,
            });
        }
    }
    let (rows, cols) = (rows.unwrap(), cols.unwrap());
    // Position of each state's signal within the used-signal lists.
    let slot_a: Vec<usize> = (0..game.num_states())
        .map(|s| used_a.binary_search(&f_a.signal(s)).unwrap())
        .collect();
    let slot_b: Vec<usize> = (0..game.num_states())
        .map(|s| used_b.binary_search(&f_b.signal(s)).unwrap())
        .collect();
    let digits = |mut code: usize, radix: usize, len: usize| {
        let mut d = vec![0; len];
        for x in d.iter_mut() {
            *x = code % radix;
            code /= radix;
        }
        d
    };
    let maps_a: Vec<Vec<usize>> = (0..rows).map(|r| digits(r, na, used_a.len())).collect();
    let maps_b: Vec<Vec<usize>> = (0..cols).map(|c| digits(c, nb, used_b.len())).collect();
    let matrix: Vec<Vec<f64>> = maps_a
        .iter()
        .map(|ma| {
            maps_b
                .iter()
                .map(|mb| {
                    (0..game.num_states())
                        .map(|s| game.prior()[s] * game.payoff(ma[slot_a[s]], mb[slot_b[s]], s))
                        .sum()
                })
                .collect()
        })
        .collect();
    let solved = solve_matrix_game(&matrix)?;
    let behavioral = |weights: &[f64], maps: &[Vec<usize>], used: &[usize], count: usize, actions: usize| {
        let mut rows = vec![vec![1.0 / actions as f64; actions]; count];
        for (slot, &sig) in used.iter().enumerate() {
            let mut row = vec![0.0; actions];
            for (w, map) in weights.iter().zip(maps) {
                row[map[slot]] += w;
            }
            rows[sig] = row;
        }
        ConditionalDistribution::with_tol(rows, 1e-9)
    };
    Ok(GameValueResult {
        value: solved.value,
        strategy_a: behavioral(solved.strategy_a.row(0), &maps_a, &used_a, f_a.signal_count(), na)?,
        strategy_b: behavioral(solved.strategy_b.row(0), &maps_b, &used_b, f_b.signal_count(), nb)?,
        lp_gap: solved.lp_gap,
    })
}

fn checked_power(base: usize, exp: usize) -> Option<usize> {
    u32::try_from(exp).ok().and_then(|e| base.checked_pow(e))
}

/// Minimum over B's best responses of A's average payoff when A's action is
/// generated from an auxiliary `U` (Markov chain `S - U - A`).
///
/// `b_sees_s` / `b_sees_u` select which of the four best-response payoff
/// functionals is returned: neither flag gives the functional of the induced
/// `p(a|s)` against an uninformed B, `b_sees_s` the state-informed one,
/// `b_sees_u` the one where B learns `U`, and both flags the one where B
/// learns both.
pub fn best_response_payoff(
    game: &Game,
    p_u: &[f64],
    p_s_given_u: &ConditionalDistribution,
    p_a_given_u: &ConditionalDistribution,
    b_sees_s: bool,
    b_sees_u: bool,
) -> Result<f64> {
    let nu = p_u.len();
    let signal = if b_sees_u { SignalFunction::identity(nu) } else { SignalFunction::constant(nu) };
    best_response_with_signal(game, p_u, p_s_given_u, p_a_given_u, b_sees_s, &signal)
}

/// Generalization of [`best_response_payoff`] in which B observes a function
/// `u_signal` of the auxiliary (and the state if `b_sees_s`).
pub fn best_response_with_signal(
    game: &Game,
    p_u: &[f64],
    p_s_given_u: &ConditionalDistribution,
    p_a_given_u: &ConditionalDistribution,
    b_sees_s: bool,
    u_signal: &SignalFunction,
) -> Result<f64> {
    let (ns, na, nb, nu) = (game.num_states(), game.num_actions_a(), game.num_actions_b(), p_u.len());
    if p_s_given_u.from_size() != nu || p_s_given_u.to_size() != ns {
        return Err(Error::Dimension(format!(
            "p(s|u) is {}x{}, expected {nu}x{ns}",
            p_s_given_u.from_size(),
            p_s_given_u.to_size()
        )));
    }
    if p_a_given_u.from_size() != nu || p_a_given_u.to_size() != na {
        return Err(Error::Dimension(format!(
            "p(a|u) is {}x{}, expected {nu}x{na}",
            p_a_given_u.from_size(),
            p_a_given_u.to_size()
        )));
    }
    if u_signal.num_states() != nu {
        return Err(Error::Dimension("signal on U has the wrong domain".into()));
    }
    let marginal = p_s_given_u.push_forward(p_u);
    for s in 0..ns {
        if (marginal[s] - game.prior()[s]).abs() > 1e-9 {
            return Err(Error::Contract(format!(
                "induced state marginal {:?} differs from the prior {:?}",
                marginal,
                game.prior()
            )));
        }
    }
    let cells_s = if b_sees_s { ns } else { 1 };
    let ncell = cells_s * u_signal.signal_count();
    // cost[cell][b] = sum over (u, s) in cell of p(u) p(s|u) sum_a p(a|u) payoff(a, b, s)
    let mut cost = vec![0.0; ncell * nb];
    for u in 0..nu {
        if p_u[u] == 0.0 {
            continue;
        }
        for s in 0..ns {
            let w = p_u[u] * p_s_given_u.prob(u, s);
            if w == 0.0 {
                continue;
            }
            let cell = u_signal.signal(u) * cells_s + if b_sees_s { s } else { 0 };
            for b in 0..nb {
                let mut acc = 0.0;
                for a in 0..na {
                    acc += p_a_given_u.prob(u, a) * game.payoff(a, b, s);
                }
                cost[cell * nb + b] += w * acc;
            }
        }
    }
    Ok(cost.chunks(nb).map(|c| c.iter().copied().fold(f64::INFINITY, f64::min)).sum())
}

/// Games used throughout the examples and tests.
pub mod catalog {
    use super::*;

    fn labels(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    /// One state, `[[3, 0], [0, 1]]`: A mixes 1/4, 3/4 and gets 3/4.
    pub fn simple_mixed() -> Game {
        Game::from_state_matrices(
            labels(&["s"]),
            vec![1.0],
            labels(&["0", "1"]),
            labels(&["0", "1"]),
            &[vec![vec![3.0, 0.0], vec![0.0, 1.0]]],
            DEFAULT_NEG_INF,
        )
        .expect("valid game")
    }

    /// Binary uniform state, A in {0, e, 1}, B in {0, 1}. A must play the
    /// state or the erasure `e`; guessing the wrong state costs `neg_inf`.
    pub fn erasure_with(neg_inf: f64) -> Game {
        let ni = f64::NEG_INFINITY;
        Game::from_state_matrices(
            labels(&["0", "1"]),
            vec![0.5, 0.5],
            labels(&["0", "e", "1"]),
            labels(&["0", "1"]),
            &[
                vec![vec![3.0, 0.0], vec![0.0, 1.0], vec![ni, ni]],
                vec![vec![ni, ni], vec![1.0, 0.0], vec![0.0, 3.0]],
            ],
            neg_inf,
        )
        .expect("valid game")
    }

    pub fn erasure() -> Game {
        erasure_with(DEFAULT_NEG_INF)
    }

    /// B has a single action; A's payoff is minus the Hamming distortion.
    pub fn hamming() -> Game {
        Game::from_state_matrices(
            labels(&["0", "1"]),
            vec![0.5, 0.5],
            labels(&["0", "1"]),
            labels(&["-"]),
            &[vec![vec![0.0], vec![-1.0]], vec![vec![-1.0], vec![0.0]]],
            DEFAULT_NEG_INF,
        )
        .expect("valid game")
    }
}
