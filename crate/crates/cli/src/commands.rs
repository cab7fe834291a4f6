use std::fmt::Write;

use stategame::game::game_value;
use stategame::info::{wyner_common_information, JointDistribution, WynerSearch};
use stategame::rate_value::{
    layered_payoff, layered_statistics, optimize_bound, optimize_layered, scheme_statistics, theorem1_payoff,
    BoundSearch, LayeredPayoff, LayeredScheme, SchemeStats,
};
use stategame::sim::{run_match, MatchConfig};
use stategame::{ConditionalDistribution, Error, Game, RateValuePoint, Scheme, SignalFunction};

use crate::error::CliError;
use crate::files::{AnyScheme, SchemeFile};

/// A player's view of the state with display names for its signals.
#[derive(Debug, Clone, PartialEq)]
pub struct InfoSpec {
    pub signal: SignalFunction,
    pub names: Vec<String>,
}

/// `none`, `state`, or `signal:<state>:<signal>,...` with states by label or index.
pub fn parse_info(spec: &str, game: &Game) -> Result<InfoSpec, CliError> {
    let ns = game.num_states();
    match spec {
        "none" => return Ok(InfoSpec { signal: SignalFunction::constant(ns), names: vec!["-".into()] }),
        "state" => return Ok(InfoSpec { signal: SignalFunction::identity(ns), names: game.states().to_vec() }),
        _ => {}
    }
    let Some(map) = spec.strip_prefix("signal:") else {
        return Err(CliError::Usage(format!("information spec '{spec}' is not none, state or signal:<map>")));
    };
    let mut assigned: Vec<Option<usize>> = vec![None; ns];
    let mut names: Vec<String> = Vec::new();
    for pair in map.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let Some((state, sig)) = pair.rsplit_once(':') else {
            return Err(CliError::Usage(format!("signal pair '{pair}' is not state:signal")));
        };
        let s = game
            .states()
            .iter()
            .position(|l| l == state)
            .or_else(|| state.parse::<usize>().ok().filter(|&i| i < ns))
            .ok_or_else(|| CliError::Usage(format!("unknown state '{state}' in signal map")))?;
        if assigned[s].is_some() {
            return Err(CliError::Usage(format!("state '{state}' is mapped twice")));
        }
        let k = match names.iter().position(|n| n == sig) {
            Some(k) => k,
            None => {
                names.push(sig.to_string());
                names.len() - 1
            }
        };
        assigned[s] = Some(k);
    }
    let map: Vec<usize> = assigned
        .iter()
        .enumerate()
        .map(|(s, k)| k.ok_or_else(|| CliError::Usage(format!("state '{}' has no signal", game.states()[s]))))
        .collect::<Result<_, _>>()?;
    Ok(InfoSpec { signal: SignalFunction::new(map, names.len())?, names })
}

fn table(out: &mut String, title: &str, rows: &[String], cols: &[String], p: &ConditionalDistribution) {
    let _ = writeln!(out, "{title}");
    let _ = writeln!(out, "signal\t{}", cols.join("\t"));
    for (i, name) in rows.iter().enumerate() {
        let cells: Vec<String> = p.row(i).iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "{name}\t{}", cells.join("\t"));
    }
}

pub fn value(game: &Game, a: &InfoSpec, b: &InfoSpec) -> Result<String, CliError> {
    let v = game_value(game, &a.signal, &b.signal)?;
    let mut out = String::new();
    let _ = writeln!(out, "value\t{}", v.value);
    let _ = writeln!(out, "lp_gap\t{}", v.lp_gap);
    table(&mut out, "strategy_a", &a.names, game.actions_a(), &v.strategy_a);
    table(&mut out, "strategy_b", &b.names, game.actions_b(), &v.strategy_b);
    Ok(out)
}

/// How `bound` and `sweep` get their scheme.
#[derive(Debug, Clone)]
pub enum SchemeSource {
    Given(AnyScheme),
    Optimize { card_u: usize, card_u2: Option<usize>, search: BoundSearch },
}

fn stats_lines(out: &mut String, s: &SchemeStats) {
    for (k, v) in [
        ("i_us", s.i_us),
        ("i_usa", s.i_usa),
        ("i_ua_given_s", s.i_ua_given_s),
        ("pi_low", s.pi_low),
        ("pi_low_s", s.pi_low_s),
        ("pi_low_u", s.pi_low_u),
        ("pi_low_su", s.pi_low_su),
    ] {
        let _ = writeln!(out, "{k}\t{v}");
    }
}

fn point_lines(out: &mut String, p: &RateValuePoint) {
    let _ = writeln!(out, "rate\t{}", p.rate);
    let _ = writeln!(out, "payoff\t{}", p.payoff);
    let _ = writeln!(out, "alpha\t{}", p.alpha);
    let _ = writeln!(out, "b_knows_state\t{}", p.b_knows_state);
}

fn layered_lines(out: &mut String, game: &Game, ls: &LayeredScheme, rate: f64, b_knows: bool) -> Result<(), CliError> {
    let outcome = layered_payoff(game, ls, rate, b_knows)?;
    let st = layered_statistics(game, ls)?;
    let _ = writeln!(out, "rate\t{rate}");
    match outcome {
        LayeredPayoff::Achieved { payoff, alpha1, alpha2 } => {
            let _ = writeln!(out, "payoff\t{payoff}");
            let _ = writeln!(out, "alpha1\t{alpha1}");
            let _ = writeln!(out, "alpha2\t{alpha2}");
        }
        LayeredPayoff::NoBenefit { alpha1, alpha2 } => {
            let _ = writeln!(out, "payoff\tno_benefit");
            let _ = writeln!(out, "alpha1\t{alpha1}");
            let _ = writeln!(out, "alpha2\t{alpha2}");
        }
    }
    let _ = writeln!(out, "b_knows_state\t{b_knows}");
    for (k, v) in [
        ("i_u1s", st.i_u1s),
        ("i_u1sa", st.i_u1sa),
        ("i_u2sa_given_u1", st.i_u2sa_given_u1),
        ("i_u12s", st.i_u12s),
        ("i_u2a_given_u1s", st.i_u2a_given_u1s),
    ] {
        let _ = writeln!(out, "{k}\t{v}");
    }
    let phases = if b_knows { st.phases_informed } else { st.phases_ignorant };
    let _ = writeln!(out, "phases\t{}\t{}\t{}", phases[0], phases[1], phases[2]);
    Ok(())
}

fn scheme_json(file: &SchemeFile) -> String {
    serde_json::to_string_pretty(file).expect("scheme serializes") + "\n"
}

pub fn bound(game: &Game, rate: f64, b_knows: bool, source: &SchemeSource) -> Result<String, CliError> {
    let mut out = String::new();
    match source {
        SchemeSource::Given(AnyScheme::Single(s)) => {
            s.check(game)?;
            point_lines(&mut out, &theorem1_payoff(game, s, rate, b_knows)?);
            stats_lines(&mut out, &scheme_statistics(game, s)?);
        }
        SchemeSource::Given(AnyScheme::Layered(ls)) => layered_lines(&mut out, game, ls, rate, b_knows)?,
        SchemeSource::Optimize { card_u, card_u2: None, search } => {
            let (s, p) = optimize_bound(game, rate, b_knows, *card_u, search)?;
            point_lines(&mut out, &p);
            stats_lines(&mut out, &scheme_statistics(game, &s)?);
            out.push_str(&scheme_json(&SchemeFile::from_scheme(&s)));
        }
        SchemeSource::Optimize { card_u, card_u2: Some(card_u2), search } => {
            let (ls, _) = optimize_layered(game, rate, b_knows, *card_u, *card_u2, search)?;
            layered_lines(&mut out, game, &ls, rate, b_knows)?;
            out.push_str(&scheme_json(&SchemeFile::from_layered(&ls)));
        }
    }
    Ok(out)
}

/// `r1:r2:step`, inclusive of `r2` up to round-off. `r1 > r2` gives no rates.
pub fn parse_rates(spec: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || CliError::Usage(format!("rate range '{spec}' is not r1:r2:step"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let v: Vec<f64> = parts.iter().map(|p| p.trim().parse::<f64>().map_err(|_| bad())).collect::<Result<_, _>>()?;
    let (r1, r2, step) = (v[0], v[1], v[2]);
    if !(r1.is_finite() && r2.is_finite() && step.is_finite() && step > 0.0) || r1 < 0.0 {
        return Err(CliError::Usage(format!("rate range '{spec}' needs r1 >= 0 and step > 0")));
    }
    let mut rates = Vec::new();
    let mut i = 0usize;
    loop {
        let r = ((r1 + i as f64 * step) * 1e12).round() / 1e12;
        if r > r2 + 1e-9 * step.max(1.0) {
            break;
        }
        rates.push(r);
        i += 1;
    }
    Ok(rates)
}

/// CSV `rate,payoff,alpha`. With `--optimize` each row is the better of the
/// fresh search and the best earlier scheme re-evaluated at this rate, so the
/// payoff column is nondecreasing. A fixed scheme skips rates below `I(U;S)`.
pub fn sweep(game: &Game, rates: &[f64], b_knows: bool, source: &SchemeSource) -> Result<(String, Vec<String>), CliError> {
    let mut csv = String::from("rate,payoff,alpha\n");
    let mut notes = Vec::new();
    let mut best: Option<Scheme> = None;
    let mut last = f64::NEG_INFINITY;
    for &rate in rates {
        let point = match source {
            SchemeSource::Given(AnyScheme::Single(s)) => {
                s.check(game)?;
                match theorem1_payoff(game, s, rate, b_knows) {
                    Ok(p) => p,
                    Err(Error::InfeasibleRate { required, .. }) => {
                        notes.push(format!("rate {rate} skipped: below I(U;S) = {required}"));
                        continue;
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            SchemeSource::Optimize { card_u, card_u2: None, search } => {
                let (s, p) = optimize_bound(game, rate, b_knows, *card_u, search)?;
                let previous = best.as_ref().map(|b| theorem1_payoff(game, b, rate, b_knows)).transpose()?;
                match previous {
                    Some(q) if q.payoff > p.payoff => q,
                    _ => {
                        best = Some(s);
                        p
                    }
                }
            }
            _ => return Err(CliError::Usage("sweep supports single-auxiliary schemes only".into())),
        };
        assert!(point.payoff >= last - 1e-9, "sweep payoff decreased at rate {rate}");
        last = last.max(point.payoff);
        let _ = writeln!(csv, "{},{},{}", rate, point.payoff, point.alpha);
    }
    Ok((csv, notes))
}

pub fn simulate(game: &Game, scheme: &AnyScheme, config: &MatchConfig) -> Result<(String, String), CliError> {
    let AnyScheme::Single(scheme) = scheme else {
        return Err(CliError::Usage("simulate needs a single-auxiliary scheme".into()));
    };
    let r = run_match(game, scheme, config)?;
    let summary = format!(
        "engine {:?}, mean payoff {} (se {}), encoder failure rate {}",
        r.engine,
        r.mean_payoff,
        r.standard_error(),
        r.encoder_failure_rate
    );
    Ok((r.to_csv(), summary))
}

/// Joint of `(S, A)` induced by a scheme under the game's prior.
pub fn induced_joint(game: &Game, scheme: &AnyScheme) -> Result<JointDistribution, CliError> {
    let p_a_given_s = match scheme {
        AnyScheme::Single(s) => {
            s.check(game)?;
            s.p_a_given_s()
        }
        AnyScheme::Layered(ls) => ls.flattened().p_a_given_s(),
    };
    Ok(JointDistribution::from_channel(game.prior(), &p_a_given_s)?)
}

pub fn common_info(joint: &JointDistribution, card_u: usize, search: &WynerSearch) -> Result<String, CliError> {
    let r = wyner_common_information(joint, card_u, search)?;
    let (ns, na) = (joint.shape()[0], joint.shape()[1]);
    let mut out = String::new();
    let _ = writeln!(out, "value\t{}", r.value);
    let _ = writeln!(out, "mutual_information\t{}", r.mutual_information);
    let _ = writeln!(out, "aux_cardinality\t{}", r.aux_cardinality);
    let _ = writeln!(out, "achieved_joint_error\t{}", r.achieved_joint_error);
    let join = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("\t");
    let _ = writeln!(out, "p_u\t{}", join(&r.p_u));
    let _ = writeln!(out, "p_s_given_u\t{}", (0..ns).map(|s| format!("s{s}")).collect::<Vec<_>>().join("\t"));
    for u in 0..r.aux_cardinality {
        let _ = writeln!(out, "u{u}\t{}", join(r.p_s_given_u.row(u)));
    }
    let _ = writeln!(out, "p_a_given_u\t{}", (0..na).map(|a| format!("a{a}")).collect::<Vec<_>>().join("\t"));
    for u in 0..r.aux_cardinality {
        let _ = writeln!(out, "u{u}\t{}", join(r.p_a_given_u.row(u)));
    }
    Ok(out)
}
