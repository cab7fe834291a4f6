//! JSON game, scheme and joint files.

use std::path::Path;

use serde::{Deserialize, Serialize};
use stategame::game::DEFAULT_NEG_INF;
use stategame::{ConditionalDistribution, Game, LayeredScheme, Scheme};

use crate::error::CliError;

/// Row and prior sums must be within this of 1.
pub const INPUT_TOL: f64 = 1e-9;

/// A payoff entry: a number or the string `"-inf"`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Number(f64),
    Label(NegInf),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum NegInf {
    #[serde(rename = "-inf")]
    NegInf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameFile {
    pub states: Vec<String>,
    pub prior: Vec<f64>,
    pub actions_a: Vec<String>,
    pub actions_b: Vec<String>,
    /// `payoffs[s][a][b]`
    pub payoffs: Vec<Vec<Vec<Entry>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub neg_inf_value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeFile {
    pub u_symbols: Vec<String>,
    /// `|S|` rows over `U` (over `U1` for a layered scheme).
    pub p_u_given_s: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_a_given_u: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u2_symbols: Option<Vec<String>>,
    /// Rows indexed `u1 * |S| + s`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_u2_given_u1_s: Option<Vec<Vec<f64>>>,
    /// Rows indexed `u1 * |U2| + u2`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_a_given_u1_u2: Option<Vec<Vec<f64>>>,
}

/// Joint of `(S, A)` for the common-information command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JointFile {
    pub p_sa: Vec<Vec<f64>>,
}

/// What a scheme file describes.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyScheme {
    Single(Scheme),
    Layered(LayeredScheme),
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn parse_err(field: impl Into<String>, msg: impl std::fmt::Display) -> CliError {
    CliError::Parse(format!("{}: {msg}", field.into()))
}

fn check_probability(field: &str, p: &[f64]) -> Result<(), CliError> {
    if p.is_empty() {
        return Err(parse_err(field, "empty probability vector"));
    }
    if let Some(i) = p.iter().position(|x| !x.is_finite() || *x < 0.0) {
        return Err(parse_err(format!("{field}[{i}]"), format!("{} is not a nonnegative number", p[i])));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > INPUT_TOL {
        return Err(parse_err(field, format!("sums to {sum}, expected 1 within {INPUT_TOL:e}")));
    }
    Ok(())
}

fn channel(field: &str, rows: &[Vec<f64>], from: usize, to: usize) -> Result<ConditionalDistribution, CliError> {
    if rows.len() != from {
        return Err(parse_err(field, format!("expected {from} rows, found {}", rows.len())));
    }
    for (i, r) in rows.iter().enumerate() {
        let f = format!("{field}[{i}]");
        if r.len() != to {
            return Err(parse_err(&f, format!("expected {to} entries, found {}", r.len())));
        }
        check_probability(&f, r)?;
    }
    ConditionalDistribution::with_tol(rows.to_vec(), INPUT_TOL).map_err(|e| parse_err(field, e))
}

impl GameFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        read_json(path)
    }

    pub fn to_game(&self) -> Result<Game, CliError> {
        let (ns, na, nb) = (self.states.len(), self.actions_a.len(), self.actions_b.len());
        if self.prior.len() != ns {
            return Err(parse_err("prior", format!("expected {ns} entries, found {}", self.prior.len())));
        }
        check_probability("prior", &self.prior)?;
        if self.payoffs.len() != ns {
            return Err(parse_err("payoffs", format!("expected {ns} state blocks, found {}", self.payoffs.len())));
        }
        let mut blocks = Vec::with_capacity(ns);
        for (s, block) in self.payoffs.iter().enumerate() {
            if block.len() != na {
                return Err(parse_err(format!("payoffs[{s}]"), format!("expected {na} rows, found {}", block.len())));
            }
            let mut rows = Vec::with_capacity(na);
            for (a, row) in block.iter().enumerate() {
                if row.len() != nb {
                    return Err(parse_err(
                        format!("payoffs[{s}][{a}]"),
                        format!("expected {nb} entries, found {}", row.len()),
                    ));
                }
                rows.push(
                    row.iter()
                        .map(|e| match e {
                            Entry::Number(v) => *v,
                            Entry::Label(NegInf::NegInf) => f64::NEG_INFINITY,
                        })
                        .collect::<Vec<_>>(),
                );
            }
            blocks.push(rows);
        }
        let sum: f64 = self.prior.iter().sum();
        let prior = self.prior.iter().map(|p| p / sum).collect();
        Game::from_state_matrices(
            self.states.clone(),
            prior,
            self.actions_a.clone(),
            self.actions_b.clone(),
            &blocks,
            self.neg_inf_value.unwrap_or(DEFAULT_NEG_INF),
        )
        .map_err(|e| CliError::Parse(e.to_string()))
    }

    /// Entries equal to the game's `neg_inf_value` are written as `"-inf"`.
    pub fn from_game(game: &Game) -> Self {
        let ni = game.neg_inf_value();
        let payoffs = game
            .state_matrices()
            .into_iter()
            .map(|m| {
                m.into_iter()
                    .map(|r| r.into_iter().map(|v| if v == ni { Entry::Label(NegInf::NegInf) } else { Entry::Number(v) }).collect())
                    .collect()
            })
            .collect();
        Self {
            states: game.states().to_vec(),
            prior: game.prior().to_vec(),
            actions_a: game.actions_a().to_vec(),
            actions_b: game.actions_b().to_vec(),
            payoffs,
            neg_inf_value: Some(ni),
        }
    }
}

impl SchemeFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        read_json(path)
    }

    pub fn to_scheme(&self, game: &Game) -> Result<AnyScheme, CliError> {
        let (ns, na, nu) = (game.num_states(), game.num_actions_a(), self.u_symbols.len());
        let p_u = channel("p_u_given_s", &self.p_u_given_s, ns, nu)?;
        let layered = (&self.u2_symbols, &self.p_u2_given_u1_s, &self.p_a_given_u1_u2);
        match (&self.p_a_given_u, layered) {
            (Some(pa), (None, None, None)) => {
                let pa = channel("p_a_given_u", pa, nu, na)?;
                Ok(AnyScheme::Single(Scheme::new(p_u, pa).map_err(|e| CliError::Parse(e.to_string()))?))
            }
            (None, (Some(u2), Some(p2), Some(pa))) => {
                let n2 = u2.len();
                let p2 = channel("p_u2_given_u1_s", p2, nu * ns, n2)?;
                let pa = channel("p_a_given_u1_u2", pa, nu * n2, na)?;
                let ls = LayeredScheme::new(p_u, p2, pa).map_err(|e| CliError::Parse(e.to_string()))?;
                Ok(AnyScheme::Layered(ls))
            }
            _ => Err(CliError::Parse(
                "scheme needs either p_a_given_u, or all of u2_symbols, p_u2_given_u1_s and p_a_given_u1_u2".into(),
            )),
        }
    }

    pub fn from_scheme(scheme: &Scheme) -> Self {
        Self {
            u_symbols: (0..scheme.card_u()).map(|u| format!("u{u}")).collect(),
            p_u_given_s: scheme.p_u_given_s.rows(),
            p_a_given_u: Some(scheme.p_a_given_u.rows()),
            u2_symbols: None,
            p_u2_given_u1_s: None,
            p_a_given_u1_u2: None,
        }
    }

    pub fn from_layered(ls: &LayeredScheme) -> Self {
        Self {
            u_symbols: (0..ls.card_u1()).map(|u| format!("u{u}")).collect(),
            p_u_given_s: ls.p_u1_given_s.rows(),
            p_a_given_u: None,
            u2_symbols: Some((0..ls.card_u2()).map(|u| format!("v{u}")).collect()),
            p_u2_given_u1_s: Some(ls.p_u2_given_u1_s.rows()),
            p_a_given_u1_u2: Some(ls.p_a_given_u1_u2.rows()),
        }
    }
}

impl JointFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        read_json(path)
    }

    pub fn to_joint(&self) -> Result<stategame::JointDistribution, CliError> {
        let flat: Vec<f64> = self.p_sa.concat();
        check_probability("p_sa", &flat)?;
        stategame::JointDistribution::from_matrix(&self.p_sa).map_err(|e| parse_err("p_sa", e))
    }
}
