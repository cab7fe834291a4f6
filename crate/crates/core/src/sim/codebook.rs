use rand::distr::{weighted::WeightedIndex, Distribution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::typical::{is_typical, state_boxes};
use crate::error::{Error, Result};
use crate::rate_value::Scheme;

/// Default cap on `codewords * n` stored in an explicit codebook.
pub const DEFAULT_MAX_SYMBOLS: usize = 1 << 22;

/// `ceil(n * rate)`, ignoring round-off just above an integer.
pub fn codebook_bits(n: usize, rate: f64) -> usize {
    let x = n as f64 * rate;
    (x - 1e-9).ceil().max(0.0) as usize
}

/// `2^ceil(n R)` sequences over `U`, i.i.d. from the scheme's marginal.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    pub n: usize,
    pub rate: f64,
    pub seed: u64,
    card_u: usize,
    symbols: Vec<u16>,
}

impl Codebook {
    pub fn len(&self) -> usize {
        self.symbols.len() / self.n.max(1)
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn card_u(&self) -> usize {
        self.card_u
    }

    pub fn codeword(&self, i: usize) -> &[u16] {
        &self.symbols[i * self.n..(i + 1) * self.n]
    }

    pub fn codewords(&self) -> impl Iterator<Item = &[u16]> {
        self.symbols.chunks(self.n)
    }

    /// Codebook from explicit sequences (mainly for tests).
    pub fn from_sequences(sequences: &[Vec<u16>], card_u: usize, rate: f64) -> Result<Self> {
        let n = sequences.first().map_or(0, Vec::len);
        if n == 0 || sequences.iter().any(|c| c.len() != n) {
            return Err(Error::Dimension("codewords must be nonempty and of equal length".into()));
        }
        if sequences.iter().flatten().any(|&u| u as usize >= card_u) {
            return Err(Error::Dimension("codeword symbol out of range".into()));
        }
        Ok(Self { n, rate, seed: 0, card_u, symbols: sequences.concat() })
    }
}

pub fn build_codebook(scheme: &Scheme, prior: &[f64], n: usize, rate: f64, seed: u64) -> Result<Codebook> {
    build_codebook_capped(scheme, prior, n, rate, seed, DEFAULT_MAX_SYMBOLS)
}

pub fn build_codebook_capped(
    scheme: &Scheme,
    prior: &[f64],
    n: usize,
    rate: f64,
    seed: u64,
    max_symbols: usize,
) -> Result<Codebook> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cb = sample_codebook(scheme, prior, n, rate, max_symbols, &mut rng)?;
    cb.seed = seed;
    Ok(cb)
}

pub(crate) fn sample_codebook<R: Rng>(
    scheme: &Scheme,
    prior: &[f64],
    n: usize,
    rate: f64,
    max_symbols: usize,
    rng: &mut R,
) -> Result<Codebook> {
    if n == 0 {
        return Err(Error::Domain("block length must be positive".into()));
    }
    if !(rate.is_finite() && rate >= 0.0) {
        return Err(Error::Domain(format!("rate must be finite and nonnegative, got {rate}")));
    }
    let card_u = scheme.card_u();
    if card_u > u16::MAX as usize {
        return Err(Error::Dimension("auxiliary alphabet too large for codebook storage".into()));
    }
    let bits = codebook_bits(n, rate);
    let needed = 2f64.powi(bits as i32) * n as f64;
    if bits >= 63 || needed > max_symbols as f64 {
        return Err(Error::Capacity { what: "codebook symbols (2^ceil(nR) * n)".into(), needed, cap: max_symbols as f64 });
    }
    let count = 1usize << bits;
    let p_u = scheme.p_u(prior);
    let dist = WeightedIndex::new(&p_u).map_err(|e| Error::Distribution(format!("auxiliary marginal: {e}")))?;
    let symbols = (0..count * n).map(|_| dist.sample(rng) as u16).collect();
    Ok(Codebook { n, rate, seed: 0, card_u, symbols })
}

/// How the encoder picks among jointly typical codewords.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EncoderRule {
    /// Probability proportional to `prod_t p(s_t | u_t)`.
    #[default]
    Likelihood,
    /// Uniform over typical codewords.
    Uniform,
    /// Lowest typical index; a deterministic encoder.
    FirstTypical,
}

impl std::str::FromStr for EncoderRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "likelihood" => Ok(Self::Likelihood),
            "uniform" => Ok(Self::Uniform),
            "first" | "first_typical" => Ok(Self::FirstTypical),
            _ => Err(Error::Domain(format!("unknown encoder rule '{s}'"))),
        }
    }
}

/// `log2 p(u|s) - log2 p_U(u)` per `(s, u)`, `-inf` where `p(u|s) = 0`.
pub(crate) fn likelihood_table(scheme: &Scheme, prior: &[f64]) -> Vec<Vec<f64>> {
    let p_u = scheme.p_u(prior);
    (0..scheme.p_u_given_s.from_size())
        .map(|s| {
            (0..scheme.card_u())
                .map(|u| {
                    let p = scheme.p_u_given_s.prob(s, u);
                    if p == 0.0 {
                        f64::NEG_INFINITY
                    } else {
                        p.log2() - p_u[u].log2()
                    }
                })
                .collect()
        })
        .collect()
}

/// Log2 selection weight of every codeword under `rule` (unnormalized;
/// `-inf` for codewords the encoder never picks).
pub(crate) fn encoder_log_weights(
    codebook: &Codebook,
    states: &[usize],
    scheme: &Scheme,
    prior: &[f64],
    epsilon: f64,
    rule: EncoderRule,
) -> Vec<f64> {
    let boxes = state_boxes(states, &scheme.p_u_given_s, epsilon);
    let table = likelihood_table(scheme, prior);
    let mut first = true;
    codebook
        .codewords()
        .map(|cw| {
            if !is_typical(states, cw, &boxes, codebook.card_u) {
                return f64::NEG_INFINITY;
            }
            match rule {
                EncoderRule::Likelihood => states.iter().zip(cw).map(|(&s, &u)| table[s][u as usize]).sum(),
                EncoderRule::Uniform => 0.0,
                EncoderRule::FirstTypical => {
                    if std::mem::take(&mut first) {
                        0.0
                    } else {
                        f64::NEG_INFINITY
                    }
                }
            }
        })
        .collect()
}

/// Normalizes log2 weights into probabilities. All `-inf` gives `None`.
pub(crate) fn normalize_log2(lw: &[f64]) -> Option<Vec<f64>> {
    let m = lw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return None;
    }
    let w: Vec<f64> = lw.iter().map(|&x| (x - m).exp2()).collect();
    let z: f64 = w.iter().sum();
    Some(w.into_iter().map(|x| x / z).collect())
}

pub(crate) fn encode_with<R: Rng>(
    codebook: &Codebook,
    states: &[usize],
    scheme: &Scheme,
    prior: &[f64],
    epsilon: f64,
    rule: EncoderRule,
    rng: &mut R,
) -> Option<usize> {
    let probs = normalize_log2(&encoder_log_weights(codebook, states, scheme, prior, epsilon, rule))?;
    let dist = WeightedIndex::new(&probs).ok()?;
    Some(dist.sample(rng))
}

/// Picks a codeword jointly typical with `states`, or `None` on encoder failure.
pub fn encode(
    codebook: &Codebook,
    states: &[usize],
    scheme: &Scheme,
    prior: &[f64],
    epsilon: f64,
    rule: EncoderRule,
    seed: u64,
) -> Result<Option<usize>> {
    if states.len() != codebook.n {
        return Err(Error::Dimension(format!("state sequence has length {}, block length is {}", states.len(), codebook.n)));
    }
    if !(epsilon > 0.0) {
        return Err(Error::Domain("typicality tolerance must be positive".into()));
    }
    if scheme.card_u() != codebook.card_u {
        return Err(Error::Dimension("scheme and codebook disagree on the auxiliary alphabet".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(encode_with(codebook, states, scheme, prior, epsilon, rule, &mut rng))
}

pub(crate) fn decode_actions_with<R: Rng>(codeword: &[u16], scheme: &Scheme, rng: &mut R) -> Vec<usize> {
    let rows: Vec<WeightedIndex<f64>> = (0..scheme.card_u())
        .map(|u| WeightedIndex::new(scheme.p_a_given_u.row(u)).expect("stochastic row"))
        .collect();
    codeword.iter().map(|&u| rows[u as usize].sample(rng)).collect()
}

/// Memoryless channel `p(a|u)` applied to a codeword.
pub fn decode_actions(codeword: &[u16], scheme: &Scheme, seed: u64) -> Result<Vec<usize>> {
    if let Some(&u) = codeword.iter().find(|&&u| u as usize >= scheme.card_u()) {
        return Err(Error::Dimension(format!("codeword symbol {u} outside the auxiliary alphabet")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(decode_actions_with(codeword, scheme, &mut rng))
}
