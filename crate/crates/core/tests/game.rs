use proptest::prelude::*;
use stategame::game::catalog::{erasure, simple_mixed};
use stategame::game::*;
use stategame::{ConditionalDistribution, Game};

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

fn game_from(prior: &[f64], blocks: &[Vec<Vec<f64>>]) -> Game {
    let (na, nb) = (blocks[0].len(), blocks[0][0].len());
    Game::from_state_matrices(labels(prior.len()), prior.to_vec(), labels(na), labels(nb), blocks, -1e6).unwrap()
}

fn normalized(w: Vec<f64>) -> Vec<f64> {
    let z: f64 = w.iter().sum();
    w.into_iter().map(|x| x / z).collect()
}

fn random_game(ns: usize, na: usize, nb: usize) -> impl Strategy<Value = Game> {
    (
        prop::collection::vec(0.05f64..1.0, ns),
        prop::collection::vec(prop::collection::vec(prop::collection::vec(-5.0f64..5.0, nb), na), ns),
    )
        .prop_map(|(w, blocks)| game_from(&normalized(w), &blocks))
}

fn random_stochastic(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(0.0f64..1.0, cols), rows).prop_map(|m| {
        m.into_iter()
            .map(|r| {
                let z: f64 = r.iter().sum();
                if z == 0.0 {
                    vec![1.0 / r.len() as f64; r.len()]
                } else {
                    r.into_iter().map(|x| x / z).collect()
                }
            })
            .collect()
    })
}

/// Row-player guarantee of `x` and column-player guarantee of `y`.
fn guarantees(m: &[Vec<f64>], x: &[f64], y: &[f64]) -> (f64, f64) {
    let low = (0..m[0].len()).map(|j| (0..m.len()).map(|i| x[i] * m[i][j]).sum::<f64>()).fold(f64::INFINITY, f64::min);
    let high = (0..m.len()).map(|i| (0..m[0].len()).map(|j| y[j] * m[i][j]).sum::<f64>()).fold(f64::NEG_INFINITY, f64::max);
    (low, high)
}

/// Best value A can guarantee over a grid of step `1/steps` on its strategy
/// space, against every pure strategy map of B.
fn grid_value(game: &Game, f_a: &SignalFunction, f_b: &SignalFunction, steps: usize) -> f64 {
    let (na, nb) = (game.num_actions_a(), game.num_actions_b());
    let simplex: Vec<Vec<f64>> = match na {
        1 => vec![vec![1.0]],
        2 => (0..=steps).map(|i| vec![i as f64 / steps as f64, 1.0 - i as f64 / steps as f64]).collect(),
        3 => (0..=steps)
            .flat_map(|i| (0..=steps - i).map(move |j| (i, j)))
            .map(|(i, j)| {
                let (p, q) = (i as f64 / steps as f64, j as f64 / steps as f64);
                vec![p, q, (1.0 - p - q).max(0.0)]
            })
            .collect(),
        _ => panic!("grid oracle handles at most three actions"),
    };
    let ka = f_a.signal_count();
    let kb = f_b.signal_count();
    let b_maps: Vec<Vec<usize>> = (0..nb.pow(kb as u32))
        .map(|mut code| {
            (0..kb)
                .map(|_| {
                    let b = code % nb;
                    code /= nb;
                    b
                })
                .collect()
        })
        .collect();
    let mut best = f64::NEG_INFINITY;
    let mut idx = vec![0usize; ka];
    loop {
        let worst = b_maps
            .iter()
            .map(|bm| {
                (0..game.num_states())
                    .map(|s| {
                        let x = &simplex[idx[f_a.signal(s)]];
                        let b = bm[f_b.signal(s)];
                        game.prior()[s] * (0..na).map(|a| x[a] * game.payoff(a, b, s)).sum::<f64>()
                    })
                    .sum::<f64>()
            })
            .fold(f64::INFINITY, f64::min);
        best = best.max(worst);
        let mut pos = 0;
        loop {
            if pos == ka {
                return best;
            }
            idx[pos] += 1;
            if idx[pos] < simplex.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

#[test]
fn erasure_table_values() {
    let g = erasure();
    let (c, id) = (SignalFunction::constant(2), SignalFunction::identity(2));
    for (fa, fb, want) in [(&c, &c, 0.5), (&id, &id, 0.75), (&id, &c, 1.5), (&c, &id, 0.0)] {
        let v = game_value(&g, fa, fb).unwrap();
        assert!((v.value - want).abs() <= 1e-9, "{} vs {want}", v.value);
        assert!(v.lp_gap <= 2e-9);
    }
}

#[test]
fn fig1_mix_is_unique_and_exact() {
    let v = solve_matrix_game(&[vec![3.0, 0.0], vec![0.0, 1.0]]).unwrap();
    assert!((v.value - 0.75).abs() < 1e-12);
    assert!((v.strategy_a.prob(0, 0) - 0.25).abs() < 1e-12);
    assert!((v.strategy_a.prob(0, 1) - 0.75).abs() < 1e-12);
    let g = simple_mixed();
    let one = SignalFunction::constant(1);
    let p = expected_payoff(
        &g,
        &ConditionalDistribution::new(vec![vec![0.25, 0.75]]).unwrap(),
        &ConditionalDistribution::new(vec![vec![1.0, 0.0]]).unwrap(),
        &one,
        &one,
    )
    .unwrap();
    assert!((p - 0.75).abs() < 1e-12);
}

#[test]
fn grid_oracle_recovers_grid_aligned_values_exactly() {
    let g = erasure();
    let (c, id) = (SignalFunction::constant(2), SignalFunction::identity(2));
    for (fa, fb) in [(&c, &c), (&id, &id), (&id, &c), (&c, &id)] {
        let grid = grid_value(&g, fa, fb, 100);
        let exact = game_value(&g, fa, fb).unwrap().value;
        assert!((grid - exact).abs() <= 1e-6, "{grid} vs {exact}");
    }
    let fig1 = simple_mixed();
    let one = SignalFunction::constant(1);
    assert!((grid_value(&fig1, &one, &one, 100) - 0.75).abs() <= 1e-6);
}

#[test]
fn expanded_strategy_cap_reports_capacity() {
    let g = erasure();
    let id = SignalFunction::identity(2);
    assert!(matches!(game_value_capped(&g, &id, &id, 4), Err(stategame::Error::Capacity { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn matrix_games_satisfy_duality(
        m in (1usize..6, 1usize..6).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-10.0f64..10.0, c), r))
    ) {
        let v = solve_matrix_game(&m).unwrap();
        let (low, high) = guarantees(&m, v.strategy_a.row(0), v.strategy_b.row(0));
        prop_assert!(high - low <= 2e-9, "gap {}", high - low);
        prop_assert!(low >= v.value - 1e-9 && high <= v.value + 1e-9);
        prop_assert!(v.lp_gap <= 2e-9);
        let lo = m.iter().flatten().copied().fold(f64::INFINITY, f64::min);
        let hi = m.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(v.value >= lo - 1e-12 && v.value <= hi + 1e-12);
    }

    #[test]
    fn blind_value_is_the_averaged_matrix_game(g in (1usize..4, 1usize..4, 1usize..4).prop_flat_map(|(s, a, b)| random_game(s, a, b))) {
        let c = SignalFunction::constant(g.num_states());
        let v = game_value(&g, &c, &c).unwrap();
        let direct = solve_matrix_game(&g.prior_averaged_matrix()).unwrap();
        prop_assert_eq!(v.value, direct.value);
    }

    #[test]
    fn informed_value_splits_over_states(g in (1usize..4, 1usize..4, 1usize..4).prop_flat_map(|(s, a, b)| random_game(s, a, b))) {
        let id = SignalFunction::identity(g.num_states());
        let v = game_value(&g, &id, &id).unwrap();
        let split: f64 = (0..g.num_states())
            .map(|s| g.prior()[s] * solve_matrix_game(&g.state_matrix(s)).unwrap().value)
            .sum();
        prop_assert!((v.value - split).abs() <= 1e-9);
    }

    #[test]
    fn game_value_beats_the_grid_oracle(
        g in (1usize..4, 1usize..4, 1usize..4).prop_flat_map(|(s, a, b)| random_game(s, a, b)),
        a_sees in any::<bool>(),
        b_sees in any::<bool>(),
    ) {
        let ns = g.num_states();
        let f = |sees: bool| if sees { SignalFunction::identity(ns) } else { SignalFunction::constant(ns) };
        let (fa, fb) = (f(a_sees && g.num_actions_a() <= 2 && ns <= 2), f(b_sees));
        let exact = game_value(&g, &fa, &fb).unwrap().value;
        let grid = grid_value(&g, &fa, &fb, 100);
        // The grid value is achievable, so it is a lower bound; the grid is
        // 0.01-dense, so A loses at most 0.01 * spread per mixed signal.
        let (lo, hi) = g.payoff_range();
        prop_assert!(grid <= exact + 1e-9, "{grid} > {exact}");
        prop_assert!(exact - grid <= 0.01 * (g.num_actions_a() as f64) * (hi - lo) + 1e-9, "{grid} vs {exact}");
    }

    #[test]
    fn more_information_never_helps_a_against_b(
        (g, p_u_given_s, p_a_given_u) in (2usize..4, 2usize..4, 2usize..4, 2usize..4).prop_flat_map(|(s, u, a, b)| {
            (random_game(s, a, b), random_stochastic(s, u), random_stochastic(u, a))
        })
    ) {
        let prior = g.prior().to_vec();
        let channel = ConditionalDistribution::new(p_u_given_s).unwrap();
        let p_u = channel.push_forward(&prior);
        let p_s_given_u = channel.invert(&prior);
        let p_a_given_u = ConditionalDistribution::new(p_a_given_u).unwrap();
        let f = |s, u| best_response_payoff(&g, &p_u, &p_s_given_u, &p_a_given_u, s, u).unwrap();
        let (none, s_only, u_only, both) = (f(false, false), f(true, false), f(false, true), f(true, true));
        prop_assert!(both <= s_only + 1e-9 && both <= u_only + 1e-9);
        prop_assert!(s_only <= none + 1e-9 && u_only <= none + 1e-9);
    }

    #[test]
    fn relabeling_does_not_change_values(
        g in (1usize..4, 1usize..4, 1usize..4).prop_flat_map(|(s, a, b)| random_game(s, a, b)),
        rot in 0usize..3,
        a_sees in any::<bool>(),
    ) {
        let (ns, na, nb) = (g.num_states(), g.num_actions_a(), g.num_actions_b());
        let perm = |n: usize| (0..n).map(|i| (i + rot) % n).collect::<Vec<_>>();
        let h = g.permuted(&perm(ns), &perm(na), &perm(nb).into_iter().rev().collect::<Vec<_>>());
        let fa = if a_sees { SignalFunction::identity(ns) } else { SignalFunction::constant(ns) };
        let fb = SignalFunction::constant(ns);
        let v1 = game_value(&g, &fa, &fb).unwrap().value;
        let v2 = game_value(&h, &fa, &fb).unwrap().value;
        prop_assert!((v1 - v2).abs() <= 1e-9);
    }
}
