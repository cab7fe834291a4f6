use stategame::game::catalog::{erasure, hamming};
use stategame::game::{best_response_with_signal, game_value, SignalFunction};
use stategame::info::{binary_entropy, inverse_binary_entropy};
use stategame::rate_value::catalog::{constant, erasure_optimal, erasure_reveal_state};
use stategame::rate_value::*;
use stategame::{ConditionalDistribution, Error, Game};

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn informed_endpoints_of_the_erasure_curve() {
    let g = erasure();
    let sc = erasure_optimal();
    let h = binary_entropy(0.25).unwrap();
    let top = theorem1_payoff(&g, &sc, h, true).unwrap();
    assert_eq!(top.alpha, 1.0);
    assert_eq!(top.payoff, 0.75);
    let bottom = theorem1_payoff(&g, &sc, 0.5, true).unwrap();
    assert_eq!(bottom.alpha, 0.0);
    assert_eq!(bottom.payoff, 0.25);
    let mid = theorem1_payoff(&g, &sc, 0.655639, true).unwrap();
    assert!(close(mid.payoff, 0.5, 1e-6));
    assert!(close(mid.alpha, 0.5, 1e-6));
}

#[test]
fn endpoint_alphas_give_phase_functionals() {
    let g = erasure();
    let sc = erasure_optimal();
    let st = scheme_statistics(&g, &sc).unwrap();
    let p = theorem1_payoff(&g, &sc, 10.0, false).unwrap();
    assert_eq!(p.payoff, st.pi_low);
    let p = theorem1_payoff(&g, &sc, 0.5, true).unwrap();
    assert_eq!(p.payoff, st.pi_low_su);
}

#[test]
fn no_rate_with_constant_aux_is_the_blind_value() {
    let g = erasure();
    let sc = constant(2, &[0.0, 1.0, 0.0]).unwrap();
    let p = theorem1_payoff(&g, &sc, 0.0, true).unwrap();
    assert!(close(p.payoff, 0.0, 1e-12));
    let blind = game_value(&g, &SignalFunction::constant(2), &SignalFunction::constant(2)).unwrap();
    let mix = blind.strategy_a.row(0).to_vec();
    let p = theorem1_payoff(&g, &constant(2, &mix).unwrap(), 0.0, false).unwrap();
    assert!(close(p.payoff, 0.5, 1e-9));
}

#[test]
fn optimizer_at_zero_rate_informed() {
    let (_, p) = optimize_bound(&erasure(), 0.0, true, 8, &BoundSearch::default()).unwrap();
    assert!(close(p.payoff, 0.0, 1e-9), "{}", p.payoff);
}

#[test]
fn optimizer_with_full_description_matches_game_value() {
    for g in [erasure(), hamming(), Game::matrix(&[vec![3.0, 0.0], vec![0.0, 1.0]]).unwrap()] {
        let ns = g.num_states();
        let na = g.num_actions_a();
        let rate = (ns as f64).log2() + (na as f64).log2();
        let (_, p) = optimize_bound(&g, rate, false, ns * na, &BoundSearch::default()).unwrap();
        let v = game_value(&g, &SignalFunction::identity(ns), &SignalFunction::constant(ns)).unwrap();
        assert!(close(p.payoff, v.value, 1e-6), "{} vs {}", p.payoff, v.value);
    }
}

#[test]
fn optimizer_recovers_hamming_rate_distortion() {
    let g = hamming();
    for r in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let (_, p) = optimize_bound(&g, r, false, 2, &BoundSearch::default()).unwrap();
        let want = -inverse_binary_entropy(1.0 - r).unwrap();
        assert!(close(p.payoff, want, 0.01), "R={r}: {} vs {want}", p.payoff);
        // The closed form is a converse here: nothing beats it.
        assert!(p.payoff <= want + 1e-6);
    }
}

#[test]
fn optimizer_beats_the_hand_scheme_in_the_informed_erasure_game() {
    let g = erasure();
    let h = binary_entropy(0.25).unwrap();
    for r in [0.5, 0.6, 0.7, h] {
        let hand = theorem1_payoff(&g, &erasure_optimal(), r, true).unwrap();
        let (_, p) = optimize_bound(&g, r, true, 3, &BoundSearch::default()).unwrap();
        assert!(p.payoff >= hand.payoff - 1e-3, "R={r}: {} < {}", p.payoff, hand.payoff);
    }
}

#[test]
fn first_layer_constant_reduces_to_theorem_one() {
    let g = erasure();
    for (sc, r, informed) in [
        (erasure_optimal(), 0.6, true),
        (erasure_optimal(), 0.9, false),
        (erasure_reveal_state(), 1.0, false),
        (erasure_optimal(), 0.5, true),
    ] {
        let single = theorem1_payoff(&g, &sc, r, informed).unwrap();
        let layered = layered_payoff(&g, &LayeredScheme::from_second_layer(&sc), r, informed).unwrap();
        let LayeredPayoff::Achieved { payoff, alpha1, alpha2 } = layered else { panic!("{layered:?}") };
        assert_eq!(alpha1, 0.0);
        assert!(close(payoff, single.payoff, 1e-12));
        assert!(close(alpha2.min(1.0), single.alpha, 1e-12));
    }
}

#[test]
fn second_layer_constant_matches_theorem_one_at_the_covering_rate() {
    // With U2 constant the first phase ends at I(U1;S)/I(U1;S,A), which
    // agrees with the single-auxiliary threshold only when R = I(U1;S).
    let g = erasure();
    let sc = erasure_optimal();
    let st = scheme_statistics(&g, &sc).unwrap();
    let single = theorem1_payoff(&g, &sc, st.i_us, false).unwrap();
    let layered = layered_payoff(&g, &LayeredScheme::from_first_layer(&sc), st.i_us, false).unwrap();
    assert!(close(layered.payoff().unwrap(), single.payoff, 1e-12));
    for r in [0.6, 0.8, 1.2] {
        let single = theorem1_payoff(&g, &sc, r, false).unwrap();
        let layered = layered_payoff(&g, &LayeredScheme::from_first_layer(&sc), r, false).unwrap();
        assert!(layered.payoff().unwrap() <= single.payoff + 1e-12);
    }
}

/// Two nondegenerate layers: U1 reveals the state w.p. 1/2, U2 refines the
/// erasure choice.
fn two_layer_erasure() -> LayeredScheme {
    let u1 = ConditionalDistribution::new(vec![vec![0.5, 0.0, 0.5], vec![0.0, 0.5, 0.5]]).unwrap();
    // rows u1 * 2 + s
    let u2 = ConditionalDistribution::new(vec![
        vec![0.6, 0.4],
        vec![0.5, 0.5],
        vec![0.5, 0.5],
        vec![0.3, 0.7],
        vec![0.8, 0.2],
        vec![0.2, 0.8],
    ])
    .unwrap();
    // rows u1 * 2 + u2
    let a = ConditionalDistribution::new(vec![
        vec![0.7, 0.3, 0.0],
        vec![0.2, 0.8, 0.0],
        vec![0.0, 0.6, 0.4],
        vec![0.0, 0.3, 0.7],
        vec![0.0, 1.0, 0.0],
        vec![0.0, 1.0, 0.0],
    ])
    .unwrap();
    LayeredScheme::new(u1, u2, a).unwrap()
}

/// Independent recomputation of the best response of a B who sees `cell(s, u1, u2)`.
fn brute_phase(g: &Game, ls: &LayeredScheme, cell: impl Fn(usize, usize, usize) -> usize) -> f64 {
    let mut cost = std::collections::BTreeMap::<usize, Vec<f64>>::new();
    for s in 0..2 {
        for u1 in 0..3 {
            for u2 in 0..2 {
                let w = g.prior()[s] * ls.p_u1_given_s.prob(s, u1) * ls.p_u2_given_u1_s.prob(u1 * 2 + s, u2);
                let entry = cost.entry(cell(s, u1, u2)).or_insert_with(|| vec![0.0; 2]);
                for (b, c) in entry.iter_mut().enumerate() {
                    for a in 0..3 {
                        *c += w * ls.p_a_given_u1_u2.prob(u1 * 2 + u2, a) * g.payoff(a, b, s);
                    }
                }
            }
        }
    }
    cost.values().map(|c| c[0].min(c[1])).sum()
}

#[test]
fn layered_payoff_matches_brute_force_phases() {
    let g = erasure();
    let ls = two_layer_erasure();
    let st = layered_statistics(&g, &ls).unwrap();
    let ph1 = brute_phase(&g, &ls, |s, _, _| s);
    let ph2 = brute_phase(&g, &ls, |s, u1, _| u1 * 2 + s);
    let ph3 = brute_phase(&g, &ls, |s, u1, u2| (u1 * 2 + u2) * 2 + s);
    assert!(close(st.phases_informed[0], ph1, 1e-12));
    assert!(close(st.phases_informed[1], ph2, 1e-12));
    assert!(close(st.phases_informed[2], ph3, 1e-12));

    let r = st.i_u12s + 0.4 * st.i_u2a_given_u1s;
    let LayeredPayoff::Achieved { payoff, alpha1, alpha2 } = layered_payoff(&g, &ls, r, true).unwrap() else {
        panic!("expected a payoff")
    };
    assert_eq!(alpha1, 0.0);
    assert!(close(alpha2, 0.4, 1e-9));
    assert!(close(payoff, 0.4 * ph2 + 0.6 * ph3, 1e-9));
}

#[test]
fn layered_reports_no_benefit_and_infeasibility() {
    let g = erasure();
    let ls = two_layer_erasure();
    let st = layered_statistics(&g, &ls).unwrap();
    assert!(matches!(layered_payoff(&g, &ls, st.i_u12s - 0.01, true), Err(Error::InfeasibleRate { .. })));
    // Ignorant: at the covering rate alpha2 is small while alpha1 is fixed.
    let out = layered_payoff(&g, &ls, st.i_u12s, false).unwrap();
    let a1 = st.i_u1s / st.i_u1sa;
    let a2 = (st.i_u12s - st.i_u1s) / st.i_u2sa_given_u1;
    if a1 > a2 {
        assert!(matches!(out, LayeredPayoff::NoBenefit { .. }));
    } else {
        assert!(out.payoff().is_some());
    }
}

#[test]
fn layered_alpha2_above_one_is_reported() {
    let g = erasure();
    let ls = two_layer_erasure();
    let out = layered_payoff(&g, &ls, 5.0, true).unwrap();
    let LayeredPayoff::Achieved { payoff, alpha2, .. } = out else { panic!() };
    assert!(alpha2 > 1.0);
    let st = layered_statistics(&g, &ls).unwrap();
    assert!(close(payoff, st.phases_informed[1], 1e-12));
}

#[test]
fn layered_search_dominates_single_auxiliary_search() {
    let g = erasure();
    let search = BoundSearch { restarts: 2, iterations: 300, seed: 3 };
    for (r, informed) in [(0.6, true), (0.7, false)] {
        let (_, single) = optimize_bound(&g, r, informed, 3, &search).unwrap();
        let (_, layered) = optimize_layered(&g, r, informed, 2, 3, &search).unwrap();
        assert!(layered.payoff().unwrap() >= single.payoff - 1e-9);
    }
}

#[test]
fn stats_invariants_hold_for_hand_schemes() {
    let g = erasure();
    for sc in [erasure_optimal(), erasure_reveal_state(), constant(2, &[0.3, 0.4, 0.3]).unwrap()] {
        let st = scheme_statistics(&g, &sc).unwrap();
        assert!(close(st.i_usa, st.i_us + st.i_ua_given_s, 1e-9));
        assert!(st.pi_low_su <= st.pi_low_s.min(st.pi_low_u) + 1e-9);
        assert!(st.pi_low_u <= st.pi_low + 1e-9);
        assert!(st.pi_low_s <= st.pi_low + 1e-9);
    }
}

#[test]
fn u_signal_functional_matches_direct_flag() {
    let g = erasure();
    let sc = erasure_optimal();
    let p_u = sc.p_u(g.prior());
    let back = sc.p_u_given_s.invert(g.prior());
    let direct = best_response_with_signal(&g, &p_u, &back, &sc.p_a_given_u, true, &SignalFunction::identity(3)).unwrap();
    let st = scheme_statistics(&g, &sc).unwrap();
    assert_eq!(direct, st.pi_low_su);
}
