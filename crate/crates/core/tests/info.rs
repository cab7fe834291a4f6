use proptest::prelude::*;
use stategame::info::*;
use stategame::rate_value::catalog::erasure_optimal;

const H_QUARTER: f64 = 0.811_278_124_459_132_8;

fn erasure_joint() -> JointDistribution {
    JointDistribution::from_matrix(&[vec![0.125, 0.375, 0.0], vec![0.0, 0.375, 0.125]]).unwrap()
}

/// Joint of `(U, S, A)` for the three-symbol erasure scheme under a uniform state.
fn erasure_scheme_joint() -> JointDistribution {
    let scheme = erasure_optimal();
    let mut mass = vec![0.0; 3 * 2 * 3];
    for u in 0..3 {
        for s in 0..2 {
            for a in 0..3 {
                mass[(u * 2 + s) * 3 + a] = 0.5 * scheme.p_u_given_s.prob(s, u) * scheme.p_a_given_u.prob(u, a);
            }
        }
    }
    JointDistribution::new(vec![3, 2, 3], mass).unwrap()
}

fn random_joint(shape: Vec<usize>) -> impl Strategy<Value = JointDistribution> {
    let len: usize = shape.iter().product();
    prop::collection::vec(prop_oneof![1 => Just(0.0), 4 => 0.0f64..1.0], len).prop_filter_map("all zero", move |w| {
        let z: f64 = w.iter().sum();
        if z <= 1e-3 {
            return None;
        }
        Some(JointDistribution::new(shape.clone(), w.iter().map(|x| x / z).collect()).unwrap())
    })
}

#[test]
fn entropy_anchor() {
    assert!((entropy(&[0.25, 0.75]).unwrap() - H_QUARTER).abs() < 1e-12);
    assert!((binary_entropy(0.25).unwrap() - H_QUARTER).abs() < 1e-12);
    assert!(binary_entropy(1.01).is_err());
}

#[test]
fn erasure_mutual_information() {
    assert!((mutual_information(&erasure_joint(), &[0], &[1]).unwrap() - 0.25).abs() < 1e-12);
}

#[test]
fn erasure_scheme_information_quantities() {
    let j = erasure_scheme_joint();
    let cmi = conditional_mutual_information(&j, &[0], &[2], &[1]).unwrap();
    assert!((cmi - 0.311_278_124_459_132_8).abs() < 1e-9, "{cmi}");
    assert!(conditional_mutual_information(&j, &[1], &[2], &[0]).unwrap() < 1e-12);
    assert!((mutual_information(&j, &[0], &[1]).unwrap() - 0.5).abs() < 1e-12);
    assert!((mutual_information(&j, &[0], &[1, 2]).unwrap() - H_QUARTER).abs() < 1e-12);
}

#[test]
fn independent_triple_has_no_conditional_information() {
    let (p, q, r) = ([0.3, 0.7], [0.2, 0.5, 0.3], [0.6, 0.4]);
    let mut mass = Vec::new();
    for a in p {
        for b in q {
            mass.extend(r.iter().map(|c| a * b * c));
        }
    }
    let j = JointDistribution::new(vec![2, 3, 2], mass).unwrap();
    assert!(conditional_mutual_information(&j, &[0], &[1], &[2]).unwrap() < 1e-12);
    assert!(mutual_information(&j, &[0, 1], &[2]).unwrap() < 1e-12);
}

#[test]
fn common_information_of_the_erasure_pair() {
    let r = wyner_common_information(&erasure_joint(), 3, &WynerSearch::default()).unwrap();
    assert!((r.value - H_QUARTER).abs() <= 1e-3, "{}", r.value);
    assert!(r.achieved_joint_error <= FEASIBILITY_TOL);
    assert!(r.aux_cardinality <= 3);
    assert!(r.value >= 0.25 - 1e-6 && r.value <= 1.0 + 1e-6);
}

#[test]
fn common_information_extremes() {
    let prod = JointDistribution::from_matrix(&[vec![0.1, 0.3], vec![0.15, 0.45]]).unwrap();
    assert!(wyner_common_information(&prod, 3, &WynerSearch::default()).unwrap().value < 1e-9);
    let copy = JointDistribution::from_matrix(&[vec![0.5, 0.0], vec![0.0, 0.5]]).unwrap();
    assert!((wyner_common_information(&copy, 2, &WynerSearch::default()).unwrap().value - 1.0).abs() < 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn chain_rule(j in random_joint(vec![3, 2, 3])) {
        // I(X;Y,Z) = I(X;Z) + I(X;Y|Z)
        let lhs = mutual_information(&j, &[0], &[1, 2]).unwrap();
        let rhs = mutual_information(&j, &[0], &[2]).unwrap() + conditional_mutual_information(&j, &[0], &[1], &[2]).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9, "{lhs} vs {rhs}");
        let h = j.entropy_of(&[0, 1, 2]).unwrap();
        let chain = j.entropy_of(&[0]).unwrap() + (j.entropy_of(&[0, 1]).unwrap() - j.entropy_of(&[0]).unwrap())
            + (h - j.entropy_of(&[0, 1]).unwrap());
        prop_assert!((h - chain).abs() <= 1e-12);
    }

    #[test]
    fn mutual_information_bounds_and_symmetry(j in random_joint(vec![3, 4])) {
        let i = mutual_information(&j, &[0], &[1]).unwrap();
        prop_assert!((i - mutual_information(&j, &[1], &[0]).unwrap()).abs() <= 1e-12);
        prop_assert!(i >= 0.0);
        prop_assert!(i <= j.entropy_of(&[0]).unwrap().min(j.entropy_of(&[1]).unwrap()) + 1e-12);
    }

    #[test]
    fn entropy_is_concave(
        p in prop::collection::vec(0.01f64..1.0, 4),
        q in prop::collection::vec(0.01f64..1.0, 4),
        t in 0.0f64..1.0,
    ) {
        let norm = |v: &[f64]| { let z: f64 = v.iter().sum(); v.iter().map(|x| x / z).collect::<Vec<_>>() };
        let (p, q) = (norm(&p), norm(&q));
        let mix: Vec<f64> = p.iter().zip(&q).map(|(a, b)| t * a + (1.0 - t) * b).collect();
        let lhs = entropy(&mix).unwrap();
        let rhs = t * entropy(&p).unwrap() + (1.0 - t) * entropy(&q).unwrap();
        prop_assert!(lhs >= rhs - 1e-12);
        prop_assert!(lhs <= 2.0 + 1e-12);
    }

    #[test]
    fn entropy_ignores_order(p in prop::collection::vec(0.0f64..1.0, 2..7), rot in 0usize..7) {
        let z: f64 = p.iter().sum();
        prop_assume!(z > 1e-3);
        let p: Vec<f64> = p.iter().map(|x| x / z).collect();
        let mut q = p.clone();
        let k = rot % q.len();
        q.rotate_left(k);
        q.reverse();
        prop_assert!((entropy(&p).unwrap() - entropy(&q).unwrap()).abs() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn common_information_is_sandwiched(j in random_joint(vec![2, 2])) {
        let r = wyner_common_information(&j, 4, &WynerSearch { restarts: 2, iterations: 20, inner_iterations: 150, seed: 7 }).unwrap();
        let i = mutual_information(&j, &[0], &[1]).unwrap();
        let cap = j.entropy_of(&[0]).unwrap().min(j.entropy_of(&[1]).unwrap());
        prop_assert!(r.value >= i - 1e-6, "{} < {i}", r.value);
        prop_assert!(r.value <= cap + 1e-6, "{} > {cap}", r.value);
        prop_assert!(r.achieved_joint_error <= FEASIBILITY_TOL);
    }
}
