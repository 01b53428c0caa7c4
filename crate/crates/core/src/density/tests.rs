use super::*;
use crate::automaton::parse_dfao;
use crate::exact::ratio;

const EVEN_LEN: &str = "base 2\nstates 3\ninitial 0\nstate 0 output 1 -> 0 1\nstate 1 output 0 -> 2 2\nstate 2 output 1 -> 1 1\n";
const TERNARY: &str = "base 3\nstates 3\ninitial 0\nstate 0 output 0 -> 0 2 1\nstate 1 output 0 -> 1 1 1\nstate 2 output 1 -> 2 2 2\n";
const ZERO: &str = "base 2\nstates 2\ninitial 0\nstate 0 output 0 -> 0 1\nstate 1 output 0 -> 1 1\n";
const ONE: &str = "base 2\nstates 1\ninitial 0\nstate 0 output 1 -> 0 0\n";
const POWERS_OF_TWO: &str = "base 2\nstates 3\ninitial 0\nstate 0 output 0 -> 0 1\nstate 1 output 1 -> 1 2\nstate 2 output 0 -> 2 2\n";

fn analysis(text: &str) -> Analysis {
    Analysis::new(&parse_dfao(text).unwrap()).unwrap()
}

fn exhaustive() -> SearchOptions {
    SearchOptions {
        strategy: Strategy::Exhaustive,
        ..SearchOptions::default()
    }
}

#[test]
fn kappa_examples() {
    let t = analysis(TERNARY);
    assert_eq!(kappa(&t.ks, &t.table, &[1], 0).unwrap(), ratio(1, 2));
    assert_eq!(kappa(&t.ks, &t.table, &[1, 0], 0).unwrap(), ratio(3, 2));
    assert!(kappa(&t.ks, &t.table, &[0, 1], 0).is_err());
    assert!(kappa(&t.ks, &t.table, &[], 0).is_err());
    // state f_3 is index 2
    assert_eq!(kappa_prime(&t.ks, &t.table, 2, &[2], 0).unwrap(), int(2));
    assert_eq!(kappa_prime(&t.ks, &t.table, 2, &[0], 0).unwrap(), int(0));
    let z = analysis(ZERO);
    assert_eq!(kappa(&z.ks, &z.table, &[1, 1, 0], 0).unwrap(), int(0));
}

#[test]
fn kappa_prime_even_len() {
    let t = analysis(EVEN_LEN);
    let c = |i: usize| t.table.c(i, 0).clone();
    // v ∈ {00, 01, 10} from state index 1
    let direct = [[0, 0], [0, 1], [1, 0]]
        .iter()
        .map(|v| c(t.ks.delta_word(1, v)))
        .fold(Rational::zero(), |acc, x| acc + x);
    assert_eq!(kappa_prime(&t.ks, &t.table, 1, &[1, 1], 0).unwrap(), direct);
}

#[test]
fn candidate_examples() {
    let t = analysis(TERNARY);
    assert_eq!(candidate_value(&t.ks, &t.table, &[1], &[2], 0).unwrap(), ratio(3, 4));
    assert_eq!(candidate_value(&t.ks, &t.table, &[1], &[0], 0).unwrap(), ratio(1, 2));
    // pumping B leaves the value unchanged
    assert_eq!(candidate_value(&t.ks, &t.table, &[1], &[2, 2], 0).unwrap(), ratio(3, 4));
    let one = analysis(ONE);
    assert_eq!(candidate_value(&one.ks, &one.table, &[1], &[0], 0).unwrap(), int(1));
    // state-return violated: A = 1 lands in the odd state, B = 1 leaves it
    let f = analysis(EVEN_LEN);
    assert!(matches!(candidate_value(&f.ks, &f.table, &[1, 0], &[1], 0), Err(Error::InvalidWitness(_))));
}

#[test]
fn ternary_limsup_witness() {
    for opts in [SearchOptions::default(), exhaustive()] {
        let (v, w) = analysis(TERNARY).limsup(&opts).unwrap();
        assert_eq!(v, ratio(3, 4));
        let w = w.unwrap();
        assert_eq!((w.prefix.as_slice(), w.cycle.as_slice(), w.residue), (&[1][..], &[2][..], 0));
        assert_eq!(DisplayWitness(&w, 3).to_string(), "A=1 B=2 j=0");
    }
}

#[test]
fn ternary_liminf() {
    for opts in [SearchOptions::default(), exhaustive()] {
        let (v, w) = analysis(TERNARY).liminf(&opts).unwrap();
        assert_eq!(v, ratio(1, 2));
        assert_eq!(w.unwrap().value, ratio(1, 2));
    }
}

#[test]
fn even_len_means() {
    for opts in [SearchOptions::default(), exhaustive()] {
        let a = analysis(EVEN_LEN);
        assert_eq!(a.limsup(&opts).unwrap().0, ratio(2, 3));
        assert_eq!(a.liminf(&opts).unwrap().0, ratio(1, 3));
    }
}

#[test]
fn zero_and_constant() {
    let z = analysis(ZERO);
    assert_eq!(z.limsup(&SearchOptions::default()).unwrap(), (int(0), None));
    let one = analysis(ONE);
    assert_eq!(one.liminf(&SearchOptions::default()).unwrap(), (int(1), None));
    assert_eq!(one.limsup(&SearchOptions::default()).unwrap().0, int(1));
}

#[test]
fn set_densities() {
    let set = |t: &str| AutomaticSet::new(parse_dfao(t).unwrap()).unwrap();
    let r = densities(&set(EVEN_LEN)).unwrap();
    assert_eq!((r.lower, r.upper, r.trivial_case), (ratio(1, 3), ratio(2, 3), TrivialCase::None));
    let r = densities(&set(TERNARY)).unwrap();
    assert_eq!((r.lower, r.upper), (ratio(1, 2), ratio(3, 4)));
    let r = densities(&set(ZERO)).unwrap();
    assert_eq!((r.lower.clone(), r.upper.clone(), r.trivial_case), (int(0), int(0), TrivialCase::Zero));
    assert!(r.witness_lower.is_none() && r.witness_upper.is_none());
    let r = densities(&set(ONE)).unwrap();
    assert_eq!((r.lower, r.upper, r.trivial_case), (int(1), int(1), TrivialCase::One));
}

#[test]
fn dichotomy_cases() {
    let set = |t: &str| AutomaticSet::new(parse_dfao(t).unwrap()).unwrap();
    assert_eq!(dichotomy(&set(ZERO)).unwrap(), Dichotomy::Zero);
    assert_eq!(dichotomy(&set(ONE)).unwrap(), Dichotomy::One);
    assert_eq!(dichotomy(&set(POWERS_OF_TWO)).unwrap(), Dichotomy::Zero);
    assert_eq!(dichotomy(&set(EVEN_LEN)).unwrap(), Dichotomy::Interior);
}

#[test]
fn scaling_equivariance() {
    let base = parse_dfao(EVEN_LEN).unwrap();
    let r = ratio(7, 3);
    let scaled = base.with_outputs(base.outputs().iter().map(|o| o * &r).collect()).unwrap();
    let (u0, w0) = limsup_mean(&base).unwrap();
    let (u1, w1) = limsup_mean(&scaled).unwrap();
    assert_eq!(u1, &u0 * &r);
    let (w0, w1) = (w0.unwrap(), w1.unwrap());
    assert_eq!((w0.prefix, w0.cycle, w0.residue), (w1.prefix, w1.cycle, w1.residue));
    assert_eq!(liminf_mean(&scaled).unwrap().0, liminf_mean(&base).unwrap().0 * &r);
}

#[test]
fn candidate_count_formula() {
    // k = 2, d = 1, a = 1: bound 3; (p, q) ∈ {(1,1), (1,2), (2,1)} → 2 + 4 + 4
    assert_eq!(enumerate::candidate_count(2, 1, 1), BigUint::from(10u32));
}

#[test]
fn exhaustive_cap_reports_infeasible() {
    let opts = SearchOptions {
        max_candidates: 5,
        strategy: Strategy::Exhaustive,
    };
    assert!(matches!(analysis(EVEN_LEN).limsup(&opts), Err(Error::Infeasible { .. })));
}
