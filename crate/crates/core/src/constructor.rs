//! Automatic sets with prescribed lower and upper density.
//!
//! For `0 < α ≤ β < 1`, pick `K = k^m` with `Kα ≥ β` and `Kβ < K−1`, set
//! `α' = (Kα−β)/(K−1)`, `β' = (Kβ−α)/(K−1)` and write them as `A/C`, `B/C`.
//! The set of `n` whose base-`K` expansion has even length and `n mod C < A`,
//! or odd length and `n mod C < B`, has lower density `α` and upper density
//! `β`.

use num::integer::lcm;
use num::{One, ToPrimitive, Zero};

use crate::automaton::{AutomaticSet, Dfao};
use crate::exact::{int, Rational};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityTarget {
    alpha: Rational,
    beta: Rational,
    k: u32,
}

impl DensityTarget {
    pub fn new(alpha: Rational, beta: Rational, k: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::Inadmissible(format!("base {k} is below 2")));
        }
        let zero = Rational::zero();
        let one = Rational::one();
        let trivial = (alpha.is_zero() && beta.is_zero()) || (alpha.is_one() && beta.is_one());
        if !trivial {
            if alpha > beta {
                return Err(Error::Inadmissible(format!("alpha {alpha} exceeds beta {beta}")));
            }
            if alpha <= zero {
                return Err(Error::Inadmissible(format!(
                    "alpha {alpha} must be positive unless alpha = beta = 0"
                )));
            }
            if beta >= one {
                return Err(Error::Inadmissible(format!(
                    "beta {beta} must be below 1 unless alpha = beta = 1"
                )));
            }
        }
        Ok(DensityTarget { alpha, beta, k })
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }

    pub fn base(&self) -> u32 {
        self.k
    }
}

/// Parameters of a nontrivial construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionParams {
    /// Exponent with `K = k^m`.
    pub m: u32,
    /// Base of the constructed automaton.
    pub big_k: u64,
    pub c: u64,
    pub a: u64,
    pub b: u64,
    pub alpha_prime: Rational,
    pub beta_prime: Rational,
}

impl ConstructionParams {
    /// The defining membership rule, independent of the automaton.
    pub fn contains(&self, n: u64) -> bool {
        let mut len = 0;
        let mut rest = n;
        while rest > 0 {
            rest /= self.big_k;
            len += 1;
        }
        let r = n % self.c;
        if len % 2 == 0 {
            r < self.a
        } else {
            r < self.b
        }
    }
}

#[derive(Clone, Debug)]
pub struct Construction {
    pub set: AutomaticSet,
    /// `None` for the empty and full sets.
    pub params: Option<ConstructionParams>,
}

fn constant_set(k: u32, value: i64) -> AutomaticSet {
    let d = Dfao::new(k, 0, vec![vec![0; k as usize]], vec![int(value)]).expect("valid constant automaton");
    AutomaticSet::new(d).expect("0/1 output")
}

/// Largest exponent tried for `K = k^m`; `K` must also fit the digit type.
const MAX_BASE: u64 = u32::MAX as u64;

pub fn construct(t: &DensityTarget) -> Result<Construction> {
    if t.alpha.is_zero() {
        return Ok(Construction {
            set: constant_set(t.k, 0),
            params: None,
        });
    }
    if t.alpha.is_one() {
        return Ok(Construction {
            set: constant_set(t.k, 1),
            params: None,
        });
    }
    let one = Rational::one();
    let mut m = 1u32;
    let mut big_k = t.k as u64;
    loop {
        let kr = int(big_k as i64);
        if &kr * &t.alpha >= t.beta && &kr * &t.beta < &kr - &one {
            break;
        }
        big_k = big_k
            .checked_mul(t.k as u64)
            .filter(|&v| v <= MAX_BASE)
            .ok_or_else(|| Error::Inadmissible("no power of the base small enough to realize the target".into()))?;
        m += 1;
    }
    let kr = int(big_k as i64);
    let km1 = &kr - &one;
    let alpha_prime = (&kr * &t.alpha - &t.beta) / &km1;
    let beta_prime = (&kr * &t.beta - &t.alpha) / &km1;
    let as_u64 = |r: &Rational| r.to_integer().to_u64().ok_or_else(|| Error::Inadmissible("construction parameters overflow".into()));
    let c = lcm(as_u64(&Rational::from_integer(alpha_prime.denom().clone()))?, as_u64(&Rational::from_integer(beta_prime.denom().clone()))?);
    let a = as_u64(&(&alpha_prime * int(c as i64)))?;
    let b = as_u64(&(&beta_prime * int(c as i64)))?;
    let params = ConstructionParams {
        m,
        big_k,
        c,
        a,
        b,
        alpha_prime,
        beta_prime,
    };
    Ok(Construction {
        set: build(&params)?,
        params: Some(params),
    })
}

/// State 0 is the initial state; `(p, r)` is `1 + p·C + r` with `p = 0` for
/// even length.
fn build(p: &ConstructionParams) -> Result<AutomaticSet> {
    let (kb, c) = (p.big_k, p.c);
    let c_us = c as usize;
    let n = 1 + 2 * c_us;
    let state = |parity: u64, r: u64| 1 + (parity * c + r) as usize;
    let mut transitions = Vec::with_capacity(n);
    let mut outputs = Vec::with_capacity(n);
    transitions.push((0..kb).map(|x| if x == 0 { 0 } else { state(1, x % c) }).collect());
    outputs.push(int(i64::from(0 < p.a)));
    for parity in 0..2 {
        let limit = if parity == 0 { p.a } else { p.b };
        for r in 0..c {
            transitions.push((0..kb).map(|x| state(1 - parity, (kb % c * r + x) % c)).collect());
            outputs.push(int(i64::from(r < limit)));
        }
    }
    AutomaticSet::new(Dfao::new(kb as u32, 0, transitions, outputs)?)
}

/// Numbers whose base-`k` expansion has even length (0 included).
pub fn even_length_set(k: u32) -> Result<AutomaticSet> {
    if k < 2 {
        return Err(Error::Domain(format!("base {k} is below 2")));
    }
    let k = k as usize;
    let init: Vec<usize> = (0..k).map(|x| if x == 0 { 0 } else { 1 }).collect();
    let d = Dfao::new(k as u32, 0, vec![init, vec![2; k], vec![1; k]], vec![int(1), int(0), int(1)])?;
    AutomaticSet::new(d)
}

/// Numbers whose leading base-`k` digit is `digit`. States: initial,
/// reject, accept.
pub fn leading_digit_set(k: u32, digit: u32) -> Result<AutomaticSet> {
    if k < 2 {
        return Err(Error::Domain(format!("base {k} is below 2")));
    }
    if digit == 0 || digit >= k {
        return Err(Error::Domain(format!("leading digit {digit} must lie in 1..{}", k - 1)));
    }
    let init: Vec<usize> = (0..k)
        .map(|x| match x {
            0 => 0,
            x if x == digit => 2,
            _ => 1,
        })
        .collect();
    let k = k as usize;
    let d = Dfao::new(k as u32, 0, vec![init, vec![1; k], vec![2; k]], vec![int(0), int(0), int(1)])?;
    AutomaticSet::new(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::parse_dfao;
    use crate::exact::ratio;

    #[test]
    fn worked_example() {
        let t = DensityTarget::new(ratio(1, 3), ratio(1, 2), 2).unwrap();
        let c = construct(&t).unwrap();
        let p = c.params.unwrap();
        assert_eq!((p.big_k, p.c, p.a, p.b), (4, 18, 5, 10));
        assert_eq!(p.alpha_prime, ratio(5, 18));
        assert_eq!(c.set.dfao().state_count(), 37);
        assert!(c.set.dfao().is_normalized());
    }

    #[test]
    fn half_in_base_three() {
        let c = construct(&DensityTarget::new(ratio(1, 2), ratio(1, 2), 3).unwrap()).unwrap();
        let p = c.params.unwrap();
        assert_eq!((p.big_k, p.alpha_prime.clone(), p.beta_prime.clone()), (3, ratio(1, 2), ratio(1, 2)));
    }

    #[test]
    fn membership_matches_rule() {
        for (al, be, k) in [((1, 3), (1, 2), 2), ((1, 5), (4, 5), 3), ((1, 6), (5, 6), 2)] {
            let t = DensityTarget::new(ratio(al.0, al.1), ratio(be.0, be.1), k).unwrap();
            let c = construct(&t).unwrap();
            let p = c.params.unwrap();
            for n in 0..10_000 {
                assert_eq!(c.set.contains(n), p.contains(n), "n = {n}");
            }
        }
    }

    #[test]
    fn trivial_targets() {
        let c = construct(&DensityTarget::new(int(0), int(0), 2).unwrap()).unwrap();
        assert!(c.params.is_none());
        assert!((0..50).all(|n| !c.set.contains(n)));
        let c = construct(&DensityTarget::new(int(1), int(1), 3).unwrap()).unwrap();
        assert!((0..50).all(|n| c.set.contains(n)));
    }

    #[test]
    fn inadmissible_targets() {
        for (a, b) in [(ratio(1, 2), ratio(1, 3)), (int(0), ratio(1, 2)), (ratio(1, 2), int(1)), (int(-1), int(0))] {
            assert!(matches!(DensityTarget::new(a, b, 2), Err(Error::Inadmissible(_))));
        }
    }

    #[test]
    fn named_families() {
        let even_len = parse_dfao("base 2\nstates 3\ninitial 0\nstate 0 output 1 -> 0 1\nstate 1 output 0 -> 2 2\nstate 2 output 1 -> 1 1\n").unwrap();
        assert_eq!(even_length_set(2).unwrap().dfao(), &even_len);
        assert!(even_length_set(3).unwrap().contains(0));
        let ternary = parse_dfao("base 3\nstates 3\ninitial 0\nstate 0 output 0 -> 0 2 1\nstate 1 output 0 -> 1 1 1\nstate 2 output 1 -> 2 2 2\n").unwrap();
        assert_eq!(leading_digit_set(3, 1).unwrap().dfao(), &ternary);
        assert!(leading_digit_set(3, 0).is_err());
    }
}
