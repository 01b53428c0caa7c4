//! Brute-force counterparts of the symbolic computations.

use std::io::{self, Write};

use num::integer::lcm;
use num::{BigInt, One, ToPrimitive, Zero};
use rand::Rng;

use crate::asymptotics::AsymptoticTable;
use crate::automaton::{Dfao, Digit, KernelSystem};
use crate::exact::{format_decimal, int, Rational};
use crate::{Error, Result};

/// Running sums with outputs scaled to integers by their common denominator.
struct Scaled {
    denom: u128,
    values: Vec<u128>,
}

impl Scaled {
    fn new(d: &Dfao) -> Result<Self> {
        let denom = d
            .outputs()
            .iter()
            .try_fold(1u128, |acc, o| o.denom().to_u128().map(|q| lcm(acc, q)))
            .ok_or_else(|| Error::CostGuard("output denominators too large for simulation".into()))?;
        let values = d
            .outputs()
            .iter()
            .map(|o| (o * Rational::from_integer(BigInt::from(denom))).to_integer().to_u128())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::CostGuard("outputs too large for simulation".into()))?;
        Ok(Scaled { denom, values })
    }

    fn rational(&self, s: u128, n: u64) -> Rational {
        Rational::new(BigInt::from(s), BigInt::from(self.denom) * BigInt::from(n))
    }
}

/// Evaluates `h(0), h(1), …` in order, re-running only the changed suffix
/// of digits at each step.
pub struct Odometer<'a> {
    dfao: &'a Dfao,
    digits: Vec<Digit>,
    states: Vec<usize>,
}

impl<'a> Odometer<'a> {
    pub fn new(dfao: &'a Dfao) -> Self {
        Odometer {
            dfao,
            digits: Vec::new(),
            states: vec![dfao.initial()],
        }
    }

    /// State reached on the current number.
    pub fn state(&self) -> usize {
        *self.states.last().unwrap()
    }

    pub fn advance(&mut self) {
        let k = self.dfao.base();
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                self.digits.insert(0, 1);
                self.states.truncate(1);
                break;
            }
            i -= 1;
            if self.digits[i] + 1 < k {
                self.digits[i] += 1;
                self.states.truncate(i + 1);
                break;
            }
            self.digits[i] = 0;
        }
        let from = self.states.len() - 1;
        for t in from..self.digits.len() {
            let q = self.dfao.target(self.states[t], self.digits[t]);
            self.states.push(q);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sample {
    pub n: u64,
    pub s: Rational,
    pub ratio: Rational,
}

/// Simulated `s(n)/n` for `n = 1..N`.
#[derive(Clone, Debug)]
pub struct Trace {
    pub samples: Vec<Sample>,
    /// Sup and inf of `s(n)/n` over `n ≥ window_start`, with the `n` attaining them.
    pub running_sup: (u64, Rational),
    pub running_inf: (u64, Rational),
    pub window_start: u64,
}

impl Trace {
    pub fn write_csv(&self, mut out: impl Write) -> io::Result<()> {
        writeln!(out, "n,s,ratio")?;
        for p in &self.samples {
            writeln!(out, "{},{},{}", p.n, p.s, format_decimal(&p.ratio, 12))?;
        }
        Ok(())
    }
}

/// Streams `n = 1..=N`, keeping every `stride`-th sample and the extremes of
/// `s(n)/n` over `n ≥ N/k²`.
pub fn simulate(d: &Dfao, big_n: u64, stride: u64) -> Result<Trace> {
    if big_n == 0 || stride == 0 {
        return Err(Error::Domain("N and stride must be positive".into()));
    }
    let k = d.base() as u64;
    let window_start = (big_n / (k * k)).max(1);
    let scaled = Scaled::new(d)?;
    let mut odo = Odometer::new(d);
    let mut s: u128 = 0;
    let mut samples = Vec::new();
    let mut sup: Option<(u64, u128)> = None;
    let mut inf: Option<(u64, u128)> = None;
    for n in 1..=big_n {
        s += scaled.values[odo.state()];
        odo.advance();
        if n % stride == 0 {
            samples.push(Sample {
                n,
                s: Rational::new(BigInt::from(s), BigInt::from(scaled.denom)),
                ratio: scaled.rational(s, n),
            });
        }
        if n >= window_start {
            if sup.map_or(true, |(m, t)| exceeds(s, n, t, m)) {
                sup = Some((n, s));
            }
            if inf.map_or(true, |(m, t)| exceeds(t, m, s, n)) {
                inf = Some((n, s));
            }
        }
    }
    let (sn, ss) = sup.unwrap();
    let (inn, is) = inf.unwrap();
    Ok(Trace {
        samples,
        running_sup: (sn, scaled.rational(ss, sn)),
        running_inf: (inn, scaled.rational(is, inn)),
        window_start,
    })
}

/// `s1/n1 > s2/n2`.
fn exceeds(s1: u128, n1: u64, s2: u128, n2: u64) -> bool {
    match (s1.checked_mul(n2 as u128), s2.checked_mul(n1 as u128)) {
        (Some(x), Some(y)) => x > y,
        _ => BigInt::from(s1) * BigInt::from(n2) > BigInt::from(s2) * BigInt::from(n1),
    }
}

/// Max and min of `s(n)/n` over `lo ≤ n ≤ hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extremes {
    pub max: (u64, Rational),
    pub min: (u64, Rational),
}

pub fn ratio_extremes(d: &Dfao, lo: u64, hi: u64) -> Result<Extremes> {
    if lo == 0 || lo > hi {
        return Err(Error::Domain("need 1 ≤ lo ≤ hi".into()));
    }
    if hi > 100_000_000 {
        return Err(Error::CostGuard(format!("simulation to {hi} exceeds 10^8 steps")));
    }
    let scaled = Scaled::new(d)?;
    let mut odo = Odometer::new(d);
    let mut s: u128 = 0;
    let mut max: Option<(u64, u128)> = None;
    let mut min: Option<(u64, u128)> = None;
    for n in 1..=hi {
        s += scaled.values[odo.state()];
        odo.advance();
        if n >= lo {
            if max.map_or(true, |(m, t)| exceeds(s, n, t, m)) {
                max = Some((n, s));
            }
            if min.map_or(true, |(m, t)| exceeds(t, m, s, n)) {
                min = Some((n, s));
            }
        }
    }
    let (mn, ms) = max.unwrap();
    let (nn, ns) = min.unwrap();
    Ok(Extremes {
        max: (mn, scaled.rational(ms, mn)),
        min: (nn, scaled.rational(ns, nn)),
    })
}

/// `Σ_{m<n} h(m)` by direct evaluation.
pub fn naive_partial_sum(d: &Dfao, n: u64) -> Result<Rational> {
    if n > 1_000_000 {
        return Err(Error::CostGuard(format!("naive partial sum to {n} exceeds 10^6")));
    }
    Ok((0..n).fold(Rational::zero(), |acc, m| acc + d.eval(m)))
}

fn words_below(word: &[Digit], k: u32) -> impl Iterator<Item = Vec<Digit>> + '_ {
    let total = (k as u64).pow(word.len() as u32);
    (0..total)
        .map(move |mut i| {
            let mut v = vec![0; word.len()];
            for slot in v.iter_mut().rev() {
                *slot = (i % k as u64) as Digit;
                i /= k as u64;
            }
            v
        })
        .filter(move |v| v.as_slice() < word)
}

fn literal_sum(ks: &KernelSystem, table: &AsymptoticTable, start: usize, word: &[Digit], j: u64) -> Result<Rational> {
    if word.len() > 6 {
        return Err(Error::CostGuard(format!("literal κ sum over words of length {} exceeds 6", word.len())));
    }
    Ok(words_below(word, ks.base()).fold(Rational::zero(), |acc, v| acc + table.c(ks.delta_word(start, &v), j as usize)))
}

/// `κ_{A,j}` as the literal sum over all `v ≺ A` of equal length.
pub fn naive_kappa(ks: &KernelSystem, table: &AsymptoticTable, word: &[Digit], j: u64) -> Result<Rational> {
    literal_sum(ks, table, 0, word, j)
}

/// `κ'_{B,j}` as the literal sum over all `v ≺ B` of equal length, from `ell`.
pub fn naive_kappa_prime(ks: &KernelSystem, table: &AsymptoticTable, ell: usize, word: &[Digit], j: u64) -> Result<Rational> {
    literal_sum(ks, table, ell, word, j)
}

/// Random automaton with `states` states in base `k`, initial state 0
/// looping on digit 0, outputs drawn from `pool`.
pub fn random_dfao<R: Rng + ?Sized>(rng: &mut R, k: u32, states: usize, pool: &[Rational]) -> Dfao {
    let transitions = (0..states)
        .map(|q| {
            (0..k)
                .map(|x| if q == 0 && x == 0 { 0 } else { rng.gen_range(0..states) })
                .collect()
        })
        .collect();
    let outputs = (0..states).map(|_| pool[rng.gen_range(0..pool.len())].clone()).collect();
    Dfao::new(k, 0, transitions, outputs).expect("well-formed by construction")
}

/// Output pool `{0, 1}` for random sets.
pub fn set_pool() -> Vec<Rational> {
    vec![int(0), int(1)]
}

/// Output pool for random sequences.
pub fn sequence_pool() -> Vec<Rational> {
    vec![int(0), Rational::new(1.into(), 2.into()), Rational::one(), int(2), Rational::new(3.into(), 2.into())]
}
