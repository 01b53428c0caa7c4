//! Extremal running means `limsup s(n)/n`, `liminf s(n)/n`, and densities of
//! automatic sets.
//!
//! For `n` with expansion `A·B^m·w` and `|w| ≡ j (mod a)`, the ratio
//! `s(n)/n` tends to
//! `(κ_{A,j} + κ'_{B,j}/(K−1)) / ([A]_k + [B]_k/(K−1))`, `K = k^{|B|}`,
//! whenever `B` returns the state reached after `A` to itself. The limsup is
//! the largest such value; [`limsup_mean`] finds it and a witness.

mod enumerate;
mod solver;

use std::fmt;

use num::{BigUint, One, Zero};

use crate::asymptotics::{analyze_asymptotics, AsymptoticTable};
use crate::automaton::{AutomaticSet, Dfao, Digit, KernelSystem};
use crate::exact::{int, Rational};
use crate::{Error, Result};

/// Words `A`, `B` and residue `j` whose ratios along `A·B^m·w`,
/// `|w| ≡ j (mod a)`, converge to `value`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub prefix: Vec<Digit>,
    pub cycle: Vec<Digit>,
    pub residue: u64,
    pub value: Rational,
}

impl Witness {
    pub fn total_len(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }
}

/// Renders a word as digits `0-9a-z`, or dot-separated decimals above base 36.
pub fn format_word(word: &[Digit], base: u32) -> String {
    if base <= 36 {
        word.iter().map(|&x| std::char::from_digit(x, 36).unwrap()).collect()
    } else {
        word.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(".")
    }
}

/// Witness display needs the base; this wrapper carries it.
pub struct DisplayWitness<'a>(pub &'a Witness, pub u32);

impl fmt::Display for DisplayWitness<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.0;
        write!(
            f,
            "A={} B={} j={}",
            format_word(&w.prefix, self.1),
            format_word(&w.cycle, self.1),
            w.residue
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Max-ratio dynamic programming over (state, phase), then a tie-broken
    /// search restricted to optimal moves.
    Solver,
    /// Literal enumeration of all bounded `(A, B, j)`.
    Exhaustive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Cap on candidate words (exhaustive) or search states (solver).
    pub max_candidates: u64,
    pub strategy: Strategy,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            max_candidates: 100_000_000,
            strategy: Strategy::Solver,
        }
    }
}

/// `(2d+1)·a`, the longest `|A|+|B|` considered.
pub fn witness_bound(d: usize, a: u64) -> u64 {
    (2 * d as u64 + 1) * a
}

/// `Σ_t Σ_{x<w_t} c[δ(q_t, x)][(j + |w|−t−1) mod a] · k^{|w|−t−1}`, walking
/// `w` from `start`.
fn prefix_sum(ks: &KernelSystem, table: &AsymptoticTable, start: usize, word: &[Digit], j: u64) -> Rational {
    let a = table.period();
    let k = BigUint::from(ks.base());
    let mut total = Rational::zero();
    let mut scale = BigUint::one();
    let mut q_at = Vec::with_capacity(word.len());
    let mut q = start;
    for &x in word {
        q_at.push(q);
        q = ks.delta(q, x);
    }
    for t in (0..word.len()).rev() {
        let m = (word.len() - t - 1) as u64;
        let phase = ((j + m) % a) as usize;
        let mut inner = Rational::zero();
        for x in 0..word[t] {
            inner += table.c(ks.delta(q_at[t], x), phase);
        }
        if !inner.is_zero() {
            total += inner * Rational::from_integer(scale.clone().into());
        }
        scale *= &k;
    }
    total
}

fn check_residue(table: &AsymptoticTable, j: u64) -> Result<()> {
    if j >= table.period() {
        return Err(Error::Domain(format!("residue {j} is not below the period {}", table.period())));
    }
    Ok(())
}

/// `κ_{A,j} = Σ_{v ≺ A, |v|=|A|} c[δ(1,v)][j]`.
pub fn kappa(ks: &KernelSystem, table: &AsymptoticTable, word: &[Digit], j: u64) -> Result<Rational> {
    check_residue(table, j)?;
    match word.first() {
        None => Err(Error::Domain("κ needs a nonempty word".into())),
        Some(0) => Err(Error::Domain("κ needs a word without leading zero".into())),
        Some(_) => Ok(prefix_sum(ks, table, 0, word, j)),
    }
}

/// `κ'_{B,j} = Σ_{v ≺ B, |v|=|B|} c[δ(ℓ,v)][j]`; `v` may have leading zeros.
pub fn kappa_prime(ks: &KernelSystem, table: &AsymptoticTable, ell: usize, word: &[Digit], j: u64) -> Result<Rational> {
    check_residue(table, j)?;
    if word.is_empty() {
        return Err(Error::Domain("κ' needs a nonempty word".into()));
    }
    if ell >= ks.dim() {
        return Err(Error::Domain(format!("state {ell} out of range")));
    }
    Ok(prefix_sum(ks, table, ell, word, j))
}

/// `[w]_k` as a rational.
pub(crate) fn word_value(word: &[Digit], base: u32) -> Rational {
    let k = BigUint::from(base);
    let n = word.iter().fold(BigUint::zero(), |acc, &x| acc * &k + BigUint::from(x));
    Rational::from_integer(n.into())
}

/// Checks the witness shape and state-return constraint.
pub fn validate_witness(ks: &KernelSystem, a: u64, prefix: &[Digit], cycle: &[Digit], j: u64) -> Result<()> {
    let bad = |m: &str| Err(Error::InvalidWitness(m.into()));
    if prefix.is_empty() || prefix[0] == 0 {
        return bad("A must be nonempty without leading zero");
    }
    if cycle.is_empty() {
        return bad("B must be nonempty");
    }
    if prefix.len() as u64 % a != 0 || cycle.len() as u64 % a != 0 {
        return bad("|A| and |B| must be multiples of the period");
    }
    if j >= a {
        return bad("residue out of range");
    }
    if prefix.iter().chain(cycle).any(|&x| x >= ks.base()) {
        return bad("digit out of range");
    }
    let ell = ks.delta_word(0, prefix);
    if ks.delta_word(ell, cycle) != ell {
        return bad("B does not return the state reached after A");
    }
    Ok(())
}

/// Limit of `s(n)/n` along `n = [A·B^m·w]_k`, `|w| ≡ j (mod a)`.
pub fn candidate_value(ks: &KernelSystem, table: &AsymptoticTable, prefix: &[Digit], cycle: &[Digit], j: u64) -> Result<Rational> {
    validate_witness(ks, table.period(), prefix, cycle, j)?;
    let ell = ks.delta_word(0, prefix);
    Ok(candidate_unchecked(ks, table, prefix, cycle, ell, j))
}

pub(crate) fn candidate_unchecked(ks: &KernelSystem, table: &AsymptoticTable, prefix: &[Digit], cycle: &[Digit], ell: usize, j: u64) -> Rational {
    let kappa = prefix_sum(ks, table, 0, prefix, j);
    let kappa_p = prefix_sum(ks, table, ell, cycle, j);
    let big_k = Rational::from_integer(num::pow(BigUint::from(ks.base()), cycle.len()).into());
    let km1 = big_k - Rational::one();
    (kappa + kappa_p / &km1) / (word_value(prefix, ks.base()) + word_value(cycle, ks.base()) / &km1)
}

/// Kernel system and census table of a normalized automaton, shared by the
/// extremal searches.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub ks: KernelSystem,
    pub table: AsymptoticTable,
}

impl Analysis {
    pub fn new(d: &Dfao) -> Result<Self> {
        let (ks, table) = analyze_asymptotics(&d.normalize())?;
        Ok(Analysis { ks, table })
    }

    pub fn max_output(&self) -> Rational {
        self.ks.v0().iter().max().cloned().unwrap_or_else(Rational::zero)
    }

    /// The system for `M − h`, sharing transitions and projector.
    pub fn reflected(&self, m: &Rational) -> Analysis {
        Analysis {
            ks: self.ks.reflected(m),
            table: self.table.reflected(m),
        }
    }

    pub fn limsup(&self, opts: &SearchOptions) -> Result<(Rational, Option<Witness>)> {
        if self.table.initial_row_is_zero() {
            return Ok((Rational::zero(), None));
        }
        let w = match opts.strategy {
            Strategy::Solver => solver::search(&self.ks, &self.table, opts.max_candidates)?,
            Strategy::Exhaustive => enumerate::search(&self.ks, &self.table, opts.max_candidates)?,
        };
        Ok((w.value.clone(), Some(w)))
    }

    /// `M − limsup(M − h)`; the witness carries the value for `h`.
    pub fn liminf(&self, opts: &SearchOptions) -> Result<(Rational, Option<Witness>)> {
        let m = self.max_output();
        let (v, w) = self.reflected(&m).limsup(opts)?;
        let w = w.map(|mut w| {
            w.value = &m - &w.value;
            w
        });
        Ok((m - v, w))
    }
}

pub fn limsup_mean(d: &Dfao) -> Result<(Rational, Option<Witness>)> {
    limsup_mean_with(d, &SearchOptions::default())
}

pub fn limsup_mean_with(d: &Dfao, opts: &SearchOptions) -> Result<(Rational, Option<Witness>)> {
    Analysis::new(d)?.limsup(opts)
}

pub fn liminf_mean(d: &Dfao) -> Result<(Rational, Option<Witness>)> {
    liminf_mean_with(d, &SearchOptions::default())
}

pub fn liminf_mean_with(d: &Dfao, opts: &SearchOptions) -> Result<(Rational, Option<Witness>)> {
    Analysis::new(d)?.liminf(opts)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dichotomy {
    Zero,
    One,
    Interior,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrivialCase {
    None,
    Zero,
    One,
}

#[derive(Clone, Debug)]
pub struct DensityReport {
    pub upper: Rational,
    pub lower: Rational,
    pub witness_upper: Option<Witness>,
    pub witness_lower: Option<Witness>,
    pub trivial_case: TrivialCase,
    pub analysis: Analysis,
}

impl DensityReport {
    pub fn table(&self) -> &AsymptoticTable {
        &self.analysis.table
    }
}

fn dichotomy_of(analysis: &Analysis) -> Dichotomy {
    if analysis.table.initial_row_is_zero() {
        Dichotomy::Zero
    } else if analysis.reflected(&Rational::one()).table.initial_row_is_zero() {
        Dichotomy::One
    } else {
        Dichotomy::Interior
    }
}

pub fn dichotomy(s: &AutomaticSet) -> Result<Dichotomy> {
    Ok(dichotomy_of(&Analysis::new(s.dfao())?))
}

pub fn densities(s: &AutomaticSet) -> Result<DensityReport> {
    densities_with(s, &SearchOptions::default())
}

pub fn densities_with(s: &AutomaticSet, opts: &SearchOptions) -> Result<DensityReport> {
    let analysis = Analysis::new(s.dfao())?;
    let trivial = |v: i64, case| DensityReport {
        upper: int(v),
        lower: int(v),
        witness_upper: None,
        witness_lower: None,
        trivial_case: case,
        analysis: analysis.clone(),
    };
    match dichotomy_of(&analysis) {
        Dichotomy::Zero => return Ok(trivial(0, TrivialCase::Zero)),
        Dichotomy::One => return Ok(trivial(1, TrivialCase::One)),
        Dichotomy::Interior => {}
    }
    let (upper, witness_upper) = analysis.limsup(opts)?;
    let (lower, witness_lower) = analysis.liminf(opts)?;
    if !(lower > Rational::zero() && lower <= upper && upper < Rational::one()) {
        return Err(Error::Inconsistent(format!(
            "interior densities out of order: lower {lower}, upper {upper}"
        )));
    }
    Ok(DensityReport {
        upper,
        lower,
        witness_upper,
        witness_lower,
        trivial_case: TrivialCase::None,
        analysis,
    })
}

#[cfg(test)]
mod tests;
