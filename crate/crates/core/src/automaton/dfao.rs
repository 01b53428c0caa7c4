use std::collections::VecDeque;

use num::{BigUint, One, Signed, Zero};

use crate::exact::Rational;
use crate::{Error, Result};

/// A base-`k` digit.
pub type Digit = u32;

/// Canonical base-`k` expansion of `n`, most significant digit first. The
/// expansion of 0 is the empty word.
pub fn digits(n: &BigUint, base: u32) -> Vec<Digit> {
    let mut out = n.to_radix_le(base);
    if n.is_zero() {
        out.clear();
    }
    out.reverse();
    out.into_iter().map(Digit::from).collect()
}

/// Deterministic finite automaton with output.
///
/// Words are read most-significant digit first. `transitions[q][x]` is the
/// state reached from `q` on digit `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfao {
    base: u32,
    initial: usize,
    transitions: Vec<Vec<usize>>,
    outputs: Vec<Rational>,
}

impl Dfao {
    pub fn new(
        base: u32,
        initial: usize,
        transitions: Vec<Vec<usize>>,
        outputs: Vec<Rational>,
    ) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidAutomaton(format!("base {base} is below 2")));
        }
        let m = transitions.len();
        if m == 0 {
            return Err(Error::InvalidAutomaton("no states".into()));
        }
        if outputs.len() != m {
            return Err(Error::InvalidAutomaton(format!(
                "{} outputs for {m} states",
                outputs.len()
            )));
        }
        if initial >= m {
            return Err(Error::InvalidAutomaton(format!(
                "initial state {initial} out of range"
            )));
        }
        for (q, row) in transitions.iter().enumerate() {
            if row.len() != base as usize {
                return Err(Error::InvalidAutomaton(format!(
                    "state {q} has {} transitions, expected {base}",
                    row.len()
                )));
            }
            if let Some(&t) = row.iter().find(|&&t| t >= m) {
                return Err(Error::InvalidAutomaton(format!(
                    "state {q} points to undefined state {t}"
                )));
            }
        }
        if let Some(q) = outputs.iter().position(Signed::is_negative) {
            return Err(Error::InvalidAutomaton(format!(
                "state {q} has negative output {}",
                outputs[q]
            )));
        }
        Ok(Dfao {
            base,
            initial,
            transitions,
            outputs,
        })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn state_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn target(&self, state: usize, digit: Digit) -> usize {
        self.transitions[state][digit as usize]
    }

    pub fn transitions(&self) -> &[Vec<usize>] {
        &self.transitions
    }

    pub fn output(&self, state: usize) -> &Rational {
        &self.outputs[state]
    }

    pub fn outputs(&self) -> &[Rational] {
        &self.outputs
    }

    pub fn max_output(&self) -> Rational {
        self.outputs.iter().max().cloned().unwrap_or_else(Rational::zero)
    }

    /// State reached from `state` after reading `word`.
    pub fn run_from(&self, state: usize, word: &[Digit]) -> usize {
        word.iter().fold(state, |q, &x| self.target(q, x))
    }

    pub fn eval_word(&self, word: &[Digit]) -> &Rational {
        self.output(self.run_from(self.initial, word))
    }

    /// `h(n)`: the output after reading the canonical expansion of `n`.
    pub fn eval(&self, n: u64) -> &Rational {
        let mut state = self.initial;
        if n > 0 {
            let mut place = 1u64;
            while place <= n / self.base as u64 {
                place *= self.base as u64;
            }
            let mut rest = n;
            loop {
                state = self.target(state, (rest / place) as Digit);
                rest %= place;
                if place == 1 {
                    break;
                }
                place /= self.base as u64;
            }
        }
        self.output(state)
    }

    pub fn eval_big(&self, n: &BigUint) -> &Rational {
        self.eval_word(&digits(n, self.base))
    }

    /// Whether leading zeros are invisible: the initial state loops on 0.
    pub fn is_normalized(&self) -> bool {
        self.target(self.initial, 0) == self.initial
    }

    /// Same automaton with every output replaced.
    pub fn with_outputs(&self, outputs: Vec<Rational>) -> Result<Self> {
        Dfao::new(self.base, self.initial, self.transitions.clone(), outputs)
    }

    /// States reachable from the initial state, in ascending index order.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.state_count()];
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial] = true;
        while let Some(q) = queue.pop_front() {
            for &t in &self.transitions[q] {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    /// Equivalent automaton (same value on every `n`) whose initial state
    /// loops on digit 0, with unreachable states removed.
    ///
    /// When the initial state does not already loop on 0, a fresh initial
    /// state is put in front: it loops on 0, copies the original initial
    /// state's other transitions and its output. Canonical expansions have
    /// no leading zeros, so the function on ℕ is unchanged.
    pub fn normalize(&self) -> Dfao {
        if self.is_normalized() {
            return self.trimmed();
        }
        let shift = |q: usize| q + 1;
        let mut transitions = Vec::with_capacity(self.state_count() + 1);
        let mut fresh: Vec<usize> = self.transitions[self.initial].iter().map(|&t| shift(t)).collect();
        fresh[0] = 0;
        transitions.push(fresh);
        transitions.extend(
            self.transitions
                .iter()
                .map(|row| row.iter().map(|&t| shift(t)).collect()),
        );
        let mut outputs = Vec::with_capacity(self.state_count() + 1);
        outputs.push(self.outputs[self.initial].clone());
        outputs.extend(self.outputs.iter().cloned());
        Dfao {
            base: self.base,
            initial: 0,
            transitions,
            outputs,
        }
        .trimmed()
    }

    /// Drops unreachable states, keeping the relative order of the rest.
    pub fn trimmed(&self) -> Dfao {
        let seen = self.reachable();
        let mut index = vec![usize::MAX; self.state_count()];
        let mut next = 0;
        for (q, &s) in seen.iter().enumerate() {
            if s {
                index[q] = next;
                next += 1;
            }
        }
        let transitions = (0..self.state_count())
            .filter(|&q| seen[q])
            .map(|q| self.transitions[q].iter().map(|&t| index[t]).collect())
            .collect();
        let outputs = (0..self.state_count())
            .filter(|&q| seen[q])
            .map(|q| self.outputs[q].clone())
            .collect();
        Dfao {
            base: self.base,
            initial: index[self.initial],
            transitions,
            outputs,
        }
    }

    /// Moore minimization by partition refinement. Optional pre-pass; the
    /// analysis is correct without it.
    pub fn minimized(&self) -> Dfao {
        let d = self.trimmed();
        let m = d.state_count();
        let mut outs: Vec<&Rational> = d.outputs.iter().collect();
        outs.sort();
        outs.dedup();
        let mut class: Vec<usize> = d
            .outputs
            .iter()
            .map(|o| outs.binary_search(&o).unwrap())
            .collect();
        let mut count = outs.len();
        loop {
            let mut signatures: Vec<(usize, Vec<usize>, usize)> = (0..m)
                .map(|q| {
                    let sig = d.transitions[q].iter().map(|&t| class[t]).collect();
                    (class[q], sig, q)
                })
                .collect();
            signatures.sort();
            let mut next = vec![0; m];
            let mut id = 0;
            for i in 0..m {
                if i > 0 && (signatures[i].0, &signatures[i].1) != (signatures[i - 1].0, &signatures[i - 1].1) {
                    id += 1;
                }
                next[signatures[i].2] = id;
            }
            let new_count = id + 1;
            class = next;
            if new_count == count {
                break;
            }
            count = new_count;
        }
        // renumber classes by first occurrence so the initial state's order is stable
        let mut order = vec![usize::MAX; count];
        let mut reps = Vec::new();
        for q in 0..m {
            if order[class[q]] == usize::MAX {
                order[class[q]] = reps.len();
                reps.push(q);
            }
        }
        let transitions = reps
            .iter()
            .map(|&q| d.transitions[q].iter().map(|&t| order[class[t]]).collect())
            .collect();
        let outputs = reps.iter().map(|&q| d.outputs[q].clone()).collect();
        Dfao {
            base: d.base,
            initial: order[class[d.initial]],
            transitions,
            outputs,
        }
    }
}

/// An automaton whose outputs are all 0 or 1: the characteristic sequence
/// of a `k`-automatic set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomaticSet(Dfao);

impl AutomaticSet {
    pub fn new(dfao: Dfao) -> Result<Self> {
        for (q, o) in dfao.outputs().iter().enumerate() {
            if !(o.is_zero() || o.is_one()) {
                return Err(Error::NotASet {
                    state: q,
                    output: o.to_string(),
                });
            }
        }
        Ok(AutomaticSet(dfao))
    }

    pub fn dfao(&self) -> &Dfao {
        &self.0
    }

    pub fn into_dfao(self) -> Dfao {
        self.0
    }

    pub fn contains(&self, n: u64) -> bool {
        self.0.eval(n).is_one()
    }

    /// The complement in ℕ: outputs 0 and 1 swapped.
    pub fn complement(&self) -> AutomaticSet {
        let outputs = self
            .0
            .outputs()
            .iter()
            .map(|o| Rational::one() - o)
            .collect();
        AutomaticSet(self.0.with_outputs(outputs).expect("same shape"))
    }
}
