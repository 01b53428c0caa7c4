use num::Zero;

use super::{Dfao, Digit};
use crate::exact::{Matrix, Rational};
use crate::{Error, Result};

/// Linear-algebra view of a normalized automaton.
///
/// Index `i` stands for the kernel map `f_i(w)` = output after running `w`
/// from the `i`-th reachable state. Index 0 is the initial state; the rest
/// follow in ascending automaton-state order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelSystem {
    base: u32,
    next: Vec<Vec<usize>>,
    v0: Vec<Rational>,
    source_states: Vec<usize>,
}

pub fn kernel_system(d: &Dfao) -> Result<KernelSystem> {
    if !d.is_normalized() {
        return Err(Error::NotNormalized);
    }
    let seen = d.reachable();
    let mut source_states = vec![d.initial()];
    source_states.extend((0..d.state_count()).filter(|&q| seen[q] && q != d.initial()));
    let mut index = vec![usize::MAX; d.state_count()];
    for (i, &q) in source_states.iter().enumerate() {
        index[q] = i;
    }
    let next = source_states
        .iter()
        .map(|&q| d.transitions()[q].iter().map(|&t| index[t]).collect())
        .collect();
    let v0 = source_states.iter().map(|&q| d.output(q).clone()).collect();
    Ok(KernelSystem {
        base: d.base(),
        next,
        v0,
        source_states,
    })
}

impl KernelSystem {
    pub fn base(&self) -> u32 {
        self.base
    }

    /// Number of kernel maps.
    pub fn dim(&self) -> usize {
        self.next.len()
    }

    pub fn delta(&self, i: usize, x: Digit) -> usize {
        self.next[i][x as usize]
    }

    pub fn delta_word(&self, i: usize, word: &[Digit]) -> usize {
        word.iter().fold(i, |q, &x| self.delta(q, x))
    }

    pub fn transitions(&self) -> &[Vec<usize>] {
        &self.next
    }

    pub fn v0(&self) -> &[Rational] {
        &self.v0
    }

    /// Automaton state behind each index.
    pub fn source_states(&self) -> &[usize] {
        &self.source_states
    }

    /// `f_i(w)`.
    pub fn f(&self, i: usize, word: &[Digit]) -> &Rational {
        &self.v0[self.delta_word(i, word)]
    }

    /// `A_x[i][j] = 1` iff `δ(i, x) = j`.
    pub fn a_matrix(&self, x: Digit) -> Matrix {
        let d = self.dim();
        let mut m = Matrix::zeros(d, d);
        for i in 0..d {
            m.set(i, self.delta(i, x), Rational::from_integer(1.into()));
        }
        m
    }

    /// `B = Σ_x A_x`.
    pub fn b_matrix(&self) -> Matrix {
        let d = self.dim();
        let mut m = Matrix::zeros(d, d);
        for (i, row) in self.next.iter().enumerate() {
            for &j in row {
                let v = m.get(i, j) + Rational::from_integer(1.into());
                m.set(i, j, v);
            }
        }
        m
    }

    /// Same transitions with outputs `m − v0`.
    pub fn reflected(&self, m: &Rational) -> KernelSystem {
        KernelSystem {
            v0: self.v0.iter().map(|v| m - v).collect(),
            ..self.clone()
        }
    }

    /// `B·v` without forming `B`.
    pub fn apply_b(&self, v: &[Rational]) -> Vec<Rational> {
        self.next
            .iter()
            .map(|row| row.iter().fold(Rational::zero(), |acc, &j| acc + &v[j]))
            .collect()
    }

    /// Sequence `v0, B v0, B² v0, …, B^{n} v0`.
    pub fn b_powers_v0(&self, n: usize) -> Vec<Vec<Rational>> {
        let mut out = Vec::with_capacity(n + 1);
        out.push(self.v0.clone());
        for t in 0..n {
            let next = self.apply_b(&out[t]);
            out.push(next);
        }
        out
    }
}
