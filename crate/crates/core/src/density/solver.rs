//! Exact limsup by max-ratio dynamic programming.
//!
//! Nodes are `(q, φ)`: automaton state `q` and the phase `φ` of the number
//! of digits still to come after the next one. Reading digit `y` at `(q, φ)`
//! earns `g = Σ_{y'<y} c[δ(q,y')][φ]` in the numerator and `y` in the
//! denominator, then moves to `(δ(q,y), φ−1)`; both are discounted by `1/k`
//! per digit. The limsup is the largest ratio of discounted sums over
//! infinite digit sequences with a nonzero first digit, found by Dinkelbach
//! iteration over `λ` with exact policy iteration for
//! `max Σ k^{-t}(g_t − λ·y_t)`. Witnesses are read off the subgraph of
//! optimal moves.

use num::{One, Signed, Zero};

use super::{candidate_unchecked, validate_witness, witness_bound, Witness};
use crate::asymptotics::AsymptoticTable;
use crate::automaton::{Digit, KernelSystem};
use crate::exact::{int, to_f64, Rational};
use crate::{Error, Result};

struct Mdp {
    k: usize,
    a: usize,
    n: usize,
    next: Vec<usize>,
    gain: Vec<Rational>,
    gain_f: Vec<f64>,
}

/// Float slack comfortably above accumulated rounding.
fn tol(x: f64, y: f64) -> f64 {
    1e-9 * (1.0 + x.abs() + y.abs())
}

impl Mdp {
    fn new(ks: &KernelSystem, table: &AsymptoticTable) -> Self {
        let k = ks.base() as usize;
        let a = table.period() as usize;
        let n = ks.dim() * a;
        let mut next = Vec::with_capacity(n * k);
        let mut gain = Vec::with_capacity(n * k);
        for q in 0..ks.dim() {
            for phi in 0..a {
                let mut acc = Rational::zero();
                for y in 0..k as Digit {
                    let t = ks.delta(q, y);
                    next.push(t * a + (phi + a - 1) % a);
                    gain.push(acc.clone());
                    acc += table.c(t, phi);
                }
            }
        }
        let gain_f = gain.iter().map(to_f64).collect();
        Mdp {
            k,
            a,
            n,
            next,
            gain,
            gain_f,
        }
    }

    fn start(&self, j: usize) -> usize {
        (j + self.a - 1) % self.a
    }

    fn succ(&self, v: usize, y: usize) -> usize {
        self.next[v * self.k + y]
    }

    fn float_values(&self, lambda: f64) -> Vec<f64> {
        let kf = self.k as f64;
        let mut w = vec![0.0; self.n];
        for _ in 0..4000 {
            let mut delta = 0f64;
            let new: Vec<f64> = (0..self.n)
                .map(|v| {
                    (0..self.k)
                        .map(|y| self.gain_f[v * self.k + y] - lambda * y as f64 + w[self.succ(v, y)])
                        .fold(f64::NEG_INFINITY, f64::max)
                        / kf
                })
                .collect();
            for (x, y) in new.iter().zip(&w) {
                delta = delta.max((x - y).abs());
            }
            w = new;
            if delta < 1e-14 {
                break;
            }
        }
        w
    }

    fn float_eval(&self, policy: &[usize]) -> (Vec<f64>, Vec<f64>) {
        let kf = self.k as f64;
        let (mut wn, mut wd) = (vec![0.0; self.n], vec![0.0; self.n]);
        for _ in 0..4000 {
            let mut delta = 0f64;
            for v in 0..self.n {
                let y = policy[v];
                let s = self.succ(v, y);
                let nn = (self.gain_f[v * self.k + y] + wn[s]) / kf;
                let nd = (y as f64 + wd[s]) / kf;
                delta = delta.max((nn - wn[v]).abs()).max((nd - wd[v]).abs());
                wn[v] = nn;
                wd[v] = nd;
            }
            if delta < 1e-15 {
                break;
            }
        }
        (wn, wd)
    }

    /// Warm-start policy from floating-point Dinkelbach iteration.
    fn float_policy(&self) -> Vec<usize> {
        let mut lambda = 0.0;
        let mut policy = vec![0; self.n];
        for _ in 0..200 {
            let w = self.float_values(lambda);
            for (v, p) in policy.iter_mut().enumerate() {
                *p = (0..self.k)
                    .map(|y| (y, self.gain_f[v * self.k + y] - lambda * y as f64 + w[self.succ(v, y)]))
                    .fold((0, f64::NEG_INFINITY), |b, c| if c.1 > b.1 { c } else { b })
                    .0;
            }
            let (wn, wd) = self.float_eval(&policy);
            let best = (0..self.a)
                .flat_map(|j| {
                    let s = self.start(j);
                    (1..self.k).map(move |y| (s, y))
                })
                .map(|(s, y)| {
                    let t = self.succ(s, y);
                    (self.gain_f[s * self.k + y] + wn[t]) / (y as f64 + wd[t])
                })
                .fold(f64::NEG_INFINITY, f64::max);
            if (best - lambda).abs() < 1e-13 {
                break;
            }
            lambda = best;
        }
        policy
    }

    /// Exact discounted numerator and denominator sums under `policy`.
    fn evaluate(&self, policy: &[usize]) -> (Vec<Rational>, Vec<Rational>) {
        let k = int(self.k as i64);
        let kinv = k.recip();
        let mut wn = vec![Rational::zero(); self.n];
        let mut wd = vec![Rational::zero(); self.n];
        let mut state = vec![0u8; self.n];
        for root in 0..self.n {
            if state[root] != 0 {
                continue;
            }
            let mut path = Vec::new();
            let mut v = root;
            while state[v] == 0 {
                state[v] = 1;
                path.push(v);
                v = self.succ(v, policy[v]);
            }
            if state[v] == 1 {
                let pos = path.iter().position(|&x| x == v).unwrap();
                let cycle = path.split_off(pos);
                let (mut an, mut ad) = (Rational::zero(), Rational::zero());
                for &c in &cycle {
                    an = an * &k + &self.gain[c * self.k + policy[c]];
                    ad = ad * &k + int(policy[c] as i64);
                }
                let denom = num::pow(k.clone(), cycle.len()) - Rational::one();
                wn[cycle[0]] = an / &denom;
                wd[cycle[0]] = ad / &denom;
                state[cycle[0]] = 2;
                path.extend(cycle.into_iter().skip(1));
            }
            for &c in path.iter().rev() {
                let y = policy[c];
                let s = self.succ(c, y);
                wn[c] = (&self.gain[c * self.k + y] + &wn[s]) * &kinv;
                wd[c] = (int(y as i64) + &wd[s]) * &kinv;
                state[c] = 2;
            }
        }
        (wn, wd)
    }

    fn q(&self, v: usize, y: usize, lambda: &Rational, w: &[Rational]) -> Rational {
        &self.gain[v * self.k + y] - lambda * int(y as i64) + &w[self.succ(v, y)]
    }

    fn qf(&self, v: usize, y: usize, lambda: f64, wf: &[f64]) -> f64 {
        self.gain_f[v * self.k + y] - lambda * y as f64 + wf[self.succ(v, y)]
    }

    /// One round of policy improvement; true when some node switched.
    fn improve(&self, policy: &mut [usize], lambda: &Rational, w: &[Rational]) -> bool {
        let lf = to_f64(lambda);
        let wf: Vec<f64> = w.iter().map(to_f64).collect();
        let mut changed = false;
        for v in 0..self.n {
            let cur = policy[v];
            let qc = self.qf(v, cur, lf, &wf);
            let candidates: Vec<usize> = (0..self.k)
                .filter(|&y| y != cur && self.qf(v, y, lf, &wf) >= qc - tol(qc, self.qf(v, y, lf, &wf)))
                .collect();
            if candidates.is_empty() {
                continue;
            }
            let mut best = (cur, self.q(v, cur, lambda, w));
            for y in candidates {
                let qy = self.q(v, y, lambda, w);
                if qy > best.1 {
                    best = (y, qy);
                }
            }
            if best.0 != cur {
                policy[v] = best.0;
                changed = true;
            }
        }
        changed
    }

    /// Moves `y` at `v` with `Q(v, y) = max_y' Q(v, y')`, ascending.
    fn tight(&self, policy: &[usize], lambda: &Rational, w: &[Rational]) -> Vec<Vec<usize>> {
        let lf = to_f64(lambda);
        let wf: Vec<f64> = w.iter().map(to_f64).collect();
        (0..self.n)
            .map(|v| {
                let cur = policy[v];
                let qc = self.qf(v, cur, lf, &wf);
                let exact = self.q(v, cur, lambda, w);
                (0..self.k)
                    .filter(|&y| {
                        y == cur || {
                            let qy = self.qf(v, y, lf, &wf);
                            (qy - qc).abs() <= tol(qc, qy) && self.q(v, y, lambda, w) == exact
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

/// Maximizes `s(n)/n` limit points; returns the tie-broken witness.
pub(crate) fn search(ks: &KernelSystem, table: &AsymptoticTable, cap: u64) -> Result<Witness> {
    let mdp = Mdp::new(ks, table);
    let mut policy = mdp.float_policy();
    let (mut wn, mut wd) = mdp.evaluate(&policy);

    // best start move under the current values: (value at λ, ratio, j, y)
    let starts = |wn: &[Rational], wd: &[Rational], lambda: Option<&Rational>| {
        let mut best: Option<(Rational, usize)> = None;
        let mut per_residue = Vec::with_capacity(mdp.a);
        for j in 0..mdp.a {
            let s = mdp.start(j);
            let mut best_j: Option<Rational> = None;
            for y in 1..mdp.k {
                let t = mdp.succ(s, y);
                let num = &mdp.gain[s * mdp.k + y] + &wn[t];
                let den = int(y as i64) + &wd[t];
                let val = match lambda {
                    Some(l) => num - l * den,
                    None => num / den,
                };
                if best_j.as_ref().map_or(true, |b| &val > b) {
                    best_j = Some(val.clone());
                }
                if best.as_ref().map_or(true, |b| val > b.0) {
                    best = Some((val, j * mdp.k + y));
                }
            }
            per_residue.push(best_j.unwrap());
        }
        (best.unwrap(), per_residue)
    };

    let mut lambda = starts(&wn, &wd, None).0 .0;
    let per_residue = loop {
        loop {
            let w: Vec<Rational> = wn.iter().zip(&wd).map(|(n, d)| n - &lambda * d).collect();
            if !mdp.improve(&mut policy, &lambda, &w) {
                break;
            }
            (wn, wd) = mdp.evaluate(&policy);
        }
        let w: Vec<Rational> = wn.iter().zip(&wd).map(|(n, d)| n - &lambda * d).collect();
        let ((v, code), per_residue) = starts(&w, &vec![Rational::zero(); mdp.n], Some(&lambda));
        if v.is_zero() {
            break per_residue;
        }
        if v.is_negative() {
            return Err(Error::Inconsistent("ratio iteration overshot the optimum".into()));
        }
        let (j, y) = (code / mdp.k, code % mdp.k);
        let s = mdp.start(j);
        let t = mdp.succ(s, y);
        lambda = (&mdp.gain[s * mdp.k + y] + &wn[t]) / (int(y as i64) + &wd[t]);
    };

    let w: Vec<Rational> = wn.iter().zip(&wd).map(|(n, d)| n - &lambda * d).collect();
    let tight = mdp.tight(&policy, &lambda, &w);
    let bound = witness_bound(ks.dim(), table.period()) as usize;
    let mut budget = Budget { used: 0, cap };
    for (j, vj) in per_residue.iter().enumerate() {
        if !vj.is_zero() {
            continue;
        }
        let s = mdp.start(j);
        let first: Vec<usize> = (1..mdp.k)
            .filter(|&y| mdp.q(s, y, &lambda, &w).is_zero())
            .collect();
        if let Some((prefix, cycle)) = witness_words(&mdp, &tight, s, &first, bound, &mut budget)? {
            let prefix: Vec<Digit> = prefix.into_iter().map(|y| y as Digit).collect();
            let cycle: Vec<Digit> = cycle.into_iter().map(|y| y as Digit).collect();
            validate_witness(ks, table.period(), &prefix, &cycle, j as u64)?;
            let ell = ks.delta_word(0, &prefix);
            let value = candidate_unchecked(ks, table, &prefix, &cycle, ell, j as u64);
            if value != lambda {
                return Err(Error::Inconsistent(format!(
                    "witness value {value} differs from the optimum {lambda}"
                )));
            }
            return Ok(Witness {
                prefix,
                cycle,
                residue: j as u64,
                value,
            });
        }
    }
    Err(Error::Inconsistent(format!(
        "no optimal witness of length at most {bound}"
    )))
}

struct Budget {
    used: u64,
    cap: u64,
}

impl Budget {
    fn spend(&mut self, n: usize) -> Result<()> {
        self.used += n as u64;
        if self.used > self.cap {
            return Err(Error::Infeasible {
                needed: format!("more than {}", self.cap),
                cap: self.cap,
            });
        }
        Ok(())
    }
}

/// Shortest closed walk through `u` in the tight graph.
fn shortest_cycle(mdp: &Mdp, tight: &[Vec<usize>], u: usize, budget: &mut Budget) -> Result<Option<usize>> {
    let mut dist = vec![usize::MAX; mdp.n];
    let mut queue = std::collections::VecDeque::new();
    for &y in &tight[u] {
        let t = mdp.succ(u, y);
        if t == u {
            return Ok(Some(1));
        }
        if dist[t] == usize::MAX {
            dist[t] = 1;
            queue.push_back(t);
        }
    }
    budget.spend(mdp.n)?;
    while let Some(v) = queue.pop_front() {
        for &y in &tight[v] {
            let t = mdp.succ(v, y);
            if t == u {
                return Ok(Some(dist[v] + 1));
            }
            if dist[t] == usize::MAX {
                dist[t] = dist[v] + 1;
                queue.push_back(t);
            }
        }
    }
    Ok(None)
}

/// Least `(|A|+|B|, A, B)` among tight paths `A` from `start` (first move in
/// `first`) and tight closed walks `B` at the end of `A`, with both lengths
/// positive multiples of `a` and `|A|+|B| ≤ bound`.
#[allow(clippy::type_complexity)]
fn witness_words(
    mdp: &Mdp,
    tight: &[Vec<usize>],
    start: usize,
    first: &[usize],
    bound: usize,
    budget: &mut Budget,
) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
    let a = mdp.a;
    let mut cyc: Vec<Option<Option<usize>>> = vec![None; mdp.n];
    let mut cycle_len = |u: usize, budget: &mut Budget| -> Result<Option<usize>> {
        if cyc[u].is_none() {
            cyc[u] = Some(shortest_cycle(mdp, tight, u, budget)?);
        }
        Ok(cyc[u].unwrap())
    };

    // reachable sets by exact length; best total length
    let mut reach = vec![false; mdp.n];
    for &y in first {
        reach[mdp.succ(start, y)] = true;
    }
    let mut best: Option<usize> = None;
    let mut p = 1;
    while p + a <= bound && best.map_or(true, |b| p + a < b) {
        if p % a == 0 {
            for u in (0..mdp.n).filter(|&u| reach[u]) {
                if let Some(c) = cycle_len(u, budget)? {
                    if p + c <= bound && best.map_or(true, |b| p + c < b) {
                        best = Some(p + c);
                    }
                }
            }
        }
        let mut nr = vec![false; mdp.n];
        for v in (0..mdp.n).filter(|&v| reach[v]) {
            for &y in &tight[v] {
                nr[mdp.succ(v, y)] = true;
            }
        }
        budget.spend(mdp.n)?;
        reach = nr;
        p += 1;
    }
    let Some(total) = best else {
        return Ok(None);
    };

    // good[t][v]: from v after t digits, an optimal endpoint is reachable
    let max_t = total - a;
    let mut endpoint = vec![vec![false; mdp.n]; max_t + 1];
    for (t, row) in endpoint.iter_mut().enumerate().skip(a).step_by(a) {
        for (v, e) in row.iter_mut().enumerate() {
            *e = cycle_len(v, budget)? == Some(total - t);
        }
    }
    let mut good = vec![vec![false; mdp.n]; max_t + 2];
    for t in (1..=max_t).rev() {
        for v in 0..mdp.n {
            good[t][v] = endpoint[t][v] || tight[v].iter().any(|&y| good[t + 1][mdp.succ(v, y)]);
        }
        budget.spend(mdp.n)?;
    }

    let mut prefix = Vec::new();
    let y = *first
        .iter()
        .find(|&&y| good[1][mdp.succ(start, y)])
        .ok_or_else(|| Error::Inconsistent("witness search lost its path".into()))?;
    prefix.push(y);
    let mut v = mdp.succ(start, y);
    let mut t = 1;
    while !endpoint[t][v] {
        let y = *tight[v]
            .iter()
            .find(|&&y| good[t + 1][mdp.succ(v, y)])
            .ok_or_else(|| Error::Inconsistent("witness search lost its path".into()))?;
        prefix.push(y);
        v = mdp.succ(v, y);
        t += 1;
    }

    // lexicographically least closed walk of the remaining length
    let u = v;
    let len = total - t;
    let mut back = vec![vec![false; mdp.n]; len + 1];
    back[0][u] = true;
    for r in 1..=len {
        for w in 0..mdp.n {
            back[r][w] = tight[w].iter().any(|&y| back[r - 1][mdp.succ(w, y)]);
        }
        budget.spend(mdp.n)?;
    }
    let mut cycle = Vec::with_capacity(len);
    let mut v = u;
    for r in (1..=len).rev() {
        let y = *tight[v]
            .iter()
            .find(|&&y| back[r - 1][mdp.succ(v, y)])
            .ok_or_else(|| Error::Inconsistent("cycle search lost its path".into()))?;
        cycle.push(y);
        v = mdp.succ(v, y);
    }
    Ok(Some((prefix, cycle)))
}
