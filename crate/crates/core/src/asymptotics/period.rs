use num::integer::lcm;
use num::{BigUint, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::automaton::KernelSystem;
use crate::exact::{int, minimal_polynomial, poly_divides, totient, Polynomial};
use crate::{Error, Result};

/// Dimension up to which the spectral route is used by default.
pub(crate) const SPECTRAL_LIMIT: usize = 16;

/// Least `a` such that every eigenvalue of `B` of modulus `k` is `k·ω`
/// with `ω^a = 1`.
///
/// Small systems use cyclotomic divisibility of the minimal polynomial;
/// large ones use the cycle structure of the transition graph. Both give
/// the same number.
pub fn period(ks: &KernelSystem) -> Result<u64> {
    let a = if ks.dim() <= SPECTRAL_LIMIT {
        period_spectral(ks)?
    } else {
        period_from_cycles(ks)
    };
    if !(period_bound(ks.dim()) % BigUint::from(a)).is_zero() {
        return Err(Error::Spectral(format!(
            "period {a} does not divide the bound {}",
            period_bound(ks.dim())
        )));
    }
    Ok(a)
}

/// `lcm{ n : φ(n) ≤ d, Φ_n | m(kx) }` where `m` is the minimal polynomial of `B`.
pub fn period_spectral(ks: &KernelSystem) -> Result<u64> {
    let m = minimal_polynomial(&ks.b_matrix())?;
    let k = int(ks.base() as i64);
    if !m.eval(&k).is_zero() {
        return Err(Error::Spectral(format!(
            "{k} is not a root of the minimal polynomial {m}"
        )));
    }
    let g = m.scale_argument(&k);
    let deg = g.degree().unwrap_or(0) as u64;
    let limit = 2 * deg * deg + 2;
    // Φ_n for every n ≤ limit with φ(n) ≤ deg; divisors of such n qualify too
    let mut cyclo: Vec<Option<Polynomial>> = vec![None; limit as usize + 1];
    let mut a = 1u64;
    for n in 1..=limit {
        if totient(n) > deg {
            continue;
        }
        let mut p = Polynomial::x_pow_minus_one(n as usize);
        for d in (1..n).filter(|d| n % d == 0) {
            let phi_d = cyclo[d as usize].as_ref().expect("divisor has smaller totient");
            p = p.div_rem(phi_d)?.0;
        }
        if poly_divides(&p, &g)? {
            a = lcm(a, n);
        }
        cyclo[n as usize] = Some(p);
    }
    Ok(a)
}

/// Period of the stochastic matrix `B/k`: the lcm of the periods of its
/// closed strongly connected classes.
pub fn period_from_cycles(ks: &KernelSystem) -> u64 {
    let graph = Graph::new(ks.transitions());
    graph
        .closed_classes()
        .iter()
        .map(|class| graph.class_period(class))
        .fold(1, lcm)
}

/// `∏_{p ≤ d} p^{⌊log_p d⌋}`, which every period divides.
pub fn period_bound(d: usize) -> BigUint {
    let d = d as u64;
    let mut bound = BigUint::from(1u32);
    for p in (2..=d).filter(|&p| (2..p).take_while(|q| q * q <= p).all(|q| p % q != 0)) {
        let mut pk = p;
        while pk * p <= d {
            pk *= p;
        }
        bound *= pk;
    }
    bound
}

/// Directed graph on kernel indices, one edge per digit.
pub(crate) struct Graph {
    succ: Vec<Vec<usize>>,
}

impl Graph {
    pub(crate) fn new(transitions: &[Vec<usize>]) -> Self {
        let succ = transitions
            .iter()
            .map(|row| {
                let mut r = row.clone();
                r.sort_unstable();
                r.dedup();
                r
            })
            .collect();
        Graph { succ }
    }

    /// Strongly connected components, each sorted, in ascending order.
    pub(crate) fn components(&self) -> Vec<Vec<usize>> {
        let edges = self
            .succ
            .iter()
            .enumerate()
            .flat_map(|(v, row)| row.iter().map(move |&w| (v as u32, w as u32)));
        let mut g = DiGraph::<(), ()>::from_edges(edges);
        while g.node_count() < self.succ.len() {
            g.add_node(());
        }
        let mut out: Vec<Vec<usize>> = tarjan_scc(&g)
            .into_iter()
            .map(|c| {
                let mut c: Vec<usize> = c.into_iter().map(|n| n.index()).collect();
                c.sort_unstable();
                c
            })
            .collect();
        out.sort();
        out
    }

    /// Components with no edge leaving them, sorted by smallest member.
    pub(crate) fn closed_classes(&self) -> Vec<Vec<usize>> {
        let comps = self.components();
        let mut comp_of = vec![0; self.succ.len()];
        for (c, comp) in comps.iter().enumerate() {
            for &v in comp {
                comp_of[v] = c;
            }
        }
        comps
            .into_iter()
            .enumerate()
            .filter(|(c, comp)| comp.iter().all(|&v| self.succ[v].iter().all(|&w| comp_of[w] == *c)))
            .map(|(_, comp)| comp)
            .collect()
    }

    /// gcd of cycle lengths inside a strongly connected class.
    pub(crate) fn class_period(&self, class: &[usize]) -> u64 {
        let mut level = vec![usize::MAX; self.succ.len()];
        let mut member = vec![false; self.succ.len()];
        for &v in class {
            member[v] = true;
        }
        level[class[0]] = 0;
        let mut queue = std::collections::VecDeque::from([class[0]]);
        let mut g = 0u64;
        while let Some(v) = queue.pop_front() {
            for &w in &self.succ[v] {
                if !member[w] {
                    continue;
                }
                if level[w] == usize::MAX {
                    level[w] = level[v] + 1;
                    queue.push_back(w);
                } else {
                    let diff = (level[v] + 1).abs_diff(level[w]) as u64;
                    g = num::integer::gcd(g, diff);
                }
            }
        }
        g.max(1)
    }
}
