//! Literal enumeration of every bounded `(A, B, j)`.

use num::{BigUint, One, ToPrimitive, Zero};
use rayon::prelude::*;

use super::{candidate_unchecked, witness_bound, Witness};
use crate::asymptotics::AsymptoticTable;
use crate::automaton::{Digit, KernelSystem};
use crate::{Error, Result};

/// Number of `(A, B, j)` triples with `|A|, |B|` positive multiples of `a`,
/// `|A|+|B| ≤ (2d+1)a` and `A` free of leading zeros.
pub(crate) fn candidate_count(k: u32, d: usize, a: u64) -> BigUint {
    let bound = witness_bound(d, a);
    let k = BigUint::from(k);
    let mut total = BigUint::zero();
    let mut p = a;
    while p + a <= bound {
        let prefixes = (&k - BigUint::one()) * num::pow(k.clone(), p as usize - 1);
        let mut q = a;
        while p + q <= bound {
            total += &prefixes * num::pow(k.clone(), q as usize);
            q += a;
        }
        p += a;
    }
    total * BigUint::from(a)
}

fn word(mut index: u64, len: usize, k: u64) -> Vec<Digit> {
    let mut w = vec![0; len];
    for slot in w.iter_mut().rev() {
        *slot = (index % k) as Digit;
        index /= k;
    }
    w
}

/// Orders candidates: larger value first, then smaller `(j, |A|+|B|, A, B)`.
fn better(x: &Witness, y: &Witness) -> bool {
    match x.value.cmp(&y.value) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => {
            (x.residue, x.total_len(), &x.prefix, &x.cycle) < (y.residue, y.total_len(), &y.prefix, &y.cycle)
        }
    }
}

fn pick(x: Option<Witness>, y: Option<Witness>) -> Option<Witness> {
    match (x, y) {
        (Some(x), Some(y)) => Some(if better(&y, &x) { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}

pub(crate) fn search(ks: &KernelSystem, table: &AsymptoticTable, cap: u64) -> Result<Witness> {
    let a = table.period();
    let needed = candidate_count(ks.base(), ks.dim(), a);
    if needed > BigUint::from(cap) {
        return Err(Error::Infeasible {
            needed: needed.to_string(),
            cap,
        });
    }
    let bound = witness_bound(ks.dim(), a) as usize;
    let k = ks.base() as u64;
    let a = a as usize;
    let mut best = None;
    for j in 0..a as u64 {
        for p in (a..=bound - a).step_by(a) {
            let count = (k - 1) * k.pow(p as u32 - 1);
            let found = (0..count)
                .into_par_iter()
                .map(|i| {
                    let prefix = word(i + k.pow(p as u32 - 1), p, k);
                    let ell = ks.delta_word(0, &prefix);
                    let mut local: Option<Witness> = None;
                    for q in (a..=bound - p).step_by(a) {
                        for b in 0..k.pow(q as u32) {
                            let cycle = word(b, q, k);
                            if ks.delta_word(ell, &cycle) != ell {
                                continue;
                            }
                            let value = candidate_unchecked(ks, table, &prefix, &cycle, ell, j);
                            let cand = Witness {
                                prefix: prefix.clone(),
                                cycle,
                                residue: j,
                                value,
                            };
                            local = pick(local, Some(cand));
                        }
                    }
                    local
                })
                .reduce(|| None, pick);
            best = pick(best, found);
        }
    }
    best.ok_or_else(|| Error::Inconsistent(format!("no candidate within length {bound}; count {}", needed.to_u64().unwrap_or(0))))
}
