//! Peripheral projector from the chain `B/k`, for systems too large for the
//! minimal-polynomial route.
//!
//! Each closed class `D` of period `p` splits into cyclic subclasses
//! `D_0 … D_{p-1}`. With `M = (B/k)^a` and `p | a`,
//! `P = Σ_{D,r} h_{D_r} π_{D_r}ᵀ`, where `π_{D_r} = p·π_D` on `D_r` and
//! `h_{D_r}(i)` is the limiting probability of sitting in `D_r` at times
//! `≡ 0 (mod a)` when started from `i`.

use num::{One, Zero};

use super::period::Graph;
use crate::automaton::KernelSystem;
use crate::exact::{int, Matrix, Rational};
use crate::{Error, Result};

pub(crate) struct Peripheral {
    /// `(weights, absorption)` per cyclic subclass: `P = Σ absorption·weightsᵀ`.
    pub(crate) parts: Vec<(Vec<(usize, Rational)>, Vec<Rational>)>,
}

impl Peripheral {
    pub(crate) fn projector(&self, d: usize) -> Matrix {
        let mut p = Matrix::zeros(d, d);
        for (weights, absorb) in &self.parts {
            for (i, h) in absorb.iter().enumerate() {
                if h.is_zero() {
                    continue;
                }
                for (w, pi) in weights {
                    let v = p.get(i, *w) + h * pi;
                    p.set(i, *w, v);
                }
            }
        }
        p
    }

    /// `P·v`.
    pub(crate) fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); v.len()];
        for (weights, absorb) in &self.parts {
            let s = weights.iter().fold(Rational::zero(), |acc, (w, pi)| acc + pi * &v[*w]);
            if s.is_zero() {
                continue;
            }
            for (o, h) in out.iter_mut().zip(absorb) {
                if !h.is_zero() {
                    *o += h * &s;
                }
            }
        }
        out
    }
}

pub(crate) fn peripheral(ks: &KernelSystem, a: u64) -> Result<Peripheral> {
    let d = ks.dim();
    let k = ks.base() as usize;
    let inv_k = Rational::new(1.into(), (k as i64).into());
    let graph = Graph::new(ks.transitions());
    let classes = graph.closed_classes();

    // subclass label and period for closed states
    let mut closed_at: Vec<Option<(usize, usize)>> = vec![None; d];
    let mut periods = Vec::new();
    for (c, class) in classes.iter().enumerate() {
        let p = graph.class_period(class) as usize;
        if a as usize % p != 0 {
            return Err(Error::Spectral(format!("class period {p} does not divide a = {a}")));
        }
        for (v, level) in levels(ks, class) {
            closed_at[v] = Some((c, level % p));
        }
        periods.push(p);
    }

    // stationary distribution of B/k on each closed class
    let mut stationary = Vec::new();
    for class in &classes {
        let mut pos = vec![usize::MAX; d];
        for (i, &v) in class.iter().enumerate() {
            pos[v] = i;
        }
        let n = class.len();
        let mut rows: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); n];
        for (i, &v) in class.iter().enumerate() {
            for &w in &ks.transitions()[v] {
                push(&mut rows[pos[w]], i, inv_k.clone());
            }
            push(&mut rows[i], i, -Rational::one());
        }
        rows[0] = (0..n).map(|i| (i, Rational::one())).collect();
        let mut rhs = vec![Rational::zero(); n];
        rhs[0] = Rational::one();
        let pi = solve(&rows, &[rhs])?.pop().unwrap();
        stationary.push(pi);
    }

    // absorption into each subclass, for transient states and phases t mod a
    let transient: Vec<usize> = (0..d).filter(|&v| closed_at[v].is_none()).collect();
    let a = a as usize;
    let mut tpos = vec![usize::MAX; d];
    for (i, &v) in transient.iter().enumerate() {
        tpos[v] = i;
    }
    let unknowns = transient.len() * a;
    let var = |i: usize, t: usize| i * a + t;
    let mut rows: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); unknowns];
    for (i, &v) in transient.iter().enumerate() {
        for t in 0..a {
            let row = &mut rows[var(i, t)];
            push(row, var(i, t), Rational::one());
            for &w in &ks.transitions()[v] {
                if tpos[w] != usize::MAX {
                    push(row, var(tpos[w], (t + 1) % a), -inv_k.clone());
                }
            }
        }
    }
    let targets: Vec<(usize, usize)> = classes
        .iter()
        .enumerate()
        .flat_map(|(c, _)| (0..periods[c]).map(move |r| (c, r)))
        .collect();
    // value of f_r(w, t) for closed w: [σ(w) − t ≡ r (mod p)] inside class c
    let closed_value = |w: usize, t: usize, (c, r): (usize, usize)| -> bool {
        match closed_at[w] {
            Some((cw, sigma)) if cw == c => {
                let p = periods[c];
                (sigma + p * a - t % p) % p == r
            }
            _ => false,
        }
    };
    let rhs: Vec<Vec<Rational>> = targets
        .iter()
        .map(|&target| {
            let mut b = vec![Rational::zero(); unknowns];
            for (i, &v) in transient.iter().enumerate() {
                for t in 0..a {
                    let hits = ks.transitions()[v]
                        .iter()
                        .filter(|&&w| tpos[w] == usize::MAX && closed_value(w, (t + 1) % a, target))
                        .count();
                    b[var(i, t)] = &inv_k * int(hits as i64);
                }
            }
            b
        })
        .collect();
    let solutions = if unknowns == 0 {
        vec![Vec::new(); targets.len()]
    } else {
        solve(&rows, &rhs)?
    };

    let parts = targets
        .iter()
        .zip(solutions)
        .map(|(&(c, r), sol)| {
            let p = periods[c];
            let weights: Vec<(usize, Rational)> = classes[c]
                .iter()
                .zip(&stationary[c])
                .filter(|(&w, _)| closed_at[w] == Some((c, r)))
                .map(|(&w, pi)| (w, pi * int(p as i64)))
                .collect();
            let absorb: Vec<Rational> = (0..d)
                .map(|v| {
                    if tpos[v] != usize::MAX {
                        sol[var(tpos[v], 0)].clone()
                    } else if closed_value(v, 0, (c, r)) {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect();
            (weights, absorb)
        })
        .collect();
    Ok(Peripheral { parts })
}

fn push(row: &mut Vec<(usize, Rational)>, col: usize, v: Rational) {
    match row.iter_mut().find(|(c, _)| *c == col) {
        Some((_, x)) => *x += v,
        None => row.push((col, v)),
    }
}

/// BFS level of each class member from the class's smallest member.
fn levels(ks: &KernelSystem, class: &[usize]) -> Vec<(usize, usize)> {
    let mut level = std::collections::HashMap::new();
    level.insert(class[0], 0usize);
    let mut queue = std::collections::VecDeque::from([class[0]]);
    while let Some(v) = queue.pop_front() {
        let l = level[&v];
        for &w in &ks.transitions()[v] {
            level.entry(w).or_insert_with(|| {
                queue.push_back(w);
                l + 1
            });
        }
    }
    class.iter().map(|&v| (v, level[&v])).collect()
}

/// Solves the square system given by sparse `rows` for each right-hand
/// side: a floating-point solve, rational reconstruction, and exact
/// verification, falling back to exact elimination.
pub(crate) fn solve(rows: &[Vec<(usize, Rational)>], rhs: &[Vec<Rational>]) -> Result<Vec<Vec<Rational>>> {
    let n = rows.len();
    let mut dense = vec![vec![0f64; n]; n];
    for (i, row) in rows.iter().enumerate() {
        for (j, v) in row {
            dense[i][*j] = crate::exact::to_f64(v);
        }
    }
    let lu = FloatLu::new(dense);
    let mut out = Vec::with_capacity(rhs.len());
    for b in rhs {
        let guess = lu.as_ref().and_then(|lu| {
            let x = lu.solve(b.iter().map(crate::exact::to_f64).collect());
            x.iter().map(|&v| reconstruct(v)).collect::<Option<Vec<_>>>()
        });
        let x = match guess {
            Some(x) if satisfies(rows, b, &x) => x,
            _ => exact_solve(rows, b)?,
        };
        out.push(x);
    }
    Ok(out)
}

fn satisfies(rows: &[Vec<(usize, Rational)>], b: &[Rational], x: &[Rational]) -> bool {
    rows.iter()
        .zip(b)
        .all(|(row, bi)| &row.iter().fold(Rational::zero(), |acc, (j, v)| acc + v * &x[*j]) == bi)
}

/// Simplest convergent of `x` within `1e-9`.
fn reconstruct(x: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let neg = x < 0.0;
    let target = x.abs();
    let mut v = target;
    let (mut p0, mut q0, mut p1, mut q1): (i128, i128, i128, i128) = (0, 1, 1, 0);
    for _ in 0..40 {
        let a = v.floor();
        if a > 1e12 {
            return None;
        }
        let a = a as i128;
        (p0, q0, p1, q1) = (p1, q1, a * p1 + p0, a * q1 + q0);
        if q1 > 1 << 40 {
            return None;
        }
        if (p1 as f64 / q1 as f64 - target).abs() <= 1e-9 {
            let r = Rational::new(p1.into(), q1.into());
            return Some(if neg { -r } else { r });
        }
        let frac = v - v.floor();
        if frac == 0.0 {
            return None;
        }
        v = 1.0 / frac;
    }
    None
}

struct FloatLu {
    lu: Vec<Vec<f64>>,
    perm: Vec<usize>,
}

impl FloatLu {
    fn new(mut m: Vec<Vec<f64>>) -> Option<Self> {
        let n = m.len();
        let mut perm: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let pivot = (col..n).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
            if m[pivot][col].abs() < 1e-300 {
                return None;
            }
            m.swap(col, pivot);
            perm.swap(col, pivot);
            for r in col + 1..n {
                let f = m[r][col] / m[col][col];
                m[r][col] = f;
                if f != 0.0 {
                    for c in col + 1..n {
                        m[r][c] -= f * m[col][c];
                    }
                }
            }
        }
        Some(FloatLu { lu: m, perm })
    }

    fn solve(&self, b: Vec<f64>) -> Vec<f64> {
        let n = b.len();
        let mut y: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                y[i] -= self.lu[i][j] * y[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                y[i] -= self.lu[i][j] * y[j];
            }
            y[i] /= self.lu[i][i];
        }
        y
    }
}

/// Dense exact Gauss–Jordan elimination.
fn exact_solve(rows: &[Vec<(usize, Rational)>], b: &[Rational]) -> Result<Vec<Rational>> {
    let n = rows.len();
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut dense = vec![Rational::zero(); n + 1];
            for (j, v) in row {
                dense[*j] += v;
            }
            dense[n] = bi.clone();
            dense
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !m[r][col].is_zero())
            .ok_or_else(|| Error::Inconsistent("singular linear system".into()))?;
        m.swap(col, pivot);
        let inv = m[col][col].recip();
        for c in col..=n {
            m[col][c] = &m[col][c] * &inv;
        }
        let pivot_row = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for c in col..=n {
                if !pivot_row[c].is_zero() {
                    row[c] -= &f * &pivot_row[c];
                }
            }
        }
    }
    Ok(m.into_iter().map(|mut row| row.pop().unwrap()).collect())
}
