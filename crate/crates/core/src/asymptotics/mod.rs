//! Period, census constants and exact partial sums.
//!
//! For state `i` and residue `j`, `c[i][j]` is the limit of
//! `s_i(k^{an+j}) / k^{an+j}`, where `s_i(k^m)` sums `f_i` over all words of
//! length `m`. It satisfies `c_j = P·B^j·v0 / k^j` with `P` the projector
//! onto the `k^a`-eigenspace of `B^a`, and `B^m c_j = k^m c_{(j+m) mod a}`.

mod markov;
mod period;

use num::{BigUint, Zero};

use crate::automaton::{digits, kernel_system, Dfao, KernelSystem};
use crate::exact::{divide_linear, eval_poly_at_matrix, int, mat_pow, minimal_polynomial, Matrix, Rational};
use crate::{Error, Result};

pub use period::{period, period_bound, period_from_cycles, period_spectral};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AsymptoticTable {
    period: u64,
    census: Vec<Vec<Rational>>,
    projector: Matrix,
}

impl AsymptoticTable {
    pub fn period(&self) -> u64 {
        self.period
    }

    /// `c[i][j]`.
    pub fn c(&self, i: usize, j: usize) -> &Rational {
        &self.census[i][j]
    }

    pub fn census(&self) -> &[Vec<Rational>] {
        &self.census
    }

    /// Column `c_j`.
    pub fn column(&self, j: usize) -> Vec<Rational> {
        self.census.iter().map(|row| row[j].clone()).collect()
    }

    pub fn projector(&self) -> &Matrix {
        &self.projector
    }

    /// Table of `M − h`: constants are linear in the outputs and the
    /// constant sequence `M` has every constant equal to `M`.
    pub fn reflected(&self, m: &Rational) -> AsymptoticTable {
        AsymptoticTable {
            period: self.period,
            census: self.census.iter().map(|row| row.iter().map(|c| m - c).collect()).collect(),
            projector: self.projector.clone(),
        }
    }

    /// Whether the initial state's constants all vanish.
    pub fn initial_row_is_zero(&self) -> bool {
        self.census[0].iter().all(Zero::is_zero)
    }
}

/// Which construction of the projector to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProjectorRoute {
    /// Spectral for small systems, Markov otherwise.
    Auto,
    /// `q₀(B^a)/q₀(k^a)` from the minimal polynomial of `B^a`.
    Spectral,
    /// Stationary distributions and absorption probabilities of `B/k`.
    Markov,
}

pub fn census_constants(ks: &KernelSystem, a: u64) -> Result<AsymptoticTable> {
    census_constants_via(ks, a, ProjectorRoute::Auto)
}

pub fn census_constants_via(ks: &KernelSystem, a: u64, route: ProjectorRoute) -> Result<AsymptoticTable> {
    if a == 0 {
        return Err(Error::Domain("period must be positive".into()));
    }
    let d = ks.dim();
    let k = int(ks.base() as i64);
    let spectral = match route {
        ProjectorRoute::Auto => d <= period::SPECTRAL_LIMIT,
        ProjectorRoute::Spectral => true,
        ProjectorRoute::Markov => false,
    };
    let powers = ks.b_powers_v0(a as usize - 1);
    let mut census = vec![Vec::with_capacity(a as usize); d];
    let projector = if spectral {
        let p = spectral_projector(ks, a)?;
        for (j, v) in powers.iter().enumerate() {
            let scale = num::pow(k.clone(), j).recip();
            for (i, x) in p.mul_vec(v)?.into_iter().enumerate() {
                census[i].push(x * &scale);
            }
        }
        p
    } else {
        let per = markov::peripheral(ks, a)?;
        for (j, v) in powers.iter().enumerate() {
            let scale = num::pow(k.clone(), j).recip();
            for (i, x) in per.apply(v).into_iter().enumerate() {
                census[i].push(x * &scale);
            }
        }
        per.projector(d)
    };
    Ok(AsymptoticTable {
        period: a,
        census,
        projector,
    })
}

/// `q₀(B^a)/q₀(k^a)` where `q = (x − k^a)·q₀` is the minimal polynomial of `B^a`.
fn spectral_projector(ks: &KernelSystem, a: u64) -> Result<Matrix> {
    let ba = mat_pow(&ks.b_matrix(), a)?;
    let q = minimal_polynomial(&ba)?;
    let ka = num::pow(int(ks.base() as i64), a as usize);
    let (q0, rem) = divide_linear(&q, &ka)?;
    if !rem.is_zero() {
        return Err(Error::Spectral(format!("{ka} is not an eigenvalue of B^{a}")));
    }
    let lambda = q0.eval(&ka);
    if lambda.is_zero() {
        return Err(Error::NotSemisimple(format!("{ka} is a repeated root of the minimal polynomial of B^{a}")));
    }
    Ok(eval_poly_at_matrix(&q0, &ba)?.scale(&lambda.recip()))
}

/// Period and census table of a normalized automaton.
pub fn analyze_asymptotics(d: &Dfao) -> Result<(KernelSystem, AsymptoticTable)> {
    let ks = kernel_system(d)?;
    let a = period(&ks)?;
    let table = census_constants(&ks, a)?;
    Ok((ks, table))
}

/// `s(n) = Σ_{m<n} h(m)` by the prefix decomposition over the digits of `n`.
pub fn partial_sum_exact(d: &Dfao, n: &BigUint) -> Result<Rational> {
    let ks = kernel_system(d)?;
    Ok(partial_sum_kernel(&ks, n))
}

pub(crate) fn partial_sum_kernel(ks: &KernelSystem, n: &BigUint) -> Rational {
    let w = digits(n, ks.base());
    if w.is_empty() {
        return Rational::zero();
    }
    let powers = ks.b_powers_v0(w.len() - 1);
    let mut total = Rational::zero();
    let mut q = 0;
    for (t, &digit) in w.iter().enumerate() {
        let rest = &powers[w.len() - t - 1];
        for x in 0..digit {
            total += &rest[ks.delta(q, x)];
        }
        q = ks.delta(q, digit);
    }
    total
}

/// `s(n)/n` for `n ≥ 1`.
pub fn mean_at(ks: &KernelSystem, n: &BigUint) -> Rational {
    partial_sum_kernel(ks, n) / Rational::from_integer(n.clone().into())
}

/// `k^{an+j}`.
pub fn census_point(k: u32, a: u64, n: u64, j: u64) -> BigUint {
    num::pow(BigUint::from(k), (a * n + j) as usize)
}

impl AsymptoticTable {
    /// The spectral identities `P² = P` and `B^a P = k^a P`.
    pub fn check_projector(&self, ks: &KernelSystem) -> Result<bool> {
        let p = &self.projector;
        let ba = mat_pow(&ks.b_matrix(), self.period)?;
        let ka = num::pow(int(ks.base() as i64), self.period as usize);
        Ok(&p.mul(p)? == p && ba.mul(p)? == p.scale(&ka))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::parse_dfao;
    use crate::exact::ratio;
    use num::One;

    const EVEN_LEN: &str = "base 2\nstates 3\ninitial 0\nstate 0 output 1 -> 0 1\nstate 1 output 0 -> 2 2\nstate 2 output 1 -> 1 1\n";
    const TERNARY: &str = "base 3\nstates 3\ninitial 0\nstate 0 output 0 -> 0 2 1\nstate 1 output 0 -> 1 1 1\nstate 2 output 1 -> 2 2 2\n";

    fn table(text: &str, route: ProjectorRoute) -> (KernelSystem, AsymptoticTable) {
        let ks = kernel_system(&parse_dfao(text).unwrap()).unwrap();
        let a = period(&ks).unwrap();
        let t = census_constants_via(&ks, a, route).unwrap();
        (ks, t)
    }

    #[test]
    fn ternary_constants() {
        for route in [ProjectorRoute::Spectral, ProjectorRoute::Markov] {
            let (ks, t) = table(TERNARY, route);
            assert_eq!(t.period(), 1);
            assert_eq!(t.column(0), vec![ratio(1, 2), int(0), int(1)]);
            assert!(t.check_projector(&ks).unwrap());
        }
    }

    #[test]
    fn even_len_constants() {
        for route in [ProjectorRoute::Spectral, ProjectorRoute::Markov] {
            let (ks, t) = table(EVEN_LEN, route);
            assert_eq!(t.period(), 2);
            assert_eq!(t.c(0, 0), &ratio(2, 3));
            assert_eq!(t.c(0, 1), &ratio(1, 3));
            assert!(t.check_projector(&ks).unwrap());
        }
    }

    #[test]
    fn zero_outputs() {
        let (_, t) = table("base 2\nstates 2\ninitial 0\nstate 0 output 0 -> 0 1\nstate 1 output 0 -> 1 0\n", ProjectorRoute::Auto);
        assert!(t.census().iter().flatten().all(Zero::is_zero));
        assert!(t.initial_row_is_zero());
    }

    #[test]
    fn doubled_period_restricts() {
        let (ks, t) = table(EVEN_LEN, ProjectorRoute::Auto);
        for route in [ProjectorRoute::Spectral, ProjectorRoute::Markov] {
            let t4 = census_constants_via(&ks, 4, route).unwrap();
            for i in 0..ks.dim() {
                assert_eq!(&t4.census()[i][..2], &t.census()[i][..]);
            }
        }
    }

    #[test]
    fn partial_sums() {
        let even_len = parse_dfao(EVEN_LEN).unwrap();
        assert_eq!(partial_sum_exact(&even_len, &BigUint::from(16u32)).unwrap(), int(11));
        assert_eq!(partial_sum_exact(&even_len, &BigUint::zero()).unwrap(), int(0));
        let ternary = parse_dfao(TERNARY).unwrap();
        assert_eq!(partial_sum_exact(&ternary, &BigUint::from(9u32)).unwrap(), int(4));
        let mut naive = Rational::zero();
        for n in 0..500u64 {
            assert_eq!(partial_sum_exact(&even_len, &BigUint::from(n)).unwrap(), naive);
            naive += even_len.eval(n);
        }
        assert!(partial_sum_exact(&parse_dfao("base 2\nstates 2\ninitial 0\nstate 0 output 0 -> 1 1\nstate 1 output 1 -> 0 0\n").unwrap(), &BigUint::one()).is_err());
    }
}
