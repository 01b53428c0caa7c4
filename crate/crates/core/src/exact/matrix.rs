use std::fmt;

use num::{One, Zero};

use super::{int, Polynomial, Rational};
use crate::{Error, Result};

/// Dense row-major matrix of rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience constructor for integer matrices. Panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&v| int(v)).collect())
                .collect(),
        )
        .expect("rectangular rows")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(l, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if self.cols != v.len() {
            return Err(Error::Dimension(format!(
                "cannot apply {}x{} to a vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, _)| !a.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(&Rational, &Rational) -> Rational) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "shape {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: &Rational) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    fn require_square(&self, what: &str) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::Dimension(format!(
                "{what} needs a square matrix, got {}x{}",
                self.rows, self.cols
            )))
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// `m^e` by repeated squaring; `m^0` is the identity.
pub fn mat_pow(m: &Matrix, mut e: u64) -> Result<Matrix> {
    m.require_square("mat_pow")?;
    let mut result = Matrix::identity(m.rows);
    let mut base = m.clone();
    while e > 0 {
        if e & 1 == 1 {
            result = result.mul(&base)?;
        }
        e >>= 1;
        if e > 0 {
            base = base.mul(&base)?;
        }
    }
    Ok(result)
}

/// Horner evaluation of `p` at a square matrix.
pub fn eval_poly_at_matrix(p: &Polynomial, m: &Matrix) -> Result<Matrix> {
    m.require_square("eval_poly_at_matrix")?;
    let n = m.rows;
    let mut acc = Matrix::zeros(n, n);
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(m)?;
        for i in 0..n {
            acc.data[i * n + i] += c;
        }
    }
    Ok(acc)
}

/// Monic minimal polynomial, found as the first linear dependency among
/// `I, M, M², …` viewed as vectors of length `n²`.
pub fn minimal_polynomial(m: &Matrix) -> Result<Polynomial> {
    m.require_square("minimal_polynomial")?;
    let n = m.rows;
    // Each basis row: reduced vector, pivot column, and its expression as a
    // combination of powers (coefficient of M^t at index t).
    let mut basis: Vec<(Vec<Rational>, usize, Vec<Rational>)> = Vec::new();
    let mut power = Matrix::identity(n);
    for t in 0..=n {
        let mut v = power.data.clone();
        let mut combo = vec![Rational::zero(); t + 1];
        combo[t] = Rational::one();
        for (bv, pivot, bc) in &basis {
            let f = v[*pivot].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in v.iter_mut().zip(bv) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
            for (x, y) in combo.iter_mut().zip(bc) {
                *x -= &f * y;
            }
        }
        match v.iter().position(|x| !x.is_zero()) {
            None => return Ok(Polynomial::new(combo).monic()),
            Some(pivot) => {
                let inv = Rational::one() / &v[pivot];
                for x in v.iter_mut() {
                    *x *= &inv;
                }
                for x in combo.iter_mut() {
                    *x *= &inv;
                }
                // keep the basis fully reduced on its pivots
                for (bv, bp, bc) in basis.iter_mut() {
                    let f = bv[pivot].clone();
                    if f.is_zero() {
                        continue;
                    }
                    for (x, y) in bv.iter_mut().zip(&v) {
                        if !y.is_zero() {
                            *x -= &f * y;
                        }
                    }
                    bc.resize(t + 1, Rational::zero());
                    for (x, y) in bc.iter_mut().zip(&combo) {
                        *x -= &f * y;
                    }
                    debug_assert!(bv[*bp].is_one());
                }
                basis.push((v, pivot, combo));
            }
        }
        power = power.mul(m)?;
    }
    Err(Error::Inconsistent(
        "no dependency among n+1 matrix powers (Cayley-Hamilton violated)".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;
    use proptest::prelude::*;

    fn even_len_b() -> Matrix {
        Matrix::from_i64(&[&[1, 1, 0], &[0, 0, 2], &[0, 2, 0]])
    }

    #[test]
    fn power_examples() {
        assert_eq!(mat_pow(&Matrix::from_i64(&[&[2]]), 0).unwrap(), Matrix::from_i64(&[&[1]]));
        assert_eq!(
            mat_pow(&Matrix::from_i64(&[&[1, 1], &[0, 1]]), 3).unwrap(),
            Matrix::from_i64(&[&[1, 3], &[0, 1]])
        );
        let b = even_len_b();
        let naive = b.mul(&b).unwrap();
        assert_eq!(mat_pow(&b, 2).unwrap(), naive);
        assert_eq!(naive, Matrix::from_i64(&[&[1, 1, 2], &[0, 4, 0], &[0, 0, 4]]));
        assert!(matches!(
            mat_pow(&Matrix::zeros(2, 3), 2),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn minimal_polynomial_examples() {
        assert_eq!(
            minimal_polynomial(&Matrix::from_i64(&[&[3]])).unwrap(),
            Polynomial::from_i64(&[-3, 1])
        );
        let ternary = Matrix::from_i64(&[&[1, 1, 1], &[0, 3, 0], &[0, 0, 3]]);
        // oracle: (B - I)(B - 3I) = 0 and neither factor alone vanishes
        let i3 = Matrix::identity(3);
        let f1 = ternary.sub(&i3).unwrap();
        let f3 = ternary.sub(&i3.scale(&int(3))).unwrap();
        assert!(f1.mul(&f3).unwrap().is_zero());
        assert!(!f1.is_zero() && !f3.is_zero());
        assert_eq!(minimal_polynomial(&ternary).unwrap(), Polynomial::from_i64(&[3, -4, 1]));

        // Krylov oracle for the even-length automaton: B^3 = B^2 + 4B - 4I, and I, B, B^2 independent
        let b = even_len_b();
        let b2 = mat_pow(&b, 2).unwrap();
        let b3 = mat_pow(&b, 3).unwrap();
        let rhs = b2
            .add(&b.scale(&int(4)))
            .unwrap()
            .sub(&Matrix::identity(3).scale(&int(4)))
            .unwrap();
        assert_eq!(b3, rhs);
        assert_eq!(minimal_polynomial(&b).unwrap(), Polynomial::from_i64(&[4, -4, -1, 1]));

        assert_eq!(
            minimal_polynomial(&Matrix::identity(4)).unwrap(),
            Polynomial::from_i64(&[-1, 1])
        );
        assert_eq!(
            minimal_polynomial(&Matrix::zeros(2, 2)).unwrap(),
            Polynomial::from_i64(&[0, 1])
        );
    }

    #[test]
    fn horner_examples() {
        let r = eval_poly_at_matrix(&Polynomial::from_i64(&[-3, 1]), &Matrix::from_i64(&[&[3]]));
        assert!(r.unwrap().is_zero());
        let nil = Matrix::from_i64(&[&[0, 1], &[0, 0]]);
        assert!(eval_poly_at_matrix(&Polynomial::from_i64(&[0, 0, 1]), &nil)
            .unwrap()
            .is_zero());
        assert!(!eval_poly_at_matrix(&Polynomial::from_i64(&[0, 1]), &nil)
            .unwrap()
            .is_zero());
        assert!(eval_poly_at_matrix(&Polynomial::one(), &Matrix::zeros(1, 2)).is_err());
    }

    fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
        let mut rank = 0;
        let cols = rows.first().map_or(0, Vec::len);
        for c in 0..cols {
            let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != rank && !row[c].is_zero() {
                    let f = &row[c] / &pivot[c];
                    for (x, y) in row.iter_mut().zip(&pivot) {
                        *x -= &f * y;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Faddeev-LeVerrier characteristic polynomial.
    fn characteristic(m: &Matrix) -> Polynomial {
        let n = m.rows();
        let mut coeffs = vec![Rational::zero(); n + 1];
        coeffs[n] = Rational::one();
        let mut mk = Matrix::zeros(n, n);
        for k in 1..=n {
            let mut prev = mk.clone();
            for i in 0..n {
                let v = prev.get(i, i) + &coeffs[n - k + 1];
                prev.set(i, i, v);
            }
            mk = m.mul(&prev).unwrap();
            let trace: Rational = (0..n).map(|i| mk.get(i, i).clone()).sum();
            coeffs[n - k] = -trace / int(k as i64);
        }
        Polynomial::new(coeffs)
    }

    fn square_matrix(max_dim: usize) -> impl Strategy<Value = Matrix> {
        (1..=max_dim).prop_flat_map(|n| {
            prop::collection::vec((-3i64..=3, 1i64..=2), n * n).prop_map(move |v| {
                let rows = v
                    .chunks(n)
                    .map(|c| c.iter().map(|&(a, b)| ratio(a, b)).collect())
                    .collect();
                Matrix::from_rows(rows).unwrap()
            })
        })
    }

    /// Low-rank-ish matrices have minimal polynomials well below the dimension.
    fn structured_matrix(max_dim: usize) -> impl Strategy<Value = Matrix> {
        (1..=max_dim).prop_flat_map(|n| {
            (prop::collection::vec(0..n, n), prop::collection::vec(0i64..=2, n)).prop_map(
                move |(targets, weights)| {
                    let mut m = Matrix::zeros(n, n);
                    for (i, (&t, &w)) in targets.iter().zip(&weights).enumerate() {
                        m.set(i, t, int(w));
                    }
                    m
                },
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn minimal_polynomial_annihilates(m in square_matrix(8)) {
            let p = minimal_polynomial(&m).unwrap();
            prop_assert!(p.is_monic());
            prop_assert!(p.degree().unwrap() <= m.rows());
            prop_assert!(eval_poly_at_matrix(&p, &m).unwrap().is_zero());
        }

        #[test]
        fn minimal_polynomial_is_minimal(m in structured_matrix(8)) {
            let p = minimal_polynomial(&m).unwrap();
            let r = p.degree().unwrap();
            prop_assert!(eval_poly_at_matrix(&p, &m).unwrap().is_zero());
            // I, M, ..., M^(r-1) must be independent
            let powers: Vec<Vec<Rational>> = (0..r)
                .map(|t| mat_pow(&m, t as u64).unwrap().entries().to_vec())
                .collect();
            prop_assert_eq!(rank(powers), r);
            // and p divides the characteristic polynomial
            prop_assert!(crate::exact::poly_divides(&p, &characteristic(&m)).unwrap());
        }

        #[test]
        fn power_law(m in square_matrix(4), a in 0u64..5, b in 0u64..5) {
            let lhs = mat_pow(&m, a + b).unwrap();
            let rhs = mat_pow(&m, a).unwrap().mul(&mat_pow(&m, b).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
