//! Quadratic forms `x^T S x` with exact symmetric matrices.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use super::linalg::{self, Matrix};
use super::poly::Poly;
use super::{frac, to_f64, Rational};
use crate::{Error, Result};

/// Inertia `(n_plus, n_minus, n_zero)` of a real symmetric matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Signature {
    pub fn dim(&self) -> usize {
        self.positive + self.negative + self.zero
    }

    pub fn is_positive_definite(&self) -> bool {
        self.positive == self.dim()
    }

    /// Positive or negative definite. The empty form counts as definite.
    pub fn is_definite(&self) -> bool {
        self.positive == self.dim() || self.negative == self.dim()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.positive, self.negative, self.zero)
    }
}

/// A diagonalizing basis: `form(sum c_k v_k) = sum d_k c_k^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct Diagonalization {
    /// Nonzero diagonal values, in the order they were produced.
    pub values: Vec<Rational>,
    /// Basis vector for each entry of `values`.
    pub vectors: Matrix,
    /// Basis of the radical (vectors orthogonal to everything).
    pub radical: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadForm {
    matrix: Matrix,
}

impl QuadForm {
    /// Wraps a symmetric matrix. Fails if it is not square and symmetric.
    pub fn new(matrix: Matrix) -> Result<Self> {
        let n = matrix.len();
        if matrix.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "quadratic form matrix must be {n}x{n}"
            )));
        }
        for i in 0..n {
            for j in 0..i {
                if matrix[i][j] != matrix[j][i] {
                    return Err(Error::DimensionMismatch(format!(
                        "matrix not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(QuadForm { matrix })
    }

    pub fn zero(dim: usize) -> Self {
        QuadForm {
            matrix: linalg::zeros(dim, dim),
        }
    }

    /// `<x,x>` on `R^dim`.
    pub fn euclidean(dim: usize) -> Self {
        QuadForm {
            matrix: linalg::identity(dim),
        }
    }

    /// Reads a homogeneous quadratic polynomial.
    pub fn from_poly(p: &Poly) -> Result<Self> {
        if !p.is_homogeneous(2) {
            return Err(Error::WrongDegree {
                expected: "homogeneous quadratic polynomial",
                got: format!("{p}"),
            });
        }
        let n = p.num_vars();
        let mut m = linalg::zeros(n, n);
        let half = frac(1, 2);
        for (mono, c) in p.terms() {
            let idx: Vec<usize> = mono
                .exponents()
                .iter()
                .enumerate()
                .flat_map(|(i, &e)| core::iter::repeat(i).take(e as usize))
                .collect();
            let (i, j) = (idx[0], idx[1]);
            if i == j {
                m[i][i] = c.clone();
            } else {
                let v = c * &half;
                m[i][j] = v.clone();
                m[j][i] = v;
            }
        }
        Ok(QuadForm { matrix: m })
    }

    pub fn to_poly(&self) -> Poly {
        let n = self.dim();
        let mut terms = Vec::new();
        for i in 0..n {
            for j in i..n {
                let c = &self.matrix[i][j];
                if c.is_zero() {
                    continue;
                }
                let mut e = vec![0u8; n];
                e[i] += 1;
                e[j] += 1;
                let coeff = if i == j { c.clone() } else { c * Rational::from_integer(2.into()) };
                terms.push((e, coeff));
            }
        }
        Poly::from_terms(n, terms)
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(Zero::is_zero)
    }

    /// Symmetric bilinear form `x^T S y`.
    pub fn bilinear(&self, x: &[Rational], y: &[Rational]) -> Rational {
        x.iter()
            .zip(&self.matrix)
            .filter(|(xi, _)| !xi.is_zero())
            .map(|(xi, row)| {
                xi * row
                    .iter()
                    .zip(y)
                    .map(|(s, yj)| s * yj)
                    .sum::<Rational>()
            })
            .sum()
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.bilinear(x, x)
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        let mut s = 0.0;
        for (i, row) in self.matrix.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                s += to_f64(v) * x[i] * x[j];
            }
        }
        s
    }

    pub fn add(&self, other: &QuadForm) -> QuadForm {
        QuadForm {
            matrix: self
                .matrix
                .iter()
                .zip(&other.matrix)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> QuadForm {
        QuadForm {
            matrix: self
                .matrix
                .iter()
                .map(|r| r.iter().map(|v| v * c).collect())
                .collect(),
        }
    }

    pub fn sub(&self, other: &QuadForm) -> QuadForm {
        self.add(&other.scale(&-Rational::one()))
    }

    /// Pulls the form back along the columns of `basis` (given as a list of
    /// vectors): the result is `B^T S B`.
    pub fn restrict(&self, basis: &[Vec<Rational>]) -> QuadForm {
        let k = basis.len();
        let mut m = linalg::zeros(k, k);
        for a in 0..k {
            for b in a..k {
                let v = self.bilinear(&basis[a], &basis[b]);
                m[b][a] = v.clone();
                m[a][b] = v;
            }
        }
        QuadForm { matrix: m }
    }

    /// Lagrange's congruent diagonalization.
    ///
    /// Repeatedly picks a vector `w` with `Q(w) != 0`, records it, and
    /// projects the remaining vectors onto its orthogonal complement. When
    /// every remaining vector is isotropic but two of them pair nontrivially,
    /// their sum (the `u = x + y` substitution) supplies the next pivot.
    pub fn diagonalize(&self) -> Diagonalization {
        let n = self.dim();
        let mut remaining: Matrix = linalg::identity(n);
        let mut values = Vec::new();
        let mut vectors = Vec::new();
        loop {
            let pick = remaining
                .iter()
                .position(|w| !self.eval(w).is_zero());
            let pivot = match pick {
                Some(i) => remaining.remove(i),
                None => {
                    let mut pair = None;
                    'search: for i in 0..remaining.len() {
                        for j in i + 1..remaining.len() {
                            if !self.bilinear(&remaining[i], &remaining[j]).is_zero() {
                                pair = Some((i, j));
                                break 'search;
                            }
                        }
                    }
                    let Some((i, j)) = pair else { break };
                    let wj = remaining.remove(j);
                    let wi = remaining.remove(i);
                    let sum: Vec<Rational> = wi.iter().zip(&wj).map(|(a, b)| a + b).collect();
                    remaining.insert(i, wj);
                    sum
                }
            };
            let d = self.eval(&pivot);
            for w in remaining.iter_mut() {
                let c = self.bilinear(w, &pivot) / &d;
                if !c.is_zero() {
                    for (wi, pi) in w.iter_mut().zip(&pivot) {
                        *wi -= &c * pi;
                    }
                }
            }
            values.push(d);
            vectors.push(pivot);
        }
        Diagonalization {
            values,
            vectors,
            radical: remaining,
        }
    }

    pub fn signature(&self) -> Signature {
        let d = self.diagonalize();
        Signature {
            positive: d.values.iter().filter(|v| v.is_positive()).count(),
            negative: d.values.iter().filter(|v| v.is_negative()).count(),
            zero: d.radical.len(),
        }
    }

    /// `S = L D L^T` with `L` unit lower triangular, for positive definite
    /// forms. Returns `None` if a nonpositive pivot appears.
    pub fn ldl(&self) -> Option<(Matrix, Vec<Rational>)> {
        let n = self.dim();
        let mut l = linalg::identity(n);
        let mut d: Vec<Rational> = Vec::with_capacity(n);
        for j in 0..n {
            let mut dj = self.matrix[j][j].clone();
            for k in 0..j {
                dj -= &l[j][k] * &l[j][k] * &d[k];
            }
            if !dj.is_positive() {
                return None;
            }
            for i in j + 1..n {
                let mut v = self.matrix[i][j].clone();
                for k in 0..j {
                    v -= &l[i][k] * &l[j][k] * &d[k];
                }
                l[i][j] = v / &dj;
            }
            d.push(dj);
        }
        Some((l, d))
    }
}
