//! Polynomial maps `R^m -> R^n` whose coordinates have degree at most 2.

use alloc::format;
use alloc::vec::Vec;

use num_traits::Zero;

use super::form::QuadForm;
use super::linalg::{self, Matrix};
use super::poly::{Monomial, Poly};
use super::Rational;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyMap {
    source_dim: usize,
    coords: Vec<Poly>,
}

impl PolyMap {
    pub fn new(source_dim: usize, coords: Vec<Poly>) -> Result<Self> {
        for (i, c) in coords.iter().enumerate() {
            if c.num_vars() != source_dim {
                return Err(Error::DimensionMismatch(format!(
                    "coordinate {i} has {} variables, expected {source_dim}",
                    c.num_vars()
                )));
            }
            if c.degree().unwrap_or(0) > 2 {
                return Err(Error::WrongDegree {
                    expected: "coordinates of degree at most 2",
                    got: format!("coordinate {i} = {c}"),
                });
            }
        }
        Ok(PolyMap { source_dim, coords })
    }

    pub fn zero(source_dim: usize, target_dim: usize) -> Self {
        PolyMap {
            source_dim,
            coords: (0..target_dim).map(|_| Poly::zero(source_dim)).collect(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        PolyMap {
            source_dim: dim,
            coords: (0..dim).map(|i| Poly::var(dim, i)).collect(),
        }
    }

    /// Linear map from an `n x m` matrix (`rows` = target coordinates).
    pub fn from_matrix(matrix: &[Vec<Rational>], source_dim: usize) -> Result<Self> {
        if let Some(r) = matrix.iter().position(|r| r.len() != source_dim) {
            return Err(Error::DimensionMismatch(format!(
                "row {r} of the linear part has {} entries, expected {source_dim}",
                matrix[r].len()
            )));
        }
        Ok(PolyMap {
            source_dim,
            coords: matrix.iter().map(|row| Poly::linear(row)).collect(),
        })
    }

    /// Homogeneous quadratic map whose coordinate `i` is `forms[i]`.
    pub fn from_forms(forms: &[QuadForm], source_dim: usize) -> Result<Self> {
        if let Some(i) = forms.iter().position(|f| f.dim() != source_dim) {
            return Err(Error::DimensionMismatch(format!(
                "form {i} has dimension {}, expected {source_dim}",
                forms[i].dim()
            )));
        }
        Ok(PolyMap {
            source_dim,
            coords: forms.iter().map(QuadForm::to_poly).collect(),
        })
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Poly] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Poly> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Poly::is_zero)
    }

    pub fn homogeneous_part(&self, degree: usize) -> PolyMap {
        PolyMap {
            source_dim: self.source_dim,
            coords: self.coords.iter().map(|c| c.homogeneous_part(degree)).collect(),
        }
    }

    pub fn is_homogeneous(&self, degree: usize) -> bool {
        self.coords.iter().all(|c| c.is_homogeneous(degree))
    }

    /// Constant term of each coordinate.
    pub fn constant_part(&self) -> Vec<Rational> {
        self.coords.iter().map(Poly::constant_term).collect()
    }

    /// `n x m` coefficient matrix of the degree-1 part.
    pub fn linear_matrix(&self) -> Matrix {
        let m = self.source_dim;
        self.coords
            .iter()
            .map(|c| {
                (0..m)
                    .map(|j| c.coeff(Monomial::var(m, j).exponents()))
                    .collect()
            })
            .collect()
    }

    /// Symmetric matrices of the degree-2 part, one per coordinate.
    pub fn quadratic_forms(&self) -> Vec<QuadForm> {
        self.coords
            .iter()
            .map(|c| QuadForm::from_poly(&c.homogeneous_part(2)).expect("degree-2 part is homogeneous"))
            .collect()
    }

    fn check_same_shape(&self, other: &PolyMap) -> Result<()> {
        if self.source_dim != other.source_dim || self.target_dim() != other.target_dim() {
            return Err(Error::DimensionMismatch(format!(
                "maps R^{} -> R^{} and R^{} -> R^{}",
                self.source_dim,
                self.target_dim(),
                other.source_dim,
                other.target_dim()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &PolyMap) -> Result<PolyMap> {
        self.check_same_shape(other)?;
        Ok(PolyMap {
            source_dim: self.source_dim,
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &PolyMap) -> Result<PolyMap> {
        self.check_same_shape(other)?;
        Ok(PolyMap {
            source_dim: self.source_dim,
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, c: &Rational) -> PolyMap {
        PolyMap {
            source_dim: self.source_dim,
            coords: self.coords.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// Coordinatewise product with a scalar polynomial. The result must
    /// still have degree at most 2.
    pub fn mul_poly(&self, s: &Poly) -> Result<PolyMap> {
        PolyMap::new(self.source_dim, self.coords.iter().map(|c| c * s).collect())
    }

    /// Applies a linear map of the target: `out_i = sum_j t[i][j] * self_j`.
    pub fn left_mul(&self, t: &[Vec<Rational>]) -> Result<PolyMap> {
        if let Some(r) = t.iter().position(|r| r.len() != self.target_dim()) {
            return Err(Error::DimensionMismatch(format!(
                "row {r} of the target transform has the wrong length"
            )));
        }
        Ok(PolyMap {
            source_dim: self.source_dim,
            coords: t
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(&self.coords)
                        .filter(|(c, _)| !c.is_zero())
                        .fold(Poly::zero(self.source_dim), |acc, (c, p)| acc + p.scale(c))
                })
                .collect(),
        })
    }

    /// Precomposition with a linear map `R^k -> R^m` given as an `m x k`
    /// matrix.
    pub fn compose_linear(&self, matrix: &[Vec<Rational>], k: usize) -> Result<PolyMap> {
        if matrix.len() != self.source_dim {
            return Err(Error::DimensionMismatch(format!(
                "precomposition matrix has {} rows, expected {}",
                matrix.len(),
                self.source_dim
            )));
        }
        let images = linear_images(matrix, k)?;
        Ok(PolyMap {
            source_dim: k,
            coords: self.coords.iter().map(|c| c.substitute(&images)).collect(),
        })
    }

    pub fn eval(&self, x: &[Rational]) -> Vec<Rational> {
        self.coords.iter().map(|c| c.eval(x)).collect()
    }

    pub fn eval_f64(&self, x: &[f64]) -> Vec<f64> {
        self.coords.iter().map(|c| c.eval_f64(x)).collect()
    }
}

pub(crate) fn linear_images(matrix: &[Vec<Rational>], k: usize) -> Result<Vec<Poly>> {
    matrix
        .iter()
        .map(|row| {
            if row.len() != k {
                Err(Error::DimensionMismatch(format!(
                    "linear map rows must have {k} entries"
                )))
            } else {
                Ok(Poly::linear(row))
            }
        })
        .collect()
}

/// `sum_i U_i * V_i`, the Euclidean inner product of two maps as a scalar
/// polynomial.
pub fn inner_poly(u: &PolyMap, v: &PolyMap) -> Result<Poly> {
    u.check_same_shape(v)?;
    Ok(u.coords
        .iter()
        .zip(&v.coords)
        .fold(Poly::zero(u.source_dim), |acc, (a, b)| acc + a * b))
}

/// Rank over the rationals of a homogeneous linear map.
pub fn rank_linear(a: &PolyMap) -> Result<usize> {
    if !a.is_homogeneous(1) {
        return Err(Error::WrongDegree {
            expected: "homogeneous linear map",
            got: format!("{:?}", a.coords.iter().map(Poly::degree).collect::<Vec<_>>()),
        });
    }
    Ok(linalg::bareiss_rank(&a.linear_matrix()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::int;
    use alloc::vec;

    fn complex_square() -> PolyMap {
        let (x1, x2) = (Poly::var(2, 0), Poly::var(2, 1));
        PolyMap::new(2, vec![&(&x1 * &x1) - &(&x2 * &x2), (&x1 * &x2).scale(&int(2))]).unwrap()
    }

    #[test]
    fn inner_poly_examples() {
        let (x1, x2) = (Poly::var(2, 0), Poly::var(2, 1));
        let id = PolyMap::identity(2);
        let norm = &(&x1 * &x1) + &(&x2 * &x2);
        assert_eq!(inner_poly(&id, &id).unwrap(), norm);
        let b = complex_square();
        assert_eq!(
            inner_poly(&id, &b).unwrap(),
            &x1.pow(3) + &(&x1 * &(&x2 * &x2))
        );
        assert_eq!(inner_poly(&b, &b).unwrap(), norm.pow(2));
        assert!(inner_poly(&id, &PolyMap::identity(3)).is_err());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_linear(&PolyMap::identity(2)).unwrap(), 2);
        let proj = PolyMap::new(3, vec![Poly::var(3, 0), Poly::var(3, 1)]).unwrap();
        assert_eq!(rank_linear(&proj).unwrap(), 2);
        assert_eq!(rank_linear(&PolyMap::zero(3, 2)).unwrap(), 0);
        assert!(rank_linear(&complex_square()).is_err());
    }

    #[test]
    fn degree_cap_enforced() {
        let x1 = Poly::var(1, 0);
        assert!(PolyMap::new(1, vec![x1.pow(3)]).is_err());
        assert!(PolyMap::new(2, vec![x1]).is_err());
    }

    #[test]
    fn compose_linear_substitutes() {
        // complex square composed with the swap (x1, x2) -> (x2, x1)
        let swap = vec![vec![int(0), int(1)], vec![int(1), int(0)]];
        let b = complex_square().compose_linear(&swap, 2).unwrap();
        let (x1, x2) = (Poly::var(2, 0), Poly::var(2, 1));
        assert_eq!(b.coords()[0], &(&x2 * &x2) - &(&x1 * &x1));
    }
}
