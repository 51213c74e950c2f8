#![allow(dead_code)]

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rounding_core::polycore::{frac, int};
use rounding_core::{Monomial, Poly, Rational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small(rng: &mut ChaCha8Rng) -> Rational {
    frac(rng.random_range(-4..=4), rng.random_range(1..=3))
}

pub fn random_poly(rng: &mut ChaCha8Rng, m: usize, max_deg: usize, terms: usize) -> Poly {
    let mut p = Poly::zero(m);
    for _ in 0..terms {
        let mut exps = vec![0u8; m];
        let deg = rng.random_range(0..=max_deg);
        for _ in 0..deg {
            exps[rng.random_range(0..m)] += 1;
        }
        p = p + Poly::term(m, Monomial::new(exps), small(rng));
    }
    p
}

pub fn random_homogeneous(rng: &mut ChaCha8Rng, m: usize, deg: usize, terms: usize) -> Poly {
    random_poly(rng, m, deg, terms).homogeneous_part(deg)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Vec<Vec<Rational>> {
    (0..rows).map(|_| (0..cols).map(|_| int(rng.random_range(-3..=3))).collect()).collect()
}

pub fn f(r: &Rational) -> f64 {
    r.to_f64().unwrap()
}

pub fn to_f64_matrix(a: &[Vec<Rational>]) -> Vec<Vec<f64>> {
    a.iter().map(|row| row.iter().map(f).collect()).collect()
}

/// Rank by Gaussian elimination with partial pivoting.
pub fn float_rank(a: &[Vec<f64>]) -> usize {
    let mut a = a.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let scale = a.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs())).max(1.0);
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let (piv, val) = (rank..rows)
            .map(|r| (r, a[r][c].abs()))
            .fold((rank, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if val <= 1e-9 * scale {
            continue;
        }
        a.swap(rank, piv);
        for r in rank + 1..rows {
            let factor = a[r][c] / a[rank][c];
            for k in c..cols {
                a[r][k] -= factor * a[rank][k];
            }
        }
        rank += 1;
    }
    rank
}

/// Eigenvalues of a symmetric matrix by repeated Jacobi rotations.
pub fn eigenvalues(a: &[Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    let mut a = a.to_vec();
    for _ in 0..200 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[p][q] * a[p][q];
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let phi = 0.5 * (2.0 * a[p][q]).atan2(a[q][q] - a[p][p]);
                let (s, c) = phi.sin_cos();
                for k in 0..n {
                    let (x, y) = (a[k][p], a[k][q]);
                    a[k][p] = c * x - s * y;
                    a[k][q] = s * x + c * y;
                }
                for k in 0..n {
                    let (x, y) = (a[p][k], a[q][k]);
                    a[p][k] = c * x - s * y;
                    a[q][k] = s * x + c * y;
                }
            }
        }
        if off < 1e-28 {
            break;
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

/// Hamilton product of quaternions `(w, x, y, z)`.
pub fn hamilton(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let (a0, a1, a2, a3) = (&a[0], &a[1], &a[2], &a[3]);
    let (b0, b1, b2, b3) = (&b[0], &b[1], &b[2], &b[3]);
    vec![
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    ]
}

pub fn sum_sq(v: &[Rational]) -> Rational {
    v.iter().fold(int(0), |acc, x| acc + x * x)
}
