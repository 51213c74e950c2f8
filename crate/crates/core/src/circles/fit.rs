//! Floating-point circle fitting used as an independent oracle.
//!
//! Points are centered and scaled, the best 2-plane is taken from the
//! principal axes, and an algebraic (Kasa) circle is fitted in that plane.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;


use crate::{Error, Result};

/// Fewest points accepted by [`circle_fit`].
pub const MIN_POINTS: usize = 5;

const POINT_TOL: f64 = 1e-12;
const LINE_TOL: f64 = 1e-12;
const MAX_RADIUS: f64 = 1e12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FitKind {
    Point,
    Line,
    Circle,
}

/// Best circle, line or point through a set of samples. Points in `R^1`
/// are treated as lying in `R^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct CircleFit {
    pub center: Vec<f64>,
    /// Infinite for a line, zero for a point.
    pub radius: f64,
    /// Orthonormal basis of the fitted plane; the first vector spans the
    /// line when `kind` is [`FitKind::Line`].
    pub plane_basis: [Vec<f64>; 2],
    pub kind: FitKind,
    /// Largest distance from a sample to the fitted object.
    pub residual: f64,
    /// Largest distance from a sample to the centroid.
    pub spread: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Eigenpairs of a symmetric matrix by cyclic Jacobi rotations, sorted by
/// decreasing eigenvalue. Eigenvectors are returned as rows.
pub fn symmetric_eigen(matrix: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = matrix.len();
    let mut a: Vec<Vec<f64>> = matrix.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let scale: f64 = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-300 || off <= 1e-17 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j][j].partial_cmp(&a[i][i]).unwrap_or(core::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| a[i][i]).collect();
    let vectors = order
        .iter()
        .map(|&i| (0..n).map(|k| v[k][i]).collect())
        .collect();
    (values, vectors)
}

/// Least squares for a tall `rows x 3` system by Householder QR.
fn least_squares3(a: &mut [[f64; 3]], b: &mut [f64]) -> Option<[f64; 3]> {
    let rows = a.len();
    let col_scale: f64 = a.iter().flatten().fold(0.0, |m, x| m.max(x.abs()));
    for k in 0..3 {
        let alpha = (k..rows).map(|i| a[i][k] * a[i][k]).sum::<f64>().sqrt();
        if alpha <= 1e-14 * col_scale.max(1e-300) {
            return None;
        }
        let alpha = if a[k][k] > 0.0 { -alpha } else { alpha };
        let mut w: Vec<f64> = (k..rows).map(|i| a[i][k]).collect();
        w[0] -= alpha;
        let wn = dot(&w, &w);
        if wn == 0.0 {
            continue;
        }
        for j in k..3 {
            let s = (k..rows).map(|i| w[i - k] * a[i][j]).sum::<f64>() * 2.0 / wn;
            for i in k..rows {
                a[i][j] -= s * w[i - k];
            }
        }
        let s = (k..rows).map(|i| w[i - k] * b[i]).sum::<f64>() * 2.0 / wn;
        for i in k..rows {
            b[i] -= s * w[i - k];
        }
    }
    let mut x = [0.0; 3];
    for k in (0..3).rev() {
        let s: f64 = (k + 1..3).map(|j| a[k][j] * x[j]).sum();
        x[k] = (b[k] - s) / a[k][k];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Fits a circle, line or point to at least [`MIN_POINTS`] samples.
pub fn circle_fit(points: &[Vec<f64>]) -> Result<CircleFit> {
    if points.len() < MIN_POINTS {
        return Err(Error::TooFewPoints {
            needed: MIN_POINTS,
            got: points.len(),
        });
    }
    let n0 = points[0].len();
    if n0 == 0 || points.iter().any(|p| p.len() != n0) {
        return Err(Error::DimensionMismatch("points must share a positive dimension".into()));
    }
    let n = n0.max(2);
    let pts: Vec<Vec<f64>> = points
        .iter()
        .map(|p| {
            let mut q = p.clone();
            q.resize(n, 0.0);
            q
        })
        .collect();
    let count = pts.len() as f64;
    let centroid: Vec<f64> = (0..n)
        .map(|k| pts.iter().map(|p| p[k]).sum::<f64>() / count)
        .collect();
    let centered: Vec<Vec<f64>> = pts
        .iter()
        .map(|p| p.iter().zip(&centroid).map(|(a, b)| a - b).collect())
        .collect();
    let spread = centered.iter().map(|p| norm(p)).fold(0.0, f64::max);
    let unit = |k: usize| -> Vec<f64> { (0..n).map(|i| if i == k { 1.0 } else { 0.0 }).collect() };

    if spread <= POINT_TOL * norm(&centroid).max(1.0) {
        return Ok(CircleFit {
            center: centroid,
            radius: 0.0,
            plane_basis: [unit(0), unit(1)],
            kind: FitKind::Point,
            residual: spread,
            spread,
        });
    }

    let scaled: Vec<Vec<f64>> = centered
        .iter()
        .map(|p| p.iter().map(|x| x / spread).collect())
        .collect();
    let mut cov = vec![vec![0.0; n]; n];
    for p in &scaled {
        for i in 0..n {
            for j in 0..n {
                cov[i][j] += p[i] * p[j];
            }
        }
    }
    let (values, vectors) = symmetric_eigen(&cov);
    let (e1, e2) = (vectors[0].clone(), vectors[1].clone());
    let sigma1 = values[0].max(0.0).sqrt();
    let sigma2 = values[1].max(0.0).sqrt();

    let coords: Vec<(f64, f64, f64)> = scaled
        .iter()
        .map(|p| {
            let (u, v) = (dot(p, &e1), dot(p, &e2));
            let out: Vec<f64> = (0..n).map(|k| p[k] - u * e1[k] - v * e2[k]).collect();
            (u, v, norm(&out))
        })
        .collect();

    let line_residual = coords
        .iter()
        .map(|&(_, v, out)| (v * v + out * out).sqrt())
        .fold(0.0, f64::max);
    let line = CircleFit {
        center: centroid.clone(),
        radius: f64::INFINITY,
        plane_basis: [e1.clone(), e2.clone()],
        kind: FitKind::Line,
        residual: line_residual * spread,
        spread,
    };
    if sigma2 <= LINE_TOL * sigma1 {
        return Ok(line);
    }

    let mut a: Vec<[f64; 3]> = coords.iter().map(|&(u, v, _)| [u, v, 1.0]).collect();
    let mut b: Vec<f64> = coords.iter().map(|&(u, v, _)| -(u * u + v * v)).collect();
    let Some([d, e, f]) = least_squares3(&mut a, &mut b) else {
        return Ok(line);
    };
    let (cu, cv) = (-d / 2.0, -e / 2.0);
    let r2 = cu * cu + cv * cv - f;
    if !(r2 > 0.0) || r2.sqrt() > MAX_RADIUS {
        return Ok(line);
    }
    let r = r2.sqrt();
    let circle_residual = coords
        .iter()
        .map(|&(u, v, out)| {
            let radial = ((u - cu) * (u - cu) + (v - cv) * (v - cv)).sqrt() - r;
            (radial * radial + out * out).sqrt()
        })
        .fold(0.0, f64::max);
    if line_residual <= circle_residual {
        return Ok(line);
    }
    let center = (0..n)
        .map(|k| centroid[k] + spread * (cu * e1[k] + cv * e2[k]))
        .collect();
    Ok(CircleFit {
        center,
        radius: r * spread,
        plane_basis: [e1, e2],
        kind: FitKind::Circle,
        residual: circle_residual * spread,
        spread,
    })
}
