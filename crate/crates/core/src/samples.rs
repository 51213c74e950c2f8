//! Named 2-jets and a randomized generator of valid ones.
//!
//! The generator starts from a few families whose divisibility is known in
//! closed form and scrambles them with transformations that preserve
//! validity: invertible changes of source coordinates, conformal maps of
//! the target, projections from a larger source (which produce degenerate
//! jets) and equivalence transforms `(lambda, l)`.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};
use rand::Rng;

use crate::circles::Line;
use crate::cliff::{clifford_generators, CliffordRep};
use crate::jets::Jet2;
use crate::polycore::linalg::{self, Matrix};
use crate::polycore::poly::Poly;
use crate::polycore::polymap::PolyMap;
use crate::polycore::{frac, int, Rational};

/// `A = id`, `B(z) = z^2` on `C = R^2`; its canonical rounding is the
/// Moebius map `z -> z / (1 - z)`.
pub fn complex_square_jet() -> Jet2 {
    let (x1, x2) = (Poly::var(2, 0), Poly::var(2, 1));
    let b = PolyMap::new(2, vec![&(&x1 * &x1) - &(&x2 * &x2), (&x1 * &x2).scale(&int(2))])
        .expect("degree 2");
    Jet2::new(PolyMap::identity(2), b).expect("valid shape")
}

/// `A(x, y) = y`, `B(x, y) = -sum_i x_i E_i y` on `R^k x R^d -> R^d`,
/// built from a representation of `Cliff(k)`.
pub fn clifford_jet(rep: &CliffordRep) -> Jet2 {
    let k = rep.generators().len();
    let d = rep.dim();
    let m = k + d;
    let a = PolyMap::new(m, (0..d).map(|c| Poly::var(m, k + c)).collect()).expect("linear");
    let mut coords = vec![Poly::zero(m); d];
    for (i, e) in rep.generators().iter().enumerate() {
        let xi = Poly::var(m, i);
        for (row, coord) in coords.iter_mut().enumerate() {
            let (col, sign) = e.entry(row);
            let term = &xi * &Poly::var(m, k + col);
            *coord = if sign > 0 { &*coord - &term } else { &*coord + &term };
        }
    }
    Jet2::new(a, PolyMap::new(m, coords).expect("degree 2")).expect("valid shape")
}

/// The jet of `(x, y) -> (1 + x)^{-1} y` on `Im H x H -> H`, with
/// coordinates `(x1, x2, x3, y0, y1, y2, y3)`.
pub fn quaternion_jet() -> Jet2 {
    clifford_jet(&clifford_generators(3).expect("k <= 24"))
}

/// Jet of the Moebius map `x -> (x + |x|^2 a) / (1 + 2<a,x> + |a|^2 |x|^2)`:
/// `A = id`, `B(x) = |x|^2 a - 2 <a,x> x`.
pub fn mobius_jet(a: &[Rational]) -> Jet2 {
    let m = a.len();
    let norm = (0..m).fold(Poly::zero(m), |acc, i| acc + &Poly::var(m, i) * &Poly::var(m, i));
    let ax = Poly::linear(a).scale(&int(2));
    let coords = (0..m)
        .map(|i| &norm.scale(&a[i]) - &(&ax * &Poly::var(m, i)))
        .collect();
    Jet2::new(PolyMap::identity(m), PolyMap::new(m, coords).expect("degree 2")).expect("valid shape")
}

fn small_rational<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> Rational {
    let num = rng.random_range(-bound..=bound);
    let den = rng.random_range(1..=3);
    frac(num, den)
}

pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize, bound: i64) -> Vec<Rational> {
    (0..dim).map(|_| small_rational(rng, bound)).collect()
}

fn random_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> Matrix {
    (0..rows).map(|_| random_vector(rng, cols, bound)).collect()
}

/// Random invertible `n x n` rational matrix.
pub fn random_invertible<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix {
    loop {
        let m = random_matrix(rng, n, n, 2);
        if linalg::bareiss_rank(&m) == n {
            return m;
        }
    }
}

/// Random rational orthogonal matrix via the Cayley transform
/// `(I - S)(I + S)^{-1}` of a skew-symmetric `S`.
pub fn random_orthogonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix {
    let mut s = linalg::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v = frac(rng.random_range(-2..=2), rng.random_range(1..=2));
            s[j][i] = -v.clone();
            s[i][j] = v;
        }
    }
    let id = linalg::identity(n);
    let minus: Matrix = id
        .iter()
        .zip(&s)
        .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect())
        .collect();
    let plus: Matrix = id
        .iter()
        .zip(&s)
        .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
        .collect();
    let inv = linalg::inverse(&plus).expect("I + S is invertible for skew S");
    linalg::mul(&minus, &inv, n)
}

/// Random linear functional with small coefficients.
pub fn random_linear<R: Rng + ?Sized>(rng: &mut R, m: usize) -> Poly {
    Poly::linear(&random_vector(rng, m, 2))
}

/// Random nonzero scalar with small numerator and denominator.
pub fn random_lambda<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    loop {
        let l = small_rational(rng, 3);
        if !l.is_zero() {
            return l;
        }
    }
}

/// Options for [`random_valid_jet`].
#[derive(Clone, Copy, Debug)]
pub struct JetShape {
    pub max_source: usize,
    pub max_target: usize,
    /// Probability of pulling back along a projection from a larger
    /// source, which makes the jet degenerate.
    pub degenerate_bias: f64,
}

impl Default for JetShape {
    fn default() -> Self {
        JetShape {
            max_source: 6,
            max_target: 6,
            degenerate_bias: 0.25,
        }
    }
}

/// A random jet satisfying both divisibility conditions with rank of `A`
/// at least 2.
pub fn random_valid_jet<R: Rng + ?Sized>(rng: &mut R, shape: JetShape) -> Jet2 {
    let max_m = shape.max_source.max(2);
    let max_n = shape.max_target.max(2);
    let mut jet = loop {
        let j = match rng.random_range(0..4) {
            0 => {
                let m = rng.random_range(2..=max_m.min(max_n));
                mobius_jet(&random_vector(rng, m, 2))
            }
            1 => complex_square_jet(),
            2 => {
                let k = if max_m >= 6 && max_n >= 4 { rng.random_range(1..=2) } else { 1 };
                if max_m < 3 {
                    continue;
                }
                clifford_jet(&clifford_generators(k).expect("small k"))
            }
            _ => {
                let m = rng.random_range(2..=max_m);
                let n = rng.random_range(2..=max_n);
                let a = loop {
                    let a = random_matrix(rng, n, m, 2);
                    if linalg::bareiss_rank(&a) >= 2 {
                        break a;
                    }
                };
                let a = PolyMap::from_matrix(&a, m).expect("shape");
                let b = a.mul_poly(&random_linear(rng, m)).expect("degree 2");
                Jet2::new(a, b).expect("shape")
            }
        };
        if j.source_dim() <= max_m && j.target_dim() <= max_n {
            break j;
        }
    };

    // source change of coordinates
    let m = jet.source_dim();
    let mmat = random_invertible(rng, m);
    jet = pull_back(&jet, &mmat, m);

    if m < max_m && rng.random_bool(shape.degenerate_bias) {
        let bigger = rng.random_range(m + 1..=max_m);
        let proj = loop {
            let p = random_matrix(rng, m, bigger, 2);
            if linalg::bareiss_rank(&p) == m {
                break p;
            }
        };
        jet = pull_back(&jet, &proj, bigger);
    }

    // conformal map of the target, possibly into a larger space
    let n = jet.target_dim();
    let n2 = rng.random_range(n..=max_n);
    let o = random_orthogonal(rng, n2);
    let c = random_lambda(rng);
    let t: Matrix = o
        .iter()
        .map(|row| row[..n].iter().map(|v| v * &c).collect())
        .collect();
    jet = Jet2::new(
        jet.linear().left_mul(&t).expect("shape"),
        jet.quadratic().left_mul(&t).expect("shape"),
    )
    .expect("shape");

    let lambda = if rng.random_bool(0.5) { Rational::one() } else { random_lambda(rng) };
    let l = random_linear(rng, jet.source_dim());
    jet.transform(&lambda, &l).expect("linear l")
}

fn pull_back(jet: &Jet2, matrix: &[Vec<Rational>], k: usize) -> Jet2 {
    Jet2::new(
        jet.linear().compose_linear(matrix, k).expect("shape"),
        jet.quadratic().compose_linear(matrix, k).expect("shape"),
    )
    .expect("shape")
}

/// Random rational line in `R^m`, through the origin or affine.
pub fn random_line<R: Rng + ?Sized>(rng: &mut R, m: usize, through_origin: bool) -> Line {
    let base = if through_origin {
        vec![Rational::zero(); m]
    } else {
        random_vector(rng, m, 2)
    };
    loop {
        let dir = random_vector(rng, m, 3);
        if let Ok(line) = Line::new(base.clone(), dir) {
            return line;
        }
    }
}
