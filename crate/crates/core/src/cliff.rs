//! Clifford algebra generators, the Hurwitz-Radon and Yiu functions,
//! normed pairings and their Hopf maps.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::jets::FracQuadMap;
use crate::polycore::form::QuadForm;
use crate::polycore::poly::Poly;
use crate::polycore::polymap::{inner_poly, PolyMap};
use crate::polycore::{int, Rational};
use crate::spheres::QuadSphereMap;
use crate::{Error, Result};

/// A signed permutation matrix: `(E y)[row] = sign[row] * y[perm[row]]`.
/// Every generator built here has this shape, which keeps the relation
/// checks linear in the dimension.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedPerm {
    perm: Vec<usize>,
    sign: Vec<i8>,
}

impl SignedPerm {
    pub fn identity(n: usize) -> Self {
        SignedPerm {
            perm: (0..n).collect(),
            sign: vec![1; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// Column and sign of the single nonzero entry in `row`.
    pub fn entry(&self, row: usize) -> (usize, i8) {
        (self.perm[row], self.sign[row])
    }

    pub fn neg(&self) -> Self {
        SignedPerm {
            perm: self.perm.clone(),
            sign: self.sign.iter().map(|s| -s).collect(),
        }
    }

    /// Matrix product `self * other`.
    pub fn compose(&self, other: &SignedPerm) -> Self {
        SignedPerm {
            perm: self.perm.iter().map(|&p| other.perm[p]).collect(),
            sign: self
                .perm
                .iter()
                .zip(&self.sign)
                .map(|(&p, &s)| s * other.sign[p])
                .collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim();
        let mut perm = vec![0; n];
        let mut sign = vec![0; n];
        for (r, (&p, &s)) in self.perm.iter().zip(&self.sign).enumerate() {
            perm[p] = r;
            sign[p] = s;
        }
        SignedPerm { perm, sign }
    }

    /// Kronecker product, index `(a, b) -> a * other.dim() + b`.
    pub fn kron(&self, other: &SignedPerm) -> Self {
        let d = other.dim();
        let mut perm = Vec::with_capacity(self.dim() * d);
        let mut sign = Vec::with_capacity(self.dim() * d);
        for (&pa, &sa) in self.perm.iter().zip(&self.sign) {
            for (&pb, &sb) in other.perm.iter().zip(&other.sign) {
                perm.push(pa * d + pb);
                sign.push(sa * sb);
            }
        }
        SignedPerm { perm, sign }
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        let n = self.dim();
        let mut m = vec![vec![Rational::zero(); n]; n];
        for (r, (&p, &s)) in self.perm.iter().zip(&self.sign).enumerate() {
            m[r][p] = int(s as i64);
        }
        m
    }
}

/// Orthogonal representation of `Cliff(k)` on `R^dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordRep {
    dim: usize,
    generators: Vec<SignedPerm>,
}

impl CliffordRep {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[SignedPerm] {
        &self.generators
    }

    /// Checks `E_i^2 = -I`, `E_i E_j + E_j E_i = 0` and `E_i^T E_i = I`.
    pub fn satisfies_relations(&self) -> bool {
        let id = SignedPerm::identity(self.dim);
        let minus_id = id.neg();
        for (i, e) in self.generators.iter().enumerate() {
            if e.dim() != self.dim
                || e.compose(e) != minus_id
                || e.transpose().compose(e) != id
            {
                return false;
            }
            for f in &self.generators[i + 1..] {
                // signed permutations anticommute iff one product is the
                // negation of the other
                if e.compose(f) != f.compose(e).neg() {
                    return false;
                }
            }
        }
        true
    }
}

/// Cayley-Dickson product `(a,b)(c,d) = (ac - d*b, da + bc*)` on
/// `R^(2^j)`.
fn cd_mul(x: &[i64], y: &[i64]) -> Vec<i64> {
    let n = x.len();
    if n == 1 {
        return vec![x[0] * y[0]];
    }
    let h = n / 2;
    let (a, b) = x.split_at(h);
    let (c, d) = y.split_at(h);
    let ac = cd_mul(a, c);
    let db = cd_mul(&cd_conj(d), b);
    let da = cd_mul(d, a);
    let bc = cd_mul(b, &cd_conj(c));
    ac.iter()
        .zip(&db)
        .map(|(p, q)| p - q)
        .chain(da.iter().zip(&bc).map(|(p, q)| p + q))
        .collect()
}

fn cd_conj(x: &[i64]) -> Vec<i64> {
    x.iter()
        .enumerate()
        .map(|(i, &v)| if i == 0 { v } else { -v })
        .collect()
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// Left multiplication by `u` in the Cayley-Dickson algebra of dimension
/// `n`, as a signed permutation (valid when `u` is +-basis unit).
fn left_mul(u: &[i64], n: usize) -> SignedPerm {
    let mut perm = vec![0; n];
    let mut sign = vec![0; n];
    for j in 0..n {
        let col = cd_mul(u, &unit(n, j));
        let (row, &s) = col
            .iter()
            .enumerate()
            .find(|(_, v)| **v != 0)
            .expect("product of units is a unit");
        perm[row] = j;
        sign[row] = s as i8;
    }
    SignedPerm { perm, sign }
}

fn base_rep(k: usize) -> CliffordRep {
    match k {
        0 => CliffordRep {
            dim: 1,
            generators: Vec::new(),
        },
        1 => CliffordRep {
            dim: 2,
            generators: vec![left_mul(&unit(2, 1), 2)],
        },
        2 | 3 => {
            // i, j and k = ij acting on the quaternions
            let (i, j) = (unit(4, 1), unit(4, 2));
            let units = [i.clone(), j.clone(), cd_mul(&i, &j)];
            CliffordRep {
                dim: 4,
                generators: units[..k].iter().map(|u| left_mul(u, 4)).collect(),
            }
        }
        4..=7 => CliffordRep {
            dim: 8,
            generators: (1..=k).map(|i| left_mul(&unit(8, i), 8)).collect(),
        },
        _ => unreachable!("base representations cover k < 8"),
    }
}

/// `Cliff(8)` on `R^16` by doubling the octonion representation of
/// `Cliff(7)`: `F_i = diag(E_i, -E_i)` and `F_8 = [[0, -I], [I, 0]]`.
fn cliff8() -> CliffordRep {
    let oct = base_rep(7);
    let mut generators: Vec<SignedPerm> = oct
        .generators
        .iter()
        .map(|e| {
            let perm = e.perm.iter().copied().chain(e.perm.iter().map(|p| p + 8)).collect();
            let sign = e.sign.iter().copied().chain(e.sign.iter().map(|s| -s)).collect();
            SignedPerm { perm, sign }
        })
        .collect();
    generators.push(SignedPerm {
        perm: (8..16).chain(0..8).collect(),
        sign: [-1i8; 8].into_iter().chain([1i8; 8]).collect(),
    });
    CliffordRep { dim: 16, generators }
}

/// Generators of `Cliff(k)`, `k <= 24`, acting orthogonally on the
/// smallest possible space: dimensions 1, 2, 4, 4, 8, 8, 8, 8 for
/// `k < 8`, multiplied by 16 for every further 8 generators.
///
/// For `k >= 8` the representation of `Cliff(k - 8)` is tensored with the
/// fixed 16-dimensional representation of `Cliff(8)`: with
/// `w = F_1 ... F_8` the generators are `E_i (x) w` and `I (x) F_j`.
///
/// # Panics
///
/// If the constructed table violates a Clifford relation.
pub fn clifford_generators(k: usize) -> Result<CliffordRep> {
    if k > 24 {
        return Err(Error::OutOfRange {
            what: "number of Clifford generators",
            value: k,
            range: "0..=24",
        });
    }
    let rep = if k < 8 {
        base_rep(k)
    } else {
        let inner = clifford_generators(k - 8)?;
        let c8 = cliff8();
        let omega = c8
            .generators
            .iter()
            .fold(SignedPerm::identity(16), |acc, f| acc.compose(f));
        let id = SignedPerm::identity(inner.dim);
        let mut generators: Vec<SignedPerm> =
            inner.generators.iter().map(|e| e.kron(&omega)).collect();
        generators.extend(c8.generators.iter().map(|f| id.kron(f)));
        CliffordRep {
            dim: inner.dim * 16,
            generators,
        }
    };
    assert!(
        rep.satisfies_relations(),
        "Clifford table for k = {k} violates a relation"
    );
    Ok(rep)
}

/// Hurwitz-Radon function: for `n = 2^(4a+b) * odd`, `0 <= b <= 3`,
/// `rho(n) = 8a + 2^b`.
///
/// # Panics
///
/// If `n == 0`.
pub fn rho(n: u64) -> u64 {
    assert!(n >= 1, "rho is defined for positive integers");
    let s = n.trailing_zeros() as u64;
    8 * (s / 4) + (1 << (s % 4))
}

pub const KAPPA_MAX: usize = 1 << 20;

/// Yiu's function: `kappa(2^t + m) = 2^t` when `m < rho(2^t)` and
/// `2^t + kappa(m)` when `rho(2^t) <= m < 2^t`, with `t` maximal.
///
/// The recursion depth is at most `log2 m`, so no table is kept.
pub fn kappa(m: usize) -> Result<usize> {
    if m == 0 || m > KAPPA_MAX {
        return Err(Error::OutOfRange {
            what: "kappa argument",
            value: m,
            range: "1..=2^20",
        });
    }
    let pow = 1usize << (usize::BITS - 1 - m.leading_zeros());
    let rest = m - pow;
    if (rest as u64) < rho(pow as u64) {
        Ok(pow)
    } else {
        Ok(pow + kappa(rest)?)
    }
}

/// Bilinear `f: R^r x R^s -> R^n` with `|f(x,y)| = |x| |y|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormedPairing {
    r: usize,
    s: usize,
    n: usize,
    /// `tensor[i][j][c]` is the coefficient of `x_i y_j` in `f_c`.
    tensor: Vec<Vec<Vec<Rational>>>,
}

impl NormedPairing {
    /// Wraps a bilinear tensor after checking `<f,f> = <x,x><y,y>` exactly.
    pub fn new(tensor: Vec<Vec<Vec<Rational>>>) -> Result<Self> {
        let r = tensor.len();
        let s = tensor.first().map_or(0, Vec::len);
        let n = tensor.first().and_then(|t| t.first()).map_or(0, Vec::len);
        if r == 0 || s == 0 || n == 0 {
            return Err(Error::DimensionMismatch("empty pairing tensor".into()));
        }
        if tensor.iter().any(|t| t.len() != s || t.iter().any(|v| v.len() != n)) {
            return Err(Error::DimensionMismatch("ragged pairing tensor".into()));
        }
        let f = NormedPairing { r, s, n, tensor };
        if !f.identity_holds() {
            return Err(Error::NotNormedPairing);
        }
        Ok(f)
    }

    /// Size `[r, s, n]`.
    pub fn size(&self) -> [usize; 3] {
        [self.r, self.s, self.n]
    }

    pub fn tensor(&self) -> &[Vec<Vec<Rational>>] {
        &self.tensor
    }

    /// `f` as a quadratic map on `R^r (+) R^s`, `x` first.
    pub fn to_map(&self) -> PolyMap {
        let m = self.r + self.s;
        let coords = (0..self.n)
            .map(|c| {
                let mut p = Poly::zero(m);
                for (i, ti) in self.tensor.iter().enumerate() {
                    for (j, tij) in ti.iter().enumerate() {
                        if !tij[c].is_zero() {
                            p = p + (&Poly::var(m, i) * &Poly::var(m, self.r + j)).scale(&tij[c]);
                        }
                    }
                }
                p
            })
            .collect();
        PolyMap::new(m, coords).expect("bilinear")
    }

    /// `<x,x>` and `<y,y>` on `R^r (+) R^s`.
    pub fn factor_norms(&self) -> (Poly, Poly) {
        let m = self.r + self.s;
        let sq = |i: usize| &Poly::var(m, i) * &Poly::var(m, i);
        let xx = (0..self.r).fold(Poly::zero(m), |acc, i| acc + sq(i));
        let yy = (self.r..m).fold(Poly::zero(m), |acc, i| acc + sq(i));
        (xx, yy)
    }

    pub fn identity_holds(&self) -> bool {
        let f = self.to_map();
        let (xx, yy) = self.factor_norms();
        inner_poly(&f, &f).expect("same shape") == &xx * &yy
    }

    pub fn eval(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.n];
        for (xi, ti) in x.iter().zip(&self.tensor) {
            for (yj, tij) in y.iter().zip(ti) {
                let w = xi * yj;
                if w.is_zero() {
                    continue;
                }
                for (o, t) in out.iter_mut().zip(tij) {
                    *o += &w * t;
                }
            }
        }
        out
    }
}

/// The Hurwitz-Radon pairing `f(x, y) = phi(x0 + x1 e1 + .. + x(r-1) e(r-1)) y`
/// of size `[r, n, n]`, with `phi` acting block-diagonally through copies of
/// the representation of `Cliff(r - 1)`.
pub fn normed_pairing(r: usize, n: usize) -> Result<NormedPairing> {
    if r == 0 || n == 0 {
        return Err(Error::OutOfRange {
            what: "pairing dimension",
            value: 0,
            range: ">= 1",
        });
    }
    let rho_n = rho(n as u64) as usize;
    if r > rho_n {
        return Err(Error::SizeInfeasible { r, n, rho: rho_n });
    }
    let rep = clifford_generators(r - 1)?;
    let d = rep.dim();
    debug_assert_eq!(n % d, 0, "r <= rho(n) forces the block size to divide n");
    let mut tensor = vec![vec![vec![Rational::zero(); n]; n]; r];
    for c in 0..n {
        tensor[0][c][c] = Rational::one();
    }
    for (i, e) in rep.generators().iter().enumerate() {
        for block in 0..n / d {
            for row in 0..d {
                let (col, sign) = e.entry(row);
                tensor[i + 1][block * d + col][block * d + row] = int(sign as i64);
            }
        }
    }
    let f = NormedPairing { r, s: n, n, tensor };
    assert!(f.identity_holds(), "pairing [{r},{n},{n}] fails <f,f> = <x,x><y,y>");
    Ok(f)
}

/// Outcome of the Stiefel-Hopf parity test. It is a necessary condition
/// for a nonsingular bilinear map of size `[r, s, n]`: passing it only
/// means that no obstruction was found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StiefelHopf {
    pub no_obstruction: bool,
    /// Every `k` with `n - r < k < s` and `C(n, k)` odd.
    pub odd_binomials: Vec<usize>,
}

/// `C(n, k)` is odd iff the binary digits of `k` are a subset of those of
/// `n` (Lucas).
pub fn binomial_is_odd(n: usize, k: usize) -> bool {
    k <= n && k & n == k
}

pub fn stiefel_hopf_feasible(r: usize, s: usize, n: usize) -> Result<StiefelHopf> {
    if r == 0 || s == 0 || n == 0 {
        return Err(Error::OutOfRange {
            what: "pairing dimension",
            value: 0,
            range: ">= 1",
        });
    }
    let lo = (n + 1).saturating_sub(r);
    let odd_binomials: Vec<usize> = (lo..s).filter(|&k| binomial_is_odd(n, k)).collect();
    Ok(StiefelHopf {
        no_obstruction: odd_binomials.is_empty(),
        odd_binomials,
    })
}

/// `H_f(x, y) = (2 f(x, y), <x,x> - <y,y>)`, a quadratic map
/// `S^(r+s-1) -> S^n`.
pub fn hopf_map(f: &NormedPairing) -> QuadSphereMap {
    let (xx, yy) = f.factor_norms();
    let mut coords: Vec<Poly> = f
        .to_map()
        .into_coords()
        .into_iter()
        .map(|c| c.scale(&int(2)))
        .collect();
    coords.push(&xx - &yy);
    let m = f.r + f.s;
    let map = PolyMap::new(m, coords).expect("quadratic");
    QuadSphereMap::new(map, QuadForm::euclidean(m)).expect("<H,H> = (<x,x> + <y,y>)^2 for a normed pairing")
}

/// `f / <x,x>`: takes every line in `R^r (+) R^s` to a circle. The
/// denominator vanishes at the origin, so the result is a global
/// line-to-circle map rather than a germ at 0
/// ([`FracQuadMap::represents_germ`] is false).
pub fn pairing_to_rounding(f: &NormedPairing) -> FracQuadMap {
    let (xx, _) = f.factor_norms();
    FracQuadMap::new(f.to_map(), xx).expect("<f,f> = <x,x><y,y> is divisible by <x,x>")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::frac;

    #[test]
    fn rho_examples() {
        let got: Vec<u64> = (1..=16).map(rho).collect();
        assert_eq!(got, vec![1, 2, 1, 4, 1, 2, 1, 8, 1, 2, 1, 4, 1, 2, 1, 9]);
        assert_eq!(rho(48), rho(16));
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(
            (1..=4).map(|m| kappa(m).unwrap()).collect::<Vec<_>>(),
            vec![1, 2, 2, 4]
        );
        assert_eq!(kappa(9).unwrap(), 8);
        assert_eq!(kappa(25).unwrap(), 24);
        assert!(kappa(0).is_err());
        assert!(kappa(KAPPA_MAX + 1).is_err());
        assert!(kappa(KAPPA_MAX).is_ok());
    }

    #[test]
    fn generator_examples() {
        let c1 = clifford_generators(1).unwrap();
        assert_eq!(c1.dim(), 2);
        assert_eq!(
            c1.generators()[0].to_dense(),
            vec![vec![int(0), int(-1)], vec![int(1), int(0)]]
        );
        let c0 = clifford_generators(0).unwrap();
        assert_eq!((c0.dim(), c0.generators().len()), (1, 0));
        let dims: Vec<usize> = (0..=16).map(|k| clifford_generators(k).unwrap().dim()).collect();
        assert_eq!(
            dims,
            vec![1, 2, 4, 4, 8, 8, 8, 8, 16, 32, 64, 64, 128, 128, 128, 128, 256]
        );
        assert!(clifford_generators(25).is_err());
    }

    #[test]
    fn quaternion_generators_match_hamilton() {
        // (q y) for q in {i, j, k} with the Hamilton product
        fn hamilton(a: [i64; 4], b: [i64; 4]) -> [i64; 4] {
            [
                a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
                a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
                a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
                a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
            ]
        }
        let rep = clifford_generators(3).unwrap();
        let units = [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];
        for (e, u) in rep.generators().iter().zip(units) {
            for j in 0..4 {
                let mut y = [0i64; 4];
                y[j] = 1;
                let want = hamilton(u, y);
                let got: Vec<i64> = (0..4)
                    .map(|row| {
                        let (c, s) = e.entry(row);
                        s as i64 * y[c]
                    })
                    .collect();
                assert_eq!(got, want.to_vec());
            }
        }
    }

    #[test]
    fn pairing_examples() {
        let c = normed_pairing(2, 2).unwrap();
        let (x, y) = ([int(1), int(2)], [int(3), int(5)]);
        // (1 + 2i)(3 + 5i) = -7 + 11i
        assert_eq!(c.eval(&x, &y), vec![int(-7), int(11)]);
        let q = normed_pairing(4, 4).unwrap();
        assert_eq!(q.size(), [4, 4, 4]);
        let scalar = normed_pairing(1, 3).unwrap();
        assert_eq!(scalar.eval(&[frac(1, 2)], &[int(2), int(4), int(6)]), vec![int(1), int(2), int(3)]);
        assert_eq!(
            normed_pairing(3, 2),
            Err(Error::SizeInfeasible { r: 3, n: 2, rho: 2 })
        );
    }

    #[test]
    fn stiefel_examples() {
        assert!(stiefel_hopf_feasible(2, 2, 2).unwrap().no_obstruction);
        let sh = stiefel_hopf_feasible(3, 5, 6).unwrap();
        assert!(!sh.no_obstruction);
        assert_eq!(sh.odd_binomials, vec![4]);
        assert!(stiefel_hopf_feasible(1, 7, 7).unwrap().no_obstruction);
    }

    #[test]
    fn hopf_examples() {
        let h = hopf_map(&normed_pairing(2, 2).unwrap());
        assert_eq!(
            h.map().eval(&[int(1), int(0), int(0), int(0)]),
            vec![int(0), int(0), int(1)]
        );
        let h1 = hopf_map(&normed_pairing(1, 1).unwrap());
        let (x, y) = (Poly::var(2, 0), Poly::var(2, 1));
        assert_eq!(h1.map().coords()[0], (&x * &y).scale(&int(2)));
        assert_eq!(h1.map().coords()[1], &(&x * &x) - &(&y * &y));
        hopf_map(&normed_pairing(4, 4).unwrap());
    }

    #[test]
    fn pairing_rounding_examples() {
        let c = pairing_to_rounding(&normed_pairing(2, 2).unwrap());
        assert!(!c.represents_germ());
        assert_eq!(
            c.eval(&[int(1), int(0), int(2), int(3)]).unwrap(),
            vec![int(2), int(3)]
        );
        let r1 = pairing_to_rounding(&normed_pairing(1, 2).unwrap());
        assert_eq!(r1.eval(&[int(2), int(4), int(6)]).unwrap(), vec![int(2), int(3)]);
        let q = pairing_to_rounding(&normed_pairing(4, 4).unwrap());
        let y = [int(3), int(-1), frac(1, 2), int(7)];
        let mut point = vec![int(1), int(0), int(0), int(0)];
        point.extend(y.iter().cloned());
        assert_eq!(q.eval(&point).unwrap(), y.to_vec());
    }
}
