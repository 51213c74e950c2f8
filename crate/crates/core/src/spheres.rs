//! Quadratic maps between unit spheres obtained from nondegenerate
//! roundings.
//!
//! The canonical rounding `F/Q` is homogenized with an extra last
//! coordinate `t`. Writing `Q1 = Q~` and `Q2 = <F~,F~> / Q~`, the map
//! `f = (2F~, Q1 - Q2)` satisfies `<f,f> = (Q1 + Q2)^2` identically, so it
//! sends the unit sphere of the metric `G = Q1 + Q2` to the unit sphere.
//! `G` is positive definite exactly when the jet is nondegenerate.

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;


use crate::jets::{canonical_rounding, FracQuadMap, RoundingJet};
use crate::polycore::form::{QuadForm, Signature};
use crate::polycore::linalg::Matrix;
use crate::polycore::poly::Poly;
use crate::polycore::polymap::{inner_poly, PolyMap};
use crate::polycore::{int, to_f64, Rational};
use crate::{Error, Result};

/// Guard on denominators in [`QuadSphereMap::evaluate_factored`].
pub const CHART_EPS: f64 = 1e-9;

/// Homogenized numerator and denominator on `R^(m+1)`, `t` last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogenizedMap {
    numerator: PolyMap,
    denominator: QuadForm,
}

impl HomogenizedMap {
    pub fn numerator(&self) -> &PolyMap {
        &self.numerator
    }

    pub fn denominator(&self) -> &QuadForm {
        &self.denominator
    }

    /// Setting `t = 1` gives back `(F, Q)`.
    pub fn dehomogenize(&self) -> (PolyMap, Poly) {
        let m = self.numerator.source_dim() - 1;
        let mut images: Vec<Poly> = (0..m).map(|i| Poly::var(m, i)).collect();
        images.push(Poly::one(m));
        let f = self
            .numerator
            .coords()
            .iter()
            .map(|c| c.substitute(&images))
            .collect();
        (
            PolyMap::new(m, f).expect("degree 2"),
            self.denominator.to_poly().substitute(&images),
        )
    }
}

/// Homogenizes a fractional quadratic map normalized by `Q(0) = 1`.
pub fn homogenize(phi: &FracQuadMap) -> Result<HomogenizedMap> {
    if phi.denominator().constant_term() != int(1) {
        return Err(Error::WrongDegree {
            expected: "denominator with constant term 1",
            got: format!("{}", phi.denominator()),
        });
    }
    let m = phi.source_dim();
    let coords = phi
        .numerator()
        .coords()
        .iter()
        .map(|c| c.homogenize(2))
        .collect::<Result<Vec<_>>>()?;
    Ok(HomogenizedMap {
        numerator: PolyMap::new(m + 1, coords)?,
        denominator: QuadForm::from_poly(&phi.denominator().homogenize(2)?)?,
    })
}

/// `(Q1, Q2)` with `Q1 = Q~` and `<F~,F~> = Q1 * Q2`, both signs chosen
/// nonnegative.
pub fn split_norm(h: &HomogenizedMap) -> Result<(QuadForm, QuadForm)> {
    let ff = inner_poly(&h.numerator, &h.numerator)?;
    let (quotient, rem) = ff.div_rem(&h.denominator.to_poly())?;
    if !rem.is_zero() {
        return Err(Error::DenominatorDoesNotDivide { remainder: rem });
    }
    if !quotient.is_homogeneous(2) {
        return Err(Error::Q2NotQuadratic);
    }
    let q1 = h.denominator.clone();
    let q2 = QuadForm::from_poly(&quotient)?;
    let sig = q1.signature();
    if sig.positive == 0 && sig.negative > 0 {
        let minus = -Rational::from_integer(1.into());
        return Ok((q1.scale(&minus), q2.scale(&minus)));
    }
    Ok((q1, q2))
}

/// A homogeneous quadratic `f: R^(m+1) -> R^(n+1)` with
/// `<f(x), f(x)> = G(x)^2` for a positive definite form `G`, so `f` maps
/// the `G`-unit sphere onto the unit sphere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadSphereMap {
    map: PolyMap,
    metric: QuadForm,
    lower: Matrix,
    diag: Vec<Rational>,
}

impl QuadSphereMap {
    /// Checks positivity of `metric` and the identity `<f,f> = G^2`
    /// exactly, then factors `G = L D L^T`.
    pub fn new(map: PolyMap, metric: QuadForm) -> Result<Self> {
        if metric.dim() != map.source_dim() {
            return Err(Error::DimensionMismatch(format!(
                "metric on R^{}, map on R^{}",
                metric.dim(),
                map.source_dim()
            )));
        }
        if !map.is_homogeneous(2) {
            return Err(Error::WrongDegree {
                expected: "homogeneous quadratic map",
                got: format!("{:?}", map.coords()),
            });
        }
        let signature = metric.signature();
        if !signature.is_positive_definite() {
            return Err(Error::Degenerate {
                signature,
                witness: metric.diagonalize().radical.into_iter().next(),
            });
        }
        let g = metric.to_poly();
        if inner_poly(&map, &map)? != &g * &g {
            return Err(Error::WrongDegree {
                expected: "<f,f> = G^2",
                got: "a map that does not preserve the unit sphere".into(),
            });
        }
        let (lower, diag) = metric.ldl().expect("positive definite");
        Ok(QuadSphereMap {
            map,
            metric,
            lower,
            diag,
        })
    }

    pub fn map(&self) -> &PolyMap {
        &self.map
    }

    pub fn metric(&self) -> &QuadForm {
        &self.metric
    }

    /// `(L, D)` with `G = L D L^T`, `L` unit lower triangular.
    pub fn normalizer(&self) -> (&Matrix, &[Rational]) {
        (&self.lower, &self.diag)
    }

    pub fn signature(&self) -> Signature {
        self.metric.signature()
    }

    /// Source dimension `m + 1`.
    pub fn source_dim(&self) -> usize {
        self.map.source_dim()
    }

    /// Target dimension `n + 1`.
    pub fn target_dim(&self) -> usize {
        self.map.target_dim()
    }

    /// Euclidean coordinates `u = sqrt(D) L^T x`, in which `G` is `|u|^2`.
    pub fn to_euclidean(&self, x: &[f64]) -> Vec<f64> {
        let k = self.source_dim();
        (0..k)
            .map(|j| {
                let s: f64 = (j..k).map(|i| to_f64(&self.lower[i][j]) * x[i]).sum();
                to_f64(&self.diag[j]).sqrt() * s
            })
            .collect()
    }

    /// Inverse of [`Self::to_euclidean`].
    pub fn from_euclidean(&self, u: &[f64]) -> Vec<f64> {
        let k = self.source_dim();
        let w: Vec<f64> = u
            .iter()
            .zip(&self.diag)
            .map(|(ui, d)| ui / to_f64(d).sqrt())
            .collect();
        // solve L^T x = w from the bottom
        let mut x = alloc::vec![0.0; k];
        for j in (0..k).rev() {
            let s: f64 = (j + 1..k).map(|i| to_f64(&self.lower[i][j]) * x[i]).sum();
            x[j] = w[j] - s;
        }
        x
    }

    pub fn eval_f64(&self, x: &[f64]) -> Vec<f64> {
        self.map.eval_f64(x)
    }

    /// Chart `R^m -> R^n`: embeds `x` at height `t = 1`, normalizes to the
    /// `G`-unit sphere, applies `f`, then projects stereographically from
    /// `-e_(n+1)` onto the hyperplane `y_(n+1) = 0`. The point above the
    /// origin goes to `e_(n+1)` under `f` and then to 0.
    pub fn evaluate_factored(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() + 1 != self.source_dim() {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, chart expects {}",
                x.len(),
                self.source_dim() - 1
            )));
        }
        let mut v = x.to_vec();
        v.push(1.0);
        let g = self.metric.eval_f64(&v);
        if g < CHART_EPS {
            return Err(Error::PoleProximity(g));
        }
        let scale = g.sqrt().recip();
        v.iter_mut().for_each(|c| *c *= scale);
        let mut y = self.map.eval_f64(&v);
        let last = y.pop().expect("target has a last coordinate");
        let denom = 1.0 + last;
        if denom < CHART_EPS {
            return Err(Error::PoleProximity(denom));
        }
        Ok(y.into_iter().map(|c| c / denom).collect())
    }
}

/// Lifts a nondegenerate rounding jet to a quadratic map between spheres.
pub fn sphere_lift(rj: &RoundingJet) -> Result<QuadSphereMap> {
    let phi = canonical_rounding(rj);
    let h = homogenize(&phi)?;
    let (q1, q2) = split_norm(&h)?;
    let metric = q1.add(&q2);
    let two = int(2);
    let mut coords: Vec<Poly> = h.numerator.coords().iter().map(|c| c.scale(&two)).collect();
    coords.push(&q1.to_poly() - &q2.to_poly());
    let map = PolyMap::new(h.numerator.source_dim(), coords)?;
    QuadSphereMap::new(map, metric)
}
