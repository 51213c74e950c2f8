//! Images of lines under fractional maps.
//!
//! A set of points `y` lies in a circle (round circle, line or point) iff
//! the vectors `(y, <y,y>, 1)` span at most three dimensions. Along a line
//! `t -> F(t)/Q(t)` this is the rank of the polynomial curve
//! `t -> (Q F, <F,F>, Q^2)`, decided exactly over the rationals.

pub mod fit;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::jets::FracQuadMap;
use crate::polycore::linalg;
use crate::polycore::poly::Poly;
use crate::polycore::Rational;
use crate::{Error, Result};

pub use fit::{circle_fit, CircleFit, FitKind};

/// The affine line `base + t dir`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    base: Vec<Rational>,
    dir: Vec<Rational>,
}

impl Line {
    pub fn new(base: Vec<Rational>, dir: Vec<Rational>) -> Result<Self> {
        if base.len() != dir.len() {
            return Err(Error::DimensionMismatch(format!(
                "base in R^{}, direction in R^{}",
                base.len(),
                dir.len()
            )));
        }
        if dir.iter().all(Zero::is_zero) {
            return Err(Error::WrongDegree {
                expected: "nonzero direction",
                got: "the zero vector".into(),
            });
        }
        Ok(Line { base, dir })
    }

    /// The line `t dir` through the origin.
    pub fn through_origin(dir: Vec<Rational>) -> Result<Self> {
        Line::new(vec![Rational::zero(); dir.len()], dir)
    }

    pub fn base(&self) -> &[Rational] {
        &self.base
    }

    pub fn dir(&self) -> &[Rational] {
        &self.dir
    }

    pub fn dim(&self) -> usize {
        self.dir.len()
    }

    /// `base_i + dir_i t` as polynomials in one variable.
    pub fn parametrization(&self) -> Vec<Poly> {
        self.base
            .iter()
            .zip(&self.dir)
            .map(|(b, d)| &Poly::constant(1, b.clone()) + &Poly::var(1, 0).scale(d))
            .collect()
    }
}

/// `t -> F(t) / Q(t)` with univariate polynomial coordinates, together with
/// `<F,F>(t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalCurve {
    numerators: Vec<Poly>,
    denominator: Poly,
    norm_squared: Poly,
}

impl RationalCurve {
    pub fn new(numerators: Vec<Poly>, denominator: Poly) -> Result<Self> {
        if denominator.num_vars() != 1 || numerators.iter().any(|p| p.num_vars() != 1) {
            return Err(Error::DimensionMismatch("curve coordinates must be univariate".into()));
        }
        if denominator.is_zero() {
            return Err(Error::DenominatorVanishesIdentically);
        }
        let norm_squared = numerators.iter().fold(Poly::zero(1), |acc, f| acc + f * f);
        Ok(RationalCurve {
            numerators,
            denominator,
            norm_squared,
        })
    }

    pub fn numerators(&self) -> &[Poly] {
        &self.numerators
    }

    pub fn denominator(&self) -> &Poly {
        &self.denominator
    }

    pub fn norm_squared(&self) -> &Poly {
        &self.norm_squared
    }

    pub fn target_dim(&self) -> usize {
        self.numerators.len()
    }
}

/// `F(base + t dir)` and `Q(base + t dir)`.
pub fn restrict_to_line(phi: &FracQuadMap, line: &Line) -> Result<RationalCurve> {
    if line.dim() != phi.source_dim() {
        return Err(Error::DimensionMismatch(format!(
            "line in R^{}, map defined on R^{}",
            line.dim(),
            phi.source_dim()
        )));
    }
    let images = line.parametrization();
    let numerators = phi
        .numerator()
        .coords()
        .iter()
        .map(|f| f.substitute(&images))
        .collect();
    RationalCurve::new(numerators, phi.denominator().substitute(&images))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CircleRank {
    pub rank: usize,
    pub in_circle: bool,
}

/// Exact rank of the coefficient matrix of `t -> (Q F, <F,F>, Q^2)`.
pub fn circle_rank_exact(curve: &RationalCurve) -> CircleRank {
    let q = &curve.denominator;
    let mut columns: Vec<Poly> = curve.numerators.iter().map(|f| q * f).collect();
    columns.push(curve.norm_squared.clone());
    columns.push(q * q);
    let deg = columns.iter().filter_map(Poly::degree).max().unwrap_or(0);
    let matrix: linalg::Matrix = (0..=deg)
        .map(|k| columns.iter().map(|c| c.coeff(&[k as u8])).collect())
        .collect();
    let rank = linalg::bareiss_rank(&matrix);
    CircleRank {
        rank,
        in_circle: rank <= 3,
    }
}

/// Floating-point evaluation of a map `x -> F(x) / Q(x)` for the oracle.
pub trait FractionalMap {
    fn source_dim(&self) -> usize;
    fn numerator_f64(&self, x: &[f64]) -> Vec<f64>;
    fn denominator_f64(&self, x: &[f64]) -> f64;
}

impl FractionalMap for FracQuadMap {
    fn source_dim(&self) -> usize {
        FracQuadMap::source_dim(self)
    }

    fn numerator_f64(&self, x: &[f64]) -> Vec<f64> {
        self.numerator().eval_f64(x)
    }

    fn denominator_f64(&self, x: &[f64]) -> f64 {
        self.denominator().eval_f64(x)
    }
}

/// Quotient of polynomials of any degree, with no divisibility check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyFraction {
    numerators: Vec<Poly>,
    denominator: Poly,
}

impl PolyFraction {
    pub fn new(numerators: Vec<Poly>, denominator: Poly) -> Result<Self> {
        let m = denominator.num_vars();
        if numerators.iter().any(|p| p.num_vars() != m) {
            return Err(Error::DimensionMismatch("numerator and denominator variables differ".into()));
        }
        Ok(PolyFraction {
            numerators,
            denominator,
        })
    }

    pub fn numerators(&self) -> &[Poly] {
        &self.numerators
    }

    pub fn denominator(&self) -> &Poly {
        &self.denominator
    }
}

impl From<&FracQuadMap> for PolyFraction {
    fn from(phi: &FracQuadMap) -> Self {
        PolyFraction {
            numerators: phi.numerator().coords().to_vec(),
            denominator: phi.denominator().clone(),
        }
    }
}

impl FractionalMap for PolyFraction {
    fn source_dim(&self) -> usize {
        self.denominator.num_vars()
    }

    fn numerator_f64(&self, x: &[f64]) -> Vec<f64> {
        self.numerators.iter().map(|p| p.eval_f64(x)).collect()
    }

    fn denominator_f64(&self, x: &[f64]) -> f64 {
        self.denominator.eval_f64(x)
    }
}

/// Points per sampled line.
pub const SAMPLES_PER_LINE: usize = 24;
/// Fewest usable points for a line to count as a trial.
pub const MIN_SAMPLES: usize = 16;
/// Parameters with `|Q(t)| < POLE_GUARD (1 + t^2)` are skipped.
pub const POLE_GUARD: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct TrialResult {
    pub trial: usize,
    pub through_origin: bool,
    pub base: Vec<f64>,
    pub dir: Vec<f64>,
    pub points: usize,
    pub kind: FitKind,
    pub residual: f64,
    /// Residual divided by `max(1, spread of the sampled points)`.
    pub relative_residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NumericReport {
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    /// Largest relative residual over all evaluated trials.
    pub max_residual: f64,
    /// Trials whose relative residual exceeds `tol`, by trial index.
    pub violations: Vec<TrialResult>,
    /// Trials where fewer than [`MIN_SAMPLES`] points avoided the poles.
    pub skipped: usize,
}

impl NumericReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn sample_line<M: FractionalMap + ?Sized>(
    map: &M,
    base: &[f64],
    dir: &[f64],
) -> Vec<Vec<f64>> {
    let mut points = Vec::with_capacity(SAMPLES_PER_LINE);
    // evenly spaced on [-1, 1], then widening until enough points survive
    let mut span = 1.0;
    let mut round = 0;
    while points.len() < SAMPLES_PER_LINE && round < 6 {
        points.clear();
        for k in 0..SAMPLES_PER_LINE {
            let t = span * (-1.0 + 2.0 * (k as f64 + 0.5) / SAMPLES_PER_LINE as f64);
            let x: Vec<f64> = base.iter().zip(dir).map(|(b, d)| b + t * d).collect();
            let q = map.denominator_f64(&x);
            if q.abs() < POLE_GUARD * (1.0 + t * t) {
                continue;
            }
            points.push(map.numerator_f64(&x).into_iter().map(|v| v / q).collect());
        }
        if points.len() >= MIN_SAMPLES {
            break;
        }
        span *= 2.0;
        round += 1;
    }
    points
}

/// Maps random lines (even trials through the origin, odd trials affine)
/// and fits circles to the images. A trial is a violation when the fit
/// residual exceeds `tol` times `max(1, spread)` of the image points.
pub fn verify_rounding_numeric<M: FractionalMap + ?Sized>(
    map: &M,
    trials: usize,
    seed: u64,
    tol: f64,
) -> NumericReport {
    let m = map.source_dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = NumericReport {
        trials,
        seed,
        tol,
        max_residual: 0.0,
        violations: Vec::new(),
        skipped: 0,
    };
    for trial in 0..trials {
        let through_origin = trial % 2 == 0;
        let base: Vec<f64> = if through_origin {
            vec![0.0; m]
        } else {
            (0..m).map(|_| rng.random_range(-1.0..1.0)).collect()
        };
        let dir: Vec<f64> = loop {
            let d: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..1.0)).collect();
            if d.iter().map(|c| c * c).sum::<f64>() > 1e-4 {
                break d;
            }
        };
        let points = sample_line(map, &base, &dir);
        if points.len() < MIN_SAMPLES {
            report.skipped += 1;
            continue;
        }
        let fit = circle_fit(&points).expect("enough points");
        let relative = fit.residual / fit.spread.max(1.0);
        if relative > report.max_residual || relative.is_nan() {
            report.max_residual = relative;
        }
        if !(relative <= tol) {
            report.violations.push(TrialResult {
                trial,
                through_origin,
                base,
                dir,
                points: points.len(),
                kind: fit.kind,
                residual: fit.residual,
                relative_residual: relative,
            });
        }
    }
    report
}
