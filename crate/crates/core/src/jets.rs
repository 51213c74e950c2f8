//! 2-jets of roundings: validation, the canonical fractional quadratic
//! representative, degeneracy, factoring through projections and
//! equivalence.
//!
//! A 2-jet `(A, B)` pairs a linear map with a homogeneous quadratic map
//! `R^m -> R^n`. It is the 2-jet of a rounding exactly when `<A,B>` and
//! `<B,B>` are divisible by `<A,A>`; the quotients `p` (linear) and `q`
//! (quadratic) carry all further information used here.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::DivisibilityCondition;
use crate::polycore::form::{QuadForm, Signature};
use crate::polycore::linalg::{self, Matrix};
use crate::polycore::poly::Poly;
use crate::polycore::polymap::{inner_poly, rank_linear, PolyMap};
use crate::polycore::{to_f64, Rational};
use crate::{Error, Result};

/// Linear part `A` and homogeneous quadratic part `B` of a map germ.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Jet2 {
    linear: PolyMap,
    quadratic: PolyMap,
}

impl Jet2 {
    pub fn new(linear: PolyMap, quadratic: PolyMap) -> Result<Self> {
        if linear.source_dim() != quadratic.source_dim()
            || linear.target_dim() != quadratic.target_dim()
        {
            return Err(Error::DimensionMismatch(format!(
                "linear part is R^{} -> R^{}, quadratic part R^{} -> R^{}",
                linear.source_dim(),
                linear.target_dim(),
                quadratic.source_dim(),
                quadratic.target_dim()
            )));
        }
        if !linear.is_homogeneous(1) {
            return Err(Error::WrongDegree {
                expected: "homogeneous linear part",
                got: format!("{:?}", linear.coords()),
            });
        }
        if !quadratic.is_homogeneous(2) {
            return Err(Error::WrongDegree {
                expected: "homogeneous quadratic part",
                got: format!("{:?}", quadratic.coords()),
            });
        }
        Ok(Jet2 { linear, quadratic })
    }

    /// From the `n x m` matrix of `A` and one symmetric form per coordinate
    /// of `B`.
    pub fn from_parts(linear: &[Vec<Rational>], quadratic: &[QuadForm], source_dim: usize) -> Result<Self> {
        Jet2::new(
            PolyMap::from_matrix(linear, source_dim)?,
            PolyMap::from_forms(quadratic, source_dim)?,
        )
    }

    pub fn source_dim(&self) -> usize {
        self.linear.source_dim()
    }

    pub fn target_dim(&self) -> usize {
        self.linear.target_dim()
    }

    pub fn linear(&self) -> &PolyMap {
        &self.linear
    }

    pub fn quadratic(&self) -> &PolyMap {
        &self.quadratic
    }

    /// The equivalent jet `(lambda A, lambda^2 B + l A)`.
    pub fn transform(&self, lambda: &Rational, l: &Poly) -> Result<Jet2> {
        if l.num_vars() != self.source_dim() || !l.is_homogeneous(1) {
            return Err(Error::WrongDegree {
                expected: "linear functional on the source",
                got: format!("{l}"),
            });
        }
        let linear = self.linear.scale(lambda);
        let quadratic = self
            .quadratic
            .scale(&(lambda * lambda))
            .add(&self.linear.mul_poly(l)?)?;
        Jet2::new(linear, quadratic)
    }

    /// `A + B` as a single map.
    pub fn sum(&self) -> PolyMap {
        self.linear.add(&self.quadratic).expect("same shape")
    }
}

/// A 2-jet together with the divisibility witnesses
/// `<A,B> = p <A,A>` and `<B,B> = q <A,A>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundingJet {
    jet: Jet2,
    p: Poly,
    q: Poly,
    rank: usize,
}

impl RoundingJet {
    pub fn jet(&self) -> &Jet2 {
        &self.jet
    }

    pub fn into_jet(self) -> Jet2 {
        self.jet
    }

    /// Linear quotient `<A,B> / <A,A>`.
    pub fn p(&self) -> &Poly {
        &self.p
    }

    /// Quadratic quotient `<B,B> / <A,A>`.
    pub fn q(&self) -> &Poly {
        &self.q
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn source_dim(&self) -> usize {
        self.jet.source_dim()
    }

    pub fn target_dim(&self) -> usize {
        self.jet.target_dim()
    }

    /// `q - p^2`, the form whose zeros on `ker A` make the jet degenerate.
    pub fn defect_form(&self) -> QuadForm {
        QuadForm::from_poly(&(&self.q - &(&self.p * &self.p))).expect("q - p^2 is a quadratic form")
    }
}

/// Checks that a jet can be the 2-jet of a rounding of rank at least 2
/// and returns the quotients `p`, `q`.
pub fn validate_jet(jet: &Jet2) -> Result<RoundingJet> {
    let rank = rank_linear(&jet.linear)?;
    if rank < 2 {
        return Err(Error::RankTooLow { rank });
    }
    let aa = inner_poly(&jet.linear, &jet.linear)?;
    let ab = inner_poly(&jet.linear, &jet.quadratic)?;
    let bb = inner_poly(&jet.quadratic, &jet.quadratic)?;
    let (p, rem) = ab.div_rem(&aa)?;
    if !rem.is_zero() {
        return Err(Error::NotDivisible {
            condition: DivisibilityCondition::LinearQuadratic,
            remainder: rem,
        });
    }
    let (q, rem) = bb.div_rem(&aa)?;
    if !rem.is_zero() {
        return Err(Error::NotDivisible {
            condition: DivisibilityCondition::QuadraticQuadratic,
            remainder: rem,
        });
    }
    Ok(RoundingJet {
        jet: jet.clone(),
        p,
        q,
        rank,
    })
}

/// A fractional quadratic map `F / Q` with `<F,F>` divisible by `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FracQuadMap {
    numerator: PolyMap,
    denominator: Poly,
    norm_quotient: Poly,
}

impl FracQuadMap {
    pub fn new(numerator: PolyMap, denominator: Poly) -> Result<Self> {
        if denominator.num_vars() != numerator.source_dim() {
            return Err(Error::DimensionMismatch(format!(
                "denominator has {} variables, numerator source is R^{}",
                denominator.num_vars(),
                numerator.source_dim()
            )));
        }
        if denominator.degree().unwrap_or(0) > 2 {
            return Err(Error::WrongDegree {
                expected: "denominator of degree at most 2",
                got: format!("{denominator}"),
            });
        }
        let ff = inner_poly(&numerator, &numerator)?;
        let (norm_quotient, rem) = ff.div_rem(&denominator)?;
        if !rem.is_zero() {
            return Err(Error::DenominatorDoesNotDivide { remainder: rem });
        }
        Ok(FracQuadMap {
            numerator,
            denominator,
            norm_quotient,
        })
    }

    pub fn numerator(&self) -> &PolyMap {
        &self.numerator
    }

    pub fn denominator(&self) -> &Poly {
        &self.denominator
    }

    /// `<F,F> / Q`, a polynomial of degree at most 2.
    pub fn norm_quotient(&self) -> &Poly {
        &self.norm_quotient
    }

    pub fn source_dim(&self) -> usize {
        self.numerator.source_dim()
    }

    pub fn target_dim(&self) -> usize {
        self.numerator.target_dim()
    }

    /// True when the map is a germ at the origin sending 0 to 0, i.e.
    /// `Q(0) != 0` and `F(0) = 0`. Maps built from normed pairings have
    /// `Q(0) = 0` and are global line-to-circle maps instead.
    pub fn represents_germ(&self) -> bool {
        !self.denominator.constant_term().is_zero()
            && self.numerator.constant_part().iter().all(Zero::is_zero)
    }

    /// `F(x) / Q(x)`, or `None` where `Q` vanishes.
    pub fn eval(&self, x: &[Rational]) -> Option<Vec<Rational>> {
        let d = self.denominator.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(self.numerator.eval(x).into_iter().map(|v| v / &d).collect())
    }

    pub fn eval_f64(&self, x: &[f64]) -> Option<Vec<f64>> {
        let d = self.denominator.eval_f64(x);
        if d == 0.0 {
            return None;
        }
        Some(self.numerator.eval_f64(x).into_iter().map(|v| v / d).collect())
    }

    /// The 2-jet at the origin. Requires [`Self::represents_germ`].
    pub fn two_jet(&self) -> Result<Jet2> {
        if !self.represents_germ() {
            return Err(Error::NotDefined);
        }
        let c = self.denominator.constant_term();
        let inv = Rational::one() / &c;
        let f = self.numerator.scale(&inv);
        let q1 = self.denominator.homogeneous_part(1).scale(&inv);
        let a = f.homogeneous_part(1);
        let b = f.homogeneous_part(2).sub(&a.mul_poly(&q1)?)?;
        Jet2::new(a, b)
    }
}

/// `(A + B - 2pA) / (1 - 2p + q)`: a fractional quadratic map with 2-jet
/// `A + B` that takes every line (not only lines through 0) to a circle.
pub fn canonical_rounding(rj: &RoundingJet) -> FracQuadMap {
    let m = rj.source_dim();
    let jet = &rj.jet;
    let two = Rational::from_integer(BigInt::from(2));
    let two_p = rj.p.scale(&two);
    let numerator = jet
        .sum()
        .sub(&jet.linear.mul_poly(&two_p).expect("p linear"))
        .expect("same shape");
    let denominator = &(&Poly::one(m) - &two_p) + &rj.q;
    let aa = inner_poly(&jet.linear, &jet.linear).expect("same shape");
    let ff = inner_poly(&numerator, &numerator).expect("same shape");
    assert_eq!(ff, &denominator * &aa, "<F,F> = (1 - 2p + q) <A,A> must hold exactly");
    FracQuadMap {
        numerator,
        denominator,
        norm_quotient: aa,
    }
}

/// A nonzero real zero of `q - p^2` on `ker A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DegeneracyWitness {
    Rational(Vec<Rational>),
    /// The vector `base + sqrt(radicand) * direction`, with `radicand` a
    /// positive rational that is not a square.
    QuadraticExtension {
        base: Vec<Rational>,
        radicand: Rational,
        direction: Vec<Rational>,
    },
}

impl DegeneracyWitness {
    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            DegeneracyWitness::Rational(v) => v.iter().map(to_f64).collect(),
            DegeneracyWitness::QuadraticExtension {
                base,
                radicand,
                direction,
            } => {
                let s = num_traits::Float::sqrt(to_f64(radicand));
                base.iter()
                    .zip(direction)
                    .map(|(b, d)| to_f64(b) + s * to_f64(d))
                    .collect()
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Degeneracy {
    pub degenerate: bool,
    pub witness: Option<DegeneracyWitness>,
    /// Rational basis of `ker A` (reduced row echelon convention).
    pub kernel: Matrix,
    /// Inertia of `q - p^2` restricted to `ker A`.
    pub restricted_signature: Signature,
}

fn combine(basis: &[Vec<Rational>], coeffs: &[Rational], dim: usize) -> Vec<Rational> {
    let mut out = alloc::vec![Rational::zero(); dim];
    for (v, c) in basis.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            *o += c * x;
        }
    }
    out
}

fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Decides degeneracy: is there a nonzero `x0` with `A(x0) = 0` and
/// `q(x0) = p(x0)^2`? Equivalently, is `q - p^2` restricted to `ker A`
/// not definite?
pub fn is_degenerate(rj: &RoundingJet) -> Degeneracy {
    let m = rj.source_dim();
    let kernel = linalg::nullspace(&rj.jet.linear.linear_matrix(), m);
    let restricted = rj.defect_form().restrict(&kernel);
    let diag = restricted.diagonalize();
    let sig = restricted.signature();
    let degenerate = !kernel.is_empty() && !sig.is_definite();
    let witness = if !degenerate {
        None
    } else if let Some(r) = diag.radical.first() {
        Some(DegeneracyWitness::Rational(combine(&kernel, r, m)))
    } else {
        // indefinite: d_i > 0 > d_j, so v_i + sqrt(d_i / -d_j) v_j is isotropic
        let i = diag.values.iter().position(Signed::is_positive).expect("indefinite");
        let j = diag.values.iter().position(Signed::is_negative).expect("indefinite");
        let radicand = &diag.values[i] / -&diag.values[j];
        let base = combine(&kernel, &diag.vectors[i], m);
        let direction = combine(&kernel, &diag.vectors[j], m);
        Some(match rational_sqrt(&radicand) {
            Some(s) => DegeneracyWitness::Rational(
                base.iter().zip(&direction).map(|(b, d)| b + &s * d).collect(),
            ),
            None => DegeneracyWitness::QuadraticExtension {
                base,
                radicand,
                direction,
            },
        })
    };
    Degeneracy {
        degenerate,
        witness,
        kernel,
        restricted_signature: sig,
    }
}

/// The equivalent jet `(A, B - pA)`, for which `p' = 0` and
/// `q' = q - p^2`.
pub fn normalize_p(rj: &RoundingJet) -> RoundingJet {
    if rj.p.is_zero() {
        return rj.clone();
    }
    let jet = rj
        .jet
        .transform(&Rational::one(), &-&rj.p)
        .expect("p is linear");
    RoundingJet {
        jet,
        p: Poly::zero(rj.source_dim()),
        q: &rj.q - &(&rj.p * &rj.p),
        rank: rj.rank,
    }
}

/// A degenerate jet written as a jet on a quotient space composed with a
/// projection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    /// `k x m` projection `R^m -> R^k` (reduced row echelon rows).
    pub projection: Matrix,
    /// Jet on `R^k` with `A = A~ . pi` and `B - pA = B~ . pi`.
    pub reduced: RoundingJet,
    /// Basis of `ker A ∩ ker B'`, the kernel of the projection.
    pub common_kernel: Matrix,
}

/// Factors a degenerate jet through the projection along
/// `ker A ∩ ker (B - pA)`.
pub fn factor_degenerate(rj: &RoundingJet) -> Result<Factorization> {
    if !is_degenerate(rj).degenerate {
        return Err(Error::NotDegenerate);
    }
    let m = rj.source_dim();
    let normalized = normalize_p(rj);
    let a = normalized.jet.linear.linear_matrix();
    let forms = normalized.jet.quadratic.quadratic_forms();
    let mut stacked = a.clone();
    for f in &forms {
        stacked.extend(f.matrix().iter().cloned());
    }
    let common_kernel = linalg::nullspace(&stacked, m);
    if common_kernel.is_empty() {
        return Err(Error::IrrationalKernelWitness);
    }
    let (projection, pivots) = linalg::rref(&stacked, m);
    let k = pivots.len();
    // rows of `projection` carry an identity block in the pivot columns,
    // so any vector in their span is recovered from its pivot entries
    let reduced_linear: Matrix = a
        .iter()
        .map(|row| pivots.iter().map(|&c| row[c].clone()).collect())
        .collect();
    let reduced_forms = forms
        .iter()
        .map(|f| {
            QuadForm::new(
                pivots
                    .iter()
                    .map(|&r| pivots.iter().map(|&c| f.matrix()[r][c].clone()).collect())
                    .collect(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let reduced = validate_jet(&Jet2::from_parts(&reduced_linear, &reduced_forms, k)?)?;
    Ok(Factorization {
        projection,
        reduced,
        common_kernel,
    })
}

/// Finds a linear `l` with `C = l * A`, if one exists.
pub fn parallel_factor(a: &PolyMap, c: &PolyMap) -> Result<Option<Poly>> {
    let rank = rank_linear(a)?;
    if rank < 2 {
        return Err(Error::RankTooLow { rank });
    }
    if c.source_dim() != a.source_dim() || c.target_dim() != a.target_dim() {
        return Err(Error::DimensionMismatch(format!(
            "C is R^{} -> R^{}, A is R^{} -> R^{}",
            c.source_dim(),
            c.target_dim(),
            a.source_dim(),
            a.target_dim()
        )));
    }
    if !c.is_homogeneous(2) {
        return Err(Error::WrongDegree {
            expected: "homogeneous quadratic map",
            got: format!("{:?}", c.coords()),
        });
    }
    let m = a.source_dim();
    let am = a.linear_matrix();
    let cf = c.quadratic_forms();
    // coefficient of x_j x_k in l(x) A_i(x), written with the symmetric
    // matrix convention: S_jk = (l_j a_ik + l_k a_ij) / 2
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (ai, form) in am.iter().zip(&cf) {
        for j in 0..m {
            for k in j..m {
                let mut row = alloc::vec![Rational::zero(); m];
                if j == k {
                    row[j] = ai[j].clone();
                } else {
                    row[j] = &ai[k] * &half;
                    row[k] = &ai[j] * &half;
                }
                rows.push(row);
                rhs.push(form.matrix()[j][k].clone());
            }
        }
    }
    Ok(linalg::solve(&rows, &rhs, m).map(|l| Poly::linear(&l)))
}

/// Witness `(lambda, l)` of `A2 = lambda A1`, `B2 = lambda^2 B1 + l A1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equivalence {
    pub lambda: Rational,
    pub l: Poly,
}

impl Equivalence {
    /// The witness for the reversed pair: `(1/lambda, -l/lambda^3)`.
    pub fn inverse(&self) -> Equivalence {
        let inv = Rational::one() / &self.lambda;
        let inv3 = &inv * &inv * &inv;
        Equivalence {
            lambda: inv,
            l: self.l.scale(&-inv3),
        }
    }
}

/// Decides whether two validated jets are equivalent and returns the
/// witness.
pub fn jets_equivalent(j1: &RoundingJet, j2: &RoundingJet) -> Option<Equivalence> {
    if j1.source_dim() != j2.source_dim() || j1.target_dim() != j2.target_dim() {
        return None;
    }
    let a1 = j1.jet.linear.linear_matrix();
    let a2 = j2.jet.linear.linear_matrix();
    let (i, j) = a1
        .iter()
        .enumerate()
        .find_map(|(i, row)| row.iter().position(|v| !v.is_zero()).map(|j| (i, j)))?;
    let lambda = &a2[i][j] / &a1[i][j];
    if lambda.is_zero() {
        return None;
    }
    let matches = a1
        .iter()
        .flatten()
        .zip(a2.iter().flatten())
        .all(|(x, y)| &(x * &lambda) == y);
    if !matches {
        return None;
    }
    let c = j2
        .jet
        .quadratic
        .sub(&j1.jet.quadratic.scale(&(&lambda * &lambda)))
        .ok()?;
    let l = parallel_factor(&j1.jet.linear, &c).ok()??;
    Some(Equivalence { lambda, l })
}

/// Divisibility verdict for the degree-`degree` homogeneous components of
/// `<A, Phi>` and `<Phi, Phi>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeVerdict {
    pub degree: usize,
    pub linear_pairing_divisible: bool,
    pub norm_divisible: bool,
}

impl DegreeVerdict {
    pub fn passed(&self) -> bool {
        self.linear_pairing_divisible && self.norm_divisible
    }
}

/// Checks the necessary divisibility conditions on a truncated power
/// series `Phi` (coordinates of degree at most `k`, no constant term).
///
/// `<A,A>` is homogeneous, so divisibility of a series is equivalent to
/// divisibility of each homogeneous component. Components of degree at
/// most `k + 1` do not depend on the discarded tail and are checked.
pub fn check_series_divisibility(series: &[Poly], k: usize) -> Result<Vec<DegreeVerdict>> {
    if !(1..=4).contains(&k) {
        return Err(Error::OutOfRange {
            what: "truncation degree",
            value: k,
            range: "1..=4",
        });
    }
    let m = series
        .first()
        .map(Poly::num_vars)
        .ok_or_else(|| Error::DimensionMismatch("empty series".into()))?;
    for (i, c) in series.iter().enumerate() {
        if c.num_vars() != m {
            return Err(Error::DimensionMismatch(format!(
                "coordinate {i} has {} variables, expected {m}",
                c.num_vars()
            )));
        }
        if !c.constant_term().is_zero() || c.degree().unwrap_or(0) > k {
            return Err(Error::WrongDegree {
                expected: "coordinates without constant term and of degree at most k",
                got: format!("coordinate {i} = {c}"),
            });
        }
    }
    // parts[d][i] = degree-d component of coordinate i
    let parts: Vec<Vec<Poly>> = (0..=k)
        .map(|d| series.iter().map(|c| c.homogeneous_part(d)).collect())
        .collect();
    let linear = PolyMap::new(m, parts[1].clone())?;
    let rank = rank_linear(&linear)?;
    if rank < 2 {
        return Err(Error::RankTooLow { rank });
    }
    let aa = inner_poly(&linear, &linear)?;
    let dot = |x: &[Poly], y: &[Poly]| {
        x.iter()
            .zip(y)
            .fold(Poly::zero(m), |acc, (u, v)| acc + u * v)
    };
    let mut verdicts = Vec::new();
    for degree in 2..=k + 1 {
        let pairing = dot(&parts[1], &parts[degree - 1]);
        let mut norm = Poly::zero(m);
        for a in 1..degree {
            let b = degree - a;
            if a <= k && b <= k {
                norm = norm + dot(&parts[a], &parts[b]);
            }
        }
        verdicts.push(DegreeVerdict {
            degree,
            linear_pairing_divisible: pairing.divide_exact(&aa)?.is_some(),
            norm_divisible: norm.divide_exact(&aa)?.is_some(),
        });
    }
    Ok(verdicts)
}
