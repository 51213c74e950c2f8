//! Sparse multivariate polynomials over the rationals.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{to_f64, Rational};
use crate::{Error, Result};

/// Exponent vector `[e1, .., en]` standing for `x1^e1 * .. * xn^en`.
///
/// Ordered graded-lexicographically with `x1 < x2 < .. < xn`: total degree
/// first, ties broken by the exponent of the largest variable `xn`, then
/// `x(n-1)`, and so on.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u8>);

impl Monomial {
    pub fn new(exponents: Vec<u8>) -> Self {
        Monomial(exponents)
    }

    pub fn one(num_vars: usize) -> Self {
        Monomial(vec![0; num_vars])
    }

    pub fn var(num_vars: usize, index: usize) -> Self {
        let mut e = vec![0; num_vars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u8] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// True when `self` divides `other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`; only meaningful when `self.divides(other)`.
    fn cofactor_in(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in `num_vars` variables with rational coefficients.
///
/// Zero coefficients are never stored, so two polynomials are equal exactly
/// when their term maps are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    num_vars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(num_vars: usize) -> Self {
        Poly {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, c: Rational) -> Self {
        Self::term(num_vars, Monomial::one(num_vars), c)
    }

    pub fn one(num_vars: usize) -> Self {
        Self::constant(num_vars, Rational::one())
    }

    /// The coordinate function `x(index+1)`.
    pub fn var(num_vars: usize, index: usize) -> Self {
        assert!(index < num_vars, "variable index {index} out of range");
        Self::term(num_vars, Monomial::var(num_vars, index), Rational::one())
    }

    pub fn term(num_vars: usize, mono: Monomial, c: Rational) -> Self {
        assert_eq!(mono.0.len(), num_vars, "monomial arity");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mono, c);
        }
        Poly { num_vars, terms }
    }

    /// Builds a polynomial from (exponents, coefficient) pairs, combining
    /// repeated monomials.
    pub fn from_terms<I>(num_vars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u8>, Rational)>,
    {
        let mut p = Poly::zero(num_vars);
        for (e, c) in terms {
            assert_eq!(e.len(), num_vars, "monomial arity");
            p.add_term(Monomial(e), c);
        }
        p
    }

    /// Linear form `sum coeffs[i] * x(i+1)`.
    pub fn linear(coeffs: &[Rational]) -> Self {
        let n = coeffs.len();
        Poly::from_terms(
            n,
            coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (Monomial::var(n, i).0, c.clone())),
        )
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exponents: &[u8]) -> Rational {
        self.terms
            .get(&Monomial(exponents.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&vec![0; self.num_vars])
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn homogeneous_part(&self, degree: usize) -> Poly {
        Poly {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// True if every term has total degree `degree` (the zero polynomial
    /// is homogeneous of every degree).
    pub fn is_homogeneous(&self, degree: usize) -> bool {
        self.terms.keys().all(|m| m.degree() == degree)
    }

    fn add_term(&mut self, mono: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&mono) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&mono);
                }
            }
            None => {
                self.terms.insert(mono, c);
            }
        }
    }

    /// `self -= c * mono * g`
    fn sub_shifted(&mut self, g: &Poly, mono: &Monomial, c: &Rational) {
        for (m, gc) in &g.terms {
            self.add_term(m.mul(mono), -(c * gc));
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.num_vars);
        }
        Poly {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v * c))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(self.num_vars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.num_vars, "point arity");
        let mut sum = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                for _ in 0..e {
                    t *= x;
                }
            }
            sum += t;
        }
        sum
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), self.num_vars, "point arity");
        self.terms
            .iter()
            .map(|(m, c)| {
                m.0.iter()
                    .zip(point)
                    .fold(to_f64(c), |acc, (&e, &x)| acc * powi(x, e))
            })
            .sum()
    }

    /// Substitutes `images[i]` for `x(i+1)`. All images must share one
    /// variable count, which becomes the variable count of the result.
    pub fn substitute(&self, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.num_vars, "substitution arity");
        let target_vars = images.first().map_or(0, Poly::num_vars);
        // powers[i][e] = images[i]^e, built lazily up to the needed degree
        let mut powers: Vec<Vec<Poly>> = images
            .iter()
            .map(|p| {
                assert_eq!(p.num_vars, target_vars, "substitution images disagree");
                vec![Poly::one(target_vars)]
            })
            .collect();
        let mut out = Poly::zero(target_vars);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target_vars, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                let e = e as usize;
                while powers[i].len() <= e {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                if e > 0 {
                    t = &t * &powers[i][e];
                }
            }
            out = out + t;
        }
        out
    }

    /// Homogenizes to total degree `degree` with a new last variable.
    pub fn homogenize(&self, degree: usize) -> Result<Poly> {
        if let Some(d) = self.degree() {
            if d > degree {
                return Err(Error::WrongDegree {
                    expected: "degree within the homogenization degree",
                    got: alloc::format!("degree {d}"),
                });
            }
        }
        let n = self.num_vars + 1;
        Ok(Poly::from_terms(
            n,
            self.terms.iter().map(|(m, c)| {
                let mut e = m.0.clone();
                e.push((degree - m.degree()) as u8);
                (e, c.clone())
            }),
        ))
    }

    /// Quotient and remainder of multivariate division by a single divisor
    /// in graded-lexicographic order. A lone polynomial is a Groebner basis
    /// of the ideal it generates, so the remainder is zero exactly when
    /// `divisor` divides `self`.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        if self.num_vars != divisor.num_vars {
            return Err(Error::DimensionMismatch(alloc::format!(
                "dividend has {} variables, divisor {}",
                self.num_vars,
                divisor.num_vars
            )));
        }
        let (lead_mono, lead_coeff) = match divisor.leading_term() {
            Some((m, c)) => (m.clone(), c.clone()),
            None => return Err(Error::DivisionByZero),
        };
        let mut rest = self.clone();
        let mut quotient = Poly::zero(self.num_vars);
        let mut remainder = Poly::zero(self.num_vars);
        while let Some((m, c)) = rest.leading_term() {
            let (m, c) = (m.clone(), c.clone());
            if lead_mono.divides(&m) {
                let shift = lead_mono.cofactor_in(&m);
                let factor = &c / &lead_coeff;
                rest.sub_shifted(divisor, &shift, &factor);
                quotient.add_term(shift, factor);
            } else {
                rest.terms.remove(&m);
                remainder.add_term(m, c);
            }
        }
        Ok((quotient, remainder))
    }

    /// Exact quotient `self / divisor`, or `None` if `divisor` does not
    /// divide `self`.
    pub fn divide_exact(&self, divisor: &Poly) -> Result<Option<Poly>> {
        let (q, r) = self.div_rem(divisor)?;
        Ok(if r.is_zero() { Some(q) } else { None })
    }

    /// Writes the polynomial using the given variable names.
    pub fn fmt_with(&self, f: &mut fmt::Formatter<'_>, names: &dyn Fn(usize) -> alloc::string::String) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            let is_const = m.degree() == 0;
            if is_const || !abs.is_one() {
                write!(f, "{abs}")?;
                if !is_const {
                    f.write_str("*")?;
                }
            }
            let mut first = true;
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                f.write_str(&names(i))?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

fn powi(x: f64, e: u8) -> f64 {
    let mut r = 1.0;
    for _ in 0..e {
        r *= x;
    }
    r
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, &|i| alloc::format!("x{}", i + 1))
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.num_vars, rhs.num_vars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        assert_eq!(self.num_vars, rhs.num_vars, "variable count mismatch");
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        assert_eq!(self.num_vars, rhs.num_vars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.num_vars, rhs.num_vars, "variable count mismatch");
        let mut out = Poly::zero(self.num_vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}
