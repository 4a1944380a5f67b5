//! Dense univariate polynomials over a field tower.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::field::{q, FieldElement, FieldTower, Q};
use super::matrix::Matrix;
use crate::error::Result;

/// Coefficients low to high, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    tower: Arc<FieldTower>,
    coeffs: Vec<FieldElement>,
}

impl Poly {
    pub fn new(tower: &Arc<FieldTower>, coeffs: Vec<FieldElement>) -> Self {
        let mut p = Poly {
            tower: tower.clone(),
            coeffs,
        };
        p.trim();
        p
    }

    pub fn zero(tower: &Arc<FieldTower>) -> Self {
        Self::new(tower, Vec::new())
    }

    pub fn one(tower: &Arc<FieldTower>) -> Self {
        Self::new(tower, vec![FieldElement::one(tower)])
    }

    /// `x - root`.
    pub fn linear(root: &FieldElement) -> Self {
        let t = root.tower().clone();
        Self::new(&t, vec![-root, FieldElement::one(&t)])
    }

    fn trim(&mut self) {
        while self.coeffs.last().map_or(false, |c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = FieldElement::zero(&self.tower);
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).unwrap_or(&z);
                let b = other.coeffs.get(i).unwrap_or(&z);
                a + b
            })
            .collect();
        Poly::new(&self.tower, c)
    }

    pub fn neg(&self) -> Poly {
        Poly::new(&self.tower, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.tower);
        }
        let mut c = vec![FieldElement::zero(&self.tower); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        Poly::new(&self.tower, c)
    }

    pub fn scale(&self, c: &FieldElement) -> Poly {
        Poly::new(&self.tower, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> Poly {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| a.scale(&q(i as i64)))
            .collect();
        Poly::new(&self.tower, c)
    }

    pub fn divmod(&self, div: &Poly) -> Result<(Poly, Poly)> {
        let dd = div.degree().expect("division by zero polynomial");
        let lead_inv = div.lead().unwrap().try_inv()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(&self.tower), self.clone()));
        }
        let mut quo = vec![FieldElement::zero(&self.tower); rem.len() - dd];
        for k in (0..quo.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (i, d) in div.coeffs.iter().enumerate() {
                rem[k + i] = &rem[k + i] - &(&c * d);
            }
            quo[k] = c;
        }
        rem.truncate(dd);
        Ok((Poly::new(&self.tower, quo), Poly::new(&self.tower, rem)))
    }

    pub fn monic(&self) -> Result<Poly> {
        match self.lead() {
            None => Ok(self.clone()),
            Some(l) => Ok(self.scale(&l.try_inv()?)),
        }
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divmod(&b)?;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self / gcd(self, self')`, monic.
    pub fn squarefree_part(&self) -> Result<Poly> {
        let g = self.gcd(&self.derivative())?;
        let (quo, _) = self.divmod(&g)?;
        quo.monic()
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        let mut acc = FieldElement::zero(&self.tower);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_matrix(&self, m: &Matrix) -> Matrix {
        let n = m.rows();
        let mut acc = Matrix::zeros(&self.tower, n, n);
        for c in self.coeffs.iter().rev() {
            acc = &acc.mul(m) + &Matrix::identity(&self.tower, n).scale(c);
        }
        acc
    }

    /// Whether every coefficient lies in the base field Q.
    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(|c| c.as_rational().is_some())
    }

    /// Rational roots (without multiplicity, ascending) of a polynomial with
    /// rational coefficients. `None` when some coefficient is irrational.
    pub fn rational_roots(&self) -> Option<Vec<Q>> {
        let coeffs: Vec<Q> = self
            .coeffs
            .iter()
            .map(|c| c.as_rational().cloned())
            .collect::<Option<_>>()?;
        Some(rational_roots(&coeffs))
    }
}

/// Rational roots of a polynomial with rational coefficients (low to high).
pub fn rational_roots(coeffs: &[Q]) -> Vec<Q> {
    let mut c: Vec<Q> = coeffs.to_vec();
    while c.last().map_or(false, |x| x.is_zero()) {
        c.pop();
    }
    if c.len() <= 1 {
        return Vec::new();
    }
    let mut roots = Vec::new();
    // Factor out x^k.
    let shift = c.iter().position(|x| !x.is_zero()).unwrap();
    if shift > 0 {
        roots.push(Q::zero());
        c.drain(..shift);
    }
    if c.len() > 1 {
        let lcm = c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = c.iter().map(|x| (x * Q::from_integer(lcm.clone())).to_integer()).collect();
        let a0 = ints[0].abs();
        let an = ints.last().unwrap().abs();
        let cap = BigInt::from(1_000_000_000_000i64);
        if a0 > cap || an > cap {
            // Too large for trial division; callers treat missing roots as
            // "no rational factor found", which is always sound.
            roots.sort();
            return roots;
        }
        for p in divisors(&a0) {
            for qd in divisors(&an) {
                for sign in [1i64, -1] {
                    let cand = Q::new(p.clone() * BigInt::from(sign), qd.clone());
                    let mut acc = Q::zero();
                    for k in ints.iter().rev() {
                        acc = acc * &cand + Q::from_integer(k.clone());
                    }
                    if acc.is_zero() && !roots.contains(&cand) {
                        roots.push(cand);
                    }
                }
            }
        }
    }
    roots.sort();
    roots
}

/// Integer roots (ascending) of a polynomial with rational coefficients.
pub fn integer_roots(coeffs: &[Q]) -> Vec<i64> {
    let mut c: Vec<Q> = coeffs.to_vec();
    while c.last().map_or(false, |x| x.is_zero()) {
        c.pop();
    }
    if c.len() <= 1 {
        return Vec::new();
    }
    // Cauchy bound on root size.
    let lead = c.last().unwrap().abs();
    let bound = c[..c.len() - 1]
        .iter()
        .map(|x| x.abs() / &lead)
        .fold(Q::zero(), |a, b| if b > a { b } else { a })
        + Q::one();
    let bound = bound.ceil().to_integer();
    let bound: i64 = bound.try_into().unwrap_or(i64::MAX);
    if bound <= 1_000_000 {
        (-bound..=bound)
            .filter(|&n| {
                let x = q(n);
                let mut acc = Q::zero();
                for k in c.iter().rev() {
                    acc = acc * &x + k;
                }
                acc.is_zero()
            })
            .collect()
    } else {
        rational_roots(&c)
            .into_iter()
            .filter(|r| r.is_integer())
            .filter_map(|r| r.to_integer().try_into().ok())
            .collect()
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    // Desk-scale inputs: trial division is plenty.
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            out.push(d.clone());
            let other = n / &d;
            if other != d {
                out.push(other);
            }
        }
        d += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::qf;

    fn poly(c: &[i64]) -> Poly {
        let t = FieldTower::rationals();
        Poly::new(&t, c.iter().map(|&x| FieldElement::from_i64(&t, x)).collect())
    }

    #[test]
    fn gcd_and_squarefree() {
        // (x-1)^2 (x+2)
        let p = poly(&[-1, 1]).mul(&poly(&[-1, 1])).mul(&poly(&[2, 1]));
        let sf = p.squarefree_part().unwrap();
        assert_eq!(sf, poly(&[-2, 1, 1]));
        assert_eq!(p.gcd(&p.derivative()).unwrap(), poly(&[-1, 1]));
    }

    #[test]
    fn roots() {
        let r = rational_roots(&[q(-3), qf(1, 2), q(1)]);
        // x^2 + x/2 - 3 = (x + 2)(x - 3/2)
        assert_eq!(r, vec![q(-2), qf(3, 2)]);
        assert_eq!(rational_roots(&[q(-2), q(0), q(1)]), Vec::<Q>::new());
        assert_eq!(rational_roots(&[q(0), q(0), q(1)]), vec![q(0)]);
        // N (N - 3)
        assert_eq!(integer_roots(&[q(0), q(-3), q(1)]), vec![0, 3]);
        assert_eq!(integer_roots(&[qf(1, 2), q(1)]), Vec::<i64>::new());
    }
}
