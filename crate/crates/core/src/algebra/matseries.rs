//! Matrix-valued series: inverse, exponential, logarithm, logarithmic derivative.

use std::sync::Arc;

use super::field::{FieldElement, FieldTower, Q};
use super::matrix::Matrix;
use super::series::{convolve, min_prec, Laurent, LaurentMatrix, LaurentSeries};
use crate::error::{Error, Result};

impl LaurentMatrix {
    pub fn identity(tower: &Arc<FieldTower>, n: usize) -> Self {
        Laurent::monomial(1, 0, Matrix::identity(tower, n), None)
    }

    pub fn zero_matrix(tower: &Arc<FieldTower>, n: usize, ram: i64, prec: Option<i64>) -> Self {
        Laurent::zero(ram, prec, Matrix::zeros(tower, n, n))
    }

    /// Constant matrix times `u^exp`.
    pub fn from_matrix(m: Matrix, exp: i64) -> Self {
        Laurent::monomial(1, exp, m, None)
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        self.zero_coeff().tower()
    }

    pub fn dim(&self) -> usize {
        self.zero_coeff().rows()
    }

    pub fn entry(&self, i: usize, j: usize) -> LaurentSeries {
        self.map(FieldElement::zero(self.tower()), |m| m.get(i, j).clone())
    }

    /// Assemble from an `n x n` grid of scalar series.
    pub fn from_entries(tower: &Arc<FieldTower>, entries: &[Vec<LaurentSeries>]) -> Self {
        let n = entries.len();
        let ram = entries.iter().flatten().map(|s| s.ram()).fold(1, num_integer::lcm);
        let lifted: Vec<Vec<LaurentSeries>> = entries
            .iter()
            .map(|row| row.iter().map(|s| s.ramify(ram / s.ram())).collect())
            .collect();
        let prec = lifted.iter().flatten().fold(None, |acc, s| min_prec(acc, s.prec()));
        let flat: Vec<&LaurentSeries> = lifted.iter().flatten().collect();
        let nonzero = flat.iter().filter(|s| !s.is_zero());
        let lo = nonzero.clone().map(|s| s.val_bound()).min();
        let hi = nonzero.map(|s| s.end()).max();
        let zero = Matrix::zeros(tower, n, n);
        let (Some(lo), Some(hi)) = (lo, hi) else {
            return Laurent::zero(ram, prec, zero);
        };
        let hi = prec.map_or(hi, |p| hi.min(p));
        let coeffs = (lo..hi)
            .map(|k| {
                let data = flat
                    .iter()
                    .map(|s| if s.knows(k) { s.coeff(k) } else { FieldElement::zero(tower) })
                    .collect();
                Matrix::from_vec(tower, n, n, data)
            })
            .collect();
        Laurent::new(ram, lo, coeffs, prec, zero)
    }

    /// Multiply every coefficient by a scalar series.
    pub fn scale_series(&self, s: &LaurentSeries) -> Self {
        convolve(self, s, self.zero_coeff().clone(), |m, c| m.scale(c))
    }

    /// Multiply by a constant matrix on the left.
    pub fn left_mul_const(&self, m: &Matrix) -> Self {
        self.map(self.zero_coeff().clone(), |x| m.mul(x))
    }

    pub fn right_mul_const(&self, m: &Matrix) -> Self {
        self.map(self.zero_coeff().clone(), |x| x.mul(m))
    }

    pub fn trace(&self) -> LaurentSeries {
        self.map(FieldElement::zero(self.tower()), Matrix::trace)
    }

    pub fn transpose(&self) -> Self {
        self.map(self.zero_coeff().clone(), Matrix::transpose)
    }

    /// Matrix-vector product with a vector of scalar series.
    pub fn apply(&self, v: &[LaurentSeries]) -> Vec<LaurentSeries> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut acc = Laurent::zero(1, None, FieldElement::zero(self.tower()));
                for (j, vj) in v.iter().enumerate() {
                    acc = acc.add(&self.entry(i, j).mul(vj));
                }
                acc
            })
            .collect()
    }

    /// Determinant and adjugate by Faddeev-LeVerrier.
    pub fn det_adjugate(&self) -> (LaurentSeries, LaurentMatrix) {
        let n = self.dim();
        let t = self.tower().clone();
        let id = LaurentMatrix::identity(&t, n);
        let mut m = LaurentMatrix::zero_matrix(&t, n, 1, None);
        let mut c = Laurent::monomial(1, 0, FieldElement::one(&t), None);
        let mut prev_m = m.clone();
        for k in 1..=n {
            prev_m = self.mul(&m).add(&id.scale_series(&c));
            m = prev_m.clone();
            let am = self.mul(&m);
            c = am.trace().scale_q(&Q::new((-1).into(), (k as i64).into()));
        }
        // After the loop c = c_0 and prev_m = M_n, with adj(A) = (-1)^{n-1} M_n.
        let det = if n % 2 == 0 { c } else { c.neg() };
        let adj = if n % 2 == 1 { prev_m } else { prev_m.neg() };
        (det, adj)
    }

    pub fn det(&self) -> LaurentSeries {
        self.det_adjugate().0
    }

    /// Two-sided inverse via adjugate and determinant. Exact inputs with a
    /// non-monomial determinant need `target`.
    pub fn inverse(&self, target: Option<i64>) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NotInvertible("zero matrix series".into()));
        }
        let (det, adj) = self.det_adjugate();
        if det.is_zero() {
            return Err(Error::NotInvertible("determinant vanishes within precision".into()));
        }
        let dinv = det.inverse(target).map_err(|e| match e {
            Error::NotInvertible(_) => Error::NotInvertible("determinant has no unit part".into()),
            e => e,
        })?;
        let out = adj.scale_series(&dinv);
        Ok(match target {
            Some(t) => out.truncate(t),
            None => out,
        })
    }

    fn check_positive(&self, what: &str) -> Result<()> {
        if !self.is_zero() && self.val_bound() < 1 {
            return Err(Error::DomainViolation(format!("{what} needs valuation >= 1")));
        }
        Ok(())
    }

    /// `exp(xi)` for `val(xi) >= 1`. Exact non-nilpotent inputs need `target`.
    pub fn exp(&self, target: Option<i64>) -> Result<Self> {
        self.check_positive("exp")?;
        let xi = match target {
            Some(t) => self.truncate(t),
            None => self.clone(),
        };
        let n = xi.dim();
        let mut acc = LaurentMatrix::identity(xi.tower(), n);
        if xi.is_zero() {
            return Ok(acc.with_prec(xi.prec()));
        }
        let mut term = acc.clone();
        for k in 1.. {
            term = term.mul(&xi).scale_q(&Q::new(1.into(), (k as i64).into()));
            if term.is_zero() {
                return Ok(acc.with_prec(min_prec(term.prec(), xi.prec())));
            }
            if xi.is_exact() && k > n {
                return Err(Error::precision("exp of a non-nilpotent exact series", None));
            }
            acc = acc.add(&term);
            if let Some(p) = xi.prec() {
                if term.val_bound() + xi.val_bound() >= p {
                    break;
                }
            }
        }
        Ok(acc)
    }

    /// `log(g)` for `g - I` of valuation `>= 1`.
    pub fn log(&self, target: Option<i64>) -> Result<Self> {
        let n = self.dim();
        let x = self.sub(&LaurentMatrix::identity(self.tower(), n));
        x.check_positive("log")?;
        let x = match target {
            Some(t) => x.truncate(t),
            None => x,
        };
        let mut acc = LaurentMatrix::zero_matrix(x.tower(), n, x.ram(), x.prec());
        if x.is_zero() {
            return Ok(acc);
        }
        let mut pow = LaurentMatrix::identity(x.tower(), n);
        for k in 1.. {
            pow = pow.mul(&x);
            if pow.is_zero() {
                return Ok(acc.with_prec(min_prec(acc.prec(), pow.prec())));
            }
            if x.is_exact() && k > n {
                return Err(Error::precision("log of a non-unipotent exact series", None));
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc = acc.add(&pow.scale_q(&Q::new(sign.into(), (k as i64).into())));
            if let Some(p) = x.prec() {
                if pow.val_bound() + x.val_bound() >= p {
                    break;
                }
            }
        }
        Ok(acc)
    }

    /// `(dg/du) g^{-1}` in the current variable.
    pub fn dlog_u(&self, target: Option<i64>) -> Result<Self> {
        let inv = self.inverse(target)?;
        Ok(self.deriv_u().mul(&inv))
    }

    /// `(dg/dt) g^{-1}`, with `d/dt = u^{1-e}/e d/du`.
    pub fn dlog(&self, target: Option<i64>) -> Result<Self> {
        let inv = self.inverse(target)?;
        Ok(self.deriv_t().mul(&inv))
    }

    /// Commutator series `[self, other]`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }
}

/// Scalar series `c * u^k`, exact.
pub fn monomial_series(tower: &Arc<FieldTower>, ram: i64, exp: i64, c: Q) -> LaurentSeries {
    Laurent::monomial(ram, exp, FieldElement::from_rational(tower, c), None)
}

/// `diag(u^{a_1}, ..., u^{a_n})`.
pub fn diag_monomial(tower: &Arc<FieldTower>, ram: i64, exps: &[i64]) -> LaurentMatrix {
    let n = exps.len();
    let terms = exps
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            let mut m = Matrix::zeros(tower, n, n);
            m.set(i, i, FieldElement::one(tower));
            (a, m)
        })
        .collect();
    Laurent::from_terms(ram, terms, None, Matrix::zeros(tower, n, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::q;

    fn t() -> Arc<FieldTower> {
        FieldTower::rationals()
    }

    fn e12() -> Matrix {
        Matrix::unit(&t(), 2, 0, 1)
    }

    #[test]
    fn inverse_examples() {
        let tw = t();
        let d = diag_monomial(&tw, 1, &[-1, 0]);
        assert_eq!(d.inverse(None).unwrap(), diag_monomial(&tw, 1, &[1, 0]));
        let g = LaurentMatrix::identity(&tw, 2).add(&LaurentMatrix::from_matrix(e12(), 1));
        let expect = LaurentMatrix::identity(&tw, 2).sub(&LaurentMatrix::from_matrix(e12(), 1));
        assert_eq!(g.inverse(None).unwrap(), expect);
        let id = LaurentMatrix::identity(&tw, 3);
        assert_eq!(id.inverse(None).unwrap(), id);
    }

    #[test]
    fn exp_log_examples() {
        let tw = t();
        let z = LaurentMatrix::zero_matrix(&tw, 2, 1, None);
        assert_eq!(z.exp(None).unwrap(), LaurentMatrix::identity(&tw, 2));
        let xi = LaurentMatrix::from_matrix(e12(), 1);
        let g = xi.exp(None).unwrap();
        assert_eq!(g, LaurentMatrix::identity(&tw, 2).add(&xi));
        assert_eq!(g.log(None).unwrap(), xi);
        assert!(LaurentMatrix::from_matrix(e12(), 0).exp(None).is_err());
    }

    #[test]
    fn dlog_examples() {
        let tw = t();
        let d = diag_monomial(&tw, 1, &[2, -3]).dlog(None).unwrap();
        let expect = LaurentMatrix::from_matrix(Matrix::from_i64(&tw, &[&[2, 0], &[0, -3]]), -1);
        assert_eq!(d, expect);
        let g = LaurentMatrix::from_matrix(e12(), 2).exp(None).unwrap();
        assert_eq!(g.dlog(None).unwrap(), LaurentMatrix::from_matrix(e12().scale_q(&q(2)), 1));
        assert!(LaurentMatrix::identity(&tw, 2).dlog(None).unwrap().is_zero());
    }
}
