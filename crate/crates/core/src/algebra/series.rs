//! Truncated Laurent series in `u = t^{1/e}` with explicit precision.
//!
//! A series knows its coefficients for exponents in `[val, prec)`; `prec ==
//! None` marks an exact (finite) series. Coefficients beyond the precision are
//! never read or invented.

use std::fmt;

use num_integer::Integer;

use super::field::{q, FieldElement, Q};
use super::matrix::Matrix;
use crate::error::{Error, Result};

/// Coefficient ring of a series: scalars or square matrices.
pub trait Coeff: Clone + PartialEq + fmt::Debug {
    fn is_zero(&self) -> bool;
    fn zero_like(&self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale_q(&self, c: &Q) -> Self;
}

impl Coeff for FieldElement {
    fn is_zero(&self) -> bool {
        FieldElement::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        FieldElement::zero(self.tower())
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale_q(&self, c: &Q) -> Self {
        self.scale(c)
    }
}

impl Coeff for Matrix {
    fn is_zero(&self) -> bool {
        Matrix::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        Matrix::zeros(self.tower(), self.rows(), self.cols())
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, other: &Self) -> Self {
        Matrix::mul(self, other)
    }
    fn scale_q(&self, c: &Q) -> Self {
        Matrix::scale_q(self, c)
    }
}

/// Minimum of two precisions, `None` meaning exact.
pub fn min_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

#[derive(Clone, PartialEq)]
pub struct Laurent<C: Coeff> {
    ram: i64,
    val: i64,
    prec: Option<i64>,
    coeffs: Vec<C>,
    zero: C,
}

pub type LaurentSeries = Laurent<FieldElement>;
pub type LaurentMatrix = Laurent<Matrix>;

impl<C: Coeff> Laurent<C> {
    /// Series `sum coeffs[k] u^{start+k}` known below `prec`.
    pub fn new(ram: i64, start: i64, coeffs: Vec<C>, prec: Option<i64>, zero: C) -> Self {
        assert!(ram >= 1, "ramification index must be positive");
        let mut s = Laurent {
            ram,
            val: start,
            prec,
            coeffs,
            zero: zero.zero_like(),
        };
        s.normalize();
        s
    }

    pub fn zero(ram: i64, prec: Option<i64>, zero: C) -> Self {
        Self::new(ram, prec.unwrap_or(0), Vec::new(), prec, zero)
    }

    pub fn monomial(ram: i64, exp: i64, c: C, prec: Option<i64>) -> Self {
        let z = c.zero_like();
        Self::new(ram, exp, vec![c], prec, z)
    }

    /// Exact series from `(exponent, coefficient)` pairs.
    pub fn from_terms(ram: i64, terms: Vec<(i64, C)>, prec: Option<i64>, zero: C) -> Self {
        if terms.is_empty() {
            return Self::zero(ram, prec, zero);
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![zero.zero_like(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            let k = (e - lo) as usize;
            coeffs[k] = coeffs[k].add(&c);
        }
        Self::new(ram, lo, coeffs, prec, zero)
    }

    fn normalize(&mut self) {
        if let Some(p) = self.prec {
            let keep = (p - self.val).max(0) as usize;
            self.coeffs.truncate(keep);
        }
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => {
                self.coeffs.clear();
                self.val = self.prec.unwrap_or(0);
            }
            Some(k) => {
                self.coeffs.drain(..k);
                self.val += k as i64;
                while self.coeffs.last().map_or(false, |c| c.is_zero()) {
                    self.coeffs.pop();
                }
            }
        }
    }

    pub fn ram(&self) -> i64 {
        self.ram
    }

    pub fn prec(&self) -> Option<i64> {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    /// True when no nonzero coefficient is known.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Valuation; `None` when the series is zero within its precision.
    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.val)
    }

    /// Lower bound on the valuation (the precision for a zero series).
    pub fn val_bound(&self) -> i64 {
        self.val
    }

    /// Largest exponent with a known nonzero coefficient plus one.
    pub fn end(&self) -> i64 {
        self.val + self.coeffs.len() as i64
    }

    pub fn zero_coeff(&self) -> &C {
        &self.zero
    }

    /// Coefficient at `u^k`. Panics if `k` is beyond the precision.
    pub fn coeff(&self, k: i64) -> C {
        if let Some(p) = self.prec {
            assert!(k < p, "read of u^{k} beyond precision {p}");
        }
        if k < self.val || k >= self.end() {
            self.zero.clone()
        } else {
            self.coeffs[(k - self.val) as usize].clone()
        }
    }

    pub fn knows(&self, k: i64) -> bool {
        self.prec.map_or(true, |p| k < p)
    }

    /// Nonzero `(exponent, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (self.val + k as i64, c))
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.first()
    }

    pub fn map<D: Coeff>(&self, zero: D, f: impl Fn(&C) -> D) -> Laurent<D> {
        Laurent::new(self.ram, self.val, self.coeffs.iter().map(f).collect(), self.prec, zero)
    }

    pub fn try_map<D: Coeff>(&self, zero: D, f: impl Fn(&C) -> Result<D>) -> Result<Laurent<D>> {
        Ok(Laurent::new(
            self.ram,
            self.val,
            self.coeffs.iter().map(f).collect::<Result<_>>()?,
            self.prec,
            zero,
        ))
    }

    /// Lower the precision to `p` (no-op if already lower).
    pub fn truncate(&self, p: i64) -> Self {
        let mut s = self.clone();
        s.prec = min_prec(s.prec, Some(p));
        s.normalize();
        s
    }

    /// Forget exactness: the same series, known below `p` only.
    pub fn with_prec(&self, p: Option<i64>) -> Self {
        match p {
            Some(p) => self.truncate(p),
            None => self.clone(),
        }
    }

    /// Multiply by `u^k`.
    pub fn shift(&self, k: i64) -> Self {
        let mut s = self.clone();
        s.val += k;
        s.prec = s.prec.map(|p| p + k);
        s
    }

    /// Substitute `u = w^b`; the result is in `w = t^{1/(e b)}`.
    pub fn ramify(&self, b: i64) -> Self {
        assert!(b >= 1);
        if b == 1 {
            return self.clone();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() * b as usize);
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                for _ in 1..b {
                    coeffs.push(self.zero.clone());
                }
            }
            coeffs.push(c.clone());
        }
        Laurent::new(self.ram * b, self.val * b, coeffs, self.prec.map(|p| p * b), self.zero.clone())
    }

    /// Rewrite over ramification index `target`, a multiple of the current one.
    pub fn lift_ram(&self, target: i64) -> Result<Self> {
        if target % self.ram != 0 {
            return Err(Error::Incompatible(format!(
                "ramification {} does not divide {}",
                self.ram, target
            )));
        }
        Ok(self.ramify(target / self.ram))
    }

    pub fn neg(&self) -> Self {
        let mut s = self.clone();
        s.coeffs = s.coeffs.iter().map(Coeff::neg).collect();
        s
    }

    pub fn scale_q(&self, c: &Q) -> Self {
        self.map(self.zero.clone(), |x| x.scale_q(c))
    }

    /// Sum, with precision `min(p_a, p_b)`.
    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = reconcile(self, other);
        let prec = min_prec(a.prec, b.prec);
        let lo = a.val.min(b.val);
        let hi = a.end().max(b.end());
        let hi = prec.map_or(hi, |p| hi.min(p));
        let coeffs = (lo..hi.max(lo))
            .map(|k| a.coeff_unchecked(k).add(&b.coeff_unchecked(k)))
            .collect();
        Laurent::new(a.ram, lo, coeffs, prec, a.zero.clone())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Product, with precision `min(v_a + p_b, v_b + p_a)`.
    pub fn mul(&self, other: &Self) -> Self {
        convolve(self, other, self.zero.clone(), |x, y| x.mul(y))
    }

    /// `add` that reports an empty result window.
    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let (a, b) = reconcile(self, other);
        if let Some(p) = min_prec(a.prec, b.prec) {
            if p <= a.val.min(b.val) {
                return Err(Error::precision("sum has empty window", Some(a.val.min(b.val) + 1)));
            }
        }
        Ok(a.add(&b))
    }

    /// `mul` that reports an empty result window.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let (a, b) = reconcile(self, other);
        if let Some(p) = product_prec(&a, &b) {
            if p <= a.val + b.val {
                return Err(Error::precision("product has empty window", Some(a.val + b.val + 1)));
            }
        }
        Ok(a.mul(&b))
    }

    /// Derivative in the current variable `u`.
    pub fn deriv_u(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.scale_q(&q(self.val + k as i64)))
            .collect();
        Laurent::new(self.ram, self.val - 1, coeffs, self.prec.map(|p| p - 1), self.zero.clone())
    }

    /// Derivative in `t = u^e`: `d/dt = u^{1-e}/e d/du`.
    pub fn deriv_t(&self) -> Self {
        self.deriv_u()
            .shift(1 - self.ram)
            .scale_q(&Q::new(1.into(), self.ram.into()))
    }

    fn coeff_unchecked(&self, k: i64) -> C {
        if k < self.val || k >= self.end() {
            self.zero.clone()
        } else {
            self.coeffs[(k - self.val) as usize].clone()
        }
    }

    /// Equality on the common known window.
    pub fn agrees(&self, other: &Self) -> bool {
        let (a, b) = reconcile(self, other);
        let lo = a.val.min(b.val);
        let hi = a.end().max(b.end());
        let hi = min_prec(a.prec, b.prec).map_or(hi, |p| hi.min(p));
        (lo..hi).all(|k| a.coeff_unchecked(k) == b.coeff_unchecked(k))
    }
}

fn product_prec<A: Coeff, B: Coeff>(a: &Laurent<A>, b: &Laurent<B>) -> Option<i64> {
    // A zero series bounds its valuation by its precision, so `val` works either way.
    let pa = a.prec.map(|p| p + b.val);
    let pb = b.prec.map(|p| p + a.val);
    if a.is_exact() && a.is_zero() || b.is_exact() && b.is_zero() {
        return None;
    }
    min_prec(pa, pb)
}

/// Lift both operands to the lcm of their ramification indices.
pub fn reconcile<A: Coeff, B: Coeff>(a: &Laurent<A>, b: &Laurent<B>) -> (Laurent<A>, Laurent<B>) {
    if a.ram == b.ram {
        return (a.clone(), b.clone());
    }
    let l = a.ram.lcm(&b.ram);
    (a.ramify(l / a.ram), b.ramify(l / b.ram))
}

/// Cauchy product with an arbitrary bilinear coefficient map.
pub fn convolve<A: Coeff, B: Coeff, D: Coeff>(
    a: &Laurent<A>,
    b: &Laurent<B>,
    zero: D,
    f: impl Fn(&A, &B) -> D,
) -> Laurent<D> {
    let (a, b) = reconcile(a, b);
    let prec = product_prec(&a, &b);
    if a.is_zero() || b.is_zero() {
        return Laurent::zero(a.ram, prec, zero);
    }
    let lo = a.val + b.val;
    let hi = a.end() + b.end() - 1;
    let hi = prec.map_or(hi, |p| hi.min(p));
    let mut coeffs = vec![zero.zero_like(); (hi - lo).max(0) as usize];
    for (i, x) in a.coeffs.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.coeffs.iter().enumerate() {
            let k = i + j;
            if k >= coeffs.len() {
                break;
            }
            if y.is_zero() {
                continue;
            }
            coeffs[k] = coeffs[k].add(&f(x, y));
        }
    }
    Laurent::new(a.ram, lo, coeffs, prec, zero)
}

impl LaurentSeries {
    pub fn constant(c: FieldElement) -> Self {
        Laurent::monomial(1, 0, c, None)
    }

    /// Inverse. Exact non-monomial inputs need a target precision.
    pub fn inverse(&self, target: Option<i64>) -> Result<Self> {
        let Some(v) = self.valuation() else {
            return Err(Error::NotInvertible("zero series".into()));
        };
        let lead_inv = self.coeffs[0].try_inv()?;
        let prec = match (self.prec, target) {
            (Some(p), t) => Some(min_prec(Some(p - 2 * v), t).unwrap()),
            (None, t) if self.coeffs.len() == 1 => t,
            (None, Some(t)) => Some(t),
            (None, None) => {
                return Err(Error::precision("inverse of a non-monomial exact series", None));
            }
        };
        if self.coeffs.len() == 1 && self.prec.is_none() {
            return Ok(Laurent::monomial(self.ram, -v, lead_inv, prec));
        }
        let p = prec.unwrap();
        let n = (p + v).max(0) as usize;
        // b_0 = 1/a_0, b_k = -(1/a_0) sum_{j=1..k} a_j b_{k-j}
        let mut out: Vec<FieldElement> = Vec::with_capacity(n);
        for k in 0..n {
            if k == 0 {
                out.push(lead_inv.clone());
                continue;
            }
            let mut acc = self.zero.clone();
            for j in 1..=k.min(self.coeffs.len() - 1) {
                acc = &acc + &(&self.coeffs[j] * &out[k - j]);
            }
            out.push(-(&acc * &lead_inv));
        }
        Ok(Laurent::new(self.ram, -v, out, Some(p), self.zero.clone()))
    }
}

impl<C: Coeff + fmt::Display> fmt::Display for Laurent<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = if self.ram == 1 { "t".to_string() } else { format!("t^(1/{})", self.ram) };
        let mut first = true;
        for (k, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c}) {var}^{k}")?;
        }
        if first {
            write!(f, "0")?;
        }
        match self.prec {
            Some(p) => write!(f, " + O({var}^{p})"),
            None => Ok(()),
        }
    }
}

impl<C: Coeff> fmt::Debug for Laurent<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Laurent")
            .field("ram", &self.ram)
            .field("val", &self.val)
            .field("prec", &self.prec)
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::FieldTower;

    fn s(terms: &[(i64, i64)], prec: Option<i64>) -> LaurentSeries {
        let t = FieldTower::rationals();
        Laurent::from_terms(
            1,
            terms.iter().map(|&(e, c)| (e, FieldElement::from_i64(&t, c))).collect(),
            prec,
            FieldElement::zero(&t),
        )
    }

    #[test]
    fn cancellation_and_products() {
        let a = s(&[(-1, 1), (0, 1)], None);
        let b = s(&[(-1, -1)], None);
        assert_eq!(a.checked_add(&b).unwrap(), s(&[(0, 1)], None));
        assert_eq!(s(&[(-1, 1)], None).mul(&s(&[(2, 1)], None)), s(&[(1, 1)], None));
        let p = s(&[(0, 1), (1, 1)], Some(3)).checked_mul(&s(&[(0, 1), (1, -1)], Some(3))).unwrap();
        assert_eq!(p, s(&[(0, 1), (2, -1)], Some(3)));
    }

    #[test]
    fn empty_windows_are_reported() {
        let a = s(&[(2, 1)], Some(3));
        let b = s(&[], Some(0));
        assert!(a.checked_add(&b).is_err());
        let c = s(&[(0, 1)], Some(0));
        assert!(s(&[(0, 1)], None).checked_mul(&c).is_err());
    }

    #[test]
    fn inverse_and_derivatives() {
        let a = s(&[(0, 1), (1, -1)], None);
        let inv = a.inverse(Some(5)).unwrap();
        assert_eq!(inv, s(&[(0, 1), (1, 1), (2, 1), (3, 1), (4, 1)], Some(5)));
        assert_eq!(s(&[(-1, 1)], None).inverse(None).unwrap(), s(&[(1, 1)], None));
        assert_eq!(s(&[(3, 1)], None).deriv_u(), s(&[(2, 3)], None));
        // u = t^{1/2}: d(u^2)/dt = 1
        let u2 = s(&[(2, 1)], None).ramify(1);
        let mut u2r = u2.clone();
        u2r.ram = 2;
        assert_eq!(u2r.deriv_t().coeff(0), FieldElement::from_i64(&FieldTower::rationals(), 1));
    }

    #[test]
    fn ramification_reconciles() {
        let a = s(&[(1, 1)], Some(4));
        let b = a.ramify(2);
        assert_eq!(b.valuation(), Some(2));
        assert_eq!(b.prec(), Some(8));
        let sum = a.add(&b);
        assert_eq!(sum.ram(), 2);
        assert_eq!(sum.coeff(2), FieldElement::from_i64(&FieldTower::rationals(), 2));
    }
}
