//! Quotient towers `Q[x_1]/(m_1)[x_2]/(m_2)...` and their elements.
//!
//! A tower is never verified to be a field. Inverting an element runs the
//! extended Euclidean algorithm against the minimal polynomial of its level;
//! a nontrivial gcd is reported as [`Error::ZeroDivisorSplit`] so the caller
//! can continue on either factor (dynamic evaluation).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// One extension step: a monic polynomial of degree `coeffs.len()` whose
/// non-leading coefficients are flat coordinate vectors over the level below.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Level {
    coeffs: Vec<Vec<Q>>,
}

impl Level {
    fn degree(&self) -> usize {
        self.coeffs.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldTower {
    levels: Vec<Level>,
    /// `dims[k]` is the Q-dimension of level `k`; `dims[0] = 1`.
    dims: Vec<usize>,
}

impl FieldTower {
    pub fn rationals() -> Arc<FieldTower> {
        Arc::new(FieldTower {
            levels: Vec::new(),
            dims: vec![1],
        })
    }

    /// Number of adjoined generators.
    pub fn height(&self) -> usize {
        self.levels.len()
    }

    /// Dimension of the top level over Q.
    pub fn dim(&self) -> usize {
        *self.dims.last().unwrap()
    }

    pub fn degree(&self, level: usize) -> usize {
        self.levels[level].degree()
    }

    pub fn is_rationals(&self) -> bool {
        self.levels.is_empty()
    }

    /// Adjoins a root of `min_poly` (coefficients low to high, any nonzero
    /// leading coefficient; it is made monic).
    pub fn extend(self: &Arc<Self>, min_poly: &[FieldElement]) -> Result<Arc<FieldTower>> {
        let mut poly: Vec<FieldElement> = min_poly.to_vec();
        while poly.last().map_or(false, |c| c.is_zero()) {
            poly.pop();
        }
        if poly.len() < 3 {
            return Err(Error::DomainViolation(
                "minimal polynomial must have degree at least 2".into(),
            ));
        }
        if poly[0].is_zero() {
            return Err(Error::DomainViolation(
                "minimal polynomial has zero constant term".into(),
            ));
        }
        for c in &poly {
            if !c.tower_is(self) {
                return Err(Error::Incompatible("polynomial over a different tower".into()));
            }
        }
        let lead_inv = poly.last().unwrap().try_inv()?;
        let deg = poly.len() - 1;
        let coeffs = poly[..deg].iter().map(|c| (c * &lead_inv).coords).collect();
        let mut levels = self.levels.clone();
        levels.push(Level { coeffs });
        let mut dims = self.dims.clone();
        dims.push(self.dim() * deg);
        Ok(Arc::new(FieldTower { levels, dims }))
    }

    /// Monic minimal polynomial of level `level + 1`, lifted to the top level.
    pub fn min_poly(self: &Arc<Self>, level: usize) -> Vec<FieldElement> {
        let mut out: Vec<FieldElement> = self.levels[level]
            .coeffs
            .iter()
            .map(|c| FieldElement::from_coords(self, pad(c, self.dim())))
            .collect();
        out.push(FieldElement::one(self));
        out
    }

    /// Monic minimal polynomial of level `level + 1` (low to high), each
    /// coefficient a coordinate vector over the previous level.
    pub fn level_polynomial(&self, level: usize) -> Vec<Vec<Q>> {
        let d = self.dims[level];
        let mut out: Vec<Vec<Q>> = self.levels[level].coeffs.iter().map(|c| pad(c, d)).collect();
        out.push(pad(&[Q::one()], d));
        out
    }

    /// The tower truncated to its first `height` levels.
    pub fn prefix(&self, height: usize) -> Arc<FieldTower> {
        Arc::new(FieldTower {
            levels: self.levels[..height].to_vec(),
            dims: self.dims[..=height].to_vec(),
        })
    }

    /// Whether `self` is `other` with further levels appended (or equal).
    pub fn extends(&self, other: &FieldTower) -> bool {
        other.levels.len() <= self.levels.len() && self.levels[..other.levels.len()] == other.levels[..]
    }

    /// Replaces the minimal polynomial at `level` by a monic factor
    /// (coefficients over the tower, high coefficients beyond the factor's
    /// degree ignored). Levels above are kept with reduced coefficients.
    pub fn specialize(self: &Arc<Self>, level: usize, factor: &[FieldElement]) -> Result<Arc<FieldTower>> {
        let below = self.dims[level];
        let mut f: Vec<Vec<Q>> = factor.iter().map(|c| c.coords[..below].to_vec()).collect();
        while f.last().map_or(false, |c| c.iter().all(Zero::is_zero)) {
            f.pop();
        }
        let deg = f.len().saturating_sub(1);
        if deg == 0 {
            return Err(Error::DomainViolation("cannot specialize to a constant".into()));
        }
        let lead = f.pop().unwrap();
        let lead_inv = self.inv_at(level, &lead)?;
        let coeffs: Vec<Vec<Q>> = f.iter().map(|c| self.mul_at(level, c, &lead_inv)).collect();

        let mut base = FieldTower {
            levels: self.levels[..level].to_vec(),
            dims: self.dims[..=level].to_vec(),
        };
        // A linear factor collapses the level onto the one below: x = -c0.
        let root: Option<Vec<Q>> = if deg == 1 {
            Some(coeffs[0].iter().map(|v| -v).collect())
        } else {
            base.levels.push(Level { coeffs });
            base.dims.push(self.dims[level] * deg);
            None
        };
        let mut result = base;
        for upper in (level + 1)..self.levels.len() {
            let lvl = &self.levels[upper];
            let coeffs = lvl
                .coeffs
                .iter()
                .map(|c| self.reduce_into(&result, level, root.as_deref(), upper, c))
                .collect::<Result<Vec<_>>>()?;
            let dim = result.dim() * lvl.degree();
            result.levels.push(Level { coeffs });
            result.dims.push(dim);
        }
        Ok(Arc::new(result))
    }

    /// Maps coordinates of a level-`at` element of `self` into `target`,
    /// where `target` was obtained by specializing `self` at `level`.
    fn reduce_into(
        &self,
        target: &FieldTower,
        level: usize,
        root: Option<&[Q]>,
        at: usize,
        coords: &[Q],
    ) -> Result<Vec<Q>> {
        if at <= level {
            return Ok(coords.to_vec());
        }
        let sub = self.dims[at - 1];
        let chunks: Vec<Vec<Q>> = coords
            .chunks(sub)
            .map(|c| self.reduce_into(target, level, root, at - 1, c))
            .collect::<Result<_>>()?;
        if at == level + 1 {
            match root {
                Some(root) => {
                    // Evaluate the polynomial at the rational-level root.
                    let mut acc = vec![Q::zero(); target.dims[level]];
                    for c in chunks.iter().rev() {
                        acc = target.mul_at(level, &acc, root);
                        for (a, b) in acc.iter_mut().zip(c) {
                            *a += b;
                        }
                    }
                    Ok(acc)
                }
                None => Ok(target.reduce_poly(at, chunks)),
            }
        } else {
            Ok(chunks.concat())
        }
    }

    /// Reduces a polynomial (chunks over level `at - 1`) modulo the minimal
    /// polynomial of level `at`.
    fn reduce_poly(&self, at: usize, mut prod: Vec<Vec<Q>>) -> Vec<Q> {
        let lvl = &self.levels[at - 1];
        let d = lvl.degree();
        let sub = self.dims[at - 1];
        while prod.len() < d {
            prod.push(vec![Q::zero(); sub]);
        }
        for m in (d..prod.len()).rev() {
            let c = std::mem::take(&mut prod[m]);
            if c.iter().all(Zero::is_zero) {
                continue;
            }
            for (l, p) in lvl.coeffs.iter().enumerate() {
                let t = self.mul_at(at - 1, &c, p);
                for (a, b) in prod[m - d + l].iter_mut().zip(t) {
                    *a -= b;
                }
            }
        }
        prod.truncate(d);
        prod.concat()
    }

    fn mul_at(&self, at: usize, a: &[Q], b: &[Q]) -> Vec<Q> {
        if at == 0 {
            return vec![&a[0] * &b[0]];
        }
        let sub = self.dims[at - 1];
        let d = self.levels[at - 1].degree();
        let mut prod = vec![vec![Q::zero(); sub]; 2 * d - 1];
        for (i, ai) in a.chunks(sub).enumerate() {
            if ai.iter().all(Zero::is_zero) {
                continue;
            }
            for (j, bj) in b.chunks(sub).enumerate() {
                if bj.iter().all(Zero::is_zero) {
                    continue;
                }
                let t = self.mul_at(at - 1, ai, bj);
                for (x, y) in prod[i + j].iter_mut().zip(t) {
                    *x += y;
                }
            }
        }
        self.reduce_poly(at, prod)
    }

    fn inv_at(&self, at: usize, a: &[Q]) -> Result<Vec<Q>> {
        if a.iter().all(Zero::is_zero) {
            return Err(Error::NotInvertible("division by zero".into()));
        }
        if at == 0 {
            return Ok(vec![a[0].recip()]);
        }
        let sub = self.dims[at - 1];
        let lower = at - 1;
        let ring = PolyRing { tower: self, at: lower };
        let mut p: Vec<Vec<Q>> = self.levels[lower].coeffs.clone();
        let mut one = vec![Q::zero(); sub];
        one[0] = Q::one();
        p.push(one.clone());
        let a_poly = ring.trim(a.chunks(sub).map(|c| c.to_vec()).collect());

        // Extended Euclid: track s with s * a = r (mod p).
        let (mut r0, mut r1) = (p.clone(), a_poly);
        let (mut s0, mut s1): (Vec<Vec<Q>>, Vec<Vec<Q>>) = (Vec::new(), vec![one]);
        while !r1.is_empty() {
            let (quo, rem) = ring.divmod(&r0, &r1)?;
            let s2 = ring.sub(&s0, &ring.mul(&quo, &s1));
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
        }
        if r0.len() > 1 {
            let factor = ring.monic(&r0)?;
            let (cofactor, rem) = ring.divmod(&p, &factor)?;
            debug_assert!(rem.is_empty());
            return Err(Error::ZeroDivisorSplit {
                level: lower,
                factor: factor.iter().map(|c| pad(c, self.dim())).map(|c| FieldElement::raw(self, c)).collect(),
                cofactor: cofactor
                    .iter()
                    .map(|c| pad(c, self.dim()))
                    .map(|c| FieldElement::raw(self, c))
                    .collect(),
            });
        }
        let g_inv = self.inv_at(lower, &r0[0])?;
        let mut out: Vec<Vec<Q>> = s0.iter().map(|c| self.mul_at(lower, c, &g_inv)).collect();
        let d = self.levels[lower].degree();
        let reduced = if out.len() > d {
            self.reduce_poly(at, out)
        } else {
            out.resize(d, vec![Q::zero(); sub]);
            out.concat()
        };
        Ok(reduced)
    }
}

/// Arithmetic on polynomials whose coefficients are flat level-`at` vectors.
struct PolyRing<'a> {
    tower: &'a FieldTower,
    at: usize,
}

impl PolyRing<'_> {
    fn is_zero(c: &[Q]) -> bool {
        c.iter().all(Zero::is_zero)
    }

    fn trim(&self, mut p: Vec<Vec<Q>>) -> Vec<Vec<Q>> {
        while p.last().map_or(false, |c| Self::is_zero(c)) {
            p.pop();
        }
        p
    }

    fn sub(&self, a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
        let dim = self.tower.dims[self.at];
        let n = a.len().max(b.len());
        let mut out = vec![vec![Q::zero(); dim]; n];
        for (i, c) in a.iter().enumerate() {
            for (x, y) in out[i].iter_mut().zip(c) {
                *x += y;
            }
        }
        for (i, c) in b.iter().enumerate() {
            for (x, y) in out[i].iter_mut().zip(c) {
                *x -= y;
            }
        }
        self.trim(out)
    }

    fn mul(&self, a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let dim = self.tower.dims[self.at];
        let mut out = vec![vec![Q::zero(); dim]; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                let t = self.tower.mul_at(self.at, x, y);
                for (o, v) in out[i + j].iter_mut().zip(t) {
                    *o += v;
                }
            }
        }
        self.trim(out)
    }

    fn monic(&self, a: &[Vec<Q>]) -> Result<Vec<Vec<Q>>> {
        let inv = self.tower.inv_at(self.at, a.last().unwrap())?;
        Ok(a.iter().map(|c| self.tower.mul_at(self.at, c, &inv)).collect())
    }

    fn divmod(&self, a: &[Vec<Q>], b: &[Vec<Q>]) -> Result<(Vec<Vec<Q>>, Vec<Vec<Q>>)> {
        let dim = self.tower.dims[self.at];
        let mut rem = self.trim(a.to_vec());
        if rem.len() < b.len() {
            return Ok((Vec::new(), rem));
        }
        let lead_inv = self.tower.inv_at(self.at, b.last().unwrap())?;
        let mut quo = vec![vec![Q::zero(); dim]; rem.len() - b.len() + 1];
        while rem.len() >= b.len() && !rem.is_empty() {
            let shift = rem.len() - b.len();
            let c = self.tower.mul_at(self.at, rem.last().unwrap(), &lead_inv);
            for (i, bi) in b.iter().enumerate() {
                let t = self.tower.mul_at(self.at, &c, bi);
                for (x, y) in rem[shift + i].iter_mut().zip(t) {
                    *x -= y;
                }
            }
            quo[shift] = c;
            rem = self.trim(rem);
        }
        Ok((self.trim(quo), rem))
    }
}

fn pad(c: &[Q], len: usize) -> Vec<Q> {
    let mut v = c.to_vec();
    v.resize(len, Q::zero());
    v
}

/// An element of a [`FieldTower`], stored as its coordinates in the tower's
/// power basis.
#[derive(Clone)]
pub struct FieldElement {
    tower: Arc<FieldTower>,
    coords: Vec<Q>,
}

impl FieldElement {
    fn raw(tower: &FieldTower, coords: Vec<Q>) -> Self {
        FieldElement {
            tower: Arc::new(tower.clone()),
            coords,
        }
    }

    pub fn from_coords(tower: &Arc<FieldTower>, mut coords: Vec<Q>) -> Self {
        coords.resize(tower.dim(), Q::zero());
        FieldElement {
            tower: tower.clone(),
            coords,
        }
    }

    pub fn zero(tower: &Arc<FieldTower>) -> Self {
        Self::from_coords(tower, Vec::new())
    }

    pub fn one(tower: &Arc<FieldTower>) -> Self {
        Self::from_rational(tower, Q::one())
    }

    pub fn from_rational(tower: &Arc<FieldTower>, value: Q) -> Self {
        Self::from_coords(tower, vec![value])
    }

    pub fn from_i64(tower: &Arc<FieldTower>, value: i64) -> Self {
        Self::from_rational(tower, q(value))
    }

    /// The generator of the top level (`x_k`).
    pub fn generator(tower: &Arc<FieldTower>) -> Self {
        assert!(tower.height() > 0, "rationals have no generator");
        let mut coords = vec![Q::zero(); tower.dim()];
        coords[tower.dims[tower.height() - 1]] = Q::one();
        Self::from_coords(tower, coords)
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn coords(&self) -> &[Q] {
        &self.coords
    }

    pub(crate) fn tower_is(&self, other: &Arc<FieldTower>) -> bool {
        Arc::ptr_eq(&self.tower, other) || *self.tower == **other
    }

    pub fn same_tower(&self, other: &FieldElement) -> bool {
        self.tower_is(&other.tower)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, when the element lies in the base field.
    pub fn as_rational(&self) -> Option<&Q> {
        if self.coords[1..].iter().all(Zero::is_zero) {
            Some(&self.coords[0])
        } else {
            None
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        FieldElement {
            tower: self.tower.clone(),
            coords: self.coords.iter().map(|x| x * c).collect(),
        }
    }

    pub fn try_inv(&self) -> Result<Self> {
        let coords = self.tower.inv_at(self.tower.height(), &self.coords).map_err(|e| match e {
            Error::ZeroDivisorSplit { level, factor, cofactor } => Error::ZeroDivisorSplit {
                level,
                factor: factor.into_iter().map(|f| FieldElement::from_coords(&self.tower, f.coords)).collect(),
                cofactor: cofactor.into_iter().map(|f| FieldElement::from_coords(&self.tower, f.coords)).collect(),
            },
            e => e,
        })?;
        Ok(FieldElement {
            tower: self.tower.clone(),
            coords,
        })
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.try_inv()?)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = FieldElement::one(&self.tower);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Embeds into a tower that extends this element's tower.
    pub fn lift_to(&self, target: &Arc<FieldTower>) -> Result<Self> {
        if !target.extends(&self.tower) {
            return Err(Error::Incompatible("target tower does not extend source".into()));
        }
        Ok(FieldElement::from_coords(target, self.coords.clone()))
    }

    /// Maps into the tower obtained by `self.tower().specialize(level, factor)`.
    pub fn specialize(&self, level: usize, factor: &[FieldElement], target: &Arc<FieldTower>) -> Result<Self> {
        let t = &self.tower;
        let below = t.dims[level];
        let mut f: Vec<Vec<Q>> = factor.iter().map(|c| c.coords[..below].to_vec()).collect();
        while f.last().map_or(false, |c| c.iter().all(Zero::is_zero)) {
            f.pop();
        }
        let root = if f.len() == 2 {
            let lead_inv = t.inv_at(level, &f[1])?;
            Some(t.mul_at(level, &f[0], &lead_inv).into_iter().map(|v| -v).collect::<Vec<Q>>())
        } else {
            None
        };
        let coords = t.reduce_into(target, level, root.as_deref(), t.height(), &self.coords)?;
        Ok(FieldElement::from_coords(target, coords))
    }

    fn check(&self, other: &Self) {
        assert!(self.same_tower(other), "field elements from different towers");
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.same_tower(other) && self.coords == other.coords
    }
}

impl Eq for FieldElement {}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(r) => write!(f, "{r}"),
            None => {
                write!(f, "[")?;
                for (i, c) in self.coords.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, "]")
            }
        }
    }
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.check(rhs);
        FieldElement {
            tower: self.tower.clone(),
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self.check(rhs);
        FieldElement {
            tower: self.tower.clone(),
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.check(rhs);
        let coords = if self.coords.len() == 1 {
            vec![&self.coords[0] * &rhs.coords[0]]
        } else {
            self.tower.mul_at(self.tower.height(), &self.coords, &rhs.coords)
        };
        FieldElement {
            tower: self.tower.clone(),
            coords,
        }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            tower: self.tower.clone(),
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &FieldElement) -> FieldElement {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

/// Parses `"p/q"`, `"p"` or a decimal-free integer string.
pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Formats as `"p/q"` (or `"p"` for integers).
pub fn format_rational(r: &Q) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt2() -> Arc<FieldTower> {
        let qq = FieldTower::rationals();
        qq.extend(&[
            FieldElement::from_i64(&qq, -2),
            FieldElement::zero(&qq),
            FieldElement::one(&qq),
        ])
        .unwrap()
    }

    #[test]
    fn sqrt2_arithmetic() {
        let t = sqrt2();
        let x = FieldElement::generator(&t);
        assert_eq!(&x * &x, FieldElement::from_i64(&t, 2));
        let y = &x + &FieldElement::one(&t);
        let inv = y.try_inv().unwrap();
        assert!((&y * &inv).is_one());
        // 1/(1+sqrt2) = sqrt2 - 1
        assert_eq!(inv, &x - &FieldElement::one(&t));
    }

    #[test]
    fn two_level_tower() {
        let t2 = sqrt2();
        let x = FieldElement::generator(&t2);
        // y^2 = sqrt2
        let t = t2
            .extend(&[-x.clone(), FieldElement::zero(&t2), FieldElement::one(&t2)])
            .unwrap();
        let y = FieldElement::generator(&t);
        let y4 = y.pow(4);
        assert_eq!(y4, FieldElement::from_i64(&t, 2));
        let z = &y + &x.lift_to(&t).unwrap();
        let zi = z.try_inv().unwrap();
        assert!((&z * &zi).is_one());
    }

    #[test]
    fn zero_divisor_reports_split() {
        let qq = FieldTower::rationals();
        // x^2 - 1 = (x - 1)(x + 1)
        let t = qq
            .extend(&[
                FieldElement::from_i64(&qq, -1),
                FieldElement::zero(&qq),
                FieldElement::one(&qq),
            ])
            .unwrap();
        let x = FieldElement::generator(&t);
        let z = &x - &FieldElement::one(&t);
        match z.try_inv() {
            Err(Error::ZeroDivisorSplit { level, factor, cofactor }) => {
                assert_eq!(level, 0);
                assert_eq!(factor.len(), 2);
                assert_eq!(cofactor.len(), 2);
                let branch = t.specialize(level, &factor).unwrap();
                assert!(branch.is_rationals());
                // x maps to the root of the factor
                let image = x.specialize(level, &factor, &branch).unwrap();
                assert!(image.is_one());
            }
            other => panic!("expected split, got {other:?}"),
        }
    }

    #[test]
    fn bad_minimal_polynomials() {
        let qq = FieldTower::rationals();
        assert!(qq.extend(&[FieldElement::one(&qq), FieldElement::one(&qq)]).is_err());
        assert!(qq
            .extend(&[FieldElement::zero(&qq), FieldElement::zero(&qq), FieldElement::one(&qq)])
            .is_err());
    }

    #[test]
    fn rational_strings() {
        assert_eq!(parse_rational("-3/6").unwrap(), qf(-1, 2));
        assert_eq!(format_rational(&qf(4, 2)), "2");
        assert!(parse_rational("1/0").is_err());
    }
}
