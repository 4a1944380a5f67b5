//! Connections `d + Γ du` over `u = t^{1/e}`, and the gauge group action.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::Zero;

use crate::algebra::field::{q, FieldElement, FieldTower, Q};
use crate::algebra::matrix::Matrix;
use crate::algebra::matseries::diag_monomial;
use crate::algebra::series::{Laurent, LaurentMatrix, LaurentSeries};
use crate::error::{Error, Result};

/// `d + Γ(u) du`, with `Γ` the coefficient of `du` in the current variable
/// `u = t^{1/e}`.
#[derive(Clone, PartialEq)]
pub struct Connection {
    gamma: LaurentMatrix,
}

impl Connection {
    pub fn new(gamma: LaurentMatrix) -> Result<Self> {
        if !gamma.zero_coeff().is_square() {
            return Err(Error::Incompatible("connection matrix must be square".into()));
        }
        let c = Connection { gamma };
        if let Some(p) = c.precision() {
            if p <= -c.pole_order() {
                return Err(Error::precision(
                    "connection window is empty",
                    Some(-c.pole_order() + 1),
                ));
            }
        }
        Ok(c)
    }

    /// Build from `(exponent, matrix)` pairs in `u = t^{1/ram}`.
    pub fn from_terms(
        tower: &Arc<FieldTower>,
        n: usize,
        ram: i64,
        terms: Vec<(i64, Matrix)>,
        precision: Option<i64>,
    ) -> Result<Self> {
        Self::new(Laurent::from_terms(ram, terms, precision, Matrix::zeros(tower, n, n)))
    }

    pub fn trivial(tower: &Arc<FieldTower>, n: usize, precision: Option<i64>) -> Self {
        Connection {
            gamma: LaurentMatrix::zero_matrix(tower, n, 1, precision),
        }
    }

    pub fn gamma(&self) -> &LaurentMatrix {
        &self.gamma
    }

    pub fn rank(&self) -> usize {
        self.gamma.dim()
    }

    pub fn ram(&self) -> i64 {
        self.gamma.ram()
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        self.gamma.tower()
    }

    /// Order of the pole in `u`-units; `0` when `Γ` is holomorphic.
    pub fn pole_order(&self) -> i64 {
        self.gamma.valuation().map_or(0, |v| (-v).max(0))
    }

    /// Exponents `>= precision` are unknown; `None` when exact.
    pub fn precision(&self) -> Option<i64> {
        self.gamma.prec()
    }

    pub fn is_zero(&self) -> bool {
        self.gamma.is_zero()
    }

    /// Coefficient of `u^i du`.
    pub fn coeff(&self, i: i64) -> Matrix {
        self.gamma.coeff(i)
    }

    pub fn knows(&self, i: i64) -> bool {
        self.gamma.knows(i)
    }

    /// `Γ_{-r}`, or zero for the trivial connection.
    pub fn leading(&self) -> Matrix {
        self.gamma.leading().cloned().unwrap_or_else(|| self.gamma.zero_coeff().clone())
    }

    /// Leading coefficient rewritten in `t`: `Γ_{-r} u^{-r} du = (Γ_{-r}/e) t^{(1-r)/e - 1} dt`.
    /// Returns the matrix and the `t`-exponent.
    pub fn leading_in_t(&self) -> (Matrix, Q) {
        let e = self.ram();
        let r = self.pole_order();
        let m = self.leading().scale_q(&Q::new(1.into(), e.into()));
        (m, Q::new((1 - r - e).into(), e.into()))
    }

    /// Residue in `t`: the `dt/t` coefficient `Γ_{-1}/e`.
    pub fn residue_in_t(&self) -> Matrix {
        self.coeff(-1).scale_q(&Q::new(1.into(), self.ram().into()))
    }

    pub fn truncate(&self, precision: i64) -> Result<Self> {
        Self::new(self.gamma.truncate(precision))
    }

    /// Agreement on the common known window.
    pub fn agrees(&self, other: &Connection) -> bool {
        self.rank() == other.rank() && self.gamma.agrees(&other.gamma)
    }

    /// Pull back along `u = w^b`: `Γ'(w) = b w^{b-1} Γ(w^b)`.
    pub fn ramify(&self, b: i64) -> Connection {
        assert!(b >= 1, "ramification must be positive");
        if b == 1 {
            return self.clone();
        }
        Connection {
            gamma: form_ramify(&self.gamma, b),
        }
    }

    /// Rewrite over ramification index `target`, a multiple of `e`.
    pub fn lift_ram(&self, target: i64) -> Result<Connection> {
        if target % self.ram() != 0 {
            return Err(Error::Incompatible("ramification does not divide target".into()));
        }
        Ok(self.ramify(target / self.ram()))
    }

    /// `Γ + φ I`, where `φ du_φ` is a scalar form in `u_φ = t^{1/e_φ}`.
    pub fn scalar_twist(&self, phi: &LaurentSeries) -> Result<Connection> {
        let l = self.ram().lcm(&phi.ram());
        let c = self.lift_ram(l)?;
        let phi = form_ramify_scalar(phi, l / phi.ram());
        let id = LaurentMatrix::identity(self.tower(), self.rank());
        let twisted = c.gamma.checked_add(&id.scale_series(&phi))?;
        Connection::new(twisted)
    }

    /// `g Γ g^{-1} - (dg/du) g^{-1}`; ramifies first if `g` needs a finer variable.
    pub fn gauge(&self, g: &GaugeElement) -> Result<Connection> {
        if g.rank() != self.rank() {
            return Err(Error::Incompatible("gauge rank mismatch".into()));
        }
        let l = self.ram().lcm(&g.ram());
        let c = self.lift_ram(l)?;
        let gm = g.matrix.lift_ram(l)?;
        let gi = g.inverse.lift_ram(l)?;
        let conj = gm.checked_mul(&c.gamma)?.checked_mul(&gi)?;
        let dlog = gm.deriv_u().checked_mul(&gi)?;
        Connection::new(conj.checked_add(&dlog.neg())?)
    }

    /// `∇ v = dv/du + Γ v`, the `du`-coefficient in the current variable.
    pub fn apply_nabla(&self, v: &[LaurentSeries]) -> Result<Vec<LaurentSeries>> {
        if v.len() != self.rank() {
            return Err(Error::Incompatible("vector length differs from rank".into()));
        }
        let l = v.iter().fold(self.ram(), |acc, x| acc.lcm(&x.ram()));
        let c = self.lift_ram(l)?;
        let v: Vec<LaurentSeries> = v.iter().map(|x| x.lift_ram(l)).collect::<Result<_>>()?;
        let gv = c.gamma.apply(&v);
        Ok(v.iter().zip(gv).map(|(x, y)| x.deriv_u().add(&y)).collect())
    }

    /// Change basis to the columns of `p` (gauge by `p^{-1}`) and cut into
    /// diagonal blocks of the given sizes.
    pub fn block_split(&self, p: &Matrix, sizes: &[usize]) -> Result<Vec<Connection>> {
        if sizes.iter().sum::<usize>() != self.rank() {
            return Err(Error::Incompatible("block sizes do not sum to the rank".into()));
        }
        let pinv = p.inverse()?;
        let conj = self.gamma.left_mul_const(&pinv).right_mul_const(p);
        let mut offsets = vec![0];
        for s in sizes {
            offsets.push(offsets.last().unwrap() + s);
        }
        let block_of = |i: usize| offsets.iter().rposition(|&o| o <= i).unwrap();
        for (_, m) in conj.terms() {
            for i in 0..self.rank() {
                for j in 0..self.rank() {
                    if block_of(i) != block_of(j) && !m.get(i, j).is_zero() {
                        return Err(Error::NotBlockDiagonal);
                    }
                }
            }
        }
        sizes
            .iter()
            .enumerate()
            .map(|(k, &s)| {
                let (a, b) = (offsets[k], offsets[k] + s);
                let zero = Matrix::zeros(self.tower(), s, s);
                Connection::new(conj.map(zero, |m| m.block(a, b, a, b)))
            })
            .collect()
    }

    pub fn direct_sum(parts: &[Connection]) -> Result<Connection> {
        let tower = parts[0].tower().clone();
        let l = parts.iter().fold(1, |acc, c| acc.lcm(&c.ram()));
        let lifted: Vec<Connection> = parts.iter().map(|c| c.lift_ram(l)).collect::<Result<_>>()?;
        let n: usize = parts.iter().map(|c| c.rank()).sum();
        let prec = lifted.iter().fold(None, |acc, c| crate::algebra::series::min_prec(acc, c.precision()));
        let lo = lifted.iter().filter(|c| !c.is_zero()).map(|c| c.gamma.val_bound()).min();
        let hi = lifted.iter().map(|c| c.gamma.end()).max().unwrap_or(0);
        let Some(lo) = lo else {
            return Ok(Connection {
                gamma: LaurentMatrix::zero_matrix(&tower, n, l, prec),
            });
        };
        let hi = prec.map_or(hi, |p| hi.min(p));
        let terms = (lo..hi)
            .map(|k| {
                let blocks: Vec<Matrix> = lifted
                    .iter()
                    .map(|c| if c.knows(k) { c.coeff(k) } else { c.gamma.zero_coeff().clone() })
                    .collect();
                (k, Matrix::block_diagonal(&tower, &blocks))
            })
            .collect();
        Connection::from_terms(&tower, n, l, terms, prec)
    }

    /// The dual connection `-Γ^T`.
    pub fn dual(&self) -> Connection {
        Connection {
            gamma: self.gamma.transpose().neg(),
        }
    }

    pub fn lift_to(&self, tower: &Arc<FieldTower>) -> Result<Connection> {
        let n = self.rank();
        Connection::new(self.gamma.try_map(Matrix::zeros(tower, n, n), |m| m.lift_to(tower))?)
    }

    pub fn specialize(&self, level: usize, factor: &[FieldElement], tower: &Arc<FieldTower>) -> Result<Connection> {
        let n = self.rank();
        Connection::new(
            self.gamma
                .try_map(Matrix::zeros(tower, n, n), |m| m.specialize(level, factor, tower))?,
        )
    }
}

/// Pull back a matrix form `Γ du` along `u = w^b`.
pub fn form_ramify(g: &LaurentMatrix, b: i64) -> LaurentMatrix {
    if b == 1 {
        return g.clone();
    }
    g.ramify(b).shift(b - 1).scale_q(&q(b))
}

/// Pull back a scalar form `φ du` along `u = w^b`.
pub fn form_ramify_scalar(phi: &LaurentSeries, b: i64) -> LaurentSeries {
    if b == 1 {
        return phi.clone();
    }
    phi.ramify(b).shift(b - 1).scale_q(&q(b))
}

impl fmt::Debug for Connection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Connection[n={}, e={}] {}", self.rank(), self.ram(), self.gamma)
    }
}

/// Where a gauge element came from.
#[derive(Clone, Debug, PartialEq)]
pub enum GaugeSource {
    Explicit,
    /// `exp(ξ)`.
    Exp(LaurentMatrix),
    /// `P diag(t^{q_k}) P^{-1}` with rational exponents in `t`; `P = None` is the identity basis.
    Monomial { basis: Option<Matrix>, exponents: Vec<Q> },
}

/// An invertible matrix series together with its inverse.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeElement {
    matrix: LaurentMatrix,
    inverse: LaurentMatrix,
    source: GaugeSource,
}

impl GaugeElement {
    pub fn identity(tower: &Arc<FieldTower>, n: usize) -> Self {
        let id = LaurentMatrix::identity(tower, n);
        GaugeElement {
            matrix: id.clone(),
            inverse: id,
            source: GaugeSource::Monomial {
                basis: None,
                exponents: vec![Q::zero(); n],
            },
        }
    }

    /// Wrap an explicit matrix series; `target` bounds the inverse if it is not exact.
    pub fn explicit(g: LaurentMatrix, target: Option<i64>) -> Result<Self> {
        let inverse = g.inverse(target)?;
        Ok(GaugeElement {
            matrix: g,
            inverse,
            source: GaugeSource::Explicit,
        })
    }

    pub fn constant(p: &Matrix) -> Result<Self> {
        Ok(GaugeElement {
            matrix: LaurentMatrix::from_matrix(p.clone(), 0),
            inverse: LaurentMatrix::from_matrix(p.inverse()?, 0),
            source: GaugeSource::Explicit,
        })
    }

    /// `exp(ξ)` with `val(ξ) >= 1`, known below `target` when not exact.
    pub fn exp(xi: &LaurentMatrix, target: Option<i64>) -> Result<Self> {
        let matrix = xi.exp(target)?;
        let inverse = xi.neg().exp(target)?;
        Ok(GaugeElement {
            matrix,
            inverse,
            source: GaugeSource::Exp(xi.clone()),
        })
    }

    /// `diag(t^{q_1}, ..., t^{q_n})`.
    pub fn monomial(tower: &Arc<FieldTower>, exponents: &[Q]) -> Self {
        Self::conjugated_monomial(tower, None, exponents).expect("identity basis is invertible")
    }

    /// `P diag(t^{q_k}) P^{-1}`.
    pub fn conjugated_monomial(tower: &Arc<FieldTower>, basis: Option<&Matrix>, exponents: &[Q]) -> Result<Self> {
        let ram = exponents.iter().fold(1i64, |acc, x| {
            let d: i64 = x.denom().try_into().expect("exponent denominator fits in i64");
            acc.lcm(&d)
        });
        let ints: Vec<i64> = exponents
            .iter()
            .map(|x| (x * Q::from_integer(ram.into())).to_integer().try_into().unwrap())
            .collect();
        let neg: Vec<i64> = ints.iter().map(|a| -a).collect();
        let mut matrix = diag_monomial(tower, ram, &ints);
        let mut inverse = diag_monomial(tower, ram, &neg);
        if let Some(p) = basis {
            let pinv = p.inverse()?;
            matrix = matrix.left_mul_const(p).right_mul_const(&pinv);
            inverse = inverse.left_mul_const(p).right_mul_const(&pinv);
        }
        Ok(GaugeElement {
            matrix,
            inverse,
            source: GaugeSource::Monomial {
                basis: basis.cloned(),
                exponents: exponents.to_vec(),
            },
        })
    }

    pub fn matrix(&self) -> &LaurentMatrix {
        &self.matrix
    }

    pub fn inverse_matrix(&self) -> &LaurentMatrix {
        &self.inverse
    }

    pub fn source(&self) -> &GaugeSource {
        &self.source
    }

    pub fn rank(&self) -> usize {
        self.matrix.dim()
    }

    pub fn ram(&self) -> i64 {
        self.matrix.ram().lcm(&self.inverse.ram())
    }

    pub fn inverse(&self) -> GaugeElement {
        let source = match &self.source {
            GaugeSource::Exp(xi) => GaugeSource::Exp(xi.neg()),
            GaugeSource::Monomial { basis, exponents } => GaugeSource::Monomial {
                basis: basis.clone(),
                exponents: exponents.iter().map(|x| -x).collect(),
            },
            GaugeSource::Explicit => GaugeSource::Explicit,
        };
        GaugeElement {
            matrix: self.inverse.clone(),
            inverse: self.matrix.clone(),
            source,
        }
    }

    /// `self * other` (apply `other` first).
    pub fn compose(&self, other: &GaugeElement) -> GaugeElement {
        let source = match (&self.source, &other.source) {
            (
                GaugeSource::Monomial { basis: b1, exponents: e1 },
                GaugeSource::Monomial { basis: b2, exponents: e2 },
            ) if b1 == b2 => GaugeSource::Monomial {
                basis: b1.clone(),
                exponents: e1.iter().zip(e2).map(|(a, b)| a + b).collect(),
            },
            _ => GaugeSource::Explicit,
        };
        GaugeElement {
            matrix: self.matrix.mul(&other.matrix),
            inverse: other.inverse.mul(&self.inverse),
            source,
        }
    }

    /// The gauge written over a smaller tower-compatible field.
    pub fn lift_to(&self, tower: &Arc<FieldTower>) -> Result<GaugeElement> {
        let n = self.rank();
        let lift = |s: &LaurentMatrix| s.try_map(Matrix::zeros(tower, n, n), |m| m.lift_to(tower));
        Ok(GaugeElement {
            matrix: lift(&self.matrix)?,
            inverse: lift(&self.inverse)?,
            source: GaugeSource::Explicit,
        })
    }

    pub fn is_identity(&self) -> bool {
        let id = LaurentMatrix::identity(self.matrix.tower(), self.rank());
        self.matrix == id
    }
}

/// Whether `gauge(gauge(c, h), g)` and `gauge(c, g h)` agree on their common window.
pub fn gauge_compose_law_check(c: &Connection, g: &GaugeElement, h: &GaugeElement) -> Result<bool> {
    let lhs = c.gauge(h)?.gauge(g)?;
    let rhs = c.gauge(&g.compose(h))?;
    Ok(lhs.agrees(&rhs))
}

/// The twist form `λ dt/t` as a scalar series in `t`.
pub fn log_form(tower: &Arc<FieldTower>, lambda: Q) -> LaurentSeries {
    Laurent::monomial(1, -1, FieldElement::from_rational(tower, lambda), None)
}

/// `t^a` as an exact scalar series with `a` rational.
pub fn t_power(tower: &Arc<FieldTower>, a: &Q) -> LaurentSeries {
    let d: i64 = a.denom().try_into().unwrap();
    let n: i64 = a.numer().try_into().unwrap();
    Laurent::monomial(d, n, FieldElement::one(tower), None)
}
