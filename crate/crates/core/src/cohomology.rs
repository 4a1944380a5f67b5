//! De Rham cohomology of `∇ = d/du + Γ(u)` on `k((u))^n` by finite linear
//! algebra on lattice windows.
//!
//! Two certified routes exist. A regular-singular connection is truncated
//! to a window that strictly contains the integer spectrum of its residue,
//! outside of which every graded piece of `∇` is an isomorphism. Any other
//! connection is rewritten through a cyclic vector as a scalar operator
//! `Σ_j u^j P_j(θ)`; the valuations of its Laurent solutions are integer roots
//! of the lowest `P_j`, so `H^0` is the kernel of a finite triangular
//! recursion. `H^1` is `H^0` of the dual connection. Window doubling remains
//! available as an uncertified cross-check.

use std::fmt;

use num_traits::{One, Zero};

use crate::algebra::field::{FieldElement, FieldTower, Q};
use crate::algebra::matrix::Matrix;
use crate::algebra::matseries::monomial_series;
use crate::algebra::poly::integer_roots;
use crate::algebra::series::{Laurent, LaurentMatrix, LaurentSeries};
use crate::connection::Connection;
use crate::error::{Error, Result};

/// Source window `u^{n_min} Λ / u^{n_max} Λ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeWindow {
    pub n_min: i64,
    pub n_max: i64,
}

impl LatticeWindow {
    pub fn new(n_min: i64, n_max: i64) -> Result<Self> {
        if n_min >= n_max {
            return Err(Error::DomainViolation(format!("empty lattice window [{n_min}, {n_max})")));
        }
        Ok(LatticeWindow { n_min, n_max })
    }

    pub fn symmetric(l: i64) -> Self {
        LatticeWindow { n_min: -l, n_max: l }
    }
}

impl fmt::Display for LatticeWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.n_min, self.n_max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certificate {
    SpectrumDerived,
    WindowDoubling,
}

impl Certificate {
    pub fn as_str(&self) -> &'static str {
        match self {
            Certificate::SpectrumDerived => "spectrum-derived",
            Certificate::WindowDoubling => "window-doubling",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeRhamDims {
    pub h0: usize,
    pub h1: usize,
    pub chi: i64,
    pub window: LatticeWindow,
    pub stabilized: bool,
    pub certificate: Certificate,
}

impl DeRhamDims {
    fn new(h0: usize, h1: usize, window: LatticeWindow, stabilized: bool, certificate: Certificate) -> Self {
        DeRhamDims {
            h0,
            h1,
            chi: h0 as i64 - h1 as i64,
            window,
            stabilized,
            certificate,
        }
    }

    pub fn pair(&self) -> (usize, usize) {
        (self.h0, self.h1)
    }
}

/// Integer `N` with `det(R + N I) = 0`, each with `dim Ker(R + N I)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RsSpectrum {
    pub points: Vec<(i64, usize)>,
}

impl RsSpectrum {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn values(&self) -> Vec<i64> {
        self.points.iter().map(|&(n, _)| n).collect()
    }
}

fn eval_at(coeffs: &[FieldElement], x: i64) -> FieldElement {
    let t = coeffs[0].tower();
    let x = FieldElement::from_i64(t, x);
    coeffs
        .iter()
        .rev()
        .fold(FieldElement::zero(t), |acc, c| &(&acc * &x) + c)
}

/// Determinant of multiplication by `v` on the tower as a rational vector space.
fn norm(v: &FieldElement) -> Q {
    let t = v.tower();
    let dim = t.dim();
    let rationals = FieldTower::rationals();
    let cols: Vec<Vec<FieldElement>> = (0..dim)
        .map(|k| {
            let mut e = vec![Q::zero(); dim];
            e[k] = Q::one();
            let prod = v * &FieldElement::from_coords(t, e);
            prod.coords().iter().map(|x| FieldElement::from_rational(&rationals, x.clone())).collect()
        })
        .collect();
    let m = Matrix::from_columns(&rationals, dim, &cols);
    m.det().as_rational().cloned().expect("rational determinant")
}

/// Coefficients (low to high) of the polynomial through `(k, ys[k])`.
fn interpolate(ys: &[Q]) -> Vec<Q> {
    let d = ys.len();
    let mut out = vec![Q::zero(); d];
    for (i, y) in ys.iter().enumerate() {
        let mut basis = vec![Q::one()];
        let mut denom = Q::one();
        for j in (0..d).filter(|&j| j != i) {
            let mut next = vec![Q::zero(); basis.len() + 1];
            for (k, b) in basis.iter().enumerate() {
                next[k + 1] += b;
                next[k] -= b * Q::from_integer((j as i64).into());
            }
            basis = next;
            denom *= Q::from_integer((i as i64 - j as i64).into());
        }
        let scale = y / denom;
        for (k, b) in basis.iter().enumerate() {
            out[k] += b * &scale;
        }
    }
    out
}

/// Integer roots of a polynomial over the tower (coefficients low to high).
///
/// When the tower is not a field, an integer at which the polynomial is a
/// nonzero non-unit raises [`Error::ZeroDivisorSplit`].
pub fn tower_integer_roots(coeffs: &[FieldElement]) -> Result<Vec<i64>> {
    let Some(top) = coeffs.iter().rposition(|c| !c.is_zero()) else {
        return Ok(Vec::new());
    };
    let coeffs = &coeffs[..=top];
    let t = coeffs[0].tower();
    if t.is_rationals() {
        let q: Vec<Q> = coeffs.iter().map(|c| c.coords()[0].clone()).collect();
        return Ok(integer_roots(&q));
    }
    let ys: Vec<Q> = (0..=(top * t.dim()) as i64).map(|x| norm(&eval_at(coeffs, x))).collect();
    let norm_poly = interpolate(&ys);
    if norm_poly.iter().all(Zero::is_zero) {
        for c in coeffs.iter().filter(|c| !c.is_zero()) {
            c.try_inv()?;
        }
        return Err(Error::DomainViolation("polynomial with unit coefficients has zero norm".into()));
    }
    let mut roots = Vec::new();
    for m in integer_roots(&norm_poly) {
        let v = eval_at(coeffs, m);
        if v.is_zero() {
            roots.push(m);
        } else {
            v.try_inv()?;
        }
    }
    Ok(roots)
}

pub fn rs_spectrum(residue: &Matrix) -> Result<RsSpectrum> {
    let n = residue.rows();
    let p = (-residue).charpoly();
    let mut points = Vec::new();
    for root in tower_integer_roots(p.coeffs())? {
        let shifted = residue + &Matrix::identity(residue.tower(), n).scale(&FieldElement::from_i64(residue.tower(), root));
        points.push((root, n - shifted.rank()?));
    }
    Ok(RsSpectrum { points })
}

fn effective_pole(c: &Connection) -> i64 {
    c.pole_order().max(1)
}

/// Matrix of `∇` from `u^a Λ/u^b Λ` to `u^{a-r} Λ/u^{b-r} Λ`, `r = max(pole order, 1)`.
pub fn truncated_operator(c: &Connection, w: LatticeWindow) -> Result<Matrix> {
    let n = c.rank();
    let r = effective_pole(c);
    let (a, b) = (w.n_min, w.n_max);
    let need = b - a - r;
    if let Some(p) = c.precision() {
        if p < need {
            return Err(Error::precision(format!("window {w} needs Γ below u^{need}"), Some(need)));
        }
    }
    let t = c.tower();
    let size = n * (b - a) as usize;
    let lo = a - r;
    let mut m = Matrix::zeros(t, size, size);
    let row = |e: i64, i: usize| -> Option<usize> {
        (e >= lo && e < b - r).then(|| (e - lo) as usize * n + i)
    };
    for k in a..b {
        for j in 0..n {
            let col = (k - a) as usize * n + j;
            if k != 0 {
                if let Some(rw) = row(k - 1, j) {
                    m.set(rw, col, &m.get(rw, col).clone() + &FieldElement::from_i64(t, k));
                }
            }
            for (p, g) in c.gamma().terms() {
                if p >= need {
                    break;
                }
                for i in 0..n {
                    if let Some(rw) = row(k + p, i) {
                        let x = g.get(i, j);
                        if !x.is_zero() {
                            m.set(rw, col, &m.get(rw, col).clone() + x);
                        }
                    }
                }
            }
        }
    }
    Ok(m)
}

/// Kernel and cokernel dimensions of `∇` on one window, without any claim of
/// stabilization.
pub fn truncated_complex_dims(c: &Connection, w: LatticeWindow) -> Result<DeRhamDims> {
    let m = truncated_operator(c, w)?;
    let rank = m.rank()?;
    Ok(DeRhamDims::new(
        m.cols() - rank,
        m.rows() - rank,
        w,
        false,
        Certificate::WindowDoubling,
    ))
}

fn rs_window(spec: &RsSpectrum) -> LatticeWindow {
    let vals = spec.values();
    let lo = vals.iter().copied().min().unwrap_or(0).min(0);
    let hi = vals.iter().copied().max().unwrap_or(0).max(0);
    LatticeWindow { n_min: lo, n_max: hi + 1 }
}

fn rs_dims(c: &Connection) -> Result<DeRhamDims> {
    if !c.knows(-1) {
        return Err(Error::precision("residue beyond the known window", Some(0)));
    }
    let w = rs_window(&rs_spectrum(&c.coeff(-1))?);
    let d = truncated_complex_dims(c, w)?;
    Ok(DeRhamDims::new(d.h0, d.h1, w, true, Certificate::SpectrumDerived))
}

fn falling(x: i64, k: usize) -> i64 {
    (0..k as i64).map(|i| x - i).product()
}

/// Scalar operator `Σ_k B_k(u) θ(θ-1)...(θ-k+1)` annihilating `c_0 Y` for
/// every horizontal `Y`, built from the cyclic row vector `c_0`.
fn scalar_operator(c: &Connection, c0: &[LaurentSeries]) -> Option<Vec<LaurentSeries>> {
    let n = c.rank();
    let g = c.gamma();
    let mut rows: Vec<Vec<LaurentSeries>> = vec![c0.to_vec()];
    for k in 0..n {
        let prev = &rows[k];
        let next: Vec<LaurentSeries> = (0..n)
            .map(|j| {
                let mut acc = prev[j].deriv_u();
                for (i, p) in prev.iter().enumerate() {
                    acc = acc.sub(&p.mul(&g.entry(i, j)));
                }
                acc
            })
            .collect();
        rows.push(next);
    }
    let cn = rows.pop().unwrap();
    let cmat = LaurentMatrix::from_entries(c.tower(), &rows);
    let (det, adj) = cmat.det_adjugate();
    if det.is_zero() {
        return None;
    }
    let t = c.tower();
    let ram = c.ram();
    let mut ops = Vec::with_capacity(n + 1);
    for k in 0..n {
        let mut a = Laurent::zero(ram, None, FieldElement::zero(t));
        for (j, x) in cn.iter().enumerate() {
            a = a.add(&x.mul(&adj.entry(j, k)));
        }
        ops.push(a.neg().shift(n as i64 - k as i64));
    }
    ops.push(det);
    Some(ops)
}

fn cyclic_candidates(c: &Connection) -> Vec<Vec<LaurentSeries>> {
    let n = c.rank();
    let t = c.tower();
    let ram = c.ram();
    let mono = |e: i64, v: i64| monomial_series(t, ram, e, Q::from_integer(v.into()));
    let mut out = Vec::new();
    for i in 0..n {
        out.push((0..n).map(|j| mono(0, (i == j) as i64)).collect());
    }
    out.push((0..n).map(|j| mono(0, j as i64 + 1)).collect());
    out.push((0..n).map(|j| mono(j as i64, 1)).collect());
    out.push((0..n).map(|j| mono(0, 1).add(&mono(j as i64 + 1, 1))).collect());
    for s in 1..=3i64 {
        out.push((0..n).map(|j| mono(s * j as i64, (j as i64 + s) % 3 + 1)).collect());
    }
    out
}

/// `(h^0, window)` through the indicial recursion of a scalar operator.
fn indicial_h0(c: &Connection) -> Result<Option<(usize, LatticeWindow)>> {
    let Some(ops) = cyclic_candidates(c).iter().find_map(|c0| scalar_operator(c, c0)) else {
        return Ok(None);
    };
    let t = c.tower();
    let j0 = ops.iter().filter(|b| !b.is_zero()).map(|b| b.valuation().unwrap()).min().unwrap();
    for b in &ops {
        if b.is_zero() && !b.knows(j0) {
            return Err(Error::precision("indicial polynomial beyond the known window", None));
        }
    }
    // P_j evaluated at an integer.
    let p_at = |j: i64, x: i64| -> FieldElement {
        ops.iter().enumerate().fold(FieldElement::zero(t), |acc, (k, b)| {
            let f = falling(x, k);
            if f == 0 {
                acc
            } else {
                &acc + &b.coeff(j).scale(&Q::from_integer(f.into()))
            }
        })
    };
    let indicial: Vec<FieldElement> = {
        // Coefficients of P_{j0} in the monomial basis.
        let deg = ops.len();
        let mut coeffs = vec![FieldElement::zero(t); deg];
        for (k, b) in ops.iter().enumerate() {
            let mut ff = vec![Q::from_integer(1.into())];
            for i in 0..k as i64 {
                let mut nf = vec![Q::from_integer(0.into()); ff.len() + 1];
                for (d, x) in ff.iter().enumerate() {
                    nf[d + 1] += x;
                    nf[d] -= x * Q::from_integer(i.into());
                }
                ff = nf;
            }
            let bk = b.coeff(j0);
            for (d, x) in ff.iter().enumerate() {
                coeffs[d] = &coeffs[d] + &bk.scale(x);
            }
        }
        coeffs
    };
    let roots = tower_integer_roots(&indicial)?;
    let (Some(&lo), Some(&hi)) = (roots.iter().min(), roots.iter().max()) else {
        return Ok(Some((0, LatticeWindow { n_min: 0, n_max: 1 })));
    };
    let span = hi - lo;
    for b in &ops {
        if !b.knows(j0 + span) {
            return Err(Error::precision(
                "indicial recursion beyond the known window",
                Some(j0 + span + 1),
            ));
        }
    }
    let size = (span + 1) as usize;
    let mut m = Matrix::zeros(t, size, size);
    for row in 0..size {
        let mrow = lo + row as i64;
        for col in 0..=row {
            let mcol = lo + col as i64;
            let d = mrow - mcol;
            m.set(row, col, p_at(j0 + d, mcol));
        }
    }
    Ok(Some((size - m.rank()?, LatticeWindow { n_min: lo, n_max: hi + 1 })))
}

fn indicial_dims(c: &Connection) -> Result<Option<DeRhamDims>> {
    let Some((h0, w0)) = indicial_h0(c)? else {
        return Ok(None);
    };
    let Some((h1, w1)) = indicial_h0(&c.dual())? else {
        return Ok(None);
    };
    let w = LatticeWindow {
        n_min: w0.n_min.min(w1.n_min),
        n_max: w0.n_max.max(w1.n_max),
    };
    Ok(Some(DeRhamDims::new(h0, h1, w, true, Certificate::SpectrumDerived)))
}

pub const MAX_DOUBLINGS: usize = 6;

/// Symmetric windows `[-L, L)` with `L = 2, 4, ...` until the dimensions repeat
/// on two consecutive doublings.
pub fn doubling_dims(c: &Connection) -> Result<DeRhamDims> {
    let mut history: Vec<(usize, usize)> = Vec::new();
    let mut l = 2;
    for _ in 0..=MAX_DOUBLINGS {
        let w = LatticeWindow::symmetric(l);
        let d = truncated_complex_dims(c, w)?;
        history.push(d.pair());
        let k = history.len();
        if k >= 3 && history[k - 1] == history[k - 2] && history[k - 2] == history[k - 3] {
            return Ok(DeRhamDims::new(d.h0, d.h1, w, true, Certificate::WindowDoubling));
        }
        l *= 2;
    }
    Err(Error::Unstabilized(MAX_DOUBLINGS))
}

/// Stabilized de Rham dimensions, certified whenever possible.
pub fn derham_dims(c: &Connection) -> Result<DeRhamDims> {
    if c.pole_order() <= 1 {
        return rs_dims(c);
    }
    if c.leading().is_invertible()? {
        let w = LatticeWindow { n_min: 0, n_max: 1 };
        let d = truncated_complex_dims(c, w)?;
        return Ok(DeRhamDims::new(d.h0, d.h1, w, true, Certificate::SpectrumDerived));
    }
    match indicial_dims(c)? {
        Some(d) => Ok(d),
        None => doubling_dims(c),
    }
}

/// Dimensions that must carry a certificate.
pub fn certified_dims(c: &Connection) -> Result<DeRhamDims> {
    let d = derham_dims(c)?;
    if d.certificate != Certificate::SpectrumDerived {
        return Err(Error::Unstabilized(MAX_DOUBLINGS));
    }
    Ok(d)
}

/// Dimensions on every branch of the tower: a zero divisor met along the way
/// splits the offending level into its two factors.
pub fn derham_all_branches(c: &Connection) -> Result<Vec<(Connection, DeRhamDims)>> {
    match derham_dims(c) {
        Ok(d) => Ok(vec![(c.clone(), d)]),
        Err(Error::ZeroDivisorSplit { level, factor, cofactor }) if level < c.tower().height() => {
            let mut out = Vec::new();
            for f in [factor, cofactor] {
                let tower = c.tower().specialize(level, &f)?;
                out.extend(derham_all_branches(&c.specialize(level, &f, &tower)?)?);
            }
            Ok(out)
        }
        Err(e) => Err(e),
    }
}

/// `|χ| <= (2r + 1) n` and `h^0 <= n`.
pub fn euler_bound_check(c: &Connection, dims: &DeRhamDims) -> bool {
    let n = c.rank() as i64;
    let r = c.pole_order();
    dims.chi.abs() <= (2 * r + 1) * n && dims.h0 as i64 <= n
}

/// The form `u^{exponent} v du`.
#[derive(Clone, Debug, PartialEq)]
pub struct FormVector {
    pub exponent: i64,
    pub vector: Vec<FieldElement>,
}

/// Monomial forms spanning `H^1` of a regular-singular connection: the
/// standard basis vectors outside `Im ∇`, in pivot order, on the certified
/// window.
pub fn h1_generators(c: &Connection) -> Result<Vec<FormVector>> {
    let r = c.pole_order();
    if r > 1 {
        return Err(Error::NotRegularSingular(r));
    }
    let w = rs_dims(c)?.window;
    let m = truncated_operator(c, w)?;
    let n = c.rank();
    let t = c.tower();
    let lo = w.n_min - effective_pole(c);
    let rows = m.rows();
    let mut cols: Vec<Vec<FieldElement>> = (0..m.cols()).map(|j| m.column(j)).collect();
    cols.extend((0..rows).map(|i| Matrix::identity(t, rows).column(i)));
    let (_, pivots) = Matrix::from_columns(t, rows, &cols).rref()?;
    Ok(pivots
        .into_iter()
        .filter(|&p| p >= m.cols())
        .map(|p| {
            let idx = p - m.cols();
            FormVector {
                exponent: lo + (idx / n) as i64,
                vector: Matrix::identity(t, n).column(idx % n),
            }
        })
        .collect())
}

/// Rank of the generators modulo the image of `∇` on the certified window.
pub fn h1_generator_rank(c: &Connection, gens: &[FormVector]) -> Result<usize> {
    let d = rs_dims(c)?;
    let w = d.window;
    let m = truncated_operator(c, w)?;
    let n = c.rank();
    let lo = w.n_min - effective_pole(c);
    let mut cols: Vec<Vec<FieldElement>> = (0..m.cols()).map(|j| m.column(j)).collect();
    let base = m.rank()?;
    for g in gens {
        let mut v = vec![FieldElement::zero(c.tower()); m.rows()];
        let off = (g.exponent - lo) as usize * n;
        for (i, x) in g.vector.iter().enumerate() {
            v[off + i] = x.clone();
        }
        cols.push(v);
    }
    Ok(Matrix::from_columns(c.tower(), m.rows(), &cols).rank()? - base)
}

/// `h^*(ramify(c, d)) = Σ_{i<d} h^*(c ⊗ (d + (i/d) du/u))`.
pub fn ramified_decomposition_check(c: &Connection, d: i64) -> Result<bool> {
    let left = derham_dims(&c.ramify(d))?;
    let (mut h0, mut h1) = (0, 0);
    for i in 0..d {
        let phi = monomial_series(c.tower(), c.ram(), -1, Q::new(i.into(), d.into()));
        let part = derham_dims(&c.scalar_twist(&phi)?)?;
        h0 += part.h0;
        h1 += part.h1;
    }
    Ok(left.pair() == (h0, h1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::{qf, FieldTower};

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_i64(&FieldTower::rationals(), rows)
    }

    fn conn(n: usize, terms: Vec<(i64, Matrix)>) -> Connection {
        Connection::from_terms(&FieldTower::rationals(), n, 1, terms, None).unwrap()
    }

    fn rank1(terms: &[(i64, Q)]) -> Connection {
        let t = FieldTower::rationals();
        conn(1, terms.iter().map(|(e, x)| (*e, Matrix::from_rationals(&t, &[vec![x.clone()]]))).collect())
    }

    #[test]
    fn truncated_examples() {
        let d = truncated_complex_dims(&rank1(&[]), LatticeWindow::new(-3, 3).unwrap()).unwrap();
        assert_eq!(d.pair(), (1, 1));
        let w = LatticeWindow::new(-5, 5).unwrap();
        assert_eq!(truncated_complex_dims(&rank1(&[(-2, qf(1, 1))]), w).unwrap().pair(), (0, 0));
        let cocycle = conn(2, vec![(-2, m(&[&[0, 1], &[0, 0]])), (0, m(&[&[0, 0], &[2, 0]]))]);
        let d = truncated_complex_dims(&cocycle, LatticeWindow::new(-4, 6).unwrap()).unwrap();
        assert!(d.h0 >= 1);
    }

    #[test]
    fn spectrum_examples() {
        let t = FieldTower::rationals();
        assert!(rs_spectrum(&Matrix::from_rationals(&t, &[vec![qf(1, 2)]])).unwrap().is_empty());
        assert_eq!(rs_spectrum(&m(&[&[0]])).unwrap().points, vec![(0, 1)]);
        assert_eq!(rs_spectrum(&m(&[&[0, 0], &[0, -3]])).unwrap().values(), vec![0, 3]);
        assert_eq!(rs_spectrum(&m(&[&[0, 0], &[0, 0]])).unwrap().points, vec![(0, 2)]);
    }

    #[test]
    fn derham_examples() {
        assert_eq!(derham_dims(&rank1(&[(-1, qf(1, 2))])).unwrap().pair(), (0, 0));
        assert_eq!(derham_dims(&rank1(&[])).unwrap().pair(), (1, 1));
        let nil = conn(2, vec![(-1, m(&[&[0, 1], &[0, 0]]))]);
        let d = derham_dims(&nil).unwrap();
        assert_eq!(d.pair(), (1, 1));
        assert_eq!(d.certificate, Certificate::SpectrumDerived);
        assert_eq!(derham_dims(&rank1(&[(-3, qf(2, 1))])).unwrap().pair(), (0, 0));
    }

    #[test]
    fn indicial_route_on_irregular_nilpotent() {
        // Eliminating y2 gives u^2 y'' + 2u y' - 2y = 0 with exponents 1 and -2:
        // sections (u, -u^2) and (u^-2, 2u^-1).
        let c = conn(2, vec![(-2, m(&[&[0, 1], &[0, 0]])), (0, m(&[&[0, 0], &[2, 0]]))]);
        let d = derham_dims(&c).unwrap();
        assert_eq!(d.certificate, Certificate::SpectrumDerived);
        assert_eq!(d.pair(), (2, 2));
        assert!(euler_bound_check(&c, &d));
        let bv = conn(2, vec![(-2, m(&[&[0, 0], &[1, 0]])), (-1, m(&[&[0, 1], &[0, 0]]))]);
        assert_eq!(derham_dims(&bv).unwrap().pair(), (0, 0));
    }

    #[test]
    fn doubling_agrees_on_regular_singular() {
        for c in [
            rank1(&[]),
            rank1(&[(-1, qf(-2, 1)), (0, qf(1, 1))]),
            conn(2, vec![(-1, m(&[&[0, 0], &[0, -3]])), (0, m(&[&[1, 1], &[0, 1]]))]),
        ] {
            assert_eq!(derham_dims(&c).unwrap().pair(), doubling_dims(&c).unwrap().pair());
        }
    }

    #[test]
    fn generators() {
        let g = h1_generators(&rank1(&[])).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].exponent, -1);
        assert!(h1_generators(&rank1(&[(-1, qf(1, 2))])).unwrap().is_empty());
        let z = conn(2, vec![]);
        let g = h1_generators(&z).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(h1_generator_rank(&z, &g).unwrap(), 2);
        assert!(matches!(
            h1_generators(&rank1(&[(-2, qf(1, 1))])),
            Err(Error::NotRegularSingular(2))
        ));
    }

    #[test]
    fn ramified_decomposition() {
        for res in [qf(0, 1), qf(1, 2), qf(1, 3)] {
            for d in 1..=3 {
                assert!(ramified_decomposition_check(&rank1(&[(-1, res.clone())]), d).unwrap());
            }
        }
    }

    #[test]
    fn zero_divisor_residue_splits() {
        let t = FieldTower::rationals();
        let poly: Vec<FieldElement> = [qf(1, 2), qf(-3, 2), qf(1, 1)]
            .into_iter()
            .map(|x| FieldElement::from_rational(&t, x))
            .collect();
        let k = t.extend(&poly).unwrap();
        let lam = FieldElement::generator(&k);
        let c = Connection::from_terms(&k, 1, 1, vec![(-1, Matrix::diagonal(&k, &[lam]))], None).unwrap();
        assert!(matches!(derham_dims(&c), Err(Error::ZeroDivisorSplit { .. })));
        let mut pairs: Vec<_> = derham_all_branches(&c).unwrap().into_iter().map(|(_, d)| d.pair()).collect();
        pairs.sort();
        assert_eq!(pairs, vec![(0, 0), (1, 1)]);
    }
}
