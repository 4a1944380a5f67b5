//! Jordan-Chevalley splitting of the leading term, Sibuya normalization and
//! eigen-block splitting.

use std::sync::Arc;

use crate::algebra::field::{FieldElement, FieldTower, Q};
use crate::algebra::matrix::Matrix;
use crate::algebra::poly::Poly;
use crate::algebra::series::Laurent;
use crate::connection::{Connection, GaugeElement};
use crate::error::{Error, Result};

/// `M = s + f` with `s` semisimple, `f` nilpotent, `[s, f] = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct JordanPair {
    pub s: Matrix,
    pub f: Matrix,
}

impl JordanPair {
    pub fn is_nilpotent(&self) -> bool {
        self.s.is_zero()
    }

    pub fn s_is_scalar(&self) -> bool {
        self.s.is_scalar()
    }
}

/// Chevalley-Newton iteration `s <- s - p(s) p'(s)^{-1}` on the squarefree
/// part `p` of the characteristic polynomial.
pub fn jordan_chevalley(m: &Matrix) -> Result<JordanPair> {
    assert!(m.is_square());
    let p = m.charpoly().squarefree_part()?;
    let dp = p.derivative();
    let mut s = m.clone();
    for _ in 0..=m.rows() {
        let ps = p.eval_matrix(&s);
        if ps.is_zero() {
            break;
        }
        let step = ps.mul(&dp.eval_matrix(&s).inverse()?);
        s = &s - &step;
    }
    debug_assert!(p.eval_matrix(&s).is_zero());
    let f = m - &s;
    Ok(JordanPair { s, f })
}

/// The splitting `gl_n = Ker(ad a) ⊕ Im(ad b)` used by the normalization.
#[derive(Clone, Debug, PartialEq)]
pub enum KernelMode {
    /// `Ker(ad_s) ⊕ Im(ad_s)` for the semisimple part `s`.
    AdS(Matrix),
    /// `Ker(ad_e) ⊕ Im(ad_f)` for an sl2-triple `(e, f, h)`.
    AdE { e: Matrix, f: Matrix },
}

impl KernelMode {
    fn operators(&self) -> (&Matrix, &Matrix) {
        match self {
            KernelMode::AdS(s) => (s, s),
            KernelMode::AdE { e, f } => (e, f),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            KernelMode::AdS(_) => "ad_s",
            KernelMode::AdE { .. } => "ad_e",
        }
    }
}

/// Projection onto the two summands of a kernel-image splitting.
#[derive(Clone, Debug)]
pub struct Splitting {
    kernel: Vec<Vec<FieldElement>>,
    image: Vec<Vec<FieldElement>>,
    coords: Matrix,
    n: usize,
}

impl Splitting {
    pub fn new(mode: &KernelMode) -> Result<Self> {
        let (k_op, i_op) = mode.operators();
        let n = k_op.rows();
        let t = k_op.tower();
        let kernel = k_op.ad().kernel()?;
        let image = i_op.ad().column_space()?;
        if kernel.len() + image.len() != n * n {
            return Err(Error::LinearSolveFailed("kernel and image are not complementary".into()));
        }
        let cols: Vec<Vec<FieldElement>> = kernel.iter().chain(image.iter()).cloned().collect();
        let basis = Matrix::from_columns(t, n * n, &cols);
        let coords = basis
            .inverse()
            .map_err(|_| Error::LinearSolveFailed("kernel and image intersect".into()))?;
        Ok(Splitting {
            kernel,
            image,
            coords,
            n,
        })
    }

    pub fn kernel_basis(&self) -> Vec<Matrix> {
        let t = self.coords.tower();
        self.kernel
            .iter()
            .map(|v| Matrix::from_vec(t, self.n, self.n, v.clone()))
            .collect()
    }

    /// `M = M1 + M2` with `M1` in the kernel and `M2` in the image.
    pub fn split(&self, m: &Matrix) -> (Matrix, Matrix) {
        let t = m.tower();
        let x = self.coords.mul_vec(&m.to_vec());
        let k = self.kernel.len();
        let mut m2 = vec![FieldElement::zero(t); self.n * self.n];
        for (j, v) in self.image.iter().enumerate() {
            if x[k + j].is_zero() {
                continue;
            }
            for (a, b) in m2.iter_mut().zip(v) {
                *a = &*a + &(&x[k + j] * b);
            }
        }
        let m2 = Matrix::from_vec(t, self.n, self.n, m2);
        (m - &m2, m2)
    }

    /// Whether `m` lies in the kernel summand.
    pub fn in_kernel(&self, m: &Matrix) -> bool {
        self.split(m).1.is_zero()
    }
}

/// One normalization step: gauge by `exp(u^i C)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SibuyaStep {
    pub i: i64,
    pub c: Matrix,
}

#[derive(Clone, Debug)]
pub struct NormalizationRecord {
    pub gauge: GaugeElement,
    pub steps: Vec<SibuyaStep>,
    pub normalized: Connection,
    pub mode: KernelMode,
    pub kernel: Vec<Matrix>,
}

/// Gauges the coefficients above the leading term into the kernel summand
/// of `mode`, one exponent at a time. Needs a finite precision and `r >= 2`.
pub fn sibuya_normalize(c: &Connection, mode: &KernelMode) -> Result<NormalizationRecord> {
    let r = c.pole_order();
    let Some(prec) = c.precision() else {
        return Err(Error::precision("normalization needs a finite window", None));
    };
    if r < 2 {
        return Err(Error::DomainViolation("normalization needs pole order at least 2".into()));
    }
    let n = c.rank();
    let t = c.tower().clone();
    let lead = c.leading();
    let split = Splitting::new(mode)?;
    let ad_lead = lead.ad();
    let target = prec + r;
    let mut cur = c.clone();
    let mut total = GaugeElement::identity(&t, n);
    let mut steps = Vec::new();
    for i in 1..(prec + r) {
        let (_, m2) = split.split(&cur.coeff(-r + i));
        if m2.is_zero() {
            continue;
        }
        let sol = ad_lead
            .solve(&m2.to_vec())?
            .ok_or_else(|| Error::LinearSolveFailed(format!("[Γ_-r, C] = M2 has no solution at step {i}")))?;
        let mut cm = Matrix::from_vec(&t, n, n, sol);
        let tr = cm.trace().scale(&Q::new(1.into(), (n as i64).into()));
        cm = &cm - &Matrix::identity(&t, n).scale(&tr);
        let xi = Laurent::monomial(cur.ram(), i, cm.clone(), None);
        let g = GaugeElement::exp(&xi, Some(target))?;
        cur = cur.gauge(&g)?;
        total = g.compose(&total);
        steps.push(SibuyaStep { i, c: cm });
    }
    Ok(NormalizationRecord {
        gauge: total,
        steps,
        normalized: cur,
        mode: mode.clone(),
        kernel: split.kernel_basis(),
    })
}

/// Result of splitting along generalized eigenspaces of `s`.
#[derive(Clone, Debug)]
pub struct EigenSplit {
    pub tower: Arc<FieldTower>,
    pub basis: Matrix,
    pub sizes: Vec<usize>,
    pub blocks: Vec<Connection>,
    /// Eigenvalue of the first block.
    pub eigenvalue: FieldElement,
}

/// Splits a normalized connection into the eigenspace of one eigenvalue of
/// `s` and its complement, extending the tower if needed.
pub fn eigen_block_split(c: &Connection, jp: &JordanPair) -> Result<EigenSplit> {
    if jp.s.is_scalar() {
        return Err(Error::ScalarLeadingTerm);
    }
    let p = jp.s.charpoly().squarefree_part()?;
    let base = c.tower().clone();
    if let Some(theta) = known_root(&p) {
        return split_at(c, &jp.s, &base, &theta, &p);
    }
    let extended = base.extend(p.coeffs())?;
    let level = extended.height() - 1;
    let mut tower = extended;
    loop {
        let theta = FieldElement::generator(&tower);
        let pl = lift_poly(&p, &tower)?;
        let s = jp.s.lift_to(&tower)?;
        let cl = c.lift_to(&tower)?;
        match split_at(&cl, &s, &tower, &theta, &pl) {
            Err(Error::ZeroDivisorSplit { level: l, factor, .. }) if l == level => {
                tower = tower.specialize(level, &factor)?;
                if tower.height() == level {
                    // The factor was linear: the root already lives below.
                    let root = FieldElement::from_coords(&tower, (-&factor[0]).coords()[..tower.dim()].to_vec());
                    let lead_inv = FieldElement::from_coords(&tower, factor[1].coords()[..tower.dim()].to_vec())
                        .try_inv()?;
                    let theta = &root * &lead_inv;
                    let pl = lift_poly(&p, &tower)?;
                    let s = jp.s.lift_to(&tower)?;
                    let cl = c.lift_to(&tower)?;
                    return split_at(&cl, &s, &tower, &theta, &pl);
                }
            }
            other => return other,
        }
    }
}

fn lift_poly(p: &Poly, tower: &Arc<FieldTower>) -> Result<Poly> {
    Ok(Poly::new(
        tower,
        p.coeffs().iter().map(|c| c.lift_to(tower)).collect::<Result<_>>()?,
    ))
}

/// A root found without extending: zero, or a rational root.
fn known_root(p: &Poly) -> Option<FieldElement> {
    let t = p.tower();
    if p.coeffs().first().map_or(true, |c| c.is_zero()) {
        return Some(FieldElement::zero(t));
    }
    let roots = p.rational_roots()?;
    roots.first().map(|r| FieldElement::from_rational(t, r.clone()))
}

fn split_at(c: &Connection, s: &Matrix, tower: &Arc<FieldTower>, theta: &FieldElement, p: &Poly) -> Result<EigenSplit> {
    let n = s.rows();
    let (q1, rem) = p.divmod(&Poly::linear(theta))?;
    if !rem.is_zero() {
        return Err(Error::LinearSolveFailed("eigenvalue is not a root".into()));
    }
    let shifted = s - &Matrix::identity(tower, n).scale(theta);
    let k1 = shifted.kernel()?;
    let k2 = q1.eval_matrix(s).kernel()?;
    if k1.is_empty() || k2.is_empty() || k1.len() + k2.len() != n {
        return Err(Error::LinearSolveFailed("eigenspaces do not decompose".into()));
    }
    let cols: Vec<Vec<FieldElement>> = k1.iter().chain(k2.iter()).cloned().collect();
    let basis = Matrix::from_columns(tower, n, &cols);
    let sizes = vec![k1.len(), k2.len()];
    let blocks = c.block_split(&basis, &sizes)?;
    Ok(EigenSplit {
        tower: tower.clone(),
        basis,
        sizes,
        blocks,
        eigenvalue: theta.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> Arc<FieldTower> {
        FieldTower::rationals()
    }

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_i64(&t(), rows)
    }

    #[test]
    fn jordan_examples() {
        let d = m(&[&[1, 0], &[0, 2]]);
        assert_eq!(jordan_chevalley(&d).unwrap(), JordanPair { s: d.clone(), f: m(&[&[0, 0], &[0, 0]]) });
        let e12 = m(&[&[0, 1], &[0, 0]]);
        assert_eq!(jordan_chevalley(&e12).unwrap().f, e12);
        let j = jordan_chevalley(&m(&[&[1, 1], &[0, 1]])).unwrap();
        assert_eq!(j.s, Matrix::identity(&t(), 2));
        assert_eq!(j.f, e12);
    }

    #[test]
    fn normalize_into_ker_ad_e() {
        let tw = t();
        let f = m(&[&[0, 0], &[1, 0]]);
        let e = m(&[&[0, 1], &[0, 0]]);
        let h = m(&[&[1, 0], &[0, -1]]);
        let c = Connection::from_terms(&tw, 2, 1, vec![(-2, f.clone()), (-1, h)], Some(3)).unwrap();
        let rec = sibuya_normalize(&c, &KernelMode::AdE { e: e.clone(), f: f.clone() }).unwrap();
        let split = Splitting::new(&KernelMode::AdE { e: e.clone(), f }).unwrap();
        for i in -1..3 {
            assert!(split.in_kernel(&rec.normalized.coeff(i)), "exponent {i}");
        }
        assert!(c.gauge(&rec.gauge).unwrap().agrees(&rec.normalized));
        assert_eq!(rec.steps[0].i, 1);
    }

    #[test]
    fn already_normalized_is_untouched() {
        let tw = t();
        let f = m(&[&[0, 0], &[1, 0]]);
        let e = m(&[&[0, 1], &[0, 0]]);
        let c = Connection::from_terms(&tw, 2, 1, vec![(-2, f.clone()), (-1, e.clone())], Some(2)).unwrap();
        let rec = sibuya_normalize(&c, &KernelMode::AdE { e, f }).unwrap();
        assert!(rec.steps.is_empty());
        assert_eq!(rec.normalized, c);
    }

    #[test]
    fn split_rational_and_quadratic() {
        let tw = t();
        let s = m(&[&[1, 0], &[0, 2]]);
        let c = Connection::from_terms(&tw, 2, 1, vec![(-2, s.clone()), (0, m(&[&[3, 0], &[0, 4]]))], Some(2)).unwrap();
        let jp = jordan_chevalley(&s).unwrap();
        let out = eigen_block_split(&c, &jp).unwrap();
        assert_eq!(out.blocks.len(), 2);
        assert!(out.tower.is_rationals());
        // s = [[0,2],[1,0]] has eigenvalues ±√2.
        let s2 = m(&[&[0, 2], &[1, 0]]);
        let c2 = Connection::from_terms(&tw, 2, 1, vec![(-2, s2.clone())], Some(1)).unwrap();
        let out2 = eigen_block_split(&c2, &jordan_chevalley(&s2).unwrap()).unwrap();
        assert_eq!(out2.tower.height(), 1);
        let th = &out2.eigenvalue;
        assert_eq!(th * th, FieldElement::from_i64(&out2.tower, 2));
        assert_eq!(out2.blocks[0].leading(), Matrix::from_rows(&out2.tower, vec![vec![th.clone()]]));
        assert!(matches!(
            eigen_block_split(&c2, &JordanPair { s: Matrix::identity(&tw, 2), f: m(&[&[0, 0], &[0, 0]]) }),
            Err(Error::ScalarLeadingTerm)
        ));
    }

    #[test]
    fn split_over_extended_base() {
        // Over Q(√2) the adjoined root y of y^2 - 2 need not meet a zero
        // divisor; the split is then valid on both branches y = ±√2.
        let q2 = t().extend(&[FieldElement::from_i64(&t(), -2), FieldElement::zero(&t()), FieldElement::one(&t())]).unwrap();
        let s = Matrix::from_i64(&q2, &[&[0, 2], &[1, 0]]);
        let c = Connection::from_terms(&q2, 2, 1, vec![(-2, s.clone())], Some(1)).unwrap();
        let out = eigen_block_split(&c, &jordan_chevalley(&s).unwrap()).unwrap();
        assert_eq!(out.blocks.len(), 2);
        let th = &out.eigenvalue;
        assert_eq!(th * th, FieldElement::from_i64(&out.tower, 2));
    }
}
