//! Dense matrices over a field tower with exact Gaussian elimination.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use super::field::{q, FieldElement, FieldTower, Q};
use super::poly::Poly;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq)]
pub struct Matrix {
    tower: Arc<FieldTower>,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl Matrix {
    pub fn zeros(tower: &Arc<FieldTower>, rows: usize, cols: usize) -> Self {
        Matrix {
            tower: tower.clone(),
            rows,
            cols,
            data: vec![FieldElement::zero(tower); rows * cols],
        }
    }

    pub fn identity(tower: &Arc<FieldTower>, n: usize) -> Self {
        let mut m = Self::zeros(tower, n, n);
        for i in 0..n {
            m.data[i * n + i] = FieldElement::one(tower);
        }
        m
    }

    /// Matrix unit `E_{ij}` (zero-based indices).
    pub fn unit(tower: &Arc<FieldTower>, n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(tower, n, n);
        m.data[i * n + j] = FieldElement::one(tower);
        m
    }

    pub fn from_rows(tower: &Arc<FieldTower>, rows: Vec<Vec<FieldElement>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix {
            tower: tower.clone(),
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_rationals(tower: &Arc<FieldTower>, rows: &[Vec<Q>]) -> Self {
        Self::from_rows(
            tower,
            rows.iter()
                .map(|r| r.iter().map(|x| FieldElement::from_rational(tower, x.clone())).collect())
                .collect(),
        )
    }

    pub fn from_i64(tower: &Arc<FieldTower>, rows: &[&[i64]]) -> Self {
        Self::from_rationals(
            tower,
            &rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect::<Vec<_>>(),
        )
    }

    pub fn diagonal(tower: &Arc<FieldTower>, diag: &[FieldElement]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(tower, n, n);
        for (i, d) in diag.iter().enumerate() {
            m.data[i * n + i] = d.clone();
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(tower: &Arc<FieldTower>, rows: usize, cols: &[Vec<FieldElement>]) -> Self {
        let mut m = Self::zeros(tower, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..rows {
                m.data[i * cols.len() + j] = c[i].clone();
            }
        }
        m
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElement {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(FieldElement::is_zero)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = Matrix::zeros(&self.tower, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(FieldElement::zero(&self.tower), |acc, j| &acc + &(self.get(i, j) * &v[j]))
            })
            .collect()
    }

    pub fn scale(&self, c: &FieldElement) -> Matrix {
        Matrix {
            tower: self.tower.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn scale_q(&self, c: &Q) -> Matrix {
        Matrix {
            tower: self.tower.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.scale(c)).collect(),
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(&self.tower, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// `[self, other] = self*other - other*self`.
    pub fn commutator(&self, other: &Matrix) -> Matrix {
        &self.mul(other) - &other.mul(self)
    }

    pub fn trace(&self) -> FieldElement {
        (0..self.rows.min(self.cols)).fold(FieldElement::zero(&self.tower), |acc, i| &acc + self.get(i, i))
    }

    pub fn is_scalar(&self) -> bool {
        let c = self.get(0, 0);
        (0..self.rows).all(|i| (0..self.cols).all(|j| if i == j { self.get(i, j) == c } else { self.get(i, j).is_zero() }))
    }

    pub fn pow(&self, e: u32) -> Matrix {
        let mut acc = Matrix::identity(&self.tower, self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn is_nilpotent(&self) -> bool {
        self.pow(self.rows as u32).is_zero()
    }

    /// Sub-block `rows r0..r1`, `cols c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Matrix {
        let mut out = Matrix::zeros(&self.tower, r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                out.set(i - r0, j - c0, self.get(i, j).clone());
            }
        }
        out
    }

    /// Block-diagonal assembly.
    pub fn block_diagonal(tower: &Arc<FieldTower>, blocks: &[Matrix]) -> Matrix {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut out = Matrix::zeros(tower, n, n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(off + i, off + j, b.get(i, j).clone());
                }
            }
            off += b.rows;
        }
        out
    }

    /// Row-major flattening.
    pub fn to_vec(&self) -> Vec<FieldElement> {
        self.data.clone()
    }

    pub fn from_vec(tower: &Arc<FieldTower>, rows: usize, cols: usize, data: Vec<FieldElement>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix {
            tower: tower.clone(),
            rows,
            cols,
            data,
        }
    }

    /// The matrix of `C -> [self, C]` acting on row-major `vec(C)`.
    pub fn ad(&self) -> Matrix {
        let n = self.rows;
        let mut out = Matrix::zeros(&self.tower, n * n, n * n);
        for i in 0..n {
            for j in 0..n {
                let row = i * n + j;
                for k in 0..n {
                    // (X C)_{ij} = sum_k X_ik C_kj
                    let x = self.get(i, k);
                    if !x.is_zero() {
                        let col = k * n + j;
                        out.data[row * n * n + col] = &out.data[row * n * n + col] + x;
                    }
                    // -(C X)_{ij} = -sum_k C_ik X_kj
                    let y = self.get(k, j);
                    if !y.is_zero() {
                        let col = i * n + k;
                        out.data[row * n * n + col] = &out.data[row * n * n + col] - y;
                    }
                }
            }
        }
        out
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> Result<(Matrix, Vec<usize>)> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).try_inv()?;
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = m.get(i, j) - &(&f * m.get(r, j));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Ok((m, pivots))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> Result<usize> {
        Ok(self.rref()?.1.len())
    }

    /// Basis of the null space (column vectors), free variables in order.
    pub fn kernel(&self) -> Result<Vec<Vec<FieldElement>>> {
        let (r, pivots) = self.rref()?;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        Ok(free
            .iter()
            .map(|&f| {
                let mut v = vec![FieldElement::zero(&self.tower); self.cols];
                v[f] = FieldElement::one(&self.tower);
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(row, f);
                }
                v
            })
            .collect())
    }

    /// Basis of the column space, chosen among the original columns.
    pub fn column_space(&self) -> Result<Vec<Vec<FieldElement>>> {
        let (_, pivots) = self.rref()?;
        Ok(pivots.iter().map(|&c| self.column(c)).collect())
    }

    /// Solves `self * x = b` with free variables set to zero.
    pub fn solve(&self, b: &[FieldElement]) -> Result<Option<Vec<FieldElement>>> {
        let mut aug = Matrix::zeros(&self.tower, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref()?;
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![FieldElement::zero(&self.tower); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r.get(row, self.cols).clone();
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::NotInvertible("non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(&self.tower, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, FieldElement::one(&self.tower));
        }
        let (r, pivots) = aug.rref()?;
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::NotInvertible("singular matrix".into()));
        }
        Ok(r.block(0, n, n, 2 * n))
    }

    pub fn is_invertible(&self) -> Result<bool> {
        Ok(self.is_square() && self.rank()? == self.rows)
    }

    /// Characteristic polynomial `det(x I - self)` by Faddeev-LeVerrier
    /// (divides only by integers, so it never meets a zero divisor).
    pub fn charpoly(&self) -> Poly {
        let n = self.rows;
        let t = &self.tower;
        let mut coeffs = vec![FieldElement::zero(t); n + 1];
        coeffs[n] = FieldElement::one(t);
        let mut m = Matrix::zeros(t, n, n);
        let id = Matrix::identity(t, n);
        for k in 1..=n {
            m = &self.mul(&m) + &id.scale(&coeffs[n - k + 1]);
            let am = self.mul(&m);
            coeffs[n - k] = am.trace().scale(&Q::new((-1).into(), (k as i64).into()));
        }
        Poly::new(t, coeffs)
    }

    pub fn det(&self) -> FieldElement {
        let p = self.charpoly();
        let c0 = p.coeffs().first().cloned().unwrap_or_else(|| FieldElement::zero(&self.tower));
        if self.rows % 2 == 1 {
            -c0
        } else {
            c0
        }
    }

    pub fn lift_to(&self, target: &Arc<FieldTower>) -> Result<Matrix> {
        Ok(Matrix {
            tower: target.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.lift_to(target)).collect::<Result<_>>()?,
        })
    }

    pub fn specialize(&self, level: usize, factor: &[FieldElement], target: &Arc<FieldTower>) -> Result<Matrix> {
        Ok(Matrix {
            tower: target.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|x| x.specialize(level, factor, target))
                .collect::<Result<_>>()?,
        })
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

impl<'a> Add<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            tower: self.tower.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            tower: self.tower.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix {
            tower: self.tower.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }
}
