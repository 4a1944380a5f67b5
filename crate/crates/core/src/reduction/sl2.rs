//! Jacobson-Morozov triples, the `ad_h` grading, and nilpotent orbit data.

use std::collections::BTreeMap;

use crate::algebra::field::{q, FieldElement};
use crate::algebra::matrix::Matrix;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Sl2Triple {
    pub e: Matrix,
    pub f: Matrix,
    pub h: Matrix,
    /// Columns are Jordan chains `v, f v, f^2 v, ...` of `f`.
    pub basis: Matrix,
    /// Eigenvalue of `h` on each column of `basis`.
    pub weights: Vec<i64>,
    /// Chain lengths, non-increasing.
    pub partition: Vec<usize>,
}

fn independent_of(span: &[Vec<FieldElement>], v: &[FieldElement], n: usize) -> Result<bool> {
    let t = v[0].tower();
    let mut cols: Vec<Vec<FieldElement>> = span.to_vec();
    let before = if cols.is_empty() { 0 } else { Matrix::from_columns(t, n, &cols).rank()? };
    cols.push(v.to_vec());
    Ok(Matrix::from_columns(t, n, &cols).rank()? > before)
}

/// Jordan chains of a nilpotent matrix, longest first.
pub fn jordan_chains(f: &Matrix) -> Result<Vec<Vec<Vec<FieldElement>>>> {
    let n = f.rows();
    let t = f.tower();
    if !f.is_nilpotent() {
        return Err(Error::NotNilpotent);
    }
    // kernels[k] = ker f^k
    let mut kernels = vec![Vec::new()];
    let mut pw = Matrix::identity(t, n);
    loop {
        pw = pw.mul(f);
        let k = pw.kernel()?;
        let full = k.len() == n;
        kernels.push(k);
        if full {
            break;
        }
    }
    let m = kernels.len() - 1;
    let mut chains: Vec<Vec<Vec<FieldElement>>> = Vec::new();
    for k in (1..=m).rev() {
        let mut span: Vec<Vec<FieldElement>> = kernels[k - 1].clone();
        for ch in &chains {
            // The member of a longer chain lying in ker f^k \ ker f^{k-1}.
            span.push(ch[ch.len() - k].clone());
        }
        for v in &kernels[k] {
            if independent_of(&span, v, n)? {
                span.push(v.clone());
                let mut chain = vec![v.clone()];
                for _ in 1..k {
                    let next = f.mul_vec(chain.last().unwrap());
                    chain.push(next);
                }
                chains.push(chain);
            }
        }
    }
    Ok(chains)
}

/// The sl2-triple through `f` built from its Jordan chains.
pub fn jacobson_morozov(f: &Matrix) -> Result<Sl2Triple> {
    let n = f.rows();
    let t = f.tower();
    let chains = jordan_chains(f)?;
    let mut cols = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let mut partition = Vec::new();
    let mut h0 = Matrix::zeros(t, n, n);
    let mut e0 = Matrix::zeros(t, n, n);
    let mut off = 0;
    for ch in &chains {
        let k = ch.len();
        partition.push(k);
        for (i, v) in ch.iter().enumerate() {
            cols.push(v.clone());
            let w = k as i64 + 1 - 2 * (i as i64 + 1);
            weights.push(w);
            h0.set(off + i, off + i, FieldElement::from_i64(t, w));
            if i + 1 < k {
                // e v_{i+2} = (i+1)(k-i-1) v_{i+1}, one-based.
                let c = (i as i64 + 1) * (k as i64 - i as i64 - 1);
                e0.set(off + i, off + i + 1, FieldElement::from_i64(t, c));
            }
        }
        off += k;
    }
    let basis = Matrix::from_columns(t, n, &cols);
    let pinv = basis.inverse()?;
    let e = basis.mul(&e0).mul(&pinv);
    let h = basis.mul(&h0).mul(&pinv);
    Ok(Sl2Triple {
        e,
        f: f.clone(),
        h,
        basis,
        weights,
        partition,
    })
}

impl Sl2Triple {
    /// Checks `[h,e] = 2e`, `[h,f] = -2f`, `[e,f] = h`.
    pub fn verify(&self) -> bool {
        self.h.commutator(&self.e) == self.e.scale_q(&q(2))
            && self.h.commutator(&self.f) == self.f.scale_q(&q(-2))
            && self.e.commutator(&self.f) == self.h
    }

    /// `ad_h`-graded components of `m` (given in the standard basis).
    pub fn components(&self, m: &Matrix) -> Result<BTreeMap<i64, Matrix>> {
        let pinv = self.basis.inverse()?;
        let local = pinv.mul(m).mul(&self.basis);
        Ok(grading_components(&local, &self.weights)
            .into_iter()
            .map(|(j, c)| (j, self.basis.mul(&c).mul(&pinv)))
            .collect())
    }

    pub fn j_max(&self) -> i64 {
        2 * (self.partition.first().copied().unwrap_or(1) as i64 - 1)
    }
}

/// Entries `(a, b)` of `m` grouped by `w_a - w_b`; zero components omitted.
pub fn grading_components(m: &Matrix, weights: &[i64]) -> BTreeMap<i64, Matrix> {
    let n = m.rows();
    let t = m.tower();
    let mut out: BTreeMap<i64, Matrix> = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            let x = m.get(a, b);
            if x.is_zero() {
                continue;
            }
            let j = weights[a] - weights[b];
            out.entry(j).or_insert_with(|| Matrix::zeros(t, n, n)).set(a, b, x.clone());
        }
    }
    out
}

/// Nilpotent orbit invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitData {
    pub partition: Vec<usize>,
    pub delta: usize,
    pub j: i64,
}

pub fn transpose_partition(p: &[usize]) -> Vec<usize> {
    let m = p.first().copied().unwrap_or(0);
    (1..=m).map(|k| p.iter().filter(|&&x| x >= k).count()).collect()
}

/// `n^2 - sum (λ^t_k)^2`.
pub fn orbit_dimension(partition: &[usize]) -> usize {
    let n: usize = partition.iter().sum();
    n * n - transpose_partition(partition).iter().map(|x| x * x).sum::<usize>()
}

pub fn orbit_data(f: &Matrix) -> Result<OrbitData> {
    let mut partition: Vec<usize> = jordan_chains(f)?.iter().map(Vec::len).collect();
    partition.sort_unstable_by(|a, b| b.cmp(a));
    let delta = orbit_dimension(&partition);
    let j = 2 * (partition[0] as i64 - 1);
    Ok(OrbitData { partition, delta, j })
}

/// All partitions of `n`, parts non-increasing.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            cur.push(k);
            go(n - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Orbit dimensions realized by nilpotents in `gl_n`, ascending.
pub fn realized_deltas(n: usize) -> Vec<usize> {
    let mut d: Vec<usize> = partitions(n).iter().map(|p| orbit_dimension(p)).collect();
    d.sort_unstable();
    d.dedup();
    d
}

/// Largest `2(λ_1 - 1)` over partitions with orbit dimension `delta`.
pub fn j_delta(n: usize, delta: usize) -> Result<i64> {
    partitions(n)
        .iter()
        .filter(|p| orbit_dimension(p) == delta)
        .map(|p| 2 * (p[0] as i64 - 1))
        .max()
        .ok_or(Error::NoSuchOrbit { n, delta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::FieldTower;

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_i64(&FieldTower::rationals(), rows)
    }

    #[test]
    fn jm_examples() {
        let tr = jacobson_morozov(&m(&[&[0, 0], &[1, 0]])).unwrap();
        assert_eq!(tr.e, m(&[&[0, 1], &[0, 0]]));
        assert_eq!(tr.h, m(&[&[1, 0], &[0, -1]]));
        assert!(tr.verify());
        let z = jacobson_morozov(&m(&[&[0, 0], &[0, 0]])).unwrap();
        assert!(z.e.is_zero() && z.h.is_zero());
        let j3 = jacobson_morozov(&m(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]])).unwrap();
        assert_eq!(j3.h, m(&[&[2, 0, 0], &[0, 0, 0], &[0, 0, -2]]));
        assert!(j3.verify());
        assert!(matches!(jacobson_morozov(&m(&[&[1, 0], &[0, 0]])), Err(Error::NotNilpotent)));
    }

    #[test]
    fn jm_on_non_standard_basis() {
        let f = m(&[&[1, -1, 2], &[1, -1, 2], &[0, 0, 0]]);
        let tr = jacobson_morozov(&f).unwrap();
        assert!(tr.verify());
        assert_eq!(tr.partition, vec![2, 1]);
    }

    #[test]
    fn grading() {
        let w = [1, -1];
        let g = grading_components(&m(&[&[0, 0], &[1, 0]]), &w);
        assert_eq!(g.keys().copied().collect::<Vec<_>>(), vec![-2]);
        let g = grading_components(&m(&[&[1, 2], &[3, 4]]), &w);
        assert_eq!(g[&2], m(&[&[0, 2], &[0, 0]]));
        assert_eq!(g[&0], m(&[&[1, 0], &[0, 4]]));
        assert_eq!(g[&-2], m(&[&[0, 0], &[3, 0]]));
    }

    #[test]
    fn orbits() {
        let o = orbit_data(&m(&[&[0, 0], &[1, 0]])).unwrap();
        assert_eq!((o.partition.clone(), o.delta, o.j), (vec![2], 2, 2));
        let o = orbit_data(&m(&[&[0, 0, 0], &[0, 0, 0], &[0, 0, 0]])).unwrap();
        assert_eq!((o.partition.clone(), o.delta, o.j), (vec![1, 1, 1], 0, 0));
        assert_eq!(orbit_dimension(&[2, 1]), 4);
        assert_eq!(j_delta(3, 4).unwrap(), 2);
        assert!(matches!(j_delta(3, 5), Err(Error::NoSuchOrbit { .. })));
        assert_eq!(realized_deltas(3), vec![0, 4, 6]);
    }
}
