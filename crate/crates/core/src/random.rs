//! Seeded generators for connections, gauges and series.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::field::{FieldElement, FieldTower, Q};
use crate::algebra::matrix::Matrix;
use crate::algebra::series::{Laurent, LaurentMatrix};
use crate::connection::{Connection, GaugeElement};

pub type Rng8 = ChaCha8Rng;

/// Generator for instance `index` of a run seeded by `seed`.
pub fn instance_rng(seed: u64, index: usize) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

pub fn small_rational(rng: &mut Rng8) -> Q {
    let num: i64 = rng.gen_range(-3..=3);
    let den: i64 = *[1, 1, 1, 2, 3].choose(rng).unwrap();
    Q::new(num.into(), den.into())
}

pub fn small_int(rng: &mut Rng8) -> Q {
    Q::from_integer(rng.gen_range(-2i64..=2).into())
}

pub fn random_matrix(rng: &mut Rng8, tower: &Arc<FieldTower>, n: usize, density: f64) -> Matrix {
    let mut m = Matrix::zeros(tower, n, n);
    for i in 0..n {
        for j in 0..n {
            if rng.gen_bool(density) {
                m.set(i, j, FieldElement::from_rational(tower, small_rational(rng)));
            }
        }
    }
    m
}

pub fn random_invertible(rng: &mut Rng8, tower: &Arc<FieldTower>, n: usize) -> Matrix {
    loop {
        let m = random_matrix(rng, tower, n, 0.8);
        if m.is_invertible().unwrap_or(false) {
            return m;
        }
    }
}

/// Strictly lower triangular with random entries, conjugated by a random
/// invertible matrix; never zero.
pub fn random_nilpotent(rng: &mut Rng8, tower: &Arc<FieldTower>, n: usize) -> Matrix {
    loop {
        let mut l = Matrix::zeros(tower, n, n);
        for i in 0..n {
            for j in 0..i {
                if rng.gen_bool(0.6) {
                    l.set(i, j, FieldElement::from_rational(tower, small_int(rng)));
                }
            }
        }
        if l.is_zero() {
            continue;
        }
        let p = if rng.gen_bool(0.5) {
            Matrix::identity(tower, n)
        } else {
            random_unimodular(rng, tower, n)
        };
        return p.mul(&l).mul(&p.inverse().unwrap());
    }
}

/// Integer matrix of determinant one.
pub fn random_unimodular(rng: &mut Rng8, tower: &Arc<FieldTower>, n: usize) -> Matrix {
    let mut u = Matrix::identity(tower, n);
    let mut l = Matrix::identity(tower, n);
    for i in 0..n {
        for j in 0..n {
            let x = FieldElement::from_i64(tower, rng.gen_range(-1..=1));
            if i < j {
                u.set(i, j, x);
            } else if i > j {
                l.set(i, j, x);
            }
        }
    }
    l.mul(&u)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LeadKind {
    Generic,
    Invertible,
    Nilpotent,
    /// Diagonalizable with a zero eigenvalue and at least two distinct eigenvalues.
    Semisimple,
    ScalarPlusNilpotent,
}

pub const LEAD_KINDS: [LeadKind; 5] = [
    LeadKind::Generic,
    LeadKind::Invertible,
    LeadKind::Nilpotent,
    LeadKind::Semisimple,
    LeadKind::ScalarPlusNilpotent,
];

pub fn random_lead(rng: &mut Rng8, tower: &Arc<FieldTower>, n: usize, kind: LeadKind) -> Matrix {
    match kind {
        LeadKind::Generic => loop {
            let m = random_matrix(rng, tower, n, 0.6);
            if !m.is_zero() {
                return m;
            }
        },
        LeadKind::Invertible => random_invertible(rng, tower, n),
        LeadKind::Nilpotent if n > 1 => random_nilpotent(rng, tower, n),
        LeadKind::Semisimple if n > 1 => {
            let mut d = vec![Q::from_integer(0.into())];
            while d.len() < n {
                d.push(Q::from_integer(rng.gen_range(-2i64..=2).into()));
            }
            if d.iter().all(|x| *x == d[0]) {
                d[n - 1] = Q::from_integer(1.into());
            }
            let p = random_unimodular(rng, tower, n);
            let diag = Matrix::diagonal(tower, &d.iter().map(|x| FieldElement::from_rational(tower, x.clone())).collect::<Vec<_>>());
            p.mul(&diag).mul(&p.inverse().unwrap())
        }
        LeadKind::ScalarPlusNilpotent if n > 1 => {
            let c = loop {
                let c = small_rational(rng);
                if c != Q::from_integer(0.into()) {
                    break c;
                }
            };
            &random_nilpotent(rng, tower, n) + &Matrix::identity(tower, n).scale_q(&c)
        }
        _ => random_invertible(rng, tower, n),
    }
}

#[derive(Clone, Debug)]
pub struct ConnectionSpec {
    pub n: usize,
    pub r: i64,
    pub kind: LeadKind,
    /// Highest exponent with a random coefficient.
    pub top: i64,
    pub precision: Option<i64>,
}

/// Exact (or truncated) connection `Γ_{-r} u^{-r} + ...` over the rationals.
pub fn random_connection(rng: &mut Rng8, spec: &ConnectionSpec) -> Connection {
    let t = FieldTower::rationals();
    let n = spec.n;
    let mut terms = vec![(-spec.r, random_lead(rng, &t, n, spec.kind))];
    for e in (-spec.r + 1)..=spec.top {
        if spec.precision.map_or(false, |p| e >= p) {
            break;
        }
        if rng.gen_bool(0.6) {
            terms.push((e, random_matrix(rng, &t, n, 0.5)));
        }
    }
    Connection::from_terms(&t, n, 1, terms, spec.precision).expect("nonzero leading term")
}

pub fn random_spec(rng: &mut Rng8, max_n: usize, max_r: i64) -> ConnectionSpec {
    let n = rng.gen_range(1..=max_n);
    let r = rng.gen_range(1..=max_r);
    let kind = *LEAD_KINDS.choose(rng).unwrap();
    ConnectionSpec {
        n,
        r,
        kind,
        top: rng.gen_range(-1..=2),
        precision: None,
    }
}

/// `P (I + u N)` with `P` unimodular and `N` strictly lower triangular: an
/// exact unit gauge with exact inverse.
pub fn random_unit_gauge(rng: &mut Rng8, tower: &Arc<FieldTower>, n: usize) -> GaugeElement {
    let p = random_unimodular(rng, tower, n);
    let mut nil = Matrix::zeros(tower, n, n);
    for i in 0..n {
        for j in 0..i {
            nil.set(i, j, FieldElement::from_rational(tower, small_int(rng)));
        }
    }
    let g = LaurentMatrix::from_matrix(p.clone(), 0).add(&LaurentMatrix::from_matrix(p.mul(&nil), 1));
    GaugeElement::explicit(g, None).expect("unipotent times unimodular is invertible")
}

pub fn random_monomial_gauge(rng: &mut Rng8, tower: &Arc<FieldTower>, n: usize) -> GaugeElement {
    let exps: Vec<Q> = (0..n).map(|_| Q::from_integer(rng.gen_range(-2i64..=2).into())).collect();
    GaugeElement::monomial(tower, &exps)
}

/// Matrix series with support in `[lo, hi]` and precision `prec` (exact when `None`).
pub fn random_series(rng: &mut Rng8, tower: &Arc<FieldTower>, n: usize, lo: i64, hi: i64, prec: Option<i64>) -> LaurentMatrix {
    let mut terms = Vec::new();
    for e in lo..=prec.map_or(hi, |p| hi.min(p - 1)) {
        if rng.gen_bool(0.7) {
            terms.push((e, random_matrix(rng, tower, n, 0.7)));
        }
    }
    Laurent::from_terms(1, terms, prec, Matrix::zeros(tower, n, n))
}
