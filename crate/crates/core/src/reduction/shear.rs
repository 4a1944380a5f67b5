//! The shearing exponent and the monomial shear `H(u^q)`.

use super::sl2::Sl2Triple;
use crate::algebra::field::Q;
use crate::algebra::matrix::Matrix;
use crate::connection::{Connection, GaugeElement};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    RegularSingular,
    Irregular,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShearData {
    /// `min (i + r)/(j + 2)`; `None` when no component is nonzero.
    pub alpha: Option<Q>,
    pub branch: Branch,
    /// Shear exponent `q` in the connection's variable.
    pub q: Q,
    /// Denominator of `q`: the ramification applied before shearing.
    pub ramification: i64,
}

fn ceil_i64(x: &Q) -> i64 {
    x.ceil().to_integer().try_into().unwrap()
}

fn floor_i64(x: &Q) -> i64 {
    x.floor().to_integer().try_into().unwrap()
}

/// Shearing exponent of a connection whose leading term is the nilpotent
/// `triple.f` and whose higher coefficients lie in `Ker(ad_e)`.
pub fn compute_alpha(c: &Connection, triple: &Sl2Triple) -> Result<ShearData> {
    let r = c.pole_order();
    let Some(s) = c.precision() else {
        return Err(Error::precision("shearing exponent needs a finite window", None));
    };
    let mut alpha: Option<Q> = None;
    for i in (-r + 1)..s {
        for (j, _) in triple.components(&c.coeff(i))? {
            if j + 2 <= 0 {
                return Err(Error::DomainViolation("coefficient is not normalized into Ker(ad_e)".into()));
            }
            let cand = Q::new((i + r).into(), (j + 2).into());
            if alpha.as_ref().map_or(true, |a| cand < *a) {
                alpha = Some(cand);
            }
        }
    }
    let half = Q::new((r - 1).into(), 2.into());
    let tail = Q::new((s + r).into(), (triple.j_max() + 2).into());
    let denom = triple.j_max() + 2;
    let (branch, qx) = match &alpha {
        Some(a) if *a < half => {
            if tail <= *a {
                let need = floor_i64(&(a * Q::from_integer(denom.into()))) - r + 1;
                return Err(Error::precision("shearing exponent could drop with more terms", Some(need)));
            }
            (Branch::Irregular, -a.clone())
        }
        _ => {
            if tail < half {
                let need = ceil_i64(&(&half * Q::from_integer(denom.into()))) - r;
                return Err(Error::precision("branch undetermined within the window", Some(need)));
            }
            (Branch::RegularSingular, Q::new((1 - r).into(), 2.into()))
        }
    };
    let ramification: i64 = qx.denom().try_into().unwrap();
    Ok(ShearData {
        alpha,
        branch,
        q: qx,
        ramification,
    })
}

/// Ramify by the denominator `b` of `q`, then gauge by `P diag(w^{b q w_k}) P^{-1}`.
/// Returns the shear gauge (exponents in `t`) and the result.
pub fn shear(c: &Connection, triple: &Sl2Triple, qx: &Q) -> Result<(GaugeElement, Connection)> {
    let b: i64 = qx.denom().try_into().unwrap();
    let e = c.ram();
    let ramified = c.ramify(b);
    let exps: Vec<Q> = triple
        .weights
        .iter()
        .map(|&w| qx * Q::from_integer(w.into()) / Q::from_integer(e.into()))
        .collect();
    let basis = if triple.basis == Matrix::identity(c.tower(), c.rank()) {
        None
    } else {
        Some(&triple.basis)
    };
    let g = GaugeElement::conjugated_monomial(c.tower(), basis, &exps)?;
    let out = ramified.gauge(&g)?;
    Ok((g, out))
}

/// `Γ_{-r} + Σ Γ_i^{(j)}` over the components with `(i + r)/(j + 2) = α`.
pub fn slodowy_leading_term(c: &Connection, triple: &Sl2Triple, alpha: &Q) -> Result<Matrix> {
    let r = c.pole_order();
    let s = c.precision().unwrap_or(r + 1);
    let mut acc = c.leading();
    for i in (-r + 1)..s {
        for (j, comp) in triple.components(&c.coeff(i))? {
            if Q::new((i + r).into(), (j + 2).into()) == *alpha {
                acc = &acc + &comp;
            }
        }
    }
    Ok(acc)
}

/// `br - 2a - b + 1` for `α = a/b`.
pub fn sheared_pole_bound(r: i64, alpha: &Q) -> i64 {
    let b: i64 = alpha.denom().try_into().unwrap();
    let a: i64 = alpha.numer().try_into().unwrap();
    b * r - 2 * a - b + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::{q, qf, FieldTower};
    use crate::reduction::sl2::jacobson_morozov;

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_i64(&FieldTower::rationals(), rows)
    }

    fn bv(b: i64, e: i64, prec: i64) -> Connection {
        let t = FieldTower::rationals();
        Connection::from_terms(
            &t,
            2,
            1,
            vec![(-2, m(&[&[0, 0], &[1, 0]])), (-1, m(&[&[0, b], &[0, 0]])), (0, m(&[&[0, e], &[0, 0]]))],
            Some(prec),
        )
        .unwrap()
    }

    #[test]
    fn alpha_examples() {
        let tr = jacobson_morozov(&m(&[&[0, 0], &[1, 0]])).unwrap();
        let d = compute_alpha(&bv(1, 0, 2), &tr).unwrap();
        assert_eq!(d.alpha, Some(qf(1, 4)));
        assert_eq!(d.branch, Branch::Irregular);
        assert_eq!(d.ramification, 4);
        let d0 = compute_alpha(&bv(0, 1, 2), &tr).unwrap();
        assert_eq!(d0.alpha, Some(qf(1, 2)));
        assert_eq!(d0.branch, Branch::RegularSingular);
        assert_eq!(d0.q, qf(-1, 2));
        let dz = compute_alpha(&bv(0, 0, 2), &tr).unwrap();
        assert_eq!(dz.alpha, None);
        assert_eq!(dz.branch, Branch::RegularSingular);
        assert!(compute_alpha(&bv(1, 0, -1), &tr).is_err());
    }

    #[test]
    fn shear_examples() {
        let tr = jacobson_morozov(&m(&[&[0, 0], &[1, 0]])).unwrap();
        let (_, out) = shear(&bv(0, 1, 2), &tr, &qf(-1, 2)).unwrap();
        assert_eq!(out.ram(), 2);
        assert_eq!(out.pole_order(), 1);
        assert_eq!(out.residue_in_t(), Matrix::from_rationals(&FieldTower::rationals(), &[
            vec![qf(1, 2), q(1)],
            vec![q(1), qf(-1, 2)],
        ]));
        let c1 = bv(1, 0, 2);
        let (g, out) = shear(&c1, &tr, &qf(-1, 4)).unwrap();
        assert_eq!(out.ram(), 4);
        assert_eq!(out.pole_order(), 3);
        assert_eq!(out.leading_in_t(), (m(&[&[0, 1], &[1, 0]]), qf(-3, 2)));
        assert_eq!(sheared_pole_bound(2, &qf(1, 4)), 3);
        let pred = slodowy_leading_term(&c1, &tr, &qf(1, 4)).unwrap();
        assert_eq!(pred, m(&[&[0, 1], &[1, 0]]));
        assert!(matches!(g.source(), crate::connection::GaugeSource::Monomial { .. }));
        let (_, same) = shear(&c1, &tr, &q(0)).unwrap();
        assert_eq!(same, c1);
    }
}
