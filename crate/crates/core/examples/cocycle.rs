//! Horizontal sections `(t^l, -l t^{l+1})` of an irregular nilpotent family.

use meroconn::algebra::field::{q, FieldElement, FieldTower};
use meroconn::algebra::matrix::Matrix;
use meroconn::algebra::series::LaurentSeries;
use meroconn::cohomology::derham_dims;
use meroconn::connection::Connection;

fn main() -> meroconn::Result<()> {
    let t = FieldTower::rationals();
    let mono = |e: i64, c: i64| LaurentSeries::monomial(1, e, FieldElement::from_rational(&t, q(c)), None);
    for l in 0..=3i64 {
        let c = Connection::from_terms(
            &t,
            2,
            1,
            vec![
                (-2, Matrix::from_i64(&t, &[&[0, 1], &[0, 0]])),
                (0, Matrix::from_i64(&t, &[&[0, 0], &[l * (l + 1), 0]])),
            ],
            None,
        )?;
        let out = c.apply_nabla(&[mono(l, 1), mono(l + 1, -l)])?;
        let flat = out.iter().all(LaurentSeries::is_zero);
        println!("l = {l}: horizontal {flat}, (h0, h1) = {:?}", derham_dims(&c)?.pair());
    }
    Ok(())
}
