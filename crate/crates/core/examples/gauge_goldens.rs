//! Monomial gauges clearing the diagonal of `-n/t` and the matching de Rham
//! dimensions.

use meroconn::algebra::field::{q, FieldTower};
use meroconn::algebra::matrix::Matrix;
use meroconn::cohomology::derham_dims;
use meroconn::connection::{Connection, GaugeElement};
use meroconn::json::{matrix_json, to_text};

fn main() -> meroconn::Result<()> {
    let t = FieldTower::rationals();
    for n in 1..=3i64 {
        let g = GaugeElement::monomial(&t, &[q(-n), q(0)]);
        let c = Connection::from_terms(
            &t,
            2,
            1,
            vec![
                (-1, Matrix::from_i64(&t, &[&[-n, 0], &[0, 0]])),
                (n - 1, Matrix::from_i64(&t, &[&[0, 1], &[0, 0]])),
            ],
            None,
        )?;
        let out = c.gauge(&g)?;
        let d = derham_dims(&out)?;
        let residue: String = to_text(&matrix_json(&out.coeff(-1))).split_whitespace().collect();
        println!("n = {n}: pole order {}, residue {residue}, (h0, h1) = {:?}", out.pole_order(), d.pair());
    }
    Ok(())
}
