//! Monomial representatives of `H^1` for a regular singular connection.

use meroconn::algebra::field::FieldTower;
use meroconn::algebra::matrix::Matrix;
use meroconn::cohomology::{derham_dims, h1_generator_rank, h1_generators, rs_spectrum};
use meroconn::connection::Connection;

fn main() -> meroconn::Result<()> {
    let t = FieldTower::rationals();
    let c = Connection::from_terms(
        &t,
        2,
        1,
        vec![
            (-1, Matrix::from_i64(&t, &[&[0, 0], &[0, -3]])),
            (0, Matrix::from_i64(&t, &[&[1, 1], &[0, 1]])),
        ],
        None,
    )?;
    println!("spectrum {:?}", rs_spectrum(&c.coeff(-1))?.points);
    let gens = h1_generators(&c)?;
    for g in &gens {
        println!("u^{} {:?} du", g.exponent, g.vector);
    }
    println!("h1 = {}, generator rank {}", derham_dims(&c)?.h1, h1_generator_rank(&c, &gens)?);
    Ok(())
}
