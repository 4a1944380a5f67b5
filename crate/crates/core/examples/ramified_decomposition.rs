//! Pulling back along `t = s^d` splits the cohomology into `d` twists.

use meroconn::algebra::field::{q, qf, FieldTower};
use meroconn::algebra::matrix::Matrix;
use meroconn::cohomology::{derham_dims, ramified_decomposition_check};
use meroconn::connection::Connection;

fn main() -> meroconn::Result<()> {
    let t = FieldTower::rationals();
    for res in [q(0), qf(1, 2), qf(1, 3)] {
        let c = Connection::from_terms(&t, 1, 1, vec![(-1, Matrix::from_rationals(&t, &[vec![res.clone()]]))], None)?;
        for d in 1..=3 {
            let pulled = derham_dims(&c.ramify(d))?;
            println!("residue {res}, d = {d}: {:?}, decomposition holds {}", pulled.pair(), ramified_decomposition_check(&c, d)?);
        }
    }
    Ok(())
}
