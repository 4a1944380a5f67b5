//! Certified de Rham dimensions: invertible leading terms are acyclic, a
//! regular singularity is acyclic exactly off the integers.

use meroconn::algebra::field::{q, qf, FieldTower};
use meroconn::algebra::matrix::Matrix;
use meroconn::cohomology::certified_dims;
use meroconn::connection::Connection;
use meroconn::random::{instance_rng, random_connection, ConnectionSpec, LeadKind};

fn main() -> meroconn::Result<()> {
    for i in 0..5 {
        let spec = ConnectionSpec {
            n: 2,
            r: 3,
            kind: LeadKind::Invertible,
            top: 1,
            precision: None,
        };
        let c = random_connection(&mut instance_rng(11, i), &spec);
        let d = certified_dims(&c)?;
        println!("invertible lead #{i}: {:?} ({})", d.pair(), d.certificate.as_str());
    }
    let t = FieldTower::rationals();
    for res in [qf(1, 2), qf(-2, 3), q(0), q(4), q(-1)] {
        let c = Connection::from_terms(&t, 1, 1, vec![(-1, Matrix::from_rationals(&t, &[vec![res.clone()]]))], None)?;
        let d = certified_dims(&c)?;
        println!("residue {res}: {:?} on {}", d.pair(), d.window);
    }
    Ok(())
}
