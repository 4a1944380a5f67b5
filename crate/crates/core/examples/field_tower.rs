//! Computing over `Q[λ]/((λ - 1/2)(λ - 1))` and splitting on the zero divisor.

use meroconn::algebra::field::{q, qf, FieldElement, FieldTower};
use meroconn::algebra::matrix::Matrix;
use meroconn::cohomology::{derham_all_branches, derham_dims};
use meroconn::connection::Connection;
use meroconn::json::field_json;

fn main() -> meroconn::Result<()> {
    let t = FieldTower::rationals();
    let poly: Vec<FieldElement> = [qf(1, 2), qf(-3, 2), q(1)]
        .into_iter()
        .map(|x| FieldElement::from_rational(&t, x))
        .collect();
    let k = t.extend(&poly)?;
    let lam = FieldElement::generator(&k);
    let c = Connection::from_terms(&k, 1, 1, vec![(-1, Matrix::diagonal(&k, &[lam]))], None)?;
    match derham_dims(&c) {
        Err(e) => println!("single tower: {e}"),
        Ok(d) => println!("single tower: {:?}", d.pair()),
    }
    for (branch, d) in derham_all_branches(&c)? {
        println!(
            "field {} residue {:?}: {:?}",
            field_json(branch.tower()),
            branch.residue_in_t().get(0, 0),
            d.pair()
        );
    }
    Ok(())
}
