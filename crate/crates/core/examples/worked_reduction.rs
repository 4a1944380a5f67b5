//! Reduction trees of `E21 t^{-2} + b E12 t^{-1} + e E12`, the irregular
//! branch printed as JSON.

use meroconn::algebra::field::FieldTower;
use meroconn::algebra::matrix::Matrix;
use meroconn::connection::Connection;
use meroconn::json::{to_text, tree_json};
use meroconn::reduction::driver::{reduce, replay};

fn main() -> meroconn::Result<()> {
    let t = FieldTower::rationals();
    for (b, e) in [(0, 1), (1, 0)] {
        let c = Connection::from_terms(
            &t,
            2,
            1,
            vec![
                (-2, Matrix::from_i64(&t, &[&[0, 0], &[1, 0]])),
                (-1, Matrix::from_i64(&t, &[&[0, b], &[0, 0]])),
                (0, Matrix::from_i64(&t, &[&[0, e], &[0, 0]])),
            ],
            None,
        )?;
        let tree = reduce(&c)?;
        println!("b = {b}: depth {}, leaves:", tree.depth());
        for leaf in tree.leaves() {
            println!("  {} (ram {})", leaf.kind(), leaf.connection().ram());
        }
        println!("replays: {}", replay(&tree, &c)?);
        if b == 1 {
            print!("{}", to_text(&tree_json(&tree)));
        }
    }
    Ok(())
}
