//! How far `exp(ξ + η)` agrees with `exp(ξ) exp(η)` when `ξ = O(t^N)` and
//! `η = O(t^{N+i})`.

use meroconn::algebra::field::FieldTower;
use meroconn::random::{instance_rng, random_series};

fn main() -> meroconn::Result<()> {
    let t = FieldTower::rationals();
    let prec = 12;
    for (big_n, i) in [(1, 0), (1, 2), (2, 1), (3, 0)] {
        let mut rng = instance_rng(3, (big_n * 10 + i) as usize);
        let xi = random_series(&mut rng, &t, 2, big_n, prec, Some(prec));
        let eta = random_series(&mut rng, &t, 2, big_n + i, prec, Some(prec));
        let diff = xi.exp(Some(prec))?.mul(&eta.exp(Some(prec))?).sub(&xi.add(&eta).exp(Some(prec))?);
        let val = diff.terms().find(|(_, c)| !c.is_zero()).map(|(e, _)| e);
        println!("N = {big_n}, i = {i}: difference starts at {val:?}, bound {}", 2 * big_n + i);
    }
    Ok(())
}
