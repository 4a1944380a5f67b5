//! Randomized property suites driven by a seed.

use std::fmt;

use rand::Rng;

use crate::algebra::field::FieldTower;
use crate::algebra::series::LaurentMatrix;
use crate::cohomology::{derham_dims, euler_bound_check, ramified_decomposition_check};
use crate::connection::{gauge_compose_law_check, Connection};
use crate::error::{Error, Result};
use crate::random::{
    instance_rng, random_connection, random_monomial_gauge, random_series, random_spec, random_unit_gauge, small_rational,
    ConnectionSpec, LeadKind, Rng8,
};
use crate::reduction::driver::{reduce, replay};
use crate::reduction::stability::stability_constant;

pub const SUITES: &[&str] = &[
    "gauge-action",
    "cbh",
    "euler-bound",
    "tail-invariance",
    "ramified-decomposition",
    "replay",
];

#[derive(Clone, Debug)]
pub struct Failure {
    pub index: usize,
    pub message: String,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub count: usize,
    pub failures: Vec<Failure>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {}/{} passed (seed {})",
            self.suite,
            self.count - self.failures.len(),
            self.count,
            self.seed
        )?;
        for x in &self.failures {
            write!(f, "\n  seed {} instance {}: {}", self.seed, x.index, x.message)?;
        }
        Ok(())
    }
}

type Check = fn(&mut Rng8) -> Result<std::result::Result<(), String>>;

pub fn run_suite(name: &str, seed: u64, count: usize) -> Result<SuiteReport> {
    let check: Check = match name {
        "gauge-action" => gauge_action,
        "cbh" => cbh,
        "euler-bound" => euler_bound,
        "tail-invariance" => tail_invariance,
        "ramified-decomposition" => ramified_decomposition,
        "replay" => replay_instance,
        _ => return Err(Error::DomainViolation(format!("unknown suite {name:?}"))),
    };
    let failures = (0..count)
        .filter_map(|index| {
            let mut rng = instance_rng(seed, index);
            let message = match check(&mut rng) {
                Ok(Ok(())) => return None,
                Ok(Err(m)) => m,
                Err(e) => format!("error: {e}"),
            };
            Some(Failure { index, message })
        })
        .collect();
    Ok(SuiteReport {
        suite: name.to_string(),
        seed,
        count,
        failures,
    })
}

fn verdict(ok: bool, msg: impl FnOnce() -> String) -> Result<std::result::Result<(), String>> {
    Ok(if ok { Ok(()) } else { Err(msg()) })
}

/// Valuation at least `bound` on the known window.
fn vanishes_below(s: &LaurentMatrix, bound: i64) -> bool {
    s.terms().all(|(e, c)| e >= bound || c.is_zero())
}

fn gauge_action(rng: &mut Rng8) -> Result<std::result::Result<(), String>> {
    let spec = random_spec(rng, 3, 3);
    let c = random_connection(rng, &spec);
    let t = c.tower().clone();
    let n = c.rank();
    let g = random_unit_gauge(rng, &t, n);
    let h = if rng.gen_bool(0.5) {
        random_monomial_gauge(rng, &t, n)
    } else {
        random_unit_gauge(rng, &t, n)
    };
    if !gauge_compose_law_check(&c, &g, &h)? {
        return Ok(Err(format!("composition law fails for {spec:?}")));
    }
    let before = derham_dims(&c)?;
    let after = derham_dims(&c.gauge(&g)?)?;
    let shifted = derham_dims(&c.gauge(&h)?)?;
    verdict(
        before.pair() == after.pair() && before.pair() == shifted.pair(),
        || format!("dims {:?} -> {:?} / {:?} for {spec:?}", before.pair(), after.pair(), shifted.pair()),
    )
}

fn cbh(rng: &mut Rng8) -> Result<std::result::Result<(), String>> {
    let t = FieldTower::rationals();
    let n = rng.gen_range(1..=3);
    let big_n = rng.gen_range(1..=3);
    let i = rng.gen_range(0..=3);
    let prec = 2 * big_n + i + rng.gen_range(2..=4);
    let xi = random_series(rng, &t, n, big_n, prec, Some(prec));
    let eta = random_series(rng, &t, n, big_n + i, prec, Some(prec));
    let sum = xi.add(&eta);
    let e_sum = sum.exp(Some(prec))?;
    let e_xi = xi.exp(Some(prec))?;
    let e_eta = eta.exp(Some(prec))?;
    let dl = e_sum.dlog(Some(prec))?.sub(&e_xi.dlog(Some(prec))?).sub(&eta.deriv_t());
    let prod = e_xi.mul(&e_eta).sub(&e_sum);
    let ok_dlog = vanishes_below(&dl, 2 * big_n + i - 1) && dl.prec().map_or(true, |p| p >= 2 * big_n + i - 1);
    let ok_prod = vanishes_below(&prod, 2 * big_n + i) && prod.prec().map_or(true, |p| p >= 2 * big_n + i);
    verdict(ok_dlog && ok_prod, || {
        format!("N={big_n} i={i} n={n} prec={prec}: dlog ok {ok_dlog}, product ok {ok_prod}")
    })
}

fn euler_bound(rng: &mut Rng8) -> Result<std::result::Result<(), String>> {
    let spec = random_spec(rng, 3, 3);
    let c = random_connection(rng, &spec);
    let d = derham_dims(&c)?;
    verdict(d.stabilized && euler_bound_check(&c, &d), || {
        format!("dims {:?} for {spec:?}", d.pair())
    })
}

fn tail_invariance(rng: &mut Rng8) -> Result<std::result::Result<(), String>> {
    let n = 2;
    let r = 2;
    let kind = *[LeadKind::Nilpotent, LeadKind::Semisimple, LeadKind::Generic, LeadKind::ScalarPlusNilpotent]
        .get(rng.gen_range(0..4))
        .unwrap();
    let spec = ConnectionSpec {
        n,
        r,
        kind,
        top: 2,
        precision: None,
    };
    let c = random_connection(rng, &spec);
    let bound = -r + stability_constant(n, r);
    let t = c.tower().clone();
    let tail = random_series(rng, &t, n, bound, bound + 3, None);
    let perturbed = Connection::new(c.gamma().add(&tail))?;
    let a = derham_dims(&c)?;
    let b = derham_dims(&perturbed)?;
    verdict(a.chi == b.chi, || format!("chi {} -> {} for {spec:?}", a.chi, b.chi))
}

fn ramified_decomposition(rng: &mut Rng8) -> Result<std::result::Result<(), String>> {
    let t = FieldTower::rationals();
    let n = rng.gen_range(1..=2);
    let d = rng.gen_range(1..=3);
    let c = if n == 1 {
        let mut terms = vec![(-1, crate::algebra::matrix::Matrix::from_rationals(&t, &[vec![small_rational(rng)]]))];
        if rng.gen_bool(0.3) {
            terms.push((-2, crate::algebra::matrix::Matrix::from_rationals(&t, &[vec![small_rational(rng)]])));
        }
        Connection::from_terms(&t, 1, 1, terms, None)?
    } else {
        let kind = if rng.gen_bool(0.5) { LeadKind::Generic } else { LeadKind::Nilpotent };
        let spec = ConnectionSpec {
            n,
            r: rng.gen_range(1..=2),
            kind,
            top: 0,
            precision: None,
        };
        random_connection(rng, &spec)
    };
    let ok = ramified_decomposition_check(&c, d)?;
    verdict(ok, || format!("d={d} fails for rank {n}"))
}

fn replay_instance(rng: &mut Rng8) -> Result<std::result::Result<(), String>> {
    let spec = random_spec(rng, 3, 3);
    let c = random_connection(rng, &spec);
    let tree = reduce(&c)?;
    let ok = tree.input.agrees(&c) && replay(&tree, &tree.input)?;
    let dec = tree.measure_decreases();
    verdict(ok && dec, || format!("replay {ok}, measure {dec} for {spec:?}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes_a_short_run() {
        for s in SUITES {
            let rep = run_suite(s, 7, 12).unwrap();
            assert!(rep.passed(), "{rep}");
        }
    }

    #[test]
    fn unknown_suite() {
        assert!(run_suite("nope", 1, 1).is_err());
    }
}
