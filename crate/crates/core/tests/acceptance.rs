//! End-to-end acceptance checks, one line per criterion.

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::Instant;

use num_traits::{One, Zero};

use meroconn::algebra::field::{q, qf, FieldElement, FieldTower, Q};
use meroconn::algebra::matrix::Matrix;
use meroconn::algebra::series::LaurentSeries;
use meroconn::cohomology::{derham_all_branches, derham_dims, ramified_decomposition_check};
use meroconn::connection::{Connection, GaugeElement, GaugeSource};
use meroconn::random::{instance_rng, random_connection, ConnectionSpec, LeadKind};
use meroconn::reduction::driver::{reduce, replay, Leaf, Node};
use meroconn::reduction::stability::stability_constant;
use meroconn::suites::run_suite;

type Outcome = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn m(rows: &[&[i64]]) -> Matrix {
    Matrix::from_i64(&FieldTower::rationals(), rows)
}

fn conn(n: usize, terms: Vec<(i64, Matrix)>) -> Connection {
    Connection::from_terms(&FieldTower::rationals(), n, 1, terms, None).unwrap()
}

fn scalar(terms: &[(i64, Q)]) -> LaurentSeries {
    let t = FieldTower::rationals();
    LaurentSeries::from_terms(
        1,
        terms.iter().map(|(e, c)| (*e, FieldElement::from_rational(&t, c.clone()))).collect(),
        None,
        FieldElement::zero(&t),
    )
}

fn dims(c: &Connection) -> Result<(usize, usize), String> {
    derham_dims(c).map(|d| d.pair()).map_err(|e| e.to_string())
}

fn gauge_goldens() -> Outcome {
    let t = FieldTower::rationals();
    for n in 1..=3i64 {
        let g = GaugeElement::monomial(&t, &[q(-n), q(0)]);
        let c = conn(2, vec![(-1, m(&[&[-n, 0], &[0, 0]])), (n - 1, m(&[&[0, 1], &[0, 0]]))]);
        let out = c.gauge(&g).map_err(|e| e.to_string())?;
        let expect = conn(2, vec![(-1, m(&[&[0, 1], &[0, 0]]))]);
        ensure(out == expect, || format!("n = {n}: got {out:?}"))?;
        let c0 = conn(2, vec![(-1, m(&[&[-n, 0], &[0, 0]]))]);
        let out0 = c0.gauge(&g).map_err(|e| e.to_string())?;
        ensure(out0.is_zero(), || format!("n = {n}: diagonal part not killed"))?;
        ensure(dims(&c)? == (1, 1) && dims(&out)? == (1, 1), || format!("n = {n}: nilpotent class dims"))?;
        ensure(dims(&c0)? == (2, 2) && dims(&out0)? == (2, 2), || format!("n = {n}: trivial class dims"))?;
    }
    Ok(())
}

fn cocycle() -> Outcome {
    for l in 0..=3i64 {
        let c = conn(2, vec![(-2, m(&[&[0, 1], &[0, 0]])), (0, m(&[&[0, 0], &[l * (l + 1), 0]]))]);
        let v = vec![scalar(&[(l, q(1))]), scalar(&[(l + 1, q(-l))])];
        let out = c.apply_nabla(&v).map_err(|e| e.to_string())?;
        ensure(out.iter().all(|x| x.is_zero()), || format!("l = {l}: {out:?}"))?;
    }
    Ok(())
}

fn bv(b: i64, e: i64) -> Connection {
    conn(2, vec![(-2, m(&[&[0, 0], &[1, 0]])), (-1, m(&[&[0, b], &[0, 0]])), (0, m(&[&[0, e], &[0, 0]]))])
}

fn shear_exponents(g: &GaugeElement) -> Option<Vec<Q>> {
    match g.source() {
        GaugeSource::Monomial { exponents, .. } => Some(exponents.clone()),
        _ => None,
    }
}

fn worked_reduction() -> Outcome {
    let err = |e: meroconn::Error| e.to_string();

    let c = bv(0, 1);
    let tree = reduce(&c).map_err(err)?;
    let Node::NilpotentShear { gauge, .. } = &tree.node else {
        return Err(format!("b = 0: root is {}", tree.kind()));
    };
    ensure(shear_exponents(gauge) == Some(vec![qf(-1, 2), qf(1, 2)]), || {
        format!("b = 0: shear {:?}", gauge.source())
    })?;
    let leaves = tree.leaves();
    let residue = Matrix::from_rationals(&FieldTower::rationals(), &[vec![qf(1, 2), q(1)], vec![q(1), qf(-1, 2)]]);
    match leaves.as_slice() {
        [Leaf::RegularSingular { connection, residue: r }] if connection.ram() == 2 && *r == residue => {}
        other => return Err(format!("b = 0: leaves {other:?}")),
    }
    ensure(replay(&tree, &c).map_err(err)?, || "b = 0: replay".into())?;

    let c = bv(1, 0);
    let tree = reduce(&c).map_err(err)?;
    let Node::NilpotentShear { shear, gauge, child, .. } = &tree.node else {
        return Err(format!("b = 1: root is {}", tree.kind()));
    };
    ensure(shear.alpha == Some(qf(1, 4)), || format!("b = 1: alpha {:?}", shear.alpha))?;
    ensure(shear_exponents(gauge) == Some(vec![qf(-1, 4), qf(1, 4)]), || {
        format!("b = 1: shear {:?}", gauge.source())
    })?;
    let lead = child.input.leading_in_t();
    ensure(lead == (m(&[&[0, 1], &[1, 0]]), qf(-3, 2)), || format!("b = 1: child leading {lead:?}"))?;
    let leaves = tree.leaves();
    ensure(leaves.len() == 2 && leaves.iter().all(|l| l.kind() == "Rank1"), || {
        format!("b = 1: leaves {leaves:?}")
    })?;
    ensure(replay(&tree, &c).map_err(err)? && tree.measure_decreases(), || "b = 1: replay".into())
}

fn fredholm() -> Outcome {
    for i in 0..50 {
        let mut rng = instance_rng(2024, i);
        let spec = ConnectionSpec {
            n: 1 + i % 3,
            r: 2 + (i % 2) as i64,
            kind: LeadKind::Invertible,
            top: 1,
            precision: None,
        };
        let c = random_connection(&mut rng, &spec);
        ensure(dims(&c)? == (0, 0), || format!("invertible lead instance {i}: {:?}", dims(&c)))?;
    }
    let t = FieldTower::rationals();
    let rank1 = |x: Q| conn(1, vec![(-1, Matrix::from_rationals(&t, &[vec![x]]))]);
    ensure(dims(&rank1(qf(1, 2)))? == (0, 0), || "residue 1/2".into())?;
    for k in -3..=3 {
        ensure(dims(&rank1(q(k)))? == (1, 1), || format!("residue {k}"))?;
    }
    Ok(())
}

fn lambda_family() -> Outcome {
    let t = FieldTower::rationals();
    let poly: Vec<FieldElement> = [qf(1, 2), qf(-3, 2), q(1)]
        .into_iter()
        .map(|x| FieldElement::from_rational(&t, x))
        .collect();
    let k = t.extend(&poly).map_err(|e| e.to_string())?;
    let lam = FieldElement::generator(&k);
    let c = Connection::from_terms(&k, 1, 1, vec![(-1, Matrix::diagonal(&k, &[lam]))], None).unwrap();
    let branches = derham_all_branches(&c).map_err(|e| e.to_string())?;
    let mut got: Vec<(Option<Q>, (usize, usize))> = branches
        .iter()
        .map(|(b, d)| (b.residue_in_t().get(0, 0).as_rational().cloned(), d.pair()))
        .collect();
    got.sort();
    let expect = vec![(Some(qf(1, 2)), (0, 0)), (Some(q(1)), (1, 1))];
    ensure(got == expect, || format!("branches {got:?}"))
}

fn suite(name: &str, seed: u64, count: usize) -> Outcome {
    let rep = run_suite(name, seed, count).map_err(|e| e.to_string())?;
    ensure(rep.passed(), || rep.to_string())
}

/// Rational Gaussian elimination, independent of the library's matrices.
fn rank(mut rows: Vec<Vec<Q>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = &rows[i][c] / &pivot;
                for k in c..cols {
                    let v = &rows[r][k] * &f;
                    rows[i][k] -= v;
                }
            }
        }
        r += 1;
    }
    r
}

fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=n.min(max)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `(δ, j)` for each nonzero nilpotent orbit, from an explicit Jordan matrix.
fn orbit_data(n: usize) -> Vec<(usize, i64)> {
    let mut out = Vec::new();
    for p in partitions(n, n) {
        if p.iter().all(|&k| k == 1) {
            continue;
        }
        let mut f = vec![vec![Q::zero(); n]; n];
        let mut start = 0;
        for &k in &p {
            for i in 1..k {
                f[start + i][start + i - 1] = Q::one();
            }
            start += k;
        }
        // ad f on the basis E_ab, as an n^2 x n^2 matrix.
        let mut ad = vec![vec![Q::zero(); n * n]; n * n];
        for a in 0..n {
            for b in 0..n {
                let col = a * n + b;
                for i in 0..n {
                    ad[i * n + b][col] += &f[i][a];
                    ad[a * n + i][col] -= &f[b][i];
                }
            }
        }
        let index = *p.iter().max().unwrap();
        out.push((rank(ad), 2 * (index as i64 - 1)));
    }
    out
}

struct Oracle {
    orbits: HashMap<usize, Vec<(usize, i64)>>,
}

impl Oracle {
    fn j(&mut self, n: usize, delta: usize) -> i64 {
        let data = self.orbits.entry(n).or_insert_with(|| orbit_data(n));
        data.iter().filter(|(d, _)| *d == delta).map(|(_, j)| *j).max().unwrap()
    }

    fn deltas(&mut self, n: usize) -> Vec<usize> {
        let mut d: Vec<usize> = self.orbits.entry(n).or_insert_with(|| orbit_data(n)).iter().map(|x| x.0).collect();
        d.sort();
        d.dedup();
        d
    }

    fn n(&mut self, n: usize, r: i64) -> i64 {
        if n == 1 || r == 1 {
            return 0;
        }
        let mut best = (1..n).map(|m| self.n(m, r)).max().unwrap_or(0);
        for d in self.deltas(n) {
            best = best.max(self.n_delta(n, r, d));
        }
        best
    }

    /// Least integer meeting every lower bound, found by upward search.
    fn n_delta(&mut self, n: usize, r: i64, delta: usize) -> i64 {
        let j = self.j(n, delta);
        let rr = Q::from_integer((r - 1).into());
        let jq = Q::from_integer(j.into());
        let base = &jq * Q::from_integer((j + 2).into()) * &rr / Q::from_integer(2.into());
        let next_r = (j + 2) * (r - 1) + 1;
        let mut bounds = vec![-Q::one() + &jq * &rr / Q::from_integer(2.into())];
        for m in 1..n {
            bounds.push(&base + Q::from_integer(self.n(m, next_r).into()));
        }
        for d2 in self.deltas(n).into_iter().filter(|&d2| d2 > delta) {
            bounds.push(&base + Q::from_integer(self.n_delta(n, next_r, d2).into()));
        }
        let mut s = -10i64;
        while bounds.iter().any(|b| Q::from_integer(s.into()) < *b) {
            s += 1;
        }
        s
    }
}

fn stability_constants() -> Outcome {
    for r in 1..=10 {
        ensure(stability_constant(1, r) == 0, || format!("N(1, {r}) = {}", stability_constant(1, r)))?;
    }
    for n in 1..=4 {
        ensure(stability_constant(n, 1) == 0, || format!("N({n}, 1) = {}", stability_constant(n, 1)))?;
    }
    let mut oracle = Oracle { orbits: HashMap::new() };
    for (n, r) in [(2, 2), (2, 3), (3, 2)] {
        let (lib, ora) = (stability_constant(n, r), oracle.n(n, r));
        ensure(lib == ora, || format!("N({n}, {r}): library {lib}, oracle {ora}"))?;
    }
    suite("tail-invariance", 1, 50)
}

fn ramified_decomposition() -> Outcome {
    let t = FieldTower::rationals();
    for res in [q(0), qf(1, 2), qf(1, 3)] {
        let c = conn(1, vec![(-1, Matrix::from_rationals(&t, &[vec![res.clone()]]))]);
        for d in [2, 3] {
            let ok = ramified_decomposition_check(&c, d).map_err(|e| e.to_string())?;
            ensure(ok, || format!("residue {res}, d = {d}"))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("gauge goldens", Box::new(gauge_goldens)),
        ("cocycle", Box::new(cocycle)),
        ("worked reduction", Box::new(worked_reduction)),
        ("fredholm", Box::new(fredholm)),
        ("lambda family", Box::new(lambda_family)),
        ("euler bound", Box::new(|| suite("euler-bound", 1, 200))),
        ("stability constants", Box::new(stability_constants)),
        ("cbh truncation", Box::new(|| suite("cbh", 1, 50))),
        ("certificate replay", Box::new(|| suite("replay", 1, 100))),
        ("ramified decomposition", Box::new(ramified_decomposition)),
    ];
    let mut all = true;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(()) => println!("criterion {} {name}: PASS ({secs:.1}s)", i + 1),
            Err(msg) => {
                all = false;
                println!("criterion {} {name}: FAIL ({secs:.1}s): {msg}", i + 1);
            }
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
