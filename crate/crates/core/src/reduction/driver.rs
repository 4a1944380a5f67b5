//! The recursive reduction driver and its replayable certificate.

use std::sync::Arc;

use super::shear::{compute_alpha, shear, sheared_pole_bound, slodowy_leading_term, Branch, ShearData};
use super::sl2::{jacobson_morozov, Sl2Triple};
use crate::algebra::field::{FieldElement, FieldTower, Q};
use crate::algebra::matrix::Matrix;
use crate::algebra::series::LaurentSeries;
use crate::connection::{Connection, GaugeElement};
use crate::error::{Error, Result};
use crate::leading::{eigen_block_split, jordan_chevalley, sibuya_normalize, KernelMode, SibuyaStep};

/// Lexicographic termination measure `(n, n^2 - δ, ν, τ)`: rank, co-orbit
/// dimension of the leading term, whether the leading term is nilpotent, and
/// whether a scalar (trace) part is present.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Measure {
    pub rank: usize,
    pub codim: usize,
    pub nilpotent: bool,
    pub scalar_part: bool,
}

pub fn measure(c: &Connection) -> Result<Measure> {
    let n = c.rank();
    let lead = c.leading();
    let delta = lead.ad().rank()?;
    Ok(Measure {
        rank: n,
        codim: n * n - delta,
        nilpotent: lead.is_nilpotent(),
        scalar_part: !c.gamma().trace().is_zero(),
    })
}

#[derive(Clone, Debug)]
pub enum Leaf {
    Rank1 { connection: Connection },
    /// `residue` is the `dt/t` coefficient.
    RegularSingular { connection: Connection, residue: Matrix },
    /// `leading` is the coefficient of `t^{t_exponent} dt`; `pole_order` is in `u`-units.
    InvertibleIrregularLead {
        connection: Connection,
        pole_order: i64,
        leading: Matrix,
        t_exponent: Q,
    },
}

impl Leaf {
    pub fn connection(&self) -> &Connection {
        match self {
            Leaf::Rank1 { connection }
            | Leaf::RegularSingular { connection, .. }
            | Leaf::InvertibleIrregularLead { connection, .. } => connection,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Leaf::Rank1 { .. } => "Rank1",
            Leaf::RegularSingular { .. } => "RegularSingular",
            Leaf::InvertibleIrregularLead { .. } => "InvertibleIrregularLead",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Normalization {
    pub mode: &'static str,
    pub gauge: GaugeElement,
    pub steps: Vec<SibuyaStep>,
}

#[derive(Clone, Debug)]
pub enum Node {
    Leaf(Leaf),
    SibuyaSplit {
        normalization: Normalization,
        tower: Arc<FieldTower>,
        basis: Matrix,
        sizes: Vec<usize>,
        eigenvalue: FieldElement,
        children: Vec<ReductionTree>,
    },
    NilpotentShear {
        normalization: Normalization,
        triple: Sl2Triple,
        shear: ShearData,
        gauge: GaugeElement,
        /// Predicted leading term on the irregular branch.
        slodowy: Option<Matrix>,
        child: Box<ReductionTree>,
    },
    ScalarTwist {
        phi: LaurentSeries,
        child: Box<ReductionTree>,
    },
}

#[derive(Clone, Debug)]
pub struct ReductionTree {
    pub input: Connection,
    pub measure: Measure,
    pub node: Node,
}

impl ReductionTree {
    pub fn kind(&self) -> &'static str {
        match &self.node {
            Node::Leaf(_) => "Leaf",
            Node::SibuyaSplit { .. } => "SibuyaSplit",
            Node::NilpotentShear { .. } => "NilpotentShear",
            Node::ScalarTwist { .. } => "ScalarTwist",
        }
    }

    pub fn children(&self) -> Vec<&ReductionTree> {
        match &self.node {
            Node::Leaf(_) => Vec::new(),
            Node::SibuyaSplit { children, .. } => children.iter().collect(),
            Node::NilpotentShear { child, .. } | Node::ScalarTwist { child, .. } => vec![child],
        }
    }

    pub fn leaves(&self) -> Vec<&Leaf> {
        match &self.node {
            Node::Leaf(l) => vec![l],
            _ => self.children().into_iter().flat_map(|c| c.leaves()).collect(),
        }
    }

    /// Edges produced by a recursive call, on which the measure must drop.
    pub fn recursive_edges(&self) -> Vec<(&ReductionTree, &ReductionTree)> {
        let mut out = Vec::new();
        let own: Vec<&ReductionTree> = match &self.node {
            Node::Leaf(_) => Vec::new(),
            Node::NilpotentShear { shear, child, .. } => {
                if shear.branch == Branch::Irregular {
                    vec![child]
                } else {
                    Vec::new()
                }
            }
            _ => self.children(),
        };
        for c in own {
            out.push((self, c));
        }
        for c in self.children() {
            out.extend(c.recursive_edges());
        }
        out
    }

    pub fn measure_decreases(&self) -> bool {
        self.recursive_edges().iter().all(|(p, c)| c.measure < p.measure)
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }
}

fn leaf(c: &Connection) -> Result<ReductionTree> {
    let r = c.pole_order();
    let l = if c.rank() == 1 {
        Leaf::Rank1 { connection: c.clone() }
    } else if r <= 1 {
        if !c.knows(-1) {
            return Err(Error::precision("residue beyond the known window", Some(0)));
        }
        Leaf::RegularSingular {
            connection: c.clone(),
            residue: c.residue_in_t(),
        }
    } else {
        let (leading, t_exponent) = c.leading_in_t();
        Leaf::InvertibleIrregularLead {
            connection: c.clone(),
            pole_order: r,
            leading,
            t_exponent,
        }
    };
    Ok(ReductionTree {
        input: c.clone(),
        measure: measure(c)?,
        node: Node::Leaf(l),
    })
}

fn check_drop(parent: &Measure, child: &ReductionTree) -> Result<()> {
    if child.measure < *parent {
        Ok(())
    } else {
        Err(Error::DomainViolation(format!(
            "termination measure did not drop: {:?} -> {:?}",
            parent, child.measure
        )))
    }
}

fn reduce_node(c: &Connection, factor: i64) -> Result<ReductionTree> {
    let n = c.rank();
    let r = c.pole_order();
    if n == 1 || r <= 1 {
        return leaf(c);
    }
    let c = &c.truncate(factor * initial_window(n, r))?;
    let m = measure(c)?;
    let lead = c.leading();
    let jp = jordan_chevalley(&lead)?;
    if !jp.s.is_zero() && !jp.s.is_scalar() {
        let rec = sibuya_normalize(c, &KernelMode::AdS(jp.s.clone()))?;
        let split = eigen_block_split(&rec.normalized, &jp)?;
        let mut children = Vec::new();
        for b in &split.blocks {
            let child = reduce_node(b, factor)?;
            check_drop(&m, &child)?;
            children.push(child);
        }
        return Ok(ReductionTree {
            input: c.clone(),
            measure: m,
            node: Node::SibuyaSplit {
                normalization: Normalization {
                    mode: "ad_s",
                    gauge: rec.gauge,
                    steps: rec.steps,
                },
                tower: split.tower,
                basis: split.basis,
                sizes: split.sizes,
                eigenvalue: split.eigenvalue,
                children,
            },
        });
    }
    if lead.is_invertible()? {
        return leaf(c);
    }
    let trace = c.gamma().trace();
    if !trace.is_zero() {
        let phi = trace.scale_q(&Q::new((-1).into(), (n as i64).into()));
        // The twist form is in the connection's own variable.
        let twisted = c.scalar_twist(&phi)?;
        let child = reduce_node(&twisted, factor)?;
        check_drop(&m, &child)?;
        return Ok(ReductionTree {
            input: c.clone(),
            measure: m,
            node: Node::ScalarTwist {
                phi,
                child: Box::new(child),
            },
        });
    }
    let triple = jacobson_morozov(&lead)?;
    let mode = KernelMode::AdE {
        e: triple.e.clone(),
        f: triple.f.clone(),
    };
    let rec = sibuya_normalize(c, &mode)?;
    let data = compute_alpha(&rec.normalized, &triple)?;
    let (g, sheared) = shear(&rec.normalized, &triple, &data.q)?;
    let normalization = Normalization {
        mode: "ad_e",
        gauge: rec.gauge,
        steps: rec.steps,
    };
    let (slodowy, child) = match data.branch {
        Branch::RegularSingular => {
            if sheared.pole_order() > 1 {
                return Err(Error::DomainViolation("shear did not reach a regular singularity".into()));
            }
            (None, leaf(&sheared)?)
        }
        Branch::Irregular => {
            let alpha = data.alpha.clone().expect("irregular branch has finite alpha");
            let predicted = slodowy_leading_term(&rec.normalized, &triple, &alpha)?;
            let b = data.ramification;
            if sheared.leading() != predicted.scale_q(&Q::from_integer(b.into())) {
                return Err(Error::DomainViolation("sheared leading term left the Slodowy slice".into()));
            }
            if sheared.pole_order() != sheared_pole_bound(r, &alpha) || sheared.pole_order() > b * (r - 1) + 1 {
                return Err(Error::DomainViolation("sheared pole order exceeds its bound".into()));
            }
            let child = reduce_node(&sheared, factor)?;
            check_drop(&m, &child)?;
            (Some(predicted), child)
        }
    };
    Ok(ReductionTree {
        input: c.clone(),
        measure: m,
        node: Node::NilpotentShear {
            normalization,
            triple,
            shear: data,
            gauge: g,
            slodowy,
            child: Box::new(child),
        },
    })
}

/// Base working window of a node of rank `n` and pole order `r`.
pub fn initial_window(n: usize, r: i64) -> i64 {
    (2 * n as i64 * r).max(4)
}

pub const MAX_DOUBLINGS: u32 = 6;

/// Reduces `c`. Every node works on at most `k · initial_window` of its
/// coefficients, with `k` doubled on precision failures.
pub fn reduce(c: &Connection) -> Result<ReductionTree> {
    let mut factor = 1;
    let mut last = None;
    for _ in 0..=MAX_DOUBLINGS {
        match reduce_node(c, factor) {
            Err(e @ Error::PrecisionExhausted { .. }) => {
                last = Some(e);
                factor *= 2;
            }
            other => return other,
        }
    }
    Err(last.unwrap())
}

/// Reduces on every branch of a tower split discovered on the way.
pub fn reduce_all_branches(c: &Connection) -> Result<Vec<(Arc<FieldTower>, ReductionTree)>> {
    match reduce(c) {
        Ok(t) => Ok(vec![(c.tower().clone(), t)]),
        Err(Error::ZeroDivisorSplit { level, factor, cofactor }) if level < c.tower().height() => {
            let mut out = Vec::new();
            for f in [factor, cofactor] {
                let tower = c.tower().specialize(level, &f)?;
                let branch = c.specialize(level, &f, &tower)?;
                out.extend(reduce_all_branches(&branch)?);
            }
            Ok(out)
        }
        Err(e) => Err(e),
    }
}

/// Replays every recorded operation starting from `root` and checks that each
/// leaf is reproduced on its known window.
pub fn replay(tree: &ReductionTree, root: &Connection) -> Result<bool> {
    match &tree.node {
        Node::Leaf(l) => Ok(root.agrees(l.connection())),
        Node::SibuyaSplit {
            normalization,
            tower,
            basis,
            sizes,
            children,
            ..
        } => {
            let normalized = root.gauge(&normalization.gauge)?.lift_to(tower)?;
            let blocks = normalized.block_split(basis, sizes)?;
            for (b, child) in blocks.iter().zip(children) {
                if !replay(child, b)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Node::NilpotentShear {
            normalization,
            shear,
            gauge,
            child,
            ..
        } => {
            let next = root
                .gauge(&normalization.gauge)?
                .ramify(shear.ramification)
                .gauge(gauge)?;
            replay(child, &next)
        }
        Node::ScalarTwist { phi, child } => replay(child, &root.scalar_twist(phi)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::{q, qf};

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_i64(&FieldTower::rationals(), rows)
    }

    fn bv(b: i64, e: i64) -> Connection {
        let t = FieldTower::rationals();
        Connection::from_terms(
            &t,
            2,
            1,
            vec![(-2, m(&[&[0, 0], &[1, 0]])), (-1, m(&[&[0, b], &[0, 0]])), (0, m(&[&[0, e], &[0, 0]]))],
            None,
        )
        .unwrap()
    }

    #[test]
    fn worked_example_b0() {
        let c = bv(0, 1);
        let tree = reduce(&c).unwrap();
        let leaves = tree.leaves();
        assert_eq!(leaves.len(), 1);
        match leaves[0] {
            Leaf::RegularSingular { connection, residue } => {
                assert_eq!(connection.ram(), 2);
                let expect = Matrix::from_rationals(&FieldTower::rationals(), &[
                    vec![qf(1, 2), q(1)],
                    vec![q(1), qf(-1, 2)],
                ]);
                assert_eq!(*residue, expect);
            }
            other => panic!("unexpected leaf {other:?}"),
        }
        assert!(replay(&tree, &tree.input).unwrap());
    }

    #[test]
    fn worked_example_b1() {
        let c = bv(1, 0);
        let tree = reduce(&c).unwrap();
        let Node::NilpotentShear { shear, child, .. } = &tree.node else {
            panic!("expected a shear, got {}", tree.kind());
        };
        assert_eq!(shear.alpha, Some(qf(1, 4)));
        assert_eq!(child.input.leading_in_t(), (m(&[&[0, 1], &[1, 0]]), qf(-3, 2)));
        let leaves = tree.leaves();
        assert_eq!(leaves.len(), 2);
        assert!(leaves.iter().all(|l| l.kind() == "Rank1"));
        assert!(replay(&tree, &tree.input).unwrap());
        assert!(tree.measure_decreases());
    }

    #[test]
    fn trivial_and_invertible() {
        let t = FieldTower::rationals();
        let z = reduce(&Connection::trivial(&t, 2, None)).unwrap();
        assert!(matches!(z.leaves()[0], Leaf::RegularSingular { .. }));
        let c = Connection::from_terms(&t, 2, 1, vec![(-3, Matrix::identity(&t, 2))], None).unwrap();
        assert!(matches!(reduce(&c).unwrap().leaves()[0], Leaf::InvertibleIrregularLead { .. }));
    }
}
