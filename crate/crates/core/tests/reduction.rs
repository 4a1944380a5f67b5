use proptest::prelude::*;
use rand::Rng;

use meroconn::algebra::field::{q, FieldTower};
use meroconn::algebra::matrix::Matrix;
use meroconn::leading::{jordan_chevalley, sibuya_normalize, KernelMode, Splitting};
use meroconn::random::{
    instance_rng, random_connection, random_matrix, random_nilpotent, random_spec, ConnectionSpec, LeadKind,
};
use meroconn::reduction::driver::{measure, reduce};
use meroconn::reduction::sl2::{jacobson_morozov, orbit_data, orbit_dimension, partitions};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        failure_persistence: None,
        ..ProptestConfig::with_cases(cases)
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn jordan_chevalley_parts(seed in any::<u64>()) {
        let mut rng = instance_rng(seed, 0);
        let t = FieldTower::rationals();
        let n = rng.gen_range(1..=4);
        let m = if rng.gen_bool(0.5) {
            random_matrix(&mut rng, &t, n, 0.6)
        } else {
            let base = random_matrix(&mut rng, &t, n, 0.3);
            &base.mul(&base) + &random_nilpotent(&mut rng, &t, n.max(2)).block(0, n, 0, n)
        };
        let jp = jordan_chevalley(&m).unwrap();
        prop_assert_eq!(&(&jp.s + &jp.f), &m);
        prop_assert!(jp.s.commutator(&jp.f).is_zero());
        prop_assert!(jp.f.is_nilpotent());
        let p = jp.s.charpoly().squarefree_part().unwrap();
        prop_assert!(p.eval_matrix(&jp.s).is_zero());
    }

    #[test]
    fn sl2_relations(seed in any::<u64>()) {
        let mut rng = instance_rng(seed, 0);
        let t = FieldTower::rationals();
        let n = rng.gen_range(2..=4);
        let f = random_nilpotent(&mut rng, &t, n);
        let tr = jacobson_morozov(&f).unwrap();
        let by = |m: &Matrix, k: i64| m.scale_q(&q(k));
        prop_assert_eq!(tr.h.commutator(&tr.e), by(&tr.e, 2));
        prop_assert_eq!(tr.h.commutator(&tr.f), by(&tr.f, -2));
        prop_assert_eq!(&tr.e.commutator(&tr.f), &tr.h);
        prop_assert_eq!(&tr.f, &f);
        prop_assert_eq!(tr.partition.iter().sum::<usize>(), n);
    }

    #[test]
    fn orbit_dimension_is_rank_of_ad(seed in any::<u64>()) {
        let mut rng = instance_rng(seed, 0);
        let t = FieldTower::rationals();
        let n = rng.gen_range(2..=4);
        let f = random_nilpotent(&mut rng, &t, n);
        let d = orbit_data(&f).unwrap();
        prop_assert_eq!(d.delta, f.ad().rank().unwrap());
    }

    #[test]
    fn normalized_tail_lies_in_kernel(seed in any::<u64>()) {
        let mut rng = instance_rng(seed, 0);
        let spec = ConnectionSpec {
            n: rng.gen_range(2..=3),
            r: rng.gen_range(2..=3),
            kind: if rng.gen_bool(0.5) { LeadKind::Semisimple } else { LeadKind::Nilpotent },
            top: 1,
            precision: Some(2),
        };
        let c = random_connection(&mut rng, &spec);
        let lead = c.leading();
        let mode = match spec.kind {
            LeadKind::Semisimple => KernelMode::AdS(lead.clone()),
            _ => {
                let tr = jacobson_morozov(&lead).unwrap();
                KernelMode::AdE { e: tr.e, f: tr.f }
            }
        };
        let rec = sibuya_normalize(&c, &mode).unwrap();
        let split = Splitting::new(&mode).unwrap();
        let out = &rec.normalized;
        prop_assert_eq!(out.leading(), lead);
        for i in (-spec.r + 1)..out.precision().unwrap() {
            prop_assert!(split.in_kernel(&out.coeff(i)), "coefficient {} not normalized", i);
        }
        prop_assert!(c.gauge(&rec.gauge).unwrap().agrees(out));
    }
}

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn leaves_cover_the_rank(seed in any::<u64>()) {
        let mut rng = instance_rng(seed, 0);
        let spec = random_spec(&mut rng, 3, 3);
        let c = random_connection(&mut rng, &spec);
        let tree = reduce(&c).unwrap();
        let total: usize = tree.leaves().iter().map(|l| l.connection().rank()).sum();
        prop_assert_eq!(total, c.rank());
        prop_assert_eq!(&tree.measure, &measure(&c).unwrap());
        prop_assert!(tree.measure_decreases());
    }
}

#[test]
fn partition_dimensions() {
    assert_eq!(partitions(4).len(), 5);
    assert_eq!(orbit_dimension(&[1, 1, 1]), 0);
    assert_eq!(orbit_dimension(&[3]), 6);
    assert_eq!(orbit_dimension(&[2, 1]), 4);
}
