mod common;

use common::{random_instance, rng};
use dsquiver_core::builder::build_instance;
use dsquiver_core::matrixops::{
    addition_op, htl_reduce, middle_convolution, moment_map, xi_index, QuiverRep,
};
use dsquiver_core::numeric::{are_similar, ExactMatrix, GaussRat};
use dsquiver_core::quiver::dot;
use dsquiver_core::sample::{random_gauge, random_htl_form, random_tuple, TupleShape};
use num_traits::Zero;
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn small_matrix(r: &mut ChaCha8Rng, rows: usize, cols: usize) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = GaussRat::from_int(r.gen_range(-3..=3));
        }
    }
    m
}

fn random_series(r: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<ExactMatrix> {
    (0..k).map(|_| small_matrix(r, n, n)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn gauge_action_is_a_group_action(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=3);
        let k = r.gen_range(1..=3);
        let a = random_series(&mut r, n, k);
        let g = random_gauge(&mut r, n, k);
        let h = random_gauge(&mut r, n, k);
        prop_assert_eq!(g.act(&h.act(&a)), g.compose(&h).act(&a));
        prop_assert_eq!(g.inverse().act(&g.act(&a)), a);
    }

    #[test]
    fn normal_form_is_recovered(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=4);
        let k = r.gen_range(1..=3);
        let b = random_htl_form(&mut r, n, k, 3);
        let a = random_gauge(&mut r, n, k).act(&b.series());
        let (form, g) = htl_reduce(&a).unwrap();
        prop_assert_eq!(g.act(&a), form.series());
        prop_assert_eq!(form.sizes(), b.sizes());
        for (x, y) in form.blocks.iter().zip(&b.blocks) {
            prop_assert_eq!(&x.q, &y.q);
            prop_assert!(are_similar(&x.residue, &y.residue).unwrap());
        }
    }

    #[test]
    fn moment_map_traces_cancel(seed in any::<u64>()) {
        let mut r = rng(seed);
        let inst = random_instance(&mut r, 3);
        let q = &inst.quiver;
        let dims: Vec<usize> = inst.alpha.iter().map(|&a| a as usize).collect();
        let maps = q
            .arrows()
            .iter()
            .map(|&(s, t)| (small_matrix(&mut r, dims[t], dims[s]), small_matrix(&mut r, dims[s], dims[t])))
            .collect();
        let rep = QuiverRep { dims, maps };
        let total = moment_map(q, &rep).iter().fold(GaussRat::zero(), |acc, m| &acc + &m.trace());
        prop_assert!(total.is_zero());
    }

    #[test]
    fn composite_reflection_is_an_isometric_involution(seed in any::<u64>()) {
        let mut r = rng(seed);
        let inst = random_instance(&mut r, 3);
        let n = inst.quiver.len();
        for idx in inst.multi_indices() {
            let beta: Vec<i64> = (0..n).map(|_| r.gen_range(-3..=3)).collect();
            let s = inst.reflect_composite(&beta, &idx);
            prop_assert_eq!(inst.reflect_composite(&s, &idx), beta.clone());
            let lam = inst.reflect_composite_param(&inst.lambda, &idx);
            prop_assert_eq!(dot(&s, &lam), dot(&beta, &inst.lambda));
            prop_assert_eq!(inst.reflect_composite_param(&lam, &idx), inst.lambda.clone());
        }
    }

    #[test]
    fn addition_keeps_the_residue_sum(seed in any::<u64>()) {
        let mut r = rng(seed);
        let shape = TupleShape { rank: r.gen_range(1..=3), finite: r.gen_range(1..=2), max_order: 2, max_blocks: 2 };
        let (_, t) = random_tuple(&mut r, shape);
        let pole = r.gen_range(1..t.poles.len());
        let q: Vec<GaussRat> = (0..r.gen_range(1..=3)).map(|_| GaussRat::from_int(r.gen_range(-2..=2))).collect();
        let out = addition_op(&t, pole, &q, true).unwrap();
        prop_assert!(out.residue_sum_is_zero());
        prop_assert_eq!(out.rank, t.rank);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, ..ProptestConfig::default() })]

    #[test]
    fn convolution_keeps_the_residue_sum(seed in any::<u64>()) {
        let mut r = rng(seed);
        let shape = TupleShape { rank: r.gen_range(1..=2), finite: r.gen_range(1..=2), max_order: 2, max_blocks: 2 };
        let (data, t) = random_tuple(&mut r, shape);
        let inst = build_instance(&data).unwrap();
        for idx in inst.multi_indices() {
            if xi_index(&data, &idx).is_zero() {
                continue;
            }
            let out = middle_convolution(&t, &data, &idx).unwrap();
            prop_assert!(out.tuple.residue_sum_is_zero());
            prop_assert_eq!(out.dim_w, out.dim_w_predicted);
            prop_assert_eq!(out.tuple.rank, out.dim_w - t.rank);
        }
    }
}
