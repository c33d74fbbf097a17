//! Seeded battery of end-to-end checks on random instances and tuples.

use dsquiver_core::builder::build_instance;
use dsquiver_core::matrixops::{
    from_quiver_rep, htl_reduce, middle_convolution, moment_map, orbit_member, to_quiver_rep, xi_index,
};
use dsquiver_core::numeric::{are_similar, ExactMatrix, GaussRat};
use dsquiver_core::sample::{fuchsian_data, random_gauge, random_htl_form, random_tuple, TupleShape};
use dsquiver_core::sigma::{sigma_member, sigma_tilde_member};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Serialize)]
pub struct CheckSummary {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<usize>,
}

#[derive(Serialize)]
pub struct SelfTestReport {
    pub seed: u64,
    pub checks: Vec<CheckSummary>,
    pub passed: bool,
}

fn run(name: &'static str, count: usize, mut case: impl FnMut(usize) -> bool) -> CheckSummary {
    let failures = (0..count).filter(|&c| !case(c)).collect();
    CheckSummary { name, cases: count, failures }
}

fn tuple_shape(r: &mut ChaCha8Rng) -> TupleShape {
    TupleShape { rank: r.gen_range(1..=3), finite: r.gen_range(1..=2), max_order: 3, max_blocks: 3 }
}

pub fn selftest(seed: u64, count: usize, max_nodes: u64) -> SelfTestReport {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();

    checks.push(run("normal form round trip", count, |_| {
        let n = r.gen_range(1..=4);
        let k = r.gen_range(1..=3);
        let b = random_htl_form(&mut r, n, k, 3);
        let a = random_gauge(&mut r, n, k).act(&b.series());
        let Ok((form, g)) = htl_reduce(&a) else { return false };
        g.act(&a) == form.series()
            && form.sizes() == b.sizes()
            && form.blocks.iter().zip(&b.blocks).all(|(x, y)| x.q == y.q && are_similar(&x.residue, &y.residue).unwrap_or(false))
    }));

    checks.push(run("Fuchsian verdicts agree", count, |_| {
        let n = r.gen_range(1..=3);
        let p = r.gen_range(1..=3);
        let Ok(inst) = build_instance(&fuchsian_data(&mut r, n, p)) else { return false };
        match (sigma_member(&inst.quiver, &inst.alpha, &inst.lambda, max_nodes), sigma_tilde_member(&inst, max_nodes)) {
            (Ok(a), Ok(b)) => a.solvable == b.solvable,
            _ => false,
        }
    }));

    checks.push(run("quiver representation", count, |_| {
        let shape = tuple_shape(&mut r);
        let (data, t) = random_tuple(&mut r, shape);
        let Ok(inst) = build_instance(&data) else { return false };
        let Ok(rep) = to_quiver_rep(&inst, &t) else { return false };
        let mu_ok = moment_map(&inst.quiver, &rep)
            .iter()
            .zip(&rep.dims)
            .zip(&inst.lambda)
            .all(|((m, &d), l)| *m == ExactMatrix::scalar(d, l));
        let Ok(back) = from_quiver_rep(&inst, &rep) else { return false };
        mu_ok && back.residue_sum_is_zero() && back.poles.iter().zip(&data.poles).all(|(a, p)| orbit_member(a, p).unwrap_or(false))
    }));

    checks.push(run("middle convolution", count, |_| {
        let shape = tuple_shape(&mut r);
        let (data, t) = random_tuple(&mut r, shape);
        let Ok(inst) = build_instance(&data) else { return false };
        let Some(idx) = inst.multi_indices().into_iter().find(|i| xi_index(&data, i) != GaussRat::from_int(0)) else { return true };
        match middle_convolution(&t, &data, &idx) {
            Ok(out) => {
                out.dim_w == out.dim_w_predicted
                    && out.tuple.rank == out.dim_w - t.rank
                    && (out.tuple.rank == 0 || out.tuple.residue_sum_is_zero())
            }
            Err(_) => false,
        }
    }));

    let passed = checks.iter().all(|c| c.failures.is_empty());
    SelfTestReport { seed, checks, passed }
}
