#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use dsquiver_core::builder::{build_instance, QuiverInstance};
use dsquiver_core::quiver::Quiver;
use dsquiver_core::sample::{fuchsian_data, random_tuple, TupleShape};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A small instance, Fuchsian or irregular with equal odds.
pub fn random_instance(rng: &mut ChaCha8Rng, max_rank: usize) -> QuiverInstance {
    if rng.gen_bool(0.5) {
        let n = rng.gen_range(1..=max_rank);
        let p = rng.gen_range(1..=3);
        build_instance(&fuchsian_data(rng, n, p)).expect("valid Fuchsian data")
    } else {
        let shape = TupleShape { rank: rng.gen_range(1..=max_rank), finite: rng.gen_range(1..=2), max_order: 2, max_blocks: 2 };
        build_instance(&random_tuple(rng, shape).0).expect("valid data")
    }
}

/// Positive roots with all coordinates in `[0, radius]`, as the closure of
/// the simple roots and the fundamental set under simple reflections that
/// stay inside the box.
pub fn brute_force_positive_roots(q: &Quiver, radius: i64) -> BTreeSet<Vec<i64>> {
    let n = q.len();
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut queue = VecDeque::new();
    for a in 0..n {
        let u = q.unit(a);
        if seen.insert(u.clone()) {
            queue.push_back(u);
        }
    }
    for beta in box_points(n, 0, radius) {
        if beta.iter().all(|&b| b == 0) {
            continue;
        }
        let fundamental = connected(q, &beta) && (0..n).all(|a| pairing(q, &beta, a) <= 0);
        if fundamental && seen.insert(beta.clone()) {
            queue.push_back(beta);
        }
    }
    while let Some(beta) = queue.pop_front() {
        for a in 0..n {
            let c = pairing(q, &beta, a);
            let mut next = beta.clone();
            next[a] -= c;
            if next[a] < 0 || next[a] > radius {
                continue;
            }
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    seen
}

/// `(β, ε_a)` straight from the arrow list.
fn pairing(q: &Quiver, beta: &[i64], a: usize) -> i64 {
    let mut s = 2 * beta[a];
    for &(x, y) in q.arrows() {
        if x == a {
            s -= beta[y];
        }
        if y == a {
            s -= beta[x];
        }
    }
    s
}

fn connected(q: &Quiver, beta: &[i64]) -> bool {
    let supp: Vec<usize> = (0..beta.len()).filter(|&a| beta[a] != 0).collect();
    let Some(&start) = supp.first() else { return false };
    let mut reached = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &(x, y) in q.arrows() {
            for (from, to) in [(x, y), (y, x)] {
                if from == v && beta[to] != 0 && reached.insert(to) {
                    stack.push(to);
                }
            }
        }
    }
    reached.len() == supp.len()
}

/// Every integer vector with coordinates in `[lo, hi]`.
pub fn box_points(n: usize, lo: i64, hi: i64) -> impl Iterator<Item = Vec<i64>> {
    let mut cur = vec![lo; n];
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = cur.clone();
        let mut k = 0;
        loop {
            if k == n {
                done = true;
                break;
            }
            if cur[k] < hi {
                cur[k] += 1;
                break;
            }
            cur[k] = lo;
            k += 1;
        }
        Some(out)
    })
}
