//! Seeded random spectral data, normal forms, gauges and tuples, for the
//! self-tests and the acceptance suite.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::matrixops::{htl_reduce, GaugeElement, HtlBlock, HtlForm, MatrixTuple};
use crate::numeric::{ExactMatrix, GaussRat};
use crate::spectral::{IrregularBlock, JordanEntry, PoleData, ResidueSpec, SpectralData, INFINITY};

/// The eigenvalue pool for random Fuchsian data.
pub fn eigen_pool() -> Vec<GaussRat> {
    vec![
        GaussRat::from_int(0),
        GaussRat::from_int(1),
        GaussRat::from_int(-1),
        GaussRat::from_frac(1, 2),
        GaussRat::from_frac(-1, 3),
        GaussRat::i(),
        GaussRat::from_int(2),
    ]
}

/// A random composition of `n` into at most `max_parts` positive parts.
fn composition<R: Rng + ?Sized>(rng: &mut R, n: usize, max_parts: usize) -> Vec<usize> {
    let parts = rng.gen_range(1..=n.min(max_parts).max(1));
    let mut cuts: Vec<usize> = (1..n).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(parts - 1).collect();
    cuts.sort_unstable();
    let mut out = Vec::with_capacity(parts);
    let mut prev = 0;
    for c in cuts.into_iter().chain([n]) {
        out.push(c - prev);
        prev = c;
    }
    out
}

fn entries_from(map: BTreeMap<GaussRat, Vec<usize>>) -> Vec<JordanEntry> {
    map.into_iter()
        .map(|(value, mut blocks)| {
            blocks.sort_unstable_by(|a, b| b.cmp(a));
            JordanEntry { value, blocks }
        })
        .collect()
}

/// Random Jordan data of size `n` with values from `pool`.
pub fn random_jordan<R: Rng + ?Sized>(rng: &mut R, n: usize, pool: &[GaussRat]) -> Vec<JordanEntry> {
    let mut map: BTreeMap<GaussRat, Vec<usize>> = BTreeMap::new();
    for b in composition(rng, n, n) {
        let v = pool.choose(rng).expect("nonempty pool").clone();
        map.entry(v).or_default().push(b);
    }
    entries_from(map)
}

/// Random Fuchsian spectral data: `p` finite poles plus infinity, rank `n`,
/// eigenvalues from [`eigen_pool`], the total trace forced to zero by a
/// semisimple adjustment at infinity.
pub fn fuchsian_data<R: Rng + ?Sized>(rng: &mut R, n: usize, p: usize) -> SpectralData {
    let pool = eigen_pool();
    let mut poles = Vec::with_capacity(p + 1);
    let mut trace = GaussRat::zero();
    for i in 1..=p {
        let j = random_jordan(rng, n, &pool);
        let res = ResidueSpec::Jordan(j);
        trace += &res.trace();
        poles.push(single_block_pole(&format!("t{i}"), 1, Vec::new(), res));
    }
    // infinity: Jordan data plus one semisimple eigenvalue absorbing the trace
    let mut map: BTreeMap<GaussRat, Vec<usize>> = BTreeMap::new();
    let mut inf_trace = GaussRat::zero();
    if n > 1 {
        for e in random_jordan(rng, n - 1, &pool) {
            for &b in &e.blocks {
                inf_trace += &(&e.value * &GaussRat::from_int(b as i64));
            }
            map.entry(e.value).or_default().extend(e.blocks);
        }
    }
    let last = -&(&trace + &inf_trace);
    map.entry(last).or_default().push(1);
    let res = ResidueSpec::Jordan(entries_from(map));
    poles.insert(0, single_block_pole(INFINITY, 1, Vec::new(), res));
    SpectralData::new(n, poles).expect("generated data is valid")
}

fn single_block_pole(label: &str, order: usize, q: Vec<GaussRat>, res: ResidueSpec) -> PoleData {
    let size = res.size();
    PoleData { label: label.into(), order, blocks: vec![IrregularBlock::new(q, size, res, None).expect("valid block")] }
}

fn small<R: Rng + ?Sized>(rng: &mut R, r: i64) -> GaussRat {
    GaussRat::from_int(rng.gen_range(-r..=r))
}

/// A random normal form of size `n` and order `k`: at most `max_blocks`
/// blocks with distinct integer polynomial parts and Jordan-type residues.
pub fn random_htl_form<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize, max_blocks: usize) -> HtlForm {
    let sizes = if k == 1 { vec![n] } else { composition(rng, n, max_blocks) };
    let pool: Vec<GaussRat> = (-2..=2).map(GaussRat::from_int).collect();
    let mut qs: Vec<Vec<GaussRat>> = Vec::new();
    while qs.len() < sizes.len() {
        let mut q: Vec<GaussRat> = (2..=k).map(|_| small(rng, 2)).collect();
        while q.last().is_some_and(Zero::is_zero) {
            q.pop();
        }
        if !qs.contains(&q) {
            qs.push(q);
        }
    }
    let blocks = sizes
        .iter()
        .zip(qs)
        .map(|(&s, q)| HtlBlock { q, residue: ResidueSpec::Jordan(random_jordan(rng, s, &pool)).to_matrix() })
        .collect();
    HtlForm::new(k, blocks).expect("distinct polynomial parts")
}

/// An invertible matrix with entries in `[-2, 2]`.
pub fn random_invertible<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ExactMatrix {
    loop {
        let rows: Vec<Vec<GaussRat>> = (0..n).map(|_| (0..n).map(|_| small(rng, 2)).collect()).collect();
        let m = ExactMatrix::from_rows(rows).expect("square");
        if !m.determinant().is_zero() {
            return m;
        }
    }
}

pub fn random_gauge<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> GaugeElement {
    let mut coeffs = vec![random_invertible(rng, n)];
    for _ in 1..k.max(1) {
        let rows: Vec<Vec<GaussRat>> = (0..n).map(|_| (0..n).map(|_| small(rng, 1)).collect()).collect();
        coeffs.push(ExactMatrix::from_rows(rows).expect("square"));
    }
    GaugeElement::new(coeffs).expect("invertible constant term")
}

/// Shape parameters for [`random_tuple`].
#[derive(Clone, Copy, Debug)]
pub struct TupleShape {
    pub rank: usize,
    /// Number of finite poles.
    pub finite: usize,
    pub max_order: usize,
    pub max_blocks: usize,
}

/// A tuple whose finite poles are random gauge transforms of random normal
/// forms, closed up at infinity by a pole of order 2 or 3 with `n` distinct
/// 1×1 blocks whose residue is fixed by the residue sum. Returns the raw
/// spectral data (the orbits the poles lie in) together with the tuple.
pub fn random_tuple<R: Rng + ?Sized>(rng: &mut R, shape: TupleShape) -> (SpectralData, MatrixTuple) {
    let n = shape.rank;
    let mut poles = Vec::new();
    let mut data = Vec::new();
    let mut res_sum = ExactMatrix::zeros(n, n);
    for i in 1..=shape.finite {
        let k = rng.gen_range(1..=shape.max_order.max(1));
        let form = random_htl_form(rng, n, k, shape.max_blocks);
        let a = random_gauge(rng, n, k).act(&form.series());
        res_sum = &res_sum + &a[0];
        data.push(form.to_pole_data(&format!("t{i}")).expect("valid form"));
        poles.push(a);
    }
    let k0 = rng.gen_range(2..=3usize);
    let mut tops: Vec<i64> = (-3..=3).collect();
    tops.shuffle(rng);
    let irr: Vec<ExactMatrix> = (1..=k0)
        .map(|j| {
            let diag: Vec<GaussRat> = (0..n)
                .map(|r| match j {
                    1 => GaussRat::zero(),
                    _ if j == k0 => GaussRat::from_int(tops[r]),
                    _ => small(rng, 1),
                })
                .collect();
            ExactMatrix::diagonal(&diag)
        })
        .collect();
    let mut a0 = random_gauge(rng, n, k0).act(&irr);
    a0[0] = -&res_sum;
    let (form0, _) = htl_reduce(&a0).expect("distinct leading eigenvalues split");
    data.insert(0, form0.to_pole_data(INFINITY).expect("valid form"));
    poles.insert(0, a0);
    let tuple = MatrixTuple::new(n, poles).expect("square coefficients");
    (SpectralData::new(n, data).expect("generated data is valid"), tuple)
}
