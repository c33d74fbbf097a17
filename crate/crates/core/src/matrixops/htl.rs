//! Reduction of a single principal part to Hukuhara–Turrittin–Levelt form in
//! the unramified, split case, and truncated-orbit membership.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::Zero;

use super::gauge::GaugeElement;
use crate::error::{Error, Result};
use crate::numeric::{eigenvalues, rank_sequence, ExactMatrix, GaussRat};
use crate::spectral::{IrregularBlock, PoleData, ResidueSpec};

/// One block `q(x⁻¹) I + R x⁻¹` of a normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HtlBlock {
    /// Coefficients of `s², s³, …` in `q(s)`, trailing zeros trimmed.
    pub q: Vec<GaussRat>,
    pub residue: ExactMatrix,
}

impl HtlBlock {
    pub fn size(&self) -> usize {
        self.residue.rows()
    }

    /// Coefficient of `x^{−d}` in `q`, for `d ≥ 2`.
    pub fn q_coeff(&self, d: usize) -> GaussRat {
        if d < 2 {
            return GaussRat::zero();
        }
        self.q.get(d - 2).cloned().unwrap_or_else(GaussRat::zero)
    }
}

/// A block-diagonal normal form of pole order `order`, blocks in canonical
/// order: lexicographic in `(c_k, c_{k−1}, …, c_2)` where `c_d` is the
/// coefficient of `x^{−d}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HtlForm {
    pub order: usize,
    pub blocks: Vec<HtlBlock>,
}

fn block_cmp(order: usize, a: &HtlBlock, b: &HtlBlock) -> Ordering {
    for d in (2..=order).rev() {
        match a.q_coeff(d).lex_cmp(&b.q_coeff(d)) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    Ordering::Equal
}

impl HtlForm {
    /// Sorts the blocks into canonical order.
    pub fn new(order: usize, mut blocks: Vec<HtlBlock>) -> Result<Self> {
        if blocks.iter().any(|b| b.q.len() + 1 > order) {
            return Err(Error::Precondition("block polynomial exceeds the pole order".into()));
        }
        blocks.sort_by(|a, b| block_cmp(order, a, b));
        if blocks.windows(2).any(|w| w[0].q == w[1].q) {
            return Err(Error::Precondition("normal form blocks must have distinct q".into()));
        }
        Ok(HtlForm { order, blocks })
    }

    pub fn from_pole(pole: &PoleData) -> Result<Self> {
        let blocks = pole
            .blocks
            .iter()
            .map(|b| HtlBlock { q: b.q.clone(), residue: b.residue.to_matrix() })
            .collect();
        Self::new(pole.order, blocks)
    }

    pub fn size(&self) -> usize {
        self.blocks.iter().map(HtlBlock::size).sum()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(HtlBlock::size).collect()
    }

    /// The form as a principal part: entry `j−1` is the coefficient of `x^{−j}`.
    pub fn series(&self) -> Vec<ExactMatrix> {
        (1..=self.order)
            .map(|j| {
                let parts: Vec<ExactMatrix> = self
                    .blocks
                    .iter()
                    .map(|b| {
                        if j == 1 {
                            b.residue.clone()
                        } else {
                            ExactMatrix::scalar(b.size(), &b.q_coeff(j))
                        }
                    })
                    .collect();
                ExactMatrix::block_diag(&parts)
            })
            .collect()
    }

    /// Index of the block with polynomial part `q`.
    pub fn find(&self, q: &[GaussRat]) -> Option<usize> {
        self.blocks.iter().position(|b| b.q == q)
    }

    pub fn to_pole_data(&self, label: &str) -> Result<PoleData> {
        let blocks = self
            .blocks
            .iter()
            .map(|b| IrregularBlock::new(b.q.clone(), b.size(), ResidueSpec::Matrix(b.residue.clone()), None))
            .collect::<Result<Vec<_>>>()?;
        Ok(PoleData { label: label.into(), order: self.order, blocks })
    }

    pub fn filtration(&self) -> BlockFiltration {
        BlockFiltration::new(self)
    }
}

/// The nested block partitions of a normal form: at level `s` two blocks
/// share a group iff their `q` agree in every coefficient of degree `> s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockFiltration {
    pub sizes: Vec<usize>,
    pub offsets: Vec<usize>,
    /// `groups[s−1][b]`: group of block `b` at level `s`, for `s = 1..=k`.
    /// Level 1 separates every block; level `k` is a single group.
    pub groups: Vec<Vec<usize>>,
}

impl BlockFiltration {
    fn new(form: &HtlForm) -> Self {
        let sizes = form.sizes();
        let mut offsets = vec![0];
        for s in &sizes {
            offsets.push(offsets.last().expect("nonempty") + s);
        }
        let k = form.order.max(1);
        let groups = (1..=k)
            .map(|s| {
                let key = |b: &HtlBlock| (s + 1..=k).map(|d| b.q_coeff(d)).collect::<Vec<_>>();
                let mut ids = Vec::with_capacity(form.blocks.len());
                for (b, blk) in form.blocks.iter().enumerate() {
                    let id = match b {
                        0 => 0,
                        _ if key(blk) == key(&form.blocks[b - 1]) => ids[b - 1],
                        _ => ids[b - 1] + 1,
                    };
                    ids.push(id);
                }
                ids
            })
            .collect();
        BlockFiltration { sizes, offsets, groups }
    }

    pub fn levels(&self) -> usize {
        self.groups.len()
    }

    pub fn group(&self, s: usize, block: usize) -> usize {
        self.groups[s - 1][block]
    }

    /// `π_s`: the level-`s+1` group containing level-`s` group `j`.
    pub fn pi(&self, s: usize, j: usize) -> usize {
        let b = self.groups[s - 1].iter().position(|&g| g == j).expect("group exists");
        self.groups[s][b]
    }

    /// Entry `(row, col)` lies in `𝔲⁻_s` (row group after column group).
    fn lower(&self, s: usize, rb: usize, cb: usize) -> bool {
        s <= self.levels() && self.group(s, rb) > self.group(s, cb)
    }

    fn upper(&self, s: usize, rb: usize, cb: usize) -> bool {
        s <= self.levels() && self.group(s, rb) < self.group(s, cb)
    }

    fn mask(&self, x: &ExactMatrix, keep: impl Fn(usize, usize) -> bool) -> ExactMatrix {
        let mut out = ExactMatrix::zeros(x.rows(), x.cols());
        for rb in 0..self.sizes.len() {
            for cb in 0..self.sizes.len() {
                if keep(rb, cb) {
                    let blk = x.submatrix(self.offsets[rb], self.offsets[cb], self.sizes[rb], self.sizes[cb]);
                    out.set_submatrix(self.offsets[rb], self.offsets[cb], &blk);
                }
            }
        }
        out
    }

    /// Projection onto `𝔲⁻_s`.
    pub fn lower_part(&self, s: usize, x: &ExactMatrix) -> ExactMatrix {
        self.mask(x, |r, c| self.lower(s, r, c))
    }

    /// Projection onto `𝔲⁺_s`.
    pub fn upper_part(&self, s: usize, x: &ExactMatrix) -> ExactMatrix {
        self.mask(x, |r, c| self.upper(s, r, c))
    }

    /// Block `(r, c)` of `x` in level-1 coordinates.
    pub fn block(&self, x: &ExactMatrix, r: usize, c: usize) -> ExactMatrix {
        x.submatrix(self.offsets[r], self.offsets[c], self.sizes[r], self.sizes[c])
    }
}

/// Reduces the principal part `a` (entry `j−1` is the coefficient of
/// `x^{−j}`) to normal form: returns `(B, g)` with `g[a] = g a g⁻¹ = B`.
pub fn htl_reduce(a: &[ExactMatrix]) -> Result<(HtlForm, GaugeElement)> {
    let Some(first) = a.first() else {
        return Err(Error::Precondition("empty principal part".into()));
    };
    let n = first.rows();
    if a.iter().any(|c| c.rows() != n || c.cols() != n) {
        return Err(Error::Dimension("principal part coefficients must be n×n".into()));
    }
    let (blocks, g) = reduce(a.to_vec())?;
    Ok((HtlForm { order: a.len(), blocks }, g))
}

fn set_top_coeff(blocks: &mut [HtlBlock], k: usize, c: &GaussRat) {
    for b in blocks {
        if b.q.len() < k - 1 {
            b.q.resize(k - 1, GaussRat::zero());
        }
        b.q[k - 2] = c.clone();
        while b.q.last().is_some_and(Zero::is_zero) {
            b.q.pop();
        }
    }
}

fn reduce(a: Vec<ExactMatrix>) -> Result<(Vec<HtlBlock>, GaugeElement)> {
    let k = a.len();
    let n = a[0].rows();
    if k == 1 {
        return Ok((vec![HtlBlock { q: Vec::new(), residue: a[0].clone() }], GaugeElement::identity(n, 1)));
    }
    let top = &a[k - 1];
    let eig = eigenvalues(top)?;
    if eig.len() == 1 {
        let c = &eig[0].0;
        if *top != ExactMatrix::scalar(n, c) {
            return Err(Error::Ramified(format!("leading coefficient of x^-{k} is not semisimple")));
        }
        let (mut blocks, g) = reduce(a[..k - 1].to_vec())?;
        set_top_coeff(&mut blocks, k, c);
        return Ok((blocks, g.with_degree(k)));
    }

    let mut cols: Vec<&ExactMatrix> = Vec::new();
    let kernels: Vec<ExactMatrix> = eig.iter().map(|(c, _)| top.shift(c).kernel_matrix()).collect();
    for ((_, mult), kern) in eig.iter().zip(&kernels) {
        if kern.cols() != *mult {
            return Err(Error::Ramified(format!("leading coefficient of x^-{k} is not semisimple")));
        }
        cols.push(kern);
    }
    let s = ExactMatrix::hstack(&cols)?;
    let sizes: Vec<usize> = eig.iter().map(|e| e.1).collect();
    let mut offsets = vec![0];
    for sz in &sizes {
        offsets.push(offsets.last().expect("nonempty") + sz);
    }

    let mut g = GaugeElement::constant(s.inverse()?, k);
    let mut b = g.act(&a);
    // Kill the off-diagonal blocks of x^{−(k−s)} with I + X x^s:
    // the coefficient becomes b_{k−s} + X b_k − b_k X.
    for lvl in 1..k {
        let c = &b[k - lvl - 1];
        let mut x = ExactMatrix::zeros(n, n);
        let mut any = false;
        for (ra, (ca, _)) in eig.iter().enumerate() {
            for (rb, (cb, _)) in eig.iter().enumerate() {
                if ra == rb {
                    continue;
                }
                let blk = c.submatrix(offsets[ra], offsets[rb], sizes[ra], sizes[rb]);
                if blk.is_zero() {
                    continue;
                }
                let inv = (ca - cb).inv().expect("distinct eigenvalues");
                x.set_submatrix(offsets[ra], offsets[rb], &blk.scale(&inv));
                any = true;
            }
        }
        if any {
            let step = GaugeElement::unipotent(x, lvl, k);
            b = step.act(&b);
            g = step.compose(&g);
        }
    }

    let mut blocks = Vec::new();
    let mut gauges = Vec::new();
    for (ra, (ca, _)) in eig.iter().enumerate() {
        let sub: Vec<ExactMatrix> =
            b[..k - 1].iter().map(|m| m.submatrix(offsets[ra], offsets[ra], sizes[ra], sizes[ra])).collect();
        let (mut bl, ga) = reduce(sub)?;
        set_top_coeff(&mut bl, k, ca);
        blocks.extend(bl);
        gauges.push(ga);
    }
    let inner = GaugeElement::block_diag(&gauges, k);
    Ok((blocks, inner.compose(&g)))
}

/// Whether the principal part `a` lies in the truncated orbit of the normal
/// form described by `target`: same polynomial parts up to block
/// permutation, same sizes, and residue blocks with the target rank
/// sequences against the target ξ.
pub fn orbit_member(a: &[ExactMatrix], target: &PoleData) -> Result<bool> {
    let n = a.first().map_or(0, ExactMatrix::rows);
    if n != target.size() {
        return Err(Error::Dimension(format!("principal part has rank {n}, target has {}", target.size())));
    }
    let k = a.len().max(target.order);
    let mut padded = a.to_vec();
    padded.resize(k, ExactMatrix::zeros(n, n));
    let (form, _) = htl_reduce(&padded)?;
    Ok(form_matches(&form, target))
}

/// Block-by-block comparison of a computed normal form with target data.
pub fn form_matches(form: &HtlForm, target: &PoleData) -> bool {
    if form.blocks.len() != target.blocks.len() {
        return false;
    }
    target.blocks.iter().all(|tb| {
        form.find(&tb.q).is_some_and(|idx| {
            let fb = &form.blocks[idx];
            fb.size() == tb.size && rank_sequence(&fb.residue, &tb.xi) == tb.ranks()
        })
    })
}
