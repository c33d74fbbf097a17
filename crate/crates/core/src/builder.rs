//! From spectral data to the quiver `Q`, the dimension vector `α` and the
//! parameter `λ`, plus the moves on `(α, λ)` induced by changing the
//! presentation of the spectral data.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::numeric::GaussRat;
use crate::quiver::{dot, reflect_dim, reflect_param, DimVector, ParamVector, Quiver, VertexId};
use crate::spectral::{d_value, JordanEntry, ResidueSpec, SpectralData, Twist};

/// One block index per pole (1-based). Regular poles always carry 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(pub Vec<usize>);

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, j) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{j}")?;
        }
        f.write_str(")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverInstance {
    /// Normalized spectral data the instance was built from.
    pub data: SpectralData,
    pub twists: Vec<Twist>,
    pub quiver: Quiver,
    pub alpha: DimVector,
    pub lambda: ParamVector,
    /// `I_irr`, ascending, always starting with 0.
    pub irr: Vec<usize>,
    pub reg: Vec<usize>,
    /// `d[i][j][j']` for every pole (0-based blocks); `−1` on the diagonal.
    pub d: Vec<Vec<Vec<i64>>>,
}

/// Builds `(Q, α, λ)` from (normalized) spectral data.
pub fn build_instance(data: &SpectralData) -> Result<QuiverInstance> {
    data.validate()?;
    let (data, twists) = data.normalize();
    let irr = data.irregular_poles();
    let reg = data.regular_poles();
    let poles = &data.poles;

    let mut vertices = Vec::new();
    for &i in &irr {
        for j in 1..=poles[i].blocks.len() {
            vertices.push(VertexId::Block { pole: i, block: j });
        }
    }
    for (i, p) in poles.iter().enumerate() {
        for (j, b) in p.blocks.iter().enumerate() {
            for k in 1..b.e() {
                vertices.push(VertexId::Leg { pole: i, block: j + 1, k });
            }
        }
    }
    let pos = |v: VertexId| vertices.iter().position(|w| *w == v).expect("vertex exists");

    let d: Vec<Vec<Vec<i64>>> = poles
        .iter()
        .map(|p| {
            p.blocks
                .iter()
                .map(|a| p.blocks.iter().map(|b| d_value(a, b)).collect())
                .collect()
        })
        .collect();

    let mut arrows = Vec::new();
    let m0 = poles[0].blocks.len();
    for &i in irr.iter().skip(1) {
        for j in 1..=m0 {
            for jp in 1..=poles[i].blocks.len() {
                arrows.push((pos(VertexId::Block { pole: 0, block: j }), pos(VertexId::Block { pole: i, block: jp })));
            }
        }
    }
    for &i in &irr {
        let m = poles[i].blocks.len();
        for j in 0..m {
            for jp in j + 1..m {
                for _ in 0..d[i][j][jp] {
                    arrows.push((
                        pos(VertexId::Block { pole: i, block: j + 1 }),
                        pos(VertexId::Block { pole: i, block: jp + 1 }),
                    ));
                }
            }
        }
    }
    for (i, p) in poles.iter().enumerate() {
        for (j, b) in p.blocks.iter().enumerate() {
            if b.e() < 2 {
                continue;
            }
            let first = pos(VertexId::Leg { pole: i, block: j + 1, k: 1 });
            if irr.contains(&i) {
                arrows.push((first, pos(VertexId::Block { pole: i, block: j + 1 })));
            } else {
                for j0 in 1..=m0 {
                    arrows.push((first, pos(VertexId::Block { pole: 0, block: j0 })));
                }
            }
            for k in 2..b.e() {
                arrows.push((
                    pos(VertexId::Leg { pole: i, block: j + 1, k }),
                    pos(VertexId::Leg { pole: i, block: j + 1, k: k - 1 }),
                ));
            }
        }
    }

    let mut reg_xi = GaussRat::zero();
    for &i in &reg {
        reg_xi += &poles[i].blocks[0].xi[0];
    }
    let mut alpha = Vec::with_capacity(vertices.len());
    let mut lambda = Vec::with_capacity(vertices.len());
    for v in &vertices {
        match *v {
            VertexId::Block { pole, block } => {
                let b = &poles[pole].blocks[block - 1];
                alpha.push(b.size as i64);
                let mut l = -&b.xi[0];
                if pole == 0 {
                    l -= &reg_xi;
                }
                lambda.push(l);
            }
            VertexId::Leg { pole, block, k } => {
                let b = &poles[pole].blocks[block - 1];
                alpha.push(b.ranks()[k - 1] as i64);
                lambda.push(&b.xi[k - 1] - &b.xi[k]);
            }
        }
    }
    Ok(QuiverInstance { quiver: Quiver::new(vertices, arrows), data, twists, alpha, lambda, irr, reg, d })
}

impl QuiverInstance {
    pub fn block_count(&self, i: usize) -> usize {
        self.data.poles[i].blocks.len()
    }

    pub fn block_vertex(&self, pole: usize, block: usize) -> Option<usize> {
        self.quiver.index_of(&VertexId::Block { pole, block })
    }

    pub fn leg_vertex(&self, pole: usize, block: usize, k: usize) -> Option<usize> {
        self.quiver.index_of(&VertexId::Leg { pole, block, k })
    }

    pub fn alpha_dot_lambda(&self) -> GaussRat {
        dot(&self.alpha, &self.lambda)
    }

    /// `Σ_j β_{[i,j]}` for an irregular pole `i`.
    pub fn level(&self, beta: &[i64], i: usize) -> i64 {
        (1..=self.block_count(i))
            .map(|j| beta[self.block_vertex(i, j).expect("irregular pole")])
            .sum()
    }

    /// Membership in the lattice `ℒ`: all irregular poles carry the same
    /// level.
    pub fn lattice_member(&self, beta: &[i64]) -> bool {
        let l0 = self.level(beta, 0);
        self.irr.iter().skip(1).all(|&i| self.level(beta, i) == l0)
    }

    /// Checks that `idx` has one valid block per pole and 1 at regular poles.
    pub fn check_index(&self, idx: &MultiIndex) -> Result<()> {
        if idx.0.len() != self.data.poles.len() {
            return Err(Error::Precondition(format!(
                "multi-index has {} entries for {} poles",
                idx.0.len(),
                self.data.poles.len()
            )));
        }
        for (i, &j) in idx.0.iter().enumerate() {
            if j == 0 || j > self.block_count(i) {
                return Err(Error::Precondition(format!("block {j} does not exist at pole {i}")));
            }
        }
        Ok(())
    }

    /// Every multi-index, in lexicographic order.
    pub fn multi_indices(&self) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex(vec![1; self.data.poles.len()])];
        for &i in &self.irr {
            let m = self.block_count(i);
            out = out
                .into_iter()
                .flat_map(|idx| {
                    (1..=m).map(move |j| {
                        let mut v = idx.0.clone();
                        v[i] = j;
                        MultiIndex(v)
                    })
                })
                .collect();
        }
        out.sort();
        out
    }

    /// `ε_𝐢 = Σ_{i ∈ I_irr} ε_{[i, j_i]}`.
    pub fn composite_eps(&self, idx: &MultiIndex) -> DimVector {
        let mut e = vec![0; self.quiver.len()];
        for &i in &self.irr {
            e[self.block_vertex(i, idx.0[i]).expect("valid index")] = 1;
        }
        e
    }

    /// `(β, ε_𝐢)`.
    pub fn pair_composite(&self, beta: &[i64], idx: &MultiIndex) -> i64 {
        self.irr
            .iter()
            .map(|&i| self.quiver.pair_unit(beta, self.block_vertex(i, idx.0[i]).expect("valid index")))
            .sum()
    }

    /// `λ_𝐢 = Σ_{i ∈ I_irr} λ_{[i, j_i]}`.
    pub fn lambda_composite(&self, lambda: &[GaussRat], idx: &MultiIndex) -> GaussRat {
        let mut s = GaussRat::zero();
        for &i in &self.irr {
            s += &lambda[self.block_vertex(i, idx.0[i]).expect("valid index")];
        }
        s
    }

    /// `s_𝐢(β) = β − (β, ε_𝐢) ε_𝐢`.
    pub fn reflect_composite(&self, beta: &[i64], idx: &MultiIndex) -> DimVector {
        let c = self.pair_composite(beta, idx);
        let e = self.composite_eps(idx);
        beta.iter().zip(&e).map(|(b, x)| b - c * x).collect()
    }

    /// The dual reflection `λ_b − (ε_𝐢, ε_b) λ_𝐢`, which keeps `β·λ` fixed
    /// under `(s_𝐢, r_𝐢)`.
    pub fn reflect_composite_param(&self, lambda: &[GaussRat], idx: &MultiIndex) -> ParamVector {
        let li = self.lambda_composite(lambda, idx);
        let e = self.composite_eps(idx);
        (0..self.quiver.len())
            .map(|b| {
                let c = self.quiver.pair_unit(&e, b);
                if c == 0 {
                    lambda[b].clone()
                } else {
                    &lambda[b] - &(&li * &GaussRat::from_int(c))
                }
            })
            .collect()
    }

    /// The same reflection written as a product of simple reflections:
    /// conjugate `s_{[0,j_0]}` by the commuting reflections at the other
    /// irregular poles.
    pub fn reflect_composite_via_simple(&self, beta: &[i64], idx: &MultiIndex) -> DimVector {
        let outer: Vec<usize> = self
            .irr
            .iter()
            .skip(1)
            .map(|&i| self.block_vertex(i, idx.0[i]).expect("valid index"))
            .collect();
        let mut v = beta.to_vec();
        for &a in &outer {
            v = reflect_dim(&self.quiver, &v, a);
        }
        v = reflect_dim(&self.quiver, &v, self.block_vertex(0, idx.0[0]).expect("valid index"));
        for &a in outer.iter().rev() {
            v = reflect_dim(&self.quiver, &v, a);
        }
        v
    }

    /// `z^{(i0)}`: `+1` on the blocks of `i0`, `−1` on the blocks of pole 0.
    /// For a regular pole the shift does not reach any block vertex, so the
    /// vector is zero.
    pub fn shift_vector(&self, i0: usize) -> DimVector {
        let mut z = vec![0; self.quiver.len()];
        if !self.irr.contains(&i0) || i0 == 0 {
            return z;
        }
        for j in 1..=self.block_count(i0) {
            z[self.block_vertex(i0, j).expect("irregular pole")] = 1;
        }
        for j in 1..=self.block_count(0) {
            z[self.block_vertex(0, j).expect("pole 0")] = -1;
        }
        z
    }

    /// Swaps `ξ^{[i0,j0]}_s` and `ξ^{[i0,j0]}_{s+1}` (1-based `s`).
    pub fn perm_xi(&self, i0: usize, j0: usize, s: usize) -> Result<QuiverInstance> {
        let block = self
            .data
            .poles
            .get(i0)
            .and_then(|p| p.blocks.get(j0.wrapping_sub(1)))
            .ok_or_else(|| Error::Precondition(format!("no block [{i0},{j0}]")))?;
        if s == 0 || s >= block.e() {
            return Err(Error::Precondition(format!("cannot swap xi_{s} and xi_{} of [{i0},{j0}]", s + 1)));
        }
        let mut out = self.clone();
        out.data.poles[i0].blocks[j0 - 1].xi.swap(s - 1, s);
        if block.xi[s - 1] != block.xi[s] {
            let a = self.leg_vertex(i0, j0, s).expect("leg vertex exists");
            out.alpha = reflect_dim(&self.quiver, &self.alpha, a);
            out.lambda = reflect_param(&self.quiver, &self.lambda, a);
        }
        Ok(out)
    }

    /// Adds `γ·x⁻¹` at pole `i0` and subtracts it at pole 0: residues at
    /// `i0` move by `−γ`, residues at pole 0 by `+γ`, and `λ` by `γ z^{(i0)}`.
    pub fn add_shift(&self, i0: usize, gamma: &GaussRat) -> Result<QuiverInstance> {
        if i0 == 0 || i0 >= self.data.poles.len() {
            return Err(Error::Precondition(format!("shift pole {i0} out of range 1..=p")));
        }
        let mut out = self.clone();
        shift_pole(&mut out.data.poles[i0].blocks, &-gamma);
        shift_pole(&mut out.data.poles[0].blocks, gamma);
        let z = self.shift_vector(i0);
        for (l, zi) in out.lambda.iter_mut().zip(&z) {
            if *zi != 0 {
                *l += &(gamma * &GaussRat::from_int(*zi));
            }
        }
        Ok(out)
    }
}

fn shift_pole(blocks: &mut [crate::spectral::IrregularBlock], c: &GaussRat) {
    for b in blocks {
        b.residue = match &b.residue {
            ResidueSpec::Jordan(es) => ResidueSpec::Jordan(
                es.iter()
                    .map(|e| JordanEntry { value: &e.value + c, blocks: e.blocks.clone() })
                    .collect(),
            ),
            ResidueSpec::Matrix(m) => ResidueSpec::Matrix(m.shift(&-c)),
        };
        for x in b.xi.iter_mut() {
            *x += c;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::gauss_parse;
    use crate::quiver::tits;
    use crate::spectral::{IrregularBlock, PoleData, INFINITY};

    fn g(s: &str) -> GaussRat {
        gauss_parse(s).unwrap()
    }

    fn diag_block(q: &[&str], eig: &[&str]) -> IrregularBlock {
        let res = ResidueSpec::Jordan(eig.iter().map(|e| JordanEntry { value: g(e), blocks: vec![1] }).collect());
        IrregularBlock::new(q.iter().map(|s| g(s)).collect(), eig.len(), res, None).unwrap()
    }

    fn pole(label: &str, order: usize, blocks: Vec<IrregularBlock>) -> PoleData {
        PoleData { label: label.into(), order, blocks }
    }

    fn hypergeometric() -> SpectralData {
        SpectralData::new(2, vec![
            pole(INFINITY, 1, vec![diag_block(&[], &["1/2", "1/3"])]),
            pole("0", 1, vec![diag_block(&[], &["0", "-1/5"])]),
            pole("1", 1, vec![diag_block(&[], &["-1/7", "2/3"])]),
        ])
        .unwrap()
    }

    #[test]
    fn fuchsian_star() {
        let inst = build_instance(&hypergeometric()).unwrap();
        let v: Vec<VertexId> = inst.quiver.vertices().to_vec();
        assert_eq!(v, vec![
            VertexId::Block { pole: 0, block: 1 },
            VertexId::Leg { pole: 0, block: 1, k: 1 },
            VertexId::Leg { pole: 1, block: 1, k: 1 },
            VertexId::Leg { pole: 2, block: 1, k: 1 },
        ]);
        assert_eq!(inst.quiver.arrows(), &[(1, 0), (2, 0), (3, 0)]);
        assert_eq!(inst.alpha, vec![2, 1, 1, 1]);
        assert_eq!(inst.irr, vec![0]);
        assert_eq!(inst.reg, vec![1, 2]);
        // λ_center = −ξ^{[0,1]}_1 − ξ^{[1,1]}_1 − ξ^{[2,1]}_1
        assert_eq!(inst.lambda[0], g("-1/2") - g("0") - g("-1/7"));
        assert_eq!(inst.lambda[1], g("1/2") - g("1/3"));
        assert_eq!(tits(&inst.quiver, &inst.alpha), (1, 0));
    }

    #[test]
    fn alpha_dot_lambda_is_minus_trace_sum() {
        let d = hypergeometric();
        let inst = build_instance(&d).unwrap();
        assert_eq!(inst.alpha_dot_lambda(), -d.trace_sum());
    }

    fn two_level() -> SpectralData {
        SpectralData::new(2, vec![
            pole(INFINITY, 2, vec![diag_block(&["1"], &["0"]), diag_block(&["2"], &["0"])]),
            pole("0", 2, vec![diag_block(&["1"], &["0"]), diag_block(&["2"], &["0"])]),
        ])
        .unwrap()
    }

    #[test]
    fn order_two_crossing_arrows() {
        let inst = build_instance(&two_level()).unwrap();
        assert_eq!(inst.quiver.len(), 4);
        assert_eq!(inst.quiver.arrows().len(), 4);
        assert_eq!(inst.d[1][0][1], 0);
        assert_eq!(inst.irr, vec![0, 1]);
        assert!(inst.lattice_member(&inst.alpha));
        assert!(!inst.lattice_member(&[1, 0, 0, 0]));
    }

    #[test]
    fn parallel_arrows_follow_d() {
        let d = SpectralData::new(3, vec![pole(INFINITY, 4, vec![
            diag_block(&["0", "0", "1"], &["0"]),
            diag_block(&["0", "1"], &["0"]),
            diag_block(&["1"], &["0"]),
        ])])
        .unwrap();
        let inst = build_instance(&d).unwrap();
        assert_eq!(inst.d[0], vec![vec![-1, 2, 2], vec![2, -1, 1], vec![2, 1, -1]]);
        assert_eq!(inst.quiver.edge_count(0, 1), 2);
        assert_eq!(inst.quiver.edge_count(1, 2), 1);
        assert_eq!(inst.quiver.arrows().len(), 5);
    }

    #[test]
    fn composite_reflection_matches_simple_product() {
        let inst = build_instance(&two_level()).unwrap();
        for idx in inst.multi_indices() {
            for beta in [[1, 2, 0, 3], [2, -1, 1, 1], [0, 0, 0, 0]] {
                assert_eq!(inst.reflect_composite(&beta, &idx), inst.reflect_composite_via_simple(&beta, &idx));
            }
        }
        assert_eq!(inst.multi_indices().len(), 4);
    }

    #[test]
    fn perm_xi_agrees_with_rebuild() {
        let inst = build_instance(&hypergeometric()).unwrap();
        let swapped = inst.perm_xi(1, 1, 1).unwrap();
        let rebuilt = build_instance(&swapped.data).unwrap();
        assert_eq!(swapped.alpha, rebuilt.alpha);
        assert_eq!(swapped.lambda, rebuilt.lambda);
        assert!(inst.perm_xi(1, 1, 2).is_err());
    }

    #[test]
    fn add_shift_agrees_with_rebuild_and_preserves_pairing() {
        let inst = build_instance(&two_level()).unwrap();
        let shifted = inst.add_shift(1, &g("3/4-i")).unwrap();
        let rebuilt = build_instance(&shifted.data).unwrap();
        assert_eq!(shifted.lambda, rebuilt.lambda);
        assert_eq!(shifted.alpha, inst.alpha);
        let beta = [1, 2, 3, 0];
        assert!(inst.lattice_member(&beta));
        assert_eq!(dot(&beta, &shifted.lambda), dot(&beta, &inst.lambda));
        let fuchs = build_instance(&hypergeometric()).unwrap();
        let s = fuchs.add_shift(2, &g("5")).unwrap();
        assert_eq!(s.lambda, fuchs.lambda);
        assert_eq!(build_instance(&s.data).unwrap().lambda, fuchs.lambda);
    }
}
