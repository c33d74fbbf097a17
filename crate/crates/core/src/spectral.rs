//! Problem instances: one Hukuhara–Turrittin–Levelt normal form per pole,
//! together with the annihilating sequences ξ that fix the leg lengths of
//! the quiver.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numeric::{eigenvalues, mat_rank, rank_sequence, ExactMatrix, GaussRat};

pub const INFINITY: &str = "infinity";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanEntry {
    pub value: GaussRat,
    pub blocks: Vec<usize>,
}

/// Conjugacy class of a residue block, given either by Jordan data or by a
/// representative matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResidueSpec {
    Jordan(Vec<JordanEntry>),
    Matrix(ExactMatrix),
}

impl ResidueSpec {
    pub fn scalar(n: usize, value: GaussRat) -> Self {
        ResidueSpec::Jordan(vec![JordanEntry { value, blocks: vec![1; n] }])
    }

    pub fn size(&self) -> usize {
        match self {
            ResidueSpec::Jordan(es) => es.iter().flat_map(|e| e.blocks.iter()).sum(),
            ResidueSpec::Matrix(m) => m.rows(),
        }
    }

    pub fn trace(&self) -> GaussRat {
        match self {
            ResidueSpec::Jordan(es) => {
                let mut t = GaussRat::zero();
                for e in es {
                    let mult: usize = e.blocks.iter().sum();
                    t += &(&e.value * &GaussRat::from_int(mult as i64));
                }
                t
            }
            ResidueSpec::Matrix(m) => m.trace(),
        }
    }

    /// A representative matrix; Jordan data becomes upper bidiagonal.
    pub fn to_matrix(&self) -> ExactMatrix {
        match self {
            ResidueSpec::Matrix(m) => m.clone(),
            ResidueSpec::Jordan(es) => {
                let n = self.size();
                let mut m = ExactMatrix::zeros(n, n);
                let mut at = 0;
                for e in es {
                    for &b in &e.blocks {
                        for k in 0..b {
                            m[(at + k, at + k)] = e.value.clone();
                            if k + 1 < b {
                                m[(at + k, at + k + 1)] = GaussRat::one();
                            }
                        }
                        at += b;
                    }
                }
                m
            }
        }
    }

    /// Jordan data, computing eigenvalues exactly for explicit matrices.
    pub fn jordan_data(&self) -> Result<Vec<JordanEntry>> {
        match self {
            ResidueSpec::Jordan(es) => Ok(es.clone()),
            ResidueSpec::Matrix(m) => jordan_of_matrix(m),
        }
    }

    /// `rank ∏_{l≤k} (R − ξ_l)` for each prefix of `xi`.
    pub fn rank_sequence(&self, xi: &[GaussRat]) -> Vec<usize> {
        match self {
            ResidueSpec::Matrix(m) => rank_sequence(m, xi),
            ResidueSpec::Jordan(es) => {
                let n = self.size();
                let mut used: BTreeMap<&GaussRat, usize> = BTreeMap::new();
                xi.iter()
                    .map(|x| {
                        *used.entry(x).or_insert(0) += 1;
                        let mut nullity = 0;
                        for e in es {
                            let c = used.get(&e.value).copied().unwrap_or(0);
                            nullity += e.blocks.iter().map(|&b| b.min(c)).sum::<usize>();
                        }
                        n - nullity
                    })
                    .collect()
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            ResidueSpec::Matrix(m) if !m.is_square() => {
                Err(Error::InvalidInstance("residue matrix is not square".into()))
            }
            ResidueSpec::Matrix(_) => Ok(()),
            ResidueSpec::Jordan(es) => {
                for (k, e) in es.iter().enumerate() {
                    if e.blocks.is_empty() || e.blocks.contains(&0) {
                        return Err(Error::InvalidInstance("Jordan block sizes must be positive".into()));
                    }
                    if es[..k].iter().any(|f| f.value == e.value) {
                        return Err(Error::InvalidInstance(format!(
                            "eigenvalue {} listed twice",
                            e.value
                        )));
                    }
                }
                Ok(())
            }
        }
    }
}

fn jordan_of_matrix(m: &ExactMatrix) -> Result<Vec<JordanEntry>> {
    let mut out = Vec::new();
    for (value, mult) in eigenvalues(m)? {
        let shifted = m.shift(&value);
        let n = m.rows();
        // dims[k] = dim ker (m − λ)^k, grows until it reaches the multiplicity.
        let mut dims = vec![0usize];
        let mut pow = ExactMatrix::identity(n);
        while *dims.last().expect("nonempty") < mult {
            pow = &pow * &shifted;
            dims.push(n - mat_rank(&pow));
        }
        out.push(JordanEntry { value, blocks: partition_from_kernel_dims(&dims) });
    }
    Ok(out)
}

/// Block sizes (descending) from `dims[k] = dim ker N^k`.
fn partition_from_kernel_dims(dims: &[usize]) -> Vec<usize> {
    // #blocks of size ≥ k is dims[k] − dims[k−1].
    let at_least: Vec<usize> = dims.windows(2).map(|w| w[1] - w[0]).collect();
    let mut blocks = Vec::new();
    for k in (1..=at_least.len()).rev() {
        let exactly = at_least[k - 1] - at_least.get(k).copied().unwrap_or(0);
        blocks.extend(core::iter::repeat_n(k, exactly));
    }
    blocks
}

/// Recovers Jordan data from a rank sequence against an annihilating ξ:
/// the inverse of [`ResidueSpec::rank_sequence`]. Eigenvalues appear in
/// first-occurrence order of ξ.
pub fn jordan_from_ranks(n: usize, xi: &[GaussRat], ranks: &[usize]) -> Result<Vec<JordanEntry>> {
    if xi.len() != ranks.len() || ranks.last().is_some_and(|&r| r != 0) || (xi.is_empty() && n != 0) {
        return Err(Error::Precondition("rank data does not describe an annihilated class".into()));
    }
    // For each eigenvalue, the drops give #blocks of size > c for c = 0, 1, ...
    let mut greater: BTreeMap<GaussRat, Vec<usize>> = BTreeMap::new();
    let mut order: Vec<GaussRat> = Vec::new();
    let mut prev = n;
    for (x, &r) in xi.iter().zip(ranks) {
        if r > prev {
            return Err(Error::Precondition("rank sequence increases".into()));
        }
        if !greater.contains_key(x) {
            order.push(x.clone());
        }
        greater.entry(x.clone()).or_default().push(prev - r);
        prev = r;
    }
    let mut out = Vec::new();
    for v in order {
        let g = &greater[&v];
        let mut blocks = Vec::new();
        for c in 0..g.len() {
            let next = g.get(c + 1).copied().unwrap_or(0);
            if next > g[c] {
                return Err(Error::Precondition("rank drops are not a partition".into()));
            }
            blocks.extend(core::iter::repeat_n(c + 1, g[c] - next));
        }
        blocks.sort_unstable_by(|a, b| b.cmp(a));
        if !blocks.is_empty() {
            out.push(JordanEntry { value: v, blocks });
        }
    }
    let total: usize = out.iter().flat_map(|e| e.blocks.iter()).sum();
    if total != n {
        return Err(Error::Precondition("rank data inconsistent with the size".into()));
    }
    Ok(out)
}

/// Default ξ: each eigenvalue repeated as often as its largest Jordan block,
/// in the given eigenvalue order. Returns ξ and its rank sequence.
pub fn select_xi(res: &ResidueSpec) -> Result<(Vec<GaussRat>, Vec<usize>)> {
    res.validate()?;
    let xi: Vec<GaussRat> = res
        .jordan_data()?
        .iter()
        .flat_map(|e| {
            let top = e.blocks.iter().copied().max().unwrap_or(0);
            core::iter::repeat_n(e.value.clone(), top)
        })
        .collect();
    let ranks = res.rank_sequence(&xi);
    Ok((xi, ranks))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrregularBlock {
    /// Coefficients of `q(s)` for `s², s³, …`, trailing zeros trimmed.
    pub q: Vec<GaussRat>,
    pub size: usize,
    pub residue: ResidueSpec,
    pub xi: Vec<GaussRat>,
}

impl IrregularBlock {
    /// Validates the block and picks the default ξ when none is given.
    pub fn new(mut q: Vec<GaussRat>, size: usize, residue: ResidueSpec, xi: Option<Vec<GaussRat>>) -> Result<Self> {
        while q.last().is_some_and(Zero::is_zero) {
            q.pop();
        }
        residue.validate()?;
        if size == 0 {
            return Err(Error::InvalidInstance("block size must be positive".into()));
        }
        if residue.size() != size {
            return Err(Error::InvalidInstance(format!(
                "residue has size {} but block size is {size}",
                residue.size()
            )));
        }
        let xi = match xi {
            Some(xi) => {
                if residue.rank_sequence(&xi).last().copied().unwrap_or(size) != 0 {
                    return Err(Error::InvalidInstance("xi sequence does not annihilate the residue".into()));
                }
                xi
            }
            None => select_xi(&residue)?.0,
        };
        Ok(IrregularBlock { q, size, residue, xi })
    }

    /// Ranks `α_{[i,j,k]}` for `k = 1..e`, ending in 0.
    pub fn ranks(&self) -> Vec<usize> {
        self.residue.rank_sequence(&self.xi)
    }

    /// Number of ξ values, `e_{[i,j]}`.
    pub fn e(&self) -> usize {
        self.xi.len()
    }

    /// Coefficient of `s^d` in `q`.
    pub fn q_coeff(&self, d: usize) -> GaussRat {
        if d < 2 {
            return GaussRat::zero();
        }
        self.q.get(d - 2).cloned().unwrap_or_else(GaussRat::zero)
    }

    pub fn q_degree(&self) -> Option<usize> {
        if self.q.is_empty() {
            None
        } else {
            Some(self.q.len() + 1)
        }
    }
}

/// `deg(q_a − q_b) − 2`, and `−1` when the polynomials agree.
pub fn d_value(a: &IrregularBlock, b: &IrregularBlock) -> i64 {
    q_difference_degree(&a.q, &b.q).map_or(-1, |d| d as i64 - 2)
}

pub fn q_difference_degree(a: &[GaussRat], b: &[GaussRat]) -> Option<usize> {
    let zero = GaussRat::zero();
    (0..a.len().max(b.len()))
        .rev()
        .find(|&k| a.get(k).unwrap_or(&zero) != b.get(k).unwrap_or(&zero))
        .map(|k| k + 2)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleData {
    pub label: String,
    pub order: usize,
    pub blocks: Vec<IrregularBlock>,
}

impl PoleData {
    pub fn is_infinity(&self) -> bool {
        self.label == INFINITY
    }

    pub fn size(&self) -> usize {
        self.blocks.iter().map(|b| b.size).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralData {
    pub rank: usize,
    pub poles: Vec<PoleData>,
}

/// A scalar irregular part removed from a single-block finite pole.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Twist {
    pub pole: usize,
    pub q: Vec<GaussRat>,
    pub old_order: usize,
}

impl SpectralData {
    pub fn new(rank: usize, poles: Vec<PoleData>) -> Result<Self> {
        let d = SpectralData { rank, poles };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |s: String| Err(Error::InvalidInstance(s));
        if self.rank == 0 {
            return bad("rank must be positive".into());
        }
        match self.poles.first() {
            Some(p) if p.is_infinity() => {}
            _ => return bad("pole 0 must be labelled \"infinity\"".into()),
        }
        if self.poles.iter().skip(1).any(PoleData::is_infinity) {
            return bad("more than one pole labelled \"infinity\"".into());
        }
        for (i, p) in self.poles.iter().enumerate() {
            if p.order == 0 {
                return bad(format!("pole {i}: order must be at least 1"));
            }
            if p.blocks.is_empty() {
                return bad(format!("pole {i}: no blocks"));
            }
            if p.size() != self.rank {
                return bad(format!("pole {i}: block sizes sum to {} instead of {}", p.size(), self.rank));
            }
            for (j, b) in p.blocks.iter().enumerate() {
                if b.q.len() + 1 > p.order {
                    return bad(format!("pole {i} block {j}: q has degree above the pole order"));
                }
                if p.blocks[..j].iter().any(|c| c.q == b.q) {
                    return bad(format!("pole {i}: blocks not distinct (block {j} repeats a q)"));
                }
                if b.residue.size() != b.size || b.size == 0 {
                    return bad(format!("pole {i} block {j}: bad residue size"));
                }
                if b.residue.rank_sequence(&b.xi).last().copied().unwrap_or(b.size) != 0 {
                    return bad(format!("pole {i} block {j}: xi does not annihilate the residue"));
                }
            }
        }
        Ok(())
    }

    pub fn block_count(&self, i: usize) -> usize {
        self.poles[i].blocks.len()
    }

    /// `I_irr = {i : m⁽ⁱ⁾ > 1} ∪ {0}`, ascending.
    pub fn irregular_poles(&self) -> Vec<usize> {
        (0..self.poles.len())
            .filter(|&i| i == 0 || self.block_count(i) > 1)
            .collect()
    }

    pub fn regular_poles(&self) -> Vec<usize> {
        (1..self.poles.len()).filter(|&i| self.block_count(i) == 1).collect()
    }

    /// Total residue trace `Σ_i Σ_j tr R⁽ⁱ⁾_j`.
    pub fn trace_sum(&self) -> GaussRat {
        let mut t = GaussRat::zero();
        for p in &self.poles {
            for b in &p.blocks {
                t += &b.residue.trace();
            }
        }
        t
    }

    /// Removes the scalar irregular part of every single-block finite pole
    /// and drops its order to 1.
    pub fn normalize(&self) -> (SpectralData, Vec<Twist>) {
        let mut out = self.clone();
        let mut log = Vec::new();
        for (i, p) in out.poles.iter_mut().enumerate().skip(1) {
            if p.blocks.len() != 1 || p.order == 1 {
                continue;
            }
            let q = core::mem::take(&mut p.blocks[0].q);
            log.push(Twist { pole: i, q, old_order: p.order });
            p.order = 1;
        }
        (out, log)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::gauss_parse;

    fn g(s: &str) -> GaussRat {
        gauss_parse(s).unwrap()
    }

    fn jordan(entries: &[(&str, &[usize])]) -> ResidueSpec {
        ResidueSpec::Jordan(
            entries
                .iter()
                .map(|(v, b)| JordanEntry { value: g(v), blocks: b.to_vec() })
                .collect(),
        )
    }

    /// rank Nᵏ of a nilpotent Jordan matrix is Σ max(b − k, 0).
    fn nilpotent_rank_oracle(blocks: &[usize], k: usize) -> usize {
        blocks.iter().map(|&b| b.saturating_sub(k)).sum()
    }

    #[test]
    fn select_xi_nilpotent_two_one() {
        let (xi, ranks) = select_xi(&jordan(&[("0", &[2, 1])])).unwrap();
        assert_eq!(xi, vec![g("0"), g("0")]);
        assert_eq!(ranks, vec![1, 0]);
        assert_eq!(ranks, (1..=2).map(|k| nilpotent_rank_oracle(&[2, 1], k)).collect::<Vec<_>>());
    }

    #[test]
    fn select_xi_distinct_eigenvalues() {
        let (xi, ranks) = select_xi(&jordan(&[("1", &[1]), ("2", &[1])])).unwrap();
        assert_eq!(xi, vec![g("1"), g("2")]);
        assert_eq!(ranks, vec![1, 0]);
    }

    #[test]
    fn select_xi_explicit_scalar() {
        let (xi, ranks) = select_xi(&ResidueSpec::Matrix(ExactMatrix::from_ints(&[&[5]]))).unwrap();
        assert_eq!(xi, vec![g("5")]);
        assert_eq!(ranks, vec![0]);
    }

    #[test]
    fn explicit_and_jordan_rank_sequences_agree() {
        let spec = jordan(&[("1", &[3, 1]), ("i", &[2]), ("-1/2", &[1, 1])]);
        let (xi, ranks) = select_xi(&spec).unwrap();
        assert_eq!(ResidueSpec::Matrix(spec.to_matrix()).rank_sequence(&xi), ranks);
        let p = ExactMatrix::from_ints(&[
            &[1, 1, 0, 0, 0, 0, 0, 0],
            &[0, 1, 1, 0, 0, 0, 0, 0],
            &[0, 0, 1, 1, 0, 0, 0, 0],
            &[0, 0, 0, 1, 1, 0, 0, 0],
            &[0, 0, 0, 0, 1, 1, 0, 0],
            &[0, 0, 0, 0, 0, 1, 1, 0],
            &[0, 0, 0, 0, 0, 0, 1, 1],
            &[2, 0, 0, 0, 0, 0, 0, 1],
        ]);
        let conj = &(&p.inverse().unwrap() * &spec.to_matrix()) * &p;
        let back = ResidueSpec::Matrix(conj).jordan_data().unwrap();
        let mut want = spec.jordan_data().unwrap();
        want.sort_by(|a, b| a.value.cmp(&b.value));
        assert_eq!(back, want);
    }

    #[test]
    fn ranks_round_trip_to_jordan_data() {
        let spec = jordan(&[("0", &[3, 1]), ("2", &[2, 2, 1])]);
        let xi = vec![g("2"), g("0"), g("0"), g("2"), g("0")];
        let ranks = spec.rank_sequence(&xi);
        assert_eq!(*ranks.last().unwrap(), 0);
        let back = jordan_from_ranks(spec.size(), &xi, &ranks).unwrap();
        assert_eq!(back, vec![
            JordanEntry { value: g("2"), blocks: vec![2, 2, 1] },
            JordanEntry { value: g("0"), blocks: vec![3, 1] },
        ]);
    }

    fn block(q: &[&str], size: usize) -> IrregularBlock {
        IrregularBlock::new(q.iter().map(|s| g(s)).collect(), size, ResidueSpec::scalar(size, g("0")), None).unwrap()
    }

    #[test]
    fn d_values() {
        assert_eq!(d_value(&block(&["0", "1"], 1), &block(&["0", "2"], 1)), 1);
        assert_eq!(d_value(&block(&["1"], 1), &block(&["2"], 1)), 0);
        let b = block(&["1", "1"], 2);
        assert_eq!(d_value(&b, &b), -1);
    }

    fn pole(label: &str, order: usize, blocks: Vec<IrregularBlock>) -> PoleData {
        PoleData { label: label.into(), order, blocks }
    }

    #[test]
    fn duplicate_q_rejected() {
        let err = SpectralData::new(2, vec![pole(INFINITY, 2, vec![block(&["1"], 1), block(&["1"], 1)])]);
        assert!(matches!(err, Err(Error::InvalidInstance(m)) if m.contains("not distinct")));
    }

    #[test]
    fn rank_mismatch_rejected() {
        let err = SpectralData::new(2, vec![pole(INFINITY, 1, vec![block(&[], 2)]), pole("a", 1, vec![block(&[], 1)])]);
        assert!(err.is_err());
    }

    #[test]
    fn bad_xi_rejected() {
        let r = IrregularBlock::new(vec![], 2, jordan(&[("0", &[2])]), Some(vec![g("0")]));
        assert!(r.is_err());
    }

    #[test]
    fn normalize_twists_single_block_finite_poles() {
        let d = SpectralData::new(2, vec![
            pole(INFINITY, 2, vec![block(&["5"], 2)]),
            pole("a", 2, vec![block(&["3"], 2)]),
            pole("b", 2, vec![block(&["1"], 1), block(&["2"], 1)]),
        ])
        .unwrap();
        let (n, log) = d.normalize();
        assert_eq!(log, vec![Twist { pole: 1, q: vec![g("3")], old_order: 2 }]);
        assert_eq!(n.poles[1].order, 1);
        assert!(n.poles[1].blocks[0].q.is_empty());
        assert_eq!(n.poles[0], d.poles[0]);
        assert_eq!(n.irregular_poles(), vec![0, 2]);
        assert_eq!(n.regular_poles(), vec![1]);
        assert_eq!(n.normalize().0, n);
        assert!(n.normalize().1.is_empty());
    }
}
