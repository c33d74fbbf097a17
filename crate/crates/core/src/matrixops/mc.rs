//! Canonical datum and the middle convolution `mc_𝐢`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use super::htl::{htl_reduce, HtlForm};
use super::{shift_pole, MatrixTuple};
use crate::builder::{MultiIndex, QuiverInstance};
use crate::error::{Error, Result};
use crate::numeric::{rank_sequence, ExactMatrix, GaussRat};
use crate::quiver::{DimVector, VertexId};
use crate::spectral::{jordan_from_ranks, IrregularBlock, JordanEntry, PoleData, ResidueSpec, SpectralData};

/// `W_i ≅ Im Â_i` realized by the column basis `basis`, with the induced
/// maps `T_i ∈ End(W_i)`, `Q_i : W_i → V`, `P_i : V → W_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DatumPole {
    pub basis: ExactMatrix,
    pub t: ExactMatrix,
    pub q: ExactMatrix,
    pub p: ExactMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalDatum {
    pub dim_v: usize,
    pub poles: Vec<DatumPole>,
}

impl CanonicalDatum {
    pub fn dim_w(&self) -> usize {
        self.poles.iter().map(|p| p.basis.cols()).sum()
    }

    pub fn q(&self) -> ExactMatrix {
        let parts: Vec<&ExactMatrix> = self.poles.iter().map(|p| &p.q).collect();
        ExactMatrix::hstack(&parts).expect("all Q_i have dim V rows")
    }

    pub fn p(&self) -> ExactMatrix {
        let parts: Vec<&ExactMatrix> = self.poles.iter().map(|p| &p.p).collect();
        ExactMatrix::vstack(&parts).expect("all P_i have dim V columns")
    }

    pub fn t(&self) -> ExactMatrix {
        let parts: Vec<ExactMatrix> = self.poles.iter().map(|p| p.t.clone()).collect();
        ExactMatrix::block_diag(&parts)
    }

    fn offsets(&self) -> Vec<usize> {
        let mut off = vec![0];
        for p in &self.poles {
            off.push(off.last().expect("nonempty") + p.basis.cols());
        }
        off
    }
}

/// Upper block-Toeplitz `Â` with first block row `(A_k, …, A_1)`.
fn toeplitz(a: &[ExactMatrix], n: usize) -> ExactMatrix {
    let k = a.len();
    let mut m = ExactMatrix::zeros(k * n, k * n);
    for r in 0..k {
        for c in r..k {
            m.set_submatrix(r * n, c * n, &a[k - 1 - (c - r)]);
        }
    }
    m
}

pub fn canonical_datum(t: &MatrixTuple) -> Result<CanonicalDatum> {
    let n = t.rank;
    let mut poles = Vec::with_capacity(t.poles.len());
    for a in &t.poles {
        let k = a.len();
        let hat = toeplitz(a, n);
        let basis = hat.column_basis();
        let last_col = hat.submatrix(0, (k - 1) * n, k * n, n);
        let p = basis.coordinates(&last_col)?;
        let q = basis.submatrix(0, 0, n, basis.cols());
        // N̂ shifts blocks up: (N̂w)_r = w_{r+1}
        let mut shifted = ExactMatrix::zeros(k * n, basis.cols());
        if k > 1 {
            shifted.set_submatrix(0, 0, &basis.submatrix(n, 0, (k - 1) * n, basis.cols()));
        }
        let tm = basis.coordinates(&shifted)?;
        poles.push(DatumPole { basis, t: tm, q, p });
    }
    Ok(CanonicalDatum { dim_v: n, poles })
}

/// `dim W = Σ_i Σ_{j<k_i} (n − dim ⋂_{l≤j} Ker B⁽ⁱ⁾_{k_i−l})`, evaluated on
/// normal forms.
pub fn dim_w_formula(forms: &[HtlForm]) -> usize {
    let mut total = 0;
    for f in forms {
        let n = f.size();
        let k = f.order;
        for j in 0..k {
            let lowest = k - j;
            let mut common = 0;
            for b in &f.blocks {
                let vanish = (lowest.max(2)..=k).all(|d| b.q_coeff(d).is_zero());
                if !vanish {
                    continue;
                }
                common += if lowest >= 2 { b.size() } else { b.size() - b.residue.rank() };
            }
            total += n - common;
        }
    }
    total
}

/// `n_𝐢`, the rank change predicted from `α` alone.
pub fn n_index(inst: &QuiverInstance, idx: &MultiIndex) -> Result<i64> {
    inst.check_index(idx)?;
    let n = inst.data.rank as i64;
    let mut s = 0i64;
    for &i in &inst.irr {
        let ji = idx.0[i];
        for j in 1..=inst.block_count(i) {
            let d = inst.d[i][j - 1][ji - 1];
            s += (d + 1) * inst.alpha[inst.block_vertex(i, j).expect("block vertex")];
        }
        let a_ji = inst.alpha[inst.block_vertex(i, ji).expect("block vertex")];
        let leg = inst.leg_vertex(i, ji, 1).map_or(0, |v| inst.alpha[v]);
        s += (n - a_ji) + leg;
    }
    for &i in &inst.reg {
        s += inst.leg_vertex(i, 1, 1).map_or(0, |v| inst.alpha[v]);
    }
    Ok(s - 2 * n)
}

/// The scalar polynomial removed at each pole by `Ad_𝐢`: `q_{j_i}` plus
/// `ξ^{[i,j_i]}_1 x⁻¹`, entry `j−1` the coefficient of `x^{−j}`.
fn ad_terms(data: &SpectralData, idx: &MultiIndex) -> Vec<Vec<GaussRat>> {
    data.poles
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let b = &p.blocks[idx.0[i] - 1];
            (1..=p.order)
                .map(|j| if j == 1 { b.xi[0].clone() } else { b.q_coeff(j) })
                .collect()
        })
        .collect()
}

fn check_index(data: &SpectralData, idx: &MultiIndex) -> Result<()> {
    if idx.0.len() != data.poles.len() {
        return Err(Error::Precondition(format!(
            "multi-index has {} entries for {} poles",
            idx.0.len(),
            data.poles.len()
        )));
    }
    for (i, &j) in idx.0.iter().enumerate() {
        if j == 0 || j > data.poles[i].blocks.len() {
            return Err(Error::Precondition(format!("block {j} does not exist at pole {i}")));
        }
    }
    Ok(())
}

/// `ξ_𝐢 = Σ_i ξ^{[i,j_i]}_1` over all poles.
pub fn xi_index(data: &SpectralData, idx: &MultiIndex) -> GaussRat {
    let mut s = GaussRat::zero();
    for (i, p) in data.poles.iter().enumerate() {
        s += &p.blocks[idx.0[i] - 1].xi[0];
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McOutput {
    pub tuple: MatrixTuple,
    /// `dim W` of the canonical datum actually built.
    pub dim_w: usize,
    /// `dim W` from the normal forms of `Ad_𝐢(A)`.
    pub dim_w_predicted: usize,
    pub xi: GaussRat,
}

/// `mc_𝐢(A)` for a tuple whose pole parts lie in the orbits described by
/// `data` (unnormalized, one pole part per pole).
pub fn middle_convolution(t: &MatrixTuple, data: &SpectralData, idx: &MultiIndex) -> Result<McOutput> {
    check_index(data, idx)?;
    if t.poles.len() != data.poles.len() || t.rank != data.rank {
        return Err(Error::Dimension("tuple and spectral data disagree in shape".into()));
    }
    if !t.residue_sum_is_zero() {
        return Err(Error::Precondition("residues do not sum to zero".into()));
    }
    let xi = xi_index(data, idx);
    if xi.is_zero() {
        return Err(Error::Precondition(format!("xi_i vanishes for the multi-index {idx}")));
    }
    let xi_inv = xi.inv().expect("nonzero");
    let terms = ad_terms(data, idx);
    let mut ad = t.clone();
    for (i, q) in terms.iter().enumerate() {
        ad = shift_pole(&ad, i, q);
    }
    let datum = canonical_datum(&ad)?;
    let w = datum.dim_w();
    let n = t.rank;
    let q = datum.q();
    let p = datum.p();
    // QP = −ξ Id, so W = Im P ⊕ Ker Q and V′ = Coker P ≅ Ker Q.
    let kbasis = q.kernel_matrix();
    let n2 = kbasis.cols();
    debug_assert_eq!(n2 + n, w);
    let proj = &ExactMatrix::identity(w) + &(&p * &q).scale(&xi_inv);
    let q2 = if n2 == 0 { ExactMatrix::zeros(0, w) } else { kbasis.coordinates(&proj)? };
    let p2 = kbasis.scale(&xi);
    let off = datum.offsets();
    let mut poles = Vec::with_capacity(t.poles.len());
    for (i, dp) in datum.poles.iter().enumerate() {
        let r = dp.basis.cols();
        let qi = q2.submatrix(0, off[i], n2, r);
        let pi = p2.submatrix(off[i], 0, r, n2);
        let mut cur = pi;
        let mut coeffs = Vec::with_capacity(t.poles[i].len());
        for _ in 0..t.poles[i].len() {
            coeffs.push(&qi * &cur);
            cur = &dp.t * &cur;
        }
        poles.push(coeffs);
    }
    let mut out = MatrixTuple { rank: n2, poles };
    out = shift_pole(&out, 0, &[&xi + &xi]);
    for (i, qv) in terms.iter().enumerate() {
        let neg: Vec<GaussRat> = qv.iter().map(|c| -c).collect();
        out = shift_pole(&out, i, &neg);
    }

    let forms = data
        .poles
        .iter()
        .zip(&terms)
        .map(|(pole, qv)| shifted_form(pole, qv))
        .collect::<Result<Vec<_>>>()?;
    Ok(McOutput { tuple: out, dim_w: w, dim_w_predicted: dim_w_formula(&forms), xi })
}

/// Normal form of the pole after subtracting the scalar polynomial `qv`.
fn shifted_form(pole: &PoleData, qv: &[GaussRat]) -> Result<HtlForm> {
    let mut f = HtlForm::from_pole(pole)?;
    for b in f.blocks.iter_mut() {
        b.residue = b.residue.shift(&qv[0]);
        let len = b.q.len().max(qv.len().saturating_sub(1));
        b.q.resize(len, GaussRat::zero());
        for (d, c) in qv.iter().enumerate().skip(1) {
            b.q[d - 1] -= c;
        }
        while b.q.last().is_some_and(Zero::is_zero) {
            b.q.pop();
        }
    }
    HtlForm::new(f.order, f.blocks)
}

fn shift_residue(res: &ResidueSpec, c: &GaussRat) -> ResidueSpec {
    match res {
        ResidueSpec::Jordan(es) => ResidueSpec::Jordan(
            es.iter()
                .map(|e| JordanEntry { value: &e.value + c, blocks: e.blocks.clone() })
                .collect(),
        ),
        ResidueSpec::Matrix(m) => ResidueSpec::Matrix(m.shift(&-c)),
    }
}

/// The normal forms `(B′)⁽ⁱ⁾` and the sequences `ξ′` that `mc_𝐢` is
/// predicted to land in. A block whose new size is 0 is dropped.
pub fn predicted_forms(data: &SpectralData, idx: &MultiIndex, dim_w: usize) -> Result<Vec<PoleData>> {
    check_index(data, idx)?;
    let xi = xi_index(data, idx);
    let n = data.rank as i64;
    let two_xi = &xi + &xi;
    let mut out = Vec::with_capacity(data.poles.len());
    for (i, pole) in data.poles.iter().enumerate() {
        let ji = idx.0[i] - 1;
        let mut blocks = Vec::new();
        for (j, b) in pole.blocks.iter().enumerate() {
            if j != ji {
                let d = crate::spectral::d_value(b, &pole.blocks[ji]);
                let c = if i == 0 { d } else { d + 2 };
                let shift = &xi * &GaussRat::from_int(c);
                let new_xi: Vec<GaussRat> = b.xi.iter().map(|x| x + &shift).collect();
                blocks.push(IrregularBlock::new(b.q.clone(), b.size, shift_residue(&b.residue, &shift), Some(new_xi))?);
                continue;
            }
            let size = b.size as i64 + dim_w as i64 - 2 * n;
            if size < 0 {
                return Err(Error::Precondition(format!("predicted block [{i},{}] has negative size", j + 1)));
            }
            if size == 0 {
                continue;
            }
            let new_xi: Vec<GaussRat> = b
                .xi
                .iter()
                .enumerate()
                .map(|(k, x)| match (i == 0, k == 0) {
                    (false, true) => x.clone(),
                    (false, false) => x + &xi,
                    (true, true) => x - &two_xi,
                    (true, false) => x - &xi,
                })
                .collect();
            let ranks = b.ranks();
            let jordan = jordan_from_ranks(size as usize, &new_xi, &ranks)?;
            blocks.push(IrregularBlock::new(b.q.clone(), size as usize, ResidueSpec::Jordan(jordan), Some(new_xi))?);
        }
        out.push(PoleData { label: pole.label.clone(), order: pole.order, blocks });
    }
    Ok(out)
}

/// `α′` read off an `mc_𝐢` output and indexed by the vertices of the
/// original quiver: block sizes and leg ranks of the output's normal forms,
/// leg ranks taken along the predicted `ξ′`. Vertices whose block vanished
/// get 0.
pub fn output_alpha(inst: &QuiverInstance, out: &MatrixTuple, predicted: &[PoleData]) -> Result<DimVector> {
    let raw = super::raw_data(inst);
    let mut forms = Vec::with_capacity(out.poles.len());
    for (a, p) in out.poles.iter().zip(predicted) {
        let mut a = a.clone();
        a.resize(a.len().max(p.order), ExactMatrix::zeros(out.rank, out.rank));
        forms.push(htl_reduce(&a)?.0);
    }
    let mut alpha = Vec::with_capacity(inst.quiver.len());
    for v in inst.quiver.vertices() {
        let (i, j) = (v.pole(), v.block());
        let q = &raw.poles[i].blocks[j - 1].q;
        let Some(b) = forms[i].find(q).map(|x| &forms[i].blocks[x]) else {
            alpha.push(0);
            continue;
        };
        alpha.push(match *v {
            VertexId::Block { .. } => b.size() as i64,
            VertexId::Leg { k, .. } => {
                let pb = predicted[i].blocks.iter().find(|pb| pb.q == *q);
                let xi = pb.map(|pb| pb.xi.as_slice()).unwrap_or(&[]);
                rank_sequence(&b.residue, xi).get(k - 1).copied().unwrap_or(0) as i64
            }
        });
    }
    Ok(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrixops::{irreducible_test, orbit_member};
    use crate::numeric::gauss_parse;
    use crate::spectral::INFINITY;

    fn g(s: &str) -> GaussRat {
        gauss_parse(s).unwrap()
    }

    fn m(rows: &[&[i64]]) -> ExactMatrix {
        ExactMatrix::from_ints(rows)
    }

    /// Rank-2 Fuchsian tuple with three rank-one residues at finite poles
    /// and their negated sum at infinity.
    fn hypergeometric() -> (MatrixTuple, SpectralData) {
        let a1 = m(&[&[1, 0], &[1, 0]]);
        let a2 = m(&[&[0, 2], &[0, 1]]);
        let a3 = m(&[&[2, 1], &[0, 0]]);
        let a0 = -&(&(&a1 + &a2) + &a3);
        let t = MatrixTuple::new(2, vec![vec![a0.clone()], vec![a1.clone()], vec![a2.clone()], vec![a3.clone()]]).unwrap();
        let pole = |label: &str, a: &ExactMatrix, xi: Vec<GaussRat>| PoleData {
            label: label.into(),
            order: 1,
            blocks: vec![IrregularBlock::new(vec![], 2, ResidueSpec::Matrix(a.clone()), Some(xi)).unwrap()],
        };
        let data = SpectralData::new(2, vec![
            pole(INFINITY, &a0, vec![g("-4"), g("0")]),
            pole("a", &a1, vec![g("0"), g("1")]),
            pole("b", &a2, vec![g("0"), g("1")]),
            pole("c", &a3, vec![g("0"), g("2")]),
        ])
        .unwrap();
        (t, data)
    }

    #[test]
    fn residue_rank_one_poles_give_dim_w_three() {
        let (t, _) = hypergeometric();
        let rest = MatrixTuple::new(2, t.poles[1..].to_vec()).unwrap();
        let d = canonical_datum(&rest).unwrap();
        assert_eq!(d.dim_w(), 3);
        let forms: Vec<HtlForm> = rest
            .poles
            .iter()
            .map(|p| crate::matrixops::htl_reduce(p).unwrap().0)
            .collect();
        assert_eq!(dim_w_formula(&forms), 3);
        assert_eq!(&d.q() * &d.p(), rest.residue_sum());
    }

    #[test]
    fn datum_recovers_the_coefficients() {
        let a = vec![m(&[&[1, 2], &[0, 1]]), m(&[&[3, 0], &[0, 0]]), m(&[&[1, 0], &[0, 0]])];
        let t = MatrixTuple::new(2, vec![a.clone()]).unwrap();
        let d = canonical_datum(&t).unwrap();
        let p = &d.poles[0];
        let mut cur = p.p.clone();
        for aj in &a {
            assert_eq!(&p.q * &cur, *aj);
            cur = &p.t * &cur;
        }
    }

    #[test]
    fn hypergeometric_convolves_to_rank_one() {
        let (t, data) = hypergeometric();
        // ξ_𝐢 = −4 + 0 + 0 + 0
        let idx = MultiIndex(vec![1, 1, 1, 1]);
        let out = middle_convolution(&t, &data, &idx).unwrap();
        assert_eq!(out.xi, g("-4"));
        assert_eq!(out.dim_w, out.dim_w_predicted);
        assert_eq!(out.tuple.rank, out.dim_w - 2);
        assert!(out.tuple.residue_sum_is_zero());
        let pred = predicted_forms(&data, &idx, out.dim_w).unwrap();
        for (a, p) in out.tuple.poles.iter().zip(&pred) {
            assert!(orbit_member(a, p).unwrap());
        }
        assert!(irreducible_test(&t));
        assert!(irreducible_test(&out.tuple));
    }

    #[test]
    fn vanishing_xi_is_rejected() {
        let (t, mut data) = hypergeometric();
        data.poles[0].blocks[0].xi = vec![g("0"), g("-4")];
        let r = middle_convolution(&t, &data, &MultiIndex(vec![1, 1, 1, 1]));
        assert!(matches!(r, Err(Error::Precondition(_))));
    }
}
