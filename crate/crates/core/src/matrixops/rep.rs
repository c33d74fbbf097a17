//! Quiver representations attached to a tuple of principal parts, and the
//! inverse construction.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use super::gauge::GaugeElement;
use super::htl::{form_matches, htl_reduce, HtlForm};
use super::{irreducible_test, shift_pole, MatrixTuple};
use crate::builder::QuiverInstance;
use crate::error::{Error, Result};
use crate::numeric::{rank_sequence, ExactMatrix, GaussRat};
use crate::quiver::{Quiver, VertexId};
use crate::spectral::{PoleData, SpectralData};

/// `maps[a] = (ψ_a, ψ*_a)` for the `a`-th arrow `s → t` of the quiver, with
/// `ψ_a : V_s → V_t` and `ψ*_a : V_t → V_s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverRep {
    pub dims: Vec<usize>,
    pub maps: Vec<(ExactMatrix, ExactMatrix)>,
}

impl QuiverRep {
    pub fn check(&self, q: &Quiver) -> Result<()> {
        if self.dims.len() != q.len() || self.maps.len() != q.arrows().len() {
            return Err(Error::Dimension("representation does not fit the quiver".into()));
        }
        for (&(s, t), (psi, star)) in q.arrows().iter().zip(&self.maps) {
            let (ds, dt) = (self.dims[s], self.dims[t]);
            if psi.rows() != dt || psi.cols() != ds || star.rows() != ds || star.cols() != dt {
                return Err(Error::Dimension(format!("arrow {s}->{t} has maps of the wrong shape")));
            }
        }
        Ok(())
    }
}

/// `μ_v = Σ_{t(a)=v} ψ_a ψ*_a − Σ_{s(a)=v} ψ*_a ψ_a`.
pub fn moment_map(q: &Quiver, rep: &QuiverRep) -> Vec<ExactMatrix> {
    let mut mu: Vec<ExactMatrix> = rep.dims.iter().map(|&d| ExactMatrix::zeros(d, d)).collect();
    for (&(s, t), (psi, star)) in q.arrows().iter().zip(&rep.maps) {
        mu[t] = &mu[t] + &(psi * star);
        mu[s] = &mu[s] - &(star * psi);
    }
    mu
}

/// Pole data as the user gave it, with any scalar twist put back.
pub fn raw_pole(inst: &QuiverInstance, i: usize) -> PoleData {
    let mut p = inst.data.poles[i].clone();
    if let Some(tw) = inst.twists.iter().find(|t| t.pole == i) {
        p.order = tw.old_order;
        p.blocks[0].q = tw.q.clone();
    }
    p
}

pub fn raw_data(inst: &QuiverInstance) -> SpectralData {
    SpectralData { rank: inst.data.rank, poles: (0..inst.data.poles.len()).map(|i| raw_pole(inst, i)).collect() }
}

/// `x^{−j}` coefficients `[0, q_2, q_3, …]` of a twist.
fn twist_terms(q: &[GaussRat]) -> Vec<GaussRat> {
    let mut v = vec![GaussRat::zero()];
    v.extend(q.iter().cloned());
    v
}

/// Coordinates of the columns of `m` in the column basis `basis`, allowing
/// empty bases.
fn coords(basis: &ExactMatrix, m: &ExactMatrix) -> Result<ExactMatrix> {
    if basis.cols() == 0 || m.cols() == 0 {
        if !m.is_zero() {
            return Err(Error::Dimension("vector outside an empty subspace".into()));
        }
        return Ok(ExactMatrix::zeros(basis.cols(), m.cols()));
    }
    basis.coordinates(m)
}

/// The factorization of one irregular pole part around its normal form `B`:
/// `A = h₀ A° h₀⁻¹` with `A° = u₋ p₊ [B]`, and the data `Q^{[a]}`
/// (the coefficients of `u₋`) and `P^{[a]}` (the `𝔲⁺` part of `u₋⁻¹[A°]`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleFactorization {
    pub form: HtlForm,
    /// Instance block `j` (0-based) sits at position `perm[j]` of the form.
    pub perm: Vec<usize>,
    pub h0: ExactMatrix,
    /// `q[a−1] = Q^{[a]}`, `a = 1..k−2`.
    pub q: Vec<ExactMatrix>,
    /// `p[a−1] = P^{[a]}`, the coefficient of `x^{−a−1}`.
    pub p: Vec<ExactMatrix>,
    pub a_circ: Vec<ExactMatrix>,
}

impl PoleFactorization {
    /// `B_ll − A°_ll = −Σ_{s<l} Σ_a Q_{ls} P_{sl} + Σ_{s>l} Σ_a P_{ls} Q_{sl}`
    /// on the residue blocks.
    pub fn residue_identity_holds(&self) -> bool {
        let f = self.form.filtration();
        let m = self.form.blocks.len();
        (0..m).all(|l| {
            let lhs = &self.form.blocks[l].residue - &f.block(&self.a_circ[0], l, l);
            let mut rhs = ExactMatrix::zeros(f.sizes[l], f.sizes[l]);
            for (qa, pa) in self.q.iter().zip(&self.p) {
                for s in 0..m {
                    if s < l {
                        rhs = &rhs - &(&f.block(qa, l, s) * &f.block(pa, s, l));
                    } else if s > l {
                        rhs = &rhs + &(&f.block(pa, l, s) * &f.block(qa, s, l));
                    }
                }
            }
            lhs == rhs
        })
    }
}

pub fn pole_factorization(a: &[ExactMatrix], target: &PoleData) -> Result<PoleFactorization> {
    let (form, g) = htl_reduce(a)?;
    if !form_matches(&form, target) {
        return Err(Error::Precondition(format!("pole {} is not in the prescribed orbit", target.label)));
    }
    let perm = target
        .blocks
        .iter()
        .map(|b| form.find(&b.q).expect("matched form contains every block"))
        .collect();
    let k = form.order;
    let n = form.size();
    let h = g.inverse();
    let h0 = h.coeff(0).clone();
    let h0i = h0.inverse()?;
    let hp: Vec<ExactMatrix> = h.coeffs().iter().map(|c| &h0i * c).collect();
    let a_circ: Vec<ExactMatrix> = a.iter().map(|c| &(&h0i * c) * &h0).collect();
    let filt = form.filtration();

    let id = ExactMatrix::identity(n);
    let mut us = vec![id.clone()];
    let mut ps = vec![id];
    for l in 1..k {
        let mut rhs = hp[l].clone();
        for s in 1..l {
            rhs = &rhs - &(&us[s] * &ps[l - s]);
        }
        let u = filt.lower_part(l + 1, &rhs);
        ps.push(&rhs - &u);
        us.push(u);
    }
    let u_minus = GaugeElement::new(us.clone())?;
    let tilde = u_minus.inverse().act(&a_circ);
    let levels = k.saturating_sub(2);
    let p: Vec<ExactMatrix> = (1..=levels).map(|l| filt.upper_part(l + 1, &tilde[l])).collect();
    let series = form.series();
    for j in 2..=k {
        let mut want = series[j - 1].clone();
        if j - 1 <= levels {
            want = &want + &p[j - 2];
        }
        if tilde[j - 1] != want {
            return Err(Error::Precondition(format!("pole {}: u₋ factorization failed", target.label)));
        }
    }
    Ok(PoleFactorization { form, perm, h0, q: us[1..=levels].to_vec(), p, a_circ })
}

/// Flag `E_k = Im Π_{l≤k}(X − ξ_l)` with the leg maps: entry `k−1` is
/// `(ψ, ψ*)` for the arrow `k → k−1`, `E_0` the whole space.
fn leg_maps(x: &ExactMatrix, xi: &[GaussRat], ranks: &[usize]) -> Result<Vec<(ExactMatrix, ExactMatrix)>> {
    let n = x.rows();
    let mut prev = ExactMatrix::identity(n);
    let mut prod = ExactMatrix::identity(n);
    let mut out = Vec::new();
    for k in 1..xi.len() {
        let step = x.shift(&xi[k - 1]);
        prod = &prod * &step;
        let e = prod.column_basis();
        if e.cols() != ranks[k - 1] {
            return Err(Error::Precondition("residue rank sequence does not match the leg".into()));
        }
        let psi = coords(&prev, &e)?;
        let star = coords(&e, &(&step * &prev))?;
        out.push((psi, star));
        prev = e;
    }
    Ok(out)
}

struct Prepared {
    tuple: MatrixTuple,
    facts: Vec<Option<PoleFactorization>>,
}

/// Removes the twists, factors every irregular pole, and moves to the frame
/// in which pole 0 is block diagonal.
fn prepare(inst: &QuiverInstance, t: &MatrixTuple) -> Result<Prepared> {
    let n = inst.data.rank;
    if t.rank != n || t.poles.len() != inst.data.poles.len() {
        return Err(Error::Dimension("tuple does not match the instance".into()));
    }
    if !t.residue_sum_is_zero() {
        return Err(Error::Precondition("residues do not sum to zero".into()));
    }
    let mut tuple = t.clone();
    for tw in &inst.twists {
        tuple = shift_pole(&tuple, tw.pole, &twist_terms(&tw.q));
        let p = &mut tuple.poles[tw.pole];
        if p[1..].iter().any(|c| !c.is_zero()) {
            return Err(Error::Precondition(format!("pole {} is not in the prescribed orbit", tw.pole)));
        }
        p.truncate(1);
    }
    let mut facts = vec![None; tuple.poles.len()];
    for (i, pole) in inst.data.poles.iter().enumerate() {
        let a = &mut tuple.poles[i];
        if a.len() < pole.order {
            a.resize(pole.order, ExactMatrix::zeros(n, n));
        }
        if inst.irr.contains(&i) {
            facts[i] = Some(pole_factorization(a, pole)?);
        } else {
            if a.len() > 1 && a[1..].iter().any(|c| !c.is_zero()) {
                return Err(Error::Precondition(format!("pole {i} is not in the prescribed orbit")));
            }
            a.truncate(1);
            let b = &pole.blocks[0];
            if rank_sequence(&a[0], &b.xi) != b.ranks() {
                return Err(Error::Precondition(format!("pole {i} is not in the prescribed orbit")));
            }
        }
    }
    let s = facts[0].as_ref().expect("pole 0 is irregular").h0.clone();
    let si = s.inverse()?;
    let tuple = tuple.conjugate(&s)?;
    for f in facts.iter_mut().flatten() {
        f.h0 = &si * &f.h0;
    }
    Ok(Prepared { tuple, facts })
}

fn offsets(sizes: &[usize]) -> Vec<usize> {
    let mut off = vec![0];
    for s in sizes {
        off.push(off.last().expect("nonempty") + s);
    }
    off
}

/// `ℳ(A)`: the representation of the instance quiver attached to a tuple in
/// the prescribed orbits. Its moment map is `λ` at every vertex.
pub fn to_quiver_rep(inst: &QuiverInstance, t: &MatrixTuple) -> Result<QuiverRep> {
    let Prepared { tuple, facts } = prepare(inst, t)?;
    let q = &inst.quiver;
    let verts = q.vertices();
    let f0 = facts[0].as_ref().expect("pole 0 is irregular");
    let off0 = offsets(&f0.form.sizes());

    // legs, keyed by (pole, block)
    let mut legs: BTreeMap<(usize, usize), Vec<(ExactMatrix, ExactMatrix)>> = BTreeMap::new();
    for (i, pole) in inst.data.poles.iter().enumerate() {
        for (j, b) in pole.blocks.iter().enumerate() {
            if b.e() < 2 {
                continue;
            }
            let x = match &facts[i] {
                Some(f) => f.form.blocks[f.perm[j]].residue.clone(),
                None => tuple.poles[i][0].clone(),
            };
            legs.insert((i, j + 1), leg_maps(&x, &b.xi, &b.ranks())?);
        }
    }

    let mut copies: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut maps = Vec::with_capacity(q.arrows().len());
    for &(s, t) in q.arrows() {
        let m = match (verts[s], verts[t]) {
            (VertexId::Block { pole: 0, block: j }, VertexId::Block { pole: i, block: jp }) if i != 0 => {
                let f = facts[i].as_ref().expect("irregular pole");
                let offi = offsets(&f.form.sizes());
                let (r, c) = (f.perm[jp - 1], f0.perm[j - 1]);
                let h0i = f.h0.inverse()?;
                let psi = h0i.submatrix(offi[r], off0[c], offi[r + 1] - offi[r], off0[c + 1] - off0[c]);
                let ah = -&(&tuple.poles[i][0] * &f.h0);
                let star = ah.submatrix(off0[c], offi[r], off0[c + 1] - off0[c], offi[r + 1] - offi[r]);
                (psi, star)
            }
            (VertexId::Block { pole: i, block: j }, VertexId::Block { pole: ip, block: jp }) if i == ip => {
                let a = {
                    let c = copies.entry((s, t)).or_insert(0);
                    *c += 1;
                    *c
                };
                let f = facts[i].as_ref().expect("irregular pole");
                let filt = f.form.filtration();
                let (sp, tp) = (f.perm[j - 1], f.perm[jp - 1]);
                let (qa, pa) = (&f.q[a - 1], &f.p[a - 1]);
                if sp < tp {
                    (filt.block(qa, tp, sp), filt.block(pa, sp, tp))
                } else {
                    (filt.block(pa, tp, sp), -&filt.block(qa, sp, tp))
                }
            }
            (VertexId::Leg { pole: i, block: j, k: 1 }, VertexId::Block { pole: 0, block: j0 }) if !inst.irr.contains(&i) => {
                let (psi, star) = &legs[&(i, j)][0];
                let c = f0.perm[j0 - 1];
                let w = off0[c + 1] - off0[c];
                (psi.submatrix(off0[c], 0, w, psi.cols()), star.submatrix(0, off0[c], star.rows(), w))
            }
            (VertexId::Leg { pole, block, k }, _) => legs[&(pole, block)][k - 1].clone(),
            _ => return Err(Error::InvalidInstance("unexpected arrow in the instance quiver".into())),
        };
        maps.push(m);
    }
    let dims = inst.alpha.iter().map(|&a| a as usize).collect();
    let rep = QuiverRep { dims, maps };
    rep.check(q)?;
    Ok(rep)
}

/// Reconstructs a tuple from a representation: the inverse of
/// [`to_quiver_rep`] up to a constant change of frame.
pub fn from_quiver_rep(inst: &QuiverInstance, rep: &QuiverRep) -> Result<MatrixTuple> {
    let q = &inst.quiver;
    rep.check(q)?;
    let n = inst.data.rank;
    let verts = q.vertices();
    let poles = &inst.data.poles;

    let forms: Vec<HtlForm> = poles.iter().map(HtlForm::from_pole).collect::<Result<_>>()?;
    let perms: Vec<Vec<usize>> = poles
        .iter()
        .zip(&forms)
        .map(|(p, f)| p.blocks.iter().map(|b| f.find(&b.q).expect("own block")).collect())
        .collect();
    let offs: Vec<Vec<usize>> = forms.iter().map(|f| offsets(&f.sizes())).collect();

    // residues R = ξ₁ + ψψ* from the first leg arrow
    let mut residues: Vec<Vec<ExactMatrix>> = poles
        .iter()
        .zip(&perms)
        .map(|(p, perm)| {
            let mut r = vec![ExactMatrix::zeros(0, 0); p.blocks.len()];
            for (j, b) in p.blocks.iter().enumerate() {
                r[perm[j]] = ExactMatrix::scalar(b.size, &b.xi[0]);
            }
            r
        })
        .collect();
    let mut reg_res: BTreeMap<usize, (Vec<ExactMatrix>, Vec<ExactMatrix>)> = BTreeMap::new();
    let mut big_g: BTreeMap<usize, (ExactMatrix, ExactMatrix)> = BTreeMap::new();
    let mut internal: BTreeMap<usize, (Vec<ExactMatrix>, Vec<ExactMatrix>)> = BTreeMap::new();
    for &i in &inst.irr {
        let k = forms[i].order;
        let z = ExactMatrix::zeros(n, n);
        internal.insert(i, (vec![z.clone(); k.saturating_sub(2)], vec![z; k.saturating_sub(2)]));
        if i != 0 {
            big_g.insert(i, (ExactMatrix::zeros(n, n), ExactMatrix::zeros(n, n)));
        }
    }
    let mut copies: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (&(s, t), (psi, star)) in q.arrows().iter().zip(&rep.maps) {
        match (verts[s], verts[t]) {
            (VertexId::Block { pole: 0, block: j }, VertexId::Block { pole: i, block: jp }) if i != 0 => {
                let (r, c) = (perms[i][jp - 1], perms[0][j - 1]);
                let (g, gs) = big_g.get_mut(&i).expect("irregular pole");
                g.set_submatrix(offs[i][r], offs[0][c], psi);
                gs.set_submatrix(offs[0][c], offs[i][r], star);
            }
            (VertexId::Block { pole: i, block: j }, VertexId::Block { pole: ip, block: jp }) if i == ip => {
                let a = {
                    let c = copies.entry((s, t)).or_insert(0);
                    *c += 1;
                    *c
                };
                let (sp, tp) = (perms[i][j - 1], perms[i][jp - 1]);
                let (qs, ps) = internal.get_mut(&i).expect("irregular pole");
                let o = &offs[i];
                if sp < tp {
                    qs[a - 1].set_submatrix(o[tp], o[sp], psi);
                    ps[a - 1].set_submatrix(o[sp], o[tp], star);
                } else {
                    ps[a - 1].set_submatrix(o[tp], o[sp], psi);
                    qs[a - 1].set_submatrix(o[sp], o[tp], &-star);
                }
            }
            (VertexId::Leg { pole: i, block: j, k: 1 }, VertexId::Block { pole: 0, block: j0 }) if !inst.irr.contains(&i) => {
                let entry = reg_res.entry(i).or_insert_with(|| {
                    let m0 = poles[0].blocks.len();
                    (vec![ExactMatrix::zeros(0, 0); m0], vec![ExactMatrix::zeros(0, 0); m0])
                });
                let c = perms[0][j0 - 1];
                entry.0[c] = psi.clone();
                entry.1[c] = star.clone();
                let _ = j;
            }
            (VertexId::Leg { pole: i, block: j, k: 1 }, VertexId::Block { .. }) => {
                let b = &poles[i].blocks[j - 1];
                residues[i][perms[i][j - 1]] = (psi * star).shift(&-&b.xi[0]);
            }
            _ => {}
        }
    }

    let mut out: Vec<Vec<ExactMatrix>> = vec![Vec::new(); poles.len()];
    let mut res_sum = ExactMatrix::zeros(n, n);
    for &i in &inst.irr {
        let f = &forms[i];
        let k = f.order;
        let mut form = f.clone();
        for (b, r) in form.blocks.iter_mut().zip(&residues[i]) {
            b.residue = r.clone();
        }
        let series = form.series();
        let (qs, ps) = &internal[&i];
        let mut us = vec![ExactMatrix::identity(n)];
        us.extend(qs.iter().cloned());
        us.resize(k, ExactMatrix::zeros(n, n));
        let u_minus = GaugeElement::new(us)?;
        let mut tilde = vec![ExactMatrix::zeros(n, n)];
        for j in 2..=k {
            let mut c = series[j - 1].clone();
            if let Some(p) = ps.get(j - 2) {
                c = &c + p;
            }
            tilde.push(c);
        }
        let a_circ = u_minus.act(&tilde);
        if i == 0 {
            out[0] = a_circ;
            continue;
        }
        let (g, gs) = &big_g[&i];
        let gi = g.inverse()?;
        let mut coeffs = vec![-&(gs * g)];
        coeffs.extend(a_circ[1..].iter().map(|c| &(&gi * c) * g));
        res_sum = &res_sum + &coeffs[0];
        out[i] = coeffs;
    }
    for &i in &inst.reg {
        let b = &poles[i].blocks[0];
        let mut a1 = ExactMatrix::scalar(n, &b.xi[0]);
        if let Some((psis, stars)) = reg_res.get(&i) {
            let ps: Vec<&ExactMatrix> = psis.iter().collect();
            let ss: Vec<&ExactMatrix> = stars.iter().collect();
            a1 = &a1 + &(&ExactMatrix::vstack(&ps)? * &ExactMatrix::hstack(&ss)?);
        }
        res_sum = &res_sum + &a1;
        out[i] = vec![a1];
    }
    out[0][0] = -&res_sum;
    let mut tuple = MatrixTuple::new(n, out)?;
    for tw in &inst.twists {
        let neg: Vec<GaussRat> = twist_terms(&tw.q).iter().map(|c| -c).collect();
        tuple = shift_pole(&tuple, tw.pole, &neg);
        tuple.poles[tw.pole].resize(tw.old_order, ExactMatrix::zeros(n, n));
    }
    Ok(tuple)
}

/// Irreducibility of the tuple a representation comes from.
pub fn quasi_irreducible(inst: &QuiverInstance, rep: &QuiverRep) -> Result<bool> {
    Ok(irreducible_test(&from_quiver_rep(inst, rep)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::build_instance;
    use crate::numeric::gauss_parse;
    use crate::spectral::{IrregularBlock, ResidueSpec, INFINITY};

    fn g(s: &str) -> GaussRat {
        gauss_parse(s).unwrap()
    }

    fn m(rows: &[&[i64]]) -> ExactMatrix {
        ExactMatrix::from_ints(rows)
    }

    fn block(q: &[&str], r: ExactMatrix) -> IrregularBlock {
        let size = r.rows();
        IrregularBlock::new(q.iter().map(|s| g(s)).collect(), size, ResidueSpec::Matrix(r), None).unwrap()
    }

    /// Pole 0 of order 3 with three 1×1 blocks, one finite irregular pole of
    /// order 2, one regular pole; a random-looking conjugate of each.
    fn example() -> (QuiverInstance, MatrixTuple) {
        // pole 1: diag(1,1,-1)x⁻² + R x⁻¹, conjugated
        let r1 = m(&[&[0, 1], &[0, 0]]);
        let b1 = HtlForm::new(2, vec![
            super::super::htl::HtlBlock { q: vec![g("1")], residue: r1.clone() },
            super::super::htl::HtlBlock { q: vec![g("-1")], residue: m(&[&[2]]) },
        ])
        .unwrap();
        let gauge1 = GaugeElement::new(vec![m(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 2]]), m(&[&[0, 1, 0], &[2, 0, 0], &[0, 0, 1]])]).unwrap();
        let a1 = gauge1.act(&b1.series());
        // regular pole: rank-one residue
        let a2 = m(&[&[1, 0, 1], &[0, 0, 0], &[1, 0, 1]]);
        // pole 0: blocks c₃ ∈ {0, 1, 2}, c₂ ∈ {1, 0, 0}
        let h0 = m(&[&[1, 0, 1], &[1, 1, 0], &[0, 1, 1]]);
        let g0 = GaugeElement::new(vec![h0, m(&[&[0, 0, 1], &[1, 0, 0], &[0, 3, 0]]), m(&[&[1, 1, 1], &[0, 0, 0], &[0, 0, 0]])]).unwrap();
        let irr0 = vec![
            ExactMatrix::zeros(3, 3),
            ExactMatrix::diagonal(&[g("1"), g("0"), g("0")]),
            ExactMatrix::diagonal(&[g("0"), g("1"), g("2")]),
        ];
        let mut a0 = g0.act(&irr0);
        a0[0] = -&(&a1[0] + &a2);
        let t = MatrixTuple::new(3, vec![a0.clone(), a1.clone(), vec![a2.clone()]]).unwrap();
        let (f0, _) = htl_reduce(&a0).unwrap();
        let p0 = f0.to_pole_data(INFINITY).unwrap();
        let p1 = b1.to_pole_data("1").unwrap();
        let p2 = PoleData { label: "0".into(), order: 1, blocks: vec![block(&[], a2)] };
        let data = SpectralData::new(3, vec![p0, p1, p2]).unwrap();
        (build_instance(&data).unwrap(), t)
    }

    #[test]
    fn moment_map_is_lambda() {
        let (inst, t) = example();
        let rep = to_quiver_rep(&inst, &t).unwrap();
        let mu = moment_map(&inst.quiver, &rep);
        for (v, mv) in mu.iter().enumerate() {
            assert_eq!(*mv, ExactMatrix::scalar(rep.dims[v], &inst.lambda[v]), "vertex {}", inst.quiver.vertices()[v]);
        }
    }

    #[test]
    fn factorization_satisfies_the_residue_identity() {
        let (inst, t) = example();
        for &i in &inst.irr {
            let f = pole_factorization(&t.poles[i], &inst.data.poles[i]).unwrap();
            assert!(f.residue_identity_holds());
        }
    }

    #[test]
    fn inverse_recovers_the_framed_tuple() {
        let (inst, t) = example();
        let rep = to_quiver_rep(&inst, &t).unwrap();
        let back = from_quiver_rep(&inst, &rep).unwrap();
        let s = pole_factorization(&t.poles[0], &inst.data.poles[0]).unwrap().h0;
        assert_eq!(back, t.conjugate(&s).unwrap());
        assert_eq!(quasi_irreducible(&inst, &rep).unwrap(), irreducible_test(&t));
    }

    #[test]
    fn tuple_outside_the_orbit_is_rejected() {
        let (inst, mut t) = example();
        t.poles[2][0] = &t.poles[2][0] + &ExactMatrix::identity(3);
        t.poles[0][0] = &t.poles[0][0] - &ExactMatrix::identity(3);
        assert!(matches!(to_quiver_rep(&inst, &t), Err(Error::Precondition(_))));
    }
}
