//! Matrix-level side of the correspondence: tuples of principal parts,
//! gauge reduction, irreducibility, additions, middle convolution, and the
//! map to quiver representations.

mod gauge;
mod htl;
mod mc;
mod rep;

pub use gauge::GaugeElement;
pub use htl::{form_matches, htl_reduce, orbit_member, BlockFiltration, HtlBlock, HtlForm};
pub use mc::{
    canonical_datum, dim_w_formula, middle_convolution, n_index, output_alpha, predicted_forms, xi_index, CanonicalDatum, DatumPole, McOutput,
};
pub use rep::{
    from_quiver_rep, moment_map, pole_factorization, quasi_irreducible, raw_data, raw_pole, to_quiver_rep, PoleFactorization,
    QuiverRep,
};

use alloc::format;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::numeric::{ExactMatrix, GaussRat};

/// Principal parts `(A⁽ⁱ⁾_1, …, A⁽ⁱ⁾_{k_i})` at every pole; `poles[i][j−1]`
/// is the coefficient of `x^{−j}` at pole `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixTuple {
    pub rank: usize,
    pub poles: Vec<Vec<ExactMatrix>>,
}

impl MatrixTuple {
    /// Checks shapes only; the residue sum is reported separately.
    pub fn new(rank: usize, poles: Vec<Vec<ExactMatrix>>) -> Result<Self> {
        for (i, p) in poles.iter().enumerate() {
            if p.is_empty() {
                return Err(Error::Dimension(format!("pole {i} has no coefficients")));
            }
            if p.iter().any(|m| m.rows() != rank || m.cols() != rank) {
                return Err(Error::Dimension(format!("pole {i}: coefficients must be {rank}×{rank}")));
            }
        }
        Ok(MatrixTuple { rank, poles })
    }

    pub fn residue_sum(&self) -> ExactMatrix {
        let mut s = ExactMatrix::zeros(self.rank, self.rank);
        for p in &self.poles {
            s = &s + &p[0];
        }
        s
    }

    pub fn residue_sum_is_zero(&self) -> bool {
        self.residue_sum().is_zero()
    }

    /// Conjugates every coefficient: `A ↦ S⁻¹ A S`.
    pub fn conjugate(&self, s: &ExactMatrix) -> Result<Self> {
        let si = s.inverse()?;
        let poles = self
            .poles
            .iter()
            .map(|p| p.iter().map(|a| &(&si * a) * s).collect())
            .collect();
        Ok(MatrixTuple { rank: self.rank, poles })
    }

    fn generators(&self) -> impl Iterator<Item = &ExactMatrix> {
        self.poles.iter().flatten()
    }
}

/// Incremental row-reduced basis of a subspace of `GaussRat^d`.
struct SpanBuilder {
    rows: Vec<(usize, Vec<GaussRat>)>,
}

impl SpanBuilder {
    fn new() -> Self {
        SpanBuilder { rows: Vec::new() }
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Inserts `v` if it is independent of the current span.
    fn insert(&mut self, mut v: Vec<GaussRat>) -> bool {
        for (p, r) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, y) in v.iter_mut().zip(r) {
                if !y.is_zero() {
                    *x -= &(&f * y);
                }
            }
        }
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].inv().expect("nonzero pivot");
        for x in v.iter_mut() {
            *x = &*x * &inv;
        }
        for (_, r) in self.rows.iter_mut() {
            if r[p].is_zero() {
                continue;
            }
            let f = r[p].clone();
            for (x, y) in r.iter_mut().zip(&v) {
                if !y.is_zero() {
                    *x -= &(&f * y);
                }
            }
        }
        self.rows.push((p, v));
        true
    }
}

/// Burnside test: the tuple is irreducible iff the unital algebra generated
/// by all of its coefficients is the full matrix algebra.
pub fn irreducible_test(t: &MatrixTuple) -> bool {
    algebra_dimension(t.rank, t.generators()) == t.rank * t.rank
}

/// Dimension of the unital algebra generated by `gens`.
pub fn algebra_dimension<'a>(n: usize, gens: impl Iterator<Item = &'a ExactMatrix>) -> usize {
    if n == 0 {
        return 0;
    }
    // keep only linearly independent generators
    let mut gen_span = SpanBuilder::new();
    gen_span.insert(ExactMatrix::identity(n).vec_cols());
    let mut basis_gens = Vec::new();
    for g in gens {
        if gen_span.insert(g.vec_cols()) {
            basis_gens.push(g.clone());
        }
    }
    let mut span = SpanBuilder::new();
    let mut elems = Vec::new();
    let id = ExactMatrix::identity(n);
    span.insert(id.vec_cols());
    elems.push(id);
    let mut head = 0;
    while head < elems.len() && span.dim() < n * n {
        let e = elems[head].clone();
        head += 1;
        for g in &basis_gens {
            let p = g * &e;
            if span.insert(p.vec_cols()) {
                elems.push(p);
            }
        }
    }
    span.dim()
}

/// Subtracts the scalar polynomial `q(x⁻¹) = Σ q_j x^{−j}` (`q[j−1]` the
/// coefficient of `x^{−j}`) at `pole`. A nonzero residue term breaks the
/// residue sum unless `compensate` adds it back at pole 0.
pub fn addition_op(t: &MatrixTuple, pole: usize, q: &[GaussRat], compensate: bool) -> Result<MatrixTuple> {
    if pole >= t.poles.len() {
        return Err(Error::Precondition(format!("pole {pole} out of range")));
    }
    let res = q.first().cloned().unwrap_or_else(GaussRat::zero);
    if !res.is_zero() && (!compensate || pole == 0) {
        return Err(Error::Precondition("addition with a residue term breaks the residue sum".into()));
    }
    let mut out = shift_pole(t, pole, q);
    if compensate && !res.is_zero() {
        out = shift_pole(&out, 0, &[-res]);
    }
    Ok(out)
}

/// Raw `A ↦ A − q` at one pole, padding the order upward as needed.
pub(crate) fn shift_pole(t: &MatrixTuple, pole: usize, q: &[GaussRat]) -> MatrixTuple {
    let n = t.rank;
    let mut out = t.clone();
    let p = &mut out.poles[pole];
    if p.len() < q.len() {
        p.resize(q.len(), ExactMatrix::zeros(n, n));
    }
    for (j, c) in q.iter().enumerate() {
        if !c.is_zero() {
            p[j] = p[j].shift(c);
        }
    }
    out
}
