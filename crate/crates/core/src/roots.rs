//! Root classification for loop-free quivers, constrained enumeration of
//! positive roots in `ℒ`, and the quasi-fundamental set.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::builder::QuiverInstance;
use crate::error::{Error, Result};
use crate::numeric::GaussRat;
use crate::quiver::{dot, reflect_dim, DimVector, Quiver};

pub use crate::lift::{classify_tame, lift_xi, xi_map, DiagramTag, Generator, LiftElement};

/// Default limit on the number of lattice points scanned by
/// [`enum_constrained_roots`].
pub const DEFAULT_BOX_CAP: u64 = 20_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootKind {
    Real,
    Imaginary,
    NotRoot,
}

/// Outcome of [`is_root`]. For roots, `descent` lists the vertices
/// `a₁, …, a_m` reflected in order, so that
/// `β = ±s_{a₁} ⋯ s_{a_m}(terminal)`; `terminal` is a unit vector for real
/// roots and a member of `F` for imaginary ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootClass {
    pub kind: RootKind,
    pub descent: Vec<usize>,
    pub terminal: DimVector,
    pub negated: bool,
}

impl RootClass {
    fn not_root(beta: &[i64]) -> Self {
        RootClass { kind: RootKind::NotRoot, descent: Vec::new(), terminal: beta.to_vec(), negated: false }
    }

    pub fn is_root(&self) -> bool {
        self.kind != RootKind::NotRoot
    }

    /// Rebuilds the classified vector from the witness.
    pub fn replay(&self, q: &Quiver) -> DimVector {
        let mut v = self.terminal.clone();
        for &a in self.descent.iter().rev() {
            v = reflect_dim(q, &v, a);
        }
        if self.negated {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        v
    }
}

/// `(β, ε_a) ≤ 0` for every vertex and connected support.
pub fn in_fundamental_set(q: &Quiver, beta: &[i64]) -> bool {
    beta.iter().all(|&b| b >= 0)
        && q.support_connected(beta)
        && (0..q.len()).all(|a| q.pair_unit(beta, a) <= 0)
}

/// Kac's descent: reflect at a vertex with positive pairing until a simple
/// root, a member of `F`, or a vector that cannot be a root is reached.
pub fn is_root(q: &Quiver, beta: &[i64]) -> RootClass {
    let pos = beta.iter().all(|&b| b >= 0);
    let neg = beta.iter().all(|&b| b <= 0);
    if (!pos && !neg) || beta.iter().all(|&b| b == 0) {
        return RootClass::not_root(beta);
    }
    let mut v: DimVector = if pos { beta.to_vec() } else { beta.iter().map(|b| -b).collect() };
    let cap = 10 * v.iter().sum::<i64>() as usize + 1;
    let mut descent = Vec::new();
    loop {
        if !q.support_connected(&v) {
            return RootClass::not_root(beta);
        }
        if v.iter().sum::<i64>() == 1 {
            return RootClass { kind: RootKind::Real, descent, terminal: v, negated: neg };
        }
        let Some(a) = (0..q.len()).find(|&a| q.pair_unit(&v, a) > 0) else {
            return RootClass { kind: RootKind::Imaginary, descent, terminal: v, negated: neg };
        };
        v = reflect_dim(q, &v, a);
        descent.push(a);
        if v[a] < 0 {
            return RootClass::not_root(beta);
        }
        assert!(descent.len() <= cap, "root descent exceeded {cap} steps");
    }
}

/// `β·λ` over a common denominator. Real and imaginary parts of `λ` are
/// scaled to integers; `i128` arithmetic is used when the scaled values
/// are small enough for the box at hand.
enum Functional {
    Small { re: Vec<i128>, im: Vec<i128> },
    Big(Vec<GaussRat>),
}

impl Functional {
    fn new(lam: &[GaussRat], bound: &[i64]) -> Self {
        let mut den = BigInt::one();
        for l in lam {
            den = den.lcm(&l.denom_lcm());
        }
        let scale = |r: &num_rational::BigRational| (r * &den).to_integer();
        let re: Vec<BigInt> = lam.iter().map(|l| scale(&l.re)).collect();
        let im: Vec<BigInt> = lam.iter().map(|l| scale(&l.im)).collect();
        let reach: BigInt = bound.iter().map(|&b| BigInt::from(b.max(0))).sum::<BigInt>() + 1;
        let limit = BigInt::from(i64::MAX);
        let small = |xs: &[BigInt]| xs.iter().all(|x| &(x.abs() * &reach) < &limit);
        if small(&re) && small(&im) {
            let cv = |xs: &[BigInt]| xs.iter().map(|x| x.to_i128().expect("checked")).collect();
            Functional::Small { re: cv(&re), im: cv(&im) }
        } else {
            Functional::Big(lam.to_vec())
        }
    }
}

/// All `β` with `0 < β ≤ bound`, `β ∈ ℒ`, `β·λ = 0` that are roots, in
/// lexicographic order of coordinates.
pub fn enum_constrained_roots(
    inst: &QuiverInstance,
    bound: &[i64],
    lam: &[GaussRat],
    cap: u64,
) -> Result<Vec<DimVector>> {
    enum_orthogonal_roots(&inst.quiver, bound, lam, cap, |b| inst.lattice_member(b))
}

/// Positive roots `β ≤ bound` with `β·λ = 0` accepted by `keep`, in
/// lexicographic order.
pub fn enum_orthogonal_roots(
    q: &Quiver,
    bound: &[i64],
    lam: &[GaussRat],
    cap: u64,
    keep: impl Fn(&[i64]) -> bool,
) -> Result<Vec<DimVector>> {
    let n = q.len();
    if bound.len() != n || lam.len() != n {
        return Err(Error::Dimension("bound or parameter does not match the quiver".into()));
    }
    if bound.iter().any(|&b| b < 0) {
        return Err(Error::Precondition("bound must be non-negative".into()));
    }
    let mut volume: u64 = 1;
    for &b in bound {
        volume = volume.saturating_mul(b as u64 + 1);
    }
    if volume > cap {
        return Err(Error::CapExceeded { cap });
    }
    let f = Functional::new(lam, bound);
    let mut out = Vec::new();
    let mut beta = vec![0i64; n];
    let (mut acc_re, mut acc_im) = (0i128, 0i128);
    // Odometer with the last coordinate spinning fastest.
    loop {
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            if beta[k] < bound[k] {
                beta[k] += 1;
                if let Functional::Small { re, im } = &f {
                    acc_re += re[k];
                    acc_im += im[k];
                }
                break;
            }
            if let Functional::Small { re, im } = &f {
                acc_re -= re[k] * beta[k] as i128;
                acc_im -= im[k] * beta[k] as i128;
            }
            beta[k] = 0;
        }
        let orthogonal = match &f {
            Functional::Small { .. } => acc_re == 0 && acc_im == 0,
            Functional::Big(l) => dot(&beta, l).is_zero(),
        };
        if orthogonal && keep(&beta) && is_root(q, &beta).is_root() {
            out.push(beta.clone());
        }
    }
}

/// `max_{𝐢 ∈ 𝒥} (β, ε_𝐢)`. The pairing is additive over irregular poles, so
/// the maximum splits into one maximum per pole.
pub fn max_composite_pairing(inst: &QuiverInstance, beta: &[i64]) -> i64 {
    inst.irr
        .iter()
        .map(|&i| {
            (1..=inst.block_count(i))
                .map(|j| inst.quiver.pair_unit(beta, inst.block_vertex(i, j).expect("irregular pole")))
                .max()
                .expect("at least one block")
        })
        .sum()
}

/// Membership in the quasi-fundamental set `F̃`.
pub fn quasi_fundamental_test(inst: &QuiverInstance, beta: &[i64]) -> bool {
    if beta.len() != inst.quiver.len()
        || beta.iter().any(|&b| b < 0)
        || beta.iter().all(|&b| b == 0)
        || !inst.lattice_member(beta)
        || !inst.quiver.support_connected(beta)
    {
        return false;
    }
    let legs_ok = inst
        .quiver
        .vertices()
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_leg())
        .all(|(a, _)| inst.quiver.pair_unit(beta, a) <= 0);
    legs_ok && max_composite_pairing(inst, beta) <= 0
}

/// Members of `F̃` inside the box `0 ≤ β ≤ bound`.
pub fn enum_quasi_fundamental(inst: &QuiverInstance, bound: &[i64], cap: u64) -> Result<Vec<DimVector>> {
    let mut volume: u64 = 1;
    for &b in bound {
        volume = volume.saturating_mul(b.max(0) as u64 + 1);
    }
    if volume > cap {
        return Err(Error::CapExceeded { cap });
    }
    let n = bound.len();
    let mut out = Vec::new();
    let mut beta = vec![0i64; n];
    loop {
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            if beta[k] < bound[k] {
                beta[k] += 1;
                break;
            }
            beta[k] = 0;
        }
        if quasi_fundamental_test(inst, &beta) {
            out.push(beta.clone());
        }
    }
}

/// `p(β)` as a signed integer; convenient for sorting.
pub fn p_value(q: &Quiver, beta: &[i64]) -> i64 {
    crate::quiver::tits(q, beta).1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::build_instance;
    use crate::numeric::gauss_parse;
    use crate::quiver::VertexId;
    use crate::spectral::{IrregularBlock, JordanEntry, PoleData, ResidueSpec, SpectralData, INFINITY};

    fn star(legs: usize) -> Quiver {
        let mut v = vec![VertexId::Block { pole: 0, block: 1 }];
        let mut arrows = Vec::new();
        for i in 0..legs {
            v.push(VertexId::Leg { pole: i, block: 1, k: 1 });
            arrows.push((i + 1, 0));
        }
        Quiver::new(v, arrows)
    }

    #[test]
    fn simple_roots_are_real() {
        let q = star(4);
        for a in 0..5 {
            let c = is_root(&q, &q.unit(a));
            assert_eq!(c.kind, RootKind::Real);
            assert!(c.descent.is_empty());
        }
    }

    #[test]
    fn affine_d4_null_root_is_imaginary() {
        let q = star(4);
        let delta = [2, 1, 1, 1, 1];
        for a in 0..5 {
            assert!(q.pair_unit(&delta, a) <= 0);
        }
        let c = is_root(&q, &delta);
        assert_eq!(c.kind, RootKind::Imaginary);
        assert_eq!(c.terminal, delta.to_vec());
        assert_eq!(is_root(&q, &[-2, -1, -1, -1, -1]).kind, RootKind::Imaginary);
    }

    #[test]
    fn disconnected_and_mixed_vectors_are_not_roots() {
        let q = star(4);
        assert_eq!(is_root(&q, &[0, 1, 0, 0, 1]).kind, RootKind::NotRoot);
        assert_eq!(is_root(&q, &[1, -1, 0, 0, 0]).kind, RootKind::NotRoot);
        assert_eq!(is_root(&q, &[0; 5]).kind, RootKind::NotRoot);
        // (2;1,1,0,0) reflects at the center to (0;1,1,0,0).
        assert_eq!(is_root(&q, &[2, 1, 1, 0, 0]).kind, RootKind::NotRoot);
    }

    #[test]
    fn real_root_witness_replays() {
        let q = star(3);
        let beta = [2, 1, 1, 1];
        let c = is_root(&q, &beta);
        assert_eq!(c.kind, RootKind::Real);
        assert_eq!(c.replay(&q), beta.to_vec());
        let neg = is_root(&q, &[-1, -1, 0, 0]);
        assert_eq!(neg.kind, RootKind::Real);
        assert_eq!(neg.replay(&q), vec![-1, -1, 0, 0]);
    }

    fn g(s: &str) -> GaussRat {
        gauss_parse(s).unwrap()
    }

    fn diag(q: &[&str], eig: &[&str]) -> IrregularBlock {
        let res = ResidueSpec::Jordan(eig.iter().map(|e| JordanEntry { value: g(e), blocks: vec![1] }).collect());
        IrregularBlock::new(q.iter().map(|s| g(s)).collect(), eig.len(), res, None).unwrap()
    }

    /// Rank 2, pole 0 of order 2 with blocks `s²`, `2s²`, one Fuchsian pole.
    fn two_block_instance() -> QuiverInstance {
        let d = SpectralData::new(2, vec![
            PoleData { label: INFINITY.into(), order: 2, blocks: vec![diag(&["1"], &["1/2"]), diag(&["2"], &["1/3"])] },
            PoleData { label: "0".into(), order: 1, blocks: vec![diag(&[], &["0", "-5/6"])] },
        ])
        .unwrap();
        build_instance(&d).unwrap()
    }

    #[test]
    fn unit_composite_is_its_own_constrained_root() {
        let inst = two_block_instance();
        let e = inst.composite_eps(&crate::builder::MultiIndex(vec![1, 1]));
        let lam = vec![GaussRat::zero(); inst.quiver.len()];
        let roots = enum_constrained_roots(&inst, &e, &lam, DEFAULT_BOX_CAP).unwrap();
        assert_eq!(roots, vec![e]);
    }

    #[test]
    fn leg_units_lie_in_the_lattice() {
        let inst = two_block_instance();
        let leg = inst.leg_vertex(1, 1, 1).unwrap();
        let bound = inst.quiver.unit(leg);
        let lam = vec![GaussRat::zero(); inst.quiver.len()];
        assert_eq!(enum_constrained_roots(&inst, &bound, &lam, DEFAULT_BOX_CAP).unwrap(), vec![bound]);
    }

    #[test]
    fn box_cap_is_reported() {
        let inst = two_block_instance();
        let lam = vec![GaussRat::zero(); inst.quiver.len()];
        let bound = vec![9; inst.quiver.len()];
        assert_eq!(enum_constrained_roots(&inst, &bound, &lam, 100), Err(Error::CapExceeded { cap: 100 }));
    }

    #[test]
    fn functional_matches_exact_dot() {
        let inst = two_block_instance();
        let bound = vec![2; inst.quiver.len()];
        let lam: Vec<GaussRat> = [g("1/2"), g("-1/2"), g("1/3+1i"), g("2")].into_iter().take(inst.quiver.len()).collect();
        let fast = enum_constrained_roots(&inst, &bound, &lam, DEFAULT_BOX_CAP).unwrap();
        let mut slow = Vec::new();
        for a in 0..=2 {
            for b in 0..=2 {
                for c in 0..=2 {
                    let beta = vec![a, b, c];
                    if beta.iter().any(|&x| x > 0)
                        && inst.lattice_member(&beta)
                        && dot(&beta, &lam).is_zero()
                        && is_root(&inst.quiver, &beta).is_root()
                    {
                        slow.push(beta);
                    }
                }
            }
        }
        assert_eq!(inst.quiver.len(), 3);
        assert_eq!(fast, slow);
    }

    #[test]
    fn quasi_fundamental_basics() {
        let inst = two_block_instance();
        let e = inst.composite_eps(&crate::builder::MultiIndex(vec![2, 1]));
        assert!(!quasi_fundamental_test(&inst, &e));
        let off = inst.quiver.unit(inst.block_vertex(0, 1).unwrap());
        assert!(inst.lattice_member(&off));
        assert!(!quasi_fundamental_test(&inst, &vec![0; inst.quiver.len()]));
    }

    #[test]
    fn fuchsian_d4_delta_is_quasi_fundamental() {
        let eig = ["0", "1/2"];
        let poles = (0..4)
            .map(|i| PoleData {
                label: if i == 0 { INFINITY.into() } else { alloc::format!("{i}") },
                order: 1,
                blocks: vec![diag(&[], &eig)],
            })
            .collect();
        let inst = build_instance(&SpectralData::new(2, poles).unwrap()).unwrap();
        assert_eq!(inst.alpha, vec![2, 1, 1, 1, 1]);
        assert!(quasi_fundamental_test(&inst, &inst.alpha));
    }
}
