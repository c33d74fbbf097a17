//! Membership in `Σ_λ` and `Σ̃_λ` with certificates, and the reduction of
//! `(α, λ)` by reflections towards a unit vector or the quasi-fundamental
//! set.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::builder::{MultiIndex, QuiverInstance};
use crate::error::{Error, Result};
use crate::numeric::GaussRat;
use crate::quiver::{dot, reflect_dim, reflect_param, tits, DimVector, ParamVector, Quiver};
use crate::roots::{enum_constrained_roots, enum_orthogonal_roots, is_root, quasi_fundamental_test, RootKind};

pub const DEFAULT_MAX_NODES: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Condition {
    PositiveRoot,
    InLattice,
    Orthogonality,
    NoDecomposition,
}

impl Condition {
    pub fn name(&self) -> &'static str {
        match self {
            Condition::PositiveRoot => "positive root",
            Condition::InLattice => "lattice membership",
            Condition::Orthogonality => "orthogonality",
            Condition::NoDecomposition => "no dominating decomposition",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionReport {
    pub condition: Condition,
    /// `None` when the check was skipped because an earlier one failed.
    pub passed: Option<bool>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    ViolatingDecomposition { parts: Vec<DimVector>, p_values: Vec<i64>, p_alpha: i64 },
    ExhaustiveWitness { roots_considered: usize, decompositions_checked: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub solvable: bool,
    pub reasons: Vec<ConditionReport>,
    pub certificate: Option<Certificate>,
    pub trace: Option<ReductionTrace>,
}

impl Verdict {
    /// The moduli space of stable connections with this data is non-empty
    /// exactly when the problem is solvable.
    pub fn moduli_nonempty(&self) -> bool {
        self.solvable
    }
}

/// Largest `Σ p(β_t)` over decompositions into candidate roots, memoized on
/// the remainder. A remainder is split by choosing the part that covers its
/// first nonzero coordinate, so every multiset is counted once.
struct Search {
    cands: Vec<(DimVector, i64)>,
    memo: BTreeMap<DimVector, Option<(i64, usize)>>,
    nodes: u64,
    max_nodes: u64,
}

impl Search {
    fn best(&mut self, gamma: &[i64]) -> Result<Option<i64>> {
        let Some(a) = gamma.iter().position(|&x| x != 0) else {
            return Ok(Some(0));
        };
        if let Some(v) = self.memo.get(gamma) {
            return Ok(v.map(|(s, _)| s));
        }
        let mut best: Option<(i64, usize)> = None;
        for k in 0..self.cands.len() {
            let (beta, p) = &self.cands[k];
            if beta[a] == 0 || beta.iter().zip(gamma).any(|(b, g)| b > g) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.max_nodes {
                return Err(Error::CapExceeded { cap: self.max_nodes });
            }
            let p = *p;
            let rest: DimVector = gamma.iter().zip(beta).map(|(g, b)| g - b).collect();
            if let Some(r) = self.best(&rest)? {
                if best.map_or(true, |(s, _)| p + r > s) {
                    best = Some((p + r, k));
                }
            }
        }
        self.memo.insert(gamma.to_vec(), best);
        Ok(best.map(|(s, _)| s))
    }

    fn parts(&self, gamma: &[i64]) -> Vec<DimVector> {
        let mut out = Vec::new();
        let mut g = gamma.to_vec();
        while g.iter().any(|&x| x != 0) {
            let (_, k) = self.memo[&g].expect("decomposable remainder");
            let beta = &self.cands[k].0;
            g = g.iter().zip(beta).map(|(x, b)| x - b).collect();
            out.push(beta.clone());
        }
        out
    }
}

fn p_of(q: &Quiver, beta: &[i64]) -> i64 {
    tits(q, beta).1
}

/// Shared core of both membership tests; `cands` are the admissible roots
/// `β ≤ α` orthogonal to `λ`.
fn decide(
    q: &Quiver,
    alpha: &[i64],
    lam: &[GaussRat],
    lattice: Option<bool>,
    cands: impl FnOnce() -> Result<Vec<DimVector>>,
    max_nodes: u64,
) -> Result<Verdict> {
    let mut reasons = Vec::new();
    let class = is_root(q, alpha);
    let positive = class.is_root() && !class.negated;
    reasons.push(ConditionReport {
        condition: Condition::PositiveRoot,
        passed: Some(positive),
        detail: match class.kind {
            RootKind::Real if positive => "real root".into(),
            RootKind::Imaginary if positive => "imaginary root".into(),
            _ => "not a positive root".into(),
        },
    });
    let mut ok = positive;
    if let Some(l) = lattice {
        reasons.push(ConditionReport {
            condition: Condition::InLattice,
            passed: Some(l),
            detail: if l { "level sums agree".into() } else { "level sums differ".into() },
        });
        ok &= l;
    }
    let ad = dot(alpha, lam);
    let orth = ad.is_zero();
    reasons.push(ConditionReport {
        condition: Condition::Orthogonality,
        passed: Some(orth),
        detail: if orth { "alpha.lambda = 0".into() } else { format!("orthogonality fails: alpha.lambda = {ad}") },
    });
    ok &= orth;
    if !ok {
        reasons.push(ConditionReport {
            condition: Condition::NoDecomposition,
            passed: None,
            detail: "skipped".into(),
        });
        return Ok(Verdict { solvable: false, reasons, certificate: None, trace: None });
    }

    let p_alpha = p_of(q, alpha);
    let mut cands: Vec<(DimVector, i64)> = cands()?.into_iter().map(|b| { let p = p_of(q, &b); (b, p) }).collect();
    cands.sort_by(|x, y| y.1.cmp(&x.1).then_with(|| x.0.cmp(&y.0)));
    let mut search = Search { cands, memo: BTreeMap::new(), nodes: 0, max_nodes };
    for k in 0..search.cands.len() {
        let (beta, p) = search.cands[k].clone();
        if beta == alpha {
            continue;
        }
        let rest: DimVector = alpha.iter().zip(&beta).map(|(a, b)| a - b).collect();
        search.nodes += 1;
        if search.nodes > max_nodes {
            return Err(Error::CapExceeded { cap: max_nodes });
        }
        if let Some(r) = search.best(&rest)? {
            if p + r >= p_alpha {
                let mut parts = alloc::vec![beta];
                parts.extend(search.parts(&rest));
                let p_values = parts.iter().map(|b| p_of(q, b)).collect();
                reasons.push(ConditionReport {
                    condition: Condition::NoDecomposition,
                    passed: Some(false),
                    detail: format!("decomposition with sum of p = {} >= p(alpha) = {p_alpha}", p + r),
                });
                return Ok(Verdict {
                    solvable: false,
                    reasons,
                    certificate: Some(Certificate::ViolatingDecomposition { parts, p_values, p_alpha }),
                    trace: None,
                });
            }
        }
    }
    reasons.push(ConditionReport {
        condition: Condition::NoDecomposition,
        passed: Some(true),
        detail: format!("p(alpha) = {p_alpha} exceeds every decomposition"),
    });
    Ok(Verdict {
        solvable: true,
        reasons,
        certificate: Some(Certificate::ExhaustiveWitness {
            roots_considered: search.cands.len(),
            decompositions_checked: search.nodes,
        }),
        trace: None,
    })
}

/// Crawley-Boevey's set `Σ_λ` on an arbitrary quiver.
pub fn sigma_member(q: &Quiver, alpha: &[i64], lam: &[GaussRat], max_nodes: u64) -> Result<Verdict> {
    check_shape(q, alpha, lam)?;
    decide(q, alpha, lam, None, || enum_orthogonal_roots(q, alpha, lam, max_nodes, |_| true), max_nodes)
}

/// `Σ̃_λ` for an arbitrary pair `(α, λ)` on the quiver of `inst`: parts must
/// also lie in `ℒ`.
pub fn sigma_tilde_pair(inst: &QuiverInstance, alpha: &[i64], lam: &[GaussRat], max_nodes: u64) -> Result<Verdict> {
    check_shape(&inst.quiver, alpha, lam)?;
    let lattice = alpha.iter().all(|&a| a >= 0) && inst.lattice_member(alpha);
    decide(
        &inst.quiver,
        alpha,
        lam,
        Some(lattice),
        || enum_constrained_roots(inst, alpha, lam, max_nodes),
        max_nodes,
    )
}

/// Solvability of the instance: `α ∈ Σ̃_λ`.
pub fn sigma_tilde_member(inst: &QuiverInstance, max_nodes: u64) -> Result<Verdict> {
    sigma_tilde_pair(inst, &inst.alpha, &inst.lambda, max_nodes)
}

fn check_shape(q: &Quiver, alpha: &[i64], lam: &[GaussRat]) -> Result<()> {
    if alpha.len() != q.len() || lam.len() != q.len() {
        return Err(Error::Dimension("vector length does not match the quiver".into()));
    }
    if alpha.iter().any(|&a| a < 0) {
        return Err(Error::Precondition("alpha must be non-negative".into()));
    }
    Ok(())
}

/// Re-validates a violating decomposition from scratch.
pub fn check_certificate(inst: &QuiverInstance, alpha: &[i64], lam: &[GaussRat], cert: &Certificate) -> bool {
    let Certificate::ViolatingDecomposition { parts, p_values, p_alpha } = cert else {
        return true;
    };
    let q = &inst.quiver;
    let mut sum = alloc::vec![0i64; q.len()];
    for b in parts {
        for (s, x) in sum.iter_mut().zip(b) {
            *s += x;
        }
    }
    parts.len() >= 2
        && sum == alpha
        && parts.iter().all(|b| {
            let c = is_root(q, b);
            c.is_root() && !c.negated && inst.lattice_member(b) && dot(b, lam).is_zero()
        })
        && parts.iter().map(|b| p_of(q, b)).collect::<Vec<_>>() == *p_values
        && *p_alpha == p_of(q, alpha)
        && *p_alpha <= p_values.iter().sum::<i64>()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Move {
    Composite(MultiIndex),
    /// Reflection at a leg vertex, by quiver index.
    Leg(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub mv: Move,
    /// `λ_a ≠ 0` at the reflected generator.
    pub legal: bool,
    pub before: (DimVector, ParamVector),
    pub after: (DimVector, ParamVector),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Terminal {
    /// `ε_𝐢` for some multi-index.
    CompositeUnit(MultiIndex),
    LegUnit(usize),
    QuasiFundamental,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTrace {
    pub steps: Vec<Step>,
    /// `None` when the reduction could not be carried out; see `note`.
    pub terminal: Option<Terminal>,
    pub note: String,
}

impl ReductionTrace {
    pub fn applicable(&self) -> bool {
        self.terminal.is_some()
    }

    /// Undoes every step from the final pair, which must give back the
    /// starting pair.
    pub fn replay_backwards(&self, inst: &QuiverInstance) -> Option<(DimVector, ParamVector)> {
        let mut cur = self.steps.last()?.after.clone();
        for s in self.steps.iter().rev() {
            cur = apply_move(inst, &cur.0, &cur.1, &s.mv);
        }
        Some(cur)
    }
}

/// Applies a reflection to `(β, μ)`. Each move is an involution.
pub fn apply_move(inst: &QuiverInstance, beta: &[i64], mu: &[GaussRat], mv: &Move) -> (DimVector, ParamVector) {
    match mv {
        Move::Composite(idx) => (inst.reflect_composite(beta, idx), inst.reflect_composite_param(mu, idx)),
        Move::Leg(a) => (reflect_dim(&inst.quiver, beta, *a), reflect_param(&inst.quiver, mu, *a)),
    }
}

fn unit_terminal(inst: &QuiverInstance, beta: &[i64]) -> Option<Terminal> {
    if beta.iter().any(|&b| b < 0) {
        return None;
    }
    let legs: Vec<usize> = (0..beta.len()).filter(|&a| inst.quiver.vertices()[a].is_leg()).collect();
    let leg_mass: i64 = legs.iter().map(|&a| beta[a]).sum();
    let total: i64 = beta.iter().sum();
    if leg_mass == 1 && total == 1 {
        return legs.into_iter().find(|&a| beta[a] == 1).map(Terminal::LegUnit);
    }
    if leg_mass != 0 || !inst.lattice_member(beta) || inst.level(beta, 0) != 1 {
        return None;
    }
    let mut idx = alloc::vec![1; inst.data.poles.len()];
    for &i in &inst.irr {
        idx[i] = (1..=inst.block_count(i)).find(|&j| beta[inst.block_vertex(i, j).expect("block")] == 1)?;
    }
    Some(Terminal::CompositeUnit(MultiIndex(idx)))
}

/// The next legal reflection that lowers `Σβ`: a composite index or leg
/// vertex with positive pairing and nonzero parameter.
pub fn next_move(inst: &QuiverInstance, beta: &[i64], mu: &[GaussRat]) -> Option<Move> {
    for idx in inst.multi_indices() {
        if inst.pair_composite(beta, &idx) > 0 && !inst.lambda_composite(mu, &idx).is_zero() {
            return Some(Move::Composite(idx));
        }
    }
    (0..beta.len())
        .filter(|&a| inst.quiver.vertices()[a].is_leg())
        .find(|&a| inst.quiver.pair_unit(beta, a) > 0 && !mu[a].is_zero())
        .map(Move::Leg)
}

/// Reduces `(α, λ)` by legal reflections until `α` is a generator unit or
/// quasi-fundamental. Inputs outside `Σ̃_λ` are reported as inapplicable.
pub fn reduce_pair(inst: &QuiverInstance, max_nodes: u64) -> Result<ReductionTrace> {
    let verdict = sigma_tilde_member(inst, max_nodes)?;
    if !verdict.solvable {
        return Ok(ReductionTrace { steps: Vec::new(), terminal: None, note: "alpha is not in the tilde-Sigma set".into() });
    }
    Ok(reduce_from(inst, &inst.alpha, &inst.lambda))
}

/// The reduction loop without the membership pre-check.
pub fn reduce_from(inst: &QuiverInstance, alpha: &[i64], lam: &[GaussRat]) -> ReductionTrace {
    let mut beta = alpha.to_vec();
    let mut mu = lam.to_vec();
    let mut steps = Vec::new();
    let cap = alpha.iter().sum::<i64>().max(1) as usize;
    loop {
        if let Some(t) = unit_terminal(inst, &beta) {
            return ReductionTrace { steps, terminal: Some(t), note: "reached a unit vector".into() };
        }
        if quasi_fundamental_test(inst, &beta) {
            return ReductionTrace { steps, terminal: Some(Terminal::QuasiFundamental), note: "reached the quasi-fundamental set".into() };
        }
        let Some(mv) = next_move(inst, &beta, &mu) else {
            // A positive pairing only at generators with vanishing parameter.
            // Shifts by z^{(i)} leave every λ_𝐢 and leg parameter unchanged,
            // so no shift can make such a reflection legal.
            return ReductionTrace { steps, terminal: None, note: "no legal reflection lowers alpha".into() };
        };
        let (nb, nm) = apply_move(inst, &beta, &mu, &mv);
        if nb.iter().any(|&x| x < 0) || steps.len() >= cap {
            return ReductionTrace { steps, terminal: None, note: "reflection left the positive cone".into() };
        }
        steps.push(Step { mv, legal: true, before: (beta, mu), after: (nb.clone(), nm.clone()) });
        beta = nb;
        mu = nm;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::build_instance;
    use crate::numeric::gauss_parse;
    use crate::quiver::VertexId;
    use crate::spectral::{IrregularBlock, JordanEntry, PoleData, ResidueSpec, SpectralData, INFINITY};

    fn g(s: &str) -> GaussRat {
        gauss_parse(s).unwrap()
    }

    fn fuchsian(rank: usize, poles: &[&[&str]]) -> QuiverInstance {
        let poles = poles
            .iter()
            .enumerate()
            .map(|(i, eig)| {
                let res = ResidueSpec::Jordan(
                    eig.chunks(2)
                        .map(|c| JordanEntry { value: g(c[0]), blocks: alloc::vec![1; c[1].parse().unwrap()] })
                        .collect(),
                );
                PoleData {
                    label: if i == 0 { INFINITY.into() } else { format!("{i}") },
                    order: 1,
                    blocks: alloc::vec![IrregularBlock::new(Vec::new(), rank, res, None).unwrap()],
                }
            })
            .collect();
        build_instance(&SpectralData::new(rank, poles).unwrap()).unwrap()
    }

    fn star(legs: usize) -> Quiver {
        let mut v = alloc::vec![VertexId::Block { pole: 0, block: 1 }];
        let mut arrows = Vec::new();
        for i in 0..legs {
            v.push(VertexId::Leg { pole: i, block: 1, k: 1 });
            arrows.push((i + 1, 0));
        }
        Quiver::new(v, arrows)
    }

    #[test]
    fn simple_root_with_zero_parameter() {
        let q = star(2);
        let lam = alloc::vec![GaussRat::zero(); 3];
        let v = sigma_member(&q, &[1, 0, 0], &lam, DEFAULT_MAX_NODES).unwrap();
        assert!(v.solvable);
    }

    #[test]
    fn twice_null_root_decomposes() {
        let q = star(4);
        let lam = alloc::vec![GaussRat::zero(); 5];
        let v = sigma_member(&q, &[4, 2, 2, 2, 2], &lam, DEFAULT_MAX_NODES).unwrap();
        assert!(!v.solvable);
        let Some(Certificate::ViolatingDecomposition { parts, p_values, p_alpha }) = v.certificate else {
            panic!("expected a decomposition");
        };
        assert_eq!(p_alpha, 1);
        assert!(p_values.iter().sum::<i64>() >= 1);
        assert_eq!(parts.iter().map(|b| b[0]).sum::<i64>(), 4);
    }

    #[test]
    fn orthogonality_failure_is_reported() {
        let q = star(2);
        let lam = alloc::vec![GaussRat::from_int(1), GaussRat::zero(), GaussRat::zero()];
        let v = sigma_member(&q, &[1, 0, 0], &lam, DEFAULT_MAX_NODES).unwrap();
        assert!(!v.solvable);
        assert!(v.reasons.iter().any(|r| r.detail.starts_with("orthogonality fails")));
    }

    #[test]
    fn generic_hypergeometric_is_solvable() {
        let inst = fuchsian(2, &[&["1/2", "1", "1/3", "1"], &["0", "1", "-1/5", "1"], &["-1/7", "1", "-103/210", "1"]]);
        assert!(inst.alpha_dot_lambda().is_zero());
        let v = sigma_tilde_member(&inst, DEFAULT_MAX_NODES).unwrap();
        assert!(v.solvable, "{v:?}");
        let plain = sigma_member(&inst.quiver, &inst.alpha, &inst.lambda, DEFAULT_MAX_NODES).unwrap();
        assert_eq!(plain.solvable, v.solvable);
    }

    #[test]
    fn resonant_hypergeometric_is_not() {
        // ξ^{[0,1]}_1 + ξ^{[1,1]}_1 + ξ^{[2,1]}_1 = 0 makes (1;1,1,1) − ε_... orthogonal.
        let inst = fuchsian(2, &[&["1/2", "1", "1/3", "1"], &["0", "1", "-1/5", "1"], &["-1/2", "1", "-2/15", "1"]]);
        assert!(inst.alpha_dot_lambda().is_zero());
        let v = sigma_tilde_member(&inst, DEFAULT_MAX_NODES).unwrap();
        assert!(!v.solvable);
        let cert = v.certificate.unwrap();
        assert!(check_certificate(&inst, &inst.alpha, &inst.lambda, &cert));
    }

    #[test]
    fn hypergeometric_reduces_to_a_unit() {
        let inst = fuchsian(2, &[&["1/2", "1", "1/3", "1"], &["0", "1", "-1/5", "1"], &["-1/7", "1", "-103/210", "1"]]);
        let t = reduce_pair(&inst, DEFAULT_MAX_NODES).unwrap();
        assert!(matches!(t.terminal, Some(Terminal::CompositeUnit(_)) | Some(Terminal::LegUnit(_))), "{t:?}");
        assert!(t.steps.iter().all(|s| s.legal));
        assert_eq!(t.replay_backwards(&inst).unwrap(), (inst.alpha.clone(), inst.lambda.clone()));
        for s in &t.steps {
            assert!(s.after.0.iter().sum::<i64>() < s.before.0.iter().sum::<i64>());
        }
    }

    #[test]
    fn quasi_fundamental_needs_no_steps() {
        let inst = fuchsian(2, &[&["0", "1", "1/2", "1"], &["0", "1", "1/3", "1"], &["0", "1", "1/5", "1"], &["0", "1", "-31/30", "1"]]);
        let t = reduce_from(&inst, &inst.alpha, &inst.lambda);
        assert_eq!(t.terminal, Some(Terminal::QuasiFundamental));
        assert!(t.steps.is_empty());
    }

    #[test]
    fn node_cap_is_distinct_outcome() {
        let q = star(4);
        let lam = alloc::vec![GaussRat::zero(); 5];
        assert_eq!(sigma_member(&q, &[6, 3, 3, 3, 3], &lam, 10), Err(Error::CapExceeded { cap: 10 }));
    }
}
