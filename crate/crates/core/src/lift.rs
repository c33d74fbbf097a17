//! The auxiliary lattice `ℳ` on generators `c_𝐢` (one per multi-index) and
//! `c_{[i,j,k]}` (one per leg vertex), its symmetric form, the projection
//! `Ξ: ℳ → ℤ^{Q₀}` onto `ℒ`, and a canonical positive lift.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::builder::{MultiIndex, QuiverInstance};
use crate::error::{Error, Result};
use crate::quiver::{tits, DimVector, VertexId};
use crate::roots::quasi_fundamental_test;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    Composite(MultiIndex),
    /// A leg vertex, by its index in the quiver.
    Leg(usize),
}

/// Finitely supported integer combination of generators; zero coefficients
/// are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LiftElement(pub BTreeMap<Generator, i64>);

impl LiftElement {
    pub fn unit(g: Generator) -> Self {
        let mut m = BTreeMap::new();
        m.insert(g, 1);
        LiftElement(m)
    }

    pub fn coeff(&self, g: &Generator) -> i64 {
        self.0.get(g).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, g: Generator, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.0.entry(g.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.0.remove(&g);
        }
    }

    pub fn support(&self) -> impl Iterator<Item = &Generator> {
        self.0.keys()
    }

    pub fn is_positive(&self) -> bool {
        !self.0.is_empty() && self.0.values().all(|&c| c > 0)
    }
}

fn leg_parts(inst: &QuiverInstance, a: usize) -> (usize, usize, usize) {
    match inst.quiver.vertices()[a] {
        VertexId::Leg { pole, block, k } => (pole, block, k),
        VertexId::Block { .. } => panic!("generator is not a leg vertex"),
    }
}

/// `(c, c′)` on generators.
pub fn generator_pairing(inst: &QuiverInstance, a: &Generator, b: &Generator) -> i64 {
    match (a, b) {
        (Generator::Composite(x), Generator::Composite(y)) => {
            let mut v = 2;
            for &i in &inst.irr {
                let (ji, jj) = (x.0[i], y.0[i]);
                if ji != jj {
                    v -= inst.d[i][ji - 1][jj - 1] + 2;
                }
            }
            v
        }
        (Generator::Composite(x), Generator::Leg(l)) | (Generator::Leg(l), Generator::Composite(x)) => {
            let (i, j, k) = leg_parts(inst, *l);
            if k == 1 && x.0[i] == j {
                -1
            } else {
                0
            }
        }
        (Generator::Leg(l), Generator::Leg(m)) => {
            if l == m {
                return 2;
            }
            let (i, j, k) = leg_parts(inst, *l);
            let (i2, j2, k2) = leg_parts(inst, *m);
            if (i, j) == (i2, j2) && k.abs_diff(k2) == 1 {
                -1
            } else {
                0
            }
        }
    }
}

/// The symmetric form on `ℳ`.
pub fn lift_form(inst: &QuiverInstance, x: &LiftElement, y: &LiftElement) -> i64 {
    let mut s = 0;
    for (a, ca) in &x.0 {
        for (b, cb) in &y.0 {
            s += ca * cb * generator_pairing(inst, a, b);
        }
    }
    s
}

/// `s_c(γ) = γ − (γ, c) c`.
pub fn reflect_lift(inst: &QuiverInstance, gamma: &LiftElement, g: &Generator) -> LiftElement {
    let c = lift_form(inst, gamma, &LiftElement::unit(g.clone()));
    let mut out = gamma.clone();
    out.add_term(g.clone(), -c);
    out
}

/// `Ξ(γ)`: `β_{[i,j]}` sums the coefficients of all `c_𝐢` with `j_i = j`;
/// leg coordinates are copied.
pub fn xi_map(inst: &QuiverInstance, gamma: &LiftElement) -> DimVector {
    let mut beta = vec![0; inst.quiver.len()];
    for (g, &c) in &gamma.0 {
        match g {
            Generator::Composite(idx) => {
                for &i in &inst.irr {
                    beta[inst.block_vertex(i, idx.0[i]).expect("valid index")] += c;
                }
            }
            Generator::Leg(a) => beta[*a] += c,
        }
    }
    beta
}

/// The multi-index with the given block at each irregular pole and 1 at
/// regular ones.
fn index_from(inst: &QuiverInstance, blocks: &BTreeMap<usize, usize>) -> MultiIndex {
    MultiIndex((0..inst.data.poles.len()).map(|i| blocks.get(&i).copied().unwrap_or(1)).collect())
}

/// A positive lift of `β ∈ ℒ⁺∖{0}`.
///
/// At every irregular pole the blocks are laid out in order along the
/// interval `[0, L)` (L the common level), each taking `β_{[i,j]}` units.
/// Cutting at all breakpoints yields pieces on which the block at every pole
/// is constant; each piece contributes its length to the corresponding
/// `c_𝐢`. The first piece uses the smallest supported block everywhere and
/// the last piece the largest, so both extremal multi-indices get positive
/// weight.
pub fn lift_xi(inst: &QuiverInstance, beta: &[i64]) -> Result<LiftElement> {
    if beta.len() != inst.quiver.len() || beta.iter().any(|&b| b < 0) || beta.iter().all(|&b| b == 0) {
        return Err(Error::Precondition("lift needs a non-zero non-negative vector".into()));
    }
    if !inst.lattice_member(beta) {
        return Err(Error::Precondition("vector is not in the lattice L".into()));
    }
    let mut out = LiftElement::default();
    let level = inst.level(beta, 0);
    let mut cuts = BTreeSet::new();
    for &i in &inst.irr {
        let mut acc = 0;
        for j in 1..=inst.block_count(i) {
            acc += beta[inst.block_vertex(i, j).expect("irregular pole")];
            cuts.insert(acc);
        }
    }
    cuts.insert(0);
    let cuts: Vec<i64> = cuts.into_iter().filter(|&c| c <= level).collect();
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let mut blocks = BTreeMap::new();
        for &i in &inst.irr {
            let mut acc = 0;
            for j in 1..=inst.block_count(i) {
                acc += beta[inst.block_vertex(i, j).expect("irregular pole")];
                if acc > lo {
                    blocks.insert(i, j);
                    break;
                }
            }
        }
        out.add_term(Generator::Composite(index_from(inst, &blocks)), hi - lo);
    }
    for (a, v) in inst.quiver.vertices().iter().enumerate() {
        if v.is_leg() {
            out.add_term(Generator::Leg(a), beta[a]);
        }
    }
    Ok(out)
}

/// The extremal multi-indices `(𝐢̲, 𝐢̄)` of `β`: smallest and largest
/// supported block at every irregular pole.
pub fn extremal_indices(inst: &QuiverInstance, beta: &[i64]) -> (MultiIndex, MultiIndex) {
    let mut lo = BTreeMap::new();
    let mut hi = BTreeMap::new();
    for &i in &inst.irr {
        let supp: Vec<usize> = (1..=inst.block_count(i))
            .filter(|&j| beta[inst.block_vertex(i, j).expect("irregular pole")] != 0)
            .collect();
        if let (Some(&a), Some(&b)) = (supp.first(), supp.last()) {
            lo.insert(i, a);
            hi.insert(i, b);
        }
    }
    (index_from(inst, &lo), index_from(inst, &hi))
}

/// `Irr(β)`: irregular poles where at least two blocks are supported.
pub fn irr_support(inst: &QuiverInstance, beta: &[i64]) -> Vec<usize> {
    inst.irr
        .iter()
        .copied()
        .filter(|&i| {
            (1..=inst.block_count(i))
                .filter(|&j| beta[inst.block_vertex(i, j).expect("irregular pole")] != 0)
                .count()
                >= 2
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum DiagramTag {
    E6Like,
    E7Like,
    E8Like,
    D4Like,
    A3Cycle,
    Triangle,
    DoubleEdge,
    QuadrangleDoubleEdge,
    Wild,
}

impl fmt::Display for DiagramTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiagramTag::E6Like => "E6-like",
            DiagramTag::E7Like => "E7-like",
            DiagramTag::E8Like => "E8-like",
            DiagramTag::D4Like => "D4-like",
            DiagramTag::A3Cycle => "A3-cycle",
            DiagramTag::Triangle => "triangle",
            DiagramTag::DoubleEdge => "double-edge",
            DiagramTag::QuadrangleDoubleEdge => "quadrangle-double-edge",
            DiagramTag::Wild => "wild",
        })
    }
}

/// Names the Dynkin diagram of the lifted support of a member of `F̃`.
///
/// With two or more poles in `Irr(β)` the fibre of `Ξ` over `β` is infinite
/// and its support is the pair of disjoint double edges; otherwise the lift
/// is unique and its support graph is matched against the Euclidean
/// diagrams that can occur.
pub fn classify_tame(inst: &QuiverInstance, beta: &[i64]) -> Result<DiagramTag> {
    if !quasi_fundamental_test(inst, beta) {
        return Err(Error::Precondition("vector is not quasi-fundamental".into()));
    }
    let (q, _) = tits(&inst.quiver, beta);
    if q < 0 {
        return Ok(DiagramTag::Wild);
    }
    if q > 0 {
        return Err(Error::Precondition(format!("quasi-fundamental vector with q = {q}")));
    }
    match irr_support(inst, beta).len() {
        0 | 1 => {}
        2 => return Ok(DiagramTag::QuadrangleDoubleEdge),
        n => return Err(Error::Precondition(format!("tame vector with {n} irregular supports"))),
    }
    let lift = lift_xi(inst, beta)?;
    let gens: Vec<&Generator> = lift.support().collect();
    let s = gens.len();
    let mut deg = vec![0usize; s];
    let mut edges = 0usize;
    let mut doubled = false;
    let mut adj = vec![Vec::new(); s];
    for x in 0..s {
        for y in x + 1..s {
            let m = generator_pairing(inst, gens[x], gens[y]);
            match m {
                0 => {}
                -1 => {
                    edges += 1;
                    deg[x] += 1;
                    deg[y] += 1;
                    adj[x].push(y);
                    adj[y].push(x);
                }
                -2 => doubled = true,
                _ => return Err(Error::Precondition(format!("unexpected pairing {m} in tame support"))),
            }
        }
    }
    let unknown = || Error::Precondition("tame support diagram not recognised".into());
    if doubled {
        return if s == 2 { Ok(DiagramTag::DoubleEdge) } else { Err(unknown()) };
    }
    if edges == s && deg.iter().all(|&d| d == 2) {
        return match s {
            3 => Ok(DiagramTag::Triangle),
            4 => Ok(DiagramTag::A3Cycle),
            _ => Err(unknown()),
        };
    }
    if edges + 1 != s {
        return Err(unknown());
    }
    if s == 5 && deg.contains(&4) {
        return Ok(DiagramTag::D4Like);
    }
    let branch: Vec<usize> = (0..s).filter(|&x| deg[x] == 3).collect();
    if branch.len() != 1 || deg.iter().any(|&d| d > 3) {
        return Err(unknown());
    }
    let centre = branch[0];
    let mut arms: Vec<usize> = adj[centre]
        .iter()
        .map(|&start| {
            let (mut prev, mut cur, mut len) = (centre, start, 1);
            while let Some(&next) = adj[cur].iter().find(|&&n| n != prev) {
                prev = cur;
                cur = next;
                len += 1;
            }
            len
        })
        .collect();
    arms.sort_unstable();
    match arms.as_slice() {
        [2, 2, 2] => Ok(DiagramTag::E6Like),
        [1, 3, 3] => Ok(DiagramTag::E7Like),
        [1, 2, 5] => Ok(DiagramTag::E8Like),
        _ => Err(unknown()),
    }
}
