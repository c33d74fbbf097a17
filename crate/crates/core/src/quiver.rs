//! Finite quivers, their Euler and symmetric forms, and simple reflections
//! on dimension and parameter vectors.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::numeric::GaussRat;

/// Vertex labels. `pole` counts from 0 (pole 0 is infinity); `block` and
/// `k` count from 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexId {
    /// `[i, j]`: block `j` of an irregular pole `i`.
    Block { pole: usize, block: usize },
    /// `[i, j, k]`: the `k`-th leg vertex hanging off block `j` of pole `i`.
    Leg { pole: usize, block: usize, k: usize },
}

impl VertexId {
    pub fn pole(&self) -> usize {
        match *self {
            VertexId::Block { pole, .. } | VertexId::Leg { pole, .. } => pole,
        }
    }

    pub fn block(&self) -> usize {
        match *self {
            VertexId::Block { block, .. } | VertexId::Leg { block, .. } => block,
        }
    }

    pub fn is_leg(&self) -> bool {
        matches!(self, VertexId::Leg { .. })
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexId::Block { pole, block } => write!(f, "[{pole},{block}]"),
            VertexId::Leg { pole, block, k } => write!(f, "[{pole},{block},{k}]"),
        }
    }
}

/// Integer vector indexed by the vertex order of a quiver.
pub type DimVector = Vec<i64>;
/// Gaussian-rational vector indexed by the vertex order of a quiver.
pub type ParamVector = Vec<GaussRat>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<VertexId>,
    index: BTreeMap<VertexId, usize>,
    /// `(source, target)` pairs; parallel arrows appear repeatedly.
    arrows: Vec<(usize, usize)>,
    /// `cartan[a][b] = (ε_a, ε_b)`.
    cartan: Vec<Vec<i64>>,
}

impl Quiver {
    pub fn new(vertices: Vec<VertexId>, arrows: Vec<(usize, usize)>) -> Self {
        let n = vertices.len();
        let index = vertices.iter().enumerate().map(|(k, v)| (*v, k)).collect::<BTreeMap<_, _>>();
        assert_eq!(index.len(), n, "duplicate vertex labels");
        let mut cartan = vec![vec![0i64; n]; n];
        for (a, row) in cartan.iter_mut().enumerate() {
            row[a] = 2;
        }
        for &(s, t) in &arrows {
            assert!(s < n && t < n, "arrow endpoint out of range");
            cartan[s][t] -= 1;
            cartan[t][s] -= 1;
        }
        Quiver { vertices, index, arrows, cartan }
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, v: &VertexId) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// Number of arrows between `a` and `b` in either direction.
    pub fn edge_count(&self, a: usize, b: usize) -> usize {
        self.arrows
            .iter()
            .filter(|&&(s, t)| (s, t) == (a, b) || (s, t) == (b, a))
            .count()
    }

    pub fn unit(&self, a: usize) -> DimVector {
        let mut e = vec![0; self.len()];
        e[a] = 1;
        e
    }

    /// `(β, ε_a)`.
    pub fn pair_unit(&self, beta: &[i64], a: usize) -> i64 {
        self.cartan[a].iter().zip(beta).map(|(c, b)| c * b).sum()
    }

    /// True when the support of `β` is nonempty and connected in the
    /// underlying graph.
    pub fn support_connected(&self, beta: &[i64]) -> bool {
        let supp: Vec<usize> = (0..self.len()).filter(|&a| beta[a] != 0).collect();
        let Some(&start) = supp.first() else {
            return false;
        };
        let mut seen = vec![false; self.len()];
        seen[start] = true;
        let mut stack = vec![start];
        let mut count = 1;
        while let Some(a) = stack.pop() {
            for &b in &supp {
                if !seen[b] && self.cartan[a][b] < 0 {
                    seen[b] = true;
                    count += 1;
                    stack.push(b);
                }
            }
        }
        count == supp.len()
    }
}

/// `⟨a, b⟩ = Σ_v a_v b_v − Σ_{ρ} a_{s(ρ)} b_{t(ρ)}`.
pub fn euler_form(q: &Quiver, a: &[i64], b: &[i64]) -> i64 {
    let diag: i64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    diag - q.arrows.iter().map(|&(s, t)| a[s] * b[t]).sum::<i64>()
}

/// `(a, b) = ⟨a, b⟩ + ⟨b, a⟩`.
pub fn sym_form(q: &Quiver, a: &[i64], b: &[i64]) -> i64 {
    let mut s = 0;
    for (x, row) in q.cartan.iter().enumerate() {
        if a[x] == 0 {
            continue;
        }
        for (y, &c) in row.iter().enumerate() {
            if c != 0 {
                s += a[x] * c * b[y];
            }
        }
    }
    s
}

/// Tits form `q(α) = ½(α, α)` and `p(α) = 1 − q(α)`.
pub fn tits(q: &Quiver, alpha: &[i64]) -> (i64, i64) {
    let qq = sym_form(q, alpha, alpha) / 2;
    (qq, 1 - qq)
}

/// `s_a(β) = β − (β, ε_a) ε_a`.
pub fn reflect_dim(q: &Quiver, beta: &[i64], a: usize) -> DimVector {
    let mut out = beta.to_vec();
    out[a] -= q.pair_unit(beta, a);
    out
}

/// `r_a(λ)_b = λ_b − (ε_a, ε_b) λ_a`.
pub fn reflect_param(q: &Quiver, lambda: &[GaussRat], a: usize) -> ParamVector {
    let la = lambda[a].clone();
    lambda
        .iter()
        .enumerate()
        .map(|(b, x)| {
            let c = q.cartan[a][b];
            if c == 0 {
                x.clone()
            } else {
                x - &(&la * &GaussRat::from_int(c))
            }
        })
        .collect()
}

/// `β·λ = Σ_a β_a λ_a`.
pub fn dot(beta: &[i64], lambda: &[GaussRat]) -> GaussRat {
    let mut s = GaussRat::from_int(0);
    for (b, l) in beta.iter().zip(lambda) {
        if *b != 0 {
            s += &(l * &GaussRat::from_int(*b));
        }
    }
    s
}
