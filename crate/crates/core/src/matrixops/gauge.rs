use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::numeric::ExactMatrix;

/// An element `g = g₀ + g₁x + … + g_{k−1}x^{k−1}` of `GL(n, ℂ[[x]]/x^k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeElement {
    coeffs: Vec<ExactMatrix>,
}

impl GaugeElement {
    pub fn new(coeffs: Vec<ExactMatrix>) -> Result<Self> {
        let Some(g0) = coeffs.first() else {
            return Err(Error::Precondition("gauge element of degree 0".into()));
        };
        let n = g0.rows();
        if coeffs.iter().any(|c| c.rows() != n || c.cols() != n) {
            return Err(Error::Dimension("gauge coefficients must be n×n".into()));
        }
        if g0.determinant() == num_traits::Zero::zero() {
            return Err(Error::Singular("constant term of a gauge element".into()));
        }
        Ok(GaugeElement { coeffs })
    }

    pub fn identity(n: usize, k: usize) -> Self {
        Self::constant(ExactMatrix::identity(n), k)
    }

    /// `g₀` padded with zero higher coefficients. `g₀` must be invertible.
    pub fn constant(g0: ExactMatrix, k: usize) -> Self {
        let n = g0.rows();
        let mut coeffs = Vec::with_capacity(k.max(1));
        coeffs.push(g0);
        coeffs.resize(k.max(1), ExactMatrix::zeros(n, n));
        GaugeElement { coeffs }
    }

    /// `I + X x^s` truncated at degree `k`.
    pub fn unipotent(x: ExactMatrix, s: usize, k: usize) -> Self {
        let n = x.rows();
        let mut g = Self::identity(n, k);
        if s < k {
            g.coeffs[s] = x;
        }
        g
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn size(&self) -> usize {
        self.coeffs[0].rows()
    }

    pub fn coeff(&self, l: usize) -> &ExactMatrix {
        &self.coeffs[l]
    }

    pub fn coeffs(&self) -> &[ExactMatrix] {
        &self.coeffs
    }

    /// Same element viewed modulo `x^k`, padding with zeros when `k` grows.
    pub fn with_degree(&self, k: usize) -> Self {
        let n = self.size();
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(k.max(1), ExactMatrix::zeros(n, n));
        GaugeElement { coeffs }
    }

    /// `self · other mod x^k`, `k` the smaller degree.
    pub fn compose(&self, other: &GaugeElement) -> Self {
        let k = self.degree().min(other.degree());
        let n = self.size();
        let coeffs = (0..k)
            .map(|l| {
                let mut c = ExactMatrix::zeros(n, n);
                for a in 0..=l {
                    c = &c + &(&self.coeffs[a] * &other.coeffs[l - a]);
                }
                c
            })
            .collect();
        GaugeElement { coeffs }
    }

    pub fn inverse(&self) -> Self {
        let h0 = self.coeffs[0].inverse().expect("constant term is invertible");
        let n = self.size();
        let mut h: Vec<ExactMatrix> = Vec::with_capacity(self.degree());
        h.push(h0.clone());
        for l in 1..self.degree() {
            let mut s = ExactMatrix::zeros(n, n);
            for a in 1..=l {
                s = &s + &(&self.coeffs[a] * &h[l - a]);
            }
            h.push(-&(&h0 * &s));
        }
        GaugeElement { coeffs: h }
    }

    /// Principal part of `g A g⁻¹`, where `a[j−1]` is the coefficient of
    /// `x^{−j}`. Coefficients of `g` beyond the pole order do not matter.
    pub fn act(&self, a: &[ExactMatrix]) -> Vec<ExactMatrix> {
        let k = a.len();
        let g = self.with_degree(k.max(1));
        let h = g.inverse();
        let n = self.size();
        (1..=k)
            .map(|j| {
                let mut c = ExactMatrix::zeros(n, n);
                // x^a · x^{−(j+a+b)} · x^b = x^{−j}
                for ga in 0..k {
                    for hb in 0..k {
                        let idx = j + ga + hb;
                        if idx > k {
                            break;
                        }
                        let term = &(&g.coeffs[ga] * &a[idx - 1]) * &h.coeffs[hb];
                        c = &c + &term;
                    }
                }
                c
            })
            .collect()
    }

    pub fn block_diag(parts: &[GaugeElement], k: usize) -> Self {
        let coeffs = (0..k.max(1))
            .map(|l| {
                let blocks: Vec<ExactMatrix> = parts
                    .iter()
                    .map(|p| {
                        p.coeffs
                            .get(l)
                            .cloned()
                            .unwrap_or_else(|| ExactMatrix::zeros(p.size(), p.size()))
                    })
                    .collect();
                ExactMatrix::block_diag(&blocks)
            })
            .collect();
        GaugeElement { coeffs }
    }
}
