//! Univariate polynomials over the Gaussian rationals and exact eigenvalue
//! extraction.
//!
//! Roots are located with floating-point Aberth iteration on the squarefree
//! part, snapped to nearby rationals by continued fractions, and then
//! accepted only if they annihilate the polynomial exactly. Nothing the
//! library returns depends on a float being right.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::gauss::GaussRat;
use super::matrix::ExactMatrix;
use crate::error::{Error, Result};

/// Coefficients from the constant term upward, with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussPoly {
    coeffs: Vec<GaussRat>,
}

impl GaussPoly {
    pub fn new(mut coeffs: Vec<GaussRat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        GaussPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[GaussRat] {
        &self.coeffs
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `x - r`.
    pub fn linear(r: &GaussRat) -> Self {
        GaussPoly::new(vec![-r, GaussRat::one()])
    }

    pub fn eval(&self, x: &GaussRat) -> GaussRat {
        let mut acc = GaussRat::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        GaussPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &GaussRat::from_int(k as i64))
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => self.clone(),
            Some(lead) => {
                let inv = lead.inv().expect("leading coefficient is nonzero");
                GaussPoly::new(self.coeffs.iter().map(|c| c * &inv).collect())
            }
        }
    }

    pub fn div_rem(&self, d: &GaussPoly) -> (GaussPoly, GaussPoly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = d.coeffs[dd].inv().expect("leading coefficient is nonzero");
        let mut rem = self.coeffs.clone();
        let Some(sd) = self.degree() else {
            return (GaussPoly::new(Vec::new()), GaussPoly::new(Vec::new()));
        };
        if sd < dd {
            return (GaussPoly::new(Vec::new()), self.clone());
        }
        let mut quot = vec![GaussRat::zero(); sd - dd + 1];
        for k in (0..=sd - dd).rev() {
            let c = &rem[k + dd] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                let t = &c * dc;
                rem[k + j] -= &t;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (GaussPoly::new(quot), GaussPoly::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &GaussPoly) -> GaussPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
}

/// `det(x·I − m)` by the Faddeev–LeVerrier recursion.
pub fn char_poly(m: &ExactMatrix) -> GaussPoly {
    assert!(m.is_square(), "characteristic polynomial of a non-square matrix");
    let n = m.rows();
    let mut c = vec![GaussRat::zero(); n + 1];
    c[n] = GaussRat::one();
    let mut mk = ExactMatrix::zeros(n, n);
    for k in 1..=n {
        mk = &(m * &mk) + &ExactMatrix::scalar(n, &c[n + 1 - k]);
        let t = (m * &mk).trace();
        c[n - k] = -(&t / &GaussRat::from_int(k as i64));
    }
    GaussPoly::new(c)
}

/// All roots with multiplicity, sorted lexicographically by `(re, im)`.
/// Fails if some root is not a Gaussian rational.
pub fn roots_in_qi(p: &GaussPoly) -> Result<Vec<(GaussRat, usize)>> {
    let Some(deg) = p.degree() else {
        return Err(Error::Precondition("roots of the zero polynomial".into()));
    };
    if deg == 0 {
        return Ok(Vec::new());
    }
    let sqf = p.div_rem(&p.gcd(&p.derivative())).0.monic();
    let approx = aberth(&sqf);
    let mut roots = Vec::new();
    for z in approx {
        let r = snap_root(&sqf, z)
            .ok_or_else(|| Error::NotSplit(format!("no Gaussian rational root near {:?}", z)))?;
        if !roots.iter().any(|(q, _)| *q == r) {
            roots.push((r, 0));
        }
    }
    let mut rest = p.clone();
    for (r, mult) in roots.iter_mut() {
        let lin = GaussPoly::linear(r);
        loop {
            let (q, rem) = rest.div_rem(&lin);
            if !rem.is_zero() {
                break;
            }
            rest = q;
            *mult += 1;
        }
    }
    if rest.degree() != Some(0) {
        return Err(Error::NotSplit("irrational roots remain".into()));
    }
    roots.sort_by(|a, b| a.0.lex_cmp(&b.0));
    Ok(roots)
}

/// Eigenvalues with algebraic multiplicity, sorted by `(re, im)`.
pub fn eigenvalues(m: &ExactMatrix) -> Result<Vec<(GaussRat, usize)>> {
    roots_in_qi(&char_poly(m))
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct C64 {
    re: f64,
    im: f64,
}

impl C64 {
    fn add(self, o: C64) -> C64 {
        C64 { re: self.re + o.re, im: self.im + o.im }
    }
    fn sub(self, o: C64) -> C64 {
        C64 { re: self.re - o.re, im: self.im - o.im }
    }
    fn mul(self, o: C64) -> C64 {
        C64 { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
    fn div(self, o: C64) -> C64 {
        let n = o.re * o.re + o.im * o.im;
        C64 { re: (self.re * o.re + self.im * o.im) / n, im: (self.im * o.re - self.re * o.im) / n }
    }
    fn norm_sq(self) -> f64 {
        self.re * self.re + self.im * self.im
    }
}

fn fabs(x: f64) -> f64 {
    if x < 0.0 {
        -x
    } else {
        x
    }
}

fn to_c64(g: &GaussRat) -> C64 {
    let (re, im) = g.to_f64_pair();
    C64 { re, im }
}

fn horner(coeffs: &[C64], z: C64) -> (C64, C64) {
    let mut p = C64 { re: 0.0, im: 0.0 };
    let mut dp = p;
    for &c in coeffs.iter().rev() {
        dp = dp.mul(z).add(p);
        p = p.mul(z).add(c);
    }
    (p, dp)
}

/// Simultaneous Aberth–Ehrlich iteration for the roots of a monic
/// squarefree polynomial.
fn aberth(p: &GaussPoly) -> Vec<C64> {
    let coeffs: Vec<C64> = p.coeffs().iter().map(to_c64).collect();
    let n = coeffs.len() - 1;
    if n == 1 {
        return vec![C64 { re: -coeffs[0].re, im: -coeffs[0].im }];
    }
    // Cauchy bound with |re|+|im| standing in for the modulus.
    let bound = 1.0 + coeffs[..n].iter().map(|c| fabs(c.re) + fabs(c.im)).fold(0.0, f64::max);
    // 3-4-5 rotation: exact unit modulus, irrational angle.
    let rot = C64 { re: 0.6, im: 0.8 };
    let mut w = C64 { re: 0.5 * bound, im: 0.15 * bound };
    let mut z = Vec::with_capacity(n);
    for _ in 0..n {
        z.push(w);
        w = w.mul(rot);
    }
    for _ in 0..400 {
        let mut worst: f64 = 0.0;
        for k in 0..n {
            let (pv, dv) = horner(&coeffs, z[k]);
            if pv.norm_sq() == 0.0 {
                continue;
            }
            let ratio = pv.div(dv);
            let mut s = C64 { re: 0.0, im: 0.0 };
            for j in 0..n {
                if j != k {
                    s = s.add(C64 { re: 1.0, im: 0.0 }.div(z[k].sub(z[j])));
                }
            }
            let step = ratio.div(C64 { re: 1.0, im: 0.0 }.sub(ratio.mul(s)));
            z[k] = z[k].sub(step);
            worst = worst.max(step.norm_sq() / (1.0 + z[k].norm_sq()));
        }
        if worst < 1e-30 {
            break;
        }
    }
    z
}

/// Continued-fraction convergents of `x` with denominators up to `10^12`.
fn convergents(x: f64) -> Vec<BigRational> {
    let mut out = Vec::new();
    if !x.is_finite() {
        return out;
    }
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut y = x;
    for _ in 0..40 {
        let a = floor(y);
        let ai = BigInt::from(a as i64);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        if k2 > BigInt::from(1_000_000_000_000i64) {
            break;
        }
        out.push(BigRational::new(h2.clone(), k2.clone()));
        h0 = core::mem::replace(&mut h1, h2);
        k0 = core::mem::replace(&mut k1, k2);
        let frac = y - a;
        if fabs(frac) < 1e-13 {
            break;
        }
        y = 1.0 / frac;
        if fabs(y) > 1e15 {
            break;
        }
    }
    out
}

fn floor(y: f64) -> f64 {
    let t = y as i64 as f64;
    if t > y {
        t - 1.0
    } else {
        t
    }
}

fn snap_root(p: &GaussPoly, z: C64) -> Option<GaussRat> {
    let res = convergents(z.re);
    let ims = convergents(z.im);
    let close = |cands: Vec<BigRational>, target: f64| -> Vec<BigRational> {
        let scale = 1.0 + fabs(target);
        let mut v: Vec<BigRational> = cands
            .into_iter()
            .filter(|r| {
                use num_traits::ToPrimitive;
                fabs(r.to_f64().unwrap_or(f64::NAN) - target) <= 1e-6 * scale
            })
            .collect();
        v.truncate(12);
        v
    };
    for re in close(res, z.re) {
        for im in close(ims.clone(), z.im) {
            let g = GaussRat::new(re.clone(), im);
            if p.eval(&g).is_zero() {
                return Some(g);
            }
        }
    }
    None
}
