use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::util::{cpow, is_finite_c};

/// Sparse bivariate polynomial over C, graded by total degree.
///
/// Canonical form: no stored zero coefficients. The zero polynomial is the
/// empty term map. Terms are keyed by the exponent pair `(i, j)` of
/// `z^i * w^j`; the `BTreeMap` keeps iteration (and hence evaluation and
/// printing) deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct BivarPoly {
    terms: BTreeMap<(u32, u32), Complex64>,
}

impl BivarPoly {
    pub fn zero() -> Self {
        BivarPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Complex64) -> Self {
        let mut p = Self::zero();
        p.add_term(0, 0, c);
        p
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn var_z() -> Self {
        Self::monomial(1, 0, Complex64::new(1.0, 0.0))
    }

    pub fn var_w() -> Self {
        Self::monomial(0, 1, Complex64::new(1.0, 0.0))
    }

    pub fn monomial(i: u32, j: u32, c: Complex64) -> Self {
        let mut p = Self::zero();
        p.add_term(i, j, c);
        p
    }

    /// Build from terms, rejecting non-finite coefficients.
    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), Complex64)>>(iter: I) -> Result<Self> {
        let mut p = Self::zero();
        for ((i, j), c) in iter {
            if !is_finite_c(c) {
                return Err(Error::NonFinite(format!("coefficient of z^{i}*w^{j}")));
            }
            p.add_term(i, j, c);
        }
        Ok(p)
    }

    /// Add `c` to the coefficient of `z^i w^j`, dropping exact zeros.
    pub fn add_term(&mut self, i: u32, j: u32, c: Complex64) {
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((i, j)) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let v = *e.get() + c;
                if v == Complex64::new(0.0, 0.0) {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Complex64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Complex64 {
        self.terms
            .get(&(i, j))
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Largest coefficient modulus (0 for the zero polynomial).
    pub fn max_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Evaluate at `(z, w)`.
    ///
    /// Term order and association are fixed (BTreeMap order,
    /// `(c * z^i) * w^j`) so identical inputs give bit-identical results.
    pub fn eval(&self, z: Complex64, w: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&(i, j), &c) in &self.terms {
            acc += c * cpow(z, i) * cpow(w, j);
        }
        acc
    }

    /// Evaluation with precomputed power tables; identical result order to
    /// `eval` but cheaper inside hot loops when reused per point.
    pub fn eval_with_tables(&self, zpow: &[Complex64], wpow: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&(i, j), &c) in &self.terms {
            acc += c * zpow[i as usize] * wpow[j as usize];
        }
        acc
    }

    pub fn max_z_exp(&self) -> u32 {
        self.terms.keys().map(|&(i, _)| i).max().unwrap_or(0)
    }

    pub fn max_w_exp(&self) -> u32 {
        self.terms.keys().map(|&(_, j)| j).max().unwrap_or(0)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        if c == Complex64::new(0.0, 0.0) {
            return Self::zero();
        }
        let mut out = Self::zero();
        for (&(i, j), &v) in &self.terms {
            out.add_term(i, j, v * c);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative_z(&self) -> Self {
        let mut out = Self::zero();
        for (&(i, j), &c) in &self.terms {
            if i > 0 {
                out.add_term(i - 1, j, c * (i as f64));
            }
        }
        out
    }

    pub fn derivative_w(&self) -> Self {
        let mut out = Self::zero();
        for (&(i, j), &c) in &self.terms {
            if j > 0 {
                out.add_term(i, j - 1, c * (j as f64));
            }
        }
        out
    }

    /// Substitute `z -> a(x, u)`, `w -> b(x, u)`.
    pub fn substitute(&self, a: &BivarPoly, b: &BivarPoly) -> Self {
        // Cache powers of a and b up to the needed exponents.
        let max_i = self.max_z_exp() as usize;
        let max_j = self.max_w_exp() as usize;
        let mut apow = Vec::with_capacity(max_i + 1);
        let mut bpow = Vec::with_capacity(max_j + 1);
        apow.push(Self::one());
        for i in 1..=max_i {
            let next = &apow[i - 1] * a;
            apow.push(next);
        }
        bpow.push(Self::one());
        for j in 1..=max_j {
            let next = &bpow[j - 1] * b;
            bpow.push(next);
        }
        let mut out = Self::zero();
        for (&(i, j), &c) in &self.terms {
            let term = (&apow[i as usize] * &bpow[j as usize]).scale(c);
            out = &out + &term;
        }
        out
    }

    /// Drop all terms of total degree above `d`.
    pub fn truncate_total_degree(&self, d: u32) -> Self {
        let mut out = Self::zero();
        for (&(i, j), &c) in &self.terms {
            if i + j <= d {
                out.add_term(i, j, c);
            }
        }
        out
    }

    /// Drop coefficients below `tol` relative to the largest one.
    pub fn trim_relative(&self, tol: f64) -> Self {
        let scale = self.max_coeff();
        if scale == 0.0 {
            return Self::zero();
        }
        let cut = tol * scale;
        let mut out = Self::zero();
        for (&(i, j), &c) in &self.terms {
            if c.norm() > cut {
                out.add_term(i, j, c);
            }
        }
        out
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }
}

impl Add for &BivarPoly {
    type Output = BivarPoly;
    fn add(self, rhs: &BivarPoly) -> BivarPoly {
        let mut out = self.clone();
        for (&(i, j), &c) in &rhs.terms {
            out.add_term(i, j, c);
        }
        out
    }
}

impl Sub for &BivarPoly {
    type Output = BivarPoly;
    fn sub(self, rhs: &BivarPoly) -> BivarPoly {
        let mut out = self.clone();
        for (&(i, j), &c) in &rhs.terms {
            out.add_term(i, j, -c);
        }
        out
    }
}

impl Neg for &BivarPoly {
    type Output = BivarPoly;
    fn neg(self) -> BivarPoly {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for &BivarPoly {
    type Output = BivarPoly;
    fn mul(self, rhs: &BivarPoly) -> BivarPoly {
        let mut out = BivarPoly::zero();
        for (&(i1, j1), &c1) in &self.terms {
            for (&(i2, j2), &c2) in &rhs.terms {
                out.add_term(i1 + i2, j1 + j2, c1 * c2);
            }
        }
        out
    }
}
