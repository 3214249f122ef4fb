//! Truncated multivariate power series over ℚ.
//!
//! The coefficient of `z^𝐣` in a series read off a linear map on a
//! symmetric coalgebra is the value of that map on the divided-power word
//! `γ_{j₁}(b₁)⋯γ_{jₙ}(bₙ)`; values on monomials `b^𝐣` are `𝐣!` times that.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::linalg::Matrix;
use crate::rational::{factorial, zero, Rational};

pub type Exponent = Vec<u32>;

fn total(e: &[u32]) -> usize {
    e.iter().map(|&x| x as usize).sum()
}

/// Scalar series in `nvars` variables, truncated at total degree `max_order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    pub nvars: usize,
    pub max_order: usize,
    pub coeffs: BTreeMap<Exponent, Rational>,
}

impl Series {
    pub fn zero(nvars: usize, max_order: usize) -> Self {
        Series {
            nvars,
            max_order,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn var(nvars: usize, max_order: usize, i: usize) -> Self {
        let mut s = Series::zero(nvars, max_order);
        let mut e = vec![0; nvars];
        e[i] = 1;
        s.set(e, Rational::one());
        s
    }

    pub fn set(&mut self, e: Exponent, c: Rational) {
        if c.is_zero() || total(&e) > self.max_order {
            self.coeffs.remove(&e);
        } else {
            self.coeffs.insert(e, c);
        }
    }

    pub fn coeff(&self, e: &[u32]) -> Rational {
        self.coeffs.get(e).cloned().unwrap_or_else(zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_scaled(&mut self, c: &Rational, other: &Series) {
        for (e, v) in &other.coeffs {
            let s = self.coeff(e) + c * v;
            self.set(e.clone(), s);
        }
    }

    pub fn scale(&self, c: &Rational) -> Series {
        let mut s = Series::zero(self.nvars, self.max_order);
        s.add_scaled(c, self);
        s
    }

    pub fn mul(&self, other: &Series) -> Series {
        let mut out = Series::zero(self.nvars, self.max_order.min(other.max_order));
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                if total(a) + total(b) > out.max_order {
                    continue;
                }
                let e: Exponent = a.iter().zip(b).map(|(x, y)| x + y).collect();
                let v = out.coeff(&e) + ca * cb;
                out.set(e, v);
            }
        }
        out
    }

    /// Terms ordered by total degree, then by exponent vector.
    pub fn terms(&self) -> Vec<(&Exponent, &Rational)> {
        let mut t: Vec<_> = self.coeffs.iter().collect();
        t.sort_by(|(a, _), (b, _)| total(a).cmp(&total(b)).then(a.cmp(b)));
        t
    }

    pub fn format(&self, vars: &[String]) -> String {
        let mut out = String::new();
        for (e, c) in self.terms() {
            let mono: Vec<String> = e
                .iter()
                .zip(vars)
                .filter(|(p, _)| **p > 0)
                .map(|(p, v)| {
                    if *p == 1 {
                        v.clone()
                    } else {
                        format!("{v}^{p}")
                    }
                })
                .collect();
            let neg = c < &zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            let body = match (mono.is_empty(), mag.is_one()) {
                (true, _) => mag.to_string(),
                (false, true) => mono.join("*"),
                (false, false) => format!("{}*{}", mag, mono.join("*")),
            };
            if out.is_empty() {
                out = if neg { format!("-{body}") } else { body };
            } else {
                out.push_str(if neg { " - " } else { " + " });
                out.push_str(&body);
            }
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }
}

/// Series with coefficients in a vector space with basis `labels`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorSeries {
    pub vars: Vec<String>,
    pub labels: Vec<String>,
    pub max_order: usize,
    pub components: Vec<Series>,
}

impl VectorSeries {
    pub fn zero(vars: Vec<String>, labels: Vec<String>, max_order: usize) -> Self {
        let components = labels
            .iter()
            .map(|_| Series::zero(vars.len(), max_order))
            .collect();
        VectorSeries {
            vars,
            labels,
            max_order,
            components,
        }
    }

    /// The linear series `z ↦ m z`.
    pub fn linear(vars: Vec<String>, labels: Vec<String>, max_order: usize, m: &Matrix) -> Self {
        let mut s = VectorSeries::zero(vars, labels, max_order);
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let mut e = vec![0; m.cols()];
                e[j] = 1;
                s.components[i].set(e, m[(i, j)].clone());
            }
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn set(&mut self, e: &[u32], v: &[Rational]) {
        for (s, c) in self.components.iter_mut().zip(v) {
            s.set(e.to_vec(), c.clone());
        }
    }

    pub fn coefficient(&self, e: &[u32]) -> Vec<Rational> {
        self.components.iter().map(|s| s.coeff(e)).collect()
    }

    /// All exponents with a nonzero coefficient, with their vectors.
    pub fn coefficients(&self) -> BTreeMap<Exponent, Vec<Rational>> {
        let mut keys: Vec<Exponent> = self
            .components
            .iter()
            .flat_map(|s| s.coeffs.keys().cloned())
            .collect();
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .map(|e| {
                let v = self.coefficient(&e);
                (e, v)
            })
            .collect()
    }

    /// Values on the monomial basis: `𝐣! a_𝐣`.
    pub fn monomial_values(&self) -> BTreeMap<Exponent, Vec<Rational>> {
        self.coefficients()
            .into_iter()
            .map(|(e, v)| {
                let f = e
                    .iter()
                    .fold(Rational::one(), |acc, &j| acc * factorial(j as u64));
                (e, v.into_iter().map(|x| x * &f).collect())
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Series::is_zero)
    }

    pub fn sub(&self, other: &VectorSeries) -> VectorSeries {
        let mut s = self.clone();
        for (a, b) in s.components.iter_mut().zip(&other.components) {
            a.add_scaled(&-Rational::one(), b);
        }
        s
    }

    /// `m ∘ self` for a matrix acting on the coefficient space.
    pub fn map_linear(&self, m: &Matrix, labels: Vec<String>) -> VectorSeries {
        let mut out = VectorSeries::zero(self.vars.clone(), labels, self.max_order);
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if !m[(i, j)].is_zero() {
                    out.components[i].add_scaled(&m[(i, j)], &self.components[j]);
                }
            }
        }
        out
    }

    /// `½ Σ_{i,j} Q(e_i, e_j) x_i x_j` evaluated on `x = self`, for a
    /// symmetric bilinear form given by `form[i][j]` (vectors in the target).
    pub fn quadratic(&self, form: &[Vec<Vec<Rational>>], labels: Vec<String>) -> VectorSeries {
        let half = crate::rational::frac(1, 2);
        let mut out = VectorSeries::zero(self.vars.clone(), labels, self.max_order);
        for (i, xi) in self.components.iter().enumerate() {
            for (j, xj) in self.components.iter().enumerate() {
                if form[i][j].iter().all(Zero::is_zero) || xi.is_zero() || xj.is_zero() {
                    continue;
                }
                let p = xi.mul(xj);
                for (t, q) in form[i][j].iter().enumerate() {
                    if !q.is_zero() {
                        out.components[t].add_scaled(&(&half * q), &p);
                    }
                }
            }
        }
        out
    }

    pub fn format(&self) -> Vec<(String, String)> {
        self.labels
            .iter()
            .zip(&self.components)
            .map(|(l, s)| (l.clone(), s.format(&self.vars)))
            .collect()
    }
}
