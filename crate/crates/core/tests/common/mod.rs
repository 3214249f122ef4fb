#![allow(dead_code)]

use std::collections::BTreeMap;

use kuranishi_core::contraction::{build_contraction, validate_contraction, Contraction};
use kuranishi_core::dgla::Dgla;
use kuranishi_core::exec::Execution;
use kuranishi_core::graded::{ChainComplex, GradedMap, GradedSpace};
use kuranishi_core::hpt::{check_twisting_cochain, compute_tau_and_d};
use kuranishi_core::kuranishi::Kuranishi;
use kuranishi_core::linalg::{kernel_basis, Matrix};
use kuranishi_core::rational::{frac, zero, Rational};
use kuranishi_core::validation::ValidationReport;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small rationals, zero about a third of the time.
pub fn rat(rng: &mut ChaCha8Rng) -> Rational {
    if rng.gen_bool(0.35) {
        return zero();
    }
    let p = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { -1 } else { 1 };
    frac(p, rng.gen_range(1..=2))
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    let mut m = Matrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = rat(rng);
        }
    }
    m
}

/// `dims[i]` basis vectors in degree `−1 − i`, labelled `g{i}_{j}`.
pub fn space(dims: &[usize]) -> GradedSpace {
    GradedSpace::new(dims.iter().enumerate().map(|(i, &n)| {
        (
            -1 - i as i32,
            (0..n).map(|j| format!("g{i}_{j}")).collect::<Vec<_>>(),
        )
    }))
    .unwrap()
}

/// A random complex with `d ∘ d = 0`: each block is a random combination of
/// the left kernel of the previous one.
pub fn random_complex(rng: &mut ChaCha8Rng, dims: &[usize]) -> ChainComplex {
    let s = space(dims);
    let n = s.total_dim();
    let mut d = Matrix::zeros(n, n);
    let mut prev: Option<Matrix> = None;
    for i in 0..dims.len().saturating_sub(1) {
        let (a, b) = (dims[i], dims[i + 1]);
        let block = match &prev {
            None => random_matrix(rng, b, a),
            Some(p) => {
                // rows orthogonal to the image of the previous block
                let left = kernel_basis(&p.transpose());
                let k = left.cols();
                let coeffs = random_matrix(rng, b, k);
                if k == 0 {
                    Matrix::zeros(b, a)
                } else {
                    coeffs.mul(&left.transpose())
                }
            }
        };
        let (r0, c0) = (s.offset(-2 - i as i32), s.offset(-1 - i as i32));
        for r in 0..b {
            for c in 0..a {
                d[(r0 + r, c0 + c)] = block[(r, c)].clone();
            }
        }
        prev = Some(block);
    }
    let d = GradedMap::from_dense(&s, &s, -1, &d).unwrap();
    ChainComplex::new(s, d).unwrap()
}

/// Random two-term DGLA with `n₁` generators in degree −1 and `n₂` in −2.
/// Every such bracket satisfies the axioms since degree −3 is zero.
pub fn random_two_term_dims(rng: &mut ChaCha8Rng, n1: usize, n2: usize) -> Dgla {
    let complex = random_complex(rng, &[n1, n2]);
    let mut pairs = Vec::new();
    for i in 0..n1 {
        for j in i..n1 {
            let mut v = vec![zero(); n1 + n2];
            for k in 0..n2 {
                v[n1 + k] = rat(rng);
            }
            pairs.push((i, j, v));
        }
    }
    Dgla::from_pairs(complex, pairs).unwrap()
}

pub fn random_two_term(rng: &mut ChaCha8Rng, max_dim: usize) -> Dgla {
    let n1 = rng.gen_range(1..=max_dim);
    let n2 = rng.gen_range(1..=max_dim);
    random_two_term_dims(rng, n1, n2)
}

/// Contraction for the two-term truncation of `g`, reusing `c` when the
/// truncation changes nothing.
pub fn two_term(g: &Dgla, c: &Contraction) -> (Dgla, Contraction) {
    let k = g.truncate_minus1_minus2(c).unwrap();
    if &k == g {
        (k, c.clone())
    } else {
        let ck = build_contraction(&k.complex).0;
        (k, ck)
    }
}

/// Every exact identity of the pipeline, by name.
pub fn identity_suite(
    g: &Dgla,
    c: &Contraction,
    n: usize,
) -> Vec<(&'static str, ValidationReport)> {
    let exec = Execution::default();
    let def = compute_tau_and_d(g, c, n, exec).unwrap();
    let (k, ck) = two_term(g, c);
    let kur = Kuranishi::new(&k, &ck, n, exec).unwrap();
    let coalg = kur.kuranishi_coalgebra(exec);
    vec![
        ("contraction side conditions", validate_contraction(c)),
        (
            "twisting identities",
            check_twisting_cochain(&def, g, c, exec),
        ),
        (
            "two-term twisting identities",
            check_twisting_cochain(&kur.def, &k, &ck, exec),
        ),
        ("inverse identities", kur.inverse_identities()),
        ("theorem checks", kur.verify_theorem(&coalg, exec).report),
    ]
}

pub type Poly = BTreeMap<Vec<u32>, Rational>;

fn poly_add(a: &mut Poly, c: &Rational, b: &Poly) {
    for (e, v) in b {
        let s = a.get(e).cloned().unwrap_or_else(zero) + c * v;
        if s.is_zero() {
            a.remove(e);
        } else {
            a.insert(e.clone(), s);
        }
    }
}

fn poly_mul(a: &Poly, b: &Poly, max: u32) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            if e.iter().sum::<u32>() <= max {
                let mut t = Poly::new();
                t.insert(e, ca * cb);
                poly_add(&mut out, &Rational::from_integer(1.into()), &t);
            }
        }
    }
    out
}

/// The obstruction map of a two-term DGLA by plain fixed-point iteration of
/// `u = ∇z − h(½[u, u])`, `Φ(z) = π(½[u, u])`, truncated at total degree
/// `max`. Returns one polynomial per degree −2 homology class, in the
/// variables of the degree −1 homology.
pub fn obstruction_oracle(k: &Dgla, c: &Contraction, max: u32) -> Vec<Poly> {
    let dim = k.dim();
    let nabla = c.nabla_dense();
    let pi = c.pi_dense();
    let h = c.h_dense();
    let hsp = &c.small.space;
    let nv = hsp.dim(-1);
    let half = frac(1, 2);
    let mut lin = vec![Poly::new(); dim];
    for (j, v) in (0..nv).map(|j| (j, hsp.offset(-1) + j)) {
        let mut e = vec![0; nv];
        e[j] = 1;
        for (i, p) in lin.iter_mut().enumerate() {
            if !nabla[(i, v)].is_zero() {
                p.insert(e.clone(), nabla[(i, v)].clone());
            }
        }
    }
    let half_bracket = |u: &[Poly]| -> Vec<Poly> {
        let mut out = vec![Poly::new(); dim];
        for i in 0..dim {
            for j in 0..dim {
                if u[i].is_empty() || u[j].is_empty() {
                    continue;
                }
                let b = k.bracket.basis_bracket(i, j);
                if b.iter().all(Zero::is_zero) {
                    continue;
                }
                let p = poly_mul(&u[i], &u[j], max);
                for (t, q) in b.iter().enumerate() {
                    if !q.is_zero() {
                        poly_add(&mut out[t], &(&half * q), &p);
                    }
                }
            }
        }
        out
    };
    let apply = |m: &Matrix, x: &[Poly]| -> Vec<Poly> {
        let mut out = vec![Poly::new(); m.rows()];
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if !m[(i, j)].is_zero() {
                    poly_add(&mut out[i], &m[(i, j)], &x[j]);
                }
            }
        }
        out
    };
    let mut u = lin.clone();
    for _ in 0..max {
        let hq = apply(&h, &half_bracket(&u));
        let mut next = lin.clone();
        for (a, b) in next.iter_mut().zip(&hq) {
            poly_add(a, &-Rational::from_integer(1.into()), b);
        }
        u = next;
    }
    let phi = apply(&pi, &half_bracket(&u));
    let off = hsp.offset(-2);
    (0..hsp.dim(-2)).map(|i| phi[off + i].clone()).collect()
}
