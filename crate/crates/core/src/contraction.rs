//! Contractions `(∇, π, h)` of a chain complex onto its homology, built by
//! exact splitting (the Hodge decomposition `𝔤_j = d𝔤_{j+1} ⊕ ℋ_j ⊕ h(d𝔤_j)`)
//! and validated against the full set of side conditions.
//!
//! Sign convention: `∇π = id − (dh + hd)`, so on boundaries `dh` is the
//! identity and `hd` is the projection onto the complement of the cycles.

use std::collections::BTreeMap;

use crate::graded::{homology, ChainComplex, GradedMap, GradedSpace};
use crate::linalg::Matrix;
use crate::validation::ValidationReport;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contraction {
    pub big: ChainComplex,
    /// Homology, with zero differential.
    pub small: ChainComplex,
    pub nabla: GradedMap,
    pub pi: GradedMap,
    pub h: GradedMap,
}

/// Per degree `j`, column bases of the three summands of `𝔤_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HodgeSplitting {
    pub boundaries: BTreeMap<i32, Matrix>,
    pub harmonic: BTreeMap<i32, Matrix>,
    pub complement: BTreeMap<i32, Matrix>,
}

impl HodgeSplitting {
    pub fn dims(&self, j: i32) -> (usize, usize, usize) {
        let c = |m: &BTreeMap<i32, Matrix>| m.get(&j).map_or(0, Matrix::cols);
        (c(&self.boundaries), c(&self.harmonic), c(&self.complement))
    }
}

/// Deterministic contraction of `c` onto its homology.
///
/// `h` is zero on `ℋ_j` and on the complement summand, and inverts `d` on
/// the boundaries, which forces `h∇ = 0`, `πh = 0` and `hh = 0`.
pub fn build_contraction(c: &ChainComplex) -> (Contraction, HodgeSplitting) {
    let hom = homology(c);
    let small = ChainComplex::zero_differential(hom.space.clone());
    let mut nabla_blocks = BTreeMap::new();
    let mut pi_blocks = BTreeMap::new();
    let mut h_blocks = BTreeMap::new();
    let mut split = HodgeSplitting {
        boundaries: BTreeMap::new(),
        harmonic: BTreeMap::new(),
        complement: BTreeMap::new(),
    };
    for j in c.space.degrees() {
        let n = c.space.dim(j);
        let b = hom.boundaries[&j].clone();
        let harm = hom.harmonic[&j].clone();
        let comp_cols: Vec<Vec<_>> = hom.complement_pivots[&j]
            .iter()
            .map(|&p| unit(n, p))
            .collect();
        let comp = Matrix::from_columns(n, &comp_cols);
        let p = b.hstack(&harm).hstack(&comp);
        let pinv = p.inverse().expect("Hodge summands span the degree");
        let (nb, nh) = (b.cols(), harm.cols());

        if nh > 0 {
            nabla_blocks.insert(j, harm.clone());
            let rows: Vec<usize> = (nb..nb + nh).collect();
            pi_blocks.insert(j, pinv.select_rows(&rows));
        }
        if nb > 0 {
            // b_i = d e_{p_i} with p_i the pivots of d leaving degree j + 1
            let up = c.space.dim(j + 1);
            let mut hb = Matrix::zeros(up, n);
            for (i, &piv) in hom.complement_pivots[&(j + 1)].iter().enumerate() {
                for col in 0..n {
                    hb[(piv, col)] = pinv[(i, col)].clone();
                }
            }
            h_blocks.insert(j, hb);
        }
        split.boundaries.insert(j, b);
        split.harmonic.insert(j, harm);
        split.complement.insert(j, comp);
    }
    let nabla = GradedMap::from_blocks(&hom.space, &c.space, 0, nabla_blocks).expect("shapes");
    let pi = GradedMap::from_blocks(&c.space, &hom.space, 0, pi_blocks).expect("shapes");
    let h = GradedMap::from_blocks(&c.space, &c.space, 1, h_blocks).expect("shapes");
    (
        Contraction {
            big: c.clone(),
            small,
            nabla,
            pi,
            h,
        },
        split,
    )
}

fn unit(n: usize, i: usize) -> Vec<crate::rational::Rational> {
    let mut v = vec![crate::rational::zero(); n];
    v[i] = crate::rational::one();
    v
}

impl Contraction {
    /// Induced contraction of the suspensions: `∇` and `π` keep their
    /// blocks, `h` changes sign together with `d`.
    pub fn suspend(&self) -> Contraction {
        let big = self.big.suspend();
        let small = self.small.suspend();
        let shift = |m: &GradedMap, src: &GradedSpace, tgt: &GradedSpace, neg: bool| {
            let s = if neg {
                -crate::rational::one()
            } else {
                crate::rational::one()
            };
            let blocks = m
                .source
                .degrees()
                .into_iter()
                .map(|j| (j + 1, m.block(j).scale(&s)))
                .collect();
            GradedMap::from_blocks(src, tgt, m.degree, blocks).expect("shapes")
        };
        Contraction {
            nabla: shift(&self.nabla, &small.space, &big.space, false),
            pi: shift(&self.pi, &big.space, &small.space, false),
            h: shift(&self.h, &big.space, &big.space, true),
            big,
            small,
        }
    }

    pub fn d_dense(&self) -> Matrix {
        self.big.d.to_dense()
    }

    pub fn nabla_dense(&self) -> Matrix {
        self.nabla.to_dense()
    }

    pub fn pi_dense(&self) -> Matrix {
        self.pi.to_dense()
    }

    pub fn h_dense(&self) -> Matrix {
        self.h.to_dense()
    }

    /// Hodge splitting read off from the contraction data itself:
    /// boundaries `= im(dh)`, harmonic `= im(∇)`, complement `= im(hd)`.
    pub fn splitting(&self) -> HodgeSplitting {
        let dh = self.big.d.compose(&self.h).expect("shapes");
        let hd = self.h.compose(&self.big.d).expect("shapes");
        let mut split = HodgeSplitting {
            boundaries: BTreeMap::new(),
            harmonic: BTreeMap::new(),
            complement: BTreeMap::new(),
        };
        for j in self.big.space.degrees() {
            let span = |m: Matrix| {
                let cols = crate::linalg::independent_columns(&m);
                m.select_columns(&cols)
            };
            split.boundaries.insert(j, span(dh.block(j)));
            split.harmonic.insert(j, span(self.nabla.block(j)));
            split.complement.insert(j, span(hd.block(j)));
        }
        split
    }
}

/// Checks every contraction identity, naming the degree and basis label of
/// each failing column.
pub fn validate_contraction(k: &Contraction) -> ValidationReport {
    let mut report = ValidationReport::default();
    if k.nabla.degree != 0 || k.pi.degree != 0 || k.h.degree != 1 {
        report.push(
            "degrees",
            vec![],
            format!(
                "expected degrees (0, 0, 1) for (∇, π, h), got ({}, {}, {})",
                k.nabla.degree, k.pi.degree, k.h.degree
            ),
        );
        return report;
    }
    let big_labels = k.big.space.flat_labels();
    let small_labels = k.small.space.flat_labels();
    let d = k.big.d.to_dense();
    let nabla = k.nabla.to_dense();
    let pi = k.pi.to_dense();
    let h = k.h.to_dense();
    let nb = big_labels.len();
    let ns = small_labels.len();

    let mut check = |name: &str, m: Matrix, expect: Matrix, labels: &[String]| {
        for c in 0..m.cols() {
            if m.column(c) != expect.column(c) {
                report.push(
                    name,
                    vec![labels[c].clone()],
                    format!("column {} differs", labels[c]),
                );
            }
        }
    };
    check(
        "pi∘nabla = id",
        pi.mul(&nabla),
        Matrix::identity(ns),
        &small_labels,
    );
    let homotopy = d.mul(&h).add(&h.mul(&d));
    check(
        "nabla∘pi = id − (dh + hd)",
        nabla.mul(&pi),
        Matrix::identity(nb).sub(&homotopy),
        &big_labels,
    );
    check(
        "h∘nabla = 0",
        h.mul(&nabla),
        Matrix::zeros(nb, ns),
        &small_labels,
    );
    check("pi∘h = 0", pi.mul(&h), Matrix::zeros(ns, nb), &big_labels);
    check("h∘h = 0", h.mul(&h), Matrix::zeros(nb, nb), &big_labels);
    check(
        "nabla is a chain map",
        d.mul(&nabla),
        Matrix::zeros(nb, ns),
        &small_labels,
    );
    check(
        "pi is a chain map",
        pi.mul(&d),
        Matrix::zeros(ns, nb),
        &big_labels,
    );
    if !k.small.d.is_zero() {
        report.push(
            "small differential = 0",
            vec![],
            "homology side must have zero differential",
        );
    }
    report
}
