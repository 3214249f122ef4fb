//! Finitely supported Z-graded vector spaces, homogeneous maps, chain
//! complexes, suspension and homology.
//!
//! Vectors of a [`GradedSpace`] are stored flattened: degrees are laid out
//! from the highest degree down, each degree contributing its basis in label
//! order. Homogeneous maps keep per-degree blocks and can be flattened with
//! [`GradedMap::to_dense`].

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{free_columns, independent_columns, kernel_basis, Matrix};
use crate::rational::Rational;

pub const SUSPENSION_PREFIX: &str = "s·";

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GradedSpace {
    basis: BTreeMap<i32, Vec<String>>,
}

impl GradedSpace {
    pub fn new<I, S>(parts: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i32, Vec<S>)>,
        S: Into<String>,
    {
        let mut basis: BTreeMap<i32, Vec<String>> = BTreeMap::new();
        for (deg, labels) in parts {
            let entry = basis.entry(deg).or_default();
            for l in labels {
                let l = l.into();
                if entry.contains(&l) {
                    return Err(Error::DuplicateLabel(l));
                }
                entry.push(l);
            }
        }
        basis.retain(|_, v| !v.is_empty());
        Ok(GradedSpace { basis })
    }

    pub fn empty() -> Self {
        GradedSpace::default()
    }

    pub fn dim(&self, deg: i32) -> usize {
        self.basis.get(&deg).map_or(0, Vec::len)
    }

    pub fn total_dim(&self) -> usize {
        self.basis.values().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Populated degrees, highest first.
    pub fn degrees(&self) -> Vec<i32> {
        self.basis.keys().rev().copied().collect()
    }

    pub fn labels(&self, deg: i32) -> &[String] {
        self.basis.get(&deg).map_or(&[], Vec::as_slice)
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.basis.keys().next_back().copied()
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.basis.keys().next().copied()
    }

    /// Offset of degree `deg` in the flattened layout.
    pub fn offset(&self, deg: i32) -> usize {
        self.basis
            .iter()
            .rev()
            .take_while(|(d, _)| **d > deg)
            .map(|(_, v)| v.len())
            .sum()
    }

    pub fn global(&self, deg: i32, i: usize) -> usize {
        self.offset(deg) + i
    }

    /// Degree of each flattened basis index.
    pub fn flat_degrees(&self) -> Vec<i32> {
        self.basis
            .iter()
            .rev()
            .flat_map(|(d, v)| std::iter::repeat_n(*d, v.len()))
            .collect()
    }

    pub fn flat_labels(&self) -> Vec<String> {
        self.basis
            .iter()
            .rev()
            .flat_map(|(_, v)| v.iter().cloned())
            .collect()
    }

    pub fn find(&self, label: &str) -> Option<(i32, usize)> {
        self.basis
            .iter()
            .find_map(|(d, v)| v.iter().position(|l| l == label).map(|i| (*d, i)))
    }

    pub fn find_global(&self, label: &str) -> Option<usize> {
        self.find(label).map(|(d, i)| self.global(d, i))
    }

    /// Degree shift by +1; labels get the `s·` prefix.
    pub fn suspend(&self) -> GradedSpace {
        GradedSpace {
            basis: self
                .basis
                .iter()
                .map(|(d, v)| {
                    (
                        d + 1,
                        v.iter()
                            .map(|l| format!("{SUSPENSION_PREFIX}{l}"))
                            .collect(),
                    )
                })
                .collect(),
        }
    }

    /// Restriction to the degrees in `range` (inclusive bounds).
    pub fn restrict(&self, lo: i32, hi: i32) -> GradedSpace {
        GradedSpace {
            basis: self
                .basis
                .range(lo..=hi)
                .map(|(d, v)| (*d, v.clone()))
                .collect(),
        }
    }
}

/// A degree-homogeneous linear map. Block `j` maps the degree-`j` part of
/// the source to the degree-`j + degree` part of the target; absent blocks
/// are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedMap {
    pub source: GradedSpace,
    pub target: GradedSpace,
    pub degree: i32,
    blocks: BTreeMap<i32, Matrix>,
}

impl GradedMap {
    pub fn zero(source: &GradedSpace, target: &GradedSpace, degree: i32) -> Self {
        GradedMap {
            source: source.clone(),
            target: target.clone(),
            degree,
            blocks: BTreeMap::new(),
        }
    }

    pub fn identity(space: &GradedSpace) -> Self {
        let blocks = space
            .degrees()
            .into_iter()
            .map(|d| (d, Matrix::identity(space.dim(d))))
            .collect();
        GradedMap {
            source: space.clone(),
            target: space.clone(),
            degree: 0,
            blocks,
        }
    }

    pub fn from_blocks(
        source: &GradedSpace,
        target: &GradedSpace,
        degree: i32,
        blocks: BTreeMap<i32, Matrix>,
    ) -> Result<Self> {
        for (j, b) in &blocks {
            let want = (target.dim(j + degree), source.dim(*j));
            if (b.rows(), b.cols()) != want {
                return Err(Error::Shape(format!(
                    "block at degree {j} is {}x{}, expected {}x{}",
                    b.rows(),
                    b.cols(),
                    want.0,
                    want.1
                )));
            }
        }
        let mut m = GradedMap::zero(source, target, degree);
        for (j, b) in blocks {
            if !b.is_zero() {
                m.blocks.insert(j, b);
            }
        }
        Ok(m)
    }

    /// Splits a flattened matrix into blocks; fails if any entry would
    /// violate homogeneity.
    pub fn from_dense(
        source: &GradedSpace,
        target: &GradedSpace,
        degree: i32,
        dense: &Matrix,
    ) -> Result<Self> {
        if dense.rows() != target.total_dim() || dense.cols() != source.total_dim() {
            return Err(Error::Shape("dense matrix does not match spaces".into()));
        }
        let sdeg = source.flat_degrees();
        let tdeg = target.flat_degrees();
        for (r, td) in tdeg.iter().enumerate() {
            for (c, sd) in sdeg.iter().enumerate() {
                if *td != sd + degree && !num_traits::Zero::is_zero(&dense[(r, c)]) {
                    return Err(Error::Shape(format!(
                        "entry ({r},{c}) maps degree {sd} to degree {td}, map has degree {degree}"
                    )));
                }
            }
        }
        let mut blocks = BTreeMap::new();
        for j in source.degrees() {
            let tj = j + degree;
            if target.dim(tj) == 0 {
                continue;
            }
            let (so, to) = (source.offset(j), target.offset(tj));
            let mut b = Matrix::zeros(target.dim(tj), source.dim(j));
            for r in 0..b.rows() {
                for c in 0..b.cols() {
                    b[(r, c)] = dense[(to + r, so + c)].clone();
                }
            }
            blocks.insert(j, b);
        }
        GradedMap::from_blocks(source, target, degree, blocks)
    }

    pub fn block(&self, j: i32) -> Matrix {
        self.blocks
            .get(&j)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.target.dim(j + self.degree), self.source.dim(j)))
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.target.total_dim(), self.source.total_dim());
        for (j, b) in &self.blocks {
            let (so, to) = (self.source.offset(*j), self.target.offset(j + self.degree));
            for r in 0..b.rows() {
                for c in 0..b.cols() {
                    m[(to + r, so + c)] = b[(r, c)].clone();
                }
            }
        }
        m
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &GradedMap) -> Result<GradedMap> {
        if g.target != self.source {
            return Err(Error::Shape(
                "compose: target of g is not the source of f".into(),
            ));
        }
        let mut blocks = BTreeMap::new();
        for j in g.source.degrees() {
            let mid = j + g.degree;
            if self.target.dim(mid + self.degree) == 0 {
                continue;
            }
            blocks.insert(j, self.block(mid).mul(&g.block(j)));
        }
        GradedMap::from_blocks(&g.source, &self.target, self.degree + g.degree, blocks)
    }

    pub fn add(&self, other: &GradedMap) -> Result<GradedMap> {
        self.combine(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &GradedMap) -> Result<GradedMap> {
        self.combine(other, |a, b| a.sub(b))
    }

    fn combine(
        &self,
        other: &GradedMap,
        op: impl Fn(&Matrix, &Matrix) -> Matrix,
    ) -> Result<GradedMap> {
        if self.source != other.source || self.target != other.target || self.degree != other.degree
        {
            return Err(Error::Shape("maps are not parallel".into()));
        }
        let blocks = self
            .source
            .degrees()
            .into_iter()
            .map(|j| (j, op(&self.block(j), &other.block(j))))
            .collect();
        GradedMap::from_blocks(&self.source, &self.target, self.degree, blocks)
    }

    pub fn scale(&self, s: &Rational) -> GradedMap {
        let blocks = self.blocks.iter().map(|(j, b)| (*j, b.scale(s))).collect();
        GradedMap::from_blocks(&self.source, &self.target, self.degree, blocks)
            .expect("scaling preserves shapes")
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(Matrix::is_zero)
    }
}

/// A finite chain complex with a degree −1 square-zero differential.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    pub space: GradedSpace,
    pub d: GradedMap,
}

impl ChainComplex {
    pub fn new(space: GradedSpace, d: GradedMap) -> Result<Self> {
        let c = ChainComplex::unchecked(space, d)?;
        if !c.d.compose(&c.d)?.is_zero() {
            return Err(Error::InvalidDgla("d ∘ d ≠ 0".into()));
        }
        Ok(c)
    }

    /// Shapes are checked, `d ∘ d = 0` is not.
    pub fn unchecked(space: GradedSpace, d: GradedMap) -> Result<Self> {
        if d.degree != -1 || d.source != space || d.target != space {
            return Err(Error::Shape(
                "differential must be a degree −1 endomorphism".into(),
            ));
        }
        Ok(ChainComplex { space, d })
    }

    pub fn zero_differential(space: GradedSpace) -> Self {
        let d = GradedMap::zero(&space, &space, -1);
        ChainComplex { space, d }
    }

    /// Suspension with `d_{sC} = −s ∘ d_C ∘ s⁻¹`, the sign forced by `ds + sd = 0`.
    pub fn suspend(&self) -> ChainComplex {
        let space = self.space.suspend();
        let blocks = self
            .space
            .degrees()
            .into_iter()
            .map(|j| (j + 1, self.d.block(j).scale(&-crate::rational::one())))
            .collect();
        let d =
            GradedMap::from_blocks(&space, &space, -1, blocks).expect("suspension keeps shapes");
        ChainComplex { space, d }
    }

    /// The differential leaving degree `j`.
    pub fn d_at(&self, j: i32) -> Matrix {
        self.d.block(j)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.space
            .degrees()
            .into_iter()
            .map(|j| if j.rem_euclid(2) == 0 { 1 } else { -1 } * self.space.dim(j) as i64)
            .sum()
    }
}

/// Homology with explicit bases. Per degree `j`, `cycles[j]`, `boundaries[j]`
/// and `harmonic[j]` hold basis vectors of `Z_j`, `B_j` and a chosen
/// complement `ℋ_j` of `B_j` in `Z_j` as columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homology {
    pub space: GradedSpace,
    pub cycles: BTreeMap<i32, Matrix>,
    pub boundaries: BTreeMap<i32, Matrix>,
    pub harmonic: BTreeMap<i32, Matrix>,
    /// Pivot columns of `d` leaving degree `j`: the unit vectors spanning the
    /// complement of `Z_j`.
    pub complement_pivots: BTreeMap<i32, Vec<usize>>,
}

/// Homology of `c`. Homology generators are labelled by the free column of
/// the cycle that represents them.
pub fn homology(c: &ChainComplex) -> Homology {
    let mut cycles = BTreeMap::new();
    let mut boundaries = BTreeMap::new();
    let mut harmonic = BTreeMap::new();
    let mut complement_pivots = BTreeMap::new();
    let mut labels = Vec::new();
    for j in c.space.degrees() {
        let n = c.space.dim(j);
        let d_out = c.d_at(j);
        let z = kernel_basis(&d_out);
        let z_free = free_columns(&d_out);
        let d_in = c.d_at(j + 1);
        let b_cols = independent_columns(&d_in);
        let b = d_in.select_columns(&b_cols);
        // greedy: keep cycle vectors independent of B and earlier choices
        let mut chosen = b.clone();
        let mut reps = Vec::new();
        let mut rep_labels = Vec::new();
        for (k, &free) in z_free.iter().enumerate() {
            let cand = chosen.hstack(&z.select_columns(&[k]));
            if cand.rank() > chosen.rank() {
                chosen = cand;
                reps.push(z.column(k));
                rep_labels.push(c.space.labels(j)[free].clone());
            }
        }
        complement_pivots.insert(j, independent_columns(&d_out));
        cycles.insert(j, z);
        boundaries.insert(j, b);
        harmonic.insert(j, Matrix::from_columns(n, &reps));
        labels.push((j, rep_labels));
    }
    Homology {
        space: GradedSpace::new(labels).expect("labels unique within a degree"),
        cycles,
        boundaries,
        harmonic,
        complement_pivots,
    }
}
