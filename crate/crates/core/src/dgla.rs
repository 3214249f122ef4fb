//! Differential graded Lie algebras given by structure constants.
//!
//! Grading is homological (`d` has degree −1) and the algebras of interest
//! are non-positive. The bracket is stored on pairs of flattened basis
//! indices (see [`crate::graded`]); values are vectors of the flattened space.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::contraction::{validate_contraction, Contraction};
use crate::error::{Error, Result};
use crate::graded::{ChainComplex, GradedMap, GradedSpace};
use crate::linalg::{echelon_span, independent_columns, is_zero_vec, Matrix};
use crate::rational::{frac, sign, zero, Rational};
use crate::validation::ValidationReport;

/// Structure constants of a graded bracket on a flattened basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BracketTable {
    degrees: Vec<i32>,
    entries: BTreeMap<(usize, usize), Vec<Rational>>,
}

impl BracketTable {
    pub fn zero(degrees: Vec<i32>) -> Self {
        BracketTable {
            degrees,
            entries: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.degrees[i]
    }

    /// Sets `[e_i, e_j]`. The value must be homogeneous of degree
    /// `|e_i| + |e_j|`.
    pub fn set(&mut self, i: usize, j: usize, value: Vec<Rational>) -> Result<()> {
        assert_eq!(value.len(), self.dim());
        let want = self.degrees[i] + self.degrees[j];
        if let Some(bad) = value
            .iter()
            .enumerate()
            .find(|(k, x)| !x.is_zero() && self.degrees[*k] != want)
        {
            return Err(Error::InvalidDgla(format!(
                "bracket of basis {i} and {j} has a component in degree {}, expected {want}",
                self.degrees[bad.0]
            )));
        }
        if is_zero_vec(&value) {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), value);
        }
        Ok(())
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&Vec<Rational>> {
        self.entries.get(&(i, j))
    }

    pub fn basis_bracket(&self, i: usize, j: usize) -> Vec<Rational> {
        self.get(i, j)
            .cloned()
            .unwrap_or_else(|| vec![zero(); self.dim()])
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Bilinear extension to arbitrary (flattened) vectors.
    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let mut out = vec![zero(); self.dim()];
        for ((i, j), val) in &self.entries {
            let (a, b) = (&x[*i], &y[*j]);
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let c = a * b;
            for (o, v) in out.iter_mut().zip(val) {
                if !v.is_zero() {
                    *o += &c * v;
                }
            }
        }
        out
    }

    /// The table transported along `p` (on the left of values) with inputs
    /// pulled back along `l`: `[x, y]' = p [l x, l y]`.
    pub fn transport(&self, lift: &Matrix, proj: &Matrix, new_degrees: Vec<i32>) -> BracketTable {
        let n = new_degrees.len();
        let mut t = BracketTable::zero(new_degrees);
        for i in 0..n {
            for j in 0..n {
                let v = proj.mul_vec(&self.bracket(&lift.column(i), &lift.column(j)));
                t.set(i, j, v).expect("transport preserves degrees");
            }
        }
        t
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dgla {
    pub complex: ChainComplex,
    pub bracket: BracketTable,
}

impl Dgla {
    pub fn new(complex: ChainComplex, bracket: BracketTable) -> Result<Self> {
        if bracket.degrees() != complex.space.flat_degrees().as_slice() {
            return Err(Error::Shape(
                "bracket table does not match the space".into(),
            ));
        }
        Ok(Dgla { complex, bracket })
    }

    /// Builds the bracket from values given on some ordered pairs; each
    /// missing partner `[y, x]` is filled in by graded antisymmetry.
    pub fn from_pairs<I>(complex: ChainComplex, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Vec<Rational>)>,
    {
        let degrees = complex.space.flat_degrees();
        let mut given: BTreeMap<(usize, usize), Vec<Rational>> = BTreeMap::new();
        for (i, j, v) in pairs {
            given.insert((i, j), v);
        }
        let mut table = BracketTable::zero(degrees.clone());
        for (&(i, j), v) in &given {
            table.set(i, j, v.clone())?;
            if !given.contains_key(&(j, i)) {
                let s = -sign((degrees[i] * degrees[j]).rem_euclid(2) == 1);
                table.set(j, i, v.iter().map(|x| x * &s).collect())?;
            }
        }
        Dgla::new(complex, table)
    }

    pub fn abelian(complex: ChainComplex) -> Self {
        let degrees = complex.space.flat_degrees();
        Dgla {
            complex,
            bracket: BracketTable::zero(degrees),
        }
    }

    pub fn space(&self) -> &GradedSpace {
        &self.complex.space
    }

    pub fn dim(&self) -> usize {
        self.bracket.dim()
    }

    pub fn d_dense(&self) -> Matrix {
        self.complex.d.to_dense()
    }

    pub fn is_two_term(&self) -> bool {
        self.space().degrees().iter().all(|d| *d == -1 || *d == -2)
    }

    pub fn require_two_term(&self) -> Result<()> {
        match self
            .space()
            .degrees()
            .into_iter()
            .find(|d| *d != -1 && *d != -2)
        {
            Some(d) => Err(Error::NotTwoTerm(d)),
            None => Ok(()),
        }
    }

    /// Checks degrees, `d² = 0`, graded antisymmetry, graded Jacobi and the
    /// graded Leibniz rule on every basis tuple.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let labels = self.space().flat_labels();
        let deg = self.space().flat_degrees();
        let n = self.dim();
        let d = self.d_dense();
        let b = &self.bracket;
        let parity = |i: usize| deg[i].rem_euclid(2) == 1;
        let unit = |i: usize| {
            let mut v = vec![zero(); n];
            v[i] = crate::rational::one();
            v
        };
        let add = |a: &mut Vec<Rational>, s: &Rational, x: &[Rational]| {
            for (o, v) in a.iter_mut().zip(x) {
                *o += s * v;
            }
        };

        for (i, l) in labels.iter().enumerate() {
            if deg[i] > 0 {
                report.push(
                    "non-positive degrees",
                    vec![l.clone()],
                    format!("degree {}", deg[i]),
                );
            }
        }
        let dd = d.mul(&d);
        for c in 0..n {
            if !is_zero_vec(&dd.column(c)) {
                report.push("d∘d = 0", vec![labels[c].clone()], "d(d x) ≠ 0");
            }
        }
        for i in 0..n {
            for j in i..n {
                let mut s = b.basis_bracket(i, j);
                let f = sign(parity(i) && parity(j));
                add(&mut s, &f, &b.basis_bracket(j, i));
                if !is_zero_vec(&s) {
                    report.push(
                        "graded antisymmetry",
                        vec![labels[i].clone(), labels[j].clone()],
                        "[x,y] ≠ −(−1)^{|x||y|}[y,x]",
                    );
                }
            }
        }
        for i in 0..n {
            for j in i..n {
                for k in j..n {
                    let (x, y, z) = (unit(i), unit(j), unit(k));
                    let mut s = vec![zero(); n];
                    add(
                        &mut s,
                        &sign(parity(i) && parity(k)),
                        &b.bracket(&x, &b.bracket(&y, &z)),
                    );
                    add(
                        &mut s,
                        &sign(parity(j) && parity(i)),
                        &b.bracket(&y, &b.bracket(&z, &x)),
                    );
                    add(
                        &mut s,
                        &sign(parity(k) && parity(j)),
                        &b.bracket(&z, &b.bracket(&x, &y)),
                    );
                    if !is_zero_vec(&s) {
                        report.push(
                            "graded Jacobi",
                            vec![labels[i].clone(), labels[j].clone(), labels[k].clone()],
                            format!("cyclic sum = {}", fmt_vec(&s, &labels)),
                        );
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let (x, y) = (unit(i), unit(j));
                let lhs = d.mul_vec(&b.bracket(&x, &y));
                let mut rhs = b.bracket(&d.mul_vec(&x), &y);
                add(&mut rhs, &sign(parity(i)), &b.bracket(&x, &d.mul_vec(&y)));
                if lhs != rhs {
                    report.push(
                        "graded Leibniz",
                        vec![labels[i].clone(), labels[j].clone()],
                        "d[x,y] ≠ [dx,y] + (−1)^{|x|}[x,dy]",
                    );
                }
            }
        }
        report
    }

    /// The quotient `𝔤(k) = 𝔤 / 𝔤^{(k)}` of the Postnikov tower, where
    /// `𝔤^{(k)}` is `h(d𝔤_k)` in degree `k` plus everything below.
    pub fn postnikov_stage(&self, k: i32, c: &Contraction) -> Result<Dgla> {
        check_contraction_for(self, c)?;
        let hd = c.h.compose(&c.big.d)?;
        self.postnikov_with(k, &hd.block(k))
    }

    pub(crate) fn postnikov_with(&self, k: i32, hd_k: &Matrix) -> Result<Dgla> {
        if k > 0 {
            return Err(Error::Input(format!(
                "Postnikov stage k = {k} must be non-positive"
            )));
        }
        let space = self.space();
        let nk = space.dim(k);
        // basis of h(d𝔤_k)
        let killed = {
            let cols = independent_columns(hd_k);
            hd_k.select_columns(&cols)
        };
        // cosets of unit vectors, chosen greedily, form the quotient basis
        let mut span = killed.clone();
        let mut chosen = Vec::new();
        for i in 0..nk {
            let mut e = Matrix::zeros(nk, 1);
            e[(i, 0)] = crate::rational::one();
            let cand = span.hstack(&e);
            if cand.rank() > span.rank() {
                span = cand;
                chosen.push(i);
            }
        }
        let r = chosen.len();
        let basis_mat = Matrix::identity(nk).select_columns(&chosen).hstack(&killed);
        let coords = basis_mat
            .inverse()
            .expect("quotient basis plus kernel spans");
        let quot_k = coords.select_rows(&(0..r).collect::<Vec<_>>());

        let new_space =
            GradedSpace::new(space.degrees().into_iter().filter(|j| *j >= k).map(|j| {
                if j == k {
                    (
                        j,
                        chosen.iter().map(|&i| space.labels(k)[i].clone()).collect(),
                    )
                } else {
                    (j, space.labels(j).to_vec())
                }
            }))?;

        // lift: new flat -> old flat, proj: old flat -> new flat
        let n_old = space.total_dim();
        let n_new = new_space.total_dim();
        let mut lift = Matrix::zeros(n_old, n_new);
        let mut proj = Matrix::zeros(n_new, n_old);
        for j in new_space.degrees() {
            let (oo, no) = (space.offset(j), new_space.offset(j));
            if j == k {
                for (t, &i) in chosen.iter().enumerate() {
                    lift[(oo + i, no + t)] = crate::rational::one();
                }
                for t in 0..r {
                    for i in 0..nk {
                        proj[(no + t, oo + i)] = quot_k[(t, i)].clone();
                    }
                }
            } else {
                for i in 0..space.dim(j) {
                    lift[(oo + i, no + i)] = crate::rational::one();
                    proj[(no + i, oo + i)] = crate::rational::one();
                }
            }
        }

        // 𝔤^{(k)} must be an ideal: [𝔤_0, h(d𝔤_k)] ⊆ h(d𝔤_k) when it lands in degree k
        if space.dim(0) > 0 && !killed.is_zero() {
            for a in 0..space.dim(0) {
                for col in 0..killed.cols() {
                    let mut x = vec![zero(); n_old];
                    x[space.global(0, a)] = crate::rational::one();
                    let mut y = vec![zero(); n_old];
                    for i in 0..nk {
                        y[space.offset(k) + i] = killed[(i, col)].clone();
                    }
                    let v = self.bracket.bracket(&x, &y);
                    if !is_zero_vec(&proj.mul_vec(&v)) {
                        return Err(Error::NotAnIdeal(format!(
                            "[{}, h(d𝔤_{k})] leaves h(d𝔤_{k})",
                            space.labels(0)[a]
                        )));
                    }
                }
            }
        }

        let d_old = self.d_dense();
        let d_new = proj.mul(&d_old).mul(&lift);
        let d = GradedMap::from_dense(&new_space, &new_space, -1, &d_new)?;
        let complex = ChainComplex::new(new_space.clone(), d)?;
        let bracket = self
            .bracket
            .transport(&lift, &proj, new_space.flat_degrees());
        Dgla::new(complex, bracket)
    }

    /// The associated reduced DGLA: degrees `≥ 0` dropped and degree −1
    /// replaced by the complement `ℋ_{-1} ⊕ h(d𝔤_{-1})` of the boundaries
    /// `d𝔤_0`.
    pub fn reduce(&self, c: &Contraction) -> Result<Dgla> {
        check_contraction_for(self, c)?;
        let space = self.space();
        let hd = c.h.compose(&c.big.d)?;
        let n1 = space.dim(-1);
        let mut gens: Vec<Vec<Rational>> = c.nabla.block(-1).columns();
        gens.extend(hd.block(-1).columns());
        let ech = echelon_span(n1, &gens);
        let labels_m1: Vec<String> = ech
            .iter()
            .map(|(p, _)| space.labels(-1)[*p].clone())
            .collect();

        let new_space =
            GradedSpace::new(space.degrees().into_iter().filter(|j| *j < 0).map(|j| {
                if j == -1 {
                    (j, labels_m1.clone())
                } else {
                    (j, space.labels(j).to_vec())
                }
            }))?;
        let n_old = space.total_dim();
        let n_new = new_space.total_dim();
        let mut lift = Matrix::zeros(n_old, n_new);
        let mut proj = Matrix::zeros(n_new, n_old);
        for j in new_space.degrees() {
            let (oo, no) = (space.offset(j), new_space.offset(j));
            if j == -1 {
                for (t, (p, v)) in ech.iter().enumerate() {
                    for (i, x) in v.iter().enumerate() {
                        lift[(oo + i, no + t)] = x.clone();
                    }
                    // reduced echelon: the coordinate along basis t is entry p
                    proj[(no + t, oo + p)] = crate::rational::one();
                }
            } else {
                for i in 0..space.dim(j) {
                    lift[(oo + i, no + i)] = crate::rational::one();
                    proj[(no + i, oo + i)] = crate::rational::one();
                }
            }
        }
        let d_new = proj.mul(&self.d_dense()).mul(&lift);
        let d = GradedMap::from_dense(&new_space, &new_space, -1, &d_new)?;
        let complex = ChainComplex::new(new_space.clone(), d)?;
        let bracket = self
            .bracket
            .transport(&lift, &proj, new_space.flat_degrees());
        let out = Dgla::new(complex, bracket)?;
        // values of brackets and d on degree ≤ −1 never land in degree −1, so
        // transport through proj is exact; confirm closure anyway
        for i in 0..n_new {
            for j in 0..n_new {
                let v = self.bracket.bracket(&lift.column(i), &lift.column(j));
                if lift.mul_vec(&proj.mul_vec(&v)) != v {
                    return Err(Error::InvalidDgla(
                        "restricted bracket leaves the chosen complement".into(),
                    ));
                }
            }
        }
        Ok(out)
    }

    /// `𝔨 = 𝔤̃(−2)`: reduce, then take the Postnikov stage at −2.
    pub fn truncate_minus1_minus2(&self, c: &Contraction) -> Result<Dgla> {
        let reduced = self.reduce(c)?;
        let hd = c.h.compose(&c.big.d)?;
        reduced.postnikov_with(-2, &hd.block(-2))
    }

    /// Same complex, bracket with its harmonic component removed:
    /// `[x, y]_a = (id − ∇π)[x, y]`. Only two-term input is accepted, where
    /// the result is again a DGLA.
    pub fn drop_harmonic_bracket(&self, c: &Contraction) -> Result<Dgla> {
        self.require_two_term()?;
        let n = self.dim();
        let keep = Matrix::identity(n).sub(&c.nabla_dense().mul(&c.pi_dense()));
        let bracket =
            self.bracket
                .transport(&Matrix::identity(n), &keep, self.space().flat_degrees());
        Dgla::new(self.complex.clone(), bracket)
    }
}

fn check_contraction_for(g: &Dgla, c: &Contraction) -> Result<()> {
    if c.big != g.complex {
        return Err(Error::InvalidContraction(
            "contraction is for a different complex".into(),
        ));
    }
    let r = validate_contraction(c);
    if !r.is_ok() {
        return Err(Error::InvalidContraction(r.failed_checks().join(", ")));
    }
    Ok(())
}

pub(crate) fn fmt_vec(v: &[Rational], labels: &[String]) -> String {
    let terms: Vec<String> = v
        .iter()
        .zip(labels)
        .filter(|(x, _)| !x.is_zero())
        .map(|(x, l)| format!("{x}·{l}"))
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// The quadratic map `q(x) = ½ s[s⁻¹x, s⁻¹x]` of a two-term DGLA, split
/// along `V₋₁ = B₋₁ ⊕ 𝐯₋₁`.
///
/// `q_b[i][j]` and `q_v[i][j]` are the polarizations `Q(b_i, b_j) =
/// s[s⁻¹b_i, s⁻¹b_j]` in coordinates of the bases `b_basis` (the images
/// `d a` of the `A₀` basis) and `v_minus` (the `∇`-image of `𝐯₋₁`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticData {
    /// Basis labels of `V₀`.
    pub v0_labels: Vec<String>,
    /// Labels of the `B₋₁` basis, one per `A₀` basis vector.
    pub b_labels: Vec<String>,
    pub v_minus_labels: Vec<String>,
    /// `A₀` basis (as `V₀` coordinate columns); `d` maps it onto `b_labels`.
    pub a0_basis: Matrix,
    pub q_b: Vec<Vec<Vec<Rational>>>,
    pub q_v: Vec<Vec<Vec<Rational>>>,
}

impl QuadraticData {
    /// `(q_B(x), q_𝐯(x))` for `x` in `V₀` coordinates.
    pub fn eval(&self, x: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
        let half = frac(1, 2);
        let ev = |form: &Vec<Vec<Vec<Rational>>>, width: usize| {
            let mut out = vec![zero(); width];
            for (i, xi) in x.iter().enumerate() {
                for (j, xj) in x.iter().enumerate() {
                    if xi.is_zero() || xj.is_zero() {
                        continue;
                    }
                    let c = &half * xi * xj;
                    for (o, v) in out.iter_mut().zip(&form[i][j]) {
                        *o += &c * v;
                    }
                }
            }
            out
        };
        (
            ev(&self.q_b, self.b_labels.len()),
            ev(&self.q_v, self.v_minus_labels.len()),
        )
    }

    /// Coefficients of `q_B` (resp. `q_𝐯`) as a homogeneous quadratic
    /// polynomial: key `(i, j)` with `i ≤ j` is the coefficient of `x_i x_j`.
    pub fn monomials(
        &self,
        form: &[Vec<Vec<Rational>>],
    ) -> BTreeMap<(usize, usize), Vec<Rational>> {
        let n = self.v0_labels.len();
        let mut out = BTreeMap::new();
        for i in 0..n {
            for j in i..n {
                let coeff: Vec<Rational> = if i == j {
                    form[i][i].iter().map(|v| v * frac(1, 2)).collect()
                } else {
                    form[i][j].clone()
                };
                if !is_zero_vec(&coeff) {
                    out.insert((i, j), coeff);
                }
            }
        }
        out
    }
}

/// Quadratic data of a two-term DGLA relative to a contraction of it.
pub fn quadratic_data(k: &Dgla, c: &Contraction) -> Result<QuadraticData> {
    k.require_two_term()?;
    check_contraction_for(k, c)?;
    let v = c.suspend();
    let vspace = &v.big.space;
    let n0 = vspace.dim(0);
    let n1 = vspace.dim(-1);
    let split = v.splitting();
    let a0 = split
        .complement
        .get(&0)
        .cloned()
        .unwrap_or_else(|| Matrix::zeros(n0, 0));
    // echelon basis for A₀ so that labels come from pivot coordinates
    let ech = echelon_span(n0, &a0.columns());
    let a0_basis =
        Matrix::from_columns(n0, &ech.iter().map(|(_, v)| v.clone()).collect::<Vec<_>>());
    let b_labels: Vec<String> = ech
        .iter()
        .map(|(p, _)| format!("d({})", vspace.labels(0)[*p]))
        .collect();
    let v_minus_labels = v.small.space.labels(-1).to_vec();

    let kspace = k.space();
    let h1 = v.h.block(-1); // V₋₁ → V₀
    let pi1 = v.pi.block(-1);
    let mut q_b = vec![vec![Vec::new(); n0]; n0];
    let mut q_v = vec![vec![Vec::new(); n0]; n0];
    for i in 0..n0 {
        for j in 0..n0 {
            let gi = kspace.global(-1, i);
            let gj = kspace.global(-1, j);
            let full = k.bracket.basis_bracket(gi, gj);
            let off = kspace.offset(-2);
            let y: Vec<Rational> = (0..n1).map(|t| full[off + t].clone()).collect();
            // B-coordinates of y are the A₀-coordinates of h(y)
            let hy = h1.mul_vec(&y);
            let coords = crate::linalg::solve(&a0_basis, &hy).expect("h lands in A₀");
            q_b[i][j] = coords;
            q_v[i][j] = pi1.mul_vec(&y);
        }
    }
    Ok(QuadraticData {
        v0_labels: vspace.labels(0).to_vec(),
        b_labels,
        v_minus_labels,
        a0_basis,
        q_b,
        q_v,
    })
}
