//! Kuranishi data of a DGLA concentrated in degrees −1 and −2.
//!
//! With `V = s𝔨`, `V₀ = 𝐯₀ ⊕ A₀` and `V₋₁ = B₋₁ ⊕ 𝐯₋₁`, the map
//! `J = d + q` controls the deformation problem, `F(x) = x + h(q_B(x))` is
//! the Kuranishi map, and `sτ` restricted to `S^c[𝐯₀]` is the formal inverse
//! of the projection of `M_𝔨 = {x₂ + h q_B(x) = 0}` onto `𝐯₀`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::contraction::Contraction;
use crate::dgla::{quadratic_data, Dgla, QuadraticData};
use crate::error::Result;
use crate::exec::{self, Execution};
use crate::hpt::{classifying_coalgebra, compute_tau_and_d, tau_bar, Deformation};
use crate::linalg::{solve, sparse_kernel, Matrix, SparseVec};
use crate::rational::{one, Rational};
use crate::series::VectorSeries;
use crate::symcoalg::{
    add_scaled, apply_coderivation, exponents, Cochain, Elem, Generators, MorphismLift, Word,
};
use crate::validation::ValidationReport;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KuranishiMap {
    /// `J = (d + q_B, q_𝐯)` in the coordinates of `B₋₁ ⊕ 𝐯₋₁`.
    pub j: VectorSeries,
    /// `F(x) = x + h(q_B(x))` on `V₀`.
    pub f: VectorSeries,
}

/// `C_𝔨 ⊆ S^c_{≤N}[𝐯₀]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KuranishiCoalgebra {
    /// `dim C_𝔨 ∩ S^c_{≤ℓ}` for `ℓ = 0..=N`.
    pub filtered_dims: Vec<usize>,
    /// Successive differences of `filtered_dims`.
    pub graded_dims: Vec<usize>,
    /// Basis of `C_𝔨 ∩ S^c_{≤N}`.
    pub basis: Vec<Elem>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub report: ValidationReport,
    pub c_k_filtered_dims: Vec<usize>,
    pub c_v_filtered_dims: Vec<usize>,
}

/// Everything needed to evaluate the Kuranishi data of `𝔨` up to `N`.
#[derive(Debug, Clone)]
pub struct Kuranishi {
    pub k: Dgla,
    pub c: Contraction,
    pub def: Deformation,
    pub quad: QuadraticData,
}

fn unit(w: &Word) -> Elem {
    let mut e = Elem::new();
    e.insert(w.clone(), one());
    e
}

/// Filtered kernel dimensions of a map given column by column on words
/// sorted by length, plus a basis of the full kernel.
fn filtered_kernel(words: &[Word], images: &[Elem], max_len: usize) -> (Vec<usize>, Vec<Elem>) {
    let mut rows: BTreeMap<Word, usize> = BTreeMap::new();
    for img in images {
        for w in img.keys() {
            let n = rows.len();
            rows.entry(w.clone()).or_insert(n);
        }
    }
    let cols: Vec<SparseVec> = images
        .iter()
        .map(|img| img.iter().map(|(w, c)| (rows[w], c.clone())).collect())
        .collect();
    // kernel vectors come out in the order of the column that closes them
    let kernel = sparse_kernel(&cols);
    let dims = (0..=max_len)
        .map(|l| {
            let n = words.iter().take_while(|w| w.len() <= l).count();
            kernel
                .iter()
                .filter(|v| v.keys().next_back().is_some_and(|&j| j < n))
                .count()
        })
        .collect();
    let basis = kernel
        .into_iter()
        .map(|v| v.into_iter().map(|(i, c)| (words[i].clone(), c)).collect())
        .collect();
    (dims, basis)
}

impl Kuranishi {
    pub fn new(k: &Dgla, c: &Contraction, max_len: usize, exec: Execution) -> Result<Self> {
        let quad = quadratic_data(k, c)?;
        let def = compute_tau_and_d(k, c, max_len, exec)?;
        Ok(Kuranishi {
            k: k.clone(),
            c: c.clone(),
            def,
            quad,
        })
    }

    pub fn max_len(&self) -> usize {
        self.def.max_len()
    }

    /// Number of generators of `𝐯₀`.
    pub fn n_v0(&self) -> usize {
        self.c.small.space.dim(-1)
    }

    /// Variables `z_i`, named after the homology classes spanning `𝐯₀`.
    pub fn variables(&self) -> Vec<String> {
        self.c.small.space.labels(-1).to_vec()
    }

    fn v0_labels(&self) -> Vec<String> {
        self.k.space().labels(-1).to_vec()
    }

    /// Basis words of `S^c_{≤N}[𝐯₀]`, by length.
    pub fn v0_words(&self) -> Vec<Word> {
        let gens: Vec<usize> = (0..self.n_v0()).collect();
        (0..=self.max_len())
            .flat_map(|l| self.def.gens().enumerate(&gens, l))
            .collect()
    }

    pub fn kuranishi_map(&self) -> KuranishiMap {
        let q = &self.quad;
        let vars = self.v0_labels();
        let x = VectorSeries::linear(vars.clone(), vars.clone(), 2, &Matrix::identity(vars.len()));
        let qb = x.quadratic(&q.q_b, q.b_labels.clone());
        let qv = x.quadratic(&q.q_v, q.v_minus_labels.clone());
        let hqb = qb.map_linear(&q.a0_basis, vars.clone());
        let mut f = x.clone();
        for (a, b) in f.components.iter_mut().zip(&hqb.components) {
            a.add_scaled(&one(), b);
        }
        // B-coordinates of d x are the A₀-coordinates of h d x
        let v = self.c.suspend();
        let hd = v.h.compose(&v.big.d).expect("shapes").block(0);
        let mb_cols: Vec<Vec<Rational>> = hd
            .columns()
            .iter()
            .map(|col| solve(&q.a0_basis, col).expect("hd lands in A₀"))
            .collect();
        let mb = Matrix::from_columns(q.b_labels.len(), &mb_cols);
        let mut jb = x.map_linear(&mb, q.b_labels.clone());
        for (a, b) in jb.components.iter_mut().zip(&qb.components) {
            a.add_scaled(&one(), b);
        }
        let mut labels = q.b_labels.clone();
        labels.extend(q.v_minus_labels.clone());
        let mut components = jb.components;
        components.extend(qv.components);
        KuranishiMap {
            j: VectorSeries {
                vars,
                labels,
                max_order: 2,
                components,
            },
            f,
        }
    }

    /// `sτ` on `S^c[𝐯₀]`, with `V₀`-valued coefficients.
    pub fn formal_inverse(&self) -> VectorSeries {
        let n1 = self.k.space().dim(-1);
        let mut s = VectorSeries::zero(self.variables(), self.v0_labels(), self.max_len());
        for w in self.v0_words().iter().filter(|w| !w.is_empty()) {
            let v = self.def.tau.cochain.value(w);
            s.set(&exponents(w, self.n_v0()), &v[..n1]);
        }
        s
    }

    /// `Φ₁ … Φ_m`: the `𝐯₋₁` components of the corestriction of `𝒟` on `S^c[𝐯₀]`.
    pub fn obstruction_series(&self) -> VectorSeries {
        let n0 = self.n_v0();
        let labels = self.c.small.space.labels(-2).to_vec();
        let mut s = VectorSeries::zero(self.variables(), labels, self.max_len());
        for w in self.v0_words().iter().filter(|w| !w.is_empty()) {
            let v = self.def.d.corestriction.value(w);
            s.set(&exponents(w, n0), &v[n0..]);
        }
        s
    }

    /// `C_𝔨 = ker 𝒟` on the degree-zero part `S^c_{≤N}[𝐯₀]`.
    pub fn kuranishi_coalgebra(&self, exec: Execution) -> KuranishiCoalgebra {
        let words = self.v0_words();
        let images = exec::map(exec, &words, |w| self.def.apply_d(w));
        let (filtered_dims, basis) = filtered_kernel(&words, &images, self.max_len());
        let graded_dims = graded(&filtered_dims);
        KuranishiCoalgebra {
            filtered_dims,
            graded_dims,
            basis,
        }
    }

    /// `F ∘ (formal inverse) = ∇` and membership of the inverse in `M_𝔨`.
    pub fn inverse_identities(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let q = &self.quad;
        let g = self.formal_inverse();
        let v0 = self.v0_labels();
        let hqb = g
            .quadratic(&q.q_b, q.b_labels.clone())
            .map_linear(&q.a0_basis, v0.clone());
        let mut fg = g.clone();
        for (a, b) in fg.components.iter_mut().zip(&hqb.components) {
            a.add_scaled(&one(), b);
        }
        let nabla = self.c.nabla.block(-1);
        let incl = VectorSeries::linear(g.vars.clone(), v0.clone(), g.max_order, &nabla);
        if fg != incl {
            report.push(
                "F∘inverse = inclusion",
                vec![],
                format!("{:?}", fg.sub(&incl).format()),
            );
        }
        let v = self.c.suspend();
        let hd = v.h.compose(&v.big.d).expect("shapes").block(0);
        let mut a = g.map_linear(&hd, v0);
        for (x, y) in a.components.iter_mut().zip(&hqb.components) {
            x.add_scaled(&one(), y);
        }
        if !a.is_zero() {
            report.push("inverse lies on M_k", vec![], format!("{:?}", a.format()));
        }
        report
    }

    /// The three checks of the isomorphism `C_𝔨 ≅ C[V_𝔨]` on the truncation.
    pub fn verify_theorem(&self, coalg: &KuranishiCoalgebra, exec: Execution) -> TheoremReport {
        let mut report = ValidationReport::default();
        let ugens = self.def.gens().clone();
        let vgens = Generators::from_space(&self.k.space().suspend());
        let (_, delta) = classifying_coalgebra(&self.k);
        let ka = self
            .k
            .drop_harmonic_bracket(&self.c)
            .expect("two-term input");
        let (_, delta_b) = classifying_coalgebra(&ka);

        let words = self.v0_words();
        let mut tb = tau_bar(&self.def, &self.k);
        tb.prepare(&words, exec);
        let images: Vec<Elem> = exec::map(exec, &words, |w| tb.apply(w));

        // C[V_𝔨]: kernel of d + ∂ on S^c_{≤N}[V₀]
        let v0: Vec<usize> = (0..self.k.space().dim(-1)).collect();
        let vwords: Vec<Word> = (0..=self.max_len())
            .flat_map(|l| vgens.enumerate(&v0, l))
            .collect();
        let dv: Vec<Elem> = exec::map(exec, &vwords, |w| apply_coderivation(&vgens, &delta, w));
        let (cv_dims, cv_basis) = filtered_kernel(&vwords, &dv, self.max_len());

        let mut spi = MorphismLift::new(
            vgens.clone(),
            ugens.clone(),
            Cochain::linear(0, &self.c.pi_dense()),
        );
        let mut need: Vec<Word> = images.iter().flat_map(|e| e.keys().cloned()).collect();
        need.extend(vwords.iter().cloned());
        need.sort();
        need.dedup();
        spi.prepare(&need, exec);

        let fmt = |w: &Word| ugens.format_word(w);
        // (a) S^c[π] ∘ τ̄ = id on S^c[𝐯₀]
        for (w, img) in words.iter().zip(&images) {
            if spi.apply_elem(img) != unit(w) {
                report.push(
                    "S^c[pi]∘tau-bar = id",
                    vec![fmt(w)],
                    format!("word length {}", w.len()),
                );
            }
            let mut b = Elem::new();
            for (x, c) in img {
                add_scaled(&mut b, c, &apply_coderivation(&vgens, &delta_b, x));
            }
            if !b.is_empty() {
                report.push(
                    "tau-bar lands in ker(d + ∂_B)",
                    vec![fmt(w)],
                    format!("word length {}", w.len()),
                );
            }
        }
        // (b) τ̄(C_𝔨) ⊆ C[V_𝔨]
        for (i, x) in coalg.basis.iter().enumerate() {
            let y = tb.apply_elem(x);
            let mut dy = Elem::new();
            for (w, c) in &y {
                add_scaled(&mut dy, c, &apply_coderivation(&vgens, &delta, w));
            }
            if !dy.is_empty() {
                report.push(
                    "tau-bar maps C_k into C[V_k]",
                    vec![ugens.format_elem(x)],
                    format!("basis vector {i}"),
                );
            }
        }
        // (c) mutually inverse on the truncation
        if cv_dims != coalg.filtered_dims {
            report.push(
                "dimensions agree",
                vec![],
                format!("C_k {:?} vs C[V_k] {:?}", coalg.filtered_dims, cv_dims),
            );
        }
        for (i, x) in cv_basis.iter().enumerate() {
            let y = spi.apply_elem(x);
            let mut dy = Elem::new();
            for (w, c) in &y {
                add_scaled(&mut dy, c, &self.def.apply_d(w));
            }
            if !dy.is_empty() {
                report.push(
                    "S^c[pi] maps C[V_k] into C_k",
                    vec![vgens.format_elem(x)],
                    format!("basis vector {i}"),
                );
            }
            if &tb.apply_elem(&y) != x {
                report.push(
                    "tau-bar∘S^c[pi] = id on C[V_k]",
                    vec![vgens.format_elem(x)],
                    format!("basis vector {i}"),
                );
            }
        }
        TheoremReport {
            report,
            c_k_filtered_dims: coalg.filtered_dims.clone(),
            c_v_filtered_dims: cv_dims,
        }
    }
}

pub fn graded(filtered: &[usize]) -> Vec<usize> {
    filtered
        .iter()
        .enumerate()
        .map(|(i, d)| if i == 0 { *d } else { d - filtered[i - 1] })
        .collect()
}

pub fn kuranishi_map(k: &Dgla, c: &Contraction) -> Result<KuranishiMap> {
    Ok(Kuranishi::new(k, c, 1, Execution::Sequential)?.kuranishi_map())
}

pub fn formal_inverse(
    k: &Dgla,
    c: &Contraction,
    max_len: usize,
    exec: Execution,
) -> Result<VectorSeries> {
    Ok(Kuranishi::new(k, c, max_len, exec)?.formal_inverse())
}

pub fn obstruction_series(
    k: &Dgla,
    c: &Contraction,
    max_len: usize,
    exec: Execution,
) -> Result<VectorSeries> {
    Ok(Kuranishi::new(k, c, max_len, exec)?.obstruction_series())
}

pub fn kuranishi_coalgebra(
    k: &Dgla,
    c: &Contraction,
    max_len: usize,
    exec: Execution,
) -> Result<KuranishiCoalgebra> {
    Ok(Kuranishi::new(k, c, max_len, exec)?.kuranishi_coalgebra(exec))
}

pub fn verify_theorem(
    k: &Dgla,
    c: &Contraction,
    max_len: usize,
    exec: Execution,
) -> Result<TheoremReport> {
    let kur = Kuranishi::new(k, c, max_len, exec)?;
    let coalg = kur.kuranishi_coalgebra(exec);
    Ok(kur.verify_theorem(&coalg, exec))
}
