//! The perturbation recursion: twisting cochain `τ = τ¹ + τ² + ⋯` from the
//! symmetric coalgebra on `sH(𝔤)` into `𝔤`, together with the perturbed
//! differential `𝒟 = 𝒟¹ + 𝒟² + ⋯` on that coalgebra.
//!
//! With `R_ℓ = ½ Σ_{j+k=ℓ} [τ^j ⌣ τ^k]` we set `τ^ℓ = h R_ℓ` and take
//! `π R_ℓ` as the corestriction of `𝒟^{ℓ−1}`.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

pub use crate::symcoalg::convolution_bracket;

use crate::contraction::{validate_contraction, Contraction};
use crate::dgla::Dgla;
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::linalg::{is_zero_vec, Matrix};
use crate::rational::{frac, zero, Rational};
use crate::symcoalg::{
    add_scaled, apply_coderivation, cce_corestriction, Cochain, Elem, Generators, MorphismLift,
    SymCoalgebra, Word,
};
use crate::validation::ValidationReport;

/// `τ`, stored on the words where it can be nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistingCochain {
    pub max_len: usize,
    pub cochain: Cochain,
}

impl TwistingCochain {
    pub fn component(&self, len: usize) -> Cochain {
        self.cochain.component(len)
    }
}

/// Corestriction of `𝒟`; its length-`ℓ` component is that of `𝒟^{ℓ−1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerturbedDifferential {
    pub max_len: usize,
    pub corestriction: Cochain,
}

impl PerturbedDifferential {
    /// Corestriction of `𝒟^{ℓ−1}`.
    pub fn term(&self, l: usize) -> Cochain {
        self.corestriction.component(l)
    }

    pub fn is_zero(&self) -> bool {
        self.corestriction.is_zero()
    }
}

/// Output of the recursion together with the coalgebra it lives on.
#[derive(Debug, Clone)]
pub struct Deformation {
    /// Generators of `U = sH(𝔤)`.
    pub sym: SymCoalgebra,
    pub tau: TwistingCochain,
    pub d: PerturbedDifferential,
    /// Degrees of the words on which `τ` may be nonzero.
    pub window: (i32, i32),
}

impl Deformation {
    pub fn gens(&self) -> &Generators {
        &self.sym.gens
    }

    pub fn max_len(&self) -> usize {
        self.sym.max_len
    }

    pub fn in_window(&self, w: &[usize]) -> bool {
        let d = self.gens().degree(w);
        d >= self.window.0 && d <= self.window.1
    }

    /// `𝒟` applied to one basis word.
    pub fn apply_d(&self, w: &[usize]) -> Elem {
        apply_coderivation(self.gens(), &self.d.corestriction, w)
    }
}

pub(crate) fn check_inputs(g: &Dgla, c: &Contraction) -> Result<()> {
    if c.big != g.complex {
        return Err(Error::InvalidContraction(
            "contraction is for a different complex".into(),
        ));
    }
    let r = validate_contraction(c);
    if !r.is_ok() {
        return Err(Error::InvalidContraction(r.failed_checks().join(", ")));
    }
    let r = g.validate();
    if !r.is_ok() {
        return Err(Error::InvalidDgla(r.failed_checks().join(", ")));
    }
    Ok(())
}

/// Runs the recursion up to word length `max_len`.
pub fn compute_tau_and_d(
    g: &Dgla,
    c: &Contraction,
    max_len: usize,
    exec: Execution,
) -> Result<Deformation> {
    if max_len == 0 {
        return Err(Error::Input("truncation N must be at least 1".into()));
    }
    check_inputs(g, c)?;
    let u = c.small.space.suspend();
    let gens = Generators::from_space(&u);
    let sym = SymCoalgebra::new(gens, max_len);
    let n = g.dim();
    let (lo, hi) = match (g.space().min_degree(), g.space().max_degree()) {
        (Some(a), Some(b)) => (a + 1, b + 1),
        _ => (1, 0),
    };
    let nabla = c.nabla_dense();
    let pi = c.pi_dense();
    let h = c.h_dense();

    let mut tau = Cochain::linear(-1, &nabla);
    let mut dcore = Cochain::zero(-1, sym.gens.len());
    let half = frac(1, 2);
    for l in 2..=max_len {
        let words: Vec<Word> = sym
            .words(l)
            .iter()
            .filter(|w| {
                let d = sym.gens.degree(w);
                d >= lo && d <= hi
            })
            .cloned()
            .collect();
        let vals = exec::map(exec, &words, |w| {
            let r: Vec<Rational> = convolution_bracket(&sym.gens, &tau, &tau, &g.bracket, w)
                .into_iter()
                .map(|x| x * &half)
                .collect();
            (h.mul_vec(&r), pi.mul_vec(&r))
        });
        for (w, (t, dv)) in words.into_iter().zip(vals) {
            tau.set(w.clone(), t);
            dcore.set(w, dv);
        }
    }
    debug_assert_eq!(tau.dim, n);
    Ok(Deformation {
        sym,
        tau: TwistingCochain {
            max_len,
            cochain: tau,
        },
        d: PerturbedDifferential {
            max_len,
            corestriction: dcore,
        },
        window: (lo, hi),
    })
}

/// `[τ^j ⌣ τ^k](w)`: the convolution restricted to splits of shape `(j, k)`.
pub fn pair_bracket(def: &Deformation, g: &Dgla, j: usize, k: usize, w: &[usize]) -> Vec<Rational> {
    let tj = def.tau.component(j);
    let tk = def.tau.component(k);
    convolution_bracket(def.gens(), &tj, &tk, &g.bracket, w)
}

/// Verifies the identities of the recursion on every basis word where they
/// are not trivially zero by degree.
pub fn check_twisting_cochain(
    def: &Deformation,
    g: &Dgla,
    c: &Contraction,
    exec: Execution,
) -> ValidationReport {
    let mut report = ValidationReport::default();
    let gens = def.gens();
    let tau = &def.tau.cochain;
    let pi = c.pi_dense();
    let h = c.h_dense();
    let d = g.d_dense();
    let gdeg = |k: i32| g.space().dim(k) > 0;
    let udeg = |k: i32| gens.degrees.contains(&k);
    let words = def.sym.all_words();
    let half = frac(1, 2);

    // πτ = τ_H and hτ = 0
    for w in words.iter().filter(|w| !w.is_empty()) {
        let v = tau.value(w);
        let pv = pi.mul_vec(&v);
        let want: Vec<Rational> = if w.len() == 1 {
            (0..gens.len())
                .map(|i| {
                    if i == w[0] {
                        Rational::from_integer(1.into())
                    } else {
                        zero()
                    }
                })
                .collect()
        } else {
            vec![zero(); gens.len()]
        };
        if pv != want {
            report.push(
                "pi∘tau = tau_H",
                vec![gens.format_word(w)],
                format!("length {}", w.len()),
            );
        }
        if !is_zero_vec(&h.mul_vec(&v)) {
            report.push(
                "h∘tau = 0",
                vec![gens.format_word(w)],
                format!("length {}", w.len()),
            );
        }
    }

    // dτ + τ𝒟 = ½[τ ⌣ τ]
    let targets: Vec<&Word> = words
        .iter()
        .filter(|w| !w.is_empty() && gdeg(gens.degree(w) - 2))
        .collect();
    let bad = exec::map(exec, &targets, |w| {
        let mut lhs = d.mul_vec(&tau.value(w));
        let dw = def.apply_d(w);
        let t = tau.apply(&dw);
        for (a, b) in lhs.iter_mut().zip(t) {
            *a += b;
        }
        let rhs: Vec<Rational> = convolution_bracket(gens, tau, tau, &g.bracket, w)
            .into_iter()
            .map(|x| x * &half)
            .collect();
        lhs != rhs
    });
    for (w, b) in targets.iter().zip(bad) {
        if b {
            report.push(
                "twisting cochain identity",
                vec![gens.format_word(w)],
                format!("fails at word length {}", w.len()),
            );
        }
    }

    // 𝒟𝒟 = 0
    let targets: Vec<&Word> = words
        .iter()
        .filter(|w| w.len() >= 2 && udeg(gens.degree(w) - 2))
        .collect();
    let bad = exec::map(exec, &targets, |w| {
        let once = def.apply_d(w);
        let mut twice = Elem::new();
        for (x, cx) in &once {
            add_scaled(&mut twice, cx, &def.apply_d(x));
        }
        !twice.is_empty()
    });
    for (w, b) in targets.iter().zip(bad) {
        if b {
            report.push(
                "D∘D = 0",
                vec![gens.format_word(w)],
                format!("word length {}", w.len()),
            );
        }
    }

    report.merge(check_tau_bar(def, g, exec));
    report
}

/// Target generators `s𝔤` and the corestriction of the Chevalley–Eilenberg
/// differential on them.
pub fn classifying_coalgebra(g: &Dgla) -> (Generators, Cochain) {
    let sg = g.space().suspend();
    let gens = Generators::from_space(&sg);
    let f = cce_corestriction(&gens, Some(&g.d_dense()), &g.bracket);
    (gens, f)
}

/// `τ̄`: the coalgebra morphism with corestriction `sτ` into `𝒞[𝔤]`.
pub fn tau_bar(def: &Deformation, g: &Dgla) -> MorphismLift {
    let target = Generators::from_space(&g.space().suspend());
    MorphismLift::new(def.gens().clone(), target, def.tau.cochain.clone())
}

/// `δ ∘ τ̄ = τ̄ ∘ 𝒟` on the words in the support window of `τ`.
fn check_tau_bar(def: &Deformation, g: &Dgla, exec: Execution) -> ValidationReport {
    let mut report = ValidationReport::default();
    let (target, delta) = classifying_coalgebra(g);
    let mut lift = tau_bar(def, g);
    let words: Vec<Word> = def
        .sym
        .all_words()
        .into_iter()
        .filter(|w| !w.is_empty() && def.in_window(w))
        .collect();
    // 𝒟 maps window words to shorter words one degree lower; prepare both
    let images: Vec<Elem> = exec::map(exec, &words, |w| def.apply_d(w));
    let mut needed = words.clone();
    for img in &images {
        needed.extend(img.keys().cloned());
    }
    needed.sort();
    needed.dedup();
    lift.prepare(&needed, exec);
    let bad = exec::map(
        exec,
        &words.iter().zip(&images).collect::<Vec<_>>(),
        |(w, dw)| {
            let tw = lift.apply(w);
            let mut lhs = Elem::new();
            for (x, cx) in &tw {
                add_scaled(&mut lhs, cx, &apply_coderivation(&target, &delta, x));
            }
            lhs != lift.apply_elem(dw)
        },
    );
    for (w, b) in words.iter().zip(bad) {
        if b {
            report.push(
                "tau-bar intertwines differentials",
                vec![def.gens().format_word(w)],
                format!("word length {}", w.len()),
            );
        }
    }
    report
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormalityReport {
    /// Levels `j + k` at which some `π[τ^j ⌣ τ^k]` is nonzero.
    pub criterion_fails_at: Vec<usize>,
    pub d1_nonzero: bool,
    /// `π[τ^j ⌣ τ^k] = 0` for all `j + k > 2`.
    pub higher_criterion_holds: bool,
    /// Every computed `𝒟^ℓ` with `ℓ ≥ 2` vanishes.
    pub higher_d_vanish: bool,
    /// The criterion forces `higher_d_vanish`; false here means a bug.
    pub consistent: bool,
    pub formal: bool,
}

impl FormalityReport {
    pub fn verdict(&self) -> String {
        if self.criterion_fails_at.is_empty() {
            "formal: π[τ^j ⌣ τ^k] = 0 for all j + k ≥ 2 and 𝒟 = 0".into()
        } else if self.higher_criterion_holds {
            "formal: criterion fails at j + k = 2 only (𝒟¹ ≠ 0), no higher obstructions".into()
        } else {
            let levels: Vec<String> = self
                .criterion_fails_at
                .iter()
                .map(|l| l.to_string())
                .collect();
            format!("criterion fails at j + k = {}", levels.join(", "))
        }
    }
}

pub fn check_formality(
    def: &Deformation,
    g: &Dgla,
    c: &Contraction,
    exec: Execution,
) -> FormalityReport {
    let pi = c.pi_dense();
    let mut fails = Vec::new();
    for l in 2..=def.max_len() {
        let words: Vec<&Word> = def
            .sym
            .words(l)
            .iter()
            .filter(|w| def.in_window(w))
            .collect();
        let hit = exec::map(exec, &words, |w| {
            (1..l).any(|j| !is_zero_vec(&pi.mul_vec(&pair_bracket(def, g, j, l - j, w))))
        });
        if hit.into_iter().any(|b| b) {
            fails.push(l);
        }
    }
    let d1_nonzero = !def.d.term(2).is_zero();
    let higher_d_vanish = (3..=def.max_len()).all(|l| def.d.term(l).is_zero());
    let higher_criterion_holds = fails.iter().all(|&l| l <= 2);
    FormalityReport {
        criterion_fails_at: fails,
        d1_nonzero,
        higher_criterion_holds,
        higher_d_vanish,
        consistent: !higher_criterion_holds || higher_d_vanish,
        formal: higher_criterion_holds,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TruncationComparison {
    /// `τ` of `𝔨_a` equals `τ` of `𝔨`.
    pub tau_identical: bool,
    /// `𝒟` of `𝔨_a` vanishes.
    pub reduced_d_zero: bool,
    pub full_d_zero: bool,
    /// `𝒟` of `𝔨` minus `𝒟` of `𝔨_a`, word by word, is what `𝔨` alone produces.
    pub difference_from_v_part: bool,
}

/// Runs the recursion for `𝔨` and for `𝔨_a` (harmonic bracket part removed).
pub fn compare_truncated_vs_full(
    k: &Dgla,
    c: &Contraction,
    max_len: usize,
    exec: Execution,
) -> Result<TruncationComparison> {
    let ka = k.drop_harmonic_bracket(c)?;
    let full = compute_tau_and_d(k, c, max_len, exec)?;
    let red = compute_tau_and_d(&ka, c, max_len, exec)?;
    let mut diff = full.d.corestriction.clone();
    for (w, v) in &red.d.corestriction.values {
        let s: Vec<Rational> = diff.value(w).iter().zip(v).map(|(a, b)| a - b).collect();
        diff.set(w.clone(), s);
    }
    Ok(TruncationComparison {
        tau_identical: full.tau == red.tau,
        reduced_d_zero: red.d.is_zero(),
        full_d_zero: full.d.is_zero(),
        difference_from_v_part: diff == full.d.corestriction,
    })
}

/// `τ^ℓ` values on the words of length `ℓ`, for reporting.
pub fn tau_table(def: &Deformation) -> BTreeMap<usize, Vec<(Word, Vec<Rational>)>> {
    let mut out: BTreeMap<usize, Vec<(Word, Vec<Rational>)>> = BTreeMap::new();
    for (w, v) in &def.tau.cochain.values {
        out.entry(w.len()).or_default().push((w.clone(), v.clone()));
    }
    out
}

/// Convenience used by tests and reports: is every value of the cochain zero?
pub fn all_zero(c: &Cochain) -> bool {
    c.values.values().all(|v| v.iter().all(Zero::is_zero))
}

/// Matrix of the corestriction on the words of one length (columns in
/// enumeration order).
pub fn corestriction_matrix(sym: &SymCoalgebra, f: &Cochain, len: usize) -> Matrix {
    let cols: Vec<Vec<Rational>> = sym.words(len).iter().map(|w| f.value(w)).collect();
    Matrix::from_columns(f.dim, &cols)
}
