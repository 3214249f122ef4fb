//! Pipelines behind the command line: validate, deform, kuranishi. Each
//! produces a report with a fixed field order, serializable as JSON or text.

use std::fmt::Write as _;

use num_traits::Zero;
use serde::Serialize;

use crate::contraction::{build_contraction, validate_contraction, Contraction};
use crate::dgla::Dgla;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::graded::{GradedMap, GradedSpace};
use crate::hpt::{
    check_formality, check_twisting_cochain, compare_truncated_vs_full, compute_tau_and_d,
    FormalityReport, TruncationComparison,
};
use crate::kuranishi::Kuranishi;
use crate::linalg::Matrix;
use crate::problem::{DegreeSpec, EntrySpec, Problem};
use crate::rational::{self, Rational};
use crate::series::{Series, VectorSeries};
use crate::symcoalg::{Cochain, Generators};
use crate::validation::ValidationReport;

#[derive(Debug, Clone, Copy, Default)]
pub struct Options {
    /// Overrides the problem's `max_degree`.
    pub max_degree: Option<usize>,
    pub exec: Execution,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Term {
    pub label: String,
    pub coeff: String,
}

fn terms(v: &[Rational], labels: &[String]) -> Vec<Term> {
    v.iter()
        .zip(labels)
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, l)| Term {
            label: l.clone(),
            coeff: rational::format(c),
        })
        .collect()
}

fn fmt_terms(t: &[Term]) -> String {
    if t.is_empty() {
        return "0".into();
    }
    t.iter()
        .map(|t| format!("{}·{}", t.coeff, t.label))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn degrees_of(space: &GradedSpace) -> Vec<DegreeSpec> {
    space
        .degrees()
        .into_iter()
        .map(|d| DegreeSpec {
            degree: d,
            basis: space.labels(d).to_vec(),
        })
        .collect()
}

fn entries(m: &GradedMap) -> Vec<EntrySpec> {
    let dense = m.to_dense();
    let src = m.source.flat_labels();
    let tgt = m.target.flat_labels();
    let mut out = Vec::new();
    for j in 0..dense.cols() {
        for i in 0..dense.rows() {
            if !dense[(i, j)].is_zero() {
                out.push(EntrySpec {
                    from: src[j].clone(),
                    to: tgt[i].clone(),
                    coeff: rational::format(&dense[(i, j)]),
                });
            }
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidateReport {
    pub name: String,
    pub ok: bool,
    pub dgla: ValidationReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contraction: Option<ValidationReport>,
}

pub fn validate(p: &Problem) -> ValidateReport {
    let dgla = p.dgla.validate();
    let contraction = p.contraction.as_ref().map(validate_contraction);
    let ok = dgla.is_ok() && contraction.as_ref().is_none_or(ValidationReport::is_ok);
    ValidateReport {
        name: p.spec.name.clone(),
        ok,
        dgla,
        contraction,
    }
}

/// The problem's own contraction when given (validated), otherwise the
/// deterministic one.
pub fn contraction_for(p: &Problem) -> Result<(Contraction, &'static str)> {
    let r = p.dgla.validate();
    if !r.is_ok() {
        return Err(Error::InvalidDgla(r.failed_checks().join(", ")));
    }
    match &p.contraction {
        Some(c) => {
            let r = validate_contraction(c);
            if !r.is_ok() {
                return Err(Error::InvalidContraction(r.failed_checks().join(", ")));
            }
            Ok((c.clone(), "input"))
        }
        None => Ok((build_contraction(&p.dgla.complex).0, "built")),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ContractionOut {
    pub source: String,
    pub homology: Vec<DegreeSpec>,
    pub nabla: Vec<EntrySpec>,
    pub pi: Vec<EntrySpec>,
    pub h: Vec<EntrySpec>,
}

impl ContractionOut {
    fn new(c: &Contraction, source: &str) -> Self {
        ContractionOut {
            source: source.into(),
            homology: degrees_of(&c.small.space),
            nabla: entries(&c.nabla),
            pi: entries(&c.pi),
            h: entries(&c.h),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WordValue {
    pub word: String,
    pub value: Vec<Term>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Level {
    pub length: usize,
    pub entries: Vec<WordValue>,
}

fn levels(c: &Cochain, gens: &Generators, labels: &[String], max_len: usize) -> Vec<Level> {
    (1..=max_len)
        .map(|l| Level {
            length: l,
            entries: c
                .values
                .iter()
                .filter(|(w, _)| w.len() == l)
                .map(|(w, v)| WordValue {
                    word: gens.format_word(w),
                    value: terms(v, labels),
                })
                .collect(),
        })
        .filter(|l| !l.entries.is_empty())
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct FormalityOut {
    pub verdict: String,
    #[serde(flatten)]
    pub report: FormalityReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct DeformReport {
    pub name: String,
    pub max_degree: usize,
    pub ok: bool,
    pub contraction: ContractionOut,
    /// `τ^ℓ` on words of length `ℓ`.
    pub tau: Vec<Level>,
    /// Corestriction of `𝒟^{ℓ−1}` on words of length `ℓ`.
    pub perturbed_differential: Vec<Level>,
    pub formality: FormalityOut,
    pub checks: ValidationReport,
}

pub fn deform(p: &Problem, opts: Options) -> Result<DeformReport> {
    let n = opts.max_degree.unwrap_or(p.spec.max_degree);
    let (c, source) = contraction_for(p)?;
    let g = &p.dgla;
    let def = compute_tau_and_d(g, &c, n, opts.exec)?;
    let checks = check_twisting_cochain(&def, g, &c, opts.exec);
    let formality = check_formality(&def, g, &c, opts.exec);
    let glabels = g.space().flat_labels();
    let ulabels = def.gens().labels.clone();
    Ok(DeformReport {
        name: p.spec.name.clone(),
        max_degree: n,
        ok: checks.is_ok() && formality.consistent,
        contraction: ContractionOut::new(&c, source),
        tau: levels(&def.tau.cochain, def.gens(), &glabels, n),
        perturbed_differential: levels(&def.d.corestriction, def.gens(), &ulabels, n),
        formality: FormalityOut {
            verdict: formality.verdict(),
            report: formality,
        },
        checks,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Component {
    pub label: String,
    pub series: String,
}

fn components(s: &VectorSeries) -> Vec<Component> {
    s.format()
        .into_iter()
        .map(|(label, series)| Component { label, series })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct Coefficient {
    pub monomial: String,
    pub exponent: Vec<u32>,
    pub value: Vec<Term>,
}

fn coefficient_list(
    s: &VectorSeries,
    values: std::collections::BTreeMap<Vec<u32>, Vec<Rational>>,
) -> Vec<Coefficient> {
    let mut out: Vec<Coefficient> = values
        .into_iter()
        .map(|(e, v)| {
            let mut mono = Series::zero(s.vars.len(), usize::MAX);
            mono.set(e.clone(), Rational::from_integer(1.into()));
            Coefficient {
                monomial: mono.format(&s.vars),
                value: terms(&v, &s.labels),
                exponent: e,
            }
        })
        .collect();
    out.sort_by(|a, b| {
        let ta: u32 = a.exponent.iter().sum();
        let tb: u32 = b.exponent.iter().sum();
        ta.cmp(&tb).then(a.exponent.cmp(&b.exponent))
    });
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct QuadraticOut {
    pub b_basis: Vec<String>,
    pub v_minus_basis: Vec<String>,
    pub q_b: Vec<Component>,
    pub q_v: Vec<Component>,
}

#[derive(Debug, Clone, Serialize)]
pub struct InverseOut {
    pub variables: Vec<String>,
    pub series: Vec<Component>,
    /// Values on divided-power words: the series coefficients themselves.
    pub gamma_values: Vec<Coefficient>,
    /// Values on monomial words `b^𝐣`.
    pub monomial_values: Vec<Coefficient>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoalgebraOut {
    pub filtered_dims: Vec<usize>,
    pub graded_dims: Vec<usize>,
    pub basis: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct KuranishiChecks {
    pub twisting: ValidationReport,
    pub inverse: ValidationReport,
    pub theorem: ValidationReport,
    pub c_v_filtered_dims: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct KuranishiReport {
    pub name: String,
    pub max_degree: usize,
    pub ok: bool,
    /// Whether the input had to be reduced and truncated to two terms.
    pub truncated: bool,
    pub k: Vec<DegreeSpec>,
    pub contraction: ContractionOut,
    pub quadratic: QuadraticOut,
    pub j: Vec<Component>,
    pub f: Vec<Component>,
    pub inverse: InverseOut,
    pub obstruction: Vec<Component>,
    pub kuranishi_coalgebra: CoalgebraOut,
    pub formality: FormalityOut,
    pub truncated_vs_full: TruncationComparison,
    pub checks: KuranishiChecks,
}

/// `𝔨` and a contraction for it: the input itself when it is already
/// two-term, otherwise its reduced (−1, −2) truncation.
pub fn two_term(p: &Problem) -> Result<(Dgla, Contraction, &'static str, bool)> {
    let (c, source) = contraction_for(p)?;
    let k = p.dgla.truncate_minus1_minus2(&c)?;
    if k == p.dgla {
        Ok((k, c, source, false))
    } else {
        let (ck, _) = build_contraction(&k.complex);
        Ok((k, ck, "built", true))
    }
}

pub fn kuranishi(p: &Problem, opts: Options) -> Result<KuranishiReport> {
    let n = opts.max_degree.unwrap_or(p.spec.max_degree);
    let (k, c, source, truncated) = two_term(p)?;
    let kur = Kuranishi::new(&k, &c, n, opts.exec)?;
    let twisting = check_twisting_cochain(&kur.def, &k, &c, opts.exec);
    let formality = check_formality(&kur.def, &k, &c, opts.exec);
    let map = kur.kuranishi_map();
    let inv = kur.formal_inverse();
    let obstruction = kur.obstruction_series();
    let coalg = kur.kuranishi_coalgebra(opts.exec);
    let theorem = kur.verify_theorem(&coalg, opts.exec);
    let inverse_checks = kur.inverse_identities();
    let comparison = compare_truncated_vs_full(&k, &c, n, opts.exec)?;

    let q = &kur.quad;
    let vars = map.j.vars.clone();
    let x = VectorSeries::linear(
        vars.clone(),
        q.v0_labels.clone(),
        2,
        &Matrix::identity(vars.len()),
    );
    let ok = twisting.is_ok()
        && inverse_checks.is_ok()
        && theorem.report.is_ok()
        && formality.consistent
        && comparison.tau_identical
        && comparison.reduced_d_zero;
    Ok(KuranishiReport {
        name: p.spec.name.clone(),
        max_degree: n,
        ok,
        truncated,
        k: degrees_of(k.space()),
        contraction: ContractionOut::new(&c, source),
        quadratic: QuadraticOut {
            b_basis: q.b_labels.clone(),
            v_minus_basis: q.v_minus_labels.clone(),
            q_b: components(&x.quadratic(&q.q_b, q.b_labels.clone())),
            q_v: components(&x.quadratic(&q.q_v, q.v_minus_labels.clone())),
        },
        j: components(&map.j),
        f: components(&map.f),
        inverse: InverseOut {
            variables: inv.vars.clone(),
            series: components(&inv),
            gamma_values: coefficient_list(&inv, inv.coefficients()),
            monomial_values: coefficient_list(&inv, inv.monomial_values()),
        },
        obstruction: components(&obstruction),
        kuranishi_coalgebra: CoalgebraOut {
            filtered_dims: coalg.filtered_dims.clone(),
            graded_dims: coalg.graded_dims.clone(),
            basis: coalg
                .basis
                .iter()
                .map(|e| kur.def.gens().format_elem(e))
                .collect(),
        },
        formality: FormalityOut {
            verdict: formality.verdict(),
            report: formality,
        },
        truncated_vs_full: comparison,
        checks: KuranishiChecks {
            twisting,
            inverse: inverse_checks,
            theorem: theorem.report,
            c_v_filtered_dims: theorem.c_v_filtered_dims,
        },
    })
}

pub fn to_json<T: Serialize>(r: &T) -> String {
    serde_json::to_string_pretty(r).expect("serializable") + "\n"
}

fn push_violations(out: &mut String, title: &str, r: &ValidationReport) {
    if r.is_ok() {
        let _ = writeln!(out, "{title}: ok");
        return;
    }
    let _ = writeln!(out, "{title}: {} violation(s)", r.violations.len());
    for v in &r.violations {
        let _ = writeln!(out, "  {} [{}] {}", v.check, v.witness.join(", "), v.detail);
    }
}

fn push_levels(out: &mut String, name: &str, levels: &[Level]) {
    if levels.is_empty() {
        let _ = writeln!(out, "  (zero)");
    }
    for l in levels {
        for e in &l.entries {
            let _ = writeln!(
                out,
                "  {name}^{}({}) = {}",
                l.length,
                e.word,
                fmt_terms(&e.value)
            );
        }
    }
}

impl ValidateReport {
    pub fn to_text(&self) -> String {
        let mut out = format!("problem: {}\n", self.name);
        push_violations(&mut out, "dgla", &self.dgla);
        if let Some(c) = &self.contraction {
            push_violations(&mut out, "contraction", c);
        }
        let _ = writeln!(out, "result: {}", if self.ok { "ok" } else { "FAILED" });
        out
    }
}

impl DeformReport {
    pub fn to_text(&self) -> String {
        let mut out = format!("problem: {}\nN = {}\n", self.name, self.max_degree);
        let _ = writeln!(out, "contraction ({}):", self.contraction.source);
        for d in &self.contraction.homology {
            let _ = writeln!(out, "  H_{} = <{}>", d.degree, d.basis.join(", "));
        }
        let _ = writeln!(out, "twisting cochain:");
        push_levels(&mut out, "tau", &self.tau);
        let _ = writeln!(out, "perturbed differential (corestrictions):");
        push_levels(&mut out, "D", &self.perturbed_differential);
        let _ = writeln!(out, "formality: {}", self.formality.verdict);
        push_violations(&mut out, "identities", &self.checks);
        let _ = writeln!(out, "result: {}", if self.ok { "ok" } else { "FAILED" });
        out
    }
}

impl KuranishiReport {
    pub fn to_text(&self) -> String {
        let mut out = format!("problem: {}\nN = {}\n", self.name, self.max_degree);
        if self.truncated {
            let _ = writeln!(out, "input reduced and truncated to degrees -1, -2");
        }
        for d in &self.k {
            let _ = writeln!(out, "k_{} = <{}>", d.degree, d.basis.join(", "));
        }
        let comp = |out: &mut String, name: &str, cs: &[Component]| {
            if cs.is_empty() {
                let _ = writeln!(out, "{name}: (none)");
            }
            for c in cs {
                let _ = writeln!(out, "{name}[{}] = {}", c.label, c.series);
            }
        };
        comp(&mut out, "q_B", &self.quadratic.q_b);
        comp(&mut out, "q_v", &self.quadratic.q_v);
        comp(&mut out, "J", &self.j);
        comp(&mut out, "F", &self.f);
        comp(&mut out, "inverse", &self.inverse.series);
        let _ = writeln!(out, "inverse on monomials:");
        for c in &self.inverse.monomial_values {
            let _ = writeln!(out, "  {} -> {}", c.monomial, fmt_terms(&c.value));
        }
        comp(&mut out, "Phi", &self.obstruction);
        let _ = writeln!(
            out,
            "C_k dims: graded {:?}, filtered {:?}",
            self.kuranishi_coalgebra.graded_dims, self.kuranishi_coalgebra.filtered_dims
        );
        let _ = writeln!(out, "formality: {}", self.formality.verdict);
        let t = &self.truncated_vs_full;
        let _ = writeln!(
            out,
            "k_a comparison: tau identical {}, D(k_a) = 0 {}",
            t.tau_identical, t.reduced_d_zero
        );
        push_violations(&mut out, "twisting identities", &self.checks.twisting);
        push_violations(&mut out, "inverse identities", &self.checks.inverse);
        push_violations(&mut out, "theorem checks", &self.checks.theorem);
        let _ = writeln!(out, "result: {}", if self.ok { "ok" } else { "FAILED" });
        out
    }
}
