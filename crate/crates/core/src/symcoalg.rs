//! Truncated graded symmetric coalgebras in the divided-power basis.
//!
//! A basis word is a sorted list of generator indices; an even generator
//! repeated `m` times stands for its divided power `γ_m(b)`, and odd
//! generators occur at most once. In this basis every diagonal coefficient
//! is `±1` and products pick up binomial coefficients.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap, HashSet};

use num_traits::{One, Zero};

use crate::dgla::BracketTable;
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::graded::GradedSpace;
use crate::linalg::Matrix;
use crate::rational::{binomial, frac, zero, Rational};

pub type Word = Vec<usize>;

/// Sparse element of a symmetric coalgebra.
pub type Elem = BTreeMap<Word, Rational>;

pub fn add_term(x: &mut Elem, w: Word, c: Rational) {
    if c.is_zero() {
        return;
    }
    match x.entry(w) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

pub fn add_scaled(x: &mut Elem, c: &Rational, y: &Elem) {
    for (w, v) in y {
        add_term(x, w.clone(), c * v);
    }
}

/// One summand of a diagonal: `coeff · sign · left ⊗ right`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub left: Word,
    pub right: Word,
    pub coeff: Rational,
    pub sign: i8,
}

impl Split {
    pub fn scalar(&self) -> Rational {
        if self.sign < 0 {
            -self.coeff.clone()
        } else {
            self.coeff.clone()
        }
    }
}

/// Graded generators of a symmetric coalgebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generators {
    pub labels: Vec<String>,
    pub degrees: Vec<i32>,
}

impl Generators {
    pub fn new(labels: Vec<String>, degrees: Vec<i32>) -> Self {
        assert_eq!(labels.len(), degrees.len());
        Generators { labels, degrees }
    }

    pub fn from_space(space: &GradedSpace) -> Self {
        Generators::new(space.flat_labels(), space.flat_degrees())
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn odd(&self, i: usize) -> bool {
        self.degrees[i].rem_euclid(2) == 1
    }

    pub fn degree(&self, w: &[usize]) -> i32 {
        w.iter().map(|&i| self.degrees[i]).sum()
    }

    pub fn is_word(&self, w: &[usize]) -> bool {
        w.windows(2)
            .all(|p| p[0] < p[1] || (p[0] == p[1] && !self.odd(p[0])))
            && w.iter().all(|&i| i < self.len())
    }

    /// Koszul sign of `left ⊗ right` inside the sorted word: one factor −1
    /// for each odd letter of `right` that precedes an odd letter of `left`.
    fn unshuffle_sign(&self, left: &[usize], right: &[usize]) -> bool {
        let mut neg = false;
        for &l in left.iter().filter(|&&l| self.odd(l)) {
            for &r in right.iter().filter(|&&r| self.odd(r)) {
                if r < l {
                    neg = !neg;
                }
            }
        }
        neg
    }

    /// All splits `Δ(w) = Σ ± left ⊗ right`, including the trivial ones.
    pub fn diagonal(&self, w: &[usize]) -> Vec<Split> {
        let runs = runs(w);
        let mut out = Vec::new();
        let mut choice = vec![0usize; runs.len()];
        loop {
            let mut left = Vec::new();
            let mut right = Vec::new();
            for ((g, m), &c) in runs.iter().zip(&choice) {
                left.extend(std::iter::repeat_n(*g, c));
                right.extend(std::iter::repeat_n(*g, m - c));
            }
            let neg = self.unshuffle_sign(&left, &right);
            out.push(Split {
                left,
                right,
                coeff: Rational::one(),
                sign: if neg { -1 } else { 1 },
            });
            // odometer over the multiplicities
            let mut i = 0;
            loop {
                if i == runs.len() {
                    return out;
                }
                if choice[i] < runs[i].1 {
                    choice[i] += 1;
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }

    /// The `(j, k)` component of the diagonal.
    pub fn diagonal_split(&self, w: &[usize], j: usize, k: usize) -> Result<Vec<Split>> {
        if j + k != w.len() {
            return Err(Error::Shape(format!(
                "split ({j}, {k}) of a word of length {}",
                w.len()
            )));
        }
        Ok(self
            .diagonal(w)
            .into_iter()
            .filter(|s| s.left.len() == j)
            .collect())
    }

    /// Splits with both sides nonempty.
    pub fn reduced_diagonal(&self, w: &[usize]) -> Vec<Split> {
        self.diagonal(w)
            .into_iter()
            .filter(|s| !s.left.is_empty() && !s.right.is_empty())
            .collect()
    }

    /// Product of basis words; `None` when an odd letter would repeat.
    pub fn product(&self, a: &[usize], b: &[usize]) -> Option<(Word, Rational)> {
        let ra = runs(a);
        let rb = runs(b);
        let mut coeff = Rational::one();
        for (g, m) in &ra {
            if let Some((_, n)) = rb.iter().find(|(h, _)| h == g) {
                if self.odd(*g) {
                    return None;
                }
                coeff *= binomial((m + n) as u64, *m as u64);
            }
        }
        if self.unshuffle_sign(a, b) {
            coeff = -coeff;
        }
        let mut w: Word = a.iter().chain(b).copied().collect();
        w.sort_unstable();
        Some((w, coeff))
    }

    pub fn multiply(&self, x: &Elem, y: &Elem) -> Elem {
        let mut out = Elem::new();
        for (a, ca) in x {
            for (b, cb) in y {
                if let Some((w, c)) = self.product(a, b) {
                    add_term(&mut out, w, c * ca * cb);
                }
            }
        }
        out
    }

    /// `x · v` for a vector `v` of generator coordinates.
    pub fn multiply_vector(&self, x: &Elem, v: &[Rational]) -> Elem {
        let mut out = Elem::new();
        for (a, ca) in x {
            for (i, c) in v.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if let Some((w, k)) = self.product(a, &[i]) {
                    add_term(&mut out, w, k * ca * c);
                }
            }
        }
        out
    }

    pub fn format_word(&self, w: &[usize]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        runs(w)
            .into_iter()
            .map(|(g, m)| {
                if m == 1 {
                    self.labels[g].clone()
                } else {
                    format!("γ{}({})", m, self.labels[g])
                }
            })
            .collect::<Vec<_>>()
            .join("·")
    }

    pub fn format_elem(&self, x: &Elem) -> String {
        if x.is_empty() {
            return "0".into();
        }
        x.iter()
            .map(|(w, c)| format!("{}·{}", c, self.format_word(w)))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Words of length `len` in the allowed generators.
    pub fn enumerate(&self, allowed: &[usize], len: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(len);
        self.enum_rec(allowed, 0, len, &mut cur, &mut out);
        out
    }

    fn enum_rec(
        &self,
        allowed: &[usize],
        start: usize,
        left: usize,
        cur: &mut Word,
        out: &mut Vec<Word>,
    ) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for (pos, &g) in allowed.iter().enumerate().skip(start) {
            if self.odd(g) && cur.last() == Some(&g) {
                continue;
            }
            cur.push(g);
            let next = if self.odd(g) { pos + 1 } else { pos };
            self.enum_rec(allowed, next, left - 1, cur, out);
            cur.pop();
        }
    }
}

/// `(generator, multiplicity)` runs of a sorted word.
pub fn runs(w: &[usize]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for &g in w {
        match out.last_mut() {
            Some((h, m)) if *h == g => *m += 1,
            _ => out.push((g, 1)),
        }
    }
    out
}

/// Multiplicity vector of a word.
pub fn exponents(w: &[usize], n: usize) -> Vec<u32> {
    let mut e = vec![0u32; n];
    for &g in w {
        e[g] += 1;
    }
    e
}

/// `S^c_{≤N}[U]` with its basis enumerated per word length.
#[derive(Debug, Clone)]
pub struct SymCoalgebra {
    pub gens: Generators,
    pub max_len: usize,
    words: Vec<Vec<Word>>,
    index: HashMap<Word, usize>,
}

impl SymCoalgebra {
    pub fn new(gens: Generators, max_len: usize) -> Self {
        let all: Vec<usize> = (0..gens.len()).collect();
        Self::on(gens, &all, max_len)
    }

    /// The sub-coalgebra on a subset of the generators.
    pub fn on(gens: Generators, allowed: &[usize], max_len: usize) -> Self {
        let words: Vec<Vec<Word>> = (0..=max_len).map(|l| gens.enumerate(allowed, l)).collect();
        let mut index = HashMap::new();
        for ws in &words {
            for (i, w) in ws.iter().enumerate() {
                index.insert(w.clone(), i);
            }
        }
        SymCoalgebra {
            gens,
            max_len,
            words,
            index,
        }
    }

    pub fn words(&self, len: usize) -> &[Word] {
        self.words.get(len).map_or(&[], |v| v.as_slice())
    }

    pub fn words_upto(&self, len: usize) -> Vec<Word> {
        (0..=len.min(self.max_len))
            .flat_map(|l| self.words(l).iter().cloned())
            .collect()
    }

    pub fn all_words(&self) -> Vec<Word> {
        self.words_upto(self.max_len)
    }

    pub fn dim(&self, len: usize) -> usize {
        self.words(len).len()
    }

    pub fn contains(&self, w: &[usize]) -> bool {
        self.index.contains_key(w)
    }

    /// Position of `w` among the words of its length.
    pub fn position(&self, w: &[usize]) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn check_len(&self, len: usize) -> Result<()> {
        if len > self.max_len {
            Err(Error::Truncation {
                needed: len,
                max: self.max_len,
            })
        } else {
            Ok(())
        }
    }
}

/// A linear map from a symmetric coalgebra into a vector space, stored on
/// basis words. Used for corestrictions and for twisting cochains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain {
    /// Internal degree of the map.
    pub degree: i32,
    /// Dimension of the target.
    pub dim: usize,
    pub values: BTreeMap<Word, Vec<Rational>>,
}

impl Cochain {
    pub fn zero(degree: i32, dim: usize) -> Self {
        Cochain {
            degree,
            dim,
            values: BTreeMap::new(),
        }
    }

    /// A linear map on generators, given by the columns of `m`.
    pub fn linear(degree: i32, m: &Matrix) -> Self {
        let mut c = Cochain::zero(degree, m.rows());
        for i in 0..m.cols() {
            c.set(vec![i], m.column(i));
        }
        c
    }

    pub fn set(&mut self, w: Word, v: Vec<Rational>) {
        assert_eq!(v.len(), self.dim);
        if v.iter().all(Zero::is_zero) {
            self.values.remove(&w);
        } else {
            self.values.insert(w, v);
        }
    }

    pub fn get(&self, w: &[usize]) -> Option<&Vec<Rational>> {
        self.values.get(w)
    }

    pub fn value(&self, w: &[usize]) -> Vec<Rational> {
        self.get(w)
            .cloned()
            .unwrap_or_else(|| vec![zero(); self.dim])
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// The component on words of length `len`.
    pub fn component(&self, len: usize) -> Cochain {
        Cochain {
            degree: self.degree,
            dim: self.dim,
            values: self
                .values
                .iter()
                .filter(|(w, _)| w.len() == len)
                .map(|(w, v)| (w.clone(), v.clone()))
                .collect(),
        }
    }

    pub fn max_len(&self) -> usize {
        self.values.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn apply(&self, x: &Elem) -> Vec<Rational> {
        let mut out = vec![zero(); self.dim];
        for (w, c) in x {
            if let Some(v) = self.get(w) {
                for (o, a) in out.iter_mut().zip(v) {
                    *o += c * a;
                }
            }
        }
        out
    }

    /// Post-composition with a matrix.
    pub fn then(&self, m: &Matrix) -> Cochain {
        let mut c = Cochain::zero(self.degree, m.rows());
        for (w, v) in &self.values {
            c.set(w.clone(), m.mul_vec(v));
        }
        c
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        let mut c = self.clone();
        for (w, v) in &other.values {
            let s: Vec<Rational> = c.value(w).iter().zip(v).map(|(a, b)| a + b).collect();
            c.set(w.clone(), s);
        }
        c
    }
}

/// Value on `w` of the convolution bracket of two degree −1 cochains with
/// values in a graded Lie algebra:
/// `[a ⌣ b](w) = Σ ± (−1)^{|L|} [a(L), b(R)]` over the reduced diagonal.
pub fn convolution_bracket(
    gens: &Generators,
    a: &Cochain,
    b: &Cochain,
    bracket: &BracketTable,
    w: &[usize],
) -> Vec<Rational> {
    let mut out = vec![zero(); bracket.dim()];
    for s in gens.reduced_diagonal(w) {
        let (Some(x), Some(y)) = (a.get(&s.left), b.get(&s.right)) else {
            continue;
        };
        let neg = (s.sign < 0) ^ (gens.degree(&s.left).rem_euclid(2) == 1);
        let v = bracket.bracket(x, y);
        for (o, t) in out.iter_mut().zip(v) {
            if neg {
                *o -= t;
            } else {
                *o += t;
            }
        }
    }
    out
}

/// Applies the coderivation with corestriction `f` to one basis word:
/// `D(w) = Σ ± (−1)^{|f||L|} L · f(R)` over splits with `R` nonempty.
pub fn apply_coderivation(gens: &Generators, f: &Cochain, w: &[usize]) -> Elem {
    let mut out = Elem::new();
    let f_odd = f.degree.rem_euclid(2) == 1;
    for s in gens.diagonal(w) {
        if s.right.is_empty() {
            continue;
        }
        let Some(v) = f.get(&s.right) else { continue };
        let neg = (s.sign < 0) ^ (f_odd && gens.degree(&s.left).rem_euclid(2) == 1);
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if let Some((word, k)) = gens.product(&s.left, &[i]) {
                let t = k * c;
                add_term(&mut out, word, if neg { -t } else { t });
            }
        }
    }
    out
}

pub fn apply_coderivation_elem(gens: &Generators, f: &Cochain, x: &Elem) -> Elem {
    let mut out = Elem::new();
    for (w, c) in x {
        add_scaled(&mut out, c, &apply_coderivation(gens, f, w));
    }
    out
}

/// Columns of the lifted coderivation on every word of `alg`.
pub fn lift_coderivation(
    alg: &SymCoalgebra,
    f: &Cochain,
    exec: Execution,
) -> Result<BTreeMap<Word, Elem>> {
    alg.check_len(f.max_len())?;
    let words = alg.all_words();
    let cols = exec::map(exec, &words, |w| apply_coderivation(&alg.gens, f, w));
    Ok(words.into_iter().zip(cols).collect())
}

/// Corestriction of the Chevalley–Eilenberg differential of a DGLA on its
/// suspension: `−s d s⁻¹` on generators and `½ s[σ ⌣ σ]` on length two,
/// where `σ = s⁻¹`.
pub fn cce_corestriction(gens: &Generators, d: Option<&Matrix>, bracket: &BracketTable) -> Cochain {
    let n = gens.len();
    let mut f = Cochain::zero(-1, n);
    if let Some(d) = d {
        f = Cochain::linear(-1, &d.scale(&-Rational::one()));
    }
    let sigma = Cochain::linear(-1, &Matrix::identity(n));
    let half = frac(1, 2);
    let all: Vec<usize> = (0..n).collect();
    for w in gens.enumerate(&all, 2) {
        let v = convolution_bracket(gens, &sigma, &sigma, bracket, &w);
        f.set(w, v.into_iter().map(|x| x * &half).collect());
    }
    f
}

/// The coalgebra morphism with a given degree-0 corestriction, evaluated
/// through the exponential formula `Φ_k = (1/k) μ(Φ_{k−1} ⊗ φ)Δ̄`.
#[derive(Debug, Clone)]
pub struct MorphismLift {
    pub source: Generators,
    pub target: Generators,
    pub phi: Cochain,
    table: HashMap<Word, Vec<Elem>>,
}

impl MorphismLift {
    pub fn new(source: Generators, target: Generators, phi: Cochain) -> Self {
        assert_eq!(phi.dim, target.len());
        MorphismLift {
            source,
            target,
            phi,
            table: HashMap::new(),
        }
    }

    /// Fills the table for `words` and all their sub-words.
    pub fn prepare(&mut self, words: &[Word], exec: Execution) {
        let mut need: HashSet<Word> = HashSet::new();
        for w in words {
            if need.contains(w) || self.table.contains_key(w) {
                continue;
            }
            for s in self.source.diagonal(w) {
                if !self.table.contains_key(&s.left) {
                    need.insert(s.left);
                }
            }
        }
        let mut by_len: BTreeMap<usize, Vec<Word>> = BTreeMap::new();
        for w in need {
            by_len.entry(w.len()).or_default().push(w);
        }
        for (_, mut level) in by_len {
            level.sort();
            let vals = exec::map(exec, &level, |w| self.components(w));
            for (w, v) in level.into_iter().zip(vals) {
                self.table.insert(w, v);
            }
        }
    }

    fn components(&self, w: &Word) -> Vec<Elem> {
        if w.is_empty() {
            let mut unit = Elem::new();
            unit.insert(Vec::new(), Rational::one());
            return vec![unit];
        }
        let mut comps = Vec::with_capacity(w.len() + 1);
        comps.push(Elem::new());
        let mut first = Elem::new();
        if let Some(v) = self.phi.get(w) {
            for (i, c) in v.iter().enumerate() {
                add_term(&mut first, vec![i], c.clone());
            }
        }
        comps.push(first);
        let splits = self.source.reduced_diagonal(w);
        for k in 2..=w.len() {
            let mut acc = Elem::new();
            for s in &splits {
                if s.left.len() < k - 1 {
                    continue;
                }
                let Some(v) = self.phi.get(&s.right) else {
                    continue;
                };
                let prev = &self.table[&s.left];
                let Some(pk) = prev.get(k - 1) else { continue };
                if pk.is_empty() {
                    continue;
                }
                let term = self.target.multiply_vector(pk, v);
                add_scaled(&mut acc, &s.scalar(), &term);
            }
            let inv = frac(1, k as i64);
            comps.push(acc.into_iter().map(|(w, c)| (w, c * &inv)).collect());
        }
        comps
    }

    /// `Φ(w)`; the word must have been prepared.
    pub fn apply(&self, w: &[usize]) -> Elem {
        let comps = self
            .table
            .get(w)
            .cloned()
            .unwrap_or_else(|| self.components(&w.to_vec()));
        let mut out = Elem::new();
        for c in comps {
            add_scaled(&mut out, &Rational::one(), &c);
        }
        out
    }

    pub fn apply_elem(&self, x: &Elem) -> Elem {
        let mut out = Elem::new();
        for (w, c) in x {
            add_scaled(&mut out, c, &self.apply(w));
        }
        out
    }
}

/// Convenience: lift and evaluate a morphism on every word of `alg`.
pub fn lift_morphism(
    alg: &SymCoalgebra,
    target: &Generators,
    phi: &Cochain,
    exec: Execution,
) -> Result<BTreeMap<Word, Elem>> {
    alg.check_len(phi.max_len())?;
    let mut lift = MorphismLift::new(alg.gens.clone(), target.clone(), phi.clone());
    let words = alg.all_words();
    lift.prepare(&words, exec);
    Ok(words
        .into_iter()
        .map(|w| {
            let v = lift.apply(&w);
            (w, v)
        })
        .collect())
}

/// Dense matrix of a map between truncated coalgebras, columns indexed by
/// `source` words and rows by `target` words (in enumeration order).
pub fn to_matrix(source: &[Word], target: &[Word], cols: &BTreeMap<Word, Elem>) -> Matrix {
    let pos: HashMap<&Word, usize> = target.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut m = Matrix::zeros(target.len(), source.len());
    for (j, w) in source.iter().enumerate() {
        for (t, c) in &cols[w] {
            let i = pos[t];
            m[(i, j)] = c.clone();
        }
    }
    m
}
