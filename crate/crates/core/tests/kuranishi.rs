mod common;

use std::collections::BTreeMap;

use kuranishi_core::contraction::{build_contraction, Contraction};
use kuranishi_core::corpus;
use kuranishi_core::dgla::Dgla;
use kuranishi_core::exec::Execution;
use kuranishi_core::graded::{ChainComplex, GradedSpace};
use kuranishi_core::kuranishi::{kuranishi_map, Kuranishi};
use kuranishi_core::rational::{binomial, int, zero};
use kuranishi_core::report::contraction_for;
use kuranishi_core::symcoalg::{add_term, Elem, Word};

fn two_term_cases() -> Vec<(String, Dgla, Contraction)> {
    let mut out = Vec::new();
    for name in ["circle", "abelian", "obstruction", "heisenberg"] {
        let p = corpus::load(name).unwrap();
        let (c, _) = contraction_for(&p).unwrap();
        out.push((name.to_string(), p.dgla, c));
    }
    let mut r = common::rng(21);
    for i in 0..6 {
        let g = common::random_two_term(&mut r, 3);
        let c = build_contraction(&g.complex).0;
        out.push((format!("random #{i}"), g, c));
    }
    out
}

/// Splits `x` by the diagonal and groups the pieces by one tensor factor.
fn halves(x: &Elem, n: usize, by_right: bool) -> BTreeMap<Word, Elem> {
    let mut out: BTreeMap<Word, Elem> = BTreeMap::new();
    for (w, c) in x {
        // even generators only: Δγ_𝐣 = Σ γ_𝐢 ⊗ γ_{𝐣−𝐢}, every coefficient 1
        let e = kuranishi_core::symcoalg::exponents(w, n);
        let mut left = vec![0u32; n];
        loop {
            let l: Word = (0..n)
                .flat_map(|i| std::iter::repeat_n(i, left[i] as usize))
                .collect();
            let r: Word = (0..n)
                .flat_map(|i| std::iter::repeat_n(i, (e[i] - left[i]) as usize))
                .collect();
            let (key, val) = if by_right { (r, l) } else { (l, r) };
            add_term(out.entry(key).or_default(), val, c.clone());
            let mut i = 0;
            while i < n && left[i] == e[i] {
                left[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
            left[i] += 1;
        }
    }
    out
}

#[test]
fn kuranishi_coalgebra_is_a_subcoalgebra() {
    let n = 8;
    for (name, g, c) in two_term_cases() {
        let kur = Kuranishi::new(&g, &c, n, Execution::default()).unwrap();
        let coalg = kur.kuranishi_coalgebra(Execution::default());
        let nv = kur.n_v0();
        let in_kernel = |x: &Elem| {
            let mut d = Elem::new();
            for (w, c) in x {
                for (v, k) in kur.def.apply_d(w) {
                    add_term(&mut d, v, c * k);
                }
            }
            d.is_empty()
        };
        for x in coalg
            .basis
            .iter()
            .filter(|x| x.keys().all(|w| 2 * w.len() <= n))
        {
            for by_right in [false, true] {
                for (key, part) in halves(x, nv, by_right) {
                    assert!(in_kernel(&part), "{name}: factor next to {key:?}");
                }
            }
        }
    }
}

#[test]
fn unobstructed_iff_full_coalgebra() {
    let n = 7;
    for (name, g, c) in two_term_cases() {
        let kur = Kuranishi::new(&g, &c, n, Execution::default()).unwrap();
        let coalg = kur.kuranishi_coalgebra(Execution::default());
        let nv = kur.n_v0() as u64;
        let full: Vec<usize> = (0..=n as u64)
            .map(|l| binomial(l + nv, nv).to_integer().try_into().unwrap())
            .collect();
        assert_eq!(
            kur.obstruction_series().is_zero(),
            coalg.filtered_dims == full,
            "{name}"
        );
    }
}

fn dgla(minus1: &[&str], minus2: &[&str], pairs: &[(usize, usize, Vec<i64>)]) -> Dgla {
    let space = GradedSpace::new([
        (-1, minus1.iter().map(|s| s.to_string()).collect::<Vec<_>>()),
        (-2, minus2.iter().map(|s| s.to_string()).collect::<Vec<_>>()),
    ])
    .unwrap();
    let complex = ChainComplex::zero_differential(space);
    Dgla::from_pairs(
        complex,
        pairs
            .iter()
            .map(|(i, j, v)| (*i, *j, v.iter().map(|&x| int(x)).collect())),
    )
    .unwrap()
}

#[test]
fn abelian_with_zero_differential() {
    let g = dgla(&["a", "b"], &["c"], &[]);
    let c = build_contraction(&g.complex).0;
    let m = kuranishi_map(&g, &c).unwrap();
    assert!(m.j.components.iter().all(|s| s.is_zero()));
    let f: Vec<(String, String)> = m.f.format();
    assert_eq!(f, vec![("a".into(), "a".into()), ("b".into(), "b".into())]);
    let kur = Kuranishi::new(&g, &c, 5, Execution::default()).unwrap();
    assert!(kur.obstruction_series().is_zero());
    let inv = kur.formal_inverse();
    assert_eq!(inv.format(), f);
}

#[test]
fn fat_point_map_is_identity() {
    let g = dgla(&["x"], &["y"], &[(0, 0, vec![0, 1])]);
    let c = build_contraction(&g.complex).0;
    let m = kuranishi_map(&g, &c).unwrap();
    assert_eq!(m.f.format(), vec![("x".into(), "x".into())]);
    assert_eq!(m.j.format(), vec![("s·y".into(), "1/2*x^2".into())]);
}

#[test]
fn no_degree_minus_one_gives_the_ground_field() {
    let g = dgla(&[], &["y"], &[]);
    let c = build_contraction(&g.complex).0;
    let kur = Kuranishi::new(&g, &c, 4, Execution::default()).unwrap();
    let coalg = kur.kuranishi_coalgebra(Execution::default());
    assert_eq!(coalg.filtered_dims, vec![1; 5]);
    assert_eq!(coalg.graded_dims, vec![1, 0, 0, 0, 0]);
    assert!(kur.formal_inverse().components.is_empty());
    assert!(kur
        .verify_theorem(&coalg, Execution::default())
        .report
        .is_ok());
    assert_eq!(kur.obstruction_series().components[0].coeff(&[]), zero());
}
