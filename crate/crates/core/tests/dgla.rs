mod common;

use kuranishi_core::contraction::{build_contraction, validate_contraction, Contraction};
use kuranishi_core::corpus;
use kuranishi_core::dgla::{quadratic_data, Dgla};
use kuranishi_core::exec::Execution;
use kuranishi_core::graded::{homology, ChainComplex, GradedMap, GradedSpace};
use kuranishi_core::hpt::{check_formality, compute_tau_and_d};
use kuranishi_core::kuranishi::Kuranishi;
use kuranishi_core::linalg::Matrix;
use kuranishi_core::rational::{zero, Rational};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// `½[x, x] = ∇ q_𝐯(x) + d_V(A₀ q_B(x))` for every `x ∈ 𝔨₋₁`, with
    /// `d_V = −d` the differential of the suspension.
    #[test]
    fn quadratic_reconstruction(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let k = common::random_two_term(&mut r, 3);
        let (c, _) = build_contraction(&k.complex);
        let q = quadratic_data(&k, &c).unwrap();
        let n1 = k.space().dim(-1);
        let mut x = vec![zero(); k.dim()];
        for xi in x.iter_mut().take(n1) {
            *xi = common::rat(&mut r);
        }
        let (b, v) = q.eval(&x[..n1]);
        let half = kuranishi_core::rational::frac(1, 2);
        let want: Vec<Rational> = k.bracket.bracket(&x, &x).into_iter().map(|t| t * &half).collect();

        let mut a = vec![zero(); k.dim()];
        a[..n1].clone_from_slice(&q.a0_basis.mul_vec(&b));
        let mut hv = vec![zero(); c.small.space.total_dim()];
        let off = c.small.space.offset(-2);
        hv[off..off + v.len()].clone_from_slice(&v);
        let got: Vec<Rational> = k
            .d_dense()
            .mul_vec(&a)
            .iter()
            .zip(c.nabla_dense().mul_vec(&hv))
            .map(|(p, q)| q - p)
            .collect();
        prop_assert_eq!(got, want);
    }

    /// Stage `k` of the Postnikov tower keeps homology in degrees `≥ k`
    /// and is the whole algebra once `k` is below every degree.
    #[test]
    fn postnikov_tower(seed in any::<u64>(), dims in prop::collection::vec(0usize..4, 2..5)) {
        let cx = common::random_complex(&mut common::rng(seed), &dims);
        let g = Dgla::abelian(cx);
        let (c, _) = build_contraction(&g.complex);
        let h = homology(&g.complex);
        let bottom = -(dims.len() as i32);
        for k in bottom - 1..=-1 {
            let stage = g.postnikov_stage(k, &c).unwrap();
            prop_assert!(stage.validate().is_ok());
            let hs = homology(&stage.complex);
            for j in bottom..=-1 {
                let want = if j >= k { h.space.dim(j) } else { 0 };
                prop_assert_eq!(hs.space.dim(j), want, "stage {} degree {}", k, j);
            }
            if k < bottom {
                prop_assert_eq!(&stage, &g);
            }
        }
    }
}

#[test]
fn fourterm_tower_and_truncation() {
    let g = corpus::load("fourterm").unwrap().dgla;
    let (c, _) = build_contraction(&g.complex);
    let h = homology(&g.complex);
    for k in -4..=0 {
        let stage = g.postnikov_stage(k, &c).unwrap();
        assert!(stage.validate().is_ok(), "stage {k}");
        let hs = homology(&stage.complex);
        for j in k.max(-3)..=0 {
            assert_eq!(hs.space.dim(j), h.space.dim(j), "stage {k} degree {j}");
        }
    }
    let k = g.truncate_minus1_minus2(&c).unwrap();
    assert!(k.is_two_term());
    let hk = homology(&k.complex);
    assert_eq!(hk.space.dim(-1), h.space.dim(-1));
    assert_eq!(hk.space.dim(-2), h.space.dim(-2));
}

/// Relabels `g` by a permutation within each degree, carrying the contraction
/// along. `perm[i]` is the new position of old basis vector `i`.
fn permute(g: &Dgla, c: &Contraction, perm: &[usize]) -> (Dgla, Contraction) {
    let space = g.space();
    let n = space.total_dim();
    let mut p = Matrix::zeros(n, n);
    for (i, &j) in perm.iter().enumerate() {
        p[(j, i)] = kuranishi_core::rational::one();
    }
    let pinv = p.transpose();
    let old = space.flat_labels();
    let mut labels = vec![String::new(); n];
    for (i, &j) in perm.iter().enumerate() {
        labels[j] = old[i].clone();
    }
    let new_space = GradedSpace::new(space.degrees().into_iter().map(|d| {
        (
            d,
            labels[space.offset(d)..space.offset(d) + space.dim(d)].to_vec(),
        )
    }))
    .unwrap();
    let d =
        GradedMap::from_dense(&new_space, &new_space, -1, &p.mul(&g.d_dense()).mul(&pinv)).unwrap();
    let complex = ChainComplex::new(new_space.clone(), d).unwrap();
    let bracket = g.bracket.transport(&pinv, &p, new_space.flat_degrees());
    let h = Dgla::new(complex.clone(), bracket).unwrap();
    let small = &c.small.space;
    let k = Contraction {
        big: complex,
        small: c.small.clone(),
        nabla: GradedMap::from_dense(small, &new_space, 0, &p.mul(&c.nabla_dense())).unwrap(),
        pi: GradedMap::from_dense(&new_space, small, 0, &c.pi_dense().mul(&pinv)).unwrap(),
        h: GradedMap::from_dense(&new_space, &new_space, 1, &p.mul(&c.h_dense()).mul(&pinv))
            .unwrap(),
    };
    (h, k)
}

/// Reverses the basis inside each degree.
fn reversal(space: &GradedSpace) -> Vec<usize> {
    let mut perm = vec![0; space.total_dim()];
    for d in space.degrees() {
        let (o, n) = (space.offset(d), space.dim(d));
        for i in 0..n {
            perm[o + i] = o + n - 1 - i;
        }
    }
    perm
}

#[test]
fn naturality_under_basis_permutation() {
    let exec = Execution::default();
    let mut cases: Vec<(Dgla, Contraction)> = corpus::names()
        .into_iter()
        .map(|n| {
            let g = corpus::load(n).unwrap().dgla;
            let c = build_contraction(&g.complex).0;
            (g, c)
        })
        .collect();
    let mut r = common::rng(77);
    for _ in 0..5 {
        let g = common::random_two_term(&mut r, 3);
        let c = build_contraction(&g.complex).0;
        cases.push((g, c));
    }
    for (g, c) in &cases {
        let perm = reversal(g.space());
        let (pg, pc) = permute(g, c, &perm);
        assert!(pg.validate().is_ok());
        assert!(validate_contraction(&pc).is_ok());
        let a = compute_tau_and_d(g, c, 6, exec).unwrap();
        let b = compute_tau_and_d(&pg, &pc, 6, exec).unwrap();
        // same homology, so the same words; τ moves with the basis, 𝒟 not at all
        assert_eq!(a.d, b.d);
        for (w, v) in &a.tau.cochain.values {
            let mut moved = vec![zero(); v.len()];
            for (i, x) in v.iter().enumerate() {
                moved[perm[i]] = x.clone();
            }
            assert_eq!(b.tau.cochain.value(w), moved);
        }
        assert_eq!(
            check_formality(&a, g, c, exec),
            check_formality(&b, &pg, &pc, exec)
        );
        if g.is_two_term() {
            let ka = Kuranishi::new(g, c, 6, exec).unwrap();
            let kb = Kuranishi::new(&pg, &pc, 6, exec).unwrap();
            assert_eq!(
                ka.kuranishi_coalgebra(exec).filtered_dims,
                kb.kuranishi_coalgebra(exec).filtered_dims
            );
            assert_eq!(
                ka.obstruction_series().components,
                kb.obstruction_series().components
            );
        }
    }
}

#[test]
fn random_two_term_dglas_validate() {
    let mut r = common::rng(3);
    for _ in 0..20 {
        let g = common::random_two_term(&mut r, 4);
        assert!(g.validate().is_ok());
        let c = build_contraction(&g.complex).0;
        assert_eq!(g.truncate_minus1_minus2(&c).unwrap(), g);
    }
}
