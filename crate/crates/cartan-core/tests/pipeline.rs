use cartan_core::autgrp::is_admissible;
use cartan_core::diag::standardize;
use cartan_core::grading::verify_grading;
use cartan_core::liealg::{AlgebraKind, LieAlgebra};
use cartan_core::sample::random_normalizer_quasitorus;
use cartan_core::{Field, Shape};
use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;

fn run(kind: AlgebraKind, n: &[u32], trials: usize, seed: u64) {
    let f = Field::prime(5).unwrap();
    let alg = LieAlgebra::shared(kind, &Shape::new(&f, n).unwrap()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fk = kind.form_kind();
    for _ in 0..trials {
        let q = random_normalizer_quasitorus(&mut rng, &alg).unwrap();
        let st = standardize(&q).unwrap_or_else(|e| panic!("{kind:?} {n:?}: {e} on {:?}", q.generators));
        let c = &st.conjugation;
        assert!(st.isomorphic);
        assert!(c.conjugator.in_aut_group(fk).unwrap());
        let f2 = c.conjugator.shape().field().clone();
        for (t, (img, &e)) in c.torus_elements().iter().zip(c.images.iter().zip(&q.orders)) {
            assert!(is_admissible(&f2, fk, t));
            assert!(img.pow(e).is_identity());
        }
        for (g, img) in q.generators.iter().zip(&c.images) {
            assert_eq!(g.order(256), img.order(256));
        }
        assert!(verify_grading(&st.standard).ok);
        assert_eq!(st.original.dims(), st.standard.dims());
    }
}

#[test]
fn standardize_random_w() {
    run(AlgebraKind::W, &[1, 1], 10, 1);
    run(AlgebraKind::W, &[2, 1], 5, 2);
}

#[test]
fn standardize_random_s() {
    run(AlgebraKind::S1, &[1, 1, 1], 5, 3);
}

#[test]
fn standardize_random_h() {
    run(AlgebraKind::H2, &[1, 1], 10, 4);
    run(AlgebraKind::H2, &[2, 1], 5, 7);
    run(AlgebraKind::H2, &[1, 1, 1, 1], 2, 5);
}

#[test]
fn standardize_random_k() {
    run(AlgebraKind::K1, &[1, 1, 1], 5, 6);
}
