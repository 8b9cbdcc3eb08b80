use std::sync::Arc;

use cartan_core::autgrp::Flag;
use cartan_core::diag::symplectic_eigenbasis;
use cartan_core::field::FieldEmbedding;
use cartan_core::grading::{
    coarsen, grading_from_quasitorus, quasitorus_from_grading, standard_grading, verify_grading, FgAbelianGroup,
    GroupHom,
};
use cartan_core::liealg::{AlgebraKind, LieAlgebra};
use cartan_core::linalg::Matrix;
use cartan_core::sample::{random_group, random_standard_hom, random_symplectic_monomials};
use cartan_core::{Field, Shape};
use proptest::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

fn algebras() -> Vec<Arc<LieAlgebra>> {
    let f = Field::prime(5).unwrap();
    [
        (AlgebraKind::W, vec![1]),
        (AlgebraKind::W, vec![1, 1]),
        (AlgebraKind::S1, vec![1, 1, 1]),
        (AlgebraKind::H2, vec![1, 1]),
        (AlgebraKind::H2, vec![2, 1]),
        (AlgebraKind::K1, vec![1, 1, 1]),
    ]
    .into_iter()
    .map(|(k, n)| LieAlgebra::shared(k, &Shape::new(&f, &n).unwrap()).unwrap())
    .collect()
}

/// Hermite-style echelon form over Z; rows span the lattice.
fn echelon(mut rows: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    for c in 0..cols {
        loop {
            rows.retain(|r| r.iter().any(|&x| x != 0));
            let nz: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][c] != 0).collect();
            if nz.len() <= 1 {
                if let Some(&i) = nz.first() {
                    out.push(rows.remove(i));
                }
                break;
            }
            let piv = *nz.iter().min_by_key(|&&i| rows[i][c].abs()).unwrap();
            let pr = rows[piv].clone();
            for &i in &nz {
                if i != piv {
                    let q = rows[i][c] / pr[c];
                    for k in 0..cols {
                        rows[i][k] -= q * pr[k];
                    }
                }
            }
        }
    }
    out
}

/// Membership of `v` in the subgroup generated by `gens` of `Z^r × Π Z/d`.
fn in_subgroup(g: &FgAbelianGroup, gens: &[Vec<i64>], v: &[i64]) -> bool {
    let n = g.len();
    let mut rows: Vec<Vec<i64>> = gens.to_vec();
    for (j, &d) in g.torsion.iter().enumerate() {
        let mut r = vec![0; n];
        r[g.rank + j] = d as i64;
        rows.push(r);
    }
    let basis = echelon(rows);
    let mut rest = v.to_vec();
    for b in &basis {
        let c = b.iter().position(|&x| x != 0).unwrap();
        if rest[c] % b[c] != 0 {
            return false;
        }
        let q = rest[c] / b[c];
        for k in 0..n {
            rest[k] -= q * b[k];
        }
    }
    rest.iter().all(|&x| x == 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn standard_gradings_are_gradings(seed in any::<u64>(), which in 0usize..6) {
        let alg = &algebras()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let group = random_group(&mut rng, 5);
        let hom = random_standard_hom(&mut rng, alg.kind().form_kind(), alg.shape().m(), &group);
        let gr = standard_grading(alg, &hom).unwrap();
        prop_assert!(verify_grading(&gr).ok);
        prop_assert_eq!(gr.total_dim(), alg.dim());
        // the support generates the image of the homomorphism
        let support = gr.support();
        for img in &hom.images {
            prop_assert!(in_subgroup(&group, &support, img));
        }
        // coarsening along the identity changes nothing
        prop_assert_eq!(coarsen(&gr, &GroupHom::identity(&group)).unwrap(), gr);
    }

    #[test]
    fn coarsening_composes(seed in any::<u64>(), which in 0usize..6) {
        let alg = &algebras()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = alg.shape().m();
        let z = FgAbelianGroup::free(1);
        let hom = random_standard_hom(&mut rng, alg.kind().form_kind(), m, &z);
        let gr = standard_grading(alg, &hom).unwrap();
        let d = [2u64, 3, 4, 6][(rng.next_u64() % 4) as usize];
        let zd = FgAbelianGroup::new(0, vec![d], Some(5)).unwrap();
        let q = GroupHom::new(z, zd.clone(), vec![vec![1]]).unwrap();
        let direct = standard_grading(alg, &hom.then(&q).unwrap()).unwrap();
        prop_assert_eq!(coarsen(&gr, &q).unwrap(), direct);
    }

    #[test]
    fn finite_round_trip(seed in any::<u64>(), which in 0usize..6) {
        let alg = &algebras()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let group = loop {
            let g = random_group(&mut rng, 5);
            if g.is_finite() {
                break g;
            }
        };
        let hom = random_standard_hom(&mut rng, alg.kind().form_kind(), alg.shape().m(), &group);
        let gr = standard_grading(alg, &hom).unwrap();
        let q = quasitorus_from_grading(&gr).unwrap();
        let back = grading_from_quasitorus(&q).unwrap();
        let f = alg.field();
        let lifted = gr.lift(q.algebra.clone(), &FieldEmbedding::new(f, q.algebra.field()).unwrap());
        prop_assert_eq!(back, lifted);
    }

    #[test]
    fn symplectic_basis_invariants(seed in any::<u64>(), r in 1usize..=3, mixed in any::<bool>()) {
        let f = Field::prime(5).unwrap();
        let n: Vec<u32> = (0..2 * r).map(|i| if mixed && (i == 0 || i == 2 * r - 1) { 2 } else { 1 }).collect();
        let shape = Shape::new(&f, &n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens = random_symplectic_monomials(&mut rng, &shape);
        let orders: Vec<u64> = gens.iter().map(|g| g.order(1 << 10).unwrap()).collect();
        let e = orders.iter().fold(1, |a, &b| cartan_core::field::lcm(a, b));
        let big = f.enlarged_for_order(e).unwrap();
        let emb = FieldEmbedding::new(&f, &big).unwrap();
        let ops: Vec<Matrix> = gens.iter().map(|g| g.linear_part().map(|x| emb.map(x))).collect();
        let flag = Flag::new(&n);
        let basis = symplectic_eigenbasis(&big, &flag, &ops, &orders).unwrap();
        prop_assert!(basis.check(&big, &flag, &ops, &orders));
    }
}
