//! Seeded random instances: groups, standard homomorphisms and quasi-tori
//! in the normalizer of the standard torus.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::autgrp::ContAut;
use crate::dpa::Shape;
use crate::error::Result;
use crate::field::{gcd, Field, Scalar};
use crate::grading::{FgAbelianGroup, GroupHom, QuasiTorusRep};
use crate::liealg::{FormKind, LieAlgebra};

fn below(rng: &mut dyn RngCore, n: u64) -> u64 {
    rng.next_u64() % n
}

fn nonzero(rng: &mut dyn RngCore, f: &Field) -> Scalar {
    let g = f.primitive_element();
    f.pow(g, below(rng, f.order() - 1) as i64)
}

fn shuffle<T>(rng: &mut dyn RngCore, v: &mut [T]) {
    for i in (1..v.len()).rev() {
        let j = below(rng, i as u64 + 1) as usize;
        v.swap(i, j);
    }
}

/// One of `Z`, `Z/d`, `Z × Z/d` with `2 ≤ d ≤ 12` prime to `p`.
pub fn random_group(rng: &mut dyn RngCore, p: u32) -> FgAbelianGroup {
    let d = loop {
        let d = 2 + below(rng, 11);
        if gcd(d, p as u64) == 1 {
            break d;
        }
    };
    match below(rng, 3) {
        0 => FgAbelianGroup::free(1),
        1 => FgAbelianGroup { rank: 0, torsion: vec![d] },
        _ => FgAbelianGroup { rank: 1, torsion: vec![d] },
    }
}

fn random_elem(rng: &mut dyn RngCore, g: &FgAbelianGroup) -> Vec<i64> {
    let mut v: Vec<i64> = (0..g.rank).map(|_| below(rng, 7) as i64 - 3).collect();
    v.extend(g.torsion.iter().map(|&d| below(rng, d) as i64));
    v
}

/// A homomorphism `Z^m → G` that factors through the weight lattice of
/// the kind.
pub fn random_standard_hom(rng: &mut dyn RngCore, kind: FormKind, m: usize, group: &FgAbelianGroup) -> GroupHom {
    let mut images: Vec<Vec<i64>> = (0..m).map(|_| random_elem(rng, group)).collect();
    if matches!(kind, FormKind::H | FormKind::K) {
        let r = m / 2;
        let c = random_elem(rng, group);
        for i in 0..r {
            images[i + r] = group.reduce(c.iter().zip(&images[i]).map(|(a, b)| a - b).collect());
        }
        if kind == FormKind::K {
            images[m - 1] = group.reduce(c);
        }
    }
    GroupHom::new(FgAbelianGroup::free(m), group.clone(), images).expect("free domain")
}

/// Index permutation (0-based, `perm[i]` = target of `x_i`) respecting the
/// flag, and for H/K mapping pairs to pairs, together with the sign that a
/// pair picks up (`-1` when its two members are exchanged).
fn random_permutation(rng: &mut dyn RngCore, kind: FormKind, n: &[u32]) -> (Vec<usize>, Vec<bool>) {
    let m = n.len();
    let mut perm: Vec<usize> = (0..m).collect();
    let mut flipped = vec![false; m];
    match kind {
        FormKind::W | FormKind::S => {
            let mut classes: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
            for (i, &x) in n.iter().enumerate() {
                classes.entry(x).or_default().push(i);
            }
            for members in classes.values() {
                let mut targets = members.clone();
                shuffle(rng, &mut targets);
                for (&i, &t) in members.iter().zip(&targets) {
                    perm[i] = t;
                }
            }
        }
        FormKind::H | FormKind::K => {
            let r = m / 2;
            let mut classes: BTreeMap<(u32, u32), Vec<usize>> = BTreeMap::new();
            for i in 0..r {
                classes.entry((n[i], n[i + r])).or_default().push(i);
            }
            for (&(a, b), members) in &classes {
                let mut targets = members.clone();
                shuffle(rng, &mut targets);
                for (&i, &t) in members.iter().zip(&targets) {
                    let flip = a == b && below(rng, 2) == 1;
                    flipped[i] = flip;
                    if flip {
                        perm[i] = t + r;
                        perm[i + r] = t;
                    } else {
                        perm[i] = t;
                        perm[i + r] = t + r;
                    }
                }
            }
        }
    }
    (perm, flipped)
}

/// A monomial automorphism with the given index permutation; for H and K
/// it multiplies `ω_H` by `c`, and for K it sends `x_m` to `c x_m`.
fn monomial_with(
    rng: &mut dyn RngCore,
    kind: FormKind,
    shape: &Shape,
    perm: &[usize],
    flipped: &[bool],
    c: Scalar,
) -> ContAut {
    let f = shape.field();
    let m = shape.m();
    let mut coeffs: Vec<Scalar> = (0..m).map(|_| nonzero(rng, f)).collect();
    if matches!(kind, FormKind::H | FormKind::K) {
        let r = m / 2;
        for i in 0..r {
            let sign = if flipped[i] { f.from_i64(-1) } else { Scalar::ONE };
            coeffs[i + r] = f.div(f.mul(sign, c), coeffs[i]).unwrap();
        }
        if kind == FormKind::K {
            coeffs[m - 1] = c;
        }
    }
    let targets: Vec<usize> = perm.iter().map(|&j| j + 1).collect();
    ContAut::monomial(shape, &targets, &coeffs).expect("flag respected")
}

/// `λ(t)` commuting with the permutation part of `perm`: `t` is constant on
/// its orbits and admissible for the kind.
fn commuting_diagonal(
    rng: &mut dyn RngCore,
    kind: FormKind,
    shape: &Shape,
    perm: &[usize],
    symplectic: bool,
) -> ContAut {
    let f = shape.field();
    let m = shape.m();
    let mut orbit = vec![usize::MAX; m];
    let mut reps = Vec::new();
    for i in 0..m {
        if orbit[i] == usize::MAX {
            let mut j = i;
            while orbit[j] == usize::MAX {
                orbit[j] = reps.len();
                j = perm[j];
            }
            reps.push(i);
        }
    }
    let u = if symplectic { Scalar::ONE } else { nonzero(rng, f) };
    let c = f.mul(u, u);
    let mut val: Vec<Option<Scalar>> = vec![None; reps.len()];
    let mut t = vec![Scalar::ONE; m];
    match kind {
        FormKind::W | FormKind::S => {
            for v in val.iter_mut() {
                *v = Some(nonzero(rng, f));
            }
        }
        FormKind::H | FormKind::K => {
            let r = (m / 2).max(1);
            let pr = |i: usize| if i < r { i + r } else { i - r };
            for (o, &i) in reps.iter().enumerate() {
                if i >= 2 * r || val[o].is_some() {
                    continue;
                }
                let partner = orbit[pr(i)];
                if partner == o {
                    let sign = if below(rng, 2) == 1 { f.from_i64(-1) } else { Scalar::ONE };
                    val[o] = Some(f.mul(sign, u));
                } else {
                    let x = nonzero(rng, f);
                    val[o] = Some(x);
                    val[partner] = Some(f.div(c, x).unwrap());
                }
            }
            if kind == FormKind::K {
                val[orbit[m - 1]] = Some(c);
            }
        }
    }
    for i in 0..m {
        t[i] = val[orbit[i]].unwrap();
    }
    ContAut::diagonal(shape, &t).expect("nonzero entries")
}

/// A random monomial generator (plus a commuting diagonal one) of a
/// quasi-torus in the normalizer of the standard torus of the algebra.
pub fn random_normalizer_quasitorus(rng: &mut dyn RngCore, algebra: &Arc<LieAlgebra>) -> Result<QuasiTorusRep> {
    let kind = algebra.kind().form_kind();
    let shape = algebra.shape();
    let (perm, flipped) = random_permutation(rng, kind, shape.n());
    let c = nonzero(rng, shape.field());
    let g = monomial_with(rng, kind, shape, &perm, &flipped, c);
    let d = commuting_diagonal(rng, kind, shape, &perm, false);
    QuasiTorusRep::new(algebra.clone(), vec![g, d], None)
}

/// Commuting monomial symplectic automorphisms of `O(2r; n)` (form
/// multiplier `1`).
pub fn random_symplectic_monomials(rng: &mut dyn RngCore, shape: &Shape) -> Vec<ContAut> {
    let (perm, flipped) = random_permutation(rng, FormKind::H, shape.n());
    let g = monomial_with(rng, FormKind::H, shape, &perm, &flipped, Scalar::ONE);
    let d = commuting_diagonal(rng, FormKind::H, shape, &perm, true);
    vec![g, d]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::AlgebraKind;
    use rand_chacha::ChaCha8Rng;
    use rand_core::SeedableRng;

    #[test]
    fn samples_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = Field::prime(5).unwrap();
        for (kind, n) in [
            (AlgebraKind::W, vec![1, 1]),
            (AlgebraKind::S1, vec![1, 1, 1]),
            (AlgebraKind::H2, vec![1, 1]),
            (AlgebraKind::K1, vec![1, 1, 1]),
        ] {
            let alg = LieAlgebra::shared(kind, &Shape::new(&f, &n).unwrap()).unwrap();
            for _ in 0..5 {
                let q = random_normalizer_quasitorus(&mut rng, &alg).unwrap();
                assert!(q.generators.iter().all(|g| g.normalizes_torus(kind.form_kind())));
            }
        }
        let sh = Shape::new(&f, &[2, 1, 1, 2]).unwrap();
        for _ in 0..10 {
            for g in random_symplectic_monomials(&mut rng, &sh) {
                assert_eq!(g.form_multiplier(FormKind::H), Some(Scalar::ONE));
            }
        }
    }
}
