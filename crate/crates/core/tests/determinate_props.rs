// Copyright 2026 The qpt Contributors
// SPDX-License-Identifier: Apache-2.0

use proptest::prelude::*;
use qpt_core::determinate::{build_determinate, DeterminateSublattice, ObservableSpec};
use qpt_core::lattice::Subspace;
use qpt_core::linalg::random;
use qpt_core::{ComplexVector, Tolerance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn random_d(dim: usize, degenerate: bool, rng: &mut ChaCha8Rng) -> DeterminateSublattice {
    let psi = random::state(dim, rng);
    let r = if degenerate {
        let basis = random::frame(dim, dim, rng);
        let split = rng.random_range(1..dim);
        ObservableSpec::new(
            vec![
                ("lo".into(), Subspace::span(&basis[..split], dim, tol()).unwrap()),
                ("hi".into(), Subspace::span(&basis[split..], dim, tol()).unwrap()),
            ],
            tol(),
        )
        .unwrap()
    } else {
        ObservableSpec::identity(dim)
    };
    build_determinate(&psi, &r, tol()).unwrap()
}

/// A probe member: random ray subset plus a random subspace of K.
fn probe(d: &DeterminateSublattice, rng: &mut ChaCha8Rng) -> Subspace {
    let rays: Vec<usize> = (0..d.rays().len()).filter(|_| rng.random_bool(0.5)).collect();
    let k = d.complement();
    let take = rng.random_range(0..=k.rank());
    let vs: Vec<ComplexVector> = random::frame(k.rank().max(1), take, rng)
        .iter()
        .map(|c| {
            k.basis()
                .iter()
                .zip(c.amplitudes())
                .fold(ComplexVector::zeros(d.ambient_dim()), |acc, (b, &a)| &acc + &b.scale(a))
        })
        .collect();
    let w = Subspace::span(&vs, d.ambient_dim(), tol()).unwrap();
    d.member(&rays, &w).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn truth_map_is_a_homomorphism(seed in any::<u64>(), dim in 3usize..6, degenerate in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_d(dim, degenerate, &mut rng);
        let probes: Vec<Subspace> = (0..4).map(|_| probe(&d, &mut rng)).collect();
        for s in d.property_states() {
            for a in &probes {
                let ta = d.truth_value(&s, a).unwrap();
                let c = a.orthocomplement(tol());
                prop_assert!(d.contains(&c).unwrap());
                prop_assert_eq!(d.truth_value(&s, &c).unwrap(), !ta);
                for b in &probes {
                    let tb = d.truth_value(&s, b).unwrap();
                    let m = a.meet(b, tol()).unwrap();
                    let j = a.join(b, tol()).unwrap();
                    prop_assert!(d.contains(&m).unwrap() && d.contains(&j).unwrap());
                    prop_assert_eq!(d.truth_value(&s, &m).unwrap(), ta && tb);
                    prop_assert_eq!(d.truth_value(&s, &j).unwrap(), ta || tb);
                }
            }
        }
    }

    #[test]
    fn unitary_covariance(seed in any::<u64>(), dim in 2usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = random::state(dim, &mut rng);
        let r = ObservableSpec::from_basis(&random::frame(dim, dim, &mut rng), tol()).unwrap();
        let d = build_determinate(&psi, &r, tol()).unwrap();
        let u = random::unitary(dim, &mut rng);
        let moved = d.transformed(&u).unwrap();
        prop_assert_eq!(moved.rays().len(), d.rays().len());
        for (a, b) in d.rays().iter().zip(moved.rays()) {
            prop_assert_eq!(&a.label, &b.label);
            prop_assert!((a.weight - b.weight).abs() < 1e-10);
            prop_assert!(u.act(&a.vector).distance(&b.vector) < 1e-9);
        }
        let k_image: Vec<ComplexVector> = d.complement().basis().iter().map(|b| u.act(b)).collect();
        let k_image = Subspace::span(&k_image, dim, tol()).unwrap();
        prop_assert!(k_image.same_as(moved.complement(), tol()));
    }

    #[test]
    fn weights_sum_to_one(seed in any::<u64>(), dim in 2usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_d(dim, dim > 2, &mut rng);
        let total: f64 = d.property_states().iter().map(|s| s.probability).sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
        prop_assert!(d.complement().rank() + d.rays().len() <= dim);
    }

    #[test]
    fn dirac_von_neumann_case(seed in any::<u64>(), dim in 3usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_d(dim, false, &mut rng);
        let psi = d.psi().clone();
        let mut candidates: Vec<Subspace> = (0..3).map(|_| probe(&d, &mut rng)).collect();
        for _ in 0..3 {
            let rank = rng.random_range(1..dim);
            candidates.push(Subspace::span(&random::frame(dim, rank, &mut rng), dim, tol()).unwrap());
        }
        for v in &candidates {
            let p = v.weight_of(&psi);
            let sharp = !(1e-9..=1.0 - 1e-9).contains(&p);
            prop_assert_eq!(d.contains(v).unwrap(), sharp);
        }
    }
}

#[test]
fn epr_after_premeasurement_truth_values() {
    use qpt_core::scenarios::{epr_layout, epr_states};
    let layout = epr_layout();
    let r = ObservableSpec::on_factors(&layout, &["pos1", "pos2"], tol()).unwrap();
    let (_, psi, _) = epr_states().unwrap();
    let d = build_determinate(&psi, &r, tol()).unwrap();
    let spin2 = |up: usize| {
        Subspace::from_projector(&layout.embed(&ComplexVector::basis(2, up).projector(), &["spin2"]).unwrap(), tol())
            .unwrap()
    };
    let weights: Vec<f64> = d.property_states().iter().map(|s| s.probability).collect();
    assert_eq!(weights.len(), 2);
    assert!(weights.iter().all(|w| (w - 0.5).abs() < 1e-12));
    let (measure, born) = d.born_check(&spin2(1)).unwrap();
    assert!((measure - 0.5).abs() < 1e-12 && (born - 0.5).abs() < 1e-12);
    let plus_branch = d.property_states().into_iter().find(|s| s.label == "pos1=2,pos2=1").unwrap();
    assert!(d.truth_value(&plus_branch, &spin2(1)).unwrap());
    assert!(!d.truth_value(&plus_branch, &spin2(0)).unwrap());
}

#[test]
fn six_dim_ray_pair_born_check() {
    let mut rng = ChaCha8Rng::seed_from_u64(66);
    let psi = random::state(6, &mut rng);
    let basis = random::frame(6, 6, &mut rng);
    let d = build_determinate(&psi, &ObservableSpec::from_basis(&basis, tol()).unwrap(), tol()).unwrap();
    let v = d.member(&[1, 4], &Subspace::zero(6)).unwrap();
    let (measure, born) = d.born_check(&v).unwrap();
    // oracle: direct inner products with the basis vectors
    let direct = basis[1].inner(&psi).norm_sqr() + basis[4].inner(&psi).norm_sqr();
    assert!((measure - direct).abs() < 1e-10 && (born - direct).abs() < 1e-10);
}
