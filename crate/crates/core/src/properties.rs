use proptest::prelude::*;

use crate::random::{random_channel, random_density, random_unitary, rng, ginibre};
use crate::thermo::coherence;
use crate::{
    available_information, b_coefficients, decompose, hermitian_eigen, matrix_function, monitoring_channel,
    partial_trace, pauli, switch_state, tensor, von_neumann_entropy, CollisionParams, ComplexMatrix,
    DensityMatrix, KrausChannel, MonitoringStrength, Observable, Outcome,
};

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 64,
        ..ProptestConfig::default()
    }
}

fn strength(eps: f64) -> MonitoringStrength {
    MonitoringStrength::new(eps).unwrap()
}

fn diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a - b).frobenius_norm()
}

fn is_state(rho: &DensityMatrix, tol: f64) -> bool {
    let m = rho.matrix();
    let min = rho.spectrum().unwrap().into_iter().fold(f64::INFINITY, f64::min);
    m.hermiticity_error() < tol && (m.trace().re - 1.0).abs() < tol && m.trace().im.abs() < tol && min > -tol
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn partial_trace_keeps_trace_and_hermiticity(seed in any::<u64>(), da in 1usize..4, db in 1usize..4) {
        let mut r = rng(seed);
        let rho = random_density(da * db, &mut r).unwrap();
        for keep in [[0usize], [1]] {
            let reduced = partial_trace(rho.matrix(), &[da, db], &keep).unwrap();
            prop_assert!((reduced.trace() - rho.matrix().trace()).norm() < 1e-12);
            prop_assert!(reduced.hermiticity_error() < 1e-12);
        }
    }

    #[test]
    fn tensor_is_associative_and_mixed_product(seed in any::<u64>(), d in 1usize..4) {
        let mut r = rng(seed);
        let [a, b, c, e, f] = std::array::from_fn(|_| ginibre(d, d, &mut r));
        let left = tensor(&tensor(&a, &b), &c);
        let right = tensor(&a, &tensor(&b, &c));
        prop_assert!(diff(&left, &right) < 1e-10);
        let product = &tensor(&a, &b) * &tensor(&e, &f);
        prop_assert!(diff(&product, &tensor(&(&a * &e), &(&b * &f))) < 1e-10);
    }

    #[test]
    fn entropy_is_unitarily_invariant(seed in any::<u64>(), d in 2usize..5) {
        let mut r = rng(seed);
        let rho = random_density(d, &mut r).unwrap();
        let u = random_unitary(d, &mut r).unwrap();
        let rotated = DensityMatrix::from_computed(&rho.matrix().conjugate_by(&u)).unwrap();
        let s = von_neumann_entropy(&rho).unwrap();
        prop_assert!((von_neumann_entropy(&rotated).unwrap() - s).abs() < 1e-10);
    }

    #[test]
    fn eigen_reconstructs_and_identity_function_is_exact(seed in any::<u64>(), d in 1usize..5) {
        let mut r = rng(seed);
        let h = ginibre(d, d, &mut r).hermitian_part();
        prop_assert!(diff(&hermitian_eigen(&h).unwrap().reconstruct(), &h) < 1e-10);
        prop_assert!(diff(&matrix_function(&h, |x| x).unwrap(), &h) < 1e-12);
    }

    #[test]
    fn random_channels_map_states_to_states(seed in any::<u64>(), d in 2usize..4, rank in 1usize..5) {
        let mut r = rng(seed);
        let channel = random_channel(d, rank, &mut r).unwrap();
        prop_assert!(channel.completeness_error() < 1e-10);
        let rho = random_density(d, &mut r).unwrap();
        prop_assert!(is_state(&channel.apply(&rho).unwrap(), 1e-10));
    }

    #[test]
    fn monitoring_channels_are_cptp_and_form_a_semigroup(
        seed in any::<u64>(),
        i in 0usize..=10,
        j in 0usize..=10,
    ) {
        let (e1, e2) = (i as f64 / 10.0, j as f64 / 10.0);
        let rho = random_density(2, &mut rng(seed)).unwrap();
        let z = Observable::pauli_z();
        let first = monitoring_channel(&z, strength(e1));
        let second = monitoring_channel(&z, strength(e2));
        prop_assert!(is_state(&first.apply(&rho).unwrap(), 1e-10));
        let twice = second.apply(&first.apply(&rho).unwrap()).unwrap();
        let once = monitoring_channel(&z, strength(e1).compose(strength(e2))).apply(&rho).unwrap();
        prop_assert!(diff(twice.matrix(), once.matrix()) < 1e-10);
    }

    #[test]
    fn unbiased_monitorings_commute_and_lose_information(
        seed in any::<u64>(),
        e1 in 0.0f64..=1.0,
        e2 in 0.0f64..=1.0,
    ) {
        let rho = random_density(2, &mut rng(seed)).unwrap();
        let mz = monitoring_channel(&Observable::pauli_z(), strength(e1));
        let mx = monitoring_channel(&Observable::pauli_x(), strength(e2));
        let zx = mx.apply(&mz.apply(&rho).unwrap()).unwrap();
        let xz = mz.apply(&mx.apply(&rho).unwrap()).unwrap();
        prop_assert!(diff(zx.matrix(), xz.matrix()) < 1e-10);
        prop_assert!(available_information(&rho).unwrap() >= available_information(&zx).unwrap() - 1e-10);
    }

    #[test]
    fn monitoring_information_bound(seed in any::<u64>(), eps in 0.0f64..=1.0) {
        let rho = random_density(2, &mut rng(seed)).unwrap();
        let z = Observable::pauli_z();
        let monitored = monitoring_channel(&z, strength(eps)).apply(&rho).unwrap();
        let loss = available_information(&rho).unwrap() - available_information(&monitored).unwrap();
        prop_assert!(loss >= eps * coherence(&z, &rho).unwrap() - 1e-10);
    }

    #[test]
    fn switch_blocks_assemble_the_joint_state(
        seed in any::<u64>(),
        d in 2usize..4,
        rm in 1usize..4,
        rn in 1usize..4,
    ) {
        let mut r = rng(seed);
        let m = random_channel(d, rm, &mut r).unwrap();
        let n = random_channel(d, rn, &mut r).unwrap();
        let rho = random_density(d, &mut r).unwrap();
        let dec = decompose(&m, &n, &rho).unwrap();
        let half_def = dec.a_def.scale_real(0.5);
        let half_indef = dec.a_indef.scale_real(0.5);
        prop_assert!(diff(&dec.a_pp, &(&half_def + &half_indef)) < 1e-12);
        prop_assert!(diff(&dec.a_mm, &(&half_def - &half_indef)) < 1e-12);
        prop_assert!(diff(&dec.a_mp, &dec.a_pm.adjoint()) < 1e-12);
        prop_assert!((dec.a_def.trace().re - 1.0).abs() < 1e-10);

        let plus = DensityMatrix::pure(&pauli::ket_plus()).unwrap();
        let joint = switch_state(&m, &n, &rho, &plus).unwrap();
        prop_assert!(is_state(&joint, 1e-10));
        prop_assert!(diff(dec.assemble_plus().unwrap().matrix(), joint.matrix()) < 1e-12);

        let nm = n.apply(&m.apply(&rho).unwrap()).unwrap();
        let mn = m.apply(&n.apply(&rho).unwrap()).unwrap();
        let mixture = (nm.matrix() + mn.matrix()).scale_real(0.5);
        let system = partial_trace(joint.matrix(), &[d, 2], &[0]).unwrap();
        prop_assert!(diff(&system, &mixture) < 1e-10);
    }

    #[test]
    fn diagonal_control_stays_diagonal(seed in any::<u64>(), p in 0.0f64..=1.0) {
        let mut r = rng(seed);
        let m = random_channel(2, 2, &mut r).unwrap();
        let n = random_channel(2, 3, &mut r).unwrap();
        let rho = random_density(2, &mut r).unwrap();
        let rho_c = DensityMatrix::new(ComplexMatrix::from_real_diag(&[p, 1.0 - p])).unwrap();
        let joint = switch_state(&m, &n, &rho, &rho_c).unwrap();
        let control = partial_trace(joint.matrix(), &[2, 2], &[1]).unwrap();
        prop_assert!(control[(0, 1)].norm() < 1e-12);
        let assembled = decompose(&m, &n, &rho).unwrap().assemble(&rho_c).unwrap();
        prop_assert!(diff(assembled.matrix(), joint.matrix()) < 1e-12);
    }

    #[test]
    fn outcome_probabilities_sum_to_one(
        seed in any::<u64>(),
        n in 0u32..200,
        beta in 0.0f64..20.0,
        gtau in 0.01f64..0.4,
    ) {
        let mut r = rng(seed);
        let m = random_channel(2, 2, &mut r).unwrap();
        let k = random_channel(2, 2, &mut r).unwrap();
        let rho = random_density(2, &mut r).unwrap();
        let w = decompose(&m, &k, &rho).unwrap().indefinite_weight();
        let b = b_coefficients(&CollisionParams::free_system(1.0, gtau, 1.0, beta, n, 2).unwrap());
        let (pp, pm) = (b.probability(Outcome::Plus, w), b.probability(Outcome::Minus, w));
        prop_assert!((pp + pm - 1.0).abs() < 1e-10);
        prop_assert!(pp >= -1e-12 && pm >= -1e-12);
        prop_assert!((b.b_def_plus + b.b_def_minus - 2.0).abs() < 1e-12);
        let next = b_coefficients(&CollisionParams::free_system(1.0, gtau, 1.0, beta, n + 1, 2).unwrap());
        prop_assert!(next.b_indef_plus.abs() < b.b_indef_plus.abs());
    }
}

#[test]
fn identity_channel_switch_is_coherent() {
    let rho = random_density(3, &mut rng(1)).unwrap();
    let id = KrausChannel::identity(3);
    let dec = decompose(&id, &id, &rho).unwrap();
    assert!((dec.indefinite_weight() - 1.0).abs() < 1e-12);
}
