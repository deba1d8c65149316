mod common;

use cheshire_core::*;
use proptest::prelude::*;

fn cplx() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| Complex64::new(a, b))
}

fn amps(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec(cplx(), n)
}

fn ket() -> impl Strategy<Value = LabeledState> {
    amps(4).prop_map(|a| LabeledState::ket(Space::SYSTEM, a).unwrap())
}

fn bra() -> impl Strategy<Value = LabeledState> {
    amps(4).prop_map(|a| LabeledState::bra(Space::SYSTEM, a).unwrap())
}

fn op() -> impl Strategy<Value = LabeledOperator> {
    amps(16).prop_map(|m| LabeledOperator::from_matrix(Space::SYSTEM, m).unwrap())
}

/// A two-state vector whose denominator is comfortably away from zero.
fn tsv() -> impl Strategy<Value = TwoStateVector> {
    (bra(), ket()).prop_filter_map("denominator too small", |(b, k)| {
        let t = TwoStateVector::single(b, k).ok()?;
        (t.denominator().norm() > 0.05).then_some(t)
    })
}

fn observable() -> impl Strategy<Value = Observable> {
    prop::sample::select(Observable::ALL.to_vec())
}

fn close(a: Complex64, b: Complex64, scale: f64) -> bool {
    (a - b).norm() <= 1e-12 * scale.max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn weak_value_is_linear(t in tsv(), a in op(), b in op(), x in cplx(), y in cplx()) {
        let combo = &a.scale(x) + &b.scale(y);
        let lhs = t.weak_value(&combo).unwrap().value;
        let rhs = x * t.weak_value(&a).unwrap().value + y * t.weak_value(&b).unwrap().value;
        prop_assert!(close(lhs, rhs, lhs.norm()));
    }

    #[test]
    fn identity_has_weak_value_one(t in tsv()) {
        let w = t.weak_value(&LabeledOperator::identity(Space::SYSTEM)).unwrap().value;
        prop_assert!(close(w, ONE, 1.0));
    }

    #[test]
    fn arm_projectors_sum_to_one(t in tsv()) {
        let l = t.weak_value(&LabeledOperator::path_projector(Path::L, Space::SYSTEM).unwrap()).unwrap().value;
        let r = t.weak_value(&LabeledOperator::path_projector(Path::R, Space::SYSTEM).unwrap()).unwrap().value;
        prop_assert!(close(l + r, ONE, l.norm()));
    }

    #[test]
    fn sigma_splits_over_arms(t in tsv(), axis in prop::sample::select(Axis::ALL.to_vec())) {
        let whole = t.weak_value(&LabeledOperator::sigma(axis, Space::SYSTEM).unwrap()).unwrap().value;
        let l = t.weak_value(&LabeledOperator::sigma_in_arm(axis, Path::L, Space::SYSTEM).unwrap()).unwrap().value;
        let r = t.weak_value(&LabeledOperator::sigma_in_arm(axis, Path::R, Space::SYSTEM).unwrap()).unwrap().value;
        prop_assert!(close(whole, l + r, whole.norm()));
    }

    #[test]
    fn weak_value_ignores_state_scaling(b in bra(), k in ket(), o in observable(), x in cplx(), y in cplx()) {
        prop_assume!(x.norm() > 0.1 && y.norm() > 0.1);
        let t = TwoStateVector::single(b.clone(), k.clone()).unwrap();
        prop_assume!(t.denominator().norm() > 0.05);
        let s = TwoStateVector::single(b.scale(x), k.scale(y)).unwrap();
        let a = o.operator(Space::SYSTEM).unwrap();
        let w0 = t.weak_value(&a).unwrap().value;
        let w1 = s.weak_value(&a).unwrap().value;
        prop_assert!(close(w0, w1, w0.norm()));
    }

    #[test]
    fn entangled_weak_value_ignores_global_weight(
        pre in amps(8), post in amps(8), o in observable(), x in cplx()
    ) {
        prop_assume!(x.norm() > 0.1);
        let pre = LabeledState::ket(Space::FULL, pre).unwrap();
        let post = LabeledState::bra(Space::FULL, post).unwrap();
        let t = contract_ancilla(&pre, &post).unwrap();
        prop_assume!(t.denominator().norm() > 0.05);
        let a = o.operator(Space::SYSTEM).unwrap();
        let w0 = t.weak_value(&a).unwrap().value;
        let w1 = t.rescaled(x).weak_value(&a).unwrap().value;
        prop_assert!(close(w0, w1, w0.norm()));
    }

    #[test]
    fn circuit_elements_are_unitary(
        angle in -360.0f64..360.0,
        phase in -360.0f64..360.0,
        arm in prop::sample::select(Path::ALL.to_vec()),
    ) {
        let elems = [
            CircuitElement::beam_splitter(),
            CircuitElement::half_wave_plate(arm),
            CircuitElement::new(ElementKind::HalfWavePlate { angle_deg: angle }, Location::Arm(arm)),
            CircuitElement::pbs(),
            CircuitElement::mirror(arm, phase),
            CircuitElement::singlet_source(),
        ];
        for e in &elems {
            let space = if e.kind == ElementKind::SingletSource { Space::FULL } else { Space::SYSTEM };
            let u = element_unitary(e, space).unwrap();
            prop_assert!(u.unitarity_defect() <= 1e-12);
            if space == Space::SYSTEM {
                prop_assert!(element_unitary(e, Space::FULL).unwrap().unitarity_defect() <= 1e-12);
            }
        }
    }

    #[test]
    fn flip_is_an_involution(k in ket(), b in bra()) {
        prop_assert_eq!(flip_polarization(&flip_polarization(&k).unwrap()).unwrap(), k);
        prop_assert_eq!(flip_polarization(&flip_polarization(&b).unwrap()).unwrap(), b);
    }

    #[test]
    fn tensor_is_bilinear(a in amps(2), b in amps(2), c in amps(2), x in cplx()) {
        let pa = LabeledState::ket(Space::PATH, a).unwrap();
        let pb = LabeledState::ket(Space::PATH, b).unwrap();
        let q = LabeledState::ket(Space::POL, c).unwrap();
        let lhs = tensor(&pa.scale(x).add(&pb).unwrap(), &q).unwrap();
        let rhs = tensor(&pa, &q).unwrap().scale(x).add(&tensor(&pb, &q).unwrap()).unwrap();
        prop_assert!(common::max_diff(lhs.amplitudes(), rhs.amplitudes()) <= 1e-12);
        let rhs2 = tensor(&q, &pa.scale(x)).unwrap().add(&tensor(&q, &pb).unwrap()).unwrap();
        prop_assert!(common::max_diff(lhs.amplitudes(), rhs2.amplitudes()) <= 1e-12);
    }

    #[test]
    fn inner_is_conjugate_symmetric(u in ket(), v in ket()) {
        let uv = inner(&u.dual(), &v).unwrap();
        let vu = inner(&v.dual(), &u).unwrap();
        prop_assert!((uv - vu.conj()).norm() <= 1e-12);
        prop_assert!(inner(&u.dual(), &u).unwrap().im.abs() <= 1e-12);
    }
}
