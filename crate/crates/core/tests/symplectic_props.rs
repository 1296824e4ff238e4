use metaplectica::symplectic::{
    is_symplectic, ExactMatrix2, ExactRay, OpticalElement, OpticalSystem, RayVector, SymplecticMatrix,
};
use nalgebra::DMatrix;
use num_rational::BigRational;
use proptest::prelude::*;

#[derive(Clone, Debug)]
enum Elementary {
    Upper(f64),
    Lower(f64),
    Scale(f64),
}

impl Elementary {
    fn matrix(&self) -> SymplecticMatrix {
        match *self {
            Elementary::Upper(b) => SymplecticMatrix::shear_upper(b),
            Elementary::Lower(c) => SymplecticMatrix::shear_lower(c),
            Elementary::Scale(s) => SymplecticMatrix::scaling(s),
        }
    }
}

fn elementary() -> impl Strategy<Value = Elementary> {
    prop_oneof![
        (-1.0..1.0f64).prop_map(Elementary::Upper),
        (-1.0..1.0f64).prop_map(Elementary::Lower),
        prop_oneof![0.5..2.0f64, -2.0..-0.5f64].prop_map(Elementary::Scale),
    ]
}

/// `[[I, B], [0, I]]`, `[[I, 0], [C, I]]` or `diag(A, A⁻ᵀ)` for `r = 2`.
fn elementary_r2() -> impl Strategy<Value = SymplecticMatrix> {
    let sym = (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64);
    prop_oneof![
        sym.clone().prop_map(|(x, y, z)| {
            let mut m = DMatrix::identity(4, 4);
            m.view_mut((0, 2), (2, 2)).copy_from(&DMatrix::from_row_slice(2, 2, &[x, y, y, z]));
            SymplecticMatrix::new(m).unwrap()
        }),
        sym.prop_map(|(x, y, z)| {
            let mut m = DMatrix::identity(4, 4);
            m.view_mut((2, 0), (2, 2)).copy_from(&DMatrix::from_row_slice(2, 2, &[x, y, y, z]));
            SymplecticMatrix::new(m).unwrap()
        }),
        (0.5..2.0f64, -0.5..0.5f64, 0.5..2.0f64).prop_map(|(p, q, r)| {
            let a = DMatrix::from_row_slice(2, 2, &[p, q, 0.0, r]);
            let a_inv_t = a.clone().try_inverse().unwrap().transpose();
            let mut m = DMatrix::zeros(4, 4);
            m.view_mut((0, 0), (2, 2)).copy_from(&a);
            m.view_mut((2, 2), (2, 2)).copy_from(&a_inv_t);
            SymplecticMatrix::new(m).unwrap()
        }),
    ]
}

/// Sp(2) with `D` bounded away from zero.
fn admissible() -> impl Strategy<Value = SymplecticMatrix> {
    (-3.0..3.0f64, -3.0..3.0f64, prop_oneof![0.1..3.0f64, -3.0..-0.1f64])
        .prop_map(|(b, c, d)| SymplecticMatrix::from_2x2((1.0 + b * c) / d, b, c, d).unwrap())
}

fn optical_element() -> impl Strategy<Value = OpticalElement> {
    prop_oneof![
        prop_oneof![0.2..5.0f64, -5.0..-0.2f64].prop_map(|f| OpticalElement::Lens { f }),
        (0.0..3.0f64).prop_map(|d| OpticalElement::Free { d }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 512, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn products_stay_symplectic(chain in prop::collection::vec(elementary(), 1..=20)) {
        let s = chain.iter().fold(SymplecticMatrix::identity(1), |acc, e| acc.compose(&e.matrix()).unwrap());
        prop_assert!(is_symplectic(s.matrix(), 1e-10).unwrap(), "{}", s.matrix());
    }

    #[test]
    fn products_stay_symplectic_r2(chain in prop::collection::vec(elementary_r2(), 1..=20)) {
        let s = chain.iter().fold(SymplecticMatrix::identity(2), |acc, e| acc.compose(e).unwrap());
        prop_assert!(is_symplectic(s.matrix(), 1e-10).unwrap(), "{}", s.matrix());
    }

    #[test]
    fn relay_square_is_minus_identity_exactly(num in 1i64..200, den_pow in 0u32..8) {
        let f = num as f64 / 2f64.powi(den_pow as i32);
        let s = OpticalSystem::focal_relay(f).unwrap().system_matrix_exact().unwrap();
        prop_assert_eq!(s.pow(2), ExactMatrix2::identity().neg());
        prop_assert!(s.pow(4).is_identity());
        let q = BigRational::from_integer(num.into());
        let back = s.pow(2).apply(&ExactRay::new(q.clone(), BigRational::from_integer(0.into())));
        prop_assert_eq!(back, ExactRay::new(-q, BigRational::from_integer(0.into())));
    }

    #[test]
    fn trace_ends_at_system_matrix_image(
        elements in prop::collection::vec(optical_element(), 1..12),
        q in -2.0..2.0f64,
        p in -2.0..2.0f64,
    ) {
        let sys = OpticalSystem::new(elements).unwrap();
        let r0 = RayVector::new(q, p);
        let last = *sys.trace_ray(r0).last().unwrap();
        let s = sys.system_matrix();
        let image = s.apply(r0).unwrap();
        let scale = s.matrix().amax().max(1.0) * (q.abs() + p.abs()).max(1.0);
        prop_assert!((last.q - image.q).abs() <= 1e-12 * scale && (last.p - image.p).abs() <= 1e-12 * scale);
    }

    #[test]
    fn inverse_composes_to_identity(s in admissible()) {
        let scale = s.matrix().amax().powi(2).max(1.0);
        prop_assert!(s.compose(&s.inverse()).unwrap().max_abs_diff(&SymplecticMatrix::identity(1)) <= 1e-12 * scale);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 10_000, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn decomposition_recomposes(s in admissible()) {
        let dec = s.canonical_decompose().unwrap();
        prop_assert!(dec.recompose().max_abs_diff(&s) <= 1e-12 * s.matrix().amax().max(1.0));
        prop_assert_eq!(dec.upper.get(1, 0), 0.0);
        prop_assert_eq!(dec.lower.get(0, 1), 0.0);
    }
}

#[test]
fn relay_with_zero_d_block_is_not_decomposable() {
    let s = OpticalSystem::focal_relay(1.0).unwrap().system_matrix();
    assert!(s.canonical_decompose().is_err());
}
