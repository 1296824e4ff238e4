use metaplectica::weyl::rewrite::{combination_to_element, Explorer};
use metaplectica::weyl::{
    co_spinor, e_v_relation_check, fock_matrix, matrix_unit, normal_order, spinor, to_boson, AlgebraElement,
    BosonElement, FockMatrix, Generator, Monomial, Scalar, Surd,
};
use proptest::prelude::*;
use Generator::{D, E, Q};

type El = AlgebraElement<Surd>;

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

fn generator() -> impl Strategy<Value = Generator> {
    prop_oneof![Just(Q), Just(D), Just(E)]
}

/// Small integer combinations of monomials of degree at most 3.
fn element() -> impl Strategy<Value = El> {
    prop::collection::vec((0u32..=2, any::<bool>(), 0u32..=1, -3i64..=3), 1..5).prop_map(|terms| {
        El::from_terms(terms.into_iter().map(|(q, e, d, c)| (Monomial::new(q, e, d), Surd::from_i64(c))))
    })
}

fn int(n: i64) -> Surd {
    Surd::from_i64(n)
}

proptest! {
    #![proptest_config(cfg(64))]

    #[test]
    fn every_rewrite_order_reaches_the_normal_form(word in prop::collection::vec(generator(), 0..=8)) {
        let forms = Explorer::new().all_normal_forms(&word);
        prop_assert_eq!(forms.len(), 1);
        let closed: El = normal_order(&word).unwrap();
        prop_assert_eq!(combination_to_element::<Surd>(&forms[0]), closed);
    }

    #[test]
    fn matrix_units_multiply_like_matrices(m in 0u32..=8, n in 0u32..=8, k in 0u32..=8, l in 0u32..=8) {
        let prod = matrix_unit::<Surd>(m, n).multiply(&matrix_unit(k, l)).unwrap();
        if n == k {
            prop_assert_eq!(prod, matrix_unit(m, l));
        } else {
            prop_assert!(prod.is_zero());
        }
    }

    #[test]
    fn fock_map_is_multiplicative_in_the_interior(x in element(), y in element()) {
        let n_max = 10;
        let xy = fock_matrix(&x.multiply(&y).unwrap(), n_max).unwrap();
        let fx = fock_matrix(&x, n_max).unwrap();
        let fy = fock_matrix(&y, n_max).unwrap();
        let limit = n_max - y.degree() as usize;
        prop_assert_eq!(xy.max_abs_diff_block(&fx.matmul(&fy), limit), 0.0);
    }

    #[test]
    fn minimal_ideals_are_closed(x in element(), c in prop::collection::vec(-4i64..=4, 1..5)) {
        let coeffs: Vec<Surd> = c.into_iter().map(int).collect();
        prop_assert!(x.multiply(&spinor(&coeffs)).unwrap().is_left_spinor());
        prop_assert!(co_spinor(&coeffs).multiply(&x).unwrap().is_right_spinor());
    }
}

#[test]
fn diagonal_matrix_units_partition_unity_on_the_low_block() {
    // the sum has degree 16, so the truncation must be at least that
    let sum = (0..=8u32).fold(El::zero(), |acc, n| &acc + &matrix_unit(n, n));
    let rho = fock_matrix(&sum, 16).unwrap();
    assert_eq!(rho.max_abs_diff_block(&FockMatrix::identity(16), 8), 0.0);
    assert_eq!(rho.matmul(&rho), rho);
}

#[test]
fn boson_commutator() {
    let a = BosonElement::<Surd>::annihilation();
    let ad = BosonElement::<Surd>::creation();
    assert_eq!(a.commutator(&ad).unwrap(), BosonElement::one());
}

#[test]
fn contraction_agrees_with_fock() {
    let word = [E, D, D, Q, Q, E];
    let x: El = normal_order(&word).unwrap();
    assert_eq!(x, El::e().scale(&int(2)));
    let n_max = 8;
    let product = word
        .iter()
        .map(|g| fock_matrix(&El::generator(*g), n_max).unwrap())
        .reduce(|acc, m| acc.matmul(&m))
        .unwrap();
    assert_eq!(product.max_abs_diff_block(&fock_matrix(&x, n_max).unwrap(), n_max - 2), 0.0);
}

#[test]
fn small_products() {
    let qe: El = normal_order(&[Q, E]).unwrap();
    let ed: El = normal_order(&[E, D]).unwrap();
    assert_eq!(qe.multiply(&ed).unwrap(), El::monomial(Monomial::new(1, true, 1), int(1)));
    assert_eq!(El::d().multiply(&qe).unwrap(), El::e());
}

#[test]
fn symmetrized_product_in_boson_form() {
    let qd = El::q().multiply(&El::d()).unwrap();
    let dq = El::d().multiply(&El::q()).unwrap();
    let b = to_boson(&(&qd + &dq)).unwrap();
    let a2 = BosonElement::<Surd>::annihilation().pow(2).unwrap();
    let ad2 = BosonElement::<Surd>::creation().pow(2).unwrap();
    assert_eq!(b, a2.sub(&ad2));
    assert_eq!(b.to_string(), "-ad^2 + a^2");
}

#[test]
fn vacuum_fit_coefficient() {
    // independent eigen-solve of the same truncated problem
    let report = e_v_relation_check(32).unwrap();
    assert!((report.lambda - 1.288648618096081).abs() < 1e-9, "{}", report.lambda);
    assert!(report.residual < 1e-6);
}

#[test]
fn float_and_exact_fock_matrices_agree() {
    let x = El::q().pow(3).unwrap().multiply(&El::d().pow(2).unwrap()).unwrap();
    let exact = fock_matrix(&x, 12).unwrap().to_c64();
    let float = fock_matrix(&x.to_c64(), 12).unwrap();
    assert!(exact.max_abs_diff(&float) < 1e-9 * 12f64.powi(5));
}
