use fischer_core::decomp::{enumerate_summands, fischer_decompose};
use fischer_core::operators::{apply_generator, GeneratorTag};
use fischer_core::spaces::random_element;
use fischer_core::{
    fischer_inner, BladeIndex, ClPoly, CliffordElement, ExactScalar, GradedSlice, SpinorFrame,
    ValueKind, Workspace,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn element(m: usize) -> impl Strategy<Value = CliffordElement> {
    prop::collection::vec((0u32..1 << m, -3i64..=3, -3i64..=3), 0..6).prop_map(move |terms| {
        CliffordElement::from_terms(
            m,
            terms
                .into_iter()
                .map(|(b, re, im)| (BladeIndex(b), ExactScalar::gaussian(re, im))),
        )
        .unwrap()
    })
}

fn poly(m: usize, k: usize, degree: u32, seed: u64) -> ClPoly {
    let ws = Workspace::new(m, k).unwrap();
    let chart = ws
        .chart(GradedSlice::Total(degree), ValueKind::Spinor)
        .unwrap();
    random_element(&chart, &mut ChaCha8Rng::seed_from_u64(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn clifford_product_is_associative(a in element(4), b in element(4), c in element(4)) {
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn antiinvolution_reverses_products(a in element(5), b in element(5)) {
        let lhs = a.mul(&b).unwrap().antiinvolution();
        let rhs = b.antiinvolution().mul(&a.antiinvolution()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn generators_anticommute(m in 3usize..7, i in 1usize..7, j in 1usize..7) {
        prop_assume!(i <= m && j <= m);
        let ei = CliffordElement::basis_vector(m, i).unwrap();
        let ej = CliffordElement::basis_vector(m, j).unwrap();
        let sum = ei.mul(&ej).unwrap().add(&ej.mul(&ei).unwrap()).unwrap();
        let expected = if i == j { CliffordElement::scalar(m, ExactScalar::from_int(-2)) } else { CliffordElement::zero(m) };
        prop_assert_eq!(sum, expected);
    }

    #[test]
    fn spinor_module_is_a_left_ideal(m in 3usize..8, a in element(3)) {
        let frame = SpinorFrame::build(m).unwrap();
        let lifted = CliffordElement::from_terms(m, a.terms().map(|(b, c)| (*b, c.clone()))).unwrap();
        for b in frame.basis() {
            let x = lifted.mul(b).unwrap();
            prop_assert!(frame.contains(&x));
            prop_assert_eq!(frame.element(&frame.coordinates(&x).unwrap()), x);
        }
    }

    #[test]
    fn fischer_form_is_hermitian_and_positive(seed in any::<u64>(), degree in 0u32..3) {
        let p = poly(4, 1, degree, seed);
        let q = poly(4, 1, degree, seed ^ 0x9e37);
        prop_assert_eq!(fischer_inner(&p, &q).unwrap(), fischer_inner(&q, &p).unwrap().conj());
        let pp = fischer_inner(&p, &p).unwrap();
        prop_assert!(pp.is_real() && (p.is_zero() || pp.re.is_positive()));
    }

    #[test]
    fn vector_multiplication_and_dirac_are_adjoint(seed in any::<u64>(), degree in 0u32..3, j in 1usize..3) {
        let f = poly(4, 2, degree, seed);
        let g = poly(4, 2, degree + 1, seed.wrapping_add(1));
        let lhs = fischer_inner(&apply_generator(GeneratorTag::VecMul(j), &f).unwrap(), &g).unwrap();
        let rhs = fischer_inner(&f, &apply_generator(GeneratorTag::Dirac(j), &g).unwrap()).unwrap();
        prop_assert_eq!(lhs, -rhs);
    }

    #[test]
    fn chart_coordinates_round_trip(seed in any::<u64>(), degree in 0u32..3) {
        let ws = Workspace::new(5, 2).unwrap();
        let chart = ws.chart(GradedSlice::Total(degree), ValueKind::Spinor).unwrap();
        let p = random_element(&chart, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(chart.from_coords(&chart.to_coords(&p).unwrap()), p);
    }

    #[test]
    fn decomposition_reassembles(seed in any::<u64>(), degree in 0u32..4) {
        let ws = Workspace::new(4, 2).unwrap();
        let p = poly(4, 2, degree, seed);
        let r = fischer_decompose(&ws, &p, false).unwrap();
        prop_assert!(r.residual.is_zero());
        prop_assert_eq!(r.reassemble().unwrap(), p);
        let mut seen: Vec<_> = r.components.iter().map(|c| c.index.clone()).collect();
        seen.dedup();
        prop_assert_eq!(seen.len(), r.components.len());
    }

    #[test]
    fn summands_have_the_right_degree(k in 1usize..4, l in 0u32..6) {
        let s = enumerate_summands(k, l);
        prop_assert!(s.iter().all(|x| x.degree() == l && x.validate(k).is_ok()));
        let mut sorted = s.clone();
        sorted.sort();
        sorted.dedup();
        prop_assert_eq!(sorted.len(), s.len());
    }
}
