//! Randomized laws: algebraic identities that must hold for arbitrary
//! elements, exercised with generated inputs on top of the deterministic
//! oracles in the unit tests.

mod common;

use std::sync::OnceLock;

use config_models_core::catalog::CatalogKey;
use config_models_core::model::{Model, ModelElement};
use config_models_core::quotient::FatDiagonalQuotient;
use config_models_core::rewrite::{normalize, RawTerm};
use config_models_core::scalar::{scalar, Scalar, Sign};
use config_models_core::tensor::{diagonal_tensor, TensorElement};
use config_models_core::PdAlgebra;
use num_traits::Zero;
use proptest::prelude::*;

use common::random_confluence_trials;

fn torus() -> &'static PdAlgebra {
    static CELL: OnceLock<PdAlgebra> = OnceLock::new();
    CELL.get_or_init(|| CatalogKey::parse("torus").unwrap().build())
}

fn torus_three_points() -> &'static Model {
    static CELL: OnceLock<Model> = OnceLock::new();
    CELL.get_or_init(|| Model::kriz(torus(), 3))
}

fn element(arity: usize, picks: &[(Vec<usize>, i64)]) -> TensorElement {
    TensorElement::from_terms(
        arity,
        picks.iter().map(|(t, c)| (t.clone(), scalar(*c))).collect(),
    )
}

fn combination(model: &Model, picks: &[(prop::sample::Index, i64)]) -> ModelElement {
    let mut out = ModelElement::new();
    for (ix, c) in picks {
        if *c == 0 {
            continue;
        }
        let id = ix.index(model.dim());
        for ((word, tuple), coeff) in model.basis_element(id) {
            let entry = out.entry((word, tuple)).or_insert_with(Scalar::zero);
            *entry = &*entry + &(coeff * scalar(*c));
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn model_add(a: &ModelElement, b: &ModelElement) -> ModelElement {
    let mut out = a.clone();
    for (key, c) in b {
        let entry = out.entry(key.clone()).or_insert_with(Scalar::zero);
        *entry = &*entry + c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn model_scale(a: &ModelElement, s: &Scalar) -> ModelElement {
    if s.is_zero() {
        return ModelElement::new();
    }
    a.iter().map(|(key, c)| (key.clone(), c * s)).collect()
}

fn tuple_strategy(dim: usize, arity: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..dim, arity)
}

fn picks_strategy(
    dim: usize,
    arity: usize,
) -> impl Strategy<Value = Vec<(Vec<usize>, i64)>> {
    prop::collection::vec((tuple_strategy(dim, arity), -3..=3i64), 1..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn coefficient_multiplication_is_associative(
        a in picks_strategy(4, 2),
        b in picks_strategy(4, 2),
        c in picks_strategy(4, 2),
    ) {
        let alg = torus().algebra();
        let (x, y, z) = (element(2, &a), element(2, &b), element(2, &c));
        prop_assert_eq!(
            x.multiply(&y, alg).multiply(&z, alg),
            x.multiply(&y.multiply(&z, alg), alg)
        );
    }

    #[test]
    fn coefficient_multiplication_is_graded_commutative(
        s in tuple_strategy(4, 3),
        t in tuple_strategy(4, 3),
    ) {
        let alg = torus().algebra();
        let x = TensorElement::basis(s.clone());
        let y = TensorElement::basis(t.clone());
        let parity = TensorElement::tuple_degree(alg, &s) * TensorElement::tuple_degree(alg, &t);
        let flipped = y.multiply(&x, alg).scale(&Sign::from_parity(parity).as_scalar());
        prop_assert_eq!(x.multiply(&y, alg), flipped);
    }

    #[test]
    fn the_differential_is_linear(
        a in prop::collection::vec((any::<prop::sample::Index>(), -3..=3i64), 1..4),
        b in prop::collection::vec((any::<prop::sample::Index>(), -3..=3i64), 1..4),
        s in -3..=3i64,
    ) {
        let model = torus_three_points();
        let (x, y) = (combination(model, &a), combination(model, &b));
        let lhs = model.differential(&model_add(&x, &model_scale(&y, &scalar(s))));
        let rhs = model_add(&model.differential(&x), &model_scale(&model.differential(&y), &scalar(s)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn the_differential_squares_to_zero_on_arbitrary_elements(
        a in prop::collection::vec((any::<prop::sample::Index>(), -3..=3i64), 1..5),
    ) {
        let model = torus_three_points();
        let x = combination(model, &a);
        prop_assert!(model.differential(&model.differential(&x)).is_empty());
    }

    #[test]
    fn model_multiplication_is_associative(
        i in any::<prop::sample::Index>(),
        j in any::<prop::sample::Index>(),
        k in any::<prop::sample::Index>(),
    ) {
        let model = torus_three_points();
        let x = model.basis_element(i.index(model.dim()));
        let y = model.basis_element(j.index(model.dim()));
        let z = model.basis_element(k.index(model.dim()));
        prop_assert_eq!(
            model.multiply(&model.multiply(&x, &y), &z),
            model.multiply(&x, &model.multiply(&y, &z))
        );
    }

    #[test]
    fn multiplication_satisfies_the_leibniz_rule_on_random_pairs(
        i in any::<prop::sample::Index>(),
        j in any::<prop::sample::Index>(),
    ) {
        let model = torus_three_points();
        let ia = i.index(model.dim());
        let ib = j.index(model.dim());
        let x = model.basis_element(ia);
        let y = model.basis_element(ib);
        let (pq, _) = model.place(ia);
        let lhs = model.differential(&model.multiply(&x, &y));
        let sign = Sign::from_parity(pq.0).as_scalar();
        let rhs = model_add(
            &model.multiply(&model.differential(&x), &y),
            &model_scale(&model.multiply(&x, &model.differential(&y)), &sign),
        );
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn normalization_is_linear(
        tuples in prop::collection::vec(tuple_strategy(4, 3), 2..5),
        c in 1..=3i64,
    ) {
        let alg = torus().algebra();
        let word = vec![(1usize, 0usize), (2usize, 1usize)];
        let terms: Vec<RawTerm> = tuples
            .iter()
            .map(|t| RawTerm::new(t.clone(), word.clone(), scalar(1)))
            .collect();
        let scaled: Vec<RawTerm> = tuples
            .iter()
            .map(|t| RawTerm::new(t.clone(), word.clone(), scalar(c)))
            .collect();
        let base = normalize(alg, terms);
        let scaled_form = normalize(alg, scaled);
        let expected: config_models_core::rewrite::NormalForm = base
            .iter()
            .map(|(k, v)| (k.clone(), v * scalar(c)))
            .collect();
        prop_assert_eq!(scaled_form, expected);
    }

    #[test]
    fn quotient_reduction_is_idempotent_and_kills_the_ideal(
        picks in picks_strategy(4, 3),
        slot in 1..3usize,
    ) {
        let pd = CatalogKey::parse("cp2_sum(2)").unwrap().build();
        let alg = pd.algebra();
        let delta = diagonal_tensor(&pd);
        let quotient = FatDiagonalQuotient::new(alg, pd.orientation(), &delta, 3);
        let x = element(3, &picks);
        let reduced = quotient.reduce(&x);
        prop_assert_eq!(quotient.reduce(&reduced), reduced);
        // Multiples of a placed diagonal reduce to zero.
        let placed = delta.insert(alg, 3, &[slot, 0]);
        let multiple = placed.multiply(&x, alg);
        prop_assert!(quotient.reduce(&multiple).is_zero());
    }
}

#[test]
fn rewriting_is_confluent_for_a_field_of_strategies() {
    for (key, seed) in [("cp(2)", 11u64), ("genus(2)", 12), ("sphere(2)", 13)] {
        let pd = CatalogKey::parse(key).unwrap().build();
        let ran = random_confluence_trials(&pd, 4, 40, 2, seed).expect("confluent");
        assert_eq!(ran, 40);
    }
}
