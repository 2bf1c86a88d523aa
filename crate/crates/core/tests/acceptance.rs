//! Acceptance checks: every expected value below is either a classical fact
//! about configuration spaces, an independently computed census, or a closed
//! formula, and each check prints exactly one `[PASS]`/`[FAIL]` line. All
//! comparisons are exact — the arithmetic is rational, so there is no
//! tolerance anywhere.

mod common;

use std::collections::BTreeMap;

use config_models_core::catalog::{catalog_entries, CatalogKey};
use config_models_core::cohomology::BettiTable;
use config_models_core::linalg::{Echelon, SparseMatrix, SparseVec};
use config_models_core::model::{
    column_filtration_report, reduce_over_unit, reduction_map, words,
};
use config_models_core::poly::{BigradedPoly, UniPoly};
use config_models_core::quotient::FatDiagonalQuotient;
use config_models_core::structure::{
    all_pass, closed_family_controls, coaction_suite, connected_sum_suite, puncture_map,
    simplicial_suite, symmetric_suite,
};
use config_models_core::tensor::{diagonal_tensor, punctured_diagonal_tensor, TensorElement};
use config_models_core::{
    betti_dims, connected_sum, induced_map, kunneth, predicted_dimension, puncture, Model,
    ModelKind, PdAlgebra, PuncturedAlgebra,
};

use common::{random_confluence_trials, report};

fn algebra(key: &str) -> PdAlgebra {
    CatalogKey::parse(key).expect("catalog key parses").build()
}

fn table(model: &Model) -> BettiTable {
    BettiTable::from_bicomplex(
        model.kind().as_str(),
        model.display_name(),
        model.n(),
        model.complex(),
    )
}

/// Nonzero cohomology dimensions per bidegree.
fn nonzero_betti(model: &Model) -> BTreeMap<(usize, usize), usize> {
    betti_dims(model.complex())
        .into_iter()
        .filter(|(_, d)| *d > 0)
        .collect()
}

#[test]
fn a01_reduced_sphere_models_match_the_classical_product_form() {
    let s2 = algebra("sphere(1)");
    let mut ok = true;
    for n in 3..=6 {
        let model = Model::j(&s2, n);
        let mut expected = BigradedPoly::one_plus(1, 1, 3);
        for k in 2..=n - 2 {
            expected = expected.mul(&BigradedPoly::one_plus(k as i64, 1, 1));
        }
        ok &= table(&model).to_bigraded_poly() == expected;
    }
    assert!(report(
        ok,
        "reduced model of the 2-sphere: P(s,t) = (1+st^3)·Π_{k=2..n-2}(1+kst) for n = 3..6",
    ));
}

#[test]
fn a02_punctured_projective_line_gives_the_braid_arrangement_answer() {
    let cp1 = algebra("cp(1)");
    let pa = puncture(&cp1);
    let mut ok = true;
    for n in 2..=6 {
        let model = Model::punctured(&pa, n);
        ok &= model.has_zero_differential();
        let mut expected = BigradedPoly::one();
        for k in 1..=n - 1 {
            expected = expected.mul(&BigradedPoly::one_plus(k as i64, 1, 1));
        }
        ok &= table(&model).to_bigraded_poly() == expected;
    }
    assert!(report(
        ok,
        "punctured projective line: zero differential and P(s,t) = Π_{k=1..n-1}(1+kst) for n = 2..6",
    ));
}

#[test]
fn a03_three_points_on_the_torus_match_the_hand_computation() {
    let torus = algebra("torus");
    let model = Model::j(&torus, 3);
    let t = table(&model);
    let mut expected =
        BigradedPoly::from_unipoly_in_t(&UniPoly::from_coeffs(vec![1, 6, 12, 10, 3]));
    for (c, p) in [(2, 2), (4, 3), (2, 4)] {
        expected = expected.add(&BigradedPoly::monomial(c, 1, p));
    }
    let ok = t.to_bigraded_poly() == expected
        && t.to_unipoly() == UniPoly::from_coeffs(vec![1, 6, 14, 14, 5]);
    assert!(report(
        ok,
        "torus, 3 points: P(s,t) = 1+6t+(12+2s)t^2+(10+4s)t^3+(3+2s)t^4 and P(1,t) = 1+6t+14t^2+14t^3+5t^4",
    ));
}

#[test]
fn a04_three_points_on_higher_genus_surfaces_follow_the_genus_polynomial() {
    let mut ok = true;
    for g in [2i64, 3] {
        let pd = algebra(&format!("genus({g})"));
        let model = Model::j(&pd, 3);
        let mut expected = BigradedPoly::from_unipoly_in_t(&UniPoly::from_coeffs(vec![
            1,
            6 * g,
            12 * g * g,
            8 * g * g * g,
            2 * g * g + g,
        ]));
        expected = expected.add(&BigradedPoly::monomial(2 * g * g + g + 1, 1, 3));
        expected = expected.add(&BigradedPoly::monomial(2 * g, 1, 4));
        ok &= table(&model).to_bigraded_poly() == expected;
    }
    assert!(report(
        ok,
        "genus g = 2, 3 surfaces, 3 points: P(s,t) = 1+6gt+12g^2t^2+(8g^3+(2g^2+g+1)s)t^3+(2g^2+g+2gs)t^4",
    ));
}

#[test]
fn a05_two_point_models_reduce_to_the_poincare_polynomial_identity() {
    let mut ok = true;
    for entry in catalog_entries() {
        let pd = algebra(&entry.key);
        let model = Model::j(&pd, 2);
        ok &= model.has_zero_differential();
        let p = pd.algebra().poincare_polynomial();
        let expected = p.mul(&p.add(&UniPoly::monomial(-1, pd.formal_dimension())));
        ok &= table(&model).to_unipoly() == expected;
    }
    assert!(report(
        ok,
        "every catalog algebra, 2 points: zero differential and P(t) = P_X(t)·(P_X(t) − t^dim)",
    ));
}

#[test]
fn a06_punctured_connected_sums_of_projective_planes_match_the_closed_form() {
    let mut ok = true;
    for r in 1i64..=3 {
        let pd = algebra(&format!("cp2_sum({r})"));
        let pa = puncture(&pd);
        let model = Model::punctured(&pa, 3);
        let expected = if r == 1 {
            BigradedPoly::from_unipoly_in_t(&UniPoly::from_coeffs(vec![1, 0, 3]))
                .add(&BigradedPoly::monomial(5, 1, 5))
                .add(&BigradedPoly::monomial(1, 1, 7))
                .add(&BigradedPoly::monomial(2, 2, 8))
        } else {
            let closed = UniPoly::from_coeffs(vec![1, 0, r]).mul(&UniPoly::from_coeffs(vec![
                1,
                0,
                2 * r,
                0,
                r * r - 3,
            ]));
            BigradedPoly::from_unipoly_in_t(&closed)
                .add(&BigradedPoly::monomial(3 * r, 1, 5))
                .add(&BigradedPoly::monomial(3 * r * r - 2, 1, 7))
                .add(&BigradedPoly::monomial(2 * r, 2, 8))
        };
        ok &= table(&model).to_bigraded_poly() == expected;
    }
    // The product of two 2-spheres and the double connected sum carry
    // different ring structures but the same punctured Betti table.
    let product = kunneth(&algebra("sphere(1)"), &algebra("sphere(1)"));
    let from_product = Model::punctured(&puncture(&product), 3);
    let from_sum = Model::punctured(&puncture(&algebra("cp2_sum(2)")), 3);
    ok &= nonzero_betti(&from_product) == nonzero_betti(&from_sum);
    assert!(report(
        ok,
        "punctured sums of projective planes, 3 points: closed forms for r = 1, 2, 3, and S^2×S^2 agrees with r = 2",
    ));
}

/// Dimensions of `{a : a·x = 0 for all positive-degree x}` per degree,
/// computed by brute-force kernel extraction.
fn annihilator_dims(pa: &PuncturedAlgebra) -> BTreeMap<usize, usize> {
    let alg = pa.algebra();
    let positive: Vec<usize> = (0..alg.dim()).filter(|&i| alg.degree(i) > 0).collect();
    let mut out = BTreeMap::new();
    for d in 0..=alg.max_degree() {
        let candidates = alg.basis_in_degree(d);
        if candidates.is_empty() {
            continue;
        }
        let cols: Vec<SparseVec> = candidates
            .iter()
            .map(|&a| {
                let mut col: SparseVec = positive
                    .iter()
                    .enumerate()
                    .flat_map(|(xi, &x)| {
                        alg.mul_basis(a, x)
                            .iter()
                            .map(move |(k, v)| (xi * alg.dim() + k, v.clone()))
                    })
                    .collect();
                col.sort_by_key(|(row, _)| *row);
                col
            })
            .collect();
        let kernel = SparseMatrix::from_columns(positive.len() * alg.dim(), cols)
            .kernel_basis()
            .len();
        if kernel > 0 {
            out.insert(d, kernel);
        }
    }
    out
}

/// Dimensions per degree of the two-slot coefficient space modulo the ideal
/// generated by the reduced diagonal, computed by brute-force span.
fn two_slot_quotient_dims(pa: &PuncturedAlgebra) -> BTreeMap<usize, usize> {
    let alg = pa.algebra();
    let delta = punctured_diagonal_tensor(pa);
    // Enumerate the two-slot basis grouped by total degree.
    let mut position: BTreeMap<Vec<usize>, (usize, usize)> = BTreeMap::new();
    let mut count: BTreeMap<usize, usize> = BTreeMap::new();
    for a in 0..alg.dim() {
        for b in 0..alg.dim() {
            let d = alg.degree(a) + alg.degree(b);
            let slot = count.entry(d).or_insert(0);
            position.insert(vec![a, b], (d, *slot));
            *slot += 1;
        }
    }
    // Span of all multiples of the diagonal, degree by degree.
    let mut spans: BTreeMap<usize, Echelon> = BTreeMap::new();
    for tuple in position.keys() {
        let generator = delta.multiply(&TensorElement::basis(tuple.clone()), alg);
        if generator.is_zero() {
            continue;
        }
        let mut degree = None;
        let mut col: SparseVec = generator
            .terms()
            .map(|(t, c)| {
                let (d, slot) = position[t];
                degree = Some(d);
                (slot, c.clone())
            })
            .collect();
        col.sort_by_key(|(row, _)| *row);
        spans.entry(degree.expect("nonzero generator")).or_default().absorb(col);
    }
    let mut out = BTreeMap::new();
    for (d, total) in count {
        let rank = spans.get(&d).map_or(0, |e| e.rank());
        if total > rank {
            out.insert(d, total - rank);
        }
    }
    out
}

#[test]
fn a07_two_point_punctured_cohomology_splits_into_quotient_and_annihilator() {
    let mut ok = true;
    for key in ["cp(2)", "product(sphere(1),sphere(1))"] {
        let pd = algebra(key);
        let pa = puncture(&pd);
        let model = Model::punctured(&pa, 2);
        let g = pd.formal_dimension() - 1;
        let mut expected: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (d, dim) in two_slot_quotient_dims(&pa) {
            expected.insert((d, 0), dim);
        }
        for (d, dim) in annihilator_dims(&pa) {
            expected.insert((d + g, 1), dim);
        }
        ok &= nonzero_betti(&model) == expected;
    }
    assert!(report(
        ok,
        "two punctured points: cohomology = two-slot space mod diagonal ⊕ shifted annihilator of the positive part",
    ));
}

#[test]
fn a08_the_punctured_projective_plane_polynomial_has_no_sphere_factor() {
    let pd = algebra("cp2_sum(1)");
    let model = Model::punctured(&puncture(&pd), 3);
    let p = table(&model).to_unipoly();
    let sphere_factor = UniPoly::from_coeffs(vec![1, 0, 1]);
    let ok = !sphere_factor.divides(&p);
    assert!(report(
        ok,
        "punctured projective plane, 3 points: (1+t^2) does not divide P(t) — the fibration answer fails",
    ));
}

#[test]
fn a09_collapsing_the_full_model_onto_the_reduced_one_is_a_quasi_isomorphism() {
    let mut ok = true;
    for entry in catalog_entries() {
        let pd = algebra(&entry.key);
        let h = pd.algebra().dim();
        let n_max = if h <= 6 {
            4
        } else if h <= 9 {
            3
        } else {
            2
        };
        for n in 2..=n_max {
            let full = Model::kriz(&pd, n);
            let reduced = Model::j(&pd, n);
            let map = reduction_map(&full, &reduced);
            let induced = induced_map(full.complex(), reduced.complex(), &map);
            ok &= induced.isomorphism;
        }
    }
    assert!(report(
        ok,
        "killing the generators touching slot 0 induces isomorphisms on cohomology in every bidegree, across the catalog",
    ));
}

#[test]
fn a10_the_reduced_model_collapses_onto_the_punctured_model_one_point_down() {
    let mut ok = true;
    for entry in catalog_entries() {
        let pd = algebra(&entry.key);
        let pa = puncture(&pd);
        for n in 2..=4 {
            let j = Model::j(&pd, n);
            let punc = Model::punctured(&pa, n - 1);
            let rc = reduce_over_unit(&j, &pa, &punc);
            ok &= rc
                .relabel
                .verify_chain(&rc.quotient_complex, punc.complex())
                .is_ok();
            ok &= rc.relabel.surjective_per_bidegree(&rc.quotient_complex, punc.complex());
            for (pq, dim) in &rc.quotient_complex.dims {
                ok &= punc.complex().dim(pq.0, pq.1) == *dim;
            }
            ok &= rc.quotient_complex.total_dim() == punc.complex().total_dim();
        }
    }
    assert!(report(
        ok,
        "killing the positive part of the first slot identifies the reduced model with the punctured model on n−1 points",
    ));
}

#[test]
fn a11_basis_counts_agree_with_the_closed_dimension_formulas() {
    let mut ok = true;
    for entry in catalog_entries() {
        let pd = algebra(&entry.key);
        let h = pd.algebra().dim() as u128;
        let x = h - 1;
        for n in 1..=5usize {
            let census: u128 = words(ModelKind::Kriz, n)
                .iter()
                .map(|w| h.pow((n - w.len()) as u32))
                .sum();
            ok &= census == predicted_dimension(ModelKind::Kriz, h as usize, n);
            let census: u128 = words(ModelKind::Punctured, n)
                .iter()
                .map(|w| x.pow((n - w.len()) as u32))
                .sum();
            ok &= census == predicted_dimension(ModelKind::Punctured, x as usize, n);
            let census: u128 = words(ModelKind::J, n)
                .iter()
                .map(|w| h * x.pow((n - w.len() - 1) as u32))
                .sum();
            ok &= census == predicted_dimension(ModelKind::J, h as usize, n);
        }
        // Free-module sections of the diagonal quotient: dimensions match the
        // product of one full and l−1 punctured Poincaré polynomials.
        let alg = pd.algebra();
        let delta = diagonal_tensor(&pd);
        let hp = alg.poincare_polynomial();
        let hop = hp.add(&UniPoly::monomial(-1, pd.formal_dimension()));
        for l in 2..=4usize {
            let q = FatDiagonalQuotient::new(alg, pd.orientation(), &delta, l);
            let mut predicted = hp.clone();
            for _ in 1..l {
                predicted = predicted.mul(&hop);
            }
            for d in 0..=pd.formal_dimension() * l {
                ok &= q.section_dim_in_degree(d) == predicted.coeff(d) as usize;
            }
        }
    }
    assert!(report(
        ok,
        "basis censuses equal the closed dimension formulas (n ≤ 5) and quotient sections are free of the predicted size (l ≤ 4)",
    ));
}

#[test]
fn a12_property_suite_signs_strategies_actions_and_controls() {
    let mut failures: Vec<String> = Vec::new();
    let mut check = |name: &str, ok: bool| {
        if !ok {
            failures.push(name.to_string());
        }
    };

    // Differentials square to zero, raise degree by one, lower word length by
    // one, and conserve the Euler characteristic on each antidiagonal.
    for entry in catalog_entries() {
        let pd = algebra(&entry.key);
        let pa = puncture(&pd);
        for model in [
            Model::kriz(&pd, 3),
            Model::j(&pd, 3),
            Model::punctured(&pa, 3),
        ] {
            check("d squared", model.complex().verify_d_squared().is_ok());
            check("block shapes", model.complex().verify_shapes().is_ok());
            check(
                "euler conservation",
                model.complex().euler_antidiagonals() == table(&model).euler_antidiagonals(),
            );
        }
        // Rewriting strategies all land on the same normal form.
        check(
            "confluence",
            random_confluence_trials(&pd, 3, 100, 3, 0xC0FFEE).is_ok(),
        );
    }

    // Face and degeneracy maps satisfy the simplicial identities.
    for key in ["torus", "cp(2)"] {
        let pa = puncture(&algebra(key));
        check("simplicial identities", all_pass(&simplicial_suite(&pa, 4)));
    }

    // The symmetric group acts by chain maps, compatibly with composition.
    let torus = algebra("torus");
    check(
        "symmetric action (full)",
        all_pass(&symmetric_suite(&Model::kriz(&torus, 3))),
    );
    check(
        "symmetric action (reduced)",
        all_pass(&symmetric_suite(&Model::j(&torus, 3))),
    );
    check(
        "symmetric action (punctured)",
        all_pass(&symmetric_suite(&Model::punctured(&puncture(&algebra("cp(2)")), 3))),
    );

    // Clustering points is a map of complexes and respects products.
    check("coaction (torus)", all_pass(&coaction_suite(&puncture(&torus), 3)));
    check(
        "coaction (projective plane)",
        all_pass(&coaction_suite(&puncture(&algebra("cp(2)")), 3)),
    );

    // Splitting a connected sum is a map of complexes and respects products.
    let genus2 = connected_sum(&torus, &torus).expect("same formal dimension");
    check("connected-sum split (1,2)", all_pass(&connected_sum_suite(&genus2, 1, 2)));
    check("connected-sum split (2,1)", all_pass(&connected_sum_suite(&genus2, 2, 1)));
    let blown_up = connected_sum(&algebra("sphere(2)"), &algebra("cp(2)"))
        .expect("same formal dimension");
    check("connected-sum split (1,1)", all_pass(&connected_sum_suite(&blown_up, 1, 1)));

    // Projecting coefficients onto the punctured algebra is a chain map.
    let cp2 = algebra("cp(2)");
    let pa = puncture(&cp2);
    let full = Model::kriz(&cp2, 3);
    let punc = Model::punctured(&pa, 3);
    let projection = puncture_map(&full, &pa, &punc);
    check(
        "coefficient projection",
        projection.verify_chain(full.complex(), punc.complex()).is_ok()
            && projection.surjective_per_bidegree(full.complex(), punc.complex()),
    );

    // Negative controls: for closed coefficients the outermost face maps fail
    // to commute with the differential by exactly the documented defect — the
    // orientation class for the edge face, the Euler characteristic times the
    // orientation class for the adjacent merge.
    for key in ["sphere(1)", "torus", "cp(2)"] {
        let pd = algebra(key);
        for n in [2, 3] {
            check("closed-family controls", all_pass(&closed_family_controls(&pd, n)));
        }
    }

    let ok = failures.is_empty();
    report(
        ok,
        "property suite: signs, strategies, simplicial identities, group actions, structure maps, and negative controls",
    );
    assert!(ok, "failing facets: {}", failures.join(", "));
}

#[test]
fn a13_column_filtration_is_exact_with_the_predicted_bottom_row() {
    let mut ok = true;
    for entry in catalog_entries() {
        let pd = algebra(&entry.key);
        if pd.algebra().dim() > 6 {
            continue;
        }
        for n in 2..=4 {
            let model = Model::kriz(&pd, n);
            let rep = column_filtration_report(&pd, &model);
            ok &= rep.pass;
        }
    }
    assert!(report(
        ok,
        "first-column filtration: columns are exact above the bottom row and the bottom row matches the census (n ≤ 4)",
    ));
}
