//! Normal forms for words in the arc generators `G_{ij}` with tensor
//! coefficients.
//!
//! A raw term is a coefficient tuple together with an ordered product of
//! generators `G_{ij}` (odd degree, symmetric in `i,j`, squaring to zero).
//! The rewriting system applies four local moves until none fires:
//!
//! * drop a repeated adjacent factor (odd square = 0),
//! * swap out-of-order adjacent factors (sign −1),
//! * resolve two factors sharing a first index by the three-term relation
//!   `G_{ij}G_{ik} = G_{jk}G_{ik} − G_{jk}G_{ij}` (for `i > j > k`),
//! * move coefficient content off a first-index slot along
//!   `ι_i(x)·G_{ij} = ι_j(x)·G_{ij}`.
//!
//! Terminal terms have strictly increasing first indices and unit content in
//! every first-index slot; they are the canonical basis of the model. The
//! choice of which move to fire is a parameter so tests can randomize it and
//! confirm the result does not depend on the strategy.

use std::collections::BTreeMap;

use crate::algebra::GradedAlgebra;
use crate::scalar::{Scalar, Sign};
use num_traits::Zero;

/// One generator factor, stored with `i > j` after symmetrization.
pub type GPair = (usize, usize);

/// An unnormalized summand: coefficient tuple, generator word, scalar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawTerm {
    pub tuple: Vec<usize>,
    pub word: Vec<GPair>,
    pub coeff: Scalar,
}

impl RawTerm {
    pub fn new(tuple: Vec<usize>, word: Vec<GPair>, coeff: Scalar) -> Self {
        RawTerm { tuple, word, coeff }
    }
}

/// Canonical form: sorted map from `(word, tuple)` to coefficient.
pub type NormalForm = BTreeMap<(Vec<GPair>, Vec<usize>), Scalar>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Redex {
    /// Adjacent equal factors at `pos, pos+1`: the term vanishes.
    Drop(usize),
    /// Adjacent factors out of order by first index: swap with sign.
    Swap(usize),
    /// Adjacent factors sharing a first index: three-term relation.
    Arnold(usize),
    /// Factor whose first-index slot carries non-unit content.
    Push(usize),
}

fn redexes(alg: &GradedAlgebra, term: &RawTerm) -> Vec<Redex> {
    let mut out = Vec::new();
    let w = &term.word;
    for s in 0..w.len().saturating_sub(1) {
        let (a, b) = (w[s], w[s + 1]);
        if a == b {
            out.push(Redex::Drop(s));
        } else if a.0 == b.0 {
            out.push(Redex::Arnold(s));
        } else if a.0 > b.0 {
            out.push(Redex::Swap(s));
        }
    }
    for (fpos, (i, _)) in w.iter().enumerate() {
        if term.tuple[*i] != alg.unit() {
            out.push(Redex::Push(fpos));
        }
    }
    out
}

fn fire(alg: &GradedAlgebra, term: RawTerm, redex: Redex, work: &mut Vec<RawTerm>) {
    match redex {
        Redex::Drop(_) => {}
        Redex::Swap(s) => {
            let mut t = term;
            t.word.swap(s, s + 1);
            t.coeff = -t.coeff;
            work.push(t);
        }
        Redex::Arnold(s) => {
            let (i, j1) = term.word[s];
            let (_, j2) = term.word[s + 1];
            debug_assert_ne!(j1, j2);
            // G_{i,j1}G_{i,j2} = G_{jk}·(G_{i,j2} − G_{i,j1}) where
            // (j,k) = (max,min) of j1,j2 — one identity covers both orders,
            // since the relation and the swap are both antisymmetric.
            let head = (j1.max(j2), j1.min(j2));
            let mut plus = term.clone();
            plus.word[s] = head;
            plus.word[s + 1] = (i, j2);
            let mut minus = term;
            minus.word[s] = head;
            minus.word[s + 1] = (i, j1);
            minus.coeff = -minus.coeff;
            work.push(plus);
            work.push(minus);
        }
        Redex::Push(fpos) => {
            let (i, j) = term.word[fpos];
            let x = term.tuple[i];
            let dx = alg.degree(x);
            let s1: usize = dx * term.tuple[..i].iter().map(|&a| alg.degree(a)).sum::<usize>();
            let mut stripped = term.tuple.clone();
            stripped[i] = alg.unit();
            let s2: usize =
                dx * stripped[..j].iter().map(|&a| alg.degree(a)).sum::<usize>();
            let sign = Sign::from_parity(s1 + s2);
            for (beta, c) in alg.mul_basis(x, stripped[j]) {
                let mut next = stripped.clone();
                next[j] = *beta;
                work.push(RawTerm {
                    tuple: next,
                    word: term.word.clone(),
                    coeff: sign.apply(&term.coeff * c),
                });
            }
        }
    }
}

/// Rewrites the given terms to normal form using the default (first-redex)
/// strategy.
pub fn normalize(alg: &GradedAlgebra, terms: Vec<RawTerm>) -> NormalForm {
    normalize_with_policy(alg, terms, &mut |_| 0)
}

/// Rewrites with a caller-chosen strategy: `choose(k)` picks which of the
/// `k` available moves fires next (must return a value `< k`).
pub fn normalize_with_policy(
    alg: &GradedAlgebra,
    terms: Vec<RawTerm>,
    choose: &mut dyn FnMut(usize) -> usize,
) -> NormalForm {
    let mut work: Vec<RawTerm> = Vec::new();
    for mut term in terms {
        if term.coeff.is_zero() {
            continue;
        }
        for pair in &mut term.word {
            assert_ne!(pair.0, pair.1, "generator indices must differ");
            assert!(
                pair.0 < term.tuple.len() && pair.1 < term.tuple.len(),
                "generator index out of range"
            );
            // Symmetrized generators: orient to first > second, no sign.
            if pair.0 < pair.1 {
                *pair = (pair.1, pair.0);
            }
        }
        work.push(term);
    }
    let mut out = NormalForm::new();
    while let Some(term) = work.pop() {
        if term.coeff.is_zero() {
            continue;
        }
        let cands = redexes(alg, &term);
        if cands.is_empty() {
            debug_assert!(term.word.windows(2).all(|w| w[0].0 < w[1].0));
            let entry = out.entry((term.word, term.tuple)).or_insert_with(Scalar::zero);
            *entry = &*entry + &term.coeff;
            continue;
        }
        let pick = choose(cands.len());
        fire(alg, term, cands[pick], &mut work);
    }
    out.retain(|_, c| !c.is_zero());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{validate_algebra, AlgebraSpec, BasisEntry, ProductEntry};
    use crate::scalar::scalar;

    fn torus() -> crate::algebra::PdAlgebra {
        validate_algebra(&AlgebraSpec {
            name: "torus".into(),
            formal_dimension: 2,
            basis: vec![
                BasisEntry { label: "1".into(), degree: 0 },
                BasisEntry { label: "e1".into(), degree: 1 },
                BasisEntry { label: "e2".into(), degree: 1 },
                BasisEntry { label: "w".into(), degree: 2 },
            ],
            orientation: "w".into(),
            products: vec![ProductEntry {
                left: "e1".into(),
                right: "e2".into(),
                value: vec![("w".into(), "1".into())],
            }],
        })
        .unwrap()
    }

    fn nf(entries: Vec<(Vec<GPair>, Vec<usize>, i64)>) -> NormalForm {
        entries.into_iter().map(|(w, t, c)| ((w, t), scalar(c))).collect()
    }

    #[test]
    fn symmetrization_and_sorting() {
        let pd = torus();
        let alg = pd.algebra();
        let u = alg.unit();
        // G with indices given backwards is the same generator.
        let got = normalize(
            alg,
            vec![RawTerm::new(vec![u, u, u], vec![(0, 2)], scalar(1))],
        );
        assert_eq!(got, nf(vec![(vec![(2, 0)], vec![u, u, u], 1)]));
        // Adjacent transposition of distinct firsts costs a sign.
        let got = normalize(
            alg,
            vec![RawTerm::new(vec![u; 4], vec![(3, 0), (2, 1)], scalar(1))],
        );
        assert_eq!(got, nf(vec![(vec![(2, 1), (3, 0)], vec![u; 4], -1)]));
        // A repeated generator kills the term.
        let got = normalize(
            alg,
            vec![RawTerm::new(vec![u; 3], vec![(1, 0), (1, 0)], scalar(1))],
        );
        assert!(got.is_empty());
    }

    #[test]
    fn three_term_relation_matches_the_hand_expansion() {
        let pd = torus();
        let alg = pd.algebra();
        let u = alg.unit();
        // With 1-based names: G31·G32 = −G21·G31 + G21·G32.
        let got = normalize(
            alg,
            vec![RawTerm::new(vec![u; 3], vec![(2, 0), (2, 1)], scalar(1))],
        );
        assert_eq!(
            got,
            nf(vec![
                (vec![(1, 0), (2, 0)], vec![u; 3], -1),
                (vec![(1, 0), (2, 1)], vec![u; 3], 1),
            ])
        );
        // And the reversed product G32·G31 = G21·G31 − G21·G32.
        let got = normalize(
            alg,
            vec![RawTerm::new(vec![u; 3], vec![(2, 1), (2, 0)], scalar(1))],
        );
        assert_eq!(
            got,
            nf(vec![
                (vec![(1, 0), (2, 0)], vec![u; 3], 1),
                (vec![(1, 0), (2, 1)], vec![u; 3], -1),
            ])
        );
    }

    #[test]
    fn content_push_carries_koszul_signs() {
        let pd = torus();
        let alg = pd.algebra();
        let u = alg.unit();
        let e1 = alg.index_of("e1").unwrap();
        let e2 = alg.index_of("e2").unwrap();
        let w = alg.index_of("w").unwrap();
        // (1⊗e1)·G21 = (e1⊗1)·G21: no sign, slot 1 is past nothing odd.
        let got = normalize(
            alg,
            vec![RawTerm::new(vec![u, e1], vec![(1, 0)], scalar(1))],
        );
        assert_eq!(got, nf(vec![(vec![(1, 0)], vec![e1, u], 1)]));
        // (e2⊗e1)·G21 = −(w⊗1)·G21: extracting e1 passes e2.
        let got = normalize(
            alg,
            vec![RawTerm::new(vec![e2, e1], vec![(1, 0)], scalar(1))],
        );
        assert_eq!(got, nf(vec![(vec![(1, 0)], vec![w, u], -1)]));
        // (1⊗e1⊗e2)·G32 = +(1⊗w⊗1)·G32: one sign from extraction, one
        // from the product e2·e1 = −w.
        let got = normalize(
            alg,
            vec![RawTerm::new(vec![u, e1, e2], vec![(2, 1)], scalar(1))],
        );
        assert_eq!(got, nf(vec![(vec![(2, 1)], vec![u, w, u], 1)]));
        // Content annihilating the target slot kills the term.
        let got = normalize(
            alg,
            vec![RawTerm::new(vec![e1, e1], vec![(1, 0)], scalar(1))],
        );
        assert!(got.is_empty());
    }

    #[test]
    fn normal_forms_are_fixed_points() {
        let pd = torus();
        let alg = pd.algebra();
        let u = alg.unit();
        let e1 = alg.index_of("e1").unwrap();
        let input = vec![
            RawTerm::new(vec![e1, u, u], vec![(2, 0), (2, 1)], scalar(3)),
            RawTerm::new(vec![u, u, e1], vec![(1, 0)], scalar(-2)),
        ];
        let first = normalize(alg, input);
        let again = normalize(
            alg,
            first
                .iter()
                .map(|((w, t), c)| RawTerm::new(t.clone(), w.clone(), c.clone()))
                .collect(),
        );
        assert_eq!(first, again);
        assert!(!first.is_empty());
    }

    #[test]
    fn strategy_choice_does_not_change_the_result() {
        let pd = torus();
        let alg = pd.algebra();
        let e1 = alg.index_of("e1").unwrap();
        let e2 = alg.index_of("e2").unwrap();
        // A term with every kind of redex available at once.
        let input = || {
            vec![RawTerm::new(
                vec![e1, e2, e2, e1],
                vec![(3, 1), (2, 0), (2, 1), (3, 0)],
                scalar(1),
            )]
        };
        let reference = normalize(alg, input());
        // Fire the *last* available redex instead of the first.
        let mut last = |k: usize| k - 1;
        assert_eq!(normalize_with_policy(alg, input(), &mut last), reference);
        // A rotating pick.
        let mut counter = 0usize;
        let mut rotate = move |k: usize| {
            counter = counter.wrapping_add(7);
            counter % k
        };
        assert_eq!(normalize_with_policy(alg, input(), &mut rotate), reference);
    }
}
