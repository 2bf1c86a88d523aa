//! The quotient of a tensor power by the fat-diagonal ideal.
//!
//! For a duality algebra `H` with diagonal class `Δ`, the quotient
//! `H^{⊗l} / (Δ_{s,0} : 1 ≤ s < l)` is a free left `H`-module on slot 0:
//! the tuples whose slots `1..l` avoid the orientation class form a basis
//! (the *section*). The quotient is realized degree by degree as an echelon
//! of the ideal whose pivots are forced off the section coordinates, so
//! reduction rewrites any tensor as its canonical section representative.

use std::collections::HashMap;

use std::collections::BTreeMap;

use crate::algebra::GradedAlgebra;
use crate::linalg::Echelon;
use crate::scalar::Scalar;
use crate::tensor::TensorElement;

#[derive(Debug)]
struct DegreeBlock {
    tuples: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    ideal: Echelon,
    is_section: Vec<bool>,
}

#[derive(Debug)]
pub struct FatDiagonalQuotient {
    arity: usize,
    basis_degrees: Vec<usize>,
    blocks: BTreeMap<usize, DegreeBlock>,
}

/// All basis tuples of the given arity, grouped by total degree, in
/// lexicographic order within each degree.
fn tuples_by_degree(alg: &GradedAlgebra, arity: usize) -> BTreeMap<usize, Vec<Vec<usize>>> {
    let mut grouped: BTreeMap<usize, Vec<Vec<usize>>> = BTreeMap::new();
    // Depth-first in lexicographic order; grouping preserves that order.
    fn rec(
        alg: &GradedAlgebra,
        arity: usize,
        prefix: &mut Vec<usize>,
        degree: usize,
        grouped: &mut BTreeMap<usize, Vec<Vec<usize>>>,
    ) {
        if prefix.len() == arity {
            grouped.entry(degree).or_default().push(prefix.clone());
            return;
        }
        for i in 0..alg.dim() {
            prefix.push(i);
            rec(alg, arity, prefix, degree + alg.degree(i), grouped);
            prefix.pop();
        }
    }
    let mut prefix = Vec::new();
    rec(alg, arity, &mut prefix, 0, &mut grouped);
    grouped
}

impl FatDiagonalQuotient {
    /// Builds the quotient of `alg^{⊗arity}`. `diagonal` is the 2-slot
    /// diagonal class and `orientation` the index of the orientation basis
    /// element of `alg`.
    pub fn new(
        alg: &GradedAlgebra,
        orientation: usize,
        diagonal: &TensorElement,
        arity: usize,
    ) -> Self {
        assert!(arity >= 1);
        let grouped = tuples_by_degree(alg, arity);
        // Δ placed into slots (s, 0), for each s ≥ 1.
        let placed: Vec<TensorElement> =
            (1..arity).map(|s| diagonal.insert(alg, arity, &[s, 0])).collect();
        let mut blocks: BTreeMap<usize, DegreeBlock> = BTreeMap::new();
        for (&degree, tuples) in &grouped {
            let index: HashMap<Vec<usize>, usize> =
                tuples.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
            let is_section: Vec<bool> = tuples
                .iter()
                .map(|t| t.iter().skip(1).all(|&i| i != orientation))
                .collect();
            let mut ideal = Echelon::new();
            let mut rank = 0usize;
            if degree >= 2 {
                // Generators Δ_{s,0}·τ over tuples τ of complementary degree.
                for d_tau in 0..degree {
                    let Some(taus) = grouped.get(&d_tau) else { continue };
                    for placed_delta in &placed {
                        // Degree of Δ terms is the formal dimension; only one
                        // complementary degree matches, skip the rest cheaply.
                        let sample = placed_delta.terms().next();
                        let delta_degree = match sample {
                            Some((t, _)) => {
                                t.iter().map(|&i| alg.degree(i)).sum::<usize>()
                            }
                            None => continue,
                        };
                        if d_tau + delta_degree != degree {
                            continue;
                        }
                        for tau in taus {
                            let gen = placed_delta
                                .multiply(&TensorElement::basis(tau.clone()), alg);
                            let coords: Vec<(usize, Scalar)> = gen
                                .terms()
                                .map(|(t, c)| (index[t], c.clone()))
                                .collect();
                            let mut coords = coords;
                            coords.sort_by_key(|(i, _)| *i);
                            if let Some(pivot) = ideal.absorb_with_pivot_pref(
                                coords,
                                |coord| (is_section[coord] as usize, coord),
                            ) {
                                rank += 1;
                                assert!(
                                    !is_section[pivot],
                                    "fat-diagonal ideal meets the section in degree {degree}"
                                );
                            }
                        }
                    }
                }
            }
            let section_count = is_section.iter().filter(|s| **s).count();
            assert_eq!(
                rank + section_count,
                tuples.len(),
                "section is not a complement of the ideal in degree {degree}"
            );
            blocks.insert(
                degree,
                DegreeBlock { tuples: tuples.clone(), index, ideal, is_section },
            );
        }
        FatDiagonalQuotient {
            arity,
            basis_degrees: (0..alg.dim()).map(|i| alg.degree(i)).collect(),
            blocks,
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    fn tuple_degree(&self, tuple: &[usize]) -> usize {
        tuple.iter().map(|&i| self.basis_degrees[i]).sum()
    }

    /// Canonical representative supported on section tuples.
    pub fn reduce(&self, t: &TensorElement) -> TensorElement {
        let mut out = TensorElement::zero(self.arity);
        // Group the terms of t by degree and reduce each group at once.
        let mut by_degree: BTreeMap<usize, Vec<(usize, Scalar)>> = BTreeMap::new();
        for (tuple, c) in t.terms() {
            let d = self.tuple_degree(tuple);
            let block = &self.blocks[&d];
            by_degree.entry(d).or_default().push((block.index[tuple], c.clone()));
        }
        for (d, coords) in by_degree {
            let block = &self.blocks[&d];
            let mut v = coords;
            v.sort_by_key(|(i, _)| *i);
            let v = crate::linalg::collect_sparse(v);
            let reduced = block.ideal.reduce(v);
            for (coord, c) in reduced {
                debug_assert!(
                    block.is_section[coord],
                    "reduction left a non-section coordinate"
                );
                out.add_term(block.tuples[coord].clone(), c);
            }
        }
        out
    }

    /// Section tuples in canonical order (degree ascending, lexicographic
    /// within a degree).
    pub fn section_tuples(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for block in self.blocks.values() {
            for (i, t) in block.tuples.iter().enumerate() {
                if block.is_section[i] {
                    out.push(t.clone());
                }
            }
        }
        out
    }

    pub fn section_dim_in_degree(&self, d: usize) -> usize {
        self.blocks
            .get(&d)
            .map(|b| b.is_section.iter().filter(|s| **s).count())
            .unwrap_or(0)
    }

    pub fn is_section_tuple(&self, tuple: &[usize]) -> bool {
        let d = self.tuple_degree(tuple);
        let block = &self.blocks[&d];
        block.is_section[block.index[tuple]]
    }
}
