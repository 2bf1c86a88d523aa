//! Tensor powers of a graded algebra.
//!
//! Elements of the `n`-fold tensor power are sparse rational combinations of
//! basis tuples. All operations follow the Koszul sign rule: moving an
//! element of degree `a` past one of degree `b` costs `(-1)^{ab}`.

use std::collections::BTreeMap;

use crate::algebra::{GradedAlgebra, PdAlgebra, PuncturedAlgebra};
use crate::scalar::{Scalar, Sign};
use num_traits::Zero;

/// Sparse element of `A^{⊗n}` over the basis of tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorElement {
    arity: usize,
    terms: BTreeMap<Vec<usize>, Scalar>,
}

/// Koszul sign for rearranging homogeneous factors: factor `a` (with
/// `degrees[a]`) moves to position `dest[a]`. The sign collects one
/// `(-1)^{deg_a · deg_b}` per pair that swaps its relative order.
pub fn koszul_rearrangement_sign(degrees: &[usize], dest: &[usize]) -> Sign {
    let mut parity = 0usize;
    for a in 0..degrees.len() {
        for b in (a + 1)..degrees.len() {
            if dest[a] > dest[b] {
                parity += degrees[a] * degrees[b];
            }
        }
    }
    Sign::from_parity(parity)
}

impl TensorElement {
    pub fn zero(arity: usize) -> Self {
        TensorElement { arity, terms: BTreeMap::new() }
    }

    /// The basis tuple with the unit in every slot.
    pub fn unit(alg: &GradedAlgebra, arity: usize) -> Self {
        Self::basis(vec![alg.unit(); arity])
    }

    pub fn basis(tuple: Vec<usize>) -> Self {
        let arity = tuple.len();
        let mut terms = BTreeMap::new();
        terms.insert(tuple, Scalar::from_integer(1.into()));
        TensorElement { arity, terms }
    }

    pub fn from_terms(arity: usize, entries: Vec<(Vec<usize>, Scalar)>) -> Self {
        let mut out = TensorElement::zero(arity);
        for (tuple, c) in entries {
            out.add_term(tuple, c);
        }
        out
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, tuple: &[usize]) -> Scalar {
        self.terms.get(tuple).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, tuple: Vec<usize>, c: Scalar) {
        debug_assert_eq!(tuple.len(), self.arity);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(tuple);
        match entry {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &TensorElement) -> TensorElement {
        assert_eq!(self.arity, other.arity);
        let mut out = self.clone();
        for (t, c) in other.terms() {
            out.add_term(t.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> TensorElement {
        if c.is_zero() {
            return TensorElement::zero(self.arity);
        }
        TensorElement {
            arity: self.arity,
            terms: self.terms.iter().map(|(t, v)| (t.clone(), v * c)).collect(),
        }
    }

    /// Total degree of a basis tuple.
    pub fn tuple_degree(alg: &GradedAlgebra, tuple: &[usize]) -> usize {
        tuple.iter().map(|&i| alg.degree(i)).sum()
    }

    /// Componentwise product with the Koszul sign
    /// `(u_1⊗…⊗u_n)(v_1⊗…⊗v_n) = (-1)^{Σ_{a<b} |v_a||u_b|} u_1v_1 ⊗ … ⊗ u_nv_n`.
    pub fn multiply(&self, other: &TensorElement, alg: &GradedAlgebra) -> TensorElement {
        assert_eq!(self.arity, other.arity);
        let n = self.arity;
        let mut out = TensorElement::zero(n);
        for (u, cu) in self.terms() {
            for (v, cv) in other.terms() {
                let mut parity = 0usize;
                for a in 0..n {
                    for b in (a + 1)..n {
                        parity += alg.degree(v[a]) * alg.degree(u[b]);
                    }
                }
                let sign = Sign::from_parity(parity);
                // Expand the componentwise products of basis elements.
                let mut partial: Vec<(Vec<usize>, Scalar)> =
                    vec![(Vec::with_capacity(n), sign.apply(cu * cv))];
                for slot in 0..n {
                    let factors = alg.mul_basis(u[slot], v[slot]);
                    if factors.is_empty() {
                        partial.clear();
                        break;
                    }
                    let mut next = Vec::with_capacity(partial.len() * factors.len());
                    for (prefix, c) in &partial {
                        for (k, f) in factors {
                            let mut t = prefix.clone();
                            t.push(*k);
                            next.push((t, c * f));
                        }
                    }
                    partial = next;
                }
                for (t, c) in partial {
                    out.add_term(t, c);
                }
            }
        }
        out
    }

    /// Slot insertion: sends the `s`-th tensor factor to slot `slots[s]` of an
    /// `n`-slot tensor (0-based, injective) and fills the remaining slots with
    /// the unit. Out-of-order destinations contribute the Koszul sign of the
    /// rearrangement; order-preserving insertions are sign-free.
    pub fn insert(&self, alg: &GradedAlgebra, n: usize, slots: &[usize]) -> TensorElement {
        assert_eq!(slots.len(), self.arity);
        assert!(slots.iter().all(|&s| s < n), "insertion slot out of range");
        {
            let mut seen = vec![false; n];
            for &s in slots {
                assert!(!seen[s], "insertion slots must be distinct");
                seen[s] = true;
            }
        }
        let mut out = TensorElement::zero(n);
        for (u, c) in self.terms() {
            let degrees: Vec<usize> = u.iter().map(|&i| alg.degree(i)).collect();
            let sign = koszul_rearrangement_sign(&degrees, slots);
            let mut tuple = vec![alg.unit(); n];
            for (s, &slot) in slots.iter().enumerate() {
                tuple[slot] = u[s];
            }
            out.add_term(tuple, sign.apply(c.clone()));
        }
        out
    }

    /// Permutation action: slot `a` content moves to slot `perm[a]`, with the
    /// Koszul sign of the rearrangement.
    pub fn permute(&self, alg: &GradedAlgebra, perm: &[usize]) -> TensorElement {
        self.insert(alg, self.arity, perm)
    }

    /// Maps each slot's basis index through `f`, dropping terms where `f`
    /// returns `None` (a monomial coefficient change such as the projection
    /// onto a punctured algebra).
    pub fn map_slots(&self, f: impl Fn(usize) -> Option<usize>) -> TensorElement {
        let mut out = TensorElement::zero(self.arity);
        'term: for (u, c) in self.terms() {
            let mut tuple = Vec::with_capacity(self.arity);
            for &i in u {
                match f(i) {
                    Some(ni) => tuple.push(ni),
                    None => continue 'term,
                }
            }
            out.add_term(tuple, c.clone());
        }
        out
    }
}

/// The diagonal class of a duality algebra as a 2-slot tensor.
pub fn diagonal_tensor(pd: &PdAlgebra) -> TensorElement {
    TensorElement::from_terms(
        2,
        pd.diagonal_pairs().iter().map(|(a, b, c)| (vec![*a, *b], c.clone())).collect(),
    )
}

/// The reduced diagonal of a punctured algebra as a 2-slot tensor.
pub fn punctured_diagonal_tensor(pa: &PuncturedAlgebra) -> TensorElement {
    TensorElement::from_terms(
        2,
        pa.diagonal_pairs().iter().map(|(a, b, c)| (vec![*a, *b], c.clone())).collect(),
    )
}
