//! Bigraded cochain complexes and their cohomology.
//!
//! A `Bicomplex` stores the dimension of each bidegree `(p, q)` — `p` the
//! cohomological degree, `q` the generator count — and the differential
//! blocks of bidegree `(+1, -1)`. Betti numbers come from exact ranks of the
//! blocks; chain maps between complexes are block matrices, and their induced
//! maps on cohomology are computed with explicit cycle representatives.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::linalg::{Echelon, SparseMatrix, SparseVec, Solver};
use crate::poly::{BigradedPoly, UniPoly};

pub type Bidegree = (usize, usize);

// ---------------------------------------------------------------------------
// Bigraded complexes
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Default)]
pub struct Bicomplex {
    /// Dimension of each nonzero bidegree.
    pub dims: BTreeMap<Bidegree, usize>,
    /// Differential block leaving `(p, q)` toward `(p+1, q-1)`.
    pub d: BTreeMap<Bidegree, SparseMatrix>,
}

impl Bicomplex {
    pub fn dim(&self, p: usize, q: usize) -> usize {
        self.dims.get(&(p, q)).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn bidegrees(&self) -> impl Iterator<Item = Bidegree> + '_ {
        self.dims.iter().filter(|(_, d)| **d > 0).map(|(k, _)| *k)
    }

    /// The block leaving `(p, q)`, materializing zeros for absent entries.
    pub fn d_block(&self, p: usize, q: usize) -> SparseMatrix {
        match self.d.get(&(p, q)) {
            Some(m) => m.clone(),
            None => {
                let rows = if q == 0 { 0 } else { self.dim(p + 1, q - 1) };
                SparseMatrix::zero(rows, self.dim(p, q))
            }
        }
    }

    /// Checks `d ∘ d = 0` on every block; returns the first offending
    /// bidegree otherwise.
    pub fn verify_d_squared(&self) -> Result<(), Bidegree> {
        for &(p, q) in self.d.keys() {
            if q == 0 {
                continue;
            }
            let first = self.d_block(p, q);
            let second = self.d_block(p + 1, q - 1);
            if !second.compose(&first).is_zero() {
                return Err((p, q));
            }
        }
        Ok(())
    }

    /// Checks that every stored block has the shape its bidegrees demand.
    pub fn verify_shapes(&self) -> Result<(), Bidegree> {
        for (&(p, q), m) in &self.d {
            let target = if q == 0 { 0 } else { self.dim(p + 1, q - 1) };
            if m.ncols() != self.dim(p, q) || m.nrows() != target {
                return Err((p, q));
            }
        }
        Ok(())
    }

    /// Alternating dimension sums along the antidiagonals `p + q = w`
    /// (the differential preserves them, so cohomology must too).
    pub fn euler_antidiagonals(&self) -> BTreeMap<usize, i64> {
        let mut out = BTreeMap::new();
        for (&(p, q), &dim) in &self.dims {
            if dim > 0 {
                let sign = if p % 2 == 0 { 1 } else { -1 };
                *out.entry(p + q).or_insert(0) += sign * dim as i64;
            }
        }
        out.retain(|_, v| *v != 0);
        out
    }
}

/// Exact cohomology dimensions per bidegree, with block ranks computed in
/// parallel.
pub fn betti_dims(c: &Bicomplex) -> BTreeMap<Bidegree, usize> {
    let keys: Vec<Bidegree> = c.d.keys().copied().collect();
    let ranks: BTreeMap<Bidegree, usize> = keys
        .into_par_iter()
        .map(|(p, q)| ((p, q), c.d[&(p, q)].rank()))
        .collect();
    let rank_at = |p: usize, q: usize| ranks.get(&(p, q)).copied().unwrap_or(0);
    let mut out = BTreeMap::new();
    for (&(p, q), &dim) in &c.dims {
        if dim == 0 {
            continue;
        }
        let out_rank = rank_at(p, q);
        let in_rank = if p == 0 { 0 } else { rank_at(p - 1, q + 1) };
        let b = dim - out_rank - in_rank;
        if b > 0 {
            out.insert((p, q), b);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Betti tables
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiEntry {
    pub p: usize,
    pub q: usize,
    pub dim: usize,
}

/// Serializable bigraded cohomology table with its two Poincaré polynomials.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiTable {
    pub model: String,
    pub algebra: String,
    pub n: usize,
    pub betti: Vec<BettiEntry>,
    pub poincare_st: String,
    pub poincare_t: String,
}

impl BettiTable {
    pub fn new(
        model: &str,
        algebra: &str,
        n: usize,
        dims: &BTreeMap<Bidegree, usize>,
    ) -> BettiTable {
        let mut betti: Vec<BettiEntry> = dims
            .iter()
            .filter(|(_, d)| **d > 0)
            .map(|(&(p, q), &dim)| BettiEntry { p, q, dim })
            .collect();
        betti.sort_by_key(|e| (e.q, e.p));
        let poly = Self::poly_of(&betti);
        BettiTable {
            model: model.to_string(),
            algebra: algebra.to_string(),
            n,
            poincare_st: poly.render(false),
            poincare_t: poly.specialize_s_one().render("t", false),
            betti,
        }
    }

    pub fn from_bicomplex(model: &str, algebra: &str, n: usize, c: &Bicomplex) -> BettiTable {
        BettiTable::new(model, algebra, n, &betti_dims(c))
    }

    fn poly_of(betti: &[BettiEntry]) -> BigradedPoly {
        let mut poly = BigradedPoly::zero();
        for e in betti {
            poly = poly.add(&BigradedPoly::monomial(e.dim as i64, e.q, e.p));
        }
        poly
    }

    pub fn dim(&self, p: usize, q: usize) -> usize {
        self.betti
            .iter()
            .find(|e| e.p == p && e.q == q)
            .map(|e| e.dim)
            .unwrap_or(0)
    }

    pub fn total_rank(&self) -> usize {
        self.betti.iter().map(|e| e.dim).sum()
    }

    pub fn to_bigraded_poly(&self) -> BigradedPoly {
        Self::poly_of(&self.betti)
    }

    pub fn to_unipoly(&self) -> UniPoly {
        self.to_bigraded_poly().specialize_s_one()
    }

    pub fn euler_antidiagonals(&self) -> BTreeMap<usize, i64> {
        let mut out = BTreeMap::new();
        for e in &self.betti {
            let sign = if e.p % 2 == 0 { 1 } else { -1 };
            *out.entry(e.p + e.q).or_insert(0) += sign * e.dim as i64;
        }
        out.retain(|_, v| *v != 0);
        out
    }

    pub fn render_text(&self) -> String {
        let mut s = format!("{} model, algebra {}, n = {}\n", self.model, self.algebra, self.n);
        if self.betti.is_empty() {
            s.push_str("(zero cohomology)\n");
            return s;
        }
        let pmax = self.betti.iter().map(|e| e.p).max().unwrap();
        let qmax = self.betti.iter().map(|e| e.q).max().unwrap();
        let width = self
            .betti
            .iter()
            .map(|e| e.dim.to_string().len())
            .max()
            .unwrap()
            .max(pmax.to_string().len())
            .max(3);
        s.push_str(&format!("{:>4}", "q\\p"));
        for p in 0..=pmax {
            s.push_str(&format!(" {:>width$}", p, width = width));
        }
        s.push('\n');
        for q in 0..=qmax {
            s.push_str(&format!("{:>4}", q));
            for p in 0..=pmax {
                let d = self.dim(p, q);
                if d == 0 {
                    s.push_str(&format!(" {:>width$}", ".", width = width));
                } else {
                    s.push_str(&format!(" {:>width$}", d, width = width));
                }
            }
            s.push('\n');
        }
        s.push_str(&format!("P(s,t) = {}\n", self.poincare_st));
        s.push_str(&format!("P(t) = {}\n", self.poincare_t));
        s
    }

    pub fn render_latex(&self) -> String {
        let poly = self.to_bigraded_poly();
        let mut s = String::new();
        if self.betti.is_empty() {
            s.push_str("% zero cohomology\nP(s,t) = 0\n");
            return s;
        }
        let pmax = self.betti.iter().map(|e| e.p).max().unwrap();
        let qmax = self.betti.iter().map(|e| e.q).max().unwrap();
        s.push_str(&format!("\\begin{{array}}{{c|{}}}\n", "c".repeat(pmax + 1)));
        s.push_str("q \\backslash p");
        for p in 0..=pmax {
            s.push_str(&format!(" & {p}"));
        }
        s.push_str(" \\\\\\hline\n");
        for q in 0..=qmax {
            s.push_str(&format!("{q}"));
            for p in 0..=pmax {
                let d = self.dim(p, q);
                if d == 0 {
                    s.push_str(" & \\cdot");
                } else {
                    s.push_str(&format!(" & {d}"));
                }
            }
            s.push_str(" \\\\\n");
        }
        s.push_str("\\end{array}\n");
        match poly.display_factorization() {
            Some(f) if !f.trivial() => {
                s.push_str(&format!("P(s,t) = {}\n", f.render_latex()));
            }
            _ => {
                s.push_str(&format!("P(s,t) = {}\n", poly.render(true)));
            }
        }
        s
    }
}

// ---------------------------------------------------------------------------
// Chain maps
// ---------------------------------------------------------------------------

/// A bidegree-preserving map of bigraded complexes, stored blockwise.
/// Missing blocks are zero.
#[derive(Debug, Clone, Default)]
pub struct ChainMap {
    pub blocks: BTreeMap<Bidegree, SparseMatrix>,
}

/// Location of a failed blockwise identity: bidegree plus source column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockDefect {
    pub p: usize,
    pub q: usize,
    pub column: usize,
}

impl ChainMap {
    pub fn identity(c: &Bicomplex) -> ChainMap {
        let blocks = c
            .dims
            .iter()
            .filter(|(_, d)| **d > 0)
            .map(|(&k, &d)| (k, SparseMatrix::identity(d)))
            .collect();
        ChainMap { blocks }
    }

    pub fn block_or_zero(&self, src: &Bicomplex, tgt: &Bicomplex, p: usize, q: usize) -> SparseMatrix {
        match self.blocks.get(&(p, q)) {
            Some(m) => m.clone(),
            None => SparseMatrix::zero(tgt.dim(p, q), src.dim(p, q)),
        }
    }

    /// `self ∘ other` (apply `other` first), blockwise.
    pub fn compose(
        &self,
        other: &ChainMap,
        first_src: &Bicomplex,
        mid: &Bicomplex,
        tgt: &Bicomplex,
    ) -> ChainMap {
        let mut blocks = BTreeMap::new();
        for (&(p, q), _) in first_src.dims.iter().filter(|(_, d)| **d > 0) {
            let f = other.block_or_zero(first_src, mid, p, q);
            let g = self.block_or_zero(mid, tgt, p, q);
            blocks.insert((p, q), g.compose(&f));
        }
        ChainMap { blocks }
    }

    /// Commutation with the differentials: `f ∘ d_src = d_tgt ∘ f`.
    pub fn verify_chain(&self, src: &Bicomplex, tgt: &Bicomplex) -> Result<(), BlockDefect> {
        for (p, q) in src.bidegrees() {
            if q == 0 {
                // No differential leaves q = 0; nothing to check unless the
                // target block shape is off, which verify_shapes covers.
                continue;
            }
            let lhs = self
                .block_or_zero(src, tgt, p + 1, q - 1)
                .compose(&src.d_block(p, q));
            let rhs = tgt.d_block(p, q).compose(&self.block_or_zero(src, tgt, p, q));
            if let Some(column) = lhs.first_difference(&rhs) {
                return Err(BlockDefect { p, q, column });
            }
        }
        Ok(())
    }

    /// Blockwise equality against another map with the same end complexes.
    pub fn equals(
        &self,
        other: &ChainMap,
        src: &Bicomplex,
        tgt: &Bicomplex,
    ) -> Result<(), BlockDefect> {
        for (p, q) in src.bidegrees() {
            let a = self.block_or_zero(src, tgt, p, q);
            let b = other.block_or_zero(src, tgt, p, q);
            if let Some(column) = a.first_difference(&b) {
                return Err(BlockDefect { p, q, column });
            }
        }
        Ok(())
    }

    /// True when every block hits all of its target space.
    pub fn surjective_per_bidegree(&self, src: &Bicomplex, tgt: &Bicomplex) -> bool {
        tgt.bidegrees().all(|(p, q)| {
            let need = tgt.dim(p, q);
            need == 0 || self.block_or_zero(src, tgt, p, q).rank() == need
        })
    }
}

// ---------------------------------------------------------------------------
// Induced maps on cohomology
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InducedBlock {
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
}

#[derive(Debug, Clone)]
pub struct InducedMap {
    pub blocks: BTreeMap<Bidegree, InducedBlock>,
    pub isomorphism: bool,
}

impl InducedMap {
    pub fn first_failure(&self) -> Option<(Bidegree, InducedBlock)> {
        self.blocks
            .iter()
            .find(|(_, b)| !(b.source_dim == b.target_dim && b.rank == b.source_dim))
            .map(|(&k, &b)| (k, b))
    }
}

/// Cohomology classes of the block `(p, q)`: representatives of a basis of
/// `ker d / im d`, as columns over the space's coordinates.
fn cohomology_reps(c: &Bicomplex, p: usize, q: usize) -> Vec<SparseVec> {
    let mut ech = Echelon::new();
    if p > 0 {
        for col in c.d_block(p - 1, q + 1).columns() {
            ech.absorb(col.clone());
        }
    }
    let cycles = c.d_block(p, q).kernel_basis();
    let mut reps = Vec::new();
    for z in cycles {
        if ech.absorb(z.clone()) {
            reps.push(z);
        }
    }
    reps
}

/// The map induced on cohomology by a chain map, blockwise: dimensions on
/// both sides plus the exact rank. `isomorphism` records whether every block
/// is a bijection.
pub fn induced_map(src: &Bicomplex, tgt: &Bicomplex, f: &ChainMap) -> InducedMap {
    let mut keys: Vec<Bidegree> = src.bidegrees().collect();
    for k in tgt.bidegrees() {
        if !keys.contains(&k) {
            keys.push(k);
        }
    }
    keys.sort_unstable();
    let mut blocks = BTreeMap::new();
    for (p, q) in keys {
        let src_reps = cohomology_reps(src, p, q);
        let tgt_reps = cohomology_reps(tgt, p, q);
        let h_src = src_reps.len();
        let h_tgt = tgt_reps.len();
        if h_src == 0 && h_tgt == 0 {
            continue;
        }
        // Solve for coordinates of f(cycle) over [boundaries | reps]. The
        // boundary columns may be dependent; the representative coordinates
        // of any solution are still unique because the representatives are
        // independent modulo boundaries.
        let mut basis_cols: Vec<SparseVec> = Vec::new();
        let mut boundary_count = 0usize;
        if p > 0 {
            for col in tgt.d_block(p - 1, q + 1).columns() {
                if !col.is_empty() {
                    basis_cols.push(col.clone());
                    boundary_count += 1;
                }
            }
        }
        for r in &tgt_reps {
            basis_cols.push(r.clone());
        }
        let solver = Solver::new(&SparseMatrix::from_columns(tgt.dim(p, q), basis_cols));
        let f_block = f.block_or_zero(src, tgt, p, q);
        let mut induced_cols = Vec::with_capacity(h_src);
        for r in &src_reps {
            let image = f_block.apply(r);
            let coords = solver
                .solve(&image)
                .expect("image of a cycle under a chain map is a cycle");
            let col: SparseVec = coords
                .into_iter()
                .filter(|(i, _)| *i >= boundary_count)
                .map(|(i, v)| (i - boundary_count, v))
                .collect();
            induced_cols.push(col);
        }
        let rank = SparseMatrix::from_columns(h_tgt, induced_cols).rank();
        blocks.insert((p, q), InducedBlock { source_dim: h_src, target_dim: h_tgt, rank });
    }
    let isomorphism = blocks
        .values()
        .all(|b| b.source_dim == b.target_dim && b.rank == b.source_dim);
    InducedMap { blocks, isomorphism }
}
