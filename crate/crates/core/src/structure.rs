//! Maps between models: the symmetric-group action, simplicial operators on
//! the punctured family (with explicit defect computations showing why the
//! closed family has none), the little-disks coaction indexed by ordered
//! partitions, tensor products of models, and the splitting map of a
//! connected sum.

use std::collections::{BTreeMap, HashMap};

use crate::algebra::{ConnectedSumAlgebra, PdAlgebra, PuncturedAlgebra};
use crate::cohomology::{Bicomplex, Bidegree, ChainMap};
use crate::linalg::{SparseMatrix, SparseVec};
use crate::model::{assemble_chain_map, Model, ModelElement, ModelKind};
use crate::rewrite::{GPair, RawTerm};
use crate::scalar::{Scalar, Sign};
use num_traits::{One, Zero};

/// One verdict from a verification suite.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CheckOutcome {
    pub check: String,
    pub instance: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CheckOutcome {
    fn pass(check: &str, instance: String) -> Self {
        CheckOutcome { check: check.to_string(), instance, pass: true, witness: None }
    }

    fn fail(check: &str, instance: String, witness: String) -> Self {
        CheckOutcome { check: check.to_string(), instance, pass: false, witness: Some(witness) }
    }

    fn of(check: &str, instance: String, ok: bool, witness: impl FnOnce() -> String) -> Self {
        if ok {
            CheckOutcome::pass(check, instance)
        } else {
            CheckOutcome::fail(check, instance, witness())
        }
    }
}

pub fn all_pass(outcomes: &[CheckOutcome]) -> bool {
    outcomes.iter().all(|o| o.pass)
}

// ---------------------------------------------------------------------------
// Symmetric-group action
// ---------------------------------------------------------------------------

/// Relabels the points by `perm` (slot `a` moves to `perm[a]`): coefficients
/// are permuted with their usual signs, generators carry both indices along.
/// For the reduced model slot 0 must stay fixed.
pub fn symmetric_action_element(model: &Model, perm: &[usize], elem: &ModelElement) -> ModelElement {
    assert_eq!(perm.len(), model.n());
    if model.kind() == ModelKind::J {
        assert_eq!(perm[0], 0, "the reduced model only carries the action fixing slot 0");
    }
    let alg = model.algebra();
    let mut raw = Vec::new();
    for ((word, tuple), c) in elem {
        let moved = crate::tensor::TensorElement::basis(tuple.clone())
            .permute(alg, perm)
            .scale(c);
        let word2: Vec<GPair> = word.iter().map(|&(i, j)| (perm[i], perm[j])).collect();
        for (t, cc) in moved.terms() {
            raw.push(RawTerm::new(t.clone(), word2.clone(), cc.clone()));
        }
    }
    model.normalize_terms(raw)
}

pub fn symmetric_action(model: &Model, perm: &[usize]) -> ChainMap {
    assemble_chain_map(model, model, |id| {
        symmetric_action_element(model, perm, &model.basis_element(id))
    })
}

/// Chain-map and composition checks for a handful of permutations.
pub fn symmetric_suite(model: &Model) -> Vec<CheckOutcome> {
    let n = model.n();
    let mut outcomes = Vec::new();
    if n < 2 {
        return outcomes;
    }
    let fixed_zero = model.kind() == ModelKind::J;
    let mut perms: Vec<Vec<usize>> = Vec::new();
    // A transposition of the last two slots and a rotation of the movable slots.
    let mut swap: Vec<usize> = (0..n).collect();
    swap.swap(n - 2, n - 1);
    perms.push(swap);
    let lo = if fixed_zero { 1 } else { 0 };
    if n - lo >= 2 {
        let mut rot: Vec<usize> = (0..n).collect();
        for a in lo..n {
            rot[a] = if a + 1 < n { a + 1 } else { lo };
        }
        perms.push(rot);
    }
    for perm in &perms {
        let map = symmetric_action(model, perm);
        let ok = map.verify_chain(model.complex(), model.complex());
        outcomes.push(CheckOutcome::of(
            "symmetric-action-chain-map",
            format!("{} n={} perm={:?}", model.display_name(), n, perm),
            ok.is_ok(),
            || format!("fails to commute with d at {:?}", ok.err().unwrap()),
        ));
    }
    if perms.len() == 2 {
        let a = &perms[0];
        let b = &perms[1];
        let composed: Vec<usize> = (0..n).map(|x| a[b[x]]).collect();
        let lhs = symmetric_action(model, a).compose(
            &symmetric_action(model, b),
            model.complex(),
            model.complex(),
            model.complex(),
        );
        let rhs = symmetric_action(model, &composed);
        outcomes.push(CheckOutcome::of(
            "symmetric-action-composition",
            format!("{} n={}", model.display_name(), n),
            lhs.equals(&rhs, model.complex(), model.complex()).is_ok(),
            || "composite action differs from the action of the composite".to_string(),
        ));
    }
    outcomes
}

// ---------------------------------------------------------------------------
// Simplicial operators on the point-count family
// ---------------------------------------------------------------------------

/// Face operator `D_k : model on n+1 points → model on n points` for
/// `0 ≤ k ≤ n+1`. The two edge values delete an end slot (augmenting its
/// content and killing generators that touch it); inner values merge the
/// adjacent slots `k−1, k` (multiplying their contents and killing the
/// generator between them).
pub fn face_element(src: &Model, tgt: &Model, k: usize, elem: &ModelElement) -> ModelElement {
    let n1 = src.n();
    assert_eq!(tgt.n() + 1, n1);
    assert!(k <= n1);
    assert_eq!(src.kind(), tgt.kind());
    let alg = src.algebra();
    let unit = alg.unit();
    let mut raw: Vec<RawTerm> = Vec::new();
    'terms: for ((word, tuple), c) in elem {
        // Generators.
        let mut word2: Vec<GPair> = Vec::with_capacity(word.len());
        for &(i, j) in word {
            let pair = if k == 0 {
                if j == 0 {
                    continue 'terms;
                }
                (i - 1, j - 1)
            } else if k == n1 {
                if i == n1 - 1 {
                    continue 'terms;
                }
                (i, j)
            } else {
                if i == k && j == k - 1 {
                    continue 'terms;
                }
                let phi = |a: usize| if a >= k { a - 1 } else { a };
                (phi(i), phi(j))
            };
            word2.push(pair);
        }
        // Coefficients.
        if k == 0 {
            if tuple[0] != unit {
                continue 'terms;
            }
            raw.push(RawTerm::new(tuple[1..].to_vec(), word2, c.clone()));
        } else if k == n1 {
            if tuple[n1 - 1] != unit {
                continue 'terms;
            }
            raw.push(RawTerm::new(tuple[..n1 - 1].to_vec(), word2, c.clone()));
        } else {
            // Multiply the adjacent contents; they stay in order, so the
            // only signs come from the algebra itself.
            for (beta, cc) in alg.mul_basis(tuple[k - 1], tuple[k]) {
                let mut t2 = Vec::with_capacity(n1 - 1);
                t2.extend_from_slice(&tuple[..k - 1]);
                t2.push(*beta);
                t2.extend_from_slice(&tuple[k + 1..]);
                raw.push(RawTerm::new(t2, word2.clone(), c * cc));
            }
        }
    }
    tgt.normalize_terms(raw)
}

pub fn face_map(src: &Model, tgt: &Model, k: usize) -> ChainMap {
    assemble_chain_map(src, tgt, |id| face_element(src, tgt, k, &src.basis_element(id)))
}

/// Degeneracy `S_k : model on n points → model on n+1 points` for
/// `0 ≤ k ≤ n`: inserts a fresh slot with unit content at position `k`.
pub fn degeneracy_element(src: &Model, tgt: &Model, k: usize, elem: &ModelElement) -> ModelElement {
    let n = src.n();
    assert_eq!(tgt.n(), n + 1);
    assert!(k <= n);
    assert_eq!(src.kind(), tgt.kind());
    let unit = src.algebra().unit();
    let shift = |a: usize| if a >= k { a + 1 } else { a };
    let mut raw = Vec::new();
    for ((word, tuple), c) in elem {
        let word2: Vec<GPair> = word.iter().map(|&(i, j)| (shift(i), shift(j))).collect();
        let mut t2 = Vec::with_capacity(n + 1);
        t2.extend_from_slice(&tuple[..k]);
        t2.push(unit);
        t2.extend_from_slice(&tuple[k..]);
        raw.push(RawTerm::new(t2, word2, c.clone()));
    }
    tgt.normalize_terms(raw)
}

pub fn degeneracy_map(src: &Model, tgt: &Model, k: usize) -> ChainMap {
    assemble_chain_map(src, tgt, |id| degeneracy_element(src, tgt, k, &src.basis_element(id)))
}

/// Runs the full battery on the punctured family up to `n_max` points:
/// every face and degeneracy is a chain map, the simplicial identities hold
/// whenever source and target fit in range, and the operators respect
/// products on sampled pairs.
pub fn simplicial_suite(pa: &PuncturedAlgebra, n_max: usize) -> Vec<CheckOutcome> {
    let name = pa.algebra().name().to_string();
    let models: Vec<Model> = (0..=n_max).map(|n| Model::punctured(pa, n)).collect();
    let mut out = Vec::new();

    let faces = |n1: usize, k: usize| face_map(&models[n1], &models[n1 - 1], k);
    let degens = |n: usize, k: usize| degeneracy_map(&models[n], &models[n + 1], k);

    // Chain-map property.
    for n1 in 1..=n_max {
        for k in 0..=n1 {
            let map = faces(n1, k);
            let ok = map.verify_chain(models[n1].complex(), models[n1 - 1].complex());
            out.push(CheckOutcome::of(
                "face-chain-map",
                format!("{name} D_{k} on {n1} points"),
                ok.is_ok(),
                || format!("d-square mismatch at {:?}", ok.err().unwrap()),
            ));
        }
    }
    for n in 0..n_max {
        for k in 0..=n {
            let map = degens(n, k);
            let ok = map.verify_chain(models[n].complex(), models[n + 1].complex());
            out.push(CheckOutcome::of(
                "degeneracy-chain-map",
                format!("{name} S_{k} on {n} points"),
                ok.is_ok(),
                || format!("d-square mismatch at {:?}", ok.err().unwrap()),
            ));
        }
    }

    // D_i D_j = D_{j−1} D_i for i < j.
    for n1 in 2..=n_max {
        for j in 1..=n1 {
            for i in 0..j {
                let lhs = faces(n1 - 1, i).compose(
                    &faces(n1, j),
                    models[n1].complex(),
                    models[n1 - 1].complex(),
                    models[n1 - 2].complex(),
                );
                let rhs = faces(n1 - 1, j - 1).compose(
                    &faces(n1, i),
                    models[n1].complex(),
                    models[n1 - 1].complex(),
                    models[n1 - 2].complex(),
                );
                out.push(CheckOutcome::of(
                    "face-face-identity",
                    format!("{name} D_{i}D_{j} on {n1} points"),
                    lhs.equals(&rhs, models[n1].complex(), models[n1 - 2].complex()).is_ok(),
                    || "D_i D_j ≠ D_(j−1) D_i".to_string(),
                ));
            }
        }
    }

    // S_i S_j = S_{j+1} S_i for i ≤ j.
    for n in 0..n_max.saturating_sub(1) {
        for j in 0..=n {
            for i in 0..=j {
                let lhs = degens(n + 1, i).compose(
                    &degens(n, j),
                    models[n].complex(),
                    models[n + 1].complex(),
                    models[n + 2].complex(),
                );
                let rhs = degens(n + 1, j + 1).compose(
                    &degens(n, i),
                    models[n].complex(),
                    models[n + 1].complex(),
                    models[n + 2].complex(),
                );
                out.push(CheckOutcome::of(
                    "degeneracy-degeneracy-identity",
                    format!("{name} S_{i}S_{j} on {n} points"),
                    lhs.equals(&rhs, models[n].complex(), models[n + 2].complex()).is_ok(),
                    || "S_i S_j ≠ S_(j+1) S_i".to_string(),
                ));
            }
        }
    }

    // D_i S_j: identity for i ∈ {j, j+1}, otherwise commuted.
    for n in 0..n_max {
        for j in 0..=n {
            for i in 0..=n + 1 {
                let lhs = faces(n + 1, i).compose(
                    &degens(n, j),
                    models[n].complex(),
                    models[n + 1].complex(),
                    models[n].complex(),
                );
                let (rhs, tag) = if i == j || i == j + 1 {
                    (ChainMap::identity(models[n].complex()), "identity")
                } else if i < j {
                    if n == 0 {
                        continue;
                    }
                    (
                        degens(n - 1, j - 1).compose(
                            &faces(n, i),
                            models[n].complex(),
                            models[n - 1].complex(),
                            models[n].complex(),
                        ),
                        "S_(j−1) D_i",
                    )
                } else {
                    if n == 0 {
                        continue;
                    }
                    (
                        degens(n - 1, j).compose(
                            &faces(n, i - 1),
                            models[n].complex(),
                            models[n - 1].complex(),
                            models[n].complex(),
                        ),
                        "S_j D_(i−1)",
                    )
                };
                out.push(CheckOutcome::of(
                    "face-degeneracy-identity",
                    format!("{name} D_{i}S_{j} on {n} points ({tag})"),
                    lhs.equals(&rhs, models[n].complex(), models[n].complex()).is_ok(),
                    || "mixed identity fails".to_string(),
                ));
            }
        }
    }

    // Multiplicativity on sampled basis pairs.
    for n1 in 2..=n_max {
        let src = &models[n1];
        let tgt = &models[n1 - 1];
        let step = (src.dim() / 7).max(1);
        for k in 0..=n1 {
            let mut ok = true;
            let mut witness = String::new();
            'outer: for a in (0..src.dim()).step_by(step) {
                for b in (0..src.dim()).step_by(step * 2 + 1) {
                    let x = src.basis_element(a);
                    let y = src.basis_element(b);
                    let lhs = face_element(src, tgt, k, &src.multiply(&x, &y));
                    let rhs = tgt.multiply(
                        &face_element(src, tgt, k, &x),
                        &face_element(src, tgt, k, &y),
                    );
                    if lhs != rhs {
                        ok = false;
                        witness = format!(
                            "D_{k}({} · {}) differs from the product of images",
                            src.basis_label(a),
                            src.basis_label(b)
                        );
                        break 'outer;
                    }
                }
            }
            out.push(CheckOutcome::of(
                "face-multiplicative",
                format!("{name} D_{k} on {n1} points"),
                ok,
                || witness.clone(),
            ));
        }
    }
    out
}

/// On the closed family the face operators are *not* chain maps; the two
/// commutator defects on the last generator are computed exactly and
/// compared with their predicted values: deleting the extra point leaves the
/// orientation class behind, and merging it multiplies the diagonal into the
/// Euler class.
pub fn closed_family_controls(pd: &PdAlgebra, n: usize) -> Vec<CheckOutcome> {
    assert!(n >= 1);
    let name = pd.name().to_string();
    let src = Model::kriz(pd, n + 1);
    let tgt = Model::kriz(pd, n);
    let unit = pd.algebra().unit();
    let omega = pd.orientation();
    let g = {
        let mut e = ModelElement::new();
        e.insert((vec![(n, n - 1)], vec![unit; n + 1]), Scalar::one());
        e
    };
    let defect = |k: usize| -> ModelElement {
        let lhs = face_element(&src, &tgt, k, &src.differential(&g));
        let rhs = tgt.differential(&face_element(&src, &tgt, k, &g));
        let mut d = lhs;
        for (key, c) in rhs {
            let e = d.entry(key).or_insert_with(Scalar::zero);
            *e = &*e - &c;
        }
        d.retain(|_, c| !c.is_zero());
        d
    };
    let orientation_at_last = |scale: Scalar| -> ModelElement {
        let mut t = vec![unit; n];
        t[n - 1] = omega;
        let mut e = ModelElement::new();
        if !scale.is_zero() {
            e.insert((vec![], t), scale);
        }
        e
    };

    let mut out = Vec::new();
    let edge = defect(n + 1);
    let expected_edge = orientation_at_last(Scalar::one());
    out.push(CheckOutcome::of(
        "closed-face-defect-edge",
        format!(
            "{name} deleting point {} of {}: commutator of d and the face on G({},{})",
            n + 1,
            n + 1,
            n + 1,
            n
        ),
        edge == expected_edge && !edge.is_empty(),
        || {
            format!(
                "defect is {}, expected the orientation in the last slot",
                tgt.element_to_string(&edge)
            )
        },
    ));
    let merge = defect(n);
    let chi = pd.algebra().euler_characteristic();
    let expected_merge = orientation_at_last(Scalar::from_integer(chi.into()));
    out.push(CheckOutcome::of(
        "closed-face-defect-merge",
        format!(
            "{name} merging points {} and {} of {}: commutator of d and the merge on G({},{})",
            n,
            n + 1,
            n + 1,
            n + 1,
            n
        ),
        merge == expected_merge,
        || {
            format!(
                "defect is {}, expected {} times the orientation in the last slot",
                tgt.element_to_string(&merge),
                chi
            )
        },
    ));
    out
}

// ---------------------------------------------------------------------------
// Tensor products of models
// ---------------------------------------------------------------------------

/// Elements of a product: coefficient per tuple of factor basis ids.
pub type ProductElement = BTreeMap<Vec<usize>, Scalar>;

/// Tensor product of models, with the componentwise product and the Leibniz
/// differential.
#[derive(Debug)]
pub struct ModelProduct {
    factors: Vec<Model>,
    basis: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    place: Vec<(Bidegree, usize)>,
    blocks: BTreeMap<Bidegree, Vec<usize>>,
    complex: Bicomplex,
}

impl ModelProduct {
    pub fn new(factors: Vec<Model>) -> ModelProduct {
        let mut basis: Vec<Vec<usize>> = vec![Vec::new()];
        for f in &factors {
            let mut next = Vec::with_capacity(basis.len() * f.dim());
            for t in &basis {
                for id in 0..f.dim() {
                    let mut t2 = t.clone();
                    t2.push(id);
                    next.push(t2);
                }
            }
            basis = next;
        }
        let mut index = HashMap::new();
        let mut blocks: BTreeMap<Bidegree, Vec<usize>> = BTreeMap::new();
        let mut place = vec![((0, 0), 0); basis.len()];
        for (gid, ids) in basis.iter().enumerate() {
            let mut p = 0;
            let mut q = 0;
            for (f, &id) in factors.iter().zip(ids) {
                p += f.basis()[id].p;
                q += f.basis()[id].q;
            }
            index.insert(ids.clone(), gid);
            blocks.entry((p, q)).or_default().push(gid);
        }
        for (&pq, ids) in &blocks {
            for (pos, &gid) in ids.iter().enumerate() {
                place[gid] = (pq, pos);
            }
        }
        let mut product = ModelProduct {
            factors,
            basis,
            index,
            place,
            blocks: blocks.clone(),
            complex: Bicomplex::default(),
        };
        let mut complex = Bicomplex::default();
        for (&pq, ids) in &blocks {
            complex.dims.insert(pq, ids.len());
        }
        for (&(p, q), ids) in &blocks {
            if q == 0 {
                continue;
            }
            let target = complex.dims.get(&(p + 1, q - 1)).copied().unwrap_or(0);
            let mut cols = Vec::with_capacity(ids.len());
            for &gid in ids {
                let elem = product.differential(&product.basis_element(gid));
                let mut col: SparseVec = Vec::new();
                for (key, c) in &elem {
                    let tid = product.index[key];
                    let (tpq, tpos) = product.place[tid];
                    assert_eq!(tpq, (p + 1, q - 1), "product differential is homogeneous");
                    col.push((tpos, c.clone()));
                }
                col.sort_by_key(|(i, _)| *i);
                cols.push(col);
            }
            let m = SparseMatrix::from_columns(target, cols);
            if !m.is_zero() {
                complex.d.insert((p, q), m);
            }
        }
        complex.verify_d_squared().expect("product differential squares to zero");
        product.complex = complex;
        product
    }

    pub fn factors(&self) -> &[Model] {
        &self.factors
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn complex(&self) -> &Bicomplex {
        &self.complex
    }

    pub fn place(&self, gid: usize) -> (Bidegree, usize) {
        self.place[gid]
    }

    pub fn block_ids(&self, pq: Bidegree) -> &[usize] {
        self.blocks.get(&pq).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn basis_ids(&self, gid: usize) -> &[usize] {
        &self.basis[gid]
    }

    pub fn basis_element(&self, gid: usize) -> ProductElement {
        let mut e = ProductElement::new();
        e.insert(self.basis[gid].clone(), Scalar::one());
        e
    }

    pub fn basis_label(&self, gid: usize) -> String {
        let parts: Vec<String> = self
            .factors
            .iter()
            .zip(&self.basis[gid])
            .map(|(f, &id)| f.basis_label(id))
            .collect();
        parts.join(" ⊠ ")
    }

    pub fn total_bidegree(&self, ids: &[usize]) -> Bidegree {
        let mut p = 0;
        let mut q = 0;
        for (f, &id) in self.factors.iter().zip(ids) {
            p += f.basis()[id].p;
            q += f.basis()[id].q;
        }
        (p, q)
    }

    pub fn coords(&self, elem: &ProductElement) -> SparseVec {
        let mut v: SparseVec = elem
            .iter()
            .map(|(ids, c)| (self.index[ids], c.clone()))
            .collect();
        v.sort_by_key(|(i, _)| *i);
        v
    }

    /// Leibniz differential: the factor degree accumulates as a sign.
    pub fn differential(&self, elem: &ProductElement) -> ProductElement {
        let mut out = ProductElement::new();
        for (ids, c) in elem {
            let mut prefix = 0usize;
            for (i, f) in self.factors.iter().enumerate() {
                let b = &f.basis()[ids[i]];
                let image = f.differential(&f.basis_element(ids[i]));
                let sign = Sign::from_parity(prefix);
                for (tid, dc) in f.coords(&image) {
                    let mut key = ids.clone();
                    key[i] = tid;
                    let e = out.entry(key).or_insert_with(Scalar::zero);
                    *e = &*e + &sign.apply(c * &dc);
                }
                prefix += b.p;
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Componentwise product with the sign that moves each right-hand factor
    /// past the left-hand factors after it.
    pub fn multiply(&self, a: &ProductElement, b: &ProductElement) -> ProductElement {
        let r = self.factors.len();
        let mut out = ProductElement::new();
        for (ta, ca) in a {
            for (tb, cb) in b {
                let mut parity = 0usize;
                for i in 0..r {
                    for j in (i + 1)..r {
                        parity += self.factors[i].basis()[tb[i]].p
                            * self.factors[j].basis()[ta[j]].p;
                    }
                }
                let mut partial: Vec<(Vec<usize>, Scalar)> =
                    vec![(Vec::with_capacity(r), Sign::from_parity(parity).apply(ca * cb))];
                for i in 0..r {
                    let f = &self.factors[i];
                    let prod = f.multiply(&f.basis_element(ta[i]), &f.basis_element(tb[i]));
                    let coords = f.coords(&prod);
                    let mut next = Vec::with_capacity(partial.len() * coords.len());
                    for (ids, c) in &partial {
                        for (tid, fc) in &coords {
                            let mut ids2 = ids.clone();
                            ids2.push(*tid);
                            next.push((ids2, c * fc));
                        }
                    }
                    partial = next;
                }
                for (ids, c) in partial {
                    let e = out.entry(ids).or_insert_with(Scalar::zero);
                    *e = &*e + &c;
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }
}

/// Blockwise matrix of a map into a product, from images of basis vectors.
pub fn assemble_to_product(
    src: &Model,
    tgt: &ModelProduct,
    mut image: impl FnMut(usize) -> ProductElement,
) -> ChainMap {
    let mut map = ChainMap::default();
    for pq in src.bidegrees() {
        let ids = src.block_ids(pq);
        let target_dim = tgt.complex().dim(pq.0, pq.1);
        let mut cols = Vec::with_capacity(ids.len());
        for &id in ids {
            let elem = image(id);
            let mut col: SparseVec = Vec::new();
            for (key, c) in &elem {
                let gid = tgt.index[key];
                let (tpq, tpos) = tgt.place[gid];
                assert_eq!(tpq, pq, "image is not bidegree-preserving");
                col.push((tpos, c.clone()));
            }
            col.sort_by_key(|(i, _)| *i);
            cols.push(col);
        }
        map.blocks.insert(pq, SparseMatrix::from_columns(target_dim, cols));
    }
    map
}

// ---------------------------------------------------------------------------
// The little-disks coaction
// ---------------------------------------------------------------------------

/// An ordered partition of the slots `0..n`: a (possibly empty) base block
/// that stays on the punctured space, and an ordered list of nonempty
/// clusters that slide toward the puncture.
#[derive(Debug, Clone)]
pub struct OrderedPartition {
    pub base: Vec<usize>,
    pub clusters: Vec<Vec<usize>>,
}

impl OrderedPartition {
    pub fn new(n: usize, base: Vec<usize>, clusters: Vec<Vec<usize>>) -> OrderedPartition {
        let mut seen = vec![false; n];
        let mut mark = |slots: &[usize]| {
            for &s in slots {
                assert!(s < n, "slot {s} out of range");
                assert!(!seen[s], "slot {s} appears twice");
                seen[s] = true;
            }
        };
        mark(&base);
        for c in &clusters {
            assert!(!c.is_empty(), "clusters must be nonempty");
            mark(c);
        }
        assert!(seen.iter().all(|&b| b), "partition must cover all slots");
        let mut base = base;
        base.sort_unstable();
        let clusters = clusters
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        OrderedPartition { base, clusters }
    }

    fn bucket_of(&self, n: usize) -> Vec<(usize, usize)> {
        // slot → (bucket, position); bucket 0 is the base.
        let mut lookup = vec![(usize::MAX, usize::MAX); n];
        for (pos, &s) in self.base.iter().enumerate() {
            lookup[s] = (0, pos);
        }
        for (c, cluster) in self.clusters.iter().enumerate() {
            for (pos, &s) in cluster.iter().enumerate() {
                lookup[s] = (c + 1, pos);
            }
        }
        lookup
    }
}

/// The coaction of the partition: base content stays put, cluster content is
/// augmented away, generators survive within a block and die across blocks,
/// and reordering the surviving odd generators by block contributes the
/// usual sign.
pub struct Coaction {
    pub partition: OrderedPartition,
    pub product: ModelProduct,
    pub map: ChainMap,
}

pub fn coaction_element(
    src: &Model,
    product: &ModelProduct,
    partition: &OrderedPartition,
    elem: &ModelElement,
) -> ProductElement {
    assert_eq!(src.kind(), ModelKind::Punctured);
    let n = src.n();
    let lookup = partition.bucket_of(n);
    let unit = src.algebra().unit();
    let r = partition.clusters.len();
    let mut out = ProductElement::new();
    'terms: for ((word, tuple), coeff) in elem {
        // Coefficients: cluster content must be trivial.
        let mut base_tuple = vec![unit; partition.base.len()];
        for (slot, &content) in tuple.iter().enumerate() {
            let (bucket, pos) = lookup[slot];
            if bucket == 0 {
                base_tuple[pos] = content;
            } else if content != unit {
                continue 'terms;
            }
        }
        // Generators: split by block, recording the bucket sequence.
        let mut words: Vec<Vec<GPair>> = vec![Vec::new(); r + 1];
        let mut buckets: Vec<usize> = Vec::with_capacity(word.len());
        for &(i, j) in word {
            let (bi, pi) = lookup[i];
            let (bj, pj) = lookup[j];
            if bi != bj {
                continue 'terms;
            }
            words[bi].push((pi, pj));
            buckets.push(bi);
        }
        // Reordering the odd generators into block order.
        let mut inversions = 0usize;
        for s in 0..buckets.len() {
            for t in (s + 1)..buckets.len() {
                if buckets[s] > buckets[t] {
                    inversions += 1;
                }
            }
        }
        let sign = Sign::from_parity(inversions);
        // Normalize per factor and expand.
        let mut partial: Vec<(Vec<usize>, Scalar)> =
            vec![(Vec::with_capacity(r + 1), sign.apply(coeff.clone()))];
        for (b, factor) in product.factors().iter().enumerate() {
            let t = if b == 0 {
                base_tuple.clone()
            } else {
                vec![factor.algebra().unit(); factor.n()]
            };
            let nf = factor.normalize_terms(vec![RawTerm::new(t, words[b].clone(), Scalar::one())]);
            let coords = factor.coords(&nf);
            let mut next = Vec::with_capacity(partial.len() * coords.len());
            for (ids, c) in &partial {
                for (tid, fc) in &coords {
                    let mut ids2 = ids.clone();
                    ids2.push(*tid);
                    next.push((ids2, c * fc));
                }
            }
            partial = next;
        }
        for (ids, c) in partial {
            let e = out.entry(ids).or_insert_with(Scalar::zero);
            *e = &*e + &c;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn coaction(pa: &PuncturedAlgebra, src: &Model, partition: OrderedPartition) -> Coaction {
    assert_eq!(src.kind(), ModelKind::Punctured);
    let formal_dimension = pa.formal_dimension();
    let mut factors = vec![Model::punctured(pa, partition.base.len())];
    for c in &partition.clusters {
        factors.push(Model::little_disks(c.len(), formal_dimension));
    }
    let product = ModelProduct::new(factors);
    let map = assemble_to_product(src, &product, |id| {
        coaction_element(src, &product, &partition, &src.basis_element(id))
    });
    Coaction { partition, product, map }
}

/// Coaction battery: chain map, multiplicativity on sampled pairs, and
/// agreement with the end face when the partition peels off the last point.
pub fn coaction_suite(pa: &PuncturedAlgebra, n: usize) -> Vec<CheckOutcome> {
    let name = pa.algebra().name().to_string();
    let src = Model::punctured(pa, n);
    let mut out = Vec::new();
    let mut partitions: Vec<OrderedPartition> = Vec::new();
    if n >= 1 {
        partitions.push(OrderedPartition::new(
            n,
            (0..n - 1).collect(),
            vec![vec![n - 1]],
        ));
    }
    if n >= 2 {
        partitions.push(OrderedPartition::new(
            n,
            (0..n - 2).collect(),
            vec![vec![n - 2, n - 1]],
        ));
        partitions.push(OrderedPartition::new(n, vec![], vec![(0..n).collect()]));
    }
    if n >= 3 {
        partitions.push(OrderedPartition::new(
            n,
            vec![0],
            vec![vec![1], (2..n).collect()],
        ));
    }
    for partition in partitions {
        let instance = format!(
            "{name} n={n} base={:?} clusters={:?}",
            partition.base, partition.clusters
        );
        let co = coaction(pa, &src, partition);
        let chain = co.map.verify_chain(src.complex(), co.product.complex());
        out.push(CheckOutcome::of(
            "coaction-chain-map",
            instance.clone(),
            chain.is_ok(),
            || format!("fails to commute with d at {:?}", chain.err().unwrap()),
        ));
        // Multiplicativity samples.
        let step = (src.dim() / 5).max(1);
        let mut ok = true;
        let mut witness = String::new();
        'outer: for a in (0..src.dim()).step_by(step) {
            for b in (0..src.dim()).step_by(step + 1) {
                let x = src.basis_element(a);
                let y = src.basis_element(b);
                let lhs = coaction_element(&src, &co.product, &co.partition, &src.multiply(&x, &y));
                let rhs = co.product.multiply(
                    &coaction_element(&src, &co.product, &co.partition, &x),
                    &coaction_element(&src, &co.product, &co.partition, &y),
                );
                if lhs != rhs {
                    ok = false;
                    witness = format!(
                        "coaction({} · {}) differs from the product of coactions",
                        src.basis_label(a),
                        src.basis_label(b)
                    );
                    break 'outer;
                }
            }
        }
        out.push(CheckOutcome::of("coaction-multiplicative", instance, ok, || witness.clone()));
    }
    // Peeling off the last point agrees with the end face operator.
    if n >= 1 {
        let partition = OrderedPartition::new(n, (0..n - 1).collect(), vec![vec![n - 1]]);
        let co = coaction(pa, &src, partition);
        let tgt = Model::punctured(pa, n - 1);
        let mut ok = true;
        let mut witness = String::new();
        for id in 0..src.dim() {
            let q = coaction_element(&src, &co.product, &co.partition, &src.basis_element(id));
            // Strip the one-dimensional cluster factor.
            let mut stripped = ModelElement::new();
            for (ids, c) in &q {
                assert_eq!(ids[1], 0, "the single-point cluster factor is one-dimensional");
                let b = &co.product.factors()[0].basis()[ids[0]];
                stripped.insert((b.word.clone(), b.tuple.clone()), c.clone());
            }
            let f = face_element(&src, &tgt, n, &src.basis_element(id));
            if stripped != f {
                ok = false;
                witness = format!("mismatch on {}", src.basis_label(id));
                break;
            }
        }
        out.push(CheckOutcome::of(
            "coaction-end-face-agreement",
            format!("{name} n={n}"),
            ok,
            || witness.clone(),
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// Connected-sum splitting
// ---------------------------------------------------------------------------

/// The splitting map of a connected sum: the first `r` points keep the
/// left-hand content, the last `s` points the right-hand content, pairs
/// across the seam die, and each projection kills the other summand along
/// with the orientation.
pub struct ConnectedSumSplit {
    pub source: Model,
    pub product: ModelProduct,
    pub map: ChainMap,
}

pub fn connected_sum_split_element(
    cs: &ConnectedSumAlgebra,
    src: &Model,
    product: &ModelProduct,
    r: usize,
    elem: &ModelElement,
) -> ProductElement {
    let n = src.n();
    let g_degree = src.g_degree();
    let alg = src.algebra();
    let mut out = ProductElement::new();
    'terms: for ((word, tuple), coeff) in elem {
        let mut left_tuple = Vec::with_capacity(r);
        let mut right_tuple = Vec::with_capacity(n - r);
        for (slot, &content) in tuple.iter().enumerate() {
            if slot < r {
                match cs.project_left(content) {
                    Some(i) => left_tuple.push(i),
                    None => continue 'terms,
                }
            } else {
                match cs.project_right(content) {
                    Some(i) => right_tuple.push(i),
                    None => continue 'terms,
                }
            }
        }
        let mut left_word: Vec<GPair> = Vec::new();
        let mut right_word: Vec<GPair> = Vec::new();
        for &(i, j) in word {
            if i < r && j < r {
                left_word.push((i, j));
            } else if i >= r && j >= r {
                right_word.push((i - r, j - r));
            } else {
                continue 'terms;
            }
        }
        // Move the right-hand coefficients past the left-hand generators.
        let right_deg: usize = tuple[r..].iter().map(|&a| alg.degree(a)).sum();
        let sign = Sign::from_parity(right_deg * (left_word.len() * g_degree));
        let lf = &product.factors()[0];
        let rf = &product.factors()[1];
        let le = lf.normalize_terms(vec![RawTerm::new(left_tuple, left_word, Scalar::one())]);
        let re = rf.normalize_terms(vec![RawTerm::new(right_tuple, right_word, Scalar::one())]);
        for (lid, lc) in lf.coords(&le) {
            for (rid, rc) in rf.coords(&re) {
                let contribution = sign.apply(&(coeff * &lc) * &rc);
                let e = out.entry(vec![lid, rid]).or_insert_with(Scalar::zero);
                *e = &*e + &contribution;
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn connected_sum_split(cs: &ConnectedSumAlgebra, r: usize, s: usize) -> ConnectedSumSplit {
    let source = Model::kriz(cs.sum(), r + s);
    let product = ModelProduct::new(vec![
        Model::punctured(cs.left_punctured(), r),
        Model::punctured(cs.right_punctured(), s),
    ]);
    let map = assemble_to_product(&source, &product, |id| {
        connected_sum_split_element(cs, &source, &product, r, &source.basis_element(id))
    });
    ConnectedSumSplit { source, product, map }
}

pub fn connected_sum_suite(cs: &ConnectedSumAlgebra, r: usize, s: usize) -> Vec<CheckOutcome> {
    let split = connected_sum_split(cs, r, s);
    let name = cs.sum().name().to_string();
    let mut out = Vec::new();
    let chain = split.map.verify_chain(split.source.complex(), split.product.complex());
    out.push(CheckOutcome::of(
        "connected-sum-chain-map",
        format!("{name} split {r}+{s}"),
        chain.is_ok(),
        || format!("fails to commute with d at {:?}", chain.err().unwrap()),
    ));
    let src = &split.source;
    let step = (src.dim() / 6).max(1);
    let mut ok = true;
    let mut witness = String::new();
    'outer: for a in (0..src.dim()).step_by(step) {
        for b in (0..src.dim()).step_by(step + 1) {
            let x = src.basis_element(a);
            let y = src.basis_element(b);
            let lhs =
                connected_sum_split_element(cs, src, &split.product, r, &src.multiply(&x, &y));
            let rhs = split.product.multiply(
                &connected_sum_split_element(cs, src, &split.product, r, &x),
                &connected_sum_split_element(cs, src, &split.product, r, &y),
            );
            if lhs != rhs {
                ok = false;
                witness = format!(
                    "split({} · {}) differs from the product of splits",
                    src.basis_label(a),
                    src.basis_label(b)
                );
                break 'outer;
            }
        }
    }
    out.push(CheckOutcome::of(
        "connected-sum-multiplicative",
        format!("{name} split {r}+{s}"),
        ok,
        || witness.clone(),
    ));
    out
}

// ---------------------------------------------------------------------------
// Coefficient projection
// ---------------------------------------------------------------------------

/// The slotwise projection from the closed model to the punctured one
/// (kill the orientation in every slot); a chain map because the reduced
/// diagonal is exactly the image of the full one.
pub fn puncture_map(src: &Model, pa: &PuncturedAlgebra, tgt: &Model) -> ChainMap {
    assert_eq!(src.kind(), ModelKind::Kriz);
    assert_eq!(tgt.kind(), ModelKind::Punctured);
    assert_eq!(src.n(), tgt.n());
    assemble_chain_map(src, tgt, |id| {
        let b = &src.basis()[id];
        let mut tuple = Vec::with_capacity(b.tuple.len());
        for &a in &b.tuple {
            match pa.project_basis(a) {
                Some(i) => tuple.push(i),
                None => return ModelElement::new(),
            }
        }
        tgt.normalize_terms(vec![RawTerm::new(tuple, b.word.clone(), Scalar::one())])
    })
}
