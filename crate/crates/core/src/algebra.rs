//! Graded-commutative algebras with Poincaré duality over the rationals.
//!
//! The JSON input format names a basis with degrees, an orientation class in
//! the top degree, and the products of positive-degree basis pairs; unit laws
//! and graded commutativity fill in the rest. Validation checks every axiom
//! (unit, grading, commutativity, associativity, one-dimensional top degree,
//! nondegenerate intersection pairing) and reports all violations at once.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{add_scaled, collect_sparse, scale, SparseMatrix, SparseVec, Solver};
use crate::poly::UniPoly;
use crate::scalar::{parse_scalar, scalar_to_string, Scalar, ScalarParseError, Sign};
use num_traits::{One, Zero};

// ---------------------------------------------------------------------------
// JSON-facing description
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct BasisEntry {
    pub label: String,
    pub degree: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ProductEntry {
    pub left: String,
    pub right: String,
    /// Sparse expansion of `left · right`: `[basis label, rational]` pairs.
    pub value: Vec<(String, String)>,
}

/// Serializable description of a graded algebra with a chosen orientation.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct AlgebraSpec {
    pub name: String,
    pub formal_dimension: usize,
    pub basis: Vec<BasisEntry>,
    pub orientation: String,
    #[serde(default)]
    pub products: Vec<ProductEntry>,
}

impl AlgebraSpec {
    /// Normalized form: products sorted by operand pair, expansions sorted by
    /// label, scalars in lowest terms. Used for content-addressed caching.
    pub fn canonicalize(&self) -> AlgebraSpec {
        let mut spec = self.clone();
        for p in &mut spec.products {
            p.value.sort_by(|a, b| a.0.cmp(&b.0));
            for v in &mut p.value {
                if let Ok(s) = parse_scalar(&v.1) {
                    v.1 = scalar_to_string(&s);
                }
            }
            p.value.retain(|v| v.1 != "0");
        }
        spec.products.retain(|p| !p.value.is_empty());
        spec.products.sort_by(|a, b| (&a.left, &a.right).cmp(&(&b.left, &b.right)));
        spec
    }

    pub fn canonical_json(&self) -> String {
        serde_json::to_string(&self.canonicalize()).expect("algebra spec serializes")
    }
}

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Structural problems with the input description (malformed, not "wrong").
#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraInputError {
    #[error("basis is empty")]
    EmptyBasis,
    #[error("duplicate basis label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown label `{label}` in {context}")]
    UnknownLabel { context: String, label: String },
    #[error("bad rational in {context}: {source}")]
    BadScalar {
        context: String,
        #[source]
        source: ScalarParseError,
    },
    #[error("formal dimensions differ: {0} vs {1}")]
    MismatchedFormalDimensions(usize, usize),
}

/// A violated algebra axiom. Validation reports every defect it finds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraDefect {
    NonUnital,
    OddFormalDimension(usize),
    FormalDimensionTooSmall(usize),
    DegreeAboveFormalDimension { label: String, degree: usize },
    OrientationNotTopDegree { label: String, degree: usize },
    TopDegreeNotOneDimensional { dim: usize },
    ProductDegreeMismatch { left: String, right: String, component: String },
    ProductConflict { left: String, right: String },
    NotGradedCommutative { left: String, right: String },
    NotAssociative { a: String, b: String, c: String },
    DegeneratePairing { degree: usize },
}

impl std::fmt::Display for AlgebraDefect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        use AlgebraDefect::*;
        match self {
            NonUnital => write!(f, "NonUnital: need exactly one degree-0 basis element"),
            OddFormalDimension(d) => write!(f, "OddFormalDimension({d})"),
            FormalDimensionTooSmall(d) => {
                write!(f, "FormalDimensionTooSmall({d}): formal dimension must be >= 2")
            }
            DegreeAboveFormalDimension { label, degree } => {
                write!(f, "DegreeAboveFormalDimension: `{label}` has degree {degree}")
            }
            OrientationNotTopDegree { label, degree } => {
                write!(f, "OrientationNotTopDegree: `{label}` has degree {degree}")
            }
            TopDegreeNotOneDimensional { dim } => {
                write!(f, "TopDegreeNotOneDimensional: top degree has dimension {dim}")
            }
            ProductDegreeMismatch { left, right, component } => write!(
                f,
                "ProductDegreeMismatch: `{left}`*`{right}` has component `{component}` of wrong degree"
            ),
            ProductConflict { left, right } => {
                write!(f, "ProductConflict: inconsistent listings for `{left}`*`{right}`")
            }
            NotGradedCommutative { left, right } => {
                write!(f, "NotGradedCommutative({left},{right})")
            }
            NotAssociative { a, b, c } => write!(f, "NotAssociative({a},{b},{c})"),
            DegeneratePairing { degree } => write!(f, "DegeneratePairing({degree})"),
        }
    }
}

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error(transparent)]
    Input(#[from] AlgebraInputError),
    #[error("{} algebra axiom violation(s)", .0.len())]
    Defects(Vec<AlgebraDefect>),
}

// ---------------------------------------------------------------------------
// Graded algebra with a full multiplication table
// ---------------------------------------------------------------------------

/// Finite-dimensional graded-commutative unital algebra with a fixed ordered
/// basis. Elements are sparse vectors over the basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedAlgebra {
    name: String,
    labels: Vec<String>,
    degrees: Vec<usize>,
    unit: usize,
    table: Vec<SparseVec>, // row-major: table[i * dim + j] = b_i * b_j
    by_degree: BTreeMap<usize, Vec<usize>>,
}

impl GradedAlgebra {
    fn from_parts(
        name: String,
        labels: Vec<String>,
        degrees: Vec<usize>,
        unit: usize,
        table: Vec<SparseVec>,
    ) -> Self {
        let mut by_degree: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, d) in degrees.iter().enumerate() {
            by_degree.entry(*d).or_default().push(i);
        }
        GradedAlgebra { name, labels, degrees, unit, table, by_degree }
    }

    /// The one-dimensional algebra spanned by its unit (coefficients for the
    /// little-disks factors of the coaction target).
    pub fn trivial(name: &str) -> Self {
        GradedAlgebra::from_parts(
            name.to_string(),
            vec!["1".to_string()],
            vec![0],
            0,
            vec![vec![(0, Scalar::one())]],
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.degrees[i]
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn basis_in_degree(&self, d: usize) -> &[usize] {
        self.by_degree.get(&d).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn max_degree(&self) -> usize {
        *self.by_degree.keys().last().unwrap()
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> &SparseVec {
        &self.table[i * self.dim() + j]
    }

    pub fn mul(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut entries = Vec::new();
        for (i, a) in x {
            for (j, b) in y {
                for (k, c) in self.mul_basis(*i, *j) {
                    entries.push((*k, a * b * c));
                }
            }
        }
        collect_sparse(entries)
    }

    pub fn poincare_polynomial(&self) -> UniPoly {
        let mut coeffs = vec![0i64; self.max_degree() + 1];
        for d in &self.degrees {
            coeffs[*d] += 1;
        }
        UniPoly::from_coeffs(coeffs)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees.iter().map(|d| if d % 2 == 0 { 1 } else { -1 }).sum()
    }
}

// ---------------------------------------------------------------------------
// Poincaré duality algebras
// ---------------------------------------------------------------------------

/// A validated oriented Poincaré duality algebra: graded algebra plus formal
/// dimension, orientation class, dual basis and diagonal class.
#[derive(Debug, Clone)]
pub struct PdAlgebra {
    algebra: GradedAlgebra,
    formal_dimension: usize,
    orientation: usize,
    dual: Vec<SparseVec>,
    diagonal: Vec<(usize, usize, Scalar)>,
    spec: AlgebraSpec,
}

impl PdAlgebra {
    pub fn algebra(&self) -> &GradedAlgebra {
        &self.algebra
    }

    pub fn name(&self) -> &str {
        self.algebra.name()
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// Formal dimension `2m`.
    pub fn formal_dimension(&self) -> usize {
        self.formal_dimension
    }

    pub fn orientation(&self) -> usize {
        self.orientation
    }

    /// Poincaré dual of the `i`-th basis element: `<b_i, dual(i)> = 1` and
    /// `<b_j, dual(i)> = 0` for the other basis elements (of the same degree).
    pub fn dual_basis(&self, i: usize) -> &SparseVec {
        &self.dual[i]
    }

    /// `<a, b>` = coefficient of the orientation class in `a · b`.
    pub fn pairing(&self, a: &SparseVec, b: &SparseVec) -> Scalar {
        let prod = self.algebra.mul(a, b);
        prod.iter()
            .find(|(k, _)| *k == self.orientation)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(Scalar::zero)
    }

    /// The diagonal class `Σ (-1)^{deg b_i} b_i ⊗ dual(b_i)` as raw
    /// `(left index, right index, coefficient)` triples.
    pub fn diagonal_pairs(&self) -> &[(usize, usize, Scalar)] {
        &self.diagonal
    }

    pub fn spec(&self) -> &AlgebraSpec {
        &self.spec
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.algebra.euler_characteristic()
    }
}

/// Checks every Poincaré-duality axiom on the given description, returning
/// the validated algebra or the complete list of violations.
pub fn validate_algebra(spec: &AlgebraSpec) -> Result<PdAlgebra, AlgebraError> {
    // --- structural phase -------------------------------------------------
    if spec.basis.is_empty() {
        return Err(AlgebraInputError::EmptyBasis.into());
    }
    let mut labels = Vec::new();
    for e in &spec.basis {
        if labels.contains(&e.label) {
            return Err(AlgebraInputError::DuplicateLabel(e.label.clone()).into());
        }
        labels.push(e.label.clone());
    }
    let degrees: Vec<usize> = spec.basis.iter().map(|e| e.degree).collect();
    let dim = labels.len();
    let idx = |label: &str| labels.iter().position(|l| l == label);
    let orientation = idx(&spec.orientation).ok_or_else(|| AlgebraInputError::UnknownLabel {
        context: "orientation".to_string(),
        label: spec.orientation.clone(),
    })?;
    let mut parsed_products: Vec<(usize, usize, SparseVec)> = Vec::new();
    for p in &spec.products {
        let context = format!("product `{}`*`{}`", p.left, p.right);
        let l = idx(&p.left).ok_or_else(|| AlgebraInputError::UnknownLabel {
            context: context.clone(),
            label: p.left.clone(),
        })?;
        let r = idx(&p.right).ok_or_else(|| AlgebraInputError::UnknownLabel {
            context: context.clone(),
            label: p.right.clone(),
        })?;
        let mut entries = Vec::new();
        for (label, coeff) in &p.value {
            let k = idx(label).ok_or_else(|| AlgebraInputError::UnknownLabel {
                context: context.clone(),
                label: label.clone(),
            })?;
            let c = parse_scalar(coeff).map_err(|source| AlgebraInputError::BadScalar {
                context: format!("{context}, component `{label}`"),
                source,
            })?;
            entries.push((k, c));
        }
        parsed_products.push((l, r, collect_sparse(entries)));
    }

    // --- axiom phase -------------------------------------------------------
    let mut defects = Vec::new();
    let two_m = spec.formal_dimension;
    if two_m % 2 == 1 {
        defects.push(AlgebraDefect::OddFormalDimension(two_m));
    }
    if two_m < 2 {
        defects.push(AlgebraDefect::FormalDimensionTooSmall(two_m));
    }
    let units: Vec<usize> = (0..dim).filter(|i| degrees[*i] == 0).collect();
    let unit = match units.as_slice() {
        [u] => *u,
        _ => {
            defects.push(AlgebraDefect::NonUnital);
            return Err(AlgebraError::Defects(defects));
        }
    };
    for i in 0..dim {
        if degrees[i] > two_m {
            defects.push(AlgebraDefect::DegreeAboveFormalDimension {
                label: labels[i].clone(),
                degree: degrees[i],
            });
        }
    }
    if degrees[orientation] != two_m {
        defects.push(AlgebraDefect::OrientationNotTopDegree {
            label: labels[orientation].clone(),
            degree: degrees[orientation],
        });
    }
    let top_dim = (0..dim).filter(|i| degrees[*i] == two_m).count();
    if top_dim != 1 {
        defects.push(AlgebraDefect::TopDegreeNotOneDimensional { dim: top_dim });
    }

    // Multiplication table: unit laws, then the listed products, then graded
    // commutativity for the unlisted mirror entries.
    let mut table: Vec<Option<SparseVec>> = vec![None; dim * dim];
    for i in 0..dim {
        table[unit * dim + i] = Some(vec![(i, Scalar::one())]);
        table[i * dim + unit] = Some(vec![(i, Scalar::one())]);
    }
    let mut explicit: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
    for (l, r, v) in parsed_products {
        if let Some(component) =
            v.iter().find(|(k, _)| degrees[*k] != degrees[l] + degrees[r])
        {
            defects.push(AlgebraDefect::ProductDegreeMismatch {
                left: labels[l].clone(),
                right: labels[r].clone(),
                component: labels[component.0].clone(),
            });
            continue;
        }
        if let Some(prev) = explicit.get(&(l, r)) {
            if *prev != v {
                defects.push(AlgebraDefect::ProductConflict {
                    left: labels[l].clone(),
                    right: labels[r].clone(),
                });
            }
            continue;
        }
        if (l == unit || r == unit) && table[l * dim + r].as_ref() != Some(&v) {
            defects.push(AlgebraDefect::ProductConflict {
                left: labels[l].clone(),
                right: labels[r].clone(),
            });
            continue;
        }
        explicit.insert((l, r), v);
    }
    for ((l, r), v) in &explicit {
        // Detect inconsistent double listings against graded commutativity.
        if let Some(mirror) = explicit.get(&(*r, *l)) {
            let sign = Sign::from_parity(degrees[*l] * degrees[*r]);
            let expected = scale(mirror, &sign.as_scalar());
            if *v != expected {
                if l <= r {
                    defects.push(AlgebraDefect::ProductConflict {
                        left: labels[*l].clone(),
                        right: labels[*r].clone(),
                    });
                }
                continue;
            }
        }
        if l != &unit && r != &unit {
            table[l * dim + r] = Some(v.clone());
        }
    }
    for i in 0..dim {
        for j in 0..dim {
            if table[i * dim + j].is_none() {
                table[i * dim + j] = match &table[j * dim + i] {
                    Some(v) => {
                        let sign = Sign::from_parity(degrees[i] * degrees[j]);
                        Some(scale(v, &sign.as_scalar()))
                    }
                    None => Some(Vec::new()),
                };
            }
        }
    }
    let table: Vec<SparseVec> = table.into_iter().map(Option::unwrap).collect();
    let algebra =
        GradedAlgebra::from_parts(spec.name.clone(), labels.clone(), degrees.clone(), unit, table);

    // Graded commutativity and associativity, brute force over the basis.
    for i in 0..dim {
        for j in i..dim {
            let sign = Sign::from_parity(degrees[i] * degrees[j]);
            let expected = scale(algebra.mul_basis(j, i), &sign.as_scalar());
            if *algebra.mul_basis(i, j) != expected {
                defects.push(AlgebraDefect::NotGradedCommutative {
                    left: labels[i].clone(),
                    right: labels[j].clone(),
                });
            }
        }
    }
    'assoc: for a in 0..dim {
        for b in 0..dim {
            for c in 0..dim {
                let ab_c = {
                    let ab = algebra.mul_basis(a, b).clone();
                    algebra.mul(&ab, &vec![(c, Scalar::one())])
                };
                let a_bc = {
                    let bc = algebra.mul_basis(b, c).clone();
                    algebra.mul(&vec![(a, Scalar::one())], &bc)
                };
                if ab_c != a_bc {
                    defects.push(AlgebraDefect::NotAssociative {
                        a: labels[a].clone(),
                        b: labels[b].clone(),
                        c: labels[c].clone(),
                    });
                    if defects.len() > 32 {
                        break 'assoc;
                    }
                }
            }
        }
    }

    // Intersection pairing per degree: square blocks of full rank.
    let mut pairing_ok = vec![true; two_m + 1];
    for d in 0..=two_m.min(algebra.max_degree()) {
        let rows = algebra.basis_in_degree(d);
        let cols = if two_m >= d { algebra.basis_in_degree(two_m - d) } else { &[] };
        if rows.is_empty() && cols.is_empty() {
            continue;
        }
        let mut degenerate = rows.len() != cols.len();
        if !degenerate {
            let mat = SparseMatrix::from_columns(
                rows.len(),
                cols.iter()
                    .map(|c| {
                        collect_sparse(rows.iter().enumerate().flat_map(|(ri, r)| {
                            algebra
                                .mul_basis(*r, *c)
                                .iter()
                                .filter(|(k, _)| *k == orientation)
                                .map(move |(_, v)| (ri, v.clone()))
                                .collect::<Vec<_>>()
                        }))
                    })
                    .collect(),
            );
            degenerate = mat.rank() != rows.len();
        }
        if degenerate && pairing_ok[d] {
            pairing_ok[d] = false;
            if two_m >= d {
                pairing_ok[two_m - d] = false;
            }
            defects.push(AlgebraDefect::DegeneratePairing { degree: d });
        }
    }

    if !defects.is_empty() {
        return Err(AlgebraError::Defects(defects));
    }

    // --- duality data -------------------------------------------------------
    // Dual basis per degree: solve the pairing system <b_r, x> = δ.
    let mut dual: Vec<SparseVec> = vec![Vec::new(); dim];
    for d in 0..=two_m {
        let rows = algebra.basis_in_degree(d);
        let cols = algebra.basis_in_degree(two_m - d);
        if rows.is_empty() {
            continue;
        }
        let mat = SparseMatrix::from_columns(
            rows.len(),
            cols.iter()
                .map(|c| {
                    collect_sparse(rows.iter().enumerate().flat_map(|(ri, r)| {
                        algebra
                            .mul_basis(*r, *c)
                            .iter()
                            .filter(|(k, _)| *k == orientation)
                            .map(move |(_, v)| (ri, v.clone()))
                            .collect::<Vec<_>>()
                    }))
                })
                .collect(),
        );
        let solver = Solver::new(&mat);
        for (pos, alpha) in rows.iter().enumerate() {
            let sol = solver
                .solve(&vec![(pos, Scalar::one())])
                .expect("nondegenerate pairing solves the dual-basis system");
            dual[*alpha] = sol.into_iter().map(|(ci, v)| (cols[ci], v)).collect();
            dual[*alpha].sort_by_key(|(i, _)| *i);
        }
    }
    // Internal cross-check: <b_i, dual(j)> = δ_ij within each degree.
    for d in 0..=two_m {
        for &i in algebra.basis_in_degree(d) {
            for &j in algebra.basis_in_degree(d) {
                let expected = if i == j { Scalar::one() } else { Scalar::zero() };
                let got = {
                    let prod = algebra.mul(&vec![(i, Scalar::one())], &dual[j]);
                    prod.iter()
                        .find(|(k, _)| *k == orientation)
                        .map(|(_, v)| v.clone())
                        .unwrap_or_else(Scalar::zero)
                };
                assert_eq!(got, expected, "dual basis defect at ({i},{j}) — internal error");
            }
        }
    }

    let mut diagonal = Vec::new();
    for alpha in 0..dim {
        let sign = Sign::from_parity(degrees[alpha]);
        for (beta, c) in &dual[alpha] {
            diagonal.push((alpha, *beta, sign.apply(c.clone())));
        }
    }

    Ok(PdAlgebra {
        algebra,
        formal_dimension: two_m,
        orientation,
        dual,
        diagonal,
        spec: spec.canonicalize(),
    })
}

// ---------------------------------------------------------------------------
// Puncturing
// ---------------------------------------------------------------------------

/// The cohomology of a once-punctured space: the parent algebra with its
/// orientation class removed. Products are truncated accordingly and the
/// reduced diagonal drops the two orientation terms.
#[derive(Debug, Clone)]
pub struct PuncturedAlgebra {
    algebra: GradedAlgebra,
    parent_name: String,
    formal_dimension: usize,
    proj: Vec<Option<usize>>,
    lift: Vec<usize>,
    diagonal: Vec<(usize, usize, Scalar)>,
}

impl PuncturedAlgebra {
    pub fn algebra(&self) -> &GradedAlgebra {
        &self.algebra
    }

    pub fn parent_name(&self) -> &str {
        &self.parent_name
    }

    /// Formal dimension `2m` of the parent.
    pub fn formal_dimension(&self) -> usize {
        self.formal_dimension
    }

    /// Parent basis index → punctured basis index (`None` on the orientation).
    pub fn project_basis(&self, parent_index: usize) -> Option<usize> {
        self.proj[parent_index]
    }

    /// Punctured basis index → parent basis index (the canonical lift).
    pub fn lift_basis(&self, index: usize) -> usize {
        self.lift[index]
    }

    /// Reduced diagonal in punctured-basis indices.
    pub fn diagonal_pairs(&self) -> &[(usize, usize, Scalar)] {
        &self.diagonal
    }
}

/// Removes the orientation class.
pub fn puncture(pd: &PdAlgebra) -> PuncturedAlgebra {
    let alg = pd.algebra();
    let omega = pd.orientation();
    let mut proj: Vec<Option<usize>> = Vec::with_capacity(alg.dim());
    let mut lift = Vec::new();
    for i in 0..alg.dim() {
        if i == omega {
            proj.push(None);
        } else {
            proj.push(Some(lift.len()));
            lift.push(i);
        }
    }
    let dim = lift.len();
    let mut table = Vec::with_capacity(dim * dim);
    for &i in &lift {
        for &j in &lift {
            let v: SparseVec = alg
                .mul_basis(i, j)
                .iter()
                .filter_map(|(k, c)| proj[*k].map(|nk| (nk, c.clone())))
                .collect();
            table.push(collect_sparse(v));
        }
    }
    let labels = lift.iter().map(|&i| alg.label(i).to_string()).collect();
    let degrees: Vec<usize> = lift.iter().map(|&i| alg.degree(i)).collect();
    let unit = proj[alg.unit()].unwrap();
    let algebra = GradedAlgebra::from_parts(
        format!("{}°", alg.name()),
        labels,
        degrees,
        unit,
        table,
    );
    let diagonal = pd
        .diagonal_pairs()
        .iter()
        .filter_map(|(a, b, c)| match (proj[*a], proj[*b]) {
            (Some(na), Some(nb)) => Some((na, nb, c.clone())),
            _ => None,
        })
        .collect();
    PuncturedAlgebra {
        algebra,
        parent_name: alg.name().to_string(),
        formal_dimension: pd.formal_dimension(),
        proj,
        lift,
        diagonal,
    }
}

// ---------------------------------------------------------------------------
// Connected sum and products
// ---------------------------------------------------------------------------

/// A connected sum together with the coefficient projections onto the two
/// punctured summands (used by the splitting map of models).
#[derive(Debug, Clone)]
pub struct ConnectedSumAlgebra {
    sum: PdAlgebra,
    left_punctured: PuncturedAlgebra,
    right_punctured: PuncturedAlgebra,
    /// Sum basis index → left punctured basis index.
    proj_left: Vec<Option<usize>>,
    /// Sum basis index → right punctured basis index.
    proj_right: Vec<Option<usize>>,
}

impl ConnectedSumAlgebra {
    pub fn sum(&self) -> &PdAlgebra {
        &self.sum
    }

    pub fn left_punctured(&self) -> &PuncturedAlgebra {
        &self.left_punctured
    }

    pub fn right_punctured(&self) -> &PuncturedAlgebra {
        &self.right_punctured
    }

    /// Where a basis class of the sum lands in the punctured left factor,
    /// if anywhere: the orientation and the right factor's middle classes
    /// project to zero.
    pub fn project_left(&self, i: usize) -> Option<usize> {
        self.proj_left[i]
    }

    /// Mirror of [`Self::project_left`] for the right factor.
    pub fn project_right(&self, i: usize) -> Option<usize> {
        self.proj_right[i]
    }
}

/// Glues two oriented algebras of the same formal dimension: middle degrees
/// are juxtaposed with all cross products zero, and both orientation classes
/// are identified.
pub fn connected_sum(
    left: &PdAlgebra,
    right: &PdAlgebra,
) -> Result<ConnectedSumAlgebra, AlgebraError> {
    if left.formal_dimension() != right.formal_dimension() {
        return Err(AlgebraInputError::MismatchedFormalDimensions(
            left.formal_dimension(),
            right.formal_dimension(),
        )
        .into());
    }
    let two_m = left.formal_dimension();
    let mut labels: Vec<String> = vec!["1".to_string()];
    let mut degrees: Vec<usize> = vec![0];
    let fresh = |base: &str, labels: &Vec<String>| {
        let mut l = base.to_string();
        while labels.contains(&l) || l == "w" {
            l.push('\'');
        }
        l
    };
    // Positive-degree, non-orientation part of each summand.
    let mut left_map: Vec<Option<usize>> = vec![None; left.dim()];
    let mut right_map: Vec<Option<usize>> = vec![None; right.dim()];
    for i in 0..left.dim() {
        let d = left.algebra().degree(i);
        if d > 0 && i != left.orientation() {
            let l = fresh(left.algebra().label(i), &labels);
            left_map[i] = Some(labels.len());
            labels.push(l);
            degrees.push(d);
        }
    }
    for i in 0..right.dim() {
        let d = right.algebra().degree(i);
        if d > 0 && i != right.orientation() {
            let l = fresh(right.algebra().label(i), &labels);
            right_map[i] = Some(labels.len());
            labels.push(l);
            degrees.push(d);
        }
    }
    let omega = labels.len();
    labels.push("w".to_string());
    degrees.push(two_m);
    left_map[left.orientation()] = Some(omega);
    right_map[right.orientation()] = Some(omega);
    left_map[left.algebra().unit()] = Some(0);
    right_map[right.algebra().unit()] = Some(0);

    let mut products = Vec::new();
    let mut push_products = |pd: &PdAlgebra, map: &Vec<Option<usize>>| {
        for i in 0..pd.dim() {
            for j in 0..pd.dim() {
                let (di, dj) = (pd.algebra().degree(i), pd.algebra().degree(j));
                if di == 0 || dj == 0 || i == pd.orientation() || j == pd.orientation() {
                    continue;
                }
                let value: Vec<(String, String)> = pd
                    .algebra()
                    .mul_basis(i, j)
                    .iter()
                    .map(|(k, c)| (labels[map[*k].unwrap()].clone(), scalar_to_string(c)))
                    .collect();
                if !value.is_empty() {
                    products.push(ProductEntry {
                        left: labels[map[i].unwrap()].clone(),
                        right: labels[map[j].unwrap()].clone(),
                        value,
                    });
                }
            }
        }
    };
    push_products(left, &left_map);
    push_products(right, &right_map);

    let spec = AlgebraSpec {
        name: format!("{}#{}", left.name(), right.name()),
        formal_dimension: two_m,
        basis: labels
            .iter()
            .zip(&degrees)
            .map(|(l, d)| BasisEntry { label: l.clone(), degree: *d })
            .collect(),
        orientation: "w".to_string(),
        products,
    };
    let sum = validate_algebra(&spec)
        .expect("a connected sum of duality algebras satisfies the duality axioms");

    let left_punctured = puncture(left);
    let right_punctured = puncture(right);
    let mut proj_left = vec![None; sum.dim()];
    let mut proj_right = vec![None; sum.dim()];
    // Unit maps to unit; middle classes map to themselves; the other
    // summand's classes and the orientation map to zero.
    proj_left[0] = Some(left_punctured.project_basis(left.algebra().unit()).unwrap());
    proj_right[0] = Some(right_punctured.project_basis(right.algebra().unit()).unwrap());
    for i in 0..left.dim() {
        if left.algebra().degree(i) > 0 && i != left.orientation() {
            proj_left[left_map[i].unwrap()] = left_punctured.project_basis(i);
        }
    }
    for i in 0..right.dim() {
        if right.algebra().degree(i) > 0 && i != right.orientation() {
            proj_right[right_map[i].unwrap()] = right_punctured.project_basis(i);
        }
    }
    Ok(ConnectedSumAlgebra { sum, left_punctured, right_punctured, proj_left, proj_right })
}

/// Tensor-product algebra (cohomology of a product space), with the Koszul
/// sign in the multiplication.
pub fn kunneth(left: &PdAlgebra, right: &PdAlgebra) -> PdAlgebra {
    let (la, ra) = (left.algebra(), right.algebra());
    let pair_label = |i: usize, j: usize| -> String {
        if i == la.unit() && j == ra.unit() {
            "1".to_string()
        } else {
            format!("{}*{}", la.label(i), ra.label(j))
        }
    };
    let mut basis = Vec::new();
    for i in 0..la.dim() {
        for j in 0..ra.dim() {
            basis.push(BasisEntry {
                label: pair_label(i, j),
                degree: la.degree(i) + ra.degree(j),
            });
        }
    }
    let mut products = Vec::new();
    for i1 in 0..la.dim() {
        for j1 in 0..ra.dim() {
            for i2 in 0..la.dim() {
                for j2 in 0..ra.dim() {
                    let d1 = la.degree(i1) + ra.degree(j1);
                    let d2 = la.degree(i2) + ra.degree(j2);
                    if d1 == 0 || d2 == 0 {
                        continue;
                    }
                    let sign = Sign::from_parity(ra.degree(j1) * la.degree(i2));
                    let mut value = Vec::new();
                    for (k, c) in la.mul_basis(i1, i2) {
                        for (l, e) in ra.mul_basis(j1, j2) {
                            value.push((pair_label(*k, *l), scalar_to_string(&sign.apply(c * e))));
                        }
                    }
                    if !value.is_empty() {
                        products.push(ProductEntry {
                            left: pair_label(i1, j1),
                            right: pair_label(i2, j2),
                            value,
                        });
                    }
                }
            }
        }
    }
    let spec = AlgebraSpec {
        name: format!("product({},{})", left.name(), right.name()),
        formal_dimension: left.formal_dimension() + right.formal_dimension(),
        basis,
        orientation: pair_label(left.orientation(), right.orientation()),
        products,
    };
    validate_algebra(&spec).expect("a product of duality algebras satisfies the duality axioms")
}

// ---------------------------------------------------------------------------

/// `a + c·b` on algebra elements (re-exported convenience).
pub fn element_add_scaled(a: &SparseVec, b: &SparseVec, c: &Scalar) -> SparseVec {
    add_scaled(a, b, c)
}
