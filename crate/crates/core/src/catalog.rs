//! Built-in coefficient algebras: cohomology rings of familiar closed
//! oriented even-dimensional manifolds, plus products and parametrized
//! families. Each entry expands to the same JSON-facing description a user
//! could write by hand, then passes through the full validator.

use crate::algebra::{
    kunneth, validate_algebra, AlgebraSpec, BasisEntry, PdAlgebra, ProductEntry,
};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CatalogError {
    #[error("unknown catalog entry `{0}`")]
    UnknownName(String),
    #[error("`{name}` expects {expected}, got {got} argument(s)")]
    BadArity { name: String, expected: &'static str, got: usize },
    #[error("bad parameter for `{name}`: {reason}")]
    BadParameter { name: String, reason: String },
    #[error("could not parse catalog reference: {0}")]
    Syntax(String),
}

/// A parsed catalog reference such as `torus`, `sphere(2)`, `genus(3)`,
/// `cp2_sum(2)`, or `product(sphere(1), torus)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatalogKey {
    /// The sphere of dimension `2m`.
    Sphere(usize),
    /// Complex projective space of complex dimension `m`.
    ComplexProjective(usize),
    /// The 2-torus.
    Torus,
    /// The closed orientable surface of genus `g`.
    Genus(usize),
    /// The connected sum of `r` copies of the complex projective plane.
    ProjectivePlaneSum(usize),
    /// A cartesian product of two other entries.
    Product(Box<CatalogKey>, Box<CatalogKey>),
}

impl CatalogKey {
    pub fn canonical_name(&self) -> String {
        match self {
            CatalogKey::Sphere(m) => format!("sphere({m})"),
            CatalogKey::ComplexProjective(m) => format!("cp({m})"),
            CatalogKey::Torus => "torus".to_string(),
            CatalogKey::Genus(g) => format!("genus({g})"),
            CatalogKey::ProjectivePlaneSum(r) => format!("cp2_sum({r})"),
            CatalogKey::Product(a, b) => {
                format!("product({},{})", a.canonical_name(), b.canonical_name())
            }
        }
    }

    /// Expands the entry and runs it through the validator.
    pub fn build(&self) -> PdAlgebra {
        match self {
            CatalogKey::Sphere(m) => validate_algebra(&sphere_spec(*m))
                .expect("catalog sphere validates"),
            CatalogKey::ComplexProjective(m) => validate_algebra(&complex_projective_spec(*m))
                .expect("catalog projective space validates"),
            CatalogKey::Torus => {
                validate_algebra(&torus_spec()).expect("catalog torus validates")
            }
            CatalogKey::Genus(g) => {
                validate_algebra(&genus_spec(*g)).expect("catalog surface validates")
            }
            CatalogKey::ProjectivePlaneSum(r) => validate_algebra(&projective_plane_sum_spec(*r))
                .expect("catalog connected sum validates"),
            CatalogKey::Product(a, b) => kunneth(&a.build(), &b.build()),
        }
    }

    pub fn parse(input: &str) -> Result<CatalogKey, CatalogError> {
        let mut parser = Parser { src: input.trim(), pos: 0 };
        let key = parser.key()?;
        parser.skip_ws();
        if parser.pos != parser.src.len() {
            return Err(CatalogError::Syntax(format!(
                "unexpected trailing input at byte {}",
                parser.pos
            )));
        }
        Ok(key)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn ident(&mut self) -> Result<&'a str, CatalogError> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let end = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(rest.len());
        if end == 0 {
            return Err(CatalogError::Syntax(format!(
                "expected a name at byte {}",
                self.pos
            )));
        }
        self.pos += end;
        Ok(&rest[..end])
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn key(&mut self) -> Result<CatalogKey, CatalogError> {
        let name = self.ident()?.to_string();
        let mut args: Vec<Arg> = Vec::new();
        if self.eat('(') {
            loop {
                self.skip_ws();
                let rest = &self.src[self.pos..];
                if rest.starts_with(|c: char| c.is_ascii_digit()) {
                    let end = rest
                        .find(|c: char| !c.is_ascii_digit())
                        .unwrap_or(rest.len());
                    let value: usize = rest[..end].parse().map_err(|_| {
                        CatalogError::Syntax(format!("bad integer at byte {}", self.pos))
                    })?;
                    self.pos += end;
                    args.push(Arg::Number(value));
                } else {
                    args.push(Arg::Key(self.key()?));
                }
                if self.eat(',') {
                    continue;
                }
                if self.eat(')') {
                    break;
                }
                return Err(CatalogError::Syntax(format!(
                    "expected `,` or `)` at byte {}",
                    self.pos
                )));
            }
        }
        build_key(&name, args)
    }
}

enum Arg {
    Number(usize),
    Key(CatalogKey),
}

fn one_number(name: &str, args: Vec<Arg>) -> Result<usize, CatalogError> {
    if args.len() != 1 {
        return Err(CatalogError::BadArity {
            name: name.to_string(),
            expected: "one integer",
            got: args.len(),
        });
    }
    match args.into_iter().next().unwrap() {
        Arg::Number(v) => Ok(v),
        Arg::Key(_) => Err(CatalogError::BadParameter {
            name: name.to_string(),
            reason: "expected an integer, got a nested entry".to_string(),
        }),
    }
}

fn build_key(name: &str, args: Vec<Arg>) -> Result<CatalogKey, CatalogError> {
    match name {
        "sphere" => {
            let m = one_number(name, args)?;
            if m == 0 {
                return Err(CatalogError::BadParameter {
                    name: name.to_string(),
                    reason: "the parameter is half the dimension and must be ≥ 1".to_string(),
                });
            }
            Ok(CatalogKey::Sphere(m))
        }
        "cp" => {
            let m = one_number(name, args)?;
            if !(1..=3).contains(&m) {
                return Err(CatalogError::BadParameter {
                    name: name.to_string(),
                    reason: "complex dimension must be between 1 and 3".to_string(),
                });
            }
            Ok(CatalogKey::ComplexProjective(m))
        }
        "torus" => {
            if !args.is_empty() {
                return Err(CatalogError::BadArity {
                    name: name.to_string(),
                    expected: "no",
                    got: args.len(),
                });
            }
            Ok(CatalogKey::Torus)
        }
        "genus" => {
            let g = one_number(name, args)?;
            if g == 0 {
                return Err(CatalogError::BadParameter {
                    name: name.to_string(),
                    reason: "the genus must be ≥ 1 (genus 0 is sphere(1))".to_string(),
                });
            }
            Ok(CatalogKey::Genus(g))
        }
        "cp2_sum" => {
            let r = one_number(name, args)?;
            if r == 0 {
                return Err(CatalogError::BadParameter {
                    name: name.to_string(),
                    reason: "the number of summands must be ≥ 1".to_string(),
                });
            }
            Ok(CatalogKey::ProjectivePlaneSum(r))
        }
        "product" => {
            if args.len() != 2 {
                return Err(CatalogError::BadArity {
                    name: name.to_string(),
                    expected: "two entries",
                    got: args.len(),
                });
            }
            let mut keys = args.into_iter().map(|a| match a {
                Arg::Key(k) => Ok(k),
                Arg::Number(_) => Err(CatalogError::BadParameter {
                    name: "product".to_string(),
                    reason: "expected catalog entries, got an integer".to_string(),
                }),
            });
            let a = keys.next().unwrap()?;
            let b = keys.next().unwrap()?;
            Ok(CatalogKey::Product(Box::new(a), Box::new(b)))
        }
        other => Err(CatalogError::UnknownName(other.to_string())),
    }
}

// ---------------------------------------------------------------------------
// Entry expansions
// ---------------------------------------------------------------------------

pub fn sphere_spec(m: usize) -> AlgebraSpec {
    AlgebraSpec {
        name: format!("sphere({m})"),
        formal_dimension: 2 * m,
        basis: vec![
            BasisEntry { label: "1".into(), degree: 0 },
            BasisEntry { label: "w".into(), degree: 2 * m },
        ],
        orientation: "w".into(),
        products: vec![],
    }
}

pub fn complex_projective_spec(m: usize) -> AlgebraSpec {
    let label = |i: usize| -> String {
        match i {
            0 => "1".to_string(),
            1 => "x".to_string(),
            _ => format!("x{i}"),
        }
    };
    let basis = (0..=m)
        .map(|i| BasisEntry { label: label(i), degree: 2 * i })
        .collect();
    let mut products = Vec::new();
    for i in 1..=m {
        for j in i..=m {
            if i + j <= m {
                products.push(ProductEntry {
                    left: label(i),
                    right: label(j),
                    value: vec![(label(i + j), "1".into())],
                });
            }
        }
    }
    AlgebraSpec {
        name: format!("cp({m})"),
        formal_dimension: 2 * m,
        basis,
        orientation: label(m),
        products,
    }
}

pub fn torus_spec() -> AlgebraSpec {
    AlgebraSpec {
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
    }
}

pub fn genus_spec(g: usize) -> AlgebraSpec {
    let mut basis = vec![BasisEntry { label: "1".into(), degree: 0 }];
    for i in 1..=g {
        basis.push(BasisEntry { label: format!("a{i}"), degree: 1 });
    }
    for i in 1..=g {
        basis.push(BasisEntry { label: format!("b{i}"), degree: 1 });
    }
    basis.push(BasisEntry { label: "w".into(), degree: 2 });
    let products = (1..=g)
        .map(|i| ProductEntry {
            left: format!("a{i}"),
            right: format!("b{i}"),
            value: vec![("w".into(), "1".into())],
        })
        .collect();
    AlgebraSpec {
        name: format!("genus({g})"),
        formal_dimension: 2,
        basis,
        orientation: "w".into(),
        products,
    }
}

pub fn projective_plane_sum_spec(r: usize) -> AlgebraSpec {
    let mut basis = vec![BasisEntry { label: "1".into(), degree: 0 }];
    for i in 1..=r {
        basis.push(BasisEntry { label: format!("x{i}"), degree: 2 });
    }
    basis.push(BasisEntry { label: "w".into(), degree: 4 });
    let products = (1..=r)
        .map(|i| ProductEntry {
            left: format!("x{i}"),
            right: format!("x{i}"),
            value: vec![("w".into(), "1".into())],
        })
        .collect();
    AlgebraSpec {
        name: format!("cp2_sum({r})"),
        formal_dimension: 4,
        basis,
        orientation: "w".into(),
        products,
    }
}

// ---------------------------------------------------------------------------
// Listing
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, serde::Serialize)]
pub struct CatalogEntry {
    pub key: String,
    pub space: String,
    pub formal_dimension: usize,
    pub rank: usize,
    pub euler_characteristic: i64,
}

fn entry_for(key: &CatalogKey, space: String) -> CatalogEntry {
    let pd = key.build();
    CatalogEntry {
        key: key.canonical_name(),
        space,
        formal_dimension: pd.formal_dimension(),
        rank: pd.algebra().dim(),
        euler_characteristic: pd.algebra().euler_characteristic(),
    }
}

/// Human-facing listing of representative entries; parametrized families are
/// shown at small parameter values, and any parameter value parses.
pub fn catalog_entries() -> Vec<CatalogEntry> {
    vec![
        entry_for(&CatalogKey::Sphere(1), "the 2-sphere".to_string()),
        entry_for(&CatalogKey::Sphere(2), "the 4-sphere".to_string()),
        entry_for(
            &CatalogKey::ComplexProjective(2),
            "the complex projective plane".to_string(),
        ),
        entry_for(
            &CatalogKey::ComplexProjective(3),
            "complex projective 3-space".to_string(),
        ),
        entry_for(&CatalogKey::Torus, "the 2-torus".to_string()),
        entry_for(&CatalogKey::Genus(2), "the closed surface of genus 2".to_string()),
        entry_for(&CatalogKey::Genus(3), "the closed surface of genus 3".to_string()),
        entry_for(
            &CatalogKey::ProjectivePlaneSum(2),
            "the connected sum of two complex projective planes".to_string(),
        ),
        entry_for(
            &CatalogKey::ProjectivePlaneSum(3),
            "the connected sum of three complex projective planes".to_string(),
        ),
        entry_for(
            &CatalogKey::Product(
                Box::new(CatalogKey::Sphere(1)),
                Box::new(CatalogKey::Sphere(1)),
            ),
            "the product of two 2-spheres".to_string(),
        ),
    ]
}

/// The algebras exercised by the randomized test batteries.
pub fn test_algebras() -> Vec<PdAlgebra> {
    catalog_entries()
        .iter()
        .map(|e| CatalogKey::parse(&e.key).expect("listing keys parse").build())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trips() {
        for s in [
            "torus",
            "sphere(1)",
            "sphere(3)",
            "cp(2)",
            "genus(7)",
            "cp2_sum(4)",
            "product(sphere(1),torus)",
            "product(cp(2),product(torus,sphere(2)))",
        ] {
            let key = CatalogKey::parse(s).unwrap();
            assert_eq!(key.canonical_name(), s);
        }
        // Whitespace is tolerated.
        let key = CatalogKey::parse(" product( sphere(1) , torus ) ").unwrap();
        assert_eq!(key.canonical_name(), "product(sphere(1),torus)");
    }

    #[test]
    fn parse_rejects_malformed_references() {
        assert!(matches!(
            CatalogKey::parse("klein"),
            Err(CatalogError::UnknownName(_))
        ));
        assert!(matches!(
            CatalogKey::parse("sphere()"),
            Err(CatalogError::Syntax(_))
        ));
        assert!(matches!(
            CatalogKey::parse("sphere(0)"),
            Err(CatalogError::BadParameter { .. })
        ));
        assert!(matches!(
            CatalogKey::parse("torus(2)"),
            Err(CatalogError::BadArity { .. })
        ));
        assert!(matches!(
            CatalogKey::parse("product(sphere(1))"),
            Err(CatalogError::BadArity { .. })
        ));
        assert!(matches!(
            CatalogKey::parse("product(2,3)"),
            Err(CatalogError::BadParameter { .. })
        ));
        assert!(matches!(
            CatalogKey::parse("torus extra"),
            Err(CatalogError::Syntax(_))
        ));
    }

    #[test]
    fn entries_build_with_expected_ranks() {
        let expected: Vec<(&str, usize, i64)> = vec![
            ("sphere(1)", 2, 2),
            ("sphere(2)", 2, 2),
            ("cp(2)", 3, 3),
            ("cp(3)", 4, 4),
            ("torus", 4, 0),
            ("genus(2)", 6, -2),
            ("genus(3)", 8, -4),
            ("cp2_sum(2)", 4, 4),
            ("cp2_sum(3)", 5, 5),
            ("product(sphere(1),sphere(1))", 4, 4),
        ];
        let entries = catalog_entries();
        assert_eq!(entries.len(), expected.len());
        for (entry, (key, rank, chi)) in entries.iter().zip(&expected) {
            assert_eq!(&entry.key, key);
            assert_eq!(entry.rank, *rank, "{key}");
            assert_eq!(entry.euler_characteristic, *chi, "{key}");
        }
    }

    #[test]
    fn projective_spaces_have_truncated_polynomial_rings() {
        let pd = CatalogKey::ComplexProjective(3).build();
        let alg = pd.algebra();
        let x = alg.index_of("x").unwrap();
        let x2 = alg.index_of("x2").unwrap();
        let x3 = alg.index_of("x3").unwrap();
        // x·x2 = x3 = orientation, x2·x2 = 0 (degree 8 > 6).
        assert_eq!(alg.mul_basis(x, x2), &[(x3, crate::scalar::scalar(1))]);
        assert!(alg.mul_basis(x2, x2).is_empty());
        assert_eq!(pd.orientation(), x3);
    }

    #[test]
    fn surfaces_have_symplectic_pairing() {
        let pd = CatalogKey::Genus(2).build();
        let alg = pd.algebra();
        let a1 = alg.index_of("a1").unwrap();
        let b1 = alg.index_of("b1").unwrap();
        let a2 = alg.index_of("a2").unwrap();
        let w = pd.orientation();
        assert_eq!(alg.mul_basis(a1, b1), &[(w, crate::scalar::scalar(1))]);
        assert_eq!(alg.mul_basis(b1, a1), &[(w, crate::scalar::scalar(-1))]);
        assert!(alg.mul_basis(a1, a2).is_empty());
    }

    #[test]
    fn product_entries_use_the_tensor_algebra() {
        let key = CatalogKey::parse("product(sphere(1),sphere(1))").unwrap();
        let pd = key.build();
        assert_eq!(pd.algebra().dim(), 4);
        assert_eq!(pd.formal_dimension(), 4);
        assert_eq!(pd.algebra().euler_characteristic(), 4);
    }
}
