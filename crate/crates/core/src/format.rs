//! The algebra file format: a self-describing JSON document (UTF-8) holding a
//! graded Lie algebra (`brackets` variant) or a commutative Artin algebra
//! (`products` variant), plus a deformation envelope bundling a base algebra
//! with a bracket table over it. Documents are pretty-printed so goldens are
//! human-diffable.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::artin::{ArtinAlgebra, ArtinError};
use crate::coeff::{CoeffError, CoeffRing};
use crate::deform::{DeformError, LieOverBase, TensorElem};
use crate::lie::{GradedLieAlgebra, LieError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("coefficient ring: {0}")]
    Coeff(#[from] CoeffError),
    #[error("lie algebra: {0}")]
    Lie(#[from] LieError),
    #[error("commutative algebra: {0}")]
    Artin(#[from] ArtinError),
    #[error("deformation: {0}")]
    Deform(#[from] DeformError),
    #[error("unknown basis label {0}")]
    UnknownLabel(String),
    #[error("malformed document: {0}")]
    Shape(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DegreeBlock {
    pub degree: u32,
    pub basis: Vec<String>,
}

/// One algebra document. Exactly one of `brackets` (graded Lie) or
/// `products` (commutative) is present.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraDoc {
    pub prime: u64,
    pub power: u32,
    pub truncation: u32,
    pub degrees: Vec<DegreeBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub brackets: Option<Vec<(String, String, Vec<(String, i64)>)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub products: Option<Vec<(String, String, Vec<(String, i64)>)>>,
}

/// Deformation envelope: a Lie algebra, a base Artin algebra, and the
/// bracket table of the deformed algebra over the base.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeformationDoc {
    pub base: AlgebraDoc,
    pub algebra: AlgebraDoc,
    /// entries (u, v, [[lie basis, base basis, coeff]…]) for basis pairs
    /// u < v with nonzero bracket
    pub table: Vec<(String, String, Vec<(String, String, i64)>)>,
}

fn ring_of(doc: &AlgebraDoc) -> Result<CoeffRing, FormatError> {
    Ok(CoeffRing::new(doc.prime, doc.power)?)
}

pub fn lie_to_doc(l: &GradedLieAlgebra) -> AlgebraDoc {
    let mut degrees = Vec::new();
    for d in 1..=l.truncation() {
        let basis: Vec<String> = l.degree_indices(d).map(|i| l.label(i).to_string()).collect();
        if !basis.is_empty() {
            degrees.push(DegreeBlock { degree: d, basis });
        }
    }
    let mut brackets = Vec::new();
    for i in 0..l.dim() {
        for j in (i + 1)..l.dim() {
            let b = l.bracket_basis(i, j).value;
            if b.is_zero() {
                continue;
            }
            let terms: Vec<(String, i64)> = b
                .terms()
                .map(|(w, c)| (l.label(w).to_string(), c as i64))
                .collect();
            brackets.push((l.label(i).to_string(), l.label(j).to_string(), terms));
        }
    }
    AlgebraDoc {
        prime: l.ring().prime(),
        power: l.ring().power(),
        truncation: l.truncation(),
        degrees,
        brackets: Some(brackets),
        products: None,
    }
}

pub fn lie_from_doc(doc: &AlgebraDoc) -> Result<GradedLieAlgebra, FormatError> {
    let ring = ring_of(doc)?;
    let brackets = doc
        .brackets
        .as_ref()
        .ok_or_else(|| FormatError::Shape("expected a 'brackets' table".into()))?;
    if doc.products.is_some() {
        return Err(FormatError::Shape(
            "document has both 'brackets' and 'products'".into(),
        ));
    }
    let degrees: Vec<(u32, Vec<String>)> = doc
        .degrees
        .iter()
        .map(|b| (b.degree, b.basis.clone()))
        .collect();
    let l = GradedLieAlgebra::new(ring, doc.truncation, &degrees, brackets)?;
    let report = l.validate();
    if !report.is_valid() {
        return Err(FormatError::Shape(format!(
            "bracket table violates the Lie axioms ({} violations)",
            report.violations.len()
        )));
    }
    Ok(l)
}

pub fn artin_to_doc(a: &ArtinAlgebra) -> AlgebraDoc {
    let labels = a.labels();
    let mut products = Vec::new();
    for i in 1..a.dim() {
        for j in i..a.dim() {
            let p = a.mul(&a.basis_vec(i), &a.basis_vec(j));
            let terms: Vec<(String, i64)> = p
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(w, &c)| (labels[w].clone(), c as i64))
                .collect();
            if !terms.is_empty() {
                products.push((labels[i].clone(), labels[j].clone(), terms));
            }
        }
    }
    AlgebraDoc {
        prime: a.ring().prime(),
        power: a.ring().power(),
        truncation: 0,
        degrees: vec![DegreeBlock {
            degree: 0,
            basis: labels.to_vec(),
        }],
        brackets: None,
        products: Some(products),
    }
}

pub fn artin_from_doc(doc: &AlgebraDoc) -> Result<ArtinAlgebra, FormatError> {
    let ring = ring_of(doc)?;
    let products = doc
        .products
        .as_ref()
        .ok_or_else(|| FormatError::Shape("expected a 'products' table".into()))?;
    if doc.brackets.is_some() {
        return Err(FormatError::Shape(
            "document has both 'brackets' and 'products'".into(),
        ));
    }
    let labels: Vec<&str> = doc
        .degrees
        .iter()
        .flat_map(|b| b.basis.iter().map(|s| s.as_str()))
        .collect();
    let spec: Vec<(&str, &str, Vec<(&str, i64)>)> = products
        .iter()
        .map(|(u, v, terms)| {
            (
                u.as_str(),
                v.as_str(),
                terms.iter().map(|(n, c)| (n.as_str(), *c)).collect(),
            )
        })
        .collect();
    Ok(ArtinAlgebra::new(ring, &labels, &spec)?)
}

pub fn deformation_to_doc(l: &LieOverBase) -> DeformationDoc {
    let lie = l.lie();
    let base = l.base();
    let mut table = Vec::new();
    for i in 0..lie.dim() {
        for j in (i + 1)..lie.dim() {
            let e = l.bracket_basis(i, j);
            if l.is_zero_elem(&e) {
                continue;
            }
            let mut terms = Vec::new();
            for (w, row) in e.iter().enumerate() {
                for (t, &c) in row.iter().enumerate() {
                    if c != 0 {
                        terms.push((
                            lie.label(w).to_string(),
                            base.labels()[t].clone(),
                            c as i64,
                        ));
                    }
                }
            }
            table.push((lie.label(i).to_string(), lie.label(j).to_string(), terms));
        }
    }
    DeformationDoc {
        base: artin_to_doc(base),
        algebra: lie_to_doc(lie),
        table,
    }
}

pub fn deformation_from_doc(doc: &DeformationDoc) -> Result<LieOverBase, FormatError> {
    let base = artin_from_doc(&doc.base)?;
    let lie = lie_from_doc(&doc.algebra)?;
    let mut table: BTreeMap<(usize, usize), TensorElem> = BTreeMap::new();
    for (u, v, terms) in &doc.table {
        let i = lie
            .index_of(u)
            .ok_or_else(|| FormatError::UnknownLabel(u.clone()))?;
        let j = lie
            .index_of(v)
            .ok_or_else(|| FormatError::UnknownLabel(v.clone()))?;
        if i >= j {
            return Err(FormatError::Shape(format!(
                "table entry ({u}, {v}) is not in increasing basis order"
            )));
        }
        let entry = table
            .entry((i, j))
            .or_insert_with(|| vec![vec![0u64; base.dim()]; lie.dim()]);
        for (w, t, c) in terms {
            let wi = lie
                .index_of(w)
                .ok_or_else(|| FormatError::UnknownLabel(w.clone()))?;
            let ti = base
                .index_of(t)
                .ok_or_else(|| FormatError::UnknownLabel(t.clone()))?;
            let ring = base.ring();
            entry[wi][ti] = ring.add(entry[wi][ti], ring.reduce(*c));
        }
    }
    Ok(LieOverBase::from_full_table(&lie, &base, table)?)
}

/// A graded representation: source and target Lie algebras plus the image
/// of each source basis element, as (target basis label, coeff) terms.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepresentationDoc {
    pub source: AlgebraDoc,
    pub target: AlgebraDoc,
    pub images: Vec<Vec<(String, i64)>>,
}

pub fn representation_to_doc(
    g: &GradedLieAlgebra,
    lbar: &GradedLieAlgebra,
    rho: &crate::lie::GradedLieHom,
) -> RepresentationDoc {
    let images = (0..g.dim())
        .map(|i| {
            rho.image_of_basis(i)
                .terms()
                .map(|(w, c)| (lbar.label(w).to_string(), c as i64))
                .collect()
        })
        .collect();
    RepresentationDoc {
        source: lie_to_doc(g),
        target: lie_to_doc(lbar),
        images,
    }
}

pub fn representation_from_doc(
    doc: &RepresentationDoc,
) -> Result<(GradedLieAlgebra, GradedLieAlgebra, crate::lie::GradedLieHom), FormatError> {
    let g = lie_from_doc(&doc.source)?;
    let lbar = lie_from_doc(&doc.target)?;
    if doc.images.len() != g.dim() {
        return Err(FormatError::Shape(format!(
            "expected {} images, found {}",
            g.dim(),
            doc.images.len()
        )));
    }
    let mut images = Vec::new();
    for terms in &doc.images {
        let refs: Vec<(&str, i64)> = terms.iter().map(|(n, c)| (n.as_str(), *c)).collect();
        images.push(lbar.element(&refs)?);
    }
    let rho = crate::lie::GradedLieHom::new(&g, &lbar, images)?;
    Ok((g, lbar, rho))
}

pub fn representation_doc_from_str(s: &str) -> Result<RepresentationDoc, FormatError> {
    Ok(serde_json::from_str(s)?)
}

/// Serialize a document as pretty-printed JSON with a trailing newline.
pub fn to_json_string<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("document serialization");
    s.push('\n');
    s
}

pub fn algebra_doc_from_str(s: &str) -> Result<AlgebraDoc, FormatError> {
    Ok(serde_json::from_str(s)?)
}

pub fn deformation_doc_from_str(s: &str) -> Result<DeformationDoc, FormatError> {
    Ok(serde_json::from_str(s)?)
}

/// Read an algebra file and build whichever algebra kind it declares.
pub enum LoadedAlgebra {
    Lie(GradedLieAlgebra),
    Commutative(ArtinAlgebra),
}

pub fn load_algebra(s: &str) -> Result<LoadedAlgebra, FormatError> {
    let doc = algebra_doc_from_str(s)?;
    if doc.brackets.is_some() {
        Ok(LoadedAlgebra::Lie(lie_from_doc(&doc)?))
    } else if doc.products.is_some() {
        Ok(LoadedAlgebra::Commutative(artin_from_doc(&doc)?))
    } else {
        Err(FormatError::Shape(
            "document declares neither 'brackets' nor 'products'".into(),
        ))
    }
}
