//! Finite-dimensional commutative local algebras with residue field F_l,
//! Harrison cohomology in dimensions 1–2, relative Der/Ext^inf, and
//! universal small extensions.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use thiserror::Error;

use crate::coeff::{self, CoeffError, CoeffRing, ModMatrix};

static NEXT_ARTIN_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Debug, Error)]
pub enum ArtinError {
    #[error("unknown basis label `{0}`")]
    UnknownLabel(String),
    #[error("first basis element must be the unit")]
    MissingUnit,
    #[error("algebra is not associative on ({0}, {1}, {2})")]
    NotAssociative(String, String, String),
    #[error("maximal ideal is not nilpotent")]
    NotNilpotent,
    #[error("morphism is not an algebra homomorphism")]
    NotAHomomorphism,
    #[error("element mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// Commutative local algebra over F_l (or Z/l^k) given by a basis with
/// `basis[0] = 1` and a symmetric multiplication table; the maximal ideal is
/// spanned by the non-unit basis vectors. Elements are dense coordinate
/// vectors.
#[derive(Clone, Debug)]
pub struct ArtinAlgebra {
    id: u64,
    ring: CoeffRing,
    labels: Vec<String>,
    /// products[i][j] = coordinates of e_i · e_j (full symmetric table)
    products: Vec<Vec<Vec<u64>>>,
}

impl ArtinAlgebra {
    pub fn new(
        ring: CoeffRing,
        labels: &[&str],
        products_spec: &[(&str, &str, Vec<(&str, i64)>)],
    ) -> Result<Self, ArtinError> {
        if labels.is_empty() {
            return Err(ArtinError::MissingUnit);
        }
        let n = labels.len();
        let index: HashMap<String, usize> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.to_string(), i))
            .collect();
        let mut products = vec![vec![vec![0u64; n]; n]; n];
        // unit row/column
        for j in 0..n {
            products[0][j][j] = 1;
            products[j][0][j] = 1;
        }
        for (u, v, terms) in products_spec {
            let i = *index
                .get(*u)
                .ok_or_else(|| ArtinError::UnknownLabel(u.to_string()))?;
            let j = *index
                .get(*v)
                .ok_or_else(|| ArtinError::UnknownLabel(v.to_string()))?;
            let mut coords = vec![0u64; n];
            for (name, c) in terms {
                let t = *index
                    .get(*name)
                    .ok_or_else(|| ArtinError::UnknownLabel(name.to_string()))?;
                coords[t] = ring.add(coords[t], ring.reduce(*c));
            }
            products[i][j] = coords.clone();
            products[j][i] = coords;
        }
        let alg = ArtinAlgebra {
            id: NEXT_ARTIN_ID.fetch_add(1, Ordering::Relaxed),
            ring,
            labels: labels.iter().map(|s| s.to_string()).collect(),
            products,
        };
        alg.validate()?;
        Ok(alg)
    }

    fn from_table(ring: CoeffRing, labels: Vec<String>, products: Vec<Vec<Vec<u64>>>) -> Self {
        ArtinAlgebra {
            id: NEXT_ARTIN_ID.fetch_add(1, Ordering::Relaxed),
            ring,
            labels,
            products,
        }
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0u64; self.dim()]
    }

    pub fn unit(&self) -> Vec<u64> {
        let mut v = self.zero();
        v[0] = 1;
        v
    }

    pub fn basis_vec(&self, i: usize) -> Vec<u64> {
        let mut v = self.zero();
        v[i] = 1;
        v
    }

    /// Residue of an element in k = A/m (the unit coordinate).
    pub fn eps(&self, x: &[u64]) -> u64 {
        x[0]
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter().zip(y).map(|(&a, &b)| self.ring.add(a, b)).collect()
    }

    pub fn sub(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter().zip(y).map(|(&a, &b)| self.ring.sub(a, b)).collect()
    }

    pub fn scale(&self, c: u64, x: &[u64]) -> Vec<u64> {
        x.iter().map(|&a| self.ring.mul(c, a)).collect()
    }

    pub fn mul(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let mut out = self.zero();
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let c = self.ring.mul(a, b);
                for (t, &p) in self.products[i][j].iter().enumerate() {
                    out[t] = self.ring.add(out[t], self.ring.mul(c, p));
                }
            }
        }
        out
    }

    /// Check commutativity (structural), associativity, unitality and
    /// nilpotency of the maximal ideal.
    pub fn validate(&self) -> Result<(), ArtinError> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                for t in 0..n {
                    let ab = self.mul(&self.basis_vec(i), &self.basis_vec(j));
                    let abc = self.mul(&ab, &self.basis_vec(t));
                    let bc = self.mul(&self.basis_vec(j), &self.basis_vec(t));
                    let a_bc = self.mul(&self.basis_vec(i), &bc);
                    if abc != a_bc {
                        return Err(ArtinError::NotAssociative(
                            self.labels[i].clone(),
                            self.labels[j].clone(),
                            self.labels[t].clone(),
                        ));
                    }
                }
            }
        }
        // maximal ideal nilpotent: powers of span(e_1..) must reach zero
        let mut current: Vec<Vec<u64>> = (1..n).map(|i| self.basis_vec(i)).collect();
        for _ in 0..=n {
            if current.is_empty() {
                return Ok(());
            }
            let mut next: Vec<Vec<u64>> = Vec::new();
            for v in &current {
                for i in 1..n {
                    let p = self.mul(v, &self.basis_vec(i));
                    if p.iter().any(|&c| c != 0) {
                        next.push(p);
                    }
                }
            }
            // reduce to a basis
            let mat = rows_matrix(self.ring, &next);
            let rr = coeff::rref(&mat).map_err(ArtinError::Coeff)?;
            current = rr.matrix;
        }
        Err(ArtinError::NotNilpotent)
    }

    /// Basis vectors of m/m² (as coordinates of m not hit by products),
    /// returned as its dimension.
    pub fn m_mod_m2_dim(&self) -> Result<usize, ArtinError> {
        let n = self.dim();
        let mut prods: Vec<Vec<u64>> = Vec::new();
        for i in 1..n {
            for j in i..n {
                prods.push(self.products[i][j].clone());
            }
        }
        let mat = rows_matrix(self.ring, &prods);
        let rank = coeff::rank(&mat)?;
        Ok(n - 1 - rank)
    }
}

fn rows_matrix(ring: CoeffRing, rows: &[Vec<u64>]) -> ModMatrix {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut m = ModMatrix::zero(ring, rows.len(), cols);
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v != 0 {
                m.set(i, j, v);
            }
        }
    }
    m
}

/// Unital algebra morphism given by images of basis elements.
#[derive(Clone, Debug)]
pub struct Morphism {
    source_id: u64,
    target_id: u64,
    images: Vec<Vec<u64>>,
}

impl Morphism {
    pub fn new(
        source: &ArtinAlgebra,
        target: &ArtinAlgebra,
        images: Vec<Vec<u64>>,
    ) -> Result<Self, ArtinError> {
        if images.len() != source.dim() || images.iter().any(|v| v.len() != target.dim()) {
            return Err(ArtinError::Shape("morphism image count".into()));
        }
        if images[0] != target.unit() {
            return Err(ArtinError::NotAHomomorphism);
        }
        for i in 0..source.dim() {
            for j in i..source.dim() {
                let lhs = {
                    let p = &source.products[i][j];
                    let mut acc = target.zero();
                    for (t, &c) in p.iter().enumerate() {
                        acc = target.add(&acc, &target.scale(c, &images[t]));
                    }
                    acc
                };
                let rhs = target.mul(&images[i], &images[j]);
                if lhs != rhs {
                    return Err(ArtinError::NotAHomomorphism);
                }
            }
        }
        Ok(Morphism {
            source_id: source.id,
            target_id: target.id,
            images,
        })
    }

    pub fn identity(a: &ArtinAlgebra) -> Self {
        Morphism {
            source_id: a.id,
            target_id: a.id,
            images: (0..a.dim()).map(|i| a.basis_vec(i)).collect(),
        }
    }

    /// The unique map from the base field.
    pub fn from_base_field(k: &ArtinAlgebra, target: &ArtinAlgebra) -> Self {
        Morphism {
            source_id: k.id,
            target_id: target.id,
            images: vec![target.unit()],
        }
    }

    pub fn source_id(&self) -> u64 {
        self.source_id
    }

    pub fn target_id(&self) -> u64 {
        self.target_id
    }

    pub fn images(&self) -> &[Vec<u64>] {
        &self.images
    }

    pub fn apply(&self, target: &ArtinAlgebra, x: &[u64]) -> Vec<u64> {
        let mut out = target.zero();
        for (i, &c) in x.iter().enumerate() {
            if c != 0 {
                out = target.add(&out, &target.scale(c, &self.images[i]));
            }
        }
        out
    }

    pub fn compose(&self, target: &ArtinAlgebra, then: &Morphism) -> Morphism {
        Morphism {
            source_id: self.source_id,
            target_id: then.target_id,
            images: self.images.iter().map(|v| then.apply(target, v)).collect(),
        }
    }
}

/// Module over an Artin algebra: a vector space with an action matrix per
/// algebra basis element (action[0] must be the identity).
#[derive(Clone, Debug)]
pub struct AModule {
    pub dim: usize,
    /// action[i][r][c]: multiplication by e_i as a dim×dim matrix
    pub action: Vec<Vec<Vec<u64>>>,
}

impl AModule {
    /// The residue field k with m acting by zero.
    pub fn residue_field(a: &ArtinAlgebra) -> Self {
        let mut action = vec![vec![vec![0u64]]; a.dim()];
        action[0] = vec![vec![1u64]];
        AModule { dim: 1, action }
    }

    /// View a module over the target of `f` as a module over its source.
    pub fn pullback(&self, ring: CoeffRing, f: &Morphism) -> AModule {
        let action = f
            .images
            .iter()
            .map(|img| {
                let mut mat = vec![vec![0u64; self.dim]; self.dim];
                for (j, &c) in img.iter().enumerate() {
                    if c != 0 {
                        for r in 0..self.dim {
                            for col in 0..self.dim {
                                mat[r][col] = ring
                                    .add(mat[r][col], ring.mul(c, self.action[j][r][col]));
                            }
                        }
                    }
                }
                mat
            })
            .collect();
        AModule {
            dim: self.dim,
            action,
        }
    }

}

/// Coordinates for 1-cochains A → M: index = basis × module.
fn c1_dim(a: &ArtinAlgebra, m: &AModule) -> usize {
    a.dim() * m.dim
}

/// Coordinates for symmetric 2-cochains: unordered pairs (i ≤ j) × module.
fn sym_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i..n {
            out.push((i, j));
        }
    }
    out
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    // index in the (i ≤ j) enumeration
    i * n - i * (i + 1) / 2 + j
}

/// d₁ψ(a,b) = a·ψ(b) − ψ(ab) + b·ψ(a), as a matrix C¹ → C²_sym.
pub(crate) fn d1_matrix(a: &ArtinAlgebra, m: &AModule) -> ModMatrix {
    let ring = a.ring();
    let n = a.dim();
    let pairs = sym_pairs(n);
    let mut mat = ModMatrix::zero(ring, pairs.len() * m.dim, c1_dim(a, m));
    for (p, &(i, j)) in pairs.iter().enumerate() {
        // a·ψ(b) + b·ψ(a) with a = e_i, b = e_j
        for mc in 0..m.dim {
            // unknown ψ(e_j)[mc'] contributes action[e_i][mc][mc']
            for mcp in 0..m.dim {
                let v = m.action[i][mc][mcp];
                if v != 0 {
                    add_entry(&mut mat, p * m.dim + mc, j * m.dim + mcp, v, ring);
                }
                let w = m.action[j][mc][mcp];
                if w != 0 {
                    add_entry(&mut mat, p * m.dim + mc, i * m.dim + mcp, w, ring);
                }
            }
        }
        // −ψ(ab)
        for (t, &c) in a.products[i][j].iter().enumerate() {
            if c != 0 {
                for mc in 0..m.dim {
                    add_entry(&mut mat, p * m.dim + mc, t * m.dim + mc, ring.neg(c), ring);
                }
            }
        }
    }
    mat
}

fn add_entry(mat: &mut ModMatrix, r: usize, c: usize, v: u64, ring: CoeffRing) {
    let cur = mat.get(r, c);
    mat.set(r, c, ring.add(cur, v));
}

/// d₂φ(a,b,c) = a·φ(b,c) − φ(ab,c) + φ(a,bc) − c·φ(a,b), rows over all
/// ordered basis triples, columns over symmetric pairs.
pub(crate) fn d2_matrix(a: &ArtinAlgebra, m: &AModule) -> ModMatrix {
    let ring = a.ring();
    let n = a.dim();
    let pairs = sym_pairs(n);
    let rows = n * n * n * m.dim;
    let mut mat = ModMatrix::zero(ring, rows, pairs.len() * m.dim);
    for i in 0..n {
        for j in 0..n {
            for t in 0..n {
                let row_base = ((i * n + j) * n + t) * m.dim;
                // a·φ(b,c)
                for mc in 0..m.dim {
                    for mcp in 0..m.dim {
                        let v = m.action[i][mc][mcp];
                        if v != 0 {
                            add_entry(
                                &mut mat,
                                row_base + mc,
                                pair_index(n, j, t) * m.dim + mcp,
                                v,
                                ring,
                            );
                        }
                        // −c·φ(a,b)
                        let w = m.action[t][mc][mcp];
                        if w != 0 {
                            add_entry(
                                &mut mat,
                                row_base + mc,
                                pair_index(n, i, j) * m.dim + mcp,
                                ring.neg(w),
                                ring,
                            );
                        }
                    }
                }
                // −φ(ab, c)
                for (u, &cu) in a.products[i][j].iter().enumerate() {
                    if cu != 0 {
                        for mc in 0..m.dim {
                            add_entry(
                                &mut mat,
                                row_base + mc,
                                pair_index(n, u, t) * m.dim + mc,
                                ring.neg(cu),
                                ring,
                            );
                        }
                    }
                }
                // +φ(a, bc)
                for (u, &cu) in a.products[j][t].iter().enumerate() {
                    if cu != 0 {
                        for mc in 0..m.dim {
                            add_entry(
                                &mut mat,
                                row_base + mc,
                                pair_index(n, i, u) * m.dim + mc,
                                cu,
                                ring,
                            );
                        }
                    }
                }
            }
        }
    }
    mat
}

/// Harrison cohomology in dimensions 1 and 2.
pub struct HarrisonResult {
    /// derivations A → M (kernel of d₁), as C¹ coordinate vectors
    pub h1_basis: Vec<Vec<u64>>,
    /// symmetric 2-cocycles modulo d₁-coboundaries, as C²_sym vectors
    pub h2_basis: Vec<Vec<u64>>,
    /// row-reduced basis of the coboundary space im d₁
    pub coboundaries: Vec<Vec<u64>>,
}

impl HarrisonResult {
    pub fn h1_dim(&self) -> usize {
        self.h1_basis.len()
    }
    pub fn h2_dim(&self) -> usize {
        self.h2_basis.len()
    }
}

pub fn harrison(a: &ArtinAlgebra, m: &AModule) -> Result<HarrisonResult, ArtinError> {
    let ring = a.ring();
    if !ring.is_field() {
        return Err(ArtinError::Coeff(CoeffError::RequiresField(ring.power())));
    }
    let d1 = d1_matrix(a, m);
    let d2 = d2_matrix(a, m);
    let h1_basis = coeff::kernel_basis(&d1)?;
    let z2 = coeff::kernel_basis(&d2)?;
    let img_rr = coeff::rref(&d1.transpose())?;
    let h2_basis = residues_mod(ring, &img_rr, &z2);
    Ok(HarrisonResult {
        h1_basis,
        h2_basis,
        coboundaries: img_rr.matrix,
    })
}

/// Reduce candidate vectors modulo an echelon space; return the independent
/// normalized residues (a basis of the quotient).
fn residues_mod(ring: CoeffRing, base: &coeff::Rref, candidates: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let mut elim: Vec<(usize, Vec<u64>)> = base
        .pivots
        .iter()
        .copied()
        .zip(base.matrix.iter().cloned())
        .collect();
    let mut out = Vec::new();
    for cand in candidates {
        let mut v = cand.clone();
        for (pc, row) in &elim {
            let f = v[*pc];
            if f != 0 {
                for (slot, &u) in v.iter_mut().zip(row.iter()) {
                    *slot = ring.sub(*slot, ring.mul(f, u));
                }
            }
        }
        if let Some(p) = v.iter().position(|&x| x != 0) {
            let inv = ring.inv(v[p]).expect("leading unit");
            for slot in v.iter_mut() {
                *slot = ring.mul(*slot, inv);
            }
            out.push(v.clone());
            let at = elim.partition_point(|(pc, _)| *pc < p);
            elim.insert(at, (p, v));
        }
    }
    out
}

/// Relative derivations and infinitesimal extensions for ι : A → B.
pub struct RelExt {
    /// derivations B → M vanishing on ι(A), as C¹(B) vectors
    pub der_basis: Vec<Vec<u64>>,
    /// classes of pairs (φ: S²B → M, τ: A → M), concatenated coordinates
    pub ext_basis: Vec<Vec<u64>>,
    /// length of the φ block inside a pair vector
    pub phi_len: usize,
    /// echelon basis of the trivial pairs (d₁ψ, −ψ∘ι)
    triv: coeff::Rref,
    ring: CoeffRing,
}

impl RelExt {
    pub fn der_dim(&self) -> usize {
        self.der_basis.len()
    }
    pub fn ext_dim(&self) -> usize {
        self.ext_basis.len()
    }

    /// Coordinates of a cocycle pair in the chosen class basis, or `None`
    /// if the vector does not lie in span(classes) + trivial pairs.
    pub fn class_coordinates(&self, pair: &[u64]) -> Option<Vec<u64>> {
        let ring = self.ring;
        // merge trivial rows and representatives, tagged with rep index
        let mut rows: Vec<(usize, &Vec<u64>, Option<usize>)> = Vec::new();
        for (p, r) in self.triv.pivots.iter().zip(self.triv.matrix.iter()) {
            rows.push((*p, r, None));
        }
        for (i, r) in self.ext_basis.iter().enumerate() {
            let p = r.iter().position(|&c| c != 0).expect("nonzero rep");
            rows.push((p, r, Some(i)));
        }
        rows.sort_by_key(|(p, _, _)| *p);
        let mut v = pair.to_vec();
        let mut coords = vec![0u64; self.ext_basis.len()];
        // greedy elimination by leading position (all rows have leading 1)
        loop {
            let Some(lead) = v.iter().position(|&c| c != 0) else {
                return Some(coords);
            };
            let Some(&(_, row, rep)) = rows.iter().find(|(p, _, _)| *p == lead) else {
                return None;
            };
            let f = v[lead];
            if let Some(i) = rep {
                coords[i] = ring.add(coords[i], f);
            }
            for (slot, &u) in v.iter_mut().zip(row.iter()) {
                *slot = ring.sub(*slot, ring.mul(f, u));
            }
        }
    }
}

/// Compute Der_A(B, M) and Ext^inf_A(B, M) for a morphism ι : A → B. The
/// extension datum is a pair (φ, τ) with d₂φ = 0 and d₁τ + φ∘ι² = 0,
/// modulo trivial pairs (d₁ψ, −ψ∘ι).
pub fn der_and_ext(
    iota: &Morphism,
    a: &ArtinAlgebra,
    b: &ArtinAlgebra,
    m: &AModule,
) -> Result<RelExt, ArtinError> {
    let ring = b.ring();
    if !ring.is_field() {
        return Err(ArtinError::Coeff(CoeffError::RequiresField(ring.power())));
    }
    if iota.source_id != a.id || iota.target_id != b.id {
        return Err(ArtinError::Shape("morphism endpoints".into()));
    }
    let nb = b.dim();
    let pairs_b = sym_pairs(nb);
    let phi_len = pairs_b.len() * m.dim;
    let tau_len = a.dim() * m.dim;
    let d1b = d1_matrix(b, m);
    let d2b = d2_matrix(b, m);

    // Der_A(B,M): kernel of d₁ intersected with ψ∘ι = 0
    let mut der_rows: Vec<Vec<u64>> = Vec::new();
    let d1_dense = d1b.to_dense();
    der_rows.extend(d1_dense.iter().cloned());
    for ai in 0..a.dim() {
        // ψ(ι(e_ai)) = 0, one row per module coordinate
        for mc in 0..m.dim {
            let mut row = vec![0u64; c1_dim(b, m)];
            for (bi, &c) in iota.images[ai].iter().enumerate() {
                if c != 0 {
                    row[bi * m.dim + mc] = ring.add(row[bi * m.dim + mc], c);
                }
            }
            der_rows.push(row);
        }
    }
    let der_basis = coeff::kernel_basis(&rows_matrix(ring, &der_rows))?;

    // Ext: pair vectors (φ ++ τ)
    // constraints: d₂φ = 0; for each A pair (i ≤ j): d₁^Aτ(i,j) + φ(ιi, ιj) = 0
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for r in 0..d2b.rows() {
        let mut row = vec![0u64; phi_len + tau_len];
        let mut nonzero = false;
        for c in 0..phi_len {
            let v = d2b.get(r, c);
            if v != 0 {
                row[c] = v;
                nonzero = true;
            }
        }
        if nonzero {
            rows.push(row);
        }
    }
    let m_a = m.pullback(ring, iota);
    let d1a = d1_matrix(a, &m_a);
    let pairs_a = sym_pairs(a.dim());
    for (p, &(i, j)) in pairs_a.iter().enumerate() {
        for mc in 0..m.dim {
            let mut row = vec![0u64; phi_len + tau_len];
            // d₁^Aτ coefficients
            for c in 0..tau_len {
                let v = d1a.get(p * m.dim + mc, c);
                if v != 0 {
                    row[phi_len + c] = v;
                }
            }
            // + φ(ι e_i, ι e_j): bilinear expansion over B basis pairs
            for (bi, &ci) in iota.images[i].iter().enumerate() {
                if ci == 0 {
                    continue;
                }
                for (bj, &cj) in iota.images[j].iter().enumerate() {
                    if cj == 0 {
                        continue;
                    }
                    let col = pair_index(nb, bi, bj) * m.dim + mc;
                    row[col] = ring.add(row[col], ring.mul(ci, cj));
                }
            }
            if row.iter().any(|&x| x != 0) {
                rows.push(row);
            }
        }
    }
    let z = coeff::kernel_basis(&rows_matrix(ring, &rows))?;
    // trivial pairs T(ψ) = (d₁ψ, −ψ∘ι)
    let mut trivial: Vec<Vec<u64>> = Vec::new();
    for col in 0..c1_dim(b, m) {
        let mut t = vec![0u64; phi_len + tau_len];
        for r in 0..phi_len {
            t[r] = d1b.get(r, col);
        }
        // −ψ∘ι: ψ = coordinate cochain (b basis bi0, module mc0)
        let (bi0, mc0) = (col / m.dim, col % m.dim);
        for ai in 0..a.dim() {
            let c = iota.images[ai][bi0];
            if c != 0 {
                let ix = phi_len + ai * m.dim + mc0;
                t[ix] = ring.sub(t[ix], c);
            }
        }
        if t.iter().any(|&x| x != 0) {
            trivial.push(t);
        }
    }
    let triv_rr = {
        let mut t = trivial.clone();
        coeff::rref_dense(&ring, &mut t)
    };
    let ext_basis = residues_mod(ring, &triv_rr, &z);
    Ok(RelExt {
        der_basis,
        ext_basis,
        phi_len,
        triv: triv_rr,
        ring,
    })
}

/// Exactness report for the Jacobi–Zariski six-term sequence of a tower
/// R → A → B with coefficients in a B-module M:
///
/// 0 → Der_A(B) → Der_R(B) → Der_R(A) → Ext_A(B) → Ext_R(B) → Ext_R(A)
pub struct TransitivityReport {
    pub der_a_b: usize,
    pub der_r_b: usize,
    pub der_r_a: usize,
    pub ext_a_b: usize,
    pub ext_r_b: usize,
    pub ext_r_a: usize,
    /// exactness at the four interior nodes, in sequence order
    pub exact: [bool; 4],
}

impl TransitivityReport {
    pub fn all_exact(&self) -> bool {
        self.exact.iter().all(|&b| b)
    }
}

/// Check exactness of the transitivity sequence for ι : R → A, π : A → B.
pub fn transitivity_exact(
    r: &ArtinAlgebra,
    a: &ArtinAlgebra,
    b: &ArtinAlgebra,
    iota: &Morphism,
    pi: &Morphism,
    m: &AModule,
) -> Result<TransitivityReport, ArtinError> {
    let ring = b.ring();
    let rho = iota.compose(a, pi);
    let m_a = m.pullback(ring, pi);
    let rel_ab = der_and_ext(pi, a, b, m)?; // Der_A(B), Ext_A(B)
    let rel_rb = der_and_ext(&rho, r, b, m)?; // Der_R(B), Ext_R(B)
    let rel_ra = der_and_ext(iota, r, a, &m_a)?; // Der_R(A), Ext_R(A)
    let dm = m.dim;
    let na = a.dim();
    let nb = b.dim();

    // restriction ψ ↦ ψ∘π : C¹(B) → C¹(A)
    let restrict = |psi: &[u64]| -> Vec<u64> {
        let mut out = vec![0u64; na * dm];
        for i in 0..na {
            for (bj, &c) in pi.images[i].iter().enumerate() {
                if c != 0 {
                    for mc in 0..dm {
                        out[i * dm + mc] =
                            ring.add(out[i * dm + mc], ring.mul(c, psi[bj * dm + mc]));
                    }
                }
            }
        }
        out
    };

    // node 1: Der_A(B) = ker(restrict) inside Der_R(B)
    let in_span = |basis: &[Vec<u64>], v: &[u64]| -> Result<bool, ArtinError> {
        if basis.is_empty() {
            return Ok(v.iter().all(|&c| c == 0));
        }
        let cols = basis.len();
        let mut mat = ModMatrix::zero(ring, v.len(), cols);
        for (j, bvec) in basis.iter().enumerate() {
            for (i, &c) in bvec.iter().enumerate() {
                if c != 0 {
                    mat.set(i, j, c);
                }
            }
        }
        Ok(coeff::solve(&mat, v)?.is_some())
    };
    let mut node1 = true;
    for psi in &rel_ab.der_basis {
        node1 &= in_span(&rel_rb.der_basis, psi)?;
        node1 &= restrict(psi).iter().all(|&c| c == 0);
    }
    let restricted: Vec<Vec<u64>> = rel_rb.der_basis.iter().map(|p| restrict(p)).collect();
    let rank_restrict = coeff::rank(&rows_matrix(ring, &restricted))?;
    node1 &= rel_ab.der_dim() + rank_restrict == rel_rb.der_dim();

    // connecting map δ: Der_R(A) → Ext_A(B), τ ↦ class of (0, τ)
    let delta_class = |tau: &[u64]| -> Option<Vec<u64>> {
        let mut pair = vec![0u64; rel_ab.phi_len + na * dm];
        pair[rel_ab.phi_len..].copy_from_slice(tau);
        rel_ab.class_coordinates(&pair)
    };
    let mut node2 = true;
    // composition: δ(ψ∘π) = 0
    for img in &restricted {
        match delta_class(img) {
            Some(c) => node2 &= c.iter().all(|&x| x == 0),
            None => node2 = false,
        }
    }
    let mut delta_rows = Vec::new();
    for tau in &rel_ra.der_basis {
        match delta_class(tau) {
            Some(c) => delta_rows.push(c),
            None => node2 = false,
        }
    }
    let rank_delta = coeff::rank(&rows_matrix(ring, &delta_rows))?;
    node2 &= rank_restrict + rank_delta == rel_ra.der_dim();

    // forget: Ext_A(B) → Ext_R(B), (φ, τ) ↦ (φ, τ∘ι)
    let forget_class = |pair: &[u64]| -> Option<Vec<u64>> {
        let mut out = vec![0u64; rel_rb.phi_len + r.dim() * dm];
        out[..rel_rb.phi_len].copy_from_slice(&pair[..rel_ab.phi_len]);
        for ri in 0..r.dim() {
            for (aj, &c) in iota.images[ri].iter().enumerate() {
                if c != 0 {
                    for mc in 0..dm {
                        let ix = rel_rb.phi_len + ri * dm + mc;
                        out[ix] = ring.add(
                            out[ix],
                            ring.mul(c, pair[rel_ab.phi_len + aj * dm + mc]),
                        );
                    }
                }
            }
        }
        rel_rb.class_coordinates(&out)
    };
    let mut node3 = true;
    for row in &delta_rows {
        // rebuild the representative pair from class coordinates
        let mut pair = vec![0u64; rel_ab.phi_len + na * dm];
        for (i, &c) in row.iter().enumerate() {
            if c != 0 {
                for (slot, &u) in pair.iter_mut().zip(rel_ab.ext_basis[i].iter()) {
                    *slot = ring.add(*slot, ring.mul(c, u));
                }
            }
        }
        match forget_class(&pair) {
            Some(c) => node3 &= c.iter().all(|&x| x == 0),
            None => node3 = false,
        }
    }
    let mut forget_rows = Vec::new();
    for pair in &rel_ab.ext_basis {
        match forget_class(pair) {
            Some(c) => forget_rows.push(c),
            None => node3 = false,
        }
    }
    let rank_forget = coeff::rank(&rows_matrix(ring, &forget_rows))?;
    node3 &= rank_delta + rank_forget == rel_ab.ext_dim();

    // pullback: Ext_R(B) → Ext_R(A), (φ, σ) ↦ (φ∘π², σ)
    let pullback_class = |pair: &[u64]| -> Option<Vec<u64>> {
        let mut out = vec![0u64; rel_ra.phi_len + r.dim() * dm];
        for i in 0..na {
            for j in i..na {
                for (bi, &ci) in pi.images[i].iter().enumerate() {
                    if ci == 0 {
                        continue;
                    }
                    for (bj, &cj) in pi.images[j].iter().enumerate() {
                        if cj == 0 {
                            continue;
                        }
                        let c = ring.mul(ci, cj);
                        for mc in 0..dm {
                            let src = pair_index(nb, bi, bj) * dm + mc;
                            let dst = pair_index(na, i, j) * dm + mc;
                            out[dst] = ring.add(out[dst], ring.mul(c, pair[src]));
                        }
                    }
                }
            }
        }
        out[rel_ra.phi_len..]
            .copy_from_slice(&pair[rel_rb.phi_len..rel_rb.phi_len + r.dim() * dm]);
        rel_ra.class_coordinates(&out)
    };
    let mut node4 = true;
    for row in &forget_rows {
        let mut pair = vec![0u64; rel_rb.phi_len + r.dim() * dm];
        for (i, &c) in row.iter().enumerate() {
            if c != 0 {
                for (slot, &u) in pair.iter_mut().zip(rel_rb.ext_basis[i].iter()) {
                    *slot = ring.add(*slot, ring.mul(c, u));
                }
            }
        }
        match pullback_class(&pair) {
            Some(c) => node4 &= c.iter().all(|&x| x == 0),
            None => node4 = false,
        }
    }
    let mut pullback_rows = Vec::new();
    for pair in &rel_rb.ext_basis {
        match pullback_class(pair) {
            Some(c) => pullback_rows.push(c),
            None => node4 = false,
        }
    }
    let rank_pullback = coeff::rank(&rows_matrix(ring, &pullback_rows))?;
    node4 &= rank_forget + rank_pullback == rel_rb.ext_dim();

    Ok(TransitivityReport {
        der_a_b: rel_ab.der_dim(),
        der_r_b: rel_rb.der_dim(),
        der_r_a: rel_ra.der_dim(),
        ext_a_b: rel_ab.ext_dim(),
        ext_r_b: rel_rb.ext_dim(),
        ext_r_a: rel_ra.ext_dim(),
        exact: [node1, node2, node3, node4],
    })
}

/// A square-zero extension of Artin algebras with kernel killed by the
/// maximal ideal.
pub struct SmallExtension {
    pub total: ArtinAlgebra,
    pub base_id: u64,
    pub proj: Morphism,
    /// basis of the kernel, in total-algebra coordinates
    pub kernel: Vec<Vec<u64>>,
}

impl SmallExtension {
    /// Check I² = 0 and m·I = 0.
    pub fn validate(&self, total: &ArtinAlgebra) -> Result<(), ArtinError> {
        for u in &self.kernel {
            for v in &self.kernel {
                if total.mul(u, v).iter().any(|&c| c != 0) {
                    return Err(ArtinError::Shape("kernel not square-zero".into()));
                }
            }
            for i in 1..total.dim() {
                if total.mul(u, &total.basis_vec(i)).iter().any(|&c| c != 0) {
                    return Err(ArtinError::Shape("kernel not killed by m".into()));
                }
            }
        }
        Ok(())
    }
}

/// Normalize a symmetric 2-cocycle so that φ(1,·) = 0, by subtracting
/// d₁ψ with ψ(a) = ε(a)·φ(1,1).
fn normalize_cocycle(a: &ArtinAlgebra, m: &AModule, phi: &[u64]) -> Vec<u64> {
    let ring = a.ring();
    let n = a.dim();
    let phi11: Vec<u64> = (0..m.dim)
        .map(|mc| phi[pair_index(n, 0, 0) * m.dim + mc])
        .collect();
    if phi11.iter().all(|&c| c == 0) {
        return phi.to_vec();
    }
    let d1 = d1_matrix(a, m);
    // ψ = ε ⊗ φ(1,1): coordinates on (basis 0, module mc)
    let mut psi = vec![0u64; c1_dim(a, m)];
    for (mc, &c) in phi11.iter().enumerate() {
        psi[mc] = c;
    }
    let dpsi = d1.mul_vec(&psi).expect("dims");
    phi.iter()
        .zip(dpsi.iter())
        .map(|(&p, &d)| ring.sub(p, d))
        .collect()
}

/// The universal small extension C = A ⊕ Ext^inf(A,k)′ with multiplication
/// (a,ξ)(b,η) = (ab, ε(a)η + ε(b)ξ + (φ_α(a,b))_α) for normalized cocycle
/// representatives φ_α.
pub struct UniversalExtension {
    pub extension: SmallExtension,
    /// normalized cocycles, one per kernel coordinate, as C²_sym(A) vectors
    pub cocycles: Vec<Vec<u64>>,
}

pub fn universal_small_extension(a: &ArtinAlgebra) -> Result<UniversalExtension, ArtinError> {
    let ring = a.ring();
    let m = AModule::residue_field(a);
    let h = harrison(a, &m)?;
    let cocycles: Vec<Vec<u64>> = h
        .h2_basis
        .iter()
        .map(|phi| normalize_cocycle(a, &m, phi))
        .collect();
    let na = a.dim();
    let d = cocycles.len();
    let n = na + d;
    let mut labels: Vec<String> = a.labels.clone();
    let mut next = 1usize;
    for _ in 0..d {
        // fresh names: skip anything already present in the base
        while labels.contains(&format!("xi{next}")) {
            next += 1;
        }
        labels.push(format!("xi{next}"));
        next += 1;
    }
    let mut products = vec![vec![vec![0u64; n]; n]; n];
    for i in 0..na {
        for j in 0..na {
            let mut coords = vec![0u64; n];
            coords[..na].copy_from_slice(&a.products[i][j]);
            for (alpha, phi) in cocycles.iter().enumerate() {
                coords[na + alpha] = phi[pair_index(na, i, j)];
            }
            products[i][j] = coords;
        }
    }
    // (1, ξ) products: ε(e_i)·ξ
    for alpha in 0..d {
        for i in 0..na {
            let mut coords = vec![0u64; n];
            if i == 0 {
                coords[na + alpha] = 1;
            }
            products[i][na + alpha] = coords.clone();
            products[na + alpha][i] = coords;
        }
    }
    let total = ArtinAlgebra::from_table(ring, labels, products);
    total.validate()?;
    let proj = Morphism {
        source_id: total.id,
        target_id: a.id,
        images: {
            let mut imgs: Vec<Vec<u64>> = (0..na).map(|i| a.basis_vec(i)).collect();
            imgs.extend((0..d).map(|_| a.zero()));
            imgs
        },
    };
    let kernel: Vec<Vec<u64>> = (0..d).map(|alpha| total.basis_vec(na + alpha)).collect();
    let ext = SmallExtension {
        total,
        base_id: a.id,
        proj,
        kernel,
    };
    Ok(UniversalExtension {
        extension: ext,
        cocycles,
    })
}

/// Classification of a sample small extension B → A by the universal one:
/// the push-forward map λ on kernels and an induced algebra morphism C → B.
pub struct Classification {
    /// λ(ξ_α) ∈ ker(B → A), per universal kernel generator, in sample
    /// kernel coordinates
    pub lambda: Vec<Vec<u64>>,
    /// whether λ is the unique solution of the classification system
    pub unique: bool,
    /// a morphism of extensions C → B over A realizing λ
    pub morphism: Morphism,
}

/// Solve λ·(φ_α) − d₁ψ = φ_sample for the push-forward datum λ and a
/// section correction ψ, where φ_sample is the cocycle of a linear section
/// of the sample extension. λ is unique (the universal cocycles represent a
/// basis of H²); ψ is ambiguous by derivations, which do not affect λ.
pub fn classifying_morphism(
    a: &ArtinAlgebra,
    univ: &UniversalExtension,
    sample: &SmallExtension,
    sample_total: &ArtinAlgebra,
) -> Result<Option<Classification>, ArtinError> {
    let ring = a.ring();
    let c_alg = &univ.extension.total;
    let na = a.dim();
    let d = univ.cocycles.len();
    let kernel_dim = sample.kernel.len();
    let section = linear_section(a, sample, sample_total)?;
    // sample cocycle in kernel coordinates: φ_B(e_i,e_j) = s(e_i)s(e_j) − s(e_ie_j)
    let pairs = sym_pairs(na);
    let mut phi_sample: Vec<Vec<u64>> = Vec::with_capacity(pairs.len());
    for &(i, j) in &pairs {
        let prod_a = &a.products[i][j];
        let defect = sample_total.sub(
            &sample_total.mul(&section[i], &section[j]),
            &apply_linear(&section, sample_total, prod_a),
        );
        match in_kernel_coords(ring, &sample.kernel, &defect)? {
            Some(v) => phi_sample.push(v),
            None => return Ok(None),
        }
    }
    // unknowns: λ (d × kernel_dim) then ψ (na × kernel_dim); the module is
    // the sample kernel with m acting by zero, so d₁ψ(i,j) =
    // ε_i ψ_j + ε_j ψ_i − ψ(e_i e_j)
    let nvars = (d + na) * kernel_dim;
    let mut rows: Vec<Vec<u64>> = Vec::new();
    let mut rhs: Vec<u64> = Vec::new();
    for (p, &(i, j)) in pairs.iter().enumerate() {
        for kc in 0..kernel_dim {
            let mut row = vec![0u64; nvars];
            for (alpha, phi) in univ.cocycles.iter().enumerate() {
                let c = phi[pair_index(na, i, j)];
                if c != 0 {
                    row[alpha * kernel_dim + kc] = c;
                }
            }
            // −d₁ψ
            let base = d * kernel_dim;
            let ei = if i == 0 { 1 } else { 0 };
            let ej = if j == 0 { 1 } else { 0 };
            if ei != 0 {
                let ix = base + j * kernel_dim + kc;
                row[ix] = ring.sub(row[ix], ei);
            }
            if ej != 0 {
                let ix = base + i * kernel_dim + kc;
                row[ix] = ring.sub(row[ix], ej);
            }
            for (t, &ct) in a.products[i][j].iter().enumerate() {
                if ct != 0 {
                    let ix = base + t * kernel_dim + kc;
                    row[ix] = ring.add(row[ix], ct);
                }
            }
            rows.push(row);
            rhs.push(phi_sample[p][kc]);
        }
    }
    let mat = rows_matrix(ring, &rows);
    let Some(sol) = coeff::solve(&mat, &rhs)? else {
        return Ok(None);
    };
    // λ is unique iff no kernel vector has a nonzero λ-component
    let unique = coeff::kernel_basis(&mat)?
        .iter()
        .all(|v| v[..d * kernel_dim].iter().all(|&c| c == 0));
    let lambda: Vec<Vec<u64>> = (0..d)
        .map(|alpha| sol[alpha * kernel_dim..(alpha + 1) * kernel_dim].to_vec())
        .collect();
    // assemble h: h(e_i) = s(e_i) + ψ(e_i), h(ξ_α) = λ(ξ_α)
    let kernel_elem = |coords: &[u64]| {
        let mut acc = sample_total.zero();
        for (kc, &c) in coords.iter().enumerate() {
            if c != 0 {
                acc = sample_total.add(&acc, &sample_total.scale(c, &sample.kernel[kc]));
            }
        }
        acc
    };
    let mut images: Vec<Vec<u64>> = Vec::with_capacity(c_alg.dim());
    for i in 0..na {
        let psi = &sol[(d + i) * kernel_dim..(d + i + 1) * kernel_dim];
        images.push(sample_total.add(&section[i], &kernel_elem(psi)));
    }
    for l in &lambda {
        images.push(kernel_elem(l));
    }
    let morphism = Morphism::new(c_alg, sample_total, images)?;
    Ok(Some(Classification {
        lambda,
        unique,
        morphism,
    }))
}

/// A linear (not multiplicative) section of the sample projection.
pub(crate) fn linear_section(
    a: &ArtinAlgebra,
    sample: &SmallExtension,
    sample_total: &ArtinAlgebra,
) -> Result<Vec<Vec<u64>>, ArtinError> {
    let ring = a.ring();
    // solve proj(s(e_i)) = e_i for each basis vector of A; proj as matrix
    let na = a.dim();
    let nb = sample_total.dim();
    let mut pm = ModMatrix::zero(ring, na, nb);
    for (col, img) in sample.proj.images.iter().enumerate() {
        for (r, &v) in img.iter().enumerate() {
            if v != 0 {
                pm.set(r, col, v);
            }
        }
    }
    let mut out = Vec::new();
    for i in 0..na {
        let sol = coeff::solve(&pm, &a.basis_vec(i))?
            .ok_or_else(|| ArtinError::Shape("projection not surjective".into()))?;
        out.push(sol);
    }
    // force s(1) = 1 for a unital section
    out[0] = sample_total.unit();
    Ok(out)
}

fn apply_linear(images: &[Vec<u64>], target: &ArtinAlgebra, x: &[u64]) -> Vec<u64> {
    let mut acc = target.zero();
    for (i, &c) in x.iter().enumerate() {
        if c != 0 {
            acc = target.add(&acc, &target.scale(c, &images[i]));
        }
    }
    acc
}

/// Express v in the span of the kernel basis, if possible.
pub(crate) fn in_kernel_coords(
    ring: CoeffRing,
    kernel: &[Vec<u64>],
    v: &[u64],
) -> Result<Option<Vec<u64>>, ArtinError> {
    let nb = v.len();
    let mut mat = ModMatrix::zero(ring, nb, kernel.len());
    for (j, k) in kernel.iter().enumerate() {
        for (i, &c) in k.iter().enumerate() {
            if c != 0 {
                mat.set(i, j, c);
            }
        }
    }
    Ok(coeff::solve(&mat, v)?)
}

/// Quotient of an Artin algebra by the ideal generated by elements of m.
/// Returns the quotient and the old-basis → new-coordinates projection.
pub fn quotient_by_ideal(
    a: &ArtinAlgebra,
    gens: &[Vec<u64>],
) -> Result<(ArtinAlgebra, Vec<Vec<u64>>), ArtinError> {
    let ring = a.ring();
    if !ring.is_field() {
        return Err(ArtinError::Coeff(CoeffError::RequiresField(ring.power())));
    }
    let n = a.dim();
    for g in gens {
        if g[0] != 0 {
            return Err(ArtinError::Shape("ideal generator has a unit part".into()));
        }
    }
    // saturate the span under multiplication by basis elements
    let mut span: Vec<Vec<u64>> = gens.to_vec();
    loop {
        let rr = coeff::rref(&rows_matrix(ring, &span))?;
        let before = rr.pivots.len();
        let mut next = rr.matrix.clone();
        for v in &rr.matrix {
            for i in 1..n {
                let p = a.mul(v, &a.basis_vec(i));
                if p.iter().any(|&c| c != 0) {
                    next.push(p);
                }
            }
        }
        let rr2 = coeff::rref(&rows_matrix(ring, &next))?;
        if rr2.pivots.len() == before {
            span = rr2.matrix;
            break;
        }
        span = rr2.matrix;
    }
    let rr = coeff::rref(&rows_matrix(ring, &span))?;
    let pivot_set: std::collections::BTreeSet<usize> = rr.pivots.iter().copied().collect();
    if pivot_set.contains(&0) {
        return Err(ArtinError::Shape("ideal contains the unit".into()));
    }
    let survivors: Vec<usize> = (0..n).filter(|c| !pivot_set.contains(c)).collect();
    // projection: reduce a coordinate vector modulo the ideal, then restrict
    let reduce = |x: &[u64]| -> Vec<u64> {
        let mut v = x.to_vec();
        for (row, &pc) in rr.matrix.iter().zip(rr.pivots.iter()) {
            let f = v[pc];
            if f != 0 {
                for (slot, &u) in v.iter_mut().zip(row.iter()) {
                    *slot = ring.sub(*slot, ring.mul(f, u));
                }
            }
        }
        survivors.iter().map(|&c| v[c]).collect()
    };
    let projection: Vec<Vec<u64>> = (0..n).map(|i| reduce(&a.basis_vec(i))).collect();
    let nn = survivors.len();
    let mut labels = Vec::with_capacity(nn);
    for &s in &survivors {
        labels.push(a.labels[s].clone());
    }
    let mut products = vec![vec![vec![0u64; nn]; nn]; nn];
    for (i_new, &i_old) in survivors.iter().enumerate() {
        for (j_new, &j_old) in survivors.iter().enumerate() {
            products[i_new][j_new] = reduce(&a.products[i_old][j_old]);
        }
    }
    let q = ArtinAlgebra::from_table(ring, labels, products);
    q.validate()?;
    Ok((q, projection))
}

/// Enumerate all algebra morphisms A → B by brute force over images of the
/// non-unit basis elements in the maximal ideal of B.
pub fn enumerate_morphisms(
    a: &ArtinAlgebra,
    b: &ArtinAlgebra,
    budget: u128,
) -> Result<Vec<Morphism>, ArtinError> {
    let ring = a.ring();
    let q = ring.modulus() as u128;
    let slots = (a.dim() - 1) * (b.dim() - 1);
    let mut count: u128 = 1;
    for _ in 0..slots {
        count = count.saturating_mul(q);
        if count > budget {
            return Err(ArtinError::Shape(format!(
                "morphism enumeration needs {count} candidates"
            )));
        }
    }
    let mut out = Vec::new();
    let mut assignment = vec![0u64; slots];
    loop {
        let mut images = vec![b.unit()];
        for i in 1..a.dim() {
            let mut img = b.zero();
            for j in 1..b.dim() {
                img[j] = assignment[(i - 1) * (b.dim() - 1) + (j - 1)];
            }
            images.push(img);
        }
        if let Ok(m) = Morphism::new(a, b, images) {
            out.push(m);
        }
        let mut pos = slots;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            assignment[pos] += 1;
            if (assignment[pos] as u128) < q {
                break;
            }
            assignment[pos] = 0;
        }
    }
}

/// Standard local fixtures.
pub mod fixtures {
    use super::*;

    pub fn base_field(ring: CoeffRing) -> ArtinAlgebra {
        ArtinAlgebra::new(ring, &["1"], &[]).unwrap()
    }

    /// k[t]/t^n with basis 1, t, …, t^{n−1}.
    pub fn truncated_poly(ring: CoeffRing, n: usize) -> ArtinAlgebra {
        assert!(n >= 1);
        let labels: Vec<String> = (0..n)
            .map(|i| if i == 0 { "1".to_string() } else { format!("t{i}") })
            .collect();
        let label_refs: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
        let mut spec: Vec<(String, String, Vec<(String, i64)>)> = Vec::new();
        for i in 1..n {
            for j in i..n {
                let prod = if i + j < n {
                    vec![(labels[i + j].clone(), 1i64)]
                } else {
                    vec![]
                };
                spec.push((labels[i].clone(), labels[j].clone(), prod));
            }
        }
        let spec_refs: Vec<(&str, &str, Vec<(&str, i64)>)> = spec
            .iter()
            .map(|(u, v, t)| {
                (
                    u.as_str(),
                    v.as_str(),
                    t.iter().map(|(n, c)| (n.as_str(), *c)).collect(),
                )
            })
            .collect();
        ArtinAlgebra::new(ring, &label_refs, &spec_refs).unwrap()
    }

    /// k[s,t]/(s,t)².
    pub fn square_zero_two(ring: CoeffRing) -> ArtinAlgebra {
        ArtinAlgebra::new(
            ring,
            &["1", "s", "t"],
            &[
                ("s", "s", vec![]),
                ("s", "t", vec![]),
                ("t", "t", vec![]),
            ],
        )
        .unwrap()
    }

    /// k[s,t]/(s², t²), with basis 1, s, t, st.
    pub fn bi_dual(ring: CoeffRing) -> ArtinAlgebra {
        ArtinAlgebra::new(
            ring,
            &["1", "s", "t", "st"],
            &[
                ("s", "s", vec![]),
                ("t", "t", vec![]),
                ("s", "t", vec![("st", 1)]),
                ("s", "st", vec![]),
                ("t", "st", vec![]),
                ("st", "st", vec![]),
            ],
        )
        .unwrap()
    }

    /// Square-zero extension of k by a vector space of the given dimension,
    /// with the provided ideal labels.
    pub fn square_zero(ring: CoeffRing, ideal_labels: &[&str]) -> ArtinAlgebra {
        let mut labels = vec!["1"];
        labels.extend_from_slice(ideal_labels);
        let mut spec = Vec::new();
        for (i, u) in ideal_labels.iter().enumerate() {
            for v in &ideal_labels[i..] {
                spec.push((*u, *v, vec![]));
            }
        }
        ArtinAlgebra::new(ring, &labels, &spec).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> CoeffRing {
        CoeffRing::field(2).unwrap()
    }
    fn f3() -> CoeffRing {
        CoeffRing::field(3).unwrap()
    }

    #[test]
    fn fixtures_validate() {
        for ring in [f2(), f3()] {
            fixtures::base_field(ring);
            fixtures::truncated_poly(ring, 2);
            fixtures::truncated_poly(ring, 3);
            fixtures::truncated_poly(ring, 4);
            fixtures::square_zero_two(ring);
            fixtures::bi_dual(ring);
        }
    }

    #[test]
    fn h1_equals_m_mod_m2() {
        let ring = f3();
        let cases: Vec<(ArtinAlgebra, usize)> = vec![
            (fixtures::truncated_poly(ring, 2), 1),
            (fixtures::truncated_poly(ring, 3), 1),
            (fixtures::truncated_poly(ring, 4), 1),
            (fixtures::square_zero_two(ring), 2),
            (fixtures::bi_dual(ring), 2),
        ];
        for (a, want) in cases {
            let m = AModule::residue_field(&a);
            let h = harrison(&a, &m).unwrap();
            assert_eq!(h.h1_dim(), want, "{:?}", a.labels());
            assert_eq!(a.m_mod_m2_dim().unwrap(), want);
        }
    }

    #[test]
    fn h2_dual_numbers() {
        for ring in [f2(), f3()] {
            let a = fixtures::truncated_poly(ring, 2);
            let m = AModule::residue_field(&a);
            let h = harrison(&a, &m).unwrap();
            // the t³-type extension is the single nontrivial class
            assert_eq!(h.h2_dim(), 1);
        }
    }

    #[test]
    fn der_examples() {
        let ring = f3();
        let k = fixtures::base_field(ring);
        let b = fixtures::truncated_poly(ring, 2);
        let m = AModule::residue_field(&b);
        let iota = Morphism::from_base_field(&k, &b);
        let rel = der_and_ext(&iota, &k, &b, &m).unwrap();
        assert_eq!(rel.der_dim(), 1);

        // identity morphism: no relative derivations
        let id = Morphism::identity(&b);
        let rel = der_and_ext(&id, &b, &b, &m).unwrap();
        assert_eq!(rel.der_dim(), 0);
    }

    #[test]
    fn universal_extension_of_dual_numbers() {
        for ring in [f2(), f3()] {
            let a = fixtures::truncated_poly(ring, 2);
            let u = universal_small_extension(&a).unwrap();
            let c = &u.extension.total;
            assert_eq!(c.dim(), 3);
            u.extension.validate(c).unwrap();
            // t·t = φ(t,t)·ξ with φ the t³-class: nonzero
            let t = c.basis_vec(1);
            let tt = c.mul(&t, &t);
            assert!(tt.iter().any(|&x| x != 0), "C should be k[t]/t³-like");
        }
    }

    #[test]
    fn universal_extension_of_base_field_trivial() {
        let k = fixtures::base_field(f3());
        let u = universal_small_extension(&k).unwrap();
        assert_eq!(u.extension.total.dim(), 1);
    }

    #[test]
    fn classifying_morphism_unique() {
        let ring = f3();
        let a = fixtures::truncated_poly(ring, 2);
        let u = universal_small_extension(&a).unwrap();
        // sample: k[t]/t³ → k[t]/t² with kernel t²
        let b = fixtures::truncated_poly(ring, 3);
        let proj = Morphism {
            source_id: b.id(),
            target_id: a.id(),
            images: vec![a.basis_vec(0), a.basis_vec(1), a.zero()],
        };
        let sample = SmallExtension {
            total: fixtures::truncated_poly(ring, 3),
            base_id: a.id(),
            proj,
            kernel: vec![b.basis_vec(2)],
        };
        let cls = classifying_morphism(&a, &u, &sample, &b)
            .unwrap()
            .expect("classifying morphism exists");
        assert!(cls.unique);
        // the push-forward hits the kernel generator: λ ≠ 0
        assert!(cls.lambda.iter().any(|v| v.iter().any(|&c| c != 0)));
        let h = cls.morphism;
        // h commutes with the projections on basis vectors
        for i in 0..u.extension.total.dim() {
            let via_c = u
                .extension
                .proj
                .apply(&a, &u.extension.total.basis_vec(i));
            let via_b = sample.proj.apply(&a, &h.apply(&b, &u.extension.total.basis_vec(i)));
            assert_eq!(via_c, via_b);
        }
    }

    #[test]
    fn transitivity_towers() {
        for ring in [f2(), f3()] {
            let k = fixtures::base_field(ring);
            // k → k[t]/t³ → k[t]/t²
            let a3 = fixtures::truncated_poly(ring, 3);
            let a2 = fixtures::truncated_poly(ring, 2);
            let iota = Morphism::from_base_field(&k, &a3);
            let pi = Morphism::new(&a3, &a2, vec![a2.basis_vec(0), a2.basis_vec(1), a2.zero()])
                .unwrap();
            let m = AModule::residue_field(&a2);
            let rep = transitivity_exact(&k, &a3, &a2, &iota, &pi, &m).unwrap();
            assert!(rep.all_exact(), "t3 tower: {:?}", rep.exact);

            // k → k[t]/t⁴ → k[t]/t²
            let a4 = fixtures::truncated_poly(ring, 4);
            let iota = Morphism::from_base_field(&k, &a4);
            let pi = Morphism::new(
                &a4,
                &a2,
                vec![a2.basis_vec(0), a2.basis_vec(1), a2.zero(), a2.zero()],
            )
            .unwrap();
            let rep = transitivity_exact(&k, &a4, &a2, &iota, &pi, &m).unwrap();
            assert!(rep.all_exact(), "t4 tower: {:?}", rep.exact);

            // k → k[s,t]/(s,t)² → k[s]/s²
            let st = fixtures::square_zero_two(ring);
            let iota = Morphism::from_base_field(&k, &st);
            let pi = Morphism::new(
                &st,
                &a2,
                vec![a2.basis_vec(0), a2.basis_vec(1), a2.zero()],
            )
            .unwrap();
            let rep = transitivity_exact(&k, &st, &a2, &iota, &pi, &m).unwrap();
            assert!(rep.all_exact(), "(s,t)² tower: {:?}", rep.exact);
        }
    }

    #[test]
    fn quotient_examples() {
        let ring = f3();
        // k[t]/t³ / (t²) = k[t]/t²
        let a = fixtures::truncated_poly(ring, 3);
        let (q, proj) = quotient_by_ideal(&a, &[a.basis_vec(2)]).unwrap();
        assert_eq!(q.dim(), 2);
        let t_img = &proj[1];
        assert_eq!(t_img.len(), 2);
        // k[t]/t³ / (t) = k
        let (q, _) = quotient_by_ideal(&a, &[a.basis_vec(1)]).unwrap();
        assert_eq!(q.dim(), 1);
    }
}
