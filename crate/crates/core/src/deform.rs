//! Deformations of graded Lie algebras over Artin local bases: the
//! tautological deformation η, infinitesimal classification, obstruction
//! classes, the miniversal base induction, and deformations of graded Lie
//! algebra representations.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::artin::{self, ArtinAlgebra, ArtinError, Morphism, SmallExtension};
use crate::coeff::{self, CoeffError, ModMatrix};
use crate::cohom::{
    self, cochain_space, cohomology, cup_product, differential, solve_coboundary, Cochain,
    CohomError, Cohomology, ModuleData,
};
use crate::lie::{GradedLieAlgebra, GradedLieHom, LieError};

#[derive(Debug, Error)]
pub enum DeformError {
    #[error("base algebra is not square-zero")]
    NotSquareZero,
    #[error("bracket does not reduce to the special fiber")]
    NotReducing,
    #[error("Jacobi identity fails on basis triple ({0}, {1}, {2})")]
    JacobiFailure(usize, usize, usize),
    #[error("supplied cochain is not closed")]
    NotClosed,
    #[error("deformation data mismatch: {0}")]
    Shape(String),
    #[error("enumeration budget exceeded: needs {0} candidates")]
    BudgetExceeded(u128),
    #[error("extension system inconsistent")]
    ExtensionInconsistent,
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Cohom(#[from] CohomError),
    #[error(transparent)]
    Artin(#[from] ArtinError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// Element of L̄ ⊗ A: one A-coordinate row per Lie basis index.
pub type TensorElem = Vec<Vec<u64>>;

/// A graded Lie algebra over an Artin local base: the module L̄ ⊗ A with an
/// A-bilinear alternating bracket reducing to L̄'s modulo the maximal ideal.
#[derive(Clone)]
pub struct LieOverBase {
    base: ArtinAlgebra,
    lie: GradedLieAlgebra,
    /// bracket on basis pairs i < j of L̄, as L̄ ⊗ A elements
    table: BTreeMap<(usize, usize), TensorElem>,
}

impl LieOverBase {
    /// The trivial deformation L̄ ⊗ A.
    pub fn trivial(lie: &GradedLieAlgebra, base: &ArtinAlgebra) -> Self {
        let mut out = LieOverBase {
            base: base.clone(),
            lie: lie.clone(),
            table: BTreeMap::new(),
        };
        for i in 0..lie.dim() {
            for j in (i + 1)..lie.dim() {
                let br = lie.bracket_basis(i, j).value;
                if br.is_zero() {
                    continue;
                }
                let mut e = out.zero_elem();
                for (w, c) in br.terms() {
                    e[w][0] = c;
                }
                out.table.insert((i, j), e);
            }
        }
        out
    }

    /// Trivial deformation perturbed by Σ γ ⊗ a over the given family;
    /// each γ is a grade-0 2-cochain and each a lies in the maximal ideal.
    pub fn from_cochain_family(
        lie: &GradedLieAlgebra,
        base: &ArtinAlgebra,
        family: &[(Vec<u64>, Cochain)],
    ) -> Result<Self, DeformError> {
        let ring = base.ring();
        let mut out = LieOverBase::trivial(lie, base);
        for (a_elem, gamma) in family {
            if a_elem.len() != base.dim() || a_elem[0] != 0 {
                return Err(DeformError::Shape(
                    "perturbation coefficient must lie in the maximal ideal".into(),
                ));
            }
            if gamma.q != 2 || gamma.m != 0 {
                return Err(DeformError::Shape(
                    "perturbation must be a grade-0 2-cochain".into(),
                ));
            }
            for (tuple, val) in gamma.values() {
                let (i, j) = (tuple[0], tuple[1]);
                let entry = out
                    .table
                    .entry((i, j))
                    .or_insert_with(|| vec![vec![0u64; base.dim()]; lie.dim()]);
                for (w, c) in val.terms() {
                    for (slot, &ac) in entry[w].iter_mut().zip(a_elem.iter()) {
                        *slot = ring.add(*slot, ring.mul(c, ac));
                    }
                }
            }
        }
        out.prune();
        Ok(out)
    }

    /// Rebuild from a full bracket table on pairs i < j (including the
    /// part lifted from L̄); validates the result.
    pub(crate) fn from_full_table(
        lie: &GradedLieAlgebra,
        base: &ArtinAlgebra,
        table: BTreeMap<(usize, usize), TensorElem>,
    ) -> Result<Self, DeformError> {
        let mut out = LieOverBase {
            base: base.clone(),
            lie: lie.clone(),
            table,
        };
        out.prune();
        out.validate()?;
        Ok(out)
    }

    fn prune(&mut self) {
        self.table
            .retain(|_, e| e.iter().any(|row| row.iter().any(|&c| c != 0)));
    }

    pub fn base(&self) -> &ArtinAlgebra {
        &self.base
    }

    pub fn lie(&self) -> &GradedLieAlgebra {
        &self.lie
    }

    pub fn zero_elem(&self) -> TensorElem {
        vec![vec![0u64; self.base.dim()]; self.lie.dim()]
    }

    /// e_i ⊗ 1 as a tensor element.
    pub fn basis_elem(&self, i: usize) -> TensorElem {
        let mut e = self.zero_elem();
        e[i][0] = 1;
        e
    }

    pub fn add_elem(&self, x: &TensorElem, y: &TensorElem) -> TensorElem {
        x.iter()
            .zip(y)
            .map(|(r, s)| self.base.add(r, s))
            .collect()
    }

    pub fn sub_elem(&self, x: &TensorElem, y: &TensorElem) -> TensorElem {
        x.iter()
            .zip(y)
            .map(|(r, s)| self.base.sub(r, s))
            .collect()
    }

    /// Scale by an element of A: x ⊗ a ↦ x ⊗ (a·c).
    pub fn scale_elem(&self, c: &[u64], x: &TensorElem) -> TensorElem {
        x.iter().map(|r| self.base.mul(r, c)).collect()
    }

    pub fn is_zero_elem(&self, x: &TensorElem) -> bool {
        x.iter().all(|r| r.iter().all(|&c| c == 0))
    }

    /// Bracket of basis elements (e_i ⊗ 1, e_j ⊗ 1), any order.
    pub fn bracket_basis(&self, i: usize, j: usize) -> TensorElem {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => self.zero_elem(),
            Less => self
                .table
                .get(&(i, j))
                .cloned()
                .unwrap_or_else(|| self.zero_elem()),
            Greater => {
                let e = self.bracket_basis(j, i);
                let ring = self.base.ring();
                e.iter()
                    .map(|r| r.iter().map(|&c| ring.neg(c)).collect())
                    .collect()
            }
        }
    }

    /// A-bilinear bracket of tensor elements.
    pub fn bracket(&self, x: &TensorElem, y: &TensorElem) -> TensorElem {
        let mut out = self.zero_elem();
        for i in 0..self.lie.dim() {
            if x[i].iter().all(|&c| c == 0) {
                continue;
            }
            for j in 0..self.lie.dim() {
                if i == j || y[j].iter().all(|&c| c == 0) {
                    continue;
                }
                let coeff = self.base.mul(&x[i], &y[j]);
                if coeff.iter().all(|&c| c == 0) {
                    continue;
                }
                let br = self.bracket_basis(i, j);
                let scaled = self.scale_elem(&coeff, &br);
                out = self.add_elem(&out, &scaled);
            }
        }
        out
    }

    /// Reduction of a tensor element modulo the maximal ideal, as an
    /// element of L̄.
    pub fn reduce_elem(&self, x: &TensorElem) -> crate::lie::LieElement {
        self.lie
            .from_terms(x.iter().enumerate().filter_map(|(w, r)| {
                if r[0] != 0 {
                    Some((w, r[0]))
                } else {
                    None
                }
            }))
    }

    /// Check grading, reduction to L̄, and the Jacobi identity.
    pub fn validate(&self) -> Result<(), DeformError> {
        let n = self.lie.truncation();
        for (&(i, j), e) in &self.table {
            let d = self.lie.basis_degree(i) + self.lie.basis_degree(j);
            for (w, row) in e.iter().enumerate() {
                if row.iter().any(|&c| c != 0) && self.lie.basis_degree(w) != d {
                    return Err(DeformError::Shape(format!(
                        "bracket ({i},{j}) has a component off degree {d}"
                    )));
                }
            }
            if d > n && e.iter().any(|row| row.iter().any(|&c| c != 0)) {
                return Err(DeformError::Shape(format!(
                    "bracket ({i},{j}) exceeds the truncation"
                )));
            }
            let reduced = self.reduce_elem(e);
            if reduced != self.lie.bracket_basis(i, j).value {
                return Err(DeformError::NotReducing);
            }
        }
        // reduction must also match where the table has no entry
        for i in 0..self.lie.dim() {
            for j in (i + 1)..self.lie.dim() {
                if !self.table.contains_key(&(i, j))
                    && !self.lie.bracket_basis(i, j).value.is_zero()
                {
                    return Err(DeformError::NotReducing);
                }
            }
        }
        for i in 0..self.lie.dim() {
            for j in (i + 1)..self.lie.dim() {
                for k in (j + 1)..self.lie.dim() {
                    let total = self.lie.basis_degree(i)
                        + self.lie.basis_degree(j)
                        + self.lie.basis_degree(k);
                    if total > n {
                        continue;
                    }
                    let (x, y, z) =
                        (self.basis_elem(i), self.basis_elem(j), self.basis_elem(k));
                    let jac = self.add_elem(
                        &self.add_elem(
                            &self.bracket(&self.bracket(&x, &y), &z),
                            &self.bracket(&self.bracket(&y, &z), &x),
                        ),
                        &self.bracket(&self.bracket(&z, &x), &y),
                    );
                    if !self.is_zero_elem(&jac) {
                        return Err(DeformError::JacobiFailure(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }

    /// The deviation from the trivial deformation, decomposed over the
    /// maximal-ideal basis of A: one grade-0 2-cochain per index 1..dim A.
    pub fn deformation_cochains(&self) -> Vec<Cochain> {
        let mut out: Vec<Cochain> = (1..self.base.dim())
            .map(|_| Cochain::zero(2, 0))
            .collect();
        for (&(i, j), e) in &self.table {
            for t in 1..self.base.dim() {
                let terms: Vec<(usize, u64)> = e
                    .iter()
                    .enumerate()
                    .filter_map(|(w, r)| if r[t] != 0 { Some((w, r[t])) } else { None })
                    .collect();
                if !terms.is_empty() {
                    out[t - 1].set(vec![i, j], self.lie.from_terms(terms));
                }
            }
        }
        out
    }

    /// Structural equality over the same base and fiber.
    pub fn same_as(&self, other: &LieOverBase) -> bool {
        if self.base.id() != other.base.id() || self.lie.id() != other.lie.id() {
            return false;
        }
        for i in 0..self.lie.dim() {
            for j in (i + 1)..self.lie.dim() {
                if self.bracket_basis(i, j) != other.bracket_basis(i, j) {
                    return false;
                }
            }
        }
        true
    }
}

pub fn is_square_zero(a: &ArtinAlgebra) -> bool {
    for i in 1..a.dim() {
        for j in i..a.dim() {
            if a
                .mul(&a.basis_vec(i), &a.basis_vec(j))
                .iter()
                .any(|&c| c != 0)
            {
                return false;
            }
        }
    }
    true
}

/// One stage of the miniversal induction: the base D_k together with the
/// deformation η_k over it, and the chosen H²(0) representatives μ.
pub struct DeformationStep {
    pub k: usize,
    pub base: ArtinAlgebra,
    pub eta: LieOverBase,
    pub mu: Vec<Cochain>,
}

/// The tautological deformation η over D₁ = k ⊕ H²(L̄,L̄)(0)′ with
/// [l₁ ⊗ 1, l₂ ⊗ 1] = [l₁,l₂] ⊗ 1 + Σ_α μ_α(l₁,l₂) ⊗ a_α. Passing `None`
/// uses the computed representatives; an explicit μ family must be closed.
pub fn eta_deformation(
    lbar: &GradedLieAlgebra,
    mu: Option<Vec<Cochain>>,
) -> Result<DeformationStep, DeformError> {
    let ring = lbar.ring();
    let md = ModuleData::adjoint(lbar);
    let h2 = cohomology(lbar, &md, 2, 0)?;
    let mu = match mu {
        None => h2.representatives.clone(),
        Some(given) => {
            if given.len() != h2.dim {
                return Err(DeformError::Shape(format!(
                    "expected {} cocycles, got {}",
                    h2.dim,
                    given.len()
                )));
            }
            for c in &given {
                if !differential(lbar, &md, c).is_zero() {
                    return Err(DeformError::NotClosed);
                }
            }
            given
        }
    };
    let labels: Vec<String> = (1..=mu.len()).map(|i| format!("a{i}")).collect();
    let label_refs: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
    let base = artin::fixtures::square_zero(ring, &label_refs);
    let family: Vec<(Vec<u64>, Cochain)> = mu
        .iter()
        .enumerate()
        .map(|(alpha, c)| (base.basis_vec(alpha + 1), c.clone()))
        .collect();
    let eta = LieOverBase::from_cochain_family(lbar, &base, &family)?;
    eta.validate()?;
    Ok(DeformationStep {
        k: 1,
        base,
        eta,
        mu,
    })
}

/// Transport a deformation along a base morphism φ : A → A′.
pub fn push_forward(
    l: &LieOverBase,
    phi: &Morphism,
    target: &ArtinAlgebra,
) -> Result<LieOverBase, DeformError> {
    if phi.source_id() != l.base.id() || phi.target_id() != target.id() {
        return Err(DeformError::Shape("base morphism endpoints".into()));
    }
    let mut out = LieOverBase {
        base: target.clone(),
        lie: l.lie.clone(),
        table: BTreeMap::new(),
    };
    for (&(i, j), e) in &l.table {
        let mapped: TensorElem = e.iter().map(|row| phi.apply(target, row)).collect();
        if mapped.iter().any(|r| r.iter().any(|&c| c != 0)) {
            out.table.insert((i, j), mapped);
        }
    }
    Ok(out)
}

/// Result of classifying a square-zero deformation against η.
pub struct InfinitesimalClass {
    /// base morphism D₁ → A inducing the deformation
    pub morphism: Morphism,
    /// whether the morphism is pinned by the linear system
    pub unique: bool,
    /// grade-0 1-cochains, one per maximal-ideal direction of A, giving the
    /// isomorphism between the push-forward of η and the input
    pub witness: Vec<Cochain>,
}

/// Classify a deformation over a square-zero base A by a morphism D₁ → A:
/// decompose each deviation cochain as Σ_α x_α μ_α + δβ.
pub fn classify_infinitesimal(
    l: &LieOverBase,
    step1: &DeformationStep,
) -> Result<InfinitesimalClass, DeformError> {
    if !is_square_zero(&l.base) {
        return Err(DeformError::NotSquareZero);
    }
    let lbar = &l.lie;
    let ring = lbar.ring();
    let md = ModuleData::adjoint(lbar);
    let c2 = cochain_space(lbar, &md, 2, 0);
    let c1 = cochain_space(lbar, &md, 1, 0);
    let d1 = cohom::differential_matrix(lbar, &md, &c1, &c2)?;
    let d = step1.mu.len();
    // columns: μ_1..μ_d then δ of each C¹ coordinate
    let ncols = d + c1.dim();
    let mut mat = ModMatrix::zero(ring, c2.dim(), ncols);
    for (alpha, m_c) in step1.mu.iter().enumerate() {
        let v = c2.to_vec(m_c)?;
        for (r, &c) in v.iter().enumerate() {
            if c != 0 {
                mat.set(r, alpha, c);
            }
        }
    }
    for col in 0..c1.dim() {
        for r in 0..c2.dim() {
            let v = d1.get(r, col);
            if v != 0 {
                mat.set(r, d + col, v);
            }
        }
    }
    let kernel = coeff::kernel_basis(&mat)?;
    let unique = kernel.iter().all(|v| v[..d].iter().all(|&c| c == 0));
    let gammas = l.deformation_cochains();
    let mut x = vec![vec![0u64; gammas.len()]; d]; // x[alpha][j]
    let mut witness = Vec::with_capacity(gammas.len());
    for (j, gamma) in gammas.iter().enumerate() {
        let rhs = c2.to_vec(gamma)?;
        let sol = coeff::solve(&mat, &rhs)?.ok_or(DeformError::NotClosed)?;
        for alpha in 0..d {
            x[alpha][j] = sol[alpha];
        }
        witness.push(c1.from_vec(&md, &sol[d..]));
    }
    let mut images = vec![l.base.unit()];
    for alpha in 0..d {
        let mut img = l.base.zero();
        for (j, &c) in x[alpha].iter().enumerate() {
            if c != 0 {
                img = l
                    .base
                    .add(&img, &l.base.scale(c, &l.base.basis_vec(j + 1)));
            }
        }
        images.push(img);
    }
    let morphism = Morphism::new(&step1.base, &l.base, images)?;
    Ok(InfinitesimalClass {
        morphism,
        unique,
        witness,
    })
}

/// Find an isomorphism between two deformations over the same square-zero
/// base that reduces to the identity: grade-0 1-cochains n_j per
/// maximal-ideal direction with δn_j = γ¹_j − γ²_j.
pub fn find_isomorphism(
    l1: &LieOverBase,
    l2: &LieOverBase,
) -> Result<Option<Vec<Cochain>>, DeformError> {
    if l1.base.id() != l2.base.id() || l1.lie.id() != l2.lie.id() {
        return Err(DeformError::Shape("deformations over different data".into()));
    }
    if !is_square_zero(&l1.base) {
        return Err(DeformError::NotSquareZero);
    }
    let md = ModuleData::adjoint(&l1.lie);
    let g1 = l1.deformation_cochains();
    let g2 = l2.deformation_cochains();
    let mut out = Vec::with_capacity(g1.len());
    for (a, b) in g1.iter().zip(g2.iter()) {
        let diff = a.sub(&md, b);
        match solve_coboundary(&l1.lie, &md, &diff)? {
            Some(n) => out.push(n),
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

/// Obstruction of a deformation against a small extension B → A: one
/// grade-0 3-cochain per kernel generator; the deformation extends iff all
/// classes vanish, and then a lift is produced.
pub struct LieObstruction {
    pub classes: Vec<Cochain>,
    pub vanishes: bool,
    pub lift: Option<LieOverBase>,
}

pub fn obstruction_lie(
    l: &LieOverBase,
    ext: &SmallExtension,
    total: &ArtinAlgebra,
) -> Result<LieObstruction, DeformError> {
    if ext.base_id != l.base.id() || ext.total.id() != total.id() {
        return Err(DeformError::Shape("extension endpoints".into()));
    }
    let ring = total.ring();
    let lbar = &l.lie;
    let md = ModuleData::adjoint(lbar);
    let section = artin::linear_section(&l.base, ext, total)?;
    // lift the bracket table coordinate-wise through the section
    let mut lifted = LieOverBase {
        base: total.clone(),
        lie: lbar.clone(),
        table: BTreeMap::new(),
    };
    for (&(i, j), e) in &l.table {
        let mapped: TensorElem = e
            .iter()
            .map(|row| {
                let mut acc = total.zero();
                for (ac, &c) in row.iter().enumerate() {
                    if c != 0 {
                        acc = total.add(&acc, &total.scale(c, &section[ac]));
                    }
                }
                acc
            })
            .collect();
        lifted.table.insert((i, j), mapped);
    }
    // Jacobiator, decomposed over the kernel basis
    let mut classes: Vec<Cochain> = ext.kernel.iter().map(|_| Cochain::zero(3, 0)).collect();
    let n = lbar.truncation();
    for i in 0..lbar.dim() {
        for j in (i + 1)..lbar.dim() {
            for k in (j + 1)..lbar.dim() {
                let total_deg =
                    lbar.basis_degree(i) + lbar.basis_degree(j) + lbar.basis_degree(k);
                if total_deg > n {
                    continue;
                }
                let (x, y, z) = (
                    lifted.basis_elem(i),
                    lifted.basis_elem(j),
                    lifted.basis_elem(k),
                );
                let jac = lifted.add_elem(
                    &lifted.add_elem(
                        &lifted.bracket(&lifted.bracket(&x, &y), &z),
                        &lifted.bracket(&lifted.bracket(&y, &z), &x),
                    ),
                    &lifted.bracket(&lifted.bracket(&z, &x), &y),
                );
                if lifted.is_zero_elem(&jac) {
                    continue;
                }
                // each Lie coordinate row must lie in the kernel span
                let mut per_gen: Vec<Vec<(usize, u64)>> =
                    vec![Vec::new(); ext.kernel.len()];
                for (w, row) in jac.iter().enumerate() {
                    if row.iter().all(|&c| c == 0) {
                        continue;
                    }
                    let coords = artin::in_kernel_coords(ring, &ext.kernel, row)?
                        .ok_or(DeformError::JacobiFailure(i, j, k))?;
                    for (s, &c) in coords.iter().enumerate() {
                        if c != 0 {
                            per_gen[s].push((w, c));
                        }
                    }
                }
                for (s, terms) in per_gen.into_iter().enumerate() {
                    if !terms.is_empty() {
                        classes[s].set(vec![i, j, k], lbar.from_terms(terms));
                    }
                }
            }
        }
    }
    for c in &classes {
        if !differential(lbar, &md, c).is_zero() {
            return Err(DeformError::NotClosed);
        }
    }
    // solve δβ_s = J_s per kernel generator; the corrected lift is
    // table + Σ β_s ⊗ κ_s
    let mut betas = Vec::with_capacity(classes.len());
    let mut vanishes = true;
    for c in &classes {
        match solve_coboundary(lbar, &md, c)? {
            Some(b) => betas.push(b),
            None => {
                vanishes = false;
                break;
            }
        }
    }
    let lift = if vanishes {
        let mut corrected = lifted;
        for (beta, kappa) in betas.iter().zip(ext.kernel.iter()) {
            for (tuple, val) in beta.values() {
                let (i, j) = (tuple[0], tuple[1]);
                let entry = corrected
                    .table
                    .entry((i, j))
                    .or_insert_with(|| vec![vec![0u64; total.dim()]; lbar.dim()]);
                for (w, c) in val.terms() {
                    let scaled = total.scale(c, kappa);
                    entry[w] = total.add(&entry[w], &scaled);
                }
            }
        }
        corrected.prune();
        corrected.validate()?;
        Some(corrected)
    } else {
        None
    };
    Ok(LieObstruction {
        classes,
        vanishes,
        lift,
    })
}

/// One step of the miniversal induction: build the universal small
/// extension of D_k, pair the obstruction with H³(0), quotient by the image
/// of the dual map, and extend η.
pub fn miniversal_step(step: &DeformationStep) -> Result<DeformationStep, DeformError> {
    let lbar = &step.eta.lie;
    let md = ModuleData::adjoint(lbar);
    let univ = artin::universal_small_extension(&step.base)?;
    let c_alg = univ.extension.total.clone();
    let ob = obstruction_lie(&step.eta, &univ.extension, &c_alg)?;
    let h3 = cohomology(lbar, &md, 3, 0)?;
    // Φ_k : Ext^inf(D_k,k) → H³(0), one row per kernel generator
    let mut phi_rows: Vec<Vec<u64>> = Vec::with_capacity(ob.classes.len());
    for c in &ob.classes {
        let coords = h3
            .class_coordinates(c)?
            .ok_or(DeformError::ExtensionInconsistent)?;
        phi_rows.push(coords);
    }
    // ideal generators: the image of the dual map inside the kernel span
    let na = step.base.dim();
    let mut gens: Vec<Vec<u64>> = Vec::new();
    for gamma in 0..h3.dim {
        let mut v = c_alg.zero();
        for (beta, row) in phi_rows.iter().enumerate() {
            v[na + beta] = row[gamma];
        }
        if v.iter().any(|&c| c != 0) {
            gens.push(v);
        }
    }
    let (next_base, proj_rows) = artin::quotient_by_ideal(&c_alg, &gens)?;
    // the quotient projection must itself be an algebra morphism
    Morphism::new(&c_alg, &next_base, proj_rows)?;
    // the induced projection to D_k and the new kernel
    let to_prev_images: Vec<Vec<u64>> = (0..next_base.dim())
        .map(|i| {
            let lbl = next_base.labels()[i].clone();
            let old = c_alg
                .index_of(&lbl)
                .expect("quotient basis labels survive");
            univ.extension.proj.images()[old].clone()
        })
        .collect();
    let to_prev = Morphism::new(&next_base, &step.base, to_prev_images)?;
    let kernel: Vec<Vec<u64>> = (na.min(next_base.dim())..next_base.dim())
        .map(|i| next_base.basis_vec(i))
        .collect();
    let ext2 = SmallExtension {
        total: next_base.clone(),
        base_id: step.base.id(),
        proj: to_prev.clone(),
        kernel,
    };
    ext2.validate(&next_base)?;
    let ob2 = obstruction_lie(&step.eta, &ext2, &next_base)?;
    let eta_next = ob2.lift.ok_or(DeformError::ExtensionInconsistent)?;
    // reduction check: pushing back down must recover η_k
    let back = push_forward(&eta_next, &to_prev, &step.base)?;
    if !back.same_as(&step.eta) {
        return Err(DeformError::ExtensionInconsistent);
    }
    Ok(DeformationStep {
        k: step.k + 1,
        base: next_base,
        eta: eta_next,
        mu: step.mu.clone(),
    })
}

// ---------------------------------------------------------------------------
// representation deformations
// ---------------------------------------------------------------------------

/// A graded lift of ρ̄ : G → L̄ over a base A: an image in L̄ ⊗ A per basis
/// element of G.
#[derive(Clone, Debug)]
pub struct RepLift {
    pub base_id: u64,
    /// images[g basis] = L̄-dim × A-dim coordinate matrix
    pub images: Vec<TensorElem>,
}

impl RepLift {
    /// ρ̄ ⊗ 1 over A.
    pub fn from_reduction(
        g: &GradedLieAlgebra,
        lbar: &GradedLieAlgebra,
        rho: &GradedLieHom,
        a: &ArtinAlgebra,
    ) -> Self {
        let images = (0..g.dim())
            .map(|b| {
                let mut e = vec![vec![0u64; a.dim()]; lbar.dim()];
                for (w, c) in rho.image_of_basis(b).terms() {
                    e[w][0] = c;
                }
                e
            })
            .collect();
        RepLift {
            base_id: a.id(),
            images,
        }
    }

    /// Apply the lift linearly to an element of G, landing in L̄ ⊗ A
    /// (trivial Lie structure on the target).
    pub fn apply(
        &self,
        lbar: &GradedLieAlgebra,
        a: &ArtinAlgebra,
        x: &crate::lie::LieElement,
    ) -> TensorElem {
        let mut out = vec![vec![0u64; a.dim()]; lbar.dim()];
        for (b, c) in x.terms() {
            for (w, row) in self.images[b].iter().enumerate() {
                let scaled = a.scale(c, row);
                out[w] = a.add(&out[w], &scaled);
            }
        }
        out
    }
}

/// Check that a lift is a graded homomorphism G → L̄ ⊗ A reducing to ρ̄.
pub fn check_rep_lift(
    g: &GradedLieAlgebra,
    lbar: &GradedLieAlgebra,
    rho: &GradedLieHom,
    a: &ArtinAlgebra,
    lift: &RepLift,
) -> Result<(), DeformError> {
    if lift.base_id != a.id() || lift.images.len() != g.dim() {
        return Err(DeformError::Shape("lift shape".into()));
    }
    let target = LieOverBase::trivial(lbar, a);
    for (b, e) in lift.images.iter().enumerate() {
        let d = g.basis_degree(b);
        for (w, row) in e.iter().enumerate() {
            if row.iter().any(|&c| c != 0) && lbar.basis_degree(w) != d {
                return Err(DeformError::Shape(format!(
                    "image of basis {b} is not homogeneous of degree {d}"
                )));
            }
        }
        let reduced = target.reduce_elem(e);
        if &reduced != rho.image_of_basis(b) {
            return Err(DeformError::NotReducing);
        }
    }
    for i in 0..g.dim() {
        for j in (i + 1)..g.dim() {
            let lhs = lift.apply(lbar, a, &g.bracket_basis(i, j).value);
            let rhs = target.bracket(&lift.images[i], &lift.images[j]);
            if lhs != rhs {
                return Err(DeformError::Shape(format!(
                    "bracket compatibility fails on ({i},{j})"
                )));
            }
        }
    }
    Ok(())
}

/// Tangent space of the representation deformation functor:
/// H¹(G, Ad∘ρ̄)(0).
pub fn tangent_space_rep(
    g: &GradedLieAlgebra,
    lbar: &GradedLieAlgebra,
    rho: &GradedLieHom,
) -> Result<Cohomology, DeformError> {
    let md = ModuleData::via_hom(g, lbar, rho.clone())?;
    Ok(cohomology(g, &md, 1, 0)?)
}

/// Obstruction of a representation lift against a small extension
/// A₁ → A₀: one grade-0 2-cochain in C²(G, Ad∘ρ̄) per kernel generator.
pub struct RepObstruction {
    pub classes: Vec<Cochain>,
    pub vanishes: bool,
    pub lift: Option<RepLift>,
}

pub fn obstruction_rep(
    g: &GradedLieAlgebra,
    lbar: &GradedLieAlgebra,
    rho: &GradedLieHom,
    rho0: &RepLift,
    ext: &SmallExtension,
    total: &ArtinAlgebra,
) -> Result<RepObstruction, DeformError> {
    let ring = total.ring();
    let md = ModuleData::via_hom(g, lbar, rho.clone())?;
    // the base of ρ₀ is the extension's base
    let a0_dim = ext.proj.images()[0].len();
    if rho0.images.iter().any(|e| e[0].len() != a0_dim) {
        return Err(DeformError::Shape("lift base mismatch".into()));
    }
    // a linear section of the extension, applied coordinate-wise
    let section = {
        // rebuild the base algebra dimension from the projection images
        let mut images = Vec::with_capacity(a0_dim);
        let mut pm = ModMatrix::zero(ring, a0_dim, total.dim());
        for (col, img) in ext.proj.images().iter().enumerate() {
            for (r, &v) in img.iter().enumerate() {
                if v != 0 {
                    pm.set(r, col, v);
                }
            }
        }
        for i in 0..a0_dim {
            let mut e = vec![0u64; a0_dim];
            e[i] = 1;
            let sol = coeff::solve(&pm, &e)?
                .ok_or_else(|| DeformError::Shape("extension not surjective".into()))?;
            images.push(sol);
        }
        images[0] = total.unit();
        images
    };
    let lift_elem = |e: &TensorElem| -> TensorElem {
        e.iter()
            .map(|row| {
                let mut acc = total.zero();
                for (ac, &c) in row.iter().enumerate() {
                    if c != 0 {
                        acc = total.add(&acc, &total.scale(c, &section[ac]));
                    }
                }
                acc
            })
            .collect()
    };
    let sigma = RepLift {
        base_id: total.id(),
        images: rho0.images.iter().map(lift_elem).collect(),
    };
    let target1 = LieOverBase::trivial(lbar, total);
    // defect c(x,y) = σ([x,y]) − [σx, σy], decomposed over the kernel
    let mut classes: Vec<Cochain> = ext.kernel.iter().map(|_| Cochain::zero(2, 0)).collect();
    for i in 0..g.dim() {
        for j in (i + 1)..g.dim() {
            let lhs = sigma.apply(lbar, total, &g.bracket_basis(i, j).value);
            let rhs = target1.bracket(&sigma.images[i], &sigma.images[j]);
            let defect = target1.sub_elem(&lhs, &rhs);
            if target1.is_zero_elem(&defect) {
                continue;
            }
            let mut per_gen: Vec<Vec<(usize, u64)>> = vec![Vec::new(); ext.kernel.len()];
            for (w, row) in defect.iter().enumerate() {
                if row.iter().all(|&c| c == 0) {
                    continue;
                }
                let coords = artin::in_kernel_coords(ring, &ext.kernel, row)?
                    .ok_or_else(|| DeformError::Shape("defect outside the kernel".into()))?;
                for (s, &c) in coords.iter().enumerate() {
                    if c != 0 {
                        per_gen[s].push((w, c));
                    }
                }
            }
            for (s, terms) in per_gen.into_iter().enumerate() {
                if !terms.is_empty() {
                    classes[s].set(vec![i, j], lbar.from_terms(terms));
                }
            }
        }
    }
    for c in &classes {
        if !differential(g, &md, c).is_zero() {
            return Err(DeformError::NotClosed);
        }
    }
    let mut betas = Vec::with_capacity(classes.len());
    let mut vanishes = true;
    for c in &classes {
        match solve_coboundary(g, &md, c)? {
            Some(b) => betas.push(b),
            None => {
                vanishes = false;
                break;
            }
        }
    }
    let lift = if vanishes {
        let mut images = sigma.images.clone();
        for (beta, kappa) in betas.iter().zip(ext.kernel.iter()) {
            for (tuple, val) in beta.values() {
                let b = tuple[0];
                for (w, c) in val.terms() {
                    let scaled = total.scale(c, kappa);
                    images[b][w] = total.add(&images[b][w], &scaled);
                }
            }
        }
        let candidate = RepLift {
            base_id: total.id(),
            images,
        };
        check_rep_lift(g, lbar, rho, total, &candidate)?;
        Some(candidate)
    } else {
        None
    };
    Ok(RepObstruction {
        classes,
        vanishes,
        lift,
    })
}

/// Exhaustively enumerate graded lifts of ρ̄ over A (trivial target
/// structure), refusing when the candidate count exceeds the budget.
pub fn enumerate_lifts(
    g: &GradedLieAlgebra,
    lbar: &GradedLieAlgebra,
    rho: &GradedLieHom,
    a: &ArtinAlgebra,
    budget: u128,
) -> Result<Vec<RepLift>, DeformError> {
    let ring = a.ring();
    let l = ring.prime() as u128;
    // free parameters: (maximal-ideal direction, G basis, same-degree L̄ basis)
    let mut slots: Vec<(usize, usize, usize)> = Vec::new();
    for t in 1..a.dim() {
        for b in 0..g.dim() {
            for w in lbar.degree_indices(g.basis_degree(b)) {
                slots.push((t, b, w));
            }
        }
    }
    if !ring.is_field() {
        return Err(DeformError::Coeff(CoeffError::RequiresField(ring.power())));
    }
    let mut count: u128 = 1;
    for _ in &slots {
        count = count.saturating_mul(l);
        if count > budget {
            return Err(DeformError::BudgetExceeded(count));
        }
    }
    let base_lift = RepLift::from_reduction(g, lbar, rho, a);
    let mut out = Vec::new();
    let mut assignment = vec![0u64; slots.len()];
    loop {
        let mut candidate = base_lift.clone();
        for (&(t, b, w), &c) in slots.iter().zip(assignment.iter()) {
            candidate.images[b][w][t] = c;
        }
        if check_rep_lift(g, lbar, rho, a, &candidate).is_ok() {
            out.push(candidate);
        }
        // increment in lex order
        let mut pos = slots.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            assignment[pos] += 1;
            if assignment[pos] < ring.prime() as u64 {
                break;
            }
            assignment[pos] = 0;
        }
    }
}

/// Quadratic presentation of the representation deformation ring:
/// Rank of the restriction map Z¹(L̄, L̄)(0) → Z¹(G, Ad∘ι)(0), γ ↦ γ∘ι,
/// for an embedding ι : G → L̄. The rank is reported without any
/// injectivity claim for the induced map on cohomology.
pub fn restriction_rank(
    g: &GradedLieAlgebra,
    lbar: &GradedLieAlgebra,
    incl: &GradedLieHom,
) -> Result<usize, DeformError> {
    let ring = lbar.ring();
    let md_l = ModuleData::adjoint(lbar);
    let md_g = ModuleData::via_hom(g, lbar, incl.clone())?;
    let dom = cochain_space(lbar, &md_l, 1, 0);
    let cod = cochain_space(g, &md_g, 1, 0);
    // columns: restriction of each coordinate cochain of C¹(L̄)(0)
    let mut mat = crate::coeff::ModMatrix::zero(ring, cod.dim(), dom.dim());
    for col in 0..dom.dim() {
        let mut v = vec![0u64; dom.dim()];
        v[col] = 1;
        let gamma = dom.from_vec(&md_l, &v);
        let mut restricted = Cochain::zero(1, 0);
        for i in 0..g.dim() {
            let mut out = lbar.zero();
            let img = incl.image_of_basis(i);
            for (w, c) in img.terms() {
                out = lbar.add(&out, &lbar.scale(c, &gamma.eval(&md_l, &[w])));
            }
            if !out.is_zero() {
                restricted.set(vec![i], out);
            }
        }
        for (row, &c) in cod.to_vec(&restricted)?.iter().enumerate() {
            mat.set(row, col, c);
        }
    }
    // restrict the domain to 1-cocycles
    let delta =
        cohom::differential_matrix(lbar, &md_l, &dom, &cochain_space(lbar, &md_l, 2, 0))?;
    let z1 = crate::coeff::kernel_basis(&delta)?;
    let mut restricted_cols = crate::coeff::ModMatrix::zero(ring, cod.dim(), z1.len());
    for (col, z) in z1.iter().enumerate() {
        for row in 0..cod.dim() {
            let mut acc = 0u64;
            for (t, &zc) in z.iter().enumerate() {
                acc = ring.add(acc, ring.mul(mat.get(row, t), zc));
            }
            restricted_cols.set(row, col, acc);
        }
    }
    Ok(crate::coeff::rank(&restricted_cols)?)
}

/// parameters dual to H¹(G, Ad∘ρ̄)(0), relations from the cup pairing into
/// H²(0). Over F_2 the relation extraction is unavailable.
pub struct QuadraticPresentation {
    pub params: usize,
    /// relations[γ] = Σ coeff·t_i t_j over pairs i ≤ j, one per H²(0) class
    pub relations: Option<Vec<Vec<((usize, usize), u64)>>>,
}

pub fn quadratic_presentation(
    g: &GradedLieAlgebra,
    lbar: &GradedLieAlgebra,
    rho: &GradedLieHom,
) -> Result<QuadraticPresentation, DeformError> {
    let ring = g.ring();
    let md = ModuleData::via_hom(g, lbar, rho.clone())?;
    let h1 = cohomology(g, &md, 1, 0)?;
    if ring.prime() == 2 {
        return Ok(QuadraticPresentation {
            params: h1.dim,
            relations: None,
        });
    }
    let h2 = cohomology(g, &md, 2, 0)?;
    let half = ring.inv(ring.reduce(2)).expect("2 is a unit for odd l");
    let mut relations: Vec<Vec<((usize, usize), u64)>> = vec![Vec::new(); h2.dim];
    for i in 0..h1.dim {
        for j in i..h1.dim {
            let cup = cup_product(&md, &h1.representatives[i], &h1.representatives[j])?;
            let coords = h2
                .class_coordinates(&cup)?
                .ok_or(DeformError::NotClosed)?;
            for (gamma, &c) in coords.iter().enumerate() {
                if c != 0 {
                    let coeff = if i == j { ring.mul(half, c) } else { c };
                    relations[gamma].push(((i, j), coeff));
                }
            }
        }
    }
    Ok(QuadraticPresentation {
        params: h1.dim,
        relations: Some(relations),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::artin::fixtures as afx;
    use crate::coeff::CoeffRing;
    use crate::lie::fixtures as lfx;

    fn f2() -> CoeffRing {
        CoeffRing::field(2).unwrap()
    }
    fn f3() -> CoeffRing {
        CoeffRing::field(3).unwrap()
    }

    /// e1, e2 in degree 1, e3 in degree 2, abelian.
    fn abelian3(ring: CoeffRing) -> GradedLieAlgebra {
        lfx::abelian(ring, 2, &[(1, "e1"), (1, "e2"), (2, "e3")])
    }

    /// Frozen fixture with a nonzero Lie obstruction over F_2.
    fn abelian5(ring: CoeffRing) -> GradedLieAlgebra {
        lfx::abelian(
            ring,
            3,
            &[(1, "e1"), (1, "e2"), (1, "e3"), (2, "z"), (3, "w")],
        )
    }

    /// Free nilpotent on x, y through degree 3, plus a central w in
    /// degree 2: a fixture with nonzero H²(0) and nonzero coboundaries.
    fn freenilp_plus_center(ring: CoeffRing) -> GradedLieAlgebra {
        GradedLieAlgebra::new(
            ring,
            3,
            &[
                (1, vec!["x".into(), "y".into()]),
                (2, vec!["z".into(), "w".into()]),
                (3, vec!["u".into(), "v".into()]),
            ],
            &[
                ("x".into(), "y".into(), vec![("z".into(), 1)]),
                ("x".into(), "z".into(), vec![("u".into(), 1)]),
                ("y".into(), "z".into(), vec![("v".into(), 1)]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn eta_trivial_when_h2_zero() {
        let lbar = lfx::abelian(f3(), 1, &[(1, "x"), (1, "y")]);
        let step = eta_deformation(&lbar, None).unwrap();
        assert_eq!(step.base.dim(), 1);
        assert!(step.eta.table.is_empty());
    }

    #[test]
    fn eta_heisenberg_direction() {
        for ring in [f2(), f3()] {
            let lbar = abelian3(ring);
            let step = eta_deformation(&lbar, None).unwrap();
            assert_eq!(step.base.dim(), 2);
            let br = step.eta.bracket_basis(0, 1);
            let e3 = lbar.index_of("e3").unwrap();
            assert_eq!(br[e3][1], 1, "[e1,e2] = e3 ⊗ a1");
        }
    }

    #[test]
    fn eta_mu_independence() {
        let ring = f3();
        let lbar = freenilp_plus_center(ring);
        let md = ModuleData::adjoint(&lbar);
        let step = eta_deformation(&lbar, None).unwrap();
        assert!(step.mu.len() >= 1);
        // perturb the first representative by a nonzero coboundary
        let mut psi = Cochain::zero(1, 0);
        let z = lbar.index_of("z").unwrap();
        psi.set(vec![z], lbar.element(&[("z", 1)]).unwrap());
        let dpsi = differential(&lbar, &md, &psi);
        assert!(!dpsi.is_zero(), "fixture must have nonzero coboundaries");
        let mut mu2 = step.mu.clone();
        mu2[0] = mu2[0].add(&md, &dpsi);
        let step2 = eta_deformation(&lbar, Some(mu2)).unwrap();
        // the two η are isomorphic over the common base
        let eta2_same_base = LieOverBase {
            base: step.base.clone(),
            lie: lbar.clone(),
            table: step2.eta.table.clone(),
        };
        let witness = find_isomorphism(&step.eta, &eta2_same_base)
            .unwrap()
            .expect("μ-independence witness");
        assert!(witness.iter().any(|w| !w.is_zero()));
    }

    #[test]
    fn classify_roundtrip_exhaustive() {
        let ring = f3();
        let lbar = abelian3(ring);
        let step = eta_deformation(&lbar, None).unwrap();
        let a = afx::square_zero_two(ring);
        for ca in 0..3u64 {
            for cb in 0..3u64 {
                let family = vec![
                    (a.scale(ca, &a.basis_vec(1)), step.mu[0].clone()),
                    (a.scale(cb, &a.basis_vec(2)), step.mu[0].clone()),
                ];
                let l = LieOverBase::from_cochain_family(&lbar, &a, &family).unwrap();
                l.validate().unwrap();
                let cls = classify_infinitesimal(&l, &step).unwrap();
                assert!(cls.unique);
                let pushed = push_forward(&step.eta, &cls.morphism, &a).unwrap();
                let iso = find_isomorphism(&l, &pushed).unwrap();
                assert!(iso.is_some(), "round trip for ({ca},{cb})");
            }
        }
    }

    #[test]
    fn obstruction_vanishing_extends() {
        for ring in [f2(), f3()] {
            let lbar = abelian3(ring);
            let step = eta_deformation(&lbar, None).unwrap();
            let a = afx::truncated_poly(ring, 2);
            let b = afx::truncated_poly(ring, 3);
            let l = LieOverBase::from_cochain_family(
                &lbar,
                &a,
                &[(a.basis_vec(1), step.mu[0].clone())],
            )
            .unwrap();
            let proj = Morphism::new(
                &b,
                &a,
                vec![a.basis_vec(0), a.basis_vec(1), a.zero()],
            )
            .unwrap();
            let ext = SmallExtension {
                total: b.clone(),
                base_id: a.id(),
                proj,
                kernel: vec![b.basis_vec(2)],
            };
            let ob = obstruction_lie(&l, &ext, &b).unwrap();
            assert!(ob.vanishes);
            assert!(ob.classes.iter().all(|c| c.is_zero()));
            let lift = ob.lift.unwrap();
            // reduction of the lift recovers l
            let back = push_forward(&lift, &ext.proj, &a).unwrap();
            assert!(back.same_as(&l));
        }
    }

    #[test]
    fn obstruction_abelian_trivial_deformation() {
        let ring = f2();
        let lbar = abelian5(ring);
        let a = afx::truncated_poly(ring, 2);
        let b = afx::truncated_poly(ring, 3);
        let l = LieOverBase::trivial(&lbar, &a);
        let proj = Morphism::new(&b, &a, vec![a.basis_vec(0), a.basis_vec(1), a.zero()])
            .unwrap();
        let ext = SmallExtension {
            total: b.clone(),
            base_id: a.id(),
            proj,
            kernel: vec![b.basis_vec(2)],
        };
        let ob = obstruction_lie(&l, &ext, &b).unwrap();
        assert!(ob.vanishes);
    }

    #[test]
    fn obstruction_nonzero_frozen() {
        let ring = f2();
        let lbar = abelian5(ring);
        let a = afx::truncated_poly(ring, 2);
        let b = afx::truncated_poly(ring, 3);
        let mut gamma = Cochain::zero(2, 0);
        let (i1, i2, i3) = (
            lbar.index_of("e1").unwrap(),
            lbar.index_of("e2").unwrap(),
            lbar.index_of("e3").unwrap(),
        );
        let iz = lbar.index_of("z").unwrap();
        gamma.set(vec![i1, i2], lbar.element(&[("z", 1)]).unwrap());
        gamma.set(vec![i3, iz], lbar.element(&[("w", 1)]).unwrap());
        let l = LieOverBase::from_cochain_family(&lbar, &a, &[(a.basis_vec(1), gamma)])
            .unwrap();
        l.validate().unwrap();
        let proj = Morphism::new(&b, &a, vec![a.basis_vec(0), a.basis_vec(1), a.zero()])
            .unwrap();
        let ext = SmallExtension {
            total: b.clone(),
            base_id: a.id(),
            proj,
            kernel: vec![b.basis_vec(2)],
        };
        let ob = obstruction_lie(&l, &ext, &b).unwrap();
        assert!(!ob.vanishes);
        assert!(ob.lift.is_none());
        assert!(ob.classes.iter().any(|c| !c.is_zero()));
    }

    #[test]
    fn miniversal_abelian_two_steps() {
        let ring = f2();
        let lbar = abelian3(ring);
        let step1 = eta_deformation(&lbar, None).unwrap();
        let step2 = miniversal_step(&step1).unwrap();
        assert_eq!(step2.k, 2);
        // D₂ ≅ k[t]/t³: dimension 3 and a1² ≠ 0
        assert_eq!(step2.base.dim(), 3);
        let a1 = step2.base.basis_vec(1);
        assert!(step2.base.mul(&a1, &a1).iter().any(|&c| c != 0));
        step2.eta.validate().unwrap();

        // miniversality at the infinitesimal level over k[ε]
        let keps = afx::truncated_poly(ring, 2);
        let morphisms = artin::enumerate_morphisms(&step2.base, &keps, 1 << 20).unwrap();
        // the two k[ε]-deformations of L̄
        let trivial = LieOverBase::trivial(&lbar, &keps);
        let heis = LieOverBase::from_cochain_family(
            &lbar,
            &keps,
            &[(keps.basis_vec(1), step1.mu[0].clone())],
        )
        .unwrap();
        for target in [&trivial, &heis] {
            let inducing: Vec<_> = morphisms
                .iter()
                .filter(|phi| {
                    push_forward(&step2.eta, phi, &keps)
                        .map(|p| p.same_as(target))
                        .unwrap_or(false)
                })
                .collect();
            assert_eq!(inducing.len(), 1, "exactly one inducing morphism");
        }
    }

    #[test]
    fn miniversal_trivial_when_rigid() {
        let ring = f3();
        let lbar = lfx::heisenberg(ring);
        let step1 = eta_deformation(&lbar, None).unwrap();
        assert_eq!(step1.base.dim(), 1);
        let step2 = miniversal_step(&step1).unwrap();
        assert_eq!(step2.base.dim(), 1);
    }

    #[test]
    fn rep_tangent_and_lift_count() {
        let ring = f2();
        let g = lfx::abelian(ring, 2, &[(1, "s")]);
        let lbar = lfx::heisenberg(ring);
        let rho = GradedLieHom::new(&g, &lbar, vec![lbar.element(&[("x", 1)]).unwrap()])
            .unwrap();
        let h1 = tangent_space_rep(&g, &lbar, &rho).unwrap();
        assert_eq!(h1.dim, 2);
        let keps = afx::truncated_poly(ring, 2);
        let lifts = enumerate_lifts(&g, &lbar, &rho, &keps, 1 << 20).unwrap();
        assert_eq!(lifts.len(), 4, "2^{{dim H¹(0)}} lifts");
    }

    #[test]
    fn rep_identity_matches_adjoint() {
        let ring = f3();
        let lbar = lfx::heisenberg(ring);
        let rho = GradedLieHom::identity(&lbar);
        let h1 = tangent_space_rep(&lbar, &lbar, &rho).unwrap();
        let md = ModuleData::adjoint(&lbar);
        let adj = cohomology(&lbar, &md, 1, 0).unwrap();
        assert_eq!(h1.dim, adj.dim);
    }

    #[test]
    fn rep_obstruction_free_source_vanishes() {
        let ring = f2();
        let g = lfx::abelian(ring, 2, &[(1, "s")]);
        let lbar = lfx::heisenberg(ring);
        let rho = GradedLieHom::new(&g, &lbar, vec![lbar.element(&[("x", 1)]).unwrap()])
            .unwrap();
        let md = ModuleData::via_hom(&g, &lbar, rho.clone()).unwrap();
        assert_eq!(cohomology(&g, &md, 2, 0).unwrap().dim, 0);
        let a = afx::truncated_poly(ring, 2);
        let b = afx::truncated_poly(ring, 3);
        let proj = Morphism::new(&b, &a, vec![a.basis_vec(0), a.basis_vec(1), a.zero()])
            .unwrap();
        let ext = SmallExtension {
            total: b.clone(),
            base_id: a.id(),
            proj,
            kernel: vec![b.basis_vec(2)],
        };
        for rho0 in enumerate_lifts(&g, &lbar, &rho, &a, 1 << 20).unwrap() {
            let ob = obstruction_rep(&g, &lbar, &rho, &rho0, &ext, &b).unwrap();
            assert!(ob.vanishes);
            assert!(ob.lift.is_some());
        }
    }

    #[test]
    fn rep_obstruction_one_relator_nonzero() {
        let ring = f2();
        // G = free on a, b modulo [a,b]: the 2-dimensional abelian algebra
        let g = lfx::abelian(ring, 2, &[(1, "a"), (1, "b")]);
        let lbar = lfx::heisenberg(ring);
        let rho = GradedLieHom::new(&g, &lbar, vec![lbar.zero(), lbar.zero()]).unwrap();
        // ρ₀ over k[ε]: a ↦ εx, b ↦ εy
        let keps = afx::truncated_poly(ring, 2);
        let mut rho0 = RepLift::from_reduction(&g, &lbar, &rho, &keps);
        let (ix, iy) = (lbar.index_of("x").unwrap(), lbar.index_of("y").unwrap());
        rho0.images[0][ix][1] = 1;
        rho0.images[1][iy][1] = 1;
        check_rep_lift(&g, &lbar, &rho, &keps, &rho0).unwrap();
        let b = afx::truncated_poly(ring, 3);
        let proj = Morphism::new(
            &b,
            &keps,
            vec![keps.basis_vec(0), keps.basis_vec(1), keps.zero()],
        )
        .unwrap();
        let ext = SmallExtension {
            total: b.clone(),
            base_id: keps.id(),
            proj,
            kernel: vec![b.basis_vec(2)],
        };
        let ob = obstruction_rep(&g, &lbar, &rho, &rho0, &ext, &b).unwrap();
        assert!(!ob.vanishes);
        assert!(ob.classes.iter().any(|c| !c.is_zero()));
    }

    #[test]
    fn quadratic_presentation_shapes() {
        // free source over F_3: parameters only, no relations
        let ring = f3();
        let g = lfx::abelian(ring, 2, &[(1, "s")]);
        let lbar = lfx::heisenberg(ring);
        let rho = GradedLieHom::new(&g, &lbar, vec![lbar.element(&[("x", 1)]).unwrap()])
            .unwrap();
        let p = quadratic_presentation(&g, &lbar, &rho).unwrap();
        assert_eq!(p.params, 2);
        assert_eq!(p.relations.as_deref(), Some(&[][..]));

        // one-relator source: one relation matching the cup pairing
        let g2 = lfx::abelian(ring, 2, &[(1, "a"), (1, "b")]);
        let rho2 = GradedLieHom::new(&g2, &lbar, vec![lbar.zero(), lbar.zero()]).unwrap();
        let p2 = quadratic_presentation(&g2, &lbar, &rho2).unwrap();
        assert_eq!(p2.params, 4);
        let rels = p2.relations.unwrap();
        assert_eq!(rels.len(), 1);
        assert!(!rels[0].is_empty());

        // over F_2 relations are unavailable
        let gf2 = lfx::abelian(f2(), 2, &[(1, "s")]);
        let lf2 = lfx::heisenberg(f2());
        let rf2 =
            GradedLieHom::new(&gf2, &lf2, vec![lf2.element(&[("x", 1)]).unwrap()]).unwrap();
        let pf2 = quadratic_presentation(&gf2, &lf2, &rf2).unwrap();
        assert!(pf2.relations.is_none());
    }

    #[test]
    fn enumerate_lifts_budget_refusal() {
        let ring = f2();
        let g = lfx::abelian(ring, 2, &[(1, "s")]);
        let lbar = lfx::heisenberg(ring);
        let rho = GradedLieHom::new(&g, &lbar, vec![lbar.element(&[("x", 1)]).unwrap()])
            .unwrap();
        let keps = afx::truncated_poly(ring, 2);
        let err = enumerate_lifts(&g, &lbar, &rho, &keps, 2).unwrap_err();
        assert!(matches!(err, DeformError::BudgetExceeded(_)));
    }

    #[test]
    fn restriction_rank_heisenberg_line() {
        // G = span(x) embedded in the Heisenberg algebra: a grade-0
        // 1-cocycle γ is free on γ(x), γ(y); restriction to G keeps γ(x),
        // so the rank is dim L̄(1) = 2.
        let ring = f3();
        let lbar = lfx::heisenberg(ring);
        let g = lfx::abelian(ring, 2, &[(1, "s")]);
        let incl =
            GradedLieHom::new(&g, &lbar, vec![lbar.element(&[("x", 1)]).unwrap()]).unwrap();
        assert_eq!(restriction_rank(&g, &lbar, &incl).unwrap(), 2);
    }
}

