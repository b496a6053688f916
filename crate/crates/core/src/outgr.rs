//! The maps g_m and f_m on surface-group graded algebras and the exact
//! sequence computing graded pieces of the braid-type outer automorphism
//! Lie algebra.

use thiserror::Error;

use crate::coeff::{self, CoeffError, ModMatrix};
use crate::free::SurfaceAlgebra;
use crate::lie::{LieElement, LieError};

#[derive(Debug, Error)]
pub enum OutError {
    #[error("degree {0} exceeds truncation {1}")]
    TruncationOverflow(u32, u32),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// Per-degree report of the exact-sequence computation, with explicit
/// certificates instead of assumed exactness.
#[derive(Clone, Debug)]
pub struct OutGradedReport {
    pub m: u32,
    pub dim_m: usize,
    pub dim_m1: usize,
    pub dim_m2: usize,
    pub dim_middle: usize,
    pub rank_g: usize,
    /// rank of the map induced by f on middle/im(g)
    pub rank_f_induced: usize,
    pub out_dim: usize,
    pub g_injective: bool,
    pub f_surjective: bool,
    pub fg_zero: bool,
    pub middle_exact: bool,
    /// false for n = 0 where the sequence is computed but not asserted
    pub certified: bool,
    /// k > 1 only: some elementary divisor was a nonunit (torsion) or zero
    /// (precision exhausted)
    pub torsion_warning: bool,
}

impl OutGradedReport {
    pub fn all_certificates(&self) -> bool {
        self.g_injective && self.f_surjective && self.fg_zero && self.middle_exact
    }
}

fn local_coords(alg: &crate::lie::GradedLieAlgebra, x: &LieElement, d: u32) -> Vec<u64> {
    let range = alg.degree_indices(d);
    let start = range.start;
    let mut v = vec![0u64; range.len()];
    for (i, c) in x.terms() {
        v[i - start] = c;
    }
    v
}

/// Matrix of g_m : gr^m → (gr^{m+1})^{2g} × (gr^m)^n,
/// g ↦ ([g,ā_i]) × ([g,b̄_i]) × (g, …, g).
pub fn g_map(surf: &SurfaceAlgebra, m: u32) -> Result<ModMatrix, OutError> {
    let alg = surf.algebra();
    let n_trunc = alg.truncation();
    if m + 1 > n_trunc {
        return Err(OutError::TruncationOverflow(m + 1, n_trunc));
    }
    let (g, n) = (surf.spec.genus as usize, surf.spec.punctures as usize);
    let d_m = alg.degree_dim(m);
    let d_m1 = alg.degree_dim(m + 1);
    let rows = 2 * g * d_m1 + n * d_m;
    let mut mat = ModMatrix::zero(alg.ring(), rows, d_m);
    for (col, src) in alg.degree_indices(m).enumerate() {
        let sv = alg.basis_element(src);
        let mut row_off = 0usize;
        for gens in [&surf.a_indices, &surf.b_indices] {
            for &gen in gens {
                let img = alg.nilpotent_bracket(&sv, &alg.basis_element(gen));
                for (r, c) in local_coords(alg, &img, m + 1).iter().enumerate() {
                    if *c != 0 {
                        mat.set(row_off + r, col, *c);
                    }
                }
                row_off += d_m1;
            }
        }
        for _ in 0..n {
            for (r, c) in local_coords(alg, &sv, m).iter().enumerate() {
                if *c != 0 {
                    mat.set(row_off + r, col, *c);
                }
            }
            row_off += d_m;
        }
    }
    Ok(mat)
}

/// Matrix of f_m : (gr^{m+1})^{2g} × (gr^m)^n → gr^{m+2},
/// (r_i)×(s_i)×(t_j) ↦ Σ([ā_i,s_i] + [r_i,b̄_i]) + Σ_j [t_j, c̄_j],
/// using the stored c̄_n for the last puncture.
pub fn f_map(surf: &SurfaceAlgebra, m: u32) -> Result<ModMatrix, OutError> {
    let alg = surf.algebra();
    let n_trunc = alg.truncation();
    if m + 2 > n_trunc {
        return Err(OutError::TruncationOverflow(m + 2, n_trunc));
    }
    let (g, n) = (surf.spec.genus as usize, surf.spec.punctures as usize);
    let d_m = alg.degree_dim(m);
    let d_m1 = alg.degree_dim(m + 1);
    let d_m2 = alg.degree_dim(m + 2);
    let cols = 2 * g * d_m1 + n * d_m;
    let mut mat = ModMatrix::zero(alg.ring(), d_m2, cols);
    let set_image = |mat: &mut ModMatrix, col: usize, img: &LieElement| {
        for (r, c) in local_coords(alg, img, m + 2).iter().enumerate() {
            if *c != 0 {
                mat.set(r, col, *c);
            }
        }
    };
    let mut col_off = 0usize;
    // r_i blocks: r_i ↦ [r_i, b̄_i]
    for &bi in &surf.b_indices {
        for (k, src) in alg.degree_indices(m + 1).enumerate() {
            let img = alg.nilpotent_bracket(&alg.basis_element(src), &alg.basis_element(bi));
            set_image(&mut mat, col_off + k, &img);
        }
        col_off += d_m1;
    }
    // s_i blocks: s_i ↦ [ā_i, s_i]
    for &ai in &surf.a_indices {
        for (k, src) in alg.degree_indices(m + 1).enumerate() {
            let img = alg.nilpotent_bracket(&alg.basis_element(ai), &alg.basis_element(src));
            set_image(&mut mat, col_off + k, &img);
        }
        col_off += d_m1;
    }
    // t_j blocks: t_j ↦ [t_j, c̄_j]; last puncture uses the stored c̄_n
    for j in 0..n {
        let cj: LieElement = if j + 1 < n {
            alg.basis_element(surf.c_indices[j])
        } else {
            surf.cbar_last.clone().expect("n >= 1 stores c̄_n")
        };
        for (k, src) in alg.degree_indices(m).enumerate() {
            let img = alg.nilpotent_bracket(&alg.basis_element(src), &cj);
            set_image(&mut mat, col_off + k, &img);
        }
        col_off += d_m;
    }
    Ok(mat)
}

/// Compute the graded piece gr^m of the outer automorphism Lie algebra via
/// the exact sequence, with explicit rank certificates.
pub fn out_rank(surf: &SurfaceAlgebra, m: u32) -> Result<OutGradedReport, OutError> {
    let alg = surf.algebra();
    let ring = alg.ring();
    let d_m = alg.degree_dim(m);
    let d_m1 = alg.degree_dim(m + 1);
    let d_m2 = alg.degree_dim(m + 2);
    let gm = g_map(surf, m)?;
    let fm = f_map(surf, m)?;
    let middle = gm.rows();
    let fg = fm.mul(&gm)?;
    let fg_zero = fg.is_zero();

    let (rank_g, rank_f, rank_f_induced, torsion_warning);
    if ring.is_field() {
        rank_g = coeff::rank(&gm)?;
        rank_f = coeff::rank(&fm)?;
        // column space of g, then the complement spanned by standard basis
        // vectors off the pivot columns of its row-reduced transpose
        let rr = coeff::rref(&gm.transpose())?;
        let pivots: std::collections::BTreeSet<usize> = rr.pivots.iter().copied().collect();
        let free_cols: Vec<usize> = (0..middle).filter(|c| !pivots.contains(c)).collect();
        let mut induced = ModMatrix::zero(ring, fm.rows(), free_cols.len());
        for (new_c, &c) in free_cols.iter().enumerate() {
            for r in 0..fm.rows() {
                let v = fm.get(r, c);
                if v != 0 {
                    induced.set(r, new_c, v);
                }
            }
        }
        rank_f_induced = coeff::rank(&induced)?;
        torsion_warning = false;
    } else {
        let sg = coeff::smith_normal_form(&gm);
        let sf = coeff::smith_normal_form(&fm);
        rank_g = sg.unit_rank(&ring);
        rank_f = sf.unit_rank(&ring);
        rank_f_induced = rank_f;
        torsion_warning = sg.has_torsion(&ring)
            || sf.has_torsion(&ring)
            || sg.precision_exhausted
            || sf.precision_exhausted;
    }

    let g_injective = rank_g == d_m;
    let f_surjective = rank_f == d_m2;
    let out_dim = (middle - rank_g).saturating_sub(rank_f_induced);
    // exactness of gr^m Out ↪ middle/im(g) ↠ gr^{m+2}:
    // dim ker(f̄) + dim gr^{m+2} accounts for all of middle/im(g)
    let middle_exact = fg_zero && middle - rank_g == out_dim + d_m2;
    Ok(OutGradedReport {
        m,
        dim_m: d_m,
        dim_m1: d_m1,
        dim_m2: d_m2,
        dim_middle: middle,
        rank_g,
        rank_f_induced,
        out_dim,
        g_injective,
        f_surjective,
        fg_zero,
        middle_exact,
        certified: surf.spec.punctures >= 1,
        torsion_warning,
    })
}
