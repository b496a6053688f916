//! Seeded property suites: δ² = 0 on random cochains, cohomology
//! cross-checks, Jacobi for deformed brackets plus classification
//! round-trips, Harrison identities, and the obstruction biconditional
//! certified by exhaustive lift search.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::artin::{self, AModule, ArtinAlgebra, Morphism, SmallExtension};
use crate::coeff::{self, CoeffRing, ModMatrix};
use crate::cohom::{cochain_space, cohomology, differential, ModuleData};
use crate::deform::{
    classify_infinitesimal, eta_deformation, find_isomorphism, obstruction_lie, push_forward,
    DeformError, LieOverBase,
};
use crate::free::{surface_algebra, FreeLieAlgebra, SurfaceSpec, WeightedAlphabet};
use crate::lie::{fixtures as lfx, GradedLieAlgebra};

pub const SUITES: &[&str] = &["cohomology", "exactness", "jacobi", "harrison", "obstruction"];

#[derive(Debug)]
pub struct SuiteResult {
    pub name: &'static str,
    pub checks: usize,
    pub failures: Vec<String>,
    pub skipped: bool,
}

impl SuiteResult {
    fn skipped(name: &'static str) -> Self {
        SuiteResult {
            name,
            checks: 0,
            failures: Vec::new(),
            skipped: true,
        }
    }

    pub fn passed(&self) -> bool {
        self.skipped || self.failures.is_empty()
    }
}

#[derive(Debug)]
pub struct VerifyReport {
    pub suites: Vec<SuiteResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed())
    }
}

/// Run the property suites with the given seed; `only` restricts to a
/// subset by name, the rest are reported as skipped.
pub fn run(seed: u64, only: Option<&[String]>) -> VerifyReport {
    let wanted = |name: &str| only.map_or(true, |o| o.iter().any(|s| s == name));
    let mut suites = Vec::new();
    for &name in SUITES {
        if !wanted(name) {
            suites.push(SuiteResult::skipped(name));
            continue;
        }
        let r = match name {
            "cohomology" => suite_cohomology(seed),
            "exactness" => suite_exactness(),
            "jacobi" => suite_jacobi(seed),
            "harrison" => suite_harrison(),
            "obstruction" => suite_obstruction(),
            _ => unreachable!(),
        };
        suites.push(r);
    }
    VerifyReport { suites }
}

fn f2() -> CoeffRing {
    CoeffRing::field(2).unwrap()
}
fn f3() -> CoeffRing {
    CoeffRing::field(3).unwrap()
}

fn fixture_algebras(ring: CoeffRing) -> Vec<(String, GradedLieAlgebra)> {
    let free_nilp = FreeLieAlgebra::new(
        ring,
        WeightedAlphabet::new(&[("x", 1), ("y", 1)]).unwrap(),
        4,
    )
    .unwrap()
    .algebra()
    .clone();
    let surf = surface_algebra(SurfaceSpec::new(1, 1).unwrap(), ring, 5)
        .unwrap()
        .algebra()
        .clone();
    vec![
        (
            "abelian".into(),
            lfx::abelian(ring, 2, &[(1, "e1"), (1, "e2"), (2, "e3")]),
        ),
        ("heisenberg".into(), lfx::heisenberg(ring)),
        ("free-nilpotent-4".into(), free_nilp),
        ("surface-1-1".into(), surf),
    ]
}

/// δ² = 0 on 200 seeded random cochains per fixture per prime.
fn suite_cohomology(seed: u64) -> SuiteResult {
    let mut checks = 0;
    let mut failures = Vec::new();
    for ring in [f2(), f3()] {
        for (name, l) in fixture_algebras(ring) {
            let md = ModuleData::adjoint(&l);
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (ring.prime() << 32));
            for _ in 0..200 {
                let q = rng.gen_range(1..=2u32);
                let m = rng.gen_range(-1..=1i64);
                let space = cochain_space(&l, &md, q, m);
                let v: Vec<u64> = (0..space.dim())
                    .map(|_| rng.gen_range(0..ring.modulus()))
                    .collect();
                let c = space.from_vec(&md, &v);
                let dd = differential(&l, &md, &differential(&l, &md, &c));
                checks += 1;
                if !dd.is_zero() {
                    failures.push(format!(
                        "delta^2 != 0 on {name} over F_{} (q={q}, m={m})",
                        ring.prime()
                    ));
                }
            }
        }
    }
    SuiteResult {
        name: "cohomology",
        checks,
        failures,
        skipped: false,
    }
}

/// Kernel of v ↦ ([v, e_j])_j, computed directly from the bracket table.
fn center_dim(l: &GradedLieAlgebra) -> usize {
    let ring = l.ring();
    let n = l.dim();
    let mut m = ModMatrix::zero(ring, n * n, n);
    for i in 0..n {
        for j in 0..n {
            let b = l.bracket_basis(i, j).value;
            for (w, c) in b.terms() {
                let r = j * n + w;
                let cur = m.get(r, i);
                m.set(r, i, ring.add(cur, c));
            }
        }
    }
    coeff::kernel_basis(&m).unwrap().len()
}

/// H⁰ = center and H¹(0) = derivations(0) − inner(0), cross-module.
fn suite_exactness() -> SuiteResult {
    let mut checks = 0;
    let mut failures = Vec::new();
    for ring in [f2(), f3()] {
        for (name, l) in fixture_algebras(ring) {
            let md = ModuleData::adjoint(&l);
            let n = l.truncation() as i64;
            let mut h0 = 0usize;
            for m in -n..=n {
                h0 += cohomology(&l, &md, 0, m).unwrap().dim;
            }
            checks += 1;
            if h0 != center_dim(&l) {
                failures.push(format!(
                    "H0 dim {h0} != center dim {} on {name} over F_{}",
                    center_dim(&l),
                    ring.prime()
                ));
            }
            let h1 = cohomology(&l, &md, 1, 0).unwrap().dim;
            let der = l.derivation_space(0).unwrap().basis.len();
            let inner = l.inner_derivations(0).unwrap().rank;
            checks += 1;
            if h1 != der - inner {
                failures.push(format!(
                    "H1(0) dim {h1} != {der} - {inner} on {name} over F_{}",
                    ring.prime()
                ));
            }
        }
    }
    SuiteResult {
        name: "exactness",
        checks,
        failures,
        skipped: false,
    }
}

/// Jacobi for η_L on the fixtures, plus 20 seeded classification
/// round-trips over random square-zero bases.
fn suite_jacobi(seed: u64) -> SuiteResult {
    let mut checks = 0;
    let mut failures = Vec::new();
    for ring in [f2(), f3()] {
        for (name, l) in fixture_algebras(ring) {
            let step = match eta_deformation(&l, None) {
                Ok(s) => s,
                Err(e) => {
                    failures.push(format!("eta failed on {name}: {e:?}"));
                    continue;
                }
            };
            checks += 1;
            if step.eta.validate().is_err() {
                failures.push(format!(
                    "eta violates Jacobi on {name} over F_{}",
                    ring.prime()
                ));
            }
        }
    }

    let ring = f3();
    let lbar = lfx::abelian(ring, 2, &[(1, "e1"), (1, "e2"), (2, "e3")]);
    let step = eta_deformation(&lbar, None).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    for trial in 0..20 {
        let d = rng.gen_range(1..=3usize);
        let labels: Vec<String> = (1..=d).map(|s| format!("a{s}")).collect();
        let label_refs: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
        let a = artin::fixtures::square_zero(ring, &label_refs);
        let family: Vec<_> = (1..=d)
            .map(|s| {
                let lam = rng.gen_range(0..ring.modulus());
                (a.scale(lam, &a.basis_vec(s)), step.mu[0].clone())
            })
            .collect();
        checks += 1;
        let outcome = (|| -> Result<bool, DeformError> {
            let l = LieOverBase::from_cochain_family(&lbar, &a, &family)?;
            l.validate()?;
            let cls = classify_infinitesimal(&l, &step)?;
            let pushed = push_forward(&step.eta, &cls.morphism, &a)?;
            Ok(cls.unique && find_isomorphism(&l, &pushed)?.is_some())
        })();
        match outcome {
            Ok(true) => {}
            Ok(false) => failures.push(format!("round trip {trial} not unique or no witness")),
            Err(e) => failures.push(format!("round trip {trial} failed: {e:?}")),
        }
    }
    SuiteResult {
        name: "jacobi",
        checks,
        failures,
        skipped: false,
    }
}

/// dim H¹ = dim m/m² on the local fixtures, d₂ ∘ d₁ = 0 as matrices,
/// and six-term exactness for a tower.
fn suite_harrison() -> SuiteResult {
    let mut checks = 0;
    let mut failures = Vec::new();
    for ring in [f2(), f3()] {
        let fixtures: Vec<(&str, ArtinAlgebra)> = vec![
            ("k", artin::fixtures::base_field(ring)),
            ("k[t]/t2", artin::fixtures::truncated_poly(ring, 2)),
            ("k[t]/t3", artin::fixtures::truncated_poly(ring, 3)),
            ("k[s,t]/(s,t)2", artin::fixtures::square_zero_two(ring)),
            ("k[s,t]/(s2,t2)", artin::fixtures::bi_dual(ring)),
        ];
        for (name, a) in &fixtures {
            let m = AModule::residue_field(a);
            checks += 2;
            let h = artin::harrison(a, &m).unwrap();
            if h.h1_dim() != a.m_mod_m2_dim().unwrap() {
                failures.push(format!(
                    "H1 dim {} != dim m/m^2 on {name} over F_{}",
                    h.h1_dim(),
                    ring.prime()
                ));
            }
            let d1 = artin::d1_matrix(a, &m);
            let d2 = artin::d2_matrix(a, &m);
            if !d2.mul(&d1).unwrap().is_zero() {
                failures.push(format!("d2 . d1 != 0 on {name} over F_{}", ring.prime()));
            }
        }
        // one composable tower: k → k[t]/t³ → k[t]/t²
        let k = artin::fixtures::base_field(ring);
        let a3 = artin::fixtures::truncated_poly(ring, 3);
        let a2 = artin::fixtures::truncated_poly(ring, 2);
        let iota = Morphism::from_base_field(&k, &a3);
        let pi =
            Morphism::new(&a3, &a2, vec![a2.basis_vec(0), a2.basis_vec(1), a2.zero()]).unwrap();
        let m = AModule::residue_field(&a2);
        checks += 1;
        let rep = artin::transitivity_exact(&k, &a3, &a2, &iota, &pi, &m).unwrap();
        if !rep.all_exact() {
            failures.push(format!(
                "Jacobi-Zariski tower not exact over F_{}: {:?}",
                ring.prime(),
                rep.exact
            ));
        }
    }
    SuiteResult {
        name: "harrison",
        checks,
        failures,
        skipped: false,
    }
}

/// Section of a surjective field-coefficient morphism: preimage per target
/// basis vector.
fn linear_section_of(proj: &Morphism, total: &ArtinAlgebra, base: &ArtinAlgebra) -> Vec<Vec<u64>> {
    let ring = base.ring();
    let mut m = ModMatrix::zero(ring, base.dim(), total.dim());
    for (col, img) in proj.images().iter().enumerate() {
        for (row, &c) in img.iter().enumerate() {
            m.set(row, col, c);
        }
    }
    (0..base.dim())
        .map(|t| {
            coeff::solve(&m, &base.basis_vec(t))
                .unwrap()
                .expect("projection is surjective")
        })
        .collect()
}

/// Exhaustively search graded lifts of `l` across the small extension;
/// returns whether any lift satisfies Jacobi and reduces to `l`.
pub fn exhaustive_lie_lift_exists(
    l: &LieOverBase,
    ext: &SmallExtension,
    total: &ArtinAlgebra,
    budget: u128,
) -> Result<bool, DeformError> {
    let lie = l.lie();
    let base = l.base();
    let ring = base.ring();
    if !ring.is_field() {
        return Err(DeformError::Shape("exhaustive search needs a field".into()));
    }
    let section = linear_section_of(&ext.proj, total, base);
    // free slots: (pair i<j, target basis w of matching degree, kernel gen)
    let mut slots = Vec::new();
    for i in 0..lie.dim() {
        for j in (i + 1)..lie.dim() {
            let d = lie.basis_degree(i) + lie.basis_degree(j);
            if d > lie.truncation() {
                continue;
            }
            for w in lie.degree_indices(d) {
                for kg in 0..ext.kernel.len() {
                    slots.push((i, j, w, kg));
                }
            }
        }
    }
    let total_candidates = (ring.modulus() as u128)
        .checked_pow(slots.len() as u32)
        .unwrap_or(u128::MAX);
    if total_candidates > budget {
        return Err(DeformError::BudgetExceeded(total_candidates));
    }
    let mut assignment = vec![0u64; slots.len()];
    loop {
        // build the candidate table over B
        let mut table = std::collections::BTreeMap::new();
        for i in 0..lie.dim() {
            for j in (i + 1)..lie.dim() {
                let below = l.bracket_basis(i, j);
                let mut e = vec![vec![0u64; total.dim()]; lie.dim()];
                for (w, row) in below.iter().enumerate() {
                    for (t, &c) in row.iter().enumerate() {
                        if c != 0 {
                            for (b, &sc) in section[t].iter().enumerate() {
                                e[w][b] = ring.add(e[w][b], ring.mul(c, sc));
                            }
                        }
                    }
                }
                table.insert((i, j), e);
            }
        }
        for (s, &(i, j, w, kg)) in slots.iter().enumerate() {
            let c = assignment[s];
            if c == 0 {
                continue;
            }
            let e = table.get_mut(&(i, j)).unwrap();
            for (b, &kc) in ext.kernel[kg].iter().enumerate() {
                e[w][b] = ring.add(e[w][b], ring.mul(c, kc));
            }
        }
        if let Ok(cand) = LieOverBase::from_full_table(lie, total, table) {
            if push_forward(&cand, &ext.proj, base)?.same_as(l) {
                return Ok(true);
            }
        }
        // next assignment
        let mut pos = 0;
        loop {
            if pos == assignment.len() {
                return Ok(false);
            }
            assignment[pos] += 1;
            if assignment[pos] < ring.modulus() {
                break;
            }
            assignment[pos] = 0;
            pos += 1;
        }
    }
}

/// Lift exists ⟺ obstruction class vanishes, with exhaustive lift search
/// as the oracle, on three frozen fixtures.
fn suite_obstruction() -> SuiteResult {
    let mut checks = 0;
    let mut failures = Vec::new();
    let ring = f2();
    let keps = artin::fixtures::truncated_poly(ring, 2);
    let kt3 = artin::fixtures::truncated_poly(ring, 3);
    let proj = Morphism::new(
        &kt3,
        &keps,
        vec![keps.basis_vec(0), keps.basis_vec(1), keps.zero()],
    )
    .unwrap();
    let ext = SmallExtension {
        total: kt3.clone(),
        base_id: keps.id(),
        proj,
        kernel: vec![kt3.basis_vec(2)],
    };

    let mut cases: Vec<(&str, LieOverBase)> = Vec::new();
    // heisenberg-direction deformation of the 3-dim abelian algebra
    let ab3 = lfx::abelian(ring, 2, &[(1, "e1"), (1, "e2"), (2, "e3")]);
    let step = eta_deformation(&ab3, None).unwrap();
    cases.push((
        "heisenberg-direction",
        LieOverBase::from_cochain_family(&ab3, &keps, &[(keps.basis_vec(1), step.mu[0].clone())])
            .unwrap(),
    ));
    // trivial deformation of the 5-dim abelian algebra
    let ab5 = lfx::abelian(
        ring,
        3,
        &[(1, "e1"), (1, "e2"), (1, "e3"), (2, "z"), (3, "w")],
    );
    cases.push(("trivial-5dim", LieOverBase::trivial(&ab5, &keps)));
    // the obstructed deformation: γ(e1,e2) = z, γ(e3,z) = w
    let mut gamma = crate::cohom::Cochain::zero(2, 0);
    gamma.set(
        vec![ab5.index_of("e1").unwrap(), ab5.index_of("e2").unwrap()],
        ab5.element(&[("z", 1)]).unwrap(),
    );
    gamma.set(
        vec![ab5.index_of("e3").unwrap(), ab5.index_of("z").unwrap()],
        ab5.element(&[("w", 1)]).unwrap(),
    );
    cases.push((
        "massey-obstructed",
        LieOverBase::from_cochain_family(&ab5, &keps, &[(keps.basis_vec(1), gamma)]).unwrap(),
    ));

    for (name, l) in &cases {
        checks += 1;
        let ob = match obstruction_lie(l, &ext, &kt3) {
            Ok(o) => o,
            Err(e) => {
                failures.push(format!("obstruction failed on {name}: {e:?}"));
                continue;
            }
        };
        match exhaustive_lie_lift_exists(l, &ext, &kt3, 1 << 22) {
            Ok(exists) => {
                if exists != ob.vanishes {
                    failures.push(format!(
                        "biconditional fails on {name}: vanishes={} but lift exists={}",
                        ob.vanishes, exists
                    ));
                }
            }
            Err(e) => failures.push(format!("exhaustive search failed on {name}: {e:?}")),
        }
    }
    SuiteResult {
        name: "obstruction",
        checks,
        failures,
        skipped: false,
    }
}
