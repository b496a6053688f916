//! Free graded Lie algebras on weighted generators via Lyndon/Hall bases,
//! the surface-group graded algebras, and Ihara's derivation construction.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::coeff::CoeffRing;
use crate::lie::{Derivation, GradedLieAlgebra, LieElement, LieError, Quotient};

#[derive(Debug, Error)]
pub enum FreeError {
    #[error("alphabet names must be distinct and weights positive")]
    BadAlphabet,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("expression weight {0} exceeds truncation {1}")]
    WeightOverflow(u32, u32),
    #[error("polynomial is not a Lie element within the truncation")]
    NotLieElement,
    #[error("surface (g,n)=({0},{1}) is not hyperbolic")]
    NotHyperbolic(u32, u32),
    #[error("truncation must be at least 2")]
    TruncationTooSmall,
    #[error("Ihara derivations require the (0,3) algebra")]
    NotIharaAlgebra,
    #[error("element must be homogeneous of degree at most N-2")]
    BadIharaInput,
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// Ordered generator names with positive integer weights.
#[derive(Clone, Debug)]
pub struct WeightedAlphabet {
    names: Vec<String>,
    weights: Vec<u32>,
}

impl WeightedAlphabet {
    pub fn new(gens: &[(&str, u32)]) -> Result<Self, FreeError> {
        let mut seen = std::collections::BTreeSet::new();
        for (n, w) in gens {
            if *w == 0 || !seen.insert(*n) {
                return Err(FreeError::BadAlphabet);
            }
        }
        Ok(WeightedAlphabet {
            names: gens.iter().map(|(n, _)| n.to_string()).collect(),
            weights: gens.iter().map(|(_, w)| *w).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    fn word_weight(&self, w: &[u8]) -> u32 {
        w.iter().map(|&c| self.weights[c as usize]).sum()
    }
}

/// All Lyndon words over `0..k` with weighted degree ≤ `max_weight`,
/// sorted by weighted degree, then lexicographically.
pub fn lyndon_words(weights: &[u32], max_weight: u32) -> Vec<Vec<u8>> {
    let k = weights.len();
    let min_w = weights.iter().copied().min().unwrap_or(1).max(1);
    let max_len = (max_weight / min_w) as usize;
    let mut out: Vec<Vec<u8>> = Vec::new();
    if k == 0 || max_len == 0 {
        return out;
    }
    // Duval's generation of Lyndon words of length <= max_len in lex order
    let mut w: Vec<u8> = vec![0];
    loop {
        let wt: u32 = w.iter().map(|&c| weights[c as usize]).sum();
        if wt <= max_weight {
            out.push(w.clone());
        }
        let cur = w.clone();
        w.clear();
        for i in 0..max_len {
            w.push(cur[i % cur.len()]);
        }
        while w.last().is_some_and(|&c| c as usize == k - 1) {
            w.pop();
        }
        if w.is_empty() {
            break;
        }
        *w.last_mut().unwrap() += 1;
    }
    out.sort_by(|a, b| {
        let wa: u32 = a.iter().map(|&c| weights[c as usize]).sum();
        let wb: u32 = b.iter().map(|&c| weights[c as usize]).sum();
        wa.cmp(&wb).then_with(|| a.cmp(b))
    });
    out
}

/// Standard factorization of a Lyndon word of length ≥ 2: the right factor
/// is the lexicographically least proper suffix; both factors are Lyndon.
pub fn standard_factorization(w: &[u8]) -> (Vec<u8>, Vec<u8>) {
    debug_assert!(w.len() >= 2);
    let mut best = 1;
    for s in 2..w.len() {
        if w[s..] < w[best..] {
            best = s;
        }
    }
    (w[..best].to_vec(), w[best..].to_vec())
}

/// Möbius function.
pub fn moebius(mut n: u64) -> i64 {
    let mut primes = 0;
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            primes += 1;
        }
        d += 1;
    }
    if n > 1 {
        primes += 1;
    }
    if primes % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Per-degree ranks of the free graded Lie algebra on generators of the
/// given weights, by generating-function coefficient extraction and Möbius
/// inversion: with f = 1 − Σ t^{w_g}, the series −t f'/f has coefficients
/// c_m = Σ_{d|m} d·r_d.
pub fn witt_ranks(weights: &[u32], max_degree: u32) -> Vec<usize> {
    let n = max_degree as usize;
    let mut gens_of_weight = vec![0i128; n + 1];
    let mut numer = vec![0i128; n + 1];
    for &w in weights {
        if (w as usize) <= n {
            gens_of_weight[w as usize] += 1;
            numer[w as usize] += w as i128;
        }
    }
    // c = numer + (Σ t^{w_g})·c as power series
    let mut c = vec![0i128; n + 1];
    for m in 1..=n {
        let mut s = numer[m];
        for j in 1..m {
            s += gens_of_weight[j] * c[m - j];
        }
        c[m] = s;
    }
    let mut ranks = vec![0usize; n];
    for m in 1..=n {
        let mut s = 0i128;
        for d in 1..=m {
            if m % d == 0 {
                s += moebius((m / d) as u64) as i128 * c[d];
            }
        }
        assert!(s >= 0 && s % m as i128 == 0, "Witt count must divide");
        ranks[m - 1] = (s / m as i128) as usize;
    }
    ranks
}

/// Hall basis data: per-degree Hall-word labels plus the rank table.
#[derive(Clone, Debug)]
pub struct HallBasis {
    pub per_degree: Vec<Vec<String>>,
    pub ranks: Vec<usize>,
}

fn word_label(names: &[String], w: &[u8]) -> String {
    if w.len() == 1 {
        return names[w[0] as usize].clone();
    }
    let (u, v) = standard_factorization(w);
    format!("[{},{}]", word_label(names, &u), word_label(names, &v))
}

/// Hall/Lyndon basis of the free graded Lie algebra through degree `n`.
pub fn hall_basis(alphabet: &WeightedAlphabet, n: u32) -> HallBasis {
    let words = lyndon_words(alphabet.weights(), n);
    let mut per_degree = vec![Vec::new(); n as usize];
    for w in &words {
        let d = alphabet.word_weight(w) as usize;
        per_degree[d - 1].push(word_label(alphabet.names(), w));
    }
    let ranks = per_degree.iter().map(|v| v.len()).collect();
    HallBasis { per_degree, ranks }
}

/// Element of the tensor algebra: a noncommutative polynomial in generator
/// indices with coefficients in the ring. Used for Hall-basis expansion and
/// as the substrate of brute-force spanning checks.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorPoly {
    ring: CoeffRing,
    terms: BTreeMap<Vec<u8>, u64>,
}

impl TensorPoly {
    pub fn zero(ring: CoeffRing) -> Self {
        TensorPoly {
            ring,
            terms: BTreeMap::new(),
        }
    }

    pub fn word(ring: CoeffRing, w: Vec<u8>, c: u64) -> Self {
        let mut terms = BTreeMap::new();
        let c = c % ring.modulus();
        if c != 0 {
            terms.insert(w, c);
        }
        TensorPoly { ring, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u8], u64)> + '_ {
        self.terms.iter().map(|(w, &c)| (w.as_slice(), c))
    }

    pub fn add_term(&mut self, w: Vec<u8>, c: u64) {
        use std::collections::btree_map::Entry;
        let c = c % self.ring.modulus();
        match self.terms.entry(w) {
            Entry::Occupied(mut e) => {
                let v = self.ring.add(*e.get(), c);
                if v == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
            Entry::Vacant(e) => {
                if c != 0 {
                    e.insert(c);
                }
            }
        }
    }

    pub fn add(&self, other: &TensorPoly) -> TensorPoly {
        let mut out = self.clone();
        for (w, c) in other.terms() {
            out.add_term(w.to_vec(), c);
        }
        out
    }

    pub fn scale(&self, c: u64) -> TensorPoly {
        let mut out = TensorPoly::zero(self.ring);
        for (w, a) in self.terms() {
            out.add_term(w.to_vec(), self.ring.mul(a, c));
        }
        out
    }

    pub fn sub(&self, other: &TensorPoly) -> TensorPoly {
        self.add(&other.scale(self.ring.neg(1)))
    }

    pub fn mul(&self, other: &TensorPoly) -> TensorPoly {
        let mut out = TensorPoly::zero(self.ring);
        for (u, a) in self.terms() {
            for (v, b) in other.terms() {
                let mut w = u.to_vec();
                w.extend_from_slice(v);
                out.add_term(w, self.ring.mul(a, b));
            }
        }
        out
    }

    /// `self·other − other·self`.
    pub fn commutator(&self, other: &TensorPoly) -> TensorPoly {
        self.mul(other).sub(&other.mul(self))
    }
}

/// Formal bracket expression over named generators.
#[derive(Clone, Debug)]
pub enum BracketExpr {
    Gen(String),
    Bracket(Box<BracketExpr>, Box<BracketExpr>),
}

impl BracketExpr {
    pub fn gen(name: &str) -> Self {
        BracketExpr::Gen(name.to_string())
    }

    pub fn bracket(a: BracketExpr, b: BracketExpr) -> Self {
        BracketExpr::Bracket(Box::new(a), Box::new(b))
    }
}

/// Free graded Lie algebra on a weighted alphabet, realized as a
/// `GradedLieAlgebra` on the Lyndon-word basis with exact structure
/// constants, plus the tensor-algebra expansion data that produced them.
pub struct FreeLieAlgebra {
    alphabet: WeightedAlphabet,
    algebra: GradedLieAlgebra,
    words: Vec<Vec<u8>>,
    word_index: HashMap<Vec<u8>, usize>,
    expansions: HashMap<Vec<u8>, TensorPoly>,
}

impl FreeLieAlgebra {
    pub fn new(
        ring: CoeffRing,
        alphabet: WeightedAlphabet,
        truncation: u32,
    ) -> Result<Self, FreeError> {
        let words = lyndon_words(alphabet.weights(), truncation);
        let mut word_index = HashMap::new();
        for (i, w) in words.iter().enumerate() {
            word_index.insert(w.clone(), i);
        }
        // expansions in weight order; standard factors have smaller weight
        let mut expansions: HashMap<Vec<u8>, TensorPoly> = HashMap::new();
        for w in &words {
            let e = if w.len() == 1 {
                TensorPoly::word(ring, w.clone(), 1)
            } else {
                let (u, v) = standard_factorization(w);
                expansions[&u].commutator(&expansions[&v])
            };
            expansions.insert(w.clone(), e);
        }
        let labels: Vec<String> = words.iter().map(|w| word_label(alphabet.names(), w)).collect();
        let degrees: Vec<u32> = words.iter().map(|w| alphabet.word_weight(w)).collect();
        // structure constants by tensor commutator + Hall rewrite
        let mut table: HashMap<(usize, usize), BTreeMap<usize, u64>> = HashMap::new();
        for i in 0..words.len() {
            for j in (i + 1)..words.len() {
                if degrees[i] + degrees[j] > truncation {
                    continue;
                }
                let p = expansions[&words[i]].commutator(&expansions[&words[j]]);
                let terms = hall_rewrite(&word_index, &expansions, p)?;
                if !terms.is_empty() {
                    table.insert((i, j), terms);
                }
            }
        }
        let algebra = GradedLieAlgebra::from_indexed(ring, truncation, labels, degrees, table);
        Ok(FreeLieAlgebra {
            alphabet,
            algebra,
            words,
            word_index,
            expansions,
        })
    }

    pub fn algebra(&self) -> &GradedLieAlgebra {
        &self.algebra
    }

    pub fn alphabet(&self) -> &WeightedAlphabet {
        &self.alphabet
    }

    pub fn words(&self) -> &[Vec<u8>] {
        &self.words
    }

    /// Basis index of a generator.
    pub fn generator_index(&self, name: &str) -> Option<usize> {
        let g = self.alphabet.names().iter().position(|n| n == name)?;
        self.word_index.get(&vec![g as u8]).copied()
    }

    /// Expand a formal bracket expression and express it in the Hall basis.
    pub fn rewrite_to_hall(&self, expr: &BracketExpr) -> Result<LieElement, FreeError> {
        let weight = self.expr_weight(expr)?;
        if weight > self.algebra.truncation() {
            return Err(FreeError::WeightOverflow(weight, self.algebra.truncation()));
        }
        let poly = self.expr_poly(expr)?;
        let terms = hall_rewrite(&self.word_index, &self.expansions, poly)?;
        Ok(self.algebra.from_terms(terms))
    }

    fn expr_weight(&self, expr: &BracketExpr) -> Result<u32, FreeError> {
        match expr {
            BracketExpr::Gen(name) => {
                let g = self
                    .alphabet
                    .names()
                    .iter()
                    .position(|n| n == name)
                    .ok_or_else(|| FreeError::UnknownGenerator(name.clone()))?;
                Ok(self.alphabet.weights()[g])
            }
            BracketExpr::Bracket(a, b) => Ok(self.expr_weight(a)? + self.expr_weight(b)?),
        }
    }

    fn expr_poly(&self, expr: &BracketExpr) -> Result<TensorPoly, FreeError> {
        match expr {
            BracketExpr::Gen(name) => {
                let g = self
                    .alphabet
                    .names()
                    .iter()
                    .position(|n| n == name)
                    .ok_or_else(|| FreeError::UnknownGenerator(name.clone()))?;
                Ok(TensorPoly::word(self.algebra.ring(), vec![g as u8], 1))
            }
            BracketExpr::Bracket(a, b) => {
                Ok(self.expr_poly(a)?.commutator(&self.expr_poly(b)?))
            }
        }
    }

    /// Express an element of the algebra in tensor-algebra form.
    pub fn to_tensor(&self, x: &LieElement) -> TensorPoly {
        let mut out = TensorPoly::zero(self.algebra.ring());
        for (i, c) in x.terms() {
            out = out.add(&self.expansions[&self.words[i]].scale(c));
        }
        out
    }

    /// Extend a map on generators to a derivation by Leibniz along the
    /// standard factorization. `gen_images[g]` is the image of generator `g`;
    /// its degree must be `weight(g) + shift`.
    pub fn leibniz_derivation(
        &self,
        shift: i64,
        gen_images: &[LieElement],
    ) -> Result<Derivation, FreeError> {
        let alg = &self.algebra;
        let n = alg.truncation() as i64;
        let mut images: BTreeMap<usize, LieElement> = BTreeMap::new();
        for (idx, w) in self.words.iter().enumerate() {
            let d = alg.basis_degree(idx) as i64;
            if d + shift < 1 || d + shift > n {
                continue;
            }
            let img = if w.len() == 1 {
                gen_images[w[0] as usize].clone()
            } else {
                let (u, v) = standard_factorization(w);
                let iu = self.word_index[&u];
                let iv = self.word_index[&v];
                // factors have strictly smaller degree, hence already present
                let du = images.get(&iu).cloned().unwrap_or_else(|| alg.zero());
                let dv = images.get(&iv).cloned().unwrap_or_else(|| alg.zero());
                alg.add(
                    &alg.nilpotent_bracket(&du, &alg.basis_element(iv)),
                    &alg.nilpotent_bracket(&alg.basis_element(iu), &dv),
                )
            };
            images.insert(idx, img);
        }
        Ok(Derivation::new(alg, shift, images)?)
    }
}

fn hall_rewrite(
    word_index: &HashMap<Vec<u8>, usize>,
    expansions: &HashMap<Vec<u8>, TensorPoly>,
    mut p: TensorPoly,
) -> Result<BTreeMap<usize, u64>, FreeError> {
    let mut out = BTreeMap::new();
    while let Some((w, c)) = p.terms.iter().next().map(|(w, &c)| (w.clone(), c)) {
        // the lexicographically least word of a Lie polynomial is Lyndon and
        // carries the leading coefficient of its Hall expansion
        let &idx = word_index.get(&w).ok_or(FreeError::NotLieElement)?;
        out.insert(idx, c);
        p = p.sub(&expansions[&w].scale(c));
    }
    Ok(out)
}

/// Genus and puncture count of a hyperbolic surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SurfaceSpec {
    pub genus: u32,
    pub punctures: u32,
}

impl SurfaceSpec {
    pub fn new(genus: u32, punctures: u32) -> Result<Self, FreeError> {
        if 2 * genus + punctures <= 2 {
            return Err(FreeError::NotHyperbolic(genus, punctures));
        }
        Ok(SurfaceSpec { genus, punctures })
    }
}

/// The weight-graded Lie algebra of a surface group: free on the ā_i, b̄_i
/// (weight 1) and c̄_j, j < n (weight 2) when punctured; the one-relator
/// quotient by Σ[ā_i,b̄_i] when compact.
pub struct SurfaceAlgebra {
    pub spec: SurfaceSpec,
    algebra_kind: SurfaceKind,
    /// basis indices of ā_i in the exposed algebra
    pub a_indices: Vec<usize>,
    /// basis indices of b̄_i
    pub b_indices: Vec<usize>,
    /// basis indices of c̄_j, 1 ≤ j ≤ n−1
    pub c_indices: Vec<usize>,
    /// the distinguished c̄_n = −(Σ[ā_i,b̄_i] + Σ_{j<n} c̄_j), when n ≥ 1
    pub cbar_last: Option<LieElement>,
}

enum SurfaceKind {
    Free(FreeLieAlgebra),
    Compact {
        cover: FreeLieAlgebra,
        quotient: Quotient,
    },
}

impl SurfaceAlgebra {
    pub fn algebra(&self) -> &GradedLieAlgebra {
        match &self.algebra_kind {
            SurfaceKind::Free(f) => f.algebra(),
            SurfaceKind::Compact { quotient, .. } => &quotient.algebra,
        }
    }

    /// The free cover (the algebra itself in the punctured case).
    pub fn free_cover(&self) -> &FreeLieAlgebra {
        match &self.algebra_kind {
            SurfaceKind::Free(f) => f,
            SurfaceKind::Compact { cover, .. } => cover,
        }
    }

    pub fn is_free(&self) -> bool {
        matches!(self.algebra_kind, SurfaceKind::Free(_))
    }

    /// Homogeneous relations in free-cover coordinates (empty when free).
    pub fn relations(&self) -> Vec<LieElement> {
        match &self.algebra_kind {
            SurfaceKind::Free(_) => Vec::new(),
            SurfaceKind::Compact { cover, .. } => {
                vec![symplectic_relation(cover)]
            }
        }
    }
}

fn symplectic_relation(cover: &FreeLieAlgebra) -> LieElement {
    let alg = cover.algebra();
    let g = cover.alphabet().len() / 2;
    let mut omega = alg.zero();
    for i in 0..g {
        let a = alg.basis_element(cover.generator_index(&format!("a{}", i + 1)).unwrap());
        let b = alg.basis_element(cover.generator_index(&format!("b{}", i + 1)).unwrap());
        omega = alg.add(&omega, &alg.nilpotent_bracket(&a, &b));
    }
    omega
}

/// Build the surface-group graded Lie algebra for `(g, n)` over `ring`,
/// truncated at degree `n_trunc`.
pub fn surface_algebra(
    spec: SurfaceSpec,
    ring: CoeffRing,
    truncation: u32,
) -> Result<SurfaceAlgebra, FreeError> {
    if truncation < 2 {
        return Err(FreeError::TruncationTooSmall);
    }
    let (g, n) = (spec.genus, spec.punctures);
    let mut gens: Vec<(String, u32)> = Vec::new();
    for i in 1..=g {
        gens.push((format!("a{i}"), 1));
        gens.push((format!("b{i}"), 1));
    }
    if n >= 1 {
        if (g, n) == (0, 3) {
            // Ihara's generators
            gens.push(("x".to_string(), 2));
            gens.push(("y".to_string(), 2));
        } else {
            for j in 1..n {
                gens.push((format!("c{j}"), 2));
            }
        }
    }
    let gens_ref: Vec<(&str, u32)> = gens.iter().map(|(s, w)| (s.as_str(), *w)).collect();
    let alphabet = WeightedAlphabet::new(&gens_ref)?;
    let free = FreeLieAlgebra::new(ring, alphabet, truncation)?;
    let alg = free.algebra();

    let a_indices: Vec<usize> = (1..=g)
        .map(|i| free.generator_index(&format!("a{i}")).unwrap())
        .collect();
    let b_indices: Vec<usize> = (1..=g)
        .map(|i| free.generator_index(&format!("b{i}")).unwrap())
        .collect();
    let c_indices: Vec<usize> = if (g, n) == (0, 3) {
        vec![
            free.generator_index("x").unwrap(),
            free.generator_index("y").unwrap(),
        ]
    } else if n >= 1 {
        (1..n)
            .map(|j| free.generator_index(&format!("c{j}")).unwrap())
            .collect()
    } else {
        Vec::new()
    };

    if n == 0 {
        let omega = symplectic_relation(&free);
        let quotient = alg.quotient_by_homogeneous_ideal(&[omega])?;
        let map = |idxs: &[usize]| -> Vec<usize> {
            idxs.iter()
                .map(|&i| quotient.survivor_of(i).expect("generators survive"))
                .collect()
        };
        let (qa, qb) = (map(&a_indices), map(&b_indices));
        return Ok(SurfaceAlgebra {
            spec,
            algebra_kind: SurfaceKind::Compact {
                cover: free,
                quotient,
            },
            a_indices: qa,
            b_indices: qb,
            c_indices: Vec::new(),
            cbar_last: None,
        });
    }

    // c̄_n = −(Σ[ā_i,b̄_i] + Σ_{j<n} c̄_j)
    let mut s = alg.zero();
    for (&ai, &bi) in a_indices.iter().zip(&b_indices) {
        s = alg.add(
            &s,
            &alg.nilpotent_bracket(&alg.basis_element(ai), &alg.basis_element(bi)),
        );
    }
    for &cj in &c_indices {
        s = alg.add(&s, &alg.basis_element(cj));
    }
    let cbar_last = alg.scale(ring.neg(1), &s);
    Ok(SurfaceAlgebra {
        spec,
        algebra_kind: SurfaceKind::Free(free),
        a_indices,
        b_indices,
        c_indices,
        cbar_last: Some(cbar_last),
    })
}

/// Ihara's derivation on the (0,3) algebra: `D_f(x) = 0`, `D_f(y) = [y, f]`,
/// extended by Leibniz; grade shift `deg f`.
pub fn ihara_derivation(
    surf: &SurfaceAlgebra,
    f: &LieElement,
) -> Result<Derivation, FreeError> {
    if (surf.spec.genus, surf.spec.punctures) != (0, 3) {
        return Err(FreeError::NotIharaAlgebra);
    }
    let free = surf.free_cover();
    let alg = free.algebra();
    if f.is_zero() {
        return Ok(free.leibniz_derivation(0, &[alg.zero(), alg.zero()])?);
    }
    let m = alg
        .homogeneous_degree(f)
        .ok_or(FreeError::BadIharaInput)? as i64;
    if m as u32 > alg.truncation().saturating_sub(2) {
        return Err(FreeError::BadIharaInput);
    }
    let y = alg.basis_element(free.generator_index("y").unwrap());
    let dy = alg.nilpotent_bracket(&y, f);
    free.leibniz_derivation(m, &[alg.zero(), dy])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> CoeffRing {
        CoeffRing::field(3).unwrap()
    }
    fn f2() -> CoeffRing {
        CoeffRing::field(2).unwrap()
    }

    #[test]
    fn witt_two_generators() {
        assert_eq!(witt_ranks(&[1, 1], 8), vec![2, 1, 2, 3, 6, 9, 18, 30]);
    }

    #[test]
    fn witt_three_generators() {
        assert_eq!(witt_ranks(&[1, 1, 1], 4), vec![3, 3, 8, 18]);
    }

    #[test]
    fn witt_two_weight_two_generators() {
        assert_eq!(witt_ranks(&[2, 2], 8), vec![0, 2, 0, 1, 0, 2, 0, 3]);
    }

    #[test]
    fn hall_counts_match_witt() {
        for weights in [vec![1, 1], vec![1, 1, 1], vec![1, 1, 2], vec![2, 2]] {
            let gens: Vec<(String, u32)> = weights
                .iter()
                .enumerate()
                .map(|(i, &w)| (format!("g{i}"), w))
                .collect();
            let gens_ref: Vec<(&str, u32)> = gens.iter().map(|(s, w)| (s.as_str(), *w)).collect();
            let alph = WeightedAlphabet::new(&gens_ref).unwrap();
            let hb = hall_basis(&alph, 6);
            assert_eq!(hb.ranks, witt_ranks(&weights, 6), "weights {weights:?}");
        }
    }

    #[test]
    fn free_algebra_is_valid() {
        let alph = WeightedAlphabet::new(&[("x", 1), ("y", 1)]).unwrap();
        let fl = FreeLieAlgebra::new(f3(), alph, 5).unwrap();
        assert!(fl.algebra().validate().is_valid());
        assert_eq!(
            fl.algebra().rank_table(),
            vec![(1, 2), (2, 1), (3, 2), (4, 3), (5, 6)]
        );
    }

    #[test]
    fn rewrite_examples() {
        let alph = WeightedAlphabet::new(&[("x", 1), ("y", 1)]).unwrap();
        let fl = FreeLieAlgebra::new(f3(), alph, 3).unwrap();
        let alg = fl.algebra();

        let x = fl.rewrite_to_hall(&BracketExpr::gen("x")).unwrap();
        assert_eq!(x, alg.basis_element(fl.generator_index("x").unwrap()));

        let xx = fl
            .rewrite_to_hall(&BracketExpr::bracket(BracketExpr::gen("x"), BracketExpr::gen("x")))
            .unwrap();
        assert!(xx.is_zero());

        // [[x,y],x] = -[x,[x,y]]
        let e = fl
            .rewrite_to_hall(&BracketExpr::bracket(
                BracketExpr::bracket(BracketExpr::gen("x"), BracketExpr::gen("y")),
                BracketExpr::gen("x"),
            ))
            .unwrap();
        let hall = alg.index_of("[x,[x,y]]").unwrap();
        assert_eq!(e, alg.scale(alg.ring().neg(1), &alg.basis_element(hall)));

        // weight overflow flagged
        let deep = BracketExpr::bracket(
            BracketExpr::bracket(
                BracketExpr::bracket(BracketExpr::gen("x"), BracketExpr::gen("y")),
                BracketExpr::gen("y"),
            ),
            BracketExpr::gen("y"),
        );
        assert!(matches!(
            fl.rewrite_to_hall(&deep),
            Err(FreeError::WeightOverflow(4, 3))
        ));
    }

    #[test]
    fn rewrite_is_linear_on_jacobi() {
        // rewriting the Jacobi combination of basis elements yields zero
        let alph = WeightedAlphabet::new(&[("x", 1), ("y", 1), ("z", 1)]).unwrap();
        let fl = FreeLieAlgebra::new(f3(), alph, 3).unwrap();
        let (x, y, z) = (BracketExpr::gen("x"), BracketExpr::gen("y"), BracketExpr::gen("z"));
        let jac = [
            BracketExpr::bracket(BracketExpr::bracket(x.clone(), y.clone()), z.clone()),
            BracketExpr::bracket(BracketExpr::bracket(y.clone(), z.clone()), x.clone()),
            BracketExpr::bracket(BracketExpr::bracket(z, x), y),
        ];
        let alg = fl.algebra();
        let mut total = alg.zero();
        for e in &jac {
            total = alg.add(&total, &fl.rewrite_to_hall(e).unwrap());
        }
        assert!(total.is_zero());
    }

    #[test]
    fn surface_11_ranks() {
        let s = surface_algebra(SurfaceSpec::new(1, 1).unwrap(), f3(), 5).unwrap();
        assert!(s.is_free());
        assert_eq!(
            s.algebra().rank_table(),
            vec![(1, 2), (2, 1), (3, 2), (4, 3), (5, 6)]
        );
        // c̄_1 = -[a1,b1]
        let alg = s.algebra();
        let ab = alg.nilpotent_bracket(
            &alg.basis_element(s.a_indices[0]),
            &alg.basis_element(s.b_indices[0]),
        );
        assert_eq!(s.cbar_last.as_ref().unwrap(), &alg.scale(alg.ring().neg(1), &ab));
    }

    #[test]
    fn surface_03_is_iharas_algebra() {
        let s = surface_algebra(SurfaceSpec::new(0, 3).unwrap(), f2(), 8).unwrap();
        assert!(s.is_free());
        assert_eq!(
            s.algebra().rank_table(),
            vec![(1, 0), (2, 2), (3, 0), (4, 1), (5, 0), (6, 2), (7, 0), (8, 3)]
        );
        assert!(s.algebra().index_of("x").is_some());
        assert!(s.algebra().index_of("y").is_some());
    }

    #[test]
    fn surface_20_labute_ranks() {
        let s = surface_algebra(SurfaceSpec::new(2, 0).unwrap(), f3(), 3).unwrap();
        assert!(!s.is_free());
        assert_eq!(s.algebra().rank_table(), vec![(1, 4), (2, 5), (3, 16)]);
        assert!(s.algebra().validate().is_valid());
    }

    #[test]
    fn surface_12_cbar() {
        let s = surface_algebra(SurfaceSpec::new(1, 2).unwrap(), f3(), 4).unwrap();
        let alg = s.algebra();
        // c̄_2 = -([a1,b1] + c1)
        let ab = alg.nilpotent_bracket(
            &alg.basis_element(s.a_indices[0]),
            &alg.basis_element(s.b_indices[0]),
        );
        let c1 = alg.basis_element(s.c_indices[0]);
        let want = alg.scale(alg.ring().neg(1), &alg.add(&ab, &c1));
        assert_eq!(s.cbar_last.as_ref().unwrap(), &want);
    }

    #[test]
    fn surface_rejects_non_hyperbolic() {
        assert!(SurfaceSpec::new(0, 2).is_err());
        assert!(SurfaceSpec::new(1, 0).is_err());
        assert!(SurfaceSpec::new(0, 3).is_ok());
    }

    #[test]
    fn ihara_examples() {
        let s = surface_algebra(SurfaceSpec::new(0, 3).unwrap(), f3(), 8).unwrap();
        let alg = s.algebra();

        let d0 = ihara_derivation(&s, &alg.zero()).unwrap();
        assert!(d0.is_zero());

        let x = alg.basis_element(s.c_indices[0]);
        let y = alg.basis_element(s.c_indices[1]);
        let d = ihara_derivation(&s, &x).unwrap();
        assert!(d.image_of(alg, s.c_indices[0]).is_zero());
        let dy = d.image_of(alg, s.c_indices[1]);
        assert_eq!(dy, alg.nilpotent_bracket(&y, &x));
        assert!(!dy.is_zero());
        assert!(d.leibniz_violations(alg).is_empty());

        // D([x,y]) = [x,[y,x]] by Leibniz with D(x) = 0
        let xy = alg.nilpotent_bracket(&x, &y);
        let (idx, _) = xy.terms().next().unwrap();
        assert_eq!(xy.coeff(idx), 1); // [x,y] is itself a Hall basis vector
        let dxy = d.image_of(alg, idx);
        assert_eq!(dxy, alg.nilpotent_bracket(&x, &dy));
    }

    #[test]
    fn ihara_kernel_is_span_y() {
        // D_f is determined by D_f(y) = [y,f], so ker(f ↦ D_f) per degree is
        // the centralizer of y: span(y) in degree 2, zero above.
        let s = surface_algebra(SurfaceSpec::new(0, 3).unwrap(), f2(), 6).unwrap();
        let alg = s.algebra();
        let yidx = s.c_indices[1];
        for (m, expected_kernel) in [(2u32, 1usize), (4, 0)] {
            let basis: Vec<usize> = alg.degree_indices(m).collect();
            let mut rows = Vec::new();
            for &i in &basis {
                let d = ihara_derivation(&s, &alg.basis_element(i)).unwrap();
                let img = d.image_of(alg, yidx);
                let mut row = vec![0i64; alg.dim()];
                for (t, c) in img.terms() {
                    row[t] = c as i64;
                }
                rows.push(row);
            }
            let mat = crate::coeff::ModMatrix::from_dense(alg.ring(), &rows);
            assert_eq!(
                basis.len() - crate::coeff::rank(&mat.transpose()).unwrap(),
                expected_kernel,
                "degree {m}"
            );
        }
    }
}
