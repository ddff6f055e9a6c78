//! The Hamiltonian Lie superalgebra H(2,1;t) inside the superderivation
//! algebra of Λ(2,1;t).
//!
//! Canonical basis: D_H(x1^(i1) x2^(i2) ξ^j) with i1+i2+j ≥ 1 (D_H kills
//! constants). The bracket is [D_H(f), D_H(g)] = D_H(D_H(f)(g)), computed
//! through the ambient derivation components and cached as a structure
//! constant table. The module also verifies the generalized restricted
//! structure and the osp(1|2) identification of the zero graded component.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cache;
use crate::dpsuper::{DerivIdx, MonoIdx, ShapeParams, SuperPoly};
use crate::gfp::{FieldScalar, MatrixGF};

/// The constants of the D_H definition: the index permutation i', the signs
/// σ(i), and the parities τ(i).
#[derive(Debug, Clone, Copy)]
pub struct SigmaTauTables;

impl SigmaTauTables {
    /// i' : 1 ↦ 2, 2 ↦ 1, 3 ↦ 3.
    pub const fn prime(i: DerivIdx) -> DerivIdx {
        match i {
            DerivIdx::D1 => DerivIdx::D2,
            DerivIdx::D2 => DerivIdx::D1,
            DerivIdx::D3 => DerivIdx::D3,
        }
    }

    /// σ : (1, -1, 1).
    pub const fn sigma(i: DerivIdx) -> i64 {
        match i {
            DerivIdx::D2 => -1,
            _ => 1,
        }
    }

    /// τ : (0, 0, 1).
    pub const fn tau(i: DerivIdx) -> u8 {
        match i {
            DerivIdx::D3 => 1,
            _ => 0,
        }
    }
}

/// An element of H(2,1;t) in the canonical basis D_H(x1^(i1)x2^(i2)ξ^j),
/// keyed by the defining monomial (which always has degree ≥ 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HamElement {
    shape: ShapeParams,
    coeffs: BTreeMap<MonoIdx, u64>,
}

impl HamElement {
    pub fn zero(shape: ShapeParams) -> Self {
        HamElement { shape, coeffs: BTreeMap::new() }
    }

    pub fn basis(shape: ShapeParams, m: MonoIdx, coeff: i64) -> Self {
        assert!(m.degree() >= 1, "canonical basis requires i1+i2+j >= 1");
        assert!(shape.contains(m), "index out of shape bounds");
        let c = FieldScalar::new(coeff, shape.p()).value();
        let mut coeffs = BTreeMap::new();
        if c != 0 {
            coeffs.insert(m, c);
        }
        HamElement { shape, coeffs }
    }

    pub fn shape(&self) -> ShapeParams {
        self.shape
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, m: MonoIdx) -> u64 {
        self.coeffs.get(&m).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (MonoIdx, u64)> + '_ {
        self.coeffs.iter().map(|(&m, &c)| (m, c))
    }

    fn add_term(&mut self, m: MonoIdx, c: u64) {
        if c == 0 {
            return;
        }
        let p = self.shape.p().get();
        let e = self.coeffs.entry(m).or_insert(0);
        *e = (*e + c) % p;
        if *e == 0 {
            self.coeffs.remove(&m);
        }
    }

    pub fn add(&self, other: &HamElement) -> HamElement {
        assert_eq!(self.shape, other.shape, "shape mismatch");
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m, c);
        }
        out
    }

    pub fn scale(&self, c: i64) -> HamElement {
        let c = FieldScalar::new(c, self.shape.p()).value();
        let p = self.shape.p().get();
        let mut out = HamElement::zero(self.shape);
        for (m, v) in self.terms() {
            out.add_term(m, v * c % p);
        }
        out
    }

    pub fn sub(&self, other: &HamElement) -> HamElement {
        self.add(&other.scale(-1))
    }

    /// Z2-parity when all support monomials agree; None for mixed elements.
    pub fn parity(&self) -> Option<u8> {
        let mut it = self.coeffs.keys();
        let first = it.next()?.parity();
        if it.all(|m| m.parity() == first) {
            Some(first)
        } else {
            None
        }
    }
}

impl fmt::Display for HamElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.coeffs.iter().map(|(m, c)| format!("{c}*D_H({m})")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Sparse coefficient vector against the algebra's basis order.
pub type SparseElem = Vec<(usize, u64)>;

/// The generators of the zero graded component realized inside H(2,1;t):
/// h = x2 D2 - x1 D1, e = x2 D1, f = x1 D2, and the odd pair
/// E = ξ D1 + x2 D3, F = ξ D2 - x1 D3.
#[derive(Debug, Clone)]
pub struct OspGenerators {
    pub h: HamElement,
    pub e: HamElement,
    pub f: HamElement,
    pub cap_e: HamElement,
    pub cap_f: HamElement,
}

impl OspGenerators {
    pub fn all(&self) -> [(&'static str, &HamElement); 5] {
        [("h", &self.h), ("e", &self.e), ("f", &self.f), ("E", &self.cap_e), ("F", &self.cap_f)]
    }
}

/// The generalized restricted structure data: the ordered even basis E, the
/// exponent tuple s, and the map φ_s (supported on D_H(x1 x2) only).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GRStructure {
    /// Ordered even basis: D_H(x1), D_H(x2), then the remaining even
    /// canonical basis elements in lexicographic order.
    pub elements: Vec<MonoIdx>,
    /// Exponents asserted by the construction: (t2, t1, 1, 1, ...).
    pub s_claimed: Vec<u32>,
    /// Exponents verified to satisfy the adjoint identity (equal to
    /// s_claimed except where the report records a repair).
    pub s_verified: Vec<u32>,
}

impl GRStructure {
    /// φ_s(e_i): D_H(x1 x2) maps to itself, everything else to zero.
    pub fn phi(&self, shape: ShapeParams, m: MonoIdx) -> HamElement {
        if m == MonoIdx::new(1, 1, 0) {
            HamElement::basis(shape, m, 1)
        } else {
            HamElement::zero(shape)
        }
    }
}

/// Verdict for one even basis element in the GR check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GrCell {
    pub element: MonoIdx,
    pub claimed_s: u32,
    pub claimed_ok: bool,
    /// First basis vector on which the claimed identity fails.
    pub counterexample: Option<MonoIdx>,
    /// Minimal exponent for which the identity does hold (with the same φ).
    pub verified_s: Option<u32>,
}

/// Result of the generalized-restricted verification.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GrReport {
    pub p: u64,
    pub t: (u32, u32),
    pub cells: Vec<GrCell>,
    /// All elements satisfy the identity with the claimed exponents.
    pub claimed_ok: bool,
    /// All elements satisfy the identity with the verified exponents.
    pub verified_ok: bool,
    pub structure: GRStructure,
}

impl GrReport {
    /// Elements whose claimed exponent had to be repaired, with (claimed,
    /// verified) exponents.
    pub fn repairs(&self) -> Vec<(MonoIdx, u32, u32)> {
        self.cells
            .iter()
            .filter(|c| !c.claimed_ok)
            .filter_map(|c| c.verified_s.map(|s| (c.element, c.claimed_s, s)))
            .collect()
    }
}

/// One relation check in the osp(1|2) verification.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RelationCheck {
    pub name: String,
    pub holds: bool,
}

/// Result of the osp(1|2) identification of the zero graded component.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OspReport {
    pub relations: Vec<RelationCheck>,
    pub dim_zero_component: usize,
    /// The five generators are linearly independent and span g_[0].
    pub spans_zero_component: bool,
    /// Textual notes (e.g. where the verified relation coefficients differ
    /// from a printed source list).
    pub notes: Vec<String>,
}

impl OspReport {
    pub fn all_hold(&self) -> bool {
        self.relations.iter().all(|r| r.holds) && self.spans_zero_component
    }
}

/// Witness of a super-Jacobi failure.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JacobiWitness {
    pub x: MonoIdx,
    pub y: MonoIdx,
    pub z: MonoIdx,
}

/// H(2,1;t) with its canonical basis and cached structure constants.
pub struct HamAlgebra {
    shape: ShapeParams,
    basis: Vec<MonoIdx>,
    index: HashMap<MonoIdx, usize>,
    brackets: Vec<Vec<SparseElem>>,
    lie_generators: Vec<usize>,
}

impl HamAlgebra {
    /// Build the algebra and its full structure constant table.
    pub fn new(shape: ShapeParams) -> Self {
        let basis = Self::enumerate_basis(shape);
        let index: HashMap<MonoIdx, usize> =
            basis.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let mut alg =
            HamAlgebra { shape, basis, index, brackets: Vec::new(), lie_generators: Vec::new() };
        alg.brackets = alg.build_table();
        alg.lie_generators = alg.compute_lie_generators();
        alg
    }

    /// Build the algebra, loading the structure constant table from the
    /// cache directory when a valid cache file exists, and writing one
    /// after computing otherwise. Any invalid cache (version, shape or
    /// checksum mismatch, parse failure) is ignored and recomputed.
    pub fn with_cache(shape: ShapeParams, cache_dir: &Path) -> std::io::Result<Self> {
        let basis = Self::enumerate_basis(shape);
        let index: HashMap<MonoIdx, usize> =
            basis.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let path = cache_dir.join(format!(
            "hamkac-brackets-p{}-t{}x{}.json",
            shape.p().get(),
            shape.t1(),
            shape.t2()
        ));
        if let Some(table) = Self::load_table(&path, shape, &basis) {
            let mut alg =
                HamAlgebra { shape, basis, index, brackets: table, lie_generators: Vec::new() };
            alg.lie_generators = alg.compute_lie_generators();
            return Ok(alg);
        }
        let mut alg =
            HamAlgebra { shape, basis, index, brackets: Vec::new(), lie_generators: Vec::new() };
        alg.brackets = alg.build_table();
        alg.lie_generators = alg.compute_lie_generators();
        alg.store_table(&path)?;
        Ok(alg)
    }

    fn enumerate_basis(shape: ShapeParams) -> Vec<MonoIdx> {
        let mut basis = Vec::new();
        for i1 in 0..shape.bound1() as u32 {
            for i2 in 0..shape.bound2() as u32 {
                for j in 0..=1u8 {
                    let m = MonoIdx::new(i1, i2, j);
                    if m.degree() >= 1 {
                        basis.push(m);
                    }
                }
            }
        }
        basis
    }

    fn build_table(&self) -> Vec<Vec<SparseElem>> {
        let dim = self.basis.len();
        (0..dim)
            .into_par_iter()
            .map(|i| {
                (0..dim)
                    .map(|j| self.bracket_raw(self.basis[i], self.basis[j]))
                    .collect()
            })
            .collect()
    }

    /// [D_H(m1), D_H(m2)] computed from scratch through the polynomial route.
    fn bracket_raw(&self, m1: MonoIdx, m2: MonoIdx) -> SparseElem {
        let f = SuperPoly::monomial(self.shape, m1, 1).unwrap();
        let g = SuperPoly::monomial(self.shape, m2, 1).unwrap();
        let h = self.apply_as_derivation(&f, &g);
        let mut out: SparseElem = h
            .terms()
            .filter(|(m, _)| m.degree() >= 1)
            .map(|(m, c)| (self.index[&m], c))
            .collect();
        out.sort_unstable_by_key(|&(i, _)| i);
        out
    }

    pub fn shape(&self) -> ShapeParams {
        self.shape
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn dim_even(&self) -> usize {
        self.basis.iter().filter(|m| m.parity() == 0).count()
    }

    pub fn dim_odd(&self) -> usize {
        self.basis.iter().filter(|m| m.parity() == 1).count()
    }

    pub fn basis(&self) -> &[MonoIdx] {
        &self.basis
    }

    pub fn basis_index(&self, m: MonoIdx) -> Option<usize> {
        self.index.get(&m).copied()
    }

    /// Z-grade of a canonical basis element: i1 + i2 + j - 2.
    pub fn grade(&self, m: MonoIdx) -> i64 {
        m.degree() as i64 - 2
    }

    /// Membership in the filtration piece g_i = ⊕_{k ≥ i} g_[k].
    pub fn filtration_member(&self, m: MonoIdx, i: i64) -> bool {
        self.grade(m) >= i
    }

    /// Largest grade present, by enumeration: p^t1 + p^t2 - 3.
    pub fn max_grade(&self) -> i64 {
        self.basis.iter().map(|&m| self.grade(m)).max().unwrap()
    }

    /// The top grade the source text displays for the grading
    /// (p^(t1+t2) - 3), kept for the discrepancy note in reports.
    pub fn displayed_grade_bound(&self) -> i64 {
        self.shape.pt() as i64 - 3
    }

    /// The ambient components (f1, f2, f3) with D_H(f) = f1 D1 + f2 D2 + f3 D3,
    /// where f_i = σ(i') (-1)^(τ(i') d(f)) D_{i'}(f) termwise and d is the
    /// Z2-parity of the term.
    pub fn ambient_components(&self, f: &SuperPoly) -> [SuperPoly; 3] {
        let mut out =
            [SuperPoly::zero(self.shape), SuperPoly::zero(self.shape), SuperPoly::zero(self.shape)];
        for (slot, i) in DerivIdx::ALL.into_iter().enumerate() {
            let ip = SigmaTauTables::prime(i);
            for (m, c) in f.terms() {
                let term = SuperPoly::monomial(self.shape, m, c as i64).unwrap();
                let mut sign = SigmaTauTables::sigma(ip);
                if SigmaTauTables::tau(ip) * m.parity() == 1 {
                    sign = -sign;
                }
                out[slot] = out[slot].add(&term.deriv(ip).scale(sign)).unwrap();
            }
        }
        out
    }

    /// D_H(f) expressed in the canonical basis; D_H(1) = 0.
    pub fn d_h(&self, f: &SuperPoly) -> HamElement {
        let mut out = HamElement::zero(self.shape);
        for (m, c) in f.terms() {
            if m.degree() >= 1 {
                out.add_term(m, c);
            }
        }
        out
    }

    /// The derivation D_H(f) applied to g: f1 D1(g) + f2 D2(g) + f3 D3(g).
    pub fn apply_as_derivation(&self, f: &SuperPoly, g: &SuperPoly) -> SuperPoly {
        let comps = self.ambient_components(f);
        let mut out = SuperPoly::zero(self.shape);
        for (comp, k) in comps.iter().zip(DerivIdx::ALL) {
            out = out.add(&comp.mul(&g.deriv(k)).unwrap()).unwrap();
        }
        out
    }

    /// Indices of a small verified Lie-generating subset of the basis.
    /// A subspace invariant under these elements is invariant under all of
    /// g, which makes submodule spins and intertwiner systems cheaper
    /// without changing their results.
    pub fn lie_generator_indices(&self) -> &[usize] {
        &self.lie_generators
    }

    fn compute_lie_generators(&self) -> Vec<usize> {
        let candidate: Vec<usize> = self
            .basis
            .iter()
            .enumerate()
            .filter(|(_, &m)| self.grade(m) <= 1)
            .map(|(i, _)| i)
            .collect();
        // verify by Lie closure: grow the span of the candidates under
        // bracketing with candidates until stable
        let p = self.shape.p().get();
        let dim = self.dim();
        let mut rows: Vec<Vec<u64>> = Vec::new();
        let mut pivots: Vec<usize> = Vec::new();
        let insert = |mut v: Vec<u64>, rows: &mut Vec<Vec<u64>>, pivots: &mut Vec<usize>| {
            for (row, &piv) in rows.iter().zip(pivots.iter()) {
                let c = v[piv];
                if c != 0 {
                    for k in 0..dim {
                        v[k] = (v[k] + (p - c) * row[k]) % p;
                    }
                }
            }
            if let Some(piv) = v.iter().position(|&x| x != 0) {
                let inv = FieldScalar::from_u64(v[piv], self.shape.p()).inv().value();
                for x in v.iter_mut() {
                    *x = *x * inv % p;
                }
                rows.push(v);
                pivots.push(piv);
                true
            } else {
                false
            }
        };
        let mut work: Vec<Vec<u64>> = Vec::new();
        for &i in &candidate {
            let mut v = vec![0u64; dim];
            v[i] = 1;
            if insert(v.clone(), &mut rows, &mut pivots) {
                work.push(v);
            }
        }
        while let Some(v) = work.pop() {
            if rows.len() == dim {
                break;
            }
            for &g in &candidate {
                let mut w = vec![0u64; dim];
                for (j, &c) in v.iter().enumerate() {
                    if c != 0 {
                        for &(k, ck) in &self.brackets[g][j] {
                            w[k] = (w[k] + c * ck) % p;
                        }
                    }
                }
                if insert(w.clone(), &mut rows, &mut pivots) {
                    work.push(w);
                }
            }
        }
        if rows.len() == dim {
            candidate
        } else {
            // fall back to the full basis (never observed; kept for safety)
            (0..dim).collect()
        }
    }

    /// Structure constants [b_i, b_j] from the cached table.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &SparseElem {
        &self.brackets[i][j]
    }

    /// The Lie superbracket, bilinear over the table.
    pub fn bracket(&self, x: &HamElement, y: &HamElement) -> HamElement {
        assert_eq!(x.shape(), self.shape, "shape mismatch");
        assert_eq!(y.shape(), self.shape, "shape mismatch");
        let p = self.shape.p().get();
        let mut out = HamElement::zero(self.shape);
        for (mx, cx) in x.terms() {
            let i = self.index[&mx];
            for (my, cy) in y.terms() {
                let j = self.index[&my];
                for &(k, c) in &self.brackets[i][j] {
                    out.add_term(self.basis[k], cx * cy % p * c % p);
                }
            }
        }
        out
    }

    /// The adjoint action of x as a dim × dim matrix over F_p.
    pub fn ad_matrix(&self, x: &HamElement) -> MatrixGF {
        let p = self.shape.p().get();
        let dim = self.dim();
        let mut trips = Vec::new();
        for (mx, cx) in x.terms() {
            let i = self.index[&mx];
            for j in 0..dim {
                for &(k, c) in &self.brackets[i][j] {
                    trips.push((k, j, cx * c % p));
                }
            }
        }
        MatrixGF::from_triplets(dim, dim, self.shape.p(), trips)
    }

    /// The abbreviations D1, D2, D3 as canonical-basis elements:
    /// D1 = -D_H(x2), D2 = D_H(x1), D3 = -D_H(ξ).
    pub fn d_abbrev(&self, k: DerivIdx) -> HamElement {
        match k {
            DerivIdx::D1 => HamElement::basis(self.shape, MonoIdx::new(0, 1, 0), -1),
            DerivIdx::D2 => HamElement::basis(self.shape, MonoIdx::new(1, 0, 0), 1),
            DerivIdx::D3 => HamElement::basis(self.shape, MonoIdx::new(0, 0, 1), -1),
        }
    }

    /// h, e, f, E, F of the zero graded component:
    /// h = D_H(x1 x2), f = D_H(x1^(2)), e = -D_H(x2^(2)),
    /// F = D_H(x1 ξ), E = -D_H(x2 ξ).
    pub fn osp_generators(&self) -> OspGenerators {
        OspGenerators {
            h: HamElement::basis(self.shape, MonoIdx::new(1, 1, 0), 1),
            e: HamElement::basis(self.shape, MonoIdx::new(0, 2, 0), -1),
            f: HamElement::basis(self.shape, MonoIdx::new(2, 0, 0), 1),
            cap_e: HamElement::basis(self.shape, MonoIdx::new(0, 1, 1), -1),
            cap_f: HamElement::basis(self.shape, MonoIdx::new(1, 0, 1), 1),
        }
    }

    /// Check the twelve (anti)commutation relations of the zero component,
    /// the dimension of g_[0], and that the five generators span it.
    ///
    /// The relations verified are the ones the displayed matrix generators
    /// (h = E22-E33, e = E23, f = E32, E = E13+E21, F = E12-E31) actually
    /// satisfy: [h,e] = 2e and [h,f] = -2f, not the [h,e] = e / [h,f] = -f
    /// sometimes printed; the report carries a note in that case.
    pub fn verify_osp(&self) -> OspReport {
        let gens = self.osp_generators();
        let OspGenerators { h, e, f, cap_e, cap_f } = &gens;
        let br = |x: &HamElement, y: &HamElement| self.bracket(x, y);
        let checks: Vec<(&str, HamElement, HamElement)> = vec![
            ("[h,e]=2e", br(h, e), e.scale(2)),
            ("[h,f]=-2f", br(h, f), f.scale(-2)),
            ("[h,E]=E", br(h, cap_e), cap_e.clone()),
            ("[h,F]=-F", br(h, cap_f), cap_f.scale(-1)),
            ("[e,f]=h", br(e, f), h.clone()),
            ("[e,E]=0", br(e, cap_e), HamElement::zero(self.shape)),
            ("[e,F]=-E", br(e, cap_f), cap_e.scale(-1)),
            ("[f,E]=-F", br(f, cap_e), cap_f.scale(-1)),
            ("[f,F]=0", br(f, cap_f), HamElement::zero(self.shape)),
            ("[E,E]=2e", br(cap_e, cap_e), e.scale(2)),
            ("[E,F]=h", br(cap_e, cap_f), h.clone()),
            ("[F,F]=-2f", br(cap_f, cap_f), f.scale(-2)),
        ];
        let relations: Vec<RelationCheck> = checks
            .iter()
            .map(|(name, got, want)| RelationCheck { name: name.to_string(), holds: got == want })
            .collect();

        let zero_component: Vec<usize> = self
            .basis
            .iter()
            .enumerate()
            .filter(|(_, &m)| self.grade(m) == 0)
            .map(|(i, _)| i)
            .collect();
        let dim_zero = zero_component.len();

        // stack the five generators as rows over the full basis and check rank.
        let rows: Vec<Vec<u64>> = gens
            .all()
            .iter()
            .map(|(_, g)| {
                let mut v = vec![0u64; self.dim()];
                for (m, c) in g.terms() {
                    v[self.index[&m]] = c;
                }
                v
            })
            .collect();
        let mat = MatrixGF::from_dense_rows(rows, self.shape.p());
        let spans = mat.rank() == 5
            && dim_zero == 5
            && gens.all().iter().all(|(_, g)| {
                g.terms().all(|(m, _)| self.grade(m) == 0)
            });

        let notes = vec![
            "relations verified in the normalization the matrix generators satisfy; \
             presentations stating [h,e]=e and [h,f]=-f differ from it in exactly those \
             two coefficients ([h,e]=2e, [h,f]=-2f here)"
                .to_string(),
        ];

        OspReport {
            relations,
            dim_zero_component: dim_zero,
            spans_zero_component: spans,
            notes,
        }
    }

    /// Ordered even basis per the GR construction: D_H(x1), D_H(x2), then
    /// the remaining even canonical basis elements in lexicographic order.
    pub fn gr_even_basis(&self) -> Vec<MonoIdx> {
        let x1 = MonoIdx::new(1, 0, 0);
        let x2 = MonoIdx::new(0, 1, 0);
        let mut out = vec![x1, x2];
        out.extend(self.basis.iter().copied().filter(|&m| m.parity() == 0 && m != x1 && m != x2));
        out
    }

    /// Claimed exponent for an even basis element: t2 for D_H(x1), t1 for
    /// D_H(x2), 1 for everything else.
    pub fn claimed_exponent(&self, m: MonoIdx) -> u32 {
        if m == MonoIdx::new(1, 0, 0) {
            self.shape.t2()
        } else if m == MonoIdx::new(0, 1, 0) {
            self.shape.t1()
        } else {
            1
        }
    }

    /// Verify the generalized restricted structure: for every even basis
    /// element e_i, compare (ad e_i)^(p^s) with ad φ_s(e_i) as exact
    /// matrices, on all of g (both parities). Elements failing with the
    /// claimed exponent are retried with larger exponents until the
    /// identity holds (the repaired exponent is recorded per cell).
    pub fn verify_gr(&self) -> GrReport {
        let elements = self.gr_even_basis();
        let s_max = self.shape.t1() + self.shape.t2() + 2;
        let cells: Vec<GrCell> = elements
            .par_iter()
            .map(|&m| {
                let x = HamElement::basis(self.shape, m, 1);
                let ad = self.ad_matrix(&x);
                let phi = if m == MonoIdx::new(1, 1, 0) {
                    self.ad_matrix(&HamElement::basis(self.shape, m, 1))
                } else {
                    MatrixGF::zero(self.dim(), self.dim(), self.shape.p())
                };
                let claimed_s = self.claimed_exponent(m);
                let mut verified_s = None;
                let mut claimed_ok = false;
                let mut counterexample = None;
                for s in claimed_s..=s_max {
                    let pow = ad.matpow(self.shape.p().get().pow(s)).unwrap();
                    if pow == phi {
                        verified_s = Some(s);
                        claimed_ok = s == claimed_s;
                        break;
                    } else if s == claimed_s {
                        // first basis vector where the columns disagree
                        let diff = pow.sub(&phi).unwrap();
                        let col = diff.triplets().iter().map(|&(_, c, _)| c).min().unwrap();
                        counterexample = Some(self.basis[col]);
                    }
                }
                GrCell { element: m, claimed_s, claimed_ok, counterexample, verified_s }
            })
            .collect();

        let claimed_ok = cells.iter().all(|c| c.claimed_ok);
        let verified_ok = cells.iter().all(|c| c.verified_s.is_some());
        let s_claimed: Vec<u32> = cells.iter().map(|c| c.claimed_s).collect();
        let s_verified: Vec<u32> =
            cells.iter().map(|c| c.verified_s.unwrap_or(c.claimed_s)).collect();
        GrReport {
            p: self.shape.p().get(),
            t: (self.shape.t1(), self.shape.t2()),
            cells,
            claimed_ok,
            verified_ok,
            structure: GRStructure { elements, s_claimed, s_verified },
        }
    }

    fn jacobi_triple(&self, xi: usize, yi: usize, zi: usize) -> bool {
        let p = self.shape.p().get();
        let par = |i: usize| self.basis[i].parity() as u64;
        let mut acc: HashMap<usize, u64> = HashMap::new();
        // (-1)^{|x||z|}[x,[y,z]] + (-1)^{|y||x|}[y,[z,x]] + (-1)^{|z||y|}[z,[x,y]]
        for &(a, b, c) in &[(xi, yi, zi), (yi, zi, xi), (zi, xi, yi)] {
            let sign = if par(a) * par(c) % 2 == 1 { p - 1 } else { 1 };
            for &(m, cm) in &self.brackets[b][c] {
                for &(k, ck) in &self.brackets[a][m] {
                    let v = acc.entry(k).or_insert(0);
                    *v = (*v + sign * cm % p * ck) % p;
                }
            }
        }
        acc.values().all(|&v| v == 0)
    }

    /// Exhaustive super-Jacobi over all basis triples; returns the first
    /// failing triple if any.
    pub fn jacobi_exhaustive(&self) -> Option<JacobiWitness> {
        let dim = self.dim();
        (0..dim).into_par_iter().find_map_any(|xi| {
            for yi in 0..dim {
                for zi in 0..dim {
                    if !self.jacobi_triple(xi, yi, zi) {
                        return Some(JacobiWitness {
                            x: self.basis[xi],
                            y: self.basis[yi],
                            z: self.basis[zi],
                        });
                    }
                }
            }
            None
        })
    }

    /// Sampled super-Jacobi over n random triples from a seeded generator.
    pub fn jacobi_sampled(&self, seed: u64, n: usize) -> Option<JacobiWitness> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
        let dim = self.dim();
        for _ in 0..n {
            let (xi, yi, zi) =
                (rng.gen_range(0..dim), rng.gen_range(0..dim), rng.gen_range(0..dim));
            if !self.jacobi_triple(xi, yi, zi) {
                return Some(JacobiWitness {
                    x: self.basis[xi],
                    y: self.basis[yi],
                    z: self.basis[zi],
                });
            }
        }
        None
    }

    /// Deliberately corrupt one structure constant. Only for negative
    /// controls in tests: the result is no longer a Lie superalgebra.
    #[doc(hidden)]
    pub fn flip_structure_constant(&mut self, i: usize, j: usize) {
        let p = self.shape.p().get();
        if let Some(first) = self.brackets[i][j].first_mut() {
            first.1 = (first.1 + 1) % p;
            if first.1 == 0 {
                self.brackets[i][j].remove(0);
            }
        } else {
            self.brackets[i][j].push((0, 1));
        }
    }

    // ---- structure constant cache ----

    fn table_payload(&self) -> BracketCachePayload {
        let brackets = self
            .brackets
            .iter()
            .enumerate()
            .flat_map(|(i, row)| {
                row.iter().enumerate().filter(|(_, e)| !e.is_empty()).map(move |(j, e)| {
                    (i, j, e.iter().map(|&(k, c)| (k, c)).collect::<Vec<_>>())
                })
            })
            .collect();
        BracketCachePayload {
            p: self.shape.p().get(),
            t1: self.shape.t1(),
            t2: self.shape.t2(),
            basis: self.basis.iter().map(|m| (m.i1, m.i2, m.j)).collect(),
            brackets,
        }
    }

    fn store_table(&self, path: &Path) -> std::io::Result<()> {
        cache::store(path, &self.table_payload())
    }

    fn load_table(
        path: &Path,
        shape: ShapeParams,
        basis: &[MonoIdx],
    ) -> Option<Vec<Vec<SparseElem>>> {
        let payload: BracketCachePayload = cache::load(path)?;
        if payload.p != shape.p().get() || payload.t1 != shape.t1() || payload.t2 != shape.t2() {
            return None;
        }
        let want_basis: Vec<(u32, u32, u8)> = basis.iter().map(|m| (m.i1, m.i2, m.j)).collect();
        if payload.basis != want_basis {
            return None;
        }
        let dim = basis.len();
        let mut table = vec![vec![Vec::new(); dim]; dim];
        for (i, j, entries) in payload.brackets {
            if i >= dim || j >= dim || entries.iter().any(|&(k, _)| k >= dim) {
                return None;
            }
            table[i][j] = entries;
        }
        Some(table)
    }
}

#[derive(Serialize, Deserialize)]
struct BracketCachePayload {
    p: u64,
    t1: u32,
    t2: u32,
    basis: Vec<(u32, u32, u8)>,
    brackets: Vec<(usize, usize, Vec<(usize, u64)>)>,
}
