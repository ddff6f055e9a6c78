//! Height-0 characters χ and the generalized χ-reduced Kac modules
//! K_χ(λ) = U_χ(g) ⊗_{u(g₀)} L0(λ), realized as explicit sparse action
//! matrices for every canonical basis element of H(2,1;t).
//!
//! The enveloping reduction is operational: PBW words D1^a D2^b D3^c ⊗ v
//! with a < p^t1, b < p^t2, c ∈ {0,1}; the overflow rules
//! D1^(p^t1) ↦ χ(D1)^(p^t1) and D2^(p^t2) ↦ χ(D2)^(p^t2) and D3² = 0
//! close the multiplication, and the action of higher-grade elements is
//! computed by the normal-ordering recursion
//! x·(D·m) = (-1)^(|x||D|) D·(x·m) + [x,D]·m, memoized per (x, word).

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cache;
use crate::dpsuper::{MonoIdx, ShapeParams};
use crate::gfp::{FieldScalar, MatrixGF};
use crate::hamalg::{GRStructure, HamAlgebra, HamElement};
use crate::l0rep::{osp_monomials, L0Module, Weight};

/// The canonical height-0 character types; anything else is custom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChiType {
    I,
    II,
    III,
    Custom,
}

impl fmt::Display for ChiType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChiType::I => write!(f, "I"),
            ChiType::II => write!(f, "II"),
            ChiType::III => write!(f, "III"),
            ChiType::Custom => write!(f, "custom"),
        }
    }
}

/// A linear functional χ on H(2,1;t) with χ(g_odd) = 0, stored against the
/// even canonical basis. The abbreviations χ(D1), χ(D2) follow the
/// dictionary D1 = -D_H(x2), D2 = D_H(x1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    shape: ShapeParams,
    values: BTreeMap<MonoIdx, u64>,
}

impl Character {
    pub fn zero(shape: ShapeParams) -> Self {
        Character { shape, values: BTreeMap::new() }
    }

    /// Build from the abbreviated values χ(D1), χ(D2) (χ(D3) = 0 by the
    /// odd-part convention): sets χ(D_H(x2)) = -χ(D1), χ(D_H(x1)) = χ(D2).
    pub fn from_abbrev(shape: ShapeParams, chi_d1: i64, chi_d2: i64) -> Self {
        let mut chi = Character::zero(shape);
        chi.set(MonoIdx::new(0, 1, 0), -chi_d1);
        chi.set(MonoIdx::new(1, 0, 0), chi_d2);
        chi
    }

    pub fn of_type(shape: ShapeParams, tag: ChiType) -> Self {
        match tag {
            ChiType::I => Character::from_abbrev(shape, 1, 1),
            ChiType::II => Character::from_abbrev(shape, 1, 0),
            ChiType::III => Character::from_abbrev(shape, 0, 1),
            ChiType::Custom => Character::zero(shape),
        }
    }

    /// Set χ on an even canonical basis element.
    pub fn set(&mut self, m: MonoIdx, value: i64) {
        assert_eq!(m.parity(), 0, "χ vanishes on the odd part by convention");
        assert!(m.degree() >= 1 && self.shape.contains(m), "not a canonical basis label");
        let v = FieldScalar::new(value, self.shape.p()).value();
        if v == 0 {
            self.values.remove(&m);
        } else {
            self.values.insert(m, v);
        }
    }

    pub fn shape(&self) -> ShapeParams {
        self.shape
    }

    /// χ on a canonical basis element (zero on the odd part).
    pub fn eval(&self, m: MonoIdx) -> u64 {
        if m.parity() == 1 {
            0
        } else {
            self.values.get(&m).copied().unwrap_or(0)
        }
    }

    pub fn eval_elem(&self, x: &HamElement) -> u64 {
        let p = self.shape.p().get();
        x.terms().fold(0, |acc, (m, c)| (acc + c * self.eval(m)) % p)
    }

    /// χ(D1) = -χ(D_H(x2)).
    pub fn chi_d1(&self) -> u64 {
        let p = self.shape.p().get();
        (p - self.eval(MonoIdx::new(0, 1, 0))) % p
    }

    /// χ(D2) = χ(D_H(x1)).
    pub fn chi_d2(&self) -> u64 {
        self.eval(MonoIdx::new(1, 0, 0))
    }

    pub fn values(&self) -> impl Iterator<Item = (MonoIdx, u64)> + '_ {
        self.values.iter().map(|(&m, &v)| (m, v))
    }

    /// ht(χ) = min{i ≥ -1 | χ(g_i) = 0} with g_i the filtration piece.
    pub fn height(&self, algebra: &HamAlgebra) -> i64 {
        self.values
            .keys()
            .map(|&m| algebra.grade(m) + 1)
            .max()
            .unwrap_or(-1)
    }

    /// Recognize the canonical patterns.
    pub fn tag(&self) -> ChiType {
        for t in [ChiType::I, ChiType::II, ChiType::III] {
            if *self == Character::of_type(self.shape, t) {
                return t;
            }
        }
        ChiType::Custom
    }
}

/// PBW basis label D1^a D2^b D3^c ⊗ v_{λ,k,l}; parity is (c + l) mod 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KacBasisIdx {
    pub a: u32,
    pub b: u32,
    pub c: u8,
    pub k: u32,
    pub l: u8,
}

impl KacBasisIdx {
    pub fn parity(self) -> u8 {
        (self.c + self.l) & 1
    }

    fn word_len(self) -> u64 {
        self.a as u64 + self.b as u64 + self.c as u64
    }
}

impl fmt::Display for KacBasisIdx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D1^{} D2^{} D3^{} (x) v_{{{},{}}}", self.a, self.b, self.c, self.k, self.l)
    }
}

/// Which letter of the supercommutative word to peel first. The letters of
/// g_[-1] commute exactly ([Di, Dj] = 0, D3² = 0), so the module element is
/// independent of this choice; exposing it lets tests confirm that.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeelOrder {
    D1First,
    D3First,
}

type SparseVec = Vec<(u32, u64)>;

/// The Kac module K_χ(λ): PBW basis plus one sparse action matrix per
/// canonical basis element of the algebra (in the algebra's basis order).
pub struct KacModule {
    shape: ShapeParams,
    chi: Character,
    lambda: Weight,
    basis: Vec<KacBasisIdx>,
    index: HashMap<KacBasisIdx, usize>,
    actions: Vec<MatrixGF>,
    height: i64,
}

impl KacModule {
    pub fn shape(&self) -> ShapeParams {
        self.shape
    }

    pub fn chi(&self) -> &Character {
        &self.chi
    }

    pub fn lambda(&self) -> Weight {
        self.lambda
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[KacBasisIdx] {
        &self.basis
    }

    pub fn basis_index(&self, v: KacBasisIdx) -> Option<usize> {
        self.index.get(&v).copied()
    }

    pub fn parity(&self, i: usize) -> u8 {
        self.basis[i].parity()
    }

    /// ht(χ) recorded at build time; 0 is the verified regime.
    pub fn chi_height(&self) -> i64 {
        self.height
    }

    /// Action matrix of the algebra basis element with index `x` (algebra
    /// basis order).
    pub fn action(&self, x: usize) -> &MatrixGF {
        &self.actions[x]
    }

    pub fn actions(&self) -> &[MatrixGF] {
        &self.actions
    }

    /// x · v for a canonical basis element x = D_H(m).
    pub fn act(&self, algebra: &HamAlgebra, m: MonoIdx, v: KacBasisIdx) -> Vec<(KacBasisIdx, u64)> {
        let x = algebra.basis_index(m).expect("not a basis element");
        let col = self.index[&v];
        self.actions[x]
            .triplets()
            .into_iter()
            .filter(|&(_, c, _)| c == col)
            .map(|(r, _, val)| (self.basis[r], val))
            .collect()
    }

    /// Action of an arbitrary algebra element, by linearity.
    pub fn action_of(&self, algebra: &HamAlgebra, x: &HamElement) -> MatrixGF {
        let p = self.shape.p().get();
        let n = self.dim();
        let mut out = MatrixGF::zero(n, n, self.shape.p());
        for (m, c) in x.terms() {
            let xi = algebra.basis_index(m).unwrap();
            out = out.add(&self.actions[xi].scale(c % p)).unwrap();
        }
        out
    }

    /// The ρ(h)-eigenvalue of a PBW basis vector: weight(v_{λ,k,l}) + a - b.
    pub fn weight_of(&self, v: KacBasisIdx) -> u64 {
        let p = self.shape.p();
        let lam = self.lambda.rep() as i64;
        let base = if lam == 0 { 0 } else { lam - 2 * v.k as i64 - v.l as i64 };
        FieldScalar::new(base + v.a as i64 - v.b as i64, p).value()
    }

    /// Deliberately flip one action matrix entry. Only for negative
    /// controls in tests: the result is no longer a module.
    #[doc(hidden)]
    pub fn corrupt_action_entry(&mut self, x: usize, row: usize, col: usize) {
        let p = self.shape.p();
        let old = self.actions[x].get(row, col);
        let mut trips = self.actions[x].triplets();
        trips.retain(|&(r, c, _)| (r, c) != (row, col));
        trips.push((row, col, (old + 1) % p.get()));
        self.actions[x] = MatrixGF::from_triplets(self.dim(), self.dim(), p, trips);
    }
}

// ---------------- construction ----------------

struct Builder<'a> {
    alg: &'a HamAlgebra,
    l0: &'a L0Module,
    peel: PeelOrder,
    basis: Vec<KacBasisIdx>,
    index: HashMap<KacBasisIdx, usize>,
    /// Left-multiplication tables for D1, D2, D3 on basis vectors:
    /// None when the product vanishes, else (target index, coefficient).
    d_next: [Vec<Option<(u32, u64)>>; 3],
    /// Canonical expansions of D1, D2, D3: (algebra basis index, sign).
    d_canon: [(usize, u64); 3],
    /// For grade-0 algebra elements: position in the osp dictionary.
    osp_slot: HashMap<usize, (usize, u64)>,
}

impl<'a> Builder<'a> {
    fn new(alg: &'a HamAlgebra, l0: &'a L0Module, chi: &'a Character, peel: PeelOrder) -> Self {
        let shape = alg.shape();
        let p = shape.p();
        let mut basis = Vec::new();
        for a in 0..shape.bound1() as u32 {
            for b in 0..shape.bound2() as u32 {
                for c in 0..=1u8 {
                    for &(k, l) in l0.basis() {
                        basis.push(KacBasisIdx { a, b, c, k, l });
                    }
                }
            }
        }
        let index: HashMap<KacBasisIdx, usize> =
            basis.iter().enumerate().map(|(i, &v)| (v, i)).collect();

        // scalars χ(D1)^(p^t1), χ(D2)^(p^t2) by explicit exponentiation
        let chi1_pow = FieldScalar::from_u64(chi.chi_d1(), p).pow(shape.bound1()).value();
        let chi2_pow = FieldScalar::from_u64(chi.chi_d2(), p).pow(shape.bound2()).value();

        let lookup = |v: KacBasisIdx| index[&v] as u32;
        let mut d1 = Vec::with_capacity(basis.len());
        let mut d2 = Vec::with_capacity(basis.len());
        let mut d3 = Vec::with_capacity(basis.len());
        for &v in &basis {
            d1.push(if v.a as u64 + 1 < shape.bound1() {
                Some((lookup(KacBasisIdx { a: v.a + 1, ..v }), 1))
            } else if chi1_pow != 0 {
                Some((lookup(KacBasisIdx { a: 0, ..v }), chi1_pow))
            } else {
                None
            });
            d2.push(if v.b as u64 + 1 < shape.bound2() {
                Some((lookup(KacBasisIdx { b: v.b + 1, ..v }), 1))
            } else if chi2_pow != 0 {
                Some((lookup(KacBasisIdx { b: 0, ..v }), chi2_pow))
            } else {
                None
            });
            d3.push(if v.c == 0 { Some((lookup(KacBasisIdx { c: 1, ..v }), 1)) } else { None });
        }

        let pp = p.get();
        // D1 = -D_H(x2), D2 = D_H(x1), D3 = -D_H(ξ)
        let d_canon = [
            (alg.basis_index(MonoIdx::new(0, 1, 0)).unwrap(), pp - 1),
            (alg.basis_index(MonoIdx::new(1, 0, 0)).unwrap(), 1),
            (alg.basis_index(MonoIdx::new(0, 0, 1)).unwrap(), pp - 1),
        ];

        let mut osp_slot = HashMap::new();
        for (slot, (_, m, sign)) in osp_monomials().into_iter().enumerate() {
            let xi = alg.basis_index(m).unwrap();
            osp_slot.insert(xi, (slot, FieldScalar::new(sign, p).value()));
        }

        Builder { alg, l0, peel, basis, index, d_next: [d1, d2, d3], d_canon, osp_slot }
    }

    /// D_k · (sparse vector), through the precomputed tables.
    fn mul_d(&self, k: usize, v: &[(u32, u64)], out: &mut HashMap<u32, u64>, scale: u64) {
        let p = self.alg.shape().p().get();
        for &(row, c) in v {
            if let Some((target, mult)) = self.d_next[k][row as usize] {
                let e = out.entry(target).or_insert(0);
                *e = (*e + c * mult % p * scale) % p;
            }
        }
    }

    fn peel(&self, v: KacBasisIdx) -> (usize, KacBasisIdx) {
        match self.peel {
            PeelOrder::D1First => {
                if v.a > 0 {
                    (0, KacBasisIdx { a: v.a - 1, ..v })
                } else if v.b > 0 {
                    (1, KacBasisIdx { b: v.b - 1, ..v })
                } else {
                    (2, KacBasisIdx { c: 0, ..v })
                }
            }
            PeelOrder::D3First => {
                if v.c > 0 {
                    (2, KacBasisIdx { c: 0, ..v })
                } else if v.b > 0 {
                    (1, KacBasisIdx { b: v.b - 1, ..v })
                } else {
                    (0, KacBasisIdx { a: v.a - 1, ..v })
                }
            }
        }
    }

    /// Fill the full (word, algebra element) action table as a dynamic
    /// program over increasing word length.
    fn run(&self) -> Vec<Vec<SparseVec>> {
        let p = self.alg.shape().p().get();
        let dim_g = self.alg.dim();
        let n = self.basis.len();
        let mut memo: Vec<Vec<SparseVec>> = vec![Vec::new(); n];

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| self.basis[i].word_len());

        for &vi in &order {
            let v = self.basis[vi];
            let mut row_results: Vec<SparseVec> = Vec::with_capacity(dim_g);
            for x in 0..dim_g {
                row_results.push(self.entry(&memo, x, vi, v, p));
            }
            memo[vi] = row_results;
        }
        memo
    }

    fn entry(
        &self,
        memo: &[Vec<SparseVec>],
        x: usize,
        vi: usize,
        v: KacBasisIdx,
        p: u64,
    ) -> SparseVec {
        let m = self.alg.basis()[x];
        let grade = self.alg.grade(m);
        let mut acc: HashMap<u32, u64> = HashMap::new();
        if grade == -1 {
            // x is ±D_k: direct left multiplication
            let unit = [(vi as u32, 1u64)];
            let (k, sign) = match (m.i1, m.i2, m.j) {
                (1, 0, 0) => (1, 1),       // D_H(x1) = D2
                (0, 1, 0) => (0, p - 1),   // D_H(x2) = -D1
                (0, 0, 1) => (2, p - 1),   // D_H(ξ) = -D3
                _ => unreachable!(),
            };
            self.mul_d(k, &unit, &mut acc, sign);
        } else if v.word_len() == 0 {
            if grade == 0 {
                // base case through the L0 table
                let (slot, sign) = self.osp_slot[&x];
                let gen = crate::l0rep::OspGen::ALL[slot];
                let col = self.l0.basis_index((v.k, v.l)).unwrap();
                for &(target, c) in self.l0.column(gen, col) {
                    let (k2, l2) = self.l0.basis()[target];
                    let ti = self.index[&KacBasisIdx { a: 0, b: 0, c: 0, k: k2, l: l2 }];
                    let e = acc.entry(ti as u32).or_insert(0);
                    *e = (*e + c * sign) % p;
                }
            }
            // grade ≥ 1 acts trivially on 1 ⊗ v
        } else {
            let (dk, inner) = self.peel(v);
            let inner_idx = self.index[&inner];
            // x·(D·m) = (-1)^{|x||D|} D·(x·m) + [x, D]·m
            let sign = if m.parity() == 1 && dk == 2 { p - 1 } else { 1 };
            self.mul_d(dk, &memo[inner_idx][x], &mut acc, sign);
            let (d_idx, d_sign) = self.d_canon[dk];
            for &(z, c) in self.alg.bracket_basis(x, d_idx) {
                let coeff = d_sign * c % p;
                for &(row, cv) in &memo[inner_idx][z] {
                    let e = acc.entry(row).or_insert(0);
                    *e = (*e + coeff * cv) % p;
                }
            }
        }
        let mut out: SparseVec = acc.into_iter().filter(|&(_, c)| c != 0).collect();
        out.sort_unstable_by_key(|&(r, _)| r);
        out
    }

    /// Single uncached entry, by direct recursion. Used to cross-check the
    /// memoized table.
    fn entry_uncached(&self, x: usize, v: KacBasisIdx) -> Vec<(KacBasisIdx, u64)> {
        let p = self.alg.shape().p().get();
        let m = self.alg.basis()[x];
        let grade = self.alg.grade(m);
        let mut acc: HashMap<KacBasisIdx, u64> = HashMap::new();
        let add = |t: KacBasisIdx, c: u64, acc: &mut HashMap<KacBasisIdx, u64>| {
            if c % p != 0 {
                let e = acc.entry(t).or_insert(0);
                *e = (*e + c) % p;
            }
        };
        if grade == -1 {
            let (k, sign) = match (m.i1, m.i2, m.j) {
                (1, 0, 0) => (1, 1),
                (0, 1, 0) => (0, p - 1),
                (0, 0, 1) => (2, p - 1),
                _ => unreachable!(),
            };
            if let Some((target, mult)) = self.d_next[k][self.index[&v] as usize] {
                add(self.basis[target as usize], mult * sign % p, &mut acc);
            }
        } else if v.word_len() == 0 {
            if grade == 0 {
                let (slot, sign) = self.osp_slot[&x];
                let gen = crate::l0rep::OspGen::ALL[slot];
                let col = self.l0.basis_index((v.k, v.l)).unwrap();
                for &(target, c) in self.l0.column(gen, col) {
                    let (k2, l2) = self.l0.basis()[target];
                    add(KacBasisIdx { a: 0, b: 0, c: 0, k: k2, l: l2 }, c * sign % p, &mut acc);
                }
            }
        } else {
            let (dk, inner) = self.peel(v);
            let sign = if m.parity() == 1 && dk == 2 { p - 1 } else { 1 };
            for (t, c) in self.entry_uncached(x, inner) {
                if let Some((target, mult)) = self.d_next[dk][self.index[&t] as usize] {
                    add(self.basis[target as usize], c * mult % p * sign % p, &mut acc);
                }
            }
            let (d_idx, d_sign) = self.d_canon[dk];
            let row = self.alg.bracket_basis(x, d_idx).clone();
            for (z, c) in row {
                let coeff = d_sign * c % p;
                for (t, cv) in self.entry_uncached(z, inner) {
                    add(t, coeff * cv % p, &mut acc);
                }
            }
        }
        let mut out: Vec<(KacBasisIdx, u64)> =
            acc.into_iter().filter(|&(_, c)| c != 0).collect();
        out.sort_unstable();
        out
    }
}

/// Build K_χ(λ) = U_χ(g) ⊗_{u(g₀)} L0(λ) as explicit action matrices.
/// ht(χ) = 0 is the verified regime; other heights are permitted (the
/// height is recorded on the module for callers to warn on).
pub fn build_kac(algebra: &HamAlgebra, l0: &L0Module, chi: &Character) -> KacModule {
    build_kac_with_peel(algebra, l0, chi, PeelOrder::D1First)
}

pub fn build_kac_with_peel(
    algebra: &HamAlgebra,
    l0: &L0Module,
    chi: &Character,
    peel: PeelOrder,
) -> KacModule {
    assert_eq!(algebra.shape(), chi.shape(), "shape mismatch");
    let builder = Builder::new(algebra, l0, chi, peel);
    let memo = builder.run();
    let n = builder.basis.len();
    let p = algebra.shape().p();
    let actions: Vec<MatrixGF> = (0..algebra.dim())
        .map(|x| {
            let mut trips = Vec::new();
            for (vi, row) in memo.iter().enumerate() {
                for &(r, c) in &row[x] {
                    trips.push((r as usize, vi, c));
                }
            }
            MatrixGF::from_triplets(n, n, p, trips)
        })
        .collect();
    KacModule {
        shape: algebra.shape(),
        chi: chi.clone(),
        lambda: l0.weight(),
        basis: builder.basis,
        index: builder.index,
        actions,
        height: chi.height(algebra),
    }
}

/// Uncached single action entry, by direct recursion (no memo table).
pub fn act_uncached(
    algebra: &HamAlgebra,
    l0: &L0Module,
    chi: &Character,
    peel: PeelOrder,
    m: MonoIdx,
    v: KacBasisIdx,
) -> Vec<(KacBasisIdx, u64)> {
    let builder = Builder::new(algebra, l0, chi, peel);
    let x = algebra.basis_index(m).expect("not a basis element");
    builder.entry_uncached(x, v)
}

// ---------------- verification ----------------

/// Coverage mode for the module-law check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LawMode {
    Full,
    Sampled { seed: u64, pairs: usize },
}

/// Witness of a module-law failure.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LawFailure {
    pub x: MonoIdx,
    pub y: MonoIdx,
    /// A basis vector on which ρ([x,y]) and the graded commutator differ.
    pub witness: KacBasisIdx,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModuleLawReport {
    pub mode: LawMode,
    pub pairs_checked: usize,
    pub failure: Option<LawFailure>,
}

impl ModuleLawReport {
    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }
}

/// Check ρ([x,y]) = ρ(x)ρ(y) - (-1)^(|x||y|) ρ(y)ρ(x) over canonical basis
/// pairs (all of them in Full mode, seeded random ones in Sampled mode).
pub fn verify_module_law(
    algebra: &HamAlgebra,
    module: &KacModule,
    mode: LawMode,
) -> ModuleLawReport {
    let p = algebra.shape().p().get();
    let dim_g = algebra.dim();
    let pairs: Vec<(usize, usize)> = match mode {
        LawMode::Full => {
            (0..dim_g).flat_map(|i| (0..dim_g).map(move |j| (i, j))).collect()
        }
        LawMode::Sampled { seed, pairs } => {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
            (0..pairs.max(200))
                .map(|_| (rng.gen_range(0..dim_g), rng.gen_range(0..dim_g)))
                .collect()
        }
    };
    let mut failure = None;
    for &(i, j) in &pairs {
        let (x, y) = (algebra.basis()[i], algebra.basis()[j]);
        let sign = if x.parity() * y.parity() == 1 { 1 } else { p - 1 };
        let got = module.actions[i]
            .mul(&module.actions[j])
            .unwrap()
            .add(&module.actions[j].mul(&module.actions[i]).unwrap().scale(sign))
            .unwrap();
        let mut want = MatrixGF::zero(module.dim(), module.dim(), algebra.shape().p());
        for &(z, c) in algebra.bracket_basis(i, j) {
            want = want.add(&module.actions[z].scale(c)).unwrap();
        }
        if got != want {
            let diff = got.sub(&want).unwrap();
            let col = diff.triplets().iter().map(|&(_, c, _)| c).min().unwrap();
            failure = Some(LawFailure { x, y, witness: module.basis[col] });
            break;
        }
    }
    ModuleLawReport { mode, pairs_checked: pairs.len(), failure }
}

/// One cell of the χ-reduced check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChiReducedCell {
    pub element: MonoIdx,
    pub exponent: u32,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChiReducedReport {
    pub even_cells: Vec<ChiReducedCell>,
    /// ρ(x)² = ½ ρ([x,x]) for every odd basis element.
    pub odd_ok: bool,
    pub odd_failures: Vec<MonoIdx>,
}

impl ChiReducedReport {
    pub fn ok(&self) -> bool {
        self.odd_ok && self.even_cells.iter().all(|c| c.ok)
    }
}

/// Verify the generalized χ-reduced identity
/// ρ(e_i)^(p^(s_i)) - ρ(φ_s(e_i)) = χ(e_i)^(p^(s_i)) · Id
/// for every even element of the verified GR structure, and
/// ρ(x)² = ½ ρ([x,x]) for every odd basis element.
pub fn verify_chi_reduced(
    algebra: &HamAlgebra,
    module: &KacModule,
    gr: &GRStructure,
    chi: &Character,
) -> ChiReducedReport {
    use rayon::prelude::*;
    let p = algebra.shape().p();
    let pp = p.get();
    let n = module.dim();
    let even_cells: Vec<ChiReducedCell> = gr
        .elements
        .par_iter()
        .zip(gr.s_verified.par_iter())
        .map(|(&m, &s)| {
            let xi = algebra.basis_index(m).unwrap();
            let power = p.get().pow(s);
            let lhs = module.actions[xi].matpow(power).unwrap();
            let phi = gr.phi(algebra.shape(), m);
            let mut rhs = module.action_of(algebra, &phi);
            let scalar = FieldScalar::from_u64(chi.eval(m), p).pow(power).value();
            if scalar != 0 {
                rhs = rhs.add(&MatrixGF::identity(n, p).scale(scalar)).unwrap();
            }
            ChiReducedCell { element: m, exponent: s, ok: lhs == rhs }
        })
        .collect();

    let inv2 = FieldScalar::from_u64(2, p).inv().value();
    let mut odd_failures = Vec::new();
    for (i, &m) in algebra.basis().iter().enumerate() {
        if m.parity() == 1 {
            let sq = module.actions[i].mul(&module.actions[i]).unwrap();
            let mut want = MatrixGF::zero(n, n, p);
            for &(z, c) in algebra.bracket_basis(i, i) {
                want = want.add(&module.actions[z].scale(c * inv2 % pp)).unwrap();
            }
            if sq != want {
                odd_failures.push(m);
            }
        }
    }
    ChiReducedReport { even_cells, odd_ok: odd_failures.is_empty(), odd_failures }
}

// ---------------- cache ----------------

#[derive(Serialize, Deserialize)]
struct KacCachePayload {
    p: u64,
    t1: u32,
    t2: u32,
    chi: Vec<((u32, u32, u8), u64)>,
    lambda: u64,
    dim: usize,
    actions: Vec<(usize, Vec<(usize, usize, u64)>)>,
}

fn kac_cache_path(dir: &Path, shape: ShapeParams, chi: &Character, lambda: Weight) -> std::path::PathBuf {
    let chi_desc: Vec<((u32, u32, u8), u64)> =
        chi.values().map(|(m, v)| ((m.i1, m.i2, m.j), v)).collect();
    let key = serde_json::to_string(&(
        shape.p().get(),
        shape.t1(),
        shape.t2(),
        &chi_desc,
        lambda.rep(),
    ))
    .unwrap();
    dir.join(format!("hamkac-kac-{}.json", &cache::sha256_hex(key.as_bytes())[..16]))
}

/// Build-or-load the Kac module through the action-matrix cache.
pub fn build_kac_cached(
    algebra: &HamAlgebra,
    l0: &L0Module,
    chi: &Character,
    cache_dir: &Path,
) -> std::io::Result<KacModule> {
    let shape = algebra.shape();
    let path = kac_cache_path(cache_dir, shape, chi, l0.weight());
    if let Some(payload) = cache::load::<KacCachePayload>(&path) {
        if let Some(module) = module_from_payload(algebra, l0, chi, payload) {
            return Ok(module);
        }
    }
    let module = build_kac(algebra, l0, chi);
    let payload = KacCachePayload {
        p: shape.p().get(),
        t1: shape.t1(),
        t2: shape.t2(),
        chi: chi.values().map(|(m, v)| ((m.i1, m.i2, m.j), v)).collect(),
        lambda: l0.weight().rep(),
        dim: module.dim(),
        actions: module
            .actions
            .iter()
            .enumerate()
            .map(|(x, mat)| (x, mat.triplets()))
            .collect(),
    };
    cache::store(&path, &payload)?;
    Ok(module)
}

fn module_from_payload(
    algebra: &HamAlgebra,
    l0: &L0Module,
    chi: &Character,
    payload: KacCachePayload,
) -> Option<KacModule> {
    let shape = algebra.shape();
    if payload.p != shape.p().get() || payload.t1 != shape.t1() || payload.t2 != shape.t2() {
        return None;
    }
    if payload.lambda != l0.weight().rep() {
        return None;
    }
    let chi_desc: Vec<((u32, u32, u8), u64)> =
        chi.values().map(|(m, v)| ((m.i1, m.i2, m.j), v)).collect();
    if payload.chi != chi_desc {
        return None;
    }
    let mut basis = Vec::new();
    for a in 0..shape.bound1() as u32 {
        for b in 0..shape.bound2() as u32 {
            for c in 0..=1u8 {
                for &(k, l) in l0.basis() {
                    basis.push(KacBasisIdx { a, b, c, k, l });
                }
            }
        }
    }
    if payload.dim != basis.len() {
        return None;
    }
    let n = basis.len();
    let mut actions = vec![MatrixGF::zero(n, n, shape.p()); algebra.dim()];
    for (x, trips) in payload.actions {
        if x >= algebra.dim() || trips.iter().any(|&(r, c, _)| r >= n || c >= n) {
            return None;
        }
        actions[x] = MatrixGF::from_triplets(n, n, shape.p(), trips);
    }
    let index = basis.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    Some(KacModule {
        shape,
        chi: chi.clone(),
        lambda: l0.weight(),
        basis,
        index,
        actions,
        height: chi.height(algebra),
    })
}
