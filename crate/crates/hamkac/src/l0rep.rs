//! The restricted simple g_[0] ≅ osp(1|2) modules L0(λ) for λ ∈ F_p,
//! materialized from the explicit action table, together with a module-law
//! and restrictedness checker.
//!
//! Basis v_{λ,k,l}: for λ = 0 only v_0; for λ ≠ 0 all (k,l) with
//! 0 ≤ k ≤ λ, l ∈ {0,1}, k+l ≤ λ, ordered with the l = 0 block first so
//! parity blocks are contiguous. Out-of-range conventions: v_{λ,k,0} = 0
//! for k < 0 or k > λ; v_{λ,k,1} = 0 for k < 0 or k ≥ λ.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dpsuper::MonoIdx;
use crate::gfp::{FieldScalar, MatrixGF, Prime};
use crate::hamalg::{HamAlgebra, HamElement};

/// A restricted weight λ ∈ F_p with its integer representative in [0, p).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Weight {
    value: u64,
    p: u64,
}

impl Weight {
    pub fn new(value: i64, p: Prime) -> Self {
        Weight { value: FieldScalar::new(value, p).value(), p: p.get() }
    }

    /// The unique lift in [0, p).
    pub fn rep(self) -> u64 {
        self.value
    }

    pub fn scalar(self) -> FieldScalar {
        FieldScalar::from_u64(self.value, Prime::new(self.p).unwrap())
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.value.fmt(f)
    }
}

/// The five generators of the zero graded component, in the order
/// h, e, f, E, F (SmallE/SmallF even, BigE/BigF odd).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OspGen {
    H,
    SmallE,
    SmallF,
    BigE,
    BigF,
}

impl OspGen {
    pub const ALL: [OspGen; 5] = [OspGen::H, OspGen::SmallE, OspGen::SmallF, OspGen::BigE, OspGen::BigF];

    pub fn parity(self) -> u8 {
        match self {
            OspGen::BigE | OspGen::BigF => 1,
            _ => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            OspGen::H => "h",
            OspGen::SmallE => "e",
            OspGen::SmallF => "f",
            OspGen::BigE => "E",
            OspGen::BigF => "F",
        }
    }

    fn table_index(self) -> usize {
        match self {
            OspGen::H => 0,
            OspGen::SmallE => 1,
            OspGen::SmallF => 2,
            OspGen::BigE => 3,
            OspGen::BigF => 4,
        }
    }
}

/// Basis label (k, l) of v_{λ,k,l}; parity is l mod 2.
pub type L0Basis = (u32, u8);

/// The simple restricted module L0(λ) with its five action matrices.
#[derive(Debug, Clone)]
pub struct L0Module {
    p: Prime,
    weight: Weight,
    basis: Vec<L0Basis>,
    index: HashMap<L0Basis, usize>,
    /// Sparse action columns per generator: cols[g][i] lists (row, coeff).
    cols: [Vec<Vec<(usize, u64)>>; 5],
}

impl L0Module {
    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn weight(&self) -> Weight {
        self.weight
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[L0Basis] {
        &self.basis
    }

    pub fn basis_index(&self, b: L0Basis) -> Option<usize> {
        self.index.get(&b).copied()
    }

    pub fn parity(&self, i: usize) -> u8 {
        self.basis[i].1 & 1
    }

    /// Sparse column of the action of g on basis vector i.
    pub fn column(&self, g: OspGen, i: usize) -> &[(usize, u64)] {
        &self.cols[g.table_index()][i]
    }

    pub fn matrix(&self, g: OspGen) -> MatrixGF {
        let n = self.dim();
        let mut trips = Vec::new();
        for (col, entries) in self.cols[g.table_index()].iter().enumerate() {
            for &(row, c) in entries {
                trips.push((row, col, c));
            }
        }
        MatrixGF::from_triplets(n, n, self.p, trips)
    }

    /// Deterministic text dump of the five action matrices in the canonical
    /// basis order, for debugging and golden files.
    pub fn dump_actions(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("L0({}) over F_{}, dim {}\n", self.weight, self.p, self.dim()));
        out.push_str("basis:");
        for &(k, l) in &self.basis {
            out.push_str(&format!(" v_{{{k},{l}}}"));
        }
        out.push('\n');
        for g in OspGen::ALL {
            out.push_str(&format!("{}:\n", g.name()));
            let m = self.matrix(g);
            for r in 0..self.dim() {
                let row: Vec<String> =
                    (0..self.dim()).map(|c| m.get(r, c).to_string()).collect();
                out.push_str(&format!("  [{}]\n", row.join(" ")));
            }
        }
        out
    }
}

/// Materialize L0(λ) from the action table.
pub fn build_l0(weight: Weight, p: Prime) -> L0Module {
    let lam = weight.rep() as i64;
    let mut basis: Vec<L0Basis> = Vec::new();
    if lam == 0 {
        basis.push((0, 0));
    } else {
        for l in 0..=1u8 {
            for k in 0..=lam as u32 {
                if k as i64 + l as i64 <= lam {
                    basis.push((k, l));
                }
            }
        }
    }
    let index: HashMap<L0Basis, usize> = basis.iter().enumerate().map(|(i, &b)| (b, i)).collect();

    let reduce = |v: i64| FieldScalar::new(v, p).value();
    // target (k,l) with the out-of-range conventions folded in
    let valid = |k: i64, l: u8| -> Option<L0Basis> {
        if k < 0 || (l == 0 && k > lam) || (l == 1 && k >= lam) {
            None
        } else {
            Some((k as u32, l))
        }
    };

    let mut cols: [Vec<Vec<(usize, u64)>>; 5] = Default::default();
    for g in OspGen::ALL {
        let mut gcols = Vec::with_capacity(basis.len());
        for &(k, l) in &basis {
            let k = k as i64;
            let mut entries: Vec<(L0Basis, u64)> = Vec::new();
            if lam != 0 {
                let mut push = |kk: i64, ll: u8, c: i64| {
                    if let Some(target) = valid(kk, ll) {
                        let c = reduce(c);
                        if c != 0 {
                            entries.push((target, c));
                        }
                    }
                };
                match (g, l) {
                    (OspGen::H, 0) => push(k, 0, lam - 2 * k),
                    (OspGen::H, 1) => push(k, 1, lam - 2 * k - 1),
                    (OspGen::BigF, 0) => push(k, 1, 1),
                    (OspGen::BigF, 1) => push(k + 1, 0, -1),
                    (OspGen::SmallF, 0) => push(k + 1, 0, 1),
                    (OspGen::SmallF, 1) => push(k + 1, 1, 1),
                    (OspGen::SmallE, 0) => push(k - 1, 0, k * (lam + 1 - k)),
                    (OspGen::SmallE, 1) => push(k - 1, 1, k * (lam - k)),
                    (OspGen::BigE, 0) => push(k - 1, 1, k),
                    (OspGen::BigE, 1) => push(k, 0, lam - k),
                    _ => unreachable!(),
                }
            }
            // λ = 0: every generator annihilates v_0 — entries stay empty.
            gcols.push(entries.into_iter().map(|(b, c)| (index[&b], c)).collect());
        }
        cols[g.table_index()] = gcols;
    }

    L0Module { p, weight, basis, index, cols }
}

/// Express a grade-0 element of H(2,1;t) in the (h, e, f, E, F) coordinates.
/// Uses the canonical dictionary h = D_H(x1x2), f = D_H(x1^(2)),
/// e = -D_H(x2^(2)), F = D_H(x1 ξ), E = -D_H(x2 ξ).
pub fn osp_coordinates(x: &HamElement) -> Option<[u64; 5]> {
    let p = x.shape().p().get();
    let mut out = [0u64; 5];
    for (m, c) in x.terms() {
        let neg = (p - c) % p;
        match (m.i1, m.i2, m.j) {
            (1, 1, 0) => out[0] = c,
            (0, 2, 0) => out[1] = neg,
            (2, 0, 0) => out[2] = c,
            (0, 1, 1) => out[3] = neg,
            (1, 0, 1) => out[4] = c,
            _ => return None, // not a grade-0 element
        }
    }
    Some(out)
}

/// One failed identity in the L0 check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct L0Failure {
    pub identity: String,
}

/// Result of validating an L0(λ) module against the algebra.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct L0Report {
    pub lambda: u64,
    pub dim: usize,
    pub module_law_ok: bool,
    pub restricted_ok: bool,
    pub failures: Vec<L0Failure>,
}

impl L0Report {
    pub fn ok(&self) -> bool {
        self.module_law_ok && self.restricted_ok
    }
}

/// Confirm the action table is a module over the zero graded component and
/// that the restrictedness identities hold:
/// ρ([a,b]) = ρ(a)ρ(b) - (-1)^{|a||b|} ρ(b)ρ(a) for all 25 generator
/// pairs, ρ(h)^p = ρ(h), ρ(e)^p = ρ(f)^p = 0, ρ(E)² = ρ(e), ρ(F)² = -ρ(f).
pub fn check_l0(module: &L0Module, algebra: &HamAlgebra) -> L0Report {
    let p = module.p();
    let pp = p.get();
    let gens = algebra.osp_generators();
    let by_gen = |g: OspGen| -> &HamElement {
        match g {
            OspGen::H => &gens.h,
            OspGen::SmallE => &gens.e,
            OspGen::SmallF => &gens.f,
            OspGen::BigE => &gens.cap_e,
            OspGen::BigF => &gens.cap_f,
        }
    };
    let mats: Vec<MatrixGF> = OspGen::ALL.iter().map(|&g| module.matrix(g)).collect();
    let n = module.dim();
    let mut failures = Vec::new();

    let mut module_law_ok = true;
    for (ai, &a) in OspGen::ALL.iter().enumerate() {
        for (bi, &b) in OspGen::ALL.iter().enumerate() {
            let br = algebra.bracket(by_gen(a), by_gen(b));
            let Some(coords) = osp_coordinates(&br) else {
                failures.push(L0Failure {
                    identity: format!("[{},{}] is not a grade-0 element", a.name(), b.name()),
                });
                module_law_ok = false;
                continue;
            };
            let mut want = MatrixGF::zero(n, n, p);
            for (gi, &c) in coords.iter().enumerate() {
                if c != 0 {
                    want = want.add(&mats[gi].scale(c)).unwrap();
                }
            }
            let ab = mats[ai].mul(&mats[bi]).unwrap();
            let ba = mats[bi].mul(&mats[ai]).unwrap();
            let sign = if a.parity() * b.parity() == 1 { 1 } else { pp - 1 };
            let got = ab.add(&ba.scale(sign)).unwrap();
            if got != want {
                module_law_ok = false;
                failures.push(L0Failure {
                    identity: format!("module law fails at ({}, {})", a.name(), b.name()),
                });
            }
        }
    }

    let mut restricted_ok = true;
    let mut check = |name: &str, got: MatrixGF, want: MatrixGF| {
        if got != want {
            restricted_ok = false;
            failures.push(L0Failure { identity: format!("restrictedness fails: {name}") });
        }
    };
    let h = &mats[OspGen::H.table_index()];
    let e = &mats[OspGen::SmallE.table_index()];
    let f = &mats[OspGen::SmallF.table_index()];
    let be = &mats[OspGen::BigE.table_index()];
    let bf = &mats[OspGen::BigF.table_index()];
    check("h^p = h", h.matpow(pp).unwrap(), h.clone());
    check("e^p = 0", e.matpow(pp).unwrap(), MatrixGF::zero(n, n, p));
    check("f^p = 0", f.matpow(pp).unwrap(), MatrixGF::zero(n, n, p));
    check("E^2 = e", be.mul(be).unwrap(), e.clone());
    check("F^2 = -f", bf.mul(bf).unwrap(), f.scale(pp - 1));

    L0Report {
        lambda: module.weight().rep(),
        dim: module.dim(),
        module_law_ok,
        restricted_ok,
        failures,
    }
}

/// The canonical grade-0 monomial labels, handy for tests and dumps.
pub fn osp_monomials() -> [(OspGen, MonoIdx, i64); 5] {
    [
        (OspGen::H, MonoIdx::new(1, 1, 0), 1),
        (OspGen::SmallE, MonoIdx::new(0, 2, 0), -1),
        (OspGen::SmallF, MonoIdx::new(2, 0, 0), 1),
        (OspGen::BigE, MonoIdx::new(0, 1, 1), -1),
        (OspGen::BigF, MonoIdx::new(1, 0, 1), 1),
    ]
}
