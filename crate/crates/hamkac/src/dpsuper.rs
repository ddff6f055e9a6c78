//! The divided power Grassmann superalgebra Λ(2,1;t) = O(2;t) ⊗ Λ(1).
//!
//! Basis monomials x1^(i1) x2^(i2) ξ^j with 0 ≤ i1 < p^t1, 0 ≤ i2 < p^t2,
//! j ∈ {0,1}. The product of divided powers carries binomial coefficients,
//! and any index escaping its range truncates the term to zero. ξ² = 0.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::gfp::{binom_mod_p, FieldScalar, Prime};

/// Errors from superalgebra construction and operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DpError {
    /// t1 or t2 is zero (the shape requires t in N² with entries ≥ 1).
    BadShape(u32, u32),
    /// Operands belong to different shapes.
    ShapeMismatch,
    /// A monomial index violates the shape bounds.
    IndexOutOfRange(MonoIdx),
}

impl fmt::Display for DpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DpError::BadShape(t1, t2) => write!(f, "bad shape parameters t=({t1},{t2}); need t1,t2 >= 1"),
            DpError::ShapeMismatch => write!(f, "shape mismatch between operands"),
            DpError::IndexOutOfRange(m) => write!(f, "monomial index {m} out of range"),
        }
    }
}

impl std::error::Error for DpError {}

/// The shape (p; t1, t2) fixing the algebra Λ(2,1;t) over F_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShapeParams {
    p: Prime,
    t1: u32,
    t2: u32,
}

impl ShapeParams {
    pub fn new(p: Prime, t1: u32, t2: u32) -> Result<Self, DpError> {
        if t1 == 0 || t2 == 0 {
            return Err(DpError::BadShape(t1, t2));
        }
        Ok(ShapeParams { p, t1, t2 })
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn t1(&self) -> u32 {
        self.t1
    }

    pub fn t2(&self) -> u32 {
        self.t2
    }

    /// p^t1, the exclusive bound for i1.
    pub fn bound1(&self) -> u64 {
        self.p.pow(self.t1)
    }

    /// p^t2, the exclusive bound for i2.
    pub fn bound2(&self) -> u64 {
        self.p.pow(self.t2)
    }

    /// p^(t1+t2).
    pub fn pt(&self) -> u64 {
        self.bound1() * self.bound2()
    }

    pub fn contains(&self, m: MonoIdx) -> bool {
        (m.i1 as u64) < self.bound1() && (m.i2 as u64) < self.bound2() && m.j <= 1
    }
}

impl fmt::Display for ShapeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={}, t=({},{})", self.p, self.t1, self.t2)
    }
}

/// Index of the basis monomial x1^(i1) x2^(i2) ξ^j.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MonoIdx {
    pub i1: u32,
    pub i2: u32,
    pub j: u8,
}

impl MonoIdx {
    pub fn new(i1: u32, i2: u32, j: u8) -> Self {
        assert!(j <= 1, "xi exponent must be 0 or 1");
        MonoIdx { i1, i2, j }
    }

    pub const ONE: MonoIdx = MonoIdx { i1: 0, i2: 0, j: 0 };

    /// Z-degree i1 + i2 + j.
    pub fn degree(self) -> u64 {
        self.i1 as u64 + self.i2 as u64 + self.j as u64
    }

    /// Z2-parity: j mod 2.
    pub fn parity(self) -> u8 {
        self.j & 1
    }
}

impl fmt::Display for MonoIdx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x1^({}) x2^({}) xi^{}", self.i1, self.i2, self.j)
    }
}

/// One of the three special super-derivations D1, D2, D3 of Λ(2,1;t).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DerivIdx {
    D1,
    D2,
    D3,
}

impl DerivIdx {
    pub const ALL: [DerivIdx; 3] = [DerivIdx::D1, DerivIdx::D2, DerivIdx::D3];

    /// D3 is odd; D1, D2 are even.
    pub fn parity(self) -> u8 {
        match self {
            DerivIdx::D3 => 1,
            _ => 0,
        }
    }
}

/// An element of Λ(2,1;t): finitely many monomials with nonzero F_p
/// coefficients, in canonical lexicographic (i1, i2, j) order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperPoly {
    shape: ShapeParams,
    terms: BTreeMap<MonoIdx, u64>,
}

impl SuperPoly {
    pub fn zero(shape: ShapeParams) -> Self {
        SuperPoly { shape, terms: BTreeMap::new() }
    }

    pub fn one(shape: ShapeParams) -> Self {
        SuperPoly::monomial(shape, MonoIdx::ONE, 1).unwrap()
    }

    pub fn monomial(shape: ShapeParams, m: MonoIdx, coeff: i64) -> Result<Self, DpError> {
        if !shape.contains(m) {
            return Err(DpError::IndexOutOfRange(m));
        }
        let c = FieldScalar::new(coeff, shape.p()).value();
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(m, c);
        }
        Ok(SuperPoly { shape, terms })
    }

    pub fn from_terms(
        shape: ShapeParams,
        terms: impl IntoIterator<Item = (MonoIdx, i64)>,
    ) -> Result<Self, DpError> {
        let mut out = SuperPoly::zero(shape);
        for (m, c) in terms {
            if !shape.contains(m) {
                return Err(DpError::IndexOutOfRange(m));
            }
            out.add_term(m, FieldScalar::new(c, shape.p()).value());
        }
        Ok(out)
    }

    pub fn shape(&self) -> ShapeParams {
        self.shape
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (MonoIdx, u64)> + '_ {
        self.terms.iter().map(|(&m, &c)| (m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: MonoIdx) -> u64 {
        self.terms.get(&m).copied().unwrap_or(0)
    }

    fn add_term(&mut self, m: MonoIdx, c: u64) {
        if c == 0 {
            return;
        }
        let p = self.shape.p().get();
        let e = self.terms.entry(m).or_insert(0);
        *e = (*e + c) % p;
        if *e == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &SuperPoly) -> Result<SuperPoly, DpError> {
        if self.shape != other.shape {
            return Err(DpError::ShapeMismatch);
        }
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m, c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: i64) -> SuperPoly {
        let c = FieldScalar::new(c, self.shape.p()).value();
        let mut out = SuperPoly::zero(self.shape);
        for (m, v) in self.terms() {
            out.add_term(m, v * c % self.shape.p().get());
        }
        out
    }

    pub fn neg(&self) -> SuperPoly {
        self.scale(-1)
    }

    /// Z2-parity when all terms agree; None for a mixed element.
    pub fn parity(&self) -> Option<u8> {
        let mut it = self.terms.keys();
        let first = it.next()?.parity();
        if it.all(|m| m.parity() == first) {
            Some(first)
        } else {
            None
        }
    }

    /// The product, bilinear over the monomial rule
    /// x1^(i1)x2^(i2)ξ^j · x1^(s1)x2^(s2)ξ^l =
    /// C(i1+s1, i1) C(i2+s2, i2) x1^(i1+s1) x2^(i2+s2) ξ^(j+l),
    /// with out-of-range indices and ξ² truncating to zero.
    pub fn mul(&self, other: &SuperPoly) -> Result<SuperPoly, DpError> {
        if self.shape != other.shape {
            return Err(DpError::ShapeMismatch);
        }
        let shape = self.shape;
        let p = shape.p();
        let mut out = SuperPoly::zero(shape);
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                if a.j + b.j > 1 {
                    continue;
                }
                let k1 = a.i1 as u64 + b.i1 as u64;
                let k2 = a.i2 as u64 + b.i2 as u64;
                if k1 >= shape.bound1() || k2 >= shape.bound2() {
                    continue;
                }
                let c = binom_mod_p(k1, a.i1 as u64, p)
                    .mul(binom_mod_p(k2, a.i2 as u64, p))
                    .value();
                let m = MonoIdx::new(k1 as u32, k2 as u32, a.j + b.j);
                out.add_term(m, ca * cb % p.get() * c % p.get());
            }
        }
        Ok(out)
    }

    /// The super-derivation D_k, extended linearly: D1 lowers i1, D2 lowers
    /// i2, D3 removes ξ; a monomial without the corresponding factor dies.
    pub fn deriv(&self, k: DerivIdx) -> SuperPoly {
        let mut out = SuperPoly::zero(self.shape);
        for (m, c) in self.terms() {
            let target = match k {
                DerivIdx::D1 if m.i1 >= 1 => MonoIdx::new(m.i1 - 1, m.i2, m.j),
                DerivIdx::D2 if m.i2 >= 1 => MonoIdx::new(m.i1, m.i2 - 1, m.j),
                DerivIdx::D3 if m.j == 1 => MonoIdx::new(m.i1, m.i2, 0),
                _ => continue,
            };
            out.add_term(target, c);
        }
        out
    }
}

impl fmt::Display for SuperPoly {
    /// Canonical text form: terms in lexicographic (i1,i2,j) order,
    /// each as "c*x1^(i1) x2^(i2) xi^j", joined by " + ".
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("{c}*{m}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Free-function form of the monomial degree (the Z-grading input).
pub fn degree(m: MonoIdx) -> u64 {
    m.degree()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(p: u64, t1: u32, t2: u32) -> ShapeParams {
        ShapeParams::new(Prime::new(p).unwrap(), t1, t2).unwrap()
    }

    fn mono(shape: ShapeParams, i1: u32, i2: u32, j: u8) -> SuperPoly {
        SuperPoly::monomial(shape, MonoIdx::new(i1, i2, j), 1).unwrap()
    }

    fn all_monomials(sh: ShapeParams) -> Vec<MonoIdx> {
        let mut out = Vec::new();
        for i1 in 0..sh.bound1() as u32 {
            for i2 in 0..sh.bound2() as u32 {
                for j in 0..=1u8 {
                    out.push(MonoIdx::new(i1, i2, j));
                }
            }
        }
        out
    }

    #[test]
    fn shape_validation() {
        assert!(ShapeParams::new(Prime::new(5).unwrap(), 0, 1).is_err());
        assert!(ShapeParams::new(Prime::new(5).unwrap(), 1, 1).is_ok());
    }

    #[test]
    fn mul_examples() {
        let sh = shape(5, 1, 1);
        // x1^(1) * x1^(1) = C(2,1) x1^(2) = 2 x1^(2)
        let x1 = mono(sh, 1, 0, 0);
        let sq = x1.mul(&x1).unwrap();
        assert_eq!(sq.coeff(MonoIdx::new(2, 0, 0)), 2);
        assert_eq!(sq.num_terms(), 1);
        // xi * xi = 0
        let xi = mono(sh, 0, 0, 1);
        assert!(xi.mul(&xi).unwrap().is_zero());
        // x1^(4) * x1^(1) = 0 over p=5, t1=1 (index overflow; C(5,4)=5=0 too)
        let x14 = mono(sh, 4, 0, 0);
        assert!(x14.mul(&x1).unwrap().is_zero());
    }

    #[test]
    fn deriv_examples() {
        let sh = shape(5, 1, 1);
        let f = mono(sh, 3, 2, 0);
        let d = f.deriv(DerivIdx::D1);
        assert_eq!(d.coeff(MonoIdx::new(2, 2, 0)), 1);
        assert_eq!(d.num_terms(), 1);

        let xi = mono(sh, 0, 0, 1);
        let d3 = xi.deriv(DerivIdx::D3);
        assert_eq!(d3, SuperPoly::one(sh));

        let x13 = mono(sh, 3, 0, 0);
        assert!(x13.deriv(DerivIdx::D2).is_zero());
    }

    #[test]
    fn degree_examples() {
        assert_eq!(degree(MonoIdx::new(0, 0, 1)), 1);
        assert_eq!(degree(MonoIdx::new(1, 1, 0)), 2);
        assert_eq!(degree(MonoIdx::new(4, 4, 1)), 9);
    }

    #[test]
    fn supercommutativity_exhaustive() {
        let sh = shape(5, 1, 1);
        for a in all_monomials(sh) {
            for b in all_monomials(sh) {
                let fa = SuperPoly::monomial(sh, a, 1).unwrap();
                let fb = SuperPoly::monomial(sh, b, 1).unwrap();
                let ab = fa.mul(&fb).unwrap();
                let sign = if a.parity() * b.parity() == 1 { -1 } else { 1 };
                let ba = fb.mul(&fa).unwrap().scale(sign);
                assert_eq!(ab, ba, "supercommutativity fails at {a}, {b}");
            }
        }
    }

    #[test]
    fn associativity_exhaustive() {
        let sh = shape(5, 1, 1);
        let monos = all_monomials(sh);
        for &a in &monos {
            let fa = SuperPoly::monomial(sh, a, 1).unwrap();
            for &b in &monos {
                let fb = SuperPoly::monomial(sh, b, 1).unwrap();
                let ab = fa.mul(&fb).unwrap();
                for &c in &monos {
                    let fc = SuperPoly::monomial(sh, c, 1).unwrap();
                    let lhs = ab.mul(&fc).unwrap();
                    let rhs = fa.mul(&fb.mul(&fc).unwrap()).unwrap();
                    assert_eq!(lhs, rhs, "associativity fails at {a}, {b}, {c}");
                }
            }
        }
    }

    #[test]
    fn associativity_sampled_larger_shape() {
        use rand::{Rng, SeedableRng};
        let sh = shape(5, 1, 2);
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(23);
        let monos = all_monomials(sh);
        for _ in 0..1200 {
            let pick = |rng: &mut rand_chacha::ChaCha20Rng| monos[rng.gen_range(0..monos.len())];
            let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
            let fa = SuperPoly::monomial(sh, a, 1).unwrap();
            let fb = SuperPoly::monomial(sh, b, 1).unwrap();
            let fc = SuperPoly::monomial(sh, c, 1).unwrap();
            let lhs = fa.mul(&fb).unwrap().mul(&fc).unwrap();
            let rhs = fa.mul(&fb.mul(&fc).unwrap()).unwrap();
            assert_eq!(lhs, rhs, "associativity fails at {a}, {b}, {c}");
        }
    }

    #[test]
    fn super_leibniz_exhaustive() {
        let sh = shape(5, 1, 1);
        let monos = all_monomials(sh);
        for k in DerivIdx::ALL {
            for &a in &monos {
                let fa = SuperPoly::monomial(sh, a, 1).unwrap();
                for &b in &monos {
                    let fb = SuperPoly::monomial(sh, b, 1).unwrap();
                    let lhs = fa.mul(&fb).unwrap().deriv(k);
                    let sign = if k.parity() * a.parity() == 1 { -1 } else { 1 };
                    let rhs = fa
                        .deriv(k)
                        .mul(&fb)
                        .unwrap()
                        .add(&fa.mul(&fb.deriv(k)).unwrap().scale(sign))
                        .unwrap();
                    assert_eq!(lhs, rhs, "Leibniz fails for D{k:?} at {a}, {b}");
                }
            }
        }
    }

    #[test]
    fn unit_law() {
        let sh = shape(5, 1, 2);
        let one = SuperPoly::one(sh);
        let f = SuperPoly::from_terms(sh, [(MonoIdx::new(2, 7, 1), 3), (MonoIdx::new(0, 1, 0), 4)])
            .unwrap();
        // mixed-parity element: multiply termwise anyway
        assert_eq!(one.mul(&f).unwrap(), f);
        assert_eq!(f.mul(&one).unwrap(), f);
    }

    #[test]
    fn zero_is_empty_map() {
        let sh = shape(5, 1, 1);
        let x = mono(sh, 4, 0, 0);
        let y = mono(sh, 1, 0, 0);
        let z = x.mul(&y).unwrap();
        assert_eq!(z.num_terms(), 0);
        assert!(z.is_zero());
    }

    #[test]
    fn display_canonical() {
        let sh = shape(5, 1, 1);
        let f = SuperPoly::from_terms(sh, [(MonoIdx::new(1, 0, 1), 2), (MonoIdx::new(0, 2, 0), 3)])
            .unwrap();
        assert_eq!(f.to_string(), "3*x1^(0) x2^(2) xi^0 + 2*x1^(1) x2^(0) xi^1");
        assert_eq!(SuperPoly::zero(sh).to_string(), "0");
    }
}
