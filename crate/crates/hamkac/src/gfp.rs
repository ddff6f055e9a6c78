//! Exact arithmetic in the prime field F_p (p > 3) and exact sparse/dense
//! linear algebra over it. No floating point anywhere; every entry is a
//! fully reduced residue.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Errors from field/matrix construction and shape checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GfpError {
    /// The modulus is not a prime greater than 3.
    BadModulus(u64),
    /// Two operands live over different moduli.
    ModulusMismatch(u64, u64),
    /// Matrix dimensions are incompatible with the requested operation.
    DimensionMismatch { left: (usize, usize), right: (usize, usize) },
    /// The operation requires a square matrix.
    NotSquare(usize, usize),
}

impl fmt::Display for GfpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GfpError::BadModulus(p) => write!(f, "modulus {p} is not a prime > 3"),
            GfpError::ModulusMismatch(a, b) => write!(f, "modulus mismatch: {a} vs {b}"),
            GfpError::DimensionMismatch { left, right } => {
                write!(f, "dimension mismatch: {}x{} vs {}x{}", left.0, left.1, right.0, right.1)
            }
            GfpError::NotSquare(r, c) => write!(f, "matrix is {r}x{c}, expected square"),
        }
    }
}

impl std::error::Error for GfpError {}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A validated prime modulus p > 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self, GfpError> {
        if p > 3 && is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(GfpError::BadModulus(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    /// p^e as u64; panics on overflow (shapes are validated upstream).
    pub fn pow(self, e: u32) -> u64 {
        self.0.checked_pow(e).expect("prime power overflow")
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// An element of F_p: a fully reduced residue together with its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldScalar {
    value: u64,
    p: Prime,
}

impl FieldScalar {
    pub fn new(value: i64, p: Prime) -> Self {
        let m = p.get() as i64;
        FieldScalar { value: value.rem_euclid(m) as u64, p }
    }

    pub fn from_u64(value: u64, p: Prime) -> Self {
        FieldScalar { value: value % p.get(), p }
    }

    pub fn zero(p: Prime) -> Self {
        FieldScalar { value: 0, p }
    }

    pub fn one(p: Prime) -> Self {
        FieldScalar { value: 1, p }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> Prime {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn check(self, other: FieldScalar) {
        assert_eq!(self.p, other.p, "field scalar modulus mismatch");
    }

    pub fn add(self, other: FieldScalar) -> FieldScalar {
        self.check(other);
        FieldScalar::from_u64(self.value + other.value, self.p)
    }

    pub fn sub(self, other: FieldScalar) -> FieldScalar {
        self.check(other);
        FieldScalar::from_u64(self.value + self.p.get() - other.value, self.p)
    }

    pub fn mul(self, other: FieldScalar) -> FieldScalar {
        self.check(other);
        FieldScalar::from_u64(self.value * other.value, self.p)
    }

    pub fn neg(self) -> FieldScalar {
        FieldScalar::from_u64(self.p.get() - self.value, self.p)
    }

    /// c^e by square-and-multiply. Deliberately does not shortcut through
    /// Fermat: the caller may rely on genuine exponentiation semantics.
    pub fn pow(self, mut e: u64) -> FieldScalar {
        let p = self.p.get();
        let mut base = self.value;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        FieldScalar { value: acc, p: self.p }
    }

    /// Multiplicative inverse of a nonzero element.
    pub fn inv(self) -> FieldScalar {
        assert!(self.value != 0, "inverse of zero");
        self.pow(self.p.get() - 2)
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.value.fmt(f)
    }
}

/// C(n,k) mod p by Lucas' theorem, digit by digit in base p.
pub fn binom_mod_p(n: u64, k: u64, p: Prime) -> FieldScalar {
    if k > n {
        return FieldScalar::zero(p);
    }
    let pp = p.get();
    // factorials mod p for digits < p
    let mut fact = vec![1u64; pp as usize];
    for i in 1..pp as usize {
        fact[i] = fact[i - 1] * i as u64 % pp;
    }
    let small = |a: u64, b: u64| -> u64 {
        if b > a {
            return 0;
        }
        let num = fact[a as usize];
        let den = fact[b as usize] * fact[(a - b) as usize] % pp;
        // den != 0 since a < p
        num * mod_pow(den, pp - 2, pp) % pp
    };
    let (mut n, mut k) = (n, k);
    let mut acc = 1u64;
    while n > 0 || k > 0 {
        acc = acc * small(n % pp, k % pp) % pp;
        if acc == 0 {
            break;
        }
        n /= pp;
        k /= pp;
    }
    FieldScalar::from_u64(acc, p)
}

fn mod_pow(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc
}

/// Density threshold above which matrix products switch to dense storage.
const DENSE_FILL: f64 = 0.25;

/// An exact matrix over F_p. Sparse triplet storage in canonical
/// (row-major sorted, no explicit zeros) form by default, with a dense
/// fallback once fill exceeds 25%.
#[derive(Debug, Clone)]
pub struct MatrixGF {
    rows: usize,
    cols: usize,
    p: Prime,
    data: Storage,
}

#[derive(Debug, Clone)]
enum Storage {
    /// (row, col, value) sorted by (row, col), value != 0.
    Sparse(Vec<(u32, u32, u64)>),
    /// Row-major, len = rows*cols.
    Dense(Vec<u64>),
}

impl PartialEq for MatrixGF {
    fn eq(&self, other: &Self) -> bool {
        if self.rows != other.rows || self.cols != other.cols || self.p != other.p {
            return false;
        }
        match (&self.data, &other.data) {
            (Storage::Sparse(a), Storage::Sparse(b)) => a == b,
            _ => {
                for r in 0..self.rows {
                    for c in 0..self.cols {
                        if self.get(r, c) != other.get(r, c) {
                            return false;
                        }
                    }
                }
                true
            }
        }
    }
}

impl Eq for MatrixGF {}

impl MatrixGF {
    pub fn zero(rows: usize, cols: usize, p: Prime) -> Self {
        MatrixGF { rows, cols, p, data: Storage::Sparse(Vec::new()) }
    }

    pub fn identity(n: usize, p: Prime) -> Self {
        let trips = (0..n).map(|i| (i as u32, i as u32, 1)).collect();
        MatrixGF { rows: n, cols: n, p, data: Storage::Sparse(trips) }
    }

    /// Build from (row, col, value) triplets; duplicate positions are summed.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        p: Prime,
        triplets: impl IntoIterator<Item = (usize, usize, u64)>,
    ) -> Self {
        let pp = p.get();
        let mut trips: Vec<(u32, u32, u64)> = triplets
            .into_iter()
            .map(|(r, c, v)| {
                assert!(r < rows && c < cols, "triplet out of bounds");
                (r as u32, c as u32, v % pp)
            })
            .collect();
        trips.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut out: Vec<(u32, u32, u64)> = Vec::with_capacity(trips.len());
        for (r, c, v) in trips {
            if let Some(last) = out.last_mut() {
                if last.0 == r && last.1 == c {
                    last.2 = (last.2 + v) % pp;
                    continue;
                }
            }
            out.push((r, c, v));
        }
        out.retain(|&(_, _, v)| v != 0);
        MatrixGF { rows, cols, p, data: Storage::Sparse(out) }
    }

    pub fn from_dense_rows(rows: Vec<Vec<u64>>, p: Prime) -> Self {
        let nr = rows.len();
        let nc = rows.first().map_or(0, Vec::len);
        let pp = p.get();
        let mut data = Vec::with_capacity(nr * nc);
        for row in &rows {
            assert_eq!(row.len(), nc, "ragged rows");
            for &v in row {
                data.push(v % pp);
            }
        }
        MatrixGF { rows: nr, cols: nc, p, data: Storage::Dense(data) }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> Prime {
        self.p
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        match &self.data {
            Storage::Dense(d) => d[r * self.cols + c],
            Storage::Sparse(t) => t
                .binary_search_by_key(&(r as u32, c as u32), |&(rr, cc, _)| (rr, cc))
                .map(|i| t[i].2)
                .unwrap_or(0),
        }
    }

    pub fn nnz(&self) -> usize {
        match &self.data {
            Storage::Sparse(t) => t.len(),
            Storage::Dense(d) => d.iter().filter(|&&v| v != 0).count(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.nnz() == 0
    }

    /// Canonical sorted triplets (row, col, value).
    pub fn triplets(&self) -> Vec<(usize, usize, u64)> {
        match &self.data {
            Storage::Sparse(t) => t.iter().map(|&(r, c, v)| (r as usize, c as usize, v)).collect(),
            Storage::Dense(d) => {
                let mut out = Vec::new();
                for r in 0..self.rows {
                    for c in 0..self.cols {
                        let v = d[r * self.cols + c];
                        if v != 0 {
                            out.push((r, c, v));
                        }
                    }
                }
                out
            }
        }
    }

    fn to_dense(&self) -> Vec<u64> {
        match &self.data {
            Storage::Dense(d) => d.clone(),
            Storage::Sparse(t) => {
                let mut d = vec![0; self.rows * self.cols];
                for &(r, c, v) in t {
                    d[r as usize * self.cols + c as usize] = v;
                }
                d
            }
        }
    }

    /// Re-pack into sparse or dense according to the fill threshold.
    fn normalize(mut self) -> Self {
        let cells = self.rows * self.cols;
        if cells == 0 {
            return self;
        }
        let fill = self.nnz() as f64 / cells as f64;
        match (&self.data, fill > DENSE_FILL) {
            (Storage::Sparse(_), true) => {
                let d = self.to_dense();
                self.data = Storage::Dense(d);
            }
            (Storage::Dense(_), false) => {
                let t = self
                    .triplets()
                    .into_iter()
                    .map(|(r, c, v)| (r as u32, c as u32, v))
                    .collect();
                self.data = Storage::Sparse(t);
            }
            _ => {}
        }
        self
    }

    fn check_mod(&self, other: &MatrixGF) -> Result<(), GfpError> {
        if self.p != other.p {
            return Err(GfpError::ModulusMismatch(self.p.get(), other.p.get()));
        }
        Ok(())
    }

    pub fn add(&self, other: &MatrixGF) -> Result<MatrixGF, GfpError> {
        self.check_mod(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(GfpError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut trips = self.triplets();
        trips.extend(other.triplets());
        Ok(MatrixGF::from_triplets(self.rows, self.cols, self.p, trips).normalize())
    }

    pub fn scale(&self, c: u64) -> MatrixGF {
        let c = c % self.p.get();
        MatrixGF::from_triplets(
            self.rows,
            self.cols,
            self.p,
            self.triplets().into_iter().map(|(r, cc, v)| (r, cc, v * c % self.p.get())),
        )
        .normalize()
    }

    pub fn sub(&self, other: &MatrixGF) -> Result<MatrixGF, GfpError> {
        self.add(&other.scale(self.p.get() - 1))
    }

    pub fn transpose(&self) -> MatrixGF {
        MatrixGF::from_triplets(
            self.cols,
            self.rows,
            self.p,
            self.triplets().into_iter().map(|(r, c, v)| (c, r, v)),
        )
    }

    /// Exact matrix product.
    pub fn mul(&self, other: &MatrixGF) -> Result<MatrixGF, GfpError> {
        self.check_mod(other)?;
        if self.cols != other.rows {
            return Err(GfpError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let p = self.p.get();
        let out = match (&self.data, &other.data) {
            (Storage::Sparse(a), Storage::Sparse(b)) => {
                // CSR-style: group B's triplets by row for scanning.
                let mut b_rows: Vec<Vec<(u32, u64)>> = vec![Vec::new(); other.rows];
                for &(r, c, v) in b {
                    b_rows[r as usize].push((c, v));
                }
                let mut acc: Vec<u64> = vec![0; other.cols];
                let mut touched: Vec<u32> = Vec::new();
                let mut trips: Vec<(u32, u32, u64)> = Vec::new();
                let mut i = 0;
                while i < a.len() {
                    let row = a[i].0;
                    while i < a.len() && a[i].0 == row {
                        let (_, k, v) = a[i];
                        for &(c, w) in &b_rows[k as usize] {
                            if acc[c as usize] == 0 {
                                touched.push(c);
                            }
                            acc[c as usize] = (acc[c as usize] + v * w) % p;
                        }
                        i += 1;
                    }
                    touched.sort_unstable();
                    for &c in &touched {
                        if acc[c as usize] != 0 {
                            trips.push((row, c, acc[c as usize]));
                        }
                        acc[c as usize] = 0;
                    }
                    touched.clear();
                }
                MatrixGF { rows: self.rows, cols: other.cols, p: self.p, data: Storage::Sparse(trips) }
            }
            _ => {
                let a = self.to_dense();
                let b = other.to_dense();
                let (n, k, m) = (self.rows, self.cols, other.cols);
                let mut d = vec![0u64; n * m];
                for i in 0..n {
                    for l in 0..k {
                        let av = a[i * k + l];
                        if av != 0 {
                            let brow = &b[l * m..(l + 1) * m];
                            let drow = &mut d[i * m..(i + 1) * m];
                            for j in 0..m {
                                drow[j] = (drow[j] + av * brow[j]) % p;
                            }
                        }
                    }
                }
                MatrixGF { rows: n, cols: m, p: self.p, data: Storage::Dense(d) }
            }
        };
        Ok(out.normalize())
    }

    /// A^e by repeated squaring; exact.
    pub fn matpow(&self, mut e: u64) -> Result<MatrixGF, GfpError> {
        if self.rows != self.cols {
            return Err(GfpError::NotSquare(self.rows, self.cols));
        }
        let mut result = MatrixGF::identity(self.rows, self.p);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Apply to a dense column vector.
    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let p = self.p.get();
        let mut out = vec![0u64; self.rows];
        match &self.data {
            Storage::Sparse(t) => {
                for &(r, c, a) in t {
                    let x = v[c as usize];
                    if x != 0 {
                        out[r as usize] = (out[r as usize] + a * x) % p;
                    }
                }
            }
            Storage::Dense(d) => {
                for r in 0..self.rows {
                    let mut acc = 0u64;
                    for c in 0..self.cols {
                        acc = (acc + d[r * self.cols + c] * v[c]) % p;
                    }
                    out[r] = acc;
                }
            }
        }
        out
    }

    /// Reduced row-echelon form; returns (rref, rank, pivot columns).
    pub fn rref(&self) -> RrefResult {
        let p = self.p.get();
        let mut d = self.to_dense();
        let (nr, nc) = (self.rows, self.cols);
        let mut pivot_cols = Vec::new();
        let mut r = 0usize;
        for c in 0..nc {
            if r == nr {
                break;
            }
            let Some(pr) = (r..nr).find(|&i| d[i * nc + c] != 0) else { continue };
            d.swap_chunks(pr, r, nc);
            let inv = mod_pow(d[r * nc + c], p - 2, p);
            for j in c..nc {
                d[r * nc + j] = d[r * nc + j] * inv % p;
            }
            for i in 0..nr {
                if i != r && d[i * nc + c] != 0 {
                    let f = d[i * nc + c];
                    for j in c..nc {
                        let sub = f * d[r * nc + j] % p;
                        d[i * nc + j] = (d[i * nc + j] + p - sub) % p;
                    }
                }
            }
            pivot_cols.push(c);
            r += 1;
        }
        let rank = pivot_cols.len();
        let matrix =
            MatrixGF { rows: nr, cols: nc, p: self.p, data: Storage::Dense(d) }.normalize();
        RrefResult { matrix, rank, pivot_cols }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of the right null space, as dense vectors. dim = cols - rank.
    pub fn kernel_basis(&self) -> Vec<Vec<u64>> {
        let p = self.p.get();
        let RrefResult { matrix, rank: _, pivot_cols } = self.rref();
        let nc = self.cols;
        let free: Vec<usize> = (0..nc).filter(|c| !pivot_cols.contains(c)).collect();
        let mut out = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![0u64; nc];
            v[fc] = 1;
            for (ri, &pc) in pivot_cols.iter().enumerate() {
                let coeff = matrix.get(ri, fc);
                if coeff != 0 {
                    v[pc] = p - coeff;
                }
            }
            out.push(v);
        }
        out
    }
}

/// Result of row reduction.
#[derive(Debug, Clone)]
pub struct RrefResult {
    pub matrix: MatrixGF,
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
}

trait SwapChunks {
    fn swap_chunks(&mut self, a: usize, b: usize, len: usize);
}

impl SwapChunks for Vec<u64> {
    fn swap_chunks(&mut self, a: usize, b: usize, len: usize) {
        if a == b {
            return;
        }
        for j in 0..len {
            self.swap(a * len + j, b * len + j);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use proptest::prelude::*;

    fn p5() -> Prime {
        Prime::new(5).unwrap()
    }

    fn p7() -> Prime {
        Prime::new(7).unwrap()
    }

    fn big_binom(n: u64, k: u64) -> BigUint {
        if k > n {
            return BigUint::from(0u32);
        }
        let mut num = BigUint::from(1u32);
        let mut den = BigUint::from(1u32);
        for i in 0..k {
            num *= n - i;
            den *= i + 1;
        }
        num / den
    }

    #[test]
    fn prime_validation() {
        assert!(Prime::new(5).is_ok());
        assert!(Prime::new(7).is_ok());
        assert!(Prime::new(11).is_ok());
        assert!(Prime::new(4).is_err());
        assert!(Prime::new(3).is_err()); // p > 3 is a standing hypothesis
        assert!(Prime::new(2).is_err());
        assert!(Prime::new(9).is_err());
    }

    #[test]
    fn binom_examples() {
        assert_eq!(binom_mod_p(6, 3, p5()).value(), 0); // C(6,3)=20
        assert_eq!(binom_mod_p(123, 0, p5()).value(), 1);
        assert_eq!(binom_mod_p(7, 2, p7()).value(), 0); // C(7,2)=21
        assert_eq!(binom_mod_p(3, 7, p5()).value(), 0); // k > n
    }

    #[test]
    fn binom_against_bigint_oracle() {
        // exhaustive for n,k < p^2, p in {5, 7}
        for p in [p5(), p7()] {
            let bound = p.get() * p.get();
            for n in 0..bound {
                for k in 0..bound {
                    let want = (big_binom(n, k) % BigUint::from(p.get())).to_u64_digits();
                    let want = want.first().copied().unwrap_or(0);
                    assert_eq!(binom_mod_p(n, k, p).value(), want, "C({n},{k}) mod {p}");
                }
            }
        }
        // sampled below p^2 for p = 11
        use rand::{Rng, SeedableRng};
        let p11 = Prime::new(11).unwrap();
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let n = rng.gen_range(0..121u64);
            let k = rng.gen_range(0..121u64);
            let want = (big_binom(n, k) % BigUint::from(11u64)).to_u64_digits();
            let want = want.first().copied().unwrap_or(0);
            assert_eq!(binom_mod_p(n, k, p11).value(), want, "C({n},{k}) mod 11");
        }
    }

    #[test]
    fn scalar_ops() {
        let p = p5();
        let a = FieldScalar::new(-3, p);
        assert_eq!(a.value(), 2);
        assert_eq!(a.add(FieldScalar::new(4, p)).value(), 1);
        assert_eq!(a.mul(FieldScalar::new(3, p)).value(), 1);
        assert_eq!(a.inv().mul(a).value(), 1);
        assert_eq!(FieldScalar::new(2, p).pow(4).value(), 1); // Fermat
    }

    #[test]
    fn rref_examples() {
        let p = p5();
        let id = MatrixGF::identity(3, p);
        let r = id.rref();
        assert_eq!(r.matrix, id);
        assert_eq!(r.rank, 3);
        assert_eq!(r.pivot_cols, vec![0, 1, 2]);

        let z = MatrixGF::zero(2, 4, p);
        let r = z.rref();
        assert_eq!(r.matrix, z);
        assert_eq!(r.rank, 0);

        let m = MatrixGF::from_dense_rows(vec![vec![1, 2], vec![2, 4]], p);
        assert_eq!(m.rref().rank, 1);
    }

    #[test]
    fn kernel_examples() {
        let p = p5();
        assert!(MatrixGF::identity(4, p).kernel_basis().is_empty());
        let z = MatrixGF::zero(3, 3, p);
        let k = z.kernel_basis();
        assert_eq!(k.len(), 3);
        for (i, v) in k.iter().enumerate() {
            let mut e = vec![0u64; 3];
            e[i] = 1;
            assert_eq!(*v, e);
        }
        let m = MatrixGF::from_dense_rows(vec![vec![1, 2], vec![2, 4]], p);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        // kernel vector is (3,1) up to scaling: check m * v = 0
        assert!(m.apply(&k[0]).iter().all(|&x| x == 0));
        assert_eq!(k[0][0], 3); // free column normalized to 1 at index 1: v = (3, 1)
        assert_eq!(k[0][1], 1);
    }

    #[test]
    fn matpow_examples() {
        let p = p5();
        let id = MatrixGF::identity(6, p);
        assert_eq!(id.matpow(1_000_000).unwrap(), id);

        let n = MatrixGF::from_dense_rows(vec![vec![0, 1], vec![0, 0]], p);
        assert!(n.matpow(2).unwrap().is_zero());

        let d = MatrixGF::from_dense_rows(vec![vec![2]], p);
        assert_eq!(d.matpow(4).unwrap(), MatrixGF::identity(1, p));

        let rect = MatrixGF::zero(2, 3, p);
        assert!(matches!(rect.matpow(2), Err(GfpError::NotSquare(2, 3))));
    }

    #[test]
    fn mul_sparse_dense_agree() {
        let p = p7();
        let a = MatrixGF::from_dense_rows(vec![vec![1, 2, 0], vec![0, 3, 4], vec![5, 0, 6]], p);
        let b = MatrixGF::from_dense_rows(vec![vec![2, 0, 1], vec![1, 1, 0], vec![0, 5, 3]], p);
        let sparse_a = MatrixGF::from_triplets(3, 3, p, a.triplets());
        let sparse_b = MatrixGF::from_triplets(3, 3, p, b.triplets());
        assert_eq!(a.mul(&b).unwrap(), sparse_a.mul(&sparse_b).unwrap());
    }

    fn arb_matrix(p: u64, maxdim: usize) -> impl Strategy<Value = MatrixGF> {
        (1..=maxdim, 1..=maxdim).prop_flat_map(move |(r, c)| {
            proptest::collection::vec(0..p, r * c).prop_map(move |vals| {
                let rows = vals.chunks(c).map(|ch| ch.to_vec()).collect();
                MatrixGF::from_dense_rows(rows, Prime::new(p).unwrap())
            })
        })
    }

    proptest! {
        #[test]
        fn rref_idempotent(m in arb_matrix(5, 8)) {
            let r = m.rref();
            let r2 = r.matrix.rref();
            prop_assert_eq!(r.matrix, r2.matrix);
            prop_assert_eq!(r.rank, r2.rank);
        }

        #[test]
        fn rank_nullity(m in arb_matrix(7, 8)) {
            let r = m.rref();
            let k = m.kernel_basis();
            prop_assert_eq!(r.rank + k.len(), m.cols());
            for v in &k {
                prop_assert!(m.apply(v).iter().all(|&x| x == 0));
            }
        }

        #[test]
        fn matpow_additive(m in arb_matrix(5, 5), a in 1u64..8, b in 1u64..8) {
            if m.rows() == m.cols() {
                let lhs = m.matpow(a + b).unwrap();
                let rhs = m.matpow(a).unwrap().mul(&m.matpow(b).unwrap()).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
