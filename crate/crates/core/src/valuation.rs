//! Exact p-adic valuations and the pairwise valuation matrix of a root set.
//!
//! The matrix `m[i][j] = v(b_i - b_j)` is all the downstream combinatorics
//! needs: it determines the blow-up tree, and through it every local term.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::InputError;

/// A value in `T ∪ {∞}`. `Infinity` sorts above every finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Extended<T> {
    Finite(T),
    Infinity,
}

/// Nonnegative integer or infinity; the codomain of valuation-matrix entries.
pub type ExtNat = Extended<u64>;
/// Integer or infinity; the codomain of `val` on arbitrary rationals.
pub type ExtInt = Extended<i64>;

impl<T: Copy + Ord> Extended<T> {
    pub fn finite(self) -> Option<T> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Extended::Infinity)
    }

    pub fn min(self, other: Self) -> Self {
        Ord::min(self, other)
    }
}

impl<T: Copy + std::ops::Add<Output = T>> std::ops::Add for Extended<T> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(a + b),
            _ => Extended::Infinity,
        }
    }
}

impl<T: fmt::Display> fmt::Display for Extended<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(v) => write!(f, "{v}"),
            Extended::Infinity => f.write_str("∞"),
        }
    }
}

/// An odd rational prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self, InputError> {
        if p == 2 {
            return Err(InputError::EvenCharacteristic);
        }
        if !is_prime_u64(p) {
            return Err(InputError::NotPrime(p.to_string()));
        }
        Ok(Prime(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn to_bigint(self) -> BigInt {
        BigInt::from(self.0)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; these witnesses are exact for all `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &w in &WITNESSES {
        if n == w {
            return true;
        }
        if n % w == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Multiplicity of `p` in a nonzero integer, by repeated exact division.
pub fn val_int(n: &BigInt, p: Prime) -> ExtNat {
    if n.is_zero() {
        return Extended::Infinity;
    }
    let p = p.to_bigint();
    let mut n = n.abs();
    let mut k = 0u64;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Extended::Finite(k);
        }
        n = q;
        k += 1;
    }
}

/// p-adic valuation of an exact rational; `Infinity` iff `q = 0`.
pub fn val(q: &BigRational, p: Prime) -> ExtInt {
    if q.is_zero() {
        return Extended::Infinity;
    }
    let num = val_int(q.numer(), p).finite().expect("nonzero numerator");
    let den = val_int(q.denom(), p).finite().expect("nonzero denominator");
    Extended::Finite(num as i64 - den as i64)
}

/// Parses `"a"` or `"a/b"` (optional leading minus) into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let parse = |t: &str| -> Option<BigInt> {
        let digits = t.strip_prefix('-').unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        t.parse().ok()
    };
    let num = parse(num)?;
    let den = match den {
        Some(d) => {
            if d.starts_with('-') {
                return None;
            }
            parse(d)?
        }
        None => BigInt::one(),
    };
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

/// The input of roots mode: an odd prime and the roots of a monic split `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    prime: Prime,
    roots: Vec<BigRational>,
}

impl Instance {
    /// Validates count, integrality and distinctness. With `allow_small_genus`
    /// the minimum count drops from 6 to 2.
    pub fn new(
        prime: Prime,
        roots: Vec<BigRational>,
        allow_small_genus: bool,
    ) -> Result<Self, InputError> {
        check_root_count(roots.len(), allow_small_genus)?;
        for (index, b) in roots.iter().enumerate() {
            if let Extended::Finite(v) = val(b, prime) {
                if v < 0 {
                    return Err(InputError::NonIntegralRoot {
                        index,
                        value: b.to_string(),
                        p: prime.get(),
                    });
                }
            }
        }
        for i in 0..roots.len() {
            for j in i + 1..roots.len() {
                if roots[i] == roots[j] {
                    return Err(InputError::DuplicateRoots(i, j));
                }
            }
        }
        Ok(Self { prime, roots })
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn roots(&self) -> &[BigRational] {
        &self.roots
    }

    pub fn genus(&self) -> usize {
        (self.roots.len() - 2) / 2
    }
}

pub(crate) fn check_root_count(n: usize, allow_small_genus: bool) -> Result<(), InputError> {
    if n % 2 == 1 {
        return Err(InputError::OddRootCount(n));
    }
    let min = if allow_small_genus { 2 } else { 6 };
    if n < min {
        return Err(InputError::TooFewRoots { count: n, min });
    }
    Ok(())
}

/// Symmetric matrix of pairwise valuations with infinite diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuationMatrix {
    n: usize,
    entries: Vec<ExtNat>,
}

impl ValuationMatrix {
    /// Checks shape, symmetry, infinite diagonal and finite off-diagonal.
    /// Ultrametricity is a separate gate, see [`validate_ultrametric`].
    pub fn from_rows(rows: Vec<Vec<ExtNat>>) -> Result<Self, InputError> {
        let n = rows.len();
        for (row, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(InputError::NotSquare {
                    row,
                    len: r.len(),
                    n,
                });
            }
        }
        for i in 0..n {
            if !rows[i][i].is_infinite() {
                return Err(InputError::FiniteDiagonal(i));
            }
            for j in i + 1..n {
                if rows[i][j] != rows[j][i] {
                    return Err(InputError::NotSymmetric(i, j));
                }
                if rows[i][j].is_infinite() {
                    return Err(InputError::InfiniteOffDiagonal(i, j));
                }
            }
        }
        Ok(Self {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds from finite off-diagonal values given as a closure `(i, j) -> v`
    /// evaluated for `i < j`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> u64) -> Self {
        let mut entries = vec![Extended::Infinity; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let v = Extended::Finite(f(i, j));
                entries[i * n + j] = v;
                entries[j * n + i] = v;
            }
        }
        Self { n, entries }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> ExtNat {
        self.entries[i * self.n + j]
    }

    /// Off-diagonal entry as a plain integer. Panics on the diagonal.
    pub fn off(&self, i: usize, j: usize) -> u64 {
        assert_ne!(i, j, "diagonal entries are infinite");
        self.get(i, j).finite().expect("off-diagonal entries are finite")
    }

    pub fn rows(&self) -> Vec<Vec<ExtNat>> {
        self.entries.chunks(self.n.max(1)).map(<[_]>::to_vec).collect()
    }

    pub fn max_entry(&self) -> u64 {
        (0..self.n)
            .flat_map(|i| (i + 1..self.n).map(move |j| (i, j)))
            .map(|(i, j)| self.off(i, j))
            .max()
            .unwrap_or(0)
    }

    /// Same matrix with entry `(i, j)` (and its mirror) replaced.
    pub fn with_entry(&self, i: usize, j: usize, v: u64) -> Self {
        let mut out = self.clone();
        out.entries[i * self.n + j] = Extended::Finite(v);
        out.entries[j * self.n + i] = Extended::Finite(v);
        out
    }
}

/// `m[i][j] = v(b_i - b_j)`.
pub fn build_matrix(inst: &Instance) -> Result<ValuationMatrix, InputError> {
    let roots = inst.roots();
    let n = roots.len();
    let mut entries = vec![Extended::Infinity; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let v = match val(&(&roots[i] - &roots[j]), inst.prime()) {
                Extended::Infinity => return Err(InputError::DuplicateRoots(i, j)),
                // differences of integral elements are integral
                Extended::Finite(v) => Extended::Finite(u64::try_from(v).expect("integral roots")),
            };
            entries[i * n + j] = v;
            entries[j * n + i] = v;
        }
    }
    Ok(ValuationMatrix { n, entries })
}

/// Outcome of the strong-triangle check.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UltrametricVerdict {
    /// Sorted triples `(i, j, k)`, `i < j < k`, whose two smallest sides differ.
    pub violations: Vec<(usize, usize, usize)>,
}

impl UltrametricVerdict {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<(), InputError> {
        if self.is_ok() {
            Ok(())
        } else {
            Err(InputError::UltrametricViolation(self.violations))
        }
    }
}

/// In an ultrametric every triangle is isosceles with the two smallest sides
/// equal; a triple fails exactly when its minimum side is unique.
pub fn validate_ultrametric(m: &ValuationMatrix) -> UltrametricVerdict {
    let n = m.len();
    let mut violations = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let mut sides = [m.get(i, j), m.get(j, k), m.get(i, k)];
                sides.sort();
                if sides[0].cmp(&sides[1]) == Ordering::Less {
                    violations.push((i, j, k));
                }
            }
        }
    }
    UltrametricVerdict { violations }
}
