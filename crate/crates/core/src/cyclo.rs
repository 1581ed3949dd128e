//! Exact arithmetic in the cyclotomic field Q(ζ_N).
//!
//! Elements are stored in the power basis 1, ζ, …, ζ^{φ(N)−1} of
//! Q[x]/Φ_N(x) as integer numerators over a single positive denominator.
//! The representation is canonical: numerators and denominator are coprime
//! and small values always use the `i64` storage, so equality of elements in
//! the same field is structural equality.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use once_cell::sync::Lazy;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Precomputed reduction data for Q(ζ_N).
#[derive(Debug)]
pub struct CyclotomicField {
    conductor: u32,
    degree: usize,
    modulus: Vec<i64>,
    /// `powers[k]` is x^k mod Φ_N for 0 ≤ k < N.
    powers: Vec<Vec<i64>>,
    units: Vec<u32>,
}

static FIELDS: Lazy<Mutex<HashMap<u32, Arc<CyclotomicField>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Returns the shared field context for conductor `n`.
pub fn field(n: u32) -> Arc<CyclotomicField> {
    assert!(n >= 1, "conductor must be positive");
    let mut cache = FIELDS.lock().expect("field cache poisoned");
    cache
        .entry(n)
        .or_insert_with(|| Arc::new(CyclotomicField::new(n)))
        .clone()
}

/// Coefficients of the n-th cyclotomic polynomial, lowest degree first.
///
/// Computed by dividing x^n − 1 by Φ_d for every proper divisor d of n.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    let mut memo: HashMap<u32, Vec<i64>> = HashMap::new();
    cyclotomic_rec(n, &mut memo)
}

fn cyclotomic_rec(n: u32, memo: &mut HashMap<u32, Vec<i64>>) -> Vec<i64> {
    if let Some(p) = memo.get(&n) {
        return p.clone();
    }
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let q = cyclotomic_rec(d, memo);
            p = div_monic(&p, &q);
        }
    }
    memo.insert(n, p.clone());
    p
}

fn div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let qn = num.len() - 1 - dn;
    let mut quot = vec![0i64; qn + 1];
    for k in (0..=qn).rev() {
        let c = rem[k + dn];
        quot[k] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                rem[k + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "inexact cyclotomic division");
    quot
}

impl CyclotomicField {
    fn new(n: u32) -> Self {
        let modulus = cyclotomic_polynomial(n);
        let degree = modulus.len() - 1;
        let mut powers = Vec::with_capacity(n as usize);
        let mut cur = vec![0i64; degree];
        cur[0] = 1;
        for _ in 0..n {
            powers.push(cur.clone());
            // multiply by x and reduce
            let carry = cur[degree - 1];
            for i in (1..degree).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if carry != 0 {
                for i in 0..degree {
                    cur[i] -= carry * modulus[i];
                }
            }
        }
        let units = (1..=n).filter(|&k| k.gcd(&n) == 1).map(|k| k % n).collect();
        CyclotomicField {
            conductor: n,
            degree,
            modulus,
            powers,
            units,
        }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// φ(N), the dimension over Q.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[i64] {
        &self.modulus
    }

    /// Exponents k with gcd(k, N) = 1, i.e. the Galois automorphisms ζ ↦ ζ^k.
    pub fn units(&self) -> &[u32] {
        &self.units
    }

    /// Reduces an integer combination Σ c_k ζ^k (k taken mod N) to the power basis.
    pub fn reduce_exponent_counts(&self, counts: &[i64]) -> Vec<i64> {
        let n = self.conductor as usize;
        let mut folded = vec![0i64; n];
        for (k, &c) in counts.iter().enumerate() {
            folded[k % n] += c;
        }
        let mut out = vec![0i64; self.degree];
        for (k, &c) in folded.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if k < self.degree {
                out[k] += c;
            } else {
                for (o, &p) in out.iter_mut().zip(&self.powers[k]) {
                    *o += c * p;
                }
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// integer kernels, shared between the i128 fast path and the BigInt fallback

trait Int: Clone + PartialEq {
    fn zero() -> Self;
    fn add(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn mul_i64(&self, k: i64) -> Option<Self>;
    fn is_nil(&self) -> bool;
}

impl Int for i128 {
    fn zero() -> Self {
        0
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn mul_i64(&self, k: i64) -> Option<Self> {
        self.checked_mul(k as i128)
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
}

impl Int for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn mul_i64(&self, k: i64) -> Option<Self> {
        Some(self * k)
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
}

/// Reduces an exponent-indexed vector (indices < 2N allowed) to the power basis.
fn reduce_raw<T: Int>(f: &CyclotomicField, raw: Vec<T>) -> Option<Vec<T>> {
    let n = f.conductor as usize;
    let mut folded: Vec<T> = vec![T::zero(); n.max(f.degree)];
    for (k, c) in raw.into_iter().enumerate() {
        if c.is_nil() {
            continue;
        }
        let slot = &mut folded[k % n];
        *slot = slot.add(&c)?;
    }
    let mut out: Vec<T> = vec![T::zero(); f.degree];
    for (k, c) in folded.into_iter().enumerate() {
        if c.is_nil() {
            continue;
        }
        if k < f.degree {
            out[k] = out[k].add(&c)?;
        } else {
            for (o, &p) in out.iter_mut().zip(&f.powers[k]) {
                if p != 0 {
                    *o = o.add(&c.mul_i64(p)?)?;
                }
            }
        }
    }
    Some(out)
}

fn add_raw<T: Int>(an: &[T], ad: &T, bn: &[T], bd: &T) -> Option<(Vec<T>, T)> {
    if ad == bd {
        let num = an
            .iter()
            .zip(bn)
            .map(|(x, y)| x.add(y))
            .collect::<Option<Vec<_>>>()?;
        return Some((num, ad.clone()));
    }
    let num = an
        .iter()
        .zip(bn)
        .map(|(x, y)| x.mul(bd)?.add(&y.mul(ad)?))
        .collect::<Option<Vec<_>>>()?;
    Some((num, ad.mul(bd)?))
}

fn mul_raw<T: Int>(
    f: &CyclotomicField,
    an: &[T],
    ad: &T,
    bn: &[T],
    bd: &T,
) -> Option<(Vec<T>, T)> {
    let deg = f.degree;
    let mut conv: Vec<T> = vec![T::zero(); 2 * deg];
    for (i, x) in an.iter().enumerate() {
        if x.is_nil() {
            continue;
        }
        for (j, y) in bn.iter().enumerate() {
            if y.is_nil() {
                continue;
            }
            conv[i + j] = conv[i + j].add(&x.mul(y)?)?;
        }
    }
    let num = reduce_raw(f, conv)?;
    Some((num, ad.mul(bd)?))
}

/// Applies ζ ↦ ζ^k to a power-basis vector.
fn galois_raw<T: Int>(f: &CyclotomicField, an: &[T], k: u32) -> Option<Vec<T>> {
    let n = f.conductor as usize;
    let mut raw: Vec<T> = vec![T::zero(); n];
    for (i, c) in an.iter().enumerate() {
        if c.is_nil() {
            continue;
        }
        let e = (i * k as usize) % n;
        raw[e] = raw[e].add(c)?;
    }
    reduce_raw(f, raw)
}

/// Embeds Q(ζ_n) into Q(ζ_m) for n | m via x ↦ x^{m/n}.
fn lift_raw<T: Int>(target: &CyclotomicField, an: &[T], step: usize) -> Option<Vec<T>> {
    let mut raw: Vec<T> = vec![T::zero(); target.conductor as usize];
    for (i, c) in an.iter().enumerate() {
        if c.is_nil() {
            continue;
        }
        raw[i * step] = raw[i * step].add(c)?;
    }
    reduce_raw(target, raw)
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Coeffs {
    Small { num: Vec<i64>, den: i64 },
    Big { num: Vec<BigInt>, den: BigInt },
}

fn fits_i64(v: i128) -> bool {
    v > i64::MIN as i128 && v <= i64::MAX as i128
}

impl Coeffs {
    fn zero(deg: usize) -> Self {
        Coeffs::Small {
            num: vec![0; deg],
            den: 1,
        }
    }

    fn as_i128(&self) -> Option<(Vec<i128>, i128)> {
        match self {
            Coeffs::Small { num, den } => {
                Some((num.iter().map(|&v| v as i128).collect(), *den as i128))
            }
            Coeffs::Big { .. } => None,
        }
    }

    fn as_big(&self) -> (Vec<BigInt>, BigInt) {
        match self {
            Coeffs::Small { num, den } => (
                num.iter().map(|&v| BigInt::from(v)).collect(),
                BigInt::from(*den),
            ),
            Coeffs::Big { num, den } => (num.clone(), den.clone()),
        }
    }

    fn from_i128(mut num: Vec<i128>, mut den: i128) -> Self {
        debug_assert!(den != 0);
        let mut g = den.abs();
        for &v in &num {
            if g == 1 {
                break;
            }
            g = g.gcd(&v);
        }
        if num.iter().all(|&v| v == 0) {
            return Coeffs::zero(num.len());
        }
        if den < 0 {
            g = -g;
        }
        if g != 1 {
            for v in num.iter_mut() {
                *v /= g;
            }
            den /= g;
        }
        if fits_i64(den) && num.iter().all(|&v| fits_i64(v)) {
            Coeffs::Small {
                num: num.into_iter().map(|v| v as i64).collect(),
                den: den as i64,
            }
        } else {
            Coeffs::from_big(
                num.into_iter().map(BigInt::from).collect(),
                BigInt::from(den),
            )
        }
    }

    fn from_big(mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        if num.iter().all(Zero::is_zero) {
            return Coeffs::zero(num.len());
        }
        let mut g = den.abs();
        for v in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(v);
        }
        if den.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for v in num.iter_mut() {
                *v = &*v / &g;
            }
            den = &den / &g;
        }
        let small_den = den.to_i64().filter(|&d| d != i64::MIN);
        let small_num: Option<Vec<i64>> = num
            .iter()
            .map(|v| v.to_i64().filter(|&x| x != i64::MIN))
            .collect();
        match (small_num, small_den) {
            (Some(num), Some(den)) => Coeffs::Small { num, den },
            _ => Coeffs::Big { num, den },
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Coeffs::Small { num, .. } => num.iter().all(|&v| v == 0),
            Coeffs::Big { num, .. } => num.iter().all(Zero::is_zero),
        }
    }
}

/// An exact element of Q(ζ_N).
#[derive(Clone)]
pub struct CycNumber {
    field: Arc<CyclotomicField>,
    coeffs: Coeffs,
}

impl fmt::Debug for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNumber({self})")
    }
}

impl CycNumber {
    pub fn zero(n: u32) -> Self {
        let field = field(n);
        let deg = field.degree;
        CycNumber {
            field,
            coeffs: Coeffs::zero(deg),
        }
    }

    pub fn one(n: u32) -> Self {
        Self::from_i64(n, 1)
    }

    pub fn from_i64(n: u32, v: i64) -> Self {
        let field = field(n);
        let mut num = vec![0i128; field.degree];
        num[0] = v as i128;
        CycNumber {
            field,
            coeffs: Coeffs::from_i128(num, 1),
        }
    }

    pub fn from_rational(n: u32, q: &BigRational) -> Self {
        let field = field(n);
        let mut num = vec![<BigInt as Zero>::zero(); field.degree];
        num[0] = q.numer().clone();
        CycNumber {
            field,
            coeffs: Coeffs::from_big(num, q.denom().clone()),
        }
    }

    /// ζ_N^k.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        let field = field(n);
        let e = k.rem_euclid(n as i64) as usize;
        let num: Vec<i128> = field.powers[e].iter().map(|&v| v as i128).collect();
        CycNumber {
            coeffs: Coeffs::from_i128(num, 1),
            field,
        }
    }

    /// Σ counts[k]·ζ_N^k.
    pub fn from_exponent_counts(n: u32, counts: &[i64]) -> Self {
        let field = field(n);
        let num = field
            .reduce_exponent_counts(counts)
            .into_iter()
            .map(|v| v as i128)
            .collect();
        CycNumber {
            field,
            coeffs: Coeffs::from_i128(num, 1),
        }
    }

    /// Builds an element from rational power-basis coefficients (any length;
    /// entries beyond φ(N) are reduced).
    pub fn from_coefficients(n: u32, coeffs: &[BigRational]) -> Self {
        let field = field(n);
        let mut den = BigInt::one();
        for c in coeffs {
            den = den.lcm(c.denom());
        }
        let raw: Vec<BigInt> = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let mut padded = vec![<BigInt as Zero>::zero(); (field.conductor as usize).max(raw.len())];
        for (i, v) in raw.into_iter().enumerate() {
            padded[i] = v;
        }
        let num = reduce_raw(&field, padded).expect("bigint arithmetic is total");
        CycNumber {
            field,
            coeffs: Coeffs::from_big(num, den),
        }
    }

    pub fn conductor(&self) -> u32 {
        self.field.conductor
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    /// Rational power-basis coefficients, length φ(N).
    pub fn coefficients(&self) -> Vec<BigRational> {
        let (num, den) = self.coeffs.as_big();
        num.into_iter()
            .map(|v| BigRational::new(v, den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    pub fn is_one(&self) -> bool {
        match &self.coeffs {
            Coeffs::Small { num, den } => {
                *den == 1 && num[0] == 1 && num[1..].iter().all(|&v| v == 0)
            }
            Coeffs::Big { .. } => false,
        }
    }

    pub fn is_rational(&self) -> bool {
        match &self.coeffs {
            Coeffs::Small { num, .. } => num[1..].iter().all(|&v| v == 0),
            Coeffs::Big { num, .. } => num[1..].iter().all(Zero::is_zero),
        }
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        if !self.is_rational() {
            return None;
        }
        let (num, den) = self.coeffs.as_big();
        Some(BigRational::new(num[0].clone(), den))
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.to_rational().filter(|q| q.is_integer()).map(|q| q.to_integer())
    }

    pub fn to_i64(&self) -> Option<i64> {
        self.to_integer().and_then(|v| v.to_i64())
    }

    /// Returns k if this element equals ζ_N^k.
    pub fn root_of_unity_exponent(&self) -> Option<u32> {
        let Coeffs::Small { num, den } = &self.coeffs else {
            return None;
        };
        if *den != 1 {
            return None;
        }
        (0..self.field.conductor)
            .find(|&k| self.field.powers[k as usize].as_slice() == num.as_slice())
    }

    /// Re-expresses the element in Q(ζ_m); requires N | m.
    pub fn lift(&self, m: u32) -> CycNumber {
        let n = self.field.conductor;
        if n == m {
            return self.clone();
        }
        assert!(m % n == 0, "cannot lift Q(ζ_{n}) into Q(ζ_{m})");
        let target = field(m);
        let step = (m / n) as usize;
        let coeffs = match self.coeffs.as_i128() {
            Some((num, den)) => match lift_raw(&target, &num, step) {
                Some(v) => Coeffs::from_i128(v, den),
                None => {
                    let (num, den) = self.coeffs.as_big();
                    Coeffs::from_big(lift_raw(&target, &num, step).unwrap(), den)
                }
            },
            None => {
                let (num, den) = self.coeffs.as_big();
                Coeffs::from_big(lift_raw(&target, &num, step).unwrap(), den)
            }
        };
        CycNumber {
            field: target,
            coeffs,
        }
    }

    fn common(a: &CycNumber, b: &CycNumber) -> (CycNumber, CycNumber) {
        let (n, m) = (a.conductor(), b.conductor());
        let l = n.lcm(&m);
        (a.lift(l), b.lift(l))
    }

    fn with(&self, coeffs: Coeffs) -> CycNumber {
        CycNumber {
            field: self.field.clone(),
            coeffs,
        }
    }

    fn binary(
        &self,
        other: &CycNumber,
        small: impl Fn(&CyclotomicField, &[i128], &i128, &[i128], &i128) -> Option<(Vec<i128>, i128)>,
        big: impl Fn(&CyclotomicField, &[BigInt], &BigInt, &[BigInt], &BigInt) -> Option<(Vec<BigInt>, BigInt)>,
    ) -> CycNumber {
        if self.conductor() != other.conductor() {
            let (a, b) = Self::common(self, other);
            return a.binary(&b, small, big);
        }
        let f = &*self.field;
        if let (Some((an, ad)), Some((bn, bd))) = (self.coeffs.as_i128(), other.coeffs.as_i128()) {
            if let Some((num, den)) = small(f, &an, &ad, &bn, &bd) {
                return self.with(Coeffs::from_i128(num, den));
            }
        }
        let (an, ad) = self.coeffs.as_big();
        let (bn, bd) = other.coeffs.as_big();
        let (num, den) = big(f, &an, &ad, &bn, &bd).expect("bigint arithmetic is total");
        self.with(Coeffs::from_big(num, den))
    }

    fn unary(
        &self,
        small: impl Fn(&CyclotomicField, &[i128]) -> Option<Vec<i128>>,
        big: impl Fn(&CyclotomicField, &[BigInt]) -> Option<Vec<BigInt>>,
    ) -> CycNumber {
        let f = &*self.field;
        if let Some((an, ad)) = self.coeffs.as_i128() {
            if let Some(num) = small(f, &an) {
                return self.with(Coeffs::from_i128(num, ad));
            }
        }
        let (an, ad) = self.coeffs.as_big();
        self.with(Coeffs::from_big(big(f, &an).unwrap(), ad))
    }

    /// The Galois automorphism ζ ↦ ζ^k (k coprime to N).
    pub fn galois(&self, k: u32) -> CycNumber {
        let k = k % self.conductor().max(1);
        self.unary(|f, a| galois_raw(f, a, k), |f, a| galois_raw(f, a, k))
    }

    /// Complex conjugation, ζ ↦ ζ^{−1}.
    pub fn conj(&self) -> CycNumber {
        let n = self.conductor();
        self.galois(n - 1)
    }

    pub fn scale_rational(&self, q: &BigRational) -> CycNumber {
        let c = CycNumber::from_rational(self.conductor(), q);
        self * &c
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<CycNumber> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.to_rational() {
            return Ok(CycNumber::from_rational(self.conductor(), &q.recip()));
        }
        let c = self.conj();
        let nc = self * &c;
        if let Some(q) = nc.to_rational() {
            return Ok(c.scale_rational(&q.recip()));
        }
        // x⁻¹ = (Π_{σ≠1} σ(x)) / N(x), with N(x) rational.
        let mut prod = CycNumber::one(self.conductor());
        for &k in self.field.units.iter().filter(|&&k| k != 1) {
            prod = &prod * &self.galois(k);
        }
        let norm = (self * &prod)
            .to_rational()
            .expect("field norm is rational");
        Ok(prod.scale_rational(&norm.recip()))
    }

    pub fn checked_div(&self, other: &CycNumber) -> Result<CycNumber> {
        Ok(self * &other.inv()?)
    }

    /// Ordering key used for deterministic sorting of values: roots of unity
    /// first by exponent, then everything else by coefficients.
    pub fn sort_key(&self) -> (u8, u32, String) {
        match self.root_of_unity_exponent() {
            Some(k) => (0, k, String::new()),
            None => (1, 0, self.to_string()),
        }
    }
}

impl PartialEq for CycNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor() == other.conductor() {
            self.coeffs == other.coeffs
        } else {
            let (a, b) = Self::common(self, other);
            a.coeffs == b.coeffs
        }
    }
}

impl Eq for CycNumber {}

impl Hash for CycNumber {
    /// Hashes the canonical form; only consistent with `Eq` for elements of a
    /// single conductor.
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.conductor().hash(state);
        self.coeffs.hash(state);
    }
}

impl<'a> Add<&'a CycNumber> for &'a CycNumber {
    type Output = CycNumber;
    fn add(self, rhs: &'a CycNumber) -> CycNumber {
        self.binary(rhs, |_, a, ad, b, bd| add_raw(a, ad, b, bd), |_, a, ad, b, bd| {
            add_raw(a, ad, b, bd)
        })
    }
}

impl<'a> Sub<&'a CycNumber> for &'a CycNumber {
    type Output = CycNumber;
    fn sub(self, rhs: &'a CycNumber) -> CycNumber {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a CycNumber> for &'a CycNumber {
    type Output = CycNumber;
    fn mul(self, rhs: &'a CycNumber) -> CycNumber {
        if self.is_zero() || rhs.is_zero() {
            let n = self.conductor().lcm(&rhs.conductor());
            return CycNumber::zero(n);
        }
        self.binary(rhs, mul_raw, mul_raw)
    }
}

impl Neg for &CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        let coeffs = match &self.coeffs {
            Coeffs::Small { num, den } => Coeffs::Small {
                num: num.iter().map(|v| -v).collect(),
                den: *den,
            },
            Coeffs::Big { num, den } => Coeffs::Big {
                num: num.iter().map(|v| -v).collect(),
                den: den.clone(),
            },
        };
        self.with(coeffs)
    }
}

impl Neg for CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        -&self
    }
}

impl Add for CycNumber {
    type Output = CycNumber;
    fn add(self, rhs: CycNumber) -> CycNumber {
        &self + &rhs
    }
}

impl Sub for CycNumber {
    type Output = CycNumber;
    fn sub(self, rhs: CycNumber) -> CycNumber {
        &self - &rhs
    }
}

impl Mul for CycNumber {
    type Output = CycNumber;
    fn mul(self, rhs: CycNumber) -> CycNumber {
        &self * &rhs
    }
}

impl AddAssign<&CycNumber> for CycNumber {
    fn add_assign(&mut self, rhs: &CycNumber) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&CycNumber> for CycNumber {
    fn sub_assign(&mut self, rhs: &CycNumber) {
        *self = &*self - rhs;
    }
}

// ---------------------------------------------------------------------------
// text form: "1/2*z^3 - z (N=8)"

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs = self.coefficients();
        let mut body = String::new();
        for (k, c) in coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let mag = c.abs();
            let term = match k {
                0 => fmt_rational(&mag),
                _ => {
                    let var = if k == 1 { "z".to_string() } else { format!("z^{k}") };
                    if mag.is_one() {
                        var
                    } else {
                        format!("{}*{var}", fmt_rational(&mag))
                    }
                }
            };
            if body.is_empty() {
                if negative {
                    body.push('-');
                }
            } else {
                body.push_str(if negative { " - " } else { " + " });
            }
            body.push_str(&term);
        }
        if body.is_empty() {
            body.push('0');
        }
        write!(f, "{body} (N={})", self.conductor())
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad rational '{s}'"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.parse().map_err(|_| bad())?;
            let q: BigInt = q.parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl FromStr for CycNumber {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let open = s
            .rfind("(N=")
            .ok_or_else(|| Error::Parse(format!("missing conductor suffix in '{s}'")))?;
        let n: u32 = s[open + 3..]
            .trim_end()
            .strip_suffix(')')
            .ok_or_else(|| Error::Parse(format!("unterminated conductor in '{s}'")))?
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad conductor in '{s}'")))?;
        if n == 0 {
            return Err(Error::Parse("conductor must be positive".into()));
        }
        let body: String = s[..open].chars().filter(|c| !c.is_whitespace()).collect();
        let mut terms: Vec<String> = Vec::new();
        let mut cur = String::new();
        let mut prev: Option<char> = None;
        for ch in body.chars() {
            if (ch == '+' || ch == '-') && !cur.is_empty() && !matches!(prev, Some('^' | '*' | '/')) {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
            prev = Some(ch);
        }
        if !cur.is_empty() {
            terms.push(cur);
        }
        if terms.is_empty() {
            return Err(Error::Parse("empty number".into()));
        }
        let mut coeffs: Vec<BigRational> = Vec::new();
        for term in terms {
            let (sign, rest) = match term.strip_prefix('-') {
                Some(r) => (-1, r),
                None => (1, term.strip_prefix('+').unwrap_or(&term)),
            };
            let (coef, deg) = if let Some(zpos) = rest.find('z') {
                let coef = match &rest[..zpos] {
                    "" => BigRational::one(),
                    c => parse_rational(
                        c.strip_suffix('*')
                            .ok_or_else(|| Error::Parse(format!("bad term '{term}'")))?,
                    )?,
                };
                let deg = match &rest[zpos + 1..] {
                    "" => 1usize,
                    d => d
                        .strip_prefix('^')
                        .and_then(|d| d.parse().ok())
                        .ok_or_else(|| Error::Parse(format!("bad exponent in '{term}'")))?,
                };
                (coef, deg)
            } else {
                (parse_rational(rest)?, 0)
            };
            if coeffs.len() <= deg {
                coeffs.resize(deg + 1, BigRational::zero());
            }
            coeffs[deg] += coef * BigRational::from_integer(BigInt::from(sign));
        }
        Ok(CycNumber::from_coefficients(n, &coeffs))
    }
}

impl Serialize for CycNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CycNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32, k: i64) -> CycNumber {
        CycNumber::root_of_unity(n, k)
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(field(64).degree(), 32);
    }

    #[test]
    fn defining_relations() {
        assert_eq!(&z(4, 1) * &z(4, 1), CycNumber::from_i64(4, -1));
        assert_eq!(&z(3, 1) + &z(3, 2), CycNumber::from_i64(3, -1));
        let s = &z(8, 1) + &z(8, 7);
        assert_eq!(&s * &s, CycNumber::from_i64(8, 2));
    }

    #[test]
    fn conjugation() {
        let q = CycNumber::from_rational(5, &BigRational::new(3.into(), 7.into()));
        assert_eq!(q.conj(), q);
        assert_eq!(z(4, 1).conj(), -&z(4, 1));
        assert_eq!(z(4, 1).conj(), z(4, 3));
    }

    #[test]
    fn inverse_and_division() {
        let x = &(&z(12, 1) + &CycNumber::from_i64(12, 3)) + &z(12, 5);
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
        assert_eq!(CycNumber::zero(5).inv(), Err(Error::DivisionByZero));
        let w = &z(7, 1) + &z(7, 3);
        assert!((&w * &w.inv().unwrap()).is_one());
    }

    #[test]
    fn lifting_between_conductors() {
        let i4 = z(4, 1);
        let i8 = i4.lift(8);
        assert_eq!(i8, z(8, 2));
        assert_eq!(&i4 + &z(8, 2), CycNumber::from_i64(8, 0) + z(8, 2) + z(8, 2));
        assert_eq!(z(3, 1), z(6, 2));
    }

    #[test]
    fn text_round_trip() {
        let x: CycNumber = "1/2*z^3 - z (N=8)".parse().unwrap();
        assert_eq!(x.to_string(), "1/2*z^3 - z (N=8)");
        assert_eq!(CycNumber::zero(4).to_string(), "0 (N=4)");
        assert_eq!(CycNumber::from_i64(1, -3).to_string(), "-3 (N=1)");
        let y: CycNumber = "-z^2 + 3/4 (N=5)".parse().unwrap();
        assert_eq!(y.to_string().parse::<CycNumber>().unwrap(), y);
        // non-canonical input is reduced
        let w: CycNumber = "z^2 (N=4)".parse().unwrap();
        assert_eq!(w.to_string(), "-1 (N=4)");
        assert!("z^2".parse::<CycNumber>().is_err());
    }

    #[test]
    fn root_exponents() {
        assert_eq!(z(8, 5).root_of_unity_exponent(), Some(5));
        assert_eq!(CycNumber::from_i64(8, 2).root_of_unity_exponent(), None);
    }

    #[test]
    fn big_coefficients_fall_back() {
        let big = CycNumber::from_i64(5, i64::MAX);
        let sq = &big * &big;
        let expect = BigInt::from(i64::MAX) * BigInt::from(i64::MAX);
        assert_eq!(sq.to_integer(), Some(expect));
        let back = sq.checked_div(&big).unwrap();
        assert_eq!(back, big);
    }
}
