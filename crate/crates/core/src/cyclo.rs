//! Exact arithmetic in cyclotomic fields `Q(ζ_n)` and linear algebra over them.
//!
//! A [`CycloNumber`] of order `n` stores the residue of a rational polynomial
//! in `ζ = ζ_n` modulo the cyclotomic polynomial `Φ_n`, as `deg Φ_n`
//! rational coefficients. The residue is unique, so equality within one
//! order is coefficient equality. Operands of different orders are embedded
//! into the field of the least common order first.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Largest cyclotomic order reachable by implicit embedding.
pub const MAX_CYCLO_ORDER: u32 = 4096;

fn poly_cache() -> &'static Mutex<HashMap<u32, Arc<Vec<Rational>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<Rational>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients of `Φ_n`, lowest degree first (monic).
pub fn cyclotomic_polynomial(n: u32) -> Arc<Vec<Rational>> {
    assert!(n >= 1, "cyclotomic order must be positive");
    if let Some(p) = poly_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Φ_d for every proper divisor d
    let mut num: Vec<Rational> = vec![Rational::zero(); n as usize + 1];
    num[0] = -Rational::one();
    num[n as usize] = Rational::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            let phi_d = cyclotomic_polynomial(d);
            num = poly_divrem(&num, &phi_d).0;
        }
    }
    let out = Arc::new(num);
    poly_cache().lock().unwrap().insert(n, out.clone());
    out
}

fn trim(p: &mut Vec<Rational>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut r: Vec<Rational> = a.to_vec();
    trim(&mut r);
    let mut b = b.to_vec();
    trim(&mut b);
    assert!(!b.is_empty(), "polynomial division by zero");
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (vec![], r);
    }
    let lead = b[db].clone();
    let mut q = vec![Rational::zero(); r.len() - db];
    for k in (db..r.len()).rev() {
        if r[k].is_zero() {
            continue;
        }
        let c = &r[k] / &lead;
        for (i, bi) in b.iter().enumerate() {
            let t = &c * bi;
            r[k - db + i] -= t;
        }
        q[k - db] = c;
    }
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] -= x;
    }
    trim(&mut out);
    out
}

/// Totient via the degree of `Φ_n`.
pub fn totient(n: u32) -> usize {
    cyclotomic_polynomial(n).len() - 1
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycloNumber {
    order: u32,
    coeffs: Vec<Rational>,
}

impl CycloNumber {
    /// Reduces an arbitrary polynomial in `ζ_n` to canonical form.
    pub fn from_poly(order: u32, mut poly: Vec<Rational>) -> Self {
        let phi = cyclotomic_polynomial(order);
        let deg = phi.len() - 1;
        if poly.len() > deg {
            for k in (deg..poly.len()).rev() {
                if poly[k].is_zero() {
                    continue;
                }
                let c = std::mem::take(&mut poly[k]);
                for (i, p) in phi.iter().enumerate().take(deg) {
                    if !p.is_zero() {
                        poly[k - deg + i] -= &c * p;
                    }
                }
            }
            poly.truncate(deg);
        }
        poly.resize(deg, Rational::zero());
        CycloNumber {
            order,
            coeffs: poly,
        }
    }

    pub fn zero(order: u32) -> Self {
        CycloNumber {
            order,
            coeffs: vec![Rational::zero(); totient(order)],
        }
    }

    pub fn one(order: u32) -> Self {
        Self::from_rational(order, Rational::one())
    }

    pub fn from_rational(order: u32, q: Rational) -> Self {
        let mut c = Self::zero(order);
        c.coeffs[0] = q;
        c
    }

    pub fn from_int(order: u32, v: i64) -> Self {
        Self::from_rational(order, Rational::from_integer(BigInt::from(v)))
    }

    /// `ζ_order^k`.
    pub fn zeta_pow(order: u32, k: i64) -> Self {
        let e = k.rem_euclid(order as i64) as usize;
        let mut poly = vec![Rational::zero(); e + 1];
        poly[e] = Rational::one();
        Self::from_poly(order, poly)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The value as a rational, if it lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Image in `Q(ζ_target)` under `ζ_order ↦ ζ_target^(target/order)`.
    pub fn embed(&self, target: u32) -> Result<Self> {
        if !target.is_multiple_of(self.order) {
            return Err(Error::IncompatibleOrders(self.order, target));
        }
        if target == self.order {
            return Ok(self.clone());
        }
        let step = (target / self.order) as usize;
        let mut poly = vec![Rational::zero(); (self.coeffs.len().max(1) - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[i * step] = c.clone();
        }
        Ok(Self::from_poly(target, poly))
    }

    /// Least common order of two numbers, checked against [`MAX_CYCLO_ORDER`].
    pub fn common_order(a: u32, b: u32) -> Result<u32> {
        let l = a.lcm(&b);
        if l > MAX_CYCLO_ORDER {
            Err(Error::IncompatibleOrders(a, b))
        } else {
            Ok(l)
        }
    }

    fn lifted(a: &Self, b: &Self) -> (Self, Self) {
        if a.order == b.order {
            return (a.clone(), b.clone());
        }
        let l = Self::common_order(a.order, b.order).expect("cyclotomic orders too large");
        (a.embed(l).unwrap(), b.embed(l).unwrap())
    }

    /// Complex conjugate, `ζ ↦ ζ⁻¹`.
    pub fn conj(&self) -> Self {
        let n = self.order as usize;
        let mut poly = vec![Rational::zero(); n.max(1)];
        for (i, c) in self.coeffs.iter().enumerate() {
            let j = (n - i) % n;
            poly[j] += c;
        }
        Self::from_poly(self.order, poly)
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // extended Euclid: s·a ≡ 1 mod Φ_n
        let phi = cyclotomic_polynomial(self.order);
        let mut r0: Vec<Rational> = phi.to_vec();
        let mut r1: Vec<Rational> = self.coeffs.clone();
        trim(&mut r1);
        let mut s0: Vec<Rational> = vec![];
        let mut s1: Vec<Rational> = vec![Rational::one()];
        while !(r1.len() == 1) {
            let (q, r) = poly_divrem(&r0, &r1);
            let s = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            debug_assert!(!r1.is_empty(), "Φ_n is irreducible");
        }
        let c = r1[0].clone();
        let s: Vec<Rational> = s1.into_iter().map(|x| x / &c).collect();
        Ok(Self::from_poly(self.order, s))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        let inv = other.inverse()?;
        Ok(self * &inv)
    }

    /// Exact literal: `order` strings `"num/den"`, the coefficients of
    /// `1, ζ, …, ζ^(order-1)` (canonical form padded with zeros).
    pub fn to_literal(&self) -> Vec<String> {
        let mut out: Vec<String> = self.coeffs.iter().map(rational_to_string).collect();
        out.resize(self.order as usize, "0/1".to_string());
        out
    }

    pub fn from_literal(order: u32, literal: &[String]) -> Result<Self> {
        if order == 0 {
            return Err(Error::malformed("", "cyclotomic order must be positive"));
        }
        if literal.len() != order as usize {
            return Err(Error::malformed(
                "",
                format!("expected {order} coefficients, got {}", literal.len()),
            ));
        }
        let mut poly = Vec::with_capacity(literal.len());
        for (i, s) in literal.iter().enumerate() {
            poly.push(parse_rational(s).map_err(|m| Error::malformed(format!("/{i}"), m))?);
        }
        Ok(Self::from_poly(order, poly))
    }
}

pub fn rational_to_string(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| format!("bad numerator in {s:?}"))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| format!("bad denominator in {s:?}"))?;
    if den.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Rational::new(num, den))
}

impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let c = if c.denom().is_one() {
                c.numer().to_string()
            } else {
                c.to_string()
            };
            terms.push(match i {
                0 => c,
                1 => format!("{c}*z{}", self.order),
                _ => format!("{c}*z{}^{i}", self.order),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl Add for &CycloNumber {
    type Output = CycloNumber;
    fn add(self, rhs: &CycloNumber) -> CycloNumber {
        if self.order != rhs.order {
            let (a, b) = CycloNumber::lifted(self, rhs);
            return &a + &b;
        }
        CycloNumber {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &CycloNumber {
    type Output = CycloNumber;
    fn sub(self, rhs: &CycloNumber) -> CycloNumber {
        if self.order != rhs.order {
            let (a, b) = CycloNumber::lifted(self, rhs);
            return &a - &b;
        }
        CycloNumber {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &CycloNumber {
    type Output = CycloNumber;
    fn mul(self, rhs: &CycloNumber) -> CycloNumber {
        if self.order != rhs.order {
            let (a, b) = CycloNumber::lifted(self, rhs);
            return &a * &b;
        }
        if self.is_zero() || rhs.is_zero() {
            return CycloNumber::zero(self.order);
        }
        if let Some(q) = self.as_rational() {
            return CycloNumber {
                order: self.order,
                coeffs: rhs.coeffs.iter().map(|c| c * &q).collect(),
            };
        }
        if let Some(q) = rhs.as_rational() {
            return CycloNumber {
                order: self.order,
                coeffs: self.coeffs.iter().map(|c| c * &q).collect(),
            };
        }
        CycloNumber::from_poly(self.order, poly_mul(&self.coeffs, &rhs.coeffs))
    }
}

impl Neg for &CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        CycloNumber {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for CycloNumber {
            type Output = CycloNumber;
            fn $m(self, rhs: CycloNumber) -> CycloNumber {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// `ζ_m^k`, kept symbolic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootOfUnity {
    pub modulus: u64,
    pub exponent: u64,
}

impl RootOfUnity {
    pub fn new(modulus: u64, exponent: i64) -> Self {
        assert!(modulus > 0);
        RootOfUnity {
            modulus,
            exponent: exponent.rem_euclid(modulus as i64) as u64,
        }
    }

    pub fn one(modulus: u64) -> Self {
        RootOfUnity::new(modulus, 0)
    }

    pub fn mul(self, other: Self) -> Result<Self> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        Ok(RootOfUnity {
            modulus: self.modulus,
            exponent: (self.exponent + other.exponent) % self.modulus,
        })
    }

    pub fn inverse(self) -> Self {
        RootOfUnity {
            modulus: self.modulus,
            exponent: (self.modulus - self.exponent) % self.modulus,
        }
    }

    /// Multiplicative order.
    pub fn order(self) -> u64 {
        self.modulus / self.exponent.gcd(&self.modulus)
    }

    /// Same value written with the smallest possible modulus.
    pub fn reduced(self) -> Self {
        let g = self.exponent.gcd(&self.modulus);
        RootOfUnity {
            modulus: self.modulus / g,
            exponent: self.exponent / g,
        }
    }

    /// Value in `Q(ζ_order)`; needs `modulus | order`.
    pub fn to_cyclo(self, order: u32) -> Result<CycloNumber> {
        if !(order as u64).is_multiple_of(self.modulus) {
            return Err(Error::IncompatibleOrders(self.modulus as u32, order));
        }
        let step = order as u64 / self.modulus;
        Ok(CycloNumber::zeta_pow(order, (self.exponent * step) as i64))
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.reduced();
        match (r.modulus, r.exponent) {
            (1, _) => write!(f, "1"),
            (2, 1) => write!(f, "-1"),
            (m, k) => write!(f, "z{m}^{k}"),
        }
    }
}

/// Dense matrix over `Q(ζ_n)`, row-major; all entries share the order `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycloMatrix {
    rows: usize,
    cols: usize,
    order: u32,
    data: Vec<CycloNumber>,
}

impl CycloMatrix {
    pub fn new(rows: usize, cols: usize, order: u32, data: Vec<CycloNumber>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        let data = data
            .into_iter()
            .map(|x| x.embed(order))
            .collect::<Result<Vec<_>>>()?;
        Ok(CycloMatrix {
            rows,
            cols,
            order,
            data,
        })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        order: u32,
        f: impl Fn(usize, usize) -> CycloNumber,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(
                    f(i, j)
                        .embed(order)
                        .expect("entry order divides matrix order"),
                );
            }
        }
        CycloMatrix {
            rows,
            cols,
            order,
            data,
        }
    }

    pub fn zero(rows: usize, cols: usize, order: u32) -> Self {
        CycloMatrix {
            rows,
            cols,
            order,
            data: vec![CycloNumber::zero(order); rows * cols],
        }
    }

    pub fn identity(d: usize, order: u32) -> Self {
        Self::scalar(d, &CycloNumber::one(order))
    }

    pub fn scalar(d: usize, s: &CycloNumber) -> Self {
        let order = s.order();
        let mut m = Self::zero(d, d, order);
        for i in 0..d {
            m.data[i * d + i] = s.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &CycloNumber {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CycloNumber) {
        self.data[i * self.cols + j] = v
            .embed(self.order)
            .expect("entry order divides matrix order");
    }

    pub fn row(&self, i: usize) -> &[CycloNumber] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn embed(&self, order: u32) -> Result<Self> {
        Self::new(self.rows, self.cols, order, self.data.clone())
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        if self.order == other.order {
            return (self.clone(), other.clone());
        }
        let l = CycloNumber::common_order(self.order, other.order)
            .expect("cyclotomic orders too large");
        (self.embed(l).unwrap(), other.embed(l).unwrap())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.order != other.order {
            let (a, b) = self.aligned(other);
            return a.mul(&b);
        }
        let mut out = Self::zero(self.rows, other.cols, self.order);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let t = a * b;
                    let slot = &mut out.data[i * other.cols + j];
                    *slot = &*slot + &t;
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    fn zip(
        &self,
        other: &Self,
        f: impl Fn(&CycloNumber, &CycloNumber) -> CycloNumber,
    ) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("shapes differ".into()));
        }
        let (a, b) = self.aligned(other);
        Ok(CycloMatrix {
            rows: a.rows,
            cols: a.cols,
            order: a.order,
            data: a.data.iter().zip(&b.data).map(|(x, y)| f(x, y)).collect(),
        })
    }

    pub fn scale(&self, s: &CycloNumber) -> Self {
        let order =
            CycloNumber::common_order(self.order, s.order()).expect("cyclotomic orders too large");
        let base = self.embed(order).unwrap();
        let s = s.embed(order).unwrap();
        CycloMatrix {
            rows: base.rows,
            cols: base.cols,
            order,
            data: base.data.iter().map(|x| x * &s).collect(),
        }
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        let rows = a.rows * b.rows;
        let cols = a.cols * b.cols;
        let mut out = Self::zero(rows, cols, a.order);
        for i in 0..a.rows {
            for j in 0..a.cols {
                let x = a.get(i, j);
                if x.is_zero() {
                    continue;
                }
                for k in 0..b.rows {
                    for l in 0..b.cols {
                        let y = b.get(k, l);
                        if !y.is_zero() {
                            out.data[(i * b.rows + k) * cols + j * b.cols + l] = x * y;
                        }
                    }
                }
            }
        }
        out
    }

    /// Block-diagonal matrix.
    pub fn direct_sum(blocks: &[CycloMatrix]) -> Self {
        let order = blocks.iter().fold(1u32, |acc, b| {
            CycloNumber::common_order(acc, b.order).expect("orders too large")
        });
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zero(rows, cols, order);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            let b = b.embed(order).unwrap();
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.data[(r0 + i) * cols + c0 + j] = b.get(i, j).clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(self.cols, self.rows, self.order);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    /// `Some(s)` when the matrix is `s·I`.
    pub fn as_scalar(&self) -> Option<CycloNumber> {
        if !self.is_square() || self.rows == 0 {
            return None;
        }
        let s = self.get(0, 0).clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let x = self.get(i, j);
                let ok = if i == j { *x == s } else { x.is_zero() };
                if !ok {
                    return None;
                }
            }
        }
        Some(s)
    }

    pub fn apply(&self, v: &[CycloNumber]) -> Result<Vec<CycloNumber>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch("vector length".into()));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = CycloNumber::zero(self.order);
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc = &acc + &(a * x);
                    }
                }
                acc
            })
            .collect())
    }

    pub fn rank(&self) -> usize {
        rref(
            self.data
                .chunks(self.cols.max(1))
                .map(|r| r.to_vec())
                .collect(),
            self.cols,
            self.order,
        )
        .0
        .len()
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(
                "inverse of a non-square matrix".into(),
            ));
        }
        let d = self.rows;
        let aug: Vec<Vec<CycloNumber>> = (0..d)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                for j in 0..d {
                    r.push(if i == j {
                        CycloNumber::one(self.order)
                    } else {
                        CycloNumber::zero(self.order)
                    });
                }
                r
            })
            .collect();
        let (rows, pivots) = rref(aug, 2 * d, self.order);
        if pivots.len() < d || pivots[d - 1] >= d {
            return Err(Error::DivisionByZero);
        }
        let data = rows.into_iter().flat_map(|r| r[d..].to_vec()).collect();
        Ok(CycloMatrix {
            rows: d,
            cols: d,
            order: self.order,
            data,
        })
    }

    pub fn pow(&self, k: u64) -> Result<Self> {
        let mut acc = Self::identity(self.rows, self.order);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            base = base.mul(&base)?;
            k >>= 1;
        }
        Ok(acc)
    }

    /// Right null space `{v : M v = 0}` in canonical echelon form.
    pub fn kernel(&self) -> Subspace {
        let rows: Vec<Vec<CycloNumber>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let (red, pivots) = rref(rows, self.cols, self.order);
        let mut basis = Vec::new();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        for f in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![CycloNumber::zero(self.order); self.cols];
            v[f] = CycloNumber::one(self.order);
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -&red[r][f];
            }
            basis.push(v);
        }
        Subspace::from_spanning(self.cols, self.order, basis)
    }

    /// `ker(M − λI)`.
    pub fn eigenspace(&self, lambda: RootOfUnity) -> Result<Subspace> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(
                "eigenspace of a non-square matrix".into(),
            ));
        }
        let order = CycloNumber::common_order(self.order, lambda.modulus as u32)?;
        let m = self.embed(order)?;
        let shifted = m.sub(&Self::scalar(self.rows, &lambda.to_cyclo(order)?))?;
        Ok(shifted.kernel())
    }
}

impl fmt::Display for CycloMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Reduced row echelon form; returns the nonzero rows and pivot columns.
/// Pivots are chosen left to right, first nonzero row wins, and every pivot
/// is scaled to 1, so the result only depends on the row span.
pub fn rref(
    mut rows: Vec<Vec<CycloNumber>>,
    cols: usize,
    order: u32,
) -> (Vec<Vec<CycloNumber>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inverse().expect("nonzero pivot");
        if !inv.is_one() {
            for x in rows[r].iter_mut() {
                if !x.is_zero() {
                    *x = &*x * &inv;
                }
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    debug_assert!(rows
        .iter()
        .all(|row| row.iter().all(|x| x.order() == order)));
    (rows, pivots)
}

/// A linear subspace of `Q(ζ_n)^d`, stored by its reduced echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient: usize,
    order: u32,
    basis: Vec<Vec<CycloNumber>>,
}

impl Subspace {
    pub fn from_spanning(ambient: usize, order: u32, vectors: Vec<Vec<CycloNumber>>) -> Self {
        let vectors: Vec<Vec<CycloNumber>> = vectors
            .into_iter()
            .map(|v| {
                assert_eq!(
                    v.len(),
                    ambient,
                    "vector length differs from ambient dimension"
                );
                v.into_iter()
                    .map(|x| x.embed(order).expect("entry order"))
                    .collect()
            })
            .collect();
        let (basis, _) = rref(vectors, ambient, order);
        Subspace {
            ambient,
            order,
            basis,
        }
    }

    pub fn zero(ambient: usize, order: u32) -> Self {
        Subspace {
            ambient,
            order,
            basis: vec![],
        }
    }

    pub fn full(ambient: usize, order: u32) -> Self {
        let basis = (0..ambient)
            .map(|i| {
                (0..ambient)
                    .map(|j| {
                        if i == j {
                            CycloNumber::one(order)
                        } else {
                            CycloNumber::zero(order)
                        }
                    })
                    .collect()
            })
            .collect();
        Subspace {
            ambient,
            order,
            basis,
        }
    }

    /// Span of the standard basis vectors with the given indices.
    pub fn coordinate(
        ambient: usize,
        order: u32,
        indices: impl IntoIterator<Item = usize>,
    ) -> Self {
        let vectors = indices
            .into_iter()
            .map(|i| {
                (0..ambient)
                    .map(|j| {
                        if i == j {
                            CycloNumber::one(order)
                        } else {
                            CycloNumber::zero(order)
                        }
                    })
                    .collect()
            })
            .collect();
        Self::from_spanning(ambient, order, vectors)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn codim(&self) -> usize {
        self.ambient - self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<CycloNumber>] {
        &self.basis
    }

    pub fn embed(&self, order: u32) -> Result<Self> {
        let vectors = self
            .basis
            .iter()
            .map(|v| v.iter().map(|x| x.embed(order)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_spanning(self.ambient, order, vectors))
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(format!(
                "subspaces of dimension {} and {}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }

    fn aligned(&self, other: &Self) -> Result<(Self, Self)> {
        self.check_same(other)?;
        if self.order == other.order {
            return Ok((self.clone(), other.clone()));
        }
        let l = CycloNumber::common_order(self.order, other.order)?;
        Ok((self.embed(l)?, other.embed(l)?))
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.aligned(other)?;
        let mut v = a.basis.clone();
        v.extend(b.basis.iter().cloned());
        Ok(Self::from_spanning(a.ambient, a.order, v))
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Self) -> Result<bool> {
        let s = self.sum(other)?;
        Ok(s.dim() == self.dim())
    }

    pub fn contains_vector(&self, v: &[CycloNumber]) -> Result<bool> {
        let order = v.iter().fold(self.order, |acc, x| acc.lcm(&x.order()));
        let line = Self::from_spanning(self.ambient, order, vec![v.to_vec()]);
        self.contains(&line)
    }

    /// Vectors orthogonal to the subspace under the bilinear pairing
    /// `Σ xᵢ yᵢ`, as a subspace.
    pub fn annihilator(&self) -> Self {
        if self.basis.is_empty() {
            return Self::full(self.ambient, self.order);
        }
        let data = self.basis.iter().flatten().cloned().collect();
        CycloMatrix::new(self.basis.len(), self.ambient, self.order, data)
            .unwrap()
            .kernel()
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.aligned(other)?;
        let mut rows = a.annihilator().basis;
        rows.extend(b.annihilator().basis);
        if rows.is_empty() {
            return Ok(Self::full(a.ambient, a.order));
        }
        let n = rows.len();
        let data = rows.into_iter().flatten().collect();
        Ok(CycloMatrix::new(n, a.ambient, a.order, data)?.kernel())
    }

    /// `M·W`.
    pub fn image(&self, m: &CycloMatrix) -> Result<Self> {
        if m.cols() != self.ambient {
            return Err(Error::DimensionMismatch("matrix and subspace".into()));
        }
        let order = CycloNumber::common_order(self.order, m.order())?;
        let m = m.embed(order)?;
        let me = self.embed(order)?;
        let vectors = me
            .basis
            .iter()
            .map(|v| m.apply(v))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_spanning(m.rows(), order, vectors))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn cyclotomic_polynomials() {
        let as_ints = |n| -> Vec<i64> {
            cyclotomic_polynomial(n)
                .iter()
                .map(|c| c.to_integer().try_into().unwrap())
                .collect()
        };
        assert_eq!(as_ints(1), vec![-1, 1]);
        assert_eq!(as_ints(3), vec![1, 1, 1]);
        assert_eq!(as_ints(4), vec![1, 0, 1]);
        assert_eq!(as_ints(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(as_ints(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(totient(15), 8);
    }

    #[test]
    fn basic_identities() {
        let i = CycloNumber::zeta_pow(4, 1);
        assert_eq!(&i * &i, CycloNumber::from_int(4, -1));
        let z = CycloNumber::zeta_pow(3, 1);
        let sum = &(&CycloNumber::one(3) + &z) + &(&z * &z);
        assert!(sum.is_zero());
        assert_eq!(CycloNumber::zeta_pow(5, 5), CycloNumber::one(5));
    }

    #[test]
    fn norm_expansion_order_8() {
        let z = CycloNumber::zeta_pow(8, 1);
        let one = CycloNumber::one(8);
        let a = &one + &z;
        let b = &one + &CycloNumber::zeta_pow(8, -1);
        let prod = &a * &b;
        let expected = &(&CycloNumber::from_int(8, 2) + &z) + &CycloNumber::zeta_pow(8, -1);
        assert_eq!(prod, expected);
        assert_eq!(prod.conj(), prod);
    }

    #[test]
    fn inverse_and_division() {
        let z = CycloNumber::zeta_pow(7, 2);
        let x = &CycloNumber::from_rational(7, q(3, 2)) + &z;
        let inv = x.inverse().unwrap();
        assert!((&x * &inv).is_one());
        assert!(matches!(
            CycloNumber::zero(7).inverse(),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        let a = &CycloNumber::zeta_pow(3, 1) + &CycloNumber::from_rational(3, q(1, 3));
        let b = CycloNumber::zeta_pow(3, 2);
        let lhs = (&a * &b).embed(12).unwrap();
        let rhs = &a.embed(12).unwrap() * &b.embed(12).unwrap();
        assert_eq!(lhs, rhs);
        // mixed-order arithmetic lands in the lcm field
        let i = CycloNumber::zeta_pow(4, 1);
        assert_eq!((&a + &i).order(), 12);
    }

    #[test]
    fn literal_round_trip_and_reduction() {
        // 1 + ζ + ζ² over order 3 reduces to 0
        let lit: Vec<String> = vec!["1".into(), "1/1".into(), "1".into()];
        assert!(CycloNumber::from_literal(3, &lit).unwrap().is_zero());
        let x = &CycloNumber::zeta_pow(4, 1) + &CycloNumber::from_rational(4, q(-2, 3));
        let back = CycloNumber::from_literal(4, &x.to_literal()).unwrap();
        assert_eq!(back, x);
        assert!(CycloNumber::from_literal(3, &["1".into(), "x".into(), "0".into()]).is_err());
    }

    fn int_matrix(rows: &[&[i64]], order: u32) -> CycloMatrix {
        let r = rows.len();
        let c = rows[0].len();
        CycloMatrix::from_fn(r, c, order, |i, j| CycloNumber::from_int(order, rows[i][j]))
    }

    #[test]
    fn kernels() {
        let m = int_matrix(&[&[1, 0], &[0, -1]], 1)
            .sub(&CycloMatrix::identity(2, 1))
            .unwrap();
        let k = m.kernel();
        assert_eq!(k, Subspace::coordinate(2, 1, [0]));
        let rot = int_matrix(&[&[0, 1], &[-1, 0]], 1)
            .sub(&CycloMatrix::identity(2, 1))
            .unwrap();
        assert_eq!(rot.kernel().dim(), 0);
        let shift = int_matrix(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]], 1)
            .sub(&CycloMatrix::identity(3, 1))
            .unwrap();
        let k = shift.kernel();
        assert_eq!(k.dim(), 1);
        assert!(k.contains_vector(&vec![CycloNumber::one(1); 3]).unwrap());
    }

    #[test]
    fn eigenspaces() {
        let e = |k| CycloNumber::zeta_pow(3, k);
        let d = CycloMatrix::from_fn(3, 3, 3, |i, j| {
            if i == j {
                e(i as i64)
            } else {
                CycloNumber::zero(3)
            }
        });
        let s = d.eigenspace(RootOfUnity::new(3, 1)).unwrap();
        assert_eq!(s, Subspace::coordinate(3, 3, [1]));
        let sx = int_matrix(&[&[0, 1], &[1, 0]], 1);
        let big = sx.kron(&CycloMatrix::identity(2, 1));
        assert_eq!(big.eigenspace(RootOfUnity::new(2, 0)).unwrap().dim(), 2);
        assert_eq!(big.eigenspace(RootOfUnity::new(2, 1)).unwrap().dim(), 2);
    }

    #[test]
    fn shift_inverse_is_power() {
        let p = 5;
        let shift = CycloMatrix::from_fn(p, p, 5, |i, j| {
            CycloNumber::from_int(5, i64::from((j + 1) % p == i))
        });
        assert_eq!(shift.inverse().unwrap(), shift.pow(p as u64 - 1).unwrap());
        assert!(shift.pow(p as u64).unwrap().is_identity());
    }

    #[test]
    fn direct_sum_and_kron_shapes() {
        let a = CycloMatrix::identity(2, 4);
        let b = CycloMatrix::scalar(3, &CycloNumber::zeta_pow(4, 1));
        let s = CycloMatrix::direct_sum(&[a.clone(), b.clone()]);
        assert_eq!((s.rows(), s.cols()), (5, 5));
        assert_eq!(s.get(3, 3), &CycloNumber::zeta_pow(4, 1));
        let k = a.kron(&b);
        assert_eq!(k.as_scalar(), Some(CycloNumber::zeta_pow(4, 1)));
        assert!(a.mul(&b).is_err());
    }

    #[test]
    fn subspace_operations() {
        let e1 = Subspace::coordinate(2, 1, [0]);
        let e2 = Subspace::coordinate(2, 1, [1]);
        assert!(e1.contains(&e1).unwrap());
        assert!(!e1.contains(&e2).unwrap());
        assert_eq!(e1.intersection(&e2).unwrap().dim(), 0);
        assert_eq!(e1.sum(&e2).unwrap(), Subspace::full(2, 1));
        let diag =
            Subspace::from_spanning(2, 1, vec![vec![CycloNumber::one(1), CycloNumber::one(1)]]);
        assert!(!e1.contains(&diag).unwrap());
        assert!(Subspace::coordinate(3, 1, [0]).contains(&e1).is_err());
    }
}
