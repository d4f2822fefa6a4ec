//! Finite fields of odd characteristic: prime fields `F_p` and simple
//! extensions `F_p[X]/(q)`.
//!
//! Elements are stored as a single `u64`. For the prime field this is the least
//! nonnegative residue; for an extension it packs the coefficient sequence
//! `c_0 + c_1 ξ + … + c_{h-1} ξ^{h-1}` in base `p`, so the field size must fit
//! in 64 bits. Equality of elements is equality of representations.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::poly::Poly;

const MAX_DIGITS: usize = 64;

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(u64);

impl FieldElement {
    /// Raw packed representation.
    pub fn raw(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SquareClass {
    Square,
    NonSquare,
}

impl SquareClass {
    /// Group law of `K*/(K*)^2 ≅ {±1}`.
    pub fn times(self, other: SquareClass) -> SquareClass {
        if self == other {
            SquareClass::Square
        } else {
            SquareClass::NonSquare
        }
    }

    pub fn short(self) -> &'static str {
        match self {
            SquareClass::Square => "sq",
            SquareClass::NonSquare => "ns",
        }
    }

    pub fn from_short(s: &str) -> Result<SquareClass> {
        match s {
            "sq" => Ok(SquareClass::Square),
            "ns" => Ok(SquareClass::NonSquare),
            other => Err(Error::Parse(format!("unknown square class {other:?}"))),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Inv,
    Div,
}

struct Inner {
    p: u64,
    /// Monic modulus, low-to-high, length `degree + 1`; empty for a prime field.
    modulus: Vec<u64>,
    degree: usize,
    size: u64,
    /// Inverse of the class of X when the modulus is self-reciprocal.
    xi_inv: Option<FieldElement>,
}

/// Shared handle describing a finite field. Cloning is cheap.
#[derive(Clone)]
pub struct Field {
    inner: Arc<Inner>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_prime() {
            write!(f, "F_{}", self.inner.p)
        } else {
            let m: Vec<String> = self.inner.modulus.iter().map(|c| c.to_string()).collect();
            write!(f, "F_{}[X]/({})", self.inner.p, m.join(","))
        }
    }
}

impl Field {
    /// The prime field `F_p`. Rejects `p = 2` and composite `p`.
    pub fn prime(p: u64) -> Result<Field> {
        if p == 2 {
            return Err(Error::InvalidField("characteristic 2 is not supported".into()));
        }
        if !is_prime_u64(p) {
            return Err(Error::InvalidField(format!("{p} is not an odd prime")));
        }
        Ok(Field {
            inner: Arc::new(Inner {
                p,
                modulus: Vec::new(),
                degree: 1,
                size: p,
                xi_inv: None,
            }),
        })
    }

    /// The extension `F_p[X]/(q)` for a monic irreducible `q` of degree ≥ 2,
    /// given by its coefficients low-to-high.
    pub fn extension(p: u64, modulus: &[u64]) -> Result<Field> {
        let base = Field::prime(p)?;
        let q = Poly::from_u64s(&base, modulus);
        let h = q.degree().ok_or(Error::ZeroInput)?;
        if h < 2 {
            return Err(Error::InvalidField("extension modulus must have degree ≥ 2".into()));
        }
        if !q.is_monic() {
            return Err(Error::InvalidField("extension modulus must be monic".into()));
        }
        if !q.is_irreducible() {
            return Err(Error::NotIrreducible);
        }
        let mut size: u64 = 1;
        for _ in 0..h {
            size = size
                .checked_mul(p)
                .ok_or_else(|| Error::InvalidField("field size exceeds 64 bits".into()))?;
        }
        if h > MAX_DIGITS {
            return Err(Error::InvalidField("extension degree too large".into()));
        }
        let modulus: Vec<u64> = q.coeffs().iter().map(|c| c.raw()).collect();
        let mut field = Field {
            inner: Arc::new(Inner {
                p,
                modulus,
                degree: h,
                size,
                xi_inv: None,
            }),
        };
        let (bar, _) = q.bar()?;
        if bar == q {
            let xi = field.from_coeffs(&[0, 1]);
            let xi_inv = field.inv(xi)?;
            Arc::get_mut(&mut field.inner).expect("fresh Arc").xi_inv = Some(xi_inv);
        }
        Ok(field)
    }

    pub fn characteristic(&self) -> u64 {
        self.inner.p
    }

    pub fn degree(&self) -> usize {
        self.inner.degree
    }

    pub fn size(&self) -> u64 {
        self.inner.size
    }

    pub fn is_prime(&self) -> bool {
        self.inner.modulus.is_empty()
    }

    /// The modulus of an extension field as a polynomial over the prime field.
    pub fn modulus(&self) -> Option<Poly> {
        if self.is_prime() {
            None
        } else {
            let base = Field::prime(self.inner.p).expect("valid characteristic");
            Some(Poly::from_u64s(&base, &self.inner.modulus))
        }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_i64(&self, v: i64) -> FieldElement {
        FieldElement(v.rem_euclid(self.inner.p as i64) as u64)
    }

    /// Element with the given coefficients in the basis `1, ξ, …`; coefficients
    /// beyond the degree must be absent or already reduced.
    pub fn from_coeffs(&self, coeffs: &[u64]) -> FieldElement {
        let p = self.inner.p;
        let h = self.inner.degree;
        let mut digits = [0u64; MAX_DIGITS];
        for (i, &c) in coeffs.iter().enumerate() {
            if i < h {
                digits[i] = c % p;
            } else {
                debug_assert!(c % p == 0, "coefficient beyond field degree");
            }
        }
        self.encode(&digits[..h])
    }

    /// Coefficient sequence of length `degree` in the basis `1, ξ, …`.
    pub fn coeffs(&self, a: FieldElement) -> Vec<u64> {
        let mut digits = [0u64; MAX_DIGITS];
        self.decode(a, &mut digits);
        digits[..self.inner.degree].to_vec()
    }

    /// Checks that a raw value is a valid element of this field.
    pub fn element(&self, raw: u64) -> Result<FieldElement> {
        if raw < self.inner.size {
            Ok(FieldElement(raw))
        } else {
            Err(Error::FieldMismatch)
        }
    }

    /// Iterates every field element in representation order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.inner.size).map(FieldElement)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        FieldElement(rng.gen_range(0..self.inner.size))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        FieldElement(rng.gen_range(1..self.inner.size))
    }

    fn decode(&self, a: FieldElement, digits: &mut [u64; MAX_DIGITS]) {
        let p = self.inner.p;
        let mut v = a.0;
        for d in digits.iter_mut().take(self.inner.degree) {
            *d = v % p;
            v /= p;
        }
    }

    fn encode(&self, digits: &[u64]) -> FieldElement {
        let p = self.inner.p;
        let mut v = 0u64;
        for &d in digits.iter().rev() {
            v = v * p + d;
        }
        FieldElement(v)
    }

    #[inline]
    fn mulmod(&self, a: u64, b: u64) -> u64 {
        let p = self.inner.p;
        if p < (1 << 32) {
            a * b % p
        } else {
            ((a as u128 * b as u128) % p as u128) as u64
        }
    }

    #[inline]
    fn addmod(&self, a: u64, b: u64) -> u64 {
        let p = self.inner.p;
        let s = a as u128 + b as u128;
        (s % p as u128) as u64
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.is_prime() {
            return FieldElement(self.addmod(a.0, b.0));
        }
        let (mut x, mut y) = ([0u64; MAX_DIGITS], [0u64; MAX_DIGITS]);
        self.decode(a, &mut x);
        self.decode(b, &mut y);
        for i in 0..self.inner.degree {
            x[i] = self.addmod(x[i], y[i]);
        }
        self.encode(&x[..self.inner.degree])
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let p = self.inner.p;
        if self.is_prime() {
            return FieldElement(if a.0 == 0 { 0 } else { p - a.0 });
        }
        let mut x = [0u64; MAX_DIGITS];
        self.decode(a, &mut x);
        for d in x.iter_mut().take(self.inner.degree) {
            if *d != 0 {
                *d = p - *d;
            }
        }
        self.encode(&x[..self.inner.degree])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.is_prime() {
            return FieldElement(self.mulmod(a.0, b.0));
        }
        let h = self.inner.degree;
        let (mut x, mut y) = ([0u64; MAX_DIGITS], [0u64; MAX_DIGITS]);
        self.decode(a, &mut x);
        self.decode(b, &mut y);
        let mut prod = [0u64; 2 * MAX_DIGITS];
        for i in 0..h {
            if x[i] == 0 {
                continue;
            }
            for j in 0..h {
                prod[i + j] = self.addmod(prod[i + j], self.mulmod(x[i], y[j]));
            }
        }
        let p = self.inner.p;
        let m = &self.inner.modulus;
        for k in (h..2 * h - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for (j, &mj) in m.iter().enumerate().take(h) {
                let t = self.mulmod(c, mj);
                prod[k - h + j] = self.addmod(prod[k - h + j], p - t);
            }
        }
        self.encode(&prod[..h])
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_prime() {
            // extended Euclid on residues
            let (mut r0, mut r1) = (self.inner.p as i128, a.0 as i128);
            let (mut t0, mut t1) = (0i128, 1i128);
            while r1 != 0 {
                let q = r0 / r1;
                (r0, r1) = (r1, r0 - q * r1);
                (t0, t1) = (t1, t0 - q * t1);
            }
            return Ok(FieldElement(t0.rem_euclid(self.inner.p as i128) as u64));
        }
        Ok(self.pow(a, self.inner.size - 2))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Checked binary operation. Both operands must be valid elements of this
    /// field; the second operand is ignored for [`FieldOp::Inv`].
    pub fn arith(&self, a: FieldElement, b: FieldElement, op: FieldOp) -> Result<FieldElement> {
        self.element(a.0)?;
        self.element(b.0)?;
        match op {
            FieldOp::Add => Ok(self.add(a, b)),
            FieldOp::Sub => Ok(self.sub(a, b)),
            FieldOp::Mul => Ok(self.mul(a, b)),
            FieldOp::Inv => self.inv(a),
            FieldOp::Div => self.div(a, b),
        }
    }

    /// Euler's criterion: `a^((|F|-1)/2) = 1` iff `a` is a square.
    pub fn square_class(&self, a: FieldElement) -> Result<SquareClass> {
        if a.is_zero() {
            return Err(Error::ZeroInput);
        }
        if self.pow(a, (self.inner.size - 1) / 2) == self.one() {
            Ok(SquareClass::Square)
        } else {
            Ok(SquareClass::NonSquare)
        }
    }

    /// Automorphism induced by `ξ ↦ ξ^{-1}`. The identity on a prime field;
    /// undefined when the modulus is not self-reciprocal.
    pub fn involution(&self, a: FieldElement) -> Result<FieldElement> {
        if self.is_prime() {
            return Ok(a);
        }
        let xi_inv = self.inner.xi_inv.ok_or_else(|| {
            Error::NoInvolution("modulus is not self-reciprocal".into())
        })?;
        let mut digits = [0u64; MAX_DIGITS];
        self.decode(a, &mut digits);
        let mut acc = self.zero();
        for &c in digits[..self.inner.degree].iter().rev() {
            acc = self.add(self.mul(acc, xi_inv), FieldElement(c));
        }
        Ok(acc)
    }

    pub fn has_involution(&self) -> bool {
        self.is_prime() || self.inner.xi_inv.is_some()
    }

    pub fn format_element(&self, a: FieldElement) -> String {
        if self.is_prime() {
            a.0.to_string()
        } else {
            let c: Vec<String> = self.coeffs(a).iter().map(|d| d.to_string()).collect();
            c.join(",")
        }
    }

    /// Parses an integer (any field) or a comma-separated coefficient list.
    pub fn parse_element(&self, s: &str) -> Result<FieldElement> {
        let s = s.trim();
        if s.contains(',') {
            let parts = parse_i64_list(s)?;
            if parts.len() > self.inner.degree {
                return Err(Error::Parse(format!("too many coefficients in {s:?}")));
            }
            let coeffs: Vec<u64> = parts
                .iter()
                .map(|&v| v.rem_euclid(self.inner.p as i64) as u64)
                .collect();
            Ok(self.from_coeffs(&coeffs))
        } else {
            let v: i64 = s
                .parse()
                .map_err(|_| Error::Parse(format!("bad field element {s:?}")))?;
            Ok(self.from_i64(v))
        }
    }
}

pub(crate) fn parse_i64_list(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("bad integer {t:?}")))
        })
        .collect()
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod_u64(acc, b, m);
        }
        b = mul_mod_u64(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % small == 0 {
            return n == small;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
