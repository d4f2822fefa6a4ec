//! Dense univariate polynomials over a [`Field`], with factorization and the
//! reciprocal map `f ↦ X^{deg f} f(1/X)`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{parse_i64_list, Field, FieldElement};

/// Coefficients lowest degree first, without trailing zeros. The zero
/// polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<FieldElement>,
}

/// How an irreducible factor of a symplectic minimal polynomial behaves under
/// the reciprocal map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactorKind {
    /// `p ≠ ±p̄`; carries the monic reciprocal partner.
    SplitPair { partner: Poly },
    /// `q = q̄` of even degree ≥ 2.
    SelfBar,
    /// `X - 1`
    LinMinus,
    /// `X + 1`
    LinPlus,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
    DivMod,
    Gcd,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({})", self.to_text(), self.field.characteristic())
    }
}

impl Poly {
    pub fn new(field: &Field, mut coeffs: Vec<FieldElement>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &Field) -> Poly {
        Poly::new(field, Vec::new())
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field, field.one())
    }

    pub fn x(field: &Field) -> Poly {
        Poly::new(field, vec![field.zero(), field.one()])
    }

    pub fn constant(field: &Field, c: FieldElement) -> Poly {
        Poly::new(field, vec![c])
    }

    pub fn monomial(field: &Field, c: FieldElement, degree: usize) -> Poly {
        let mut coeffs = vec![field.zero(); degree + 1];
        coeffs[degree] = c;
        Poly::new(field, coeffs)
    }

    /// Coefficients given as raw packed field elements, low-to-high.
    pub fn from_u64s(field: &Field, coeffs: &[u64]) -> Poly {
        let p = field.characteristic();
        if field.is_prime() {
            Poly::new(field, coeffs.iter().map(|&c| field.from_i64((c % p) as i64)).collect())
        } else {
            let c = coeffs
                .iter()
                .map(|&c| field.element(c).unwrap_or_else(|_| field.zero()))
                .collect();
            Poly::new(field, c)
        }
    }

    /// Integer coefficients reduced into the prime subfield, low-to-high.
    pub fn from_i64s(field: &Field, coeffs: &[i64]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    /// Parses the text format `c0,c1,…` (low-to-high integer coefficients).
    /// `"0"` and the empty string denote the zero polynomial.
    pub fn parse(field: &Field, text: &str) -> Result<Poly> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Poly::zero(field));
        }
        Ok(Poly::from_i64s(field, &parse_i64_list(text)?))
    }

    /// Text format `c0,c1,…`; the zero polynomial prints as `"0"`. Extension
    /// field coefficients are printed as packed integers.
    pub fn to_text(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.raw().to_string()).collect();
        parts.join(",")
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == self.field.one()
    }

    pub fn leading(&self) -> FieldElement {
        self.coeffs.last().copied().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == self.field.one()
    }

    /// Scalar multiple with leading coefficient 1; zero stays zero.
    pub fn monic(&self) -> Poly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let inv = self.field.inv(self.leading()).expect("nonzero leading coefficient");
        self.scale(inv)
    }

    /// Lexicographic comparison of raw coefficient sequences, low-to-high.
    pub fn lex_cmp(&self, other: &Poly) -> Ordering {
        let a: Vec<u64> = self.coeffs.iter().map(|c| c.raw()).collect();
        let b: Vec<u64> = other.coeffs.iter().map(|c| c.raw()).collect();
        a.cmp(&b)
    }

    fn check_field(&self, other: &Poly) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        debug_assert!(self.field == other.field);
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        Poly::new(f, c)
    }

    pub fn neg(&self) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        debug_assert!(self.field == other.field);
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect();
        Poly::new(f, c)
    }

    pub fn scale(&self, s: FieldElement) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&c| f.mul(c, s)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        debug_assert!(self.field == other.field);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let f = &self.field;
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, out)
    }

    pub fn pow(&self, mut e: usize) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Euclidean division: `self = q·d + r` with `deg r < deg d`.
    pub fn divmod(&self, d: &Poly) -> Result<(Poly, Poly)> {
        self.check_field(d)?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = &self.field;
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return Ok((Poly::zero(f), self.clone()));
        }
        let lead_inv = f.inv(d.leading())?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![f.zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = f.mul(rem[k + dd], lead_inv);
            quot[k] = c;
            if c.is_zero() {
                continue;
            }
            for (j, &dj) in d.coeffs.iter().enumerate() {
                rem[k + j] = f.sub(rem[k + j], f.mul(c, dj));
            }
        }
        rem.truncate(dd);
        Ok((Poly::new(f, quot), Poly::new(f, rem)))
    }

    /// Remainder modulo a nonzero polynomial.
    pub fn rem(&self, d: &Poly) -> Poly {
        self.divmod(d).expect("nonzero modulus in same field").1
    }

    /// Exact quotient; errors if the division leaves a remainder.
    pub fn div_exact(&self, d: &Poly) -> Result<Poly> {
        let (q, r) = self.divmod(d)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::ExtractionFailed)
        }
    }

    /// Monic greatest common divisor; `gcd(0, 0)` is an error.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        self.check_field(other)?;
        if self.is_zero() && other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Returns `(g, s, t)` with `g = s·self + t·other` monic.
    pub fn ext_gcd(&self, other: &Poly) -> Result<(Poly, Poly, Poly)> {
        self.check_field(other)?;
        if self.is_zero() && other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1)?;
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        let inv = f.inv(r0.leading())?;
        Ok((r0.scale(inv), s0.scale(inv), t0.scale(inv)))
    }

    /// Inverse modulo `m`, if `self` is a unit there.
    pub fn inv_mod(&self, m: &Poly) -> Result<Poly> {
        let (g, s, _) = self.ext_gcd(m)?;
        if !g.is_one() {
            return Err(Error::DivisionByZero);
        }
        Ok(s.rem(m))
    }

    pub fn lcm(&self, other: &Poly) -> Result<Poly> {
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(&self.field));
        }
        let g = self.gcd(other)?;
        Ok(self.mul(&other.div_exact(&g)?).monic())
    }

    pub fn mul_mod(&self, other: &Poly, m: &Poly) -> Poly {
        self.mul(other).rem(m)
    }

    pub fn pow_mod(&self, e: &BigUint, m: &Poly) -> Poly {
        let mut acc = Poly::one(&self.field).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mul_mod(&acc, m);
            if e.bit(i) {
                acc = acc.mul_mod(&base, m);
            }
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(c, f.from_i64((i as u64 % f.characteristic()) as i64)))
            .collect();
        Poly::new(f, c)
    }

    pub fn eval(&self, x: FieldElement) -> FieldElement {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Checked arithmetic entry point. `DivMod` returns `(quotient, Some(remainder))`;
    /// the other operations return `(result, None)`.
    pub fn arith(&self, other: &Poly, op: PolyOp) -> Result<(Poly, Option<Poly>)> {
        self.check_field(other)?;
        match op {
            PolyOp::Add => Ok((self.add(other), None)),
            PolyOp::Sub => Ok((self.sub(other), None)),
            PolyOp::Mul => Ok((self.mul(other), None)),
            PolyOp::DivMod => {
                let (q, r) = self.divmod(other)?;
                Ok((q, Some(r)))
            }
            PolyOp::Gcd => Ok((self.gcd(other)?, None)),
        }
    }

    /// Reciprocal `X^{deg f} f(1/X) = unit · monic`. Requires `f(0) ≠ 0`.
    pub fn bar(&self) -> Result<(Poly, FieldElement)> {
        if self.is_zero() || self.coeff(0).is_zero() {
            return Err(Error::ZeroOrXDivides);
        }
        let mut rev = self.coeffs.clone();
        rev.reverse();
        let raw = Poly::new(&self.field, rev);
        let unit = raw.leading();
        Ok((raw.monic(), unit))
    }

    /// Monic reciprocal; shorthand for `bar().0`.
    pub fn bar_monic(&self) -> Result<Poly> {
        Ok(self.bar()?.0)
    }

    fn pth_root(&self) -> Poly {
        let f = &self.field;
        let p = f.characteristic() as usize;
        let e = f.size() / f.characteristic();
        let c = self
            .coeffs
            .iter()
            .step_by(p)
            .map(|&c| f.pow(c, e))
            .collect();
        Poly::new(f, c)
    }

    /// Squarefree decomposition of a monic polynomial: pairs `(g, i)` with the
    /// `g` pairwise coprime, squarefree and `∏ g^i = self`.
    fn squarefree_decomposition(&self) -> Vec<(Poly, usize)> {
        let f = &self.field;
        let p = f.characteristic() as usize;
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let d = self.derivative();
        if d.is_zero() {
            for (g, j) in self.pth_root().squarefree_decomposition() {
                out.push((g, j * p));
            }
            return out;
        }
        let mut c = self.gcd(&d).expect("nonzero");
        let mut w = self.div_exact(&c).expect("gcd divides");
        let mut i = 1;
        while !w.is_one() {
            let y = w.gcd(&c).expect("nonzero");
            let z = w.div_exact(&y).expect("gcd divides");
            if !z.is_one() {
                out.push((z, i));
            }
            i += 1;
            w = y;
            c = c.div_exact(&w).expect("gcd divides");
        }
        if !c.is_one() {
            for (g, j) in c.pth_root().squarefree_decomposition() {
                out.push((g, j * p));
            }
        }
        out
    }

    /// Splits a monic squarefree polynomial into products of irreducibles of
    /// equal degree: pairs `(product, degree)`.
    fn distinct_degree(&self) -> Vec<(Poly, usize)> {
        let f = &self.field;
        let q = BigUint::from(f.size());
        let x = Poly::x(f);
        let mut rest = self.clone();
        let mut h = x.clone();
        let mut out = Vec::new();
        let mut i = 1;
        while rest.degree().unwrap_or(0) >= 2 * i {
            h = h.pow_mod(&q, &rest);
            let g = h.sub(&x).gcd(&rest).expect("nonzero");
            if !g.is_one() {
                rest = rest.div_exact(&g).expect("gcd divides");
                h = h.rem(&rest);
                out.push((g, i));
            }
            i += 1;
        }
        if let Some(d) = rest.degree() {
            if d > 0 {
                out.push((rest, d));
            }
        }
        out
    }

    /// Cantor–Zassenhaus splitting of a monic squarefree product of
    /// irreducibles, all of degree `d`.
    fn equal_degree(&self, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
        let f = &self.field;
        let n = self.degree().expect("nonzero");
        if n == d {
            return vec![self.clone()];
        }
        let r = n / d;
        let exp = (BigUint::from(f.size()).pow(d as u32) - 1u32) / 2u32;
        let mut parts = vec![self.clone()];
        while parts.len() < r {
            let a = Poly::new(f, (0..n).map(|_| f.random(rng)).collect());
            if a.degree().unwrap_or(0) == 0 {
                continue;
            }
            let mut next = Vec::with_capacity(parts.len() + 1);
            for u in parts {
                let du = u.degree().expect("nonzero");
                if du == d {
                    next.push(u);
                    continue;
                }
                let b = a.pow_mod(&exp, &u).sub(&Poly::one(f));
                let g = if b.is_zero() { u.clone() } else { b.gcd(&u).expect("nonzero") };
                let dg = g.degree().unwrap_or(0);
                if dg > 0 && dg < du {
                    let other = u.div_exact(&g).expect("gcd divides");
                    next.push(g);
                    next.push(other);
                } else {
                    next.push(u);
                }
            }
            parts = next;
        }
        parts
    }

    /// Factorization into distinct monic irreducibles with multiplicities,
    /// sorted by degree then lexicographically. The leading coefficient of
    /// `self` is the remaining unit.
    pub fn factor(&self) -> Result<Vec<(Poly, usize)>> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        let monic = self.monic();
        let seed = 0x5eed_0000_u64 ^ monic.coeffs.len() as u64;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        for (sqf, mult) in monic.squarefree_decomposition() {
            for (prod, d) in sqf.distinct_degree() {
                for irr in prod.equal_degree(d, &mut rng) {
                    out.push((irr, mult));
                }
            }
        }
        out.sort_by(|a, b| {
            a.0.degree()
                .cmp(&b.0.degree())
                .then_with(|| a.0.lex_cmp(&b.0))
        });
        Ok(out)
    }

    /// Ben-Or test: no irreducible factor of degree ≤ deg/2.
    pub fn is_irreducible(&self) -> bool {
        let Some(n) = self.degree() else { return false };
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let f = &self.field;
        let q = BigUint::from(f.size());
        let x = Poly::x(f);
        let mut h = x.clone();
        for _ in 0..n / 2 {
            h = h.pow_mod(&q, self);
            let g = h.sub(&x).gcd(self).expect("nonzero");
            if !g.is_one() {
                return false;
            }
        }
        true
    }

    /// Classifies a monic irreducible polynomial other than `X` by its
    /// behaviour under the reciprocal map.
    pub fn classify_irreducible(&self) -> Result<FactorKind> {
        let f = &self.field;
        if *self == Poly::x(f) {
            return Err(Error::IsX);
        }
        if !self.is_monic() || !self.is_irreducible() {
            return Err(Error::NotIrreducible);
        }
        if self.degree() == Some(1) {
            let root = f.neg(self.coeff(0));
            if root == f.one() {
                return Ok(FactorKind::LinMinus);
            }
            if root == f.neg(f.one()) {
                return Ok(FactorKind::LinPlus);
            }
        }
        let partner = self.bar_monic()?;
        if partner == *self {
            debug_assert!(self.degree().unwrap() % 2 == 0, "self-bar factor of odd degree");
            Ok(FactorKind::SelfBar)
        } else {
            Ok(FactorKind::SplitPair { partner })
        }
    }

    /// The canonical member of the pair `{self, bar(self)}`: the
    /// lexicographically smaller coefficient sequence.
    pub fn canonical_pair_rep(&self) -> Result<Poly> {
        let partner = self.bar_monic()?;
        Ok(if self.lex_cmp(&partner) == Ordering::Greater {
            partner
        } else {
            self.clone()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    fn poly(p: u64, c: &[i64]) -> Poly {
        Poly::from_i64s(&f(p), c)
    }

    #[test]
    fn arith_examples() {
        let g = poly(3, &[-1, 0, 1]).arith(&poly(3, &[-1, 1]), PolyOp::Gcd).unwrap().0;
        assert_eq!(g, poly(3, &[-1, 1]));
        let (q, r) = poly(3, &[1, 0, 1]).arith(&poly(3, &[0, 1]), PolyOp::DivMod).unwrap();
        assert_eq!(q, poly(3, &[0, 1]));
        assert_eq!(r.unwrap(), poly(3, &[1]));
        // both irreducible of degree 2 and distinct
        assert!(poly(3, &[1, 0, 1]).is_irreducible());
        assert!(poly(3, &[2, 1, 1]).is_irreducible());
        assert!(poly(3, &[1, 0, 1]).gcd(&poly(3, &[2, 1, 1])).unwrap().is_one());
    }

    #[test]
    fn arith_errors() {
        let z = Poly::zero(&f(3));
        assert_eq!(z.gcd(&z), Err(Error::DivisionByZero));
        assert_eq!(poly(3, &[1]).divmod(&z), Err(Error::DivisionByZero));
        assert_eq!(
            poly(3, &[1]).arith(&poly(5, &[1]), PolyOp::Add),
            Err(Error::FieldMismatch)
        );
    }

    #[test]
    fn bar_examples() {
        let (b, u) = poly(5, &[-2, 1]).bar().unwrap();
        assert_eq!(b, poly(5, &[2, 1]));
        assert_eq!(u, f(5).from_i64(3));
        for p in [3, 5, 7] {
            let (b, u) = poly(p, &[1, 1]).bar().unwrap();
            assert_eq!(b, poly(p, &[1, 1]));
            assert_eq!(u, f(p).one());
        }
        let (b, u) = poly(3, &[-1, 1]).bar().unwrap();
        assert_eq!(b, poly(3, &[-1, 1]));
        assert_eq!(u, f(3).from_i64(-1));
        assert_eq!(poly(3, &[0, 1]).bar(), Err(Error::ZeroOrXDivides));
        assert_eq!(Poly::zero(&f(3)).bar(), Err(Error::ZeroOrXDivides));
    }

    #[test]
    fn factor_examples() {
        assert_eq!(
            poly(3, &[-1, 0, 1]).factor().unwrap(),
            vec![(poly(3, &[1, 1]), 1), (poly(3, &[2, 1]), 1)]
        );
        assert_eq!(poly(3, &[1, 0, 1]).factor().unwrap(), vec![(poly(3, &[1, 0, 1]), 1)]);
        assert_eq!(poly(5, &[1, -2, 1]).factor().unwrap(), vec![(poly(5, &[-1, 1]), 2)]);
        assert_eq!(Poly::zero(&f(5)).factor(), Err(Error::ZeroInput));
        // inseparable-looking input: (X^3 - X)^3 = X^9 - 3X^7... over F_3 has derivative 0
        let g = poly(3, &[0, -1, 0, 1]).pow(3);
        assert_eq!(
            g.factor().unwrap(),
            vec![(poly(3, &[0, 1]), 3), (poly(3, &[1, 1]), 3), (poly(3, &[2, 1]), 3)]
        );
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            poly(5, &[-2, 1]).classify_irreducible().unwrap(),
            FactorKind::SplitPair { partner: poly(5, &[2, 1]) }
        );
        assert_eq!(poly(3, &[1, 0, 1]).classify_irreducible().unwrap(), FactorKind::SelfBar);
        assert_eq!(poly(3, &[-1, 1]).classify_irreducible().unwrap(), FactorKind::LinMinus);
        assert_eq!(poly(3, &[1, 1]).classify_irreducible().unwrap(), FactorKind::LinPlus);
        assert_eq!(poly(3, &[0, 1]).classify_irreducible(), Err(Error::IsX));
        assert_eq!(poly(3, &[-1, 0, 1]).classify_irreducible(), Err(Error::NotIrreducible));
        assert_eq!(poly(5, &[-2, 1]).canonical_pair_rep().unwrap(), poly(5, &[2, 1]));
    }

    #[test]
    fn irreducible_count_matches_necklace_formula() {
        // number of monic irreducibles of degree d over F_q: (1/d) Σ_{e|d} μ(e) q^{d/e}
        fn mobius(n: u64) -> i64 {
            let (mut n, mut r, mut k) = (n, 1i64, 2u64);
            while k * k <= n {
                if n % k == 0 {
                    n /= k;
                    if n % k == 0 {
                        return 0;
                    }
                    r = -r;
                }
                k += 1;
            }
            if n > 1 {
                r = -r;
            }
            r
        }
        for (p, d) in [(3u64, 2usize), (3, 3), (3, 4), (5, 2), (5, 3), (7, 2)] {
            let field = f(p);
            let total = p.pow(d as u32);
            let mut count = 0u64;
            for idx in 0..total {
                let mut c: Vec<u64> = (0..d).map(|i| (idx / p.pow(i as u32)) % p).collect();
                c.push(1);
                if Poly::from_u64s(&field, &c).is_irreducible() {
                    count += 1;
                }
            }
            let expect: i64 = (1..=d as u64)
                .filter(|e| d as u64 % e == 0)
                .map(|e| mobius(e) * (p as i64).pow((d as u64 / e) as u32))
                .sum::<i64>()
                / d as i64;
            assert_eq!(count as i64, expect, "p={p} d={d}");
        }
    }

    #[test]
    fn text_format() {
        let field = f(3);
        let p = Poly::parse(&field, "2,0,1").unwrap();
        assert_eq!(p, poly(3, &[2, 0, 1]));
        assert_eq!(p.to_text(), "2,0,1");
        assert_eq!(Poly::parse(&field, "-1, 1").unwrap().to_text(), "2,1");
        assert_eq!(Poly::parse(&field, "0,0").unwrap().to_text(), "0");
        assert!(Poly::parse(&field, "1,x").is_err());
    }

    fn arb_poly(p: u64, max_deg: usize) -> impl Strategy<Value = Poly> {
        proptest::collection::vec(0..p as i64, 1..=max_deg + 1)
            .prop_map(move |c| Poly::from_i64s(&f(p), &c))
    }

    fn arb_field_poly() -> impl Strategy<Value = Poly> {
        prop_oneof![arb_poly(3, 12), arb_poly(5, 12), arb_poly(7, 12)]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn factor_reproduces_input(g in arb_field_poly()) {
            prop_assume!(!g.is_zero());
            let factors = g.factor().unwrap();
            let mut prod = Poly::constant(g.field(), g.leading());
            for (i, (irr, k)) in factors.iter().enumerate() {
                prop_assert!(irr.is_monic());
                prop_assert!(irr.is_irreducible());
                for (other, _) in &factors[i + 1..] {
                    prop_assert!(other != irr);
                }
                prod = prod.mul(&irr.pow(*k));
            }
            prop_assert_eq!(prod, g);
        }

        #[test]
        fn bar_is_involutive_and_multiplicative(a in arb_field_poly(), b in arb_field_poly()) {
            prop_assume!(a.field() == b.field());
            prop_assume!(!a.is_zero() && !b.is_zero());
            prop_assume!(!a.coeff(0).is_zero() && !b.coeff(0).is_zero());
            let (am, bm) = (a.monic(), b.monic());
            prop_assert_eq!(am.bar_monic().unwrap().bar_monic().unwrap(), am.clone());
            let lhs = am.mul(&bm).bar_monic().unwrap();
            let rhs = am.bar_monic().unwrap().mul(&bm.bar_monic().unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn self_bar_factors_have_even_degree(g in arb_field_poly()) {
            prop_assume!(!g.is_zero() && !g.coeff(0).is_zero());
            for (irr, _) in g.factor().unwrap() {
                if irr.classify_irreducible().unwrap() == FactorKind::SelfBar {
                    prop_assert_eq!(irr.degree().unwrap() % 2, 0);
                }
            }
        }

        #[test]
        fn divmod_identity(a in arb_field_poly(), b in arb_field_poly()) {
            prop_assume!(a.field() == b.field() && !b.is_zero());
            let (q, r) = a.divmod(&b).unwrap();
            prop_assert_eq!(q.mul(&b).add(&r), a);
            prop_assert!(r.degree().is_none_or(|d| d < b.degree().unwrap()));
        }
    }
}
