//! The local ring `R = K[X]/(q^m)` attached to a self-reciprocal primary
//! block, its involution, the trace-like functional `l`, the Hermitian form
//! `f` on the block and the forms induced on the filtration quotients.

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement, SquareClass};
use crate::linalg::{evaluate_at, Echelon, Matrix, Vector};
use crate::poly::Poly;
use crate::symform::{is_symplectic, SkewForm};

/// `K[X]/(q^m)` with `ξ = X mod q^m` and the involution `ξ ↦ ξ⁻¹`.
/// Elements are reduced polynomials of degree `< hm`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingR {
    field: Field,
    q: Poly,
    h: usize,
    m: usize,
    modulus: Poly,
    /// `bar(ξ^s)` for `s < hm`.
    bar_basis: Vec<Poly>,
    pi: Poly,
    pi1: Poly,
}

impl RingR {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn q(&self) -> &Poly {
        &self.q
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `dim_K R = hm`.
    pub fn dim(&self) -> usize {
        self.h * self.m
    }

    pub fn reduce(&self, a: &Poly) -> Poly {
        a.rem(&self.modulus)
    }

    pub fn one(&self) -> Poly {
        Poly::one(&self.field)
    }

    pub fn xi(&self) -> Poly {
        self.reduce(&Poly::x(&self.field))
    }

    pub fn basis(&self, s: usize) -> Poly {
        self.reduce(&Poly::monomial(&self.field, self.field.one(), s))
    }

    /// Uniformizer `π = q mod q^m`.
    pub fn pi(&self) -> &Poly {
        &self.pi
    }

    /// Bar-fixed uniformizer `ξ^{-h/2} π` for `h ≥ 2`; `π` itself for `h = 1`.
    pub fn pi1(&self) -> &Poly {
        &self.pi1
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        a.mul_mod(b, &self.modulus)
    }

    pub fn pow(&self, a: &Poly, e: usize) -> Poly {
        (0..e).fold(self.one(), |acc, _| self.mul(&acc, a))
    }

    pub fn bar(&self, a: &Poly) -> Poly {
        let mut acc = Poly::zero(&self.field);
        for (s, &c) in a.coeffs().iter().enumerate() {
            acc = acc.add(&self.bar_basis[s].scale(c));
        }
        acc
    }

    /// Membership in the ideal `(π^k)`.
    pub fn in_pi_power(&self, a: &Poly, k: usize) -> bool {
        a.rem(&self.q.pow(k.min(self.m))).is_zero()
    }

    /// Coordinates in the basis `ξ^0..ξ^{hm−1}`.
    pub fn to_vec(&self, a: &Poly) -> Vector {
        (0..self.dim()).map(|s| a.coeff(s)).collect()
    }

    pub fn from_vec(&self, v: &[FieldElement]) -> Poly {
        Poly::new(&self.field, v.to_vec())
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Poly {
        Poly::new(&self.field, (0..self.dim()).map(|_| self.field.random(rng)).collect())
    }

    /// Matrix of the K-linear map `ρ ↦ bar(ρ)` on the monomial basis.
    fn bar_matrix(&self) -> Matrix {
        let cols: Vec<Vector> = self.bar_basis.iter().map(|b| self.to_vec(b)).collect();
        Matrix::from_columns(&self.field, self.dim(), &cols)
    }

    fn verify(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvariantViolated(format!("ring involution: {what}")));
        let xi = self.xi();
        if !self.mul(&xi, &self.bar(&xi)).is_one() {
            return bad("bar(ξ)·ξ ≠ 1");
        }
        for s in 0..self.dim() {
            let e = self.basis(s);
            if self.bar(&self.bar(&e)) != e {
                return bad("not involutory");
            }
            for t in 0..self.dim() {
                let et = self.basis(t);
                if self.bar(&self.mul(&e, &et)) != self.mul(&self.bar(&e), &self.bar(&et)) {
                    return bad("not multiplicative");
                }
            }
        }
        if self.h >= 2 {
            if self.bar(&self.pi1) != self.pi1 {
                return bad("π₁ is not bar-fixed");
            }
        } else if !self.in_pi_power(&self.pi.add(&self.bar(&self.pi)), 2) {
            return bad("π + bar(π) ∉ (π²)");
        }
        Ok(())
    }
}

/// Builds `K[X]/(q^m)` for a monic irreducible self-reciprocal `q`.
pub fn ring_make(field: &Field, q: &Poly, m: usize) -> Result<RingR> {
    if q.field() != field {
        return Err(Error::FieldMismatch);
    }
    if m == 0 {
        return Err(Error::BadParameters("exponent m must be at least 1".into()));
    }
    let q = q.monic();
    if q == Poly::x(field) {
        return Err(Error::IsX);
    }
    if !q.is_irreducible() {
        return Err(Error::NotIrreducible);
    }
    if q.bar_monic()? != q {
        return Err(Error::NotSelfBar);
    }
    let h = q.degree().expect("irreducible is nonconstant");
    let modulus = q.pow(m);
    let xi_inv = Poly::x(field).inv_mod(&modulus)?;
    let mut bar_basis = Vec::with_capacity(h * m);
    let mut cur = Poly::one(field);
    for _ in 0..h * m {
        bar_basis.push(cur.clone());
        cur = cur.mul_mod(&xi_inv, &modulus);
    }
    let pi = q.rem(&modulus);
    let pi1 = if h >= 2 {
        let mut p1 = pi.clone();
        for _ in 0..h / 2 {
            p1 = p1.mul_mod(&xi_inv, &modulus);
        }
        p1
    } else {
        pi.clone()
    };
    let ring = RingR {
        field: field.clone(),
        q,
        h,
        m,
        modulus,
        bar_basis,
        pi,
        pi1,
    };
    ring.verify()?;
    Ok(ring)
}

/// Nondegenerate linear functional `l` on `R` with `l(bar ρ) = ε l(ρ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearFormL {
    values: Vector,
    epsilon: i8,
    /// Inverse of `T[t][s] = l(ξ^{t+s})`; turns `(l(ξ^t ρ))_t` back into `ρ`.
    solver: Matrix,
}

impl LinearFormL {
    /// `l(ξ^s)` for `s < hm`.
    pub fn values(&self) -> &[FieldElement] {
        &self.values
    }

    pub fn epsilon(&self) -> i8 {
        self.epsilon
    }

    pub fn apply(&self, ring: &RingR, a: &Poly) -> FieldElement {
        let f = ring.field();
        a.coeffs()
            .iter()
            .zip(&self.values)
            .fold(f.zero(), |acc, (&c, &v)| f.add(acc, f.mul(c, v)))
    }

    /// The unique `ρ` with `l(ξ^t ρ) = rhs[t]` for all `t`.
    pub fn recover(&self, ring: &RingR, rhs: &[FieldElement]) -> Poly {
        ring.from_vec(&self.solver.mul_vec(rhs))
    }
}

/// `ε = −1` for `h ≥ 2`; `ε = −(−1)^m` for `h = 1`.
pub fn epsilon_for(h: usize, m: usize) -> i8 {
    if h >= 2 || m % 2 == 0 {
        -1
    } else {
        1
    }
}

/// Deterministic construction: `l` vanishes on the bar-fixed part (`ε = −1`)
/// or the anti-fixed part (`ε = +1`) and takes the value 1 on a fixed
/// element `z` of the minimal ideal `(π^{m−1})` lying in the complementary
/// eigenspace. Free coordinates are set to zero.
pub fn linear_form_construct(ring: &RingR) -> Result<LinearFormL> {
    let f = ring.field();
    let n = ring.dim();
    let epsilon = epsilon_for(ring.h(), ring.m());
    let top = ring.pow(ring.pi1(), ring.m() - 1);
    let z = if ring.h() >= 2 {
        // π₁^{m−1} is itself bar-fixed; shifting by ξ leaves the fixed space
        ring.mul(&top, &ring.xi())
    } else {
        top
    };
    let bar = ring.bar_matrix();
    let id = Matrix::identity(f, n);
    let sign = if epsilon == -1 { f.one() } else { f.neg(f.one()) };
    // l vanishes on ker(bar − sign·id)
    let vanish = bar.sub(&id.scale(sign)).kernel();
    let mut rows: Vec<Vector> = vanish;
    rows.push(ring.to_vec(&z));
    let mut system = Matrix::zeros(f, rows.len(), n);
    for (i, r) in rows.iter().enumerate() {
        for (j, &v) in r.iter().enumerate() {
            system.set(i, j, v);
        }
    }
    let mut rhs = vec![f.zero(); rows.len()];
    rhs[rows.len() - 1] = f.one();
    let values = system
        .solve(&rhs)
        .ok_or_else(|| Error::ConstructionFailed("no functional with the required symmetry".into()))?;
    let eps = if epsilon == -1 { f.neg(f.one()) } else { f.one() };
    let apply = |a: &Poly| {
        a.coeffs()
            .iter()
            .zip(&values)
            .fold(f.zero(), |acc, (&c, &v)| f.add(acc, f.mul(c, v)))
    };
    for s in 0..n {
        let e = ring.basis(s);
        if apply(&ring.bar(&e)) != f.mul(eps, apply(&e)) {
            return Err(Error::ConstructionFailed("symmetry check failed".into()));
        }
    }
    let mut t = Matrix::zeros(f, n, n);
    for i in 0..n {
        for j in 0..n {
            t.set(i, j, apply(&ring.basis(i + j)));
        }
    }
    let solver = t
        .inverse()
        .map_err(|_| Error::ConstructionFailed("functional is degenerate".into()))?;
    Ok(LinearFormL {
        values,
        epsilon,
        solver,
    })
}

/// A primary block viewed as a module over `R` (`ξ` acting through `u`),
/// with its filtration data.
#[derive(Clone, Debug)]
pub struct ModuleM {
    ring: RingR,
    u: Matrix,
    form: SkewForm,
    /// `d_i = dim ker q(u)^i` for `i = 0..=m+1`.
    dims: Vec<usize>,
    b: Vec<usize>,
    /// Basis of `N_i = ker q(u)^i` for `i = 0..=m`.
    kernels: Vec<Vec<Vector>>,
    /// For each level `i = 1..=m`, `b_i` vectors of `N_i` whose L-spans
    /// (`span{u^s v : s < h}`) complement `N_{i−1} + (N_i ∩ πM)`.
    reps: Vec<Vec<Vector>>,
}

impl ModuleM {
    pub fn ring(&self) -> &RingR {
        &self.ring
    }

    pub fn matrix(&self) -> &Matrix {
        &self.u
    }

    pub fn form(&self) -> &SkewForm {
        &self.form
    }

    pub fn dim(&self) -> usize {
        self.u.rows()
    }

    /// `b_1..b_m`.
    pub fn multiplicities(&self) -> &[usize] {
        &self.b
    }

    pub fn kernel_dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn kernel_basis(&self, i: usize) -> &[Vector] {
        &self.kernels[i]
    }

    /// Representatives of `V_i`, `1 ≤ i ≤ m`.
    pub fn representatives(&self, i: usize) -> &[Vector] {
        &self.reps[i - 1]
    }

    /// Module action `ρ·x = ρ(u) x`.
    pub fn act(&self, rho: &Poly, x: &[FieldElement]) -> Vector {
        let mut acc = vec![self.ring.field().zero(); x.len()];
        let f = self.ring.field();
        for &c in rho.coeffs().iter().rev() {
            acc = self.u.mul_vec(&acc);
            for (a, &xi) in acc.iter_mut().zip(x) {
                *a = f.add(*a, f.mul(c, xi));
            }
        }
        acc
    }
}

/// Filtration of a block whose minimal polynomial is `q^m`, with
/// deterministic representatives (first basis vector of `N_i` not yet
/// spanned).
pub fn module_filtration(u: &Matrix, form: &SkewForm, ring: &RingR) -> Result<ModuleM> {
    build_module(u, form, ring, None::<&mut rand::rngs::ThreadRng>)
}

/// As [`module_filtration`], with representatives drawn at random from
/// `N_i`; used to check that the induced invariants do not depend on the
/// choice.
pub fn module_filtration_randomized<R: Rng>(
    u: &Matrix,
    form: &SkewForm,
    ring: &RingR,
    rng: &mut R,
) -> Result<ModuleM> {
    build_module(u, form, ring, Some(rng))
}

fn build_module<R: Rng>(
    u: &Matrix,
    form: &SkewForm,
    ring: &RingR,
    mut rng: Option<&mut R>,
) -> Result<ModuleM> {
    let f = ring.field();
    if u.field() != f || form.field() != f {
        return Err(Error::FieldMismatch);
    }
    if !is_symplectic(u, form)? {
        return Err(Error::NotSymplectic);
    }
    let n = u.rows();
    let (h, m) = (ring.h(), ring.m());
    let p = evaluate_at(ring.q(), u)?;
    let mut powers = vec![Matrix::identity(f, n)];
    for i in 1..=m + 1 {
        powers.push(powers[i - 1].mul(&p));
    }
    if !powers[m].is_zero() || powers[m - 1].is_zero() {
        return Err(Error::WrongMinimalPolynomial);
    }
    let kernels: Vec<Vec<Vector>> = powers.iter().map(|pw| pw.kernel()).collect();
    let dims: Vec<usize> = kernels.iter().map(Vec::len).collect();
    let mut b = Vec::with_capacity(m);
    for i in 1..=m {
        let num = 2 * dims[i] as i64 - dims[i - 1] as i64 - dims[i + 1] as i64;
        if num < 0 || num % h as i64 != 0 {
            return Err(Error::NonIntegralMultiplicity(format!(
                "level {i}: {num} is not a nonnegative multiple of {h}"
            )));
        }
        b.push((num / h as i64) as usize);
    }
    let mut reps = Vec::with_capacity(m);
    for i in 1..=m {
        // W = N_{i−1} + q(u)·N_{i+1}  (the latter equals N_i ∩ πM)
        let mut span = Echelon::new(f, n);
        for v in &kernels[i - 1] {
            let _ = span.insert(v);
        }
        if i < m {
            for v in &kernels[i + 1] {
                let _ = span.insert(&p.mul_vec(v));
            }
        }
        let mut level = Vec::new();
        let try_vector = |v: Vector, span: &mut Echelon, level: &mut Vec<Vector>| {
            if span.contains(&v) {
                return;
            }
            let mut w = v.clone();
            for _ in 0..h {
                let _ = span.insert(&w);
                w = u.mul_vec(&w);
            }
            level.push(v);
        };
        match rng.as_deref_mut() {
            None => {
                for v in &kernels[i] {
                    try_vector(v.clone(), &mut span, &mut level);
                }
            }
            Some(rng) => {
                let basis = &kernels[i];
                while span.rank() < dims[i] {
                    let mut v = vec![f.zero(); n];
                    for bv in basis {
                        let c = f.random(rng);
                        for (x, &y) in v.iter_mut().zip(bv) {
                            *x = f.add(*x, f.mul(c, y));
                        }
                    }
                    try_vector(v, &mut span, &mut level);
                }
            }
        }
        if span.rank() != dims[i] || level.len() != b[i - 1] {
            return Err(Error::InvariantViolated(format!(
                "level {i}: {} representatives for multiplicity {}",
                level.len(),
                b[i - 1]
            )));
        }
        reps.push(level);
    }
    Ok(ModuleM {
        ring: ring.clone(),
        u: u.clone(),
        form: form.clone(),
        dims,
        b,
        kernels: kernels.into_iter().take(m + 1).collect(),
        reps,
    })
}

/// The Hermitian form `f : M × M → R` determined by
/// `l(ξ^t f(x, y)) = (u^t x, y)`, stored as a table on the coordinate basis.
#[derive(Clone, Debug)]
pub struct HermitianForm {
    ring: RingR,
    epsilon: i8,
    dim: usize,
    table: Vec<Poly>,
}

impl HermitianForm {
    pub fn new(module: &ModuleM, l: &LinearFormL) -> Result<HermitianForm> {
        let ring = module.ring();
        let f = ring.field();
        let d = module.dim();
        let hm = ring.dim();
        let j = module.form().gram();
        // G_t = (u^t)ᵀ J, so (u^t x, y) = xᵀ G_t y
        let mut grams = Vec::with_capacity(hm);
        let mut ut = Matrix::identity(f, d);
        for _ in 0..hm {
            grams.push(ut.transpose().mul(j));
            ut = module.matrix().mul(&ut);
        }
        let mut table = Vec::with_capacity(d * d);
        for a in 0..d {
            for b in 0..d {
                let rhs: Vector = grams.iter().map(|g| g.get(a, b)).collect();
                table.push(l.recover(ring, &rhs));
            }
        }
        Ok(HermitianForm {
            ring: ring.clone(),
            epsilon: l.epsilon(),
            dim: d,
            table,
        })
    }

    pub fn epsilon(&self) -> i8 {
        self.epsilon
    }

    /// `f(x, y)`, assembled K-bilinearly from the table.
    pub fn eval(&self, x: &[FieldElement], y: &[FieldElement]) -> Poly {
        let f = self.ring.field();
        let mut acc = vec![f.zero(); self.ring.dim()];
        for (a, &xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, &yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                let c = f.mul(xa, yb);
                for (s, &v) in self.table[a * self.dim + b].coeffs().iter().enumerate() {
                    acc[s] = f.add(acc[s], f.mul(c, v));
                }
            }
        }
        self.ring.from_vec(&acc)
    }
}

/// `f(x, y)` for a single pair of vectors.
pub fn herm_form(
    module: &ModuleM,
    l: &LinearFormL,
    x: &[FieldElement],
    y: &[FieldElement],
) -> Result<Poly> {
    let n = module.dim();
    if x.len() != n || y.len() != n {
        return Err(Error::DimensionMismatch("vectors must lie in the block".into()));
    }
    let ring = module.ring();
    let j = module.form();
    let mut ux = x.to_vec();
    let mut rhs = Vec::with_capacity(ring.dim());
    for _ in 0..ring.dim() {
        rhs.push(j.pair(&ux, y));
        ux = module.matrix().mul_vec(&ux);
    }
    Ok(l.recover(ring, &rhs))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symmetry {
    HermitianSym,
    Symmetric,
    Skew,
}

/// The form `f_i'` on `V_i`, with values in the residue field `R/πR`.
#[derive(Clone, Debug)]
pub struct InducedForm {
    pub level: usize,
    pub gram: Matrix,
    pub symmetry: Symmetry,
}

impl InducedForm {
    /// Determinant square class of a symmetric level.
    pub fn discriminant(&self) -> Result<Option<SquareClass>> {
        if self.symmetry != Symmetry::Symmetric || self.gram.rows() == 0 {
            return Ok(None);
        }
        let det = self.gram.det()?;
        Ok(Some(self.gram.field().square_class(det)?))
    }
}

/// Residue field `L = K[X]/(q)` as a [`Field`] (equal to `K` when `h = 1`).
pub fn residue_field(ring: &RingR) -> Result<Field> {
    let k = ring.field();
    if ring.h() == 1 {
        return Ok(k.clone());
    }
    if !k.is_prime() {
        return Err(Error::UnsupportedField(
            "residue fields over extension bases are not supported".into(),
        ));
    }
    let raw: Vec<u64> = ring.q().coeffs().iter().map(|c| c.raw()).collect();
    Field::extension(k.characteristic(), &raw)
}

/// Gram matrix of `f_i'` on the stored representatives of `V_i`: write
/// `f(x, y) = π₁^{m−i} ρ` and reduce `ρ` modulo `π`.
pub fn induced_form(module: &ModuleM, herm: &HermitianForm, i: usize) -> Result<InducedForm> {
    let ring = module.ring();
    let (h, m) = (ring.h(), ring.m());
    if i == 0 || i > m {
        return Err(Error::BadParameters(format!("level {i} outside 1..={m}")));
    }
    let lfield = residue_field(ring)?;
    let k = ring.field();
    let reps = module.representatives(i);
    let divisor = ring.q().pow(m - i);
    let shift = Poly::monomial(k, k.one(), h * (m - i) / 2);
    let mut gram = Matrix::zeros(&lfield, reps.len(), reps.len());
    for (a, x) in reps.iter().enumerate() {
        for (b, y) in reps.iter().enumerate() {
            let mut value = herm.eval(x, y);
            if h >= 2 {
                value = ring.mul(&value, &shift);
            }
            let (quot, rem) = value.divmod(&divisor)?;
            if !rem.is_zero() {
                return Err(Error::ExtractionFailed);
            }
            let residue = quot.rem(ring.q());
            let raw: Vec<u64> = residue.coeffs().iter().map(|c| c.raw()).collect();
            gram.set(a, b, lfield.from_coeffs(&raw));
        }
    }
    let symmetry = if h >= 2 {
        Symmetry::HermitianSym
    } else {
        let sign = -(herm.epsilon() as i64) * if (m - i) % 2 == 0 { 1 } else { -1 };
        if sign == 1 {
            Symmetry::Symmetric
        } else {
            Symmetry::Skew
        }
    };
    let form = InducedForm {
        level: i,
        gram,
        symmetry,
    };
    check_induced(&form)?;
    Ok(form)
}

fn check_induced(form: &InducedForm) -> Result<()> {
    let g = &form.gram;
    let f = g.field();
    let n = g.rows();
    for a in 0..n {
        for b in 0..n {
            let expected = match form.symmetry {
                Symmetry::HermitianSym => f.involution(g.get(b, a))?,
                Symmetry::Symmetric => g.get(b, a),
                Symmetry::Skew => f.neg(g.get(b, a)),
            };
            if g.get(a, b) != expected {
                return Err(Error::InvariantViolated(format!(
                    "level {} form lacks its {:?} symmetry",
                    form.level, form.symmetry
                )));
            }
        }
    }
    if g.rank() != n {
        return Err(Error::Degenerate);
    }
    Ok(())
}

/// Everything derived from one self-reciprocal primary block.
#[derive(Clone, Debug)]
pub struct BlockAnalysis {
    pub module: ModuleM,
    pub l: LinearFormL,
    pub herm: HermitianForm,
    pub induced: Vec<InducedForm>,
}

/// Runs the whole chain on a block with minimal polynomial `q^m`.
pub fn analyze_block(u: &Matrix, form: &SkewForm, q: &Poly, m: usize) -> Result<BlockAnalysis> {
    let ring = ring_make(u.field(), q, m)?;
    let l = linear_form_construct(&ring)?;
    let module = module_filtration(u, form, &ring)?;
    let herm = HermitianForm::new(&module, &l)?;
    let induced = (1..=m)
        .map(|i| induced_form(&module, &herm, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(BlockAnalysis {
        module,
        l,
        herm,
        induced,
    })
}

/// Exhaustive structural audit of one analysed block: symmetry and
/// nondegeneracy of `l`, the Hermitian axioms on `trials` random triples,
/// compatibility `l(f(x, y)) = (x, y)`, nondegeneracy of every induced form
/// and the parity rule for linear blocks.
pub fn check_block_structure<R: Rng>(block: &BlockAnalysis, trials: usize, rng: &mut R) -> Result<()> {
    let module = &block.module;
    let ring = module.ring();
    let f = ring.field();
    let l = &block.l;
    let fail = |msg: String| Err(Error::InvariantViolated(msg));
    let eps = if l.epsilon() == -1 { f.neg(f.one()) } else { f.one() };
    if l.epsilon() != epsilon_for(ring.h(), ring.m()) {
        return fail("wrong sign ε".into());
    }
    for s in 0..ring.dim() {
        let e = ring.basis(s);
        if l.apply(ring, &ring.bar(&e)) != f.mul(eps, l.apply(ring, &e)) {
            return fail(format!("l(bar ξ^{s}) ≠ ε l(ξ^{s})"));
        }
    }
    let minimal = ring.pow(ring.pi(), ring.m() - 1);
    let nonzero_on_minimal = (0..ring.h())
        .any(|s| !l.apply(ring, &ring.mul(&minimal, &ring.basis(s))).is_zero());
    if !nonzero_on_minimal {
        return fail("l vanishes on the minimal ideal".into());
    }
    let n = module.dim();
    let random_vec = |rng: &mut R| -> Vector { (0..n).map(|_| f.random(rng)).collect() };
    let form = module.form();
    for _ in 0..trials {
        let (x, y, rho) = (random_vec(rng), random_vec(rng), ring.random(rng));
        let fxy = block.herm.eval(&x, &y);
        if herm_form(module, l, &x, &y)? != fxy {
            return fail("tabulated and direct Hermitian values differ".into());
        }
        if block.herm.eval(&module.act(&rho, &x), &y) != ring.mul(&rho, &fxy) {
            return fail("f(ρx, y) ≠ ρ f(x, y)".into());
        }
        if block.herm.eval(&x, &module.act(&rho, &y)) != ring.mul(&ring.bar(&rho), &fxy) {
            return fail("f(x, ρy) ≠ bar(ρ) f(x, y)".into());
        }
        let swapped = ring.bar(&block.herm.eval(&y, &x)).scale(f.neg(eps));
        if swapped != fxy {
            return fail("f(x, y) ≠ −ε bar f(y, x)".into());
        }
        if l.apply(ring, &fxy) != form.pair(&x, &y) {
            return fail("l(f(x, y)) ≠ (x, y)".into());
        }
    }
    // f nondegenerate ⇔ the K-form l∘f = ( , ) is nondegenerate on the block
    if !form.is_nondegenerate() {
        return fail("block form is degenerate".into());
    }
    for (idx, induced) in block.induced.iter().enumerate() {
        let i = idx + 1;
        check_induced(induced)?;
        if induced.gram.rows() != module.multiplicities()[idx] {
            return fail(format!("level {i} Gram has the wrong size"));
        }
        if ring.h() == 1 && i % 2 == 1 && induced.gram.rows() % 2 == 1 {
            return fail(format!("odd multiplicity at odd level {i}"));
        }
    }
    let total: usize = module
        .multiplicities()
        .iter()
        .enumerate()
        .map(|(i, &b)| (i + 1) * b)
        .sum();
    if ring.h() * total != n {
        return fail("block dimension ≠ h Σ i b_i".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::intersection;
    use crate::symform::random_symplectic;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    fn m(p: u64, rows: &[&[i64]]) -> Matrix {
        let rows: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        Matrix::from_i64_rows(&f(p), &rows).unwrap()
    }

    fn poly(p: u64, c: &[i64]) -> Poly {
        Poly::from_i64s(&f(p), c)
    }

    #[test]
    fn ring_examples() {
        let r = ring_make(&f(3), &poly(3, &[-1, 1]), 2).unwrap();
        assert_eq!(r.bar(&r.xi()), poly(3, &[2, -1]));
        let r = ring_make(&f(3), &poly(3, &[1, 0, 1]), 1).unwrap();
        assert_eq!(r.bar(&r.xi()), poly(3, &[0, -1]));
        let r = ring_make(&f(3), &poly(3, &[-1, 1]), 1).unwrap();
        assert_eq!(r.bar(&r.xi()), r.xi());
        assert_eq!(
            ring_make(&f(5), &poly(5, &[-2, 1]), 1).unwrap_err(),
            Error::NotSelfBar
        );
        assert_eq!(
            ring_make(&f(3), &poly(3, &[-1, 0, 1]), 1).unwrap_err(),
            Error::NotIrreducible
        );
    }

    #[test]
    fn linear_form_examples() {
        let r = ring_make(&f(3), &poly(3, &[-1, 1]), 2).unwrap();
        let l = linear_form_construct(&r).unwrap();
        assert_eq!(l.epsilon(), -1);
        assert_eq!(l.apply(&r, &r.one()), f(3).zero());
        assert_eq!(l.apply(&r, r.pi()), f(3).one());

        let r = ring_make(&f(3), &poly(3, &[-1, 1]), 1).unwrap();
        let l = linear_form_construct(&r).unwrap();
        assert_eq!(l.epsilon(), 1);
        assert_eq!(l.values(), &[f(3).one()]);

        let r = ring_make(&f(3), &poly(3, &[1, 0, 1]), 1).unwrap();
        let l = linear_form_construct(&r).unwrap();
        assert_eq!(l.epsilon(), -1);
        assert_eq!(l.values(), &[f(3).zero(), f(3).one()]);
    }

    #[test]
    fn filtration_examples() {
        let j = SkewForm::standard(&f(3), 2).unwrap();
        let r = ring_make(&f(3), &poly(3, &[-1, 1]), 2).unwrap();
        let module = module_filtration(&m(3, &[&[1, 1], &[0, 1]]), &j, &r).unwrap();
        assert_eq!(module.multiplicities(), &[0, 1]);

        let r = ring_make(&f(3), &poly(3, &[1, 1]), 1).unwrap();
        let module = module_filtration(&m(3, &[&[-1, 0], &[0, -1]]), &j, &r).unwrap();
        assert_eq!(module.multiplicities(), &[2]);

        let r = ring_make(&f(3), &poly(3, &[1, 0, 1]), 1).unwrap();
        let module = module_filtration(&m(3, &[&[0, -1], &[1, 0]]), &j, &r).unwrap();
        assert_eq!(module.multiplicities(), &[1]);

        let r = ring_make(&f(3), &poly(3, &[-1, 1]), 1).unwrap();
        assert_eq!(
            module_filtration(&m(3, &[&[1, 1], &[0, 1]]), &j, &r).unwrap_err(),
            Error::WrongMinimalPolynomial
        );
    }

    #[test]
    fn hermitian_examples() {
        let j = SkewForm::standard(&f(3), 2).unwrap();
        let e1 = vec![f(3).one(), f(3).zero()];
        let e2 = vec![f(3).zero(), f(3).one()];

        let r = ring_make(&f(3), &poly(3, &[-1, 1]), 1).unwrap();
        let l = linear_form_construct(&r).unwrap();
        let module = module_filtration(&Matrix::identity(&f(3), 2), &j, &r).unwrap();
        assert_eq!(herm_form(&module, &l, &e1, &e2).unwrap(), Poly::one(&f(3)));

        let r = ring_make(&f(3), &poly(3, &[1, 1]), 1).unwrap();
        let l = linear_form_construct(&r).unwrap();
        let module = module_filtration(&m(3, &[&[-1, 0], &[0, -1]]), &j, &r).unwrap();
        let a = herm_form(&module, &l, &e1, &e2).unwrap();
        let b = herm_form(&module, &l, &e2, &e1).unwrap();
        assert_eq!(a, b.neg());

        let r = ring_make(&f(3), &poly(3, &[-1, 1]), 2).unwrap();
        let l = linear_form_construct(&r).unwrap();
        let u = m(3, &[&[1, 1], &[0, 1]]);
        let module = module_filtration(&u, &j, &r).unwrap();
        let qu = evaluate_at(r.q(), &u).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let x: Vector = (0..2).map(|_| f(3).random(&mut rng)).collect();
            let y: Vector = (0..2).map(|_| f(3).random(&mut rng)).collect();
            let lhs = herm_form(&module, &l, &qu.mul_vec(&x), &y).unwrap();
            let rhs = r.mul(r.pi(), &herm_form(&module, &l, &x, &y).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn induced_examples() {
        let j = SkewForm::standard(&f(3), 2).unwrap();
        let x_minus_1 = poly(3, &[-1, 1]);
        let a = analyze_block(&m(3, &[&[1, 1], &[0, 1]]), &j, &x_minus_1, 2).unwrap();
        let b = analyze_block(&m(3, &[&[1, 2], &[0, 1]]), &j, &x_minus_1, 2).unwrap();
        let (ga, gb) = (&a.induced[1], &b.induced[1]);
        assert_eq!(ga.symmetry, Symmetry::Symmetric);
        assert_eq!((ga.gram.rows(), gb.gram.rows()), (1, 1));
        assert!(!ga.gram.get(0, 0).is_zero());
        assert_ne!(ga.discriminant().unwrap(), gb.discriminant().unwrap());

        let id = analyze_block(&Matrix::identity(&f(3), 2), &j, &x_minus_1, 1).unwrap();
        assert_eq!(id.induced[0].symmetry, Symmetry::Skew);
        assert_eq!(id.induced[0].gram.rank(), 2);

        let rot = analyze_block(&m(3, &[&[0, -1], &[1, 0]]), &j, &poly(3, &[1, 0, 1]), 1).unwrap();
        assert_eq!(rot.induced[0].symmetry, Symmetry::HermitianSym);
        assert_eq!(rot.induced[0].gram.field().size(), 9);
    }

    /// Restricts a random symplectic element to the primary block of `q`
    /// when that block is the whole space; otherwise `None`.
    fn whole_block(u: &Matrix) -> Option<(Poly, usize)> {
        let d = crate::linalg::minimal_polynomial(u).ok()?;
        let fac = d.factor().ok()?;
        if fac.len() != 1 {
            return None;
        }
        let (q, k) = fac[0].clone();
        (q.bar_monic().ok()? == q).then_some((q, k))
    }

    /// Unipotent or −unipotent elements built from a few transvections along
    /// a common direction family, giving nontrivial filtrations.
    fn unipotent(field: &Field, n: usize, seed: u64, sign: bool) -> Matrix {
        let form = SkewForm::standard(field, n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut u = Matrix::identity(field, n);
        let dirs: Vec<Vector> = (0..2)
            .map(|_| (0..n).map(|_| field.random(&mut rng)).collect())
            .collect();
        for _ in 0..rng.gen_range(1..6) {
            let mut a = vec![field.zero(); n];
            for d in &dirs {
                let c = field.random(&mut rng);
                for (x, &y) in a.iter_mut().zip(d) {
                    *x = field.add(*x, field.mul(c, y));
                }
            }
            if a.iter().all(|x| x.is_zero()) {
                continue;
            }
            u = form.transvection(&a, field.random_nonzero(&mut rng)).mul(&u);
        }
        if sign {
            u = u.scale(field.neg(field.one()));
        }
        u
    }

    #[test]
    fn n_i_cap_pi_m_matches_image() {
        let field = f(3);
        let form = SkewForm::standard(&field, 4).unwrap();
        for seed in 0..40 {
            let u = unipotent(&field, 4, seed, false);
            let Some((q, mexp)) = whole_block(&u) else { continue };
            let ring = ring_make(&field, &q, mexp).unwrap();
            let module = module_filtration(&u, &form, &ring).unwrap();
            let p = evaluate_at(&q, &u).unwrap();
            let image: Vec<Vector> = p.columns();
            for i in 1..mexp {
                let direct = intersection(&field, 4, module.kernel_basis(i), &image);
                let via: Vec<Vector> = module.kernel_basis(i + 1).iter().map(|v| p.mul_vec(v)).collect();
                let via = crate::linalg::independent_subset(&field, 4, &via);
                assert_eq!(direct.len(), via.len());
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn block_structure_holds(seed in any::<u64>(), which in 0usize..3, n in prop::sample::select(vec![2usize, 4]), sign in any::<bool>(), rand_elem in any::<bool>()) {
            let field = f([3, 5, 7][which]);
            let form = SkewForm::standard(&field, n).unwrap();
            let u = if rand_elem {
                random_symplectic(n, &field, seed).unwrap().into_matrix()
            } else {
                unipotent(&field, n, seed, sign)
            };
            if let Some((q, mexp)) = whole_block(&u) {
                let block = analyze_block(&u, &form, &q, mexp).unwrap();
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
                check_block_structure(&block, 100, &mut rng).unwrap();
            }
        }

        #[test]
        fn induced_invariants_do_not_depend_on_representatives(seed in any::<u64>(), which in 0usize..2, n in prop::sample::select(vec![2usize, 4, 6]), sign in any::<bool>()) {
            let field = f([3, 5][which]);
            let form = SkewForm::standard(&field, n).unwrap();
            let u = unipotent(&field, n, seed, sign);
            let Some((q, mexp)) = whole_block(&u) else { return Ok(()) };
            let base = analyze_block(&u, &form, &q, mexp).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let ring = base.module.ring().clone();
            let module = module_filtration_randomized(&u, &form, &ring, &mut rng).unwrap();
            let herm = HermitianForm::new(&module, &base.l).unwrap();
            for i in 1..=mexp {
                let other = induced_form(&module, &herm, i).unwrap();
                let mine = &base.induced[i - 1];
                prop_assert_eq!(other.gram.rows(), mine.gram.rows());
                prop_assert_eq!(other.discriminant().unwrap(), mine.discriminant().unwrap());
            }
        }
    }
}
