//! Alternating forms and the groups preserving them.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::linalg::{Matrix, Vector};

/// Gram matrix of an alternating bilinear form `(x, y) = xᵀ J y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewForm {
    gram: Matrix,
}

impl SkewForm {
    /// Validates skew-symmetry and a zero diagonal. Degenerate forms are
    /// accepted here; operations that need nondegeneracy check it.
    pub fn new(gram: Matrix) -> Result<SkewForm> {
        if !gram.is_square() {
            return Err(Error::NotSquare);
        }
        let f = gram.field();
        let n = gram.rows();
        for i in 0..n {
            if !gram.get(i, i).is_zero() {
                return Err(Error::NotSkew);
            }
            for j in i + 1..n {
                if gram.get(i, j) != f.neg(gram.get(j, i)) {
                    return Err(Error::NotSkew);
                }
            }
        }
        Ok(SkewForm { gram })
    }

    /// `J₀ = [[0, I], [−I, 0]]`.
    pub fn standard(field: &Field, n: usize) -> Result<SkewForm> {
        if n == 0 || n % 2 == 1 {
            return Err(Error::OddDimension(n));
        }
        let t = n / 2;
        let mut j = Matrix::zeros(field, n, n);
        for i in 0..t {
            j.set(i, t + i, field.one());
            j.set(t + i, i, field.neg(field.one()));
        }
        Ok(SkewForm { gram: j })
    }

    /// Matrix JSON with an optional `"skew": true` marker.
    pub fn from_json(value: &Value) -> Result<SkewForm> {
        match value.get("skew") {
            None | Some(Value::Bool(true)) => {}
            Some(_) => return Err(Error::Parse("\"skew\" must be true when present".into())),
        }
        SkewForm::new(Matrix::from_json(value)?)
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.gram.to_json();
        v["skew"] = Value::Bool(true);
        v
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn field(&self) -> &Field {
        self.gram.field()
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.gram.rank() == self.dim()
    }

    pub fn is_standard(&self) -> bool {
        SkewForm::standard(self.field(), self.dim()).is_ok_and(|s| s == *self)
    }

    pub fn pair(&self, x: &[FieldElement], y: &[FieldElement]) -> FieldElement {
        let f = self.field();
        let jy = self.gram.mul_vec(y);
        x.iter()
            .zip(&jy)
            .fold(f.zero(), |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
    }

    /// Matrix of the transvection `x ↦ x + λ (x, a) a`, i.e. `I + λ a (J a)ᵀ`.
    pub fn transvection(&self, a: &[FieldElement], lambda: FieldElement) -> Matrix {
        let f = self.field();
        let n = self.dim();
        let ja = self.gram.mul_vec(a);
        let mut t = Matrix::identity(f, n);
        for i in 0..n {
            let la = f.mul(lambda, a[i]);
            for j in 0..n {
                let v = f.add(t.get(i, j), f.mul(la, ja[j]));
                t.set(i, j, v);
            }
        }
        t
    }
}

/// `uᵀ J u = J`.
pub fn is_symplectic(u: &Matrix, form: &SkewForm) -> Result<bool> {
    let j = form.gram();
    if u.field() != j.field() {
        return Err(Error::FieldMismatch);
    }
    if !u.is_square() || u.rows() != j.rows() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix against a form of dimension {}",
            u.rows(),
            u.cols(),
            j.rows()
        )));
    }
    Ok(u.transpose().mul(j).mul(u) == *j)
}

/// Change of basis `T` with `Tᵀ J T = J₀`, built by completing hyperbolic
/// pairs `(e_i, f_i)` with `(e_i, f_i) = 1`; the columns of `T` are
/// `e_1..e_t, f_1..f_t`.
pub fn symplectic_basis(form: &SkewForm) -> Result<Matrix> {
    let n = form.dim();
    if n % 2 == 1 {
        return Err(Error::OddDimension(n));
    }
    if !form.is_nondegenerate() {
        return Err(Error::Degenerate);
    }
    let field = form.field();
    let mut pool: Vec<Vector> = (0..n)
        .map(|i| {
            let mut v = vec![field.zero(); n];
            v[i] = field.one();
            v
        })
        .collect();
    let (mut es, mut fs) = (Vec::new(), Vec::new());
    while let Some(first) = pool.iter().position(|v| v.iter().any(|x| !x.is_zero())) {
        let e = pool.remove(first);
        let Some(k) = pool.iter().position(|w| !form.pair(&e, w).is_zero()) else {
            return Err(Error::Degenerate);
        };
        let w = pool.remove(k);
        let c = form.pair(&e, &w);
        let (e, f) = if c == field.neg(field.one()) {
            (w, e)
        } else {
            let inv = field.inv(c)?;
            let scaled = w.iter().map(|&x| field.mul(x, inv)).collect();
            (e, scaled)
        };
        // project the rest onto the orthogonal complement of ⟨e, f⟩
        for v in pool.iter_mut() {
            let ve = form.pair(v, &e);
            let vf = form.pair(v, &f);
            for i in 0..n {
                v[i] = field.add(field.sub(v[i], field.mul(vf, e[i])), field.mul(ve, f[i]));
            }
        }
        es.push(e);
        fs.push(f);
    }
    if es.len() * 2 != n {
        return Err(Error::Degenerate);
    }
    es.extend(fs);
    Ok(Matrix::from_columns(field, n, &es))
}

/// A matrix together with the form it preserves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticElement {
    matrix: Matrix,
    form: SkewForm,
}

impl SymplecticElement {
    pub fn new(matrix: Matrix, form: SkewForm) -> Result<SymplecticElement> {
        if !is_symplectic(&matrix, &form)? {
            return Err(Error::NotSymplectic);
        }
        Ok(SymplecticElement { matrix, form })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn form(&self) -> &SkewForm {
        &self.form
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    pub fn mul(&self, other: &SymplecticElement) -> Result<SymplecticElement> {
        if self.form != other.form {
            return Err(Error::FormMismatch);
        }
        Ok(SymplecticElement {
            matrix: self.matrix.mul(&other.matrix),
            form: self.form.clone(),
        })
    }

    /// `u⁻¹ = J⁻¹ uᵀ J`.
    pub fn inverse(&self) -> SymplecticElement {
        let j = self.form.gram();
        let jinv = j.inverse().expect("symplectic element on a nondegenerate form");
        SymplecticElement {
            matrix: jinv.mul(&self.matrix.transpose()).mul(j),
            form: self.form.clone(),
        }
    }
}

/// Seeded random element of `Sp_n` for `J₀`: a product of `4n² + 8`
/// transvections with random nonzero direction and coefficient.
pub fn random_symplectic(n: usize, field: &Field, seed: u64) -> Result<SymplecticElement> {
    let form = SkewForm::standard(field, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u = Matrix::identity(field, n);
    for _ in 0..4 * n * n + 8 {
        let a = loop {
            let a: Vector = (0..n).map(|_| field.random(&mut rng)).collect();
            if a.iter().any(|x| !x.is_zero()) {
                break a;
            }
        };
        let lambda = field.random_nonzero(&mut rng);
        u = form.transvection(&a, lambda).mul(&u);
    }
    Ok(SymplecticElement { matrix: u, form })
}
