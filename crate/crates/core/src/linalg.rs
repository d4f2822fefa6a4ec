//! Exact dense matrices over a [`Field`].

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::poly::Poly;

/// Column vector, stored as a plain sequence of entries.
pub type Vector = Vec<FieldElement>;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {:?}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|c| self.field.format_element(self.get(r, c)))
                .collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn new(field: &Field, rows: usize, cols: usize, data: Vec<FieldElement>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn scalar(field: &Field, n: usize, c: FieldElement) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, c);
        }
        m
    }

    /// Integer rows reduced into the prime subfield.
    pub fn from_i64_rows(field: &Field, rows: &[Vec<i64>]) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if r == 0 || c == 0 || rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged or empty rows".into()));
        }
        let data = rows.iter().flatten().map(|&v| field.from_i64(v)).collect();
        Matrix::new(field, r, c, data)
    }

    /// Matrix whose columns are the given vectors of length `rows`.
    pub fn from_columns(field: &Field, rows: usize, columns: &[Vector]) -> Matrix {
        let mut m = Matrix::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            debug_assert_eq!(col.len(), rows);
            for (i, &v) in col.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn diagonal(field: &Field, entries: &[FieldElement]) -> Matrix {
        let mut m = Matrix::zeros(field, entries.len(), entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m.set(i, i, e);
        }
        m
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn row(&self, r: usize) -> Vector {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    fn check_same(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.mul(other))
    }

    /// Product; panics on incompatible shapes.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix shapes");
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.get(k, j)));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[FieldElement]) -> Vector {
        assert_eq!(self.cols, v.len(), "matrix-vector shapes");
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(f.zero(), |acc, j| f.add(acc, f.mul(self.get(i, j), v[j])))
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert!(self.rows == other.rows && self.cols == other.cols);
        let f = &self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.add(&other.scale(self.field.neg(self.field.one())))
    }

    pub fn scale(&self, s: FieldElement) -> Matrix {
        let f = &self.field;
        Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.mul(a, s)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.is_zero())
    }

    pub fn pow(&self, mut e: usize) -> Matrix {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Matrix::identity(&self.field, self.rows);
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

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    m.data.swap(pr * m.cols + j, r * m.cols + j);
                }
            }
            let inv = f.inv(m.get(r, c)).expect("nonzero pivot");
            for j in c..m.cols {
                let v = f.mul(m.get(r, j), inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{x : A x = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vector> {
        let f = &self.field;
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r.get(row, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Rank together with a kernel basis (as column matrices).
    pub fn rank_kernel(&self) -> (usize, Vec<Matrix>) {
        let kernel = self.kernel();
        let rank = self.cols - kernel.len();
        let cols = kernel
            .into_iter()
            .map(|v| Matrix::from_columns(&self.field, self.cols, &[v]))
            .collect();
        (rank, cols)
    }

    /// Some solution of `A x = b`, with free variables set to zero.
    pub fn solve(&self, b: &[FieldElement]) -> Option<Vector> {
        assert_eq!(b.len(), self.rows);
        let f = &self.field;
        let mut aug = Matrix::zeros(f, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, b[i]);
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![f.zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(row, self.cols);
        }
        Some(x)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::NotSquare);
        }
        let n = self.rows;
        let f = &self.field;
        let mut aug = Matrix::zeros(f, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, f.one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::SingularSystem("matrix is not invertible".into()));
        }
        let mut inv = Matrix::zeros(f, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j));
            }
        }
        Ok(inv)
    }

    pub fn det(&self) -> Result<FieldElement> {
        if !self.is_square() {
            return Err(Error::NotSquare);
        }
        let f = &self.field;
        let mut m = self.clone();
        let n = self.rows;
        let mut det = f.one();
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Ok(f.zero());
            };
            if pr != c {
                for j in 0..n {
                    m.data.swap(pr * n + j, c * n + j);
                }
                det = f.neg(det);
            }
            let pivot = m.get(c, c);
            det = f.mul(det, pivot);
            let inv = f.inv(pivot)?;
            for i in c + 1..n {
                let factor = f.mul(m.get(i, c), inv);
                if factor.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(&self.field, rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m.set(i, j, self.get(r, c));
            }
        }
        m
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        let mut m = Matrix::zeros(&self.field, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j));
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m.set(self.rows + i, self.cols + j, other.get(i, j));
            }
        }
        m
    }

    /// Parses the matrix JSON object
    /// `{"p":…, "ext":"…"?, "rows":…, "cols":…, "entries":[…]}`.
    pub fn from_json(value: &Value) -> Result<Matrix> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Parse("matrix JSON must be an object".into()))?;
        let p = obj
            .get("p")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("missing integer field \"p\"".into()))?;
        let field = match obj.get("ext") {
            None | Some(Value::Null) => Field::prime(p)?,
            Some(Value::String(s)) => {
                let base = Field::prime(p)?;
                let modulus = Poly::parse(&base, s)?;
                let raw: Vec<u64> = modulus.coeffs().iter().map(|c| c.raw()).collect();
                Field::extension(p, &raw)?
            }
            Some(_) => return Err(Error::Parse("\"ext\" must be a polynomial string".into())),
        };
        let dim = |key: &str| -> Result<usize> {
            let v = obj
                .get(key)
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::Parse(format!("missing integer field {key:?}")))?;
            if v == 0 || v > 4096 {
                return Err(Error::Parse(format!("{key} out of range")));
            }
            Ok(v as usize)
        };
        let (rows, cols) = (dim("rows")?, dim("cols")?);
        let entries = obj
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing array field \"entries\"".into()))?;
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let data = entries
            .iter()
            .map(|e| parse_entry(&field, e))
            .collect::<Result<Vec<_>>>()?;
        Matrix::new(&field, rows, cols, data)
    }

    /// Parses a nested array `[[…],[…]]` of entries over `field`.
    pub fn from_nested_json(field: &Field, value: &Value) -> Result<Matrix> {
        let rows = value
            .as_array()
            .ok_or_else(|| Error::Parse("expected an array of rows".into()))?;
        let mut data = Vec::new();
        let mut cols = None;
        for row in rows {
            let row = row
                .as_array()
                .ok_or_else(|| Error::Parse("expected each row to be an array".into()))?;
            if *cols.get_or_insert(row.len()) != row.len() {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            for e in row {
                data.push(parse_entry(field, e)?);
            }
        }
        let cols = cols.unwrap_or(0);
        if rows.is_empty() || cols == 0 {
            return Err(Error::DimensionMismatch("empty matrix".into()));
        }
        Matrix::new(field, rows.len(), cols, data)
    }

    pub fn to_json(&self) -> Value {
        let f = &self.field;
        let entries: Vec<Value> = if f.is_prime() {
            self.data.iter().map(|e| json!(e.raw())).collect()
        } else {
            self.data.iter().map(|&e| json!(f.format_element(e))).collect()
        };
        let mut obj = json!({
            "p": f.characteristic(),
            "rows": self.rows,
            "cols": self.cols,
            "entries": entries,
        });
        if let Some(m) = f.modulus() {
            obj["ext"] = json!(m.to_text());
        }
        obj
    }

    /// Nested-array rendering, e.g. `[[1,1],[0,1]]`.
    pub fn to_nested_json(&self) -> Value {
        let f = &self.field;
        Value::Array(
            (0..self.rows)
                .map(|r| {
                    Value::Array(
                        (0..self.cols)
                            .map(|c| {
                                let e = self.get(r, c);
                                if f.is_prime() {
                                    json!(e.raw())
                                } else {
                                    json!(f.format_element(e))
                                }
                            })
                            .collect(),
                    )
                })
                .collect(),
        )
    }
}

fn parse_entry(field: &Field, e: &Value) -> Result<FieldElement> {
    match e {
        Value::Number(n) => {
            let v = n
                .as_i64()
                .ok_or_else(|| Error::Parse(format!("entry {n} is not a 64-bit integer")))?;
            Ok(field.from_i64(v))
        }
        Value::String(s) => field.parse_element(s),
        other => Err(Error::Parse(format!("bad matrix entry {other}"))),
    }
}

/// Incremental echelon basis that remembers how each stored row was formed
/// from the inserted vectors.
#[derive(Clone)]
pub struct Echelon {
    field: Field,
    dim: usize,
    rows: Vec<EchelonRow>,
    inserted: usize,
}

#[derive(Clone)]
struct EchelonRow {
    vec: Vector,
    pivot: usize,
    comb: Vector,
}

impl Echelon {
    pub fn new(field: &Field, dim: usize) -> Echelon {
        Echelon {
            field: field.clone(),
            dim,
            rows: Vec::new(),
            inserted: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Residual of `v` and the tracked combination `t` with
    /// `residual = v + Σ t_i inserted_i`.
    fn reduce(&self, v: &[FieldElement]) -> (Vector, Vector) {
        let f = &self.field;
        let mut r = v.to_vec();
        let mut t = vec![f.zero(); self.inserted];
        for row in &self.rows {
            let c = r[row.pivot];
            if c.is_zero() {
                continue;
            }
            for (x, &y) in r.iter_mut().zip(&row.vec).skip(row.pivot) {
                *x = f.sub(*x, f.mul(c, y));
            }
            for (x, &y) in t.iter_mut().zip(&row.comb) {
                *x = f.sub(*x, f.mul(c, y));
            }
        }
        (r, t)
    }

    pub fn contains(&self, v: &[FieldElement]) -> bool {
        self.reduce(v).0.iter().all(|x| x.is_zero())
    }

    /// Inserts `v`. Returns `Ok(())` when it extends the span, otherwise the
    /// coefficients `c` with `v = Σ c_i inserted_i` (over previously accepted
    /// vectors, in insertion order); the vector is then not recorded.
    pub fn insert(&mut self, v: &[FieldElement]) -> std::result::Result<(), Vector> {
        debug_assert_eq!(v.len(), self.dim);
        let f = self.field.clone();
        let (mut r, mut t) = self.reduce(v);
        match r.iter().position(|x| !x.is_zero()) {
            None => Err(t.iter().map(|&x| f.neg(x)).collect()),
            Some(pivot) => {
                let inv = f.inv(r[pivot]).expect("nonzero");
                for x in r.iter_mut() {
                    *x = f.mul(*x, inv);
                }
                t.push(f.one());
                for x in t.iter_mut() {
                    *x = f.mul(*x, inv);
                }
                for row in &mut self.rows {
                    row.comb.push(f.zero());
                }
                self.inserted += 1;
                self.rows.push(EchelonRow { vec: r, pivot, comb: t });
                Ok(())
            }
        }
    }

    /// Coordinates of `v` in terms of the accepted vectors, if it lies in
    /// their span.
    pub fn coordinates(&self, v: &[FieldElement]) -> Option<Vector> {
        let f = &self.field;
        let (r, t) = self.reduce(v);
        if r.iter().all(|x| x.is_zero()) {
            Some(t.iter().map(|&x| f.neg(x)).collect())
        } else {
            None
        }
    }
}

/// Linearly independent subset of `vectors`, keeping the first of each
/// dependent run.
pub fn independent_subset(field: &Field, dim: usize, vectors: &[Vector]) -> Vec<Vector> {
    let mut ech = Echelon::new(field, dim);
    vectors
        .iter()
        .filter(|v| ech.insert(v).is_ok())
        .cloned()
        .collect()
}

/// Basis of the intersection of two subspaces given by spanning sets.
pub fn intersection(field: &Field, dim: usize, a: &[Vector], b: &[Vector]) -> Vec<Vector> {
    let a = independent_subset(field, dim, a);
    let b = independent_subset(field, dim, b);
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    // [A | -B] (x, y)^T = 0  ⇒  A x lies in both
    let mut m = Matrix::zeros(field, dim, a.len() + b.len());
    for (j, v) in a.iter().enumerate() {
        for i in 0..dim {
            m.set(i, j, v[i]);
        }
    }
    for (j, v) in b.iter().enumerate() {
        for i in 0..dim {
            m.set(i, a.len() + j, field.neg(v[i]));
        }
    }
    let vecs: Vec<Vector> = m
        .kernel()
        .iter()
        .map(|k| {
            let mut out = vec![field.zero(); dim];
            for (j, v) in a.iter().enumerate() {
                for i in 0..dim {
                    out[i] = field.add(out[i], field.mul(k[j], v[i]));
                }
            }
            out
        })
        .collect();
    independent_subset(field, dim, &vecs)
}

/// Matrix of `u` restricted to the invariant subspace with the given basis:
/// `u·B = B·U`.
pub fn restrict(u: &Matrix, basis: &[Vector]) -> Result<Matrix> {
    let f = u.field();
    let mut ech = Echelon::new(f, u.rows());
    for b in basis {
        if ech.insert(b).is_err() {
            return Err(Error::DimensionMismatch("restriction basis is dependent".into()));
        }
    }
    let k = basis.len();
    let mut out = Matrix::zeros(f, k, k);
    for (j, b) in basis.iter().enumerate() {
        let image = u.mul_vec(b);
        let coords = ech
            .coordinates(&image)
            .ok_or_else(|| Error::DimensionMismatch("subspace is not invariant".into()))?;
        for (i, &c) in coords.iter().enumerate() {
            out.set(i, j, c);
        }
    }
    Ok(out)
}

/// `f(u) = Σ c_ν u^ν`, evaluated by Horner's rule.
pub fn evaluate_at(f: &Poly, u: &Matrix) -> Result<Matrix> {
    if !u.is_square() {
        return Err(Error::NotSquare);
    }
    if f.field() != u.field() {
        return Err(Error::FieldMismatch);
    }
    let field = u.field();
    let n = u.rows();
    let mut acc = Matrix::zeros(field, n, n);
    for &c in f.coeffs().iter().rev() {
        acc = acc.mul(u);
        for i in 0..n {
            let v = field.add(acc.get(i, i), c);
            acc.set(i, i, v);
        }
    }
    Ok(acc)
}

/// Minimal polynomial as the lcm of the annihilators of the standard basis
/// vectors, each read off its Krylov sequence. Basis vectors already inside
/// the accumulated Krylov span are skipped.
pub fn minimal_polynomial(u: &Matrix) -> Result<Poly> {
    if !u.is_square() {
        return Err(Error::NotSquare);
    }
    let f = u.field();
    let n = u.rows();
    let mut span = Echelon::new(f, n);
    let mut result = Poly::one(f);
    for j in 0..n {
        let mut e = vec![f.zero(); n];
        e[j] = f.one();
        if span.contains(&e) {
            continue;
        }
        let mut krylov = Echelon::new(f, n);
        let mut v = e;
        loop {
            match krylov.insert(&v) {
                Ok(()) => {
                    let _ = span.insert(&v);
                    v = u.mul_vec(&v);
                }
                Err(c) => {
                    // v = u^k e = Σ c_i u^i e  ⇒  X^k − Σ c_i X^i annihilates e
                    let mut coeffs: Vec<FieldElement> = c.iter().map(|&x| f.neg(x)).collect();
                    coeffs.push(f.one());
                    result = result.lcm(&Poly::new(f, coeffs))?;
                    break;
                }
            }
        }
    }
    Ok(result)
}

/// Multiplicities `a_1..a_k` of the cyclic summands `K[X]/(p^i)` in the
/// `p`-primary part of `u`, from kernel dimensions of powers of `p(u)`.
pub fn gl_multiplicities(u: &Matrix, p: &Poly, k: usize) -> Result<Vec<usize>> {
    let g = p
        .degree()
        .filter(|&d| d > 0)
        .ok_or_else(|| Error::NonIntegralMultiplicity("constant polynomial".into()))?;
    if k == 0 {
        return Err(Error::NonIntegralMultiplicity("exponent must be positive".into()));
    }
    let pu = evaluate_at(p, u)?;
    let n = u.rows();
    let mut dims = vec![0usize];
    let mut power = Matrix::identity(u.field(), n);
    for _ in 1..=k + 1 {
        power = power.mul(&pu);
        dims.push(n - power.rank());
    }
    if dims[k + 1] != dims[k] {
        return Err(Error::NonIntegralMultiplicity(format!(
            "p^{k} is not the exact power of p in the minimal polynomial"
        )));
    }
    let mut a = Vec::with_capacity(k);
    for i in 1..=k {
        let num = 2 * dims[i] as i64 - dims[i - 1] as i64 - dims[i + 1] as i64;
        if num < 0 || num % g as i64 != 0 {
            return Err(Error::NonIntegralMultiplicity(format!(
                "level {i}: {num} is not a nonnegative multiple of {g}"
            )));
        }
        a.push((num / g as i64) as usize);
    }
    if a[k - 1] == 0 {
        return Err(Error::NonIntegralMultiplicity("top multiplicity is zero".into()));
    }
    Ok(a)
}

/// Conjugacy invariant in the general linear group: for each irreducible
/// factor `p^k` of the minimal polynomial, the multiplicities `a_1..a_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlInvariant {
    pub parts: Vec<(Poly, usize, Vec<usize>)>,
}

impl GlInvariant {
    pub fn of(u: &Matrix) -> Result<GlInvariant> {
        let d = minimal_polynomial(u)?;
        let mut parts = Vec::new();
        for (p, k) in d.factor()? {
            let a = gl_multiplicities(u, &p, k)?;
            parts.push((p, k, a));
        }
        Ok(GlInvariant { parts })
    }

    /// `Σ_p deg(p)·Σ_i i·a_i`, which equals the dimension.
    pub fn dimension(&self) -> usize {
        self.parts
            .iter()
            .map(|(p, _, a)| {
                p.degree().unwrap_or(0) * a.iter().enumerate().map(|(i, &ai)| (i + 1) * ai).sum::<usize>()
            })
            .sum()
    }
}
