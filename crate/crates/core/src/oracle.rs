//! Brute-force ground truth for small symplectic groups. Deliberately shares
//! no arithmetic with the classifier: matrices are packed integers with
//! their own modular multiplication.

use std::collections::HashMap;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Matrix;

/// Default largest group order [`enumerate_group`] will build.
pub const DEFAULT_CAP: u64 = 10_000_000;

/// Every element of `Sp_n(F_p)` for the standard form `[[0, I], [−I, 0]]`.
pub struct GroupTable {
    n: usize,
    p: u64,
    bits: u32,
    elements: Vec<u64>,
    index: HashMap<u64, u32>,
    generators: Vec<(u64, u64)>,
}

impl GroupTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    fn decode(&self, code: u64) -> Vec<u64> {
        let mask = (1u64 << self.bits) - 1;
        (0..self.n * self.n)
            .map(|k| (code >> (k as u32 * self.bits)) & mask)
            .collect()
    }

    fn encode(&self, entries: &[u64]) -> u64 {
        entries
            .iter()
            .enumerate()
            .fold(0, |acc, (k, &e)| acc | (e << (k as u32 * self.bits)))
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        let (x, y) = (self.decode(a), self.decode(b));
        let n = self.n;
        let mut out = vec![0u64; n * n];
        for i in 0..n {
            for k in 0..n {
                let xik = x[i * n + k];
                if xik == 0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] = (out[i * n + j] + xik * y[k * n + j]) % self.p;
                }
            }
        }
        self.encode(&out)
    }

    /// The `idx`-th element as a [`Matrix`] over `F_p`.
    pub fn matrix(&self, idx: usize) -> Matrix {
        let field = Field::prime(self.p).expect("validated at construction");
        let data = self
            .decode(self.elements[idx])
            .into_iter()
            .map(|e| field.from_i64(e as i64))
            .collect();
        Matrix::new(&field, self.n, self.n, data).expect("square")
    }

    pub fn index_of(&self, u: &Matrix) -> Option<usize> {
        let f = u.field();
        if !f.is_prime() || f.characteristic() != self.p || u.rows() != self.n || u.cols() != self.n {
            return None;
        }
        let entries: Vec<u64> = u.entries().iter().map(|e| e.raw()).collect();
        self.index.get(&self.encode(&entries)).map(|&i| i as usize)
    }
}

/// `q^{t²} Π_{i=1}^{t} (q^{2i} − 1)`, computed independently of the
/// centralizer module.
fn expected_order(n: usize, p: u64) -> BigUint {
    let t = n / 2;
    let q = BigUint::from(p);
    let mut order = q.pow((t * t) as u32);
    for i in 1..=t {
        order *= q.pow(2 * i as u32) - BigUint::from(1u32);
    }
    order
}

/// Breadth-first closure of the transvections `x ↦ x ± (x, a) a` over all
/// nonzero 0/1 vectors `a`.
pub fn enumerate_group(n: usize, field: &Field, cap: u64) -> Result<GroupTable> {
    if !field.is_prime() {
        return Err(Error::UnsupportedField("the oracle works over prime fields".into()));
    }
    if n == 0 || n % 2 == 1 {
        return Err(Error::OddDimension(n));
    }
    let p = field.characteristic();
    let expected = expected_order(n, p);
    if expected > BigUint::from(cap) {
        return Err(Error::CapExceeded {
            order: expected.to_string(),
            cap,
        });
    }
    let bits = 64 - (p - 1).leading_zeros();
    if (n * n) as u32 * bits > 64 {
        return Err(Error::BadParameters("matrices too large to pack".into()));
    }
    let mut table = GroupTable {
        n,
        p,
        bits,
        elements: Vec::new(),
        index: HashMap::new(),
        generators: Vec::new(),
    };
    let t = n / 2;
    // J₀ a, with J₀ = [[0, I], [−I, 0]]
    let j_times = |a: &[u64]| -> Vec<u64> {
        (0..n)
            .map(|i| if i < t { a[t + i] } else { (p - a[i - t]) % p })
            .collect()
    };
    for mask in 1u64..1 << n {
        let a: Vec<u64> = (0..n).map(|i| (mask >> i) & 1).collect();
        let ja = j_times(&a);
        let mut gens = [0u64; 2];
        for (slot, lambda) in [1, p - 1].into_iter().enumerate() {
            let mut m = vec![0u64; n * n];
            for i in 0..n {
                m[i * n + i] = 1;
                for j in 0..n {
                    m[i * n + j] = (m[i * n + j] + lambda * a[i] % p * ja[j]) % p;
                }
            }
            gens[slot] = table.encode(&m);
        }
        table.generators.push((gens[0], gens[1]));
    }
    let mut id = vec![0u64; n * n];
    for i in 0..n {
        id[i * n + i] = 1;
    }
    let identity = table.encode(&id);
    table.elements.push(identity);
    table.index.insert(identity, 0);
    let mut head = 0;
    while head < table.elements.len() {
        let g = table.elements[head];
        head += 1;
        for k in 0..table.generators.len() {
            let s = table.generators[k].0;
            let h = table.mul(s, g);
            if !table.index.contains_key(&h) {
                if table.elements.len() as u64 >= cap {
                    return Err(Error::CapExceeded {
                        order: expected.to_string(),
                        cap,
                    });
                }
                table.index.insert(h, table.elements.len() as u32);
                table.elements.push(h);
            }
        }
    }
    if BigUint::from(table.elements.len()) != expected {
        return Err(Error::InvariantViolated(format!(
            "closure has {} elements, expected {expected}",
            table.elements.len()
        )));
    }
    Ok(table)
}

/// Conjugacy classes of a [`GroupTable`].
pub struct Orbits {
    /// Orbit number of every element.
    pub orbit_of: Vec<u32>,
    /// First element (in table order) of each orbit.
    pub representatives: Vec<usize>,
    pub sizes: Vec<usize>,
}

impl Orbits {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }
}

/// Orbits under conjugation, closing each representative under `x ↦ s x s⁻¹`
/// for the generators `s`.
pub fn brute_conjugacy(table: &GroupTable) -> Orbits {
    const NONE: u32 = u32::MAX;
    let mut orbit_of = vec![NONE; table.order()];
    let mut representatives = Vec::new();
    let mut sizes = Vec::new();
    let mut stack = Vec::new();
    for start in 0..table.order() {
        if orbit_of[start] != NONE {
            continue;
        }
        let id = representatives.len() as u32;
        representatives.push(start);
        orbit_of[start] = id;
        let mut size = 1;
        stack.push(start);
        while let Some(x) = stack.pop() {
            let code = table.elements[x];
            for &(s, s_inv) in &table.generators {
                let y = table.mul(table.mul(s, code), s_inv);
                let yi = table.index[&y] as usize;
                if orbit_of[yi] == NONE {
                    orbit_of[yi] = id;
                    size += 1;
                    stack.push(yi);
                }
            }
        }
        sizes.push(size);
    }
    Orbits {
        orbit_of,
        representatives,
        sizes,
    }
}

/// `|{w : wu = uw}|`, counted over the whole table.
pub fn brute_centralizer(table: &GroupTable, u: &Matrix) -> Result<BigUint> {
    let idx = table.index_of(u).ok_or(Error::NotInGroup)?;
    let code = table.elements[idx];
    let count = table
        .elements
        .iter()
        .filter(|&&w| table.mul(w, code) == table.mul(code, w))
        .count();
    Ok(BigUint::from(count))
}
