//! Orders of finite classical groups and of symplectic centralizers.

use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::classify::InvariantDescriptor;
use crate::error::{Error, Result};
use crate::field::{is_prime_u64, SquareClass};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassicalKind {
    Gl,
    Sp,
    /// Unitary group; the field size passed is `Q²`.
    U,
    OOdd,
    OEvenPlus,
    OEvenMinus,
}

fn prime_power_root(size: u64) -> Option<(u64, u32)> {
    if size < 2 {
        return None;
    }
    let p = (2..).take_while(|d| d * d <= size).find(|d| size % d == 0).unwrap_or(size);
    if !is_prime_u64(p) {
        return None;
    }
    let (mut rest, mut e) = (size, 0);
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

/// `Π_{i=1}^{t} (q^{2i} − 1)`.
fn sp_product(q: &BigUint, t: usize) -> BigUint {
    (1..=t).fold(big(1), |acc, i| acc * (q.pow(2 * i as u32) - 1u32))
}

/// Order of a finite classical group.
pub fn classical_order(kind: ClassicalKind, dim: usize, fieldsize: u64) -> Result<BigUint> {
    let Some((p, e)) = prime_power_root(fieldsize) else {
        return Err(Error::BadParameters(format!("{fieldsize} is not a prime power")));
    };
    if dim == 0 {
        return Ok(big(1));
    }
    let q = big(fieldsize);
    let d = dim as u32;
    Ok(match kind {
        ClassicalKind::Gl => (0..d).fold(big(1), |acc, i| acc * (q.pow(d) - q.pow(i))),
        ClassicalKind::Sp => {
            if dim % 2 == 1 {
                return Err(Error::BadParameters("symplectic groups need even dimension".into()));
            }
            let t = dim / 2;
            q.pow((t * t) as u32) * sp_product(&q, t)
        }
        ClassicalKind::U => {
            if e % 2 == 1 {
                return Err(Error::BadParameters(format!("{fieldsize} is not a square")));
            }
            let small = big(p).pow(e / 2);
            let mut acc = small.pow(d * (d - 1) / 2);
            for i in 1..=d {
                let qi = small.pow(i);
                acc *= if i % 2 == 0 { qi - 1u32 } else { qi + 1u32 };
            }
            acc
        }
        ClassicalKind::OOdd => {
            if dim % 2 == 0 {
                return Err(Error::BadParameters("odd orthogonal group of even dimension".into()));
            }
            let t = dim / 2;
            big(2) * q.pow((t * t) as u32) * sp_product(&q, t)
        }
        ClassicalKind::OEvenPlus | ClassicalKind::OEvenMinus => {
            if dim % 2 == 1 {
                return Err(Error::BadParameters("even orthogonal group of odd dimension".into()));
            }
            let t = dim / 2;
            let qt = q.pow(t as u32);
            let middle = if kind == ClassicalKind::OEvenPlus { qt - 1u32 } else { qt + 1u32 };
            big(2) * q.pow((t * (t - 1)) as u32) * middle * sp_product(&q, t - 1)
        }
    })
}

/// `|Sp_n(F_q)|`.
pub fn symplectic_group_order(n: usize, q: u64) -> Result<BigUint> {
    classical_order(ClassicalKind::Sp, n, q)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub name: String,
    pub order: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralizerReport {
    pub factors: Vec<Factor>,
    pub total: BigUint,
}

impl CentralizerReport {
    pub fn to_json(&self) -> Value {
        let factors: Vec<Value> = self
            .factors
            .iter()
            .map(|f| json!({"name": f.name, "order": f.order.to_string()}))
            .collect();
        json!({"factors": factors, "total": self.total.to_string()})
    }
}

struct Builder {
    q: u64,
    factors: Vec<Factor>,
}

impl Builder {
    fn group(&mut self, kind: ClassicalKind, dim: usize, fieldsize: u64) -> Result<()> {
        if dim == 0 {
            return Ok(());
        }
        let name = match kind {
            ClassicalKind::Gl => "GL",
            ClassicalKind::Sp => "Sp",
            ClassicalKind::U => "U",
            ClassicalKind::OOdd => "O",
            ClassicalKind::OEvenPlus => "O^+",
            ClassicalKind::OEvenMinus => "O^-",
        };
        self.factors.push(Factor {
            name: format!("{name}({dim},{fieldsize})"),
            order: classical_order(kind, dim, fieldsize)?,
        });
        Ok(())
    }

    fn q_power(&mut self, e: usize) {
        if e > 0 {
            self.factors.push(Factor {
                name: format!("q^{e}"),
                order: big(self.q).pow(e as u32),
            });
        }
    }
}

fn tails(m: &[usize]) -> Vec<usize> {
    // tails[i] = m_i + … + m_k (0-based), with a trailing zero
    let mut t = vec![0; m.len() + 1];
    for i in (0..m.len()).rev() {
        t[i] = t[i + 1] + m[i];
    }
    t
}

/// Order of the centralizer in `Sp_n(F_q)` of any element with the given
/// descriptor, as a product of classical groups and unipotent `q`-powers.
pub fn centralizer_order(desc: &InvariantDescriptor) -> Result<CentralizerReport> {
    let field = &desc.field;
    if !field.is_prime() {
        return Err(Error::UnsupportedField("centralizer orders need a prime field".into()));
    }
    let q = field.size();
    let mut b = Builder { q, factors: Vec::new() };
    for e in &desc.split {
        let g = e.pair.degree().unwrap_or(1);
        let big_q = q.checked_pow(g as u32).ok_or_else(|| Error::BadParameters("field too large".into()))?;
        for &ai in &e.a {
            b.group(ClassicalKind::Gl, ai, big_q)?;
        }
        let t = tails(&e.a);
        let exp: usize = (0..e.a.len().saturating_sub(1))
            .map(|i| e.a[i] * t[i + 1] + t[i] * t[i + 1])
            .sum();
        b.q_power(g * exp);
    }
    for e in &desc.selfbar {
        let h = e.q.degree().unwrap_or(2);
        let qh = q.checked_pow(h as u32).ok_or_else(|| Error::BadParameters("field too large".into()))?;
        for &bi in &e.b {
            b.group(ClassicalKind::U, bi, qh)?;
        }
        let t = tails(&e.b);
        let exp: usize = (0..e.b.len().saturating_sub(1))
            .map(|i| h * e.b[i] * t[i + 1] + (h / 2) * t[i + 1] * t[i + 1])
            .sum();
        b.q_power(exp);
    }
    for e in &desc.linear {
        for (idx, &bi) in e.b.iter().enumerate() {
            let level = idx + 1;
            if level % 2 == 1 {
                b.group(ClassicalKind::Sp, bi, q)?;
            } else if bi % 2 == 1 {
                b.group(ClassicalKind::OOdd, bi, q)?;
            } else if bi > 0 {
                let disc = *e
                    .disc
                    .get(&level)
                    .ok_or_else(|| Error::InvariantViolated(format!("missing square class at level {level}")))?;
                let minus_one = field.square_class(field.neg(field.one()))?;
                let reference = if (bi / 2) % 2 == 1 { minus_one } else { SquareClass::Square };
                let kind = if disc == reference {
                    ClassicalKind::OEvenPlus
                } else {
                    ClassicalKind::OEvenMinus
                };
                b.group(kind, bi, q)?;
            }
        }
        let t = tails(&e.b);
        let exp: usize = (0..e.b.len().saturating_sub(1))
            .map(|i| {
                // level i+1; (−1)^{level+1}
                let bt = t[i + 1];
                let twice = if (i + 1) % 2 == 1 { bt * (bt + 1) } else { bt * bt.saturating_sub(1) };
                e.b[i] * bt + twice / 2
            })
            .sum();
        b.q_power(exp);
    }
    let total = b.factors.iter().fold(big(1), |acc, f| acc * &f.order);
    Ok(CentralizerReport { factors: b.factors, total })
}
