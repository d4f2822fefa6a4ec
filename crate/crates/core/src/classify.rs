//! Conjugacy-class invariants of symplectic elements: primary
//! decomposition, per-block invariants, descriptors, canonical labels and
//! exhaustive enumeration of all classes of `Sp_n(F_p)`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::Rng;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::field::{Field, SquareClass};
use crate::linalg::{evaluate_at, gl_multiplicities, restrict, GlInvariant, Matrix, Vector};
use crate::poly::{FactorKind, Poly};
use crate::ringmod::{analyze_block, check_block_structure, BlockAnalysis};
use crate::symform::{symplectic_basis, SkewForm, SymplecticElement};

/// Default largest dimension accepted by [`enumerate_classes`].
pub const ENUMERATION_BOUND: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BlockKind {
    SplitPair,
    SelfBar,
    /// Governed by `X − 1`.
    LinMinus,
    /// Governed by `X + 1`.
    LinPlus,
}

/// A `u`-invariant, non-isotropic summand of the space.
#[derive(Clone, Debug)]
pub struct PrimaryBlock {
    pub kind: BlockKind,
    /// Basis of the block, in ambient coordinates.
    pub basis: Vec<Vector>,
    /// `u` restricted to the block, in the coordinates of `basis`.
    pub u: Matrix,
    /// The ambient form restricted to the block.
    pub form: SkewForm,
    /// Canonical pair representative for split blocks; `q` otherwise.
    pub poly: Poly,
    pub exponent: usize,
}

/// Splits the space into the kernels of `(p·p̄)^k(u)` (one per pair of
/// reciprocal factors) and `q^m(u)` (one per self-reciprocal factor).
pub fn primary_decompose(u: &SymplecticElement) -> Result<Vec<PrimaryBlock>> {
    let m = u.matrix();
    let form = u.form();
    let field = m.field();
    let n = m.rows();
    let d = crate::linalg::minimal_polynomial(m)?;
    let factors = d.factor()?;
    let mut blocks = Vec::new();
    for (p, k) in &factors {
        let kind = p.classify_irreducible()?;
        let (block_kind, governing) = match &kind {
            FactorKind::SplitPair { partner } => {
                if p.canonical_pair_rep()? != *p {
                    continue;
                }
                if !factors.iter().any(|(o, ko)| o == partner && ko == k) {
                    return Err(Error::NotSymplectic);
                }
                (BlockKind::SplitPair, p.mul(partner))
            }
            FactorKind::SelfBar => (BlockKind::SelfBar, p.clone()),
            FactorKind::LinMinus => (BlockKind::LinMinus, p.clone()),
            FactorKind::LinPlus => (BlockKind::LinPlus, p.clone()),
        };
        let basis = evaluate_at(&governing.pow(*k), m)?.kernel();
        let restricted = restrict(m, &basis)?;
        let b = Matrix::from_columns(field, n, &basis);
        let gram = SkewForm::new(b.transpose().mul(form.gram()).mul(&b))?;
        if !gram.is_nondegenerate() {
            return Err(Error::InvariantViolated("primary block is isotropic".into()));
        }
        blocks.push(PrimaryBlock {
            kind: block_kind,
            basis,
            u: restricted,
            form: gram,
            poly: p.clone(),
            exponent: *k,
        });
    }
    let total: usize = blocks.iter().map(|b| b.basis.len()).sum();
    if total != n {
        return Err(Error::InvariantViolated("blocks do not fill the space".into()));
    }
    for (i, a) in blocks.iter().enumerate() {
        for b in &blocks[i + 1..] {
            for x in &a.basis {
                for y in &b.basis {
                    if !form.pair(x, y).is_zero() {
                        return Err(Error::InvariantViolated("distinct blocks are not orthogonal".into()));
                    }
                }
            }
        }
    }
    Ok(blocks)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitEntry {
    /// Canonical member of `{p, p̄}`.
    pub pair: Poly,
    /// Multiplicities `a_1..a_k` on the `p`-primary half.
    pub a: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfBarEntry {
    pub q: Poly,
    pub b: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    /// `X − 1`.
    Minus,
    /// `X + 1`.
    Plus,
}

impl Sign {
    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Minus => "-",
            Sign::Plus => "+",
        }
    }

    pub fn poly(self, field: &Field) -> Poly {
        match self {
            Sign::Minus => Poly::from_i64s(field, &[-1, 1]),
            Sign::Plus => Poly::from_i64s(field, &[1, 1]),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearEntry {
    pub sign: Sign,
    pub b: Vec<usize>,
    /// Determinant square class of the level-`j` form, for each even `j`
    /// with `b_j > 0`.
    pub disc: BTreeMap<usize, SquareClass>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Case2Entry {
    SelfBar(SelfBarEntry),
    Linear(LinearEntry),
}

/// Multiplicities of a split block, read off the `p`-primary half `E¹`.
pub fn case1_invariants(block: &PrimaryBlock) -> Result<SplitEntry> {
    if block.kind != BlockKind::SplitPair {
        return Err(Error::BadParameters("not a split-pair block".into()));
    }
    let half = evaluate_at(&block.poly.pow(block.exponent), &block.u)?.kernel();
    if 2 * half.len() != block.u.rows() {
        return Err(Error::UnequalHalves);
    }
    let on_half = restrict(&block.u, &half)?;
    let a = gl_multiplicities(&on_half, &block.poly, block.exponent)?;
    Ok(SplitEntry {
        pair: block.poly.clone(),
        a,
    })
}

fn case2_from_analysis(block: &PrimaryBlock, analysis: &BlockAnalysis) -> Result<Case2Entry> {
    let b = analysis.module.multiplicities().to_vec();
    let sign = match block.kind {
        BlockKind::SelfBar => {
            return Ok(Case2Entry::SelfBar(SelfBarEntry {
                q: block.poly.clone(),
                b,
            }))
        }
        BlockKind::LinMinus => Sign::Minus,
        BlockKind::LinPlus => Sign::Plus,
        BlockKind::SplitPair => return Err(Error::BadParameters("split-pair block".into())),
    };
    let mut disc = BTreeMap::new();
    for induced in &analysis.induced {
        if let Some(class) = induced.discriminant()? {
            disc.insert(induced.level, class);
        }
    }
    Ok(Case2Entry::Linear(LinearEntry { sign, b, disc }))
}

/// Multiplicities (and, for `X ± 1`, square-class labels) of a
/// self-reciprocal block.
pub fn case2_invariants(block: &PrimaryBlock) -> Result<Case2Entry> {
    if block.kind == BlockKind::SplitPair {
        return Err(Error::BadParameters("split-pair block".into()));
    }
    let analysis = analyze_block(&block.u, &block.form, &block.poly, block.exponent)?;
    case2_from_analysis(block, &analysis)
}

/// Complete conjugacy invariant of an element of `Sp_n(F_p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantDescriptor {
    pub field: Field,
    pub n: usize,
    pub split: Vec<SplitEntry>,
    pub selfbar: Vec<SelfBarEntry>,
    pub linear: Vec<LinearEntry>,
}

/// Byte-exact serialization of a descriptor; equal labels ⇔ equal classes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalLabel(String);

impl CanonicalLabel {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for CanonicalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn weighted(m: &[usize]) -> usize {
    m.iter().enumerate().map(|(i, &c)| (i + 1) * c).sum()
}

impl InvariantDescriptor {
    fn sort(&mut self) {
        self.split.sort_by_key(|e| e.pair.to_text());
        self.selfbar.sort_by_key(|e| e.q.to_text());
        self.linear.sort_by_key(|e| e.sign);
    }

    /// Checks the dimension equation, parity and label placement.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvariantViolated(msg));
        let mut dim = 0;
        for e in &self.split {
            let g = e.pair.degree().unwrap_or(0);
            if e.a.last().copied().unwrap_or(0) == 0 {
                return bad(format!("split entry {} has no top multiplicity", e.pair.to_text()));
            }
            dim += 2 * g * weighted(&e.a);
        }
        for e in &self.selfbar {
            if e.b.last().copied().unwrap_or(0) == 0 {
                return bad(format!("self-reciprocal entry {} has no top multiplicity", e.q.to_text()));
            }
            dim += e.q.degree().unwrap_or(0) * weighted(&e.b);
        }
        let mut signs = BTreeSet::new();
        for e in &self.linear {
            if !signs.insert(e.sign) {
                return bad("repeated linear entry".into());
            }
            if e.b.last().copied().unwrap_or(0) == 0 {
                return bad("linear entry has no top multiplicity".into());
            }
            for (idx, &bj) in e.b.iter().enumerate() {
                let j = idx + 1;
                if j % 2 == 1 && bj % 2 == 1 {
                    return bad(format!("odd multiplicity b_{j} = {bj}"));
                }
                if (j % 2 == 0 && bj > 0) != e.disc.contains_key(&j) {
                    return bad(format!("square-class label misplaced at level {j}"));
                }
            }
            if e.disc.keys().any(|&j| j == 0 || j > e.b.len()) {
                return bad("square-class label outside the levels".into());
            }
            dim += weighted(&e.b);
        }
        if dim != self.n {
            return bad(format!("dimension equation gives {dim}, expected {}", self.n));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let split: Vec<Value> = self
            .split
            .iter()
            .map(|e| json!({"pair": e.pair.to_text(), "a": e.a}))
            .collect();
        let selfbar: Vec<Value> = self
            .selfbar
            .iter()
            .map(|e| json!({"q": e.q.to_text(), "b": e.b}))
            .collect();
        let linear: Vec<Value> = self
            .linear
            .iter()
            .map(|e| {
                let disc: Map<String, Value> = e
                    .disc
                    .iter()
                    .map(|(j, c)| (j.to_string(), json!(c.short())))
                    .collect();
                json!({"sign": e.sign.symbol(), "b": e.b, "disc": disc})
            })
            .collect();
        json!({
            "n": self.n,
            "p": self.field.characteristic(),
            "split": split,
            "selfbar": selfbar,
            "linear": linear,
        })
    }

    pub fn label(&self) -> CanonicalLabel {
        // serde_json maps keep their keys sorted
        CanonicalLabel(self.to_json().to_string())
    }

    /// Parses and validates descriptor JSON.
    pub fn from_json(value: &Value) -> Result<InvariantDescriptor> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Parse("descriptor must be an object".into()))?;
        let p = obj
            .get("p")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("missing integer field \"p\"".into()))?;
        let field = Field::prime(p)?;
        let n = obj
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("missing integer field \"n\"".into()))? as usize;
        let list = |key: &str| -> Result<Vec<Value>> {
            match obj.get(key) {
                None => Ok(Vec::new()),
                Some(Value::Array(a)) => Ok(a.clone()),
                Some(_) => Err(Error::Parse(format!("{key:?} must be an array"))),
            }
        };
        let counts = |v: &Value, key: &str| -> Result<Vec<usize>> {
            let arr = v
                .get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse(format!("missing array {key:?}")))?;
            if arr.len() > 64 {
                return Err(Error::Parse("multiplicity list too long".into()));
            }
            arr.iter()
                .map(|x| {
                    x.as_u64()
                        .filter(|&c| c <= 1 << 20)
                        .map(|c| c as usize)
                        .ok_or_else(|| Error::Parse("multiplicities must be small integers".into()))
                })
                .collect()
        };
        let text = |v: &Value, key: &str| -> Result<Poly> {
            let s = v
                .get(key)
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Parse(format!("missing string {key:?}")))?;
            Poly::parse(&field, s)
        };
        let mut split = Vec::new();
        for e in list("split")? {
            let pair = text(&e, "pair")?;
            match pair.classify_irreducible()? {
                FactorKind::SplitPair { .. } if pair.canonical_pair_rep()? == pair => {}
                _ => {
                    return Err(Error::InvariantViolated(format!(
                        "{} is not a canonical split-pair representative",
                        pair.to_text()
                    )))
                }
            }
            split.push(SplitEntry {
                pair,
                a: counts(&e, "a")?,
            });
        }
        let mut selfbar = Vec::new();
        for e in list("selfbar")? {
            let q = text(&e, "q")?;
            if q.classify_irreducible()? != FactorKind::SelfBar {
                return Err(Error::NotSelfBar);
            }
            selfbar.push(SelfBarEntry {
                q,
                b: counts(&e, "b")?,
            });
        }
        let mut linear = Vec::new();
        for e in list("linear")? {
            let sign = match e.get("sign").and_then(Value::as_str) {
                Some("-") => Sign::Minus,
                Some("+") => Sign::Plus,
                _ => return Err(Error::Parse("sign must be \"+\" or \"-\"".into())),
            };
            let mut disc = BTreeMap::new();
            if let Some(d) = e.get("disc") {
                let d = d
                    .as_object()
                    .ok_or_else(|| Error::Parse("\"disc\" must be an object".into()))?;
                for (k, v) in d {
                    let j: usize = k
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad level {k:?}")))?;
                    let c = v
                        .as_str()
                        .ok_or_else(|| Error::Parse("square class must be a string".into()))?;
                    disc.insert(j, SquareClass::from_short(c)?);
                }
            }
            linear.push(LinearEntry {
                sign,
                b: counts(&e, "b")?,
                disc,
            });
        }
        let mut desc = InvariantDescriptor {
            field,
            n,
            split,
            selfbar,
            linear,
        };
        let dedup: BTreeSet<String> = desc
            .split
            .iter()
            .map(|e| e.pair.to_text())
            .chain(desc.selfbar.iter().map(|e| e.q.to_text()))
            .collect();
        if dedup.len() != desc.split.len() + desc.selfbar.len() {
            return Err(Error::InvariantViolated("repeated polynomial entry".into()));
        }
        desc.sort();
        desc.validate()?;
        Ok(desc)
    }

    /// The general-linear invariant implied by the descriptor.
    pub fn gl_invariant(&self) -> Result<GlInvariant> {
        let mut parts = Vec::new();
        for e in &self.split {
            parts.push((e.pair.clone(), e.a.len(), e.a.clone()));
            parts.push((e.pair.bar_monic()?, e.a.len(), e.a.clone()));
        }
        for e in &self.selfbar {
            parts.push((e.q.clone(), e.b.len(), e.b.clone()));
        }
        for e in &self.linear {
            parts.push((e.sign.poly(&self.field), e.b.len(), e.b.clone()));
        }
        parts.sort_by(|a, b| match a.0.degree().cmp(&b.0.degree()) {
            Ordering::Equal => a.0.lex_cmp(&b.0),
            o => o,
        });
        Ok(GlInvariant { parts })
    }
}

fn to_standard(u: &SymplecticElement) -> Result<SymplecticElement> {
    let field = u.form().field();
    if !field.is_prime() {
        return Err(Error::UnsupportedField(
            "classification is implemented over prime fields".into(),
        ));
    }
    if field.characteristic() == 2 {
        return Err(Error::UnsupportedField("characteristic 2".into()));
    }
    if u.form().is_standard() {
        return Ok(u.clone());
    }
    let t = symplectic_basis(u.form())?;
    let conj = t.inverse()?.mul(u.matrix()).mul(&t);
    SymplecticElement::new(conj, SkewForm::standard(field, u.form().dim())?)
}

type BlockAudit<'a> = dyn FnMut(&BlockAnalysis) -> Result<()> + 'a;

fn assemble(
    u: &SymplecticElement,
    mut audit: Option<&mut BlockAudit<'_>>,
) -> Result<InvariantDescriptor> {
    let std = to_standard(u)?;
    let field = std.form().field().clone();
    let mut desc = InvariantDescriptor {
        field,
        n: std.form().dim(),
        split: Vec::new(),
        selfbar: Vec::new(),
        linear: Vec::new(),
    };
    for block in primary_decompose(&std)? {
        if block.kind == BlockKind::SplitPair {
            desc.split.push(case1_invariants(&block)?);
            continue;
        }
        let analysis = analyze_block(&block.u, &block.form, &block.poly, block.exponent)?;
        if let Some(check) = audit.as_mut() {
            check(&analysis)?;
        }
        match case2_from_analysis(&block, &analysis)? {
            Case2Entry::SelfBar(e) => desc.selfbar.push(e),
            Case2Entry::Linear(e) => desc.linear.push(e),
        }
    }
    desc.sort();
    desc.validate()?;
    Ok(desc)
}

/// The descriptor of `u`, computed after moving to the standard form `J₀`.
pub fn invariant(u: &SymplecticElement) -> Result<InvariantDescriptor> {
    assemble(u, None)
}

/// As [`invariant`], additionally auditing every self-reciprocal block with
/// [`check_block_structure`] on `trials` random triples.
pub fn invariant_audited<R: Rng>(
    u: &SymplecticElement,
    trials: usize,
    rng: &mut R,
) -> Result<InvariantDescriptor> {
    let mut check = |a: &BlockAnalysis| check_block_structure(a, trials, rng);
    assemble(u, Some(&mut check))
}

/// Conjugacy in the symplectic group, decided by comparing labels.
pub fn conjugate_in_sp(u: &SymplecticElement, v: &SymplecticElement) -> Result<bool> {
    if u.form().field() != v.form().field() || u.form().dim() != v.form().dim() {
        return Err(Error::FormMismatch);
    }
    Ok(invariant(u)?.label() == invariant(v)?.label())
}

/// All partitions of `total` as multiplicity vectors `(c_1..c_k)` with
/// `c_k > 0`.
fn partitions(total: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max_part: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            let mut v = acc.clone();
            while v.last() == Some(&0) {
                v.pop();
            }
            out.push(v);
            return;
        }
        for part in (1..=max_part.min(rest)).rev() {
            if acc.len() < part {
                acc.resize(part, 0);
            }
            acc[part - 1] += 1;
            go(rest - part, part, acc, out);
            acc[part - 1] -= 1;
        }
    }
    let mut out = Vec::new();
    go(total, total, &mut Vec::new(), &mut out);
    out
}

/// One possible contribution of a single polynomial to a descriptor.
#[derive(Clone)]
enum Piece {
    Split(SplitEntry),
    SelfBar(SelfBarEntry),
    Linear(LinearEntry),
}

fn pieces_for(kind: BlockKind, poly: &Poly, sign: Option<Sign>, n: usize) -> Vec<(usize, Piece)> {
    let deg = poly.degree().unwrap_or(1);
    let weight = match kind {
        BlockKind::SplitPair => 2 * deg,
        _ => deg,
    };
    let mut out = Vec::new();
    for units in 1..=n / weight {
        for mult in partitions(units) {
            let dim = weight * units;
            match kind {
                BlockKind::SplitPair => out.push((
                    dim,
                    Piece::Split(SplitEntry {
                        pair: poly.clone(),
                        a: mult,
                    }),
                )),
                BlockKind::SelfBar => out.push((
                    dim,
                    Piece::SelfBar(SelfBarEntry {
                        q: poly.clone(),
                        b: mult,
                    }),
                )),
                BlockKind::LinMinus | BlockKind::LinPlus => {
                    if mult.iter().enumerate().any(|(i, &c)| i % 2 == 0 && c % 2 == 1) {
                        continue;
                    }
                    let levels: Vec<usize> = mult
                        .iter()
                        .enumerate()
                        .filter(|&(i, &c)| i % 2 == 1 && c > 0)
                        .map(|(i, _)| i + 1)
                        .collect();
                    for mask in 0..1usize << levels.len() {
                        let disc = levels
                            .iter()
                            .enumerate()
                            .map(|(bit, &j)| {
                                let class = if mask >> bit & 1 == 0 {
                                    SquareClass::Square
                                } else {
                                    SquareClass::NonSquare
                                };
                                (j, class)
                            })
                            .collect();
                        out.push((
                            dim,
                            Piece::Linear(LinearEntry {
                                sign: sign.expect("linear piece"),
                                b: mult.clone(),
                                disc,
                            }),
                        ));
                    }
                }
            }
        }
    }
    out
}

/// Monic polynomials of the given degree with nonzero constant term.
fn monic_candidates(field: &Field, degree: usize) -> impl Iterator<Item = Poly> + '_ {
    let p = field.characteristic();
    let count = p.pow(degree as u32);
    (0..count).filter_map(move |mut idx| {
        let mut coeffs = Vec::with_capacity(degree + 1);
        for _ in 0..degree {
            coeffs.push(idx % p);
            idx /= p;
        }
        coeffs.push(1);
        (coeffs[0] != 0).then(|| Poly::from_u64s(field, &coeffs))
    })
}

/// Monic palindromic polynomials `1 + c_1 X + … + c_1 X^{h−1} + X^h`.
fn palindromic_candidates(field: &Field, degree: usize) -> impl Iterator<Item = Poly> + '_ {
    let p = field.characteristic();
    let half = degree / 2;
    (0..p.pow(half as u32)).map(move |mut idx| {
        let mut coeffs = vec![0u64; degree + 1];
        coeffs[0] = 1;
        coeffs[degree] = 1;
        for i in 1..=half {
            let c = idx % p;
            idx /= p;
            coeffs[i] = c;
            coeffs[degree - i] = c;
        }
        Poly::from_u64s(field, &coeffs)
    })
}

/// Every descriptor of a conjugacy class of `Sp_n(F_p)`, sorted by label.
pub fn enumerate_classes(n: usize, field: &Field) -> Result<Vec<InvariantDescriptor>> {
    enumerate_classes_bounded(n, field, ENUMERATION_BOUND)
}

pub fn enumerate_classes_bounded(n: usize, field: &Field, bound: usize) -> Result<Vec<InvariantDescriptor>> {
    if n > bound {
        return Err(Error::BoundExceeded(format!("n = {n} exceeds the bound {bound}")));
    }
    if n == 0 || n % 2 == 1 {
        return Err(Error::OddDimension(n));
    }
    if !field.is_prime() {
        return Err(Error::UnsupportedField(
            "enumeration is implemented over prime fields".into(),
        ));
    }
    let mut atoms: Vec<Vec<(usize, Piece)>> = Vec::new();
    atoms.push(pieces_for(BlockKind::LinMinus, &Sign::Minus.poly(field), Some(Sign::Minus), n));
    atoms.push(pieces_for(BlockKind::LinPlus, &Sign::Plus.poly(field), Some(Sign::Plus), n));
    for degree in 1..=n / 2 {
        for p in monic_candidates(field, degree) {
            if let Ok(FactorKind::SplitPair { .. }) = p.classify_irreducible() {
                if p.canonical_pair_rep()? == p {
                    atoms.push(pieces_for(BlockKind::SplitPair, &p, None, n));
                }
            }
        }
    }
    for degree in (2..=n).step_by(2) {
        for q in palindromic_candidates(field, degree) {
            if q.classify_irreducible() == Ok(FactorKind::SelfBar) {
                atoms.push(pieces_for(BlockKind::SelfBar, &q, None, n));
            }
        }
    }
    let mut out = Vec::new();
    let mut chosen: Vec<Piece> = Vec::new();
    combine(&atoms, 0, n, &mut chosen, &mut |pieces| {
        let mut desc = InvariantDescriptor {
            field: field.clone(),
            n,
            split: Vec::new(),
            selfbar: Vec::new(),
            linear: Vec::new(),
        };
        for piece in pieces {
            match piece {
                Piece::Split(e) => desc.split.push(e.clone()),
                Piece::SelfBar(e) => desc.selfbar.push(e.clone()),
                Piece::Linear(e) => desc.linear.push(e.clone()),
            }
        }
        desc.sort();
        out.push(desc);
    });
    for d in &out {
        d.validate()?;
    }
    out.sort_by_key(|d| d.label());
    let before = out.len();
    out.dedup_by(|a, b| a.label() == b.label());
    if out.len() != before {
        return Err(Error::InvariantViolated("duplicate descriptors".into()));
    }
    Ok(out)
}

fn combine(
    atoms: &[Vec<(usize, Piece)>],
    idx: usize,
    rest: usize,
    chosen: &mut Vec<Piece>,
    emit: &mut dyn FnMut(&[Piece]),
) {
    if rest == 0 {
        emit(chosen);
        return;
    }
    if idx == atoms.len() {
        return;
    }
    combine(atoms, idx + 1, rest, chosen, emit);
    for (dim, piece) in &atoms[idx] {
        if *dim <= rest {
            chosen.push(piece.clone());
            combine(atoms, idx + 1, rest - dim, chosen, emit);
            chosen.pop();
        }
    }
}
