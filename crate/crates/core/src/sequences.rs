//! Base sequences, cyclic transforms and the two properties the
//! construction consumes: perfect periodic autocorrelation and the array
//! orthogonality property (AOP) for a divisor `d`.

use std::fmt;
use std::ops::AddAssign;

use num_complex::Complex64;

use crate::algebra::{root_table, CorrelationValue, Quaternion};
use crate::error::{Error, Result};

/// A sequence of roots of unity in index notation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSequence {
    order: u32,
    exponents: Vec<u32>,
}

impl RootSequence {
    pub fn new(order: u32, exponents: Vec<u32>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidOrder);
        }
        if exponents.is_empty() {
            return Err(Error::EmptySequence);
        }
        if let Some(&e) = exponents.iter().find(|&&e| e >= order) {
            return Err(Error::ExponentOutOfRange {
                exponent: e as i64,
                order,
            });
        }
        Ok(Self { order, exponents })
    }

    /// Reduces arbitrary integer exponents mod `order`.
    pub fn from_reduced(order: u32, exponents: &[i64]) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidOrder);
        }
        let exponents = exponents
            .iter()
            .map(|e| e.rem_euclid(order as i64) as u32)
            .collect();
        Self::new(order, exponents)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn values(&self) -> Vec<Complex64> {
        let table = root_table(self.order);
        self.exponents.iter().map(|&e| table[e as usize]).collect()
    }

    pub fn decimate(&self, t: usize) -> Result<Self> {
        Ok(Self {
            order: self.order,
            exponents: decimate(&self.exponents, t)?,
        })
    }

    pub fn rotate_right(&self, s: i64) -> Self {
        Self {
            order: self.order,
            exponents: rotate_right(&self.exponents, s),
        }
    }

    pub fn autocorrelation(&self) -> Vec<Complex64> {
        autocorrelation_of(&RootTerms::new(self))
    }
}

/// A sequence of unit quaternions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuaternionSequence {
    values: Vec<Quaternion>,
}

impl QuaternionSequence {
    pub fn new(values: Vec<Quaternion>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySequence);
        }
        if let Some(q) = values.iter().find(|q| !q.is_unit()) {
            return Err(Error::NonUnitQuaternion(q.to_string()));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[Quaternion] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn decimate(&self, t: usize) -> Result<Self> {
        Ok(Self {
            values: decimate(&self.values, t)?,
        })
    }

    pub fn rotate_right(&self, s: i64) -> Self {
        Self {
            values: rotate_right(&self.values, s),
        }
    }

    /// Exact quaternion autocorrelation `Σ v_i · conj(v_{i+s})`.
    pub fn autocorrelation(&self) -> Vec<Quaternion> {
        autocorrelation_of(&QuaternionTerms(&self.values))
    }
}

/// Either kind of base sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sequence {
    Roots(RootSequence),
    Quaternion(QuaternionSequence),
}

/// Value domain shared by sequences and arrays.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Roots { order: u32 },
    Quaternion,
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Roots { order } => write!(f, "{order} roots of unity"),
            Domain::Quaternion => f.write_str("unit quaternions"),
        }
    }
}

impl Sequence {
    pub fn len(&self) -> usize {
        match self {
            Sequence::Roots(s) => s.len(),
            Sequence::Quaternion(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn domain(&self) -> Domain {
        match self {
            Sequence::Roots(s) => Domain::Roots { order: s.order() },
            Sequence::Quaternion(_) => Domain::Quaternion,
        }
    }

    pub fn decimate(&self, t: usize) -> Result<Self> {
        Ok(match self {
            Sequence::Roots(s) => Sequence::Roots(s.decimate(t)?),
            Sequence::Quaternion(s) => Sequence::Quaternion(s.decimate(t)?),
        })
    }

    pub fn rotate_right(&self, s: i64) -> Self {
        match self {
            Sequence::Roots(seq) => Sequence::Roots(seq.rotate_right(s)),
            Sequence::Quaternion(seq) => Sequence::Quaternion(seq.rotate_right(s)),
        }
    }

    pub fn periodic_autocorrelation(&self) -> Vec<CorrelationValue> {
        match self {
            Sequence::Roots(s) => s
                .autocorrelation()
                .into_iter()
                .map(CorrelationValue::Complex)
                .collect(),
            Sequence::Quaternion(s) => s
                .autocorrelation()
                .into_iter()
                .map(CorrelationValue::Quaternion)
                .collect(),
        }
    }

    pub fn is_perfect(&self, tol: f64) -> bool {
        is_perfect(self, tol)
    }

    pub fn aop_check(&self, d: usize, tol: f64) -> Result<AopReport> {
        aop_check(self, d, tol)
    }
}

impl From<RootSequence> for Sequence {
    fn from(s: RootSequence) -> Self {
        Sequence::Roots(s)
    }
}

impl From<QuaternionSequence> for Sequence {
    fn from(s: QuaternionSequence) -> Self {
        Sequence::Quaternion(s)
    }
}

/// The Frank sequence of length `r²`: exponent `(q·s) mod r` at position `q·r + s`.
pub fn frank(r: u32) -> Result<RootSequence> {
    if r == 0 {
        return Err(Error::InvalidOrder);
    }
    let exponents = (0..r)
        .flat_map(|q| (0..r).map(move |s| ((q as u64 * s as u64) % r as u64) as u32))
        .collect();
    RootSequence::new(r, exponents)
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `out[i] = seq[(t·i) mod n]`; only defined when this is a permutation.
pub fn decimate<T: Clone>(seq: &[T], t: usize) -> Result<Vec<T>> {
    let n = seq.len();
    if n == 0 {
        return Err(Error::EmptySequence);
    }
    if gcd(t, n) != 1 {
        return Err(Error::NonInvertibleDecimation { t, len: n });
    }
    let t = t % n;
    Ok((0..n).map(|i| seq[(t * i) % n].clone()).collect())
}

/// `out[i] = seq[(i - s) mod n]`.
pub fn rotate_right<T: Clone>(seq: &[T], s: i64) -> Vec<T> {
    let n = seq.len();
    if n == 0 {
        return Vec::new();
    }
    let s = s.rem_euclid(n as i64) as usize;
    (0..n).map(|i| seq[(i + n - s) % n].clone()).collect()
}

/// Products `v_i · conj(v_j)` for one domain, with an accumulator type that
/// keeps quaternion sums exact.
trait PeriodicTerms {
    type Acc: Copy + Default + AddAssign;

    fn len(&self) -> usize;
    fn term(&self, i: usize, j: usize) -> Self::Acc;
    fn magnitude(acc: Self::Acc) -> f64;
}

struct RootTerms<'a> {
    exponents: &'a [u32],
    order: u32,
    table: Vec<Complex64>,
}

impl<'a> RootTerms<'a> {
    fn new(seq: &'a RootSequence) -> Self {
        Self {
            exponents: &seq.exponents,
            order: seq.order,
            table: root_table(seq.order),
        }
    }
}

impl PeriodicTerms for RootTerms<'_> {
    type Acc = Complex64;

    fn len(&self) -> usize {
        self.exponents.len()
    }

    fn term(&self, i: usize, j: usize) -> Complex64 {
        let diff = (self.exponents[i] + self.order - self.exponents[j]) % self.order;
        self.table[diff as usize]
    }

    fn magnitude(acc: Complex64) -> f64 {
        acc.norm()
    }
}

struct QuaternionTerms<'a>(&'a [Quaternion]);

impl PeriodicTerms for QuaternionTerms<'_> {
    type Acc = Quaternion;

    fn len(&self) -> usize {
        self.0.len()
    }

    fn term(&self, i: usize, j: usize) -> Quaternion {
        self.0[i] * self.0[j].conj()
    }

    fn magnitude(acc: Quaternion) -> f64 {
        acc.norm()
    }
}

fn autocorrelation_of<P: PeriodicTerms>(terms: &P) -> Vec<P::Acc> {
    let n = terms.len();
    (0..n)
        .map(|s| {
            let mut acc = P::Acc::default();
            for i in 0..n {
                acc += terms.term(i, (i + s) % n);
            }
            acc
        })
        .collect()
}

/// Periodic autocorrelation at every shift; value at shift 0 is `n`.
pub fn periodic_autocorrelation(seq: &Sequence) -> Vec<CorrelationValue> {
    seq.periodic_autocorrelation()
}

/// True iff every off-peak autocorrelation magnitude is below `tol`.
pub fn is_perfect(seq: &Sequence, tol: f64) -> bool {
    seq.periodic_autocorrelation()
        .iter()
        .skip(1)
        .all(|v| v.magnitude() < tol)
}

/// Which zero-sum condition of the AOP a witness violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AopCondition {
    /// Shifts `s ≢ 0 (mod d)`: every residue's partial sum vanishes.
    A1,
    /// Shifts `s ≡ 0 (mod d)`, `s ≢ 0 (mod n/d)`: every residue's partial sum vanishes.
    A2,
    /// Shifts `s ≡ 0 (mod n/d)`, `s ≢ 0 (mod n)`: the partial sums add to zero.
    A3,
}

impl fmt::Display for AopCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AopCondition::A1 => "A1",
            AopCondition::A2 => "A2",
            AopCondition::A3 => "A3",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AopFailure {
    pub condition: AopCondition,
    /// Residue class `ρ`; `None` for A3, which sums over all residues.
    pub residue: Option<usize>,
    pub shift: usize,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AopReport {
    pub d: usize,
    pub holds: bool,
    pub failures: Vec<AopFailure>,
}

/// Checks the AOP for divisor `d` through the partial sums
/// `P(ρ, s) = Σ_{q < n/d} a_{qd+ρ} · conj(a_{qd+ρ+s})`.
pub fn aop_check(seq: &Sequence, d: usize, tol: f64) -> Result<AopReport> {
    match seq {
        Sequence::Roots(s) => aop_check_terms(&RootTerms::new(s), d, tol),
        Sequence::Quaternion(s) => aop_check_terms(&QuaternionTerms(&s.values), d, tol),
    }
}

fn aop_check_terms<P: PeriodicTerms>(terms: &P, d: usize, tol: f64) -> Result<AopReport> {
    let n = terms.len();
    if d == 0 || !n.is_multiple_of(d) {
        return Err(Error::InvalidDivisor { d, len: n });
    }
    let stride = n / d;
    let partial = |rho: usize, s: usize| {
        let mut acc = P::Acc::default();
        for q in 0..stride {
            let i = q * d + rho;
            acc += terms.term(i, (i + s) % n);
        }
        acc
    };

    let mut failures = Vec::new();
    for s in 1..n {
        let condition = if s % d != 0 {
            Some(AopCondition::A1)
        } else if s % stride != 0 {
            Some(AopCondition::A2)
        } else {
            None
        };
        match condition {
            Some(condition) => {
                for rho in 0..d {
                    let magnitude = P::magnitude(partial(rho, s));
                    if magnitude >= tol {
                        failures.push(AopFailure {
                            condition,
                            residue: Some(rho),
                            shift: s,
                            magnitude,
                        });
                    }
                }
            }
            None => {
                let mut total = P::Acc::default();
                for rho in 0..d {
                    total += partial(rho, s);
                }
                let magnitude = P::magnitude(total);
                if magnitude >= tol {
                    failures.push(AopFailure {
                        condition: AopCondition::A3,
                        residue: None,
                        shift: s,
                        magnitude,
                    });
                }
            }
        }
    }
    Ok(AopReport {
        d,
        holds: failures.is_empty(),
        failures,
    })
}

/// Parses a comma separated list of quaternion tokens (`1`, `-k`, ...) or
/// explicit tuples `(w,x,y,z)`. Surrounding brackets are optional.
pub fn parse_quaternion_sequence(text: &str) -> Result<QuaternionSequence> {
    let mut body = text.trim();
    let offset = text.len() - text.trim_start().len();
    let mut base = offset;
    if let Some(inner) = body.strip_prefix('[').and_then(|b| b.strip_suffix(']')) {
        body = inner;
        base += 1;
    }
    let mut values = Vec::new();
    let bytes = body.as_bytes();
    let mut pos = 0;
    while pos < bytes.len() {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos >= bytes.len() {
            break;
        }
        let start = pos;
        if bytes[pos] == b'(' {
            match body[pos..].find(')') {
                Some(close) => pos += close + 1,
                None => {
                    return Err(Error::Parse {
                        position: base + start,
                        message: "unclosed `(`".into(),
                    });
                }
            }
        } else {
            while pos < bytes.len() && bytes[pos] != b',' {
                pos += 1;
            }
        }
        let token = body[start..pos].trim();
        let q: Quaternion = token.parse().map_err(|message| Error::Parse {
            position: base + start,
            message,
        })?;
        values.push(q);

        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos < bytes.len() {
            if bytes[pos] != b',' {
                return Err(Error::Parse {
                    position: base + pos,
                    message: "expected `,`".into(),
                });
            }
            pos += 1;
        }
    }
    QuaternionSequence::new(values)
}

/// The block `c = [c(0), ..., c(d-1)]` of `d` equal-length sequences over a
/// shared domain; the common length `m` must be a multiple of `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceBlock {
    sequences: Vec<Sequence>,
}

impl SequenceBlock {
    pub fn new(sequences: Vec<Sequence>) -> Result<Self> {
        let first = sequences
            .first()
            .ok_or_else(|| Error::InvalidBlock("a block needs at least one sequence".into()))?;
        let (m, domain) = (first.len(), first.domain());
        for (t, seq) in sequences.iter().enumerate() {
            if seq.domain() != domain {
                return Err(Error::DomainMismatch(format!(
                    "block sequence {t} is over {}, sequence 0 is over {domain}",
                    seq.domain()
                )));
            }
            if seq.len() != m {
                return Err(Error::InvalidBlock(format!(
                    "block sequence {t} has length {}, expected {m}",
                    seq.len()
                )));
            }
        }
        let d = sequences.len();
        if m % d != 0 {
            return Err(Error::InvalidBlock(format!(
                "sequence length {m} is not a multiple of d = {d}"
            )));
        }
        Ok(Self { sequences })
    }

    pub fn sequences(&self) -> &[Sequence] {
        &self.sequences
    }

    /// Number of sequences in the block.
    pub fn d(&self) -> usize {
        self.sequences.len()
    }

    /// Common sequence length.
    pub fn m(&self) -> usize {
        self.sequences[0].len()
    }

    /// `m / d`.
    pub fn w(&self) -> usize {
        self.m() / self.d()
    }

    pub fn domain(&self) -> Domain {
        self.sequences[0].domain()
    }
}
