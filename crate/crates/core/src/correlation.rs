//! Periodic N-dimensional correlation.
//!
//! `θ_{S,T}(s) = Σ_x S[x] · conj(T[(x + s) mod dims])`, with shift vectors in
//! the same axis order as the arrays (axis 0 = `j`). Values whose magnitude
//! falls below the chop tolerance are set to exactly zero.
//!
//! Two routes exist for roots-of-unity arrays. The direct route counts, for
//! every shift, how often each exponent difference occurs and evaluates the
//! histogram once, so it is exact up to that final evaluation. The fast route
//! evaluates the arrays and uses a multidimensional FFT. Quaternion arrays
//! only have the direct route and are summed exactly in integers.

use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{FftDirection, FftPlanner};

use crate::algebra::{root_table, CorrelationValue, Quaternion};
use crate::construction::{ArrayData, ArrayFamily, PerfectArray};
use crate::error::{Error, Result};
use crate::DEFAULT_TOLERANCE;

/// Chop threshold. The effective tolerance is `max(absolute, relative · M)`
/// where `M` is the number of array cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Threshold {
    pub absolute: f64,
    pub relative: Option<f64>,
}

impl Threshold {
    pub fn absolute(tol: f64) -> Self {
        Self {
            absolute: tol,
            relative: None,
        }
    }

    pub fn with_relative(mut self, fraction: f64) -> Self {
        self.relative = Some(fraction);
        self
    }

    pub fn effective(&self, cells: usize) -> f64 {
        match self.relative {
            Some(f) => self.absolute.max(f * cells as f64),
            None => self.absolute,
        }
    }
}

impl Default for Threshold {
    fn default() -> Self {
        Self::absolute(DEFAULT_TOLERANCE)
    }
}

/// A shift vector, each component reduced modulo its axis length.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ShiftVector(pub Vec<usize>);

impl ShiftVector {
    pub fn new(shift: &[i64], dims: &[usize]) -> Result<Self> {
        if shift.len() != dims.len() {
            return Err(Error::DimensionMismatch {
                left: vec![shift.len()],
                right: vec![dims.len()],
            });
        }
        Ok(Self(
            shift
                .iter()
                .zip(dims)
                .map(|(&s, &len)| s.rem_euclid(len as i64) as usize)
                .collect(),
        ))
    }

    pub fn from_flat(mut flat: usize, dims: &[usize]) -> Self {
        let mut s = vec![0; dims.len()];
        for (slot, &len) in s.iter_mut().zip(dims).rev() {
            *slot = flat % len;
            flat /= len;
        }
        Self(s)
    }

    pub fn to_flat(&self, dims: &[usize]) -> usize {
        self.0
            .iter()
            .zip(dims)
            .fold(0, |acc, (&s, &len)| acc * len + s % len)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&s| s == 0)
    }

    pub fn negated(&self, dims: &[usize]) -> Self {
        Self(
            self.0
                .iter()
                .zip(dims)
                .map(|(&s, &len)| (len - s % len) % len)
                .collect(),
        )
    }
}

impl fmt::Display for ShiftVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CorrelationValues {
    Complex(Vec<Complex64>),
    Quaternion(Vec<Quaternion>),
}

/// Correlation over every shift, row-major in shift space.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationResult {
    pub dims: Vec<usize>,
    pub values: CorrelationValues,
    pub threshold: Threshold,
    /// Effective chop tolerance that was applied.
    pub tol: f64,
}

impl CorrelationResult {
    pub fn len(&self) -> usize {
        match &self.values {
            CorrelationValues::Complex(v) => v.len(),
            CorrelationValues::Quaternion(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, flat: usize) -> CorrelationValue {
        match &self.values {
            CorrelationValues::Complex(v) => CorrelationValue::Complex(v[flat]),
            CorrelationValues::Quaternion(v) => CorrelationValue::Quaternion(v[flat]),
        }
    }

    pub fn value_at(&self, shift: &ShiftVector) -> CorrelationValue {
        self.get(shift.to_flat(&self.dims))
    }

    pub fn nonzero_census(&self) -> Census {
        nonzero_census(self)
    }
}

/// Non-zero values of a correlation, in row-major shift order.
#[derive(Debug, Clone, PartialEq)]
pub struct Census {
    pub count: usize,
    pub entries: Vec<(ShiftVector, CorrelationValue)>,
}

/// Counts values with magnitude at or above the result's tolerance.
pub fn nonzero_census(res: &CorrelationResult) -> Census {
    let entries: Vec<_> = (0..res.len())
        .map(|flat| (flat, res.get(flat)))
        .filter(|(_, v)| v.magnitude() >= res.tol)
        .map(|(flat, v)| (ShiftVector::from_flat(flat, &res.dims), v))
        .collect();
    Census {
        count: entries.len(),
        entries,
    }
}

fn check_compatible(s: &PerfectArray, t: &PerfectArray) -> Result<()> {
    if s.dims() != t.dims() {
        return Err(Error::DimensionMismatch {
            left: s.dims().to_vec(),
            right: t.dims().to_vec(),
        });
    }
    if s.domain() != t.domain() {
        return Err(Error::DomainMismatch(format!(
            "{} vs {}",
            s.domain(),
            t.domain()
        )));
    }
    Ok(())
}

/// For shift `s`, the flat index of `(x + s) mod dims` for every flat `x`.
fn shifted_indices(dims: &[usize], shift: &[usize], out: &mut Vec<usize>) {
    out.clear();
    out.push(0);
    let mut next = Vec::with_capacity(out.capacity());
    for (&len, &s) in dims.iter().zip(shift) {
        next.clear();
        for &p in out.iter() {
            next.extend((0..len).map(|i| p * len + (i + s) % len));
        }
        std::mem::swap(out, &mut next);
    }
}

/// Direct correlation over every shift vector.
pub fn xcorr_nd(
    s: &PerfectArray,
    t: &PerfectArray,
    threshold: Threshold,
) -> Result<CorrelationResult> {
    check_compatible(s, t)?;
    let dims = s.dims().to_vec();
    let cells = s.len();
    let tol = threshold.effective(cells);

    let values = match (s.data(), t.data()) {
        (
            ArrayData::Roots {
                order,
                exponents: a,
            },
            ArrayData::Roots { exponents: b, .. },
        ) => {
            let order = *order as usize;
            let table = root_table(order as u32);
            let values = (0..cells)
                .into_par_iter()
                .map_init(
                    || (Vec::with_capacity(cells), vec![0u64; order]),
                    |(perm, hist), flat| {
                        shifted_indices(&dims, &ShiftVector::from_flat(flat, &dims).0, perm);
                        hist.iter_mut().for_each(|h| *h = 0);
                        for (x, &y) in perm.iter().enumerate() {
                            hist[(a[x] as usize + order - b[y] as usize) % order] += 1;
                        }
                        let v: Complex64 =
                            hist.iter().zip(&table).map(|(&h, &w)| w * h as f64).sum();
                        chop_complex(v, tol)
                    },
                )
                .collect();
            CorrelationValues::Complex(values)
        }
        (ArrayData::Quaternion(a), ArrayData::Quaternion(b)) => {
            let values = (0..cells)
                .into_par_iter()
                .map_init(
                    || Vec::with_capacity(cells),
                    |perm, flat| {
                        shifted_indices(&dims, &ShiftVector::from_flat(flat, &dims).0, perm);
                        let mut acc = Quaternion::ZERO;
                        for (x, &y) in perm.iter().enumerate() {
                            acc += a[x] * b[y].conj();
                        }
                        if acc.norm() < tol {
                            Quaternion::ZERO
                        } else {
                            acc
                        }
                    },
                )
                .collect();
            CorrelationValues::Quaternion(values)
        }
        _ => unreachable!("domains checked"),
    };
    Ok(CorrelationResult {
        dims,
        values,
        threshold,
        tol,
    })
}

fn chop_complex(v: Complex64, tol: f64) -> Complex64 {
    if v.norm() < tol {
        Complex64::new(0.0, 0.0)
    } else {
        v
    }
}

/// In-place unnormalised N-dimensional DFT over row-major data.
fn fft_nd(
    data: &mut [Complex64],
    dims: &[usize],
    direction: FftDirection,
    planner: &mut FftPlanner<f64>,
) {
    let total = data.len();
    let mut inner = total;
    for &len in dims {
        inner /= len;
        let fft = planner.plan_fft(len, direction);
        let mut line = vec![Complex64::new(0.0, 0.0); len];
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        for outer in 0..total / (len * inner) {
            for lane in 0..inner {
                let base = outer * len * inner + lane;
                for (i, slot) in line.iter_mut().enumerate() {
                    *slot = data[base + i * inner];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (i, v) in line.iter().enumerate() {
                    data[base + i * inner] = *v;
                }
            }
        }
    }
}

fn evaluate(exponents: &[u32], order: u32) -> Vec<Complex64> {
    let table = root_table(order);
    exponents.iter().map(|&e| table[e as usize]).collect()
}

/// Transform-accelerated correlation; roots-of-unity arrays only.
pub fn xcorr_nd_fast(
    s: &PerfectArray,
    t: &PerfectArray,
    threshold: Threshold,
) -> Result<CorrelationResult> {
    check_compatible(s, t)?;
    let (a, b, order) =
        match (s.data(), t.data()) {
            (
                ArrayData::Roots {
                    order,
                    exponents: a,
                },
                ArrayData::Roots { exponents: b, .. },
            ) => (a, b, *order),
            _ => return Err(Error::Unsupported(
                "fast correlation is only defined for roots-of-unity arrays; use the direct path"
                    .into(),
            )),
        };
    let dims = s.dims().to_vec();
    let cells = s.len();
    let tol = threshold.effective(cells);

    let mut planner = FftPlanner::new();
    let mut fa = evaluate(a, order);
    let mut fb = evaluate(b, order);
    fft_nd(&mut fa, &dims, FftDirection::Forward, &mut planner);
    fft_nd(&mut fb, &dims, FftDirection::Forward, &mut planner);
    // conj(θ) is the correlation conj(S) ⋆ T, whose spectrum is conj(Ŝ)·T̂.
    let mut spectrum: Vec<Complex64> = fa.iter().zip(&fb).map(|(x, y)| x.conj() * y).collect();
    fft_nd(&mut spectrum, &dims, FftDirection::Inverse, &mut planner);
    let scale = 1.0 / cells as f64;
    let values = spectrum
        .into_iter()
        .map(|v| chop_complex(v.conj() * scale, tol))
        .collect();
    Ok(CorrelationResult {
        dims,
        values: CorrelationValues::Complex(values),
        threshold,
        tol,
    })
}

/// Fast path for roots arrays, direct path otherwise.
pub fn xcorr_auto(
    s: &PerfectArray,
    t: &PerfectArray,
    threshold: Threshold,
) -> Result<CorrelationResult> {
    match s.data() {
        ArrayData::Roots { .. } => xcorr_nd_fast(s, t, threshold),
        ArrayData::Quaternion(_) => xcorr_nd(s, t, threshold),
    }
}

/// Outcome of an autocorrelation check on one array.
#[derive(Debug, Clone, PartialEq)]
pub struct PerfectnessVerdict {
    pub perfect: bool,
    pub census: Census,
    /// First off-peak shift (row-major) with a non-zero value.
    pub first_failure: Option<ShiftVector>,
}

pub fn verify_perfect(
    array: &PerfectArray,
    threshold: Threshold,
    fast: bool,
) -> Result<PerfectnessVerdict> {
    let res = if fast {
        xcorr_auto(array, array, threshold)?
    } else {
        xcorr_nd(array, array, threshold)?
    };
    let census = res.nonzero_census();
    let first_failure = census
        .entries
        .iter()
        .find(|(s, _)| !s.is_zero())
        .map(|(s, _)| s.clone());
    Ok(PerfectnessVerdict {
        perfect: first_failure.is_none(),
        census,
        first_failure,
    })
}

/// Census of one ordered pair of family members.
#[derive(Debug, Clone, PartialEq)]
pub struct PairCensus {
    pub k1: i64,
    pub k2: i64,
    pub nonzero_count: usize,
    pub peak_magnitude: f64,
    pub entries: Vec<(ShiftVector, CorrelationValue)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZczReport {
    /// Ordered pairs, row-major over members.
    pub pairs: Vec<PairCensus>,
    pub members: usize,
    pub d_squared: Option<usize>,
    pub cells: usize,
    pub ratio: Option<f64>,
}

impl ZczReport {
    pub fn counts(&self) -> Vec<usize> {
        self.pairs.iter().map(|p| p.nonzero_count).collect()
    }

    /// True iff every self pair has a single peak and, when `d` is known,
    /// every pair of distinct members has exactly `d²` non-zero values.
    pub fn holds(&self) -> bool {
        self.pairs.iter().enumerate().all(|(idx, p)| {
            let (row, col) = (idx / self.members, idx % self.members);
            if row == col {
                p.nonzero_count == 1
            } else {
                self.d_squared.is_none_or(|d2| p.nonzero_count == d2)
            }
        })
    }
}

/// Pairwise census over all ordered pairs of the family.
pub fn zcz_report(family: &ArrayFamily, threshold: Threshold) -> Result<ZczReport> {
    let first = family
        .members
        .first()
        .ok_or_else(|| Error::InvalidParameter("family is empty".into()))?;
    let cells = first.array.len();
    let mut pairs = Vec::with_capacity(family.len() * family.len());
    for m1 in &family.members {
        for m2 in &family.members {
            let census = xcorr_auto(&m1.array, &m2.array, threshold)?.nonzero_census();
            let peak_magnitude = census
                .entries
                .iter()
                .map(|(_, v)| v.magnitude())
                .fold(0.0, f64::max);
            pairs.push(PairCensus {
                k1: m1.k,
                k2: m2.k,
                nonzero_count: census.count,
                peak_magnitude,
                entries: census.entries,
            });
        }
    }
    let d_squared = family.d.map(|d| d * d);
    Ok(ZczReport {
        pairs,
        members: family.len(),
        d_squared,
        cells,
        ratio: d_squared.map(|d2| d2 as f64 / cells as f64),
    })
}
