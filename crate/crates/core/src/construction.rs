//! Block-circulant construction of N-dimensional perfect arrays.
//!
//! Given a base sequence `a` of length `n` and a block `c` of `d` sequences of
//! length `m` (`w = m / d`), the member with family parameter `k` has entry
//!
//! ```text
//! S[j, i_0, ..., i_{N-2}] = a_j · Π_v c(j mod d)[(w⌊j/d⌋ + k·(j mod d) + i_v) mod m]
//! ```
//!
//! Axis 0 is always `j` (length `n`); axes `1..N` are the `i_v` (length `m`).
//! Data is stored row-major, so axis 0 varies slowest. The two-dimensional
//! case is the original single-factor construction.
//!
//! Over roots of unity the product is a sum of exponents mod `r`. Over
//! quaternions it is the ordered product `a_j · c(..)[i_0 term] · ... · c(..)[i_{N-2} term]`.

use crate::algebra::Quaternion;
use crate::error::{Error, Result};
use crate::sequences::{Domain, Sequence, SequenceBlock};
use crate::DEFAULT_TOLERANCE;

/// Flat entry storage of a constructed array.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArrayData {
    Roots { order: u32, exponents: Vec<u32> },
    Quaternion(Vec<Quaternion>),
}

/// An N-dimensional array in row-major order with axis 0 = `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerfectArray {
    dims: Vec<usize>,
    data: ArrayData,
}

impl PerfectArray {
    /// Checks that `dims` matches the data length and every exponent is in range.
    pub fn new(dims: Vec<usize>, data: ArrayData) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidParameter(format!(
                "invalid array dims {dims:?}"
            )));
        }
        let cells: usize = dims.iter().product();
        let len = match &data {
            ArrayData::Roots { order, exponents } => {
                if *order == 0 {
                    return Err(Error::InvalidOrder);
                }
                if let Some(&e) = exponents.iter().find(|&&e| e >= *order) {
                    return Err(Error::ExponentOutOfRange {
                        exponent: e as i64,
                        order: *order,
                    });
                }
                exponents.len()
            }
            ArrayData::Quaternion(values) => {
                if let Some(q) = values.iter().find(|q| !q.is_unit()) {
                    return Err(Error::NonUnitQuaternion(q.to_string()));
                }
                values.len()
            }
        };
        if len != cells {
            return Err(Error::InvalidParameter(format!(
                "dims {dims:?} describe {cells} cells but {len} entries were given"
            )));
        }
        Ok(Self { dims, data })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn ndim(&self) -> usize {
        self.dims.len()
    }

    /// Total number of cells `M`.
    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn data(&self) -> &ArrayData {
        &self.data
    }

    pub fn domain(&self) -> Domain {
        match &self.data {
            ArrayData::Roots { order, .. } => Domain::Roots { order: *order },
            ArrayData::Quaternion(_) => Domain::Quaternion,
        }
    }

    pub fn root_order(&self) -> Option<u32> {
        match &self.data {
            ArrayData::Roots { order, .. } => Some(*order),
            ArrayData::Quaternion(_) => None,
        }
    }

    pub fn exponents(&self) -> Option<&[u32]> {
        match &self.data {
            ArrayData::Roots { exponents, .. } => Some(exponents),
            ArrayData::Quaternion(_) => None,
        }
    }

    pub fn quaternions(&self) -> Option<&[Quaternion]> {
        match &self.data {
            ArrayData::Quaternion(values) => Some(values),
            ArrayData::Roots { .. } => None,
        }
    }

    /// Row-major flat offset of a multi-index; indices are taken modulo each axis.
    pub fn flat_index(&self, index: &[usize]) -> usize {
        assert_eq!(index.len(), self.dims.len(), "index rank mismatch");
        index
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&i, &len)| acc * len + i % len)
    }

    pub fn exponent_at(&self, index: &[usize]) -> Option<u32> {
        self.exponents().map(|e| e[self.flat_index(index)])
    }

    pub fn quaternion_at(&self, index: &[usize]) -> Option<Quaternion> {
        self.quaternions().map(|q| q[self.flat_index(index)])
    }
}

/// Inputs to one construction: base `a`, block `c`, family parameter `k`
/// and total dimension count `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstructionParams {
    pub base: Sequence,
    pub block: SequenceBlock,
    pub k: i64,
    pub dims: usize,
    /// Check perfectness and the AOP of the inputs before building.
    pub strict: bool,
    pub tol: f64,
}

impl ConstructionParams {
    pub fn new(base: Sequence, block: SequenceBlock, k: i64, dims: usize) -> Result<Self> {
        if dims < 2 {
            return Err(Error::InvalidParameter(format!(
                "need at least 2 dimensions, got {dims}"
            )));
        }
        if base.domain() != block.domain() {
            return Err(Error::DomainMismatch(format!(
                "base is over {}, block is over {}",
                base.domain(),
                block.domain()
            )));
        }
        if !base.len().is_multiple_of(block.d()) {
            return Err(Error::InvalidDivisor {
                d: block.d(),
                len: base.len(),
            });
        }
        Ok(Self {
            base,
            block,
            k,
            dims,
            strict: false,
            tol: DEFAULT_TOLERANCE,
        })
    }

    pub fn strict(mut self, strict: bool) -> Self {
        self.strict = strict;
        self
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn n(&self) -> usize {
        self.base.len()
    }

    /// `[n, m, ..., m]` with `N - 1` trailing axes.
    pub fn shape(&self) -> Vec<usize> {
        let mut shape = vec![self.n()];
        shape.extend(std::iter::repeat_n(self.block.m(), self.dims - 1));
        shape
    }

    /// Verifies that `a` is perfect with the AOP for `d` and every `c(t)` is perfect.
    pub fn check_preconditions(&self) -> Result<()> {
        if !self.base.is_perfect(self.tol) {
            return Err(Error::Precondition("base sequence is not perfect".into()));
        }
        let d = self.block.d();
        let report = self.base.aop_check(d, self.tol)?;
        if let Some(f) = report.failures.first() {
            let residue = f
                .residue
                .map(|r| format!(", residue {r}"))
                .unwrap_or_default();
            return Err(Error::Precondition(format!(
                "base sequence lacks the AOP for d = {d}: condition {} fails at shift {}{residue} (magnitude {:.3e})",
                f.condition, f.shift, f.magnitude
            )));
        }
        for (t, seq) in self.block.sequences().iter().enumerate() {
            if !seq.is_perfect(self.tol) {
                return Err(Error::Precondition(format!(
                    "block sequence c({t}) is not perfect"
                )));
            }
        }
        Ok(())
    }
}

/// Builds `S_k`. In strict mode the input properties are checked first.
pub fn construct_nd(params: &ConstructionParams) -> Result<PerfectArray> {
    if params.strict {
        params.check_preconditions()?;
    }
    let shape = params.shape();
    let data = match &params.base {
        Sequence::Roots(base) => {
            let order = base.order();
            let block: Vec<&[u32]> = params
                .block
                .sequences()
                .iter()
                .map(|s| match s {
                    Sequence::Roots(s) => s.exponents(),
                    Sequence::Quaternion(_) => unreachable!("block domain checked"),
                })
                .collect();
            let exponents = build_cells(base.exponents(), &block, params, |acc: u32, e: u32| {
                ((acc as u64 + e as u64) % order as u64) as u32
            });
            ArrayData::Roots { order, exponents }
        }
        Sequence::Quaternion(base) => {
            let block: Vec<&[Quaternion]> = params
                .block
                .sequences()
                .iter()
                .map(|s| match s {
                    Sequence::Quaternion(s) => s.values(),
                    Sequence::Roots(_) => unreachable!("block domain checked"),
                })
                .collect();
            ArrayData::Quaternion(build_cells(base.values(), &block, params, |acc, q| acc * q))
        }
    };
    PerfectArray::new(shape, data)
}

/// Fills the array slice by slice: for each `j`, the slice is the ordered
/// `N-1`-fold product of `a_j` with the cyclically shifted `c(j mod d)`.
fn build_cells<T: Copy>(
    base: &[T],
    block: &[&[T]],
    params: &ConstructionParams,
    combine: impl Fn(T, T) -> T,
) -> Vec<T> {
    let (d, m, w) = (params.block.d(), params.block.m(), params.block.w());
    let k = params.k.rem_euclid(m as i64) as usize;
    let slice_len = m.pow((params.dims - 1) as u32);
    let mut out = Vec::with_capacity(base.len() * slice_len);
    let mut slice = Vec::with_capacity(slice_len);
    let mut next = Vec::with_capacity(slice_len);
    for (j, &a_j) in base.iter().enumerate() {
        let c = block[j % d];
        let offset = (w * (j / d) + k * (j % d)) % m;
        slice.clear();
        slice.push(a_j);
        for _ in 1..params.dims {
            next.clear();
            for &acc in &slice {
                next.extend((0..m).map(|i| combine(acc, c[(offset + i) % m])));
            }
            std::mem::swap(&mut slice, &mut next);
        }
        out.extend_from_slice(&slice);
    }
    out
}

/// One member of a family together with the `k` that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyMember {
    pub k: i64,
    pub array: PerfectArray,
}

/// Arrays sharing base, block and dimension count, one per `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrayFamily {
    pub members: Vec<FamilyMember>,
    /// Block size `d`, when known. Families loaded from files may not carry it.
    pub d: Option<usize>,
}

impl ArrayFamily {
    /// Wraps arbitrary arrays, labelled `1..=len` in the given order.
    pub fn from_arrays(arrays: Vec<PerfectArray>, d: Option<usize>) -> Result<Self> {
        if let Some(first) = arrays.first() {
            for a in &arrays[1..] {
                if a.dims() != first.dims() {
                    return Err(Error::DimensionMismatch {
                        left: first.dims().to_vec(),
                        right: a.dims().to_vec(),
                    });
                }
                if a.domain() != first.domain() {
                    return Err(Error::DomainMismatch(format!(
                        "{} vs {}",
                        first.domain(),
                        a.domain()
                    )));
                }
            }
        }
        let members = arrays
            .into_iter()
            .zip(1..)
            .map(|(array, k)| FamilyMember { k, array })
            .collect();
        Ok(Self { members, d })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Builds one array per `k`. Preconditions are checked once in strict mode.
pub fn construct_family(
    base: &Sequence,
    block: &SequenceBlock,
    ks: &[i64],
    dims: usize,
    strict: bool,
) -> Result<ArrayFamily> {
    let template = ConstructionParams::new(base.clone(), block.clone(), 0, dims)?;
    if strict {
        template.check_preconditions()?;
    }
    let members = ks
        .iter()
        .map(|&k| {
            let params = ConstructionParams {
                k,
                ..template.clone()
            };
            construct_nd(&params).map(|array| FamilyMember { k, array })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ArrayFamily {
        members,
        d: Some(block.d()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::{frank, parse_quaternion_sequence, RootSequence};

    fn binary_block() -> (Sequence, SequenceBlock) {
        let f = Sequence::from(frank(2).unwrap());
        let block = SequenceBlock::new(vec![f.clone(), f.decimate(3).unwrap()]).unwrap();
        (f, block)
    }

    #[test]
    fn binary_slices_match_printed_values() {
        let (f, block) = binary_block();
        let params = ConstructionParams::new(f, block, 0, 4)
            .unwrap()
            .strict(true);
        let s = construct_nd(&params).unwrap();
        assert_eq!(s.dims(), &[4, 4, 4, 4]);
        let slice = |j: usize, i0: usize| -> Vec<u32> {
            (0..16)
                .map(|x| s.exponent_at(&[j, i0, x / 4, x % 4]).unwrap())
                .collect()
        };
        assert_eq!(
            slice(0, 0),
            vec![0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 1, 1, 1, 0]
        );
        assert_eq!(
            slice(1, 0),
            vec![0, 1, 0, 0, 1, 0, 1, 1, 0, 1, 0, 0, 0, 1, 0, 0]
        );
        assert_eq!(
            slice(3, 0),
            vec![1, 1, 1, 0, 1, 1, 1, 0, 1, 1, 1, 0, 0, 0, 0, 1]
        );
    }

    #[test]
    fn quaternion_first_row() {
        let q16 = Sequence::from(
            parse_quaternion_sequence("1,k,1,-k,-i,-k,i,-k,-1,k,-1,-k,i,-k,-i,-k").unwrap(),
        );
        let block = SequenceBlock::new(vec![
            q16.clone(),
            q16.decimate(3).unwrap(),
            q16.rotate_right(2),
            q16.clone(),
        ])
        .unwrap();
        let s = construct_nd(&ConstructionParams::new(q16, block, 0, 2).unwrap()).unwrap();
        let row: Vec<String> = (0..16)
            .map(|i| s.quaternion_at(&[0, i]).unwrap().to_string())
            .collect();
        assert_eq!(row.join(","), "1,k,1,-k,-i,-k,i,-k,-1,k,-1,-k,i,-k,-i,-k");
    }

    #[test]
    fn k_is_reduced_mod_m() {
        let (f, block) = binary_block();
        let a = construct_nd(&ConstructionParams::new(f.clone(), block.clone(), 1, 3).unwrap())
            .unwrap();
        let b = construct_nd(&ConstructionParams::new(f, block, 5, 3).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn parameter_validation() {
        let (f, block) = binary_block();
        assert!(matches!(
            ConstructionParams::new(f.clone(), block.clone(), 0, 1),
            Err(Error::InvalidParameter(_))
        ));
        let f3 = Sequence::from(frank(3).unwrap());
        assert!(matches!(
            ConstructionParams::new(f3, block.clone(), 0, 2),
            Err(Error::DomainMismatch(_))
        ));
        let q = Sequence::from(parse_quaternion_sequence("1,k,1,-k").unwrap());
        assert!(matches!(
            ConstructionParams::new(q, block, 0, 2),
            Err(Error::DomainMismatch(_))
        ));
        let odd = Sequence::from(RootSequence::new(2, vec![0, 0, 1]).unwrap());
        let odd_block = SequenceBlock::new(vec![f.clone(), f.clone()]).unwrap();
        assert!(matches!(
            ConstructionParams::new(odd, odd_block, 0, 2),
            Err(Error::InvalidDivisor { .. })
        ));
    }

    #[test]
    fn strict_mode_rejects_non_perfect_inputs() {
        let (f, _) = binary_block();
        let constant = Sequence::from(RootSequence::new(2, vec![0, 0, 0, 0]).unwrap());
        let block = SequenceBlock::new(vec![f.clone(), f.clone()]).unwrap();
        let params = ConstructionParams::new(constant.clone(), block, 0, 2).unwrap();
        assert!(construct_nd(&params).is_ok());
        assert!(matches!(
            construct_nd(&params.clone().strict(true)),
            Err(Error::Precondition(_))
        ));

        let bad_block = SequenceBlock::new(vec![f.clone(), constant]).unwrap();
        let params = ConstructionParams::new(f, bad_block, 0, 2)
            .unwrap()
            .strict(true);
        match construct_nd(&params) {
            Err(Error::Precondition(msg)) => assert!(msg.contains("c(1)")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn family_members_follow_ks() {
        let (f, block) = binary_block();
        let family = construct_family(&f, &block, &[], 3, true).unwrap();
        assert!(family.is_empty());
        let family = construct_family(&f, &block, &[2, 2], 3, true).unwrap();
        assert_eq!(family.members[0], family.members[1]);
        assert_eq!(family.d, Some(2));
    }

    #[test]
    fn array_validation() {
        assert!(PerfectArray::new(
            vec![2, 2],
            ArrayData::Roots {
                order: 2,
                exponents: vec![0, 1, 1]
            }
        )
        .is_err());
        assert!(PerfectArray::new(
            vec![1, 1],
            ArrayData::Roots {
                order: 2,
                exponents: vec![2]
            }
        )
        .is_err());
        assert!(PerfectArray::new(
            vec![1],
            ArrayData::Quaternion(vec![Quaternion::new(1, 1, 0, 0)])
        )
        .is_err());
        assert!(PerfectArray::new(vec![], ArrayData::Quaternion(vec![])).is_err());
    }
}
