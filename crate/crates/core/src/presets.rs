//! The worked examples: a binary 4×4×4×4 array, a 16×16 quaternion array
//! and a family of nine ternary 9×9×9×9 arrays.

use std::sync::OnceLock;

use crate::construction::{
    construct_family, construct_nd, ArrayFamily, ConstructionParams, PerfectArray,
};
use crate::error::Result;
use crate::formats;
use crate::sequences::{frank, QuaternionSequence, Sequence, SequenceBlock};

const Q16_JSON: &str = include_str!("../data/q16.json");

/// Perfect quaternion sequence of length 16 with the AOP for divisor 4.
pub fn q16() -> QuaternionSequence {
    static Q16: OnceLock<QuaternionSequence> = OnceLock::new();
    Q16.get_or_init(|| match formats::sequence_from_json(Q16_JSON) {
        Ok(Sequence::Quaternion(q)) => q,
        other => panic!("bundled q16 asset is corrupt: {other:?}"),
    })
    .clone()
}

/// Base `frank(2)`, block `{F, decimate(F, 3)}`, `k = 0`, four dimensions.
pub fn binary_params() -> ConstructionParams {
    let f = Sequence::from(frank(2).expect("r > 0"));
    let block = SequenceBlock::new(vec![f.clone(), f.decimate(3).expect("gcd(3, 4) = 1")])
        .expect("valid block");
    ConstructionParams::new(f, block, 0, 4).expect("valid params")
}

pub fn binary_array() -> Result<PerfectArray> {
    construct_nd(&binary_params().strict(true))
}

/// Base `q16`, block `{Q, decimate(Q, 3), rotate_right(Q, 2), Q}`, `k = 0`, two dimensions.
pub fn quaternion_params() -> ConstructionParams {
    let q = Sequence::from(q16());
    let block = SequenceBlock::new(vec![
        q.clone(),
        q.decimate(3).expect("gcd(3, 16) = 1"),
        q.rotate_right(2),
        q.clone(),
    ])
    .expect("valid block");
    ConstructionParams::new(q, block, 0, 2).expect("valid params")
}

pub fn quaternion_array() -> Result<PerfectArray> {
    construct_nd(&quaternion_params().strict(true))
}

/// Base `frank(3)` and block `{decimate(F, 2), decimate(F, 5), decimate(F, 7)}`.
pub fn ternary_inputs() -> (Sequence, SequenceBlock) {
    let f = Sequence::from(frank(3).expect("r > 0"));
    let block = SequenceBlock::new(
        [2, 5, 7]
            .iter()
            .map(|&t| f.decimate(t).expect("t coprime to 9"))
            .collect(),
    )
    .expect("valid block");
    (f, block)
}

/// The nine-member family for `k = 1..=9` in four dimensions.
pub fn ternary_family() -> Result<ArrayFamily> {
    ternary_family_for(&(1..=9).collect::<Vec<_>>())
}

pub fn ternary_family_for(ks: &[i64]) -> Result<ArrayFamily> {
    let (base, block) = ternary_inputs();
    construct_family(&base, &block, ks, 4, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::parse_quaternion_sequence;

    #[test]
    fn bundled_q16_matches_token_form() {
        let tokens =
            parse_quaternion_sequence("1,k,1,-k,-i,-k,i,-k,-1,k,-1,-k,i,-k,-i,-k").unwrap();
        assert_eq!(q16(), tokens);
    }

    #[test]
    fn examples_build_in_strict_mode() {
        assert_eq!(binary_array().unwrap().dims(), &[4, 4, 4, 4]);
        assert_eq!(quaternion_array().unwrap().dims(), &[16, 16]);
        let family = ternary_family_for(&[1, 2]).unwrap();
        assert_eq!(family.members[1].array.dims(), &[9, 9, 9, 9]);
    }
}
