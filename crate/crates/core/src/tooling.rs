//! Job configuration shared by the command line front end.
//!
//! Blocks are written as transform pipelines over the base sequence, one
//! pipeline per block entry: `"id,dec:3"` or `"dec:2+rot:1,id"`. A pipeline
//! applies its steps left to right.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::construction::{construct_family, ArrayFamily};
use crate::error::{Error, Result};
use crate::formats;
use crate::presets;
use crate::sequences::{frank, Sequence, SequenceBlock};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transform {
    Identity,
    Decimate(usize),
    RotateRight(i64),
}

impl Transform {
    pub fn apply(self, seq: &Sequence) -> Result<Sequence> {
        match self {
            Transform::Identity => Ok(seq.clone()),
            Transform::Decimate(t) => seq.decimate(t),
            Transform::RotateRight(s) => Ok(seq.rotate_right(s)),
        }
    }
}

impl FromStr for Transform {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let invalid = || {
            Error::InvalidParameter(format!(
                "unknown block transform `{s}` (expected id, dec:<t> or rot:<s>)"
            ))
        };
        if s == "id" {
            return Ok(Transform::Identity);
        }
        let (name, arg) = s.split_once(':').ok_or_else(invalid)?;
        match name.trim() {
            "dec" => arg
                .trim()
                .parse()
                .map(Transform::Decimate)
                .map_err(|_| invalid()),
            "rot" => arg
                .trim()
                .parse()
                .map(Transform::RotateRight)
                .map_err(|_| invalid()),
            _ => Err(invalid()),
        }
    }
}

/// One block entry: transforms applied in order to the base sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pipeline(pub Vec<Transform>);

impl Pipeline {
    pub fn apply(&self, base: &Sequence) -> Result<Sequence> {
        self.0.iter().try_fold(base.clone(), |seq, t| t.apply(&seq))
    }
}

/// Parses `"id,dec:3,rot:2"` into one pipeline per comma separated entry.
pub fn parse_block_spec(spec: &str) -> Result<Vec<Pipeline>> {
    if spec.trim().is_empty() {
        return Err(Error::InvalidParameter("empty block specification".into()));
    }
    spec.split(',')
        .map(|entry| {
            entry
                .split('+')
                .map(str::parse)
                .collect::<Result<Vec<_>>>()
                .map(Pipeline)
        })
        .collect()
}

/// Parses `"0"`, `"1..9"` (inclusive) or `"1,4,7"`.
pub fn parse_k_spec(spec: &str) -> Result<Vec<i64>> {
    let invalid = || Error::InvalidParameter(format!("invalid k specification `{spec}`"));
    let spec = spec.trim();
    if let Some((lo, hi)) = spec.split_once("..") {
        let hi = hi.strip_prefix('=').unwrap_or(hi);
        let lo: i64 = lo.trim().parse().map_err(|_| invalid())?;
        let hi: i64 = hi.trim().parse().map_err(|_| invalid())?;
        if hi < lo {
            return Err(invalid());
        }
        return Ok((lo..=hi).collect());
    }
    spec.split(',')
        .map(|k| k.trim().parse().map_err(|_| invalid()))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BaseSpec {
    Frank(u32),
    /// The bundled 16-entry quaternion sequence.
    Q16,
    File(PathBuf),
}

impl BaseSpec {
    pub fn load(&self) -> Result<Sequence> {
        match self {
            BaseSpec::Frank(r) => Ok(Sequence::Roots(frank(*r)?)),
            BaseSpec::Q16 => Ok(Sequence::Quaternion(presets::q16())),
            BaseSpec::File(path) => formats::read_sequence(path),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockSpec {
    Transforms(Vec<Pipeline>),
    Files(Vec<PathBuf>),
}

impl BlockSpec {
    pub fn resolve(&self, base: &Sequence) -> Result<SequenceBlock> {
        let sequences = match self {
            BlockSpec::Transforms(pipelines) => pipelines
                .iter()
                .map(|p| p.apply(base))
                .collect::<Result<Vec<_>>>()?,
            BlockSpec::Files(paths) => paths
                .iter()
                .map(formats::read_sequence)
                .collect::<Result<Vec<_>>>()?,
        };
        SequenceBlock::new(sequences)
    }
}

/// Everything `gen` needs to produce a family of array files.
#[derive(Debug, Clone, PartialEq)]
pub struct JobConfig {
    pub base: BaseSpec,
    pub block: BlockSpec,
    pub ks: Vec<i64>,
    pub dims: usize,
    pub tol: f64,
    pub strict: bool,
    pub out: PathBuf,
}

impl JobConfig {
    pub fn build(&self) -> Result<(Sequence, SequenceBlock, ArrayFamily)> {
        let base = self.base.load()?;
        let block = self.block.resolve(&base)?;
        if self.strict {
            crate::construction::ConstructionParams::new(
                base.clone(),
                block.clone(),
                0,
                self.dims,
            )?
            .with_tolerance(self.tol)
            .check_preconditions()?;
        }
        let family = construct_family(&base, &block, &self.ks, self.dims, false)?;
        Ok((base, block, family))
    }

    /// Output path for member `k`. A single member may be written straight
    /// to a `.json` path; otherwise `out` is a directory.
    pub fn output_path(&self, k: i64) -> PathBuf {
        if self.ks.len() == 1 && self.out.extension().is_some_and(|e| e == "json") {
            self.out.clone()
        } else {
            self.out.join(format!("array_k{k}.json"))
        }
    }

    pub fn output_dir(&self) -> Option<&Path> {
        if self.ks.len() == 1 && self.out.extension().is_some_and(|e| e == "json") {
            self.out.parent()
        } else {
            Some(&self.out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_specs() {
        let p = parse_block_spec("id,dec:3").unwrap();
        assert_eq!(
            p,
            vec![
                Pipeline(vec![Transform::Identity]),
                Pipeline(vec![Transform::Decimate(3)])
            ]
        );
        let p = parse_block_spec(" dec:2 + rot:-1 ,id").unwrap();
        assert_eq!(
            p[0],
            Pipeline(vec![Transform::Decimate(2), Transform::RotateRight(-1)])
        );
        assert!(parse_block_spec("").is_err());
        assert!(parse_block_spec("dec:x").is_err());
        assert!(parse_block_spec("flip").is_err());
    }

    #[test]
    fn k_specs() {
        assert_eq!(parse_k_spec("0").unwrap(), vec![0]);
        assert_eq!(parse_k_spec("1..9").unwrap(), (1..=9).collect::<Vec<_>>());
        assert_eq!(parse_k_spec("1..=3").unwrap(), vec![1, 2, 3]);
        assert_eq!(parse_k_spec("1, 4,7").unwrap(), vec![1, 4, 7]);
        assert!(parse_k_spec("3..1").is_err());
        assert!(parse_k_spec("a").is_err());
    }

    #[test]
    fn pipelines_apply_in_order() {
        let base = Sequence::from(frank(2).unwrap());
        let seq = Pipeline(vec![Transform::Decimate(3), Transform::RotateRight(1)])
            .apply(&base)
            .unwrap();
        assert_eq!(seq, base.decimate(3).unwrap().rotate_right(1));
    }

    #[test]
    fn output_paths() {
        let mut job = JobConfig {
            base: BaseSpec::Frank(2),
            block: BlockSpec::Transforms(parse_block_spec("id,dec:3").unwrap()),
            ks: vec![0],
            dims: 4,
            tol: 1e-5,
            strict: true,
            out: PathBuf::from("out/a.json"),
        };
        assert_eq!(job.output_path(0), PathBuf::from("out/a.json"));
        job.ks = vec![1, 2];
        assert_eq!(
            job.output_path(2),
            PathBuf::from("out/a.json/array_k2.json")
        );
        job.out = PathBuf::from("fam");
        assert_eq!(job.output_path(1), PathBuf::from("fam/array_k1.json"));
    }
}
