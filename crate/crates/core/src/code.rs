//! Stagewise enumerations of finite index sets, used to code effectively open
//! and effectively closed sets.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

type StageFn<I> = Arc<dyn Fn(u64) -> Vec<I> + Send + Sync>;

/// A function from stages to finite lists of basic indices.
///
/// A listed code is finitely presented: beyond the listed stages it is either
/// empty or repeats its last stage, and in both cases scanning the listed
/// stages decides every membership question exactly. Streams are arbitrary
/// and can only be scanned up to a horizon.
#[derive(Clone)]
pub enum StagedCode<I> {
    Listed {
        stages: Vec<Vec<I>>,
        repeat_last: bool,
    },
    Stream(StageFn<I>),
    /// Stagewise union of the index streams, coding the intersection of
    /// closed sets (or the union of open sets).
    Union(Vec<StagedCode<I>>),
}

impl<I: Clone> StagedCode<I> {
    /// The code whose every stage is empty.
    pub fn empty() -> Self {
        Self::listed(Vec::new())
    }

    /// Listed stages followed by an empty tail.
    pub fn listed(stages: Vec<Vec<I>>) -> Self {
        StagedCode::Listed {
            stages,
            repeat_last: false,
        }
    }

    pub fn stream(f: impl Fn(u64) -> Vec<I> + Send + Sync + 'static) -> Self {
        StagedCode::Stream(Arc::new(f))
    }

    pub fn union(codes: Vec<StagedCode<I>>) -> Self {
        StagedCode::Union(codes)
    }

    pub fn stage(&self, n: u64) -> Vec<I> {
        match self {
            StagedCode::Listed { stages, repeat_last } => match stages.get(n as usize) {
                Some(s) => s.clone(),
                None if *repeat_last => stages.last().cloned().unwrap_or_default(),
                None => Vec::new(),
            },
            StagedCode::Stream(f) => f(n),
            StagedCode::Union(codes) => codes.iter().flat_map(|c| c.stage(n)).collect(),
        }
    }

    /// Number of stages that must be scanned to decide membership exactly,
    /// or `None` for codes only scannable up to a horizon.
    pub fn decisive_len(&self) -> Option<u64> {
        match self {
            StagedCode::Listed { stages, .. } => Some(stages.len() as u64),
            StagedCode::Stream(_) => None,
            StagedCode::Union(codes) => codes
                .iter()
                .map(|c| c.decisive_len())
                .try_fold(0, |acc, l| l.map(|l| acc.max(l))),
        }
    }

    /// The listed form, when the code is finitely presented.
    pub fn to_json(&self) -> Option<StagedCodeJson<I>> {
        let len = self.decisive_len()?;
        let stages = (0..len).map(|n| self.stage(n)).collect();
        let repeat_last = match self {
            StagedCode::Listed { repeat_last, .. } => *repeat_last,
            _ => false,
        };
        Some(StagedCodeJson {
            stages,
            tail: (!repeat_last).then_some(Tail::Empty),
        })
    }
}

impl<I> fmt::Debug for StagedCode<I>
where
    I: fmt::Debug,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StagedCode::Listed { stages, repeat_last } => f
                .debug_struct("Listed")
                .field("stages", stages)
                .field("repeat_last", repeat_last)
                .finish(),
            StagedCode::Stream(_) => f.write_str("Stream(..)"),
            StagedCode::Union(codes) => f.debug_tuple("Union").field(codes).finish(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tail {
    Empty,
}

/// JSON form `{"stages": [[i, ..], ..], "tail": "empty"}`. Without the tail
/// marker the last stage repeats forever.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StagedCodeJson<I> {
    pub stages: Vec<Vec<I>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<Tail>,
}

impl<I> From<StagedCodeJson<I>> for StagedCode<I> {
    fn from(j: StagedCodeJson<I>) -> Self {
        StagedCode::Listed {
            stages: j.stages,
            repeat_last: j.tail.is_none(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn listed_tails() {
        let empty_tail: StagedCode<u64> =
            serde_json::from_str::<StagedCodeJson<u64>>(r#"{"stages":[[1],[2,3]],"tail":"empty"}"#)
                .unwrap()
                .into();
        assert_eq!(empty_tail.stage(1), vec![2, 3]);
        assert!(empty_tail.stage(7).is_empty());
        let constant: StagedCode<u64> =
            serde_json::from_str::<StagedCodeJson<u64>>(r#"{"stages":[[1],[4]]}"#)
                .unwrap()
                .into();
        assert_eq!(constant.stage(9), vec![4]);
        assert_eq!(constant.decisive_len(), Some(2));
    }

    #[test]
    fn unions_interleave_stagewise() {
        let a = StagedCode::listed(vec![vec![1u64], vec![2]]);
        let b = StagedCode::stream(|n| vec![10 + n]);
        let u = StagedCode::union(vec![a.clone(), b]);
        assert_eq!(u.stage(1), vec![2, 11]);
        assert_eq!(u.decisive_len(), None);
        assert_eq!(
            StagedCode::union(vec![a, StagedCode::empty()]).decisive_len(),
            Some(2)
        );
    }

    #[test]
    fn json_roundtrip() {
        let c = StagedCode::listed(vec![vec![vec![1u64, 2]], vec![]]);
        let j = serde_json::to_string(&c.to_json().unwrap()).unwrap();
        assert_eq!(j, r#"{"stages":[[[1,2]],[]],"tail":"empty"}"#);
        assert!(StagedCode::<u64>::stream(|_| vec![]).to_json().is_none());
    }
}
