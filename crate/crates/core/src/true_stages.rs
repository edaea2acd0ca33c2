//! True stages of injections given as a finite table with an affine tail.

use serde::{Deserialize, Serialize};

use crate::finset::FinSet;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum InjectionError {
    #[error("value {value} occurs twice in the table")]
    Duplicate { value: u64 },
    #[error("tail offset {tail_offset} must exceed every table value (max {max})")]
    TailTooSmall { tail_offset: u64, max: u64 },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInjection {
    table: Vec<u64>,
    tail_offset: u64,
}

/// An injection `f` with `f(k) = table[k]` below the table length and
/// `f(k) = k + tail_offset` beyond it.
///
/// Every tail value exceeds every table value, so a stage can only be made
/// false by a later table entry: truth and range are exactly decidable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawInjection")]
pub struct Injection {
    table: Vec<u64>,
    tail_offset: u64,
}

impl TryFrom<RawInjection> for Injection {
    type Error = InjectionError;
    fn try_from(raw: RawInjection) -> Result<Self, InjectionError> {
        Injection::new(raw.table, raw.tail_offset)
    }
}

/// How stage `s + 1` relates to stage `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StageCase {
    /// Some stage true at `s` (or `s` itself) is not true at `s + 1`; `n0`
    /// is the least such.
    Reset { n0: u64 },
    /// `T_{s+1} = T_s ∪ {s}`.
    Extend,
}

/// Verdict of a bounded truth test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Truth {
    /// True, exactly.
    True,
    /// No witness up to the horizon, which did not cover the table.
    TrueUpTo(u64),
    /// The least `k > n` with `f(k) < f(n)`.
    FalseWithWitness(u64),
}

impl Injection {
    pub fn new(table: Vec<u64>, tail_offset: u64) -> Result<Self, InjectionError> {
        let mut sorted = table.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(InjectionError::Duplicate { value: w[0] });
        }
        if let Some(&max) = sorted.last() {
            if tail_offset <= max {
                return Err(InjectionError::TailTooSmall { tail_offset, max });
            }
        }
        Ok(Injection { table, tail_offset })
    }

    pub fn identity() -> Self {
        Injection {
            table: Vec::new(),
            tail_offset: 0,
        }
    }

    pub fn table(&self) -> &[u64] {
        &self.table
    }

    pub fn tail_offset(&self) -> u64 {
        self.tail_offset
    }

    fn len(&self) -> u64 {
        self.table.len() as u64
    }

    pub fn eval(&self, k: u64) -> u64 {
        match self.table.get(k as usize) {
            Some(&v) => v,
            None => k + self.tail_offset,
        }
    }

    /// `n < s` and `f(n) < f(k)` for every `k` in `(n, s]`.
    pub fn is_true_at(&self, n: u64, s: u64) -> bool {
        let fnv = self.eval(n);
        n < s && (n + 1..=s.min(self.len())).all(|k| fnv < self.eval(k))
    }

    /// `T_s`, via suffix minima over `(n, s]`.
    pub fn true_set_at(&self, s: u64) -> FinSet<u64> {
        let mut out = Vec::new();
        let mut min_after = u64::MAX;
        for n in (0..s).rev() {
            min_after = min_after.min(self.eval(n + 1));
            if self.eval(n) < min_after {
                out.push(n);
            }
        }
        out.into()
    }

    /// Scans `k` in `(n, horizon]` for `f(k) < f(n)`.
    pub fn is_true_upto(&self, n: u64, horizon: u64) -> Truth {
        let fnv = self.eval(n);
        match (n + 1..=horizon.min(self.len())).find(|&k| self.eval(k) < fnv) {
            Some(k) => Truth::FalseWithWitness(k),
            // beyond the table every value exceeds every table value
            None if horizon >= self.len() || n >= self.len() => Truth::True,
            None => Truth::TrueUpTo(horizon),
        }
    }

    pub fn is_true(&self, n: u64) -> bool {
        self.is_true_upto(n, self.len()) == Truth::True
    }

    /// Decides `n ∈ range(f)` from true stages: for the first true `m` with
    /// `f(m) > n`, `n` is in the range iff some `k < m` has `f(k) = n`.
    pub fn range_member_decoded(&self, n: u64) -> bool {
        let m = (0..)
            .find(|&m| self.eval(m) > n && self.is_true(m))
            .expect("tail stages are true and unbounded");
        (0..m).any(|k| self.eval(k) == n)
    }

    pub fn range_member_naive(&self, n: u64) -> bool {
        self.table.contains(&n) || n >= self.len() + self.tail_offset
    }

    /// The case of the transition from stage `s` to `s + 1`.
    pub fn stage_case(&self, s: u64) -> StageCase {
        let before = self.true_set_at(s).with(s);
        let after = self.true_set_at(s + 1);
        match before.iter().find(|n| !after.contains(n)) {
            Some(&n0) => StageCase::Reset { n0 },
            None => StageCase::Extend,
        }
    }

    /// `[T_0, .., T_{stages-1}]`.
    pub fn true_set_table(&self, stages: u64) -> Vec<FinSet<u64>> {
        (0..stages).map(|s| self.true_set_at(s)).collect()
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f3() -> Injection {
        Injection::new(vec![2, 0, 1], 3).unwrap()
    }

    fn set(v: &[u64]) -> FinSet<u64> {
        v.iter().copied().collect()
    }

    #[test]
    fn true_sets_of_f3() {
        let f = f3();
        assert_eq!(
            (0..6).map(|k| f.eval(k)).collect::<Vec<_>>(),
            vec![2, 0, 1, 6, 7, 8]
        );
        assert_eq!(f.true_set_at(0), set(&[]));
        assert_eq!(f.true_set_at(1), set(&[]));
        assert_eq!(f.true_set_at(2), set(&[1]));
        assert_eq!(f.true_set_at(3), set(&[1, 2]));
        assert_eq!(f.stage_case(0), StageCase::Reset { n0: 0 });
        assert_eq!(f.stage_case(1), StageCase::Extend);
        assert_eq!(f.stage_case(2), StageCase::Extend);
    }

    #[test]
    fn identity_is_always_extending() {
        let id = Injection::identity();
        assert_eq!(id.true_set_at(4), set(&[0, 1, 2, 3]));
        assert!((0..20).all(|s| id.stage_case(s) == StageCase::Extend));
        assert!((0..20).all(|n| id.is_true(n) && id.range_member_decoded(n)));
    }

    #[test]
    fn truth_verdicts() {
        let f = f3();
        assert_eq!(f.is_true_upto(0, 10), Truth::FalseWithWitness(1));
        assert_eq!(f.is_true_upto(1, 10), Truth::True);
        assert_eq!(
            Injection::new(vec![5, 4, 3, 2], 6).unwrap().is_true_upto(0, 0),
            Truth::TrueUpTo(0)
        );
    }

    #[test]
    fn range_examples() {
        let f = f3();
        assert!(!f.range_member_decoded(4));
        assert!(f.range_member_decoded(1));
        assert!(!f.range_member_naive(4) && f.range_member_naive(6));
    }

    #[test]
    fn validation() {
        assert_eq!(
            Injection::new(vec![1, 1], 5),
            Err(InjectionError::Duplicate { value: 1 })
        );
        assert!(Injection::new(vec![4], 4).is_err());
        assert!(serde_json::from_str::<Injection>(r#"{"table":[2,0,2],"tail_offset":3}"#).is_err());
        let f: Injection = serde_json::from_str(r#"{"table":[2,0,1],"tail_offset":3}"#).unwrap();
        assert_eq!(f, f3());
    }

    pub(crate) fn injection() -> impl Strategy<Value = Injection> {
        (proptest::collection::hash_set(0u64..20, 0..7), 0u64..4).prop_map(|(vals, extra)| {
            let table: Vec<u64> = vals.into_iter().collect();
            let off = table.iter().max().map_or(0, |m| m + 1) + extra;
            Injection::new(table, off).unwrap()
        })
    }

    proptest! {
        #[test]
        fn true_sets_grow_by_at_most_one(f in injection(), s in 0u64..30) {
            let next = f.true_set_at(s + 1);
            prop_assert!(next.is_subset(&f.true_set_at(s).with(s)));
        }

        #[test]
        fn truth_is_anti_monotone(f in injection(), s in 0u64..20, t in 0u64..20) {
            let (s, t) = (s.min(t), s.max(t));
            for n in f.true_set_at(t).iter().filter(|&&n| n < s) {
                prop_assert!(f.true_set_at(s).contains(n));
            }
        }

        #[test]
        fn set_matches_predicate(f in injection(), s in 0u64..20) {
            let t = f.true_set_at(s);
            for n in 0..s + 2 {
                prop_assert_eq!(t.contains(&n), f.is_true_at(n, s));
            }
        }

        #[test]
        fn exact_truth_matches_brute_scan(f in injection(), n in 0u64..15) {
            let horizon = 10 * f.table().len() as u64 + 10;
            let brute = (n + 1..=horizon).find(|&k| f.eval(k) < f.eval(n));
            match f.is_true_upto(n, horizon) {
                Truth::FalseWithWitness(k) => prop_assert_eq!(Some(k), brute),
                Truth::True => prop_assert_eq!(None, brute),
                Truth::TrueUpTo(_) => prop_assert!(false, "horizon covers the table"),
            }
        }

        #[test]
        fn decoded_range_is_range(f in injection()) {
            for n in 0..50 {
                prop_assert_eq!(f.range_member_decoded(n), f.range_member_naive(n));
            }
        }
    }
}
