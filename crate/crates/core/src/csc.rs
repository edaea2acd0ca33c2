//! Countable second-countable spaces given by a base with a refinement
//! function, effectively open sets, and the correspondence between bad
//! sequences of a quasi-order and strictly ascending chains of open sets in
//! its Alexandroff topology.

use std::fmt::Debug;

use serde::Serialize;

use crate::code::StagedCode;
use crate::finset::FinSet;
use crate::order::{in_closure, BadPrefix, Direction, OrderError, QuasiOrder};

/// A base `(U_i)` with `x ∈ U_{k(x,i,j)} ⊆ U_i ∩ U_j` whenever `x ∈ U_i ∩ U_j`.
pub trait CscSpace {
    type Point: Clone + Debug;
    type Index: Clone + Debug;

    fn member(&self, x: &Self::Point, i: &Self::Index) -> bool;

    /// `k(x, i, j)`.
    fn refine(&self, x: &Self::Point, i: &Self::Index, j: &Self::Index) -> Self::Index;

    /// Some index whose basic set contains `x`.
    fn cover(&self, x: &Self::Point) -> Self::Index;
}

/// Basic open sets `U_q = q↑`, with `k(x, p, r) = x`.
#[derive(Clone, Debug)]
pub struct Alexandroff<O>(pub O);

impl<O: QuasiOrder> CscSpace for Alexandroff<O> {
    type Point = O::Elem;
    type Index = O::Elem;

    fn member(&self, x: &O::Elem, i: &O::Elem) -> bool {
        self.0.leq(i, x)
    }

    fn refine(&self, x: &O::Elem, _i: &O::Elem, _j: &O::Elem) -> O::Elem {
        x.clone()
    }

    fn cover(&self, x: &O::Elem) -> O::Elem {
        x.clone()
    }
}

/// Basic open sets `V_i = Q ∖ i↓` for finite `i`, with `k(x, i, j) = i ∪ j`.
/// The empty index codes the whole space.
#[derive(Clone, Debug)]
pub struct Upper<O>(pub O);

impl<O: QuasiOrder> CscSpace for Upper<O> {
    type Point = O::Elem;
    type Index = FinSet<O::Elem>;

    fn member(&self, x: &O::Elem, i: &FinSet<O::Elem>) -> bool {
        !in_closure(&self.0, Direction::Down, i, x)
    }

    fn refine(&self, _x: &O::Elem, i: &FinSet<O::Elem>, j: &FinSet<O::Elem>) -> FinSet<O::Elem> {
        i.union(j)
    }

    fn cover(&self, _x: &O::Elem) -> FinSet<O::Elem> {
        FinSet::new()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseViolation<P, I> {
    Uncovered { point: P },
    Refinement { point: P, left: I, right: I },
    RefinementTooLarge { point: P, left: I, right: I, outside: P },
}

/// Checks coverage and the refinement property on all sampled points and
/// index pairs.
pub fn check_base<S: CscSpace>(
    space: &S,
    points: &[S::Point],
    indices: &[S::Index],
) -> Result<(), BaseViolation<S::Point, S::Index>> {
    for x in points {
        if !space.member(x, &space.cover(x)) {
            return Err(BaseViolation::Uncovered { point: x.clone() });
        }
        for i in indices.iter().filter(|i| space.member(x, i)) {
            for j in indices.iter().filter(|j| space.member(x, j)) {
                let k = space.refine(x, i, j);
                if !space.member(x, &k) {
                    return Err(BaseViolation::Refinement {
                        point: x.clone(),
                        left: i.clone(),
                        right: j.clone(),
                    });
                }
                if let Some(y) = points
                    .iter()
                    .find(|y| space.member(y, &k) && !(space.member(y, i) && space.member(y, j)))
                {
                    return Err(BaseViolation::RefinementTooLarge {
                        point: x.clone(),
                        left: i.clone(),
                        right: j.clone(),
                        outside: y.clone(),
                    });
                }
            }
        }
    }
    Ok(())
}

/// `G_h = ⋃_n ⋃_{i ∈ h(n)} U_i`.
pub type OpenCode<I> = StagedCode<I>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OpenVerdict<I> {
    In {
        stage: u64,
        index: I,
    },
    /// No witness among stages below the horizon. Exact when the code is
    /// finitely presented and the horizon covers its listed stages.
    NotFoundUpTo {
        horizon: u64,
        exact: bool,
    },
}

impl<I> OpenVerdict<I> {
    pub fn is_in(&self) -> bool {
        matches!(self, OpenVerdict::In { .. })
    }

    /// Certainly outside.
    pub fn is_out(&self) -> bool {
        matches!(self, OpenVerdict::NotFoundUpTo { exact: true, .. })
    }
}

pub fn eff_open_member<S: CscSpace>(
    space: &S,
    h: &OpenCode<S::Index>,
    x: &S::Point,
    horizon: u64,
) -> OpenVerdict<S::Index> {
    let decisive = h.decisive_len();
    let bound = match decisive {
        Some(len) => horizon.min(len),
        None => horizon,
    };
    for stage in 0..bound {
        if let Some(index) = h.stage(stage).into_iter().find(|i| space.member(x, i)) {
            return OpenVerdict::In { stage, index };
        }
    }
    OpenVerdict::NotFoundUpTo {
        horizon,
        exact: decisive.is_some_and(|len| horizon >= len),
    }
}

/// A sequence of open codes, position by position.
pub type ChainCode<I> = Vec<OpenCode<I>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RefinementCounterexample<E> {
    pub point: E,
    pub index: FinSet<E>,
}

/// Checks that the Alexandroff topology refines the upper topology on a
/// sample: with `f(i, n) = {n}` when `n ∉ i↓` (and empty otherwise),
/// `x ∈ V_i` holds iff some sampled `n` has an index in `f(i, n)` whose
/// basic Alexandroff set contains `x`. Every subset of the sample is tried
/// as `i`.
pub fn refinement_check<O: QuasiOrder>(
    o: &O,
    sample: &[O::Elem],
) -> Result<(), RefinementCounterexample<O::Elem>> {
    let upper = Upper(o);
    let alex = Alexandroff(o);
    let f = |i: &FinSet<O::Elem>, n: &O::Elem| -> Vec<O::Elem> {
        if in_closure(o, Direction::Down, i, n) {
            Vec::new()
        } else {
            vec![n.clone()]
        }
    };
    for index in crate::powerspace::subsets_upto(sample, sample.len()) {
        for x in sample {
            let lhs = upper.member(x, &index);
            let rhs = sample
                .iter()
                .any(|n| f(&index, n).iter().any(|q| alex.member(x, q)));
            if lhs != rhs {
                return Err(RefinementCounterexample {
                    point: x.clone(),
                    index,
                });
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AscendingStep<E> {
    pub position: usize,
    pub separator: E,
    pub in_after: OpenVerdict<E>,
    pub out_before: OpenVerdict<E>,
}

impl<E> AscendingStep<E> {
    pub fn strict(&self) -> bool {
        self.in_after.is_in() && self.out_before.is_out()
    }
}

#[derive(Clone, Debug)]
pub struct AscendingChain<E> {
    pub chain: ChainCode<E>,
    pub steps: Vec<AscendingStep<E>>,
}

/// `G_n = {q_i : i < n}↑` in the Alexandroff topology, coded by
/// `h(i) = {q_i}` for `i < n`, for `n = 0..=len`. The step from `G_n` to
/// `G_{n+1}` is separated by `q_n`.
pub fn ascending_from_bad<O: QuasiOrder>(
    o: &O,
    bad: &[O::Elem],
) -> Result<AscendingChain<O::Elem>, OrderError> {
    let bad = BadPrefix::new(o, bad.to_vec())?.into_vec();
    let chain: ChainCode<O::Elem> = (0..=bad.len())
        .map(|n| StagedCode::listed(bad[..n].iter().map(|q| vec![q.clone()]).collect()))
        .collect();
    let space = Alexandroff(o);
    let steps = bad
        .iter()
        .enumerate()
        .map(|(n, q)| {
            let horizon = n as u64 + 1;
            AscendingStep {
                position: n,
                separator: q.clone(),
                in_after: eff_open_member(&space, &chain[n + 1], q, horizon),
                out_before: eff_open_member(&space, &chain[n], q, horizon),
            }
        })
        .collect();
    Ok(AscendingChain { chain, steps })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Located<E> {
    pub element: E,
    pub position: usize,
    pub stage: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AscendingSearch<E> {
    Found {
        bad: BadPrefix<E>,
        located: Vec<Located<E>>,
    },
    NotFoundWithinBudget {
        tests: u64,
        partial: Vec<E>,
    },
}

impl<E> AscendingSearch<E> {
    pub fn found(self) -> Option<BadPrefix<E>> {
        match self {
            AscendingSearch::Found { bad, .. } => Some(bad),
            _ => None,
        }
    }
}

/// Reads a bad sequence off an ascending chain of Alexandroff-open sets.
///
/// The `k`-th element is searched at positions `n_k` past the position of
/// the previous one, over triples (element, position, stage) dovetailed by
/// their largest coordinate, for an element lying in `G_{n_k}` that is above
/// none of the elements already chosen. A strict step `G_n ⊊ G_{n+1}` always
/// offers one, since the earlier choices lie in `G_n`, which is upward
/// closed. Positions are capped so that every later element still has a
/// position of its own; a chain of `len + 1` positions therefore forces
/// `n_k = k + 1`.
///
/// Elements above a chosen one are never tested again. Stages past the
/// listed part of a finitely presented code add nothing and are skipped. The
/// budget counts membership tests against single indices, plus one per
/// bound.
pub fn bad_from_ascending<O: QuasiOrder>(
    o: &O,
    chain: &ChainCode<O::Elem>,
    len: usize,
    budget: u64,
) -> Result<AscendingSearch<O::Elem>, OrderError> {
    let space = Alexandroff(o);
    let mut chosen: Vec<O::Elem> = Vec::new();
    let mut located = Vec::new();
    let mut elems: Vec<O::Elem> = Vec::new();
    let mut dead: Vec<bool> = Vec::new();
    let mut carrier = o.elements();
    let mut carrier_done = false;
    let mut tests = 0u64;
    let stage_limit: Vec<Option<u64>> = chain.iter().map(|h| h.decisive_len()).collect();
    let mut last = 0usize;
    let give_up = |tests, chosen| {
        Ok(AscendingSearch::NotFoundWithinBudget {
            tests,
            partial: chosen,
        })
    };
    'pick: while chosen.len() < len {
        let needed = len - chosen.len();
        let lo = last + 1;
        let Some(hi) = chain.len().checked_sub(needed).filter(|&hi| hi >= lo) else {
            return give_up(tests, chosen);
        };
        let width = (hi - lo) as u64;
        let mut bound = 0u64;
        loop {
            while !carrier_done && elems.len() as u64 <= bound {
                match carrier.next() {
                    Some(e) => {
                        elems.push(e);
                        dead.push(false);
                    }
                    None => carrier_done = true,
                }
            }
            let stages_done = stage_limit[lo..=hi].iter().all(|l| l.is_some_and(|l| bound >= l));
            if carrier_done && bound >= elems.len() as u64 && bound > width && stages_done {
                return give_up(tests, chosen);
            }
            tests += 1;
            if tests > budget {
                return give_up(tests, chosen);
            }
            // past every position and listed stage, only the newest element
            // forms new triples
            let first_e = if bound > width && stages_done { bound } else { 0 };
            for e in first_e..(bound + 1).min(elems.len() as u64) {
                if dead[e as usize] {
                    continue;
                }
                for j in 0..=bound.min(width) {
                    let p = lo + j as usize;
                    let t_end = stage_limit[p].map_or(bound + 1, |l| l.min(bound + 1));
                    for t in 0..t_end {
                        if e.max(j).max(t) != bound {
                            continue;
                        }
                        let q = &elems[e as usize];
                        let mut hit = false;
                        for i in chain[p].stage(t).iter() {
                            tests += 1;
                            if tests > budget {
                                return give_up(tests, chosen);
                            }
                            if space.member(q, i) {
                                hit = true;
                                break;
                            }
                        }
                        if !hit {
                            continue;
                        }
                        dead[e as usize] = true;
                        if chosen.iter().any(|c| o.leq(c, q)) {
                            break;
                        }
                        chosen.push(q.clone());
                        located.push(Located {
                            element: q.clone(),
                            position: p,
                            stage: t,
                        });
                        last = p;
                        continue 'pick;
                    }
                    if dead[e as usize] {
                        break;
                    }
                }
            }
            bound += 1;
        }
    }
    Ok(AscendingSearch::Found {
        bad: BadPrefix::new(o, chosen)?,
        located,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepStatus<P> {
    /// `witness ∈ G_{n+1}`; `exact` when `witness ∉ G_n` is certain rather
    /// than only unseen up to the horizon.
    Grew { witness: P, exact: bool },
    /// No sampled point grew the set; says nothing about unsampled points.
    NoChangeOnSample,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepReport<P> {
    pub position: usize,
    pub status: StepStatus<P>,
}

pub fn stabilization_scan<S: CscSpace>(
    space: &S,
    chain: &ChainCode<S::Index>,
    positions: usize,
    sample: &[S::Point],
    horizon: u64,
) -> Vec<StepReport<S::Point>> {
    (0..positions.min(chain.len().saturating_sub(1)))
        .map(|n| {
            let status = sample
                .iter()
                .find_map(|x| {
                    if !eff_open_member(space, &chain[n + 1], x, horizon).is_in() {
                        return None;
                    }
                    match eff_open_member(space, &chain[n], x, horizon) {
                        OpenVerdict::In { .. } => None,
                        OpenVerdict::NotFoundUpTo { exact, .. } => Some(StepStatus::Grew {
                            witness: x.clone(),
                            exact,
                        }),
                    }
                })
                .unwrap_or(StepStatus::NoChangeOnSample);
            StepReport { position: n, status }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("stages below {horizon} do not cover the carrier")]
pub struct NotCoveredUpTo {
    pub horizon: u64,
}

/// The least `N` such that stages below `N` cover every point.
pub fn compact_cover_prefix<S: CscSpace>(
    space: &S,
    points: &[S::Point],
    h: &OpenCode<S::Index>,
    horizon: u64,
) -> Result<u64, NotCoveredUpTo> {
    let mut uncovered: Vec<&S::Point> = points.iter().collect();
    for n in 0..horizon {
        if uncovered.is_empty() {
            return Ok(n);
        }
        let stage = h.stage(n);
        uncovered.retain(|x| !stage.iter().any(|i| space.member(x, i)));
    }
    if uncovered.is_empty() {
        Ok(horizon)
    } else {
        Err(NotCoveredUpTo { horizon })
    }
}
