//! Upper topologies on all subsets of a quasi-order, under the Hoare or Smyth
//! order, with effectively closed set codes.
//!
//! Basic open sets are indexed by finite sets `i`. A point `X` lies in the
//! basic open set `i` when `psi(X, i)` holds: `i ⊆ X↓` in flat mode,
//! `i ∩ X↑ = ∅` in sharp mode. A closed code lists indices stage by stage and
//! denotes the points lying in none of the listed basic open sets.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::code::StagedCode;
use crate::finset::FinSet;
use crate::order::{in_closure, BadPrefix, Direction, OrderError, QuasiOrder};
use crate::powerset::{flat_le, power_order, Mode, Shape, SymbolicSubset};

/// How many carrier elements a witness search inspects on an infinite carrier
/// before giving up with [`PowerSpaceError::UnsupportedShape`].
pub const WITNESS_SCAN: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PowerSpaceError {
    #[error("membership for shape {shape:?} is not decidable here: {reason}")]
    UnsupportedShape { shape: Shape, reason: String },
    #[error("generator {index} is empty")]
    EmptyGenerator { index: usize },
    #[error("a chain needs a bad sequence of length at least 2, got {len}")]
    TooShort { len: usize },
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Order(#[from] OrderError),
}

pub type ClosedCode<E> = StagedCode<FinSet<E>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict<E> {
    /// No listed index excludes the point. Exact when the code is finitely
    /// presented; otherwise only stages below `horizon` were scanned.
    In {
        horizon: u64,
        exact: bool,
    },
    Out {
        stage: u64,
        index: FinSet<E>,
    },
}

impl<E> Verdict<E> {
    pub fn is_in(&self) -> bool {
        matches!(self, Verdict::In { .. })
    }
}

/// `psi(x, i)` for a finite point.
pub fn psi_finite<O: QuasiOrder>(o: &O, mode: Mode, x: &FinSet<O::Elem>, index: &FinSet<O::Elem>) -> bool {
    match mode {
        Mode::Flat => flat_le(o, index, x),
        Mode::Sharp => index.iter().all(|q| !in_closure(o, Direction::Up, x, q)),
    }
}

/// Membership of a finite point in a closed code.
pub fn closed_member_finite<O: QuasiOrder>(
    o: &O,
    mode: Mode,
    code: &ClosedCode<O::Elem>,
    x: &FinSet<O::Elem>,
    horizon: u64,
) -> Verdict<O::Elem> {
    let exact = code.decisive_len();
    let bound = exact.unwrap_or(horizon);
    for stage in 0..bound {
        if let Some(index) = code.stage(stage).into_iter().find(|i| psi_finite(o, mode, x, i)) {
            return Verdict::Out { stage, index };
        }
    }
    Verdict::In {
        horizon: bound,
        exact: exact.is_some(),
    }
}

/// The space of all subsets of `base` with the upper topology of the chosen order.
#[derive(Clone, Debug)]
pub struct PowerSpace<O> {
    base: O,
    mode: Mode,
}

impl<O: QuasiOrder> PowerSpace<O> {
    pub fn new(base: O, mode: Mode) -> Self {
        PowerSpace { base, mode }
    }

    pub fn base(&self) -> &O {
        &self.base
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    fn exists_in_carrier(
        &self,
        shape: Shape,
        pred: impl Fn(&O::Elem) -> bool,
    ) -> Result<bool, PowerSpaceError> {
        let finite = self.base.size().is_some();
        let limit = if finite { usize::MAX } else { WITNESS_SCAN };
        if self.base.elements().take(limit).any(|p| pred(&p)) {
            Ok(true)
        } else if finite {
            Ok(false)
        } else {
            Err(PowerSpaceError::UnsupportedShape {
                shape,
                reason: format!("no witness among the first {WITNESS_SCAN} elements of an infinite carrier"),
            })
        }
    }

    /// `q ∈ X↓`.
    pub fn in_down_of(&self, x: &SymbolicSubset<O::Elem>, q: &O::Elem) -> Result<bool, PowerSpaceError> {
        let o = &self.base;
        match x.shape {
            Shape::Fin | Shape::Down => Ok(in_closure(o, Direction::Down, &x.set, q)),
            _ if x.contains(o, q) => Ok(true),
            shape => self.exists_in_carrier(shape, |p| o.leq(q, p) && x.contains(o, p)),
        }
    }

    /// `q ∈ X↑`.
    pub fn in_up_of(&self, x: &SymbolicSubset<O::Elem>, q: &O::Elem) -> Result<bool, PowerSpaceError> {
        let o = &self.base;
        match x.shape {
            Shape::Fin | Shape::Up => Ok(in_closure(o, Direction::Up, &x.set, q)),
            _ if x.contains(o, q) => Ok(true),
            shape => self.exists_in_carrier(shape, |p| o.leq(p, q) && x.contains(o, p)),
        }
    }

    /// Whether the point `x` lies in the basic open set with index `index`.
    ///
    /// Exact for finite and downward-closed points (flat) and finite and
    /// upward-closed points (sharp), and for every shape on a finite carrier.
    /// Other cases search for a witness and may fail with `UnsupportedShape`.
    pub fn psi(&self, x: &SymbolicSubset<O::Elem>, index: &FinSet<O::Elem>) -> Result<bool, PowerSpaceError> {
        x.validate(&self.base)?;
        for q in index {
            crate::order::check(&self.base, q)?;
        }
        for q in index {
            let keep = match self.mode {
                Mode::Flat => self.in_down_of(x, q)?,
                Mode::Sharp => !self.in_up_of(x, q)?,
            };
            if !keep {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn closed_member(
        &self,
        code: &ClosedCode<O::Elem>,
        x: &SymbolicSubset<O::Elem>,
        horizon: u64,
    ) -> Result<Verdict<O::Elem>, PowerSpaceError> {
        if let Some(set) = x.as_finite() {
            x.validate(&self.base)?;
            return Ok(closed_member_finite(&self.base, self.mode, code, set, horizon));
        }
        let exact = code.decisive_len();
        let bound = exact.unwrap_or(horizon);
        for stage in 0..bound {
            for index in code.stage(stage) {
                if self.psi(x, &index)? {
                    return Ok(Verdict::Out { stage, index });
                }
            }
        }
        Ok(Verdict::In {
            horizon: bound,
            exact: exact.is_some(),
        })
    }

    /// A code for the closed set generated by `e`.
    ///
    /// Sharp: one index `{c}` per member `c` of `e`, coding the intersection of
    /// the sets `{c}↓`. Flat: one index `{q}` per `q` outside `e↓`, coding the
    /// intersection of the sets `{Q ∖ q↑}↓`, which is `{X : X ⊆ e↓}`. Stage `n`
    /// inspects the `n`-th carrier element (finite sets list their members).
    pub fn closed_from_set(&self, e: &SymbolicSubset<O::Elem>) -> Result<ClosedCode<O::Elem>, PowerSpaceError>
    where
        O: Clone + Send + Sync + 'static,
        O::Elem: Send + Sync + 'static,
    {
        e.validate(&self.base)?;
        if let (Mode::Sharp, Some(set)) = (self.mode, e.as_finite()) {
            return Ok(StagedCode::listed(
                set.iter().map(|c| vec![FinSet::singleton(c.clone())]).collect(),
            ));
        }
        if self.base.size().is_some() {
            let mut stages = Vec::new();
            for c in self.base.elements() {
                let keep = match self.mode {
                    Mode::Sharp => e.contains(&self.base, &c),
                    Mode::Flat => !self.in_down_of(e, &c)?,
                };
                stages.push(if keep {
                    vec![FinSet::singleton(c)]
                } else {
                    Vec::new()
                });
            }
            return Ok(StagedCode::listed(stages));
        }
        let base = self.base.clone();
        let e = e.clone();
        match self.mode {
            Mode::Sharp => Ok(StagedCode::stream(move |n| {
                let c = base.elements().nth(n as usize).expect("infinite carrier");
                if e.contains(&base, &c) {
                    vec![FinSet::singleton(c)]
                } else {
                    Vec::new()
                }
            })),
            Mode::Flat => match e.shape {
                Shape::Fin | Shape::Down => Ok(StagedCode::stream(move |n| {
                    let c = base.elements().nth(n as usize).expect("infinite carrier");
                    if in_closure(&base, Direction::Down, &e.set, &c) {
                        Vec::new()
                    } else {
                        vec![FinSet::singleton(c)]
                    }
                })),
                shape => Err(PowerSpaceError::UnsupportedShape {
                    shape,
                    reason: "the downward closure has no decidable complement on an infinite carrier".into(),
                }),
            },
        }
    }

    /// When `a` is outside the flat closed set `code`, a finite subset of `a`
    /// that is already outside, assembled from the exclusion certificate.
    pub fn finite_witness_flat(
        &self,
        code: &ClosedCode<O::Elem>,
        a: &SymbolicSubset<O::Elem>,
        horizon: u64,
    ) -> Result<FiniteWitness<O::Elem>, PowerSpaceError> {
        let (stage, index) = match self.closed_member(code, a, horizon)? {
            Verdict::In { horizon, .. } => return Ok(FiniteWitness::StillInUpTo(horizon)),
            Verdict::Out { stage, index } => (stage, index),
        };
        let o = &self.base;
        let mut witness = FinSet::new();
        for q in &index {
            let found = match a.as_finite() {
                Some(set) => set.iter().find(|p| o.leq(q, p)).cloned(),
                None => {
                    let limit = if o.size().is_some() {
                        usize::MAX
                    } else {
                        WITNESS_SCAN
                    };
                    o.elements().take(limit).find(|p| o.leq(q, p) && a.contains(o, p))
                }
            };
            match found {
                Some(p) => {
                    witness.insert(p);
                }
                None => {
                    return Err(PowerSpaceError::Inconsistent(format!(
                        "certificate element {q:?} at stage {stage} has no member above it"
                    )))
                }
            }
        }
        debug_assert!(psi_finite(o, Mode::Flat, &witness, &index));
        Ok(FiniteWitness::Found(witness))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FiniteWitness<E> {
    Found(FinSet<E>),
    StillInUpTo(u64),
}

fn cartesian<E: Clone>(lists: &[Vec<E>]) -> Vec<Vec<E>> {
    lists.iter().fold(vec![Vec::new()], |acc, list| {
        acc.iter()
            .flat_map(|prefix| {
                list.iter().map(move |e| {
                    let mut t = prefix.clone();
                    t.push(e.clone());
                    t
                })
            })
            .collect()
    })
}

/// Distinct index sets of the tuples, keeping only the inclusion-minimal ones
/// (a larger index codes a larger basic closed set, so it adds nothing to the
/// intersection). Each set keeps the first tuple producing it.
fn minimal_indices<E: Ord + Clone>(tuples: Vec<Vec<E>>) -> Vec<(FinSet<E>, Vec<E>)> {
    let mut by_set: BTreeMap<FinSet<E>, Vec<E>> = BTreeMap::new();
    for t in tuples {
        by_set.entry(t.iter().cloned().collect()).or_insert(t);
    }
    let sets: Vec<FinSet<E>> = by_set.keys().cloned().collect();
    by_set
        .into_iter()
        .filter(|(s, _)| !sets.iter().any(|t| t.len() < s.len() && t.is_subset(s)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Translated<E> {
    Member,
    /// One element per generator, each outside that generator's downward
    /// closure and below some element of the point.
    Excluded {
        tuple: Vec<E>,
    },
}

/// The closed set `E↓` of the flat finite-subset space, re-expressed in the
/// flat space of all subsets as an intersection of basic closed sets
/// `{Q ∖ q_0↑, .., Q ∖ q_{n-1}↑}↓`, one per tuple with `q_i ∉ e_i↓`.
#[derive(Clone, Debug)]
pub struct FlatTranslation<E> {
    generators: Vec<FinSet<E>>,
    materialized: Option<(ClosedCode<E>, Vec<Vec<E>>)>,
}

pub fn translate_flat<O: QuasiOrder>(o: &O, generators: &[FinSet<O::Elem>]) -> FlatTranslation<O::Elem> {
    let materialized = o.size().map(|_| {
        let outside: Vec<Vec<O::Elem>> = generators
            .iter()
            .map(|g| {
                o.elements()
                    .filter(|q| !in_closure(o, Direction::Down, g, q))
                    .collect()
            })
            .collect();
        let (indices, tuples): (Vec<_>, Vec<_>) = minimal_indices(cartesian(&outside)).into_iter().unzip();
        let code = StagedCode::listed(indices.into_iter().map(|i| vec![i]).collect());
        (code, tuples)
    });
    FlatTranslation {
        generators: generators.to_vec(),
        materialized,
    }
}

impl<E: Clone + Ord> FlatTranslation<E> {
    /// The materialized code, available on finite carriers.
    pub fn code(&self) -> Option<&ClosedCode<E>> {
        self.materialized.as_ref().map(|(c, _)| c)
    }

    /// Membership of a finite point. On a finite carrier this evaluates the
    /// materialized code; otherwise it searches the point itself for a tuple.
    pub fn contains<O: QuasiOrder<Elem = E>>(&self, o: &O, x: &FinSet<E>) -> Translated<E> {
        if let Some((code, tuples)) = &self.materialized {
            return match closed_member_finite(o, Mode::Flat, code, x, 0) {
                Verdict::Out { stage, .. } => Translated::Excluded {
                    tuple: tuples[stage as usize].clone(),
                },
                Verdict::In { .. } => Translated::Member,
            };
        }
        let tuple: Option<Vec<E>> = self
            .generators
            .iter()
            .map(|g| x.iter().find(|q| !in_closure(o, Direction::Down, g, q)).cloned())
            .collect();
        match tuple {
            Some(tuple) => Translated::Excluded { tuple },
            None => Translated::Member,
        }
    }
}

/// The closed set `E↓` of the sharp finite-subset space, re-expressed in the
/// sharp space of all subsets: the intersection over tuples in
/// `e_0 × .. × e_{n-1}` of `{{q_0}, .., {q_{n-1}}}↓`, one index per stage.
pub fn translate_sharp<O: QuasiOrder>(
    _o: &O,
    generators: &[FinSet<O::Elem>],
) -> Result<ClosedCode<O::Elem>, PowerSpaceError> {
    if let Some(index) = generators.iter().position(|g| g.is_empty()) {
        return Err(PowerSpaceError::EmptyGenerator { index });
    }
    let lists: Vec<Vec<O::Elem>> = generators.iter().map(|g| g.iter().cloned().collect()).collect();
    Ok(StagedCode::listed(
        minimal_indices(cartesian(&lists))
            .into_iter()
            .map(|(i, _)| vec![i])
            .collect(),
    ))
}

/// A finite point on which a translated code and the generator test differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Disagreement<E> {
    pub mode: Mode,
    pub generators: Vec<FinSet<E>>,
    pub point: FinSet<E>,
    /// Membership according to the generators.
    pub direct: bool,
}

/// Compares both translations of `E↓` with the direct test "some generator
/// dominates `x`" on every given point. Sharp mode is skipped when a
/// generator is empty.
pub fn check_translation<O: QuasiOrder>(
    o: &O,
    generators: &[FinSet<O::Elem>],
    points: &[FinSet<O::Elem>],
) -> Result<(), Disagreement<O::Elem>> {
    let flat = translate_flat(o, generators);
    let sharp = translate_sharp(o, generators).ok();
    for x in points {
        let direct = generators.iter().any(|g| flat_le(o, x, g));
        if (flat.contains(o, x) == Translated::Member) != direct {
            return Err(Disagreement {
                mode: Mode::Flat,
                generators: generators.to_vec(),
                point: x.clone(),
                direct,
            });
        }
        if let Some(code) = &sharp {
            let direct = generators.iter().any(|g| crate::powerset::sharp_le(o, x, g));
            if closed_member_finite(o, Mode::Sharp, code, x, 0).is_in() != direct {
                return Err(Disagreement {
                    mode: Mode::Sharp,
                    generators: generators.to_vec(),
                    point: x.clone(),
                    direct,
                });
            }
        }
    }
    Ok(())
}

/// `H_n = F_0 ∩ .. ∩ F_n`, as stagewise unions of the index streams.
pub fn running_intersections<E: Clone>(chain: &[ClosedCode<E>]) -> Vec<ClosedCode<E>> {
    (1..=chain.len())
        .map(|n| StagedCode::union(chain[..n].to_vec()))
        .collect()
}

/// One step `F_n ⊋ F_{n+1}` of a chain, witnessed by a finite point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainStep<E> {
    pub index: usize,
    pub separator: FinSet<E>,
    pub in_before: Verdict<E>,
    pub out_after: Verdict<E>,
}

impl<E> ChainStep<E> {
    pub fn strict(&self) -> bool {
        matches!(
            (&self.in_before, &self.out_after),
            (Verdict::In { exact: true, .. }, Verdict::Out { .. })
        )
    }
}

#[derive(Clone, Debug)]
pub struct DescendingChain<E> {
    pub mode: Mode,
    pub codes: Vec<ClosedCode<E>>,
    pub steps: Vec<ChainStep<E>>,
}

/// The non-stabilizing chain attached to a bad sequence `q_0, q_1, ..`.
///
/// Flat: `F_n = ⋂_{i ≤ n} {Q ∖ q_i↑}↓`, separated by `{q_{n+1}}`.
/// Sharp: `H_n = ⋂_{i ≤ n} {q_i}↓`, separated by `{q_0, .., q_n}`.
/// In both modes stage `i` of the code lists the single index `{q_i}`.
pub fn chain_from_bad<O: QuasiOrder>(
    o: &O,
    mode: Mode,
    bad: &[O::Elem],
) -> Result<DescendingChain<O::Elem>, PowerSpaceError> {
    let bad = BadPrefix::new(o, bad.to_vec())?.into_vec();
    if bad.len() < 2 {
        return Err(PowerSpaceError::TooShort { len: bad.len() });
    }
    let codes: Vec<ClosedCode<O::Elem>> = (0..bad.len())
        .map(|n| {
            StagedCode::listed(
                bad[..=n]
                    .iter()
                    .map(|q| vec![FinSet::singleton(q.clone())])
                    .collect(),
            )
        })
        .collect();
    let steps = (0..bad.len() - 1)
        .map(|n| {
            let separator: FinSet<O::Elem> = match mode {
                Mode::Flat => FinSet::singleton(bad[n + 1].clone()),
                Mode::Sharp => bad[..=n].iter().cloned().collect(),
            };
            ChainStep {
                index: n,
                in_before: closed_member_finite(o, mode, &codes[n], &separator, 0),
                out_after: closed_member_finite(o, mode, &codes[n + 1], &separator, 0),
                separator,
            }
        })
        .collect();
    Ok(DescendingChain { mode, codes, steps })
}

/// All subsets of `elements` with at most `max_size` members, in ascending
/// code order.
pub fn subsets_upto<E: Ord + Clone>(elements: &[E], max_size: usize) -> Vec<FinSet<E>> {
    let mut out: Vec<FinSet<E>> = vec![FinSet::new()];
    for e in elements {
        let grown: Vec<FinSet<E>> = out
            .iter()
            .filter(|s| s.len() < max_size)
            .map(|s| s.with(e.clone()))
            .collect();
        out.extend(grown);
    }
    out.sort();
    out.dedup();
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExtractConfig {
    pub len: usize,
    /// Total number of candidate membership tests.
    pub budget: u64,
    /// Scan bound for codes that are not finitely presented.
    pub horizon: u64,
    /// Chain positions inspected when deciding whether a restricted chain
    /// still descends (sharp mode).
    pub window: usize,
}

impl Default for ExtractConfig {
    fn default() -> Self {
        ExtractConfig {
            len: 6,
            budget: 1_000_000,
            horizon: 64,
            window: 8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Extraction<T> {
    Found(BadPrefix<T>),
    NotFoundWithinBudget {
        tests: u64,
    },
    /// No certificate element kept the restricted chain descending within
    /// the lookahead window.
    LookaheadInconclusive {
        prefix: Vec<T>,
        candidates: Vec<T>,
        window: usize,
    },
}

impl<T> Extraction<T> {
    pub fn found(self) -> Option<BadPrefix<T>> {
        match self {
            Extraction::Found(b) => Some(b),
            _ => None,
        }
    }
}

struct Tester<'a, O: QuasiOrder> {
    o: &'a O,
    mode: Mode,
    horizon: u64,
    tests: u64,
    budget: u64,
}

impl<O: QuasiOrder> Tester<'_, O> {
    fn spend(&mut self) -> bool {
        self.tests += 1;
        self.tests <= self.budget
    }

    fn member(&self, code: &ClosedCode<O::Elem>, a: &FinSet<O::Elem>) -> Verdict<O::Elem> {
        closed_member_finite(self.o, self.mode, code, a, self.horizon)
    }

    /// First `(position, candidate)` with the candidate in `chain[position]`
    /// but not in `chain[position + 1]`, for positions in `from..to`.
    #[allow(clippy::type_complexity)]
    fn strict_step(
        &mut self,
        chain: &[ClosedCode<O::Elem>],
        from: usize,
        to: usize,
        pool: &[FinSet<O::Elem>],
    ) -> Result<Option<(usize, FinSet<O::Elem>, FinSet<O::Elem>)>, u64> {
        for pos in from..to.min(chain.len().saturating_sub(1)) {
            for a in pool {
                if !self.spend() {
                    return Err(self.tests);
                }
                if self.member(&chain[pos], a).is_in() {
                    if let Verdict::Out { index, .. } = self.member(&chain[pos + 1], a) {
                        return Ok(Some((pos, a.clone(), index)));
                    }
                }
            }
        }
        Ok(None)
    }
}

/// Extracts a bad sequence of finite sets under the Hoare order from a
/// descending chain of flat closed sets: each next set lies in some `F_m`
/// but not `F_{m+1}`, with `m` strictly increasing.
pub fn bad_from_chain_flat<O: QuasiOrder>(
    o: &O,
    chain: &[ClosedCode<O::Elem>],
    pool: &[FinSet<O::Elem>],
    cfg: ExtractConfig,
) -> Result<Extraction<FinSet<O::Elem>>, PowerSpaceError> {
    bad_from_descending_flat(
        o,
        chain.len(),
        |m, a| closed_member_finite(o, Mode::Flat, &chain[m], a, cfg.horizon).is_in(),
        pool,
        cfg,
    )
}

/// [`bad_from_chain_flat`] for a chain of `chain_len` closed sets given by a
/// membership test on finite points.
pub fn bad_from_descending_flat<O: QuasiOrder>(
    o: &O,
    chain_len: usize,
    member: impl Fn(usize, &FinSet<O::Elem>) -> bool,
    pool: &[FinSet<O::Elem>],
    cfg: ExtractConfig,
) -> Result<Extraction<FinSet<O::Elem>>, PowerSpaceError> {
    let mut tests = 0u64;
    let mut seq = Vec::with_capacity(cfg.len);
    let mut from = 0;
    while seq.len() < cfg.len {
        let mut found = None;
        'scan: for m in from..chain_len.saturating_sub(1) {
            for a in pool {
                tests += 1;
                if tests > cfg.budget {
                    return Ok(Extraction::NotFoundWithinBudget { tests });
                }
                if member(m, a) && !member(m + 1, a) {
                    found = Some((m, a.clone()));
                    break 'scan;
                }
            }
        }
        match found {
            Some((m, a)) => {
                seq.push(a);
                from = m + 1;
            }
            None => return Ok(Extraction::NotFoundWithinBudget { tests }),
        }
    }
    Ok(Extraction::Found(BadPrefix::new(
        &power_order(o, Mode::Flat),
        seq,
    )?))
}

/// Extracts a bad sequence of elements from a descending chain of sharp
/// closed sets. With `q_0 .. q_{k-1}` chosen, the chain is restricted to
/// `F'_n = F_n ∩ ⋂ {q_i}↓`; a finite set in `F'_l ∖ F'_{l+1}` yields an
/// exclusion index `{r_0, .., r_{m-1}}` from `F_{l+1}`, every `r_j` extends
/// the bad sequence, and the first `r_j` whose further restriction still has
/// a strict step within the lookahead window is chosen.
pub fn bad_from_chain_sharp<O: QuasiOrder>(
    o: &O,
    chain: &[ClosedCode<O::Elem>],
    pool: &[FinSet<O::Elem>],
    cfg: ExtractConfig,
) -> Result<Extraction<O::Elem>, PowerSpaceError> {
    let mut t = Tester {
        o,
        mode: Mode::Sharp,
        horizon: cfg.horizon,
        tests: 0,
        budget: cfg.budget,
    };
    let restrict = |qs: &[O::Elem]| -> Vec<ClosedCode<O::Elem>> {
        let extra = StagedCode::listed(qs.iter().map(|q| vec![FinSet::singleton(q.clone())]).collect());
        chain
            .iter()
            .map(|c| StagedCode::union(vec![c.clone(), extra.clone()]))
            .collect()
    };
    let mut qs: Vec<O::Elem> = Vec::with_capacity(cfg.len);
    while qs.len() < cfg.len {
        let restricted = restrict(&qs);
        let (pos, index) = match t.strict_step(&restricted, 0, usize::MAX, pool) {
            Err(tests) => return Ok(Extraction::NotFoundWithinBudget { tests }),
            Ok(None) => return Ok(Extraction::NotFoundWithinBudget { tests: t.tests }),
            Ok(Some((pos, _, index))) => (pos, index),
        };
        let candidates: Vec<O::Elem> = index
            .iter()
            .filter(|r| qs.iter().all(|q| !o.leq(q, r)))
            .cloned()
            .collect();
        if candidates.is_empty() {
            return Err(PowerSpaceError::Inconsistent(
                "exclusion index came from an earlier choice".into(),
            ));
        }
        let last = qs.len() + 1 == cfg.len;
        let mut chosen = None;
        for r in &candidates {
            if last {
                chosen = Some(r.clone());
                break;
            }
            let mut extended = qs.clone();
            extended.push(r.clone());
            let further = restrict(&extended);
            match t.strict_step(&further, pos + 1, pos + 1 + cfg.window, pool) {
                Err(tests) => return Ok(Extraction::NotFoundWithinBudget { tests }),
                Ok(Some(_)) => {
                    chosen = Some(r.clone());
                    break;
                }
                Ok(None) => {}
            }
        }
        match chosen {
            Some(r) => qs.push(r),
            None => {
                return Ok(Extraction::LookaheadInconclusive {
                    prefix: qs,
                    candidates,
                    window: cfg.window,
                })
            }
        }
    }
    Ok(Extraction::Found(BadPrefix::new(o, qs)?))
}
