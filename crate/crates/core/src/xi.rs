//! The staged partial order built from an injection and a finite pointed poset.
//!
//! Stage `n` adds a fresh copy `P_n` of `P`. Copy `s + 1` is placed
//! immediately above `x_{n0}` when some stage stopped being true at `s + 1`
//! (`n0` the least such), and immediately below `x_s` otherwise. Every element
//! of a copy relates to older elements exactly as its anchor does, except that
//! the anchor itself ends up strictly below (resp. above) the copy.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::order::{BadPrefix, FiniteOrder, OrderError, QuasiOrder, Relation};
use crate::true_stages::{Injection, StageCase, Truth};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum XiError {
    #[error("stage {stage} is beyond the construction bound {bound}; rebuild with more stages")]
    StageOutOfBound { stage: u64, bound: u64 },
    #[error("the base poset must be antisymmetric")]
    NotPartialOrder,
    #[error("designated point {point} is not in a poset of size {size}")]
    PointOutOfRange { point: usize, size: usize },
    #[error("at least one stage is required")]
    NoStages,
    #[error("arguments must satisfy n < m, got n = {n}, m = {m}")]
    BadStagePair { n: u64, m: u64 },
    #[error(transparent)]
    Order(#[from] OrderError),
}

/// A finite partial order with a designated element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedPoset {
    order: FiniteOrder,
    point: usize,
}

impl PointedPoset {
    pub fn new(order: FiniteOrder, point: usize) -> Result<Self, XiError> {
        if !order.is_antisymmetric() {
            return Err(XiError::NotPartialOrder);
        }
        if point >= order.len() {
            return Err(XiError::PointOutOfRange {
                point,
                size: order.len(),
            });
        }
        Ok(PointedPoset { order, point })
    }

    /// `({x}, x)`.
    pub fn singleton() -> Self {
        PointedPoset {
            order: FiniteOrder::chain(1),
            point: 0,
        }
    }

    pub fn order(&self) -> &FiniteOrder {
        &self.order
    }

    pub fn point(&self) -> usize {
        self.point
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

/// The element `p` of copy `stage`. Ordered stage-major, matching enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct XiElement {
    pub stage: u64,
    pub p: usize,
}

impl XiElement {
    pub fn new(stage: u64, p: usize) -> Self {
        XiElement { stage, p }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    Above,
    Below,
}

/// Where copy `stage` was placed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Anchor {
    pub stage: u64,
    pub anchor: u64,
    pub dir: Placement,
}

impl Anchor {
    pub fn for_stage(f: &Injection, stage: u64) -> Self {
        debug_assert!(stage >= 1);
        match f.stage_case(stage - 1) {
            StageCase::Reset { n0 } => Anchor {
                stage,
                anchor: n0,
                dir: Placement::Above,
            },
            StageCase::Extend => Anchor {
                stage,
                anchor: stage - 1,
                dir: Placement::Below,
            },
        }
    }
}

/// The construction restricted to stages `< stages`, with precomputed
/// copy-to-element relations.
#[derive(Clone, Debug)]
pub struct XiOrder {
    f: Injection,
    poset: PointedPoset,
    stages: u64,
    log: Vec<Anchor>,
    // newer[t][u * |P| + q]: relation of any element of copy t to (u, q), u < t
    newer: Vec<Vec<Relation>>,
}

impl XiOrder {
    pub fn new(f: &Injection, poset: &PointedPoset, stages: u64) -> Result<Self, XiError> {
        if stages == 0 {
            return Err(XiError::NoStages);
        }
        let mut xi = XiOrder {
            f: f.clone(),
            poset: poset.clone(),
            stages,
            log: Vec::with_capacity(stages as usize),
            newer: vec![Vec::new()],
        };
        let k = poset.len();
        for t in 1..stages {
            let anchor = Anchor::for_stage(f, t);
            let a = xi.x(anchor.anchor);
            let mut row = Vec::with_capacity(t as usize * k);
            for u in 0..t {
                for q in 0..k {
                    let r = xi.rel(a, XiElement::new(u, q));
                    row.push(match (anchor.dir, r) {
                        (_, Relation::Incomparable) => Relation::Incomparable,
                        (Placement::Above, Relation::StrictLess) => Relation::StrictLess,
                        (Placement::Above, _) => Relation::StrictGreater,
                        (Placement::Below, Relation::StrictGreater) => Relation::StrictGreater,
                        (Placement::Below, _) => Relation::StrictLess,
                    });
                }
            }
            xi.log.push(anchor);
            xi.newer.push(row);
        }
        Ok(xi)
    }

    pub fn injection(&self) -> &Injection {
        &self.f
    }

    pub fn poset(&self) -> &PointedPoset {
        &self.poset
    }

    pub fn stages(&self) -> u64 {
        self.stages
    }

    /// Placement records for copies `1..stages`.
    pub fn anchor_log(&self) -> &[Anchor] {
        &self.log
    }

    /// The copy of the designated point in stage `n`.
    pub fn x(&self, n: u64) -> XiElement {
        XiElement::new(n, self.poset.point)
    }

    pub fn copy(&self, n: u64) -> impl Iterator<Item = XiElement> {
        (0..self.poset.len()).map(move |p| XiElement::new(n, p))
    }

    /// Relation of two elements within the bound, unchecked.
    pub fn rel(&self, a: XiElement, b: XiElement) -> Relation {
        let k = self.poset.len();
        if a.stage == b.stage {
            let o = &self.poset.order;
            Relation::from_leqs(o.leq_idx(a.p, b.p), o.leq_idx(b.p, a.p))
        } else if a.stage > b.stage {
            self.newer[a.stage as usize][b.stage as usize * k + b.p]
        } else {
            self.newer[b.stage as usize][a.stage as usize * k + a.p].inverse()
        }
    }

    fn check(&self, e: XiElement) -> Result<(), XiError> {
        if e.stage >= self.stages {
            Err(XiError::StageOutOfBound {
                stage: e.stage,
                bound: self.stages,
            })
        } else if e.p >= self.poset.len() {
            Err(XiError::PointOutOfRange {
                point: e.p,
                size: self.poset.len(),
            })
        } else {
            Ok(())
        }
    }

    pub fn try_leq(&self, a: XiElement, b: XiElement) -> Result<bool, XiError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.rel(a, b).is_leq())
    }

    /// Checks both clauses relating copy `m` to `x_n` and `P_n`, for `n < m`.
    pub fn copy_position_check(&self, m: u64, n: u64) -> Result<bool, XiError> {
        if n >= m {
            return Err(XiError::BadStagePair { n, m });
        }
        self.check(self.x(m))?;
        let xn = self.x(n);
        if self.f.true_set_at(m).contains(&n) {
            let below = self.copy(m).all(|z| self.rel(z, xn).is_leq());
            let incomparable = self
                .copy(n)
                .filter(|&y| self.rel(xn, y) == Relation::Incomparable)
                .all(|y| self.copy(m).all(|z| self.rel(z, y) == Relation::Incomparable));
            Ok(below && incomparable)
        } else {
            Ok(self.copy(m).all(|z| self.rel(xn, z).is_leq()))
        }
    }

    /// Reads truth of `n` off a bad prefix: true when some element of the
    /// first `prefix_len` entries lies below `x_n`.
    ///
    /// The criterion is exact for infinite bad sequences only. A finite
    /// prefix may contain an element below `x_n` for a stage `n` that is not
    /// true; callers comparing against exact truth must account for that.
    pub fn decode_from_bad(&self, bad: &[XiElement], n: u64, prefix_len: usize) -> Result<Decode, XiError> {
        BadPrefix::new(self, bad.to_vec())?;
        let xn = self.x(n);
        self.check(xn)?;
        if let Some(i) = bad
            .iter()
            .take(prefix_len)
            .position(|&q| self.rel(q, xn).is_leq())
        {
            return Ok(Decode::TrueVerdict { witness: i });
        }
        match self.f.is_true_upto(n, u64::MAX) {
            Truth::FalseWithWitness(k) => Ok(Decode::FalseVerdict { false_witness: k }),
            _ => Ok(Decode::InsufficientPrefix),
        }
    }

    /// Hasse diagram of the bounded order, plus dashed anchor edges.
    pub fn to_dot(&self) -> String {
        let elems: Vec<XiElement> = self.elements().collect();
        let name = |e: &XiElement| format!("n{}_{}", e.stage, e.p);
        let mut out = String::from("digraph xi {\n  rankdir=BT;\n");
        for e in &elems {
            let _ = writeln!(out, "  {} [label=\"({},{})\"];", name(e), e.stage, e.p);
        }
        let lt = |a: &XiElement, b: &XiElement| self.rel(*a, *b) == Relation::StrictLess;
        for a in &elems {
            for b in &elems {
                if lt(a, b) && !elems.iter().any(|c| lt(a, c) && lt(c, b)) {
                    let _ = writeln!(out, "  {} -> {};", name(a), name(b));
                }
            }
        }
        for anchor in &self.log {
            let dir = match anchor.dir {
                Placement::Above => "above",
                Placement::Below => "below",
            };
            let _ = writeln!(
                out,
                "  {} -> {} [style=dashed, label=\"{}\"];",
                name(&self.x(anchor.stage)),
                name(&self.x(anchor.anchor)),
                dir
            );
        }
        out.push_str("}\n");
        out
    }
}

impl QuasiOrder for XiOrder {
    type Elem = XiElement;

    fn name(&self) -> String {
        format!("xi(stages {}, |P| = {})", self.stages, self.poset.len())
    }

    fn contains(&self, e: &XiElement) -> bool {
        self.check(*e).is_ok()
    }

    fn leq(&self, a: &XiElement, b: &XiElement) -> bool {
        self.rel(*a, *b).is_leq()
    }

    fn first(&self) -> Option<XiElement> {
        (!self.poset.is_empty()).then(|| XiElement::new(0, 0))
    }

    fn succ(&self, e: &XiElement) -> Option<XiElement> {
        let next = if e.p + 1 < self.poset.len() {
            XiElement::new(e.stage, e.p + 1)
        } else {
            XiElement::new(e.stage + 1, 0)
        };
        (next.stage < self.stages).then_some(next)
    }

    fn size(&self) -> Option<usize> {
        Some(self.stages as usize * self.poset.len())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decode {
    /// Index of a prefix element below `x_n`.
    TrueVerdict {
        witness: usize,
    },
    /// `n` is not true: `f(false_witness) < f(n)`, and no prefix element lies below `x_n`.
    FalseVerdict {
        false_witness: u64,
    },
    InsufficientPrefix,
}

/// Whether `x_n` sits in the initial `ω` part of the linear order built over
/// the one-point poset (finitely many predecessors) or in the final `ω*` part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OmegaPart {
    /// `n` is not true; `witness` is the least `k > n` with `f(k) < f(n)`.
    Omega {
        witness: u64,
    },
    OmegaStar,
}

pub fn omega_certificate(f: &Injection, n: u64) -> OmegaPart {
    match f.is_true_upto(n, u64::MAX) {
        Truth::FalseWithWitness(k) => OmegaPart::Omega { witness: k },
        _ => OmegaPart::OmegaStar,
    }
}

/// Full relation matrix replayed stage by stage from the placement clauses.
/// Independent of [`XiOrder`]'s anchor tables; used as its oracle.
#[derive(Clone, Debug)]
pub struct NaiveXi {
    k: usize,
    n: usize,
    le: Vec<bool>,
}

impl NaiveXi {
    pub fn new(f: &Injection, poset: &PointedPoset, stages: u64) -> Self {
        let k = poset.len();
        let n = stages as usize * k;
        let mut le = vec![false; n * n];
        let idx = |s: usize, p: usize| s * k + p;
        for s in 0..stages as usize {
            for p in 0..k {
                for q in 0..k {
                    le[idx(s, p) * n + idx(s, q)] = poset.order.leq_idx(p, q);
                }
            }
        }
        for s in 0..stages.saturating_sub(1) {
            let before = f.true_set_at(s).with(s);
            let after = f.true_set_at(s + 1);
            let (anchor, above) = match before.iter().find(|m| !after.contains(m)) {
                Some(&n0) => (n0, true),
                None => (s, false),
            };
            let a = idx(anchor as usize, poset.point);
            let t = s as usize + 1;
            for y in 0..t * k {
                let (y_le_a, a_le_y) = (le[y * n + a], le[a * n + y]);
                let (y_le_e, e_le_y) = if above {
                    (y_le_a, a_le_y && !y_le_a)
                } else {
                    (y_le_a && !a_le_y, a_le_y)
                };
                for p in 0..k {
                    let e = idx(t, p);
                    le[y * n + e] = y_le_e;
                    le[e * n + y] = e_le_y;
                }
            }
        }
        NaiveXi { k, n, le }
    }

    pub fn leq(&self, a: XiElement, b: XiElement) -> bool {
        let i = a.stage as usize * self.k + a.p;
        let j = b.stage as usize * self.k + b.p;
        self.le[i * self.n + j]
    }
}

/// Single query against a fresh replay up to the larger stage.
pub fn xi_leq_naive(f: &Injection, poset: &PointedPoset, a: XiElement, b: XiElement) -> bool {
    NaiveXi::new(f, poset, a.stage.max(b.stage) + 1).leq(a, b)
}
