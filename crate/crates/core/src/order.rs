//! Quasi-orders given as decidable oracles, derived relations, and bad sequences.

use std::fmt::Debug;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::finset::FinSet;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum OrderError {
    #[error("{element} is not an element of {order}")]
    InvalidElement { order: String, element: String },
    #[error("invalid order description: {0}")]
    Spec(String),
    #[error("sequence is not bad: element {earlier} is below element {later}")]
    NotBad { earlier: usize, later: usize },
}

/// A quasi-order over an enumerable carrier with a decidable order relation.
///
/// `leq` is only meaningful on elements for which `contains` holds; the
/// checked entry points in this module validate first. The carrier is
/// enumerated by `first`/`succ` in ascending code order; every search in the
/// crate follows that order.
pub trait QuasiOrder {
    type Elem: Clone + Ord + Hash + Debug;

    fn name(&self) -> String;

    /// Whether `e` is a valid code for an element of the carrier.
    fn contains(&self, e: &Self::Elem) -> bool;

    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool;

    fn first(&self) -> Option<Self::Elem>;

    /// The next carrier element after `e` in ascending code order.
    fn succ(&self, e: &Self::Elem) -> Option<Self::Elem>;

    /// Number of elements, for finite carriers.
    fn size(&self) -> Option<usize> {
        None
    }

    fn elements(&self) -> Elements<'_, Self>
    where
        Self: Sized,
    {
        Elements {
            order: self,
            next: self.first(),
        }
    }
}

impl<O: QuasiOrder + ?Sized> QuasiOrder for &O {
    type Elem = O::Elem;
    fn name(&self) -> String {
        (**self).name()
    }
    fn contains(&self, e: &Self::Elem) -> bool {
        (**self).contains(e)
    }
    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        (**self).leq(a, b)
    }
    fn first(&self) -> Option<Self::Elem> {
        (**self).first()
    }
    fn succ(&self, e: &Self::Elem) -> Option<Self::Elem> {
        (**self).succ(e)
    }
    fn size(&self) -> Option<usize> {
        (**self).size()
    }
}

/// Carrier enumeration in ascending code order.
pub struct Elements<'a, O: QuasiOrder> {
    order: &'a O,
    next: Option<O::Elem>,
}

impl<O: QuasiOrder> Iterator for Elements<'_, O> {
    type Item = O::Elem;
    fn next(&mut self) -> Option<O::Elem> {
        let cur = self.next.take()?;
        self.next = self.order.succ(&cur);
        Some(cur)
    }
}

/// How two elements compare.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Equivalent,
    StrictLess,
    StrictGreater,
    Incomparable,
}

impl Relation {
    pub fn from_leqs(ab: bool, ba: bool) -> Self {
        match (ab, ba) {
            (true, true) => Relation::Equivalent,
            (true, false) => Relation::StrictLess,
            (false, true) => Relation::StrictGreater,
            (false, false) => Relation::Incomparable,
        }
    }

    pub fn inverse(self) -> Self {
        match self {
            Relation::StrictLess => Relation::StrictGreater,
            Relation::StrictGreater => Relation::StrictLess,
            r => r,
        }
    }

    pub fn is_leq(self) -> bool {
        matches!(self, Relation::Equivalent | Relation::StrictLess)
    }

    pub fn is_geq(self) -> bool {
        matches!(self, Relation::Equivalent | Relation::StrictGreater)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Down,
    Up,
}

pub(crate) fn check<O: QuasiOrder>(o: &O, e: &O::Elem) -> Result<(), OrderError> {
    if o.contains(e) {
        Ok(())
    } else {
        Err(OrderError::InvalidElement {
            order: o.name(),
            element: format!("{e:?}"),
        })
    }
}

pub fn relation<O: QuasiOrder>(o: &O, a: &O::Elem, b: &O::Elem) -> Relation {
    Relation::from_leqs(o.leq(a, b), o.leq(b, a))
}

pub fn relation_query<O: QuasiOrder>(o: &O, a: &O::Elem, b: &O::Elem) -> Result<Relation, OrderError> {
    check(o, a)?;
    check(o, b)?;
    Ok(relation(o, a, b))
}

/// `q ∈ F↓` (Down) or `q ∈ F↑` (Up), without validity checks.
pub fn in_closure<O: QuasiOrder>(o: &O, dir: Direction, f: &FinSet<O::Elem>, q: &O::Elem) -> bool {
    match dir {
        Direction::Down => f.iter().any(|p| o.leq(q, p)),
        Direction::Up => f.iter().any(|p| o.leq(p, q)),
    }
}

pub fn closure_contains<O: QuasiOrder>(
    o: &O,
    dir: Direction,
    f: &FinSet<O::Elem>,
    q: &O::Elem,
) -> Result<bool, OrderError> {
    f.iter().try_for_each(|p| check(o, p))?;
    check(o, q)?;
    Ok(in_closure(o, dir, f, q))
}

/// Index of the first pair `m < n` with `seq[m] <= seq[n]`, if any.
pub fn first_good_pair<O: QuasiOrder>(o: &O, seq: &[O::Elem]) -> Option<(usize, usize)> {
    (1..seq.len()).find_map(|n| (0..n).find(|&m| o.leq(&seq[m], &seq[n])).map(|m| (m, n)))
}

pub fn is_bad_prefix<O: QuasiOrder>(o: &O, seq: &[O::Elem]) -> Result<bool, OrderError> {
    seq.iter().try_for_each(|e| check(o, e))?;
    Ok(first_good_pair(o, seq).is_none())
}

/// A finite sequence in which no earlier element is below a later one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BadPrefix<E> {
    seq: Vec<E>,
}

impl<E: Clone + Ord + Hash + Debug> BadPrefix<E> {
    /// Verifies `seq` against `o`.
    pub fn new<O: QuasiOrder<Elem = E>>(o: &O, seq: Vec<E>) -> Result<Self, OrderError> {
        seq.iter().try_for_each(|e| check(o, e))?;
        if let Some((m, n)) = first_good_pair(o, &seq) {
            return Err(OrderError::NotBad { earlier: m, later: n });
        }
        Ok(BadPrefix { seq })
    }

    pub fn as_slice(&self) -> &[E] {
        &self.seq
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    pub fn into_vec(self) -> Vec<E> {
        self.seq
    }
}

/// Outcome of a bounded search. Neither failure variant is a proof of
/// well-quasi-orderedness unless the carrier was exhausted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Search<T> {
    Found(T),
    /// The whole (finite) search space was explored without success.
    Exhausted {
        expansions: u64,
    },
    NotFoundWithinBudget {
        expansions: u64,
    },
}

impl<T> Search<T> {
    pub fn found(self) -> Option<T> {
        match self {
            Search::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, Search::Found(_))
    }
}

/// Depth-first search for a bad prefix of length `target_len`, expanding
/// candidates in ascending code order and keeping only bad prefixes.
///
/// On an infinite carrier a plain depth-first search can stall forever on a
/// level whose every candidate fails, so the search is iterated over
/// candidate windows: pass `w` only considers the first `2^w` carrier
/// elements at each level. On a finite carrier the final pass is the full
/// search. `budget` bounds the total number of candidate tests.
pub fn find_bad_prefix<O: QuasiOrder>(o: &O, target_len: usize, budget: u64) -> Search<BadPrefix<O::Elem>> {
    let size = o.size();
    let mut expansions = 0u64;
    // bad sequences never repeat an element, so smaller windows cannot succeed
    let first = (target_len as u64).next_power_of_two().trailing_zeros();
    for w in first..u64::BITS {
        let window = 1u64 << w;
        let full = size.is_some_and(|n| n as u64 <= window);
        match windowed_dfs(o, target_len, window, budget, &mut expansions) {
            Some(found) => return Search::Found(BadPrefix { seq: found }),
            None if expansions >= budget => return Search::NotFoundWithinBudget { expansions },
            None if full => return Search::Exhausted { expansions },
            None => {}
        }
    }
    Search::NotFoundWithinBudget { expansions }
}

fn windowed_dfs<O: QuasiOrder>(
    o: &O,
    target_len: usize,
    window: u64,
    budget: u64,
    expansions: &mut u64,
) -> Option<Vec<O::Elem>> {
    let mut prefix: Vec<O::Elem> = Vec::with_capacity(target_len);
    // next candidate at each level with its enumeration index
    let mut cursors: Vec<Option<(O::Elem, u64)>> = vec![o.first().map(|e| (e, 0))];
    loop {
        if prefix.len() == target_len {
            return Some(prefix);
        }
        let level = prefix.len();
        match cursors[level].take() {
            Some((cand, idx)) if idx < window => {
                if *expansions >= budget {
                    return None;
                }
                *expansions += 1;
                cursors[level] = o.succ(&cand).map(|e| (e, idx + 1));
                if prefix.iter().all(|p| !o.leq(p, &cand)) {
                    prefix.push(cand);
                    cursors.push(o.first().map(|e| (e, 0)));
                }
            }
            _ => {
                if level == 0 {
                    return None;
                }
                prefix.pop();
                cursors.pop();
            }
        }
    }
}

/// Cantor pairing.
pub fn pair(a: u64, b: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s * (s + 1) / 2 + b as u128) as u64
}

pub fn unpair(c: u64) -> (u64, u64) {
    let w = ((8 * c as u128 + 1).isqrt() - 1) / 2;
    let t = w * (w + 1) / 2;
    let b = c as u128 - t;
    ((w - b) as u64, b as u64)
}

/// Code of the Rado element `(i, j)`, `i < j`.
pub fn rado(i: u64, j: u64) -> u64 {
    debug_assert!(i < j);
    pair(i, j)
}

/// Code of `(x, 0)` in a disjoint sum.
pub fn sum_left(x: u64) -> u64 {
    pair(x, 0)
}

/// Code of `(x, 1)` in a disjoint sum.
pub fn sum_right(x: u64) -> u64 {
    pair(x, 1)
}

/// A finite quasi-order on `0..n`, stored as its full relation matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteOrder {
    n: usize,
    le: Vec<bool>,
}

impl FiniteOrder {
    /// Reflexive-transitive closure of arbitrary edges `a <= b`; cycles
    /// become equivalences.
    pub fn closure_of(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut le = vec![false; n * n];
        for i in 0..n {
            le[i * n + i] = true;
        }
        for &(a, b) in edges {
            le[a * n + b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if le[i * n + k] {
                    for j in 0..n {
                        if le[k * n + j] {
                            le[i * n + j] = true;
                        }
                    }
                }
            }
        }
        FiniteOrder { n, le }
    }

    /// Builds from declared edges. An equivalence cycle is accepted only when
    /// each edge on it is declared in both directions.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, OrderError> {
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(OrderError::Spec(format!(
                    "edge ({a}, {b}) out of range for {n} elements"
                )));
            }
        }
        let order = Self::closure_of(n, edges);
        for &(a, b) in edges {
            if a != b && order.leq_idx(b, a) && !edges.contains(&(b, a)) {
                return Err(OrderError::Spec(format!(
                    "edges force {b} <= {a} through an undeclared cycle"
                )));
            }
        }
        Ok(order)
    }

    /// Builds from a full relation matrix, which must already be a quasi-order.
    pub fn from_matrix(n: usize, le: Vec<bool>) -> Result<Self, OrderError> {
        if le.len() != n * n {
            return Err(OrderError::Spec("matrix size mismatch".into()));
        }
        let order = FiniteOrder { n, le };
        for a in 0..n {
            if !order.leq_idx(a, a) {
                return Err(OrderError::Spec(format!("not reflexive at {a}")));
            }
            for b in 0..n {
                for c in 0..n {
                    if order.leq_idx(a, b) && order.leq_idx(b, c) && !order.leq_idx(a, c) {
                        return Err(OrderError::Spec(format!("not transitive at {a},{b},{c}")));
                    }
                }
            }
        }
        Ok(order)
    }

    pub fn antichain(n: usize) -> Self {
        Self::closure_of(n, &[])
    }

    /// The chain `0 < 1 < .. < n-1`.
    pub fn chain(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::closure_of(n, &edges)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn leq_idx(&self, a: usize, b: usize) -> bool {
        self.le[a * self.n + b]
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..self.n).all(|a| (0..self.n).all(|b| a == b || !(self.leq_idx(a, b) && self.leq_idx(b, a))))
    }

    /// Pairs `a <= b` with `a != b`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in 0..self.n {
                if a != b && self.leq_idx(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

/// The quasi-orders the artifact can build from an [`OrderSpec`].
///
/// Every carrier is a set of naturals. Pairs use Cantor pairing; `OmegaStar`
/// code `n` is the `n`-th element from the top.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseOrder {
    Finite(FiniteOrder),
    Omega,
    OmegaStar,
    /// The infinite antichain on the naturals.
    Antichain,
    /// Pairs `(i, j)` with `i < j`; `(i,j) <= (k,l)` iff `(i = k and j <= l) or j < k`.
    Rado,
    Sum(Box<BaseOrder>, Box<BaseOrder>),
    Product(Box<BaseOrder>, Box<BaseOrder>),
}

impl BaseOrder {
    pub fn sum(l: BaseOrder, r: BaseOrder) -> Self {
        BaseOrder::Sum(Box::new(l), Box::new(r))
    }

    pub fn product(l: BaseOrder, r: BaseOrder) -> Self {
        BaseOrder::Product(Box::new(l), Box::new(r))
    }

    fn max_code(&self) -> Option<u64> {
        match self {
            BaseOrder::Finite(f) => (f.n as u64).checked_sub(1),
            BaseOrder::Sum(l, r) => {
                let ml = l.max_code().map(sum_left);
                let mr = r.max_code().map(sum_right);
                ml.max(mr)
            }
            BaseOrder::Product(l, r) => Some(pair(l.max_code()?, r.max_code()?)),
            _ => None,
        }
    }

    fn scan_from(&self, start: u64) -> Option<u64> {
        let limit = match self.size() {
            Some(0) => return None,
            Some(_) => self.max_code()?,
            None => u64::MAX,
        };
        (start..=limit).find(|c| self.contains(c))
    }
}

impl QuasiOrder for BaseOrder {
    type Elem = u64;

    fn name(&self) -> String {
        match self {
            BaseOrder::Finite(f) => format!("finite({})", f.n),
            BaseOrder::Omega => "omega".into(),
            BaseOrder::OmegaStar => "omega*".into(),
            BaseOrder::Antichain => "antichain".into(),
            BaseOrder::Rado => "rado".into(),
            BaseOrder::Sum(l, r) => format!("sum({}, {})", l.name(), r.name()),
            BaseOrder::Product(l, r) => format!("product({}, {})", l.name(), r.name()),
        }
    }

    fn contains(&self, &e: &u64) -> bool {
        match self {
            BaseOrder::Finite(f) => (e as usize) < f.n,
            BaseOrder::Omega | BaseOrder::OmegaStar | BaseOrder::Antichain => true,
            BaseOrder::Rado => {
                let (i, j) = unpair(e);
                i < j
            }
            BaseOrder::Sum(l, r) => match unpair(e) {
                (x, 0) => l.contains(&x),
                (x, 1) => r.contains(&x),
                _ => false,
            },
            BaseOrder::Product(l, r) => {
                let (a, b) = unpair(e);
                l.contains(&a) && r.contains(&b)
            }
        }
    }

    fn leq(&self, &a: &u64, &b: &u64) -> bool {
        match self {
            BaseOrder::Finite(f) => f.leq_idx(a as usize, b as usize),
            BaseOrder::Omega => a <= b,
            BaseOrder::OmegaStar => b <= a,
            BaseOrder::Antichain => a == b,
            BaseOrder::Rado => {
                let ((i, j), (k, l)) = (unpair(a), unpair(b));
                (i == k && j <= l) || j < k
            }
            BaseOrder::Sum(l, r) => match (unpair(a), unpair(b)) {
                ((x, 0), (y, 0)) => l.leq(&x, &y),
                ((x, 1), (y, 1)) => r.leq(&x, &y),
                _ => false,
            },
            BaseOrder::Product(l, r) => {
                let ((a0, a1), (b0, b1)) = (unpair(a), unpair(b));
                l.leq(&a0, &b0) && r.leq(&a1, &b1)
            }
        }
    }

    fn first(&self) -> Option<u64> {
        self.scan_from(0)
    }

    fn succ(&self, &e: &u64) -> Option<u64> {
        self.scan_from(e.checked_add(1)?)
    }

    fn size(&self) -> Option<usize> {
        match self {
            BaseOrder::Finite(f) => Some(f.n),
            BaseOrder::Sum(l, r) => Some(l.size()? + r.size()?),
            BaseOrder::Product(l, r) => match (l.size(), r.size()) {
                (Some(0), _) | (_, Some(0)) => Some(0),
                (Some(a), Some(b)) => Some(a * b),
                _ => None,
            },
            _ => None,
        }
    }
}

/// JSON description of a [`BaseOrder`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OrderSpec {
    Finite {
        elements: usize,
        #[serde(default)]
        le: Vec<[usize; 2]>,
    },
    Rado,
    Omega,
    OmegaStar,
    Antichain,
    Sum {
        left: Box<OrderSpec>,
        right: Box<OrderSpec>,
    },
    Product {
        left: Box<OrderSpec>,
        right: Box<OrderSpec>,
    },
}

pub fn build_order(spec: &OrderSpec) -> Result<BaseOrder, OrderError> {
    Ok(match spec {
        OrderSpec::Finite { elements, le } => {
            let edges: Vec<_> = le.iter().map(|&[a, b]| (a, b)).collect();
            BaseOrder::Finite(FiniteOrder::from_edges(*elements, &edges)?)
        }
        OrderSpec::Rado => BaseOrder::Rado,
        OrderSpec::Omega => BaseOrder::Omega,
        OrderSpec::OmegaStar => BaseOrder::OmegaStar,
        OrderSpec::Antichain => BaseOrder::Antichain,
        OrderSpec::Sum { left, right } => BaseOrder::sum(build_order(left)?, build_order(right)?),
        OrderSpec::Product { left, right } => BaseOrder::product(build_order(left)?, build_order(right)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(v: &[u64]) -> FinSet<u64> {
        v.iter().copied().collect()
    }

    #[test]
    fn relation_examples() {
        assert_eq!(
            relation_query(&BaseOrder::Omega, &2, &5).unwrap(),
            Relation::StrictLess
        );
        assert_eq!(
            relation_query(&BaseOrder::Rado, &rado(0, 1), &rado(0, 2)).unwrap(),
            Relation::StrictLess
        );
        assert_eq!(
            relation_query(&BaseOrder::Antichain, &3, &4).unwrap(),
            Relation::Incomparable
        );
        assert_eq!(
            relation_query(&BaseOrder::OmegaStar, &2, &5).unwrap(),
            Relation::StrictGreater
        );
    }

    #[test]
    fn invalid_codes_are_rejected() {
        // (0,0) is not a Rado element
        assert!(matches!(
            relation_query(&BaseOrder::Rado, &0, &rado(0, 1)),
            Err(OrderError::InvalidElement { .. })
        ));
        let p = BaseOrder::Finite(FiniteOrder::chain(3));
        assert!(closure_contains(&p, Direction::Down, &s(&[1]), &3).is_err());
    }

    #[test]
    fn closure_examples() {
        assert!(closure_contains(&BaseOrder::Omega, Direction::Down, &s(&[5]), &3).unwrap());
        assert!(closure_contains(&BaseOrder::Rado, Direction::Down, &s(&[rado(2, 3)]), &rado(0, 1)).unwrap());
        for dir in [Direction::Down, Direction::Up] {
            assert!(!closure_contains(&BaseOrder::Omega, dir, &FinSet::new(), &3).unwrap());
        }
    }

    #[test]
    fn bad_prefix_examples() {
        assert!(is_bad_prefix(&BaseOrder::Omega, &[3, 2, 1]).unwrap());
        assert!(!is_bad_prefix(&BaseOrder::Omega, &[1, 2]).unwrap());
        assert!(!is_bad_prefix(&BaseOrder::Rado, &[rado(0, 1), rado(0, 2)]).unwrap());
        assert!(BaseOrder::Rado.leq(&rado(0, 1), &rado(2, 3)));
    }

    #[test]
    fn find_bad_prefix_examples() {
        let found = find_bad_prefix(&BaseOrder::OmegaStar, 10, 100_000)
            .found()
            .unwrap();
        assert_eq!(found.as_slice(), &(0..10).collect::<Vec<u64>>()[..]);
        // finite bad prefixes exist in every infinite well-order: they descend
        let found = find_bad_prefix(&BaseOrder::Omega, 2, 500).found().unwrap();
        assert_eq!(found.as_slice(), &[1, 0]);
        assert!(matches!(
            find_bad_prefix(&BaseOrder::Omega, 6, 10),
            Search::NotFoundWithinBudget { expansions: 10 }
        ));
        // a 3-chain has no bad sequence of length 2 upwards, but 2,1,0 is bad
        let c = BaseOrder::Finite(FiniteOrder::chain(3));
        assert_eq!(
            find_bad_prefix(&c, 3, 100).found().unwrap().as_slice(),
            &[2, 1, 0]
        );
        assert!(matches!(find_bad_prefix(&c, 4, 10_000), Search::Exhausted { .. }));
    }

    #[test]
    fn build_examples() {
        let p: OrderSpec = serde_json::from_str(r#"{"kind":"finite","elements":3,"le":[[0,2]]}"#).unwrap();
        let p = build_order(&p).unwrap();
        assert_eq!(relation(&p, &0, &2), Relation::StrictLess);
        assert_eq!(relation(&p, &1, &0), Relation::Incomparable);
        assert_eq!(relation(&p, &1, &2), Relation::Incomparable);

        let sum = build_order(
            &serde_json::from_str(r#"{"kind":"sum","left":{"kind":"omega"},"right":{"kind":"omega"}}"#)
                .unwrap(),
        )
        .unwrap();
        assert_eq!(
            relation(&sum, &sum_left(1), &sum_right(1)),
            Relation::Incomparable
        );
        assert_eq!(relation(&sum, &sum_left(1), &sum_left(4)), Relation::StrictLess);

        let prod = BaseOrder::product(BaseOrder::Omega, BaseOrder::Omega);
        assert!(prod.leq(&pair(1, 5), &pair(2, 5)));
        assert!(!prod.leq(&pair(1, 6), &pair(2, 5)));
    }

    #[test]
    fn undeclared_cycles_are_spec_errors() {
        assert!(FiniteOrder::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).is_err());
        let eq = FiniteOrder::from_edges(2, &[(0, 1), (1, 0)]).unwrap();
        assert!(eq.leq_idx(1, 0) && !eq.is_antisymmetric());
        assert!(FiniteOrder::from_edges(2, &[(0, 2)]).is_err());
    }

    #[test]
    fn enumeration_of_pair_coded_carriers() {
        let rado_first: Vec<_> = BaseOrder::Rado.elements().take(3).map(unpair).collect();
        assert_eq!(rado_first, vec![(0, 1), (0, 2), (1, 2)]);
        let fin = BaseOrder::sum(
            BaseOrder::Finite(FiniteOrder::antichain(2)),
            BaseOrder::Finite(FiniteOrder::antichain(3)),
        );
        assert_eq!(fin.elements().count(), 5);
        let prod = BaseOrder::product(
            BaseOrder::Finite(FiniteOrder::chain(2)),
            BaseOrder::Finite(FiniteOrder::chain(3)),
        );
        assert_eq!(prod.elements().count(), 6);
        assert_eq!(prod.size(), Some(6));
    }

    proptest! {
        #[test]
        fn pairing_roundtrip(a in 0u64..1 << 30, b in 0u64..1 << 30) {
            prop_assert_eq!(unpair(pair(a, b)), (a, b));
        }

        #[test]
        fn rado_laws(a in (0u64..20, 1u64..20), b in (0u64..20, 1u64..20), c in (0u64..20, 1u64..20)) {
            let r = BaseOrder::Rado;
            let [a, b, c] = [a, b, c].map(|(i, d)| rado(i, i + d));
            prop_assert!(r.leq(&a, &a));
            if r.leq(&a, &b) && r.leq(&b, &c) {
                prop_assert!(r.leq(&a, &c));
            }
        }

        #[test]
        fn bad_prefixes_are_prefix_closed(seq in proptest::collection::vec(0u64..50, 0..8)) {
            let o = BaseOrder::OmegaStar;
            if is_bad_prefix(&o, &seq).unwrap() {
                for k in 0..seq.len() {
                    prop_assert!(is_bad_prefix(&o, &seq[..k]).unwrap());
                }
            }
        }

        #[test]
        fn down_closure_monotone(f in proptest::collection::vec(0u64..30, 0..5),
                                 g in proptest::collection::vec(0u64..30, 0..5),
                                 q in 0u64..30) {
            let (f, g): (FinSet<u64>, FinSet<u64>) = (f.into(), g.into());
            let o = BaseOrder::OmegaStar;
            if in_closure(&o, Direction::Down, &f, &q) {
                prop_assert!(in_closure(&o, Direction::Down, &f.union(&g), &q));
            }
        }
    }
}
