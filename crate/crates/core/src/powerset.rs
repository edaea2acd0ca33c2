//! Hoare and Smyth orders on finite subsets, and symbolic subsets of a carrier.

use serde::{Deserialize, Serialize};

use crate::finset::FinSet;
use crate::order::{check, in_closure, Direction, OrderError, QuasiOrder};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Hoare: `A <= B` iff every `a` is below some `b`.
    Flat,
    /// Smyth: `A <= B` iff every `b` is above some `a`.
    Sharp,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Flat => "flat",
            Mode::Sharp => "sharp",
        }
    }
}

/// `A ⊆ B↓`, unchecked.
pub fn flat_le<O: QuasiOrder>(o: &O, a: &FinSet<O::Elem>, b: &FinSet<O::Elem>) -> bool {
    a.iter().all(|x| in_closure(o, Direction::Down, b, x))
}

/// `B ⊆ A↑`, unchecked.
pub fn sharp_le<O: QuasiOrder>(o: &O, a: &FinSet<O::Elem>, b: &FinSet<O::Elem>) -> bool {
    b.iter().all(|y| in_closure(o, Direction::Up, a, y))
}

pub fn mode_le<O: QuasiOrder>(o: &O, mode: Mode, a: &FinSet<O::Elem>, b: &FinSet<O::Elem>) -> bool {
    match mode {
        Mode::Flat => flat_le(o, a, b),
        Mode::Sharp => sharp_le(o, a, b),
    }
}

fn check_set<O: QuasiOrder>(o: &O, s: &FinSet<O::Elem>) -> Result<(), OrderError> {
    s.iter().try_for_each(|e| check(o, e))
}

pub fn flat_leq<O: QuasiOrder>(o: &O, a: &FinSet<O::Elem>, b: &FinSet<O::Elem>) -> Result<bool, OrderError> {
    check_set(o, a)?;
    check_set(o, b)?;
    Ok(flat_le(o, a, b))
}

pub fn sharp_leq<O: QuasiOrder>(o: &O, a: &FinSet<O::Elem>, b: &FinSet<O::Elem>) -> Result<bool, OrderError> {
    check_set(o, a)?;
    check_set(o, b)?;
    Ok(sharp_le(o, a, b))
}

/// The finite subsets of a quasi-order under the Hoare or Smyth order.
///
/// Subsets are enumerated in ascending binary-code order relative to the
/// base enumeration, which coincides with the `Ord` of [`FinSet`] whenever the
/// base enumerates in ascending `Ord` order (true of every order in this crate).
#[derive(Clone, Debug)]
pub struct PowerOrder<O> {
    base: O,
    mode: Mode,
}

pub fn power_order<O: QuasiOrder>(base: O, mode: Mode) -> PowerOrder<O> {
    PowerOrder { base, mode }
}

impl<O: QuasiOrder> PowerOrder<O> {
    pub fn base(&self) -> &O {
        &self.base
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }
}

impl<O: QuasiOrder> QuasiOrder for PowerOrder<O> {
    type Elem = FinSet<O::Elem>;

    fn name(&self) -> String {
        format!("{}({})", self.mode.name(), self.base.name())
    }

    fn contains(&self, e: &Self::Elem) -> bool {
        e.iter().all(|x| self.base.contains(x))
    }

    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        mode_le(&self.base, self.mode, a, b)
    }

    fn first(&self) -> Option<Self::Elem> {
        Some(FinSet::new())
    }

    fn succ(&self, e: &Self::Elem) -> Option<Self::Elem> {
        // binary increment: clear the low run of present elements, set the next
        let mut out = e.clone();
        let mut cur = self.base.first();
        while let Some(c) = cur {
            if !out.remove(&c) {
                out.insert(c);
                return Some(out);
            }
            cur = self.base.succ(&c);
        }
        None
    }

    fn size(&self) -> Option<usize> {
        let n = self.base.size()?;
        (n < usize::BITS as usize).then(|| 1usize << n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    /// The finite set itself.
    Fin,
    Up,
    Down,
    /// Complement of the upward closure.
    CoUp,
    /// Complement of the downward closure.
    CoDown,
}

/// A finitely described subset of a carrier with decidable membership.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[serde(bound(serialize = "E: Clone + Serialize", deserialize = "E: Ord + Deserialize<'de>"))]
pub struct SymbolicSubset<E> {
    pub shape: Shape,
    pub set: FinSet<E>,
}

impl<E: Ord + Clone> SymbolicSubset<E> {
    pub fn new(shape: Shape, set: FinSet<E>) -> Self {
        SymbolicSubset { shape, set }
    }

    pub fn fin(set: FinSet<E>) -> Self {
        Self::new(Shape::Fin, set)
    }

    pub fn as_finite(&self) -> Option<&FinSet<E>> {
        (self.shape == Shape::Fin).then_some(&self.set)
    }

    /// Membership, unchecked.
    pub fn contains<O: QuasiOrder<Elem = E>>(&self, o: &O, q: &E) -> bool {
        match self.shape {
            Shape::Fin => self.set.contains(q),
            Shape::Up => in_closure(o, Direction::Up, &self.set, q),
            Shape::Down => in_closure(o, Direction::Down, &self.set, q),
            Shape::CoUp => !in_closure(o, Direction::Up, &self.set, q),
            Shape::CoDown => !in_closure(o, Direction::Down, &self.set, q),
        }
    }

    pub fn validate<O: QuasiOrder<Elem = E>>(&self, o: &O) -> Result<(), OrderError> {
        check_set(o, &self.set)
    }
}

pub fn sym_member<O: QuasiOrder>(
    o: &O,
    x: &SymbolicSubset<O::Elem>,
    q: &O::Elem,
) -> Result<bool, OrderError> {
    x.validate(o)?;
    check(o, q)?;
    Ok(x.contains(o, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{find_bad_prefix, is_bad_prefix, rado, BaseOrder, FiniteOrder};
    use proptest::prelude::*;

    fn s(v: &[u64]) -> FinSet<u64> {
        v.iter().copied().collect()
    }

    #[test]
    fn leq_examples() {
        let r = BaseOrder::Rado;
        assert!(flat_leq(&r, &FinSet::new(), &s(&[rado(0, 1)])).unwrap());
        assert!(flat_leq(&r, &s(&[rado(0, 1)]), &s(&[rado(0, 2)])).unwrap());
        assert!(sharp_leq(&r, &s(&[rado(0, 1)]), &FinSet::new()).unwrap());
        assert!(sharp_leq(&BaseOrder::Omega, &s(&[0]), &s(&[3, 7])).unwrap());
        assert!(!sharp_leq(&BaseOrder::Omega, &s(&[4]), &s(&[3, 7])).unwrap());
        assert!(flat_leq(&r, &s(&[0]), &s(&[rado(0, 1)])).is_err());
    }

    #[test]
    fn sym_member_examples() {
        let o = BaseOrder::Omega;
        assert!(sym_member(&o, &SymbolicSubset::new(Shape::CoUp, s(&[5])), &3).unwrap());
        assert!(!sym_member(&o, &SymbolicSubset::new(Shape::Down, s(&[5])), &7).unwrap());
        assert!(sym_member(
            &BaseOrder::Rado,
            &SymbolicSubset::new(Shape::Up, s(&[rado(0, 1)])),
            &rado(0, 3)
        )
        .unwrap());
    }

    #[test]
    fn symbolic_json() {
        let x: SymbolicSubset<u64> = serde_json::from_str(r#"{"shape":"co_down","set":[3,1]}"#).unwrap();
        assert_eq!(x, SymbolicSubset::new(Shape::CoDown, s(&[1, 3])));
        assert!(serde_json::from_str::<SymbolicSubset<u64>>(r#"{"shape":"side","set":[]}"#).is_err());
    }

    #[test]
    fn power_enumeration_is_binary_counting() {
        let p = power_order(BaseOrder::Finite(FiniteOrder::antichain(3)), Mode::Flat);
        let all: Vec<_> = p.elements().collect();
        assert_eq!(all.len(), 8);
        for (code, set) in all.iter().enumerate() {
            assert_eq!(set.code(), Some(code as u64));
        }
        let q = power_order(BaseOrder::Omega, Mode::Sharp);
        let first: Vec<_> = q.elements().take(6).collect();
        assert_eq!(first[5], s(&[0, 2]));
    }

    #[test]
    fn sharp_power_of_rado_is_not_wqo_at_length_8() {
        let p = power_order(BaseOrder::Rado, Mode::Sharp);
        let bad = find_bad_prefix(&p, 8, 1_000_000).found().unwrap();
        assert!(is_bad_prefix(&p, bad.as_slice()).unwrap());
    }

    fn small_order() -> impl Strategy<Value = FiniteOrder> {
        (1usize..6).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..8)
                .prop_map(move |edges| FiniteOrder::closure_of(n, &edges))
        })
    }

    proptest! {
        #[test]
        fn power_laws(f in small_order(), sets in proptest::collection::vec(0u64..64, 3)) {
            let n = f.len() as u64;
            let o = BaseOrder::Finite(f);
            let [a, b, c]: [FinSet<u64>; 3] = sets
                .iter()
                .map(|&code| FinSet::from_code(code).iter().copied().filter(|&e| e < n).collect())
                .collect::<Vec<_>>()
                .try_into()
                .unwrap();
            for mode in [Mode::Flat, Mode::Sharp] {
                prop_assert!(mode_le(&o, mode, &a, &a));
                if mode_le(&o, mode, &a, &b) && mode_le(&o, mode, &b, &c) {
                    prop_assert!(mode_le(&o, mode, &a, &c));
                }
            }
            let ab = a.union(&b);
            prop_assert!(flat_le(&o, &a, &ab) && sharp_le(&o, &ab, &a));
        }

        #[test]
        fn singleton_embedding(f in small_order(), p in 0u64..6, q in 0u64..6) {
            let n = f.len() as u64;
            let o = BaseOrder::Finite(f);
            let (p, q) = (p % n, q % n);
            let le = o.leq(&q, &p);
            prop_assert_eq!(le, flat_le(&o, &FinSet::singleton(q), &FinSet::singleton(p)));
            prop_assert_eq!(le, sharp_le(&o, &FinSet::singleton(q), &FinSet::singleton(p)));
        }
    }
}
