//! Explicit non-stabilizing descending chains of closed sets over the staged
//! orders, one per power order, with designated separators between
//! consecutive stages.
//!
//! Flat: over the pointed poset `{x, y, z}` with `x < z`, stage `s` has
//! generators `E_s` and `F_s = E_s↓` under the Hoare order.
//! Sharp: over the two-element antichain `{x, y}`, `F_s = ⋂_{t ≤ s} E_t↓`
//! under the Smyth order.

use serde::Serialize;

use crate::finset::FinSet;
use crate::order::{FiniteOrder, QuasiOrder};
use crate::powerset::{flat_le, sharp_le};
use crate::powerspace::{translate_flat, translate_sharp, ClosedCode, PowerSpaceError};
use crate::true_stages::{Injection, StageCase};
use crate::xi::{PointedPoset, XiElement, XiError, XiOrder};

pub type Points = FinSet<XiElement>;

const X: usize = 0;
const Y: usize = 1;
const Z: usize = 2;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ReversalError {
    #[error("stage {stage} check failed: {check}")]
    CheckFailed { stage: u64, check: &'static str },
    #[error("stage {stage} is beyond the built chain (steps < {bound})")]
    StageOutOfRange { stage: u64, bound: u64 },
    #[error(transparent)]
    Xi(#[from] XiError),
    #[error(transparent)]
    PowerSpace(#[from] PowerSpaceError),
}

/// `{x, y, z}` with `x < z`, designated point `x`.
pub fn flat_poset() -> PointedPoset {
    PointedPoset::new(FiniteOrder::closure_of(3, &[(X, Z)]), X).expect("valid poset")
}

/// `{x, y}` unordered, designated point `x`.
pub fn sharp_poset() -> PointedPoset {
    PointedPoset::new(FiniteOrder::antichain(2), X).expect("valid poset")
}

fn el(stage: u64, p: usize) -> XiElement {
    XiElement::new(stage, p)
}

fn sorted(mut gens: Vec<Points>) -> Vec<Points> {
    gens.sort();
    gens.dedup();
    gens
}

/// Case label used in reports: `"i"` when a stage stops being true,
/// `"ii"` when the true set extends.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageReport {
    pub stage: u64,
    pub case: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n0: Option<u64>,
    pub separator: Points,
    pub strict: bool,
}

/// A separator with the outcome of both membership checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separator {
    pub stage: u64,
    pub case: StageCase,
    pub witness: Points,
    pub in_before: bool,
    pub out_after: bool,
}

impl Separator {
    pub fn report(&self) -> StageReport {
        let (case, n0) = match self.case {
            StageCase::Reset { n0 } => ("i", Some(n0)),
            StageCase::Extend => ("ii", None),
        };
        StageReport {
            stage: self.stage,
            case,
            n0,
            separator: self.witness.clone(),
            strict: self.in_before && self.out_after,
        }
    }
}

fn require(ok: bool, stage: u64, check: &'static str) -> Result<(), ReversalError> {
    if ok {
        Ok(())
    } else {
        Err(ReversalError::CheckFailed { stage, check })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlatStage {
    pub s: u64,
    pub a: Points,
    pub b: Points,
    /// `E_s`, sorted.
    pub generators: Vec<Points>,
}

/// The flat chain for stages `0..=steps`, so that `steps` transitions can be
/// checked.
#[derive(Clone, Debug)]
pub struct FlatChain {
    xi: XiOrder,
    stages: Vec<FlatStage>,
}

impl FlatChain {
    pub fn new(f: &Injection, steps: u64) -> Result<Self, ReversalError> {
        let xi = XiOrder::new(f, &flat_poset(), steps + 1)?;
        let b =
            |n: u64, t: &Points| -> Points { std::iter::once(el(n, Z)).chain(t.iter().copied()).collect() };
        let mut stages: Vec<FlatStage> = Vec::with_capacity(steps as usize + 1);
        for s in 0..=steps {
            let ys: Points = f.true_set_at(s).iter().map(|&n| el(n, Y)).collect();
            let a: Points = [el(s, X), el(s, Y)]
                .into_iter()
                .chain(ys.iter().copied())
                .collect();
            let bs = b(s, &ys);
            let mut generators = vec![a.clone(), bs.clone()];
            generators.extend(f.true_set_at(s).iter().map(|&n| stages[n as usize].b.clone()));
            stages.push(FlatStage {
                s,
                a,
                b: bs,
                generators: sorted(generators),
            });
        }
        Ok(FlatChain { xi, stages })
    }

    pub fn xi(&self) -> &XiOrder {
        &self.xi
    }

    /// Number of checkable transitions.
    pub fn steps(&self) -> u64 {
        self.stages.len() as u64 - 1
    }

    pub fn stage(&self, s: u64) -> Option<&FlatStage> {
        self.stages.get(s as usize)
    }

    /// `x ∈ E_s↓` under the Hoare order.
    pub fn member(&self, s: u64, x: &Points) -> bool {
        self.stages[s as usize]
            .generators
            .iter()
            .any(|g| flat_le(&self.xi, x, g))
    }

    fn check_step(&self, s: u64) -> Result<(), ReversalError> {
        if s >= self.steps() {
            return Err(ReversalError::StageOutOfRange {
                stage: s,
                bound: self.steps(),
            });
        }
        Ok(())
    }

    /// The designated witness for `F_s ⊋ F_{s+1}`: `b_{n0}` when `n0` stops
    /// being true, `a_s` when the true set extends. Both membership checks
    /// and the inclusion `F_{s+1} ⊆ F_s` must hold.
    pub fn separator(&self, s: u64) -> Result<Separator, ReversalError> {
        self.check_step(s)?;
        let case = self.xi.injection().stage_case(s);
        let witness = match case {
            StageCase::Reset { n0 } => self.stages[n0 as usize].b.clone(),
            StageCase::Extend => self.stages[s as usize].a.clone(),
        };
        let sep = Separator {
            stage: s,
            case,
            in_before: self.member(s, &witness),
            out_after: !self.member(s + 1, &witness),
            witness,
        };
        require(sep.in_before, s, "separator lies in F_s")?;
        require(sep.out_after, s, "separator lies outside F_{s+1}")?;
        let next = &self.stages[s as usize + 1].generators;
        require(
            next.iter().all(|g| self.member(s, g)),
            s,
            "F_{s+1} is contained in F_s",
        )?;
        let f = self.xi.injection();
        let carried = f.true_set_at(s + 1).iter().all(|&n| {
            self.stages[s as usize]
                .generators
                .contains(&self.stages[n as usize].b)
        });
        require(carried, s, "earlier b-generators of E_{s+1} already lie in E_s")?;
        Ok(sep)
    }

    pub fn verify(&self) -> Result<Vec<StageReport>, ReversalError> {
        (0..self.steps())
            .map(|s| Ok(self.separator(s)?.report()))
            .collect()
    }

    /// `F_s` as a closed code of the flat space of all subsets of the staged
    /// order. The code has one index per choice of non-dominated points, so
    /// it is only practical for small stages.
    pub fn closed_code(&self, s: u64) -> Option<ClosedCode<XiElement>> {
        let stage = self.stage(s)?;
        translate_flat(&self.xi, &stage.generators).code().cloned()
    }

    /// All generators and separators, a candidate pool for extracting bad
    /// sequences from the chain.
    pub fn candidate_pool(&self) -> Vec<Points> {
        sorted(
            self.stages
                .iter()
                .flat_map(|st| st.generators.iter().cloned())
                .collect(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SharpStage {
    pub s: u64,
    pub a: Points,
    pub b: Points,
    pub generators: Vec<Points>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SharpClaims {
    /// The union of the generators is an antichain.
    pub antichain: bool,
    /// Neither `a_s` nor `b_s` lies below the other generators.
    pub avoidance: bool,
    /// `a_s` and `b_s` lie in `E_i↓` for every `i ≤ s`.
    pub persistence: bool,
}

impl SharpClaims {
    pub fn all(&self) -> bool {
        self.antichain && self.avoidance && self.persistence
    }
}

#[derive(Clone, Debug)]
pub struct SharpChain {
    xi: XiOrder,
    stages: Vec<SharpStage>,
}

impl SharpChain {
    pub fn new(f: &Injection, steps: u64) -> Result<Self, ReversalError> {
        let xi = XiOrder::new(f, &sharp_poset(), steps + 1)?;
        let mut stages = vec![SharpStage {
            s: 0,
            a: FinSet::singleton(el(0, X)),
            b: FinSet::singleton(el(0, Y)),
            generators: sorted(vec![FinSet::singleton(el(0, X)), FinSet::singleton(el(0, Y))]),
        }];
        for s in 0..steps {
            let t = s + 1;
            let cur = &stages[s as usize];
            let next = match f.stage_case(s) {
                StageCase::Reset { n0 } => {
                    let old = &stages[n0 as usize];
                    let a = old.b.with(el(t, X));
                    let b = old.b.with(el(t, Y));
                    let mut gens: Vec<Points> = old
                        .generators
                        .iter()
                        .filter(|g| **g != old.a && **g != old.b)
                        .cloned()
                        .collect();
                    gens.extend([a.clone(), b.clone()]);
                    SharpStage {
                        s: t,
                        a,
                        b,
                        generators: sorted(gens),
                    }
                }
                StageCase::Extend => {
                    let a = cur.a.without(&el(s, X)).with(el(t, X));
                    let b = cur.b.without(&el(s, Y)).with(el(t, Y));
                    let mut gens: Vec<Points> =
                        cur.generators.iter().filter(|g| **g != cur.a).cloned().collect();
                    gens.extend([a.clone(), b.clone()]);
                    SharpStage {
                        s: t,
                        a,
                        b,
                        generators: sorted(gens),
                    }
                }
            };
            stages.push(next);
        }
        Ok(SharpChain { xi, stages })
    }

    pub fn xi(&self) -> &XiOrder {
        &self.xi
    }

    pub fn steps(&self) -> u64 {
        self.stages.len() as u64 - 1
    }

    pub fn stage(&self, s: u64) -> Option<&SharpStage> {
        self.stages.get(s as usize)
    }

    fn below_some(&self, x: &Points, gens: &[Points]) -> bool {
        gens.iter().any(|g| sharp_le(&self.xi, x, g))
    }

    /// `x ∈ E_s↓` under the Smyth order.
    pub fn generated_member(&self, s: u64, x: &Points) -> bool {
        self.below_some(x, &self.stages[s as usize].generators)
    }

    /// `x ∈ F_s = ⋂_{t ≤ s} E_t↓`.
    pub fn member(&self, s: u64, x: &Points) -> bool {
        (0..=s).all(|t| self.generated_member(t, x))
    }

    pub fn claims(&self, s: u64) -> SharpClaims {
        let st = &self.stages[s as usize];
        let points: Points = st.generators.iter().flat_map(|g| g.iter().copied()).collect();
        let antichain = points.iter().all(|p| {
            points
                .iter()
                .all(|q| p == q || (!self.xi.leq(p, q) && !self.xi.leq(q, p)))
        });
        let others =
            |g: &Points| -> Vec<Points> { st.generators.iter().filter(|h| *h != g).cloned().collect() };
        let avoidance = !self.below_some(&st.a, &others(&st.a)) && !self.below_some(&st.b, &others(&st.b));
        let persistence = (0..=s).all(|i| self.generated_member(i, &st.a) && self.generated_member(i, &st.b));
        SharpClaims {
            antichain,
            avoidance,
            persistence,
        }
    }

    /// Structural invariants: `a_s ∖ {x_s} = b_s ∖ {y_s}`, and `a_s`, `b_s`
    /// are the only generators containing `x_s`, `y_s`.
    pub fn shape_ok(&self, s: u64) -> bool {
        let st = &self.stages[s as usize];
        let (xs, ys) = (el(s, X), el(s, Y));
        let holding =
            |e: &XiElement| -> Vec<&Points> { st.generators.iter().filter(|g| g.contains(e)).collect() };
        st.a.without(&xs) == st.b.without(&ys) && holding(&xs) == vec![&st.a] && holding(&ys) == vec![&st.b]
    }

    /// The designated witness for `F_s ⊋ F_{s+1}`: `b_{n0}` in the reset
    /// case, `a_s` in the extending case.
    pub fn separator(&self, s: u64) -> Result<Separator, ReversalError> {
        if s >= self.steps() {
            return Err(ReversalError::StageOutOfRange {
                stage: s,
                bound: self.steps(),
            });
        }
        let case = self.xi.injection().stage_case(s);
        let witness = match case {
            StageCase::Reset { n0 } => self.stages[n0 as usize].b.clone(),
            StageCase::Extend => self.stages[s as usize].a.clone(),
        };
        let sep = Separator {
            stage: s,
            case,
            in_before: self.member(s, &witness),
            out_after: !self.generated_member(s + 1, &witness),
            witness,
        };
        require(sep.in_before, s, "separator lies in F_s")?;
        require(sep.out_after, s, "separator lies outside E_{s+1}")?;
        Ok(sep)
    }

    /// Checks every claim, the structural invariants and every separator.
    pub fn verify(&self) -> Result<Vec<StageReport>, ReversalError> {
        for s in 0..=self.steps() {
            let c = self.claims(s);
            require(c.antichain, s, "generators form an antichain")?;
            require(c.avoidance, s, "a_s and b_s avoid the other generators")?;
            require(c.persistence, s, "a_s and b_s persist through earlier stages")?;
            require(self.shape_ok(s), s, "a_s and b_s differ only in the new copy")?;
        }
        (0..self.steps())
            .map(|s| Ok(self.separator(s)?.report()))
            .collect()
    }

    /// `E_s↓` as a closed code of the sharp space of all subsets of the
    /// staged order: one index per choice of a point from each generator.
    pub fn generated_code(&self, s: u64) -> Result<ClosedCode<XiElement>, ReversalError> {
        let st = self.stage(s).ok_or(ReversalError::StageOutOfRange {
            stage: s,
            bound: self.steps() + 1,
        })?;
        Ok(translate_sharp(&self.xi, &st.generators)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::powerset::Mode;
    use crate::powerspace::{bad_from_descending_flat, closed_member_finite, ExtractConfig};

    fn f3() -> Injection {
        Injection::new(vec![2, 0, 1], 3).unwrap()
    }

    fn pts(v: &[(u64, usize)]) -> Points {
        v.iter().map(|&(s, p)| el(s, p)).collect()
    }

    #[test]
    fn flat_stages() {
        let c = FlatChain::new(&f3(), 4).unwrap();
        let st = c.stage(0).unwrap();
        assert_eq!(st.a, pts(&[(0, X), (0, Y)]));
        assert_eq!(st.b, pts(&[(0, Z)]));
        assert_eq!(st.generators.len(), 2);
        let st = c.stage(1).unwrap();
        assert_eq!(
            st.generators,
            sorted(vec![pts(&[(1, X), (1, Y)]), pts(&[(1, Z)])])
        );

        let id = FlatChain::new(&Injection::identity(), 3).unwrap();
        assert_eq!(id.stage(2).unwrap().a, pts(&[(2, X), (2, Y), (0, Y), (1, Y)]));
    }

    #[test]
    fn flat_separators() {
        let c = FlatChain::new(&f3(), 6).unwrap();
        let sep = c.separator(0).unwrap();
        assert_eq!(sep.case, StageCase::Reset { n0: 0 });
        assert_eq!(sep.witness, pts(&[(0, Z)]));
        let reports = c.verify().unwrap();
        assert_eq!(reports.len(), 6);
        assert!(reports.iter().all(|r| r.strict));

        let id = FlatChain::new(&Injection::identity(), 5).unwrap();
        for s in 0..5 {
            let sep = id.separator(s).unwrap();
            assert_eq!(sep.case, StageCase::Extend);
            assert_eq!(&sep.witness, &id.stage(s).unwrap().a);
        }
        assert!(id.separator(5).is_err());
    }

    #[test]
    fn sharp_stages() {
        let c = SharpChain::new(&f3(), 4).unwrap();
        let st = c.stage(1).unwrap();
        assert_eq!(st.a, pts(&[(0, Y), (1, X)]));
        assert_eq!(st.b, pts(&[(0, Y), (1, Y)]));
        assert_eq!(st.generators, sorted(vec![st.a.clone(), st.b.clone()]));

        let id = SharpChain::new(&Injection::identity(), 2).unwrap();
        let st = id.stage(1).unwrap();
        assert_eq!(st.a, pts(&[(1, X)]));
        assert_eq!(st.b, pts(&[(1, Y)]));
        assert_eq!(
            st.generators,
            sorted(vec![pts(&[(0, Y)]), pts(&[(1, X)]), pts(&[(1, Y)])])
        );
    }

    #[test]
    fn sharp_claims_and_separators() {
        for f in [f3(), Injection::identity()] {
            let c = SharpChain::new(&f, 8).unwrap();
            for s in 0..=8 {
                assert!(c.claims(s).all(), "stage {s}");
            }
            assert!(c.verify().unwrap().iter().all(|r| r.strict));
        }
        let c = SharpChain::new(&f3(), 2).unwrap();
        assert_eq!(c.separator(0).unwrap().witness, pts(&[(0, Y)]));
        let id = SharpChain::new(&Injection::identity(), 2).unwrap();
        assert_eq!(id.separator(0).unwrap().witness, pts(&[(0, X)]));
    }

    #[test]
    fn report_json() {
        let c = FlatChain::new(&f3(), 2).unwrap();
        let j = serde_json::to_value(c.verify().unwrap()).unwrap();
        assert_eq!(j[0]["case"], "i");
        assert_eq!(j[0]["n0"], 0);
        assert_eq!(j[1]["case"], "ii");
        assert!(j[1].get("n0").is_none());
        assert_eq!(j[0]["separator"][0]["stage"], 0);
    }

    #[test]
    fn codes_agree_with_generators() {
        let c = FlatChain::new(&f3(), 2).unwrap();
        let code = c.closed_code(1).unwrap();
        let sc = SharpChain::new(&f3(), 2).unwrap();
        let scode = sc.generated_code(1).unwrap();
        for x in crate::powerspace::subsets_upto(&c.xi().elements().collect::<Vec<_>>(), 2) {
            assert_eq!(
                closed_member_finite(c.xi(), Mode::Flat, &code, &x, 0).is_in(),
                c.member(1, &x)
            );
        }
        for x in crate::powerspace::subsets_upto(&sc.xi().elements().collect::<Vec<_>>(), 3) {
            assert_eq!(
                closed_member_finite(sc.xi(), Mode::Sharp, &scode, &x, 0).is_in(),
                sc.generated_member(1, &x)
            );
        }
    }

    #[test]
    fn flat_chain_yields_bad_sequence() {
        let c = FlatChain::new(&f3(), 8).unwrap();
        let pool = c.candidate_pool();
        let cfg = ExtractConfig {
            len: 6,
            ..Default::default()
        };
        let found = bad_from_descending_flat(c.xi(), 9, |m, a| c.member(m as u64, a), &pool, cfg)
            .unwrap()
            .found()
            .unwrap();
        assert_eq!(found.len(), 6);
    }

    proptest::proptest! {
        #[test]
        fn random_chains_descend_strictly(f in crate::true_stages::tests::injection()) {
            let flat = FlatChain::new(&f, 10).unwrap();
            proptest::prop_assert!(flat.verify().is_ok());
            let sharp = SharpChain::new(&f, 10).unwrap();
            proptest::prop_assert!(sharp.verify().is_ok());
        }
    }
}
