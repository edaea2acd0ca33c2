use std::fmt::Debug;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use noetherian::csc::{ascending_from_bad, bad_from_ascending, AscendingSearch};
use noetherian::order::find_bad_prefix;
use noetherian::powerspace::{check_translation, subsets_upto};
use noetherian::reversal::{FlatChain, ReversalError, SharpChain};
use noetherian::xi::XiOrder;
use noetherian::{power_order, BaseOrder, FinSet, QuasiOrder, Search};

use crate::report::{ChainReport, CheckFailure, CheckReport, ClaimsRow};
use crate::{
    emit, load_injection, load_order, load_poset, require_format, to_json, DecodeArgs, Failure, Format,
    InjectionArgs, Output, RoundTripArgs, StagedArgs, TranslateArgs,
};

fn finish_chain(output: &Output, report: ChainReport) -> Result<(), Failure> {
    let text = match output.format {
        Format::Text => report.text(),
        _ => to_json(&report),
    };
    emit(output, &text)?;
    if report.ok {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn finish(output: &Output, report: CheckReport) -> Result<(), Failure> {
    let text = match output.format {
        Format::Text => report.text(),
        _ => to_json(&report),
    };
    emit(output, &text)?;
    if report.ok {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn check_failure(e: ReversalError) -> Result<CheckFailure, Failure> {
    match e {
        ReversalError::CheckFailed { stage, check } => Ok(CheckFailure {
            stage,
            check: check.to_string(),
        }),
        other => Err(Failure::config(other)),
    }
}

pub fn flat_chain(a: &InjectionArgs) -> Result<(), Failure> {
    require_format(&a.output, &[Format::Json, Format::Text])?;
    let f = load_injection(&a.injection)?;
    let chain = FlatChain::new(&f, a.stages).map_err(Failure::config)?;
    let mut steps = Vec::new();
    let mut failure = None;
    for s in 0..chain.steps() {
        match chain.separator(s) {
            Ok(sep) => steps.push(sep.report()),
            Err(e) => {
                failure = Some(check_failure(e)?);
                break;
            }
        }
    }
    let report = ChainReport {
        command: "flat-chain",
        ok: failure.is_none(),
        steps_checked: a.stages,
        injection: f,
        steps,
        claims: None,
        failure,
    };
    finish_chain(&a.output, report)
}

pub fn sharp_chain(a: &InjectionArgs) -> Result<(), Failure> {
    require_format(&a.output, &[Format::Json, Format::Text])?;
    let f = load_injection(&a.injection)?;
    let chain = SharpChain::new(&f, a.stages).map_err(Failure::config)?;
    let claims: Vec<ClaimsRow> = (0..=chain.steps())
        .map(|s| ClaimsRow {
            stage: s,
            claims: chain.claims(s),
        })
        .collect();
    let mut failure = claims.iter().find(|r| !r.claims.all()).map(|r| CheckFailure {
        stage: r.stage,
        check: "claims".into(),
    });
    if failure.is_none() {
        failure = (0..=chain.steps())
            .find(|&s| !chain.shape_ok(s))
            .map(|s| CheckFailure {
                stage: s,
                check: "a_s and b_s differ only in the new copy".into(),
            });
    }
    let mut steps = Vec::new();
    if failure.is_none() {
        for s in 0..chain.steps() {
            match chain.separator(s) {
                Ok(sep) => steps.push(sep.report()),
                Err(e) => {
                    failure = Some(check_failure(e)?);
                    break;
                }
            }
        }
    }
    let report = ChainReport {
        command: "sharp-chain",
        ok: failure.is_none(),
        steps_checked: a.stages,
        injection: f,
        steps,
        claims: Some(claims),
        failure,
    };
    finish_chain(&a.output, report)
}

fn round_trip_on<O>(o: &O, len: usize, budget: u64) -> CheckReport
where
    O: QuasiOrder,
    O::Elem: Serialize + Debug,
{
    let fail = |failure: serde_json::Value, details: serde_json::Value| CheckReport {
        command: "round-trip",
        ok: false,
        checked: 0,
        seed: None,
        failure: Some(failure),
        details,
    };
    let bad = match find_bad_prefix(o, len, budget) {
        Search::Found(b) => b,
        Search::Exhausted { expansions } => {
            return fail(
                json!({"search": "exhausted", "expansions": expansions}),
                json!({}),
            )
        }
        Search::NotFoundWithinBudget { expansions } => {
            return fail(
                json!({"search": "not_found_within_budget", "expansions": expansions}),
                json!({}),
            )
        }
    };
    let asc = ascending_from_bad(o, bad.as_slice()).expect("search output is bad");
    let strict = asc.steps.iter().filter(|st| st.strict()).count();
    let details = |recovered: serde_json::Value| {
        json!({
            "order": o.name(),
            "bad": bad.as_slice(),
            "strict_steps": strict,
            "recovered": recovered,
        })
    };
    if strict != asc.steps.len() {
        let first = asc.steps.iter().position(|st| !st.strict());
        return fail(json!({"non_strict_step": first}), details(json!(null)));
    }
    match bad_from_ascending(o, &asc.chain, len, budget).expect("chain elements are valid") {
        AscendingSearch::Found { bad: back, .. } => CheckReport {
            command: "round-trip",
            ok: back.len() == len,
            checked: (strict + back.len()) as u64,
            seed: None,
            failure: None,
            details: details(json!(back.as_slice())),
        },
        AscendingSearch::NotFoundWithinBudget { tests, partial } => fail(
            json!({"recovery": "not_found_within_budget", "tests": tests}),
            details(json!(partial)),
        ),
    }
}

pub fn round_trip(a: &RoundTripArgs) -> Result<(), Failure> {
    require_format(&a.output, &[Format::Json, Format::Text])?;
    let base = load_order(&a.order.order)?;
    let report = match a.order.power {
        None => round_trip_on(&base, a.len, a.budget),
        Some(mode) => round_trip_on(&power_order(base, mode.into()), a.len, a.budget),
    };
    finish(&a.output, report)
}

pub fn translate(a: &TranslateArgs) -> Result<(), Failure> {
    require_format(&a.output, &[Format::Json, Format::Text])?;
    let o = load_order(&a.order)?;
    let n = match &o {
        BaseOrder::Finite(fo) => fo.len() as u64,
        _ => return Err(Failure::config("translate needs a finite order")),
    };
    let elems: Vec<u64> = (0..n).collect();
    let points = subsets_upto(&elems, 3);
    let families: Vec<FinSet<FinSet<u64>>> = if a.samples == 0 {
        subsets_upto(&points, 3)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
        (0..a.samples)
            .map(|_| {
                let k = rng.gen_range(0..=3);
                points.choose_multiple(&mut rng, k).cloned().collect()
            })
            .collect()
    };
    let mut checked = 0;
    let mut failure = None;
    for family in &families {
        checked += 1;
        if let Err(d) = check_translation(&o, family.as_slice(), &points) {
            failure = Some(serde_json::to_value(d).expect("serializable"));
            break;
        }
    }
    let report = CheckReport {
        command: "translate",
        ok: failure.is_none(),
        checked,
        seed: (a.samples > 0).then_some(a.seed),
        failure,
        details: json!({"elements": n, "points": points.len(), "families": families.len()}),
    };
    finish(&a.output, report)
}

pub fn copy_position(a: &StagedArgs) -> Result<(), Failure> {
    require_format(&a.inj.output, &[Format::Json, Format::Text])?;
    let f = load_injection(&a.inj.injection)?;
    let poset = load_poset(a.poset.as_deref())?;
    let xi = XiOrder::new(&f, &poset, a.inj.stages).map_err(Failure::config)?;
    let mut checked = 0;
    let mut failure = None;
    'outer: for m in 1..a.inj.stages {
        for n in 0..m {
            checked += 1;
            if !xi.copy_position_check(m, n).map_err(Failure::config)? {
                failure = Some(json!({"m": m, "n": n}));
                break 'outer;
            }
        }
    }
    let report = CheckReport {
        command: "copy-position",
        ok: failure.is_none(),
        checked,
        seed: None,
        failure,
        details: json!({"stages": a.inj.stages, "poset_size": poset.len()}),
    };
    finish(&a.inj.output, report)
}

pub fn decode(a: &DecodeArgs) -> Result<(), Failure> {
    require_format(&a.output, &[Format::Json, Format::Text])?;
    let f = load_injection(&a.injection)?;
    let mut in_range = Vec::new();
    let mut failure = None;
    for n in 0..a.limit {
        let decoded = f.range_member_decoded(n);
        if decoded != f.range_member_naive(n) {
            failure = Some(json!({"n": n, "decoded": decoded}));
            break;
        }
        if decoded {
            in_range.push(n);
        }
    }
    let report = CheckReport {
        command: "decode",
        ok: failure.is_none(),
        checked: a.limit,
        seed: None,
        failure,
        details: json!({"in_range": in_range}),
    };
    finish(&a.output, report)
}
