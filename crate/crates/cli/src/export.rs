use std::fmt::Debug;

use serde::Serialize;
use serde_json::json;

use noetherian::order::find_bad_prefix;
use noetherian::reversal::{FlatChain, SharpChain};
use noetherian::xi::XiOrder;
use noetherian::{power_order, QuasiOrder, Relation, Search};

use crate::{
    emit, load_injection, load_order, load_poset, require_format, to_json, ExportChainArgs, Failure, Format,
    InjectionArgs, PowerMode, SearchArgs, StagedArgs,
};

pub fn xi(a: &StagedArgs) -> Result<(), Failure> {
    require_format(&a.inj.output, &[Format::Dot, Format::Json])?;
    let f = load_injection(&a.inj.injection)?;
    let poset = load_poset(a.poset.as_deref())?;
    let xi = XiOrder::new(&f, &poset, a.inj.stages).map_err(Failure::config)?;
    let text = match a.inj.output.format {
        Format::Dot => xi.to_dot(),
        _ => {
            let elems: Vec<_> = xi.elements().collect();
            let less: Vec<_> = elems
                .iter()
                .flat_map(|&a| elems.iter().map(move |&b| (a, b)))
                .filter(|&(a, b)| xi.rel(a, b) == Relation::StrictLess)
                .collect();
            to_json(&json!({
                "injection": f,
                "stages": a.inj.stages,
                "poset_size": poset.len(),
                "point": poset.point(),
                "anchors": xi.anchor_log(),
                "less": less,
            }))
        }
    };
    emit(&a.inj.output, &text)
}

pub fn true_stages(a: &InjectionArgs) -> Result<(), Failure> {
    require_format(&a.output, &[Format::Json, Format::Text])?;
    let f = load_injection(&a.injection)?;
    let table = f.true_set_table(a.stages);
    let text = match a.output.format {
        Format::Text => table
            .iter()
            .enumerate()
            .map(|(s, t)| format!("T_{s} = {:?}\n", t.as_slice()))
            .collect(),
        _ => serde_json::to_string(&table).expect("serializable") + "\n",
    };
    emit(&a.output, &text)
}

pub fn chain(a: &ExportChainArgs) -> Result<(), Failure> {
    require_format(&a.inj.output, &[Format::Json])?;
    let f = load_injection(&a.inj.injection)?;
    let steps = a.inj.stages - 1;
    let stages = match a.mode {
        PowerMode::Flat => {
            let c = FlatChain::new(&f, steps).map_err(Failure::config)?;
            (0..=steps).map(|s| json!(c.stage(s))).collect::<Vec<_>>()
        }
        PowerMode::Sharp => {
            let c = SharpChain::new(&f, steps).map_err(Failure::config)?;
            (0..=steps).map(|s| json!(c.stage(s))).collect()
        }
    };
    let mode = match a.mode {
        PowerMode::Flat => "flat",
        PowerMode::Sharp => "sharp",
    };
    emit(
        &a.inj.output,
        &to_json(&json!({"mode": mode, "injection": f, "stages": stages})),
    )
}

fn search_on<O>(o: &O, len: usize, budget: u64) -> (bool, serde_json::Value)
where
    O: QuasiOrder,
    O::Elem: Serialize + Debug,
{
    let (found, verdict) = match find_bad_prefix(o, len, budget) {
        Search::Found(b) => (true, json!({"verdict": "found", "prefix": b.as_slice()})),
        Search::Exhausted { expansions } => {
            (false, json!({"verdict": "exhausted", "expansions": expansions}))
        }
        Search::NotFoundWithinBudget { expansions } => (
            false,
            json!({"verdict": "not_found_within_budget", "expansions": expansions}),
        ),
    };
    let mut out = json!({"order": o.name(), "len": len, "budget": budget});
    out.as_object_mut()
        .expect("object")
        .extend(verdict.as_object().expect("object").clone());
    (found, out)
}

/// Exit status 1 when no bad prefix was found.
pub fn search_bad(a: &SearchArgs) -> Result<(), Failure> {
    require_format(&a.output, &[Format::Json, Format::Text])?;
    let base = load_order(&a.order.order)?;
    let (found, value) = match a.order.power {
        None => search_on(&base, a.len, a.budget),
        Some(mode) => search_on(&power_order(base, mode.into()), a.len, a.budget),
    };
    let text = match a.output.format {
        Format::Text => format!("{value}\n"),
        _ => to_json(&value),
    };
    emit(&a.output, &text)?;
    if found {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}
