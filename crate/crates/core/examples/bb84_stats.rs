//! Prints state-space sizes and verdicts for the bundled BB84 models.

use ccsv_core::corpus::BB84_MODEL;
use ccsv_core::equivalence::{determinize, trace_equivalent};
use ccsv_core::parser::{parse_formula, parse_model};
use ccsv_core::semantics::{build_lts, ExploreLimits};
use ccsv_core::{ast::render_trace, logic};

fn main() {
    let model = parse_model(BB84_MODEL).expect("bundled model parses");
    let limits = ExploreLimits::default();
    let formula = parse_formula("<<choose(0)>> <<'keep(1)>> tt").unwrap();
    let spec = build_lts(&model, "Spec", &limits).unwrap();
    for root in ["BB84", "BB84p", "Spec"] {
        let lts = build_lts(&model, root, &limits).unwrap();
        let v = trace_equivalent(&lts, &spec).unwrap();
        println!(
            "{root}: {} states, {} transitions, {} macro-states; ~ Spec: {} {}; formula: {}",
            lts.num_states(),
            lts.stats.transitions_count,
            determinize(&lts).unwrap().num_states(),
            v.equivalent,
            v.witness.as_deref().map(render_trace).unwrap_or_default(),
            logic::check(&lts, &formula).unwrap(),
        );
    }
}
