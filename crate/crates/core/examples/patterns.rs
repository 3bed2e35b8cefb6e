//! Expand each catalog pattern and check its template against the LTL meaning.

use gr1kit::lang::ast::{PatternId, PatternInstance};
use gr1kit::lang::{parse_expr, pretty_expr};
use gr1kit::patterns::{catalog_text, check_template_equivalence, expand_pattern};

fn main() {
    println!("{}", catalog_text());
    for id in PatternId::ALL {
        let names: &[&str] = if id == PatternId::P26 { &["p", "s"] } else { &["p", "q", "r"] };
        let inst = PatternInstance {
            pattern: id,
            params: names.iter().zip(["a", "b", "c"]).map(|(n, v)| (n.to_string(), parse_expr(v).unwrap())).collect(),
            bound: (id == PatternId::P15).then_some(2),
        };
        let exp = expand_pattern(&inst, &mut |hint| format!("m_{hint}"));
        println!("{id}:");
        for (what, es) in [("initial", &exp.initial), ("safety", &exp.safety), ("justice", &exp.justice)] {
            for e in es {
                println!("  {what:<8} {}", pretty_expr(e));
            }
        }
        match check_template_equivalence(&inst, &["a", "b", "c"], 8) {
            Ok(()) => println!("  template equals its LTL formula"),
            Err(c) => println!("  mismatch: {c}"),
        }
    }
}
