//! Specification patterns and past-time operators, compiled to plain GR(1)
//! constraints over fresh auxiliary variables.

pub mod equivalence;
pub mod ltl;
pub mod past;
pub mod templates;

pub use equivalence::{check_template_equivalence, Counterexample, Direction};
pub use past::compile_past;
pub use templates::{catalog, expand_pattern, CatalogEntry, TemplateExpansion};

/// Human-readable catalog, as printed by `gr1 patterns list`.
pub fn catalog_text() -> String {
    let mut out = String::new();
    for e in catalog() {
        out.push_str(&format!(
            "{}  {}\n     syntax:   {}\n     LTL:      {}\n     template: {}\n",
            e.id, e.name, e.syntax, e.ltl, e.template
        ));
    }
    out
}
