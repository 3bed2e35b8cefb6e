//! The forklift specifications shipped with the crate.

/// (name, source) of every bundled specification.
pub const SPECS: &[(&str, &str)] = &[
    ("v1", include_str!("../specs/v1.gr1spec")),
    ("v2", include_str!("../specs/v2.gr1spec")),
    ("v1_c1_strong_guarantee", include_str!("../specs/v1_c1_strong_guarantee.gr1spec")),
    ("v1_c2_early", include_str!("../specs/v1_c2_early.gr1spec")),
    ("v2_c3_bad_ack", include_str!("../specs/v2_c3_bad_ack.gr1spec")),
];

pub fn source(name: &str) -> Option<&'static str> {
    SPECS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn names() -> impl Iterator<Item = &'static str> {
    SPECS.iter().map(|(n, _)| *n)
}
