//! Shared inputs for the benchmarks.

use eorient::generators::generate;
use eorient::{FamilySpec, Graph};

/// Named Eulerian graphs of increasing size.
pub fn counting_inputs() -> Vec<(&'static str, Graph)> {
    [
        ("K5", FamilySpec::Complete(5)),
        ("torus3x4", FamilySpec::Torus(3, 4)),
        ("torus4x4", FamilySpec::Torus(4, 4)),
        ("aztec3", FamilySpec::Aztec(3)),
    ]
    .into_iter()
    .map(|(name, spec)| (name, generate(&spec).expect("fixture families are valid")))
    .collect()
}
