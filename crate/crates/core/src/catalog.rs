//! Built-in groups used by the sweeps, the acceptance suite and the service.

use crate::error::GroupError;
use crate::group::{from_cayley_file, FiniteGroup};
use crate::verify::enumerate_abelian;

const Q8_TABLE: &str = include_str!("../fixtures/q8.json");

/// The quaternion group of order 8, from the bundled Cayley table.
pub fn quaternion() -> FiniteGroup {
    from_cayley_file(Q8_TABLE)
        .expect("bundled Q8 table is valid")
        .with_descriptor(quaternion_descriptor())
}

/// `table:` descriptor pointing at the bundled Q8 fixture.
pub fn quaternion_descriptor() -> String {
    format!("table:{}/fixtures/q8.json", env!("CARGO_MANIFEST_DIR"))
}

/// Descriptors of every catalog group, in a fixed order.
pub fn catalog() -> Vec<String> {
    let mut out: Vec<String> = (2..=20).map(|n| format!("cyclic:{n}")).collect();
    out.extend((3..=12).map(|n| format!("dihedral:{n}")));
    out.extend(enumerate_abelian(32).into_iter().filter(|d| d.starts_with("product:")));
    out.push(quaternion_descriptor());
    out.extend(
        [
            "perm:(1 2 3),(2 3 4)",
            "perm:(1 2),(1 2 3 4)",
            "product:dihedral:3*cyclic:3",
            "product:dihedral:3*cyclic:2",
            "product:cyclic:3*cyclic:3*cyclic:3*cyclic:3",
            "product:cyclic:3*cyclic:2*cyclic:2*cyclic:2*cyclic:2",
            "product:cyclic:7*cyclic:7*cyclic:2",
        ]
        .map(String::from),
    );
    out
}

/// Catalog descriptors whose group has at most `max_order` elements.
pub fn catalog_up_to(max_order: usize) -> Result<Vec<String>, GroupError> {
    let mut out = Vec::new();
    for d in catalog() {
        if crate::descriptor::build_group(&d, crate::group::DEFAULT_ORDER_CAP)?.order() <= max_order {
            out.push(d);
        }
    }
    Ok(out)
}
