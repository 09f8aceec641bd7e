//! Benchmark fixtures shared by the criterion suites.

use transporter_core::gposet::p_subgroup_poset;
use transporter_core::group::fixtures;
use transporter_core::presheaf::constant_presheaf;
use transporter_core::{Field, GModule, GPresheaf, PSubgroupVariant};

/// Constant coefficients `module` on the Bouc poset `B_2(GL(3,2))`.
pub fn gl32_building(module: &str) -> GPresheaf {
    let g = fixtures::gl32().unwrap();
    let p = p_subgroup_poset(&g, 2, PSubgroupVariant::Bp).unwrap();
    let m = match module {
        "natural" => GModule::natural(&g, Field::Rational).unwrap(),
        "regular" => GModule::regular(&g, Field::Rational),
        _ => GModule::trivial(&g, Field::Rational),
    };
    constant_presheaf(&p, &m).unwrap()
}
