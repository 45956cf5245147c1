//! Bundled PD fixtures.

use crate::linkio::{parse_pd, LinkDiagram};

pub const FIXTURES: &[(&str, &str)] = &[
    ("unknot", include_str!("../fixtures/unknot.pd")),
    ("hopf_pos", include_str!("../fixtures/hopf_pos.pd")),
    ("hopf_neg", include_str!("../fixtures/hopf_neg.pd")),
    ("trefoil_right", include_str!("../fixtures/trefoil_right.pd")),
    ("trefoil_left", include_str!("../fixtures/trefoil_left.pd")),
    ("4_1", include_str!("../fixtures/4_1.pd")),
    ("5_1", include_str!("../fixtures/5_1.pd")),
    ("5_2", include_str!("../fixtures/5_2.pd")),
    ("6_1", include_str!("../fixtures/6_1.pd")),
    ("6_2", include_str!("../fixtures/6_2.pd")),
    ("6_3", include_str!("../fixtures/6_3.pd")),
    ("7_1", include_str!("../fixtures/7_1.pd")),
    ("8_19", include_str!("../fixtures/8_19.pd")),
];

pub fn fixture(name: &str) -> Option<LinkDiagram> {
    FIXTURES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| parse_pd(t).expect("bundled fixture parses"))
}

pub fn all() -> Vec<(&'static str, LinkDiagram)> {
    FIXTURES
        .iter()
        .map(|(n, t)| (*n, parse_pd(t).expect("bundled fixture parses")))
        .collect()
}
