//! Bundled demo datasets.

use serde::Deserialize;

use crate::error::CliResult;
use crate::problem::Problem;

pub const FIXTURES: [(&str, &str); 10] = [
    ("optimal", include_str!("../fixtures/optimal.json")),
    ("y2-closure", include_str!("../fixtures/y2-closure.json")),
    ("y3", include_str!("../fixtures/y3.json")),
    ("w1", include_str!("../fixtures/w1.json")),
    ("w2", include_str!("../fixtures/w2.json")),
    ("lastex", include_str!("../fixtures/lastex.json")),
    ("hexagon", include_str!("../fixtures/hexagon.json")),
    ("prop13", include_str!("../fixtures/prop13.json")),
    ("weak-vs-strict", include_str!("../fixtures/weak-vs-strict.json")),
    ("square", include_str!("../fixtures/square.json")),
];

pub fn names() -> Vec<&'static str> {
    FIXTURES.iter().map(|(n, _)| *n).collect()
}

pub fn text(name: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn load(name: &str) -> CliResult<Option<Problem>> {
    text(name).map(Problem::parse).transpose()
}

/// The `source` citation of a fixture.
pub fn source(name: &str) -> Option<String> {
    #[derive(Deserialize)]
    struct Source {
        source: String,
    }
    text(name).and_then(|t| serde_json::from_str::<Source>(t).ok()).map(|s| s.source)
}
