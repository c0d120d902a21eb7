//! The shipped scenario corpus (`examples/*.json`), compiled in.

use crate::document::{load_scenario, NamedScenario};

const DOCUMENTS: &[(&str, &str)] = &[
    ("trivial_p2.json", include_str!("../examples/trivial_p2.json")),
    ("less_trivial_p3.json", include_str!("../examples/less_trivial_p3.json")),
    ("less_less_trivial_p3.json", include_str!("../examples/less_less_trivial_p3.json")),
    ("p1_circle.json", include_str!("../examples/p1_circle.json")),
    ("p1_circle_d2.json", include_str!("../examples/p1_circle_d2.json")),
    ("p2_circle.json", include_str!("../examples/p2_circle.json")),
    ("p3_circle.json", include_str!("../examples/p3_circle.json")),
    ("p2xp1_circle.json", include_str!("../examples/p2xp1_circle.json")),
    ("p1_unstable.json", include_str!("../examples/p1_unstable.json")),
    ("p1xp1_torus.json", include_str!("../examples/p1xp1_torus.json")),
    ("p2_torus.json", include_str!("../examples/p2_torus.json")),
    ("su2_p3.json", include_str!("../examples/su2_p3.json")),
    ("su2_p5.json", include_str!("../examples/su2_p5.json")),
    ("su2_p2_quadrics.json", include_str!("../examples/su2_p2_quadrics.json")),
    ("su2_p1_unstable.json", include_str!("../examples/su2_p1_unstable.json")),
];

/// Every shipped scenario, in a fixed order.
pub fn default_corpus() -> Vec<NamedScenario> {
    DOCUMENTS
        .iter()
        .map(|(file, text)| load_scenario(text, file).expect("shipped scenarios are valid"))
        .collect()
}

pub fn corpus_scenario(name: &str) -> Option<NamedScenario> {
    default_corpus().into_iter().find(|s| s.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_loads() {
        let corpus = default_corpus();
        assert_eq!(corpus.len(), DOCUMENTS.len());
        assert!(corpus_scenario("p2_circle").is_some());
        assert!(corpus_scenario("nope").is_none());
    }
}
