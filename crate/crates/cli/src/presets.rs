//! Configurations shipped with the binary (`presets/*.json`).

const PRESETS: &[(&str, &str)] = &[
    ("bound-example", include_str!("../presets/bound-example.json")),
    ("groups", include_str!("../presets/groups.json")),
    ("transfer-corpus", include_str!("../presets/transfer-corpus.json")),
    ("thm44-small", include_str!("../presets/thm44-small.json")),
    ("thm44-sweep", include_str!("../presets/thm44-sweep.json")),
    ("thm45-small", include_str!("../presets/thm45-small.json")),
    ("thm45-sweep", include_str!("../presets/thm45-sweep.json")),
    ("lpoly-handlist", include_str!("../presets/lpoly-handlist.json")),
];

pub fn get(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn names() -> Vec<&'static str> {
    PRESETS.iter().map(|(n, _)| *n).collect()
}
