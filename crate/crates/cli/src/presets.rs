//! Scenarios shipped with the binary.

pub const PRESETS: [(&str, &str); 4] = [
    ("octant-oracle", include_str!("../presets/octant-oracle.toml")),
    ("pioneer", include_str!("../presets/pioneer.toml")),
    ("static", include_str!("../presets/static.toml")),
    ("theta-sweep", include_str!("../presets/theta-sweep.toml")),
];

pub fn preset(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

pub fn names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|(n, _)| *n)
}
