//! Documents bundled with the binary.

pub const NAMES: [&str; 3] = ["dp4", "chatelet", "p1xp1"];

pub fn get(name: &str) -> Option<&'static str> {
    match name {
        "dp4" => Some(include_str!("../fixtures/dp4.toml")),
        "chatelet" => Some(include_str!("../fixtures/chatelet.toml")),
        "p1xp1" => Some(include_str!("../fixtures/p1xp1.toml")),
        _ => None,
    }
}
