//! Frozen reference tables, embedded at compile time. The verification
//! suites regenerate each table from the braid matrix and compare against
//! these; the CLI can swap in an external file for any of them.

pub const OMEGA_X_XI: &str = include_str!("../fixtures/r_omega_xxi.txt");
pub const OMEGA_D_XI: &str = include_str!("../fixtures/r_omega_dxi.txt");
pub const OMEGA_X_D: &str = include_str!("../fixtures/r_omega_xd.txt");
pub const OMEGA_INV_X_XI: &str = include_str!("../fixtures/r_omega_inv_xxi.txt");
pub const OMEGA_INV_D_XI: &str = include_str!("../fixtures/r_omega_inv_dxi.txt");
pub const OMEGA_INV_X_D: &str = include_str!("../fixtures/r_omega_inv_xd.txt");
pub const RTT: &str = include_str!("../fixtures/rtt_relations.txt");

pub const NAMES: [&str; 7] = [
    "omega-x-xi",
    "omega-d-xi",
    "omega-x-d",
    "omega-inv-x-xi",
    "omega-inv-d-xi",
    "omega-inv-x-d",
    "rtt",
];

pub fn fixture_text(name: &str) -> Option<&'static str> {
    match name {
        "omega-x-xi" => Some(OMEGA_X_XI),
        "omega-d-xi" => Some(OMEGA_D_XI),
        "omega-x-d" => Some(OMEGA_X_D),
        "omega-inv-x-xi" => Some(OMEGA_INV_X_XI),
        "omega-inv-d-xi" => Some(OMEGA_INV_D_XI),
        "omega-inv-x-d" => Some(OMEGA_INV_X_D),
        "rtt" => Some(RTT),
        _ => None,
    }
}
