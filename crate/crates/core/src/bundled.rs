//! Configurations shipped with the crate.

pub const BUNDLED: [(&str, &str); 8] = [
    ("dvr", include_str!("../configs/dvr.conf")),
    ("antimatter", include_str!("../configs/antimatter.conf")),
    ("zxq", include_str!("../configs/zxq.conf")),
    ("zxq-chain", include_str!("../configs/zxq-chain.conf")),
    ("d1", include_str!("../configs/d1.conf")),
    ("d2", include_str!("../configs/d2.conf")),
    ("numerical-2-3", include_str!("../configs/numerical-2-3.conf")),
    ("numerical-3-5-7", include_str!("../configs/numerical-3-5-7.conf")),
];

pub fn bundled(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}
