//! Named example representations.

use super::{parse_config, Representation};

pub const HEISENBERG: &str = "# H = UT3(Z)\nring: Z\nfull_center: false\ngenerators: {\n}\n";

pub const ZXZ_LAME: &str = "\
# <a1, a2, b> over Z x Z with b23 = e1: b centralizes a1 but e1 is a zero divisor
ring: Z x Z
full_center: false
generators: {
  b: {e12: 0, e13: 0, e23: (1, 0)}
}
";

pub const ZTHETA_LAME: &str = "\
# the same group over Z[theta], b23 = theta
ring: Z[theta]
full_center: false
generators: {
  b: {e12: 0, e13: 0, e23: theta}
}
";

pub const TAU_FAILS_ZXZ: &str = "\
# both slices of UT3(Z x Z) are all of Z x Z
ring: Z x Z
full_center: false
generators: {
  y: {e12: (1, 0), e13: 0, e23: 0},
  x: {e12: 0, e13: 0, e23: (0, 1)}
}
";

pub const NAMES: [&str; 4] = ["zxz-lame", "ztheta-lame", "tau-fails-zxz", "heisenberg"];

pub fn source(name: &str) -> Option<&'static str> {
    Some(match name {
        "zxz-lame" => ZXZ_LAME,
        "ztheta-lame" => ZTHETA_LAME,
        "tau-fails-zxz" => TAU_FAILS_ZXZ,
        "heisenberg" => HEISENBERG,
        _ => return None,
    })
}

pub fn by_name(name: &str) -> Option<Representation> {
    source(name).map(|s| parse_config(s).expect("fixtures parse"))
}

pub fn zxz_lame() -> Representation {
    by_name("zxz-lame").expect("known")
}

pub fn ztheta_lame() -> Representation {
    by_name("ztheta-lame").expect("known")
}

pub fn tau_fails_zxz() -> Representation {
    by_name("tau-fails-zxz").expect("known")
}

pub fn heisenberg() -> Representation {
    by_name("heisenberg").expect("known")
}
