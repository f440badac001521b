//! Closed forms for the θ-chains of `g_m = x^4 + xy^3 + yz^3 + zw^3 + t^m`
//! over F_2 with multiplier `x^2 y z^2 w^3 t^{1023-2m}`, `1 <= m <= 511`.

pub const BASE_QUARTIC: &str = "x^4 + x*y^3 + y*z^3 + z*w^3";
pub const FAMILY_VARS: &str = "x,y,z,w,t";

pub fn family_member(m: u64) -> String {
    format!("{BASE_QUARTIC} + t^{m}")
}

pub fn multiplier(m: u64) -> String {
    format!("x^2*y*z^2*w^3*t^{}", 1023 - 2 * m)
}

/// `a_2, ..., a_10` for the given m.
pub fn expected_chain(m: u64) -> Vec<String> {
    assert!((1..=511).contains(&m), "closed forms cover 1 <= m <= 511");
    if m % 2 == 1 {
        vec![
            format!("x^3*y^2*z^2*w*t^{}", 511 - m),
            "x*y*z^2*t^255".into(),
            "x^2*z*w*t^127".into(),
            "x^3*y*t^63".into(),
            "x^3*w*t^31".into(),
            "x^3*z*t^15".into(),
            "x*z^2*w*t^7".into(),
            "x^2*z^2*t^3".into(),
            "x*y*z*w*t".into(),
        ]
    } else if m % 4 == 2 {
        let r = m / 2;
        vec![
            format!("x^3*y^2*z^2*w*t^{} + x*y^2*z^2*w*t^{}", 511 - m, 511 - r),
            format!("x^3*y*z^2*t^{} + x*y*z^2*t^255", 255 - r),
            format!("x^2*z*w*t^127 + z*w*t^{}", 127 + r),
            format!("x^3*y*t^63 + x*y*t^{}", 63 + r),
            format!("x^3*w*t^31 + x*w*t^{}", 31 + r),
            format!("x^3*z*t^15 + x*z*t^{}", 15 + r),
            "x*z^2*w*t^7".into(),
            format!("x^2*z^2*t^3 + z^2*t^{}", 3 + r),
            "x*y*z*w*t".into(),
        ]
    } else {
        let s = m / 4;
        // y z^2 (x^3 t^a + x^2 t^b + x t^c + t^d) and its relatives.
        let four = |pre: &str, e: [u64; 4]| {
            format!(
                "x^3*{pre}*t^{} + x^2*{pre}*t^{} + x*{pre}*t^{} + {pre}*t^{}",
                e[0], e[1], e[2], e[3]
            )
        };
        vec![
            format!(
                "x^3*y^2*z^2*w*t^{} + x*y^2*z^2*w*t^{}",
                511 - 4 * s,
                511 - 2 * s
            ),
            four("y*z^2", [255 - 2 * s, 255 - s, 255, 255 + s]),
            four("z*w", [127 - s, 127, 127 + s, 127 + 2 * s]),
            four("y", [63, 63 + s, 63 + 2 * s, 63 + 3 * s]),
            four("w", [31, 31 + s, 31 + 2 * s, 31 + 3 * s]),
            four("z", [15, 15 + s, 15 + 2 * s, 15 + 3 * s]),
            format!("x*z^2*w*t^7 + z^2*w*t^{}", 7 + s),
            format!("x^2*z^2*t^3 + z^2*t^{}", 3 + 2 * s),
            format!("x*y*z*w*t + y*z*w*t^{}", 1 + s),
        ]
    }
}
