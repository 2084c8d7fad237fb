//! Small reference instances, also bundled as JSON for the command line tool.

use crate::argmin::ProblemInstance;
use crate::geometry::Norm;
use crate::instance_file::{parse_instance_text, ParseMode, ParsedInstance};

pub const INSTANCE_A_JSON: &str = include_str!("../instances/instance_a.json");
pub const INSTANCE_B_JSON: &str = include_str!("../instances/instance_b.json");
pub const INSTANCE_C_JSON: &str = include_str!("../instances/instance_c.json");
pub const ZERO_ROWS_JSON: &str = include_str!("../instances/zero_rows.json");

/// Names accepted wherever an instance path is expected.
pub const BUNDLED: [(&str, &str); 4] = [
    ("instanceA", INSTANCE_A_JSON),
    ("instanceB", INSTANCE_B_JSON),
    ("instanceC", INSTANCE_C_JSON),
    ("zeroRows", ZERO_ROWS_JSON),
];

pub fn bundled(name: &str) -> Option<ParsedInstance> {
    BUNDLED
        .iter()
        .find(|(n, _)| n.eq_ignore_ascii_case(name))
        .map(|(_, text)| parse_instance_text(text, ParseMode::Strict).expect("bundled instances are valid"))
}

/// `n = 1`, `a_1 = a_2 = -1`, `c = 1`.
pub fn instance_a() -> ProblemInstance {
    ProblemInstance::from_i64(&[&[-1], &[-1]], &[1], Norm::LInf).expect("valid")
}

/// `n = 1`, `a_1 = -2`, `c = 1`.
pub fn instance_b() -> ProblemInstance {
    ProblemInstance::from_i64(&[&[-2]], &[1], Norm::LInf).expect("valid")
}

/// Rows `(1,0), (0,1), (1,1)`, `c = (-1,-1)`, `ℓ∞` on the variables.
pub fn instance_c() -> ProblemInstance {
    ProblemInstance::from_i64(&[&[1, 0], &[0, 1], &[1, 1]], &[-1, -1], Norm::LInf).expect("valid")
}

/// Two zero rows in the plane with `c = 0`.
pub fn zero_rows() -> ProblemInstance {
    ProblemInstance::from_i64(&[&[0, 0], &[0, 0]], &[0, 0], Norm::LInf).expect("valid")
}
