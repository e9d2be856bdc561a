//! Fixtures shared by the benchmarks.

use rsgraph::code_graph::CodeGraphParams;
use rsgraph::codes::{build_chain, LinearCode};

/// The `[4, 2, 2]` code graph on `[3]^4` with generator columns 1111 and 1100.
pub fn pinned_code_graph() -> CodeGraphParams {
    let code = LinearCode::from_columns(4, vec![0b1111, 0b0011]).expect("valid generator");
    let chain = build_chain(&code, 2, None).expect("proper code");
    CodeGraphParams::new(3, 4, 2, chain).expect("valid parameters")
}
