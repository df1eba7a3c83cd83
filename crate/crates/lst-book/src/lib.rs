//! The guide under `book/` compiled as doc modules, so `cargo test --doc`
//! runs every snippet. One module per chapter keeps failures traceable.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/rcr.md")]
pub mod rcr {}
#[doc = include_str!("../../../book/src/hqla.md")]
pub mod hqla {}
#[doc = include_str!("../../../book/src/reverse_stress.md")]
pub mod reverse_stress {}
#[doc = include_str!("../../../book/src/optimizer.md")]
pub mod optimizer {}
#[doc = include_str!("../../../book/src/cash_buffer.md")]
pub mod cash_buffer {}
#[doc = include_str!("../../../book/src/special_functions.md")]
pub mod special_functions {}
#[doc = include_str!("../../../book/src/swing.md")]
pub mod swing {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
