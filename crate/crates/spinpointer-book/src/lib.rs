//! The guide in `book/src`, compiled so its listings run as doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/model.md")]
pub mod model {}
#[doc = include_str!("../../../book/src/spin.md")]
pub mod spin {}
#[doc = include_str!("../../../book/src/kraus.md")]
pub mod kraus {}
#[doc = include_str!("../../../book/src/fidelity.md")]
pub mod fidelity {}
#[doc = include_str!("../../../book/src/disturbance.md")]
pub mod disturbance {}
#[doc = include_str!("../../../book/src/asymptotics.md")]
pub mod asymptotics {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
