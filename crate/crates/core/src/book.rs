// Every chapter of the guide is pulled in as a doc comment so that
// `cargo test --doc` runs its code blocks. One module per chapter keeps
// failures traceable to a file.

#[doc = include_str!("../../../book/src/introduction.md")]
mod introduction {}

#[doc = include_str!("../../../book/src/marginal.md")]
mod marginal {}

#[doc = include_str!("../../../book/src/solver.md")]
mod solver {}

#[doc = include_str!("../../../book/src/baselines.md")]
mod baselines {}

#[doc = include_str!("../../../book/src/datagen.md")]
mod datagen {}

#[doc = include_str!("../../../book/src/bench.md")]
mod bench {}
