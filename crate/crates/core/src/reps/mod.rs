//! Representations: hook partitions, explicit modules and tensor products.

pub mod hook;
pub mod module;
pub mod tensor;

pub use hook::{
    added_box_index, box_addable, casimir_diff, casimir_value, hook_to_weight, pieri, pieri_chains, HookPartition,
};
pub use module::{ModuleKind, RepModule};
pub use tensor::TensorProduct;
