//! Dictionaries, power allocations, message encoding and the AWGN channel.

mod allocation;
mod channel;
mod design;
mod dictionary;
mod implicit;
mod message;

pub use allocation::{make_power_allocation, AllocationKind, PowerAllocation};
pub use channel::{codeword, transmit, transmit_with_noise};
pub use design::Design;
pub use dictionary::{gaussian_column, Dictionary};
pub use implicit::ImplicitDictionary;
pub use message::{bits_to_indices, encode, indices_to_bits, CoefficientVector};
