//! Simulator of a memristive adding machine.
//!
//! Each digit of a number is stored as the memristance of a threshold-type
//! memristor. A button press fires one programming pulse that raises the
//! memristance by a fixed step; when the readout voltage crosses the
//! comparator threshold a reset pulse returns the device to `r_min` and the
//! same pulse programs the next digit, which is the carry. Subtraction uses
//! the diminished-radix (nine's) complement.
//!
//! ```
//! use pascaline::{Machine, PascalineConfig, RadixSystem};
//!
//! let mut machine = Machine::new(PascalineConfig::default()).unwrap();
//! let dec = RadixSystem::uniform(10, 4).unwrap();
//! let sum = machine
//!     .add(&dec.from_value(1642).unwrap(), &dec.from_value(373).unwrap())
//!     .unwrap();
//! assert_eq!(dec.value(&sum.result).unwrap(), 2015);
//! ```

// `!(x > 0.0)` style checks are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod circuit;
pub mod cli;
pub mod config;
pub mod config_file;
pub mod device;
pub mod expr;
pub mod machine;
pub mod radix;
pub mod sim;
pub mod trace;

pub use circuit::{CarrySignal, DigitBlock, PulseGenerator, ResetCircuit};
pub use config::{ConfigError, DigitConfig, PascalineConfig, ThresholdRange, Violation};
pub use config_file::ConfigOverrides;
pub use device::{DeviceError, MemristorParams, MemristorState};
pub use expr::{evaluate, parse_expression, Evaluation, Expression, Op, ParseError};
pub use machine::{AddOutcome, Machine, MachineError, SubtractOutcome};
pub use radix::{Numeral, RadixError, RadixSystem};
pub use sim::{ButtonPress, Event, EventKind, SimError, Simulator, TraceOptions, Until};
pub use trace::Trace;
