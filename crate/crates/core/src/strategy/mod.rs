//! Strategies: controllers for realizable games, counter-strategies for
//! unrealizable ones, their export formats and independent checks.

pub mod controller;
pub mod counter;
pub mod export;
pub mod verify;

pub use controller::{extract_controller, Annotation, Controller, ControllerState, ReasonKind, Transition};
pub use counter::{extract_counterstrategy, CounterAnnotation, CounterKind, CounterState, CounterStrategy};
pub use export::{controller_dot, controller_json, counter_dot, counter_json, import_controller, ExportError, SCHEMA};
pub use verify::{check_annotations, check_counter_memory, verify_controller, verify_counterstrategy, Violation};
