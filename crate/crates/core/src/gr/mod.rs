//! Envelope representation of activated random walks.
//!
//! Every site carries a tape of instructions ([`Instruction::Jump`] or
//! [`Instruction::Sleep`]). An active particle acting at a site burns the next
//! envelope there and executes it; a sleep envelope only takes effect when
//! the particle is alone. Particles stepping off the ball are absorbed.
//! Because the final configuration and the per-site envelope counts do not
//! depend on which active particle acts first, the continuous-time clock is
//! replaced by an [`OrderPolicy`].

mod check;
mod stabilize;
mod state;
mod tape;

pub use check::{
    compare_outcomes, random_instance, random_modification, verify_abelian, verify_monotone,
    CheckReport, CheckStatus, Divergence, Instance, Modification,
};
pub use stabilize::{stabilize, OrderPolicy, StabilizeOutcome, DEFAULT_STEP_CAP};
pub use state::{apply_instruction, snapshot, Configuration, Event, Odometer};
pub use tape::{
    draw_instruction, EnvelopeTape, Envelope, Instruction, SleepInsertions, TapeParams, TapeSet,
};
