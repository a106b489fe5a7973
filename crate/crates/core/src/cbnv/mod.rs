//! The distant call-by-name and call-by-value calculi and their embeddings.

mod check;
mod embed;
mod reduce;

pub use check::{
    c_divergence_certificate, c_meaningful, c_observable, c_testing_context, project, simulate_check,
    transfer_check, typing_transfer_check, CVerdict, Projection, SimReport, SimStep, Transfer, TypingTransfer,
    SIM_WINDOW,
};
pub use embed::{embed, embed_ctx, in_image, Calc};
pub use reduce::{c_contract, c_normalize, c_redexes, c_reducts, c_step, COutcome, CRedex, CRule, CTraceStep};
