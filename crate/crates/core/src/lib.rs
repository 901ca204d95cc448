pub mod action;
pub mod classify;
pub mod cli;
pub mod config;
pub mod error;
pub mod gray;
pub mod lemma_lab;
pub mod seqspace;
pub mod unconditionality;
pub mod witness;

pub use config::Config;
pub use error::{Error, Result};
pub use seqspace::{Exponent, ExponentTriple, FinSeq};
