pub mod exact;
pub mod closure;
pub mod ore;
pub mod seqrep;
pub mod conv;
pub mod hyperexp;
pub mod cli;
