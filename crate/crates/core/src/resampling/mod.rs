//! Local resampling: simple switchings of the boundary edges of a ball, the
//! resulting rank-`4|W|` perturbation of `H`, and the Woodbury-type operator
//! that expresses the new resolvent through the old one.

mod data;
mod exchange;
mod operator;

pub use data::{apply, propose, reverse, switch, ResamplingData, Switched};
pub use exchange::{exchange_pairs, exchange_report, exchangeability_test, ExchangeReport, ExchangeSample};
pub use operator::{resolvent_update_expansion, woodbury_f, ExpansionReport, SwitchOperator};
