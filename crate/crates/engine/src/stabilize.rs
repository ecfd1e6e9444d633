use graph_core::Configuration;
use lcl_core::is_legal;

use crate::{EngineError, Network, Protocol};

/// Stabilization point found by [`Network::run_until_stable`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stable {
    /// First round `t` from which the host configuration is legal and stays
    /// identical through the confirm window.
    pub round: u64,
    pub config: Configuration,
}

impl<P: Protocol> Network<P> {
    /// Runs until the host configuration is legal and unchanged for
    /// `confirm_window` further rounds, with no adversary action pending.
    /// `observer` sees the network after every round, including the
    /// starting one. Fails after `max_rounds` rounds of this call.
    pub fn run_until_stable(
        &mut self,
        max_rounds: u64,
        confirm_window: u64,
        mut observer: impl FnMut(&mut Network<P>),
    ) -> Result<Stable, EngineError> {
        let deadline = self.round() + max_rounds;
        let mut candidate: Option<(u64, Configuration)> = None;
        loop {
            observer(self);
            let config = self.host_config();
            let legal = !self.has_pending_actions() && is_legal(self.protocol().lcl(), self.graph(), &config);
            candidate = match candidate {
                Some((t, c)) if legal && c == config => Some((t, c)),
                _ if legal => Some((self.round(), config)),
                _ => None,
            };
            if let Some((t, c)) = &candidate {
                if self.round() - t >= confirm_window {
                    return Ok(Stable { round: *t, config: c.clone() });
                }
            }
            if self.round() >= deadline {
                return Err(EngineError::Timeout { max_rounds });
            }
            self.run_round()?;
        }
    }
}
