//! Campaigns spread over a rayon pool.
//!
//! Each session owns its RNG stream and the channel clock is virtual, so the
//! merged, index-ordered result is identical to a serial run.

use przk_bind_core::simulator::{prepare, run_campaign, CampaignConfig, CampaignReport};
use rayon::prelude::*;

use crate::error::CliError;

/// Runs `config` on `threads` workers; `None` or `Some(1)` runs serially.
pub fn run(config: &CampaignConfig, threads: Option<usize>) -> Result<CampaignReport, CliError> {
    let threads = match threads {
        None | Some(1) => return Ok(run_campaign(config)?),
        Some(0) => return Err(CliError::usage("--parallel must be at least 1")),
        Some(n) => n,
    };
    let runner = prepare(config)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(CliError::runtime)?;
    let sessions = pool.install(|| {
        (0..config.sessions)
            .into_par_iter()
            .map(|i| runner.run_session(i))
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(CampaignReport::assemble(config.clone(), sessions))
}
