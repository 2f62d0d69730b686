//! Runs the bounded and inductive engines side by side and takes the
//! first definite answer.
//!
//! Bounded search is complete for reachable systems (it will hit the
//! shortest run eventually) and the inductive engine closes the
//! unreachable side, so together they decide everything the resource
//! limits allow.  The loser is cancelled; its partial work is dropped.

use std::sync::mpsc;
use std::time::Duration;

use super::{bmc, ic3, CheckResult, Control};
use crate::ts::TransitionSystem;

/// How the winning engine is reported.
pub const ENGINE_BMC: &str = "bmc";
pub const ENGINE_IC3: &str = "ic3";

/// Races bounded search on `bmc_ts` against inductive strengthening on
/// `ind_ts` (which must be functional; pass the same system twice when
/// it serves both roles).  Returns the answer, the engine that found
/// it, and that engine's depth (bound reached or frames built).
pub fn check(
    ind_ts: &TransitionSystem,
    bmc_ts: &TransitionSystem,
    max_bound: usize,
    max_frames: usize,
    ctrl: &Control,
) -> (CheckResult, &'static str, usize) {
    let inner = match ctrl.deadline() {
        Some(d) => Control::with_deadline(d),
        None => Control::unlimited(),
    };
    let (tx, rx) = mpsc::channel();
    std::thread::scope(|s| {
        let txb = tx.clone();
        let ic = &inner;
        s.spawn(move || {
            let (r, depth) = bmc::check(bmc_ts, max_bound, ic);
            let _ = txb.send((ENGINE_BMC, r, depth));
        });
        s.spawn(move || {
            let (r, frames) = ic3::check(ind_ts, max_frames, ic);
            let _ = tx.send((ENGINE_IC3, r, frames));
        });

        let mut pending = 2;
        let mut fallback = None;
        loop {
            if pending == 0 {
                // Both gave up; report the first engine's excuse.
                break fallback.expect("two engines sent two messages");
            }
            match rx.recv_timeout(Duration::from_millis(20)) {
                Ok((engine, r @ CheckResult::Unknown(_), depth)) => {
                    pending -= 1;
                    if fallback.is_none() {
                        fallback = Some((r, engine, depth));
                    }
                }
                Ok((engine, r, depth)) => {
                    inner.cancel();
                    break (r, engine, depth);
                }
                Err(mpsc::RecvTimeoutError::Timeout) => {
                    if ctrl.should_stop() {
                        inner.cancel();
                    }
                }
                Err(mpsc::RecvTimeoutError::Disconnected) => {
                    unreachable!("senders outlive the loop")
                }
            }
        }
    })
}
