//! Pulse-level behavior of the T1 cell.
//!
//! The cell holds one bit of loop state. A pulse on T flips it and emits
//! Q* when it was clear or C* when it was set. A pulse on R reads it out
//! through S and clears it; R in the clear state is absorbed.

use serde::Serialize;

use super::VerifyError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
pub struct T1State {
    pub loop_set: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum T1Input {
    T,
    R,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
pub struct Emitted {
    pub q: bool,
    pub c: bool,
    pub s: bool,
}

pub fn t1_pulse_step(state: T1State, input: T1Input) -> (T1State, Emitted) {
    let mut out = Emitted::default();
    let next = match (input, state.loop_set) {
        (T1Input::T, false) => {
            out.q = true;
            true
        }
        (T1Input::T, true) => {
            out.c = true;
            false
        }
        (T1Input::R, true) => {
            out.s = true;
            false
        }
        (T1Input::R, false) => false,
    };
    (T1State { loop_set: next }, out)
}

/// Word-parallel form of [`t1_pulse_step`] for a T pulse present in `pulse` lanes.
pub(crate) fn t_step(state: &mut u64, q: &mut u64, c: &mut u64, pulse: u64) {
    *q |= pulse & !*state;
    *c |= pulse & *state;
    *state ^= pulse;
}

/// Feeds the present inputs to T in arrival order, then resets, and returns
/// `(S, C, Q)` where C and Q report whether C* and Q* fired at all.
pub fn t1_truth(inputs: [bool; 3], arrivals: [i64; 3], reset: i64) -> Result<(bool, bool, bool), VerifyError> {
    for i in 0..3 {
        if arrivals[i] >= reset {
            return Err(VerifyError::Timing(format!("arrival {} not before reset {reset}", arrivals[i])));
        }
        for j in i + 1..3 {
            if arrivals[i] == arrivals[j] {
                return Err(VerifyError::Hazard { stage: arrivals[i] });
            }
        }
    }
    let mut order = [0usize, 1, 2];
    order.sort_by_key(|&i| arrivals[i]);
    let mut st = T1State::default();
    let (mut c, mut q) = (false, false);
    for i in order {
        if inputs[i] {
            let (next, e) = t1_pulse_step(st, T1Input::T);
            st = next;
            c |= e.c;
            q |= e.q;
        }
    }
    let (_, e) = t1_pulse_step(st, T1Input::R);
    Ok((e.s, c, q))
}
