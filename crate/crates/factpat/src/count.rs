//! Ambient operation counters.
//!
//! The cost analysis of the four-stage factorization algorithm is stated in
//! terms of counted operations: field multiplications and inversions, gcd
//! calls, modular multiplications inside `powmod`, and division calls.
//! Rather than threading a counter through every arithmetic signature, a
//! [`CostTally`] is installed as a thread-local *scope*; arithmetic performed
//! while a scope is active is recorded into it.  Scopes never nest — the
//! factorization driver measures each stage separately and combines tallies
//! by addition, which keeps attribution unambiguous.

use std::cell::Cell;
use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};

/// Operation counts for one measured region.
///
/// Additions are deliberately not counted: the cost statements under test are
/// all multiplication-dominated.  `divrem_calls` and `gcd_calls` count
/// *driver-level* invocations (a gcd's internal division loop does not bump
/// `divrem_calls`), so per-stage traces match the algorithm descriptions
/// step for step.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostTally {
    /// Multiplications in `F_q` (the counted unit of the cost model).
    pub field_mults: u64,
    /// Inversions in `F_q`.
    pub field_invs: u64,
    /// Polynomial gcd invocations.
    pub gcd_calls: u64,
    /// Modular polynomial multiplications performed by `powmod`.
    pub powmod_mults: u64,
    /// Polynomial division invocations.
    pub divrem_calls: u64,
}

impl CostTally {
    /// Total of the field-level arithmetic counters (mults + invs); the
    /// quantity the average-cost theorems bound.
    pub fn field_ops(&self) -> u64 {
        self.field_mults + self.field_invs
    }
}

impl Add for CostTally {
    type Output = CostTally;
    fn add(self, rhs: CostTally) -> CostTally {
        CostTally {
            field_mults: self.field_mults + rhs.field_mults,
            field_invs: self.field_invs + rhs.field_invs,
            gcd_calls: self.gcd_calls + rhs.gcd_calls,
            powmod_mults: self.powmod_mults + rhs.powmod_mults,
            divrem_calls: self.divrem_calls + rhs.divrem_calls,
        }
    }
}

impl AddAssign for CostTally {
    fn add_assign(&mut self, rhs: CostTally) {
        *self = *self + rhs;
    }
}

thread_local! {
    static ACTIVE: Cell<bool> = const { Cell::new(false) };
    static FIELD_MULTS: Cell<u64> = const { Cell::new(0) };
    static FIELD_INVS: Cell<u64> = const { Cell::new(0) };
    static GCD_CALLS: Cell<u64> = const { Cell::new(0) };
    static POWMOD_MULTS: Cell<u64> = const { Cell::new(0) };
    static DIVREM_CALLS: Cell<u64> = const { Cell::new(0) };
}

/// Runs `f` with a fresh counter scope installed on the current thread and
/// returns its result together with the recorded tally.
///
/// Scopes do not nest: if a scope is already active the inner call records
/// into a fresh tally and the outer scope resumes afterwards (callers that
/// need aggregate numbers add the tallies explicitly).
pub fn with_scope<T>(f: impl FnOnce() -> T) -> (T, CostTally) {
    let saved = snapshot();
    let was_active = ACTIVE.with(|a| a.replace(true));
    reset();
    let out = f();
    let tally = snapshot();
    restore(saved);
    ACTIVE.with(|a| a.set(was_active));
    (out, tally)
}

fn snapshot() -> CostTally {
    CostTally {
        field_mults: FIELD_MULTS.with(Cell::get),
        field_invs: FIELD_INVS.with(Cell::get),
        gcd_calls: GCD_CALLS.with(Cell::get),
        powmod_mults: POWMOD_MULTS.with(Cell::get),
        divrem_calls: DIVREM_CALLS.with(Cell::get),
    }
}

fn reset() {
    FIELD_MULTS.with(|c| c.set(0));
    FIELD_INVS.with(|c| c.set(0));
    GCD_CALLS.with(|c| c.set(0));
    POWMOD_MULTS.with(|c| c.set(0));
    DIVREM_CALLS.with(|c| c.set(0));
}

fn restore(t: CostTally) {
    FIELD_MULTS.with(|c| c.set(t.field_mults));
    FIELD_INVS.with(|c| c.set(t.field_invs));
    GCD_CALLS.with(|c| c.set(t.gcd_calls));
    POWMOD_MULTS.with(|c| c.set(t.powmod_mults));
    DIVREM_CALLS.with(|c| c.set(t.divrem_calls));
}

#[inline]
fn bump(cell: &'static std::thread::LocalKey<Cell<u64>>) {
    if ACTIVE.with(Cell::get) {
        cell.with(|c| c.set(c.get() + 1));
    }
}

/// Records one field multiplication (no-op without an active scope).
#[inline]
pub fn record_field_mul() {
    bump(&FIELD_MULTS);
}

/// Records one field inversion.
#[inline]
pub fn record_field_inv() {
    bump(&FIELD_INVS);
}

/// Records one polynomial gcd call.
#[inline]
pub fn record_gcd_call() {
    bump(&GCD_CALLS);
}

/// Records one modular multiplication inside `powmod`.
#[inline]
pub fn record_powmod_mul() {
    bump(&POWMOD_MULTS);
}

/// Records one polynomial division call.
#[inline]
pub fn record_divrem_call() {
    bump(&DIVREM_CALLS);
}
