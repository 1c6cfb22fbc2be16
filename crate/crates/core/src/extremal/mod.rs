//! Greedy extended Bose–Burton, Bose–Burton witnesses, exhaustive extremal
//! numbers and the removal, doubling and threshold experiments.

mod bose_burton;
mod exhaustive;
mod extbb;
mod group;
mod pipelines;
mod threshold;

pub use bose_burton::{bose_burton_witness, BoseBurtonOutcome};
pub use exhaustive::{exhaustive_extremal, ExtremalMode, ExtremalResult, EXACT_MAX_RANK};
pub use extbb::{extbb_greedy, set_index, ExtbbOutcome, StarCertificate};
pub use group::{CoordinateSubgroup, DyadicGroup, MAX_GROUP_ORDER};
pub use pipelines::{
    doubling_check, erdos_stone_scan, removal_check, DoublingReport, RemovalReport, ScanRow,
};
pub use threshold::{
    threshold_demo_n21, threshold_demo_n21_with, CriticalCertificate, ThresholdCase,
    ThresholdReport,
};
