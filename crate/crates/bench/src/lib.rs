//! Shared fixtures for the criterion benches.

use std::sync::Arc;

use haar_young::{GroupFunction, GroupModel, YoungExponents};

pub fn triple() -> YoungExponents {
    YoungExponents::parse("4/3", "4/3").expect("admissible")
}

/// Two smooth, distinct nonnegative functions on `model`.
pub fn pair(model: &Arc<GroupModel>) -> (GroupFunction, GroupFunction) {
    let a = GroupFunction::from_fn(model.clone(), |x| (-x.iter().map(|v| (v - 0.1) * (v - 0.1)).sum::<f64>()).exp() + 0.01);
    let b = GroupFunction::from_fn(model.clone(), |x| 1.0 / (1.0 + x.iter().map(|v| v * v).sum::<f64>()));
    (a, b)
}

pub fn model(selector: &str) -> Arc<GroupModel> {
    GroupModel::from_selector(selector).expect("valid selector").into_arc()
}
