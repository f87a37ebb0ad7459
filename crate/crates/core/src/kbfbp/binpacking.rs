use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::instance::Instance;

/// Largest instance the exhaustive classical packing oracle accepts.
pub const BINPACKING_LIMIT: usize = 20;

/// Decides whether the objects fit, unsplit, into `m` bins of the instance's
/// capacity. Returns a bin per object (input order) when they do.
pub fn brute_force_binpacking_assignment(instance: &Instance, m: usize) -> Result<Option<Vec<usize>>> {
    let n = instance.len();
    if n > BINPACKING_LIMIT {
        return Err(Error::InstanceTooLarge(format!(
            "exhaustive bin packing takes at most {BINPACKING_LIMIT} objects, got {n}"
        )));
    }
    if m == 0 {
        return Ok(None);
    }
    // loads are integers, so `load <= C` iff `load <= floor(C)`
    let cap = instance.capacity().floor().to_u128().unwrap_or(u128::MAX);
    let sizes: Vec<u128> = instance.sizes().iter().map(|&s| s as u128).collect();
    if sizes[0] > cap || sizes.iter().sum::<u128>() > cap.saturating_mul(m as u128) {
        return Ok(None);
    }
    let mut loads = vec![0u128; m];
    let mut placed = vec![0usize; n];
    if place(&sizes, cap, 0, &mut loads, &mut placed) {
        let mut by_input = vec![0; n];
        for (pos, &bin) in placed.iter().enumerate() {
            by_input[instance.original_index(pos)] = bin;
        }
        Ok(Some(by_input))
    } else {
        Ok(None)
    }
}

/// [`brute_force_binpacking_assignment`] as a yes/no answer.
pub fn brute_force_binpacking(instance: &Instance, m: usize) -> Result<bool> {
    brute_force_binpacking_assignment(instance, m).map(|a| a.is_some())
}

fn place(sizes: &[u128], cap: u128, i: usize, loads: &mut [u128], placed: &mut [usize]) -> bool {
    if i == sizes.len() {
        return true;
    }
    for j in 0..loads.len() {
        // bins with equal load are interchangeable; try only the first
        if loads[..j].contains(&loads[j]) {
            continue;
        }
        if loads[j] + sizes[i] <= cap {
            loads[j] += sizes[i];
            placed[i] = j;
            if place(sizes, cap, i + 1, loads, placed) {
                return true;
            }
            loads[j] -= sizes[i];
        }
    }
    false
}
