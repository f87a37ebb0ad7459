//! Problem instances: an object-size multiset plus a bin capacity.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A validated instance.
///
/// Sizes are kept sorted non-increasing. Ties keep input order, and
/// [`Instance::original_index`] maps a sorted position back to the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    sorted: Vec<u64>,
    order: Vec<usize>,
    input: Vec<u64>,
    capacity: Rational,
    bins: Option<usize>,
    stages: Option<usize>,
    split_bound: Option<usize>,
}

/// Validates raw sizes and a capacity and returns the sorted instance.
pub fn validate_instance(raw: &[i64], capacity: Rational) -> Result<Instance> {
    let sizes = raw
        .iter()
        .enumerate()
        .map(|(index, &size)| {
            if size <= 0 {
                Err(Error::NonPositiveSize { index, size })
            } else {
                Ok(size as u64)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Instance::new(sizes, capacity)
}

impl Instance {
    pub fn new(sizes: Vec<u64>, capacity: Rational) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::EmptyInstance);
        }
        if let Some(index) = sizes.iter().position(|&s| s == 0) {
            return Err(Error::NonPositiveSize { index, size: 0 });
        }
        if !capacity.is_positive() {
            return Err(Error::NonPositiveCapacity(capacity.to_string()));
        }
        let mut order: Vec<usize> = (0..sizes.len()).collect();
        // stable: equal sizes keep input order
        order.sort_by(|&a, &b| sizes[b].cmp(&sizes[a]));
        let sorted = order.iter().map(|&i| sizes[i]).collect();
        Ok(Instance {
            sorted,
            order,
            input: sizes,
            capacity,
            bins: None,
            stages: None,
            split_bound: None,
        })
    }

    pub fn with_bins(mut self, bins: usize) -> Self {
        self.bins = Some(bins);
        self
    }

    pub fn with_stages(mut self, stages: usize) -> Self {
        self.stages = Some(stages);
        self
    }

    pub fn with_split_bound(mut self, k: usize) -> Self {
        self.split_bound = Some(k);
        self
    }

    /// Number of objects.
    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// Sizes in non-increasing order.
    pub fn sizes(&self) -> &[u64] {
        &self.sorted
    }

    /// Sizes in input order.
    pub fn input_sizes(&self) -> &[u64] {
        &self.input
    }

    /// Input index of the object at sorted position `pos`.
    pub fn original_index(&self, pos: usize) -> usize {
        self.order[pos]
    }

    /// The sorted-position -> input-index map.
    pub fn index_map(&self) -> &[usize] {
        &self.order
    }

    pub fn capacity(&self) -> &Rational {
        &self.capacity
    }

    pub fn bins(&self) -> Option<usize> {
        self.bins
    }

    pub fn stages(&self) -> Option<usize> {
        self.stages
    }

    pub fn split_bound(&self) -> Option<usize> {
        self.split_bound
    }

    pub fn largest(&self) -> u64 {
        self.sorted[0]
    }

    pub fn smallest(&self) -> u64 {
        self.sorted[self.sorted.len() - 1]
    }

    /// Total size `S`.
    pub fn total(&self) -> u128 {
        self.sorted.iter().map(|&s| s as u128).sum()
    }

    pub fn total_rational(&self) -> Rational {
        Rational::from(self.total())
    }
}

/// `⌈S/C⌉`, the fewest bins any fractional packing can use.
///
/// Saturates at `usize::MAX` for absurdly small capacities.
pub fn lower_bound_bins(instance: &Instance) -> usize {
    let ratio = instance.total_rational() / instance.capacity();
    ratio.ceil().to_usize().unwrap_or(usize::MAX)
}

/// The JSON instance document read and written by the CLI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub sizes: Vec<i64>,
    pub capacity: Rational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bins: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stages: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split_bound: Option<usize>,
}

impl InstanceFile {
    pub fn into_instance(self) -> Result<Instance> {
        let mut inst = validate_instance(&self.sizes, self.capacity)?;
        inst.bins = self.bins;
        inst.stages = self.stages;
        inst.split_bound = self.split_bound;
        Ok(inst)
    }
}

impl From<&Instance> for InstanceFile {
    fn from(inst: &Instance) -> Self {
        InstanceFile {
            sizes: inst.input.iter().map(|&s| s as i64).collect(),
            capacity: inst.capacity.clone(),
            bins: inst.bins,
            stages: inst.stages,
            split_bound: inst.split_bound,
        }
    }
}
