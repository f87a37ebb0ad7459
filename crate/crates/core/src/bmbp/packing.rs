use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::ops::AddAssign;

use num_bigint::BigInt;

use crate::instance::Instance;
use crate::rational::{common_denominator, Rational};

/// Phase-I result: whole objects grouped into `m` boxes.
///
/// Object ids are input indices of the instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Packing {
    pub boxes: Vec<Vec<usize>>,
    pub box_sizes: Vec<Rational>,
}

impl Packing {
    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn object_count(&self) -> usize {
        self.boxes.iter().map(Vec::len).sum()
    }

    /// `C_max - C_min`.
    pub fn spread(&self) -> Rational {
        let max = self.box_sizes.iter().max().cloned().unwrap_or_default();
        let min = self.box_sizes.iter().min().cloned().unwrap_or_default();
        max - min
    }
}

/// Greedy phase-I packing of a sorted instance into `m` boxes.
///
/// Each object, largest first, goes to the currently smallest box; ties go to
/// the lowest box index.
///
/// Panics if `m == 0`.
pub fn pack_phase1(instance: &Instance, m: usize) -> Packing {
    let items = instance
        .sizes()
        .iter()
        .enumerate()
        .map(|(pos, &s)| (instance.original_index(pos), s as u128));
    let (boxes, totals) = greedy_pack(items, m, 0u128);
    Packing {
        boxes,
        box_sizes: totals.into_iter().map(Rational::from).collect(),
    }
}

/// Phase-I packing over rational sizes (already in non-increasing order).
///
/// The sizes are scaled to a common denominator so the heap only compares
/// integers.
pub fn pack_rational(ids: &[usize], sizes: &[Rational], m: usize) -> Packing {
    assert_eq!(ids.len(), sizes.len());
    let denom = common_denominator(sizes);
    let scaled: Vec<BigInt> = sizes
        .iter()
        .map(|s| if s.denom() == &denom { s.numer().clone() } else { s.numer() * (&denom / s.denom()) })
        .collect();
    let widest = scaled.iter().map(BigInt::bits).max().unwrap_or(0).max(denom.bits());
    let headroom = 126 - u64::from(usize::BITS - (sizes.len() + 1).leading_zeros());
    if widest < headroom {
        let narrow = |v: &BigInt| -> i128 { v.try_into().expect("checked width") };
        let d = narrow(&denom);
        let items = ids.iter().copied().zip(scaled.iter().map(narrow));
        let (boxes, totals) = greedy_pack(items, m, 0i128);
        let box_sizes = totals.into_iter().map(|t| Rational::from_i128(t, d)).collect();
        return Packing { boxes, box_sizes };
    }
    let (boxes, totals) = greedy_pack(ids.iter().copied().zip(scaled), m, BigInt::from(0));
    Packing {
        boxes,
        box_sizes: totals
            .into_iter()
            .map(|t| Rational::new(t, denom.clone()))
            .collect(),
    }
}

pub(crate) fn greedy_pack<T>(
    items: impl IntoIterator<Item = (usize, T)>,
    m: usize,
    zero: T,
) -> (Vec<Vec<usize>>, Vec<T>)
where
    T: Ord + Clone + for<'a> AddAssign<&'a T>,
{
    assert!(m >= 1, "at least one box is required");
    let mut boxes = vec![Vec::new(); m];
    let mut heap: BinaryHeap<Reverse<(T, usize)>> =
        (0..m).map(|j| Reverse((zero.clone(), j))).collect();
    for (id, size) in items {
        let Reverse((mut load, j)) = heap.pop().expect("heap holds m boxes");
        load += &size;
        boxes[j].push(id);
        heap.push(Reverse((load, j)));
    }
    let mut totals = vec![zero; m];
    for Reverse((load, j)) in heap {
        totals[j] = load;
    }
    (boxes, totals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::validate_instance;
    use proptest::prelude::*;

    fn sizes_of(inst: &Instance, p: &Packing) -> Vec<Vec<u64>> {
        p.boxes
            .iter()
            .map(|b| b.iter().map(|&i| inst.input_sizes()[i]).collect())
            .collect()
    }

    #[test]
    fn worked_example() {
        let inst = validate_instance(&[8, 7, 6, 5, 4], Rational::from(10)).unwrap();
        let p = pack_phase1(&inst, 3);
        assert_eq!(sizes_of(&inst, &p), vec![vec![8], vec![7, 4], vec![6, 5]]);
        assert_eq!(
            p.box_sizes,
            vec![Rational::from(8), Rational::from(11), Rational::from(11)]
        );
    }

    #[test]
    fn one_object_per_box() {
        let inst = validate_instance(&[9, 4, 4, 2], Rational::from(10)).unwrap();
        let p = pack_phase1(&inst, 4);
        assert_eq!(p.boxes, vec![vec![0], vec![1], vec![2], vec![3]]);
        assert_eq!(p.box_sizes, [9, 4, 4, 2].map(Rational::from).to_vec());
    }

    #[test]
    fn equal_sizes_alternate_by_index() {
        let inst = validate_instance(&[5, 5, 5, 5], Rational::from(10)).unwrap();
        let p = pack_phase1(&inst, 2);
        assert_eq!(p.boxes, vec![vec![0, 2], vec![1, 3]]);
        assert_eq!(p.box_sizes, vec![Rational::from(10), Rational::from(10)]);
    }

    #[test]
    fn rational_path_matches_integer_path() {
        let inst = validate_instance(&[9, 8, 8, 3, 2, 1], Rational::from(10)).unwrap();
        let sizes: Vec<Rational> = inst.sizes().iter().map(|&s| Rational::from(s)).collect();
        let ids: Vec<usize> = inst.index_map().to_vec();
        assert_eq!(pack_rational(&ids, &sizes, 3), pack_phase1(&inst, 3));
    }

    /// Replays the packing and checks each receiving box was a minimum by a linear scan.
    fn replay_is_greedy(inst: &Instance, m: usize, p: &Packing) -> bool {
        let mut box_of = vec![usize::MAX; inst.len()];
        for (j, b) in p.boxes.iter().enumerate() {
            for &id in b {
                box_of[id] = j;
            }
        }
        let mut loads = vec![0u128; m];
        for (pos, &s) in inst.sizes().iter().enumerate() {
            let j = box_of[inst.original_index(pos)];
            let min = *loads.iter().min().unwrap();
            let first_min = loads.iter().position(|&l| l == min).unwrap();
            if j != first_min {
                return false;
            }
            loads[j] += s as u128;
        }
        loads.iter().zip(&p.box_sizes).all(|(&l, c)| Rational::from(l) == *c)
    }

    proptest! {
        #[test]
        fn greedy_step_invariant(sizes in prop::collection::vec(1i64..100, 1..40), m in 1usize..8) {
            let inst = validate_instance(&sizes, Rational::from(100)).unwrap();
            let p = pack_phase1(&inst, m);
            prop_assert!(replay_is_greedy(&inst, m, &p));
            prop_assert_eq!(p.object_count(), sizes.len());
        }
    }
}
