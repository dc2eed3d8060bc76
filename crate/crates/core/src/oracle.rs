//! Brute-force ground truth: exact group enumeration from generators, naive
//! conjugacy-class partitions, naive centralizers and exhaustive conjugator
//! search. Everything here is simple and exact; the rest of the crate is
//! verified against it at desk scale.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Fel;
use crate::groups::{contains, group_order, GroupSpec};
use crate::matrix::MatrixFq;

/// Default enumeration cap on the group order.
pub const DEFAULT_MAX_ORDER: u64 = 10_000_000;

/// A fully enumerated finite matrix group.
#[derive(Clone, Debug)]
pub struct EnumeratedGroup {
    pub spec: GroupSpec,
    /// Every element, sorted by its canonical entry serialization, so the
    /// listing is independent of how the group was generated.
    pub elements: Vec<MatrixFq>,
    index: HashMap<Vec<Fel>, usize>,
}

fn element_key(m: &MatrixFq) -> Vec<Fel> {
    let n = m.n();
    (0..n).flat_map(|i| (0..n).map(move |j| m.get(i, j))).collect()
}

impl EnumeratedGroup {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Position of an element in the canonical listing.
    pub fn position(&self, m: &MatrixFq) -> Option<usize> {
        self.index.get(&element_key(m)).copied()
    }

    pub fn contains_element(&self, m: &MatrixFq) -> bool {
        self.position(m).is_some()
    }
}

/// Breadth-first closure of a generator set under multiplication. In a
/// finite group closure under products already yields the generated
/// subgroup, inverses included.
fn closure(
    identity: &MatrixFq,
    gens: &[MatrixFq],
    limit: usize,
) -> Result<(Vec<MatrixFq>, HashMap<Vec<Fel>, usize>)> {
    let mut elements = vec![identity.clone()];
    let mut index = HashMap::new();
    index.insert(element_key(identity), 0usize);
    let mut frontier = vec![0usize];
    while let Some(i) = frontier.pop() {
        let x = elements[i].clone();
        for g in gens {
            let y = x.mul(g);
            let key = element_key(&y);
            if !index.contains_key(&key) {
                if elements.len() >= limit {
                    return Err(Error::CapExceeded {
                        order: limit as u64,
                        cap: limit as u64,
                    });
                }
                index.insert(key, elements.len());
                frontier.push(elements.len());
                elements.push(y);
            }
        }
    }
    Ok((elements, index))
}

/// Enumerate the group with the default order cap.
pub fn enumerate_group(spec: &GroupSpec) -> Result<EnumeratedGroup> {
    enumerate_group_with_cap(spec, DEFAULT_MAX_ORDER)
}

/// Enumerate every element of the group.
///
/// Generators are found by a deterministic random search: candidate matrices
/// are drawn from a fixed-seed stream, kept when they pass the membership
/// test, and added as generators while the closure is still smaller than the
/// group order. The closure is always completed (never truncated at the
/// target), so the result is a genuine subgroup; reaching exactly the order
/// formula certifies the enumeration.
pub fn enumerate_group_with_cap(spec: &GroupSpec, cap: u64) -> Result<EnumeratedGroup> {
    enumerate_group_seeded(spec, cap, 0)
}

/// Same as [`enumerate_group_with_cap`] with an explicit seed for the
/// candidate stream; distinct seeds give distinct generator sets but must
/// produce the same element set.
pub fn enumerate_group_seeded(spec: &GroupSpec, cap: u64, seed: u64) -> Result<EnumeratedGroup> {
    let order = group_order(spec);
    if order > cap as u128 {
        return Err(Error::CapExceeded {
            order: order.min(u64::MAX as u128) as u64,
            cap,
        });
    }
    let target = order as usize;
    let field = spec.field.clone();
    let n = spec.n;
    let qf = field.q();
    let identity = MatrixFq::identity(&field, n);
    let mut gens: Vec<MatrixFq> = Vec::new();
    let mut elements = vec![identity.clone()];
    let mut index = HashMap::new();
    index.insert(element_key(&identity), 0usize);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Enough misses to make an incomplete enumeration vanishingly unlikely:
    // a candidate lands in the group with probability |G|/q^(n²) ≥ q^(-n²),
    // and missing cosets make up at least half of |G|.
    let budget: u64 = 4_000_000;
    let mut misses = 0u64;
    while elements.len() < target {
        let rows: Vec<Vec<Fel>> = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(0..qf)).collect())
            .collect();
        let cand = MatrixFq::from_rows(&field, &rows);
        if !contains(spec, &cand) || index.contains_key(&element_key(&cand)) {
            misses += 1;
            if misses > budget {
                return Err(Error::InvalidSpec(format!(
                    "generator search stalled for {} at {} of {} elements",
                    spec.name(),
                    elements.len(),
                    target
                )));
            }
            continue;
        }
        misses = 0;
        gens.push(cand);
        let (els, idx) = closure(&identity, &gens, target + 1)?;
        if els.len() > target {
            return Err(Error::InvalidSpec(format!(
                "closure exceeded the order formula for {}",
                spec.name()
            )));
        }
        elements = els;
        index = idx;
    }
    elements.sort_by_cached_key(element_key);
    let index = elements
        .iter()
        .enumerate()
        .map(|(i, m)| (element_key(m), i))
        .collect();
    Ok(EnumeratedGroup { spec: spec.clone(), elements, index })
}

/// Exact conjugacy-class partition: indices into `g.elements`, each class
/// sorted, classes ordered by their least member.
pub fn brute_classes(g: &EnumeratedGroup) -> Vec<Vec<usize>> {
    let mut seen = vec![false; g.elements.len()];
    let mut classes = Vec::new();
    for i in 0..g.elements.len() {
        if seen[i] {
            continue;
        }
        let mut class = Vec::new();
        for h in &g.elements {
            let y = g.elements[i].conjugate_by(h);
            let j = g.position(&y).expect("conjugate escaped the group");
            if !seen[j] {
                seen[j] = true;
                class.push(j);
            }
        }
        class.sort_unstable();
        classes.push(class);
    }
    classes
}

/// Every element of the group commuting with `x`.
pub fn brute_centralizer(g: &EnumeratedGroup, x: &MatrixFq) -> Vec<MatrixFq> {
    g.elements
        .iter()
        .filter(|h| h.mul(x) == x.mul(h))
        .cloned()
        .collect()
}

/// Exhaustive search for `g` with `g⁻¹ x g = y`.
pub fn brute_conjugator(
    g: &EnumeratedGroup,
    x: &MatrixFq,
    y: &MatrixFq,
) -> Option<MatrixFq> {
    g.elements.iter().find(|h| x.conjugate_by(h) == *y).cloned()
}
