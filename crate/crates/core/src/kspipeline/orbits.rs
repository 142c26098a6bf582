//! Orbits of even-weight sign vectors under a permutation group.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orbit {
    /// Smallest member, read as a binary number with `a_1` most significant.
    pub representative: Vec<u8>,
    pub size: usize,
    pub stabilizer_order: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitData {
    pub d: usize,
    /// Generators as 1-based image lists `[τ(1), …, τ(d)]`.
    pub generators: Vec<Vec<usize>>,
    pub group_order: usize,
    pub orbits: Vec<Orbit>,
}

impl OrbitData {
    pub fn sizes(&self) -> Vec<usize> {
        self.orbits.iter().map(|o| o.size).collect()
    }
}

fn check_permutation(p: &[usize], d: usize) -> Result<()> {
    if p.len() != d {
        return Err(Error::InvalidPermutation(format!("{p:?} has length {}, expected {d}", p.len())));
    }
    let mut seen = vec![false; d];
    for &x in p {
        if x >= d || seen[x] {
            return Err(Error::InvalidPermutation(format!("{p:?} is not a permutation of 0..{d}")));
        }
        seen[x] = true;
    }
    Ok(())
}

/// All elements of the group generated by `gens` (0-based image lists).
pub fn group_closure(d: usize, gens: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
    for g in gens {
        check_permutation(g, d)?;
    }
    let id: Vec<usize> = (0..d).collect();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q: Vec<usize> = p.iter().map(|&x| g[x]).collect();
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// `(τa)_j = a_{τ⁻¹(j)}`, i.e. entry `i` moves to position `τ(i)`.
fn act(tau: &[usize], a: &[u8]) -> Vec<u8> {
    let mut out = vec![0; a.len()];
    for (i, &x) in a.iter().enumerate() {
        out[tau[i]] = x;
    }
    out
}

/// Partitions the `2^{d−1}` even-weight vectors of `{0,1}^d` into orbits of
/// the group generated by `gens` (0-based image lists).
pub fn even_weight_orbits(d: usize, gens: &[Vec<usize>]) -> Result<OrbitData> {
    if d == 0 || d > 20 {
        return Err(Error::InvalidPermutation(format!("unsupported degree {d}")));
    }
    let group = group_closure(d, gens)?;
    let vector = |bits: u32| -> Vec<u8> { (0..d).map(|i| ((bits >> (d - 1 - i)) & 1) as u8).collect() };
    let mut assigned = BTreeSet::new();
    let mut orbits = Vec::new();
    for bits in 0..(1u32 << d) {
        if bits.count_ones() % 2 == 1 || assigned.contains(&bits) {
            continue;
        }
        let a = vector(bits);
        let mut members = BTreeSet::new();
        for tau in &group {
            let b = act(tau, &a);
            members.insert(b.iter().fold(0u32, |acc, &x| (acc << 1) | x as u32));
        }
        assigned.extend(members.iter().copied());
        orbits.push(Orbit {
            representative: a,
            size: members.len(),
            stabilizer_order: group.len() / members.len(),
        });
    }
    Ok(OrbitData {
        d,
        generators: gens.iter().map(|g| g.iter().map(|x| x + 1).collect()).collect(),
        group_order: group.len(),
        orbits,
    })
}

pub fn cyclic_generator(d: usize) -> Vec<Vec<usize>> {
    if d == 1 {
        return vec![vec![0]];
    }
    vec![(0..d).map(|i| (i + 1) % d).collect()]
}

/// A transposition and a `d`-cycle.
pub fn symmetric_generators(d: usize) -> Vec<Vec<usize>> {
    let mut gens = cyclic_generator(d);
    if d > 2 {
        let mut t: Vec<usize> = (0..d).collect();
        t.swap(0, 1);
        gens.push(t);
    }
    gens
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_degrees() {
        let o = even_weight_orbits(2, &[vec![1, 0]]).unwrap();
        assert_eq!(o.sizes(), vec![1, 1]);
        assert_eq!(o.orbits[1].representative, vec![1, 1]);
        let c3 = even_weight_orbits(3, &cyclic_generator(3)).unwrap();
        assert_eq!(c3.sizes(), vec![1, 3]);
        assert_eq!(c3.group_order, 3);
        let s3 = even_weight_orbits(3, &symmetric_generators(3)).unwrap();
        assert_eq!(s3.sizes(), vec![1, 3]);
        assert_eq!(s3.orbits[1].stabilizer_order, 2);
    }

    #[test]
    fn sizes_times_stabilizers() {
        for d in 1..=6 {
            for gens in [cyclic_generator(d), symmetric_generators(d)] {
                let o = even_weight_orbits(d, &gens).unwrap();
                assert_eq!(o.sizes().iter().sum::<usize>(), 1 << (d - 1));
                for orb in &o.orbits {
                    assert_eq!(orb.size * orb.stabilizer_order, o.group_order);
                }
            }
        }
        assert_eq!(group_closure(5, &symmetric_generators(5)).unwrap().len(), 120);
    }

    #[test]
    fn rejects_bad_generators() {
        assert!(matches!(
            even_weight_orbits(3, &[vec![0, 0, 1]]),
            Err(Error::InvalidPermutation(_))
        ));
        assert!(matches!(even_weight_orbits(3, &[vec![0, 1]]), Err(Error::InvalidPermutation(_))));
    }
}
