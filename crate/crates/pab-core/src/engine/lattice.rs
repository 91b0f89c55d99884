//! Frattini subgroup by brute force: build the full subgroup lattice as the
//! join-closure of the cyclic subgroups, pick out the maximal proper
//! subgroups by containment, and intersect them. Deliberately independent
//! of the identity `Phi(G) = G^p G'` so that identity stays checkable.

use std::collections::{HashMap, HashSet};

use super::{cap_exceeded, EngineError, FiniteGroup, Subgroup};

type Bits = Vec<u64>;

fn bits_new(n: usize) -> Bits {
    vec![0u64; n.div_ceil(64)]
}

fn bit_set(bits: &mut Bits, i: usize) {
    bits[i / 64] |= 1u64 << (i % 64);
}

fn bit_test(bits: &Bits, i: usize) -> bool {
    bits[i / 64] & (1u64 << (i % 64)) != 0
}

fn bits_subset(a: &Bits, b: &Bits) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn bits_count(a: &Bits) -> usize {
    a.iter().map(|w| w.count_ones() as usize).sum()
}

struct MulTable {
    n: usize,
    identity: u32,
    table: Vec<u32>,
}

impl MulTable {
    fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.n + b as usize]
    }

    /// Closure of the generators as a bitset, by table lookups only.
    fn closure(&self, generators: &[u32]) -> Bits {
        let mut bits = bits_new(self.n);
        bit_set(&mut bits, self.identity as usize);
        let mut stack = vec![self.identity];
        while let Some(h) = stack.pop() {
            for &g in generators {
                let t = self.mul(h, g);
                if !bit_test(&bits, t as usize) {
                    bit_set(&mut bits, t as usize);
                    stack.push(t);
                }
            }
        }
        bits
    }

    /// A small generating set for the subgroup `target`, grown greedily.
    fn reduce_generators(&self, target: &Bits) -> Vec<u32> {
        let mut gens: Vec<u32> = Vec::new();
        let mut have = self.closure(&gens);
        if &have == target {
            return gens;
        }
        for i in 0..self.n {
            if bit_test(target, i) && !bit_test(&have, i) {
                gens.push(i as u32);
                have = self.closure(&gens);
                if &have == target {
                    break;
                }
            }
        }
        gens
    }
}

/// The intersection of all maximal proper subgroups. The lattice is the
/// fixed point of pairwise joins starting from the cyclic subgroups; every
/// subgroup is an iterated join of cyclic ones, so the fixed point is the
/// complete lattice.
pub fn frattini_via_lattice<G: FiniteGroup>(
    group: &G,
    lattice_cap: u64,
) -> Result<Subgroup<G::Elem>, EngineError> {
    let elements = group.elements()?;
    let n = elements.len();
    if n as u64 > lattice_cap {
        return Err(cap_exceeded(
            format!("subgroup lattice of a group of order {}", n),
            lattice_cap,
        ));
    }

    let index: HashMap<&G::Elem, u32> = elements
        .iter()
        .enumerate()
        .map(|(i, e)| (e, i as u32))
        .collect();
    let mut table = vec![0u32; n * n];
    for (i, a) in elements.iter().enumerate() {
        for (j, b) in elements.iter().enumerate() {
            table[i * n + j] = index[&group.op(a, b)];
        }
    }
    let identity = index[&group.identity()];
    let table = MulTable { n, identity, table };

    // Seed with the cyclic subgroups.
    let mut seen: HashSet<Bits> = HashSet::new();
    let mut subs: Vec<(Bits, Vec<u32>)> = Vec::new();
    for i in 0..n {
        let bits = table.closure(&[i as u32]);
        if seen.insert(bits.clone()) {
            let gens = table.reduce_generators(&bits);
            subs.push((bits, gens));
        }
    }

    // Join every pair once, including pairs involving newly found joins.
    let mut i = 0;
    while i < subs.len() {
        for j in 0..i {
            if bits_subset(&subs[j].0, &subs[i].0) || bits_subset(&subs[i].0, &subs[j].0) {
                continue;
            }
            let mut gens = subs[i].1.clone();
            gens.extend_from_slice(&subs[j].1);
            let bits = table.closure(&gens);
            if seen.insert(bits.clone()) {
                let gens = table.reduce_generators(&bits);
                subs.push((bits, gens));
            }
        }
        i += 1;
    }

    // Maximal proper subgroups by containment.
    let proper: Vec<&Bits> = subs
        .iter()
        .map(|(bits, _)| bits)
        .filter(|bits| bits_count(bits) < n)
        .collect();
    let maximal: Vec<&Bits> = proper
        .iter()
        .filter(|p| {
            !proper
                .iter()
                .any(|q| bits_count(q) > bits_count(p) && bits_subset(p, q))
        })
        .copied()
        .collect();

    let mut phi = bits_new(n);
    if maximal.is_empty() {
        // Trivial group: the empty intersection is the whole group.
        for i in 0..n {
            bit_set(&mut phi, i);
        }
    } else {
        phi = maximal[0].clone();
        for m in &maximal[1..] {
            for (w, other) in phi.iter_mut().zip(m.iter()) {
                *w &= other;
            }
        }
    }

    let mut members: Vec<G::Elem> = (0..n)
        .filter(|&i| bit_test(&phi, i))
        .map(|i| elements[i].clone())
        .collect();
    members.sort_unstable();
    let generators = table
        .reduce_generators(&phi)
        .into_iter()
        .map(|i| elements[i as usize].clone())
        .collect();
    Ok(Subgroup::from_sorted(members, generators))
}
