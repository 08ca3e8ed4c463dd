//! Deterministic test inputs for identity checks.
//!
//! Both sides of every identity obey the same Leibniz-type extension rules,
//! so agreement on frames, on frames multiplied by a handful of functions,
//! and on a few pseudo-random sections is the verification standard used by
//! every `check_*` routine.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bundle::Section;
use crate::symkernel::{rat, Poly, Ring};

/// Default seed for the randomized layer.
pub const DEFAULT_SEED: u64 = 24301;

/// How many pseudo-random sections are drawn per rank.
pub const RANDOM_SECTIONS: usize = 8;

/// Cap on the number of frame tuples paired with one non-frame entry.
const PARTNER_CAP: usize = 16;

#[derive(Debug, Clone)]
pub struct Battery {
    ring: Ring,
    seed: u64,
}

impl Battery {
    pub fn new(ring: &Ring, seed: u64) -> Battery {
        Battery { ring: ring.clone(), seed }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `{1, x1, x2, x1·x2, x1²}` restricted to the variables that exist.
    pub fn functions(&self) -> Vec<Poly> {
        let r = &self.ring;
        let mut out = vec![r.one()];
        let n = r.len();
        if n >= 1 {
            out.push(r.var(0));
        }
        if n >= 2 {
            out.push(r.var(1));
            out.push(&r.var(0) * &r.var(1));
        }
        if n >= 1 {
            out.push(r.var(0).pow(2));
        }
        out
    }

    /// Functions other than the constant 1.
    pub fn nontrivial_functions(&self) -> Vec<Poly> {
        self.functions().into_iter().skip(1).collect()
    }

    pub fn frames(&self, rank: usize) -> Vec<Section> {
        (0..rank).map(|i| Section::unit(&self.ring, rank, i)).collect()
    }

    /// Frame sections, then frames times each non-constant function, then
    /// the pseudo-random sections.
    pub fn sections(&self, rank: usize) -> Vec<Section> {
        let mut out = self.frames(rank);
        out.extend(self.extra_sections(rank));
        out
    }

    /// The non-frame part of [`Battery::sections`].
    pub fn extra_sections(&self, rank: usize) -> Vec<Section> {
        let mut out = Vec::new();
        for f in self.nontrivial_functions() {
            for e in self.frames(rank) {
                out.push(e.scale(&f));
            }
        }
        out.extend(self.random_sections(rank, 0));
        out
    }

    /// Pseudo-random sections of degree at most two. `stream` separates
    /// independent draws of the same rank.
    pub fn random_sections(&self, rank: usize, stream: u64) -> Vec<Section> {
        if rank == 0 {
            return Vec::new();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(
            self.seed ^ (rank as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ stream.wrapping_mul(0xD1B5_4A32_D192_ED03),
        );
        let monomials = low_degree_monomials(self.ring.len());
        (0..RANDOM_SECTIONS)
            .map(|_| {
                let comps = (0..rank)
                    .map(|_| {
                        let mut p = self.ring.zero();
                        for m in &monomials {
                            if rng.random_bool(0.5) {
                                let c: i64 = rng.random_range(-3..=3);
                                p += &self.ring.monomial(rat(c), m);
                            }
                        }
                        p
                    })
                    .collect();
                Section::new(&self.ring, comps)
            })
            .collect()
    }

    /// Input tuples for an identity with one argument per entry of `ranks`:
    /// every frame tuple; for each slot, every non-frame battery section in
    /// that slot with frame sections elsewhere; and a few all-random tuples.
    pub fn tuples(&self, ranks: &[usize]) -> Vec<Vec<Section>> {
        if ranks.contains(&0) {
            return Vec::new();
        }
        let frames: Vec<Vec<Section>> = ranks.iter().map(|&r| self.frames(r)).collect();
        let mut out = cartesian(&frames);
        for slot in 0..ranks.len() {
            let others: Vec<Vec<Section>> = frames.iter().enumerate().filter(|(i, _)| *i != slot).map(|(_, f)| f.clone()).collect();
            let partners = cartesian(&others);
            for (idx, extra) in self.extra_sections(ranks[slot]).into_iter().enumerate() {
                let chosen: Vec<&Vec<Section>> = if partners.len() <= PARTNER_CAP {
                    partners.iter().collect()
                } else {
                    (0..PARTNER_CAP).map(|j| &partners[(idx + j * 7) % partners.len()]).collect()
                };
                for p in chosen {
                    let mut t = p.clone();
                    t.insert(slot, extra.clone());
                    out.push(t);
                }
            }
        }
        let randoms: Vec<Vec<Section>> = ranks.iter().enumerate().map(|(i, &r)| self.random_sections(r, 1 + i as u64)).collect();
        for k in 0..RANDOM_SECTIONS {
            out.push(randoms.iter().map(|rs| rs[k].clone()).collect());
        }
        out
    }
}

fn low_degree_monomials(n: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![0; n]];
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        out.push(e);
    }
    for i in 0..n {
        for j in i..n {
            let mut e = vec![0; n];
            e[i] += 1;
            e[j] += 1;
            out.push(e);
        }
    }
    out
}

fn cartesian(lists: &[Vec<Section>]) -> Vec<Vec<Section>> {
    let mut acc: Vec<Vec<Section>> = vec![Vec::new()];
    for list in lists {
        let mut next = Vec::with_capacity(acc.len() * list.len());
        for prefix in &acc {
            for item in list {
                let mut t = prefix.clone();
                t.push(item.clone());
                next.push(t);
            }
        }
        acc = next;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn functions_follow_available_variables() {
        assert_eq!(Battery::new(&Ring::numbered("x", 0), 1).functions().len(), 1);
        let one_var: Vec<String> = Battery::new(&Ring::numbered("x", 1), 1).functions().iter().map(|p| p.to_string()).collect();
        assert_eq!(one_var, ["1", "x1", "x1^2"]);
        assert_eq!(Battery::new(&Ring::numbered("x", 2), 1).functions().len(), 5);
    }

    #[test]
    fn random_sections_are_reproducible() {
        let r = Ring::numbered("x", 2);
        let a = Battery::new(&r, 5).random_sections(3, 0);
        let b = Battery::new(&r, 5).random_sections(3, 0);
        assert_eq!(a, b);
        assert_eq!(a.len(), RANDOM_SECTIONS);
        assert!(a.iter().all(|s| s.comps().iter().all(|p| p.degree().unwrap_or(0) <= 2)));
        assert_ne!(a, Battery::new(&r, 6).random_sections(3, 0));
    }

    #[test]
    fn tuples_start_with_all_frame_tuples() {
        let r = Ring::numbered("x", 1);
        let b = Battery::new(&r, 1);
        let t = b.tuples(&[2, 3]);
        assert_eq!(t[0], vec![Section::unit(&r, 2, 0), Section::unit(&r, 3, 0)]);
        assert_eq!(t[5], vec![Section::unit(&r, 2, 1), Section::unit(&r, 3, 2)]);
        assert!(t.iter().all(|x| x[0].len() == 2 && x[1].len() == 3));
        assert!(b.tuples(&[0, 3]).is_empty());
    }
}
