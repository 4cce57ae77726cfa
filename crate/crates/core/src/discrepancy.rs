//! Exact relative discrepancy by exhaustive search.
//!
//! `disc(G, H)` maximizes `|e(G') ∩ e(H')| - p q C(n, k)` over all pairs of
//! relabellings. Relabelling both sides by `σ` does not change the overlap,
//! so it is enough to fix `G` and run over relabellings of `H`.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::combinat::{choose, next_permutation, subsets, Rational};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

pub const MAX_PERMUTATION_N: usize = 10;
pub const MAX_SUBSET_N: usize = 22;
/// Cap on `2^n * (max degree + 1)` for the subset scan.
pub const MAX_SUBSET_WORK: u128 = 20_000_000_000;

fn same_shape(g: &Hypergraph, h: &Hypergraph) -> Result<()> {
    if g.n() != h.n() || g.k() != h.k() {
        return Err(Error::ShapeMismatch(format!(
            "hypergraphs on ({}, {}) and ({}, {})",
            g.n(),
            g.k(),
            h.n(),
            h.k()
        )));
    }
    Ok(())
}

pub fn overlap(g: &Hypergraph, h: &Hypergraph) -> Result<usize> {
    same_shape(g, h)?;
    Ok(g.edge_set().intersection_count(h.edge_set()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscResult {
    pub value: Rational,
    /// The lexicographically first `π` attaining `value`, applied to `H`.
    pub witness: Vec<u32>,
    /// `p q C(n, k) = e(G) e(H) / C(n, k)`.
    pub baseline: Rational,
    pub min_overlap: usize,
    pub max_overlap: usize,
    pub permutations: u64,
}

#[derive(Debug, Clone)]
struct Partial {
    best: i128,
    witness: Vec<u32>,
    min_overlap: usize,
    max_overlap: usize,
    count: u64,
}

impl Partial {
    /// `self` covers lexicographically earlier permutations than `other`.
    fn merge(self, other: Partial) -> Partial {
        let (best, witness) = if other.best > self.best {
            (other.best, other.witness)
        } else {
            (self.best, self.witness)
        };
        Partial {
            best,
            witness,
            min_overlap: self.min_overlap.min(other.min_overlap),
            max_overlap: self.max_overlap.max(other.max_overlap),
            count: self.count + other.count,
        }
    }
}

fn vertex_masks(g: &Hypergraph) -> Vec<Vec<u32>> {
    g.edges().into_iter().map(|e| e.into_vec()).collect()
}

pub fn disc_exact(g: &Hypergraph, h: &Hypergraph) -> Result<DiscResult> {
    same_shape(g, h)?;
    let (n, k) = (g.n(), g.k());
    if n > MAX_PERMUTATION_N {
        let cost: u128 = (1..=n as u128).product();
        let limit: u128 = (1..=MAX_PERMUTATION_N as u128).product();
        return Err(Error::guard(
            format!("permutation scan at n = {n}"),
            cost,
            limit,
        ));
    }
    let total = choose(n, k) as i128;
    let eg = g.edge_count() as i128;
    let eh = h.edge_count() as i128;
    let product = eg * eh;

    // Membership in G by vertex mask.
    let mut in_g = vec![false; 1 << n];
    for e in vertex_masks(g) {
        in_g[e.iter().fold(0usize, |m, &v| m | 1 << v)] = true;
    }
    let h_edges = vertex_masks(h);

    let chunk = |first: u32| -> Partial {
        let mut perm: Vec<u32> = std::iter::once(first)
            .chain((0..n as u32).filter(|&v| v != first))
            .collect();
        let mut part = Partial {
            best: -1,
            witness: Vec::new(),
            min_overlap: usize::MAX,
            max_overlap: 0,
            count: 0,
        };
        loop {
            let ov = h_edges
                .iter()
                .filter(|e| in_g[e.iter().fold(0usize, |m, &v| m | 1 << perm[v as usize])])
                .count();
            let dev = (ov as i128 * total - product).abs();
            if dev > part.best {
                part.best = dev;
                part.witness = perm.clone();
            }
            part.min_overlap = part.min_overlap.min(ov);
            part.max_overlap = part.max_overlap.max(ov);
            part.count += 1;
            if !next_permutation(&mut perm[1..]) {
                break;
            }
        }
        part
    };

    let firsts: Vec<u32> = (0..n as u32).collect();
    let part = if n == 0 {
        Partial {
            best: (0 - product).abs(),
            witness: Vec::new(),
            min_overlap: 0,
            max_overlap: 0,
            count: 1,
        }
    } else {
        firsts
            .into_par_iter()
            .map(chunk)
            .collect::<Vec<_>>()
            .into_iter()
            .reduce(Partial::merge)
            .expect("n >= 1")
    };
    let total_r = Rational::from_integer(BigInt::from(total));
    Ok(DiscResult {
        value: Rational::from_integer(BigInt::from(part.best)) / &total_r,
        witness: part.witness,
        baseline: Rational::from_integer(BigInt::from(product)) / &total_r,
        min_overlap: part.min_overlap,
        max_overlap: part.max_overlap,
        permutations: part.count,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingleDisc {
    pub value: Rational,
    /// The subset `U` (smallest as a bit mask among maximizers).
    pub witness: Vec<u32>,
}

/// `max_U |e(G[U]) - p C(|U|, k)|` over all vertex subsets `U`.
pub fn disc_single(g: &Hypergraph) -> Result<SingleDisc> {
    let (n, k) = (g.n(), g.k());
    if n > MAX_SUBSET_N {
        return Err(Error::guard(
            format!("subset scan at n = {n}"),
            1u128 << n,
            1u128 << MAX_SUBSET_N,
        ));
    }
    // For each vertex, the other members of each edge through it.
    let mut rest: Vec<Vec<u32>> = vec![Vec::new(); n];
    for e in vertex_masks(g) {
        let mask = e.iter().fold(0u32, |m, &v| m | 1 << v);
        for &v in &e {
            rest[v as usize].push(mask & !(1 << v));
        }
    }
    let max_deg = rest.iter().map(Vec::len).max().unwrap_or(0) as u128;
    let work = (1u128 << n) * (max_deg + 1);
    if work > MAX_SUBSET_WORK {
        return Err(Error::guard(
            format!("subset scan at n = {n}"),
            work,
            MAX_SUBSET_WORK,
        ));
    }
    let total = choose(n, k) as i128;
    let eg = g.edge_count() as i128;
    let binom: Vec<i128> = (0..=n).map(|u| choose(u, k) as i128).collect();

    let prefix_bits = n.min(6);
    let low_bits = n - prefix_bits;
    let (best, mask) = (0u32..1 << prefix_bits)
        .into_par_iter()
        .map(|prefix| {
            let mut u: u32 = prefix << low_bits;
            let mut e_u = subsets(n, k)
                .zip(0..)
                .filter(|(s, i)| g.edge_set().contains(*i) && s.iter().all(|&v| u >> v & 1 == 1))
                .count() as i128;
            let score =
                |u: u32, e_u: i128| (e_u * total - eg * binom[u.count_ones() as usize]).abs();
            let mut best = (score(u, e_u), u);
            for j in 1u32..1 << low_bits {
                let v = j.trailing_zeros() as usize;
                let others = u & !(1 << v);
                let d = rest[v].iter().filter(|&&m| m & !others == 0).count() as i128;
                u ^= 1 << v;
                if u >> v & 1 == 1 {
                    e_u += d;
                } else {
                    e_u -= d;
                }
                let s = score(u, e_u);
                if s > best.0 || (s == best.0 && u < best.1) {
                    best = (s, u);
                }
            }
            best
        })
        .reduce(
            || (-1, u32::MAX),
            |a, b| {
                if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );
    let value = if total == 0 {
        Rational::zero()
    } else {
        Rational::new(BigInt::from(best), BigInt::from(total))
    };
    Ok(SingleDisc {
        value,
        witness: (0..n as u32).filter(|v| mask >> v & 1 == 1).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::rat;
    use crate::hypergraph::{clique_plus_isolated, fano, multipartite_h};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn all_perms(n: usize) -> Vec<Vec<u32>> {
        let mut p: Vec<u32> = (0..n as u32).collect();
        let mut out = vec![p.clone()];
        while next_permutation(&mut p) {
            out.push(p.clone());
        }
        out
    }

    /// The definition itself: both sides relabelled independently.
    fn naive_disc(g: &Hypergraph, h: &Hypergraph) -> Rational {
        let total = choose(g.n(), g.k()) as i64;
        let prod = (g.edge_count() * h.edge_count()) as i64;
        let perms = all_perms(g.n());
        let mut best = 0i64;
        for s in &perms {
            let gs = g.relabel(s).unwrap();
            for t in &perms {
                let ov = overlap(&gs, &h.relabel(t).unwrap()).unwrap() as i64;
                best = best.max((ov * total - prod).abs());
            }
        }
        rat(best, total)
    }

    /// Subsets read off directly from induced subgraphs.
    fn naive_single(g: &Hypergraph) -> Rational {
        let (n, k) = (g.n(), g.k());
        let total = choose(n, k) as i64;
        let eg = g.edge_count() as i64;
        let mut best = 0i64;
        for mask in 0u32..1 << n {
            let u: Vec<u32> = (0..n as u32).filter(|v| mask >> v & 1 == 1).collect();
            let e_u = if u.len() >= k {
                g.induced(&u).unwrap().edge_count() as i64
            } else {
                0
            };
            best = best.max((e_u * total - eg * choose(u.len(), k) as i64).abs());
        }
        rat(best, total)
    }

    fn random_graph(rng: &mut impl Rng, n: usize, k: usize) -> Hypergraph {
        Hypergraph::from_fn(n, k, |_| rng.gen_bool(0.5)).unwrap()
    }

    #[test]
    fn overlap_basics() {
        let g = fano();
        assert_eq!(
            overlap(&g, &Hypergraph::complete(7, 3).unwrap()).unwrap(),
            7
        );
        assert_eq!(overlap(&g, &Hypergraph::empty(7, 3).unwrap()).unwrap(), 0);
        assert_eq!(overlap(&g, &multipartite_h(7, 3).unwrap()).unwrap(), 6);
        assert!(overlap(&g, &Hypergraph::empty(7, 2).unwrap()).is_err());
    }

    #[test]
    fn disc_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let h = random_graph(&mut rng, 6, 3);
        assert!(disc_exact(&Hypergraph::complete(6, 3).unwrap(), &h)
            .unwrap()
            .value
            .is_zero());

        let d = disc_exact(&fano(), &multipartite_h(7, 3).unwrap()).unwrap();
        assert!(d.value.is_zero());
        assert_eq!((d.min_overlap, d.max_overlap, d.permutations), (6, 6, 5040));
        assert_eq!(d.baseline, rat(6, 1));

        let e = Hypergraph::from_edges(4, 2, [vec![0, 1]]).unwrap();
        let d = disc_exact(&e, &e).unwrap();
        assert_eq!(d.value, rat(5, 6));
        assert_eq!(d.witness, vec![0, 1, 2, 3]);
        assert!(disc_exact(
            &Hypergraph::empty(11, 2).unwrap(),
            &Hypergraph::empty(11, 2).unwrap()
        )
        .unwrap_err()
        .is_guard());
    }

    #[test]
    fn one_sided_scan_matches_definition() {
        let mut rng = ChaCha8Rng::seed_from_u64(62);
        for k in [2, 3] {
            for _ in 0..6 {
                let g = random_graph(&mut rng, 4, k);
                let h = random_graph(&mut rng, 4, k);
                assert_eq!(disc_exact(&g, &h).unwrap().value, naive_disc(&g, &h));
            }
        }
    }

    #[test]
    fn symmetry_and_relabel_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(63);
        for _ in 0..5 {
            let g = random_graph(&mut rng, 6, 3);
            let h = random_graph(&mut rng, 6, 3);
            let d = disc_exact(&g, &h).unwrap();
            assert_eq!(d.value, disc_exact(&h, &g).unwrap().value);
            let sigma = [3, 5, 0, 1, 4, 2];
            assert_eq!(
                d.value,
                disc_exact(&g.relabel(&sigma).unwrap(), &h).unwrap().value
            );
            let w = h.relabel(&d.witness).unwrap();
            let ov = overlap(&g, &w).unwrap() as i64;
            let total = choose(6, 3) as i64;
            let prod = (g.edge_count() * h.edge_count()) as i64;
            assert_eq!(rat((ov * total - prod).abs(), total), d.value);
        }
    }

    #[test]
    fn single_disc_matches_subsets_and_cliques() {
        assert!(disc_single(&Hypergraph::empty(6, 2).unwrap())
            .unwrap()
            .value
            .is_zero());
        assert!(disc_single(&Hypergraph::complete(6, 3).unwrap())
            .unwrap()
            .value
            .is_zero());
        let mut rng = ChaCha8Rng::seed_from_u64(64);
        for (n, k) in [(5, 2), (6, 3), (7, 2), (8, 3)] {
            for _ in 0..3 {
                let g = random_graph(&mut rng, n, k);
                let s = disc_single(&g).unwrap();
                assert_eq!(s.value, naive_single(&g));
                if n <= 7 {
                    let via_pairs = (k..=n)
                        .map(|m| {
                            disc_exact(&g, &clique_plus_isolated(n, m, k).unwrap())
                                .unwrap()
                                .value
                        })
                        .max()
                        .unwrap();
                    assert_eq!(s.value, via_pairs);
                }
            }
        }
        assert!(disc_single(&Hypergraph::empty(23, 1).unwrap())
            .unwrap_err()
            .is_guard());
    }
}
