//! Rank-preserving isomorphism of graded posets.
//!
//! Two graded posets are isomorphic iff their Hasse diagrams are isomorphic
//! as directed graphs with the rank as vertex colour. The search refines a
//! joint colouring of both diagrams (colour, multiset of upper-cover colours,
//! multiset of lower-cover colours) to a stable partition, then individualises
//! one element of the smallest non-singleton class and backtracks.

use std::collections::HashMap;

use super::{ElementId, GradedPoset};

/// `map[a] = b` sends element `a` of the first poset to `b` of the second.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isomorphism {
    pub map: Vec<ElementId>,
}

pub fn are_isomorphic(a: &GradedPoset, b: &GradedPoset) -> Option<Isomorphism> {
    if a.len() != b.len() || a.rank_sizes() != b.rank_sizes() {
        return None;
    }
    if a.cover_pairs().len() != b.cover_pairs().len() {
        return None;
    }
    let ca: Vec<u32> = a.ranks().iter().map(|&r| r as u32).collect();
    let cb: Vec<u32> = b.ranks().iter().map(|&r| r as u32).collect();
    let (ca, cb) = refine(a, b, ca, cb)?;
    search(a, b, ca, cb)
}

type Signature = (u32, Vec<u32>, Vec<u32>);

fn signature(p: &GradedPoset, colours: &[u32], x: ElementId) -> Signature {
    let mut ups: Vec<u32> = p.upper_covers(x).iter().map(|&y| colours[y]).collect();
    let mut downs: Vec<u32> = p.lower_covers(x).iter().map(|&y| colours[y]).collect();
    ups.sort_unstable();
    downs.sort_unstable();
    (colours[x], ups, downs)
}

/// Joint colour refinement; `None` when the colour histograms diverge.
fn refine(
    a: &GradedPoset,
    b: &GradedPoset,
    mut ca: Vec<u32>,
    mut cb: Vec<u32>,
) -> Option<(Vec<u32>, Vec<u32>)> {
    let mut classes = count_classes(&ca);
    loop {
        let sa: Vec<Signature> = (0..a.len()).map(|x| signature(a, &ca, x)).collect();
        let sb: Vec<Signature> = (0..b.len()).map(|x| signature(b, &cb, x)).collect();
        let mut distinct: Vec<&Signature> = sa.iter().collect();
        distinct.sort();
        distinct.dedup();
        let names: HashMap<&Signature, u32> = distinct
            .iter()
            .enumerate()
            .map(|(i, s)| (*s, i as u32))
            .collect();
        let mut hist_a = vec![0usize; names.len()];
        let mut nca = Vec::with_capacity(a.len());
        for s in &sa {
            let c = names[s];
            hist_a[c as usize] += 1;
            nca.push(c);
        }
        let mut hist_b = vec![0usize; names.len()];
        let mut ncb = Vec::with_capacity(b.len());
        for s in &sb {
            let c = *names.get(s)?;
            hist_b[c as usize] += 1;
            ncb.push(c);
        }
        if hist_a != hist_b {
            return None;
        }
        ca = nca;
        cb = ncb;
        let now = names.len();
        if now == classes {
            return Some((ca, cb));
        }
        classes = now;
    }
}

fn count_classes(c: &[u32]) -> usize {
    let mut v = c.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

fn search(a: &GradedPoset, b: &GradedPoset, ca: Vec<u32>, cb: Vec<u32>) -> Option<Isomorphism> {
    let n = a.len();
    let mut sizes: HashMap<u32, usize> = HashMap::new();
    for &c in &ca {
        *sizes.entry(c).or_default() += 1;
    }
    let target = sizes
        .iter()
        .filter(|(_, &s)| s > 1)
        .min_by_key(|(&c, &s)| (s, c))
        .map(|(&c, _)| c);

    let Some(colour) = target else {
        // discrete: the colouring is a bijection
        let mut by_colour = vec![usize::MAX; n];
        for (y, &c) in cb.iter().enumerate() {
            by_colour[c as usize] = y;
        }
        let map: Vec<ElementId> = ca.iter().map(|&c| by_colour[c as usize]).collect();
        return is_isomorphism(a, b, &map).then_some(Isomorphism { map });
    };

    let x = (0..n).find(|&x| ca[x] == colour).expect("class is nonempty");
    let fresh = n as u32 + 1;
    for y in (0..n).filter(|&y| cb[y] == colour) {
        let mut na = ca.clone();
        let mut nb = cb.clone();
        na[x] = fresh;
        nb[y] = fresh;
        if let Some((ra, rb)) = refine(a, b, na, nb) {
            if let Some(iso) = search(a, b, ra, rb) {
                return Some(iso);
            }
        }
    }
    None
}

fn is_isomorphism(a: &GradedPoset, b: &GradedPoset, map: &[ElementId]) -> bool {
    let mut hit = vec![false; b.len()];
    for &y in map {
        if y >= b.len() || hit[y] {
            return false;
        }
        hit[y] = true;
    }
    for x in 0..a.len() {
        if a.rank(x) != b.rank(map[x]) {
            return false;
        }
        let mut image: Vec<ElementId> = a.upper_covers(x).iter().map(|&y| map[y]).collect();
        image.sort_unstable();
        if image != b.upper_covers(map[x]) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::super::{boolean_lattice, chain};
    use super::*;

    #[test]
    fn boolean_self_dual() {
        for n in 1..=5 {
            let b = boolean_lattice(n);
            let iso = are_isomorphic(&b, &b.opposite()).expect("B_n is self-dual");
            assert!(is_isomorphism(&b, &b.opposite(), &iso.map));
        }
    }

    #[test]
    fn different_posets() {
        assert!(are_isomorphic(&boolean_lattice(2), &chain(2)).is_none());
        assert!(are_isomorphic(&boolean_lattice(3), &boolean_lattice(4)).is_none());
    }

    #[test]
    fn relabelled_copy() {
        let b = boolean_lattice(4);
        // reverse the ids
        let n = b.len();
        let ranks: Vec<usize> = (0..n).map(|i| b.rank(n - 1 - i)).collect();
        let covers: Vec<(usize, usize)> = b
            .cover_pairs()
            .into_iter()
            .map(|(x, y)| (n - 1 - x, n - 1 - y))
            .collect();
        let c = GradedPoset::from_covers(&ranks, &covers).unwrap();
        let iso = are_isomorphic(&b, &c).unwrap();
        assert!(is_isomorphism(&b, &c, &iso.map));
    }
}
