//! Automorphism group of a small abelian group, as index permutations.
//!
//! Used only for the opt-in orbit pruning of the search engine.

use crate::error::{Error, Result};
use crate::group::GroupSpec;

/// Refuse to materialize automorphism groups larger than this.
pub const MAX_AUTOMORPHISMS: usize = 250_000;

/// Every automorphism, as `perm[index] = index of the image`. The identity
/// comes first; the rest follow the enumeration order of generator images.
pub fn automorphisms(group: &GroupSpec) -> Result<Vec<Vec<u8>>> {
    let factors = group.factors().to_vec();
    let mut images = Vec::with_capacity(factors.len());
    let mut out = Vec::new();
    extend(group, &factors, 1, &mut images, &mut out)?;
    let mut perms: Vec<Vec<u8>> = out
        .into_iter()
        .map(|imgs: Vec<usize>| {
            (0..group.order())
                .map(|idx| {
                    let a = group.at(idx);
                    let mut acc = 0usize;
                    for (i, &c) in a.coords().iter().enumerate() {
                        acc = group.add_idx(acc, group.scale_idx(c as u32, imgs[i]));
                    }
                    acc as u8
                })
                .collect()
        })
        .collect();
    if let Some(pos) = perms.iter().position(|p| p.iter().enumerate().all(|(i, &x)| i == x as usize)) {
        perms.swap(0, pos);
    }
    Ok(perms)
}

fn extend(group: &GroupSpec, factors: &[u32], span: u64, images: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) -> Result<()> {
    let k = images.len();
    if k == factors.len() {
        if out.len() >= MAX_AUTOMORPHISMS {
            return Err(Error::OrbitPruningUnavailable(format!(
                "{} has more than {MAX_AUTOMORPHISMS} automorphisms",
                group
            )));
        }
        out.push(images.clone());
        return Ok(());
    }
    let n = factors[k];
    for x in 0..group.order() {
        if group.order_idx(x) != n {
            continue;
        }
        // <x> must meet the current span trivially
        let mut cyclic = 0u64;
        let mut y = 0usize;
        for _ in 0..n {
            cyclic |= 1 << y;
            y = group.add_idx(y, x);
        }
        if cyclic & span != 1 {
            continue;
        }
        let mut next = 0u64;
        let mut rest = cyclic;
        while rest != 0 {
            let t = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            next |= group.translate(span, t);
        }
        images.push(x);
        extend(group, factors, next, images, out)?;
        images.pop();
    }
    Ok(())
}

/// Orbits of the automorphism group on `elements`, each sorted, ordered by
/// their least member.
pub fn orbits(perms: &[Vec<u8>], elements: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; perms.first().map_or(0, Vec::len)];
    let mut out = Vec::new();
    let mut sorted = elements.to_vec();
    sorted.sort_unstable();
    for &e in &sorted {
        if seen[e] {
            continue;
        }
        let mut orbit: Vec<usize> = perms.iter().map(|p| p[e] as usize).collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &x in &orbit {
            seen[x] = true;
        }
        out.push(orbit);
    }
    out
}

/// Colex-least image of a sorted index list under the automorphisms.
pub fn canonical_image(perms: &[Vec<u8>], seq: &[usize]) -> Vec<usize> {
    let mut best: Option<Vec<usize>> = None;
    let mut img = Vec::with_capacity(seq.len());
    for p in perms {
        img.clear();
        img.extend(seq.iter().map(|&i| p[i] as usize));
        img.sort_unstable();
        if best.as_ref().is_none_or(|b| colex_less(&img, b)) {
            best = Some(img.clone());
        }
    }
    best.unwrap_or_else(|| seq.to_vec())
}

/// Colex order on sorted lists of equal length: compare from the top.
pub(crate) fn colex_less(a: &[usize], b: &[usize]) -> bool {
    a.iter().rev().lt(b.iter().rev())
}
