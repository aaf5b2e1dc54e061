//! Brute-force reference implementations that share no code with the library
//! beyond parsing. Elements are coordinate vectors, sequences are lists of
//! them, and zero-subsums are found by walking every subset.

#![allow(dead_code)]

use zerosum::{GroupSpec, Sequence, WeightSet};

#[derive(Debug, Clone)]
pub struct Oracle {
    pub factors: Vec<u32>,
    pub elements: Vec<Vec<u32>>,
}

impl Oracle {
    pub fn new(factors: &[u32]) -> Self {
        let mut elements = vec![Vec::new()];
        for &n in factors {
            elements = elements
                .into_iter()
                .flat_map(|e| {
                    (0..n).map(move |c| {
                        let mut next = e.clone();
                        next.push(c);
                        next
                    })
                })
                .collect();
        }
        Self { factors: factors.to_vec(), elements }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn exponent(&self) -> u32 {
        self.factors.last().copied().unwrap_or(1)
    }

    pub fn add(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        a.iter().zip(b).zip(&self.factors).map(|((x, y), n)| (x + y) % n).collect()
    }

    pub fn scale(&self, k: u32, a: &[u32]) -> Vec<u32> {
        a.iter().zip(&self.factors).map(|(x, n)| (k as u64 * *x as u64 % *n as u64) as u32).collect()
    }

    pub fn zero(&self) -> Vec<u32> {
        vec![0; self.factors.len()]
    }

    pub fn is_zero(&self, a: &[u32]) -> bool {
        a.iter().all(|&x| x == 0)
    }

    /// All sums `w_1 t_1 + ... + w_k t_k` over the weight choices.
    pub fn weighted_sums(&self, terms: &[&Vec<u32>], weights: &[u32]) -> Vec<Vec<u32>> {
        let mut reach = vec![self.zero()];
        for t in terms {
            let mut next: Vec<Vec<u32>> = Vec::new();
            for r in &reach {
                for &w in weights {
                    let s = self.add(r, &self.scale(w, t));
                    if !next.contains(&s) {
                        next.push(s);
                    }
                }
            }
            reach = next;
        }
        reach
    }

    /// Whether some nonempty subsequence whose length satisfies `len_ok` has a
    /// weighted sum equal to zero.
    pub fn has_zero_subsum(&self, seq: &[Vec<u32>], weights: &[u32], len_ok: impl Fn(usize) -> bool) -> bool {
        let k = seq.len();
        (1u64..1 << k).any(|mask| {
            let terms: Vec<&Vec<u32>> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| &seq[i]).collect();
            len_ok(terms.len()) && self.weighted_sums(&terms, weights).iter().any(|s| self.is_zero(s))
        })
    }

    /// Whether `seq` lacks the zero-subsum that defines `kind`.
    pub fn fails(&self, kind: &str, seq: &[Vec<u32>], weights: &[u32]) -> bool {
        let exp = self.exponent() as usize;
        match kind {
            "davenport" => !self.has_zero_subsum(seq, weights, |_| true),
            "eta" => !self.has_zero_subsum(seq, weights, |l| l <= exp),
            "egz" => !self.has_zero_subsum(seq, weights, |l| l == exp),
            "harborth" => distinct(seq) && !self.has_zero_subsum(seq, weights, |l| l == exp),
            "critical" => {
                if !distinct(seq) || seq.iter().any(|e| self.is_zero(e)) {
                    return false;
                }
                let mut covered: Vec<Vec<u32>> = Vec::new();
                for mask in 1u64..1 << seq.len() {
                    let terms: Vec<&Vec<u32>> =
                        (0..seq.len()).filter(|i| mask >> i & 1 == 1).map(|i| &seq[i]).collect();
                    let s = self.weighted_sums(&terms, &[1]).remove(0);
                    if !covered.contains(&s) {
                        covered.push(s);
                    }
                }
                covered.len() < self.order()
            }
            other => panic!("unknown kind {other}"),
        }
    }

    /// Multisets (or sets) of element positions of size `l`, nondecreasing.
    pub fn selections(&self, l: usize, squarefree: bool) -> Vec<Vec<usize>> {
        fn rec(n: usize, l: usize, from: usize, sf: bool, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == l {
                out.push(cur.clone());
                return;
            }
            for i in from..n {
                cur.push(i);
                rec(n, l, if sf { i + 1 } else { i }, sf, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(self.order(), l, 0, squarefree, &mut Vec::new(), &mut out);
        out
    }

    /// One more than the largest length of a failing sequence.
    pub fn constant(&self, kind: &str, weights: &[u32]) -> usize {
        let squarefree = matches!(kind, "harborth" | "critical");
        let mut l = 0;
        loop {
            let any = self.selections(l + 1, squarefree).iter().any(|sel| {
                let seq: Vec<Vec<u32>> = sel.iter().map(|&i| self.elements[i].clone()).collect();
                self.fails(kind, &seq, weights)
            });
            if !any {
                return l + 1;
            }
            l += 1;
        }
    }

    /// Every failing squarefree selection of length `l`, as coordinate sets.
    pub fn failing_sets(&self, kind: &str, weights: &[u32], l: usize) -> Vec<Vec<Vec<u32>>> {
        self.selections(l, true)
            .into_iter()
            .map(|sel| sel.iter().map(|&i| self.elements[i].clone()).collect::<Vec<_>>())
            .filter(|seq| self.fails(kind, seq, weights))
            .collect()
    }

    pub fn to_sequence(&self, group: &GroupSpec, seq: &[Vec<u32>]) -> Sequence {
        let elems: Vec<_> =
            seq.iter().map(|c| group.element(&c.iter().map(|&x| x as i64).collect::<Vec<_>>()).unwrap()).collect();
        Sequence::from_elements(group, &elems).unwrap()
    }
}

fn distinct(seq: &[Vec<u32>]) -> bool {
    seq.iter().enumerate().all(|(i, a)| seq[..i].iter().all(|b| a != b))
}

/// Every abelian group of the given order in invariant-factor form.
pub fn groups_of_order(order: u32) -> Vec<Vec<u32>> {
    fn rec(rest: u32, min: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 1 {
            out.push(cur.clone());
            return;
        }
        for d in min.max(2)..=rest {
            if rest.is_multiple_of(d) && cur.last().is_none_or(|&p| d % p == 0) {
                cur.push(d);
                rec(rest / d, d, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(order, 2, &mut Vec::new(), &mut out);
    out
}

pub fn plus_minus(exp: u32) -> Vec<u32> {
    if exp <= 2 {
        vec![1]
    } else {
        vec![1, exp - 1]
    }
}

/// Weight classes of a library weight set, for the oracle.
pub fn classes(w: &WeightSet) -> Vec<u32> {
    w.classes().to_vec()
}
