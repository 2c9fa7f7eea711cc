//! Shared combinatorial machinery: union–find, and isomorphism search for
//! finite many-sorted algebras whose operations are all unary.
//!
//! Presheaves, profunctors and polynomials are all such algebras once their
//! fixed boundary data is folded into element colours, so one search serves
//! every "isomorphic up to relabelling" check in the crate.

use std::collections::HashMap;

#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Union keeping the smaller index as the root.
    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    /// Class index of every element; classes are numbered in order of their
    /// smallest member.
    pub fn classes(&mut self) -> (Vec<usize>, usize) {
        let n = self.parent.len();
        let mut id = vec![usize::MAX; n];
        let mut out = vec![0; n];
        let mut count = 0;
        for x in 0..n {
            let r = self.find(x);
            if id[r] == usize::MAX {
                id[r] = count;
                count += 1;
            }
            out[x] = id[r];
        }
        (out, count)
    }
}

/// A unary operation `table: sort from -> sort to`.
#[derive(Clone, Debug)]
pub(crate) struct Op {
    pub from: usize,
    pub to: usize,
    pub table: Vec<usize>,
}

/// Many-sorted unary algebra with an initial colouring that isomorphisms
/// must preserve.
#[derive(Clone, Debug, Default)]
pub(crate) struct UnaryAlgebra {
    pub sizes: Vec<usize>,
    pub ops: Vec<Op>,
    pub colors: Vec<Vec<u64>>,
}

impl UnaryAlgebra {
    pub fn new(sizes: Vec<usize>) -> Self {
        let colors = sizes.iter().map(|&n| vec![0; n]).collect();
        UnaryAlgebra {
            sizes,
            ops: Vec::new(),
            colors,
        }
    }

    pub fn op(&mut self, from: usize, to: usize, table: Vec<usize>) {
        debug_assert_eq!(table.len(), self.sizes[from]);
        self.ops.push(Op { from, to, table });
    }
}

fn same_signature(a: &UnaryAlgebra, b: &UnaryAlgebra) -> bool {
    a.sizes == b.sizes
        && a.ops.len() == b.ops.len()
        && a.ops
            .iter()
            .zip(&b.ops)
            .all(|(x, y)| x.from == y.from && x.to == y.to)
}

/// Colour refinement run jointly on both algebras so that colours are
/// comparable across them.
fn refine(a: &UnaryAlgebra, b: &UnaryAlgebra) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let mut intern: HashMap<(usize, u64), usize> = HashMap::new();
    let mut init = |alg: &UnaryAlgebra| -> Vec<Vec<usize>> {
        alg.colors
            .iter()
            .enumerate()
            .map(|(s, cs)| {
                cs.iter()
                    .map(|&c| {
                        let next = intern.len();
                        *intern.entry((s, c)).or_insert(next)
                    })
                    .collect()
            })
            .collect()
    };
    let mut ca = init(a);
    let mut cb = init(b);
    let count = |c: &Vec<Vec<usize>>, d: &Vec<Vec<usize>>| {
        let mut all: Vec<usize> = c.iter().chain(d.iter()).flatten().copied().collect();
        all.sort_unstable();
        all.dedup();
        all.len()
    };
    let mut classes = count(&ca, &cb);
    loop {
        let mut table: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut step = |alg: &UnaryAlgebra, col: &Vec<Vec<usize>>| -> Vec<Vec<usize>> {
            let mut incoming: Vec<Vec<Vec<(usize, usize)>>> =
                alg.sizes.iter().map(|&n| vec![Vec::new(); n]).collect();
            for (k, op) in alg.ops.iter().enumerate() {
                for (x, &y) in op.table.iter().enumerate() {
                    incoming[op.to][y].push((k, col[op.from][x]));
                }
            }
            let mut out = Vec::with_capacity(alg.sizes.len());
            for (s, &n) in alg.sizes.iter().enumerate() {
                let mut row = Vec::with_capacity(n);
                for x in 0..n {
                    let mut sig = vec![col[s][x]];
                    for (k, op) in alg.ops.iter().enumerate() {
                        if op.from == s {
                            sig.push(k);
                            sig.push(col[op.to][op.table[x]]);
                        }
                    }
                    let mut inc = std::mem::take(&mut incoming[s][x]);
                    inc.sort_unstable();
                    sig.push(usize::MAX);
                    for (k, c) in inc {
                        sig.push(k);
                        sig.push(c);
                    }
                    let next = table.len();
                    row.push(*table.entry(sig).or_insert(next));
                }
                out.push(row);
            }
            out
        };
        let na = step(a, &ca);
        let nb = step(b, &cb);
        let new_classes = count(&na, &nb);
        ca = na;
        cb = nb;
        if new_classes == classes {
            break;
        }
        classes = new_classes;
    }
    (ca, cb)
}

/// Find a sort-wise bijection `a -> b` commuting with every operation and
/// preserving colours, or `None` if none exists.
pub(crate) fn find_isomorphism(a: &UnaryAlgebra, b: &UnaryAlgebra) -> Option<Vec<Vec<usize>>> {
    if !same_signature(a, b) {
        return None;
    }
    let (ca, cb) = refine(a, b);
    for s in 0..a.sizes.len() {
        let mut x = ca[s].clone();
        let mut y = cb[s].clone();
        x.sort_unstable();
        y.sort_unstable();
        if x != y {
            return None;
        }
    }
    let mut search = Search {
        a,
        b,
        ca: &ca,
        cb: &cb,
        phi: a.sizes.iter().map(|&n| vec![usize::MAX; n]).collect(),
        used: a.sizes.iter().map(|&n| vec![false; n]).collect(),
        trail: Vec::new(),
    };
    if search.run() {
        Some(search.phi)
    } else {
        None
    }
}

struct Search<'a> {
    a: &'a UnaryAlgebra,
    b: &'a UnaryAlgebra,
    ca: &'a [Vec<usize>],
    cb: &'a [Vec<usize>],
    phi: Vec<Vec<usize>>,
    used: Vec<Vec<bool>>,
    trail: Vec<(usize, usize)>,
}

impl Search<'_> {
    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (s, x) = self.trail.pop().unwrap();
            let y = self.phi[s][x];
            self.used[s][y] = false;
            self.phi[s][x] = usize::MAX;
        }
    }

    /// Assign `x ↦ y` in sort `s` and everything it forces.
    fn assign(&mut self, s: usize, x: usize, y: usize) -> bool {
        let mut stack = vec![(s, x, y)];
        while let Some((s, x, y)) = stack.pop() {
            let cur = self.phi[s][x];
            if cur != usize::MAX {
                if cur != y {
                    return false;
                }
                continue;
            }
            if self.used[s][y] || self.ca[s][x] != self.cb[s][y] {
                return false;
            }
            self.phi[s][x] = y;
            self.used[s][y] = true;
            self.trail.push((s, x));
            for (oa, ob) in self.a.ops.iter().zip(&self.b.ops) {
                if oa.from == s {
                    stack.push((oa.to, oa.table[x], ob.table[y]));
                }
            }
        }
        true
    }

    fn run(&mut self) -> bool {
        // pick the unassigned element with the fewest candidates
        let mut best: Option<(usize, usize, Vec<usize>)> = None;
        for s in 0..self.a.sizes.len() {
            for x in 0..self.a.sizes[s] {
                if self.phi[s][x] != usize::MAX {
                    continue;
                }
                let cands: Vec<usize> = (0..self.b.sizes[s])
                    .filter(|&y| !self.used[s][y] && self.cb[s][y] == self.ca[s][x])
                    .collect();
                if best.as_ref().map_or(true, |b| cands.len() < b.2.len()) {
                    let done = cands.len() <= 1;
                    best = Some((s, x, cands));
                    if done {
                        break;
                    }
                }
            }
        }
        let Some((s, x, cands)) = best else {
            return true;
        };
        for y in cands {
            let mark = self.trail.len();
            if self.assign(s, x, y) && self.run() {
                return true;
            }
            self.undo(mark);
        }
        false
    }
}

/// Every colour-preserving homomorphism `a -> b` (sort-wise maps commuting
/// with the operations), in lexicographic order of the flattened tables.
/// Stops with `Err(())` once more than `limit` have been found.
pub(crate) fn enumerate_homomorphisms(
    a: &UnaryAlgebra,
    b: &UnaryAlgebra,
    limit: usize,
) -> Result<Vec<Vec<Vec<usize>>>, ()> {
    let compatible = a.sizes.len() == b.sizes.len()
        && a.ops.len() == b.ops.len()
        && a.ops
            .iter()
            .zip(&b.ops)
            .all(|(x, y)| x.from == y.from && x.to == y.to);
    if !compatible {
        return Ok(Vec::new());
    }
    let mut h = Homs {
        a,
        b,
        phi: a.sizes.iter().map(|&n| vec![usize::MAX; n]).collect(),
        trail: Vec::new(),
        out: Vec::new(),
        limit,
    };
    h.run(0, 0)?;
    Ok(h.out)
}

struct Homs<'a> {
    a: &'a UnaryAlgebra,
    b: &'a UnaryAlgebra,
    phi: Vec<Vec<usize>>,
    trail: Vec<(usize, usize)>,
    out: Vec<Vec<Vec<usize>>>,
    limit: usize,
}

impl Homs<'_> {
    fn assign(&mut self, s: usize, x: usize, y: usize) -> bool {
        let mut stack = vec![(s, x, y)];
        while let Some((s, x, y)) = stack.pop() {
            let cur = self.phi[s][x];
            if cur != usize::MAX {
                if cur != y {
                    return false;
                }
                continue;
            }
            if self.a.colors[s][x] != self.b.colors[s][y] {
                return false;
            }
            self.phi[s][x] = y;
            self.trail.push((s, x));
            for (oa, ob) in self.a.ops.iter().zip(&self.b.ops) {
                if oa.from == s {
                    stack.push((oa.to, oa.table[x], ob.table[y]));
                }
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (s, x) = self.trail.pop().unwrap();
            self.phi[s][x] = usize::MAX;
        }
    }

    fn run(&mut self, mut s: usize, mut x: usize) -> Result<(), ()> {
        // next unassigned variable in (sort, element) order
        loop {
            if s == self.a.sizes.len() {
                if self.out.len() == self.limit {
                    return Err(());
                }
                self.out.push(self.phi.clone());
                return Ok(());
            }
            if x == self.a.sizes[s] {
                s += 1;
                x = 0;
            } else if self.phi[s][x] != usize::MAX {
                x += 1;
            } else {
                break;
            }
        }
        for y in 0..self.b.sizes[s] {
            let mark = self.trail.len();
            if self.assign(s, x, y) {
                self.run(s, x + 1)?;
            }
            self.undo(mark);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize, shift: usize) -> UnaryAlgebra {
        let mut a = UnaryAlgebra::new(vec![n]);
        a.op(0, 0, (0..n).map(|i| (i + shift) % n).collect());
        a
    }

    #[test]
    fn cycles_of_equal_length_are_isomorphic() {
        let phi = find_isomorphism(&cycle(5, 1), &cycle(5, 2)).unwrap();
        let a = cycle(5, 1);
        let b = cycle(5, 2);
        for x in 0..5 {
            assert_eq!(phi[0][a.ops[0].table[x]], b.ops[0].table[phi[0][x]]);
        }
    }

    #[test]
    fn different_cycle_structure_is_not_isomorphic() {
        let mut a = UnaryAlgebra::new(vec![4]);
        a.op(0, 0, vec![1, 0, 3, 2]);
        assert!(find_isomorphism(&a, &cycle(4, 1)).is_none());
    }

    #[test]
    fn colours_are_respected() {
        let mut a = UnaryAlgebra::new(vec![2]);
        a.colors[0] = vec![1, 2];
        let mut b = UnaryAlgebra::new(vec![2]);
        b.colors[0] = vec![2, 1];
        assert_eq!(find_isomorphism(&a, &b).unwrap(), vec![vec![1, 0]]);
        b.colors[0] = vec![1, 1];
        assert!(find_isomorphism(&a, &b).is_none());
    }

    #[test]
    fn homomorphisms_between_cycles() {
        // maps from a 2-cycle into a 4-cycle: only the even-period points
        let mut two = UnaryAlgebra::new(vec![2]);
        two.op(0, 0, vec![1, 0]);
        let mut four = UnaryAlgebra::new(vec![4]);
        four.op(0, 0, vec![1, 0, 3, 2]);
        let homs = enumerate_homomorphisms(&two, &four, 100).unwrap();
        assert_eq!(
            homs,
            vec![
                vec![vec![0, 1]],
                vec![vec![1, 0]],
                vec![vec![2, 3]],
                vec![vec![3, 2]]
            ]
        );
        assert!(enumerate_homomorphisms(&two, &cycle(3, 1), 100)
            .unwrap()
            .is_empty());
        assert!(enumerate_homomorphisms(&two, &four, 3).is_err());
    }

    #[test]
    fn union_find_orders_classes_by_smallest_member() {
        let mut uf = UnionFind::new(5);
        uf.union(4, 1);
        uf.union(3, 0);
        assert_eq!(uf.classes(), (vec![0, 1, 2, 0, 1], 3));
    }
}
