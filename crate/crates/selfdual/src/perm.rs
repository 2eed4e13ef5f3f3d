//! Coordinate permutations and stabilizer chains.
//!
//! Permutations act on positions 0..n-1; `perm[i]` is the image of i. The
//! [`PermGroup`] is an incremental Schreier-Sims stabilizer chain, small and
//! exact: group orders up to 32! fit in a u128.

/// A permutation of 0..n-1 as an image table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Perm(pub Vec<u8>);

impl std::fmt::Debug for Perm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Perm{:?}", self.0)
    }
}

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm((0..n as u8).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u8 == x)
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    /// self after other: (self * other)(i) = self(other(i)).
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.len(), other.len());
        Perm(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u8; self.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Perm(inv)
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Perm {
        let mut p = Perm::identity(n);
        p.0.swap(a, b);
        p
    }
}

pub fn factorial_u128(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Stabilizer chain with base points fixed one at a time.
pub struct PermGroup {
    n: usize,
    levels: Vec<Level>,
    /// When set, levels follow this base order (possibly with trivial
    /// orbits); otherwise bases are chosen from first moved points.
    prescribed: bool,
}

struct Level {
    base: usize,
    gens: Vec<Perm>,
    /// transversal[p] = coset representative mapping `base` to p
    transversal: Vec<Option<Perm>>,
    /// per point: how many generators its Schreier pairs are checked with
    checked_upto: Vec<usize>,
}

impl Level {
    fn new(n: usize, base: usize) -> Level {
        let mut transversal = vec![None; n];
        transversal[base] = Some(Perm::identity(n));
        Level { base, gens: Vec::new(), transversal, checked_upto: vec![0; n] }
    }

    fn orbit_size(&self) -> u128 {
        self.transversal.iter().filter(|t| t.is_some()).count() as u128
    }

    /// Close the orbit of the base under the level generators.
    fn extend_orbit(&mut self) {
        let mut frontier: Vec<usize> =
            (0..self.transversal.len()).filter(|&p| self.transversal[p].is_some()).collect();
        while let Some(p) = frontier.pop() {
            for g in &self.gens {
                let img = g.apply(p);
                if self.transversal[img].is_none() {
                    let rep = self.transversal[p].as_ref().expect("in orbit");
                    self.transversal[img] = Some(g.compose(rep));
                    frontier.push(img);
                }
            }
        }
    }
}

impl PermGroup {
    pub fn trivial(n: usize) -> PermGroup {
        PermGroup { n, levels: Vec::new(), prescribed: false }
    }

    /// A chain whose base is exactly `base` (all points), pre-creating every
    /// level. Levels whose stabilizer acts trivially simply keep singleton
    /// orbits. The generator set of level d then generates the pointwise
    /// stabilizer of base[0..d].
    pub fn with_base(n: usize, base: &[usize]) -> PermGroup {
        debug_assert_eq!(base.len(), n);
        PermGroup {
            n,
            levels: base.iter().map(|&b| Level::new(n, b)).collect(),
            prescribed: true,
        }
    }

    pub fn from_generators(n: usize, gens: &[Perm]) -> PermGroup {
        let mut g = PermGroup::trivial(n);
        for p in gens {
            g.add_generator(p.clone());
        }
        g
    }

    /// Generators of the pointwise stabilizer of the first `depth` base
    /// points (prescribed-base chains only).
    pub fn stabilizer_gens(&self, depth: usize) -> &[Perm] {
        debug_assert!(self.prescribed);
        self.levels.get(depth).map(|l| l.gens.as_slice()).unwrap_or(&[])
    }

    /// Strip `g` through the chain; returns the residue and the level it
    /// stopped at (residue is identity iff `g` is in the group).
    fn sift_from(&self, g: &Perm, start: usize) -> (Perm, usize) {
        let mut g = g.clone();
        for (i, level) in self.levels.iter().enumerate().skip(start) {
            let img = g.apply(level.base);
            match &level.transversal[img] {
                None => return (g, i),
                Some(rep) => g = rep.inverse().compose(&g),
            }
        }
        (g, self.levels.len())
    }

    pub fn contains(&self, g: &Perm) -> bool {
        let (residue, _) = self.sift_from(g, 0);
        residue.is_identity()
    }

    pub fn add_generator(&mut self, g: Perm) {
        self.add_generators(std::iter::once(g));
    }

    /// Batch insertion: install every genuinely new generator first, then
    /// restore the chain invariant once.
    pub fn add_generators(&mut self, gens: impl IntoIterator<Item = Perm>) {
        let mut touched = false;
        for g in gens {
            debug_assert_eq!(g.len(), self.n);
            let (residue, level) = self.sift_from(&g, 0);
            if residue.is_identity() {
                continue;
            }
            // a genuinely new element enlarges the groups of every level it
            // fixes into
            self.install(residue, 0, level);
            touched = true;
        }
        if touched {
            self.close();
        }
    }

    /// Record a strong generator fixing the first `level` base points into
    /// the generator sets of levels `from..=level`.
    fn install(&mut self, g: Perm, from: usize, level: usize) {
        if level == self.levels.len() {
            debug_assert!(!self.prescribed, "a prescribed base covers every point");
            let base = (0..self.n).find(|&i| g.apply(i) != i).expect("non-identity");
            self.levels.push(Level::new(self.n, base));
        }
        for i in from..=level {
            if !self.levels[i].gens.contains(&g) {
                self.levels[i].gens.push(g.clone());
            }
        }
    }

    /// Restore the chain invariant bottom-up: when level i is examined, all
    /// deeper levels are consistent, so sifting a Schreier generator either
    /// proves membership or yields a residue that genuinely extends a deeper
    /// level (keeping the strong generating set small). After an extension
    /// the sweep resumes at the deepest touched level.
    fn close(&mut self) {
        if self.levels.is_empty() {
            return;
        }
        let mut i = self.levels.len() - 1;
        loop {
            match self.process_level(i) {
                Some(deeper) => {
                    i = deeper;
                }
                None => {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                }
            }
        }
    }

    /// Check the outstanding Schreier pairs of one level. Returns the level
    /// to resume at if a new strong generator was installed deeper.
    fn process_level(&mut self, i: usize) -> Option<usize> {
        self.levels[i].extend_orbit();
        loop {
            // the next unchecked (point, generator) pair
            let pair = {
                let lvl = &self.levels[i];
                let mut found = None;
                for p in 0..self.n {
                    if lvl.transversal[p].is_none() {
                        continue;
                    }
                    if lvl.checked_upto[p] < lvl.gens.len() {
                        found = Some((p, lvl.checked_upto[p]));
                        break;
                    }
                }
                found
            };
            let Some((p, gi)) = pair else { return None };
            let s = {
                let lvl = &self.levels[i];
                let rep = lvl.transversal[p].as_ref().expect("in orbit");
                let gen = &lvl.gens[gi];
                let target = gen.apply(p);
                let target_rep = lvl.transversal[target].as_ref().expect("orbit closed");
                target_rep.inverse().compose(&gen.compose(rep))
            };
            self.levels[i].checked_upto[p] = gi + 1;
            if s.is_identity() {
                continue;
            }
            let (residue, l) = self.sift_from(&s, i + 1);
            if !residue.is_identity() {
                self.install(residue, i + 1, l);
                return Some(l.min(self.levels.len() - 1));
            }
        }
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit_size()).product()
    }
}

/// Orbit partition of 0..n-1 under a set of permutations (union-find).
pub struct OrbitPartition {
    parent: Vec<usize>,
}

impl OrbitPartition {
    pub fn identity(n: usize) -> Self {
        OrbitPartition { parent: (0..n).collect() }
    }

    pub fn new(n: usize, gens: impl Iterator<Item = impl std::ops::Deref<Target = Perm>>) -> Self {
        let mut uf = OrbitPartition::identity(n);
        for g in gens {
            for i in 0..n {
                uf.union(i, g.apply(i));
            }
        }
        uf
    }

    pub fn find(&mut self, i: usize) -> usize {
        let mut i = i;
        while self.parent[i] != i {
            let p = self.parent[i];
            self.parent[i] = self.parent[p];
            i = p;
        }
        i
    }

    /// Merge the classes of a and b (the smaller root wins, keeping
    /// representatives deterministic).
    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_and_inverse() {
        let p = Perm(vec![1, 2, 0, 3]);
        let q = Perm(vec![1, 0, 3, 2]);
        let pq = p.compose(&q);
        for i in 0..4 {
            assert_eq!(pq.apply(i), p.apply(q.apply(i)));
        }
        assert!(p.compose(&p.inverse()).is_identity());
    }

    #[test]
    fn symmetric_group_order() {
        for n in 2..=7usize {
            let cycle = Perm((0..n).map(|i| ((i + 1) % n) as u8).collect());
            let swap = Perm::transposition(n, 0, 1);
            let g = PermGroup::from_generators(n, &[cycle, swap]);
            assert_eq!(g.order(), factorial_u128(n));
        }
    }

    #[test]
    fn small_groups() {
        // Klein four group inside S_4
        let a = Perm(vec![1, 0, 3, 2]);
        let b = Perm(vec![2, 3, 0, 1]);
        let g = PermGroup::from_generators(4, &[a.clone(), b.clone()]);
        assert_eq!(g.order(), 4);
        assert!(g.contains(&a.compose(&b)));
        assert!(!g.contains(&Perm::transposition(4, 0, 1)));

        // alternating group A_4 from two 3-cycles
        let c1 = Perm(vec![1, 2, 0, 3]);
        let c2 = Perm(vec![0, 2, 3, 1]);
        let g = PermGroup::from_generators(4, &[c1, c2]);
        assert_eq!(g.order(), 12);
    }

    #[test]
    fn order_vs_brute_force_closure() {
        // dihedral-ish random checks: closure size equals chain order
        let gens = vec![Perm(vec![1, 2, 3, 4, 0]), Perm(vec![4, 3, 2, 1, 0])];
        let g = PermGroup::from_generators(5, &gens);
        let mut seen = std::collections::HashSet::new();
        let mut frontier = vec![Perm::identity(5)];
        seen.insert(Perm::identity(5));
        while let Some(p) = frontier.pop() {
            for gen in &gens {
                let q = gen.compose(&p);
                if seen.insert(q.clone()) {
                    frontier.push(q);
                }
            }
        }
        assert_eq!(g.order(), seen.len() as u128);
    }

    #[test]
    fn prescribed_base_chain() {
        // S_4 with base (2, 0, 1, 3): order is still 24 and stabilizer
        // generators really fix the base prefixes
        let base = [2usize, 0, 1, 3];
        let mut g = PermGroup::with_base(4, &base);
        g.add_generator(Perm(vec![1, 2, 3, 0]));
        g.add_generator(Perm(vec![1, 0, 2, 3]));
        assert_eq!(g.order(), 24);
        for depth in 0..4 {
            for gen in g.stabilizer_gens(depth) {
                for &b in &base[..depth] {
                    assert_eq!(gen.apply(b), b);
                }
            }
        }
        // stabilizer of one point in S_4 is S_3
        let s3: std::collections::HashSet<Perm> = {
            let gens = g.stabilizer_gens(1);
            let mut seen = std::collections::HashSet::new();
            let mut frontier: Vec<Perm> = vec![Perm::identity(4)];
            seen.insert(Perm::identity(4));
            while let Some(p) = frontier.pop() {
                for gen in gens {
                    let q = gen.compose(&p);
                    if seen.insert(q.clone()) {
                        frontier.push(q);
                    }
                }
            }
            seen
        };
        assert_eq!(s3.len(), 6);
    }

    #[test]
    fn orbit_partition() {
        let gens = vec![Perm(vec![1, 0, 2, 3, 4]), Perm(vec![0, 1, 3, 2, 4])];
        let mut uf = OrbitPartition::new(5, gens.iter());
        assert_eq!(uf.find(0), uf.find(1));
        assert_eq!(uf.find(2), uf.find(3));
        assert_ne!(uf.find(0), uf.find(2));
        assert_ne!(uf.find(4), uf.find(0));
    }
}
