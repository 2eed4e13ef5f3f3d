//! Canonical forms and automorphism groups of codes under the coordinate
//! action of S_N.
//!
//! The canonical representative of an equivalence class is the column
//! ordering whose RREF generator matrix minimizes a fixed objective: at each
//! position the key (column invariant class, prefix overlap profile, RREF
//! column digits) is compared, columns left to right, digits top to bottom
//! under the field's symbol order. The backtracking search over
//! column sequences prunes with
//!   - a leader comparison (column-major monotone, so strictly worse
//!     prefixes never recover),
//!   - orbits of already-discovered automorphisms that fix the chosen
//!     prefix pointwise,
//!   - a jump to the first fork with the leader path whenever a leaf
//!     reproduces the leader image (the two paths differ by an
//!     automorphism, which is recorded).
//!
//! Every automorphism of the code is a product of the recorded generators,
//! so the group order from the stabilizer chain is exact.

use sha2::{Digest, Sha256};

use crate::code::Code;
use crate::field::Field;
use crate::perm::{factorial_u128, OrbitPartition, Perm, PermGroup};
use crate::vecpack::PackedVec;

/// A classified representative: canonical code, exact automorphism group
/// order, and a hash of the canonical generators for class lookup.
#[derive(Clone, Debug)]
pub struct CanonicalCode {
    pub canon: Code,
    pub aut_order: u128,
    pub fingerprint: Fingerprint,
}

/// SHA-256 of the serialized canonical generator matrix.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fingerprint(pub [u8; 32]);

impl std::fmt::Debug for Fingerprint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_hex())
    }
}

impl Fingerprint {
    pub fn of_code(code: &Code) -> Fingerprint {
        let mut h = Sha256::new();
        h.update([code.field().q(), code.len() as u8, code.dim() as u8]);
        for row in code.rows() {
            h.update(row.to_symbols(code.len()));
        }
        Fingerprint(h.finalize().into())
    }

    pub fn to_hex(self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_hex(s: &str) -> Option<Fingerprint> {
        if s.len() != 64 {
            return None;
        }
        let mut out = [0u8; 32];
        for (i, chunk) in s.as_bytes().chunks(2).enumerate() {
            let hi = (chunk[0] as char).to_digit(16)?;
            let lo = (chunk[1] as char).to_digit(16)?;
            out[i] = (hi * 16 + lo) as u8;
        }
        Some(Fingerprint(out))
    }
}

/// Canonical form plus the discovered automorphism generators (used by the
/// optional orbit reduction in the neighbor search).
pub struct CanonAnalysis {
    pub canonical: CanonicalCode,
    pub aut_gens: Vec<Perm>,
}

pub fn canonical_form(code: &Code) -> CanonicalCode {
    analyze(code).canonical
}

pub fn are_equivalent(a: &Code, b: &Code) -> bool {
    if a.field().q() != b.field().q() || a.len() != b.len() || a.dim() != b.dim() {
        return false;
    }
    canonical_form(a).canon == canonical_form(b).canon
}

pub fn analyze(code: &Code) -> CanonAnalysis {
    let n = code.len();
    if code.dim() == 0 {
        let canonical = CanonicalCode {
            canon: code.clone(),
            aut_order: factorial_u128(n),
            fingerprint: Fingerprint::of_code(code),
        };
        return CanonAnalysis { canonical, aut_gens: vec![] };
    }
    let mut search = Search::new(code);
    search.run();
    search.finish(code)
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
struct Key {
    color: u16,
    profile: u64,
    digits: u64,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    /// Current prefix beats the leader (or no leader yet).
    Less,
    /// Current prefix ties the leader key by key.
    Equal,
}

struct Search {
    field: &'static Field,
    n: usize,
    k: usize,
    /// column c of the generator matrix as a k-vector
    cols: Vec<PackedVec>,
    color: Vec<u16>,
    /// support masks of the sampled small-weight codewords
    word_masks: Vec<u32>,

    chosen: Vec<usize>,
    used: u64,
    u_mat: Vec<PackedVec>,
    rank: usize,
    /// per-depth recorded column digits of the developing RREF
    image_cols: Vec<u64>,

    leader_keys: Vec<Key>,
    leader_path: Vec<usize>,
    leader_cols: Vec<u64>,
    leader_generation: u64,

    gens: Vec<Perm>,
    gen_set: std::collections::HashSet<Perm>,
    /// Stabilizer chain over the discovered automorphisms, based along the
    /// leader path: nodes on that path (the only ones exploring several
    /// children) get exact point-stabilizer orbits.
    aut_chain: Option<PermGroup>,
    aut_chain_synced: usize,
}

impl Search {
    fn new(code: &Code) -> Search {
        let n = code.len();
        let k = code.dim();
        let field = code.field();
        let cols: Vec<PackedVec> = (0..n)
            .map(|c| {
                let mut v = PackedVec::zero();
                for (i, row) in code.rows().iter().enumerate() {
                    v.set(i, row.get(c));
                }
                v
            })
            .collect();
        let (color, word_masks) = column_invariants(code);

        let mut search = Search {
            field,
            n,
            k,
            cols,
            color,
            word_masks,
            chosen: Vec::with_capacity(n),
            used: 0,
            u_mat: (0..k).map(|i| PackedVec::zero().with(i, 1)).collect(),
            rank: 0,
            image_cols: Vec::with_capacity(n),
            leader_keys: Vec::new(),
            leader_path: Vec::new(),
            leader_cols: Vec::new(),
            leader_generation: 0,
            gens: Vec::new(),
            gen_set: std::collections::HashSet::new(),
            aut_chain: None,
            aut_chain_synced: 0,
        };
        // identical generator columns commute by a transposition
        for c in 0..n {
            for c2 in c + 1..n {
                if search.cols[c] == search.cols[c2] {
                    search.push_gen(Perm::transposition(n, c, c2));
                }
            }
        }
        search
    }

    fn push_gen(&mut self, g: Perm) {
        if !g.is_identity() && self.gen_set.insert(g.clone()) {
            self.gens.push(g);
        }
    }

    fn run(&mut self) {
        self.descend(Status::Less);
    }

    /// Key of a candidate column at the current state; the second component
    /// is Some(v) when the column extends the rank.
    fn candidate_key(&self, c: usize, profile: u64) -> (Key, Option<PackedVec>) {
        let mut v = PackedVec::zero();
        for i in 0..self.k {
            v.set(i, self.field.dot(self.u_mat[i], self.cols[c], self.k));
        }
        let mut below = false;
        for i in self.rank..self.k {
            if v.get(i) != 0 {
                below = true;
                break;
            }
        }
        let digits = if below {
            pack_digits_single(self.rank)
        } else {
            pack_digits(v, self.rank)
        };
        let key = Key { color: self.color[c], profile, digits };
        (key, if below { Some(v) } else { None })
    }

    /// Per-candidate overlap profiles: how many sampled words run through
    /// the candidate, bucketed by the size of their support intersection
    /// with the chosen prefix. Set-based, so it is equivariant; packed so
    /// that heavily prefix-connected candidates sort first.
    fn overlap_profiles(&self) -> Vec<u64> {
        let used = self.used as u32;
        let mut counts = vec![0u16; self.n * 8];
        for &mask in &self.word_masks {
            let s = (mask & used).count_ones().min(7) as usize;
            let mut rest = mask & !used;
            while rest != 0 {
                let c = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                counts[c * 8 + s] += 1;
            }
        }
        (0..self.n)
            .map(|c| {
                let mut key = 0u64;
                for s in 0..8 {
                    let byte = 0xffu64 - (counts[c * 8 + s] as u64).min(0xff);
                    key |= byte << (8 * s);
                }
                key
            })
            .collect()
    }

    fn descend(&mut self, status: Status) -> Option<usize> {
        let depth = self.chosen.len();
        if depth == self.n {
            return self.on_leaf(status);
        }

        // candidate keys for all unused columns
        let profiles = self.overlap_profiles();
        let mut cands: Vec<(Key, usize, Option<PackedVec>)> = Vec::new();
        for c in 0..self.n {
            if self.used >> c & 1 == 1 {
                continue;
            }
            let (key, pivot) = self.candidate_key(c, profiles[c]);
            cands.push((key, c, pivot));
        }
        let min_key = cands.iter().map(|(k, _, _)| *k).min().expect("depth < n");

        let mut status = status;
        if status == Status::Equal {
            match min_key.cmp(&self.leader_keys[depth]) {
                std::cmp::Ordering::Greater => return None,
                std::cmp::Ordering::Less => status = Status::Less,
                std::cmp::Ordering::Equal => {}
            }
        }

        let mut processed_roots: Vec<usize> = Vec::new();
        let mut orbits = self.prefix_orbits(depth);
        let mut gens_seen = self.gens.len();

        for idx in 0..cands.len() {
            let (key, c, pivot) = (cands[idx].0, cands[idx].1, cands[idx].2);
            if key != min_key {
                continue;
            }
            let root = orbits.find(c);
            if processed_roots.contains(&root) {
                continue;
            }

            // save state
            let saved_u = self.u_mat.clone();
            let saved_rank = self.rank;
            let gen_before = self.leader_generation;

            self.apply_choice(c, pivot, key.digits);
            let jump = self.descend(if status == Status::Less { Status::Less } else { Status::Equal });

            // restore
            self.chosen.pop();
            self.used &= !(1 << c);
            self.image_cols.pop();
            self.u_mat = saved_u;
            self.rank = saved_rank;

            if self.leader_generation != gen_before {
                // the new leader runs through this node, so the prefix now
                // ties it exactly
                status = Status::Equal;
            }

            if let Some(target) = jump {
                match target.cmp(&depth) {
                    std::cmp::Ordering::Less => return Some(target),
                    _ => { /* this node is the fork; keep going */ }
                }
            }

            processed_roots.push(root);
            if self.gens.len() != gens_seen {
                orbits = self.prefix_orbits(depth);
                gens_seen = self.gens.len();
                processed_roots = processed_roots
                    .iter()
                    .map(|&r| orbits.find(r))
                    .collect::<std::collections::BTreeSet<_>>()
                    .into_iter()
                    .collect();
            }
        }
        None
    }

    fn prefix_orbits(&mut self, depth: usize) -> OrbitPartition {
        if !self.leader_path.is_empty() && self.chosen[..] == self.leader_path[..depth] {
            self.sync_chain();
            let chain = self.aut_chain.as_ref().expect("chain built");
            return OrbitPartition::new(self.n, chain.stabilizer_gens(depth).iter());
        }
        let chosen = &self.chosen;
        OrbitPartition::new(
            self.n,
            self.gens.iter().filter(|g| chosen.iter().all(|&c| g.apply(c) == c)),
        )
    }

    fn sync_chain(&mut self) {
        if self.aut_chain.is_none() {
            self.aut_chain = Some(PermGroup::with_base(self.n, &self.leader_path));
            self.aut_chain_synced = 0;
        }
        let chain = self.aut_chain.as_mut().expect("just built");
        for g in &self.gens[self.aut_chain_synced..] {
            chain.add_generator(g.clone());
        }
        self.aut_chain_synced = self.gens.len();
    }

    fn apply_choice(&mut self, c: usize, pivot: Option<PackedVec>, digits: u64) {
        self.chosen.push(c);
        self.used |= 1 << c;
        self.image_cols.push(digits);
        if let Some(mut v) = pivot {
            let r = self.rank;
            let src = (r..self.k).find(|&i| v.get(i) != 0).expect("pivot row exists");
            self.u_mat.swap(r, src);
            let (vr, vsrc) = (v.get(r), v.get(src));
            v.set(r, vsrc);
            v.set(src, vr);
            let inv = self.field.inv(v.get(r)).expect("pivot nonzero");
            if inv != 1 {
                self.u_mat[r] = self.field.scale_vec(inv, self.u_mat[r], self.k);
            }
            for i in 0..self.k {
                if i != r {
                    let coef = v.get(i);
                    if coef != 0 {
                        let sub = self.field.scale_vec(coef, self.u_mat[r], self.k);
                        self.u_mat[i] = self.field.sub_vec(self.u_mat[i], sub, self.k);
                    }
                }
            }
            self.rank = r + 1;
        }
    }

    fn on_leaf(&mut self, status: Status) -> Option<usize> {
        match status {
            Status::Less => {
                // new leader; the chain base follows the leader path, so it
                // is rebuilt lazily from the collected generators
                self.leader_path = self.chosen.clone();
                self.leader_cols = self.image_cols.clone();
                self.leader_keys = self.rebuild_leader_keys();
                self.leader_generation += 1;
                self.aut_chain = None;
                self.aut_chain_synced = 0;
                None
            }
            Status::Equal => {
                // same image as the leader: the two paths differ by an
                // automorphism
                let mut g = vec![0u8; self.n];
                for j in 0..self.n {
                    g[self.leader_path[j]] = self.chosen[j] as u8;
                }
                let g = Perm(g);
                let fork = (0..self.n)
                    .find(|&j| self.leader_path[j] != self.chosen[j])
                    .expect("distinct paths");
                self.push_gen(g);
                Some(fork)
            }
        }
    }

    /// Replay the leader path to capture its per-depth keys.
    fn rebuild_leader_keys(&self) -> Vec<Key> {
        let mut keys = Vec::with_capacity(self.n);
        let mut used = 0u32;
        for (depth, &c) in self.leader_path.iter().enumerate() {
            let mut counts = [0u16; 8];
            for &mask in &self.word_masks {
                if mask >> c & 1 == 0 {
                    continue;
                }
                let s = (mask & used).count_ones().min(7) as usize;
                counts[s] += 1;
            }
            let mut profile = 0u64;
            for (s, &cnt) in counts.iter().enumerate() {
                let byte = 0xffu64 - (cnt as u64).min(0xff);
                profile |= byte << (8 * s);
            }
            keys.push(Key { color: self.color[c], profile, digits: self.leader_cols[depth] });
            used |= 1 << c;
        }
        keys
    }

    fn finish(self, code: &Code) -> CanonAnalysis {
        // the leader image, transposed from recorded column digits
        let mut rows = vec![PackedVec::zero(); self.k];
        for (j, &digits) in self.leader_cols.iter().enumerate() {
            for (i, row) in rows.iter_mut().enumerate() {
                row.set(j, unpack_digit(digits, i));
            }
        }
        let canon = Code::from_rows(self.field, self.n, rows).expect("leader rows valid");
        debug_assert_eq!(canon.dim(), self.k);
        debug_assert_eq!(
            canon,
            {
                let mut perm = vec![0usize; self.n];
                for (j, &c) in self.leader_path.iter().enumerate() {
                    perm[c] = j;
                }
                code.permuted(&perm)
            },
            "leader image must be the permuted code"
        );
        let aut_order = PermGroup::from_generators(self.n, &self.gens).order();
        CanonAnalysis {
            canonical: CanonicalCode {
                fingerprint: Fingerprint::of_code(&canon),
                canon,
                aut_order,
            },
            aut_gens: self.gens,
        }
    }
}

/// Pack column digits (row 0 most significant) so that u64 order compares
/// rows top to bottom.
#[inline]
fn pack_digits(v: PackedVec, upto: usize) -> u64 {
    let mut out = 0u64;
    for i in 0..upto {
        out |= (v.get(i) as u64) << (4 * (15 - i));
    }
    out
}

#[inline]
fn pack_digits_single(row: usize) -> u64 {
    1u64 << (4 * (15 - row))
}

#[inline]
fn unpack_digit(digits: u64, row: usize) -> u8 {
    ((digits >> (4 * (15 - row))) & 0xf) as u8
}

/// Equivariant column invariants: for each coordinate, the weight profile of
/// codewords through it, refined by co-incidence counts over the smallest
/// nonzero weight classes (Weisfeiler-Leman style iteration until stable).
/// Returns colors as ranks of the sorted signatures together with the
/// sampled word support masks that feed the per-node overlap profiles.
fn column_invariants(code: &Code) -> (Vec<u16>, Vec<u32>) {
    let n = code.len();
    let mut profile = vec![vec![0u32; n + 1]; n];
    let mut by_weight: Vec<Vec<u32>> = vec![Vec::new(); n + 1];
    for w in code.codewords() {
        let wt = w.weight(n) as usize;
        if wt == 0 {
            continue;
        }
        let mask = w.support_mask(n);
        by_weight[wt].push(mask);
        let mut m = mask;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            profile[i][wt] += 1;
            m &= m - 1;
        }
    }
    // sample the smallest weight classes until informative but cheap, and
    // derive pairwise co-incidence counts for the static refinement
    let mut word_masks: Vec<u32> = Vec::new();
    for class in by_weight.iter() {
        if class.is_empty() {
            continue;
        }
        word_masks.extend_from_slice(class);
        if word_masks.len() >= 4 * n || word_masks.len() > 4096 {
            break;
        }
    }
    let mut pair = vec![vec![0u32; n]; n];
    for &mask in &word_masks {
        let mut m1 = mask;
        while m1 != 0 {
            let i = m1.trailing_zeros() as usize;
            m1 &= m1 - 1;
            let mut m2 = m1;
            while m2 != 0 {
                let j = m2.trailing_zeros() as usize;
                m2 &= m2 - 1;
                pair[i][j] += 1;
                pair[j][i] += 1;
            }
            pair[i][i] += 1;
        }
    }

    // initial colors from the weight profiles
    let mut color = rank_signatures(&profile);
    // refine with pair counts until stable
    for _ in 0..n {
        let sigs: Vec<Vec<u32>> = (0..n)
            .map(|i| {
                let mut sig = vec![color[i] as u32];
                let mut neigh: Vec<u32> =
                    (0..n).filter(|&j| j != i).map(|j| ((color[j] as u32) << 16) | pair[i][j].min(0xffff)).collect();
                neigh.sort_unstable();
                sig.extend(neigh);
                sig
            })
            .collect();
        let new_color = rank_signatures(&sigs);
        if new_color == color {
            break;
        }
        color = new_color;
    }
    (color, word_masks)
}

fn rank_signatures<T: Ord + Clone>(sigs: &[T]) -> Vec<u16> {
    let mut sorted: Vec<&T> = sigs.iter().collect();
    sorted.sort();
    sorted.dedup();
    sigs.iter()
        .map(|s| sorted.binary_search_by(|probe| probe.cmp(&s)).expect("present") as u16)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::Code;
    use crate::field::Field;

    fn gf(q: u8) -> &'static Field {
        Field::get(q).unwrap()
    }

    fn code2(rows: &[&[u8]], len: usize) -> Code {
        Code::from_symbol_rows(gf(2), len, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
            .unwrap()
    }

    fn e8() -> Code {
        code2(
            &[
                &[1, 0, 0, 0, 0, 1, 1, 1],
                &[0, 1, 0, 0, 1, 0, 1, 1],
                &[0, 0, 1, 0, 1, 1, 0, 1],
                &[0, 0, 0, 1, 1, 1, 1, 0],
            ],
            8,
        )
    }

    /// Brute-force automorphism count by iterating all of S_N.
    fn aut_order_brute(code: &Code) -> u128 {
        let n = code.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut count = 0u128;
        permutohedron_heap(&mut perm, &mut |p: &[usize]| {
            let permuted: Vec<PackedVec> = code
                .rows()
                .iter()
                .map(|r| {
                    let mut out = PackedVec::zero();
                    for i in 0..n {
                        out.set(p[i], r.get(i));
                    }
                    out
                })
                .collect();
            if permuted.iter().all(|&r| code.contains(r)) {
                count += 1;
            }
        });
        count
    }

    fn permutohedron_heap(items: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
        fn heaps(k: usize, items: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
            if k == 1 {
                visit(items);
                return;
            }
            for i in 0..k {
                heaps(k - 1, items, visit);
                if k % 2 == 0 {
                    items.swap(i, k - 1);
                } else {
                    items.swap(0, k - 1);
                }
            }
        }
        let n = items.len();
        heaps(n, items, visit);
    }

    #[test]
    fn trivial_cases() {
        let i2 = code2(&[&[1, 1]], 2);
        let cc = canonical_form(&i2);
        assert_eq!(cc.canon, i2);
        assert_eq!(cc.aut_order, 2);

        let zero = Code::zero(gf(2), 5);
        let cc = canonical_form(&zero);
        assert_eq!(cc.aut_order, 120);
        assert_eq!(cc.canon, zero);
    }

    #[test]
    fn i2_plus_i2_aut_order_8() {
        let c = code2(&[&[1, 1, 0, 0], &[0, 0, 1, 1]], 4);
        assert_eq!(aut_order_brute(&c), 8);
        assert_eq!(canonical_form(&c).aut_order, 8);
    }

    #[test]
    fn extended_hamming_aut_order_1344() {
        let c = e8();
        assert_eq!(canonical_form(&c).aut_order, 1344);
    }

    #[test]
    fn idempotent() {
        let c = e8();
        let cc = canonical_form(&c);
        let cc2 = canonical_form(&cc.canon);
        assert_eq!(cc.canon, cc2.canon);
        assert_eq!(cc.aut_order, cc2.aut_order);
    }

    #[test]
    fn permutation_invariance() {
        let c = e8();
        let base = canonical_form(&c);
        let mut rng = crate::rng::SplitMix64::new(7);
        for _ in 0..50 {
            let perm = rng.random_perm(8);
            let pc = c.permuted(&perm);
            let cc = canonical_form(&pc);
            assert_eq!(cc.canon, base.canon);
            assert_eq!(cc.aut_order, base.aut_order);
        }
    }

    #[test]
    fn equivalence_examples() {
        let c = code2(&[&[1, 1, 0, 0], &[0, 0, 1, 1]], 4);
        let d = code2(&[&[1, 0, 1, 0], &[0, 1, 0, 1]], 4);
        assert!(are_equivalent(&c, &d));

        let i2x4 = code2(
            &[
                &[1, 1, 0, 0, 0, 0, 0, 0],
                &[0, 0, 1, 1, 0, 0, 0, 0],
                &[0, 0, 0, 0, 1, 1, 0, 0],
                &[0, 0, 0, 0, 0, 0, 1, 1],
            ],
            8,
        );
        assert!(!are_equivalent(&i2x4, &e8()));
    }

    #[test]
    fn aut_matches_brute_force_small_binary() {
        // assorted small codes, not necessarily self-dual
        let samples: Vec<Code> = vec![
            code2(&[&[1, 1, 1, 0], &[0, 1, 1, 1]], 4),
            code2(&[&[1, 0, 1, 1, 0], &[0, 1, 1, 0, 1]], 5),
            code2(&[&[1, 1, 1, 1, 1, 1]], 6),
            code2(&[&[1, 0, 0, 1, 1, 0], &[0, 1, 0, 1, 0, 1], &[0, 0, 1, 0, 1, 1]], 6),
        ];
        for c in samples {
            assert_eq!(canonical_form(&c).aut_order, aut_order_brute(&c), "code {c:?}");
        }
    }

    #[test]
    fn aut_matches_brute_force_ternary() {
        let tetra =
            Code::from_symbol_rows(gf(3), 4, &[vec![1, 0, 1, 1], vec![0, 1, 1, 2]]).unwrap();
        assert_eq!(canonical_form(&tetra).aut_order, aut_order_brute(&tetra));
        let line = Code::from_symbol_rows(gf(3), 3, &[vec![1, 2, 0]]).unwrap();
        assert_eq!(canonical_form(&line).aut_order, aut_order_brute(&line));
    }

    #[test]
    fn full_space_aut_is_full_symmetric() {
        let c = Code::full_space(gf(2), 5);
        assert_eq!(canonical_form(&c).aut_order, 120);
    }

    #[test]
    fn fingerprint_hex_roundtrip() {
        let fp = canonical_form(&e8()).fingerprint;
        assert_eq!(Fingerprint::from_hex(&fp.to_hex()), Some(fp));
    }
}
