//! Admissibility of invariant pairs, embedding and image counts, and the
//! relabeling action of Aut(Θ) ≅ S2 × S3 on invariant vectors.

use serde::{Deserialize, Serialize};

use crate::frontdiagram::ThetaInvariants as DiagramInvariants;
use crate::halfint::HalfInt;

/// The pair (tb-vector, rot-vector) over the three standard oriented cycles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct InvariantPair {
    pub tb: [i64; 3],
    pub rot: [i64; 3],
}

impl InvariantPair {
    pub fn new(tb: [i64; 3], rot: [i64; 3]) -> Self {
        InvariantPair { tb, rot }
    }

    pub fn total_rot(&self) -> i64 {
        self.rot.iter().sum()
    }

    pub fn tw(&self) -> [HalfInt; 3] {
        let mut tw = [HalfInt::ZERO; 3];
        for i in 0..3 {
            tw[i] = HalfInt::half_of(self.tb[(i + 2) % 3] + self.tb[i] - self.tb[(i + 1) % 3]);
        }
        tw
    }
}

impl From<&DiagramInvariants> for InvariantPair {
    fn from(inv: &DiagramInvariants) -> Self {
        InvariantPair {
            tb: inv.tb,
            rot: inv.rot,
        }
    }
}

/// A complete invariant for a topologically trivial labeled Θ-embedding:
/// the classical pair plus the coorientation sign at v1. When the total
/// rotation number is ±1 the sign is forced to match it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EmbeddingKey {
    pub tb: [i64; 3],
    pub rot: [i64; 3],
    pub sigma1: i64,
}

impl EmbeddingKey {
    pub fn new(pair: InvariantPair, sigma1: i64) -> Self {
        EmbeddingKey {
            tb: pair.tb,
            rot: pair.rot,
            sigma1,
        }
    }

    pub fn pair(&self) -> InvariantPair {
        InvariantPair {
            tb: self.tb,
            rot: self.rot,
        }
    }

    pub fn total_rot(&self) -> i64 {
        self.rot.iter().sum()
    }

    /// σ(v2) = σ(v1) − 2·Rot as a sign.
    pub fn sigma2(&self) -> i64 {
        match self.total_rot() {
            0 => self.sigma1,
            _ => -self.sigma1,
        }
    }

    pub fn is_valid(&self) -> bool {
        if !is_admissible(&self.pair()).0 {
            return false;
        }
        match self.total_rot() {
            1 => self.sigma1 == 1,
            -1 => self.sigma1 == -1,
            0 => self.sigma1 == 1 || self.sigma1 == -1,
            _ => false,
        }
    }

    /// The one or two valid keys over an admissible pair.
    pub fn keys_over(pair: InvariantPair) -> Vec<EmbeddingKey> {
        match pair.total_rot() {
            0 => vec![EmbeddingKey::new(pair, 1), EmbeddingKey::new(pair, -1)],
            r @ (1 | -1) => vec![EmbeddingKey::new(pair, r)],
            _ => vec![],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintViolation {
    pub constraint: String,
    pub cycle: Option<usize>,
}

/// Checks the three admissibility restrictions: the Bennequin bound and the
/// parity condition on every cycle, and the total rotation bound.
pub fn is_admissible(pair: &InvariantPair) -> (bool, Vec<ConstraintViolation>) {
    let mut violations = Vec::new();
    for i in 0..3 {
        if pair.tb[i] + pair.rot[i].abs() > -1 {
            violations.push(ConstraintViolation {
                constraint: "tb + |rot| <= -1".to_string(),
                cycle: Some(i + 1),
            });
        }
        if (pair.tb[i] + pair.rot[i]).rem_euclid(2) != 1 {
            violations.push(ConstraintViolation {
                constraint: "tb + rot = 1 mod 2".to_string(),
                cycle: Some(i + 1),
            });
        }
    }
    let total = pair.total_rot();
    if !(-1..=1).contains(&total) {
        violations.push(ConstraintViolation {
            constraint: "Rot in {-1, 0, 1}".to_string(),
            cycle: None,
        });
    }
    (violations.is_empty(), violations)
}

/// Number of distinct topologically trivial embeddings with the given pair.
pub fn count_embeddings(pair: &InvariantPair) -> usize {
    if !is_admissible(pair).0 {
        return 0;
    }
    if pair.total_rot() == 0 {
        2
    } else {
        1
    }
}

/// An automorphism of the abstract Θ-graph: an optional vertex swap and a
/// permutation of the edges. `edge_perm[i]` is the image of edge i.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AutElement {
    pub swap_vertices: bool,
    pub edge_perm: [usize; 3],
}

pub const IDENTITY: AutElement = AutElement {
    swap_vertices: false,
    edge_perm: [0, 1, 2],
};

impl AutElement {
    pub fn vertex_swap() -> Self {
        AutElement {
            swap_vertices: true,
            edge_perm: [0, 1, 2],
        }
    }

    /// Transposition of edges e_i and e_{i+1} (1-based i, indices mod 3).
    pub fn edge_transposition(i: usize) -> Self {
        let a = i - 1;
        let b = i % 3;
        let mut p = [0, 1, 2];
        p.swap(a, b);
        AutElement {
            swap_vertices: false,
            edge_perm: p,
        }
    }

    pub fn sign(&self) -> i64 {
        permutation_sign(&self.edge_perm)
    }

    /// Composition: `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &AutElement) -> AutElement {
        let mut p = [0usize; 3];
        for (i, slot) in p.iter_mut().enumerate() {
            *slot = self.edge_perm[other.edge_perm[i]];
        }
        AutElement {
            swap_vertices: self.swap_vertices ^ other.swap_vertices,
            edge_perm: p,
        }
    }

    pub fn all() -> Vec<AutElement> {
        let perms: [[usize; 3]; 6] = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let mut out = Vec::with_capacity(12);
        for swap in [false, true] {
            for p in perms {
                out.push(AutElement {
                    swap_vertices: swap,
                    edge_perm: p,
                });
            }
        }
        out
    }
}

fn permutation_sign(p: &[usize; 3]) -> i64 {
    let mut sign = 1;
    for i in 0..3 {
        for j in (i + 1)..3 {
            if p[i] > p[j] {
                sign = -sign;
            }
        }
    }
    sign
}

/// The representation ρ = ρ2 × ρ3 on Z^6. Relabeling by the automorphism
/// sends cycle γ_i to ±γ_{c(i)} where c is the edge permutation conjugated
/// by the cyclic shift (the cycle γ_i pairs edges e_i and e_{i+1}), and rot
/// picks up the sign of the permutation times the vertex-swap sign.
pub fn apply_to_pair(a: &AutElement, pair: &InvariantPair) -> InvariantPair {
    // Coordinate permutation: c = ζ ∘ edge_perm ∘ ζ^{-1} with ζ(i) = i+1.
    let mut c = [0usize; 3];
    for (i, slot) in c.iter_mut().enumerate() {
        // ζ^{-1}(i) = i-1; apply edge_perm; apply ζ.
        *slot = (a.edge_perm[(i + 2) % 3] + 1) % 3;
    }
    let rot_sign = a.sign() * if a.swap_vertices { -1 } else { 1 };
    let mut tb = [0i64; 3];
    let mut rot = [0i64; 3];
    for i in 0..3 {
        tb[c[i]] = pair.tb[i];
        rot[c[i]] = rot_sign * pair.rot[i];
    }
    InvariantPair { tb, rot }
}

/// The induced action on embedding keys: the invariant pair transforms by ρ
/// and σ(v1) picks up the permutation sign, read at the other vertex when
/// the vertices are swapped.
pub fn apply_aut(a: &AutElement, key: &EmbeddingKey) -> EmbeddingKey {
    let pair = apply_to_pair(a, &key.pair());
    let base = if a.swap_vertices { key.sigma2() } else { key.sigma1 };
    EmbeddingKey::new(pair, base * a.sign())
}

/// Orbit of a key under all 12 automorphisms, sorted and deduplicated.
pub fn orbit(key: &EmbeddingKey) -> Vec<EmbeddingKey> {
    let mut out: Vec<EmbeddingKey> = AutElement::all()
        .iter()
        .map(|a| apply_aut(a, key))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Lexicographically least orbit member under (tb, rot, sigma1).
pub fn canonical(key: &EmbeddingKey) -> EmbeddingKey {
    orbit(key).into_iter().min().unwrap()
}

pub fn equivalent_up_to_relabeling(k1: &EmbeddingKey, k2: &EmbeddingKey) -> bool {
    canonical(k1) == canonical(k2)
}

/// Image count over one invariant pair, with the theorem-style transposition
/// criterion evaluated alongside the orbit-based ground truth.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageCount {
    pub count: usize,
    /// What the transposition criterion predicts (admissible Rot = 0 pairs
    /// only; equals `count` elsewhere).
    pub criterion_count: usize,
    /// Pairs where the two disagree are reported, never silently resolved.
    pub discrepancy: bool,
}

/// Number of orbit-distinct embedding keys with the given pair. Ground truth
/// is orbit enumeration over the valid keys; the transposition criterion
/// (`ρ3(τ)` fixes the pair for some transposition τ) is evaluated as a
/// diagnostic cross-check.
pub fn count_images(pair: &InvariantPair) -> ImageCount {
    if !is_admissible(pair).0 {
        return ImageCount {
            count: 0,
            criterion_count: 0,
            discrepancy: false,
        };
    }
    let keys = EmbeddingKey::keys_over(*pair);
    let mut canon: Vec<EmbeddingKey> = keys.iter().map(canonical).collect();
    canon.sort();
    canon.dedup();
    let count = canon.len();
    let criterion_count = if pair.total_rot() != 0 {
        1
    } else {
        let fixed_by_transposition = (1..=3).any(|i| {
            let t = AutElement::edge_transposition(i);
            apply_to_pair(&t, pair) == *pair
        });
        if fixed_by_transposition {
            1
        } else {
            2
        }
    };
    ImageCount {
        count,
        criterion_count,
        discrepancy: count != criterion_count,
    }
}

/// All admissible pairs with every tb_i in [-bound, -1], in lexicographic
/// order of (tb, rot).
pub fn enumerate_admissible(bound: i64) -> Vec<InvariantPair> {
    assert!(bound >= 1, "bound must be at least 1");
    let mut out = Vec::new();
    let lo = -bound;
    for t1 in lo..=-1 {
        for t2 in lo..=-1 {
            for t3 in lo..=-1 {
                for r1 in -bound..=bound {
                    for r2 in -bound..=bound {
                        for r3 in -bound..=bound {
                            let pair = InvariantPair::new([t1, t2, t3], [r1, r2, r3]);
                            if is_admissible(&pair).0 {
                                out.push(pair);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn admissibility_spec_cases() {
        assert!(is_admissible(&InvariantPair::new([-1, -1, -1], [0, 0, 0])).0);
        let (ok, v) = is_admissible(&InvariantPair::new([0, -1, -1], [0, 0, 0]));
        assert!(!ok);
        assert!(v.iter().any(|c| c.constraint.contains("<= -1") && c.cycle == Some(1)));
        let (ok, v) = is_admissible(&InvariantPair::new([-2, -1, -1], [0, 0, 0]));
        assert!(!ok);
        assert!(v.iter().any(|c| c.constraint.contains("mod 2") && c.cycle == Some(1)));
        let (ok, v) = is_admissible(&InvariantPair::new([-2, -3, -2], [1, 0, 1]));
        assert!(!ok);
        assert!(v.iter().any(|c| c.constraint.contains("Rot")));
    }

    #[test]
    fn embedding_counts() {
        assert_eq!(count_embeddings(&InvariantPair::new([-1, -1, -1], [0, 0, 0])), 2);
        assert_eq!(count_embeddings(&InvariantPair::new([-1, -2, -1], [0, 1, 0])), 1);
        assert_eq!(count_embeddings(&InvariantPair::new([0, -1, -1], [0, 0, 0])), 0);
    }

    #[test]
    fn generator_actions_match_displayed_formulas() {
        let v = InvariantPair::new([10, 20, 30], [1, 2, 3]);
        let fv = apply_to_pair(&AutElement::vertex_swap(), &v);
        assert_eq!(fv, InvariantPair::new([10, 20, 30], [-1, -2, -3]));
        let f1 = apply_to_pair(&AutElement::edge_transposition(1), &v);
        assert_eq!(f1, InvariantPair::new([10, 30, 20], [-1, -3, -2]));
        let f2 = apply_to_pair(&AutElement::edge_transposition(2), &v);
        assert_eq!(f2, InvariantPair::new([30, 20, 10], [-3, -2, -1]));
        let f3 = apply_to_pair(&AutElement::edge_transposition(3), &v);
        assert_eq!(f3, InvariantPair::new([20, 10, 30], [-2, -1, -3]));
    }

    #[test]
    fn spec_phi_v_example() {
        let k = InvariantPair::new([-1, -2, -1], [0, 1, 0]);
        assert_eq!(
            apply_to_pair(&AutElement::vertex_swap(), &k),
            InvariantPair::new([-1, -2, -1], [0, -1, 0])
        );
    }

    #[test]
    fn spec_phi_1_example() {
        let k = InvariantPair::new([-1, -2, -3], [1, 0, -1]);
        assert_eq!(
            apply_to_pair(&AutElement::edge_transposition(1), &k),
            InvariantPair::new([-1, -3, -2], [-1, 1, 0])
        );
    }

    #[test]
    fn representation_property_on_pairs() {
        let v = InvariantPair::new([-1, -2, -3], [0, 1, -1]);
        for a in AutElement::all() {
            for b in AutElement::all() {
                let lhs = apply_to_pair(&b, &apply_to_pair(&a, &v));
                let rhs = apply_to_pair(&b.compose(&a), &v);
                assert_eq!(lhs, rhs, "a={a:?} b={b:?}");
            }
        }
    }

    #[test]
    fn representation_property_on_keys() {
        for pair in enumerate_admissible(3) {
            for key in EmbeddingKey::keys_over(pair) {
                for a in AutElement::all() {
                    assert!(apply_aut(&a, &key).is_valid());
                    for b in AutElement::all() {
                        let lhs = apply_aut(&b, &apply_aut(&a, &key));
                        let rhs = apply_aut(&b.compose(&a), &key);
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn orbit_spec_examples() {
        let k = EmbeddingKey::new(InvariantPair::new([-1, -1, -1], [0, 0, 0]), 1);
        assert_eq!(orbit(&k).len(), 2);
        // The lex-least orbit member moves the -2 entry to the front and
        // takes the negative rot coordinate; the vertex swap alone (which
        // fixes tb and negates rot) is lex-smaller than the input but not
        // minimal over the whole orbit.
        let k = EmbeddingKey::new(InvariantPair::new([-1, -2, -1], [0, 1, 0]), 1);
        let swapped = apply_aut(&AutElement::vertex_swap(), &k);
        assert_eq!(swapped.rot, [0, -1, 0]);
        assert!(swapped < k);
        let c = canonical(&k);
        assert_eq!(c.tb, [-2, -1, -1]);
        assert_eq!(c.rot, [-1, 0, 0]);
        assert_eq!(canonical(&c), c);
    }

    #[test]
    fn equivalence_spec_examples() {
        let p = InvariantPair::new([-1, -1, -1], [0, 0, 0]);
        let ks = EmbeddingKey::keys_over(p);
        assert!(equivalent_up_to_relabeling(&ks[0], &ks[1]));

        let p = InvariantPair::new([-2, -3, -4], [1, 0, -1]);
        let ks = EmbeddingKey::keys_over(p);
        assert!(!equivalent_up_to_relabeling(&ks[0], &ks[1]));
        assert_eq!(count_images(&p).count, 2);
        assert!(!count_images(&p).discrepancy);
    }

    #[test]
    fn image_count_spec_examples() {
        assert_eq!(count_images(&InvariantPair::new([-1, -1, -1], [0, 0, 0])).count, 1);
        assert_eq!(count_images(&InvariantPair::new([-1, -2, -1], [0, 1, 0])).count, 1);
    }

    #[test]
    fn enumerate_bound_one() {
        assert_eq!(
            enumerate_admissible(1),
            vec![InvariantPair::new([-1, -1, -1], [0, 0, 0])]
        );
    }

    #[test]
    fn enumerate_bound_two_members() {
        let pairs = enumerate_admissible(2);
        assert!(pairs.contains(&InvariantPair::new([-1, -2, -1], [0, 1, 0])));
        assert!(pairs.contains(&InvariantPair::new([-1, -2, -1], [0, -1, 0])));
        assert!(pairs.contains(&InvariantPair::new([-2, -2, -2], [1, -1, 1])));
        // tb = -2 forces odd rot on that cycle, so no admissible pair has a
        // rot-0 coordinate over a tb of -2.
        assert!(!pairs.contains(&InvariantPair::new([-2, -2, -2], [1, -1, 0])));
        let mut sorted = pairs.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), pairs.len(), "no duplicates");
        assert_eq!(sorted, pairs, "lexicographic order");
    }

    #[test]
    fn tw_roundtrip_identity() {
        for pair in enumerate_admissible(3) {
            let tw = pair.tw();
            for i in 0..3 {
                let sum = tw[i] + tw[(i + 1) % 3];
                assert_eq!(sum.as_integer(), Some(pair.tb[i]));
            }
        }
    }
}
