//! Random instances and brute-force oracles.
//!
//! The oracles deliberately avoid the code paths they check: the
//! discriminant is taken from the product of root differences, and the
//! cluster tree is rebuilt by recursive residue refinement with annotations
//! recomputed from scratch.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cluster::{build_cluster_tree, equation_discriminant, ClusterTree, Parity};
use crate::conductor::{analyze_full, AnalysisInput, AnalyzeOptions, EqualityReason, Report};
use crate::valuation::{build_matrix, val, validate_ultrametric, Extended, Instance, Prime, ValuationMatrix};

pub const PRIMES: [u64; 5] = [3, 5, 7, 11, 13];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenSpec {
    pub seed: u64,
    pub p: u64,
    pub genus: usize,
    /// Depth below which clusters may keep splitting. Clusters holding more
    /// than `p` roots always split further, so deeper trees still occur.
    pub max_depth: u32,
    /// Weight of the single-group (chain) choice when picking how many
    /// residue classes a cluster splits into.
    pub chain_bias: u32,
    /// Apply a random unit affine change of variable to the roots.
    pub transform: bool,
}

impl GenSpec {
    pub fn new(seed: u64, p: u64, genus: usize) -> Self {
        Self {
            seed,
            p,
            genus,
            max_depth: 3,
            chain_bias: 1,
            transform: false,
        }
    }

    /// Draws all parameters from `seed`.
    pub fn random(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
        Self {
            seed,
            p: *PRIMES.choose(&mut rng).unwrap(),
            genus: rng.gen_range(2..=6),
            max_depth: rng.gen_range(0..=4),
            chain_bias: rng.gen_range(0..=2),
            transform: rng.gen_bool(0.5),
        }
    }
}

fn pow(p: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

fn place(rng: &mut ChaCha8Rng, spec: &GenSpec, count: usize, depth: u32, base: BigInt, out: &mut Vec<BigInt>) {
    let scale = pow(spec.p, depth);
    if count == 1 {
        // anything in the disk; the extra digits do not change valuations
        let tail = BigInt::from(rng.gen_range(0..spec.p)) * &scale;
        out.push(base + tail);
        return;
    }
    let p = spec.p as usize;
    let groups = if depth >= spec.max_depth {
        count.min(p)
    } else {
        let hi = count.min(p);
        let chain = rng.gen_range(0..=spec.chain_bias) > 0;
        if chain && count <= p {
            1
        } else {
            rng.gen_range(1..=hi)
        }
    };
    let groups = if count > p { groups.max(2) } else { groups };
    // sizes: every group nonempty, the rest spread at random
    let mut sizes = vec![1usize; groups];
    for _ in groups..count {
        let k = rng.gen_range(0..groups);
        sizes[k] += 1;
    }
    let mut digits: Vec<u64> = (0..spec.p).collect();
    digits.shuffle(rng);
    for (size, digit) in sizes.into_iter().zip(digits) {
        let next = &base + BigInt::from(digit) * &scale;
        place(rng, spec, size, depth + 1, next, out);
    }
}

/// Builds `2g + 2` distinct integral roots with a random cluster shape.
pub fn gen_instance(spec: &GenSpec) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let prime = Prime::new(spec.p).expect("generator primes are odd primes");
    let n = 2 * spec.genus + 2;
    let mut ints = Vec::with_capacity(n);
    place(&mut rng, spec, n, 0, BigInt::zero(), &mut ints);
    let p = BigInt::from(spec.p);
    let unit = |rng: &mut ChaCha8Rng| loop {
        let u = BigInt::from(rng.gen_range(-50i64..=50));
        if !u.is_zero() && !(&u % &p).is_zero() {
            return u;
        }
    };
    let mut roots: Vec<BigRational> = if spec.transform {
        let u = unit(&mut rng);
        let w = unit(&mut rng).abs();
        let c = BigInt::from(rng.gen_range(-1000i64..=1000));
        ints.into_iter()
            .map(|b| BigRational::new(u.clone() * b + &c, w.clone()))
            .collect()
    } else {
        ints.into_iter().map(BigRational::from_integer).collect()
    };
    roots.shuffle(&mut rng);
    Instance::new(prime, roots, false).expect("generated roots are distinct and integral")
}

/// `ν(Π_{i<j} (b_i - b_j)²)` by exact multiplication.
pub fn disc_oracle(inst: &Instance) -> i64 {
    let r = inst.roots();
    let mut prod = BigRational::one();
    for i in 0..r.len() {
        for j in i + 1..r.len() {
            let diff = &r[i] - &r[j];
            prod *= &diff * &diff;
        }
    }
    match val(&prod, inst.prime()) {
        Extended::Finite(v) => v,
        Extended::Infinity => unreachable!("roots are distinct"),
    }
}

/// A cluster vertex described only by root sets, for comparing trees built
/// by different algorithms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct VertexSignature {
    pub depth: u64,
    pub members: Vec<usize>,
    pub parent_members: Option<Vec<usize>>,
    pub wt: usize,
    pub l_prime: usize,
    pub r: usize,
    pub s: usize,
    pub l: usize,
    pub parity: Parity,
}

pub fn tree_signature(tree: &ClusterTree) -> BTreeSet<VertexSignature> {
    tree.vertices()
        .iter()
        .map(|v| VertexSignature {
            depth: v.depth,
            members: v.members.clone(),
            parent_members: tree.parent(v).map(|p| p.members.clone()),
            wt: v.wt,
            l_prime: v.l_prime,
            r: v.r,
            s: v.s,
            l: v.l,
            parity: v.parity,
        })
        .collect()
}

/// Annotates raw `(depth, members, parent)` nodes without using the tree
/// builder. Parity comes from `ν_v(f) = Σ_i min(depth, m(c, i))` for any
/// member `c`.
fn annotate(nodes: &[(u64, Vec<usize>, Option<usize>)], m: &ValuationMatrix) -> BTreeSet<VertexSignature> {
    let n = m.len();
    nodes
        .iter()
        .enumerate()
        .map(|(k, (depth, members, parent))| {
            let kids: Vec<&Vec<usize>> = nodes
                .iter()
                .filter(|(_, _, p)| *p == Some(k))
                .map(|(_, mem, _)| mem)
                .collect();
            let covered: usize = kids.iter().map(|c| c.len()).sum();
            let r = kids.iter().filter(|c| c.len() % 2 == 1).count();
            let s = kids.len() - r;
            let l_prime = members.len() - covered;
            let c = members[0];
            let f_val: u64 = (0..n)
                .map(|i| if i == c { *depth } else { (*depth).min(m.off(c, i)) })
                .sum();
            VertexSignature {
                depth: *depth,
                members: members.clone(),
                parent_members: parent.map(|p| nodes[p].1.clone()),
                wt: members.len(),
                l_prime,
                r,
                s,
                l: l_prime + r,
                parity: Parity::of(f_val),
            }
        })
        .collect()
}

/// Splits `members` into the classes of `shifted[i][j] >= 1`.
fn residue_classes(members: &[usize], related: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let mut left: Vec<usize> = members.to_vec();
    let mut out = Vec::new();
    while let Some(&first) = left.first() {
        let (class, rest): (Vec<usize>, Vec<usize>) = left.iter().partition(|&&j| j == first || related(first, j));
        out.push(class);
        left = rest;
    }
    out
}

/// Rebuilds the tree by recursive refinement on the matrix: each level
/// subtracts 1 from every valuation inside a class and reclassifies.
pub fn naive_tree_oracle(m: &ValuationMatrix) -> BTreeSet<VertexSignature> {
    let n = m.len();
    let mut nodes: Vec<(u64, Vec<usize>, Option<usize>)> = vec![(0, (0..n).collect(), None)];
    // shifted valuations, decremented along the recursion
    fn go(
        shifted: Vec<Vec<u64>>,
        members: Vec<usize>,
        depth: u64,
        node: usize,
        nodes: &mut Vec<(u64, Vec<usize>, Option<usize>)>,
    ) {
        let pos = |i: usize| members.iter().position(|&x| x == i).unwrap();
        for class in residue_classes(&members, |i, j| shifted[pos(i)][pos(j)] >= 1) {
            if class.len() < 2 {
                continue;
            }
            let sub: Vec<Vec<u64>> = class
                .iter()
                .map(|&i| class.iter().map(|&j| shifted[pos(i)][pos(j)].saturating_sub(1)).collect())
                .collect();
            let mut sorted = class.clone();
            sorted.sort_unstable();
            nodes.push((depth + 1, sorted, Some(node)));
            let id = nodes.len() - 1;
            go(sub, class, depth + 1, id, nodes);
        }
    }
    let shifted: Vec<Vec<u64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { u64::MAX } else { m.off(i, j) }).collect())
        .collect();
    go(shifted, (0..n).collect(), 0, 0, &mut nodes);
    annotate(&nodes, m)
}

fn residue(q: &BigRational, p: &BigInt) -> BigInt {
    let den_inv = q.denom().modpow(&(p - BigInt::from(2)), p);
    (q.numer() * den_inv).mod_floor(p)
}

/// Rebuilds the tree from the roots themselves: group by residue mod p,
/// then recurse on `(b_j - b_i) / p` inside each class.
pub fn naive_tree_from_roots(inst: &Instance) -> BTreeSet<VertexSignature> {
    let p = inst.prime().to_bigint();
    let n = inst.roots().len();
    let mut nodes: Vec<(u64, Vec<usize>, Option<usize>)> = vec![(0, (0..n).collect(), None)];
    fn go(
        p: &BigInt,
        pts: Vec<(usize, BigRational)>,
        depth: u64,
        node: usize,
        nodes: &mut Vec<(u64, Vec<usize>, Option<usize>)>,
    ) {
        let mut classes: Vec<(BigInt, Vec<(usize, BigRational)>)> = Vec::new();
        for (i, b) in pts {
            let r = residue(&b, p);
            match classes.iter_mut().find(|(c, _)| *c == r) {
                Some((_, v)) => v.push((i, b)),
                None => classes.push((r, vec![(i, b)])),
            }
        }
        for (_, class) in classes {
            if class.len() < 2 {
                continue;
            }
            let mut members: Vec<usize> = class.iter().map(|(i, _)| *i).collect();
            members.sort_unstable();
            nodes.push((depth + 1, members, Some(node)));
            let id = nodes.len() - 1;
            let pivot = class[0].1.clone();
            let pr = BigRational::from_integer(p.clone());
            let next = class
                .into_iter()
                .map(|(i, b)| (i, (b - &pivot) / &pr))
                .collect();
            go(p, next, depth + 1, id, nodes);
        }
    }
    let pts = inst.roots().iter().cloned().enumerate().collect();
    go(&p, pts, 0, 0, &mut nodes);
    let m = build_matrix(inst).expect("valid instance");
    annotate(&nodes, &m)
}

/// Ordered-triple check of the strong triangle inequality with the
/// isosceles condition.
pub fn brute_ultrametric(m: &ValuationMatrix) -> bool {
    let n = m.len();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i == j || j == k || i == k {
                    continue;
                }
                let (a, b, c) = (m.off(i, j), m.off(j, k), m.off(i, k));
                let lo = a.min(b);
                if c < lo || (a != b && c != lo) {
                    return false;
                }
            }
        }
    }
    true
}

/// Bumps one random entry by 1. Returns `Some(flagged)` when the validator
/// and the brute-force check agree, `None` when they disagree.
pub fn mutate_and_validate(m: &ValuationMatrix, rng: &mut ChaCha8Rng) -> Option<bool> {
    let n = m.len();
    let i = rng.gen_range(0..n);
    let j = loop {
        let j = rng.gen_range(0..n);
        if j != i {
            break j;
        }
    };
    let bumped = m.with_entry(i, j, m.off(i, j) + 1);
    let flagged = !validate_ultrametric(&bumped).is_ok();
    (flagged != brute_ultrametric(&bumped)).then_some(flagged)
}

#[derive(Debug, Clone, Default)]
pub struct TrialOutcome {
    pub report: Option<Report>,
    pub strict: bool,
    pub equality: bool,
    pub mutation_flagged: bool,
    pub failures: Vec<String>,
}

/// Checks a report against the oracles and the stated identities.
pub fn check_report(inst: &Instance, report: &Report, tree: &ClusterTree) -> Vec<String> {
    let mut fails = Vec::new();
    let mut expect = |ok: bool, what: &str| {
        if !ok {
            fails.push(what.to_string());
        }
    };
    let m = build_matrix(inst).expect("valid instance");
    let disc = disc_oracle(inst);
    let sum_d: i64 = report.vertices.iter().map(|l| l.d).sum();
    expect(disc == equation_discriminant(&m), "disc_oracle != equation_discriminant");
    expect(disc == sum_d, "disc_oracle != sum d");
    expect(disc == report.nu_df, "disc_oracle != nu_df");
    let sum_big_d: i64 = report.vertices.iter().map(|l| l.big_d).sum();
    expect(sum_big_d == report.artin_conductor, "sum D != artin_direct");
    expect(report.artin_local_sum == report.artin_conductor, "artin_local != artin_direct");
    expect(report.vertices.iter().map(|l| l.e).sum::<i64>() == 0, "sum E != 0");
    let sum_dp: i64 = report.vertices.iter().map(|l| l.dp).sum();
    let sum_dpp: i64 = report.vertices.iter().map(|l| l.dpp).sum();
    expect(sum_dp == sum_dpp, "sum D'' != sum D'");
    expect(report.vertices.iter().all(|l| l.dpp <= l.d), "D'' > d somewhere");
    expect(report.vertices.iter().all(|l| l.dp == l.big_d + l.e), "D' != D + E somewhere");
    expect(report.artin_conductor <= report.nu_df, "artin > nu_df");
    expect(report.genus_check == 2 * inst.genus() as i64 - 2, "genus_check != 2g - 2");
    expect(report.f_tilde >= 0, "f_tilde < 0");
    expect(
        report.n_components as i64 <= report.artin_conductor + 1,
        "n_X > artin + 1",
    );
    expect(tree_signature(tree) == naive_tree_oracle(&m), "tree != matrix refinement oracle");
    expect(tree_signature(tree) == naive_tree_from_roots(inst), "tree != root refinement oracle");
    expect(reasons_match_clauses(report, tree), "equality reason disagrees with its clause");
    expect(
        report.equality_holds == (report.artin_conductor == report.nu_df),
        "equality flag != (artin == nu_df)",
    );
    fails
}

/// Re-derives each equality clause from the ledger rows alone.
fn reasons_match_clauses(report: &Report, tree: &ClusterTree) -> bool {
    report.vertices.iter().all(|l| {
        let kids: Vec<_> = tree.vertex(l.id).children.iter().map(|&c| &report.vertices[c]).collect();
        let expected = match l.parity {
            Parity::Even if kids.iter().filter(|k| k.parity == Parity::Even).all(|k| k.wt == 2) => {
                EqualityReason::EvenAllEvenChildrenWt2
            }
            Parity::Odd if l.wt == 2 => EqualityReason::OddWt2,
            Parity::Odd if l.wt == 3 && kids.iter().all(|k| k.parity == Parity::Odd) => {
                EqualityReason::OddWt3NoEvenChildren
            }
            _ => EqualityReason::Strict,
        };
        l.reason == expected && l.equality == (expected != EqualityReason::Strict) && l.equality == (l.d == l.dpp)
    })
}

pub fn run_trial(spec: &GenSpec) -> TrialOutcome {
    let inst = gen_instance(spec);
    let mut out = TrialOutcome::default();
    let input = AnalysisInput::Roots(inst.clone());
    let analysis = match analyze_full(&input, &AnalyzeOptions::default()) {
        Ok(a) => a,
        Err(e) => {
            out.failures.push(format!("seed {}: analysis failed: {e}", spec.seed));
            return out;
        }
    };
    for f in check_report(&inst, &analysis.report, &analysis.tree) {
        out.failures.push(format!("seed {}: {f}", spec.seed));
    }
    let tree_again = build_cluster_tree(&build_matrix(&inst).unwrap(), false).unwrap();
    if tree_again != analysis.tree {
        out.failures.push(format!("seed {}: tree construction is not deterministic", spec.seed));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed.wrapping_add(1));
    match mutate_and_validate(&build_matrix(&inst).unwrap(), &mut rng) {
        Some(flagged) => out.mutation_flagged = flagged,
        None => out
            .failures
            .push(format!("seed {}: validator disagrees with brute force on a mutant", spec.seed)),
    }
    out.strict = analysis.report.artin_conductor < analysis.report.nu_df;
    out.equality = analysis.report.equality_holds;
    out.report = Some(analysis.report);
    out
}

#[derive(Debug, Clone, Default)]
pub struct SuiteSummary {
    pub trials: usize,
    pub strict: usize,
    pub equality: usize,
    pub mutations_flagged: usize,
    pub primes_seen: BTreeSet<u64>,
    pub genera_seen: BTreeSet<usize>,
    pub failures: Vec<String>,
}

impl SuiteSummary {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs `trials` random trials with specs derived from `seed`.
pub fn run_suite(trials: usize, seed: u64) -> SuiteSummary {
    let mut summary = SuiteSummary::default();
    for k in 0..trials {
        let spec = GenSpec::random(seed.wrapping_mul(1_000_003).wrapping_add(k as u64));
        summary.merge(&spec, run_trial(&spec));
    }
    summary
}

impl SuiteSummary {
    pub fn merge(&mut self, spec: &GenSpec, t: TrialOutcome) {
        self.trials += 1;
        self.strict += usize::from(t.strict);
        self.equality += usize::from(t.equality);
        self.mutations_flagged += usize::from(t.mutation_flagged);
        self.primes_seen.insert(spec.p);
        self.genera_seen.insert(spec.genus);
        self.failures.extend(t.failures);
    }
}
