//! Per-vertex conductor terms and the comparison with the discriminant.

use serde::{Deserialize, Serialize};

use crate::cluster::{build_cluster_tree, equation_discriminant, local_d, ClusterTree, ClusterVertex, Parity};
use crate::error::{AnalysisError, InputError, InvariantViolation};
use crate::model::{
    artin_by_cluster_vertex, artin_direct, build_tx, build_ty, check_tx, check_ty, detect_nonminimal, genus_check,
    self_intersections, XGraph, YGraph,
};
use crate::valuation::{build_matrix, Instance, ValuationMatrix};

/// Valuations above this make the materialized chains very long.
pub const LARGE_VALUATION: u64 = 1_000_000;

fn ww(wt: usize) -> i64 {
    (wt * (wt - 1)) as i64
}

fn odd_children<'a>(tree: &'a ClusterTree, v: &'a ClusterVertex) -> impl Iterator<Item = &'a ClusterVertex> + 'a {
    tree.children(v).filter(|w| w.is_odd())
}

fn parent_is_odd(tree: &ClusterTree, v: &ClusterVertex) -> bool {
    tree.parent_parity(v) == Some(Parity::Odd)
}

/// Local term `D(v)` of `-Art(X/S)`.
pub fn local_big_d(tree: &ClusterTree, v: &ClusterVertex) -> i64 {
    let (l, r, s) = (v.l as i64, v.r as i64, v.s as i64);
    if v.is_even() {
        l % 2 + 2 * r + 2 * s
    } else if parent_is_odd(tree, v) {
        -1 - r + 3 * s + 2 * l
    } else {
        -2 - r + 3 * s + 2 * l
    }
}

/// `Σ_{odd children}(2 - wt(wt-1))`.
fn odd_children_correction(tree: &ClusterTree, v: &ClusterVertex) -> i64 {
    odd_children(tree, v).map(|w| 2 - ww(w.wt)).sum()
}

/// Local redistribution term `E(v)`; these sum to zero over the tree.
pub fn local_e(tree: &ClusterTree, v: &ClusterVertex) -> i64 {
    let corr = odd_children_correction(tree, v);
    if v.is_even() {
        -((v.l % 2) as i64) - corr
    } else {
        let c = if parent_is_odd(tree, v) { 1 } else { 2 };
        (v.r + v.s) as i64 + c - ww(v.wt) - corr
    }
}

/// Closed form of `D'(v) = D(v) + E(v)`.
pub fn local_dp_closed(tree: &ClusterTree, v: &ClusterVertex) -> i64 {
    let odd_sum: i64 = odd_children(tree, v).map(|w| ww(w.wt)).sum();
    if v.is_even() {
        2 * v.s as i64 + odd_sum
    } else {
        2 * (v.l + v.s) as i64 - ww(v.wt) + odd_sum
    }
}

/// `#L_v`: children of weight exactly 2 of an odd vertex of weight > 2.
pub fn l_count(tree: &ClusterTree, v: &ClusterVertex) -> usize {
    if v.is_odd() && v.wt > 2 {
        tree.children(v).filter(|w| w.wt == 2).count()
    } else {
        0
    }
}

/// `D''(v)`: moves 2 from each odd weight-2 leaf up to its nearest
/// ancestor of weight > 2.
pub fn local_dpp(tree: &ClusterTree, v: &ClusterVertex, dp: i64) -> i64 {
    if v.is_even() {
        dp
    } else if v.wt == 2 {
        if v.is_leaf() {
            dp - 2
        } else {
            dp
        }
    } else {
        dp + 2 * l_count(tree, v) as i64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EqualityReason {
    #[serde(rename = "EVEN_ALL_EVEN_CHILDREN_WT2")]
    EvenAllEvenChildrenWt2,
    #[serde(rename = "ODD_WT2")]
    OddWt2,
    #[serde(rename = "ODD_WT3_NO_EVEN_CHILDREN")]
    OddWt3NoEvenChildren,
    Strict,
}

impl EqualityReason {
    /// Reads the equality clause off the tree shape alone.
    pub fn classify(tree: &ClusterTree, v: &ClusterVertex) -> Self {
        if v.is_even() {
            if tree.children(v).filter(|w| w.is_even()).all(|w| w.wt == 2) {
                return EqualityReason::EvenAllEvenChildrenWt2;
            }
        } else if v.wt == 2 {
            return EqualityReason::OddWt2;
        } else if v.wt == 3 && tree.children(v).all(|w| w.is_odd()) {
            return EqualityReason::OddWt3NoEvenChildren;
        }
        EqualityReason::Strict
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EqualityReason::EvenAllEvenChildrenWt2 => "EVEN_ALL_EVEN_CHILDREN_WT2",
            EqualityReason::OddWt2 => "ODD_WT2",
            EqualityReason::OddWt3NoEvenChildren => "ODD_WT3_NO_EVEN_CHILDREN",
            EqualityReason::Strict => "STRICT",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexLedger {
    pub id: usize,
    pub depth: u64,
    pub wt: usize,
    pub l_prime: usize,
    pub r: usize,
    pub s: usize,
    pub l: usize,
    pub parity: Parity,
    pub d: i64,
    #[serde(rename = "D")]
    pub big_d: i64,
    #[serde(rename = "E")]
    pub e: i64,
    #[serde(rename = "D_prime")]
    pub dp: i64,
    #[serde(rename = "D_double_prime")]
    pub dpp: i64,
    pub l_count: usize,
    pub equality: bool,
    pub reason: EqualityReason,
    /// `d - D''`, zero exactly when `equality` holds.
    pub defect: i64,
}

/// Evaluates every local term at `v` and checks the local identities.
pub fn compare_vertex(tree: &ClusterTree, v: &ClusterVertex) -> Result<VertexLedger, InvariantViolation> {
    let d = local_d(tree, v);
    let big_d = local_big_d(tree, v);
    let e = local_e(tree, v);
    let dp = big_d + e;
    if dp != local_dp_closed(tree, v) {
        return Err(InvariantViolation::at("D + E differs from the closed form of D'", v.id));
    }
    let lc = l_count(tree, v);
    let dpp = local_dpp(tree, v, dp);
    let shift = dpp - dp;
    if shift != 0 && shift != -2 && shift != 2 * lc as i64 {
        return Err(InvariantViolation::at("D'' - D' outside its case split", v.id));
    }
    if dpp > d {
        return Err(InvariantViolation::at("local inequality D'' <= d fails", v.id));
    }
    let reason = EqualityReason::classify(tree, v);
    let equality = dpp == d;
    if equality != (reason != EqualityReason::Strict) {
        return Err(InvariantViolation::at("equality clause disagrees with D'' = d", v.id));
    }
    Ok(VertexLedger {
        id: v.id,
        depth: v.depth,
        wt: v.wt,
        l_prime: v.l_prime,
        r: v.r,
        s: v.s,
        l: v.l,
        parity: v.parity,
        d,
        big_d,
        e,
        dp,
        dpp,
        l_count: lc,
        equality,
        reason,
        defect: d - dpp,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub genus: usize,
    /// Valuation of the discriminant of the given equation. Equals the
    /// minimal discriminant only if the equation is minimal.
    pub nu_df: i64,
    pub artin_conductor: i64,
    pub artin_local_sum: i64,
    pub n_components: usize,
    pub f_tilde: i64,
    pub genus_check: i64,
    pub inequality_holds: bool,
    pub equality_holds: bool,
    pub x_minimal: bool,
    pub nonminimal_vertices: Vec<usize>,
    pub component_bound_ok: bool,
    pub warnings: Vec<String>,
    pub vertices: Vec<VertexLedger>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnalysisInput {
    Roots(Instance),
    Matrix(ValuationMatrix),
}

/// Deliberate breakage used to exercise the invariant checks end to end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Forget one intersection point of `X_s`.
    DropIntersection,
    /// Add 1 to the local term `D` at the root.
    SkewLocalTerm,
}

impl std::str::FromStr for Fault {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "drop-intersection" => Ok(Fault::DropIntersection),
            "skew-local-term" => Ok(Fault::SkewLocalTerm),
            other => Err(format!("unknown fault {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AnalyzeOptions {
    pub allow_small_genus: bool,
    pub strict: bool,
    pub fault: Option<Fault>,
}

/// Everything built along the way, for rendering.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub report: Report,
    pub tree: ClusterTree,
    pub y: YGraph,
    pub x: XGraph,
}

pub fn analyze(input: &AnalysisInput, opts: &AnalyzeOptions) -> Result<Report, AnalysisError> {
    analyze_full(input, opts).map(|a| a.report)
}

fn check(cond: bool, identity: &str) -> Result<(), InvariantViolation> {
    if cond {
        Ok(())
    } else {
        Err(InvariantViolation::new(identity))
    }
}

pub fn analyze_full(input: &AnalysisInput, opts: &AnalyzeOptions) -> Result<Analysis, AnalysisError> {
    let matrix = match input {
        AnalysisInput::Roots(inst) => build_matrix(inst)?,
        AnalysisInput::Matrix(m) => m.clone(),
    };
    let tree = build_cluster_tree(&matrix, opts.allow_small_genus)?;

    let mut warnings = Vec::new();
    if tree.genus() < 2 {
        warnings.push(format!(
            "genus {} is out of paper scope (the comparison is proved for g >= 2)",
            tree.genus()
        ));
    }
    if matrix.max_entry() > LARGE_VALUATION {
        warnings.push(format!(
            "valuation {} exceeds {LARGE_VALUATION}; the model has very long chains",
            matrix.max_entry()
        ));
    }
    if opts.strict {
        if let Some(w) = warnings.first() {
            return Err(InputError::StrictWarning(w.clone()).into());
        }
    }

    let (report, y, x) = verify(&tree, &matrix, opts.fault, warnings)?;
    let report = Report {
        label: None,
        ..report
    };
    Ok(Analysis { report, tree, y, x })
}

fn verify(
    tree: &ClusterTree,
    matrix: &ValuationMatrix,
    fault: Option<Fault>,
    warnings: Vec<String>,
) -> Result<(Report, YGraph, XGraph), InvariantViolation> {
    let nu_df = equation_discriminant(matrix);
    let sum_d: i64 = tree.vertices().iter().map(|v| local_d(tree, v)).sum();
    check(sum_d == nu_df, "sum of d(v) differs from the equation discriminant")?;

    let y = build_ty(tree);
    check_ty(&y)?;
    for v in tree.vertices().iter().filter(|v| v.is_even()) {
        let beta = y.branch_degree(y.strict_transform(v.id));
        if beta != v.l + v.l % 2 {
            return Err(InvariantViolation::at("branch points on an even component differ from l + (l mod 2)", v.id));
        }
    }
    let mut x = build_tx(tree, &y)?;
    if fault == Some(Fault::DropIntersection) {
        x.drop_first_edge();
    }
    check(x.is_connected(), "special fiber of X is disconnected")?;
    check_tx(tree, &y, &x)?;
    check(
        x.components().iter().all(|c| c.multiplicity == 1 || c.multiplicity == 2),
        "component multiplicity outside {1, 2}",
    )?;

    let artin = artin_direct(&x);
    let two_g_minus_two = 2 * tree.genus() as i64 - 2;
    let self_int = self_intersections(&x)?;
    let gc = genus_check(&x, &self_int);
    check(gc == two_g_minus_two, "adjunction sum differs from 2g - 2")?;
    check(
        artin == two_g_minus_two + x.special_fiber_euler_characteristic(),
        "-Art(X/S) differs from -chi(generic fiber) + chi(special fiber)",
    )?;

    let per_vertex = artin_by_cluster_vertex(tree, &y, &x);
    let mut ledgers = Vec::with_capacity(tree.len());
    for v in tree.vertices() {
        let mut ledger = compare_vertex(tree, v)?;
        if fault == Some(Fault::SkewLocalTerm) && v.id == 0 {
            ledger.big_d += 1;
        }
        if per_vertex[v.id] != ledger.big_d {
            return Err(InvariantViolation::at("local term D(v) differs from the graph contribution over v", v.id));
        }
        ledgers.push(ledger);
    }

    let artin_local: i64 = ledgers.iter().map(|l| l.big_d).sum();
    check(artin_local == artin, "sum of D(v) differs from -Art(X/S)")?;
    check(ledgers.iter().map(|l| l.e).sum::<i64>() == 0, "sum of E(v) is not zero")?;
    check_breakup(tree)?;
    let sum_dp: i64 = ledgers.iter().map(|l| l.dp).sum();
    let sum_dpp: i64 = ledgers.iter().map(|l| l.dpp).sum();
    check(sum_dp == sum_dpp, "sum of D'' differs from sum of D'")?;
    let odd_wt2_leaves = tree
        .vertices()
        .iter()
        .filter(|v| v.is_odd() && v.is_leaf() && v.wt == 2)
        .count();
    let total_l: usize = ledgers.iter().map(|l| l.l_count).sum();
    check(odd_wt2_leaves == total_l, "odd weight-2 leaves are not matched with the sets L_v")?;

    let nonminimal = detect_nonminimal(tree);
    let inequality_holds = artin <= nu_df;
    check(inequality_holds, "-Art(X/S) exceeds the discriminant")?;
    let equality_holds = artin == nu_df;
    let ledgers_equal = ledgers.iter().all(|l| l.equality);
    check(
        equality_holds == (ledgers_equal && nonminimal.is_empty()),
        "equality verdict disagrees with the per-vertex ledgers",
    )?;
    let n_x = x.len();
    let f_tilde = artin - n_x as i64 + 1;
    check(f_tilde >= 0, "f~ is negative")?;
    let component_bound_ok = n_x as i64 <= artin + 1 && artin <= nu_df;
    check(component_bound_ok, "component count exceeds -Art(X/S) + 1")?;

    let report = Report {
        label: None,
        genus: tree.genus(),
        nu_df,
        artin_conductor: artin,
        artin_local_sum: artin_local,
        n_components: n_x,
        f_tilde,
        genus_check: gc,
        inequality_holds,
        equality_holds,
        x_minimal: nonminimal.is_empty(),
        nonminimal_vertices: nonminimal,
        component_bound_ok,
        warnings,
        vertices: ledgers,
    };
    Ok((report, y, x))
}

/// The three identities whose sum is `Σ E = 0`, each side accumulated on
/// its own.
fn check_breakup(tree: &ClusterTree) -> Result<(), InvariantViolation> {
    let vs = tree.vertices();
    let first: i64 = vs
        .iter()
        .map(|v| {
            if v.is_even() {
                -odd_children_correction(tree, v)
            } else {
                2 - ww(v.wt) - odd_children_correction(tree, v)
            }
        })
        .sum();
    check(first == 0, "weight part of sum E(v) is not zero")?;
    let lmod: i64 = vs.iter().filter(|v| v.is_even()).map(|v| (v.l % 2) as i64).sum();
    let r_odd: i64 = vs.iter().filter(|v| v.is_odd()).map(|v| v.r as i64).sum();
    check(lmod == r_odd, "even vertices with odd l do not match r over odd vertices")?;
    let odd_odd = vs.iter().filter(|v| v.is_odd() && parent_is_odd(tree, v)).count();
    let s_odd: usize = vs.iter().filter(|v| v.is_odd()).map(|v| v.s).sum();
    check(odd_odd == s_odd, "odd vertices with odd parent do not match s over odd vertices")?;
    Ok(())
}
