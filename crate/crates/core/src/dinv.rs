//! Full paths of characteristic covectors and correction terms
//! (d-invariants) from exact box maxima.
//!
//! A full path pushes a characteristic covector through moves
//! `K -> K + 2 A e_j`, allowed exactly when `K_j` sits at the top of its
//! range (`K_j = -m_j` for diagonal entry `m_j`). A path stops when some
//! coordinate overshoots the top (condition 1) or every coordinate lies in
//! the band `m_i <= K_i <= -m_i - 2` (condition 2).
//!
//! The d-invariant of a spin-c class is `max (K^2 + b2) / 4` over the class;
//! the maximum is taken over the full characteristic box and re-checked on a
//! widened box until it stabilizes.

use crate::error::{Error, Result};
use crate::matrix::{Int, Rat};
use crate::plumbing::PlumbingGraph;
use crate::spinc::{BoxPreset, CharLattice};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// Why a full path stopped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathTerminal {
    /// Condition 1: some coordinate exceeds the top of its range.
    Overshoot { vertex: usize },
    /// Condition 2: every coordinate lies in `[m_i, -m_i - 2]`.
    InBand,
}

/// A maximal sequence of moves from one covector, with the greedy
/// (lowest eligible vertex) choice at every step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullPath {
    /// Visited covectors, starting covector first, terminal last.
    pub vectors: Vec<Vec<Int>>,
    /// Vertex moved at each step (`vectors.len() - 1` entries).
    pub moves: Vec<usize>,
    pub terminal: PathTerminal,
}

impl FullPath {
    pub fn initial(&self) -> &[Int] {
        &self.vectors[0]
    }

    pub fn terminal_vector(&self) -> &[Int] {
        self.vectors.last().expect("paths are never empty")
    }

    /// Number of covectors visited (a taut start gives length 1).
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Taut: already in band with no moves.
    pub fn is_taut(&self) -> bool {
        self.moves.is_empty() && self.terminal == PathTerminal::InBand
    }
}

const MAX_PATH_STEPS: usize = 1_000_000;

fn classify(weights: &[Int], k: &[Int]) -> Option<PathTerminal> {
    for (i, (w, v)) in weights.iter().zip(k).enumerate() {
        if v > &-w {
            return Some(PathTerminal::Overshoot { vertex: i });
        }
    }
    let in_band = weights
        .iter()
        .zip(k)
        .all(|(w, v)| v >= w && *v <= -w - Int::from(2));
    if in_band {
        Some(PathTerminal::InBand)
    } else {
        None
    }
}

fn eligible(weights: &[Int], k: &[Int]) -> Vec<usize> {
    weights
        .iter()
        .zip(k)
        .enumerate()
        .filter(|(_, (w, v))| *v == &-*w)
        .map(|(i, _)| i)
        .collect()
}

fn apply_move(form: &crate::matrix::IntMatrix, k: &[Int], j: usize) -> Vec<Int> {
    k.iter()
        .enumerate()
        .map(|(i, v)| v + Int::from(2) * form.get(i, j))
        .collect()
}

fn check_path_start(g: &PlumbingGraph, k0: &[Int]) -> Result<()> {
    if !g.is_tree_form() {
        return Err(Error::NotTreeForm);
    }
    if k0.len() != g.vertex_count() {
        return Err(Error::DimensionMismatch {
            expected: g.vertex_count(),
            got: k0.len(),
        });
    }
    for (i, (w, v)) in g.weights().iter().zip(k0).enumerate() {
        if (v - w).is_odd() {
            return Err(Error::NotCharacteristic { index: i });
        }
        if v < w {
            return Err(Error::BadGraph(format!(
                "path start coordinate {} is below the box floor",
                i
            )));
        }
    }
    Ok(())
}

/// Run the greedy full path from `k0` on a forest with single edges.
pub fn full_path(g: &PlumbingGraph, k0: &[Int]) -> Result<FullPath> {
    check_path_start(g, k0)?;
    let weights = g.weights();
    let form = g.intersection_form();
    let mut vectors = vec![k0.to_vec()];
    let mut moves = Vec::new();
    for _ in 0..MAX_PATH_STEPS {
        let k = vectors.last().unwrap();
        if let Some(t) = classify(weights, k) {
            return Ok(FullPath {
                terminal: t,
                vectors,
                moves,
            });
        }
        let js = eligible(weights, k);
        let &j = js
            .first()
            .expect("a non-terminal covector has an eligible vertex");
        let next: Vec<Int> = k
            .iter()
            .enumerate()
            .map(|(i, v)| v + Int::from(2) * form.get(i, j))
            .collect();
        moves.push(j);
        vectors.push(next);
    }
    Err(Error::PathDidNotTerminate)
}

/// One spin-c class in a d-invariant table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassRow {
    /// Class label from the Smith transform (see `CharLattice::residue`).
    pub residue: Vec<Int>,
    /// Canonical representative: lexicographically least member of the
    /// class in the first box that contains one.
    pub rep: Vec<Int>,
    /// Correction term `max (K^2 + b2) / 4`.
    pub d: Rat,
    /// Lexicographically least covector attaining the maximum.
    pub witness: Vec<Int>,
}

/// Exact d-invariant table for every spin-c class of a form.
#[derive(Clone, Debug)]
pub struct DTable {
    /// Rows sorted by canonical representative.
    pub rows: Vec<ClassRow>,
    /// True when the last two box scans produced identical values.
    pub stabilized: bool,
    /// Number of widened scans performed (0 = only the default box).
    pub widen_rounds: u32,
    pub b2: usize,
    pub det: Int,
    index: BTreeMap<Vec<Int>, usize>,
}

impl DTable {
    pub fn lookup(&self, residue: &[Int]) -> Option<&ClassRow> {
        self.index.get(residue).map(|&i| &self.rows[i])
    }

    pub fn lookup_vector(&self, ctx: &CharLattice, k: &[Int]) -> Option<&ClassRow> {
        self.lookup(&ctx.residue(k))
    }

    /// All d values, sorted ascending (with multiplicity).
    pub fn d_spectrum(&self) -> Vec<Rat> {
        let mut ds: Vec<Rat> = self.rows.iter().map(|r| r.d.clone()).collect();
        ds.sort();
        ds
    }

    pub fn zero_d_rows(&self) -> Vec<&ClassRow> {
        self.rows.iter().filter(|r| r.d.is_zero()).collect()
    }
}

/// Options for `d_table`.
#[derive(Clone, Copy, Debug)]
pub struct DTableOptions {
    /// Maximum widened scans after the default box (each widens by 2).
    pub max_widen: u32,
}

impl Default for DTableOptions {
    fn default() -> Self {
        DTableOptions { max_widen: 3 }
    }
}

struct Scan {
    /// residue -> (best scaled square, witness, first-seen member).
    best: BTreeMap<Vec<Int>, (Int, Vec<Int>, Vec<Int>)>,
}

/// Entry bound for the machine-word scan; keeps every intermediate product
/// provably inside i64 (checked with i128 row sums before scanning).
const FAST_ENTRY_BOUND: i64 = 1 << 31;
const FAST_SUM_BOUND: i128 = 1 << 62;

struct FastCtx {
    n: usize,
    /// Row-major Smith row transform.
    u: Vec<i64>,
    /// Row-major adjugate of the form.
    adj: Vec<i64>,
    /// Residue moduli `2 d_i`.
    two_d: Vec<i64>,
}

fn to_small(v: &Int) -> Option<i64> {
    use num_traits::ToPrimitive;
    let x = v.to_i64()?;
    if x.abs() < FAST_ENTRY_BOUND {
        Some(x)
    } else {
        None
    }
}

fn fast_ctx(ctx: &CharLattice) -> Option<FastCtx> {
    let n = ctx.rank();
    let mut u = Vec::with_capacity(n * n);
    let mut adj = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            u.push(to_small(ctx.u_transform().get(i, j))?);
            adj.push(to_small(ctx.adjugate_ref().get(i, j))?);
        }
    }
    let two_d = ctx
        .invariant_factors()
        .iter()
        .map(|d| to_small(d).map(|x| 2 * x))
        .collect::<Option<Vec<i64>>>()?;
    Some(FastCtx { n, u, adj, two_d })
}

/// Exact machine-word scan of the box. Returns None when any entry or any
/// worst-case row sum could leave the guarded i64 range; the caller then
/// falls back to big integers. Semantics are identical to the big-integer
/// scan (same lexicographic order, same first-seen and strictly-better
/// tie handling).
fn scan_box_fast(ctx: &CharLattice, bx: &crate::spinc::CharBox) -> Option<Scan> {
    let fc = fast_ctx(ctx)?;
    let n = fc.n;
    if n == 0 {
        return None;
    }
    let lo: Vec<i64> = bx.lo.iter().map(to_small).collect::<Option<_>>()?;
    let hi: Vec<i64> = bx.hi.iter().map(to_small).collect::<Option<_>>()?;
    let bound: Vec<i128> = lo
        .iter()
        .zip(&hi)
        .map(|(l, h)| (l.abs().max(h.abs())) as i128)
        .collect();
    // Worst-case |(U K)_i| and |(adj K)_i| per row, then the worst |K^T adj K|.
    let mut max_adj_row: i128 = 0;
    for i in 0..n {
        let ru: i128 = (0..n)
            .map(|j| (fc.u[i * n + j].abs() as i128) * bound[j])
            .sum();
        let ra: i128 = (0..n)
            .map(|j| (fc.adj[i * n + j].abs() as i128) * bound[j])
            .sum();
        if ru >= FAST_SUM_BOUND || ra >= FAST_SUM_BOUND {
            return None;
        }
        max_adj_row = max_adj_row.max(ra);
    }
    let qb: i128 = bound.iter().map(|b| b * max_adj_row).sum();
    if qb >= FAST_SUM_BOUND {
        return None;
    }

    let maximize_scaled = ctx.det().is_positive();
    let mut best: BTreeMap<Vec<i64>, (i64, Vec<i64>, Vec<i64>)> = BTreeMap::new();
    let mut k = lo.clone();
    let mut res = vec![0i64; n];
    let mut adjk = vec![0i64; n];
    loop {
        for i in 0..n {
            let mut su = 0i64;
            let mut sa = 0i64;
            let row = i * n;
            for j in 0..n {
                su += fc.u[row + j] * k[j];
                sa += fc.adj[row + j] * k[j];
            }
            res[i] = su.rem_euclid(fc.two_d[i]);
            adjk[i] = sa;
        }
        let q: i64 = k.iter().zip(&adjk).map(|(a, b)| a * b).sum();
        match best.get_mut(&res) {
            None => {
                best.insert(res.clone(), (q, k.clone(), k.clone()));
            }
            Some(entry) => {
                let better = if maximize_scaled {
                    q > entry.0
                } else {
                    q < entry.0
                };
                if better {
                    entry.0 = q;
                    entry.1 = k.clone();
                }
            }
        }
        // Lexicographic odometer, last coordinate fastest.
        let mut i = n;
        loop {
            if i == 0 {
                let big = best
                    .into_iter()
                    .map(|(r, (q, w, rep))| {
                        (
                            r.into_iter().map(Int::from).collect::<Vec<Int>>(),
                            (
                                Int::from(q),
                                w.into_iter().map(Int::from).collect(),
                                rep.into_iter().map(Int::from).collect(),
                            ),
                        )
                    })
                    .collect();
                return Some(Scan { best: big });
            }
            i -= 1;
            k[i] += 2;
            if k[i] <= hi[i] {
                break;
            }
            k[i] = lo[i];
        }
    }
}

fn scan_box(ctx: &CharLattice, widen: u32) -> Scan {
    let bx = ctx.char_box_widened(BoxPreset::Full, widen);
    if let Some(scan) = scan_box_fast(ctx, &bx) {
        return scan;
    }
    let maximize_scaled = ctx.det().is_positive();
    let mut best: BTreeMap<Vec<Int>, (Int, Vec<Int>, Vec<Int>)> = BTreeMap::new();
    for k in bx.iter() {
        let r = ctx.residue(&k);
        let q = ctx.square_scaled(&k);
        match best.get_mut(&r) {
            None => {
                best.insert(r, (q, k.clone(), k));
            }
            Some(entry) => {
                let better = if maximize_scaled {
                    q > entry.0
                } else {
                    q < entry.0
                };
                if better {
                    entry.0 = q;
                    entry.1 = k;
                }
            }
        }
    }
    Scan { best }
}

/// Lexicographically least member of each spin-c class, taken from the
/// earliest full box (default, then widened) that contains one. Widens up to
/// `max_widen` times; errors when classes are still missing after that.
pub(crate) fn class_reps(
    ctx: &CharLattice,
    max_widen: u32,
) -> Result<BTreeMap<Vec<Int>, Vec<Int>>> {
    use num_traits::ToPrimitive;
    let want = ctx
        .class_count()
        .to_usize()
        .ok_or_else(|| Error::ScanBound("class count exceeds addressable size".into()))?;
    let mut reps: BTreeMap<Vec<Int>, Vec<Int>> = BTreeMap::new();
    for w in 0..=max_widen {
        let scan = scan_box(ctx, w);
        for (r, (_, _, rep)) in scan.best {
            reps.entry(r).or_insert(rep);
        }
        if reps.len() == want {
            return Ok(reps);
        }
    }
    Err(Error::ScanBound(format!(
        "missing class representatives after {} widened scans",
        max_widen
    )))
}

fn scans_agree(a: &Scan, b: &Scan) -> bool {
    a.best.len() == b.best.len()
        && a.best
            .iter()
            .zip(b.best.iter())
            .all(|((ra, (qa, _, _)), (rb, (qb, _, _)))| ra == rb && qa == qb)
}

/// Compute the d-invariant of every spin-c class by exact box maxima with
/// stabilization. The form must be negative definite.
pub fn d_table(ctx: &CharLattice, opts: &DTableOptions) -> Result<DTable> {
    if !ctx.form().is_negative_definite()? {
        return Err(Error::NotNegativeDefinite);
    }
    let mut scans = vec![scan_box(ctx, 0)];
    let mut stabilized = false;
    let mut rounds = 0u32;
    for w in 1..=opts.max_widen {
        let next = scan_box(ctx, w);
        rounds = w;
        let agree = scans_agree(scans.last().unwrap(), &next);
        scans.push(next);
        if agree {
            stabilized = true;
            break;
        }
    }
    let last = scans.last().unwrap();
    let b2 = ctx.rank();
    let det = ctx.det().clone();
    let mut rows = Vec::with_capacity(last.best.len());
    for (residue, (q, last_witness, last_rep)) in &last.best {
        // Canonical rep: first scan that saw the class (its first-seen
        // member is the lex-least in that box).
        let rep = scans
            .iter()
            .find_map(|s| s.best.get(residue).map(|e| e.2.clone()))
            .unwrap_or_else(|| last_rep.clone());
        // Witness: earliest scan attaining the final value.
        let witness = scans
            .iter()
            .find_map(|s| {
                s.best
                    .get(residue)
                    .and_then(|e| if &e.0 == q { Some(e.1.clone()) } else { None })
            })
            .unwrap_or_else(|| last_witness.clone());
        let square = Rat::new(q.clone(), det.clone());
        let d = (square + Rat::from_integer(Int::from(b2 as i64)))
            / Rat::from_integer(Int::from(4));
        rows.push(ClassRow {
            residue: residue.clone(),
            rep,
            d,
            witness,
        });
    }
    rows.sort_by(|a, b| a.rep.cmp(&b.rep));
    let index = rows
        .iter()
        .enumerate()
        .map(|(i, r)| (r.residue.clone(), i))
        .collect();
    Ok(DTable {
        rows,
        stabilized,
        widen_rounds: rounds,
        b2,
        det,
        index,
    })
}

/// d-invariant of the class of one covector.
pub fn d_invariant(ctx: &CharLattice, k: &[Int], opts: &DTableOptions) -> Result<Rat> {
    ctx.require_characteristic(k)?;
    let table = d_table(ctx, opts)?;
    table
        .lookup(&ctx.residue(k))
        .map(|row| row.d.clone())
        .ok_or(Error::NotSameClass)
}

/// A spin-c class together with its sharp covectors (initial-box members of
/// square `-b2`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharpClass {
    pub residue: Vec<Int>,
    /// Sharp vectors in lexicographic order.
    pub vectors: Vec<Vec<Int>>,
}

/// All initial-box covectors of square exactly `-b2`, grouped by class.
/// Groups are ordered by their first vector.
pub fn sharp_vectors(ctx: &CharLattice) -> Result<Vec<SharpClass>> {
    if !ctx.form().is_negative_definite()? {
        return Err(Error::NotNegativeDefinite);
    }
    let target = Int::from(-(ctx.rank() as i64)) * ctx.det();
    let mut groups: BTreeMap<Vec<Int>, Vec<Vec<Int>>> = BTreeMap::new();
    for k in ctx.char_box(BoxPreset::Initial).iter() {
        if ctx.square_scaled(&k) == target {
            groups.entry(ctx.residue(&k)).or_default().push(k);
        }
    }
    let mut out: Vec<SharpClass> = groups
        .into_iter()
        .map(|(residue, vectors)| SharpClass { residue, vectors })
        .collect();
    out.sort_by(|a, b| a.vectors[0].cmp(&b.vectors[0]));
    Ok(out)
}

/// Distinct (initial-box start, condition-2 terminal) pairs for every class,
/// exploring every eligible choice at every step (not just the greedy one).
pub fn condition2_path_pairs(g: &PlumbingGraph) -> Result<BTreeMap<Vec<Int>, u64>> {
    if !g.is_tree_form() {
        return Err(Error::NotTreeForm);
    }
    let ctx = CharLattice::from_graph(g)?;
    let weights = g.weights().to_vec();
    let form = g.intersection_form();
    let mut memo: HashMap<Vec<Int>, BTreeSet<Vec<Int>>> = HashMap::new();
    let mut counts: BTreeMap<Vec<Int>, u64> = BTreeMap::new();
    for k in ctx.char_box(BoxPreset::Initial).iter() {
        let terminals = reachable_terminals(&form, &weights, k.clone(), &mut memo)?;
        let r = ctx.residue(&k);
        *counts.entry(r).or_insert(0) += terminals.len() as u64;
    }
    Ok(counts)
}

/// Memoized set of condition-2 terminals reachable from `k` (empty when all
/// branches overshoot). Iterative post-order DFS with cycle detection.
fn reachable_terminals(
    form: &crate::matrix::IntMatrix,
    weights: &[Int],
    start: Vec<Int>,
    memo: &mut HashMap<Vec<Int>, BTreeSet<Vec<Int>>>,
) -> Result<BTreeSet<Vec<Int>>> {
    if let Some(t) = memo.get(&start) {
        return Ok(t.clone());
    }
    // Stack entries: (covector, children, next child index).
    let mut on_stack: BTreeSet<Vec<Int>> = BTreeSet::new();
    let mut stack: Vec<(Vec<Int>, Vec<Vec<Int>>, usize)> = Vec::new();

    let push = |k: Vec<Int>,
                stack: &mut Vec<(Vec<Int>, Vec<Vec<Int>>, usize)>,
                on_stack: &mut BTreeSet<Vec<Int>>,
                memo: &mut HashMap<Vec<Int>, BTreeSet<Vec<Int>>>|
     -> Result<()> {
        if memo.contains_key(&k) {
            return Ok(());
        }
        if on_stack.contains(&k) {
            return Err(Error::PathDidNotTerminate);
        }
        match classify(weights, &k) {
            Some(PathTerminal::Overshoot { .. }) => {
                memo.insert(k, BTreeSet::new());
            }
            Some(PathTerminal::InBand) => {
                let mut s = BTreeSet::new();
                s.insert(k.clone());
                memo.insert(k, s);
            }
            None => {
                let children: Vec<Vec<Int>> = eligible(weights, &k)
                    .into_iter()
                    .map(|j| apply_move(form, &k, j))
                    .collect();
                on_stack.insert(k.clone());
                stack.push((k, children, 0));
            }
        }
        Ok(())
    };

    push(start.clone(), &mut stack, &mut on_stack, memo)?;
    while let Some((k, children, mut idx)) = stack.pop() {
        let mut descended = false;
        while idx < children.len() {
            let child = &children[idx];
            if memo.contains_key(child) {
                idx += 1;
                continue;
            }
            // Descend into this child first.
            stack.push((k.clone(), children.clone(), idx));
            push(child.clone(), &mut stack, &mut on_stack, memo)?;
            descended = true;
            break;
        }
        if descended {
            continue;
        }
        let mut union = BTreeSet::new();
        for child in &children {
            union.extend(memo[child].iter().cloned());
        }
        on_stack.remove(&k);
        memo.insert(k, union);
    }
    Ok(memo[&start].clone())
}
