//! Plumbing graphs, their intersection forms, and standard families.
//!
//! A plumbing graph is a weighted multigraph: vertices carry integer weights
//! (framings), edges carry positive multiplicities. The intersection form has
//! the weights on the diagonal and edge multiplicities off the diagonal.

use crate::error::{Error, Result};
use crate::matrix::{Int, IntMatrix};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Weighted multigraph describing a plumbed 4-manifold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlumbingGraph {
    labels: Vec<String>,
    weights: Vec<Int>,
    /// Canonicalized: key (a, b) with a < b, value = multiplicity >= 1.
    edges: BTreeMap<(usize, usize), u32>,
}

/// Rational-ball handle data attached to a graph file: the pairing of the
/// handle circle with each vertex sphere, plus its framing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HandleSpec {
    pub pairings: Vec<Int>,
    pub framing: Int,
}

/// Classification by the number of bad vertices (valence exceeding the
/// negated weight).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BadVertexClass {
    /// At most one bad vertex: the box maximum computes every correction
    /// term.
    Sleek,
    /// Exactly two bad vertices: only the even part is pinned down.
    EvenPartOnly,
    /// Three or more bad vertices: no support from the box maximum.
    Unsupported,
}

impl fmt::Display for BadVertexClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BadVertexClass::Sleek => "sleek",
            BadVertexClass::EvenPartOnly => "even-part-only",
            BadVertexClass::Unsupported => "unsupported",
        };
        write!(f, "{}", s)
    }
}

impl PlumbingGraph {
    pub fn new() -> Self {
        PlumbingGraph {
            labels: Vec::new(),
            weights: Vec::new(),
            edges: BTreeMap::new(),
        }
    }

    /// Linear chain with the given weights; labels `v1, v2, ...`.
    pub fn chain(weights: &[i64]) -> Self {
        Self::chain_int(&weights.iter().map(|&w| Int::from(w)).collect::<Vec<_>>())
    }

    pub fn chain_int(weights: &[Int]) -> Self {
        let mut g = PlumbingGraph::new();
        for (i, w) in weights.iter().enumerate() {
            g.add_vertex(&format!("v{}", i + 1), w.clone());
        }
        for i in 1..weights.len() {
            g.add_edge(i - 1, i).expect("chain edges are valid");
        }
        g
    }

    pub fn add_vertex(&mut self, label: &str, weight: Int) -> usize {
        self.labels.push(label.to_string());
        self.weights.push(weight);
        self.weights.len() - 1
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<()> {
        self.add_edge_multi(a, b, 1)
    }

    pub fn add_edge_multi(&mut self, a: usize, b: usize, mult: u32) -> Result<()> {
        let n = self.vertex_count();
        if a >= n || b >= n {
            return Err(Error::BadGraph(format!(
                "edge ({}, {}) references a missing vertex",
                a, b
            )));
        }
        if a == b {
            return Err(Error::BadGraph(format!("loop edge at vertex {}", a)));
        }
        if mult == 0 {
            return Err(Error::BadGraph("edge multiplicity must be positive".into()));
        }
        let key = (a.min(b), a.max(b));
        *self.edges.entry(key).or_insert(0) += mult;
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.weights.len()
    }

    pub fn weight(&self, i: usize) -> &Int {
        &self.weights[i]
    }

    pub fn weights(&self) -> &[Int] {
        &self.weights
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.edges.iter().map(|(&(a, b), &m)| (a, b, m))
    }

    /// Sum of incident edge multiplicities.
    pub fn valence(&self, v: usize) -> u32 {
        self.edges
            .iter()
            .filter(|(&(a, b), _)| a == v || b == v)
            .map(|(_, &m)| m)
            .sum()
    }

    /// Vertices whose valence exceeds the negated weight.
    pub fn bad_vertices(&self) -> Vec<usize> {
        (0..self.vertex_count())
            .filter(|&v| Int::from(self.valence(v)) > -self.weight(v))
            .collect()
    }

    pub fn bad_vertex_class(&self) -> BadVertexClass {
        match self.bad_vertices().len() {
            0 | 1 => BadVertexClass::Sleek,
            2 => BadVertexClass::EvenPartOnly,
            _ => BadVertexClass::Unsupported,
        }
    }

    /// True when the graph is a forest and every edge has multiplicity one
    /// (the precondition for full paths).
    pub fn is_tree_form(&self) -> bool {
        if self.edges.values().any(|&m| m != 1) {
            return false;
        }
        // Union-find cycle detection.
        let mut parent: Vec<usize> = (0..self.vertex_count()).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let r = find(parent, parent[x]);
                parent[x] = r;
            }
            parent[x]
        }
        for (&(a, b), _) in &self.edges {
            let ra = find(&mut parent, a);
            let rb = find(&mut parent, b);
            if ra == rb {
                return false;
            }
            parent[ra] = rb;
        }
        true
    }

    /// The symmetric intersection form: weights on the diagonal, edge
    /// multiplicities off it.
    pub fn intersection_form(&self) -> IntMatrix {
        let n = self.vertex_count();
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, self.weights[i].clone());
        }
        for (&(a, b), &mult) in &self.edges {
            m.set(a, b, Int::from(mult));
            m.set(b, a, Int::from(mult));
        }
        m
    }

    /// Blow down a vertex of weight +1 or -1, staying in graph form.
    ///
    /// Errors when the resulting pairing matrix has a positive off-diagonal
    /// entry that no multigraph can represent... which cannot happen for
    /// weight -1, and for weight +1 requires the vertex to pair at most once
    /// with everything (e.g. a leaf).
    pub fn blow_down(&self, v: usize) -> Result<PlumbingGraph> {
        let form = self.intersection_form();
        let reduced = blow_down_form(&form, v)?;
        let keep: Vec<usize> = (0..self.vertex_count()).filter(|&i| i != v).collect();
        let mut g = PlumbingGraph::new();
        for (new_i, &old_i) in keep.iter().enumerate() {
            g.add_vertex(self.label(old_i), reduced.get(new_i, new_i).clone());
        }
        for i in 0..keep.len() {
            for j in (i + 1)..keep.len() {
                let e = reduced.get(i, j);
                if e.is_negative() {
                    return Err(Error::BlowDownNotGraph { i, j });
                }
                if !e.is_zero() {
                    let m = u32::try_from(e).map_err(|_| Error::BlowDownNotGraph { i, j })?;
                    g.add_edge_multi(i, j, m)?;
                }
            }
        }
        Ok(g)
    }
}

impl Default for PlumbingGraph {
    fn default() -> Self {
        Self::new()
    }
}

/// Blow down a unit-weight basis vector at the form level:
/// `A'_ij = A_ij - A_iv * A_jv / A_vv` over the remaining indices.
/// Preserves |det|.
pub fn blow_down_form(form: &IntMatrix, v: usize) -> Result<IntMatrix> {
    let n = form.require_square()?;
    if v >= n {
        return Err(Error::BadGraph(format!("blow-down vertex {} out of range", v)));
    }
    let w = form.get(v, v).clone();
    if w.abs() != Int::one() {
        return Err(Error::BlowDownWeight {
            vertex: v,
            weight: w.to_string(),
        });
    }
    let keep: Vec<usize> = (0..n).filter(|&i| i != v).collect();
    let mut out = IntMatrix::zeros(n - 1, n - 1);
    for (ii, &i) in keep.iter().enumerate() {
        for (jj, &j) in keep.iter().enumerate() {
            let correction = form.get(i, v) * form.get(j, v) * &w; // /w == *w for |w|=1
            out.set(ii, jj, form.get(i, j) - correction);
        }
    }
    Ok(out)
}

/// Ceiling (Hirzebruch-Jung) continued fraction expansion of `p/q`:
/// `p/q = b1 - 1/(b2 - 1/(... - 1/bk))` with every `b >= 2`.
/// Requires `p > q >= 1` and `gcd(p, q) = 1`.
pub fn cfrac_expand(p: &Int, q: &Int) -> Result<Vec<Int>> {
    if q < &Int::one() || p <= q || !p.gcd(q).is_one() {
        return Err(Error::BadFraction {
            p: p.to_string(),
            q: q.to_string(),
        });
    }
    let mut entries = Vec::new();
    let mut p = p.clone();
    let mut q = q.clone();
    while !q.is_zero() {
        // ceil(p / q) for q > 0
        let b = (&p + &q - Int::one()).div_floor(&q);
        let next_q = &b * &q - &p;
        entries.push(b);
        p = q;
        q = next_q;
    }
    Ok(entries)
}

/// Evaluate a ceiling continued fraction `[b1, ..., bk]` back to `(p, q)`
/// in lowest terms. Every entry must be `>= 2`.
pub fn cfrac_eval(entries: &[Int]) -> Result<(Int, Int)> {
    for (i, b) in entries.iter().enumerate() {
        if b < &Int::from(2) {
            return Err(Error::BadCfracEntry {
                index: i,
                value: b.to_string(),
            });
        }
    }
    let mut num = Int::one();
    let mut den = Int::zero();
    for b in entries.iter().rev() {
        // value = b - 1/prev  =>  (b*num - den) / num
        let new_num = b * &num - &den;
        den = num;
        num = new_num;
    }
    Ok((num, den))
}

/// Linear chain bounding the lens space that a rational ball fills:
/// weights `-b_k, ..., -b_1` left to right from the expansion of
/// `p^2 / (p*q - 1)`. Requires `0 < q < p`, `gcd(p, q) = 1`.
pub fn park_chain(p: &Int, q: &Int) -> Result<PlumbingGraph> {
    if q < &Int::one() || q >= p || !p.gcd(q).is_one() {
        return Err(Error::BadLensParameters {
            p: p.to_string(),
            q: q.to_string(),
        });
    }
    let p2 = p * p;
    let pq1 = p * q - Int::one();
    let entries = cfrac_expand(&p2, &pq1)?;
    let weights: Vec<Int> = entries.iter().map(|b| -b).collect();
    Ok(PlumbingGraph::chain_int(&weights))
}

/// Three-legged tree with center weight -4: the branch toward the leaf of
/// weight -(p+1) carries `max(r-2, 0)` spheres of weight -2, the branch
/// toward -(q+1) carries `max(p-2, 0)`, and the branch toward -(r+1)
/// carries `max(q-2, 0)`. Requires `p, q, r >= 2`.
pub fn wahl_graph(p: u32, q: u32, r: u32) -> Result<PlumbingGraph> {
    if p < 2 || q < 2 || r < 2 {
        return Err(Error::BadGraph(format!(
            "wahl graph needs p, q, r >= 2; got ({}, {}, {})",
            p, q, r
        )));
    }
    let mut g = PlumbingGraph::new();
    let center = g.add_vertex("c", Int::from(-4));
    let branches: [(u32, u32); 3] = [(r - 2, p + 1), (p - 2, q + 1), (q - 2, r + 1)];
    for (bi, &(twos, leaf)) in branches.iter().enumerate() {
        let mut prev = center;
        for t in 0..twos {
            let v = g.add_vertex(&format!("b{}t{}", bi + 1, t + 1), Int::from(-2));
            g.add_edge(prev, v)?;
            prev = v;
        }
        let v = g.add_vertex(&format!("b{}leaf", bi + 1), Int::from(-(i64::from(leaf))));
        g.add_edge(prev, v)?;
    }
    Ok(g)
}

/// Two-parameter family: a chain `-m, -3, -2, ..., -2` (with n-1 spheres of
/// weight -2), and a branch at the -3 vertex consisting of a -1 sphere
/// joined to a -2 sphere and a sphere of weight `m - n - 2` (verbatim; blow
/// the unit vertex down to reach the definite model). Requires `m > n >= 1`.
pub fn mn_family_graph(m: i64, n: i64) -> Result<PlumbingGraph> {
    if n < 1 || m <= n {
        return Err(Error::BadGraph(format!(
            "family graph needs m > n >= 1; got ({}, {})",
            m, n
        )));
    }
    let mut g = PlumbingGraph::new();
    let v0 = g.add_vertex("v1", Int::from(-m));
    let v1 = g.add_vertex("v2", Int::from(-3));
    let mut prev = v1;
    for t in 0..(n - 1) {
        let v = g.add_vertex(&format!("v{}", t + 3), Int::from(-2));
        g.add_edge(prev, v)?;
        prev = v;
    }
    g.add_edge(v0, v1)?;
    let b1 = g.add_vertex("u1", Int::from(-1));
    g.add_edge(v1, b1)?;
    let b2 = g.add_vertex("u2", Int::from(-2));
    g.add_edge(b1, b2)?;
    let b3 = g.add_vertex("u3", Int::from(m - n - 2));
    g.add_edge(b1, b3)?;
    Ok(g)
}

/// Which fraction each Seifert ray expands through.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RayConvention {
    /// Expand `alpha / beta` (default).
    AlphaOverBeta,
    /// Expand `alpha / (alpha - beta)`.
    BetaOverAlpha,
}

/// Star-shaped plumbing for Seifert data: central vertex of weight `b`, one
/// chain per ray `(alpha, beta)` with `alpha >= 2`, `1 <= beta < alpha`,
/// `gcd(alpha, beta) = 1`. The chain weights are the negated expansion
/// entries, first entry adjacent to the center.
pub fn seifert_star(b: &Int, rays: &[(Int, Int)], convention: RayConvention) -> Result<PlumbingGraph> {
    let mut g = PlumbingGraph::new();
    let center = g.add_vertex("c", b.clone());
    for (idx, (alpha, beta)) in rays.iter().enumerate() {
        if alpha < &Int::from(2) || beta < &Int::one() || beta >= alpha || !alpha.gcd(beta).is_one()
        {
            return Err(Error::BadSeifertRay {
                index: idx,
                alpha: alpha.to_string(),
                beta: beta.to_string(),
            });
        }
        let frac_den = match convention {
            RayConvention::AlphaOverBeta => beta.clone(),
            RayConvention::BetaOverAlpha => alpha - beta,
        };
        let entries = cfrac_expand(alpha, &frac_den)?;
        let mut prev = center;
        for (t, e) in entries.iter().enumerate() {
            let v = g.add_vertex(&format!("r{}s{}", idx + 1, t + 1), -e);
            g.add_edge(prev, v)?;
            prev = v;
        }
    }
    Ok(g)
}

/// Parsed contents of a graph file: the plumbing plus an optional handle line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphFile {
    pub graph: PlumbingGraph,
    pub handle: Option<HandleSpec>,
}

/// Parse the plain-text graph format:
///
/// ```text
/// # comment
/// v <label> <weight>
/// e <labelA> <labelB>      (repeat a pair to raise multiplicity)
/// h <k1> <k2> ... <kn> ; <framing>
/// ```
pub fn parse_graph(text: &str) -> Result<GraphFile> {
    let ctx = "graph";
    let mut g = PlumbingGraph::new();
    let mut handle = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let src = raw.trim();
        if src.is_empty() || src.starts_with('#') {
            continue;
        }
        let mut parts = src.split_whitespace();
        let tag = parts.next().unwrap();
        match tag {
            "v" => {
                let label = parts.next().ok_or_else(|| Error::Parse {
                    context: ctx,
                    line,
                    message: "v line needs <label> <weight>".into(),
                })?;
                let weight = parts.next().ok_or_else(|| Error::Parse {
                    context: ctx,
                    line,
                    message: "v line needs a weight".into(),
                })?;
                if parts.next().is_some() {
                    return Err(Error::Parse {
                        context: ctx,
                        line,
                        message: "v line has trailing tokens".into(),
                    });
                }
                if g.vertex_by_label(label).is_some() {
                    return Err(Error::Parse {
                        context: ctx,
                        line,
                        message: format!("duplicate vertex label '{}'", label),
                    });
                }
                let w: Int = weight.parse().map_err(|_| Error::Parse {
                    context: ctx,
                    line,
                    message: format!("bad weight '{}'", weight),
                })?;
                g.add_vertex(label, w);
            }
            "e" => {
                let a = parts.next().ok_or_else(|| Error::Parse {
                    context: ctx,
                    line,
                    message: "e line needs two labels".into(),
                })?;
                let b = parts.next().ok_or_else(|| Error::Parse {
                    context: ctx,
                    line,
                    message: "e line needs two labels".into(),
                })?;
                if parts.next().is_some() {
                    return Err(Error::Parse {
                        context: ctx,
                        line,
                        message: "e line has trailing tokens".into(),
                    });
                }
                let ia = g.vertex_by_label(a).ok_or_else(|| Error::Parse {
                    context: ctx,
                    line,
                    message: format!("unknown vertex '{}'", a),
                })?;
                let ib = g.vertex_by_label(b).ok_or_else(|| Error::Parse {
                    context: ctx,
                    line,
                    message: format!("unknown vertex '{}'", b),
                })?;
                g.add_edge(ia, ib).map_err(|e| Error::Parse {
                    context: ctx,
                    line,
                    message: e.to_string(),
                })?;
            }
            "h" => {
                if handle.is_some() {
                    return Err(Error::Parse {
                        context: ctx,
                        line,
                        message: "multiple h lines".into(),
                    });
                }
                let rest: Vec<&str> = parts.collect();
                let semi = rest.iter().position(|&t| t == ";").ok_or_else(|| Error::Parse {
                    context: ctx,
                    line,
                    message: "h line needs '; <framing>'".into(),
                })?;
                if semi + 2 != rest.len() {
                    return Err(Error::Parse {
                        context: ctx,
                        line,
                        message: "h line needs exactly one framing after ';'".into(),
                    });
                }
                let mut pairings = Vec::new();
                for tok in &rest[..semi] {
                    let v: Int = tok.parse().map_err(|_| Error::Parse {
                        context: ctx,
                        line,
                        message: format!("bad pairing '{}'", tok),
                    })?;
                    pairings.push(v);
                }
                if pairings.len() != g.vertex_count() {
                    return Err(Error::Parse {
                        context: ctx,
                        line,
                        message: format!(
                            "h line has {} pairings for {} vertices (declare vertices first)",
                            pairings.len(),
                            g.vertex_count()
                        ),
                    });
                }
                let framing: Int = rest[semi + 1].parse().map_err(|_| Error::Parse {
                    context: ctx,
                    line,
                    message: format!("bad framing '{}'", rest[semi + 1]),
                })?;
                handle = Some(HandleSpec { pairings, framing });
            }
            _ => {
                return Err(Error::Parse {
                    context: ctx,
                    line,
                    message: format!("unknown line tag '{}'", tag),
                });
            }
        }
    }
    if g.vertex_count() == 0 {
        return Err(Error::Parse {
            context: ctx,
            line: 0,
            message: "no vertices".into(),
        });
    }
    Ok(GraphFile { graph: g, handle })
}

/// Serialize a graph (and optional handle) in the same format `parse_graph`
/// reads.
pub fn format_graph(g: &PlumbingGraph, handle: Option<&HandleSpec>) -> String {
    let mut out = String::new();
    for i in 0..g.vertex_count() {
        out.push_str(&format!("v {} {}\n", g.label(i), g.weight(i)));
    }
    for (a, b, m) in g.edges() {
        for _ in 0..m {
            out.push_str(&format!("e {} {}\n", g.label(a), g.label(b)));
        }
    }
    if let Some(h) = handle {
        let ks: Vec<String> = h.pairings.iter().map(|k| k.to_string()).collect();
        out.push_str(&format!("h {} ; {}\n", ks.join(" "), h.framing));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::vec_int;

    #[test]
    fn cfrac_fixtures() {
        let cases: [(i64, i64, &[i64]); 8] = [
            (25, 14, &[2, 5, 3]),
            (25, 9, &[3, 5, 2]),
            (25, 7, &[4, 3, 2, 2]),
            (25, 4, &[7, 2, 2, 2]),
            (25, 6, &[5, 2, 2, 2, 2, 2]),
            (9, 2, &[5, 2]),
            (9, 7, &[2, 2, 2, 3]),
            (4, 1, &[4]),
        ];
        for (p, q, want) in cases {
            let got = cfrac_expand(&Int::from(p), &Int::from(q)).unwrap();
            assert_eq!(got, vec_int(want), "cfrac {}:{}", p, q);
            let (bp, bq) = cfrac_eval(&got).unwrap();
            assert_eq!((bp, bq), (Int::from(p), Int::from(q)), "round trip {}/{}", p, q);
        }
    }

    #[test]
    fn cfrac_rejects_bad_input() {
        assert!(cfrac_expand(&Int::from(4), &Int::from(4)).is_err());
        assert!(cfrac_expand(&Int::from(6), &Int::from(4)).is_err());
        assert!(cfrac_eval(&vec_int(&[2, 1, 3])).is_err());
    }

    #[test]
    fn park_chain_examples() {
        let g = park_chain(&Int::from(5), &Int::from(1)).unwrap();
        assert_eq!(g.weights(), &vec_int(&[-7, -2, -2, -2])[..]);
        let g = park_chain(&Int::from(5), &Int::from(3)).unwrap();
        assert_eq!(g.weights(), &vec_int(&[-2, -5, -3])[..]);
        let g = park_chain(&Int::from(5), &Int::from(2)).unwrap();
        assert_eq!(g.weights(), &vec_int(&[-3, -5, -2])[..]);
        // |det| = p^2 for every park chain.
        for (p, q) in [(2i64, 1i64), (3, 1), (3, 2), (5, 2), (7, 3), (9, 4)] {
            let g = park_chain(&Int::from(p), &Int::from(q)).unwrap();
            let det = g.intersection_form().det().unwrap();
            assert_eq!(det.clone().abs(), Int::from(p * p), "det for ({}, {})", p, q);
            assert!(g.intersection_form().is_negative_definite().unwrap());
        }
    }

    #[test]
    fn wahl_graph_forms() {
        let g = wahl_graph(2, 2, 2).unwrap();
        let form = g.intersection_form();
        let expect = IntMatrix::from_i64(&[
            &[-4, 1, 1, 1],
            &[1, -3, 0, 0],
            &[1, 0, -3, 0],
            &[1, 0, 0, -3],
        ]);
        assert_eq!(form, expect);
        assert_eq!(form.det().unwrap(), Int::from(81));

        let g = wahl_graph(2, 2, 3).unwrap();
        assert_eq!(g.weights(), &vec_int(&[-4, -2, -3, -3, -4])[..]);
        let edges: Vec<(usize, usize, u32)> = g.edges().collect();
        assert_eq!(edges, vec![(0, 1, 1), (0, 3, 1), (0, 4, 1), (1, 2, 1)]);
        let det = g.intersection_form().det().unwrap();
        assert_eq!(det, Int::from(-169));
        assert!(g.intersection_form().is_negative_definite().unwrap());
        // Vertex count 1 + (p-1) + (q-1) + (r-1).
        for (p, q, r) in [(2u32, 2u32, 2u32), (2, 2, 3), (3, 4, 5), (2, 5, 2)] {
            let g = wahl_graph(p, q, r).unwrap();
            assert_eq!(
                g.vertex_count() as u32,
                1 + (p - 1) + (q - 1) + (r - 1),
                "vertex count for ({}, {}, {})",
                p,
                q,
                r
            );
            assert!(g.intersection_form().is_negative_definite().unwrap());
            assert!(g.bad_vertices().is_empty());
        }
    }

    #[test]
    fn family_graph_and_reduction() {
        let g = mn_family_graph(4, 1).unwrap();
        assert_eq!(g.weights(), &vec_int(&[-4, -3, -1, -2, 1])[..]);
        // Blow down the +1 leaf: exactly the (-4, -3, -2, -2) chain.
        let reduced = g.blow_down(4).unwrap();
        assert_eq!(reduced.weights(), &vec_int(&[-4, -3, -2, -2])[..]);
        let form = reduced.intersection_form();
        assert_eq!(
            form,
            PlumbingGraph::chain(&[-4, -3, -2, -2]).intersection_form()
        );
        // |det| preserved by the blow-down.
        assert_eq!(
            g.intersection_form().det().unwrap().abs(),
            form.det().unwrap().abs()
        );

        let g = mn_family_graph(5, 2).unwrap();
        assert_eq!(g.intersection_form().det().unwrap(), Int::from(-49));
        let reduced = g.blow_down(5).unwrap();
        assert!(reduced.intersection_form().is_negative_definite().unwrap());
        assert_eq!(
            reduced.intersection_form().det().unwrap().abs(),
            Int::from(49)
        );
    }

    #[test]
    fn blow_down_form_rejects_non_unit() {
        let m = PlumbingGraph::chain(&[-3, -2]).intersection_form();
        assert!(matches!(
            blow_down_form(&m, 0),
            Err(Error::BlowDownWeight { .. })
        ));
    }

    #[test]
    fn seifert_fixtures() {
        // (b = -1; rays 2, 3, 7): the E8-like star with determinant 1.
        let rays = [
            (Int::from(2), Int::from(1)),
            (Int::from(3), Int::from(1)),
            (Int::from(7), Int::from(1)),
        ];
        let g = seifert_star(&Int::from(-1), &rays, RayConvention::AlphaOverBeta).unwrap();
        assert_eq!(g.weights(), &vec_int(&[-1, -2, -3, -7])[..]);
        assert_eq!(g.intersection_form().det().unwrap(), Int::from(1));
        assert!(g.intersection_form().is_negative_definite().unwrap());
        assert_eq!(g.bad_vertices(), vec![0]);
        assert_eq!(g.bad_vertex_class(), BadVertexClass::Sleek);

        // (b = -2; one ray 2/1): the (-2, -2) chain, alpha = 2 allowed.
        let rays = [(Int::from(2), Int::from(1))];
        let g = seifert_star(&Int::from(-2), &rays, RayConvention::AlphaOverBeta).unwrap();
        assert_eq!(g.weights(), &vec_int(&[-2, -2])[..]);
        assert_eq!(g.intersection_form().det().unwrap(), Int::from(3));

        // Three rays of 1/3 around a -3 center.
        let rays = [
            (Int::from(3), Int::from(1)),
            (Int::from(3), Int::from(1)),
            (Int::from(3), Int::from(1)),
        ];
        let g = seifert_star(&Int::from(-3), &rays, RayConvention::AlphaOverBeta).unwrap();
        assert_eq!(g.intersection_form().det().unwrap(), Int::from(54));

        // Convention flip expands alpha / (alpha - beta): 5/3 = [2, 3].
        let rays = [(Int::from(5), Int::from(2))];
        let g = seifert_star(&Int::from(-2), &rays, RayConvention::BetaOverAlpha).unwrap();
        assert_eq!(g.weights(), &vec_int(&[-2, -2, -3])[..]);
        let g = seifert_star(&Int::from(-2), &rays, RayConvention::AlphaOverBeta).unwrap();
        assert_eq!(g.weights(), &vec_int(&[-2, -3, -2])[..]);

        let bad = [(Int::from(4), Int::from(2))];
        assert!(matches!(
            seifert_star(&Int::from(-2), &bad, RayConvention::AlphaOverBeta),
            Err(Error::BadSeifertRay { .. })
        ));
    }

    #[test]
    fn bad_vertex_classes() {
        assert_eq!(
            PlumbingGraph::chain(&[-3, -5, -2]).bad_vertex_class(),
            BadVertexClass::Sleek
        );
        let mut g = PlumbingGraph::chain(&[-1, -1, -8]);
        // -1 weights with valence 2: two bad vertices.
        g.add_edge(0, 2).unwrap();
        assert_eq!(g.bad_vertices(), vec![0, 1]);
        assert_eq!(g.bad_vertex_class(), BadVertexClass::EvenPartOnly);
    }

    #[test]
    fn tree_form_detection() {
        assert!(PlumbingGraph::chain(&[-2, -2, -2]).is_tree_form());
        let mut cyc = PlumbingGraph::chain(&[-3, -3, -3]);
        cyc.add_edge(0, 2).unwrap();
        assert!(!cyc.is_tree_form());
        let mut dbl = PlumbingGraph::chain(&[-3, -3]);
        dbl.add_edge(0, 1).unwrap();
        assert!(!dbl.is_tree_form());
        // Disconnected forests are fine.
        let mut forest = PlumbingGraph::new();
        forest.add_vertex("a", Int::from(-2));
        forest.add_vertex("b", Int::from(-2));
        assert!(forest.is_tree_form());
    }

    #[test]
    fn parse_and_format_round_trip() {
        let text = "# sample\nv a -4\nv b -3\nv c -3\nv d -3\ne a b\ne a c\ne a d\nh 1 -1 1 0 ; -1\n";
        let parsed = parse_graph(text).unwrap();
        assert_eq!(parsed.graph.vertex_count(), 4);
        assert_eq!(
            parsed.handle,
            Some(HandleSpec {
                pairings: vec_int(&[1, -1, 1, 0]),
                framing: Int::from(-1),
            })
        );
        let out = format_graph(&parsed.graph, parsed.handle.as_ref());
        let reparsed = parse_graph(&out).unwrap();
        assert_eq!(reparsed, parsed);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_graph("v a -2\ne a z\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_graph("v a -2\nv a -3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_graph("z 1 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn multiplicity_via_repeated_edges() {
        let mut g = PlumbingGraph::new();
        g.add_vertex("a", Int::from(-3));
        g.add_vertex("b", Int::from(-3));
        g.add_edge(0, 1).unwrap();
        g.add_edge(1, 0).unwrap();
        let form = g.intersection_form();
        assert_eq!(form.get(0, 1), &Int::from(2));
        assert_eq!(g.valence(0), 2);
    }
}
